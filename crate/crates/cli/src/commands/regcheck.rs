use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use avoidance::regularity::{
    check_lower_regular, check_regular_pair, check_upper_extensible, check_upper_uniform, codegree_function,
    delta_lemma_instance, extension_hypergraph, BipartitePair, CheckMode, Hypergraph, PartiteSystem, PartiteSystemJson,
    RegularityVerdict, RootHypergraph,
};
use avoidance::{RootedGraph, XRational};
use clap::Subcommand;
use serde::Serialize;

use crate::input;
use crate::session::{Outcome, Session};

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(subcommand)]
    check: Check,
}

#[derive(Debug, clap::Args)]
struct ModeArgs {
    /// Enumerate every admissible subset family (the default).
    #[arg(long, conflicts_with = "samples")]
    exact: bool,
    /// Random subset families to try; needs --seed.
    #[arg(long, value_name = "K")]
    samples: Option<usize>,
}

/// A pattern rooted at a vertex list, plus the partite system carrying `G_R`.
#[derive(Debug, clap::Args)]
struct RootedArgs {
    /// Partite system JSON with a `roots` tuple list.
    #[arg(long, value_name = "PATH")]
    system: PathBuf,
    #[arg(long = "F", value_name = "GRAPH")]
    f: String,
    /// Root vertices of F, e.g. `0,1`.
    #[arg(long)]
    roots: String,
}

#[derive(Debug, Subcommand)]
enum Check {
    /// (ε,p)-regularity of a bipartite pair given as {left, right, edges}.
    Pair {
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
        #[arg(long)]
        eps: f64,
        /// Defaults to the pair's density.
        #[arg(long)]
        p: Option<f64>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// (η,p)-upper-uniformity of a graph.
    Uniform {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// (q,ε)-lower-regularity of the root hypergraph.
    Lower {
        #[command(flatten)]
        rooted: RootedArgs,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// (F, Aq)-upper-extensibility of the root hypergraph.
    Extensible {
        #[command(flatten)]
        rooted: RootedArgs,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        a: f64,
    },
    /// Co-degree function of a hypergraph, or the delta bound on an extension hypergraph.
    Codegree {
        /// Hypergraph JSON {order, uniformity, edges}.
        #[arg(long, value_name = "PATH", conflicts_with_all = ["system", "gamma", "t", "a"])]
        hypergraph: Option<PathBuf>,
        #[arg(long, requires = "hypergraph")]
        tau: Option<f64>,
        #[arg(long, value_name = "PATH", requires_all = ["f", "roots", "gamma", "t", "a"])]
        system: Option<PathBuf>,
        #[arg(long = "F", value_name = "GRAPH")]
        f: Option<String>,
        #[arg(long)]
        roots: Option<String>,
        #[arg(long)]
        gamma: Option<f64>,
        /// `q = n^{-t}`, an exact rational such as `1/2`.
        #[arg(long)]
        t: Option<XRational>,
        #[arg(long)]
        a: Option<f64>,
    },
}

fn mode(s: &mut Session, m: &ModeArgs) -> Result<CheckMode> {
    Ok(match m.samples {
        None => CheckMode::Exact,
        Some(samples) => CheckMode::Sampled {
            samples,
            seed: s.seed("sampled regcheck")?,
        },
    })
}

fn rooted(r: &RootedArgs) -> Result<(RootHypergraph, RootedGraph)> {
    let js: PartiteSystemJson = input::json_file(&r.system)?;
    let sys = PartiteSystem::try_from(js)?;
    let gr = sys
        .roots()
        .cloned()
        .with_context(|| format!("{} has no `roots` tuples", r.system.display()))?;
    let rg = RootedGraph::new(input::graph(&r.f)?, input::usize_list(&r.roots)?)?;
    Ok((gr, rg))
}

fn verdict(s: &mut Session, v: &RegularityVerdict) -> Result<Outcome> {
    s.emit("regcheck", v, || match v {
        RegularityVerdict::Verified => "verified\n".into(),
        RegularityVerdict::Unfalsified { samples } => format!("unfalsified after {samples} samples\n"),
        RegularityVerdict::Falsified(c) => format!(
            "falsified: observed {} against bound {} on subsets {:?}\n",
            c.observed, c.bound, c.subsets
        ),
    })?;
    Ok(if v.is_falsified() { Outcome::Fail } else { Outcome::Pass })
}

#[derive(Serialize)]
struct Holds<'a, T: Serialize> {
    holds: bool,
    #[serde(flatten)]
    report: &'a T,
}

pub fn run(s: &mut Session, a: Args) -> Result<Outcome> {
    match a.check {
        Check::Pair { input, eps, p, mode: m } => {
            let pair: BipartitePair = input::json_file(&input)?;
            let p = p.unwrap_or_else(|| pair.density());
            let md = mode(s, &m)?;
            verdict(s, &check_regular_pair(&pair, eps, p, md)?)
        }
        Check::Uniform { graph, eta, p, mode: m } => {
            let g = input::graph(&graph)?;
            let md = mode(s, &m)?;
            verdict(s, &check_upper_uniform(&g, eta, p, md)?)
        }
        Check::Lower {
            rooted: r,
            q,
            eps,
            mode: m,
        } => {
            let (gr, rg) = rooted(&r)?;
            let md = mode(s, &m)?;
            verdict(s, &check_lower_regular(&gr, &rg, q, eps, md)?)
        }
        Check::Extensible { rooted: r, q, a } => {
            let (gr, rg) = rooted(&r)?;
            let rep = check_upper_extensible(&gr, &rg, q, a)?;
            s.emit("extensible", &rep, || match &rep.worst {
                Some(w) => format!(
                    "holds = {}; worst tuple {:?} at positions {:?}: degree {} against bound {}\n",
                    rep.holds, w.tuple, w.positions, w.degree, w.bound
                ),
                None => format!("holds = {}\n", rep.holds),
            })?;
            Ok(if rep.holds { Outcome::Pass } else { Outcome::Fail })
        }
        Check::Codegree {
            hypergraph,
            tau,
            system,
            f,
            roots,
            gamma,
            t,
            a,
        } => match (hypergraph, system) {
            (Some(path), None) => {
                let h: Hypergraph = input::json_file(&path)?;
                let h = Hypergraph::new(h.order, h.uniformity, h.edges)?;
                let rep = codegree_function(&h, tau.context("--tau is required with --hypergraph")?)?;
                s.emit("codegree", &rep, || format!("delta = {}\n", rep.delta))?;
                Ok(Outcome::Pass)
            }
            (None, Some(system)) => {
                let r = RootedArgs {
                    system,
                    f: f.expect("required by clap"),
                    roots: roots.expect("required by clap"),
                };
                let (gr, rg) = rooted(&r)?;
                let inst = delta_lemma_instance(&gr, &rg, gamma.unwrap(), t.unwrap(), a.unwrap())?;
                let edges = extension_hypergraph(&gr, &rg)?.edges.len();
                let holds = inst.holds();
                s.emit("delta_bound", &Holds { holds, report: &inst }, || {
                    format!(
                        "holds = {holds}; delta = {} against bound {} (upper-extensible: {}, {edges} extension edges)\n",
                        inst.delta, inst.bound, inst.upper_extensible
                    )
                })?;
                Ok(if holds { Outcome::Pass } else { Outcome::Fail })
            }
            _ => bail!("codegree needs either --hypergraph or --system"),
        },
    }
}
