use std::fmt::Write;
use std::path::PathBuf;

use anyhow::Result;
use avoidance::constructions::{enumerate_fk, ConstructionTree};
use avoidance::density::m2;
use avoidance::{RootedGraph, XRational};
use serde::Serialize;

use crate::input;
use crate::session::{Outcome, Session};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// The pattern F.
    #[arg(long = "F", value_name = "GRAPH")]
    f: String,
    /// Root edge `u,w`; defaults to the first edge of F.
    #[arg(long)]
    edge: Option<String>,
    #[arg(long)]
    k: usize,
    /// Every member of 𝓕ᵏ (the default).
    #[arg(long, conflicts_with = "densest")]
    list: bool,
    /// Only the member with the most edges.
    #[arg(long)]
    densest: bool,
    /// Writes `member-<i>.txt` and the construction tree `member-<i>.json` per member.
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Member {
    v: usize,
    e: usize,
    roots: Vec<usize>,
    m2: XRational,
    two_balanced: bool,
    graph: String,
    tree: ConstructionTree,
}

#[derive(Debug, Serialize)]
struct Report {
    k: usize,
    edge: [usize; 2],
    class_size: usize,
    members: Vec<Member>,
}

fn graph_text(rg: &RootedGraph) -> String {
    let roots: Vec<String> = rg.roots().iter().map(|r| r.to_string()).collect();
    format!("# roots {}\n{}", roots.join(" "), rg.graph().to_text())
}

pub fn run(s: &mut Session, a: Args) -> Result<Outcome> {
    let f = input::graph(&a.f)?;
    let edge = match &a.edge {
        Some(text) => input::edge(text)?,
        None => *f.edges().first().ok_or(avoidance::Error::Edgeless("construct"))?,
    };
    let class = enumerate_fk(&f, edge, a.k)?;
    let trees: Vec<&ConstructionTree> = if a.densest {
        vec![class.densest()]
    } else {
        class.member_trees().collect()
    };
    let mut members = Vec::new();
    for t in trees {
        let g = t.realized.graph();
        let rep = m2(g)?;
        members.push(Member {
            v: g.v(),
            e: g.e(),
            roots: t.realized.roots().to_vec(),
            m2: rep.value,
            two_balanced: rep.balanced,
            graph: graph_text(&t.realized),
            tree: t.clone(),
        });
    }
    if let Some(dir) = &a.out_dir {
        for (i, mem) in members.iter().enumerate() {
            s.write_file(&dir.join(format!("member-{i}.txt")), mem.graph.as_bytes())?;
            let tree = serde_json::to_string_pretty(&mem.tree)? + "\n";
            s.write_file(&dir.join(format!("member-{i}.json")), tree.as_bytes())?;
        }
    }
    let report = Report {
        k: a.k,
        edge: [edge.0, edge.1],
        class_size: class.members.len(),
        members,
    };
    s.emit("construct", &report, || {
        let mut out = String::new();
        let _ = writeln!(out, "# |F^{}| = {}", report.k, report.class_size);
        for (i, mem) in report.members.iter().enumerate() {
            let _ = writeln!(
                out,
                "# member {i}: v = {}, e = {}, m2 = {}, 2-balanced = {}",
                mem.v, mem.e, mem.m2, mem.two_balanced
            );
            out.push_str(&mem.graph);
            out.push('\n');
        }
        out
    })?;
    Ok(Outcome::Pass)
}
