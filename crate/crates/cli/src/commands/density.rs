use std::collections::BTreeMap;
use std::fmt::Write;

use anyhow::Result;
use avoidance::density::{
    balancedness, m, m1, m2, m2_bar, premise_check, threshold_exponent, Balancedness, PremiseReport,
};
use avoidance::{Error, XRational};
use serde::Serialize;

use crate::input;
use crate::session::{Outcome, Session};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Builtin name or graph file.
    graph: String,
    /// Number of colors.
    #[arg(long, default_value_t = 2)]
    r: u32,
    /// Report `m̄₂ʲ` for every `j ≤ r`.
    #[arg(long)]
    all: bool,
}

#[derive(Debug, Serialize)]
struct Report {
    v: usize,
    e: usize,
    r: u32,
    m: XRational,
    m1: XRational,
    m2: XRational,
    mbar2: BTreeMap<u32, XRational>,
    threshold_exponent: XRational,
    balancedness: Balancedness,
    /// Absent for forests.
    premise: Option<PremiseReport>,
}

pub fn run(s: &mut Session, a: Args) -> Result<Outcome> {
    let g = input::graph(&a.graph)?;
    if g.e() == 0 {
        return Err(Error::Edgeless("density").into());
    }
    let lo = if a.all { 1 } else { a.r };
    let mut mbar2 = BTreeMap::new();
    for j in lo..=a.r {
        mbar2.insert(j, m2_bar(&g, j)?.value);
    }
    let report = Report {
        v: g.v(),
        e: g.e(),
        r: a.r,
        m: m(&g)?.value,
        m1: m1(&g)?.value,
        m2: m2(&g)?.value,
        mbar2,
        threshold_exponent: threshold_exponent(&g, a.r)?,
        balancedness: balancedness(&g)?,
        premise: if g.is_forest() { None } else { Some(premise_check(&g)?) },
    };
    s.emit("density", &report, || text(&report))?;
    Ok(Outcome::Pass)
}

fn text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "v = {}, e = {}", r.v, r.e);
    let _ = writeln!(out, "m = {}", r.m);
    let _ = writeln!(out, "m1 = {}", r.m1);
    let _ = writeln!(out, "m2 = {}", r.m2);
    for (j, x) in &r.mbar2 {
        let _ = writeln!(out, "mbar2^{j} = {x}");
    }
    let _ = writeln!(out, "exponent(r={}) = {}", r.r, r.threshold_exponent);
    let b = &r.balancedness;
    let _ = writeln!(
        out,
        "balanced = {}, 1-balanced = {}, 2-balanced = {}, strictly 2-balanced = {}",
        b.balanced, b.one_balanced, b.two_balanced, b.strictly_two_balanced
    );
    if let Some(p) = &r.premise {
        let _ = writeln!(out, "premise = {} (witness edges: {})", p.holds(), p.witnesses.len());
    }
    out
}
