use std::fmt::Write;

use anyhow::Result;
use avoidance::verifier::{run_all, run_lemma, LemmaId, LemmaResult, VerifyOptions};

use crate::session::{Outcome, Session};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// A lemma id such as `klr_density`, or `all`.
    #[arg(default_value = "all")]
    lemma: String,
    /// Vertex bound of the enumerated universes.
    #[arg(long, default_value_t = 6)]
    vmax: usize,
    /// Largest number of colors.
    #[arg(long, default_value_t = 4)]
    r: u32,
    /// Largest level of 𝓕ᵏ (4 is slow).
    #[arg(long, default_value_t = 3)]
    k: usize,
}

pub fn run(s: &mut Session, a: Args) -> Result<Outcome> {
    let opts = VerifyOptions {
        v_max: a.vmax,
        r_max: a.r,
        k_max: a.k,
        ..VerifyOptions::default()
    };
    let results: Vec<LemmaResult> = if a.lemma.eq_ignore_ascii_case("all") {
        run_all(&opts)?
    } else {
        vec![run_lemma(a.lemma.parse::<LemmaId>()?, &opts)?]
    };
    s.emit("verify", &results, || text(&results))?;
    Ok(if results.iter().all(|r| r.pass) {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn text(results: &[LemmaResult]) -> String {
    let mut out = String::new();
    for r in results {
        let _ = writeln!(
            out,
            "{} {}: {} comparisons, {} filtered of {} instances [{}]",
            if r.pass { "PASS" } else { "FAIL" },
            r.lemma,
            r.checked,
            r.filtered,
            r.instances,
            r.universe
        );
        for c in &r.counterexamples {
            let _ = writeln!(out, "  counterexample: {} with lhs {} rhs {}", c.clause, c.lhs, c.rhs);
        }
    }
    out
}
