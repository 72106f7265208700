use std::fmt::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use avoidance::game::{play, GameConfig, GameRecord, StrategySpec};
use clap::ValueEnum;

use crate::input;
use crate::session::{Outcome, Session};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyName {
    Greedy,
    Random,
}

/// Strategy flags shared with `estimate`.
#[derive(Debug, clap::Args)]
pub struct StrategyArgs {
    #[arg(long, value_enum, default_value_t = StrategyName::Greedy)]
    strategy: StrategyName,
    /// Greedy color order, e.g. `2,1,3`; defaults to `1..=r`.
    #[arg(long, value_name = "LIST")]
    preference: Option<String>,
}

impl StrategyArgs {
    pub fn spec(&self) -> Result<StrategySpec> {
        Ok(match self.strategy {
            StrategyName::Random => StrategySpec::Random,
            StrategyName::Greedy => {
                let preference = match &self.preference {
                    None => Vec::new(),
                    Some(text) => input::usize_list(text)?
                        .into_iter()
                        .map(|c| u8::try_from(c).context("color out of range"))
                        .collect::<Result<_>>()?,
                };
                StrategySpec::Greedy { preference }
            }
        })
    }
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    n: usize,
    #[arg(long = "F", value_name = "GRAPH")]
    f: String,
    #[arg(long)]
    r: u8,
    #[command(flatten)]
    strategy: StrategyArgs,
    /// Defaults to every pair of vertices.
    #[arg(long)]
    max_rounds: Option<u64>,
    /// Writes one `{"round","edge","color"}` line per move.
    #[arg(long, value_name = "PATH")]
    transcript: Option<PathBuf>,
}

pub fn run(s: &mut Session, a: Args) -> Result<Outcome> {
    let seed = s.seed("simulate")?;
    let mut config = GameConfig::new(a.n, input::graph(&a.f)?, a.r, seed);
    config.strategy = a.strategy.spec()?;
    if let Some(m) = a.max_rounds {
        config.max_rounds = m;
    }
    config.record_transcript = a.transcript.is_some();
    let mut record = play(&config)?;
    if let (Some(path), Some(moves)) = (&a.transcript, record.transcript.take()) {
        let mut body = String::new();
        for mv in &moves {
            body.push_str(&serde_json::to_string(mv)?);
            body.push('\n');
        }
        s.write_file(path, body.as_bytes())?;
    }
    record.config.record_transcript = false;
    s.emit("game", &record, || text(&record))?;
    Ok(Outcome::Pass)
}

fn text(r: &GameRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "survived = {}", r.survived);
    let _ = writeln!(out, "duration = {}", r.duration);
    let hist: Vec<String> = r.color_histogram.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(out, "colors = [{}]", hist.join(", "));
    if let Some(copy) = &r.losing_copy {
        let _ = writeln!(out, "monochromatic copy in color {} on {:?}", copy.color, copy.vertices);
    }
    out
}
