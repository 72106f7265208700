//! The online F-avoidance game played on the random graph process.

mod board;
mod process;
mod strategy;

#[cfg(test)]
mod tests;

use serde::{Deserialize, Serialize};

pub use board::{ColorView, ColoredBoard};
pub use process::{edge_process, pair_at, EdgeProcess, EDGE_STREAM, STRATEGY_STREAM};
pub use strategy::{closes_mono_copy, find_mono_copy, greedy_strategy, Greedy, RandomStrategy, Strategy, StrategySpec};

use crate::error::{Error, Result};
use crate::graph::count::CompiledPattern;
use crate::graph::Graph;

pub const MAX_COLORS: u8 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameConfig {
    pub n: usize,
    pub f: Graph,
    pub r: u8,
    pub max_rounds: u64,
    pub seed: u64,
    pub strategy: StrategySpec,
    #[serde(default)]
    pub record_transcript: bool,
}

impl GameConfig {
    /// Greedy game that may run through the whole process.
    pub fn new(n: usize, f: Graph, r: u8, seed: u64) -> GameConfig {
        GameConfig {
            n,
            f,
            r,
            max_rounds: pairs(n),
            seed,
            strategy: StrategySpec::greedy(),
            record_transcript: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.r > MAX_COLORS {
            return Err(Error::Parameter(format!("r = {} outside 1..={MAX_COLORS}", self.r)));
        }
        if self.max_rounds > pairs(self.n) {
            return Err(Error::Parameter(format!(
                "max_rounds = {} exceeds the {} pairs of {} vertices",
                self.max_rounds,
                pairs(self.n),
                self.n
            )));
        }
        if self.f.e() == 0 {
            return Err(Error::Edgeless("pattern"));
        }
        if let StrategySpec::Greedy { preference } = &self.strategy {
            Greedy::new(self.r, preference.clone())?;
        }
        Ok(())
    }
}

pub fn pairs(n: usize) -> u64 {
    (n as u64) * (n as u64).saturating_sub(1) / 2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LosingCopy {
    /// Image of each vertex of `F`, indexed by `F`'s labels.
    pub vertices: Vec<usize>,
    pub color: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub round: u64,
    pub edge: [usize; 2],
    pub color: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub config: GameConfig,
    pub duration: u64,
    pub survived: bool,
    pub losing_copy: Option<LosingCopy>,
    /// Edges per color, index `c − 1`.
    pub color_histogram: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transcript: Option<Vec<Move>>,
}

impl GameRecord {
    /// Rounds actually played.
    pub fn rounds(&self) -> u64 {
        self.color_histogram.iter().sum()
    }
}

/// Plays one game with the strategy named in the config.
pub fn play(config: &GameConfig) -> Result<GameRecord> {
    config.validate()?;
    let rng = process::stream_rng(config.seed, STRATEGY_STREAM);
    let mut strategy = config.strategy.build(config.r, rng)?;
    play_with(config, strategy.as_mut())
}

/// Plays one game with a caller-supplied strategy; `config.strategy` is only echoed.
pub fn play_with(config: &GameConfig, strategy: &mut dyn Strategy) -> Result<GameRecord> {
    config.validate()?;
    let pattern = CompiledPattern::new(&config.f);
    let mut board = ColoredBoard::new(config.n, config.r);
    let mut transcript = config.record_transcript.then(Vec::new);
    let mut losing_copy = None;
    let mut duration = 0;
    for (i, e) in edge_process(config.n, config.seed)
        .take(config.max_rounds as usize)
        .enumerate()
    {
        let round = i as u64 + 1;
        let c = strategy.choose(&mut board, e, &pattern);
        if c == 0 || c > config.r {
            return Err(Error::Parameter(format!("strategy returned color {c}")));
        }
        let copy = find_mono_copy(&mut board, e, c, &pattern)?;
        board.insert(e, c)?;
        if let Some(t) = transcript.as_mut() {
            t.push(Move {
                round,
                edge: [e.0, e.1],
                color: c,
            });
        }
        duration = round;
        if let Some(vertices) = copy {
            losing_copy = Some(LosingCopy { vertices, color: c });
            break;
        }
    }
    Ok(GameRecord {
        config: config.clone(),
        duration,
        survived: losing_copy.is_none(),
        losing_copy,
        color_histogram: board.histogram().to_vec(),
        transcript,
    })
}
