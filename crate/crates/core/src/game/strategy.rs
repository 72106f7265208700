use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::board::ColoredBoard;
use crate::error::{Error, Result};
use crate::graph::count::CompiledPattern;
use crate::graph::Edge;

/// A Painter strategy: picks a color in `1..=r` for the arriving edge.
///
/// Implementations must depend only on the board, the edge, the pattern and
/// the strategy's own state.
pub trait Strategy {
    fn choose(&mut self, board: &mut ColoredBoard, e: Edge, f: &CompiledPattern) -> u8;
}

/// Serializable strategy identifier with parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum StrategySpec {
    /// Greedy over `preference`; empty means `1, 2, …, r`.
    Greedy {
        #[serde(default)]
        preference: Vec<u8>,
    },
    Random,
}

impl StrategySpec {
    pub fn greedy() -> StrategySpec {
        StrategySpec::Greedy { preference: Vec::new() }
    }

    pub fn build(&self, r: u8, rng: ChaCha8Rng) -> Result<Box<dyn Strategy + Send>> {
        Ok(match self {
            StrategySpec::Greedy { preference } => Box::new(Greedy::new(r, preference.clone())?),
            StrategySpec::Random => Box::new(RandomStrategy::new(r, rng)),
        })
    }
}

/// Whether coloring `e` with `c` completes a copy of `F` in color `c` through `e`.
pub fn closes_mono_copy(board: &mut ColoredBoard, e: Edge, c: u8, f: &CompiledPattern) -> Result<bool> {
    Ok(find_mono_copy(board, e, c, f)?.is_some())
}

/// The copy of `F` that coloring `e` with `c` would complete, as a vertex map.
pub fn find_mono_copy(board: &mut ColoredBoard, e: Edge, c: u8, f: &CompiledPattern) -> Result<Option<Vec<usize>>> {
    if board.contains(e.0, e.1) {
        return Err(Error::DuplicateEdge(crate::graph::norm(e.0, e.1)));
    }
    Ok(board.with_probe(crate::graph::norm(e.0, e.1), c, |view| f.find_through(&view, e.0, e.1)))
}

/// First color in preference order that does not close a copy; the last one otherwise.
#[derive(Debug, Clone)]
pub struct Greedy {
    preference: Vec<u8>,
}

impl Greedy {
    pub fn new(r: u8, preference: Vec<u8>) -> Result<Greedy> {
        let preference = if preference.is_empty() {
            (1..=r).collect()
        } else {
            preference
        };
        let mut sorted = preference.clone();
        sorted.sort_unstable();
        if sorted != (1..=r).collect::<Vec<_>>() {
            return Err(Error::Parameter(format!(
                "preference {preference:?} is not an ordering of 1..={r}"
            )));
        }
        Ok(Greedy { preference })
    }

    pub fn preference(&self) -> &[u8] {
        &self.preference
    }
}

/// Greedy choice as a free function.
pub fn greedy_strategy(board: &mut ColoredBoard, e: Edge, preference: &[u8], f: &CompiledPattern) -> u8 {
    for &c in preference {
        if !closes_mono_copy(board, e, c, f).expect("edge is new") {
            return c;
        }
    }
    *preference.last().expect("at least one color")
}

impl Strategy for Greedy {
    fn choose(&mut self, board: &mut ColoredBoard, e: Edge, f: &CompiledPattern) -> u8 {
        greedy_strategy(board, e, &self.preference, f)
    }
}

/// Uniform color, ignoring the board.
#[derive(Debug, Clone)]
pub struct RandomStrategy {
    r: u8,
    rng: ChaCha8Rng,
}

impl RandomStrategy {
    pub fn new(r: u8, rng: ChaCha8Rng) -> RandomStrategy {
        RandomStrategy { r, rng }
    }

    pub fn draw(&mut self) -> u8 {
        self.rng.gen_range(1..=self.r)
    }
}

impl Strategy for RandomStrategy {
    fn choose(&mut self, _: &mut ColoredBoard, _: Edge, _: &CompiledPattern) -> u8 {
        self.draw()
    }
}
