use crate::error::{Error, Result};
use crate::graph::{bitset, norm, AdjacencyRows, Edge, Graph};

/// The game board: one bitset adjacency per color plus the union of all colors.
///
/// Colors are `1..=r`.
#[derive(Debug, Clone)]
pub struct ColoredBoard {
    n: usize,
    r: u8,
    words: usize,
    /// `r` blocks of `n` rows each.
    rows: Vec<u64>,
    all: Vec<u64>,
    counts: Vec<u64>,
}

impl ColoredBoard {
    pub fn new(n: usize, r: u8) -> ColoredBoard {
        let words = bitset::words_for(n);
        ColoredBoard {
            n,
            r,
            words,
            rows: vec![0; r as usize * n * words],
            all: vec![0; n * words],
            counts: vec![0; r as usize],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    fn block(&self, c: u8) -> usize {
        debug_assert!((1..=self.r).contains(&c));
        (c as usize - 1) * self.n * self.words
    }

    pub fn contains(&self, u: usize, w: usize) -> bool {
        bitset::test(&self.all[u * self.words..(u + 1) * self.words], w)
    }

    /// Color of `{u, w}`, if it is on the board.
    pub fn color_of(&self, u: usize, w: usize) -> Option<u8> {
        if !self.contains(u, w) {
            return None;
        }
        (1..=self.r).find(|&c| self.view(c).adjacent(u, w))
    }

    /// Number of edges per color, index `c − 1`.
    pub fn histogram(&self) -> &[u64] {
        &self.counts
    }

    pub fn edge_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn insert(&mut self, e: Edge, c: u8) -> Result<()> {
        let (u, w) = norm(e.0, e.1);
        if u == w || w >= self.n {
            return Err(Error::InvalidGraph(format!("{:?} is not a board pair", e)));
        }
        if c == 0 || c > self.r {
            return Err(Error::Parameter(format!("color {c} outside 1..={}", self.r)));
        }
        if self.contains(u, w) {
            return Err(Error::DuplicateEdge((u, w)));
        }
        self.set(u, w, c, true);
        self.counts[c as usize - 1] += 1;
        debug_assert_eq!(
            (1..=self.r).filter(|&k| self.view(k).adjacent(u, w)).count(),
            1,
            "color classes must stay disjoint"
        );
        Ok(())
    }

    fn set(&mut self, u: usize, w: usize, c: u8, on: bool) {
        let base = self.block(c);
        let op = if on { bitset::set } else { bitset::clear };
        for (a, b) in [(u, w), (w, u)] {
            op(&mut self.rows[base + a * self.words..base + (a + 1) * self.words], b);
            op(&mut self.all[a * self.words..(a + 1) * self.words], b);
        }
    }

    /// Runs `f` with `{u, w}` temporarily present in color `c`.
    pub(crate) fn with_probe<T>(&mut self, (u, w): Edge, c: u8, f: impl FnOnce(ColorView<'_>) -> T) -> T {
        self.set(u, w, c, true);
        let out = f(self.view(c));
        self.set(u, w, c, false);
        out
    }

    pub fn view(&self, c: u8) -> ColorView<'_> {
        ColorView {
            board: self,
            base: self.block(c),
        }
    }

    /// The color-`c` class as a standalone graph.
    pub fn color_graph(&self, c: u8) -> Graph {
        let v = self.view(c);
        let edges = (0..self.n).flat_map(|a| bitset::ones(v.row(a)).filter(move |&b| b > a).map(move |b| (a, b)));
        Graph::new(self.n, edges.collect::<Vec<_>>()).expect("board rows are simple")
    }
}

/// One color class of a board, usable as a matcher host.
#[derive(Clone, Copy)]
pub struct ColorView<'a> {
    board: &'a ColoredBoard,
    base: usize,
}

impl AdjacencyRows for ColorView<'_> {
    fn order(&self) -> usize {
        self.board.n
    }

    fn row(&self, v: usize) -> &[u64] {
        let w = self.board.words;
        &self.board.rows[self.base + v * w..self.base + (v + 1) * w]
    }

    fn words(&self) -> usize {
        self.board.words
    }
}
