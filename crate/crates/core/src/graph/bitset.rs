//! Word-level helpers for adjacency rows stored as `[u64]` slices.

#[inline]
pub fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
pub fn set(row: &mut [u64], v: usize) {
    row[v >> 6] |= 1u64 << (v & 63);
}

#[inline]
pub fn clear(row: &mut [u64], v: usize) {
    row[v >> 6] &= !(1u64 << (v & 63));
}

#[inline]
pub fn test(row: &[u64], v: usize) -> bool {
    (row[v >> 6] >> (v & 63)) & 1 == 1
}

#[inline]
pub fn count(row: &[u64]) -> u32 {
    row.iter().map(|w| w.count_ones()).sum()
}

#[inline]
pub fn is_empty(row: &[u64]) -> bool {
    row.iter().all(|&w| w == 0)
}

#[inline]
pub fn and_count(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// Fills `row` with the first `n` bits set.
pub fn fill(row: &mut [u64], n: usize) {
    for (i, w) in row.iter_mut().enumerate() {
        let lo = i * 64;
        *w = if n >= lo + 64 {
            u64::MAX
        } else if n > lo {
            (1u64 << (n - lo)) - 1
        } else {
            0
        };
    }
}

/// Iterator over the set bits of a row, ascending.
pub struct Ones<'a> {
    row: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> Ones<'a> {
    pub fn new(row: &'a [u64]) -> Self {
        Ones {
            row,
            idx: 0,
            cur: row.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + t);
            }
            self.idx += 1;
            if self.idx >= self.row.len() {
                return None;
            }
            self.cur = self.row[self.idx];
        }
    }
}

pub fn ones(row: &[u64]) -> Ones<'_> {
    Ones::new(row)
}
