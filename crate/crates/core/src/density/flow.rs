//! Rooted density `m(Z,G)` by Dinkelbach iteration over a max-closure min cut.
//!
//! For `λ = p/q` the closure network has one node per edge not inside `Z` and
//! one per non-root vertex. Selecting an edge forces its non-root endpoints;
//! an edge earns `q` and a vertex costs `p`. The optimum of
//! `q·ē(T) − p·|T|` is `q·|E| − maxflow`.

use std::collections::VecDeque;

use crate::graph::Graph;

const INF: i64 = i64::MAX / 4;

struct Dinic {
    head: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<i64>,
    next: Vec<usize>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

const NIL: usize = usize::MAX;

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            head: vec![NIL; n],
            to: Vec::new(),
            cap: Vec::new(),
            next: Vec::new(),
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    fn add(&mut self, u: usize, v: usize, c: i64) {
        for (a, b, cap) in [(u, v, c), (v, u, 0)] {
            self.to.push(b);
            self.cap.push(cap);
            self.next.push(self.head[a]);
            self.head[a] = self.to.len() - 1;
        }
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let mut a = self.head[u];
            while a != NIL {
                let v = self.to[a];
                if self.cap[a] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
                a = self.next[a];
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, f: i64) -> i64 {
        if u == t {
            return f;
        }
        while self.iter[u] != NIL {
            let a = self.iter[u];
            let v = self.to[a];
            if self.cap[a] > 0 && self.level[v] == self.level[u] + 1 {
                let d = self.dfs(v, t, f.min(self.cap[a]));
                if d > 0 {
                    self.cap[a] -= d;
                    self.cap[a ^ 1] += d;
                    return d;
                }
            }
            self.iter[u] = self.next[a];
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.clone_from(&self.head);
            loop {
                let f = self.dfs(s, t, INF);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }

    /// Nodes that can still reach `t` in the residual network.
    fn reaches_sink(&self, t: usize) -> Vec<bool> {
        let n = self.head.len();
        let mut seen = vec![false; n];
        seen[t] = true;
        let mut stack = vec![t];
        while let Some(v) = stack.pop() {
            let mut a = self.head[v];
            while a != NIL {
                // arc a is v→u; its twin u→v carries residual capacity cap[a^1]
                let u = self.to[a];
                if !seen[u] && self.cap[a ^ 1] > 0 {
                    seen[u] = true;
                    stack.push(u);
                }
                a = self.next[a];
            }
        }
        seen
    }
}

/// Exact `m(Z,G)` as `(num, den)` in lowest terms together with the inclusion-maximal
/// maximizing vertex set (roots included). Returns `(0, 1)` and all vertices when
/// no subgraph has positive density.
pub(crate) fn rooted_density(g: &Graph, roots: &[bool]) -> ((i128, i128), Vec<usize>) {
    let n = g.v();
    let free: Vec<usize> = (0..n).filter(|&v| !roots[v]).collect();
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(a, b)| !(roots[a] && roots[b]))
        .collect();
    let all: Vec<usize> = (0..n).collect();
    if free.is_empty() || edges.is_empty() {
        return ((0, 1), all);
    }
    let mut slot = vec![usize::MAX; n];
    for (i, &v) in free.iter().enumerate() {
        slot[v] = i;
    }
    let (mut p, mut q) = reduce(edges.len() as i128, free.len() as i128);
    let mut chosen: Vec<usize> = free.clone();
    loop {
        let (gain, set) = closure(&edges, &free, &slot, roots, p as i64, q as i64);
        if gain <= 0 {
            // λ is optimal; `set` is the maximal set with zero gain
            let mut vs: Vec<usize> = (0..n).filter(|&v| roots[v]).collect();
            vs.extend(if set.is_empty() { chosen } else { set });
            vs.sort_unstable();
            return ((p, q), vs);
        }
        let e_t = edges
            .iter()
            .filter(|&&(a, b)| {
                (roots[a] || set.binary_search(&a).is_ok()) && (roots[b] || set.binary_search(&b).is_ok())
            })
            .count() as i128;
        (p, q) = reduce(e_t, set.len() as i128);
        chosen = set;
    }
}

fn reduce(p: i128, q: i128) -> (i128, i128) {
    let g = num_integer::gcd(p, q);
    if g == 0 {
        (0, 1)
    } else {
        (p / g, q / g)
    }
}

/// Maximizes `q·ē(T) − p·|T|`; returns the optimum and the maximal optimal `T` (sorted).
fn closure(
    edges: &[(usize, usize)],
    free: &[usize],
    slot: &[usize],
    roots: &[bool],
    p: i64,
    q: i64,
) -> (i64, Vec<usize>) {
    let m = edges.len();
    let s = m + free.len();
    let t = s + 1;
    let mut net = Dinic::new(t + 1);
    for (i, &(a, b)) in edges.iter().enumerate() {
        net.add(s, i, q);
        for x in [a, b] {
            if !roots[x] {
                net.add(i, m + slot[x], INF);
            }
        }
    }
    for j in 0..free.len() {
        net.add(m + j, t, p);
    }
    let flow = net.max_flow(s, t);
    let gain = q * m as i64 - flow;
    let reach = net.reaches_sink(t);
    let set: Vec<usize> = free
        .iter()
        .enumerate()
        .filter(|&(j, _)| !reach[m + j])
        .map(|(_, &v)| v)
        .collect();
    (gain, set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let k4 = Graph::complete(4);
        assert_eq!(rooted_density(&k4, &[false; 4]).0, (3, 2));
        let mut r = vec![false; 3];
        r[0] = true;
        r[1] = true;
        assert_eq!(rooted_density(&Graph::complete(3), &r).0, (2, 1));
        let c4 = Graph::cycle(4);
        assert_eq!(rooted_density(&c4, &[true, true, false, false]).0, (3, 2));
        // K4 plus a pendant path: the maximal maximizer is the K4
        let g = Graph::new(6, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5)]).unwrap();
        let (val, set) = rooted_density(&g, &[false; 6]);
        assert_eq!(val, (3, 2));
        assert_eq!(set, vec![0, 1, 2, 3]);
    }
}
