use super::*;
use crate::graph::count::count_rooted_copies;
use crate::graph::{norm, AdjacencyRows, Edge, RootedGraph};

const RED: u8 = 1;
const BLUE: u8 = 2;

fn red_path_board() -> ColoredBoard {
    let mut b = ColoredBoard::new(3, 2);
    b.insert((0, 1), RED).unwrap();
    b.insert((1, 2), RED).unwrap();
    b
}

#[test]
fn closing_a_red_triangle() {
    let k3 = CompiledPattern::new(&Graph::complete(3));
    let mut b = red_path_board();
    assert!(closes_mono_copy(&mut b, (0, 2), RED, &k3).unwrap());
    assert!(!closes_mono_copy(&mut b, (0, 2), BLUE, &k3).unwrap());
    // the probe leaves no trace
    assert!(!b.contains(0, 2));
    assert_eq!(b.edge_count(), 2);
    let mut empty = ColoredBoard::new(5, 3);
    for c in 1..=3 {
        assert!(!closes_mono_copy(&mut empty, (1, 4), c, &k3).unwrap());
    }
    assert!(matches!(
        closes_mono_copy(&mut b, (1, 0), BLUE, &k3),
        Err(Error::DuplicateEdge((0, 1)))
    ));
}

#[test]
fn board_rejects_bad_inserts() {
    let mut b = red_path_board();
    assert!(b.insert((2, 1), BLUE).is_err());
    assert!(b.insert((0, 0), BLUE).is_err());
    assert!(b.insert((0, 2), 3).is_err());
    assert!(b.insert((0, 2), 0).is_err());
    assert_eq!(b.color_of(1, 0), Some(RED));
    assert_eq!(b.color_of(0, 2), None);
    assert_eq!(b.color_graph(RED), Graph::path(3));
}

#[test]
fn greedy_choices() {
    let k3 = CompiledPattern::new(&Graph::complete(3));
    let mut empty = ColoredBoard::new(4, 2);
    assert_eq!(greedy_strategy(&mut empty, (0, 3), &[2, 1], &k3), 2);
    let mut b = red_path_board();
    assert_eq!(greedy_strategy(&mut b, (0, 2), &[RED, BLUE], &k3), BLUE);
    // both colors close
    let mut b = ColoredBoard::new(4, 2);
    for (e, c) in [((0, 1), RED), ((1, 2), RED), ((0, 3), BLUE), ((2, 3), BLUE)] {
        b.insert(e, c).unwrap();
    }
    assert_eq!(greedy_strategy(&mut b, (0, 2), &[BLUE, RED], &k3), RED);
    assert_eq!(greedy_strategy(&mut b, (0, 2), &[RED, BLUE], &k3), BLUE);
    assert!(Greedy::new(2, vec![1, 1]).is_err());
    assert!(Greedy::new(3, vec![3, 1, 2]).is_ok());
}

#[test]
fn random_strategy_frequencies() {
    let mut one = RandomStrategy::new(1, process::stream_rng(3, STRATEGY_STREAM));
    assert!((0..100).all(|_| one.draw() == 1));
    let mut two = RandomStrategy::new(2, process::stream_rng(3, STRATEGY_STREAM));
    let draws: Vec<u8> = (0..10_000).map(|_| two.draw()).collect();
    let ones = draws.iter().filter(|&&c| c == 1).count() as f64 / 1e4;
    assert!((ones - 0.5).abs() <= 0.05, "{ones}");
    let mut again = RandomStrategy::new(2, process::stream_rng(3, STRATEGY_STREAM));
    assert!(draws.iter().all(|&c| c == again.draw()));
}

#[test]
fn one_color_on_a_triangle() {
    for seed in 0..10 {
        let mut cfg = GameConfig::new(3, Graph::complete(3), 1, seed);
        cfg.max_rounds = 3;
        let rec = play(&cfg).unwrap();
        assert_eq!(rec.duration, 3);
        assert!(!rec.survived);
        let copy = rec.losing_copy.unwrap();
        assert_eq!(copy.color, 1);
        let mut vs = copy.vertices;
        vs.sort();
        assert_eq!(vs, vec![0, 1, 2]);
        assert_eq!(rec.color_histogram, vec![3]);
    }
}

#[test]
fn zero_rounds() {
    let mut cfg = GameConfig::new(10, Graph::complete(3), 2, 1);
    cfg.max_rounds = 0;
    let rec = play(&cfg).unwrap();
    assert_eq!(rec.duration, 0);
    assert!(rec.survived);
    assert!(rec.losing_copy.is_none());
    assert_eq!(rec.rounds(), 0);
}

#[test]
fn config_validation() {
    let ok = GameConfig::new(6, Graph::complete(3), 2, 0);
    assert!(ok.validate().is_ok());
    let mut bad = ok.clone();
    bad.r = 0;
    assert!(play(&bad).is_err());
    bad.r = 9;
    assert!(play(&bad).is_err());
    let mut bad = ok.clone();
    bad.max_rounds = 16;
    assert!(play(&bad).is_err());
    let mut bad = ok.clone();
    bad.f = Graph::empty(3);
    assert!(play(&bad).is_err());
    let mut bad = ok;
    bad.strategy = StrategySpec::Greedy { preference: vec![1, 3] };
    assert!(play(&bad).is_err());
}

fn naive_through(host: &Graph, f_name: &str, (u, w): Edge) -> u64 {
    let n = host.v();
    match f_name {
        "K3" => (0..n).filter(|&x| host.has_edge(u, x) && host.has_edge(w, x)).count() as u64,
        "C4" => {
            let mut c = 0;
            for x in 0..n {
                for y in 0..n {
                    if x != y
                        && ![u, w].contains(&x)
                        && ![u, w].contains(&y)
                        && host.has_edge(u, x)
                        && host.has_edge(x, y)
                        && host.has_edge(y, w)
                    {
                        c += 1;
                    }
                }
            }
            c
        }
        _ => unreachable!(),
    }
}

fn naive_total(host: &Graph, f_name: &str) -> u64 {
    let per_edge: u64 = host.edges().iter().map(|&e| naive_through(host, f_name, e)).sum();
    per_edge / host_edges_per_copy(f_name)
}

fn host_edges_per_copy(f_name: &str) -> u64 {
    match f_name {
        "K3" => 3,
        "C4" => 4,
        _ => unreachable!(),
    }
}

/// Replays a transcript with brute-force counts, checking the recorded duration.
fn replay_oracle(rec: &GameRecord, f_name: &str) {
    let cfg = &rec.config;
    let t = rec.transcript.as_ref().unwrap();
    assert_eq!(t.len() as u64, rec.duration);
    let mut classes: Vec<Vec<Edge>> = vec![Vec::new(); cfg.r as usize];
    for (i, mv) in t.iter().enumerate() {
        assert_eq!(mv.round, i as u64 + 1);
        let e = norm(mv.edge[0], mv.edge[1]);
        let class = &mut classes[mv.color as usize - 1];
        class.push(e);
        let g = Graph::new(cfg.n, class.iter().copied()).unwrap();
        let new = naive_through(&g, f_name, e);
        if mv.round < rec.duration || rec.survived {
            assert_eq!(new, 0, "copy before the recorded loss at round {}", mv.round);
        } else {
            assert!(new >= 1, "no copy at the recorded loss");
        }
    }
    for (c, class) in classes.iter().enumerate() {
        let g = Graph::new(cfg.n, class.iter().copied()).unwrap();
        let total = naive_total(&g, f_name);
        let lost_here = rec.losing_copy.as_ref().is_some_and(|l| l.color as usize == c + 1);
        if !lost_here {
            assert_eq!(total, 0);
        }
        assert_eq!(rec.color_histogram[c], class.len() as u64);
    }
    if let Some(l) = &rec.losing_copy {
        let g = Graph::new(cfg.n, classes[l.color as usize - 1].iter().copied()).unwrap();
        for &(a, b) in cfg.f.edges() {
            assert!(g.has_edge(l.vertices[a], l.vertices[b]));
        }
    }
}

#[test]
fn transcripts_agree_with_brute_force_replay() {
    let mut games = 0;
    for seed in 0..60u64 {
        for (f_name, f) in [("K3", Graph::complete(3)), ("C4", Graph::cycle(4))] {
            let n = 8 + (seed as usize * 7) % 40;
            let r = 1 + (seed % 3) as u8;
            let mut cfg = GameConfig::new(n, f.clone(), r, seed);
            cfg.record_transcript = true;
            cfg.strategy = if seed % 2 == 0 {
                StrategySpec::greedy()
            } else {
                StrategySpec::Random
            };
            let rec = play(&cfg).unwrap();
            replay_oracle(&rec, f_name);
            games += 1;
        }
    }
    assert!(games >= 100);
}

#[test]
fn greedy_duration_matches_replay_on_forty_vertices() {
    let mut cfg = GameConfig::new(40, Graph::complete(3), 2, 2024);
    cfg.record_transcript = true;
    let rec = play(&cfg).unwrap();
    assert!(!rec.survived);
    replay_oracle(&rec, "K3");
}

#[test]
fn greedy_lower_colors_are_spanned() {
    for (f, seeds) in [
        (Graph::complete(3), 0..12u64),
        (Graph::cycle(4), 0..6),
        (Graph::diamond(), 0..4),
    ] {
        let rooted: Vec<RootedGraph> = f
            .edges()
            .iter()
            .map(|&(a, b)| RootedGraph::at_pair(f.clone(), a, b).unwrap())
            .collect();
        for seed in seeds {
            let r = 3;
            let mut cfg = GameConfig::new(24, f.clone(), r, seed);
            cfg.record_transcript = true;
            cfg.strategy = StrategySpec::Greedy {
                preference: vec![2, 3, 1],
            };
            let rec = play(&cfg).unwrap();
            let pref = [2u8, 3, 1];
            let mut board = ColoredBoard::new(cfg.n, r);
            for mv in rec.transcript.as_ref().unwrap() {
                let e = (mv.edge[0], mv.edge[1]);
                let k = pref.iter().position(|&c| c == mv.color).unwrap();
                for &j in &pref[..k] {
                    let view = board.view(j);
                    let spanned = rooted.iter().any(|rg| {
                        [[e.0, e.1], [e.1, e.0]]
                            .iter()
                            .any(|a| count_rooted_copies(&view, a, rg).unwrap().count > 0)
                    });
                    assert!(spanned, "round {} color {} skipped {j}", mv.round, mv.color);
                }
                board.insert(e, mv.color).unwrap();
            }
        }
    }
}

#[test]
fn identical_configs_identical_records() {
    for strategy in [StrategySpec::greedy(), StrategySpec::Random] {
        let mut cfg = GameConfig::new(30, Graph::cycle(4), 2, 77);
        cfg.strategy = strategy;
        cfg.record_transcript = true;
        let a = serde_json::to_string(&play(&cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&play(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
        let back: GameRecord = serde_json::from_str(&a).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), a);
    }
}

#[test]
fn survival_means_full_budget() {
    let mut cfg = GameConfig::new(50, Graph::complete(3), 3, 5);
    cfg.max_rounds = 20;
    let rec = play(&cfg).unwrap();
    assert!(rec.survived);
    assert_eq!(rec.duration, 20);
    assert_eq!(rec.rounds(), 20);
}

#[test]
fn views_match_color_graphs() {
    let mut cfg = GameConfig::new(20, Graph::complete(3), 2, 9);
    cfg.record_transcript = true;
    let rec = play(&cfg).unwrap();
    let mut board = ColoredBoard::new(20, 2);
    for mv in rec.transcript.unwrap() {
        board.insert((mv.edge[0], mv.edge[1]), mv.color).unwrap();
    }
    for c in 1..=2 {
        let g = board.color_graph(c);
        let v = board.view(c);
        for a in 0..20 {
            for b in 0..20 {
                assert_eq!(g.has_edge(a, b), v.adjacent(a, b));
            }
        }
    }
}
