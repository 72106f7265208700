//! One pass/fail line per acceptance criterion. Runs as a plain binary so the
//! lines show up in `cargo test` output; exits nonzero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use avoidance::constructions::enumerate_fk;
use avoidance::density::{m2, m2_bar, threshold_exponent};
use avoidance::estimator::{estimate, run_trials_with, ExperimentPlan};
use avoidance::game::{edge_process, play, GameConfig, GameRecord, StrategySpec};
use avoidance::graph::norm;
use avoidance::regularity::{
    check_regular_pair, codegree_function, count_partite_copies, delta_lemma_instance, random_partite_system,
    BipartitePair, CheckMode, Hypergraph, PartiteSystem, RegularityVerdict, RootHypergraph,
};
use avoidance::verifier::{check_density_chain, check_ftimes_fstar, run_lemma, LemmaId, LemmaResult, VerifyOptions};
use avoidance::{Edge, Graph, RootedGraph, XRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn x(p: i128, q: i128) -> XRational {
    XRational::new(p, q)
}

// ------------------------------------------------------------------ 1

/// `m̄₂ʳ` straight from the definition: every vertex subset of `g`, every level.
fn mbar_oracle(g: &Graph, r: u32) -> XRational {
    let n = g.v();
    let mut prev = XRational::ZERO;
    for level in 1..=r {
        let mut best = XRational::ZERO;
        for mask in 1u32..1 << n {
            let vs: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let e = g.edges_within(&vs) as i128;
            let v = vs.len() as i128;
            let val = if level == 1 {
                XRational::new(e, v)
            } else if e == 0 {
                continue;
            } else {
                XRational::int(e) / (XRational::int(v - 2) + prev.recip())
            };
            best = best.max(val);
        }
        prev = best;
    }
    prev
}

fn criterion_1() -> Outcome {
    let k3 = Graph::complete(3);
    let e2 = threshold_exponent(&k3, 2).map_err(|e| e.to_string())?;
    let e1 = threshold_exponent(&k3, 1).map_err(|e| e.to_string())?;
    let b2 = m2_bar(&k3, 2).map_err(|e| e.to_string())?.value;
    let b3 = m2_bar(&k3, 3).map_err(|e| e.to_string())?.value;
    ensure(e2 == x(4, 3), || format!("exponent(K3,2) = {e2}"))?;
    ensure(e1 == x(1, 1), || format!("exponent(K3,1) = {e1}"))?;
    ensure(b2 == x(3, 2), || format!("mbar2^2(K3) = {b2}"))?;
    let oracle = mbar_oracle(&k3, 3);
    ensure(b3 == x(9, 5) && oracle == b3, || {
        format!("mbar2^3(K3) = {b3}, oracle {oracle}")
    })?;
    Ok(format!(
        "exponent(K3,2) = {e2}, mbar2^2 = {b2}, exponent(K3,1) = {e1}, mbar2^3 = {b3} = oracle"
    ))
}

// ------------------------------------------------------------------ 2, 3

fn summarize(results: &[LemmaResult]) -> Outcome {
    let mut parts = Vec::new();
    for r in results {
        if !r.pass {
            let c = &r.counterexamples[0];
            return Err(format!(
                "{}: {} counterexample(s), first `{}` lhs {} rhs {}",
                r.lemma,
                r.counterexamples.len(),
                c.clause,
                c.lhs,
                c.rhs
            ));
        }
        if r.checked == 0 {
            return Err(format!("{}: vacuous, nothing checked", r.lemma));
        }
        parts.push(format!("{} {}/{}", r.lemma, r.checked, r.filtered));
    }
    Ok(format!("checked/filtered: {}", parts.join(", ")))
}

fn criterion_2() -> Outcome {
    let r = check_density_chain(7, 5).map_err(|e| e.to_string())?;
    summarize(&[r])
}

fn criterion_3() -> Outcome {
    let base = VerifyOptions {
        v_max: 7,
        r_max: 4,
        k_max: 3,
        ..VerifyOptions::default()
    };
    let small = VerifyOptions {
        v_max: 6,
        ..base.clone()
    };
    let mut results = Vec::new();
    for (lemma, opts) in [
        (LemmaId::M2Le2m, &base),
        (LemmaId::Building, &base),
        (LemmaId::FstarDensity, &base),
        (LemmaId::KlrDensity, &base),
        (LemmaId::RootedDensity, &base),
        (LemmaId::ForbiddenDensity, &small),
        (LemmaId::ProdDensity, &small),
    ] {
        results.push(run_lemma(lemma, opts).map_err(|e| e.to_string())?);
    }
    // 𝓕ʳ for r = 4 needs the fourth level
    let mut ft = Vec::new();
    for f in &base.patterns {
        for r in 2..=4 {
            ft.push(check_ftimes_fstar(f, f.edges()[0], r).map_err(|e| e.to_string())?);
        }
    }
    results.push(LemmaResult::merge(LemmaId::FtimesFstar, ft));
    summarize(&results)
}

// ------------------------------------------------------------------ 4

fn criterion_4() -> Outcome {
    let k3 = Graph::complete(3);
    let f2 = enumerate_fk(&k3, (0, 1), 2).map_err(|e| e.to_string())?;
    let f3 = enumerate_fk(&k3, (0, 1), 3).map_err(|e| e.to_string())?;
    ensure(f2.members.len() == 1, || format!("|F^2| = {}", f2.members.len()))?;
    let only = f2.member_trees().next().unwrap().realized.graph();
    ensure(only.v() == 3 && only.e() == 3, || "F^2 member is not K3".into())?;
    let mut shapes: Vec<(usize, usize)> = f3
        .member_trees()
        .map(|t| (t.realized.graph().v(), t.realized.graph().e()))
        .collect();
    shapes.sort_unstable();
    ensure(shapes == vec![(4, 5), (6, 9)], || format!("F^3 shapes {shapes:?}"))?;
    for t in f2.member_trees().chain(f3.member_trees()) {
        let rep = m2(t.realized.graph()).map_err(|e| e.to_string())?;
        ensure(rep.balanced && rep.value == x(2, 1), || {
            format!("member {:?}: m2 = {}", t.realized.graph(), rep.value)
        })?;
    }
    Ok("|F^2| = 1, F^3 = {(4,5), (6,9)}, all 2-balanced with m2 = 2".into())
}

// ------------------------------------------------------------------ 5

/// Copies of `f_name` through `uw` in `host`, by direct enumeration.
fn naive_through(host: &Graph, f_name: &str, (u, w): Edge) -> u64 {
    let n = host.v();
    match f_name {
        "K3" => (0..n).filter(|&z| host.has_edge(u, z) && host.has_edge(w, z)).count() as u64,
        "C4" => {
            let mut c = 0;
            for a in (0..n).filter(|&a| a != w && host.has_edge(u, a)) {
                for b in (0..n).filter(|&b| b != u && b != a && host.has_edge(w, b)) {
                    c += host.has_edge(a, b) as u64;
                }
            }
            c
        }
        _ => unreachable!(),
    }
}

fn with_edge(edges: &[Edge], e: Edge, n: usize) -> Graph {
    Graph::new(n, edges.iter().copied().chain([e])).unwrap()
}

fn replay(rec: &GameRecord, f_name: &str, greedy: bool) -> Result<(), String> {
    let cfg = &rec.config;
    let moves = rec.transcript.as_ref().ok_or("no transcript")?;
    let process: Vec<Edge> = edge_process(cfg.n, cfg.seed).take(moves.len()).collect();
    let mut classes: Vec<Vec<Edge>> = vec![Vec::new(); cfg.r as usize];
    let pref: Vec<u8> = (1..=cfg.r).collect();
    for (i, mv) in moves.iter().enumerate() {
        let e = norm(mv.edge[0], mv.edge[1]);
        ensure(e == norm(process[i].0, process[i].1), || {
            format!("round {} is not the process edge", mv.round)
        })?;
        let c = mv.color as usize - 1;
        if greedy {
            let rank = pref.iter().position(|&p| p == mv.color).unwrap();
            for &j in &pref[..rank] {
                let g = with_edge(&classes[j as usize - 1], e, cfg.n);
                ensure(naive_through(&g, f_name, e) > 0, || {
                    format!(
                        "round {}: color {} chosen although color {j} was safe",
                        mv.round, mv.color
                    )
                })?;
            }
        }
        let g = with_edge(&classes[c], e, cfg.n);
        let closes = naive_through(&g, f_name, e) > 0;
        let last = i + 1 == moves.len();
        ensure(closes == (last && !rec.survived), || {
            format!("round {}: oracle says closes = {closes}, game disagrees", mv.round)
        })?;
        classes[c].push(e);
    }
    let hist: Vec<u64> = classes.iter().map(|c| c.len() as u64).collect();
    ensure(hist == rec.color_histogram, || {
        format!("histogram {:?} vs replay {hist:?}", rec.color_histogram)
    })?;
    ensure(moves.len() as u64 == rec.duration, || "duration mismatch".into())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut played = 0;
    let mut losses = 0;
    for i in 0..100 {
        let f_name = if i % 2 == 0 { "K3" } else { "C4" };
        let greedy = i % 4 < 2;
        let n = rng.gen_range(8..=64);
        let r = rng.gen_range(1..=3u8);
        let mut cfg = GameConfig::new(n, Graph::builtin(f_name).unwrap(), r, rng.gen());
        cfg.strategy = if greedy {
            StrategySpec::greedy()
        } else {
            StrategySpec::Random
        };
        cfg.record_transcript = true;
        let rec = play(&cfg).map_err(|e| e.to_string())?;
        replay(&rec, f_name, greedy).map_err(|e| format!("game {i} (n {n}, {f_name}, r {r}): {e}"))?;
        played += 1;
        losses += !rec.survived as usize;
    }
    Ok(format!(
        "{played} games replayed round for round, {losses} ended in a monochromatic copy"
    ))
}

// ------------------------------------------------------------------ 6

fn slope_of(f: &Graph, r: u8, seed: u64) -> Result<f64, String> {
    let template = GameConfig::new(0, f.clone(), r, 0);
    let plan = ExperimentPlan::new(template, vec![64, 128, 256, 512], 200, seed);
    let (est, _) = avoidance::estimator::run_experiment(&plan).map_err(|e| e.to_string())?;
    Ok(est.slope)
}

fn criterion_6() -> Outcome {
    let k3 = Graph::complete(3);
    let s1 = slope_of(&k3, 1, 11)?;
    ensure((0.92..=1.08).contains(&s1), || {
        format!("r = 1 slope {s1:.4} outside [0.92, 1.08]")
    })?;
    let s2 = slope_of(&k3, 2, 12)?;
    ensure((1.20..=1.45).contains(&s2), || {
        format!("r = 2 slope {s2:.4} outside [1.20, 1.45]")
    })?;
    for theta in [1.0, 4.0 / 3.0, 1.5] {
        let plan = ExperimentPlan::new(
            GameConfig::new(0, k3.clone(), 2, 0),
            vec![64, 128, 256, 512, 1024],
            9,
            3,
        );
        let trials = run_trials_with(&plan, |cfg| {
            Ok(((3.0 * (cfg.n as f64).powf(theta)).round() as u64 + cfg.seed % 2, false))
        })
        .map_err(|e| e.to_string())?;
        let est = estimate(&plan, &trials).map_err(|e| e.to_string())?;
        ensure((est.slope - theta).abs() <= 0.01, || {
            format!("stub theta {theta}: slope {}", est.slope)
        })?;
    }
    Ok(format!(
        "greedy K3 slopes: r = 1 {s1:.4}, r = 2 {s2:.4}; power-law stubs recovered within 0.01"
    ))
}

// ------------------------------------------------------------------ 7

fn criterion_7() -> Outcome {
    for (eps, p) in [(0.1, 0.5), (0.3, 0.1), (0.5, 1.0), (1.0, 0.01)] {
        let empty = BipartitePair::new(10, 10, []).map_err(|e| e.to_string())?;
        let v = check_regular_pair(&empty, eps, p, CheckMode::Exact).map_err(|e| e.to_string())?;
        ensure(v == RegularityVerdict::Verified, || {
            format!("empty pair at ({eps}, {p}): {v:?}")
        })?;
    }
    let half =
        BipartitePair::new(10, 10, (0..5).flat_map(|u| (0..10).map(move |w| (u, w)))).map_err(|e| e.to_string())?;
    let v = check_regular_pair(&half, 0.4, half.density(), CheckMode::Exact).map_err(|e| e.to_string())?;
    let cert = v.certificate().ok_or("half-full pair not falsified")?;
    let (us, ws) = (&cert.subsets[0], &cert.subsets[1]);
    let sub = half.edges_between(us, ws) as f64 / (us.len() * ws.len()) as f64;
    let min = (0.4f64 * 10.0).ceil() as usize;
    ensure(us.len() >= min && ws.len() >= min, || {
        "certificate subsets too small".into()
    })?;
    ensure((sub - half.density()).abs() > 0.4 * half.density(), || {
        "certificate does not re-verify".into()
    })?;
    let k3 = Graph::complete(3);
    for n in [1, 4, 9] {
        let sys = PartiteSystem::complete_for(&k3, n);
        let c = count_partite_copies(&sys, &k3).map_err(|e| e.to_string())?;
        ensure(c == (n as u64).pow(3), || format!("complete tripartite n = {n}: {c}"))?;
    }
    let (n, m) = (60usize, (60f64.powf(1.5)).ceil() as usize);
    let expect = (m as f64 / (n * n) as f64).powi(3) * (n as f64).powi(3);
    let mut within = 0;
    for seed in 0..50 {
        let sys = random_partite_system(&k3, n, m, &mut ChaCha8Rng::seed_from_u64(seed)).map_err(|e| e.to_string())?;
        let c = count_partite_copies(&sys, &k3).map_err(|e| e.to_string())? as f64;
        within += (c >= expect / 2.0 && c <= expect * 2.0) as usize;
    }
    ensure(within >= 45, || {
        format!("only {within}/50 random systems within a factor 2")
    })?;
    Ok(format!("empty pairs verified, half pair falsified (d' = {sub:.2}), n^3 counts exact, {within}/50 random K3 counts within 2x of {expect:.0}"))
}

// ------------------------------------------------------------------ 8

fn criterion_8() -> Outcome {
    let edgeless = Hypergraph::new(12, 3, Vec::new()).map_err(|e| e.to_string())?;
    let d0 = codegree_function(&edgeless, 0.5).map_err(|e| e.to_string())?.delta;
    ensure(d0 == 0.0, || format!("delta(edgeless) = {d0}"))?;
    let rg = RootedGraph::at_pair(Graph::complete(3), 0, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut instances, mut extensible) = (0, 0);
    for n in 6..=12 {
        for t in [x(0, 1), x(1, 4), x(1, 2)] {
            let q = (n as f64).powf(-t.to_f64());
            let mut gr = RootHypergraph::new(vec![0, 1], n).unwrap();
            for tup in RootHypergraph::complete(vec![0, 1], n).unwrap().tuples() {
                if rng.gen_bool(q.min(1.0)) {
                    gr.insert(tup.clone()).unwrap();
                }
            }
            if gr.is_empty() {
                continue;
            }
            let inst = delta_lemma_instance(&gr, &rg, 0.5, t, 4.0).map_err(|e| e.to_string())?;
            instances += 1;
            if inst.upper_extensible {
                extensible += 1;
                ensure(inst.holds(), || {
                    format!("n {n}, t {t}: delta {} > bound {}", inst.delta, inst.bound)
                })?;
            }
        }
    }
    ensure(extensible >= 20, || {
        format!("only {extensible} upper-extensible instances")
    })?;
    Ok(format!(
        "delta(edgeless) = 0; bound holds on {extensible} upper-extensible of {instances} instances"
    ))
}

// ------------------------------------------------------------------ 9

fn cli(dir: &Path, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_avoidance"))
        .args(args)
        .arg("--manifest")
        .arg(dir.join("manifest.json"))
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || {
        format!(
            "{args:?} exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn criterion_9() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = tmp.path();
    let path = |name: &str| d.join(name).display().to_string();
    let runs: Vec<(&str, Vec<String>)> = vec![
        (
            "simulate",
            [
                "simulate",
                "--n",
                "200",
                "--F",
                "K3",
                "--r",
                "2",
                "--strategy",
                "random",
                "--seed",
                "9",
            ]
            .map(String::from)
            .to_vec(),
        ),
        (
            "estimate",
            [
                "estimate", "--F", "C4", "--r", "2", "--grid", "16,32,64", "--trials", "30", "--seed", "4",
            ]
            .map(String::from)
            .to_vec(),
        ),
        (
            "verify",
            ["verify", "all", "--vmax", "5", "--r", "3", "--k", "2"]
                .map(String::from)
                .to_vec(),
        ),
        (
            "regcheck",
            [
                "regcheck",
                "uniform",
                "--graph",
                "K6",
                "--eta",
                "0.1",
                "--p",
                "1",
                "--samples",
                "200",
                "--seed",
                "5",
            ]
            .map(String::from)
            .to_vec(),
        ),
    ];
    let mut compared = 0;
    for (name, args) in &runs {
        let mut outputs = Vec::new();
        for (rep, jobs) in [(0, "1"), (1, "1"), (2, "4")] {
            let json = path(&format!("{name}-{rep}.json"));
            let csv = path(&format!("{name}-{rep}.csv"));
            let mut full: Vec<&str> = args.iter().map(String::as_str).collect();
            full.extend(["--jobs", jobs, "--json", &json]);
            if *name == "estimate" {
                full.extend(["--csv", &csv]);
            }
            cli(d, &full)?;
            let mut bytes = std::fs::read(&json).map_err(|e| e.to_string())?;
            if *name == "estimate" {
                bytes.extend(std::fs::read(&csv).map_err(|e| e.to_string())?);
            }
            outputs.push(bytes);
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || {
            format!("{name}: outputs differ across runs or --jobs")
        })?;
        compared += 1;
    }
    Ok(format!(
        "{compared} commands byte-identical over 3 runs with --jobs 1 and 4"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "exact threshold values", Duration::from_secs(1), criterion_1),
        (2, "density chain suite", Duration::from_secs(300), criterion_2),
        (3, "lemma suite", Duration::from_secs(600), criterion_3),
        (4, "F^k enumeration", Duration::from_secs(10), criterion_4),
        (5, "game oracle equivalence", Duration::from_secs(120), criterion_5),
        (6, "Monte Carlo exponents", Duration::from_secs(900), criterion_6),
        (7, "regularity checkers", Duration::from_secs(300), criterion_7),
        (8, "co-degree bound", Duration::from_secs(120), criterion_8),
        (9, "determinism", Duration::from_secs(600), criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || *f == id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if took <= limit {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {took:.1?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("criterion {id} PASS {name} ({took:.2?}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id} FAIL {name} ({took:.2?}): {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
