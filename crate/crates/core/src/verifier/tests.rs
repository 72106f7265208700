use super::*;
use crate::graph::canon::are_isomorphic;

fn x(p: i128, q: i128) -> XRational {
    XRational::new(p, q)
}

fn k3() -> Graph {
    Graph::complete(3)
}

fn comparisons(lemma: LemmaId, inst: &Instance) -> Vec<Comparison> {
    match evaluate(lemma, inst).unwrap() {
        Evaluation::Checked { comparisons } => comparisons,
        Evaluation::Filtered { reason } => panic!("unexpectedly filtered: {reason}"),
    }
}

fn fk_members(f: &Graph, k: usize) -> Vec<RootedGraph> {
    crate::constructions::enumerate_fk(f, (0, 1), k)
        .unwrap()
        .member_trees()
        .map(|t| t.realized.clone())
        .collect()
}

#[test]
fn lemma_ids_round_trip() {
    for l in LemmaId::ALL {
        assert_eq!(l.as_str().parse::<LemmaId>().unwrap(), l);
        assert_eq!(serde_json::to_string(&l).unwrap(), format!("\"{}\"", l.as_str()));
    }
    assert_eq!(
        "FtimesFstar".parse::<LemmaId>().unwrap_err(),
        Error::Parameter("unknown lemma `FtimesFstar`".into())
    );
    assert_eq!("ftimes-fstar".parse::<LemmaId>().unwrap(), LemmaId::FtimesFstar);
}

#[test]
fn k3_chain_values() {
    let inst = Instance::new(vec![RootedGraph::unrooted(k3())], &[("r_max", int(4))]);
    let cs = comparisons(LemmaId::DensityChain, &inst);
    let values: Vec<_> = cs.iter().map(|c| (c.lhs, c.rhs)).collect();
    assert_eq!(
        values,
        vec![
            (x(1, 1), x(1, 1)),
            (x(1, 1), x(3, 2)),
            (x(3, 2), x(9, 5)),
            (x(9, 5), x(27, 14)),
            (x(27, 14), x(2, 1)),
        ]
    );
    assert!(cs.iter().all(Comparison::holds));
}

#[test]
fn chain_filters_forests() {
    let res = check_density_chain(5, 5).unwrap();
    assert!(res.pass);
    // trees on 1..=5 vertices: 1 + 1 + 1 + 2 + 3
    assert_eq!(res.filtered, 8);
    assert_eq!(res.instances, 1 + 1 + 2 + 6 + 21);
    assert_eq!(res.checked, (res.instances - 8) * 6);
}

#[test]
fn m2_le_2m_examples() {
    let one = |g: Graph| comparisons(LemmaId::M2Le2m, &Instance::new(vec![RootedGraph::unrooted(g)], &[]))[0].clone();
    let c = one(Graph::complete(4));
    assert_eq!((c.lhs, c.rhs), (x(5, 2), x(3, 1)));
    let c = one(k3());
    assert_eq!((c.lhs, c.rhs), (x(2, 1), x(2, 1)));
    assert!(c.holds());
    let res = check_m2_le_2m(3).unwrap();
    assert!(res.pass);
    // graphs on 3 vertices with an edge: one edge, path, triangle
    assert_eq!(res.checked, 3);
}

#[test]
fn gluing_triangles_gives_the_diamond() {
    let a = RootedGraph::at_pair(k3(), 0, 1).unwrap();
    let glued = root_join(&[a.clone(), a.clone()]).unwrap();
    assert!(are_isomorphic(glued.graph(), &Graph::diamond()));
    let inst = Instance::new(vec![a.clone(), a], &[("rooted", XRational::ZERO)]);
    let cs = comparisons(LemmaId::Building, &inst);
    assert_eq!(cs[0].lhs, x(2, 1));
    assert!(cs.iter().all(Comparison::holds));

    let c4 = RootedGraph::at_pair(Graph::cycle(4), 0, 1).unwrap();
    let cs = comparisons(
        LemmaId::Building,
        &Instance::new(vec![c4.clone(), c4], &[("rooted", XRational::ZERO)]),
    );
    assert_eq!(cs[0].lhs, x(3, 2));
    assert!(cs.iter().all(Comparison::holds));
}

#[test]
fn gluing_an_edge_changes_nothing() {
    let a = RootedGraph::at_pair(Graph::cycle(5), 0, 1).unwrap();
    let glued = root_join(&[a.clone(), RootedGraph::rooted_edge()]).unwrap();
    assert_eq!(glued.graph(), a.graph());
}

#[test]
fn building_filters_unequal_densities() {
    let a = RootedGraph::at_pair(k3(), 0, 1).unwrap();
    let b = RootedGraph::at_pair(Graph::cycle(4), 0, 1).unwrap();
    let ev = evaluate(
        LemmaId::Building,
        &Instance::new(vec![a, b], &[("rooted", XRational::ZERO)]),
    )
    .unwrap();
    assert!(matches!(ev, Evaluation::Filtered { .. }));
}

#[test]
fn building_pool_passes() {
    let res = check_building(&default_patterns()).unwrap();
    assert!(res.pass, "{:?}", res.counterexamples);
    assert!(res.checked > 0);
}

#[test]
fn fstar_density_tight_cases() {
    let fe = RootedGraph::at_pair(k3(), 0, 1).unwrap();
    // k = 1, the rooted edge: 0 − 1/m̄₂ʳ ≥ −1/m̄₂ʳ
    let leaf = RootedGraph::rooted_edge();
    let c = &comparisons(
        LemmaId::FstarDensity,
        &fstar_instance(&fe, &leaf, &[("k", int(1)), ("r", int(3))]),
    )[0];
    assert_eq!(c.lhs, c.rhs);
    assert_eq!(c.rhs, x(-5, 9));
    // k = r = 2, F* = K3: 1 − 3·(2/3) = −1 ≥ −1
    let c = &comparisons(
        LemmaId::FstarDensity,
        &fstar_instance(&fe, &fe, &[("k", int(2)), ("r", int(2))]),
    )[0];
    assert_eq!((c.lhs, c.rhs), (x(-1, 1), x(-1, 1)));
    let res = check_fstar_density(&k3(), (0, 1), 3, 3).unwrap();
    assert!(res.pass);
    assert_eq!(res.instances, 1 + 1 + 2);
}

#[test]
fn klr_density_k3() {
    let fe = RootedGraph::at_pair(k3(), 0, 1).unwrap();
    let cs = comparisons(
        LemmaId::KlrDensity,
        &Instance::new(vec![fe.clone()], &[("k", int(2)), ("r", int(2))]),
    );
    assert_eq!((cs[0].lhs, cs[0].rhs), (x(1, 1), x(3, 2)));
    // t = 2/3 − 5/9 = 1/9
    let t = m2_bar(&k3(), 2).unwrap().value.recip() - m2_bar(&k3(), 3).unwrap().value.recip();
    assert_eq!(t, x(1, 9));
    let cs = comparisons(
        LemmaId::KlrDensity,
        &Instance::new(vec![fe], &[("k", int(2)), ("r", int(3))]),
    );
    // (e,K3) at t: (2 − 1)/(3 − 2 − 1/9) = 9/8
    assert_eq!(cs[0].lhs, x(9, 8));
    assert!(cs.iter().all(Comparison::holds));
    for f in default_patterns() {
        let res = check_klr_density(&f, (0, 1), 4).unwrap();
        assert!(res.pass, "{:?}", res.counterexamples);
        assert_eq!(res.filtered, 0);
    }
}

#[test]
fn klr_filters_bad_premise() {
    // bowtie: two triangles sharing a vertex, not 2-balanced
    let fe = RootedGraph::at_pair(Graph::bowtie(), 0, 1).unwrap();
    let ev = evaluate(
        LemmaId::KlrDensity,
        &Instance::new(vec![fe], &[("k", int(2)), ("r", int(2))]),
    )
    .unwrap();
    assert!(matches!(ev, Evaluation::Filtered { .. }));
}

#[test]
fn rooted_density_k3() {
    let fe = RootedGraph::at_pair(k3(), 0, 1).unwrap();
    let cs = comparisons(LemmaId::RootedDensity, &fstar_instance(&fe, &fe, &[("k", int(2))]));
    // m₁(P₃) = 1 < 3/2, then one comparison per V₀ ⊊ V(K3)
    assert_eq!((cs[0].lhs, cs[0].rhs), (x(1, 1), x(3, 2)));
    assert_eq!(cs.len(), 1 + 7);
    assert!(cs.iter().all(Comparison::holds));
    let res = check_rooted_density(&k3(), (0, 1), 3).unwrap();
    assert!(res.pass);
    assert_eq!(res.instances, 1 + 2);
}

#[test]
fn forbidden_density_k3() {
    let inst = Instance::new(vec![RootedGraph::unrooted(k3())], &[("r", int(2))]);
    let cs = comparisons(LemmaId::ForbiddenDensity, &inst);
    assert_eq!((cs[0].lhs, cs[0].rhs), (x(2, 1), x(2, 1)));
    assert_eq!((cs[1].lhs, cs[1].rhs), (x(2, 1), x(3, 1)));
    let res = check_forbidden_density(5, 3).unwrap();
    assert!(res.pass);
    assert!(res.checked > 0);
}

#[test]
fn prod_density_triangle_at_two() {
    let fe = RootedGraph::at_pair(k3(), 0, 1).unwrap();
    let res = check_prod_density(&[(fe.clone(), fe)], &[x(2, 1)]).unwrap();
    assert_eq!(res.checked, 1);
    assert!(res.pass);
}

#[test]
fn prod_density_edgeless_attachment_is_identity() {
    // H − e edgeless: the product drops the non-root edges of G
    let base = RootedGraph::new(Graph::cycle(4), vec![0]).unwrap();
    let eh = RootedGraph::rooted_edge();
    let cs = comparisons(LemmaId::ProdDensity, &Instance::new(vec![base, eh], &[("t", x(1, 1))]));
    assert_eq!(cs[0].lhs, XRational::ZERO);
}

#[test]
fn ftimes_fstar_k3() {
    let fe = RootedGraph::at_pair(k3(), 0, 1).unwrap();
    let c = &comparisons(LemmaId::FtimesFstar, &fstar_instance(&fe, &fe, &[("r", int(2))]))[0];
    // K3 × (e,K3): 6 vertices, 9 edges
    assert_eq!((c.lhs, c.rhs), (x(3, 2), x(3, 2)));
    let res = check_ftimes_fstar(&k3(), (0, 1), 3).unwrap();
    assert!(res.pass);
    assert_eq!(res.instances, 2);
    assert!(check_ftimes_fstar(&k3(), (0, 1), 1).is_err());
}

#[test]
fn counterexamples_reverify_from_stored_data() {
    let fe = RootedGraph::at_pair(k3(), 0, 1).unwrap();
    let inst = Instance::new(vec![fe.clone(), fe], &[("r", int(2))]);
    let c = comparisons(LemmaId::FtimesFstar, &inst).remove(0);
    let genuine = Counterexample {
        instance: inst.clone(),
        clause: c.clause.clone(),
        lhs: c.lhs,
        rhs: c.rhs,
        relation: Relation::Lt,
    };
    // same values under a strict relation do not match the stored clause
    assert!(!genuine.reverify(LemmaId::FtimesFstar).unwrap());
    let tampered = Counterexample {
        lhs: x(7, 4),
        relation: Relation::Le,
        ..genuine
    };
    assert!(!tampered.reverify(LemmaId::FtimesFstar).unwrap());
    let json = serde_json::to_string(&tampered).unwrap();
    let back: Counterexample = serde_json::from_str(&json).unwrap();
    assert_eq!(back, tampered);
}

#[test]
fn narrowing_keeps_one_t() {
    let fe = RootedGraph::at_pair(k3(), 0, 1).unwrap();
    let inst = Instance::new(
        vec![fe.clone(), fe],
        &[("t.000", x(1, 1)), ("t.001", x(2, 1)), ("k", int(2))],
    );
    let n = inst.narrowed(&Some(("t".into(), x(2, 1))));
    assert_eq!(n.params.len(), 2);
    assert_eq!(n.params["t"], x(2, 1));
    assert_eq!(n.param_list("t"), vec![x(2, 1)]);
}

#[test]
fn fk_members_feed_the_suite() {
    assert_eq!(fk_members(&k3(), 3).len(), 2);
    let opts = VerifyOptions {
        v_max: 4,
        r_max: 3,
        k_max: 2,
        patterns: vec![k3(), Graph::cycle(4)],
    };
    let all = run_all(&opts).unwrap();
    assert_eq!(all.len(), LemmaId::ALL.len());
    for r in &all {
        assert!(r.pass, "{}: {:?}", r.lemma, r.counterexamples);
    }
}
