mod common;

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use ttmaps::atlas::{enumerate_graphs, make_polygonal};
use ttmaps::folds::{decompose, finite_order_check};
use ttmaps::format::{parse, print, Document};
use ttmaps::graph::{
    apply, are_isomorphic, compose, count_isomorphisms, find_isomorphisms, EdgePath, Graph, GraphMap, OrientedEdge,
};
use ttmaps::spectral::{char_poly, leading_eigenvalue, transition_matrix};
use ttmaps::stacks::theorem_a_check;
use ttmaps::symmetry::{recognize_polygonal, stack_score};

fn pool() -> &'static FoldPool {
    static P: OnceLock<FoldPool> = OnceLock::new();
    P.get_or_init(FoldPool::new)
}

fn small_graphs() -> &'static Vec<Graph> {
    static G: OnceLock<Vec<Graph>> = OnceLock::new();
    G.get_or_init(|| (2..=3).flat_map(|r| enumerate_graphs(r).unwrap()).collect())
}

fn random_map(seed: u64) -> GraphMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if rng.gen_bool(0.5) {
        let r = rng.gen_range(1..=4);
        let k = rng.gen_range(0..=8);
        random_rose_automorphism(&mut rng, r, k)
    } else {
        pool().sample(&mut rng)
    }
}

fn random_path(g: &Graph, seed: u64) -> EdgePath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = rng.gen_range(0..g.num_vertices());
    let len = rng.gen_range(1..=6);
    let mut steps = Vec::new();
    for _ in 0..len {
        let out = g.outgoing(cur);
        if out.is_empty() {
            break;
        }
        let o = out[rng.gen_range(0..out.len())];
        steps.push(o);
        cur = g.term(o);
    }
    if steps.is_empty() {
        steps.push(OrientedEdge::fwd(0));
    }
    EdgePath(steps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn image_of_reverse_is_reverse_of_image(seed in any::<u64>(), pseed in any::<u64>()) {
        let f = random_map(seed);
        let p = random_path(&f.domain, pseed);
        prop_assert_eq!(apply(&f, &p.reversed()), apply(&f, &p).reversed());
        prop_assert!(apply(&f, &p).is_connected_in(&f.codomain));
    }

    #[test]
    fn transition_matrix_of_composition(seed in any::<u64>(), shift in 1u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.gen_range(1..=4);
        let f = random_rose_automorphism(&mut rng, r, 4);
        let mut rng2 = ChaCha8Rng::seed_from_u64(seed.wrapping_add(shift));
        let g = random_rose_automorphism(&mut rng2, r, 4);
        let gf = compose(&g, &f).unwrap();
        let lhs = transition_matrix(&gf, None).unwrap();
        let rhs = transition_matrix(&f, None).unwrap().mul(&transition_matrix(&g, None).unwrap());
        prop_assert_eq!(lhs.entries, rhs.entries);
    }

    #[test]
    fn relabeled_graphs_are_isomorphic(idx in 0usize..10_000, seed in any::<u64>()) {
        let gs = small_graphs();
        let g = &gs[idx % gs.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = relabel(&mut rng, g);
        prop_assert!(are_isomorphic(g, &h));
        prop_assert_eq!(count_isomorphisms(g, &h), count_isomorphisms(g, g));
        let isos = find_isomorphisms(g, &h);
        let inv = isos[0].inverse();
        for i in isos.iter().take(8) {
            prop_assert!(i.is_valid(g, &h));
            prop_assert!(inv.after(i).is_valid(g, g));
        }
        // distinct graphs of the census are pairwise non-isomorphic
        let other = &gs[(idx + 1) % gs.len()];
        prop_assert!(!are_isomorphic(other, &h) || std::ptr::eq(other, g));
    }

    #[test]
    fn decompositions_recompose(seed in any::<u64>()) {
        let f = random_map(seed);
        let d = decompose(&f).unwrap();
        prop_assert_eq!(d.recompose().unwrap(), f.clone());
        prop_assert!(d.ledger_violations().unwrap().is_empty());
        prop_assert_eq!(d.m(), f.excess());
    }

    #[test]
    fn stack_score_ignores_labels(idx in 0usize..10_000, seed in any::<u64>()) {
        let gs = small_graphs();
        let g = &gs[idx % gs.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = relabel(&mut rng, g);
        let a = stack_score(g).unwrap();
        let b = stack_score(&h).unwrap();
        prop_assert_eq!(a.class_count, b.class_count);
        prop_assert_eq!(a.extra_edges <= g.num_edges() * g.num_vertices(), true);
    }

    #[test]
    fn polygonal_graphs_are_recognized(s in 1usize..=6, k in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = relabel(&mut rng, &make_polygonal(s, k).unwrap());
        let rec = recognize_polygonal(&g).unwrap();
        let spec = rec.spec();
        prop_assert!(spec.is_some(), "P({},{}) not recognized", s, k);
        let spec = spec.unwrap();
        prop_assert_eq!((spec.s, spec.k), (s, k));
        prop_assert!(spec.iso.is_valid(&g, &make_polygonal(s, k).unwrap()));
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let f = random_map(seed);
        let doc = Document::single("G", "f", &f);
        let text = print(&doc);
        let back = parse(&text).unwrap();
        prop_assert_eq!(print(&back), text);
        prop_assert_eq!(back.map("f").unwrap(), &f);
    }

    #[test]
    fn fold_bound_on_random_maps(seed in any::<u64>()) {
        let f = random_map(seed);
        match theorem_a_check(&f) {
            Ok(c) => prop_assert!(c.holds),
            Err(ttmaps::Error::Hypothesis(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
        if let Ok(r) = finite_order_check(&f) {
            prop_assert!(r.equivalent, "{:?}", r);
        }
    }

    #[test]
    fn char_poly_is_conjugation_invariant(seed in any::<u64>()) {
        let f = random_map(seed);
        let g = f.domain.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let auts = find_isomorphisms(&g, &g);
        let h = &auts[rng.gen_range(0..auts.len())];
        let hm = h.to_map(g.clone(), g.clone());
        let hi = h.inverse().to_map(g.clone(), g.clone());
        let c = compose(&hm, &compose(&f, &hi).unwrap()).unwrap();
        let (t1, t2) = (transition_matrix(&f, None).unwrap(), transition_matrix(&c, None).unwrap());
        prop_assert_eq!(char_poly(&t1), char_poly(&t2));
        let (a, b) = (
            leading_eigenvalue(&t1, &ttmaps::spectral::default_precision()),
            leading_eigenvalue(&t2, &ttmaps::spectral::default_precision()),
        );
        prop_assert!(a.cmp_exact(&b).is_eq());
        prop_assert!((power_iteration(&t1) - a.float_hint).abs() < 1e-6 || !ttmaps::spectral::is_irreducible(&t1));
    }
}

#[test]
fn rank_one_rose_maps_are_automorphisms() {
    let g = Arc::new(ttmaps::atlas::make_rose(1).unwrap());
    let f = GraphMap::from_table(g, &[("e1", "~e1")]).unwrap();
    let r = finite_order_check(&f);
    // a one-petal rose has valence 2, so the map is not irreducible in the graph sense
    assert!(matches!(r, Err(ttmaps::Error::Hypothesis(_))));
    assert_eq!(decompose(&f).unwrap().m(), 0);
}
