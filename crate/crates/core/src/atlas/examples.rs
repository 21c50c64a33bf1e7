//! The worked maps and graphs used throughout the tests and the CLI.

use std::sync::Arc;

use crate::atlas::families::{make_delta_minus, make_rose};
use crate::error::Result;
use crate::graph::{Graph, GraphIso, GraphMap, OrientedEdge};

const G_TABLE: [(&str, &str); 5] = [
    ("a1", "b2"),
    ("b1", "c1"),
    ("b2", "c2"),
    ("c1", "a1"),
    ("c2", "~b1 ~c1"),
];

/// The single-fold map on `Δ₂⁻`: `a1 -> b2, b1 -> c1, b2 -> c2, c1 -> a1, c2 -> ~b1 ~c1`.
pub fn frak_g() -> GraphMap {
    let g = Arc::new(make_delta_minus(2).expect("k = 2"));
    GraphMap::from_table(g, &G_TABLE).expect("valid table")
}

/// Four stacks on the rose with ten petals.
pub fn frak_f() -> GraphMap {
    let labels = ["a1", "a2", "a3", "b1", "b2", "b3", "b4", "c1", "c2", "d1"];
    let g = Arc::new(Graph::from_triples(1, labels.iter().map(|l| (*l, 0, 0))).expect("rose"));
    GraphMap::from_table(
        g,
        &[
            ("a1", "a2"),
            ("a2", "a3"),
            ("a3", "b1 a1 c1"),
            ("b1", "b2"),
            ("b2", "b3"),
            ("b3", "b4"),
            ("b4", "c1 a2 c2 a3 a1"),
            ("c1", "c2"),
            ("c2", "d1 b3 a3 b4 b1"),
            ("d1", "~a1 b1"),
        ],
    )
    .expect("valid table")
}

/// Single-stack two-fold map on a 4-gon of depth 2 with one edge removed.
pub fn gamma() -> GraphMap {
    let g = Arc::new(
        Graph::from_triples(
            4,
            [("a", 0, 1), ("b", 1, 2), ("c", 2, 3), ("d", 3, 0), ("e", 0, 1), ("f", 1, 2), ("g", 2, 3)],
        )
        .expect("graph"),
    );
    GraphMap::from_table(
        g,
        &[
            ("a", "b"),
            ("b", "c"),
            ("c", "d"),
            ("d", "e"),
            ("e", "f"),
            ("f", "g"),
            ("g", "~c ~b ~a"),
        ],
    )
    .expect("valid table")
}

/// `e1 -> e2 -> e3 -> e4 -> e1 e2` on `R_4`.
pub fn rose4_map() -> GraphMap {
    let g = Arc::new(make_rose(4).expect("rose"));
    GraphMap::from_table(g, &[("e1", "e2"), ("e2", "e3"), ("e3", "e4"), ("e4", "e1 e2")]).expect("valid table")
}

/// `n` disjoint copies of `Δ₂⁻`, labels of copy `j` carrying `j` primes;
/// copy `j` maps onto copy `j + 1` and the last copy maps to the first by [`frak_g`].
pub fn copies_map(n: usize) -> Result<GraphMap> {
    let base = make_delta_minus(2)?;
    let primes = |j: usize| "'".repeat(j);
    let mut triples = Vec::new();
    for j in 0..n {
        for e in base.edges() {
            triples.push((format!("{}{}", e.label, primes(j)), e.init + 3 * j, e.term + 3 * j));
        }
    }
    let g = Arc::new(Graph::from_triples(3 * n, triples)?);
    let mut table: Vec<(String, String)> = Vec::new();
    for j in 0..n {
        for (l, img) in G_TABLE {
            let src = format!("{l}{}", primes(j));
            let dst = if j + 1 < n {
                format!("{l}{}", primes(j + 1))
            } else {
                img.to_string()
            };
            table.push((src, dst));
        }
    }
    let t: Vec<(&str, &str)> = table.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    GraphMap::from_table(g, &t)
}

/// The pentagon example for stack and orbit scores: `(Γ, G, ψ₁, ψ₂)`.
pub fn pentagon_example() -> (Graph, Graph, GraphIso, GraphIso) {
    // side letters by the vertex they leave, v0 -> v1 is side c
    let side_from = [("c", 0usize), ("d", 1), ("e", 2), ("a", 3), ("b", 4)];
    let loop_at = [("x1", 4usize), ("x2", 0), ("x3", 1), ("x4", 2), ("x5", 3)];
    let mut triples: Vec<(String, usize, usize)> = Vec::new();
    for letter in ["a", "b", "c", "d", "e"] {
        let from = side_from.iter().find(|(l, _)| *l == letter).expect("side").1;
        for i in 1..=3 {
            triples.push((format!("{letter}{i}"), from, (from + 1) % 5));
        }
    }
    for (l, v) in loop_at {
        triples.push((l.to_string(), v, v));
    }
    let big = Graph::from_triples(5, triples.clone()).expect("graph");
    let keep = ["a1", "a2", "a3", "b1", "c1", "c2", "d1", "d2", "e1", "x2", "x4"];
    let small = Graph::from_triples(5, triples.into_iter().filter(|t| keep.contains(&t.0.as_str()))).expect("graph");

    let by_labels = |shift: usize, cycle: &[&str], loops: &[&str]| {
        let mut em = vec![OrientedEdge::fwd(0); big.num_edges()];
        let n = cycle.len();
        for i in 0..n {
            let a = big.edge_by_label(cycle[i]).expect("label");
            let b = big.edge_by_label(cycle[(i + 1) % n]).expect("label");
            em[a] = OrientedEdge::fwd(b);
        }
        for i in 0..loops.len() {
            let a = big.edge_by_label(loops[i]).expect("label");
            let b = big.edge_by_label(loops[(i + 1) % loops.len()]).expect("label");
            em[a] = OrientedEdge::fwd(b);
        }
        GraphIso {
            vertex_map: (0..5).map(|v| (v + shift) % 5).collect(),
            edge_map: em,
        }
    };
    let mut c1 = Vec::new();
    let mut c2 = Vec::new();
    for i in 1..=3 {
        for l in ["c", "d", "e", "a", "b"] {
            c1.push(format!("{l}{i}"));
        }
        for l in ["d", "a", "c", "e", "b"] {
            c2.push(format!("{l}{i}"));
        }
    }
    let c1: Vec<&str> = c1.iter().map(String::as_str).collect();
    let c2: Vec<&str> = c2.iter().map(String::as_str).collect();
    let psi1 = by_labels(1, &c1, &["x1", "x2", "x3", "x4", "x5"]);
    let psi2 = by_labels(2, &c2, &["x1", "x3", "x5", "x2", "x4"]);
    (small, big, psi1, psi2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_map;

    #[test]
    fn examples_are_valid_maps() {
        for m in [frak_g(), frak_f(), gamma(), rose4_map(), copies_map(2).unwrap(), copies_map(3).unwrap()] {
            assert!(validate_map(&m).is_ok());
            assert!(m.is_self_map());
        }
        assert_eq!(copies_map(1).unwrap().edge_map, frak_g().edge_map);
    }

    #[test]
    fn pentagon_automorphisms() {
        let (_, big, p1, p2) = pentagon_example();
        assert!(p1.is_valid(&big, &big));
        assert!(p2.is_valid(&big, &big));
        assert_eq!(big.num_edges(), 20);
    }
}
