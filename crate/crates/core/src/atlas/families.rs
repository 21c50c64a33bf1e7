//! Roses, polygonal graphs and the almost 3-gonal graphs.

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn make_rose(r: usize) -> Result<Graph> {
    if r == 0 {
        return Err(Error::Argument("a rose needs at least one petal".into()));
    }
    Graph::from_triples(1, (1..=r).map(|i| (format!("e{i}"), 0, 0)))
}

/// `P_{s,k}`: vertices `v0..v_{s-1}`, side `i` is `k` parallel edges
/// `e{i}_{1..k}` from `v_i` to `v_{i+1 mod s}`.
pub fn make_polygonal(s: usize, k: usize) -> Result<Graph> {
    if s == 0 || k == 0 {
        return Err(Error::Argument("polygonal graphs need s >= 1 and k >= 1".into()));
    }
    Graph::from_triples(
        s,
        (0..s).flat_map(|i| (1..=k).map(move |j| (format!("e{i}_{j}"), i, (i + 1) % s))),
    )
}

fn three_gonal(side_a: usize, side_b: usize, side_c: usize, a_from: usize, b_from: usize, c_from: usize) -> Result<Graph> {
    let mut t = Vec::new();
    for (letter, count, from) in [("a", side_a, a_from), ("b", side_b, b_from), ("c", side_c, c_from)] {
        for j in 1..=count {
            t.push((format!("{letter}{j}"), from, (from + 1) % 3));
        }
    }
    Graph::from_triples(3, t)
}

/// `P_{3,k}` minus one edge: `a1..a_{k-1}` from `v0` to `v1`, `c1..ck` from
/// `v1` to `v2`, `b1..bk` from `v2` to `v0`.
pub fn make_delta_minus(k: usize) -> Result<Graph> {
    if k < 2 {
        return Err(Error::Argument("the almost 3-gonal graphs need k >= 2".into()));
    }
    three_gonal(k - 1, k, k, 0, 2, 1)
}

/// `P_{3,k+1}` minus one edge from each of two sides: `b1..bk` from `v0` to
/// `v1`, `c1..ck` from `v1` to `v2`, `a1..a_{k+1}` from `v2` to `v0`.
pub fn make_delta_plus(k: usize) -> Result<Graph> {
    if k < 2 {
        return Err(Error::Argument("the almost 3-gonal graphs need k >= 2".into()));
    }
    three_gonal(k + 1, k, k, 2, 0, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{are_isomorphic, structure};

    #[test]
    fn ranks_and_sizes() {
        let d = make_delta_minus(2).unwrap();
        let s = structure(&d);
        assert_eq!((s.rank, d.num_edges(), d.num_vertices(), s.min_valence), (3, 5, 3, 3));
        assert_eq!(structure(&make_delta_plus(2).unwrap()).rank, 5);
        assert_eq!(make_delta_plus(2).unwrap().num_edges(), 7);
        for k in 2..6 {
            assert_eq!(structure(&make_delta_minus(k).unwrap()).rank, 3 * k - 3);
            assert_eq!(structure(&make_delta_plus(k).unwrap()).rank, 3 * k - 1);
        }
        for (s, k) in [(1, 3), (2, 2), (3, 2), (4, 3)] {
            assert_eq!(structure(&make_polygonal(s, k).unwrap()).rank, s * k - s + 1);
        }
        assert_eq!(structure(&make_rose(4).unwrap()).rank, 4);
    }

    #[test]
    fn rose_is_one_gon() {
        for r in 1..5 {
            assert!(are_isomorphic(&make_polygonal(1, r).unwrap(), &make_rose(r).unwrap()));
        }
    }

    #[test]
    fn delta_is_polygon_minus_edges() {
        let p = make_polygonal(3, 2).unwrap();
        let d = make_delta_minus(2).unwrap();
        let minus = Graph::new(
            p.vertex_names().to_vec(),
            p.edges().iter().filter(|e| e.label != "e0_2").cloned().collect(),
        )
        .unwrap();
        assert!(are_isomorphic(&minus, &d));
        let p = make_polygonal(3, 3).unwrap();
        let plus = Graph::new(
            p.vertex_names().to_vec(),
            p.edges().iter().filter(|e| e.label != "e0_3" && e.label != "e1_3").cloned().collect(),
        )
        .unwrap();
        assert!(are_isomorphic(&plus, &make_delta_plus(2).unwrap()));
    }
}
