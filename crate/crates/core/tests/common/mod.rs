//! Generators and independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use ttmaps::atlas::{enumerate_graphs, enumerate_single_fold_maps};
use ttmaps::format::{read_file, Document};
use ttmaps::graph::{compose, find_isomorphisms, Edge, Graph, GraphMap, OrientedEdge};
use ttmaps::spectral::TransitionMatrix;

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

/// Every corpus document, sorted by file name.
pub fn corpus() -> Vec<(String, Document)> {
    let mut files: Vec<_> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "tt"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), read_file(&p).unwrap()))
        .collect()
}

pub fn corpus_maps() -> Vec<(String, GraphMap)> {
    corpus()
        .into_iter()
        .flat_map(|(f, d)| d.maps.into_iter().map(move |(n, _, m)| (format!("{f}:{n}"), m)))
        .collect()
}

/// Free reduction of a word in letters `±(i + 1)`.
fn reduce(w: Vec<i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

fn inverse(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|x| -x).collect()
}

/// A random automorphism of `F_r` as a self map of the rose: `moves` random
/// Nielsen moves (multiplication on either side, inversion, transposition)
/// applied to the identity, with free reduction.
pub fn random_rose_automorphism<R: Rng>(rng: &mut R, r: usize, moves: usize) -> GraphMap {
    let mut img: Vec<Vec<i32>> = (1..=r as i32).map(|i| vec![i]).collect();
    for _ in 0..moves {
        let i = rng.gen_range(0..r);
        let mut j = rng.gen_range(0..r);
        while r > 1 && j == i {
            j = rng.gen_range(0..r);
        }
        match rng.gen_range(0..6) {
            0 | 1 if r > 1 => {
                let mut other = img[j].clone();
                if rng.gen_bool(0.5) {
                    other = inverse(&other);
                }
                let w = if rng.gen_bool(0.5) {
                    [img[i].clone(), other].concat()
                } else {
                    [other, img[i].clone()].concat()
                };
                img[i] = reduce(w);
            }
            2 => img[i] = inverse(&img[i]),
            3 => img.swap(i, j),
            _ => {}
        }
    }
    let g = Arc::new(ttmaps::atlas::make_rose(r).unwrap());
    let edge_map = img
        .iter()
        .map(|w| {
            ttmaps::graph::EdgePath(
                w.iter()
                    .map(|&x| OrientedEdge::new(x.unsigned_abs() as usize - 1, x > 0))
                    .collect(),
            )
        })
        .collect();
    GraphMap::new(g.clone(), g, vec![0], edge_map)
}

/// A random irreducible-candidate self map on a multi-vertex graph: a single-fold
/// map of a random rank-2 or rank-3 graph, post-composed with a random
/// automorphism and possibly iterated.
pub struct FoldPool {
    pub maps: Vec<(GraphMap, Vec<ttmaps::graph::GraphIso>)>,
}

impl FoldPool {
    pub fn new() -> Self {
        let mut maps = Vec::new();
        for r in 2..=3 {
            for g in enumerate_graphs(r).unwrap() {
                let g = Arc::new(g);
                let auts = find_isomorphisms(&g, &g);
                for rec in enumerate_single_fold_maps(&g).unwrap() {
                    maps.push((rec.map, auts.clone()));
                }
            }
        }
        FoldPool { maps }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> GraphMap {
        let (f, auts) = self.maps.choose(rng).unwrap();
        let h = auts.choose(rng).unwrap();
        let hm = h.to_map(f.domain.clone(), f.domain.clone());
        let base = if rng.gen_bool(0.15) { hm } else { compose(&hm, f).unwrap() };
        base.iterate(rng.gen_range(1..=2)).unwrap()
    }
}

/// Random vertex and edge relabeling with random edge flips.
pub fn relabel<R: Rng>(rng: &mut R, g: &Graph) -> Graph {
    let mut vp: Vec<usize> = (0..g.num_vertices()).collect();
    vp.shuffle(rng);
    let mut ep: Vec<usize> = (0..g.num_edges()).collect();
    ep.shuffle(rng);
    let names = (0..g.num_vertices()).map(|i| format!("u{i}")).collect();
    let edges = ep
        .iter()
        .enumerate()
        .map(|(k, &e)| {
            let old = g.edge(e);
            let (a, b) = (vp[old.init], vp[old.term]);
            let (init, term) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
            Edge {
                label: format!("t{k}"),
                init,
                term,
            }
        })
        .collect();
    Graph::new(names, edges).unwrap()
}

/// Random nonnegative matrix with `n <= 8` that is primitive by construction
/// often enough to be filtered cheaply.
pub fn random_matrix<R: Rng>(rng: &mut R) -> TransitionMatrix {
    let n = rng.gen_range(1..=8);
    let density = rng.gen_range(0.15..0.7);
    let entries = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| if rng.gen_bool(density) { rng.gen_range(1..=3) } else { 0 })
                .collect()
        })
        .collect();
    TransitionMatrix::from_entries(entries)
}

/// Spectral radius by power iteration in floating point.
pub fn power_iteration(t: &TransitionMatrix) -> f64 {
    let n = t.n();
    let a: Vec<Vec<f64>> = t
        .entries
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, &x)| x as f64 + if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    // (A + I) shares the Perron vector and is primitive when A is irreducible.
    let mut v = vec![1.0; n];
    let mut lam = 0.0;
    for _ in 0..20_000 {
        let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a[i][j] * v[j]).sum()).collect();
        let s: f64 = w.iter().sum();
        let next = s / v.iter().sum::<f64>();
        v = w.iter().map(|x| x / s).collect();
        if (next - lam).abs() < 1e-14 {
            lam = next;
            break;
        }
        lam = next;
    }
    lam - 1.0
}

/// Exact division of integer polynomials (coefficients low to high); the
/// remainder is returned.
pub fn poly_rem(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut r = num.to_vec();
    let d = den.len() - 1;
    assert_eq!(den[d].abs(), 1);
    while r.len() > d {
        let c = r[r.len() - 1] * den[d];
        let s = r.len() - 1 - d;
        for (i, &x) in den.iter().enumerate() {
            r[s + i] -= c * x;
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

pub fn coeffs(p: &ttmaps::poly::IntPoly) -> Vec<i128> {
    p.coeffs().iter().map(|c| c.to_string().parse().unwrap()).collect()
}

/// Largest real root by bisection on a polynomial with a sign change above `lo`.
pub fn largest_root_f64(p: &[i128], lo: f64, hi: f64) -> f64 {
    let eval = |x: f64| p.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64);
    let (mut a, mut b) = (lo, hi);
    let sb = eval(b).signum();
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if eval(m).signum() == sb {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

pub fn timed<T>(f: impl FnOnce() -> T) -> (T, std::time::Duration) {
    let t = std::time::Instant::now();
    let v = f();
    (v, t.elapsed())
}
