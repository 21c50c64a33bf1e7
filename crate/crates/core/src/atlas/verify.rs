//! The minimal rank-3 stretch factor among single-fold maps, and the
//! disconnected copies example.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::atlas::enumerate::{
    count_single_fold_maps, enumerate_graphs, enumerate_single_fold_maps_with, family_name, LambdaCache, MapRecord,
};
use crate::atlas::examples::copies_map;
use crate::atlas::families::make_delta_minus;
use crate::error::Result;
use crate::folds::decompose;
use crate::graph::{are_isomorphic, compose, find_isomorphisms, GraphMap};
use crate::poly::{IntPoly, RealRoot};
use crate::spectral::{default_precision, is_irreducible, leading_eigenvalue, transition_matrix};

/// `x^5 - x - 1`.
pub fn x5_x_1() -> IntPoly {
    IntPoly::from_i64(&[-1, -1, 0, 0, 0, 1])
}

/// `x^5 - x^4 - 1`.
pub fn x5_x4_1() -> IntPoly {
    IntPoly::from_i64(&[-1, 0, 0, 0, -1, 1])
}

fn largest(p: &IntPoly) -> RealRoot {
    RealRoot::largest(p).expect("polynomial has a real root")
}

#[derive(Clone, Debug, Serialize)]
pub struct Corollary71Report {
    /// `ρ^4 < 2`, `ρ^6 < 3` and `2^(1/4) < 3^(1/6)` for `ρ` the largest root of `x^5 - x - 1`.
    pub inequalities_hold: bool,
    /// Every map with at least two folds on at most six edges has `λ > ρ`.
    pub multi_fold_excluded: bool,
    pub admitting_graphs: Vec<String>,
    pub records: usize,
    pub minimal_poly: String,
    pub minimal_lambda: f64,
    pub minimal_is_x5_x_1: bool,
    pub minimizers: usize,
    pub minimizers_on_delta: bool,
    pub minimizers_conjugate: bool,
    pub delta_values: usize,
    pub runner_up_is_x5_x4_1: bool,
    pub reducible_filtered: usize,
    pub holds: bool,
}

/// `h ∘ f ∘ h⁻¹` for an automorphism `h`.
fn conjugate(f: &GraphMap, h: &crate::graph::GraphIso) -> Result<GraphMap> {
    let g = f.domain.clone();
    let hm = h.to_map(g.clone(), g.clone());
    let hi = h.inverse().to_map(g.clone(), g);
    compose(&hm, &compose(f, &hi)?)
}

pub fn are_conjugate(f: &GraphMap, g: &GraphMap) -> Result<bool> {
    for h in find_isomorphisms(&f.domain, &f.domain) {
        let c = conjugate(f, &h)?;
        if c.edge_map == g.edge_map && c.vertex_map == g.vertex_map {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn corollary_71_verify() -> Result<Corollary71Report> {
    let rho = largest(&x5_x_1());
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let inequalities_hold = rho.clone().pow_cmp_int(4, &two) == Ordering::Less
        && rho.clone().pow_cmp_int(6, &three) == Ordering::Less
        && BigInt::from(8) < BigInt::from(9);
    // rank-3 graphs with valences >= 3 have at most 6 edges
    let multi_fold_excluded = (3..=6).all(|n| rho.clone().pow_cmp_int(n, &three) == Ordering::Less);

    let cache = LambdaCache::default();
    let delta = make_delta_minus(2)?;
    let mut all: Vec<MapRecord> = Vec::new();
    let mut admitting = Vec::new();
    let mut delta_records: Vec<MapRecord> = Vec::new();
    let mut reducible_filtered = 0;
    for (i, g) in enumerate_graphs(3)?.into_iter().enumerate() {
        let g = Arc::new(g);
        let recs = enumerate_single_fold_maps_with(&g, &cache)?;
        if recs.is_empty() {
            continue;
        }
        admitting.push(family_name(&g).unwrap_or_else(|| format!("graph#{i}")));
        if are_isomorphic(&g, &delta) {
            reducible_filtered = count_single_fold_maps(&g) - recs.len();
            delta_records = recs.clone();
        }
        all.extend(recs);
    }
    all.sort_by(|a, b| a.lambda.cmp_exact(&b.lambda));
    let min = all.first().expect("rank 3 admits single-fold maps").lambda.clone();
    let minimal_poly = min.minimal_poly();
    let minimizers: Vec<&MapRecord> = all.iter().filter(|r| r.lambda.cmp_exact(&min).is_eq()).collect();
    let minimizers_on_delta = minimizers.iter().all(|r| are_isomorphic(&r.graph, &delta));
    let mut minimizers_conjugate = minimizers_on_delta;
    if minimizers_on_delta {
        for r in &minimizers[1..] {
            if !are_conjugate(&minimizers[0].map, &r.map)? {
                minimizers_conjugate = false;
                break;
            }
        }
    }
    delta_records.sort_by(|a, b| a.lambda.cmp_exact(&b.lambda));
    let mut values: Vec<&MapRecord> = Vec::new();
    for r in &delta_records {
        if values.last().is_none_or(|v| !v.lambda.cmp_exact(&r.lambda).is_eq()) {
            values.push(r);
        }
    }
    let runner_up_is_x5_x4_1 = values.len() >= 2 && values[1].lambda.cmp_root(&largest(&x5_x4_1())).is_eq();
    let minimal_is_x5_x_1 = min.cmp_root(&rho).is_eq() && minimal_poly == x5_x_1();
    let holds = inequalities_hold
        && multi_fold_excluded
        && minimal_is_x5_x_1
        && minimizers_on_delta
        && minimizers_conjugate
        && values.len() == 2
        && runner_up_is_x5_x4_1
        && reducible_filtered > 0;
    Ok(Corollary71Report {
        inequalities_hold,
        multi_fold_excluded,
        admitting_graphs: admitting,
        records: all.len(),
        minimal_poly: minimal_poly.to_string(),
        minimal_lambda: min.float_hint,
        minimal_is_x5_x_1,
        minimizers: minimizers.len(),
        minimizers_on_delta,
        minimizers_conjugate,
        delta_values: values.len(),
        runner_up_is_x5_x4_1,
        reducible_filtered,
        holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CopiesReport {
    pub copies: usize,
    pub m: usize,
    pub irreducible: bool,
    pub char_poly: String,
    pub lambda: f64,
    /// `λ^copies` equals the largest root of `x^5 - x - 1`, decided exactly.
    pub power_matches: bool,
    pub holds: bool,
}

/// The map cycling through `copies` disjoint copies of the almost 3-gonal
/// graph: one fold, irreducible, and `λ^copies` equal to the largest root of
/// `x^5 - x - 1`.
pub fn disconnected_example_check(copies: usize) -> Result<CopiesReport> {
    let f = copies_map(copies)?;
    let m = decompose(&f)?.m();
    let t = transition_matrix(&f, None)?;
    let irreducible = is_irreducible(&t);
    let lambda = leading_eigenvalue(&t, &default_precision());
    let mut power = lambda.root.pow_root(copies);
    let power_matches = power.cmp_exact(&mut largest(&x5_x_1())) == Ordering::Equal;
    Ok(CopiesReport {
        copies,
        m,
        irreducible,
        char_poly: lambda.char_poly.to_string(),
        lambda: lambda.float_hint,
        power_matches,
        holds: m == 1 && irreducible && power_matches,
    })
}
