//! Transition matrices, irreducibility and primitivity, exact leading
//! eigenvalues, Perron length functions and the train track turn check.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{structure, EdgeId, GraphMap, OrientedEdge};
use crate::poly::{certify_irreducible, rat_to_f64, IntPoly, RealRoot};

/// `T[i][j]` counts occurrences of `e_j` (either direction) in `f(e_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TransitionMatrix {
    pub edge_order: Vec<EdgeId>,
    pub entries: Vec<Vec<u64>>,
}

impl TransitionMatrix {
    pub fn from_entries(entries: Vec<Vec<u64>>) -> Self {
        let n = entries.len();
        assert!(entries.iter().all(|r| r.len() == n), "square matrix expected");
        TransitionMatrix {
            edge_order: (0..n).collect(),
            entries,
        }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.entries.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn total(&self) -> u64 {
        self.row_sums().iter().sum()
    }

    pub fn to_bigint(&self) -> Vec<Vec<BigInt>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    pub fn mul(&self, other: &TransitionMatrix) -> TransitionMatrix {
        let n = self.n();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| self.entries[i][k] * other.entries[k][j]).sum())
                    .collect()
            })
            .collect();
        TransitionMatrix {
            edge_order: self.edge_order.clone(),
            entries,
        }
    }

    fn arcs(&self) -> Vec<Vec<usize>> {
        self.entries
            .iter()
            .map(|r| (0..r.len()).filter(|&j| r[j] > 0).collect())
            .collect()
    }
}

/// Transition matrix of a self map with rows and columns in `order`
/// (defaults to edge id order).
pub fn transition_matrix(f: &GraphMap, order: Option<&[EdgeId]>) -> Result<TransitionMatrix> {
    if !f.is_self_map() {
        return Err(Error::NotSelfMap);
    }
    let n = f.domain.num_edges();
    let order: Vec<EdgeId> = match order {
        Some(o) => o.to_vec(),
        None => (0..n).collect(),
    };
    let mut pos = vec![usize::MAX; n];
    for (i, &e) in order.iter().enumerate() {
        if e >= n || pos[e] != usize::MAX {
            return Err(Error::Argument("edge order is not a permutation of the edges".into()));
        }
        pos[e] = i;
    }
    if order.len() != n {
        return Err(Error::Argument("edge order is not a permutation of the edges".into()));
    }
    let mut entries = vec![vec![0u64; n]; n];
    for (i, &e) in order.iter().enumerate() {
        for o in f.edge_map[e].steps() {
            entries[i][pos[o.edge]] += 1;
        }
    }
    Ok(TransitionMatrix { edge_order: order, entries })
}

fn reach(arcs: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; arcs.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(u) = stack.pop() {
        for &v in &arcs[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

/// Strong connectivity of the positivity digraph (a 1x1 zero matrix is not irreducible).
pub fn is_irreducible(t: &TransitionMatrix) -> bool {
    let n = t.n();
    if n == 0 {
        return false;
    }
    if n == 1 {
        return t.entries[0][0] > 0;
    }
    let arcs = t.arcs();
    let mut rev = vec![Vec::new(); n];
    for (u, vs) in arcs.iter().enumerate() {
        for &v in vs {
            rev[v].push(u);
        }
    }
    reach(&arcs, 0).into_iter().all(|b| b) && reach(&rev, 0).into_iter().all(|b| b)
}

/// Index of imprimitivity of an irreducible matrix: the gcd of directed cycle lengths.
pub fn period(t: &TransitionMatrix) -> usize {
    let arcs = t.arcs();
    let n = t.n();
    let mut level = vec![usize::MAX; n];
    level[0] = 0;
    let mut q = VecDeque::from([0usize]);
    let mut g = 0usize;
    while let Some(u) = q.pop_front() {
        for &v in &arcs[u] {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                q.push_back(v);
            } else {
                let d = (level[u] + 1).abs_diff(level[v]);
                g = g.gcd(&d);
            }
        }
    }
    g
}

pub fn is_primitive(t: &TransitionMatrix) -> bool {
    is_irreducible(t) && period(t) == 1
}

/// Characteristic polynomial `det(xI - M)` by fraction-free elimination.
/// Every pivot is a leading principal minor of `xI - M`, hence monic, so
/// all divisions are exact.
pub fn char_poly_bigint(m: &[Vec<BigInt>]) -> IntPoly {
    let n = m.len();
    if n == 0 {
        return IntPoly::constant(1);
    }
    let mut a: Vec<Vec<IntPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = IntPoly::constant(-m[i][j].clone());
                    if i == j {
                        &c + &IntPoly::x()
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let mut prev = IntPoly::constant(1);
    for k in 0..n - 1 {
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].clone()
}

pub fn char_poly(t: &TransitionMatrix) -> IntPoly {
    char_poly_bigint(&t.to_bigint())
}

/// The leading eigenvalue as an exact algebraic number.
#[derive(Clone, Debug)]
pub struct AlgebraicValue {
    pub char_poly: IntPoly,
    pub root: RealRoot,
    pub float_hint: f64,
}

impl AlgebraicValue {
    pub fn lo(&self) -> &BigRational {
        self.root.lo()
    }

    pub fn hi(&self) -> &BigRational {
        self.root.hi()
    }

    pub fn refine(&mut self, width: &BigRational) {
        self.root.refine_to(width);
    }

    pub fn cmp_exact(&self, other: &AlgebraicValue) -> Ordering {
        let (mut a, mut b) = (self.root.clone(), other.root.clone());
        a.cmp_exact(&mut b)
    }

    pub fn cmp_root(&self, other: &RealRoot) -> Ordering {
        let (mut a, mut b) = (self.root.clone(), other.clone());
        a.cmp_exact(&mut b)
    }

    pub fn cmp_int(&self, c: i64) -> Ordering {
        let mut a = self.root.clone();
        a.cmp_rational(&BigRational::from_integer(BigInt::from(c)))
    }

    /// Compares `lambda^n` with the integer `c`.
    pub fn pow_cmp(&self, n: usize, c: &BigInt) -> Ordering {
        let mut a = self.root.clone();
        a.pow_cmp_int(n, c)
    }

    /// Minimal polynomial of the leading eigenvalue, found by exact
    /// trial division of numerically suggested factors.
    pub fn minimal_poly(&self) -> IntPoly {
        minimal_factor(&self.char_poly, &self.root)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "char_poly": self.char_poly.to_string(),
            "char_poly_coeffs": self.char_poly.coeff_strings(),
            "lambda_interval": [self.lo().to_string(), self.hi().to_string()],
            "lambda_float": format_float(self.float_hint),
        })
    }
}

/// Six significant digits.
pub fn format_float(x: f64) -> String {
    format!("{}", format!("{x:.5e}").parse::<f64>().unwrap_or(x))
}

/// `2^-40`.
pub fn default_precision() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 40)
}

/// Largest real eigenvalue, which for a nonnegative matrix is the spectral
/// radius and lies between the minimum and maximum row sums.
pub fn leading_eigenvalue(t: &TransitionMatrix, precision: &BigRational) -> AlgebraicValue {
    let cp = char_poly(t);
    let sums = t.row_sums();
    let lo = BigRational::from_integer(BigInt::from(*sums.iter().min().unwrap_or(&0)) - 1);
    let hi = BigRational::from_integer(BigInt::from(*sums.iter().max().unwrap_or(&0)));
    let root = RealRoot::largest_in(&cp, lo, hi)
        .expect("the spectral radius is a root between the row-sum bounds")
        .refined(precision);
    let float_hint = root.to_f64();
    AlgebraicValue {
        char_poly: cp,
        root,
        float_hint,
    }
}

/// Smallest-degree divisor of `p` over the integers having `root` as a root.
pub fn minimal_factor(p: &IntPoly, root: &RealRoot) -> IntPoly {
    let sf = p.square_free();
    let (sf, _) = sf.strip_x();
    let target = root.to_f64();
    let roots = numeric_roots(&sf);
    let n = roots.len();
    if n == 0 {
        return sf;
    }
    let Some(ti) = (0..n).min_by(|&i, &j| {
        let di = (roots[i] - num_complex::Complex64::new(target, 0.0)).norm();
        let dj = (roots[j] - num_complex::Complex64::new(target, 0.0)).norm();
        di.total_cmp(&dj)
    }) else {
        return sf;
    };
    let others: Vec<usize> = (0..n).filter(|&i| i != ti).collect();
    let contains_root = |q: &IntPoly| {
        let seq = q.sturm_sequence();
        crate::poly::count_roots(&seq, root.lo(), root.hi()) > 0
    };
    for size in 0..=others.len() {
        let mut best: Option<IntPoly> = None;
        for_each_subset(&others, size, &mut |sub| {
            let mut prod = vec![num_complex::Complex64::new(1.0, 0.0)];
            for &i in std::iter::once(&ti).chain(sub.iter()) {
                let mut next = vec![num_complex::Complex64::new(0.0, 0.0); prod.len() + 1];
                for (k, c) in prod.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * roots[i];
                }
                prod = next;
            }
            let mut coeffs = Vec::with_capacity(prod.len());
            for c in &prod {
                if c.im.abs() > 1e-6 || (c.re - c.re.round()).abs() > 1e-6 {
                    return true;
                }
                coeffs.push(BigInt::from(c.re.round() as i64));
            }
            let q = IntPoly::new(coeffs);
            if sf.div_exact(&q).is_some() && contains_root(&q) {
                best = Some(q);
                return false;
            }
            true
        });
        if let Some(q) = best {
            return q;
        }
    }
    sf
}

fn for_each_subset(items: &[usize], size: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == size {
            return f(cur);
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            let go = rec(items, size, i + 1, cur, f);
            cur.pop();
            if !go {
                return false;
            }
        }
        true
    }
    rec(items, size, 0, &mut Vec::new(), f);
}

/// All complex roots by the Aberth iteration. Presentation and factor
/// guessing only; every use is followed by an exact check.
pub fn numeric_roots(p: &IntPoly) -> Vec<num_complex::Complex64> {
    use num_complex::Complex64 as C;
    let n = p.degree();
    if n == 0 {
        return vec![];
    }
    let lc = p.leading();
    let c: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|x| num_traits::ToPrimitive::to_f64(&(BigRational::new(x.clone(), lc.clone()))).unwrap_or(0.0))
        .collect();
    let eval = |z: C| -> (C, C) {
        let mut v = C::new(0.0, 0.0);
        let mut d = C::new(0.0, 0.0);
        for &a in c.iter().rev() {
            d = d * z + v;
            v = v * z + a;
        }
        (v, d)
    };
    let bound = 1.0 + c[..n].iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let mut z: Vec<C> = (0..n)
        .map(|k| C::from_polar(0.5 * bound, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let s: C = (0..n).filter(|&j| j != i).map(|j| C::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (C::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Positive left eigenvector for the leading eigenvalue.
#[derive(Clone, Debug, Serialize)]
pub struct PerronLengths {
    pub lengths: Vec<f64>,
    pub lambda: f64,
    pub residual: f64,
}

/// Left Perron eigenvector by inverse iteration, scaled so the minimum is 1.
pub fn perron_lengths(t: &TransitionMatrix, tolerance: f64) -> Result<PerronLengths> {
    if !is_irreducible(t) {
        return Err(Error::Hypothesis("transition matrix is reducible".into()));
    }
    let lam = leading_eigenvalue(t, &default_precision()).float_hint;
    let n = t.n();
    // solve (T^t - mu I) x = b repeatedly
    let mu = lam * (1.0 + 1e-10) + 1e-12;
    let a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| t.entries[j][i] as f64 - if i == j { mu } else { 0.0 }).collect())
        .collect();
    let mut x = vec![1.0; n];
    let residual = |v: &[f64]| -> f64 {
        (0..n)
            .map(|j| ((0..n).map(|i| v[i] * t.entries[i][j] as f64).sum::<f64>() - lam * v[j]).abs())
            .fold(0.0, f64::max)
    };
    for _ in 0..100 {
        let Some(y) = solve(&a, &x) else {
            return Err(Error::Internal("singular system in inverse iteration".into()));
        };
        let m = y.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        let sign = if y[0] < 0.0 { -1.0 } else { 1.0 };
        x = y.iter().map(|v| sign * v / m).collect();
        if x.iter().all(|&v| v > 0.0) && residual(&x) <= tolerance {
            let r = residual(&x);
            return Ok(PerronLengths {
                lengths: x,
                lambda: lam,
                residual: r,
            });
        }
    }
    Err(Error::Budget("inverse iteration did not converge".into()))
}

fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(r, &v)| {
        let mut r = r.clone();
        r.push(v);
        r
    }).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col] == 0.0 {
            return None;
        }
        m.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                if f != 0.0 {
                    for c in col..=n {
                        m[r][c] -= f * m[col][c];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// Irreducible in the graph-map sense: irreducible matrix and every vertex of valence at least 3.
pub fn is_irreducible_map(f: &GraphMap) -> Result<bool> {
    let t = transition_matrix(f, None)?;
    Ok(is_irreducible(&t) && structure(&f.domain).min_valence >= 3)
}

/// `lambda_f > 1`, decided exactly.
pub fn is_expanding(f: &GraphMap) -> Result<bool> {
    if !is_irreducible_map(f)? {
        return Err(Error::Hypothesis("map is not irreducible".into()));
    }
    let t = transition_matrix(f, None)?;
    Ok(lambda_exceeds_one(&t))
}

/// For an irreducible matrix `lambda > 1` unless it is a permutation matrix,
/// but the decision here goes through the characteristic polynomial.
pub fn lambda_exceeds_one(t: &TransitionMatrix) -> bool {
    let v = leading_eigenvalue(t, &BigRational::new(BigInt::one(), BigInt::from(1024)));
    v.cmp_int(1) == Ordering::Greater
}

/// Saturating `T^k`.
pub fn matrix_power_sat(t: &TransitionMatrix, k: usize) -> Vec<Vec<u128>> {
    let n = t.n();
    let mut acc: Vec<Vec<u128>> = (0..n).map(|i| (0..n).map(|j| u128::from(i == j)).collect()).collect();
    for _ in 0..k {
        acc = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(0u128, |s, l| {
                            s.saturating_add(acc[i][l].saturating_mul(t.entries[l][j] as u128))
                        })
                    })
                    .collect()
            })
            .collect();
    }
    acc
}

/// Decides `lambda^n >= c` exactly. Row sums of `T^n` bracket `lambda^n`,
/// which settles most cases without touching the characteristic polynomial.
pub fn lambda_pow_at_least(t: &TransitionMatrix, n: usize, c: u64) -> bool {
    let p = matrix_power_sat(t, n);
    let sums: Vec<u128> = p.iter().map(|r| r.iter().fold(0u128, |s, &x| s.saturating_add(x))).collect();
    let (mn, mx) = (*sums.iter().min().unwrap_or(&0), *sums.iter().max().unwrap_or(&0));
    if mn >= c as u128 {
        return true;
    }
    if mx < c as u128 {
        return false;
    }
    let v = leading_eigenvalue(t, &BigRational::new(BigInt::one(), BigInt::from(1024)));
    v.pow_cmp(n, &BigInt::from(c)) != Ordering::Less
}

#[derive(Clone, Debug, Serialize)]
pub struct HamsongReport {
    pub n: usize,
    pub total: u64,
    pub rhs: i64,
    pub lhs_interval: (String, String),
    pub lhs_float: f64,
    pub holds: bool,
}

/// Checks `lambda^n >= |M| - n + 1` for a primitive matrix with `lambda > 1`.
pub fn hamsong_bound_check(t: &TransitionMatrix) -> Result<HamsongReport> {
    if !is_primitive(t) {
        return Err(Error::Hypothesis("matrix is not primitive".into()));
    }
    let v = leading_eigenvalue(t, &default_precision());
    if v.cmp_int(1) != Ordering::Greater {
        return Err(Error::Hypothesis("leading eigenvalue is not above 1".into()));
    }
    let n = t.n();
    let total = t.total();
    let rhs = total as i64 - n as i64 + 1;
    let holds = v.pow_cmp(n, &BigInt::from(rhs)) != Ordering::Less;
    let (lo, hi) = v.root.pow_interval(n);
    Ok(HamsongReport {
        n,
        total,
        rhs,
        lhs_interval: (lo.to_string(), hi.to_string()),
        lhs_float: (rat_to_f64(&lo) + rat_to_f64(&hi)) / 2.0,
        holds,
    })
}

/// `Df`: the first oriented edge of `f(o)`.
fn derivative(f: &GraphMap, o: OrientedEdge) -> OrientedEdge {
    let p = &f.edge_map[o.edge].0;
    if o.forward {
        p[0]
    } else {
        p[p.len() - 1].reversed()
    }
}

fn turn(a: OrientedEdge, b: OrientedEdge) -> (OrientedEdge, OrientedEdge) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Turns `{~e_k, e_{k+1}}` taken inside the edge images.
pub fn turns_in_images(f: &GraphMap) -> Vec<(OrientedEdge, OrientedEdge)> {
    let mut out = Vec::new();
    for p in &f.edge_map {
        for w in p.steps().windows(2) {
            out.push(turn(w[0].reversed(), w[1]));
        }
    }
    out
}

/// Train track test: the turns taken by edge images, closed under `Df`,
/// must avoid degenerate turns `{d, d}`.
pub fn is_train_track(f: &GraphMap) -> bool {
    if !f.is_self_map() || f.edge_map.iter().any(|p| p.is_empty()) {
        return false;
    }
    let mut seen: HashSet<(OrientedEdge, OrientedEdge)> = HashSet::new();
    let mut queue: VecDeque<(OrientedEdge, OrientedEdge)> = VecDeque::new();
    for t in turns_in_images(f) {
        if seen.insert(t) {
            queue.push_back(t);
        }
    }
    while let Some((a, b)) = queue.pop_front() {
        if a == b {
            return false;
        }
        let next = turn(derivative(f, a), derivative(f, b));
        if seen.insert(next) {
            queue.push_back(next);
        }
    }
    true
}

/// Minimal-polynomial report for presentation.
pub fn perron_factor_certified(v: &AlgebraicValue) -> (IntPoly, bool) {
    let m = v.minimal_poly();
    let cert = certify_irreducible(&m);
    (m, cert)
}

pub fn is_zero_matrix(t: &TransitionMatrix) -> bool {
    t.entries.iter().all(|r| r.iter().all(|x| x.is_zero()))
}
