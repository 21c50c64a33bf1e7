//! Integer polynomials, Sturm sequences and isolated real algebraic numbers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Polynomial with big-integer coefficients stored low degree first.
/// The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        IntPoly::new(vec![c.into()])
    }

    pub fn x() -> Self {
        IntPoly::from_i64(&[0, 1])
    }

    /// `x^n - c`.
    pub fn x_pow_minus(n: usize, c: impl Into<BigInt>) -> Self {
        let mut v = vec![BigInt::zero(); n + 1];
        v[0] = -c.into();
        v[n] += BigInt::one();
        IntPoly::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn shift(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        IntPoly::new(v)
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Sign of the value at a rational point.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        // q^d p(n/q) = sum a_i n^i q^(d-i), and q > 0
        let (n, q) = (x.numer(), x.denom());
        let d = self.degree();
        let mut acc = self.coeffs[d].clone();
        let mut qpow = BigInt::one();
        for i in (0..d).rev() {
            qpow *= q;
            acc = acc * n + &self.coeffs[i] * &qpow;
        }
        acc.sign_ord()
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
    pub fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        assert!(!b.is_zero(), "division by zero polynomial");
        let mut r = self.clone();
        let lb = b.leading();
        let db = b.degree();
        if r.is_zero() || r.degree() < db {
            return r;
        }
        let mut steps = r.degree() - db + 1;
        while !r.is_zero() && r.degree() >= db {
            let k = r.degree() - db;
            let lr = r.leading();
            r = &r.scale(&lb) - &b.scale(&lr).shift(k);
            steps -= 1;
        }
        for _ in 0..steps {
            r = r.scale(&lb);
        }
        r
    }

    /// Exact quotient over the integers, if `b` divides `self` there.
    pub fn div_exact(&self, b: &IntPoly) -> Option<IntPoly> {
        if b.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.degree() < b.degree() {
            return None;
        }
        let lb = b.leading();
        let db = b.degree();
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.degree() - db + 1];
        while !r.is_zero() && r.degree() >= db {
            let k = r.degree() - db;
            let (c, rem) = r.leading().div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            r = &r - &b.scale(&c).shift(k);
            q[k] = c;
        }
        r.is_zero().then(|| IntPoly::new(q))
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() || a.is_zero() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    /// Product of the distinct irreducible factors (up to content).
    pub fn square_free(&self) -> IntPoly {
        if self.degree() == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.primitive()
            .div_exact(&g)
            .expect("gcd divides its argument")
            .primitive()
    }

    /// Divides out every factor of `x`.
    pub fn strip_x(&self) -> (IntPoly, usize) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if self.is_zero() {
            return (IntPoly::zero(), 0);
        }
        (IntPoly::new(self.coeffs[k..].to_vec()), k)
    }

    /// Standard Sturm sequence of a square-free polynomial, each term
    /// rescaled by a positive constant.
    pub fn sturm_sequence(&self) -> Vec<IntPoly> {
        let mut seq = vec![self.clone()];
        if self.degree() == 0 {
            return seq;
        }
        seq.push(self.derivative());
        loop {
            let n = seq.len();
            let (a, b) = (&seq[n - 2], &seq[n - 1]);
            if b.degree() == 0 {
                break;
            }
            let lb = b.leading();
            let delta = a.degree() - b.degree() + 1;
            let mut r = a.pseudo_rem(b);
            // make the multiplier lc(b)^delta positive so signs are preserved
            if lb.is_negative() && delta % 2 == 1 {
                r = -r;
            }
            let r = -r;
            if r.is_zero() {
                break;
            }
            let c = r.content();
            seq.push(IntPoly::new(r.coeffs.iter().map(|x| x / &c).collect()));
        }
        seq
    }

    /// Parses expressions like `x^5 - x - 1` or `3x^2 + 2*x - 7`.
    pub fn parse(s: &str) -> Result<IntPoly> {
        let err = |m: &str| Error::Argument(format!("bad polynomial {s:?}: {m}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty"));
        }
        let mut coeffs: Vec<BigInt> = Vec::new();
        let bytes = compact.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = BigInt::one();
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            } else if i != 0 {
                return Err(err("expected + or -"));
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut c = if i > start {
                compact[start..i].parse::<BigInt>().map_err(|_| err("bad coefficient"))?
            } else {
                BigInt::one()
            };
            let mut deg = 0usize;
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
                if i >= bytes.len() || bytes[i] != b'x' {
                    return Err(err("expected x after *"));
                }
            }
            if i < bytes.len() && bytes[i] == b'x' {
                i += 1;
                deg = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let s2 = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    deg = compact[s2..i].parse().map_err(|_| err("bad exponent"))?;
                }
            } else if i == start {
                return Err(err("empty term"));
            }
            c *= sign;
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, BigInt::zero());
            }
            coeffs[deg] += c;
        }
        Ok(IntPoly::new(coeffs))
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

trait SignOrd {
    fn sign_ord(&self) -> Ordering;
}

impl SignOrd for BigInt {
    fn sign_ord(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::new(v)
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

/// Number of sign changes of a Sturm sequence at `x`, zeros skipped.
fn variations(seq: &[IntPoly], x: &BigRational) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Distinct real roots of the square-free polynomial behind `seq` in `(lo, hi]`.
pub fn count_roots(seq: &[IntPoly], lo: &BigRational, hi: &BigRational) -> usize {
    variations(seq, lo).saturating_sub(variations(seq, hi))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_to_f64(x: &BigRational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// A real root of a square-free integer polynomial, isolated in `(lo, hi]`.
#[derive(Clone, Debug)]
pub struct RealRoot {
    poly: IntPoly,
    sturm: Vec<IntPoly>,
    lo: BigRational,
    hi: BigRational,
}

impl RealRoot {
    /// Largest real root of `p` in `(lo, hi]`, or `None` if there is none.
    pub fn largest_in(p: &IntPoly, lo: BigRational, hi: BigRational) -> Option<RealRoot> {
        let poly = p.square_free();
        if poly.degree() == 0 {
            return None;
        }
        let sturm = poly.sturm_sequence();
        if count_roots(&sturm, &lo, &hi) == 0 {
            return None;
        }
        let mut r = RealRoot { poly, sturm, lo, hi };
        while count_roots(&r.sturm, &r.lo, &r.hi) > 1 {
            let mid = r.mid();
            if count_roots(&r.sturm, &mid, &r.hi) >= 1 {
                r.lo = mid;
            } else {
                r.hi = mid;
            }
        }
        Some(r)
    }

    /// Largest real root of `p`, using a Cauchy bound for the search window.
    pub fn largest(p: &IntPoly) -> Option<RealRoot> {
        let b = cauchy_bound(p);
        RealRoot::largest_in(p, -b.clone(), b)
    }

    /// The positive real `c^(1/n)` for a positive integer `c`.
    pub fn nth_root(c: &BigInt, n: usize) -> RealRoot {
        assert!(c.is_positive() && n > 0);
        let p = IntPoly::x_pow_minus(n, c.clone());
        let hi = BigRational::from_integer(c.clone().max(BigInt::one()));
        RealRoot::largest_in(&p, BigRational::zero(), hi).expect("c^(1/n) exists")
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    /// Halves the isolating interval.
    pub fn bisect(&mut self) {
        let mid = self.mid();
        if count_roots(&self.sturm, &mid, &self.hi) >= 1 {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn refine_to(&mut self, width: &BigRational) {
        while &self.width() > width {
            self.bisect();
        }
    }

    pub fn refined(mut self, width: &BigRational) -> Self {
        self.refine_to(width);
        self
    }

    /// Nearest double, after refining a copy to width `2^-52`.
    pub fn to_f64(&self) -> f64 {
        let fine = BigRational::new(BigInt::one(), BigInt::one() << 52);
        let mut me = self.clone();
        me.refine_to(&fine);
        (rat_to_f64(&me.lo) + rat_to_f64(&me.hi)) / 2.0
    }

    /// True when `g` has a root inside `(lo, hi]`.
    fn has_root_of(&self, g: &IntPoly, lo: &BigRational, hi: &BigRational) -> bool {
        if g.degree() == 0 {
            return false;
        }
        count_roots(&g.sturm_sequence(), lo, hi) > 0
    }

    /// Exact comparison of two real algebraic numbers. Equality is decided
    /// by a common factor having a root in both isolating intervals.
    pub fn cmp_exact(&mut self, other: &mut RealRoot) -> Ordering {
        let g = self.poly.gcd(&other.poly);
        if g.degree() > 0 {
            let lo = (&self.lo).max(&other.lo).clone();
            let hi = (&self.hi).min(&other.hi).clone();
            if lo < hi && self.has_root_of(&g, &lo, &hi) {
                return Ordering::Equal;
            }
        }
        loop {
            if self.hi <= other.lo {
                return Ordering::Less;
            }
            if other.hi <= self.lo {
                return Ordering::Greater;
            }
            if self.width() >= other.width() {
                self.bisect();
            } else {
                other.bisect();
            }
        }
    }

    /// Compares this number to a rational.
    pub fn cmp_rational(&mut self, q: &BigRational) -> Ordering {
        loop {
            if &self.hi < q {
                return Ordering::Less;
            }
            if &self.lo >= q {
                return Ordering::Greater;
            }
            if self.poly.sign_at(q) == Ordering::Equal {
                // q is a root in (lo, hi], so it is this root
                return Ordering::Equal;
            }
            self.bisect();
        }
    }

    /// Compares `self^n` with an integer `c`; `self` must be positive.
    pub fn pow_cmp_int(&mut self, n: usize, c: &BigInt) -> Ordering {
        debug_assert_eq!(self.cmp_rational(&BigRational::zero()), Ordering::Greater);
        if !c.is_positive() {
            return Ordering::Greater;
        }
        if n == 0 {
            return BigInt::one().cmp(c);
        }
        let mut r = RealRoot::nth_root(c, n);
        self.cmp_exact(&mut r)
    }

    /// Interval `[lo^n, hi^n]` for a positive root.
    pub fn pow_interval(&self, n: usize) -> (BigRational, BigRational) {
        let p = |x: &BigRational| {
            let mut acc = BigRational::one();
            for _ in 0..n {
                acc *= x;
            }
            acc
        };
        let lo = if self.lo.is_negative() { BigRational::zero() } else { p(&self.lo) };
        (lo, p(&self.hi))
    }

    /// The real number `self^k` as a root of the polynomial whose roots are
    /// the `k`-th powers of the roots of `self.poly`; `self` must be positive.
    pub fn pow_root(&self, k: usize) -> RealRoot {
        let q = power_poly(&self.poly, k).square_free();
        let seq = q.sturm_sequence();
        let mut me = self.clone();
        loop {
            if !me.lo.is_negative() {
                let (lo, hi) = me.pow_interval(k);
                if count_roots(&seq, &lo, &hi) == 1 {
                    return RealRoot { poly: q, sturm: seq, lo, hi };
                }
            }
            me.bisect();
        }
    }
}

/// Upper bound `1 + max |a_i / a_n|` on the absolute values of roots.
pub fn cauchy_bound(p: &IntPoly) -> BigRational {
    let lc = p.leading().abs();
    let m = p.coeffs()[..p.degree()]
        .iter()
        .map(|c| BigRational::new(c.abs(), lc.clone()))
        .max()
        .unwrap_or_else(BigRational::zero);
    m + BigRational::one()
}

/// Characteristic polynomial of the companion matrix of `p` raised to the
/// `k`-th power: its roots are the `k`-th powers of the roots of `p`.
pub fn power_poly(p: &IntPoly, k: usize) -> IntPoly {
    let p = p.primitive();
    assert!(p.is_monic(), "power_poly expects a monic polynomial");
    let n = p.degree();
    let mut c = vec![vec![BigInt::zero(); n]; n];
    for i in 1..n {
        c[i][i - 1] = BigInt::one();
    }
    for (i, row) in c.iter_mut().enumerate() {
        row[n - 1] = -p.coeff(i);
    }
    let mut m = identity(n);
    for _ in 0..k {
        m = mat_mul(&m, &c);
    }
    crate::spectral::char_poly_bigint(&m)
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).fold(BigInt::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Irreducibility certificate: `p` is irreducible over the integers if it is
/// monic and irreducible modulo some prime. Tries primes below 200; `false`
/// means no certificate was found, not that `p` is reducible.
pub fn certify_irreducible(p: &IntPoly) -> bool {
    let p = p.primitive();
    if p.degree() <= 1 {
        return p.degree() == 1;
    }
    if !p.is_monic() {
        return false;
    }
    const PRIMES: [u64; 46] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101,
        103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199,
    ];
    PRIMES.iter().any(|&q| irreducible_mod(&p, q))
}

fn to_mod(p: &IntPoly, q: u64) -> Vec<u64> {
    let qb = BigInt::from(q);
    let mut v: Vec<u64> = p
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(&qb).to_u64().expect("reduced"))
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv_mod(a: u64, q: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % q;
    let mut e = q - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    r
}

fn pm_rem(a: &[u64], m: &[u64], q: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let inv = inv_mod(m[dm], q);
    while r.len() > dm {
        let lead = *r.last().unwrap() * inv % q;
        let k = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            r[k + i] = (r[k + i] + q - lead * c % q) % q;
        }
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

fn pm_mul(a: &[u64], b: &[u64], m: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + x * y) % q;
        }
    }
    while v.last() == Some(&0) {
        v.pop();
    }
    pm_rem(&v, m, q)
}

fn pm_gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = pm_rem(&a, &b, q);
        a = b;
        b = r;
    }
    a
}

/// `x^(q^k) mod m`.
fn x_pow_q_k(m: &[u64], q: u64, k: usize) -> Vec<u64> {
    let mut cur = pm_rem(&[0, 1], m, q);
    for _ in 0..k {
        // raise to the q-th power
        let mut res = vec![1u64];
        let mut base = cur.clone();
        let mut e = q;
        while e > 0 {
            if e & 1 == 1 {
                res = pm_mul(&res, &base, m, q);
            }
            base = pm_mul(&base, &base, m, q);
            e >>= 1;
        }
        cur = res;
    }
    cur
}

/// Rabin's irreducibility test over F_q.
fn irreducible_mod(p: &IntPoly, q: u64) -> bool {
    let m = to_mod(p, q);
    let n = p.degree();
    if m.len() != n + 1 {
        return false;
    }
    let sub_x = |mut v: Vec<u64>| {
        if v.len() < 2 {
            v.resize(2, 0);
        }
        v[1] = (v[1] + q - 1) % q;
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let full = sub_x(x_pow_q_k(&m, q, n));
    if !full.is_empty() {
        return false;
    }
    let mut k = n;
    let mut primes = Vec::new();
    let mut d = 2;
    while d * d <= k {
        if k % d == 0 {
            primes.push(d);
            while k % d == 0 {
                k /= d;
            }
        }
        d += 1;
    }
    if k > 1 {
        primes.push(k);
    }
    primes.into_iter().all(|r| {
        let h = sub_x(x_pow_q_k(&m, q, n / r));
        let g = pm_gcd(&m, &h, q);
        g.len() == 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        IntPoly::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["x^5 - x - 1", "x^7 - x^2 - x - 1", "-3x^2 + 2x - 7", "x", "5", "0"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("x^5-x-1").coeffs(), IntPoly::from_i64(&[-1, -1, 0, 0, 0, 1]).coeffs());
        assert_eq!(p("2*x^2 + x^2").to_string(), "3x^2");
        assert!(IntPoly::parse("x^").is_err());
        assert!(IntPoly::parse("").is_err());
    }

    #[test]
    fn gcd_and_square_free() {
        let a = p("x^5 - x^4 - 1");
        let b = p("x^3 - x - 1");
        assert_eq!(a.gcd(&b), b);
        assert_eq!(a.div_exact(&b).unwrap(), p("x^2 - x + 1"));
        let sq = &(&b * &b) * &p("x - 2");
        assert_eq!(sq.square_free(), &b * &p("x - 2"));
        assert!(p("x^2 + 1").div_exact(&p("2x + 1")).is_none());
    }

    #[test]
    fn sturm_counts_roots() {
        // (x-1)(x-2)(x-3)
        let f = p("x^3 - 6x^2 + 11x - 6");
        let s = f.sturm_sequence();
        assert_eq!(count_roots(&s, &rat(0, 1), &rat(4, 1)), 3);
        assert_eq!(count_roots(&s, &rat(1, 1), &rat(2, 1)), 1);
        assert_eq!(count_roots(&s, &rat(3, 2), &rat(5, 2)), 1);
        assert_eq!(count_roots(&s, &rat(3, 1), &rat(9, 1)), 0);
    }

    #[test]
    fn largest_root_values() {
        let mut r = RealRoot::largest(&p("x^5 - x - 1")).unwrap();
        r.refine_to(&rat(1, 1 << 30));
        assert!((r.to_f64() - 1.1673039782614187).abs() < 1e-12);
        let r7 = RealRoot::largest(&p("x^7 - x^2 - x - 1")).unwrap();
        assert!((r7.to_f64() - 1.2030).abs() < 1e-3);
    }

    #[test]
    fn exact_comparisons() {
        let mut a = RealRoot::largest(&p("x^5 - x^4 - 1")).unwrap();
        let mut b = RealRoot::largest(&p("x^3 - x - 1")).unwrap();
        assert_eq!(a.cmp_exact(&mut b), Ordering::Equal);
        let mut c = RealRoot::largest(&p("x^5 - x - 1")).unwrap();
        assert_eq!(c.cmp_exact(&mut a), Ordering::Less);
        // 2^(1/4) is above the root of x^5 - x - 1
        let mut two = RealRoot::nth_root(&BigInt::from(2), 4);
        assert_eq!(c.cmp_exact(&mut two), Ordering::Less);
        let mut one = RealRoot::largest(&p("x^2 - 1")).unwrap();
        assert_eq!(one.cmp_rational(&rat(1, 1)), Ordering::Equal);
    }

    #[test]
    fn powers_of_roots() {
        // lambda^5 = lambda + 1 for the root of x^5 - x - 1
        let r = RealRoot::largest(&p("x^5 - x - 1")).unwrap();
        let mut l5 = r.pow_root(5);
        assert!((l5.to_f64() - (r.to_f64() + 1.0)).abs() < 1e-9);
        let mut r2 = r.clone();
        assert_eq!(r2.pow_cmp_int(5, &BigInt::from(2)), Ordering::Greater);
        assert_eq!(r2.pow_cmp_int(5, &BigInt::from(3)), Ordering::Less);
        assert_eq!(l5.cmp_rational(&rat(2, 1)), Ordering::Greater);
    }

    #[test]
    fn irreducibility_certificates() {
        assert!(certify_irreducible(&p("x^5 - x - 1")));
        assert!(certify_irreducible(&p("x^7 - x^2 - x - 1")));
        assert!(certify_irreducible(&p("x^3 - x - 1")));
        assert!(!certify_irreducible(&p("x^5 - x^4 - 1")));
        assert!(!certify_irreducible(&p("x^2 - 1")));
    }
}
