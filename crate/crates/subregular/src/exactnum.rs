//! Exact arithmetic in the real cyclotomic field Q(2cos(pi/l)).
//!
//! Elements are stored as rational polynomials in `c = 2cos(pi/l)` reduced
//! modulo the minimal polynomial of `c`. Real embeddings are tracked by
//! rational isolating intervals, so every comparison is certified.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg;
use crate::Error;

/// Closed rational interval.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn mid_f64(&self) -> f64 {
        rat_to_f64(&self.mid())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_f64(&self, x: f64, slack: f64) -> bool {
        let lo = rat_to_f64(&self.lo) - slack;
        let hi = rat_to_f64(&self.hi) + slack;
        lo <= x && x <= hi
    }

    /// Sign of every point in the interval, if it is constant and nonzero.
    pub fn strict_sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Certified enclosure of the square root of a nonnegative interval.
    pub fn sqrt(&self, bits: u32) -> Interval {
        Interval { lo: rat_sqrt_bound(&self.lo, bits, false), hi: rat_sqrt_bound(&self.hi, bits, true) }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12}, {:.12}]", rat_to_f64(&self.lo), rat_to_f64(&self.hi))
    }
}

pub fn rat_to_f64(x: &BigRational) -> f64 {
    // scale to keep ~60 significant bits before dividing
    let n = x.numer();
    let d = x.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let shift = 62 - (nb - db);
    let (n2, d2) = if shift >= 0 {
        (n << (shift as usize), d.clone())
    } else {
        (n.clone(), d << ((-shift) as usize))
    };
    let q = n2 / d2;
    q.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(shift as i32))
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Lower (or upper) rational bound of sqrt(x) within 2^-bits.
fn rat_sqrt_bound(x: &BigRational, bits: u32, upper: bool) -> BigRational {
    if !x.is_positive() {
        return BigRational::zero();
    }
    let mut lo = BigRational::zero();
    let mut hi = if *x > BigRational::one() { x.clone() } else { BigRational::one() };
    let eps = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
    while &hi - &lo > eps {
        let m = (&lo + &hi) / rat(2);
        if &m * &m <= *x {
            lo = m;
        } else {
            hi = m;
        }
    }
    if upper {
        hi
    } else {
        lo
    }
}

fn euler_phi(mut n: u64) -> u64 {
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

fn mobius(mut n: u64) -> i32 {
    let mut r = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            r = -r;
        }
        p += 1;
    }
    if n > 1 {
        r = -r;
    }
    r
}

/// Integer coefficients (ascending) of the n-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    // prod_{d | n} (x^d - 1)^{mu(n/d)}
    let binom = |d: u64| {
        let mut v = vec![BigInt::zero(); d as usize + 1];
        v[0] = BigInt::from(-1);
        v[d as usize] = BigInt::one();
        v
    };
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let mut num = vec![BigInt::one()];
    for &d in &divisors {
        if mobius(n / d) == 1 {
            let b = binom(d);
            let mut out = vec![BigInt::zero(); num.len() + b.len() - 1];
            for (i, x) in num.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            num = out;
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            num = int_poly_div_exact(&num, &binom(d));
        }
    }
    num
}

fn int_poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    assert!(b[db].is_one());
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = rem[k + db].clone();
        if !c.is_zero() {
            for (i, bi) in b.iter().enumerate() {
                rem[k + i] -= &c * bi;
            }
        }
        q[k] = c;
    }
    assert!(rem.iter().all(|x| x.is_zero()), "inexact cyclotomic division");
    q
}

/// Shared data for one field Q(2cos(pi/l)).
#[derive(Debug)]
pub struct FieldContext {
    pub l: u32,
    pub degree: usize,
    /// Ascending, monic, length `degree + 1`.
    pub min_poly: Vec<BigRational>,
    /// Conjugate indices j: the embeddings send c to 2cos(j pi / l). Index 0 is j = 1.
    pub conj_index: Vec<u32>,
    int_poly: Vec<BigInt>,
    conj_roots: Vec<DyadicRoot>,
}

const BASE_BITS: u32 = 120;

impl FieldContext {
    pub fn new(l: u32) -> Result<Arc<FieldContext>, Error> {
        if l < 2 {
            return Err(Error::Domain(format!("field needs l >= 2, got {l}")));
        }
        let n = 2 * l as u64;
        let degree = (euler_phi(n) / 2) as usize;
        let phi = cyclotomic_poly(n);
        debug_assert_eq!(phi.len(), 2 * degree + 1);
        // z^{-d} Phi(z) = a_d + sum_k a_{d-k} D_k(z + 1/z), D_k the Dickson polynomials
        let mut dk: Vec<Vec<BigInt>> = vec![vec![BigInt::from(2)], vec![BigInt::zero(), BigInt::one()]];
        for k in 1..degree {
            let mut next = vec![BigInt::zero(); k + 2];
            for (i, c) in dk[k].iter().enumerate() {
                next[i + 1] += c;
            }
            for (i, c) in dk[k - 1].iter().enumerate() {
                next[i] -= c;
            }
            dk.push(next);
        }
        let mut p = vec![BigInt::zero(); degree + 1];
        p[0] += &phi[degree];
        for k in 1..=degree {
            let a = &phi[degree - k];
            for (i, c) in dk[k].iter().enumerate() {
                p[i] += a * c;
            }
        }
        let min_poly: Vec<BigRational> = p.into_iter().map(BigRational::from_integer).collect();
        assert!(min_poly[degree].is_one());

        let conj_index: Vec<u32> =
            (1..l.max(2)).filter(|j| (*j as u64).gcd(&n) == 1).collect();
        assert_eq!(conj_index.len(), degree.max(1));
        let int_poly: Vec<BigInt> = min_poly.iter().map(|c| c.to_integer()).collect();
        let mut conj_roots = Vec::new();
        for &j in &conj_index {
            let v = 2.0 * (j as f64 * std::f64::consts::PI / l as f64).cos();
            let r = isolate_root(&int_poly, v, BASE_BITS)
                .ok_or_else(|| Error::Internal(format!("could not isolate conjugate root j={j} for l={l}")))?;
            conj_roots.push(r);
        }
        for a in 0..conj_roots.len() {
            for b in a + 1..conj_roots.len() {
                let (x, y) = (&conj_roots[a].interval(), &conj_roots[b].interval());
                if !(x.hi < y.lo || y.hi < x.lo) {
                    return Err(Error::Internal("conjugate intervals overlap".into()));
                }
            }
        }
        Ok(Arc::new(FieldContext { l, degree, min_poly, conj_index, int_poly, conj_roots }))
    }

    pub fn num_embeddings(&self) -> usize {
        self.conj_index.len()
    }

    /// Isolating interval for the k-th conjugate of c, of width at most 2^-bits.
    pub fn root_interval(&self, k: usize, bits: u32) -> Interval {
        self.dyadic_root(k, bits).interval()
    }

    fn dyadic_root(&self, k: usize, bits: u32) -> DyadicRoot {
        let base = &self.conj_roots[k];
        if base.exact || bits <= base.shift {
            return base.clone();
        }
        let slo = sign_dyadic(&self.int_poly, &base.num, base.shift);
        refine_root(&self.int_poly, base.num.clone(), &base.num + 1, base.shift, slo, bits)
    }

    /// Short fingerprint of the minimal polynomial, carried in reports.
    pub fn min_poly_hash(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        for c in &self.min_poly {
            for b in c.to_string().bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
            h ^= b'|' as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }

    pub fn min_poly_ints(&self) -> Vec<i64> {
        self.min_poly.iter().map(|c| c.to_integer().to_i64().unwrap()).collect()
    }
}

/// Root of an integer polynomial bracketed as [num, num + 1] / 2^shift
/// (or exactly num / 2^shift when `exact`).
#[derive(Clone, Debug)]
struct DyadicRoot {
    num: BigInt,
    shift: u32,
    exact: bool,
}

impl DyadicRoot {
    fn interval(&self) -> Interval {
        let den = BigInt::one() << self.shift as usize;
        let lo = BigRational::new(self.num.clone(), den.clone());
        if self.exact {
            Interval::point(lo)
        } else {
            Interval { lo, hi: BigRational::new(&self.num + 1, den) }
        }
    }

    /// Integer bracket [a, b] of root * 2^shift.
    fn bracket(&self) -> (BigInt, BigInt) {
        if self.exact {
            (self.num.clone(), self.num.clone())
        } else {
            (self.num.clone(), &self.num + 1)
        }
    }
}

/// Sign of p(m / 2^k) for integer p.
fn sign_dyadic(p: &[BigInt], m: &BigInt, k: u32) -> i32 {
    let d = p.len() - 1;
    let mut acc = p[d].clone();
    for i in (0..d).rev() {
        acc = acc * m + (&p[i] << (k as usize * (d - i)));
    }
    if acc.is_positive() {
        1
    } else if acc.is_negative() {
        -1
    } else {
        0
    }
}

fn isolate_root(p: &[BigInt], approx: f64, bits: u32) -> Option<DyadicRoot> {
    for eps_bits in [40u32, 34, 27] {
        let scale = 2f64.powi(eps_bits as i32 + 8);
        // bracket [approx - 2^-eps, approx + 2^-eps] at shift eps_bits + 8
        let centre = BigInt::from((approx * scale).round() as i64);
        let w = BigInt::from(256);
        let shift = eps_bits + 8;
        let lo = &centre - &w;
        let hi = &centre + &w;
        let slo = sign_dyadic(p, &lo, shift);
        let shi = sign_dyadic(p, &hi, shift);
        if slo == 0 {
            return Some(DyadicRoot { num: lo, shift, exact: true });
        }
        if shi == 0 {
            return Some(DyadicRoot { num: hi, shift, exact: true });
        }
        if slo != shi {
            return Some(refine_root(p, lo, hi, shift, slo, bits));
        }
    }
    None
}

/// Bisect the bracket [lo, hi] / 2^shift down to width 2^-bits.
fn refine_root(p: &[BigInt], mut lo: BigInt, mut hi: BigInt, mut shift: u32, slo: i32, bits: u32) -> DyadicRoot {
    loop {
        let width = &hi - &lo;
        if width.is_one() && shift >= bits {
            return DyadicRoot { num: lo, shift, exact: false };
        }
        if width.is_even() {
            let m = (&lo + &hi) >> 1usize;
            let sm = sign_dyadic(p, &m, shift);
            if sm == 0 {
                return DyadicRoot { num: m, shift, exact: true };
            }
            if sm == slo {
                lo = m;
            } else {
                hi = m;
            }
        } else {
            lo <<= 1usize;
            hi <<= 1usize;
            shift += 1;
        }
    }
}

/// Element of Q(c), c = 2cos(pi/l).
#[derive(Clone)]
pub struct CycloReal {
    ctx: Arc<FieldContext>,
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for CycloReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloReal(l={}, {})", self.ctx.l, self)
    }
}

impl fmt::Display for CycloReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*c"),
                _ => format!("{c}*c^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl PartialEq for CycloReal {
    fn eq(&self, o: &Self) -> bool {
        self.ctx.l == o.ctx.l && self.coeffs == o.coeffs
    }
}
impl Eq for CycloReal {}

impl CycloReal {
    pub fn from_coeffs(ctx: &Arc<FieldContext>, coeffs: Vec<BigRational>) -> Self {
        let mut x = CycloReal { ctx: ctx.clone(), coeffs };
        x.reduce();
        x
    }

    pub fn from_int(ctx: &Arc<FieldContext>, n: i64) -> Self {
        Self::from_rational(ctx, rat(n))
    }

    pub fn from_rational(ctx: &Arc<FieldContext>, r: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); ctx.degree];
        coeffs[0] = r;
        CycloReal { ctx: ctx.clone(), coeffs }
    }

    pub fn zero(ctx: &Arc<FieldContext>) -> Self {
        Self::from_int(ctx, 0)
    }

    pub fn one(ctx: &Arc<FieldContext>) -> Self {
        Self::from_int(ctx, 1)
    }

    /// The generator c = 2cos(pi/l).
    pub fn gen(ctx: &Arc<FieldContext>) -> Self {
        Self::from_coeffs(ctx, vec![BigRational::zero(), BigRational::one()])
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn reduce(&mut self) {
        let d = self.ctx.degree;
        let mp = &self.ctx.min_poly;
        while self.coeffs.len() > d {
            let k = self.coeffs.len() - 1;
            let top = self.coeffs.pop().unwrap();
            if !top.is_zero() {
                for i in 0..d {
                    let t = &top * &mp[i];
                    self.coeffs[k - d + i] -= t;
                }
            }
        }
        while self.coeffs.len() < d {
            self.coeffs.push(BigRational::zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    /// True when all coordinates in the power basis of c are integers, i.e. the
    /// element lies in Z[c], the ring of integers.
    pub fn is_algebraic_integer(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycloReal { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&rat(n))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Matrix of multiplication by self in the power basis (columns = images of c^j).
    pub fn mult_matrix(&self) -> Vec<Vec<BigRational>> {
        let d = self.ctx.degree;
        let mut cols = Vec::with_capacity(d);
        let mut basis = Self::one(&self.ctx);
        let c = Self::gen(&self.ctx);
        for _ in 0..d {
            cols.push((self * &basis).coeffs);
            basis = &basis * &c;
        }
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Product of all Galois conjugates.
    pub fn norm(&self) -> BigRational {
        linalg::determinant(self.mult_matrix(), &BigRational::zero())
    }

    pub fn trace(&self) -> BigRational {
        let m = self.mult_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let m = self.mult_matrix();
        let mut rhs = vec![BigRational::zero(); self.ctx.degree];
        rhs[0] = BigRational::one();
        let sol = linalg::solve(m, rhs, &BigRational::zero())?;
        Some(Self::from_coeffs(&self.ctx, sol))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inverse().map(|inv| self * &inv)
    }

    /// Enclosure of the value under embedding k, using root intervals of width 2^-bits.
    pub fn interval_at(&self, k: usize, bits: u32) -> Interval {
        // integer Horner on [a, b] * 2^s with outward rounding after each product
        let root = self.ctx.dyadic_root(k, bits);
        let s = root.shift as usize;
        let (r0, r1) = root.bracket();
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &den).to_integer()).collect();
        let top = &ints[ints.len() - 1] << s;
        let (mut a, mut b) = (top.clone(), top);
        for n in ints.iter().rev().skip(1) {
            let p = [&a * &r0, &a * &r1, &b * &r0, &b * &r1];
            let lo = p.iter().min().unwrap();
            let hi = p.iter().max().unwrap();
            let add = n << s;
            a = (lo >> s) + &add;
            b = -((-hi) >> s) + &add;
        }
        let scale = den << s;
        Interval { lo: BigRational::new(a, scale.clone()), hi: BigRational::new(b, scale) }
    }

    /// Interval for every embedding, refined until each is narrower than 2^-bits.
    pub fn conjugate_values(&self, bits: u32) -> Vec<Interval> {
        let eps = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
        (0..self.ctx.num_embeddings())
            .map(|k| {
                let mut b = bits + 16;
                loop {
                    let iv = self.interval_at(k, b);
                    if iv.width() <= eps || b > bits + 4096 {
                        return iv;
                    }
                    b += 64;
                }
            })
            .collect()
    }

    /// Float value under embedding k.
    pub fn approx_at(&self, k: usize) -> f64 {
        self.conjugate_values_one(k, 64).mid_f64()
    }

    fn conjugate_values_one(&self, k: usize, bits: u32) -> Interval {
        let eps = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
        let mut b = bits.max(BASE_BITS);
        loop {
            let iv = self.interval_at(k, b);
            let scale = iv.lo.abs().max(BigRational::one());
            if iv.width() <= &eps * &scale || b > 8192 {
                return iv;
            }
            b += 128;
        }
    }

    /// Float value under the distinguished embedding c = 2cos(pi/l).
    pub fn approx(&self) -> f64 {
        self.approx_at(0)
    }

    pub fn conjugates_f64(&self) -> Vec<f64> {
        (0..self.ctx.num_embeddings()).map(|k| self.approx_at(k)).collect()
    }

    /// Certified sign under embedding k.
    pub fn sign_at(&self, k: usize) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let mut bits = BASE_BITS;
        loop {
            if let Some(s) = self.interval_at(k, bits).strict_sign() {
                return s;
            }
            bits *= 2;
        }
    }

    pub fn sign(&self) -> Ordering {
        self.sign_at(0)
    }

    /// Certified comparison under the distinguished embedding.
    pub fn compare(&self, o: &Self) -> Ordering {
        (self - o).sign()
    }

    /// Compare against a rational number.
    pub fn compare_rational(&self, r: &BigRational) -> Ordering {
        (self - &Self::from_rational(&self.ctx, r.clone())).sign()
    }

    /// True if the distinguished value is strictly larger than every other conjugate.
    pub fn dominates_conjugates(&self) -> bool {
        (1..self.ctx.num_embeddings()).all(|k| self.sub_embedding_gap(k) == Ordering::Greater)
    }

    fn sub_embedding_gap(&self, k: usize) -> Ordering {
        let mut bits = BASE_BITS;
        loop {
            let a = self.interval_at(0, bits);
            let b = self.interval_at(k, bits);
            if a.lo > b.hi {
                return Ordering::Greater;
            }
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if bits > 4096 {
                return Ordering::Equal;
            }
            bits *= 2;
        }
    }
}

impl<'a> Add<&'a CycloReal> for &'a CycloReal {
    type Output = CycloReal;
    fn add(self, o: &CycloReal) -> CycloReal {
        debug_assert_eq!(self.ctx.l, o.ctx.l);
        CycloReal { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a CycloReal> for &'a CycloReal {
    type Output = CycloReal;
    fn sub(self, o: &CycloReal) -> CycloReal {
        debug_assert_eq!(self.ctx.l, o.ctx.l);
        CycloReal { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl<'a> Mul<&'a CycloReal> for &'a CycloReal {
    type Output = CycloReal;
    fn mul(self, o: &CycloReal) -> CycloReal {
        debug_assert_eq!(self.ctx.l, o.ctx.l);
        let d = self.ctx.degree;
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        CycloReal::from_coeffs(&self.ctx, prod)
    }
}

impl<'a> Neg for &'a CycloReal {
    type Output = CycloReal;
    fn neg(self) -> CycloReal {
        CycloReal { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<CycloReal> for CycloReal {
            type Output = CycloReal;
            fn $m(self, o: CycloReal) -> CycloReal {
                $tr::$m(&self, &o)
            }
        }
        impl<'a> $tr<&'a CycloReal> for CycloReal {
            type Output = CycloReal;
            fn $m(self, o: &CycloReal) -> CycloReal {
                $tr::$m(&self, o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for CycloReal {
    type Output = CycloReal;
    fn neg(self) -> CycloReal {
        -&self
    }
}

impl linalg::FieldOps for CycloReal {
    fn vanishes(&self) -> bool {
        CycloReal::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        CycloReal::div(self, o).expect("division by zero")
    }
    fn neg(&self) -> Self {
        Neg::neg(self)
    }
    fn zero_like(&self) -> Self {
        CycloReal::zero(&self.ctx)
    }
    fn one_like(&self) -> Self {
        CycloReal::one(&self.ctx)
    }
}

fn check_range(k: i64, ctx: &FieldContext) -> Result<(), Error> {
    if k < 1 || k > ctx.l as i64 - 1 {
        return Err(Error::Domain(format!("index {k} outside 1..={} for l={}", ctx.l - 1, ctx.l)));
    }
    Ok(())
}

/// Chebyshev evaluation of [k] for any k >= 0 (no range check).
pub fn qint_any(k: i64, ctx: &Arc<FieldContext>) -> CycloReal {
    let c = CycloReal::gen(ctx);
    let mut prev = CycloReal::zero(ctx);
    let mut cur = CycloReal::one(ctx);
    if k <= 0 {
        return prev;
    }
    for _ in 1..k {
        let next = &(&c * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Quantum integer [k]_l = sin(k pi/l) / sin(pi/l).
pub fn qint(k: i64, ctx: &Arc<FieldContext>) -> Result<CycloReal, Error> {
    check_range(k, ctx)?;
    Ok(qint_any(k, ctx))
}

/// 2cos(k pi / l) = [k+1] - [k-1].
pub fn two_cos(k: i64, ctx: &Arc<FieldContext>) -> CycloReal {
    if k == 0 {
        return CycloReal::from_int(ctx, 2);
    }
    let k = k.abs();
    &qint_any(k + 1, ctx) - &qint_any(k - 1, ctx)
}

/// (2 sin(k pi / l))^2 = 4 - (2cos(k pi/l))^2.
pub fn sin2(k: i64, ctx: &Arc<FieldContext>) -> Result<CycloReal, Error> {
    check_range(k, ctx)?;
    let ck = two_cos(k, ctx);
    Ok(&CycloReal::from_int(ctx, 4) - &(&ck * &ck))
}

/// S_k(l) = l / prod_{i=1..k} (2 sin(i pi/l))^2.
pub fn s_formula(k: i64, ctx: &Arc<FieldContext>) -> Result<CycloReal, Error> {
    if k < 1 {
        return Err(Error::Domain(format!("S_k needs k >= 1, got {k}")));
    }
    let mut den = CycloReal::one(ctx);
    for i in 1..=k {
        den = &den * &sin2(i, ctx)?;
    }
    let num = CycloReal::from_int(ctx, ctx.l as i64);
    num.div(&den).ok_or_else(|| Error::Domain("vanishing sine factor".into()))
}

pub fn norm(x: &CycloReal) -> BigRational {
    x.norm()
}

pub fn compare(x: &CycloReal, y: &CycloReal) -> Ordering {
    x.compare(y)
}

pub fn conjugate_values(x: &CycloReal, bits: u32) -> Vec<Interval> {
    x.conjugate_values(bits)
}

/// Integer k with |n| = 7^k style power test: returns Some(k) if |r| = p^k.
pub fn power_of(r: &BigRational, p: u64) -> Option<u32> {
    if !r.is_integer() {
        return None;
    }
    let mut n = r.to_integer().abs();
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut k = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        k += 1;
    }
    if n.is_one() {
        Some(k)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ctx(l: u32) -> Arc<FieldContext> {
        FieldContext::new(l).unwrap()
    }

    #[test]
    fn minimal_polynomials() {
        assert_eq!(ctx(7).min_poly_ints(), vec![1, -2, -1, 1]);
        assert_eq!(ctx(5).min_poly_ints(), vec![-1, -1, 1]);
        assert_eq!(ctx(4).min_poly_ints(), vec![-2, 0, 1]);
        for l in 2..40u32 {
            let k = ctx(l);
            let c = 2.0 * (PI / l as f64).cos();
            let v: f64 = k.min_poly.iter().rev().fold(0.0, |a, b| a * c + rat_to_f64(b));
            assert!(v.abs() < 1e-9, "l={l}");
            assert_eq!(k.degree as u64, euler_phi(2 * l as u64) / 2);
        }
    }

    #[test]
    fn quantum_integers_l7() {
        let k = ctx(7);
        assert_eq!(qint(1, &k).unwrap(), CycloReal::one(&k));
        assert!((qint(2, &k).unwrap().approx() - 1.801938).abs() < 1e-6);
        assert!((qint(3, &k).unwrap().approx() - 2.246980).abs() < 1e-6);
        assert!(qint(0, &k).is_err());
        assert!(qint(7, &k).is_err());
        assert_eq!(compare(&qint(3, &k).unwrap(), &qint(2, &k).unwrap()), Ordering::Greater);
    }

    #[test]
    fn sines_against_float_oracle() {
        for l in [5u32, 7, 11, 12, 15] {
            let k = ctx(l);
            for i in 1..l as i64 {
                let s = 2.0 * (i as f64 * PI / l as f64).sin();
                assert!((sin2(i, &k).unwrap().approx() - s * s).abs() < 1e-9);
                let q = qint(i, &k).unwrap();
                assert_eq!(sin2(i, &k).unwrap(), &sin2(1, &k).unwrap() * &(&q * &q));
            }
        }
        let k = ctx(7);
        assert!((sin2(1, &k).unwrap().approx() - 0.753020).abs() < 1e-6);
        assert!((sin2(3, &k).unwrap().approx() - 3.801938).abs() < 1e-6);
        let s2 = 7.0 / ((2.0 * (PI / 7.0).sin()).powi(2) * (2.0 * (2.0 * PI / 7.0).sin()).powi(2));
        assert!((s_formula(2, &k).unwrap().approx() - s2).abs() < 1e-9);
    }

    #[test]
    fn s_formula_identity_l7() {
        let k = ctx(7);
        let lhs = &(&s_formula(2, &k).unwrap() * &s_formula(1, &k).unwrap().pow(3)).scale_int(6);
        let inner = &(&CycloReal::from_int(&k, 7) + &qint(3, &k).unwrap().scale_int(15))
            + &qint(5, &k).unwrap().scale_int(12);
        assert_eq!(*lhs, inner.scale_int(294));
    }

    #[test]
    fn norms() {
        let k = ctx(7);
        assert_eq!(norm(&CycloReal::one(&k)), BigRational::one());
        let c = CycloReal::gen(&k);
        // product of 2cos(j pi/7), j = 1,3,5, is -1
        assert_eq!(norm(&c), rat(-1));
        assert_eq!(norm(&CycloReal::from_int(&k, 2)), rat(8));
        let inv = c.inverse().unwrap();
        assert_eq!(&inv * &c, CycloReal::one(&k));
    }

    #[test]
    fn conjugates_and_intervals() {
        let k = ctx(7);
        let r = CycloReal::from_int(&k, 5);
        for iv in conjugate_values(&r, 30) {
            assert!(iv.contains(&rat(5)));
        }
        let x = &qint(2, &k).unwrap() + &qint(3, &k).unwrap();
        let iv = &x.conjugate_values(40)[0];
        assert!(iv.contains_f64(4.048917, 1e-6));
        assert_eq!(x.compare_rational(&rat_from_f64(4.0489)), Ordering::Greater);
        assert_eq!(x.compare_rational(&rat_from_f64(4.049)), Ordering::Less);
        let vals = CycloReal::gen(&k).conjugates_f64();
        for (i, j) in [1, 3, 5].iter().enumerate() {
            assert!((vals[i] - 2.0 * (*j as f64 * PI / 7.0).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn power_detection() {
        assert_eq!(power_of(&rat(-343), 7), Some(3));
        assert_eq!(power_of(&rat(1), 7), Some(0));
        assert_eq!(power_of(&rat(14), 7), None);
    }
}
