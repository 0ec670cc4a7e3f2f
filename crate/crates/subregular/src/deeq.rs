//! De-equivariantization of the G2 quotient by its Rep(S3) Muger center, at
//! the level of Grothendieck classes, and the anisotropy sieve.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::affine::detect_affine_type;
use crate::exactnum::{power_of, qint, CycloReal, Interval};
use crate::fusion::SimpleAnalysis;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SimpleTypeTag {
    /// sgn (x) L != L, V (x) L simple.
    A,
    /// sgn (x) L = L.
    B,
    /// sgn (x) L != L, V (x) L has two summands.
    C,
}

impl fmt::Display for SimpleTypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SimpleTypeTag::A => "a",
            SimpleTypeTag::B => "b",
            SimpleTypeTag::C => "c",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug)]
pub struct TagInfo {
    pub tag: SimpleTypeTag,
    /// sgn (x) L.
    pub partner: usize,
    /// V (x) L as (simple, multiplicity).
    pub v_summands: Vec<(usize, i64)>,
}

#[derive(Clone, Debug)]
pub struct DebarSimple {
    pub label: String,
    /// Source simples in C (the sgn-pair).
    pub sources: Vec<usize>,
    /// Number of summands of A (x) L.
    pub k: u32,
    /// 1..=k for split sources.
    pub index: u32,
    pub fpdim: CycloReal,
    pub twist: i64,
    pub principal: bool,
}

#[derive(Clone, Debug)]
pub struct DebarBlocks {
    /// Indices (into the debar simples) of the principal block.
    pub principal: Vec<usize>,
    /// Projective classes [Z] of the principal simples, in the principal basis.
    pub cartan: Vec<Vec<i64>>,
    pub principal_type: String,
    pub trivial: Vec<usize>,
}

pub struct Deeq {
    pub an: SimpleAnalysis,
    pub sgn: usize,
    pub v: usize,
    pub tags: Vec<TagInfo>,
    pub simples: Vec<DebarSimple>,
}

fn support(x: &[i64]) -> Vec<(usize, i64)> {
    x.iter().enumerate().filter(|(_, &m)| m != 0).map(|(i, &m)| (i, m)).collect()
}

impl Deeq {
    pub fn new(l: i64) -> Result<Deeq, Error> {
        let an = SimpleAnalysis::new(l)?;
        let m = an.mueger()?;
        if !m.holds() {
            return Err(Error::Model("Muger center is not Rep(S3)".into()));
        }
        let (sgn, v) = (m.sgn.unwrap(), m.v.unwrap());
        let tags = classify_simples(&an, sgn, v)?;
        let simples = debar_simples(&an, &tags)?;
        Ok(Deeq { an, sgn, v, tags, simples })
    }

    pub fn tag_counts(&self) -> (usize, usize, usize) {
        let c = |t| self.tags.iter().filter(|x| x.tag == t).count();
        (c(SimpleTypeTag::A), c(SimpleTypeTag::B), c(SimpleTypeTag::C))
    }

    fn debar_of(&self, src: usize) -> Vec<usize> {
        (0..self.simples.len()).filter(|&d| self.simples[d].sources.contains(&src)).collect()
    }

    /// Class of A (x) L in the debar simple basis.
    pub fn image_of_simple(&self, src: usize) -> Result<Vec<i64>, Error> {
        let mut out = vec![0i64; self.simples.len()];
        match self.tags[src].tag {
            SimpleTypeTag::A | SimpleTypeTag::C => {
                for d in self.debar_of(src) {
                    out[d] += 1;
                }
            }
            SimpleTypeTag::B => {
                // L = V (x) L' for a type (a) L'; then A (x) L = (A (x) L')^2
                let src2 = (0..self.tags.len())
                    .find(|&j| self.tags[j].tag == SimpleTypeTag::A && self.tags[j].v_summands == vec![(src, 1)])
                    .ok_or_else(|| Error::Model(format!("{} is not V times a type (a) simple", self.an.label(src))))?;
                for d in self.debar_of(src2) {
                    out[d] += 2;
                }
            }
        }
        Ok(out)
    }

    pub fn blocks(&self) -> Result<DebarBlocks, Error> {
        let an = &self.an;
        let c = an.fm.cartan_matrix();
        let principal: Vec<usize> = (0..self.simples.len()).filter(|&d| self.simples[d].principal).collect();
        let trivial: Vec<usize> = (0..self.simples.len()).filter(|&d| !self.simples[d].principal).collect();
        let pos = |d: usize| principal.iter().position(|&x| x == d).unwrap();
        let mut cartan = vec![vec![0i64; principal.len()]; principal.len()];
        for &d in &principal {
            let y = &self.simples[d];
            let src = y.sources[0];
            let j = an.ring.principal.iter().position(|&p| p == src).unwrap();
            // F(P_j) in debar simples
            let mut fp = vec![0i64; self.simples.len()];
            for (jj, &p) in an.ring.principal.iter().enumerate() {
                if c[j][jj] == 0 {
                    continue;
                }
                for (t, m) in self.image_of_simple(p)?.into_iter().enumerate() {
                    fp[t] += c[j][jj] * m;
                }
            }
            // split covers share F(P) equally, except the summands coming from the same source
            let row = &mut cartan[pos(d)];
            for (t, &m) in fp.iter().enumerate() {
                if m == 0 {
                    continue;
                }
                if !self.simples[t].principal {
                    return Err(Error::Model("projective class leaves the principal block".into()));
                }
                let same_source = self.simples[t].sources == y.sources;
                let share = if y.k == 1 {
                    m
                } else if same_source {
                    if self.simples[t].index == y.index {
                        m
                    } else {
                        0
                    }
                } else if m % y.k as i64 == 0 {
                    m / y.k as i64
                } else {
                    return Err(Error::Model(format!("cannot split [{}] among {} covers", self.simples[t].label, y.k)));
                };
                row[pos(t)] += share;
            }
        }
        let n = principal.len();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if cartan[a][b] != cartan[b][a] {
                    return Err(Error::Model("principal debar Cartan matrix is not symmetric".into()));
                }
                for _ in 0..cartan[a][b] {
                    edges.push((a, b));
                }
            }
        }
        let principal_type = detect_affine_type(n, &edges);
        Ok(DebarBlocks { principal, cartan, principal_type, trivial })
    }

    /// Sum over debar simples of FPdim(Y) FPdim(Z(Y)).
    pub fn fpdim(&self) -> Result<CycloReal, Error> {
        let b = self.blocks()?;
        let ctx = self.an.fm.ctx.clone();
        let mut total = CycloReal::zero(&ctx);
        for &d in &b.trivial {
            total = &total + &(&self.simples[d].fpdim * &self.simples[d].fpdim);
        }
        for (r, &d) in b.principal.iter().enumerate() {
            let mut z = CycloReal::zero(&ctx);
            for (t, &e) in b.principal.iter().enumerate() {
                z = &z + &self.simples[e].fpdim.scale_int(b.cartan[r][t]);
            }
            total = &total + &(&self.simples[d].fpdim * &z);
        }
        Ok(total)
    }

    pub fn integral_simples(&self) -> Vec<usize> {
        (0..self.simples.len()).filter(|&d| self.simples[d].fpdim.as_integer().is_some()).collect()
    }

    /// Debar simples whose twist is trivial for q of the given order.
    pub fn trivial_twists(&self, q_order: i64) -> Vec<usize> {
        (0..self.simples.len()).filter(|&d| self.simples[d].twist % q_order == 0).collect()
    }

    /// alpha = [3] + [5].
    pub fn alpha(&self) -> Result<CycloReal, Error> {
        let ctx = &self.an.fm.ctx;
        Ok(&qint(3, ctx)? + &qint(5, ctx)?)
    }
}

pub fn classify_simples(an: &SimpleAnalysis, sgn: usize, v: usize) -> Result<Vec<TagInfo>, Error> {
    let mut out = Vec::new();
    for i in 0..an.n() {
        let sp = support(&an.ring.simple_product(sgn, i)?);
        let partner = match sp.as_slice() {
            [(p, 1)] => *p,
            _ => return Err(Error::Model(format!("sgn (x) {} is not simple", an.label(i)))),
        };
        let vs = support(&an.ring.simple_product(v, i)?);
        let summands: i64 = vs.iter().map(|x| x.1).sum();
        let tag = match (partner == i, summands) {
            (true, 3) => SimpleTypeTag::B,
            (false, 1) => SimpleTypeTag::A,
            (false, 2) => SimpleTypeTag::C,
            _ => return Err(Error::Model(format!("{} fits none of the three types", an.label(i)))),
        };
        out.push(TagInfo { tag, partner, v_summands: vs });
    }
    Ok(out)
}

pub fn debar_simples(an: &SimpleAnalysis, tags: &[TagInfo]) -> Result<Vec<DebarSimple>, Error> {
    let principal: Vec<usize> = an.ring.principal.clone();
    let mut out = Vec::new();
    for want in [SimpleTypeTag::A, SimpleTypeTag::C] {
        // principal sources first, then walls, each in simple order
        let mut reps: Vec<usize> = (0..tags.len()).filter(|&i| tags[i].tag == want && tags[i].partner > i).collect();
        reps.sort_by_key(|&i| {
            let pj = principal.iter().position(|&p| p == i || p == tags[i].partner);
            (pj.is_none(), pj.unwrap_or(0), i)
        });
        for i in reps {
            let k: u32 = if want == SimpleTypeTag::A { 1 } else { 3 };
            let src_label = an.label(i).trim_start_matches('L').to_string();
            let fpdim = an.cert.simple[i].scale(&BigRational::new(BigInt::from(1), BigInt::from(k)));
            let twist = an.twist(i)?;
            if an.twist(tags[i].partner)? != twist {
                return Err(Error::Model("sgn-partners with different twists".into()));
            }
            let is_principal = principal.contains(&i);
            for idx in 1..=k {
                let label = if k == 1 { format!("Y(L{src_label})") } else { format!("Y{idx}(L{src_label})") };
                out.push(DebarSimple {
                    label,
                    sources: vec![i, tags[i].partner],
                    k,
                    index: idx,
                    fpdim: fpdim.clone(),
                    twist,
                    principal: is_principal,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Elimination {
    /// The unit algebra.
    Trivial,
    /// Rational integer > 1: a sum of copies of the unit.
    Decomposable,
    /// r = 0: no unit summand possible.
    NoUnit,
    /// FPdim / candidate^2 is not an algebraic integer dominating its conjugates.
    ConjugateDominance { quotient: f64, conjugate: f64 },
}

#[derive(Clone, Debug)]
pub struct SieveCandidate {
    pub r: i64,
    pub s: i64,
    pub value: CycloReal,
    pub norm: BigRational,
    pub verdict: Elimination,
}

impl SieveCandidate {
    pub fn label(&self) -> String {
        match (self.r, self.s) {
            (r, 0) => r.to_string(),
            (0, 1) => "alpha".into(),
            (0, s) => format!("{s}alpha"),
            (r, 1) => format!("{r}+alpha"),
            (r, s) => format!("{r}+{s}alpha"),
        }
    }

    pub fn survives(&self) -> bool {
        self.verdict == Elimination::Trivial
    }
}

#[derive(Clone, Debug)]
pub struct SieveReport {
    pub fpdim: CycloReal,
    pub bound: Interval,
    pub candidates: Vec<SieveCandidate>,
}

impl SieveReport {
    pub fn survivors(&self) -> Vec<&SieveCandidate> {
        self.candidates.iter().filter(|c| c.survives()).collect()
    }
}

/// Candidates r + s alpha (r, s >= 0) for FPdim of a commutative exact algebra
/// supported on the principal block, with value <= sqrt(total) and norm a power of p.
pub fn anisotropy_sieve(total: &CycloReal, alpha: &CycloReal, p: u64) -> SieveReport {
    let ctx = total.ctx().clone();
    let bound = total.interval_at(0, 64).sqrt(64);
    let hi = bound.hi.to_f64().unwrap_or(f64::MAX).ceil() as i64 + 1;
    let a = alpha.approx();
    let mut candidates = Vec::new();
    let mut s = 0i64;
    while (s as f64) * a <= hi as f64 {
        let mut r = 0i64;
        loop {
            let value = &CycloReal::from_int(&ctx, r) + &alpha.scale_int(s);
            if value.compare(&CycloReal::zero(&ctx)) != Ordering::Greater {
                r += 1;
                continue;
            }
            // value <= sqrt(total) iff value^2 <= total, both positive
            if (&value * &value).compare(total) == Ordering::Greater {
                break;
            }
            let norm = value.norm();
            if power_of(&norm.abs(), p).is_some() {
                let verdict = if r == 1 && s == 0 {
                    Elimination::Trivial
                } else if s == 0 {
                    Elimination::Decomposable
                } else if r == 0 {
                    Elimination::NoUnit
                } else {
                    let q = total.div(&(&value * &value)).expect("nonzero candidate");
                    let conj = q.conjugates_f64();
                    let big = conj[1..].iter().cloned().fold(f64::MIN, f64::max);
                    if q.is_algebraic_integer() && q.compare_rational(&BigRational::from_integer(1.into())) != Ordering::Less && q.dominates_conjugates() {
                        Elimination::Trivial
                    } else {
                        Elimination::ConjugateDominance { quotient: conj[0], conjugate: big }
                    }
                };
                candidates.push(SieveCandidate { r, s, value, norm, verdict });
            }
            r += 1;
        }
        s += 1;
    }
    candidates.sort_by(|x, y| x.value.compare(&y.value).then((x.r, x.s).cmp(&(y.r, y.s))));
    SieveReport { fpdim: total.clone(), bound, candidates }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::set_of;

    #[test]
    fn g2_l7_deeq() {
        let d = Deeq::new(7).unwrap();
        let p = |j: usize| d.an.principal(j);
        assert_eq!((d.sgn, d.v), (p(7), p(4)));
        assert_eq!(d.tag_counts(), (10, 5, 8));
        assert_eq!(d.tags[p(0)].tag, SimpleTypeTag::A);
        assert_eq!(d.tags[p(0)].partner, p(7));
        assert_eq!(d.tags[p(4)].tag, SimpleTypeTag::B);
        assert_eq!(d.tags[p(2)].tag, SimpleTypeTag::C);
        assert_eq!(d.tags[p(2)].partner, p(5));
        assert_eq!(d.simples.len(), 17);
        let alpha = d.alpha().unwrap();
        let ctx = alpha.ctx().clone();
        let y1 = d.simples.iter().find(|y| y.label == "Y(L1)").unwrap();
        assert_eq!(y1.fpdim, &CycloReal::from_int(&ctx, 2) + &alpha.scale_int(3));
        for i in 1..=3 {
            assert_eq!(d.simples.iter().find(|y| y.label == format!("Y{i}(L2)")).unwrap().fpdim, alpha);
        }
        let b = d.blocks().unwrap();
        assert_eq!(b.trivial.len(), 12);
        assert_eq!(b.principal_type, "~D4");
        let labels: Vec<&str> = b.principal.iter().map(|&i| d.simples[i].label.as_str()).collect();
        assert_eq!(labels, vec!["Y(L0)", "Y(L1)", "Y1(L2)", "Y2(L2)", "Y3(L2)"]);
        assert_eq!(b.cartan[0], vec![2, 1, 0, 0, 0]);
        assert_eq!(b.cartan[1], vec![1, 2, 1, 1, 1]);
        assert_eq!(b.cartan[3], vec![0, 1, 0, 2, 0]);
        let total = d.fpdim().unwrap();
        let full = d.an.fm.fpdim_category(&d.an.cert);
        assert_eq!(total.scale_int(6), full);
        let q3 = qint(3, &ctx).unwrap();
        let q5 = qint(5, &ctx).unwrap();
        let closed = (&(&CycloReal::from_int(&ctx, 7) + &q3.scale_int(15)) + &q5.scale_int(12)).scale_int(49);
        assert_eq!(total, closed);
        // mpmath, 30 digits: 3054.06939738558...
        assert!((total.approx() - 3054.069397).abs() < 1e-5);
        assert_eq!(power_of(&total.norm(), 7), Some(7));
        assert_eq!(d.integral_simples().len(), 1);
        let zero = d.trivial_twists(14);
        assert_eq!(set_of(&zero), set_of(&b.principal));
        let w1 = d.simples.iter().find(|y| y.label == "Y(L(1,0))").unwrap();
        assert_eq!(w1.twist, 12);
    }

    #[test]
    fn sieve_at_seven() {
        let d = Deeq::new(7).unwrap();
        let total = d.fpdim().unwrap();
        let rep = anisotropy_sieve(&total, &d.alpha().unwrap(), 7);
        assert!((rep.bound.lo.to_f64().unwrap() - 55.263635).abs() < 1e-5);
        let labels: Vec<String> = rep.candidates.iter().map(|c| c.label()).collect();
        let mut expect = vec!["1", "7", "49", "alpha", "1+alpha", "1+2alpha", "1+3alpha", "2+3alpha", "3+4alpha", "2+5alpha", "7alpha", "7+7alpha"];
        let mut got: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        expect.sort();
        got.sort();
        assert_eq!(got, expect);
        let c34 = rep.candidates.iter().find(|c| (c.r, c.s) == (3, 4)).unwrap();
        match c34.verdict {
            Elimination::ConjugateDominance { quotient, conjugate } => {
                assert!((quotient - 8.288432).abs() < 1e-5);
                // mpmath: 328.539506841949...
                assert!((conjugate - 328.539507).abs() < 1e-5);
            }
            ref v => panic!("{v:?}"),
        }
        let surv: Vec<String> = rep.survivors().iter().map(|c| c.label()).collect();
        assert_eq!(surv, vec!["1"]);
        assert_eq!(rep.candidates.iter().filter(|c| c.verdict == Elimination::NoUnit).count(), 2);
        assert_eq!(rep.candidates.iter().filter(|c| c.verdict == Elimination::Decomposable).count(), 2);
    }
}
