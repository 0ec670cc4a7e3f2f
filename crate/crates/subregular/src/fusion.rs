//! Grothendieck ring of the quotient category for G2: tilting products in the
//! survivor basis, f_mu polynomials, exact Frobenius-Perron dimensions, the
//! principal block Cartan matrix, simple classes and their products.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, Schur};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::affine::{AffineWeyl, CellGraph};
use crate::exactnum::{qint_any, s_formula, sin2, two_cos, CycloReal, FieldContext};
use crate::linalg;
use crate::rootdata::{hom_pairing, LieType, Series, Weight};
use crate::tiltchar::TiltingDB;
use crate::Error;

pub type IntMatrix = Vec<Vec<i64>>;

/// Polynomial in X = [T(omega_1)], Y = [T(omega_2)].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly2(pub BTreeMap<(u32, u32), i64>);

impl Poly2 {
    pub fn monomial(a: u32, b: u32) -> Self {
        let mut m = BTreeMap::new();
        m.insert((a, b), 1);
        Poly2(m)
    }

    pub fn add_scaled(&mut self, o: &Poly2, k: i64) {
        for (e, c) in &o.0 {
            let v = self.0.entry(*e).or_insert(0);
            *v += c * k;
            if *v == 0 {
                self.0.remove(e);
            }
        }
    }

    pub fn coeff(&self, a: u32, b: u32) -> i64 {
        self.0.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn eval_field(&self, x: &CycloReal, y: &CycloReal) -> CycloReal {
        let ctx = x.ctx().clone();
        let amax = self.0.keys().map(|k| k.0).max().unwrap_or(0);
        let bmax = self.0.keys().map(|k| k.1).max().unwrap_or(0);
        let xp = powers(x, amax);
        let yp = powers(y, bmax);
        let mut acc = CycloReal::zero(&ctx);
        for ((a, b), c) in &self.0 {
            acc = &acc + &(&xp[*a as usize] * &yp[*b as usize]).scale_int(*c);
        }
        acc
    }

    pub fn eval_matrix(&self, x: &IntMatrix, y: &IntMatrix) -> Result<IntMatrix, Error> {
        let n = x.len();
        let to128 = |m: &IntMatrix| -> Vec<Vec<i128>> { m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect() };
        let (x, y) = (to128(x), to128(y));
        let amax = self.0.keys().map(|k| k.0).max().unwrap_or(0) as usize;
        let bmax = self.0.keys().map(|k| k.1).max().unwrap_or(0) as usize;
        let id: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
        let mut xp = vec![id.clone()];
        for k in 0..amax {
            xp.push(mul128(&xp[k], &x)?);
        }
        let mut yp = vec![id];
        for k in 0..bmax {
            yp.push(mul128(&yp[k], &y)?);
        }
        let mut acc = vec![vec![0i128; n]; n];
        for ((a, b), c) in &self.0 {
            let m = mul128(&xp[*a as usize], &yp[*b as usize])?;
            for i in 0..n {
                for j in 0..n {
                    acc[i][j] = m[i][j]
                        .checked_mul(*c as i128)
                        .and_then(|v| v.checked_add(acc[i][j]))
                        .ok_or_else(|| Error::Internal("overflow evaluating f_mu".into()))?;
                }
            }
        }
        acc.into_iter()
            .map(|r| r.into_iter().map(|v| i64::try_from(v).map_err(|_| Error::Internal("overflow".into()))).collect())
            .collect()
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), c) in self.0.iter().rev() {
            let mono = match (a, b) {
                (0, 0) => String::new(),
                _ => {
                    let p = |v: &str, e: u32| match e {
                        0 => String::new(),
                        1 => v.to_string(),
                        _ => format!("{v}^{e}"),
                    };
                    format!("{}{}", p("X", *a), p("Y", *b))
                }
            };
            let sign = if *c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let coef = if mag == 1 && !mono.is_empty() { String::new() } else { mag.to_string() };
            write!(f, "{}{}{}{}", if first { "" } else { " " }, sign, if first || sign.is_empty() { "" } else { " " }, coef)?;
            write!(f, "{mono}")?;
            first = false;
        }
        Ok(())
    }
}

fn powers(x: &CycloReal, n: u32) -> Vec<CycloReal> {
    let mut v = vec![CycloReal::one(x.ctx())];
    for k in 0..n as usize {
        v.push(&v[k] * x);
    }
    v
}

fn mul128(a: &[Vec<i128>], b: &[Vec<i128>]) -> Result<Vec<Vec<i128>>, Error> {
    let n = a.len();
    let mut out = vec![vec![0i128; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = a[i][k]
                    .checked_mul(b[k][j])
                    .and_then(|v| v.checked_add(out[i][j]))
                    .ok_or_else(|| Error::Internal("overflow in matrix power".into()))?;
            }
        }
    }
    Ok(out)
}

/// Fusion data of C(G2, G2(a1), l, q) in the survivor basis.
pub struct FusionModel {
    pub aw: Arc<AffineWeyl>,
    pub ctx: Arc<FieldContext>,
    pub cell: CellGraph,
    /// Slot i + 1 holds weights[i]; slot 0 is the acting unit T(0).
    pub weights: Vec<Weight>,
    pub interior: Vec<bool>,
    pub slot: HashMap<Weight, usize>,
    pub db: TiltingDB,
    /// gens[k][i][j] = [T(omega_{k+1}) (x) T(mu_j) : T(mu_i)], N x N.
    pub gens: [IntMatrix; 2],
    /// aug[k] is the augmented multiplication matrix of slot k (aug[0] = identity);
    /// empty until `compute_products`.
    pub aug: Vec<IntMatrix>,
    /// Weight diagrams of T(omega_1), T(omega_2).
    pub gen_weights: [Vec<(Weight, i64)>; 2],
}

impl fmt::Debug for FusionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FusionModel(G2, l={}, {} weights)", self.aw.l, self.weights.len())
    }
}

impl FusionModel {
    /// Generator actions only.
    pub fn build(l: i64) -> Result<FusionModel, Error> {
        Self::build_for(LieType::g2(), l)
    }

    /// Generator actions plus the full product table.
    pub fn build_full(l: i64) -> Result<FusionModel, Error> {
        let mut fm = Self::build(l)?;
        fm.compute_products()?;
        Ok(fm)
    }

    pub fn build_for(ty: LieType, l: i64) -> Result<FusionModel, Error> {
        if ty.series != Series::G {
            return Err(Error::Config(format!("fusion tables are implemented for G2 only, got {ty}")));
        }
        let aw = AffineWeyl::new(ty, l)?;
        let ctx = FieldContext::new(l as u32)?;
        let cell = aw.enumerate_cell_subregular()?;
        let pa = aw.compute_p_a(&cell);
        let weights: Vec<Weight> = pa.iter().map(|p| p.0.clone()).collect();
        let interior: Vec<bool> = pa.iter().map(|p| p.1).collect();
        let slot: HashMap<Weight, usize> = weights.iter().enumerate().map(|(i, w)| (w.clone(), i + 1)).collect();
        let db = TiltingDB::new(aw.clone());
        let n = weights.len();
        let mut fm = FusionModel {
            aw,
            ctx,
            cell,
            weights,
            interior,
            slot,
            db,
            gens: [Vec::new(), Vec::new()],
            aug: Vec::new(),
            gen_weights: [Vec::new(), Vec::new()],
        };
        for k in 0..2 {
            let om = fm.aw.rs.omega(k);
            let mut m = vec![vec![0i64; n]; n];
            for j in 1..=n {
                let mu = fm.weights[j - 1].clone();
                let v = fm.product_vector(&om, &mu)?;
                if v[0] != 0 {
                    return Err(Error::Model(format!("unit summand in T{om} (x) T{mu}")));
                }
                for i in 1..=n {
                    m[i - 1][j - 1] = v[i];
                }
            }
            fm.gens[k] = m;
            let mut diag: BTreeMap<Weight, i64> = BTreeMap::new();
            for (lam, mult) in fm.db.get(&om)?.terms() {
                for (mu, k2) in fm.aw.rs.weight_multiplicities(lam)? {
                    *diag.entry(mu).or_insert(0) += mult * k2;
                }
            }
            fm.gen_weights[k] = diag.into_iter().filter(|x| x.1 != 0).collect();
        }
        Ok(fm)
    }

    /// All products T(mu_i) (x) T(mu_j) of survivor weights, as augmented matrices.
    pub fn compute_products(&mut self) -> Result<(), Error> {
        if !self.aug.is_empty() {
            return Ok(());
        }
        let n = self.n();
        let mut prod: Vec<Vec<Vec<i64>>> = vec![vec![Vec::new(); n + 1]; n + 1];
        for i in 1..=n {
            for j in i..=n {
                let (a, b) = (self.weights[i - 1].clone(), self.weights[j - 1].clone());
                let v = self.product_vector(&a, &b)?;
                prod[i][j] = v.clone();
                prod[j][i] = v;
            }
        }
        let mut aug = vec![identity(n + 1)];
        for k in 1..=n {
            let mut m = vec![vec![0i64; n + 1]; n + 1];
            m[k][0] = 1;
            for j in 1..=n {
                for i in 0..=n {
                    m[i][j] = prod[k][j][i];
                }
            }
            if m[0].iter().any(|&v| v != 0) {
                return Err(Error::Model(format!("unit summand in a product with T{}", self.weights[k - 1])));
            }
            aug.push(m);
        }
        self.aug = aug;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weight_of_slot(&self, s: usize) -> Weight {
        if s == 0 {
            self.aw.rs.zero()
        } else {
            self.weights[s - 1].clone()
        }
    }

    /// Whether omega_1, omega_2 occupy slots 1 and 2 (needed for f_mu).
    pub fn generators_are_slots(&self) -> bool {
        let rs = &self.aw.rs;
        self.weights.len() >= 2 && self.weights[0] == rs.omega(0) && self.weights[1] == rs.omega(1)
    }

    /// Survivor decomposition of T(mu) (x) T(nu) in the quotient category.
    pub fn tilting_product_in_c(&mut self, mu: &Weight, nu: &Weight) -> Result<Vec<(Weight, i64)>, Error> {
        let rs = self.aw.rs.clone();
        let a = self.db.get(mu)?;
        let b = self.db.get(nu)?;
        let ch = rs.char_product(&a, &b)?;
        let dec = self.db.decompose_character(&ch)?;
        let mut out = Vec::new();
        for (lam, m) in dec {
            if self.slot.contains_key(&lam) || lam.is_zero() {
                out.push((lam, m));
            } else if self.aw.survivor(&lam, &self.cell) {
                return Err(Error::Model(format!("surviving summand T{lam} lies outside the survivor weight set")));
            }
        }
        Ok(out)
    }

    fn product_vector(&mut self, a: &Weight, b: &Weight) -> Result<Vec<i64>, Error> {
        let mut v = vec![0i64; self.n() + 1];
        for (lam, m) in self.tilting_product_in_c(a, b)? {
            let s = if lam.is_zero() { 0 } else { self.slot[&lam] };
            v[s] += m;
        }
        Ok(v)
    }

    /// Non-augmented matrix M(mu) (rows/cols = slots 1..N).
    pub fn plain_matrix(&self, s: usize) -> IntMatrix {
        self.aug[s][1..].iter().map(|r| r[1..].to_vec()).collect()
    }

    pub fn apply(&self, s: usize, v: &[i128]) -> Vec<i128> {
        let m = &self.aug[s];
        (0..v.len()).map(|i| (0..v.len()).map(|j| m[i][j] as i128 * v[j]).sum()).collect()
    }

    /// f_mu for every slot, by the triangular system in the generators.
    pub fn f_polys(&self) -> Result<Vec<Poly2>, Error> {
        if self.aug.is_empty() || !self.generators_are_slots() {
            return Err(Error::Config("f_mu needs the product table with omega_1, omega_2 as slots 1, 2".into()));
        }
        let n = self.n();
        let mut fs: Vec<Poly2> = vec![Poly2::monomial(0, 0)];
        for i in 1..=n {
            let w = &self.weights[i - 1];
            let (a, b) = (w.0[0] as u32, w.0[1] as u32);
            let mut v = vec![0i128; n + 1];
            v[0] = 1;
            for _ in 0..b {
                v = self.apply(2, &v);
            }
            for _ in 0..a {
                v = self.apply(1, &v);
            }
            if v[i] != 1 || v[i + 1..].iter().any(|&x| x != 0) {
                return Err(Error::Model(format!("generator monomial for {w} is not triangular in the chosen order")));
            }
            let mut f = Poly2::monomial(a, b);
            for (j, fj) in fs.iter().enumerate().take(i) {
                let c = i64::try_from(v[j]).map_err(|_| Error::Internal("overflow".into()))?;
                if c != 0 {
                    f.add_scaled(fj, -c);
                }
            }
            fs.push(f);
        }
        Ok(fs)
    }

    pub fn commutation_failures(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for a in 1..self.aug.len() {
            for b in a + 1..self.aug.len() {
                if linalg::mat_mul_i64(&self.aug[a], &self.aug[b]) != linalg::mat_mul_i64(&self.aug[b], &self.aug[a]) {
                    bad.push((a, b));
                }
            }
        }
        bad
    }

    /// Largest real eigenvalue of the action of T(omega_k) by shifted power
    /// iteration, and the full real spectrum.
    pub fn numeric_spectrum(&self, k: usize) -> (f64, Vec<f64>) {
        let m = &self.gens[k - 1];
        let n = m.len();
        let mut v = vec![1.0f64; n];
        let mut lam = 0.0;
        for _ in 0..20000 {
            let mut w = vec![0.0; n];
            for i in 0..n {
                for j in 0..n {
                    w[i] += m[i][j] as f64 * v[j];
                }
            }
            for j in 0..n {
                w[j] += v[j];
            }
            let norm = w.iter().cloned().fold(0.0, f64::max);
            let next = norm - 1.0;
            for x in w.iter_mut() {
                *x /= norm;
            }
            let done = (next - lam).abs() < 1e-14 * next.abs().max(1.0);
            lam = next;
            v = w;
            if done {
                break;
            }
        }
        // the unbounded QR iteration can stall; cap it and retry with shifts
        let mut real = Vec::new();
        for shift in [0.0, 0.5, 1.25, -0.75, 2.5] {
            let dm = DMatrix::from_fn(n, n, |i, j| m[i][j] as f64 + if i == j { shift } else { 0.0 });
            if let Some(schur) = Schur::try_new(dm, 1e-13, 20000) {
                real = schur.complex_eigenvalues().iter().filter(|z| z.im.abs() < 1e-6).map(|z| z.re - shift).collect();
                break;
            }
        }
        real.sort_by(|a, b| a.partial_cmp(b).unwrap());
        (lam, real)
    }

    /// Slot of the unit object L(s0.0) of the quotient.
    pub fn unit_slot(&self) -> Result<usize, Error> {
        Ok(self.principal_slots()?[0])
    }

    /// Exact Perron certificate for candidate generator dimensions.
    ///
    /// Simple dimensions: a right eigenvector of both generator actions, with
    /// the unit pinned to 1. Projective dimensions: a left eigenvector, scaled
    /// by the unit's row of the principal Cartan matrix. Both strictly
    /// positive, so the candidates are the spectral radii.
    pub fn certify(&self, lam1: &CycloReal, lam2: &CycloReal) -> Result<FpCert, Error> {
        let n = self.n();
        let u = self.unit_slot()? - 1;
        let one = CycloReal::one(&self.ctx);
        let lams = [lam1, lam2];
        let right = |i: usize, j: usize, k: usize| self.gens[k][i][j];
        let left = |i: usize, j: usize, k: usize| self.gens[k][j][i];
        let simple = eigenvector_pinned(n, u, &one, lams, &right, &self.ctx)?;
        let cartan = self.cartan_matrix();
        let principal = self.principal_slots()?;
        let mut pin = CycloReal::zero(&self.ctx);
        for (j, &s) in principal.iter().enumerate() {
            pin = &pin + &simple[s - 1].scale_int(cartan[0][j]);
        }
        let proj = eigenvector_pinned(n, u, &pin, lams, &left, &self.ctx)?;
        for (name, v) in [("simple", &simple), ("projective", &proj)] {
            if let Some(i) = v.iter().position(|d| d.sign() != std::cmp::Ordering::Greater) {
                return Err(Error::Model(format!("{name} eigenvector entry at slot {} is not positive", i + 1)));
            }
        }
        let (p1, sp1) = self.numeric_spectrum(1);
        let (p2, sp2) = self.numeric_spectrum(2);
        Ok(FpCert { lam1: lam1.clone(), lam2: lam2.clone(), proj, simple, numeric: (p1, p2), spectra: (sp1, sp2) })
    }

    /// Identify the generator dimensions in the field from the numeric spectrum, then certify.
    pub fn fpdim_generators(&self, candidates: Option<(CycloReal, CycloReal)>) -> Result<FpCert, Error> {
        if let Some((a, b)) = candidates {
            return self.certify(&a, &b);
        }
        let (p1, sp1) = self.numeric_spectrum(1);
        let (p2, sp2) = self.numeric_spectrum(2);
        let mut last = None;
        for (a, b) in self.torus_candidates(p1, p2) {
            match self.certify(&a, &b) {
                Ok(c) => return Ok(c),
                Err(e) => last = Some(e),
            }
        }
        let d = self.ctx.degree as i32;
        let work = |sp: &[f64]| (sp.len() as f64).powi(d - 1);
        if work(&sp1) + work(&sp2) > 2e7 {
            return Err(Error::Model(format!(
                "no torus candidate for Perron roots {p1:.9}, {p2:.9} and the conjugate search is over budget{}",
                last.map(|e| format!(": {e}")).unwrap_or_default()
            )));
        }
        let c1 = recognize_in_field(p1, &sp1, &self.ctx);
        let c2 = recognize_in_field(p2, &sp2, &self.ctx);
        for a in &c1 {
            for b in &c2 {
                match self.certify(a, b) {
                    Ok(c) => return Ok(c),
                    Err(e) => last = Some(e),
                }
            }
        }
        Err(Error::Model(format!(
            "could not certify Perron roots {p1:.9}, {p2:.9} ({} / {} field candidates){}",
            c1.len(),
            c2.len(),
            last.map(|e| format!(": {e}")).unwrap_or_default()
        )))
    }

    /// Characters of the tilting ring are Weyl characters evaluated at torus
    /// elements t, e^mu(t) = exp(i pi (mu, xi) / (l D)); look for the pairs
    /// matching the numeric Perron roots among those landing in the field.
    pub fn torus_candidates(&self, p1: f64, p2: f64) -> Vec<(CycloReal, CycloReal)> {
        let rs = &self.aw.rs;
        let l = self.aw.l;
        let half = BigRational::new(1.into(), 2.into());
        let mut out: Vec<(CycloReal, CycloReal)> = Vec::new();
        for d in [1i64, 2, 3, 4, 6, 12] {
            let period = 2 * l * d;
            for a in 0..period {
                for b in 0..period {
                    let xi = Weight(vec![a, b]);
                    let eval = |ws: &[(Weight, i64)]| -> Option<(f64, Vec<(i64, i64)>)> {
                        let mut x = 0.0;
                        let mut terms = Vec::with_capacity(ws.len());
                        for (mu, m) in ws {
                            let s = rs.inner_scaled(mu, &xi);
                            if s % d != 0 {
                                return None;
                            }
                            let k = (s / d).rem_euclid(2 * l);
                            x += *m as f64 * (std::f64::consts::PI * k as f64 / l as f64).cos();
                            terms.push((k, *m));
                        }
                        Some((x, terms))
                    };
                    let (Some((x1, t1)), Some((x2, t2))) = (eval(&self.gen_weights[0]), eval(&self.gen_weights[1])) else {
                        continue;
                    };
                    if (x1 - p1).abs() > 1e-7 || (x2 - p2).abs() > 1e-7 {
                        continue;
                    }
                    let exact = |t: &[(i64, i64)]| {
                        let mut v = CycloReal::zero(&self.ctx);
                        for &(k, m) in t {
                            v = &v + &two_cos(k, &self.ctx).scale_int(m);
                        }
                        v.scale(&half)
                    };
                    let pair = (exact(&t1), exact(&t2));
                    if !out.contains(&pair) {
                        out.push(pair);
                    }
                }
            }
            if !out.is_empty() {
                break;
            }
        }
        out
    }

    /// Slots of the tiltings w.lam0 for w in the cell (cell vertex order), per interior lam0.
    pub fn regular_blocks(&self) -> Result<Vec<(Weight, Vec<usize>)>, Error> {
        let mut out = Vec::new();
        for lam0 in self.aw.interior_weights() {
            let mut slots = Vec::new();
            for v in &self.cell.vertices {
                let mu = self.aw.dot_apply(&v.element, &lam0);
                let s = *self
                    .slot
                    .get(&mu)
                    .ok_or_else(|| Error::Model(format!("{mu} missing from the survivor weights")))?;
                slots.push(s);
            }
            out.push((lam0, slots));
        }
        Ok(out)
    }

    pub fn principal_slots(&self) -> Result<Vec<usize>, Error> {
        let z = self.aw.rs.zero();
        self.regular_blocks()?
            .into_iter()
            .find(|(l0, _)| *l0 == z)
            .map(|b| b.1)
            .ok_or_else(|| Error::Internal("no principal block".into()))
    }

    pub fn wall_slots(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&s| !self.interior[s - 1]).collect()
    }

    pub fn cartan_matrix(&self) -> IntMatrix {
        cartan_from_graph(&self.cell)
    }

    /// Pre-quotient Hom dimensions between the cell tiltings.
    pub fn hom_pairing_table(&mut self) -> Result<IntMatrix, Error> {
        let zero = self.aw.rs.zero();
        let chars = self
            .cell
            .vertices
            .iter()
            .map(|v| self.aw.dot_apply(&v.element, &zero))
            .collect::<Vec<_>>()
            .into_iter()
            .map(|mu| self.db.get(&mu))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(chars.iter().map(|a| chars.iter().map(|b| hom_pairing(a, b)).collect()).collect())
    }

    /// Every regular block satisfies FPdim(P) = C FPdim(L) with C = 2I + A.
    pub fn check_block_cartan(&self, cert: &FpCert) -> Result<(), Error> {
        let c = self.cartan_matrix();
        for (lam0, slots) in self.regular_blocks()? {
            for (j, &s) in slots.iter().enumerate() {
                let mut acc = CycloReal::zero(&self.ctx);
                for (k, &t) in slots.iter().enumerate() {
                    acc = &acc + &cert.simple[t - 1].scale_int(c[j][k]);
                }
                if acc != cert.proj[s - 1] {
                    return Err(Error::Model(format!("block of {lam0}: Cartan relation fails at vertex {j}")));
                }
            }
        }
        Ok(())
    }

    /// FPdim of the whole category: sum over survivor weights of FPdim(T) FPdim(head).
    pub fn fpdim_category(&self, cert: &FpCert) -> CycloReal {
        let mut total = CycloReal::zero(&self.ctx);
        for (p, s) in cert.proj.iter().zip(&cert.simple) {
            total = &total + &(p * s);
        }
        total
    }

    /// Heads of the principal-block projectives, in cell vertex order.
    pub fn fpdim_principal_simples(&self, cert: &FpCert) -> Result<Vec<CycloReal>, Error> {
        Ok(self.principal_slots()?.iter().map(|&s| cert.simple[s - 1].clone()).collect())
    }

    pub fn twist_exponent(&self, lam: &Weight) -> Result<i64, Error> {
        let q = self.aw.rs.dot_inner(lam);
        if !q.is_integer() {
            return Err(Error::Domain(format!("<lam, lam + 2 rho> not integral at {lam}")));
        }
        Ok(q.to_integer().rem_euclid(2 * self.aw.l))
    }
}

fn is_common_eigenvector(
    x: &[CycloReal],
    lams: [&CycloReal; 2],
    m: &dyn Fn(usize, usize, usize) -> i64,
    ctx: &Arc<FieldContext>,
) -> bool {
    let n = x.len();
    (0..2).all(|k| {
        (0..n).all(|i| {
            let mut acc = CycloReal::zero(ctx);
            for (j, xj) in x.iter().enumerate() {
                let c = m(i, j, k);
                if c != 0 {
                    acc = &acc + &xj.scale_int(c);
                }
            }
            acc == lams[k] * &x[i]
        })
    })
}

/// Guess an eigenvector with entries in Z[c]: solve numerically at every real
/// embedding and read off power-basis coefficients.
fn eigenvector_by_embeddings(
    n: usize,
    pin: usize,
    val: &CycloReal,
    lams: [&CycloReal; 2],
    m: &dyn Fn(usize, usize, usize) -> i64,
    ctx: &Arc<FieldContext>,
) -> Option<Vec<CycloReal>> {
    let d = ctx.degree;
    let cg = CycloReal::gen(ctx).conjugates_f64();
    let cl = [lams[0].conjugates_f64(), lams[1].conjugates_f64()];
    let cv = val.conjugates_f64();
    let mut per_embedding = Vec::with_capacity(d);
    for k in 0..d {
        // both generator equations stacked; one alone can have repeated conjugate eigenvalues
        let a = DMatrix::from_fn(2 * n, n - 1, |r, jj| {
            let (g, i) = (r / n, r % n);
            let j = if jj >= pin { jj + 1 } else { jj };
            m(i, j, g) as f64 - if i == j { cl[g][k] } else { 0.0 }
        });
        let b = nalgebra::DVector::from_fn(2 * n, |r, _| {
            let (g, i) = (r / n, r % n);
            -(m(i, pin, g) as f64) * cv[k] + if i == pin { cl[g][k] * cv[k] } else { 0.0 }
        });
        let sol = a.svd(true, true).solve(&b, 1e-12).ok()?;
        let mut x = Vec::with_capacity(n);
        let mut it = sol.iter();
        for j in 0..n {
            x.push(if j == pin { cv[k] } else { *it.next().unwrap() });
        }
        per_embedding.push(x);
    }
    let vinv = if d > 1 { DMatrix::from_fn(d, d, |k, i| cg[k].powi(i as i32)).try_inverse()? } else { DMatrix::identity(1, 1) };
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut coeffs = Vec::with_capacity(d);
        for r in 0..d {
            let a: f64 = (0..d).map(|k| vinv[(r, k)] * per_embedding[k][i]).sum();
            if (a - a.round()).abs() > 1e-5 {
                return None;
            }
            coeffs.push(BigRational::from_integer(BigInt::from(a.round() as i64)));
        }
        out.push(CycloReal::from_coeffs(ctx, coeffs));
    }
    Some(out)
}

/// Solve for x with x[pin] = val and sum_j m(i, j, k) x_j = lam_k x_i for k = 0, 1.
fn eigenvector_pinned(
    n: usize,
    pin: usize,
    val: &CycloReal,
    lams: [&CycloReal; 2],
    m: &dyn Fn(usize, usize, usize) -> i64,
    ctx: &Arc<FieldContext>,
) -> Result<Vec<CycloReal>, Error> {
    let zero = CycloReal::zero(ctx);
    let unknowns: Vec<usize> = (0..n).filter(|&j| j != pin).collect();
    let row = |i: usize, k: usize| -> (Vec<CycloReal>, CycloReal) {
        let coeffs = unknowns
            .iter()
            .map(|&j| {
                let c = CycloReal::from_int(ctx, m(i, j, k));
                if i == j {
                    &c - lams[k]
                } else {
                    c
                }
            })
            .collect();
        let mut rhs = val.scale_int(-m(i, pin, k));
        if i == pin {
            rhs = &rhs + &(lams[k] * val);
        }
        (coeffs, rhs)
    };
    let x = match eigenvector_by_embeddings(n, pin, val, lams, m, ctx) {
        Some(x) if is_common_eigenvector(&x, lams, m, ctx) => x,
        _ => {
            let mut sol = None;
            for skip in 0..n {
                let (a, b): (Vec<_>, Vec<_>) = (0..n).filter(|&i| i != skip).map(|i| row(i, 0)).unzip();
                if let Some(x) = linalg::solve(a, b, &zero) {
                    sol = Some(x);
                    break;
                }
            }
            let rest = sol.ok_or_else(|| Error::Model("Perron eigenspace is not one-dimensional".into()))?;
            let mut x = Vec::with_capacity(n);
            let mut it = rest.into_iter();
            for j in 0..n {
                x.push(if j == pin { val.clone() } else { it.next().unwrap() });
            }
            x
        }
    };
    if !is_common_eigenvector(&x, lams, m, ctx) {
        let k = if is_common_eigenvector(&x, [lams[0], lams[0]], m, ctx) { 1 } else { 0 };
        return Err(Error::Model(format!(
            "{} ~ {:.6} is not a common eigenvalue of the generator actions",
            lams[k],
            lams[k].approx()
        )));
    }
    Ok(x)
}

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

pub fn cartan_from_graph(cell: &CellGraph) -> IntMatrix {
    let mut a = cell.adjacency();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] += 2;
    }
    a
}

/// Determinants of 2I + A over every proper subgraph: all spanning subgraphs with
/// an edge removed and all vertex-deleted induced subgraphs.
pub fn proper_subgraph_determinants(n: usize, edges: &[(usize, usize)]) -> Vec<(String, BigRational)> {
    let mut out = Vec::new();
    let m = edges.len();
    for mask in 0..(1u64 << m) - 1 {
        let mut a = identity(n);
        for r in a.iter_mut() {
            for x in r.iter_mut() {
                *x *= 2;
            }
        }
        for (k, &(x, y)) in edges.iter().enumerate() {
            if mask >> k & 1 == 1 {
                a[x][y] = 1;
                a[y][x] = 1;
            }
        }
        out.push((format!("edges {mask:b}"), linalg::int_det(&a)));
    }
    for drop in 0..n {
        let keep: Vec<usize> = (0..n).filter(|&v| v != drop).collect();
        let a: IntMatrix = keep
            .iter()
            .map(|&i| {
                keep.iter()
                    .map(|&j| if i == j { 2 } else { edges.iter().any(|&(x, y)| (x, y) == (i, j) || (y, x) == (i, j)) as i64 })
                    .collect()
            })
            .collect();
        out.push((format!("without vertex {drop}"), linalg::int_det(&a)));
    }
    out
}

/// Certified generator dimensions and the dimensions of every slot.
#[derive(Clone, Debug)]
pub struct FpCert {
    pub lam1: CycloReal,
    pub lam2: CycloReal,
    /// FPdim T(mu_i) and FPdim L(mu_i), indexed by slot - 1.
    pub proj: Vec<CycloReal>,
    pub simple: Vec<CycloReal>,
    pub numeric: (f64, f64),
    pub spectra: (Vec<f64>, Vec<f64>),
}

/// Elements of Z[c] whose conjugates are (value, then members of `spectrum`).
impl FpCert {
    /// Projective dimensions with the acting unit prepended (slot 0).
    pub fn augmented(&self) -> Vec<CycloReal> {
        let mut v = vec![CycloReal::one(self.lam1.ctx())];
        v.extend(self.proj.iter().cloned());
        v
    }
}

pub fn recognize_in_field(value: f64, spectrum: &[f64], ctx: &Arc<FieldContext>) -> Vec<CycloReal> {
    let d = ctx.degree;
    let mut found: Vec<CycloReal> = Vec::new();
    if d <= 1 {
        if (value - value.round()).abs() < 1e-6 {
            found.push(CycloReal::from_int(ctx, value.round() as i64));
        }
        return found;
    }
    let c = CycloReal::gen(ctx).conjugates_f64();
    let v = DMatrix::from_fn(d, d, |k, i| c[k].powi(i as i32));
    let Some(vinv) = v.try_inverse() else { return found };
    let mut e: Vec<f64> = Vec::new();
    for &x in spectrum {
        if e.iter().all(|y| (x - y).abs() > 1e-7) {
            e.push(x);
        }
    }
    let mut partial = vec![0.0; d];
    for i in 0..d {
        partial[i] = vinv[(i, 0)] * value;
    }
    let mut choice = vec![0usize; d];
    fn rec(
        k: usize,
        d: usize,
        partial: &mut Vec<f64>,
        vinv: &DMatrix<f64>,
        e: &[f64],
        choice: &mut Vec<usize>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if k == d {
            if partial.iter().all(|a| (a - a.round()).abs() < 1e-4) {
                let a: Vec<i64> = partial.iter().map(|a| a.round() as i64).collect();
                if !out.contains(&a) {
                    out.push(a);
                }
            }
            return;
        }
        for (idx, &s) in e.iter().enumerate() {
            choice[k] = idx;
            for i in 0..d {
                partial[i] += vinv[(i, k)] * s;
            }
            rec(k + 1, d, partial, vinv, e, choice, out);
            for i in 0..d {
                partial[i] -= vinv[(i, k)] * s;
            }
        }
    }
    let mut coeffs = Vec::new();
    rec(1, d, &mut partial, &vinv, &e, &mut choice, &mut coeffs);
    for a in coeffs {
        let x = CycloReal::from_coeffs(ctx, a.into_iter().map(|v| BigRational::from_integer(v.into())).collect());
        if (x.approx() - value).abs() < 1e-6 {
            found.push(x);
        }
    }
    found
}

/// Grothendieck ring on simple classes, available when the fundamental alcove
/// has a single interior weight (one regular block).
pub struct SimpleRing {
    /// phi[k] = image of augmented basis vector k in the simple basis.
    phi: Vec<Vec<BigRational>>,
    /// Primitive integer generator of ker(phi).
    pub kappa: Vec<BigInt>,
    /// lift[i] = an augmented vector mapping to the i-th simple.
    lift: Vec<Vec<BigRational>>,
    aug: Vec<IntMatrix>,
    /// Simple index (0-based, = slot - 1) of principal vertex j.
    pub principal: Vec<usize>,
    pub walls: Vec<usize>,
    n: usize,
}

impl SimpleRing {
    pub fn new(fm: &FusionModel) -> Result<SimpleRing, Error> {
        let blocks = fm.regular_blocks()?;
        if blocks.len() != 1 {
            return Err(Error::Config(format!(
                "simple classes need a single regular block; found {} at l={}",
                blocks.len(),
                fm.aw.l
            )));
        }
        let n = fm.n();
        let principal: Vec<usize> = blocks[0].1.iter().map(|s| s - 1).collect();
        let c = fm.cartan_matrix();
        let rat = |v: i64| BigRational::from_integer(v.into());
        let mut phi = vec![vec![BigRational::zero(); n]; n + 1];
        phi[0][principal[0]] = BigRational::one();
        for s in 1..=n {
            if let Some(j) = principal.iter().position(|&p| p == s - 1) {
                for (jj, &p) in principal.iter().enumerate() {
                    phi[s][p] = rat(c[j][jj]);
                }
            } else {
                phi[s][s - 1] = BigRational::one();
            }
        }
        // kernel of phi^T viewed as a map Q^{n+1} -> Q^n
        let cols: Vec<Vec<BigRational>> = (0..n).map(|i| (0..=n).map(|k| phi[k][i].clone()).collect()).collect();
        let ker = linalg::kernel(&cols, &BigRational::zero());
        if ker.len() != 1 {
            return Err(Error::Model(format!("kernel of the class map has dimension {}", ker.len())));
        }
        let kappa = primitive(&ker[0]);
        let pivot = kappa.iter().position(|x| !x.is_zero()).unwrap();
        let keep: Vec<usize> = (0..=n).filter(|&k| k != pivot).collect();
        let mut lift = Vec::with_capacity(n);
        for i in 0..n {
            let a: Vec<Vec<BigRational>> = (0..n).map(|r| keep.iter().map(|&k| phi[k][r].clone()).collect()).collect();
            let b: Vec<BigRational> = (0..n).map(|r| if r == i { BigRational::one() } else { BigRational::zero() }).collect();
            let sol = linalg::solve(a, b, &BigRational::zero()).ok_or_else(|| Error::Internal("lift failed".into()))?;
            let mut u = vec![BigRational::zero(); n + 1];
            for (t, &k) in keep.iter().enumerate() {
                u[k] = sol[t].clone();
            }
            lift.push(u);
        }
        let walls = fm.wall_slots().into_iter().map(|s| s - 1).collect();
        Ok(SimpleRing { phi, kappa, lift, aug: fm.aug.clone(), principal, walls, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn to_simple(&self, u: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.n];
        for (k, uk) in u.iter().enumerate() {
            if uk.is_zero() {
                continue;
            }
            for i in 0..self.n {
                if !self.phi[k][i].is_zero() {
                    out[i] += uk * &self.phi[k][i];
                }
            }
        }
        out
    }

    fn lift_class(&self, x: &[BigRational]) -> Vec<BigRational> {
        let mut u = vec![BigRational::zero(); self.n + 1];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for k in 0..=self.n {
                u[k] += xi * &self.lift[i][k];
            }
        }
        u
    }

    fn mul_aug_slot(&self, s: usize, v: &[BigRational]) -> Vec<BigRational> {
        let m = &self.aug[s];
        (0..v.len())
            .map(|i| {
                let mut acc = BigRational::zero();
                for (j, vj) in v.iter().enumerate() {
                    if m[i][j] != 0 && !vj.is_zero() {
                        acc += vj * BigRational::from_integer(m[i][j].into());
                    }
                }
                acc
            })
            .collect()
    }

    fn mul_aug(&self, u: &[BigRational], v: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); v.len()];
        for (c, uc) in u.iter().enumerate() {
            if uc.is_zero() {
                continue;
            }
            for (k, x) in self.mul_aug_slot(c, v).into_iter().enumerate() {
                out[k] += uc * x;
            }
        }
        out
    }

    pub fn unit(&self) -> Vec<i64> {
        let mut v = vec![0; self.n];
        v[self.principal[0]] = 1;
        v
    }

    pub fn basis(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.n];
        v[i] = 1;
        v
    }

    /// Class of x (x) y in the simple basis.
    pub fn product(&self, x: &[i64], y: &[i64]) -> Result<Vec<i64>, Error> {
        let xr: Vec<BigRational> = x.iter().map(|&v| BigRational::from_integer(v.into())).collect();
        let yr: Vec<BigRational> = y.iter().map(|&v| BigRational::from_integer(v.into())).collect();
        let p = self.to_simple(&self.mul_aug(&self.lift_class(&xr), &self.lift_class(&yr)));
        to_ints(&p)
    }

    pub fn simple_product(&self, i: usize, j: usize) -> Result<Vec<i64>, Error> {
        self.product(&self.basis(i), &self.basis(j))
    }

    /// Class (in the simple basis) of the projective T at slot s.
    pub fn projective_class(&self, s: usize) -> Vec<i64> {
        to_ints(&self.phi[s]).unwrap()
    }

    /// Decomposition of T(slot s) (x) L_i into indecomposable projectives (slot multiplicities).
    pub fn projective_times_simple(&self, s: usize, i: usize) -> Result<Vec<i64>, Error> {
        let v = self.mul_aug_slot(s, &self.lift[i]);
        nonneg_representative(&v, &self.kappa)
    }

    pub fn fpdims(&self, cert: &FpCert) -> Vec<CycloReal> {
        let ctx = cert.lam1.ctx().clone();
        let dims = cert.augmented();
        self.lift
            .iter()
            .map(|u| {
                let mut acc = CycloReal::zero(&ctx);
                for (k, uk) in u.iter().enumerate() {
                    if !uk.is_zero() {
                        acc = &acc + &dims[k].scale(uk);
                    }
                }
                acc
            })
            .collect()
    }
}

fn to_ints(v: &[BigRational]) -> Result<Vec<i64>, Error> {
    v.iter()
        .map(|x| {
            if x.is_integer() {
                x.to_integer().to_i64().ok_or_else(|| Error::Internal("overflow".into()))
            } else {
                Err(Error::Model(format!("non-integral class coefficient {x}")))
            }
        })
        .collect()
}

fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for x in v {
        den = num_integer::Integer::lcm(&den, x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = num_integer::Integer::gcd(&g, x);
    }
    let first = ints.iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(BigInt::one);
    let g = if first.is_negative() { -g } else { g };
    ints.into_iter().map(|x| x / &g).collect()
}

/// The unique v + t kappa with nonnegative integer entries.
fn nonneg_representative(v: &[BigRational], kappa: &[BigInt]) -> Result<Vec<i64>, Error> {
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    for (x, k) in v.iter().zip(kappa) {
        if k.is_zero() {
            if x.is_negative() {
                return Err(Error::Model("no nonnegative projective decomposition".into()));
            }
            continue;
        }
        let t = -x / BigRational::from_integer(k.clone());
        if k.is_positive() {
            lo = Some(lo.map_or(t.clone(), |l: BigRational| l.max(t.clone())));
        } else {
            hi = Some(hi.map_or(t.clone(), |h: BigRational| h.min(t.clone())));
        }
    }
    let (lo, hi) = match (lo, hi) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Model("unbounded projective decomposition".into())),
    };
    let mut sols = Vec::new();
    // t must make every coordinate integral; kappa is primitive so t steps by 1 / gcd-free units
    let k0 = kappa.iter().position(|k| !k.is_zero()).unwrap();
    let kk = BigRational::from_integer(kappa[k0].clone());
    let start = ((&lo * &kk) + &v[k0]).ceil().to_integer();
    let end = ((&hi * &kk) + &v[k0]).floor().to_integer();
    let (a, b) = if start <= end { (start, end) } else { (end, start) };
    let mut m = a;
    while m <= b {
        let t = (BigRational::from_integer(m.clone()) - &v[k0]) / &kk;
        if t >= lo && t <= hi {
            let cand: Vec<BigRational> =
                v.iter().zip(kappa).map(|(x, k)| x + &t * BigRational::from_integer(k.clone())).collect();
            if cand.iter().all(|x| x.is_integer() && !x.is_negative()) {
                sols.push(to_ints(&cand)?);
            }
        }
        m += 1;
    }
    match sols.len() {
        1 => Ok(sols.pop().unwrap()),
        0 => Err(Error::Model("no nonnegative projective decomposition".into())),
        k => Err(Error::Model(format!("{k} nonnegative projective decompositions"))),
    }
}

/// Witness that a principal-block class is simple-plus-projective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChevalleyWitness {
    pub projective: Vec<i64>,
    pub residual: Vec<i64>,
}

/// All ways of writing x = r + C p with p, r >= 0 and supp(r) independent in the graph.
pub fn chevalley_witnesses(x: &[i64], c: &IntMatrix) -> Vec<ChevalleyWitness> {
    let n = x.len();
    let mut out = Vec::new();
    let mut p = vec![0i64; n];
    fn rec(k: usize, x: &[i64], c: &IntMatrix, p: &mut Vec<i64>, out: &mut Vec<ChevalleyWitness>) {
        let n = x.len();
        if k == n {
            let r: Vec<i64> = (0..n).map(|i| x[i] - (0..n).map(|j| c[i][j] * p[j]).sum::<i64>()).collect();
            if r.iter().any(|&v| v < 0) {
                return;
            }
            let supp: Vec<usize> = (0..n).filter(|&i| r[i] > 0).collect();
            let indep = supp.iter().all(|&a| supp.iter().all(|&b| a == b || c[a][b] == 0));
            if indep {
                out.push(ChevalleyWitness { projective: p.clone(), residual: r });
            }
            return;
        }
        let bound = x[k] / c[k][k].max(1);
        for v in 0..=bound {
            p[k] = v;
            // prune: partial sums already exceeding x
            let ok = (0..n).all(|i| (0..=k).map(|j| c[i][j] * p[j]).sum::<i64>() <= x[i]);
            if !ok {
                break;
            }
            rec(k + 1, x, c, p, out);
        }
        p[k] = 0;
    }
    rec(0, x, c, &mut p, &mut out);
    out.sort_by(|a, b| {
        let sa: i64 = a.projective.iter().sum();
        let sb: i64 = b.projective.iter().sum();
        sb.cmp(&sa).then(a.projective.cmp(&b.projective))
    });
    out
}

/// Distinct dot-orbits met by the given weights.
pub fn orbit_classes(aw: &AffineWeyl, ws: &[Weight]) -> BTreeMap<Weight, Vec<Weight>> {
    let mut m: BTreeMap<Weight, Vec<Weight>> = BTreeMap::new();
    for w in ws {
        m.entry(aw.orbit_canonical(w).0).or_default().push(w.clone());
    }
    m
}

pub fn set_of(v: &[usize]) -> BTreeSet<usize> {
    v.iter().copied().collect()
}

/// Simple-object data of the quotient at a level with a single regular block.
pub struct SimpleAnalysis {
    pub fm: FusionModel,
    pub cert: FpCert,
    pub ring: SimpleRing,
}

#[derive(Clone, Debug)]
pub struct MuegerReport {
    pub integral: Vec<usize>,
    pub unit: usize,
    pub sgn: Option<usize>,
    pub v: Option<usize>,
    pub s3_fusion: bool,
    pub twist_condition: bool,
    pub orbit_condition: bool,
}

impl MuegerReport {
    pub fn holds(&self) -> bool {
        self.integral.len() == 3 && self.sgn.is_some() && self.v.is_some() && self.s3_fusion && self.twist_condition && self.orbit_condition
    }
}

#[derive(Clone, Debug)]
pub struct ChevalleyEntry {
    pub i: usize,
    pub j: usize,
    /// Principal-block part of [L_i (x) L_j] in cell vertex order.
    pub principal: Vec<i64>,
    pub witness: Option<ChevalleyWitness>,
}

impl SimpleAnalysis {
    pub fn new(l: i64) -> Result<SimpleAnalysis, Error> {
        let fm = FusionModel::build_full(l)?;
        let cert = fm.fpdim_generators(None)?;
        fm.check_block_cartan(&cert)?;
        let ring = SimpleRing::new(&fm)?;
        if ring.fpdims(&cert) != cert.simple {
            return Err(Error::Model("lifted simple classes disagree with the Perron vector".into()));
        }
        Ok(SimpleAnalysis { fm, cert, ring })
    }

    pub fn n(&self) -> usize {
        self.ring.len()
    }

    /// Simple index of principal vertex j.
    pub fn principal(&self, j: usize) -> usize {
        self.ring.principal[j]
    }

    pub fn label(&self, i: usize) -> String {
        match self.ring.principal.iter().position(|&p| p == i) {
            Some(j) => format!("L{j}"),
            None => format!("L{}", self.fm.weights[i]),
        }
    }

    pub fn twist(&self, i: usize) -> Result<i64, Error> {
        self.fm.twist_exponent(&self.fm.weights[i])
    }

    pub fn integral_simples(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.cert.simple[i].as_integer().is_some()).collect()
    }

    pub fn mueger(&self) -> Result<MuegerReport, Error> {
        let integral = self.integral_simples();
        let unit = self.principal(0);
        let dim_is = |i: usize, d: i64| self.cert.simple[i].as_integer() == Some(BigInt::from(d));
        let sgn = integral.iter().copied().find(|&i| i != unit && dim_is(i, 1));
        let v = integral.iter().copied().find(|&i| dim_is(i, 2));
        let (mut s3, mut twist_ok, mut orbit_ok) = (false, true, true);
        if let (Some(sg), Some(vv)) = (sgn, v) {
            let e = |xs: &[usize]| {
                let mut x = vec![0i64; self.n()];
                for &i in xs {
                    x[i] += 1;
                }
                x
            };
            s3 = self.ring.simple_product(sg, sg)? == e(&[unit])
                && self.ring.simple_product(sg, vv)? == e(&[vv])
                && self.ring.simple_product(vv, vv)? == e(&[unit, sg, vv]);
            for &c in &[sg, vv] {
                for x in 0..self.n() {
                    let tx = self.twist(x)?;
                    let prod = self.ring.simple_product(x, c)?;
                    for (y, &m) in prod.iter().enumerate() {
                        if m != 0 && self.twist(y)? != tx {
                            twist_ok = false;
                        }
                    }
                }
                for s in 1..=self.fm.n() {
                    let orb = self.fm.aw.orbit_canonical(&self.fm.weights[s - 1]).0;
                    let prod = self.ring.projective_times_simple(s, c)?;
                    for (t, &m) in prod.iter().enumerate() {
                        if m != 0 && (t == 0 || self.fm.aw.orbit_canonical(&self.fm.weights[t - 1]).0 != orb) {
                            orbit_ok = false;
                        }
                    }
                }
            }
        }
        Ok(MuegerReport { integral, unit, sgn, v, s3_fusion: s3, twist_condition: twist_ok, orbit_condition: orbit_ok })
    }

    /// First (smallest) survivor weight of every singular dot-orbit, with its twist exponent.
    pub fn wall_orbit_representatives(&self) -> Result<Vec<(Weight, i64)>, Error> {
        let walls: Vec<Weight> = self.fm.wall_slots().iter().map(|&s| self.fm.weights[s - 1].clone()).collect();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for w in walls {
            if seen.insert(self.fm.aw.orbit_canonical(&w).0) {
                let t = self.fm.twist_exponent(&w)?;
                out.push((w, t));
            }
        }
        Ok(out)
    }

    pub fn chevalley(&self) -> Result<Vec<ChevalleyEntry>, Error> {
        let c = self.fm.cartan_matrix();
        let mut out = Vec::new();
        for i in 0..self.n() {
            for j in i..self.n() {
                let x = self.ring.simple_product(i, j)?;
                let principal: Vec<i64> = self.ring.principal.iter().map(|&p| x[p]).collect();
                let witness = chevalley_witnesses(&principal, &c).into_iter().next();
                out.push(ChevalleyEntry { i, j, principal, witness });
            }
        }
        Ok(out)
    }
}

/// Closed-form category dimension: 6 l^4 / (s1^4 s2) when 3 does not divide l,
/// (2/9) l^4 / (s1^2 s2 s3^2) otherwise, with s_k = (2 sin(k pi / l))^2.
pub fn category_formula(ctx: &Arc<FieldContext>) -> Result<CycloReal, Error> {
    if ctx.l % 3 != 0 {
        return undivisible_closed_form(ctx);
    }
    let l4 = CycloReal::from_int(ctx, (ctx.l as i64).pow(4));
    let (s1, s2, s3) = (sin2(1, ctx)?, sin2(2, ctx)?, sin2(3, ctx)?);
    let den = &(&(&s1 * &s1) * &s2) * &(&s3 * &s3);
    l4.scale(&BigRational::new(2.into(), 9.into()))
        .div(&den)
        .ok_or_else(|| Error::Domain("vanishing sine factor".into()))
}

pub fn undivisible_closed_form(ctx: &Arc<FieldContext>) -> Result<CycloReal, Error> {
    let l4 = CycloReal::from_int(ctx, (ctx.l as i64).pow(4));
    let (s1, s2) = (sin2(1, ctx)?, sin2(2, ctx)?);
    let den = &(&(&s1 * &s1) * &(&s1 * &s1)) * &s2;
    l4.scale_int(6).div(&den).ok_or_else(|| Error::Domain("vanishing sine factor".into()))
}

/// 6 S_2(l) S_1(l)^3.
pub fn s_product_formula(ctx: &Arc<FieldContext>) -> Result<CycloReal, Error> {
    let s1 = s_formula(1, ctx)?;
    Ok((&(&s_formula(2, ctx)? * &s1) * &(&s1 * &s1)).scale_int(6))
}

/// Conjectured FPdim(T(omega_1)), FPdim(T(omega_2)).
pub fn generator_formulas(ctx: &Arc<FieldContext>) -> (CycloReal, CycloReal) {
    let q = |k| qint_any(k, ctx);
    let one = CycloReal::one(ctx);
    if ctx.l % 3 != 0 {
        (&q(3).scale_int(2) + &one, &q(5) + &q(3).scale_int(3))
    } else {
        (
            &(&q(3) + &q(5)) - &one,
            &(&(&q(7).scale_int(2) - &q(5)) + &q(3)) + &CycloReal::from_int(ctx, 2),
        )
    }
}

#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub l: i64,
    pub n_weights: usize,
    pub regular_blocks: usize,
    pub category: CycloReal,
    pub category_formula: CycloReal,
    pub generators: [CycloReal; 2],
    pub generator_formulas: [CycloReal; 2],
    pub s_product: CycloReal,
}

impl ConjectureReport {
    pub fn category_holds(&self) -> bool {
        self.category == self.category_formula
    }

    /// computed - conjectured, when it is a rational integer.
    pub fn generator_difference(&self, k: usize) -> Option<BigInt> {
        (&self.generators[k] - &self.generator_formulas[k]).as_integer()
    }

    pub fn s_identity_holds(&self) -> bool {
        undivisible_closed_form(self.category.ctx()).is_ok_and(|c| c == self.s_product)
    }
}

pub fn check_conjecture(l: i64) -> Result<ConjectureReport, Error> {
    let fm = FusionModel::build(l)?;
    let cert = fm.fpdim_generators(None)?;
    fm.check_block_cartan(&cert)?;
    let category = fm.fpdim_category(&cert);
    let (g1, g2) = generator_formulas(&fm.ctx);
    Ok(ConjectureReport {
        l,
        n_weights: fm.n(),
        regular_blocks: fm.regular_blocks()?.len(),
        category,
        category_formula: category_formula(&fm.ctx)?,
        generators: [cert.lam1, cert.lam2],
        generator_formulas: [g1, g2],
        s_product: s_product_formula(&fm.ctx)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::qint;
    use crate::rootdata::w;
    use std::sync::OnceLock;

    fn model() -> &'static std::sync::Mutex<FusionModel> {
        static M: OnceLock<std::sync::Mutex<FusionModel>> = OnceLock::new();
        M.get_or_init(|| std::sync::Mutex::new(FusionModel::build_full(7).unwrap()))
    }

    #[test]
    fn poly2_display_and_eval() {
        let mut p = Poly2::monomial(2, 1);
        p.add_scaled(&Poly2::monomial(0, 0), -3);
        assert_eq!(p.to_string(), "X^2Y - 3");
        let x = vec![vec![1, 1], vec![0, 1]];
        let y = vec![vec![2, 0], vec![0, 2]];
        assert_eq!(p.eval_matrix(&x, &y).unwrap(), vec![vec![-1, 4], vec![0, -1]]);
    }

    #[test]
    fn g2_l7_products_and_matrices() {
        let mut fm = model().lock().unwrap();
        assert_eq!(fm.n(), 23);
        let z = w(&[0, 0]);
        assert_eq!(fm.tilting_product_in_c(&z, &w(&[1, 0])).unwrap(), vec![(w(&[1, 0]), 1)]);
        let sq = fm.tilting_product_in_c(&w(&[1, 0]), &w(&[1, 0])).unwrap();
        assert!(sq.contains(&(w(&[2, 0]), 1)));
        assert!(!sq.iter().any(|(l, _)| l.is_zero()));
        assert!(fm.commutation_failures().is_empty());
        let fs = fm.f_polys().unwrap();
        assert_eq!(fs[1], Poly2::monomial(1, 0));
        assert_eq!(fs[2], Poly2::monomial(0, 1));
        for s in 1..=fm.n() {
            let m = fs[s].eval_matrix(&fm.aug[1], &fm.aug[2]).unwrap();
            assert_eq!(m, fm.aug[s], "slot {s}");
        }
    }

    #[test]
    fn g2_l7_fpdims() {
        let fm = model().lock().unwrap();
        let ctx = fm.ctx.clone();
        let one = CycloReal::one(&ctx);
        let q2 = qint(2, &ctx).unwrap();
        let q3 = qint(3, &ctx).unwrap();
        let q5 = qint(5, &ctx).unwrap();
        let l1 = &one + &q3.scale_int(2);
        let l2 = &q2 + &q3.scale_int(3);
        let cert = fm.fpdim_generators(None).unwrap();
        assert_eq!(cert.lam1, l1);
        assert_eq!(cert.lam2, l2);
        assert!((cert.numeric.0 - 5.49396).abs() < 1e-4);
        assert!((cert.numeric.1 - 8.54288).abs() < 1e-4);
        let total = fm.fpdim_category(&cert);
        fm.check_block_cartan(&cert).unwrap();
        let fs = fm.f_polys().unwrap();
        let aug = cert.augmented();
        for (s, f) in fs.iter().enumerate() {
            assert_eq!(f.eval_field(&l1, &l2), aug[s]);
        }
        let ring = SimpleRing::new(&fm).unwrap();
        assert_eq!(ring.fpdims(&cert), cert.simple);
        let expect = (&(&CycloReal::from_int(&ctx, 7) + &q3.scale_int(15)) + &q5.scale_int(12)).scale_int(294);
        assert_eq!(total, expect);
        assert!((total.approx() - 18324.416384).abs() < 1e-5);
        // a wrong candidate is rejected
        assert!(fm.fpdim_generators(Some((&l1 + &one, l2.clone()))).is_err());
    }

    #[test]
    fn g2_l7_cartan() {
        let mut fm = model().lock().unwrap();
        let c = fm.cartan_matrix();
        assert_eq!(linalg::int_det(&c), BigRational::zero());
        assert_eq!(c[3], vec![0, 0, 1, 2, 1, 1, 0, 0]);
        assert_eq!(c[4], vec![0, 0, 0, 1, 2, 0, 0, 0]);
        let dets = proper_subgraph_determinants(8, &fm.cell.edge_pairs());
        assert_eq!(dets.len(), 127 + 8);
        assert!(dets.iter().all(|(_, d)| !d.is_zero()));
        let hp = fm.hom_pairing_table().unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert!(hp[i][j] >= c[i][j]);
                assert_eq!(hp[i][j], hp[j][i]);
            }
        }
    }

    #[test]
    fn g2_l7_simple_fusion() {
        let fm = model().lock().unwrap();
        let ring = SimpleRing::new(&fm).unwrap();
        let l = |j: usize| ring.principal[j];
        let cls = |v: &[(usize, i64)]| {
            let mut x = vec![0i64; ring.len()];
            for &(j, k) in v {
                x[l(j)] += k;
            }
            x
        };
        assert_eq!(ring.simple_product(l(7), l(7)).unwrap(), cls(&[(0, 1)]));
        assert_eq!(ring.simple_product(l(4), l(4)).unwrap(), cls(&[(0, 1), (4, 1), (7, 1)]));
        assert_eq!(ring.simple_product(l(1), l(7)).unwrap(), cls(&[(6, 1)]));
        assert_eq!(ring.simple_product(l(2), l(4)).unwrap(), cls(&[(2, 1), (5, 1)]));
        let ps = &fm.principal_slots().unwrap();
        let pv = |v: &[usize]| {
            let mut x = vec![0i64; fm.n() + 1];
            for &j in v {
                x[ps[j]] += 1;
            }
            x
        };
        assert_eq!(ring.projective_times_simple(ps[0], l(4)).unwrap(), pv(&[4]));
        assert_eq!(ring.projective_times_simple(ps[3], l(4)).unwrap(), pv(&[1, 3, 6]));
        assert_eq!(ring.projective_times_simple(ps[0], l(7)).unwrap(), pv(&[7]));
    }

    #[test]
    fn g2_l7_mueger_orbits_chevalley() {
        let an = SimpleAnalysis::new(7).unwrap();
        let l = |j: usize| an.principal(j);
        let m = an.mueger().unwrap();
        assert!(m.holds());
        assert_eq!(set_of(&m.integral), set_of(&[l(0), l(4), l(7)]));
        assert_eq!((m.sgn, m.v), (Some(l(7)), Some(l(4))));
        let ctx = an.fm.ctx.clone();
        let alpha = &qint(3, &ctx).unwrap() + &qint(5, &ctx).unwrap();
        assert_eq!(an.cert.simple[l(2)], alpha.scale_int(3));
        let reps = an.wall_orbit_representatives().unwrap();
        let ws: Vec<Weight> = reps.iter().map(|r| r.0.clone()).collect();
        assert_eq!(ws, vec![w(&[1, 0]), w(&[0, 1]), w(&[3, 0]), w(&[0, 2]), w(&[2, 1]), w(&[4, 0])]);
        assert_eq!(reps[0].1, 12);
        assert!(reps.iter().all(|r| r.1 % 7 != 0));
        let ch = an.chevalley().unwrap();
        assert!(ch.iter().all(|e| e.witness.is_some()));
        let find = |a: usize, b: usize| ch.iter().find(|e| (e.i, e.j) == (a.min(b), a.max(b))).unwrap().clone();
        let e11 = find(l(1), l(1));
        let wt = e11.witness.unwrap();
        assert_eq!(wt.projective, vec![0, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(wt.residual, vec![1, 0, 1, 0, 0, 0, 0, 0]);
        assert_eq!(find(l(1), l(2)).principal, vec![0, 1, 0, 1, 0, 0, 0, 0]);
        assert_eq!(find(l(2), l(2)).principal, vec![1, 0, 1, 0, 1, 1, 0, 0]);
    }

    #[test]
    fn witness_search() {
        let c = vec![vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]];
        let ws = chevalley_witnesses(&[2, 2, 2], &c);
        assert_eq!(ws[0].projective, vec![1, 0, 1]);
        assert_eq!(ws[0].residual, vec![0, 0, 0]);
        assert!(ws.iter().any(|w| w.projective == vec![0, 1, 0] && w.residual == vec![1, 0, 1]));
        assert!(chevalley_witnesses(&[1, 1, 0], &c).is_empty());
    }

    #[test]
    fn recognition_of_small_elements() {
        let ctx = FieldContext::new(7).unwrap();
        let x = &CycloReal::from_int(&ctx, 1) + &qint(3, &ctx).unwrap().scale_int(2);
        let conj = x.conjugates_f64();
        let mut spec = conj[1..].to_vec();
        spec.push(0.25);
        let found = recognize_in_field(conj[0], &spec, &ctx);
        assert!(found.contains(&x));
    }
}
