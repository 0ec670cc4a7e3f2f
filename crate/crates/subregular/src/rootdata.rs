//! Root and weight data of simple Lie algebras, with character calculus in the
//! basis of irreducible (Weyl) characters.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LieType {
    pub series: Series,
    pub rank: usize,
}

impl LieType {
    pub fn new(series: Series, rank: usize) -> Result<Self, Error> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B => rank >= 2,
            Series::C => rank >= 2,
            Series::D => rank >= 4,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if !ok {
            return Err(Error::Domain(format!("no simple Lie algebra {series:?}{rank}")));
        }
        Ok(LieType { series, rank })
    }

    pub fn g2() -> Self {
        LieType { series: Series::G, rank: 2 }
    }

    /// Parse labels like "G2", "b3", "E6".
    pub fn parse(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(|| Error::Domain("empty type".into()))?;
        let series = match head.to_ascii_uppercase() {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return Err(Error::Domain(format!("unknown series in {s:?}"))),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| Error::Domain(format!("bad rank in {s:?}")))?;
        LieType::new(series, rank)
    }

    /// Ratio of squared lengths of long and short roots.
    pub fn m(&self) -> i64 {
        match self.series {
            Series::A | Series::D | Series::E => 1,
            Series::B | Series::C | Series::F => 2,
            Series::G => 3,
        }
    }

    pub fn divisible(&self, l: i64) -> bool {
        l % self.m() == 0
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.series, self.rank)
    }
}

/// Integral weight in fundamental-weight coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Weight(v)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn w(c: &[i64]) -> Weight {
    Weight(c.to_vec())
}

/// Finitely supported integer combination of irreducible characters.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WeylCharacter {
    pub chi: BTreeMap<Weight, i64>,
}

impl WeylCharacter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(lam: Weight) -> Self {
        let mut c = Self::new();
        c.add_term(lam, 1);
        c
    }

    pub fn from_terms(terms: &[(Weight, i64)]) -> Self {
        let mut c = Self::new();
        for (lam, k) in terms {
            c.add_term(lam.clone(), *k);
        }
        c
    }

    pub fn add_term(&mut self, lam: Weight, k: i64) {
        if k == 0 {
            return;
        }
        match self.chi.entry(lam) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += k;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(k);
            }
        }
    }

    pub fn add_scaled(&mut self, o: &WeylCharacter, k: i64) {
        for (lam, c) in &o.chi {
            self.add_term(lam.clone(), c * k);
        }
    }

    pub fn coeff(&self, lam: &Weight) -> i64 {
        self.chi.get(lam).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.chi.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.chi.values().all(|&c| c >= 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, &i64)> {
        self.chi.iter()
    }

    pub fn len(&self) -> usize {
        self.chi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chi.is_empty()
    }

    /// Stable JSON form: list of [coords, coeff] pairs ordered by coordinates.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.chi.iter().map(|(lam, c)| serde_json::json!({"weight": lam.0, "coeff": c})).collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, Error> {
        let arr = v.as_array().ok_or_else(|| Error::Domain("character JSON must be a list".into()))?;
        let mut out = WeylCharacter::new();
        for rec in arr {
            let wt: Vec<i64> = serde_json::from_value(rec["weight"].clone())
                .map_err(|e| Error::Domain(format!("bad weight: {e}")))?;
            let c = rec["coeff"].as_i64().ok_or_else(|| Error::Domain("bad coeff".into()))?;
            out.add_term(Weight(wt), c);
        }
        Ok(out)
    }
}

impl fmt::Debug for WeylCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .chi
            .iter()
            .map(|(lam, c)| if *c == 1 { format!("chi{lam}") } else { format!("{c}*chi{lam}") })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

type Multiplicities = Arc<Vec<(Weight, i64)>>;

/// Root datum of a simple Lie algebra with form normalised so short roots have length 2.
pub struct RootSystem {
    pub ty: LieType,
    pub rank: usize,
    /// A[i][j] = <alpha_i, alpha_j^vee>; row i is alpha_i in fundamental coordinates.
    pub cartan: Vec<Vec<i64>>,
    /// (alpha_i, alpha_i) / 2.
    pub d: Vec<i64>,
    /// (omega_i, omega_j) = gram_num[i][j] / gram_den.
    pub gram_num: Vec<Vec<i64>>,
    pub gram_den: i64,
    /// Positive roots in simple-root coordinates, sorted by height.
    pub positive_roots: Vec<Vec<i64>>,
    mult_cache: Mutex<HashMap<Weight, Multiplicities>>,
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootSystem({})", self.ty)
    }
}

fn symmetric_form(ty: LieType) -> Vec<Vec<i64>> {
    let n = ty.rank;
    let mut b = vec![vec![0i64; n]; n];
    let link = |b: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        b[i][j] = v;
        b[j][i] = v;
    };
    match ty.series {
        Series::A => {
            for i in 0..n {
                b[i][i] = 2;
            }
            for i in 0..n - 1 {
                link(&mut b, i, i + 1, -1);
            }
        }
        Series::B => {
            for i in 0..n - 1 {
                b[i][i] = 4;
            }
            b[n - 1][n - 1] = 2;
            for i in 0..n - 1 {
                link(&mut b, i, i + 1, -2);
            }
        }
        Series::C => {
            for i in 0..n - 1 {
                b[i][i] = 2;
            }
            b[n - 1][n - 1] = 4;
            for i in 0..n - 2 {
                link(&mut b, i, i + 1, -1);
            }
            link(&mut b, n - 2, n - 1, -2);
        }
        Series::D => {
            for i in 0..n {
                b[i][i] = 2;
            }
            for i in 0..n - 2 {
                link(&mut b, i, i + 1, -1);
            }
            link(&mut b, n - 3, n - 1, -1);
        }
        Series::E => {
            for i in 0..n {
                b[i][i] = 2;
            }
            link(&mut b, 0, 2, -1);
            link(&mut b, 1, 3, -1);
            for i in 2..n - 1 {
                link(&mut b, i, i + 1, -1);
            }
        }
        Series::F => {
            b[0][0] = 4;
            b[1][1] = 4;
            b[2][2] = 2;
            b[3][3] = 2;
            link(&mut b, 0, 1, -2);
            link(&mut b, 1, 2, -2);
            link(&mut b, 2, 3, -1);
        }
        Series::G => {
            b[0][0] = 2;
            b[1][1] = 6;
            link(&mut b, 0, 1, -3);
        }
    }
    b
}

fn rat_inverse(a: &[Vec<i64>]) -> Vec<Vec<Rational64>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational64> = row.iter().map(|&x| Rational64::from_integer(x)).collect();
            r.extend((0..n).map(|j| Rational64::from_integer((i == j) as i64)));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| m[r][c] != Rational64::from_integer(0)).expect("singular Cartan matrix");
        m.swap(p, c);
        let inv = Rational64::from_integer(1) / m[c][c];
        for k in 0..2 * n {
            m[c][k] *= inv;
        }
        for r in 0..n {
            if r != c {
                let f = m[r][c];
                if f != Rational64::from_integer(0) {
                    for k in 0..2 * n {
                        let t = f * m[c][k];
                        m[r][k] -= t;
                    }
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

impl RootSystem {
    pub fn new(ty: LieType) -> Arc<RootSystem> {
        let n = ty.rank;
        let b = symmetric_form(ty);
        let cartan: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| 2 * b[i][j] / b[j][j]).collect()).collect();
        let d: Vec<i64> = (0..n).map(|i| b[i][i] / 2).collect();
        let inv = rat_inverse(&cartan);
        let gram: Vec<Vec<Rational64>> = (0..n)
            .map(|i| (0..n).map(|j| inv[j][i] * Rational64::from_integer(d[i])).collect())
            .collect();
        let gram_den = gram.iter().flatten().fold(1i64, |acc, x| acc.lcm(x.denom()));
        let gram_num = gram
            .iter()
            .map(|r| r.iter().map(|x| (x * Rational64::from_integer(gram_den)).to_integer()).collect())
            .collect();
        let positive_roots = Self::generate_positive_roots(&cartan);
        Arc::new(RootSystem {
            ty,
            rank: n,
            cartan,
            d,
            gram_num,
            gram_den,
            positive_roots,
            mult_cache: Mutex::new(HashMap::new()),
        })
    }

    fn generate_positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = cartan.len();
        let mut roots: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        let mut set: HashSet<Vec<i64>> = roots.iter().cloned().collect();
        let mut idx = 0;
        while idx < roots.len() {
            let beta = roots[idx].clone();
            for i in 0..n {
                // <beta, alpha_i^vee>
                let pair: i64 = (0..n).map(|j| beta[j] * cartan[j][i]).sum();
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if set.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let q = p - pair;
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if set.insert(up.clone()) {
                        roots.push(up);
                    }
                }
            }
            idx += 1;
        }
        roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
        roots
    }

    pub fn zero(&self) -> Weight {
        Weight::zero(self.rank)
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    pub fn omega(&self, i: usize) -> Weight {
        Weight::fundamental(self.rank, i)
    }

    /// Root given in simple-root coordinates, converted to fundamental coordinates.
    pub fn root_to_weight(&self, r: &[i64]) -> Weight {
        Weight((0..self.rank).map(|j| (0..self.rank).map(|i| r[i] * self.cartan[i][j]).sum()).collect())
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        Weight(self.cartan[i].clone())
    }

    /// Scaled form: (x, y) * gram_den.
    pub fn inner_scaled(&self, x: &Weight, y: &Weight) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            if x.0[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += x.0[i] * self.gram_num[i][j] * y.0[j];
            }
        }
        s
    }

    pub fn inner(&self, x: &Weight, y: &Weight) -> Rational64 {
        Rational64::new(self.inner_scaled(x, y), self.gram_den)
    }

    pub fn root_length2(&self, r: &[i64]) -> i64 {
        let wt = self.root_to_weight(r);
        self.inner(&wt, &wt).to_integer()
    }

    /// Highest root (beta_0), fundamental coordinates.
    pub fn highest_root(&self) -> Weight {
        self.root_to_weight(self.positive_roots.last().unwrap())
    }

    /// Highest short root (beta_1); equals the highest root in simply laced types.
    pub fn highest_short_root(&self) -> Weight {
        let short = self
            .positive_roots
            .iter()
            .filter(|r| self.root_length2(r) == 2)
            .last()
            .unwrap();
        self.root_to_weight(short)
    }

    /// Coroot coordinates of a root: <omega_i, beta^vee> for each i.
    pub fn coroot_coeffs(&self, beta: &Weight) -> Vec<i64> {
        let len2 = self.inner(beta, beta);
        (0..self.rank)
            .map(|i| {
                let v = self.inner(&self.omega(i), beta) * Rational64::from_integer(2) / len2;
                assert!(v.is_integer());
                v.to_integer()
            })
            .collect()
    }

    pub fn reflect(&self, x: &Weight, i: usize) -> Weight {
        let k = x.0[i];
        Weight((0..self.rank).map(|j| x.0[j] - k * self.cartan[i][j]).collect())
    }

    /// Dominant conjugate and the number of reflections used.
    pub fn to_dominant(&self, x: &Weight) -> (Weight, usize) {
        let mut y = x.clone();
        let mut count = 0;
        while let Some(i) = (0..self.rank).find(|&i| y.0[i] < 0) {
            y = self.reflect(&y, i);
            count += 1;
        }
        (y, count)
    }

    /// (lambda, lambda + 2 rho).
    pub fn dot_inner(&self, lam: &Weight) -> Rational64 {
        let t = lam.add(&self.rho().scale(2));
        self.inner(lam, &t)
    }

    /// Scaled height <lambda, 2 rho> * gram_den; orders weights compatibly with dominance.
    pub fn height_scaled(&self, lam: &Weight) -> i64 {
        2 * self.inner_scaled(lam, &self.rho())
    }

    pub fn order_key(&self, lam: &Weight) -> (i64, Vec<i64>) {
        (self.height_scaled(lam), lam.0.clone())
    }

    pub fn sort_weights(&self, v: &mut [Weight]) {
        v.sort_by_key(|lam| self.order_key(lam));
    }

    pub fn weyl_dim(&self, lam: &Weight) -> i64 {
        let lr = lam.add(&self.rho());
        let mut num = Rational64::from_integer(1);
        for r in &self.positive_roots {
            let a = self.root_to_weight(r);
            num *= self.inner(&lr, &a) / self.inner(&self.rho(), &a);
        }
        assert!(num.is_integer());
        num.to_integer()
    }

    /// Dominant weights of V(lambda): those dominant mu with lambda - mu in the positive root cone.
    pub fn dominant_weights_below(&self, lam: &Weight) -> Vec<Weight> {
        let roots: Vec<Weight> = self.positive_roots.iter().map(|r| self.root_to_weight(r)).collect();
        let mut seen: HashSet<Weight> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(lam.clone());
        queue.push_back(lam.clone());
        while let Some(mu) = queue.pop_front() {
            for a in &roots {
                let nu = mu.sub(a);
                if nu.is_dominant() && !seen.contains(&nu) {
                    seen.insert(nu.clone());
                    queue.push_back(nu);
                }
            }
        }
        let mut out: Vec<Weight> = seen.into_iter().collect();
        self.sort_weights(&mut out);
        out.reverse();
        out
    }

    /// Multiplicities of dominant weights in V(lambda), by Freudenthal's formula.
    pub fn dominant_multiplicities(&self, lam: &Weight) -> Result<Multiplicities, Error> {
        if !lam.is_dominant() {
            return Err(Error::Domain(format!("weight {lam} is not dominant")));
        }
        if let Some(m) = self.mult_cache.lock().unwrap().get(lam) {
            return Ok(m.clone());
        }
        let doms = self.dominant_weights_below(lam);
        let roots: Vec<Weight> = self.positive_roots.iter().map(|r| self.root_to_weight(r)).collect();
        let rho = self.rho();
        let lr = lam.add(&rho);
        let top = self.inner_scaled(&lr, &lr);
        let mut mult: HashMap<Weight, i64> = HashMap::new();
        let mut out = Vec::new();
        for mu in &doms {
            let m = if mu == lam {
                1
            } else {
                let mut acc: i64 = 0;
                for a in &roots {
                    let mut k = 1;
                    loop {
                        let nu = mu.add(&a.scale(k));
                        let (dnu, _) = self.to_dominant(&nu);
                        match mult.get(&dnu) {
                            Some(&mv) => acc += mv * self.inner_scaled(&nu, a),
                            None => break,
                        }
                        k += 1;
                    }
                }
                let mr = mu.add(&rho);
                let den = top - self.inner_scaled(&mr, &mr);
                assert!(den > 0 && (2 * acc) % den == 0, "Freudenthal division failed");
                2 * acc / den
            };
            if m > 0 {
                mult.insert(mu.clone(), m);
                out.push((mu.clone(), m));
            }
        }
        let res = Arc::new(out);
        self.mult_cache.lock().unwrap().insert(lam.clone(), res.clone());
        Ok(res)
    }

    pub fn orbit(&self, mu: &Weight) -> Vec<Weight> {
        let mut seen: HashSet<Weight> = HashSet::new();
        let mut stack = vec![mu.clone()];
        seen.insert(mu.clone());
        while let Some(x) = stack.pop() {
            for i in 0..self.rank {
                let y = self.reflect(&x, i);
                if seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        let mut v: Vec<Weight> = seen.into_iter().collect();
        v.sort();
        v
    }

    /// Full weight diagram of V(lambda).
    pub fn weight_multiplicities(&self, lam: &Weight) -> Result<BTreeMap<Weight, i64>, Error> {
        let dom = self.dominant_multiplicities(lam)?;
        let mut out = BTreeMap::new();
        for (mu, m) in dom.iter() {
            for nu in self.orbit(mu) {
                out.insert(nu, *m);
            }
        }
        Ok(out)
    }

    /// chi_lambda * chi_mu by the Brauer-Klimyk rule.
    pub fn tensor_chi(&self, lam: &Weight, mu: &Weight) -> Result<WeylCharacter, Error> {
        let (small, big) = if self.weyl_dim(lam) <= self.weyl_dim(mu) { (lam, mu) } else { (mu, lam) };
        let wm = self.weight_multiplicities(small)?;
        let shift = big.add(&self.rho());
        let mut out = WeylCharacter::new();
        for (nu, m) in &wm {
            if let Some((tau, sign)) = self.dot_dominant(&nu.add(&shift)) {
                out.add_term(tau, sign * m);
            }
        }
        Ok(out)
    }

    /// For a rho-shifted vector x, the dominant weight w(x) - rho and sign(w), or
    /// None when x lies on a reflection wall.
    pub fn dot_dominant(&self, x: &Weight) -> Option<(Weight, i64)> {
        let (y, count) = self.to_dominant(x);
        if y.0.iter().any(|&c| c == 0) {
            return None;
        }
        let sign = if count % 2 == 0 { 1 } else { -1 };
        Some((y.sub(&self.rho()), sign))
    }

    /// Product of two characters in the chi-basis.
    pub fn char_product(&self, a: &WeylCharacter, b: &WeylCharacter) -> Result<WeylCharacter, Error> {
        let mut out = WeylCharacter::new();
        for (lam, x) in a.terms() {
            for (mu, y) in b.terms() {
                out.add_scaled(&self.tensor_chi(lam, mu)?, x * y);
            }
        }
        Ok(out)
    }

    pub fn char_dim(&self, a: &WeylCharacter) -> i64 {
        a.terms().map(|(lam, c)| c * self.weyl_dim(lam)).sum()
    }
}

/// Sum of a_lambda * b_lambda.
pub fn hom_pairing(a: &WeylCharacter, b: &WeylCharacter) -> i64 {
    a.terms().map(|(lam, c)| c * b.coeff(lam)).sum()
}
