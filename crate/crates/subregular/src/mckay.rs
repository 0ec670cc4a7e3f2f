//! Finite subgroups of SL2(C): class data, character tables, McKay graphs,
//! toy Cartan matrices and Molien series of S(V)^G with V in degree 2.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::affine::detect_affine_type;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(usize),
    /// Binary dihedral of order 4n (n >= 2); n = 2 is the quaternion group.
    BinaryDihedral(usize),
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Cyclic(n) => write!(f, "C{n}"),
            GroupKind::BinaryDihedral(2) => write!(f, "Q8"),
            GroupKind::BinaryDihedral(n) => write!(f, "BD{}", 4 * n),
            GroupKind::BinaryTetrahedral => write!(f, "2T"),
            GroupKind::BinaryOctahedral => write!(f, "2O"),
            GroupKind::BinaryIcosahedral => write!(f, "2I"),
        }
    }
}

impl GroupKind {
    pub fn parse(s: &str) -> Result<GroupKind, Error> {
        let t = s.trim().to_ascii_uppercase();
        let num = |p: &str| t.strip_prefix(p).and_then(|r| r.parse::<usize>().ok());
        Ok(match t.as_str() {
            "Q8" => GroupKind::BinaryDihedral(2),
            "2T" | "BT" => GroupKind::BinaryTetrahedral,
            "2O" | "BO" => GroupKind::BinaryOctahedral,
            "2I" | "BI" => GroupKind::BinaryIcosahedral,
            _ => {
                if let Some(n) = num("BD").filter(|n| n % 4 == 0 && *n >= 8) {
                    GroupKind::BinaryDihedral(n / 4)
                } else if let Some(n) = num("C").filter(|&n| n >= 1) {
                    GroupKind::Cyclic(n)
                } else {
                    return Err(Error::Config(format!("unknown group '{s}' (C<n>, BD<4n>, Q8, 2T, 2O, 2I)")));
                }
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct ConjClass {
    pub size: usize,
    /// Eigenvalues on V are exp(+-2 pi i k / m).
    pub m: usize,
    pub k: usize,
}

impl ConjClass {
    fn new(size: usize, m: usize, k: usize) -> Self {
        ConjClass { size, m, k }
    }

    pub fn angle(&self) -> f64 {
        2.0 * PI * self.k as f64 / self.m as f64
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.angle().cos()
    }
}

#[derive(Clone, Debug)]
pub struct SL2Subgroup {
    pub kind: GroupKind,
    pub classes: Vec<ConjClass>,
    /// chars[i][c] = value of the i-th irreducible on class c; chars[0] trivial.
    pub chars: Vec<Vec<Complex64>>,
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn root(a: i64, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * a as f64 / n as f64)
}

impl SL2Subgroup {
    pub fn new(kind: GroupKind) -> Result<SL2Subgroup, Error> {
        let (classes, chars) = match kind {
            GroupKind::Cyclic(n) => {
                if n == 0 {
                    return Err(Error::Domain("cyclic group of order 0".into()));
                }
                let classes = (0..n).map(|j| ConjClass::new(1, n, j)).collect();
                let chars = (0..n).map(|a| (0..n).map(|j| root((a * j) as i64, n)).collect()).collect();
                (classes, chars)
            }
            GroupKind::BinaryDihedral(n) => {
                if n < 2 {
                    return Err(Error::Domain("binary dihedral needs n >= 2".into()));
                }
                let mut classes = vec![ConjClass::new(1, 1, 0), ConjClass::new(1, 2, 1)];
                for j in 1..n {
                    classes.push(ConjClass::new(2, 2 * n, j));
                }
                classes.push(ConjClass::new(n, 4, 1));
                classes.push(ConjClass::new(n, 4, 1));
                let mut chars = Vec::new();
                let sgn_n = if n % 2 == 0 { 1.0 } else { -1.0 };
                for (eps, beta) in [
                    (1.0, re(1.0)),
                    (1.0, re(-1.0)),
                    (-1.0, if n % 2 == 0 { re(1.0) } else { Complex64::i() }),
                    (-1.0, if n % 2 == 0 { re(-1.0) } else { -Complex64::i() }),
                ] {
                    let mut row = vec![re(1.0), re(if eps < 0.0 { sgn_n } else { 1.0 })];
                    for j in 1..n {
                        row.push(re(if eps < 0.0 && j % 2 == 1 { -1.0 } else { 1.0 }));
                    }
                    row.push(beta);
                    row.push(beta * eps);
                    chars.push(row);
                }
                for h in 1..n {
                    let mut row = vec![re(2.0), re(if h % 2 == 0 { 2.0 } else { -2.0 })];
                    for j in 1..n {
                        row.push(re(2.0 * (PI * (h * j) as f64 / n as f64).cos()));
                    }
                    row.push(re(0.0));
                    row.push(re(0.0));
                    chars.push(row);
                }
                (classes, chars)
            }
            GroupKind::BinaryTetrahedral => {
                // 1, -1, order 4, order 3 (two classes), order 6 (two classes)
                let classes = vec![
                    ConjClass::new(1, 1, 0),
                    ConjClass::new(1, 2, 1),
                    ConjClass::new(6, 4, 1),
                    ConjClass::new(4, 3, 1),
                    ConjClass::new(4, 3, 1),
                    ConjClass::new(4, 6, 1),
                    ConjClass::new(4, 6, 1),
                ];
                let w = root(1, 3);
                let w2 = w * w;
                let o = re(1.0);
                let z = re(0.0);
                let chars = vec![
                    vec![o, o, o, o, o, o, o],
                    vec![o, o, o, w, w2, w, w2],
                    vec![o, o, o, w2, w, w2, w],
                    vec![re(2.0), re(-2.0), z, re(-1.0), re(-1.0), o, o],
                    vec![re(2.0), re(-2.0), z, -w, -w2, w, w2],
                    vec![re(2.0), re(-2.0), z, -w2, -w, w2, w],
                    vec![re(3.0), re(3.0), re(-1.0), z, z, z, z],
                ];
                (classes, chars)
            }
            GroupKind::BinaryOctahedral => {
                // 1, -1, order 4 (6), order 8 (6, tr sqrt2), order 8 (6, tr -sqrt2), order 3, order 6, order 4 (12)
                let classes = vec![
                    ConjClass::new(1, 1, 0),
                    ConjClass::new(1, 2, 1),
                    ConjClass::new(6, 4, 1),
                    ConjClass::new(6, 8, 1),
                    ConjClass::new(6, 8, 3),
                    ConjClass::new(8, 3, 1),
                    ConjClass::new(8, 6, 1),
                    ConjClass::new(12, 4, 1),
                ];
                let s = 2f64.sqrt();
                let rows: Vec<[f64; 8]> = vec![
                    [1., 1., 1., 1., 1., 1., 1., 1.],
                    [1., 1., 1., -1., -1., 1., 1., -1.],
                    [2., 2., 2., 0., 0., -1., -1., 0.],
                    [3., 3., -1., -1., -1., 0., 0., 1.],
                    [3., 3., -1., 1., 1., 0., 0., -1.],
                    [2., -2., 0., s, -s, -1., 1., 0.],
                    [2., -2., 0., -s, s, -1., 1., 0.],
                    [4., -4., 0., 0., 0., 1., -1., 0.],
                ];
                (classes, rows.into_iter().map(|r| r.iter().map(|&x| re(x)).collect()).collect())
            }
            GroupKind::BinaryIcosahedral => {
                // 1, -1, order 4, order 3, order 6, order 5 (x2), order 10 (x2)
                let classes = vec![
                    ConjClass::new(1, 1, 0),
                    ConjClass::new(1, 2, 1),
                    ConjClass::new(30, 4, 1),
                    ConjClass::new(20, 3, 1),
                    ConjClass::new(20, 6, 1),
                    ConjClass::new(12, 5, 1),
                    ConjClass::new(12, 5, 2),
                    ConjClass::new(12, 10, 1),
                    ConjClass::new(12, 10, 3),
                ];
                let p = (1.0 + 5f64.sqrt()) / 2.0;
                let q = (1.0 - 5f64.sqrt()) / 2.0;
                let v = [2., -2., 0., -1., 1., -q, -p, p, q];
                let v2 = [2., -2., 0., -1., 1., -p, -q, q, p];
                let three = [3., 3., -1., 0., 0., q, p, p, q];
                let three2 = [3., 3., -1., 0., 0., p, q, q, p];
                let four = [4., 4., 0., 1., 1., -1., -1., -1., -1.];
                let five = [5., 5., 1., -1., -1., 0., 0., 0., 0.];
                // V (x) Sym^2 V = Sym^3 V + V, V (x) Sym^4 V = Sym^5 V + Sym^3 V
                let four_f: Vec<f64> = (0..9).map(|c| v[c] * three[c] - v[c]).collect();
                let six: Vec<f64> = (0..9).map(|c| v[c] * five[c] - four_f[c]).collect();
                let rows: Vec<Vec<f64>> = vec![
                    vec![1.; 9],
                    v.to_vec(),
                    v2.to_vec(),
                    three.to_vec(),
                    three2.to_vec(),
                    four.to_vec(),
                    four_f,
                    five.to_vec(),
                    six,
                ];
                (classes, rows.into_iter().map(|r| r.into_iter().map(re).collect()).collect())
            }
        };
        Ok(SL2Subgroup { kind, classes, chars })
    }

    /// The five stored families at small parameters.
    pub fn stored() -> Vec<SL2Subgroup> {
        [
            GroupKind::Cyclic(4),
            GroupKind::BinaryDihedral(2),
            GroupKind::BinaryTetrahedral,
            GroupKind::BinaryOctahedral,
            GroupKind::BinaryIcosahedral,
        ]
        .into_iter()
        .map(|k| SL2Subgroup::new(k).unwrap())
        .collect()
    }

    pub fn order(&self) -> usize {
        self.classes.iter().map(|c| c.size).sum()
    }

    pub fn dims(&self) -> Vec<i64> {
        self.chars.iter().map(|r| r[0].re.round() as i64).collect()
    }

    pub fn natural(&self) -> Vec<Complex64> {
        self.classes.iter().map(|c| re(c.trace())).collect()
    }

    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let s: Complex64 =
            self.classes.iter().enumerate().map(|(c, cl)| a[c] * b[c].conj() * cl.size as f64).sum();
        s / self.order() as f64
    }

    /// Max deviation of the character inner products from the identity matrix.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0f64;
        for (i, a) in self.chars.iter().enumerate() {
            for (j, b) in self.chars.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.inner(a, b) - re(target)).norm());
            }
        }
        worst
    }

    /// The central element -1 (the unique involution); absent for odd order.
    pub fn epsilon(&self) -> Result<usize, Error> {
        self.classes
            .iter()
            .position(|c| 2 * c.k == c.m)
            .ok_or_else(|| Error::Domain(format!("{} has odd order: no central involution", self.kind)))
    }
}

#[derive(Clone, Debug)]
pub struct McKayGraph {
    pub adjacency: Vec<Vec<i64>>,
    pub detected_type: String,
}

impl McKayGraph {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.adjacency.len();
        let mut e = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for _ in 0..self.adjacency[a][b] {
                    e.push((a, b));
                }
            }
        }
        e
    }
}

pub fn mckay_graph(g: &SL2Subgroup) -> Result<McKayGraph, Error> {
    let v = g.natural();
    let n = g.chars.len();
    let mut adj = vec![vec![0i64; n]; n];
    for j in 0..n {
        let prod: Vec<Complex64> = (0..v.len()).map(|c| v[c] * g.chars[j][c]).collect();
        for i in 0..n {
            let m = g.inner(&prod, &g.chars[i]);
            let r = m.re.round();
            if (m - re(r)).norm() > 1e-6 || r < 0.0 {
                return Err(Error::Internal(format!("non-integral McKay multiplicity in {}", g.kind)));
            }
            adj[i][j] = r as i64;
        }
    }
    let detected_type = if n == 1 {
        "~A0".to_string()
    } else {
        let tmp = McKayGraph { adjacency: adj.clone(), detected_type: String::new() };
        detect_affine_type(n, &tmp.edges())
    };
    Ok(McKayGraph { adjacency: adj, detected_type })
}

pub fn cartan_toy(g: &SL2Subgroup) -> Result<Vec<Vec<i64>>, Error> {
    let mut a = mckay_graph(g)?.adjacency;
    for (i, row) in a.iter_mut().enumerate() {
        row[i] += 2;
    }
    Ok(a)
}

/// 2I + A(X) for a tree X on n vertices.
pub fn quiver_model_cartan(n: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<i64>>, Error> {
    if n == 0 || edges.len() + 1 != n {
        return Err(Error::Domain("not a tree: wrong edge count".into()));
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut a = vec![vec![0i64; n]; n];
    for &(x, y) in edges {
        if x >= n || y >= n || x == y {
            return Err(Error::Domain("not a tree: bad edge".into()));
        }
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx == ry {
            return Err(Error::Domain("not a tree: cycle".into()));
        }
        parent[rx] = ry;
        a[x][y] += 1;
        a[y][x] += 1;
    }
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    Ok(a)
}

/// Power series in t given as num / den plus an explicit coefficient prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSeries {
    pub numerator: Vec<i64>,
    pub denominator: Vec<i64>,
    pub coeffs: Vec<i64>,
    /// Degrees of a minimal generating set read off the series.
    pub generator_degrees: Vec<usize>,
}

impl GradedSeries {
    /// Expand num / den up to (exclusive) degree n.
    pub fn expand(&self, n: usize) -> Vec<i64> {
        let mut out = vec![0i64; n];
        let d0 = self.denominator[0];
        for k in 0..n {
            let mut v = *self.numerator.get(k).unwrap_or(&0);
            for j in 1..self.denominator.len().min(k + 1) {
                v -= self.denominator[j] * out[k - j];
            }
            out[k] = v / d0;
        }
        out
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn one_minus_t(d: usize) -> Vec<i64> {
    let mut p = vec![0i64; d + 1];
    p[0] = 1;
    p[d] -= 1;
    p
}

/// Molien series of S(V)^G with V in degree 2: coefficient of t^{2d} is the
/// multiplicity of the trivial representation in Sym^d V.
pub fn molien_series(g: &SL2Subgroup, n_terms: usize) -> Result<GradedSeries, Error> {
    let len = 2 * n_terms;
    let mut coeffs = vec![0i64; len];
    for d in 0..n_terms {
        let mut s = 0.0;
        for cl in &g.classes {
            // trace of g on Sym^d V
            let th = cl.angle();
            let h: f64 = (0..=d).map(|a| (th * (d as f64 - 2.0 * a as f64)).cos()).sum();
            s += cl.size as f64 * h;
        }
        let c = s / g.order() as f64;
        let r = c.round();
        if (c - r).abs() > 1e-6 || r < 0.0 {
            return Err(Error::Internal(format!("non-integral Molien coefficient {c} in degree {}", 2 * d)));
        }
        coeffs[2 * d] = r as i64;
    }
    // greedy generator degrees, valid until the first relation
    let mut gens = Vec::new();
    let mut free = vec![0i64; len];
    free[0] = 1;
    for deg in 1..len {
        if coeffs[deg] < free[deg] {
            break;
        }
        let extra = coeffs[deg] - free[deg];
        for _ in 0..extra {
            gens.push(deg);
            // multiply free series by 1/(1 - t^deg)
            for k in deg..len {
                free[k] += free[k - deg];
            }
        }
    }
    let mut den = vec![1i64];
    for &d in &gens {
        den = poly_mul(&den, &one_minus_t(d));
    }
    let mut num = poly_mul(&coeffs, &den);
    num.truncate(len);
    while num.len() > 1 && *num.last().unwrap() == 0 {
        num.pop();
    }
    Ok(GradedSeries { numerator: num, denominator: den, coeffs, generator_degrees: gens })
}
