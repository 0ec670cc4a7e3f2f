//! The affine Weyl group acting by the dot action, alcoves, the subregular
//! cell and the weight set attached to it.
//!
//! Everything acts on rho-shifted coordinates x = lambda + rho. Simple
//! reflections are indexed 0 (affine) and 1..=rank (finite, Bourbaki order).

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use petgraph::graph::UnGraph;

use crate::rootdata::{LieType, RootSystem, Series, Weight};
use crate::Error;

/// Integral affine map x -> linear * x + shift.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineElement {
    pub linear: Vec<Vec<i64>>,
    pub shift: Vec<i64>,
}

impl fmt::Debug for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Aff({:?} + {:?})", self.linear, self.shift)
    }
}

impl AffineElement {
    pub fn identity(n: usize) -> Self {
        let linear = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        AffineElement { linear, shift: vec![0; n] }
    }

    pub fn apply(&self, x: &Weight) -> Weight {
        let n = self.shift.len();
        Weight((0..n).map(|i| self.shift[i] + (0..n).map(|j| self.linear[i][j] * x.0[j]).sum::<i64>()).collect())
    }

    /// self after o.
    pub fn compose(&self, o: &AffineElement) -> AffineElement {
        let n = self.shift.len();
        let linear = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| self.linear[i][k] * o.linear[k][j]).sum()).collect())
            .collect();
        let shift = (0..n).map(|i| self.shift[i] + (0..n).map(|k| self.linear[i][k] * o.shift[k]).sum::<i64>()).collect();
        AffineElement { linear, shift }
    }

    pub fn is_identity(&self) -> bool {
        *self == AffineElement::identity(self.shift.len())
    }
}

/// Element of the affine Weyl group kept together with its inverse.
#[derive(Clone, Debug)]
pub struct Elem {
    pub map: AffineElement,
    pub inv: AffineElement,
}

impl Elem {
    pub fn identity(n: usize) -> Self {
        Elem { map: AffineElement::identity(n), inv: AffineElement::identity(n) }
    }

    pub fn inverse(&self) -> Elem {
        Elem { map: self.inv.clone(), inv: self.map.clone() }
    }

    pub fn compose(&self, o: &Elem) -> Elem {
        Elem { map: self.map.compose(&o.map), inv: o.inv.compose(&self.inv) }
    }
}

impl PartialEq for Elem {
    fn eq(&self, o: &Self) -> bool {
        self.map == o.map
    }
}
impl Eq for Elem {}

/// Member of the dominant coset representatives, with one reduced word.
#[derive(Clone, Debug)]
pub struct AlcoveRep {
    pub element: Elem,
    pub length: usize,
    pub word: Vec<usize>,
}

impl AlcoveRep {
    pub fn word_string(&self) -> String {
        if self.word.is_empty() {
            return "e".into();
        }
        self.word.iter().map(|s| format!("s{s}")).collect::<Vec<_>>().join("")
    }
}

/// Affine Weyl group of the dot action at level l.
pub struct AffineWeyl {
    pub rs: Arc<RootSystem>,
    pub l: i64,
    pub divisible: bool,
    /// The root defining the affine wall (highest root if divisible, else highest short root).
    pub beta: Weight,
    pub beta_coroot: Vec<i64>,
    /// Wall sits at <x, beta^vee> = wall_level.
    pub wall_level: i64,
    pub gens: Vec<Elem>,
    /// Coxeter matrix; 0 encodes infinity.
    pub coxeter: Vec<Vec<u32>>,
}

impl fmt::Debug for AffineWeyl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineWeyl({}, l={})", self.rs.ty, self.l)
    }
}

/// Smallest admissible l: the fundamental alcove must contain rho in its interior.
pub fn min_level(ty: LieType, divisible: bool) -> i64 {
    let rs = RootSystem::new(ty);
    let beta = if divisible { rs.highest_root() } else { rs.highest_short_root() };
    rs.inner(&rs.rho(), &beta).to_integer() + 1
}

impl AffineWeyl {
    pub fn new(ty: LieType, l: i64) -> Result<Arc<AffineWeyl>, Error> {
        let rs = RootSystem::new(ty);
        Self::with_root_system(rs, l)
    }

    pub fn with_root_system(rs: Arc<RootSystem>, l: i64) -> Result<Arc<AffineWeyl>, Error> {
        let ty = rs.ty;
        let divisible = ty.divisible(l);
        let beta = if divisible { rs.highest_root() } else { rs.highest_short_root() };
        let n_beta = rs.inner(&beta, &beta).to_integer() / 2;
        if l % n_beta != 0 {
            return Err(Error::Config(format!("level {l} not compatible with wall root for {ty}")));
        }
        let rho_beta = rs.inner(&rs.rho(), &beta).to_integer();
        if rho_beta >= l {
            return Err(Error::Config(format!(
                "l={l} too small for {ty} ({}): need l > {rho_beta} so that 0 is interior to the fundamental alcove",
                if divisible { "divisible" } else { "undivisible" }
            )));
        }
        let beta_coroot = rs.coroot_coeffs(&beta);
        let wall_level = l / n_beta;
        let n = rs.rank;
        let mut gens = Vec::with_capacity(n + 1);
        // s0(x) = x - (<x, beta^vee> - wall_level) beta
        let mut lin = AffineElement::identity(n).linear;
        for i in 0..n {
            for j in 0..n {
                lin[i][j] -= beta.0[i] * beta_coroot[j];
            }
        }
        let s0 = AffineElement { linear: lin, shift: beta.0.iter().map(|b| b * wall_level).collect() };
        gens.push(Elem { map: s0.clone(), inv: s0 });
        for k in 0..n {
            // s_k(x) = x - x_k alpha_k
            let mut lin = AffineElement::identity(n).linear;
            for i in 0..n {
                lin[i][k] -= rs.cartan[k][i];
            }
            let sk = AffineElement { linear: lin, shift: vec![0; n] };
            gens.push(Elem { map: sk.clone(), inv: sk });
        }
        let mut coxeter = vec![vec![1u32; n + 1]; n + 1];
        for a in 0..=n {
            for b in 0..=n {
                if a != b {
                    let st = gens[a].map.compose(&gens[b].map);
                    let mut p = st.clone();
                    let mut order = 0;
                    for k in 1..=12 {
                        if p.is_identity() {
                            order = k;
                            break;
                        }
                        p = p.compose(&st);
                    }
                    coxeter[a][b] = order;
                }
            }
        }
        Ok(Arc::new(AffineWeyl { rs, l, divisible, beta, beta_coroot, wall_level, gens, coxeter }))
    }

    pub fn rank(&self) -> usize {
        self.rs.rank
    }

    pub fn num_gens(&self) -> usize {
        self.rs.rank + 1
    }

    pub fn identity(&self) -> Elem {
        Elem::identity(self.rank())
    }

    pub fn rho(&self) -> Weight {
        self.rs.rho()
    }

    pub fn coroot_pairing(&self, x: &Weight) -> i64 {
        x.0.iter().zip(&self.beta_coroot).map(|(a, b)| a * b).sum()
    }

    /// Wall functionals, nonnegative exactly on the closed fundamental alcove.
    pub fn wall_values(&self, y: &Weight) -> Vec<i64> {
        let mut v = Vec::with_capacity(self.num_gens());
        v.push(self.wall_level - self.coroot_pairing(y));
        v.extend(y.0.iter().copied());
        v
    }

    /// Inequalities of the closed fundamental alcove on rho-shifted x:
    /// rows (coefficients, bound) meaning coefficients . x <= bound.
    pub fn fundamental_alcove(&self) -> Vec<(Vec<i64>, i64)> {
        let n = self.rank();
        let mut rows = Vec::new();
        for i in 0..n {
            let mut c = vec![0; n];
            c[i] = -1;
            rows.push((c, 0));
        }
        rows.push((self.beta_coroot.clone(), self.wall_level));
        rows
    }

    /// (x, beta) under the normalised form.
    pub fn wall_form(&self, x: &Weight) -> i64 {
        self.rs.inner(x, &self.beta).to_integer()
    }

    pub fn in_closed_alcove(&self, y: &Weight) -> bool {
        self.wall_values(y).iter().all(|&v| v >= 0)
    }

    pub fn in_open_alcove(&self, y: &Weight) -> bool {
        self.wall_values(y).iter().all(|&v| v > 0)
    }

    pub fn gen(&self, s: usize) -> &Elem {
        &self.gens[s]
    }

    pub fn mul_gen(&self, w: &Elem, s: usize) -> Elem {
        w.compose(&self.gens[s])
    }

    pub fn from_word(&self, word: &[usize]) -> Elem {
        word.iter().fold(self.identity(), |w, &s| self.mul_gen(&w, s))
    }

    /// Key identifying an element: the image of rho.
    pub fn key(&self, w: &Elem) -> Weight {
        w.map.apply(&self.rho())
    }

    pub fn in_w0(&self, w: &Elem) -> bool {
        self.key(w).0.iter().all(|&c| c > 0)
    }

    pub fn right_descents(&self, w: &Elem) -> Vec<usize> {
        let y = w.inv.apply(&self.rho());
        self.wall_values(&y).iter().enumerate().filter(|(_, v)| **v < 0).map(|(i, _)| i).collect()
    }

    pub fn is_right_descent(&self, w: &Elem, s: usize) -> bool {
        let y = w.inv.apply(&self.rho());
        self.wall_values(&y)[s] < 0
    }

    /// Reduced word obtained by peeling right descents (smallest index first).
    pub fn reduced_word(&self, w: &Elem) -> Vec<usize> {
        let mut cur = w.clone();
        let mut rev = Vec::new();
        loop {
            let d = self.right_descents(&cur);
            let Some(&s) = d.first() else { break };
            rev.push(s);
            cur = self.mul_gen(&cur, s);
        }
        rev.reverse();
        rev
    }

    pub fn length(&self, w: &Elem) -> usize {
        self.reduced_word(w).len()
    }

    pub fn rep(&self, w: Elem) -> AlcoveRep {
        let word = self.reduced_word(&w);
        AlcoveRep { length: word.len(), word, element: w }
    }

    /// Dot action w.lambda = w(lambda + rho) - rho.
    pub fn dot_apply(&self, w: &Elem, lam: &Weight) -> Weight {
        w.map.apply(&lam.add(&self.rho())).sub(&self.rho())
    }

    /// Fold a rho-shifted vector into the closed fundamental alcove; returns
    /// (image, u) with u(image) = x.
    pub fn fold(&self, x: &Weight) -> (Weight, Elem) {
        let mut y = x.clone();
        let mut u = self.identity();
        loop {
            let v = self.wall_values(&y);
            let Some(s) = v.iter().position(|&c| c < 0) else { break };
            y = self.gens[s].map.apply(&y);
            u = self.mul_gen(&u, s);
        }
        (y, u)
    }

    /// Canonical dot-orbit representative in the closed fundamental alcove and the walls it meets.
    pub fn orbit_canonical(&self, lam: &Weight) -> (Weight, BTreeSet<usize>) {
        let (y, _) = self.fold(&lam.add(&self.rho()));
        let walls = self.wall_values(&y).iter().enumerate().filter(|(_, v)| **v == 0).map(|(i, _)| i).collect();
        (y.sub(&self.rho()), walls)
    }

    /// Elements of the finite parabolic subgroup generated by the given reflections.
    pub fn parabolic(&self, gens: &BTreeSet<usize>) -> Vec<Elem> {
        let mut seen: HashSet<AffineElement> = HashSet::new();
        let mut out = vec![self.identity()];
        seen.insert(self.identity().map);
        let mut i = 0;
        while i < out.len() {
            for &s in gens {
                let nw = self.mul_gen(&out[i], s);
                if seen.insert(nw.map.clone()) {
                    out.push(nw);
                }
            }
            i += 1;
            assert!(out.len() < 100_000, "stabiliser is not finite");
        }
        out
    }

    /// All dominant-coset alcoves whose closure contains lambda.
    pub fn alcoves_containing(&self, lam: &Weight) -> Result<Vec<AlcoveRep>, Error> {
        if !lam.is_dominant() {
            return Err(Error::Domain(format!("weight {lam} is not dominant")));
        }
        let (y, u) = self.fold(&lam.add(&self.rho()));
        let walls: BTreeSet<usize> =
            self.wall_values(&y).iter().enumerate().filter(|(_, v)| **v == 0).map(|(i, _)| i).collect();
        let mut out: Vec<AlcoveRep> = self
            .parabolic(&walls)
            .into_iter()
            .map(|v| u.compose(&v))
            .filter(|w| self.in_w0(w))
            .map(|w| self.rep(w))
            .collect();
        out.sort_by(|a, b| (a.length, &a.word).cmp(&(b.length, &b.word)));
        Ok(out)
    }

    /// Brute-force variant: scan a list of candidate elements for closed-alcove membership.
    pub fn alcoves_containing_scan(&self, lam: &Weight, candidates: &[AlcoveRep]) -> Vec<AlcoveRep> {
        let x = lam.add(&self.rho());
        let mut out: Vec<AlcoveRep> =
            candidates.iter().filter(|c| self.in_closed_alcove(&c.element.inv.apply(&x))).cloned().collect();
        out.sort_by(|a, b| (a.length, &a.word).cmp(&(b.length, &b.word)));
        out
    }

    /// Breadth-first enumeration of the dominant coset representatives up to a length bound.
    pub fn enumerate_w0(&self, max_len: usize) -> Vec<AlcoveRep> {
        let mut seen: HashSet<Weight> = HashSet::new();
        let id = self.identity();
        seen.insert(self.key(&id));
        let mut layer = vec![AlcoveRep { element: id, length: 0, word: vec![] }];
        let mut out = layer.clone();
        for len in 1..=max_len {
            let mut next = Vec::new();
            for r in &layer {
                for s in 0..self.num_gens() {
                    let nw = self.mul_gen(&r.element, s);
                    if !self.in_w0(&nw) {
                        continue;
                    }
                    let k = self.key(&nw);
                    if seen.insert(k) {
                        let mut word = r.word.clone();
                        word.push(s);
                        next.push(AlcoveRep { element: nw, length: len, word });
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// Integral points of the closed fundamental alcove (rho-shifted coordinates).
    pub fn closed_alcove_points(&self) -> Vec<Weight> {
        let n = self.rank();
        let mut out = Vec::new();
        let bounds: Vec<i64> = self.beta_coroot.iter().map(|&c| self.wall_level / c.max(1)).collect();
        let mut cur = vec![0i64; n];
        fn rec(a: &AffineWeyl, i: usize, cur: &mut Vec<i64>, bounds: &[i64], out: &mut Vec<Weight>) {
            if i == cur.len() {
                let y = Weight(cur.clone());
                if a.in_closed_alcove(&y) {
                    out.push(y);
                }
                return;
            }
            for v in 0..=bounds[i] {
                cur[i] = v;
                rec(a, i + 1, cur, bounds, out);
            }
            cur[i] = 0;
        }
        rec(self, 0, &mut cur, &bounds, &mut out);
        out
    }

    /// Interior integral weights of the fundamental alcove (unshifted).
    pub fn interior_weights(&self) -> Vec<Weight> {
        self.closed_alcove_points().into_iter().filter(|y| self.in_open_alcove(y)).map(|y| y.sub(&self.rho())).collect()
    }
}

/// Affine Dynkin label read off a graph's shape.
pub fn detect_affine_type(n: usize, edges: &[(usize, usize)]) -> String {
    let mut deg = vec![0usize; n];
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        deg[a] += 1;
        deg[b] += 1;
        adj[a].push(b);
        adj[b].push(a);
    }
    if n == 0 {
        return "empty".into();
    }
    if edges.len() == n && deg.iter().all(|&d| d == 2) {
        return format!("~A{}", n - 1);
    }
    if edges.len() + 1 != n {
        return "unknown".into();
    }
    let branch: Vec<usize> = (0..n).filter(|&v| deg[v] >= 3).collect();
    match branch.len() {
        1 if deg[branch[0]] == 4 && n == 5 => "~D4".into(),
        1 if deg[branch[0]] == 3 => {
            let c = branch[0];
            let mut arms: Vec<usize> = adj[c]
                .iter()
                .map(|&start| {
                    let (mut prev, mut cur, mut len) = (c, start, 1);
                    while deg[cur] == 2 {
                        let nxt = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
                        prev = cur;
                        cur = nxt;
                        len += 1;
                    }
                    len
                })
                .collect();
            arms.sort();
            match arms.as_slice() {
                [2, 2, 2] => "~E6".into(),
                [1, 3, 3] => "~E7".into(),
                [1, 2, 5] => "~E8".into(),
                _ => "unknown".into(),
            }
        }
        2 if branch.iter().all(|&v| deg[v] == 3) && n >= 6 => {
            let leaves = (0..n).filter(|&v| deg[v] == 1).count();
            if leaves == 4 {
                format!("~D{}", n - 1)
            } else {
                "unknown".into()
            }
        }
        _ => "unknown".into(),
    }
}

/// Edge list of the standard affine Dynkin diagram with the given label (e.g. "~E7", "~D6").
pub fn affine_dynkin_edges(label: &str) -> Option<(usize, Vec<(usize, usize)>)> {
    let body = label.strip_prefix('~')?;
    let (s, k) = body.split_at(1);
    let k: usize = k.parse().ok()?;
    let path = |n: usize| (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>();
    match s {
        "A" if k >= 2 => {
            let mut e = path(k + 1);
            e.push((k, 0));
            Some((k + 1, e))
        }
        "D" if k == 4 => Some((5, vec![(0, 4), (1, 4), (2, 4), (3, 4)])),
        "D" if k >= 5 => Some((k + 1, rebuild_d(k))),
        "E" if k == 6 => Some((7, vec![(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6)])),
        "E" if k == 7 => Some((8, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7)])),
        "E" if k == 8 => Some((9, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 8)])),
        _ => None,
    }
}

fn rebuild_d(k: usize) -> Vec<(usize, usize)> {
    // ~D_k has k+1 vertices: spine 2..=k-2, leaves 0,1 on vertex 2 and k-1,k on vertex k-2
    let mut e = vec![(0, 2), (1, 2)];
    for i in 2..k - 2 {
        e.push((i, i + 1));
    }
    e.push((k - 2, k - 1));
    e.push((k - 2, k));
    e
}

pub fn graphs_isomorphic(n1: usize, e1: &[(usize, usize)], n2: usize, e2: &[(usize, usize)]) -> bool {
    let build = |n: usize, e: &[(usize, usize)]| {
        let mut g = UnGraph::<(), ()>::new_undirected();
        let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for &(a, b) in e {
            g.add_edge(nodes[a], nodes[b], ());
        }
        g
    };
    petgraph::algo::is_isomorphic(&build(n1, e1), &build(n2, e2))
}

/// The subregular cell with its graph.
#[derive(Clone, Debug)]
pub struct CellGraph {
    pub vertices: Vec<AlcoveRep>,
    /// (a, b, s) with vertex b = vertex a times s.
    pub edges: Vec<(usize, usize, usize)>,
    pub detected_type: String,
}

impl CellGraph {
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(a, b, _)| (a, b)).collect()
    }

    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        let n = self.vertices.len();
        let mut a = vec![vec![0; n]; n];
        for &(x, y, _) in &self.edges {
            a[x][y] = 1;
            a[y][x] = 1;
        }
        a
    }

    pub fn index_of_word(&self, word: &[usize]) -> Option<usize> {
        self.vertices.iter().position(|v| v.word == word)
    }
}

/// Types/levels for which the subregular cell is infinite and enumeration is refused.
fn refuse_reason(ty: LieType, divisible: bool) -> Option<&'static str> {
    match ty.series {
        Series::A => Some("type A has no distinguished subregular nilpotent; the cell is infinite"),
        Series::B if !divisible => Some("type B at undivisible l: the subregular cell is infinite"),
        Series::C if divisible => Some("type C at divisible l: the subregular cell is infinite"),
        Series::B | Series::C if ty.rank < 3 => Some("rank 2 of types B/C is not covered"),
        _ => None,
    }
}

const CELL_CAP: usize = 2000;

impl AffineWeyl {
    /// Enumerate elements with a unique reduced expression starting with s0 by
    /// growing along right multiplications that keep a single right descent.
    pub fn enumerate_cell_subregular(&self) -> Result<CellGraph, Error> {
        if let Some(r) = refuse_reason(self.rs.ty, self.divisible) {
            return Err(Error::Config(r.into()));
        }
        let s0 = self.gens[0].clone();
        let mut verts: Vec<AlcoveRep> = vec![AlcoveRep { element: s0, length: 1, word: vec![0] }];
        let mut index: HashMap<Weight, usize> = HashMap::new();
        index.insert(self.key(&verts[0].element), 0);
        let mut i = 0;
        while i < verts.len() {
            for s in 0..self.num_gens() {
                let w = &verts[i];
                if self.is_right_descent(&w.element, s) {
                    continue;
                }
                let nw = self.mul_gen(&w.element, s);
                let d = self.right_descents(&nw);
                if d != [s] {
                    continue;
                }
                let k = self.key(&nw);
                if index.contains_key(&k) {
                    continue;
                }
                let mut word = w.word.clone();
                word.push(s);
                let len = w.length + 1;
                index.insert(k, verts.len());
                verts.push(AlcoveRep { element: nw, length: len, word });
                if verts.len() > CELL_CAP {
                    return Err(Error::Config(format!("subregular cell exceeds {CELL_CAP} elements; treated as infinite")));
                }
            }
            i += 1;
        }
        verts.sort_by(|a, b| (a.length, &a.word).cmp(&(b.length, &b.word)));
        let index: HashMap<Weight, usize> = verts.iter().enumerate().map(|(i, v)| (self.key(&v.element), i)).collect();
        let mut edges = Vec::new();
        for (a, v) in verts.iter().enumerate() {
            for s in 0..self.num_gens() {
                let nw = self.mul_gen(&v.element, s);
                if let Some(&b) = index.get(&self.key(&nw)) {
                    if a < b {
                        edges.push((a, b, s));
                    }
                }
            }
        }
        let pairs: Vec<(usize, usize)> = edges.iter().map(|&(a, b, _)| (a, b)).collect();
        let detected_type = detect_affine_type(verts.len(), &pairs);
        Ok(CellGraph { vertices: verts, edges, detected_type })
    }

    /// Independent enumeration: words starting with s0 with no applicable
    /// commutation or braid move, checked to be reduced.
    pub fn enumerate_cell_by_words(&self) -> Result<Vec<Vec<usize>>, Error> {
        if let Some(r) = refuse_reason(self.rs.ty, self.divisible) {
            return Err(Error::Config(r.into()));
        }
        let mut out = Vec::new();
        let mut stack: Vec<(Vec<usize>, Elem)> = vec![(vec![0], self.gens[0].clone())];
        while let Some((word, el)) = stack.pop() {
            if self.length(&el) != word.len() {
                continue;
            }
            out.push(word.clone());
            if out.len() > CELL_CAP {
                return Err(Error::Config("word enumeration exceeded cap".into()));
            }
            let last = *word.last().unwrap();
            for u in 0..self.num_gens() {
                let m = self.coxeter[last][u];
                if u == last || m == 2 {
                    continue;
                }
                // an alternating tail ... last u of length m would admit a braid move
                if m != 0 {
                    let mut alt = 1;
                    let mut expect = last;
                    for &c in word.iter().rev() {
                        if c != expect {
                            break;
                        }
                        alt += 1;
                        expect = if expect == last { u } else { last };
                    }
                    if alt >= m as usize {
                        continue;
                    }
                }
                let mut nw = word.clone();
                nw.push(u);
                stack.push((nw, self.mul_gen(&el, u)));
            }
        }
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        Ok(out)
    }

    /// Weights labelling the projectives of the quotient category, with an
    /// interior flag, ordered by the root system's total order.
    pub fn compute_p_a(&self, cell: &CellGraph) -> Vec<(Weight, bool)> {
        let allowed = self.allowed_keys(cell);
        let pts = self.closed_alcove_points();
        let mut found: HashMap<Weight, bool> = HashMap::new();
        for v in &cell.vertices {
            for y in &pts {
                let x = v.element.map.apply(y);
                if x.0.iter().any(|&c| c < 1) {
                    continue;
                }
                let lam = x.sub(&self.rho());
                if found.contains_key(&lam) {
                    continue;
                }
                if self.survivor_with(&lam, &allowed) {
                    found.insert(lam, self.in_open_alcove(y));
                }
            }
        }
        let mut v: Vec<(Weight, bool)> = found.into_iter().collect();
        v.sort_by_key(|(w, _)| self.rs.order_key(w));
        v
    }

    fn allowed_keys(&self, cell: &CellGraph) -> HashSet<Weight> {
        let mut allowed: HashSet<Weight> = cell.vertices.iter().map(|v| self.key(&v.element)).collect();
        allowed.insert(self.rho());
        allowed
    }

    fn survivor_with(&self, lam: &Weight, allowed: &HashSet<Weight>) -> bool {
        match self.alcoves_containing(lam) {
            Ok(a) => a.iter().all(|r| allowed.contains(&self.key(&r.element))),
            Err(_) => false,
        }
    }

    /// True iff every alcove containing lambda lies in the cell or is the fundamental one.
    pub fn survivor(&self, lam: &Weight, cell: &CellGraph) -> bool {
        lam.is_dominant() && self.survivor_with(lam, &self.allowed_keys(cell))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::w;

    fn g2(l: i64) -> Arc<AffineWeyl> {
        AffineWeyl::new(LieType::g2(), l).unwrap()
    }

    #[test]
    fn g2_alcove_data() {
        let a = g2(7);
        assert!(!a.divisible);
        assert_eq!(a.beta, w(&[1, 0]));
        assert_eq!(a.wall_form(&w(&[1, 0]).add(&a.rho())), 7);
        assert_eq!(a.interior_weights(), vec![w(&[0, 0])]);
        assert_eq!(a.coxeter[0][1], 3);
        assert_eq!(a.coxeter[0][2], 2);
        assert_eq!(a.coxeter[1][2], 6);
        let b3 = AffineWeyl::new(LieType::parse("B3").unwrap(), 12).unwrap();
        assert!(b3.divisible);
        assert_eq!(b3.beta, b3.rs.highest_root());
        assert!(AffineWeyl::new(LieType::g2(), 5).is_err());
    }

    #[test]
    fn generators_are_involutions_preserving_form() {
        for (t, l) in [("G2", 7), ("B3", 12), ("F4", 13), ("D4", 7)] {
            let a = AffineWeyl::new(LieType::parse(t).unwrap(), l).unwrap();
            for g in &a.gens {
                assert!(g.map.compose(&g.map).is_identity());
                let x = w(&vec![3; a.rank()]);
                let y = w(&(0..a.rank() as i64).collect::<Vec<_>>());
                let (gx, gy, g0) = (g.map.apply(&x), g.map.apply(&y), g.map.apply(&a.rs.zero()));
                assert_eq!(a.rs.inner(&gx.sub(&g0), &gy.sub(&g0)), a.rs.inner(&x, &y));
            }
        }
    }

    #[test]
    fn g2_cell_matches_labelled_graph() {
        let a = g2(7);
        let cell = a.enumerate_cell_subregular().unwrap();
        assert_eq!(cell.vertices.len(), 8);
        assert_eq!(cell.detected_type, "~E7");
        let words: Vec<Vec<usize>> = cell.vertices.iter().map(|v| v.word.clone()).collect();
        assert_eq!(words[4], vec![0, 1, 2, 1, 0]);
        assert_eq!(words[5], vec![0, 1, 2, 1, 2]);
        assert_eq!(words[7], vec![0, 1, 2, 1, 2, 1, 0]);
        let mut e = cell.edge_pairs();
        e.sort();
        assert_eq!(e, vec![(0, 1), (1, 2), (2, 3), (3, 4), (3, 5), (5, 6), (6, 7)]);
        assert_eq!(a.enumerate_cell_by_words().unwrap(), words);
    }

    #[test]
    fn refused_configurations() {
        assert!(AffineWeyl::new(LieType::parse("A3").unwrap(), 5).unwrap().enumerate_cell_subregular().is_err());
        assert!(AffineWeyl::new(LieType::parse("B3").unwrap(), 7).unwrap().enumerate_cell_subregular().is_err());
        assert!(AffineWeyl::new(LieType::parse("C3").unwrap(), 8).unwrap().enumerate_cell_subregular().is_err());
    }

    #[test]
    fn lengths_change_by_one() {
        let a = g2(7);
        for r in a.enumerate_w0(8) {
            assert_eq!(a.length(&r.element), r.length);
            for s in 0..3 {
                let l2 = a.length(&a.mul_gen(&r.element, s));
                assert!(l2 == r.length + 1 || l2 + 1 == r.length);
            }
        }
    }

    #[test]
    fn dot_action_roundtrip_and_projective_cover_weight() {
        let a = g2(7);
        let s0 = a.gen(0).clone();
        let lam = a.dot_apply(&s0, &w(&[0, 0]));
        assert_eq!(lam, w(&[2, 0]));
        let x = a.from_word(&[0, 1, 2, 1]);
        let mu = w(&[3, 2]);
        assert_eq!(a.dot_apply(&x, &a.dot_apply(&x.inverse(), &mu)), mu);
        assert_eq!(a.dot_apply(&a.identity(), &mu), mu);
    }

    #[test]
    fn orbit_canonical_examples() {
        let a = g2(7);
        assert_eq!(a.orbit_canonical(&w(&[0, 0])), (w(&[0, 0]), BTreeSet::new()));
        assert_eq!(a.orbit_canonical(&w(&[2, 0])).0, w(&[0, 0]));
        assert_eq!(a.orbit_canonical(&w(&[1, 0])), (w(&[1, 0]), [0usize].into_iter().collect()));
    }

    #[test]
    fn alcoves_containing_agrees_with_scan() {
        let a = g2(7);
        let ball = a.enumerate_w0(14);
        for lam in [w(&[0, 0]), w(&[2, 0]), w(&[1, 0]), w(&[0, 1]), w(&[3, 0]), w(&[1, 1]), w(&[4, 1])] {
            let fast: Vec<Vec<usize>> = a.alcoves_containing(&lam).unwrap().into_iter().map(|r| r.word).collect();
            let slow: Vec<Vec<usize>> = a.alcoves_containing_scan(&lam, &ball).into_iter().map(|r| r.word).collect();
            assert_eq!(fast, slow, "{lam}");
        }
        assert_eq!(a.alcoves_containing(&w(&[2, 0])).unwrap().len(), 1);
        assert!(a.alcoves_containing(&w(&[1, 0])).unwrap().len() >= 2);
    }

    #[test]
    fn g2_p_a_has_23_weights() {
        let a = g2(7);
        let cell = a.enumerate_cell_subregular().unwrap();
        let pa = a.compute_p_a(&cell);
        assert_eq!(pa.len(), 23);
        assert_eq!(pa.iter().filter(|(_, i)| *i).count(), 8);
        assert_eq!(pa[0].0, w(&[1, 0]));
        assert_eq!(pa[1].0, w(&[0, 1]));
        assert!(a.survivor(&w(&[0, 0]), &cell));
        assert!(!pa.iter().any(|(x, _)| x.is_zero()));
        let v = a.from_word(&[0, 1, 2, 1, 2]);
        let vs = a.mul_gen(&v, 0);
        assert!(!a.survivor(&a.dot_apply(&vs, &w(&[0, 0])), &cell));
    }
}

#[cfg(test)]
mod shape_tests {
    use super::*;

    #[test]
    fn cell_shapes_across_types() {
        let cases = [
            ("D4", 7, "~D4", 5),
            ("D5", 9, "~D5", 6),
            ("C3", 7, "~D6", 7),
            ("B3", 10, "~D6", 7),
            ("B3", 12, "~D6", 7),
            ("C4", 9, "~D8", 9),
            ("F4", 13, "~E7", 8),
            ("G2", 12, "~E7", 8),
            ("E6", 13, "~E6", 7),
        ];
        for (t, l, expect, n) in cases {
            let a = AffineWeyl::new(LieType::parse(t).unwrap(), l).unwrap();
            let cell = a.enumerate_cell_subregular().unwrap();
            assert_eq!(cell.vertices.len(), n, "{t} l={l}");
            assert_eq!(cell.detected_type, expect, "{t} l={l}");
            let (m, e) = affine_dynkin_edges(expect).unwrap();
            assert!(graphs_isomorphic(m, &e, n, &cell.edge_pairs()));
            let words: Vec<Vec<usize>> = cell.vertices.iter().map(|v| v.word.clone()).collect();
            assert_eq!(a.enumerate_cell_by_words().unwrap(), words, "{t} l={l}");
        }
    }
}
