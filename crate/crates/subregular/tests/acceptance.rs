// Acceptance run: one PASS/FAIL line per criterion. Built with harness = false
// so the lines show up in a plain `cargo test`.

mod common {
    pub mod props;
}

use std::time::Instant;

use num_traits::Zero;

use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use common::props::*;
use subregular::affine::{affine_dynkin_edges, graphs_isomorphic, AffineWeyl};
use subregular::deeq::{anisotropy_sieve, Deeq, Elimination};
use subregular::exactnum::{power_of, qint, CycloReal};
use subregular::fusion::{check_conjecture, proper_subgraph_determinants, set_of, FusionModel, SimpleAnalysis, SimpleRing};
use subregular::linalg::{determinant, int_det};
use subregular::rootdata::{w, LieType, WeylCharacter};
use subregular::tiltchar::TiltingDB;

type Checks = Vec<(String, bool)>;

// Sub-checks whose target digits cannot be met: the stated decimals disagree
// with the stated exact values (see the decisions ledger).
const UNATTAINABLE: &[&str] = &[
    "FPdim Cbar ~ 3054.068811 within 1e-5",
    "3+4alpha conjugate ~ 328.5234 within 1e-3",
];

fn check(v: &mut Checks, name: impl Into<String>, ok: bool) {
    v.push((name.into(), ok));
}

fn c1_cell_shapes() -> Checks {
    let mut v = Checks::new();
    for (t, l, expect, n) in [
        ("G2", 7, "~E7", 8),
        ("D4", 7, "~D4", 5),
        ("D5", 9, "~D5", 6),
        ("C3", 7, "~D6", 7),
        ("B3", 10, "~D6", 7),
        ("F4", 13, "~E7", 8),
    ] {
        let start = Instant::now();
        let ty = LieType::parse(t).unwrap();
        let aw = AffineWeyl::new(ty, l).unwrap();
        let cell = aw.enumerate_cell_subregular().unwrap();
        let (m, e) = affine_dynkin_edges(expect).unwrap();
        let iso = cell.vertices.len() == n && graphs_isomorphic(m, &e, n, &cell.edge_pairs());
        check(&mut v, format!("{t} l={l}: {n} vertices, {expect}"), iso);
        check(&mut v, format!("{t} l={l} under 30 s"), start.elapsed().as_secs_f64() < 30.0);
    }
    v
}

fn c2_weight_count() -> Checks {
    let aw = AffineWeyl::new(LieType::g2(), 7).unwrap();
    let cell = aw.enumerate_cell_subregular().unwrap();
    let pa = aw.compute_p_a(&cell);
    let mut v = Checks::new();
    check(&mut v, "|P_A| = 23", pa.len() == 23);
    check(&mut v, "8 alcove-interior weights", pa.iter().filter(|p| p.1).count() == 8);
    v
}

fn c3_tilting_characters() -> Checks {
    let aw = AffineWeyl::new(LieType::g2(), 7).unwrap();
    let mut db = TiltingDB::new(aw.clone());
    let cell = aw.enumerate_cell_subregular().unwrap();
    let dot = |word: &[usize]| aw.dot_apply(&aw.from_word(word), &w(&[0, 0]));
    let chi = |words: &[&[usize]]| {
        let mut c = WeylCharacter::new();
        for wd in words {
            c.add_term(dot(wd), 1);
        }
        c
    };
    let mut v = Checks::new();
    let wb: Vec<usize> = vec![0, 1, 2, 1, 2, 1, 0];
    let mut good = 0;
    for x in &cell.vertices {
        if x.word == wb {
            continue;
        }
        let mut ws = x.word.clone();
        ws.pop();
        let ok = aw.right_descents(&x.element).len() == 1 && db.get(&dot(&x.word)).unwrap() == chi(&[&x.word, &ws]);
        check(&mut v, format!("ch T({}.0) = chi_w + chi_ws", x.word_string()), ok);
        good += 1;
    }
    check(&mut v, "seven cell elements besides w_b", good == 7);
    let vv: &[usize] = &[0, 1, 2, 1, 2];
    let vs: &[usize] = &[0, 1, 2, 1, 2, 0];
    let vt: &[usize] = &[0, 1, 2, 1, 2, 1];
    let vr: &[usize] = &[0, 1, 2, 1];
    let vst: &[usize] = &[0, 1, 2, 1, 2, 0, 1];
    let wbt: &[usize] = &[0, 1, 2, 1, 2, 1, 0, 1];
    let bad = db.get(&dot(&wb)).unwrap();
    check(&mut v, "ch T(w_b.0) has four terms", bad == chi(&[&wb, vs, vt, vv]) && bad.len() == 4);
    check(&mut v, "ch T(v.0)", db.get(&dot(vv)).unwrap() == chi(&[vv, vr]));
    check(&mut v, "ch T(vt.0)", db.get(&dot(vt)).unwrap() == chi(&[vt, vv]));
    check(&mut v, "ch T(w_b t.0)", db.get(&dot(wbt)).unwrap() == chi(&[wbt, &wb, vst, vs, vt, vv]));
    v
}

fn c4_cartan(fm: &FusionModel) -> Checks {
    let mut v = Checks::new();
    let c = fm.cartan_matrix();
    let a = fm.cell.adjacency();
    let expect: Vec<Vec<i64>> = (0..8).map(|i| (0..8).map(|j| a[i][j] + 2 * (i == j) as i64).collect()).collect();
    check(&mut v, "C = 2I + A", c == expect);
    let (m, e) = affine_dynkin_edges("~E7").unwrap();
    check(&mut v, "graph is ~E7", graphs_isomorphic(m, &e, 8, &fm.cell.edge_pairs()));
    check(&mut v, "det C = 0", int_det(&c).is_zero());
    let subs = proper_subgraph_determinants(8, &fm.cell.edge_pairs());
    check(&mut v, "135 proper subgraphs, all nonsingular", subs.len() == 135 && subs.iter().all(|(_, d)| !d.is_zero()));
    let cert = fm.fpdim_generators(None).unwrap();
    check(&mut v, "principal block P = C L", fm.check_block_cartan(&cert).is_ok());
    v
}

fn c5_fpdims(fm: &FusionModel) -> Checks {
    let mut v = Checks::new();
    let ctx = fm.ctx.clone();
    let q = |k| qint(k, &ctx).unwrap();
    let one = CycloReal::one(&ctx);
    let l1 = &one + &q(3).scale_int(2);
    let l2 = &q(2) + &q(3).scale_int(3);
    let cert = fm.fpdim_generators(None);
    check(&mut v, "Perron roots certified", cert.is_ok());
    let Ok(cert) = cert else { return v };
    check(&mut v, "FPdim T(omega_1) = 1 + 2[3]", cert.lam1 == l1);
    check(&mut v, "FPdim T(omega_2) = [2] + 3[3]", cert.lam2 == l2);
    check(&mut v, "23 x 23 matrices", fm.n() == 23 && fm.gens.iter().all(|m| m.len() == 23));
    for (k, lam) in [(0usize, &l1), (1, &l2)] {
        let zero = CycloReal::zero(&ctx);
        let m: Vec<Vec<CycloReal>> = (0..23)
            .map(|i| {
                (0..23)
                    .map(|j| {
                        let x = CycloReal::from_int(&ctx, fm.gens[k][i][j]);
                        if i == j {
                            &x - lam
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect();
        check(&mut v, format!("det(M{} - lambda) = 0 exactly", k + 1), determinant(m, &zero).is_zero());
    }
    let total = fm.fpdim_category(&cert);
    let closed = (&(&CycloReal::from_int(&ctx, 7) + &q(3).scale_int(15)) + &q(5).scale_int(12)).scale_int(294);
    check(&mut v, "FPdim C = 294(7 + 15[3] + 12[5])", total == closed);
    check(&mut v, "FPdim C ~ 18324.416384 within 1e-5", (total.approx() - 18324.416384).abs() < 1e-5);
    v
}

fn c6_simple_fusion(an: &SimpleAnalysis) -> Checks {
    let mut v = Checks::new();
    let ring: &SimpleRing = &an.ring;
    let fm = &an.fm;
    let l = |j: usize| ring.principal[j];
    let ps = fm.principal_slots().unwrap();
    let cls = |xs: &[usize]| {
        let mut x = vec![0i64; ring.len()];
        for &j in xs {
            x[l(j)] += 1;
        }
        x
    };
    let pv = |xs: &[usize]| {
        let mut x = vec![0i64; fm.n() + 1];
        for &j in xs {
            x[ps[j]] += 1;
        }
        x
    };
    let pl = |p: usize, s: usize| ring.projective_times_simple(ps[p], l(s)).unwrap();
    let ll = |a: usize, b: usize| ring.simple_product(l(a), l(b)).unwrap();
    // part (a)
    check(&mut v, "FPdim L7 = 1", an.cert.simple[l(7)] == CycloReal::one(&fm.ctx));
    check(&mut v, "L7 (x) L7 = L0", ll(7, 7) == cls(&[0]));
    for (a, b) in [(7, 0), (6, 1), (5, 2), (3, 3), (4, 4)] {
        check(&mut v, format!("P{a} = P{b} (x) L7"), pl(b, 7) == pv(&[a]));
    }
    // part (b)
    check(&mut v, "FPdim L4 = 2", an.cert.simple[l(4)] == CycloReal::from_int(&fm.ctx, 2));
    let rows: [(&[usize], &[usize]); 5] =
        [(&[0, 7], &[4]), (&[1, 6], &[3]), (&[3], &[1, 3, 6]), (&[4], &[0, 4, 7]), (&[2, 5], &[2, 5])];
    for (ps_, out) in rows {
        for &p in ps_ {
            check(&mut v, format!("P{p} (x) L4 = sum P{out:?}"), pl(p, 4) == pv(out));
            check(&mut v, format!("L{p} (x) L4 = sum L{out:?}"), ll(p, 4) == cls(out));
        }
    }
    for (a, b) in [(6, 1), (5, 2), (3, 3), (4, 4)] {
        check(&mut v, format!("L{a} = L{b} (x) L7"), ll(b, 7) == cls(&[a]));
    }
    // L1 (x) P0 = 2 P1 + P' off the principal block
    let lp = pl(0, 1);
    let principal_part: Vec<i64> = ps.iter().map(|&s| lp[s]).collect();
    check(&mut v, "(L1 (x) P0)_0 = P1 + P1", principal_part == vec![0, 2, 0, 0, 0, 0, 0, 0]);
    check(&mut v, "L1 (x) P0 has a part P' off the principal block", lp.iter().sum::<i64>() > 2);
    let ch = an.chevalley().unwrap();
    let find = |a: usize, b: usize| ch.iter().find(|e| (e.i, e.j) == (a.min(b), a.max(b))).cloned().unwrap();
    let e11 = find(l(1), l(1));
    let wt = e11.witness.clone();
    check(
        &mut v,
        "(L1 (x) L1)_0 = P1 + L0 + L2",
        wt.is_some_and(|w| w.projective == vec![0, 1, 0, 0, 0, 0, 0, 0] && w.residual == vec![1, 0, 1, 0, 0, 0, 0, 0]),
    );
    check(&mut v, "(L1 (x) L2)_0 = L1 + L3", find(l(1), l(2)).principal == vec![0, 1, 0, 1, 0, 0, 0, 0]);
    check(&mut v, "(L2 (x) L2)_0 = L0 + L2 + L4 + L5", find(l(2), l(2)).principal == vec![1, 0, 1, 0, 1, 1, 0, 0]);
    v
}

fn c7_mueger(an: &SimpleAnalysis) -> Checks {
    let mut v = Checks::new();
    let l = |j: usize| an.principal(j);
    let m = an.mueger().unwrap();
    check(&mut v, "integral-FPdim filter = {L0, L4, L7}", set_of(&an.integral_simples()) == set_of(&[l(0), l(4), l(7)]));
    check(&mut v, "S3 fusion (sgn = L7, V = L4)", m.s3_fusion && m.sgn == Some(l(7)) && m.v == Some(l(4)));
    check(&mut v, "Muger center = Rep(S3)", m.holds());
    let reps = an.wall_orbit_representatives().unwrap();
    check(&mut v, "six wall orbits", reps.len() == 6);
    for ord in [7, 14] {
        check(&mut v, format!("orbit twists nonzero mod {ord}"), reps.iter().all(|(_, t)| t.rem_euclid(ord) != 0));
    }
    v
}

fn c8_deeq(d: &Deeq) -> Checks {
    let mut v = Checks::new();
    let ctx = d.an.fm.ctx.clone();
    check(&mut v, "17 simples", d.simples.len() == 17);
    let b = d.blocks().unwrap();
    check(&mut v, "12 trivial blocks", b.trivial.len() == 12);
    check(&mut v, "principal block ~D4", b.principal_type == "~D4");
    let total = d.fpdim().unwrap();
    let q = |k| qint(k, &ctx).unwrap();
    let closed = (&(&CycloReal::from_int(&ctx, 7) + &q(3).scale_int(15)) + &q(5).scale_int(12)).scale_int(49);
    check(&mut v, "FPdim Cbar = 49(7 + 15[3] + 12[5])", total == closed);
    check(&mut v, "FPdim Cbar ~ 3054.068811 within 1e-5", (total.approx() - 3054.068811).abs() < 1e-5);
    check(&mut v, "FPdim Cbar ~ 3054.069397 (value of the exact expression)", (total.approx() - 3054.069397).abs() < 1e-5);
    check(&mut v, "norm FPdim Cbar = 7^7", power_of(&total.norm(), 7) == Some(7));
    v
}

fn c9_sieve(d: &Deeq) -> Checks {
    let mut v = Checks::new();
    let total = d.fpdim().unwrap();
    let rep = anisotropy_sieve(&total, &d.alpha().unwrap(), 7);
    let mut labels: Vec<String> = rep.candidates.iter().map(|c| c.label()).collect();
    labels.sort();
    let mut expect: Vec<String> =
        ["1", "7", "49", "alpha", "1+alpha", "1+2alpha", "1+3alpha", "2+3alpha", "3+4alpha", "2+5alpha", "7alpha", "7+7alpha"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    expect.sort();
    check(&mut v, "candidate list = the 12 values", labels == expect);
    let c34 = rep.candidates.iter().find(|c| (c.r, c.s) == (3, 4));
    let (qt, cj) = match c34.map(|c| &c.verdict) {
        Some(Elimination::ConjugateDominance { quotient, conjugate }) => (*quotient, *conjugate),
        _ => (f64::NAN, f64::NAN),
    };
    check(&mut v, "3+4alpha eliminated by a dominating conjugate", qt.is_finite());
    check(&mut v, "3+4alpha quotient ~ 8.2884 within 1e-3", (qt - 8.2884).abs() < 1e-3);
    check(&mut v, "3+4alpha conjugate ~ 328.5234 within 1e-3", (cj - 328.5234).abs() < 1e-3);
    check(&mut v, "3+4alpha conjugate ~ 328.5395 (exact quotient's conjugate)", (cj - 328.5395).abs() < 1e-3);
    let surv: Vec<String> = rep.survivors().iter().map(|c| c.label()).collect();
    check(&mut v, "survivors = {1}", surv == vec!["1".to_string()]);
    v
}

fn c10_conjecture() -> Checks {
    let mut v = Checks::new();
    for l in [7, 11, 12, 15] {
        let r = check_conjecture(l).unwrap();
        check(&mut v, format!("l={l}: category FPdim = closed form"), r.category_holds());
        let expect2 = if l == 12 { 1 } else { 0 };
        check(&mut v, format!("l={l}: omega_1 formula exact"), r.generator_difference(0) == Some(0.into()));
        check(&mut v, format!("l={l}: omega_2 formula off by {expect2}"), r.generator_difference(1) == Some(expect2.into()));
        check(&mut v, format!("l={l}: 6 S2 S1^3 = closed form"), r.s_identity_holds());
    }
    v
}

fn c11_properties(fm: &FusionModel) -> Checks {
    let mut v = Checks::new();
    let cfg = Config { cases: 100, failure_persistence: None, ..Config::default() };
    let runner = || TestRunner::new_with_rng(cfg.clone(), TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let r = runner().run(&(levels(), 0i64..40), |(l, k)| qint_props(l, k).map_err(TestCaseError::fail));
    check(&mut v, "qint symmetry / recurrence (100 cases)", r.is_ok());
    let vecs = proptest::collection::vec(-4i64..5, 6);
    let r = runner().run(&(levels(), vecs.clone(), vecs), |(l, a, b)| norm_mult(l, &a, &b).map_err(TestCaseError::fail));
    check(&mut v, "norm multiplicativity (100 cases)", r.is_ok());
    let r = runner().run(&small_weights(), |(t, a, b)| tensor_props(&t, &a, &b).map_err(TestCaseError::fail));
    check(&mut v, "tensor_chi dimension and commutativity (100 cases)", r.is_ok());
    check(&mut v, "KL descent-choice independence", kl_descent_independence(7).is_ok());
    check(&mut v, "fusion matrices commute (all pairs)", fusion_commutativity(fm).is_ok());
    check(&mut v, "twists constant on P_A orbits", twist_orbit_constancy(fm).is_ok());
    check(&mut v, "Molien nonnegativity, sum dim^2 = |G|", molien_props().is_ok());
    v
}

fn main() {
    // libtest flags (--nocapture, filters) are accepted and ignored
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if args.iter().any(|a| a == "list") {
        return;
    }
    let start = Instant::now();
    let fm = FusionModel::build_full(7).unwrap();
    let an = SimpleAnalysis::new(7).unwrap();
    let d = Deeq::new(7).unwrap();
    let results: Vec<(usize, &str, Checks)> = vec![
        (1, "cell shapes", c1_cell_shapes()),
        (2, "G2 l=7 weight set", c2_weight_count()),
        (3, "tilting characters", c3_tilting_characters()),
        (4, "principal Cartan matrix", c4_cartan(&fm)),
        (5, "Frobenius-Perron dimensions", c5_fpdims(&fm)),
        (6, "simple fusion tables", c6_simple_fusion(&an)),
        (7, "Muger center", c7_mueger(&an)),
        (8, "de-equivariantization", c8_deeq(&d)),
        (9, "anisotropy sieve", c9_sieve(&d)),
        (10, "conjectured closed forms", c10_conjecture()),
        (11, "property suites", c11_properties(&fm)),
    ];
    let mut unexpected = Vec::new();
    for (id, name, checks) in &results {
        let failed: Vec<&String> = checks.iter().filter(|c| !c.1).map(|c| &c.0).collect();
        println!("criterion {id:>2} {}: {name} ({} checks)", if failed.is_empty() { "PASS" } else { "FAIL" }, checks.len());
        for f in failed {
            let known = UNATTAINABLE.contains(&f.as_str());
            println!("    failed: {f}{}", if known { " [digits inconsistent with the exact value]" } else { "" });
            if !known {
                unexpected.push(format!("criterion {id}: {f}"));
            }
        }
    }
    println!("acceptance finished in {:.1} s", start.elapsed().as_secs_f64());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures:\n  {}", unexpected.join("\n  "));
        std::process::exit(1);
    }
}
