// Property checks shared by the proptest suite and the acceptance run.

use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;

use subregular::affine::AffineWeyl;
use subregular::exactnum::{qint_any, CycloReal, FieldContext};
use subregular::fusion::{orbit_classes, FusionModel};
use subregular::mckay::{molien_series, SL2Subgroup};
use subregular::rootdata::{LieType, RootSystem, Weight};
use subregular::tiltchar::KlEngine;

pub type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn levels() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![4u32, 5, 7, 8, 9, 10, 11, 12, 13, 15])
}

/// [l - k] = [k], [l] = 0, [2][k] = [k - 1] + [k + 1].
pub fn qint_props(l: u32, k: i64) -> Check {
    let ctx = FieldContext::new(l).map_err(|e| e.to_string())?;
    let k = 1 + k.rem_euclid(l as i64 - 1);
    let q = |j: i64| qint_any(j, &ctx);
    ensure(q(l as i64 - k) == q(k), || format!("[l-k] != [k] at l={l} k={k}"))?;
    ensure(q(l as i64).is_zero(), || format!("[l] != 0 at l={l}"))?;
    ensure(&q(2) * &q(k) == &q(k - 1) + &q(k + 1), || format!("recurrence fails at l={l} k={k}"))?;
    ensure(q(k).sign() == std::cmp::Ordering::Greater, || format!("[k] not positive at l={l} k={k}"))
}

fn element(ctx: &Arc<FieldContext>, c: &[i64]) -> CycloReal {
    let coeffs = (0..ctx.degree).map(|i| BigRational::from_integer(c.get(i).copied().unwrap_or(0).into())).collect();
    CycloReal::from_coeffs(ctx, coeffs)
}

pub fn norm_mult(l: u32, a: &[i64], b: &[i64]) -> Check {
    let ctx = FieldContext::new(l).map_err(|e| e.to_string())?;
    let (x, y) = (element(&ctx, a), element(&ctx, b));
    ensure((&x * &y).norm() == x.norm() * y.norm(), || format!("norm not multiplicative at l={l}: {x} {y}"))
}

pub fn small_weights() -> impl Strategy<Value = (String, Vec<i64>, Vec<i64>)> {
    prop::sample::select(vec!["A2", "B2", "G2", "A3", "B3", "C3"]).prop_flat_map(|t| {
        let r = LieType::parse(t).unwrap().rank;
        (Just(t.to_string()), prop::collection::vec(0i64..3, r), prop::collection::vec(0i64..3, r))
    })
}

pub fn tensor_props(t: &str, a: &[i64], b: &[i64]) -> Check {
    let rs = RootSystem::new(LieType::parse(t).map_err(|e| e.to_string())?);
    let (x, y) = (Weight(a.to_vec()), Weight(b.to_vec()));
    let xy = rs.tensor_chi(&x, &y).map_err(|e| e.to_string())?;
    let yx = rs.tensor_chi(&y, &x).map_err(|e| e.to_string())?;
    ensure(xy == yx, || format!("{t}: chi{x} chi{y} not commutative"))?;
    ensure(xy.is_nonnegative(), || format!("{t}: negative multiplicity in chi{x} chi{y}"))?;
    ensure(rs.char_dim(&xy) == rs.weyl_dim(&x) * rs.weyl_dim(&y), || format!("{t}: dimension of chi{x} chi{y}"))
}

/// Every right descent gives the same KL element, for all cell elements and
/// everything up to the cell's length.
pub fn kl_descent_independence(l: i64) -> Check {
    let aw = AffineWeyl::new(LieType::g2(), l).map_err(|e| e.to_string())?;
    let cell = aw.enumerate_cell_subregular().map_err(|e| e.to_string())?;
    let maxlen = cell.vertices.iter().map(|v| v.length).max().unwrap_or(0);
    let mut kl = KlEngine::new(aw.clone());
    let mut elems: Vec<_> = cell.vertices.iter().map(|v| v.element.clone()).collect();
    elems.extend(aw.enumerate_w0(maxlen).into_iter().map(|r| r.element));
    for e in elems {
        let id = kl.id_of(&e);
        let base = kl.kl_basis(id);
        for s in aw.right_descents(&e) {
            let via = kl.kl_basis_via(id, s).map_err(|e| e.to_string())?;
            ensure(via == base, || format!("descent {s} changes the KL element of {:?}", aw.reduced_word(&e)))?;
        }
    }
    Ok(())
}

pub fn fusion_commutativity(fm: &FusionModel) -> Check {
    let bad = fm.commutation_failures();
    ensure(bad.is_empty(), || format!("{} non-commuting pairs, first {:?}", bad.len(), bad.first()))
}

pub fn twist_orbit_constancy(fm: &FusionModel) -> Check {
    for (canon, ws) in orbit_classes(&fm.aw, &fm.weights) {
        let t: Vec<i64> = ws.iter().map(|w| fm.twist_exponent(w)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        ensure(t.iter().all(|&x| x == t[0]), || format!("twists {t:?} vary on the orbit of {canon}"))?;
    }
    Ok(())
}

pub fn molien_props() -> Check {
    for g in SL2Subgroup::stored() {
        let sq: i64 = g.dims().iter().map(|d| d * d).sum();
        ensure(sq as usize == g.order(), || format!("{}: sum dim^2 = {sq}", g.kind))?;
        ensure(g.orthonormality_defect() < 1e-9, || format!("{}: table not orthonormal", g.kind))?;
        let s = molien_series(&g, 40).map_err(|e| e.to_string())?;
        ensure(s.coeffs[0] == 1 && s.coeffs.iter().all(|&c| c >= 0), || format!("{}: bad Molien coefficients", g.kind))?;
    }
    Ok(())
}
