use num_complex::Complex64;
use serde_json::json;

use super::{random_automorphism, random_involution, Check, Ctx};
use crate::bloch::AnalyticFunction;
use crate::disc::MobiusAutomorphism;
use crate::error::Result;
use crate::harness::corpus::unit_vector;
use crate::harness::VerificationReport;
use crate::operators::{
    gbp_from_reflection, gbp_quadratic_residual, idempotence_residual, involution_residual, BlochOperator,
    CompositionIsometry, StarIsometry,
};

pub(super) const CHECKS: &[(&str, Check)] = &[("gbp.reflections", reflections), ("gbp.falsification", falsification)];

/// The unimodular `λ ≠ 1` of the sweep: the nontrivial 8th roots of unity.
pub fn sweep_lambdas() -> Vec<Complex64> {
    (1..8).map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 8.0)).collect()
}

/// Isometric reflections `T^2 = I`, none equal to the identity.
pub(crate) fn random_reflections(ctx: &Ctx, tag: &str, n: usize) -> Result<Vec<BlochOperator>> {
    let mut rng = ctx.rng(tag);
    let s = &ctx.space;
    (0..n)
        .map(|k| {
            let sigma = random_involution(&mut rng, 0.6);
            Ok(if k % 4 == 3 {
                StarIsometry::new(s, s.random_reflection(&mut rng), s.random_reflection(&mut rng), sigma)?.into()
            } else {
                CompositionIsometry::new(s, s.random_reflection(&mut rng), sigma)?.into()
            })
        })
        .collect()
}

/// Isometries whose automorphism part is far from an involution.
pub(crate) fn random_non_reflections(ctx: &Ctx, tag: &str, n: usize) -> Result<Vec<BlochOperator>> {
    let mut rng = ctx.rng(tag);
    let s = &ctx.space;
    (0..n)
        .map(|k| {
            let sigma = loop {
                let m = random_automorphism(&mut rng, 0.6);
                if m.compose(&m).distance(&MobiusAutomorphism::identity()) > 0.1 {
                    break m;
                }
            };
            Ok(if k % 4 == 3 {
                StarIsometry::new(s, s.random_isometry(&mut rng), s.random_isometry(&mut rng), sigma)?.into()
            } else {
                CompositionIsometry::new(s, s.random_isometry(&mut rng), sigma)?.into()
            })
        })
        .collect()
}

/// Test functions on which `T` acts: the basis, plus constants for `B*`.
fn test_functions(ctx: &Ctx, t: &BlochOperator) -> Vec<AnalyticFunction> {
    let mut fns = ctx.basis();
    if matches!(t, BlochOperator::StarIsometry(_)) {
        let d = ctx.space.dim();
        fns.extend((0..d).map(|j| AnalyticFunction::constant(unit_vector(d, j))));
    }
    fns
}

fn reflections(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let mut ts = random_reflections(ctx, "gbp.reflections", 8)?;
    let mut params = json!({"reflections": ts.len()});
    if ctx.cfg.inject_non_reflection {
        // Bypasses the constructor check on purpose.
        let injected = random_non_reflections(ctx, "gbp.injected", 1)?;
        params["injected"] = json!(injected[0].descriptor());
        ts.extend(injected);
    }
    let tol = &ctx.cfg.tolerances;
    let minus = Complex64::new(-1.0, 0.0);
    let (mut involution, mut quadratic, mut idem): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut samples = 0;
    for t in &ts {
        let fns = test_functions(ctx, t);
        samples += fns.len();
        involution = involution.max(involution_residual(&ctx.space, t, &fns, &ctx.nodes)?);
        quadratic = quadratic.max(gbp_quadratic_residual(&ctx.space, t, minus, &fns, &ctx.nodes)?);
        if let Ok(p) = gbp_from_reflection(t.clone()) {
            idem = idem.max(idempotence_residual(&ctx.space, &p, &fns, &ctx.nodes)?);
        }
    }
    Ok(vec![
        ctx.report("gbp.involution", params.clone(), involution, tol.algebraic, samples),
        ctx.report("gbp.reflection_cell", params.clone(), quadratic, tol.algebraic, samples),
        ctx.report("gbp.idempotence", params, idem, tol.algebraic, samples),
    ])
}

fn falsification(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let refl = random_reflections(ctx, "gbp.falsification.reflections", 4)?;
    let others = random_non_reflections(ctx, "gbp.falsification", 20)?;
    let lambdas = sweep_lambdas();
    let floor = ctx.cfg.tolerances.falsification;
    let mut counterexamples = 0usize;
    let mut min_residual = f64::INFINITY;
    let mut cells = 0usize;
    for (t, is_reflection) in refl.iter().map(|t| (t, true)).chain(others.iter().map(|t| (t, false))) {
        let fns = test_functions(ctx, t);
        for &l in &lambdas {
            if is_reflection && (l + 1.0).norm() < 1e-12 {
                continue;
            }
            let r = gbp_quadratic_residual(&ctx.space, t, l, &fns, &ctx.nodes)?;
            min_residual = min_residual.min(r);
            counterexamples += usize::from(!(r > floor));
            cells += 1;
        }
    }
    let accepted = others.iter().filter(|t| gbp_from_reflection((*t).clone()).is_ok()).count();
    let params = json!({"cells": cells, "min_residual": min_residual, "floor": floor, "non_reflections": others.len()});
    Ok(vec![
        ctx.report("gbp.falsification", params, counterexamples as f64, 0.0, cells),
        ctx.report("gbp.rejects_non_reflections", json!({"non_reflections": others.len()}), accepted as f64, 0.0, others.len()),
    ])
}
