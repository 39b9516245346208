use num_complex::Complex64;
use serde_json::json;

use super::{random_automorphism, random_point, Check, Ctx};
use crate::bloch::{
    bloch_norm_star, bloch_seminorm, little_bloch_check, weighted_derivative, AnalyticFunction, ExtremeFunctional,
    GridParams,
};
use crate::error::Result;
use crate::harness::corpus::{random_polynomial, with_random_constant, witness_functions, WITNESS_CENTERS};
use crate::harness::VerificationReport;
use crate::operators::CompositionIsometry;
use crate::range_space::random_vector;

pub(super) const CHECKS: &[(&str, Check)] = &[
    ("bloch.derivative_consistency", derivative_consistency),
    ("bloch.witness_norm", witness_norm),
    ("bloch.known_seminorms", known_seminorms),
    ("bloch.l1_decomposition", l1_decomposition),
    ("bloch.seminorm_soundness", seminorm_soundness),
    ("bloch.functional_bound", functional_bound),
    ("bloch.little_bloch_decay", little_bloch_decay),
    ("bloch.grid_convergence", grid_convergence),
];

fn derivative_consistency(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let name = "bloch.derivative_consistency";
    let mut rng = ctx.rng(name);
    // Every variant: the corpus, Möbius compositions and linear combinations.
    let mut fns = ctx.corpus.clone();
    for f in ctx.corpus.iter().take(4) {
        let op = CompositionIsometry::new(&ctx.space, ctx.space.random_isometry(&mut rng), random_automorphism(&mut rng, 0.6))?;
        fns.push(op.apply(f)?);
        fns.push(AnalyticFunction::composed(f.clone(), random_automorphism(&mut rng, 0.6)));
    }
    let h = 1e-5;
    let n = 1000;
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let f = &fns[k % fns.len()];
        let z = random_point(&mut rng, 0.9).value();
        let dh = Complex64::from(h);
        let cd = (f.eval_raw(z + dh) - f.eval_raw(z - dh)) / Complex64::from(2.0 * h);
        worst = worst.max(ctx.space.norm(&(f.deriv_raw(z) - cd))?);
    }
    Ok(vec![ctx.report(name, json!({"h": h, "functions": fns.len()}), worst, ctx.cfg.tolerances.norm, n)])
}

fn witness_norm(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let tol = &ctx.cfg.tolerances;
    let (mut value_err, mut argmax_err): (f64, f64) = (0.0, 0.0);
    let mut values = Vec::new();
    for (f, &(re, im)) in witness_functions(&ctx.space).iter().zip(WITNESS_CENTERS.iter()) {
        let est = bloch_seminorm(&ctx.space, f, &ctx.cfg.grid);
        value_err = value_err.max((est.value - 1.0).abs());
        argmax_err = argmax_err.max((est.argmax.value() - Complex64::new(re, im)).norm());
        values.push(json!({"z0": [re, im], "value": est.value, "argmax": est.argmax.value().to_string(), "uncertainty": est.uncertainty}));
    }
    let params = json!({"grid": ctx.cfg.grid, "estimates": values});
    let n = WITNESS_CENTERS.len();
    Ok(vec![
        ctx.report("bloch.witness_norm", params.clone(), value_err, tol.norm, n),
        ctx.report("bloch.witness_argmax", params, argmax_err, tol.argmax, n),
    ])
}

fn known_seminorms(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let d = ctx.space.dim();
    let v = crate::harness::corpus::unit_vector(d, d - 1);
    let cases = [
        (AnalyticFunction::monomial(1, v.clone()), 1.0),
        (AnalyticFunction::monomial(2, &v * Complex64::from(0.5)), 2.0 / (3.0 * 3f64.sqrt())),
        (AnalyticFunction::polynomial(vec![v.clone(), v.clone()])?, 1.0),
    ];
    let mut worst: f64 = 0.0;
    for (f, want) in &cases {
        worst = worst.max((bloch_seminorm(&ctx.space, f, &ctx.cfg.grid).value - want).abs());
    }
    // Star norm of c + z v is ||c|| + 1.
    let star = bloch_norm_star(&ctx.space, &cases[2].0, &ctx.cfg.grid).value;
    worst = worst.max((star - 2.0).abs());
    Ok(vec![ctx.report("bloch.known_seminorms", json!({"cases": ["z v", "z^2 v / 2", "v + z v"]}), worst, ctx.cfg.tolerances.norm, 4)])
}

fn l1_decomposition(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let name = "bloch.l1_decomposition";
    let mut rng = ctx.rng(name);
    let mut worst: f64 = 0.0;
    for f in &ctx.corpus {
        let g = with_random_constant(&ctx.space, f, &mut rng)?;
        let star = bloch_norm_star(&ctx.space, &g, &ctx.cfg.grid).value;
        let at0 = ctx.space.norm(&g.eval_raw(Complex64::new(0.0, 0.0)))?;
        let semi = bloch_seminorm(&ctx.space, &AnalyticFunction::minus_value_at_zero(g), &ctx.cfg.grid).value;
        worst = worst.max((star - (at0 + semi)).abs());
    }
    Ok(vec![ctx.report(name, json!({"corpus": ctx.corpus.len()}), worst, ctx.cfg.tolerances.algebraic, ctx.corpus.len())])
}

fn seminorm_soundness(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let mut worst: f64 = 0.0;
    for f in &ctx.corpus {
        let est = bloch_seminorm(&ctx.space, f, &ctx.cfg.grid);
        let at = weighted_derivative(&ctx.space, f, est.argmax.value());
        worst = worst.max((est.value - est.uncertainty - at).max(0.0));
    }
    Ok(vec![ctx.report("bloch.seminorm_soundness", json!({"corpus": ctx.corpus.len()}), worst, ctx.cfg.tolerances.algebraic, ctx.corpus.len())])
}

fn functional_bound(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let name = "bloch.functional_bound";
    let mut rng = ctx.rng(name);
    let n = 100;
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let f = random_polynomial(&ctx.space, ctx.cfg.basis_degree, &mut rng);
        let xi = ExtremeFunctional::supporting(&ctx.space, &random_vector(ctx.space.dim(), &mut rng), random_point(&mut rng, 0.95))?;
        let est = bloch_seminorm(&ctx.space, &f, &ctx.cfg.grid);
        worst = worst.max((xi.apply(&f).norm() - est.value - est.uncertainty).max(0.0));
    }
    Ok(vec![ctx.report(name, json!({"polynomials": n}), worst, ctx.cfg.tolerances.norm, n)])
}

pub(crate) const DECAY_RADII: [f64; 6] = [0.9, 0.99, 0.999, 0.9999, 0.99999, 0.999999];

fn little_bloch_decay(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let mut worst: f64 = 0.0;
    for f in &ctx.corpus {
        let rings = little_bloch_check(&ctx.space, f, &DECAY_RADII, ctx.cfg.grid.n_angles);
        // Outermost ring plus any growth along the tail.
        let growth: f64 = rings.windows(2).skip(1).map(|w| (w[1].value - w[0].value).max(0.0)).sum();
        worst = worst.max(rings.last().map_or(0.0, |r| r.value) + growth);
    }
    Ok(vec![ctx.report(
        "bloch.little_bloch_decay",
        json!({"radii": DECAY_RADII}),
        worst,
        ctx.cfg.tolerances.decay_tail,
        ctx.corpus.len() * DECAY_RADII.len(),
    )])
}

fn grid_convergence(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let g = ctx.cfg.grid;
    let fine = GridParams { n_radii: 2 * g.n_radii, n_angles: 2 * g.n_angles, ..g };
    let mut worst: f64 = 0.0;
    for f in witness_functions(&ctx.space) {
        let a = bloch_seminorm(&ctx.space, &f, &g).value;
        let b = bloch_seminorm(&ctx.space, &f, &fine).value;
        worst = worst.max((a - b).abs());
    }
    Ok(vec![ctx.report("bloch.grid_convergence", json!({"grid": g, "fine": fine}), worst, ctx.cfg.tolerances.norm, WITNESS_CENTERS.len())])
}
