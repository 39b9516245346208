use num_complex::Complex64;
use serde_json::json;

use super::group::all_flows;
use super::{non_increasing_steps, observed_order, sample_flows, Check, Ctx};
use crate::bloch::AnalyticFunction;
use crate::disc::{AutomorphismFlow, DiscPoint};
use crate::error::Result;
use crate::harness::corpus::{random_polynomial, unit_vector, with_random_constant};
use crate::harness::VerificationReport;
use crate::operators::sampling::{sampled_norm, sup_on};
use crate::operators::{
    generator_consistency, hermitian_generator_apply, star_generator_apply, star_generator_consistency,
    unboundedness_probe, HermitianGenerator, IsometryGroup, StarGenerator, StarGroup,
};
use crate::range_space::{exp_itv, ELinearMap, VectorValue};

pub(super) const CHECKS: &[(&str, Check)] = &[
    ("generator.order", order),
    ("generator.magnitude", magnitude),
    ("generator.identity_flow", identity_flow),
    ("generator.diagonal_group", diagonal_group),
    ("generator.elliptic_monomials", elliptic_monomials),
    ("generator.unboundedness", unboundedness),
    ("generator.star", star),
];

/// Halving sequence of times for first-order residuals.
pub const ORDER_TIMES: [f64; 5] = [1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4];

pub(crate) fn diagonal(d: usize) -> ELinearMap {
    let xs: Vec<Complex64> = (1..=d).map(|k| Complex64::from(k as f64)).collect();
    ELinearMap::diagonal(&xs)
}

fn spread_vector(d: usize) -> VectorValue {
    VectorValue::from_fn(d, |i, _| Complex64::new(1.0, 0.5 * i as f64) / (d as f64).sqrt())
}

fn order(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let mut rng = ctx.rng("generator.order");
    let d = ctx.space.dim();
    let fns = [
        AnalyticFunction::monomial(1, unit_vector(d, 0)),
        AnalyticFunction::monomial(2, spread_vector(d)),
        random_polynomial(&ctx.space, ctx.cfg.basis_degree, &mut rng),
    ];
    let mut out = Vec::new();
    for flow in all_flows() {
        let g = IsometryGroup::new(&ctx.space, ctx.space.random_hermitian(&mut rng), flow)?;
        let mut min_order = f64::INFINITY;
        let mut table = Vec::new();
        for f in &fns {
            let r = ORDER_TIMES.iter().map(|&t| generator_consistency(&ctx.space, &g, f, t, &ctx.nodes)).collect::<Result<Vec<_>>>()?;
            min_order = min_order.min(observed_order(&r));
            table.push(r);
        }
        out.push(order_report(ctx, format!("generator.order.{}", flow.name()), json!({"flow": flow, "t": ORDER_TIMES, "residuals": table}), min_order, fns.len()));
    }
    Ok(out)
}

/// Passes exactly when the observed order reaches `min_order`.
fn order_report(ctx: &Ctx, name: String, mut params: serde_json::Value, order: f64, samples: usize) -> VerificationReport {
    params["observed_order"] = json!(order);
    let min = ctx.cfg.tolerances.min_order;
    ctx.report(name, params, (1.0 - order).max(0.0), 1.0 - min, samples * ORDER_TIMES.len())
}

fn magnitude(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let d = ctx.space.dim();
    let flow = sample_flows()[0];
    let g = IsometryGroup::new(&ctx.space, diagonal(d), flow)?;
    let f = AnalyticFunction::monomial(2, spread_vector(d));
    let t = 1e-3;
    let r = generator_consistency(&ctx.space, &g, &f, t, &ctx.nodes)?;
    let fnorm = sampled_norm(&ctx.space, &f, &ctx.nodes);
    Ok(vec![ctx.report("generator.magnitude", json!({"flow": flow, "t": t, "f_norm": fnorm}), r, 1e-2 * fnorm, 1)])
}

fn identity_flow(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let mut rng = ctx.rng("generator.identity_flow");
    let gen = HermitianGenerator::new(&ctx.space, ctx.space.random_hermitian(&mut rng), AutomorphismFlow::identity())?;
    let mut worst: f64 = 0.0;
    for f in &ctx.corpus {
        worst = worst.max(sup_on(&ctx.space, &ctx.nodes, |z| {
            hermitian_generator_apply(&gen, f, DiscPoint::new(z).expect("nodes are interior")) - gen.v().apply(&f.eval_raw(z))
        }));
    }
    Ok(vec![ctx.report("generator.identity_flow", json!({"V": gen.v()}), worst, ctx.cfg.tolerances.algebraic, ctx.corpus.len() * ctx.nodes.len())])
}

fn diagonal_group(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let d = ctx.space.dim();
    let g = IsometryGroup::new(&ctx.space, diagonal(d), AutomorphismFlow::identity())?;
    let gen = g.generator();
    let t = 0.7;
    let tt = g.at(t);
    let (mut gen_err, mut group_err): (f64, f64) = (0.0, 0.0);
    let mut min_order = f64::INFINITY;
    for f in ctx.corpus.iter().chain(ctx.basis().iter()) {
        gen_err = gen_err.max(sup_on(&ctx.space, &ctx.nodes, |z| {
            let fz = f.eval_raw(z);
            let want = VectorValue::from_fn(d, |i, _| fz[i] * (i + 1) as f64);
            hermitian_generator_apply(&gen, f, DiscPoint::new(z).expect("interior")) - want
        }));
        let tf = tt.apply(f)?;
        group_err = group_err.max(sup_on(&ctx.space, &ctx.nodes, |z| {
            let fz = f.eval_raw(z);
            let want = VectorValue::from_fn(d, |i, _| fz[i] * Complex64::from_polar(1.0, -t * (i + 1) as f64));
            tf.eval_raw(z) - want
        }));
    }
    for f in ctx.basis().iter().take(2 * d) {
        let r = ORDER_TIMES.iter().map(|&t| generator_consistency(&ctx.space, &g, f, t, &ctx.nodes)).collect::<Result<Vec<_>>>()?;
        min_order = min_order.min(observed_order(&r));
    }
    let params = json!({"V": "diag(1..d)", "t": t});
    Ok(vec![
        ctx.report("generator.diagonal_group.generator", params.clone(), gen_err, ctx.cfg.tolerances.algebraic, ctx.corpus.len()),
        ctx.report("generator.diagonal_group.group", params.clone(), group_err, ctx.cfg.tolerances.algebraic, ctx.corpus.len()),
        order_report(ctx, "generator.diagonal_group.order".into(), params, min_order, 2 * d),
    ])
}

fn elliptic_monomials(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let mut rng = ctx.rng("generator.elliptic_monomials");
    let c = 1.3;
    let v_map = ctx.space.random_hermitian(&mut rng);
    let gen = HermitianGenerator::new(&ctx.space, v_map.clone(), AutomorphismFlow::elliptic(c, Complex64::new(0.0, 0.0))?)?;
    let v = spread_vector(ctx.space.dim());
    let mut worst: f64 = 0.0;
    for n in 1..=ctx.cfg.basis_degree {
        let f = AnalyticFunction::monomial(n, v.clone());
        worst = worst.max(sup_on(&ctx.space, &ctx.nodes, |z| {
            let zn = z.powu(n as u32);
            let want = v_map.apply(&v) * zn - &v * (zn * c * n as f64);
            hermitian_generator_apply(&gen, &f, DiscPoint::new(z).expect("interior")) - want
        }));
    }
    Ok(vec![ctx.report("generator.elliptic_monomials", json!({"c": c}), worst, ctx.cfg.tolerances.algebraic, ctx.cfg.basis_degree)])
}

pub const PROBE_DEGREE: usize = 50;

fn unboundedness(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let d = ctx.space.dim();
    let v = unit_vector(d, 0);
    let grid = &ctx.cfg.grid;
    let rot = HermitianGenerator::new(&ctx.space, ELinearMap::zeros(d), AutomorphismFlow::elliptic(1.0, Complex64::new(0.0, 0.0))?)?;
    let grow = unboundedness_probe(&ctx.space, &rot, &v, PROBE_DEGREE, grid)?;
    let still = HermitianGenerator::new(&ctx.space, diagonal(d), AutomorphismFlow::identity())?;
    let flat = unboundedness_probe(&ctx.space, &still, &v, PROBE_DEGREE, grid)?;
    // ||V z^n v||_{B0} = ||V v|| sup_r n r^{n-1}(1 - r^2) <= ||V v||.
    let bound = ctx.space.norm(&still.v().apply(&v))?;
    let head: f64 = flat[..10].iter().sum::<f64>() / 10.0;
    let tail: f64 = flat[PROBE_DEGREE - 10..].iter().sum::<f64>() / 10.0;
    let excess = flat.iter().map(|x| (x - bound).max(0.0)).fold(0.0, f64::max) + (tail - head).max(0.0);
    let tol = &ctx.cfg.tolerances;
    Ok(vec![
        ctx.report("generator.unboundedness.elliptic", json!({"norms": grow}), non_increasing_steps(&grow[1..]) as f64, 0.0, PROBE_DEGREE),
        ctx.report("generator.unboundedness.first", json!({"norm": grow[0]}), (grow[0] - 1.0).abs(), tol.norm, 1),
        ctx.report("generator.unboundedness.identity", json!({"norms": flat, "bound": bound}), excess, tol.norm, PROBE_DEGREE),
    ])
}

fn star(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let mut rng = ctx.rng("generator.star");
    let d = ctx.space.dim();
    let tol = &ctx.cfg.tolerances;
    let mut out = Vec::new();

    let base = random_polynomial(&ctx.space, ctx.cfg.basis_degree, &mut rng);
    let f = with_random_constant(&ctx.space, &base, &mut rng)?;
    for flow in all_flows() {
        let g = StarGroup::new(&ctx.space, ctx.space.random_hermitian(&mut rng), ctx.space.random_hermitian(&mut rng), flow)?;
        let r = ORDER_TIMES.iter().map(|&t| star_generator_consistency(&ctx.space, &g, &f, t, &ctx.nodes)).collect::<Result<Vec<_>>>()?;
        out.push(order_report(ctx, format!("generator.star_order.{}", flow.name()), json!({"flow": flow, "residuals": r}), observed_order(&r), 1));
    }

    // Constants: A c = U c and T_t c = exp(-itU) c.
    let u = ctx.space.random_hermitian(&mut rng);
    let flow = sample_flows()[1];
    let g = StarGroup::new(&ctx.space, u.clone(), ctx.space.random_hermitian(&mut rng), flow)?;
    let c = crate::range_space::random_vector(d, &mut rng);
    let cf = AnalyticFunction::constant(c.clone());
    let gen = g.generator();
    let t = 0.4;
    let tc = g.at(t).apply(&cf)?;
    let et = exp_itv(&u, t).apply(&c);
    let constant_err = sup_on(&ctx.space, &ctx.nodes, |z| {
        star_generator_apply(&gen, &cf, DiscPoint::new(z).expect("interior")) - u.apply(&c)
    })
    .max(sup_on(&ctx.space, &ctx.nodes, |z| tc.eval_raw(z) - &et));
    out.push(ctx.report("generator.star_constants", json!({"flow": flow, "t": t}), constant_err, tol.algebraic, ctx.nodes.len()));

    // U = V, identity flow, f(0) = 0: the star generator is the B0 one.
    let v = ctx.space.random_hermitian(&mut rng);
    let sg = StarGenerator::new(&ctx.space, v.clone(), v.clone(), AutomorphismFlow::identity())?;
    let bg = HermitianGenerator::new(&ctx.space, v, AutomorphismFlow::identity())?;
    let mut worst: f64 = 0.0;
    for f in &ctx.corpus {
        worst = worst.max(sup_on(&ctx.space, &ctx.nodes, |z| {
            let z = DiscPoint::new(z).expect("interior");
            star_generator_apply(&sg, f, z) - hermitian_generator_apply(&bg, f, z)
        }));
    }
    out.push(ctx.report("generator.star_reduces", json!({}), worst, tol.algebraic, ctx.corpus.len()));
    Ok(out)
}
