use num_complex::Complex64;
use serde_json::json;

use super::{non_decreasing_steps, random_automorphism, random_point, sample_flows, Check, Ctx};
use crate::disc::{classify_automorphism, AutomorphismFlow, AutomorphismType, FlowKind, MobiusAutomorphism};
use crate::error::Result;
use crate::harness::trace::linspace;
use crate::harness::VerificationReport;

pub(super) const CHECKS: &[(&str, Check)] = &[
    ("disc.weight_identity", weight_identity),
    ("disc.inverse", inverse),
    ("disc.group_law", group_law),
    ("disc.invariant_polynomial", invariant_polynomial),
    ("disc.classify", classify),
    ("disc.continuity", continuity),
];

fn weight_identity(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let name = "disc.weight_identity";
    let mut rng = ctx.rng(name);
    let n = 10_000;
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let m = random_automorphism(&mut rng, 0.9);
        let z = random_point(&mut rng, 0.99);
        worst = worst.max(m.weight_identity_residual(z));
    }
    let params = json!({"max_abs_a": 0.9, "max_abs_z": 0.99});
    Ok(vec![ctx.report(name, params, worst, ctx.cfg.tolerances.algebraic, n)])
}

fn inverse(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let name = "disc.inverse";
    let mut rng = ctx.rng(name);
    let (maps, points) = (10, 100);
    let mut worst: f64 = 0.0;
    for _ in 0..maps {
        let m = random_automorphism(&mut rng, 0.9);
        let inv = m.inverse();
        worst = worst.max(m.compose(&inv).distance(&MobiusAutomorphism::identity()));
        for _ in 0..points {
            let z = random_point(&mut rng, 0.99);
            worst = worst.max((inv.map(m.map(z.value())) - z.value()).norm());
        }
    }
    Ok(vec![ctx.report(name, json!({"maps": maps, "points_per_map": points}), worst, ctx.cfg.tolerances.algebraic, maps * points)])
}

fn group_law(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let ts = linspace(-2.0, 2.0, 9);
    Ok(sample_flows()
        .iter()
        .map(|flow| {
            let mut worst: f64 = 0.0;
            for &s in &ts {
                for &t in &ts {
                    worst = worst.max(flow.at(s + t).distance(&flow.at(s).compose(&flow.at(t))));
                }
            }
            let name = format!("disc.group_law.{}", flow.name());
            ctx.report(name, json!({"flow": flow, "s_t_grid": ts}), worst, ctx.cfg.tolerances.algebraic_loose, ts.len() * ts.len())
        })
        .collect())
}

/// Central-difference error `max_z |(φ_h - φ_{-h})(z)/2h - P(z)|`.
pub(crate) fn fd_error(flow: &AutomorphismFlow, zs: &[crate::disc::DiscPoint], h: f64) -> Result<f64> {
    let p = flow.invariant_polynomial();
    let mut worst: f64 = 0.0;
    for &z in zs {
        worst = worst.max((flow.generator_fd(z, h)? - p.eval(z.value())).norm());
    }
    Ok(worst)
}

pub(crate) const FD_STEPS: [f64; 4] = [1e-2, 5e-3, 2.5e-3, 1.25e-3];

fn invariant_polynomial(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let mut rng = ctx.rng("disc.invariant_polynomial");
    let zs: Vec<_> = (0..64).map(|_| random_point(&mut rng, 0.9)).collect();
    let tol = &ctx.cfg.tolerances;
    let mut out = Vec::new();
    for flow in sample_flows() {
        let err = fd_error(&flow, &zs, crate::tolerances::FD_STEP)?;
        out.push(ctx.report(
            format!("disc.invariant_polynomial.{}", flow.name()),
            json!({"flow": flow, "h": crate::tolerances::FD_STEP}),
            err,
            tol.finite_difference,
            zs.len(),
        ));
        let errs = FD_STEPS.iter().map(|&h| fd_error(&flow, &zs, h)).collect::<Result<Vec<_>>>()?;
        let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
        let dev = ratios.iter().map(|r| (r - 4.0).abs()).fold(0.0, f64::max);
        out.push(ctx.report(
            format!("disc.fd_order.{}", flow.name()),
            json!({"flow": flow, "h": FD_STEPS, "errors": errs, "ratios": ratios}),
            dev,
            tol.fd_ratio_band,
            zs.len() * FD_STEPS.len(),
        ));
    }
    Ok(out)
}

fn expected_fixed_points(flow: &AutomorphismFlow) -> (AutomorphismType, Vec<Complex64>) {
    match flow.kind() {
        FlowKind::Identity => (AutomorphismType::Identity, vec![]),
        FlowKind::Elliptic { tau, .. } => (AutomorphismType::Elliptic, vec![tau]),
        FlowKind::Hyperbolic { alpha, beta, .. } => (AutomorphismType::Hyperbolic, vec![alpha, beta]),
        FlowKind::Parabolic { alpha, .. } => (AutomorphismType::Parabolic, vec![alpha]),
    }
}

fn classify(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let ts = [-2.0, -0.5, 0.25, 1.0, 2.0];
    Ok(sample_flows()
        .iter()
        .map(|flow| {
            let (kind, expected) = expected_fixed_points(flow);
            let mut worst: f64 = 0.0;
            let mut margin = f64::INFINITY;
            for &t in &ts {
                let cl = classify_automorphism(&flow.at(t));
                margin = margin.min(cl.margin);
                if cl.kind != kind {
                    // A wrong type dominates any location error.
                    worst = worst.max(1.0);
                    continue;
                }
                for z in &expected {
                    let d = cl.fixed_points.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
                    worst = worst.max(d);
                }
            }
            ctx.report(
                format!("disc.classify.{}", flow.name()),
                json!({"flow": flow, "t": ts, "min_margin": margin}),
                worst,
                crate::tolerances::CLASSIFY_MARGIN,
                ts.len(),
            )
        })
        .collect())
}

fn continuity(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let mut rng = ctx.rng("disc.continuity");
    let zs: Vec<_> = (0..64).map(|_| random_point(&mut rng, 0.95)).collect();
    let ts: Vec<f64> = (0..10).map(|k| 0.1 * 0.5f64.powi(k)).collect();
    Ok(sample_flows()
        .iter()
        .map(|flow| {
            let sup: Vec<f64> = ts
                .iter()
                .map(|&t| {
                    let m = flow.at(t);
                    zs.iter().map(|z| (m.map(z.value()) - z.value()).norm()).fold(0.0, f64::max)
                })
                .collect();
            ctx.report(
                format!("disc.continuity.{}", flow.name()),
                json!({"flow": flow, "t": ts, "sup_displacement": sup}),
                non_decreasing_steps(&sup) as f64,
                0.0,
                zs.len() * ts.len(),
            )
        })
        .collect())
}
