use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{random_automorphism, random_phase, random_point, Check, Ctx};
use crate::bloch::{bloch_norm_star, bloch_seminorm, AnalyticFunction};
use crate::error::Result;
use crate::harness::corpus::with_random_constant;
use crate::harness::VerificationReport;
use crate::operators::{adjoint_action_check, CompositionIsometry, StarIsometry, HERMITIAN_TIMES};
use crate::range_space::{exp_itv, random_vector, ELinearMap, RangeSpace};

pub(super) const CHECKS: &[(&str, Check)] = &[
    ("range.support_functional", support_functional),
    ("range.isometry_certificates", isometry_certificates),
    ("range.hermitian_crosscheck", hermitian_crosscheck),
    ("range.exp_group_law", exp_group_law),
    ("iso.norm_preservation", norm_preservation),
    ("iso.star_norm_preservation", star_norm_preservation),
    ("iso.adjoint_action", adjoint_action),
];

fn spaces(ctx: &Ctx) -> Result<Vec<RangeSpace>> {
    ctx.cfg.isometry_exponents.iter().map(|&p| RangeSpace::new(ctx.space.dim(), p)).collect()
}

fn p_tag(s: &RangeSpace) -> String {
    format!("p{}", s.p())
}

fn support_functional(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let name = "range.support_functional";
    let mut rng = ctx.rng(name);
    let n = 200;
    let mut worst: f64 = 0.0;
    for s in spaces(ctx)? {
        for _ in 0..n {
            let v = random_vector(s.dim(), &mut rng);
            let u = s.support_functional(&v)?;
            let attain = (crate::range_space::pairing(&u, &v) - Complex64::from(s.norm(&v)?)).norm();
            let unit = (s.dual_norm(&u)? - 1.0).abs();
            let scaled = (s.support_functional(&(&v * Complex64::from(2.5)))? - &u).norm();
            let phase = random_phase(&mut rng);
            let equivariant = (s.support_functional(&(&v * phase))? - &u * phase.conj()).norm();
            worst = worst.max(attain).max(unit).max(scaled).max(equivariant);
        }
    }
    Ok(vec![ctx.report(name, json!({"exponents": ctx.cfg.isometry_exponents}), worst, ctx.cfg.tolerances.algebraic, n)])
}

fn isometry_certificates(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let name = "range.isometry_certificates";
    let mut rng = ctx.rng(name);
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for s in spaces(ctx)? {
        for k in 0..20 {
            let m = s.random_isometry(&mut rng);
            let r = s.is_isometry(&m, 1000, k)?;
            worst = worst.max(r.max_distortion);
            samples += r.samples;
        }
    }
    Ok(vec![ctx.report(name, json!({"exponents": ctx.cfg.isometry_exponents, "maps_per_exponent": 20}), worst, ctx.cfg.tolerances.algebraic, samples)])
}

/// For `p = 2` the exponential test must agree with `M = M*`; for other `p`
/// with real diagonality.
fn hermitian_crosscheck(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let name = "range.hermitian_crosscheck";
    let mut rng = ctx.rng(name);
    let tol = ctx.cfg.tolerances.algebraic_loose;
    let mut disagreements = 0usize;
    let mut total = 0usize;
    for s in spaces(ctx)? {
        let d = s.dim();
        for k in 0..40 {
            let m = if k % 2 == 0 {
                s.random_hermitian(&mut rng)
            } else {
                // Generic perturbation of a hermitian.
                let h = s.random_hermitian(&mut rng);
                let g = nalgebra::DMatrix::from_fn(d, d, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
                ELinearMap::new(h.as_matrix() + g * Complex64::from(0.1))?
            };
            let structural = if s.p() == 2.0 {
                m.max_entry_distance(&m.adjoint()) < tol
            } else {
                let a = m.as_matrix();
                (0..d).all(|i| (0..d).all(|j| if i == j { a[(i, i)].im.abs() < tol } else { a[(i, j)].norm() < tol }))
            };
            let by_exp = s.is_hermitian(&m, &HERMITIAN_TIMES, 200, k)?.max_distortion <= tol;
            disagreements += usize::from(structural != by_exp);
            total += 1;
        }
    }
    Ok(vec![ctx.report(name, json!({"exponents": ctx.cfg.isometry_exponents}), disagreements as f64, 0.0, total)])
}

fn exp_group_law(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let name = "range.exp_group_law";
    let mut rng = ctx.rng(name);
    let ts = [-1.5, -0.4, 0.0, 0.3, 1.0, 2.0];
    let mut worst: f64 = 0.0;
    for s in spaces(ctx)? {
        for _ in 0..5 {
            let v = s.random_hermitian(&mut rng);
            for &t in &ts {
                let et = exp_itv(&v, t);
                let inv = et.inverse().expect("exponentials are invertible");
                worst = worst.max(exp_itv(&v, -t).max_entry_distance(&inv));
                for &u in &ts {
                    worst = worst.max(et.compose(&exp_itv(&v, u)).max_entry_distance(&exp_itv(&v, t + u)));
                }
            }
        }
    }
    Ok(vec![ctx.report(name, json!({"t": ts}), worst, ctx.cfg.tolerances.exponential, ts.len() * ts.len())])
}

struct Triple {
    op: CompositionIsometry,
    f: AnalyticFunction,
}

fn triples(ctx: &Ctx, s: &RangeSpace, tag: &str) -> Result<Vec<Triple>> {
    let mut rng = ctx.rng(tag);
    (0..ctx.cfg.isometry_samples)
        .map(|_| {
            let op = CompositionIsometry::new(s, s.random_isometry(&mut rng), random_automorphism(&mut rng, 0.6))?;
            let f = ctx.corpus[rng.random_range(0..ctx.corpus.len())].clone();
            Ok(Triple { op, f })
        })
        .collect()
}

fn norm_preservation(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for s in spaces(ctx)? {
        let tag = format!("iso.norm_preservation.{}", p_tag(&s));
        let ts = triples(ctx, &s, &tag)?;
        let results: Vec<(f64, f64)> = ts
            .par_iter()
            .map(|tr| {
                let tf = tr.op.apply(&tr.f)?;
                let a = bloch_seminorm(&s, &tf, &ctx.cfg.grid).value;
                let b = bloch_seminorm(&s, &tr.f, &ctx.cfg.grid).value;
                let back = tr.op.inverse()?.apply(&tf)?;
                let pointwise = ctx.nodes.iter().map(|&z| (back.eval_raw(z) - tr.f.eval_raw(z)).norm()).fold(0.0, f64::max);
                Ok(((a / b - 1.0).abs(), pointwise))
            })
            .collect::<Result<_>>()?;
        let rel = results.iter().map(|r| r.0).fold(0.0, f64::max);
        let round = results.iter().map(|r| r.1).fold(0.0, f64::max);
        let params = json!({"p": s.p(), "d": s.dim(), "grid": ctx.cfg.grid, "max_abs_a": 0.6});
        out.push(ctx.report(tag, params.clone(), rel, ctx.cfg.tolerances.norm, ts.len()));
        out.push(ctx.report(format!("iso.inverse_roundtrip.{}", p_tag(&s)), params, round, ctx.cfg.tolerances.algebraic_loose, ts.len() * ctx.nodes.len()));
    }
    Ok(out)
}

fn star_norm_preservation(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for s in spaces(ctx)? {
        let tag = format!("iso.star_norm_preservation.{}", p_tag(&s));
        let mut rng = ctx.rng(&tag);
        let cases = (0..ctx.cfg.isometry_samples)
            .map(|_| {
                let op = StarIsometry::new(&s, s.random_isometry(&mut rng), s.random_isometry(&mut rng), random_automorphism(&mut rng, 0.6))?;
                let f = with_random_constant(&s, &ctx.corpus[rng.random_range(0..ctx.corpus.len())], &mut rng)?;
                Ok((op, f))
            })
            .collect::<Result<Vec<_>>>()?;
        let results: Vec<(f64, f64)> = cases
            .par_iter()
            .map(|(op, f)| {
                let tf = op.apply(f)?;
                let a = bloch_norm_star(&s, &tf, &ctx.cfg.grid).value;
                let b = bloch_norm_star(&s, f, &ctx.cfg.grid).value;
                let back = op.inverse()?.apply(&tf)?;
                let pointwise = ctx.nodes.iter().map(|&z| (back.eval_raw(z) - f.eval_raw(z)).norm()).fold(0.0, f64::max);
                Ok(((a / b - 1.0).abs(), pointwise))
            })
            .collect::<Result<_>>()?;
        let rel = results.iter().map(|r| r.0).fold(0.0, f64::max);
        let round = results.iter().map(|r| r.1).fold(0.0, f64::max);
        let params = json!({"p": s.p(), "d": s.dim(), "grid": ctx.cfg.grid});
        out.push(ctx.report(tag, params.clone(), rel, ctx.cfg.tolerances.norm, cases.len()));
        out.push(ctx.report(format!("iso.star_inverse_roundtrip.{}", p_tag(&s)), params, round, ctx.cfg.tolerances.algebraic_loose, cases.len() * ctx.nodes.len()));
    }
    Ok(out)
}

fn adjoint_action(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let name = "iso.adjoint_action";
    let mut rng = ctx.rng(name);
    let n = 1000;
    let spaces = spaces(ctx)?;
    let (mut residual, mut kappa): (f64, f64) = (0.0, 0.0);
    for k in 0..n {
        let s = &spaces[k % spaces.len()];
        let op = CompositionIsometry::new(s, s.random_isometry(&mut rng), random_automorphism(&mut rng, 0.8))?;
        let u = s.support_functional(&random_vector(s.dim(), &mut rng))?;
        let f = &ctx.corpus[rng.random_range(0..ctx.corpus.len())];
        let r = adjoint_action_check(s, &op, &u, random_point(&mut rng, 0.95), f)?;
        residual = residual.max(r.residual);
        kappa = kappa.max(r.kappa_defect);
    }
    let params = json!({"exponents": ctx.cfg.isometry_exponents, "max_abs_a": 0.8, "max_abs_z": 0.95});
    Ok(vec![
        ctx.report(name, params.clone(), residual, ctx.cfg.tolerances.algebraic_loose, n),
        ctx.report("iso.adjoint_kappa", params, kappa, ctx.cfg.tolerances.algebraic, n),
    ])
}
