use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use super::{non_decreasing_steps, sample_flows, Check, Ctx};
use crate::bloch::AnalyticFunction;
use crate::disc::AutomorphismFlow;
use crate::error::Result;
use crate::harness::VerificationReport;
use crate::operators::sampling::sampled_distance;
use crate::operators::IsometryGroup;
use crate::range_space::VectorValue;

pub(super) const CHECKS: &[(&str, Check)] = &[
    ("group.operator_law", operator_law),
    ("group.strong_continuity", strong_continuity),
];

pub(crate) fn all_flows() -> Vec<AutomorphismFlow> {
    let mut v = vec![AutomorphismFlow::identity()];
    v.extend(sample_flows());
    v
}

fn groups(ctx: &Ctx, tag: &str) -> Result<Vec<IsometryGroup>> {
    let mut rng = ctx.rng(tag);
    all_flows().into_iter().map(|flow| IsometryGroup::new(&ctx.space, ctx.space.random_hermitian(&mut rng), flow)).collect()
}

const TIMES: [f64; 4] = [-1.0, -0.3, 0.3, 1.0];

fn operator_law(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let basis = ctx.basis();
    let mut out = Vec::new();
    for g in groups(ctx, "group.operator_law")? {
        let cells: Vec<(f64, f64)> = TIMES.iter().flat_map(|&s| TIMES.iter().map(move |&t| (s, t))).collect();
        let worst = cells
            .par_iter()
            .map(|&(s, t)| {
                let (ts, tt, tst) = (g.at(s), g.at(t), g.at(s + t));
                let mut w: f64 = 0.0;
                for f in &basis {
                    let lhs = ts.apply(&tt.apply(f)?)?;
                    w = w.max(sampled_distance(&ctx.space, &lhs, &tst.apply(f)?, &ctx.nodes));
                }
                Ok(w)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let mut at_zero: f64 = 0.0;
        for f in &basis {
            at_zero = at_zero.max(sampled_distance(&ctx.space, &g.at(0.0).apply(f)?, f, &ctx.nodes));
        }
        let name = g.flow().name();
        let params = json!({"flow": g.flow(), "V": g.v(), "s_t": TIMES});
        out.push(ctx.report(format!("group.operator_law.{name}"), params.clone(), worst, ctx.cfg.tolerances.operator_group_law, cells.len() * basis.len()));
        out.push(ctx.report(format!("group.identity_at_zero.{name}"), params, at_zero, ctx.cfg.tolerances.algebraic, basis.len()));
    }
    Ok(out)
}

fn strong_continuity(ctx: &Ctx) -> Result<Vec<VerificationReport>> {
    let d = ctx.space.dim();
    let v = VectorValue::from_fn(d, |i, _| Complex64::new(1.0, i as f64) / (d as f64).sqrt());
    let f = AnalyticFunction::monomial(2, v);
    let ts: Vec<f64> = (0..7).map(|k| 0.1 * 0.5f64.powi(k)).collect();
    let mut out = Vec::new();
    for g in groups(ctx, "group.strong_continuity")? {
        let dist = ts
            .iter()
            .map(|&t| Ok(sampled_distance(&ctx.space, &g.at(t).apply(&f)?, &f, &ctx.nodes)))
            .collect::<Result<Vec<f64>>>()?;
        out.push(ctx.report(
            format!("group.strong_continuity.{}", g.flow().name()),
            json!({"flow": g.flow(), "t": ts, "distance": dist}),
            non_decreasing_steps(&dist) as f64,
            0.0,
            ts.len(),
        ));
    }
    Ok(out)
}
