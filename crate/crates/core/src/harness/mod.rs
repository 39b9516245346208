//! Configuration, seeded corpora, suites of checks and their JSON-lines
//! reports.

mod config;
pub mod corpus;
mod report;
mod suites;
mod trace;
pub mod verify;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use config::{SuiteConfig, Tolerances, SEED_ENV};
pub use corpus::generate_test_functions;
pub use report::{SuiteSummary, VerificationReport};
pub use suites::{sample_flows, sweep_lambdas, SUITES};
pub use trace::{emit_flow_trace, linspace, TRACE_HEADER};

use crate::error::{Error, Result};
use suites::Ctx;

/// Runs one suite (or `all`) and returns its reports sorted by name.
pub fn run_suite(config: &SuiteConfig, suite: &str) -> Result<Vec<VerificationReport>> {
    config.validate()?;
    let checks: Vec<_> = if suite == "all" {
        SUITES.iter().flat_map(|s| suites::checks(s).expect("listed suite").iter()).collect()
    } else {
        suites::checks(suite).ok_or_else(|| Error::UnknownSuite(suite.to_string()))?.iter().collect()
    };
    let ctx = Ctx::new(config)?;
    let batches = checks
        .par_iter()
        .map(|(_, check)| {
            let start = Instant::now();
            let mut reports = check(&ctx)?;
            if config.record_timing {
                let ms = start.elapsed().as_millis() as u64;
                reports.iter_mut().for_each(|r| r.wall_time_ms = ms);
            }
            Ok(reports)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut reports: Vec<VerificationReport> = batches.into_iter().flatten().collect();
    reports.sort_by(|a, b| a.check_name.cmp(&b.check_name));
    Ok(reports)
}

/// Which checks exercise which module-level invariant.
pub const COVERAGE: &[(&str, &str, &[&str])] = &[
    ("disc", "weight identity", &["disc.weight_identity"]),
    ("disc", "inverse closed form", &["disc.inverse"]),
    ("disc", "flow group law", &["disc.group_law"]),
    ("disc", "invariant polynomial is the flow velocity", &["disc.invariant_polynomial", "disc.fd_order"]),
    ("disc", "flow continuity at t = 0", &["disc.continuity"]),
    ("disc", "flow members keep their type", &["disc.classify"]),
    ("range_space", "support functional homogeneity and phase equivariance", &["range.support_functional"]),
    ("range_space", "isometry certificates", &["range.isometry_certificates"]),
    ("range_space", "exponential test agrees with structure", &["range.hermitian_crosscheck"]),
    ("range_space", "exponential group law and inverse", &["range.exp_group_law"]),
    ("bloch", "derivative consistency", &["bloch.derivative_consistency"]),
    ("bloch", "little Bloch decay", &["bloch.little_bloch_decay"]),
    ("bloch", "seminorm lower-bound soundness", &["bloch.seminorm_soundness"]),
    ("bloch", "l1-sum identity", &["bloch.l1_decomposition"]),
    ("bloch", "grid convergence", &["bloch.grid_convergence"]),
    ("bloch", "witness norm and argmax", &["bloch.witness_norm", "bloch.witness_argmax", "bloch.known_seminorms"]),
    ("bloch", "extreme functionals are dominated by the seminorm", &["bloch.functional_bound"]),
    ("operators", "isometry", &["iso.norm_preservation", "iso.star_norm_preservation"]),
    ("operators", "surjectivity witness", &["iso.inverse_roundtrip", "iso.star_inverse_roundtrip"]),
    ("operators", "adjoint action", &["iso.adjoint_action", "iso.adjoint_kappa"]),
    ("operators", "operator group laws", &["group.operator_law", "group.identity_at_zero"]),
    ("operators", "strong continuity", &["group.strong_continuity"]),
    ("operators", "generator/flow consistency", &["generator.order", "generator.star_order", "generator.magnitude"]),
    ("operators", "bounded generators", &["generator.identity_flow", "generator.diagonal_group", "generator.elliptic_monomials"]),
    ("operators", "unbounded generators", &["generator.unboundedness"]),
    ("operators", "star-space generators", &["generator.star_constants", "generator.star_reduces"]),
    ("operators", "bi-circular projection dichotomy", &["gbp.falsification", "gbp.reflection_cell", "gbp.rejects_non_reflections"]),
    ("operators", "idempotence", &["gbp.idempotence", "gbp.involution"]),
];

fn matches_prefix(name: &str, prefix: &str) -> bool {
    name.strip_prefix(prefix).is_some_and(|rest| rest.is_empty() || rest.starts_with('.'))
}

#[derive(Serialize)]
struct CoverageEntry<'a> {
    module: &'a str,
    invariant: &'a str,
    checks: Vec<&'a str>,
}

#[derive(Serialize)]
struct Header<'a> {
    #[serde(rename = "type")]
    kind: &'static str,
    suite: &'a str,
    seed: u64,
    config: &'a SuiteConfig,
    coverage: Vec<CoverageEntry<'a>>,
}

/// Header line with the coverage map, one line per report, then the summary.
pub fn render_jsonl(config: &SuiteConfig, suite: &str, reports: &[VerificationReport]) -> Result<String> {
    let coverage = COVERAGE
        .iter()
        .map(|&(module, invariant, prefixes)| CoverageEntry {
            module,
            invariant,
            checks: reports
                .iter()
                .map(|r| r.check_name.as_str())
                .filter(|n| prefixes.iter().any(|p| matches_prefix(n, p)))
                .collect(),
        })
        .filter(|e| !e.checks.is_empty())
        .collect();
    let header = Header { kind: "coverage", suite, seed: config.seed, config, coverage };
    let mut out = serde_json::to_string(&header)?;
    out.push('\n');
    for r in reports {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    out.push_str(&serde_json::to_string(&SuiteSummary::of(suite, reports))?);
    out.push('\n');
    Ok(out)
}

/// One human-readable line per report.
pub fn render_text(reports: &[VerificationReport]) -> String {
    reports
        .iter()
        .map(|r| {
            format!(
                "[{}] {:<44} residual {:.3e} (tol {:.1e}, n = {})\n",
                if r.pass { "PASS" } else { "FAIL" },
                r.check_name,
                r.max_residual,
                r.tolerance,
                r.samples
            )
        })
        .collect()
}
