use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bloch::GridParams;
use crate::error::{Error, Result};
use crate::range_space::{RangeSpace, SpaceDescriptor};
use crate::tolerances;

/// Environment variable that overrides the configured seed.
pub const SEED_ENV: &str = "BLOCH_LAB_SEED";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub algebraic: f64,
    pub algebraic_loose: f64,
    /// Operator-level group laws, which compose several exponentials.
    pub operator_group_law: f64,
    pub exponential: f64,
    pub norm: f64,
    pub falsification: f64,
    /// Central-difference error at `h = 1e-4`.
    pub finite_difference: f64,
    /// Allowed `|ratio - 4|` for the second-order stencil.
    pub fd_ratio_band: f64,
    /// Minimal observed convergence order of first-order residuals.
    pub min_order: f64,
    pub argmax: f64,
    /// Value of `max w` on the outermost ring of the decay schedule.
    pub decay_tail: f64,
    /// Per-check overrides keyed by check name.
    pub overrides: BTreeMap<String, f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebraic: tolerances::ALGEBRAIC,
            algebraic_loose: tolerances::ALGEBRAIC_LOOSE,
            operator_group_law: 1e-9,
            exponential: 1e-11,
            norm: tolerances::NORM,
            falsification: tolerances::FALSIFICATION,
            finite_difference: 1e-7,
            fd_ratio_band: 0.4,
            min_order: 0.9,
            argmax: 1e-3,
            decay_tail: 1e-4,
            overrides: BTreeMap::new(),
        }
    }
}

impl Tolerances {
    pub fn for_check(&self, name: &str, default: f64) -> f64 {
        self.overrides.get(name).copied().unwrap_or(default)
    }

    fn values(&self) -> impl Iterator<Item = (&str, f64)> {
        [
            ("algebraic", self.algebraic),
            ("algebraic_loose", self.algebraic_loose),
            ("operator_group_law", self.operator_group_law),
            ("exponential", self.exponential),
            ("norm", self.norm),
            ("falsification", self.falsification),
            ("finite_difference", self.finite_difference),
            ("fd_ratio_band", self.fd_ratio_band),
            ("min_order", self.min_order),
            ("argmax", self.argmax),
            ("decay_tail", self.decay_tail),
        ]
        .into_iter()
        .chain(self.overrides.iter().map(|(k, v)| (k.as_str(), *v)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub space: SpaceDescriptor,
    pub grid: GridParams,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// Highest monomial degree `K` of the basis `z^k e_j`.
    pub basis_degree: usize,
    /// Seeded random polynomials added to the corpus.
    pub random_polynomials: usize,
    /// Exponents used by the isometry suite.
    pub isometry_exponents: Vec<f64>,
    /// Random triples per exponent in the isometry suite.
    pub isometry_samples: usize,
    /// Fill `wall_time_ms`; off by default so reports are byte-identical.
    pub record_timing: bool,
    /// Adds a non-reflection isometry to the reflection checks of the gbp
    /// suite, which must then fail.
    pub inject_non_reflection: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            space: SpaceDescriptor { d: 3, p: 2.0 },
            grid: GridParams::default(),
            seed: 20240917,
            tolerances: Tolerances::default(),
            basis_degree: 6,
            random_polynomials: 8,
            isometry_exponents: vec![2.0, 3.0],
            isometry_samples: 100,
            record_timing: false,
            inject_non_reflection: false,
        }
    }
}

impl SuiteConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.range_space()?;
        if let Some((k, v)) = self.tolerances.values().find(|(_, v)| !(*v > 0.0)) {
            return Err(Error::Config(format!("tolerance `{k}` must be positive, got {v}")));
        }
        if self.basis_degree == 0 {
            return Err(Error::Config("basis_degree must be at least 1".into()));
        }
        if self.grid.n_radii < 2 || self.grid.n_angles < 3 {
            return Err(Error::Config("grid needs at least 2 radii and 3 angles".into()));
        }
        for &p in &self.isometry_exponents {
            RangeSpace::new(self.space.d, p)?;
        }
        Ok(())
    }

    pub fn range_space(&self) -> Result<RangeSpace> {
        RangeSpace::new(self.space.d, self.space.p)
    }

    /// Applies the `BLOCH_LAB_SEED` override if it is set.
    pub fn with_env_seed(mut self) -> Result<Self> {
        if let Ok(s) = std::env::var(SEED_ENV) {
            self.seed = s
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("{SEED_ENV}={s} is not an unsigned integer")))?;
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        SuiteConfig::default().validate().unwrap();
    }

    #[test]
    fn partial_json_fills_defaults() {
        let c = SuiteConfig::from_json(r#"{"space":{"d":2,"p":3.0},"seed":7,"tolerances":{"norm":1e-5}}"#).unwrap();
        assert_eq!(c.space.d, 2);
        assert_eq!(c.seed, 7);
        assert_eq!(c.tolerances.norm, 1e-5);
        assert_eq!(c.tolerances.algebraic, 1e-12);
        assert_eq!(c.basis_degree, 6);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(SuiteConfig::from_json(r#"{"tolerances":{"norm":0}}"#).is_err());
        assert!(SuiteConfig::from_json(r#"{"tolerances":{"overrides":{"disc.weight_identity":-1}}}"#).is_err());
        assert!(SuiteConfig::from_json(r#"{"space":{"d":2,"p":1.0}}"#).is_err());
        assert!(SuiteConfig::from_json(r#"{"colour":"blue"}"#).is_err());
        assert!(SuiteConfig::from_json("[1,2]").is_err());
    }
}
