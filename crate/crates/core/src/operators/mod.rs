//! Operators on Bloch functions: weighted-composition isometries, their
//! one-parameter groups and generators, and bi-circular projections.

mod gbp;
mod group;
mod isometry;
pub mod sampling;

use serde::{Deserialize, Serialize};

pub use gbp::{
    gbp_from_reflection, gbp_quadratic_residual, idempotence_residual, involution_residual, reflection_residual,
    GbProjection,
};
pub use group::{
    generator_consistency, group_at, hermitian_generator_apply, star_generator_apply, star_generator_consistency,
    star_group_at, unboundedness_probe, HermitianGenerator, IsometryGroup, StarGenerator, StarGroup, HERMITIAN_TIMES,
};
pub use isometry::{
    adjoint_action_check, apply_isometry_b0, apply_isometry_star, AdjointActionReport, CompositionIsometry,
    StarIsometry, CERTIFY_SAMPLES,
};

use crate::bloch::AnalyticFunction;
use crate::disc::{AutomorphismFlow, MobiusAutomorphism};
use crate::error::{Error, Result};
use crate::range_space::{ELinearMap, RangeSpace};

#[derive(Debug, Clone, PartialEq)]
pub enum BlochOperator {
    CompositionIsometryB0(CompositionIsometry),
    StarIsometry(StarIsometry),
    HermitianGenerator(HermitianGenerator),
    GBProjection(GbProjection),
}

impl BlochOperator {
    pub fn apply(&self, f: &AnalyticFunction) -> Result<AnalyticFunction> {
        match self {
            Self::CompositionIsometryB0(op) => op.apply(f),
            Self::StarIsometry(op) => op.apply(f),
            Self::HermitianGenerator(op) => op.apply(f),
            Self::GBProjection(op) => op.apply(f),
        }
    }

    pub fn is_isometry(&self) -> bool {
        matches!(self, Self::CompositionIsometryB0(_) | Self::StarIsometry(_))
    }

    /// Inverse of an isometry from the closed forms `S^{-1}`, `σ^{-1}`.
    pub fn inverse(&self) -> Result<Self> {
        match self {
            Self::CompositionIsometryB0(op) => op.inverse().map(Self::CompositionIsometryB0),
            Self::StarIsometry(op) => op.inverse().map(Self::StarIsometry),
            _ => Err(Error::Unsupported("only isometries are inverted".into())),
        }
    }

    pub fn from_descriptor(space: &RangeSpace, desc: OperatorDescriptor) -> Result<Self> {
        match desc {
            OperatorDescriptor::CompIso { s, sigma } => CompositionIsometry::new(space, s, sigma).map(Self::CompositionIsometryB0),
            OperatorDescriptor::StarIso { u, v, sigma } => StarIsometry::new(space, u, v, sigma).map(Self::StarIsometry),
            OperatorDescriptor::Group { v, flow } => HermitianGenerator::new(space, v, flow).map(Self::HermitianGenerator),
            OperatorDescriptor::Gbp { t } => {
                let t = Self::from_descriptor(space, *t)?;
                gbp_from_reflection(t).map(Self::GBProjection)
            }
        }
    }

    pub fn descriptor(&self) -> OperatorDescriptor {
        match self {
            Self::CompositionIsometryB0(op) => OperatorDescriptor::CompIso { s: op.s.clone(), sigma: op.sigma },
            Self::StarIsometry(op) => OperatorDescriptor::StarIso { u: op.u.clone(), v: op.v.clone(), sigma: op.sigma },
            Self::HermitianGenerator(op) => OperatorDescriptor::Group { v: op.v.clone(), flow: op.flow },
            Self::GBProjection(op) => OperatorDescriptor::Gbp { t: Box::new(op.t.descriptor()) },
        }
    }
}

impl From<CompositionIsometry> for BlochOperator {
    fn from(op: CompositionIsometry) -> Self {
        Self::CompositionIsometryB0(op)
    }
}

impl From<StarIsometry> for BlochOperator {
    fn from(op: StarIsometry) -> Self {
        Self::StarIsometry(op)
    }
}

/// JSON wire form, tagged by `"variant"`. A `group` descriptor names both the
/// isometry group and its generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum OperatorDescriptor {
    CompIso {
        #[serde(rename = "S")]
        s: ELinearMap,
        sigma: MobiusAutomorphism,
    },
    StarIso {
        #[serde(rename = "U")]
        u: ELinearMap,
        #[serde(rename = "V")]
        v: ELinearMap,
        sigma: MobiusAutomorphism,
    },
    Group {
        #[serde(rename = "V")]
        v: ELinearMap,
        flow: AutomorphismFlow,
    },
    Gbp {
        #[serde(rename = "T")]
        t: Box<OperatorDescriptor>,
    },
}

impl OperatorDescriptor {
    pub fn to_group(&self, space: &RangeSpace) -> Result<IsometryGroup> {
        match self {
            Self::Group { v, flow } => IsometryGroup::new(space, v.clone(), *flow),
            _ => Err(Error::Descriptor("expected a `group` descriptor".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_schema() {
        let json = r#"{"variant":"gbp","T":{"variant":"comp_iso","S":[[[-1,0],[0,0]],[[0,0],[-1,0]]],"sigma":{"lambda":[-1,0],"a":[0,0]}}}"#;
        let s = RangeSpace::euclidean(2);
        let desc: OperatorDescriptor = serde_json::from_str(json).unwrap();
        let op = BlochOperator::from_descriptor(&s, desc.clone()).unwrap();
        assert!(matches!(op, BlochOperator::GBProjection(_)));
        assert_eq!(op.descriptor(), desc);

        let g = r#"{"variant":"group","V":[[[1,0]]],"flow":{"kind":"elliptic","c":1.0,"tau":[0,0]}}"#;
        let desc: OperatorDescriptor = serde_json::from_str(g).unwrap();
        let grp = desc.to_group(&RangeSpace::euclidean(1)).unwrap();
        assert_eq!(grp.v(), &ELinearMap::identity(1));
        let back = serde_json::to_value(&desc).unwrap();
        assert_eq!(back["flow"]["kind"], "elliptic");
        assert_eq!(back["V"][0][0][0], 1.0);
    }
}
