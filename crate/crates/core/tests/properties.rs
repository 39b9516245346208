use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use proptest::prelude::*;

use bloch_lab::bloch::{bloch_norm_star, bloch_seminorm, AnalyticFunction, GridParams};
use bloch_lab::disc::{AutomorphismFlow, DiscPoint, MobiusAutomorphism};
use bloch_lab::operators::sampling::{default_nodes, sampled_distance};
use bloch_lab::operators::{gbp_from_reflection, idempotence_residual, BlochOperator, CompositionIsometry};
use bloch_lab::range_space::{pairing, ELinearMap, RangeSpace};

fn point(rmax: f64) -> impl Strategy<Value = C> {
    (0.0..rmax, 0.0..std::f64::consts::TAU).prop_map(|(r, t): (f64, f64)| C::from_polar(r, t))
}

fn unimodular() -> impl Strategy<Value = C> {
    (0.0..std::f64::consts::TAU).prop_map(|t| C::from_polar(1.0, t))
}

fn vector(d: usize) -> impl Strategy<Value = DVector<C>> {
    prop::collection::vec((-1.0..1.0, -1.0..1.0), d).prop_map(|xs: Vec<(f64, f64)>| DVector::from_iterator(xs.len(), xs.into_iter().map(|(a, b)| C::new(a, b))))
}

/// Degree-4 polynomial in `C^2` with `f(0) = 0`.
fn polynomial() -> impl Strategy<Value = AnalyticFunction> {
    prop::collection::vec(vector(2), 4).prop_map(|mut cs| {
        for (k, c) in cs.iter_mut().enumerate() {
            *c *= C::from(0.5f64.powi(k as i32));
        }
        cs.insert(0, DVector::zeros(2));
        AnalyticFunction::polynomial(cs).unwrap()
    })
}

fn swap_with_phases(w: C) -> ELinearMap {
    ELinearMap::new(DMatrix::from_row_slice(2, 2, &[C::new(0.0, 0.0), w, w.conj(), C::new(0.0, 0.0)])).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mobius_inverse_and_weight(l in unimodular(), a in point(0.95), z in point(0.95)) {
        let m = MobiusAutomorphism::from_canonical(l, a).unwrap();
        prop_assert!(m.compose(&m.inverse()).distance(&MobiusAutomorphism::identity()) < 1e-10);
        let w = m.map(z);
        prop_assert!(w.norm() < 1.0);
        let lhs = 1.0 - w.norm_sqr();
        let rhs = m.derivative_at(z).norm() * (1.0 - z.norm_sqr());
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn canonical_form_round_trips(l in unimodular(), a in point(0.95)) {
        let cf = MobiusAutomorphism::from_canonical(l, a).unwrap().canonical();
        prop_assert!((cf.lambda - l).norm() < 1e-12 && (cf.a - a).norm() < 1e-12);
    }

    #[test]
    fn elliptic_flow_group_law(c in 0.1..3.0f64, tau in point(0.9), s in -2.0..2.0f64, t in -2.0..2.0f64) {
        let f = AutomorphismFlow::elliptic(c, tau).unwrap();
        prop_assert!(f.at(s + t).distance(&f.at(s).compose(&f.at(t))) < 1e-10);
        let fixed = f.at(t).map(tau);
        prop_assert!((fixed - tau).norm() < 1e-12);
    }

    #[test]
    fn parabolic_flow_group_law(c in -2.0..2.0f64, alpha in unimodular(), s in -2.0..2.0f64, t in -2.0..2.0f64) {
        prop_assume!(c.abs() > 1e-3);
        let f = AutomorphismFlow::parabolic(c, alpha).unwrap();
        prop_assert!(f.at(s + t).distance(&f.at(s).compose(&f.at(t))) < 1e-10);
    }

    #[test]
    fn support_functional_norms(v in vector(3), p in 1.2..5.0f64) {
        prop_assume!(v.norm() > 1e-3);
        let s = RangeSpace::new(3, p).unwrap();
        let u = s.support_functional(&v).unwrap();
        prop_assert!((s.dual_norm(&u).unwrap() - 1.0).abs() < 1e-12);
        prop_assert!((pairing(&u, &v) - C::from(s.norm(&v).unwrap())).norm() < 1e-12);
    }

    #[test]
    fn weighted_permutations_are_isometries(v in vector(2), w in unimodular(), p in 1.2..5.0f64) {
        let s = RangeSpace::new(2, p).unwrap();
        let m = swap_with_phases(w);
        prop_assert!((s.norm(&m.apply(&v)).unwrap() - s.norm(&v).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn star_norm_splits(f in polynomial(), k in vector(2)) {
        let s = RangeSpace::new(2, 3.0).unwrap();
        let g = GridParams::coarse();
        let h = AnalyticFunction::combine(C::from(1.0), f.clone(), C::from(1.0), AnalyticFunction::constant(k.clone())).unwrap();
        let lhs = bloch_norm_star(&s, &h, &g).value;
        let rhs = s.norm(&k).unwrap() + bloch_seminorm(&s, &f, &g).value;
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn seminorm_is_homogeneous(f in polynomial(), a in point(3.0)) {
        let s = RangeSpace::euclidean(2);
        let g = GridParams::coarse();
        let af = AnalyticFunction::combine(a, f.clone(), C::from(0.0), f.clone()).unwrap();
        let lhs = bloch_seminorm(&s, &af, &g).value;
        prop_assert!((lhs - a.norm() * bloch_seminorm(&s, &f, &g).value).abs() < 1e-12 * (1.0 + lhs));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn composition_isometry_preserves_seminorm(f in polynomial(), w in unimodular(), l in unimodular(), a in point(0.8)) {
        let s = RangeSpace::new(2, 3.0).unwrap();
        let op = CompositionIsometry::new(&s, swap_with_phases(w), MobiusAutomorphism::from_canonical(l, a).unwrap()).unwrap();
        let tf = op.apply(&f).unwrap();
        let g = GridParams::default();
        let (n1, n0) = (bloch_seminorm(&s, &tf, &g).value, bloch_seminorm(&s, &f, &g).value);
        prop_assert!((n1 / n0 - 1.0).abs() < 1e-6, "{} vs {}", n1, n0);
        let back = op.inverse().unwrap().apply(&tf).unwrap();
        prop_assert!(sampled_distance(&s, &back, &f, &default_nodes()) < 1e-10);
    }

    #[test]
    fn reflections_give_projections(f in polynomial(), w in unimodular(), a in point(0.8)) {
        let s = RangeSpace::new(2, 3.0).unwrap();
        let sigma = MobiusAutomorphism::from_canonical(C::new(-1.0, 0.0), a).unwrap();
        let t: BlochOperator = CompositionIsometry::new(&s, swap_with_phases(w), sigma).unwrap().into();
        let p = gbp_from_reflection(t).unwrap();
        prop_assert!(idempotence_residual(&s, &p, std::slice::from_ref(&f), &default_nodes()).unwrap() < 1e-12);
        let pf = p.apply(&f).unwrap();
        let z = DiscPoint::from_parts(0.2, -0.1).unwrap();
        let tf = p.reflection().apply(&f).unwrap();
        prop_assert!((pf.eval(z) - (f.eval(z) + tf.eval(z)) * C::from(0.5)).norm() < 1e-13);
    }
}
