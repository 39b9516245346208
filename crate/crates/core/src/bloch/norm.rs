//! Supremum of `w(z) = (1 - |z|^2) ||f'(z)||` over the disc.
//!
//! A polar grid with radii clustered towards the circle locates the best
//! cells; each candidate cell is then refined by alternating golden-section
//! searches in `r` and `θ`, finished with a safeguarded Newton step in
//! Cartesian coordinates.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::function::AnalyticFunction;
use crate::disc::DiscPoint;
use crate::json::{to_pair, Pair};
use crate::range_space::RangeSpace;
use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridParams {
    pub n_radii: usize,
    pub n_angles: usize,
    pub refinement_rounds: usize,
}

impl Default for GridParams {
    fn default() -> Self {
        Self { n_radii: 200, n_angles: 256, refinement_rounds: 3 }
    }
}

impl GridParams {
    pub fn coarse() -> Self {
        Self { n_radii: 48, n_angles: 64, refinement_rounds: 3 }
    }

    /// `r_k = 1 - (1 - k/N)^2`, `k = 0..N`.
    pub fn radii(&self) -> Vec<f64> {
        let n = self.n_radii as f64;
        (0..self.n_radii).map(|k| 1.0 - (1.0 - k as f64 / n).powi(2)).collect()
    }

    pub fn angles(&self) -> Vec<f64> {
        let m = self.n_angles as f64;
        (0..self.n_angles).map(|j| TAU * j as f64 / m).collect()
    }

    /// Every grid node, origin first.
    pub fn nodes(&self) -> Vec<Complex64> {
        let angles = self.angles();
        let mut out = vec![Complex64::new(0.0, 0.0)];
        for &r in self.radii().iter().skip(1) {
            out.extend(angles.iter().map(|&t| Complex64::from_polar(r, t)));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    #[serde(serialize_with = "ser_point")]
    pub argmax: DiscPoint,
    pub grid: GridParams,
    /// Curvature-based bound on how far the true supremum may exceed `value`.
    pub uncertainty: f64,
}

fn ser_point<S: serde::Serializer>(p: &DiscPoint, s: S) -> Result<S::Ok, S::Error> {
    let pair: Pair = to_pair(p.value());
    pair.serialize(s)
}

impl NormEstimate {
    /// Shifts the estimate by a known additive constant (the `||f(0)||` term).
    pub fn offset(mut self, c: f64) -> Self {
        self.value += c;
        self
    }
}

/// `(1 - |z|^2) ||f'(z)||`.
pub fn weighted_derivative(space: &RangeSpace, f: &AnalyticFunction, z: Complex64) -> f64 {
    (1.0 - z.norm_sqr()) * space.norm_unchecked(&f.deriv_raw(z))
}

/// Estimated `sup_z (1 - |z|^2) ||f'(z)||`.
pub fn bloch_seminorm(space: &RangeSpace, f: &AnalyticFunction, grid: &GridParams) -> NormEstimate {
    maximize_on_disc(|z| weighted_derivative(space, f, z), grid)
}

/// `||f(0)|| + sup_z (1 - |z|^2) ||f'(z)||`.
pub fn bloch_norm_star(space: &RangeSpace, f: &AnalyticFunction, grid: &GridParams) -> NormEstimate {
    let at0 = space.norm_unchecked(&f.eval_raw(Complex64::new(0.0, 0.0)));
    bloch_seminorm(space, f, grid).offset(at0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RingMax {
    pub radius: f64,
    pub value: f64,
}

/// Max of the weighted derivative on each circle `|z| = r`.
pub fn little_bloch_check(space: &RangeSpace, f: &AnalyticFunction, radii: &[f64], n_angles: usize) -> Vec<RingMax> {
    radii
        .iter()
        .map(|&r| {
            let value = (0..n_angles.max(1))
                .map(|j| weighted_derivative(space, f, Complex64::from_polar(r, TAU * j as f64 / n_angles as f64)))
                .fold(0.0, f64::max);
            RingMax { radius: r, value }
        })
        .collect()
}

const CANDIDATES: usize = 8;
const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Grid search plus local refinement for a smooth nonnegative function on the
/// disc. Deterministic for a given grid regardless of thread scheduling.
pub fn maximize_on_disc<W>(w: W, grid: &GridParams) -> NormEstimate
where
    W: Fn(Complex64) -> f64 + Sync,
{
    let radii = grid.radii();
    let angles = grid.angles();
    let (nr, na) = (radii.len(), angles.len());
    let r_cap = 1.0 - 2.0 * tolerances::BOUNDARY;

    let values: Vec<Vec<f64>> = radii
        .par_iter()
        .enumerate()
        .map(|(k, &r)| {
            if k == 0 {
                vec![w(Complex64::new(0.0, 0.0)); na]
            } else {
                angles.iter().map(|&t| w(Complex64::from_polar(r, t))).collect()
            }
        })
        .collect();
    let at = |k: usize, j: isize| values[k][j.rem_euclid(na as isize) as usize];

    // Local maxima of the grid, best first; ties broken by index.
    let mut cands: Vec<(f64, usize, usize)> = Vec::new();
    for k in 0..nr {
        let js: Box<dyn Iterator<Item = usize>> = if k == 0 { Box::new(0..1) } else { Box::new(0..na) };
        for j in js {
            let v = values[k][j];
            let mut is_max = true;
            'nb: for dk in -1isize..=1 {
                let kk = k as isize + dk;
                if kk < 0 || kk >= nr as isize {
                    continue;
                }
                let kk = kk as usize;
                if kk == 0 || k == 0 {
                    if values[kk].iter().any(|&u| u > v) {
                        is_max = false;
                        break 'nb;
                    }
                    continue;
                }
                for dj in -1isize..=1 {
                    if at(kk, j as isize + dj) > v {
                        is_max = false;
                        break 'nb;
                    }
                }
            }
            if is_max {
                cands.push((v, k, j));
            }
        }
    }
    cands.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    cands.truncate(CANDIDATES);

    let dtheta = TAU / na as f64;
    let spacing = |k: usize| {
        let lo = if k > 0 { radii[k] - radii[k - 1] } else { 0.0 };
        let hi = if k + 1 < nr { radii[k + 1] - radii[k] } else { 1.0 - radii[k] };
        lo.max(hi)
    };

    let mut best = (f64::NEG_INFINITY, Complex64::new(0.0, 0.0), 0.0);
    for &(v, k, j) in &cands {
        let r_lo = if k > 0 { radii[k - 1] } else { 0.0 };
        let r_hi = if k + 1 < nr { radii[k + 1] } else { r_cap };
        let start = (radii[k], angles[j], v);
        let (z, val, local) = refine(&w, start, (r_lo, r_hi.min(r_cap)), dtheta, spacing(k), grid.refinement_rounds, r_cap);
        if val > best.0 {
            best = (val, z, local);
        }
    }

    // Second-difference bound for nodes outside the refined neighbourhoods.
    let refined = |k: usize, j: usize| {
        cands.iter().any(|&(_, ck, cj)| {
            let dj = (j as isize - cj as isize).rem_euclid(na as isize);
            k.abs_diff(ck) <= 1 && (dj <= 1 || dj >= na as isize - 1 || ck == 0 || k == 0)
        })
    };
    let mut grid_slack: f64 = 0.0;
    for k in 1..nr.saturating_sub(1) {
        let (h1, h2) = (radii[k] - radii[k - 1], radii[k + 1] - radii[k]);
        let h = h1.max(h2);
        #[allow(clippy::needless_range_loop)]
        for j in 0..na {
            if refined(k, j) {
                continue;
            }
            let v = values[k][j];
            let d_rr = 2.0 * (h1 * values[k + 1][j] - (h1 + h2) * v + h2 * values[k - 1][j]) / (h1 * h2 * (h1 + h2));
            let d_tt = (at(k, j as isize + 1) - 2.0 * v + at(k, j as isize - 1)) / (dtheta * dtheta);
            let bound = v + (d_rr.abs() * h * h + d_tt.abs() * dtheta * dtheta) / 8.0;
            grid_slack = grid_slack.max(bound - best.0);
        }
    }

    NormEstimate {
        value: best.0,
        argmax: DiscPoint::new(best.1).unwrap_or(DiscPoint::origin()),
        grid: *grid,
        uncertainty: best.2.max(0.0) + grid_slack.max(0.0),
    }
}

fn golden_max(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, x0: f64, v0: f64) -> (f64, f64) {
    let mut best = (x0, v0);
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-14 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if g1 >= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - GOLDEN * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + GOLDEN * (hi - lo);
            g2 = g(x2);
        }
    }
    for (x, v) in [(x1, g1), (x2, g2)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Returns the refined point, its value and the predicted remaining gain.
fn refine<W: Fn(Complex64) -> f64>(
    w: &W,
    (r0, t0, v0): (f64, f64, f64),
    (r_lo, r_hi): (f64, f64),
    dtheta: f64,
    dr: f64,
    rounds: usize,
    r_cap: f64,
) -> (Complex64, f64, f64) {
    let (mut r, mut t, mut v) = (r0, t0, v0);
    let (mut hr, mut ht) = ((r_hi - r_lo) / 2.0, dtheta);
    for round in 0..rounds.max(1) {
        let (lo, hi) = if round == 0 { (r_lo, r_hi) } else { ((r - hr).max(0.0), (r + hr).min(r_cap)) };
        (r, v) = golden_max(|x| w(Complex64::from_polar(x, t)), lo, hi, r, v);
        (t, v) = golden_max(|x| w(Complex64::from_polar(r, x)), t - ht, t + ht, t, v);
        hr /= 2.0;
        ht /= 2.0;
    }
    let mut z = Complex64::from_polar(r, t);
    let mut gain = 0.0;
    let h = 1e-5;
    for _ in 0..6 {
        if z.norm() + 4.0 * h >= r_cap {
            break;
        }
        let Some((step, predicted)) = newton_step(w, z, h) else { break };
        let step = if step.norm() > dr.max(dtheta) { step * (dr.max(dtheta) / step.norm()) } else { step };
        let cand = z + step;
        if cand.norm() >= r_cap {
            break;
        }
        let vc = w(cand);
        gain = predicted;
        if vc > v {
            z = cand;
            v = vc;
        } else {
            break;
        }
        if step.norm() < 1e-14 {
            break;
        }
    }
    if let Some((_, predicted)) = (z.norm() + 4.0 * h < r_cap).then(|| newton_step(w, z, h)).flatten() {
        gain = predicted;
    }
    (z, v, gain)
}

/// Newton step for a local maximum and the quadratic model's predicted gain;
/// `None` unless the finite-difference Hessian is negative definite.
fn newton_step<W: Fn(Complex64) -> f64>(w: &W, z: Complex64, h: f64) -> Option<(Complex64, f64)> {
    let e = |dx: f64, dy: f64| w(z + Complex64::new(dx, dy));
    let f0 = e(0.0, 0.0);
    let (fxp, fxm, fyp, fym) = (e(h, 0.0), e(-h, 0.0), e(0.0, h), e(0.0, -h));
    let gx = (fxp - fxm) / (2.0 * h);
    let gy = (fyp - fym) / (2.0 * h);
    let hxx = (fxp - 2.0 * f0 + fxm) / (h * h);
    let hyy = (fyp - 2.0 * f0 + fym) / (h * h);
    let hxy = (e(h, h) - e(h, -h) - e(-h, h) + e(-h, -h)) / (4.0 * h * h);
    let det = hxx * hyy - hxy * hxy;
    if !(hxx < 0.0 && det > 0.0) {
        return None;
    }
    // step = -H^{-1} g
    let sx = -(hyy * gx - hxy * gy) / det;
    let sy = -(-hxy * gx + hxx * gy) / det;
    let predicted = -0.5 * (gx * sx + gy * sy);
    Some((Complex64::new(sx, sy), predicted.max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::range_space::VectorValue;

    fn unit(d: usize, k: usize) -> VectorValue {
        VectorValue::from_fn(d, |i, _| Complex64::from(if i == k { 1.0 } else { 0.0 }))
    }

    #[test]
    fn grid_layout() {
        let g = GridParams { n_radii: 4, n_angles: 3, refinement_rounds: 1 };
        assert_eq!(g.radii(), vec![0.0, 0.4375, 0.75, 0.9375]);
        assert_eq!(g.nodes().len(), 1 + 3 * 3);
    }

    #[test]
    fn linear_function_peaks_at_origin() {
        let s = RangeSpace::euclidean(2);
        let f = AnalyticFunction::monomial(1, unit(2, 1));
        let est = bloch_seminorm(&s, &f, &GridParams::default());
        assert!((est.value - 1.0).abs() < 1e-12);
        assert!(est.argmax.value().norm() < 1e-6);
    }

    #[test]
    fn half_square_peaks_on_a_ring() {
        // max of r (1 - r^2) is 2/(3 sqrt 3) at r = 1/sqrt 3
        let s = RangeSpace::euclidean(1);
        let f = AnalyticFunction::monomial(2, unit(1, 0) * Complex64::from(0.5));
        let est = bloch_seminorm(&s, &f, &GridParams::default());
        let expect = 2.0 / (3.0 * 3f64.sqrt());
        assert!((est.value - expect).abs() < 1e-12, "{}", est.value);
        assert!((est.argmax.value().norm() - 1.0 / 3f64.sqrt()).abs() < 1e-6);
        assert!(est.uncertainty < 1e-3);
    }

    #[test]
    fn witness_supremum_is_attained_at_center() {
        let s = RangeSpace::new(2, 3.0).unwrap();
        let e = VectorValue::from_vec(vec![Complex64::new(0.5, 0.5), Complex64::new(0.0, 0.0)]);
        let e = &e * Complex64::from(1.0 / s.norm(&e).unwrap());
        let z0 = DiscPoint::from_parts(-0.35, 0.6).unwrap();
        let est = bloch_seminorm(&s, &AnalyticFunction::witness(z0, e), &GridParams::default());
        assert!((est.value - 1.0).abs() < 1e-9);
        assert!((est.argmax.value() - z0.value()).norm() < 1e-4);
    }

    #[test]
    fn star_norm_adds_value_at_zero() {
        let s = RangeSpace::euclidean(2);
        let c = VectorValue::from_vec(vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)]);
        let k = AnalyticFunction::constant(c.clone());
        assert!((bloch_norm_star(&s, &k, &GridParams::coarse()).value - 5.0).abs() < 1e-15);
        let f = AnalyticFunction::polynomial(vec![c, unit(2, 0)]).unwrap();
        assert!((bloch_norm_star(&s, &f, &GridParams::default()).value - 6.0).abs() < 1e-12);
    }

    #[test]
    fn ring_maxima_of_linear_function() {
        let s = RangeSpace::euclidean(1);
        let f = AnalyticFunction::monomial(1, unit(1, 0));
        for ring in little_bloch_check(&s, &f, &[0.0, 0.5, 0.9, 0.999], 64) {
            assert!((ring.value - (1.0 - ring.radius * ring.radius)).abs() < 1e-15);
        }
        let k = AnalyticFunction::constant(unit(1, 0));
        assert!(little_bloch_check(&s, &k, &[0.3, 0.99], 16).iter().all(|r| r.value == 0.0));
    }
}
