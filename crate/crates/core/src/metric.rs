//! The complete Kahler neck metric and its supporting analysis: mollifier,
//! smooth cutoff, the cylinder potential and its cutoff version, the
//! regularized max patching of plurisubharmonic weights, the explicit metric
//! matrix on the model region, Ricci-flatness by finite differences, and the
//! completeness growth of radial lengths.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::neck::NeckPoint;
use crate::quad;

pub const DEFAULT_R: f64 = 2.0;
pub const DEFAULT_R2: f64 = 1.5;
/// Inner radius used by the weight-patching region statements; chosen with
/// `sqrt(eps0) * r < r1 < r2`.
pub const DEFAULT_R1: f64 = 1.2;
pub const DEFAULT_EPS0: f64 = 0.25;

/// The raw unnormalized bump, zero outside the open interval (the exponent
/// is +infinity at |x| = 1 if evaluated blindly).
fn raw_bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (1.0 / (x * x - 1.0)).exp()
    }
}

/// Normalization constant of the standard mollifier,
/// `1 / integral_{-1}^{1} e^{1/(x^2-1)} dx`, computed once by adaptive
/// quadrature.
fn mollifier_norm() -> f64 {
    static NORM: OnceLock<f64> = OnceLock::new();
    *NORM.get_or_init(|| {
        let i = quad::integrate(&raw_bump, -1.0, 1.0, 1e-14);
        1.0 / i
    })
}

/// Standard bump `a e^{1/(x^2-1)}` on (-1, 1), zero outside, with unit
/// integral.
pub fn mollifier(x: f64) -> f64 {
    mollifier_norm() * raw_bump(x)
}

/// `integral_{-1}^{min(t,1)} mollifier`, the cumulative bump.
pub fn mollifier_cumulative(t: f64) -> f64 {
    if t <= -1.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    mollifier_norm() * quad::integrate(&raw_bump, -1.0, t, 1e-13)
}

/// Radii of the smooth cutoff: plateau 1 out to near `r2`, support ending
/// strictly inside `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutoffSpec {
    pub r: f64,
    pub r2: f64,
}

impl CutoffSpec {
    pub fn new(r: f64, r2: f64) -> Result<Self> {
        if !(1.0 < r2 && r2 < r) {
            return Err(Error::InvalidParameter(format!(
                "cutoff radii must satisfy 1 < r2 < r, got r2 = {r2}, r = {r}"
            )));
        }
        Ok(CutoffSpec { r, r2 })
    }

    /// Mollifier scale `(r - r2)/4`.
    pub fn delta(&self) -> f64 {
        0.25 * (self.r - self.r2)
    }

    /// Center of the smoothed jump: the step function being mollified drops
    /// at `r - (r - r2)/2`.
    pub fn jump(&self) -> f64 {
        self.r - 0.5 * (self.r - self.r2)
    }
}

impl Default for CutoffSpec {
    fn default() -> Self {
        CutoffSpec {
            r: DEFAULT_R,
            r2: DEFAULT_R2,
        }
    }
}

/// Mollified step: the convolution of the indicator of `|y| < r - (r-r2)/2`
/// with the `delta`-scaled mollifier. Equals 1 exactly for `|x| < r2` and 0
/// exactly for `|x| >= r - (r - r2)/4`.
pub fn cutoff(x: f64, spec: &CutoffSpec) -> f64 {
    let c = spec.jump();
    let d = spec.delta();
    let upper = (x + c) / d;
    let lower = (x - c) / d;
    if upper <= -1.0 || lower >= 1.0 {
        return 0.0;
    }
    if upper >= 1.0 && lower <= -1.0 {
        return 1.0;
    }
    mollifier_cumulative(upper) - mollifier_cumulative(lower)
}

/// The squared-log cylinder potential `(log(t^2/|s|))^2`, vanishing on the
/// middle circle `t = sqrt|s|`.
pub fn cylinder_potential(t: f64, s: Complex64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "cylinder potential needs t > 0, got {t}"
        )));
    }
    let sn = s.norm();
    if sn == 0.0 {
        return Err(Error::InvalidParameter("s must be nonzero".into()));
    }
    let l = (t * t / sn).ln();
    Ok(l * l)
}

/// Where a point sits relative to the tubular neighborhood, for the global
/// potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointLocation {
    Inside(NeckPoint),
    Outside,
}

/// The global potential: `cutoff(|w|) * cylinder_potential(|w|)` inside the
/// chart, extended by the constant value at `|w| = r` (which is exactly 0,
/// the cutoff vanishing near the chart boundary) outside.
pub fn cutoff_potential(loc: &PointLocation, spec: &CutoffSpec, s: Complex64) -> Result<f64> {
    match loc {
        PointLocation::Outside => Ok(0.0),
        PointLocation::Inside(pt) => {
            let t = pt.w.norm();
            if t == 0.0 {
                return Err(Error::ZeroSection);
            }
            let f = cutoff(t, spec);
            if f == 0.0 {
                // Avoids evaluating the potential outside the support.
                return Ok(0.0);
            }
            Ok(f * cylinder_potential(t, s)?)
        }
    }
}

/// Regularized maximum
/// `M_gamma(t1, t2) = integral max(t1+h1, t2+h2) prod eta(h_j/gamma_j)/gamma_j dh`,
/// using the standard mollifier as the averaging bump (even, unit mass, zero
/// first moment). Equals `max(t1, t2)` exactly once `|t1 - t2| > gamma_1 +
/// gamma_2`.
pub fn regularized_max(t1: f64, t2: f64, gamma: (f64, f64)) -> Result<f64> {
    let (g1, g2) = gamma;
    if !(g1 > 0.0 && g2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma components must be positive, got ({g1}, {g2})"
        )));
    }
    if t1 - t2 > g1 + g2 {
        return Ok(t1);
    }
    if t2 - t1 > g1 + g2 {
        return Ok(t2);
    }
    // Inner integral over h2 splits at the kink h2 = t1 + h1 - t2.
    let inner = |h1: f64| -> f64 {
        let kink = t1 + h1 - t2;
        if kink >= g2 {
            return t1 + h1;
        }
        if kink <= -g2 {
            return t2; // first moment of the bump vanishes
        }
        let left = (t1 + h1) * mollifier_cumulative(kink / g2);
        let right = quad::integrate(
            &|h2: f64| (t2 + h2) * mollifier(h2 / g2) / g2,
            kink,
            g2,
            1e-13,
        );
        left + right
    };
    // The outer integrand loses smoothness where the kink enters or leaves
    // the inner window (h1 = t2 - t1 +- g2); integrate the smooth pieces
    // separately.
    let mut cuts = vec![-g1];
    for c in [t2 - t1 - g2, t2 - t1 + g2] {
        if c > -g1 && c < g1 {
            cuts.push(c);
        }
    }
    cuts.push(g1);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut total = 0.0;
    for pair in cuts.windows(2) {
        total += quad::integrate(
            &|h1: f64| mollifier(h1 / g1) / g1 * inner(h1),
            pair[0],
            pair[1],
            1e-12,
        );
    }
    Ok(total)
}

/// Offset of `M_{(1,1)}(v, v)` above `v`; frozen from a 2-D quadrature.
pub const REGULARIZED_MAX_DIAGONAL_OFFSET: f64 = 0.228_735_979_903_536_35;

/// Role of a local plurisubharmonic weight in the patching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightRole {
    /// Weight of the metric on the ample bundle (singular along the curve).
    BundleWeight,
    /// Weight of the pulled-back curve metric (bounded on the chart).
    CurveWeight,
}

/// A local weight evaluated pointwise on the chart. The sampler is abstract:
/// the actual section data behind the bundle weight is out of numeric scope,
/// so tests drive this with synthetic samplers of the right shape.
pub struct WeightSampler {
    role: WeightRole,
    f: Box<dyn Fn(&NeckPoint) -> f64 + Send + Sync>,
}

impl WeightSampler {
    pub fn new(role: WeightRole, f: impl Fn(&NeckPoint) -> f64 + Send + Sync + 'static) -> Self {
        WeightSampler { role, f: Box::new(f) }
    }

    pub fn role(&self) -> WeightRole {
        self.role
    }

    pub fn eval(&self, pt: &NeckPoint) -> Result<f64> {
        let v = (self.f)(pt);
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "weight sampler returned a non-finite value at w = {}",
                pt.w
            )));
        }
        Ok(v)
    }
}

/// Patched local weight `M_{(1,1)}(phi_L, phi_C + log eps)` at a point.
pub fn patch_weights(
    phi_l: &WeightSampler,
    phi_c: &WeightSampler,
    eps: f64,
    pt: &NeckPoint,
) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must be positive, got {eps}"
        )));
    }
    let a = phi_l.eval(pt)?;
    let b = phi_c.eval(pt)? + eps.ln();
    regularized_max(a, b, (1.0, 1.0))
}

/// Parameters of the model neck metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeckMetricSpec {
    /// Patching constant, > 0.
    pub b: f64,
    /// Intersection number of the ample class with the curve, > 0.
    pub b0: i64,
    pub tau: Complex64,
    pub s: Complex64,
    pub eps0: f64,
    /// Chart radius bounding the model region `|w| < sqrt(eps0) * r`.
    pub r: f64,
}

impl NeckMetricSpec {
    pub fn new(b: f64, b0: i64, tau: Complex64, s: Complex64, eps0: f64, r: f64) -> Result<Self> {
        if !(b > 0.0) {
            return Err(Error::InvalidParameter(format!("b must be positive, got {b}")));
        }
        if b0 <= 0 {
            return Err(Error::NonPositiveIntersection(b0));
        }
        if !(tau.im > 0.0) {
            return Err(Error::TauNotInUpperHalfPlane(format!("{tau}")));
        }
        if !(r > 1.0) {
            return Err(Error::InvalidParameter(format!("r must exceed 1, got {r}")));
        }
        let sn = s.norm();
        if !(sn > 0.0 && sn < eps0) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < |s| < eps0 = {eps0}, got |s| = {sn}"
            )));
        }
        Ok(NeckMetricSpec {
            b,
            b0,
            tau,
            s,
            eps0,
            r,
        })
    }

    /// Radius of the model region.
    pub fn model_radius(&self) -> f64 {
        self.eps0.sqrt() * self.r
    }

    fn check_in_model(&self, pt: &NeckPoint) -> Result<f64> {
        let t = pt.w.norm();
        if t == 0.0 {
            return Err(Error::ZeroSection);
        }
        if t >= self.model_radius() {
            return Err(Error::OutsideModelRegion(t));
        }
        Ok(t)
    }
}

/// Diagonal entries of the metric coefficient matrix on the model region:
/// `diag(2 b0 / Im tau, 4 b / (pi |w|^2))`.
pub fn neck_metric_matrix(pt: &NeckPoint, spec: &NeckMetricSpec) -> Result<[f64; 2]> {
    let t = spec.check_in_model(pt)?;
    Ok([
        2.0 * spec.b0 as f64 / spec.tau.im,
        4.0 * spec.b / (std::f64::consts::PI * t * t),
    ])
}

/// Determinant of the coefficient matrix,
/// `8 b b0 / (pi Im tau |w|^2)`.
pub fn metric_determinant(pt: &NeckPoint, spec: &NeckMetricSpec) -> Result<f64> {
    let m = neck_metric_matrix(pt, spec)?;
    Ok(m[0] * m[1])
}

/// Finite-difference Laplacian (in the `w` coordinate) of
/// `log det` of the metric matrix. The log-determinant is
/// `const - 2 log |w|`, harmonic away from the divisor, so the residual is
/// the second-order stencil error `~2 h^2 Re(w^{-4})` plus rounding.
///
/// The four stencil values are grouped `(axial + axial) + (diag + diag)` so
/// that quarter-turn rotations of `w` reproduce the residual bit for bit.
pub fn ricci_residual(pt: &NeckPoint, spec: &NeckMetricSpec, h: f64) -> Result<f64> {
    let t = spec.check_in_model(pt)?;
    if !(h > 0.0) || t <= 10.0 * h {
        return Err(Error::StepTooLarge { step: h, radius: t });
    }
    let f = |w: Complex64| -> Result<f64> {
        Ok(metric_determinant(&NeckPoint::new(pt.z, w), spec)?.ln())
    };
    let re = Complex64::new(h, 0.0);
    let im = Complex64::new(0.0, h);
    let sum_re = f(pt.w + re)? + f(pt.w - re)?;
    let sum_im = f(pt.w + im)? + f(pt.w - im)?;
    let lap = (sum_re + sum_im - 4.0 * f(pt.w)?) / (h * h);
    Ok(lap.abs())
}

/// Length of the radial segment `[t0, t1]` in the `w`-factor of the model
/// metric, i.e. the integral of `sqrt(4b/pi)/t`. The convention is
/// `|v|^2 = g_ww |dw(v)|^2` with `g_ww = 4b/(pi |w|^2)`. Evaluated by
/// quadrature over decade panels; the closed form is
/// `sqrt(4b/pi) log(t1/t0)`.
pub fn radial_length(t0: f64, t1: f64, spec: &NeckMetricSpec) -> Result<f64> {
    if !(t0 > 0.0 && t0 < t1) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < t0 < t1, got t0 = {t0}, t1 = {t1}"
        )));
    }
    if t1 >= spec.model_radius() {
        return Err(Error::OutsideModelRegion(t1));
    }
    let pref = (4.0 * spec.b / std::f64::consts::PI).sqrt();
    let mut total = 0.0;
    let mut lo = t0;
    while lo < t1 {
        let hi = (lo * 10.0).min(t1);
        total += quad::integrate(&|t: f64| pref / t, lo, hi, 1e-12);
        lo = hi;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mollifier_support_and_mass() {
        assert_eq!(mollifier(1.0), 0.0);
        assert_eq!(mollifier(-1.0), 0.0);
        assert_eq!(mollifier(1.5), 0.0);
        let mass = quad::integrate(&mollifier, -1.0, 1.0, 1e-12);
        assert!((mass - 1.0).abs() < 1e-10);
        // eta(0) = a / e with a the normalization of the bump.
        assert!((mollifier(0.0) - 0.828_568_839_869_105_2).abs() < 1e-10);
    }

    #[test]
    fn cutoff_plateaus_exact() {
        let spec = CutoffSpec::default(); // r = 2, r2 = 1.5
        assert_eq!(cutoff(spec.r2 / 2.0, &spec), 1.0);
        assert_eq!(cutoff(0.0, &spec), 1.0);
        assert_eq!(cutoff(spec.r, &spec), 0.0);
        assert_eq!(cutoff(spec.r - 0.25 * (spec.r - spec.r2), &spec), 0.0);
        // just inside the plateau boundary
        assert_eq!(cutoff(spec.r2 - 1e-9, &spec), 1.0);
    }

    #[test]
    fn cutoff_halfway_at_jump() {
        let spec = CutoffSpec::default();
        // The mollifier window centered on the jump integrates to 1/2.
        let v = cutoff(spec.jump(), &spec);
        assert!((v - 0.5).abs() < 1e-10, "{v}");
        // A quarter-width past the jump: the tail integral of the bump past
        // u = 1/2 (frozen by quadrature during development).
        let v2 = cutoff(spec.r - 0.375 * (spec.r - spec.r2), &spec);
        assert!((v2 - 0.122_967_283_277_329_08).abs() < 1e-9, "{v2}");
        assert!(v2 > 0.0 && v2 < 1.0);
    }

    #[test]
    fn cutoff_monotone_and_smooth() {
        let spec = CutoffSpec::default();
        let mut prev = f64::INFINITY;
        let mut x = 0.0;
        while x <= spec.r + 0.2 {
            let v = cutoff(x, &spec);
            assert!(v <= prev + 1e-12, "not nonincreasing at {x}");
            prev = v;
            x += 0.01;
        }
        // Fourth-order central differences stay bounded across the ramp
        // (C-infinity smoothness probe).
        let h = 1e-2;
        let mut worst: f64 = 0.0;
        let mut x = spec.r2 - 0.1;
        while x <= spec.r {
            let d4 = (cutoff(x - 2.0 * h, &spec) - 4.0 * cutoff(x - h, &spec)
                + 6.0 * cutoff(x, &spec)
                - 4.0 * cutoff(x + h, &spec)
                + cutoff(x + 2.0 * h, &spec))
                / h.powi(4);
            worst = worst.max(d4.abs());
            x += 0.02;
        }
        assert!(worst < 1e6, "fourth difference blew up: {worst}");
    }

    #[test]
    fn cylinder_potential_values() {
        let s = Complex64::new(0.01, 0.0);
        assert!(cylinder_potential(0.1, s).unwrap().abs() < 1e-15); // t = sqrt|s|
        let t = 0.1 * std::f64::consts::E;
        assert!((cylinder_potential(t, s).unwrap() - 4.0).abs() < 1e-10);
        let v = cylinder_potential(1.0, s).unwrap();
        assert!((v - 100f64.ln().powi(2)).abs() < 1e-10);
        assert!((v - 21.207_592_441_913_597).abs() < 1e-10);
        assert!(cylinder_potential(0.0, s).is_err());
        assert!(cylinder_potential(-1.0, s).is_err());
    }

    #[test]
    fn cutoff_potential_regions() {
        let spec = CutoffSpec::default();
        let s = Complex64::new(0.01, 0.0);
        assert_eq!(cutoff_potential(&PointLocation::Outside, &spec, s).unwrap(), 0.0);
        let z = Complex64::new(0.1, 0.1);
        // On the plateau the cutoff is exactly 1.
        let inner = PointLocation::Inside(NeckPoint::new(z, Complex64::new(0.7, 0.0)));
        let v = cutoff_potential(&inner, &spec, s).unwrap();
        assert_eq!(v, cylinder_potential(0.7, s).unwrap());
        // On the middle circle the cylinder potential vanishes.
        let mid = PointLocation::Inside(NeckPoint::new(z, Complex64::new(0.1, 0.0)));
        assert!(cutoff_potential(&mid, &spec, s).unwrap().abs() < 1e-15);
        // Near the chart boundary the cutoff kills the divergence.
        let near = PointLocation::Inside(NeckPoint::new(z, Complex64::new(1.95, 0.0)));
        assert_eq!(cutoff_potential(&near, &spec, s).unwrap(), 0.0);
        let zero_w = PointLocation::Inside(NeckPoint::new(z, Complex64::new(0.0, 0.0)));
        assert!(cutoff_potential(&zero_w, &spec, s).is_err());
    }

    #[test]
    fn regularized_max_disjoint_supports() {
        assert_eq!(regularized_max(5.0, 0.0, (1.0, 1.0)).unwrap(), 5.0);
        assert_eq!(regularized_max(0.0, 5.0, (1.0, 1.0)).unwrap(), 5.0);
        assert_eq!(regularized_max(-3.0, 7.0, (2.0, 2.0)).unwrap(), 7.0);
    }

    #[test]
    fn regularized_max_translation() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..15 {
            let t1 = rng.gen_range(-2.0..2.0);
            let t2 = rng.gen_range(-2.0..2.0);
            let a = rng.gen_range(-5.0..5.0);
            let m = regularized_max(t1, t2, (1.0, 1.0)).unwrap();
            let ma = regularized_max(t1 + a, t2 + a, (1.0, 1.0)).unwrap();
            assert!((ma - m - a).abs() <= 1e-10, "{}", (ma - m - a).abs());
        }
    }

    #[test]
    fn regularized_max_diagonal_fixture() {
        let c0 = regularized_max(0.0, 0.0, (1.0, 1.0)).unwrap();
        assert!(
            (c0 - REGULARIZED_MAX_DIAGONAL_OFFSET).abs() < 1e-9,
            "c0 = {c0}"
        );
    }

    #[test]
    fn regularized_max_bounds_and_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..20 {
            let t1 = rng.gen_range(-3.0..3.0);
            let t2 = rng.gen_range(-3.0..3.0);
            let m = regularized_max(t1, t2, (1.0, 1.0)).unwrap();
            let mx = t1.max(t2);
            assert!(m >= mx - 1e-11);
            assert!(m <= mx + REGULARIZED_MAX_DIAGONAL_OFFSET + 1e-9);
            let swapped = regularized_max(t2, t1, (1.0, 1.0)).unwrap();
            assert!((m - swapped).abs() < 1e-10);
        }
        // Monotone in each argument.
        let a = regularized_max(0.2, 0.0, (1.0, 1.0)).unwrap();
        let b = regularized_max(0.4, 0.0, (1.0, 1.0)).unwrap();
        assert!(b > a);
    }

    #[test]
    fn patch_weights_branches() {
        let pt = NeckPoint::new(Complex64::new(0.1, 0.2), Complex64::new(0.5, 0.0));
        let phi_l = WeightSampler::new(WeightRole::BundleWeight, |_| 10.0);
        let phi_c = WeightSampler::new(WeightRole::CurveWeight, |_| 0.0);
        assert_eq!(patch_weights(&phi_l, &phi_c, 1.0, &pt).unwrap(), 10.0);
        let phi_l2 = WeightSampler::new(WeightRole::BundleWeight, |_| 0.0);
        let phi_c2 = WeightSampler::new(WeightRole::CurveWeight, |_| 10.0);
        assert_eq!(patch_weights(&phi_l2, &phi_c2, 1.0, &pt).unwrap(), 10.0);
        // Equal branches: v + c0.
        let v = -1.3;
        let phi_l3 = WeightSampler::new(WeightRole::BundleWeight, move |_| v);
        let phi_c3 = WeightSampler::new(WeightRole::CurveWeight, move |_| v);
        let m = patch_weights(&phi_l3, &phi_c3, 1.0, &pt).unwrap();
        assert!((m - (v + REGULARIZED_MAX_DIAGONAL_OFFSET)).abs() < 1e-9);
    }

    #[test]
    fn patch_weights_region_behavior() {
        // Synthetic samplers with the qualitative separation of the real
        // weights: the bundle weight diverges to -infinity along the curve,
        // the curve weight is bounded.
        let kappa = 24.0;
        let phi_l = WeightSampler::new(WeightRole::BundleWeight, move |pt: &NeckPoint| {
            kappa * pt.w.norm().ln()
        });
        let phi_c = WeightSampler::new(WeightRole::CurveWeight, |_| 10.0);
        let eps = (-8.0f64).exp();
        let z = Complex64::new(0.3, 0.1);
        // Inner region |w| < sqrt(eps0) r = 1: the curve branch wins.
        for t in [0.05, 0.3, 0.6, 0.9] {
            let pt = NeckPoint::new(z, Complex64::new(t, 0.0));
            let m = patch_weights(&phi_l, &phi_c, eps, &pt).unwrap();
            assert_eq!(m, 10.0 + eps.ln(), "t = {t}");
        }
        // Outer region |w| > r1 = 1.2: the bundle branch wins.
        for t in [1.25, 1.5, 1.9] {
            let pt = NeckPoint::new(z, Complex64::new(t, 0.0));
            let m = patch_weights(&phi_l, &phi_c, eps, &pt).unwrap();
            assert_eq!(m, kappa * t.ln(), "t = {t}");
        }
    }

    fn spec_fixture() -> NeckMetricSpec {
        NeckMetricSpec::new(
            0.5,
            3,
            Complex64::new(0.0, 1.0),
            Complex64::new(0.01, 0.0),
            DEFAULT_EPS0,
            DEFAULT_R,
        )
        .unwrap()
    }

    #[test]
    fn metric_matrix_fixture() {
        let spec = spec_fixture();
        let pt = NeckPoint::new(Complex64::new(0.2, 0.3), Complex64::new(0.1, 0.0));
        let m = neck_metric_matrix(&pt, &spec).unwrap();
        assert!((m[0] - 6.0).abs() < 1e-14);
        assert!((m[1] - 200.0 / std::f64::consts::PI).abs() < 1e-12);
        assert!(m[0] > 0.0 && m[1] > 0.0);
        let det = metric_determinant(&pt, &spec).unwrap();
        assert!((det - 1200.0 / std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn metric_matrix_region_guard() {
        let spec = spec_fixture();
        let outside = NeckPoint::new(Complex64::new(0.0, 0.0), Complex64::new(1.1, 0.0));
        assert!(matches!(
            neck_metric_matrix(&outside, &spec),
            Err(Error::OutsideModelRegion(_))
        ));
        let zero = NeckPoint::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        assert!(neck_metric_matrix(&zero, &spec).is_err());
    }

    #[test]
    fn ricci_residual_small_and_second_order() {
        let spec = spec_fixture();
        let z = Complex64::new(0.1, 0.1);
        // At |w| = 0.8 and h = 4e-4 the truncation term 2 h^2 |w|^{-4}
        // dominates rounding and sits under 1e-6.
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let mut worst_h = 0.0f64;
        let mut worst_h2 = 0.0f64;
        for _ in 0..50 {
            let w = Complex64::from_polar(0.8, rng.gen_range(0.0..std::f64::consts::TAU));
            let pt = NeckPoint::new(z, w);
            worst_h = worst_h.max(ricci_residual(&pt, &spec, 4e-4).unwrap());
            worst_h2 = worst_h2.max(ricci_residual(&pt, &spec, 2e-4).unwrap());
        }
        assert!(worst_h <= 1e-6, "residual {worst_h}");
        let ratio = worst_h2 / worst_h;
        assert!((0.15..=0.35).contains(&ratio), "decay ratio {ratio}");
    }

    #[test]
    fn ricci_residual_at_tight_radius() {
        // At |w| = 0.1 the stencil truncation is ~2 h^2 / |w|^4; with
        // h = 1e-4 that is ~2e-4. (No finite-difference scheme in doubles
        // does better here without losing the second-order signature.)
        let spec = spec_fixture();
        let pt = NeckPoint::new(Complex64::new(0.0, 0.0), Complex64::new(0.1, 0.0));
        let r = ricci_residual(&pt, &spec, 1e-4).unwrap();
        assert!(r <= 3e-4, "residual {r}");
    }

    #[test]
    fn ricci_residual_quarter_turn_invariant() {
        let spec = spec_fixture();
        let w = Complex64::from_polar(0.4, 0.31);
        let a = ricci_residual(&NeckPoint::new(Complex64::new(0.0, 0.0), w), &spec, 1e-3).unwrap();
        let b = ricci_residual(
            &NeckPoint::new(Complex64::new(0.0, 0.0), w * Complex64::new(0.0, 1.0)),
            &spec,
            1e-3,
        )
        .unwrap();
        assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    }

    #[test]
    fn ricci_residual_insensitive_to_b_scaling() {
        let spec = spec_fixture();
        let spec2 = NeckMetricSpec { b: 1.0, ..spec };
        let pt = NeckPoint::new(Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.2));
        let a = ricci_residual(&pt, &spec, 1e-3).unwrap();
        let b = ricci_residual(&pt, &spec2, 1e-3).unwrap();
        // The determinant doubles but only shifts log det by a constant.
        assert!((a - b).abs() <= 1e-6);
    }

    #[test]
    fn ricci_step_guard() {
        let spec = spec_fixture();
        let pt = NeckPoint::new(Complex64::new(0.0, 0.0), Complex64::new(0.1, 0.0));
        assert!(matches!(
            ricci_residual(&pt, &spec, 0.02),
            Err(Error::StepTooLarge { .. })
        ));
    }

    #[test]
    fn radial_length_closed_form() {
        let spec = NeckMetricSpec::new(
            std::f64::consts::FRAC_PI_4,
            3,
            Complex64::new(0.0, 1.0),
            Complex64::new(0.01, 0.0),
            DEFAULT_EPS0,
            DEFAULT_R,
        )
        .unwrap();
        // b = pi/4 makes the prefactor 1.
        let l = radial_length(0.01, 0.1, &spec).unwrap();
        assert!((l - 10f64.ln()).abs() < 1e-9);
        // Halving t0 adds log 2.
        let l2 = radial_length(0.005, 0.1, &spec).unwrap();
        assert!((l2 - l - 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn radial_length_divergence_slope() {
        let spec = spec_fixture();
        let pref = (4.0 * spec.b / std::f64::consts::PI).sqrt();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for k in 2..=8 {
            let t0 = 10f64.powi(-k);
            xs.push(k as f64);
            ys.push(radial_length(t0, 0.1, &spec).unwrap());
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = sxy / sxx;
        let expected = pref * 10f64.ln();
        assert!(
            (slope - expected).abs() < 0.01 * expected,
            "slope {slope} vs {expected}"
        );
    }
}
