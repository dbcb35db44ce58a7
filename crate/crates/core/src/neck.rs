//! Quotient charts of the tubular neighborhood of the elliptic curve, the
//! annulus regions of the gluing, the transition map, the model involution,
//! and the normalized holomorphic 2-form.
//!
//! The chart is `{(z, w) : |w| < r}` modulo the deck relations
//! `(z, w) ~ (z + 1, e^{2 pi i p} w) ~ (z + tau, e^{2 pi i q} w)`; the minus
//! side carries the negated exponents, realizing the dual normal bundle.

use num_complex::Complex64;
use serde::Serialize;

use crate::elliptic::ComplexLattice;
use crate::error::{Error, Result};
use crate::Side;

/// Chart data of the tubular neighborhood on one side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeckChart {
    pub tau: Complex64,
    /// Monodromy exponent along the 1-direction (plus-side convention).
    pub p: f64,
    /// Monodromy exponent along the tau-direction (plus-side convention).
    pub q: f64,
    /// Chart radius, > 1.
    pub r: f64,
    pub side: Side,
}

impl NeckChart {
    pub fn new(tau: Complex64, p: f64, q: f64, r: f64, side: Side) -> Result<Self> {
        if !(tau.im > 0.0) {
            return Err(Error::TauNotInUpperHalfPlane(format!("{tau}")));
        }
        if !(r > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "chart radius must exceed 1, got {r}"
            )));
        }
        Ok(NeckChart { tau, p, q, r, side })
    }

    pub fn lattice(&self) -> ComplexLattice {
        ComplexLattice::new(self.tau).expect("validated on construction")
    }

    pub fn opposite(&self) -> NeckChart {
        NeckChart {
            side: self.side.opposite(),
            ..*self
        }
    }

    /// Unit deck factor picked up by `w` along `m` unit steps and `n`
    /// tau-steps on this side.
    pub fn deck_factor(&self, m: i64, n: i64) -> Complex64 {
        let phase = 2.0 * std::f64::consts::PI
            * self.side.sign()
            * (self.p * m as f64 + self.q * n as f64);
        Complex64::new(0.0, phase).exp()
    }
}

/// Equivalence class representative `[(z, w)]` in the chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeckPoint {
    pub z: Complex64,
    pub w: Complex64,
}

impl NeckPoint {
    pub fn new(z: Complex64, w: Complex64) -> Self {
        NeckPoint { z, w }
    }
}

/// Loops generating the fundamental group of the base curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Loop {
    Alpha,
    Beta,
}

/// Gluing parameters: `0 < |s| < eps0`, translation offset `xi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlueParams {
    pub s: Complex64,
    pub xi: Complex64,
    pub eps0: f64,
}

impl GlueParams {
    pub fn new(s: Complex64, xi: Complex64, eps0: f64) -> Result<Self> {
        if !(eps0 > 0.0 && eps0 < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "eps0 must lie in (0, 1), got {eps0}"
            )));
        }
        let t = s.norm();
        if !(t > 0.0 && t < eps0) {
            return Err(Error::InvalidParameter(format!(
                "gluing parameter must satisfy 0 < |s| < eps0 = {eps0}, got |s| = {t}"
            )));
        }
        Ok(GlueParams { s, xi, eps0 })
    }

    /// Offset zero, default smallness threshold 0.25.
    pub fn symmetric(s: Complex64) -> Result<Self> {
        GlueParams::new(s, Complex64::new(0.0, 0.0), 0.25)
    }
}

/// Reduces `z` to the fundamental parallelogram, compensating `w` by the
/// deck factors: first the unit steps, then the tau-steps (the factors are
/// unit scalars, so the order only fixes the rounding pattern).
pub fn canonicalize(pt: &NeckPoint, chart: &NeckChart) -> Result<NeckPoint> {
    if pt.w.norm() == 0.0 {
        return Err(Error::ZeroSection);
    }
    let lattice = chart.lattice();
    let (a, b) = lattice.coords(pt.z);
    let m = a.floor() as i64;
    let n = b.floor() as i64;
    let fa = a - a.floor();
    let fb = b - b.floor();
    let fa = if fa >= 1.0 { 0.0 } else { fa };
    let fb = if fb >= 1.0 { 0.0 } else { fb };
    let z = lattice.from_coords(fa, fb);
    // Inverse deck steps: remove m unit steps, then n tau-steps.
    let w = pt.w * chart.deck_factor(-m, 0) * chart.deck_factor(0, -n);
    Ok(NeckPoint { z, w })
}

/// Monodromy of the model flat bundle along a generating loop:
/// `e^{+-2 pi i p}` for alpha, `e^{+-2 pi i q}` for beta, with the minus
/// side carrying the inverse factors.
pub fn monodromy(chart: &NeckChart, lp: Loop) -> Complex64 {
    match lp {
        Loop::Alpha => chart.deck_factor(1, 0),
        Loop::Beta => chart.deck_factor(0, 1),
    }
}

/// Classification of a canonical point against the gluing annuli.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// `|w| <= sqrt|s|/r`: removed from the glued surface.
    InsideExcludedCore,
    /// `sqrt|s|/r < |w| < sqrt|s| r`: the gluing annulus.
    InVs,
    /// `sqrt|s| r <= |w| < r`: the rest of the chart inside the surface.
    InMsBulk,
    /// `|w| >= r`: outside the chart.
    OutsideW,
}

pub fn region_of(pt: &NeckPoint, glue: &GlueParams, chart: &NeckChart) -> Region {
    let t = pt.w.norm();
    let root = glue.s.norm().sqrt();
    if t <= root / chart.r {
        Region::InsideExcludedCore
    } else if t < root * chart.r {
        Region::InVs
    } else if t < chart.r {
        Region::InMsBulk
    } else {
        Region::OutsideW
    }
}

/// The gluing transition on the annulus: `(z, w) -> (z + xi, s/w)` read on
/// the opposite-side chart (the inverse direction applies `-xi`). Returns
/// the canonicalized image; its chart is `from_chart.opposite()`.
pub fn transition(pt: &NeckPoint, glue: &GlueParams, from_chart: &NeckChart) -> Result<NeckPoint> {
    if region_of(pt, glue, from_chart) != Region::InVs {
        return Err(Error::OutsideGluingAnnulus(pt.w.norm()));
    }
    let offset = match from_chart.side {
        Side::Plus => glue.xi,
        Side::Minus => -glue.xi,
    };
    let raw = NeckPoint {
        z: pt.z + offset,
        w: glue.s / pt.w,
    };
    canonicalize(&raw, &from_chart.opposite())
}

/// The model involution: identity on chart coordinates with the side
/// swapped. An exact involution, and not the identity (the side differs).
pub fn involution(pt: &NeckPoint, side: Side) -> (NeckPoint, Side) {
    (*pt, side.opposite())
}

/// Pullback factor of the normalized 2-form `dz ^ dw / w` under the
/// transition map at `pt`, by finite differences and by the closed-form
/// Jacobian. With the minus-side form oriented as `-dz ^ dw / w`, a ratio
/// of -1 here means the transition glues the two forms exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PullbackRatio {
    pub finite_difference: Complex64,
    pub symbolic: Complex64,
}

pub fn two_form_pullback_ratio(
    pt: &NeckPoint,
    glue: &GlueParams,
    from_chart: &NeckChart,
    h: f64,
) -> Result<PullbackRatio> {
    if region_of(pt, glue, from_chart) != Region::InVs {
        return Err(Error::OutsideGluingAnnulus(pt.w.norm()));
    }
    if !(h > 0.0) || h * 10.0 >= pt.w.norm() {
        return Err(Error::StepTooLarge {
            step: h,
            radius: pt.w.norm(),
        });
    }
    let offset = match from_chart.side {
        Side::Plus => glue.xi,
        Side::Minus => -glue.xi,
    };
    // Raw (un-canonicalized) transition; deck factors are locally constant
    // and drop out of the form ratio.
    let raw = |z: Complex64, w: Complex64| (z + offset, glue.s / w);
    let hstep = Complex64::new(h, 0.0);

    let (zp_z, wp_z) = raw(pt.z + hstep, pt.w);
    let (zm_z, wm_z) = raw(pt.z - hstep, pt.w);
    let (zp_w, wp_w) = raw(pt.z, pt.w + hstep);
    let (zm_w, wm_w) = raw(pt.z, pt.w - hstep);
    let dz_dz = (zp_z - zm_z) / (2.0 * h);
    let dw_dz = (wp_z - wm_z) / (2.0 * h);
    let dz_dw = (zp_w - zm_w) / (2.0 * h);
    let dw_dw = (wp_w - wm_w) / (2.0 * h);
    let det_fd = dz_dz * dw_dw - dz_dw * dw_dz;
    if det_fd.norm() < 1e-300 {
        return Err(Error::DegenerateJacobian);
    }
    let (_, w_img) = raw(pt.z, pt.w);
    // ((1/w') o f) * det J / (1/w)
    let ratio_fd = pt.w * det_fd / w_img;

    let det_sym = -glue.s / (pt.w * pt.w);
    let ratio_sym = pt.w * det_sym / w_img;
    Ok(PullbackRatio {
        finite_difference: ratio_fd,
        symbolic: ratio_sym,
    })
}

/// Chart point corresponding to a universal-cover point `(z, eta)` of the
/// toroidal group under `[(z, eta)] -> [(z, e^{2 pi i eta})]`, scaled to the
/// circle `|w| = t` and canonicalized.
pub fn from_cover(chart: &NeckChart, z: Complex64, eta: Complex64, t: f64) -> Result<NeckPoint> {
    let w = Complex64::new(t, 0.0) * (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * eta).exp();
    canonicalize(&NeckPoint::new(z, w), chart)
}

/// Numerical integral of the normalized 2-form `(1/(2 pi i)) dz ^ dw / w`
/// over the 2-cycle swept by the two monodromy directions at `|w| = t`:
/// the parametrization is `(u, v) -> (u + v tau, t e^{2 pi i (u p + v q)})`
/// over the unit square. Partial derivatives are taken by central finite
/// differences and the cell values summed by the rectangle rule. The exact
/// value is `+-(q - p tau)` depending on orientation.
pub fn cycle_integral(chart: &NeckChart, t: f64, grid: usize) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "cycle radius must be positive, got {t}"
        )));
    }
    if grid < 2 {
        return Err(Error::InvalidParameter("grid must be >= 2".into()));
    }
    let sgn = chart.side.sign();
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let phi = |u: f64, v: f64| -> (Complex64, Complex64) {
        let z = Complex64::new(u, 0.0) + chart.tau * v;
        let w = Complex64::new(t, 0.0) * (two_pi_i * (sgn * (u * chart.p + v * chart.q))).exp();
        (z, w)
    };
    let n = grid;
    let du = 1.0 / n as f64;
    // Derivative step decoupled from the grid: the integrand oscillates at
    // frequency 2 pi max(p, q, |tau|) in the parameters, so a grid-sized
    // step would bias the central differences by (omega h)^2 / 6.
    let h = 2e-6;
    let mut acc = Complex64::new(0.0, 0.0);
    for iu in 0..n {
        let u = (iu as f64 + 0.5) * du;
        for iv in 0..n {
            let v = (iv as f64 + 0.5) * du;
            let (z_up, w_up) = phi(u + h, v);
            let (z_um, w_um) = phi(u - h, v);
            let (z_vp, w_vp) = phi(u, v + h);
            let (z_vm, w_vm) = phi(u, v - h);
            let (_, w0) = phi(u, v);
            let dz_du = (z_up - z_um) / (2.0 * h);
            let dw_du = (w_up - w_um) / (2.0 * h);
            let dz_dv = (z_vp - z_vm) / (2.0 * h);
            let dw_dv = (w_vp - w_vm) / (2.0 * h);
            acc += (dz_du * dw_dv - dz_dv * dw_du) / w0 * (du * du);
        }
    }
    Ok(acc / two_pi_i)
}
