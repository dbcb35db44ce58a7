//! Divisor arithmetic on the blow-up of the projective plane at nine points.
//!
//! Classes live in `Z H + Z E_1 + ... + Z E_9` with the intersection form
//! `H.H = 1`, `H.E_i = 0`, `E_i.E_j = -delta_ij` (signature (1,9)). A class
//! is stored as `d * H - sum k_i E_i`. Ampleness certificates use the
//! sufficient criterion for uniform coefficients (`k >= 2`, `d >= 3k + 1`,
//! `9 <= d^2/k^2 - 1`) in exact integer arithmetic.

use num_complex::Complex64;
use serde::Serialize;

use crate::elliptic::{ComplexLattice, TorusPoint};
use crate::error::{Error, Result};
use crate::Side;

/// Integer divisor class `d * H - sum k_i E_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DivisorClass {
    pub d: i64,
    pub k: [i64; 9],
}

impl DivisorClass {
    pub fn new(d: i64, k: [i64; 9]) -> Self {
        DivisorClass { d, k }
    }

    /// `d * H - k * (E_1 + ... + E_9)`.
    pub fn uniform(d: i64, k: i64) -> Self {
        DivisorClass { d, k: [k; 9] }
    }

    pub fn hyperplane() -> Self {
        DivisorClass::uniform(1, 0)
    }

    /// The exceptional divisor `E_i` (0-based index).
    pub fn exceptional(i: usize) -> Self {
        let mut k = [0i64; 9];
        k[i] = -1;
        DivisorClass { d: 0, k }
    }

    pub fn is_uniform(&self) -> Option<i64> {
        let k0 = self.k[0];
        if self.k.iter().all(|&k| k == k0) {
            Some(k0)
        } else {
            None
        }
    }

    /// Intersection number under the fixed form.
    pub fn intersect(&self, other: &DivisorClass) -> i64 {
        let mut s = self.d * other.d;
        for i in 0..9 {
            s -= self.k[i] * other.k[i];
        }
        s
    }

    pub fn self_intersection(&self) -> i64 {
        self.intersect(self)
    }
}

/// The anticanonical class `3H - sum E_i`, the class of the strict-transform
/// elliptic curve.
pub fn anticanonical() -> DivisorClass {
    DivisorClass::uniform(3, 1)
}

/// Complex-coefficient divisor `c_H * H - sum c_{E,i} E_i`, pairing
/// C-bilinearly with integer classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexDivisor {
    pub c_h: Complex64,
    pub c_e: [Complex64; 9],
}

impl ComplexDivisor {
    pub fn pair(&self, other: &DivisorClass) -> Complex64 {
        let mut s = self.c_h * other.d as f64;
        for i in 0..9 {
            s -= self.c_e[i] * other.k[i] as f64;
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AmplenessVerdict {
    CertifiedAmple,
    NotCertified { reason: String },
}

impl AmplenessVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, AmplenessVerdict::CertifiedAmple)
    }
}

/// Sufficient ampleness certificate for uniform classes. The criterion is
/// one-directional: `NotCertified` never claims non-ampleness.
pub fn certify_ample(class: &DivisorClass) -> AmplenessVerdict {
    let Some(k) = class.is_uniform() else {
        return AmplenessVerdict::NotCertified {
            reason: "outside the uniform-coefficient hypothesis".into(),
        };
    };
    let d = class.d;
    if k < 2 {
        return AmplenessVerdict::NotCertified {
            reason: format!("k = {k} < 2"),
        };
    }
    if d < 3 * k + 1 {
        return AmplenessVerdict::NotCertified {
            reason: format!("d = {d} < 3k + 1 = {}", 3 * k + 1),
        };
    }
    // 9 <= d^2/k^2 - 1  <=>  10 k^2 <= d^2, exactly in integers.
    let d2 = (d as i128) * (d as i128);
    let k2 = (k as i128) * (k as i128);
    if 10 * k2 > d2 {
        return AmplenessVerdict::NotCertified {
            reason: format!("d^2/k^2 - 1 = {d}^2/{k}^2 - 1 < 9"),
        };
    }
    AmplenessVerdict::CertifiedAmple
}

/// All certified-ample uniform classes with the same pairing against the
/// anticanonical class as `lplus` (equivalently `d - 3k` equal), enumerated
/// up to `d <= d_max`. The input class itself is always included.
pub fn matched_pairs(lplus: &DivisorClass, d_max: i64) -> Result<Vec<DivisorClass>> {
    let Some(kp) = lplus.is_uniform() else {
        return Err(Error::NotCertifiedAmple(
            "matched_pairs requires a uniform class".into(),
        ));
    };
    if !certify_ample(lplus).is_certified() {
        return Err(Error::NotCertifiedAmple(format!(
            "{}H - {}*sum E_i is not certified ample",
            lplus.d, kp
        )));
    }
    let invariant = lplus.d - 3 * kp;
    let mut out = Vec::new();
    let mut k = 2;
    loop {
        let d = invariant + 3 * k;
        if d > d_max {
            break;
        }
        let cand = DivisorClass::uniform(d, k);
        if certify_ample(&cand).is_certified() {
            out.push(cand);
        }
        k += 1;
    }
    if !out.contains(lplus) {
        out.push(*lplus);
    }
    Ok(out)
}

/// Pullback of a divisor class under the model involution. The involution
/// matches the bases (`H` to `H`, `E_i` to `E_i`), so this is the identity on
/// coordinates; the side argument records which copy the class lives on.
pub fn involution_pullback(class: &DivisorClass, _side: Side) -> DivisorClass {
    *class
}

/// Gluing translation offset
/// `xi = ((p_minus . L_minus) - (p_plus . L_plus)) / b0`, reduced into the
/// fundamental parallelogram of the lattice. Requires both classes to pair
/// equally and nonzero with the anticanonical class.
pub fn gluing_offset(
    lplus: &DivisorClass,
    lminus: &DivisorClass,
    pplus: &ComplexDivisor,
    pminus: &ComplexDivisor,
    lattice: &ComplexLattice,
) -> Result<TorusPoint> {
    let c = anticanonical();
    let b_plus = lplus.intersect(&c);
    let b_minus = lminus.intersect(&c);
    if b_plus != b_minus {
        return Err(Error::MismatchedPairing(b_plus, b_minus));
    }
    if b_plus == 0 {
        return Err(Error::DegeneratePairing);
    }
    let xi = (pminus.pair(lminus) - pplus.pair(lplus)) / b_plus as f64;
    Ok(TorusPoint::reduce(xi, lattice))
}

/// Gram matrix of the intersection form in the basis `H, E_1, ..., E_9`.
pub fn gram_matrix() -> [[i64; 10]; 10] {
    let mut g = [[0i64; 10]; 10];
    g[0][0] = 1;
    for i in 1..10 {
        g[i][i] = -1;
    }
    g
}

/// Signature `(n_plus, n_minus)` of a symmetric matrix by Jacobi
/// diagonalization.
pub fn symmetric_signature(m: &[[i64; 10]; 10]) -> (usize, usize) {
    let mut a = [[0f64; 10]; 10];
    for i in 0..10 {
        for j in 0..10 {
            a[i][j] = m[i][j] as f64;
        }
    }
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..10 {
            for j in (i + 1)..10 {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..10 {
            for q in (p + 1)..10 {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..10 {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for i in 0..10 {
                    let api = a[p][i];
                    let aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
            }
        }
    }
    let mut pos = 0;
    let mut neg = 0;
    for i in 0..10 {
        if a[i][i] > 0.0 {
            pos += 1;
        } else if a[i][i] < 0.0 {
            neg += 1;
        }
    }
    (pos, neg)
}
