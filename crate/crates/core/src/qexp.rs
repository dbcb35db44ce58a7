//! Independent q-expansion evaluation of the Eisenstein series and the
//! j-invariant.
//!
//! This is a deliberately separate code path from the lattice sums in
//! [`crate::elliptic`]: it evaluates the classical Fourier expansions in the
//! nome `q = exp(2 pi i tau)` with divisor-sum coefficients. The two routes
//! share no arithmetic, so agreement between them bounds the truncation bias
//! of either. Used by the verification suite and the CLI cross-checks.

use num_complex::Complex64;

/// Number of q-powers carried; |q| < e^{-2 pi Im tau} so this is far past
/// machine precision for Im tau >= 0.4.
const NTERMS: usize = 256;

fn divisor_sums(power: u32) -> Vec<f64> {
    let mut sig = vec![0.0f64; NTERMS + 1];
    for d in 1..=NTERMS {
        let dp = (d as f64).powi(power as i32);
        let mut m = d;
        while m <= NTERMS {
            sig[m] += dp;
            m += d;
        }
    }
    sig
}

/// Weight-`2k` Eisenstein series via its normalized Fourier expansion,
/// `G_{2k} = 2 zeta(2k) E_{2k}`. Supports `k = 2` and `k = 3`.
pub fn eisenstein_qexp(tau: Complex64, k: i64) -> Complex64 {
    let pi = std::f64::consts::PI;
    let q = (Complex64::new(0.0, 2.0 * pi) * tau).exp();
    let (zeta, coeff, power) = match k {
        2 => (pi.powi(4) / 90.0, 240.0, 3),
        3 => (pi.powi(6) / 945.0, -504.0, 5),
        _ => panic!("q-expansion oracle implemented for k = 2, 3 only"),
    };
    let sig = divisor_sums(power);
    let mut s = Complex64::new(0.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    for (n, &c) in sig.iter().enumerate().skip(1) {
        qn *= q;
        s += c * qn;
        if qn.norm() < 1e-18 && n > 8 {
            break;
        }
    }
    2.0 * zeta * (Complex64::new(1.0, 0.0) + coeff * s)
}

/// j-invariant via the normalized Eisenstein series:
/// `j = 1728 E4^3 / (E4^3 - E6^2)`.
pub fn j_qexp(tau: Complex64) -> Complex64 {
    let pi = std::f64::consts::PI;
    let e4 = eisenstein_qexp(tau, 2) / (2.0 * pi.powi(4) / 90.0);
    let e6 = eisenstein_qexp(tau, 3) / (2.0 * pi.powi(6) / 945.0);
    let e4c = e4 * e4 * e4;
    1728.0 * e4c / (e4c - e6 * e6)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_cm_points() {
        let j_i = j_qexp(Complex64::new(0.0, 1.0));
        assert!((j_i - Complex64::new(1728.0, 0.0)).norm() < 1e-8);
        let j_2i = j_qexp(Complex64::new(0.0, 2.0));
        assert!((j_2i - Complex64::new(287496.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn g6_vanishes_at_i() {
        assert!(eisenstein_qexp(Complex64::new(0.0, 1.0), 3).norm() < 1e-12);
    }
}
