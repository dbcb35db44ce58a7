//! Bookkeeping for the nine-point deformation family: the parameter space
//! (a modulus plus eight free points on the universal cover), the solved
//! ninth point, fiber assembly, fiber distinction by the j-invariant, and
//! the constant smooth invariants of the blow-up.

use num_complex::Complex64;
use serde::Serialize;

use crate::diophantine;
use crate::elliptic::{
    self, ComplexLattice, LatticeSumConfig, TorusPoint,
};
use crate::error::{Error, Result};
use crate::neck::NeckChart;
use crate::picard::{anticanonical, certify_ample, DivisorClass};
use crate::real::RealNumber;
use crate::Side;

/// One point of the parameter space: a modulus, eight marked points on the
/// universal cover, and the fixed monodromy pair.
#[derive(Debug, Clone)]
pub struct FamilyParams {
    pub tau: Complex64,
    pub p_hat: [Complex64; 8],
    pub dioph: (RealNumber, RealNumber),
}

impl FamilyParams {
    /// Rejects moduli off the upper half plane and monodromy pairs that are
    /// exactly refuted (both coordinates rational). Scan-tier validation is
    /// a separate, heavier call ([`FamilyParams::validate_dioph`]).
    pub fn new(
        tau: Complex64,
        p_hat: [Complex64; 8],
        p: RealNumber,
        q: RealNumber,
    ) -> Result<Self> {
        if !(tau.im > 0.0) {
            return Err(Error::TauNotInUpperHalfPlane(format!("{tau}")));
        }
        if p.is_rational() && q.is_rational() {
            return Err(Error::InvalidParameter(
                "monodromy pair with two rational coordinates is refuted, not Diophantine".into(),
            ));
        }
        Ok(FamilyParams {
            tau,
            p_hat,
            dioph: (p, q),
        })
    }

    pub fn lattice(&self) -> ComplexLattice {
        ComplexLattice::new(self.tau).expect("validated on construction")
    }

    /// Runs the scan-tier check on the monodromy pair; errors when the pair
    /// is refuted.
    pub fn validate_dioph(&self, n_max: u64) -> Result<diophantine::DiophantineVerdict> {
        let v = diophantine::check_pair(&self.dioph.0, &self.dioph.1, n_max)?;
        if let diophantine::VerdictStatus::Refuted { witness_n } = v.status {
            return Err(Error::InvalidParameter(format!(
                "monodromy pair refuted at n = {witness_n}"
            )));
        }
        Ok(v)
    }
}

/// Solves the ninth blow-up point from the other eight and the monodromy
/// pair: with the base point fixed at the zero class, the constraint
/// `9*0 - sum p_j - p_9 = q - p tau (mod <1, tau>)` gives
/// `p_9 = -sum p_j - q + p tau`, reduced into the fundamental parallelogram.
pub fn ninth_point(params: &FamilyParams) -> TorusPoint {
    let lattice = params.lattice();
    let sum: Complex64 = params.p_hat.iter().sum();
    let pv = params.dioph.0.to_f64();
    let qv = params.dioph.1.to_f64();
    let z = -sum - qv + params.tau * pv;
    TorusPoint::reduce(z, &lattice)
}

/// Residual of the nine-point constraint on a solved configuration:
/// distance of `9*0 - sum p_j - p_9 - (q - p tau)` to the lattice.
pub fn constraint_residual(
    points: &[TorusPoint; 9],
    tau: Complex64,
    p: f64,
    q: f64,
) -> Result<f64> {
    let lattice = ComplexLattice::new(tau)?;
    let sum: Complex64 = points.iter().map(|pt| pt.z()).sum();
    let lhs = -sum - (Complex64::new(q, 0.0) - tau * p);
    Ok(lattice.dist_to_lattice(lhs))
}

/// One fiber of the family: reduced marked points, the chosen ample class,
/// its curve intersection number, and the attached neck chart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberDescriptor {
    pub tau: Complex64,
    pub points: [TorusPoint; 9],
    pub ample: DivisorClass,
    pub b0: i64,
    pub neck: NeckChart,
}

/// Assembles a fiber: the eight cover points reduced to the torus, the
/// solved ninth point, and the neck chart carrying the monodromy exponents.
pub fn build_fiber(params: &FamilyParams, ample: &DivisorClass) -> Result<FiberDescriptor> {
    let verdict = certify_ample(ample);
    if !verdict.is_certified() {
        return Err(Error::NotCertifiedAmple(format!("{verdict:?}")));
    }
    let lattice = params.lattice();
    let mut points = [TorusPoint::zero(); 9];
    for (i, ph) in params.p_hat.iter().enumerate() {
        points[i] = TorusPoint::reduce(*ph, &lattice);
    }
    points[8] = ninth_point(params);
    let b0 = ample.intersect(&anticanonical());
    debug_assert!(b0 > 0);
    let neck = NeckChart::new(
        params.tau,
        params.dioph.0.to_f64(),
        params.dioph.1.to_f64(),
        crate::metric::DEFAULT_R,
        Side::Plus,
    )?;
    Ok(FiberDescriptor {
        tau: params.tau,
        points,
        ample: *ample,
        b0,
        neck,
    })
}

/// Outcome of comparing two fibers through the j-invariants of their base
/// curves. Distinct j-values certify non-isomorphic curve classes (hence
/// non-isomorphic complements); equality only ever yields `SameCurveClass`
/// when the moduli agree under the modular tests.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum FiberComparison {
    DistinctCurves { j1: Complex64, j2: Complex64 },
    SameCurveClass,
    Undecided,
}

pub fn fibers_distinct(
    f1: &FiberDescriptor,
    f2: &FiberDescriptor,
    cfg: &LatticeSumConfig,
    tol: f64,
) -> Result<FiberComparison> {
    let l1 = ComplexLattice::new(f1.tau)?;
    let l2 = ComplexLattice::new(f2.tau)?;
    let j1 = elliptic::j_invariant(&l1, cfg)?;
    let j2 = elliptic::j_invariant(&l2, cfg)?;
    if (j1 - j2).norm() > 2.0 * tol {
        return Ok(FiberComparison::DistinctCurves { j1, j2 });
    }
    if elliptic::modular_equivalent(f1.tau, f2.tau, 1e-9)? {
        Ok(FiberComparison::SameCurveClass)
    } else {
        Ok(FiberComparison::Undecided)
    }
}

/// Constant smooth invariants of the nine-point blow-up of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TopologyReport {
    pub euler: i64,
    pub b2: i64,
    pub signature: i64,
}

/// Euler number `3 + 9`, second Betti number `10`, signature `1 - 9`:
/// identical for every fiber.
pub fn topology_report(_fiber: &FiberDescriptor) -> TopologyReport {
    TopologyReport {
        euler: 12,
        b2: 10,
        signature: -8,
    }
}
