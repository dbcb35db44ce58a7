use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("tau must have positive imaginary part, got {0}")]
    TauNotInUpperHalfPlane(String),
    #[error("invalid lattice-sum config: {0}")]
    InvalidSumConfig(String),
    #[error("eisenstein weight parameter k must be >= 2, got {0}")]
    EisensteinWeightTooSmall(i64),
    #[error("evaluation point within {guard:e} of a lattice point")]
    NearPole { guard: f64 },
    #[error("projective point has all coordinates zero")]
    ZeroProjectivePoint,
    #[error("cubic discriminant vanishes numerically; singular curve")]
    SingularCurve,
    #[error("scan bound too small: {0}")]
    ScanBoundTooSmall(String),
    #[error("divisor pairing with the anticanonical class is zero; offset undefined")]
    DegeneratePairing,
    #[error("divisor classes pair differently with the anticanonical class: {0} vs {1}")]
    MismatchedPairing(i64, i64),
    #[error("imaginary part of the Hermitian form is not integral on generators: {0}")]
    NonIntegralForm(String),
    #[error("toroidal lattice generators are linearly dependent over R")]
    DegenerateSpan,
    #[error("kind/type computation is only supported for the rank-3 lattice family")]
    UnsupportedLattice,
    #[error("intersection number with the curve must be positive, got {0}")]
    NonPositiveIntersection(i64),
    #[error("neck point has w = 0 (zero section); operation undefined there")]
    ZeroSection,
    #[error("point is not in the gluing annulus: |w| = {0}")]
    OutsideGluingAnnulus(f64),
    #[error("point is outside the model region |w| < sqrt(eps0)*r: |w| = {0}")]
    OutsideModelRegion(f64),
    #[error("invalid chart or gluing parameter: {0}")]
    InvalidParameter(String),
    #[error("finite-difference step {step} too large for |w| = {radius}")]
    StepTooLarge { step: f64, radius: f64 },
    #[error("degenerate Jacobian in finite-difference pullback")]
    DegenerateJacobian,
    #[error("ample-line-bundle certificate required: {0}")]
    NotCertifiedAmple(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
