//! The rank-3 toroidal lattice in C^2 attached to a monodromy pair `(p, q)`:
//! toroidality decisions, ample Riemann forms, type/kind, and the theta
//! bundle's factor of automorphy with its semicharacter.
//!
//! Generators are fixed as `l1 = (0, 1)`, `l2 = (1, p)`, `l3 = (tau, q)`;
//! the quotient `C^2 / <l1, l2, l3>` is the model of the punctured tubular
//! neighborhood (see [`crate::neck`] for the chart correspondence).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::RealNumber;

const INT_TOL: f64 = 1e-9;

/// Lattice `<(0,1), (1,p), (tau,q)>` in C^2.
#[derive(Debug, Clone)]
pub struct ToroidalLattice {
    tau: Complex64,
    p: RealNumber,
    q: RealNumber,
}

impl ToroidalLattice {
    pub fn new(tau: Complex64, p: RealNumber, q: RealNumber) -> Result<Self> {
        if !(tau.im > 0.0 && tau.re.is_finite()) {
            return Err(Error::TauNotInUpperHalfPlane(format!("{tau}")));
        }
        Ok(ToroidalLattice { tau, p, q })
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn p(&self) -> &RealNumber {
        &self.p
    }

    pub fn q(&self) -> &RealNumber {
        &self.q
    }

    /// The three generators as vectors in C^2.
    pub fn generators(&self) -> [[Complex64; 2]; 3] {
        [
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            [Complex64::new(1.0, 0.0), Complex64::new(self.p.to_f64(), 0.0)],
            [self.tau, Complex64::new(self.q.to_f64(), 0.0)],
        ]
    }

    /// Integer combination `a*l1 + b*l2 + c*l3`.
    pub fn combine(&self, a: i64, b: i64, c: i64) -> [Complex64; 2] {
        let g = self.generators();
        let mut v = [Complex64::new(0.0, 0.0); 2];
        for i in 0..2 {
            v[i] = g[0][i] * a as f64 + g[1][i] * b as f64 + g[2][i] * c as f64;
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "toroidal", rename_all = "snake_case")]
pub enum ToroidalVerdict {
    Toroidal,
    /// A nonzero functional `sigma` with integer scalar products against all
    /// three generators, refuting toroidality.
    NotToroidal {
        witness: [Complex64; 2],
        /// `<sigma, l1>, <sigma, l2>, <sigma, l3>`.
        products: [i64; 3],
    },
    Undecided,
}

/// Decides toroidality of `C^2 / lattice`.
///
/// A refuting functional must satisfy `sigma_2 = n1`, `sigma_1 = n2 - p n1`
/// and `(n2 - p n1) tau = n3 - q n1` with all `n_i` integers; `tau` off the
/// real axis forces `n2 = p n1`, `n3 = q n1`. Exact tiers decide outright:
/// both coordinates rational gives the witness `n1 = lcm` of denominators, a
/// quadratic-irrational coordinate rules every witness out. Float inputs are
/// searched up to `search_bound` and never upgraded past `Undecided`.
pub fn is_toroidal(lat: &ToroidalLattice, search_bound: u64) -> Result<ToroidalVerdict> {
    if search_bound < 1 {
        return Err(Error::ScanBoundTooSmall("search_bound must be >= 1".into()));
    }
    if matches!(lat.p(), RealNumber::Quadratic { .. })
        || matches!(lat.q(), RealNumber::Quadratic { .. })
    {
        return Ok(ToroidalVerdict::Toroidal);
    }
    if let (Some(dp), Some(dq)) = (lat.p().denominator(), lat.q().denominator()) {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        let n1 = dp.lcm(&dq).to_u64().ok_or_else(|| {
            Error::Parse("denominator lcm exceeds u64; witness out of range".into())
        })? as i64;
        let np = (lat.p().to_f64() * n1 as f64).round() as i64;
        let nq = (lat.q().to_f64() * n1 as f64).round() as i64;
        return Ok(ToroidalVerdict::NotToroidal {
            witness: [Complex64::new(0.0, 0.0), Complex64::new(n1 as f64, 0.0)],
            products: [n1, np, nq],
        });
    }
    // At least one float coordinate: finite search for an exact hit.
    let pf = lat.p().to_f64();
    let qf = lat.q().to_f64();
    for n1 in 1..=search_bound {
        let np = pf * n1 as f64;
        let nq = qf * n1 as f64;
        if np.fract() == 0.0 && nq.fract() == 0.0 {
            return Ok(ToroidalVerdict::NotToroidal {
                witness: [Complex64::new(0.0, 0.0), Complex64::new(n1 as f64, 0.0)],
                products: [n1 as i64, np as i64, nq as i64],
            });
        }
    }
    Ok(ToroidalVerdict::Undecided)
}

/// Hermitian 2x2 form `H(x, y) = x^t M conj(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HermitianForm {
    pub m: [[Complex64; 2]; 2],
}

impl HermitianForm {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        for i in 0..2 {
            for j in 0..2 {
                if (m[i][j] - m[j][i].conj()).norm() > 1e-12 {
                    return Err(Error::InvalidParameter("matrix is not Hermitian".into()));
                }
            }
        }
        Ok(HermitianForm { m })
    }

    pub fn diagonal(a: f64, b: f64) -> Self {
        HermitianForm {
            m: [
                [Complex64::new(a, 0.0), Complex64::new(0.0, 0.0)],
                [Complex64::new(0.0, 0.0), Complex64::new(b, 0.0)],
            ],
        }
    }

    pub fn pair(&self, x: [Complex64; 2], y: [Complex64; 2]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                s += x[i] * self.m[i][j] * y[j].conj();
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "riemann_form", rename_all = "snake_case")]
pub enum RiemannFormCheck {
    AmpleRiemannForm,
    Fail { condition: String },
}

impl RiemannFormCheck {
    pub fn is_ample(&self) -> bool {
        matches!(self, RiemannFormCheck::AmpleRiemannForm)
    }
}

/// Checks the two ample-Riemann-form conditions for the lattice: integral
/// imaginary part on all generator pairs, and positive definiteness on the
/// maximal complex subspace `{(x, 0)}` (i.e. `M_11 > 0`).
pub fn riemann_form_check(form: &HermitianForm, lat: &ToroidalLattice) -> RiemannFormCheck {
    let gens = lat.generators();
    for (i, gi) in gens.iter().enumerate() {
        for (j, gj) in gens.iter().enumerate() {
            let im = form.pair(*gi, *gj).im;
            if (im - im.round()).abs() > INT_TOL {
                return RiemannFormCheck::Fail {
                    condition: format!(
                        "integrality: Im H(l{}, l{}) = {} is not an integer",
                        i + 1,
                        j + 1,
                        im
                    ),
                };
            }
        }
    }
    let e1 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let h11 = form.pair(e1, e1);
    if !(h11.re > 0.0) || h11.im.abs() > 1e-12 {
        return RiemannFormCheck::Fail {
            condition: format!("positivity: H((1,0),(1,0)) = {h11} is not positive"),
        };
    }
    RiemannFormCheck::AmpleRiemannForm
}

/// Rank of a real matrix (rows x cols, row-major) by Gaussian elimination
/// with partial pivoting.
fn real_rank(rows: usize, cols: usize, mut a: Vec<f64>, tol: f64) -> usize {
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let mut piv = row;
        for r in row..rows {
            if a[r * cols + col].abs() > a[piv * cols + col].abs() {
                piv = r;
            }
        }
        if a[piv * cols + col].abs() <= tol {
            continue;
        }
        for c in 0..cols {
            a.swap(row * cols + c, piv * cols + c);
        }
        for r in (row + 1)..rows {
            let f = a[r * cols + col] / a[row * cols + col];
            for c in col..cols {
                a[r * cols + c] -= f * a[row * cols + c];
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

fn as_r4(v: [Complex64; 2]) -> [f64; 4] {
    [v[0].re, v[0].im, v[1].re, v[1].im]
}

/// Rank of the real span of the three generators inside R^4.
pub fn real_span_rank(lat: &ToroidalLattice) -> usize {
    let gens = lat.generators();
    let mut a = Vec::with_capacity(12);
    for row in 0..4 {
        for g in &gens {
            a.push(as_r4(*g)[row]);
        }
    }
    real_rank(4, 3, a, 1e-10)
}

/// Type and kind of the toroidal group.
///
/// The type is the complex dimension of the maximal complex subspace of the
/// real span, computed as `(dim U + dim U - dim(U + iU)) / 2` by real rank
/// arithmetic. The kind is `(rank of Im G on the span - 2 * type) / 2` for
/// the standard ample Riemann form `G = diag(1/Im tau, 0)`; the rank of the
/// alternating form is the rank of its Gram matrix on the generators.
pub fn type_and_kind(lat: &ToroidalLattice) -> Result<(usize, usize)> {
    let gens = lat.generators();
    let span = real_span_rank(lat);
    if span != 3 {
        return Err(Error::DegenerateSpan);
    }
    // Columns of [B | JB] where J is multiplication by i on C^2.
    let mut cols: Vec<[f64; 4]> = Vec::with_capacity(6);
    for g in &gens {
        cols.push(as_r4(*g));
    }
    for g in &gens {
        let jg = [
            g[0] * Complex64::new(0.0, 1.0),
            g[1] * Complex64::new(0.0, 1.0),
        ];
        cols.push(as_r4(jg));
    }
    let mut a = Vec::with_capacity(24);
    for row in 0..4 {
        for c in &cols {
            a.push(c[row]);
        }
    }
    let dim_sum = real_rank(4, 6, a, 1e-10);
    let inter_real = 2 * span - dim_sum; // dim(U) + dim(iU) - dim(U + iU)
    if inter_real % 2 != 0 {
        return Err(Error::UnsupportedLattice);
    }
    let typ = inter_real / 2;

    let g = HermitianForm::diagonal(1.0 / lat.tau().im, 0.0);
    let mut gram = Vec::with_capacity(9);
    for gi in &gens {
        for gj in &gens {
            gram.push(g.pair(*gi, *gj).im);
        }
    }
    let rank_im = real_rank(3, 3, gram, 1e-10);
    if rank_im < 2 * typ || (rank_im - 2 * typ) % 2 != 0 {
        return Err(Error::UnsupportedLattice);
    }
    Ok((typ, (rank_im - 2 * typ) / 2))
}

/// Human-readable description of the Stein-subgroup fibration implied by
/// type `q` and kind `k` in complex dimension 2: `K = C^k x (C*)^m` with
/// `2k + m = 2 - q`, and the quotient is an abelian variety of dimension
/// `q + k`. Derived bookkeeping, not a computation.
pub fn stein_fibration_summary(typ: usize, kind: usize) -> Result<String> {
    let n = 2usize;
    if n < typ + 2 * kind {
        return Err(Error::UnsupportedLattice);
    }
    let m = n - typ - 2 * kind;
    Ok(format!(
        "maximal closed Stein subgroup isomorphic to C^{kind} x (C*)^{m}; \
         quotient is an abelian variety of dimension {}",
        typ + kind
    ))
}

/// Data of a theta line bundle: Hermitian form plus semicharacter values on
/// the ordered generators.
#[derive(Debug, Clone)]
pub struct ThetaBundleSpec {
    pub form: HermitianForm,
    pub rho_gen: [Complex64; 3],
}

impl ThetaBundleSpec {
    /// Default semicharacter values (1, 1, 1).
    pub fn with_unit_rho(form: HermitianForm) -> Self {
        ThetaBundleSpec {
            form,
            rho_gen: [Complex64::new(1.0, 0.0); 3],
        }
    }

    pub fn new(form: HermitianForm, rho_gen: [Complex64; 3]) -> Result<Self> {
        for r in &rho_gen {
            if (r.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(
                    "semicharacter values must be unimodular".into(),
                ));
            }
        }
        Ok(ThetaBundleSpec { form, rho_gen })
    }

    /// Pairwise `Im H(l_i, l_j)`, checked to be integral.
    fn generator_pairings(&self, lat: &ToroidalLattice) -> Result<[[f64; 3]; 3]> {
        let gens = lat.generators();
        let mut e = [[0.0f64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let im = self.form.pair(gens[i], gens[j]).im;
                if (im - im.round()).abs() > INT_TOL {
                    return Err(Error::NonIntegralForm(format!(
                        "Im H(l{}, l{}) = {im}",
                        i + 1,
                        j + 1
                    )));
                }
                e[i][j] = im.round();
            }
        }
        Ok(e)
    }
}

/// Semicharacter value on `a*l1 + b*l2 + c*l3`, extended from the generator
/// values by the functional equation
/// `rho(l + m) = rho(l) rho(m) e^{pi i Im H(l, m)}` applied in the fixed
/// order l1, l2, l3. With integral pairings this closes into
/// `rho1^a rho2^b rho3^c e^{pi i (ab E12 + ac E13 + bc E23)}`.
pub fn semicharacter(
    spec: &ThetaBundleSpec,
    lat: &ToroidalLattice,
    lam: (i64, i64, i64),
) -> Result<Complex64> {
    let e = spec.generator_pairings(lat)?;
    let (a, b, c) = lam;
    let phase = std::f64::consts::PI
        * ((a * b) as f64 * e[0][1] + (a * c) as f64 * e[0][2] + (b * c) as f64 * e[1][2]);
    let rot = Complex64::new(0.0, phase).exp();
    Ok(spec.rho_gen[0].powi(a as i32)
        * spec.rho_gen[1].powi(b as i32)
        * spec.rho_gen[2].powi(c as i32)
        * rot)
}

/// Factor of automorphy
/// `alpha_l(x) = rho(l) e^{pi H(x, l) + (pi/2) H(l, l)}` for the integer
/// combination `l = a*l1 + b*l2 + c*l3`.
pub fn theta_factor(
    spec: &ThetaBundleSpec,
    lat: &ToroidalLattice,
    lam: (i64, i64, i64),
    x: [Complex64; 2],
) -> Result<Complex64> {
    let rho = semicharacter(spec, lat, lam)?;
    let lv = lat.combine(lam.0, lam.1, lam.2);
    let pi = std::f64::consts::PI;
    let expo = pi * spec.form.pair(x, lv) + 0.5 * pi * spec.form.pair(lv, lv);
    Ok(rho * expo.exp())
}

/// Standard Hermitian form `diag(b0 / Im tau, 0)` attached to a curve class
/// with intersection number `b0 > 0`.
pub fn hermitian_form_from_intersection(b0: i64, tau: Complex64) -> Result<HermitianForm> {
    if b0 <= 0 {
        return Err(Error::NonPositiveIntersection(b0));
    }
    if !(tau.im > 0.0) {
        return Err(Error::TauNotInUpperHalfPlane(format!("{tau}")));
    }
    Ok(HermitianForm::diagonal(b0 as f64 / tau.im, 0.0))
}
