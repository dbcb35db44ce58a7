//! Desk-scale computational toolkit for the gluing construction of symmetric
//! projective K3 surfaces out of complements of elliptic curves in the
//! nine-point blow-up of the projective plane.
//!
//! The crate cross-verifies every explicit formula in that construction:
//!
//! - [`elliptic`]: lattice Eisenstein series, the Weierstrass P-function,
//!   the projective embedding of complex tori and the j-invariant;
//! - [`qexp`]: an independent q-expansion route for the same quantities;
//! - [`diophantine`]: scanning and certifying the Diophantine condition for
//!   real pairs, with exact arithmetic from [`real`];
//! - [`picard`]: intersection theory on the blow-up, ampleness certificates
//!   and the gluing translation offset;
//! - [`toroidal`]: the rank-3 toroidal lattice in C^2, ample Riemann forms,
//!   type/kind, and theta-bundle factors of automorphy;
//! - [`neck`]: quotient charts of the tubular neighborhood, monodromies, the
//!   annulus gluing map, the model involution and the holomorphic 2-form;
//! - [`metric`]: mollifier/cutoff machinery, regularized max, and the
//!   explicit complete Ricci-flat neck metric;
//! - [`family`]: the nine-point deformation family bookkeeping;
//! - [`verify`]: the end-to-end verification suite run by tests and the CLI.

pub mod diophantine;
pub mod elliptic;
pub mod error;
pub mod family;
pub mod metric;
pub mod neck;
pub mod picard;
pub mod qexp;
pub mod quad;
pub mod real;
pub mod toroidal;
pub mod verify;

pub use error::{Error, Result};

use serde::Serialize;

/// Which copy of the glued surface a chart or class lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    /// +1 on the plus side, -1 on the minus side (sign of the monodromy
    /// exponents).
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}
