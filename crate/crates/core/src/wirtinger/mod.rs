//! Complex arithmetic and Wirtinger-derivative jets.
//!
//! A [`Jet`] carries the value of a complex function together with all of its
//! `∂_z^a ∂_z̄^b` partials up to order 3. Every geometric formula in the crate is
//! evaluated on jets, so the derivative bookkeeping lives in exactly one place.
//! [`fd_oracle`] provides an independent finite-difference reference.

mod elementary;
mod fd;
mod jet;

pub use elementary::Elementary;
pub use fd::fd_oracle;
pub use jet::{Jet, MAX_ORDER};

pub use num_complex::Complex64 as Complex;

/// Magnitudes below this are treated as an exact zero denominator.
pub const DIVISION_EPS: f64 = 1e-300;

/// Half-width of the excluded strip around the principal branch cut of `log`/`sqrt`.
pub const BRANCH_CUT_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum JetError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("argument on the principal branch cut")]
    BranchCut,
}

/// A point of the parameter plane, identified with `u + i v`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RealPair {
    pub u: f64,
    pub v: f64,
}

impl From<RealPair> for Complex {
    fn from(p: RealPair) -> Complex {
        Complex::new(p.u, p.v)
    }
}

impl From<Complex> for RealPair {
    fn from(z: Complex) -> RealPair {
        RealPair { u: z.re, v: z.im }
    }
}
