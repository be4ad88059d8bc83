//! Strongly doubly reversible pairs in `Sp(1)`, `SO(3)`, `SO(4)` and the
//! quaternionic hyperbolic isometry groups `Sp(n,1)`.
//!
//! The crate is layered bottom-up:
//!
//! * [`quat`]: quaternion arithmetic and scalar solvers.
//! * [`qspace`]: quaternionic matrices, Hermitian forms, boundary points,
//!   Lie algebras and adjoint eigenspace dimensions.
//! * [`spectral`]: right eigenvalues, the hyperbolic/elliptic/parabolic
//!   trichotomy and the hyperbolic normal form.
//! * [`cartan`]: Hermitian triple products, the Cartan angular invariant and
//!   skew-involutions interchanging two pairs of boundary points.
//! * [`reversers`]: reverser spaces and every decision or construction of
//!   strongly doubly reversible pairs.
//! * [`experiments`]: seeded sampling, Monte Carlo genericity experiments and
//!   the Lie-algebra dimension audit.

pub mod cartan;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod qspace;
pub mod quat;
pub mod reversers;
pub mod spectral;

pub use error::{Error, Result};
pub use qspace::{BoundaryPoint, FormTag, HermitianSpace, LieDims, QMatrix};
pub use quat::{ComplexSplit, EigenvalueClass, Quaternion};

/// Numerical thresholds shared by the constructions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Residual bound for constructed witnesses and group membership.
    pub construction: f64,
    /// Bound for algebraic identities on well-conditioned inputs.
    pub identity: f64,
    /// `|modulus - 1|` at or below this counts as unit modulus.
    pub unit_band: f64,
    /// Relative factor of the numerical-rank threshold
    /// `sigma_max * max(rows, cols) * rank`.
    pub rank: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            construction: 1e-9,
            identity: 1e-12,
            unit_band: 1e-7,
            rank: 1e-12,
        }
    }
}

impl Tolerance {
    /// Default thresholds with the construction tolerance replaced.
    pub fn with_construction(construction: f64) -> Self {
        Tolerance {
            construction,
            ..Tolerance::default()
        }
    }
}
