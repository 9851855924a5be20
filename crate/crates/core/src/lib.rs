//! Riemannian geometry of tangent Lie algebras.
//!
//! Given a Lie algebra `g` (structure constants) and two left-invariant
//! metrics `g1`, `g2`, the tangent algebra `g~ = g ⊕ g` (vertical and complete
//! lifts) carries the lifted metric `g~(X^c, Y^c) = g1(X, Y)`,
//! `g~(X^v, Y^v) = g2(X, Y)`, `g~(X^c, Y^v) = 0`. This crate builds `g~` in an
//! orthonormal frame, evaluates its Levi-Civita connection, curvature and
//! sectional curvature by closed-form lift formulas, and checks every one of
//! them against a generic Koszul-formula evaluation on the lifted algebra.
//!
//! Modules:
//!
//! - [`lie`]: structure constants, brackets, adjoints, center, automorphisms.
//! - [`geometry`]: Levi-Civita connection, curvature and field classification
//!   for any metric Lie algebra. This is the reference path.
//! - [`tangent`]: the tangent algebra, eigen-frame of `g1⁻¹g2`, and the lift
//!   formulas for connection, curvature and sectional curvature.
//! - [`symplectic`]: lifting a pair of symplectic forms and checking closedness.
//! - [`problem`], [`expr`], [`json`]: JSON problem files, the built-in catalog,
//!   the lifted-vector expression language and deterministic JSON output.

// `!(x > eps)` is used on purpose so NaN fails positivity checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod json;
pub mod lie;
pub mod problem;
pub mod symplectic;
pub mod tangent;
pub mod tensor;

pub use error::{GeometryError, Result};
pub use geometry::{Connection, CurvatureTensor, MetricLieAlgebra};
pub use lie::{ad_star, pullback_metric, LieAlgebra, LinearMap, Metric, Vector};
pub use symplectic::TwoForm;
pub use tangent::{build_tangent, LiftedVector, PhiData, TangentLieAlgebra};
pub use tensor::{Tensor3, Tensor4};

/// Default tolerances. All public checks take an explicit tolerance; these are
/// the values used when none is supplied.
pub mod tol {
    /// Jacobi residual accepted at construction.
    pub const JACOBI: f64 = 1e-9;
    /// Metric symmetry.
    pub const SYM: f64 = 1e-9;
    /// Smallest admissible Cholesky pivot.
    pub const PD: f64 = 1e-12;
    /// Generic check tolerance for reports.
    pub const CHECK: f64 = 1e-8;
}
