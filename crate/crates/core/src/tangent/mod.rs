//! The tangent Lie algebra `g~ = g ⊕ g` with the lifted metric built from two
//! metrics `g1` (complete block) and `g2` (vertical block).
//!
//! Lifted brackets are `[X^c, Y^c] = [X, Y]^c`, `[X^c, Y^v] = [X, Y]^v` and
//! `[X^v, Y^v] = 0`. All lifted tensors are stored in the orthonormal frame
//!
//! ```text
//! index 0..n-1   : Y_i     = X_i^v / sqrt(λ_i)
//! index n..2n-1  : Y_{n+i} = X_i^c
//! ```
//!
//! where `X_1..X_n` are `g1`-orthonormal eigenvectors of `φ = g1⁻¹ g2` with
//! eigenvalues `λ_1 ≤ … ≤ λ_n`. In that frame the lifted metric is the identity.

mod connection;
mod curvature;
mod invariance;
mod phi;

pub use connection::{
    lifted_connection_closed_form, lifted_connection_structure_constants,
    vertical_vertical_coefficients,
};
pub use curvature::{
    basis_sectional_closed_form, block_formula, lifted_curvature, lifted_sectional,
    operator_curvature_report, BlockDeviation, CurvatureBlock, LiftPair, LiftedCurvature,
    OperatorItem, OperatorReport,
};
pub use invariance::{
    bi_invariance_of_lift, lift_automorphism, unnormalized_lift, LiftBiInvariance,
};
pub use phi::{compute_phi, PhiData};

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;

use crate::error::{GeometryError, Result};
use crate::geometry::MetricLieAlgebra;
use crate::lie::{LieAlgebra, LinearMap, Metric, Vector};
use crate::tensor::Tensor3;

/// Human-readable description of the lifted index convention, emitted with
/// every serialized lifted tensor.
pub const INDEX_CONVENTION: &str =
    "0..n-1: X_i^v/sqrt(lambda_i); n..2n-1: X_i^c; X_i = i-th g1-orthonormal eigenvector of g1^-1 g2, lambda ascending";

/// `g~` together with everything needed to move between the input basis,
/// the eigenframe `B1` and the lifted frame.
#[derive(Debug, Clone)]
pub struct TangentLieAlgebra {
    input: LieAlgebra,
    g1: Metric,
    g2: Metric,
    phi: PhiData,
    /// `B1⁻¹ = B1ᵀ g1`, maps input coordinates to frame coordinates.
    to_frame: DMatrix<f64>,
    base: LieAlgebra,
    lifted: LieAlgebra,
    lifted_metric: Metric,
}

impl TangentLieAlgebra {
    /// Builds `g~` from an algebra (in its input basis) and two metrics on it.
    pub fn build(a: &LieAlgebra, g1: &Metric, g2: &Metric) -> Result<Self> {
        let n = a.dim();
        for d in [g1.dim(), g2.dim()] {
            if d != n {
                return Err(GeometryError::InvalidDimension {
                    expected: n,
                    found: d,
                });
            }
        }
        let phi = compute_phi(g1, g2)?;
        let base = a
            .change_basis(&phi.b1)?
            .with_labels(frame_labels(a, phi.b1.matrix()));
        let to_frame = phi.b1.matrix().transpose() * g1.matrix();
        let lifted = lift_constants(&base, &phi.lambdas);
        Ok(Self {
            input: a.clone(),
            g1: g1.clone(),
            g2: g2.clone(),
            phi,
            to_frame,
            base,
            lifted,
            lifted_metric: Metric::identity(2 * n),
        })
    }

    /// Base dimension `n`.
    pub fn n(&self) -> usize {
        self.base.dim()
    }

    pub fn input(&self) -> &LieAlgebra {
        &self.input
    }

    pub fn g1(&self) -> &Metric {
        &self.g1
    }

    pub fn g2(&self) -> &Metric {
        &self.g2
    }

    pub fn phi(&self) -> &PhiData {
        &self.phi
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.phi.lambdas
    }

    /// The base algebra re-expressed in the eigenframe `B1`.
    pub fn base(&self) -> &LieAlgebra {
        &self.base
    }

    /// Structure constants of `g~` in the lifted frame.
    pub fn lifted(&self) -> &LieAlgebra {
        &self.lifted
    }

    /// Identity matrix: the lifted frame is orthonormal.
    pub fn lifted_metric(&self) -> &Metric {
        &self.lifted_metric
    }

    pub fn lifted_geometry(&self) -> MetricLieAlgebra {
        MetricLieAlgebra::new(self.lifted.clone(), self.lifted_metric.clone())
            .expect("dimensions agree by construction")
    }

    /// `g1` in the eigenframe (the identity).
    pub fn frame_metric1(&self) -> Metric {
        Metric::identity(self.n())
    }

    /// `g2` in the eigenframe, `diag(λ)`.
    pub fn frame_metric2(&self) -> Metric {
        Metric::diagonal(&self.phi.lambdas).expect("eigenvalues are positive")
    }

    pub fn frame_geometry1(&self) -> MetricLieAlgebra {
        MetricLieAlgebra::new(self.base.clone(), self.frame_metric1()).expect("dims agree")
    }

    pub fn frame_geometry2(&self) -> MetricLieAlgebra {
        MetricLieAlgebra::new(self.base.clone(), self.frame_metric2()).expect("dims agree")
    }

    /// Input-basis coordinates to eigenframe coordinates.
    pub fn to_frame(&self, x: &Vector) -> Result<Vector> {
        self.input.check_vec(x)?;
        Ok(&self.to_frame * x)
    }

    /// Eigenframe coordinates back to the input basis.
    pub fn from_frame(&self, x: &Vector) -> Result<Vector> {
        self.base.check_vec(x)?;
        Ok(self.phi.b1.matrix() * x)
    }

    /// `blockdiag(g2, g1)`: the lifted metric on `{X_i^v, X_i^c}` in the input basis.
    pub fn unnormalized_metric(&self) -> DMatrix<f64> {
        block_diag(self.g2.matrix(), self.g1.matrix())
    }

    /// Matrix taking `(a, b)` (coefficients of `Σ a_i X_i^v + Σ b_i X_i^c` in the
    /// input basis) to lifted-frame coordinates.
    pub fn unnormalized_to_lifted(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut vert = self.to_frame.clone();
        for i in 0..n {
            let s = self.phi.lambdas[i].sqrt();
            vert.row_mut(i).scale_mut(s);
        }
        block_diag(&vert, &self.to_frame)
    }
}

/// Structure constants of the lifted algebra in the frame `Y`:
/// vertical-vertical brackets vanish, `[Y_{n+i}, Y_j] = Σ_k sqrt(λ_k/λ_j) c_ij^k Y_k`,
/// and the complete block copies `c`.
fn lift_constants(base: &LieAlgebra, lambdas: &[f64]) -> LieAlgebra {
    let n = base.dim();
    let s: Vec<f64> = lambdas.iter().map(|l| l.sqrt()).collect();
    let mut b = Tensor3::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let c = base.c(i, j, k);
                if c == 0.0 {
                    continue;
                }
                b[(n + i, n + j, n + k)] = c;
                b[(i, n + j, k)] = s[k] / s[i] * c;
                b[(n + i, j, k)] = s[k] / s[j] * c;
            }
        }
    }
    let mut labels: Vec<String> = base.labels().iter().map(|l| format!("v_{l}")).collect();
    labels.extend(base.labels().iter().map(|l| format!("c_{l}")));
    LieAlgebra::from_tensor_upper(labels, &b)
}

/// Eigenframe labels: reuse the input label when the frame vector is exactly
/// an input basis vector, otherwise `b1..bn`.
fn frame_labels(a: &LieAlgebra, b1: &DMatrix<f64>) -> Vec<String> {
    let n = a.dim();
    (0..n)
        .map(|col| {
            let column = b1.column(col);
            let hit =
                (0..n).find(|&m| column[m] == 1.0 && (0..n).all(|r| r == m || column[r] == 0.0));
            match hit {
                Some(m) => a.labels()[m].clone(),
                None => format!("b{}", col + 1),
            }
        })
        .collect()
}

pub(crate) fn block_diag(top: &DMatrix<f64>, bottom: &DMatrix<f64>) -> DMatrix<f64> {
    let (p, q) = (top.nrows(), bottom.nrows());
    let mut m = DMatrix::zeros(p + q, top.ncols() + bottom.ncols());
    m.view_mut((0, 0), (p, top.ncols())).copy_from(top);
    m.view_mut((p, top.ncols()), (q, bottom.ncols()))
        .copy_from(bottom);
    m
}

/// A vector of `g~` in lifted-frame coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedVector {
    coeffs: Vector,
}

impl LiftedVector {
    pub fn from_coeffs(coeffs: Vector) -> Self {
        Self { coeffs }
    }

    pub fn zeros(t: &TangentLieAlgebra) -> Self {
        Self {
            coeffs: Vector::zeros(2 * t.n()),
        }
    }

    /// `x^c` for `x` given in the input basis.
    pub fn complete(t: &TangentLieAlgebra, x: &Vector) -> Result<Self> {
        let f = t.to_frame(x)?;
        let n = t.n();
        let mut coeffs = Vector::zeros(2 * n);
        coeffs.rows_mut(n, n).copy_from(&f);
        Ok(Self { coeffs })
    }

    /// `x^v` for `x` given in the input basis. Since `X_i^v = sqrt(λ_i) Y_i`,
    /// frame coordinate `i` is scaled by `sqrt(λ_i)`.
    pub fn vertical(t: &TangentLieAlgebra, x: &Vector) -> Result<Self> {
        let f = t.to_frame(x)?;
        let n = t.n();
        let mut coeffs = Vector::zeros(2 * n);
        for i in 0..n {
            coeffs[i] = f[i] * t.lambdas()[i].sqrt();
        }
        Ok(Self { coeffs })
    }

    /// `x^c + y^v`.
    pub fn from_pair(t: &TangentLieAlgebra, x: &Vector, y: &Vector) -> Result<Self> {
        Ok(Self::complete(t, x)? + Self::vertical(t, y)?)
    }

    /// Inverse of [`from_pair`](Self::from_pair): the unique `(x, y)` with
    /// `self = x^c + y^v`, in the input basis.
    pub fn decompose(&self, t: &TangentLieAlgebra) -> (Vector, Vector) {
        let n = t.n();
        let c = self.coeffs.rows(n, n).into_owned();
        let mut v = self.coeffs.rows(0, n).into_owned();
        for i in 0..n {
            v[i] /= t.lambdas()[i].sqrt();
        }
        let b1 = t.phi.b1.matrix();
        (b1 * c, b1 * v)
    }

    pub fn coeffs(&self) -> &Vector {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vector {
        self.coeffs
    }
}

impl Add for LiftedVector {
    type Output = LiftedVector;
    fn add(self, rhs: LiftedVector) -> LiftedVector {
        LiftedVector {
            coeffs: self.coeffs + rhs.coeffs,
        }
    }
}

impl Sub for LiftedVector {
    type Output = LiftedVector;
    fn sub(self, rhs: LiftedVector) -> LiftedVector {
        LiftedVector {
            coeffs: self.coeffs - rhs.coeffs,
        }
    }
}

impl Mul<f64> for LiftedVector {
    type Output = LiftedVector;
    fn mul(self, s: f64) -> LiftedVector {
        LiftedVector {
            coeffs: self.coeffs * s,
        }
    }
}

/// Convenience wrapper: `TangentLieAlgebra::build`.
pub fn build_tangent(a: &LieAlgebra, g1: &Metric, g2: &Metric) -> Result<TangentLieAlgebra> {
    TangentLieAlgebra::build(a, g1, g2)
}

impl PhiData {
    /// The frame map `B1` as a linear map.
    pub fn frame(&self) -> &LinearMap {
        &self.b1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn v(x: &[f64]) -> Vector {
        Vector::from_column_slice(x)
    }

    fn heisenberg() -> TangentLieAlgebra {
        build_tangent(
            &catalog::heisenberg(),
            &Metric::identity(3),
            &Metric::diagonal(&[2., 2., 1.]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn heisenberg_frame_and_lift() {
        let t = heisenberg();
        assert_eq!(t.lambdas(), &[1.0, 2.0, 2.0]);
        assert_eq!(t.base().labels(), &["Z", "X", "Y"]);
        assert!(t.lifted().jacobi_defect() <= crate::tol::JACOBI);
        assert_eq!(t.lifted_metric().matrix(), &DMatrix::identity(6, 6));

        // [X^c, Y^v/√2] = (√λ_Z/√λ_Y)·c_XY^Z · Z^v = (1/√2) Z^v; frame: X = 1, Y = 2, Z = 0
        let b = t.lifted().c(3 + 1, 2, 0);
        assert!((b - 0.5_f64.sqrt()).abs() < 1e-15);
        // vertical-vertical brackets vanish
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..6 {
                    assert_eq!(t.lifted().c(i, j, k), 0.0);
                }
            }
        }
    }

    #[test]
    fn unnormalized_metric_is_block_diagonal() {
        let t = heisenberg();
        let expect = DMatrix::from_diagonal(&v(&[2., 2., 1., 1., 1., 1.]));
        assert_eq!(t.unnormalized_metric(), expect);
        let p = t.unnormalized_to_lifted();
        assert!((p.transpose() * p - expect).amax() < 1e-14);
    }

    #[test]
    fn abelian_lift_is_abelian() {
        let a = catalog::abelian(3);
        let t = build_tangent(
            &a,
            &Metric::identity(3),
            &Metric::diagonal(&[3., 1., 2.]).unwrap(),
        )
        .unwrap();
        assert!(t.lifted().is_abelian());
        assert_eq!(t.lambdas(), &[1.0, 2.0, 3.0]);
        assert_eq!(t.base().labels(), &["Y", "Z", "X"]);
    }

    #[test]
    fn lifted_vectors_decompose_uniquely() {
        let t = heisenberg();
        let x = v(&[0.5, -1.0, 2.0]);
        let y = v(&[1.5, 0.25, -3.0]);
        let w = LiftedVector::from_pair(&t, &x, &y).unwrap();
        let (xd, yd) = w.decompose(&t);
        assert!((xd - &x).amax() < 1e-14);
        assert!((yd - &y).amax() < 1e-14);
        // g~(X^v, X^v) = g2(X, X) = 2
        let xv = LiftedVector::vertical(&t, &v(&[1., 0., 0.])).unwrap();
        assert!((xv.coeffs().norm_squared() - 2.0).abs() < 1e-15);
        assert!(matches!(
            LiftedVector::complete(&t, &v(&[1., 0.])),
            Err(GeometryError::InvalidDimension { .. })
        ));
    }
}
