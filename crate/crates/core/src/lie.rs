//! Finite-dimensional real Lie algebras given by structure constants, plus
//! the metric and linear-map primitives every other module builds on.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeometryError, Result};
use crate::tensor::Tensor3;
use crate::tol;

/// Coefficients of a vector in an algebra's stored basis.
pub type Vector = DVector<f64>;

/// A real Lie algebra stored as a dense structure tensor,
/// `c[(i, j, k)]` = coefficient of `X_k` in `[X_i, X_j]`.
///
/// Only the `i < j` half is ever read from callers; the other half is filled
/// by negation, so antisymmetry holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    labels: Vec<String>,
    c: Tensor3,
}

impl LieAlgebra {
    /// Builds an algebra from sparse `(i, j, k, value)` entries with `i < j`
    /// and rejects tables whose Jacobi defect exceeds the default tolerance.
    pub fn from_upper(labels: Vec<String>, entries: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let a = Self::from_upper_unchecked(labels, entries)?;
        let defect = a.jacobi_defect();
        if defect > tol::JACOBI {
            return Err(GeometryError::JacobiViolated { defect });
        }
        Ok(a)
    }

    /// Same as [`from_upper`](Self::from_upper) without the Jacobi check, for
    /// inspecting tables that are not Lie algebras.
    pub fn from_upper_unchecked(
        labels: Vec<String>,
        entries: &[(usize, usize, usize, f64)],
    ) -> Result<Self> {
        let n = labels.len();
        let mut c = Tensor3::zeros(n);
        for &(i, j, k, v) in entries {
            for idx in [i, j, k] {
                if idx >= n {
                    return Err(GeometryError::IndexOutOfRange { index: idx, dim: n });
                }
            }
            if i >= j {
                return Err(GeometryError::BracketOrientation { i, j });
            }
            c[(i, j, k)] += v;
            c[(j, i, k)] -= v;
        }
        Ok(Self { labels, c })
    }

    /// Builds an algebra from a full tensor, keeping only its `i < j` half.
    pub(crate) fn from_tensor_upper(labels: Vec<String>, full: &Tensor3) -> Self {
        let n = labels.len();
        assert_eq!(full.dim(), n);
        let mut c = Tensor3::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let v = full[(i, j, k)];
                    c[(i, j, k)] = v;
                    c[(j, i, k)] = -v;
                }
            }
        }
        Self { labels, c }
    }

    pub fn abelian(labels: Vec<String>) -> Self {
        let n = labels.len();
        Self {
            labels,
            c: Tensor3::zeros(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim());
        self.labels = labels;
        self
    }

    pub fn constants(&self) -> &Tensor3 {
        &self.c
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i, j, k)]
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = Vector::zeros(self.dim());
        v[i] = 1.0;
        v
    }

    /// `true` when every structure constant is exactly zero.
    pub fn is_abelian(&self) -> bool {
        self.c.max_abs() == 0.0
    }

    pub(crate) fn check_vec(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(GeometryError::InvalidDimension {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `[x, y]` in the stored basis.
    pub fn bracket(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        self.check_vec(x)?;
        self.check_vec(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim();
        let mut out = Vector::zeros(n);
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out[k] += w * self.c[(i, j, k)];
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ [x, y]`.
    pub fn ad_matrix(&self, x: &Vector) -> Result<LinearMap> {
        self.check_vec(x)?;
        let n = self.dim();
        let m = DMatrix::from_fn(n, n, |k, j| (0..n).map(|i| x[i] * self.c[(i, j, k)]).sum());
        Ok(LinearMap(m))
    }

    /// Max-abs residual of the cyclic Jacobi sum over all basis quadruples.
    pub fn jacobi_defect(&self) -> f64 {
        let n = self.dim();
        let c = &self.c;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s: f64 = (0..n)
                            .map(|m| {
                                c[(i, j, m)] * c[(m, k, l)]
                                    + c[(j, k, m)] * c[(m, i, l)]
                                    + c[(k, i, m)] * c[(m, j, l)]
                            })
                            .sum();
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// Orthonormal basis of `{y : [x, y] = 0 for all x}`.
    ///
    /// The basis is obtained by projecting the standard basis vectors onto the
    /// kernel in order and running Gram–Schmidt, so the output is deterministic.
    pub fn center(&self) -> Vec<Vector> {
        let n = self.dim();
        if n == 0 {
            return Vec::new();
        }
        // rows (i, k), column j: c[i][j][k]
        let stacked = DMatrix::from_fn(n * n, n, |row, j| {
            let (i, k) = (row / n, row % n);
            self.c[(i, j, k)]
        });
        let kernel = null_space(&stacked);
        if kernel.is_empty() {
            return kernel;
        }
        let k = DMatrix::from_columns(&kernel);
        let projector = &k * k.transpose();
        let candidates: Vec<Vector> = (0..n).map(|i| projector.column(i).into_owned()).collect();
        gram_schmidt(&candidates, &DMatrix::identity(n, n), kernel.len(), 1e-10)
    }

    /// True iff `x` commutes with every basis vector up to `tol`.
    pub fn is_central(&self, x: &Vector, tol: f64) -> bool {
        (0..self.dim()).all(|i| self.bracket_unchecked(&self.basis_vector(i), x).amax() <= tol)
    }

    /// True iff `tau` is invertible and preserves brackets on basis pairs to `tol`.
    pub fn is_automorphism(&self, tau: &LinearMap, tol: f64) -> bool {
        let n = self.dim();
        if tau.dim() != n || !tau.is_invertible() {
            return false;
        }
        self.automorphism_defect(tau) <= tol
    }

    /// `max |τ[X_i, X_j] − [τX_i, τX_j]|` over basis pairs.
    pub fn automorphism_defect(&self, tau: &LinearMap) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            let ti = tau.0.column(i).into_owned();
            for j in 0..n {
                let tj = tau.0.column(j).into_owned();
                let lhs =
                    &tau.0 * self.bracket_unchecked(&self.basis_vector(i), &self.basis_vector(j));
                let rhs = self.bracket_unchecked(&ti, &tj);
                worst = worst.max((lhs - rhs).amax());
            }
        }
        worst
    }

    /// Structure constants of the same algebra in the basis given by the
    /// columns of `b` (expressed in the current basis).
    pub fn change_basis(&self, b: &LinearMap) -> Result<LieAlgebra> {
        let n = self.dim();
        if b.dim() != n {
            return Err(GeometryError::InvalidDimension {
                expected: n,
                found: b.dim(),
            });
        }
        let b_inv = b.inverse()?;
        let mut out = Tensor3::zeros(n);
        for a in 0..n {
            for bb in (a + 1)..n {
                let ea = b.0.column(a).into_owned();
                let eb = b.0.column(bb).into_owned();
                let br = &b_inv.0 * self.bracket_unchecked(&ea, &eb);
                for d in 0..n {
                    out[(a, bb, d)] = br[d];
                }
            }
        }
        Ok(LieAlgebra::from_tensor_upper(self.labels.clone(), &out))
    }
}

/// A left-invariant Riemannian metric: symmetric positive-definite Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    g: DMatrix<f64>,
    g_inv: DMatrix<f64>,
}

impl Metric {
    /// Validates symmetry and positive-definiteness with default tolerances.
    pub fn new(g: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerances(g, tol::SYM, tol::PD)
    }

    pub fn with_tolerances(g: DMatrix<f64>, eps_sym: f64, eps_pd: f64) -> Result<Self> {
        if !g.is_square() {
            return Err(GeometryError::InvalidDimension {
                expected: g.nrows(),
                found: g.ncols(),
            });
        }
        let defect = (&g - g.transpose()).amax();
        if defect > eps_sym {
            return Err(GeometryError::NotSymmetric { defect });
        }
        let pivots = cholesky_pivots(&g);
        if let Some((pivot, &value)) = pivots.iter().enumerate().find(|(_, &p)| !(p > eps_pd)) {
            return Err(GeometryError::NonPositiveDefinite { pivot, value });
        }
        let g_inv = g
            .clone()
            .cholesky()
            .ok_or(GeometryError::NonPositiveDefinite {
                pivot: 0,
                value: f64::NAN,
            })?
            .inverse();
        Ok(Self { g, g_inv })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            g: DMatrix::identity(n, n),
            g_inv: DMatrix::identity(n, n),
        }
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(d)))
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn inverse_matrix(&self) -> &DMatrix<f64> {
        &self.g_inv
    }

    #[inline]
    pub fn inner(&self, x: &Vector, y: &Vector) -> f64 {
        x.dot(&(&self.g * y))
    }

    pub fn norm(&self, x: &Vector) -> f64 {
        self.inner(x, x).max(0.0).sqrt()
    }

    /// `τᵀ g τ`.
    pub fn pullback(&self, tau: &LinearMap) -> Result<Metric> {
        if tau.dim() != self.dim() {
            return Err(GeometryError::InvalidDimension {
                expected: self.dim(),
                found: tau.dim(),
            });
        }
        if !tau.is_invertible() {
            return Err(GeometryError::SingularMap);
        }
        let g = tau.0.transpose() * &self.g * &tau.0;
        // exact symmetry; the product can differ by rounding across the diagonal
        let g = (&g + g.transpose()) * 0.5;
        Metric::new(g)
    }
}

/// Free-function form of [`Metric::pullback`].
pub fn pullback_metric(g: &Metric, tau: &LinearMap) -> Result<Metric> {
    g.pullback(tau)
}

/// Square matrix acting on coefficient vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap(pub DMatrix<f64>);

impl LinearMap {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(GeometryError::InvalidDimension {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(d)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &self.0 * x
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap(&self.0 * &other.0)
    }

    /// Invertible when the smallest singular value is above `1e-12` relative
    /// to the largest.
    pub fn is_invertible(&self) -> bool {
        let n = self.dim();
        if n == 0 {
            return true;
        }
        let sv = self.0.clone().svd(false, false).singular_values;
        let max = sv.max();
        let min = sv.min();
        max > 0.0 && min > 1e-12 * max
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        if !self.is_invertible() {
            return Err(GeometryError::SingularMap);
        }
        self.0
            .clone()
            .try_inverse()
            .map(LinearMap)
            .ok_or(GeometryError::SingularMap)
    }
}

/// `g⁻¹ (ad x)ᵀ g`: the `g`-adjoint of `ad x`.
pub fn ad_star(a: &LieAlgebra, g: &Metric, x: &Vector) -> Result<LinearMap> {
    if g.dim() != a.dim() {
        return Err(GeometryError::InvalidDimension {
            expected: a.dim(),
            found: g.dim(),
        });
    }
    let ad = a.ad_matrix(x)?;
    Ok(LinearMap(
        g.inverse_matrix() * ad.0.transpose() * g.matrix(),
    ))
}

/// Diagonal pivots of an unpivoted LDLᵀ elimination; all positive iff SPD.
fn cholesky_pivots(g: &DMatrix<f64>) -> Vec<f64> {
    let n = g.nrows();
    let mut a = g.clone();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let p = a[(k, k)];
        pivots.push(p);
        if !(p > 0.0) {
            break;
        }
        for i in (k + 1)..n {
            let f = a[(i, k)] / p;
            for j in (k + 1)..n {
                a[(i, j)] -= f * a[(k, j)];
            }
        }
    }
    pivots
}

/// Orthonormal basis of the null space of `m` (right singular vectors whose
/// singular value is below `1e-10` relative to `max(1, σ_max)`). Requires
/// `m.nrows() >= m.ncols()` so that V is complete.
pub(crate) fn null_space(m: &DMatrix<f64>) -> Vec<Vector> {
    debug_assert!(m.nrows() >= m.ncols());
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let cutoff = 1e-10 * svd.singular_values.max().max(1.0);
    (0..m.ncols())
        .filter(|&i| svd.singular_values[i] <= cutoff)
        .map(|i| v_t.row(i).transpose())
        .collect()
}

/// Gram–Schmidt with respect to the form `g`, keeping at most `limit` vectors and
/// dropping candidates whose residual norm falls below `drop_tol`.
pub(crate) fn gram_schmidt(
    candidates: &[Vector],
    g: &DMatrix<f64>,
    limit: usize,
    drop_tol: f64,
) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::with_capacity(limit);
    for v in candidates {
        if out.len() == limit {
            break;
        }
        let mut w = v.clone();
        // two passes for numerical orthogonality
        for _ in 0..2 {
            for u in &out {
                let proj = u.dot(&(g * &w));
                w -= u * proj;
            }
        }
        let norm = w.dot(&(g * &w)).max(0.0).sqrt();
        if norm >= drop_tol {
            out.push(w / norm);
        }
    }
    out
}
