//! Levi-Civita connection, curvature and vector-field classification for a
//! Lie algebra with a left-invariant metric.
//!
//! Everything is evaluated on the stored basis `X_1..X_n`. Because the data
//! is left-invariant, the derivative terms of the Koszul formula vanish and
//!
//! ```text
//! 2 g(∇_{X_i} X_j, X_k) = g([X_i,X_j],X_k) − g([X_j,X_k],X_i) + g([X_k,X_i],X_j)
//! ```
//!
//! determines the connection. This module is the reference every closed-form
//! lift formula in [`crate::tangent`] is checked against.

use nalgebra::DMatrix;

use crate::error::{GeometryError, Result};
use crate::lie::{LieAlgebra, LinearMap, Metric, Vector};
use crate::tensor::{Tensor3, Tensor4};
use crate::tol;

/// Christoffel symbols: `gamma[(i, j, k)]` = coefficient of `X_k` in `∇_{X_i} X_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    gamma: Tensor3,
}

impl Connection {
    pub fn from_tensor(gamma: Tensor3) -> Self {
        Self { gamma }
    }

    pub fn tensor(&self) -> &Tensor3 {
        &self.gamma
    }

    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    #[inline]
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma[(i, j, k)]
    }

    /// `∇_x y` for arbitrary coefficient vectors.
    pub fn covariant(&self, x: &Vector, y: &Vector) -> Vector {
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
                    out[k] += w * self.gamma[(i, j, k)];
                }
            }
        }
        out
    }

    /// `max |Γ_ij^k − Γ_ji^k − c_ij^k|`.
    pub fn torsion_defect(&self, a: &LieAlgebra) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let t = self.gamma[(i, j, k)] - self.gamma[(j, i, k)] - a.c(i, j, k);
                    worst = worst.max(t.abs());
                }
            }
        }
        worst
    }

    /// `max |g(∇_{X_i}X_j, X_k) + g(X_j, ∇_{X_i}X_k)|`.
    pub fn metricity_defect(&self, g: &Metric) -> f64 {
        let n = self.dim();
        let lowered = lower_last(&self.gamma, g.matrix());
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max((lowered[(i, j, k)] + lowered[(i, k, j)]).abs());
                }
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Connection) -> f64 {
        self.gamma.max_abs_diff(&other.gamma)
    }
}

/// `r[(i, j, k, h)]` = coefficient of `X_h` in `R(X_i, X_j) X_k`, with
/// `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]} Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    r: Tensor4,
}

impl CurvatureTensor {
    pub fn from_tensor(r: Tensor4) -> Self {
        Self { r }
    }

    pub fn tensor(&self) -> &Tensor4 {
        &self.r
    }

    pub fn dim(&self) -> usize {
        self.r.dim()
    }

    #[inline]
    pub fn r(&self, i: usize, j: usize, k: usize, h: usize) -> f64 {
        self.r[(i, j, k, h)]
    }

    /// `R(x, y) z`.
    pub fn apply(&self, x: &Vector, y: &Vector, z: &Vector) -> Vector {
        let n = self.dim();
        let mut out = Vector::zeros(n);
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0.0 {
                    continue;
                }
                for k in 0..n {
                    let w = x[i] * y[j] * z[k];
                    if w == 0.0 {
                        continue;
                    }
                    for h in 0..n {
                        out[h] += w * self.r[(i, j, k, h)];
                    }
                }
            }
        }
        out
    }

    /// `max |r_ijk^h + r_jik^h|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for_each4(n, |i, j, k, h| {
            worst = worst.max((self.r[(i, j, k, h)] + self.r[(j, i, k, h)]).abs());
        });
        worst
    }

    /// First Bianchi identity residual.
    pub fn bianchi_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for_each4(n, |i, j, k, h| {
            let s = self.r[(i, j, k, h)] + self.r[(j, k, i, h)] + self.r[(k, i, j, h)];
            worst = worst.max(s.abs());
        });
        worst
    }

    /// `g(R(X_i,X_j)X_k, X_h)`.
    pub fn lowered(&self, g: &Metric) -> Tensor4 {
        let n = self.dim();
        let gm = g.matrix();
        let mut out = Tensor4::zeros(n);
        for_each4(n, |i, j, k, h| {
            out[(i, j, k, h)] = (0..n).map(|m| self.r[(i, j, k, m)] * gm[(m, h)]).sum();
        });
        out
    }

    /// `max |g(R(X,Y)Z,W) − g(R(Z,W)X,Y)|` over basis quadruples.
    pub fn pair_symmetry_defect(&self, g: &Metric) -> f64 {
        let low = self.lowered(g);
        let mut worst = 0.0_f64;
        for_each4(self.dim(), |i, j, k, h| {
            worst = worst.max((low[(i, j, k, h)] - low[(k, h, i, j)]).abs());
        });
        worst
    }

    pub fn max_abs_diff(&self, other: &CurvatureTensor) -> f64 {
        self.r.max_abs_diff(&other.r)
    }
}

/// Lie algebra paired with a metric on it.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricLieAlgebra {
    algebra: LieAlgebra,
    metric: Metric,
}

/// Outcome of [`classify_field`].
#[derive(Debug, Clone, PartialEq)]
pub struct FieldClassification {
    pub killing1: bool,
    pub killing2: bool,
    pub conformal1: bool,
    pub conformal2: bool,
    pub conformal_factor1: f64,
    pub conformal_factor2: f64,
    /// `x ∈ Z(g)`; equivalent to the vertical lift of `x` being Killing.
    pub in_center: bool,
}

/// Least-squares fit of `ℒ_x g ≈ 2ρ g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalFit {
    pub rho: f64,
    /// `max |ℒ_x g|`.
    pub lie_derivative_norm: f64,
    /// `‖ℒ_x g − 2ρ g‖_F / ‖ℒ_x g‖_F`, zero when `ℒ_x g` vanishes.
    pub relative_residual: f64,
}

impl ConformalFit {
    pub fn is_killing(&self, tol: f64) -> bool {
        self.lie_derivative_norm <= tol
    }

    pub fn is_conformal(&self, tol: f64) -> bool {
        self.is_killing(tol) || self.relative_residual <= tol
    }
}

/// Residuals of `τ(∇′_X Y) = ∇_{τX} τY` and its curvature consequences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivarianceDefects {
    pub connection: f64,
    pub curvature: f64,
    pub sectional: f64,
}

impl MetricLieAlgebra {
    pub fn new(algebra: LieAlgebra, metric: Metric) -> Result<Self> {
        if algebra.dim() != metric.dim() {
            return Err(GeometryError::InvalidDimension {
                expected: algebra.dim(),
                found: metric.dim(),
            });
        }
        Ok(Self { algebra, metric })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Levi-Civita connection from the bracket-only Koszul formula.
    pub fn levi_civita(&self) -> Connection {
        let n = self.dim();
        // cl[i][j][m] = g([X_i, X_j], X_m)
        let cl = lower_last(self.algebra.constants(), self.metric.matrix());
        let lowered = Tensor3::from_fn(n, |i, j, k| {
            0.5 * (cl[(i, j, k)] - cl[(j, k, i)] + cl[(k, i, j)])
        });
        let g_inv = self.metric.inverse_matrix();
        Connection::from_tensor(raise_last(&lowered, g_inv))
    }

    /// Curvature of `conn` with respect to this algebra's bracket.
    pub fn curvature(&self, conn: &Connection) -> CurvatureTensor {
        curvature_of(&self.algebra, conn)
    }

    /// `g(R(x,y)y, x) / (g(x,x)g(y,y) − g(x,y)²)`.
    pub fn sectional(&self, r: &CurvatureTensor, x: &Vector, y: &Vector) -> Result<f64> {
        self.algebra.check_vec(x)?;
        self.algebra.check_vec(y)?;
        sectional_with(&self.metric, r, x, y)
    }

    /// `max |g(X_i,[X_j,X_k]) − g([X_i,X_j],X_k)|`.
    pub fn bi_invariance_defect(&self) -> f64 {
        let n = self.dim();
        let cl = lower_last(self.algebra.constants(), self.metric.matrix());
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    // g(X_i, [X_j, X_k]) = cl[j][k][i]
                    worst = worst.max((cl[(j, k, i)] - cl[(i, j, k)]).abs());
                }
            }
        }
        worst
    }

    pub fn is_bi_invariant(&self, tol: f64) -> bool {
        self.bi_invariance_defect() <= tol
    }

    /// `max |g([X_k,[X_i,X_j]],X_l) + g(X_k,[X_l,[X_i,X_j]])|`: residual of the
    /// condition for `∇_X Y = ½[X,Y]` to be metric.
    pub fn canonical_metricity_defect(&self) -> f64 {
        let n = self.dim();
        let dbl = self.double_brackets();
        let gm = self.metric.matrix();
        let mut worst = 0.0_f64;
        for_each4(n, |i, j, k, l| {
            // dbl[(k, i, j)] = [X_k, [X_i, X_j]]
            let a: f64 = (0..n).map(|m| dbl[(k, i, j)][m] * gm[(m, l)]).sum();
            let b: f64 = (0..n).map(|m| gm[(k, m)] * dbl[(l, i, j)][m]).sum();
            worst = worst.max((a + b).abs());
        });
        worst
    }

    /// `max |g([X_k,[X_i,X_j]],X_l)|`.
    pub fn double_bracket_defect(&self) -> f64 {
        let n = self.dim();
        let dbl = self.double_brackets();
        let gm = self.metric.matrix();
        let mut worst = 0.0_f64;
        for_each4(n, |i, j, k, l| {
            let a: f64 = (0..n).map(|m| dbl[(k, i, j)][m] * gm[(m, l)]).sum();
            worst = worst.max(a.abs());
        });
        worst
    }

    /// The metric annihilates every double bracket `[Z,[X,Y]]`.
    pub fn annihilates_double_brackets(&self, tol: f64) -> bool {
        self.double_bracket_defect() <= tol
    }

    /// `(ℒ_x g)(X_i, X_j) = −g([x,X_i],X_j) − g(X_i,[x,X_j])`.
    pub fn lie_derivative_metric(&self, x: &Vector) -> Result<DMatrix<f64>> {
        let ad = self.algebra.ad_matrix(x)?;
        let g = self.metric.matrix();
        let a = ad.matrix().transpose() * g;
        Ok(-(&a + a.transpose()))
    }

    pub fn conformal_fit(&self, x: &Vector) -> Result<ConformalFit> {
        let l = self.lie_derivative_metric(x)?;
        let two_g = self.metric.matrix() * 2.0;
        let rho = l.dot(&two_g) / two_g.dot(&two_g);
        let lie_derivative_norm = l.amax();
        let l_norm = l.norm();
        let relative_residual = if l_norm == 0.0 {
            0.0
        } else {
            (&l - &two_g * rho).norm() / l_norm
        };
        Ok(ConformalFit {
            rho,
            lie_derivative_norm,
            relative_residual,
        })
    }

    /// `|∇_x x|_g ≤ tol`.
    pub fn is_geodesic_vector(&self, conn: &Connection, x: &Vector, tol: f64) -> Result<bool> {
        self.algebra.check_vec(x)?;
        Ok(self.metric.norm(&conn.covariant(x, x)) <= tol)
    }

    fn double_brackets(&self) -> DoubleBrackets {
        let n = self.dim();
        let a = &self.algebra;
        let mut out = vec![Vector::zeros(n); n * n * n];
        for i in 0..n {
            for j in 0..n {
                let inner = a.bracket_unchecked(&a.basis_vector(i), &a.basis_vector(j));
                for k in 0..n {
                    out[(k * n + i) * n + j] = a.bracket_unchecked(&a.basis_vector(k), &inner);
                }
            }
        }
        DoubleBrackets { n, data: out }
    }
}

struct DoubleBrackets {
    n: usize,
    data: Vec<Vector>,
}

impl std::ops::Index<(usize, usize, usize)> for DoubleBrackets {
    type Output = Vector;
    fn index(&self, (k, i, j): (usize, usize, usize)) -> &Vector {
        &self.data[(k * self.n + i) * self.n + j]
    }
}

/// Killing / conformal classification of `x` against two metrics on one algebra.
pub fn classify_field(
    m1: &MetricLieAlgebra,
    m2: &MetricLieAlgebra,
    x: &Vector,
    tol: f64,
) -> Result<FieldClassification> {
    if m1.algebra != m2.algebra {
        return Err(GeometryError::PreconditionViolated(
            "both metrics must live on the same algebra".into(),
        ));
    }
    let f1 = m1.conformal_fit(x)?;
    let f2 = m2.conformal_fit(x)?;
    Ok(FieldClassification {
        killing1: f1.is_killing(tol),
        killing2: f2.is_killing(tol),
        conformal1: f1.is_conformal(tol),
        conformal2: f2.is_conformal(tol),
        conformal_factor1: f1.rho,
        conformal_factor2: f2.rho,
        in_center: m1.algebra.is_central(x, tol),
    })
}

/// Compares `(g, g′ = τᵀgτ)` through `τ`: connection, curvature and sectional
/// curvature of `g′` must be the `τ`-pullbacks of those of `g`.
pub fn equivariance_defect(
    m: &MetricLieAlgebra,
    m_prime: &MetricLieAlgebra,
    tau: &LinearMap,
) -> Result<EquivarianceDefects> {
    if m.algebra != m_prime.algebra {
        return Err(GeometryError::PreconditionViolated(
            "both metrics must live on the same algebra".into(),
        ));
    }
    let n = m.dim();
    if tau.dim() != n {
        return Err(GeometryError::InvalidDimension {
            expected: n,
            found: tau.dim(),
        });
    }
    if !tau.is_invertible() {
        return Err(GeometryError::SingularMap);
    }
    let expected = tau.matrix().transpose() * m.metric.matrix() * tau.matrix();
    let mismatch = (&expected - m_prime.metric.matrix()).amax();
    let scale = expected.amax().max(1.0);
    if mismatch > tol::CHECK * scale {
        return Err(GeometryError::PreconditionViolated(format!(
            "metric is not the pullback by tau (mismatch {mismatch:e})"
        )));
    }

    let conn = m.levi_civita();
    let conn_p = m_prime.levi_civita();
    let curv = m.curvature(&conn);
    let curv_p = m_prime.curvature(&conn_p);
    let t = |i: usize| tau.matrix().column(i).into_owned();
    let e = |i: usize| m.algebra.basis_vector(i);

    let mut connection = 0.0_f64;
    let mut curvature = 0.0_f64;
    let mut sectional = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let lhs = tau.apply(&conn_p.covariant(&e(i), &e(j)));
            let rhs = conn.covariant(&t(i), &t(j));
            connection = connection.max((lhs - rhs).amax());
            for k in 0..n {
                let lhs = tau.apply(&curv_p.apply(&e(i), &e(j), &e(k)));
                let rhs = curv.apply(&t(i), &t(j), &t(k));
                curvature = curvature.max((lhs - rhs).amax());
            }
            if i < j {
                let kp = sectional_with(&m_prime.metric, &curv_p, &e(i), &e(j))?;
                let k = sectional_with(&m.metric, &curv, &t(i), &t(j))?;
                sectional = sectional.max((kp - k).abs());
            }
        }
    }
    Ok(EquivarianceDefects {
        connection,
        curvature,
        sectional,
    })
}

pub(crate) fn curvature_of(a: &LieAlgebra, conn: &Connection) -> CurvatureTensor {
    let n = a.dim();
    let gm = conn.tensor();
    let mut r = Tensor4::zeros(n);
    for_each4(n, |i, j, k, h| {
        let mut s = 0.0;
        for l in 0..n {
            s += gm[(j, k, l)] * gm[(i, l, h)]
                - gm[(i, k, l)] * gm[(j, l, h)]
                - a.c(i, j, l) * gm[(l, k, h)];
        }
        r[(i, j, k, h)] = s;
    });
    CurvatureTensor::from_tensor(r)
}

pub(crate) fn sectional_with(
    g: &Metric,
    r: &CurvatureTensor,
    x: &Vector,
    y: &Vector,
) -> Result<f64> {
    let gram = g.inner(x, x) * g.inner(y, y) - g.inner(x, y).powi(2);
    if !(gram > tol::PD) {
        return Err(GeometryError::DegeneratePlane { gram });
    }
    Ok(g.inner(&r.apply(x, y, y), x) / gram)
}

fn lower_last(t: &Tensor3, g: &DMatrix<f64>) -> Tensor3 {
    let n = t.dim();
    Tensor3::from_fn(n, |i, j, k| (0..n).map(|m| t[(i, j, m)] * g[(m, k)]).sum())
}

fn raise_last(t: &Tensor3, g_inv: &DMatrix<f64>) -> Tensor3 {
    lower_last(t, g_inv)
}

pub(crate) fn for_each4(n: usize, mut f: impl FnMut(usize, usize, usize, usize)) {
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for h in 0..n {
                    f(i, j, k, h);
                }
            }
        }
    }
}
