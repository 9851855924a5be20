use nalgebra::DMatrix;

use crate::error::{GeometryError, Result};
use crate::lie::{gram_schmidt, LinearMap, Metric, Vector};

/// `φ = g1⁻¹ g2` together with its ascending eigenvalues and a
/// `g1`-orthonormal eigenbasis (columns of `b1`).
#[derive(Debug, Clone, PartialEq)]
pub struct PhiData {
    pub phi: LinearMap,
    pub lambdas: Vec<f64>,
    pub b1: LinearMap,
}

/// Relative gap below which eigenvalues are treated as one eigenspace.
const CLUSTER_TOL: f64 = 1e-9;

/// Solves `g2 v = λ g1 v` by Cholesky whitening `g1 = L Lᵀ` and a symmetric
/// eigendecomposition of `L⁻¹ g2 L⁻ᵀ`.
///
/// Within a repeated eigenvalue the basis is fixed by projecting the input
/// basis vectors onto the eigenspace in order and orthonormalizing them
/// (with respect to `g1`), which makes the frame deterministic.
pub fn compute_phi(g1: &Metric, g2: &Metric) -> Result<PhiData> {
    let n = g1.dim();
    if g2.dim() != n {
        return Err(GeometryError::InvalidDimension {
            expected: n,
            found: g2.dim(),
        });
    }
    let phi = LinearMap(g1.inverse_matrix() * g2.matrix());
    if n == 0 {
        return Ok(PhiData {
            phi,
            lambdas: Vec::new(),
            b1: LinearMap::identity(0),
        });
    }

    let chol = g1
        .matrix()
        .clone()
        .cholesky()
        .ok_or(GeometryError::NonPositiveDefinite {
            pivot: 0,
            value: f64::NAN,
        })?;
    let l_inv = chol.l().try_inverse().ok_or(GeometryError::SingularMap)?;
    let whitened = &l_inv * g2.matrix() * l_inv.transpose();
    let whitened = (&whitened + whitened.transpose()) * 0.5;
    let eig = whitened.symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    // g1-orthonormal eigenvectors
    let vecs = l_inv.transpose() * &eig.eigenvectors;

    let g = g1.matrix();
    let mut columns: Vec<Vector> = Vec::with_capacity(n);
    let mut lambdas: Vec<f64> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let first = eig.eigenvalues[order[start]];
        let mut end = start + 1;
        while end < n
            && (eig.eigenvalues[order[end]] - first).abs() <= CLUSTER_TOL * first.abs().max(1.0)
        {
            end += 1;
        }
        let span: Vec<Vector> = order[start..end]
            .iter()
            .map(|&i| vecs.column(i).into_owned())
            .collect();
        let basis = eigenspace_basis(&span, g);
        // one value per eigenspace: mean Rayleigh quotient, exact for diagonal input
        let mean =
            basis.iter().map(|c| c.dot(&(g2.matrix() * c))).sum::<f64>() / basis.len() as f64;
        lambdas.extend(std::iter::repeat_n(mean, basis.len()));
        columns.extend(basis);
        start = end;
    }

    let b1 = DMatrix::from_columns(&columns);
    if let Some((pivot, &value)) = lambdas.iter().enumerate().find(|(_, &l)| !(l > 0.0)) {
        return Err(GeometryError::NonPositiveDefinite { pivot, value });
    }
    Ok(PhiData {
        phi,
        lambdas,
        b1: LinearMap(b1),
    })
}

/// Deterministic `g`-orthonormal basis of the span of `span` (itself
/// `g`-orthonormal): project `e_1, e_2, …` in order, then Gram–Schmidt.
fn eigenspace_basis(span: &[Vector], g: &DMatrix<f64>) -> Vec<Vector> {
    let n = g.nrows();
    let k = span.len();
    let candidates: Vec<Vector> = (0..n)
        .map(|m| {
            let mut e = Vector::zeros(n);
            e[m] = 1.0;
            let ge = g * &e;
            span.iter()
                .fold(Vector::zeros(n), |acc, v| acc + v * v.dot(&ge))
        })
        .collect();
    let mut basis = gram_schmidt(&candidates, g, k, 1e-10);
    if basis.len() < k {
        // cannot happen for a nondegenerate g; fall back to the raw eigenvectors
        basis = gram_schmidt(span, g, k, 0.0);
    }
    basis
}
