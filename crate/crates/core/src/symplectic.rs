//! Left-invariant 2-forms on a Lie algebra and their lift to the tangent algebra.

use nalgebra::DMatrix;

use crate::error::{GeometryError, Result};
use crate::lie::{LieAlgebra, Vector};
use crate::tangent::{unnormalized_lift, TangentLieAlgebra};
use crate::tol;

/// Antisymmetric bilinear form, `w[i][j] = ω(X_i, X_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoForm {
    w: DMatrix<f64>,
}

impl TwoForm {
    pub fn zeros(n: usize) -> Self {
        Self {
            w: DMatrix::zeros(n, n),
        }
    }

    /// From `(i, j, ω(X_i, X_j))` entries with `i < j`.
    pub fn from_upper(n: usize, entries: &[(usize, usize, f64)]) -> Result<Self> {
        let mut w = DMatrix::zeros(n, n);
        for &(i, j, v) in entries {
            if i >= n || j >= n {
                return Err(GeometryError::IndexOutOfRange {
                    index: i.max(j),
                    dim: n,
                });
            }
            if i >= j {
                return Err(GeometryError::BracketOrientation { i, j });
            }
            w[(i, j)] += v;
            w[(j, i)] -= v;
        }
        Ok(Self { w })
    }

    /// From a full matrix; rejects it if `|w + wᵀ|` exceeds `tol` anywhere,
    /// otherwise keeps the exact antisymmetric part.
    pub fn from_matrix(w: DMatrix<f64>, tol: f64) -> Result<Self> {
        if !w.is_square() {
            return Err(GeometryError::InvalidDimension {
                expected: w.nrows(),
                found: w.ncols(),
            });
        }
        let defect = (&w + w.transpose()).amax();
        if defect > tol {
            return Err(GeometryError::NotAntisymmetric { defect });
        }
        let n = w.nrows();
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = 0.5 * (w[(i, j)] - w[(j, i)]);
                out[(i, j)] = v;
                out[(j, i)] = -v;
            }
        }
        Ok(Self { w: out })
    }

    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.w
    }

    pub fn eval(&self, x: &Vector, y: &Vector) -> f64 {
        x.dot(&(&self.w * y))
    }

    pub fn smallest_singular_value(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        self.w
            .clone()
            .singular_values()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// `max |ω([X_i,X_j],X_k) + ω([X_j,X_k],X_i) + ω([X_k,X_i],X_j)|` over basis triples.
pub fn cocycle_defect(a: &LieAlgebra, w: &TwoForm) -> Result<f64> {
    if a.dim() != w.dim() {
        return Err(GeometryError::InvalidDimension {
            expected: a.dim(),
            found: w.dim(),
        });
    }
    Ok(cyclic_defect(a, w.matrix(), &|_| 0..a.dim()))
}

fn cyclic_defect(
    a: &LieAlgebra,
    w: &DMatrix<f64>,
    range: &dyn Fn(usize) -> std::ops::Range<usize>,
) -> f64 {
    let n = a.dim();
    // ω([X_p, X_q], X_r) = Σ_m c_pq^m w[m][r]
    let wb = |p: usize, q: usize, r: usize| (0..n).map(|m| a.c(p, q, m) * w[(m, r)]).sum::<f64>();
    let mut worst = 0.0_f64;
    for i in range(0) {
        for j in range(1) {
            for k in range(2) {
                let s = wb(i, j, k) + wb(j, k, i) + wb(k, i, j);
                worst = worst.max(s.abs());
            }
        }
    }
    worst
}

/// Even dimension, closed within `tol`, and smallest singular value above `tol`.
pub fn is_symplectic(a: &LieAlgebra, w: &TwoForm, tol: f64) -> bool {
    a.dim() == w.dim()
        && a.dim().is_multiple_of(2)
        && a.dim() > 0
        && cocycle_defect(a, w).map(|d| d <= tol).unwrap_or(false)
        && w.smallest_singular_value() > tol
}

/// Lifts a pair of symplectic forms on the base to `g~`, returned in the
/// lifted frame. On the unnormalized basis the blocks are
///
/// ```text
/// ω~(X^v, Y^v) = 0,  ω~(X^c, Y^c) = ω₁(X, Y),  ω~(X^c, Y^v) = ω~(X^v, Y^c) = ω₂(X, Y)
/// ```
pub fn lift_symplectic(t: &TangentLieAlgebra, w1: &TwoForm, w2: &TwoForm) -> Result<TwoForm> {
    let a = t.input();
    if !a.dim().is_multiple_of(2) {
        return Err(GeometryError::NotSymplecticInput(format!(
            "base dimension {} is odd",
            a.dim()
        )));
    }
    for (name, w) in [("w1", w1), ("w2", w2)] {
        if w.dim() != a.dim() {
            return Err(GeometryError::NotSymplecticInput(format!(
                "{name} has dimension {}, expected {}",
                w.dim(),
                a.dim()
            )));
        }
        if !is_symplectic(a, w, tol::CHECK) {
            return Err(GeometryError::NotSymplecticInput(format!(
                "{name} is not closed and nondegenerate (cocycle defect {:e}, smallest singular value {:e})",
                cocycle_defect(a, w)?,
                w.smallest_singular_value()
            )));
        }
    }
    let wu = unnormalized_form(w1, w2);
    let p_inv = t
        .unnormalized_to_lifted()
        .try_inverse()
        .ok_or(GeometryError::SingularMap)?;
    TwoForm::from_matrix(p_inv.transpose() * wu * &p_inv, f64::INFINITY)
}

/// The lifted form on the unnormalized basis `{X_i^v, X_i^c}`, no checks.
pub fn unnormalized_form(w1: &TwoForm, w2: &TwoForm) -> DMatrix<f64> {
    let n = w1.dim();
    let mut wu = DMatrix::zeros(2 * n, 2 * n);
    wu.view_mut((n, n), (n, n)).copy_from(w1.matrix());
    wu.view_mut((n, 0), (n, n)).copy_from(w2.matrix());
    wu.view_mut((0, n), (n, n)).copy_from(w2.matrix());
    wu
}

/// Lift type of one argument slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    V,
    C,
}

/// The eight `(A, B, C)` lift patterns of the cyclic closedness identity.
pub const CLOSEDNESS_PATTERNS: [[Slot; 3]; 8] = {
    use Slot::{C, V};
    [
        [V, V, V],
        [V, V, C],
        [V, C, V],
        [C, V, V],
        [C, C, V],
        [C, V, C],
        [V, C, C],
        [C, C, C],
    ]
};

pub fn pattern_tag(p: [Slot; 3]) -> String {
    p.iter()
        .map(|s| match s {
            Slot::V => 'v',
            Slot::C => 'c',
        })
        .collect()
}

/// Max residual of `ω~([A,B],C) + ω~([B,C],A) + ω~([C,A],B)` for each
/// pattern, with `A, B, C` ranging over lifts of the input basis. `w` must be
/// given in the lifted frame of `t`.
pub fn verify_closedness_identities(
    t: &TangentLieAlgebra,
    w: &TwoForm,
) -> Result<Vec<([Slot; 3], f64)>> {
    let n = t.n();
    if w.dim() != 2 * n {
        return Err(GeometryError::InvalidDimension {
            expected: 2 * n,
            found: w.dim(),
        });
    }
    let p = t.unnormalized_to_lifted();
    let wu = p.transpose() * w.matrix() * &p;
    let big = unnormalized_lift(t.input(), t.g1(), t.g2())?;
    let alg = big.algebra();
    Ok(CLOSEDNESS_PATTERNS
        .iter()
        .map(|&pat| {
            let range = |slot: usize| match pat[slot] {
                Slot::V => 0..n,
                Slot::C => n..2 * n,
            };
            (pat, cyclic_defect(alg, &wu, &range))
        })
        .collect())
}
