use crate::error::{GeometryError, Result};
use crate::geometry::{curvature_of, for_each4, sectional_with, CurvatureTensor};
use crate::lie::{ad_star, Vector};
use crate::tensor::Tensor4;

use super::connection::lifted_connection_closed_form;
use super::{LiftedVector, TangentLieAlgebra};

/// One of the six independent index blocks of the lifted curvature, named
/// by the lift type of `(X, Y, Z → R(X,Y)Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurvatureBlock {
    /// `(c, c, c → c)`
    CompleteTriple,
    /// `(c, c, v → v)`
    CompleteCompleteVertical,
    /// `(v, c, c → v)`
    VerticalCompleteComplete,
    /// `(v, v, c → c)`
    VerticalVerticalComplete,
    /// `(v, c, v → c)`
    VerticalCompleteVertical,
    /// `(v, v, v → v)`
    VerticalTriple,
}

impl CurvatureBlock {
    pub const ALL: [CurvatureBlock; 6] = [
        CurvatureBlock::CompleteTriple,
        CurvatureBlock::CompleteCompleteVertical,
        CurvatureBlock::VerticalCompleteComplete,
        CurvatureBlock::VerticalVerticalComplete,
        CurvatureBlock::VerticalCompleteVertical,
        CurvatureBlock::VerticalTriple,
    ];

    /// Short tag such as `"ccc->c"`.
    pub fn tag(self) -> &'static str {
        match self {
            CurvatureBlock::CompleteTriple => "ccc->c",
            CurvatureBlock::CompleteCompleteVertical => "ccv->v",
            CurvatureBlock::VerticalCompleteComplete => "vcc->v",
            CurvatureBlock::VerticalVerticalComplete => "vvc->c",
            CurvatureBlock::VerticalCompleteVertical => "vcv->c",
            CurvatureBlock::VerticalTriple => "vvv->v",
        }
    }

    /// Offsets of `(i, j, k, h)` in the lifted frame.
    fn offsets(self, n: usize) -> [usize; 4] {
        match self {
            CurvatureBlock::CompleteTriple => [n, n, n, n],
            CurvatureBlock::CompleteCompleteVertical => [n, n, 0, 0],
            CurvatureBlock::VerticalCompleteComplete => [0, n, n, 0],
            CurvatureBlock::VerticalVerticalComplete => [0, 0, n, n],
            CurvatureBlock::VerticalCompleteVertical => [0, n, 0, n],
            CurvatureBlock::VerticalTriple => [0, 0, 0, 0],
        }
    }
}

/// Deviation between the tensor path and the structure-constant block formula.
///
/// `as_printed` evaluates the formula literally; `corrected` uses the reading
/// with consistent `sqrt(λ)` weights. They differ only for the `vvc->c` and
/// `vcv->c` blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockDeviation {
    pub block: CurvatureBlock,
    pub as_printed: f64,
    pub corrected: f64,
}

/// Lifted curvature tensor plus the per-block diagnostic.
#[derive(Debug, Clone)]
pub struct LiftedCurvature {
    pub tensor: CurvatureTensor,
    pub blocks: Vec<BlockDeviation>,
}

impl LiftedCurvature {
    pub fn block(&self, b: CurvatureBlock) -> BlockDeviation {
        *self
            .blocks
            .iter()
            .find(|d| d.block == b)
            .expect("all six blocks are evaluated")
    }
}

/// Curvature of `g~` from the closed-form connection, compared block by block
/// against the structure-constant formulas.
pub fn lifted_curvature(t: &TangentLieAlgebra) -> LiftedCurvature {
    let c1 = t.frame_geometry1().levi_civita();
    let c2 = t.frame_geometry2().levi_civita();
    let conn = lifted_connection_closed_form(t, &c1, &c2);
    let tensor = curvature_of(t.lifted(), &conn);
    let n = t.n();
    let r = tensor.tensor();
    let blocks = CurvatureBlock::ALL
        .iter()
        .map(|&b| {
            let off = b.offsets(n);
            let printed = block_formula(t, b, false);
            let corrected = block_formula(t, b, true);
            let mut dp: f64 = 0.0;
            let mut dc: f64 = 0.0;
            for_each4(n, |i, j, k, h| {
                let v = r[(off[0] + i, off[1] + j, off[2] + k, off[3] + h)];
                dp = dp.max((printed[(i, j, k, h)] - v).abs());
                dc = dc.max((corrected[(i, j, k, h)] - v).abs());
            });
            BlockDeviation {
                block: b,
                as_printed: dp,
                corrected: dc,
            }
        })
        .collect();
    LiftedCurvature { tensor, blocks }
}

/// Structure-constant expression of one curvature block (`n⁴` entries,
/// component `h` of `R~(Y_i, Y_j) Y_k` within the block's index ranges).
pub fn block_formula(t: &TangentLieAlgebra, block: CurvatureBlock, corrected: bool) -> Tensor4 {
    let n = t.n();
    let a = t.base();
    let s: Vec<f64> = t.lambdas().iter().map(|l| l.sqrt()).collect();
    let c = |i: usize, j: usize, k: usize| a.c(i, j, k);
    // Koszul combination c_ij^k − c_jk^i + c_ki^j
    let kz = |i: usize, j: usize, k: usize| c(i, j, k) - c(j, k, i) + c(k, i, j);
    let mut out = Tensor4::zeros(n);
    for_each4(n, |i, j, k, h| {
        let mut acc = 0.0;
        for l in 0..n {
            acc += match block {
                CurvatureBlock::CompleteTriple => {
                    kz(j, k, l) * kz(i, l, h)
                        - kz(i, k, l) * kz(j, l, h)
                        - 2.0 * c(i, j, l) * kz(l, k, h)
                }
                CurvatureBlock::CompleteCompleteVertical => {
                    let p = |a: usize, b: usize, m: usize| {
                        s[m] / s[b] * c(a, b, m) + s[b] / s[m] * c(m, a, b)
                    };
                    p(j, k, l) * p(i, l, h)
                        - p(i, k, l) * p(j, l, h)
                        - 2.0 * c(i, j, l) * p(l, k, h)
                }
                CurvatureBlock::VerticalCompleteComplete => {
                    kz(j, k, l) * (s[h] / s[i] * c(i, l, h) - s[i] / s[h] * c(l, h, i))
                        - (s[l] / s[i] * c(i, k, l) - s[i] / s[l] * c(k, l, i))
                            * (s[h] / s[l] * c(j, l, h) + s[l] / s[h] * c(h, j, l))
                        - 2.0 * s[l] / s[i]
                            * c(i, j, l)
                            * (s[h] / s[l] * c(l, k, h) - s[l] / s[h] * c(k, h, l))
                }
                CurvatureBlock::VerticalVerticalComplete => {
                    let first = if corrected { s[l] / s[j] } else { s[l] / s[k] };
                    (first * c(j, k, l) - s[j] / s[l] * c(k, l, j))
                        * (s[l] / s[i] * c(h, i, l) - s[i] / s[l] * c(l, h, i))
                        - (s[l] / s[i] * c(i, k, l) - s[i] / s[l] * c(k, l, i))
                            * (s[l] / s[j] * c(h, j, l) - s[j] / s[l] * c(l, h, j))
                }
                CurvatureBlock::VerticalCompleteVertical => {
                    let last = if corrected { s[l] / s[i] } else { s[k] / s[i] };
                    (s[l] / s[k] * c(j, k, l) + s[k] / s[l] * c(l, j, k))
                        * (s[l] / s[i] * c(h, i, l) - s[i] / s[l] * c(l, h, i))
                        - (s[k] / s[i] * c(l, i, k) - s[i] / s[k] * c(k, l, i)) * kz(j, l, h)
                        - 2.0
                            * last
                            * c(i, j, l)
                            * (s[k] / s[l] * c(h, l, k) - s[l] / s[k] * c(k, h, l))
                }
                CurvatureBlock::VerticalTriple => {
                    (s[k] / s[j] * c(l, j, k) - s[j] / s[k] * c(k, l, j))
                        * (s[h] / s[i] * c(i, l, h) - s[i] / s[h] * c(l, h, i))
                        - (s[k] / s[i] * c(l, i, k) - s[i] / s[k] * c(k, l, i))
                            * (s[h] / s[j] * c(j, l, h) - s[j] / s[h] * c(l, h, j))
                }
            };
        }
        out[(i, j, k, h)] = 0.25 * acc;
    });
    out
}

/// Lift types of the operator-level curvature identities, in the order
/// `(X, Y, Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorItem {
    Ccc,
    Ccv,
    Vcc,
    Vcv,
    Vvc,
    Vvv,
}

impl OperatorItem {
    pub const ALL: [OperatorItem; 6] = [
        OperatorItem::Ccc,
        OperatorItem::Ccv,
        OperatorItem::Vcc,
        OperatorItem::Vcv,
        OperatorItem::Vvc,
        OperatorItem::Vvv,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            OperatorItem::Ccc => "R(X^c,Y^c)Z^c",
            OperatorItem::Ccv => "R(X^c,Y^c)Z^v",
            OperatorItem::Vcc => "R(X^v,Y^c)Z^c",
            OperatorItem::Vcv => "R(X^v,Y^c)Z^v",
            OperatorItem::Vvc => "R(X^v,Y^v)Z^c",
            OperatorItem::Vvv => "R(X^v,Y^v)Z^v",
        }
    }
}

/// Deviations of the operator-level curvature expressions (in terms of `∇¹`,
/// `∇²`, `R¹`, `R²` and `ad₂*`) from the tensor path. Only the three items with
/// an unambiguous reading are evaluated; the rest are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorReport {
    pub items: Vec<(OperatorItem, Option<f64>)>,
}

pub fn operator_curvature_report(
    t: &TangentLieAlgebra,
    tensor: &CurvatureTensor,
) -> OperatorReport {
    let n = t.n();
    let base = t.base();
    let m1 = t.frame_geometry1();
    let m2 = t.frame_geometry2();
    let c2 = m2.levi_civita();
    let r1 = m1.curvature(&m1.levi_civita());
    let r2 = m2.curvature(&c2);
    let g2 = m2.metric();
    let lam = t.lambdas();
    let s: Vec<f64> = lam.iter().map(|l| l.sqrt()).collect();
    let e = |i: usize| base.basis_vector(i);
    let ad2 = |x: &Vector, y: &Vector| ad_star(base, g2, x).expect("dims agree").apply(y);
    let nab2 = |x: &Vector, y: &Vector| c2.covariant(x, y);
    let r = tensor.tensor();

    let mut ccc: f64 = 0.0;
    let mut ccv: f64 = 0.0;
    let mut vvv: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (e(i), e(j));
            let xy = base.bracket_unchecked(&x, &y);
            for k in 0..n {
                let z = e(k);
                let base_r = r1.apply(&x, &y, &z);

                // (X_i^c, X_j^c) X_k^v, then to the frame: divide by s_k, vertical h scaled by s_h
                let u_y = nab2(&y, &z) + ad2(&z, &y) * 0.5;
                let u_x = nab2(&x, &z) + ad2(&z, &x) * 0.5;
                let v = r2.apply(&x, &y, &z) + nab2(&x, &ad2(&z, &y)) * 0.5 + ad2(&u_y, &x) * 0.5
                    - nab2(&y, &ad2(&z, &x)) * 0.5
                    - ad2(&u_x, &y) * 0.5
                    - ad2(&z, &xy) * 0.5;

                // φ(∇²_Y Z − ½[Y,Z]) in the frame is diag(λ) applied coordinatewise
                let w = |p: &Vector| {
                    let mut q = nab2(p, &z) - base.bracket_unchecked(p, &z) * 0.5;
                    for m in 0..n {
                        q[m] *= lam[m];
                    }
                    q
                };
                let (w_y, w_x) = (w(&y), w(&x));
                let vv =
                    nab2(&x, &w_y) + ad2(&x, &w_y) * 0.5 - nab2(&y, &w_x) - ad2(&y, &w_x) * 0.5;

                for h in 0..n {
                    ccc = ccc.max((r[(n + i, n + j, n + k, n + h)] - base_r[h]).abs());
                    ccv = ccv.max((r[(n + i, n + j, k, h)] - v[h] * s[h] / s[k]).abs());
                    vvv = vvv.max((r[(i, j, k, h)] - vv[h] * s[h] / (s[i] * s[j] * s[k])).abs());
                }
            }
        }
    }
    let items = OperatorItem::ALL
        .iter()
        .map(|&it| {
            let d = match it {
                OperatorItem::Ccc => Some(ccc),
                OperatorItem::Ccv => Some(ccv),
                OperatorItem::Vvv => Some(vvv),
                _ => None,
            };
            (it, d)
        })
        .collect();
    OperatorReport { items }
}

/// Sectional curvature of the plane spanned by two lifted vectors.
pub fn lifted_sectional(
    t: &TangentLieAlgebra,
    curvature: &CurvatureTensor,
    u: &LiftedVector,
    v: &LiftedVector,
) -> Result<f64> {
    sectional_with(t.lifted_metric(), curvature, u.coeffs(), v.coeffs())
}

/// Which lifts a basis plane uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftPair {
    /// `(X_i^c, X_j^c)`, `i != j`
    CompleteComplete,
    /// `(X_i^v, X_j^v)`, `i != j`
    VerticalVertical,
    /// `(X_i^v, X_j^c)`, any `i, j`
    VerticalComplete,
}

/// Sectional curvature of a basis plane of `g~` straight from the structure
/// constants of the eigenframe and `λ`.
pub fn basis_sectional_closed_form(
    t: &TangentLieAlgebra,
    pair: LiftPair,
    i: usize,
    j: usize,
) -> Result<f64> {
    let n = t.n();
    for idx in [i, j] {
        if idx >= n {
            return Err(GeometryError::IndexOutOfRange { index: idx, dim: n });
        }
    }
    if i == j && pair != LiftPair::VerticalComplete {
        return Err(GeometryError::DegeneratePlane { gram: 0.0 });
    }
    let a = t.base();
    let lam = t.lambdas();
    let s: Vec<f64> = lam.iter().map(|l| l.sqrt()).collect();
    let c = |p: usize, q: usize, r: usize| a.c(p, q, r);
    let mut acc = 0.0;
    for l in 0..n {
        acc += match pair {
            LiftPair::CompleteComplete => {
                -4.0 * c(l, j, j) * c(l, i, i)
                    - (c(i, j, l) - c(j, l, i) + c(l, i, j))
                        * (c(j, l, i) - c(l, i, j) + c(i, j, l))
                    - 2.0 * c(i, j, l) * (c(l, j, i) - c(j, i, l) + c(i, l, j))
            }
            LiftPair::VerticalVertical => {
                (s[j] / s[i] * c(l, i, j) + s[i] / s[j] * c(l, j, i)).powi(2)
                    - 4.0 * c(l, j, j) * c(l, i, i)
            }
            LiftPair::VerticalComplete => {
                lam[i] / lam[l] * c(j, l, i).powi(2)
                    - 3.0 * lam[l] / lam[i] * c(i, j, l).powi(2)
                    - 2.0 * c(i, j, l) * c(l, j, i)
                    - 4.0 * c(l, j, j) * c(l, i, i)
            }
        };
    }
    Ok(0.25 * acc)
}
