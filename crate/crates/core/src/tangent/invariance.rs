use crate::error::{GeometryError, Result};
use crate::geometry::MetricLieAlgebra;
use crate::lie::{LieAlgebra, LinearMap, Metric};
use crate::tensor::Tensor3;

use super::{block_diag, TangentLieAlgebra};

/// Bi-invariance of `g~` next to the two base conditions that imply it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftBiInvariance {
    pub lift_satisfies_oneill: bool,
    pub g1_biinv: bool,
    pub g2_double_bracket: bool,
    /// `(g1_biinv && g2_double_bracket) => lift_satisfies_oneill`
    pub implication_holds: bool,
    pub lift_defect: f64,
    pub g1_defect: f64,
    pub g2_defect: f64,
}

pub fn bi_invariance_of_lift(t: &TangentLieAlgebra, tol: f64) -> LiftBiInvariance {
    let lift_defect = t.lifted_geometry().bi_invariance_defect();
    let g1_defect = t.frame_geometry1().bi_invariance_defect();
    let g2_defect = t.frame_geometry2().double_bracket_defect();
    let lift_satisfies_oneill = lift_defect <= tol;
    let g1_biinv = g1_defect <= tol;
    let g2_double_bracket = g2_defect <= tol;
    LiftBiInvariance {
        lift_satisfies_oneill,
        g1_biinv,
        g2_double_bracket,
        implication_holds: !(g1_biinv && g2_double_bracket) || lift_satisfies_oneill,
        lift_defect,
        g1_defect,
        g2_defect,
    }
}

/// `blockdiag(τ2, τ1)` on the unnormalized basis `{X_i^v, X_i^c}`.
pub fn lift_automorphism(tau1: &LinearMap, tau2: &LinearMap) -> Result<LinearMap> {
    if tau1.dim() != tau2.dim() {
        return Err(GeometryError::InvalidDimension {
            expected: tau1.dim(),
            found: tau2.dim(),
        });
    }
    Ok(LinearMap(block_diag(tau2.matrix(), tau1.matrix())))
}

/// `g~` on the unnormalized basis `{X_1^v, …, X_n^v, X_1^c, …, X_n^c}` built
/// from the input basis, with metric `blockdiag(g2, g1)`.
pub fn unnormalized_lift(a: &LieAlgebra, g1: &Metric, g2: &Metric) -> Result<MetricLieAlgebra> {
    let n = a.dim();
    for d in [g1.dim(), g2.dim()] {
        if d != n {
            return Err(GeometryError::InvalidDimension {
                expected: n,
                found: d,
            });
        }
    }
    let mut b = Tensor3::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let c = a.c(i, j, k);
                b[(n + i, n + j, n + k)] = c;
                b[(n + i, j, k)] = c;
                b[(i, n + j, k)] = c;
            }
        }
    }
    let mut labels: Vec<String> = a.labels().iter().map(|l| format!("{l}^v")).collect();
    labels.extend(a.labels().iter().map(|l| format!("{l}^c")));
    let lifted = LieAlgebra::from_tensor_upper(labels, &b);
    let metric = Metric::new(block_diag(g2.matrix(), g1.matrix()))?;
    MetricLieAlgebra::new(lifted, metric)
}

impl TangentLieAlgebra {
    /// `g~` on the unnormalized input-basis lift; see [`unnormalized_lift`].
    pub fn unnormalized_geometry(&self) -> MetricLieAlgebra {
        unnormalized_lift(self.input(), self.g1(), self.g2()).expect("validated at build")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::tangent::build_tangent;
    use nalgebra::DMatrix;

    #[test]
    fn abelian_all_true() {
        let t = build_tangent(
            &catalog::abelian(3),
            &Metric::identity(3),
            &Metric::diagonal(&[1., 2., 7.]).unwrap(),
        )
        .unwrap();
        let r = bi_invariance_of_lift(&t, 1e-9);
        assert!(
            r.lift_satisfies_oneill && r.g1_biinv && r.g2_double_bracket && r.implication_holds
        );
    }

    #[test]
    fn heisenberg_not_bi_invariant() {
        let t = build_tangent(
            &catalog::heisenberg(),
            &Metric::identity(3),
            &Metric::diagonal(&[2., 2., 1.]).unwrap(),
        )
        .unwrap();
        let r = bi_invariance_of_lift(&t, 1e-9);
        assert!(!r.g1_biinv);
        assert_eq!(r.g1_defect, 1.0);
        assert!(r.implication_holds);
    }

    #[test]
    fn su2_lift_fails_oneill() {
        let g = Metric::diagonal(&[2., 2., 2.]).unwrap();
        let t = build_tangent(&catalog::su2(), &g, &g).unwrap();
        let r = bi_invariance_of_lift(&t, 1e-9);
        assert!(r.g1_biinv);
        assert!(!r.g2_double_bracket);
        assert!(!r.lift_satisfies_oneill);
        assert!(r.implication_holds);
    }

    #[test]
    fn unnormalized_lift_matches_frame() {
        let a = catalog::solvable_rr2();
        let g1 = Metric::new(DMatrix::from_row_slice(
            3,
            3,
            &[2., 0.3, 0., 0.3, 1., 0.1, 0., 0.1, 1.5],
        ))
        .unwrap();
        let g2 = Metric::diagonal(&[0.5, 2., 3.]).unwrap();
        let t = build_tangent(&a, &g1, &g2).unwrap();
        let u = t.unnormalized_geometry();
        assert!(u.algebra().jacobi_defect() < 1e-12);
        assert_eq!(u.metric().matrix(), &t.unnormalized_metric());
        // the frame change P carries the unnormalized algebra to the lifted frame
        let p = LinearMap(t.unnormalized_to_lifted().try_inverse().unwrap());
        let moved = u.algebra().change_basis(&p).unwrap();
        assert!(moved.constants().max_abs_diff(t.lifted().constants()) < 1e-12);
    }

    #[test]
    fn lifted_automorphism_heisenberg() {
        let a = catalog::heisenberg();
        let tau = LinearMap::diagonal(&[2., 3., 6.]);
        let big = lift_automorphism(&tau, &tau).unwrap();
        let g1 = Metric::identity(3);
        let g2 = Metric::diagonal(&[2., 2., 1.]).unwrap();
        let u = unnormalized_lift(&a, &g1, &g2).unwrap();
        assert!(u.algebra().is_automorphism(&big, 1e-12));

        let pulled = u.metric().pullback(&big).unwrap();
        let want = unnormalized_lift(&a, &g1.pullback(&tau).unwrap(), &g2.pullback(&tau).unwrap())
            .unwrap();
        assert!((pulled.matrix() - want.metric().matrix()).amax() < 1e-12);

        let id = lift_automorphism(&LinearMap::identity(3), &LinearMap::identity(3)).unwrap();
        assert_eq!(id.matrix(), &DMatrix::identity(6, 6));
        assert!(lift_automorphism(&LinearMap::identity(2), &LinearMap::identity(3)).is_err());
    }
}
