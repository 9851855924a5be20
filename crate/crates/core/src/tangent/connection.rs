use crate::geometry::Connection;
use crate::lie::{ad_star, Vector};
use crate::tensor::Tensor3;

use super::TangentLieAlgebra;

/// Levi-Civita connection of `g~` in the lifted frame, assembled from the
/// base connections `c1` of `(g, g1)` and `c2` of `(g, g2)`, both in the
/// eigenframe:
///
/// ```text
/// ∇~_{X^c} Y^c = (∇¹_X Y)^c
/// ∇~_{X^c} Y^v = (∇²_X Y + ½ (ad₂ Y)* X)^v
/// ∇~_{X^v} Y^c = (∇²_X Y + ½ (ad₂ X)* Y)^v
/// ∇~_{X^v} Y^v = (φ(∇²_X Y − ½ [X, Y]))^c
/// ```
pub fn lifted_connection_closed_form(
    t: &TangentLieAlgebra,
    c1: &Connection,
    c2: &Connection,
) -> Connection {
    let n = t.n();
    let base = t.base();
    let g2 = t.frame_metric2();
    let lam = t.lambdas();
    let s: Vec<f64> = lam.iter().map(|l| l.sqrt()).collect();
    let e = |i: usize| base.basis_vector(i);
    let ad2: Vec<_> = (0..n)
        .map(|i| ad_star(base, &g2, &e(i)).expect("frame dims agree"))
        .collect();

    let mut gamma = Tensor3::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            let nabla2 = c2.covariant(&e(i), &e(j));
            let cv: Vector = &nabla2 + ad2[j].apply(&e(i)) * 0.5;
            let vc: Vector = &nabla2 + ad2[i].apply(&e(j)) * 0.5;
            for k in 0..n {
                gamma[(n + i, n + j, n + k)] = c1.gamma(i, j, k);
                gamma[(n + i, j, k)] = cv[k] * s[k] / s[j];
                gamma[(i, n + j, k)] = vc[k] * s[k] / s[i];
                gamma[(i, j, n + k)] =
                    lam[k] * (c2.gamma(i, j, k) - 0.5 * base.c(i, j, k)) / (s[i] * s[j]);
            }
        }
    }
    Connection::from_tensor(gamma)
}

/// The same connection written directly in the structure constants of the
/// eigenframe and `s_i = sqrt(λ_i)`:
///
/// ```text
/// Γ~(v_i, v_j → c_l) = ½ (s_j/s_i c_li^j − s_i/s_j c_jl^i)
/// Γ~(c_i, c_j → c_l) = ½ (c_ij^l − c_jl^i + c_li^j)
/// Γ~(c_i, v_j → v_l) = ½ (s_l/s_j c_ij^l + s_j/s_l c_li^j)
/// Γ~(v_i, c_j → v_l) = ½ (s_l/s_i c_ij^l − s_i/s_l c_jl^i)
/// ```
pub fn lifted_connection_structure_constants(t: &TangentLieAlgebra) -> Connection {
    let n = t.n();
    let a = t.base();
    let s: Vec<f64> = t.lambdas().iter().map(|l| l.sqrt()).collect();
    let c = |i, j, k| a.c(i, j, k);
    let mut gamma = Tensor3::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                gamma[(i, j, n + l)] = 0.5 * (s[j] / s[i] * c(l, i, j) - s[i] / s[j] * c(j, l, i));
                gamma[(n + i, n + j, n + l)] = 0.5 * (c(i, j, l) - c(j, l, i) + c(l, i, j));
                gamma[(n + i, j, l)] = 0.5 * (s[l] / s[j] * c(i, j, l) + s[j] / s[l] * c(l, i, j));
                gamma[(i, n + j, l)] = 0.5 * (s[l] / s[i] * c(i, j, l) - s[i] / s[l] * c(j, l, i));
            }
        }
    }
    Connection::from_tensor(gamma)
}

/// Coefficients `u` with `∇~_{x^v} y^v = Σ_k u_k X_k^c`, where `x`, `y` are
/// eigenframe coordinates and `c2` is the connection of `(g, g2)` there:
/// `u_k = Σ_ij x_i y_j λ_k (Γ²_ij^k − ½ c_ij^k)`.
pub fn vertical_vertical_coefficients(
    t: &TangentLieAlgebra,
    c2: &Connection,
    x: &Vector,
    y: &Vector,
) -> Vector {
    let n = t.n();
    let a = t.base();
    let lam = t.lambdas();
    let mut u = Vector::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let w = x[i] * y[j];
            if w == 0.0 {
                continue;
            }
            for k in 0..n {
                u[k] += w * lam[k] * (c2.gamma(i, j, k) - 0.5 * a.c(i, j, k));
            }
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lie::{LieAlgebra, Metric};
    use crate::tangent::{build_tangent, LiftedVector};

    fn paths(a: &LieAlgebra, g1: &Metric, g2: &Metric) -> (TangentLieAlgebra, [Connection; 3]) {
        let t = build_tangent(a, g1, g2).unwrap();
        let c1 = t.frame_geometry1().levi_civita();
        let c2 = t.frame_geometry2().levi_civita();
        let oracle = t.lifted_geometry().levi_civita();
        let closed = lifted_connection_closed_form(&t, &c1, &c2);
        let sc = lifted_connection_structure_constants(&t);
        (t, [oracle, closed, sc])
    }

    fn v(x: &[f64]) -> Vector {
        Vector::from_column_slice(x)
    }

    #[test]
    fn paths_agree_on_catalog() {
        let g1 = Metric::new(nalgebra::DMatrix::from_row_slice(
            3,
            3,
            &[2., 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 1.],
        ))
        .unwrap();
        let g2 = Metric::diagonal(&[0.7, 2.5, 1.3]).unwrap();
        for a in [
            catalog::heisenberg(),
            catalog::solvable_rr2(),
            catalog::su2(),
        ] {
            let (_, [o, c, s]) = paths(&a, &g1, &g2);
            assert!(o.max_abs_diff(&c) < 1e-12, "{:?}", a.labels());
            assert!(o.max_abs_diff(&s) < 1e-12);
        }
    }

    #[test]
    fn abelian_is_flat() {
        let (_, [o, c, s]) = paths(
            &catalog::abelian(3),
            &Metric::identity(3),
            &Metric::diagonal(&[1., 4., 9.]).unwrap(),
        );
        assert_eq!(o.tensor().max_abs(), 0.0);
        assert_eq!(c.tensor().max_abs(), 0.0);
        assert_eq!(s.tensor().max_abs(), 0.0);
    }

    #[test]
    fn heisenberg_values() {
        let (t, [_, c, _]) = paths(
            &catalog::heisenberg(),
            &Metric::identity(3),
            &Metric::diagonal(&[2., 2., 1.]).unwrap(),
        );
        let x = v(&[1., 0., 0.]);
        let y = v(&[0., 1., 0.]);
        let z = v(&[0., 0., 1.]);
        // ∇~_{X^v} Y^v = 0
        let xv = LiftedVector::vertical(&t, &x).unwrap();
        let yv = LiftedVector::vertical(&t, &y).unwrap();
        assert!(c.covariant(xv.coeffs(), yv.coeffs()).amax() < 1e-15);
        // ∇~_{X^c} Y^v = ½ Z^v
        let xc = LiftedVector::complete(&t, &x).unwrap();
        let got = c.covariant(xc.coeffs(), yv.coeffs());
        let want = LiftedVector::vertical(&t, &(z * 0.5)).unwrap();
        assert!((got - want.coeffs()).amax() < 1e-15);
        // ∇~_{X^c} (Y^v/√2) has Z^v coefficient 1/(2√2)
        let got = c.gamma(3 + 1, 2, 0);
        assert!((got - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn su2_bi_invariant_lift() {
        let g = Metric::diagonal(&[2., 2., 2.]).unwrap();
        let (t, [_, c, _]) = paths(&catalog::su2(), &g, &g);
        let a = catalog::su2();
        for i in 0..3 {
            for j in 0..3 {
                let x = a.basis_vector(i);
                let y = a.basis_vector(j);
                let br = a.bracket(&x, &y).unwrap();
                let (xc, xv) = (
                    LiftedVector::complete(&t, &x).unwrap(),
                    LiftedVector::vertical(&t, &x).unwrap(),
                );
                let (yc, yv) = (
                    LiftedVector::complete(&t, &y).unwrap(),
                    LiftedVector::vertical(&t, &y).unwrap(),
                );
                assert!(c.covariant(xv.coeffs(), yv.coeffs()).amax() < 1e-12);
                assert!(c.covariant(xv.coeffs(), yc.coeffs()).amax() < 1e-12);
                let want = LiftedVector::vertical(&t, &br).unwrap();
                assert!((c.covariant(xc.coeffs(), yv.coeffs()) - want.coeffs()).amax() < 1e-12);
                let want = LiftedVector::complete(&t, &(br * 0.5)).unwrap();
                assert!((c.covariant(xc.coeffs(), yc.coeffs()) - want.coeffs()).amax() < 1e-12);
            }
        }
    }

    #[test]
    fn vertical_vertical_block() {
        let t = build_tangent(
            &catalog::solvable_rr2(),
            &Metric::identity(3),
            &Metric::diagonal(&[1., 2., 3.]).unwrap(),
        )
        .unwrap();
        let c2 = t.frame_geometry2().levi_civita();
        let z = v(&[0., 0., 1.]);
        let x = v(&[1., 0., 0.]);
        let u = vertical_vertical_coefficients(&t, &c2, &z, &x);
        assert!((u - v(&[-0.5, 0., 0.])).amax() < 1e-15);

        let oracle = t.lifted_geometry().levi_civita();
        let zv = LiftedVector::vertical(&t, &z).unwrap();
        let xv = LiftedVector::vertical(&t, &x).unwrap();
        let full = oracle.covariant(zv.coeffs(), xv.coeffs());
        assert!(full.rows(0, 3).amax() < 1e-15);
        assert!((full.rows(3, 3) - v(&[-0.5, 0., 0.])).amax() < 1e-15);

        let h = build_tangent(
            &catalog::heisenberg(),
            &Metric::identity(3),
            &Metric::diagonal(&[2., 2., 1.]).unwrap(),
        )
        .unwrap();
        let c2 = h.frame_geometry2().levi_civita();
        // frame order (Z, X, Y)
        assert!(
            vertical_vertical_coefficients(&h, &c2, &v(&[0., 1., 0.]), &v(&[0., 0., 1.])).amax()
                < 1e-15
        );
    }
}
