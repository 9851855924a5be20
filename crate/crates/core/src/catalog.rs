//! Built-in algebras. Bracket tables only; metrics live in [`crate::problem`].

use crate::lie::LieAlgebra;

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Heisenberg algebra: `[X, Y] = Z`.
pub fn heisenberg() -> LieAlgebra {
    LieAlgebra::from_upper(labels(&["X", "Y", "Z"]), &[(0, 1, 2, 1.0)]).expect("valid table")
}

/// `R² ⋊ R`: `[Z, X] = X`, `[Z, Y] = −Y`, `[X, Y] = 0`.
pub fn solvable_rr2() -> LieAlgebra {
    LieAlgebra::from_upper(
        labels(&["X", "Y", "Z"]),
        // [X,Z] = -X, [Y,Z] = Y
        &[(0, 2, 0, -1.0), (1, 2, 1, 1.0)],
    )
    .expect("valid table")
}

/// `su(2)`: `[X, Y] = Z`, `[Y, Z] = X`, `[Z, X] = Y`.
pub fn su2() -> LieAlgebra {
    LieAlgebra::from_upper(
        labels(&["X", "Y", "Z"]),
        &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (0, 2, 1, -1.0)],
    )
    .expect("valid table")
}

/// `aff(1)`: `[X, Y] = Y`.
pub fn aff1() -> LieAlgebra {
    LieAlgebra::from_upper(labels(&["X", "Y"]), &[(0, 1, 1, 1.0)]).expect("valid table")
}

/// Abelian algebra of dimension 2 or 3 (labels X, Y, Z), or `e1..en` otherwise.
pub fn abelian(n: usize) -> LieAlgebra {
    let names: Vec<String> = if n <= 3 {
        labels(&["X", "Y", "Z"][..n])
    } else {
        (1..=n).map(|i| format!("e{i}")).collect()
    };
    LieAlgebra::abelian(names)
}
