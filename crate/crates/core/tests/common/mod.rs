#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tanglie_core::{catalog, LieAlgebra, Metric};

/// The six catalog algebras, in a fixed order.
pub fn algebras() -> Vec<(&'static str, LieAlgebra)> {
    vec![
        ("heisenberg", catalog::heisenberg()),
        ("solvable_rr2", catalog::solvable_rr2()),
        ("su2", catalog::su2()),
        ("aff1", catalog::aff1()),
        ("abelian2", catalog::abelian(2)),
        ("abelian3", catalog::abelian(3)),
    ]
}

/// `AᵀA + shift·I` with entries of `A` taken from `entries` (length `n²`).
pub fn spd_from(n: usize, entries: &[f64], shift: f64) -> Metric {
    let a = DMatrix::from_row_slice(n, n, entries);
    let g = a.transpose() * &a + DMatrix::identity(n, n) * shift;
    Metric::new((&g + g.transpose()) * 0.5).expect("spd by construction")
}

pub fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> Metric {
    let entries: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
    spd_from(n, &entries, 0.2)
}

/// `count` seeded SPD pairs for an algebra of dimension `n`.
pub fn seeded_pairs(n: usize, count: usize, seed: u64) -> Vec<(Metric, Metric)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (random_spd(&mut rng, n), random_spd(&mut rng, n)))
        .collect()
}
