//! Shared fixtures for the benchmarks.

use nonneg3_core::arith::random_positive_rational;
use nonneg3_core::{Matrix, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `A B` with positive `rows x 3` and `3 x cols` factors.
pub fn positive_rank3(rows: usize, cols: usize, seed: u64) -> Matrix<Rational> {
    let mut rng = seeded(seed);
    let a = Matrix::from_fn(rows, 3, |_, _| random_positive_rational(&mut rng));
    let b = Matrix::from_fn(3, cols, |_, _| random_positive_rational(&mut rng));
    a.mul(&b).expect("inner dimensions agree")
}
