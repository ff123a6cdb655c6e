//! Fixed inputs shared by the benchmarks.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nilentropy_core::{IntMatrix, IntPolynomial};

pub fn cat_map() -> IntMatrix {
    IntMatrix::from_i64_rows(&[[2, 1], [1, 1]])
}

pub fn lehmer() -> IntPolynomial {
    IntPolynomial::from_i64_descending(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
}

/// `count` matrices of size `d` with entries in `[-bound, bound]`.
pub fn random_matrices(count: usize, d: usize, bound: i64, seed: u64) -> Vec<IntMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| IntMatrix::from_fn(d, d, |_, _| BigInt::from(rng.gen_range(-bound..=bound))))
        .collect()
}
