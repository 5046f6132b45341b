//! Operand streams shared by the benchmarks.

use clwe_core::sampler::uniform_a;
use clwe_core::{AElem, CyclicAlgebra};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// `count` pairs of uniform elements in coefficient form.
pub fn operand_pairs(alg: &CyclicAlgebra, count: usize, seed: u64) -> Vec<(AElem, AElem)> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (uniform_a(alg, &mut rng), uniform_a(alg, &mut rng)))
        .collect()
}
