//! Seeded generators shared by the integration suites.

#![allow(dead_code)]

use dephase::model::{BasisIndex, EnvState, InteractionMatrix, Rational};
use dephase::Complex64 as C64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn reg(value: u64, width: usize) -> BasisIndex {
    BasisIndex::new(value, width).unwrap()
}

pub fn rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.random_range(-4..=4), rng.random_range(1..=3)).unwrap()
}

pub fn nonzero_row(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    loop {
        let row: Vec<Rational> = (0..n).map(|_| rational(rng)).collect();
        if row.iter().any(|x| !x.is_zero()) {
            return row;
        }
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, k: usize, n: usize) -> InteractionMatrix {
    InteractionMatrix::new(
        (0..k)
            .map(|_| (0..n).map(|_| rational(rng)).collect())
            .collect(),
    )
    .unwrap()
}

/// All rows equal to one random nonzero row.
pub fn collective_matrix(rng: &mut ChaCha8Rng, k: usize, n: usize) -> InteractionMatrix {
    InteractionMatrix::new(vec![nonzero_row(rng, n); k]).unwrap()
}

/// Random normalized environment state with full support.
pub fn random_env(rng: &mut ChaCha8Rng, width: usize) -> EnvState {
    let dim = 1u64 << width;
    let raw: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let terms = raw
        .into_iter()
        .enumerate()
        .map(|(n, a)| (reg(n as u64, width), a / norm))
        .collect();
    EnvState::new(width, terms).unwrap()
}

/// Random normalized register amplitude vector of length 2^width.
pub fn random_amplitudes(rng: &mut ChaCha8Rng, width: usize) -> Vec<C64> {
    let dim = 1usize << width;
    let raw: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    raw.into_iter().map(|a| a / norm).collect()
}
