#![allow(dead_code)]

use std::f64::consts::TAU;

use covop_core::structure::{self, StructureMatrix};
use covop_core::{Complex64, FiniteVector, GeneralizedVector, Membership, WindowMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random vector supported on `[-spread, spread]` with `terms` draws.
pub fn random_vector(rng: &mut ChaCha8Rng, spread: i64, terms: usize) -> FiniteVector {
    FiniteVector::from_pairs((0..terms).map(|_| (rng.gen_range(-spread..=spread), random_complex(rng))))
}

pub fn random_unit_vector(rng: &mut ChaCha8Rng, spread: i64) -> FiniteVector {
    loop {
        let v = random_vector(rng, spread, 4);
        if !v.is_zero() {
            return v.normalized();
        }
    }
}

/// Gram matrix of random unit vectors `ψ_n`, `|n| <= radius`.
pub fn random_unit_gram(rng: &mut ChaCha8Rng, radius: i64) -> StructureMatrix {
    let table: Vec<(i64, FiniteVector)> = (-radius..=radius).map(|n| (n, random_unit_vector(rng, 3))).collect();
    structure::gram(table, FiniteVector::new())
}

pub fn random_matrix(rng: &mut ChaCha8Rng, radius: usize) -> WindowMatrix {
    WindowMatrix::from_fn(radius, |_, _| random_complex(rng)).unwrap()
}

pub fn random_generalized(rng: &mut ChaCha8Rng, spread: i64) -> GeneralizedVector {
    let v = random_vector(rng, spread, 6);
    GeneralizedVector::new(Membership::H1, move |n| v.get(n))
}

pub fn random_phases(rng: &mut ChaCha8Rng, radius: i64) -> structure::PhaseTable {
    structure::PhaseTable::new((-radius..=radius).map(|n| (n, rng.gen_range(0.0..TAU))))
}

/// Row-major entries with `|n - m|` tagged, for oracle comparisons.
pub fn entries_with_offsets(a: &WindowMatrix) -> Vec<(i64, i64, Complex64)> {
    let mut out = Vec::with_capacity(a.dim() * a.dim());
    for n in a.indices() {
        for m in a.indices() {
            out.push((n, m, a.at(n, m)));
        }
    }
    out
}
