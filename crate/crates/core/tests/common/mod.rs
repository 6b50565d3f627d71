#![allow(dead_code)]

use covop_core::structure::{self, StructureMatrix};
use covop_core::{Complex64, FiniteVector, WindowMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

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

pub fn random_unit_gram(rng: &mut ChaCha8Rng, radius: i64) -> StructureMatrix {
    let table: Vec<(i64, FiniteVector)> = (-radius..=radius).map(|n| (n, random_unit_vector(rng, 3))).collect();
    structure::gram(table, FiniteVector::new())
}

pub fn random_matrix(rng: &mut ChaCha8Rng, radius: usize) -> WindowMatrix {
    WindowMatrix::from_fn(radius, |_, _| random_complex(rng)).unwrap()
}
