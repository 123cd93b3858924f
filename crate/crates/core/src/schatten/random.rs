//! Seeded random test matrices.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{ComplexMatrix, Symbol};
use crate::Complex64;

/// Entries with real and imaginary parts uniform in `[-1, 1)`.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_real_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng.random_range(-1.0..1.0), 0.0))
}

pub fn random_symbol<R: Rng>(rng: &mut R, n: usize) -> Symbol {
    Symbol::new(random_matrix(rng, n, n)).expect("square")
}

/// Unitary factor of the QR decomposition of a random matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let m = random_matrix(rng, n, n).into_dmatrix();
    ComplexMatrix::from_dmatrix(m.qr().q()).expect("finite")
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}
