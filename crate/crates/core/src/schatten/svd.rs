//! Singular value decompositions, computed with `faer`.
//!
//! nalgebra's complex SVD can return a wrong factorization on nearly
//! rank-deficient input, which the alternating norm estimates hit routinely.

use faer::Mat;
use nalgebra::DMatrix;

use crate::Complex64;

/// Thin SVD `A = U diag(s) V_t` with `s` in decreasing order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DMatrix<Complex64>,
    pub s: Vec<f64>,
    pub v_t: DMatrix<Complex64>,
}

fn to_faer(a: &DMatrix<Complex64>) -> Mat<Complex64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

pub fn svd(a: &DMatrix<Complex64>) -> Svd {
    let f = to_faer(a).thin_svd().expect("SVD converges");
    let (u, v, s) = (f.U(), f.V(), f.S().column_vector());
    let k = s.nrows();
    Svd {
        u: DMatrix::from_fn(a.nrows(), k, |i, j| u[(i, j)]),
        s: (0..k).map(|j| s[j].re).collect(),
        v_t: DMatrix::from_fn(k, a.ncols(), |i, j| v[(j, i)].conj()),
    }
}

pub fn singular_values(a: &DMatrix<Complex64>) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    to_faer(a).singular_values().expect("SVD converges")
}

pub fn singular_values_real(a: &DMatrix<f64>) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    Mat::<f64>::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
        .singular_values()
        .expect("SVD converges")
}
