use nalgebra::DMatrix;

use super::{ComplexMatrix, SchattenExponent};
use crate::error::{input, Result};
use crate::Complex64;

/// `(Σ σ_k^p)^{1/p}` over the given singular values, `max σ_k` at `p = ∞`.
pub fn norm_from_singular_values(sv: &[f64], p: SchattenExponent) -> f64 {
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return top;
    }
    let p = p.value();
    // scaled by the top value so that large exponents cannot overflow
    let s: f64 = sv.iter().map(|&x| (x / top).powf(p)).sum();
    top * s.powf(1.0 / p)
}

/// Schatten `p`-norm of `a`.
pub fn schatten_norm(a: &ComplexMatrix, p: SchattenExponent) -> f64 {
    norm_from_singular_values(&a.singular_values(), p)
}

/// Schatten norm of a real matrix, used by the large dense oracles.
pub fn schatten_norm_real(a: &DMatrix<f64>, p: SchattenExponent) -> f64 {
    norm_from_singular_values(&super::svd::singular_values_real(a), p)
}

/// `Tr(AB)` for `A` of shape `m×n` and `B` of shape `n×m`.
pub fn trace_pairing(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.rows() != b.cols() || a.cols() != b.rows() {
        return input(format!(
            "trace pairing needs m×n and n×m, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        ));
    }
    let (am, bm) = (a.as_dmatrix(), b.as_dmatrix());
    let mut acc = Complex64::new(0.0, 0.0);
    for x in 0..a.rows() {
        for y in 0..a.cols() {
            acc += am[(x, y)] * bm[(y, x)];
        }
    }
    Ok(acc)
}

/// `Σ w_x w_y A(x,y) B(y,x)` where `x` runs over the rows of `A` with weights
/// `row_weights` and `y` over its columns with weights `col_weights`.
pub fn trace_pairing_weighted(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    row_weights: &[f64],
    col_weights: &[f64],
) -> Result<Complex64> {
    if row_weights.len() != a.rows() || col_weights.len() != a.cols() {
        return input("weight vectors do not match the matrix shape");
    }
    let ea = weighted_embedding(a, row_weights, col_weights)?;
    let eb = weighted_embedding(b, col_weights, row_weights)?;
    trace_pairing(&ea, &eb)
}

/// `diag(√w_rows) · A · diag(√w_cols)`: the isometry carrying a kernel on a
/// weighted index set to a plain matrix.
pub fn weighted_embedding(
    a: &ComplexMatrix,
    row_weights: &[f64],
    col_weights: &[f64],
) -> Result<ComplexMatrix> {
    if row_weights.len() != a.rows() || col_weights.len() != a.cols() {
        return input("weight vectors do not match the matrix shape");
    }
    if row_weights.iter().chain(col_weights).any(|w| !(*w > 0.0 && w.is_finite())) {
        return input("weights must be positive and finite");
    }
    Ok(ComplexMatrix::from_fn(a.rows(), a.cols(), |i, j| {
        a.get(i, j) * (row_weights[i] * col_weights[j]).sqrt()
    }))
}

/// Returns `X` with `‖X‖_p ≤ 1` and `Tr(X C) = ‖C‖_{p′}` (real, maximal).
///
/// With `C = U Σ V*` the partner is `X = V D U*` where `D` is the normalized
/// `(p′ − 1)`-th power of `Σ`; at `p = ∞` it is the partial isometry `V U*`
/// and at `p = 1` the top singular pair.
pub fn norming_partner(c: &ComplexMatrix, p: SchattenExponent) -> ComplexMatrix {
    let svd = super::svd::svd(c.as_dmatrix());
    let (u, v_t, sv) = (&svd.u, &svd.v_t, &svd.s);
    let rank = sv.len();
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return ComplexMatrix::unit(c.cols(), c.rows(), 0, 0);
    }
    let dual = p.conjugate();
    let weights: Vec<f64> = if p.is_infinite() {
        vec![1.0; rank]
    } else if dual.is_infinite() {
        let k = (0..rank)
            .max_by(|&i, &j| sv[i].partial_cmp(&sv[j]).unwrap())
            .unwrap();
        (0..rank).map(|i| if i == k { 1.0 } else { 0.0 }).collect()
    } else {
        let e = dual.value() - 1.0;
        let raw: Vec<f64> = sv.iter().map(|&s| (s / top).powf(e)).collect();
        let norm = norm_from_singular_values(&raw, p);
        raw.iter().map(|r| r / norm).collect()
    };
    // X = V D U* = (v_t)^* D u^*
    let mut x = DMatrix::<Complex64>::zeros(c.cols(), c.rows());
    for k in 0..rank {
        if weights[k] == 0.0 {
            continue;
        }
        let w = Complex64::new(weights[k], 0.0);
        for i in 0..c.cols() {
            let vik = v_t[(k, i)].conj() * w;
            for j in 0..c.rows() {
                x[(i, j)] += vik * u[(j, k)].conj();
            }
        }
    }
    ComplexMatrix::from_dmatrix(x).expect("finite partner")
}
