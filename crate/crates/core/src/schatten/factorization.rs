//! Factorization norm of a finite symbol.
//!
//! For a square symbol `φ`,
//!
//! ```text
//! γ₂(φ) = inf { max_i ‖f_i‖ · max_j ‖g_j‖ : φ_ij = ⟨f_i, g_j⟩ }
//!       = max { ‖diag(√p) φ diag(√q)‖_1 : p, q probability vectors }
//! ```
//!
//! and this common value is the norm of the Schur multiplier on `S^∞` (and,
//! by duality, on `S^1`). The right-hand side is a concave maximization over
//! a product of simplices. We run the fixed-point ascent
//! `p_i ← (UΣU*)_ii / Tr Σ`, `q_j ← (VΣV*)_jj / Tr Σ` where `UΣV*` is the SVD
//! of the weighted symbol. Every iterate gives a certified lower bound (the
//! dual value) and, through `X = diag(p)^{-1/2} U Σ^{1/2}`,
//! `Y = diag(q)^{-1/2} V Σ^{1/2}`, an explicit factorization `φ = X Y*`
//! whose row norms bound the norm from above. The two meet at the optimum.

use nalgebra::DMatrix;

use super::svd::{singular_values, svd};

use super::{ComplexMatrix, Symbol};
use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationOptions {
    pub max_iterations: usize,
    /// Relative gap `(upper − lower) / upper` at which the solver stops.
    pub tolerance: f64,
}

impl Default for FactorizationOptions {
    fn default() -> Self {
        FactorizationOptions {
            max_iterations: 100_000,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FactorizationReport {
    /// Best dual value: a certified lower bound.
    pub lower: f64,
    /// Best factorization cost: a certified upper bound.
    pub upper: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Dual certificate attaining `lower`.
    pub row_weights: Vec<f64>,
    pub col_weights: Vec<f64>,
    /// Factors with `φ = left · right*` attaining `upper`.
    pub left: ComplexMatrix,
    pub right: ComplexMatrix,
}

impl FactorizationReport {
    pub fn value(&self) -> f64 {
        self.upper
    }
}

/// `‖diag(√p) φ diag(√q)‖_1`, a lower bound on `γ₂(φ)` for any probability
/// vectors `p`, `q`.
pub fn dual_value(phi: &Symbol, row_weights: &[f64], col_weights: &[f64]) -> f64 {
    singular_values(&weighted(phi, row_weights, col_weights))
        .iter()
        .sum()
}

/// `max_i ‖X_i‖ · max_j ‖Y_j‖` over the rows of the two factors.
pub fn factorization_cost(left: &ComplexMatrix, right: &ComplexMatrix) -> f64 {
    max_row_norm(left) * max_row_norm(right)
}

fn max_row_norm(m: &ComplexMatrix) -> f64 {
    let d = m.as_dmatrix();
    (0..d.nrows())
        .map(|i| d.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

fn weighted(phi: &Symbol, p: &[f64], q: &[f64]) -> DMatrix<Complex64> {
    let n = phi.size();
    DMatrix::from_fn(n, n, |i, j| phi.get(i, j) * (p[i] * q[j]).sqrt())
}

pub fn factorization_norm(phi: &Symbol, opts: &FactorizationOptions) -> FactorizationReport {
    let n = phi.size();
    if phi.matrix().max_abs() == 0.0 {
        return FactorizationReport {
            lower: 0.0,
            upper: 0.0,
            iterations: 0,
            converged: true,
            row_weights: vec![1.0 / n as f64; n],
            col_weights: vec![1.0 / n as f64; n],
            left: ComplexMatrix::zeros(n, 1),
            right: ComplexMatrix::zeros(n, 1),
        };
    }
    let zero_row: Vec<bool> = (0..n)
        .map(|i| (0..n).all(|j| phi.get(i, j) == Complex64::new(0.0, 0.0)))
        .collect();
    let zero_col: Vec<bool> = (0..n)
        .map(|j| (0..n).all(|i| phi.get(i, j) == Complex64::new(0.0, 0.0)))
        .collect();

    let mut p = vec![1.0 / n as f64; n];
    let mut q = p.clone();
    let mut best = FactorizationReport {
        lower: 0.0,
        upper: f64::INFINITY,
        iterations: 0,
        converged: false,
        row_weights: p.clone(),
        col_weights: q.clone(),
        left: ComplexMatrix::zeros(n, 1),
        right: ComplexMatrix::zeros(n, 1),
    };

    for it in 1..=opts.max_iterations {
        best.iterations = it;
        let svd = svd(&weighted(phi, &p, &q));
        let (u, v_t, s) = (&svd.u, &svd.v_t, &svd.s);
        let h: f64 = s.iter().sum();
        let rank = s.len();

        let du: Vec<f64> = (0..n)
            .map(|i| (0..rank).map(|k| u[(i, k)].norm_sqr() * s[k]).sum())
            .collect();
        let dv: Vec<f64> = (0..n)
            .map(|j| (0..rank).map(|k| v_t[(k, j)].norm_sqr() * s[k]).sum())
            .collect();

        if h > best.lower {
            best.lower = h;
            best.row_weights = p.clone();
            best.col_weights = q.clone();
        }

        if let (Some(x), Some(y)) = (
            row_costs(&du, &p, &zero_row),
            row_costs(&dv, &q, &zero_col),
        ) {
            let hi = (x * y).sqrt();
            if hi < best.upper {
                best.upper = hi;
                let (left, right) = factors(u, v_t, s, &p, &q);
                best.left = left;
                best.right = right;
            }
        }

        if best.upper - best.lower <= opts.tolerance * best.upper {
            best.converged = true;
            break;
        }
        p = du.iter().map(|d| d / h).collect();
        q = dv.iter().map(|d| d / h).collect();
    }
    best
}

/// Largest squared row norm `d_i / p_i` of the factor built from weights `p`,
/// or `None` when a weight vanished on a row that still carries mass.
fn row_costs(d: &[f64], p: &[f64], zero: &[bool]) -> Option<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..d.len() {
        if p[i] > 0.0 {
            worst = worst.max(d[i] / p[i]);
        } else if !zero[i] {
            return None;
        }
    }
    Some(worst)
}

fn factors(
    u: &DMatrix<Complex64>,
    v_t: &DMatrix<Complex64>,
    s: &[f64],
    p: &[f64],
    q: &[f64],
) -> (ComplexMatrix, ComplexMatrix) {
    let n = u.nrows();
    let rank = s.len();
    let scale = |w: f64| if w > 0.0 { 1.0 / w.sqrt() } else { 0.0 };
    let left = ComplexMatrix::from_fn(n, rank, |i, k| u[(i, k)] * (s[k].sqrt() * scale(p[i])));
    let right = ComplexMatrix::from_fn(n, rank, |j, k| {
        v_t[(k, j)].conj() * (s[k].sqrt() * scale(q[j]))
    });
    (left, right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schatten::random::random_symbol;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sym(n: usize, vals: &[f64]) -> Symbol {
        Symbol::new(ComplexMatrix::from_row_major(
            n,
            n,
            vals.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
        .unwrap())
        .unwrap()
    }

    #[test]
    fn all_ones_has_norm_one() {
        let r = factorization_norm(&Symbol::ones(5), &FactorizationOptions::default());
        assert!(r.converged);
        assert!((r.upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hadamard_two_by_two() {
        let r = factorization_norm(&sym(2, &[1.0, 1.0, 1.0, -1.0]), &FactorizationOptions::default());
        assert!((r.upper - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn zero_rows_are_supported() {
        let r = factorization_norm(
            &sym(3, &[1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.5, -1.0, 0.0]),
            &FactorizationOptions::default(),
        );
        assert!(r.converged, "{r:?}");
        assert_eq!(factorization_norm(&sym(2, &[0.0; 4]), &Default::default()).upper, 0.0);
    }

    #[test]
    fn certificates_are_self_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [2, 3, 5, 8] {
            let phi = random_symbol(&mut rng, n);
            let r = factorization_norm(&phi, &FactorizationOptions::default());
            assert!(r.converged);
            // the factors reproduce the symbol
            let recon = r.left.matmul(&r.right.adjoint()).unwrap();
            assert!(recon.max_abs_diff(phi.matrix()) < 1e-10);
            assert!((factorization_cost(&r.left, &r.right) - r.upper).abs() < 1e-9 * r.upper);
            let d = dual_value(&phi, &r.row_weights, &r.col_weights);
            assert!((d - r.lower).abs() < 1e-9 * r.lower);
            assert!(r.lower <= r.upper * (1.0 + 1e-12));
            assert!(r.upper >= phi.matrix().max_abs() * (1.0 - 1e-9));
            assert!(r.left.cols() <= 2 * n);
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let phi = random_symbol(&mut rng, 6);
        let r = factorization_norm(
            &phi,
            &FactorizationOptions {
                max_iterations: 1,
                tolerance: 1e-15,
            },
        );
        assert!(!r.converged);
        assert!(r.lower <= r.upper);
    }
}
