//! Certified lower bounds for the multiplier norm on `S^p`.
//!
//! `‖M_φ‖_{S^p→S^p} = sup |Tr(M_φ(A) B)|` over `‖A‖_p ≤ 1`, `‖B‖_{p′} ≤ 1`.
//! Fixing `B`, the best `A` is the norming partner of `M_{φᵀ}(B)`; fixing `A`,
//! the best `B` is the norming partner of `M_φ(A)`. Alternating the two steps
//! never decreases the pairing, and every iterate is a witness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::factorization::{factorization_norm, FactorizationOptions};
use super::multiplier::schur_apply;
use super::norm::{norming_partner, schatten_norm, trace_pairing};
use super::random::random_matrix;
use super::{ComplexMatrix, SchattenExponent, Symbol};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBoundBudget {
    pub restarts: usize,
    pub iterations: usize,
}

impl Default for LowerBoundBudget {
    fn default() -> Self {
        LowerBoundBudget {
            restarts: 8,
            iterations: 2000,
        }
    }
}

/// A pair `(A, B)` with `‖A‖_p ≤ 1`, `‖B‖_{p′} ≤ 1` and
/// `value = |Tr(M_φ(A) B)|`.
#[derive(Debug, Clone)]
pub struct NormWitness {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub value: f64,
    pub p: SchattenExponent,
}

impl NormWitness {
    /// Recomputes `|Tr(M_φ(A)B)| / (‖A‖_p ‖B‖_{p′})` from scratch.
    pub fn evaluate(&self, phi: &Symbol) -> Result<f64> {
        let pairing = trace_pairing(&schur_apply(phi, &self.a)?, &self.b)?.norm();
        let na = schatten_norm(&self.a, self.p);
        let nb = schatten_norm(&self.b, self.p.conjugate());
        Ok(pairing / (na * nb))
    }

    /// Carries the witness to the symbol `φ^{σ,σ′}` with entries
    /// `φ(row_perm[i], col_perm[j])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<NormWitness> {
        // A' = P A Q^T so that M_{φ'}(A') = P M_φ(A) Q^T, and B' = Q B P^T
        Ok(NormWitness {
            a: self.a.permuted(row_perm, col_perm)?,
            b: self.b.permuted(col_perm, row_perm)?,
            value: self.value,
            p: self.p,
        })
    }
}

#[derive(Debug, Clone)]
pub struct AlternationRun {
    pub witness: NormWitness,
    /// Pairing value after each iteration; non-decreasing up to rounding.
    pub history: Vec<f64>,
}

/// Runs the alternation from `start` for at most `iterations` rounds.
pub fn alternate(
    phi: &Symbol,
    p: SchattenExponent,
    start: &ComplexMatrix,
    iterations: usize,
) -> Result<AlternationRun> {
    let phi_t = phi.transpose();
    let dual = p.conjugate();
    let mut a = normalized(start, p);
    let mut history = Vec::new();
    let mut best: Option<NormWitness> = None;
    for _ in 0..iterations.max(1) {
        let image = schur_apply(phi, &a)?;
        let b = norming_partner(&image, dual);
        let value = trace_pairing(&image, &b)?.norm();
        let improved = best.as_ref().is_none_or(|w| value > w.value);
        let stalled = best
            .as_ref()
            .is_some_and(|w| value <= w.value * (1.0 + 1e-13));
        history.push(value);
        if improved {
            best = Some(NormWitness {
                a: a.clone(),
                b: b.clone(),
                value,
                p,
            });
        }
        if stalled {
            break;
        }
        let c = schur_apply(&phi_t, &b)?;
        if c.max_abs() == 0.0 {
            break;
        }
        a = normalized(&norming_partner(&c, p), p);
    }
    Ok(AlternationRun {
        witness: best.expect("at least one iteration"),
        history,
    })
}

fn normalized(a: &ComplexMatrix, p: SchattenExponent) -> ComplexMatrix {
    let n = schatten_norm(a, p);
    if n == 0.0 {
        ComplexMatrix::unit(a.rows(), a.cols(), 0, 0)
    } else {
        a.scale((1.0 / n).into())
    }
}

/// Lower bound with its witness, see [`multiplier_norm_lower_from`].
pub fn multiplier_norm_lower(
    phi: &Symbol,
    p: SchattenExponent,
    budget: &LowerBoundBudget,
    seed: u64,
) -> Result<(f64, NormWitness)> {
    let w = multiplier_norm_lower_from(phi, p, &[], budget, seed)?;
    Ok((w.value, w))
}

/// Best witness over a deterministic family of starting points:
/// the matrix unit at the largest entry of `φ`, the normalized all-ones
/// matrix, any caller-supplied starts, then `budget.restarts` random starts.
///
/// Random start `k` draws from ChaCha8 seeded with `seed` on stream `k + 1`,
/// so the result is independent of how the starts are scheduled.
pub fn multiplier_norm_lower_from(
    phi: &Symbol,
    p: SchattenExponent,
    extra_starts: &[ComplexMatrix],
    budget: &LowerBoundBudget,
    seed: u64,
) -> Result<NormWitness> {
    let n = phi.size();
    let (bi, bj) = argmax_entry(phi);
    let mut starts = vec![ComplexMatrix::unit(n, n, bi, bj), ComplexMatrix::ones(n, n)];
    starts.extend(extra_starts.iter().cloned());
    for k in 0..budget.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64 + 1);
        starts.push(random_matrix(&mut rng, n, n));
    }
    let runs: Vec<AlternationRun> = starts
        .par_iter()
        .map(|s| alternate(phi, p, s, budget.iterations))
        .collect::<Result<_>>()?;
    let mut best: Option<NormWitness> = None;
    for run in runs {
        // ties within rounding go to the earlier start
        if best.as_ref().is_none_or(|b| run.witness.value > b.value * (1.0 + 1e-12)) {
            best = Some(run.witness);
        }
    }
    Ok(best.expect("at least two starts"))
}

fn argmax_entry(phi: &Symbol) -> (usize, usize) {
    let n = phi.size();
    let mut best = (0, 0);
    let mut top = -1.0;
    for i in 0..n {
        for j in 0..n {
            let v = phi.get(i, j).norm();
            if v > top {
                top = v;
                best = (i, j);
            }
        }
    }
    best
}

/// Two-sided bounds on `‖M_φ‖_{S^p}` at any `p`: the alternating lower bound
/// and, as upper bound, the exact value at `p = 2` or the factorization norm
/// otherwise (the multiplier norm is monotone in `p` between 2 and ∞ and
/// symmetric under `p ↔ p′`).
#[derive(Debug, Clone)]
pub struct Sandwich {
    pub lower: f64,
    pub upper: f64,
    pub witness: NormWitness,
}

pub fn multiplier_norm_sandwich(
    phi: &Symbol,
    p: SchattenExponent,
    budget: &LowerBoundBudget,
    seed: u64,
) -> Result<Sandwich> {
    let witness = multiplier_norm_lower_from(phi, p, &[], budget, seed)?;
    let upper = if p == SchattenExponent::TWO {
        phi.matrix().max_abs()
    } else {
        factorization_norm(phi, &FactorizationOptions::default()).upper
    };
    Ok(Sandwich {
        lower: witness.value,
        upper,
        witness,
    })
}
