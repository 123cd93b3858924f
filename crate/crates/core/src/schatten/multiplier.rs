use super::factorization::{factorization_norm, FactorizationOptions};
use super::{ComplexMatrix, Partition, SchattenExponent, Symbol};
use crate::error::{input, Error, Result};
use crate::Complex64;

/// Entrywise product `(φ_ij A_ij)`.
pub fn schur_apply(phi: &Symbol, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.rows() != phi.size() || a.cols() != phi.size() {
        return input(format!(
            "symbol is {0}x{0} but the matrix is {1}x{2}",
            phi.size(),
            a.rows(),
            a.cols()
        ));
    }
    ComplexMatrix::from_dmatrix(phi.matrix().as_dmatrix().component_mul(a.as_dmatrix()))
}

/// Exact multiplier norm for `p ∈ {1, 2, ∞}`.
///
/// At `p = 2` the multiplier norm is the sup-norm of the symbol. At `p = 1`
/// and `p = ∞` it is the factorization norm, computed by
/// [`factorization_norm`] with the default options; failure to close the gap
/// within the budget is reported as [`Error::NotConverged`].
pub fn multiplier_norm_exact(phi: &Symbol, p: SchattenExponent) -> Result<f64> {
    multiplier_norm_exact_with(phi, p, &FactorizationOptions::default())
}

pub fn multiplier_norm_exact_with(
    phi: &Symbol,
    p: SchattenExponent,
    opts: &FactorizationOptions,
) -> Result<f64> {
    if p == SchattenExponent::TWO {
        return Ok(phi.matrix().max_abs());
    }
    if p == SchattenExponent::ONE || p.is_infinite() {
        let report = factorization_norm(phi, opts);
        if !report.converged {
            return Err(Error::NotConverged {
                lower: report.lower,
                upper: report.upper,
                iterations: report.iterations,
            });
        }
        return Ok(report.upper);
    }
    input(format!(
        "no exact multiplier norm is available at p = {p}; use the sandwich bounds"
    ))
}

/// Amplified symbol `φ̃((x,i),(y,j)) = φ(x,y)` on `m·n` indices, the pair
/// `(x, i)` stored at position `x·n + i`.
pub fn amplify_symbol(phi: &Symbol, n: usize) -> Result<Symbol> {
    if n == 0 {
        return input("amplification order must be positive");
    }
    let m = phi.size();
    Symbol::new(ComplexMatrix::from_fn(m * n, m * n, |r, c| {
        phi.get(r / n, c / n)
    }))
}

/// Places an `m×m` matrix on the `(x,0),(y,0)` entries of an `mn×mn` matrix,
/// so that `M_φ̃(embed(A)) = embed(M_φ(A))`.
pub fn embed_in_amplified(a: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    if n == 0 || !a.is_square() {
        return input("embedding needs a square matrix and a positive order");
    }
    let m = a.rows();
    Ok(ComplexMatrix::from_fn(m * n, m * n, |r, c| {
        if r % n == 0 && c % n == 0 {
            a.get(r / n, c / n)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Conditional expectation of `φ` onto block-constant symbols: each entry is
/// the weighted mean of `φ` over `block(i) × block(j)`.
pub fn block_average(phi: &Symbol, partition: &Partition) -> Result<Symbol> {
    let n = phi.size();
    if partition.len() != n {
        return input(format!(
            "partition covers {} indices, symbol has {n}",
            partition.len()
        ));
    }
    let k = partition.block_count();
    let mut sums = vec![Complex64::new(0.0, 0.0); k * k];
    let mut mass = vec![0.0; k];
    for x in 0..n {
        mass[partition.block_of(x)] += partition.weight(x);
    }
    for x in 0..n {
        for y in 0..n {
            let w = partition.weight(x) * partition.weight(y);
            sums[partition.block_of(x) * k + partition.block_of(y)] += phi.get(x, y) * w;
        }
    }
    Symbol::new(ComplexMatrix::from_fn(n, n, |i, j| {
        let (bi, bj) = (partition.block_of(i), partition.block_of(j));
        sums[bi * k + bj] / (mass[bi] * mass[bj])
    }))
}

/// Samples a function on a group along two index maps:
/// the result has entry `(i, j)` equal to `f(rows[i] · cols[j])`.
///
/// Row and column elements must be pairwise distinct (the index maps are
/// injective). Any `A` then satisfies
/// `‖(f(rows[i]·cols[j]) A_ij)‖_p ≤ ‖f̌‖_{MS^p} ‖A‖_p`.
pub fn sample_symbol<G, F, M>(f: F, rows: &[G], cols: &[G], mult: M) -> Result<Symbol>
where
    G: PartialEq,
    F: Fn(&G) -> Option<Complex64>,
    M: Fn(&G, &G) -> G,
{
    if rows.is_empty() || rows.len() != cols.len() {
        return input(format!(
            "need equally many (and at least one) row and column elements, got {} and {}",
            rows.len(),
            cols.len()
        ));
    }
    if !pairwise_distinct(rows) || !pairwise_distinct(cols) {
        return input("row and column elements must be pairwise distinct");
    }
    let n = rows.len();
    let mut entries = Vec::with_capacity(n * n);
    for (i, g) in rows.iter().enumerate() {
        for (j, h) in cols.iter().enumerate() {
            let value = f(&mult(g, h)).ok_or_else(|| {
                Error::Input(format!("function undefined on the product at ({i}, {j})"))
            })?;
            entries.push(value);
        }
    }
    Symbol::new(ComplexMatrix::from_row_major(n, n, entries)?)
}

fn pairwise_distinct<G: PartialEq>(xs: &[G]) -> bool {
    xs.iter()
        .enumerate()
        .all(|(i, a)| xs[i + 1..].iter().all(|b| a != b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schatten::random::random_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn schur_with_ones_and_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_matrix(&mut rng, 3, 3);
        assert_eq!(schur_apply(&Symbol::ones(3), &a).unwrap(), a);
        let zero = Symbol::new(ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(schur_apply(&zero, &a).unwrap(), ComplexMatrix::zeros(3, 3));
        assert!(schur_apply(&zero, &random_matrix(&mut rng, 2, 3)).is_err());
    }

    #[test]
    fn rank_one_symbol_is_diagonal_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = random_matrix(&mut rng, 4, 1);
        let g = random_matrix(&mut rng, 4, 1);
        let a = random_matrix(&mut rng, 4, 4);
        let phi = Symbol::new(ComplexMatrix::from_fn(4, 4, |i, j| f.get(i, 0) * g.get(j, 0))).unwrap();
        let df = ComplexMatrix::from_fn(4, 4, |i, j| if i == j { f.get(i, 0) } else { c(0.0) });
        let dg = ComplexMatrix::from_fn(4, 4, |i, j| if i == j { g.get(i, 0) } else { c(0.0) });
        let expected = df.matmul(&a).unwrap().matmul(&dg).unwrap();
        let got = schur_apply(&phi, &a).unwrap();
        assert!(got.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn p2_norm_is_max_modulus() {
        let phi = Symbol::new(
            ComplexMatrix::from_row_major(2, 2, vec![c(1.0), c(2.0), c(3.0), c(-1.0)]).unwrap(),
        )
        .unwrap();
        assert_eq!(multiplier_norm_exact(&phi, SchattenExponent::TWO).unwrap(), 3.0);
        let p3 = SchattenExponent::new(3.0).unwrap();
        assert!(multiplier_norm_exact(&phi, p3).is_err());
    }

    #[test]
    fn amplification_basics() {
        let phi = Symbol::new(
            ComplexMatrix::from_row_major(2, 2, vec![c(1.0), c(1.0), c(1.0), c(-1.0)]).unwrap(),
        )
        .unwrap();
        assert_eq!(amplify_symbol(&phi, 1).unwrap(), phi);
        assert_eq!(amplify_symbol(&Symbol::ones(3), 4).unwrap(), Symbol::ones(12));
        assert!(amplify_symbol(&phi, 0).is_err());
        let amp = amplify_symbol(&phi, 3).unwrap();
        assert_eq!(amp.size(), 6);
        assert_eq!(amp.get(4, 5), c(-1.0));
        assert_eq!(amp.get(2, 3), c(1.0));
    }

    #[test]
    fn amplified_witness_transports() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let phi = Symbol::new(random_matrix(&mut rng, 3, 3)).unwrap();
        let a = random_matrix(&mut rng, 3, 3);
        let amp = amplify_symbol(&phi, 2).unwrap();
        let lhs = schur_apply(&amp, &embed_in_amplified(&a, 2).unwrap()).unwrap();
        let rhs = embed_in_amplified(&schur_apply(&phi, &a).unwrap(), 2).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
    }

    #[test]
    fn block_average_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let phi = Symbol::new(random_matrix(&mut rng, 4, 4)).unwrap();
        let singletons = Partition::uniform(vec![0, 1, 2, 3]).unwrap();
        let same = block_average(&phi, &singletons).unwrap();
        assert!(same.matrix().max_abs_diff(phi.matrix()) < 1e-15);

        let one = Partition::uniform(vec![0; 4]).unwrap();
        let avg = block_average(&phi, &one).unwrap();
        let mean: Complex64 = phi.matrix().row_major().iter().sum::<Complex64>() / 16.0;
        for z in avg.matrix().row_major() {
            assert!((z - mean).norm() < 1e-14);
        }

        let wrong = Partition::uniform(vec![0, 1, 0]).unwrap();
        assert!(block_average(&phi, &wrong).is_err());
    }

    #[test]
    fn block_average_is_idempotent_and_weighted() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let phi = Symbol::new(random_matrix(&mut rng, 5, 5)).unwrap();
        let part = Partition::new(vec![0, 1, 0, 2, 1], vec![0.5, 1.0, 2.0, 1.0, 3.0]).unwrap();
        let once = block_average(&phi, &part).unwrap();
        let twice = block_average(&once, &part).unwrap();
        assert!(once.matrix().max_abs_diff(twice.matrix()) < 1e-14);
        // block (0,0): indices {0, 2} with weights 0.5 and 2
        let w = [0.5, 2.0];
        let idx = [0, 2];
        let mut s = Complex64::new(0.0, 0.0);
        for (a, &x) in idx.iter().enumerate() {
            for (b, &y) in idx.iter().enumerate() {
                s += phi.get(x, y) * w[a] * w[b];
            }
        }
        assert!((once.get(2, 0) - s / 6.25).norm() < 1e-14);
    }

    #[test]
    fn sampled_indicator_on_integers() {
        // rows carry the negatives so that ones sit where row + col = 0
        let rows = [0i64, -1, -2];
        let cols = [0i64, 1, 2];
        let f = |g: &i64| Some(c(if *g == 0 { 1.0 } else { 0.0 }));
        let s = sample_symbol(f, &rows, &cols, |a, b| a + b).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s.get(i, j), c(if i == j { 1.0 } else { 0.0 }));
            }
        }
    }

    #[test]
    fn sampled_constant_and_errors() {
        let k = Complex64::new(0.5, -2.0);
        let s = sample_symbol(|_: &i64| Some(k), &[1, 2], &[3, 4], |a, b| a * b).unwrap();
        assert!(s.matrix().row_major().iter().all(|z| *z == k));
        assert!(sample_symbol(|_: &i64| Some(k), &[1, 1], &[3, 4], |a, b| a * b).is_err());
        let partial = |g: &i64| if *g < 5 { Some(k) } else { None };
        assert!(sample_symbol(partial, &[1, 2], &[3, 4], |a, b| a + b).is_err());
    }

    #[test]
    fn sampled_character_on_cyclic_group() {
        let f = |k: &u32| {
            let t = 2.0 * std::f64::consts::PI * (*k as f64) / 4.0;
            Some(Complex64::new(t.cos(), t.sin()))
        };
        let elems = [0u32, 1, 2, 3];
        let s = sample_symbol(f, &elems, &elems, |a, b| (a + b) % 4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let t = 2.0 * std::f64::consts::PI * (((i + j) % 4) as f64) / 4.0;
                let direct = Complex64::new(t.cos(), t.sin());
                assert!((s.get(i, j) - direct).norm() < 1e-15);
            }
        }
    }
}
