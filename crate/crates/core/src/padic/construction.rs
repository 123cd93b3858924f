//! Upper-triangular maps `α, β : (ℤ/q^m)^{n+1} → SL_{r+1}(ℚ_q)` whose
//! products land in `K D(λ) K` or `K D(λ + e_i) K` depending on
//! `w = σ(y) − (Σ σ(a_k)σ(x_k) + σ(b))` modulo `q^m`.

use super::{e_power, Polygon, QMatrix, QRational};
use crate::error::{input, Result};
use crate::residue::ResidueRing;

/// How an increment `λ → λ + e_i` is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IncrementRule {
    /// Block construction at vertex `i`; needs `r − i ≥ n`, governed by the
    /// break at `i + 1`.
    Direct,
    /// The direct construction on the reversed polygon, carried back by
    /// `θ(A) = J (A^{−1})^t J`; needs `i − 1 ≥ n`, governed by the break at
    /// `i − 1`.
    Reflected,
}

impl IncrementRule {
    pub fn name(self) -> &'static str {
        match self {
            IncrementRule::Direct => "direct",
            IncrementRule::Reflected => "reflected",
        }
    }

    /// Governing break for `(λ, i)` under this rule, or why the rule does
    /// not apply.
    pub fn governing_break(self, lambda: &Polygon, i: usize, n: usize) -> std::result::Result<i64, String> {
        let r = lambda.r();
        if n == 0 {
            return Err("n must be positive".into());
        }
        if i == 0 || i > r {
            return Err(format!("vertex {i} is outside 1..{r}"));
        }
        if !lambda.in_lambda() {
            return Err(format!("{lambda} is not in Λ"));
        }
        if !lambda.incremented(i).in_lambda() {
            return Err(format!("{} is not in Λ", lambda.incremented(i)));
        }
        let m = match self {
            IncrementRule::Direct => {
                if r < i + n {
                    return Err(format!("direct rule needs r − i ≥ n, got r = {r}, i = {i}, n = {n}"));
                }
                lambda.break_at(i + 1)
            }
            IncrementRule::Reflected => {
                if i < n + 1 {
                    return Err(format!("reflected rule needs i − 1 ≥ n, got i = {i}, n = {n}"));
                }
                lambda.break_at(i - 1)
            }
        };
        if m < 1 {
            return Err(format!("governing break {m} is not positive"));
        }
        Ok(m)
    }
}

impl std::fmt::Display for IncrementRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `(a_1..a_n, b, x_1..x_n, y)` with entries in `[0, q^m)`, which is also the
/// section `σ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstructionTuple {
    pub a: Vec<u64>,
    pub b: u64,
    pub x: Vec<u64>,
    pub y: u64,
}

impl ConstructionTuple {
    pub fn zero(n: usize) -> Self {
        ConstructionTuple {
            a: vec![0; n],
            b: 0,
            x: vec![0; n],
            y: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstructionCase {
    /// `w ≡ 0`: the product lies in `K D(λ) K`.
    Unchanged,
    /// `w ≡ q^{m−1}`: the product lies in `K D(λ + e_i) K`.
    Incremented,
}

/// Classifies `w` modulo `q^m`.
pub fn construction_case(w: u64, ring: &ResidueRing) -> Option<ConstructionCase> {
    if w == 0 {
        Some(ConstructionCase::Unchanged)
    } else if w == ring.power_of_q(ring.m() - 1) {
        Some(ConstructionCase::Incremented)
    } else {
        None
    }
}

#[derive(Debug, Clone)]
pub struct AlphaBeta {
    pub alpha: QMatrix,
    pub beta: QMatrix,
    pub w: u64,
    /// The governing break, also the exponent of the residue ring.
    pub m: i64,
    pub rule: IncrementRule,
    pub case: Option<ConstructionCase>,
    /// Invariants the product must have when `case` is known.
    pub expected: Option<Polygon>,
}

impl AlphaBeta {
    pub fn product(&self) -> QMatrix {
        self.alpha.mul(&self.beta).expect("same shape")
    }
}

fn validate_tuple(t: &ConstructionTuple, n: usize, ring: &ResidueRing) -> Result<()> {
    if t.a.len() != n || t.x.len() != n {
        return input(format!("tuple needs {n} a's and {n} x's"));
    }
    let bound = ring.modulus();
    if t.a.iter().chain(&t.x).chain([&t.b, &t.y]).any(|&v| v >= bound) {
        return input(format!("tuple entries must lie in [0, {bound})"));
    }
    Ok(())
}

fn ring_for(q: u64, m: i64) -> Result<ResidueRing> {
    let m = u32::try_from(m).map_err(|_| crate::Error::Input(format!("break {m} out of range")))?;
    ResidueRing::new(q, m)
}

/// `w = σ(y) − (Σ σ(a_k)σ(x_k) + σ(b))` reduced modulo `q^m`.
pub(crate) fn residue_w(t: &ConstructionTuple, ring: &ResidueRing) -> u64 {
    let dot: i128 = t.a.iter().zip(&t.x).map(|(&a, &x)| a as i128 * x as i128).sum();
    ring.reduce(t.y as i128 - dot - t.b as i128)
}

/// The direct construction at vertex `i` (1-based).
pub fn build_alpha_beta(
    lambda: &Polygon,
    i: usize,
    n: usize,
    q: u64,
    tuple: &ConstructionTuple,
) -> Result<AlphaBeta> {
    let m = IncrementRule::Direct
        .governing_break(lambda, i, n)
        .or_else(|e| input(e))?;
    let ring = ring_for(q, m)?;
    validate_tuple(tuple, n, &ring)?;
    let (alpha, beta) = direct_matrices(lambda, i, n, q, m, tuple)?;
    let w = residue_w(tuple, &ring);
    let case = construction_case(w, &ring);
    let expected = case.map(|c| match c {
        ConstructionCase::Unchanged => lambda.clone(),
        ConstructionCase::Incremented => lambda.incremented(i),
    });
    Ok(AlphaBeta {
        alpha,
        beta,
        w,
        m,
        rule: IncrementRule::Direct,
        case,
        expected,
    })
}

fn direct_matrices(
    lambda: &Polygon,
    i: usize,
    n: usize,
    q: u64,
    m: i64,
    t: &ConstructionTuple,
) -> Result<(QMatrix, QMatrix)> {
    let size = lambda.r() + 1;
    let mu = |k: usize| lambda.slope(k);
    let e = |k: i64| e_power(q, k);
    let sigma = |v: u64| QRational::from_integer(v.into());
    // the block occupies rows and columns i..i+n+1 (1-based)
    let s = i - 1;
    let mut alpha = QMatrix::diagonal(q, (1..=size).map(|k| e(mu(k))).collect())?;
    alpha.set(s, s, e(mu(i)));
    for k in 1..=n {
        alpha.set(s + k, s + k, e(mu(i + k + 1)));
        alpha.set(s, s + k, -(e(mu(i)) * sigma(t.a[k - 1])));
    }
    alpha.set(s + n + 1, s + n + 1, e(mu(i + 1)));
    alpha.set(s, s + n + 1, -(e(mu(i) + mu(i + 1) - mu(i + 2)) * sigma(t.b)));

    let mut beta = QMatrix::identity(q, size)?;
    beta.set(s, s + n + 1, e(m) * sigma(t.y));
    for k in 1..=n {
        beta.set(s + k, s + n + 1, e(m) * sigma(t.x[k - 1]));
    }
    Ok((alpha, beta))
}

/// `θ(A) = J (A^{−1})^t J` with `J` the antidiagonal permutation. It maps
/// `D(λ_1..λ_r)` to `D(λ_r..λ_1)` and preserves `K` and the upper-triangular
/// subgroup.
pub fn theta(a: &QMatrix) -> Result<QMatrix> {
    let inv_t = a.inverse()?.transpose();
    let n = a.dim();
    QMatrix::from_fn(a.q(), n, |i, j| inv_t.get(n - 1 - i, n - 1 - j).clone())
}

/// The reflected construction at vertex `i`: the direct one at `r + 1 − i`
/// on the reversed polygon, carried back by `θ`.
pub fn build_alpha_beta_reflected(
    lambda: &Polygon,
    i: usize,
    n: usize,
    q: u64,
    tuple: &ConstructionTuple,
) -> Result<AlphaBeta> {
    let m = IncrementRule::Reflected
        .governing_break(lambda, i, n)
        .or_else(|e| input(e))?;
    let reversed = lambda.reversed();
    let inner = build_alpha_beta(&reversed, lambda.r() + 1 - i, n, q, tuple)?;
    debug_assert_eq!(inner.m, m);
    let expected = inner.case.map(|c| match c {
        ConstructionCase::Unchanged => lambda.clone(),
        ConstructionCase::Incremented => lambda.incremented(i),
    });
    Ok(AlphaBeta {
        alpha: theta(&inner.alpha)?,
        beta: theta(&inner.beta)?,
        w: inner.w,
        m,
        rule: IncrementRule::Reflected,
        case: inner.case,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{cartan_invariants, cartan_invariants_modular};
    use num_traits::{One, Zero};

    fn poly(v: &[i64]) -> Polygon {
        Polygon::new(v.to_vec()).unwrap()
    }

    #[test]
    fn zero_tuple_is_case_one() {
        let lambda = poly(&[2, 2, 1]);
        let t = ConstructionTuple::zero(1);
        assert_eq!(t, ConstructionTuple { a: vec![0], b: 0, x: vec![0], y: 0 });
        let ab = build_alpha_beta(&lambda, 1, 1, 2, &t).unwrap();
        assert_eq!(ab.w, 0);
        assert_eq!(ab.case, Some(ConstructionCase::Unchanged));
        assert_eq!(cartan_invariants(&ab.product()).unwrap(), lambda);
    }

    #[test]
    fn top_power_is_case_two() {
        let lambda = poly(&[4, 4, 2]);
        let ab0 = build_alpha_beta(&lambda, 1, 1, 3, &ConstructionTuple::zero(1)).unwrap();
        assert_eq!(ab0.m, 2);
        let t = ConstructionTuple {
            y: 3,
            ..ConstructionTuple::zero(1)
        };
        let ab = build_alpha_beta(&lambda, 1, 1, 3, &t).unwrap();
        assert_eq!(ab.w, 3);
        assert_eq!(ab.case, Some(ConstructionCase::Incremented));
        assert_eq!(cartan_invariants(&ab.product()).unwrap(), lambda.incremented(1));
    }

    #[test]
    fn determinants_are_one() {
        let lambda = poly(&[3, 4, 4, 2]);
        let t = ConstructionTuple {
            a: vec![1, 0],
            b: 1,
            x: vec![0, 1],
            y: 1,
        };
        let ab = build_alpha_beta(&lambda, 1, 2, 2, &t).unwrap();
        assert!(ab.alpha.det().is_one());
        assert!(ab.beta.det().is_one());
    }

    #[test]
    fn beta_is_unitriangular() {
        let lambda = poly(&[2, 2, 1]);
        let t = ConstructionTuple { a: vec![1], b: 0, x: vec![1], y: 1 };
        let ab = build_alpha_beta(&lambda, 1, 1, 2, &t).unwrap();
        let n = ab.beta.dim();
        for i in 0..n {
            assert!(ab.beta.get(i, i).is_one());
            for j in 0..i {
                assert!(ab.beta.get(i, j).is_zero());
                assert!(ab.alpha.get(i, j).is_zero());
            }
        }
    }

    #[test]
    fn preconditions_are_enforced() {
        // zero break at i+1, so λ + e_i leaves Λ
        assert!(build_alpha_beta(&poly(&[2, 2, 2]), 1, 1, 2, &ConstructionTuple::zero(1)).is_err());
        // block does not fit
        assert!(build_alpha_beta(&poly(&[2, 2, 1]), 3, 1, 2, &ConstructionTuple::zero(1)).is_err());
        // tuple entry out of range
        let t = ConstructionTuple { y: 2, ..ConstructionTuple::zero(1) };
        assert!(build_alpha_beta(&poly(&[2, 2, 1]), 1, 1, 2, &t).is_err());
    }

    #[test]
    fn theta_reverses_diagonal_invariants() {
        let lambda = poly(&[3, 5, 4, 2]);
        let d = crate::padic::build_d(&lambda, 3).unwrap();
        let t = theta(&d).unwrap();
        assert_eq!(t, crate::padic::build_d(&lambda.reversed(), 3).unwrap());
        assert_eq!(theta(&t).unwrap(), d);
    }

    #[test]
    fn reflected_cases() {
        let lambda = poly(&[1, 2, 2]);
        assert!(build_alpha_beta_reflected(&lambda, 1, 1, 2, &ConstructionTuple::zero(1)).is_err());
        let t = ConstructionTuple { y: 1, ..ConstructionTuple::zero(1) };
        let ab = build_alpha_beta_reflected(&lambda, 3, 1, 2, &t).unwrap();
        assert_eq!(ab.m, 1);
        assert_eq!(ab.case, Some(ConstructionCase::Incremented));
        let g = ab.product();
        assert_eq!(cartan_invariants(&g).unwrap(), lambda.incremented(3));
        assert_eq!(cartan_invariants_modular(&g).unwrap(), lambda.incremented(3));
        let ab = build_alpha_beta_reflected(&lambda, 3, 1, 2, &ConstructionTuple::zero(1)).unwrap();
        assert_eq!(cartan_invariants(&ab.product()).unwrap(), lambda);
    }

    #[test]
    fn exhaustive_small_ring() {
        let lambda = poly(&[4, 4, 2]);
        let q = 2;
        let ring = ResidueRing::new(q, 2).unwrap();
        for a in ring.elements() {
            for b in ring.elements() {
                for x in ring.elements() {
                    for y in ring.elements() {
                        let t = ConstructionTuple { a: vec![a], b, x: vec![x], y };
                        let ab = build_alpha_beta(&lambda, 1, 1, q, &t).unwrap();
                        let got = cartan_invariants_modular(&ab.product()).unwrap();
                        if let Some(expected) = &ab.expected {
                            assert_eq!(&got, expected, "tuple {t:?}");
                        }
                    }
                }
            }
        }
    }
}
