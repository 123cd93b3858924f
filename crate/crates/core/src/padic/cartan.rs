//! Cartan invariants: `A ∈ K D(λ) K` with `λ_i = −min v_q(i×i minors of A)`.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;

use super::matrix::bareiss_det;
use super::{e_power, valuation, valuation_int, Polygon, QMatrix, QRational, Valuation};
use crate::error::{input, Error, Result};

/// Largest matrix size accepted by the minor enumeration.
pub const MAX_MINOR_DIMENSION: usize = 10;

/// `D(λ) = diag(e^{μ_1}, …, e^{μ_{r+1}})` with `e = 1/q`.
pub fn build_d(lambda: &Polygon, q: u64) -> Result<QMatrix> {
    if !lambda.in_lambda() {
        return input(format!("{lambda} is not in Λ"));
    }
    QMatrix::diagonal(q, lambda.slopes().into_iter().map(|mu| e_power(q, mu)).collect())
}

/// Cartan invariants from the valuations of all minors.
pub fn cartan_invariants(a: &QMatrix) -> Result<Polygon> {
    let n = a.dim();
    if n < 2 {
        return input("need a matrix of size at least 2");
    }
    if n > MAX_MINOR_DIMENSION {
        return input(format!("size {n} exceeds the minor enumeration cap {MAX_MINOR_DIMENSION}"));
    }
    if !a.is_special_linear() {
        return input("determinant is not 1");
    }
    let q = a.q();
    let (m, l) = a.scaled_integer();
    let vl = valuation_int(&l, q).finite().expect("nonzero denominator");
    let lambda = (1..n)
        .map(|i| {
            let min = min_minor_valuation(&m, n, i, q);
            match min {
                Valuation::Finite(v) => Ok(-(v - i as i64 * vl)),
                Valuation::Infinite => Err(Error::Internal(format!("all {i}×{i} minors vanish"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    checked_polygon(lambda)
}

fn min_minor_valuation(m: &[BigInt], n: usize, size: usize, q: u64) -> Valuation {
    let subsets: Vec<Vec<usize>> = (0..n).combinations(size).collect();
    subsets
        .par_iter()
        .map(|rows| {
            subsets
                .iter()
                .map(|cols| {
                    let sub = rows
                        .iter()
                        .flat_map(|&r| cols.iter().map(move |&c| m[r * n + c].clone()))
                        .collect();
                    valuation_int(&bareiss_det(sub, size), q)
                })
                .min()
                .expect("nonempty")
        })
        .min()
        .expect("nonempty")
}

fn checked_polygon(lambda: Vec<i64>) -> Result<Polygon> {
    let p = Polygon::new(lambda)?;
    if !p.in_lambda() {
        return Err(Error::Internal(format!("recovered invariants {p} are not in Λ")));
    }
    Ok(p)
}

/// Valuations `d_1 ≤ … ≤ d_n` of the elementary divisors of `A` over `ℤ_q`,
/// by elimination with a pivot of least valuation at each step.
pub fn elementary_divisor_valuations(a: &QMatrix) -> Result<Vec<i64>> {
    let n = a.dim();
    let q = a.q();
    let mut m: Vec<Vec<QRational>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j).clone()).collect()).collect();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut best: Option<(Valuation, usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                let v = valuation(&m[i][j], q);
                if best.is_none_or(|(b, _, _)| v < b) {
                    best = Some((v, i, j));
                }
            }
        }
        let (v, pi, pj) = best.expect("nonempty block");
        let v = v.finite().ok_or_else(|| Error::Input("matrix is singular".into()))?;
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &pivot;
            for j in k..n {
                let delta = &f * &m[k][j];
                m[i][j] -= delta;
            }
        }
        // the pivot row only needs clearing to the right; entries there do
        // not feed back into the remaining block once the column is zero
        out.push(v);
    }
    Ok(out)
}

/// Cartan invariants from elementary divisors computed modulo `q^N`.
///
/// With `A = M/L` for an integer matrix `M` and `det A = 1`, every elementary
/// divisor of `M` has valuation at most `n·v_q(L)`, so arithmetic modulo
/// `q^{n·v_q(L)+1}` determines them exactly. This is the fast path for bulk
/// classification; it falls back to exact rationals when the modulus does
/// not fit in 62 bits. The determinant is not rechecked, only the total
/// valuation.
pub fn cartan_invariants_modular(a: &QMatrix) -> Result<Polygon> {
    let n = a.dim();
    let q = a.q();
    let (m, l) = a.scaled_integer();
    let vl = valuation_int(&l, q).finite().expect("nonzero denominator");
    let big_n = n as i64 * vl + 1;
    let d = match modulus_for(q, big_n) {
        Some(modulus) => {
            let entries: Vec<u128> = m
                .iter()
                .map(|x| x.mod_floor(&BigInt::from(modulus)).to_u128().expect("reduced"))
                .collect();
            modular_divisors(entries, n, q as u128, modulus as u128, big_n)?
        }
        None => {
            let scaled = QMatrix::from_row_major(q, n, m.into_iter().map(QRational::from_integer).collect())?;
            elementary_divisor_valuations(&scaled)?
        }
    };
    let total: i64 = d.iter().sum();
    if total != n as i64 * vl {
        return input(format!(
            "determinant has valuation {} instead of 0",
            total - n as i64 * vl
        ));
    }
    let lambda = (1..n)
        .map(|i| -(d[..i].iter().sum::<i64>() - i as i64 * vl))
        .collect();
    checked_polygon(lambda)
}

fn modulus_for(q: u64, k: i64) -> Option<u64> {
    let m = (q as u128).checked_pow(u32::try_from(k).ok()?)?;
    (m < (1u128 << 62)).then_some(m as u64)
}

fn modular_divisors(mut m: Vec<u128>, n: usize, q: u128, modulus: u128, cap: i64) -> Result<Vec<i64>> {
    let val = |x: u128| -> i64 {
        if x == 0 {
            return cap;
        }
        let (mut x, mut v) = (x, 0);
        while x % q == 0 {
            x /= q;
            v += 1;
        }
        v
    };
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut best = (i64::MAX, k, k);
        for i in k..n {
            for j in k..n {
                let v = val(m[i * n + j]);
                if v < best.0 {
                    best = (v, i, j);
                }
            }
        }
        let (v, pi, pj) = best;
        if v >= cap {
            // cannot happen when det A is a unit
            return input("determinant valuation too large; matrix is not in SL_n(ℚ_q)".to_string());
        }
        for c in 0..n {
            m.swap(k * n + c, pi * n + c);
        }
        for r in 0..n {
            m.swap(r * n + k, r * n + pj);
        }
        let qv = q.pow(v as u32);
        let unit = m[k * n + k] / qv;
        let inv = mod_inverse(unit % modulus, modulus);
        for i in k + 1..n {
            let x = m[i * n + k];
            if x == 0 {
                continue;
            }
            let f = (x / qv) * inv % modulus;
            for j in k..n {
                let sub = f * m[k * n + j] % modulus;
                m[i * n + j] = (m[i * n + j] + modulus - sub) % modulus;
            }
        }
        out.push(v);
    }
    Ok(out)
}

fn mod_inverse(a: u128, m: u128) -> u128 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, a as i128);
    while new_r != 0 {
        let quotient = r / new_r;
        (t, new_t) = (new_t, t - quotient * new_t);
        (r, new_r) = (new_r, r - quotient * new_r);
    }
    debug_assert_eq!(r, 1, "pivot unit is invertible");
    t.rem_euclid(m as i128) as u128
}

/// A random element of `SL_n(ℤ_q)`: a product of 20 to 60 elementary
/// operations (transvections with integer coefficients, signed swaps and
/// `diag(u, u^{−1})` for small units `u`).
pub fn random_k_element<R: Rng>(rng: &mut R, q: u64, n: usize) -> Result<QMatrix> {
    if n < 2 {
        return input("need n ≥ 2");
    }
    let mut k = QMatrix::identity(q, n)?;
    let ops = rng.random_range(20..=60);
    let units: Vec<i64> = (1..=7).filter(|u| u % q as i64 != 0).collect();
    for _ in 0..ops {
        let i = rng.random_range(0..n);
        let j = (i + rng.random_range(1..n)) % n;
        let mut e = QMatrix::identity(q, n)?;
        match rng.random_range(0..4) {
            0 | 1 => {
                let c = rng.random_range(-3i64..=3);
                e.set(i, j, QRational::from_integer(c.into()));
            }
            2 => {
                e.set(i, i, QRational::zero());
                e.set(j, j, QRational::zero());
                e.set(i, j, QRational::one());
                e.set(j, i, -QRational::one());
            }
            _ => {
                let u = QRational::from_integer(units[rng.random_range(0..units.len())].into());
                let u = if rng.random_bool(0.5) { u } else { u.recip() };
                e.set(j, j, u.recip());
                e.set(i, i, u);
            }
        }
        k = if rng.random_bool(0.5) { e.mul(&k)? } else { k.mul(&e)? };
    }
    debug_assert!(k.is_integral_invertible() && k.is_special_linear());
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly(v: &[i64]) -> Polygon {
        Polygon::new(v.to_vec()).unwrap()
    }

    #[test]
    fn d_matrix() {
        let d = build_d(&poly(&[1]), 3).unwrap();
        assert_eq!(d.get(0, 0), &QRational::new(1.into(), 3.into()));
        assert_eq!(d.get(1, 1), &QRational::from_integer(3.into()));
        assert!(d.is_special_linear());
        assert_eq!(build_d(&poly(&[0, 0]), 2).unwrap(), QMatrix::identity(2, 3).unwrap());
        let d = build_d(&poly(&[4, 6, 6, 4]), 2).unwrap();
        let expect = [-4i64, -2, 0, 2, 4];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(valuation(d.get(k, k), 2), Valuation::Finite(*e));
        }
        assert!(build_d(&poly(&[1, 3]), 2).is_err());
    }

    #[test]
    fn diagonal_round_trip() {
        for (lambda, q) in [(vec![3, 4, 3], 2), (vec![1], 5), (vec![3, 5, 6, 4], 3)] {
            let p = poly(&lambda);
            let d = build_d(&p, q).unwrap();
            assert_eq!(cartan_invariants(&d).unwrap(), p);
            assert_eq!(cartan_invariants_modular(&d).unwrap(), p);
        }
    }

    #[test]
    fn unipotent_is_in_k() {
        let one = QRational::one();
        let zero = QRational::zero();
        let a = QMatrix::from_row_major(2, 2, vec![one.clone(), one.clone(), zero, one]).unwrap();
        assert_eq!(cartan_invariants(&a).unwrap(), poly(&[0]));
    }

    #[test]
    fn rejects_non_special() {
        let a = QMatrix::diagonal(2, vec![QRational::from_integer(2.into()), QRational::one()]).unwrap();
        assert!(matches!(cartan_invariants(&a), Err(Error::Input(_))));
        assert!(cartan_invariants_modular(&a).is_err());
    }

    #[test]
    fn random_k_elements_are_integral_and_special() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [2, 3, 5] {
            for n in 2..6 {
                let k = random_k_element(&mut rng, q, n).unwrap();
                assert!(k.is_special_linear());
                assert!(k.is_integral_invertible());
                assert_eq!(cartan_invariants(&k).unwrap(), Polygon::zero(n - 1).unwrap());
            }
        }
    }

    #[test]
    fn recovers_lambda_through_k_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for q in [2, 3] {
            for _ in 0..10 {
                let r = rng.random_range(1..5);
                let p = super::super::random_polygon(&mut rng, r, 3).unwrap();
                let a = random_k_element(&mut rng, q, r + 1)
                    .unwrap()
                    .mul(&build_d(&p, q).unwrap())
                    .unwrap()
                    .mul(&random_k_element(&mut rng, q, r + 1).unwrap())
                    .unwrap();
                assert_eq!(cartan_invariants(&a).unwrap(), p);
                assert_eq!(cartan_invariants_modular(&a).unwrap(), p);
                let d = elementary_divisor_valuations(&a).unwrap();
                let neg_slopes: Vec<i64> = {
                    let mut s: Vec<i64> = p.slopes().iter().map(|m| -m).collect();
                    s.sort_unstable();
                    s
                };
                assert_eq!(d, neg_slopes);
            }
        }
    }
}
