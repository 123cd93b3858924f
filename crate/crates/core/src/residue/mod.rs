//! Residue rings `ℤ/q^m`, their additive characters and the shifted
//! incidence matrices `T_k`.

mod tk;

pub use tk::{
    build_tk, build_tk_real, circulant_block_singular_values, tk_combination, tk_diff_norm_closed_form,
    tk_diff_oracle, verify_tk_diff, EpsilonRate, TkDiffReport, TkParams,
};

use std::f64::consts::PI;

use crate::error::{input, Result};
use crate::schatten::ComplexMatrix;
use crate::Complex64;

/// Default cap on matrix dimensions built by this module.
pub const DEFAULT_DIMENSION_CAP: usize = 4096;

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `ℤ/q^m` with elements stored as integers in `[0, q^m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueRing {
    q: u64,
    m: u32,
    modulus: u64,
}

impl ResidueRing {
    pub fn new(q: u64, m: u32) -> Result<Self> {
        if !is_prime(q) {
            return input(format!("q = {q} is not prime"));
        }
        if m == 0 {
            return input("m must be positive");
        }
        let modulus = q
            .checked_pow(m)
            .filter(|&x| x <= u32::MAX as u64)
            .ok_or_else(|| crate::Error::Input(format!("{q}^{m} is too large")))?;
        Ok(ResidueRing { q, m, modulus })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `q^m`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn reduce(&self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    /// `q^k` in the ring; zero once `k ≥ m`.
    pub fn power_of_q(&self, k: u32) -> u64 {
        if k >= self.m {
            0
        } else {
            self.q.pow(k)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.modulus
    }
}

/// The character `x ↦ exp(2πi t x / q^m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdditiveCharacter {
    pub ring: ResidueRing,
    pub t: u64,
}

impl AdditiveCharacter {
    pub fn eval(&self, x: u64) -> Complex64 {
        let n = self.ring.modulus();
        // reduce t·x exactly before leaving the integers
        let k = ((self.t as u128 * x as u128) % n as u128) as f64;
        let angle = 2.0 * PI * k / n as f64;
        Complex64::new(angle.cos(), angle.sin())
    }

    /// Nondegenerate characters are those not trivial on `q^{m−1}ℤ/q^mℤ`.
    pub fn is_nondegenerate(&self) -> bool {
        self.t % self.ring.q() != 0
    }

    /// `q^{-m/2} (η(ax))_{a,x}`, unitary exactly when `η` is nondegenerate.
    pub fn fourier_matrix(&self) -> ComplexMatrix {
        let n = self.ring.modulus() as usize;
        let s = 1.0 / (n as f64).sqrt();
        ComplexMatrix::from_fn(n, n, |a, x| {
            let prod = (a as u128 * x as u128 % n as u128) as u64;
            self.eval(prod) * s
        })
    }
}

/// All `q^m` characters of the ring, in order of `t`.
pub fn additive_characters(ring: ResidueRing, cap: usize) -> Result<Vec<AdditiveCharacter>> {
    if ring.modulus() as usize > cap {
        return input(format!(
            "ring of size {} exceeds the cap {cap}",
            ring.modulus()
        ));
    }
    Ok(ring.elements().map(|t| AdditiveCharacter { ring, t }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(3) && is_prime(7) && is_prime(97));
        assert!(!is_prime(0) && !is_prime(1) && !is_prime(4) && !is_prime(91));
        assert!(ResidueRing::new(4, 1).is_err());
        assert!(ResidueRing::new(2, 0).is_err());
    }

    #[test]
    fn nondegenerate_counts() {
        for (q, m, total, nondeg) in [(2, 1, 2, 1), (3, 2, 9, 6), (2, 3, 8, 4), (5, 1, 5, 4)] {
            let chars = additive_characters(ResidueRing::new(q, m).unwrap(), 4096).unwrap();
            assert_eq!(chars.len(), total);
            assert_eq!(chars.iter().filter(|c| c.is_nondegenerate()).count(), nondeg);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let ring = ResidueRing::new(3, 3).unwrap();
        assert!(additive_characters(ring, 26).is_err());
        assert!(additive_characters(ring, 27).is_ok());
    }

    #[test]
    fn value_at_top_power() {
        let ring = ResidueRing::new(3, 2).unwrap();
        for chi in additive_characters(ring, 4096).unwrap() {
            let angle = 2.0 * PI * chi.t as f64 / 3.0;
            let expected = Complex64::new(angle.cos(), angle.sin());
            assert!((chi.eval(ring.power_of_q(1)) - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn orthogonality() {
        let ring = ResidueRing::new(2, 3).unwrap();
        for chi in additive_characters(ring, 4096).unwrap().into_iter().skip(1) {
            let s: Complex64 = ring.elements().map(|x| chi.eval(x)).sum();
            assert!(s.norm() < 1e-12);
        }
    }

    #[test]
    fn shift_vanishes_at_top() {
        let ring = ResidueRing::new(2, 3).unwrap();
        assert_eq!(ring.power_of_q(3), 0);
        assert_eq!(ring.power_of_q(2), 4);
        assert_eq!(ring.reduce(-1), 7);
    }
}
