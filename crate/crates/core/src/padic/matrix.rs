use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{valuation, QRational, Valuation};
use crate::error::{input, Error, Result};

/// Square matrix over `ℚ`, read q-adically for the prime `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    q: u64,
    n: usize,
    entries: Vec<QRational>,
}

impl QMatrix {
    pub fn from_row_major(q: u64, n: usize, entries: Vec<QRational>) -> Result<Self> {
        if !crate::residue::is_prime(q) {
            return input(format!("q = {q} is not prime"));
        }
        if n == 0 {
            return input("empty matrix");
        }
        if entries.len() != n * n {
            return input(format!("expected {} entries, got {}", n * n, entries.len()));
        }
        Ok(QMatrix { q, n, entries })
    }

    pub fn from_fn(q: u64, n: usize, f: impl Fn(usize, usize) -> QRational) -> Result<Self> {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self::from_row_major(q, n, entries)
    }

    pub fn identity(q: u64, n: usize) -> Result<Self> {
        Self::from_fn(q, n, |i, j| if i == j { QRational::one() } else { QRational::zero() })
    }

    pub fn diagonal(q: u64, diag: Vec<QRational>) -> Result<Self> {
        let n = diag.len();
        Self::from_fn(q, n, |i, j| if i == j { diag[i].clone() } else { QRational::zero() })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[QRational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &QRational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: QRational) {
        self.entries[i * self.n + j] = x;
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix::from_fn(self.q, self.n, |i, j| self.get(j, i).clone()).expect("same shape")
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.q != other.q || self.n != other.n {
            return input("matrix product needs the same prime and size");
        }
        let n = self.n;
        QMatrix::from_fn(self.q, n, |i, j| {
            let mut acc = QRational::zero();
            for k in 0..n {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
            acc
        })
    }

    /// Common denominator `L` and the integer matrix `L·A`.
    pub fn scaled_integer(&self) -> (Vec<BigInt>, BigInt) {
        let l = self
            .entries
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let m = self
            .entries
            .iter()
            .map(|x| x.numer() * (&l / x.denom()))
            .collect();
        (m, l)
    }

    pub fn det(&self) -> QRational {
        let (m, l) = self.scaled_integer();
        let d = bareiss_det(m, self.n);
        QRational::new(d, num_traits::pow(l, self.n))
    }

    pub fn is_special_linear(&self) -> bool {
        self.det().is_one()
    }

    /// Entries with nonnegative valuation and a unit determinant.
    pub fn is_integral_invertible(&self) -> bool {
        self.entries
            .iter()
            .all(|x| valuation(x, self.q) >= Valuation::Finite(0))
            && valuation(&self.det(), self.q) == Valuation::Finite(0)
    }

    pub fn inverse(&self) -> Result<QMatrix> {
        let n = self.n;
        let mut a: Vec<Vec<QRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<QRational> = (0..n).map(|j| self.get(i, j).clone()).collect();
                row.extend((0..n).map(|j| if i == j { QRational::one() } else { QRational::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or_else(|| Error::Input("matrix is singular".into()))?;
            a.swap(col, pivot);
            let inv = a[col][col].recip();
            for x in a[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for c in 0..2 * n {
                        let delta = &factor * &a[col][c];
                        a[r][c] -= delta;
                    }
                }
            }
        }
        QMatrix::from_fn(self.q, n, |i, j| a[i][n + j].clone())
    }

    /// Determinant of the submatrix on the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> QRational {
        QMatrix::from_fn(self.q, rows.len(), |i, j| self.get(rows[i], cols[j]).clone())
            .map(|m| m.det())
            .unwrap_or_else(|_| QRational::one())
    }
}

/// Fraction-free Gaussian elimination; every division is exact.
pub(crate) fn bareiss_det(mut m: Vec<BigInt>, n: usize) -> BigInt {
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k * n + k].is_zero() {
            match (k + 1..n).find(|&r| !m[r * n + k].is_zero()) {
                Some(r) => {
                    for c in 0..n {
                        m.swap(k * n + c, r * n + c);
                    }
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j];
                m[i * n + j] = v / &prev;
            }
        }
        prev = m[k * n + k].clone();
    }
    sign * &m[n * n - 1]
}
