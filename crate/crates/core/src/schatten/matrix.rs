use nalgebra::DMatrix;

use crate::error::{input, Error, Result};
use crate::Complex64;

/// Dense complex matrix with finite entries and at least one row and column.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return input(format!("matrix must be non-empty, got {rows}x{cols}"));
        }
        if entries.len() != rows * cols {
            return input(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            ));
        }
        Self::from_dmatrix(DMatrix::from_row_slice(rows, cols, &entries))
    }

    pub fn from_dmatrix(inner: DMatrix<Complex64>) -> Result<Self> {
        if inner.nrows() == 0 || inner.ncols() == 0 {
            return input("matrix must be non-empty");
        }
        if let Some(z) = inner.iter().find(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Input(format!("non-finite matrix entry {z}")));
        }
        Ok(ComplexMatrix { inner })
    }

    pub fn from_real(inner: &DMatrix<f64>) -> Result<Self> {
        Self::from_dmatrix(inner.map(|x| Complex64::new(x, 0.0)))
    }

    /// Builds a matrix from an entry function. Panics if the function
    /// produces a non-finite value, so only use it with total formulas.
    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self::from_dmatrix(DMatrix::from_fn(rows, cols, f)).expect("finite entries")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Complex64::new(1.0, 0.0))
    }

    /// Matrix unit `e_{ij}`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        Self::from_fn(rows, cols, |a, b| {
            Complex64::new(if a == i && b == j { 1.0 } else { 0.0 }, 0.0)
        })
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.inner
    }

    pub fn row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix {
            inner: self.inner.adjoint(),
        }
    }

    pub fn transpose(&self) -> Self {
        ComplexMatrix {
            inner: self.inner.transpose(),
        }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.cols() != other.rows() {
            return input(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            ));
        }
        Self::from_dmatrix(&self.inner * &other.inner)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            inner: self.inner.map(|z| z * s),
        }
    }

    /// `self − other`, shapes must agree.
    pub fn sub(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return input("shape mismatch in subtraction");
        }
        Self::from_dmatrix(&self.inner - &other.inner)
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.inner.shape(), other.inner.shape());
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn singular_values(&self) -> Vec<f64> {
        super::svd::singular_values(&self.inner)
    }

    /// Applies the same permutation convention as `φ^{σ,σ'}`:
    /// the result has entry `(i, j)` equal to `self[(row_perm[i], col_perm[j])]`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<Self> {
        check_permutation(row_perm, self.rows())?;
        check_permutation(col_perm, self.cols())?;
        Ok(Self::from_fn(self.rows(), self.cols(), |i, j| {
            self.inner[(row_perm[i], col_perm[j])]
        }))
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return input(format!("permutation of length {} for size {n}", perm.len()));
    }
    let mut seen = vec![false; n];
    for &k in perm {
        if k >= n || seen[k] {
            return input("not a permutation");
        }
        seen[k] = true;
    }
    Ok(())
}

/// Schatten exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SchattenExponent(f64);

impl SchattenExponent {
    pub const ONE: SchattenExponent = SchattenExponent(1.0);
    pub const TWO: SchattenExponent = SchattenExponent(2.0);
    pub const INFINITY: SchattenExponent = SchattenExponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return input(format!("Schatten exponent must lie in [1, inf], got {p}"));
        }
        Ok(SchattenExponent(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `p′` with `1/p + 1/p′ = 1`.
    pub fn conjugate(self) -> Self {
        if self.0 == 1.0 {
            SchattenExponent::INFINITY
        } else if self.is_infinite() {
            SchattenExponent::ONE
        } else {
            SchattenExponent(self.0 / (self.0 - 1.0))
        }
    }

    /// `1/p`, zero at infinity.
    pub fn reciprocal(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }
}

impl std::fmt::Display for SchattenExponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl std::str::FromStr for SchattenExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "inf" || t == "infinity" || t == "∞" {
            return Ok(SchattenExponent::INFINITY);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("bad Schatten exponent {s:?}")))?;
        SchattenExponent::new(p)
    }
}

/// Square matrix `φ` acting on matrices by entrywise multiplication.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    matrix: ComplexMatrix,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

impl Symbol {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return input(format!(
                "symbol must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            ));
        }
        Ok(Symbol {
            matrix,
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn with_labels(mut self, rows: Vec<String>, cols: Vec<String>) -> Result<Self> {
        if rows.len() != self.size() || cols.len() != self.size() {
            return input("label count does not match symbol size");
        }
        self.row_labels = Some(rows);
        self.col_labels = Some(cols);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix.get(i, j)
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    /// `φᵀ`, which implements the adjoint action in the trace pairing.
    pub fn transpose(&self) -> Symbol {
        Symbol {
            matrix: self.matrix.transpose(),
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    pub fn ones(n: usize) -> Symbol {
        Symbol::new(ComplexMatrix::ones(n, n)).expect("square")
    }

    pub fn identity(n: usize) -> Symbol {
        Symbol::new(ComplexMatrix::identity(n)).expect("square")
    }
}

/// Finite measure space split into blocks: each index carries a block id and
/// a positive weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    blocks: Vec<usize>,
    weights: Vec<f64>,
    block_count: usize,
}

impl Partition {
    pub fn new(blocks: Vec<usize>, weights: Vec<f64>) -> Result<Self> {
        if blocks.is_empty() {
            return input("partition of an empty index set");
        }
        if blocks.len() != weights.len() {
            return input("block ids and weights differ in length");
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return input(format!("weights must be positive, got {w}"));
        }
        let block_count = blocks.iter().max().map_or(0, |m| m + 1);
        let mut used = vec![false; block_count];
        for &b in &blocks {
            used[b] = true;
        }
        if let Some(empty) = used.iter().position(|u| !u) {
            return input(format!("block {empty} is empty"));
        }
        Ok(Partition {
            blocks,
            weights,
            block_count,
        })
    }

    pub fn uniform(blocks: Vec<usize>) -> Result<Self> {
        let w = vec![1.0; blocks.len()];
        Self::new(blocks, w)
    }

    /// `n` consecutive blocks of size `block_size`, unit weights.
    pub fn equal_blocks(n_blocks: usize, block_size: usize) -> Result<Self> {
        Self::uniform((0..n_blocks * block_size).map(|i| i / block_size).collect())
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.blocks[i]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_exponents() {
        assert_eq!(SchattenExponent::ONE.conjugate(), SchattenExponent::INFINITY);
        assert_eq!(SchattenExponent::INFINITY.conjugate(), SchattenExponent::ONE);
        assert_eq!(SchattenExponent::TWO.conjugate(), SchattenExponent::TWO);
        let p = SchattenExponent::new(4.0).unwrap();
        assert!((p.conjugate().value() - 4.0 / 3.0).abs() < 1e-15);
        assert!((p.reciprocal() + p.conjugate().reciprocal() - 1.0).abs() < 1e-15);
        assert!(SchattenExponent::new(0.5).is_err());
        assert!(SchattenExponent::new(f64::NAN).is_err());
        assert_eq!("inf".parse::<SchattenExponent>().unwrap(), SchattenExponent::INFINITY);
    }

    #[test]
    fn matrix_rejects_non_finite() {
        let bad = vec![Complex64::new(f64::NAN, 0.0)];
        assert!(ComplexMatrix::from_row_major(1, 1, bad).is_err());
        assert!(ComplexMatrix::from_row_major(0, 1, vec![]).is_err());
        assert!(ComplexMatrix::from_row_major(2, 2, vec![Complex64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn symbol_must_be_square() {
        assert!(Symbol::new(ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn partition_rejects_empty_block() {
        assert!(Partition::uniform(vec![0, 2, 2]).is_err());
        assert!(Partition::new(vec![0, 1], vec![1.0, 0.0]).is_err());
        let p = Partition::equal_blocks(3, 2).unwrap();
        assert_eq!(p.blocks(), &[0, 0, 1, 1, 2, 2]);
    }
}
