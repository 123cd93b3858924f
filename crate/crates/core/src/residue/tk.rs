use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::{is_prime, ResidueRing, DEFAULT_DIMENSION_CAP};
use crate::error::{input, Error, Result};
use crate::schatten::{norm_from_singular_values, schatten_norm_real, ComplexMatrix, SchattenExponent};
use crate::Complex64;

/// Parameters of `T_k`: the ring `ℤ/q^m`, `n` linear coordinates and the
/// shift exponent `k ∈ [0, m]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TkParams {
    pub q: u64,
    pub m: u32,
    pub n: u32,
    pub k: u32,
    pub cap: usize,
}

impl TkParams {
    pub fn new(q: u64, m: u32, n: u32, k: u32) -> Result<Self> {
        Self::with_cap(q, m, n, k, DEFAULT_DIMENSION_CAP)
    }

    pub fn with_cap(q: u64, m: u32, n: u32, k: u32, cap: usize) -> Result<Self> {
        if n == 0 {
            return input("n must be positive");
        }
        if k > m {
            return input(format!("shift exponent k = {k} exceeds m = {m}"));
        }
        let params = TkParams { q, m, n, k, cap };
        let ring = params.ring()?;
        let dim = (ring.modulus() as u128).checked_pow(n + 1);
        match dim {
            Some(d) if d <= cap as u128 => Ok(params),
            _ => input(format!(
                "dimension ({})^{} exceeds the cap {cap}",
                ring.modulus(),
                n + 1
            )),
        }
    }

    pub fn ring(&self) -> Result<ResidueRing> {
        ResidueRing::new(self.q, self.m)
    }

    /// `q^{m(n+1)}`.
    pub fn dimension(&self) -> usize {
        (self.q.pow(self.m) as usize).pow(self.n + 1)
    }
}

/// `T_k` as a real matrix. Rows are the tuples `(a_1..a_n, b)` and columns
/// `(x_1..x_n, y)`, both in lexicographic order with the last coordinate
/// varying fastest; the entry is `q^{−mn}` when
/// `y = Σ a_i x_i + b + q^k` in `ℤ/q^m` and zero otherwise.
pub fn build_tk_real(params: &TkParams) -> Result<DMatrix<f64>> {
    let ring = params.ring()?;
    let modulus = ring.modulus() as usize;
    let n = params.n as usize;
    let dim = params.dimension();
    let outer = dim / modulus;
    let shift = ring.power_of_q(params.k);
    let value = (modulus as f64).powi(-(params.n as i32));
    let mut t = DMatrix::<f64>::zeros(dim, dim);
    let mut a = vec![0u64; n];
    let mut x = vec![0u64; n];
    for a_idx in 0..outer {
        decode(a_idx, modulus, &mut a);
        for b in 0..modulus {
            let row = a_idx * modulus + b;
            for x_idx in 0..outer {
                decode(x_idx, modulus, &mut x);
                let dot: u128 = a.iter().zip(&x).map(|(&ai, &xi)| ai as u128 * xi as u128).sum();
                let y = ((dot + b as u128 + shift as u128) % modulus as u128) as usize;
                t[(row, x_idx * modulus + y)] = value;
            }
        }
    }
    Ok(t)
}

fn decode(mut idx: usize, base: usize, out: &mut [u64]) {
    for slot in out.iter_mut().rev() {
        *slot = (idx % base) as u64;
        idx /= base;
    }
}

pub fn build_tk(params: &TkParams) -> Result<ComplexMatrix> {
    ComplexMatrix::from_real(&build_tk_real(params)?)
}

/// `u·T_m − v·T_{m−1}`.
pub fn tk_combination(q: u64, m: u32, n: u32, u: Complex64, v: Complex64, cap: usize) -> Result<ComplexMatrix> {
    let (tm, tm1) = top_pair(q, m, n, cap)?;
    ComplexMatrix::from_dmatrix(tm.map(|x| u * x) - tm1.map(|x| v * x))
}

fn top_pair(q: u64, m: u32, n: u32, cap: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if m == 0 {
        return input("m must be positive");
    }
    let tm = build_tk_real(&TkParams::with_cap(q, m, n, m, cap)?)?;
    let tm1 = build_tk_real(&TkParams::with_cap(q, m, n, m - 1, cap)?)?;
    Ok((tm, tm1))
}

/// `‖T_m − T_{m−1}‖_p` from a dense SVD of the difference.
pub fn tk_diff_oracle(q: u64, m: u32, n: u32, p: SchattenExponent, cap: usize) -> Result<f64> {
    let (tm, tm1) = top_pair(q, m, n, cap)?;
    Ok(schatten_norm_real(&(tm - tm1), p))
}

/// Closed form of `‖T_m − T_{m−1}‖_p`:
/// `[q^{m−1} Σ_{s=1}^{q−1} (2 sin(πs/q))^p]^{1/p} · q^{(1/p − 1/2)mn}`.
///
/// The matrix only depends on `y − b`; Fourier transforming that coordinate
/// splits it into one block per character `η`, scaled by `1 − η(q^{m−1})`,
/// and each nondegenerate block is the `n`-fold tensor power of a scaled
/// unitary Fourier matrix.
pub fn tk_diff_norm_closed_form(q: u64, m: u32, n: u32, p: SchattenExponent) -> Result<f64> {
    if !is_prime(q) {
        return input(format!("q = {q} is not prime"));
    }
    if m == 0 || n == 0 {
        return input("m and n must be positive");
    }
    let (qf, mf, nf) = (q as f64, m as f64, n as f64);
    let chords = (1..q).map(|s| 2.0 * (PI * s as f64 / qf).sin());
    if p.is_infinite() {
        let top = chords.fold(0.0, f64::max);
        return Ok(top * qf.powf(-0.5 * mf * nf));
    }
    let pv = p.value();
    let sum: f64 = chords.map(|c| c.powf(pv)).sum();
    Ok((qf.powf(mf - 1.0) * sum).powf(1.0 / pv) * qf.powf((1.0 / pv - 0.5) * mf * nf))
}

/// `ε = n(1/2 − 1/p) − 1/p`, required to be positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonRate {
    pub n: u32,
    pub p: SchattenExponent,
    pub eps: f64,
}

impl EpsilonRate {
    pub fn new(n: u32, p: SchattenExponent) -> Result<Self> {
        if n == 0 {
            return input("n must be positive");
        }
        let r = p.reciprocal();
        let eps = n as f64 * (0.5 - r) - r;
        // p = 2 + 2/n lands on zero only up to rounding
        if eps <= 1e-12 {
            return input(format!(
                "p = {p} gives ε = {eps} ≤ 0; need p > 2 + 2/n = {}",
                2.0 + 2.0 / n as f64
            ));
        }
        Ok(EpsilonRate { n, p, eps })
    }
}

/// Singular values of a matrix indexed by `(A, b) × (X, y)` whose entries
/// only depend on `y − b` modulo `inner`.
///
/// The discrete Fourier transform in the `b`/`y` coordinate is unitary and
/// turns such a matrix into `inner` diagonal blocks
/// `B_t[A, X] = Σ_z M[(A,0),(X,z)] e^{−2πi t z / inner}`, each of size
/// `outer × outer`. Their singular values together are those of `M`.
pub fn circulant_block_singular_values(m: &ComplexMatrix, inner: usize) -> Result<Vec<f64>> {
    let dim = m.rows();
    if !m.is_square() || inner == 0 || dim % inner != 0 {
        return input("matrix size is not a multiple of the circulant period");
    }
    let outer = dim / inner;
    let scale = m.max_abs().max(1.0);
    for ra in 0..outer {
        for b in 0..inner {
            for ca in 0..outer {
                for y in 0..inner {
                    let z = (y + inner - b) % inner;
                    let lhs = m.get(ra * inner + b, ca * inner + y);
                    let rhs = m.get(ra * inner, ca * inner + z);
                    if (lhs - rhs).norm() > 1e-14 * scale {
                        return Err(Error::Input(
                            "matrix does not depend on y − b alone".into(),
                        ));
                    }
                }
            }
        }
    }
    let twiddle: Vec<Complex64> = (0..inner)
        .map(|k| {
            let a = -2.0 * PI * k as f64 / inner as f64;
            Complex64::new(a.cos(), a.sin())
        })
        .collect();
    let mut out = Vec::with_capacity(dim);
    for t in 0..inner {
        let block = DMatrix::from_fn(outer, outer, |ra, ca| {
            (0..inner)
                .map(|z| m.get(ra * inner, ca * inner + z) * twiddle[(t * z) % inner])
                .sum::<Complex64>()
        });
        out.extend(crate::schatten::svd::singular_values(&block));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TkDiffReport {
    pub q: u64,
    pub m: u32,
    pub n: u32,
    pub p: SchattenExponent,
    pub eps: f64,
    pub closed_form: f64,
    /// Dense SVD value of `‖T_m − T_{m−1}‖_p`, when requested.
    pub oracle: Option<f64>,
    pub relative_gap: Option<f64>,
    /// `2 q^{−εm}`.
    pub bound: f64,
    /// `closed_form · q^{εm}`: the constant that replaces 2 on this instance.
    pub scaled_constant: f64,
    pub upper_ok: bool,
    pub u: Complex64,
    pub v: Complex64,
    /// `‖u T_m − v T_{m−1}‖_p` from the block-circulant reduction.
    pub combination_norm: f64,
    /// `|u − v|`.
    pub lower: f64,
    pub lower_ok: bool,
}

/// Checks `‖T_m − T_{m−1}‖_p ≤ 2q^{−εm}` and `‖uT_m − vT_{m−1}‖_p ≥ |u − v|`.
pub fn verify_tk_diff(
    q: u64,
    m: u32,
    n: u32,
    p: SchattenExponent,
    u: Complex64,
    v: Complex64,
    dense_oracle: bool,
    cap: usize,
) -> Result<TkDiffReport> {
    let rate = EpsilonRate::new(n, p)?;
    let params = TkParams::with_cap(q, m, n, m, cap)?;
    let closed_form = tk_diff_norm_closed_form(q, m, n, p)?;
    let qm = q.pow(m) as usize;
    let decay = (q as f64).powf(rate.eps * m as f64);
    let bound = 2.0 / decay;
    let oracle = if dense_oracle {
        Some(tk_diff_oracle(q, m, n, p, params.cap)?)
    } else {
        None
    };
    let relative_gap = oracle.map(|o| (o - closed_form).abs() / closed_form.max(f64::MIN_POSITIVE));
    let upper_ok = closed_form <= bound * (1.0 + 1e-12) && oracle.is_none_or(|o| o <= bound * (1.0 + 1e-12));
    let combo = tk_combination(q, m, n, u, v, params.cap)?;
    let combination_norm = norm_from_singular_values(&circulant_block_singular_values(&combo, qm)?, p);
    let lower = (u - v).norm();
    Ok(TkDiffReport {
        q,
        m,
        n,
        p,
        eps: rate.eps,
        closed_form,
        oracle,
        relative_gap,
        bound,
        scaled_constant: closed_form * decay,
        upper_ok,
        u,
        v,
        combination_norm,
        lower,
        lower_ok: combination_norm >= lower - 1e-9,
    })
}
