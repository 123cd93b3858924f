//! `‖aT_0 − bT_δ‖_{S^p}` by summing the spectral series octave by octave.
//!
//! Tails are bounded with Bernstein's inequality
//! `|P_n(cos θ)| ≤ √(2 / (π n sin θ))`, so for `|δ| < 1` and `p > 4`
//! `Σ_{n≥N} (2n+1)|c_n|^p ≤ K^p Σ_{n≥N} (2n+1) n^{−p/2}` with
//! `K = √(2/π) (|a| + |b| (1 − δ²)^{−1/4})`.

use rayon::prelude::*;

use super::LegendreEvaluator;
use crate::error::{input, Error, Result};
use crate::schatten::SchattenExponent;
use crate::Complex64;

/// Octave count of the divergence diagnostics, so blocks reach `2^16`.
const DIAGNOSTIC_OCTAVES: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    /// Target for the certified tail of the norm.
    pub tol: f64,
    /// Summation stops at `N = 2^max_octaves` terms at the latest.
    pub max_octaves: u32,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            tol: 1e-6,
            max_octaves: 22,
        }
    }
}

/// `Σ_{start ≤ n < end} (2n+1) |c_n|^p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OctaveBlock {
    pub start: u64,
    pub end: u64,
    pub sum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesValue {
    /// Norm of the partial sum over `n < terms`; a lower bound.
    pub value: f64,
    pub terms: u64,
    /// Bound on the norm of the neglected tail: the true norm lies in
    /// `[value, value + tail_bound]`.
    pub tail_bound: f64,
    /// `value` with a geometric estimate of the tail added. Not certified.
    pub extrapolated: f64,
    /// Whether `tail_bound ≤ tol`.
    pub certified: bool,
    /// `Σ_{n < terms} (2n+1)|c_n|^p`, or the running sup for `p = ∞`.
    pub power_sum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport {
    pub p: f64,
    pub reason: String,
    pub blocks: Vec<OctaveBlock>,
    /// Ratio of each block sum to the previous one.
    pub ratios: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesOutcome {
    Converged(SeriesValue),
    Divergent(DivergenceReport),
}

impl SeriesOutcome {
    pub fn converged(&self) -> Option<&SeriesValue> {
        match self {
            SeriesOutcome::Converged(v) => Some(v),
            SeriesOutcome::Divergent(_) => None,
        }
    }
}

struct Coefficients {
    a: Complex64,
    b: Complex64,
    at_zero: LegendreEvaluator,
    at_delta: LegendreEvaluator,
}

impl Coefficients {
    fn new(a: Complex64, b: Complex64, delta: f64) -> Result<Self> {
        Ok(Coefficients {
            a,
            b,
            at_zero: LegendreEvaluator::new(0.0)?,
            at_delta: LegendreEvaluator::new(delta)?,
        })
    }

    /// `|a P_n(0) − b P_n(δ)|` for the next `n`.
    fn next_abs(&mut self) -> f64 {
        let c = self.a * self.at_zero.value() - self.b * self.at_delta.value();
        self.at_zero.advance();
        self.at_delta.advance();
        c.norm()
    }
}

#[derive(Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&delta) {
        return input(format!("δ = {delta} is outside [−1, 1]"));
    }
    Ok(())
}

fn block_sum(coeffs: &mut Coefficients, start: u64, end: u64, p: f64) -> OctaveBlock {
    let mut acc = Kahan::default();
    for n in start..end {
        acc.add((2 * n + 1) as f64 * coeffs.next_abs().powf(p));
    }
    OctaveBlock { start, end, sum: acc.sum }
}

/// Blocks `[0,1), [1,2), [2,4), …, [2^{k−1}, 2^k)` for `k = octaves`.
pub fn octave_blocks(a: Complex64, b: Complex64, delta: f64, p: f64, octaves: u32) -> Result<Vec<OctaveBlock>> {
    check_delta(delta)?;
    let mut coeffs = Coefficients::new(a, b, delta)?;
    let mut blocks = vec![block_sum(&mut coeffs, 0, 1, p)];
    for k in 0..octaves {
        blocks.push(block_sum(&mut coeffs, 1 << k, 2 << k, p));
    }
    Ok(blocks)
}

/// `Σ_{n<N} (2n+1)|a P_n(0) − b P_n(δ)|^p`.
pub fn partial_power_sum(a: Complex64, b: Complex64, delta: f64, p: f64, n_terms: u64) -> Result<f64> {
    check_delta(delta)?;
    let mut coeffs = Coefficients::new(a, b, delta)?;
    let mut total = Kahan::default();
    let mut start = 0;
    while start < n_terms {
        let end = (start.max(1) * 2).min(n_terms);
        total.add(block_sum(&mut coeffs, start, end, p).sum);
        start = end;
    }
    Ok(total.sum)
}

fn bernstein_constant(a: Complex64, b: Complex64, delta: f64) -> f64 {
    let c = (2.0 / std::f64::consts::PI).sqrt();
    if b.norm() == 0.0 {
        return c * a.norm();
    }
    if delta.abs() >= 1.0 {
        return f64::INFINITY;
    }
    c * (a.norm() + b.norm() * (1.0 - delta * delta).powf(-0.25))
}

/// Upper bound on `Σ_{n≥N} (2n+1)|a P_n(0) − b P_n(δ)|^p` for `N ≥ 1`,
/// `p > 4`. Infinite when `|δ| = 1` and `b ≠ 0`.
pub fn tail_power_bound(a: Complex64, b: Complex64, delta: f64, p: f64, n_start: u64) -> Result<f64> {
    check_delta(delta)?;
    if p <= 4.0 {
        return input(format!("the tail only converges for p > 4, got {p}"));
    }
    if n_start == 0 {
        return input("the tail bound needs N ≥ 1");
    }
    let k = bernstein_constant(a, b, delta);
    if k == 0.0 {
        return Ok(0.0);
    }
    let n = n_start as f64;
    let h = p / 2.0;
    // g(x) = (2x+1) x^{−p/2} is decreasing, so Σ_{n≥N} g ≤ g(N) + ∫_N^∞ g
    let integral = 2.0 * n.powf(2.0 - h) / (h - 2.0) + n.powf(1.0 - h) / (h - 1.0);
    Ok(k.powf(p) * ((2.0 * n + 1.0) * n.powf(-h) + integral))
}

fn identically_zero(a: Complex64, b: Complex64, delta: f64) -> bool {
    (a == b && delta == 0.0) || (a.norm() == 0.0 && b.norm() == 0.0)
}

fn divergence_report(a: Complex64, b: Complex64, delta: f64, p: f64, reason: String) -> Result<SeriesOutcome> {
    let blocks = octave_blocks(a, b, delta, p, DIAGNOSTIC_OCTAVES)?;
    let ratios = blocks.windows(2).map(|w| w[1].sum / w[0].sum).collect();
    Ok(SeriesOutcome::Divergent(DivergenceReport {
        p,
        reason,
        blocks,
        ratios,
    }))
}

/// `‖aT_0 − bT_δ‖_{S^p}`. For `p ≤ 4` the series diverges and octave
/// diagnostics are returned instead of a value.
pub fn tdelta_diff_norm(
    a: Complex64,
    b: Complex64,
    delta: f64,
    p: SchattenExponent,
    opts: &SeriesOptions,
) -> Result<SeriesOutcome> {
    check_delta(delta)?;
    if !(opts.tol > 0.0) || !opts.tol.is_finite() {
        return input("tol must be positive and finite");
    }
    if identically_zero(a, b, delta) {
        return Ok(SeriesOutcome::Converged(SeriesValue {
            value: 0.0,
            terms: 1,
            tail_bound: 0.0,
            extrapolated: 0.0,
            certified: true,
            power_sum: 0.0,
        }));
    }
    if p.is_infinite() {
        return Ok(SeriesOutcome::Converged(sup_norm(a, b, delta, opts)?));
    }
    let p = p.value();
    if p <= 4.0 {
        return divergence_report(a, b, delta, p, format!("Σ (2n+1)|c_n|^p diverges for p = {p} ≤ 4"));
    }
    if delta.abs() == 1.0 && b.norm() > 0.0 {
        return divergence_report(a, b, delta, p, "P_n(±1) does not decay, so the series diverges".into());
    }

    let mut coeffs = Coefficients::new(a, b, delta)?;
    let mut total = Kahan::default();
    total.add(block_sum(&mut coeffs, 0, 1, p).sum);
    let mut last_block = 0.0;
    let mut n_end = 1u64;
    let mut tail_bound = f64::INFINITY;
    for k in 0..opts.max_octaves {
        let block = block_sum(&mut coeffs, 1 << k, 2 << k, p);
        total.add(block.sum);
        last_block = block.sum;
        n_end = 2 << k;
        tail_bound = norm_gap(total.sum, tail_power_bound(a, b, delta, p, n_end)?, p);
        if tail_bound <= opts.tol {
            break;
        }
    }
    let certified = tail_bound <= opts.tol;
    if certified {
        // the bound must dominate the observed increment up to 4N
        let more = partial_power_sum(a, b, delta, p, 4 * n_end)? - partial_power_sum(a, b, delta, p, n_end)?;
        if norm_gap(total.sum, more.max(0.0), p) > tail_bound * (1.0 + 1e-9) + 1e-15 {
            return Err(Error::Internal(format!(
                "tail bound {tail_bound:e} is below the observed increment up to {}",
                4 * n_end
            )));
        }
    }
    let rho = 2f64.powf(2.0 - p / 2.0);
    let raw_estimate = last_block * rho / (1.0 - rho);
    let power_tail = tail_power_bound(a, b, delta, p, n_end)?;
    let value = total.sum.powf(1.0 / p);
    Ok(SeriesOutcome::Converged(SeriesValue {
        value,
        terms: n_end,
        tail_bound,
        extrapolated: (total.sum + raw_estimate.min(power_tail)).powf(1.0 / p),
        certified,
        power_sum: total.sum,
    }))
}

/// `(S + R)^{1/p} − S^{1/p}`.
fn norm_gap(s: f64, r: f64, p: f64) -> f64 {
    (s + r).powf(1.0 / p) - s.powf(1.0 / p)
}

/// `sup_n |a P_n(0) − b P_n(δ)|`, stopping once the Bernstein envelope drops
/// below the running maximum.
fn sup_norm(a: Complex64, b: Complex64, delta: f64, opts: &SeriesOptions) -> Result<SeriesValue> {
    let c = (2.0 / std::f64::consts::PI).sqrt();
    let sin_factor = (1.0 - delta * delta).sqrt();
    let envelope = |n: u64| {
        let nf = n as f64;
        let za = (c / nf.sqrt()).min(1.0);
        let zb = if sin_factor > 0.0 {
            (c / (nf * sin_factor).sqrt()).min(1.0)
        } else {
            1.0
        };
        a.norm() * za + b.norm() * zb
    };
    let mut coeffs = Coefficients::new(a, b, delta)?;
    let mut best = coeffs.next_abs();
    let max_terms = 1u64 << opts.max_octaves;
    let mut n = 1;
    while n < max_terms && envelope(n) > best {
        best = best.max(coeffs.next_abs());
        n += 1;
    }
    let tail_bound = if n < max_terms { 0.0 } else { (envelope(n) - best).max(0.0) };
    Ok(SeriesValue {
        value: best,
        terms: n,
        tail_bound,
        extrapolated: best,
        certified: tail_bound <= opts.tol,
        power_sum: best,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingPoint {
    pub delta: f64,
    pub value: f64,
    pub extrapolated: f64,
    pub terms: u64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub p: f64,
    /// Least-squares slope of `log ‖T_0 − T_δ‖` against `log |δ|`.
    pub exponent: f64,
    /// `exp` of the fitted intercept: `‖T_0 − T_δ‖ ≈ prefactor · |δ|^exponent`.
    pub prefactor: f64,
    /// `1/2 − 2/p`.
    pub expected: f64,
    pub points: Vec<ScalingPoint>,
}

/// `δ = 2^{−k}` for `k = kmin..=kmax`.
pub fn scaling_grid(kmin: u32, kmax: u32) -> Vec<f64> {
    (kmin..=kmax).map(|k| 2f64.powi(-(k as i32))).collect()
}

/// Fits `‖T_0 − T_δ‖_{S^p} ≈ C |δ|^e` over the grid, using extrapolated values.
pub fn scaling_fit(p: SchattenExponent, deltas: &[f64], opts: &SeriesOptions) -> Result<ScalingFit> {
    if !p.is_infinite() && p.value() <= 4.0 {
        return input(format!("scaling needs p > 4, got {}", p.value()));
    }
    if deltas.len() < 2 {
        return input("the fit needs at least two values of δ");
    }
    if let Some(d) = deltas.iter().find(|d| !(d.abs() > 0.0 && d.abs() <= 0.5)) {
        return input(format!("δ = {d} is outside 0 < |δ| ≤ 1/2"));
    }
    let one = Complex64::new(1.0, 0.0);
    let points = deltas
        .par_iter()
        .map(|&delta| {
            let v = tdelta_diff_norm(one, one, delta, p, opts)?
                .converged()
                .cloned()
                .ok_or_else(|| Error::Internal(format!("series diverged at δ = {delta}")))?;
            Ok(ScalingPoint {
                delta,
                value: v.value,
                extrapolated: v.extrapolated,
                terms: v.terms,
                tail_bound: v.tail_bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = points.iter().map(|pt| pt.delta.abs().ln()).collect();
    let ys: Vec<f64> = points.iter().map(|pt| pt.extrapolated.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return input("the grid needs two distinct values of |δ|");
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    Ok(ScalingFit {
        p: p.value(),
        exponent,
        prefactor: (my - exponent * mx).exp(),
        expected: 0.5 - 2.0 * p.reciprocal(),
        points,
    })
}
