//! Legendre polynomials and the spectral series of circle-averaging
//! operators on the 2-sphere.
//!
//! `T_δ` averages a function over the circle `{y : ⟨x, y⟩ = δ}` and acts on
//! the degree-`n` spherical harmonics (dimension `2n + 1`) as multiplication
//! by `P_n(δ)`. Hence
//! `‖aT_0 − bT_δ‖_{S^p}^p = Σ_n (2n+1) |a P_n(0) − b P_n(δ)|^p`.

mod decay;
mod series;

pub use decay::{real_decay_certificate, ChainPart, DecayCertificate, DecayRate, DecayStep, RealCartanLabel};
pub use series::{
    octave_blocks, partial_power_sum, scaling_fit, scaling_grid, tail_power_bound, tdelta_diff_norm,
    DivergenceReport, OctaveBlock, ScalingFit, ScalingPoint, SeriesOptions, SeriesOutcome, SeriesValue,
};

use crate::error::{input, Result};

/// Values `P_0(x), P_1(x), …` by `(n+1)P_{n+1} = (2n+1)xP_n − nP_{n−1}`.
#[derive(Debug, Clone)]
pub struct LegendreEvaluator {
    x: f64,
    n: u64,
    prev: f64,
    cur: f64,
}

impl LegendreEvaluator {
    pub fn new(x: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&x) {
            return input(format!("x = {x} is outside [−1, 1]"));
        }
        Ok(LegendreEvaluator {
            x,
            n: 0,
            prev: 0.0,
            cur: 1.0,
        })
    }

    /// Degree of the value [`Self::value`] returns.
    pub fn degree(&self) -> u64 {
        self.n
    }

    pub fn value(&self) -> f64 {
        self.cur
    }

    pub fn advance(&mut self) {
        let n = self.n as f64;
        let next = ((2.0 * n + 1.0) * self.x * self.cur - n * self.prev) / (n + 1.0);
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;
    }
}

impl Iterator for LegendreEvaluator {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let v = self.cur;
        self.advance();
        Some(v)
    }
}

pub fn legendre(n: u64, x: f64) -> Result<f64> {
    let mut ev = LegendreEvaluator::new(x)?;
    while ev.degree() < n {
        ev.advance();
    }
    Ok(ev.value())
}

/// `P_0(x), …, P_{n_max}(x)`.
pub fn legendre_table(n_max: usize, x: f64) -> Result<Vec<f64>> {
    Ok(LegendreEvaluator::new(x)?.take(n_max + 1).collect())
}
