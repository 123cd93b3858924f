//! Decay of a `K`-biinvariant function on `SL_3(ℝ)` along a chain of Cartan
//! labels `D(s, t)`, given the two-parameter estimate
//! `|φ(D(s,t)) − φ(D(s',t'))| ≤ C₁ e^{−a·(t' or s')}` with `a = 1/2 − 2/p`.

use crate::error::{input, Result};
use crate::schatten::SchattenExponent;

/// Cartan label `D(s, t)` with `s, t ≥ 0`. Only a label: the matrix is never
/// built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealCartanLabel {
    pub s: f64,
    pub t: f64,
}

impl RealCartanLabel {
    pub fn new(s: f64, t: f64) -> Result<Self> {
        if !(s >= 0.0 && t >= 0.0 && s.is_finite() && t.is_finite()) {
            return input(format!("D({s}, {t}) needs finite s, t ≥ 0"));
        }
        Ok(RealCartanLabel { s, t })
    }
}

impl std::fmt::Display for RealCartanLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "D({}, {})", self.s, self.t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRate {
    pub p: f64,
    /// `1/2 − 2/p`.
    pub a: f64,
    pub eps: Option<f64>,
}

impl DecayRate {
    pub fn new(p: SchattenExponent) -> Result<Self> {
        let a = 0.5 - 2.0 * p.reciprocal();
        if a <= 0.0 {
            return input(format!("no decay for p = {} ≤ 4", p.value()));
        }
        Ok(DecayRate {
            p: p.value(),
            a,
            eps: None,
        })
    }

    pub fn with_eps(self, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < self.a) {
            return input(format!("ε = {eps} must lie in (0, {})", self.a));
        }
        Ok(DecayRate { eps: Some(eps), ..self })
    }
}

/// Which form of the two-parameter estimate a step uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainPart {
    /// `s + 2t = s' + 2t'` and `0 ≤ t' ≤ t ≤ s+t ≤ s'+t' ≤ s+2t`; bound `e^{−a t'}`.
    FixedSPlusTwoT,
    /// `2s + t = 2s' + t'` and `0 ≤ s' ≤ s ≤ s+t ≤ s'+t' ≤ 2s+t`; bound `e^{−a s'}`.
    FixedTwoSPlusT,
}

impl ChainPart {
    pub fn name(self) -> &'static str {
        match self {
            ChainPart::FixedSPlusTwoT => "s+2t fixed",
            ChainPart::FixedTwoSPlusT => "2s+t fixed",
        }
    }

    /// Whether the ordering hypotheses hold for `from = D(s,t)`, `to = D(s',t')`.
    pub fn applies(self, from: RealCartanLabel, to: RealCartanLabel) -> bool {
        let (s, t, s2, t2) = (from.s, from.t, to.s, to.t);
        let tol = 1e-12 * (1.0 + s.abs() + t.abs());
        let le = |x: f64, y: f64| x <= y + tol;
        match self {
            ChainPart::FixedSPlusTwoT => {
                (s + 2.0 * t - s2 - 2.0 * t2).abs() <= tol
                    && le(0.0, t2)
                    && le(t2, t)
                    && le(t, s + t)
                    && le(s + t, s2 + t2)
                    && le(s2 + t2, s + 2.0 * t)
            }
            ChainPart::FixedTwoSPlusT => {
                (2.0 * s + t - 2.0 * s2 - t2).abs() <= tol
                    && le(0.0, s2)
                    && le(s2, s)
                    && le(s, s + t)
                    && le(s + t, s2 + t2)
                    && le(s2 + t2, 2.0 * s + t)
            }
        }
    }

    fn exponent(self, to: RealCartanLabel) -> f64 {
        match self {
            ChainPart::FixedSPlusTwoT => to.t,
            ChainPart::FixedTwoSPlusT => to.s,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayStep {
    pub from: RealCartanLabel,
    pub to: RealCartanLabel,
    pub part: ChainPart,
    /// `x` in `C₁ e^{−a x}`.
    pub exponent: f64,
    pub term: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayCertificate {
    pub u: f64,
    pub v: f64,
    pub rate: DecayRate,
    pub c1: f64,
    pub steps: Vec<DecayStep>,
    /// `|φ(D(v,v)) − φ(D(u,u))| ≤ bound`.
    pub bound: f64,
}

/// Chains `D(u,u) → D(2v−u, 2u−v) → D(v,v)` for `1 < u/v < 2`, giving
/// `C₁(e^{−au} + e^{−a(2v−u)})`.
pub fn real_decay_certificate(u: f64, v: f64, p: SchattenExponent, c1: f64) -> Result<DecayCertificate> {
    let rate = DecayRate::new(p)?;
    if !(u > 0.0 && v > 0.0 && u.is_finite() && v.is_finite()) {
        return input("u and v must be positive and finite");
    }
    let ratio = u / v;
    if !(ratio > 1.0 && ratio < 2.0) {
        return input(format!("u/v = {ratio} is outside (1, 2)"));
    }
    if !(c1 >= 0.0 && c1.is_finite()) {
        return input("C1 must be nonnegative and finite");
    }
    let diag_u = RealCartanLabel::new(u, u)?;
    let diag_v = RealCartanLabel::new(v, v)?;
    let middle = RealCartanLabel::new(2.0 * v - u, 2.0 * u - v)?;
    let mut steps = Vec::with_capacity(2);
    for (from, to, part) in [
        (middle, diag_u, ChainPart::FixedSPlusTwoT),
        (diag_v, middle, ChainPart::FixedTwoSPlusT),
    ] {
        if !part.applies(from, to) {
            return Err(crate::Error::Internal(format!("{} does not apply to {from} → {to}", part.name())));
        }
        let exponent = part.exponent(to);
        steps.push(DecayStep {
            from,
            to,
            part,
            exponent,
            term: c1 * (-rate.a * exponent).exp(),
        });
    }
    let bound = steps.iter().map(|s| s.term).sum();
    Ok(DecayCertificate {
        u,
        v,
        rate,
        c1,
        steps,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(p: f64) -> SchattenExponent {
        SchattenExponent::new(p).unwrap()
    }

    #[test]
    fn p8_example() {
        let c = real_decay_certificate(6.0, 4.0, sp(8.0), 1.0).unwrap();
        assert_eq!(c.rate.a, 0.25);
        let expected = (-1.5f64).exp() + (-0.5f64).exp();
        assert!((c.bound - expected).abs() < 1e-15);
        assert!((c.bound - 0.8297).abs() < 1e-4);
        assert_eq!(c.steps[0].from, RealCartanLabel::new(2.0, 8.0).unwrap());
        assert_eq!(c.steps[0].to, RealCartanLabel::new(6.0, 6.0).unwrap());
        assert_eq!(c.steps[1].from, RealCartanLabel::new(4.0, 4.0).unwrap());
        assert_eq!(c.steps[1].part, ChainPart::FixedTwoSPlusT);
        let scaled = real_decay_certificate(6.0, 4.0, sp(8.0), 3.0).unwrap();
        assert!((scaled.bound - 3.0 * c.bound).abs() < 1e-14);
    }

    #[test]
    fn decays_along_rays() {
        let bounds: Vec<f64> = [1.0, 10.0, 100.0]
            .iter()
            .map(|&v| real_decay_certificate(1.5 * v, v, sp(6.0), 1.0).unwrap().bound)
            .collect();
        assert!(bounds[0] > bounds[1] && bounds[1] > bounds[2]);
        assert!(bounds[2] < 1e-3);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(real_decay_certificate(6.0, 4.0, sp(4.0), 1.0).is_err());
        assert!(real_decay_certificate(4.0, 4.0, sp(8.0), 1.0).is_err());
        assert!(real_decay_certificate(8.0, 4.0, sp(8.0), 1.0).is_err());
        assert!(real_decay_certificate(6.0, -4.0, sp(8.0), 1.0).is_err());
        assert!(RealCartanLabel::new(-1.0, 0.0).is_err());
        let r = DecayRate::new(sp(8.0)).unwrap();
        assert!(r.with_eps(0.1).is_ok());
        assert!(r.with_eps(0.25).is_err());
    }

    #[test]
    fn chain_hypotheses_hold_across_the_range() {
        for k in 1..100 {
            let ratio = 1.0 + k as f64 / 100.0;
            assert!(real_decay_certificate(ratio * 3.0, 3.0, sp(5.0), 1.0).is_ok());
        }
    }
}
