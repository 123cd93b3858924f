//! Lower bounds on `‖f̌‖_{MS^p}` for `K`-biinvariant `f`, from pairs of
//! neighbouring polygons: an admissible pair `(λ, i)` with governing break
//! `m` forces `‖f̌‖_{MS^p} ≥ q^{εm} |f(λ) − f(λ + e_i)| / 2`.

use super::{IncrementRule, Polygon};
use crate::error::{input, Result};
use crate::residue::{is_prime, EpsilonRate};
use crate::schatten::SchattenExponent;
use crate::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateEntry {
    pub polygon: Polygon,
    pub index: usize,
    pub rule: IncrementRule,
    /// Governing break.
    pub m: i64,
    /// `f(λ)`.
    pub u: Complex64,
    /// `f(λ + e_i)`.
    pub v: Complex64,
    /// Polygon at which `v` was read.
    pub v_polygon: Polygon,
    /// `q^{εm} |u − v| / 2`.
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedPair {
    pub polygon: Polygon,
    pub index: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub q: u64,
    pub n: usize,
    pub p: SchattenExponent,
    pub eps: f64,
    pub entries: Vec<CertificateEntry>,
    pub skipped: Vec<SkippedPair>,
    /// Largest contribution, zero when no pair is admissible.
    pub bound: f64,
}

/// Certificate for the pairs `(λ, i)`. Pairs where neither rule applies, or
/// where `f` is not given at `λ` or `λ + e_i`, are skipped with a reason.
/// When both rules apply the larger governing break is used.
pub fn obstruction_certificate(
    q: u64,
    n: usize,
    p: SchattenExponent,
    f: &dyn Fn(&Polygon) -> Option<Complex64>,
    pairs: &[(Polygon, usize)],
) -> Result<Certificate> {
    if !is_prime(q) {
        return input(format!("q = {q} is not prime"));
    }
    let n32 = u32::try_from(n).map_err(|_| crate::Error::Input("n is too large".into()))?;
    let eps = EpsilonRate::new(n32, p)?.eps;
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for (lambda, i) in pairs {
        let skip = |reason: String| SkippedPair {
            polygon: lambda.clone(),
            index: *i,
            reason,
        };
        let mut reasons = Vec::new();
        let mut best: Option<(IncrementRule, i64)> = None;
        for rule in [IncrementRule::Direct, IncrementRule::Reflected] {
            match rule.governing_break(lambda, *i, n) {
                Ok(m) if best.is_none_or(|(_, b)| m > b) => best = Some((rule, m)),
                Ok(_) => {}
                Err(e) => reasons.push(format!("{rule}: {e}")),
            }
        }
        let Some((rule, m)) = best else {
            skipped.push(skip(reasons.join("; ")));
            continue;
        };
        let v_polygon = lambda.incremented(*i);
        let (Some(u), Some(v)) = (f(lambda), f(&v_polygon)) else {
            skipped.push(skip("f is not given on both polygons".into()));
            continue;
        };
        let contribution = (q as f64).powf(eps * m as f64) * (u - v).norm() / 2.0;
        entries.push(CertificateEntry {
            polygon: lambda.clone(),
            index: *i,
            rule,
            m,
            u,
            v,
            v_polygon,
            contribution,
        });
    }
    let bound = entries.iter().map(|e| e.contribution).fold(0.0, f64::max);
    Ok(Certificate {
        q,
        n,
        p,
        eps,
        entries,
        skipped,
        bound,
    })
}
