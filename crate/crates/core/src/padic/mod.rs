//! Exact q-adic arithmetic on rational matrices, Cartan invariants in
//! `SL_{r+1}(ℚ_q)` and the polygon combinatorics built on them.
//!
//! The uniformizer is `π = q` and `e = π^{−1} = 1/q`, so `e^μ = q^{−μ}`.
//! Absolute values are never formed; everything compares integer
//! valuations.

mod cartan;
mod certificate;
mod construction;
mod matrix;
mod path;
mod polygon;

pub use cartan::{
    build_d, cartan_invariants, cartan_invariants_modular, elementary_divisor_valuations,
    random_k_element, MAX_MINOR_DIMENSION,
};
pub use certificate::{
    obstruction_certificate, Certificate, CertificateEntry, SkippedPair,
};
pub use construction::{
    build_alpha_beta, build_alpha_beta_reflected, construction_case, theta, AlphaBeta,
    ConstructionCase, ConstructionTuple, IncrementRule,
};
pub use matrix::QMatrix;
pub use path::{lambda_m_path, path_length, rule_for, PathStep};
pub use polygon::{polygon_check, random_polygon, Polygon, PolygonCheck};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub type QRational = BigRational;

/// q-adic valuation; `Infinite` is the valuation of zero and sorts last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

pub fn valuation_int(x: &BigInt, q: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let q = BigInt::from(q);
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (d, r) = num_integer::Integer::div_rem(&y, &q);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        y = d;
        v += 1;
    }
}

/// `v_q(a/b) = v_q(a) − v_q(b)`.
pub fn valuation(x: &QRational, q: u64) -> Valuation {
    match (valuation_int(x.numer(), q), valuation_int(x.denom(), q)) {
        (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a - b),
        _ => Valuation::Infinite,
    }
}

/// `q^k` as an exact rational, for any integer `k`.
pub fn q_power(q: u64, k: i64) -> QRational {
    let p = num_traits::pow(BigInt::from(q), k.unsigned_abs() as usize);
    if k >= 0 {
        QRational::from_integer(p)
    } else {
        QRational::new(BigInt::from(1), p)
    }
}

/// `e^μ = q^{−μ}`.
pub fn e_power(q: u64, mu: i64) -> QRational {
    q_power(q, -mu)
}
