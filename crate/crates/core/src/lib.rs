//! Quantitative machinery for Schur multipliers on Schatten classes.
//!
//! The crate is organised around five areas:
//!
//! * [`schatten`]: dense complex matrices, Schatten `p`-norms, Schur
//!   multipliers, the factorization (`γ₂`) norm and an alternating lower-bound
//!   estimator for the multiplier norm on `S^p`.
//! * [`residue`]: residue rings `ℤ/q^m`, their additive characters and the
//!   shifted incidence matrices `T_k` together with their closed-form norms.
//! * [`padic`]: exact `q`-adic valuations, Cartan invariants of matrices in
//!   `SL_{r+1}(ℚ_q)` read from minors, convex polygons, the block matrices that
//!   realise a unit increment of a polygon, increment schedules and the
//!   resulting obstruction certificates.
//! * [`legendre`]: Legendre polynomials, the spectral series for the
//!   difference of circle-averaging operators on the sphere and the decay
//!   certificates built from them.
//! * [`acceptance`]: the end-to-end checks shared by the test-suite and the
//!   `selftest` command.

pub mod acceptance;
pub mod error;
pub mod format;
pub mod legendre;
pub mod padic;
pub mod residue;
pub mod schatten;

pub use error::{Error, Result};
pub use nalgebra::Complex;

/// Double precision complex scalar used throughout.
pub type Complex64 = Complex<f64>;
