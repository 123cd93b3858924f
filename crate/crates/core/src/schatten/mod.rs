//! Schatten classes and Schur multipliers on finite index sets.

mod matrix;

pub mod estimate;
pub mod factorization;
pub mod multiplier;
pub mod norm;
pub mod random;
pub mod svd;

pub use estimate::{
    alternate, multiplier_norm_lower, multiplier_norm_lower_from, multiplier_norm_sandwich,
    AlternationRun, LowerBoundBudget, NormWitness, Sandwich,
};
pub use factorization::{
    dual_value, factorization_cost, factorization_norm, FactorizationOptions, FactorizationReport,
};
pub use matrix::{ComplexMatrix, Partition, SchattenExponent, Symbol};
pub use multiplier::{
    amplify_symbol, block_average, embed_in_amplified, multiplier_norm_exact,
    multiplier_norm_exact_with, sample_symbol, schur_apply,
};
pub use norm::{
    norm_from_singular_values, norming_partner, schatten_norm, schatten_norm_real, trace_pairing,
    trace_pairing_weighted, weighted_embedding,
};
