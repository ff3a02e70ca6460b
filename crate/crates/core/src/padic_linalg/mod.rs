//! Linear algebra over `Zp` at capped absolute precision.

mod context;
mod escalate;
mod homology;
mod matrix;
mod smith;
mod structure;

pub use context::{
    bigint_valuation, is_prime, precision_limit, PAdicContext, DEFAULT_GUARD, DEFAULT_MATRIX_CEILING,
    DEFAULT_PRECISION,
};
pub use escalate::{escalate_and_retry, escalate_best_effort, Certified, Escalated};
pub use homology::{certified_homology, homology_structure};
pub use matrix::ZpMatrix;
pub use smith::{smith_normal_form, DivisorValuation, SmithForm, SmithTransforms};
pub use structure::{
    certified_cokernel, cokernel_structure, cokernel_structure_with_witness, shadow_rank, FiniteZpModule, RankWitness,
};

pub(crate) use smith::{independent_columns_mod_prime, rank_mod_prime};
pub(crate) use structure::module_from_smith;
