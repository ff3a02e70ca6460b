//! Finitely presented `Λ_r`-modules: coinvariants, homology, ranks,
//! `μ`-invariants, structures and growth-law harnesses.

mod invariants;
mod laws;
mod mu;
mod presentation;
mod rank;
mod structure;

pub use invariants::{coinvariants, coinvariants_at, homology, homology_all};
pub use laws::{structure_annihilator_report, tail_stable, verify_estimate, InvariantReport, Law, LevelRecord};
pub use mu::{mu_estimate, mu_exact, MuEstimate};
pub use presentation::{FreeResolution, ModulePresentation, PolyMatrix, Provenance};
pub use rank::{lambda_rank, RankEstimate};
pub use structure::{structure_quotient, CMStructure, StructurePair};

pub(crate) use structure::relations_at;
