//! Synthetic `Zp^r ⋊ Zp` towers: modules over `Λ_r` with a semilinear
//! `γ`-action, the `e_{n,m}` grid and growth fits along the diagonal.

mod diagonal;
mod grid;
mod lei;
mod quotient_levels;
mod semidirect;

pub use diagonal::{diagonal_fit, fit_growth_model, GrowthFit, GrowthModel};
pub use grid::{sweep, sweep_diagonal, TowerRecord, TowerTable};
pub use lei::{lei_rank_bound_check, LeiReport};
pub use quotient_levels::{
    x_gamma_quotient, x_gamma_quotient_levels, x_gamma_quotient_with_cap, QuotientLevelsReport, SATURATION_CAP,
};
pub use semidirect::{g_coinvariants, g_coinvariants_best_effort, gamma_on_coinvariants, SemidirectModule};
