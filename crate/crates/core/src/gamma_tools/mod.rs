//! One-variable tools: Weierstrass preparation, characteristic ideals,
//! `Zp[[Γ]]`-modules and Iwasawa-constant fitting.

mod char_ideal;
mod fit;
mod gamma_module;
mod weierstrass;

pub use char_ideal::{char_ideal_square, determinant};
pub use fit::{iwasawa_fit, IwasawaFit, MIN_FIT_LENGTH};
pub use gamma_module::{gamma_coinvariants, gamma_estimate_check, GammaEstimateReport, GammaEstimateRow, ZpGammaModule};
pub use weierstrass::{minimal_n0, weierstrass_prepare, WeierstrassData};
