pub mod cli;
pub mod error;
pub mod gamma_tools;
pub mod iwasawa_ring;
pub mod module_theory;
pub mod padic_linalg;
pub mod tower_sim;

pub use error::{Error, Result};
