//! Polynomial arithmetic in `Λ_r = Zp[[T_1, ..., T_r]]`, the quotients
//! `Λ̄_m = Λ_r / (ω_{m,*})` and ring automorphisms induced from `H`.

mod automorphism;
mod element;
mod poly;
mod quotient;

pub use automorphism::RingAutomorphism;
pub use element::{alpha_element, LambdaElement};
pub use poly::IntPoly;
pub use quotient::{OmegaIdeal, QuotientBasis, QuotientRing};

pub(crate) use element::check_tau;

use crate::error::Result;
use crate::padic_linalg::ZpMatrix;
use std::sync::Arc;

/// Product of two elements.
pub fn multiply(f: &LambdaElement, g: &LambdaElement) -> Result<LambdaElement> {
    f.mul(g)
}

/// Coordinates of `f` modulo `ω_m` in the level-`m` quotient basis.
pub fn reduce_mod_omega(f: &LambdaElement, m: u32) -> Result<Vec<u64>> {
    Ok(QuotientRing::new(f.ctx(), f.r(), m)?.reduce(f))
}

/// Regular representation of `f` on `Λ̄_m`.
pub fn multiplication_matrix(f: &LambdaElement, m: u32) -> Result<Arc<ZpMatrix>> {
    QuotientRing::new(f.ctx(), f.r(), m)?.multiplication_matrix(f)
}

/// Image of `f` under `sigma`, computed in `Λ̄_m`.
pub fn apply_automorphism(sigma: &RingAutomorphism, f: &LambdaElement, m: u32) -> Result<LambdaElement> {
    let ring = QuotientRing::new(f.ctx(), f.r(), m)?;
    sigma.apply(f, &ring)
}

