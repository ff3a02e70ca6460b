//! X / X(Γ_n) by saturation, and the invariants of its H-coinvariant levels.

use iwasawa::iwasawa_ring::{IntPoly, RingAutomorphism};
use iwasawa::module_theory::{ModulePresentation, PolyMatrix};
use iwasawa::padic_linalg::PAdicContext;
use iwasawa::tower_sim::{x_gamma_quotient, x_gamma_quotient_levels, SemidirectModule};

fn main() -> iwasawa::Result<()> {
    let p = 3;
    let ctx = PAdicContext::new(p, 20, 4)?;
    let x = SemidirectModule::new(
        ModulePresentation::free(1, 1, p)?,
        RingAutomorphism::scalar(1, 4, p)?,
        PolyMatrix::from_rows(1, vec![vec![IntPoly::one(1)]])?,
    )?;
    for m in 0..=3 {
        println!("(X/X(Γ_0))_H{m} = {}", x_gamma_quotient(&x, 0, m, &ctx)?);
    }
    let rep = x_gamma_quotient_levels(&x, 1, 0..=3, &ctx)?;
    println!("n = 1: mu {} rank {} residuals {:?}", rep.mu, rep.lambda_rank, rep.report.residuals);
    Ok(())
}
