//! Descent identity for Z_p[[Γ]]-modules given by an integer matrix γ.

use iwasawa::gamma_tools::{gamma_coinvariants, gamma_estimate_check, ZpGammaModule};
use iwasawa::padic_linalg::PAdicContext;

fn main() -> iwasawa::Result<()> {
    let ctx = PAdicContext::new(3, 20, 4)?;
    // Z_3^2 with γ acting as 1 + T on Λ_1/(T^2 + 3), plus Z/9 with trivial action
    let m = ZpGammaModule::new(
        2,
        vec![2],
        vec![vec![1, -3, 0], vec![1, 1, 0], vec![0, 0, 1]],
        3,
    )?;
    for n in 0..=3 {
        println!("M_Γ{n} = {}", gamma_coinvariants(&m, n, &ctx)?);
    }
    let rep = gamma_estimate_check(&m, 0..=4, &ctx)?;
    println!("char poly {} lambda {} n0 {}", rep.char_poly, rep.lambda, rep.n0);
    for row in &rep.rows {
        println!("n {} e {} lhs {} rhs {}", row.n, row.e, row.lhs, row.rhs);
    }
    println!("identity holds: {}", rep.holds);
    Ok(())
}
