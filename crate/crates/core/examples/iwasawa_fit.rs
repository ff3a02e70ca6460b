//! μ, λ, ν from a coinvariant exponent sequence.

use iwasawa::gamma_tools::iwasawa_fit;
use iwasawa::iwasawa_ring::IntPoly;
use iwasawa::module_theory::{coinvariants, mu_exact, ModulePresentation};
use iwasawa::padic_linalg::PAdicContext;

fn main() -> iwasawa::Result<()> {
    let p = 3;
    let ctx = PAdicContext::new(p, 24, 4)?;
    let m = ModulePresentation::cyclic(IntPoly::parse("p*(T1 - p)", 1, p)?, 1, p)?;
    let seq = (0..=5)
        .map(|level| Ok(coinvariants(&m, level, &ctx)?.e() as i64))
        .collect::<iwasawa::Result<Vec<_>>>()?;
    println!("e_m = {seq:?}");
    let fit = iwasawa_fit(&seq, p)?;
    println!(
        "mu {} lambda {} nu {} from m = {} (exact tail: {})",
        fit.mu, fit.lambda, fit.nu, fit.n_stable, fit.exact
    );
    println!("mu from the presentation: {:?}", mu_exact(&m));
    Ok(())
}
