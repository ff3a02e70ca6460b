//! Weierstrass preparation and the characteristic ideal of a presentation.

use iwasawa::gamma_tools::{char_ideal_square, minimal_n0, weierstrass_prepare};
use iwasawa::iwasawa_ring::{IntPoly, LambdaElement};
use iwasawa::module_theory::PolyMatrix;
use iwasawa::padic_linalg::PAdicContext;

fn main() -> iwasawa::Result<()> {
    let p = 3;
    let ctx = PAdicContext::new(p, 20, 4)?;
    let f = IntPoly::parse("9*(T1 - 3)*(1 + T1 + 3*T1^2)", 1, p)?;
    let w = weierstrass_prepare(&LambdaElement::from_poly(&ctx, &f), 8)?;
    println!("f = p^{} * ({}) * unit", w.mu, w.distinguished);
    println!("lambda {} max factor degree {}", w.lambda, w.max_factor_degree());
    println!("n0 = {}", minimal_n0(w.max_factor_degree(), p));

    let a = PolyMatrix::parse(1, p, &[vec!["T1".into(), "3".into()], vec!["0".into(), "T1 - 3".into()]])?;
    let ch = char_ideal_square(&a, &ctx)?;
    println!("char ideal generator {ch}");
    Ok(())
}
