//! Arithmetic in Λ_2 / (ω_m) and the substitution automorphism T ↦ (1+T)^ρ − 1.

use iwasawa::iwasawa_ring::{IntPoly, LambdaElement, QuotientRing, RingAutomorphism};
use iwasawa::padic_linalg::PAdicContext;

fn main() -> iwasawa::Result<()> {
    let ctx = PAdicContext::new(3, 20, 4)?;
    let ring = QuotientRing::new(&ctx, 2, 1)?;
    println!("Λ_2/(ω_1) has Z_3-rank {}", ring.dim());

    let f = LambdaElement::from_poly(&ctx, &IntPoly::parse("T1*T2 + 3", 2, 3)?);
    let g = LambdaElement::from_poly(&ctx, &IntPoly::parse("T1^2 - T2", 2, 3)?);
    let fg = ring.mul(&ring.reduce(&f), &ring.reduce(&g));
    println!("f*g mod ω_1 = {}", ring.element(&fg));

    let mult = ring.multiplication_matrix(&f)?;
    println!("multiplication by f: {}x{} matrix", mult.rows(), mult.cols());

    let sigma = RingAutomorphism::new(vec![vec![1, 0], vec![3, 1]], 3)?;
    let t1 = LambdaElement::variable(&ctx, 2, 0);
    // ρ ≡ I mod p, so σ is trivial on Λ_2/(ω_1); level 2 shows the twist
    for level in 1..=2 {
        let ring = QuotientRing::new(&ctx, 2, level)?;
        sigma.verify_level(&ring)?;
        println!("sigma(T1) mod ω_{level} = {}", sigma.apply(&t1, &ring)?);
    }
    Ok(())
}
