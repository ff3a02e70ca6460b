//! H_m-coinvariants and the homology of a Koszul resolution.

use iwasawa::iwasawa_ring::IntPoly;
use iwasawa::module_theory::{coinvariants, homology_all, ModulePresentation};
use iwasawa::padic_linalg::PAdicContext;

fn main() -> iwasawa::Result<()> {
    let p = 3;
    let ctx = PAdicContext::new(p, 20, 4)?;
    let m = ModulePresentation::cyclic(IntPoly::parse("T1 - p", 1, p)?, 1, p)?;
    for level in 0..=3 {
        println!("(Λ_1/(T - p))_H{level} = {}", coinvariants(&m, level, &ctx)?);
    }

    let k = ModulePresentation::koszul(2, vec![IntPoly::parse("T1", 2, p)?, IntPoly::parse("p", 2, p)?], p)?;
    for level in 0..=2 {
        let hs = homology_all(&k, level, &ctx)?;
        let shown: Vec<String> = hs.iter().map(|h| h.to_string()).collect();
        println!("H_*(H_{level}, Λ_2/(T1, p)) = [{}]", shown.join(", "));
    }
    Ok(())
}
