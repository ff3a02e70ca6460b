//! Each growth law checked over a window of levels.

use iwasawa::iwasawa_ring::IntPoly;
use iwasawa::module_theory::{structure_annihilator_report, verify_estimate, CMStructure, Law, ModulePresentation};
use iwasawa::padic_linalg::PAdicContext;

fn main() -> iwasawa::Result<()> {
    let p = 3;
    let ctx = PAdicContext::new(p, 20, 4)?;
    let poly = |s: &str, r| IntPoly::parse(s, r, p);

    let cases = [
        (ModulePresentation::p_cyclic(2, 1, p)?, Law::Elementary, 2),
        (ModulePresentation::cyclic(poly("T1^2 + p", 1)?, 1, p)?, Law::Elementary, 3),
        (ModulePresentation::cyclic(poly("p*T1", 1)?, 1, p)?, Law::General, 3),
        (ModulePresentation::koszul(2, vec![poly("T1", 2)?, poly("T2", 2)?], p)?, Law::PseudoNullHomology, 2),
        (ModulePresentation::cyclic(poly("T1 - p", 1)?, 2, p)?, Law::TechLemma, 3),
    ];
    for (module, law, m_max) in &cases {
        let rep = verify_estimate(module, *law, 0..=*m_max, &ctx)?;
        println!(
            "{:<22} {:<12} constant {:<4} bound {:<6.3} pass {}",
            law.name(),
            module.provenance().tag(),
            rep.constant,
            rep.bound,
            rep.pass
        );
    }

    let free = ModulePresentation::free(1, 1, p)?;
    let s = CMStructure::whole_module(0, vec![1], &free)?;
    let rep = structure_annihilator_report(&free, &s, 0..=3, &ctx)?;
    println!("structure-lemma residuals {:?} pass {}", rep.residuals, rep.pass);
    Ok(())
}
