//! Ranks of structure quotients across a tower grid.

use iwasawa::module_theory::{CMStructure, ModulePresentation};
use iwasawa::padic_linalg::PAdicContext;
use iwasawa::tower_sim::{lei_rank_bound_check, SemidirectModule};

fn main() -> iwasawa::Result<()> {
    let p = 3;
    let ctx = PAdicContext::new(p, 20, 4)?;
    for base in [ModulePresentation::p_cyclic(2, 1, p)?, ModulePresentation::free(2, 1, p)?] {
        let s = CMStructure::whole_module(0, vec![1, 0], &base)?;
        let tag = base.provenance().tag();
        let x = SemidirectModule::direct_product(base)?;
        let rep = lei_rank_bound_check(&x, &s, 0..=1, 0..=2, &ctx)?;
        println!("{tag}: ratios {:?} C {} pass {}", rep.ratios, rep.constant, rep.pass);
    }
    Ok(())
}
