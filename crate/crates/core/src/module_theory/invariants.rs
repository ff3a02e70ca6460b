use crate::error::{Error, Result};
use crate::iwasawa_ring::QuotientRing;
use crate::padic_linalg::{
    certified_cokernel, certified_homology, escalate_and_retry, FiniteZpModule, PAdicContext, ZpMatrix,
};

use super::presentation::{FreeResolution, ModulePresentation, PolyMatrix};
use super::rank::generic_rank;

pub(crate) fn expand_at(matrix: &PolyMatrix, ctx: &PAdicContext, m: u32) -> Result<ZpMatrix> {
    let ring = QuotientRing::shared(ctx, matrix.r(), m)?;
    matrix.expand(&ring)
}

/// `M_{H_m}` at the precision of `ctx`; may be uncertified.
pub fn coinvariants_at(module: &ModulePresentation, m: u32, ctx: &PAdicContext) -> Result<FiniteZpModule> {
    module.check_context(ctx)?;
    let matrix = module.matrix();
    certified_cokernel(ctx, &|k| expand_at(matrix, k, m))
}

/// Structure of `M_{H_m} = M / I_{H_m} M`, escalating precision as needed.
pub fn coinvariants(module: &ModulePresentation, m: u32, ctx: &PAdicContext) -> Result<FiniteZpModule> {
    Ok(escalate_and_retry(ctx, |k| coinvariants_at(module, m, k))?.value)
}

/// The resolution used for homology: the stored one, or for a bare
/// presentation with injective matrix the length-one resolution it defines.
pub(crate) fn effective_resolution(module: &ModulePresentation, ctx: &PAdicContext) -> Result<FreeResolution> {
    if let Some(res) = module.resolution() {
        return Ok(res.clone());
    }
    if generic_rank(module.matrix(), ctx) == module.a() {
        return FreeResolution::new(vec![module.matrix().clone()]);
    }
    Err(Error::NoResolution)
}

fn homology_with(
    res: &FreeResolution,
    r: usize,
    m: u32,
    i: usize,
    ctx: &PAdicContext,
) -> Result<FiniteZpModule> {
    let rank_i = res.rank(i);
    if rank_i == 0 {
        return Ok(FiniteZpModule::zero());
    }
    let maps = res.maps();
    let build_in = |k: &PAdicContext| match maps.get(i) {
        Some(d) => expand_at(d, k, m),
        None => {
            let ring = QuotientRing::shared(k, r, m)?;
            Ok(ZpMatrix::zeros(k, rank_i * ring.dim(), 0))
        }
    };
    let build_out = |k: &PAdicContext| match i.checked_sub(1).and_then(|j| maps.get(j)) {
        Some(d) => expand_at(d, k, m),
        None => {
            let ring = QuotientRing::shared(k, r, m)?;
            Ok(ZpMatrix::zeros(k, 0, rank_i * ring.dim()))
        }
    };
    certified_homology(ctx, &build_in, &build_out)
}

/// `H_i(H_m, M)` from the resolution tensored down to `Λ̄_m`.
pub fn homology(module: &ModulePresentation, m: u32, i: usize, ctx: &PAdicContext) -> Result<FiniteZpModule> {
    module.check_context(ctx)?;
    if i > module.r() + 1 {
        return Err(Error::InvalidInput(format!(
            "homological degree {i} exceeds r + 1 = {}",
            module.r() + 1
        )));
    }
    let res = effective_resolution(module, ctx)?;
    let r = module.r();
    Ok(escalate_and_retry(ctx, |k| homology_with(&res, r, m, i, k))?.value)
}

/// All homology groups `H_0, ..., H_len` at level `m`.
pub fn homology_all(module: &ModulePresentation, m: u32, ctx: &PAdicContext) -> Result<Vec<FiniteZpModule>> {
    module.check_context(ctx)?;
    let res = effective_resolution(module, ctx)?;
    let r = module.r();
    (0..=res.length())
        .map(|i| Ok(escalate_and_retry(ctx, |k| homology_with(&res, r, m, i, k))?.value))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iwasawa_ring::IntPoly;

    fn ctx() -> PAdicContext {
        PAdicContext::new(3, 20, 4).unwrap()
    }

    #[test]
    fn free_and_scalar() {
        let c = ctx();
        let free = ModulePresentation::free(2, 1, 3).unwrap();
        let h = coinvariants(&free, 1, &c).unwrap();
        assert_eq!((h.e(), h.rank()), (0, 9));
        let torsion = ModulePresentation::p_cyclic(1, 2, 3).unwrap();
        assert_eq!(coinvariants(&torsion, 2, &c).unwrap().e(), 18);
    }

    #[test]
    fn t_minus_p() {
        let c = ctx();
        let m = ModulePresentation::cyclic(IntPoly::parse("T1 - p", 1, 3).unwrap(), 1, 3).unwrap();
        for level in 0..=3 {
            assert_eq!(coinvariants(&m, level, &c).unwrap().e(), level as u64 + 1);
            assert!(homology(&m, level, 1, &c).unwrap().is_zero());
        }
    }

    #[test]
    fn koszul_of_augmentation() {
        let c = ctx();
        let gens = vec![IntPoly::parse("T1", 2, 3).unwrap(), IntPoly::parse("T2", 2, 3).unwrap()];
        let m = ModulePresentation::koszul(2, gens, 3).unwrap();
        let hs = homology_all(&m, 1, &c).unwrap();
        let ranks: Vec<usize> = hs.iter().map(|h| h.rank()).collect();
        assert_eq!(ranks, vec![1, 2, 1]);
        assert!(hs.iter().all(|h| h.e() == 0));
    }
}
