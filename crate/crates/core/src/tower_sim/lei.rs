use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::module_theory::{relations_at, tail_stable, CMStructure};
use crate::padic_linalg::{certified_cokernel, escalate_and_retry, PAdicContext};

use super::grid::TowerRecord;
use super::semidirect::SemidirectModule;

#[derive(Clone, Debug, PartialEq)]
pub struct LeiReport {
    /// Structure of `(X / A_m(S, X))_{Γ_n}` per cell.
    pub cells: Vec<TowerRecord>,
    /// `(m, max_n rank / p^{(r-1)m})`.
    pub ratios: Vec<(u32, f64)>,
    /// Smallest `C` with `rank <= C p^{(r-1)m}` on the window.
    pub constant: f64,
    pub tail_stable: bool,
    pub certified: bool,
    pub pass: bool,
}

/// Ranks of the structure quotients over the grid against
/// `rank_Zp <= C p^{(r-1)m}`.
pub fn lei_rank_bound_check(
    x: &SemidirectModule,
    s: &CMStructure,
    n_range: RangeInclusive<u32>,
    m_range: RangeInclusive<u32>,
    ctx: &PAdicContext,
) -> Result<LeiReport> {
    if *m_range.start() < s.m0() {
        return Err(Error::LevelBelowBase {
            level: *m_range.start(),
            base: s.m0(),
        });
    }
    let cells: Vec<(u32, u32)> = n_range
        .flat_map(|n| m_range.clone().map(move |m| (n, m)))
        .collect();
    let records = cells
        .par_iter()
        .map(|&(n, m)| {
            let compute = |k: &PAdicContext| {
                x.gamma_on_coinvariants(m, k)?;
                certified_cokernel(k, &|c| {
                    let g = x.gamma_matrix(m, c)?;
                    let action = g.pow(c.p().pow(n)).minus_identity();
                    relations_at(x.base(), s, m, c)?.hconcat(&action)
                })
            };
            let h = escalate_and_retry(ctx, compute)?.value;
            Ok(TowerRecord::from_module(n, m, &h))
        })
        .collect::<Result<Vec<_>>>()?;
    let low = |m: u32| (x.p() as f64).powf(((x.r() - 1) * m as usize) as f64);
    let ratios: Vec<(u32, f64)> = m_range
        .map(|m| {
            let worst = records
                .iter()
                .filter(|c| c.m == m)
                .map(|c| c.rank as f64 / low(m))
                .fold(0.0, f64::max);
            (m, worst)
        })
        .collect();
    let values: Vec<f64> = ratios.iter().map(|&(_, v)| v).collect();
    let constant = values.iter().fold(0.0, |a: f64, &b| a.max(b));
    let stable = tail_stable(&values);
    let certified = records.iter().all(|c| c.certified);
    Ok(LeiReport {
        cells: records,
        ratios,
        constant,
        tail_stable: stable,
        certified,
        pass: certified && stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module_theory::ModulePresentation;

    fn ctx() -> PAdicContext {
        PAdicContext::new(3, 20, 4).unwrap()
    }

    #[test]
    fn empty_structure_on_free_module_is_degenerate() {
        let x = SemidirectModule::direct_product(ModulePresentation::free(1, 1, 3).unwrap()).unwrap();
        let rep = lei_rank_bound_check(&x, &CMStructure::empty(0), 0..=1, 0..=3, &ctx()).unwrap();
        assert_eq!(rep.constant, 27.0);
        assert!(!rep.pass);
    }

    #[test]
    fn scalar_module_has_rank_zero() {
        let base = ModulePresentation::p_cyclic(2, 1, 3).unwrap();
        let s = CMStructure::whole_module(0, vec![1, 0], &base).unwrap();
        let x = SemidirectModule::direct_product(base).unwrap();
        let rep = lei_rank_bound_check(&x, &s, 0..=1, 0..=2, &ctx()).unwrap();
        assert_eq!(rep.constant, 0.0);
        assert!(rep.pass);
    }
}
