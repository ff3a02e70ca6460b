use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::iwasawa_ring::QuotientRing;
use crate::module_theory::{InvariantReport, LevelRecord};
use crate::padic_linalg::{
    cokernel_structure, escalate_and_retry, independent_columns_mod_prime, module_from_smith, rank_mod_prime,
    smith_normal_form, FiniteZpModule, PAdicContext, RankWitness, ZpMatrix,
};

use super::diagonal::fit_growth_model;
use super::semidirect::SemidirectModule;

/// Safety cap on closure rounds; a finite module saturates long before.
pub const SATURATION_CAP: usize = 64;

/// Zp-basis of the column span of `w`, from its Smith form.
fn compress(w: &ZpMatrix) -> ZpMatrix {
    let ctx = *w.ctx();
    if w.cols() == 0 {
        return w.clone();
    }
    let snf = smith_normal_form(w, true);
    let u_inv = &snf.transforms.as_ref().expect("requested").left_inv;
    let columns: Vec<Vec<u64>> = snf
        .valuations
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.finite().map(|v| (i, v)))
        .map(|(i, v)| {
            let scale = ctx.p_power(v);
            u_inv.column(i).into_iter().map(|x| ctx.mul(x, scale)).collect()
        })
        .collect();
    ZpMatrix::from_columns(&ctx, w.rows(), &columns)
}

fn images(w: &ZpMatrix, ops: &[ZpMatrix]) -> Result<ZpMatrix> {
    let mut out = w.clone();
    for op in ops {
        out = out.hconcat(&op.mul(w)?)?;
    }
    Ok(out)
}

/// Operators the saturated submodule must be stable under: every `T_i` on
/// each generator block, then `γ`.
fn operators(x: &SemidirectModule, m: u32, ctx: &PAdicContext) -> Result<(ZpMatrix, Vec<ZpMatrix>)> {
    let ring = QuotientRing::shared(ctx, x.r(), m)?;
    let g = x.gamma_matrix(m, ctx)?;
    let mut ops = Vec::with_capacity(x.r() + 1);
    for i in 0..x.r() {
        let t = ring.multiplication_matrix(&crate::iwasawa_ring::LambdaElement::variable(ctx, x.r(), i))?;
        let mut block = ZpMatrix::zeros(ctx, 0, 0);
        for _ in 0..x.base().b() {
            block = block.direct_sum(&t);
        }
        ops.push(block);
    }
    ops.push(g.clone());
    Ok((g, ops))
}

fn shadow_saturation_rank(x: &SemidirectModule, n: u32, m: u32, ctx: &PAdicContext, cap: usize) -> Result<RankWitness> {
    let mut best = 0;
    for k in ctx.shadows() {
        let (g, ops) = operators(x, m, &k)?;
        let a = x.relations(m, &k)?;
        let mut w = g.pow(k.p().pow(n)).minus_identity();
        let mut rank = rank_mod_prime(&a.hconcat(&w)?);
        let mut rounds = 0;
        loop {
            let grown = images(&w, &ops)?;
            let keep = independent_columns_mod_prime(&grown);
            w = grown.select_columns(&keep);
            let next = rank_mod_prime(&a.hconcat(&w)?);
            if next == rank {
                break;
            }
            rank = next;
            rounds += 1;
            if rounds > cap {
                return Err(Error::SaturationDiverged { iterations: rounds });
            }
        }
        best = best.max(rank);
    }
    Ok(RankWitness { rank: best })
}

/// `(X / X(Γ_n))_{H_m}`: the quotient of `X_{H_m}` by the image of the
/// `G`-submodule generated by `(γ^{p^n} - 1) X`.
pub fn x_gamma_quotient(x: &SemidirectModule, n: u32, m: u32, ctx: &PAdicContext) -> Result<FiniteZpModule> {
    x_gamma_quotient_with_cap(x, n, m, ctx, SATURATION_CAP)
}

pub fn x_gamma_quotient_with_cap(
    x: &SemidirectModule,
    n: u32,
    m: u32,
    ctx: &PAdicContext,
    cap: usize,
) -> Result<FiniteZpModule> {
    let compute = |k: &PAdicContext| -> Result<FiniteZpModule> {
        x.gamma_on_coinvariants(m, k)?;
        let (g, ops) = operators(x, m, k)?;
        let a = x.relations(m, k)?;
        let mut w = compress(&g.pow(k.p().pow(n)).minus_identity());
        let mut current = cokernel_structure(&a.hconcat(&w)?);
        let mut rounds = 0;
        loop {
            w = compress(&images(&w, &ops)?);
            let next = cokernel_structure(&a.hconcat(&w)?);
            if next == current {
                break;
            }
            current = next;
            rounds += 1;
            if rounds > cap {
                return Err(Error::SaturationDiverged { iterations: rounds });
            }
        }
        let snf = smith_normal_form(&a.hconcat(&w)?, false);
        if !snf.has_indeterminate() {
            return Ok(module_from_smith(&snf, None));
        }
        let witness = shadow_saturation_rank(x, n, m, k, cap)?;
        Ok(module_from_smith(&snf, Some(witness)))
    };
    Ok(escalate_and_retry(ctx, compute)?.value)
}

/// Per-level report for `X / X(Γ_n)` with the empirical `μ` and `Λ`-rank.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientLevelsReport {
    pub n: u32,
    pub mu: i64,
    pub lambda_rank: i64,
    /// `constant` is `mu`; residuals are
    /// `(e - μ p^{rm} - rank m p^{(r-1)m}) / p^{(r-1)m}`.
    pub report: InvariantReport,
}

pub fn x_gamma_quotient_levels(
    x: &SemidirectModule,
    n: u32,
    m_range: RangeInclusive<u32>,
    ctx: &PAdicContext,
) -> Result<QuotientLevelsReport> {
    let levels: Vec<u32> = m_range.collect();
    let modules = levels
        .par_iter()
        .map(|&m| x_gamma_quotient(x, n, m, ctx))
        .collect::<Result<Vec<_>>>()?;
    let (p, r) = (x.p(), x.r() as i32);
    let es: Vec<f64> = modules.iter().map(|h| h.e() as f64).collect();
    let model = fit_growth_model(&levels, &es, p, r as usize);
    let mu = model.coefficients[0].round() as i64;
    let lambda_rank = model.coefficients[1].round() as i64;
    let pf = p as f64;
    let residuals = levels
        .iter()
        .zip(&es)
        .map(|(&m, &e)| {
            let mf = m as f64;
            let lead = mu as f64 * pf.powf(r as f64 * mf) + lambda_rank as f64 * mf * pf.powf((r - 1) as f64 * mf);
            (e - lead) / pf.powf((r - 1) as f64 * mf)
        })
        .collect();
    let records = levels.iter().zip(&modules).map(|(&m, h)| LevelRecord::from_module(m, h)).collect();
    Ok(QuotientLevelsReport {
        n,
        mu,
        lambda_rank,
        report: InvariantReport::assemble("weak-bound".into(), records, mu as f64, residuals, false),
    })
}
