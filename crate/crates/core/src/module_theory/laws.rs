use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::padic_linalg::{FiniteZpModule, PAdicContext};

use super::invariants::{coinvariants, homology_all};
use super::mu::{mu_estimate, mu_exact};
use super::presentation::{ModulePresentation, Provenance};
use super::structure::{structure_quotient, CMStructure};

/// Growth laws that [`verify_estimate`] can check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Law {
    /// `rank_Zp(M_{H_m}) = O(p^{(r-2)m})` for pseudo-null `M`.
    PseudoNullRank,
    /// `e(H_i(H_m, M)) = O(m p^{(r-1)m})` for pseudo-null `M`, all `i`.
    PseudoNullHomology,
    /// `e(M_{H_m}) = δ_{f,p} s p^{rm} + O(m p^{(r-1)m})` for `M = Λ/(f^s)`.
    Elementary,
    /// `e(M_{H_m}) = μ_H(M) p^{rm} + O(m p^{(r-1)m})`.
    General,
    /// `p^{rm + c}` kills the torsion of every `H_i(H_m, M)`.
    TechLemma,
}

impl Law {
    pub const ALL: [Law; 5] = [
        Law::PseudoNullRank,
        Law::PseudoNullHomology,
        Law::Elementary,
        Law::General,
        Law::TechLemma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::PseudoNullRank => "pseudo-null-rank",
            Law::PseudoNullHomology => "pseudo-null-homology",
            Law::Elementary => "elementary",
            Law::General => "general",
            Law::TechLemma => "tech-lemma",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Law {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Law::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown law '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelRecord {
    pub m: u32,
    pub e: u64,
    pub rank: usize,
    pub max_exponent: u32,
    pub certified: bool,
}

impl LevelRecord {
    pub fn from_module(m: u32, h: &FiniteZpModule) -> Self {
        LevelRecord {
            m,
            e: h.e(),
            rank: h.rank(),
            max_exponent: h.max_exponent(),
            certified: h.certified(),
        }
    }
}

/// Per-level data and residuals for one law.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantReport {
    pub law: String,
    pub records: Vec<LevelRecord>,
    /// Leading constant of the law (`μ`, `δ s`, or 0).
    pub constant: f64,
    /// `(q_m - c g(m)) / h(m)` per level.
    pub residuals: Vec<f64>,
    /// Smallest constant bounding `|residual|` on the window.
    pub bound: f64,
    /// The second half of the window stays within the maximum of the first.
    pub tail_stable: bool,
    pub pass: bool,
}

impl InvariantReport {
    pub(crate) fn assemble(law: String, records: Vec<LevelRecord>, constant: f64, residuals: Vec<f64>, strict: bool) -> Self {
        let finite = residuals.iter().all(|x| x.is_finite());
        let bound = residuals.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        let tail_stable = tail_stable(&residuals);
        let certified = records.iter().all(|r| r.certified);
        let pass = certified && finite && (!strict || tail_stable);
        InvariantReport {
            law,
            records,
            constant,
            residuals,
            bound,
            tail_stable,
            pass,
        }
    }
}

/// Max of the second half of `xs` is at most the max of the first half
/// (with a small absolute slack for floating point).
pub fn tail_stable(xs: &[f64]) -> bool {
    if xs.len() < 2 {
        return true;
    }
    let half = xs.len() / 2;
    let head = xs[..half].iter().fold(f64::NEG_INFINITY, |a, &x| a.max(x));
    let tail = xs[half..].iter().fold(f64::NEG_INFINITY, |a, &x| a.max(x));
    tail <= head + 1e-9
}

fn m_factor(m: u32) -> f64 {
    m.max(1) as f64
}

fn power(p: u64, exp: f64) -> f64 {
    (p as f64).powf(exp)
}

fn leading_constant(module: &ModulePresentation, law: Law, range: &RangeInclusive<u32>, ctx: &PAdicContext) -> Result<f64> {
    match law {
        Law::Elementary => match module.provenance() {
            Provenance::Cyclic { f, s } => {
                let k = f.p_content(module.p()).unwrap_or(0);
                Ok((k * s) as f64)
            }
            Provenance::PCyclic { a } => Ok(*a as f64),
            other => Err(Error::LawNotApplicable(format!(
                "elementary estimate needs a cyclic module, got {}",
                other.tag()
            ))),
        },
        Law::General => match mu_exact(module) {
            Some(mu) => Ok(mu as f64),
            None => Ok(mu_estimate(module, (*range.end()).max(1), ctx)?.estimate as f64),
        },
        _ => Ok(0.0),
    }
}

/// Checks one growth law over `m_range`.
pub fn verify_estimate(
    module: &ModulePresentation,
    law: Law,
    m_range: RangeInclusive<u32>,
    ctx: &PAdicContext,
) -> Result<InvariantReport> {
    if matches!(law, Law::PseudoNullRank | Law::PseudoNullHomology) && !module.provenance().is_pseudo_null() {
        return Err(Error::LawNotApplicable(format!(
            "{law} needs a pseudo-null module (Koszul on at least two elements), got {}",
            module.provenance().tag()
        )));
    }
    let c = leading_constant(module, law, &m_range, ctx)?;
    let p = module.p();
    let r = module.r() as f64;
    let levels: Vec<u32> = m_range.collect();
    let rows = levels
        .par_iter()
        .map(|&m| -> Result<(LevelRecord, f64)> {
            let mf = m as f64;
            match law {
                Law::PseudoNullRank => {
                    let h = coinvariants(module, m, ctx)?;
                    Ok((LevelRecord::from_module(m, &h), h.rank() as f64 / power(p, (r - 2.0) * mf)))
                }
                Law::Elementary | Law::General => {
                    let h = coinvariants(module, m, ctx)?;
                    let q = h.e() as f64 - c * power(p, r * mf);
                    Ok((LevelRecord::from_module(m, &h), q / (m_factor(m) * power(p, (r - 1.0) * mf))))
                }
                Law::PseudoNullHomology | Law::TechLemma => {
                    let hs = homology_all(module, m, ctx)?;
                    let worst = hs
                        .iter()
                        .skip(usize::from(law == Law::PseudoNullHomology))
                        .max_by_key(|h| if law == Law::TechLemma { h.max_exponent() as u64 } else { h.e() })
                        .cloned()
                        .unwrap_or_else(FiniteZpModule::zero);
                    let mut record = LevelRecord::from_module(m, &worst);
                    record.certified = hs.iter().all(FiniteZpModule::certified);
                    let residual = if law == Law::TechLemma {
                        worst.max_exponent() as f64 - r * mf
                    } else {
                        worst.e() as f64 / (m_factor(m) * power(p, (r - 1.0) * mf))
                    };
                    Ok((record, residual))
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let (records, residuals) = rows.into_iter().unzip();
    Ok(InvariantReport::assemble(
        law.name().into(),
        records,
        c,
        residuals,
        law == Law::TechLemma,
    ))
}

/// Torsion exponent of `M / A_m(S, M)` against `(r + 1) m + c`.
pub fn structure_annihilator_report(
    module: &ModulePresentation,
    s: &CMStructure,
    m_range: RangeInclusive<u32>,
    ctx: &PAdicContext,
) -> Result<InvariantReport> {
    let r = module.r() as f64;
    let levels: Vec<u32> = m_range.collect();
    let rows = levels
        .par_iter()
        .map(|&m| {
            let q = structure_quotient(module, s, m, ctx)?;
            let residual = q.max_exponent() as f64 - (r + 1.0) * m as f64;
            Ok((LevelRecord::from_module(m, &q), residual))
        })
        .collect::<Result<Vec<_>>>()?;
    let (records, residuals) = rows.into_iter().unzip();
    Ok(InvariantReport::assemble("structure-lemma".into(), records, 0.0, residuals, true))
}
