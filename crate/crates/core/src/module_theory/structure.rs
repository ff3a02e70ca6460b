use crate::error::{Error, Result};
use crate::iwasawa_ring::{check_tau, IntPoly, LambdaElement, QuotientRing};
use crate::padic_linalg::{certified_cokernel, escalate_and_retry, FiniteZpModule, PAdicContext, ZpMatrix};

use super::invariants::expand_at;
use super::presentation::ModulePresentation;

/// One pair `(τ_i, M_i)`; `M_i` is spanned over `Λ` by `generators`, each a
/// vector of length `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructurePair {
    pub tau: Vec<u64>,
    pub generators: Vec<Vec<IntPoly>>,
}

/// A structure in the sense of Cuoco and Monsky: a base level and pairs
/// defining `A_m(S, M) = I_{H_m} M + Σ α_{i,m,m0} M_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMStructure {
    m0: u32,
    pairs: Vec<StructurePair>,
}

impl CMStructure {
    pub fn new(m0: u32, pairs: Vec<StructurePair>, p: u64) -> Result<Self> {
        for pair in &pairs {
            check_tau(p, &pair.tau)?;
        }
        Ok(CMStructure { m0, pairs })
    }

    pub fn empty(m0: u32) -> Self {
        CMStructure { m0, pairs: Vec::new() }
    }

    /// The single pair `(τ, M)` with `M` generated by its standard basis.
    pub fn whole_module(m0: u32, tau: Vec<u64>, module: &ModulePresentation) -> Result<Self> {
        let (r, b) = (module.r(), module.b());
        let generators = (0..b)
            .map(|j| (0..b).map(|k| IntPoly::constant(r, i64::from(j == k))).collect())
            .collect();
        Self::new(m0, vec![StructurePair { tau, generators }], module.p())
    }

    pub fn m0(&self) -> u32 {
        self.m0
    }

    pub fn pairs(&self) -> &[StructurePair] {
        &self.pairs
    }
}

/// Coordinates of `α_{τ,m,m0}` in `Λ̄_m`, using `τ^{p^m} = 1` there.
pub(crate) fn alpha_coords(ring: &QuotientRing, tau: &[u64], m0: u32) -> Vec<u64> {
    let ctx = ring.ctx();
    let side = ring.basis().side() as u64;
    let step = ctx.p().pow(m0);
    let count = side / step;
    let mut acc = vec![0u64; ring.dim()];
    for j in 0..count {
        let exps: Vec<u64> = tau.iter().map(|&a| (a % side) * j * step % side).collect();
        let g = ring.reduce(&LambdaElement::group_element(ctx, &exps));
        for (x, y) in acc.iter_mut().zip(g) {
            *x = ctx.add(*x, y);
        }
    }
    acc
}

pub(crate) fn relations_at(module: &ModulePresentation, s: &CMStructure, m: u32, ctx: &PAdicContext) -> Result<ZpMatrix> {
    let ring = QuotientRing::shared(ctx, module.r(), m)?;
    let b = module.b();
    let dim = ring.dim();
    let mut rel = expand_at(module.matrix(), ctx, m)?;
    for pair in &s.pairs {
        let alpha = alpha_coords(&ring, &pair.tau, s.m0);
        for g in &pair.generators {
            if g.len() != b {
                return Err(Error::DimensionMismatch(format!(
                    "structure generator of length {} for a module with {b} generators",
                    g.len()
                )));
            }
            let mut block = ZpMatrix::zeros(ctx, 0, dim);
            for gj in g {
                let coords = ring.mul(&alpha, &ring.reduce_poly(gj));
                block = block.vconcat(&ring.multiplication_matrix_of(&coords))?;
            }
            rel = rel.hconcat(&block)?;
        }
    }
    ctx.check_dimension(rel.cols())?;
    Ok(rel)
}

/// Structure of `M / A_m(S, M)`, computed inside `M_{H_m}`.
pub fn structure_quotient(
    module: &ModulePresentation,
    s: &CMStructure,
    m: u32,
    ctx: &PAdicContext,
) -> Result<FiniteZpModule> {
    module.check_context(ctx)?;
    if m < s.m0 {
        return Err(Error::LevelBelowBase { level: m, base: s.m0 });
    }
    let compute = |k: &PAdicContext| certified_cokernel(k, &|k2| relations_at(module, s, m, k2));
    Ok(escalate_and_retry(ctx, compute)?.value)
}
