use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::iwasawa_ring::{IntPoly, LambdaElement};
use crate::module_theory::PolyMatrix;
use crate::padic_linalg::{certified_cokernel, escalate_and_retry, FiniteZpModule, PAdicContext, ZpMatrix};

use super::char_ideal::char_ideal_square;
use super::weierstrass::{minimal_n0, weierstrass_prepare};

/// `Zp^k ⊕ ⊕_i Z/p^{a_i}` with a generator `γ` of `Γ ≅ Zp` acting through an
/// integer matrix on the standard generators.
///
/// `γ - 1` must be nilpotent modulo `p`, so `γ` is topologically unipotent
/// and the action extends to `Zp[[Γ]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZpGammaModule {
    k: usize,
    torsion_exponents: Vec<u32>,
    gamma: Vec<Vec<i64>>,
}

fn valuation_i64(x: i64, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut x = x.unsigned_abs();
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    Some(v)
}

impl ZpGammaModule {
    pub fn new(k: usize, torsion_exponents: Vec<u32>, gamma: Vec<Vec<i64>>, p: u64) -> Result<Self> {
        let n = k + torsion_exponents.len();
        if gamma.len() != n || gamma.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidGammaModule(format!("gamma must be {n}x{n}")));
        }
        if torsion_exponents.contains(&0) {
            return Err(Error::InvalidGammaModule("torsion exponents must be positive".into()));
        }
        for (i, &a) in torsion_exponents.iter().enumerate() {
            let j = k + i;
            // γ(e_j) must be torsion and killed by p^{a}.
            for (l, row) in gamma.iter().enumerate() {
                let bad = if l < k {
                    row[j] != 0
                } else {
                    let target = torsion_exponents[l - k];
                    valuation_i64(row[j], p).is_some_and(|v| v + a < target)
                };
                if bad {
                    return Err(Error::InvalidGammaModule(format!(
                        "gamma[{l}][{j}] = {} does not respect the relation p^{a}",
                        row[j]
                    )));
                }
            }
        }
        // nilpotence of γ - 1 mod p
        let pm = p as i64;
        let mut nil: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| (gamma[i][j] - i64::from(i == j)).rem_euclid(pm)).collect())
            .collect();
        let base = nil.clone();
        for _ in 0..n {
            nil = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|t| nil[i][t] * base[t][j] % pm).sum::<i64>() % pm)
                        .collect()
                })
                .collect();
        }
        if n > 0 && nil.iter().flatten().any(|&x| x != 0) {
            return Err(Error::NotUnipotent);
        }
        Ok(ZpGammaModule {
            k,
            torsion_exponents,
            gamma,
        })
    }

    pub fn free_rank(&self) -> usize {
        self.k
    }

    pub fn torsion_exponents(&self) -> &[u32] {
        &self.torsion_exponents
    }

    pub fn gamma(&self) -> &[Vec<i64>] {
        &self.gamma
    }

    fn dim(&self) -> usize {
        self.k + self.torsion_exponents.len()
    }

    /// The torsion submodule `M(p)` with the restricted action.
    pub fn torsion_submodule(&self) -> ZpGammaModule {
        let gamma = self.gamma[self.k..].iter().map(|row| row[self.k..].to_vec()).collect();
        ZpGammaModule {
            k: 0,
            torsion_exponents: self.torsion_exponents.clone(),
            gamma,
        }
    }

    /// `T I - (γ - 1)` on the free quotient `M / M(p)`, as a `Λ_1`-matrix.
    pub fn free_quotient_presentation(&self) -> PolyMatrix {
        let mut a = PolyMatrix::zeros(1, self.k, self.k);
        for i in 0..self.k {
            for j in 0..self.k {
                let mut entry = IntPoly::constant(1, -(self.gamma[i][j] - i64::from(i == j)));
                if i == j {
                    entry = entry.add(&IntPoly::variable(1, 0));
                }
                a.set(i, j, entry);
            }
        }
        a
    }

    /// `[γ^{p^n} - 1 | relations]`, whose cokernel is `M_{Γ_n}`.
    fn coinvariant_matrix(&self, n: u32, ctx: &PAdicContext) -> Result<ZpMatrix> {
        let g = ZpMatrix::from_i64_rows(ctx, &self.gamma)?;
        let action = g.pow(ctx.p().pow(n)).minus_identity();
        let dim = self.dim();
        let relations = ZpMatrix::from_fn(ctx, dim, self.torsion_exponents.len(), |i, j| {
            if i == self.k + j {
                ctx.p_power(self.torsion_exponents[j])
            } else {
                0
            }
        });
        action.hconcat(&relations)
    }
}

/// `M_{Γ_n} = M / (γ^{p^n} - 1) M`.
pub fn gamma_coinvariants(module: &ZpGammaModule, n: u32, ctx: &PAdicContext) -> Result<FiniteZpModule> {
    let out = escalate_and_retry(ctx, |k| certified_cokernel(k, &|c| module.coinvariant_matrix(n, c)))?;
    Ok(out.value)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaEstimateRow {
    pub n: u32,
    pub e: u64,
    pub e_torsion: u64,
    /// `e(M_{Γ_n}) - e(M_{Γ_{n0}})`.
    pub lhs: i64,
    /// `rank(M)(n - n0) + e(M(p)_{Γ_n}) - e(M(p)_{Γ_{n0}})`.
    pub rhs: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaEstimateReport {
    pub char_poly: LambdaElement,
    pub lambda: usize,
    pub max_factor_degree: usize,
    pub n0: u32,
    pub rows: Vec<GammaEstimateRow>,
    pub holds: bool,
}

/// Checks the exact growth identity for `e(M_{Γ_n})`, `n >= n0`, where `n0`
/// is derived from the degrees of the distinguished factors of the
/// characteristic polynomial of `γ - 1` on the free part.
pub fn gamma_estimate_check(
    module: &ZpGammaModule,
    n_range: RangeInclusive<u32>,
    ctx: &PAdicContext,
) -> Result<GammaEstimateReport> {
    let (char_poly, lambda, d) = if module.k == 0 {
        (LambdaElement::one(ctx, 1), 0, 0)
    } else {
        let f = char_ideal_square(&module.free_quotient_presentation(), ctx)?;
        let w = weierstrass_prepare(&f, f.degree_in(0) as usize + 1)?;
        (f, w.lambda, w.max_factor_degree())
    };
    let n0 = minimal_n0(d, ctx.p());
    let levels: Vec<u32> = n_range.filter(|&n| n >= n0).collect();
    if levels.is_empty() {
        return Err(Error::InvalidInput(format!("no level in the range reaches n0 = {n0}")));
    }
    let torsion = module.torsion_submodule();
    let level = |n: u32| -> Result<(u64, u64)> {
        let whole = gamma_coinvariants(module, n, ctx)?;
        if whole.free_rank() > 0 && n >= 1 {
            return Err(Error::HypothesisFailed(format!("M_Gamma_{n} is infinite")));
        }
        Ok((whole.e(), gamma_coinvariants(&torsion, n, ctx)?.e()))
    };
    let (base, base_t) = level(n0)?;
    let mut rows = Vec::with_capacity(levels.len());
    for n in levels {
        let (e, e_torsion) = level(n)?;
        rows.push(GammaEstimateRow {
            n,
            e,
            e_torsion,
            lhs: e as i64 - base as i64,
            rhs: (module.k as i64) * (n as i64 - n0 as i64) + e_torsion as i64 - base_t as i64,
        });
    }
    let holds = rows.iter().all(|r| r.lhs == r.rhs);
    Ok(GammaEstimateReport {
        char_poly,
        lambda,
        max_factor_degree: d,
        n0,
        rows,
        holds,
    })
}
