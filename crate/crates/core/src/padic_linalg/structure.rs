use std::fmt;

use crate::error::Result;

use super::context::PAdicContext;
use super::matrix::ZpMatrix;
use super::smith::{rank_mod_prime, smith_normal_form, SmithForm};

/// Structure invariants of a finitely generated Zp-module
/// `⊕ Zp/p^{a_i} ⊕ Zp^{free_rank}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteZpModule {
    torsion_exponents: Vec<u32>,
    free_rank: usize,
    certified: bool,
}

impl FiniteZpModule {
    /// Zero exponents are dropped; the rest are sorted.
    pub fn new(mut torsion_exponents: Vec<u32>, free_rank: usize, certified: bool) -> Self {
        torsion_exponents.retain(|&a| a > 0);
        torsion_exponents.sort_unstable();
        FiniteZpModule {
            torsion_exponents,
            free_rank,
            certified,
        }
    }

    pub fn zero() -> Self {
        Self::new(Vec::new(), 0, true)
    }

    pub fn free(rank: usize) -> Self {
        Self::new(Vec::new(), rank, true)
    }

    pub fn torsion_exponents(&self) -> &[u32] {
        &self.torsion_exponents
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// `rank_Zp`.
    pub fn rank(&self) -> usize {
        self.free_rank
    }

    /// The p-exponent: `|N(p)| = p^e`.
    pub fn e(&self) -> u64 {
        self.torsion_exponents.iter().map(|&a| a as u64).sum()
    }

    pub fn certified(&self) -> bool {
        self.certified
    }

    /// Smallest `k` with `p^k` killing the torsion (0 for torsion-free modules).
    pub fn max_exponent(&self) -> u32 {
        self.torsion_exponents.last().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.torsion_exponents.is_empty() && self.free_rank == 0
    }

    pub fn direct_sum(&self, other: &FiniteZpModule) -> FiniteZpModule {
        let mut t = self.torsion_exponents.clone();
        t.extend_from_slice(&other.torsion_exponents);
        FiniteZpModule::new(t, self.free_rank + other.free_rank, self.certified && other.certified)
    }

    pub(crate) fn with_certified(mut self, certified: bool) -> Self {
        self.certified = certified;
        self
    }
}

impl fmt::Display for FiniteZpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion_exponents.iter().map(|a| format!("Z/p^{a}")).collect();
        if self.free_rank > 0 {
            parts.push(format!("Zp^{}", self.free_rank));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))?;
        if !self.certified {
            write!(f, " (uncertified)")?;
        }
        Ok(())
    }
}

/// A lower bound on the true rank of a matrix, obtained independently of the
/// p-adic elimination (rank modulo a large unrelated prime).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankWitness {
    pub rank: usize,
}

pub(crate) fn module_from_smith(snf: &SmithForm, witness: Option<RankWitness>) -> FiniteZpModule {
    let finite: Vec<u32> = snf.valuations.iter().filter_map(|v| v.finite()).collect();
    let certified = if !snf.has_indeterminate() {
        true
    } else {
        // Finite divisors are genuine, so their count never exceeds the true
        // rank; the witness never exceeds it either. Equality leaves no room
        // for a hidden nonzero divisor.
        witness.is_some_and(|w| w.rank == finite.len())
    };
    FiniteZpModule::new(finite.clone(), snf.rows - finite.len(), certified)
}

/// Structure of `coker(A: Zp^cols -> Zp^rows)`.
///
/// Divisors that vanish modulo `p^(N - guard)` are counted as free rank and
/// clear the certified flag.
pub fn cokernel_structure(a: &ZpMatrix) -> FiniteZpModule {
    module_from_smith(&smith_normal_form(a, false), None)
}

/// As [`cokernel_structure`], certifying the free part against an independent
/// rank lower bound.
pub fn cokernel_structure_with_witness(a: &ZpMatrix, witness: RankWitness) -> FiniteZpModule {
    module_from_smith(&smith_normal_form(a, false), Some(witness))
}

/// Rank lower bound from the matrix rebuilt modulo the shadow primes.
pub fn shadow_rank(ctx: &PAdicContext, build: &dyn Fn(&PAdicContext) -> Result<ZpMatrix>) -> Result<RankWitness> {
    let mut rank = 0;
    for shadow in ctx.shadows() {
        rank = rank.max(rank_mod_prime(&build(&shadow)?));
    }
    Ok(RankWitness { rank })
}

/// Cokernel of a matrix described by a builder; the builder is re-run modulo
/// the shadow primes only when some divisor is indeterminate.
pub fn certified_cokernel(ctx: &PAdicContext, build: &dyn Fn(&PAdicContext) -> Result<ZpMatrix>) -> Result<FiniteZpModule> {
    let a = build(ctx)?;
    let snf = smith_normal_form(&a, false);
    if !snf.has_indeterminate() {
        return Ok(module_from_smith(&snf, None));
    }
    let witness = shadow_rank(ctx, build)?;
    Ok(module_from_smith(&snf, Some(witness)))
}
