use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::error::Result;
use crate::padic_linalg::{FiniteZpModule, PAdicContext};

use super::semidirect::{g_coinvariants_best_effort, SemidirectModule};

/// One cell `(n, m)` of the tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TowerRecord {
    pub n: u32,
    pub m: u32,
    pub e: u64,
    pub rank: usize,
    pub max_exponent: u32,
    pub certified: bool,
}

impl TowerRecord {
    pub fn from_module(n: u32, m: u32, h: &FiniteZpModule) -> Self {
        TowerRecord {
            n,
            m,
            e: h.e(),
            rank: h.rank(),
            max_exponent: h.max_exponent(),
            certified: h.certified(),
        }
    }
}

/// Cells sorted by `(n, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerTable {
    records: Vec<TowerRecord>,
}

impl TowerTable {
    pub fn new(mut records: Vec<TowerRecord>) -> Self {
        records.sort_by_key(|c| (c.n, c.m));
        TowerTable { records }
    }

    pub fn records(&self) -> &[TowerRecord] {
        &self.records
    }

    pub fn get(&self, n: u32, m: u32) -> Option<&TowerRecord> {
        self.records
            .binary_search_by_key(&(n, m), |c| (c.n, c.m))
            .ok()
            .map(|i| &self.records[i])
    }

    /// Cells with `n = m`.
    pub fn diagonal(&self) -> Vec<TowerRecord> {
        self.records.iter().filter(|c| c.n == c.m).copied().collect()
    }

    pub fn certified(&self) -> bool {
        self.records.iter().all(|c| c.certified)
    }
}

/// `e_{n,m}` over the grid. Cells run in parallel on the current rayon pool;
/// the result does not depend on scheduling.
pub fn sweep(
    x: &SemidirectModule,
    n_range: RangeInclusive<u32>,
    m_range: RangeInclusive<u32>,
    ctx: &PAdicContext,
) -> Result<TowerTable> {
    let cells: Vec<(u32, u32)> = n_range
        .flat_map(|n| m_range.clone().map(move |m| (n, m)))
        .collect();
    let records = cells
        .par_iter()
        .map(|&(n, m)| {
            let h = g_coinvariants_best_effort(x, n, m, ctx)?;
            Ok(TowerRecord::from_module(n, m, &h.value))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TowerTable::new(records))
}

/// Only the diagonal cells `n = m = 0..=n_max`.
pub fn sweep_diagonal(x: &SemidirectModule, n_max: u32, ctx: &PAdicContext) -> Result<Vec<TowerRecord>> {
    (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let h = g_coinvariants_best_effort(x, n, n, ctx)?;
            Ok(TowerRecord::from_module(n, n, &h.value))
        })
        .collect()
}
