//! Smith normal form over `Z/p^N`.
//!
//! `Z/p^N` is a local principal ideal ring, so elimination only ever divides
//! by units: choosing a pivot of minimal valuation makes every other entry in
//! its row and column an exact multiple of it. No precision is lost during
//! the elimination itself; the guard band only governs how deep divisors are
//! reported.

use super::context::PAdicContext;
use super::matrix::ZpMatrix;

/// Valuation of one elementary divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DivisorValuation {
    Finite(u32),
    /// The pivot vanished modulo `p^(N - guard)`: the true valuation is at
    /// least the carried bound, possibly infinite.
    AtLeast(u32),
}

impl DivisorValuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            DivisorValuation::Finite(v) => Some(v),
            DivisorValuation::AtLeast(_) => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, DivisorValuation::Finite(_))
    }
}

/// Unimodular transforms with `left * A * right` diagonal.
#[derive(Clone, Debug)]
pub struct SmithTransforms {
    pub left: ZpMatrix,
    pub left_inv: ZpMatrix,
    pub right: ZpMatrix,
    pub right_inv: ZpMatrix,
}

#[derive(Clone, Debug)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    /// Nondecreasing; one entry per diagonal position, `min(rows, cols)` in total.
    pub valuations: Vec<DivisorValuation>,
    pub transforms: Option<SmithTransforms>,
}

impl SmithForm {
    pub fn finite_count(&self) -> usize {
        self.valuations.iter().filter(|v| v.is_finite()).count()
    }

    pub fn has_indeterminate(&self) -> bool {
        self.valuations.iter().any(|v| !v.is_finite())
    }
}

struct Tracker {
    left: ZpMatrix,
    left_inv: ZpMatrix,
    right: ZpMatrix,
    right_inv: ZpMatrix,
}

#[inline]
fn fast_valuation(ctx: &PAdicContext, x: u64) -> u32 {
    let p = ctx.p();
    if !x.is_multiple_of(p) {
        return 0;
    }
    let mut v = 1;
    let mut y = x / p;
    while y.is_multiple_of(p) {
        y /= p;
        v += 1;
    }
    v
}

/// Elementary divisors of `a`, optionally with transforms `U`, `V` such that
/// `U * a * V` is diagonal modulo `p^N` (up to an indeterminate trailing block
/// that vanishes modulo `p^(N - guard)`).
///
/// Pivot choice: minimal valuation, ties broken by the lowest `(row, col)`.
pub fn smith_normal_form(a: &ZpMatrix, with_transforms: bool) -> SmithForm {
    let ctx = *a.ctx();
    debug_assert!(!ctx.is_shadow());
    let (rows, cols) = (a.rows(), a.cols());
    let bound = ctx.certified_bound();
    let mut w = a.clone();
    let mut tr = with_transforms.then(|| Tracker {
        left: ZpMatrix::identity(&ctx, rows),
        left_inv: ZpMatrix::identity(&ctx, rows),
        right: ZpMatrix::identity(&ctx, cols),
        right_inv: ZpMatrix::identity(&ctx, cols),
    });
    let diag = rows.min(cols);
    let mut valuations = Vec::with_capacity(diag);

    for k in 0..diag {
        // Pivot search over the trailing block.
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for i in k..rows {
            let row = w.row(i);
            for (j, &x) in row.iter().enumerate().skip(k) {
                if x == 0 {
                    continue;
                }
                let v = fast_valuation(&ctx, x);
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best.filter(|&(v, _, _)| v < bound) else {
            valuations.extend(std::iter::repeat_n(DivisorValuation::AtLeast(bound), diag - k));
            break;
        };

        w.swap_rows(k, pi);
        w.swap_cols(k, pj);
        if let Some(t) = tr.as_mut() {
            t.left.swap_rows(k, pi);
            t.left_inv.swap_cols(k, pi);
            t.right.swap_cols(k, pj);
            t.right_inv.swap_rows(k, pj);
        }

        let unit = ctx.div_p_power(w.get(k, k), v);
        let unit_inv = ctx.inverse(unit).expect("pivot cofactor is a unit");
        w.scale_row(k, unit_inv);
        if let Some(t) = tr.as_mut() {
            t.left.scale_row(k, unit_inv);
            t.left_inv.scale_col(k, unit);
        }

        for i in k + 1..rows {
            let x = w.get(i, k);
            if x == 0 {
                continue;
            }
            let factor = ctx.neg(ctx.div_p_power(x, v));
            w.add_row_multiple(i, k, factor);
            if let Some(t) = tr.as_mut() {
                t.left.add_row_multiple(i, k, factor);
                // inverse op: col_k -= factor * col_i
                t.left_inv.add_col_multiple(k, i, ctx.neg(factor));
            }
        }
        for j in k + 1..cols {
            let x = w.get(k, j);
            if x == 0 {
                continue;
            }
            let factor = ctx.neg(ctx.div_p_power(x, v));
            // Column k is zero below the pivot, so only row k changes in `w`.
            w.set(k, j, 0);
            if let Some(t) = tr.as_mut() {
                t.right.add_col_multiple(j, k, factor);
                t.right_inv.add_row_multiple(k, j, ctx.neg(factor));
            }
        }
        valuations.push(DivisorValuation::Finite(v));
    }

    SmithForm {
        rows,
        cols,
        valuations,
        transforms: tr.map(|t| SmithTransforms {
            left: t.left,
            left_inv: t.left_inv,
            right: t.right,
            right_inv: t.right_inv,
        }),
    }
}

/// Rank of a matrix over the prime field of a shadow context.
pub(crate) fn rank_mod_prime(a: &ZpMatrix) -> usize {
    let ctx = *a.ctx();
    debug_assert!(ctx.is_shadow());
    let mut w = a.clone();
    let (rows, cols) = (w.rows(), w.cols());
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| w.get(i, col) != 0) else {
            continue;
        };
        w.swap_rows(rank, piv);
        let inv = ctx.inverse(w.get(rank, col)).expect("nonzero in a field");
        w.scale_row(rank, inv);
        for i in rank + 1..rows {
            let x = w.get(i, col);
            if x != 0 {
                w.add_row_multiple(i, rank, ctx.neg(x));
            }
        }
        rank += 1;
    }
    rank
}

/// Indices of a maximal set of linearly independent columns over the prime
/// field of a shadow context, in increasing order.
pub(crate) fn independent_columns_mod_prime(a: &ZpMatrix) -> Vec<usize> {
    let ctx = *a.ctx();
    debug_assert!(ctx.is_shadow());
    let mut w = a.clone();
    let (rows, cols) = (w.rows(), w.cols());
    let mut rank = 0;
    let mut picked = Vec::new();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| w.get(i, col) != 0) else {
            continue;
        };
        w.swap_rows(rank, piv);
        let inv = ctx.inverse(w.get(rank, col)).expect("nonzero in a field");
        w.scale_row(rank, inv);
        for i in rank + 1..rows {
            let x = w.get(i, col);
            if x != 0 {
                w.add_row_multiple(i, rank, ctx.neg(x));
            }
        }
        picked.push(col);
        rank += 1;
    }
    picked
}
