use crate::error::{Error, Result};
use crate::iwasawa_ring::{IntPoly, LambdaElement};
use crate::module_theory::PolyMatrix;
use crate::padic_linalg::PAdicContext;

/// Exact determinant by dynamic programming over row subsets, free of
/// divisions: `dp[S]` is the signed sum over placements of rows `S` into the
/// first `|S|` columns.
pub fn determinant(a: &PolyMatrix) -> Result<IntPoly> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "determinant of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    if n > 20 {
        return Err(Error::TooLarge { dim: n, ceiling: 20 });
    }
    let mut dp = vec![IntPoly::zero(a.r()); 1 << n];
    dp[0] = IntPoly::one(a.r());
    for mask in 0usize..(1 << n) {
        if dp[mask].is_zero() {
            continue;
        }
        let col = mask.count_ones() as usize;
        if col == n {
            continue;
        }
        for row in 0..n {
            if mask & (1 << row) != 0 || a.get(row, col).is_zero() {
                continue;
            }
            let term = dp[mask].mul(a.get(row, col));
            let next = mask | (1 << row);
            dp[next] = if (mask >> (row + 1)).count_ones() % 2 == 1 {
                dp[next].sub(&term)
            } else {
                dp[next].add(&term)
            };
        }
    }
    Ok(dp.pop().expect("table is nonempty"))
}

/// Generator of the characteristic ideal of `coker(A)` for square `A` over
/// `Λ_1`, namely `det A`.
pub fn char_ideal_square(a: &PolyMatrix, ctx: &PAdicContext) -> Result<LambdaElement> {
    if a.r() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "characteristic ideals are computed over one variable, got {}",
            a.r()
        )));
    }
    let det = LambdaElement::from_poly(ctx, &determinant(a)?);
    match det.p_content() {
        Some(v) if v < ctx.certified_bound() => Ok(det),
        _ => Err(Error::SingularPresentation),
    }
}
