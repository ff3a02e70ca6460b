//! Weierstrass preparation for truncated power series in one variable.

use crate::error::{Error, Result};
use crate::iwasawa_ring::LambdaElement;
use crate::padic_linalg::PAdicContext;

/// `f ≡ p^mu · distinguished · unit_part  mod (p^{N - guard}, T^D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassData {
    pub mu: u32,
    pub lambda: usize,
    /// Monic of degree `lambda`, lower coefficients divisible by `p`; known
    /// modulo `p^{N - mu}` and stored in that context.
    pub distinguished: LambdaElement,
    /// Truncated below `T^D`, with unit constant term.
    pub unit_part: LambdaElement,
    pub degree_bound: usize,
}

fn coefficients(f: &LambdaElement, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for (e, c) in f.terms() {
        if (e[0] as usize) < len {
            out[e[0] as usize] = c;
        }
    }
    out
}

fn from_coefficients(ctx: &PAdicContext, coeffs: &[u64]) -> LambdaElement {
    let mut out = LambdaElement::zero(ctx, 1);
    for (i, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            out = out.add_unchecked(&LambdaElement::monomial(ctx, vec![i as u32], c));
        }
    }
    out
}

fn series_mul(ctx: &PAdicContext, a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] = ctx.mul_add(out[i + j], x, y);
        }
    }
    out
}

fn series_inverse(ctx: &PAdicContext, a: &[u64], len: usize) -> Option<Vec<u64>> {
    let inv0 = ctx.inverse(*a.first()?)?;
    let mut out = vec![0; len];
    out[0] = inv0;
    for n in 1..len {
        let mut s = 0;
        for k in 1..=n.min(a.len() - 1) {
            s = ctx.mul_add(s, a[k], out[n - k]);
        }
        out[n] = ctx.mul(ctx.neg(s), inv0);
    }
    Some(out)
}

/// Weierstrass preparation of a one-variable `f` with working degree bound
/// `degree_bound >= deg f`.
pub fn weierstrass_prepare(f: &LambdaElement, degree_bound: usize) -> Result<WeierstrassData> {
    if f.r() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "Weierstrass preparation needs one variable, got {}",
            f.r()
        )));
    }
    let ctx = *f.ctx();
    let deg = f.degree_in(0) as usize;
    if degree_bound < deg + 1 {
        return Err(Error::InvalidInput(format!(
            "degree bound {degree_bound} does not exceed deg f = {deg}"
        )));
    }
    let mu = match f.p_content() {
        Some(mu) if mu < ctx.certified_bound() => mu,
        _ => return Err(Error::PrecisionExhausted { precision: ctx.precision() }),
    };
    // g = f / p^mu; its top mu digits are unknown but get multiplied away again.
    let g: Vec<u64> = coefficients(f, deg + 1).iter().map(|&c| ctx.div_p_power(c, mu)).collect();
    let lambda = g.iter().position(|&c| ctx.is_unit(c)).expect("content was divided out");

    // g = B + T^λ C with B ≡ 0 mod p and C a unit.
    let b_part = &g[..lambda];
    let c_part = &g[lambda..];
    let iterations = ctx.precision() as usize + 1;
    let work = degree_bound + iterations * lambda + 1;
    let c_inv = series_inverse(&ctx, c_part, work).ok_or(Error::PrecisionExhausted {
        precision: ctx.precision(),
    })?;
    let b_c_inv = series_mul(&ctx, b_part, &c_inv, work);

    // w = Σ (-L)^k 1 with L(w) = shift_λ(B C^{-1} w); L raises valuation.
    let mut w = vec![0u64; work];
    let mut term = vec![0u64; work];
    term[0] = 1 % ctx.modulus();
    for k in 0..iterations {
        for (x, &t) in w.iter_mut().zip(&term) {
            *x = if k % 2 == 0 { ctx.add(*x, t) } else { ctx.sub(*x, t) };
        }
        let prod = series_mul(&ctx, &b_c_inv, &term, work);
        term = prod.iter().skip(lambda).copied().chain(std::iter::repeat(0)).take(work).collect();
        if term.iter().all(|&x| x == 0) {
            break;
        }
    }
    let q = series_mul(&ctx, &w, &c_inv, work);
    let qg = series_mul(&ctx, &q, &g, lambda + 1);
    let mut distinguished = qg[..lambda].to_vec();
    distinguished.push(1 % ctx.modulus());
    let unit = series_inverse(&ctx, &q[..degree_bound], degree_bound).ok_or(Error::PrecisionExhausted {
        precision: ctx.precision(),
    })?;
    // dividing by p^mu cost mu digits
    let known = ctx.at_precision(ctx.precision() - mu)?;
    Ok(WeierstrassData {
        mu,
        lambda,
        distinguished: from_coefficients(&ctx, &distinguished).to_context(&known),
        unit_part: from_coefficients(&ctx, &unit).to_context(&known),
        degree_bound,
    })
}

impl WeierstrassData {
    /// `f - p^mu P u` vanishes modulo `(p^{N - guard}, T^D)`.
    pub fn residual_vanishes(&self, f: &LambdaElement) -> bool {
        let ctx = *f.ctx();
        let d = self.degree_bound;
        let pu = series_mul(
            &ctx,
            &coefficients(&self.distinguished, d),
            &coefficients(&self.unit_part, d),
            d,
        );
        let scale = ctx.p_power(self.mu);
        let bound = ctx.certified_bound();
        coefficients(f, d)
            .iter()
            .zip(&pu)
            .all(|(&a, &b)| ctx.valuation(ctx.sub(a, ctx.mul(scale, b))).is_none_or(|v| v >= bound))
    }

    /// Upper bound on the degree of every irreducible factor of the
    /// distinguished polynomial: the longest Newton polygon segment.
    pub fn max_factor_degree(&self) -> usize {
        let ctx = *self.distinguished.ctx();
        let coeffs = coefficients(&self.distinguished, self.lambda + 1);
        let pts: Vec<(usize, u32)> = coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, &c)| ctx.valuation(c).map(|v| (i, v)))
            .collect();
        if self.lambda == 0 {
            return 0;
        }
        // A zero constant term contributes a root at 0 of degree one; the
        // polygon then starts at the first nonzero coefficient.
        let mut best = pts[0].0.min(1);
        let mut at = 0;
        while at + 1 < pts.len() {
            let (x0, y0) = pts[at];
            // next vertex: minimal slope, farthest on ties
            let mut next = at + 1;
            for cand in at + 1..pts.len() {
                let (x1, y1) = pts[cand];
                let (xn, yn) = pts[next];
                let lhs = (y1 as i64 - y0 as i64) * (xn as i64 - x0 as i64);
                let rhs = (yn as i64 - y0 as i64) * (x1 as i64 - x0 as i64);
                if lhs <= rhs {
                    next = cand;
                }
            }
            best = best.max(pts[next].0 - x0);
            at = next;
        }
        best
    }
}

/// Smallest `n0 >= 0` with `d < p^{n0 - 1}(p - 1)`, i.e. `d p < p^{n0}(p - 1)`.
pub fn minimal_n0(d: usize, p: u64) -> u32 {
    let mut n0 = 0;
    while (d as u128) * (p as u128) >= (p as u128).pow(n0) * (p as u128 - 1) {
        n0 += 1;
    }
    n0
}
