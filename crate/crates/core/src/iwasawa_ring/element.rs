use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::padic_linalg::PAdicContext;

use super::poly::IntPoly;

/// A polynomial representative of an element of `Λ_r`, coefficients mod `p^N`.
///
/// Group elements are expanded through `τ_i = 1 + T_i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LambdaElement {
    r: usize,
    terms: BTreeMap<Vec<u32>, u64>,
    ctx: PAdicContext,
}

impl fmt::Debug for LambdaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LambdaElement({self})")
    }
}

impl fmt::Display for LambdaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_int_poly())
    }
}

impl LambdaElement {
    pub fn zero(ctx: &PAdicContext, r: usize) -> Self {
        LambdaElement {
            r,
            terms: BTreeMap::new(),
            ctx: *ctx,
        }
    }

    pub fn constant(ctx: &PAdicContext, r: usize, c: i64) -> Self {
        Self::monomial(ctx, vec![0; r], ctx.from_i64(c))
    }

    pub fn one(ctx: &PAdicContext, r: usize) -> Self {
        Self::constant(ctx, r, 1)
    }

    /// `T_{i+1}` (zero-based index).
    pub fn variable(ctx: &PAdicContext, r: usize, i: usize) -> Self {
        Self::from_poly(ctx, &IntPoly::variable(r, i))
    }

    pub fn monomial(ctx: &PAdicContext, exponents: Vec<u32>, coefficient: u64) -> Self {
        let r = exponents.len();
        let mut out = Self::zero(ctx, r);
        let c = ctx.from_u64(coefficient);
        if c != 0 {
            out.terms.insert(exponents, c);
        }
        out
    }

    pub fn from_poly(ctx: &PAdicContext, f: &IntPoly) -> Self {
        let terms = f
            .terms()
            .map(|(e, c)| (e.to_vec(), ctx.from_bigint(c)))
            .filter(|&(_, c)| c != 0)
            .collect();
        LambdaElement { r: f.r(), terms, ctx: *ctx }
    }

    /// `τ^a = Π (1 + T_i)^{a_i}`.
    pub fn group_element(ctx: &PAdicContext, a: &[u64]) -> Self {
        let r = a.len();
        let mut acc = Self::one(ctx, r);
        for (i, &ai) in a.iter().enumerate() {
            let tau = Self::one(ctx, r).add_unchecked(&Self::variable(ctx, r, i));
            acc = acc.mul_unchecked(&tau.pow_unchecked(ai));
        }
        acc
    }

    /// `ω_{m,i} = (1 + T_i)^{p^m} - 1`.
    pub fn omega(ctx: &PAdicContext, r: usize, m: u32, i: usize) -> Self {
        let mut e = vec![0u64; r];
        e[i] = ctx.p().pow(m);
        Self::group_element(ctx, &e).sub_unchecked(&Self::one(ctx, r))
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn ctx(&self) -> &PAdicContext {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], u64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exponents: &[u32]) -> u64 {
        self.terms.get(exponents).copied().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Minimal coefficient valuation; `None` for zero.
    pub fn p_content(&self) -> Option<u32> {
        self.terms.values().filter_map(|&c| self.ctx.valuation(c)).min()
    }

    /// Symmetric integer lift of every coefficient.
    pub fn to_int_poly(&self) -> IntPoly {
        let mut out = IntPoly::zero(self.r);
        for (e, &c) in &self.terms {
            out = out.add(&IntPoly::monomial(self.r, e.clone(), self.ctx.lift_bigint(c)));
        }
        out
    }

    pub fn to_context(&self, ctx: &PAdicContext) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| (e.clone(), self.ctx.reduce_into(c, ctx)))
            .filter(|&(_, c)| c != 0)
            .collect();
        LambdaElement { r: self.r, terms, ctx: *ctx }
    }

    fn compatible(&self, other: &LambdaElement) -> Result<()> {
        if self.r != other.r {
            return Err(Error::DimensionMismatch(format!(
                "elements in {} and {} variables",
                self.r, other.r
            )));
        }
        if self.ctx != other.ctx {
            return Err(Error::DimensionMismatch(format!(
                "elements from different contexts {:?} and {:?}",
                self.ctx, other.ctx
            )));
        }
        Ok(())
    }

    fn accumulate(&mut self, e: Vec<u32>, c: u64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if c != 0 {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = self.ctx.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &LambdaElement) -> Result<LambdaElement> {
        self.compatible(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &LambdaElement) -> Result<LambdaElement> {
        self.compatible(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn mul(&self, other: &LambdaElement) -> Result<LambdaElement> {
        self.compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn neg(&self) -> LambdaElement {
        let terms = self.terms.iter().map(|(e, &c)| (e.clone(), self.ctx.neg(c))).collect();
        LambdaElement {
            r: self.r,
            terms,
            ctx: self.ctx,
        }
    }

    pub fn scale(&self, c: u64) -> LambdaElement {
        let terms = self
            .terms
            .iter()
            .map(|(e, &x)| (e.clone(), self.ctx.mul(x, c)))
            .filter(|&(_, x)| x != 0)
            .collect();
        LambdaElement {
            r: self.r,
            terms,
            ctx: self.ctx,
        }
    }

    pub fn pow(&self, exp: u64) -> LambdaElement {
        self.pow_unchecked(exp)
    }

    pub(crate) fn add_unchecked(&self, other: &LambdaElement) -> LambdaElement {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.accumulate(e.clone(), c);
        }
        out
    }

    pub(crate) fn sub_unchecked(&self, other: &LambdaElement) -> LambdaElement {
        self.add_unchecked(&other.neg())
    }

    pub(crate) fn mul_unchecked(&self, other: &LambdaElement) -> LambdaElement {
        let mut out = LambdaElement::zero(&self.ctx, self.r);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.accumulate(e, self.ctx.mul(ca, cb));
            }
        }
        out
    }

    fn pow_unchecked(&self, mut exp: u64) -> LambdaElement {
        let mut acc = LambdaElement::one(&self.ctx, self.r);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }
}

/// `α_{τ,m,m0} = (τ^{p^m} - 1) / (τ^{p^{m0}} - 1) = Σ_{j < p^{m-m0}} τ^{j p^{m0}}`.
///
/// `tau` holds exponents of `τ = Π τ_i^{tau_i}`; one of them must be a unit.
pub fn alpha_element(ctx: &PAdicContext, tau: &[u64], m: u32, m0: u32) -> Result<LambdaElement> {
    check_tau(ctx.p(), tau)?;
    if m < m0 {
        return Err(Error::LevelBelowBase { level: m, base: m0 });
    }
    let r = tau.len();
    let step: Vec<u64> = tau.iter().map(|&a| a * ctx.p().pow(m0)).collect();
    let g = LambdaElement::group_element(ctx, &step);
    let mut acc = LambdaElement::zero(ctx, r);
    let mut power = LambdaElement::one(ctx, r);
    for _ in 0..ctx.p().pow(m - m0) {
        acc = acc.add_unchecked(&power);
        power = power.mul_unchecked(&g);
    }
    Ok(acc)
}

pub(crate) fn check_tau(p: u64, tau: &[u64]) -> Result<()> {
    if tau.iter().all(|&a| a % p == 0) {
        return Err(Error::TauInH1(tau.to_vec()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PAdicContext {
        PAdicContext::new(3, 12, 2).unwrap()
    }

    fn parse(s: &str, r: usize) -> LambdaElement {
        LambdaElement::from_poly(&ctx(), &IntPoly::parse(s, r, 3).unwrap())
    }

    #[test]
    fn products() {
        let tau = parse("1 + T1", 1);
        assert_eq!(tau.mul(&tau).unwrap(), parse("1 + 2*T1 + T1^2", 1));
        assert!(tau.mul(&LambdaElement::zero(&ctx(), 1)).unwrap().is_zero());
        assert_eq!(LambdaElement::omega(&ctx(), 1, 1, 0), parse("3*T1 + 3*T1^2 + T1^3", 1));
        assert!(tau.mul(&parse("T2", 2)).is_err());
    }

    #[test]
    fn alpha_geometric_sum() {
        let c = ctx();
        assert_eq!(alpha_element(&c, &[1], 2, 2).unwrap(), LambdaElement::one(&c, 1));
        assert_eq!(
            alpha_element(&c, &[1], 1, 0).unwrap(),
            parse("1 + (1 + T1) + (1 + T1)^2", 1)
        );
        assert_eq!(alpha_element(&c, &[3, 6], 1, 0), Err(Error::TauInH1(vec![3, 6])));
    }
}
