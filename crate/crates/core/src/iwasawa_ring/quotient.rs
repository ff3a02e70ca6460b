use std::sync::{Arc, OnceLock};

use dashmap::DashMap;

use crate::error::Result;
use crate::padic_linalg::{PAdicContext, ZpMatrix};

use super::element::LambdaElement;
use super::poly::IntPoly;

/// The ideal `(ω_{m,1}, ..., ω_{m,r})` cutting out level `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OmegaIdeal {
    pub r: usize,
    pub m: u32,
    pub p: u64,
}

impl OmegaIdeal {
    pub fn new(r: usize, m: u32, p: u64) -> Self {
        OmegaIdeal { r, m, p }
    }

    pub fn generator_polys(&self) -> Vec<IntPoly> {
        (0..self.r).map(|i| IntPoly::omega(self.r, self.p, self.m, i)).collect()
    }

    pub fn generators(&self, ctx: &PAdicContext) -> Vec<LambdaElement> {
        (0..self.r).map(|i| LambdaElement::omega(ctx, self.r, self.m, i)).collect()
    }
}

/// Monomials `T^a` with `0 <= a_i < p^m`, in lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuotientBasis {
    pub r: usize,
    pub m: u32,
    side: usize,
}

impl QuotientBasis {
    pub fn new(r: usize, m: u32, p: u64) -> Self {
        QuotientBasis {
            r,
            m,
            side: p.pow(m) as usize,
        }
    }

    /// `p^m`, the number of exponents per variable.
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn len(&self) -> usize {
        self.side.pow(self.r as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, exponents: &[u32]) -> usize {
        exponents.iter().fold(0, |acc, &a| acc * self.side + a as usize)
    }

    pub fn exponents(&self, mut idx: usize) -> Vec<u32> {
        let mut e = vec![0; self.r];
        for slot in e.iter_mut().rev() {
            *slot = (idx % self.side) as u32;
            idx /= self.side;
        }
        e
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.len()).map(|i| self.exponents(i))
    }
}

/// `Λ̄_m = Λ_r / (ω_{m,*})`, a free `Zp`-module on [`QuotientBasis`].
///
/// Elements are dense coordinate vectors. Multiplication matrices are cached
/// by element content.
pub struct QuotientRing {
    ctx: PAdicContext,
    basis: QuotientBasis,
    // T^side ≡ -Σ_{j<side} omega_low[j] T^j
    omega_low: Vec<u64>,
    binomials: OnceLock<Vec<Vec<u64>>>,
    mult_cache: DashMap<LambdaElement, Arc<ZpMatrix>>,
    auto_cache: DashMap<Vec<Vec<i64>>, Arc<ZpMatrix>>,
}

impl std::fmt::Debug for QuotientRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QuotientRing(r={}, m={}, {:?})", self.basis.r, self.basis.m, self.ctx)
    }
}

impl QuotientRing {
    /// Fails with `TooLarge` when `p^{rm}` exceeds the context ceiling.
    pub fn new(ctx: &PAdicContext, r: usize, m: u32) -> Result<Self> {
        let basis = QuotientBasis::new(r, m, ctx.p());
        ctx.check_dimension(basis.len())?;
        let side = basis.side();
        let omega = IntPoly::omega(1, ctx.p(), m, 0).univariate_coefficients();
        let omega_low = omega[..side].iter().map(|c| ctx.from_bigint(c)).collect();
        Ok(QuotientRing {
            ctx: *ctx,
            basis,
            omega_low,
            binomials: OnceLock::new(),
            mult_cache: DashMap::new(),
            auto_cache: DashMap::new(),
        })
    }

    pub fn ctx(&self) -> &PAdicContext {
        &self.ctx
    }

    pub fn basis(&self) -> &QuotientBasis {
        &self.basis
    }

    pub fn r(&self) -> usize {
        self.basis.r
    }

    pub fn level(&self) -> u32 {
        self.basis.m
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn omega(&self) -> OmegaIdeal {
        OmegaIdeal::new(self.basis.r, self.basis.m, self.ctx.p())
    }

    /// Process-wide instance for `(ctx, r, m)`, so that multiplication
    /// matrices are shared between computations.
    pub fn shared(ctx: &PAdicContext, r: usize, m: u32) -> Result<Arc<QuotientRing>> {
        static RINGS: OnceLock<DashMap<(PAdicContext, usize, u32), Arc<QuotientRing>>> = OnceLock::new();
        let rings = RINGS.get_or_init(DashMap::new);
        if let Some(hit) = rings.get(&(*ctx, r, m)) {
            return Ok(hit.clone());
        }
        let ring = Arc::new(QuotientRing::new(ctx, r, m)?);
        Ok(rings.entry((*ctx, r, m)).or_insert(ring).clone())
    }

    /// Same level and rank in another context.
    pub fn at_context(&self, ctx: &PAdicContext) -> Result<QuotientRing> {
        QuotientRing::new(ctx, self.r(), self.level())
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        v[0] = 1 % self.ctx.modulus();
        v
    }

    /// Long division by `ω` along `axis` of a dense array, shrinking that
    /// axis to `side`.
    fn reduce_axis(&self, data: Vec<u64>, shape: &mut [usize], axis: usize) -> Vec<u64> {
        let side = self.basis.side();
        let len = shape[axis];
        if len <= side {
            if len == side {
                return data;
            }
            // pad
            let outer: usize = shape[..axis].iter().product();
            let inner: usize = shape[axis + 1..].iter().product();
            let mut out = vec![0; outer * side * inner];
            for o in 0..outer {
                for k in 0..len {
                    let src = (o * len + k) * inner;
                    let dst = (o * side + k) * inner;
                    out[dst..dst + inner].copy_from_slice(&data[src..src + inner]);
                }
            }
            shape[axis] = side;
            return out;
        }
        let ctx = &self.ctx;
        let outer: usize = shape[..axis].iter().product();
        let inner: usize = shape[axis + 1..].iter().product();
        let mut data = data;
        for o in 0..outer {
            for k in (side..len).rev() {
                for t in 0..inner {
                    let c = data[(o * len + k) * inner + t];
                    if c == 0 {
                        continue;
                    }
                    let c = ctx.neg(c);
                    for (j, &w) in self.omega_low.iter().enumerate() {
                        if w != 0 {
                            let idx = (o * len + k - side + j) * inner + t;
                            data[idx] = ctx.mul_add(data[idx], c, w);
                        }
                    }
                }
            }
        }
        let mut out = vec![0; outer * side * inner];
        for o in 0..outer {
            let src = o * len * inner;
            let dst = o * side * inner;
            out[dst..dst + side * inner].copy_from_slice(&data[src..src + side * inner]);
        }
        shape[axis] = side;
        out
    }

    fn reduce_dense(&self, mut data: Vec<u64>, mut shape: Vec<usize>) -> Vec<u64> {
        for axis in 0..shape.len() {
            data = self.reduce_axis(data, &mut shape, axis);
        }
        data
    }

    /// Coordinates of `f mod ω_m` in the quotient basis.
    pub fn reduce(&self, f: &LambdaElement) -> Vec<u64> {
        assert_eq!(f.r(), self.r());
        let f = if f.ctx() == &self.ctx { f.clone() } else { f.to_context(&self.ctx) };
        let r = self.r();
        if r == 0 {
            return vec![f.coefficient(&[])];
        }
        let shape: Vec<usize> = (0..r).map(|i| f.degree_in(i) as usize + 1).collect();
        let mut data = vec![0u64; shape.iter().product()];
        for (e, c) in f.terms() {
            let idx = e.iter().zip(&shape).fold(0, |acc, (&a, &s)| acc * s + a as usize);
            data[idx] = c;
        }
        self.reduce_dense(data, shape)
    }

    pub fn reduce_poly(&self, f: &IntPoly) -> Vec<u64> {
        self.reduce(&LambdaElement::from_poly(&self.ctx, f))
    }

    pub fn element(&self, coords: &[u64]) -> LambdaElement {
        let mut out = LambdaElement::zero(&self.ctx, self.r());
        for (i, &c) in coords.iter().enumerate() {
            if c != 0 {
                out = out.add_unchecked(&LambdaElement::monomial(&self.ctx, self.basis.exponents(i), c));
            }
        }
        out
    }

    pub fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let r = self.r();
        let side = self.basis.side();
        let wide = 2 * side - 1;
        let shape = vec![wide; r];
        let mut data = vec![0u64; wide.pow(r as u32)];
        let nz_y: Vec<(Vec<u32>, u64)> = y
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (self.basis.exponents(i), c))
            .collect();
        for (i, &cx) in x.iter().enumerate() {
            if cx == 0 {
                continue;
            }
            let ex = self.basis.exponents(i);
            for (ey, cy) in &nz_y {
                let idx = ex.iter().zip(ey).fold(0, |acc, (a, b)| acc * wide + (a + b) as usize);
                data[idx] = self.ctx.mul_add(data[idx], cx, *cy);
            }
        }
        self.reduce_dense(data, shape)
    }

    pub fn pow(&self, x: &[u64], mut exp: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut base = x.to_vec();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Multiplication by `T_{i+1}` on coordinates.
    pub fn mul_by_variable(&self, x: &[u64], i: usize) -> Vec<u64> {
        let side = self.basis.side();
        let inner = side.pow((self.r() - 1 - i) as u32);
        let outer = self.dim() / (side * inner);
        let ctx = &self.ctx;
        let mut out = vec![0u64; x.len()];
        for o in 0..outer {
            for t in 0..inner {
                let at = |k: usize| (o * side + k) * inner + t;
                let top = ctx.neg(x[at(side - 1)]);
                for k in 0..side {
                    let shifted = if k == 0 { 0 } else { x[at(k - 1)] };
                    out[at(k)] = ctx.mul_add(shifted, top, self.omega_low[k]);
                }
            }
        }
        out
    }

    /// Matrix of `g ↦ f g` on the quotient basis.
    pub fn multiplication_matrix(&self, f: &LambdaElement) -> Result<Arc<ZpMatrix>> {
        if let Some(hit) = self.mult_cache.get(f) {
            return Ok(hit.clone());
        }
        let m = Arc::new(self.multiplication_matrix_of(&self.reduce(f)));
        self.mult_cache.insert(f.clone(), m.clone());
        Ok(m)
    }

    /// Multiplication matrix of an element given by coordinates (uncached).
    pub fn multiplication_matrix_of(&self, x: &[u64]) -> ZpMatrix {
        let dim = self.dim();
        let side = self.basis.side();
        let mut columns: Vec<Vec<u64>> = Vec::with_capacity(dim);
        for b in 0..dim {
            if b == 0 {
                columns.push(x.to_vec());
                continue;
            }
            // T^b = T_i * T^{b - e_i} for the last variable i with b_i > 0.
            let mut stride = 1;
            let mut i = self.r() - 1;
            while (b / stride) % side == 0 {
                stride *= side;
                i -= 1;
            }
            let col = self.mul_by_variable(&columns[b - stride], i);
            columns.push(col);
        }
        ZpMatrix::from_columns(&self.ctx, dim, &columns)
    }

    pub(crate) fn binomials(&self) -> &[Vec<u64>] {
        self.binomials.get_or_init(|| {
            let side = self.basis.side();
            let mut rows = vec![vec![1 % self.ctx.modulus()]];
            for n in 1..side {
                let prev = &rows[n - 1];
                let mut row = vec![0; n + 1];
                row[0] = prev[0];
                row[n] = prev[n - 1];
                for k in 1..n {
                    row[k] = self.ctx.add(prev[k - 1], prev[k]);
                }
                rows.push(row);
            }
            rows
        })
    }

    pub(crate) fn auto_cache(&self) -> &DashMap<Vec<Vec<i64>>, Arc<ZpMatrix>> {
        &self.auto_cache
    }
}
