use std::sync::Arc;

use crate::error::{Error, Result};
use crate::padic_linalg::ZpMatrix;

use super::element::LambdaElement;
use super::quotient::QuotientRing;

/// The automorphism of `Λ_r` induced by `τ_i ↦ Π_j τ_j^{ρ_{ji}}`.
///
/// `ρ` must be congruent to the identity modulo `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingAutomorphism {
    rho: Vec<Vec<i64>>,
}

impl RingAutomorphism {
    pub fn new(rho: Vec<Vec<i64>>, p: u64) -> Result<Self> {
        let r = rho.len();
        if rho.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidAutomorphism(format!("rho must be {r}x{r}")));
        }
        let p = p as i64;
        for (i, row) in rho.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let target = i64::from(i == j);
                if (x - target).rem_euclid(p) != 0 {
                    return Err(Error::InvalidAutomorphism(format!(
                        "rho[{i}][{j}] = {x} is not congruent to {target} mod {p}"
                    )));
                }
            }
        }
        Ok(RingAutomorphism { rho })
    }

    pub fn identity(r: usize) -> Self {
        RingAutomorphism {
            rho: (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect(),
        }
    }

    /// `ρ = k·I`.
    pub fn scalar(r: usize, k: i64, p: u64) -> Result<Self> {
        Self::new((0..r).map(|i| (0..r).map(|j| if i == j { k } else { 0 }).collect()).collect(), p)
    }

    pub fn rho(&self) -> &[Vec<i64>] {
        &self.rho
    }

    pub fn r(&self) -> usize {
        self.rho.len()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.r())
    }

    /// Exponent vector of the image of `τ^a`, reduced mod `side`.
    fn act_on_exponents(&self, a: &[u32], side: usize) -> Vec<u32> {
        let side = side as i64;
        (0..self.r())
            .map(|j| {
                let s: i64 = a
                    .iter()
                    .enumerate()
                    .map(|(i, &ai)| self.rho[j][i].rem_euclid(side) * ai as i64 % side)
                    .sum();
                s.rem_euclid(side) as u32
            })
            .collect()
    }

    /// Matrix of the automorphism on `Λ̄_m` in the monomial basis.
    ///
    /// Built as `B P B^{-1}` where `B` changes from the group basis `τ^a` to
    /// monomials and `P` permutes group elements.
    pub fn matrix(&self, ring: &QuotientRing) -> Result<Arc<ZpMatrix>> {
        if ring.r() != self.r() {
            return Err(Error::DimensionMismatch(format!(
                "automorphism of rank {} on a ring in {} variables",
                self.r(),
                ring.r()
            )));
        }
        if let Some(hit) = ring.auto_cache().get(&self.rho) {
            return Ok(hit.clone());
        }
        let ctx = *ring.ctx();
        let basis = *ring.basis();
        let side = basis.side();
        let dim = basis.len();
        let binom = ring.binomials();
        let mut columns = Vec::with_capacity(dim);
        for b in 0..dim {
            let eb = basis.exponents(b);
            // group coordinates of T^b = Π (τ_i - 1)^{b_i}, permuted by ρ
            let mut group = vec![0u64; dim];
            let mut k = vec![0u32; self.r()];
            loop {
                let mut coef = 1 % ctx.modulus();
                let mut sign = 0;
                for i in 0..self.r() {
                    coef = ctx.mul(coef, binom[eb[i] as usize][k[i] as usize]);
                    sign += eb[i] - k[i];
                }
                if sign % 2 == 1 {
                    coef = ctx.neg(coef);
                }
                let target = basis.index(&self.act_on_exponents(&k, side));
                group[target] = ctx.add(group[target], coef);
                // next k <= eb
                let mut i = self.r();
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    if k[i] < eb[i] {
                        k[i] += 1;
                        break;
                    }
                    k[i] = 0;
                }
                if k.iter().all(|&x| x == 0) {
                    break;
                }
            }
            columns.push(group_to_monomial(&group, side, self.r(), binom, &ctx));
        }
        let m = Arc::new(ZpMatrix::from_columns(&ctx, dim, &columns));
        ring.auto_cache().insert(self.rho.clone(), m.clone());
        Ok(m)
    }

    /// Image of `f` in `Λ̄_m`.
    pub fn apply(&self, f: &LambdaElement, ring: &QuotientRing) -> Result<LambdaElement> {
        let s = self.matrix(ring)?;
        Ok(ring.element(&s.mul_vec(&ring.reduce(f))))
    }

    /// Checks, by substitution, that the action is well defined on `Λ̄_m`:
    /// the image of every `ω_{m,i}` vanishes and the matrix agrees with
    /// `T_i ↦ Π_j τ_j^{ρ_{ji}} - 1`.
    pub fn verify_level(&self, ring: &QuotientRing) -> Result<()> {
        let ctx = ring.ctx();
        let side = ring.basis().side() as u64;
        let s = self.matrix(ring)?;
        for i in 0..self.r() {
            let exps: Vec<u64> = (0..self.r())
                .map(|j| self.rho[j][i].rem_euclid(side as i64) as u64)
                .collect();
            let image_tau = ring.reduce(&LambdaElement::group_element(ctx, &exps));
            if ring.pow(&image_tau, side) != ring.one() {
                return Err(Error::InvalidAutomorphism(format!(
                    "image of omega_{{{},{}}} is nonzero",
                    ring.level(),
                    i + 1
                )));
            }
            let t_i = ring.reduce(&LambdaElement::variable(ctx, self.r(), i));
            let mut expected = image_tau;
            expected[0] = ctx.sub(expected[0], 1 % ctx.modulus());
            if s.mul_vec(&t_i) != expected {
                return Err(Error::InvalidAutomorphism(format!(
                    "matrix disagrees with substitution on T{}",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

/// Applies `B`: group coordinates to monomial coordinates, one axis at a time
/// using `τ^c = (1 + T)^c = Σ_k C(c, k) T^k`.
fn group_to_monomial(
    group: &[u64],
    side: usize,
    r: usize,
    binom: &[Vec<u64>],
    ctx: &crate::padic_linalg::PAdicContext,
) -> Vec<u64> {
    let mut data = group.to_vec();
    for axis in 0..r {
        let inner = side.pow((r - 1 - axis) as u32);
        let outer = data.len() / (side * inner);
        let mut out = vec![0u64; data.len()];
        for o in 0..outer {
            for t in 0..inner {
                for c in 0..side {
                    let x = data[(o * side + c) * inner + t];
                    if x == 0 {
                        continue;
                    }
                    for (k, &bk) in binom[c].iter().enumerate() {
                        let idx = (o * side + k) * inner + t;
                        out[idx] = ctx.mul_add(out[idx], x, bk);
                    }
                }
            }
        }
        data = out;
    }
    data
}
