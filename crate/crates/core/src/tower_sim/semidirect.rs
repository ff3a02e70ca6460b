use crate::error::{Error, Result};
use crate::iwasawa_ring::{QuotientRing, RingAutomorphism};
use crate::module_theory::{ModulePresentation, PolyMatrix};
use crate::padic_linalg::{
    certified_cokernel, escalate_and_retry, escalate_best_effort, rank_mod_prime, smith_normal_form,
    DivisorValuation, Escalated, FiniteZpModule, PAdicContext, ZpMatrix,
};

/// A `Λ_r`-module `X = coker(A)` with a semilinear action of `γ`:
/// `γ(λ x) = σ_ρ(λ) γ(x)` and `γ(e_j) = Σ_i Φ_{ij} e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemidirectModule {
    base: ModulePresentation,
    rho: RingAutomorphism,
    phi: PolyMatrix,
}

impl SemidirectModule {
    /// Validates shapes, semilinearity at level 0 and unipotence of the
    /// induced map on `X_{H_0} / p`.
    pub fn new(base: ModulePresentation, rho: RingAutomorphism, phi: PolyMatrix) -> Result<Self> {
        let (r, b) = (base.r(), base.b());
        if rho.r() != r {
            return Err(Error::DimensionMismatch(format!("rho acts on {} variables, module has {r}", rho.r())));
        }
        if phi.r() != r || phi.rows() != b || phi.cols() != b {
            return Err(Error::DimensionMismatch(format!(
                "Phi must be {b}x{b} over {r} variables, got {}x{} over {}",
                phi.rows(),
                phi.cols(),
                phi.r()
            )));
        }
        let x = SemidirectModule { base, rho, phi };
        let ctx = PAdicContext::for_prime(x.base.p())?;
        x.gamma_on_coinvariants(0, &ctx)?;
        x.check_unipotent(&ctx)?;
        Ok(x)
    }

    /// `ρ = 1`, `Φ = 1`.
    pub fn direct_product(base: ModulePresentation) -> Result<Self> {
        let (r, b) = (base.r(), base.b());
        let mut phi = PolyMatrix::zeros(r, b, b);
        for i in 0..b {
            phi.set(i, i, crate::iwasawa_ring::IntPoly::one(r));
        }
        Self::new(base, RingAutomorphism::identity(r), phi)
    }

    pub fn base(&self) -> &ModulePresentation {
        &self.base
    }

    pub fn rho(&self) -> &RingAutomorphism {
        &self.rho
    }

    pub fn phi(&self) -> &PolyMatrix {
        &self.phi
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn r(&self) -> usize {
        self.base.r()
    }

    /// `(Φ(0) - 1)^b` maps `F_p^b` into the relations mod `p`.
    fn check_unipotent(&self, ctx: &PAdicContext) -> Result<()> {
        let fp = ctx.shadow(ctx.p());
        let zero = vec![0; self.r()];
        let a0 = self.base.matrix().evaluate(&fp, &zero);
        let nil = self.phi.evaluate(&fp, &zero).minus_identity().pow(self.base.b() as u64);
        if rank_mod_prime(&a0.hconcat(&nil)?) != rank_mod_prime(&a0) {
            return Err(Error::NotUnipotent);
        }
        Ok(())
    }

    /// `Φ · diag(S_ρ)` on `Λ̄_m^b`, without any check.
    pub(crate) fn gamma_matrix(&self, m: u32, ctx: &PAdicContext) -> Result<ZpMatrix> {
        let ring = QuotientRing::shared(ctx, self.r(), m)?;
        let s = self.rho.matrix(&ring)?;
        let b = self.base.b();
        ctx.check_dimension(ring.dim() * b)?;
        let mut diag = ZpMatrix::zeros(ctx, 0, 0);
        for _ in 0..b {
            diag = diag.direct_sum(&s);
        }
        self.phi.expand(&ring)?.mul(&diag)
    }

    pub(crate) fn relations(&self, m: u32, ctx: &PAdicContext) -> Result<ZpMatrix> {
        let ring = QuotientRing::shared(ctx, self.r(), m)?;
        self.base.matrix().expand(&ring)
    }

    /// `γ` on `Λ̄_m^b` after checking that it preserves the relation submodule.
    pub fn gamma_on_coinvariants(&self, m: u32, ctx: &PAdicContext) -> Result<ZpMatrix> {
        self.base.check_context(ctx)?;
        let ring = QuotientRing::shared(ctx, self.r(), m)?;
        self.rho.verify_level(&ring)?;
        let g = self.gamma_matrix(m, ctx)?;
        let a = self.relations(m, ctx)?;
        let image = g.mul(&a)?;
        let snf = smith_normal_form(&a, true);
        let u = &snf.transforms.as_ref().expect("requested").left;
        let y = u.mul(&image)?;
        let bound = ctx.certified_bound();
        let dim = ring.dim();
        for col in 0..y.cols() {
            for i in 0..y.rows() {
                let need = match snf.valuations.get(i) {
                    Some(DivisorValuation::Finite(v)) => *v,
                    _ => bound,
                };
                if ctx.valuation(y.get(i, col)).is_some_and(|v| v < need) {
                    return Err(Error::SemilinearityBroken {
                        column: col,
                        generator: col / dim.max(1),
                        level: m,
                    });
                }
            }
        }
        Ok(g)
    }

    /// `[A_m | G^{p^n} - 1]`, whose cokernel is `X_{G_{n,m}}`.
    pub(crate) fn g_relations(&self, n: u32, m: u32, ctx: &PAdicContext) -> Result<ZpMatrix> {
        let g = self.gamma_matrix(m, ctx)?;
        let action = g.pow(ctx.p().pow(n)).minus_identity();
        self.relations(m, ctx)?.hconcat(&action)
    }

    pub(crate) fn g_coinvariants_at(&self, n: u32, m: u32, ctx: &PAdicContext) -> Result<FiniteZpModule> {
        self.gamma_on_coinvariants(m, ctx)?;
        certified_cokernel(ctx, &|k| self.g_relations(n, m, k))
    }
}

/// `X_{G_{n,m}} = (X_{H_m})_{Γ_n}`, escalating precision until certified.
pub fn g_coinvariants(x: &SemidirectModule, n: u32, m: u32, ctx: &PAdicContext) -> Result<FiniteZpModule> {
    Ok(escalate_and_retry(ctx, |k| x.g_coinvariants_at(n, m, k))?.value)
}

/// As [`g_coinvariants`], keeping the last uncertified result at `N_max`.
pub fn g_coinvariants_best_effort(
    x: &SemidirectModule,
    n: u32,
    m: u32,
    ctx: &PAdicContext,
) -> Result<Escalated<FiniteZpModule>> {
    escalate_best_effort(ctx, |k| x.g_coinvariants_at(n, m, k))
}

/// Standalone form of [`SemidirectModule::gamma_on_coinvariants`].
pub fn gamma_on_coinvariants(x: &SemidirectModule, m: u32, ctx: &PAdicContext) -> Result<ZpMatrix> {
    x.gamma_on_coinvariants(m, ctx)
}
