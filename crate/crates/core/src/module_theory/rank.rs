use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::padic_linalg::{escalate_best_effort, rank_mod_prime, smith_normal_form, PAdicContext};

use super::invariants::coinvariants_at;
use super::presentation::{ModulePresentation, PolyMatrix};

const EVALUATION_POINTS: usize = 6;
const SEED: u64 = 0x1a4b_2c3d_5e6f_7081;
/// Largest expanded dimension used for the Harris cross-check.
const HARRIS_DIM_CAP: usize = 256;
const HARRIS_MAX_LEVEL: u32 = 3;

/// Lower bound on the rank of `A` over the fraction field of `Λ_r`: the best
/// of several specialisations, p-adic ones at `T_i = p t_i` and ones modulo
/// the large shadow primes.
pub(crate) fn generic_rank(matrix: &PolyMatrix, ctx: &PAdicContext) -> usize {
    if matrix.rows() == 0 || matrix.cols() == 0 {
        return 0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let r = matrix.r();
    let full = matrix.rows().min(matrix.cols());
    let mut best = 0;
    for _ in 0..EVALUATION_POINTS {
        let point: Vec<u64> = (0..r)
            .map(|_| ctx.mul(ctx.p() % ctx.modulus(), rng.gen_range(0..ctx.modulus())))
            .collect();
        best = best.max(smith_normal_form(&matrix.evaluate(ctx, &point), false).finite_count());
        for shadow in ctx.shadows() {
            let point: Vec<u64> = (0..r).map(|_| rng.gen_range(0..shadow.modulus())).collect();
            best = best.max(rank_mod_prime(&matrix.evaluate(&shadow, &point)));
        }
        if best == full {
            break;
        }
    }
    best
}

/// `rank_Λ(M)` with the Harris cross-check.
#[derive(Clone, Debug, PartialEq)]
pub struct RankEstimate {
    pub rank: usize,
    /// Level used for `rank_Zp(M_{H_m}) / p^{rm}`, if any was feasible.
    pub harris_level: Option<u32>,
    pub harris_ratio: Option<f64>,
    /// False when the two estimates disagree by more than 1/2.
    pub certified: bool,
}

pub fn lambda_rank(module: &ModulePresentation, ctx: &PAdicContext) -> Result<RankEstimate> {
    module.check_context(ctx)?;
    let rank = module.b() - generic_rank(module.matrix(), ctx);
    let p = ctx.p() as usize;
    let width = module.a().max(module.b()).max(1);
    let cap = ctx.matrix_ceiling().min(HARRIS_DIM_CAP);
    let level = (0..=HARRIS_MAX_LEVEL)
        .rev()
        .find(|&m| p.pow(m * module.r() as u32) * width <= cap);
    let Some(m) = level else {
        return Ok(RankEstimate {
            rank,
            harris_level: None,
            harris_ratio: None,
            certified: true,
        });
    };
    let h = escalate_best_effort(ctx, |k| coinvariants_at(module, m, k))?.value;
    let ratio = h.rank() as f64 / p.pow(m * module.r() as u32) as f64;
    Ok(RankEstimate {
        rank,
        harris_level: Some(m),
        harris_ratio: Some(ratio),
        certified: h.certified() && (ratio - rank as f64).abs() <= 0.5,
    })
}
