use crate::error::{Error, Result};

use super::context::PAdicContext;
use super::matrix::ZpMatrix;
use super::smith::{smith_normal_form, SmithForm};
use super::structure::{module_from_smith, shadow_rank, FiniteZpModule, RankWitness};

fn check_composable(d_in: &ZpMatrix, d_out: &ZpMatrix) -> Result<()> {
    if d_out.cols() != d_in.rows() {
        return Err(Error::DimensionMismatch(format!(
            "d_out is {}x{}, d_in is {}x{}",
            d_out.rows(),
            d_out.cols(),
            d_in.rows(),
            d_in.cols()
        )));
    }
    let ctx = d_in.ctx();
    let bound = ctx.certified_bound();
    let composite = d_out.mul(d_in)?;
    for i in 0..composite.rows() {
        for j in 0..composite.cols() {
            if ctx.valuation(composite.get(i, j)).is_some_and(|v| v < bound) {
                return Err(Error::ComplexNotComposable { row: i, col: j, bound });
            }
        }
    }
    Ok(())
}

/// Pieces of a homology computation that witnesses are checked against.
struct HomologyParts {
    out_snf: SmithForm,
    image_snf: SmithForm,
}

fn homology_parts(d_in: &ZpMatrix, d_out: &ZpMatrix) -> Result<HomologyParts> {
    check_composable(d_in, d_out)?;
    let out_snf = smith_normal_form(d_out, true);
    let finite = out_snf.finite_count();
    let t = out_snf.transforms.as_ref().expect("requested");
    // Columns `finite..` of the right transform span the saturated kernel of
    // d_out; coordinates of im(d_in) in that basis are the matching rows of
    // right_inv * d_in.
    let coords = t.right_inv.mul(d_in)?;
    let kernel_rows: Vec<usize> = (finite..d_in.rows()).collect();
    let restricted = coords.select_rows(&kernel_rows);
    let image_snf = smith_normal_form(&restricted, false);
    Ok(HomologyParts { out_snf, image_snf })
}

fn assemble(parts: &HomologyParts, witness: Option<(RankWitness, RankWitness)>) -> FiniteZpModule {
    let out_ok = !parts.out_snf.has_indeterminate()
        || witness.is_some_and(|(w_out, _)| w_out.rank == parts.out_snf.finite_count());
    let h = module_from_smith(&parts.image_snf, witness.map(|(_, w_in)| w_in));
    let certified = out_ok && h.certified();
    h.with_certified(certified)
}

/// `ker(d_out) / im(d_in)` as a Zp-module.
pub fn homology_structure(d_in: &ZpMatrix, d_out: &ZpMatrix) -> Result<FiniteZpModule> {
    Ok(assemble(&homology_parts(d_in, d_out)?, None))
}

/// Homology of a complex segment given by builders, certified against shadow
/// ranks of both maps when needed.
pub fn certified_homology(
    ctx: &PAdicContext,
    build_in: &dyn Fn(&PAdicContext) -> Result<ZpMatrix>,
    build_out: &dyn Fn(&PAdicContext) -> Result<ZpMatrix>,
) -> Result<FiniteZpModule> {
    let parts = homology_parts(&build_in(ctx)?, &build_out(ctx)?)?;
    if !parts.out_snf.has_indeterminate() && !parts.image_snf.has_indeterminate() {
        return Ok(assemble(&parts, None));
    }
    // rank of im(d_in) in ker(d_out) equals rank(d_in).
    let w_out = shadow_rank(ctx, build_out)?;
    let w_in = shadow_rank(ctx, build_in)?;
    Ok(assemble(&parts, Some((w_out, w_in))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PAdicContext {
        PAdicContext::new(3, 8, 2).unwrap()
    }

    #[test]
    fn zero_maps() {
        let c = ctx();
        let h = certified_homology(&c, &|k| Ok(ZpMatrix::zeros(k, 2, 0)), &|k| Ok(ZpMatrix::zeros(k, 0, 2))).unwrap();
        assert_eq!((h.free_rank(), h.e()), (2, 0));
        assert!(h.certified());
    }

    #[test]
    fn one_variable_koszul() {
        let c = ctx();
        // 0 -> Zp --p--> Zp -> 0
        let d1 = |k: &PAdicContext| ZpMatrix::from_i64_rows(k, &[vec![3]]);
        let h0 = certified_homology(&c, &d1, &|k| Ok(ZpMatrix::zeros(k, 0, 1))).unwrap();
        assert_eq!((h0.e(), h0.free_rank()), (1, 0));
        let h1 = certified_homology(&c, &|k| Ok(ZpMatrix::zeros(k, 1, 0)), &d1).unwrap();
        assert!(h1.is_zero() && h1.certified());
    }

    #[test]
    fn non_complex_is_rejected() {
        let c = ctx();
        let a = ZpMatrix::identity(&c, 2);
        assert!(matches!(
            homology_structure(&a, &a),
            Err(Error::ComplexNotComposable { .. })
        ));
    }

    #[test]
    fn exact_pair_has_zero_homology() {
        let c = ctx();
        // Zp^2 --[1,1]^T--> ... d_in spans the kernel of d_out = [1, -1].
        let d_out = ZpMatrix::from_i64_rows(&c, &[vec![1, -1]]).unwrap();
        let d_in = ZpMatrix::from_i64_rows(&c, &[vec![1], vec![1]]).unwrap();
        assert!(homology_structure(&d_in, &d_out).unwrap().is_zero());
    }
}
