use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::module_theory::{lambda_rank, mu_exact, tail_stable};
use crate::padic_linalg::PAdicContext;

use super::grid::{sweep_diagonal, TowerRecord};
use super::semidirect::SemidirectModule;

/// Least-squares fit of `c_0 p^{rk} + c_1 k p^{(r-1)k} + c_2 p^{(r-1)k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthModel {
    pub coefficients: [f64; 3],
    /// `value - model` per point.
    pub residuals: Vec<f64>,
}

fn basis(k: u32, p: u64, r: usize) -> [f64; 3] {
    let (pf, kf, rf) = (p as f64, k as f64, r as f64);
    let low = pf.powf((rf - 1.0) * kf);
    [pf.powf(rf * kf), kf * low, low]
}

/// Minimum-norm least squares, so short windows still produce a model.
pub fn fit_growth_model(levels: &[u32], values: &[f64], p: u64, r: usize) -> GrowthModel {
    let a = DMatrix::from_fn(levels.len(), 3, |i, j| basis(levels[i], p, r)[j]);
    let b = DVector::from_column_slice(values);
    let x = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-9)
        .unwrap_or_else(|_| DVector::zeros(3));
    let fitted = &a * &x;
    GrowthModel {
        coefficients: [x[0], x[1], x[2]],
        residuals: values.iter().zip(fitted.iter()).map(|(v, f)| v - f).collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthFit {
    pub p: u64,
    pub r: usize,
    pub lambda_rank: usize,
    pub diagonal: Vec<TowerRecord>,
    pub model: GrowthModel,
    /// `(e_{n,n} - rank_Λ n p^{rn}) / p^{rn}`.
    pub residuals: Vec<f64>,
    /// `max |residual|` on the window.
    pub bound: f64,
    /// `|residual|` does not grow over the second half of the window.
    pub tail_stable: bool,
    /// `e_{n,n} / p^{rn}`, reported when `rank_Λ = 0`.
    pub torsion_ratios: Option<Vec<f64>>,
    /// `e_{n,n} / ((n + 1) p^{(r-1)n})`, reported when also `μ = 0`.
    pub mu_zero_ratios: Option<Vec<f64>>,
    /// `(n0, max_{n >= n0} e_{n,n} / p^{rn})`.
    pub beta_candidates: Vec<(u32, f64)>,
    pub certified: bool,
    /// Every cell certified and every residual finite.
    pub pass: bool,
}

/// Fits the diagonal `e_{n,n}`, `n = 0..=n_max`.
pub fn diagonal_fit(x: &SemidirectModule, n_max: u32, ctx: &PAdicContext) -> Result<GrowthFit> {
    let rank = lambda_rank(x.base(), ctx)?.rank;
    let diagonal = sweep_diagonal(x, n_max, ctx)?;
    Ok(assemble(x, rank, diagonal))
}

pub(crate) fn assemble(x: &SemidirectModule, rank: usize, diagonal: Vec<TowerRecord>) -> GrowthFit {
    let (p, r) = (x.p(), x.r());
    let pf = p as f64;
    let top = |n: u32| pf.powf((r * n as usize) as f64);
    let levels: Vec<u32> = diagonal.iter().map(|c| c.n).collect();
    let es: Vec<f64> = diagonal.iter().map(|c| c.e as f64).collect();
    let residuals: Vec<f64> = diagonal
        .iter()
        .map(|c| (c.e as f64 - rank as f64 * c.n as f64 * top(c.n)) / top(c.n))
        .collect();
    let abs: Vec<f64> = residuals.iter().map(|x| x.abs()).collect();
    let torsion_ratios = (rank == 0).then(|| diagonal.iter().map(|c| c.e as f64 / top(c.n)).collect::<Vec<_>>());
    let mu_zero_ratios = (rank == 0 && mu_exact(x.base()) == Some(0)).then(|| {
        diagonal
            .iter()
            .map(|c| c.e as f64 / ((c.n + 1) as f64 * pf.powf(((r - 1) * c.n as usize) as f64)))
            .collect()
    });
    let beta_candidates = levels
        .iter()
        .map(|&n0| {
            let beta = diagonal
                .iter()
                .filter(|c| c.n >= n0)
                .map(|c| c.e as f64 / top(c.n))
                .fold(0.0, f64::max);
            (n0, beta)
        })
        .collect();
    let certified = diagonal.iter().all(|c| c.certified);
    let pass = certified && residuals.iter().all(|x| x.is_finite());
    GrowthFit {
        p,
        r,
        lambda_rank: rank,
        model: fit_growth_model(&levels, &es, p, r),
        bound: abs.iter().fold(0.0, |a, &b| a.max(b)),
        tail_stable: tail_stable(&abs),
        diagonal,
        residuals,
        torsion_ratios,
        mu_zero_ratios,
        beta_candidates,
        certified,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iwasawa_ring::IntPoly;
    use crate::module_theory::ModulePresentation;

    fn ctx() -> PAdicContext {
        PAdicContext::new(3, 20, 4).unwrap()
    }

    #[test]
    fn model_recovers_exact_coefficients() {
        let levels = [0u32, 1, 2, 3, 4];
        let values: Vec<f64> = levels.iter().map(|&k| 2.0 * 9f64.powi(k as i32) + 3.0 * k as f64 * 3f64.powi(k as i32) - 3f64.powi(k as i32)).collect();
        let fit = fit_growth_model(&levels, &values, 3, 2);
        for (c, e) in fit.coefficients.iter().zip([2.0, 3.0, -1.0]) {
            assert!((c - e).abs() < 1e-6);
        }
    }

    #[test]
    fn scalar_torsion_regime() {
        let x = SemidirectModule::direct_product(ModulePresentation::p_cyclic(1, 1, 3).unwrap()).unwrap();
        let fit = diagonal_fit(&x, 3, &ctx()).unwrap();
        assert_eq!(fit.lambda_rank, 0);
        assert_eq!(fit.torsion_ratios.unwrap(), vec![1.0; 4]);
        assert!(fit.mu_zero_ratios.is_none());
        assert!(fit.pass);
    }

    #[test]
    fn mu_zero_regime() {
        let base = ModulePresentation::cyclic(IntPoly::parse("T1 - 3", 1, 3).unwrap(), 1, 3).unwrap();
        let x = SemidirectModule::direct_product(base).unwrap();
        let fit = diagonal_fit(&x, 3, &ctx()).unwrap();
        assert_eq!(fit.mu_zero_ratios.unwrap(), vec![1.0; 4]);
    }
}
