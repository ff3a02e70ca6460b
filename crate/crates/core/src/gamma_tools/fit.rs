use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// `e_n = μ p^n + λ n + ν` for `n >= n_stable`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IwasawaFit {
    pub mu: i64,
    pub lambda: i64,
    pub nu: i64,
    pub n_stable: usize,
    /// The formula reproduces the sequence exactly on at least three
    /// trailing terms; otherwise the constants are a rounded least-squares fit.
    pub exact: bool,
}

pub const MIN_FIT_LENGTH: usize = 4;

fn formula(mu: i64, lambda: i64, nu: i64, p: i128, n: usize) -> i128 {
    mu as i128 * p.pow(n as u32) + lambda as i128 * n as i128 + nu as i128
}

/// Fits the Iwasawa constants to `e[n]`, `n = 0, 1, ...`.
pub fn iwasawa_fit(e: &[i64], p: u64) -> Result<IwasawaFit> {
    let len = e.len();
    if len < MIN_FIT_LENGTH {
        return Err(Error::SequenceTooShort {
            len,
            min: MIN_FIT_LENGTH,
        });
    }
    if len > 60 {
        return Err(Error::InvalidInput(format!("sequence of length {len} overflows p^n")));
    }
    let p = p as i128;
    let last = len - 1;
    // second difference of the last three terms: μ p^{L-2} (p-1)^2
    let d2 = e[last] as i128 - 2 * e[last - 1] as i128 + e[last - 2] as i128;
    let scale = p.pow(last as u32 - 2) * (p - 1) * (p - 1);
    let mu = (d2 as f64 / scale as f64).round() as i64;
    let s: Vec<i128> = (0..len).map(|n| e[n] as i128 - mu as i128 * p.pow(n as u32)).collect();
    let lambda = (s[last] - s[last - 1]) as i64;
    let nu = (s[last] - lambda as i128 * last as i128) as i64;
    let mut n_stable = len;
    while n_stable > 0 && formula(mu, lambda, nu, p, n_stable - 1) == e[n_stable - 1] as i128 {
        n_stable -= 1;
    }
    if len - n_stable >= 3 {
        return Ok(IwasawaFit {
            mu,
            lambda,
            nu,
            n_stable,
            exact: true,
        });
    }
    let a = DMatrix::from_fn(len, 3, |n, j| match j {
        0 => (p as f64).powi(n as i32),
        1 => n as f64,
        _ => 1.0,
    });
    let b = DVector::from_iterator(len, e.iter().map(|&x| x as f64));
    let x = a
        .svd(true, true)
        .solve(&b, 1e-12)
        .map_err(|msg| Error::InvalidInput(msg.to_string()))?;
    Ok(IwasawaFit {
        mu: x[0].round() as i64,
        lambda: x[1].round() as i64,
        nu: x[2].round() as i64,
        n_stable: 0,
        exact: false,
    })
}
