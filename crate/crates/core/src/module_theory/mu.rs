use crate::error::{Error, Result};
use crate::padic_linalg::PAdicContext;

use super::invariants::coinvariants;
use super::presentation::{ModulePresentation, Provenance};

fn mu_of(provenance: &Provenance, p: u64) -> Option<u64> {
    match provenance {
        Provenance::Free { .. } => Some(0),
        Provenance::PCyclic { a } => Some(*a as u64),
        Provenance::Cyclic { f, s } => f.p_content(p).map(|k| k as u64 * *s as u64),
        Provenance::Koszul { generators } => match generators.as_slice() {
            [f] => f.p_content(p).map(u64::from),
            gens if gens.iter().any(|g| g.p_content(p) == Some(0)) => Some(0),
            _ => None,
        },
        Provenance::DirectSum(parts) => parts.iter().map(|q| mu_of(q, p)).sum(),
        Provenance::Raw => None,
    }
}

/// `μ_H(M)` from the constructor history; `None` when no rule applies.
pub fn mu_exact(module: &ModulePresentation) -> Option<u64> {
    mu_of(module.provenance(), module.p())
}

#[derive(Clone, Debug, PartialEq)]
pub struct MuEstimate {
    pub estimate: u64,
    /// `(m, e(M_{H_m}) / p^{rm})` for `m = 0..=m_max`.
    pub ratios: Vec<(u32, f64)>,
    /// The last two ratios round to the same integer.
    pub stable: bool,
}

/// Nearest integer to `e(M_{H_m}) / p^{rm}` at `m = m_max`.
pub fn mu_estimate(module: &ModulePresentation, m_max: u32, ctx: &PAdicContext) -> Result<MuEstimate> {
    if m_max == 0 {
        return Err(Error::InvalidInput("mu_estimate needs m_max >= 1".into()));
    }
    let p = ctx.p() as f64;
    let r = module.r() as f64;
    let ratios = (0..=m_max)
        .map(|m| {
            let e = coinvariants(module, m, ctx)?.e();
            Ok((m, e as f64 / p.powf(r * m as f64)))
        })
        .collect::<Result<Vec<_>>>()?;
    let rounded: Vec<u64> = ratios.iter().map(|&(_, x)| x.round() as u64).collect();
    let n = rounded.len();
    Ok(MuEstimate {
        estimate: rounded[n - 1],
        stable: rounded[n - 1] == rounded[n - 2],
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iwasawa_ring::IntPoly;

    #[test]
    fn compositional() {
        let a = ModulePresentation::p_cyclic(1, 2, 3).unwrap();
        let b = ModulePresentation::p_cyclic(1, 1, 3).unwrap();
        assert_eq!(mu_exact(&ModulePresentation::direct_sum(&[a, b]).unwrap()), Some(3));
        let f = IntPoly::parse("p*(1 + T1)", 1, 3).unwrap();
        assert_eq!(mu_exact(&ModulePresentation::cyclic(f, 3, 3).unwrap()), Some(3));
        let g = IntPoly::parse("T1 - p", 1, 3).unwrap();
        assert_eq!(mu_exact(&ModulePresentation::cyclic(g, 1, 3).unwrap()), Some(0));
    }

    #[test]
    fn estimate_matches() {
        let c = PAdicContext::new(3, 20, 4).unwrap();
        let m = ModulePresentation::cyclic(IntPoly::parse("p*T1", 1, 3).unwrap(), 1, 3).unwrap();
        let est = mu_estimate(&m, 3, &c).unwrap();
        assert_eq!(est.estimate, 1);
        let sq = ModulePresentation::p_cyclic(2, 2, 3).unwrap();
        assert_eq!(mu_estimate(&sq, 1, &c).unwrap().ratios[1].1, 2.0);
    }
}
