//! The (n, m) grid of a Z_p ⋊ Z_p tower and the diagonal growth fit.

use iwasawa::cli::{diagonal_svg, tower_csv};
use iwasawa::iwasawa_ring::{IntPoly, RingAutomorphism};
use iwasawa::module_theory::{ModulePresentation, PolyMatrix};
use iwasawa::padic_linalg::PAdicContext;
use iwasawa::tower_sim::{diagonal_fit, sweep, SemidirectModule};

fn main() -> iwasawa::Result<()> {
    let p = 3;
    let ctx = PAdicContext::new(p, 20, 4)?;
    let x = SemidirectModule::new(
        ModulePresentation::p_cyclic(1, 1, p)?,
        RingAutomorphism::scalar(1, 4, p)?,
        PolyMatrix::from_rows(1, vec![vec![IntPoly::one(1)]])?,
    )?;
    let table = sweep(&x, 0..=2, 0..=3, &ctx)?;
    print!("{}", tower_csv(&table));

    let fit = diagonal_fit(&x, 3, &ctx)?;
    println!("residuals {:?}", fit.residuals);
    println!("e/p^n {:?}", fit.torsion_ratios);
    let out = std::env::temp_dir().join("tower_sweep_diagonal.svg");
    std::fs::write(&out, diagonal_svg(&fit.diagonal, "Λ_1/(p), ρ = 4")).expect("write svg");
    println!("plot written to {}", out.display());
    Ok(())
}
