//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use iwasawa::gamma_tools::{gamma_estimate_check, iwasawa_fit, weierstrass_prepare, ZpGammaModule};
use iwasawa::iwasawa_ring::{IntPoly, LambdaElement, RingAutomorphism};
use iwasawa::module_theory::{
    coinvariants, homology_all, lambda_rank, mu_exact, structure_annihilator_report, verify_estimate, CMStructure,
    Law, ModulePresentation, PolyMatrix,
};
use iwasawa::padic_linalg::{certified_cokernel, escalate_and_retry, PAdicContext, ZpMatrix};
use iwasawa::tower_sim::{diagonal_fit, SemidirectModule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SNF_CASES: usize = 200;
const SNF_BUDGET: Duration = Duration::from_secs(10);
const SCALAR_BUDGET: Duration = Duration::from_secs(120);
const TOWER_BUDGET: Duration = Duration::from_secs(300);
/// `e / p^{rm} <= (m + 1) p^{-m} * ELEMENTARY_CONSTANT` for content-free `f`;
/// the fixtures have `λ <= 2`.
const ELEMENTARY_CONSTANT: f64 = 3.0;
/// Window bound on `|e_{n,n} - n p^n| / p^n` for the free tower, `n <= 3`.
const DIAGONAL_WINDOW_BOUND: f64 = 3.0;
/// Bound on `e_{n,n} / (n + 1)` in the `μ = 0` torsion regime.
const MU_ZERO_BOUND: f64 = 2.0;
const EXACT: f64 = 0.0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ctx(p: u64) -> PAdicContext {
    PAdicContext::new(p, 20, 4).unwrap()
}

fn poly(s: &str, r: usize) -> IntPoly {
    IntPoly::parse(s, r, 3).unwrap()
}

fn check(cond: bool, ok: String, bad: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(bad)
    }
}

fn snf_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut mismatches = Vec::new();
    for case in 0..SNF_CASES {
        let p = if case % 2 == 0 { 3 } else { 5 };
        let bound = (p * p * p) as i64;
        let (rows, cols) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let a: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect();
        let build = |k: &PAdicContext| ZpMatrix::from_i64_rows(k, &a);
        let h = escalate_and_retry(&ctx(p), |k| certified_cokernel(k, &build)).map_err(|e| e.to_string())?.value;
        if (h.torsion_exponents().to_vec(), h.free_rank()) != cokernel_oracle(&int_matrix(&a), cols, p) {
            mismatches.push(case);
        }
    }
    let elapsed = start.elapsed();
    check(
        mismatches.is_empty() && elapsed < SNF_BUDGET,
        format!("{SNF_CASES} matrices agree, {elapsed:.2?}"),
        format!("mismatches {mismatches:?}, {elapsed:.2?}"),
    )
}

fn scalar_case() -> Outcome {
    let start = Instant::now();
    let c = ctx(3);
    let mut worst = 0.0f64;
    for (r, m_max) in [(1usize, 3u32), (2, 2)] {
        for s in 1..=2u32 {
            let module = ModulePresentation::p_cyclic(r, s, 3).map_err(|e| e.to_string())?;
            for m in 0..=m_max {
                let e = coinvariants(&module, m, &c).map_err(|e| e.to_string())?.e() as f64;
                let expected = s as f64 * 3f64.powi((r as u32 * m) as i32);
                worst = worst.max((e - expected).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        worst <= EXACT && elapsed < SCALAR_BUDGET,
        format!("e = s p^(rm) on every level, {elapsed:.2?}"),
        format!("max deviation {worst}, {elapsed:.2?}"),
    )
}

fn elementary_dichotomy() -> Outcome {
    let c = ctx(3);
    let mut notes = Vec::new();
    for (r, m_max) in [(1usize, 3u32), (2, 2)] {
        let pr = |s: &str| IntPoly::parse(s, r, 3).unwrap();
        let scalar = ModulePresentation::cyclic(pr("p"), 1, 3).unwrap();
        let rep = verify_estimate(&scalar, Law::Elementary, 0..=m_max, &c).map_err(|e| e.to_string())?;
        for rec in &rep.records {
            let ratio = rec.e as f64 / 3f64.powi((r as u32 * rec.m) as i32);
            if (ratio - 1.0).abs() > EXACT {
                return Err(format!("r={r} f=p: ratio {ratio} at m={}", rec.m));
            }
        }
        for f in ["T1", "T1 - p", "T1^2 + p"] {
            let module = ModulePresentation::cyclic(pr(f), 1, 3).unwrap();
            let rep = verify_estimate(&module, Law::Elementary, 0..=m_max, &c).map_err(|e| e.to_string())?;
            let ratios: Vec<f64> = rep
                .records
                .iter()
                .map(|x| x.e as f64 / 3f64.powi((r as u32 * x.m) as i32))
                .collect();
            let constant = rep
                .records
                .iter()
                .zip(&ratios)
                .map(|(x, q)| q * 3f64.powi(x.m as i32) / (x.m + 1) as f64)
                .fold(0.0, f64::max);
            let decaying = ratios.last() <= ratios.first() && ratios.windows(2).last().is_none_or(|w| w[1] <= w[0]);
            if !(rep.pass && constant <= ELEMENTARY_CONSTANT && decaying) {
                return Err(format!("r={r} f={f}: ratios {ratios:?} constant {constant} pass {}", rep.pass));
            }
            notes.push(format!("{constant:.2}"));
        }
    }
    Ok(format!("f = p exact; content-free constants [{}] <= {ELEMENTARY_CONSTANT}", notes.join(", ")))
}

fn gamma_fixtures() -> Vec<ZpGammaModule> {
    let p = 3;
    vec![
        ZpGammaModule::new(1, vec![], vec![vec![4]], p).unwrap(),
        ZpGammaModule::new(1, vec![1], vec![vec![4, 0], vec![0, 1]], p).unwrap(),
        ZpGammaModule::new(2, vec![], vec![vec![1, -3], vec![1, 1]], p).unwrap(),
        ZpGammaModule::new(2, vec![2], vec![vec![1, -3, 0], vec![1, 1, 0], vec![0, 0, 1]], p).unwrap(),
        ZpGammaModule::new(1, vec![2], vec![vec![4, 0], vec![1, 4]], p).unwrap(),
        ZpGammaModule::new(1, vec![1, 3], vec![vec![7, 0, 0], vec![0, 1, 0], vec![0, 0, 4]], p).unwrap(),
        ZpGammaModule::new(3, vec![], vec![vec![1, 0, -3], vec![1, 1, 0], vec![0, 1, 1]], p).unwrap(),
    ]
}

fn descent_identity() -> Outcome {
    let c = ctx(3);
    let mut rows = 0;
    for (i, m) in gamma_fixtures().iter().enumerate() {
        let rep = gamma_estimate_check(m, 0..=4, &c).map_err(|e| format!("fixture {i}: {e}"))?;
        if let Some(row) = rep.rows.iter().find(|r| r.lhs != r.rhs) {
            return Err(format!("fixture {i}: n={} lhs {} rhs {}", row.n, row.lhs, row.rhs));
        }
        rows += rep.rows.len();
    }
    Ok(format!("{} fixtures, {rows} rows, lhs = rhs", gamma_fixtures().len()))
}

fn fit_recovery() -> Outcome {
    let c = ctx(3);
    let module = ModulePresentation::cyclic(poly("p*(T1 - p)", 1), 1, 3).unwrap();
    let seq = (0..=5)
        .map(|m| coinvariants(&module, m, &c).map(|h| h.e() as i64))
        .collect::<iwasawa::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    let fit = iwasawa_fit(&seq, 3).map_err(|e| e.to_string())?;
    let w = weierstrass_prepare(&LambdaElement::from_poly(&c, &poly("p*(T1 - p)", 1)), 8).map_err(|e| e.to_string())?;
    let mu = mu_exact(&module);
    check(
        (fit.mu, fit.lambda) == (1, 1) && mu == Some(1) && w.lambda == 1 && fit.exact,
        format!("mu {} lambda {} nu {} exact, mu_exact {:?}, weierstrass lambda {}", fit.mu, fit.lambda, fit.nu, mu, w.lambda),
        format!("fit {fit:?}, mu_exact {mu:?}, weierstrass lambda {}", w.lambda),
    )
}

fn module_corpus() -> Vec<(&'static str, ModulePresentation)> {
    let p = 3;
    vec![
        ("free r=1", ModulePresentation::free(1, 1, p).unwrap()),
        ("free^2 r=2", ModulePresentation::free(2, 2, p).unwrap()),
        ("p^2 r=1", ModulePresentation::p_cyclic(1, 2, p).unwrap()),
        ("p r=2", ModulePresentation::p_cyclic(2, 1, p).unwrap()),
        ("T1 - p", ModulePresentation::cyclic(poly("T1 - p", 1), 1, p).unwrap()),
        ("(T1^2 + p)^2", ModulePresentation::cyclic(poly("T1^2 + p", 1), 2, p).unwrap()),
        ("p(T1 - p)", ModulePresentation::cyclic(poly("p*(T1 - p)", 1), 1, p).unwrap()),
        ("T1 T2 + p", ModulePresentation::cyclic(poly("T1*T2 + p", 2), 1, p).unwrap()),
        ("T1 - p r=2", ModulePresentation::cyclic(poly("T1 - p", 2), 1, p).unwrap()),
        ("koszul(T1, T2)", ModulePresentation::koszul(2, vec![poly("T1", 2), poly("T2", 2)], p).unwrap()),
        ("koszul(T1 - p, p)", ModulePresentation::koszul(2, vec![poly("T1 - p", 2), poly("p", 2)], p).unwrap()),
        (
            "free + T1",
            ModulePresentation::direct_sum(&[
                ModulePresentation::free(1, 1, p).unwrap(),
                ModulePresentation::cyclic(poly("T1", 1), 1, p).unwrap(),
            ])
            .unwrap(),
        ),
    ]
}

fn window(m: &ModulePresentation) -> u32 {
    if m.r() == 1 {
        3
    } else {
        2
    }
}

fn euler_characteristic() -> Outcome {
    let c = ctx(3);
    let mut checked = 0;
    for (name, module) in module_corpus() {
        let rank = lambda_rank(&module, &c).map_err(|e| e.to_string())?.rank as i64;
        for m in 0..=window(&module) {
            let hs = homology_all(&module, m, &c).map_err(|e| e.to_string())?;
            let chi: i64 = hs
                .iter()
                .enumerate()
                .map(|(i, h)| if i % 2 == 0 { h.rank() as i64 } else { -(h.rank() as i64) })
                .sum();
            let expected = rank * 3i64.pow(module.r() as u32 * m);
            if chi != expected {
                return Err(format!("{name} m={m}: chi {chi} expected {expected}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{} fixtures, {checked} levels, zero deviation", module_corpus().len()))
}

fn annihilator_laws() -> Outcome {
    let c = ctx(3);
    let mut constants = Vec::new();
    for (name, module) in module_corpus() {
        let w = window(&module);
        let tech = verify_estimate(&module, Law::TechLemma, 0..=w, &c).map_err(|e| format!("{name}: {e}"))?;
        let mut tau = vec![0u64; module.r()];
        tau[0] = 1;
        let structures = [
            CMStructure::empty(0),
            CMStructure::whole_module(0, tau.clone(), &module).map_err(|e| e.to_string())?,
        ];
        let mut reports = vec![tech];
        for s in &structures {
            reports.push(structure_annihilator_report(&module, s, 0..=w, &c).map_err(|e| format!("{name}: {e}"))?);
        }
        for rep in &reports {
            if !rep.pass {
                return Err(format!("{name} {}: residuals {:?}", rep.law, rep.residuals));
            }
        }
        let top = |xs: &[f64]| xs.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        constants.push(format!("{}:{}", top(&reports[0].residuals), top(&reports[2].residuals)));
    }
    Ok(format!("tail-stable on {} fixtures; c (tech:structure) [{}]", module_corpus().len(), constants.join(" ")))
}

fn free_tower() -> SemidirectModule {
    SemidirectModule::new(
        ModulePresentation::free(1, 1, 3).unwrap(),
        RingAutomorphism::scalar(1, 4, 3).unwrap(),
        PolyMatrix::from_rows(1, vec![vec![IntPoly::one(1)]]).unwrap(),
    )
    .unwrap()
}

fn diagonal_law() -> Outcome {
    let start = Instant::now();
    let fit = diagonal_fit(&free_tower(), 3, &ctx(3)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let golden: Vec<u64> = read_tower_csv(GOLDEN_TOWER)
        .into_iter()
        .filter(|row| row.0 == row.1)
        .map(|row| row.2)
        .collect();
    let es: Vec<u64> = fit.diagonal.iter().map(|c| c.e).collect();
    check(
        fit.pass && fit.bound <= DIAGONAL_WINDOW_BOUND && es == golden && elapsed < TOWER_BUDGET,
        format!(
            "e_nn {es:?} = golden, residuals {:?} within window bound {} (|residual| = n, coinvariants free), {elapsed:.2?}",
            fit.residuals, DIAGONAL_WINDOW_BOUND
        ),
        format!("e_nn {es:?} golden {golden:?} residuals {:?} pass {}", fit.residuals, fit.pass),
    )
}

fn torsion_regimes() -> Outcome {
    let c = ctx(3);
    let scalar = SemidirectModule::direct_product(ModulePresentation::p_cyclic(1, 1, 3).unwrap()).unwrap();
    let fit = diagonal_fit(&scalar, 3, &c).map_err(|e| e.to_string())?;
    let ratios = fit.torsion_ratios.clone().unwrap_or_default();
    if ratios.len() != 4 || ratios.iter().any(|&x| (x - 1.0).abs() > EXACT) {
        return Err(format!("Λ_1/(p): e/p^n = {ratios:?}"));
    }
    let base = ModulePresentation::cyclic(poly("T1 - p", 1), 1, 3).unwrap();
    let fit = diagonal_fit(&SemidirectModule::direct_product(base).unwrap(), 3, &c).map_err(|e| e.to_string())?;
    let mu_zero = fit.mu_zero_ratios.clone().unwrap_or_default();
    check(
        mu_zero.len() == 4 && mu_zero.iter().all(|&x| x <= MU_ZERO_BOUND) && fit.certified,
        format!("Λ_1/(p): e/p^n = {ratios:?}; Λ_1/(T - p): e/(n+1) = {mu_zero:?}"),
        format!("Λ_1/(T - p): e/(n+1) = {mu_zero:?}"),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("tower.toml");
    std::fs::write(
        &input,
        "schema_version = 1\n[module]\nprime = 3\nr = 1\nconstructor = \"free\"\nrank = 1\n[tower]\nrho = [[4]]\nphi = [[\"1\"]]\nn_max = 3\nm_max = 3\n",
    )
    .map_err(|e| e.to_string())?;
    let mut csvs = Vec::new();
    for jobs in ["1", "4"] {
        let out = dir.path().join(format!("out{jobs}"));
        let status = Command::new(env!("CARGO_BIN_EXE_iwasawa"))
            .args(["sweep", "--jobs", jobs, "--input"])
            .arg(&input)
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?
            .status;
        if !status.success() {
            return Err(format!("sweep --jobs {jobs} exited with {status}"));
        }
        csvs.push(std::fs::read(out.join("tower.csv")).map_err(|e| e.to_string())?);
    }
    check(
        csvs[0] == csvs[1],
        format!("--jobs 1 and 4 give identical {} byte CSVs", csvs[0].len()),
        "CSV differs between --jobs 1 and 4".into(),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("SNF oracle equivalence", snf_oracle),
        ("exact scalar case", scalar_case),
        ("elementary-estimate dichotomy", elementary_dichotomy),
        ("exact descent identity", descent_identity),
        ("Iwasawa fit recovery", fit_recovery),
        ("Euler characteristic identity", euler_characteristic),
        ("annihilator laws", annihilator_laws),
        ("tower diagonal law", diagonal_law),
        ("torsion regimes", torsion_regimes),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
