use std::fmt::Write as _;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::gamma_tools::{gamma_estimate_check, iwasawa_fit, GammaEstimateReport, IwasawaFit, ZpGammaModule};
use crate::iwasawa_ring::{IntPoly, RingAutomorphism};
use crate::module_theory::{
    coinvariants, mu_exact, structure_annihilator_report, verify_estimate, InvariantReport, Law, ModulePresentation,
    PolyMatrix,
};
use crate::padic_linalg::{precision_limit, PAdicContext, DEFAULT_GUARD, DEFAULT_MATRIX_CEILING, DEFAULT_PRECISION};
use crate::tower_sim::{diagonal_fit, sweep, GrowthFit, SemidirectModule, TowerTable};

use super::document::{load_spec, ModuleInfo, Spec};
use super::output::{diagonal_svg, gamma_csv, report_csv, tower_csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Name of the extra law handled by the structure-quotient report.
pub const STRUCTURE_LAW: &str = "structure-lemma";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Compute,
    Sweep,
    Fit,
    Verify,
    Demo,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub out: PathBuf,
    pub precision: Option<u32>,
    pub jobs: Option<usize>,
    pub ceiling: Option<usize>,
    pub law: Option<String>,
    pub n_max: Option<u32>,
    pub m_max: Option<u32>,
}

impl RunConfig {
    pub fn new(command: Command, out: impl Into<PathBuf>) -> Self {
        RunConfig {
            command,
            input: None,
            out: out.into(),
            precision: None,
            jobs: None,
            ceiling: None,
            law: None,
            n_max: None,
            m_max: None,
        }
    }
}

/// Exit status, the files written and the text printed to stdout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub artifacts: Vec<PathBuf>,
    pub summary: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidPrecision(_) => EXIT_PARSE,
        Error::PrecisionExhausted { .. } => EXIT_PRECISION,
        _ => EXIT_FAILURE,
    }
}

/// Runs one command. Errors become an exit status with the message as summary.
pub fn run(config: &RunConfig) -> Outcome {
    let mut artifacts = Vec::new();
    let result = (|| {
        if config.ceiling == Some(0) {
            return Err(Error::InvalidInput("--ceiling must be positive".into()));
        }
        if config.jobs == Some(0) {
            return Err(Error::InvalidInput("--jobs must be positive".into()));
        }
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(j) = config.jobs {
            builder = builder.num_threads(j);
        }
        let pool = builder
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
        pool.install(|| dispatch(config, &mut artifacts))
    })();
    match result {
        Ok((passed, summary)) => Outcome {
            code: if passed { EXIT_OK } else { EXIT_VERIFY },
            artifacts,
            summary,
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            artifacts,
            summary: format!("error: {e}\n"),
        },
    }
}

fn read_spec(config: &RunConfig) -> Result<Spec> {
    let path = config
        .input
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("--input is required for this command".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    load_spec(&text)
}

fn context(config: &RunConfig, p: u64, precision: Option<u32>, guard: Option<u32>) -> Result<PAdicContext> {
    if !crate::padic_linalg::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let limit = precision_limit(p);
    let n = config.precision.or(precision).unwrap_or(DEFAULT_PRECISION.min(limit));
    let guard = guard.unwrap_or(DEFAULT_GUARD.min(n.saturating_sub(1)).max(1));
    Ok(PAdicContext::new(p, n, guard)?.with_matrix_ceiling(config.ceiling.unwrap_or(DEFAULT_MATRIX_CEILING)))
}

fn module_context(config: &RunConfig, info: &ModuleInfo) -> Result<PAdicContext> {
    context(config, info.module.p(), info.precision, info.guard)
}

fn write(out: &Path, name: &str, contents: &str, artifacts: &mut Vec<PathBuf>) -> Result<()> {
    fs::create_dir_all(out).map_err(|e| Error::InvalidInput(format!("{}: {e}", out.display())))?;
    let path = out.join(name);
    fs::write(&path, contents).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    artifacts.push(path);
    Ok(())
}

fn dispatch(config: &RunConfig, artifacts: &mut Vec<PathBuf>) -> Result<(bool, String)> {
    match config.command {
        Command::Compute | Command::Verify => {
            let spec = read_spec(config)?;
            let (pass, summary, csv) = evaluate(config, &spec)?;
            write(&config.out, "report.csv", &csv, artifacts)?;
            write(&config.out, "summary.txt", &summary, artifacts)?;
            Ok((pass || config.command == Command::Compute, summary))
        }
        Command::Sweep => {
            let spec = read_spec(config)?;
            let info = spec
                .tower
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("sweep needs a [tower] table".into()))?;
            let ctx = module_context(config, spec.module.as_ref().expect("tower implies module"))?;
            let n_range = override_end(info.n_range.clone(), config.n_max);
            let m_range = override_end(info.m_range.clone(), config.m_max);
            let table = sweep(&info.tower, n_range, m_range, &ctx)?;
            write(&config.out, "tower.csv", &tower_csv(&table), artifacts)?;
            write(&config.out, "diagonal.svg", &diagonal_svg(&table.diagonal(), "e(n,n) and rank(n,n)"), artifacts)?;
            Ok((true, summarize_table(&table)))
        }
        Command::Fit => {
            let spec = read_spec(config)?;
            let summary = fit(config, &spec)?;
            write(&config.out, "fit.txt", &summary, artifacts)?;
            Ok((true, summary))
        }
        Command::Demo => demo(config, artifacts),
    }
}

fn override_end(r: RangeInclusive<u32>, end: Option<u32>) -> RangeInclusive<u32> {
    match end {
        Some(e) => *r.start()..=e.max(*r.start()),
        None => r,
    }
}

fn evaluate(config: &RunConfig, spec: &Spec) -> Result<(bool, String, String)> {
    if let Some(info) = &spec.module {
        let ctx = module_context(config, info)?;
        let law = config
            .law
            .clone()
            .or_else(|| spec.run.law.clone())
            .unwrap_or_else(|| Law::General.name().to_string());
        let lo = spec.run.m_min.unwrap_or(0);
        let hi = config.m_max.or(spec.run.m_max).unwrap_or(3).max(lo);
        let report = if law == STRUCTURE_LAW {
            let s = spec
                .structure
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("structure-lemma needs a [structure] table".into()))?;
            structure_annihilator_report(&info.module, s, lo.max(s.m0())..=hi, &ctx)?
        } else {
            verify_estimate(&info.module, law.parse()?, lo..=hi, &ctx)?
        };
        return Ok((report.pass, summarize_report(&report), report_csv(&report)));
    }
    if let Some(g) = &spec.gamma {
        let ctx = context(config, g.prime, None, None)?;
        let range = override_end(g.n_range.clone(), config.n_max);
        let report = gamma_estimate_check(&g.module, range, &ctx)?;
        return Ok((report.holds, summarize_gamma(&report), gamma_csv(&report)));
    }
    Err(Error::InvalidInput("nothing to compute: add a [module] or [gamma_module] table".into()))
}

fn fit(config: &RunConfig, spec: &Spec) -> Result<String> {
    if let Some((p, seq)) = &spec.fit {
        return Ok(summarize_iwasawa(&iwasawa_fit(seq, *p)?, None));
    }
    if let Some(info) = &spec.tower {
        let ctx = module_context(config, spec.module.as_ref().expect("tower implies module"))?;
        let n_max = config.n_max.unwrap_or(*info.n_range.end());
        return Ok(summarize_growth(&diagonal_fit(&info.tower, n_max, &ctx)?));
    }
    if let Some(info) = &spec.module {
        if info.module.r() != 1 {
            return Err(Error::InvalidInput("module fits need r = 1; use a [tower] for r > 1".into()));
        }
        let ctx = module_context(config, info)?;
        let m_max = config.m_max.or(spec.run.m_max).unwrap_or(5).max(3);
        let seq = (0..=m_max)
            .map(|m| Ok(coinvariants(&info.module, m, &ctx)?.e() as i64))
            .collect::<Result<Vec<_>>>()?;
        let fit = iwasawa_fit(&seq, info.module.p())?;
        return Ok(summarize_iwasawa(&fit, mu_exact(&info.module)));
    }
    Err(Error::InvalidInput("fit needs a [fit], [tower] or [module] table".into()))
}

pub fn summarize_report(r: &InvariantReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "law: {}", r.law);
    let _ = writeln!(s, "constant: {}", r.constant);
    let _ = writeln!(s, "bound: {}", r.bound);
    let _ = writeln!(s, "tail_stable: {}", r.tail_stable);
    let _ = writeln!(s, "certified: {}", r.records.iter().all(|x| x.certified));
    let _ = writeln!(s, "pass: {}", r.pass);
    s
}

pub fn summarize_gamma(r: &GammaEstimateReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "law: gamma-estimate");
    let _ = writeln!(s, "char_poly: {}", r.char_poly);
    let _ = writeln!(s, "lambda: {}", r.lambda);
    let _ = writeln!(s, "max_factor_degree: {}", r.max_factor_degree);
    let _ = writeln!(s, "n0: {}", r.n0);
    let _ = writeln!(s, "pass: {}", r.holds);
    s
}

pub fn summarize_iwasawa(f: &IwasawaFit, mu_exact: Option<u64>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "kind: iwasawa");
    let _ = writeln!(s, "mu: {}", f.mu);
    let _ = writeln!(s, "lambda: {}", f.lambda);
    let _ = writeln!(s, "nu: {}", f.nu);
    let _ = writeln!(s, "n_stable: {}", f.n_stable);
    let _ = writeln!(s, "exact: {}", f.exact);
    if let Some(mu) = mu_exact {
        let _ = writeln!(s, "mu_exact: {mu}");
    }
    s
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn summarize_growth(g: &GrowthFit) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "kind: growth");
    let _ = writeln!(s, "lambda_rank: {}", g.lambda_rank);
    let es: Vec<String> = g.diagonal.iter().map(|c| c.e.to_string()).collect();
    let _ = writeln!(s, "diagonal_e: {}", es.join(" "));
    let _ = writeln!(s, "coefficients: {}", join(&g.model.coefficients));
    let _ = writeln!(s, "residuals: {}", join(&g.residuals));
    let _ = writeln!(s, "bound: {}", g.bound);
    let _ = writeln!(s, "tail_stable: {}", g.tail_stable);
    if let Some(t) = &g.torsion_ratios {
        let _ = writeln!(s, "torsion_ratios: {}", join(t));
    }
    if let Some(t) = &g.mu_zero_ratios {
        let _ = writeln!(s, "mu_zero_ratios: {}", join(t));
    }
    let betas: Vec<String> = g.beta_candidates.iter().map(|(n, b)| format!("{n}:{b}")).collect();
    let _ = writeln!(s, "beta_candidates: {}", betas.join(" "));
    let _ = writeln!(s, "certified: {}", g.certified);
    let _ = writeln!(s, "pass: {}", g.pass);
    s
}

fn summarize_table(t: &TowerTable) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "cells: {}", t.records().len());
    let es: Vec<String> = t.diagonal().iter().map(|c| format!("{}:{}", c.n, c.e)).collect();
    let _ = writeln!(s, "diagonal_e: {}", es.join(" "));
    let _ = writeln!(s, "certified: {}", t.certified());
    s
}

fn poly(s: &str, r: usize, p: u64) -> Result<IntPoly> {
    IntPoly::parse(s, r, p)
}

/// Built-in fixtures, each run end to end.
fn demo(config: &RunConfig, artifacts: &mut Vec<PathBuf>) -> Result<(bool, String)> {
    let p = 3;
    let ctx = context(config, p, None, None)?;
    let mut s = String::new();
    let mut line = |name: &str, pass: bool, detail: String| {
        let _ = writeln!(s, "{:<36} {:<5} {detail}", name, if pass { "pass" } else { "fail" });
    };

    let sq = ModulePresentation::p_cyclic(1, 2, p)?;
    let rep = verify_estimate(&sq, Law::Elementary, 0..=3, &ctx)?;
    line("elementary Lambda_1/(p^2)", rep.pass, format!("bound {}", rep.bound));

    let tp = ModulePresentation::cyclic(poly("T1 - p", 1, p)?, 1, p)?;
    let rep = verify_estimate(&tp, Law::General, 0..=3, &ctx)?;
    line("general Lambda_1/(T - p)", rep.pass, format!("bound {}", rep.bound));

    let kz = ModulePresentation::koszul(2, vec![poly("T1", 2, p)?, poly("T2", 2, p)?], p)?;
    let rep = verify_estimate(&kz, Law::PseudoNullRank, 0..=2, &ctx)?;
    line("pseudo-null-rank Koszul(T1, T2)", rep.pass, format!("bound {}", rep.bound));

    let tech = ModulePresentation::cyclic(poly("T1^2 + p", 1, p)?, 1, p)?;
    let rep = verify_estimate(&tech, Law::TechLemma, 0..=3, &ctx)?;
    line("tech-lemma Lambda_1/(T^2 + p)", rep.pass, format!("constant {}", rep.bound));

    let g = ZpGammaModule::new(1, vec![1], vec![vec![4, 0], vec![0, 1]], p)?;
    let rep = gamma_estimate_check(&g, 1..=4, &ctx)?;
    line("gamma-estimate Zp + Z/p", rep.holds, format!("n0 {}", rep.n0));

    let ptp = ModulePresentation::cyclic(poly("p*(T1 - p)", 1, p)?, 1, p)?;
    let seq = (0..=5)
        .map(|m| Ok(coinvariants(&ptp, m, &ctx)?.e() as i64))
        .collect::<Result<Vec<_>>>()?;
    let f = iwasawa_fit(&seq, p)?;
    line(
        "iwasawa-fit Lambda_1/(p(T - p))",
        f.exact && (f.mu, f.lambda) == (1, 1),
        format!("mu {} lambda {} nu {}", f.mu, f.lambda, f.nu),
    );

    let one = PolyMatrix::from_rows(1, vec![vec![IntPoly::one(1)]])?;
    let tower = SemidirectModule::new(
        ModulePresentation::free(1, 1, p)?,
        RingAutomorphism::scalar(1, 1 + p as i64, p)?,
        one,
    )?;
    let table = sweep(&tower, 0..=3, 0..=3, &ctx)?;
    write(&config.out, "demo_tower.csv", &tower_csv(&table), artifacts)?;
    write(
        &config.out,
        "demo_diagonal.svg",
        &diagonal_svg(&table.diagonal(), "free Lambda_1, rho = 1 + p"),
        artifacts,
    )?;
    let fit = diagonal_fit(&tower, 3, &ctx)?;
    line("tower free Lambda_1, rho = 1 + p", fit.pass, format!("bound {}", fit.bound));

    let scalar = SemidirectModule::direct_product(ModulePresentation::p_cyclic(1, 1, p)?)?;
    let fit = diagonal_fit(&scalar, 3, &ctx)?;
    line(
        "tower Lambda_1/(p), trivial action",
        fit.pass,
        format!("ratios {}", join(fit.torsion_ratios.as_deref().unwrap_or(&[]))),
    );

    write(&config.out, "demo.txt", &s, artifacts)?;
    Ok((true, s))
}
