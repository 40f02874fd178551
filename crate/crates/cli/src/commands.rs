use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use oblique_core::diagnostics::{error_bound, eta_of, mu_of};
use oblique_core::linalg::orth_proj;
use oblique_core::planar::{self, PlanarExample, Quantity, TABLE_TOLERANCE};
use oblique_core::projections::consistency_residual;
use oblique_core::{
    build, full_report, measure, reconstruct, DiagnosticsReport, Method, Tolerance,
};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::figure::{FigureData, DEFAULT_SAMPLES};
use crate::format::{json, number, report_csv, Format, QuantityTable};
use crate::problem_file::ProblemFile;

/// Environment variable holding the default relative rank tolerance.
pub const TOL_ENV: &str = "OBLIQUE_TOL";

#[derive(Debug, Parser)]
#[command(
    name = "oblique",
    version,
    about = "Oblique-projection sampling and reconstruction"
)]
pub struct Cli {
    /// Relative rank tolerance; overrides the problem file and OBLIQUE_TOL.
    #[arg(long, global = true, value_name = "X")]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute every diagnostic for a problem.
    Analyze(AnalyzeArgs),
    /// Reconstruct the problem's signal from its measurements.
    Reconstruct(ReconstructArgs),
    /// Emit ellipse and segment data for a planar problem.
    Figure(FigureArgs),
    /// Write the two built-in planar examples and check their tables.
    PaperExamples(PaperExamplesArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Defaults to standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_parser = parse_method)]
    pub method: Method,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct PaperExamplesArgs {
    /// Directory receiving the problem files, reports and figure data.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: oblique_core::Error| e.to_string())
}

/// Built-in default, then the environment, then the problem file, then the
/// command line.
pub fn resolve_tolerance(
    flag: Option<f64>,
    env: Option<&str>,
    file: Option<&ProblemFile>,
) -> Result<Tolerance> {
    let mut tol = Tolerance::default();
    if let Some(raw) = env {
        let v: f64 = raw
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{TOL_ENV}: not a number: '{raw}'")))?;
        tol = Tolerance::new(Some(v), tol.abs_check_tol)
            .map_err(|e| CliError::Input(format!("{TOL_ENV}: {e}")))?;
    }
    if let Some(f) = file {
        tol = f.tolerance(tol);
    }
    if let Some(v) = flag {
        tol = Tolerance::new(Some(v), tol.abs_check_tol)
            .map_err(|e| CliError::Input(format!("--tol: {e}")))?;
    }
    Ok(tol)
}

fn env_tol() -> Option<String> {
    std::env::var(TOL_ENV).ok().filter(|s| !s.trim().is_empty())
}

fn emit(output: Option<&Path>, content: &str, stdout: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => fs::write(path, content).map_err(|e| CliError::io(path, e)),
        None => stdout
            .write_all(content.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn load(input: &Path, flag: Option<f64>) -> Result<(ProblemFile, Tolerance)> {
    let file = ProblemFile::read(input)?;
    let tol = resolve_tolerance(flag, env_tol().as_deref(), Some(&file))?;
    Ok((file, tol))
}

pub fn analyze(file: &ProblemFile, tol: &Tolerance) -> Result<DiagnosticsReport> {
    Ok(full_report(&file.problem()?, tol)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionReport {
    pub method: Method,
    pub signal: Vec<f64>,
    pub coefficients: Vec<f64>,
    /// `|b - U^T G c|`.
    pub measurement_residual: f64,
    pub consistency_residual: f64,
    pub mu: f64,
    pub eta: f64,
    pub dist_to_g: f64,
    pub noise_norm: f64,
    pub error_bound: f64,
    /// `|P_G f - reconstruction|`.
    pub achieved_error: f64,
}

impl ReconstructionReport {
    pub fn to_csv(&self) -> String {
        let mut t = QuantityTable::default();
        t.text("method", self.method.short_name())
            .vector("signal", &self.signal)
            .vector("coefficients", &self.coefficients)
            .num("measurement_residual", self.measurement_residual)
            .num("consistency_residual", self.consistency_residual)
            .num("mu", self.mu)
            .num("eta", self.eta)
            .num("dist_to_g", self.dist_to_g)
            .num("noise_norm", self.noise_norm)
            .num("error_bound", self.error_bound)
            .num("achieved_error", self.achieved_error);
        t.render()
    }
}

pub fn reconstruct_file(
    file: &ProblemFile,
    method: Method,
    tol: &Tolerance,
) -> Result<ReconstructionReport> {
    let f = file
        .signal()
        .ok_or_else(|| CliError::Input("signal: required for reconstruction".into()))?;
    let p = file.problem()?;
    let op = build(method, &p, tol)?;

    let clean = measure(&p, &f)?;
    let (b, noise_norm) = match file.noise() {
        Some(c) => (clean.perturbed(&c)?, c.norm()),
        None => (clean, 0.0),
    };
    let rec = reconstruct(&op, &b)?;

    let ug = p.cross_gram();
    let measurement_residual = (&b.values - &ug * &rec.coefficients).norm();
    let consistency = consistency_residual(&op, &p, &f, tol)?;

    let pg_f = orth_proj(p.reconstruction().synthesis(), tol)? * &f;
    let mu = mu_of(&op, &p)?;
    let eta = eta_of(&op);
    let dist_to_g = (&f - &pg_f).norm();
    let bound = error_bound(mu, eta, dist_to_g, noise_norm)?;

    Ok(ReconstructionReport {
        method,
        signal: rec.signal.iter().copied().collect(),
        coefficients: rec.coefficients.iter().copied().collect(),
        measurement_residual,
        consistency_residual: consistency,
        mu,
        eta,
        dist_to_g,
        noise_norm,
        error_bound: bound,
        achieved_error: (&pg_f - &rec.signal).norm(),
    })
}

pub fn figure_file(file: &ProblemFile, samples: usize, tol: &Tolerance) -> Result<FigureData> {
    let f = file
        .signal()
        .ok_or_else(|| CliError::Input("signal: required for figures".into()))?;
    FigureData::compute(&file.problem()?, &f, samples, tol)
}

pub fn example_file(ex: &PlanarExample) -> ProblemFile {
    ProblemFile {
        ambient_dim: 2,
        sampling_vectors: ex.sampling.iter().map(|v| v.to_vec()).collect(),
        reconstruction_vectors: vec![ex.reconstruction.to_vec()],
        signal: Some(ex.signal().iter().copied().collect()),
        noise: None,
        tolerance: None,
    }
}

/// One checked table entry.
#[derive(Debug, Clone, PartialEq)]
pub struct CellCheck {
    pub example: &'static str,
    pub method: Method,
    pub quantity: Quantity,
    pub expected: f64,
    pub actual: Option<f64>,
}

impl CellCheck {
    pub fn passed(&self) -> bool {
        self.actual
            .is_some_and(|a| (a - self.expected).abs() <= TABLE_TOLERANCE)
    }

    pub fn line(&self) -> String {
        format!(
            "{} {} {} {}: expected {} got {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.example,
            self.method.short_name(),
            self.quantity.name(),
            self.expected,
            self.actual.map(number).unwrap_or_else(|| "none".into()),
        )
    }
}

pub fn check_table(ex: &PlanarExample, report: &DiagnosticsReport) -> Vec<CellCheck> {
    ex.table
        .iter()
        .map(|cell| {
            let actual = match (cell.method, cell.quantity) {
                (Method::FrameIndependent, Quantity::Eta) => report.eta_fis,
                (Method::FrameIndependent, Quantity::Mu) => report.mu_fis,
                (_, Quantity::Eta) => report.eta_gs,
                (_, Quantity::Mu) => report.mu_gs,
            };
            CellCheck {
                example: ex.name,
                method: cell.method,
                quantity: cell.quantity,
                expected: cell.expected,
                actual,
            }
        })
        .collect()
}

/// Writes `<name>.json`, `<name>_report.json` and `<name>_figure.csv` for
/// each built-in example and returns the table checks.
pub fn paper_examples(dir: &Path, samples: usize, tol: &Tolerance) -> Result<Vec<CellCheck>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut checks = Vec::new();
    for ex in planar::all() {
        let file = example_file(&ex);
        let report = analyze(&file, tol)?;
        let figure = figure_file(&file, samples, tol)?;
        for (suffix, content) in [
            (".json", file.to_json()),
            ("_report.json", json(&report)),
            ("_figure.csv", figure.to_csv()),
        ] {
            let path = dir.join(format!("{}{suffix}", ex.name));
            fs::write(&path, content).map_err(|e| CliError::io(&path, e))?;
        }
        checks.extend(check_table(&ex, &report));
    }
    Ok(checks)
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Analyze(a) => {
            let (file, tol) = load(&a.input, cli.tol)?;
            let report = analyze(&file, &tol)?;
            let text = match a.format {
                Format::Json => json(&report),
                Format::Csv => report_csv(&report),
            };
            emit(a.output.as_deref(), &text, stdout)
        }
        Command::Reconstruct(a) => {
            let (file, tol) = load(&a.input, cli.tol)?;
            let report = reconstruct_file(&file, a.method, &tol)?;
            let text = match a.format {
                Format::Json => json(&report),
                Format::Csv => report.to_csv(),
            };
            emit(a.output.as_deref(), &text, stdout)
        }
        Command::Figure(a) => {
            let (file, tol) = load(&a.input, cli.tol)?;
            let fig = figure_file(&file, a.samples, &tol)?;
            emit(a.output.as_deref(), &fig.to_csv(), stdout)
        }
        Command::PaperExamples(a) => {
            let tol = resolve_tolerance(cli.tol, env_tol().as_deref(), None)?;
            let checks = paper_examples(&a.output, a.samples, &tol)?;
            let mut lines = String::new();
            for c in &checks {
                lines.push_str(&c.line());
                lines.push('\n');
            }
            stdout
                .write_all(lines.as_bytes())
                .map_err(|e| CliError::io("<stdout>", e))?;
            let failed = checks.iter().filter(|c| !c.passed()).count();
            if failed > 0 {
                return Err(CliError::Numerical(format!(
                    "{failed} table cell(s) outside tolerance"
                )));
            }
            Ok(())
        }
    }
}
