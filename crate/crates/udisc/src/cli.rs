//! JSON problem files and the subcommand implementations behind the
//! `udisc` binary.
//!
//! Exit codes: 0 success, 2 parse errors, 3 validation errors, 4 I/O
//! errors, 5 verification failures.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{build_problem, DiscriminationProblem};
use crate::linalg::{CMatrix, CVector, C64};
use crate::oracle::{oracle_maximize, OracleConfig};
use crate::random::random_density;
use crate::solvers::{solve, DiscriminationReport};
use crate::states::{DensityMatrix, Priors};
use crate::applications::{
    build_filtering, filtering_closed_form, solve_comparison, ComparisonProblem,
    FilteringProblem,
};

pub const PROBLEM_SCHEMA: &str = "udisc-1";
pub const REPORT_SCHEMA: &str = "udisc-report-1";

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_VERIFICATION: i32 = 5;

/// Output style shared by all subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Debug)]
enum CmdError {
    Parse(String),
    Validation(String),
    Io(String),
    Verification(String),
}

impl CmdError {
    fn exit_code(&self) -> i32 {
        match self {
            CmdError::Parse(_) => EXIT_PARSE,
            CmdError::Validation(_) => EXIT_VALIDATION,
            CmdError::Io(_) => EXIT_IO,
            CmdError::Verification(_) => EXIT_VERIFICATION,
        }
    }

    fn message(&self) -> &str {
        match self {
            CmdError::Parse(m)
            | CmdError::Validation(m)
            | CmdError::Io(m)
            | CmdError::Verification(m) => m,
        }
    }
}

impl From<crate::Error> for CmdError {
    fn from(e: crate::Error) -> Self {
        CmdError::Validation(e.to_string())
    }
}

fn finish(result: std::result::Result<(), CmdError>) -> i32 {
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

/// On-disk description of a discrimination instance. Matrices are stored
/// row-major with `[re, im]` entry pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    pub schema_version: String,
    pub dim: usize,
    pub p0: f64,
    pub p1: f64,
    pub rho0: Vec<Vec<[f64; 2]>>,
    pub rho1: Vec<Vec<[f64; 2]>>,
}

fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn rows_to_matrix(rows: &[Vec<[f64; 2]>], dim: usize) -> std::result::Result<CMatrix, CmdError> {
    if rows.len() != dim {
        return Err(CmdError::Parse(format!(
            "matrix has {} rows but the declared dimension is {dim}",
            rows.len()
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(CmdError::Parse(format!(
                "row {i} has {} entries but the declared dimension is {dim}",
                row.len()
            )));
        }
    }
    Ok(CMatrix::from_fn(dim, dim, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

impl ProblemFile {
    pub fn from_states(rho0: &DensityMatrix, rho1: &DensityMatrix, priors: &Priors) -> Self {
        Self {
            schema_version: PROBLEM_SCHEMA.to_string(),
            dim: rho0.dim(),
            p0: priors.p0(),
            p1: priors.p1(),
            rho0: matrix_to_rows(rho0.matrix()),
            rho1: matrix_to_rows(rho1.matrix()),
        }
    }

    /// Validates the states and priors and assembles the reduced problem.
    pub fn to_problem(&self, tol: f64) -> Result<DiscriminationProblem> {
        let rho0 = DensityMatrix::new(&self.matrix0()?, tol)?;
        let rho1 = DensityMatrix::new(&self.matrix1()?, tol)?;
        let priors = Priors::new(self.p0, self.p1)?;
        build_problem(&rho0, &rho1, priors)
    }

    fn matrix0(&self) -> Result<CMatrix> {
        rows_to_matrix(&self.rho0, self.dim)
            .map_err(|e| crate::Error::Internal(e.message().to_string()))
    }

    fn matrix1(&self) -> Result<CMatrix> {
        rows_to_matrix(&self.rho1, self.dim)
            .map_err(|e| crate::Error::Internal(e.message().to_string()))
    }
}

/// Measurement operators in the original input space, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PovmFile {
    pub e0: Vec<Vec<[f64; 2]>>,
    pub e1: Vec<Vec<[f64; 2]>>,
    pub e_fail: Vec<Vec<[f64; 2]>>,
}

/// Machine-readable solve report. Contains the input problem, so a report
/// file is itself accepted by `solve` and `verify`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: String,
    pub method: String,
    pub exact: bool,
    pub p_lower: f64,
    pub p_upper: f64,
    pub gap: f64,
    pub fidelity: f64,
    pub dim: usize,
    pub reduced_dim: usize,
    pub canonical_angles: Vec<f64>,
    pub povm: PovmFile,
    pub problem: ProblemFile,
}

pub fn report_file(
    file: &ProblemFile,
    problem: &DiscriminationProblem,
    report: &DiscriminationReport,
) -> ReportFile {
    let lifted = report.povm().lift(problem.embedding());
    ReportFile {
        schema_version: REPORT_SCHEMA.to_string(),
        method: report.method().as_str().to_string(),
        exact: report.exact(),
        p_lower: report.p_lower(),
        p_upper: report.p_upper(),
        gap: report.gap(),
        fidelity: report.fidelity(),
        dim: problem.original_dim(),
        reduced_dim: problem.dim(),
        canonical_angles: report.angles().to_vec(),
        povm: PovmFile {
            e0: matrix_to_rows(lifted.e0()),
            e1: matrix_to_rows(lifted.e1()),
            e_fail: matrix_to_rows(lifted.e_fail()),
        },
        problem: file.clone(),
    }
}

fn read_to_string(path: &Path) -> std::result::Result<String, CmdError> {
    std::fs::read_to_string(path)
        .map_err(|e| CmdError::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_string(path: &Path, contents: &str) -> std::result::Result<(), CmdError> {
    std::fs::write(path, contents)
        .map_err(|e| CmdError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Parses a problem file, also accepting a report file (whose embedded
/// problem is used), so machine output can be fed back in.
fn parse_problem_file(text: &str) -> std::result::Result<ProblemFile, CmdError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CmdError::Parse(format!("invalid JSON: {e}")))?;
    let problem_value = match value.get("problem") {
        Some(inner) => inner.clone(),
        None => value,
    };
    let file: ProblemFile = serde_json::from_value(problem_value)
        .map_err(|e| CmdError::Parse(format!("not a valid problem file: {e}")))?;
    if file.schema_version != PROBLEM_SCHEMA {
        return Err(CmdError::Parse(format!(
            "unsupported schema version {:?} (expected {PROBLEM_SCHEMA:?})",
            file.schema_version
        )));
    }
    rows_to_matrix(&file.rho0, file.dim)?;
    rows_to_matrix(&file.rho1, file.dim)?;
    Ok(file)
}

/// Parses problem JSON without touching the filesystem, with the same
/// report-echo acceptance as the file-based commands; the error text names
/// the first defect found.
pub fn problem_file_from_json(text: &str) -> std::result::Result<ProblemFile, String> {
    parse_problem_file(text).map_err(|e| e.message().to_string())
}

fn load_problem(
    path: &Path,
    tol: f64,
) -> std::result::Result<(ProblemFile, DiscriminationProblem), CmdError> {
    let text = read_to_string(path)?;
    let file = parse_problem_file(&text)?;
    let problem = file.to_problem(tol)?;
    Ok((file, problem))
}

fn join_floats(xs: &[f64]) -> String {
    if xs.is_empty() {
        return "none".to_string();
    }
    xs.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
}

fn print_text_report(problem: &DiscriminationProblem, report: &DiscriminationReport) {
    println!("method            {}", report.method().as_str());
    println!("exact             {}", if report.exact() { "yes" } else { "no" });
    println!("P_lower           {}", report.p_lower());
    println!("P_upper           {}", report.p_upper());
    println!("gap               {}", report.gap());
    println!("fidelity          {}", report.fidelity());
    println!("canonical angles  {}", join_floats(report.angles()));
    println!("dimension         {} (reduced {})", problem.original_dim(), problem.dim());
}

/// `solve` subcommand: read a problem file, solve it, and print either a
/// human-readable summary or the full machine report.
pub fn cmd_solve(input: &Path, format: Format, tol: f64) -> i32 {
    finish(run_solve(input, format, tol))
}

fn run_solve(input: &Path, format: Format, tol: f64) -> std::result::Result<(), CmdError> {
    let (file, problem) = load_problem(input, tol)?;
    let report = solve(&problem)?;
    match format {
        Format::Text => print_text_report(&problem, &report),
        Format::Machine => {
            let out = report_file(&file, &problem, &report);
            println!("{}", serde_json::to_string_pretty(&out).expect("report serializes"));
        }
    }
    Ok(())
}

/// Parameters for `random` problem generation.
#[derive(Debug, Clone)]
pub struct RandomSpec {
    pub dim: usize,
    pub rank0: usize,
    pub rank1: usize,
    pub seed: u64,
    pub p0: f64,
}

/// `random` subcommand: write a seeded random problem file. The same spec
/// always produces byte-identical output.
pub fn cmd_random(spec: &RandomSpec, output: &Path) -> i32 {
    finish(run_random(spec, output))
}

fn run_random(spec: &RandomSpec, output: &Path) -> std::result::Result<(), CmdError> {
    if spec.dim == 0 {
        return Err(CmdError::Validation("dimension must be at least 1".to_string()));
    }
    for (name, rank) in [("rank0", spec.rank0), ("rank1", spec.rank1)] {
        if rank == 0 || rank > spec.dim {
            return Err(CmdError::Validation(format!(
                "{name} must lie in 1..={} (got {rank})",
                spec.dim
            )));
        }
    }
    let priors = Priors::new(spec.p0, 1.0 - spec.p0)?;
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let rho0 = random_density(spec.dim, spec.rank0, &mut rng);
    let rho1 = random_density(spec.dim, spec.rank1, &mut rng);
    let file = ProblemFile::from_states(&rho0, &rho1, &priors);
    let mut text = serde_json::to_string_pretty(&file).expect("problem serializes");
    text.push('\n');
    write_string(output, &text)
}

#[derive(Debug, Serialize)]
struct VerifyOutput {
    p_lower: f64,
    p_oracle: f64,
    p_upper: f64,
    iterations: usize,
    converged: bool,
    ok: bool,
}

/// `verify` subcommand: solve a problem file and cross-check the bounds
/// against the independent ascent oracle. Exits with 5 when the oracle
/// value escapes `[P_lower - 1e-6, P_upper + 1e-6]`.
pub fn cmd_verify(input: &Path, seed: u64, restarts: usize, format: Format, tol: f64) -> i32 {
    finish(run_verify(input, seed, restarts, format, tol))
}

fn run_verify(
    input: &Path,
    seed: u64,
    restarts: usize,
    format: Format,
    tol: f64,
) -> std::result::Result<(), CmdError> {
    let (_, problem) = load_problem(input, tol)?;
    let report = solve(&problem)?;
    let config = OracleConfig { seed, restarts, ..OracleConfig::default() };
    let result = oracle_maximize(&problem, &config)?;
    let ok = result.p_star >= report.p_lower() - 1e-6 && result.p_star <= report.p_upper() + 1e-6;
    match format {
        Format::Text => {
            println!("P_lower     {}", report.p_lower());
            println!("P_oracle    {}", result.p_star);
            println!("P_upper     {}", report.p_upper());
            println!("iterations  {}", result.iterations_used);
            println!("converged   {}", if result.converged { "yes" } else { "no" });
            println!("verdict     {}", if ok { "ok" } else { "FAIL" });
        }
        Format::Machine => {
            let out = VerifyOutput {
                p_lower: report.p_lower(),
                p_oracle: result.p_star,
                p_upper: report.p_upper(),
                iterations: result.iterations_used,
                converged: result.converged,
                ok,
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("output serializes"));
        }
    }
    if ok {
        Ok(())
    } else {
        Err(CmdError::Verification(format!(
            "oracle value {} escapes [{} - 1e-6, {} + 1e-6]",
            result.p_star,
            report.p_lower(),
            report.p_upper()
        )))
    }
}

/// Parses a JSON vector whose entries are numbers or `[re, im]` pairs.
pub fn parse_vector(text: &str) -> std::result::Result<CVector, String> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let arr = value.as_array().ok_or("expected a JSON array")?;
    if arr.is_empty() {
        return Err("vector must not be empty".to_string());
    }
    let mut entries = Vec::with_capacity(arr.len());
    for (i, el) in arr.iter().enumerate() {
        match el {
            serde_json::Value::Number(x) => {
                entries.push(C64::new(x.as_f64().ok_or(format!("entry {i} is not finite"))?, 0.0));
            }
            serde_json::Value::Array(pair) if pair.len() == 2 => {
                let re = pair[0].as_f64().ok_or(format!("entry {i} has a non-numeric part"))?;
                let im = pair[1].as_f64().ok_or(format!("entry {i} has a non-numeric part"))?;
                entries.push(C64::new(re, im));
            }
            _ => return Err(format!("entry {i} must be a number or an [re, im] pair")),
        }
    }
    Ok(CVector::from_vec(entries))
}

fn parse_etas(text: &str) -> std::result::Result<Vec<f64>, String> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let arr = value.as_array().ok_or("expected a JSON array of probabilities")?;
    arr.iter()
        .enumerate()
        .map(|(i, el)| el.as_f64().ok_or(format!("eta {i} is not a number")))
        .collect()
}

#[derive(Debug, Serialize)]
struct CompareOutput {
    p_closed_form: f64,
    p_lower: f64,
    p_upper: f64,
    fidelity: f64,
    exact: bool,
}

/// `compare` subcommand: closed form `1 - F` next to the generic pipeline
/// result for the same-or-different question.
pub fn cmd_compare(psi1: &str, psi2: &str, format: Format) -> i32 {
    finish(run_compare(psi1, psi2, format))
}

fn run_compare(psi1: &str, psi2: &str, format: Format) -> std::result::Result<(), CmdError> {
    let v1 = parse_vector(psi1).map_err(CmdError::Parse)?;
    let v2 = parse_vector(psi2).map_err(CmdError::Parse)?;
    let cp = ComparisonProblem::new(&v1, &v2)?;
    let report = solve_comparison(&cp)?;
    let closed = 1.0 - report.fidelity();
    match format {
        Format::Text => {
            println!("P_closed_form  {closed}");
            println!("P_lower        {}", report.p_lower());
            println!("P_upper        {}", report.p_upper());
            println!("fidelity       {}", report.fidelity());
            println!("exact          {}", if report.exact() { "yes" } else { "no" });
        }
        Format::Machine => {
            let out = CompareOutput {
                p_closed_form: closed,
                p_lower: report.p_lower(),
                p_upper: report.p_upper(),
                fidelity: report.fidelity(),
                exact: report.exact(),
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("output serializes"));
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct FilterOutput {
    p_closed_form: f64,
    p_lower: f64,
    p_upper: f64,
    fidelity: f64,
    cos_theta: f64,
    branch: String,
}

/// `filter` subcommand: closed-form filtering optimum next to the generic
/// pipeline result.
pub fn cmd_filter(target: &str, others: &[String], etas: &str, format: Format) -> i32 {
    finish(run_filter(target, others, etas, format))
}

fn run_filter(
    target: &str,
    others: &[String],
    etas: &str,
    format: Format,
) -> std::result::Result<(), CmdError> {
    let target = parse_vector(target).map_err(CmdError::Parse)?;
    let others = others
        .iter()
        .map(|s| parse_vector(s))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(CmdError::Parse)?;
    let etas = parse_etas(etas).map_err(CmdError::Parse)?;
    let fp = FilteringProblem::new(&target, &others, &etas)?;
    let (problem, geometry) = build_filtering(&fp)?;
    let report = solve(&problem)?;
    let closed = filtering_closed_form(&geometry);
    let branch = format!("{:?}", geometry.branch());
    match format {
        Format::Text => {
            println!("P_closed_form  {closed}");
            println!("P_lower        {}", report.p_lower());
            println!("P_upper        {}", report.p_upper());
            println!("fidelity       {}", geometry.fidelity);
            println!("cos_theta      {}", geometry.cos_theta);
            println!("branch         {branch}");
        }
        Format::Machine => {
            let out = FilterOutput {
                p_closed_form: closed,
                p_lower: report.p_lower(),
                p_upper: report.p_upper(),
                fidelity: geometry.fidelity,
                cos_theta: geometry.cos_theta,
                branch,
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("output serializes"));
        }
    }
    Ok(())
}
