//! `mumkit` command-line front end.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gellmann::GellMannBasis;
use crate::linalg::schmidt_decompose;
use crate::mum::{
    build_mum_family, cartan_orthogonality_check, mub_unitaries, simplex_check, verify_mum,
    FamilyJson, MumFamily,
};
use crate::random::rng;
use crate::spectra::{
    peaked_phases, sample_feasible_phases, synthesize_spectrum, validate_spectrum,
};
use crate::states::{
    dicke, dicke_schmidt, isotropic, mub_schmidt_mixture, noisy_dicke,
    parse_state, ppt_bound_state, DensityMatrix,
};
use crate::witness::{
    angle_grid, entanglement_monotone, evaluate, optimize_rotations_d3, rotations_from_angles,
    WitnessConfig, WitnessResult,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "mumkit", version, about = "Mutually unbiased measurements and entanglement witnesses")]
pub struct Cli {
    /// Verification tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also write a run record (inputs, outputs, wall time) to this file.
    #[arg(long, global = true)]
    pub record: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Synthesize and validate a spectrum.
    Spectrum(SpectrumArgs),
    /// Build a MUM family and write it as JSON.
    Build(SpectrumArgs),
    /// Verify a family file.
    Verify {
        family: PathBuf,
    },
    /// Evaluate a witness on a state.
    Witness(WitnessArgs),
    /// Run one of the worked examples end to end.
    Example(ExampleArgs),
    /// Tabulate witness values along one parameter.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SpectrumArgs {
    #[arg(long = "dim")]
    pub dim: usize,
    /// Purity of every element, in [1/d, 1].
    #[arg(long)]
    pub kappa: f64,
    /// Free phases, comma separated; defaults to the peaked spectrum.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub phases: Option<Vec<f64>>,
    /// Sign of the alternating mode (even dimensions).
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub sign: i8,
    /// Sample feasible phases from the seed.
    #[arg(long)]
    pub random: bool,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    /// Family file written by `build`.
    #[arg(long)]
    pub family: PathBuf,
    /// `isotropic:d,alpha`, `dicke:N,k,p`, `ppt3x3` or a JSON file.
    #[arg(long)]
    pub state: String,
    /// Rotation angles about n*, one per measurement (dimension 3 only).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub thetas: Option<Vec<f64>>,
    /// Measurements to include; all of them by default.
    #[arg(long, value_delimiter = ',')]
    pub blocks: Option<Vec<usize>>,
    /// Grid-search the angles (dimension 3 only).
    #[arg(long)]
    pub optimize: bool,
    #[arg(long, default_value_t = PI / 180.0)]
    pub grid: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    Isotropic,
    Dicke,
    Ppt,
    Mixture,
}

#[derive(Args, Debug)]
pub struct ExampleArgs {
    #[arg(value_enum)]
    pub name: ExampleName,
    #[arg(long = "dim", default_value_t = 3)]
    pub dim: usize,
    /// Purity; each example has its own default.
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long, default_value_t = 0.4)]
    pub alpha: f64,
    #[arg(long, default_value_t = 4)]
    pub qubits: usize,
    #[arg(long, default_value_t = 2)]
    pub excitations: usize,
    /// Noise weight for the Dicke example.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Scan the noise weight and report the detection threshold.
    #[arg(long)]
    pub sweep_p: bool,
    /// Grid-search rotation angles for the PPT example.
    #[arg(long)]
    pub optimize: bool,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub thetas: Option<Vec<f64>>,
    /// Angle grid step, or noise grid step for `--sweep-p`.
    #[arg(long)]
    pub grid: Option<f64>,
    /// Mixture weights, one per component.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 0.3, 0.2])]
    pub weights: Vec<f64>,
    /// Number of leading mixture components that are maximally entangled;
    /// the rest are product states.
    #[arg(long, default_value_t = 1)]
    pub entangled: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Kappa,
    Alpha,
    P,
    Theta,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub axis: Axis,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    /// Number of grid points (inclusive of both ends when above 1).
    #[arg(long)]
    pub steps: usize,
    #[arg(long = "dim", default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 4)]
    pub qubits: usize,
    #[arg(long, default_value_t = 2)]
    pub excitations: usize,
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    /// Block whose angle is swept on the `theta` axis (PPT state).
    #[arg(long, default_value_t = 0)]
    pub block: usize,
}

/// Output of a command: the document to print and whether the checks it
/// ran passed.
#[derive(Debug)]
pub struct Outcome {
    pub document: Value,
    pub table: Option<Table>,
    pub pass: bool,
}

impl Outcome {
    fn ok(document: Value) -> Self {
        Outcome { document, table: None, pass: true }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub outputs: Value,
    pub timing: f64,
}

/// Maps library errors to exit codes: bad input is 2, failed checks 1.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Json(_)
        | Error::Io(_)
        | Error::InvalidParameter(_)
        | Error::InvalidShape(_)
        | Error::InvalidConfig(_)
        | Error::InvalidDimension { .. }
        | Error::UnsupportedDimension { .. }
        | Error::InvalidPermutation { .. }
        | Error::InvalidOffset { .. } => EXIT_MALFORMED,
        _ => EXIT_FAILED,
    }
}

/// Parses `argv`, runs the command and returns `(exit code, stdout, stderr)`.
pub fn run_args<I, S>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK { (code, text, String::new()) } else { (code, String::new(), text) };
        }
    };
    let started = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => return (exit_code(&e), String::new(), format!("error: {e}\n")),
    };
    let text = match render(&cli, &outcome) {
        Ok(t) => t,
        Err(e) => return (exit_code(&e), String::new(), format!("error: {e}\n")),
    };
    let mut stdout = String::new();
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            return (EXIT_MALFORMED, String::new(), format!("error: {e}\n"));
        }
    } else {
        stdout = text;
    }
    if let Some(path) = &cli.record {
        let inputs: BTreeMap<String, Value> = BTreeMap::from([(
            "argv".to_string(),
            json!(argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>()),
        )]);
        let record = RunRecord {
            command: command_name(&cli.command).to_string(),
            inputs,
            outputs: outcome.document.clone(),
            timing: started.elapsed().as_secs_f64(),
        };
        let written = serde_json::to_string_pretty(&record)
            .map_err(Error::from)
            .and_then(|t| std::fs::write(path, t + "\n").map_err(Error::from));
        if let Err(e) = written {
            return (exit_code(&e), stdout, format!("error: {e}\n"));
        }
    }
    (if outcome.pass { EXIT_OK } else { EXIT_FAILED }, stdout, String::new())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Spectrum(_) => "spectrum",
        Command::Build(_) => "build",
        Command::Verify { .. } => "verify",
        Command::Witness(_) => "witness",
        Command::Example(_) => "example",
        Command::Sweep(_) => "sweep",
    }
}

fn render(cli: &Cli, outcome: &Outcome) -> Result<String> {
    match (cli.format, &outcome.table) {
        (Format::Csv, Some(t)) => Ok(t.to_csv()),
        (Format::Csv, None) => Err(Error::InvalidParameter(
            "csv output is only available for tabular results".into(),
        )),
        (Format::Json, _) => Ok(serde_json::to_string_pretty(&outcome.document)? + "\n"),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a, cli),
        Command::Build(a) => cmd_build(a, cli),
        Command::Verify { family } => cmd_verify(family, cli),
        Command::Witness(a) => cmd_witness(a),
        Command::Example(a) => cmd_example(a, cli),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

fn resolve_phases(a: &SpectrumArgs, seed: u64) -> Result<(Vec<f64>, i8)> {
    if a.random {
        return sample_feasible_phases(a.dim, a.kappa, &mut rng(seed));
    }
    if a.sign != 1 && a.sign != -1 {
        return Err(Error::InvalidParameter(format!("sign must be 1 or -1, got {}", a.sign)));
    }
    match &a.phases {
        Some(p) => Ok((p.clone(), a.sign)),
        None => {
            let (p, _) = peaked_phases(a.dim, 0);
            Ok((p, a.sign))
        }
    }
}

fn cmd_spectrum(a: &SpectrumArgs, cli: &Cli) -> Result<Outcome> {
    let (phases, sign) = resolve_phases(a, cli.seed)?;
    let s = synthesize_spectrum(a.dim, a.kappa, &phases, sign)?;
    let report = validate_spectrum(&s);
    let pass = report.max_residual <= cli.tol;
    Ok(Outcome {
        document: json!({
            "d": s.d,
            "kappa": s.kappa,
            "mu": s.mu,
            "phases": phases,
            "sign": sign,
            "report": report,
        }),
        table: None,
        pass,
    })
}

fn family_from_args(a: &SpectrumArgs, seed: u64) -> Result<MumFamily> {
    let (phases, sign) = resolve_phases(a, seed)?;
    let s = synthesize_spectrum(a.dim, a.kappa, &phases, sign)?;
    build_mum_family(&s, &mub_unitaries(a.dim)?)
}

fn cmd_build(a: &SpectrumArgs, cli: &Cli) -> Result<Outcome> {
    let f = family_from_args(a, cli.seed)?;
    let report = verify_mum(&f, cli.tol);
    Ok(Outcome {
        document: serde_json::to_value(FamilyJson::from(&f))?,
        table: None,
        pass: report.pass,
    })
}

fn load_family(path: &PathBuf) -> Result<MumFamily> {
    let text = std::fs::read_to_string(path)?;
    let raw: FamilyJson = serde_json::from_str(&text)?;
    raw.into_family()
}

fn cmd_verify(path: &PathBuf, cli: &Cli) -> Result<Outcome> {
    let f = load_family(path)?;
    let basis = GellMannBasis::new(f.d)?;
    let mum = verify_mum(&f, cli.tol);
    let simplex = simplex_check(&f, &basis);
    let cartan = cartan_orthogonality_check(&f.unitaries, &basis);
    let pass = mum.pass;
    Ok(Outcome {
        document: json!({
            "d": f.d,
            "kappa": f.kappa,
            "measurements": f.len(),
            "mum": mum,
            "simplex": simplex,
            "cartan": cartan,
            "pass": pass,
        }),
        table: None,
        pass,
    })
}

fn rotations_for(f: &MumFamily, thetas: Option<&Vec<f64>>) -> Result<Vec<crate::ortho::RotationFixingDiagonal>> {
    match thetas {
        None => Ok(vec![crate::ortho::RotationFixingDiagonal::identity(f.d); f.len()]),
        Some(t) => {
            if f.d != 3 {
                return Err(Error::InvalidParameter("angles are only defined for dimension 3".into()));
            }
            if t.len() != f.len() {
                return Err(Error::InvalidParameter(format!(
                    "{} angles for {} measurements",
                    t.len(),
                    f.len()
                )));
            }
            Ok(rotations_from_angles(t))
        }
    }
}

fn result_value(r: &WitnessResult) -> Value {
    serde_json::to_value(r).expect("plain numeric struct")
}

fn cmd_witness(a: &WitnessArgs) -> Result<Outcome> {
    let f = load_family(&a.family)?;
    let rho = parse_state(&a.state)?;
    let blocks = a.blocks.clone().unwrap_or_else(|| (0..f.len()).collect());
    if a.optimize {
        let (thetas, r) = optimize_rotations_d3(&f, &rho, &blocks, a.grid)?;
        let mut doc = result_value(&r);
        doc["thetas"] = json!(thetas);
        return Ok(Outcome::ok(doc));
    }
    let rotations = rotations_for(&f, a.thetas.as_ref())?;
    let cfg = WitnessConfig::new(f, rotations, blocks)?;
    Ok(Outcome::ok(result_value(&evaluate(&cfg, &rho)?)))
}

/// Family over the complete MUB set with the peaked spectrum at `κ`.
pub fn peaked_family(d: usize, kappa: f64) -> Result<MumFamily> {
    let (phases, sign) = peaked_phases(d, 0);
    let s = synthesize_spectrum(d, kappa, &phases, sign)?;
    build_mum_family(&s, &mub_unitaries(d)?)
}

fn comparison(closed: f64, numeric: f64) -> Value {
    json!({ "closed_form": closed, "numeric": numeric, "difference": numeric - closed })
}

fn cmd_example(a: &ExampleArgs, cli: &Cli) -> Result<Outcome> {
    match a.name {
        ExampleName::Isotropic => example_isotropic(a),
        ExampleName::Dicke => example_dicke(a),
        ExampleName::Ppt => example_ppt(a),
        ExampleName::Mixture => example_mixture(a, cli),
    }
}

fn example_isotropic(a: &ExampleArgs) -> Result<Outcome> {
    let kappa = a.kappa.unwrap_or(1.0);
    let f = peaked_family(a.dim, kappa)?;
    let delta = f.len() - 1;
    let rho = isotropic(a.dim, a.alpha)?;
    let r = evaluate(&WitnessConfig::identity(f), &rho)?;
    let excess = kappa - 1.0 / a.dim as f64;
    let closed = excess * (1.0 - a.alpha * (delta + 1) as f64);
    let threshold = 1.0 / (delta + 1) as f64;
    Ok(Outcome::ok(json!({
        "example": "isotropic",
        "d": a.dim,
        "kappa": kappa,
        "alpha": a.alpha,
        "measurements": delta + 1,
        "witness": comparison(closed, r.w_expectation),
        "detected": r.detected,
        "detection_threshold": threshold,
        "entangled": a.alpha > 1.0 / (a.dim + 1) as f64,
        "result": result_value(&r),
    })))
}

/// Noisy Dicke state rotated so its Schmidt basis is the computational one.
pub fn aligned_noisy_dicke(qubits: usize, excitations: usize, p: f64) -> Result<DensityMatrix> {
    let rho = noisy_dicke(qubits, excitations, p)?;
    let half = rho.dims.0;
    let sv = schmidt_decompose(&dicke(qubits, excitations)?, (half, half))?;
    let (wa, wb) = sv.aligning_unitaries();
    Ok(rho.local_conjugate(&wa, &wb))
}

/// `(κ - 1/d)[1 - (1 - p)(1 + Δ E)]` for the aligned noisy Dicke state and
/// `O = I` on a complete family.
pub fn dicke_closed_form(kappa: f64, d: usize, measurements: usize, e: f64, p: f64) -> f64 {
    (kappa - 1.0 / d as f64) * (1.0 - (1.0 - p) * (1.0 + (measurements - 1) as f64 * e))
}

fn example_dicke(a: &ExampleArgs) -> Result<Outcome> {
    let kappa = a.kappa.unwrap_or(1.0);
    let lambda = dicke_schmidt(a.qubits, a.excitations)?;
    let half = 1usize << (a.qubits / 2);
    let mut padded = lambda.clone();
    padded.resize(half, 0.0);
    let e = entanglement_monotone(&padded)?;
    let f = peaked_family(half, kappa)?;
    let m = f.len();
    let cfg = WitnessConfig::identity(f);
    let one = |p: f64| -> Result<WitnessResult> {
        evaluate(&cfg, &aligned_noisy_dicke(a.qubits, a.excitations, p)?)
    };
    let exact_threshold = 1.0 - 1.0 / (1.0 + (m - 1) as f64 * e);
    if a.sweep_p {
        let step = a.grid.unwrap_or(1e-3);
        let count = (1.0 / step).round() as usize;
        let mut last_detected = None;
        let mut rows = Vec::new();
        for i in 0..=count {
            let p = (i as f64 * step).min(1.0);
            let r = one(p)?;
            if r.detected {
                last_detected = Some(p);
            }
            rows.push(vec![json!(p), json!(r.w_expectation), json!(r.detected)]);
        }
        let estimate = last_detected.map(|p| p + step / 2.0);
        return Ok(Outcome {
            document: json!({
                "example": "dicke",
                "qubits": a.qubits,
                "excitations": a.excitations,
                "kappa": kappa,
                "schmidt_coefficients": lambda,
                "entanglement": e,
                "grid": step,
                "last_detected_p": last_detected,
                "threshold_estimate": estimate,
                "threshold_closed_form": exact_threshold,
            }),
            table: Some(Table {
                header: vec!["p".into(), "w_expectation".into(), "detected".into()],
                rows,
            }),
            pass: true,
        });
    }
    let r = one(a.p)?;
    let closed = dicke_closed_form(kappa, half, m, e, a.p);
    Ok(Outcome::ok(json!({
        "example": "dicke",
        "qubits": a.qubits,
        "excitations": a.excitations,
        "kappa": kappa,
        "p": a.p,
        "schmidt_coefficients": lambda,
        "entanglement": e,
        "witness": comparison(closed, r.w_expectation),
        "detected": r.detected,
        "threshold_closed_form": exact_threshold,
        "result": result_value(&r),
    })))
}

/// Best three-block angles over every choice of three blocks.
pub fn best_three_block(f: &MumFamily, rho: &DensityMatrix, step: f64) -> Result<(Vec<usize>, Vec<f64>, WitnessResult)> {
    let mut best: Option<(Vec<usize>, Vec<f64>, WitnessResult)> = None;
    for skip in 0..f.len() {
        let blocks: Vec<usize> = (0..f.len()).filter(|&b| b != skip).collect();
        let (thetas, r) = optimize_rotations_d3(f, rho, &blocks, step)?;
        if best.as_ref().is_none_or(|(_, _, b)| r.w_expectation < b.w_expectation - 1e-12) {
            best = Some((blocks, thetas, r));
        }
    }
    best.ok_or_else(|| Error::InvalidConfig("family needs at least three measurements".into()))
}

fn example_ppt(a: &ExampleArgs) -> Result<Outcome> {
    let kappa = a.kappa.unwrap_or(0.9);
    let f = peaked_family(3, kappa)?;
    let rho = ppt_bound_state();
    let step = a.grid.unwrap_or(PI / 180.0);
    angle_grid(step)?;
    let closed = -(kappa - 1.0 / 3.0) / 5.0;
    let (thetas, r) = if a.optimize {
        optimize_rotations_d3(&f, &rho, &[0, 1, 2, 3], step)?
    } else {
        let t = a.thetas.clone().unwrap_or_else(|| vec![PI, PI, 0.0, 0.0]);
        let cfg = WitnessConfig::new(f.clone(), rotations_for(&f, Some(&t))?, vec![0, 1, 2, 3])?;
        (t, evaluate(&cfg, &rho)?)
    };
    let (blocks3, thetas3, r3) = best_three_block(&f, &rho, step)?;
    Ok(Outcome::ok(json!({
        "example": "ppt",
        "kappa": kappa,
        "eigenvalues": rho.eigenvalues(),
        "ppt_min_eigenvalue": rho.ppt_min_eigenvalue(),
        "thetas": thetas,
        "witness": comparison(closed, r.w_expectation),
        "detected": r.detected,
        "result": result_value(&r),
        "three_blocks": {
            "blocks": blocks3,
            "thetas": thetas3,
            "w_expectation": r3.w_expectation,
            "detected": r3.detected,
        },
    })))
}

/// Mixture with `entangled` maximally entangled components followed by
/// product components, each in its own MUB.
pub fn example_mixture_state(d: usize, weights: &[f64], entangled: usize) -> Result<DensityMatrix> {
    let mut product = vec![0.0; d];
    product[0] = 1.0;
    let components: Vec<(f64, Vec<f64>)> = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| (w, if i < entangled { vec![1.0 / d as f64; d] } else { product.clone() }))
        .collect();
    mub_schmidt_mixture(&components, d)
}

/// `Tr{ρM}` over blocks 0 and 1 with `O = I`: aligned components count
/// `1 + E`, the others `2E`.
pub fn mixture_closed_form(kappa: f64, d: usize, weights: &[f64], entangled: usize) -> f64 {
    let excess = kappa - 1.0 / d as f64;
    weights
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let e = if i < entangled { 1.0 } else { 0.0 };
            w * if i < 2 { 1.0 + e } else { 2.0 * e }
        })
        .sum::<f64>()
        * excess
}

fn example_mixture(a: &ExampleArgs, _cli: &Cli) -> Result<Outcome> {
    let kappa = a.kappa.unwrap_or(1.0);
    let rho = example_mixture_state(a.dim, &a.weights, a.entangled)?;
    let f = peaked_family(a.dim, kappa)?;
    let cfg = WitnessConfig::identity(f).with_blocks(vec![0, 1])?;
    let r = evaluate(&cfg, &rho)?;
    let closed = mixture_closed_form(kappa, a.dim, &a.weights, a.entangled);
    Ok(Outcome::ok(json!({
        "example": "mixture",
        "d": a.dim,
        "kappa": kappa,
        "weights": a.weights,
        "entangled_components": a.entangled,
        "m_two_blocks": comparison(closed, r.m_total),
        "w_expectation": r.w_expectation,
        "detected": r.detected,
        "result": result_value(&r),
    })))
}

/// Evenly spaced points, both ends included.
pub fn sweep_points(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !from.is_finite() || !to.is_finite() {
        return Err(Error::InvalidParameter("sweep range is empty".into()));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    Ok((0..steps).map(|i| from + (to - from) * i as f64 / (steps - 1) as f64).collect())
}

fn cmd_sweep(a: &SweepArgs) -> Result<Outcome> {
    let points = sweep_points(a.from, a.to, a.steps)?;
    let mut rows = Vec::with_capacity(points.len());
    let mut block_count = 0;
    for &x in &points {
        let r = match a.axis {
            Axis::Kappa => {
                evaluate(&WitnessConfig::identity(peaked_family(a.dim, x)?), &isotropic(a.dim, a.alpha)?)?
            }
            Axis::Alpha => {
                evaluate(&WitnessConfig::identity(peaked_family(a.dim, a.kappa)?), &isotropic(a.dim, x)?)?
            }
            Axis::P => {
                let rho = aligned_noisy_dicke(a.qubits, a.excitations, x)?;
                evaluate(&WitnessConfig::identity(peaked_family(rho.dims.0, a.kappa)?), &rho)?
            }
            Axis::Theta => {
                let f = peaked_family(3, a.kappa)?;
                if a.block >= f.len() {
                    return Err(Error::InvalidParameter(format!("block {} out of range", a.block)));
                }
                let mut thetas = vec![0.0; f.len()];
                thetas[a.block] = x;
                let cfg = WitnessConfig::new(f, rotations_from_angles(&thetas), vec![a.block])?;
                evaluate(&cfg, &ppt_bound_state())?
            }
        };
        block_count = r.block_values.len();
        let mut row = vec![json!(x), json!(r.kappa), json!(r.m_total), json!(r.w_expectation), json!(r.detected)];
        row.extend(r.block_values.iter().map(|v| json!(v)));
        rows.push(row);
    }
    let mut header: Vec<String> =
        ["x", "kappa", "m_total", "w_expectation", "detected"].iter().map(|s| s.to_string()).collect();
    header.extend((0..block_count).map(|b| format!("block_{b}")));
    let table = Table { header, rows };
    let axis = format!("{:?}", a.axis).to_lowercase();
    Ok(Outcome {
        document: json!({ "axis": axis, "columns": table.header, "rows": table.rows }),
        table: Some(table),
        pass: true,
    })
}
