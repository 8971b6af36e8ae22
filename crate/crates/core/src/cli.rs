//! Command-line front end.
//!
//! Settings are resolved as: command-line flag, then (for the grid size only)
//! the `LIOUVILLE_GRID_N` environment variable, then the optional `key=value`
//! config file, then built-in defaults. Exit status is 0 when everything
//! passed, 1 on a computational or I/O failure and 2 on a usage error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bifurcation::{
    bessel_lemma_j, bifurcation_functional, find_tw_bifurcation, subsolution_check, DEFAULT_BETA,
};
use crate::error::Error;
use crate::io::{branch_csv, branch_rows, shape_csv, shape_svg, to_json, write_file};
use crate::numerics::grid::DEFAULT_NODES;
use crate::spectral::{psi_ordering_holds, sigma_table, solve_h_mode, SpectrumReport};
use crate::steady::{
    mass_identity_residual, pohozhaev_residuals, Branch, RadialSteadyState, SteadySolver,
};
use crate::wave::{ExpansionFields, WaveShape, MAX_SPEED};

pub const GRID_ENV: &str = "LIOUVILLE_GRID_N";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "liouville",
    version,
    about = "Radial steady states, spectra and traveling-wave shapes"
)]
pub struct Cli {
    /// key=value configuration file; command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Number of grid intervals N (overrides LIOUVILLE_GRID_N).
    #[arg(long = "grid-n", global = true, value_name = "N")]
    pub grid_n: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace the steady-state branch and write it as CSV.
    Branch(BranchArgs),
    /// Locate the traveling-wave bifurcation point.
    Bifurcate(BifurcateArgs),
    /// Linearized spectrum at one steady state.
    Spectrum(SpectrumArgs),
    /// Third-order traveling-wave boundary shape (CSV and SVG).
    Shape(ShapeArgs),
    /// Run the identity and comparison checks and print a pass/fail table.
    Verify(VerifyArgs),
    /// The Bessel comparison integral J(R).
    BesselLemma(RadiusArgs),
}

#[derive(Debug, Args)]
pub struct RadiusArgs {
    /// Disk radius.
    #[arg(long = "R")]
    pub radius: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BranchWindow {
    /// Largest central value A = Φ(0) on the branch.
    #[arg(long = "a-max")]
    pub a_max: Option<f64>,
    /// Number of branch points.
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BranchArgs {
    #[command(flatten)]
    pub radius: RadiusArgs,
    #[command(flatten)]
    pub window: BranchWindow,
    /// Output file (default: stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BifurcateArgs {
    #[command(flatten)]
    pub radius: RadiusArgs,
    #[command(flatten)]
    pub window: BranchWindow,
    /// Surface tension.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub radius: RadiusArgs,
    /// Central value of the state.
    #[arg(long = "A")]
    pub central: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    #[arg(long = "l-max")]
    pub l_max: Option<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ShapeArgs {
    #[command(flatten)]
    pub radius: RadiusArgs,
    #[command(flatten)]
    pub window: BranchWindow,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Wave speed.
    #[arg(long = "V", allow_hyphen_values = true)]
    pub speed: Option<f64>,
    /// Number of boundary samples.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Shape CSV (default: stdout).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Shape SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub radius: RadiusArgs,
    /// Negative control: shift Φ by 1e-3 before the identity checks.
    #[arg(long, hide = true)]
    pub perturb: bool,
}

/// Fully resolved and validated settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub radius: f64,
    pub beta: f64,
    pub a_max: f64,
    pub steps: usize,
    pub grid_n: usize,
    pub speed: f64,
    pub central: f64,
    pub l_max: usize,
    pub n_max: usize,
    pub samples: usize,
    pub output: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            radius: 4.0,
            beta: DEFAULT_BETA,
            a_max: 6.0,
            steps: 64,
            grid_n: DEFAULT_NODES,
            speed: 0.22,
            central: 1.0,
            l_max: 6,
            n_max: 4,
            samples: 720,
            output: None,
            csv: None,
            svg: None,
        }
    }
}

const CONFIG_KEYS: &[&str] = &[
    "R", "beta", "a_max", "steps", "N", "V", "A", "l_max", "n_max", "samples", "output", "csv",
    "svg",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value", no + 1))?;
        let key = key.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(format!("line {}: unknown key `{key}`", no + 1));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Values from the config file and the environment, below the flags.
struct Layers {
    file: BTreeMap<String, String>,
    env_grid: Option<String>,
}

impl Layers {
    fn get<T: std::str::FromStr>(
        &self,
        key: &str,
        flag: Option<T>,
        default: T,
    ) -> Result<T, String> {
        if let Some(v) = flag {
            return Ok(v);
        }
        let from = |raw: &str, origin: &str| {
            raw.parse::<T>()
                .map_err(|_| format!("{origin}: cannot parse `{raw}` for {key}"))
        };
        if key == "N" {
            if let Some(raw) = &self.env_grid {
                return from(raw, GRID_ENV);
            }
        }
        match self.file.get(key) {
            Some(raw) => from(raw, "config file"),
            None => Ok(default),
        }
    }

    fn path(&self, key: &str, flag: &Option<PathBuf>) -> Option<PathBuf> {
        flag.clone()
            .or_else(|| self.file.get(key).map(PathBuf::from))
    }
}

impl RunConfig {
    fn validate(&self) -> Result<(), String> {
        let c = self;
        if !(c.radius.is_finite() && c.radius > 0.0) {
            return Err(format!("R must be positive, got {}", c.radius));
        }
        if !(c.beta.is_finite() && c.beta > 0.0) {
            return Err(format!("beta must be positive, got {}", c.beta));
        }
        if !(c.a_max > 0.0 && c.a_max <= crate::steady::DEFAULT_A_MAX) {
            return Err(format!(
                "a_max must lie in (0, {}], got {}",
                crate::steady::DEFAULT_A_MAX,
                c.a_max
            ));
        }
        if c.steps < 32 {
            return Err(format!("steps must be at least 32, got {}", c.steps));
        }
        if c.grid_n < 64 || !c.grid_n.is_multiple_of(4) {
            return Err(format!(
                "N must be a multiple of 4 and at least 64, got {}",
                c.grid_n
            ));
        }
        if !(c.speed.is_finite() && c.speed.abs() <= MAX_SPEED) {
            return Err(format!(
                "validity cap: |V| must not exceed {MAX_SPEED}, got {}",
                c.speed
            ));
        }
        if !(c.central >= 0.0 && c.central <= crate::steady::DEFAULT_A_MAX) {
            return Err(format!(
                "A must lie in [0, {}], got {}",
                crate::steady::DEFAULT_A_MAX,
                c.central
            ));
        }
        if c.l_max < 2 || c.n_max < 1 {
            return Err(format!(
                "need l_max >= 2 and n_max >= 1, got {} and {}",
                c.l_max, c.n_max
            ));
        }
        if 4 * c.l_max > c.grid_n {
            return Err(format!("l_max = {} exceeds N/4", c.l_max));
        }
        if c.samples < 8 {
            return Err(format!("samples must be at least 8, got {}", c.samples));
        }
        Ok(())
    }

    fn solver(&self) -> crate::Result<SteadySolver> {
        SteadySolver::with_intervals(self.radius, self.grid_n)
    }
}

fn resolve(cli: &Cli, env_grid: Option<String>) -> Result<RunConfig, String> {
    let file = match &cli.config {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            parse_config_file(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => BTreeMap::new(),
    };
    let layers = Layers { file, env_grid };
    let d = RunConfig::default();
    let none = None::<PathBuf>;
    let (radius, window, beta, central, n_max, l_max, speed, samples, output, csv, svg) =
        match &cli.command {
            Command::Branch(a) => (
                &a.radius,
                Some(&a.window),
                None,
                None,
                None,
                None,
                None,
                None,
                &a.output,
                &none,
                &none,
            ),
            Command::Bifurcate(a) => (
                &a.radius,
                Some(&a.window),
                a.beta,
                None,
                None,
                None,
                None,
                None,
                &a.output,
                &none,
                &none,
            ),
            Command::Spectrum(a) => (
                &a.radius, None, a.beta, a.central, a.n_max, a.l_max, None, None, &a.output, &none,
                &none,
            ),
            Command::Shape(a) => (
                &a.radius,
                Some(&a.window),
                a.beta,
                None,
                None,
                None,
                a.speed,
                a.samples,
                &none,
                &a.csv,
                &a.svg,
            ),
            Command::Verify(a) => (
                &a.radius, None, None, None, None, None, None, None, &none, &none, &none,
            ),
            Command::BesselLemma(a) => (
                a, None, None, None, None, None, None, None, &none, &none, &none,
            ),
        };
    let config = RunConfig {
        radius: layers.get("R", radius.radius, d.radius)?,
        beta: layers.get("beta", beta, d.beta)?,
        a_max: layers.get("a_max", window.and_then(|w| w.a_max), d.a_max)?,
        steps: layers.get("steps", window.and_then(|w| w.steps), d.steps)?,
        grid_n: layers.get("N", cli.grid_n, d.grid_n)?,
        speed: layers.get("V", speed, d.speed)?,
        central: layers.get("A", central, d.central)?,
        l_max: layers.get("l_max", l_max, d.l_max)?,
        n_max: layers.get("n_max", n_max, d.n_max)?,
        samples: layers.get("samples", samples, d.samples)?,
        output: layers.path("output", output),
        csv: layers.path("csv", csv),
        svg: layers.path("svg", svg),
    };
    config.validate()?;
    Ok(config)
}

/// Parses `args`, runs the command and returns the exit status. Data goes to
/// `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let config = match resolve(&cli, std::env::var(GRID_ENV).ok()) {
        Ok(c) => c,
        Err(msg) => {
            let _ = writeln!(err, "usage error: {msg}");
            return EXIT_USAGE;
        }
    };
    let result = match &cli.command {
        Command::Branch(_) => cmd_branch(&config, out, err),
        Command::Bifurcate(_) => cmd_bifurcate(&config, out, err),
        Command::Spectrum(_) => cmd_spectrum(&config, out),
        Command::Shape(_) => cmd_shape(&config, out, err),
        Command::Verify(a) => cmd_verify(&config, a.perturb, out),
        Command::BesselLemma(_) => cmd_bessel_lemma(&config, out),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILURE,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

fn emit(path: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> crate::Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn trace(config: &RunConfig) -> crate::Result<(SteadySolver, Branch)> {
    let solver = config.solver()?;
    let branch = solver.trace_branch(config.a_max, config.steps)?;
    Ok((solver, branch))
}

fn report_failures(branch: &Branch, err: &mut dyn Write) -> bool {
    for f in &branch.failures {
        let _ = writeln!(err, "branch point A = {} failed: {}", f.central, f.error);
    }
    branch.failures.is_empty()
}

fn cmd_branch(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> crate::Result<bool> {
    let (_, branch) = trace(config)?;
    let rows = branch_rows(&branch)?;
    emit(&config.output, &branch_csv(&rows), out)?;
    let _ = writeln!(
        err,
        "{} points, lambda_max = {:.12}",
        branch.len(),
        branch.lambda_max
    );
    Ok(report_failures(&branch, err))
}

fn cmd_bifurcate(
    config: &RunConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> crate::Result<bool> {
    let (solver, branch) = trace(config)?;
    let report = find_tw_bifurcation(&solver, &branch, 1e-12, config.beta)?;
    for w in &report.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    emit(&config.output, &to_json(&report)?, out)?;
    Ok(report_failures(&branch, err))
}

fn cmd_spectrum(config: &RunConfig, out: &mut dyn Write) -> crate::Result<bool> {
    let state = config.solver()?.solve_for_lambda(config.central)?;
    let report = SpectrumReport::compute(&state, config.beta, config.n_max, config.l_max)?;
    emit(&config.output, &to_json(&report)?, out)?;
    Ok(true)
}

fn cmd_shape(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> crate::Result<bool> {
    let (solver, branch) = trace(config)?;
    let root = find_tw_bifurcation(&solver, &branch, 1e-12, config.beta)?.root_state;
    let fields = ExpansionFields::compute(&root, config.beta)?;
    let shape = WaveShape::from_fields(&fields, config.speed, config.samples)?;
    emit(&config.csv, &shape_csv(&shape), out)?;
    if let Some(path) = &config.svg {
        write_file(path, &shape_svg(&shape))?;
    }
    let even = shape.evenness_defect();
    let mean = shape.cosine_projection(0).abs();
    let _ = writeln!(
        err,
        "rho2 = {:.10}, rho3 = {:.10}, lambda0 = {:.10}, evenness defect {even:.1e}, mean {mean:.1e}",
        shape.rho2, shape.rho3, shape.lambda0
    );
    Ok(even <= 1e-10 && mean <= 1e-10)
}

fn cmd_bessel_lemma(config: &RunConfig, out: &mut dyn Write) -> crate::Result<bool> {
    let lemma = bessel_lemma_j(config.radius)?;
    emit(&None, &to_json(&lemma)?, out)?;
    Ok((lemma.j_quadrature - lemma.j_closed_form).abs() <= 1e-8)
}

/// One line of the verification table.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }

    fn from_result(name: &'static str, r: crate::Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(name, passed, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

/// Indices of `count` points spread evenly over `len`.
fn sample_indices(len: usize, count: usize) -> Vec<usize> {
    (0..count.min(len))
        .map(|k| (2 * k + 1) * len / (2 * count.min(len)))
        .collect()
}

fn shifted(s: &RadialSteadyState, shift: f64) -> RadialSteadyState {
    let mut s = s.clone();
    s.phi = s.phi.map(|_, v| v + shift);
    s
}

/// Runs the verification suite at `config.radius`.
pub fn verification_checks(config: &RunConfig, perturb: bool) -> crate::Result<Vec<Check>> {
    let solver = config.solver()?;
    let branch = solver.trace_branch(config.a_max, config.steps)?;
    let shift = if perturb { 1e-3 } else { 0.0 };
    let states: Vec<RadialSteadyState> = branch.points.iter().map(|s| shifted(s, shift)).collect();
    let sampled: Vec<&RadialSteadyState> = sample_indices(states.len(), 8)
        .into_iter()
        .map(|i| &states[i])
        .collect();
    let mut checks = Vec::new();

    checks.push(Check::from_result(
        "branch complete",
        Ok((
            branch.failures.is_empty(),
            format!(
                "{} points, {} failures",
                branch.len(),
                branch.failures.len()
            ),
        )),
    ));

    checks.push(Check::from_result(
        "pohozhaev identities",
        (|| {
            let mut worst = 0.0_f64;
            for s in &states {
                let (a, b) = pohozhaev_residuals(s)?;
                worst = worst.max(a).max(b);
            }
            Ok((worst <= 1e-6, format!("max residual {worst:.2e}")))
        })(),
    ));

    checks.push(Check::from_result(
        "mass identity",
        (|| {
            let mut worst = 0.0_f64;
            for s in &states {
                worst = worst.max(mass_identity_residual(s)?);
            }
            Ok((worst <= 1e-6, format!("max residual {worst:.2e}")))
        })(),
    ));

    checks.push(Check::from_result(
        "bifurcation functional forms agree",
        (|| {
            let mut worst = 0.0_f64;
            for s in &states {
                worst = worst.max(bifurcation_functional(s)?.spread(s));
            }
            Ok((worst <= 1e-6, format!("max spread {worst:.2e}")))
        })(),
    ));

    let bound = solver.lambda_bound();
    checks.push(Check::new(
        "branch bounds",
        branch.points.iter().all(|s| s.lambda <= bound) && branch.lambda_max >= (-1.0_f64).exp(),
        format!("lambda_max = {:.6} in [1/e, {bound:.6}]", branch.lambda_max),
    ));

    checks.push(Check::from_result(
        "h_1 = -dPhi",
        (|| {
            let mut worst = 0.0_f64;
            for s in &sampled {
                let h = solve_h_mode(s, 1)?;
                worst = worst.max(h.profile.zip_map(&s.dphi, |_, a, b| a + b).sup_norm());
            }
            Ok((worst <= 1e-4, format!("max sup-norm {worst:.2e}")))
        })(),
    ));

    checks.push(Check::from_result(
        "sigma positivity",
        (|| {
            let mut least = f64::INFINITY;
            for s in &sampled {
                let table = sigma_table(s, 4, 4)?;
                least = least.min(
                    table[1..]
                        .iter()
                        .flatten()
                        .fold(f64::INFINITY, |m, &v| m.min(v)),
                );
            }
            Ok((
                least > 0.0,
                format!("min sigma_nl (n, l >= 1) = {least:.6}"),
            ))
        })(),
    ));

    checks.push(Check::from_result(
        "psi ordering",
        (|| {
            let minimal: Vec<&RadialSteadyState> = sampled
                .iter()
                .copied()
                .filter(|s| {
                    branch
                        .minimal_indices()
                        .iter()
                        .any(|&i| branch.points[i].central == s.central)
                })
                .collect();
            let mut ok = true;
            for s in &minimal {
                ok &= psi_ordering_holds(s, 5)?;
            }
            Ok((ok, format!("{} minimal states, l = 2..5", minimal.len())))
        })(),
    ));

    checks.push(Check::from_result(
        "bessel lemma quadrature",
        (|| {
            let lemma = bessel_lemma_j(config.radius)?;
            let gap = (lemma.j_quadrature - lemma.j_closed_form).abs();
            Ok((
                gap <= 1e-8,
                format!(
                    "J({}) = {:.10}, |quadrature - closed form| = {gap:.1e}",
                    config.radius,
                    lemma.j()
                ),
            ))
        })(),
    ));

    checks.push(Check::from_result(
        "bessel lemma monotone",
        (|| {
            let r = config.radius;
            let lo = if r > 1.0 {
                bessel_lemma_j(r - 1.0)?.j()
            } else {
                0.0
            };
            let mid = bessel_lemma_j(r)?.j();
            let hi = bessel_lemma_j(r + 1.0)?.j();
            Ok((
                lo < mid && mid < hi,
                format!(
                    "J({}) = {lo:.6} < J({r}) = {mid:.6} < J({}) = {hi:.6}",
                    r - 1.0,
                    r + 1.0
                ),
            ))
        })(),
    ));

    checks.push(Check::from_result(
        "subsolution at lambda = 1/e",
        (|| {
            let s = solver.minimal_solution((-1.0_f64).exp())?;
            let ok = subsolution_check(&s)?;
            Ok((ok, format!("minimal state A = {:.6}", s.central)))
        })(),
    ));

    checks.push(Check::from_result(
        "traveling-wave root",
        (|| {
            let report = find_tw_bifurcation(&solver, &branch, 1e-12, config.beta)?;
            let scale = 1.0 + (report.root_state.radius * report.root_state.dphi_r).abs();
            let ok = report.functional.max_abs() <= 1e-6 * scale
                && (report.phi_tilde_slope - 1.0).abs() <= 1e-4;
            Ok((
                ok,
                format!(
                    "A* = {:.10}, phi_tilde'(R) - 1 = {:.1e}",
                    report.state.central,
                    report.phi_tilde_slope - 1.0
                ),
            ))
        })(),
    ));

    Ok(checks)
}

fn cmd_verify(config: &RunConfig, perturb: bool, out: &mut dyn Write) -> crate::Result<bool> {
    let checks = verification_checks(config, perturb)?;
    let mut text = String::new();
    for c in &checks {
        text.push_str(&format!(
            "{} {:<36} {}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    emit(&None, &text, out)?;
    Ok(checks.iter().all(|c| c.passed))
}
