//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oneway_core::mbqc::FeedForwardPolicy;

use crate::error::{AppError, FileError};
use crate::experiments::{self, CountSource, GateConfig, GroverConfig, NoiseSource, Output, Report, TomographyConfig};
use crate::io;
use crate::plot;

#[derive(Debug, Parser)]
#[command(name = "oneway", version, about = "One-way quantum computing with feed-forward on a four-qubit cluster")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single-qubit rotation R_x(beta) R_z(alpha) on |+>.
    Rotation(GateArgs),
    /// Two-qubit gate (H x H)(R_z(alpha) x R_z(beta)) CPhase on |++>.
    TwoQubit(GateArgs),
    /// Two-item Grover search on the box cluster.
    Grover(GroverArgs),
    /// Tomography of the four-qubit resource state.
    Tomography(TomographyArgs),
    /// Feed-forward latency budget and pipeline checks.
    Timing(TimingArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

impl From<Switch> for FeedForwardPolicy {
    fn from(s: Switch) -> Self {
        match s {
            Switch::On => FeedForwardPolicy::Active,
            Switch::Off => FeedForwardPolicy::Off,
        }
    }
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    /// White-noise resource state with this fidelity to the ideal cluster.
    #[arg(long, value_name = "F", conflicts_with = "rho")]
    pub noise_fidelity: Option<f64>,
    /// Four-qubit resource density matrix (JSON), in the frame of the ideal cluster.
    #[arg(long, value_name = "FILE")]
    pub rho: Option<PathBuf>,
}

impl NoiseArgs {
    fn source(&self) -> NoiseSource {
        match (&self.rho, self.noise_fidelity) {
            (Some(p), _) => NoiseSource::File(p.clone()),
            (None, Some(f)) => NoiseSource::Fidelity(f),
            (None, None) => NoiseSource::Ideal,
        }
    }
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// RNG seed; taken from the clock when absent.
    #[arg(long, value_name = "S")]
    pub seed: Option<u64>,
    /// Refuse to run without an explicit --seed.
    #[arg(long)]
    pub reproducible: bool,
}

impl SeedArgs {
    fn resolve(&self) -> Result<u64, AppError> {
        match (self.seed, self.reproducible) {
            (Some(s), _) => Ok(s),
            (None, true) => Err(AppError::Usage("--reproducible requires --seed".into())),
            (None, false) => Ok(clock_seed()),
        }
    }
}

fn clock_seed() -> u64 {
    use std::time::{SystemTime, UNIX_EPOCH};
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos() as u64).unwrap_or(0)
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// JSON report path; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Plot-data CSV path; defaults to the report path with a .csv extension.
    #[arg(long, value_name = "PATH")]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GateArgs {
    /// First measurement angle; accepts numbers and forms like pi/4, -pi/2, 3*pi/8.
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Second measurement angle.
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    pub beta: f64,
    /// Feed-forward policy.
    #[arg(long, value_enum, default_value = "on")]
    pub ff: Switch,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Sampled runs of the pattern.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    /// Mean counts per tomography setting of the output state.
    #[arg(long, default_value_t = 500.0)]
    pub mean_counts: f64,
    /// Monte Carlo resamplings for the error bars (at least 2).
    #[arg(long, default_value_t = 100)]
    pub mc_runs: usize,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GroverArgs {
    /// Tagged element as two bits.
    #[arg(long, default_value = "00", value_parser = parse_tag)]
    pub tag: u8,
    /// Feed-forward policy; both are run when omitted.
    #[arg(long, value_enum)]
    pub ff: Option<Switch>,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Sampled runs of the pattern.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TomographyArgs {
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Mean counts per setting of the simulated measurement.
    #[arg(long, default_value_t = 500.0, conflicts_with = "records")]
    pub mean_counts: f64,
    /// Reconstruct from these count records (JSON lines) instead of simulating.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["noise_fidelity", "rho"])]
    pub records: Option<PathBuf>,
    /// Write the count records used to this file.
    #[arg(long, value_name = "FILE")]
    pub save_records: Option<PathBuf>,
    /// Monte Carlo resamplings for the error bars (at least 2).
    #[arg(long, default_value_t = 100)]
    pub mc_runs: usize,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct TimingArgs {
    /// Timing configuration (JSON); omitted fields take default values.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses an angle in radians: a plain number or `[-][k][*]pi[/d]`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let bad = || format!("invalid angle {s:?}; expected a number or a form like -pi/2, 3*pi/8");
    let value = match t.find("pi") {
        None => t.parse::<f64>().map_err(|_| bad())?,
        Some(i) => {
            let (head, tail) = (&t[..i], &t[i + 2..]);
            let head = head.strip_suffix('*').unwrap_or(head);
            let coeff = match head {
                "" | "+" => 1.0,
                "-" => -1.0,
                h => h.parse::<f64>().map_err(|_| bad())?,
            };
            let denom = match tail {
                "" => 1.0,
                d => d.strip_prefix('/').and_then(|d| d.parse::<f64>().ok()).ok_or_else(bad)?,
            };
            if denom == 0.0 {
                return Err(bad());
            }
            coeff * std::f64::consts::PI / denom
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

fn parse_tag(s: &str) -> Result<u8, String> {
    match s {
        "00" => Ok(0),
        "01" => Ok(1),
        "10" => Ok(2),
        "11" => Ok(3),
        _ => Err(format!("invalid tag {s:?}; expected 00, 01, 10 or 11")),
    }
}

fn gate_config(a: &GateArgs) -> Result<GateConfig, AppError> {
    Ok(GateConfig {
        alpha: a.alpha,
        beta: a.beta,
        policy: a.ff.into(),
        noise: a.noise.source(),
        shots: a.shots,
        seed: a.seed.resolve()?,
        mean_counts: a.mean_counts,
        mc_runs: a.mc_runs,
    })
}

fn emit(out: Output, args: &OutputArgs, stdout: &mut dyn Write) -> Result<(), AppError> {
    let stdout_err = |source| AppError::File(FileError::Io { path: PathBuf::from("<stdout>"), source });
    match &args.out {
        Some(path) => {
            io::write_json(path, &out.report)?;
            let plot_path = args.plot.clone().unwrap_or_else(|| path.with_extension("csv"));
            plot::write_csv(&plot_path, &out.plot)?;
        }
        None => {
            let mut text = serde_json::to_string_pretty(&out.report).expect("reports serialize");
            text.push('\n');
            stdout.write_all(text.as_bytes()).map_err(stdout_err)?;
            if let Some(p) = &args.plot {
                plot::write_csv(p, &out.plot)?;
            }
        }
    }
    Ok(())
}

fn timing_table(r: &oneway_core::timing::TimingReport) -> String {
    let mut s = String::new();
    let mut line = |k: &str, v: String| s.push_str(&format!("{k:<28} {v}\n"));
    for (name, ns) in r.budget.components() {
        line(name, format!("{ns:.1} ns"));
    }
    line("total", format!("{:.1} ± {:.1} ns", r.latency.mean_ns, r.latency.uncertainty_ns));
    for f in &r.fibers {
        let verdict = if f.pass { "ok" } else { "TOO SHORT" };
        line(
            &format!("fiber {} ({} m)", f.name, f.length_m),
            format!("{:.0} ns vs {:.0} ns required, {verdict}", f.delay_ns, f.required_ns),
        );
    }
    for (k, d) in
        [("duty cycle @ pair rate", &r.duty_cycle_pair_rate), ("duty cycle @ max rate", &r.duty_cycle_max_rate)]
    {
        let flag = if d.warning { " (warning)" } else { "" };
        line(k, format!("{:.2}% loss at {} Hz{flag}", 100.0 * d.loss, d.rate_hz));
    }
    line("switching accuracy", format!("{:.6}", r.switching_accuracy));
    line("corrected event rate", format!("{:.4} Hz", r.corrected_event_rate_hz));
    s
}

/// Runs a parsed command, writing the report to `stdout` or the requested files.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), AppError> {
    match cli.command {
        Command::Rotation(a) => emit(experiments::rotation(&gate_config(&a)?)?, &a.output, stdout),
        Command::TwoQubit(a) => emit(experiments::two_qubit(&gate_config(&a)?)?, &a.output, stdout),
        Command::Grover(a) => {
            let cfg = GroverConfig {
                tag: a.tag,
                policy: a.ff.map(Into::into),
                noise: a.noise.source(),
                shots: a.shots,
                seed: a.seed.resolve()?,
            };
            emit(experiments::grover(&cfg)?, &a.output, stdout)
        }
        Command::Tomography(a) => {
            let counts = match &a.records {
                Some(p) => CountSource::File(p.clone()),
                None => CountSource::Simulate { mean_counts: a.mean_counts },
            };
            let cfg = TomographyConfig {
                noise: a.noise.source(),
                counts,
                seed: a.seed.resolve()?,
                mc_runs: a.mc_runs,
                save_records: a.save_records.clone(),
            };
            emit(experiments::tomography(&cfg)?, &a.output, stdout)
        }
        Command::Timing(a) => {
            let cfg = match &a.config {
                Some(p) => io::load_timing_config(p)?,
                None => io::TimingConfig::default(),
            };
            let out = experiments::timing(&cfg)?;
            match (a.format, &out.report) {
                (Format::Table, Report::Timing(r)) if a.output.out.is_none() => {
                    stdout
                        .write_all(timing_table(r).as_bytes())
                        .map_err(|source| AppError::File(FileError::Io { path: PathBuf::from("<stdout>"), source }))?;
                    if let Some(p) = &a.output.plot {
                        plot::write_csv(p, &out.plot)?;
                    }
                    Ok(())
                }
                _ => emit(out, &a.output, stdout),
            }
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
/// Diagnostics go to stderr.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { AppError::EXIT_USAGE } else { 0 };
        }
    };
    match run(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
