//! Experiment drivers. Each takes a fully resolved configuration and
//! returns a serializable report plus the rows of its plot-data table.
//!
//! Reports contain no wall-clock data and only ordered containers, so the
//! same configuration always serializes to the same bytes.

use std::path::PathBuf;

use oneway_core::cluster::{
    build_cluster_eq1, local_equivalent_density, stabilizer_expectations, ClusterForm, StabilizerSet,
};
use oneway_core::mbqc::{
    ideal_reference, lab_frame, run_grover_with, run_single_qubit_rotation_with, run_two_qubit_gate_with,
    ClusterSource, FeedForwardPolicy, GroverCorrection, GroverResult, Pattern, Reference, RunOptions, RunResult,
};
use oneway_core::metrics::{chsh_max, fidelity, tangle, witness, MetricReport};
use oneway_core::noise::solve_p_for_fidelity;
use oneway_core::rng;
use oneway_core::timing::{timing_report, TimingReport};
use oneway_core::tomography::{
    bloch_vector, mle_reconstruct_detailed, monte_carlo_errors_multi, simulate_counts, CountRecord, MLEConfig,
    MonteCarloSummary,
};
use oneway_core::{DensityMatrix, GraphSpec, StateVector};
use serde::Serialize;

use crate::error::AppError;
use crate::io::{self, TimingConfig};
use crate::plot::PlotRow;

/// Stream keys that keep the tomography and resampling draws independent of
/// the shot streams `0..shots`.
const COUNTS_STREAM: u64 = u64::MAX;
const MONTE_CARLO_KEY: u64 = 0x6d63_5f72_6573_616d;

/// Where the four-qubit resource state comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum NoiseSource {
    Ideal,
    /// White noise calibrated to this fidelity with the ideal cluster.
    Fidelity(f64),
    /// A density matrix read from disk.
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseEcho {
    Ideal,
    WhiteNoise { fidelity: f64, p: f64 },
    File { path: String },
}

/// A resolved resource state and how it was described.
pub struct Resource {
    pub rho: Option<DensityMatrix>,
    pub echo: NoiseEcho,
}

impl Resource {
    pub fn load(source: &NoiseSource) -> Result<Self, AppError> {
        match source {
            NoiseSource::Ideal => Ok(Resource { rho: None, echo: NoiseEcho::Ideal }),
            NoiseSource::Fidelity(f) => {
                let p = solve_p_for_fidelity(*f, 4).map_err(|e| AppError::core("--noise-fidelity", e))?;
                let rho = oneway_core::noise::white_noise(&build_cluster_eq1(), p)
                    .map_err(|e| AppError::core("white noise", e))?;
                Ok(Resource { rho: Some(rho), echo: NoiseEcho::WhiteNoise { fidelity: *f, p } })
            }
            NoiseSource::File(path) => {
                let rho = io::load_density(path)?;
                if rho.n_qubits() != 4 {
                    return Err(AppError::Usage(format!(
                        "{}: resource state must have 4 qubits, found {}",
                        path.display(),
                        rho.n_qubits()
                    )));
                }
                Ok(Resource { rho: Some(rho), echo: NoiseEcho::File { path: path.display().to_string() } })
            }
        }
    }

    pub fn cluster(&self) -> ClusterSource<'_> {
        match &self.rho {
            None => ClusterSource::Ideal,
            Some(rho) => ClusterSource::Mixed(rho),
        }
    }

    /// The resource state as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        self.rho.clone().unwrap_or_else(|| build_cluster_eq1().to_density())
    }
}

/// Parameters of a rotation or two-qubit run.
#[derive(Clone, Debug, PartialEq)]
pub struct GateConfig {
    pub alpha: f64,
    pub beta: f64,
    pub policy: FeedForwardPolicy,
    pub noise: NoiseSource,
    pub shots: u64,
    pub seed: u64,
    pub mean_counts: f64,
    pub mc_runs: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroverConfig {
    pub tag: u8,
    /// `None` runs both policies.
    pub policy: Option<FeedForwardPolicy>,
    pub noise: NoiseSource,
    pub shots: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CountSource {
    Simulate { mean_counts: f64 },
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TomographyConfig {
    pub noise: NoiseSource,
    pub counts: CountSource,
    pub seed: u64,
    pub mc_runs: usize,
    pub save_records: Option<PathBuf>,
}

/// Echo of the gate parameters in a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateEcho {
    pub alpha: f64,
    pub beta: f64,
    pub feedforward: FeedForwardPolicy,
    pub noise: NoiseEcho,
    pub shots: u64,
    pub seed: u64,
    pub mean_counts: f64,
    pub mc_runs: usize,
}

/// Amplitudes as `[re, im]` pairs.
pub type Amplitudes = Vec<[f64; 2]>;

fn amplitudes(psi: &StateVector) -> Amplitudes {
    psi.amplitudes().iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct References {
    /// Target in the logical frame.
    pub logical: Amplitudes,
    /// Target as it appears on the physical output qubits.
    pub lab: Amplitudes,
}

/// A quantity with a Monte Carlo error bar.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub mc_mean: f64,
    pub mc_std: f64,
}

impl Estimate {
    fn new(value: f64, mc: &MonteCarloSummary) -> Self {
        Estimate { value, mc_mean: mc.mean, mc_std: mc.std }
    }
}

/// Tomographic check of an output state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputTomography {
    pub mean_counts: f64,
    pub mc_runs: usize,
    pub iterations: usize,
    pub reconstructed: DensityMatrix,
    pub fidelity: Estimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bloch: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tangle: Option<Estimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chsh_s: Option<Estimate>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchMetrics {
    pub outcomes: String,
    pub metrics: Option<MetricReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateReport {
    pub experiment: &'static str,
    pub config: GateEcho,
    pub reference: References,
    pub run: RunResult,
    /// Two-qubit runs only.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub branch_metrics: Vec<BranchMetrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub averaged_metrics: Option<MetricReport>,
    pub tomography: OutputTomography,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroverEcho {
    pub tag: String,
    pub noise: NoiseEcho,
    pub shots: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroverReport {
    pub experiment: &'static str,
    pub config: GroverEcho,
    pub runs: Vec<GroverResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizerValue {
    pub label: String,
    pub expectation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TomographyEcho {
    pub noise: NoiseEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_counts: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub records: Option<String>,
    pub seed: u64,
    pub mc_runs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TomographyReport {
    pub experiment: &'static str,
    pub config: TomographyEcho,
    pub settings: usize,
    pub projectors: usize,
    pub total_counts: u64,
    pub iterations: usize,
    pub log_likelihood: f64,
    /// Fidelity of the generating state with the ideal cluster; absent for
    /// counts read from a file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generating_fidelity: Option<f64>,
    pub fidelity: Estimate,
    pub witness_pass: bool,
    /// Stabilizer-group expectations of the reconstruction, evaluated in the
    /// linear-cluster frame.
    pub stabilizers: Vec<StabilizerValue>,
    pub reconstructed: DensityMatrix,
}

/// Everything a command can print.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Report {
    Gate(Box<GateReport>),
    Grover(GroverReport),
    Tomography(Box<TomographyReport>),
    Timing(TimingReport),
}

pub struct Output {
    pub report: Report,
    pub plot: Vec<PlotRow>,
}

fn bits(outcomes: &[oneway_core::Outcome]) -> String {
    outcomes.iter().map(|o| char::from(b'0' + o.bit())).collect()
}

fn reference_state(pattern: &Pattern) -> Result<StateVector, AppError> {
    match ideal_reference(pattern).map_err(|e| AppError::core("reference state", e))? {
        Reference::State(s) => Ok(s),
        Reference::Distribution(_) => unreachable!("gate patterns have state references"),
    }
}

fn density_rows(series: &str, rho: &DensityMatrix, out: &mut Vec<PlotRow>) {
    let d = rho.dim();
    let width = rho.n_qubits();
    let m = rho.matrix();
    for r in 0..d {
        for c in 0..d {
            let label = format!("{:0w$b},{:0w$b}", r, c, w = width);
            let x = (r * d + c) as f64;
            let z = m[(r, c)];
            out.push(PlotRow::new(&format!("{series}_re"), &label, x, z.re));
            out.push(PlotRow::new(&format!("{series}_im"), &label, x, z.im));
        }
    }
}

fn output_tomography(
    rho: &DensityMatrix,
    target: &StateVector,
    mean_counts: f64,
    mc_runs: usize,
    seed: u64,
) -> Result<OutputTomography, AppError> {
    let mut r = rng::substream(seed, COUNTS_STREAM);
    let records = simulate_counts(rho, mean_counts, &mut r).map_err(|e| AppError::core("--mean-counts", e))?;
    let config = MLEConfig::default();
    let fit = mle_reconstruct_detailed(&records, &config).map_err(|e| AppError::core("output tomography", e))?;
    let two = rho.n_qubits() == 2;
    let mc = monte_carlo_errors_multi(&records, mc_runs, &config, seed ^ MONTE_CARLO_KEY, |est| {
        let f = fidelity(est, target).unwrap_or(f64::NAN);
        if two {
            vec![f, tangle(est).unwrap_or(f64::NAN), chsh_max(est).unwrap_or(f64::NAN)]
        } else {
            vec![f]
        }
    })
    .map_err(|e| AppError::core("Monte Carlo error bars", e))?;
    let est = &fit.rho;
    let value = |e: oneway_core::Result<f64>| e.map_err(|e| AppError::core("output metrics", e));
    Ok(OutputTomography {
        mean_counts,
        mc_runs,
        iterations: fit.iterations,
        fidelity: Estimate::new(value(fidelity(est, target))?, &mc[0]),
        bloch: if two { None } else { Some(bloch_vector(est).map_err(|e| AppError::core("bloch vector", e))?) },
        tangle: if two { Some(Estimate::new(value(tangle(est))?, &mc[1])) } else { None },
        chsh_s: if two { Some(Estimate::new(value(chsh_max(est))?, &mc[2])) } else { None },
        reconstructed: fit.rho,
    })
}

fn gate_echo(cfg: &GateConfig, resource: &Resource) -> GateEcho {
    GateEcho {
        alpha: cfg.alpha,
        beta: cfg.beta,
        feedforward: cfg.policy,
        noise: resource.echo.clone(),
        shots: cfg.shots,
        seed: cfg.seed,
        mean_counts: cfg.mean_counts,
        mc_runs: cfg.mc_runs,
    }
}

fn branch_plot(run: &RunResult, plot: &mut Vec<PlotRow>) {
    for (i, b) in run.branches.iter().enumerate() {
        let label = bits(&b.outcomes);
        plot.push(PlotRow::new("branch_probability", &label, i as f64, b.probability));
        if let Some(f) = b.fidelity {
            plot.push(PlotRow::new("branch_fidelity", &label, i as f64, f));
        }
    }
    plot.push(PlotRow::new("averaged_fidelity", "sampled", 0.0, run.averaged_fidelity));
    plot.push(PlotRow::new("averaged_fidelity", "exact", 1.0, run.exact_average_fidelity));
}

/// Single-qubit rotation R_x(β)R_z(α) on |+⟩.
pub fn rotation(cfg: &GateConfig) -> Result<Output, AppError> {
    let resource = Resource::load(&cfg.noise)?;
    let opts = RunOptions { shots: cfg.shots, seed: cfg.seed, cluster: resource.cluster() };
    let run = run_single_qubit_rotation_with(cfg.alpha, cfg.beta, cfg.policy, &opts)
        .map_err(|e| AppError::core("rotation", e))?;
    let logical = reference_state(&run.pattern)?;
    let lab = lab_frame(&logical).map_err(|e| AppError::core("lab frame", e))?;
    let tomography = output_tomography(&run.averaged, &logical, cfg.mean_counts, cfg.mc_runs, cfg.seed)?;

    let mut plot = Vec::new();
    branch_plot(&run, &mut plot);
    density_rows("output", &run.averaged, &mut plot);
    density_rows("reconstructed", &tomography.reconstructed, &mut plot);
    if let Some(b) = tomography.bloch {
        for (i, (axis, v)) in ["x", "y", "z"].iter().zip(b).enumerate() {
            plot.push(PlotRow::new("bloch", axis, i as f64, v));
        }
    }
    plot.push(PlotRow::with_err(
        "tomography_fidelity",
        "reconstructed",
        0.0,
        tomography.fidelity.value,
        tomography.fidelity.mc_std,
    ));

    let report = GateReport {
        experiment: "rotation",
        config: gate_echo(cfg, &resource),
        reference: References { logical: amplitudes(&logical), lab: amplitudes(&lab) },
        run,
        branch_metrics: Vec::new(),
        averaged_metrics: None,
        tomography,
    };
    Ok(Output { report: Report::Gate(Box::new(report)), plot })
}

/// Two-qubit gate (H⊗H)(R_z(α)⊗R_z(β)) CPhase on |++⟩.
pub fn two_qubit(cfg: &GateConfig) -> Result<Output, AppError> {
    let resource = Resource::load(&cfg.noise)?;
    let opts = RunOptions { shots: cfg.shots, seed: cfg.seed, cluster: resource.cluster() };
    let run = run_two_qubit_gate_with(cfg.alpha, cfg.beta, cfg.policy, &opts)
        .map_err(|e| AppError::core("two-qubit gate", e))?;
    let logical = reference_state(&run.pattern)?;
    let lab = lab_frame(&logical).map_err(|e| AppError::core("lab frame", e))?;

    let metrics =
        |rho: &DensityMatrix| MetricReport::evaluate(rho, &logical).map_err(|e| AppError::core("output metrics", e));
    let branch_metrics = run
        .branches
        .iter()
        .map(|b| {
            Ok(BranchMetrics { outcomes: bits(&b.outcomes), metrics: b.output.as_ref().map(metrics).transpose()? })
        })
        .collect::<Result<Vec<_>, AppError>>()?;
    let averaged_metrics = metrics(&run.averaged)?;
    let tomography = output_tomography(&run.averaged, &logical, cfg.mean_counts, cfg.mc_runs, cfg.seed)?;

    let mut plot = Vec::new();
    branch_plot(&run, &mut plot);
    for (i, bm) in branch_metrics.iter().enumerate() {
        if let Some(m) = &bm.metrics {
            plot.push(PlotRow::new("branch_tangle", &bm.outcomes, i as f64, m.tangle.unwrap_or(f64::NAN)));
            plot.push(PlotRow::new("branch_chsh", &bm.outcomes, i as f64, m.chsh_s.unwrap_or(f64::NAN)));
        }
    }
    let t = &tomography;
    for (i, (name, e)) in
        [("fidelity", Some(&t.fidelity)), ("tangle", t.tangle.as_ref()), ("chsh_s", t.chsh_s.as_ref())]
            .into_iter()
            .enumerate()
    {
        if let Some(e) = e {
            plot.push(PlotRow::with_err("tomography_metric", name, i as f64, e.value, e.mc_std));
        }
    }
    density_rows("output", &run.averaged, &mut plot);
    density_rows("reconstructed", &tomography.reconstructed, &mut plot);

    let report = GateReport {
        experiment: "two_qubit",
        config: gate_echo(cfg, &resource),
        reference: References { logical: amplitudes(&logical), lab: amplitudes(&lab) },
        run,
        branch_metrics,
        averaged_metrics: Some(averaged_metrics),
        tomography,
    };
    Ok(Output { report: Report::Gate(Box::new(report)), plot })
}

pub fn grover(cfg: &GroverConfig) -> Result<Output, AppError> {
    if cfg.tag > 3 {
        return Err(AppError::Usage(format!("--tag must be one of 00, 01, 10, 11, got {}", cfg.tag)));
    }
    let resource = Resource::load(&cfg.noise)?;
    let opts = RunOptions { shots: cfg.shots, seed: cfg.seed, cluster: resource.cluster() };
    let policies = match cfg.policy {
        Some(p) => vec![p],
        None => vec![FeedForwardPolicy::Active, FeedForwardPolicy::Off],
    };
    let runs = policies
        .into_iter()
        .map(|p| run_grover_with(cfg.tag, p, GroverCorrection::Relabel, &opts).map_err(|e| AppError::core("grover", e)))
        .collect::<Result<Vec<_>, _>>()?;

    let mut plot = Vec::new();
    for run in &runs {
        let name = match run.policy {
            FeedForwardPolicy::Active => "ff_on",
            FeedForwardPolicy::Off => "ff_off",
        };
        for k in 0..4 {
            let label = format!("{:02b}", k);
            plot.push(PlotRow::new(&format!("{name}_exact"), &label, k as f64, run.probabilities[k]));
            let n = run.shots as f64;
            let f = run.frequencies[k];
            plot.push(PlotRow::with_err(&format!("{name}_sampled"), &label, k as f64, f, (f * (1.0 - f) / n).sqrt()));
        }
    }
    let report = GroverReport {
        experiment: "grover",
        config: GroverEcho { tag: format!("{:02b}", cfg.tag), noise: resource.echo, shots: cfg.shots, seed: cfg.seed },
        runs,
    };
    Ok(Output { report: Report::Grover(report), plot })
}

/// Four-qubit cluster tomography: counts, reconstruction, fidelity with the
/// ideal cluster, stabilizers and Monte Carlo error bars.
pub fn tomography(cfg: &TomographyConfig) -> Result<Output, AppError> {
    let resource = Resource::load(&cfg.noise)?;
    let target = build_cluster_eq1();
    let (records, generating_fidelity, mean_counts, path): (Vec<CountRecord>, _, _, _) = match &cfg.counts {
        CountSource::Simulate { mean_counts } => {
            let rho = resource.density();
            let mut r = rng::substream(cfg.seed, COUNTS_STREAM);
            let recs = simulate_counts(&rho, *mean_counts, &mut r).map_err(|e| AppError::core("--mean-counts", e))?;
            let f = fidelity(&rho, &target).map_err(|e| AppError::core("generating fidelity", e))?;
            (recs, Some(f), Some(*mean_counts), None)
        }
        CountSource::File(p) => (io::read_count_records(p)?, None, None, Some(p.display().to_string())),
    };
    if let Some(p) = &cfg.save_records {
        io::write_count_records(p, &records)?;
    }
    if records.first().map(|r| r.setting.n_qubits()) != Some(4) {
        return Err(AppError::Usage("tomography expects four-qubit count records".into()));
    }

    let config = MLEConfig::default();
    let fit = mle_reconstruct_detailed(&records, &config).map_err(|e| AppError::core("reconstruction", e))?;
    let mc = monte_carlo_errors_multi(&records, cfg.mc_runs, &config, cfg.seed ^ MONTE_CARLO_KEY, |est| {
        vec![fidelity(est, &target).unwrap_or(f64::NAN)]
    })
    .map_err(|e| AppError::core("Monte Carlo error bars", e))?;
    let f = fidelity(&fit.rho, &target).map_err(|e| AppError::core("fidelity", e))?;

    let linear =
        local_equivalent_density(&fit.rho, ClusterForm::Linear).map_err(|e| AppError::core("frame change", e))?;
    let chain = GraphSpec::linear4();
    let values = stabilizer_expectations(&linear, &chain, StabilizerSet::FullGroup)
        .map_err(|e| AppError::core("stabilizers", e))?;
    let stabilizers: Vec<StabilizerValue> = chain
        .stabilizer_group()
        .iter()
        .zip(values)
        .map(|(s, v)| StabilizerValue { label: s.label(), expectation: v })
        .collect();

    let mut plot = Vec::new();
    for (i, s) in stabilizers.iter().enumerate() {
        plot.push(PlotRow::new("stabilizer", &s.label, i as f64, s.expectation));
    }
    plot.push(PlotRow::with_err("fidelity", "reconstructed", 0.0, f, mc[0].std));
    if let Some(g) = generating_fidelity {
        plot.push(PlotRow::new("fidelity", "generating", 1.0, g));
    }
    density_rows("reconstructed", &fit.rho, &mut plot);

    let report = TomographyReport {
        experiment: "tomography",
        config: TomographyEcho {
            noise: resource.echo,
            mean_counts,
            records: path,
            seed: cfg.seed,
            mc_runs: cfg.mc_runs,
        },
        settings: records.len(),
        projectors: records.iter().map(|r| r.counts.len()).sum(),
        total_counts: records.iter().map(CountRecord::total).sum(),
        iterations: fit.iterations,
        log_likelihood: fit.log_likelihood,
        generating_fidelity,
        fidelity: Estimate::new(f, &mc[0]),
        witness_pass: witness(f),
        stabilizers,
        reconstructed: fit.rho,
    };
    Ok(Output { report: Report::Tomography(Box::new(report)), plot })
}

pub fn timing(cfg: &TimingConfig) -> Result<Output, AppError> {
    let report = timing_report(&cfg.pipeline, &cfg.budget).map_err(|e| AppError::core("timing model", e))?;
    let mut plot = Vec::new();
    for (i, (name, ns)) in report.budget.components().iter().enumerate() {
        plot.push(PlotRow::new("latency_ns", name, i as f64, *ns));
    }
    plot.push(PlotRow::with_err("latency_ns", "total", 6.0, report.latency.mean_ns, report.latency.uncertainty_ns));
    for (i, f) in report.fibers.iter().enumerate() {
        plot.push(PlotRow::new("fiber_delay_ns", &f.name, i as f64, f.delay_ns));
    }
    Ok(Output { report: Report::Timing(report), plot })
}
