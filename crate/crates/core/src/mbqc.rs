//! Measurement patterns on the four-qubit cluster with Pauli-frame
//! feed-forward.
//!
//! All patterns run on a local-unitary form of the resource state from
//! [`cluster::build_cluster_eq1`]: the chain 1–2–3–4 for the rotation and
//! the two-qubit gate, the 4-cycle 1–3–2–4–1 for Grover search. Outputs and
//! references are expressed in that graph-state frame. [`lab_frame`] maps a
//! logical output back to the frame of the resource state, which differs by
//! a Hadamard on every output qubit.
//!
//! Runs are exact: every outcome branch is evaluated on its conditional
//! state, and shots only sample which branch occurs. Each shot draws from
//! its own RNG substream.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use crate::cluster::{self, ClusterForm, GraphSpec};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::gates::Operator;
use crate::measure::{MeasurementBasis, Outcome};
use crate::pauli::PauliFrame;
use crate::rng;
use crate::state::StateVector;

/// Probability below which a branch is treated as impossible.
const BRANCH_FLOOR: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum FeedForwardPolicy {
    /// Adapt later bases and correct (or reinterpret) the output.
    Active,
    /// Fixed bases, raw output.
    Off,
}

/// The computations the engine knows how to run.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Pattern {
    /// R_x(β) R_z(α) on an encoded |+⟩.
    Rotation { alpha: f64, beta: f64 },
    /// (H ⊗ H)(R_z(α) ⊗ R_z(β)) CPhase on |++⟩.
    TwoQubit { alpha: f64, beta: f64 },
    /// Two-item Grover search; `tag` is the element index r₁r₄ in 0..4.
    Grover { tag: u8 },
}

/// What [`ideal_reference`] returns.
#[derive(Clone, Debug, PartialEq)]
pub enum Reference {
    State(StateVector),
    Distribution([f64; 4]),
}

/// Resource state fed to a run.
#[derive(Clone, Copy, Debug, Default)]
pub enum ClusterSource<'a> {
    /// The pure state ½(|0000⟩ + |0011⟩ + |1100⟩ − |1111⟩).
    #[default]
    Ideal,
    /// A four-qubit density matrix in the same frame as the ideal state.
    Mixed(&'a DensityMatrix),
}

/// Pure or mixed register; the engine keeps ideal runs pure.
#[derive(Clone, Debug)]
enum Register {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl Register {
    fn from_source(source: ClusterSource<'_>, form: ClusterForm) -> Result<Self> {
        match source {
            ClusterSource::Ideal => Ok(Register::Pure(cluster::local_equivalent(&cluster::build_cluster_eq1(), form)?)),
            ClusterSource::Mixed(rho) => Ok(Register::Mixed(cluster::local_equivalent_density(rho, form)?)),
        }
    }

    fn probabilities(&self, q: usize, basis: &MeasurementBasis) -> Result<(f64, f64)> {
        match self {
            Register::Pure(s) => s.born_probabilities(q, basis),
            Register::Mixed(r) => r.born_probabilities(q, basis),
        }
    }

    fn collapse(&self, q: usize, basis: &MeasurementBasis, outcome: Outcome) -> Result<Register> {
        Ok(match self {
            Register::Pure(s) => Register::Pure(s.collapse(q, basis, outcome)?),
            Register::Mixed(r) => Register::Mixed(r.collapse(q, basis, outcome)?),
        })
    }

    fn correct(&self, frame: &PauliFrame) -> Result<Register> {
        Ok(match self {
            Register::Pure(s) => Register::Pure(frame.apply(s)?),
            Register::Mixed(r) => Register::Mixed(frame.apply_density(r)?),
        })
    }

    fn into_density(self) -> DensityMatrix {
        match self {
            Register::Pure(s) => s.to_density(),
            Register::Mixed(r) => r,
        }
    }
}

/// One measurement with a Born-rule sample: returns the outcome and the
/// post-measurement state with `qubit` removed.
pub fn measure_qubit<R: Rng + ?Sized>(
    state: &StateVector,
    qubit: usize,
    basis: &MeasurementBasis,
    rng: &mut R,
) -> Result<(Outcome, StateVector)> {
    let (p0, _) = state.born_probabilities(qubit, basis)?;
    let outcome = if rng.random::<f64>() < p0 { Outcome::Zero } else { Outcome::One };
    Ok((outcome, state.collapse(qubit, basis, outcome)?))
}

/// The correction σ_x^{x_k} σ_z^{z_k} of `frame` applied to every output qubit.
pub fn branch_correction(frame: &PauliFrame, state: &StateVector) -> Result<StateVector> {
    frame.apply(state)
}

/// Basis of the second rotation measurement: B((−1)^{s₂} β) with active
/// feed-forward, B(β) otherwise.
pub fn adapted_beta(beta: f64, s2: Outcome, policy: FeedForwardPolicy) -> f64 {
    match policy {
        FeedForwardPolicy::Active => s2.sign() * beta,
        FeedForwardPolicy::Off => beta,
    }
}

/// Byproduct frame of a pattern branch: the Pauli operator that undoes the
/// outcome-dependent part of the output.
///
/// * rotation, outcomes `[s₂, s₃]`: output σ_x^{s₃} σ_z^{s₂} R_x(β) R_z(α)|+⟩,
///   frame (x = s₃, z = s₂);
/// * two-qubit gate, outcomes `[s₂, s₃]`: σ_x^{s₂} on qubit 1 and σ_x^{s₃}
///   on qubit 4;
/// * Grover, oracle outcomes `[s₂, s₃]`: σ_z^{s₂} on qubit 1 and σ_z^{s₃}
///   on qubit 4, which is equivalent to flipping the B(π) readout bits.
pub fn byproduct_frame(pattern: &Pattern, outcomes: &[Outcome]) -> PauliFrame {
    let s = |k: usize| outcomes.get(k).map_or(0, |o| o.bit());
    match pattern {
        Pattern::Rotation { .. } => PauliFrame::from_powers(&[(s(1), s(0))]),
        Pattern::TwoQubit { .. } => PauliFrame::from_powers(&[(s(0), 0), (s(1), 0)]),
        Pattern::Grover { .. } => PauliFrame::from_powers(&[(0, s(0)), (0, s(1))]),
    }
}

/// Error-free output computed from gate products alone.
pub fn ideal_reference(pattern: &Pattern) -> Result<Reference> {
    match *pattern {
        Pattern::Rotation { alpha, beta } => {
            let u = Operator::rx(beta).then_after(&Operator::rz(alpha));
            Ok(Reference::State(StateVector::plus().apply(&u, &[0])?))
        }
        Pattern::TwoQubit { alpha, beta } => {
            let psi = StateVector::plus_n(2)?
                .apply(&Operator::cphase(), &[0, 1])?
                .apply(&Operator::rz(alpha), &[0])?
                .apply(&Operator::rz(beta), &[1])?
                .apply(&Operator::hadamard(), &[0])?
                .apply(&Operator::hadamard(), &[1])?;
            Ok(Reference::State(psi))
        }
        Pattern::Grover { tag } => {
            let tag = check_tag(tag)?;
            let mut d = [0.0; 4];
            d[tag as usize] = 1.0;
            Ok(Reference::Distribution(d))
        }
    }
}

/// Maps a logical output into the frame of the resource state (a Hadamard
/// on each output qubit).
pub fn lab_frame(logical: &StateVector) -> Result<StateVector> {
    let h = Operator::hadamard();
    let mut out = logical.clone();
    for q in 0..out.n_qubits() {
        out.apply_in_place(&h, &[q])?;
    }
    Ok(out)
}

/// Options shared by all runs.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions<'a> {
    pub shots: u64,
    pub seed: u64,
    pub cluster: ClusterSource<'a>,
}

impl RunOptions<'static> {
    pub fn ideal(shots: u64, seed: u64) -> Self {
        RunOptions { shots, seed, cluster: ClusterSource::Ideal }
    }
}

/// One outcome branch of a gate pattern.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Branch {
    /// Outcome bits of the measured qubits, in measurement order.
    pub outcomes: Vec<Outcome>,
    /// Exact probability of the branch (conditional on post-selection).
    pub probability: f64,
    /// Shots that landed in this branch.
    pub count: u64,
    /// Correction applied to the output; trivial with feed-forward off.
    pub correction: PauliFrame,
    /// Output state after correction, `None` for impossible branches.
    pub output: Option<DensityMatrix>,
    pub fidelity: Option<f64>,
}

/// Post-selection bookkeeping for patterns that discard outcomes.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PostSelection {
    /// Qubit (zero-based, in the resource state) measured in the computational basis.
    pub qubit: usize,
    pub kept_outcome: Outcome,
    /// Exact probability of the kept outcome.
    pub kept_probability: f64,
    pub discarded_shots: u64,
}

/// Result of a rotation or two-qubit run.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunResult {
    pub pattern: Pattern,
    pub policy: FeedForwardPolicy,
    pub shots: u64,
    pub seed: u64,
    pub post_selection: Option<PostSelection>,
    pub branches: Vec<Branch>,
    /// Branch outputs weighted by sampled counts.
    pub averaged: DensityMatrix,
    pub averaged_fidelity: f64,
    /// Branch outputs weighted by exact probabilities.
    pub exact_average: DensityMatrix,
    pub exact_average_fidelity: f64,
}

impl RunResult {
    pub fn branch(&self, outcomes: &[Outcome]) -> Option<&Branch> {
        self.branches.iter().find(|b| b.outcomes == outcomes)
    }

    pub fn kept_shots(&self) -> u64 {
        self.branches.iter().map(|b| b.count).sum()
    }
}

fn check_shots(shots: u64) -> Result<()> {
    if shots == 0 {
        Err(Error::NoShots)
    } else {
        Ok(())
    }
}

fn check_tag(tag: u8) -> Result<u8> {
    if tag < 4 {
        Ok(tag)
    } else {
        Err(Error::OutOfRange { name: "tag", value: tag as f64, range: "0..4" })
    }
}

fn bit2(a: u8, b: u8) -> usize {
    ((a as usize) << 1) | b as usize
}

const OUTCOMES: [Outcome; 2] = [Outcome::Zero, Outcome::One];

/// Leaf of a two-measurement tree.
struct Leaf {
    outcomes: [Outcome; 2],
    /// p(s_a) and p(s_b | s_a).
    first: f64,
    second: f64,
    state: Option<Register>,
}

/// Picks a branch by sequential Born sampling over a two-level tree whose
/// leaves are indexed `2·s_a + s_b`.
fn sample_two_level<R: Rng + ?Sized>(leaves: &[Leaf], rng: &mut R) -> usize {
    let p_a0 = leaves[0].first;
    let a = if rng.random::<f64>() < p_a0 { 0 } else { 1 };
    let p_b0 = leaves[2 * a].second;
    let b = if rng.random::<f64>() < p_b0 { 0 } else { 1 };
    2 * a + b
}

fn expand_two_level(
    reg: &Register,
    first: (usize, MeasurementBasis),
    second: impl Fn(Outcome) -> (usize, MeasurementBasis),
) -> Result<Vec<Leaf>> {
    let mut leaves = Vec::with_capacity(4);
    let probs_a = reg.probabilities(first.0, &first.1)?;
    for sa in OUTCOMES {
        let pa = if sa == Outcome::Zero { probs_a.0 } else { probs_a.1 };
        let after_a = if pa > BRANCH_FLOOR { Some(reg.collapse(first.0, &first.1, sa)?) } else { None };
        let (qb, basis_b) = second(sa);
        let probs_b = match &after_a {
            Some(r) => r.probabilities(qb, &basis_b)?,
            None => (0.5, 0.5),
        };
        for sb in OUTCOMES {
            let pb = if sb == Outcome::Zero { probs_b.0 } else { probs_b.1 };
            let state = match &after_a {
                Some(r) if pb > BRANCH_FLOOR => Some(r.collapse(qb, &basis_b, sb)?),
                _ => None,
            };
            leaves.push(Leaf { outcomes: [sa, sb], first: pa, second: pb, state });
        }
    }
    Ok(leaves)
}

fn finish_gate_run(
    pattern: Pattern,
    policy: FeedForwardPolicy,
    opts: &RunOptions<'_>,
    leaves: Vec<Leaf>,
    post_selection: Option<(usize, f64)>,
) -> Result<RunResult> {
    let target = match ideal_reference(&pattern)? {
        Reference::State(s) => s,
        Reference::Distribution(_) => unreachable!("gate patterns have state references"),
    };

    // Sample shots.
    let mut counts = [0u64; 4];
    let mut discarded = 0u64;
    for shot in 0..opts.shots {
        let mut r = rng::substream(opts.seed, shot);
        if let Some((_, kept_p)) = post_selection {
            if r.random::<f64>() >= kept_p {
                discarded += 1;
                continue;
            }
        }
        counts[sample_two_level(&leaves, &mut r)] += 1;
    }
    let kept: u64 = counts.iter().sum();

    let mut branches = Vec::with_capacity(4);
    let mut exact_terms = Vec::new();
    let mut sampled_terms = Vec::new();
    for (i, leaf) in leaves.into_iter().enumerate() {
        let correction = match policy {
            FeedForwardPolicy::Active => byproduct_frame(&pattern, &leaf.outcomes),
            FeedForwardPolicy::Off => PauliFrame::new(target.n_qubits()),
        };
        let output = match leaf.state {
            Some(reg) => Some(reg.correct(&correction)?.into_density()),
            None => None,
        };
        let fidelity = match &output {
            Some(rho) => Some(rho.expectation_in(&target)?.clamp(0.0, 1.0)),
            None => None,
        };
        branches.push(Branch {
            outcomes: leaf.outcomes.to_vec(),
            probability: leaf.first * leaf.second,
            count: counts[i],
            correction,
            output,
            fidelity,
        });
    }
    for b in &branches {
        if let Some(rho) = &b.output {
            exact_terms.push((b.probability, rho));
            if kept > 0 {
                sampled_terms.push((b.count as f64 / kept as f64, rho));
            }
        }
    }
    let exact_average = DensityMatrix::weighted_sum(&exact_terms)?;
    let averaged =
        if sampled_terms.is_empty() { exact_average.clone() } else { DensityMatrix::weighted_sum(&sampled_terms)? };
    let averaged_fidelity = averaged.expectation_in(&target)?.clamp(0.0, 1.0);
    let exact_average_fidelity = exact_average.expectation_in(&target)?.clamp(0.0, 1.0);

    Ok(RunResult {
        pattern,
        policy,
        shots: opts.shots,
        seed: opts.seed,
        post_selection: post_selection.map(|(qubit, kept_probability)| PostSelection {
            qubit,
            kept_outcome: Outcome::Zero,
            kept_probability,
            discarded_shots: discarded,
        }),
        branches,
        averaged,
        averaged_fidelity,
        exact_average,
        exact_average_fidelity,
    })
}

/// Single-qubit rotation on the chain 1–2–3–4.
///
/// Qubit 1 is measured in the computational basis and only s₁ = 0 is kept;
/// qubit 2 is measured in B(α), qubit 3 in B(±β); the output lives on qubit 4.
pub fn run_single_qubit_rotation_with(
    alpha: f64,
    beta: f64,
    policy: FeedForwardPolicy,
    opts: &RunOptions<'_>,
) -> Result<RunResult> {
    check_shots(opts.shots)?;
    let lin = Register::from_source(opts.cluster, ClusterForm::Linear)?;
    let z = MeasurementBasis::computational();
    let (kept_p, _) = lin.probabilities(0, &z)?;
    if kept_p <= BRANCH_FLOOR {
        return Err(Error::ZeroProbability { outcome: 0, probability: kept_p });
    }
    let reg = lin.collapse(0, &z, Outcome::Zero)?;
    let leaves = expand_two_level(&reg, (0, MeasurementBasis::equatorial(alpha)), |s2| {
        (0, MeasurementBasis::equatorial(adapted_beta(beta, s2, policy)))
    })?;
    finish_gate_run(Pattern::Rotation { alpha, beta }, policy, opts, leaves, Some((0, kept_p)))
}

pub fn run_single_qubit_rotation(
    alpha: f64,
    beta: f64,
    policy: FeedForwardPolicy,
    shots: u64,
    seed: u64,
) -> Result<RunResult> {
    run_single_qubit_rotation_with(alpha, beta, policy, &RunOptions::ideal(shots, seed))
}

/// Two-qubit gate on the horseshoe ordering of the chain: qubits 2 and 3 are
/// measured in B(α) and B(β) and the output lives on qubits 1 and 4.
pub fn run_two_qubit_gate_with(
    alpha: f64,
    beta: f64,
    policy: FeedForwardPolicy,
    opts: &RunOptions<'_>,
) -> Result<RunResult> {
    check_shots(opts.shots)?;
    let reg = Register::from_source(opts.cluster, ClusterForm::Horseshoe)?;
    // After qubit 2 is gone, qubit 3 sits at index 1.
    let leaves =
        expand_two_level(&reg, (1, MeasurementBasis::equatorial(alpha)), |_| (1, MeasurementBasis::equatorial(beta)))?;
    finish_gate_run(Pattern::TwoQubit { alpha, beta }, policy, opts, leaves, None)
}

pub fn run_two_qubit_gate(
    alpha: f64,
    beta: f64,
    policy: FeedForwardPolicy,
    shots: u64,
    seed: u64,
) -> Result<RunResult> {
    run_two_qubit_gate_with(alpha, beta, policy, &RunOptions::ideal(shots, seed))
}

/// Oracle angles (α, β) on qubits 2 and 3 that tag element `tag` = t₁t₄:
/// α = π(1 − t₁), β = π(1 − t₄). Tag 00 is the B₂,₃(π) oracle.
pub fn grover_oracle_angles(tag: u8) -> (f64, f64) {
    let t1 = (tag >> 1) & 1;
    let t4 = tag & 1;
    (PI * (1 - t1) as f64, PI * (1 - t4) as f64)
}

/// Raw B₁,₄(π) readout r₁r₄ of the ideal box cluster, indexed by
/// `[tag][2·s₂ + s₃]`, with oracle angles from [`grover_oracle_angles`].
/// Every entry is deterministic; see [`derive_grover_table`].
pub const GROVER_RAW_READOUT: [[u8; 4]; 4] =
    [[0b00, 0b01, 0b10, 0b11], [0b01, 0b00, 0b11, 0b10], [0b10, 0b11, 0b00, 0b01], [0b11, 0b10, 0b01, 0b00]];

/// Logical feed-forward: the reported element is r₁r₄ ⊕ s₂s₃.
pub fn grover_relabel(raw: u8, s2: Outcome, s3: Outcome) -> u8 {
    raw ^ (((s2.bit()) << 1) | s3.bit())
}

/// How active feed-forward is realized for Grover search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum GroverCorrection {
    /// Reinterpret the readout bits.
    Relabel,
    /// Apply the Pauli byproduct to qubits 1 and 4 before readout.
    Explicit,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroverBranch {
    /// Oracle outcomes [s₂, s₃].
    pub outcomes: Vec<Outcome>,
    pub probability: f64,
    pub count: u64,
    /// Distribution of the raw readout r₁r₄ in this branch.
    pub raw_distribution: [f64; 4],
    /// Distribution of the reported element.
    pub reported_distribution: [f64; 4],
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroverResult {
    pub tag: u8,
    pub policy: FeedForwardPolicy,
    pub correction: GroverCorrection,
    pub shots: u64,
    pub seed: u64,
    pub branches: Vec<GroverBranch>,
    /// Exact distribution of the reported element.
    pub probabilities: [f64; 4],
    /// Sampled counts of the reported element.
    pub counts: [u64; 4],
    pub frequencies: [f64; 4],
}

/// Distribution of the B(π)⊗B(π) readout of a two-qubit register.
fn readout_distribution(reg: &Register) -> Result<[f64; 4]> {
    let b = MeasurementBasis::equatorial(PI);
    let mut d = [0.0; 4];
    let first = reg.probabilities(0, &b)?;
    for r1 in OUTCOMES {
        let p1 = if r1 == Outcome::Zero { first.0 } else { first.1 };
        if p1 <= BRANCH_FLOOR {
            continue;
        }
        let rest = reg.collapse(0, &b, r1)?;
        let second = rest.probabilities(0, &b)?;
        d[bit2(r1.bit(), 0)] = p1 * second.0;
        d[bit2(r1.bit(), 1)] = p1 * second.1;
    }
    Ok(d)
}

/// Grover branches on the box cluster for given oracle angles; returns
/// (oracle leaves, readout register per leaf).
fn grover_leaves(source: ClusterSource<'_>, alpha: f64, beta: f64) -> Result<Vec<Leaf>> {
    let reg = Register::from_source(source, ClusterForm::Box)?;
    expand_two_level(&reg, (1, MeasurementBasis::equatorial(alpha)), |_| (1, MeasurementBasis::equatorial(beta)))
}

/// Grover search through the full option set.
pub fn run_grover_with(
    tag: u8,
    policy: FeedForwardPolicy,
    correction: GroverCorrection,
    opts: &RunOptions<'_>,
) -> Result<GroverResult> {
    check_shots(opts.shots)?;
    let tag = check_tag(tag)?;
    let (alpha, beta) = grover_oracle_angles(tag);
    let leaves = grover_leaves(opts.cluster, alpha, beta)?;
    let pattern = Pattern::Grover { tag };

    let mut branches = Vec::with_capacity(4);
    for leaf in &leaves {
        let (s2, s3) = (leaf.outcomes[0], leaf.outcomes[1]);
        let (raw, reported) = match &leaf.state {
            None => ([0.0; 4], [0.0; 4]),
            Some(reg) => {
                let raw = readout_distribution(reg)?;
                let reported = match (policy, correction) {
                    (FeedForwardPolicy::Off, _) => raw,
                    (FeedForwardPolicy::Active, GroverCorrection::Relabel) => {
                        let mut d = [0.0; 4];
                        for (r, p) in raw.iter().enumerate() {
                            d[grover_relabel(r as u8, s2, s3) as usize] += p;
                        }
                        d
                    }
                    (FeedForwardPolicy::Active, GroverCorrection::Explicit) => {
                        readout_distribution(&reg.correct(&byproduct_frame(&pattern, &leaf.outcomes))?)?
                    }
                };
                (raw, reported)
            }
        };
        branches.push(GroverBranch {
            outcomes: leaf.outcomes.to_vec(),
            probability: leaf.first * leaf.second,
            count: 0,
            raw_distribution: raw,
            reported_distribution: reported,
        });
    }

    let mut probabilities = [0.0; 4];
    for b in &branches {
        for (k, p) in b.reported_distribution.iter().enumerate() {
            probabilities[k] += b.probability * p;
        }
    }

    let mut counts = [0u64; 4];
    for shot in 0..opts.shots {
        let mut r = rng::substream(opts.seed, shot);
        let i = sample_two_level(&leaves, &mut r);
        branches[i].count += 1;
        let d = &branches[i].reported_distribution;
        let u: f64 = r.random();
        let mut acc = 0.0;
        let mut pick = 3;
        for (k, p) in d.iter().enumerate() {
            acc += p;
            if u < acc {
                pick = k;
                break;
            }
        }
        counts[pick] += 1;
    }
    let frequencies = counts.map(|c| c as f64 / opts.shots as f64);

    Ok(GroverResult {
        tag,
        policy,
        correction,
        shots: opts.shots,
        seed: opts.seed,
        branches,
        probabilities,
        counts,
        frequencies,
    })
}

pub fn run_grover(tag: u8, policy: FeedForwardPolicy, shots: u64, seed: u64) -> Result<GroverResult> {
    run_grover_with(tag, policy, GroverCorrection::Relabel, &RunOptions::ideal(shots, seed))
}

/// Raw readout table of the ideal box cluster recomputed by enumerating all
/// oracle angles in {0, π}², oracle branches and readout results. Entry
/// `[tag][branch]` is `None` if the readout is not deterministic.
pub fn derive_grover_table() -> Result<[[Option<u8>; 4]; 4]> {
    let mut table = [[None; 4]; 4];
    for (tag, row) in table.iter_mut().enumerate() {
        let (alpha, beta) = grover_oracle_angles(tag as u8);
        for (i, leaf) in grover_leaves(ClusterSource::Ideal, alpha, beta)?.iter().enumerate() {
            if let Some(reg) = &leaf.state {
                let d = readout_distribution(reg)?;
                row[i] = d.iter().position(|p| (p - 1.0).abs() < 1e-12).map(|r| r as u8);
            }
        }
    }
    Ok(table)
}

/// The graph whose state a pattern runs on.
pub fn pattern_graph(pattern: &Pattern) -> GraphSpec {
    match pattern {
        Pattern::Rotation { .. } | Pattern::TwoQubit { .. } => GraphSpec::linear4(),
        Pattern::Grover { .. } => GraphSpec::box4(),
    }
}
