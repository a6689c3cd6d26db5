//! Projective count simulation over the Z/X/Y eigenbases and
//! maximum-likelihood state reconstruction.
//!
//! The estimate is parameterized as ρ = T†T / tr(T†T) with T lower
//! triangular, so every iterate is physical. The likelihood treats each
//! count as Poisson with a free intensity per setting; profiling the
//! intensities out leaves L(ρ) = Σ_k n_k ln p_k, which is what the ascent
//! maximizes. Zero counts contribute nothing and need no pseudo-counts.
//!
//! The gradient of L with respect to T is (2N / tr T†T) · T(R − I) with
//! R = Σ_k (n_k / N p_k) Π_k. The ascent runs L-BFGS on the real and
//! imaginary parts of the lower-triangular entries of T, with a backtracking
//! line search that only accepts increases of L. Plain gradient steps stall
//! near rank-deficient optima, which is where pure-state data lands.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{ql_lower_factor, Matrix};
use crate::rng;
use crate::state::check_size;
use crate::C64;

/// Single-qubit measurement basis of a tomography setting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliBasis {
    /// |0⟩, |1⟩.
    Z,
    /// |+⟩, |−⟩.
    X,
    /// |R⟩ = (|0⟩ + i|1⟩)/√2, |L⟩ = (|0⟩ − i|1⟩)/√2.
    Y,
}

impl PauliBasis {
    pub const ALL: [PauliBasis; 3] = [PauliBasis::Z, PauliBasis::X, PauliBasis::Y];

    pub fn symbol(self) -> char {
        match self {
            PauliBasis::Z => 'Z',
            PauliBasis::X => 'X',
            PauliBasis::Y => 'Y',
        }
    }

    pub fn from_symbol(c: char) -> Result<Self> {
        match c {
            'Z' => Ok(PauliBasis::Z),
            'X' => Ok(PauliBasis::X),
            'Y' => Ok(PauliBasis::Y),
            other => Err(Error::InvalidLabel(format!("unknown tomography basis {other:?}"))),
        }
    }

    /// Basis vector for outcome bit `b`.
    pub fn vector(self, b: usize) -> [C64; 2] {
        let h = FRAC_1_SQRT_2;
        let sign = if b == 0 { 1.0 } else { -1.0 };
        match self {
            PauliBasis::Z => {
                if b == 0 {
                    [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
                } else {
                    [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
                }
            }
            PauliBasis::X => [C64::new(h, 0.0), C64::new(sign * h, 0.0)],
            PauliBasis::Y => [C64::new(h, 0.0), C64::new(0.0, sign * h)],
        }
    }
}

/// One basis per qubit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Setting {
    bases: Vec<PauliBasis>,
}

impl Setting {
    pub fn new(bases: Vec<PauliBasis>) -> Result<Self> {
        check_size(bases.len())?;
        Ok(Setting { bases })
    }

    /// Parses labels like `"ZXYX"`; the first letter is qubit 1.
    pub fn from_label(label: &str) -> Result<Self> {
        Self::new(label.chars().map(PauliBasis::from_symbol).collect::<Result<_>>()?)
    }

    pub fn label(&self) -> String {
        self.bases.iter().map(|b| b.symbol()).collect()
    }

    pub fn bases(&self) -> &[PauliBasis] {
        &self.bases
    }

    pub fn n_qubits(&self) -> usize {
        self.bases.len()
    }

    pub fn n_outcomes(&self) -> usize {
        1 << self.bases.len()
    }

    /// Unitary whose row `k` is ⟨π_k|, the conjugated product projector
    /// vector for outcome pattern `k` (qubit 1 = most significant bit).
    pub fn rotation(&self) -> Matrix {
        let mut u = Matrix::identity(1);
        for b in &self.bases {
            let v0 = b.vector(0);
            let v1 = b.vector(1);
            let m = Matrix::from_row_major(2, vec![v0[0].conj(), v0[1].conj(), v1[0].conj(), v1[1].conj()]);
            u = u.kron(&m);
        }
        u
    }

    /// Outcome probabilities tr(ρ Π_k).
    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        if rho.n_qubits() != self.n_qubits() {
            return Err(Error::DimensionMismatch { expected: self.n_outcomes(), found: rho.dim() });
        }
        Ok(diag_probabilities(&self.rotation(), rho.matrix()))
    }
}

fn diag_probabilities(u: &Matrix, rho: &Matrix) -> Vec<f64> {
    let w = u.matmul(rho);
    let d = u.dim();
    (0..d)
        .map(|i| {
            let row_w = w.row(i);
            let row_u = u.row(i);
            row_w.iter().zip(row_u).map(|(a, b)| (a * b.conj()).re).sum::<f64>().max(0.0)
        })
        .collect()
}

/// All 3ⁿ settings, in lexicographic order over Z < X < Y with qubit 1 slowest.
pub fn enumerate_settings(n_qubits: usize) -> Result<Vec<Setting>> {
    check_size(n_qubits)?;
    let total = 3usize.pow(n_qubits as u32);
    Ok((0..total)
        .map(|mut idx| {
            let mut bases = vec![PauliBasis::Z; n_qubits];
            for q in (0..n_qubits).rev() {
                bases[q] = PauliBasis::ALL[idx % 3];
                idx /= 3;
            }
            Setting { bases }
        })
        .collect())
}

/// Counts of one setting, one entry per outcome pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountRecord {
    pub setting: Setting,
    pub counts: Vec<u64>,
}

impl CountRecord {
    pub fn new(setting: Setting, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != setting.n_outcomes() {
            return Err(Error::DimensionMismatch { expected: setting.n_outcomes(), found: counts.len() });
        }
        Ok(CountRecord { setting, counts })
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

#[cfg(feature = "serde")]
mod serde_impl {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        bases: String,
        counts: Vec<u64>,
    }

    impl Serialize for CountRecord {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            Repr { bases: self.setting.label(), counts: self.counts.clone() }.serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for CountRecord {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            let r = Repr::deserialize(d)?;
            let setting = Setting::from_label(&r.bases).map_err(serde::de::Error::custom)?;
            CountRecord::new(setting, r.counts).map_err(serde::de::Error::custom)
        }
    }
}

fn poisson_sample<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let d = Poisson::new(mean).expect("positive finite mean");
    d.sample(rng) as u64
}

/// Poisson counts with mean `mean_total · tr(ρ Π_k)` for every projector of
/// every setting.
pub fn simulate_counts<R: Rng + ?Sized>(rho: &DensityMatrix, mean_total: f64, rng: &mut R) -> Result<Vec<CountRecord>> {
    if !(mean_total > 0.0 && mean_total.is_finite()) {
        return Err(Error::OutOfRange { name: "mean_total", value: mean_total, range: "(0, inf)" });
    }
    enumerate_settings(rho.n_qubits())?
        .into_iter()
        .map(|s| {
            let p = s.probabilities(rho)?;
            let counts = p.iter().map(|pk| poisson_sample(mean_total * pk, rng)).collect();
            Ok(CountRecord { setting: s, counts })
        })
        .collect()
}

/// Noise-free counts: `round(mean_total · tr(ρ Π_k))`.
pub fn expected_counts(rho: &DensityMatrix, mean_total: f64) -> Result<Vec<CountRecord>> {
    enumerate_settings(rho.n_qubits())?
        .into_iter()
        .map(|s| {
            let p = s.probabilities(rho)?;
            let counts = p.iter().map(|pk| libm::round(mean_total * pk) as u64).collect();
            Ok(CountRecord { setting: s, counts })
        })
        .collect()
}

/// Starting point of the likelihood ascent.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialState {
    MaximallyMixed,
    /// A full-rank user-supplied estimate.
    Given(DensityMatrix),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MLEConfig {
    pub max_iterations: usize,
    /// Stop once |ΔL| / |L| falls below this.
    pub tolerance: f64,
    pub initial: InitialState,
}

impl Default for MLEConfig {
    fn default() -> Self {
        MLEConfig { max_iterations: 10_000, tolerance: 1e-10, initial: InitialState::MaximallyMixed }
    }
}

/// Reconstruction together with optimizer diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct MleOutcome {
    pub rho: DensityMatrix,
    pub iterations: usize,
    pub log_likelihood: f64,
    /// Log-likelihood after every accepted step, starting with the initial state.
    pub history: Vec<f64>,
    /// ‖(R − I)ρ‖_F at the returned state; zero at an interior optimum.
    pub gradient_norm: f64,
}

/// Records grouped per setting with their rotation matrices.
/// Pauli string as masks over basis-index bits: P|j⟩ = phase · (−1)^{|j ∧ z|} |j ⊕ x⟩.
#[derive(Clone, Copy)]
struct PauliMasks {
    x: usize,
    z: usize,
    phase: C64,
}

/// Base-4 Pauli index with digits I=0, X=1, Y=2, Z=3 and qubit 1 most significant.
fn pauli_masks(n: usize, mut idx: usize) -> PauliMasks {
    let (mut x, mut z, mut n_y) = (0, 0, 0);
    for q in (0..n).rev() {
        let bit = 1usize << (n - 1 - q);
        match idx % 4 {
            1 => x |= bit,
            2 => {
                x |= bit;
                z |= bit;
                n_y += 1;
            }
            3 => z |= bit,
            _ => {}
        }
        idx /= 4;
    }
    // Y = i · XZ on each factor.
    let phase = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][n_y % 4];
    PauliMasks { x, z, phase }
}

fn parity_sign(v: usize) -> f64 {
    if v.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// In-place Walsh-Hadamard transform, H_{kS} = (−1)^{|k ∧ S|}.
fn walsh_hadamard(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Merged counts plus the Pauli bookkeeping that turns expectation values
/// into outcome probabilities. Every setting is a product of Pauli
/// eigenbases, so Π_k = 2⁻ⁿ Σ_S (−1)^{|k ∧ S|} P_S over the subsets S of
/// qubits, with P_S the setting's Pauli on S and identity elsewhere.
struct Problem {
    n_qubits: usize,
    paulis: Vec<PauliMasks>,
    /// Per setting, the Pauli index of P_S for each subset mask S.
    subsets: Vec<Vec<usize>>,
    counts: Vec<Vec<f64>>,
    total: f64,
}

impl Problem {
    fn new(records: &[CountRecord]) -> Result<Self> {
        let first = records.first().ok_or_else(|| Error::IncompleteRecords("no records".into()))?;
        let n = first.setting.n_qubits();
        let mut merged: alloc::collections::BTreeMap<Setting, Vec<f64>> = alloc::collections::BTreeMap::new();
        for r in records {
            if r.setting.n_qubits() != n {
                return Err(Error::DimensionMismatch { expected: 1 << n, found: r.setting.n_outcomes() });
            }
            if r.counts.len() != r.setting.n_outcomes() {
                return Err(Error::DimensionMismatch { expected: r.setting.n_outcomes(), found: r.counts.len() });
            }
            let e = merged.entry(r.setting.clone()).or_insert_with(|| vec![0.0; 1 << n]);
            for (acc, c) in e.iter_mut().zip(&r.counts) {
                *acc += *c as f64;
            }
        }
        check_complete(n, merged.keys())?;
        let total: f64 = merged.values().flatten().sum();
        if total <= 0.0 {
            return Err(Error::IncompleteRecords("all counts are zero".into()));
        }
        let subsets = merged
            .keys()
            .map(|setting| {
                (0..1usize << n)
                    .map(|mask| {
                        setting.bases().iter().enumerate().fold(0, |idx, (q, b)| {
                            let digit = if mask & (1 << (n - 1 - q)) == 0 {
                                0
                            } else {
                                match b {
                                    PauliBasis::X => 1,
                                    PauliBasis::Y => 2,
                                    PauliBasis::Z => 3,
                                }
                            };
                            idx * 4 + digit
                        })
                    })
                    .collect()
            })
            .collect();
        let paulis = (0..4usize.pow(n as u32)).map(|i| pauli_masks(n, i)).collect();
        Ok(Problem { n_qubits: n, paulis, subsets, counts: merged.into_values().collect(), total })
    }

    /// tr(Pρ) for every Pauli string.
    fn expectations(&self, rho: &Matrix) -> Vec<f64> {
        let d = 1usize << self.n_qubits;
        self.paulis
            .iter()
            .map(|p| {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..d {
                    acc += rho[(j, j ^ p.x)] * parity_sign(j & p.z);
                }
                (p.phase * acc).re
            })
            .collect()
    }

    fn probabilities(&self, rho: &Matrix) -> Vec<Vec<f64>> {
        let e = self.expectations(rho);
        let norm = 1.0 / (1usize << self.n_qubits) as f64;
        self.subsets
            .iter()
            .map(|sub| {
                let mut p: Vec<f64> = sub.iter().map(|&i| e[i]).collect();
                walsh_hadamard(&mut p);
                p.iter_mut().for_each(|x| *x = (*x * norm).max(0.0));
                p
            })
            .collect()
    }

    fn log_likelihood(&self, probs: &[Vec<f64>]) -> f64 {
        let mut l = 0.0;
        for (ps, ns) in probs.iter().zip(&self.counts) {
            for (p, n) in ps.iter().zip(ns) {
                if *n > 0.0 {
                    l += n * libm::log(p.max(1e-300));
                }
            }
        }
        l
    }

    /// R = Σ_k (n_k / N p_k) Π_k, accumulated through its Pauli coefficients.
    fn r_operator(&self, probs: &[Vec<f64>]) -> Matrix {
        let d = 1usize << self.n_qubits;
        let norm = 1.0 / d as f64;
        let mut coeff = vec![0.0; self.paulis.len()];
        for ((sub, ps), ns) in self.subsets.iter().zip(probs).zip(&self.counts) {
            let mut w: Vec<f64> =
                ps.iter().zip(ns).map(|(p, n)| if *n > 0.0 { n / (self.total * p.max(1e-300)) } else { 0.0 }).collect();
            walsh_hadamard(&mut w);
            for (&i, wi) in sub.iter().zip(&w) {
                coeff[i] += wi * norm;
            }
        }
        let mut r = Matrix::zeros(d);
        for (p, c) in self.paulis.iter().zip(&coeff) {
            if *c == 0.0 {
                continue;
            }
            let pc = p.phase * *c;
            for j in 0..d {
                r[(j ^ p.x, j)] += pc * parity_sign(j & p.z);
            }
        }
        r.hermitian_part()
    }
}

/// Every Pauli string needs a setting that measures all of its
/// non-identity factors.
fn check_complete<'a>(n: usize, settings: impl Iterator<Item = &'a Setting> + Clone) -> Result<()> {
    let total = 4usize.pow(n as u32);
    for idx in 1..total {
        let mut want = vec![None; n];
        let mut i = idx;
        for q in (0..n).rev() {
            want[q] = match i % 4 {
                0 => None,
                1 => Some(PauliBasis::X),
                2 => Some(PauliBasis::Y),
                _ => Some(PauliBasis::Z),
            };
            i /= 4;
        }
        let covered = settings.clone().any(|s| s.bases().iter().zip(&want).all(|(b, w)| w.is_none_or(|w| w == *b)));
        if !covered {
            let label: String = want.iter().map(|w| w.map_or('I', |b| b.symbol())).collect();
            return Err(Error::IncompleteRecords(format!("no setting measures {label}")));
        }
    }
    Ok(())
}

fn gram_normalized(t: &Matrix) -> Matrix {
    let g = t.adjoint().matmul(t).hermitian_part();
    let tr = g.trace().re;
    g.scale_real(1.0 / tr)
}

/// Real coordinates of the lower triangle of T: (re, im) per entry, row-major.
fn lower_params(t: &Matrix) -> Vec<f64> {
    let d = t.dim();
    let mut x = Vec::with_capacity(d * (d + 1));
    for i in 0..d {
        for j in 0..=i {
            x.push(t[(i, j)].re);
            x.push(t[(i, j)].im);
        }
    }
    x
}

fn lower_from_params(x: &[f64], d: usize) -> Matrix {
    let mut t = Matrix::zeros(d);
    let mut k = 0;
    for i in 0..d {
        for j in 0..=i {
            t[(i, j)] = C64::new(x[k], x[k + 1]);
            k += 2;
        }
    }
    t
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// State of the ascent at one point of parameter space.
struct Point {
    x: Vec<f64>,
    rho: Matrix,
    probs: Vec<Vec<f64>>,
    ll: f64,
}

impl Point {
    fn at(problem: &Problem, x: Vec<f64>) -> Point {
        let d = 1usize << problem.n_qubits;
        let rho = gram_normalized(&lower_from_params(&x, d));
        let probs = problem.probabilities(&rho);
        let ll = problem.log_likelihood(&probs);
        Point { x, rho, probs, ll }
    }

    /// ∂(L/N)/∂x.
    fn gradient(&self, problem: &Problem) -> Vec<f64> {
        let d = 1usize << problem.n_qubits;
        let t = lower_from_params(&self.x, d);
        let scale = 2.0 / dot(&self.x, &self.x);
        let delta = problem.r_operator(&self.probs).sub(&Matrix::identity(d));
        let g = t.matmul(&delta);
        let mut out = lower_params(&g);
        out.iter_mut().for_each(|v| *v *= scale);
        out
    }
}

/// L-BFGS two-loop recursion: approximate inverse-Hessian times `g` for the
/// minimization of −L, given pairs (s, y) with y the change of ∇(−L).
fn lbfgs_direction(g: &[f64], memory: &[(Vec<f64>, Vec<f64>)]) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y) in memory.iter().rev() {
        let a = dot(s, &q) / dot(y, s);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
        alphas.push(a);
    }
    if let Some((s, y)) = memory.last() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for ((s, y), a) in memory.iter().zip(alphas.into_iter().rev()) {
        let b = dot(y, &q) / dot(y, s);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
    }
    q
}

const LBFGS_MEMORY: usize = 12;
const ARMIJO: f64 = 1e-4;

/// Maximum-likelihood reconstruction with diagnostics.
pub fn mle_reconstruct_detailed(records: &[CountRecord], config: &MLEConfig) -> Result<MleOutcome> {
    if !(config.tolerance > 0.0) {
        return Err(Error::OutOfRange { name: "tolerance", value: config.tolerance, range: "(0, inf)" });
    }
    let problem = Problem::new(records)?;
    let d = 1usize << problem.n_qubits;

    let start = match &config.initial {
        InitialState::MaximallyMixed => DensityMatrix::maximally_mixed(problem.n_qubits)?,
        InitialState::Given(rho) => {
            if rho.n_qubits() != problem.n_qubits {
                return Err(Error::DimensionMismatch { expected: d, found: rho.dim() });
            }
            rho.clone()
        }
    };
    // T†T = ρ for T = √ρ, then triangularize.
    let t0 = ql_lower_factor(&start.matrix().map_hermitian(|x| libm::sqrt(x.max(0.0))));
    let mut point = Point::at(&problem, lower_params(&t0));
    let mut grad = point.gradient(&problem);
    let mut history = vec![point.ll];
    let mut memory: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    let mut iterations = 0;
    let mut small_steps = 0;
    let mut converged = false;

    while iterations < config.max_iterations {
        iterations += 1;
        let mut accepted = None;
        // Quasi-Newton direction first, then the plain gradient.
        let mut quasi_newton = !memory.is_empty();
        loop {
            let (dir, mut step) = if quasi_newton {
                (lbfgs_direction(&grad, &memory), 1.0)
            } else {
                // Step tr(T†T)/2 along the gradient is T ← T(I + (R − I)).
                (grad.clone(), 0.5 * dot(&point.x, &point.x))
            };
            let slope = dot(&grad, &dir);
            if slope > 0.0 {
                while step > 1e-20 {
                    let x_new: Vec<f64> = point.x.iter().zip(&dir).map(|(x, p)| x + step * p).collect();
                    let trial = Point::at(&problem, x_new);
                    if trial.ll >= point.ll + ARMIJO * step * slope * problem.total {
                        accepted = Some(trial);
                        break;
                    }
                    step *= 0.5;
                }
            }
            if accepted.is_some() || !quasi_newton {
                break;
            }
            memory.clear();
            quasi_newton = false;
        }
        let Some(mut next) = accepted else {
            // No ascent direction improves L at working precision.
            converged = true;
            break;
        };

        // L is invariant under rescaling T; keep tr(T†T) = 1 and restart the
        // curvature memory whenever the scale has drifted.
        let norm2 = dot(&next.x, &next.x);
        let rescale = !(0.25..4.0).contains(&norm2);
        if rescale {
            let k = 1.0 / libm::sqrt(norm2);
            next.x.iter_mut().for_each(|v| *v *= k);
        }
        let next_grad = next.gradient(&problem);
        if rescale {
            memory.clear();
        } else {
            let s: Vec<f64> = next.x.iter().zip(&point.x).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = grad.iter().zip(&next_grad).map(|(a, b)| a - b).collect();
            let sy = dot(&s, &y);
            if sy > 1e-12 * libm::sqrt(dot(&s, &s) * dot(&y, &y)) {
                if memory.len() == LBFGS_MEMORY {
                    memory.remove(0);
                }
                memory.push((s, y));
            }
        }

        let improvement = (next.ll - point.ll).abs() / point.ll.abs().max(1e-300);
        history.push(next.ll);
        point = next;
        grad = next_grad;
        // Two consecutive small improvements, so that one short line-search
        // step does not end the ascent early.
        small_steps = if improvement < config.tolerance { small_steps + 1 } else { 0 };
        if small_steps >= 2 {
            converged = true;
            break;
        }
    }

    let identity = Matrix::identity(d);
    let gradient_norm = problem.r_operator(&point.probs).sub(&identity).matmul(&point.rho).frobenius_norm();
    if !converged {
        return Err(Error::NotConverged { iterations, gradient_norm });
    }
    let rho = DensityMatrix::from_matrix_unchecked(problem.n_qubits, point.rho);
    rho.validate(crate::density::Tolerances::INTERNAL)?;
    Ok(MleOutcome { rho, iterations, log_likelihood: point.ll, history, gradient_norm })
}

/// Maximum-likelihood density matrix for `records`.
pub fn mle_reconstruct(records: &[CountRecord], config: &MLEConfig) -> Result<DensityMatrix> {
    mle_reconstruct_detailed(records, config).map(|o| o.rho)
}

/// [`mle_reconstruct`] for one qubit (three settings, six projectors).
pub fn single_qubit_tomography(records: &[CountRecord]) -> Result<DensityMatrix> {
    if let Some(r) = records.iter().find(|r| r.setting.n_qubits() != 1) {
        return Err(Error::DimensionMismatch { expected: 2, found: r.setting.n_outcomes() });
    }
    mle_reconstruct(records, &MLEConfig::default())
}

/// Bloch vector (⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩) of a single-qubit state.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<[f64; 3]> {
    if rho.n_qubits() != 1 {
        return Err(Error::DimensionMismatch { expected: 2, found: rho.dim() });
    }
    let m = rho.matrix();
    Ok([2.0 * m[(0, 1)].re, -2.0 * m[(0, 1)].im, (m[(0, 0)] - m[(1, 1)]).re])
}

/// Sample mean and standard deviation of a Monte Carlo resampling study.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonteCarloSummary {
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator).
    pub std: f64,
    pub n_runs: usize,
}

/// Resamples every count as Poisson(count), reconstructs, and summarizes
/// `quantity` over `n_runs` rounds. Round `k` draws from substream `k` of `seed`.
pub fn monte_carlo_errors(
    records: &[CountRecord],
    n_runs: usize,
    config: &MLEConfig,
    seed: u64,
    quantity: impl Fn(&DensityMatrix) -> f64,
) -> Result<MonteCarloSummary> {
    let mut out = monte_carlo_errors_multi(records, n_runs, config, seed, |rho| vec![quantity(rho)])?;
    Ok(out.remove(0))
}

/// [`monte_carlo_errors`] for several quantities evaluated on the same
/// resampled reconstructions; `quantities` must return a fixed-length vector.
pub fn monte_carlo_errors_multi(
    records: &[CountRecord],
    n_runs: usize,
    config: &MLEConfig,
    seed: u64,
    quantities: impl Fn(&DensityMatrix) -> Vec<f64>,
) -> Result<Vec<MonteCarloSummary>> {
    if n_runs < 2 {
        return Err(Error::OutOfRange { name: "n_runs", value: n_runs as f64, range: "[2, inf)" });
    }
    let mut values: Vec<Vec<f64>> = Vec::with_capacity(n_runs);
    for k in 0..n_runs {
        let mut r = rng::substream(seed, k as u64);
        let resampled: Vec<CountRecord> = records
            .iter()
            .map(|rec| CountRecord {
                setting: rec.setting.clone(),
                counts: rec.counts.iter().map(|c| poisson_sample(*c as f64, &mut r)).collect(),
            })
            .collect();
        let v = quantities(&mle_reconstruct(&resampled, config)?);
        if let Some(first) = values.first() {
            if first.len() != v.len() {
                return Err(Error::DimensionMismatch { expected: first.len(), found: v.len() });
            }
        }
        values.push(v);
    }
    let m = values[0].len();
    Ok((0..m)
        .map(|j| {
            let mean = values.iter().map(|v| v[j]).sum::<f64>() / n_runs as f64;
            let var = values.iter().map(|v| (v[j] - mean) * (v[j] - mean)).sum::<f64>() / (n_runs - 1) as f64;
            MonteCarloSummary { mean, std: libm::sqrt(var), n_runs }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::StateVector;

    #[test]
    fn setting_counts() {
        for (n, s) in [(1, 3), (2, 9), (4, 81)] {
            let settings = enumerate_settings(n).unwrap();
            assert_eq!(settings.len(), s);
            assert_eq!(settings.iter().map(|s| s.n_outcomes()).sum::<usize>(), s * (1 << n));
        }
        assert_eq!(enumerate_settings(2).unwrap()[1].label(), "ZX");
    }

    #[test]
    fn rotations_are_unitary() {
        for s in enumerate_settings(2).unwrap() {
            assert!(crate::gates::unitarity_error(&s.rotation()) < 1e-12);
        }
    }

    fn random_mixed(n: usize, seed: u64) -> DensityMatrix {
        use rand::Rng;
        let mut r = rng::seeded(seed);
        let mut terms = Vec::new();
        for _ in 0..3 {
            let amps = (0..1 << n).map(|_| C64::new(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5)).collect();
            terms.push(StateVector::normalized(amps).unwrap().to_density());
        }
        DensityMatrix::weighted_sum(&[(0.5, &terms[0]), (0.3, &terms[1]), (0.2, &terms[2])]).unwrap()
    }

    #[test]
    fn pauli_route_matches_rotations() {
        for n in [1, 2, 3] {
            let rho = random_mixed(n, n as u64);
            let recs = expected_counts(&rho, 1000.0).unwrap();
            let problem = Problem::new(&recs).unwrap();
            let fast = problem.probabilities(rho.matrix());
            for (setting, p) in enumerate_settings(n).unwrap().iter().zip(&fast) {
                let direct = setting.probabilities(&rho).unwrap();
                for (a, b) in p.iter().zip(&direct) {
                    assert!((a - b).abs() < 1e-12, "{} {a} {b}", setting.label());
                }
            }
            // R built from Pauli coefficients equals Σ w_k |π_k⟩⟨π_k| built from rotations.
            let r_fast = problem.r_operator(&fast);
            let mut r_direct = Matrix::zeros(1 << n);
            for ((setting, ps), ns) in enumerate_settings(n).unwrap().iter().zip(&fast).zip(&problem.counts) {
                let u = setting.rotation();
                for k in 0..1 << n {
                    let w = if ns[k] > 0.0 { ns[k] / (problem.total * ps[k]) } else { 0.0 };
                    for i in 0..1 << n {
                        for j in 0..1 << n {
                            r_direct[(i, j)] += u[(k, i)].conj() * u[(k, j)] * w;
                        }
                    }
                }
            }
            assert!(r_fast.max_abs_diff(&r_direct) < 1e-12);
        }
    }

    #[test]
    fn cluster_zero_projector_is_quarter() {
        let rho = crate::cluster::build_cluster_eq1().to_density();
        let s = Setting::from_label("ZZZZ").unwrap();
        assert!((s.probabilities(&rho).unwrap()[0] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn incomplete_records_rejected() {
        let rho = DensityMatrix::maximally_mixed(1).unwrap();
        let recs: Vec<_> =
            expected_counts(&rho, 100.0).unwrap().into_iter().filter(|r| r.setting.label() != "Y").collect();
        assert!(matches!(mle_reconstruct(&recs, &MLEConfig::default()), Err(Error::IncompleteRecords(_))));
    }

    #[test]
    fn plus_state_bloch_vector() {
        let rho = StateVector::plus().to_density();
        let est = single_qubit_tomography(&expected_counts(&rho, 1e6).unwrap()).unwrap();
        let b = bloch_vector(&est).unwrap();
        assert!((b[0] - 1.0).abs() < 1e-6 && b[1].abs() < 1e-6 && b[2].abs() < 1e-6, "{b:?}");
    }

    #[test]
    fn mixed_qubit_bloch_vector() {
        let rho = DensityMatrix::maximally_mixed(1).unwrap();
        let est = single_qubit_tomography(&expected_counts(&rho, 1e6).unwrap()).unwrap();
        let b = bloch_vector(&est).unwrap();
        assert!(libm::sqrt(b.iter().map(|x| x * x).sum()) < 1e-6);
    }
}
