//! Cluster and graph states.
//!
//! The four-photon resource state is
//!
//! ```text
//! |Φ⟩ = ½ (|0000⟩ + |0011⟩ + |1100⟩ − |1111⟩)
//! ```
//!
//! Its local-unitary relatives used by the measurement patterns:
//!
//! * linear / horseshoe form: `(H ⊗ I ⊗ I ⊗ H)|Φ⟩` is the graph state on the
//!   chain 1–2–3–4. The two shapes are the same state and differ only in the
//!   order qubits are measured.
//! * box form: `H^{⊗4}|Φ⟩` is the graph state on the 4-cycle 1–3–2–4–1
//!   (edges {1,3}, {3,2}, {2,4}, {4,1}). This relation was found by
//!   exhaustive search over the 24⁴ products of single-qubit Clifford gates;
//!   the same search finds no local Clifford map onto the cycle labeled
//!   1–2–3–4–1, so the labeling matters.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::gates::Operator;
use crate::pauli::PauliString;
use crate::state::{bit_of, check_size, StateVector};
use crate::C64;

/// Undirected simple graph on qubits `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "GraphRepr", into = "GraphRepr"))]
pub struct GraphSpec {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

/// JSON form: `{"n": int, "edges": [[i, j], ...]}` with zero-based labels.
#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

#[cfg(feature = "serde")]
impl TryFrom<GraphRepr> for GraphSpec {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        GraphSpec::new(r.n, r.edges.iter().map(|e| (e[0], e[1])))
    }
}

#[cfg(feature = "serde")]
impl From<GraphSpec> for GraphRepr {
    fn from(g: GraphSpec) -> Self {
        GraphRepr { n: g.n, edges: g.edges.iter().map(|&(a, b)| [a, b]).collect() }
    }
}

impl GraphSpec {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        check_size(n)?;
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) references a qubit outside 0..{n}")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on qubit {a}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(GraphSpec { n, edges: set })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    /// Path 0–1–…–(n−1).
    pub fn chain(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|i| (i - 1, i)))
    }

    /// Cycle through the qubits in the given order.
    pub fn cycle(order: &[usize]) -> Result<Self> {
        let n = order.len();
        Self::new(n, (0..n).map(|i| (order[i], order[(i + 1) % n])))
    }

    /// Chain 1–2–3–4.
    pub fn linear4() -> Self {
        Self::chain(4).expect("4-qubit chain is valid")
    }

    /// 4-cycle 1–3–2–4–1 (zero-based 0–2–1–3–0).
    pub fn box4() -> Self {
        Self::cycle(&[0, 2, 1, 3]).expect("4-cycle is valid")
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, q: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == q {
                Some(b)
            } else if b == q {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Generator K_i = σ_x^{(i)} ∏_{j ∈ N(i)} σ_z^{(j)}.
    pub fn generator(&self, i: usize) -> PauliString {
        let mut p = PauliString::x_on(self.n, i);
        for j in self.neighbors(i) {
            p = p.mul(&PauliString::z_on(self.n, j));
        }
        p
    }

    pub fn generators(&self) -> Vec<PauliString> {
        (0..self.n).map(|i| self.generator(i)).collect()
    }

    /// All 2^n elements of the stabilizer group; element `m` is the ordered
    /// product of the generators whose bit is set in `m` (generator 0 is bit 0).
    pub fn stabilizer_group(&self) -> Vec<PauliString> {
        let gens = self.generators();
        (0..1usize << self.n)
            .map(|m| {
                gens.iter()
                    .enumerate()
                    .filter(|(i, _)| m & (1 << i) != 0)
                    .fold(PauliString::identity(self.n), |acc, (_, g)| acc.mul(g))
            })
            .collect()
    }
}

/// The four-qubit resource state ½(|0000⟩ + |0011⟩ + |1100⟩ − |1111⟩).
pub fn build_cluster_eq1() -> StateVector {
    let mut amps = alloc::vec![C64::new(0.0, 0.0); 16];
    amps[0b0000] = C64::new(0.5, 0.0);
    amps[0b0011] = C64::new(0.5, 0.0);
    amps[0b1100] = C64::new(0.5, 0.0);
    amps[0b1111] = C64::new(-0.5, 0.0);
    StateVector::from_amplitudes(amps).expect("16 amplitudes")
}

/// CPhase on every edge of |+⟩^{⊗n}.
pub fn build_graph_state(g: &GraphSpec) -> StateVector {
    let n = g.n_qubits();
    let dim = 1usize << n;
    let amp = 1.0 / libm::sqrt(dim as f64);
    let masks: Vec<usize> = g.edges().map(|(a, b)| (1 << bit_of(n, a)) | (1 << bit_of(n, b))).collect();
    let amps = (0..dim)
        .map(|idx| {
            let flips = masks.iter().filter(|m| idx & **m == **m).count();
            C64::new(if flips % 2 == 0 { amp } else { -amp }, 0.0)
        })
        .collect();
    StateVector::from_amplitudes(amps).expect("graph size already validated")
}

/// Shapes of the four-qubit cluster reachable from the resource state by
/// local Hadamards.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClusterForm {
    Linear,
    Horseshoe,
    Box,
}

/// Applies the local unitary taking the resource state to `form`:
/// H ⊗ I ⊗ I ⊗ H for linear and horseshoe, H^{⊗4} for the box.
pub fn local_equivalent(cluster: &StateVector, form: ClusterForm) -> Result<StateVector> {
    if cluster.n_qubits() != 4 {
        return Err(Error::DimensionMismatch { expected: 16, found: cluster.dim() });
    }
    let h = Operator::hadamard();
    let targets: &[usize] = match form {
        ClusterForm::Linear | ClusterForm::Horseshoe => &[0, 3],
        ClusterForm::Box => &[0, 1, 2, 3],
    };
    let mut out = cluster.clone();
    for &q in targets {
        out.apply_in_place(&h, &[q])?;
    }
    Ok(out)
}

/// Density-matrix version of [`local_equivalent`].
pub fn local_equivalent_density(rho: &DensityMatrix, form: ClusterForm) -> Result<DensityMatrix> {
    if rho.n_qubits() != 4 {
        return Err(Error::DimensionMismatch { expected: 16, found: rho.dim() });
    }
    let h = Operator::hadamard();
    let targets: &[usize] = match form {
        ClusterForm::Linear | ClusterForm::Horseshoe => &[0, 3],
        ClusterForm::Box => &[0, 1, 2, 3],
    };
    let mut out = rho.clone();
    for &q in targets {
        out = out.apply(&h, &[q])?;
    }
    Ok(out)
}

/// Anything a Pauli expectation value can be taken on.
pub trait PauliExpectation {
    fn n_qubits(&self) -> usize;
    fn pauli_expectation(&self, p: &PauliString) -> Result<C64>;
}

impl PauliExpectation for StateVector {
    fn n_qubits(&self) -> usize {
        StateVector::n_qubits(self)
    }

    fn pauli_expectation(&self, p: &PauliString) -> Result<C64> {
        p.expectation(self)
    }
}

impl PauliExpectation for DensityMatrix {
    fn n_qubits(&self) -> usize {
        DensityMatrix::n_qubits(self)
    }

    fn pauli_expectation(&self, p: &PauliString) -> Result<C64> {
        p.expectation_density(self)
    }
}

/// Which stabilizers to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilizerSet {
    Generators,
    /// All 2^n group elements, including the identity at index 0.
    FullGroup,
}

/// Real parts of ⟨S⟩ for the generators or the whole stabilizer group of `g`.
pub fn stabilizer_expectations<S: PauliExpectation + ?Sized>(
    state: &S,
    g: &GraphSpec,
    set: StabilizerSet,
) -> Result<Vec<f64>> {
    if state.n_qubits() != g.n_qubits() {
        return Err(Error::DimensionMismatch { expected: 1 << g.n_qubits(), found: 1 << state.n_qubits() });
    }
    let ops = match set {
        StabilizerSet::Generators => g.generators(),
        StabilizerSet::FullGroup => g.stabilizer_group(),
    };
    ops.iter().map(|p| state.pauli_expectation(p).map(|z| z.re)).collect()
}
