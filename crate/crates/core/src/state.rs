//! Pure states as dense amplitude vectors.

use alloc::vec;
use alloc::vec::Vec;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::gates::Operator;
use crate::linalg::Matrix;
use crate::measure::{MeasurementBasis, Outcome};
use crate::{C64, MAX_QUBITS};

/// Tolerance used when a normalized input is required.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Amplitudes over `n_qubits` qubits. Qubit 0 is the leftmost tensor factor
/// and the most significant bit of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

pub(crate) fn check_size(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::UnsupportedSize(n_qubits));
    }
    Ok(())
}

/// Bit position of qubit `q` in a basis index of an `n`-qubit register.
#[inline]
pub(crate) fn bit_of(n: usize, q: usize) -> usize {
    n - 1 - q
}

/// Validates a target list and returns the bit masks of the targets, in order.
pub(crate) fn target_bits(n: usize, targets: &[usize]) -> Result<Vec<usize>> {
    if targets.is_empty() {
        return Err(Error::EmptyQubitSet);
    }
    let mut seen = 0usize;
    let mut bits = Vec::with_capacity(targets.len());
    for &t in targets {
        if t >= n {
            return Err(Error::QubitOutOfRange { index: t, n_qubits: n });
        }
        let mask = 1usize << bit_of(n, t);
        if seen & mask != 0 {
            return Err(Error::DuplicateTarget(t));
        }
        seen |= mask;
        bits.push(mask);
    }
    Ok(bits)
}

/// Applies a `2^k`-dimensional matrix to the listed target bits of `amps`.
/// The first target is the most significant within the operator.
pub(crate) fn apply_matrix_in_place(amps: &mut [C64], masks: &[usize], m: &Matrix) {
    let k = masks.len();
    let sub = 1usize << k;
    let all: usize = masks.iter().fold(0, |acc, b| acc | b);
    let offsets: Vec<usize> = (0..sub)
        .map(|local| {
            masks.iter().enumerate().fold(
                0,
                |acc, (j, mask)| {
                    if local & (1 << (k - 1 - j)) != 0 {
                        acc | mask
                    } else {
                        acc
                    }
                },
            )
        })
        .collect();
    let mut buf = vec![C64::new(0.0, 0.0); sub];
    for base in 0..amps.len() {
        if base & all != 0 {
            continue;
        }
        for (b, off) in buf.iter_mut().zip(&offsets) {
            *b = amps[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            amps[base | off] = m.row(r).iter().zip(&buf).map(|(a, x)| a * x).sum();
        }
    }
}

impl StateVector {
    /// Wraps raw amplitudes. The length must be `2^n` for some supported `n`.
    /// The vector is not renormalized.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::DimensionMismatch { expected: len.next_power_of_two(), found: len });
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_size(n_qubits)?;
        Ok(StateVector { n_qubits, amplitudes })
    }

    /// Like [`Self::from_amplitudes`] but rescales to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let mut s = Self::from_amplitudes(amplitudes)?;
        let norm = s.norm_sqr();
        if norm <= 0.0 {
            return Err(Error::NotNormalized(norm));
        }
        let inv = 1.0 / libm::sqrt(norm);
        for a in &mut s.amplitudes {
            *a *= inv;
        }
        Ok(s)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amplitudes })
    }

    pub fn zero() -> Self {
        Self::single(C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Self::single(C64::new(0.0, 0.0), C64::new(1.0, 0.0))
    }

    pub fn plus() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Self::single(C64::new(h, 0.0), C64::new(h, 0.0))
    }

    pub fn minus() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Self::single(C64::new(h, 0.0), C64::new(-h, 0.0))
    }

    /// `a|0⟩ + b|1⟩`, unnormalized.
    pub fn single(a: C64, b: C64) -> Self {
        StateVector { n_qubits: 1, amplitudes: vec![a, b] }
    }

    /// `|+⟩^{⊗n}`.
    pub fn plus_n(n_qubits: usize) -> Result<Self> {
        check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        let a = 1.0 / libm::sqrt(dim as f64);
        Ok(StateVector { n_qubits, amplitudes: vec![C64::new(a, 0.0); dim] })
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(n));
        }
        Ok(())
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// |⟨self|other⟩|², the pure-state fidelity.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Equality up to a global phase: |⟨a|b⟩| = 1 within `tol`.
    pub fn equals_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        match self.inner(other) {
            Ok(z) => (z.norm() - 1.0).abs() <= tol,
            Err(_) => false,
        }
    }

    /// `self ⊗ other`, with `self`'s qubits first.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        check_size(self.n_qubits + other.n_qubits)?;
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(StateVector { n_qubits: self.n_qubits + other.n_qubits, amplitudes })
    }

    /// Applies `u` to the ordered `targets`; `targets[0]` is the operator's
    /// leftmost factor.
    pub fn apply(&self, u: &Operator, targets: &[usize]) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_in_place(u, targets)?;
        Ok(out)
    }

    pub fn apply_in_place(&mut self, u: &Operator, targets: &[usize]) -> Result<()> {
        let masks = target_bits(self.n_qubits, targets)?;
        let expected = 1usize << targets.len();
        if u.dim() != expected {
            return Err(Error::DimensionMismatch { expected, found: u.dim() });
        }
        apply_matrix_in_place(&mut self.amplitudes, &masks, u.matrix());
        Ok(())
    }

    /// Outcome probabilities `(p0, p1)` of measuring `qubit` in `basis`.
    pub fn born_probabilities(&self, qubit: usize, basis: &MeasurementBasis) -> Result<(f64, f64)> {
        let p0 = self.project(qubit, basis, Outcome::Zero)?.1;
        let p1 = self.project(qubit, basis, Outcome::One)?.1;
        let total = p0 + p1;
        Ok((p0 / total, p1 / total))
    }

    /// Unnormalized projection of `qubit` onto the basis vector for `outcome`,
    /// with the measured qubit removed. Returns the amplitudes and their norm².
    pub(crate) fn project(&self, qubit: usize, basis: &MeasurementBasis, outcome: Outcome) -> Result<(Vec<C64>, f64)> {
        let n = self.n_qubits;
        if qubit >= n {
            return Err(Error::QubitOutOfRange { index: qubit, n_qubits: n });
        }
        let v = basis.vector(outcome);
        let (c0, c1) = (v[0].conj(), v[1].conj());
        let bit = bit_of(n, qubit);
        let low_mask = (1usize << bit) - 1;
        let half = self.dim() / 2;
        let mut out = Vec::with_capacity(half);
        for rest in 0..half {
            let hi = (rest & !low_mask) << 1;
            let lo = rest & low_mask;
            let i0 = hi | lo;
            let i1 = i0 | (1 << bit);
            out.push(c0 * self.amplitudes[i0] + c1 * self.amplitudes[i1]);
        }
        let p = out.iter().map(|a| a.norm_sqr()).sum();
        Ok((out, p))
    }

    /// Post-measurement state after observing `outcome` on `qubit`; the qubit
    /// is removed and later qubits shift down by one.
    pub fn collapse(&self, qubit: usize, basis: &MeasurementBasis, outcome: Outcome) -> Result<StateVector> {
        if self.n_qubits == 1 {
            return Err(Error::UnsupportedSize(0));
        }
        let (amps, p) = self.project(qubit, basis, outcome)?;
        let total = self.norm_sqr();
        if p <= 1e-14 * total {
            return Err(Error::ZeroProbability { outcome: outcome.bit(), probability: p / total });
        }
        let inv = 1.0 / libm::sqrt(p);
        Ok(StateVector { n_qubits: self.n_qubits - 1, amplitudes: amps.into_iter().map(|a| a * inv).collect() })
    }

    /// |ψ⟩⟨ψ|.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(self.n_qubits, Matrix::outer(&self.amplitudes, &self.amplitudes))
    }

    /// ⟨ψ|M|ψ⟩ for a full-register matrix.
    pub fn expectation(&self, m: &Matrix) -> Result<C64> {
        if m.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: m.dim() });
        }
        Ok(m.sandwich(&self.amplitudes, &self.amplitudes))
    }
}
