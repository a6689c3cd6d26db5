//! Pauli strings and the Pauli frame carried by feed-forward.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::gates::Operator;
use crate::linalg::Matrix;
use crate::state::{bit_of, check_size, StateVector};
use crate::C64;

const I_POWERS: [C64; 4] = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)];

/// `i^phase · ⊗_q X^{x_q} Z^{z_q}`.
///
/// `x` and `z` are masks over basis-index bits, so qubit 0 is the most
/// significant bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: usize,
    z: usize,
    phase: u8,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        PauliString { n_qubits, x: 0, z: 0, phase: 0 }
    }

    /// Parses labels such as `"XZIY"` (optionally prefixed with `-`).
    pub fn from_label(label: &str) -> Result<Self> {
        let (neg, body) = match label.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, label.strip_prefix('+').unwrap_or(label)),
        };
        let n = body.chars().count();
        check_size(n)?;
        let mut p = PauliString { n_qubits: n, x: 0, z: 0, phase: if neg { 2 } else { 0 } };
        for (q, ch) in body.chars().enumerate() {
            let mask = 1usize << bit_of(n, q);
            match ch {
                'I' => {}
                'X' => p.x |= mask,
                'Z' => p.z |= mask,
                'Y' => {
                    p.x |= mask;
                    p.z |= mask;
                    p.phase = (p.phase + 1) % 4;
                }
                other => return Err(Error::InvalidLabel(alloc::format!("unexpected character {other:?}"))),
            }
        }
        Ok(p)
    }

    /// σ_x on `qubit`.
    pub fn x_on(n_qubits: usize, qubit: usize) -> Self {
        PauliString { n_qubits, x: 1 << bit_of(n_qubits, qubit), z: 0, phase: 0 }
    }

    /// σ_z on `qubit`.
    pub fn z_on(n_qubits: usize, qubit: usize) -> Self {
        PauliString { n_qubits, x: 0, z: 1 << bit_of(n_qubits, qubit), phase: 0 }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Overall scalar i^phase.
    pub fn coefficient(&self) -> C64 {
        I_POWERS[self.phase as usize]
    }

    /// Operator product `self · other`.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        assert_eq!(self.n_qubits, other.n_qubits);
        // Z^{z1} X^{x2} = (−1)^{z1·x2} X^{x2} Z^{z1}
        let swaps = (self.z & other.x).count_ones() as u8;
        PauliString {
            n_qubits: self.n_qubits,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + 2 * (swaps % 2)) % 4,
        }
    }

    /// Label form with a leading sign when the coefficient is −1.
    pub fn label(&self) -> String {
        let mut s = String::new();
        // Each Y contributes i; strip those from the coefficient.
        let n_y = (self.x & self.z).count_ones() as u8;
        let residual = (self.phase + 4 - n_y % 4) % 4;
        match residual {
            0 => {}
            1 => s.push('i'),
            2 => s.push('-'),
            _ => s.push_str("-i"),
        }
        for q in 0..self.n_qubits {
            let mask = 1usize << bit_of(self.n_qubits, q);
            s.push(match (self.x & mask != 0, self.z & mask != 0) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            });
        }
        s
    }

    #[inline]
    fn sign_on(&self, basis: usize) -> f64 {
        if (self.z & basis).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: 1 << self.n_qubits, found: psi.dim() });
        }
        let coeff = self.coefficient();
        let mut out = vec![C64::new(0.0, 0.0); psi.dim()];
        for (b, a) in psi.amplitudes().iter().enumerate() {
            out[b ^ self.x] = coeff * self.sign_on(b) * a;
        }
        StateVector::from_amplitudes(out)
    }

    /// ⟨ψ|P|ψ⟩.
    pub fn expectation(&self, psi: &StateVector) -> Result<C64> {
        if psi.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: 1 << self.n_qubits, found: psi.dim() });
        }
        let amps = psi.amplitudes();
        let s: C64 = amps.iter().enumerate().map(|(b, a)| amps[b ^ self.x].conj() * a * self.sign_on(b)).sum();
        Ok(s * self.coefficient())
    }

    /// tr(ρP).
    pub fn expectation_density(&self, rho: &DensityMatrix) -> Result<C64> {
        if rho.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: 1 << self.n_qubits, found: rho.dim() });
        }
        let m = rho.matrix();
        let s: C64 = (0..rho.dim()).map(|b| m[(b, b ^ self.x)] * self.sign_on(b)).sum();
        Ok(s * self.coefficient())
    }

    pub fn to_matrix(&self) -> Matrix {
        let dim = 1usize << self.n_qubits;
        let mut m = Matrix::zeros(dim);
        let coeff = self.coefficient();
        for b in 0..dim {
            m[(b ^ self.x, b)] = coeff * self.sign_on(b);
        }
        m
    }
}

/// Accumulated byproduct exponents per output qubit; the correction applied
/// to output `k` is σ_x^{x_k} σ_z^{z_k}.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PauliFrame {
    x_powers: Vec<u8>,
    z_powers: Vec<u8>,
}

impl PauliFrame {
    pub fn new(n_outputs: usize) -> Self {
        PauliFrame { x_powers: vec![0; n_outputs], z_powers: vec![0; n_outputs] }
    }

    /// Frame from explicit `(x_power, z_power)` pairs.
    pub fn from_powers(powers: &[(u8, u8)]) -> Self {
        PauliFrame {
            x_powers: powers.iter().map(|p| p.0 & 1).collect(),
            z_powers: powers.iter().map(|p| p.1 & 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.x_powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_powers.is_empty()
    }

    pub fn x_power(&self, k: usize) -> u8 {
        self.x_powers[k]
    }

    pub fn z_power(&self, k: usize) -> u8 {
        self.z_powers[k]
    }

    /// Multiplies a σ_x^bit into output `k`.
    pub fn toggle_x(&mut self, k: usize, bit: u8) {
        self.x_powers[k] ^= bit & 1;
    }

    /// Multiplies a σ_z^bit into output `k`.
    pub fn toggle_z(&mut self, k: usize, bit: u8) {
        self.z_powers[k] ^= bit & 1;
    }

    pub fn is_trivial(&self) -> bool {
        self.x_powers.iter().chain(&self.z_powers).all(|b| *b == 0)
    }

    /// The correction as an operator on output `k`: σ_x^{x} σ_z^{z}.
    pub fn correction_on(&self, k: usize) -> Operator {
        let mut op = Operator::identity(1);
        if self.z_powers[k] == 1 {
            op = Operator::pauli_z();
        }
        if self.x_powers[k] == 1 {
            op = Operator::pauli_x().then_after(&op);
        }
        op
    }

    /// The correction as a Pauli string (qubit `k` of the register is output `k`).
    pub fn as_pauli_string(&self) -> PauliString {
        let n = self.len();
        let mut p = PauliString::identity(n);
        for k in 0..n {
            if self.z_powers[k] == 1 {
                p = p.mul(&PauliString::z_on(n, k));
            }
        }
        let mut xs = PauliString::identity(n);
        for k in 0..n {
            if self.x_powers[k] == 1 {
                xs = xs.mul(&PauliString::x_on(n, k));
            }
        }
        xs.mul(&p)
    }

    /// Applies σ_x^{x_k} σ_z^{z_k} to every output qubit `k` of `psi`.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.n_qubits() != self.len() {
            return Err(Error::DimensionMismatch { expected: 1 << self.len(), found: psi.dim() });
        }
        self.as_pauli_string().apply(psi)
    }

    /// Same correction on a mixed state.
    pub fn apply_density(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.n_qubits() != self.len() {
            return Err(Error::DimensionMismatch { expected: 1 << self.len(), found: rho.dim() });
        }
        let mut out = rho.clone();
        for k in 0..self.len() {
            if self.x_powers[k] | self.z_powers[k] != 0 {
                out = out.apply(&self.correction_on(k), &[k])?;
            }
        }
        Ok(out)
    }
}
