//! Single- and two-qubit operators used by the measurement patterns.

use alloc::vec;
use core::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt_columns, Matrix};
use crate::C64;

/// Tolerance for accepting a matrix as unitary.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// A square operator on `log2(dim)` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    matrix: Matrix,
    unitary: bool,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

impl Operator {
    /// Wraps a matrix, recording whether it is unitary within [`UNITARY_TOLERANCE`].
    pub fn new(matrix: Matrix) -> Self {
        let unitary = unitarity_error(&matrix) <= UNITARY_TOLERANCE;
        Operator { matrix, unitary }
    }

    /// Wraps a matrix and fails unless it is unitary.
    pub fn unitary(matrix: Matrix) -> Result<Self> {
        let err = unitarity_error(&matrix);
        if err > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary(err));
        }
        Ok(Operator { matrix, unitary: true })
    }

    fn known_unitary(dim: usize, entries: alloc::vec::Vec<C64>) -> Self {
        Operator { matrix: Matrix::from_row_major(dim, entries), unitary: true }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    /// Number of qubits the operator acts on, if the dimension is a power of two.
    pub fn n_qubits(&self) -> Option<usize> {
        let d = self.dim();
        d.is_power_of_two().then(|| d.trailing_zeros() as usize)
    }

    pub fn adjoint(&self) -> Self {
        Operator { matrix: self.matrix.adjoint(), unitary: self.unitary }
    }

    /// Operator product `self · other` (apply `other` first).
    pub fn then_after(&self, other: &Operator) -> Self {
        Operator { matrix: self.matrix.matmul(&other.matrix), unitary: self.unitary && other.unitary }
    }

    pub fn kron(&self, other: &Operator) -> Self {
        Operator { matrix: self.matrix.kron(&other.matrix), unitary: self.unitary && other.unitary }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Operator { matrix: Matrix::identity(1 << n_qubits), unitary: true }
    }

    pub fn pauli_x() -> Self {
        Self::known_unitary(2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    pub fn pauli_y() -> Self {
        Self::known_unitary(2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
    }

    pub fn pauli_z() -> Self {
        Self::known_unitary(2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
    }

    /// H = (σ_x + σ_z)/√2.
    pub fn hadamard() -> Self {
        let h = FRAC_1_SQRT_2;
        Self::known_unitary(2, vec![c(h, 0.), c(h, 0.), c(h, 0.), c(-h, 0.)])
    }

    /// R_z(α) = exp(−iασ_z/2) = diag(e^{−iα/2}, e^{iα/2}).
    pub fn rz(alpha: f64) -> Self {
        let half = alpha / 2.0;
        let m = C64::from_polar(1.0, -half);
        let p = C64::from_polar(1.0, half);
        Self::known_unitary(2, vec![m, c(0., 0.), c(0., 0.), p])
    }

    /// R_x(α) = H R_z(α) H.
    pub fn rx(alpha: f64) -> Self {
        let h = Self::hadamard();
        h.then_after(&Self::rz(alpha)).then_after(&h)
    }

    /// Controlled phase, diag(1, 1, 1, −1).
    pub fn cphase() -> Self {
        let mut m = Matrix::identity(4);
        m[(3, 3)] = c(-1., 0.);
        Operator { matrix: m, unitary: true }
    }

    /// Haar-ish random unitary from Gram–Schmidt on a complex Gaussian matrix.
    pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mut m = Matrix::zeros(dim);
        for z in m.as_mut_slice() {
            *z = c(gaussian(rng), gaussian(rng));
        }
        gram_schmidt_columns(&mut m);
        Operator { matrix: m, unitary: true }
    }
}

/// Standard normal deviate via Box–Muller.
pub(crate) fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
}

/// max |U†U − I|.
pub fn unitarity_error(m: &Matrix) -> f64 {
    m.adjoint().matmul(m).max_abs_diff(&Matrix::identity(m.dim()))
}
