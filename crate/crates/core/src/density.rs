//! Mixed states.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gates::Operator;
use crate::linalg::Matrix;
use crate::measure::{MeasurementBasis, Outcome};
use crate::state::{apply_matrix_in_place, bit_of, check_size, target_bits, StateVector};
use crate::C64;

/// Physicality tolerances applied by [`DensityMatrix::validate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub hermiticity: f64,
    pub eigenvalue_floor: f64,
    pub trace: f64,
}

impl Tolerances {
    /// Tolerances for matrices produced inside the crate.
    pub const INTERNAL: Tolerances = Tolerances { hermiticity: 1e-10, eigenvalue_floor: -1e-10, trace: 1e-10 };
    /// Looser tolerances for matrices read from files that may carry rounded data.
    pub const FILE: Tolerances = Tolerances { hermiticity: 1e-8, eigenvalue_floor: -1e-8, trace: 1e-8 };
}

/// A Hermitian, positive semidefinite, unit-trace matrix on `n_qubits`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: Matrix,
}

impl DensityMatrix {
    /// Validates `matrix` against [`Tolerances::INTERNAL`].
    pub fn new(matrix: Matrix) -> Result<Self> {
        Self::with_tolerances(matrix, Tolerances::INTERNAL)
    }

    pub fn with_tolerances(matrix: Matrix, tol: Tolerances) -> Result<Self> {
        let dim = matrix.dim();
        if !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch { expected: dim.next_power_of_two(), found: dim });
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_size(n_qubits)?;
        let rho = DensityMatrix { n_qubits, matrix };
        rho.validate(tol)?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(n_qubits: usize, matrix: Matrix) -> Self {
        debug_assert_eq!(matrix.dim(), 1 << n_qubits);
        DensityMatrix { n_qubits, matrix }
    }

    /// I / 2^n.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        Ok(DensityMatrix { n_qubits, matrix: Matrix::identity(dim).scale_real(1.0 / dim as f64) })
    }

    /// Checks Hermiticity, trace and the eigenvalue floor, reporting the first
    /// violated invariant with its magnitude.
    pub fn validate(&self, tol: Tolerances) -> Result<()> {
        let herm = self.matrix.hermiticity_error();
        if herm > tol.hermiticity {
            return Err(Error::Unphysical { invariant: "hermiticity", magnitude: herm });
        }
        let tr = self.matrix.trace();
        let trace_err = (tr - C64::new(1.0, 0.0)).norm();
        if trace_err > tol.trace {
            return Err(Error::Unphysical { invariant: "unit trace", magnitude: trace_err });
        }
        let min_eig = self.matrix.eigvalsh().first().copied().unwrap_or(0.0);
        if min_eig < tol.eigenvalue_floor {
            return Err(Error::Unphysical { invariant: "positive semidefinite", magnitude: min_eig });
        }
        Ok(())
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// tr(ρ²).
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix.eigvalsh()
    }

    /// Convex combination `w·self + (1 − w)·other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<DensityMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::OutOfRange { name: "weight", value: w, range: "[0, 1]" });
        }
        let mut m = self.matrix.scale_real(w);
        m.add_scaled(&other.matrix, 1.0 - w);
        Ok(DensityMatrix { n_qubits: self.n_qubits, matrix: m })
    }

    /// Weighted sum of density matrices whose weights sum to one.
    pub fn weighted_sum(terms: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix> {
        let first = terms.first().ok_or(Error::EmptyQubitSet)?.1;
        let mut m = Matrix::zeros(first.dim());
        for (w, rho) in terms {
            if rho.dim() != first.dim() {
                return Err(Error::DimensionMismatch { expected: first.dim(), found: rho.dim() });
            }
            m.add_scaled(&rho.matrix, *w);
        }
        Ok(DensityMatrix { n_qubits: first.n_qubits, matrix: m })
    }

    /// U ρ U† with `u` acting on the ordered `targets`.
    pub fn apply(&self, u: &Operator, targets: &[usize]) -> Result<DensityMatrix> {
        let masks = target_bits(self.n_qubits, targets)?;
        let expected = 1usize << targets.len();
        if u.dim() != expected {
            return Err(Error::DimensionMismatch { expected, found: u.dim() });
        }
        let dim = self.dim();
        let mut m = self.matrix.clone();
        let mut col = alloc::vec![C64::new(0.0, 0.0); dim];
        for c in 0..dim {
            for r in 0..dim {
                col[r] = m[(r, c)];
            }
            apply_matrix_in_place(&mut col, &masks, u.matrix());
            for r in 0..dim {
                m[(r, c)] = col[r];
            }
        }
        let uc = u.matrix().conj();
        for r in 0..dim {
            let row = &mut m.as_mut_slice()[r * dim..(r + 1) * dim];
            apply_matrix_in_place(row, &masks, &uc);
        }
        Ok(DensityMatrix { n_qubits: self.n_qubits, matrix: m })
    }

    /// Unnormalized block ⟨v|ρ|v⟩ on the remaining qubits and its trace.
    pub(crate) fn project(&self, qubit: usize, basis: &MeasurementBasis, outcome: Outcome) -> Result<(Matrix, f64)> {
        let n = self.n_qubits;
        if qubit >= n {
            return Err(Error::QubitOutOfRange { index: qubit, n_qubits: n });
        }
        let v = basis.vector(outcome);
        let bit = bit_of(n, qubit);
        let low_mask = (1usize << bit) - 1;
        let half = self.dim() / 2;
        let expand = |rest: usize, x: usize| ((rest & !low_mask) << 1) | (rest & low_mask) | (x << bit);
        let mut out = Matrix::zeros(half);
        for r in 0..half {
            for c in 0..half {
                let mut acc = C64::new(0.0, 0.0);
                for (x, vx) in v.iter().enumerate() {
                    for (y, vy) in v.iter().enumerate() {
                        acc += vx.conj() * self.matrix[(expand(r, x), expand(c, y))] * vy;
                    }
                }
                out[(r, c)] = acc;
            }
        }
        let p = out.trace().re;
        Ok((out, p))
    }

    /// (p0, p1) for measuring `qubit` in `basis`.
    pub fn born_probabilities(&self, qubit: usize, basis: &MeasurementBasis) -> Result<(f64, f64)> {
        let p0 = self.project(qubit, basis, Outcome::Zero)?.1.max(0.0);
        let p1 = self.project(qubit, basis, Outcome::One)?.1.max(0.0);
        let total = p0 + p1;
        Ok((p0 / total, p1 / total))
    }

    /// Conditional state after `outcome`, with the measured qubit removed.
    pub fn collapse(&self, qubit: usize, basis: &MeasurementBasis, outcome: Outcome) -> Result<DensityMatrix> {
        if self.n_qubits == 1 {
            return Err(Error::UnsupportedSize(0));
        }
        let (m, p) = self.project(qubit, basis, outcome)?;
        if p <= 1e-14 {
            return Err(Error::ZeroProbability { outcome: outcome.bit(), probability: p });
        }
        Ok(DensityMatrix { n_qubits: self.n_qubits - 1, matrix: m.scale_real(1.0 / p) })
    }

    /// Reduced state on the `keep` qubits (returned in ascending order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let n = self.n_qubits;
        if keep.is_empty() {
            return Err(Error::EmptyQubitSet);
        }
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|&&q| q >= n) {
            return Err(Error::QubitOutOfRange { index: bad, n_qubits: n });
        }
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let k = keep.len();
        let place = |local: usize, qubits: &[usize]| -> usize {
            let m = qubits.len();
            qubits.iter().enumerate().fold(0, |acc, (j, &q)| {
                if local & (1 << (m - 1 - j)) != 0 {
                    acc | (1 << bit_of(n, q))
                } else {
                    acc
                }
            })
        };
        let kd = 1usize << k;
        let td = 1usize << traced.len();
        let keep_idx: Vec<usize> = (0..kd).map(|i| place(i, &keep)).collect();
        let trace_idx: Vec<usize> = (0..td).map(|i| place(i, &traced)).collect();
        let mut out = Matrix::zeros(kd);
        for (r, kr) in keep_idx.iter().enumerate() {
            for (c, kc) in keep_idx.iter().enumerate() {
                out[(r, c)] = trace_idx.iter().map(|t| self.matrix[(kr | t, kc | t)]).sum();
            }
        }
        Ok(DensityMatrix { n_qubits: k, matrix: out })
    }

    /// ⟨ψ|ρ|ψ⟩ (real part).
    pub fn expectation_in(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: psi.dim() });
        }
        Ok(self.matrix.sandwich(psi.amplitudes(), psi.amplitudes()).re)
    }

    /// tr(ρ·M).
    pub fn expectation(&self, m: &Matrix) -> Result<C64> {
        if m.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: m.dim() });
        }
        Ok(self.matrix.trace_product(m))
    }

    /// Trace distance ½‖ρ − σ‖₁.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let diff = self.matrix.sub(&other.matrix);
        Ok(0.5 * diff.eigvalsh().iter().map(|x| x.abs()).sum::<f64>())
    }
}

#[cfg(feature = "serde")]
mod serde_impl {
    //! `{"n": int, "rho": [[[re, im], ...], ...]}`, row-major.
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        n: usize,
        rho: Vec<Vec<[f64; 2]>>,
    }

    impl Serialize for DensityMatrix {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            let dim = self.dim();
            let rho = (0..dim).map(|r| self.matrix.row(r).iter().map(|z| [z.re, z.im]).collect()).collect();
            Repr { n: self.n_qubits, rho }.serialize(s)
        }
    }

    /// Deserialization only checks shape; physicality is the caller's call
    /// (see [`DensityMatrix::validate`]).
    impl<'de> Deserialize<'de> for DensityMatrix {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            let repr = Repr::deserialize(d)?;
            check_size(repr.n).map_err(D::Error::custom)?;
            let dim = 1usize << repr.n;
            if repr.rho.len() != dim || repr.rho.iter().any(|row| row.len() != dim) {
                return Err(D::Error::custom(alloc::format!("rho must be {dim}x{dim} for n = {}", repr.n)));
            }
            let data = repr.rho.into_iter().flatten().map(|[re, im]| C64::new(re, im)).collect();
            Ok(DensityMatrix { n_qubits: repr.n, matrix: Matrix::from_row_major(dim, data) })
        }
    }
}
