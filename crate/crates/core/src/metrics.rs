//! Fidelity, tangle, maximal CHSH value and the fidelity witness.

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::gates::Operator;
use crate::linalg::Matrix;
use crate::pauli::PauliString;
use crate::state::StateVector;
use crate::C64;

/// Slack allowed outside [0, 1] before a fidelity is reported as unphysical.
const FIDELITY_SLACK: f64 = 1e-12;
/// Round-off allowed below zero in the concurrence eigenvalues.
const EIGEN_SLACK: f64 = 1e-10;
/// Entanglement threshold of the fidelity witness.
pub const WITNESS_THRESHOLD: f64 = 0.5;

/// ⟨φ|ρ|φ⟩, clamped to [0, 1].
pub fn fidelity(rho: &DensityMatrix, target: &StateVector) -> Result<f64> {
    target.require_normalized()?;
    let f = rho.expectation_in(target)?;
    if !(-FIDELITY_SLACK..=1.0 + FIDELITY_SLACK).contains(&f) {
        return Err(Error::Unphysical { invariant: "fidelity in [0, 1]", magnitude: f });
    }
    Ok(f.clamp(0.0, 1.0))
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.n_qubits() != 2 {
        return Err(Error::DimensionMismatch { expected: 4, found: rho.dim() });
    }
    Ok(())
}

/// Rank cutoff: eigenvalues of ρ below this are treated as exact zeros.
const RANK_CUTOFF: f64 = 1e-12;

/// Wootters concurrence C = max(0, λ₁ − λ₂ − λ₃ − λ₄).
///
/// The λᵢ are the square roots of the eigenvalues of ρ ρ̃ with
/// ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y). With ρ = W W† (W built from the
/// eigenvectors of ρ), they equal the singular values of the symmetric matrix
/// τ = Wᵀ (σ_y ⊗ σ_y) W. Those are read off the Hermitian matrix
/// [[0, τ], [τ†, 0]], whose eigenvalues are ±λᵢ. This avoids square roots of
/// round-off-sized eigenvalues when ρ is rank deficient.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let eig = rho.matrix().eigh();
    if let Some(&low) = eig.values.first() {
        if low < -EIGEN_SLACK {
            return Err(Error::Unphysical { invariant: "positive semidefinite", magnitude: low });
        }
    }
    let cols: alloc::vec::Vec<alloc::vec::Vec<C64>> = (0..4)
        .filter(|&i| eig.values[i] > RANK_CUTOFF)
        .map(|i| {
            let s = libm::sqrt(eig.values[i]);
            eig.vectors.column(i).into_iter().map(|z| z * s).collect()
        })
        .collect();
    let r = cols.len();
    if r == 0 {
        return Ok(0.0);
    }
    let yy = Operator::pauli_y().kron(&Operator::pauli_y());
    let yy = yy.matrix();
    let mut embed = Matrix::zeros(2 * r);
    for i in 0..r {
        let y_wi = yy.mul_vec(&cols[i]);
        for j in 0..r {
            // τ_ji = w_jᵀ Y w_i
            let t: C64 = cols[j].iter().zip(&y_wi).map(|(a, b)| a * b).sum();
            embed[(j, r + i)] = t;
            embed[(r + i, j)] = t.conj();
        }
    }
    // Ascending; the top r are the singular values.
    let ev = embed.eigvalsh();
    let mut lambdas = [0.0; 4];
    for (k, l) in lambdas.iter_mut().take(r).enumerate() {
        *l = ev[2 * r - 1 - k].max(0.0);
    }
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Tangle τ = C².
pub fn tangle(rho: &DensityMatrix) -> Result<f64> {
    let c = concurrence(rho)?;
    Ok(c * c)
}

/// Spin correlation matrix T_ij = tr(ρ σ_i ⊗ σ_j), i, j ∈ {x, y, z}.
pub fn correlation_matrix(rho: &DensityMatrix) -> Result<[[f64; 3]; 3]> {
    require_two_qubits(rho)?;
    const AXES: [char; 3] = ['X', 'Y', 'Z'];
    let mut t = [[0.0; 3]; 3];
    for (i, a) in AXES.iter().enumerate() {
        for (j, b) in AXES.iter().enumerate() {
            let label = [*a, *b].iter().collect::<alloc::string::String>();
            t[i][j] = PauliString::from_label(&label)?.expectation_density(rho)?.re;
        }
    }
    Ok(t)
}

/// Maximal CHSH value S = 2√(u₁ + u₂), u₁ ≥ u₂ the two largest eigenvalues of TᵀT.
pub fn chsh_max(rho: &DensityMatrix) -> Result<f64> {
    let t = correlation_matrix(rho)?;
    let mut m = Matrix::zeros(3);
    for i in 0..3 {
        for j in 0..3 {
            let v: f64 = (0..3).map(|k| t[k][i] * t[k][j]).sum();
            m[(i, j)] = C64::new(v, 0.0);
        }
    }
    let u = m.eigvalsh();
    Ok(2.0 * libm::sqrt((u[2] + u[1]).max(0.0)))
}

/// True iff `f` exceeds the entanglement threshold 0.5.
pub fn witness(f: f64) -> bool {
    f > WITNESS_THRESHOLD
}

/// Quality summary of an output state against its target.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricReport {
    pub fidelity: f64,
    /// Two-qubit states only.
    pub tangle: Option<f64>,
    /// Two-qubit states only.
    pub chsh_s: Option<f64>,
    pub witness_pass: bool,
}

impl MetricReport {
    pub fn evaluate(rho: &DensityMatrix, target: &StateVector) -> Result<Self> {
        let fidelity = fidelity(rho, target)?;
        let (tangle, chsh_s) =
            if rho.n_qubits() == 2 { (Some(tangle(rho)?), Some(chsh_max(rho)?)) } else { (None, None) };
        Ok(MetricReport { fidelity, tangle, chsh_s, witness_pass: witness(fidelity) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::SQRT_2;

    fn bell() -> StateVector {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        StateVector::from_amplitudes(alloc::vec![
            C64::new(h, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(h, 0.0)
        ])
        .unwrap()
    }

    #[test]
    fn bell_metrics() {
        let rho = bell().to_density();
        assert!((tangle(&rho).unwrap() - 1.0).abs() < 1e-9);
        assert!((chsh_max(&rho).unwrap() - 2.0 * SQRT_2).abs() < 1e-9);
        assert!((fidelity(&rho, &bell()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_metrics() {
        let rho = StateVector::zero().tensor(&StateVector::plus()).unwrap().to_density();
        assert!(tangle(&rho).unwrap() < 1e-9);
        assert!((chsh_max(&rho).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn werner_at_08() {
        let rho = crate::noise::white_noise(&bell(), 0.8).unwrap();
        assert!((concurrence(&rho).unwrap() - 0.7).abs() < 1e-9);
        assert!((tangle(&rho).unwrap() - 0.49).abs() < 1e-9);
    }

    #[test]
    fn mixed_fidelity_floor() {
        let rho = DensityMatrix::maximally_mixed(4).unwrap();
        let f = fidelity(&rho, &crate::cluster::build_cluster_eq1()).unwrap();
        assert!((f - 1.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn witness_is_strict() {
        assert!(witness(0.62));
        assert!(!witness(0.5));
        assert!(witness(1.0));
    }

    #[test]
    fn wrong_dimension_rejected() {
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(tangle(&rho).is_err());
        assert!(chsh_max(&rho).is_err());
    }
}
