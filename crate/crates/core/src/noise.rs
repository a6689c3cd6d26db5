//! White-noise degradation of pure states.

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::state::StateVector;

/// Noise applied to a resource state.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum NoiseSpec {
    /// ρ = p|ψ⟩⟨ψ| + (1 − p) I/2ⁿ.
    WhiteNoise { p: f64 },
}

impl NoiseSpec {
    pub fn white(p: f64) -> Result<Self> {
        check_p(p)?;
        Ok(NoiseSpec::WhiteNoise { p })
    }

    /// White noise calibrated so the fidelity with the pure state is `f`.
    pub fn white_for_fidelity(f: f64, n_qubits: usize) -> Result<Self> {
        Ok(NoiseSpec::WhiteNoise { p: solve_p_for_fidelity(f, n_qubits)? })
    }

    pub fn apply(&self, pure: &StateVector) -> Result<DensityMatrix> {
        match *self {
            NoiseSpec::WhiteNoise { p } => white_noise(pure, p),
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::OutOfRange { name: "p", value: p, range: "[0, 1]" })
    }
}

/// p|ψ⟩⟨ψ| + (1 − p) I/2ⁿ.
pub fn white_noise(pure: &StateVector, p: f64) -> Result<DensityMatrix> {
    check_p(p)?;
    pure.require_normalized()?;
    let amps = pure.amplitudes();
    let dim = amps.len();
    let mut m = Matrix::outer(amps, amps).scale_real(p);
    let floor = (1.0 - p) / dim as f64;
    for i in 0..dim {
        m[(i, i)].re += floor;
    }
    DensityMatrix::new(m)
}

/// The white-noise weight giving fidelity `f_target` on `n_qubits`:
/// p = (f − 2⁻ⁿ)/(1 − 2⁻ⁿ).
pub fn solve_p_for_fidelity(f_target: f64, n_qubits: usize) -> Result<f64> {
    crate::state::check_size(n_qubits)?;
    let floor = 1.0 / (1u64 << n_qubits) as f64;
    if !(floor..=1.0).contains(&f_target) {
        return Err(Error::OutOfRange { name: "fidelity", value: f_target, range: "[2^-n, 1]" });
    }
    Ok(((f_target - floor) / (1.0 - floor)).clamp(0.0, 1.0))
}
