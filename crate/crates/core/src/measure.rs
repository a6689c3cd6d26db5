//! Single-qubit projective measurement bases.

use core::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::C64;

/// Measurement outcome bit: `Zero` is the first basis vector (for
/// equatorial bases |α₊⟩), `One` the second (|α₋⟩).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[repr(u8)]
pub enum Outcome {
    Zero = 0,
    One = 1,
}

impl Outcome {
    pub fn from_bit(bit: u8) -> Self {
        if bit & 1 == 0 {
            Outcome::Zero
        } else {
            Outcome::One
        }
    }

    #[inline]
    pub fn bit(self) -> u8 {
        self as u8
    }

    /// (−1)^s.
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Outcome::Zero => 1.0,
            Outcome::One => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        Self::from_bit(self.bit() ^ 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BasisKind {
    /// {|0⟩, |1⟩}.
    Computational,
    /// B(α) = {|α₊⟩, |α₋⟩} with |α±⟩ = (e^{iα/2}|0⟩ ± e^{−iα/2}|1⟩)/√2.
    Equatorial { alpha: f64 },
}

/// An orthonormal single-qubit basis; outcome `Zero` ↔ `vectors[0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBasis {
    kind: BasisKind,
    vectors: [[C64; 2]; 2],
}

impl MeasurementBasis {
    pub fn computational() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        MeasurementBasis { kind: BasisKind::Computational, vectors: [[one, zero], [zero, one]] }
    }

    /// B(α); `alpha` is reduced to [0, 2π). The reduction only changes the
    /// basis vectors by a global sign.
    pub fn equatorial(alpha: f64) -> Self {
        let tau = 2.0 * PI;
        let mut alpha = libm::fmod(alpha, tau);
        if alpha < 0.0 {
            alpha += tau;
        }
        if alpha >= tau {
            alpha = 0.0;
        }
        let a = C64::from_polar(FRAC_1_SQRT_2, alpha / 2.0);
        let b = C64::from_polar(FRAC_1_SQRT_2, -alpha / 2.0);
        MeasurementBasis { kind: BasisKind::Equatorial { alpha }, vectors: [[a, b], [a, -b]] }
    }

    /// σ_x eigenbasis {|+⟩, |−⟩} = B(0).
    pub fn pauli_x() -> Self {
        Self::equatorial(0.0)
    }

    /// σ_y eigenbasis; outcome `Zero` is (|0⟩ + i|1⟩)/√2 (eigenvalue +1).
    pub fn pauli_y() -> Self {
        Self::equatorial(1.5 * PI)
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// Measurement angle for equatorial bases.
    pub fn alpha(&self) -> Option<f64> {
        match self.kind {
            BasisKind::Equatorial { alpha } => Some(alpha),
            BasisKind::Computational => None,
        }
    }

    pub fn vector(&self, outcome: Outcome) -> [C64; 2] {
        self.vectors[outcome as usize]
    }
}
