#![allow(dead_code)]

use oneway_core::linalg::Matrix;
use oneway_core::{DensityMatrix, StateVector, C64};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn gaussian_c64<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_state<R: Rng>(rng: &mut R, n: usize) -> StateVector {
    let amps = (0..1usize << n).map(|_| gaussian_c64(rng)).collect();
    StateVector::normalized(amps).unwrap()
}

/// G G† / tr for a d × d Ginibre matrix G with `rank` columns.
pub fn random_density<R: Rng>(rng: &mut R, n: usize, rank: usize) -> DensityMatrix {
    let d = 1usize << n;
    let mut m = Matrix::zeros(d);
    for _ in 0..rank {
        let v: Vec<C64> = (0..d).map(|_| gaussian_c64(rng)).collect();
        m = m.add(&Matrix::outer(&v, &v));
    }
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr).hermitian_part()).unwrap()
}

pub fn bell() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_amplitudes(vec![C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)])
        .unwrap()
}
