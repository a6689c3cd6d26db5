//! Dense complex matrices and a Hermitian eigensolver.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries. Panics if the length is not a square.
    pub fn from_row_major(dim: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), dim * dim, "row-major data must have dim² entries");
        Matrix { dim, data }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    /// Outer product |a⟩⟨b|.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        assert_eq!(a.len(), b.len());
        let dim = a.len();
        let mut data = Vec::with_capacity(dim * dim);
        for x in a {
            for y in b {
                data.push(*x * y.conj());
            }
        }
        Matrix { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.dim).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Matrix { dim: self.dim, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out[(c, r)] = self[(r, c)];
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Matrix { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Matrix { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { dim: self.dim, data }
    }

    pub fn sub(&self, other: &Matrix) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { dim: self.dim, data }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, other: &Matrix, s: f64) {
        assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            let row = self.row(r);
            let out_row = &mut out.data[r * n..(r + 1) * n];
            for (k, a) in row.iter().enumerate() {
                if *a == ZERO {
                    continue;
                }
                let other_row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(other_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim, v.len());
        (0..self.dim).map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Self {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut out = Self::zeros(dim);
        for r1 in 0..n {
            for c1 in 0..n {
                let a = self[(r1, c1)];
                if a == ZERO {
                    continue;
                }
                for r2 in 0..m {
                    for c2 in 0..m {
                        out[(r1 * m + r2, c1 * m + c2)] = a * other[(r2, c2)];
                    }
                }
            }
        }
        out
    }

    /// ⟨a|M|b⟩.
    pub fn sandwich(&self, a: &[C64], b: &[C64]) -> C64 {
        let mb = self.mul_vec(b);
        a.iter().zip(&mb).map(|(x, y)| x.conj() * y).sum()
    }

    /// tr(self · other) without forming the product.
    pub fn trace_product(&self, other: &Matrix) -> C64 {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = ZERO;
        for r in 0..n {
            for c in 0..n {
                acc += self[(r, c)] * other[(c, r)];
            }
        }
        acc
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest deviation from Hermiticity, max |M_rc − conj(M_cr)|.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim;
        let mut err = 0.0f64;
        for r in 0..n {
            for c in r..n {
                err = err.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        err
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Hermitian part (M + M†)/2.
    pub fn hermitian_part(&self) -> Self {
        self.add(&self.adjoint()).scale_real(0.5)
    }

    /// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
    /// rotations. Only the Hermitian part of `self` is used.
    pub fn eigh(&self) -> Eigh {
        jacobi_eigh(&self.hermitian_part())
    }

    pub fn eigvalsh(&self) -> Vec<f64> {
        self.eigh().values
    }

    /// Applies `f` to the eigenvalues of a Hermitian matrix.
    pub fn map_hermitian(&self, f: impl Fn(f64) -> f64) -> Self {
        let Eigh { values, vectors } = self.eigh();
        let n = self.dim;
        let mut out = Self::zeros(n);
        for (k, lambda) in values.iter().enumerate() {
            let fl = f(*lambda);
            if fl == 0.0 {
                continue;
            }
            for r in 0..n {
                let vr = vectors[(r, k)] * fl;
                for c in 0..n {
                    out[(r, c)] += vr * vectors[(c, k)].conj();
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

/// Eigenvalues (ascending) and the matching eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    libm::sqrt(s)
}

fn jacobi_eigh(input: &Matrix) -> Eigh {
    let n = input.dim();
    let mut a = input.clone();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        if off_diagonal_norm(&a) <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let b = apq.norm();
                if b <= 1e-300 {
                    continue;
                }
                let phase = apq / b; // e^{iφ}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * b);
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                // Rotation V acting on the (p, q) plane:
                // V_pp = c, V_pq = s, V_qp = -s e^{-iφ}, V_qq = c e^{-iφ}.
                let e = phase.conj();
                let vpp = C64::new(c, 0.0);
                let vpq = C64::new(s, 0.0);
                let vqp = e * (-s);
                let vqq = e * c;

                // A <- A V (columns p, q)
                for r in 0..n {
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    a[(r, p)] = arp * vpp + arq * vqp;
                    a[(r, q)] = arp * vpq + arq * vqq;
                }
                // A <- V† A (rows p, q)
                for col in 0..n {
                    let apc = a[(p, col)];
                    let aqc = a[(q, col)];
                    a[(p, col)] = vpp.conj() * apc + vqp.conj() * aqc;
                    a[(q, col)] = vpq.conj() * apc + vqq.conj() * aqc;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                // V_acc <- V_acc V
                for r in 0..n {
                    let wrp = v[(r, p)];
                    let wrq = v[(r, q)];
                    v[(r, p)] = wrp * vpp + wrq * vqp;
                    v[(r, q)] = wrp * vpq + wrq * vqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = Matrix::zeros(n);
    for (k, &i) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, k)] = v[(r, i)];
        }
    }
    Eigh { values, vectors }
}

/// Orthonormalizes the columns of `m` in place (modified Gram–Schmidt).
/// Columns that become numerically zero are left at zero.
pub fn gram_schmidt_columns(m: &mut Matrix) {
    let n = m.dim();
    for j in 0..n {
        for i in 0..j {
            let mut proj = ZERO;
            for r in 0..n {
                proj += m[(r, i)].conj() * m[(r, j)];
            }
            for r in 0..n {
                let sub = m[(r, i)] * proj;
                m[(r, j)] -= sub;
            }
        }
        let norm = libm::sqrt((0..n).map(|r| m[(r, j)].norm_sqr()).sum::<f64>());
        if norm > 1e-300 {
            for r in 0..n {
                m[(r, j)] /= norm;
            }
        }
    }
}

/// QL decomposition `t = Q·L` with `L` lower-triangular; returns `L`.
///
/// `L† L = t† t`, so replacing `t` by `L` leaves the Gram matrix unchanged.
/// Rank-deficient columns produce zero rows in `L`.
pub fn ql_lower_factor(t: &Matrix) -> Matrix {
    let n = t.dim();
    let mut q: Vec<Vec<C64>> = vec![Vec::new(); n];
    let mut l = Matrix::zeros(n);
    for j in (0..n).rev() {
        let mut resid = t.column(j);
        for (i, qi) in q.iter().enumerate().skip(j + 1) {
            if qi.is_empty() {
                continue;
            }
            let proj: C64 = qi.iter().zip(resid.iter()).map(|(a, b)| a.conj() * b).sum();
            l[(i, j)] = proj;
            for (rr, qq) in resid.iter_mut().zip(qi) {
                *rr -= qq * proj;
            }
        }
        let norm = libm::sqrt(resid.iter().map(|z| z.norm_sqr()).sum::<f64>());
        let col_norm = libm::sqrt(t.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>());
        if norm > 1e-14 * col_norm.max(1e-300) {
            l[(j, j)] = C64::new(norm, 0.0);
            q[j] = resid.into_iter().map(|z| z / norm).collect();
        }
    }
    l
}
