//! Small dense complex linear algebra for one- and two-qubit operators.
//!
//! Matrices carry their dimension in the type (`Matrix<2>`, `Matrix<4>`), so
//! products, Kronecker products and partial traces cannot be called with
//! mismatched shapes. Two-qubit indices follow `|σ⟩_A ⊗ |σ'⟩_B` in row-major
//! order: index `2 * i_A + i_B`.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub type Mat2 = Matrix<2>;
pub type Mat4 = Matrix<4>;

/// Tolerance used to decide whether an input to the eigensolver is Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `(-EIGEN_NOISE, 0]` are treated as zero.
pub const EIGEN_NOISE: f64 = 1e-10;
/// Eigenvalues below `-NEGATIVE_REJECT` mean the input was not a state.
pub const NEGATIVE_REJECT: f64 = 1e-8;
/// Off-diagonal magnitude at which a Jacobi sweep is considered converged.
pub const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix<const N: usize> {
    entries: [[C64; N]; N],
}

impl<const N: usize> Default for Matrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Matrix<N> {
    pub const DIM: usize = N;

    pub fn zeros() -> Self {
        Self {
            entries: [[ZERO; N]; N],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.entries[i][i] = ONE;
        }
        m
    }

    pub fn from_rows(entries: [[C64; N]; N]) -> Self {
        Self { entries }
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros();
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.entries[i][j] = C64::new(v, 0.0);
            }
        }
        m
    }

    pub fn diag(values: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, &v) in values.iter().enumerate() {
            m.entries[i][i] = C64::new(v, 0.0);
        }
        m
    }

    /// `|v⟩⟨v|` for a (not necessarily normalized) column vector.
    pub fn outer(v: &[C64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] = v[i] * v[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i][j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.entries[i][j] = value;
    }

    pub fn rows(&self) -> &[[C64; N]; N] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        N
    }

    pub fn dagger(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] = self.entries[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.entries[i][i]).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut m = *self;
        m.entries
            .iter_mut()
            .flatten()
            .for_each(|z| *z *= factor);
        m
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.entries[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    m.entries[i][j] += a * other.entries[k][j];
                }
            }
        }
        m
    }

    /// `U M U†`
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.dagger())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.dagger())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.entries.iter_mut().flatten().zip(rhs.entries.iter().flatten()) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.entries.iter_mut().flatten().zip(rhs.entries.iter().flatten()) {
            *a -= b;
        }
        self
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.matmul(&rhs)
    }
}

impl<const N: usize> Mul for &Matrix<N> {
    type Output = Matrix<N>;
    fn mul(self, rhs: Self) -> Matrix<N> {
        self.matmul(rhs)
    }
}

pub fn pauli_x() -> Mat2 {
    Mat2::from_real([[0.0, 1.0], [1.0, 0.0]])
}

pub fn pauli_y() -> Mat2 {
    Mat2::from_rows([[ZERO, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), ZERO]])
}

pub fn pauli_z() -> Mat2 {
    Mat2::diag([1.0, -1.0])
}

/// Kronecker product with blocks `a_ij · B`.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let aij = a.get(i, j);
            for k in 0..2 {
                for l in 0..2 {
                    m.set(2 * i + k, 2 * j + l, aij * b.get(k, l));
                }
            }
        }
    }
    m
}

/// Which qubit of a two-qubit operator to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

pub fn partial_trace(rho: &Mat4, keep: Subsystem) -> Mat2 {
    let mut m = Mat2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let v = match keep {
                Subsystem::A => rho.get(2 * i, 2 * j) + rho.get(2 * i + 1, 2 * j + 1),
                Subsystem::B => rho.get(i, j) + rho.get(2 + i, 2 + j),
            };
            m.set(i, j, v);
        }
    }
    m
}

/// Exchanges the two qubits: `SWAP · M · SWAP`.
pub fn swap_subsystems(m: &Mat4) -> Mat4 {
    const PERM: [usize; 4] = [0, 2, 1, 3];
    let mut out = Mat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            out.set(PERM[i], PERM[j], m.get(i, j));
        }
    }
    out
}

/// Real eigenvalues of a Hermitian matrix, sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum {
    values: Vec<f64>,
}

impl EigenSpectrum {
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `-Σ λ ln λ` with `0 ln 0 = 0`.
    pub fn entropy(&self) -> Result<f64> {
        if let Some(&lo) = self.values.last() {
            if lo < -NEGATIVE_REJECT {
                return Err(Error::NegativeEigenvalue { value: lo });
            }
        }
        Ok(self.entropy_clamped())
    }

    /// Entropy with every non-positive eigenvalue dropped. Only for spectra
    /// already known to come from a state.
    pub(crate) fn entropy_clamped(&self) -> f64 {
        -self
            .values
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| l * l.ln())
            .sum::<f64>()
    }
}

pub fn hermitian_eigenvalues<const N: usize>(m: &Matrix<N>) -> Result<EigenSpectrum> {
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(hermitian_eigenvalues_unchecked(m))
}

pub(crate) fn hermitian_eigenvalues_unchecked<const N: usize>(m: &Matrix<N>) -> EigenSpectrum {
    match N {
        0 => EigenSpectrum::from_unsorted(Vec::new()),
        1 => EigenSpectrum::from_unsorted(vec![m.get(0, 0).re]),
        2 => {
            let a = m.get(0, 0).re;
            let d = m.get(1, 1).re;
            let b = 0.5 * (m.get(0, 1) + m.get(1, 0).conj());
            if b.norm_sqr() == 0.0 {
                return EigenSpectrum::from_unsorted(vec![a, d]);
            }
            let mean = 0.5 * (a + d);
            let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            EigenSpectrum::from_unsorted(vec![mean + radius, mean - radius])
        }
        _ => {
            // [[Re, -Im], [Im, Re]] has every eigenvalue of M exactly twice.
            let n2 = 2 * N;
            let mut a = vec![0.0; n2 * n2];
            for i in 0..N {
                for j in 0..N {
                    let z = 0.5 * (m.get(i, j) + m.get(j, i).conj());
                    a[i * n2 + j] = z.re;
                    a[(i + N) * n2 + (j + N)] = z.re;
                    a[(i + N) * n2 + j] = z.im;
                    a[i * n2 + (j + N)] = -z.im;
                }
            }
            let mut doubled = jacobi_symmetric(&mut a, n2);
            doubled.sort_by(|x, y| y.total_cmp(x));
            let values = doubled
                .chunks(2)
                .map(|pair| 0.5 * (pair[0] + pair[1]))
                .collect();
            EigenSpectrum { values }
        }
    }
}

/// Cyclic Jacobi on a dense row-major real symmetric `n × n` matrix.
/// Returns the diagonal after convergence; `a` is overwritten.
fn jacobi_symmetric(a: &mut [f64], n: usize) -> Vec<f64> {
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p * n + q].abs());
            }
        }
        if off < JACOBI_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Von Neumann entropy in nats.
pub fn von_neumann_entropy<const N: usize>(rho: &Matrix<N>) -> Result<f64> {
    hermitian_eigenvalues(rho)?.entropy()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, LN_2};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn pauli_algebra() {
        let i2 = Mat2::identity();
        assert_eq!(i2 * i2, i2);
        assert!((pauli_x() * pauli_x()).max_abs_diff(&i2) < 1e-15);
        let iz = pauli_z().scale(C64::new(0.0, 1.0));
        assert!((pauli_x() * pauli_y()).max_abs_diff(&iz) < 1e-15);
    }

    #[test]
    fn kron_basics() {
        let i2 = Mat2::identity();
        assert_eq!(kron(&i2, &i2), Mat4::identity());
        let up = Mat2::diag([1.0, 0.0]);
        assert_eq!(kron(&up, &up), Mat4::diag([1.0, 0.0, 0.0, 0.0]));
        // block convention: (σ_x ⊗ 1)[0][2] = 1
        let k = kron(&pauli_x(), &i2);
        assert_eq!(k.get(0, 2), ONE);
        assert_eq!(k.get(0, 1), ZERO);
    }

    #[test]
    fn partial_trace_of_product() {
        let a = Mat2::from_rows([[C64::new(0.6, 0.0), C64::new(0.1, 0.2)], [C64::new(0.1, -0.2), C64::new(0.4, 0.0)]]);
        let b = Mat2::from_rows([[C64::new(0.3, 0.0), C64::new(0.0, -0.4)], [C64::new(0.0, 0.4), C64::new(0.7, 0.0)]]);
        let ab = kron(&a, &b);
        assert!(partial_trace(&ab, Subsystem::A).max_abs_diff(&a) < 1e-15);
        assert!(partial_trace(&ab, Subsystem::B).max_abs_diff(&b) < 1e-15);
        assert!(swap_subsystems(&ab).max_abs_diff(&kron(&b, &a)) < 1e-15);
    }

    #[test]
    fn two_by_two_closed_form() {
        let s = hermitian_eigenvalues(&Mat2::diag([0.3, 0.7])).unwrap();
        assert_eq!(s.values(), &[0.7, 0.3]);
        let (a, b) = (0.4, 0.15);
        let s = hermitian_eigenvalues(&Mat2::from_real([[a, b], [b, a]])).unwrap();
        assert!(close(s.values()[0], a + b, 1e-15));
        assert!(close(s.values()[1], a - b, 1e-15));
    }

    #[test]
    fn jacobi_complex_four_by_four() {
        // Hermitian with known spectrum: U diag(d) U† with U a product of rotations.
        let d = [0.5, 0.25, 0.15, 0.1];
        let theta = 0.7f64;
        let ry = Mat2::from_real([[theta.cos(), -theta.sin()], [theta.sin(), theta.cos()]]);
        let phase = Mat2::from_rows([[ONE, ZERO], [ZERO, C64::from_polar(1.0, 1.1)]]);
        let u = kron(&(ry * phase), &(phase * ry));
        let m = Mat4::diag(d).conjugate_by(&u);
        let s = hermitian_eigenvalues(&m).unwrap();
        for (got, want) in s.values().iter().zip(d) {
            assert!(close(*got, want, 1e-12), "{got} vs {want}");
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Mat2::from_real([[1.0, 1.0], [0.0, 1.0]]);
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn entropy_values() {
        assert_eq!(von_neumann_entropy(&Mat4::diag([1.0, 0.0, 0.0, 0.0])).unwrap(), 0.0);
        let mixed = Mat2::identity().scale_real(0.5);
        assert!(close(von_neumann_entropy(&mixed).unwrap(), LN_2, 1e-15));
        let _ = FRAC_PI_2;
    }

    #[test]
    fn entropy_rejects_negative_spectrum() {
        let m = Mat2::diag([1.1, -0.1]);
        assert!(matches!(von_neumann_entropy(&m), Err(Error::NegativeEigenvalue { .. })));
        // tiny negatives are noise
        let m = Mat2::diag([1.0 + 1e-11, -1e-11]);
        assert!(close(von_neumann_entropy(&m).unwrap(), 0.0, 1e-9));
    }
}
