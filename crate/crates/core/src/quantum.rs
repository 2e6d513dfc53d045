//! Measurement projectors, the two-qubit states used by the game, and
//! Born-rule joint probabilities.
//!
//! Basis convention: `|↑⟩ = (1, 0)ᵀ`, `|↓⟩ = (0, 1)ᵀ`, so the projector for
//! spin up along θ = 0 is `diag(1, 0)`.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use crate::error::{Error, Result};
use crate::qmath::{
    self, hermitian_eigenvalues, kron, partial_trace, pauli_x, pauli_y, pauli_z, Mat2, Mat4,
    Matrix, Subsystem, C64,
};

pub const TRACE_TOL: f64 = 1e-12;
pub const STATE_HERMITIAN_TOL: f64 = 1e-12;

/// Reduces an angle into `[0, 2π)`.
pub fn wrap_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A measurement direction on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorSetting {
    theta: f64,
    phi: f64,
}

impl DetectorSetting {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self {
            theta: wrap_angle(theta),
            phi: wrap_angle(phi),
        }
    }

    /// Setting in the x–z plane (φ = 0), as used throughout the game.
    pub fn in_xz_plane(theta: f64) -> Self {
        Self::new(theta, 0.0)
    }

    pub fn z() -> Self {
        Self::new(0.0, 0.0)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn bloch_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [cp * st, sp * st, ct]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];

    pub fn value(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    pub fn from_sign(sign: i8) -> Option<Self> {
        match sign {
            1 => Some(Spin::Up),
            -1 => Some(Spin::Down),
            _ => None,
        }
    }
}

/// A validated Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix<const N: usize> {
    matrix: Matrix<N>,
}

pub type QubitState = DensityMatrix<2>;
pub type TwoQubitState = DensityMatrix<4>;

impl<const N: usize> DensityMatrix<N> {
    pub fn new(matrix: Matrix<N>) -> Result<Self> {
        let deviation = matrix.hermitian_deviation();
        if deviation > STATE_HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        let lowest = hermitian_eigenvalues(&matrix)?.min();
        if lowest < -qmath::EIGEN_NOISE {
            return Err(Error::NegativeEigenvalue { value: lowest });
        }
        Ok(Self { matrix })
    }

    /// Skips validation; callers construct PSD unit-trace matrices analytically.
    pub(crate) fn from_matrix_unchecked(matrix: Matrix<N>) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed() -> Self {
        Self::from_matrix_unchecked(Matrix::identity().scale_real(1.0 / N as f64))
    }

    pub fn pure(amplitudes: [C64; N]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm <= 0.0 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        Ok(Self::from_matrix_unchecked(
            Matrix::outer(&amplitudes).scale_real(1.0 / norm),
        ))
    }

    pub fn matrix(&self) -> &Matrix<N> {
        &self.matrix
    }

    pub fn spectrum(&self) -> qmath::EigenSpectrum {
        qmath::hermitian_eigenvalues_unchecked(&self.matrix)
    }

    /// Von Neumann entropy in nats.
    pub fn entropy(&self) -> f64 {
        self.spectrum().entropy_clamped()
    }
}

impl QubitState {
    /// `(1 + r·σ) / 2` for a Bloch vector with `|r| ≤ 1`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if norm > 1.0 + 1e-12 {
            return Err(Error::InvalidArgument(format!("Bloch vector norm {norm} > 1")));
        }
        Ok(Self::from_matrix_unchecked(bloch_operator(1.0, r)))
    }
}

impl TwoQubitState {
    pub fn product(a: &QubitState, b: &QubitState) -> Self {
        Self::from_matrix_unchecked(kron(a.matrix(), b.matrix()))
    }

    pub fn reduced(&self, keep: Subsystem) -> QubitState {
        QubitState::from_matrix_unchecked(partial_trace(&self.matrix, keep))
    }

    pub fn swapped(&self) -> Self {
        Self::from_matrix_unchecked(qmath::swap_subsystems(&self.matrix))
    }
}

/// `(1 + s r·σ) / 2`
fn bloch_operator(s: f64, r: [f64; 3]) -> Mat2 {
    let rs = (pauli_x().scale_real(r[0]) + pauli_y().scale_real(r[1])) + pauli_z().scale_real(r[2]);
    (Mat2::identity() + rs.scale_real(s)).scale_real(0.5)
}

/// `Π_{σ|a} = (1 + σ a·σ) / 2`
pub fn projector(spin: Spin, axis: &DetectorSetting) -> Mat2 {
    bloch_operator(spin.value(), axis.bloch_vector())
}

/// `|x⟩ = cos(x/2)|↑⟩ + sin(x/2)|↓⟩`
pub fn tilted_ket(x: f64) -> [C64; 2] {
    let (s, c) = (0.5 * x).sin_cos();
    [C64::new(c, 0.0), C64::new(s, 0.0)]
}

fn product_ket(a: &[C64; 2], b: &[C64; 2]) -> [C64; 4] {
    [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
}

/// `ρ(x) = ½ (|↑↑⟩⟨↑↑| + |xx⟩⟨xx|)`, a separable state with nonzero discord
/// for `x ∉ {0, π}`.
pub fn discorded_state(x: f64) -> TwoQubitState {
    let up = tilted_ket(0.0);
    let tilted = tilted_ket(wrap_angle(x));
    let m = Mat4::outer(&product_ket(&up, &up)) + Mat4::outer(&product_ket(&tilted, &tilted));
    TwoQubitState::from_matrix_unchecked(m.scale_real(0.5))
}

/// `|ψ⟩ = (|↑↑⟩ + |↓↓⟩)/√2`
pub fn bell_state() -> TwoQubitState {
    let amp = C64::new(FRAC_1_SQRT_2, 0.0);
    let zero = C64::new(0.0, 0.0);
    TwoQubitState::from_matrix_unchecked(Mat4::outer(&[amp, zero, zero, amp]))
}

/// `tr[(Π_a ⊗ Π_b) ρ]` for already-built local projectors. Only separable
/// measurement operators are ever formed.
pub fn born_probability(pa: &Mat2, pb: &Mat2, rho: &TwoQubitState) -> f64 {
    let r = rho.matrix();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    // (Πa ⊗ Πb)[(i,j),(k,l)] · ρ[(k,l),(i,j)]
                    acc += pa.get(i, k) * pb.get(j, l) * r.get(2 * k + l, 2 * i + j);
                }
            }
        }
    }
    acc.re
}

/// `P(σ, σ' | a, b) = tr[(Π_{σ|a} ⊗ Π_{σ'|b}) ρ]`
pub fn joint_probability(
    sigma: Spin,
    sigma_prime: Spin,
    a: &DetectorSetting,
    b: &DetectorSetting,
    rho: &TwoQubitState,
) -> f64 {
    born_probability(&projector(sigma, a), &projector(sigma_prime, b), rho)
}
