//! Central finite-difference Hessians of a payoff objective, and the checks
//! `tr H = −2f` and `f = −½ Σ φ_i` over the four detector angles.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::StrategyProfile;
use crate::optimize::{ModifiedGamePayoff, Objective};
use crate::qmath::{hermitian_eigenvalues, Matrix};

pub const DEFAULT_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HessianReport {
    /// 4×4 over the angles, or 5×5 with x appended.
    pub matrix: Vec<Vec<f64>>,
    pub trace: f64,
    pub eigenvalues: Vec<f64>,
    pub eigenvalue_sum: f64,
    pub f_value: f64,
    /// `|tr H + 2f|` over the variables in `matrix`.
    pub residual: f64,
    pub include_x: bool,
}

impl HessianReport {
    /// `|f + ½ Σ φ_i|`
    pub fn eigenvalue_residual(&self) -> f64 {
        (self.f_value + 0.5 * self.eigenvalue_sum).abs()
    }
}

/// Central second differences in `(θ_a, θ_a′, θ_b, θ_b′[, x])`.
pub fn finite_difference_hessian<O: Objective + ?Sized>(
    objective: &O,
    point: &StrategyProfile,
    step: f64,
    include_x: bool,
) -> Result<HessianReport> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    let dims = if include_x { 5 } else { 4 };
    let base = point.to_array();
    let eval = |offsets: &[(usize, f64)]| {
        let mut c = base;
        for &(i, d) in offsets {
            c[i] += d;
        }
        objective.value(&StrategyProfile::from_array(c))
    };

    let h = step;
    let f0 = objective.value(point);
    let mut matrix = vec![vec![0.0; dims]; dims];
    for i in 0..dims {
        matrix[i][i] = (eval(&[(i, h)]) - 2.0 * f0 + eval(&[(i, -h)])) / (h * h);
        for j in (i + 1)..dims {
            let v = (eval(&[(i, h), (j, h)]) - eval(&[(i, h), (j, -h)]) - eval(&[(i, -h), (j, h)])
                + eval(&[(i, -h), (j, -h)]))
                / (4.0 * h * h);
            matrix[i][j] = v;
            matrix[j][i] = v;
        }
    }

    let trace: f64 = (0..dims).map(|i| matrix[i][i]).sum();
    let eigenvalues = symmetric_eigenvalues(&matrix)?;
    let eigenvalue_sum = eigenvalues.iter().sum();
    Ok(HessianReport {
        trace,
        eigenvalue_sum,
        eigenvalues,
        f_value: f0,
        residual: (trace + 2.0 * f0).abs(),
        include_x,
        matrix,
    })
}

fn symmetric_eigenvalues(m: &[Vec<f64>]) -> Result<Vec<f64>> {
    fn embed<const N: usize>(m: &[Vec<f64>]) -> Result<Vec<f64>> {
        let mut rows = [[0.0; N]; N];
        for (i, row) in rows.iter_mut().enumerate() {
            row.copy_from_slice(&m[i]);
        }
        Ok(hermitian_eigenvalues(&Matrix::<N>::from_real(rows))?.values().to_vec())
    }
    match m.len() {
        4 => embed::<4>(m),
        5 => embed::<5>(m),
        n => Err(Error::InvalidArgument(format!("unsupported Hessian size {n}"))),
    }
}

/// Angle-space Hessian of the modified-game payoff at `point`.
pub fn payoff_hessian(point: &StrategyProfile, step: f64, include_x: bool) -> Result<HessianReport> {
    finite_difference_hessian(&ModifiedGamePayoff, point, step, include_x)
}

/// `|f + ½ Σ φ_i|` with φ the eigenvalues of the four-angle Hessian.
pub fn eigenvalue_relation_check(point: &StrategyProfile) -> Result<f64> {
    Ok(payoff_hessian(point, DEFAULT_STEP, false)?.eigenvalue_residual())
}
