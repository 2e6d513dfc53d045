//! Mutual information, measurement-conditioned entropy and quantum discord
//! of two-qubit states.
//!
//! `D_A` minimizes over projective measurements `Π_μ = (1 + μ n·σ)/2` on
//! qubit B. The search is a fixed (θ, φ) grid followed by a simplex
//! refinement from the best cell, so results are reproducible bit for bit.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmath::{kron, partial_trace, Mat2, Subsystem};
use crate::quantum::{discorded_state, projector, DetectorSetting, QubitState, Spin, TwoQubitState};
use crate::simplex::{self, SimplexOptions};

/// Outcome probabilities below this are dropped from the conditional entropy.
pub const NEGLIGIBLE_PROBABILITY: f64 = 1e-14;
pub const DEFAULT_CURVE_SAMPLES: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchSettings {
    /// Grid points over θ ∈ [0, π], endpoints included.
    pub theta_points: usize,
    /// Grid points over φ ∈ [0, 2π), 2π excluded.
    pub phi_points: usize,
    pub simplex_tol: f64,
    pub max_iterations: usize,
}

impl Default for SearchSettings {
    fn default() -> Self {
        Self {
            theta_points: 64,
            phi_points: 128,
            simplex_tol: 1e-9,
            max_iterations: 2_000,
        }
    }
}

impl SearchSettings {
    pub fn validate(&self) -> Result<()> {
        if self.theta_points < 2 || self.phi_points < 1 {
            return Err(Error::InvalidArgument(format!(
                "discord grid needs at least 2 θ points and 1 φ point, got {}×{}",
                self.theta_points, self.phi_points
            )));
        }
        if !(self.simplex_tol > 0.0) {
            return Err(Error::InvalidArgument("simplex tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Result of measuring qubit B along `axis`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub axis: DetectorSetting,
    pub p_plus: f64,
    pub p_minus: f64,
    /// Conditional states of A for outcomes (+, −); `None` when the outcome
    /// has negligible probability.
    pub post_states: [Option<QubitState>; 2],
}

impl MeasurementRecord {
    pub fn probability(&self, outcome: Spin) -> f64 {
        match outcome {
            Spin::Up => self.p_plus,
            Spin::Down => self.p_minus,
        }
    }

    /// `Σ_μ p_μ S(ρ_{A|μ})`
    pub fn conditional_entropy(&self) -> f64 {
        Spin::BOTH
            .iter()
            .zip(&self.post_states)
            .filter_map(|(&s, state)| state.as_ref().map(|st| self.probability(s) * st.entropy()))
            .sum()
    }
}

pub fn post_measurement(rho: &TwoQubitState, n: &DetectorSetting) -> MeasurementRecord {
    let identity = Mat2::identity();
    let mut probs = [0.0; 2];
    let mut posts: [Option<QubitState>; 2] = [None, None];
    for s in Spin::BOTH {
        let local = kron(&identity, &projector(s, n));
        let projected = local.matmul(rho.matrix()).matmul(&local);
        let p = projected.trace().re;
        probs[s.index()] = p;
        if p >= NEGLIGIBLE_PROBABILITY {
            let reduced = partial_trace(&projected, Subsystem::A).scale_real(1.0 / p);
            posts[s.index()] = Some(QubitState::from_matrix_unchecked(reduced));
        }
    }
    MeasurementRecord {
        axis: *n,
        p_plus: probs[0],
        p_minus: probs[1],
        post_states: posts,
    }
}

/// `S(A | Π^B_n)` in nats.
pub fn conditional_entropy(rho: &TwoQubitState, n: &DetectorSetting) -> f64 {
    post_measurement(rho, n).conditional_entropy()
}

/// `I(ρ) = S(ρ_A) + S(ρ_B) − S(ρ_AB)` in nats.
pub fn mutual_information(rho: &TwoQubitState) -> f64 {
    rho.reduced(Subsystem::A).entropy() + rho.reduced(Subsystem::B).entropy() - rho.entropy()
}

/// `J_A = S(ρ_A) − S(A | Π^B_n)` for one measurement axis.
pub fn classical_correlation(rho: &TwoQubitState, n: &DetectorSetting) -> f64 {
    rho.reduced(Subsystem::A).entropy() - conditional_entropy(rho, n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult {
    /// Discord in nats, clamped at zero.
    pub value: f64,
    /// Minimum of the discord functional before clamping.
    pub raw_value: f64,
    /// Best value on the coarse grid, before refinement.
    pub grid_value: f64,
    pub argmin_axis: DetectorSetting,
    pub evaluations: usize,
}

/// `D_A(ρ) = min_n S(A|Π^B_n) + S(ρ_B) − S(ρ_AB)`.
pub fn discord_a(rho: &TwoQubitState, search: &SearchSettings) -> DiscordResult {
    let offset = rho.reduced(Subsystem::B).entropy() - rho.entropy();
    let mut evaluations = 0usize;
    let mut functional = |theta: f64, phi: f64| {
        evaluations += 1;
        conditional_entropy(rho, &DetectorSetting::new(theta, phi)) + offset
    };

    let theta_step = PI / (search.theta_points - 1) as f64;
    let phi_step = TAU / search.phi_points as f64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..search.theta_points {
        let theta = i as f64 * theta_step;
        for j in 0..search.phi_points {
            let phi = j as f64 * phi_step;
            let v = functional(theta, phi);
            // strict comparison keeps the lexicographically smallest (θ, φ)
            if v < best.0 {
                best = (v, theta, phi);
            }
        }
    }
    let (grid_value, theta0, phi0) = best;

    let refined = simplex::minimize(
        |p| functional(p[0], p[1]),
        &[theta0, phi0],
        &[0.5 * theta_step, 0.5 * phi_step],
        None,
        SimplexOptions {
            diameter_tol: search.simplex_tol,
            max_iterations: search.max_iterations,
        },
    );
    let raw_value = refined.value.min(grid_value);
    let argmin_axis = if refined.value <= grid_value {
        DetectorSetting::new(refined.point[0], refined.point[1])
    } else {
        DetectorSetting::new(theta0, phi0)
    };

    DiscordResult {
        value: raw_value.max(0.0),
        raw_value,
        grid_value,
        argmin_axis,
        evaluations,
    }
}

/// `D_B`: the same minimization with measurements on qubit A.
pub fn discord_b(rho: &TwoQubitState, search: &SearchSettings) -> DiscordResult {
    discord_a(&rho.swapped(), search)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscordPoint {
    pub x: f64,
    pub discord_nats: f64,
}

/// Sample x uniformly over `[0, 2π)`, start inclusive.
pub fn curve_abscissae(samples: usize) -> Vec<f64> {
    (0..samples).map(|i| TAU * i as f64 / samples as f64).collect()
}

/// `D_A(ρ(x))` for `samples` values of x.
pub fn discord_curve(samples: usize, search: &SearchSettings) -> Result<Vec<DiscordPoint>> {
    if samples < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {samples}")));
    }
    search.validate()?;
    Ok(curve_abscissae(samples)
        .into_iter()
        .map(|x| DiscordPoint {
            x,
            discord_nats: discord_a(&discorded_state(x), search).value,
        })
        .collect())
}
