//! Deterministic box-constrained maximization of payoff objectives and the
//! named scenarios built on it.
//!
//! `maximize` evaluates a full tensor grid over the box, keeps the best
//! `starts` grid points, and refines each with a box-clipped simplex. Among
//! refined candidates whose values lie within `tie_tol` of the best, the
//! lexicographically smallest coordinate tuple wins, so repeated runs give
//! identical results.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{
    expected_payoff_bruteforce, f_closed_form, ClosedFormTerms, GameSpec, StrategyProfile,
};
use crate::simplex::{self, SimplexOptions};

/// Best payoff reachable without quantum correlations when angles are
/// restricted to `[0, π/2]`.
pub const CLASSICAL_RESTRICTED_BOUND: f64 = 0.25;
/// A row only counts as advantageous when it beats the bound by more than
/// rounding noise.
pub const ADVANTAGE_MARGIN: f64 = 1e-12;
pub const DEFAULT_ADVANTAGE_SAMPLES: usize = 256;

const COORDS: usize = 5;
const X: usize = 4;

/// Something to maximize over strategy profiles.
pub trait Objective {
    fn value(&self, profile: &StrategyProfile) -> f64;

    /// Evaluates `value` at fixed angles for every x in `xs`.
    fn sweep_x(&self, angles: [f64; 4], xs: &[f64], out: &mut [f64]) {
        let [a, ap, b, bp] = angles;
        for (x, o) in xs.iter().zip(out.iter_mut()) {
            *o = self.value(&StrategyProfile::new(a, ap, b, bp, *x));
        }
    }
}

impl<F> Objective for F
where
    F: Fn(&StrategyProfile) -> f64,
{
    fn value(&self, profile: &StrategyProfile) -> f64 {
        self(profile)
    }
}

/// Closed-form payoff of the modified game on `ρ(x)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ModifiedGamePayoff;

impl Objective for ModifiedGamePayoff {
    fn value(&self, profile: &StrategyProfile) -> f64 {
        f_closed_form(profile)
    }

    fn sweep_x(&self, angles: [f64; 4], xs: &[f64], out: &mut [f64]) {
        let terms = ClosedFormTerms::new(angles);
        for (x, o) in xs.iter().zip(out.iter_mut()) {
            let (s, c) = (2.0 * x).sin_cos();
            *o = terms.payoff(c, s);
        }
    }
}

/// Born-rule payoff for an arbitrary game.
#[derive(Debug, Clone, Copy)]
pub struct BruteForcePayoff(pub GameSpec);

impl Objective for BruteForcePayoff {
    fn value(&self, profile: &StrategyProfile) -> f64 {
        expected_payoff_bruteforce(&self.0, profile)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxConstraints {
    lower: [f64; COORDS],
    upper: [f64; COORDS],
}

impl BoxConstraints {
    /// Bounds in coordinate order `(θ_a, θ_a′, θ_b, θ_b′, x)`.
    pub fn new(lower: [f64; COORDS], upper: [f64; COORDS]) -> Result<Self> {
        for i in 0..COORDS {
            let (lo, hi) = (lower[i], upper[i]);
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::InvalidBox {
                    index: i,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(Self { lower, upper })
    }

    /// Every angle in `[angle_lo, angle_hi]`, x in `[x_lo, x_hi]`.
    pub fn uniform_angles(angle_lo: f64, angle_hi: f64, x_lo: f64, x_hi: f64) -> Result<Self> {
        Self::new(
            [angle_lo, angle_lo, angle_lo, angle_lo, x_lo],
            [angle_hi, angle_hi, angle_hi, angle_hi, x_hi],
        )
    }

    /// Angles restricted to `[0, π/2]`, x free over `[0, 2π]`.
    pub fn restricted_angles() -> Self {
        Self::uniform_angles(0.0, FRAC_PI_2, 0.0, TAU).expect("valid box")
    }

    /// Angles and x over the full circle.
    pub fn unrestricted() -> Self {
        Self::uniform_angles(0.0, TAU, 0.0, TAU).expect("valid box")
    }

    pub fn with_frozen_x(mut self, x: f64) -> Self {
        self.lower[X] = x;
        self.upper[X] = x;
        self
    }

    pub fn with_frozen_angles(mut self, angles: [f64; 4]) -> Self {
        self.lower[..4].copy_from_slice(&angles);
        self.upper[..4].copy_from_slice(&angles);
        self
    }

    pub fn lower(&self) -> &[f64; COORDS] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64; COORDS] {
        &self.upper
    }

    pub fn contains(&self, point: &[f64; COORDS]) -> bool {
        point
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (lo, hi))| v >= lo && v <= hi)
    }

    fn is_free(&self, i: usize) -> bool {
        self.upper[i] > self.lower[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximizeSettings {
    pub angle_points: usize,
    pub x_points: usize,
    /// Number of best grid points refined by the simplex.
    pub starts: usize,
    pub simplex_tol: f64,
    pub max_iterations: usize,
    pub tie_tol: f64,
}

impl Default for MaximizeSettings {
    fn default() -> Self {
        Self {
            angle_points: 33,
            x_points: 129,
            starts: 8,
            simplex_tol: 1e-10,
            max_iterations: 5_000,
            tie_tol: 1e-12,
        }
    }
}

impl MaximizeSettings {
    pub fn validate(&self) -> Result<()> {
        if self.angle_points < 2 || self.x_points < 2 {
            return Err(Error::InvalidArgument(
                "grids need at least 2 points per free coordinate".into(),
            ));
        }
        if self.starts == 0 {
            return Err(Error::InvalidArgument("need at least one refinement start".into()));
        }
        if !(self.simplex_tol > 0.0) || !(self.tie_tol >= 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Candidate {
    pub profile: StrategyProfile,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub scenario: Option<Scenario>,
    pub argmax: StrategyProfile,
    pub value: f64,
    pub evaluations: usize,
    /// Best value seen on the coarse grid.
    pub grid_best: f64,
    /// Refined candidates, one per start, in start order.
    pub candidates: Vec<Candidate>,
}

fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| if i == points - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

/// The `k` best grid points, ranked by value quantized to `resolution`
/// (descending) and then by flat index (ascending). Quantizing keeps
/// rounding noise from reordering points of equal value.
struct TopK {
    k: usize,
    resolution: f64,
    /// `(rank key, value, index)`
    items: Vec<(f64, f64, usize)>,
}

impl TopK {
    fn new(k: usize, resolution: f64) -> Self {
        Self {
            k,
            resolution,
            items: Vec::with_capacity(k + 1),
        }
    }

    fn key(&self, value: f64) -> f64 {
        if self.resolution > 0.0 {
            (value / self.resolution).round()
        } else {
            value
        }
    }

    fn offer(&mut self, value: f64, index: usize) {
        if value.is_nan() {
            return;
        }
        let key = self.key(value);
        let beats = |a: &(f64, f64, usize)| key > a.0 || (key == a.0 && index < a.2);
        if self.items.len() == self.k && !self.items.last().is_some_and(beats) {
            return;
        }
        let pos = self.items.iter().position(beats).unwrap_or(self.items.len());
        self.items.insert(pos, (key, value, index));
        self.items.truncate(self.k);
    }

    fn best_value(&self) -> f64 {
        self.items.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max)
    }
}

fn lexicographic_less(a: &[f64; COORDS], b: &[f64; COORDS]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

/// Maximizes `objective` over `bounds`.
pub fn maximize<O: Objective + ?Sized>(
    objective: &O,
    bounds: &BoxConstraints,
    settings: &MaximizeSettings,
) -> Result<OptimizationResult> {
    settings.validate()?;
    let grids: Vec<Vec<f64>> = (0..COORDS)
        .map(|i| {
            let points = if i == X { settings.x_points } else { settings.angle_points };
            grid(bounds.lower[i], bounds.upper[i], points)
        })
        .collect();

    let mut evaluations = 0usize;
    let mut top = TopK::new(settings.starts, settings.tie_tol);
    let xs = &grids[X];
    let mut sweep = vec![0.0; xs.len()];
    let mut index = 0usize;
    for &a in &grids[0] {
        for &ap in &grids[1] {
            for &b in &grids[2] {
                for &bp in &grids[3] {
                    objective.sweep_x([a, ap, b, bp], xs, &mut sweep);
                    evaluations += xs.len();
                    for &v in &sweep {
                        top.offer(v, index);
                        index += 1;
                    }
                }
            }
        }
    }
    let grid_best = top.best_value();

    let unravel = |mut flat: usize| -> [f64; COORDS] {
        let mut point = [0.0; COORDS];
        for i in (0..COORDS).rev() {
            let n = grids[i].len();
            point[i] = grids[i][flat % n];
            flat /= n;
        }
        point
    };

    let free: Vec<usize> = (0..COORDS).filter(|&i| bounds.is_free(i)).collect();
    let steps: Vec<f64> = free
        .iter()
        .map(|&i| 0.5 * (bounds.upper[i] - bounds.lower[i]) / (grids[i].len() - 1) as f64)
        .collect();
    let lower: Vec<f64> = free.iter().map(|&i| bounds.lower[i]).collect();
    let upper: Vec<f64> = free.iter().map(|&i| bounds.upper[i]).collect();
    let options = SimplexOptions {
        diameter_tol: settings.simplex_tol,
        max_iterations: settings.max_iterations,
    };

    let mut refined: Vec<([f64; COORDS], f64)> = Vec::with_capacity(top.items.len());
    for &(_, grid_value, flat) in &top.items {
        let base = unravel(flat);
        let embed = |p: &[f64]| {
            let mut full = base;
            for (&i, &v) in free.iter().zip(p) {
                full[i] = v;
            }
            full
        };
        let mut negated = |p: &[f64]| {
            let full = embed(p);
            assert!(bounds.contains(&full), "simplex left the box at {full:?}");
            -objective.value(&StrategyProfile::from_array(full))
        };
        let mut point: Vec<f64> = free.iter().map(|&i| base[i]).collect();
        let mut value = grid_value;
        // Restart from the incumbent while it keeps improving; clipping can
        // flatten the simplex against a face before the other directions converge.
        for _ in 0..4 {
            let r = simplex::minimize(&mut negated, &point, &steps, Some((&lower, &upper)), options);
            evaluations += r.evaluations;
            let improved = -r.value > value + settings.tie_tol;
            if -r.value > value {
                value = -r.value;
                point = r.point;
            }
            if !improved {
                break;
            }
        }
        refined.push((embed(&point), value));
    }

    // Grid starts stay eligible so flat directions cannot pull the winner
    // away from a lexicographically smaller grid point of equal value.
    let pool: Vec<([f64; COORDS], f64)> = refined
        .iter()
        .copied()
        .chain(top.items.iter().map(|&(_, v, flat)| (unravel(flat), v)))
        .collect();

    let best_value = pool.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let (winner, _) = pool
        .iter()
        .filter(|r| r.1 >= best_value - settings.tie_tol)
        .fold(None::<&([f64; COORDS], f64)>, |acc, r| match acc {
            Some(a) if !lexicographic_less(&r.0, &a.0) => Some(a),
            _ => Some(r),
        })
        .copied()
        .ok_or_else(|| Error::InvalidArgument("objective produced no finite values".into()))?;

    let argmax = StrategyProfile::from_array(winner);
    let value = objective.value(&argmax);
    evaluations += 1;
    let candidates = refined
        .iter()
        .map(|(p, v)| Candidate {
            profile: StrategyProfile::from_array(*p),
            value: *v,
        })
        .collect();
    Ok(OptimizationResult {
        scenario: None,
        argmax,
        value,
        evaluations,
        grid_best,
        candidates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// Modified game on `ρ(x)`, angles in `[0, π/2]`, x free.
    ConstrainedDiscord,
    /// As above with x frozen at 0.
    ClassicalRestricted,
    /// Modified game on `ρ(x)`, everything free.
    UnconstrainedDiscord,
    /// CHSH with deterministic local strategies.
    ChshClassical,
    /// CHSH on the Bell state.
    ChshBell,
    /// Payoff along x at the constrained optimum angles.
    QuantumAdvantageCurve,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::ConstrainedDiscord,
        Scenario::ClassicalRestricted,
        Scenario::UnconstrainedDiscord,
        Scenario::ChshClassical,
        Scenario::ChshBell,
        Scenario::QuantumAdvantageCurve,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::ConstrainedDiscord => "constrained-discord",
            Scenario::ClassicalRestricted => "classical-restricted",
            Scenario::UnconstrainedDiscord => "unconstrained-discord",
            Scenario::ChshClassical => "chsh-classical",
            Scenario::ChshBell => "chsh-bell",
            Scenario::QuantumAdvantageCurve => "quantum-advantage-curve",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

impl Serialize for Scenario {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

const OPTIMAL_ANGLES: [f64; 4] = [FRAC_PI_2, 0.0, FRAC_PI_2, 0.0];

pub fn run_scenario(scenario: Scenario, settings: &MaximizeSettings) -> Result<OptimizationResult> {
    let mut result = match scenario {
        Scenario::ConstrainedDiscord => {
            maximize(&ModifiedGamePayoff, &BoxConstraints::restricted_angles(), settings)?
        }
        Scenario::ClassicalRestricted => maximize(
            &ModifiedGamePayoff,
            &BoxConstraints::restricted_angles().with_frozen_x(0.0),
            settings,
        )?,
        Scenario::UnconstrainedDiscord => {
            maximize(&ModifiedGamePayoff, &BoxConstraints::unrestricted(), settings)?
        }
        Scenario::ChshClassical => deterministic_chsh(),
        Scenario::ChshBell => maximize(
            &BruteForcePayoff(GameSpec::chsh_bell()),
            &BoxConstraints::unrestricted().with_frozen_x(0.0),
            settings,
        )?,
        Scenario::QuantumAdvantageCurve => maximize(
            &ModifiedGamePayoff,
            &BoxConstraints::restricted_angles().with_frozen_angles(OPTIMAL_ANGLES),
            settings,
        )?,
    };
    result.scenario = Some(scenario);
    Ok(result)
}

pub fn run_scenario_named(name: &str, settings: &MaximizeSettings) -> Result<OptimizationResult> {
    run_scenario(name.parse()?, settings)
}

/// Enumerates the 16 deterministic strategies. On `|↑↑⟩`, θ = 0 always
/// yields spin up and θ = π always yields spin down, so `{0, π}⁴` covers
/// every outcome assignment.
fn deterministic_chsh() -> OptimizationResult {
    let spec = GameSpec::chsh_discorded();
    let mut candidates = Vec::with_capacity(16);
    for mask in 0..16u32 {
        let angle = |bit: u32| if mask & (1 << (3 - bit)) != 0 { PI } else { 0.0 };
        let profile = StrategyProfile::new(angle(0), angle(1), angle(2), angle(3), 0.0);
        candidates.push(Candidate {
            profile,
            value: expected_payoff_bruteforce(&spec, &profile),
        });
    }
    // masks ascend lexicographically, so the first maximum wins ties
    let best = candidates
        .iter()
        .fold(candidates[0], |acc, c| if c.value > acc.value { *c } else { acc });
    OptimizationResult {
        scenario: None,
        argmax: best.profile,
        value: best.value,
        evaluations: candidates.len(),
        grid_best: best.value,
        candidates,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdvantageRow {
    pub x: f64,
    pub f: f64,
    pub advantage: bool,
}

/// Payoff along x at angles `(π/2, 0, π/2, 0)`, flagging rows above the
/// restricted classical bound.
pub fn advantage_region(samples: usize) -> Result<Vec<AdvantageRow>> {
    if samples < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {samples}")));
    }
    let [a, ap, b, bp] = OPTIMAL_ANGLES;
    Ok((0..samples)
        .map(|i| {
            let x = TAU * i as f64 / samples as f64;
            let f = f_closed_form(&StrategyProfile::new(a, ap, b, bp, x));
            AdvantageRow {
                x,
                f,
                advantage: f > CLASSICAL_RESTRICTED_BOUND + ADVANTAGE_MARGIN,
            }
        })
        .collect())
}
