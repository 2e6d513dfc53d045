//! Bayesian CHSH-type games: payoff tables, priors, the Born-rule expected
//! payoff, and the closed-form payoff of the modified game on `ρ(x)` split
//! into classical and quantum parts.
//!
//! All detector settings in the game lie in the x–z plane (φ = 0).

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qmath::Mat2;
use crate::quantum::{
    bell_state, born_probability, discorded_state, projector, wrap_angle, DetectorSetting, Spin,
    TwoQubitState,
};

/// Values of `f_Cl` and `f_Q` within this distance of zero count as zero
/// when classifying κ.
pub const KAPPA_ZERO_TOL: f64 = 1e-12;
pub const PRIOR_TOL: f64 = 1e-12;

/// Which of the two settings a player was told to use (bit 0 or bit 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Input {
    Unprimed,
    Primed,
}

impl Input {
    pub const BOTH: [Input; 2] = [Input::Unprimed, Input::Primed];

    fn index(self) -> usize {
        match self {
            Input::Unprimed => 0,
            Input::Primed => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    Alice,
    Bob,
}

/// Payoff `u^{α,β}_{σ,σ'}` for one player.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffTable {
    entries: [[[[f64; 2]; 2]; 2]; 2],
}

impl PayoffTable {
    /// `entries[α][β][σ][σ']`, index 0 = unprimed / spin up.
    pub fn new(entries: [[[[f64; 2]; 2]; 2]; 2]) -> Result<Self> {
        if entries.iter().flatten().flatten().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPayoff("non-finite entry".into()));
        }
        Ok(Self { entries })
    }

    pub fn from_fn(mut f: impl FnMut(Input, Input, Spin, Spin) -> f64) -> Result<Self> {
        let mut entries = [[[[0.0; 2]; 2]; 2]; 2];
        for alpha in Input::BOTH {
            for beta in Input::BOTH {
                for s in Spin::BOTH {
                    for t in Spin::BOTH {
                        entries[alpha.index()][beta.index()][s.index()][t.index()] =
                            f(alpha, beta, s, t);
                    }
                }
            }
        }
        Self::new(entries)
    }

    /// Traditional CHSH: win (1) on matching spins, except on (a′, b′) where
    /// anti-matching wins.
    pub fn chsh() -> Self {
        Self::from_fn(|alpha, beta, s, t| {
            let both_primed = alpha == Input::Primed && beta == Input::Primed;
            let matching = s == t;
            if matching != both_primed {
                1.0
            } else {
                0.0
            }
        })
        .expect("finite table")
    }

    /// Modified game: −1 / +1 for matching / anti-matching spins, with the
    /// signs flipped on (a′, b′).
    pub fn modified() -> Self {
        Self::from_fn(|alpha, beta, s, t| {
            let both_primed = alpha == Input::Primed && beta == Input::Primed;
            let matching = s == t;
            if matching != both_primed {
                -1.0
            } else {
                1.0
            }
        })
        .expect("finite table")
    }

    pub fn get(&self, alpha: Input, beta: Input, s: Spin, t: Spin) -> f64 {
        self.entries[alpha.index()][beta.index()][s.index()][t.index()]
    }
}

/// Belief `P(α, β)` over which sub-game is played.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prior {
    weights: [[f64; 2]; 2],
}

impl Prior {
    pub fn new(weights: [[f64; 2]; 2]) -> Result<Self> {
        let flat = weights.iter().flatten();
        if flat.clone().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidPrior("weights must be finite and non-negative".into()));
        }
        let total: f64 = flat.sum();
        if (total - 1.0).abs() > PRIOR_TOL {
            return Err(Error::InvalidPrior(format!("weights sum to {total}")));
        }
        Ok(Self { weights })
    }

    pub fn uniform() -> Self {
        Self {
            weights: [[0.25; 2]; 2],
        }
    }

    pub fn weight(&self, alpha: Input, beta: Input) -> f64 {
        self.weights[alpha.index()][beta.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateFamily {
    /// `ρ(x)`, parameterized by the profile's x.
    Discorded,
    Bell,
    Custom(TwoQubitState),
}

impl StateFamily {
    pub fn state(&self, x: f64) -> TwoQubitState {
        match self {
            StateFamily::Discorded => discorded_state(x),
            StateFamily::Bell => bell_state(),
            StateFamily::Custom(rho) => *rho,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameSpec {
    pub payoff_a: PayoffTable,
    pub payoff_b: PayoffTable,
    pub prior_a: Prior,
    pub prior_b: Prior,
    pub state_family: StateFamily,
}

impl GameSpec {
    /// Cooperative game: both players share one table and one prior.
    pub fn cooperative(table: PayoffTable, prior: Prior, state_family: StateFamily) -> Self {
        Self {
            payoff_a: table,
            payoff_b: table,
            prior_a: prior,
            prior_b: prior,
            state_family,
        }
    }

    pub fn modified_discorded() -> Self {
        Self::cooperative(PayoffTable::modified(), Prior::uniform(), StateFamily::Discorded)
    }

    pub fn chsh_bell() -> Self {
        Self::cooperative(PayoffTable::chsh(), Prior::uniform(), StateFamily::Bell)
    }

    /// CHSH played on `ρ(x)`; at x = 0 this is the product state `|↑↑⟩`.
    pub fn chsh_discorded() -> Self {
        Self::cooperative(PayoffTable::chsh(), Prior::uniform(), StateFamily::Discorded)
    }

    pub fn expected_payoff(&self, player: Player, profile: &StrategyProfile) -> f64 {
        let (table, prior) = match player {
            Player::Alice => (&self.payoff_a, &self.prior_a),
            Player::Bob => (&self.payoff_b, &self.prior_b),
        };
        let rho = self.state_family.state(profile.x());
        let alice = profile.alice_settings().map(|a| [projector(Spin::Up, &a), projector(Spin::Down, &a)]);
        let bob = profile.bob_settings().map(|b| [projector(Spin::Up, &b), projector(Spin::Down, &b)]);
        let mut total = 0.0;
        for alpha in Input::BOTH {
            for beta in Input::BOTH {
                let weight = prior.weight(alpha, beta);
                let pa: &[Mat2; 2] = &alice[alpha.index()];
                let pb: &[Mat2; 2] = &bob[beta.index()];
                for s in Spin::BOTH {
                    for t in Spin::BOTH {
                        let payoff = table.get(alpha, beta, s, t);
                        total += payoff * weight * born_probability(&pa[s.index()], &pb[t.index()], &rho);
                    }
                }
            }
        }
        total
    }
}

/// `u_A = Σ u^{α,β}_{σ,σ'} P(α,β) P(σ,σ'|α,β)` summed over all 16 terms.
pub fn expected_payoff_bruteforce(spec: &GameSpec, profile: &StrategyProfile) -> f64 {
    spec.expected_payoff(Player::Alice, profile)
}

/// Detector angles `(θ_a, θ_a′, θ_b, θ_b′)` and state parameter `x`, all
/// stored in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrategyProfile {
    theta_a: f64,
    theta_a_prime: f64,
    theta_b: f64,
    theta_b_prime: f64,
    x: f64,
}

impl StrategyProfile {
    pub fn new(theta_a: f64, theta_a_prime: f64, theta_b: f64, theta_b_prime: f64, x: f64) -> Self {
        Self {
            theta_a: wrap_angle(theta_a),
            theta_a_prime: wrap_angle(theta_a_prime),
            theta_b: wrap_angle(theta_b),
            theta_b_prime: wrap_angle(theta_b_prime),
            x: wrap_angle(x),
        }
    }

    pub fn from_array(c: [f64; 5]) -> Self {
        Self::new(c[0], c[1], c[2], c[3], c[4])
    }

    pub fn to_array(&self) -> [f64; 5] {
        [self.theta_a, self.theta_a_prime, self.theta_b, self.theta_b_prime, self.x]
    }

    pub fn angles(&self) -> [f64; 4] {
        [self.theta_a, self.theta_a_prime, self.theta_b, self.theta_b_prime]
    }

    /// θ_a = θ_b = π/2, θ_a′ = θ_b′ = 0, x = 7π/8.
    pub fn constrained_optimum() -> Self {
        use std::f64::consts::{FRAC_PI_2, PI};
        Self::new(FRAC_PI_2, 0.0, FRAC_PI_2, 0.0, 7.0 * PI / 8.0)
    }

    pub fn theta_a(&self) -> f64 {
        self.theta_a
    }
    pub fn theta_a_prime(&self) -> f64 {
        self.theta_a_prime
    }
    pub fn theta_b(&self) -> f64 {
        self.theta_b
    }
    pub fn theta_b_prime(&self) -> f64 {
        self.theta_b_prime
    }
    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn with_x(&self, x: f64) -> Self {
        Self { x: wrap_angle(x), ..*self }
    }

    /// `[a, a′]`
    pub fn alice_settings(&self) -> [DetectorSetting; 2] {
        [
            DetectorSetting::in_xz_plane(self.theta_a),
            DetectorSetting::in_xz_plane(self.theta_a_prime),
        ]
    }

    /// `[b, b′]`
    pub fn bob_settings(&self) -> [DetectorSetting; 2] {
        [
            DetectorSetting::in_xz_plane(self.theta_b),
            DetectorSetting::in_xz_plane(self.theta_b_prime),
        ]
    }
}

impl fmt::Display for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(θa={}, θa'={}, θb={}, θb'={}, x={})",
            self.theta_a, self.theta_a_prime, self.theta_b, self.theta_b_prime, self.x
        )
    }
}

/// Angle-only pieces of the closed form. With them the payoff at any x is
/// `−(1/16)[2 C⁻ + C⁺ (1 + cos 2x) + S⁺ sin 2x]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormTerms {
    /// `cos θ⁻_{a,b} + cos θ⁻_{a′,b} + cos θ⁻_{a,b′} − cos θ⁻_{a′,b′}`
    pub cos_diff: f64,
    /// Same signed sum of `cos θ⁺`.
    pub cos_sum: f64,
    /// Same signed sum of `sin θ⁺`.
    pub sin_sum: f64,
}

impl ClosedFormTerms {
    pub fn new(angles: [f64; 4]) -> Self {
        let [ta, tap, tb, tbp] = angles;
        let pairs = [(ta, tb, 1.0), (tap, tb, 1.0), (ta, tbp, 1.0), (tap, tbp, -1.0)];
        let mut terms = Self {
            cos_diff: 0.0,
            cos_sum: 0.0,
            sin_sum: 0.0,
        };
        for (alpha, beta, sign) in pairs {
            let (s, c) = (alpha + beta).sin_cos();
            terms.cos_diff += sign * (alpha - beta).cos();
            terms.cos_sum += sign * c;
            terms.sin_sum += sign * s;
        }
        terms
    }

    /// Payoff given precomputed `cos 2x` and `sin 2x`.
    #[inline]
    pub fn payoff(&self, cos_2x: f64, sin_2x: f64) -> f64 {
        -(2.0 * self.cos_diff + self.cos_sum * (1.0 + cos_2x) + self.sin_sum * sin_2x) / 16.0
    }
}

/// Closed-form expected payoff of the modified game on `ρ(x)` with a uniform
/// prior: twelve cosine terms in `θ⁻ = θ_α − θ_β` and `θ⁺ = θ_α + θ_β`.
pub fn f_closed_form(p: &StrategyProfile) -> f64 {
    let [ta, tap, tb, tbp] = p.angles();
    let two_x = 2.0 * p.x();
    let pairs = [(ta, tb, 1.0), (tap, tb, 1.0), (ta, tbp, 1.0), (tap, tbp, -1.0)];
    let bracket: f64 = pairs
        .iter()
        .map(|&(alpha, beta, sign)| {
            let plus = alpha + beta;
            sign * (2.0 * (alpha - beta).cos() + plus.cos() + (plus - two_x).cos())
        })
        .sum();
    -bracket / 16.0
}

/// `f_Cl = −¼[cos θ_a (cos θ_b + cos θ_b′) + cos θ_a′ (cos θ_b − cos θ_b′)]`;
/// x is ignored.
pub fn f_classical(p: &StrategyProfile) -> f64 {
    let [ta, tap, tb, tbp] = p.angles();
    let (cb, cbp) = (tb.cos(), tbp.cos());
    -0.25 * (ta.cos() * (cb + cbp) + tap.cos() * (cb - cbp))
}

/// `f_Q = −(sin x / 8)[sin(θ⁺_{a,b} − x) + sin(θ⁺_{a′,b} − x) + sin(θ⁺_{a,b′} − x) − sin(θ⁺_{a′,b′} − x)]`
pub fn f_quantum(p: &StrategyProfile) -> f64 {
    let [ta, tap, tb, tbp] = p.angles();
    let x = p.x();
    let bracket = (ta + tb - x).sin() + (tap + tb - x).sin() + (ta + tbp - x).sin()
        - (tap + tbp - x).sin();
    -x.sin() / 8.0 * bracket
}

/// `|f_Q / f_Cl|`, defined only for `f_Q ≥ 0` and `f_Cl ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kappa {
    Finite(f64),
    Infinite,
    Undefined,
}

impl Kappa {
    pub fn from_parts(classical: f64, quantum: f64) -> Self {
        let snap = |v: f64| if v.abs() <= KAPPA_ZERO_TOL { 0.0 } else { v };
        let (c, q) = (snap(classical), snap(quantum));
        if c < 0.0 || q < 0.0 {
            return Kappa::Undefined;
        }
        if c == 0.0 {
            return if q > 0.0 { Kappa::Infinite } else { Kappa::Undefined };
        }
        Kappa::Finite((q / c).abs())
    }

    /// Whether the quantum part strictly dominates; `None` when undefined.
    pub fn quantum_dominates(&self) -> Option<bool> {
        match *self {
            Kappa::Finite(k) => Some(k > 1.0),
            Kappa::Infinite => Some(true),
            Kappa::Undefined => None,
        }
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::Finite(k) => write!(f, "{k}"),
            Kappa::Infinite => f.write_str("inf"),
            Kappa::Undefined => f.write_str("undefined"),
        }
    }
}

impl Serialize for Kappa {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Kappa::Finite(k) => serializer.serialize_f64(*k),
            Kappa::Infinite => serializer.serialize_str("inf"),
            Kappa::Undefined => serializer.serialize_str("undefined"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecomposedPayoff {
    pub total: f64,
    pub classical: f64,
    pub quantum: f64,
    pub kappa: Kappa,
}

pub fn kappa(p: &StrategyProfile) -> Kappa {
    Kappa::from_parts(f_classical(p), f_quantum(p))
}

pub fn decompose(p: &StrategyProfile) -> DecomposedPayoff {
    let classical = f_classical(p);
    let quantum = f_quantum(p);
    DecomposedPayoff {
        total: f_closed_form(p),
        classical,
        quantum,
        kappa: Kappa::from_parts(classical, quantum),
    }
}
