//! Quantum discord and a modified CHSH Bayesian game played on a mixed
//! separable two-qubit state.
//!
//! Modules, bottom up:
//! - [`qmath`]: 2×2 / 4×4 complex matrices, Kronecker products, partial
//!   traces, Hermitian eigenvalues, von Neumann entropy.
//! - [`quantum`]: projectors, the states `ρ(x)` and the Bell state, Born-rule
//!   joint probabilities.
//! - [`discord`]: mutual information, conditional entropy, discord `D_A`.
//! - [`game`]: payoff tables, priors, brute-force and closed-form payoffs,
//!   the classical/quantum split and κ.
//! - [`optimize`]: grid + simplex maximization and the named scenarios.
//! - [`hessian`]: finite-difference Hessians and the trace relation.
//! - [`cli`]: the `discord-game` command line.

pub mod cli;
pub mod discord;
pub mod error;
pub mod game;
pub mod hessian;
pub mod optimize;
pub mod qmath;
pub mod quantum;
pub mod simplex;

pub use error::{Error, Result};
pub use game::{DecomposedPayoff, GameSpec, Kappa, StrategyProfile};
pub use optimize::{BoxConstraints, MaximizeSettings, OptimizationResult, Scenario};
pub use quantum::{DensityMatrix, DetectorSetting, Spin, TwoQubitState};
