use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use discord_game::discord::{discord_a, discord_b, SearchSettings};
use discord_game::game::{
    decompose, expected_payoff_bruteforce, f_classical, f_closed_form, f_quantum, kappa, Kappa,
    Player,
};
use discord_game::hessian::{finite_difference_hessian, payoff_hessian, DEFAULT_STEP};
use discord_game::optimize::ModifiedGamePayoff;
use discord_game::quantum::discorded_state;
use discord_game::{GameSpec, StrategyProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_profile(rng: &mut ChaCha8Rng) -> StrategyProfile {
    StrategyProfile::new(
        rng.gen_range(0.0..TAU),
        rng.gen_range(0.0..TAU),
        rng.gen_range(0.0..TAU),
        rng.gen_range(0.0..TAU),
        rng.gen_range(0.0..TAU),
    )
}

#[test]
fn closed_form_matches_born_rule() {
    let spec = GameSpec::modified_discorded();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..2000 {
        let p = random_profile(&mut rng);
        worst = worst.max((f_closed_form(&p) - expected_payoff_bruteforce(&spec, &p)).abs());
    }
    assert!(worst < 1e-10, "max deviation {worst:e}");
}

#[test]
fn players_share_the_payoff() {
    let spec = GameSpec::modified_discorded();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let p = random_profile(&mut rng);
        let a = spec.expected_payoff(Player::Alice, &p);
        let b = spec.expected_payoff(Player::Bob, &p);
        assert_eq!(a, b);
    }
}

#[test]
fn quantum_part_vanishes_on_commuting_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let p = random_profile(&mut rng);
        for x in [0.0, PI] {
            let q = p.with_x(x);
            assert!(f_quantum(&q).abs() < 1e-15);
            assert!((f_closed_form(&q) - f_classical(&q)).abs() < 1e-15);
        }
    }
}

#[test]
fn decomposition_is_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..1000 {
        let p = random_profile(&mut rng);
        let d = decompose(&p);
        assert!((d.total - d.classical - d.quantum).abs() < 1e-12);
        match kappa(&p) {
            Kappa::Finite(k) => assert_eq!(k > 1.0, d.quantum > d.classical),
            Kappa::Infinite => assert!(d.classical.abs() <= 1e-12 && d.quantum > 0.0),
            Kappa::Undefined => {}
        }
    }
}

#[test]
fn chsh_bell_brute_force_at_tsirelson_angles() {
    let spec = GameSpec::chsh_bell();
    let p = StrategyProfile::new(0.0, FRAC_PI_2, FRAC_PI_4, 7.0 * FRAC_PI_4, 0.0);
    let v = expected_payoff_bruteforce(&spec, &p);
    assert!((v - (2.0 + 2f64.sqrt()) / 4.0).abs() < 1e-12);
}

// Frozen from an independent dense-grid + Nelder-Mead evaluation of D_A(ρ(x)).
const DISCORD_GOLDEN: [(f64, f64); 3] = [
    (FRAC_PI_4, 0.04245583173460557),
    (FRAC_PI_2, 0.09993575274935018),
    (3.0 * FRAC_PI_4, 0.07826178749170645),
];

#[test]
fn discord_golden_values() {
    let search = SearchSettings::default();
    for (x, expected) in DISCORD_GOLDEN {
        let d = discord_a(&discorded_state(x), &search).value;
        assert!((d - expected).abs() < 1e-8, "x = {x}: {d} vs {expected}");
    }
    let peak_x = TAU * 58.0 / 201.0;
    let d = discord_a(&discorded_state(peak_x), &search).value;
    assert!((d - 0.10443095863548624).abs() < 1e-8);
}

#[test]
fn discord_of_symmetric_state_is_side_independent() {
    // ρ(x) is invariant under swapping the qubits
    let search = SearchSettings::default();
    for x in [0.4, 1.3, 2.2] {
        let rho = discorded_state(x);
        let a = discord_a(&rho, &search).value;
        let b = discord_b(&rho, &search).value;
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn hessian_trace_relation_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..100 {
        let p = random_profile(&mut rng);
        let h = payoff_hessian(&p, DEFAULT_STEP, false).unwrap();
        assert!(h.residual < 1e-5);
        assert!(h.eigenvalue_residual() < 1e-5);
        assert!((h.trace - h.eigenvalue_sum).abs() < 1e-9);
    }
}

#[test]
fn hessian_error_shrinks_quadratically() {
    let p = StrategyProfile::new(0.3, 1.1, 2.0, 0.7, 1.9);
    let exact = -2.0 * f_closed_form(&p);
    let err = |h: f64| {
        (finite_difference_hessian(&ModifiedGamePayoff, &p, h, false).unwrap().trace - exact).abs()
    };
    let (e1, e2, e3) = (err(0.1), err(0.05), err(0.025));
    for ratio in [e1 / e2, e2 / e3] {
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }
}
