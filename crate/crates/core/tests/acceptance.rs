use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::process::Command;
use std::time::{Duration, Instant};

use discord_game::discord::{discord_a, discord_curve, SearchSettings};
use discord_game::game::{decompose, expected_payoff_bruteforce, f_classical, f_closed_form, f_quantum};
use discord_game::hessian::{payoff_hessian, DEFAULT_STEP};
use discord_game::optimize::{advantage_region, run_scenario, DEFAULT_ADVANTAGE_SAMPLES};
use discord_game::qmath::Matrix;
use discord_game::quantum::{discorded_state, joint_probability, projector, QubitState};
use discord_game::{DetectorSetting, GameSpec, MaximizeSettings, Scenario, Spin, StrategyProfile, TwoQubitState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn random_profile(rng: &mut ChaCha8Rng) -> StrategyProfile {
    let mut c = [0.0; 5];
    for v in &mut c {
        *v = rng.gen_range(0.0..TAU);
    }
    StrategyProfile::from_array(c)
}

fn ac1() -> Check {
    let r = run_scenario(Scenario::ConstrainedDiscord, &MaximizeSettings::default())
        .map_err(|e| e.to_string())?;
    ensure((r.value - 0.30178).abs() <= 5e-5, format!("value {}", r.value))?;
    let target = [FRAC_PI_2, 0.0, FRAC_PI_2, 0.0];
    for (got, want) in r.argmax.angles().iter().zip(target) {
        ensure(circular_distance(*got, want) <= 1e-3, format!("argmax {}", r.argmax))?;
    }
    let x = r.argmax.x();
    let dx = circular_distance(x, 7.0 * PI / 8.0).min(circular_distance(x, 15.0 * PI / 8.0));
    ensure(dx <= 1e-3, format!("x {x}"))?;
    Ok(format!("f* = {:.8}, argmax {}", r.value, r.argmax))
}

fn ac2() -> Check {
    let r = run_scenario(Scenario::ClassicalRestricted, &MaximizeSettings::default())
        .map_err(|e| e.to_string())?;
    ensure((r.value - 0.25).abs() <= 1e-9, format!("value {}", r.value))?;
    Ok(format!("value = {:.12}", r.value))
}

fn ac3() -> Check {
    let r = run_scenario(Scenario::UnconstrainedDiscord, &MaximizeSettings::default())
        .map_err(|e| e.to_string())?;
    ensure((r.value - 0.5).abs() <= 1e-6, format!("value {}", r.value))?;
    let highest = r.candidates.iter().map(|c| c.value).fold(r.grid_best.max(r.value), f64::max);
    ensure(highest <= 0.5 + 1e-9, format!("exceeded ceiling: {highest}"))?;
    Ok(format!("value = {:.12}, highest seen {:.12}", r.value, highest))
}

fn ac4() -> Check {
    let settings = MaximizeSettings::default();
    let classical = run_scenario(Scenario::ChshClassical, &settings).map_err(|e| e.to_string())?;
    ensure(classical.value == 0.75, format!("classical {}", classical.value))?;
    let bell = run_scenario(Scenario::ChshBell, &settings).map_err(|e| e.to_string())?;
    let tsirelson = (2.0 + 2f64.sqrt()) / 4.0;
    ensure((bell.value - tsirelson).abs() <= 1e-6, format!("bell {}", bell.value))?;
    Ok(format!("classical = {}, bell = {:.12}", classical.value, bell.value))
}

fn ac5() -> Check {
    let d = decompose(&StrategyProfile::constrained_optimum());
    let sqrt2 = 2f64.sqrt();
    ensure((d.classical - 0.25).abs() <= 1e-12, format!("f_Cl {}", d.classical))?;
    ensure((d.quantum - (sqrt2 - 1.0) / 8.0).abs() <= 1e-9, format!("f_Q {}", d.quantum))?;
    ensure((d.total - (2.0 + 2.0 * sqrt2) / 16.0).abs() <= 1e-9, format!("f {}", d.total))?;
    Ok(format!("f_Cl = {:.12}, f_Q = {:.12}, f = {:.12}", d.classical, d.quantum, d.total))
}

fn ac6() -> Check {
    let spec = GameSpec::modified_discorded();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut oracle, mut split) = (0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let p = random_profile(&mut rng);
        let f = f_closed_form(&p);
        oracle = oracle.max((f - expected_payoff_bruteforce(&spec, &p)).abs());
        split = split.max((f - (f_classical(&p) + f_quantum(&p))).abs());
    }
    ensure(oracle < 1e-10, format!("oracle deviation {oracle:e}"))?;
    ensure(split < 1e-12, format!("split deviation {split:e}"))?;
    Ok(format!("max |f - brute| = {oracle:.2e}, max |f - (f_Cl + f_Q)| = {split:.2e}"))
}

// Frozen after first computation; matches an independent oracle.
const DISCORD_PEAK: f64 = 0.10443095863548635;
const DISCORD_PEAK_INDEX: usize = 58;

fn ac7() -> Check {
    let search = SearchSettings::default();
    let curve = discord_curve(201, &search).map_err(|e| e.to_string())?;
    let at = |x: f64| discord_a(&discorded_state(x), &search).value;
    let (d0, dpi) = (curve[0].discord_nats, at(PI));
    ensure(d0 < 1e-6 && dpi < 1e-6, format!("D(0) = {d0}, D(π) = {dpi}"))?;
    for x in [FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4] {
        let d = at(x);
        ensure(d > 1e-3, format!("D({x}) = {d}"))?;
    }
    ensure(curve.iter().all(|p| p.discord_nats >= 0.0), "negative discord")?;
    let asym = (1..curve.len())
        .map(|i| (curve[i].discord_nats - curve[curve.len() - i].discord_nats).abs())
        .fold(0.0, f64::max);
    ensure(asym < 1e-6, format!("asymmetry {asym:e}"))?;
    let (peak_i, peak) = curve
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |best, (i, p)| if p.discord_nats > best.1 { (i, p.discord_nats) } else { best });
    ensure(peak_i == DISCORD_PEAK_INDEX, format!("peak at row {peak_i}"))?;
    ensure((peak - DISCORD_PEAK).abs() < 1e-8, format!("peak {peak}"))?;
    Ok(format!(
        "D(0) = {d0:.1e}, D(π) = {dpi:.1e}, asymmetry {asym:.1e}, peak {peak:.10} at x = {:.6}",
        curve[peak_i].x
    ))
}

fn ac8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut points = vec![StrategyProfile::constrained_optimum(), StrategyProfile::new(0.0, 0.0, 0.0, 0.0, 0.0)];
    points.extend((0..100).map(|_| random_profile(&mut rng)));
    let (mut trace_res, mut eig_res) = (0.0f64, 0.0f64);
    for p in &points {
        let h = payoff_hessian(p, DEFAULT_STEP, false).map_err(|e| e.to_string())?;
        trace_res = trace_res.max(h.residual);
        eig_res = eig_res.max(h.eigenvalue_residual());
    }
    ensure(trace_res < 1e-5, format!("|tr H + 2f| = {trace_res:e}"))?;
    ensure(eig_res < 1e-5, format!("|f + Σφ/2| = {eig_res:e}"))?;
    Ok(format!("{} points, max |tr H + 2f| = {trace_res:.1e}, max |f + Σφ/2| = {eig_res:.1e}", points.len()))
}

fn ac9() -> Check {
    let n = DEFAULT_ADVANTAGE_SAMPLES;
    let rows = advantage_region(n).map_err(|e| e.to_string())?;
    let index = |x: f64| (x / TAU * n as f64).round() as usize % n;
    for centre in [7.0 * PI / 8.0, 15.0 * PI / 8.0] {
        let i = index(centre);
        ensure((rows[i].x - centre).abs() < 1e-12, format!("no row at {centre}"))?;
        for j in i - 2..=i + 2 {
            ensure(rows[j].advantage, format!("row {j} at x = {} not flagged", rows[j].x))?;
        }
    }
    for x in [0.0, PI] {
        let r = rows[index(x)];
        ensure(!r.advantage, format!("flagged at x = {}", r.x))?;
    }
    let flagged = rows.iter().filter(|r| r.advantage).count();
    Ok(format!("{flagged}/{n} rows flagged, none at 0 or π"))
}

fn ac10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let axis = |rng: &mut ChaCha8Rng| DetectorSetting::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..TAU));
    for _ in 0..200 {
        let n = axis(&mut rng);
        let (up, down) = (projector(Spin::Up, &n), projector(Spin::Down, &n));
        ensure((up + down).max_abs_diff(&Matrix::identity()) < 1e-14, "completeness")?;
        ensure(up.matmul(&up).max_abs_diff(&up) < 1e-14, "idempotence")?;
        let (a, b) = (axis(&mut rng), axis(&mut rng));
        let rho = discorded_state(rng.gen_range(0.0..TAU));
        let total: f64 = Spin::BOTH
            .iter()
            .flat_map(|&s| Spin::BOTH.map(|t| joint_probability(s, t, &a, &b, &rho)))
            .sum();
        ensure((total - 1.0).abs() < 1e-13, format!("normalization {total}"))?;
        let spectrum = rho.spectrum();
        ensure(spectrum.min() > -1e-12 && (spectrum.sum() - 1.0).abs() < 1e-12, "density invariants")?;
        ensure(rho.matrix().hermitian_deviation() < 1e-15, "hermiticity")?;
    }
    let search = SearchSettings::default();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let qubit = |rng: &mut ChaCha8Rng| {
            let v = axis(rng).bloch_vector();
            let r = rng.gen_range(0.0..=1.0);
            QubitState::from_bloch([r * v[0], r * v[1], r * v[2]]).unwrap()
        };
        let (a, b) = (qubit(&mut rng), qubit(&mut rng));
        worst = worst.max(discord_a(&TwoQubitState::product(&a, &b), &search).value);
    }
    ensure(worst < 1e-6, format!("product-state discord {worst:e}"))?;

    let bin = env!("CARGO_BIN_EXE_discord-game");
    let commands: [&[&str]; 7] = [
        &["discord-curve"],
        &["advantage-curve"],
        &["optimize", "--scenario", "chsh-bell"],
        &["optimize", "--scenario", "classical-restricted", "--format", "csv"],
        &["payoff", "--theta-a", "1.5707963", "--theta-ap", "0", "--theta-b", "1.5707963", "--theta-bp", "0", "--x", "2.7488936"],
        &["hessian", "--theta-a", "0.4", "--theta-ap", "1.1", "--theta-b", "2.5", "--theta-bp", "5.9", "--x", "0.8"],
        &["hessian", "--include-x", "--format", "csv", "--theta-a", "0.4", "--theta-ap", "1.1", "--theta-b", "2.5", "--theta-bp", "5.9", "--x", "0.8"],
    ];
    for args in commands {
        let once = || Command::new(bin).args(args).output().map_err(|e| e.to_string());
        let (first, second) = (once()?, once()?);
        ensure(first.status.success(), format!("{args:?} failed"))?;
        ensure(first.stdout == second.stdout, format!("{args:?} not reproducible"))?;
    }
    Ok(format!("projector/probability/state invariants, product discord max {worst:.1e}, {} CLI reruns identical", commands.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, &str, Duration, fn() -> Check); 10] = [
        ("AC1", "constrained optimum", Duration::from_secs(10), ac1),
        ("AC2", "classical restricted bound", Duration::from_secs(5), ac2),
        ("AC3", "unconstrained ceiling", Duration::from_secs(30), ac3),
        ("AC4", "CHSH baselines", Duration::from_secs(10), ac4),
        ("AC5", "decomposition numbers", Duration::MAX, ac5),
        ("AC6", "oracle equivalence", Duration::from_secs(60), ac6),
        ("AC7", "discord curve shape", Duration::from_secs(120), ac7),
        ("AC8", "Hessian relations", Duration::from_secs(10), ac8),
        ("AC9", "advantage region", Duration::from_secs(5), ac9),
        ("AC10", "property suites", Duration::MAX, ac10),
    ];
    let mut failures = Vec::new();
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match &outcome {
            Ok(detail) => println!("[PASS] {id} {name} ({elapsed:.2?}): {detail}"),
            Err(reason) => {
                println!("[FAIL] {id} {name} ({elapsed:.2?}): {reason}");
                failures.push(id);
            }
        }
    }
    assert!(failures.is_empty(), "failed: {failures:?}");
}
