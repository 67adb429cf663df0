//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured figures (visible with `--nocapture`).
//!
//! The load sweep (nine traffic scales × four methods × twenty seeds) is
//! computed once and shared across the criteria that read it.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hetnet_cs::channel::{
    breakpoint_distance_m, los_probability, pathloss_los_db, pathloss_nlos_db, sample_fading,
    ChannelConstants, LinkGeometry, ShadowFading,
};
use hetnet_cs::experiments::{run_sweep, Method, SweepSpec, SweepTable, SweepVariable};
use hetnet_cs::optimizer::{proposed_cs, solve_bruteforce, solve_exact, SwitchInstance, SwitchItem};
use hetnet_cs::scenario::{build_default_scenario, ChannelSnapshot, ScenarioConfig};

const ALPHA_GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
const PMIN_GRID: [f64; 8] = [-90.0, -85.0, -80.0, -75.0, -70.0, -65.0, -60.0, -55.0];
const SEED_COUNT: u64 = 20;
/// Fixed seed for the threshold sweep.
const PMIN_SWEEP_SEED: u64 = 7;

/// Objective-equality tolerance for solver comparisons, W.
const SOLVER_TOL_W: f64 = 1e-9;

fn fig2() -> &'static (SweepTable, Duration) {
    static FIG2: OnceLock<(SweepTable, Duration)> = OnceLock::new();
    FIG2.get_or_init(|| {
        let spec = SweepSpec {
            variable: SweepVariable::Alpha,
            grid: ALPHA_GRID.to_vec(),
            methods: Method::ALL.to_vec(),
            seeds: (0..SEED_COUNT).collect(),
            base: ScenarioConfig::default(),
        };
        let start = Instant::now();
        let table = run_sweep(&spec).expect("load sweep runs");
        (table, start.elapsed())
    })
}

fn fig4() -> &'static SweepTable {
    static FIG4: OnceLock<SweepTable> = OnceLock::new();
    FIG4.get_or_init(|| {
        let base = ScenarioConfig { alpha: 0.5, ..Default::default() };
        let spec = SweepSpec {
            variable: SweepVariable::PMin,
            grid: PMIN_GRID.to_vec(),
            methods: Method::ALL.to_vec(),
            seeds: vec![PMIN_SWEEP_SEED],
            base,
        };
        run_sweep(&spec).expect("threshold sweep runs")
    })
}

fn random_instance(seed: u64, max_items: usize) -> SwitchInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_items);
    let items = (0..n)
        .map(|_| SwitchItem {
            saving_w: rng.gen_range(-5.0..50.0),
            weight: rng.gen_range(0.0..0.3),
            forced_on: rng.gen_bool(0.2),
        })
        .collect();
    SwitchInstance {
        items,
        capacity: rng.gen_range(0.0..1.0),
        base_power_w: rng.gen_range(500.0..3000.0),
    }
}

#[test]
fn criterion_1_solver_optimality() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for seed in 0..200u64 {
        let inst = random_instance(seed, 16);
        let exact = solve_exact(&inst).expect("solvable");
        let oracle = solve_bruteforce(&inst).expect("enumerable");
        let gap = (exact.total_power_w - oracle.total_power_w).abs();
        worst = worst.max(gap);
        assert!(
            gap <= SOLVER_TOL_W,
            "objective gap {gap:.3e} W on seed {seed} exceeds {SOLVER_TOL_W:.0e}"
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(30),
        "200 oracle comparisons took {elapsed:.2?}, budget 30 s"
    );
    println!(
        "criterion 1 (solver optimality): PASS — 200 instances (n ≤ 16), \
         worst objective gap {worst:.3e} W, {elapsed:.2?}"
    );
}

#[test]
fn criterion_2_load_sweep_savings_bands() {
    let (table, elapsed) = fig2();
    let low = table
        .mean_row(0.1, Method::Proposed)
        .expect("mean row at alpha 0.1")
        .savings_pct;
    let high = table
        .mean_row(0.9, Method::Proposed)
        .expect("mean row at alpha 0.9")
        .savings_pct;
    assert!(
        (20.0..=40.0).contains(&low),
        "mean savings at alpha 0.1 is {low:.2}%, outside [20%, 40%]"
    );
    assert!(
        (5.0..=25.0).contains(&high),
        "mean savings at alpha 0.9 is {high:.2}%, outside [5%, 25%]"
    );
    assert!(
        *elapsed < Duration::from_secs(120),
        "load sweep took {elapsed:.2?}, budget 2 min"
    );
    println!(
        "criterion 2 (savings bands): PASS — mean savings {low:.2}% at alpha 0.1 \
         (band 20..40), {high:.2}% at alpha 0.9 (band 5..25), sweep {elapsed:.2?}"
    );
}

#[test]
fn criterion_3_method_ordering() {
    let (table, _) = fig2();
    let mut checked = 0;
    for &alpha in &ALPHA_GRID {
        for seed in 0..SEED_COUNT {
            let power = |m: Method| {
                table
                    .seed_rows(alpha, m)
                    .into_iter()
                    .find(|r| r.seed == Some(seed))
                    .unwrap_or_else(|| panic!("row for {m} at alpha {alpha}, seed {seed}"))
                    .total_power_w
            };
            let (no_qos, proposed) = (power(Method::NoQos), power(Method::Proposed));
            let (all_on, sorting) = (power(Method::AllOn), power(Method::Sorting));
            assert!(
                no_qos <= proposed + SOLVER_TOL_W,
                "no-qos {no_qos} > proposed {proposed} at alpha {alpha}, seed {seed}"
            );
            assert!(
                proposed <= all_on + SOLVER_TOL_W,
                "proposed {proposed} > all-on {all_on} at alpha {alpha}, seed {seed}"
            );
            assert!(
                no_qos <= sorting + SOLVER_TOL_W,
                "no-qos {no_qos} > sorting {sorting} at alpha {alpha}, seed {seed}"
            );
            checked += 1;
        }
    }
    println!(
        "criterion 3 (method ordering): PASS — no-qos ≤ proposed ≤ all-on and \
         no-qos ≤ sorting over {checked} (alpha, seed) cells, zero violations"
    );
}

#[test]
fn criterion_4_served_traffic_with_qos() {
    let (table, _) = fig2();
    let mut strict_low_alpha = 0;
    for &alpha in &ALPHA_GRID {
        for seed in 0..SEED_COUNT {
            let row = |m: Method| {
                table
                    .seed_rows(alpha, m)
                    .into_iter()
                    .find(|r| r.seed == Some(seed))
                    .unwrap_or_else(|| panic!("row for {m} at alpha {alpha}, seed {seed}"))
            };
            let proposed = row(Method::Proposed);
            let no_qos = row(Method::NoQos);
            // Zero outage: the proposed method serves the offered traffic
            // exactly, bit for bit.
            assert_eq!(
                proposed.served_traffic_qos, proposed.offered_traffic,
                "proposed served != offered at alpha {alpha}, seed {seed}"
            );
            assert_eq!(proposed.outage_count, 0.0);
            assert!(
                no_qos.served_traffic_qos <= proposed.served_traffic_qos,
                "no-qos out-serves proposed at alpha {alpha}, seed {seed}"
            );
            if alpha <= 0.3 && no_qos.served_traffic_qos < proposed.served_traffic_qos {
                strict_low_alpha += 1;
            }
        }
    }
    assert!(
        strict_low_alpha > 0,
        "expected at least one low-load seed where ignoring QoS loses traffic"
    );
    println!(
        "criterion 4 (served traffic): PASS — proposed serves offered exactly on all \
         180 cells; no-qos strictly below on {strict_low_alpha}/60 low-load cells"
    );
}

#[test]
fn criterion_5_threshold_response() {
    let table = fig4();
    let power = |pmin: f64, m: Method| {
        table
            .seed_rows(pmin, m)
            .first()
            .unwrap_or_else(|| panic!("row for {m} at pmin {pmin}"))
            .total_power_w
    };

    // Only the proposed method responds to the threshold; it never relaxes.
    let mut prev = f64::NEG_INFINITY;
    for &pmin in &PMIN_GRID {
        let p = power(pmin, Method::Proposed);
        assert!(
            p >= prev - SOLVER_TOL_W,
            "proposed power decreased from {prev} to {p} at pmin {pmin}"
        );
        prev = prev.max(p);
    }
    for method in [Method::AllOn, Method::Sorting, Method::NoQos] {
        let reference = power(PMIN_GRID[0], method);
        for &pmin in &PMIN_GRID[1..] {
            assert_eq!(
                power(pmin, method),
                reference,
                "{method} power varies with the threshold"
            );
        }
    }

    let gap = (power(-90.0, Method::Proposed) - power(-90.0, Method::NoQos)).abs();
    assert!(
        gap <= SOLVER_TOL_W,
        "at -90 dBm proposed and no-qos differ by {gap:.3e} W"
    );
    let rise = power(-55.0, Method::Proposed) - power(-90.0, Method::Proposed);
    println!(
        "criterion 5 (threshold response): PASS — proposed non-decreasing over \
         -90..-55 dBm (rise {rise:.1} W), baselines constant, -90 dBm gap {gap:.1e} W"
    );
}

#[test]
fn criterion_6_feasibility() {
    let (load_table, _) = fig2();
    let threshold_table = fig4();
    let mut cells = 0;
    for row in load_table.rows.iter().chain(&threshold_table.rows) {
        assert!(
            row.lambda_m <= 1.0 + 1e-12,
            "macro overload {} for {} at {}={}, seed {:?}",
            row.lambda_m,
            row.method,
            row.variable,
            row.value,
            row.seed
        );
        if row.method == Method::Proposed {
            assert_eq!(
                row.outage_count, 0.0,
                "proposed outage at {}={}, seed {:?}",
                row.variable, row.value, row.seed
            );
        }
        cells += 1;
    }
    println!(
        "criterion 6 (feasibility): PASS — lambda_m ≤ 1 on {cells} rows; \
         proposed outage-free everywhere"
    );
}

#[test]
fn criterion_7_channel_units() {
    assert_eq!(los_probability(10.0).unwrap(), 1.0);

    let d_b = breakpoint_distance_m(25.0, 1.5, 1.0, 2.5, 299_792_458.0).unwrap();
    assert!(
        (d_b - 400.28).abs() <= 0.01,
        "breakpoint distance {d_b} not within 0.01 of 400.28"
    );

    let consts = ChannelConstants::default();
    for d in 10..=5000 {
        let geom = LinkGeometry::new(d as f64, 25.0, 1.5, 1.0).unwrap();
        let los = pathloss_los_db(&geom, &consts, 0.0).unwrap();
        let nlos = pathloss_nlos_db(&geom, &consts, 0.0).unwrap();
        assert!(nlos >= los, "NLoS < LoS at {d} m");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 100_000;
    let (mut sum_l, mut sq_l, mut sum_n, mut sq_n) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..n {
        let s = ShadowFading::sample(&consts, &mut rng);
        sum_l += s.los_db;
        sq_l += s.los_db * s.los_db;
        sum_n += s.nlos_db;
        sq_n += s.nlos_db * s.nlos_db;
    }
    let std = |sum: f64, sq: f64| ((sq - sum * sum / n as f64) / (n as f64 - 1.0)).sqrt();
    let (std_l, std_n) = (std(sum_l, sq_l), std(sum_n, sq_n));
    assert!((std_l - 4.0).abs() / 4.0 <= 0.02, "LoS shadow std {std_l}");
    assert!((std_n - 6.0).abs() / 6.0 <= 0.02, "NLoS shadow std {std_n}");

    println!(
        "criterion 7 (channel units): PASS — LoS prob(10 m) = 1, breakpoint {d_b:.2} m, \
         NLoS ≥ LoS on the metre scan, shadow std {std_l:.3}/{std_n:.3} dB"
    );
}

#[test]
fn criterion_8_fading_orthogonality() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let trials = 500;
    let mut cross_64 = Vec::with_capacity(trials);
    let mut cross_4096 = Vec::with_capacity(trials);
    let mut diag_1024 = Vec::with_capacity(trials);
    for _ in 0..trials {
        let a = sample_fading(64, &mut rng).unwrap();
        let b = sample_fading(64, &mut rng).unwrap();
        cross_64.push(a.normalized_inner_magnitude(&b));
        let a = sample_fading(4096, &mut rng).unwrap();
        let b = sample_fading(4096, &mut rng).unwrap();
        cross_4096.push(a.normalized_inner_magnitude(&b));
        let f = sample_fading(1024, &mut rng).unwrap();
        diag_1024.push(f.mean_power());
    }
    let median = |v: &mut Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    };
    let m64 = median(&mut cross_64);
    let m4096 = median(&mut cross_4096);
    assert!(
        m4096 < m64,
        "cross-term median did not shrink with array size: {m4096} vs {m64}"
    );
    let diag_median = median(&mut diag_1024);
    assert!(
        (diag_median - 1.0).abs() <= 0.1,
        "diagonal term median {diag_median} outside 1 ± 0.1"
    );
    let in_band = diag_1024.iter().filter(|d| (*d - 1.0).abs() <= 0.1).count();
    assert!(
        in_band * 100 >= trials * 99,
        "only {in_band}/{trials} diagonal draws within 1 ± 0.1"
    );
    println!(
        "criterion 8 (fading orthogonality): PASS — cross-term median {m4096:.4} at \
         N=4096 < {m64:.4} at N=64; diagonal median {diag_median:.4}, \
         {in_band}/{trials} draws within 1 ± 0.1"
    );
}

#[test]
fn criterion_9_performance() {
    // Let the shared sweep finish first so its timing is clean.
    let (_, sweep_elapsed) = fig2();
    assert!(
        *sweep_elapsed < Duration::from_secs(300),
        "full load sweep took {sweep_elapsed:.2?}, budget 5 min"
    );

    let scenario = build_default_scenario(0.5, -70.0, 0).expect("default scenario");
    let start = Instant::now();
    let snapshot = ChannelSnapshot::draw(&scenario, 0).expect("snapshot");
    let decision = proposed_cs(&scenario, &snapshot).expect("solve");
    let solve_elapsed = start.elapsed();
    assert!(decision.total_power_w > 0.0);
    assert!(
        solve_elapsed < Duration::from_secs(1),
        "single proposed solve took {solve_elapsed:.2?}, budget 1 s"
    );
    println!(
        "criterion 9 (performance): PASS — proposed solve {solve_elapsed:.2?} (< 1 s), \
         full load sweep {sweep_elapsed:.2?} (< 5 min)"
    );
}
