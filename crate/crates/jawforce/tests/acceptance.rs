//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured figure (run with `--nocapture` to see them).
//!
//! Every tolerance is pinned here; the synthetic sensor is the ground-truth
//! oracle throughout.

use std::time::Instant;

use nalgebra::{Matrix3, Vector3};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use jawforce::calib::{
    apply, fit_sensitivity, hysteresis, nrmsd, r_squared, rmse, AxisLabel, CalibrationSample,
    Phase, SensitivityMatrix, Sign,
};
use jawforce::io::{dual_jaw_from_str, dual_jaw_to_string, single_jaw_from_str, single_jaw_to_string, DualJawLog, DualJawRow, SingleJawLog};
use jawforce::kinematics::{
    corrected_jaw_angle, default_chain, grasp_force, JawForces, Transform,
};
use jawforce::pipeline::{grip_log, resolve_log, ErrorReport, ResolveSettings};
use jawforce::sensor::{
    ideal_inverse, ideal_sensitivity, Axis, ChannelFrame, ForceVector, SensorGeometry,
};
use jawforce::sim::{
    force_noise_per_axis, manipulation_scenario, pinch_scenario, right_inverse, run_profile,
    run_profile_from, DualJawRig, LoadProfile, ManipulationKind, ManipulationSpec, PinchSpec,
    SimConfig,
};

/// Uniform per-channel noise whose force-equivalent level sits inside the
/// 0.02-0.05 N band on the binding (axial) axis.
const PAPER_SCALE_SIGMA_V: f64 = 0.005;

fn clean_config(seed: u64) -> SimConfig {
    SimConfig { seed, ..SimConfig::default() }
}

fn noisy_config(seed: u64) -> SimConfig {
    SimConfig { noise_sigma_v: [PAPER_SCALE_SIGMA_V; 8], seed, ..SimConfig::default() }
}

/// Full static-calibration sweep: loading and unloading, both signs of all
/// three axes, 0.5 N steps.
fn full_sweep(cfg: &SimConfig, dwell: usize) -> Vec<CalibrationSample> {
    let mut rng = cfg.rng();
    let mut samples = Vec::new();
    for axis in Axis::ALL {
        let peak = cfg.geom.range_n(axis);
        for sign in [1.0, -1.0] {
            let profile = LoadProfile {
                axis,
                peak_n: sign * peak,
                step_n: 0.5,
                include_unloading: true,
                dwell_samples: dwell,
            };
            let t0 = samples.len() as f64 / 125.0;
            samples.extend(run_profile_from(cfg, &profile, &mut rng, t0).unwrap());
        }
    }
    samples
}

#[test]
fn criterion_01_ideal_model_round_trip() {
    let cfg = clean_config(1);
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let start = Instant::now();
    let mut max_err = [0.0_f64; 3];
    for i in 0..100_000 {
        let f = ForceVector::new(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-5.0..5.0),
        );
        let frame = jawforce::sim::synthesize_frame(&cfg, &f, i as f64 / 125.0, &mut rng);
        let back = ideal_inverse(&cfg.geom, &frame);
        max_err[0] = max_err[0].max((back.fx - f.fx).abs());
        max_err[1] = max_err[1].max((back.fy - f.fy).abs());
        max_err[2] = max_err[2].max((back.fz - f.fz).abs());
    }
    let elapsed = start.elapsed();
    for (axis, err) in ["x", "y", "z"].iter().zip(max_err) {
        assert!(err < 1e-9, "{axis}-axis round-trip error {err}");
    }
    assert!(elapsed.as_secs_f64() < 5.0, "round trip took {elapsed:?}");
    println!(
        "criterion 01 PASS: 1e5 round trips, max per-axis error {:.2e}/{:.2e}/{:.2e} N in {:?}",
        max_err[0], max_err[1], max_err[2], elapsed
    );
}

#[test]
fn criterion_02_calibration_recovery_with_preload() {
    let preload = [0.31, -0.12, 0.05, 0.24, -0.07, 0.18, 0.09, -0.26];
    for (label, p) in [("zero preload", [0.0; 8]), ("nonzero preload", preload)] {
        let cfg = SimConfig { preload_v: p, ..clean_config(2) };
        let samples = full_sweep(&cfg, 4);
        let fitted = fit_sensitivity(&samples, cfg.geom).unwrap();

        let a_ideal = ideal_sensitivity(&cfg.geom);
        let expected_offset = -a_ideal * nalgebra::SVector::<f64, 8>::from_column_slice(&p);
        let mut max_delta = 0.0_f64;
        for r in 0..3 {
            for c in 0..8 {
                max_delta = max_delta.max((fitted.a_plus[(r, c)] - a_ideal[(r, c)]).abs());
            }
            max_delta = max_delta.max((fitted.offset()[r] - expected_offset[r]).abs());
        }
        assert!(max_delta < 1e-9, "{label}: max deviation {max_delta}");
        println!("criterion 02 PASS ({label}): max elementwise deviation {max_delta:.2e}");
    }
}

#[test]
fn criterion_03_reference_scale_performance_across_seeds() {
    let analytic = force_noise_per_axis(&SensorGeometry::default(), PAPER_SCALE_SIGMA_V);
    assert!(
        analytic.iter().any(|&a| (0.02..=0.05).contains(&a)),
        "force-equivalent noise {analytic:?} should reach the 0.02-0.05 N band"
    );

    let mut passing = 0;
    let mut worst = (0.0_f64, 0.0_f64, 1.0_f64); // rmse, nrmsd, r2
    for seed in 0..10u64 {
        let train_cfg = noisy_config(1000 + seed);
        let fitted = fit_sensitivity(&full_sweep(&train_cfg, 8), train_cfg.geom).unwrap();

        let held_out_cfg = noisy_config(2000 + seed);
        let held_out = full_sweep(&held_out_cfg, 8);
        let pred: Vec<ForceVector> = held_out.iter().map(|s| apply(&fitted, &s.frame)).collect();
        let truth: Vec<ForceVector> = held_out.iter().map(|s| s.ref_force).collect();

        let rmse_n = rmse(&pred, &truth).unwrap();
        let nrmsd_pct = nrmsd(&rmse_n, &held_out_cfg.geom);
        let r2 = r_squared(&pred, &truth).unwrap();

        let seed_ok = rmse_n.iter().all(|&v| v <= 0.06)
            && nrmsd_pct.iter().all(|&v| v <= 0.9)
            && r2.iter().all(|v| v.unwrap() >= 0.996);
        if seed_ok {
            passing += 1;
        }
        for i in 0..3 {
            worst.0 = worst.0.max(rmse_n[i]);
            worst.1 = worst.1.max(nrmsd_pct[i]);
            worst.2 = worst.2.min(r2[i].unwrap());
        }
    }
    assert!(passing >= 9, "only {passing}/10 seeds met the thresholds");
    println!(
        "criterion 03 PASS: {passing}/10 seeds; worst RMSE {:.4} N, NRMSD {:.3} %, R^2 {:.5}",
        worst.0, worst.1, worst.2
    );
}

#[test]
fn criterion_04_nrmsd_denominator_consistency() {
    // reference characterisation entries: (rmse_n, nrmsd_fraction, range_n).
    // One published lateral pair is internally inconsistent at the printed
    // precision (it reconstructs 6.39 N) and is excluded.
    let entries: [(f64, f64, f64); 5] = [
        (0.023, 0.00388, 6.0),
        (0.044, 0.00438, 10.0),
        (0.032, 0.00531, 6.0),
        (0.048, 0.00814, 6.0),
        (0.045, 0.00445, 10.0),
    ];
    for (rmse_n, nrmsd_frac, range_n) in entries {
        let reconstructed = rmse_n / nrmsd_frac;
        let rel = (reconstructed - range_n).abs() / range_n;
        assert!(rel < 0.03, "{rmse_n}/{nrmsd_frac} -> {reconstructed} vs {range_n}");
    }
    // and the implementation divides by exactly those ranges
    let geom = SensorGeometry::default();
    let unit = nrmsd(&[1.0, 1.0, 1.0], &geom);
    assert_eq!(unit[0], 100.0 / 6.0);
    assert_eq!(unit[1], 100.0 / 6.0);
    assert_eq!(unit[2], 10.0);
    println!("criterion 04 PASS: reconstructed ranges within 3 % of 6 N / 10 N");
}

#[test]
fn criterion_05_hysteresis_metric() {
    // exact loop: half-width 0.05 N, peak 2 N -> 100 * 0.1 / 2 = 5.000 %
    let w = 0.05;
    let cfg = SimConfig { backlash_width_n: [w; 3], ..clean_config(5) };
    let mut samples = Vec::new();
    let mut rng = cfg.rng();
    for sign in [1.0, -1.0] {
        let profile = LoadProfile {
            axis: Axis::X,
            peak_n: sign * 2.0,
            step_n: 0.5,
            include_unloading: true,
            dwell_samples: 2,
        };
        let t0 = samples.len() as f64 / 125.0;
        samples.extend(run_profile_from(&cfg, &profile, &mut rng, t0).unwrap());
    }
    let ideal = SensitivityMatrix::ideal(cfg.geom);
    let h = hysteresis(&samples, &ideal).unwrap();
    for sign in Sign::BOTH {
        let pct = h.get(Axis::X, sign).unwrap();
        assert!(
            (pct - 5.0).abs() < 1e-4,
            "x{sign} hysteresis {pct} % != 5.000 %"
        );
    }

    // paper-scale band: tune the loop into 1.6-4.0 % and evaluate through a
    // fitted matrix instead of the ideal one
    let w_band = 0.025; // 2 * 0.025 / 2.0 = 2.5 %
    let band_cfg = SimConfig { backlash_width_n: [w_band; 3], ..clean_config(6) };
    let fitted = fit_sensitivity(&full_sweep(&clean_config(7), 4), band_cfg.geom).unwrap();
    let mut band_samples = Vec::new();
    let mut rng = band_cfg.rng();
    for sign in [1.0, -1.0] {
        let profile = LoadProfile {
            axis: Axis::Y,
            peak_n: sign * 2.0,
            step_n: 0.5,
            include_unloading: true,
            dwell_samples: 2,
        };
        let t0 = band_samples.len() as f64 / 125.0;
        band_samples.extend(run_profile_from(&band_cfg, &profile, &mut rng, t0).unwrap());
    }
    let h_band = hysteresis(&band_samples, &fitted).unwrap();
    for sign in Sign::BOTH {
        let pct = h_band.get(Axis::Y, sign).unwrap();
        assert!((1.6..=4.0).contains(&pct), "band hysteresis {pct} % outside 1.6-4.0 %");
    }
    println!(
        "criterion 05 PASS: loop 5.000 % +/- 1e-4; tuned loop {:.3} % inside 1.6-4.0 %",
        h_band.get(Axis::Y, Sign::Pos).unwrap()
    );
}

#[test]
fn criterion_06_dual_jaw_accuracy_target() {
    let chain = default_chain();
    for kind in [ManipulationKind::FlatTissue, ManipulationKind::Stem] {
        let rig = DualJawRig::new(noisy_config(60), noisy_config(61), chain.clone());
        let spec = ManipulationSpec::new(kind); // 2 deg pose budget, reported 2 deg jaw
        let log = manipulation_scenario(&rig, &spec).unwrap();

        // end to end: calibrate each jaw from its own noisy sweep
        let left_fit =
            fit_sensitivity(&full_sweep(&noisy_config(62), 8), rig.left.geom).unwrap();
        let right_fit =
            fit_sensitivity(&full_sweep(&noisy_config(63), 8), rig.right.geom).unwrap();

        let settings = ResolveSettings::default(); // theta_min = 8.4 deg
        let resolved = resolve_log(&chain, &left_fit, &right_fit, &log, &settings).unwrap();
        let pred: Vec<ForceVector> = resolved.iter().map(|r| r.force).collect();
        let truth: Vec<ForceVector> =
            resolved.iter().map(|r| r.ground_truth.unwrap()).collect();
        let report = ErrorReport::compute(&pred, &truth, &rig.left.geom).unwrap();
        for axis in Axis::ALL {
            let v = report.rmse_n[axis.index()];
            assert!(v < 0.375, "{kind:?} {axis}-axis RMSE {v} N >= 0.375 N");
        }
        println!(
            "criterion 06 PASS ({kind:?}): per-axis RMSE {:.4}/{:.4}/{:.4} N < 0.375 N",
            report.rmse_n[0], report.rmse_n[1], report.rmse_n[2]
        );
    }
}

#[test]
fn criterion_07_grasp_force() {
    let chain = default_chain();
    for commanded in [1.35, 1.45] {
        let rig = DualJawRig::new(clean_config(70), clean_config(71), chain.clone());
        let spec = PinchSpec {
            grasp_left_n: commanded,
            grasp_right_n: commanded,
            ..PinchSpec::default()
        };
        let log = pinch_scenario(&rig, &spec).unwrap();
        let ideal = SensitivityMatrix::ideal(rig.left.geom);
        let grips = grip_log(&chain, &ideal, &ideal, &log, &ResolveSettings::default()).unwrap();
        let peak = grips.iter().map(|g| g.grip_n).fold(0.0_f64, f64::max);
        assert!(
            (peak - commanded).abs() < 1e-9,
            "peak grip {peak} != commanded {commanded}"
        );
        // and every sample tracks its own commanded value
        for g in &grips {
            assert!((g.grip_n - g.reference_n.unwrap()).abs() < 1e-9);
        }
    }

    // min rule, brute force over random asymmetric jaw force pairs
    let mut rng = ChaCha8Rng::seed_from_u64(7007);
    let j_hat = Vector3::new(0.0, 1.0, 0.0);
    for _ in 0..10_000 {
        let pose_r = Transform::rotation_about(Axis::Z, rng.gen_range(-1.0..1.0))
            * Transform::rotation_about(Axis::X, rng.gen_range(-1.0..1.0));
        let pose_l = Transform::rotation_about(Axis::Z, rng.gen_range(-1.0..1.0))
            * Transform::rotation_about(Axis::Y, rng.gen_range(-1.0..1.0));
        let forces = JawForces {
            right: ForceVector::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ),
            left: ForceVector::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ),
        };
        let fg = grasp_force((&pose_r, &pose_l), &forces);
        // oracle: full homogeneous algebra on direction vectors
        let proj = |t: &Transform, f: &ForceVector| {
            let h = t.to_homogeneous() * nalgebra::Vector4::new(f.fx, f.fy, f.fz, 0.0);
            Vector3::new(h.x, h.y, h.z).dot(&j_hat).abs()
        };
        let oracle = proj(&pose_r, &forces.right).min(proj(&pose_l, &forces.left));
        assert!((fg - oracle).abs() < 1e-12);
    }
    println!("criterion 07 PASS: pinch peaks exact at 1.35/1.45 N; min rule verified 1e4 times");
}

// ---------------------------------------------------------------------------
// criterion 8: independent direct-summation oracles
// ---------------------------------------------------------------------------

fn oracle_rmse(pred: &[ForceVector], truth: &[ForceVector]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for axis in 0..3 {
        let mut acc = 0.0;
        for i in 0..pred.len() {
            let p = [pred[i].fx, pred[i].fy, pred[i].fz][axis];
            let t = [truth[i].fx, truth[i].fy, truth[i].fz][axis];
            acc += (p - t) * (p - t);
        }
        out[axis] = (acc / pred.len() as f64).sqrt();
    }
    out
}

fn oracle_nrmsd(rmse_n: &[f64; 3], geom: &SensorGeometry) -> [f64; 3] {
    [
        100.0 * rmse_n[0] / (2.0 * geom.lateral_range_n),
        100.0 * rmse_n[1] / (2.0 * geom.lateral_range_n),
        100.0 * rmse_n[2] / (2.0 * geom.axial_range_n),
    ]
}

fn oracle_r_squared(pred: &[ForceVector], truth: &[ForceVector]) -> [Option<f64>; 3] {
    let n = truth.len();
    let mut out = [None; 3];
    for axis in 0..3 {
        let pick = |f: &ForceVector| [f.fx, f.fy, f.fz][axis];
        let mut mean = 0.0;
        for t in truth {
            mean += pick(t);
        }
        mean /= n as f64;
        let mut ss_res = 0.0;
        let mut ss_tot = 0.0;
        for i in 0..n {
            ss_res += (pick(&truth[i]) - pick(&pred[i])).powi(2);
            ss_tot += (pick(&truth[i]) - mean).powi(2);
        }
        if ss_tot > 0.0 {
            out[axis] = Some(1.0 - ss_res / ss_tot);
        }
    }
    out
}

/// O(n^2) reimplementation of the hysteresis metric.
fn oracle_hysteresis(
    samples: &[CalibrationSample],
    fitted: &SensitivityMatrix,
    axis: Axis,
    sign: Sign,
) -> Option<f64> {
    let in_group = |s: &CalibrationSample| {
        s.axis_label.axis() == Some(axis)
            && match sign {
                Sign::Pos => s.ref_force.component(axis) >= 0.0,
                Sign::Neg => s.ref_force.component(axis) <= 0.0,
            }
    };
    let group: Vec<&CalibrationSample> = samples.iter().filter(|s| in_group(s)).collect();
    if group.is_empty() {
        return None;
    }
    let mut max_diff = 0.0_f64;
    let mut max_force = 0.0_f64;
    let mut have_unload = false;
    for s in &group {
        max_force = max_force.max(apply(fitted, &s.frame).component(axis).abs());
        have_unload |= s.phase == Phase::Unloading;
    }
    if !have_unload || !group.iter().any(|s| s.phase == Phase::Loading) {
        return None; // the implementation errors here; callers avoid this case
    }
    for load in group.iter().filter(|s| s.phase == Phase::Loading) {
        let mut best_d = f64::INFINITY;
        let mut best_m = 0.0;
        for unload in group.iter().filter(|s| s.phase == Phase::Unloading) {
            let d = (load.ref_force.component(axis).abs()
                - unload.ref_force.component(axis).abs())
            .abs();
            if d < best_d {
                best_d = d;
                best_m = apply(fitted, &unload.frame).component(axis);
            }
        }
        if best_d <= 0.25 {
            max_diff = max_diff.max((apply(fitted, &load.frame).component(axis) - best_m).abs());
        }
    }
    if max_force == 0.0 {
        return Some(0.0);
    }
    Some(100.0 * max_diff / max_force)
}

#[test]
fn criterion_08_metric_oracles() {
    let geom = SensorGeometry::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8008);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);

    for _ in 0..1000 {
        let n = rng.gen_range(2..=1000);
        let mut pred = Vec::with_capacity(n);
        let mut truth = Vec::with_capacity(n);
        for _ in 0..n {
            truth.push(ForceVector::new(
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-5.0..5.0),
            ));
            let t = truth.last().unwrap();
            pred.push(ForceVector::new(
                t.fx + rng.gen_range(-0.1..0.1),
                t.fy + rng.gen_range(-0.1..0.1),
                t.fz + rng.gen_range(-0.1..0.1),
            ));
        }
        let r = rmse(&pred, &truth).unwrap();
        let r_oracle = oracle_rmse(&pred, &truth);
        let n_impl = nrmsd(&r, &geom);
        let n_oracle = oracle_nrmsd(&r_oracle, &geom);
        let r2_impl = r_squared(&pred, &truth).unwrap();
        let r2_oracle = oracle_r_squared(&pred, &truth);
        for axis in 0..3 {
            assert!(close(r[axis], r_oracle[axis]));
            assert!(close(n_impl[axis], n_oracle[axis]));
            match (r2_impl[axis], r2_oracle[axis]) {
                (Some(a), Some(b)) => assert!(close(a, b), "{a} vs {b}"),
                (None, None) => {}
                other => panic!("r2 disagreement: {other:?}"),
            }
        }
    }

    // hysteresis on structured random groups
    let fitted = SensitivityMatrix::ideal(geom);
    let g = right_inverse(&geom);
    for trial in 0..1000 {
        let mut samples = Vec::new();
        let axis = Axis::ALL[trial % 3];
        for sign in [1.0, -1.0] {
            for phase in [Phase::Loading, Phase::Unloading] {
                for step in 0..rng.gen_range(2..6) {
                    let magnitude = 0.5 * step as f64;
                    let mut f = ForceVector::zero();
                    let measured = sign * (magnitude + rng.gen_range(-0.02..0.02));
                    match axis {
                        Axis::X => f.fx = measured,
                        Axis::Y => f.fy = measured,
                        Axis::Z => f.fz = measured,
                    }
                    let v = g * f.as_vector();
                    let mut ch = [0.0; 8];
                    ch.copy_from_slice(v.as_slice());
                    let mut ref_force = ForceVector::zero();
                    match axis {
                        Axis::X => ref_force.fx = sign * magnitude,
                        Axis::Y => ref_force.fy = sign * magnitude,
                        Axis::Z => ref_force.fz = sign * magnitude,
                    }
                    samples.push(CalibrationSample {
                        frame: ChannelFrame::new(0.0, ch),
                        ref_force,
                        phase,
                        axis_label: AxisLabel::from(axis),
                    });
                }
            }
        }
        let h = hysteresis(&samples, &fitted).unwrap();
        for sign in Sign::BOTH {
            let impl_v = h.get(axis, sign);
            let oracle_v = oracle_hysteresis(&samples, &fitted, axis, sign);
            match (impl_v, oracle_v) {
                (Some(a), Some(b)) => assert!(close(a, b), "{a} vs {b}"),
                (None, None) => {}
                other => panic!("hysteresis disagreement: {other:?}"),
            }
        }
    }
    println!("criterion 08 PASS: rmse/nrmsd/r2/hysteresis match the oracles on 1000 instances");
}

#[test]
fn criterion_09_determinism_and_format_round_trips() {
    // deterministic generation: same seed, same bytes
    let cfg = noisy_config(99);
    let profile = LoadProfile::new(Axis::Z, 5.0);
    let a = single_jaw_to_string(&SingleJawLog { samples: run_profile(&cfg, &profile).unwrap() });
    let b = single_jaw_to_string(&SingleJawLog { samples: run_profile(&cfg, &profile).unwrap() });
    assert_eq!(a, b, "same seed must give byte-identical logs");

    // 1e4-row single-jaw round trip
    let big = SingleJawLog {
        samples: run_profile(
            &cfg,
            &LoadProfile { dwell_samples: 455, ..LoadProfile::new(Axis::Z, 5.0) },
        )
        .unwrap(),
    };
    assert!(big.samples.len() >= 10_000, "have {}", big.samples.len());
    let text = single_jaw_to_string(&big);
    let parsed = single_jaw_from_str(&text).unwrap();
    assert_eq!(parsed, big);
    assert_eq!(single_jaw_to_string(&parsed), text);

    // 1e4-row dual-jaw round trip
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let rows: Vec<DualJawRow> = (0..10_000)
        .map(|i| {
            let mut thetas = [0.0; 7];
            for th in &mut thetas {
                *th = rng.gen_range(-1.5..1.5);
            }
            let mut v_left = [0.0; 8];
            let mut v_right = [0.0; 8];
            for v in v_left.iter_mut().chain(&mut v_right) {
                *v = rng.gen_range(-2.0..2.0);
            }
            DualJawRow {
                t_s: i as f64 / 125.0,
                thetas,
                theta_jaw_prime: rng.gen_range(0.0..0.4),
                v_left,
                v_right,
                ground_truth: Some(ForceVector::new(rng.gen(), rng.gen(), rng.gen())),
            }
        })
        .collect();
    let dual = DualJawLog { rows, has_ground_truth: true };
    let dual_text = dual_jaw_to_string(&dual);
    assert_eq!(dual_jaw_from_str(&dual_text).unwrap(), dual);
    println!("criterion 09 PASS: seeded generation byte-identical; 1e4-row round trips exact");
}

#[test]
fn criterion_10_jaw_angle_clamp_properties() {
    let theta_min = 8.4_f64.to_radians();
    // branch boundary exactly at theta_min
    assert_eq!(corrected_jaw_angle(theta_min, theta_min), theta_min);
    let eps = 1e-12;
    assert_eq!(corrected_jaw_angle(theta_min - eps, theta_min), theta_min);
    assert_eq!(corrected_jaw_angle(theta_min + eps, theta_min), theta_min + eps);

    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    for _ in 0..10_000 {
        let a = rng.gen_range(-0.5..0.8);
        let b = rng.gen_range(-0.5..0.8);
        // idempotence
        let once = corrected_jaw_angle(a, theta_min);
        assert_eq!(corrected_jaw_angle(once, theta_min), once);
        // monotone nondecreasing
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        assert!(corrected_jaw_angle(lo, theta_min) <= corrected_jaw_angle(hi, theta_min));
        // never below the floor
        assert!(once >= theta_min);
    }
    println!("criterion 10 PASS: clamp idempotent, monotone, exact at the 8.4 deg boundary");
}

// ---------------------------------------------------------------------------
// supporting checks referenced by the criteria above
// ---------------------------------------------------------------------------

#[test]
fn fitted_matrix_is_a_strict_residual_minimum_on_clean_data() {
    // noiseless sweep: residuals are zero, so any entry perturbation must
    // strictly increase the summed squared residual
    let cfg = clean_config(42);
    let samples = full_sweep(&cfg, 2);
    let fitted = fit_sensitivity(&samples, cfg.geom).unwrap();
    let ssr = |m: &SensitivityMatrix| -> f64 {
        samples
            .iter()
            .map(|s| (apply(m, &s.frame) - s.ref_force).as_vector().norm_squared())
            .sum()
    };
    let base = ssr(&fitted);
    assert!(base < 1e-18);
    for r in 0..3 {
        for c in 0..9 {
            for delta in [1e-3, -1e-3] {
                let mut perturbed = fitted.clone();
                perturbed.a_plus[(r, c)] += delta;
                assert!(ssr(&perturbed) > base, "entry ({r},{c}) perturbation not strict");
            }
        }
    }
}

#[test]
fn resolve_with_disabled_clamp_degrades_lateral_accuracy() {
    // the same grasp log resolved with theta_min = 0 must show strictly
    // larger x-axis error than with the default clamp
    let chain = default_chain();
    let rig = DualJawRig::new(clean_config(30), clean_config(31), chain.clone());
    let spec = ManipulationSpec {
        pose_error_rad: 0.0,
        ..ManipulationSpec::new(ManipulationKind::FlatTissue)
    };
    let log = manipulation_scenario(&rig, &spec).unwrap();
    let ideal = SensitivityMatrix::ideal(rig.left.geom);

    let rmse_for = |theta_min_rad: f64| {
        let settings = ResolveSettings { theta_min_rad, ..ResolveSettings::default() };
        let resolved = resolve_log(&chain, &ideal, &ideal, &log, &settings).unwrap();
        let pred: Vec<ForceVector> = resolved.iter().map(|r| r.force).collect();
        let truth: Vec<ForceVector> = resolved.iter().map(|r| r.ground_truth.unwrap()).collect();
        rmse(&pred, &truth).unwrap()
    };
    let with_clamp = rmse_for(8.4_f64.to_radians());
    let without = rmse_for(0.0);
    assert!(
        without[0] > with_clamp[0],
        "x RMSE {} (no clamp) should exceed {} (clamp)",
        without[0],
        with_clamp[0]
    );
}

#[test]
fn pinch_resultant_cancels_in_the_base_frame() {
    let chain = default_chain();
    let rig = DualJawRig::new(clean_config(20), clean_config(21), chain.clone());
    let log = pinch_scenario(&rig, &PinchSpec::default()).unwrap();
    let ideal = SensitivityMatrix::ideal(rig.left.geom);
    let resolved =
        resolve_log(&chain, &ideal, &ideal, &log, &ResolveSettings::default()).unwrap();
    for r in &resolved {
        assert!(r.force.norm() < 1e-9);
    }
}

#[test]
fn moment_residual_vanishes_under_matrix3_cross_check() {
    // closed-form inverse satisfies both balance equations written as an
    // explicit 3x3 linear system in (Fx, Fy, Fz)
    let geom = SensorGeometry::default();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for _ in 0..100 {
        let mut v = [0.0; 8];
        for x in &mut v {
            *x = rng.gen_range(-1.0..1.0);
        }
        let frame = ChannelFrame::new(0.0, v);
        let f = ideal_inverse(&geom, &frame);

        let c = geom.c_n_per_v;
        let m = Matrix3::new(
            0.0, geom.h_mm, 0.0, // Mx row
            geom.h_mm, 0.0, -geom.d_mm, // My row
            0.0, 0.0, 1.0, // Fz row
        );
        let rhs = Vector3::new(
            geom.l_mm * c / 2.0 * (v[1] + v[5] - v[3] - v[7]),
            geom.w_mm * c / 2.0 * (v[0] + v[6] - v[2] - v[4]),
            c * (v[0] + v[1] + v[2] + v[3] - v[4] - v[5] - v[6] - v[7]),
        );
        let solved = m.try_inverse().unwrap() * rhs;
        assert!((solved - f.as_vector()).norm() < 1e-9);
    }
}
