//! Synthetic sensor: ground-truth data generation for the whole pipeline.
//!
//! Voltages are synthesised by pushing a commanded tip force through the
//! minimum-norm right inverse of the ideal sensitivity matrix, then layering
//! preload offsets, channel crosstalk, Gaussian noise, and a backlash play
//! operator on top. The simulated reference sensor reports the commanded
//! force exactly, so every downstream metric has an analytic expectation.

use nalgebra::{Matrix3, SMatrix, Vector3};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::calib::{CalibrationSample, Phase};
use crate::io::{DualJawLog, DualJawRow};
use crate::kinematics::{JawState, KinematicsError, TransformChain};
use crate::sensor::{ideal_sensitivity, Axis, ChannelFrame, ForceVector, SensorGeometry};

/// Sampling rate of all generated logs (Hz).
pub const SAMPLE_RATE_HZ: f64 = 125.0;

/// Channel mixing matrix type.
pub type Crosstalk = SMatrix<f64, 8, 8>;

/// Right inverse type of the 3x8 ideal sensitivity.
pub type RightInverse = SMatrix<f64, 8, 3>;

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("sim config: {field} must be non-negative, got {value}")]
    NegativeParameter { field: &'static str, value: f64 },
    #[error("sim config: crosstalk matrix condition number {cond:.3e} exceeds 1e6")]
    BadCrosstalk { cond: f64 },
    #[error("load profile: {0}")]
    InvalidProfile(String),
    #[error("scenario: {0}")]
    InvalidScenario(String),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
}

/// Electrical and mechanical imperfections of one simulated sensor.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub geom: SensorGeometry,
    /// Constant per-channel voltage offsets from assembly preload (V).
    pub preload_v: [f64; 8],
    /// Channel mixing from uneven plate contact; identity when absent.
    pub crosstalk: Crosstalk,
    /// Per-channel Gaussian noise standard deviation (V).
    pub noise_sigma_v: [f64; 8],
    /// Backlash half-width per force axis (N); the load/unload loop it
    /// produces separates by twice this value.
    pub backlash_width_n: [f64; 3],
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            geom: SensorGeometry::default(),
            preload_v: [0.0; 8],
            crosstalk: Crosstalk::identity(),
            noise_sigma_v: [0.0; 8],
            backlash_width_n: [0.0; 3],
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        self.geom.validate().map_err(|e| SimError::InvalidScenario(e.to_string()))?;
        for s in self.noise_sigma_v {
            if !(s.is_finite() && s >= 0.0) {
                return Err(SimError::NegativeParameter { field: "noise_sigma_v", value: s });
            }
        }
        for w in self.backlash_width_n {
            if !(w.is_finite() && w >= 0.0) {
                return Err(SimError::NegativeParameter { field: "backlash_width_n", value: w });
            }
        }
        let svd = self.crosstalk.svd(false, false);
        let (max, min) = (svd.singular_values.max(), svd.singular_values.min());
        let cond = if min > 0.0 { max / min } else { f64::INFINITY };
        if cond.is_nan() || cond >= 1e6 {
            return Err(SimError::BadCrosstalk { cond });
        }
        Ok(())
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Minimum-norm right inverse G of the ideal sensitivity A: `A G = I`.
///
/// This is the nominal voltage distribution the simulator uses; it makes the
/// clean round trip through `ideal_inverse` exact.
pub fn right_inverse(geom: &SensorGeometry) -> RightInverse {
    let a = ideal_sensitivity(geom);
    let gram: Matrix3<f64> = a * a.transpose();
    a.transpose() * gram.try_inverse().expect("ideal sensitivity has full row rank")
}

/// Synthesises one voltage frame for a commanded tip force.
///
/// `v = crosstalk * (G f) + preload + noise`. The rng stream advances by
/// exactly eight draws per call regardless of the noise configuration.
pub fn synthesize_frame(
    cfg: &SimConfig,
    f: &ForceVector,
    t_s: f64,
    rng: &mut impl Rng,
) -> ChannelFrame {
    debug_assert!(
        f.fx.abs() <= 2.0 * cfg.geom.lateral_range_n
            && f.fy.abs() <= 2.0 * cfg.geom.lateral_range_n
            && f.fz.abs() <= 2.0 * cfg.geom.axial_range_n,
        "commanded force outside twice the sensing range"
    );
    let nominal = right_inverse(&cfg.geom) * f.as_vector();
    let mixed = cfg.crosstalk * nominal;
    let mut v = [0.0; 8];
    for ch in 0..8 {
        let noise: f64 = rng.sample(StandardNormal);
        v[ch] = mixed[ch] + cfg.preload_v[ch] + cfg.noise_sigma_v[ch] * noise;
    }
    ChannelFrame::new(t_s, v)
}

/// Rate-independent play (backlash) operator.
///
/// The state starts engaged against the expected loading direction, so the
/// outbound branch tracks the input exactly and the return branch lags by
/// the full loop width `2 * half_width`.
#[derive(Debug, Clone, Copy)]
pub struct PlayOperator {
    lo: f64,
    hi: f64,
    y: f64,
}

impl PlayOperator {
    /// `direction` is the sign of the initial loading ramp.
    pub fn engaged(half_width: f64, direction: f64) -> Self {
        let w = half_width.max(0.0);
        if direction >= 0.0 {
            Self { lo: 0.0, hi: 2.0 * w, y: 0.0 }
        } else {
            Self { lo: -2.0 * w, hi: 0.0, y: 0.0 }
        }
    }

    pub fn step(&mut self, x: f64) -> f64 {
        self.y = self.y.min(x + self.hi).max(x + self.lo);
        self.y
    }
}

/// One static-calibration loading run along a single axis.
///
/// `peak_n` is signed: its sign selects the loading direction. Loading steps
/// from zero to the peak and, when `include_unloading` is set, back to zero,
/// revisiting every level including the peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadProfile {
    pub axis: Axis,
    pub peak_n: f64,
    pub step_n: f64,
    pub include_unloading: bool,
    /// Samples held at each load level (at 125 Hz).
    pub dwell_samples: usize,
}

impl LoadProfile {
    pub fn new(axis: Axis, peak_n: f64) -> Self {
        Self { axis, peak_n, step_n: 0.5, include_unloading: true, dwell_samples: 4 }
    }

    pub fn validate(&self, geom: &SensorGeometry) -> Result<(), SimError> {
        if !self.peak_n.is_finite() || self.peak_n == 0.0 {
            return Err(SimError::InvalidProfile(format!(
                "peak must be finite and nonzero, got {}",
                self.peak_n
            )));
        }
        if !(self.step_n > 0.0 && self.step_n <= self.peak_n.abs()) {
            return Err(SimError::InvalidProfile(format!(
                "step must satisfy 0 < step <= |peak|, got step {} for peak {}",
                self.step_n, self.peak_n
            )));
        }
        let bound = geom.range_n(self.axis);
        if self.peak_n.abs() > bound {
            return Err(SimError::InvalidProfile(format!(
                "peak {} N exceeds the {} N {}-axis range",
                self.peak_n, bound, self.axis
            )));
        }
        if self.dwell_samples == 0 {
            return Err(SimError::InvalidProfile("dwell_samples must be at least 1".into()));
        }
        Ok(())
    }

    /// Load levels from zero to the signed peak, inclusive.
    pub fn levels(&self) -> Vec<f64> {
        let n = (self.peak_n.abs() / self.step_n).round().max(1.0) as usize;
        (0..=n).map(|i| self.peak_n * i as f64 / n as f64).collect()
    }
}

/// Runs one loading profile with a freshly seeded rng starting at t = 0.
pub fn run_profile(cfg: &SimConfig, profile: &LoadProfile) -> Result<Vec<CalibrationSample>, SimError> {
    let mut rng = cfg.rng();
    run_profile_from(cfg, profile, &mut rng, 0.0)
}

/// Runs one loading profile on an existing rng stream and time origin, so
/// several runs can share one log.
pub fn run_profile_from(
    cfg: &SimConfig,
    profile: &LoadProfile,
    rng: &mut impl Rng,
    t_start_s: f64,
) -> Result<Vec<CalibrationSample>, SimError> {
    cfg.validate()?;
    profile.validate(&cfg.geom)?;

    let levels = profile.levels();
    let mut schedule: Vec<(f64, Phase)> =
        levels.iter().map(|&l| (l, Phase::Loading)).collect();
    if profile.include_unloading {
        schedule.extend(levels.iter().rev().map(|&l| (l, Phase::Unloading)));
    }

    let mut plays: [PlayOperator; 3] = std::array::from_fn(|i| {
        PlayOperator::engaged(cfg.backlash_width_n[i], profile.peak_n.signum())
    });

    let mut samples = Vec::with_capacity(schedule.len() * profile.dwell_samples);
    let mut k = 0u64;
    for (level, phase) in schedule {
        let mut commanded = ForceVector::zero();
        match profile.axis {
            Axis::X => commanded.fx = level,
            Axis::Y => commanded.fy = level,
            Axis::Z => commanded.fz = level,
        }
        for _ in 0..profile.dwell_samples {
            let measured = ForceVector::new(
                plays[0].step(commanded.fx),
                plays[1].step(commanded.fy),
                plays[2].step(commanded.fz),
            );
            let t = t_start_s + k as f64 / SAMPLE_RATE_HZ;
            let frame = synthesize_frame(cfg, &measured, t, rng);
            samples.push(CalibrationSample {
                frame,
                ref_force: commanded,
                phase,
                axis_label: profile.axis.into(),
            });
            k += 1;
        }
    }
    Ok(samples)
}

/// Static geometry of a simulated dual-jaw rig.
#[derive(Debug, Clone)]
pub struct DualJawRig {
    pub left: SimConfig,
    pub right: SimConfig,
    pub chain: TransformChain,
    pub mount_right_rad: f64,
    pub mount_left_rad: f64,
}

impl DualJawRig {
    pub fn new(left: SimConfig, right: SimConfig, chain: TransformChain) -> Self {
        Self { left, right, chain, mount_right_rad: 0.0, mount_left_rad: 0.0 }
    }
}

/// Grasp-and-release run against an ungrounded target: the jaws squeeze with
/// equal and opposite forces along the gripper y-axis.
#[derive(Debug, Clone, Copy)]
pub struct PinchSpec {
    /// Peak normal force commanded on each jaw (N).
    pub grasp_left_n: f64,
    pub grasp_right_n: f64,
    pub duration_s: f64,
    /// Physical jaw opening while holding the target (rad).
    pub jaw_true_rad: f64,
    /// Software-reported opening (smaller under tendon backlash).
    pub jaw_reported_rad: f64,
    /// Arm posture held during the grasp.
    pub proximal_rad: [f64; 5],
    pub bisector_rad: f64,
}

impl Default for PinchSpec {
    fn default() -> Self {
        Self {
            grasp_left_n: 1.35,
            grasp_right_n: 1.35,
            duration_s: 4.0,
            jaw_true_rad: 10.0_f64.to_radians(),
            jaw_reported_rad: 10.0_f64.to_radians(),
            proximal_rad: [0.0; 5],
            bisector_rad: 0.0,
        }
    }
}

/// Trapezoidal 0 -> 1 -> 0 envelope: quarter ramp, half hold, quarter ramp.
fn trapezoid(t: f64, duration: f64) -> f64 {
    let u = (t / duration).clamp(0.0, 1.0);
    if u < 0.25 {
        u / 0.25
    } else if u < 0.75 {
        1.0
    } else {
        (1.0 - u) / 0.25
    }
}

/// Generates a grip-evaluation log.
///
/// The ground-truth columns hold the grasp line-of-action force in the
/// gripper frame: `(0, min(left, right), 0)` at each instant.
pub fn pinch_scenario(rig: &DualJawRig, spec: &PinchSpec) -> Result<DualJawLog, SimError> {
    let lateral = rig.left.geom.lateral_range_n.min(rig.right.geom.lateral_range_n);
    for (name, value) in [("grasp_left_n", spec.grasp_left_n), ("grasp_right_n", spec.grasp_right_n)] {
        if !(value.is_finite() && value >= 0.0 && value <= lateral) {
            return Err(SimError::InvalidScenario(format!(
                "{name} must lie in [0, {lateral}] N, got {value}"
            )));
        }
    }
    if spec.duration_s.is_nan() || spec.duration_s <= 0.0 {
        return Err(SimError::InvalidScenario("duration_s must be positive".into()));
    }
    rig.left.validate()?;
    rig.right.validate()?;

    let state = JawState {
        proximal_rad: spec.proximal_rad,
        jaw_right_rad: 0.5 * (spec.jaw_true_rad + rig.mount_right_rad + rig.mount_left_rad),
        jaw_left_rad: 0.5 * (spec.jaw_true_rad + rig.mount_right_rad + rig.mount_left_rad),
        mount_right_rad: rig.mount_right_rad,
        mount_left_rad: rig.mount_left_rad,
        bisector_rad: spec.bisector_rad,
        jaw_min_rad: 0.0,
    };
    let (pose_r_in_g, pose_l_in_g) = rig.chain.gripper_relative_poses(&state)?;

    let mut rng_left = rig.left.rng();
    let mut rng_right = rig.right.rng();
    let n = (spec.duration_s * SAMPLE_RATE_HZ).round() as usize;
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let t = k as f64 / SAMPLE_RATE_HZ;
        let envelope = trapezoid(t, spec.duration_s);
        let right_n = spec.grasp_right_n * envelope;
        let left_n = spec.grasp_left_n * envelope;

        // jaw forces whose gripper-frame projections are equal and opposite
        let right_in_g = Vector3::new(0.0, -right_n, 0.0);
        let left_in_g = Vector3::new(0.0, left_n, 0.0);
        let f_right =
            ForceVector::from_vector(pose_r_in_g.rotation().transpose() * right_in_g);
        let f_left = ForceVector::from_vector(pose_l_in_g.rotation().transpose() * left_in_g);

        let frame_l = synthesize_frame(&rig.left, &f_left, t, &mut rng_left);
        let frame_r = synthesize_frame(&rig.right, &f_right, t, &mut rng_right);

        let half_rep =
            0.5 * (spec.jaw_reported_rad + rig.mount_right_rad + rig.mount_left_rad);
        let mut thetas = [0.0; 7];
        thetas[..5].copy_from_slice(&spec.proximal_rad);
        thetas[5] = spec.bisector_rad + half_rep;
        thetas[6] = half_rep - spec.bisector_rad;

        rows.push(DualJawRow {
            t_s: t,
            thetas,
            theta_jaw_prime: spec.jaw_reported_rad,
            v_left: frame_l.v,
            v_right: frame_r.v,
            ground_truth: Some(ForceVector::new(0.0, right_n.min(left_n), 0.0)),
        });
    }
    Ok(DualJawLog { rows, has_ground_truth: true })
}

/// Environment interaction style of a manipulation scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManipulationKind {
    /// Palpation, scraping and light retraction on a compliant flat sample.
    FlatTissue,
    /// Grasp-and-pull on a vertical stem: higher axial retraction forces.
    Stem,
}

/// Teleoperated manipulation run with environment ground truth.
#[derive(Debug, Clone, Copy)]
pub struct ManipulationSpec {
    pub kind: ManipulationKind,
    pub duration_s: f64,
    /// Grasp force held on the sample while manipulating (N).
    pub grasp_n: f64,
    /// Physical jaw opening while grasping (rad).
    pub jaw_true_rad: f64,
    /// Software-reported opening (smaller under tendon backlash).
    pub jaw_reported_rad: f64,
    /// Composed reported-pose error budget across the wrist joints (rad).
    pub pose_error_rad: f64,
}

impl ManipulationSpec {
    pub fn new(kind: ManipulationKind) -> Self {
        Self {
            kind,
            duration_s: 20.0,
            grasp_n: 1.35,
            jaw_true_rad: 8.4_f64.to_radians(),
            jaw_reported_rad: 2.0_f64.to_radians(),
            pose_error_rad: 2.0_f64.to_radians(),
        }
    }

    /// Environment force on the tool in the robot base frame at time t.
    fn environment_force(&self, t: f64) -> ForceVector {
        use std::f64::consts::TAU;
        let ramp = trapezoid(t, self.duration_s);
        match self.kind {
            ManipulationKind::FlatTissue => ForceVector::new(
                0.9 * (TAU * 0.23 * t).sin() * ramp,
                0.7 * (TAU * 0.31 * t + 1.1).sin() * ramp,
                (-1.6 * (TAU * 0.11 * t).sin().max(0.0) + 0.8 * (TAU * 0.07 * t + 2.4).sin().max(0.0))
                    * ramp,
            ),
            ManipulationKind::Stem => ForceVector::new(
                1.1 * (TAU * 0.17 * t).sin() * ramp,
                0.9 * (TAU * 0.13 * t + 0.7).sin() * ramp,
                3.6 * (TAU * 0.09 * t).sin().max(0.0).powi(2) * ramp,
            ),
        }
    }
}

/// Generates a manipulation log with ground-truth environment forces.
///
/// The environment load splits evenly between the jaws on top of an
/// equal-and-opposite grasp component. Logged joint angles are the true ones
/// perturbed within the pose error budget; the logged jaw opening is the
/// (smaller) software-reported value.
pub fn manipulation_scenario(
    rig: &DualJawRig,
    spec: &ManipulationSpec,
) -> Result<DualJawLog, SimError> {
    if spec.duration_s.is_nan() || spec.duration_s <= 0.0 {
        return Err(SimError::InvalidScenario("duration_s must be positive".into()));
    }
    if spec.grasp_n.is_nan() || spec.grasp_n < 0.0 || spec.grasp_n > rig.left.geom.lateral_range_n {
        return Err(SimError::InvalidScenario(format!(
            "grasp_n must lie in [0, {}] N, got {}",
            rig.left.geom.lateral_range_n, spec.grasp_n
        )));
    }
    if spec.pose_error_rad.is_nan() || spec.pose_error_rad < 0.0 {
        return Err(SimError::InvalidScenario("pose_error_rad must be non-negative".into()));
    }
    rig.left.validate()?;
    rig.right.validate()?;

    let mut rng_left = rig.left.rng();
    let mut rng_right = rig.right.rng();
    // independent stream for encoder errors so voltage noise is unaffected
    let mut rng_pose = ChaCha8Rng::seed_from_u64(rig.left.seed ^ 0x9E37_79B9_7F4A_7C15);

    // six perturbed angles (theta1..theta5 and the bisector) share the budget
    let per_joint = spec.pose_error_rad / 6.0;
    let half_true = 0.5 * (spec.jaw_true_rad + rig.mount_right_rad + rig.mount_left_rad);
    let half_rep = 0.5 * (spec.jaw_reported_rad + rig.mount_right_rad + rig.mount_left_rad);

    use std::f64::consts::TAU;
    let n = (spec.duration_s * SAMPLE_RATE_HZ).round() as usize;
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let t = k as f64 / SAMPLE_RATE_HZ;
        // slow arm sweep around a nominal posture
        let true_proximal = [
            0.15 * (TAU * 0.05 * t).sin(),
            -0.35 + 0.12 * (TAU * 0.04 * t + 0.5).sin(),
            0.2 * (TAU * 0.03 * t + 1.0).sin(),
            0.25 + 0.1 * (TAU * 0.06 * t + 1.5).sin(),
            0.18 * (TAU * 0.045 * t + 2.0).sin(),
        ];
        let true_bisector = 0.3 * (TAU * 0.035 * t).sin();

        let true_state = JawState {
            proximal_rad: true_proximal,
            jaw_right_rad: half_true,
            jaw_left_rad: half_true,
            mount_right_rad: rig.mount_right_rad,
            mount_left_rad: rig.mount_left_rad,
            bisector_rad: true_bisector,
            jaw_min_rad: 0.0,
        };
        let (pose_r, pose_l) = rig.chain.jaw_poses(&true_state)?;
        let (pose_r_in_g, pose_l_in_g) = rig.chain.gripper_relative_poses(&true_state)?;

        let env = spec.environment_force(t).as_vector();
        let grasp = spec.grasp_n;
        let f_right = ForceVector::from_vector(
            pose_r.rotation().transpose() * (env / 2.0)
                + pose_r_in_g.rotation().transpose() * Vector3::new(0.0, -grasp, 0.0),
        );
        let f_left = ForceVector::from_vector(
            pose_l.rotation().transpose() * (env / 2.0)
                + pose_l_in_g.rotation().transpose() * Vector3::new(0.0, grasp, 0.0),
        );

        let frame_l = synthesize_frame(&rig.left, &f_left, t, &mut rng_left);
        let frame_r = synthesize_frame(&rig.right, &f_right, t, &mut rng_right);

        let mut thetas = [0.0; 7];
        for i in 0..5 {
            thetas[i] = true_proximal[i] + rng_pose.gen_range(-per_joint..=per_joint);
        }
        let reported_bisector = true_bisector + rng_pose.gen_range(-per_joint..=per_joint);
        thetas[5] = reported_bisector + half_rep;
        thetas[6] = half_rep - reported_bisector;

        rows.push(DualJawRow {
            t_s: t,
            thetas,
            theta_jaw_prime: spec.jaw_reported_rad,
            v_left: frame_l.v,
            v_right: frame_r.v,
            ground_truth: Some(ForceVector::from_vector(env)),
        });
    }
    Ok(DualJawLog { rows, has_ground_truth: true })
}

/// Analytic per-axis force noise for a uniform channel noise sigma:
/// `sigma * ||row_axis(A_ideal)||_2`.
pub fn force_noise_per_axis(geom: &SensorGeometry, sigma_v: f64) -> [f64; 3] {
    let a = ideal_sensitivity(geom);
    std::array::from_fn(|axis| sigma_v * a.row(axis).norm())
}
