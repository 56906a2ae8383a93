//! Row-level composition of the full dual-jaw data path.
//!
//! Ties together the calibrated voltage-to-force maps, the jaw-angle
//! correction, and the chain kinematics so batch tools and bindings share one
//! code path.

use crate::calib::{apply, SensitivityMatrix};
use crate::io::{DualJawLog, DualJawRow};
use crate::kinematics::{
    grasp_force, resultant_force, JawForces, JawState, KinematicsError, TransformChain,
};
use crate::sensor::{Axis, ForceVector, SensorGeometry};

/// Fixed per-rig parameters of the resolution step.
#[derive(Debug, Clone, Copy)]
pub struct ResolveSettings {
    /// Minimum jaw opening during grasp (rad); clamps the reported angle.
    pub theta_min_rad: f64,
    /// Fixed right sensor-mount rotation (rad).
    pub mount_right_rad: f64,
    /// Fixed left sensor-mount rotation (rad).
    pub mount_left_rad: f64,
}

impl Default for ResolveSettings {
    fn default() -> Self {
        Self {
            theta_min_rad: 8.4_f64.to_radians(),
            mount_right_rad: 0.0,
            mount_left_rad: 0.0,
        }
    }
}

impl ResolveSettings {
    /// Jaw state for one logged row, with the angle correction applied.
    pub fn state_for_row(&self, row: &DualJawRow) -> JawState {
        JawState::from_reported(
            [row.thetas[0], row.thetas[1], row.thetas[2], row.thetas[3], row.thetas[4]],
            row.thetas[5],
            row.thetas[6],
            row.theta_jaw_prime,
            self.mount_right_rad,
            self.mount_left_rad,
            self.theta_min_rad,
        )
    }
}

fn row_forces(
    sens_left: &SensitivityMatrix,
    sens_right: &SensitivityMatrix,
    row: &DualJawRow,
) -> JawForces {
    JawForces {
        left: apply(sens_left, &row.left_frame()),
        right: apply(sens_right, &row.right_frame()),
    }
}

/// Resolves one logged row into a base-frame resultant force.
pub fn resolve_row(
    chain: &TransformChain,
    sens_left: &SensitivityMatrix,
    sens_right: &SensitivityMatrix,
    row: &DualJawRow,
    settings: &ResolveSettings,
) -> Result<ForceVector, KinematicsError> {
    let state = settings.state_for_row(row);
    let (pose_right, pose_left) = chain.jaw_poses(&state)?;
    Ok(resultant_force((&pose_right, &pose_left), &row_forces(sens_left, sens_right, row)))
}

/// Grasp force of one logged row.
pub fn grip_row(
    chain: &TransformChain,
    sens_left: &SensitivityMatrix,
    sens_right: &SensitivityMatrix,
    row: &DualJawRow,
    settings: &ResolveSettings,
) -> Result<f64, KinematicsError> {
    let state = settings.state_for_row(row);
    let poses_in_g = chain.gripper_relative_poses(&state)?;
    Ok(grasp_force(
        (&poses_in_g.0, &poses_in_g.1),
        &row_forces(sens_left, sens_right, row),
    ))
}

/// One resolved output sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedRow {
    pub t_s: f64,
    pub force: ForceVector,
    pub ground_truth: Option<ForceVector>,
}

/// Resolves every row of a log; output order matches input order.
pub fn resolve_log(
    chain: &TransformChain,
    sens_left: &SensitivityMatrix,
    sens_right: &SensitivityMatrix,
    log: &DualJawLog,
    settings: &ResolveSettings,
) -> Result<Vec<ResolvedRow>, KinematicsError> {
    log.rows
        .iter()
        .map(|row| {
            Ok(ResolvedRow {
                t_s: row.t_s,
                force: resolve_row(chain, sens_left, sens_right, row, settings)?,
                ground_truth: row.ground_truth,
            })
        })
        .collect()
}

/// One grip-force output sample; `reference` is the ground-truth magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GripRow {
    pub t_s: f64,
    pub grip_n: f64,
    pub reference_n: Option<f64>,
}

/// Computes the grasp force for every row of a log.
pub fn grip_log(
    chain: &TransformChain,
    sens_left: &SensitivityMatrix,
    sens_right: &SensitivityMatrix,
    log: &DualJawLog,
    settings: &ResolveSettings,
) -> Result<Vec<GripRow>, KinematicsError> {
    log.rows
        .iter()
        .map(|row| {
            Ok(GripRow {
                t_s: row.t_s,
                grip_n: grip_row(chain, sens_left, sens_right, row, settings)?,
                reference_n: row.ground_truth.map(|g| g.norm()),
            })
        })
        .collect()
}

/// Per-axis error summary against a reference stream (accuracy-evaluation
/// table shape: RMSE, NRMSD, max error).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub rmse_n: [f64; 3],
    pub nrmsd_pct: [f64; 3],
    pub max_error_n: [f64; 3],
}

impl ErrorReport {
    pub fn compute(
        pred: &[ForceVector],
        truth: &[ForceVector],
        geom: &SensorGeometry,
    ) -> Result<Self, crate::calib::CalibError> {
        let rmse_n = crate::calib::rmse(pred, truth)?;
        let nrmsd_pct = crate::calib::nrmsd(&rmse_n, geom);
        let mut max_error_n = [0.0_f64; 3];
        for (p, t) in pred.iter().zip(truth) {
            for axis in Axis::ALL {
                let e = (p.component(axis) - t.component(axis)).abs();
                let i = axis.index();
                max_error_n[i] = max_error_n[i].max(e);
            }
        }
        Ok(Self { rmse_n, nrmsd_pct, max_error_n })
    }
}

/// Scalar error summary for grip traces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarErrorReport {
    pub rmse_n: f64,
    pub max_error_n: f64,
}

impl ScalarErrorReport {
    pub fn compute(pred: &[f64], truth: &[f64]) -> Option<Self> {
        if pred.is_empty() || pred.len() != truth.len() {
            return None;
        }
        let mut acc = 0.0;
        let mut max_error_n = 0.0_f64;
        for (p, t) in pred.iter().zip(truth) {
            let e = p - t;
            acc += e * e;
            max_error_n = max_error_n.max(e.abs());
        }
        Some(Self { rmse_n: (acc / pred.len() as f64).sqrt(), max_error_n })
    }
}
