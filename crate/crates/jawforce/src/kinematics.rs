//! Jaw pose kinematics, dual-jaw force resolution, and grasp force.
//!
//! The tool chain is data, not code: a configuration file lists, per joint, a
//! fixed transform and an optional rotation axis. The shipped default chain
//! uses a simplified roll-pitch-yaw wrist and is illustrative, not an exact
//! model of any particular surgical robot. Forces transform as free vectors,
//! so only the rotation blocks of the pose transforms act on them.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{Matrix3, Matrix4, Vector3};

use crate::sensor::{Axis, ForceVector};

/// Maximum allowed orthonormality defect of a rotation block.
pub const ROTATION_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum KinematicsError {
    #[error("rotation block is not orthonormal (max defect {defect:.3e})")]
    NonOrthonormal { defect: f64 },
    #[error("rotation block is a reflection (determinant {det})")]
    Reflection { det: f64 },
    #[error("chain mismatch: {0}")]
    ChainMismatch(String),
}

#[derive(Debug, thiserror::Error)]
pub enum ChainConfigError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Rigid transform: a proper rotation plus a translation in millimetres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform {
    rotation: Matrix3<f64>,
    translation: Vector3<f64>,
}

impl Transform {
    /// Validates orthonormality (to [`ROTATION_TOL`]) and a +1 determinant.
    pub fn new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self, KinematicsError> {
        let defect = (rotation.transpose() * rotation - Matrix3::identity())
            .iter()
            .fold(0.0_f64, |m, x| m.max(x.abs()));
        if defect > ROTATION_TOL {
            return Err(KinematicsError::NonOrthonormal { defect });
        }
        let det = rotation.determinant();
        if det <= 0.0 {
            return Err(KinematicsError::Reflection { det });
        }
        Ok(Self { rotation, translation })
    }

    pub fn identity() -> Self {
        Self { rotation: Matrix3::identity(), translation: Vector3::zeros() }
    }

    /// Pure rotation by `angle_rad` about one local coordinate axis.
    pub fn rotation_about(axis: Axis, angle_rad: f64) -> Self {
        let (s, c) = angle_rad.sin_cos();
        let rotation = match axis {
            Axis::X => Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c),
            Axis::Y => Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c),
            Axis::Z => Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
        };
        Self { rotation, translation: Vector3::zeros() }
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Vector3<f64> {
        &self.translation
    }

    /// Applies the rotation block only; free vectors ignore translation.
    pub fn rotate_vector(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * v
    }

    pub fn to_homogeneous(&self) -> Matrix4<f64> {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.rotation);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.translation);
        m
    }

    /// Rotation orthonormality defect, for drift checks after composition.
    pub fn orthonormality_defect(&self) -> f64 {
        (self.rotation.transpose() * self.rotation - Matrix3::identity())
            .iter()
            .fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Inverse transform.
    pub fn inverse(&self) -> Self {
        let rt = self.rotation.transpose();
        Self { rotation: rt, translation: -(rt * self.translation) }
    }
}

impl std::ops::Mul for Transform {
    type Output = Transform;
    fn mul(self, rhs: Transform) -> Transform {
        Transform {
            rotation: self.rotation * rhs.rotation,
            translation: self.rotation * rhs.translation + self.translation,
        }
    }
}

/// One chain element: a fixed transform, optionally followed by a rotation
/// about a local axis driven by a joint variable.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDescriptor {
    pub name: String,
    pub fixed: Transform,
    pub axis: Option<Axis>,
}

impl JointDescriptor {
    fn evaluate(&self, angle_rad: f64) -> Result<Transform, KinematicsError> {
        match self.axis {
            Some(axis) => Ok(self.fixed * Transform::rotation_about(axis, angle_rad)),
            None if angle_rad == 0.0 => Ok(self.fixed),
            None => Err(KinematicsError::ChainMismatch(format!(
                "joint `{}` has no axis tag but was given a nonzero angle",
                self.name
            ))),
        }
    }
}

/// Joint names with assigned roles in the jaw pose computation.
const PROXIMAL_NAMES: [&str; 5] = ["theta1", "theta2", "theta3", "theta4", "theta5"];
const GRIPPER: &str = "gripper";
const JAW_RIGHT: &str = "jaw_right";
const JAW_LEFT: &str = "jaw_left";
const MOUNT_RIGHT: &str = "mount_right";
const MOUNT_LEFT: &str = "mount_left";
const BRANCH_NAMES: [&str; 4] = [JAW_RIGHT, JAW_LEFT, MOUNT_RIGHT, MOUNT_LEFT];

/// Ordered list of joint descriptors for one instrumented tool.
///
/// The descriptors up to and including `gripper` form the common trunk from
/// the robot base; `jaw_right`/`mount_right` and `jaw_left`/`mount_left`
/// branch off the gripper frame. Extra unnamed descriptors are allowed as
/// fixed trunk segments.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformChain {
    pub joints: Vec<JointDescriptor>,
}

/// Joint angles and fixed offsets of one instrumented grasper.
///
/// Jaw angles are measured from the gripper bisector, one per jaw, positive
/// when open; `bisector_rad` locates the bisector relative to the wrist
/// frame about the jaw pin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JawState {
    /// Proximal joint angles (rad), consumed by `theta1`..`theta5`.
    pub proximal_rad: [f64; 5],
    /// Right jaw angle from the bisector (rad).
    pub jaw_right_rad: f64,
    /// Left jaw angle from the bisector (rad).
    pub jaw_left_rad: f64,
    /// Fixed right sensor-mount rotation (rad).
    pub mount_right_rad: f64,
    /// Fixed left sensor-mount rotation (rad).
    pub mount_left_rad: f64,
    /// Gripper bisector angle from the wrist frame (rad).
    pub bisector_rad: f64,
    /// Minimum jaw opening during grasp (rad).
    pub jaw_min_rad: f64,
}

impl JawState {
    /// Builds the state from software-reported joint values.
    ///
    /// `theta6_raw`/`theta7_raw` are the logged per-jaw angles with mirrored
    /// positive senses, so the bisector is their half-difference and the
    /// reported opening their sum (less the mount offsets). The reported
    /// opening `theta_jaw_prime` is clamped from below by `theta_min` to
    /// compensate tendon backlash, then split equally between the jaws.
    pub fn from_reported(
        proximal_rad: [f64; 5],
        theta6_raw: f64,
        theta7_raw: f64,
        theta_jaw_prime: f64,
        mount_right_rad: f64,
        mount_left_rad: f64,
        theta_min: f64,
    ) -> Self {
        let bisector_rad = 0.5 * (theta6_raw - theta7_raw);
        let jaw = corrected_jaw_angle(theta_jaw_prime, theta_min);
        let half = 0.5 * (jaw + mount_right_rad + mount_left_rad);
        Self {
            proximal_rad,
            jaw_right_rad: half,
            jaw_left_rad: half,
            mount_right_rad,
            mount_left_rad,
            bisector_rad,
            jaw_min_rad: theta_min,
        }
    }

    /// Reported jaw opening consistent with this state's jaw angles.
    pub fn jaw_opening_rad(&self) -> f64 {
        self.jaw_right_rad + self.jaw_left_rad - self.mount_right_rad - self.mount_left_rad
    }

    /// Log-convention per-jaw angles (mirrored senses about the wrist frame).
    pub fn raw_jaw_angles(&self) -> (f64, f64) {
        let half = 0.5 * (self.jaw_opening_rad() + self.mount_right_rad + self.mount_left_rad);
        (self.bisector_rad + half, half - self.bisector_rad)
    }
}

/// Clamps the software-reported jaw angle from below.
///
/// Tendon backlash makes the reported angle smaller than the physical one
/// while grasping; the reported value is only trusted above `theta_min`.
pub fn corrected_jaw_angle(theta_prime_rad: f64, theta_min_rad: f64) -> f64 {
    if theta_prime_rad > theta_min_rad {
        theta_prime_rad
    } else {
        theta_min_rad
    }
}

/// Sensor-frame forces of the two jaws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JawForces {
    pub left: ForceVector,
    pub right: ForceVector,
}

struct ChainParts<'a> {
    trunk: Vec<&'a JointDescriptor>,
    jaw_right: &'a JointDescriptor,
    jaw_left: &'a JointDescriptor,
    mount_right: &'a JointDescriptor,
    mount_left: &'a JointDescriptor,
}

impl TransformChain {
    pub fn new(joints: Vec<JointDescriptor>) -> Self {
        Self { joints }
    }

    fn split_roles(&self) -> Result<ChainParts<'_>, KinematicsError> {
        let find_unique = |name: &str| -> Result<&JointDescriptor, KinematicsError> {
            let mut found = None;
            for j in &self.joints {
                if j.name == name {
                    if found.is_some() {
                        return Err(KinematicsError::ChainMismatch(format!(
                            "duplicate joint `{name}`"
                        )));
                    }
                    found = Some(j);
                }
            }
            found.ok_or_else(|| {
                KinematicsError::ChainMismatch(format!("missing required joint `{name}`"))
            })
        };

        for name in PROXIMAL_NAMES {
            find_unique(name)?;
        }
        let parts = ChainParts {
            trunk: Vec::new(),
            jaw_right: find_unique(JAW_RIGHT)?,
            jaw_left: find_unique(JAW_LEFT)?,
            mount_right: find_unique(MOUNT_RIGHT)?,
            mount_left: find_unique(MOUNT_LEFT)?,
        };
        find_unique(GRIPPER)?;

        let mut trunk = Vec::new();
        let mut seen_gripper = false;
        for j in &self.joints {
            if BRANCH_NAMES.contains(&j.name.as_str()) {
                continue;
            }
            if seen_gripper {
                return Err(KinematicsError::ChainMismatch(format!(
                    "joint `{}` appears after `gripper`; only jaw and mount joints may",
                    j.name
                )));
            }
            trunk.push(j);
            if j.name == GRIPPER {
                seen_gripper = true;
            }
        }
        if !seen_gripper {
            return Err(KinematicsError::ChainMismatch("missing required joint `gripper`".into()));
        }
        Ok(ChainParts { trunk, ..parts })
    }

    /// Pose of the gripper bisector frame in the robot base frame.
    pub fn gripper_pose(&self, state: &JawState) -> Result<Transform, KinematicsError> {
        let parts = self.split_roles()?;
        let mut pose = Transform::identity();
        for j in &parts.trunk {
            let angle = match j.name.as_str() {
                GRIPPER => state.bisector_rad,
                name => match PROXIMAL_NAMES.iter().position(|&p| p == name) {
                    Some(i) => state.proximal_rad[i],
                    None if j.axis.is_none() => 0.0,
                    None => {
                        return Err(KinematicsError::ChainMismatch(format!(
                            "unknown joint `{name}` declares a variable axis"
                        )))
                    }
                },
            };
            pose = pose * j.evaluate(angle)?;
        }
        Ok(pose)
    }

    /// Sensor poses relative to the gripper bisector frame.
    ///
    /// The right jaw opens by `+jaw_right_rad` about the jaw axis and the
    /// left jaw by `-jaw_left_rad`; the fixed mount rotations follow.
    pub fn gripper_relative_poses(
        &self,
        state: &JawState,
    ) -> Result<(Transform, Transform), KinematicsError> {
        let parts = self.split_roles()?;
        let right = parts.jaw_right.evaluate(state.jaw_right_rad)?
            * parts.mount_right.evaluate(state.mount_right_rad)?;
        let left = parts.jaw_left.evaluate(-state.jaw_left_rad)?
            * parts.mount_left.evaluate(state.mount_left_rad)?;
        Ok((right, left))
    }

    /// Sensor-frame-to-robot-base poses of the two jaw sensors.
    pub fn jaw_poses(&self, state: &JawState) -> Result<(Transform, Transform), KinematicsError> {
        let trunk = self.gripper_pose(state)?;
        let (right, left) = self.gripper_relative_poses(state)?;
        Ok((trunk * right, trunk * left))
    }
}

/// Sums the two jaw forces in the parent frame of the given poses.
///
/// Forces are free vectors: only the rotation blocks act.
pub fn resultant_force(poses: (&Transform, &Transform), forces: &JawForces) -> ForceVector {
    let (right_pose, left_pose) = poses;
    let f = right_pose.rotate_vector(&forces.right.as_vector())
        + left_pose.rotate_vector(&forces.left.as_vector());
    ForceVector::from_vector(f)
}

/// Two-point grasp force: the smaller of the two jaw forces projected on the
/// inter-jaw line of action (the y-axis of the gripper frame).
///
/// `poses_in_g` are the sensor poses relative to the gripper frame.
pub fn grasp_force(poses_in_g: (&Transform, &Transform), forces: &JawForces) -> f64 {
    let j_hat = Vector3::new(0.0, 1.0, 0.0);
    let (right_pose, left_pose) = poses_in_g;
    let right = right_pose.rotate_vector(&forces.right.as_vector()).dot(&j_hat).abs();
    let left = left_pose.rotate_vector(&forces.left.as_vector()).dot(&j_hat).abs();
    right.min(left)
}

/// Parses a chain configuration file.
///
/// Grammar, one joint per line:
///
/// ```text
/// <name> r11 r12 r13 r21 r22 r23 r31 r32 r33 tx ty tz [axis x|y|z]
/// ```
///
/// Rotation entries are row-major, translations in millimetres. Blank lines
/// and lines starting with `#` are ignored. Fixed rotations failing the
/// orthonormality check are rejected.
pub fn parse_chain(text: &str) -> Result<TransformChain, ChainConfigError> {
    let mut joints = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 13 && fields.len() != 15 {
            return Err(ChainConfigError::Parse {
                line: idx + 1,
                msg: format!(
                    "expected `name` + 12 numbers [+ `axis x|y|z`], got {} fields",
                    fields.len()
                ),
            });
        }
        let name = fields[0].to_string();
        let mut nums = [0.0_f64; 12];
        for (k, cell) in fields[1..13].iter().enumerate() {
            nums[k] = cell.parse().map_err(|_| ChainConfigError::Parse {
                line: idx + 1,
                msg: format!("invalid number `{cell}`"),
            })?;
            if !nums[k].is_finite() {
                return Err(ChainConfigError::Parse {
                    line: idx + 1,
                    msg: format!("non-finite number `{cell}`"),
                });
            }
        }
        let axis = if fields.len() == 15 {
            if fields[13] != "axis" {
                return Err(ChainConfigError::Parse {
                    line: idx + 1,
                    msg: format!("expected `axis`, got `{}`", fields[13]),
                });
            }
            Some(match fields[14] {
                "x" => Axis::X,
                "y" => Axis::Y,
                "z" => Axis::Z,
                other => {
                    return Err(ChainConfigError::Parse {
                        line: idx + 1,
                        msg: format!("axis must be x, y or z, got `{other}`"),
                    })
                }
            })
        } else {
            None
        };
        let rotation = Matrix3::new(
            nums[0], nums[1], nums[2], nums[3], nums[4], nums[5], nums[6], nums[7], nums[8],
        );
        let translation = Vector3::new(nums[9], nums[10], nums[11]);
        let fixed = Transform::new(rotation, translation).map_err(|e| ChainConfigError::Parse {
            line: idx + 1,
            msg: format!("joint `{name}`: {e}"),
        })?;
        joints.push(JointDescriptor { name, fixed, axis });
    }
    Ok(TransformChain::new(joints))
}

pub fn load_chain(path: &Path) -> Result<TransformChain, ChainConfigError> {
    let text = std::fs::read_to_string(path)?;
    parse_chain(&text)
}

/// Renders a chain back to the configuration grammar.
pub fn chain_to_string(chain: &TransformChain) -> String {
    let mut out = String::new();
    for j in &chain.joints {
        let r = j.fixed.rotation();
        let t = j.fixed.translation();
        let _ = write!(
            out,
            "{} {} {} {} {} {} {} {} {} {} {} {} {}",
            j.name,
            r[(0, 0)], r[(0, 1)], r[(0, 2)],
            r[(1, 0)], r[(1, 1)], r[(1, 2)],
            r[(2, 0)], r[(2, 1)], r[(2, 2)],
            t[0], t[1], t[2]
        );
        if let Some(axis) = j.axis {
            let _ = write!(out, " axis {axis}");
        }
        out.push('\n');
    }
    out
}

/// The simplified chain shipped with the repository (also available as a
/// config file in `configs/`). Illustrative geometry, not robot-exact.
pub fn default_chain() -> TransformChain {
    parse_chain(DEFAULT_CHAIN_TEXT).expect("built-in chain parses")
}

pub const DEFAULT_CHAIN_TEXT: &str = "\
# jawforce-chain v1
# Simplified instrumented-grasper chain: base yaw/pitch, shaft roll, wrist
# pitch and yaw, then the gripper pair about the jaw pin. Translations in mm.
# Illustrative geometry; replace with your robot's model for real data.
theta1      1 0 0 0 1 0 0 0 1   0 0 0     axis z
theta2      1 0 0 0 1 0 0 0 1   0 0 150   axis y
theta3      1 0 0 0 1 0 0 0 1   0 0 150   axis x
theta4      1 0 0 0 1 0 0 0 1   0 0 80    axis y
theta5      1 0 0 0 1 0 0 0 1   0 0 20    axis z
gripper     1 0 0 0 1 0 0 0 1   0 0 10    axis z
jaw_right   1 0 0 0 1 0 0 0 1   0 0 5     axis z
jaw_left    1 0 0 0 1 0 0 0 1   0 0 5     axis z
mount_right 1 0 0 0 1 0 0 0 1   0 0 8     axis z
mount_left  1 0 0 0 1 0 0 0 1   0 0 8     axis z
";
