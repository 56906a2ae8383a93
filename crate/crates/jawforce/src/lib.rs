//! Force sensing data path for a dual-jaw instrumented grasper.
//!
//! The crate covers the full software side of a jaw-mounted 3-DoF load-cell
//! force sensor: the ideal sensing model, affine least-squares calibration
//! with quality metrics, kinematic resolution of the two jaw forces into a
//! common robot frame, grasp-force estimation, log file schemas, and a
//! synthetic sensor simulator that serves as ground truth for testing.

pub mod calib;
pub mod config;
pub mod io;
pub mod kinematics;
pub mod pipeline;
pub mod sensor;
pub mod sim;

pub use calib::{
    apply, fit_sensitivity, hysteresis, nrmsd, r_squared, rmse, CalibrationReport,
    CalibrationSample, SensitivityMatrix,
};
pub use sensor::{
    ideal_inverse, ideal_sensitivity, moment_residual, Axis, ChannelFrame, ForceVector,
    MomentPair, SensorGeometry,
};
