//! C ABI for the jawforce sensing library.
//!
//! The surface covers the real-time data path a robot controller needs:
//! loading or fitting sensitivity matrices, applying them to channel
//! voltages, and resolving dual-jaw rows into resultant and grasp forces.
//!
//! Conventions:
//! - objects are opaque handles created by `jf_*_load`/`jf_*_fit` functions
//!   and released with the matching `jf_*_free`;
//! - every fallible function returns a [`JfStatus`]; on failure
//!   [`jf_last_error_message`] holds a human-readable reason for the calling
//!   thread until its next FFI call;
//! - all angles are radians, forces newtons, voltages volts.
//!
//! The C header is generated into `include/jawforce.h` at build time.

#![deny(unsafe_op_in_unsafe_fn)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;

use jawforce::calib::{
    fit_sensitivity, read_sensitivity, write_sensitivity, CalibError, CalibrationSample, Phase,
    SensitivityMatrix,
};
use jawforce::io::DualJawRow;
use jawforce::kinematics::{load_chain, TransformChain};
use jawforce::pipeline::{grip_row, resolve_row, ResolveSettings};
use jawforce::sensor::{ChannelFrame, ForceVector, SensorGeometry};

/// Result of a fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JfStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument failed validation (non-finite value, bad geometry, ...).
    InvalidArgument = 2,
    /// A file could not be read or written.
    IoError = 3,
    /// A file exists but does not match its schema.
    ParseError = 4,
    /// The calibration data does not determine the force map.
    RankDeficient = 5,
    /// The chain and the supplied joint state do not match.
    ChainMismatch = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', "?")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: JfStatus, msg: &str) -> JfStatus {
    set_error(msg);
    status
}

/// Message describing the most recent failure on the calling thread.
///
/// The pointer stays valid until this thread's next jawforce call.
#[no_mangle]
pub extern "C" fn jf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn jf_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Physical constants of one jaw sensor; `jf_geometry_default` returns the
/// as-built values. Lengths in mm, gain in N/V, ranges in N.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct JfGeometry {
    pub h_mm: f64,
    pub d_mm: f64,
    pub l_mm: f64,
    pub w_mm: f64,
    pub c_n_per_v: f64,
    pub lateral_range_n: f64,
    pub axial_range_n: f64,
}

impl From<JfGeometry> for SensorGeometry {
    fn from(g: JfGeometry) -> Self {
        SensorGeometry {
            h_mm: g.h_mm,
            d_mm: g.d_mm,
            l_mm: g.l_mm,
            w_mm: g.w_mm,
            c_n_per_v: g.c_n_per_v,
            lateral_range_n: g.lateral_range_n,
            axial_range_n: g.axial_range_n,
        }
    }
}

/// As-built sensor constants.
#[no_mangle]
pub extern "C" fn jf_geometry_default() -> JfGeometry {
    let g = SensorGeometry::default();
    JfGeometry {
        h_mm: g.h_mm,
        d_mm: g.d_mm,
        l_mm: g.l_mm,
        w_mm: g.w_mm,
        c_n_per_v: g.c_n_per_v,
        lateral_range_n: g.lateral_range_n,
        axial_range_n: g.axial_range_n,
    }
}

/// Reported joint values of one dual-jaw sample.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct JfJointState {
    /// theta1..theta7 (rad); theta6/theta7 use mirrored positive senses.
    pub thetas: [f64; 7],
    /// Software-reported jaw opening (rad).
    pub theta_jaw_prime: f64,
}

/// Fixed parameters of the resolution step.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct JfResolveSettings {
    /// Minimum jaw opening during grasp (rad).
    pub theta_min_rad: f64,
    /// Fixed sensor-mount rotations (rad).
    pub mount_right_rad: f64,
    pub mount_left_rad: f64,
}

impl From<JfResolveSettings> for ResolveSettings {
    fn from(s: JfResolveSettings) -> Self {
        ResolveSettings {
            theta_min_rad: s.theta_min_rad,
            mount_right_rad: s.mount_right_rad,
            mount_left_rad: s.mount_left_rad,
        }
    }
}

/// Opaque handle to a calibrated sensitivity matrix.
pub struct JfSensitivity {
    inner: SensitivityMatrix,
}

/// Opaque handle to a parsed kinematic chain.
pub struct JfChain {
    inner: TransformChain,
}

unsafe fn path_arg<'a>(ptr: *const c_char) -> Result<&'a Path, JfStatus> {
    if ptr.is_null() {
        return Err(fail(JfStatus::NullPointer, "path is null"));
    }
    let s = unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| fail(JfStatus::InvalidArgument, "path is not valid UTF-8"))?;
    Ok(Path::new(s))
}

fn geometry_arg(geom: JfGeometry) -> Result<SensorGeometry, JfStatus> {
    let g: SensorGeometry = geom.into();
    g.validate().map_err(|e| fail(JfStatus::InvalidArgument, &e.to_string()))?;
    Ok(g)
}

unsafe fn slice_arg<'a>(ptr: *const f64, len: usize, what: &str) -> Result<&'a [f64], JfStatus> {
    if ptr.is_null() {
        return Err(fail(JfStatus::NullPointer, &format!("{what} is null")));
    }
    let s = unsafe { std::slice::from_raw_parts(ptr, len) };
    if s.iter().any(|v| !v.is_finite()) {
        return Err(fail(JfStatus::InvalidArgument, &format!("{what} contains non-finite values")));
    }
    Ok(s)
}

fn voltages_from(slice: &[f64]) -> ChannelFrame {
    let mut v = [0.0; 8];
    v.copy_from_slice(slice);
    ChannelFrame::new(0.0, v)
}

/// Loads a sensitivity matrix from its plain-text exchange file.
///
/// # Safety
/// `path` must point to a NUL-terminated string and `out` to a writable
/// pointer slot. On success `*out` owns the handle; release it with
/// [`jf_sensitivity_free`].
#[no_mangle]
pub unsafe extern "C" fn jf_sensitivity_load(
    path: *const c_char,
    geom: JfGeometry,
    out: *mut *mut JfSensitivity,
) -> JfStatus {
    if out.is_null() {
        return fail(JfStatus::NullPointer, "out is null");
    }
    let path = match unsafe { path_arg(path) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    let geom = match geometry_arg(geom) {
        Ok(g) => g,
        Err(s) => return s,
    };
    match read_sensitivity(path, geom) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(JfSensitivity { inner })) };
            JfStatus::Ok
        }
        Err(jawforce::calib::SensitivityFileError::Io(e)) => fail(JfStatus::IoError, &e.to_string()),
        Err(e) => fail(JfStatus::ParseError, &e.to_string()),
    }
}

/// Builds the ideal-model matrix (zero offsets) for a geometry.
///
/// # Safety
/// `out` must point to a writable pointer slot; see [`jf_sensitivity_load`].
#[no_mangle]
pub unsafe extern "C" fn jf_sensitivity_ideal(
    geom: JfGeometry,
    out: *mut *mut JfSensitivity,
) -> JfStatus {
    if out.is_null() {
        return fail(JfStatus::NullPointer, "out is null");
    }
    let geom = match geometry_arg(geom) {
        Ok(g) => g,
        Err(s) => return s,
    };
    let inner = SensitivityMatrix::ideal(geom);
    unsafe { *out = Box::into_raw(Box::new(JfSensitivity { inner })) };
    JfStatus::Ok
}

/// Fits a sensitivity matrix from raw calibration arrays.
///
/// `voltages` is `n_samples * 8` values (sample-major), `forces` is
/// `n_samples * 3` reference forces (x, y, z per sample).
///
/// # Safety
/// The arrays must hold at least the stated number of elements; `out` must
/// point to a writable pointer slot; see [`jf_sensitivity_load`].
#[no_mangle]
pub unsafe extern "C" fn jf_sensitivity_fit(
    voltages: *const f64,
    forces: *const f64,
    n_samples: usize,
    geom: JfGeometry,
    out: *mut *mut JfSensitivity,
) -> JfStatus {
    if out.is_null() {
        return fail(JfStatus::NullPointer, "out is null");
    }
    let geom = match geometry_arg(geom) {
        Ok(g) => g,
        Err(s) => return s,
    };
    let v = match unsafe { slice_arg(voltages, n_samples.saturating_mul(8), "voltages") } {
        Ok(s) => s,
        Err(e) => return e,
    };
    let f = match unsafe { slice_arg(forces, n_samples.saturating_mul(3), "forces") } {
        Ok(s) => s,
        Err(e) => return e,
    };
    let samples: Vec<CalibrationSample> = (0..n_samples)
        .map(|i| {
            let mut ch = [0.0; 8];
            ch.copy_from_slice(&v[i * 8..i * 8 + 8]);
            CalibrationSample {
                frame: ChannelFrame::new(i as f64, ch),
                ref_force: ForceVector::new(f[i * 3], f[i * 3 + 1], f[i * 3 + 2]),
                phase: Phase::Loading,
                axis_label: jawforce::calib::AxisLabel::Mixed,
            }
        })
        .collect();
    match fit_sensitivity(&samples, geom) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(JfSensitivity { inner })) };
            JfStatus::Ok
        }
        Err(e @ CalibError::RankDeficient { .. }) => fail(JfStatus::RankDeficient, &e.to_string()),
        Err(e) => fail(JfStatus::InvalidArgument, &e.to_string()),
    }
}

/// Writes a sensitivity matrix to its plain-text exchange format.
///
/// # Safety
/// `sens` must be a live handle from this library; `path` a NUL-terminated
/// string.
#[no_mangle]
pub unsafe extern "C" fn jf_sensitivity_save(
    sens: *const JfSensitivity,
    path: *const c_char,
) -> JfStatus {
    if sens.is_null() {
        return fail(JfStatus::NullPointer, "sens is null");
    }
    let path = match unsafe { path_arg(path) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    match write_sensitivity(path, &unsafe { &*sens }.inner) {
        Ok(()) => JfStatus::Ok,
        Err(e) => fail(JfStatus::IoError, &e.to_string()),
    }
}

/// Applies the affine map: eight voltages in, three force components out.
///
/// # Safety
/// `sens` must be a live handle; `voltages` holds 8 values and `force_out`
/// has room for 3.
#[no_mangle]
pub unsafe extern "C" fn jf_sensitivity_apply(
    sens: *const JfSensitivity,
    voltages: *const f64,
    force_out: *mut f64,
) -> JfStatus {
    if sens.is_null() || force_out.is_null() {
        return fail(JfStatus::NullPointer, "sens or force_out is null");
    }
    let v = match unsafe { slice_arg(voltages, 8, "voltages") } {
        Ok(s) => s,
        Err(e) => return e,
    };
    let f = jawforce::calib::apply(&unsafe { &*sens }.inner, &voltages_from(v));
    let out = unsafe { std::slice::from_raw_parts_mut(force_out, 3) };
    out.copy_from_slice(&[f.fx, f.fy, f.fz]);
    JfStatus::Ok
}

/// Releases a sensitivity handle. Null is a no-op.
///
/// # Safety
/// `sens` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn jf_sensitivity_free(sens: *mut JfSensitivity) {
    if !sens.is_null() {
        drop(unsafe { Box::from_raw(sens) });
    }
}

/// Parses a chain configuration file.
///
/// # Safety
/// As [`jf_sensitivity_load`]; release with [`jf_chain_free`].
#[no_mangle]
pub unsafe extern "C" fn jf_chain_load(path: *const c_char, out: *mut *mut JfChain) -> JfStatus {
    if out.is_null() {
        return fail(JfStatus::NullPointer, "out is null");
    }
    let path = match unsafe { path_arg(path) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    match load_chain(path) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(JfChain { inner })) };
            JfStatus::Ok
        }
        Err(jawforce::kinematics::ChainConfigError::Io(e)) => fail(JfStatus::IoError, &e.to_string()),
        Err(e) => fail(JfStatus::ParseError, &e.to_string()),
    }
}

/// Builds the built-in simplified chain.
///
/// # Safety
/// `out` must point to a writable pointer slot; release with
/// [`jf_chain_free`].
#[no_mangle]
pub unsafe extern "C" fn jf_chain_default(out: *mut *mut JfChain) -> JfStatus {
    if out.is_null() {
        return fail(JfStatus::NullPointer, "out is null");
    }
    let inner = jawforce::kinematics::default_chain();
    unsafe { *out = Box::into_raw(Box::new(JfChain { inner })) };
    JfStatus::Ok
}

/// Releases a chain handle. Null is a no-op.
///
/// # Safety
/// `chain` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn jf_chain_free(chain: *mut JfChain) {
    if !chain.is_null() {
        drop(unsafe { Box::from_raw(chain) });
    }
}

/// Clamps the software-reported jaw angle from below (radians).
#[no_mangle]
pub extern "C" fn jf_corrected_jaw_angle(theta_prime_rad: f64, theta_min_rad: f64) -> f64 {
    jawforce::kinematics::corrected_jaw_angle(theta_prime_rad, theta_min_rad)
}

fn row_from(joints: &JfJointState, v_left: &[f64], v_right: &[f64]) -> DualJawRow {
    let mut vl = [0.0; 8];
    vl.copy_from_slice(v_left);
    let mut vr = [0.0; 8];
    vr.copy_from_slice(v_right);
    DualJawRow {
        t_s: 0.0,
        thetas: joints.thetas,
        theta_jaw_prime: joints.theta_jaw_prime,
        v_left: vl,
        v_right: vr,
        ground_truth: None,
    }
}

/// Resolves one dual-jaw sample into a base-frame force (3 components out).
///
/// # Safety
/// All handles must be live; `joints` must be readable; `v_left`/`v_right`
/// hold 8 values each and `force_out` has room for 3.
#[no_mangle]
pub unsafe extern "C" fn jf_resolve_row(
    chain: *const JfChain,
    sens_left: *const JfSensitivity,
    sens_right: *const JfSensitivity,
    joints: *const JfJointState,
    settings: JfResolveSettings,
    v_left: *const f64,
    v_right: *const f64,
    force_out: *mut f64,
) -> JfStatus {
    if chain.is_null()
        || sens_left.is_null()
        || sens_right.is_null()
        || joints.is_null()
        || force_out.is_null()
    {
        return fail(JfStatus::NullPointer, "a required argument is null");
    }
    let vl = match unsafe { slice_arg(v_left, 8, "v_left") } {
        Ok(s) => s,
        Err(e) => return e,
    };
    let vr = match unsafe { slice_arg(v_right, 8, "v_right") } {
        Ok(s) => s,
        Err(e) => return e,
    };
    let row = row_from(unsafe { &*joints }, vl, vr);
    match resolve_row(
        &unsafe { &*chain }.inner,
        &unsafe { &*sens_left }.inner,
        &unsafe { &*sens_right }.inner,
        &row,
        &settings.into(),
    ) {
        Ok(f) => {
            let out = unsafe { std::slice::from_raw_parts_mut(force_out, 3) };
            out.copy_from_slice(&[f.fx, f.fy, f.fz]);
            JfStatus::Ok
        }
        Err(e) => fail(JfStatus::ChainMismatch, &e.to_string()),
    }
}

/// Computes the grasp force of one dual-jaw sample.
///
/// # Safety
/// As [`jf_resolve_row`]; `grip_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jf_grip_row(
    chain: *const JfChain,
    sens_left: *const JfSensitivity,
    sens_right: *const JfSensitivity,
    joints: *const JfJointState,
    settings: JfResolveSettings,
    v_left: *const f64,
    v_right: *const f64,
    grip_out: *mut f64,
) -> JfStatus {
    if chain.is_null()
        || sens_left.is_null()
        || sens_right.is_null()
        || joints.is_null()
        || grip_out.is_null()
    {
        return fail(JfStatus::NullPointer, "a required argument is null");
    }
    let vl = match unsafe { slice_arg(v_left, 8, "v_left") } {
        Ok(s) => s,
        Err(e) => return e,
    };
    let vr = match unsafe { slice_arg(v_right, 8, "v_right") } {
        Ok(s) => s,
        Err(e) => return e,
    };
    let row = row_from(unsafe { &*joints }, vl, vr);
    match grip_row(
        &unsafe { &*chain }.inner,
        &unsafe { &*sens_left }.inner,
        &unsafe { &*sens_right }.inner,
        &row,
        &settings.into(),
    ) {
        Ok(g) => {
            unsafe { *grip_out = g };
            JfStatus::Ok
        }
        Err(e) => fail(JfStatus::ChainMismatch, &e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn c_path(p: &Path) -> CString {
        CString::new(p.to_str().unwrap()).unwrap()
    }

    #[test]
    fn ideal_apply_matches_the_library() {
        let mut handle: *mut JfSensitivity = ptr::null_mut();
        let status = unsafe { jf_sensitivity_ideal(jf_geometry_default(), &mut handle) };
        assert_eq!(status, JfStatus::Ok);
        let v = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let mut f = [0.0; 3];
        let status = unsafe { jf_sensitivity_apply(handle, v.as_ptr(), f.as_mut_ptr()) };
        assert_eq!(status, JfStatus::Ok);
        assert!((f[0] - 1.062871).abs() < 1e-6);
        assert!((f[1] - 0.333355).abs() < 1e-6);
        assert!((f[2] - 3.063).abs() < 1e-12);
        unsafe { jf_sensitivity_free(handle) };
    }

    #[test]
    fn save_load_round_trip_and_error_paths() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sens.txt");
        let cpath = c_path(&path);

        let mut handle: *mut JfSensitivity = ptr::null_mut();
        assert_eq!(
            unsafe { jf_sensitivity_ideal(jf_geometry_default(), &mut handle) },
            JfStatus::Ok
        );
        assert_eq!(unsafe { jf_sensitivity_save(handle, cpath.as_ptr()) }, JfStatus::Ok);

        let mut reloaded: *mut JfSensitivity = ptr::null_mut();
        assert_eq!(
            unsafe { jf_sensitivity_load(cpath.as_ptr(), jf_geometry_default(), &mut reloaded) },
            JfStatus::Ok
        );
        let v = [0.1, -0.2, 0.3, 0.0, 0.5, 0.0, -0.4, 0.2];
        let mut a = [0.0; 3];
        let mut b = [0.0; 3];
        unsafe {
            jf_sensitivity_apply(handle, v.as_ptr(), a.as_mut_ptr());
            jf_sensitivity_apply(reloaded, v.as_ptr(), b.as_mut_ptr());
        }
        assert_eq!(a, b);

        // missing file: IoError with a message
        let missing = c_path(&dir.path().join("nope.txt"));
        let mut h: *mut JfSensitivity = ptr::null_mut();
        assert_eq!(
            unsafe { jf_sensitivity_load(missing.as_ptr(), jf_geometry_default(), &mut h) },
            JfStatus::IoError
        );
        let msg = unsafe { CStr::from_ptr(jf_last_error_message()) };
        assert!(!msg.to_bytes().is_empty());

        // corrupt file: ParseError
        let bad = dir.path().join("bad.txt");
        std::fs::write(&bad, "nonsense\n").unwrap();
        let cbad = c_path(&bad);
        assert_eq!(
            unsafe { jf_sensitivity_load(cbad.as_ptr(), jf_geometry_default(), &mut h) },
            JfStatus::ParseError
        );

        unsafe {
            jf_sensitivity_free(handle);
            jf_sensitivity_free(reloaded);
        }
    }

    #[test]
    fn fit_recovers_a_known_affine_map() {
        // synthesise samples from the ideal matrix plus a constant offset
        let geom = SensorGeometry::default();
        let ideal = SensitivityMatrix::ideal(geom);
        let mut voltages = Vec::new();
        let mut forces = Vec::new();
        let mut x: u64 = 0x12345;
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        for _ in 0..64 {
            let mut v = [0.0; 8];
            for item in &mut v {
                *item = next();
            }
            let f = jawforce::calib::apply(&ideal, &ChannelFrame::new(0.0, v));
            voltages.extend_from_slice(&v);
            forces.extend_from_slice(&[f.fx + 0.5, f.fy - 0.25, f.fz + 1.0]);
        }
        let mut handle: *mut JfSensitivity = ptr::null_mut();
        let status = unsafe {
            jf_sensitivity_fit(
                voltages.as_ptr(),
                forces.as_ptr(),
                64,
                jf_geometry_default(),
                &mut handle,
            )
        };
        assert_eq!(status, JfStatus::Ok);
        let mut f = [0.0; 3];
        let zeros = [0.0; 8];
        unsafe { jf_sensitivity_apply(handle, zeros.as_ptr(), f.as_mut_ptr()) };
        assert!((f[0] - 0.5).abs() < 1e-9);
        assert!((f[1] + 0.25).abs() < 1e-9);
        assert!((f[2] - 1.0).abs() < 1e-9);
        unsafe { jf_sensitivity_free(handle) };

        // degenerate data reports RankDeficient
        let flat_v = vec![0.3; 16 * 8];
        let flat_f = vec![0.0; 16 * 3];
        let status = unsafe {
            jf_sensitivity_fit(
                flat_v.as_ptr(),
                flat_f.as_ptr(),
                16,
                jf_geometry_default(),
                &mut handle,
            )
        };
        assert_eq!(status, JfStatus::RankDeficient);
    }

    #[test]
    fn resolve_and_grip_through_the_default_chain() {
        let mut chain: *mut JfChain = ptr::null_mut();
        assert_eq!(unsafe { jf_chain_default(&mut chain) }, JfStatus::Ok);
        let mut sens: *mut JfSensitivity = ptr::null_mut();
        assert_eq!(
            unsafe { jf_sensitivity_ideal(jf_geometry_default(), &mut sens) },
            JfStatus::Ok
        );

        let joints = JfJointState { thetas: [0.0; 7], theta_jaw_prime: 0.2 };
        let settings = JfResolveSettings {
            theta_min_rad: 8.4_f64.to_radians(),
            mount_right_rad: 0.0,
            mount_left_rad: 0.0,
        };
        let v = [0.0; 8];
        let mut force = [0.0; 3];
        let status = unsafe {
            jf_resolve_row(
                chain,
                sens,
                sens,
                &joints,
                settings,
                v.as_ptr(),
                v.as_ptr(),
                force.as_mut_ptr(),
            )
        };
        assert_eq!(status, JfStatus::Ok);
        assert_eq!(force, [0.0; 3]);

        let mut grip = -1.0;
        let status = unsafe {
            jf_grip_row(chain, sens, sens, &joints, settings, v.as_ptr(), v.as_ptr(), &mut grip)
        };
        assert_eq!(status, JfStatus::Ok);
        assert_eq!(grip, 0.0);

        // clamp helper is exposed directly
        assert_eq!(jf_corrected_jaw_angle(0.05, 0.1), 0.1);
        assert_eq!(jf_corrected_jaw_angle(0.2, 0.1), 0.2);

        unsafe {
            jf_chain_free(chain);
            jf_sensitivity_free(sens);
        }
    }

    #[test]
    fn null_and_nonfinite_arguments_are_rejected() {
        let mut handle: *mut JfSensitivity = ptr::null_mut();
        assert_eq!(
            unsafe { jf_sensitivity_load(ptr::null(), jf_geometry_default(), &mut handle) },
            JfStatus::NullPointer
        );
        assert_eq!(
            unsafe { jf_sensitivity_ideal(jf_geometry_default(), &mut handle) },
            JfStatus::Ok
        );
        let bad = [f64::NAN; 8];
        let mut f = [0.0; 3];
        assert_eq!(
            unsafe { jf_sensitivity_apply(handle, bad.as_ptr(), f.as_mut_ptr()) },
            JfStatus::InvalidArgument
        );
        let mut geo = jf_geometry_default();
        geo.h_mm = -1.0;
        let mut h2: *mut JfSensitivity = ptr::null_mut();
        assert_eq!(unsafe { jf_sensitivity_ideal(geo, &mut h2) }, JfStatus::InvalidArgument);
        unsafe { jf_sensitivity_free(handle) };
    }
}
