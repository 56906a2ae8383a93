//! Affine sensitivity calibration and the four quality metrics.
//!
//! The fit estimates a 3x9 matrix (8 voltage gains plus a constant offset per
//! force axis) by linear least squares against a reference force sensor. The
//! solve centres the data and uses an SVD pseudo-inverse, so it is
//! deterministic, tolerant of near-collinear channels, and returns the
//! minimum-norm gain matrix when the excitation does not span all eight
//! channel directions (ideal noise-free data spans only three).

use std::fmt;
use std::path::Path;

use nalgebra::{DMatrix, SMatrix, Vector3};

use crate::sensor::{Axis, ChannelFrame, ForceVector, SensorGeometry, Sensitivity3x8};

/// Augmented 3x9 sensitivity block: 8 voltage columns plus the offset column.
pub type Sensitivity3x9 = SMatrix<f64, 3, 9>;

/// Relative singular-value cutoff for the pseudo-inverse solve.
const SV_RTOL: f64 = 1e-10;

/// Minimum number of calibration samples accepted by the fit.
pub const MIN_FIT_SAMPLES: usize = 9;

/// Loading direction of one calibration sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Loading,
    Unloading,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Loading => "load",
            Phase::Unloading => "unload",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which axis a calibration run excited, or `Mixed` for free-form loading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisLabel {
    X,
    Y,
    Z,
    Mixed,
}

impl AxisLabel {
    pub fn axis(self) -> Option<Axis> {
        match self {
            AxisLabel::X => Some(Axis::X),
            AxisLabel::Y => Some(Axis::Y),
            AxisLabel::Z => Some(Axis::Z),
            AxisLabel::Mixed => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AxisLabel::X => "x",
            AxisLabel::Y => "y",
            AxisLabel::Z => "z",
            AxisLabel::Mixed => "mixed",
        }
    }
}

impl From<Axis> for AxisLabel {
    fn from(a: Axis) -> Self {
        match a {
            Axis::X => AxisLabel::X,
            Axis::Y => AxisLabel::Y,
            Axis::Z => AxisLabel::Z,
        }
    }
}

impl fmt::Display for AxisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sign of a per-axis loading direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Pos, Sign::Neg];

    pub fn index(self) -> usize {
        match self {
            Sign::Pos => 0,
            Sign::Neg => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Pos => "+",
            Sign::Neg => "-",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One calibration observation: a voltage frame with its reference force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationSample {
    pub frame: ChannelFrame,
    /// Force reported by the reference sensor (N).
    pub ref_force: ForceVector,
    pub phase: Phase,
    pub axis_label: AxisLabel,
}

#[derive(Debug, thiserror::Error)]
pub enum CalibError {
    #[error("calibration fit needs at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error(
        "voltage excitation spans only {rank} independent direction(s); \
         load the sensor along more axes and refit"
    )]
    RankDeficient { rank: usize },
    #[error("sequence length mismatch: {pred} predictions vs {truth} references")]
    LengthMismatch { pred: usize, truth: usize },
    #[error("metric requires at least {min} samples, got {got}")]
    NotEnoughData { min: usize, got: usize },
    #[error("hysteresis group {axis}{sign} has no {missing} samples")]
    MissingPhase { axis: Axis, sign: Sign, missing: Phase },
}

/// Calibrated affine map from channel voltages to forces.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityMatrix {
    /// 3x9 matrix: N/V in the first 8 columns, N in the offset column.
    pub a_plus: Sensitivity3x9,
    /// Geometry the calibration was performed with (range provenance).
    pub geom: SensorGeometry,
}

impl SensitivityMatrix {
    pub fn new(a_plus: Sensitivity3x9, geom: SensorGeometry) -> Self {
        Self { a_plus, geom }
    }

    /// Builds the augmented matrix from a linear block and an offset column.
    pub fn from_parts(linear: Sensitivity3x8, offset: Vector3<f64>, geom: SensorGeometry) -> Self {
        let mut a_plus = Sensitivity3x9::zeros();
        a_plus.fixed_view_mut::<3, 8>(0, 0).copy_from(&linear);
        a_plus.set_column(8, &offset);
        Self { a_plus, geom }
    }

    /// The ideal-model matrix with zero offsets.
    pub fn ideal(geom: SensorGeometry) -> Self {
        Self::from_parts(crate::sensor::ideal_sensitivity(&geom), Vector3::zeros(), geom)
    }

    pub fn linear_block(&self) -> Sensitivity3x8 {
        self.a_plus.fixed_view::<3, 8>(0, 0).into_owned()
    }

    pub fn offset(&self) -> Vector3<f64> {
        self.a_plus.column(8).into_owned()
    }
}

/// Applies the affine map: `F = A+ [v1..v8, 1]^T`.
pub fn apply(s: &SensitivityMatrix, frame: &ChannelFrame) -> ForceVector {
    let f = s.linear_block() * frame.voltages() + s.offset();
    ForceVector::from_vector(f)
}

/// Fits the augmented sensitivity matrix by least squares.
///
/// The data is centred before the solve, so the offset column absorbs any
/// constant preload on the channels exactly. Requires voltage excitation
/// spanning at least three independent directions (in practice: load all
/// three axes). Deterministic for a fixed sample order.
pub fn fit_sensitivity(
    samples: &[CalibrationSample],
    geom: SensorGeometry,
) -> Result<SensitivityMatrix, CalibError> {
    let n = samples.len();
    if n < MIN_FIT_SAMPLES {
        return Err(CalibError::TooFewSamples { min: MIN_FIT_SAMPLES, got: n });
    }

    let mut v_mean = [0.0; 8];
    let mut f_mean = Vector3::zeros();
    for s in samples {
        for (m, v) in v_mean.iter_mut().zip(s.frame.v) {
            *m += v;
        }
        f_mean += s.ref_force.as_vector();
    }
    for m in &mut v_mean {
        *m /= n as f64;
    }
    f_mean /= n as f64;

    let mut x = DMatrix::zeros(n, 8);
    let mut y = DMatrix::zeros(n, 3);
    for (i, s) in samples.iter().enumerate() {
        for j in 0..8 {
            x[(i, j)] = s.frame.v[j] - v_mean[j];
        }
        let fc = s.ref_force.as_vector() - f_mean;
        for j in 0..3 {
            y[(i, j)] = fc[j];
        }
    }

    let svd = x.svd(true, true);
    let sv_max = svd.singular_values.max();
    let eps = SV_RTOL * sv_max;
    let rank = svd.singular_values.iter().filter(|&&s| s > eps).count();
    if rank < 3 {
        return Err(CalibError::RankDeficient { rank });
    }

    let coeffs = svd
        .solve(&y, eps)
        .expect("SVD computed with both factors");

    let mut linear = Sensitivity3x8::zeros();
    for axis in 0..3 {
        for ch in 0..8 {
            linear[(axis, ch)] = coeffs[(ch, axis)];
        }
    }
    let offset = f_mean - linear * nalgebra::SVector::<f64, 8>::from_column_slice(&v_mean);
    Ok(SensitivityMatrix::from_parts(linear, offset, geom))
}

/// Per-axis root mean square error (N).
pub fn rmse(pred: &[ForceVector], truth: &[ForceVector]) -> Result<[f64; 3], CalibError> {
    if pred.len() != truth.len() {
        return Err(CalibError::LengthMismatch { pred: pred.len(), truth: truth.len() });
    }
    if pred.is_empty() {
        return Err(CalibError::NotEnoughData { min: 1, got: 0 });
    }
    let mut acc = [0.0; 3];
    for (p, t) in pred.iter().zip(truth) {
        let e = *p - *t;
        acc[0] += e.fx * e.fx;
        acc[1] += e.fy * e.fy;
        acc[2] += e.fz * e.fz;
    }
    let n = pred.len() as f64;
    Ok(acc.map(|s| (s / n).sqrt()))
}

/// RMSE normalised by the peak-to-peak measurement range, in percent.
///
/// Lateral axes divide by `2 * lateral_range_n` (6 N as built), the axial
/// axis by `2 * axial_range_n` (10 N as built).
pub fn nrmsd(rmse_n: &[f64; 3], geom: &SensorGeometry) -> [f64; 3] {
    let mut out = [0.0; 3];
    for axis in Axis::ALL {
        out[axis.index()] = 100.0 * rmse_n[axis.index()] / geom.full_range_n(axis);
    }
    out
}

/// Per-axis coefficient of determination.
///
/// Returns `None` for an axis whose reference values have zero variance (the
/// metric is undefined there).
pub fn r_squared(
    pred: &[ForceVector],
    truth: &[ForceVector],
) -> Result<[Option<f64>; 3], CalibError> {
    if pred.len() != truth.len() {
        return Err(CalibError::LengthMismatch { pred: pred.len(), truth: truth.len() });
    }
    if pred.len() < 2 {
        return Err(CalibError::NotEnoughData { min: 2, got: pred.len() });
    }
    let n = truth.len() as f64;
    let mut mean = [0.0; 3];
    for t in truth {
        mean[0] += t.fx;
        mean[1] += t.fy;
        mean[2] += t.fz;
    }
    for m in &mut mean {
        *m /= n;
    }
    let mut ss_res = [0.0; 3];
    let mut ss_tot = [0.0; 3];
    for (p, t) in pred.iter().zip(truth) {
        let tv = [t.fx, t.fy, t.fz];
        let pv = [p.fx, p.fy, p.fz];
        for a in 0..3 {
            ss_res[a] += (tv[a] - pv[a]).powi(2);
            ss_tot[a] += (tv[a] - mean[a]).powi(2);
        }
    }
    let mut out = [None; 3];
    for a in 0..3 {
        if ss_tot[a] > 0.0 {
            out[a] = Some(1.0 - ss_res[a] / ss_tot[a]);
        }
    }
    Ok(out)
}

/// Half-width of the reference-magnitude bin used to pair load/unload samples.
///
/// Calibration runs step the load in 0.5 N increments, so two samples of the
/// same nominal level sit well within 0.25 N of each other.
pub const PAIRING_HALF_BIN_N: f64 = 0.25;

/// Per-axis, per-sign hysteresis percentages. `None` means the (axis, sign)
/// group had no samples.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HysteresisReport {
    values: [[Option<f64>; 2]; 3],
}

impl HysteresisReport {
    pub fn get(&self, axis: Axis, sign: Sign) -> Option<f64> {
        self.values[axis.index()][sign.index()]
    }

    fn set(&mut self, axis: Axis, sign: Sign, value: f64) {
        self.values[axis.index()][sign.index()] = Some(value);
    }
}

/// Maximum load/unload discrepancy of the measured force, normalised by the
/// maximum measured force in the group, in percent.
///
/// Samples are grouped by labelled axis and by the sign of the reference
/// force along it (zero-level samples join both sign groups). Each loading
/// sample pairs with the unloading sample of nearest reference magnitude,
/// accepted within [`PAIRING_HALF_BIN_N`]. A nonempty group missing either
/// phase is an error; `Mixed`-labelled samples are ignored.
pub fn hysteresis(
    samples: &[CalibrationSample],
    fitted: &SensitivityMatrix,
) -> Result<HysteresisReport, CalibError> {
    let mut report = HysteresisReport::default();
    for axis in Axis::ALL {
        for sign in Sign::BOTH {
            match hysteresis_group(samples, fitted, axis, sign) {
                Ok(Some(pct)) => report.set(axis, sign, pct),
                Ok(None) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(report)
}

/// Like [`hysteresis`], but leaves groups with a missing phase blank instead
/// of failing. Used for report assembly over partial logs.
pub fn hysteresis_lenient(
    samples: &[CalibrationSample],
    fitted: &SensitivityMatrix,
) -> HysteresisReport {
    let mut report = HysteresisReport::default();
    for axis in Axis::ALL {
        for sign in Sign::BOTH {
            if let Ok(Some(pct)) = hysteresis_group(samples, fitted, axis, sign) {
                report.set(axis, sign, pct);
            }
        }
    }
    report
}

fn hysteresis_group(
    samples: &[CalibrationSample],
    fitted: &SensitivityMatrix,
    axis: Axis,
    sign: Sign,
) -> Result<Option<f64>, CalibError> {
    // (reference magnitude, measured force component)
    let mut loading: Vec<(f64, f64)> = Vec::new();
    let mut unloading: Vec<(f64, f64)> = Vec::new();
    for s in samples {
        if s.axis_label.axis() != Some(axis) {
            continue;
        }
        let r = s.ref_force.component(axis);
        let in_group = match sign {
            Sign::Pos => r >= 0.0,
            Sign::Neg => r <= 0.0,
        };
        if !in_group {
            continue;
        }
        let measured = apply(fitted, &s.frame).component(axis);
        match s.phase {
            Phase::Loading => loading.push((r.abs(), measured)),
            Phase::Unloading => unloading.push((r.abs(), measured)),
        }
    }

    if loading.is_empty() && unloading.is_empty() {
        return Ok(None);
    }
    if unloading.is_empty() {
        return Err(CalibError::MissingPhase { axis, sign, missing: Phase::Unloading });
    }
    if loading.is_empty() {
        return Err(CalibError::MissingPhase { axis, sign, missing: Phase::Loading });
    }

    let mut max_diff = 0.0_f64;
    for &(ref_mag, measured_load) in &loading {
        let mut best: Option<(f64, f64)> = None;
        for &(u_mag, measured_unload) in &unloading {
            let d = (ref_mag - u_mag).abs();
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, measured_unload));
            }
        }
        if let Some((d, measured_unload)) = best {
            if d <= PAIRING_HALF_BIN_N {
                max_diff = max_diff.max((measured_load - measured_unload).abs());
            }
        }
    }

    let max_force = loading
        .iter()
        .chain(&unloading)
        .map(|&(_, m)| m.abs())
        .fold(0.0_f64, f64::max);
    if max_force == 0.0 {
        // flat group: loading equals unloading equals zero
        return Ok(Some(0.0));
    }
    Ok(Some(100.0 * max_diff / max_force))
}

/// Full static-calibration quality summary.
#[derive(Debug, Clone)]
pub struct CalibrationReport {
    pub rmse_n: [f64; 3],
    pub nrmsd_pct: [f64; 3],
    pub r2: [Option<f64>; 3],
    pub hysteresis_pct: HysteresisReport,
}

impl CalibrationReport {
    /// Evaluates a fitted matrix against labelled calibration samples.
    ///
    /// Hysteresis entries are blank for (axis, sign) groups that lack either
    /// phase; the other metrics use every sample.
    pub fn compute(
        samples: &[CalibrationSample],
        fitted: &SensitivityMatrix,
    ) -> Result<Self, CalibError> {
        let pred: Vec<ForceVector> = samples.iter().map(|s| apply(fitted, &s.frame)).collect();
        let truth: Vec<ForceVector> = samples.iter().map(|s| s.ref_force).collect();
        let rmse_n = rmse(&pred, &truth)?;
        let nrmsd_pct = nrmsd(&rmse_n, &fitted.geom);
        let r2 = r_squared(&pred, &truth)?;
        let hysteresis_pct = hysteresis_lenient(samples, fitted);
        Ok(Self { rmse_n, nrmsd_pct, r2, hysteresis_pct })
    }
}

const SENSITIVITY_HEADER: &str = "# jawforce-sensitivity v1";

#[derive(Debug, thiserror::Error)]
pub enum SensitivityFileError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
}

/// Renders the matrix in the plain-text exchange format: a header line and
/// three rows (x, y, z) of nine columns printed with 17 significant digits.
pub fn sensitivity_to_string(s: &SensitivityMatrix) -> String {
    let mut out = String::from(SENSITIVITY_HEADER);
    out.push('\n');
    for row in 0..3 {
        let cells: Vec<String> = (0..9).map(|col| format!("{:.16e}", s.a_plus[(row, col)])).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// Parses the plain-text format written by [`sensitivity_to_string`].
///
/// Values round-trip bit-exactly. The geometry is not part of the file and
/// must be supplied by the caller.
pub fn sensitivity_from_str(
    text: &str,
    geom: SensorGeometry,
) -> Result<SensitivityMatrix, SensitivityFileError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| SensitivityFileError::Format { line: 1, msg: "empty file".into() })?;
    if header.trim_end() != SENSITIVITY_HEADER {
        return Err(SensitivityFileError::Format {
            line: 1,
            msg: format!("expected header `{SENSITIVITY_HEADER}`, got `{header}`"),
        });
    }
    let mut a_plus = Sensitivity3x9::zeros();
    let mut row = 0;
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if row >= 3 {
            return Err(SensitivityFileError::Format {
                line: idx + 1,
                msg: "more than 3 matrix rows".into(),
            });
        }
        let cells: Vec<&str> = line.split_whitespace().collect();
        if cells.len() != 9 {
            return Err(SensitivityFileError::Format {
                line: idx + 1,
                msg: format!("expected 9 columns, got {}", cells.len()),
            });
        }
        for (col, cell) in cells.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| SensitivityFileError::Format {
                line: idx + 1,
                msg: format!("column {}: invalid number `{cell}`", col + 1),
            })?;
            if !value.is_finite() {
                return Err(SensitivityFileError::Format {
                    line: idx + 1,
                    msg: format!("column {}: non-finite value", col + 1),
                });
            }
            a_plus[(row, col)] = value;
        }
        row += 1;
    }
    if row != 3 {
        return Err(SensitivityFileError::Format {
            line: 0,
            msg: format!("expected 3 matrix rows, got {row}"),
        });
    }
    Ok(SensitivityMatrix::new(a_plus, geom))
}

pub fn write_sensitivity(
    path: &Path,
    s: &SensitivityMatrix,
) -> Result<(), SensitivityFileError> {
    std::fs::write(path, sensitivity_to_string(s))?;
    Ok(())
}

pub fn read_sensitivity(
    path: &Path,
    geom: SensorGeometry,
) -> Result<SensitivityMatrix, SensitivityFileError> {
    let text = std::fs::read_to_string(path)?;
    sensitivity_from_str(&text, geom)
}
