//! Log file schemas and time-series alignment.
//!
//! Two CSV formats are the repository's stable data contract (see
//! `docs/formats.md`): single-jaw calibration logs and dual-jaw teleoperation
//! logs. Numbers are written with Rust's shortest round-trip formatting, so
//! write-then-parse is the identity on the stored values; any value printed
//! with up to 17 significant digits parses back bit-exactly.

use std::path::Path;

use crate::calib::{AxisLabel, CalibrationSample, Phase};
use crate::sensor::{ChannelFrame, ForceVector};

/// Header of the single-jaw calibration log schema.
pub const SINGLE_JAW_HEADER: &str =
    "t_s,v1,v2,v3,v4,v5,v6,v7,v8,fx_ref,fy_ref,fz_ref,phase,axis";

/// Header of the dual-jaw log schema, without the optional ground-truth
/// columns `fx,fy,fz`.
pub const DUAL_JAW_HEADER: &str = "t_s,theta1,theta2,theta3,theta4,theta5,theta6,theta7,\
theta_jaw_prime,vl1,vl2,vl3,vl4,vl5,vl6,vl7,vl8,vr1,vr2,vr3,vr4,vr5,vr6,vr7,vr8";

const GROUND_TRUTH_SUFFIX: &str = ",fx,fy,fz";

#[derive(Debug, thiserror::Error)]
pub enum LogError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Schema { line: usize, msg: String },
    #[error("line {line}: timestamp {t} does not increase past {prev}")]
    Monotonicity { line: usize, t: f64, prev: f64 },
    #[error("line {line}, column `{column}`: invalid number `{value}`")]
    Numeric { line: usize, column: String, value: String },
    #[error("streams do not overlap in time")]
    NoOverlap,
    #[error("stream timestamps must strictly increase")]
    NonMonotonicStream,
    #[error("stream is empty")]
    EmptyStream,
    #[error("sample rate must be positive and finite, got {0}")]
    InvalidRate(f64),
}

/// Ordered calibration samples of one sensor, as stored on disk.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SingleJawLog {
    pub samples: Vec<CalibrationSample>,
}

/// One row of a dual-jaw teleoperation log.
///
/// `thetas` holds the reported joint angles theta1..theta7 in radians; the
/// per-jaw angles theta6/theta7 use mirrored positive senses so the gripper
/// bisector is their half-difference. Voltages are left jaw then right jaw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualJawRow {
    pub t_s: f64,
    pub thetas: [f64; 7],
    pub theta_jaw_prime: f64,
    pub v_left: [f64; 8],
    pub v_right: [f64; 8],
    /// Environment ground truth in the robot base frame, when recorded.
    /// Grip-evaluation logs store the grasp line-of-action force instead.
    pub ground_truth: Option<ForceVector>,
}

impl DualJawRow {
    pub fn left_frame(&self) -> ChannelFrame {
        ChannelFrame::new(self.t_s, self.v_left)
    }

    pub fn right_frame(&self) -> ChannelFrame {
        ChannelFrame::new(self.t_s, self.v_right)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DualJawLog {
    pub rows: Vec<DualJawRow>,
    pub has_ground_truth: bool,
}

fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn parse_field(raw: &str, line: usize, column: &str) -> Result<f64, LogError> {
    let value: f64 = raw.parse().map_err(|_| LogError::Numeric {
        line,
        column: column.to_string(),
        value: raw.to_string(),
    })?;
    if !value.is_finite() {
        return Err(LogError::Numeric {
            line,
            column: column.to_string(),
            value: raw.to_string(),
        });
    }
    Ok(value)
}

fn check_header(got: &str, expected: &str, line: usize) -> Result<(), LogError> {
    if got.trim_end() == expected {
        return Ok(());
    }
    let got_cols: Vec<&str> = got.trim_end().split(',').collect();
    let want_cols: Vec<&str> = expected.split(',').collect();
    for (i, want) in want_cols.iter().enumerate() {
        match got_cols.get(i) {
            Some(g) if g == want => continue,
            Some(g) => {
                return Err(LogError::Schema {
                    line,
                    msg: format!("header column {}: expected `{want}`, got `{g}`", i + 1),
                })
            }
            None => {
                return Err(LogError::Schema {
                    line,
                    msg: format!("header is missing column `{want}`"),
                })
            }
        }
    }
    Err(LogError::Schema {
        line,
        msg: format!("header has {} extra column(s)", got_cols.len() - want_cols.len()),
    })
}

/// Renders a single-jaw calibration log in the CSV schema.
pub fn single_jaw_to_string(log: &SingleJawLog) -> String {
    let mut out = String::from(SINGLE_JAW_HEADER);
    out.push('\n');
    for s in &log.samples {
        out.push_str(&fmt_f64(s.frame.t_s));
        for v in s.frame.v {
            out.push(',');
            out.push_str(&fmt_f64(v));
        }
        for f in [s.ref_force.fx, s.ref_force.fy, s.ref_force.fz] {
            out.push(',');
            out.push_str(&fmt_f64(f));
        }
        out.push(',');
        out.push_str(s.phase.as_str());
        out.push(',');
        out.push_str(s.axis_label.as_str());
        out.push('\n');
    }
    out
}

/// Parses the single-jaw schema; see [`SINGLE_JAW_HEADER`].
///
/// Timestamps must strictly increase and all rows must carry the same axis
/// label (per-axis runs are stored one file each; free-form data is labelled
/// `mixed`).
pub fn single_jaw_from_str(text: &str) -> Result<SingleJawLog, LogError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or(LogError::Schema { line: 1, msg: "empty file".into() })?;
    check_header(header, SINGLE_JAW_HEADER, 1)?;

    let mut samples = Vec::new();
    let mut prev_t: Option<f64> = None;
    let mut file_label: Option<AxisLabel> = None;
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = raw.split(',').collect();
        if cells.len() != 14 {
            return Err(LogError::Schema {
                line,
                msg: format!("expected 14 fields, got {}", cells.len()),
            });
        }
        let t_s = parse_field(cells[0], line, "t_s")?;
        if let Some(prev) = prev_t {
            if t_s <= prev {
                return Err(LogError::Monotonicity { line, t: t_s, prev });
            }
        }
        prev_t = Some(t_s);

        let mut v = [0.0; 8];
        for (i, item) in v.iter_mut().enumerate() {
            *item = parse_field(cells[1 + i], line, &format!("v{}", i + 1))?;
        }
        let ref_force = ForceVector::new(
            parse_field(cells[9], line, "fx_ref")?,
            parse_field(cells[10], line, "fy_ref")?,
            parse_field(cells[11], line, "fz_ref")?,
        );
        let phase = match cells[12] {
            "load" => Phase::Loading,
            "unload" => Phase::Unloading,
            other => {
                return Err(LogError::Schema {
                    line,
                    msg: format!("phase must be `load` or `unload`, got `{other}`"),
                })
            }
        };
        let axis_label = match cells[13] {
            "x" => AxisLabel::X,
            "y" => AxisLabel::Y,
            "z" => AxisLabel::Z,
            "mixed" => AxisLabel::Mixed,
            other => {
                return Err(LogError::Schema {
                    line,
                    msg: format!("axis must be x, y, z or mixed, got `{other}`"),
                })
            }
        };
        match file_label {
            None => file_label = Some(axis_label),
            Some(l) if l != axis_label => {
                return Err(LogError::Schema {
                    line,
                    msg: format!(
                        "axis label `{axis_label}` differs from `{l}` earlier in the file; \
                         one label per file (use `mixed` for free-form loading)"
                    ),
                })
            }
            Some(_) => {}
        }
        samples.push(CalibrationSample { frame: ChannelFrame::new(t_s, v), ref_force, phase, axis_label });
    }
    Ok(SingleJawLog { samples })
}

pub fn write_single_jaw(path: &Path, log: &SingleJawLog) -> Result<(), LogError> {
    std::fs::write(path, single_jaw_to_string(log))?;
    Ok(())
}

pub fn read_single_jaw(path: &Path) -> Result<SingleJawLog, LogError> {
    single_jaw_from_str(&std::fs::read_to_string(path)?)
}

/// Renders a dual-jaw log; ground-truth columns are present only when
/// `log.has_ground_truth`.
pub fn dual_jaw_to_string(log: &DualJawLog) -> String {
    let mut out = String::from(DUAL_JAW_HEADER);
    if log.has_ground_truth {
        out.push_str(GROUND_TRUTH_SUFFIX);
    }
    out.push('\n');
    for row in &log.rows {
        out.push_str(&fmt_f64(row.t_s));
        for th in row.thetas {
            out.push(',');
            out.push_str(&fmt_f64(th));
        }
        out.push(',');
        out.push_str(&fmt_f64(row.theta_jaw_prime));
        for v in row.v_left.iter().chain(&row.v_right) {
            out.push(',');
            out.push_str(&fmt_f64(*v));
        }
        if log.has_ground_truth {
            let gt = row.ground_truth.unwrap_or_default();
            for f in [gt.fx, gt.fy, gt.fz] {
                out.push(',');
                out.push_str(&fmt_f64(f));
            }
        }
        out.push('\n');
    }
    out
}

/// Parses the dual-jaw schema; the ground-truth columns are detected from
/// the header.
pub fn dual_jaw_from_str(text: &str) -> Result<DualJawLog, LogError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or(LogError::Schema { line: 1, msg: "empty file".into() })?;
    let with_gt = format!("{DUAL_JAW_HEADER}{GROUND_TRUTH_SUFFIX}");
    let has_ground_truth = if header.trim_end() == DUAL_JAW_HEADER {
        false
    } else if header.trim_end() == with_gt {
        true
    } else {
        // report against the nearer expectation
        let expected = if header.matches(',').count() >= with_gt.matches(',').count() {
            with_gt.as_str()
        } else {
            DUAL_JAW_HEADER
        };
        check_header(header, expected, 1)?;
        unreachable!("check_header fails on mismatched headers");
    };

    let n_fields = if has_ground_truth { 28 } else { 25 };
    let mut rows = Vec::new();
    let mut prev_t: Option<f64> = None;
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = raw.split(',').collect();
        if cells.len() != n_fields {
            return Err(LogError::Schema {
                line,
                msg: format!("expected {n_fields} fields, got {}", cells.len()),
            });
        }
        let t_s = parse_field(cells[0], line, "t_s")?;
        if let Some(prev) = prev_t {
            if t_s <= prev {
                return Err(LogError::Monotonicity { line, t: t_s, prev });
            }
        }
        prev_t = Some(t_s);

        let mut thetas = [0.0; 7];
        for (i, item) in thetas.iter_mut().enumerate() {
            *item = parse_field(cells[1 + i], line, &format!("theta{}", i + 1))?;
        }
        let theta_jaw_prime = parse_field(cells[8], line, "theta_jaw_prime")?;
        let mut v_left = [0.0; 8];
        for (i, item) in v_left.iter_mut().enumerate() {
            *item = parse_field(cells[9 + i], line, &format!("vl{}", i + 1))?;
        }
        let mut v_right = [0.0; 8];
        for (i, item) in v_right.iter_mut().enumerate() {
            *item = parse_field(cells[17 + i], line, &format!("vr{}", i + 1))?;
        }
        let ground_truth = if has_ground_truth {
            Some(ForceVector::new(
                parse_field(cells[25], line, "fx")?,
                parse_field(cells[26], line, "fy")?,
                parse_field(cells[27], line, "fz")?,
            ))
        } else {
            None
        };
        rows.push(DualJawRow { t_s, thetas, theta_jaw_prime, v_left, v_right, ground_truth });
    }
    Ok(DualJawLog { rows, has_ground_truth })
}

pub fn write_dual_jaw(path: &Path, log: &DualJawLog) -> Result<(), LogError> {
    std::fs::write(path, dual_jaw_to_string(log))?;
    Ok(())
}

pub fn read_dual_jaw(path: &Path) -> Result<DualJawLog, LogError> {
    dual_jaw_from_str(&std::fs::read_to_string(path)?)
}

/// One timestamped force measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimedForce {
    pub t_s: f64,
    pub force: ForceVector,
}

/// One aligned sample of both streams on the common grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignedPair {
    pub t_s: f64,
    pub sensor: ForceVector,
    pub reference: ForceVector,
}

fn check_stream(stream: &[TimedForce]) -> Result<(), LogError> {
    if stream.is_empty() {
        return Err(LogError::EmptyStream);
    }
    for pair in stream.windows(2) {
        if pair[1].t_s <= pair[0].t_s {
            return Err(LogError::NonMonotonicStream);
        }
    }
    Ok(())
}

fn lerp_stream(stream: &[TimedForce], t: f64) -> ForceVector {
    // callers guarantee t within [first, last]
    if stream.len() == 1 {
        return stream[0].force;
    }
    let hi = stream.partition_point(|p| p.t_s < t).min(stream.len() - 1).max(1);
    let (a, b) = (&stream[hi - 1], &stream[hi]);
    if b.t_s == a.t_s {
        return a.force;
    }
    let w = (t - a.t_s) / (b.t_s - a.t_s);
    a.force + (b.force - a.force) * w
}

/// Resamples both streams onto a shared uniform grid by linear interpolation.
///
/// The grid starts at the later of the two start times, is spaced exactly
/// `1/rate_hz`, and stops at the earlier of the two end times; no sample is
/// ever extrapolated.
pub fn align_streams(
    sensor: &[TimedForce],
    reference: &[TimedForce],
    rate_hz: f64,
) -> Result<Vec<AlignedPair>, LogError> {
    if !(rate_hz.is_finite() && rate_hz > 0.0) {
        return Err(LogError::InvalidRate(rate_hz));
    }
    check_stream(sensor)?;
    check_stream(reference)?;
    let t_start = sensor[0].t_s.max(reference[0].t_s);
    let t_end = sensor[sensor.len() - 1].t_s.min(reference[reference.len() - 1].t_s);
    if t_start > t_end {
        return Err(LogError::NoOverlap);
    }
    let mut out = Vec::new();
    let mut k = 0u64;
    loop {
        let t = t_start + k as f64 / rate_hz;
        if t > t_end {
            break;
        }
        out.push(AlignedPair {
            t_s: t,
            sensor: lerp_stream(sensor, t),
            reference: lerp_stream(reference, t),
        });
        k += 1;
    }
    Ok(out)
}
