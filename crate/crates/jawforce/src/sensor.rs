//! Domain types and the ideal load-cell sensing model.
//!
//! One jaw sensor is two opposing arrays of four compression load cells.
//! Under a quasi-static interaction at the jaw tip, the moment balance about
//! the two lateral axes and the force balance along the main axis give a
//! closed-form linear map from the eight channel voltages to the tip force.

use nalgebra::{SMatrix, SVector, Vector3};
use serde::{Deserialize, Serialize};

/// 3x8 sensitivity matrix type, rows ordered x, y, z.
pub type Sensitivity3x8 = SMatrix<f64, 3, 8>;

/// One sample of the eight amplified channel voltages.
pub type Voltages = SVector<f64, 8>;

/// Physical constants of one jaw sensor.
///
/// Lengths are in millimetres, the voltage-to-force factor in N/V, and the
/// symmetric target ranges in newtons. `Default` is the as-built sensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SensorGeometry {
    /// Lever arm from the jaw tip to the sensing plate (H, mm).
    pub h_mm: f64,
    /// Lateral offset of the tip from the plate centre (D, mm).
    pub d_mm: f64,
    /// Load-cell row spacing on the array (L, mm).
    pub l_mm: f64,
    /// Load-cell column spacing on the array (W, mm).
    pub w_mm: f64,
    /// Voltage change per unit force (c, N/V).
    pub c_n_per_v: f64,
    /// Symmetric lateral (x, y) sensing bound (N).
    pub lateral_range_n: f64,
    /// Symmetric axial (z) sensing bound (N).
    pub axial_range_n: f64,
}

impl Default for SensorGeometry {
    fn default() -> Self {
        Self {
            h_mm: 15.85,
            d_mm: 5.50,
            l_mm: 3.45,
            w_mm: 2.95,
            c_n_per_v: 3.063,
            lateral_range_n: 3.0,
            axial_range_n: 5.0,
        }
    }
}

impl SensorGeometry {
    /// Checks that all lengths and the gain are strictly positive.
    ///
    /// Returns the name of the first offending field so config loaders can
    /// report it verbatim.
    pub fn validate(&self) -> Result<(), GeometryError> {
        let fields = [
            ("h_mm", self.h_mm),
            ("d_mm", self.d_mm),
            ("l_mm", self.l_mm),
            ("w_mm", self.w_mm),
            ("c_n_per_v", self.c_n_per_v),
            ("lateral_range_n", self.lateral_range_n),
            ("axial_range_n", self.axial_range_n),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(GeometryError::NonPositive { field: name, value });
            }
        }
        Ok(())
    }

    /// Peak-to-peak measurement range for one axis (N).
    pub fn full_range_n(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X | Axis::Y => 2.0 * self.lateral_range_n,
            Axis::Z => 2.0 * self.axial_range_n,
        }
    }

    /// Symmetric bound for one axis (N).
    pub fn range_n(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X | Axis::Y => self.lateral_range_n,
            Axis::Z => self.axial_range_n,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GeometryError {
    #[error("geometry field `{field}` must be strictly positive, got {value}")]
    NonPositive { field: &'static str, value: f64 },
}

/// Cartesian axes of the sensor frame (x, y lateral; z axial).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Row/component index: x = 0, y = 1, z = 2.
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One timestamped sample of the eight channel voltages.
///
/// Channel index i corresponds to load cell i+1; cells 1-4 sit on the upper
/// array and 5-8 on the lower array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelFrame {
    /// Timestamp in seconds, monotonic within a log.
    pub t_s: f64,
    /// Channel voltages in volts.
    pub v: [f64; 8],
}

impl ChannelFrame {
    pub fn new(t_s: f64, v: [f64; 8]) -> Self {
        Self { t_s, v }
    }

    pub fn voltages(&self) -> Voltages {
        Voltages::from_column_slice(&self.v)
    }

    pub fn is_finite(&self) -> bool {
        self.t_s.is_finite() && self.v.iter().all(|x| x.is_finite())
    }
}

/// Force in the sensor local frame (N).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ForceVector {
    pub fx: f64,
    pub fy: f64,
    pub fz: f64,
}

impl ForceVector {
    pub fn new(fx: f64, fy: f64, fz: f64) -> Self {
        Self { fx, fy, fz }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn component(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.fx,
            Axis::Y => self.fy,
            Axis::Z => self.fz,
        }
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.fx, self.fy, self.fz)
    }

    pub fn from_vector(v: Vector3<f64>) -> Self {
        Self::new(v.x, v.y, v.z)
    }

    pub fn norm(&self) -> f64 {
        self.as_vector().norm()
    }

    pub fn is_finite(&self) -> bool {
        self.fx.is_finite() && self.fy.is_finite() && self.fz.is_finite()
    }
}

impl std::ops::Add for ForceVector {
    type Output = ForceVector;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.fx + rhs.fx, self.fy + rhs.fy, self.fz + rhs.fz)
    }
}

impl std::ops::Sub for ForceVector {
    type Output = ForceVector;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.fx - rhs.fx, self.fy - rhs.fy, self.fz - rhs.fz)
    }
}

impl std::ops::Mul<f64> for ForceVector {
    type Output = ForceVector;
    fn mul(self, s: f64) -> Self {
        Self::new(self.fx * s, self.fy * s, self.fz * s)
    }
}

/// Moments about the sensor x- and y-axes (N.mm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentPair {
    pub mx: f64,
    pub my: f64,
}

/// Ideal 3x8 sensitivity matrix of the sensing model (N/V), rows x, y, z.
///
/// Obtained by setting both lateral moments to zero (quasi-static contact at
/// the jaw tip) and solving the balance equations:
///
/// ```text
/// Fz = c (v1+v2+v3+v4 - v5-v6-v7-v8)
/// Fy = (Lc/2H) (v2+v6 - v4-v8)
/// Fx = (Fz D + (Wc/2)(v1+v7 - v3-v5)) / H
/// ```
pub fn ideal_sensitivity(geom: &SensorGeometry) -> Sensitivity3x8 {
    let c = geom.c_n_per_v;
    let z_sign = [1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0];
    let y_sign = [0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0];
    let x_sign = [1.0, 0.0, -1.0, 0.0, -1.0, 0.0, 1.0, 0.0];

    let ky = geom.l_mm * c / (2.0 * geom.h_mm);
    let kx = geom.w_mm * c / (2.0 * geom.h_mm);
    let kz_into_x = geom.d_mm / geom.h_mm;

    let mut a = Sensitivity3x8::zeros();
    for ch in 0..8 {
        let row_z = c * z_sign[ch];
        a[(0, ch)] = kz_into_x * row_z + kx * x_sign[ch];
        a[(1, ch)] = ky * y_sign[ch];
        a[(2, ch)] = row_z;
    }
    a
}

/// Recovers the tip force from one voltage frame under the ideal model.
pub fn ideal_inverse(geom: &SensorGeometry, frame: &ChannelFrame) -> ForceVector {
    let f = ideal_sensitivity(geom) * frame.voltages();
    ForceVector::from_vector(f)
}

/// Evaluates the lateral moment balance for a candidate force.
///
/// Both components vanish (to floating tolerance) when `f` is the output of
/// [`ideal_inverse`] for the same frame.
pub fn moment_residual(geom: &SensorGeometry, frame: &ChannelFrame, f: &ForceVector) -> MomentPair {
    let v = &frame.v;
    let c = geom.c_n_per_v;
    let bracket_y = v[1] + v[5] - v[3] - v[7];
    let bracket_x = v[0] + v[6] - v[2] - v[4];
    MomentPair {
        mx: f.fy * geom.h_mm - geom.l_mm * c / 2.0 * bracket_y,
        my: f.fx * geom.h_mm - f.fz * geom.d_mm - geom.w_mm * c / 2.0 * bracket_x,
    }
}
