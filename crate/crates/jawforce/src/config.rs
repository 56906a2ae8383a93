//! Shared TOML configuration for the command-line tools.
//!
//! All sections are optional; omitted keys fall back to the as-built sensor
//! constants and the documented defaults. The `JAWFORCE_CONFIG` environment
//! variable supplies the config path when no flag is given.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::sensor::SensorGeometry;
use crate::sim::{Crosstalk, SimConfig};

/// Environment variable consulted when no config path is passed.
pub const CONFIG_ENV_VAR: &str = "JAWFORCE_CONFIG";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config parse error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("config key `{key}`: {msg}")]
    Invalid { key: &'static str, msg: String },
}

/// Scalar-or-array helper: a single value broadcasts to every channel.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Spread8 {
    Scalar(f64),
    Each([f64; 8]),
}

impl Spread8 {
    pub fn resolve(&self) -> [f64; 8] {
        match self {
            Spread8::Scalar(v) => [*v; 8],
            Spread8::Each(a) => *a,
        }
    }
}

impl Default for Spread8 {
    fn default() -> Self {
        Spread8::Scalar(0.0)
    }
}

/// Scalar-or-array helper: a single value broadcasts to every axis.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Spread3 {
    Scalar(f64),
    Each([f64; 3]),
}

impl Spread3 {
    pub fn resolve(&self) -> [f64; 3] {
        match self {
            Spread3::Scalar(v) => [*v; 3],
            Spread3::Each(a) => *a,
        }
    }
}

impl Default for Spread3 {
    fn default() -> Self {
        Spread3::Scalar(0.0)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSection {
    /// Per-channel preload offsets (V).
    pub preload_v: [f64; 8],
    /// Per-channel Gaussian noise sigma (V); a scalar broadcasts.
    pub noise_sigma_v: Spread8,
    /// Backlash half-width per axis (N); a scalar broadcasts.
    pub backlash_width_n: Spread3,
    pub seed: u64,
    /// Optional 8x8 channel mixing matrix, row-major rows.
    pub crosstalk: Option<Vec<Vec<f64>>>,
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            preload_v: [0.0; 8],
            noise_sigma_v: Spread8::default(),
            backlash_width_n: Spread3::default(),
            seed: 0,
            crosstalk: None,
        }
    }
}

impl SimSection {
    pub fn to_sim_config(&self, geom: SensorGeometry) -> Result<SimConfig, ConfigError> {
        let crosstalk = match &self.crosstalk {
            None => Crosstalk::identity(),
            Some(rows) => {
                if rows.len() != 8 || rows.iter().any(|r| r.len() != 8) {
                    return Err(ConfigError::Invalid {
                        key: "sim.crosstalk",
                        msg: "must be an 8x8 matrix".into(),
                    });
                }
                let mut m = Crosstalk::zeros();
                for (i, row) in rows.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        m[(i, j)] = *v;
                    }
                }
                m
            }
        };
        let cfg = SimConfig {
            geom,
            preload_v: self.preload_v,
            crosstalk,
            noise_sigma_v: self.noise_sigma_v.resolve(),
            backlash_width_n: self.backlash_width_n.resolve(),
            seed: self.seed,
        };
        cfg.validate().map_err(|e| ConfigError::Invalid { key: "sim", msg: e.to_string() })?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileSection {
    /// Load increment (N).
    pub step_n: f64,
    /// Samples held per load level.
    pub dwell_samples: usize,
    pub include_unloading: bool,
    /// Per-axis peak overrides (N); default is the full sensing range.
    pub peak_x_n: Option<f64>,
    pub peak_y_n: Option<f64>,
    pub peak_z_n: Option<f64>,
}

impl Default for ProfileSection {
    fn default() -> Self {
        Self {
            step_n: 0.5,
            dwell_samples: 4,
            include_unloading: true,
            peak_x_n: None,
            peak_y_n: None,
            peak_z_n: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSection {
    /// Grasp force held during scenarios (N).
    pub grasp_n: f64,
    /// Per-jaw pinch overrides (N).
    pub grasp_left_n: Option<f64>,
    pub grasp_right_n: Option<f64>,
    /// Log duration (s); defaults per scenario kind.
    pub duration_s: Option<f64>,
    /// Physical jaw opening while grasping (deg); defaults to 10 for pinch
    /// runs and 8.4 for manipulation runs.
    pub jaw_true_deg: Option<f64>,
    /// Software-reported opening (deg); defaults to the true opening for
    /// pinch runs and to 2 degrees for manipulation runs.
    pub jaw_reported_deg: Option<f64>,
    /// Composed reported-pose error budget (deg).
    pub pose_error_deg: f64,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        Self {
            grasp_n: 1.35,
            grasp_left_n: None,
            grasp_right_n: None,
            duration_s: None,
            jaw_true_deg: None,
            jaw_reported_deg: None,
            pose_error_deg: 2.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResolveSection {
    /// Minimum jaw opening during grasp (deg).
    pub theta_min_deg: f64,
    /// Fixed sensor-mount rotations (deg).
    pub theta_r_deg: f64,
    pub theta_l_deg: f64,
    /// Chain configuration path; the built-in simplified chain when absent.
    pub chain: Option<PathBuf>,
}

impl Default for ResolveSection {
    fn default() -> Self {
        Self { theta_min_deg: 8.4, theta_r_deg: 0.0, theta_l_deg: 0.0, chain: None }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub geometry: SensorGeometry,
    pub sim: SimSection,
    pub profile: ProfileSection,
    pub scenario: ScenarioSection,
    pub resolve: ResolveSection,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: ConfigFile = toml::from_str(text)?;
        cfg.geometry
            .validate()
            .map_err(|e| ConfigError::Invalid { key: "geometry", msg: e.to_string() })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    /// Loads from an explicit path, the `JAWFORCE_CONFIG` fallback, or the
    /// built-in defaults, in that order.
    pub fn load_or_default(path: Option<&Path>) -> Result<Self, ConfigError> {
        match path {
            Some(p) => Self::load(p),
            None => match std::env::var_os(CONFIG_ENV_VAR) {
                Some(p) => Self::load(Path::new(&p)),
                None => Ok(Self::default()),
            },
        }
    }
}
