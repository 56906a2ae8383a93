//! Command-line surface for the jawforce pipeline:
//! simulate -> calibrate -> evaluate -> resolve / grip.
//!
//! Exit codes: 0 success, 2 input or configuration error, 3 numerical or
//! rank error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use jawforce::calib::{
    fit_sensitivity, read_sensitivity, write_sensitivity, CalibError, CalibrationReport,
    CalibrationSample, SensitivityMatrix, Sign,
};
use jawforce::config::{ConfigError, ConfigFile};
use jawforce::io::{
    read_dual_jaw, read_single_jaw, write_dual_jaw, write_single_jaw, LogError, SingleJawLog,
};
use jawforce::kinematics::{
    default_chain, load_chain, ChainConfigError, KinematicsError, TransformChain,
};
use jawforce::pipeline::{
    grip_log, resolve_log, ErrorReport, GripRow, ResolveSettings, ResolvedRow, ScalarErrorReport,
};
use jawforce::sensor::{Axis, ForceVector};
use jawforce::sim::{
    manipulation_scenario, pinch_scenario, run_profile_from, DualJawRig, LoadProfile,
    ManipulationKind, ManipulationSpec, PinchSpec, SimConfig, SimError, SAMPLE_RATE_HZ,
};

const EXIT_INPUT: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }

    fn numeric(message: impl Into<String>) -> Self {
        Self { code: EXIT_NUMERIC, message: message.into() }
    }
}

macro_rules! impl_input_error {
    ($($ty:ty),* $(,)?) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::input(e.to_string())
            }
        }
    )*};
}

impl_input_error!(
    ConfigError,
    LogError,
    ChainConfigError,
    SimError,
    KinematicsError,
    jawforce::calib::SensitivityFileError,
    std::io::Error,
);

impl From<CalibError> for CliError {
    fn from(e: CalibError) -> Self {
        CliError::numeric(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "jawforce", version, about = "Dual-jaw force sensing toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    X,
    Y,
    Z,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Pinch,
    FlatTissue,
    Stem,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic calibration or teleoperation logs
    #[command(group(ArgGroup::new("what").required(true).args(["profile", "scenario"])))]
    Simulate {
        /// Shared TOML config (falls back to $JAWFORCE_CONFIG, then defaults)
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        /// Write per-axis calibration logs (loading both signs)
        #[arg(long, value_enum)]
        profile: Option<ProfileArg>,
        /// Write one dual-jaw teleoperation log
        #[arg(long, value_enum)]
        scenario: Option<ScenarioArg>,
        /// Override the config seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Fit a sensitivity matrix from calibration logs and report its quality
    Calibrate {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output path for the sensitivity matrix file
        #[arg(long)]
        out: PathBuf,
        /// Print the quality report as machine-readable CSV
        #[arg(long)]
        csv: bool,
        /// Input calibration logs (single-jaw CSV)
        #[arg(required = true)]
        logs: Vec<PathBuf>,
    },
    /// Evaluate a fitted sensitivity matrix on held-out logs
    Evaluate {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Sensitivity matrix file
        #[arg(long)]
        sens: PathBuf,
        #[arg(long)]
        csv: bool,
        /// Report mean and standard deviation over the input logs (one log
        /// per trial)
        #[arg(long)]
        aggregate: bool,
        #[arg(required = true)]
        logs: Vec<PathBuf>,
    },
    /// Resolve dual-jaw logs into base-frame forces
    Resolve {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Chain configuration file (default: built-in simplified chain)
        #[arg(long)]
        chain: Option<PathBuf>,
        #[arg(long)]
        sens_left: PathBuf,
        #[arg(long)]
        sens_right: PathBuf,
        /// Minimum jaw angle during grasp (degrees)
        #[arg(long)]
        theta_min: Option<f64>,
        /// Output CSV of resolved forces (single input log only)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        aggregate: bool,
        #[arg(required = true)]
        logs: Vec<PathBuf>,
    },
    /// Compute grasp force traces from dual-jaw logs
    Grip {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        chain: Option<PathBuf>,
        #[arg(long)]
        sens_left: PathBuf,
        #[arg(long)]
        sens_right: PathBuf,
        /// Minimum jaw angle during grasp (degrees)
        #[arg(long)]
        theta_min: Option<f64>,
        /// Output CSV of grip forces (single input log only)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        aggregate: bool,
        #[arg(required = true)]
        logs: Vec<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate { config, out, profile, scenario, seed } => {
            cmd_simulate(config.as_deref(), &out, profile, scenario, seed)
        }
        Command::Calibrate { config, out, csv, logs } => {
            cmd_calibrate(config.as_deref(), &out, csv, &logs)
        }
        Command::Evaluate { config, sens, csv, aggregate, logs } => {
            cmd_evaluate(config.as_deref(), &sens, csv, aggregate, &logs)
        }
        Command::Resolve {
            config,
            chain,
            sens_left,
            sens_right,
            theta_min,
            out,
            csv,
            aggregate,
            logs,
        } => cmd_resolve(
            config.as_deref(),
            chain.as_deref(),
            &sens_left,
            &sens_right,
            theta_min,
            out.as_deref(),
            csv,
            aggregate,
            &logs,
        ),
        Command::Grip {
            config,
            chain,
            sens_left,
            sens_right,
            theta_min,
            out,
            csv,
            aggregate,
            logs,
        } => cmd_grip(
            config.as_deref(),
            chain.as_deref(),
            &sens_left,
            &sens_right,
            theta_min,
            out.as_deref(),
            csv,
            aggregate,
            &logs,
        ),
    }
}

fn load_chain_for(cfg: &ConfigFile, flag: Option<&Path>) -> Result<TransformChain, CliError> {
    match flag.or(cfg.resolve.chain.as_deref()) {
        Some(path) => Ok(load_chain(path)?),
        None => Ok(default_chain()),
    }
}

fn resolve_settings(cfg: &ConfigFile, theta_min_deg: Option<f64>) -> ResolveSettings {
    ResolveSettings {
        theta_min_rad: theta_min_deg.unwrap_or(cfg.resolve.theta_min_deg).to_radians(),
        mount_right_rad: cfg.resolve.theta_r_deg.to_radians(),
        mount_left_rad: cfg.resolve.theta_l_deg.to_radians(),
    }
}

fn build_rig(
    cfg: &ConfigFile,
    chain: TransformChain,
    seed: Option<u64>,
) -> Result<DualJawRig, CliError> {
    let mut left = cfg.sim.to_sim_config(cfg.geometry)?;
    if let Some(s) = seed {
        left.seed = s;
    }
    let mut right = left.clone();
    right.seed = left.seed.wrapping_add(1);
    Ok(DualJawRig {
        left,
        right,
        chain,
        mount_right_rad: cfg.resolve.theta_r_deg.to_radians(),
        mount_left_rad: cfg.resolve.theta_l_deg.to_radians(),
    })
}

fn cmd_simulate(
    config: Option<&Path>,
    out: &Path,
    profile: Option<ProfileArg>,
    scenario: Option<ScenarioArg>,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let cfg = ConfigFile::load_or_default(config)?;
    std::fs::create_dir_all(out)?;
    let mut sim = cfg.sim.to_sim_config(cfg.geometry)?;
    if let Some(s) = seed {
        sim.seed = s;
    }

    if let Some(profile) = profile {
        let axes: &[Axis] = match profile {
            ProfileArg::X => &[Axis::X],
            ProfileArg::Y => &[Axis::Y],
            ProfileArg::Z => &[Axis::Z],
            ProfileArg::All => &Axis::ALL,
        };
        for &axis in axes {
            let path = out.join(format!("calib_{axis}.csv"));
            let log = simulate_axis(&cfg, &sim, axis)?;
            write_single_jaw(&path, &log)?;
            println!("wrote {} ({} samples)", path.display(), log.samples.len());
        }
        return Ok(());
    }

    let scenario = scenario.expect("clap enforces one of profile/scenario");
    let chain = load_chain_for(&cfg, None)?;
    let rig = build_rig(&cfg, chain, seed)?;
    let sc = &cfg.scenario;
    let (name, log) = match scenario {
        ScenarioArg::Pinch => {
            let jaw_true = sc.jaw_true_deg.unwrap_or(10.0).to_radians();
            let spec = PinchSpec {
                grasp_left_n: sc.grasp_left_n.unwrap_or(sc.grasp_n),
                grasp_right_n: sc.grasp_right_n.unwrap_or(sc.grasp_n),
                duration_s: sc.duration_s.unwrap_or(4.0),
                jaw_true_rad: jaw_true,
                jaw_reported_rad: sc.jaw_reported_deg.map_or(jaw_true, f64::to_radians),
                proximal_rad: [0.0; 5],
                bisector_rad: 0.0,
            };
            ("pinch.csv", pinch_scenario(&rig, &spec)?)
        }
        ScenarioArg::FlatTissue | ScenarioArg::Stem => {
            let kind = if matches!(scenario, ScenarioArg::FlatTissue) {
                ManipulationKind::FlatTissue
            } else {
                ManipulationKind::Stem
            };
            let mut spec = ManipulationSpec::new(kind);
            spec.grasp_n = sc.grasp_n;
            if let Some(d) = sc.duration_s {
                spec.duration_s = d;
            }
            if let Some(j) = sc.jaw_true_deg {
                spec.jaw_true_rad = j.to_radians();
            }
            if let Some(j) = sc.jaw_reported_deg {
                spec.jaw_reported_rad = j.to_radians();
            }
            spec.pose_error_rad = sc.pose_error_deg.to_radians();
            let name = if kind == ManipulationKind::FlatTissue {
                "flat_tissue.csv"
            } else {
                "stem.csv"
            };
            (name, manipulation_scenario(&rig, &spec)?)
        }
    };
    let path = out.join(name);
    write_dual_jaw(&path, &log)?;
    println!("wrote {} ({} rows)", path.display(), log.rows.len());
    Ok(())
}

/// One calibration log for an axis: loading/unloading to the positive peak,
/// then to the negative peak, on a continuous clock and rng stream.
fn simulate_axis(cfg: &ConfigFile, sim: &SimConfig, axis: Axis) -> Result<SingleJawLog, CliError> {
    let p = &cfg.profile;
    let peak = match axis {
        Axis::X => p.peak_x_n,
        Axis::Y => p.peak_y_n,
        Axis::Z => p.peak_z_n,
    }
    .unwrap_or(cfg.geometry.range_n(axis));

    // distinct noise stream per axis file
    let mut sim = sim.clone();
    sim.seed = sim.seed.wrapping_add(axis.index() as u64 + 1);
    let mut rng = sim.rng();

    let mut samples = Vec::new();
    for sign in [1.0, -1.0] {
        let profile = LoadProfile {
            axis,
            peak_n: sign * peak,
            step_n: p.step_n,
            include_unloading: p.include_unloading,
            dwell_samples: p.dwell_samples,
        };
        let t_start = samples.len() as f64 / SAMPLE_RATE_HZ;
        samples.extend(run_profile_from(&sim, &profile, &mut rng, t_start)?);
    }
    Ok(SingleJawLog { samples })
}

fn read_logs(paths: &[PathBuf]) -> Result<Vec<SingleJawLog>, CliError> {
    paths.iter().map(|p| Ok(read_single_jaw(p)?)).collect()
}

fn cmd_calibrate(
    config: Option<&Path>,
    out: &Path,
    csv: bool,
    log_paths: &[PathBuf],
) -> Result<(), CliError> {
    let cfg = ConfigFile::load_or_default(config)?;
    let logs = read_logs(log_paths)?;
    let samples: Vec<CalibrationSample> = logs.into_iter().flat_map(|l| l.samples).collect();

    // catch single-axis inputs before the numeric rank check does
    let mut covered = [false; 3];
    let mut mixed = false;
    for s in &samples {
        match s.axis_label.axis() {
            Some(a) => covered[a.index()] = true,
            None => mixed = true,
        }
    }
    if !mixed && covered.iter().any(|c| !c) {
        let missing: Vec<&str> =
            Axis::ALL.iter().filter(|a| !covered[a.index()]).map(|a| a.as_str()).collect();
        return Err(CliError::numeric(format!(
            "calibration logs never load the {} ax{}; add those runs and refit",
            missing.join(", "),
            if missing.len() == 1 { "is" } else { "es" },
        )));
    }

    let fitted = fit_sensitivity(&samples, cfg.geometry)?;
    write_sensitivity(out, &fitted)?;
    let report = CalibrationReport::compute(&samples, &fitted)?;

    if csv {
        print_calibration_csv(&report);
    } else {
        println!("sensitivity written to {}", out.display());
        println!("calibration quality over {} samples:", samples.len());
        print_calibration_table(&report);
    }
    Ok(())
}

fn fmt_opt(v: Option<f64>, width: usize, prec: usize) -> String {
    match v {
        Some(x) => format!("{x:>width$.prec$}"),
        None => format!("{:>width$}", "-"),
    }
}

fn print_calibration_table(report: &CalibrationReport) {
    println!(
        "{:>6} {:>10} {:>10} {:>9} {:>9} {:>9}",
        "axis", "RMSE (N)", "NRMSD (%)", "R^2", "hyst+ (%)", "hyst- (%)"
    );
    for axis in Axis::ALL {
        let i = axis.index();
        println!(
            "{:>6} {:>10.4} {:>10.3} {} {} {}",
            axis.as_str(),
            report.rmse_n[i],
            report.nrmsd_pct[i],
            fmt_opt(report.r2[i], 9, 5),
            fmt_opt(report.hysteresis_pct.get(axis, Sign::Pos), 9, 2),
            fmt_opt(report.hysteresis_pct.get(axis, Sign::Neg), 9, 2),
        );
    }
}

fn print_calibration_csv(report: &CalibrationReport) {
    println!("metric,axis,value");
    for axis in Axis::ALL {
        let i = axis.index();
        println!("rmse_n,{axis},{}", report.rmse_n[i]);
        println!("nrmsd_pct,{axis},{}", report.nrmsd_pct[i]);
        match report.r2[i] {
            Some(v) => println!("r2,{axis},{v}"),
            None => println!("r2,{axis},"),
        }
        for sign in Sign::BOTH {
            match report.hysteresis_pct.get(axis, sign) {
                Some(v) => println!("hysteresis_pct,{axis}{sign},{v}"),
                None => println!("hysteresis_pct,{axis}{sign},"),
            }
        }
    }
}

fn log_to_pred_truth(
    log: &SingleJawLog,
    sens: &SensitivityMatrix,
) -> (Vec<ForceVector>, Vec<ForceVector>) {
    let pred = log.samples.iter().map(|s| jawforce::calib::apply(sens, &s.frame)).collect();
    let truth = log.samples.iter().map(|s| s.ref_force).collect();
    (pred, truth)
}

fn print_error_table(report: &ErrorReport) {
    println!("{:>6} {:>10} {:>10} {:>13}", "axis", "RMSE (N)", "NRMSD (%)", "max error (N)");
    for axis in Axis::ALL {
        let i = axis.index();
        println!(
            "{:>6} {:>10.4} {:>10.3} {:>13.4}",
            axis.as_str(),
            report.rmse_n[i],
            report.nrmsd_pct[i],
            report.max_error_n[i],
        );
    }
}

fn print_error_csv(report: &ErrorReport) {
    println!("metric,axis,value");
    for axis in Axis::ALL {
        let i = axis.index();
        println!("rmse_n,{axis},{}", report.rmse_n[i]);
        println!("nrmsd_pct,{axis},{}", report.nrmsd_pct[i]);
        println!("max_error_n,{axis},{}", report.max_error_n[i]);
    }
}

struct Aggregated {
    mean: f64,
    sd: f64,
}

fn aggregate(values: &[f64]) -> Aggregated {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Aggregated { mean, sd: var.sqrt() }
}

fn print_aggregate(reports: &[ErrorReport], trials: usize, csv: bool) {
    if csv {
        println!("metric,axis,mean,sd");
    } else {
        println!("aggregate over {trials} trial(s), mean +/- sd:");
        println!("{:>6} {:>20} {:>20} {:>24}", "axis", "RMSE (N)", "NRMSD (%)", "max error (N)");
    }
    for axis in Axis::ALL {
        let i = axis.index();
        let rmse = aggregate(&reports.iter().map(|r| r.rmse_n[i]).collect::<Vec<_>>());
        let nrmsd = aggregate(&reports.iter().map(|r| r.nrmsd_pct[i]).collect::<Vec<_>>());
        let maxe = aggregate(&reports.iter().map(|r| r.max_error_n[i]).collect::<Vec<_>>());
        if csv {
            println!("rmse_n,{axis},{},{}", rmse.mean, rmse.sd);
            println!("nrmsd_pct,{axis},{},{}", nrmsd.mean, nrmsd.sd);
            println!("max_error_n,{axis},{},{}", maxe.mean, maxe.sd);
        } else {
            println!(
                "{:>6} {:>11.4}+/-{:<7.4} {:>11.3}+/-{:<7.3} {:>14.4}+/-{:<7.4}",
                axis.as_str(),
                rmse.mean,
                rmse.sd,
                nrmsd.mean,
                nrmsd.sd,
                maxe.mean,
                maxe.sd,
            );
        }
    }
}

fn cmd_evaluate(
    config: Option<&Path>,
    sens_path: &Path,
    csv: bool,
    aggregate_flag: bool,
    log_paths: &[PathBuf],
) -> Result<(), CliError> {
    let cfg = ConfigFile::load_or_default(config)?;
    let sens = read_sensitivity(sens_path, cfg.geometry)?;
    let logs = read_logs(log_paths)?;

    let mut reports = Vec::new();
    for log in &logs {
        let (pred, truth) = log_to_pred_truth(log, &sens);
        reports.push(ErrorReport::compute(&pred, &truth, &cfg.geometry)?);
    }

    if aggregate_flag {
        print_aggregate(&reports, reports.len(), csv);
    } else {
        for (path, report) in log_paths.iter().zip(&reports) {
            if csv {
                print_error_csv(report);
            } else {
                println!("{}:", path.display());
                print_error_table(report);
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_resolve(
    config: Option<&Path>,
    chain_flag: Option<&Path>,
    sens_left: &Path,
    sens_right: &Path,
    theta_min_deg: Option<f64>,
    out: Option<&Path>,
    csv: bool,
    aggregate_flag: bool,
    log_paths: &[PathBuf],
) -> Result<(), CliError> {
    let cfg = ConfigFile::load_or_default(config)?;
    let chain = load_chain_for(&cfg, chain_flag)?;
    let left = read_sensitivity(sens_left, cfg.geometry)?;
    let right = read_sensitivity(sens_right, cfg.geometry)?;
    let settings = resolve_settings(&cfg, theta_min_deg);
    if out.is_some() && log_paths.len() > 1 {
        return Err(CliError::input("--out expects exactly one input log"));
    }

    let mut reports = Vec::new();
    for path in log_paths {
        let log = read_dual_jaw(path)?;
        let resolved = resolve_log(&chain, &left, &right, &log, &settings)?;
        if let Some(out_path) = out {
            write_resolved_csv(out_path, &resolved, log.has_ground_truth)?;
            println!("wrote {} ({} rows)", out_path.display(), resolved.len());
        }
        if log.has_ground_truth {
            let pred: Vec<ForceVector> = resolved.iter().map(|r| r.force).collect();
            let truth: Vec<ForceVector> =
                resolved.iter().map(|r| r.ground_truth.unwrap_or_default()).collect();
            reports.push(ErrorReport::compute(&pred, &truth, &cfg.geometry)?);
        }
    }

    if reports.is_empty() {
        if out.is_none() {
            println!("no ground-truth columns; nothing to report (use --out for the trace)");
        }
    } else if aggregate_flag {
        print_aggregate(&reports, reports.len(), csv);
    } else {
        for (path, report) in log_paths.iter().zip(&reports) {
            if csv {
                print_error_csv(report);
            } else {
                println!("{} vs ground truth:", path.display());
                print_error_table(report);
            }
        }
    }
    Ok(())
}

fn write_resolved_csv(path: &Path, rows: &[ResolvedRow], has_gt: bool) -> Result<(), CliError> {
    let mut text = String::from(if has_gt {
        "t_s,fx,fy,fz,gt_fx,gt_fy,gt_fz\n"
    } else {
        "t_s,fx,fy,fz\n"
    });
    for r in rows {
        text.push_str(&format!("{},{},{},{}", r.t_s, r.force.fx, r.force.fy, r.force.fz));
        if has_gt {
            let gt = r.ground_truth.unwrap_or_default();
            text.push_str(&format!(",{},{},{}", gt.fx, gt.fy, gt.fz));
        }
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_grip(
    config: Option<&Path>,
    chain_flag: Option<&Path>,
    sens_left: &Path,
    sens_right: &Path,
    theta_min_deg: Option<f64>,
    out: Option<&Path>,
    csv: bool,
    aggregate_flag: bool,
    log_paths: &[PathBuf],
) -> Result<(), CliError> {
    let cfg = ConfigFile::load_or_default(config)?;
    let chain = load_chain_for(&cfg, chain_flag)?;
    let left = read_sensitivity(sens_left, cfg.geometry)?;
    let right = read_sensitivity(sens_right, cfg.geometry)?;
    let settings = resolve_settings(&cfg, theta_min_deg);
    if out.is_some() && log_paths.len() > 1 {
        return Err(CliError::input("--out expects exactly one input log"));
    }

    let mut reports = Vec::new();
    for path in log_paths {
        let log = read_dual_jaw(path)?;
        let grips = grip_log(&chain, &left, &right, &log, &settings)?;
        if let Some(out_path) = out {
            write_grip_csv(out_path, &grips, log.has_ground_truth)?;
            println!("wrote {} ({} rows)", out_path.display(), grips.len());
        }
        if log.has_ground_truth {
            let pred: Vec<f64> = grips.iter().map(|g| g.grip_n).collect();
            let truth: Vec<f64> = grips.iter().map(|g| g.reference_n.unwrap_or(0.0)).collect();
            if let Some(report) = ScalarErrorReport::compute(&pred, &truth) {
                reports.push(report);
            }
        }
    }

    if reports.is_empty() {
        if out.is_none() {
            println!("no ground-truth columns; nothing to report (use --out for the trace)");
        }
    } else if aggregate_flag {
        let rmse = aggregate(&reports.iter().map(|r| r.rmse_n).collect::<Vec<_>>());
        let maxe = aggregate(&reports.iter().map(|r| r.max_error_n).collect::<Vec<_>>());
        if csv {
            println!("metric,axis,mean,sd");
            println!("rmse_n,grip,{},{}", rmse.mean, rmse.sd);
            println!("max_error_n,grip,{},{}", maxe.mean, maxe.sd);
        } else {
            println!("grip aggregate over {} trial(s):", reports.len());
            println!("  RMSE (N):      {:.4} +/- {:.4}", rmse.mean, rmse.sd);
            println!("  max error (N): {:.4} +/- {:.4}", maxe.mean, maxe.sd);
        }
    } else {
        for (path, report) in log_paths.iter().zip(&reports) {
            if csv {
                println!("metric,axis,value");
                println!("rmse_n,grip,{}", report.rmse_n);
                println!("max_error_n,grip,{}", report.max_error_n);
            } else {
                println!("{} vs ground truth:", path.display());
                println!("  RMSE (N):      {:.4}", report.rmse_n);
                println!("  max error (N): {:.4}", report.max_error_n);
            }
        }
    }
    Ok(())
}

fn write_grip_csv(path: &Path, rows: &[GripRow], has_gt: bool) -> Result<(), CliError> {
    let mut text = String::from(if has_gt { "t_s,f_g,f_g_ref\n" } else { "t_s,f_g\n" });
    for r in rows {
        text.push_str(&format!("{},{}", r.t_s, r.grip_n));
        if has_gt {
            text.push_str(&format!(",{}", r.reference_n.unwrap_or(0.0)));
        }
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}
