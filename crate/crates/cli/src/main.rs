use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use solenoid_xsec::config::{Format, RunConfig, Units, CONFIG_ENV};
use solenoid_xsec::emit::{emit, Dataset};
use solenoid_xsec::figure1::{figure1_dataset, theta_grid, to_dataset, Figure1Spec};
use solenoid_xsec::run::{parse_formula, scan_dataset, scan_summary, xsec_dataset, Setup};
use solenoid_xsec::verify::{
    verify_bessel, verify_formfactor, verify_spinsum, VerifyReport, DEFAULT_SEED,
};
use solenoid_xsec_core::limits::{hbar_scan, pr0_scan};
use solenoid_xsec_core::xsec::ScatterPoint;

/// Born cross sections for Dirac particles scattered by a solenoid.
///
/// Every setting may also come from a `key = value` file given by --config or
/// by the SOLENOID_XSEC_CONFIG environment variable; keys are the flag names
/// with `-` replaced by `_`. Flags override the file.
#[derive(Parser)]
#[command(name = "solenoid-xsec", version)]
struct Cli {
    /// Configuration file of `key = value` lines (`#` starts a comment)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a cross-section formula
    #[command(subcommand)]
    Xsec(XsecCommand),
    /// Classical-limit scans with envelope power-law fits
    #[command(subcommand)]
    Limits(LimitsCommand),
    /// Polar-plot dataset for 1..49 MeV electrons, r0 = 1 cm, one flux quantum
    Figure1(Figure1Args),
    /// Compare library results with independent oracles
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Subcommand)]
enum XsecCommand {
    /// One angle
    Point(PointArgs),
    /// A grid of angles symmetric about 0
    ScanTheta(ScanThetaArgs),
}

#[derive(Subcommand)]
enum LimitsCommand {
    /// Scale hbar by s over log-spaced s in [smin, smax]
    ScanHbar(ScanArgs),
    /// Scale r0 by s over log-spaced s in [smin, smax]
    ScanPr0(ScanArgs),
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// J0 and J1 against the integral representation on [0, 200]
    Bessel(BesselArgs),
    /// Three evaluations of the spin-averaged squared current on random kinematics
    Spinsum(SpinsumArgs),
    /// Closed-form form factors against adaptive quadrature on q r0 in [0.1, 20]
    Formfactor(FormfactorArgs),
}

#[derive(Args)]
struct PhysicsArgs {
    /// Unit system: cgs (Gaussian) or natural (hbar = c = e = 1, MeV)
    #[arg(long)]
    units: Option<Units>,
    /// Electron kinetic energy in MeV [default: 1]
    #[arg(long)]
    energy_mev: Option<f64>,
    /// Momentum in the active unit system; replaces --energy-mev
    #[arg(long, conflicts_with = "energy_mev")]
    momentum: Option<f64>,
    /// Solenoid radius (cm under cgs) [default: 1]
    #[arg(long)]
    r0_cm: Option<f64>,
    /// Magnetic flux (gauss cm^2 under cgs)
    #[arg(long)]
    flux: Option<f64>,
    /// Flux as an integer number of quanta 2 pi hbar c / e [default: 1]
    #[arg(long, conflicts_with = "flux", allow_hyphen_values = true)]
    quanta: Option<i64>,
    /// 1 or 2 depending on whether the final polarization is measured [default: 1]
    #[arg(long)]
    f: Option<u8>,
}

impl PhysicsArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            units: self.units,
            energy_mev: self.energy_mev,
            momentum: self.momentum,
            r0_cm: self.r0_cm,
            flux: self.flux,
            quanta: self.quanta,
            f: self.f,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// csv or json [default: csv]
    #[arg(long)]
    format: Option<Format>,
    /// Output file; stdout when absent
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

impl OutputArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            format: self.format,
            out: self.out.clone(),
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct FormulaArgs {
    /// master, helicity, helicity-conserving, ab, ll, small-x,
    /// small-x-small-theta, quantized, quantized-small-theta or envelope [default: master]
    #[arg(long)]
    formula: Option<String>,
    /// Initial helicity for --formula helicity: 1 or -1 [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    lambda_i: Option<i32>,
    /// Final helicity for --formula helicity: 1 or -1 [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    lambda_f: Option<i32>,
}

impl FormulaArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            formula: self.formula.clone(),
            lambda_i: self.lambda_i,
            lambda_f: self.lambda_f,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    #[command(flatten)]
    formula: FormulaArgs,
    /// Scattering angle in radians, within (-pi, pi] and nonzero
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ScanThetaArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    #[command(flatten)]
    formula: FormulaArgs,
    /// Half-width of the excluded band around theta = 0 [default: 0.001]
    #[arg(long)]
    theta_min: Option<f64>,
    /// Grid points per side, theta_min..pi [default: 181]
    #[arg(long)]
    theta_points: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    /// Scattering angle in radians [default: pi/2]
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Number of log-spaced samples [default: 300000]
    #[arg(long)]
    points: Option<usize>,
    /// Smallest scale factor [default: 1e-4 for hbar, 1e2 for r0]
    #[arg(long)]
    smin: Option<f64>,
    /// Largest scale factor [default: 1e-2 for hbar, 1e4 for r0]
    #[arg(long)]
    smax: Option<f64>,
    /// Write the fit summary JSON here instead of stderr
    #[arg(long, value_name = "PATH")]
    summary: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct Figure1Args {
    /// Unit system [default: cgs]
    #[arg(long)]
    units: Option<Units>,
    /// Half-width of the excluded band around theta = 0 [default: 0.001]
    #[arg(long)]
    theta_min: Option<f64>,
    /// Grid points per side, theta_min..pi [default: 181]
    #[arg(long)]
    theta_points: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BesselArgs {
    /// Evenly spaced grid points on [0, 200] [default: 2001]
    #[arg(long)]
    points: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SpinsumArgs {
    /// Number of random kinematic points [default: 1000]
    #[arg(long)]
    samples: Option<usize>,
    /// Random seed, recorded in every output row [default: 1729]
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FormfactorArgs {
    /// Log-spaced q r0 points [default: 50]
    #[arg(long)]
    points: Option<usize>,
    /// Quadrature relative tolerance, 1e-12..1e-4 [default: 1e-9]
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

fn load_config(path: Option<PathBuf>) -> Result<RunConfig> {
    let path = path.or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    match path {
        Some(p) => Ok(RunConfig::from_file(&p)?),
        None => Ok(RunConfig::default()),
    }
}

fn write_out(data: &Dataset, cfg: &RunConfig) -> Result<()> {
    emit(data, cfg.format.unwrap_or_default(), cfg.out.as_deref())
}

fn report(r: &VerifyReport, cfg: &RunConfig) -> Result<bool> {
    write_out(&r.dataset, cfg)?;
    let mut err = std::io::stderr().lock();
    for c in &r.checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        writeln!(
            err,
            "{status} {}: {:e} (threshold {:e})",
            c.name, c.value, c.threshold
        )?;
    }
    Ok(r.passed())
}

fn run(cli: Cli) -> Result<bool> {
    let file = load_config(cli.config)?;
    match cli.command {
        Command::Xsec(XsecCommand::Point(a)) => {
            let cfg = file.overlay(a.physics.config().overlay(a.formula.config()).overlay(
                RunConfig {
                    theta: a.theta,
                    ..a.output.config()
                },
            ));
            let setup = Setup::from_config(&cfg)?;
            let formula = parse_formula(cfg.formula.as_deref().unwrap_or("master"))?;
            let theta = cfg.theta.context("missing --theta")?;
            write_out(&xsec_dataset(&setup, formula, &[theta], &cfg)?, &cfg)?;
        }
        Command::Xsec(XsecCommand::ScanTheta(a)) => {
            let cfg = file.overlay(a.physics.config().overlay(a.formula.config()).overlay(
                RunConfig {
                    theta_min: a.theta_min,
                    theta_points: a.theta_points,
                    ..a.output.config()
                },
            ));
            let setup = Setup::from_config(&cfg)?;
            let formula = parse_formula(cfg.formula.as_deref().unwrap_or("master"))?;
            let grid = theta_grid(
                cfg.theta_min.unwrap_or(1e-3),
                cfg.theta_points.unwrap_or(181),
            )?;
            write_out(&xsec_dataset(&setup, formula, &grid, &cfg)?, &cfg)?;
        }
        Command::Limits(cmd) => {
            let (a, hbar) = match cmd {
                LimitsCommand::ScanHbar(a) => (a, true),
                LimitsCommand::ScanPr0(a) => (a, false),
            };
            let cfg = file.overlay(a.physics.config().overlay(RunConfig {
                theta: a.theta,
                points: a.points,
                smin: a.smin,
                smax: a.smax,
                summary: a.summary.clone(),
                ..a.output.config()
            }));
            let setup = Setup::from_config(&cfg)?;
            let pt = ScatterPoint::new(cfg.theta.unwrap_or(PI / 2.0))?;
            let n = cfg.points.unwrap_or(300_000);
            let result = if hbar {
                let (lo, hi) = (cfg.smin.unwrap_or(1e-4), cfg.smax.unwrap_or(1e-2));
                hbar_scan(&setup.beam, &setup.sol, &pt, &setup.u, lo, hi, n)?
            } else {
                let (lo, hi) = (cfg.smin.unwrap_or(1e2), cfg.smax.unwrap_or(1e4));
                pr0_scan(&setup.beam, &setup.sol, &pt, &setup.u, lo, hi, n)?
            };
            write_out(&scan_dataset(&result), &cfg)?;
            let summary = scan_summary(&result);
            match &cfg.summary {
                Some(p) => std::fs::write(p, summary)
                    .with_context(|| format!("cannot write {}", p.display()))?,
                None => std::io::stderr().write_all(summary.as_bytes())?,
            }
        }
        Command::Figure1(a) => {
            let cfg = file.overlay(RunConfig {
                units: a.units,
                theta_min: a.theta_min,
                theta_points: a.theta_points,
                ..a.output.config()
            });
            let d = Figure1Spec::default();
            let spec = Figure1Spec {
                theta_min: cfg.theta_min.unwrap_or(d.theta_min),
                theta_points: cfg.theta_points.unwrap_or(d.theta_points),
                ..d
            };
            let rows = figure1_dataset(&spec, &cfg.units.unwrap_or_default().system())?;
            write_out(&to_dataset(&rows), &cfg)?;
        }
        Command::Verify(VerifyCommand::Bessel(a)) => {
            let cfg = file.overlay(RunConfig {
                points: a.points,
                ..a.output.config()
            });
            return report(&verify_bessel(cfg.points.unwrap_or(2001), 200.0)?, &cfg);
        }
        Command::Verify(VerifyCommand::Spinsum(a)) => {
            let cfg = file.overlay(RunConfig {
                samples: a.samples,
                seed: a.seed,
                ..a.output.config()
            });
            let r = verify_spinsum(
                cfg.samples.unwrap_or(1000),
                cfg.seed.unwrap_or(DEFAULT_SEED),
            )?;
            return report(&r, &cfg);
        }
        Command::Verify(VerifyCommand::Formfactor(a)) => {
            let cfg = file.overlay(RunConfig {
                points: a.points,
                tol: a.tol,
                ..a.output.config()
            });
            let r =
                verify_formfactor(cfg.points.unwrap_or(50), 0.1, 20.0, cfg.tol.unwrap_or(1e-9))?;
            return report(&r, &cfg);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
