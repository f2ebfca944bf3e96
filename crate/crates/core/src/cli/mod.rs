//! Command-line front end: `run`, `scan`, `validate` and `squid`.

pub mod config;
pub mod validate;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::geometry::CurrentSource;
use crate::phase::{phase_full, regime_scan_points, squid_feasibility, PhaseResult, RegimePoint, Scenario};
use crate::units::UnitSystem;

pub use config::RunConfig;

pub const CSV_HEADER: &str = "D,D_over_c_dt,factor,delta_phi,term_e_AS,term_S_Ae";

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVARIANT: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NONCONVERGENCE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "abretard", version, about = "Aharonov-Bohm phase shifts from retarded-potential integrals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output file (report for run/validate, CSV for scan).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Multiply every quadrature resolution by this factor.
    #[arg(long, global = true)]
    pub quadrature_scale: Option<f64>,
    /// Unit system of the config values, overriding the file.
    #[arg(long, global = true, value_enum)]
    pub units: Option<UnitSystem>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the full phase for one scenario.
    Run { config: PathBuf },
    /// Sweep the source distance and write the regime curve as CSV.
    Scan { config: PathBuf },
    /// Run the built-in invariant suites.
    Validate { config: Option<PathBuf> },
    /// Distance light travels during a detector response time.
    Squid {
        #[arg(long)]
        response_time: f64,
    },
}

fn exit_code(e: &Error) -> u8 {
    if e.is_numerical() {
        EXIT_NONCONVERGENCE
    } else {
        EXIT_CONFIG
    }
}

fn load(path: Option<&Path>, units: Option<UnitSystem>) -> Result<RunConfig> {
    let mut cfg = match path {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(u) = units {
        cfg.units = u;
    }
    Ok(cfg)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

/// Execute the parsed command line and return the process exit code.
pub fn execute(cli: Cli) -> u8 {
    let outcome = match &cli.command {
        Command::Run { config } => cmd_run(&cli, config),
        Command::Scan { config } => cmd_scan(&cli, config),
        Command::Validate { config } => cmd_validate(&cli, config.as_deref()),
        Command::Squid { response_time } => cmd_squid(*response_time),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn source_distance(s: &Scenario) -> f64 {
    let Ok(circuit) = s.circuit() else { return f64::NAN };
    let c = circuit.centroid();
    match &s.source {
        CurrentSource::Loop(lp) => lp.center.distance(c),
        CurrentSource::Solenoid(sol) => {
            let w = c - sol.axis_point;
            (w - sol.axis_dir * w.dot(sol.axis_dir)).norm()
        }
    }
}

/// Shortest round-trip decimal; exponent form outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn csv_row(p: &RegimePoint) -> String {
    format!(
        "{},{},{},{},{},{}",
        num(p.distance),
        num(p.d_over_cdt),
        num(p.factor.unwrap_or(f64::NAN)),
        num(p.delta_phi),
        num(p.term_e_dot_as),
        num(p.term_s_dot_ae)
    )
}

fn failed_row(distance: f64, window: f64) -> String {
    format!("{},{},NaN,NaN,NaN,NaN", num(distance), num(distance / window))
}

pub fn format_report(s: &Scenario, r: &PhaseResult) -> String {
    let (t_i, t_f) = s.window();
    let regime = if s.is_retarded_regime() {
        "retarded"
    } else if source_distance(s) <= 0.01 * s.window_length() {
        "quasi-static"
    } else {
        "intermediate"
    };
    let source = match &s.source {
        CurrentSource::Loop(lp) => format!(
            "loop (radius {}, current {}, center {}, {} segments, {})",
            lp.radius,
            lp.current,
            lp.center,
            lp.n_segments,
            if s.static_source { "static" } else { "switched" }
        ),
        CurrentSource::Solenoid(sol) => format!("ideal solenoid (flux {}, axis {} + λ{})", sol.flux, sol.axis_point, sol.axis_dir),
    };
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(out, "{k:<22}{v}");
    };
    line("source", source);
    line("source_distance", num(source_distance(s)));
    line("window", format!("[{}, {}]", num(t_i), num(t_f)));
    line("regime", regime.into());
    line("phi_path1", num(r.phi_path1));
    line("phi_path2", num(r.phi_path2));
    line("delta_phi", num(r.delta_phi));
    line("term_e_AS", num(r.term_e_dot_as));
    line("term_S_Ae", num(r.term_s_dot_ae));
    line("phase_standard", num(r.phase_standard));
    line("factor", r.factor.map(num).unwrap_or_else(|| "undefined (standard phase is zero)".into()));
    line("p_cos", num(r.p_cos));
    line("p_sin", num(r.p_sin));
    line("reciprocity_residual", num(r.reciprocity_residual()));
    out
}

fn cmd_run(cli: &Cli, path: &Path) -> Result<u8> {
    let cfg = load(Some(path), cli.units)?;
    let s = cfg.scenario(cli.quadrature_scale)?;
    let r = phase_full(&s)?;
    let report = format_report(&s, &r);
    print!("{report}");
    if let Some(p) = cli.out.as_ref().or(cfg.output.report.as_ref()) {
        write_file(p, &report)?;
    }
    if let Some(p) = &cfg.output.csv {
        let point = RegimePoint {
            distance: source_distance(&s),
            d_over_cdt: source_distance(&s) / s.window_length(),
            factor: r.factor,
            delta_phi: r.delta_phi,
            term_e_dot_as: r.term_e_dot_as,
            term_s_dot_ae: r.term_s_dot_ae,
        };
        write_file(p, &format!("{CSV_HEADER}\n{}\n", csv_row(&point)))?;
    }
    Ok(EXIT_OK)
}

fn cmd_scan(cli: &Cli, path: &Path) -> Result<u8> {
    let cfg = load(Some(path), cli.units)?;
    let base = cfg.scenario(cli.quadrature_scale)?;
    if !matches!(base.source, CurrentSource::Loop(_)) {
        return Err(Error::InvalidArgument("scan: source.kind must be \"loop\"".into()));
    }
    let window = base.window_length();
    let (distances, duplicates) = cfg.scan_distances(window)?;
    if duplicates > 0 {
        log::warn!("dropped {duplicates} duplicate scan distance(s)");
        eprintln!("warning: dropped {duplicates} duplicate scan distance(s)");
    }
    let results = regime_scan_points(&base, &distances);
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let mut ok = 0;
    let mut numerical = false;
    for (d, r) in distances.iter().zip(&results) {
        match r {
            Ok(p) => {
                ok += 1;
                csv.push_str(&csv_row(p));
            }
            Err(e) => {
                numerical |= e.is_numerical();
                eprintln!("error: {e}");
                csv.push_str(&failed_row(*d, window));
            }
        }
        csv.push('\n');
    }
    if ok == 0 {
        return Ok(if numerical { EXIT_NONCONVERGENCE } else { EXIT_CONFIG });
    }
    match cli.out.as_ref().or(cfg.output.csv.as_ref()) {
        Some(p) => write_file(p, &csv)?,
        None => print!("{csv}"),
    }
    Ok(EXIT_OK)
}

fn cmd_validate(cli: &Cli, path: Option<&Path>) -> Result<u8> {
    let cfg = load(path, cli.units)?;
    let settings = cfg.settings(cli.quadrature_scale)?;
    let outcomes = validate::run_suites(&settings);
    let mut report = String::new();
    for o in &outcomes {
        let _ = writeln!(report, "{o}");
    }
    let all = outcomes.iter().all(|o| o.passed);
    let _ = writeln!(report, "{}", if all { "all invariants hold" } else { "invariant failure" });
    print!("{report}");
    if let Some(p) = cli.out.as_ref().or(cfg.output.report.as_ref()) {
        write_file(p, &report)?;
    }
    Ok(if all { EXIT_OK } else { EXIT_INVARIANT })
}

fn cmd_squid(response_time: f64) -> Result<u8> {
    let d = squid_feasibility(response_time)?;
    println!("response_time_s       {response_time}");
    println!("min_distance_m        {d}");
    Ok(EXIT_OK)
}
