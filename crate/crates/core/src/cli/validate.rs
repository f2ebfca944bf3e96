//! Built-in invariant suites run by `abretard validate`.

use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};

use crate::em_fields::{enclosed_flux, retarded_potential_of_electron};
use crate::error::Result;
use crate::geometry::{
    rectangle_interferometer, CurrentLoop, CurrentSource, ElectronCurrent, IdealSolenoid, Polyline, SpacetimePoint, Vec3,
};
use crate::phase::{phase_full, phase_standard, Scenario};
use crate::propagator::{sinusoidal_test_pair, splitting_identity_residual};
use crate::quadrature::QuadratureSettings;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub measured: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:<4} {:<22} measured = {:.3e}  threshold = {:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.threshold
        )
    }
}

fn check(name: &'static str, measured: f64, threshold: f64) -> CheckOutcome {
    CheckOutcome { name, measured, threshold, passed: measured <= threshold }
}

/// Regular polygon in the plane `z = height`.
pub fn coaxial_polygon(radius: f64, height: f64, n: usize) -> Result<Polyline> {
    Polyline::closed(
        (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                Vec3::new(radius * t.cos(), radius * t.sin(), height)
            })
            .collect(),
    )
}

/// Unit loop at the origin and a coaxial 16-gon of radius 1.1 passing 0.05 above
/// the wire's plane, close enough that the surface quadrature error is resolvable.
pub fn stokes_residual(settings: &QuadratureSettings) -> Result<f64> {
    let lp = CurrentLoop::new(Vec3::ZERO, Vec3::Z, 1.0, 1.0, 128)?;
    let report = enclosed_flux(&CurrentSource::Loop(lp), &coaxial_polygon(1.1, 0.05, 16)?, settings)?;
    Ok(report.stokes_residual().unwrap_or(f64::INFINITY))
}

/// Small loop `distance` above the center of a unit square interferometer.
pub fn loop_scenario(distance: f64, speed: f64, settings: QuadratureSettings) -> Result<Scenario> {
    let (p1, p2) = rectangle_interferometer(Vec3::new(-0.5, -0.5, 0.0), Vec3::X, Vec3::Y, 1.0, 1.0)?;
    let lp = CurrentLoop::new(Vec3::ZERO, Vec3::Z, 0.2, 1.0, 64)?;
    Scenario::new(CurrentSource::Loop(lp), p1, p2, 1.0, speed, 0.0)?.with_settings(settings).with_source_distance(distance)
}

fn causality_violations(samples: usize, seed: u64) -> Result<usize> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut violations = 0;
    for _ in 0..samples {
        let mut pt = || Vec3::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let path = Polyline::open(vec![pt(), pt(), pt()])?;
        let r = pt();
        let speed = rng.random_range(0.01..0.99);
        let t_start = rng.random_range(-5.0..5.0);
        let e = ElectronCurrent::new(path, speed, 1.0, t_start)?;
        let earliest = t_start + e.min_distance_to(r);
        let t = earliest - rng.random_range(1e-9..3.0);
        if retarded_potential_of_electron(&e, SpacetimePoint::new(r, t))? != Vec3::ZERO {
            violations += 1;
        }
    }
    Ok(violations)
}

/// Every suite with its measured residual. Errors inside a suite count as failures.
pub fn run_suites(settings: &QuadratureSettings) -> Vec<CheckOutcome> {
    let failed = |name, e: crate::Error| {
        log::error!("{name}: {e}");
        CheckOutcome { name, measured: f64::INFINITY, threshold: 0.0, passed: false }
    };
    let mut out = Vec::new();

    out.push(match stokes_residual(settings) {
        Ok(r) => check("stokes", r, 1e-4),
        Err(e) => failed("stokes", e),
    });

    let standard = (|| {
        let (p1, p2) = rectangle_interferometer(Vec3::new(-0.5, -0.5, 0.0), Vec3::X, Vec3::Y, 1.0, 1.0)?;
        let sol = IdealSolenoid::new(Vec3::new(0.1, 0.05, 0.0), Vec3::Z, 2.0 * PI)?;
        let s = Scenario::new(CurrentSource::Solenoid(sol), p1, p2, 1.0, 0.1, 0.0)?.with_settings(*settings);
        Ok::<_, crate::Error>((phase_standard(&s)? - 2.0 * PI).abs() / (2.0 * PI))
    })();
    out.push(match standard {
        Ok(r) => check("standard-phase", r, 1e-8),
        Err(e) => failed("standard-phase", e),
    });

    match loop_scenario(0.5, 1e-4, *settings).and_then(|s| phase_full(&s)) {
        Ok(r) => {
            out.push(check("reciprocity", r.reciprocity_residual(), 1e-3));
            out.push(check("quasi-static-factor", (r.factor.unwrap_or(f64::NAN) - 1.0).abs(), 1e-3));
        }
        Err(e) => {
            out.push(failed("reciprocity", e.clone()));
            out.push(failed("quasi-static-factor", e));
        }
    }

    let fractional = loop_scenario(0.5, 0.1, *settings)
        .and_then(|s| {
            let d = 2.0 * s.window_length();
            s.with_source_distance(d)
        })
        .and_then(|s| phase_full(&s));
    match fractional {
        Ok(r) => {
            out.push(check("causal-zero", r.term_s_dot_ae.abs(), 0.0));
            out.push(check("fractional-factor", (r.factor.unwrap_or(f64::NAN) - 0.5).abs(), 1e-3));
        }
        Err(e) => {
            out.push(failed("causal-zero", e.clone()));
            out.push(failed("fractional-factor", e));
        }
    }

    out.push(match splitting_identity_residual(&sinusoidal_test_pair(), settings) {
        Ok(c) => check("splitting-identity", c.residual, 1e-6),
        Err(e) => failed("splitting-identity", e),
    });

    out.push(match causality_violations(1000, 0x5eed) {
        Ok(n) => check("causality", n as f64, 0.0),
        Err(e) => failed("causality", e),
    });
    out
}
