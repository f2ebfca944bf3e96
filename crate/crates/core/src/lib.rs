//! Aharonov–Bohm phase shifts computed from retarded-potential integrals.
//!
//! All quantities are in natural Heaviside–Lorentz units with `c = ħ = 1`.
//! Conversion from SI happens only in [`units`] and the command-line front end.
//!
//! ```
//! use abretard::geometry::{rectangle_interferometer, CurrentLoop};
//! use abretard::{phase_full, CurrentSource, Scenario, Vec3};
//!
//! let (p1, p2) = rectangle_interferometer(Vec3::new(-0.5, -0.5, 0.0), Vec3::X, Vec3::Y, 1.0, 1.0)?;
//! let lp = CurrentLoop::new(Vec3::new(0.0, 0.0, 0.5), Vec3::Z, 0.2, 1.0, 64)?;
//! let s = Scenario::new(CurrentSource::Loop(lp), p1, p2, 1.0, 1e-3, 0.0)?;
//! let r = phase_full(&s)?;
//! assert!((r.factor.unwrap() - 1.0).abs() < 1e-3);
//! # Ok::<(), abretard::Error>(())
//! ```

pub mod cli;
pub mod em_fields;
pub mod error;
pub mod geometry;
pub mod phase;
pub mod propagator;
pub mod quadrature;
pub mod units;

pub use error::{Error, Result};
pub use geometry::{CurrentLoop, CurrentSource, ElectronCurrent, IdealSolenoid, Polyline, SpacetimePoint, Vec3};
pub use phase::{phase_full, phase_source_side, phase_standard, PhaseResult, RegimeCurve, Scenario};
