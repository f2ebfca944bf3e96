//! Interference phases of an electron pair of paths coupled to a current source.
//!
//! The per-path phase is `½ (∫ J_e · A_S + ∫ J_S · A_e)` with both potentials
//! retarded. When the electron's potential cannot reach the source inside the
//! observation window the second term vanishes and only half of the usual
//! flux phase survives.

mod scan;
mod scenario;
mod terms;

use crate::em_fields::{line_integral, solenoid_vector_potential, DiscreteLoop};
use crate::error::{Error, Result};
use crate::geometry::{CurrentSource, ElectronCurrent};
use crate::units::SPEED_OF_LIGHT;

pub use scan::{regime_scan, regime_scan_points, RegimeCurve, RegimePoint};
pub use scenario::Scenario;

use terms::{path_coupling, solenoid_electron_term, Elements, FluxTube, Visibility};

/// Guard for relative residuals with a vanishing reference.
pub const RESIDUAL_GUARD: f64 = 1e-30;

/// Both interaction terms of one path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathTerms {
    /// `∫ J_e · A_S` for this path.
    pub term_e_dot_as: f64,
    /// `∫ J_S · A_e` for this path.
    pub term_s_dot_ae: f64,
}

impl PathTerms {
    pub fn phase(&self) -> f64 {
        0.5 * (self.term_e_dot_as + self.term_s_dot_ae)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseResult {
    pub paths: [PathTerms; 2],
    pub phi_path1: f64,
    pub phi_path2: f64,
    pub delta_phi: f64,
    /// Path 1 minus path 2.
    pub term_e_dot_as: f64,
    /// Path 1 minus path 2.
    pub term_s_dot_ae: f64,
    pub phase_standard: f64,
    /// `delta_phi / phase_standard`; `None` when the standard phase is zero.
    pub factor: Option<f64>,
    pub p_cos: f64,
    pub p_sin: f64,
}

impl PhaseResult {
    fn from_terms(paths: [PathTerms; 2], phase_standard: f64) -> Self {
        let phi_path1 = paths[0].phase();
        let phi_path2 = paths[1].phase();
        let delta_phi = phi_path1 - phi_path2;
        let (p_cos, p_sin) = detection_probability(delta_phi);
        Self {
            paths,
            phi_path1,
            phi_path2,
            delta_phi,
            term_e_dot_as: paths[0].term_e_dot_as - paths[1].term_e_dot_as,
            term_s_dot_ae: paths[0].term_s_dot_ae - paths[1].term_s_dot_ae,
            phase_standard,
            factor: (phase_standard != 0.0).then(|| delta_phi / phase_standard),
            p_cos,
            p_sin,
        }
    }

    /// `|S − E| / max(|E|, ε)` for the path differences of the two terms.
    pub fn reciprocity_residual(&self) -> f64 {
        (self.term_s_dot_ae - self.term_e_dot_as).abs() / self.term_e_dot_as.abs().max(RESIDUAL_GUARD)
    }
}

/// `q ∮ A_S · dl` around `path1 − path2` with the static source potential.
pub fn phase_standard(s: &Scenario) -> Result<f64> {
    s.validate()?;
    let circuit = s.circuit()?;
    let flux = match &s.source {
        CurrentSource::Solenoid(sol) => line_integral(&circuit, &s.settings, |r| solenoid_vector_potential(sol, r))?,
        CurrentSource::Loop(lp) => {
            let dl = DiscreteLoop::new(*lp)?;
            line_integral(&circuit, &s.settings, |r| dl.vector_potential(r))?
        }
    };
    Ok(s.charge * flux)
}

fn electron_terms(s: &Scenario, electrons: &[ElectronCurrent; 2]) -> Result<[f64; 2]> {
    let (t_i, t_f) = s.window();
    match &s.source {
        CurrentSource::Loop(lp) => {
            let els = Elements::from_loop(lp)?;
            let vis = if s.static_source {
                Visibility::Emission { on: f64::NEG_INFINITY, off: f64::INFINITY }
            } else {
                Visibility::Emission { on: t_i, off: t_f }
            };
            Ok([path_coupling(&electrons[0], &els, vis, &s.settings)?, path_coupling(&electrons[1], &els, vis, &s.settings)?])
        }
        CurrentSource::Solenoid(sol) => {
            if !s.static_source {
                return Err(Error::InvalidScenario("an ideal solenoid is only supported as a static source".into()));
            }
            Ok([solenoid_electron_term(sol, &electrons[0], &s.settings)?, solenoid_electron_term(sol, &electrons[1], &s.settings)?])
        }
    }
}

fn source_terms(s: &Scenario, electrons: &[ElectronCurrent; 2]) -> Result<[f64; 2]> {
    let window = s.window();
    match &s.source {
        CurrentSource::Loop(lp) => {
            let els = Elements::from_loop(lp)?;
            let vis = Visibility::Arrival { t_i: window.0, t_f: window.1 };
            Ok([path_coupling(&electrons[0], &els, vis, &s.settings)?, path_coupling(&electrons[1], &els, vis, &s.settings)?])
        }
        CurrentSource::Solenoid(sol) => {
            if !s.static_source {
                return Err(Error::InvalidScenario("an ideal solenoid is only supported as a static source".into()));
            }
            let tube = FluxTube::new(sol, &[&electrons[0], &electrons[1]], window.1 - s.t_start, &s.settings)?;
            Ok([tube.source_term(&electrons[0], window, &s.settings)?, tube.source_term(&electrons[1], window, &s.settings)?])
        }
    }
}

/// Full retarded two-term phase of both paths.
pub fn phase_full(s: &Scenario) -> Result<PhaseResult> {
    s.validate()?;
    let electrons = s.electrons()?;
    let e = electron_terms(s, &electrons)?;
    let src = source_terms(s, &electrons)?;
    let paths = [
        PathTerms { term_e_dot_as: e[0], term_s_dot_ae: src[0] },
        PathTerms { term_e_dot_as: e[1], term_s_dot_ae: src[1] },
    ];
    Ok(PhaseResult::from_terms(paths, phase_standard(s)?))
}

/// `∫ J_S · A_e` over the circuit difference: the phase written from the source side.
/// It equals [`phase_standard`] only when retardation is negligible.
pub fn phase_source_side(s: &Scenario) -> Result<f64> {
    s.validate()?;
    if s.is_retarded_regime() {
        log::warn!(
            "source-side phase requested with the source {:.6e} away from the paths but a window of only {:.6e}; \
             the electron's potential cannot reach the source and this is not the interference phase",
            s.source_clearance(),
            s.window_length()
        );
    }
    let electrons = s.electrons()?;
    let src = source_terms(s, &electrons)?;
    Ok(src[0] - src[1])
}

pub fn reciprocity_residual(s: &Scenario) -> Result<f64> {
    Ok(phase_full(s)?.reciprocity_residual())
}

/// `(cos² Δφ, sin² Δφ)`, summing to exactly one.
pub fn detection_probability(delta_phi: f64) -> (f64, f64) {
    let c = delta_phi.cos();
    let s = delta_phi.sin();
    // compute the smaller one directly so the complement is exact to rounding
    if c.abs() <= s.abs() {
        let p_cos = c * c;
        (p_cos, 1.0 - p_cos)
    } else {
        let p_sin = s * s;
        (1.0 - p_sin, p_sin)
    }
}

/// Distance in meters light travels during `response_time` seconds.
pub fn squid_feasibility(response_time: f64) -> Result<f64> {
    if !(response_time > 0.0 && response_time.is_finite()) {
        return Err(Error::InvalidArgument(format!("response time must be positive and finite, got {response_time}")));
    }
    Ok(SPEED_OF_LIGHT * response_time)
}

/// `q Φ` times the winding of the circuit about an ideal solenoid's axis.
pub fn solenoid_winding_phase(s: &Scenario) -> Result<f64> {
    let CurrentSource::Solenoid(sol) = &s.source else {
        return Err(Error::InvalidScenario("winding phase needs an ideal solenoid".into()));
    };
    let n = crate::geometry::winding_number(&s.path1, &s.path2, sol.axis_point, sol.axis_dir)?;
    Ok(s.charge * sol.flux * n as f64)
}
