//! Static and retarded vector potentials and magnetic fields of the current
//! sources, in Heaviside–Lorentz natural units: `A(r) = ∫ J / (4π|r − r′|) d³r′`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{
    discretize_loop, CurrentLoop, ElectronCurrent, IdealSolenoid, LoopElement, SpacetimePoint, Vec3,
};
use crate::quadrature::bisect;

pub mod closed_form;
mod flux;

pub use flux::{enclosed_flux, line_integral, FluxReport};

/// Closest approach to the solenoid axis at which the exterior form is still evaluated.
pub const AXIS_SINGULARITY: f64 = 1e-12;

/// Closest approach to a loop wire, relative to its radius.
pub const WIRE_CLEARANCE: f64 = 1e-9;

const INV_4PI: f64 = 1.0 / (4.0 * PI);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub a: Vec3,
    pub b: Vec3,
    pub at: SpacetimePoint,
}

/// Exterior potential of an ideal solenoid, `Φ / (2πρ)` azimuthally about the axis.
pub fn solenoid_vector_potential(s: &IdealSolenoid, r: Vec3) -> Result<Vec3> {
    let radial = s.radial(r);
    let rho2 = radial.norm_squared();
    let rho = rho2.sqrt();
    if !(rho >= AXIS_SINGULARITY) {
        return Err(Error::Singular { what: "vector potential on the solenoid axis", distance: rho });
    }
    Ok(s.axis_dir.cross(radial) * (s.flux / (2.0 * PI * rho2)))
}

/// Ideal-solenoid sample: `B` vanishes identically outside the flux line.
pub fn solenoid_field_sample(s: &IdealSolenoid, at: SpacetimePoint) -> Result<FieldSample> {
    Ok(FieldSample { a: solenoid_vector_potential(s, at.r)?, b: Vec3::ZERO, at })
}

/// When the loop current flows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceTiming {
    /// Switched on at `t = −∞` and never off.
    Static,
    /// Current flows only for `on ≤ t′ ≤ off`.
    Switched { on: f64, off: f64 },
}

/// A loop discretized once for repeated field evaluation.
#[derive(Debug, Clone)]
pub struct DiscreteLoop {
    source: CurrentLoop,
    elements: Vec<LoopElement>,
}

impl DiscreteLoop {
    pub fn new(source: CurrentLoop) -> Result<Self> {
        Ok(Self { elements: discretize_loop(&source)?, source })
    }

    pub fn source(&self) -> &CurrentLoop {
        &self.source
    }

    pub fn elements(&self) -> &[LoopElement] {
        &self.elements
    }

    fn check_off_wire(&self, r: Vec3) -> Result<()> {
        let d = self.source.distance_to_wire(r);
        if !(d > WIRE_CLEARANCE * self.source.radius) {
            return Err(Error::Singular { what: "field point on the loop wire", distance: d });
        }
        Ok(())
    }

    /// Static potential (fast path).
    pub fn vector_potential(&self, r: Vec3) -> Result<Vec3> {
        self.check_off_wire(r)?;
        Ok(self.vector_potential_unchecked(r))
    }

    /// Static potential without the on-wire check.
    ///
    /// Far from the loop the element sum cancels to `O(a/R)`; there the kernel is
    /// taken relative to the loop center, which the closed element sum allows.
    pub fn vector_potential_unchecked(&self, r: Vec3) -> Vec3 {
        let w = r - self.source.center;
        let r0 = w.norm();
        let sum: Vec3 = if r0 > 2.0 * self.source.radius {
            self.elements
                .iter()
                .map(|e| {
                    let d = e.midpoint - self.source.center;
                    let rk = (r - e.midpoint).norm();
                    // 1/R_k − 1/R_0 = (R_0² − R_k²) / (R_k R_0 (R_0 + R_k))
                    let num = d.dot(w * 2.0 - d);
                    e.current_moment() * (num / (rk * r0 * (r0 + rk)))
                })
                .sum()
        } else {
            self.elements.iter().map(|e| e.current_moment() / (r - e.midpoint).norm()).sum()
        };
        sum * INV_4PI
    }

    /// Retarded potential at `(r, t)`; each element contributes when its emission
    /// time `t − |r − r_k|` falls inside the current's on-interval.
    pub fn vector_potential_retarded(&self, r: Vec3, t: f64, timing: SourceTiming) -> Result<Vec3> {
        self.check_off_wire(r)?;
        let (on, off) = match timing {
            SourceTiming::Static => (f64::NEG_INFINITY, f64::INFINITY),
            SourceTiming::Switched { on, off } => (on, off),
        };
        let sum: Vec3 = self
            .elements
            .iter()
            .filter_map(|e| {
                let rk = (r - e.midpoint).norm();
                let emitted = t - rk;
                (emitted >= on && emitted <= off).then(|| e.current_moment() / rk)
            })
            .sum();
        Ok(sum * INV_4PI)
    }

    /// Biot–Savart sum; the exact curl of [`Self::vector_potential`]'s element sum.
    pub fn magnetic_field(&self, r: Vec3) -> Result<Vec3> {
        self.check_off_wire(r)?;
        Ok(self.magnetic_field_unchecked(r))
    }

    pub fn magnetic_field_unchecked(&self, r: Vec3) -> Vec3 {
        let sum: Vec3 = self
            .elements
            .iter()
            .map(|e| {
                let sep = r - e.midpoint;
                let d2 = sep.norm_squared();
                e.current_moment().cross(sep) / (d2 * d2.sqrt())
            })
            .sum();
        sum * INV_4PI
    }

    pub fn field_sample(&self, at: SpacetimePoint) -> Result<FieldSample> {
        Ok(FieldSample { a: self.vector_potential(at.r)?, b: self.magnetic_field(at.r)?, at })
    }
}

pub fn loop_vector_potential_static(lp: &CurrentLoop, r: Vec3) -> Result<Vec3> {
    DiscreteLoop::new(*lp)?.vector_potential(r)
}

pub fn loop_magnetic_field(lp: &CurrentLoop, r: Vec3) -> Result<Vec3> {
    DiscreteLoop::new(*lp)?.magnetic_field(r)
}

/// Liénard–Wiechert vector potential `q v / (4π (R − R·v))` of the electron at the
/// retarded time, or exactly zero when that time lies outside the current's support.
pub fn retarded_potential_of_electron(e: &ElectronCurrent, at: SpacetimePoint) -> Result<Vec3> {
    retarded_potential_with_tolerance(e, at, 1e-12)
}

pub fn retarded_potential_with_tolerance(e: &ElectronCurrent, at: SpacetimePoint, root_tol: f64) -> Result<Vec3> {
    if e.speed >= 1.0 {
        return Err(Error::InvalidScenario(format!("electron speed {} is not below c", e.speed)));
    }
    // f is strictly decreasing in the emission time when v < c.
    let f = |tp: f64| at.t - tp - at.r.distance(e.state(tp).position);
    let (t0, t1) = (e.t_start, e.t_end());
    if f(t0) < 0.0 || f(t1) > 0.0 {
        return Ok(Vec3::ZERO);
    }
    let t_ret = bisect(t0, t1, root_tol, f)?;
    let state = e.state(t_ret);
    let sep = at.r - state.position;
    let dist = sep.norm();
    if dist == 0.0 {
        return Err(Error::Singular { what: "field point at the retarded charge position", distance: 0.0 });
    }
    let kappa_r = dist - sep.dot(state.velocity);
    Ok(state.velocity * (e.charge * INV_4PI / kappa_r))
}
