use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{orthonormal_basis, CurrentSource, Polyline, Vec3};
use crate::quadrature::{adaptive, triangle_integral, QuadratureSettings};

use super::{solenoid_vector_potential, DiscreteLoop};

/// Flux through a closed circuit by two routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxReport {
    /// `∮ A · dl`.
    pub line_integral: f64,
    /// `∬ B · dA` over a fan triangulation; `None` when the circuit is not planar.
    pub surface_integral: Option<f64>,
}

impl FluxReport {
    /// `|line − surface| / |surface|`, when both routes exist.
    pub fn stokes_residual(&self) -> Option<f64> {
        self.surface_integral
            .map(|s| (self.line_integral - s).abs() / s.abs().max(crate::phase::RESIDUAL_GUARD))
    }
}

/// `∫ field · dl` along every segment, adaptive Gauss–Legendre in arc length.
pub fn line_integral(
    path: &Polyline,
    settings: &QuadratureSettings,
    field: impl Fn(Vec3) -> Result<Vec3>,
) -> Result<f64> {
    let mut total = 0.0;
    for seg in path.segments() {
        let dir = seg.direction();
        let mut failure = None;
        let value = adaptive(0.0, seg.length(), settings.line_panels, settings.adaptive(), &mut |s| {
            match field(seg.point_at(s)) {
                Ok(a) => a.dot(dir),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        total += value;
    }
    Ok(total)
}

pub fn enclosed_flux(source: &CurrentSource, circuit: &Polyline, settings: &QuadratureSettings) -> Result<FluxReport> {
    if !circuit.is_closed() {
        return Err(Error::InvalidGeometry("enclosed flux needs a closed circuit".into()));
    }
    let planar = match circuit.planarity_defect() {
        Some(d) => d <= 1e-9 * circuit.length().max(1.0),
        None => false,
    };
    match source {
        CurrentSource::Solenoid(s) => {
            let line_integral = line_integral(circuit, settings, |r| solenoid_vector_potential(s, r))?;
            let surface_integral = if planar { Some(solenoid_piercing_flux(s, circuit)?) } else { None };
            Ok(FluxReport { line_integral, surface_integral })
        }
        CurrentSource::Loop(lp) => {
            let dl = DiscreteLoop::new(*lp)?;
            let line_integral = line_integral(circuit, settings, |r| dl.vector_potential(r))?;
            let surface_integral =
                if planar { Some(fan_surface_flux(circuit, settings.surface_subdivisions, &dl)?) } else { None };
            Ok(FluxReport { line_integral, surface_integral })
        }
    }
}

/// `∬ B · dA` over triangles `(centroid, v_i, v_{i+1})`.
fn fan_surface_flux(circuit: &Polyline, subdivisions: usize, dl: &DiscreteLoop) -> Result<f64> {
    let apex = circuit.centroid();
    let segments: Vec<_> = circuit.segments().collect();
    segments
        .par_iter()
        .map(|seg| {
            let area = (seg.start - apex).cross(seg.end - apex);
            let Some(normal) = area.normalized() else {
                return Ok(0.0);
            };
            dl.magnetic_field(apex)?;
            Ok(triangle_integral(apex, seg.start, seg.end, subdivisions, &|p| {
                dl.magnetic_field_unchecked(p).dot(normal)
            }))
        })
        .collect::<Result<Vec<f64>>>()
        .map(|v| v.into_iter().sum())
}

/// Flux of the delta-function field line through the circuit's plane:
/// `Φ × (signed crossings of the axis through the enclosed region)`.
fn solenoid_piercing_flux(s: &crate::geometry::IdealSolenoid, circuit: &Polyline) -> Result<f64> {
    let n = circuit
        .area_vector()
        .normalized()
        .ok_or_else(|| Error::InvalidGeometry("circuit encloses no area".into()))?;
    let c = circuit.centroid();
    let cos = s.axis_dir.dot(n);
    if cos.abs() < 1e-12 {
        return Ok(0.0);
    }
    let pierce = s.axis_point + s.axis_dir * ((c - s.axis_point).dot(n) / cos);
    let (e1, e2) = orthonormal_basis(n);
    let to2d = |v: Vec3| ((v - pierce).dot(e1), (v - pierce).dot(e2));
    let mut winding = 0i64;
    for seg in circuit.segments() {
        let (ax, ay) = to2d(seg.start);
        let (bx, by) = to2d(seg.end);
        let clearance = crate::geometry::point_segment_distance(pierce, seg.start, seg.end);
        if clearance < crate::geometry::AXIS_CLEARANCE {
            return Err(Error::Singular { what: "circuit passes through the solenoid axis", distance: clearance });
        }
        // Crossing-number winding about the origin along the +x ray.
        let is_left = ax * by - bx * ay;
        if ay <= 0.0 {
            if by > 0.0 && is_left > 0.0 {
                winding += 1;
            }
        } else if by <= 0.0 && is_left < 0.0 {
            winding -= 1;
        }
    }
    Ok(s.flux * winding as f64 * cos.signum())
}
