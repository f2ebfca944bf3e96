//! The two interaction integrals of one electron path with the source.
//!
//! For a set of current elements `m_k = I t̂_k dl_k` and a straight trajectory
//! piece with velocity `v`, both terms reduce to
//!
//! ```text
//! q ∫ dt Σ_{k active at t} (m_k · v) / (4π |r_e(t) − r_k|)
//! ```
//!
//! and differ only in which element is active when. For `J_e · A_S`, element `k`
//! is seen at time `t` when its emission time `t − R_k` lies in the source's
//! on-interval. For `J_S · A_e` the time integral over the window is done first:
//! the electron's potential emitted at `t′` reaches element `k` at `t′ + R_k(t′)`,
//! and counts only if that arrival lies in `[t_i, t_f]`. Both switching times are
//! monotone in `t` for `v < 1`, so each element is active on one interval.

use std::f64::consts::PI;

use crate::em_fields::{solenoid_vector_potential, WIRE_CLEARANCE};
use crate::error::{Error, Result};
use crate::geometry::{discretize_loop, point_segment_distance, CurrentLoop, ElectronCurrent, IdealSolenoid, TimedSegment, Vec3};
use crate::quadrature::{adaptive, adaptive_partition, bisect, Adaptive, QuadratureSettings};

const INV_4PI: f64 = 1.0 / (4.0 * PI);

/// Current elements about a reference center.
#[derive(Debug, Clone)]
pub(crate) struct Elements {
    pub center: Vec3,
    offsets: Vec<Vec3>,
    moments: Vec<Vec3>,
    arm: f64,
}

impl Elements {
    pub fn from_loop(lp: &CurrentLoop) -> Result<Self> {
        let els = discretize_loop(lp)?;
        Ok(Self {
            center: lp.center,
            offsets: els.iter().map(|e| e.midpoint - lp.center).collect(),
            moments: els.iter().map(|e| e.current_moment()).collect(),
            arm: lp.radius,
        })
    }

    pub fn shifted(&self, center: Vec3) -> Self {
        Self { center, ..self.clone() }
    }

    fn position(&self, k: usize) -> Vec3 {
        self.center + self.offsets[k]
    }

    fn len(&self) -> usize {
        self.offsets.len()
    }
}

/// When each element is seen along a trajectory piece.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Visibility {
    /// Element `k` seen at `t` iff `on ≤ t − R_k(t) ≤ off`.
    Emission { on: f64, off: f64 },
    /// Element `k` collects the potential emitted at `t` iff `t_i ≤ t + R_k(t) ≤ t_f`.
    Arrival { t_i: f64, t_f: f64 },
}

/// Sub-interval of `[t0, t1]` where the nondecreasing `g` lies in `[lo, hi]`.
fn monotone_window(t0: f64, t1: f64, lo: f64, hi: f64, tol: f64, g: impl Fn(f64) -> f64) -> Result<Option<(f64, f64)>> {
    let (g0, g1) = (g(t0), g(t1));
    if g1 < lo || g0 > hi {
        return Ok(None);
    }
    let a = if g0 >= lo { t0 } else { bisect(t0, t1, tol, |t| g(t) - lo)? };
    let b = if g1 <= hi { t1 } else { bisect(t0, t1, tol, |t| g(t) - hi)? };
    Ok((b > a).then_some((a, b)))
}

/// `∫ Σ_{k active} (m_k · v) / (4π R_k) dt` over one trajectory piece.
pub(crate) fn element_coupling(
    seg: &TimedSegment,
    els: &Elements,
    visibility: Visibility,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let n = els.len();
    let end = seg.position(seg.t1);
    for k in 0..n {
        let d = point_segment_distance(els.position(k), seg.start, end);
        if !(d > WIRE_CLEARANCE * els.arm) {
            return Err(Error::Singular { what: "electron path through a source element", distance: d });
        }
    }
    let mut active = Vec::with_capacity(n);
    for k in 0..n {
        let rk = |t: f64| seg.position(t).distance(els.position(k));
        let w = match visibility {
            Visibility::Emission { on, off } => monotone_window(seg.t0, seg.t1, on, off, settings.root_tol, |t| t - rk(t))?,
            Visibility::Arrival { t_i, t_f } => monotone_window(seg.t0, seg.t1, t_i, t_f, settings.root_tol, |t| t + rk(t))?,
        };
        active.push(w);
    }
    if active.iter().all(Option::is_none) {
        // causal zero
        return Ok(0.0);
    }

    let panels = settings.time_panels.max(1);
    let h = (seg.t1 - seg.t0) / panels as f64;
    let mut edges: Vec<f64> = (0..=panels).map(|i| if i == panels { seg.t1 } else { seg.t0 + h * i as f64 }).collect();
    edges.extend(active.iter().flatten().flat_map(|&(a, b)| [a, b]));
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let mv: Vec<f64> = els.moments.iter().map(|m| m.dot(seg.velocity)).collect();
    let far = 2.0 * els.arm;
    let mut integrand = |t: f64| {
        let w = seg.position(t) - els.center;
        let r0 = w.norm();
        let mut sum = 0.0;
        let mut net = 0.0;
        let mut count = 0;
        for k in 0..n {
            let Some((a, b)) = active[k] else { continue };
            if t < a || t > b {
                continue;
            }
            count += 1;
            let d = els.offsets[k];
            let rk = (w - d).norm();
            if r0 > far {
                // 1/R_k − 1/R_0 without cancellation
                sum += mv[k] * d.dot(w * 2.0 - d) / (rk * r0 * (r0 + rk));
                net += mv[k];
            } else {
                sum += mv[k] / rk;
            }
        }
        if r0 > far && count < n {
            sum += net / r0;
        }
        sum
    };
    Ok(adaptive_partition(&edges, settings.adaptive(), &mut integrand)? * INV_4PI)
}

/// `Σ_segments element_coupling` for a whole path, times the electron charge.
pub(crate) fn path_coupling(e: &ElectronCurrent, els: &Elements, visibility: Visibility, settings: &QuadratureSettings) -> Result<f64> {
    let mut total = 0.0;
    for seg in e.timed_segments() {
        total += element_coupling(&seg, els, visibility, settings)?;
    }
    Ok(e.charge * total)
}

/// `q ∫ v · A(r_e(t)) dt` for the exterior solenoid potential.
pub(crate) fn solenoid_electron_term(s: &IdealSolenoid, e: &ElectronCurrent, settings: &QuadratureSettings) -> Result<f64> {
    let mut total = 0.0;
    for seg in e.timed_segments() {
        let mut failure = None;
        let v = adaptive(seg.t0, seg.t1, settings.time_panels, settings.adaptive(), &mut |t| {
            match solenoid_vector_potential(s, seg.position(t)) {
                Ok(a) => a.dot(seg.velocity),
                Err(err) => {
                    failure.get_or_insert(err);
                    0.0
                }
            }
        })?;
        if let Some(err) = failure {
            return Err(err);
        }
        total += v;
    }
    Ok(e.charge * total)
}

/// The ideal solenoid resolved as a thin tube of surface current.
#[derive(Debug, Clone)]
pub(crate) struct FluxTube {
    ring: Elements,
    axis_point: Vec3,
    axis_dir: Vec3,
    /// Axial coordinate of the interferometer center.
    z_center: f64,
    z_lo: f64,
    z_hi: f64,
    /// Scale of the interferometer seen from the axis.
    extent: f64,
}

impl FluxTube {
    /// Tube of radius a quarter of the closest approach of `paths` to the axis, carrying
    /// surface current `Φ / (π ε²)` so that the enclosed flux is `Φ`. Rings farther along the
    /// axis than any signal can travel within `horizon` are dropped; they contribute exactly zero.
    pub fn new(s: &IdealSolenoid, paths: &[&ElectronCurrent], horizon: f64, settings: &QuadratureSettings) -> Result<Self> {
        let mut clearance = f64::INFINITY;
        let mut extent: f64 = 0.0;
        let (mut z_min, mut z_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut z_sum = 0.0;
        let mut count = 0.0;
        for e in paths {
            for v in e.path.vertices() {
                let w = *v - s.axis_point;
                let z = w.dot(s.axis_dir);
                z_min = z_min.min(z);
                z_max = z_max.max(z);
                z_sum += z;
                count += 1.0;
                extent = extent.max((w - s.axis_dir * z).norm());
            }
            for seg in e.path.segments() {
                let p = |v: Vec3| {
                    let w = v - s.axis_point;
                    w - s.axis_dir * w.dot(s.axis_dir)
                };
                clearance = clearance.min(point_segment_distance(Vec3::ZERO, p(seg.start), p(seg.end)));
            }
        }
        if !(clearance > crate::geometry::AXIS_CLEARANCE) {
            return Err(Error::Singular { what: "electron path on the solenoid axis", distance: clearance });
        }
        let eps = 0.25 * clearance;
        let ring = CurrentLoop::new(s.axis_point, s.axis_dir, eps, s.flux / (PI * eps * eps), settings.tube_segments)?;
        Ok(Self {
            ring: Elements::from_loop(&ring)?,
            axis_point: s.axis_point,
            axis_dir: s.axis_dir,
            z_center: z_sum / count,
            z_lo: z_min - horizon - eps,
            z_hi: z_max + horizon + eps,
            extent: extent.max(z_max - z_min).max(eps),
        })
    }

    /// `∫ dz Σ_paths q ∫ J_ring(z) · A_e`: the source-side term of the tube.
    pub fn source_term(&self, e: &ElectronCurrent, window: (f64, f64), settings: &QuadratureSettings) -> Result<f64> {
        let vis = Visibility::Arrival { t_i: window.0, t_f: window.1 };
        // geometric panels outward from the interferometer
        let mut edges = vec![self.z_lo, self.z_hi];
        let mut h = self.extent;
        while self.z_center - h > self.z_lo || self.z_center + h < self.z_hi {
            for z in [self.z_center - h, self.z_center + h] {
                if z > self.z_lo && z < self.z_hi {
                    edges.push(z);
                }
            }
            h *= 2.0;
        }
        if self.z_center > self.z_lo && self.z_center < self.z_hi {
            edges.push(self.z_center);
        }
        edges.sort_by(f64::total_cmp);
        let tol = Adaptive { rel_tol: settings.rel_tol.max(1e-10), ..settings.adaptive() };
        let mut failure = None;
        let value = adaptive_partition(&edges, tol, &mut |z| {
            let ring = self.ring.shifted(self.axis_point + self.axis_dir * z);
            match path_coupling(e, &ring, vis, settings) {
                Ok(v) => v,
                Err(err) => {
                    failure.get_or_insert(err);
                    0.0
                }
            }
        })?;
        match failure {
            Some(err) => Err(err),
            None => Ok(value),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::em_fields::DiscreteLoop;
    use crate::geometry::Polyline;
    use approx::assert_relative_eq;

    fn electron(v: f64) -> ElectronCurrent {
        let path = Polyline::open(vec![Vec3::new(-1.0, 0.3, 0.2), Vec3::new(0.4, 0.3, 0.2), Vec3::new(0.4, 1.1, 0.0)]).unwrap();
        ElectronCurrent::new(path, v, 1.0, 0.0).unwrap()
    }

    fn unit_loop() -> CurrentLoop {
        CurrentLoop::new(Vec3::new(0.0, 0.0, 0.5), Vec3::Z, 0.5, 2.0, 64).unwrap()
    }

    #[test]
    fn static_coupling_is_the_line_integral() {
        let e = electron(0.3);
        let lp = unit_loop();
        let s = QuadratureSettings::default();
        let els = Elements::from_loop(&lp).unwrap();
        let always = Visibility::Emission { on: f64::NEG_INFINITY, off: f64::INFINITY };
        let coupled = path_coupling(&e, &els, always, &s).unwrap();
        let dl = DiscreteLoop::new(lp).unwrap();
        let line = crate::em_fields::line_integral(&e.path, &s, |r| dl.vector_potential(r)).unwrap();
        assert_relative_eq!(coupled, line, max_relative = 1e-12);
    }

    #[test]
    fn full_window_arrival_matches_emission() {
        let e = electron(0.3);
        let s = QuadratureSettings::default();
        let els = Elements::from_loop(&unit_loop()).unwrap();
        let always = Visibility::Emission { on: f64::NEG_INFINITY, off: f64::INFINITY };
        let late = Visibility::Arrival { t_i: 0.0, t_f: e.t_end() + 10.0 };
        let a = path_coupling(&e, &els, always, &s).unwrap();
        let b = path_coupling(&e, &els, late, &s).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
        // truncated at the transit end: strictly partial
        let tight = path_coupling(&e, &els, Visibility::Arrival { t_i: 0.0, t_f: e.t_end() }, &s).unwrap();
        assert!(tight != b && tight.abs() < b.abs() * 1.5);
    }

    #[test]
    fn distant_elements_give_exact_zero() {
        let e = electron(0.3);
        let far = CurrentLoop { center: Vec3::new(0.0, 0.0, 100.0), ..unit_loop() };
        let els = Elements::from_loop(&far).unwrap();
        let v = path_coupling(&e, &els, Visibility::Arrival { t_i: 0.0, t_f: e.t_end() }, &QuadratureSettings::default()).unwrap();
        assert_eq!(v, 0.0);
        let on_late = Visibility::Emission { on: 0.0, off: f64::INFINITY };
        assert_eq!(path_coupling(&e, &els, on_late, &QuadratureSettings::default()).unwrap(), 0.0);
    }

    #[test]
    fn windows_are_monotone_cuts() {
        let w = monotone_window(0.0, 10.0, 2.0, 5.0, 1e-14, |t| t).unwrap().unwrap();
        assert_relative_eq!(w.0, 2.0, epsilon = 1e-12);
        assert_relative_eq!(w.1, 5.0, epsilon = 1e-12);
        assert!(monotone_window(0.0, 1.0, 2.0, 5.0, 1e-14, |t| t).unwrap().is_none());
        assert_eq!(monotone_window(0.0, 1.0, f64::NEG_INFINITY, f64::INFINITY, 1e-14, |t| t).unwrap(), Some((0.0, 1.0)));
    }

    #[test]
    fn element_on_path_rejected() {
        let e = electron(0.3);
        let lp = CurrentLoop::new(Vec3::new(0.4, 0.3, 0.2) - Vec3::X * 0.5, Vec3::Z, 0.5, 1.0, 64).unwrap();
        let mut els = Elements::from_loop(&lp).unwrap();
        // put one element exactly on the path
        els.offsets[0] = Vec3::new(0.4, 0.7, 0.1) - els.center;
        let always = Visibility::Emission { on: f64::NEG_INFINITY, off: f64::INFINITY };
        assert!(path_coupling(&e, &els, always, &QuadratureSettings::default()).is_err());
    }
}
