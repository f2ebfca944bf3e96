//! Retarded and advanced Green's-function kernels of the wave operator and a
//! numerical check of the identity that folds the time-symmetric kernel over
//! the full time square into the retarded kernel over the causal triangle.
//!
//! Only the spatial, Feynman-gauge components are represented. They are
//! diagonal in the spatial index, so every index contraction reduces to a dot
//! product of 3-currents. The kernel is
//!
//! ```text
//! G^R(r, t; r′, t′) = δ(t − t′ − |r − r′|) / (4π |r − r′|)
//! G^A(r, t; r′, t′) = δ(t − t′ + |r − r′|) / (4π |r − r′|)
//! ```
//!
//! with the sign fixed so that the static limit reproduces the magnetostatic
//! vector potential. The delta functions are always resolved analytically.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::phase::RESIDUAL_GUARD;
use crate::quadrature::{QuadratureSettings, Rule};

/// Smallest source/field separation accepted by [`green_kernel`].
pub const MIN_SEPARATION: f64 = 1e-12;

/// Kernel between two fixed points, evaluated for one observation time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEvaluation {
    /// `1 / (4π |r − r′|)`.
    pub weight: f64,
    /// Source time seen at the observation time through the retarded kernel.
    pub t_retarded: f64,
    /// Source time coupled through the advanced kernel.
    pub t_advanced: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenKernel {
    pub distance: f64,
    pub weight: f64,
}

impl GreenKernel {
    pub fn retarded_time(&self, t: f64) -> f64 {
        t - self.distance
    }

    pub fn advanced_time(&self, t: f64) -> f64 {
        t + self.distance
    }

    pub fn at(&self, t: f64) -> KernelEvaluation {
        KernelEvaluation { weight: self.weight, t_retarded: self.retarded_time(t), t_advanced: self.advanced_time(t) }
    }
}

pub fn green_kernel(r: Vec3, r_prime: Vec3) -> Result<GreenKernel> {
    let distance = r.distance(r_prime);
    if !(distance > MIN_SEPARATION) {
        return Err(Error::Singular { what: "Green's kernel at coincident points", distance });
    }
    Ok(GreenKernel { distance, weight: 1.0 / (4.0 * PI * distance) })
}

/// Two point currents at fixed positions, on over the window `[t_i, t_f]`.
pub struct CurrentPair<F, G> {
    pub r1: Vec3,
    pub r2: Vec3,
    pub j1: F,
    pub j2: G,
    pub t_i: f64,
    pub t_f: f64,
}

/// Which part of the kernel enters the double time integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelPart {
    Retarded,
    Advanced,
    /// `½ (G^R + G^A)`.
    Symmetric,
}

/// Integration region in the `(t, t′)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeRegion {
    Square,
    /// `t′ ≤ t`.
    Lower,
    /// `t′ ≥ t`.
    Upper,
}

/// `∫∫ dt dt′ Σ J(r, t) · K(r, t; r′, t′) J(r′, t′)` over both orderings of the pair.
///
/// The inner `t′` integral is done exactly through the delta function; the outer
/// `t` integral uses `settings.splitting_panels` equal Gauss–Legendre panels,
/// split where the light-cone contributions switch on or off.
pub fn double_time_integral<F, G>(
    pair: &CurrentPair<F, G>,
    part: KernelPart,
    region: TimeRegion,
    settings: &QuadratureSettings,
) -> Result<f64>
where
    F: Fn(f64) -> Vec3,
    G: Fn(f64) -> Vec3,
{
    if !(pair.t_f > pair.t_i) {
        return Err(Error::InvalidArgument(format!("empty window [{}, {}]", pair.t_i, pair.t_f)));
    }
    let kernel = green_kernel(pair.r1, pair.r2)?;
    let (t_i, t_f) = (pair.t_i, pair.t_f);
    let cross = |t: f64, tp: f64| (pair.j1)(t).dot((pair.j2)(tp)) + (pair.j2)(t).dot((pair.j1)(tp));
    let admitted = |t: f64, tp: f64| {
        tp >= t_i
            && tp <= t_f
            && match region {
                TimeRegion::Square => true,
                TimeRegion::Lower => tp <= t,
                TimeRegion::Upper => tp >= t,
            }
    };
    let inner = |t: f64| {
        let ev = kernel.at(t);
        let ret = if admitted(t, ev.t_retarded) { cross(t, ev.t_retarded) } else { 0.0 };
        let adv = if admitted(t, ev.t_advanced) { cross(t, ev.t_advanced) } else { 0.0 };
        ev.weight
            * match part {
                KernelPart::Retarded => ret,
                KernelPart::Advanced => adv,
                KernelPart::Symmetric => 0.5 * (ret + adv),
            }
    };

    let rule = Rule::gauss_legendre(settings.splitting_order);
    let panels = settings.splitting_panels.max(1);
    let h = (t_f - t_i) / panels as f64;
    let kinks = [t_i + kernel.distance, t_f - kernel.distance];
    let mut total = 0.0;
    for p in 0..panels {
        let lo = t_i + h * p as f64;
        let hi = if p + 1 == panels { t_f } else { lo + h };
        let mut cuts = vec![lo];
        cuts.extend(kinks.iter().copied().filter(|&k| k > lo && k < hi));
        cuts.push(hi);
        cuts.sort_by(f64::total_cmp);
        for w in cuts.windows(2) {
            total += rule.integrate(w[0], w[1], inner);
        }
    }
    Ok(total)
}

/// Both sides of the folding identity and their relative mismatch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplittingCheck {
    /// `∫∫_square ½ (G^R + G^A)`.
    pub square_symmetric: f64,
    /// `∫∫_{t′ ≤ t} G^R`.
    pub triangle_retarded: f64,
    pub residual: f64,
}

pub fn splitting_identity_residual<F, G>(pair: &CurrentPair<F, G>, settings: &QuadratureSettings) -> Result<SplittingCheck>
where
    F: Fn(f64) -> Vec3,
    G: Fn(f64) -> Vec3,
{
    let square_symmetric = double_time_integral(pair, KernelPart::Symmetric, TimeRegion::Square, settings)?;
    let triangle_retarded = double_time_integral(pair, KernelPart::Retarded, TimeRegion::Lower, settings)?;
    let residual = (square_symmetric - triangle_retarded).abs() / square_symmetric.abs().max(RESIDUAL_GUARD);
    Ok(SplittingCheck { square_symmetric, triangle_retarded, residual })
}

/// Sinusoidal pair used by the self-test and acceptance suite.
pub fn sinusoidal_test_pair() -> CurrentPair<impl Fn(f64) -> Vec3, impl Fn(f64) -> Vec3> {
    CurrentPair {
        r1: Vec3::new(0.0, 0.0, 0.0),
        r2: Vec3::new(0.9, -0.6, 0.7),
        j1: |t: f64| Vec3::new((1.3 * t + 0.4).cos(), 0.5 * (0.7 * t).sin(), 0.2),
        j2: |t: f64| Vec3::new((0.9 * t + 1.1).sin(), 0.3, (1.7 * t - 0.5).cos()),
        t_i: 0.0,
        t_f: 10.0,
    }
}
