//! Gauss–Legendre rules, adaptive panel refinement, subdivided triangle
//! cubature and bracketed root finding.

use std::num::NonZeroUsize;
use std::sync::LazyLock;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Node/weight pairs on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct Rule {
    pairs: Vec<(f64, f64)>,
}

impl Rule {
    pub fn gauss_legendre(order: usize) -> Self {
        let order = NonZeroUsize::new(order).expect("quadrature order must be positive");
        let gl = GaussLegendre::new(order);
        Self { pairs: gl.as_node_weight_pairs().to_vec() }
    }

    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    #[inline]
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        half * self.pairs.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>()
    }

    #[inline]
    pub fn integrate_vec(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> Vec3) -> Vec3 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.pairs.iter().map(|&(x, w)| f(mid + half * x) * w).sum::<Vec3>() * half
    }

    /// Composite rule over `panels` equal panels.
    pub fn composite(&self, a: f64, b: f64, panels: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|i| {
                let lo = a + h * i as f64;
                let hi = if i + 1 == panels { b } else { lo + h };
                self.integrate(lo, hi, &mut f)
            })
            .sum()
    }
}

pub static GL8: LazyLock<Rule> = LazyLock::new(|| Rule::gauss_legendre(8));
pub static GL16: LazyLock<Rule> = LazyLock::new(|| Rule::gauss_legendre(16));

/// Discretization knobs shared by every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    /// Initial 16-point panels per polyline segment for line integrals.
    pub line_panels: usize,
    /// Sub-triangles per side of each fan triangle in surface flux integrals.
    pub surface_subdivisions: usize,
    /// Initial 16-point panels per trajectory segment for time integrals.
    pub time_panels: usize,
    /// Relative tolerance of adaptive refinement.
    pub rel_tol: f64,
    /// Equal-width panels across the window in the splitting-identity check.
    pub splitting_panels: usize,
    /// Gauss–Legendre order on each splitting-identity panel.
    pub splitting_order: usize,
    /// Ring elements per slice when an ideal solenoid is resolved as a thin flux tube.
    pub tube_segments: usize,
    /// Absolute tolerance of retarded-time root solves.
    pub root_tol: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            line_panels: 4,
            surface_subdivisions: 64,
            time_panels: 4,
            rel_tol: 1e-12,
            splitting_panels: 64,
            splitting_order: 2,
            tube_segments: 16,
            root_tol: 1e-12,
        }
    }
}

impl QuadratureSettings {
    /// Multiply every resolution count by `factor` (tolerances are unchanged).
    pub fn scaled(&self, factor: f64) -> Self {
        let scale = |n: usize| ((n as f64 * factor).round() as usize).max(1);
        Self {
            line_panels: scale(self.line_panels),
            surface_subdivisions: scale(self.surface_subdivisions),
            time_panels: scale(self.time_panels),
            splitting_panels: scale(self.splitting_panels),
            tube_segments: scale(self.tube_segments).max(crate::geometry::MIN_LOOP_SEGMENTS),
            ..*self
        }
    }

    pub fn adaptive(&self) -> Adaptive {
        Adaptive { rel_tol: self.rel_tol, ..Adaptive::default() }
    }
}

/// Tolerances for [`adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adaptive {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for Adaptive {
    fn default() -> Self {
        Self { rel_tol: 1e-12, abs_tol: 1e-300, max_depth: 40 }
    }
}

/// Adaptive bisection with a 16-point Gauss–Legendre rule on each panel, starting
/// from `panels` equal panels. Fails when a panel cannot meet the tolerance
/// within `max_depth` halvings.
pub fn adaptive(a: f64, b: f64, panels: usize, tol: Adaptive, f: &mut impl FnMut(f64) -> f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let edges: Vec<f64> = (0..=panels).map(|i| if i == panels { b } else { a + h * i as f64 }).collect();
    adaptive_partition(&edges, tol, f)
}

/// [`adaptive`] over caller-supplied panel edges, e.g. at known kinks of `f`.
/// Edges must be nondecreasing; empty panels are skipped.
pub fn adaptive_partition(edges: &[f64], tol: Adaptive, f: &mut impl FnMut(f64) -> f64) -> Result<f64> {
    let rule = &*GL16;
    let (Some(&a), Some(&b)) = (edges.first(), edges.last()) else {
        return Ok(0.0);
    };
    if a == b {
        return Ok(0.0);
    }
    // Coarse estimate of the total sets the absolute floor for every panel.
    let mut coarse = Vec::with_capacity(edges.len());
    for w in edges.windows(2) {
        if w[1] > w[0] {
            coarse.push((w[0], w[1], rule.integrate(w[0], w[1], &mut *f)));
        }
    }
    let scale: f64 = coarse.iter().map(|c| c.2.abs()).sum();
    let floor = tol.abs_tol.max(tol.rel_tol * scale);
    let mut total = 0.0;
    for (lo, hi, whole) in coarse {
        total += refine(rule, lo, hi, whole, floor * (hi - lo) / (b - a), tol, 0, f)?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    rule: &Rule,
    a: f64,
    b: f64,
    whole: f64,
    floor: f64,
    tol: Adaptive,
    depth: u32,
    f: &mut impl FnMut(f64) -> f64,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let left = rule.integrate(a, m, &mut *f);
    let right = rule.integrate(m, b, &mut *f);
    let halves = left + right;
    let err = (halves - whole).abs();
    if err <= floor.max(tol.rel_tol * halves.abs()) || err <= 4.0 * f64::EPSILON * halves.abs() {
        return Ok(halves);
    }
    if depth >= tol.max_depth || m <= a || m >= b {
        return Err(Error::NonConvergence(format!(
            "adaptive quadrature on [{a:e}, {b:e}] stalled with error estimate {err:e}"
        )));
    }
    Ok(refine(rule, a, m, left, 0.5 * floor, tol, depth + 1, f)?
        + refine(rule, m, b, right, 0.5 * floor, tol, depth + 1, f)?)
}

/// Root of a continuous, strictly monotone `f` on `[lo, hi]` where `f(lo)` and
/// `f(hi)` have opposite signs (or one is zero). Bisects to machine precision
/// or to `t_tol`, whichever is looser.
pub fn bisect(mut lo: f64, mut hi: f64, t_tol: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo.signum() == f_hi.signum() {
        return Err(Error::NonConvergence(format!(
            "root not bracketed on [{lo:e}, {hi:e}]: f = ({f_lo:e}, {f_hi:e})"
        )));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= t_tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence(format!("bisection did not converge on [{lo:e}, {hi:e}]")))
}

/// Degree-5 seven-point rule on a triangle, as barycentric coordinates and weights (sum 1).
fn triangle_rule() -> [([f64; 3], f64); 7] {
    let s15 = 15f64.sqrt();
    let a1 = (9.0 - 2.0 * s15) / 21.0;
    let b1 = (6.0 + s15) / 21.0;
    let a2 = (9.0 + 2.0 * s15) / 21.0;
    let b2 = (6.0 - s15) / 21.0;
    let w1 = (155.0 + s15) / 1200.0;
    let w2 = (155.0 - s15) / 1200.0;
    let third = 1.0 / 3.0;
    [
        ([third, third, third], 0.225),
        ([a1, b1, b1], w1),
        ([b1, a1, b1], w1),
        ([b1, b1, a1], w1),
        ([a2, b2, b2], w2),
        ([b2, a2, b2], w2),
        ([b2, b2, a2], w2),
    ]
}

static TRIANGLE_RULE: LazyLock<[([f64; 3], f64); 7]> = LazyLock::new(triangle_rule);

/// `∫ f dA` over triangle `(a, b, c)`, split into `n²` congruent sub-triangles
/// with the seven-point rule on each.
pub fn triangle_integral(a: Vec3, b: Vec3, c: Vec3, n: usize, f: &(impl Fn(Vec3) -> f64 + ?Sized)) -> f64 {
    let n = n.max(1);
    let ab = (b - a) / n as f64;
    let ac = (c - a) / n as f64;
    let sub_area = 0.5 * ab.cross(ac).norm();
    let grid = |i: usize, j: usize| a + ab * i as f64 + ac * j as f64;
    let rule = &*TRIANGLE_RULE;
    let on = |p0: Vec3, p1: Vec3, p2: Vec3| -> f64 {
        rule.iter().map(|(l, w)| w * f(p0 * l[0] + p1 * l[1] + p2 * l[2])).sum()
    };
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n - i {
            total += on(grid(i, j), grid(i + 1, j), grid(i, j + 1));
            if i + j + 2 <= n {
                total += on(grid(i + 1, j), grid(i + 1, j + 1), grid(i, j + 1));
            }
        }
    }
    total * sub_area
}
