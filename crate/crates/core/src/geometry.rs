//! Spatial and spacetime primitives, interferometer paths, electron
//! trajectories and current-source discretization.
//!
//! Everything is in natural units with `c = 1`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Minimum number of midpoint elements for a discretized loop.
pub const MIN_LOOP_SEGMENTS: usize = 8;

/// Closest approach of a circuit to the solenoid axis for which the winding is still defined.
pub const AXIS_CLEARANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    #[inline]
    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    /// Unit vector along `self`, or `None` for a zero or non-finite vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    #[inline]
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl AddAssign for Vec3 {
    #[inline]
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl SubAssign for Vec3 {
    #[inline]
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl std::iter::Sum for Vec3 {
    fn sum<I: Iterator<Item = Vec3>>(iter: I) -> Vec3 {
        iter.fold(Vec3::ZERO, |acc, v| acc + v)
    }
}

/// Right-handed orthonormal pair `(e1, e2)` with `e1 × e2 = n` for a unit `n`.
pub fn orthonormal_basis(n: Vec3) -> (Vec3, Vec3) {
    // Pick the coordinate axis least aligned with n.
    let helper = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
        Vec3::X
    } else if n.y.abs() <= n.z.abs() {
        Vec3::Y
    } else {
        Vec3::Z
    };
    let e1 = (helper - n * helper.dot(n)).normalized().expect("helper not parallel to n");
    let e2 = n.cross(e1);
    (e1, e2)
}

/// An event `(r, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    pub r: Vec3,
    pub t: f64,
}

impl SpacetimePoint {
    pub const fn new(r: Vec3, t: f64) -> Self {
        Self { r, t }
    }

    /// `|a.r − b.r| − (a.t − b.t)`: negative when `b` lies inside the past light cone of `a`.
    pub fn interval_separation(a: SpacetimePoint, b: SpacetimePoint) -> f64 {
        a.r.distance(b.r) - (a.t - b.t)
    }
}

/// Ordered list of vertices, optionally closed back onto the first vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    vertices: Vec<Vec3>,
    closed: bool,
    /// Arc length at the start of each segment, plus the total at the end.
    cumulative: Vec<f64>,
}

/// One straight piece of a [`Polyline`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: Vec3,
    pub end: Vec3,
    /// Arc length of `start` measured from the first vertex.
    pub arc_start: f64,
}

impl Segment {
    pub fn vector(&self) -> Vec3 {
        self.end - self.start
    }

    pub fn length(&self) -> f64 {
        self.vector().norm()
    }

    pub fn direction(&self) -> Vec3 {
        self.vector() / self.length()
    }

    pub fn point_at(&self, s: f64) -> Vec3 {
        self.start + self.direction() * s
    }
}

impl Polyline {
    pub fn new(vertices: Vec<Vec3>, closed: bool) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidGeometry(format!(
                "polyline needs at least 2 vertices, got {}",
                vertices.len()
            )));
        }
        if let Some(v) = vertices.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidGeometry(format!("non-finite vertex {v}")));
        }
        if closed && vertices.len() < 3 {
            return Err(Error::InvalidGeometry("closed polyline needs at least 3 vertices".into()));
        }
        let n_seg = if closed { vertices.len() } else { vertices.len() - 1 };
        let mut cumulative = Vec::with_capacity(n_seg + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for i in 0..n_seg {
            let a = vertices[i];
            let b = vertices[(i + 1) % vertices.len()];
            let len = a.distance(b);
            if len == 0.0 {
                return Err(Error::InvalidGeometry(format!(
                    "consecutive vertices {i} and {} coincide at {a}",
                    (i + 1) % vertices.len()
                )));
            }
            acc += len;
            cumulative.push(acc);
        }
        Ok(Self { vertices, closed, cumulative })
    }

    pub fn open(vertices: Vec<Vec3>) -> Result<Self> {
        Self::new(vertices, false)
    }

    pub fn closed(vertices: Vec<Vec3>) -> Result<Self> {
        Self::new(vertices, true)
    }

    /// Closed circuit formed by `path1` followed by `path2` reversed.
    ///
    /// Both paths must be open and share start and end vertices.
    pub fn circuit(path1: &Polyline, path2: &Polyline) -> Result<Self> {
        if path1.closed || path2.closed {
            return Err(Error::InvalidGeometry("interferometer paths must be open".into()));
        }
        let tol = 1e-12 * path1.length().max(path2.length());
        if path1.first().distance(path2.first()) > tol || path1.last().distance(path2.last()) > tol {
            return Err(Error::InvalidGeometry(
                "interferometer paths must share start and end vertices".into(),
            ));
        }
        let mut vertices = path1.vertices.clone();
        let n2 = path2.vertices.len();
        // Skip path2's end (== path1's end) and start (== closure vertex).
        vertices.extend(path2.vertices[1..n2 - 1].iter().rev().copied());
        Self::closed(vertices)
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn first(&self) -> Vec3 {
        self.vertices[0]
    }

    pub fn last(&self) -> Vec3 {
        if self.closed {
            self.vertices[0]
        } else {
            *self.vertices.last().expect("at least two vertices")
        }
    }

    pub fn segment_count(&self) -> usize {
        self.cumulative.len() - 1
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().expect("non-empty")
    }

    pub fn segment(&self, i: usize) -> Segment {
        Segment {
            start: self.vertices[i],
            end: self.vertices[(i + 1) % self.vertices.len()],
            arc_start: self.cumulative[i],
        }
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.segment_count()).map(move |i| self.segment(i))
    }

    /// Point and unit tangent at arc length `s`, clamped to `[0, length]`.
    ///
    /// At an interior vertex the outgoing segment's tangent is returned.
    pub fn point_at_arc(&self, s: f64) -> (Vec3, Vec3) {
        let s = s.clamp(0.0, self.length());
        let n = self.segment_count();
        // partition_point gives the first cumulative > s
        let idx = self.cumulative.partition_point(|&c| c <= s).saturating_sub(1).min(n - 1);
        let seg = self.segment(idx);
        let dir = seg.direction();
        let local = (s - seg.arc_start).min(seg.length());
        (seg.start + dir * local, dir)
    }

    /// Average of the distinct vertices.
    pub fn centroid(&self) -> Vec3 {
        let vs: &[Vec3] = if !self.closed && self.first() == self.last() {
            &self.vertices[..self.vertices.len() - 1]
        } else {
            &self.vertices
        };
        vs.iter().copied().sum::<Vec3>() / vs.len() as f64
    }

    /// Area vector of a closed polygon by Newell's method (zero for open polylines).
    pub fn area_vector(&self) -> Vec3 {
        if !self.closed {
            return Vec3::ZERO;
        }
        let c = self.centroid();
        self.segments().map(|s| (s.start - c).cross(s.end - c) * 0.5).sum()
    }

    /// Largest distance of any vertex from the best-fit plane through the centroid.
    pub fn planarity_defect(&self) -> Option<f64> {
        let n = self.area_vector().normalized()?;
        let c = self.centroid();
        Some(self.vertices.iter().map(|v| (*v - c).dot(n).abs()).fold(0.0, f64::max))
    }

    pub fn translated(&self, by: Vec3) -> Polyline {
        self.map(|v| v + by)
    }

    /// Apply `f` to every vertex, keeping topology. Cumulative lengths are recomputed.
    pub fn map(&self, f: impl Fn(Vec3) -> Vec3) -> Polyline {
        Polyline::new(self.vertices.iter().map(|v| f(*v)).collect(), self.closed)
            .expect("mapping preserved a valid polyline")
    }
}

/// Two open paths forming a planar rectangular interferometer.
///
/// Path 1 runs along `e1` then `e2`; path 2 along `e2` then `e1`. The circuit
/// path1 − path2 winds once counter-clockwise about `e1 × e2`.
pub fn rectangle_interferometer(
    origin: Vec3,
    e1: Vec3,
    e2: Vec3,
    width: f64,
    height: f64,
) -> Result<(Polyline, Polyline)> {
    if !(width > 0.0 && height > 0.0) {
        return Err(Error::InvalidGeometry(format!(
            "rectangle dimensions must be positive, got {width} x {height}"
        )));
    }
    let e1 = e1.normalized().ok_or_else(|| Error::InvalidGeometry("zero e1".into()))?;
    let e2 = (e2 - e1 * e2.dot(e1))
        .normalized()
        .ok_or_else(|| Error::InvalidGeometry("e2 parallel to e1".into()))?;
    let a = origin;
    let b = origin + e1 * width;
    let c = origin + e1 * width + e2 * height;
    let d = origin + e2 * height;
    Ok((Polyline::open(vec![a, b, c])?, Polyline::open(vec![a, d, c])?))
}

/// Circular current filament.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentLoop {
    pub center: Vec3,
    /// Unit normal; positive current circulates right-handed about it.
    pub normal: Vec3,
    pub radius: f64,
    pub current: f64,
    pub n_segments: usize,
}

impl CurrentLoop {
    pub fn new(center: Vec3, normal: Vec3, radius: f64, current: f64, n_segments: usize) -> Result<Self> {
        let normal = normal
            .normalized()
            .ok_or_else(|| Error::InvalidGeometry("loop normal must be non-zero".into()))?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidGeometry(format!("loop radius must be positive, got {radius}")));
        }
        if !current.is_finite() || !center.is_finite() {
            return Err(Error::InvalidGeometry("loop center and current must be finite".into()));
        }
        check_segment_count(n_segments)?;
        Ok(Self { center, normal, radius, current, n_segments })
    }

    pub fn with_center(self, center: Vec3) -> Self {
        Self { center, ..self }
    }

    /// Distance from `r` to the continuous circular wire.
    pub fn distance_to_wire(&self, r: Vec3) -> f64 {
        let w = r - self.center;
        let z = w.dot(self.normal);
        let rho = (w - self.normal * z).norm();
        (rho - self.radius).hypot(z)
    }

    /// Distance from the wire to the segment `a–b`: coarse sampling, then a
    /// golden-section polish around the best sample.
    pub fn distance_to_segment(&self, a: Vec3, b: Vec3) -> f64 {
        const SAMPLES: usize = 64;
        let d = |u: f64| self.distance_to_wire(a + (b - a) * u);
        let best = (0..=SAMPLES).min_by(|&i, &j| d(i as f64 / SAMPLES as f64).total_cmp(&d(j as f64 / SAMPLES as f64)));
        let k = best.unwrap_or(0) as f64;
        let (mut lo, mut hi) = (((k - 1.0) / SAMPLES as f64).max(0.0), ((k + 1.0) / SAMPLES as f64).min(1.0));
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let x1 = hi - g * (hi - lo);
            let x2 = lo + g * (hi - lo);
            if d(x1) < d(x2) {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        d(0.5 * (lo + hi)).min(d(k / SAMPLES as f64))
    }
}

fn check_segment_count(n: usize) -> Result<()> {
    if n < MIN_LOOP_SEGMENTS {
        return Err(Error::InvalidGeometry(format!(
            "loop needs at least {MIN_LOOP_SEGMENTS} segments, got {n}"
        )));
    }
    Ok(())
}

/// Midpoint-rule element of a discretized loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopElement {
    pub midpoint: Vec3,
    pub tangent: Vec3,
    pub dl: f64,
    pub current: f64,
}

impl LoopElement {
    /// `I · t̂ · dl`, the current element.
    pub fn current_moment(&self) -> Vec3 {
        self.tangent * (self.current * self.dl)
    }
}

/// Uniform partition of the loop into `n_segments` arcs, each represented at its mid-angle.
pub fn discretize_loop(lp: &CurrentLoop) -> Result<Vec<LoopElement>> {
    check_segment_count(lp.n_segments)?;
    let (e1, e2) = orthonormal_basis(lp.normal);
    let n = lp.n_segments;
    let dtheta = 2.0 * PI / n as f64;
    let dl = lp.radius * dtheta;
    Ok((0..n)
        .map(|k| {
            let theta = (k as f64 + 0.5) * dtheta;
            let (s, c) = theta.sin_cos();
            LoopElement {
                midpoint: lp.center + (e1 * c + e2 * s) * lp.radius,
                tangent: e2 * c - e1 * s,
                dl,
                current: lp.current,
            }
        })
        .collect())
}

/// Infinitely long, infinitely thin flux tube: zero exterior `B`, azimuthal exterior `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealSolenoid {
    pub axis_point: Vec3,
    /// Unit axis; positive flux points along it.
    pub axis_dir: Vec3,
    pub flux: f64,
}

impl IdealSolenoid {
    pub fn new(axis_point: Vec3, axis_dir: Vec3, flux: f64) -> Result<Self> {
        let axis_dir = axis_dir
            .normalized()
            .ok_or_else(|| Error::InvalidGeometry("solenoid axis must be non-zero".into()))?;
        if !flux.is_finite() || !axis_point.is_finite() {
            return Err(Error::InvalidGeometry("solenoid flux and axis point must be finite".into()));
        }
        Ok(Self { axis_point, axis_dir, flux })
    }

    /// Perpendicular offset of `r` from the axis.
    pub fn radial(&self, r: Vec3) -> Vec3 {
        let w = r - self.axis_point;
        w - self.axis_dir * w.dot(self.axis_dir)
    }
}

/// Source of the static (or switched) magnetic field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurrentSource {
    Loop(CurrentLoop),
    Solenoid(IdealSolenoid),
}

impl CurrentSource {
    pub fn scaled(&self, factor: f64) -> CurrentSource {
        match *self {
            CurrentSource::Loop(l) => CurrentSource::Loop(CurrentLoop { current: l.current * factor, ..l }),
            CurrentSource::Solenoid(s) => CurrentSource::Solenoid(IdealSolenoid { flux: s.flux * factor, ..s }),
        }
    }
}

/// Classical point charge moving at constant speed along a polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectronCurrent {
    pub path: Polyline,
    pub speed: f64,
    pub charge: f64,
    pub t_start: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryState {
    pub position: Vec3,
    pub velocity: Vec3,
    pub active: bool,
}

/// Straight piece of a trajectory with its time span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimedSegment {
    pub start: Vec3,
    pub velocity: Vec3,
    pub t0: f64,
    pub t1: f64,
}

impl TimedSegment {
    #[inline]
    pub fn position(&self, t: f64) -> Vec3 {
        self.start + self.velocity * (t - self.t0)
    }
}

impl ElectronCurrent {
    pub fn new(path: Polyline, speed: f64, charge: f64, t_start: f64) -> Result<Self> {
        if !(speed > 0.0 && speed.is_finite()) {
            return Err(Error::InvalidScenario(format!("electron speed must be positive, got {speed}")));
        }
        if !charge.is_finite() || !t_start.is_finite() {
            return Err(Error::InvalidScenario("charge and start time must be finite".into()));
        }
        Ok(Self { path, speed, charge, t_start })
    }

    pub fn transit_time(&self) -> f64 {
        self.path.length() / self.speed
    }

    pub fn t_end(&self) -> f64 {
        self.t_start + self.transit_time()
    }

    pub fn timed_segments(&self) -> impl Iterator<Item = TimedSegment> + '_ {
        self.path.segments().map(move |seg| {
            let t0 = self.t_start + seg.arc_start / self.speed;
            TimedSegment {
                start: seg.start,
                velocity: seg.direction() * self.speed,
                t0,
                t1: t0 + seg.length() / self.speed,
            }
        })
    }

    /// Position (arc-length parameterized), velocity and whether the current is on at `t`.
    pub fn state(&self, t: f64) -> TrajectoryState {
        if !(t >= self.t_start && t <= self.t_end()) {
            let position = if t < self.t_start { self.path.first() } else { self.path.last() };
            return TrajectoryState { position, velocity: Vec3::ZERO, active: false };
        }
        let (position, dir) = self.path.point_at_arc(self.speed * (t - self.t_start));
        TrajectoryState { position, velocity: dir * self.speed, active: true }
    }

    /// Smallest distance from `r` to any point of the path.
    pub fn min_distance_to(&self, r: Vec3) -> f64 {
        self.path.segments().map(|s| point_segment_distance(r, s.start, s.end)).fold(f64::INFINITY, f64::min)
    }
}

/// Free-function form of [`ElectronCurrent::state`].
pub fn trajectory_state(e: &ElectronCurrent, t: f64) -> TrajectoryState {
    e.state(t)
}

pub fn point_segment_distance(p: Vec3, a: Vec3, b: Vec3) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    let u = if len2 > 0.0 { ((p - a).dot(ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    p.distance(a + ab * u)
}

/// Signed number of turns the circuit `path1 − path2` makes about the axis.
pub fn winding_number(path1: &Polyline, path2: &Polyline, axis_point: Vec3, axis_dir: Vec3) -> Result<i64> {
    let circuit = Polyline::circuit(path1, path2)?;
    circuit_winding_number(&circuit, axis_point, axis_dir)
}

/// Winding of a closed polyline about the axis, from summed subtended angles in the
/// plane perpendicular to `axis_dir`.
pub fn circuit_winding_number(circuit: &Polyline, axis_point: Vec3, axis_dir: Vec3) -> Result<i64> {
    if !circuit.is_closed() {
        return Err(Error::InvalidGeometry("winding number needs a closed circuit".into()));
    }
    let d = axis_dir
        .normalized()
        .ok_or_else(|| Error::InvalidGeometry("axis direction must be non-zero".into()))?;
    let (e1, e2) = orthonormal_basis(d);
    let project = |v: Vec3| {
        let w = v - axis_point;
        (w.dot(e1), w.dot(e2))
    };
    let mut total = 0.0;
    for seg in circuit.segments() {
        let (ax, ay) = project(seg.start);
        let (bx, by) = project(seg.end);
        let clearance = point_segment_distance_2d((0.0, 0.0), (ax, ay), (bx, by));
        if clearance < AXIS_CLEARANCE {
            return Err(Error::Singular { what: "circuit passes through the solenoid axis", distance: clearance });
        }
        total += (ax * by - ay * bx).atan2(ax * bx + ay * by);
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

fn point_segment_distance_2d(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (abx, aby) = (b.0 - a.0, b.1 - a.1);
    let len2 = abx * abx + aby * aby;
    let u = if len2 > 0.0 { (((p.0 - a.0) * abx + (p.1 - a.1) * aby) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p.0 - a.0 - abx * u).hypot(p.1 - a.1 - aby * u)
}
