use crate::error::{Error, Result};
use crate::geometry::{point_segment_distance, CurrentSource, ElectronCurrent, Polyline, Vec3};
use crate::quadrature::QuadratureSettings;

/// One interferometer experiment: a source, two electron paths and an observation window.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub source: CurrentSource,
    pub path1: Polyline,
    pub path2: Polyline,
    pub charge: f64,
    pub speed: f64,
    pub t_start: f64,
    /// `(t_i, t_f)`; `None` means exactly the electron transit interval.
    pub window: Option<(f64, f64)>,
    /// Source current switched on at `t = −∞`; otherwise it flows only inside the window.
    pub static_source: bool,
    pub settings: QuadratureSettings,
}

impl Scenario {
    /// Validated scenario with the default (transit) window, static source and default quadrature.
    pub fn new(source: CurrentSource, path1: Polyline, path2: Polyline, charge: f64, speed: f64, t_start: f64) -> Result<Self> {
        let s = Self {
            source,
            path1,
            path2,
            charge,
            speed,
            t_start,
            window: None,
            static_source: true,
            settings: QuadratureSettings::default(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_window(mut self, t_i: f64, t_f: f64) -> Result<Self> {
        self.window = Some((t_i, t_f));
        self.validate()?;
        Ok(self)
    }

    pub fn with_static_source(mut self, static_source: bool) -> Self {
        self.static_source = static_source;
        self
    }

    pub fn with_settings(mut self, settings: QuadratureSettings) -> Self {
        self.settings = settings;
        self
    }

    pub fn with_source(mut self, source: CurrentSource) -> Self {
        self.source = source;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.path1.is_closed() || self.path2.is_closed() {
            return Err(Error::InvalidScenario("interferometer paths must be open polylines".into()));
        }
        // shared endpoints are checked by circuit construction
        Polyline::circuit(&self.path1, &self.path2)?;
        if !(self.speed > 0.0 && self.speed < 1.0) {
            return Err(Error::InvalidScenario(format!("electron speed must satisfy 0 < v < 1, got {}", self.speed)));
        }
        if !self.charge.is_finite() || !self.t_start.is_finite() {
            return Err(Error::InvalidScenario("charge and start time must be finite".into()));
        }
        if let Some((t_i, t_f)) = self.window {
            if !(t_i.is_finite() && t_f.is_finite()) {
                return Err(Error::InvalidScenario("window bounds must be finite".into()));
            }
            if t_i > self.t_start {
                return Err(Error::InvalidScenario(format!("window opens at {t_i}, after the electron starts at {}", self.t_start)));
            }
            let end = self.transit_end();
            if t_f < end * (1.0 - 1e-12 * end.signum()) - 1e-12 {
                return Err(Error::InvalidScenario(format!("window closes at {t_f}, before the transit ends at {end}")));
            }
        }
        Ok(())
    }

    /// Time at which the slower of the two paths is completed.
    pub fn transit_end(&self) -> f64 {
        self.t_start + self.path1.length().max(self.path2.length()) / self.speed
    }

    pub fn window(&self) -> (f64, f64) {
        self.window.unwrap_or((self.t_start, self.transit_end()))
    }

    pub fn window_length(&self) -> f64 {
        let (t_i, t_f) = self.window();
        t_f - t_i
    }

    pub fn electrons(&self) -> Result<[ElectronCurrent; 2]> {
        Ok([
            ElectronCurrent::new(self.path1.clone(), self.speed, self.charge, self.t_start)?,
            ElectronCurrent::new(self.path2.clone(), self.speed, self.charge, self.t_start)?,
        ])
    }

    /// `path1` followed by reversed `path2`.
    pub fn circuit(&self) -> Result<Polyline> {
        Polyline::circuit(&self.path1, &self.path2)
    }

    /// Smallest distance between the source current and either path.
    pub fn source_clearance(&self) -> f64 {
        let segs = self.path1.segments().chain(self.path2.segments());
        match &self.source {
            CurrentSource::Loop(lp) => segs.map(|s| lp.distance_to_segment(s.start, s.end)).fold(f64::INFINITY, f64::min),
            CurrentSource::Solenoid(sol) => segs
                .map(|s| axis_segment_distance(sol.axis_point, sol.axis_dir, s.start, s.end))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// No light signal from the electron can reach the source inside the window.
    pub fn is_retarded_regime(&self) -> bool {
        self.source_clearance() > self.window_length()
    }

    /// Copy of a loop scenario with the loop center placed `distance` from the circuit
    /// centroid along the circuit's plane normal. The loop orientation is kept.
    pub fn with_source_distance(&self, distance: f64) -> Result<Self> {
        let CurrentSource::Loop(lp) = &self.source else {
            return Err(Error::InvalidScenario("only a loop source can be moved along the circuit normal".into()));
        };
        if !(distance > 0.0 && distance.is_finite()) {
            return Err(Error::InvalidArgument(format!("source distance must be positive, got {distance}")));
        }
        let circuit = self.circuit()?;
        let normal = circuit
            .area_vector()
            .normalized()
            .ok_or_else(|| Error::InvalidGeometry("circuit encloses no area, so it has no normal".into()))?;
        let moved = lp.with_center(circuit.centroid() + normal * distance);
        Ok(self.clone().with_source(CurrentSource::Loop(moved)))
    }
}

/// Perpendicular distance from an infinite axis to a segment.
fn axis_segment_distance(axis_point: Vec3, axis_dir: Vec3, a: Vec3, b: Vec3) -> f64 {
    let project = |v: Vec3| {
        let w = v - axis_point;
        w - axis_dir * w.dot(axis_dir)
    };
    point_segment_distance(Vec3::ZERO, project(a), project(b))
}
