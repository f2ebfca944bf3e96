//! TOML run configuration. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::{rectangle_interferometer, CurrentLoop, CurrentSource, IdealSolenoid, Polyline, Vec3};
use crate::phase::Scenario;
use crate::quadrature::QuadratureSettings;
use crate::units::{Quantity, UnitSystem};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub units: UnitSystem,
    #[serde(default)]
    pub source: SourceConfig,
    #[serde(default)]
    pub interferometer: InterferometerConfig,
    #[serde(default)]
    pub electron: ElectronConfig,
    pub window: Option<WindowConfig>,
    #[serde(default)]
    pub numerics: NumericsConfig,
    pub scan: Option<ScanConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    #[default]
    Loop,
    Solenoid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    #[serde(default)]
    pub kind: SourceKind,
    #[serde(rename = "static", default = "yes")]
    pub static_source: bool,
    // loop
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "one")]
    pub current: f64,
    #[serde(default = "z_axis")]
    pub normal: [f64; 3],
    /// Loop center placed this far from the circuit centroid along its normal.
    pub distance: Option<f64>,
    pub center: Option<[f64; 3]>,
    // solenoid
    #[serde(default = "two_pi")]
    pub flux: f64,
    #[serde(default)]
    pub axis_point: [f64; 3],
    #[serde(default = "z_axis")]
    pub axis_dir: [f64; 3],
}

impl Default for SourceConfig {
    fn default() -> Self {
        Self {
            kind: SourceKind::Loop,
            static_source: true,
            radius: default_radius(),
            current: 1.0,
            normal: z_axis(),
            distance: None,
            center: None,
            flux: two_pi(),
            axis_point: [0.0; 3],
            axis_dir: z_axis(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferometerConfig {
    #[serde(default = "one")]
    pub width: f64,
    #[serde(default = "one")]
    pub height: f64,
    #[serde(default = "default_origin")]
    pub origin: [f64; 3],
    #[serde(default = "x_axis")]
    pub e1: [f64; 3],
    #[serde(default = "y_axis")]
    pub e2: [f64; 3],
    /// Explicit vertex lists; both must be given together and override the rectangle.
    pub path1: Option<Vec<[f64; 3]>>,
    pub path2: Option<Vec<[f64; 3]>>,
}

impl Default for InterferometerConfig {
    fn default() -> Self {
        Self {
            width: 1.0,
            height: 1.0,
            origin: default_origin(),
            e1: x_axis(),
            e2: y_axis(),
            path1: None,
            path2: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectronConfig {
    #[serde(default = "one")]
    pub charge: f64,
    #[serde(default = "default_speed")]
    pub speed: f64,
    #[serde(default)]
    pub t_start: f64,
}

impl Default for ElectronConfig {
    fn default() -> Self {
        Self { charge: 1.0, speed: default_speed(), t_start: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub t_i: f64,
    pub t_f: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsConfig {
    #[serde(default = "default_segments")]
    pub n_segments: usize,
    #[serde(default = "one")]
    pub quadrature_scale: f64,
    pub surface_subdivisions: Option<usize>,
    pub line_panels: Option<usize>,
    pub time_panels: Option<usize>,
    pub rel_tol: Option<f64>,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self {
            n_segments: default_segments(),
            quadrature_scale: 1.0,
            surface_subdivisions: None,
            line_panels: None,
            time_panels: None,
            rel_tol: None,
        }
    }
}

/// Either explicit distances or a log-spaced range in units of the window light-length.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub distances: Option<Vec<f64>>,
    pub d_over_cdt_min: Option<f64>,
    pub d_over_cdt_max: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub csv: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

fn yes() -> bool {
    true
}
fn one() -> f64 {
    1.0
}
fn two_pi() -> f64 {
    2.0 * std::f64::consts::PI
}
fn default_radius() -> f64 {
    0.2
}
fn default_speed() -> f64 {
    1e-3
}
fn default_segments() -> usize {
    64
}
fn default_origin() -> [f64; 3] {
    [-0.5, -0.5, 0.0]
}
fn x_axis() -> [f64; 3] {
    [1.0, 0.0, 0.0]
}
fn y_axis() -> [f64; 3] {
    [0.0, 1.0, 0.0]
}
fn z_axis() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

fn field_error(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::InvalidArgument(format!("{field}: {msg}"))
}

fn positive(field: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(field_error(field, format!("must be positive and finite, got {v}")))
    }
}

fn finite(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(field_error(field, format!("must be finite, got {v}")))
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidArgument(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
    }

    fn to_nat(&self, q: Quantity, v: f64) -> f64 {
        self.units.to_natural(q, v)
    }

    /// Quadrature settings after applying the configured overrides and `scale`.
    pub fn settings(&self, scale_override: Option<f64>) -> Result<QuadratureSettings> {
        let n = &self.numerics;
        let scale = positive("--quadrature-scale", scale_override.unwrap_or(n.quadrature_scale))?;
        let mut s = QuadratureSettings::default();
        if let Some(v) = n.surface_subdivisions {
            s.surface_subdivisions = v.max(1);
        }
        if let Some(v) = n.line_panels {
            s.line_panels = v.max(1);
        }
        if let Some(v) = n.time_panels {
            s.time_panels = v.max(1);
        }
        if let Some(v) = n.rel_tol {
            s.rel_tol = positive("numerics.rel_tol", v)?;
        }
        Ok(s.scaled(scale))
    }

    fn paths(&self) -> Result<(Polyline, Polyline)> {
        let i = &self.interferometer;
        match (&i.path1, &i.path2) {
            (Some(a), Some(b)) => {
                let conv = |v: &Vec<[f64; 3]>| v.iter().map(|p| Vec3::from(*p)).collect::<Vec<_>>();
                Ok((
                    Polyline::open(conv(a)).map_err(|e| field_error("interferometer.path1", e))?,
                    Polyline::open(conv(b)).map_err(|e| field_error("interferometer.path2", e))?,
                ))
            }
            (None, None) => {
                let w = positive("interferometer.width", self.to_nat(Quantity::Length, i.width))?;
                let h = positive("interferometer.height", self.to_nat(Quantity::Length, i.height))?;
                let e1 = Vec3::from(i.e1).normalized().ok_or_else(|| field_error("interferometer.e1", "zero vector"))?;
                let e2 = Vec3::from(i.e2).normalized().ok_or_else(|| field_error("interferometer.e2", "zero vector"))?;
                if e1.cross(e2).norm() < 1e-9 {
                    return Err(field_error("interferometer.e2", "parallel to e1"));
                }
                rectangle_interferometer(Vec3::from(i.origin), e1, e2, w, h).map_err(|e| field_error("interferometer", e))
            }
            _ => Err(field_error("interferometer", "path1 and path2 must be given together")),
        }
    }

    /// Validated scenario in natural units.
    pub fn scenario(&self, scale_override: Option<f64>) -> Result<Scenario> {
        let settings = self.settings(scale_override)?;
        let (path1, path2) = self.paths()?;
        let e = &self.electron;
        let charge = finite("electron.charge", self.to_nat(Quantity::Charge, e.charge))?;
        let speed = self.to_nat(Quantity::Speed, e.speed);
        if !(speed > 0.0 && speed < 1.0) {
            return Err(field_error("electron.speed", format!("must lie strictly between 0 and c, got {}", e.speed)));
        }
        let t_start = finite("electron.t_start", self.to_nat(Quantity::Time, e.t_start))?;
        let src = &self.source;
        let source = match src.kind {
            SourceKind::Loop => {
                let radius = positive("source.radius", self.to_nat(Quantity::Length, src.radius))?;
                let current = finite("source.current", self.to_nat(Quantity::Current, src.current))?;
                let lp = CurrentLoop::new(Vec3::ZERO, Vec3::from(src.normal), radius, current, self.numerics.n_segments)
                    .map_err(|e| field_error("source", e))?;
                CurrentSource::Loop(lp)
            }
            SourceKind::Solenoid => {
                let flux = finite("source.flux", self.to_nat(Quantity::Flux, src.flux))?;
                let s = IdealSolenoid::new(Vec3::from(src.axis_point), Vec3::from(src.axis_dir), flux)
                    .map_err(|e| field_error("source", e))?;
                CurrentSource::Solenoid(s)
            }
        };
        let mut scenario = Scenario::new(source, path1, path2, charge, speed, t_start)
            .map_err(|e| field_error("scenario", e))?
            .with_static_source(src.static_source)
            .with_settings(settings);
        if let CurrentSource::Loop(lp) = scenario.source {
            scenario = match (src.distance, src.center) {
                (Some(_), Some(_)) => return Err(field_error("source", "give either distance or center, not both")),
                (Some(d), None) => scenario
                    .with_source_distance(positive("source.distance", self.to_nat(Quantity::Length, d))?)
                    .map_err(|e| field_error("source.distance", e))?,
                (None, Some(c)) => scenario.with_source(CurrentSource::Loop(lp.with_center(Vec3::from(c)))),
                (None, None) => scenario
                    .with_source_distance(lp.radius)
                    .map_err(|e| field_error("source.distance", e))?,
            };
        }
        if let Some(w) = self.window {
            let t_i = finite("window.t_i", self.to_nat(Quantity::Time, w.t_i))?;
            let t_f = finite("window.t_f", self.to_nat(Quantity::Time, w.t_f))?;
            scenario = scenario.with_window(t_i, t_f).map_err(|e| field_error("window", e))?;
        }
        Ok(scenario)
    }

    /// Scan distances in natural units, sorted and deduplicated. Duplicates are reported.
    pub fn scan_distances(&self, window_length: f64) -> Result<(Vec<f64>, usize)> {
        let scan = self.scan.as_ref().ok_or_else(|| field_error("scan", "missing [scan] table"))?;
        let mut d = match (&scan.distances, scan.d_over_cdt_min, scan.d_over_cdt_max, scan.points) {
            (Some(list), None, None, None) => list
                .iter()
                .map(|&x| positive("scan.distances", self.to_nat(Quantity::Length, x)))
                .collect::<Result<Vec<_>>>()?,
            (None, Some(lo), Some(hi), Some(n)) => {
                let lo = positive("scan.d_over_cdt_min", lo)?;
                let hi = positive("scan.d_over_cdt_max", hi)?;
                if n < 2 {
                    return Err(field_error("scan.points", format!("need at least 2 points, got {n}")));
                }
                if hi <= lo {
                    return Err(field_error("scan.d_over_cdt_max", "must exceed d_over_cdt_min"));
                }
                let ratio = hi / lo;
                (0..n)
                    .map(|i| {
                        let x = if i + 1 == n { hi } else { lo * ratio.powf(i as f64 / (n - 1) as f64) };
                        x * window_length
                    })
                    .collect()
            }
            _ => {
                return Err(field_error(
                    "scan",
                    "give either `distances` or all of `d_over_cdt_min`, `d_over_cdt_max`, `points`",
                ))
            }
        };
        d.sort_by(f64::total_cmp);
        let before = d.len();
        d.dedup();
        let duplicates = before - d.len();
        if d.len() < 2 {
            return Err(field_error("scan", format!("need at least 2 distinct distances, got {}", d.len())));
        }
        Ok((d, duplicates))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_uses_defaults() {
        let c = RunConfig::from_toml("").unwrap();
        assert_eq!(c.units, UnitSystem::Natural);
        let s = c.scenario(None).unwrap();
        assert_eq!(s.speed, 1e-3);
        assert!(matches!(s.source, CurrentSource::Loop(_)));
    }

    #[test]
    fn unknown_keys_rejected() {
        let e = RunConfig::from_toml("[source]\nradius = 1.0\nradus = 2.0\n").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("radus") && msg.contains("line 3"), "{msg}");
        assert!(RunConfig::from_toml("speed = 0.1").is_err());
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let c = RunConfig::from_toml("[electron]\nspeed = 1.5\n").unwrap();
        assert!(c.scenario(None).unwrap_err().to_string().contains("electron.speed"));
        let c = RunConfig::from_toml("[source]\nradius = -1.0\n").unwrap();
        assert!(c.scenario(None).unwrap_err().to_string().contains("source.radius"));
    }

    #[test]
    fn si_speed_converted() {
        let c = RunConfig::from_toml("units = \"si\"\n[electron]\nspeed = 2997924.58\ncharge = 1.602176634e-19\n").unwrap();
        let s = c.scenario(None).unwrap();
        assert!((s.speed - 0.01).abs() < 1e-15);
        assert!((s.charge - 0.302_822).abs() < 1e-6);
    }

    #[test]
    fn scan_distances_sorted_and_deduplicated() {
        let c = RunConfig::from_toml("[scan]\ndistances = [3.0, 1.0, 3.0, 2.0]\n").unwrap();
        let (d, dup) = c.scan_distances(10.0).unwrap();
        assert_eq!(d, vec![1.0, 2.0, 3.0]);
        assert_eq!(dup, 1);
        let single = RunConfig::from_toml("[scan]\ndistances = [3.0, 3.0]\n").unwrap();
        assert!(single.scan_distances(10.0).is_err());
        let log = RunConfig::from_toml("[scan]\nd_over_cdt_min = 0.01\nd_over_cdt_max = 100.0\npoints = 5\n").unwrap();
        let (d, _) = log.scan_distances(2.0).unwrap();
        assert_eq!(d.len(), 5);
        assert_eq!((d[0], d[4]), (0.02, 200.0));
    }
}
