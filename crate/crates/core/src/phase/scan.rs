use rayon::prelude::*;

use crate::error::{Error, Result};

use super::{phase_full, Scenario};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimePoint {
    pub distance: f64,
    /// `D / (t_f − t_i)` with `c = 1`.
    pub d_over_cdt: f64,
    pub factor: Option<f64>,
    pub delta_phi: f64,
    pub term_e_dot_as: f64,
    pub term_s_dot_ae: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RegimeCurve {
    pub points: Vec<RegimePoint>,
}

impl RegimeCurve {
    /// Every consecutive pair satisfies `factor[i + 1] ≤ factor[i] + tol`.
    /// Points without a factor break monotonicity.
    pub fn is_monotone_nonincreasing(&self, tol: f64) -> bool {
        self.points.windows(2).all(|w| match (w[0].factor, w[1].factor) {
            (Some(a), Some(b)) => b <= a + tol,
            _ => false,
        })
    }

    pub fn factors(&self) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.factor).collect()
    }
}

fn scan_point(base: &Scenario, distance: f64) -> Result<RegimePoint> {
    let s = base.with_source_distance(distance)?;
    let r = phase_full(&s)?;
    Ok(RegimePoint {
        distance,
        d_over_cdt: distance / s.window_length(),
        factor: r.factor,
        delta_phi: r.delta_phi,
        term_e_dot_as: r.term_e_dot_as,
        term_s_dot_ae: r.term_s_dot_ae,
    })
}

/// Every distance evaluated independently, in input order. Failures are tagged
/// with the offending distance.
pub fn regime_scan_points(base: &Scenario, distances: &[f64]) -> Vec<Result<RegimePoint>> {
    distances
        .par_iter()
        .map(|&d| scan_point(base, d).map_err(|e| Error::ScanPoint { distance: d, source: Box::new(e) }))
        .collect()
}

/// Moves the loop source to each distance along the circuit normal and recomputes the
/// full phase. Distances must be positive and strictly increasing.
pub fn regime_scan(base: &Scenario, distances: &[f64]) -> Result<RegimeCurve> {
    base.validate()?;
    if let Some(bad) = distances.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
        return Err(Error::InvalidArgument(format!("scan distance {bad} is not positive")));
    }
    if distances.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("scan distances must be strictly increasing".into()));
    }
    let points = regime_scan_points(base, distances).into_iter().collect::<Result<Vec<_>>>()?;
    Ok(RegimeCurve { points })
}
