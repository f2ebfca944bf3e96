//! Reference values checked against independent computations.

use std::f64::consts::PI;

use approx::assert_relative_eq;

use abretard::em_fields::closed_form::{loop_axial_field, loop_vector_potential};
use abretard::em_fields::{loop_magnetic_field, loop_vector_potential_static, retarded_potential_of_electron};
use abretard::geometry::{discretize_loop, rectangle_interferometer, CurrentLoop, ElectronCurrent};
use abretard::quadrature::Rule;
use abretard::{phase_full, CurrentSource, Scenario, SpacetimePoint, Vec3};

/// A_φ(ρ = 2, z = 0) of a unit loop with unit current; agreed by the elliptic form
/// and a 30-digit direct azimuthal integral.
const A_PHI_RHO2: f64 = 0.069_483_274_740_835_13;

#[test]
fn loop_potential_reference_value() {
    let lp = CurrentLoop::new(Vec3::ZERO, Vec3::Z, 1.0, 1.0, 8).unwrap();
    let r = Vec3::new(2.0, 0.0, 0.0);
    let closed = loop_vector_potential(&lp, r);
    assert_relative_eq!(closed.y, A_PHI_RHO2, max_relative = 1e-14);

    // segment sum written out here with chord midpoints, n = 10⁶
    let n = 1_000_000;
    let mut sum = 0.0;
    for k in 0..n {
        let (t0, t1) = (2.0 * PI * k as f64 / n as f64, 2.0 * PI * (k + 1) as f64 / n as f64);
        let (a, b) = (Vec3::new(t0.cos(), t0.sin(), 0.0), Vec3::new(t1.cos(), t1.sin(), 0.0));
        sum += (b - a).y / (r - (a + b) * 0.5).norm();
    }
    assert_relative_eq!(sum / (4.0 * PI), A_PHI_RHO2, max_relative = 1e-6);

    let library = loop_vector_potential_static(&CurrentLoop { n_segments: 4096, ..lp }, r).unwrap();
    assert_relative_eq!(library.y, A_PHI_RHO2, max_relative = 1e-6);
    assert!(library.x.abs() < 1e-15 && library.z.abs() < 1e-15);
}

#[test]
fn loop_field_matches_axial_closed_form() {
    let lp = CurrentLoop::new(Vec3::ZERO, Vec3::Z, 1.0, 1.0, 4096).unwrap();
    for z in [0.0, 1.0, 2.5] {
        let b = loop_magnetic_field(&lp, Vec3::new(0.0, 0.0, z)).unwrap();
        assert_relative_eq!(b.z, loop_axial_field(&lp, z), max_relative = 1e-8);
    }
    assert_relative_eq!(loop_axial_field(&lp, 0.0), 0.5);
    assert_relative_eq!(loop_axial_field(&lp, 1.0), 1.0 / (2.0 * 2f64.powf(1.5)));
}

/// `Σ_k m_k · ∫ A_e(r_k, t) dt` over the observation window, with the potential taken
/// from the Liénard–Wiechert evaluation at each element.
fn brute_force_source_term(s: &Scenario, e: &ElectronCurrent) -> f64 {
    let CurrentSource::Loop(lp) = s.source else { unreachable!() };
    let (t_i, t_f) = s.window();
    let rule = Rule::gauss_legendre(16);
    let mut vertex_times = vec![e.t_start];
    let mut clock = e.t_start;
    for seg in e.path.segments() {
        clock += seg.length() / e.speed;
        vertex_times.push(clock);
    }
    discretize_loop(&lp)
        .unwrap()
        .iter()
        .map(|el| {
            // the integrand has kinks where light from a path vertex arrives
            let mut edges: Vec<f64> = e
                .path
                .vertices()
                .iter()
                .zip(&vertex_times)
                .map(|(v, t)| t + el.midpoint.distance(*v))
                .filter(|t| *t > t_i && *t < t_f)
                .collect();
            edges.extend([t_i, t_f]);
            edges.sort_by(f64::total_cmp);
            let m = el.current_moment();
            edges
                .windows(2)
                .map(|w| {
                    rule.composite(w[0], w[1], 32, |t| {
                        m.dot(retarded_potential_of_electron(e, SpacetimePoint::new(el.midpoint, t)).unwrap())
                    })
                })
                .sum::<f64>()
        })
        .sum()
}

#[test]
fn source_term_matches_observation_time_integral() {
    let (p1, p2) = rectangle_interferometer(Vec3::new(-0.5, -0.5, 0.0), Vec3::X, Vec3::Y, 1.0, 1.0).unwrap();
    let lp = CurrentLoop::new(Vec3::new(0.1, -0.2, 0.4), Vec3::new(0.3, 0.1, 1.0), 0.2, 1.3, 32).unwrap();
    let base = Scenario::new(CurrentSource::Loop(lp), p1, p2, 0.7, 0.3, 0.0).unwrap();
    for s in [base.clone(), base.clone().with_window(-1.0, 8.0).unwrap()] {
        let r = phase_full(&s).unwrap();
        let electrons = s.electrons().unwrap();
        for (path, e) in r.paths.iter().zip(&electrons) {
            let brute = brute_force_source_term(&s, e);
            assert_relative_eq!(path.term_s_dot_ae, brute, max_relative = 1e-8);
        }
    }
}
