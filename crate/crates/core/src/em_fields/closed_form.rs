//! Closed-form fields of a continuous circular loop, used to check the
//! element sums.

use std::f64::consts::PI;

use crate::geometry::{CurrentLoop, Vec3};

/// Complete elliptic integrals `K(m)` and `E(m)` (parameter `m = k²`) by the
/// arithmetic–geometric mean.
pub fn ellip_ke(m: f64) -> (f64, f64) {
    assert!((0.0..1.0).contains(&m), "parameter m = {m} outside [0, 1)");
    let mut a = 1.0;
    let mut b = (1.0 - m).sqrt();
    let mut c2_sum = 0.5 * m; // Σ 2^(n−1) c_n², starting with c_0² = m
    let mut pow = 0.5;
    for _ in 0..64 {
        let c = 0.5 * (a - b);
        pow *= 2.0;
        c2_sum += pow * c * c;
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        if c.abs() <= f64::EPSILON * a {
            break;
        }
    }
    let k = PI / (2.0 * a);
    (k, k * (1.0 - c2_sum))
}

/// Exact azimuthal vector potential of the continuous loop.
pub fn loop_vector_potential(lp: &CurrentLoop, r: Vec3) -> Vec3 {
    let w = r - lp.center;
    let z = w.dot(lp.normal);
    let radial = w - lp.normal * z;
    let rho = radial.norm();
    if rho == 0.0 {
        return Vec3::ZERO;
    }
    let a = lp.radius;
    let m = 4.0 * a * rho / ((a + rho).powi(2) + z * z);
    let (k, e) = ellip_ke(m);
    let kk = m.sqrt();
    let a_phi = lp.current / (PI * kk) * (a / rho).sqrt() * ((1.0 - 0.5 * m) * k - e);
    lp.normal.cross(radial / rho) * a_phi
}

/// On-axis field `I a² / (2 (a² + z²)^{3/2})` along the normal.
pub fn loop_axial_field(lp: &CurrentLoop, z: f64) -> f64 {
    let a2 = lp.radius * lp.radius;
    lp.current * a2 / (2.0 * (a2 + z * z).powf(1.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn elliptic_reference_values() {
        // K(0.5), E(0.5) from Abramowitz & Stegun table 17.1
        let (k, e) = ellip_ke(0.5);
        assert_relative_eq!(k, 1.854_074_677_301_372, max_relative = 1e-15);
        assert_relative_eq!(e, 1.350_643_881_047_675_5, max_relative = 1e-15);
        let (k0, e0) = ellip_ke(0.0);
        assert_relative_eq!(k0, PI / 2.0);
        assert_relative_eq!(e0, PI / 2.0);
    }

    #[test]
    fn far_field_is_dipolar() {
        // A → m sinθ / (4π r²) with m = I π a² (Heaviside–Lorentz).
        let lp = CurrentLoop::new(Vec3::ZERO, Vec3::Z, 1.0, 1.0, 8).unwrap();
        let r = 400.0;
        let a = loop_vector_potential(&lp, Vec3::new(r, 0.0, 0.0));
        assert_relative_eq!(a.y, PI / (4.0 * PI * r * r), max_relative = 1e-5);
    }
}
