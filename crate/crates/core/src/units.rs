//! SI ↔ natural Heaviside–Lorentz units (`c = ħ = ε₀ = 1`), with the meter kept as the
//! length unit. Times become light-meters, speeds fractions of `c`.

use serde::Deserialize;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const HBAR: f64 = 1.054_571_817e-34;
pub const EPSILON_0: f64 = 8.854_187_818_8e-12;
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum UnitSystem {
    Si,
    #[default]
    Natural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Length,
    Time,
    Speed,
    Charge,
    Current,
    Flux,
}

impl Quantity {
    /// Natural value per SI value.
    pub fn scale(self) -> f64 {
        let charge_unit = (EPSILON_0 * HBAR * SPEED_OF_LIGHT).sqrt();
        match self {
            Quantity::Length => 1.0,
            Quantity::Time => SPEED_OF_LIGHT,
            Quantity::Speed => 1.0 / SPEED_OF_LIGHT,
            Quantity::Charge => 1.0 / charge_unit,
            Quantity::Current => 1.0 / (charge_unit * SPEED_OF_LIGHT),
            Quantity::Flux => (EPSILON_0 * SPEED_OF_LIGHT / HBAR).sqrt(),
        }
    }
}

impl UnitSystem {
    pub fn to_natural(self, q: Quantity, value: f64) -> f64 {
        match self {
            UnitSystem::Si => value * q.scale(),
            UnitSystem::Natural => value,
        }
    }

    pub fn from_natural(self, q: Quantity, value: f64) -> f64 {
        match self {
            UnitSystem::Si => value / q.scale(),
            UnitSystem::Natural => value,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn electron_charge_is_root_four_pi_alpha() {
        let q = UnitSystem::Si.to_natural(Quantity::Charge, ELEMENTARY_CHARGE);
        let alpha = q * q / (4.0 * PI);
        assert_relative_eq!(1.0 / alpha, 137.035_999, max_relative = 1e-8);
    }

    #[test]
    fn flux_quantum_gives_two_pi() {
        let h_over_e = 2.0 * PI * HBAR / ELEMENTARY_CHARGE;
        let q = UnitSystem::Si.to_natural(Quantity::Charge, ELEMENTARY_CHARGE);
        let phi = UnitSystem::Si.to_natural(Quantity::Flux, h_over_e);
        assert_relative_eq!(q * phi, 2.0 * PI, max_relative = 1e-14);
    }

    #[test]
    fn microsecond_is_light_meters() {
        assert_relative_eq!(UnitSystem::Si.to_natural(Quantity::Time, 1e-6), 299.792458, max_relative = 1e-15);
        assert_eq!(UnitSystem::Natural.to_natural(Quantity::Time, 3.0), 3.0);
    }

    #[test]
    fn round_trip() {
        for q in [Quantity::Length, Quantity::Time, Quantity::Speed, Quantity::Charge, Quantity::Current, Quantity::Flux] {
            for x in [1e-19, 3.7, 2.5e8, -4.2e-15] {
                let back = UnitSystem::Si.from_natural(q, UnitSystem::Si.to_natural(q, x));
                assert_relative_eq!(back, x, max_relative = 1e-12);
            }
        }
    }
}
