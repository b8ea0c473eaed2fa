//! Physical constants in SI units (CODATA 2018).

/// Elementary charge (C).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Electron rest mass (kg).
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Vacuum permittivity (F/m).
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Reduced Planck constant (J·s).
pub const REDUCED_PLANCK: f64 = 1.054_571_817e-34;

/// The constant set as a value, for code that wants to pass it around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysConstants {
    pub elementary_charge: f64,
    pub electron_mass: f64,
    pub vacuum_permittivity: f64,
    pub speed_of_light: f64,
    pub reduced_planck: f64,
}

pub const CODATA_2018: PhysConstants = PhysConstants {
    elementary_charge: ELEMENTARY_CHARGE,
    electron_mass: ELECTRON_MASS,
    vacuum_permittivity: VACUUM_PERMITTIVITY,
    speed_of_light: SPEED_OF_LIGHT,
    reduced_planck: REDUCED_PLANCK,
};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_positive() {
        let c = CODATA_2018;
        for v in [
            c.elementary_charge,
            c.electron_mass,
            c.vacuum_permittivity,
            c.speed_of_light,
            c.reduced_planck,
        ] {
            assert!(v > 0.0 && v.is_finite());
        }
    }
}
