//! Frequency unit convention.
//!
//! Public frequencies are ordinary frequencies `ν = ω/2π` expressed in THz.
//! Formulas written in angular frequency go through [`Frequency::to_angular`]
//! and [`Frequency::from_angular`], the only place the `2π·10¹²` factor lives.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

const RAD_PER_S_PER_THZ: f64 = 2.0 * std::f64::consts::PI * 1.0e12;

/// Ordinary frequency in THz.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Frequency(f64);

impl Frequency {
    pub const ZERO: Frequency = Frequency(0.0);

    pub const fn from_thz(thz: f64) -> Self {
        Frequency(thz)
    }

    pub const fn thz(self) -> f64 {
        self.0
    }

    /// Angular frequency in rad/s.
    pub fn to_angular(self) -> f64 {
        self.0 * RAD_PER_S_PER_THZ
    }

    /// Builds a frequency from an angular frequency in rad/s.
    pub fn from_angular(rad_per_s: f64) -> Self {
        Frequency(rad_per_s / RAD_PER_S_PER_THZ)
    }

    /// Frequency in Hz.
    pub fn hz(self) -> f64 {
        self.0 * 1.0e12
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn abs(self) -> Self {
        Frequency(self.0.abs())
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} THz", self.0)
    }
}

impl Add for Frequency {
    type Output = Frequency;
    fn add(self, rhs: Frequency) -> Frequency {
        Frequency(self.0 + rhs.0)
    }
}

impl Sub for Frequency {
    type Output = Frequency;
    fn sub(self, rhs: Frequency) -> Frequency {
        Frequency(self.0 - rhs.0)
    }
}

impl Neg for Frequency {
    type Output = Frequency;
    fn neg(self) -> Frequency {
        Frequency(-self.0)
    }
}

impl Mul<f64> for Frequency {
    type Output = Frequency;
    fn mul(self, rhs: f64) -> Frequency {
        Frequency(self.0 * rhs)
    }
}

impl Div<f64> for Frequency {
    type Output = Frequency;
    fn div(self, rhs: f64) -> Frequency {
        Frequency(self.0 / rhs)
    }
}

/// Ratio of two frequencies.
impl Div for Frequency {
    type Output = f64;
    fn div(self, rhs: Frequency) -> f64 {
        self.0 / rhs.0
    }
}
