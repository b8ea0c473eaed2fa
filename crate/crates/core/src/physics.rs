//! Bare matter-mode dispersions of a two-dimensional electron gas.
//!
//! * 2D plasmon in the long-wavelength limit: `ω_p(k)² = k e² n_e / (2 m* ε₀ ε_r)`
//! * cyclotron resonance: `ω_c = e B / m*`
//! * magnetoplasmon: `ω_MP(k)² = ω_p(k)² + ω_c²`
//!
//! A slot of width `d` supplies in-plane momenta `k = nπ/d` with odd `n`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE, VACUUM_PERMITTIVITY};
use crate::error::{Error, Result};
use crate::units::Frequency;

/// Default magnetoplasmon lifetime (s).
pub const DEFAULT_MP_LIFETIME: f64 = 1.2e-12;

/// Material and geometry parameters of the electron gas and the slot.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleParams {
    /// Sheet density `n_e` (m⁻²).
    pub electron_density: f64,
    /// `m*/m₀`.
    pub effective_mass_ratio: f64,
    /// Background relative permittivity `ε_r` (= `ε_bg`).
    pub rel_permittivity: f64,
    /// Slot width `d` (m).
    pub slot_width: f64,
    /// Quantum-well thickness `d_QW` (m). Only enters the optical permittivity.
    pub qw_thickness: f64,
    /// CR lifetime `τ` (s).
    pub cr_lifetime: f64,
    /// Lifetime used for every MP mode without an override (s).
    pub mp_lifetime_default: f64,
    /// Per-mode MP lifetimes `τ_n` (s), keyed by odd mode index.
    pub mp_lifetimes: BTreeMap<u32, f64>,
}

impl SampleParams {
    /// Experimental GaAs 2DEG: `n_e = 3.6×10¹¹ cm⁻²`, `m* = 0.076 m₀`,
    /// `ε_r = 6.98`, `d = 4 µm`, mobility `1.2×10⁶ cm²/(V·s)`.
    ///
    /// `d_QW` defaults to 30 nm; it is not a measured value.
    pub fn gaas_slot_sample() -> Self {
        let mass_ratio = 0.076;
        SampleParams {
            electron_density: 3.6e15,
            effective_mass_ratio: mass_ratio,
            rel_permittivity: 6.98,
            slot_width: 4.0e-6,
            qw_thickness: 30.0e-9,
            cr_lifetime: lifetime_from_mobility(120.0, mass_ratio),
            mp_lifetime_default: DEFAULT_MP_LIFETIME,
            mp_lifetimes: BTreeMap::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("electron_density", self.electron_density),
            ("effective_mass_ratio", self.effective_mass_ratio),
            ("rel_permittivity", self.rel_permittivity),
            ("slot_width", self.slot_width),
            ("qw_thickness", self.qw_thickness),
            ("cr_lifetime", self.cr_lifetime),
            ("mp_lifetime_default", self.mp_lifetime_default),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::config(format!("{name} must be finite and > 0 (got {value})")));
            }
        }
        for (&n, &tau) in &self.mp_lifetimes {
            check_odd_mode(n)?;
            if !(tau.is_finite() && tau > 0.0) {
                return Err(Error::config(format!("mp lifetime of mode {n} must be > 0 (got {tau})")));
            }
        }
        Ok(())
    }

    /// Effective mass `m*` (kg).
    pub fn effective_mass(&self) -> f64 {
        self.effective_mass_ratio * ELECTRON_MASS
    }

    /// Lifetime `τ_n` of MP mode `n` (s).
    pub fn mp_lifetime(&self, n: u32) -> f64 {
        self.mp_lifetimes.get(&n).copied().unwrap_or(self.mp_lifetime_default)
    }
}

/// Momentum relaxation time `τ = µ m*/e` for a mobility in m²/(V·s).
pub fn lifetime_from_mobility(mobility: f64, mass_ratio: f64) -> f64 {
    mobility * mass_ratio * ELECTRON_MASS / ELEMENTARY_CHARGE
}

pub(crate) fn check_odd_mode(n: u32) -> Result<()> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::domain(format!("mode index must be a positive odd integer (got {n})")));
    }
    Ok(())
}

fn check_momentum(k: f64) -> Result<()> {
    if !k.is_finite() || k < 0.0 {
        return Err(Error::domain(format!("in-plane momentum must be finite and >= 0 (got {k})")));
    }
    Ok(())
}

fn check_field(b: f64) -> Result<()> {
    if !b.is_finite() || b < 0.0 {
        return Err(Error::domain(format!("magnetic field must be finite and >= 0 (got {b})")));
    }
    Ok(())
}

fn plasmon_angular_sq(k: f64, s: &SampleParams) -> f64 {
    k * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE * s.electron_density
        / (2.0 * s.effective_mass() * VACUUM_PERMITTIVITY * s.rel_permittivity)
}

/// 2D plasma frequency at in-plane momentum `k` (m⁻¹).
pub fn plasmon_frequency(k: f64, s: &SampleParams) -> Result<Frequency> {
    check_momentum(k)?;
    Ok(Frequency::from_angular(plasmon_angular_sq(k, s).sqrt()))
}

/// Cyclotron frequency at field `b` (T).
pub fn cyclotron_frequency(b: f64, s: &SampleParams) -> Result<Frequency> {
    check_field(b)?;
    Ok(Frequency::from_angular(ELEMENTARY_CHARGE * b / s.effective_mass()))
}

/// Magnetoplasmon frequency at momentum `k` and field `b`.
pub fn magnetoplasmon_frequency(k: f64, b: f64, s: &SampleParams) -> Result<Frequency> {
    let p = plasmon_frequency(k, s)?.thz();
    let c = cyclotron_frequency(b, s)?.thz();
    Ok(Frequency::from_thz(p.hypot(c)))
}

/// In-plane momentum `nπ/d` supplied by a slot of width `d` (m) for odd `n`.
pub fn slot_momentum(n: u32, d: f64) -> Result<f64> {
    check_odd_mode(n)?;
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::domain(format!("slot width must be > 0 (got {d})")));
    }
    Ok(f64::from(n) * PI / d)
}

/// Magnetoplasmon frequency of slot mode `n` at field `b`.
pub fn slot_mode_frequency(n: u32, b: f64, s: &SampleParams) -> Result<Frequency> {
    magnetoplasmon_frequency(slot_momentum(n, s.slot_width)?, b, s)
}

/// Field at which the magnetoplasmon at momentum `k` reaches `target`.
///
/// `k = 0` gives the cyclotron zero-detuning field. Fails with
/// [`Error::NoSolution`] when `target` lies below the plasmon frequency.
pub fn zero_detuning_field(target: Frequency, k: f64, s: &SampleParams) -> Result<f64> {
    if !target.is_finite() {
        return Err(Error::domain("target frequency must be finite"));
    }
    let floor = plasmon_frequency(k, s)?;
    if target < floor {
        return Err(Error::NoSolution {
            target_thz: target.thz(),
            minimum_thz: floor.thz(),
        });
    }
    let target_sq = target.to_angular().powi(2);
    let cyclotron = (target_sq - plasmon_angular_sq(k, s)).max(0.0).sqrt();
    Ok(cyclotron * s.effective_mass() / ELEMENTARY_CHARGE)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SampleParams {
        SampleParams::gaas_slot_sample()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn plasmon_examples() {
        let s = sample();
        assert_eq!(plasmon_frequency(0.0, &s).unwrap().thz(), 0.0);
        // Independent evaluation with CODATA constants: 0.463509189 THz.
        let p1 = plasmon_frequency(PI / 4e-6, &s).unwrap().thz();
        assert!(rel(p1, 0.463_509_189) < 1e-8, "{p1}");
        let p3 = plasmon_frequency(3.0 * PI / 4e-6, &s).unwrap().thz();
        assert!(rel(p3, 0.802_821_465) < 1e-8, "{p3}");
        assert!(rel(p3, 3f64.sqrt() * p1) < 1e-14);
    }

    #[test]
    fn plasmon_rejects_bad_momentum() {
        let s = sample();
        assert!(matches!(plasmon_frequency(-1.0, &s), Err(Error::Domain(_))));
        assert!(matches!(plasmon_frequency(f64::NAN, &s), Err(Error::Domain(_))));
        assert!(matches!(plasmon_frequency(f64::INFINITY, &s), Err(Error::Domain(_))));
    }

    #[test]
    fn cyclotron_examples() {
        let s = sample();
        assert_eq!(cyclotron_frequency(0.0, &s).unwrap().thz(), 0.0);
        let full = cyclotron_frequency(2.51, &s).unwrap().thz();
        assert!((full - 0.9245).abs() < 1e-4, "{full}");
        let half = cyclotron_frequency(1.255, &s).unwrap().thz();
        assert!((half - 0.4622).abs() < 1e-4);
        assert!(rel(2.0 * half, full) < 1e-14);
        assert!(matches!(cyclotron_frequency(-0.1, &s), Err(Error::Domain(_))));
    }

    #[test]
    fn magnetoplasmon_limits() {
        let s = sample();
        let k = PI / 4e-6;
        assert_eq!(
            magnetoplasmon_frequency(k, 0.0, &s).unwrap(),
            plasmon_frequency(k, &s).unwrap()
        );
        assert_eq!(
            magnetoplasmon_frequency(0.0, 1.7, &s).unwrap(),
            cyclotron_frequency(1.7, &s).unwrap()
        );
        let mp = magnetoplasmon_frequency(k, 2.18, &s).unwrap().thz();
        assert!(rel(mp, 0.925) < 5e-3, "{mp}");
    }

    #[test]
    fn slot_momentum_examples() {
        assert!(rel(slot_momentum(1, 4e-6).unwrap(), 7.854e5) < 1e-4);
        assert!(rel(slot_momentum(3, 4e-6).unwrap(), 2.356e6) < 1e-4);
        assert!(matches!(slot_momentum(2, 4e-6), Err(Error::Domain(_))));
        assert!(matches!(slot_momentum(0, 4e-6), Err(Error::Domain(_))));
        assert!(matches!(slot_momentum(1, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn zero_detuning_examples() {
        let s = sample();
        let target = Frequency::from_thz(0.925);
        let cr = zero_detuning_field(target, 0.0, &s).unwrap();
        assert!((cr - 2.51).abs() < 0.01, "{cr}");
        let mp1 = zero_detuning_field(target, PI / 4e-6, &s).unwrap();
        assert!((mp1 - 2.17).abs() < 0.02, "{mp1}");
        let mp3 = zero_detuning_field(target, 3.0 * PI / 4e-6, &s).unwrap();
        assert!((mp3 - 1.25).abs() < 0.01, "{mp3}");
    }

    #[test]
    fn zero_detuning_below_floor() {
        let s = sample();
        let err = zero_detuning_field(Frequency::from_thz(0.3), PI / 4e-6, &s).unwrap_err();
        match err {
            Error::NoSolution { minimum_thz, .. } => assert!(rel(minimum_thz, 0.463_509_189) < 1e-8),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validation() {
        let mut s = sample();
        assert!(s.validate().is_ok());
        s.slot_width = -4e-6;
        assert!(matches!(s.validate(), Err(Error::Config(m)) if m.contains("slot_width")));
        let mut s = sample();
        s.mp_lifetimes.insert(2, 1e-12);
        assert!(s.validate().is_err());
    }

    #[test]
    fn lifetime_from_quoted_mobility() {
        let tau = sample().cr_lifetime;
        assert!((tau - 51.85e-12).abs() < 0.05e-12, "{tau}");
    }
}
