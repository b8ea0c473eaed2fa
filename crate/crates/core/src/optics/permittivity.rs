use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hopfield::CouplingSet;
use crate::physics::{self, SampleParams};
use crate::units::Frequency;

/// Circular polarization relative to the cyclotron motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Polarization {
    #[default]
    CrActive,
    CrInactive,
}

impl Polarization {
    fn sign(self) -> f64 {
        match self {
            Polarization::CrActive => 1.0,
            Polarization::CrInactive => -1.0,
        }
    }
}

/// Quantum-well layer response at a fixed field.
#[derive(Debug, Clone, PartialEq)]
pub struct Gyrotropic2deg {
    pub sample: SampleParams,
    pub couplings: CouplingSet,
    /// Field (T).
    pub field: f64,
    pub polarization: Polarization,
    /// Effective cavity length `L_eff` (m) linking plasma frequencies and couplings.
    pub effective_length: f64,
}

/// Relative permittivity of one layer, evaluated per frequency.
#[derive(Debug, Clone, PartialEq)]
pub enum PermittivityModel {
    Constant(Complex64),
    DrudeMetal { plasma: Frequency, scattering: Frequency },
    Gyrotropic2deg(Box<Gyrotropic2deg>),
}

impl PermittivityModel {
    pub fn real(eps: f64) -> Self {
        PermittivityModel::Constant(Complex64::new(eps, 0.0))
    }

    pub fn evaluate(&self, freq: Frequency) -> Result<Complex64> {
        match self {
            PermittivityModel::Constant(eps) => Ok(*eps),
            PermittivityModel::DrudeMetal { plasma, scattering } => Ok(drude_metal(*plasma, *scattering, freq)),
            PermittivityModel::Gyrotropic2deg(g) => qw_permittivity(
                &g.sample,
                &g.couplings,
                g.effective_length,
                g.field,
                freq,
                g.polarization,
            ),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PermittivityModel::Constant(eps) => {
                if eps.re.is_finite() && eps.im.is_finite() {
                    Ok(())
                } else {
                    Err(Error::config("constant permittivity must be finite"))
                }
            }
            PermittivityModel::DrudeMetal { plasma, scattering } => {
                if plasma.thz() > 0.0 && scattering.thz() > 0.0 && plasma.is_finite() && scattering.is_finite() {
                    Ok(())
                } else {
                    Err(Error::config("Drude plasma frequency and scattering rate must be > 0"))
                }
            }
            PermittivityModel::Gyrotropic2deg(g) => {
                g.sample.validate()?;
                g.couplings.validate()?;
                if !(g.effective_length.is_finite() && g.effective_length > 0.0) {
                    return Err(Error::config("effective cavity length must be > 0"));
                }
                if !(g.field.is_finite() && g.field >= 0.0) {
                    return Err(Error::config("field must be >= 0"));
                }
                Ok(())
            }
        }
    }
}

/// Plasma frequency `ν_pl` with `g² = ν_pl² d_QW / (ε_bg L_eff)`.
pub fn plasma_frequency_for_coupling(
    coupling: Frequency,
    rel_permittivity: f64,
    effective_length: f64,
    qw_thickness: f64,
) -> Result<Frequency> {
    if !(qw_thickness.is_finite() && qw_thickness > 0.0) {
        return Err(Error::config(format!("qw_thickness must be > 0 (got {qw_thickness})")));
    }
    if !(effective_length.is_finite() && effective_length > 0.0) {
        return Err(Error::config(format!("effective_length must be > 0 (got {effective_length})")));
    }
    Ok(coupling * (rel_permittivity * effective_length / qw_thickness).sqrt())
}

/// Relative permittivity of the 2DEG quantum well,
///
/// `ε = ε_bg − ν_pl²/(ν(ν − σν_c + iΓ)) − Σ_n ν_pl,n²/(ν(ν − σν_MP,n + iΓ_n))`
///
/// with `Γ = 1/(2πτ)`, `σ = ±1` for CR-active/inactive light and plasma
/// frequencies derived from the couplings. All frequencies in THz; `e^{−iωt}`
/// convention, so absorption shows up as `Im ε > 0`.
pub fn qw_permittivity(
    s: &SampleParams,
    c: &CouplingSet,
    effective_length: f64,
    field: f64,
    freq: Frequency,
    pol: Polarization,
) -> Result<Complex64> {
    let nu = freq.thz();
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::domain(format!("frequency must be > 0 (got {nu})")));
    }
    let eps_bg = s.rel_permittivity;
    let sigma = pol.sign();
    let pole = |plasma: Frequency, resonance: Frequency, lifetime: f64| {
        let gamma = Frequency::from_angular(1.0 / lifetime).thz();
        plasma.thz().powi(2) / (nu * Complex64::new(nu - sigma * resonance.thz(), gamma))
    };

    let plasma = plasma_frequency_for_coupling(c.cr_coupling, eps_bg, effective_length, s.qw_thickness)?;
    let mut eps = Complex64::new(eps_bg, 0.0) - pole(plasma, physics::cyclotron_frequency(field, s)?, s.cr_lifetime);
    for (&n, &g) in &c.mp_couplings {
        let plasma_n = plasma_frequency_for_coupling(g, eps_bg, effective_length, s.qw_thickness)?;
        let resonance = physics::slot_mode_frequency(n, field, s)?;
        eps -= pole(plasma_n, resonance, s.mp_lifetime(n));
    }
    Ok(eps)
}

/// Drude metal `ε = 1 − ν_pl²/(ν(ν + iγ))`.
pub fn drude_metal(plasma: Frequency, scattering: Frequency, freq: Frequency) -> Complex64 {
    let nu = freq.thz();
    Complex64::new(1.0, 0.0) - plasma.thz().powi(2) / (nu * Complex64::new(nu, scattering.thz()))
}
