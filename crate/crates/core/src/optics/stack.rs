//! Fabry–Pérot cavity used to model the slot resonator:
//! vacuum | Au | GaAs | QW | GaAs | Au | vacuum.

use super::permittivity::{Gyrotropic2deg, PermittivityModel, Polarization};
use super::transfer::{Layer, LayerStack};
use crate::error::{Error, Result};
use crate::hopfield::CouplingSet;
use crate::physics::SampleParams;
use crate::units::Frequency;

/// How the configured GaAs spacer value is read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaasValue {
    Permittivity(f64),
    RefractiveIndex(f64),
}

impl GaasValue {
    pub fn permittivity(self) -> f64 {
        match self {
            GaasValue::Permittivity(eps) => eps,
            GaasValue::RefractiveIndex(n) => n * n,
        }
    }
}

/// Geometry and mirror parameters of the cavity stack.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityGeometry {
    /// Gold mirror thickness (m).
    pub gold_thickness: f64,
    pub gold_plasma: Frequency,
    pub gold_scattering: Frequency,
    /// Thickness of each GaAs spacer (m).
    pub gaas_thickness: f64,
    pub gaas: GaasValue,
    /// `L_eff` (m).
    pub effective_length: f64,
}

impl CavityGeometry {
    /// 10 nm gold (ν_pl = 2180 THz, γ = 6.45 THz), two 22.35 µm spacers with
    /// the value 3.6 read as a permittivity, `L_eff = 84.2 µm`.
    pub fn fabry_perot_default() -> Self {
        CavityGeometry {
            gold_thickness: 10e-9,
            gold_plasma: Frequency::from_thz(2180.0),
            gold_scattering: Frequency::from_thz(6.45),
            gaas_thickness: 22.35e-6,
            gaas: GaasValue::Permittivity(3.6),
            effective_length: 84.2e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("gold_thickness", self.gold_thickness),
            ("gold_plasma", self.gold_plasma.thz()),
            ("gold_scattering", self.gold_scattering.thz()),
            ("gaas_thickness", self.gaas_thickness),
            ("gaas permittivity", self.gaas.permittivity()),
            ("effective_length", self.effective_length),
        ];
        for (name, v) in checks {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("{name} must be > 0 (got {v})")));
            }
        }
        Ok(())
    }

    fn gold(&self) -> Layer {
        Layer::new(
            self.gold_thickness,
            PermittivityModel::DrudeMetal {
                plasma: self.gold_plasma,
                scattering: self.gold_scattering,
            },
        )
    }

    fn spacer(&self) -> Layer {
        Layer::new(self.gaas_thickness, PermittivityModel::real(self.gaas.permittivity()))
    }

    /// Full stack with the quantum well at field `field`.
    pub fn stack(
        &self,
        sample: &SampleParams,
        couplings: &CouplingSet,
        field: f64,
        polarization: Polarization,
    ) -> Result<LayerStack> {
        self.validate()?;
        let qw = Layer::new(
            sample.qw_thickness,
            PermittivityModel::Gyrotropic2deg(Box::new(Gyrotropic2deg {
                sample: sample.clone(),
                couplings: couplings.clone(),
                field,
                polarization,
                effective_length: self.effective_length,
            })),
        );
        LayerStack::in_vacuum(vec![self.gold(), self.spacer(), qw, self.spacer(), self.gold()])
    }

    /// Cavity without the electron gas (the QW replaced by its background).
    pub fn passive_stack(&self, sample: &SampleParams) -> Result<LayerStack> {
        self.validate()?;
        let qw = Layer::new(sample.qw_thickness, PermittivityModel::real(sample.rel_permittivity));
        LayerStack::in_vacuum(vec![self.gold(), self.spacer(), qw, self.spacer(), self.gold()])
    }
}
