//! Normal-incidence characteristic-matrix solver.
//!
//! Each layer of thickness `t` and index `n = √ε` (branch `Im n ≥ 0`, decaying
//! waves under `e^{−iωt}`) contributes
//!
//! ```text
//! M = ┌ cos δ        −i sin δ / n ┐ ,   δ = 2π ν n t / c
//!     └ −i n sin δ    cos δ       ┘
//! ```
//!
//! and `[B, C]ᵀ = M₁ M₂ ⋯ [1, n_s]ᵀ` gives `r = (n₀B − C)/(n₀B + C)`,
//! `t = 2n₀/(n₀B + C)`.

use num_complex::Complex64;

use super::permittivity::PermittivityModel;
use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::units::Frequency;

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    /// Thickness (m).
    pub thickness: f64,
    pub model: PermittivityModel,
}

impl Layer {
    pub fn new(thickness: f64, model: PermittivityModel) -> Self {
        Layer { thickness, model }
    }
}

/// Layers in order of incidence, between identical semi-infinite ambients.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerStack {
    pub layers: Vec<Layer>,
    pub ambient: PermittivityModel,
}

impl LayerStack {
    pub fn new(layers: Vec<Layer>, ambient: PermittivityModel) -> Result<Self> {
        let stack = LayerStack { layers, ambient };
        stack.validate()?;
        Ok(stack)
    }

    /// Stack in vacuum.
    pub fn in_vacuum(layers: Vec<Layer>) -> Result<Self> {
        Self::new(layers, PermittivityModel::real(1.0))
    }

    pub fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::config("layer stack needs at least one layer"));
        }
        for (i, layer) in self.layers.iter().enumerate() {
            if !(layer.thickness.is_finite() && layer.thickness > 0.0) {
                return Err(Error::config(format!(
                    "layer {i} thickness must be > 0 (got {})",
                    layer.thickness
                )));
            }
            layer.model.validate()?;
        }
        self.ambient.validate()
    }

    pub fn reversed(&self) -> LayerStack {
        LayerStack {
            layers: self.layers.iter().rev().cloned().collect(),
            ambient: self.ambient.clone(),
        }
    }

    pub fn total_thickness(&self) -> f64 {
        self.layers.iter().map(|l| l.thickness).sum()
    }
}

/// Power transmittance and reflectance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackResponse {
    pub transmittance: f64,
    pub reflectance: f64,
}

impl StackResponse {
    pub fn absorptance(&self) -> f64 {
        1.0 - self.transmittance - self.reflectance
    }
}

/// Refractive index on the `Im n ≥ 0` branch.
fn index(eps: Complex64) -> Complex64 {
    let n = eps.sqrt();
    if n.im < 0.0 || (n.im == 0.0 && n.re < 0.0) {
        -n
    } else {
        n
    }
}

pub fn transfer_matrix_transmittance(stack: &LayerStack, freq: Frequency) -> Result<StackResponse> {
    if !(freq.is_finite() && freq.thz() > 0.0) {
        return Err(Error::domain(format!("frequency must be > 0 (got {})", freq.thz())));
    }
    let ambient = stack.ambient.evaluate(freq)?;
    if !(ambient.im == 0.0 && ambient.re > 0.0) {
        return Err(Error::domain(format!(
            "ambient permittivity must be real and positive (got {ambient})"
        )));
    }
    let n0 = Complex64::new(ambient.re.sqrt(), 0.0);
    let k0 = 2.0 * std::f64::consts::PI * freq.hz() / SPEED_OF_LIGHT;

    let (mut m11, mut m12, mut m21, mut m22) = (
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    );
    for layer in &stack.layers {
        let n = index(layer.model.evaluate(freq)?);
        let delta = n * k0 * layer.thickness;
        let (cos, sin) = (delta.cos(), delta.sin());
        let minus_i = Complex64::new(0.0, -1.0);
        let (a11, a12, a21, a22) = (cos, minus_i * sin / n, minus_i * n * sin, cos);
        (m11, m12, m21, m22) = (
            m11 * a11 + m12 * a21,
            m11 * a12 + m12 * a22,
            m21 * a11 + m22 * a21,
            m21 * a12 + m22 * a22,
        );
    }
    let b = m11 + m12 * n0;
    let c = m21 + m22 * n0;
    let denom = n0 * b + c;
    if !(denom.norm() > 0.0) || !denom.re.is_finite() || !denom.im.is_finite() {
        return Err(Error::Numerical(format!(
            "singular transfer matrix at {} THz",
            freq.thz()
        )));
    }
    let r = (n0 * b - c) / denom;
    let t = 2.0 * n0 / denom;
    Ok(StackResponse {
        transmittance: t.norm_sqr(),
        reflectance: r.norm_sqr(),
    })
}
