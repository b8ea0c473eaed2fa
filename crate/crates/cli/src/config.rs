//! TOML run configuration.
//!
//! Keys carry their units in the name (`slot_width_um`, `ne_per_cm2`, …).
//! Loading resolves every derived default (CR lifetime from mobility,
//! normalised couplings to THz) so that [`Config::echo`] reproduces the
//! exact parameter set used by a run.

use std::collections::BTreeMap;
use std::path::Path;

use landau_core::fit::{CouplingScale, FitProblem, FreeParam, NelderMeadOptions, ParamSpec, DEFAULT_MIN_PHOTON_WEIGHT};
use landau_core::hopfield::{linspace, CouplingSet};
use landau_core::optics::{CavityGeometry, GaasValue, DEFAULT_PROMINENCE};
use landau_core::physics::{lifetime_from_mobility, DEFAULT_MP_LIFETIME};
use landau_core::{Frequency, SampleParams};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

const DEFAULT_MOBILITY_CM2: f64 = 1.2e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub sample: SampleSection,
    pub cavity: CavitySection,
    #[serde(default)]
    pub modes: ModesSection,
    #[serde(default)]
    pub couplings: CouplingsSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub fit: FitSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSection {
    pub ne_per_cm2: f64,
    pub mass_ratio: f64,
    pub eps_r: f64,
    pub slot_width_um: f64,
    #[serde(default = "default_qw_thickness")]
    pub qw_thickness_nm: f64,
    /// Used only when `cr_lifetime_ps` is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mobility_cm2_per_vs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cr_lifetime_ps: Option<f64>,
    #[serde(default = "default_mp_lifetime")]
    pub mp_lifetime_ps: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub mp_lifetimes_ps: BTreeMap<String, f64>,
}

fn default_qw_thickness() -> f64 {
    30.0
}

fn default_mp_lifetime() -> f64 {
    DEFAULT_MP_LIFETIME * 1e12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySection {
    pub frequency_thz: f64,
    #[serde(default = "default_effective_length")]
    pub effective_length_um: f64,
    #[serde(default = "default_gold_thickness")]
    pub gold_thickness_nm: f64,
    #[serde(default = "default_gold_plasma")]
    pub gold_plasma_thz: f64,
    #[serde(default = "default_gold_scattering")]
    pub gold_scattering_thz: f64,
    #[serde(default = "default_gaas_thickness")]
    pub gaas_thickness_um: f64,
    #[serde(default = "default_gaas_value")]
    pub gaas_value: f64,
    /// Read `gaas_value` as a refractive index rather than a permittivity.
    #[serde(default)]
    pub gaas_value_is_index: bool,
}

fn default_effective_length() -> f64 {
    84.2
}
fn default_gold_thickness() -> f64 {
    10.0
}
fn default_gold_plasma() -> f64 {
    2180.0
}
fn default_gold_scattering() -> f64 {
    6.45
}
fn default_gaas_thickness() -> f64 {
    22.35
}
fn default_gaas_value() -> f64 {
    3.6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesSection {
    pub mp: Vec<u32>,
}

impl Default for ModesSection {
    fn default() -> Self {
        ModesSection { mp: vec![1, 3] }
    }
}

/// A coupling shared by every MP mode, or one value per mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModeValues {
    Shared(f64),
    PerMode(BTreeMap<String, f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingsSection {
    /// `g` and `gn` are fractions of the cavity frequency when set.
    #[serde(default)]
    pub normalized: bool,
    #[serde(default)]
    pub g: f64,
    #[serde(default = "default_gn")]
    pub gn: ModeValues,
}

fn default_gn() -> ModeValues {
    ModeValues::Shared(0.0)
}

impl Default for CouplingsSection {
    fn default() -> Self {
        CouplingsSection {
            normalized: false,
            g: 0.0,
            gn: default_gn(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub b_min_t: f64,
    pub b_max_t: f64,
    pub b_count: usize,
    pub f_min_thz: f64,
    pub f_max_thz: f64,
    pub f_count: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            b_min_t: 0.05,
            b_max_t: 7.0,
            b_count: 200,
            f_min_thz: 0.2,
            f_max_thz: 1.6,
            f_count: 400,
        }
    }
}

impl SweepSection {
    pub fn fields(&self) -> Vec<f64> {
        linspace(self.b_min_t, self.b_max_t, self.b_count)
    }

    pub fn freqs(&self) -> Vec<f64> {
        linspace(self.f_min_thz, self.f_max_thz, self.f_count)
    }

    pub fn freq_step(&self) -> f64 {
        if self.f_count > 1 {
            (self.f_max_thz - self.f_min_thz) / (self.f_count - 1) as f64
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSection {
    /// Names: `g`, `gn` (shared MP coupling), `g1`, `g3`, …, `nu0`,
    /// `mass_ratio`, `eps_r`.
    pub free: Vec<String>,
    /// `[lower, upper]` per free parameter, in the units of `[couplings]`.
    #[serde(default)]
    pub bounds: BTreeMap<String, [f64; 2]>,
    /// Initial value per free parameter; defaults to the configured value.
    #[serde(default)]
    pub initial: BTreeMap<String, f64>,
    pub max_iterations: usize,
    pub tolerance_thz: f64,
    /// Relative Gaussian frequency noise for `--synthetic`.
    pub synthetic_noise: f64,
    pub min_photon_weight: f64,
    pub prominence: f64,
    pub max_peaks: usize,
}

impl Default for FitSection {
    fn default() -> Self {
        FitSection {
            free: vec!["g".into(), "gn".into()],
            bounds: BTreeMap::new(),
            initial: BTreeMap::new(),
            max_iterations: 2000,
            tolerance_thz: 1e-6,
            synthetic_noise: 0.005,
            min_photon_weight: DEFAULT_MIN_PHOTON_WEIGHT,
            prominence: DEFAULT_PROMINENCE,
            max_peaks: 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapFormat {
    Long,
    Matrix,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: String,
    pub map_format: MapFormat,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: ".".into(),
            map_format: MapFormat::Both,
        }
    }
}

fn positive(key: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!("{key} must be a finite number > 0 (got {v})")))
    }
}

fn non_negative(key: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!("{key} must be a finite number >= 0 (got {v})")))
    }
}

fn mode_key(section: &str, key: &str) -> Result<u32, CliError> {
    key.parse::<u32>()
        .ok()
        .filter(|n| n % 2 == 1)
        .ok_or_else(|| CliError::Config(format!("{section}.{key}: keys must be odd mode indices")))
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Config::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Parse, validate and resolve a configuration.
    pub fn parse(text: &str) -> Result<Config, CliError> {
        let raw: Config = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        raw.resolve()
    }

    fn resolve(mut self) -> Result<Config, CliError> {
        let s = &mut self.sample;
        positive("sample.ne_per_cm2", s.ne_per_cm2)?;
        positive("sample.mass_ratio", s.mass_ratio)?;
        positive("sample.eps_r", s.eps_r)?;
        positive("sample.slot_width_um", s.slot_width_um)?;
        positive("sample.qw_thickness_nm", s.qw_thickness_nm)?;
        positive("sample.mp_lifetime_ps", s.mp_lifetime_ps)?;
        if let Some(tau) = s.cr_lifetime_ps {
            positive("sample.cr_lifetime_ps", tau)?;
        } else {
            let mobility = s.mobility_cm2_per_vs.unwrap_or(DEFAULT_MOBILITY_CM2);
            positive("sample.mobility_cm2_per_vs", mobility)?;
            s.cr_lifetime_ps = Some(lifetime_from_mobility(mobility * 1e-4, s.mass_ratio) * 1e12);
        }
        s.mobility_cm2_per_vs = None;
        for (key, &tau) in &s.mp_lifetimes_ps {
            mode_key("sample.mp_lifetimes_ps", key)?;
            positive(&format!("sample.mp_lifetimes_ps.{key}"), tau)?;
        }

        let c = &self.cavity;
        positive("cavity.frequency_thz", c.frequency_thz)?;
        positive("cavity.effective_length_um", c.effective_length_um)?;
        positive("cavity.gold_thickness_nm", c.gold_thickness_nm)?;
        positive("cavity.gold_plasma_thz", c.gold_plasma_thz)?;
        positive("cavity.gold_scattering_thz", c.gold_scattering_thz)?;
        positive("cavity.gaas_thickness_um", c.gaas_thickness_um)?;
        positive("cavity.gaas_value", c.gaas_value)?;

        let modes = &self.modes.mp;
        for (i, &n) in modes.iter().enumerate() {
            if n % 2 == 0 {
                return Err(CliError::Config(format!("modes.mp: {n} is not an odd mode index")));
            }
            if modes[..i].contains(&n) {
                return Err(CliError::Config(format!("modes.mp: {n} listed twice")));
            }
        }

        let nu0 = self.cavity.frequency_thz;
        let unit = if self.couplings.normalized { nu0 } else { 1.0 };
        non_negative("couplings.g", self.couplings.g)?;
        let per_mode: BTreeMap<String, f64> = match &self.couplings.gn {
            ModeValues::Shared(v) => {
                non_negative("couplings.gn", *v)?;
                modes.iter().map(|n| (n.to_string(), v * unit)).collect()
            }
            ModeValues::PerMode(map) => {
                for (key, &v) in map {
                    let n = mode_key("couplings.gn", key)?;
                    if !modes.contains(&n) {
                        return Err(CliError::Config(format!("couplings.gn.{key}: mode {n} is not in modes.mp")));
                    }
                    non_negative(&format!("couplings.gn.{key}"), v)?;
                }
                modes
                    .iter()
                    .map(|n| {
                        map.get(&n.to_string())
                            .map(|v| (n.to_string(), v * unit))
                            .ok_or_else(|| CliError::Config(format!("couplings.gn: missing value for mode {n}")))
                    })
                    .collect::<Result<_, _>>()?
            }
        };

        let sw = &self.sweep;
        non_negative("sweep.b_min_t", sw.b_min_t)?;
        if !(sw.b_max_t.is_finite() && sw.b_max_t >= sw.b_min_t) {
            return Err(CliError::Config("sweep.b_max_t must be >= sweep.b_min_t".into()));
        }
        positive("sweep.f_min_thz", sw.f_min_thz)?;
        if !(sw.f_max_thz.is_finite() && sw.f_max_thz >= sw.f_min_thz) {
            return Err(CliError::Config("sweep.f_max_thz must be >= sweep.f_min_thz".into()));
        }
        for (key, count, lo, hi) in [
            ("sweep.b_count", sw.b_count, sw.b_min_t, sw.b_max_t),
            ("sweep.f_count", sw.f_count, sw.f_min_thz, sw.f_max_thz),
        ] {
            if count == 0 || (count > 1 && lo == hi) || (count == 1 && lo != hi) {
                return Err(CliError::Config(format!("{key} = {count} does not fit the range [{lo}, {hi}]")));
            }
        }

        let f = &mut self.fit;
        if f.free.is_empty() {
            return Err(CliError::Config("fit.free must list at least one parameter".into()));
        }
        for name in &f.free {
            parse_free(name, modes)?;
        }
        for key in f.bounds.keys().chain(f.initial.keys()) {
            if !f.free.contains(key) {
                return Err(CliError::Config(format!("fit: {key} has bounds or an initial value but is not free")));
            }
        }
        for (key, b) in f.bounds.iter_mut() {
            if !(b[0].is_finite() && b[1].is_finite() && b[0] < b[1]) {
                return Err(CliError::Config(format!("fit.bounds.{key} must be finite with lower < upper")));
            }
            if parse_free(key, modes)?.is_coupling() {
                b.iter_mut().for_each(|v| *v *= unit);
            }
        }
        for (key, v) in f.initial.iter_mut() {
            if !v.is_finite() {
                return Err(CliError::Config(format!("fit.initial.{key} must be finite")));
            }
            if parse_free(key, modes)?.is_coupling() {
                *v *= unit;
            }
        }
        if f.max_iterations == 0 {
            return Err(CliError::Config("fit.max_iterations must be >= 1".into()));
        }
        non_negative("fit.tolerance_thz", f.tolerance_thz)?;
        non_negative("fit.synthetic_noise", f.synthetic_noise)?;
        non_negative("fit.min_photon_weight", f.min_photon_weight)?;
        positive("fit.prominence", f.prominence)?;
        if f.max_peaks == 0 {
            return Err(CliError::Config("fit.max_peaks must be >= 1".into()));
        }

        self.couplings = CouplingsSection {
            normalized: false,
            g: self.couplings.g * unit,
            gn: ModeValues::PerMode(per_mode),
        };
        // Surface any remaining invariant violations from the model types.
        self.sample_params()?;
        self.coupling_set()?;
        self.geometry()?;
        self.fit_problem(false)?;
        Ok(self)
    }

    pub fn sample_params(&self) -> Result<SampleParams, CliError> {
        let s = &self.sample;
        let mut mp_lifetimes = BTreeMap::new();
        for (key, tau) in &s.mp_lifetimes_ps {
            mp_lifetimes.insert(mode_key("sample.mp_lifetimes_ps", key)?, tau * 1e-12);
        }
        let p = SampleParams {
            electron_density: s.ne_per_cm2 * 1e4,
            effective_mass_ratio: s.mass_ratio,
            rel_permittivity: s.eps_r,
            slot_width: s.slot_width_um * 1e-6,
            qw_thickness: s.qw_thickness_nm * 1e-9,
            cr_lifetime: s.cr_lifetime_ps.unwrap_or(f64::NAN) * 1e-12,
            mp_lifetime_default: s.mp_lifetime_ps * 1e-12,
            mp_lifetimes,
        };
        p.validate().map_err(|e| CliError::Config(format!("sample: {e}")))?;
        Ok(p)
    }

    /// Couplings in THz (resolved configs always hold absolute values).
    pub fn coupling_set(&self) -> Result<CouplingSet, CliError> {
        let unit = if self.couplings.normalized { self.cavity.frequency_thz } else { 1.0 };
        let mp = match &self.couplings.gn {
            ModeValues::Shared(v) => self.modes.mp.iter().map(|&n| (n, Frequency::from_thz(v * unit))).collect(),
            ModeValues::PerMode(map) => map
                .iter()
                .map(|(k, v)| Ok((mode_key("couplings.gn", k)?, Frequency::from_thz(v * unit))))
                .collect::<Result<_, CliError>>()?,
        };
        CouplingSet::new(
            Frequency::from_thz(self.cavity.frequency_thz),
            Frequency::from_thz(self.couplings.g * unit),
            mp,
        )
        .map_err(|e| CliError::Config(format!("couplings: {e}")))
    }

    pub fn geometry(&self) -> Result<CavityGeometry, CliError> {
        let c = &self.cavity;
        let g = CavityGeometry {
            gold_thickness: c.gold_thickness_nm * 1e-9,
            gold_plasma: Frequency::from_thz(c.gold_plasma_thz),
            gold_scattering: Frequency::from_thz(c.gold_scattering_thz),
            gaas_thickness: c.gaas_thickness_um * 1e-6,
            gaas: if c.gaas_value_is_index {
                GaasValue::RefractiveIndex(c.gaas_value)
            } else {
                GaasValue::Permittivity(c.gaas_value)
            },
            effective_length: c.effective_length_um * 1e-6,
        };
        g.validate().map_err(|e| CliError::Config(format!("cavity: {e}")))?;
        Ok(g)
    }

    /// Fit problem from `[fit]`; `shared_gn` replaces per-mode MP couplings
    /// by one shared parameter.
    pub fn fit_problem(&self, shared_gn: bool) -> Result<FitProblem, CliError> {
        let sample = self.sample_params()?;
        let couplings = self.coupling_set()?;
        let nu0 = self.cavity.frequency_thz;
        let mut names: Vec<String> = Vec::new();
        for name in &self.fit.free {
            let p = parse_free(name, &self.modes.mp)?;
            if p == FreeParam::SharedMp && self.modes.mp.is_empty() {
                continue;
            }
            let name = if shared_gn && matches!(p, FreeParam::Mp(_)) { "gn".to_string() } else { name.clone() };
            if !names.contains(&name) {
                names.push(name);
            }
        }
        let mut free = Vec::new();
        for name in &names {
            let p = parse_free(name, &self.modes.mp)?;
            let current = match p {
                FreeParam::Cr => couplings.cr_coupling.thz(),
                FreeParam::Mp(n) => couplings.mp_couplings[&n].thz(),
                FreeParam::SharedMp => {
                    let v: Vec<f64> = couplings.mp_couplings.values().map(|g| g.thz()).collect();
                    v.iter().sum::<f64>() / v.len().max(1) as f64
                }
                FreeParam::CavityFrequency => nu0,
                FreeParam::MassRatio => sample.effective_mass_ratio,
                FreeParam::Permittivity => sample.rel_permittivity,
            };
            let [lower, upper] = self.fit.bounds.get(name).copied().or_else(|| {
                // A shared parameter inherits bounds given for any single mode.
                (p == FreeParam::SharedMp)
                    .then(|| self.fit.bounds.iter().find(|(k, _)| k.starts_with('g') && k != &"g").map(|(_, b)| *b))
                    .flatten()
            }).unwrap_or_else(|| default_bounds(p, current, nu0));
            let initial = self
                .fit
                .initial
                .get(name)
                .copied()
                .or_else(|| {
                    (p == FreeParam::SharedMp)
                        .then(|| self.fit.initial.iter().find(|(k, _)| k.starts_with('g') && k != &"g").map(|(_, v)| *v))
                        .flatten()
                })
                .unwrap_or(current);
            free.push(ParamSpec::new(p, lower, upper, initial));
        }
        let mut problem = FitProblem::new(sample, couplings, free).map_err(|e| CliError::Config(format!("fit: {e}")))?;
        problem.scale = CouplingScale::Absolute;
        problem.options = NelderMeadOptions {
            max_iterations: self.fit.max_iterations,
            ..NelderMeadOptions::default()
        };
        problem.tolerance = self.fit.tolerance_thz;
        problem.resolution = self.sweep.freq_step();
        Ok(problem)
    }

    /// The resolved configuration as TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always serialisable")
    }

    /// The resolved configuration as `#`-prefixed comment lines.
    pub fn echo(&self) -> String {
        self.to_toml()
            .lines()
            .map(|l| if l.is_empty() { "#".to_string() } else { format!("# {l}") })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn default_bounds(p: FreeParam, current: f64, nu0: f64) -> [f64; 2] {
    match p {
        FreeParam::Cr | FreeParam::Mp(_) | FreeParam::SharedMp => [0.0, 0.5 * nu0],
        FreeParam::CavityFrequency | FreeParam::MassRatio | FreeParam::Permittivity => [0.8 * current, 1.2 * current],
    }
}

/// Free-parameter name to [`FreeParam`].
pub fn parse_free(name: &str, modes: &[u32]) -> Result<FreeParam, CliError> {
    let p = match name {
        "g" => FreeParam::Cr,
        "gn" => FreeParam::SharedMp,
        "nu0" => FreeParam::CavityFrequency,
        "mass_ratio" => FreeParam::MassRatio,
        "eps_r" => FreeParam::Permittivity,
        other => match other.strip_prefix('g').and_then(|n| n.parse::<u32>().ok()) {
            Some(n) if modes.contains(&n) => FreeParam::Mp(n),
            _ => {
                return Err(CliError::Config(format!(
                    "fit.free: unknown parameter {other:?} (expected g, gn, g<n> for a configured mode, nu0, mass_ratio or eps_r)"
                )))
            }
        },
    };
    Ok(p)
}
