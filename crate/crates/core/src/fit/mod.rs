//! Coupling-strength fits of Hopfield branches to peak lists.
//!
//! The objective is `Σ wᵢ (νᵢ − ν_branch(Bᵢ))²` with every peak re-assigned
//! to its nearest branch (or to its hinted branch) on each evaluation. It is
//! minimised with a bounded Nelder–Mead simplex on the unit box spanned by
//! the parameter bounds, so results do not depend on the units of the free
//! parameters.

mod nelder_mead;

pub use nelder_mead::{minimize, Minimum, NelderMeadOptions};

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::eigen;
use crate::error::{Error, Result};
use crate::hopfield::{positive_branches, BranchLabel, CouplingSet, PolaritonSpectrum};
use crate::physics::SampleParams;
use crate::units::Frequency;

/// Objective value returned when the model cannot be evaluated (THz²).
pub const FAILURE_PENALTY: f64 = 1e6;

/// Convergence threshold on the spread of predicted branch frequencies
/// across the simplex (THz).
pub const DEFAULT_SPREAD_TOLERANCE: f64 = 1e-6;

/// One measured or simulated peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakPoint {
    /// Field (T).
    pub field: f64,
    /// Frequency (THz).
    pub freq: f64,
    pub weight: f64,
    pub label: Option<BranchLabel>,
}

impl PeakPoint {
    pub fn new(field: f64, freq: f64) -> Self {
        PeakPoint {
            field,
            freq,
            weight: 1.0,
            label: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakDataset {
    points: Vec<PeakPoint>,
}

impl PeakDataset {
    pub fn new(points: Vec<PeakPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("peak dataset is empty"));
        }
        for (i, p) in points.iter().enumerate() {
            if !(p.field.is_finite() && p.freq.is_finite() && p.weight.is_finite()) {
                return Err(Error::domain(format!("peak {i} has a non-finite value")));
            }
            if p.field < 0.0 || p.freq <= 0.0 || p.weight < 0.0 {
                return Err(Error::domain(format!(
                    "peak {i} needs B >= 0, freq > 0 and weight >= 0 (got {}, {}, {})",
                    p.field, p.freq, p.weight
                )));
            }
        }
        Ok(PeakDataset { points })
    }

    pub fn points(&self) -> &[PeakPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn field_range(&self) -> (f64, f64) {
        self.points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.field), hi.max(p.field)))
    }

    pub fn set_weight(&mut self, index: usize, weight: f64) -> Result<()> {
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::domain(format!("weight must be >= 0 (got {weight})")));
        }
        self.points[index].weight = weight;
        Ok(())
    }
}

/// A peak matched to a branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Assignment {
    pub label: BranchLabel,
    /// Branch frequency at the peak's field (THz).
    pub branch_freq: f64,
    /// `ν_peak − ν_branch` (THz).
    pub residual: f64,
    /// Another branch lies within twice the resolution of the chosen one.
    pub ambiguous: bool,
}

/// Pick a branch from `(label, freq)` candidates sorted ascending in frequency.
fn assign_point(point: &PeakPoint, branches: &[(BranchLabel, f64)], resolution: f64) -> Result<Assignment> {
    if let Some(label) = point.label {
        let (_, f) = branches.iter().copied().find(|(l, _)| *l == label).ok_or_else(|| {
            Error::Assignment(format!(
                "peak ({} T, {} THz) is hinted as {label}, which does not exist there",
                point.field, point.freq
            ))
        })?;
        return Ok(Assignment {
            label,
            branch_freq: f,
            residual: point.freq - f,
            ambiguous: false,
        });
    }
    let mut best: Option<(BranchLabel, f64, f64)> = None;
    let mut second = f64::INFINITY;
    for &(label, f) in branches {
        let d = (point.freq - f).abs();
        match best {
            // Strict comparison keeps the lower branch on ties.
            Some((_, _, bd)) if d >= bd => second = second.min(d),
            Some((_, _, bd)) => {
                second = second.min(bd);
                best = Some((label, f, d));
            }
            None => best = Some((label, f, d)),
        }
    }
    let (label, f, d) = best.ok_or_else(|| {
        Error::Assignment(format!("no branches at {} T", point.field))
    })?;
    Ok(Assignment {
        label,
        branch_freq: f,
        residual: point.freq - f,
        ambiguous: second - d <= 2.0 * resolution,
    })
}

/// Assign every peak to a branch of `spectrum` at the nearest sweep field.
///
/// Peaks outside the swept field range, or further than one grid step from
/// the nearest sweep field, are rejected. Unhinted peaks go to the nearest
/// branch; ties go to the lower branch. An assignment is flagged ambiguous
/// when the runner-up branch is within `2·resolution` (THz) of the winner's
/// distance.
pub fn assign_branches(peaks: &PeakDataset, spectrum: &PolaritonSpectrum, resolution: f64) -> Result<Vec<Assignment>> {
    let fields = spectrum.fields();
    let (first, last) = match (fields.first(), fields.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(Error::Assignment("spectrum is empty".into())),
    };
    let step = fields.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let slack = 1e-9 * (1.0 + last.abs());
    peaks
        .points
        .iter()
        .map(|p| {
            if p.field < first - slack || p.field > last + slack {
                return Err(Error::Assignment(format!(
                    "peak ({} T, {} THz) lies outside the field range [{first}, {last}] T",
                    p.field, p.freq
                )));
            }
            let idx = fields
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - p.field).abs().total_cmp(&(b.1 - p.field).abs()))
                .map(|(i, _)| i)
                .unwrap_or(0);
            if (fields[idx] - p.field).abs() > step + slack {
                return Err(Error::Assignment(format!(
                    "peak ({} T, {} THz) is more than one grid step from the sweep",
                    p.field, p.freq
                )));
            }
            let mut branches: Vec<(BranchLabel, f64)> = spectrum.points[idx]
                .branches
                .iter()
                .map(|b| (b.label, b.frequency.thz()))
                .collect();
            branches.sort_by(|a, b| a.1.total_cmp(&b.1));
            assign_point(p, &branches, resolution)
        })
        .collect()
}

/// A quantity the fit may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FreeParam {
    /// CR coupling `g`.
    Cr,
    /// Coupling `g_n` of one MP mode.
    Mp(u32),
    /// One value shared by every MP coupling.
    SharedMp,
    /// Cavity frequency `ν₀` (THz).
    CavityFrequency,
    /// `m*/m₀`.
    MassRatio,
    /// Background relative permittivity.
    Permittivity,
}

impl FreeParam {
    pub fn is_coupling(self) -> bool {
        matches!(self, FreeParam::Cr | FreeParam::Mp(_) | FreeParam::SharedMp)
    }
}

impl fmt::Display for FreeParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeParam::Cr => write!(f, "g"),
            FreeParam::Mp(n) => write!(f, "g{n}"),
            FreeParam::SharedMp => write!(f, "g_mp"),
            FreeParam::CavityFrequency => write!(f, "nu0"),
            FreeParam::MassRatio => write!(f, "mass_ratio"),
            FreeParam::Permittivity => write!(f, "eps_r"),
        }
    }
}

/// Units of coupling parameters inside a [`FitProblem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingScale {
    /// THz.
    #[default]
    Absolute,
    /// Fractions of the cavity frequency.
    Normalized,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub param: FreeParam,
    pub lower: f64,
    pub upper: f64,
    pub initial: f64,
}

impl ParamSpec {
    pub fn new(param: FreeParam, lower: f64, upper: f64, initial: f64) -> Self {
        ParamSpec {
            param,
            lower,
            upper,
            initial,
        }
    }

    fn normalize(&self, v: f64) -> f64 {
        (v - self.lower) / (self.upper - self.lower)
    }

    fn denormalize(&self, u: f64) -> f64 {
        self.lower + u * (self.upper - self.lower)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitProblem {
    /// Sample values used for everything not being fitted.
    pub sample: SampleParams,
    /// Couplings used for everything not being fitted.
    pub couplings: CouplingSet,
    pub free: Vec<ParamSpec>,
    pub scale: CouplingScale,
    pub options: NelderMeadOptions,
    /// Largest difference (THz) between the branch frequencies predicted by
    /// any vertex and by the best vertex at which the fit stops.
    pub tolerance: f64,
    /// Frequency resolution (THz) for ambiguity flags.
    pub resolution: f64,
}

impl FitProblem {
    pub fn new(sample: SampleParams, couplings: CouplingSet, free: Vec<ParamSpec>) -> Result<Self> {
        let p = FitProblem {
            sample,
            couplings,
            free,
            scale: CouplingScale::Absolute,
            options: NelderMeadOptions::default(),
            tolerance: DEFAULT_SPREAD_TOLERANCE,
            resolution: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_scale(mut self, scale: CouplingScale) -> Self {
        self.scale = scale;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.sample.validate()?;
        self.couplings.validate()?;
        if self.free.is_empty() {
            return Err(Error::config("fit needs at least one free parameter"));
        }
        for (i, spec) in self.free.iter().enumerate() {
            let name = spec.param;
            if self.free[..i].iter().any(|s| s.param == name) {
                return Err(Error::config(format!("free parameter {name} listed twice")));
            }
            if !(spec.lower.is_finite() && spec.upper.is_finite() && spec.lower < spec.upper) {
                return Err(Error::config(format!(
                    "bounds of {name} must be finite with lower < upper (got [{}, {}])",
                    spec.lower, spec.upper
                )));
            }
            if !(spec.initial >= spec.lower && spec.initial <= spec.upper) {
                return Err(Error::config(format!(
                    "initial {name} = {} lies outside [{}, {}]",
                    spec.initial, spec.lower, spec.upper
                )));
            }
            match name {
                FreeParam::Mp(n) if !self.couplings.mp_couplings.contains_key(&n) => {
                    return Err(Error::config(format!("free parameter {name} has no matching MP mode")));
                }
                FreeParam::SharedMp if self.couplings.mp_couplings.is_empty() => {
                    return Err(Error::config("shared MP coupling requested without MP modes"));
                }
                _ => {}
            }
        }
        let shared = self.free.iter().any(|s| s.param == FreeParam::SharedMp);
        if shared && self.free.iter().any(|s| matches!(s.param, FreeParam::Mp(_))) {
            return Err(Error::config("shared MP coupling cannot be combined with per-mode MP couplings"));
        }
        if !(self.tolerance >= 0.0) || !(self.resolution >= 0.0) {
            return Err(Error::config("fit tolerance and resolution must be >= 0"));
        }
        Ok(())
    }

    /// Sample and couplings with `values` (in problem units) substituted.
    pub fn model(&self, values: &[f64]) -> Result<(SampleParams, CouplingSet)> {
        if values.len() != self.free.len() {
            return Err(Error::domain(format!(
                "expected {} parameter values, got {}",
                self.free.len(),
                values.len()
            )));
        }
        let mut s = self.sample.clone();
        let mut c = self.couplings.clone();
        let lookup = |p: FreeParam| self.free.iter().position(|f| f.param == p).map(|i| values[i]);
        // The cavity frequency goes first so normalised couplings pick it up.
        if let Some(v) = lookup(FreeParam::CavityFrequency) {
            c.cavity_frequency = Frequency::from_thz(v);
        }
        let to_coupling = |v: f64| match self.scale {
            CouplingScale::Absolute => Frequency::from_thz(v),
            CouplingScale::Normalized => c.cavity_frequency * v,
        };
        let mut updates: Vec<(FreeParam, Frequency)> = Vec::new();
        for (spec, &v) in self.free.iter().zip(values) {
            match spec.param {
                FreeParam::Cr | FreeParam::Mp(_) | FreeParam::SharedMp => updates.push((spec.param, to_coupling(v))),
                FreeParam::MassRatio => s.effective_mass_ratio = v,
                FreeParam::Permittivity => s.rel_permittivity = v,
                FreeParam::CavityFrequency => {}
            }
        }
        for (p, g) in updates {
            match p {
                FreeParam::Cr => c.cr_coupling = g,
                FreeParam::Mp(n) => {
                    c.mp_couplings.insert(n, g);
                }
                FreeParam::SharedMp => c.mp_couplings.values_mut().for_each(|v| *v = g),
                _ => {}
            }
        }
        s.validate()?;
        c.validate()?;
        Ok((s, c))
    }
}

/// Assignments of every peak against the model evaluated at its exact field.
pub fn assign_model(peaks: &PeakDataset, sample: &SampleParams, couplings: &CouplingSet, resolution: f64) -> Result<Vec<Assignment>> {
    let mut cache: BTreeMap<u64, Vec<(BranchLabel, f64)>> = BTreeMap::new();
    peaks
        .points
        .iter()
        .map(|p| {
            let branches = match cache.entry(p.field.to_bits()) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => e.insert(
                    positive_branches(couplings, p.field, sample, eigen::DEFAULT_TOLERANCE)?
                        .into_iter()
                        .enumerate()
                        .map(|(i, (f, _))| (BranchLabel::from_rank(i), f.thz()))
                        .collect(),
                ),
            };
            assign_point(p, branches, resolution)
        })
        .collect()
}

fn weighted_sum(peaks: &PeakDataset, assignments: &[Assignment]) -> f64 {
    peaks
        .points
        .iter()
        .zip(assignments)
        .map(|(p, a)| p.weight * a.residual * a.residual)
        .sum()
}

/// `Σ w (ν_peak − ν_branch)²` (THz²) at `values` (problem units).
///
/// Model failures are logged and mapped to [`FAILURE_PENALTY`].
pub fn objective(problem: &FitProblem, peaks: &PeakDataset, values: &[f64]) -> f64 {
    evaluate(problem, peaks, values).0
}

/// Objective plus the assigned branch frequencies (empty on failure).
fn evaluate(problem: &FitProblem, peaks: &PeakDataset, values: &[f64]) -> (f64, Vec<f64>) {
    let evaluated = problem
        .model(values)
        .and_then(|(s, c)| assign_model(peaks, &s, &c, problem.resolution));
    match evaluated {
        Ok(a) => (weighted_sum(peaks, &a), a.iter().map(|a| a.branch_freq).collect()),
        Err(e) => {
            log::warn!("objective evaluation failed at {values:?}: {e}");
            (FAILURE_PENALTY, Vec::new())
        }
    }
}

fn prediction_spread(best: &[f64], other: &[f64]) -> f64 {
    if best.len() != other.len() || best.is_empty() {
        return f64::INFINITY;
    }
    best.iter().zip(other).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Best values in problem units, in the order of `FitProblem::free`.
    pub params: Vec<(FreeParam, f64)>,
    pub sample: SampleParams,
    pub couplings: CouplingSet,
    /// Unweighted RMS of the per-point residuals (THz).
    pub residual_rms: f64,
    pub assignments: Vec<Assignment>,
    pub iterations: usize,
    pub converged: bool,
}

impl FitResult {
    pub fn value(&self, param: FreeParam) -> Option<f64> {
        self.params.iter().find(|(p, _)| *p == param).map(|&(_, v)| v)
    }

    pub fn per_point_residuals(&self) -> Vec<f64> {
        self.assignments.iter().map(|a| a.residual).collect()
    }
}

/// Bounded Nelder–Mead fit of the free parameters to `peaks`.
pub fn fit(problem: &FitProblem, peaks: &PeakDataset) -> Result<FitResult> {
    problem.validate()?;
    let to_values = |u: &[f64]| -> Vec<f64> { problem.free.iter().zip(u).map(|(s, &x)| s.denormalize(x)).collect() };
    let start: Vec<f64> = problem.free.iter().map(|s| s.normalize(s.initial)).collect();
    let min = minimize(
        |u| evaluate(problem, peaks, &to_values(u)),
        &start,
        &problem.options,
        |a: &Vec<f64>, b: &Vec<f64>| prediction_spread(a, b),
        problem.tolerance,
    );
    let values = to_values(&min.point);
    let (sample, couplings) = problem.model(&values)?;
    let assignments = assign_model(peaks, &sample, &couplings, problem.resolution)?;
    let residual_rms =
        (assignments.iter().map(|a| a.residual * a.residual).sum::<f64>() / assignments.len() as f64).sqrt();
    if !min.converged {
        log::warn!("fit stopped after {} iterations without converging", min.iterations);
    }
    Ok(FitResult {
        params: problem.free.iter().map(|s| s.param).zip(values).collect(),
        sample,
        couplings,
        residual_rms,
        assignments,
        iterations: min.iterations,
        converged: min.converged,
    })
}

/// Photon weight below which [`synthetic_peaks`] treats a branch as dark.
pub const DEFAULT_MIN_PHOTON_WEIGHT: f64 = 0.03;

/// Settings for self-generated peak lists.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    /// Fields (T) at which peaks are generated.
    pub fields: Vec<f64>,
    /// Standard deviation of the multiplicative Gaussian frequency noise.
    pub relative_noise: f64,
    pub seed: u64,
    /// Branches with a smaller photon weight `|w|²` are omitted.
    pub min_photon_weight: f64,
}

/// Peaks on the model branches, optionally perturbed by seeded noise.
pub fn synthetic_peaks(sample: &SampleParams, couplings: &CouplingSet, spec: &SyntheticSpec) -> Result<PeakDataset> {
    if !(spec.relative_noise >= 0.0 && spec.relative_noise.is_finite()) {
        return Err(Error::domain(format!("noise must be >= 0 (got {})", spec.relative_noise)));
    }
    let normal = Normal::new(0.0, spec.relative_noise).map_err(|e| Error::domain(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut points = Vec::new();
    for &b in &spec.fields {
        for (f, coeffs) in positive_branches(couplings, b, sample, eigen::DEFAULT_TOLERANCE)? {
            if coeffs.photon_weight() < spec.min_photon_weight {
                continue;
            }
            let noise = if spec.relative_noise > 0.0 { normal.sample(&mut rng) } else { 0.0 };
            points.push(PeakPoint::new(b, f.thz() * (1.0 + noise)));
        }
    }
    PeakDataset::new(points)
}
