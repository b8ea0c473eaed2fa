//! Multimode Hopfield model of a cavity photon coupled to the cyclotron
//! resonance and to slot magnetoplasmon modes.
//!
//! The CR-active polariton operator `p = w a₊ + y a₋† + x b + Σ x_n c_n`
//! satisfies `[p, H] = ν p`, which turns into the eigenproblem of
//!
//! ```text
//! ┌ ν₀+D   −D     iḡ    iḡ₁  … ┐
//! │  D    −ν₀−D   iḡ    iḡ₁  … │
//! │ −iḡ    iḡ     ν_c   0    … │
//! │ −iḡ₁   iḡ₁    0    ν_MP₁ … │
//! └  ⋮      ⋮     ⋮     ⋮    ⋱ ┘
//! ```
//!
//! with field-dependent couplings `ḡ = g·√(ν_c/ν₀)`, `ḡ_n = g_n·√(ν_MPn/ν₀)`
//! and the diamagnetic coefficient `D = (g² + Σ g_n²)/ν₀`. All entries are
//! ordinary frequencies in THz, so eigenvalues are polariton frequencies.
//!
//! The matrix is η-pseudo-Hermitian (`η = diag(1, −1, 1, …)`), so for stable
//! lossless parameters the spectrum is real and the positive branches carry
//! the positive Bogoliubov norm `|w|² − |y|² + |x|² + Σ|x_n|² = 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::eigen::{self, ComplexMatrix};
use crate::error::{Error, Result};
use crate::physics::{self, SampleParams};
use crate::units::Frequency;

/// Relative threshold (in units of ν₀) above which an eigenvalue counts as a
/// positive-frequency branch.
pub const POSITIVE_BRANCH_THRESHOLD: f64 = 1e-9;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Bare cavity frequency plus the field-independent zero-detuning couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSet {
    /// `ν₀ = ω₀/2π`.
    pub cavity_frequency: Frequency,
    /// `g/2π` for the cyclotron resonance.
    pub cr_coupling: Frequency,
    /// `g_n/2π` per odd MP mode index.
    pub mp_couplings: BTreeMap<u32, Frequency>,
}

impl CouplingSet {
    pub fn new(
        cavity_frequency: Frequency,
        cr_coupling: Frequency,
        mp_couplings: BTreeMap<u32, Frequency>,
    ) -> Result<Self> {
        let set = CouplingSet {
            cavity_frequency,
            cr_coupling,
            mp_couplings,
        };
        set.validate()?;
        Ok(set)
    }

    /// Couplings given as fractions of the cavity frequency.
    pub fn normalized(cavity_thz: f64, cr_ratio: f64, mp_ratios: &[(u32, f64)]) -> Result<Self> {
        let nu0 = Frequency::from_thz(cavity_thz);
        Self::new(
            nu0,
            nu0 * cr_ratio,
            mp_ratios.iter().map(|&(n, r)| (n, nu0 * r)).collect(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let nu0 = self.cavity_frequency.thz();
        if !(nu0.is_finite() && nu0 > 0.0) {
            return Err(Error::config(format!("cavity frequency must be > 0 (got {nu0})")));
        }
        let g = self.cr_coupling.thz();
        if !(g.is_finite() && g >= 0.0) {
            return Err(Error::config(format!("CR coupling must be >= 0 (got {g})")));
        }
        for (&n, gn) in &self.mp_couplings {
            physics::check_odd_mode(n).map_err(|e| Error::config(e.to_string()))?;
            if !(gn.thz().is_finite() && gn.thz() >= 0.0) {
                return Err(Error::config(format!("MP{n} coupling must be >= 0 (got {})", gn.thz())));
            }
        }
        Ok(())
    }

    pub fn mode_indices(&self) -> Vec<u32> {
        self.mp_couplings.keys().copied().collect()
    }

    /// Number of matter modes (CR plus every MP mode).
    pub fn matter_mode_count(&self) -> usize {
        1 + self.mp_couplings.len()
    }

    /// Same cavity and modes with every coupling multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> CouplingSet {
        CouplingSet {
            cavity_frequency: self.cavity_frequency,
            cr_coupling: self.cr_coupling * factor,
            mp_couplings: self.mp_couplings.iter().map(|(&n, &g)| (n, g * factor)).collect(),
        }
    }
}

/// Field-dependent couplings `ḡ` and `ḡ_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveCouplings {
    pub cr: Frequency,
    pub mp: Vec<(u32, Frequency)>,
}

/// Bare matter frequencies at one field, in matrix order (CR first).
#[derive(Debug, Clone, PartialEq)]
pub struct MatterFrequencies {
    pub cyclotron: Frequency,
    pub magnetoplasmons: Vec<(u32, Frequency)>,
}

impl MatterFrequencies {
    pub fn at(c: &CouplingSet, b: f64, s: &SampleParams) -> Result<Self> {
        let cyclotron = physics::cyclotron_frequency(b, s)?;
        let magnetoplasmons = c
            .mp_couplings
            .keys()
            .map(|&n| physics::slot_mode_frequency(n, b, s).map(|f| (n, f)))
            .collect::<Result<_>>()?;
        Ok(MatterFrequencies {
            cyclotron,
            magnetoplasmons,
        })
    }

    pub fn all(&self) -> impl Iterator<Item = Frequency> + '_ {
        std::iter::once(self.cyclotron).chain(self.magnetoplasmons.iter().map(|&(_, f)| f))
    }
}

pub fn effective_couplings(c: &CouplingSet, b: f64, s: &SampleParams) -> Result<EffectiveCouplings> {
    let matter = MatterFrequencies::at(c, b, s)?;
    Ok(effective_from_matter(c, &matter))
}

fn effective_from_matter(c: &CouplingSet, matter: &MatterFrequencies) -> EffectiveCouplings {
    let nu0 = c.cavity_frequency;
    let scale = |g: Frequency, f: Frequency| g * (f / nu0).sqrt();
    EffectiveCouplings {
        cr: scale(c.cr_coupling, matter.cyclotron),
        mp: matter
            .magnetoplasmons
            .iter()
            .map(|&(n, f)| (n, scale(c.mp_couplings[&n], f)))
            .collect(),
    }
}

/// Diamagnetic coefficient `D = (g² + Σ g_n²)/ν₀`, independent of field.
pub fn diamagnetic_coefficient(c: &CouplingSet) -> Frequency {
    let sum_sq = c.cr_coupling.thz().powi(2)
        + c.mp_couplings.values().map(|g| g.thz().powi(2)).sum::<f64>();
    Frequency::from_thz(sum_sq / c.cavity_frequency.thz())
}

/// Which closed set of Heisenberg equations the matrix describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorSet {
    /// `(a₊, a₋†, b, c_n)`: the CR-active polaritons.
    CrActive,
    /// `(a₋, a₊†, b†, c_n†)`: the CR-inactive set.
    CrInactive,
}

/// The Hopfield matrix at one field value.
#[derive(Debug, Clone)]
pub struct HopfieldMatrix {
    pub entries: ComplexMatrix,
    /// Field (T) at which the matrix was built.
    pub field: f64,
    pub set: OperatorSet,
}

impl HopfieldMatrix {
    pub fn dimension(&self) -> usize {
        self.entries.dim()
    }
}

/// CR-active Hopfield matrix, rows ordered `(a₊, a₋†, b, c₁, c₃, …)`.
pub fn build_matrix(c: &CouplingSet, b: f64, s: &SampleParams) -> Result<HopfieldMatrix> {
    build_matrix_for(c, b, s, OperatorSet::CrActive)
}

/// Hopfield matrix for either operator set.
///
/// The CR-inactive set `(a₋, a₊†, b†, c_n†)` has matrix
/// `[[ν₀+D, −D, iḡ], [D, −ν₀−D, iḡ], [iḡ, −iḡ, −ν_c]]` (and likewise per MP
/// mode), whose spectrum is the mirror image `λ → −λ*` of the active one.
pub fn build_matrix_for(
    c: &CouplingSet,
    b: f64,
    s: &SampleParams,
    set: OperatorSet,
) -> Result<HopfieldMatrix> {
    c.validate()?;
    let matter = MatterFrequencies::at(c, b, s)?;
    let eff = effective_from_matter(c, &matter);
    let nu0 = c.cavity_frequency.thz();
    let d = diamagnetic_coefficient(c).thz();

    let dim = 2 + c.matter_mode_count();
    let mut m = ComplexMatrix::zeros(dim);
    m[(0, 0)] = Complex64::new(nu0 + d, 0.0);
    m[(0, 1)] = Complex64::new(-d, 0.0);
    m[(1, 0)] = Complex64::new(d, 0.0);
    m[(1, 1)] = Complex64::new(-nu0 - d, 0.0);

    let couplings = std::iter::once(eff.cr).chain(eff.mp.iter().map(|&(_, g)| g));
    for (j, (g, f)) in couplings.zip(matter.all()).enumerate() {
        let col = 2 + j;
        let g = g.thz();
        m[(0, col)] = I * g;
        m[(1, col)] = I * g;
        match set {
            OperatorSet::CrActive => {
                m[(col, 0)] = -I * g;
                m[(col, 1)] = I * g;
                m[(col, col)] = Complex64::new(f.thz(), 0.0);
            }
            OperatorSet::CrInactive => {
                m[(col, 0)] = I * g;
                m[(col, 1)] = -I * g;
                m[(col, col)] = Complex64::new(-f.thz(), 0.0);
            }
        }
    }
    Ok(HopfieldMatrix {
        entries: m,
        field: b,
        set,
    })
}

/// Bogoliubov coefficients of one polariton branch.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfieldCoefficients {
    /// `w`, on `a₊`.
    pub photon: Complex64,
    /// `y`, on `a₋†`.
    pub photon_anomalous: Complex64,
    /// `x`, on the CR operator `b`.
    pub cyclotron: Complex64,
    /// `x_n`, on each MP operator `c_n`, in mode order.
    pub magnetoplasmons: Vec<Complex64>,
}

impl HopfieldCoefficients {
    fn from_vector(v: &[Complex64]) -> Self {
        HopfieldCoefficients {
            photon: v[0],
            photon_anomalous: v[1],
            cyclotron: v[2],
            magnetoplasmons: v[3..].to_vec(),
        }
    }

    /// `|w|² − |y|² + |x|² + Σ|x_n|²`.
    pub fn bogoliubov_norm(&self) -> f64 {
        self.photon.norm_sqr() - self.photon_anomalous.norm_sqr()
            + self.cyclotron.norm_sqr()
            + self.magnetoplasmons.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// `|w|²`, the weight that couples the branch to free-space light.
    pub fn photon_weight(&self) -> f64 {
        self.photon.norm_sqr()
    }
}

/// Branch name: `LP`, `UP1`, `UP2`, …
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BranchLabel {
    Lower,
    Upper(usize),
}

impl BranchLabel {
    /// Label of the branch with ascending position `i` (0 = lowest).
    pub fn from_rank(i: usize) -> Self {
        if i == 0 {
            BranchLabel::Lower
        } else {
            BranchLabel::Upper(i)
        }
    }

    pub fn rank(self) -> usize {
        match self {
            BranchLabel::Lower => 0,
            BranchLabel::Upper(i) => i,
        }
    }
}

impl fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchLabel::Lower => write!(f, "LP"),
            BranchLabel::Upper(i) => write!(f, "UP{i}"),
        }
    }
}

impl FromStr for BranchLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("LP") {
            return Ok(BranchLabel::Lower);
        }
        t.strip_prefix("UP")
            .or_else(|| t.strip_prefix("up"))
            .and_then(|r| r.parse::<usize>().ok())
            .filter(|&i| i >= 1)
            .map(BranchLabel::Upper)
            .ok_or_else(|| Error::domain(format!("unknown branch label {s:?}")))
    }
}

/// One positive-frequency eigenmode.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub label: BranchLabel,
    pub frequency: Frequency,
    pub coefficients: HopfieldCoefficients,
}

/// Branches at one field value, ascending in frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldPoint {
    pub field: f64,
    pub branches: Vec<Branch>,
}

impl FieldPoint {
    pub fn branch(&self, label: BranchLabel) -> Option<&Branch> {
        self.branches.iter().find(|b| b.label == label)
    }
}

/// Polariton branches over a field sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct PolaritonSpectrum {
    /// MP mode indices, matching the order of `x_n` in every branch.
    pub mode_indices: Vec<u32>,
    pub points: Vec<FieldPoint>,
}

impl PolaritonSpectrum {
    pub fn fields(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.field).collect()
    }

    pub fn branch_count(&self) -> usize {
        self.points.first().map_or(0, |p| p.branches.len())
    }

    /// Frequencies (THz) of one labelled branch across the sweep.
    pub fn branch_curve(&self, label: BranchLabel) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter_map(|p| p.branch(label).map(|b| (p.field, b.frequency.thz())))
            .collect()
    }

    /// CSV columns `B_T,branch_label,freq_THz,w2,y2,x2,x1_2,x3_2,…`.
    pub fn csv_header(&self) -> String {
        let mut cols = vec!["B_T", "branch_label", "freq_THz", "w2", "y2", "x2"]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>();
        cols.extend(self.mode_indices.iter().map(|n| format!("x{n}_2")));
        cols.join(",")
    }

    pub fn csv_rows(&self) -> Vec<String> {
        let mut rows = Vec::new();
        for p in &self.points {
            for b in &p.branches {
                let c = &b.coefficients;
                let mut cells = vec![
                    p.field.to_string(),
                    b.label.to_string(),
                    b.frequency.thz().to_string(),
                    c.photon.norm_sqr().to_string(),
                    c.photon_anomalous.norm_sqr().to_string(),
                    c.cyclotron.norm_sqr().to_string(),
                ];
                cells.extend(c.magnetoplasmons.iter().map(|z| z.norm_sqr().to_string()));
                rows.push(cells.join(","));
            }
        }
        rows
    }
}

/// Unlabelled positive branches at one field, ascending, Bogoliubov-normalised.
pub fn positive_branches(
    c: &CouplingSet,
    b: f64,
    s: &SampleParams,
    tol: f64,
) -> Result<Vec<(Frequency, HopfieldCoefficients)>> {
    let m = build_matrix(c, b, s)?;
    let pairs = eigen::eigendecompose(&m.entries, tol)?;
    let threshold = POSITIVE_BRANCH_THRESHOLD * c.cavity_frequency.thz();
    let mut out = Vec::with_capacity(pairs.len());
    for pair in pairs.into_iter().filter(|p| p.value.re > threshold) {
        let mut v = pair.vector;
        let norm = v[0].norm_sqr() - v[1].norm_sqr() + v[2..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if !(norm > 0.0) {
            return Err(Error::Numerical(format!(
                "non-positive Bogoliubov norm {norm:e} for branch at {} THz, B = {b} T",
                pair.value.re
            )));
        }
        // Fix the global phase: largest component real and positive.
        let pivot = v
            .iter()
            .copied()
            .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
            .unwrap_or(Complex64::new(1.0, 0.0));
        let phase = pivot.conj() / pivot.norm();
        let scale = phase / norm.sqrt();
        v.iter_mut().for_each(|z| *z *= scale);
        out.push((
            Frequency::from_thz(pair.value.re),
            HopfieldCoefficients::from_vector(&v),
        ));
    }
    out.sort_by(|a, b| a.0.thz().total_cmp(&b.0.thz()));
    Ok(out)
}

/// Diagonalise at every field (in parallel) and label branches by continuity.
///
/// Fields must be non-empty, finite and strictly ascending. Labels follow the
/// sort order at the first field; later points are matched to the previous
/// ones by nearest linearly extrapolated frequency, ties resolved in favour
/// of keeping the ascending order.
pub fn polariton_sweep(c: &CouplingSet, s: &SampleParams, fields: &[f64]) -> Result<PolaritonSpectrum> {
    polariton_sweep_with_tolerance(c, s, fields, eigen::DEFAULT_TOLERANCE)
}

pub fn polariton_sweep_with_tolerance(
    c: &CouplingSet,
    s: &SampleParams,
    fields: &[f64],
    tol: f64,
) -> Result<PolaritonSpectrum> {
    if fields.is_empty() {
        return Err(Error::domain("field sweep is empty"));
    }
    if fields.iter().any(|b| !b.is_finite()) || fields.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("field sweep must be finite and strictly ascending"));
    }
    let solved: Vec<Vec<(Frequency, HopfieldCoefficients)>> = fields
        .par_iter()
        .map(|&b| positive_branches(c, b, s, tol))
        .collect::<Result<_>>()?;

    let expected = 1 + c.matter_mode_count();
    let mut points: Vec<FieldPoint> = Vec::with_capacity(fields.len());
    for (&field, branches) in fields.iter().zip(solved) {
        if branches.len() != expected {
            return Err(Error::Numerical(format!(
                "expected {expected} positive branches at B = {field} T, found {}",
                branches.len()
            )));
        }
        let labels = match points.len() {
            0 => (0..expected).map(BranchLabel::from_rank).collect(),
            _ => continuity_labels(&points, field, &branches),
        };
        let mut labelled: Vec<Branch> = branches
            .into_iter()
            .zip(labels)
            .map(|((frequency, coefficients), label)| Branch {
                label,
                frequency,
                coefficients,
            })
            .collect();
        labelled.sort_by(|a, b| a.frequency.thz().total_cmp(&b.frequency.thz()));
        points.push(FieldPoint {
            field,
            branches: labelled,
        });
    }
    Ok(PolaritonSpectrum {
        mode_indices: c.mode_indices(),
        points,
    })
}

fn continuity_labels(
    history: &[FieldPoint],
    field: f64,
    current: &[(Frequency, HopfieldCoefficients)],
) -> Vec<BranchLabel> {
    let last = &history[history.len() - 1];
    let predicted: Vec<(BranchLabel, f64)> = last
        .branches
        .iter()
        .map(|br| {
            let f1 = br.frequency.thz();
            let guess = match history.len() {
                1 => f1,
                n => {
                    let prev = &history[n - 2];
                    match prev.branch(br.label) {
                        Some(p0) => {
                            let slope = (f1 - p0.frequency.thz()) / (last.field - prev.field);
                            f1 + slope * (field - last.field)
                        }
                        None => f1,
                    }
                }
            };
            (br.label, guess)
        })
        .collect();

    // Greedy matching on ascending distance; equal distances keep the order
    // (lower current index pairs with lower predicted index).
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, (f, _)) in current.iter().enumerate() {
        for (j, &(_, guess)) in predicted.iter().enumerate() {
            candidates.push(((f.thz() - guess).abs(), i, j));
        }
    }
    candidates.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.abs_diff(a.2).cmp(&b.1.abs_diff(b.2)))
            .then(a.1.cmp(&b.1))
    });
    let mut labels: Vec<Option<BranchLabel>> = vec![None; current.len()];
    let mut used = vec![false; predicted.len()];
    for (_, i, j) in candidates {
        if labels[i].is_none() && !used[j] {
            labels[i] = Some(predicted[j].0);
            used[j] = true;
        }
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.unwrap_or(BranchLabel::from_rank(i)))
        .collect()
}

/// Field grid `[start, stop]` with `count` evenly spaced points.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count)
                .map(|i| if i + 1 == count { stop } else { start + step * i as f64 })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sample() -> SampleParams {
        SampleParams::gaas_slot_sample()
    }

    fn fitted() -> CouplingSet {
        CouplingSet::normalized(0.925, 0.18, &[(1, 0.084), (3, 0.084)]).unwrap()
    }

    #[test]
    fn effective_coupling_at_cr_zero_detuning() {
        let s = sample();
        let c = fitted();
        let b = physics::zero_detuning_field(c.cavity_frequency, 0.0, &s).unwrap();
        let eff = effective_couplings(&c, b, &s).unwrap();
        assert!((eff.cr.thz() - c.cr_coupling.thz()).abs() < 1e-12);
    }

    #[test]
    fn effective_coupling_at_zero_field() {
        let s = sample();
        let c = fitted();
        let eff = effective_couplings(&c, 0.0, &s).unwrap();
        assert_eq!(eff.cr.thz(), 0.0);
        for &(n, g) in &eff.mp {
            let p = physics::plasmon_frequency(f64::from(n) * PI / s.slot_width, &s).unwrap();
            let expect = c.mp_couplings[&n].thz() * (p.thz() / 0.925).sqrt();
            assert!(g.thz() > 0.0);
            assert!((g.thz() - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn effective_coupling_at_mp3_field() {
        let eff = effective_couplings(&fitted(), 1.25, &sample()).unwrap();
        // 0.18·√(0.460403/0.925), evaluated independently.
        assert!((eff.cr.thz() / 0.925 - 0.126_990).abs() < 1e-5, "{}", eff.cr.thz() / 0.925);
    }

    #[test]
    fn diamagnetic_examples() {
        let zero = CouplingSet::normalized(0.925, 0.0, &[(1, 0.0), (3, 0.0)]).unwrap();
        assert_eq!(diamagnetic_coefficient(&zero).thz(), 0.0);
        let d = diamagnetic_coefficient(&fitted()).thz() / 0.925;
        assert!((d - 0.046_512).abs() < 1e-9, "{d}");
    }

    #[test]
    fn diamagnetic_field_form_matches() {
        let s = sample();
        let c = fitted();
        for b in [0.3, 1.1, 2.51, 4.7, 6.9] {
            let matter = MatterFrequencies::at(&c, b, &s).unwrap();
            let eff = effective_from_matter(&c, &matter);
            let field_form = eff.cr.thz().powi(2) / matter.cyclotron.thz()
                + eff
                    .mp
                    .iter()
                    .zip(&matter.magnetoplasmons)
                    .map(|(&(_, g), &(_, f))| g.thz().powi(2) / f.thz())
                    .sum::<f64>();
            let d = diamagnetic_coefficient(&c).thz();
            assert!(((field_form - d) / d).abs() < 1e-13);
        }
    }

    #[test]
    fn matrix_structure() {
        let s = sample();
        let c = fitted();
        let m = build_matrix(&c, 1.7, &s).unwrap();
        let e = &m.entries;
        let nu0 = 0.925;
        let d = diamagnetic_coefficient(&c).thz();
        let eff = effective_couplings(&c, 1.7, &s).unwrap();
        let g = eff.cr.thz();
        assert_eq!(m.dimension(), 5);
        assert_eq!(e[(0, 0)], Complex64::new(nu0 + d, 0.0));
        assert_eq!(e[(1, 1)], Complex64::new(-nu0 - d, 0.0));
        assert_eq!(e[(0, 1)], Complex64::new(-d, 0.0));
        assert_eq!(e[(1, 0)], Complex64::new(d, 0.0));
        assert_eq!(e[(2, 0)], Complex64::new(0.0, -g));
        assert_eq!(e[(2, 1)], Complex64::new(0.0, g));
        assert_eq!(e[(0, 2)], Complex64::new(0.0, g));
        assert_eq!(e[(1, 2)], Complex64::new(0.0, g));
        for i in 2..5 {
            assert_eq!(e[(i, i)].im, 0.0);
            for j in 0..2 {
                assert_eq!(e[(i, j)].re, 0.0);
                assert_eq!(e[(j, i)].re, 0.0);
            }
            for j in 2..5 {
                if i != j {
                    assert_eq!(e[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn eta_times_matrix_is_hermitian() {
        let s = sample();
        let m = build_matrix(&fitted(), 2.2, &s).unwrap().entries;
        let n = m.dim();
        let eta = |i: usize| if i == 1 { -1.0 } else { 1.0 };
        for i in 0..n {
            for j in 0..n {
                let a = m[(i, j)] * eta(i);
                let b = (m[(j, i)] * eta(j)).conj();
                assert!((a - b).norm() < 1e-15, "({i},{j})");
            }
        }
        // ...while M itself is not Hermitian.
        assert!((m[(1, 0)] - m[(0, 1)].conj()).norm() > 0.0);
    }

    #[test]
    fn decoupled_eigenvalues() {
        let s = sample();
        let c = fitted().scaled(0.0);
        let b = 1.9;
        let mut vals: Vec<f64> = eigen::eigenvalues(&build_matrix(&c, b, &s).unwrap().entries)
            .unwrap()
            .iter()
            .map(|z| z.re)
            .collect();
        vals.sort_by(f64::total_cmp);
        let matter = MatterFrequencies::at(&c, b, &s).unwrap();
        let mut expect: Vec<f64> = matter.all().map(|f| f.thz()).chain([0.925, -0.925]).collect();
        expect.sort_by(f64::total_cmp);
        for (v, e) in vals.iter().zip(&expect) {
            assert!((v - e).abs() < 1e-14);
        }
    }

    #[test]
    fn labels_parse_and_print() {
        for l in [BranchLabel::Lower, BranchLabel::Upper(1), BranchLabel::Upper(4)] {
            assert_eq!(l.to_string().parse::<BranchLabel>().unwrap(), l);
        }
        assert!("UP0".parse::<BranchLabel>().is_err());
        assert!("XX".parse::<BranchLabel>().is_err());
    }

    #[test]
    fn sweep_rejects_bad_fields() {
        let s = sample();
        assert!(polariton_sweep(&fitted(), &s, &[]).is_err());
        assert!(polariton_sweep(&fitted(), &s, &[1.0, 0.5]).is_err());
    }

    #[test]
    fn split_upper_branch_at_mp3_field() {
        let s = sample();
        let spec = polariton_sweep(&fitted(), &s, &[1.25]).unwrap();
        let f: Vec<f64> = spec.points[0].branches.iter().map(|b| b.frequency.thz()).collect();
        assert_eq!(f.len(), 4);
        assert!(f[2] < 0.925 && f[3] > 0.925, "{f:?}");
    }

    #[test]
    fn zero_coupling_sweep_follows_bare_curves() {
        let s = sample();
        let c = fitted().scaled(0.0);
        let fields = linspace(0.05, 7.0, 120);
        let spec = polariton_sweep(&c, &s, &fields).unwrap();
        for p in &spec.points {
            let matter = MatterFrequencies::at(&c, p.field, &s).unwrap();
            let mut bare: Vec<f64> = matter.all().map(|f| f.thz()).chain([0.925]).collect();
            bare.sort_by(f64::total_cmp);
            for (br, e) in p.branches.iter().zip(&bare) {
                assert!((br.frequency.thz() - e).abs() < 1e-12);
            }
        }
        // The photon-like label keeps following ν₀ through the crossings.
        let photon_label = spec.points[0]
            .branches
            .iter()
            .find(|b| (b.frequency.thz() - 0.925).abs() < 1e-12)
            .unwrap()
            .label;
        for p in &spec.points {
            let f = p.branch(photon_label).unwrap().frequency.thz();
            assert!((f - 0.925).abs() < 1e-12, "B = {}: {f}", p.field);
        }
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.01, 7.0, 200);
        assert_eq!(v.len(), 200);
        assert_eq!(v[0], 0.01);
        assert_eq!(v[199], 7.0);
        assert!(linspace(1.0, 2.0, 0).is_empty());
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
    }
}
