//! Subcommand implementations. Each returns the text for standard output;
//! files go to the output directory.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use landau_core::fit::{self, synthetic_peaks, FitResult, PeakDataset, SyntheticSpec};
use landau_core::hopfield::polariton_sweep;
use landau_core::optics::{extract_peaks, transmission_map, Polarization};
use landau_core::physics::{cyclotron_frequency, slot_momentum, slot_mode_frequency, zero_detuning_field};
use landau_core::{Error, Frequency};

use crate::config::{Config, MapFormat};
use crate::error::CliError;
use crate::io::{read_peaks, write_csv, Preamble};

/// Settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct Context {
    pub config: Config,
    pub out_dir: PathBuf,
    pub polarization: Polarization,
    /// Command line as recorded in output preambles.
    pub command: String,
}

impl Context {
    fn preamble(&self) -> Preamble {
        Preamble {
            command: self.command.clone(),
            config_echo: self.config.echo(),
        }
    }

    fn written(&self, out: &mut String, path: &Path) {
        let _ = writeln!(out, "wrote {}", path.display());
    }
}

pub struct ZeroDetuningRow {
    pub mode: String,
    pub k_per_m: f64,
    /// `None` when no field reaches the cavity frequency.
    pub field: Option<f64>,
    pub note: String,
}

/// Zero-detuning fields of the CR and of every configured MP mode.
pub fn zero_detuning_rows(config: &Config) -> Result<Vec<ZeroDetuningRow>, CliError> {
    let s = config.sample_params()?;
    let target = Frequency::from_thz(config.cavity.frequency_thz);
    let mut modes = vec![("CR".to_string(), 0.0)];
    for &n in &config.modes.mp {
        modes.push((format!("MP{n}"), slot_momentum(n, s.slot_width)?));
    }
    modes
        .into_iter()
        .map(|(mode, k)| match zero_detuning_field(target, k, &s) {
            Ok(b) => Ok(ZeroDetuningRow {
                mode,
                k_per_m: k,
                field: Some(b),
                note: String::new(),
            }),
            Err(Error::NoSolution { minimum_thz, .. }) => Ok(ZeroDetuningRow {
                mode,
                k_per_m: k,
                field: None,
                note: format!("no solution: plasmon frequency {minimum_thz:.4} THz exceeds the cavity frequency"),
            }),
            Err(e) => Err(e.into()),
        })
        .collect()
}

pub fn zerodetune(ctx: &Context) -> Result<String, CliError> {
    let rows = zero_detuning_rows(&ctx.config)?;
    let mut out = String::new();
    let _ = writeln!(out, "zero-detuning fields for nu0 = {} THz", ctx.config.cavity.frequency_thz);
    let _ = writeln!(out, "{:<6} {:>14} {:>10}", "mode", "k (1/m)", "B (T)");
    for r in &rows {
        match r.field {
            Some(b) => {
                let _ = writeln!(out, "{:<6} {:>14.6e} {:>10.4}", r.mode, r.k_per_m, b);
            }
            None => {
                let _ = writeln!(out, "{:<6} {:>14.6e} {:>10}  {}", r.mode, r.k_per_m, "-", r.note);
            }
        }
    }
    let csv_rows = rows.iter().map(|r| {
        format!(
            "{},{},{},{}",
            r.mode,
            r.k_per_m,
            r.field.map(|b| b.to_string()).unwrap_or_default(),
            r.note
        )
    });
    let path = write_csv(&ctx.out_dir, "zerodetune.csv", &ctx.preamble(), "mode,k_per_m,B_zero_T,note", csv_rows)?;
    ctx.written(&mut out, &path);
    Ok(out)
}

pub fn dispersion(ctx: &Context) -> Result<String, CliError> {
    let c = &ctx.config;
    let s = c.sample_params()?;
    let mut header = vec!["B_T".to_string(), "cavity_THz".into(), "CR_THz".into()];
    header.extend(c.modes.mp.iter().map(|n| format!("MP{n}_THz")));
    let mut rows = Vec::new();
    for b in c.sweep.fields() {
        let mut cells = vec![b.to_string(), c.cavity.frequency_thz.to_string(), cyclotron_frequency(b, &s)?.thz().to_string()];
        for &n in &c.modes.mp {
            cells.push(slot_mode_frequency(n, b, &s)?.thz().to_string());
        }
        rows.push(cells.join(","));
    }
    let mut out = String::new();
    let path = write_csv(&ctx.out_dir, "dispersion.csv", &ctx.preamble(), &header.join(","), rows)?;
    ctx.written(&mut out, &path);
    Ok(out)
}

pub fn polaritons(ctx: &Context) -> Result<String, CliError> {
    let c = &ctx.config;
    let fields = c.sweep.fields();
    let spectrum = polariton_sweep(&c.coupling_set()?, &c.sample_params()?, &fields)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} positive branches over {} fields in [{}, {}] T",
        spectrum.branch_count(),
        fields.len(),
        c.sweep.b_min_t,
        c.sweep.b_max_t
    );
    let path = write_csv(&ctx.out_dir, "polaritons.csv", &ctx.preamble(), &spectrum.csv_header(), spectrum.csv_rows())?;
    ctx.written(&mut out, &path);
    Ok(out)
}

pub fn transmission(ctx: &Context, peaks: bool, passive: bool) -> Result<String, CliError> {
    let c = &ctx.config;
    let mut couplings = c.coupling_set()?;
    if passive {
        couplings = couplings.scaled(0.0);
    }
    let map = transmission_map(
        &c.geometry()?,
        &c.sample_params()?,
        &couplings,
        &c.sweep.fields(),
        &c.sweep.freqs(),
        ctx.polarization,
    )?;
    let stem = if passive { "transmission_passive" } else { "transmission" };
    let pre = ctx.preamble();
    let mut out = String::new();
    if matches!(c.output.map_format, MapFormat::Long | MapFormat::Both) {
        let path = write_csv(&ctx.out_dir, &format!("{stem}_long.csv"), &pre, "B_T,freq_THz,T", map.long_rows())?;
        ctx.written(&mut out, &path);
    }
    if matches!(c.output.map_format, MapFormat::Matrix | MapFormat::Both) {
        let rows = map.matrix_rows();
        let path = write_csv(&ctx.out_dir, &format!("{stem}_matrix.csv"), &pre, &rows[0], &rows[1..])?;
        ctx.written(&mut out, &path);
    }
    if peaks {
        let found = extract_peaks(&map, c.fit.prominence, c.fit.max_peaks)?;
        let rows = found.iter().map(|p| format!("{},{},{}", p.field, p.freq, p.height));
        let path = write_csv(&ctx.out_dir, &format!("{stem}_peaks.csv"), &pre, "B_T,freq_THz,T", rows)?;
        let _ = writeln!(out, "{} peaks extracted", found.len());
        ctx.written(&mut out, &path);
    }
    Ok(out)
}

/// Peaks generated from the configured model for `--synthetic`.
pub fn synthetic_dataset(config: &Config, seed: u64) -> Result<PeakDataset, CliError> {
    let spec = SyntheticSpec {
        fields: config.sweep.fields(),
        relative_noise: config.fit.synthetic_noise,
        seed,
        min_photon_weight: config.fit.min_photon_weight,
    };
    Ok(synthetic_peaks(&config.sample_params()?, &config.coupling_set()?, &spec)?)
}

fn check_field_range(config: &Config, peaks: &PeakDataset) -> Result<(), CliError> {
    let (lo, hi) = (config.sweep.b_min_t, config.sweep.b_max_t);
    let outside: Vec<String> = peaks
        .points()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.field < lo || p.field > hi)
        .map(|(i, _)| (i + 1).to_string())
        .collect();
    if outside.is_empty() {
        Ok(())
    } else {
        Err(CliError::Schema(format!(
            "peak rows {} lie outside the field sweep [{lo}, {hi}] T",
            outside.join(", ")
        )))
    }
}

/// Run the configured fit on `peaks`.
pub fn run_fit(config: &Config, peaks: &PeakDataset, shared_gn: bool) -> Result<FitResult, CliError> {
    check_field_range(config, peaks)?;
    let problem = config.fit_problem(shared_gn)?;
    Ok(fit::fit(&problem, peaks)?)
}

pub fn fit_summary(result: &FitResult) -> String {
    let nu0 = result.couplings.cavity_frequency.thz();
    let mut out = String::new();
    let _ = writeln!(out, "fit summary");
    let _ = writeln!(out, "  converged:     {} ({} iterations)", result.converged, result.iterations);
    let _ = writeln!(out, "  residual rms:  {:.3e} THz over {} peaks", result.residual_rms, result.assignments.len());
    for &(p, v) in &result.params {
        if p.is_coupling() {
            let _ = writeln!(out, "  {:<12} {v:.6} THz  ({:.5} of nu0)", p.to_string(), v / nu0);
        } else {
            let _ = writeln!(out, "  {:<12} {v:.6}", p.to_string());
        }
    }
    let ambiguous = result.assignments.iter().filter(|a| a.ambiguous).count();
    if ambiguous > 0 {
        let _ = writeln!(out, "  {ambiguous} ambiguous assignments");
    }
    out
}

pub fn fit_command(ctx: &Context, peaks_path: Option<&Path>, synthetic: Option<u64>, shared_gn: bool) -> Result<String, CliError> {
    let c = &ctx.config;
    let pre = ctx.preamble();
    let mut out = String::new();
    let peaks = match (synthetic, peaks_path) {
        (Some(seed), _) => {
            let data = synthetic_dataset(c, seed)?;
            let rows = data.points().iter().map(|p| format!("{},{},{}", p.field, p.freq, p.weight));
            let path = write_csv(&ctx.out_dir, "synthetic_peaks.csv", &pre, "B_T,freq_THz,weight", rows)?;
            ctx.written(&mut out, &path);
            data
        }
        (None, Some(path)) => read_peaks(path)?,
        (None, None) => return Err(CliError::Config("fit needs a peak CSV or --synthetic <seed>".into())),
    };
    let result = run_fit(c, &peaks, shared_gn)?;
    let problem = c.fit_problem(shared_gn)?;
    let nu0 = result.couplings.cavity_frequency.thz();
    let rows = problem.free.iter().zip(&result.params).map(|(spec, &(p, v))| {
        let normalized = if p.is_coupling() { (v / nu0).to_string() } else { String::new() };
        format!("{p},{v},{normalized},{},{},{}", spec.lower, spec.upper, spec.initial)
    });
    let summary_rows: Vec<String> = rows
        .chain([
            format!("residual_rms_THz,{},,,,", result.residual_rms),
            format!("iterations,{},,,,", result.iterations),
            format!("converged,{},,,,", result.converged),
        ])
        .collect();
    let path = write_csv(&ctx.out_dir, "fit_result.csv", &pre, "param,value,normalized,lower,upper,initial", summary_rows)?;
    ctx.written(&mut out, &path);
    let residual_rows = peaks.points().iter().zip(&result.assignments).map(|(p, a)| {
        format!(
            "{},{},{},{},{},{},{}",
            p.field, p.freq, p.weight, a.label, a.branch_freq, a.residual, a.ambiguous
        )
    });
    let path = write_csv(
        &ctx.out_dir,
        "fit_residuals.csv",
        &pre,
        "B_T,freq_THz,weight,branch_label,branch_THz,residual_THz,ambiguous",
        residual_rows,
    )?;
    ctx.written(&mut out, &path);
    out.insert_str(0, &fit_summary(&result));
    if !result.converged {
        return Err(CliError::Numerical(format!(
            "fit did not converge within {} iterations; partial results written\n{out}",
            result.iterations
        )));
    }
    Ok(out)
}
