//! CSV input and output.
//!
//! Every output file starts with `#` comment lines naming the command and
//! echoing the resolved configuration, followed by a header row.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use landau_core::fit::{PeakDataset, PeakPoint};
use landau_core::BranchLabel;

use crate::error::CliError;

/// Provenance lines written at the top of every output file.
#[derive(Debug, Clone)]
pub struct Preamble {
    pub command: String,
    pub config_echo: String,
}

impl Preamble {
    fn write(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "# landau {} {}", env!("CARGO_PKG_VERSION"), self.command)?;
        writeln!(w, "# resolved configuration:")?;
        writeln!(w, "{}", self.config_echo)
    }
}

/// Write a CSV file `dir/name` and return its path.
pub fn write_csv<I, S>(dir: &Path, name: &str, preamble: &Preamble, header: &str, rows: I) -> Result<PathBuf, CliError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    let file = fs::File::create(&path).map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    let io = |e: std::io::Error| CliError::Io(format!("writing {}: {e}", path.display()));
    preamble.write(&mut w).map_err(io)?;
    writeln!(w, "{header}").map_err(io)?;
    for row in rows {
        writeln!(w, "{}", row.as_ref()).map_err(io)?;
    }
    w.flush().map_err(io)?;
    Ok(path)
}

/// Read a peak list with columns `B_T,freq_THz[,weight][,label]`.
///
/// `#` lines are comments. A `T` column (peak transmittance, as written by
/// the transmission command) is accepted and ignored. Row numbers in error
/// messages count data rows from 1.
pub fn read_peaks(path: &Path) -> Result<PeakDataset, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    for h in headers.iter() {
        if !["B_T", "freq_THz", "weight", "label", "T"].contains(&h) {
            return Err(CliError::Schema(format!("{}: unknown column {h:?}", path.display())));
        }
    }
    let (Some(b_col), Some(f_col)) = (column("B_T"), column("freq_THz")) else {
        return Err(CliError::Schema(format!(
            "{}: header must contain B_T and freq_THz",
            path.display()
        )));
    };
    let (w_col, l_col) = (column("weight"), column("label"));

    let mut points = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| CliError::Schema(format!("{} row {row}: {e}", path.display())))?;
        let number = |col: usize, name: &str| -> Result<f64, CliError> {
            let cell = record.get(col).unwrap_or("");
            cell.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Schema(format!("{} row {row}: {name} = {cell:?} is not a finite number", path.display())))
        };
        let mut p = PeakPoint::new(number(b_col, "B_T")?, number(f_col, "freq_THz")?);
        if let Some(c) = w_col {
            p.weight = number(c, "weight")?;
        }
        if let Some(c) = l_col {
            let cell = record.get(c).unwrap_or("");
            if !cell.is_empty() {
                let label: BranchLabel = cell
                    .parse()
                    .map_err(|_| CliError::Schema(format!("{} row {row}: unknown branch label {cell:?}", path.display())))?;
                p.label = Some(label);
            }
        }
        if p.field < 0.0 || p.freq <= 0.0 || p.weight < 0.0 {
            return Err(CliError::Schema(format!(
                "{} row {row}: need B_T >= 0, freq_THz > 0, weight >= 0",
                path.display()
            )));
        }
        points.push(p);
    }
    PeakDataset::new(points).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}
