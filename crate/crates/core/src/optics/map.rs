use rayon::prelude::*;

use super::permittivity::Polarization;
use super::stack::CavityGeometry;
use super::transfer::transfer_matrix_transmittance;
use crate::error::{Error, Result};
use crate::hopfield::CouplingSet;
use crate::physics::SampleParams;
use crate::units::Frequency;

/// Transmittance over a (field, frequency) grid, stored column-wise:
/// `values[i][j]` is the transmittance at `field_axis[i]`, `freq_axis[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionMap {
    /// Fields (T).
    pub field_axis: Vec<f64>,
    /// Frequencies (THz).
    pub freq_axis: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl TransmissionMap {
    pub fn column(&self, field_index: usize) -> &[f64] {
        &self.values[field_index]
    }

    /// Index of the field closest to `field`.
    pub fn nearest_field_index(&self, field: f64) -> usize {
        self.field_axis
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - field).abs().total_cmp(&(b.1 - field).abs()))
            .map_or(0, |(i, _)| i)
    }

    /// Long-form CSV body rows `B_T,freq_THz,T`.
    pub fn long_rows(&self) -> impl Iterator<Item = String> + '_ {
        self.field_axis.iter().zip(&self.values).flat_map(move |(b, col)| {
            self.freq_axis
                .iter()
                .zip(col)
                .map(move |(f, t)| format!("{b},{f},{t}"))
        })
    }

    /// Matrix CSV: the first row holds the field axis (after a corner cell),
    /// each further row a frequency followed by one transmittance per field.
    pub fn matrix_rows(&self) -> Vec<String> {
        let mut rows = Vec::with_capacity(self.freq_axis.len() + 1);
        let header: Vec<String> = std::iter::once("freq_THz\\B_T".to_string())
            .chain(self.field_axis.iter().map(|b| b.to_string()))
            .collect();
        rows.push(header.join(","));
        for (j, f) in self.freq_axis.iter().enumerate() {
            let cells: Vec<String> = std::iter::once(f.to_string())
                .chain(self.values.iter().map(|col| col[j].to_string()))
                .collect();
            rows.push(cells.join(","));
        }
        rows
    }
}

fn check_axis(name: &str, axis: &[f64]) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::domain(format!("{name} axis is empty")));
    }
    if axis.iter().any(|v| !v.is_finite()) || axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain(format!("{name} axis must be finite and strictly ascending")));
    }
    Ok(())
}

/// Transmittance of the cavity stack with the QW permittivity re-evaluated
/// at every (field, frequency). Columns are computed in parallel.
pub fn transmission_map(
    geometry: &CavityGeometry,
    sample: &SampleParams,
    couplings: &CouplingSet,
    fields: &[f64],
    freqs: &[f64],
    polarization: Polarization,
) -> Result<TransmissionMap> {
    check_axis("field", fields)?;
    check_axis("frequency", freqs)?;
    if fields[0] < 0.0 || freqs[0] <= 0.0 {
        return Err(Error::domain("fields must be >= 0 and frequencies > 0"));
    }
    let values = fields
        .par_iter()
        .map(|&b| {
            let stack = geometry.stack(sample, couplings, b, polarization)?;
            freqs
                .iter()
                .map(|&f| transfer_matrix_transmittance(&stack, Frequency::from_thz(f)).map(|r| r.transmittance))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TransmissionMap {
        field_axis: fields.to_vec(),
        freq_axis: freqs.to_vec(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopfield::linspace;
    use crate::optics::GaasValue;

    fn geometry() -> CavityGeometry {
        CavityGeometry {
            gaas: GaasValue::RefractiveIndex(3.6),
            ..CavityGeometry::fabry_perot_default()
        }
    }

    #[test]
    fn zero_coupling_columns_do_not_depend_on_field() {
        let s = SampleParams::gaas_slot_sample();
        let c = CouplingSet::normalized(0.925, 0.0, &[(1, 0.0), (3, 0.0)]).unwrap();
        let map = transmission_map(&geometry(), &s, &c, &[0.5, 2.0, 6.0], &linspace(0.2, 1.6, 57), Polarization::CrActive)
            .unwrap();
        for col in &map.values[1..] {
            assert_eq!(col, &map.values[0]);
        }
    }

    #[test]
    fn axes_validated() {
        let s = SampleParams::gaas_slot_sample();
        let c = CouplingSet::normalized(0.925, 0.1, &[]).unwrap();
        let g = geometry();
        assert!(transmission_map(&g, &s, &c, &[], &[1.0], Polarization::CrActive).is_err());
        assert!(transmission_map(&g, &s, &c, &[1.0, 0.5], &[1.0], Polarization::CrActive).is_err());
        assert!(transmission_map(&g, &s, &c, &[1.0], &[0.0, 1.0], Polarization::CrActive).is_err());
    }

    #[test]
    fn csv_layouts() {
        let map = TransmissionMap {
            field_axis: vec![1.0, 2.0],
            freq_axis: vec![0.5, 0.6, 0.7],
            values: vec![vec![0.1, 0.2, 0.3], vec![0.4, 0.5, 0.6]],
        };
        let long: Vec<String> = map.long_rows().collect();
        assert_eq!(long.len(), 6);
        assert_eq!(long[4], "2,0.6,0.5");
        let m = map.matrix_rows();
        assert_eq!(m[0], "freq_THz\\B_T,1,2");
        assert_eq!(m[2], "0.6,0.2,0.5");
        assert_eq!(map.nearest_field_index(1.7), 1);
    }
}
