//! Magneto-optical response of the electron gas and normal-incidence
//! transmission through stratified cavities.

mod map;
mod peaks;
mod permittivity;
mod stack;
mod transfer;

pub use map::{transmission_map, TransmissionMap};
pub use peaks::{column_peaks, extract_peaks, Peak, DEFAULT_PROMINENCE};
pub use permittivity::{drude_metal, qw_permittivity, plasma_frequency_for_coupling, Gyrotropic2deg, PermittivityModel, Polarization};
pub use stack::{CavityGeometry, GaasValue};
pub use transfer::{transfer_matrix_transmittance, Layer, LayerStack, StackResponse};
