//! Numerical models for multimode Landau polaritons.
//!
//! A single cavity photon couples to the cyclotron resonance (CR) of a
//! two-dimensional electron gas and to finite-momentum magnetoplasmon (MP)
//! modes selected by a slot of width `d` (`k = nπ/d`, odd `n`). The crate
//! covers:
//!
//! * [`physics`]: bare plasmon, cyclotron and magnetoplasmon dispersions and
//!   zero-detuning fields,
//! * [`hopfield`]: the multimode Hopfield/Bogoliubov matrix, its spectrum and
//!   branch-labelled field sweeps,
//! * [`eigen`]: a small dense complex eigensolver (Hessenberg + shifted QR),
//! * [`optics`]: magneto-optical permittivity, normal-incidence transfer
//!   matrices, transmission maps and peak extraction,
//! * [`fit`]: least-squares extraction of coupling strengths from peak lists.
//!
//! Every public frequency is an ordinary frequency in THz ([`Frequency`]);
//! magnetic fields are in tesla and lengths in metres unless a name says
//! otherwise.

pub mod constants;
pub mod eigen;
pub mod error;
pub mod fit;
pub mod hopfield;
pub mod optics;
pub mod physics;
pub mod units;

pub use error::{Error, Result};
pub use hopfield::{BranchLabel, CouplingSet, PolaritonSpectrum};
pub use physics::SampleParams;
pub use units::Frequency;
