//! Mutually unbiased measurements (MUMs) with tunable purity.
//!
//! The crate builds families of commuting-within-measurement POVMs whose
//! elements share one spectrum, verifies the MUM trace relations and their
//! Bloch-simplex geometry, and turns the families into entanglement
//! witnesses for bipartite states.

pub mod cli;
pub mod error;
pub mod gellmann;
pub mod linalg;
pub mod mum;
pub mod ortho;
pub mod random;
pub mod spectra;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
pub use gellmann::GellMannBasis;
pub use linalg::{CMatrix, CVector, RMatrix, C64};
pub use mum::{MumFamily, Povm};
pub use ortho::{QMatrix, RotationFixingDiagonal};
pub use spectra::Spectrum;
pub use states::DensityMatrix;
pub use witness::{WitnessConfig, WitnessResult};
