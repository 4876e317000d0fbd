//! Numerical laboratory for amalgam-type function-space norms and the
//! nonlinear wave equation: frequency-lattice fields, the norms built on
//! unit-cube and smooth frequency decompositions, a Picard-series engine
//! for the wave Duhamel equation, and the explicit perturbation family
//! driving norm-inflation sweeps.

pub mod engine;
pub mod error;
pub mod inflation;
pub mod io;
pub mod norms;
pub mod oracle;
pub mod spectral;
pub mod util;

pub use error::{Error, Result};
