//! Linear wave propagation, the multilinear nonlinearity, Duhamel
//! integrals, Picard iterates on a shared time mesh, and two independent
//! solvers for the wave Duhamel equation.

pub mod duhamel;
pub mod linear;
pub mod nonlinearity;
pub mod picard;
pub mod solver;

pub use duhamel::{duhamel, DuhamelResult, QuadratureRule, TimeMesh, QUADRATURE_TOLERANCE};
pub use linear::{propagate_linear, wave_kernel};
pub use nonlinearity::nonlinearity;
pub use picard::{picard_iterates, support_size, PicardEntry, PicardSeries, SUPPORT_THRESHOLD};
pub use solver::{solve_fixed_point, solve_series, SeriesSolution, SMALLNESS_THRESHOLD};

use crate::error::{Error, Result};
use crate::spectral::grid::GridSpec;

/// Cauchy problem parameters: nonlinearity degree `sigma`, conjugation
/// split `rho` (first `rho` factors plain, the rest conjugated), the sign
/// of the nonlinear term, and the lattice.
#[derive(Clone, Debug)]
pub struct NlwProblem {
    pub sigma: usize,
    pub rho: usize,
    pub sign: f64,
    pub grid: GridSpec,
}

impl NlwProblem {
    pub fn new(sigma: usize, rho: usize, sign: f64, grid: GridSpec) -> Result<Self> {
        if sigma < 2 || sigma < rho {
            return Err(Error::validation(
                "sigma",
                format!("need sigma >= max(rho, 2), got sigma = {sigma}, rho = {rho}"),
            ));
        }
        if sign != 1.0 && sign != -1.0 {
            return Err(Error::validation("sign", format!("sign must be +1 or -1, got {sign}")));
        }
        Ok(NlwProblem { sigma, rho, sign, grid })
    }

    /// Default iterate cutoff: four nonzero iterates.
    pub fn default_kmax(&self) -> usize {
        1 + 3 * (self.sigma - 1)
    }
}
