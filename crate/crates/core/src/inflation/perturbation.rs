//! The explicit perturbation family: amplitude `R` on four unit-radius
//! cubes centered at `(+-N, 0, ..)` and `(+-2N, 0, ..)` along the first
//! axis, velocity component zero.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::field::{DataPair, SpectralField};
use crate::spectral::grid::GridSpec;

/// Frequency scale and amplitude of one perturbation datum.
#[derive(Clone, Copy, Debug)]
pub struct PerturbationSpec {
    pub n_freq: i64,
    pub amplitude: f64,
    pub dim: usize,
}

impl PerturbationSpec {
    /// `n_freq >= 4` keeps the four cubes pairwise disjoint.
    pub fn new(n_freq: i64, amplitude: f64, dim: usize) -> Result<Self> {
        if n_freq < 4 {
            return Err(Error::validation(
                "N",
                format!("frequency scale must be at least 4, got {n_freq}"),
            ));
        }
        if !(amplitude > 0.0) {
            return Err(Error::validation("R", format!("amplitude must be positive, got {amplitude}")));
        }
        if !(1..=3).contains(&dim) {
            return Err(Error::validation("dim", format!("dim must be 1, 2 or 3, got {dim}")));
        }
        Ok(PerturbationSpec { n_freq, amplitude, dim })
    }

    /// Cube centers along the first axis.
    pub fn centers(&self) -> [i64; 4] {
        let n = self.n_freq;
        [n, -n, 2 * n, -2 * n]
    }
}

/// Characteristic-function datum: transform equal to the amplitude on the
/// union of cubes, zero velocity.  Both `+-1` faces of each cube include
/// lattice points, which keeps the transform symmetric about the origin.
pub fn build_perturbation(spec: &PerturbationSpec, grid: &GridSpec) -> Result<DataPair> {
    if grid.dim() != spec.dim {
        return Err(Error::validation("grid", "grid dimension does not match the perturbation"));
    }
    if grid.extent() < 2 * spec.n_freq + 1 {
        return Err(Error::validation(
            "grid",
            format!(
                "lattice extent {} cannot hold frequencies up to {}",
                grid.extent(),
                2 * spec.n_freq + 1
            ),
        ));
    }
    let m = grid.mesh();
    let mut u0 = SpectralField::zeros(grid);
    let amp = Complex64::new(spec.amplitude, 0.0);
    let cross: Vec<i64> = (-m..=m).collect();
    for center in spec.centers() {
        for j0 in (center * m - m)..=(center * m + m) {
            match grid.dim() {
                1 => {
                    let c = [j0, 0, 0];
                    if u0.get(&c) != Complex64::new(0.0, 0.0) {
                        return Err(Error::validation("N", "perturbation cubes overlap"));
                    }
                    u0.set(&c, amp);
                }
                2 => {
                    for &j1 in &cross {
                        let c = [j0, j1, 0];
                        if u0.get(&c) != Complex64::new(0.0, 0.0) {
                            return Err(Error::validation("N", "perturbation cubes overlap"));
                        }
                        u0.set(&c, amp);
                    }
                }
                _ => {
                    for &j1 in &cross {
                        for &j2 in &cross {
                            let c = [j0, j1, j2];
                            if u0.get(&c) != Complex64::new(0.0, 0.0) {
                                return Err(Error::validation("N", "perturbation cubes overlap"));
                            }
                            u0.set(&c, amp);
                        }
                    }
                }
            }
        }
    }
    u0.set_real_even_flag(true);
    let mut u1 = SpectralField::zeros(grid);
    u1.set_real_even_flag(true);
    DataPair::new(u0, u1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Domain;

    #[test]
    fn torus_enumeration_at_small_scale() {
        let grid = GridSpec::new(1, 20, Domain::Torus, 1).unwrap();
        let spec = PerturbationSpec::new(8, 2.0, 1).unwrap();
        let pair = build_perturbation(&spec, &grid).unwrap();
        let expected: Vec<i64> =
            vec![-17, -16, -15, -9, -8, -7, 7, 8, 9, 15, 16, 17];
        for j in -20i64..=20 {
            let v = pair.u0.get(&[j, 0, 0]);
            if expected.contains(&j) {
                assert_eq!(v, Complex64::new(2.0, 0.0), "at {j}");
            } else {
                assert_eq!(v, Complex64::new(0.0, 0.0), "at {j}");
            }
        }
        assert!(pair.u0.flagged_real_even());
        assert!(pair.u0.check_real_even(0.0));
        assert_eq!(pair.u1.max_abs(), 0.0);
    }

    #[test]
    fn mesh_refined_cubes_include_both_faces() {
        let grid = GridSpec::new(1, 20, Domain::TruncatedEuclidean, 2).unwrap();
        let spec = PerturbationSpec::new(4, 1.0, 1).unwrap();
        let pair = build_perturbation(&spec, &grid).unwrap();
        // cube at 4 covers xi in [3, 5]: mesh indices 6..=10
        for j in 6i64..=10 {
            assert_eq!(pair.u0.get(&[j, 0, 0]), Complex64::new(1.0, 0.0));
        }
        assert_eq!(pair.u0.get(&[5, 0, 0]), Complex64::new(0.0, 0.0));
        assert_eq!(pair.u0.get(&[11, 0, 0]), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn small_scale_is_rejected() {
        assert!(PerturbationSpec::new(3, 1.0, 1).is_err());
    }

    #[test]
    fn two_dimensional_cubes() {
        let grid = GridSpec::new(2, 9, Domain::Torus, 1).unwrap();
        let spec = PerturbationSpec::new(4, 1.5, 2).unwrap();
        let pair = build_perturbation(&spec, &grid).unwrap();
        let mut count = 0usize;
        pair.u0.for_each_nonzero(|_, _| count += 1);
        assert_eq!(count, 4 * 3 * 3);
        assert!(pair.u0.check_real_even(0.0));
    }
}
