//! Smooth frequency-uniform decomposition windows.
//!
//! The bump `h` equals one on `[-1/2, 1/2]`, vanishes outside `(-1, 1)` and
//! is glued with the standard `exp(-1/x)` transition.  Translates
//! `rho_n(xi) = prod_i h(xi_i - n_i)` normalized by their sum give the
//! partition `sigma_n`, and `box_op` multiplies coefficients by `sigma_n`.

use crate::error::{Error, Result};
use crate::spectral::field::SpectralField;
use crate::spectral::grid::{Coord, GridSpec};

/// One-dimensional window profile tabulated on the grid mesh.
#[derive(Clone, Debug)]
pub struct WindowBump {
    mesh: i64,
    /// `table[j + mesh] = h(j / mesh)` for `|j| <= mesh`.
    table: Vec<f64>,
    pub tag: &'static str,
}

fn smooth_step(t: f64) -> f64 {
    // exp(-1/t) transition, 0 at t <= 0, 1 at t >= 1
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// Analytic profile: plateau on `[-1/2, 1/2]`, support `(-1, 1)`.
pub fn bump_profile(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 0.5 {
        1.0
    } else if ax >= 1.0 {
        0.0
    } else {
        smooth_step(2.0 * (1.0 - ax))
    }
}

impl WindowBump {
    pub fn for_mesh(mesh: i64) -> Self {
        assert!(mesh >= 1);
        let table = (-mesh..=mesh).map(|j| bump_profile(j as f64 / mesh as f64)).collect();
        WindowBump { mesh, table, tag: "exp-transition" }
    }

    pub fn for_grid(grid: &GridSpec) -> Self {
        WindowBump::for_mesh(grid.mesh())
    }

    pub fn mesh(&self) -> i64 {
        self.mesh
    }

    /// `h` at a lattice offset of `j` mesh units from a window center.
    pub fn h_at_offset(&self, j: i64) -> f64 {
        if j.abs() > self.mesh {
            0.0
        } else {
            self.table[(j + self.mesh) as usize]
        }
    }

    /// Denominator sum along one axis: `sum_l h(xi - l)` at `xi = j/mesh`.
    fn axis_denominator(&self, j: i64) -> f64 {
        let center = j.div_euclid(self.mesh);
        let mut sum = 0.0;
        for l in (center - 2)..=(center + 2) {
            sum += self.h_at_offset(j - l * self.mesh);
        }
        sum
    }

    /// Partition weight `sigma_n(xi)` at lattice coordinate `c`.
    pub fn sigma(&self, grid: &GridSpec, n: &Coord, c: &Coord) -> f64 {
        let mut num = 1.0;
        let mut den = 1.0;
        for i in 0..grid.dim() {
            let h = self.h_at_offset(c[i] - n[i] * self.mesh);
            if h == 0.0 {
                return 0.0;
            }
            num *= h;
            den *= self.axis_denominator(c[i]);
        }
        num / den
    }
}

/// Frequency-uniform decomposition operator: multiply coefficients by
/// `sigma_n`.  Window centers are restricted to `|n_i| <= extent - 1` so the
/// window support stays on the lattice.
pub fn box_op(f: &SpectralField, n: &Coord, bump: &WindowBump) -> Result<SpectralField> {
    let grid = f.grid();
    if n.iter().take(grid.dim()).any(|&ni| ni.abs() > grid.extent() - 1) {
        return Err(Error::validation(
            "window",
            format!("window center {n:?} outside extent - 1"),
        ));
    }
    let mut out = SpectralField::zeros(grid);
    for flat in 0..f.coeffs().len() {
        let v = f.coeffs()[flat];
        if v != num_complex::Complex64::new(0.0, 0.0) {
            let c = grid.coord_of(flat);
            let w = bump.sigma(grid, n, &c);
            if w != 0.0 {
                out.coeffs_mut()[flat] = v * w;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Domain;
    use num_complex::Complex64;

    #[test]
    fn profile_shape() {
        assert_eq!(bump_profile(0.0), 1.0);
        assert_eq!(bump_profile(0.5), 1.0);
        assert_eq!(bump_profile(-0.5), 1.0);
        assert_eq!(bump_profile(1.0), 0.0);
        assert_eq!(bump_profile(-1.3), 0.0);
        for k in 0..100 {
            let x = -1.2 + 2.4 * k as f64 / 99.0;
            let v = bump_profile(x);
            assert!((0.0..=1.0).contains(&v));
            assert!((v - bump_profile(-x)).abs() < 1e-15);
        }
    }

    #[test]
    fn partition_of_unity_on_lattice() {
        let grid = GridSpec::new(1, 6, Domain::TruncatedEuclidean, 5).unwrap();
        let bump = WindowBump::for_grid(&grid);
        for c in grid.iter_coords() {
            if c[0].abs() > grid.half_points() - grid.mesh() {
                continue; // within one unit of the lattice boundary
            }
            let center = c[0].div_euclid(grid.mesh());
            let mut sum = 0.0;
            for l in (center - 2)..=(center + 2) {
                sum += bump.sigma(&grid, &[l, 0, 0], &c);
            }
            assert!((sum - 1.0).abs() < 1e-10, "at {c:?}: {sum}");
        }
    }

    #[test]
    fn delta_at_window_center_is_fixed() {
        let grid = GridSpec::new(1, 8, Domain::Torus, 1).unwrap();
        let bump = WindowBump::for_grid(&grid);
        let f = SpectralField::delta(&grid, &[4, 0, 0], Complex64::new(2.0, 0.0));
        let at_center = box_op(&f, &[4, 0, 0], &bump).unwrap();
        assert!((at_center.get(&[4, 0, 0]) - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        let neighbor = box_op(&f, &[5, 0, 0], &bump).unwrap();
        assert_eq!(neighbor.max_abs(), 0.0);
    }

    #[test]
    fn windows_two_cubes_away_vanish() {
        // support strictly inside cube n = 0: |xi| < 1/2
        let grid = GridSpec::new(1, 6, Domain::TruncatedEuclidean, 4).unwrap();
        let bump = WindowBump::for_grid(&grid);
        let mut f = SpectralField::zeros(&grid);
        f.set(&[1, 0, 0], Complex64::new(1.0, 0.0)); // xi = 1/4
        f.set(&[-1, 0, 0], Complex64::new(0.5, 0.0));
        for m in [-5i64, -4, -3, -2, 2, 3, 4, 5] {
            let w = box_op(&f, &[m, 0, 0], &bump).unwrap();
            assert_eq!(w.max_abs(), 0.0, "window {m}");
        }
        // adjacent window can act on points just outside the plateau
        let mut g = SpectralField::zeros(&grid);
        g.set(&[3, 0, 0], Complex64::new(1.0, 0.0)); // xi = 3/4
        let w = box_op(&g, &[1, 0, 0], &bump).unwrap();
        assert!(w.max_abs() > 0.0);
    }

    #[test]
    fn box_sum_reconstructs_interior() {
        let grid = GridSpec::new(1, 5, Domain::TruncatedEuclidean, 3).unwrap();
        let bump = WindowBump::for_grid(&grid);
        let mut f = SpectralField::zeros(&grid);
        for (i, c) in grid.iter_coords().enumerate() {
            if c[0].abs() <= grid.half_points() - grid.mesh() {
                f.set(&c, Complex64::new(0.3 + i as f64 * 0.01, -0.2));
            }
        }
        let mut sum = SpectralField::zeros(&grid);
        for n in -(grid.extent() - 1)..=(grid.extent() - 1) {
            sum = sum.add(&box_op(&f, &[n, 0, 0], &bump).unwrap()).unwrap();
        }
        for c in grid.iter_coords() {
            if c[0].abs() <= grid.half_points() - 2 * grid.mesh() {
                assert!((sum.get(&c) - f.get(&c)).norm() < 1e-10, "at {c:?}");
            }
        }
    }
}
