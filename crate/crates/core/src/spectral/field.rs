//! Complex coefficient fields on a frequency lattice.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::grid::{in_cube, Coord, GridSpec};

/// Complex amplitudes per lattice frequency; the discrete stand-in for a
/// Fourier transform on the torus or a truncated Euclidean space.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
    real_even: bool,
}

impl SpectralField {
    pub fn zeros(grid: &GridSpec) -> Self {
        SpectralField {
            grid: grid.clone(),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
            real_even: true,
        }
    }

    pub fn from_coeffs(grid: &GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::validation(
                "coeffs",
                format!("length {} does not match lattice size {}", coeffs.len(), grid.len()),
            ));
        }
        Ok(SpectralField { grid: grid.clone(), coeffs, real_even: false })
    }

    /// Single unit coefficient at a lattice coordinate.
    pub fn delta(grid: &GridSpec, at: &Coord, amplitude: Complex64) -> Self {
        let mut f = SpectralField::zeros(grid);
        f.set(at, amplitude);
        f.real_even = false;
        f
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        self.real_even = false;
        &mut self.coeffs
    }

    pub fn get(&self, at: &Coord) -> Complex64 {
        self.coeffs[self.grid.index_of(at)]
    }

    pub fn set(&mut self, at: &Coord, value: Complex64) {
        let idx = self.grid.index_of(at);
        self.coeffs[idx] = value;
        self.real_even = false;
    }

    /// Marker set by constructors that guarantee `F f(-xi) = F f(xi)` real.
    pub fn flagged_real_even(&self) -> bool {
        self.real_even
    }

    pub fn set_real_even_flag(&mut self, flag: bool) {
        self.real_even = flag;
    }

    /// Verify the real-even symmetry within an absolute tolerance.
    pub fn check_real_even(&self, tol: f64) -> bool {
        for flat in 0..self.coeffs.len() {
            let c = self.grid.coord_of(flat);
            let v = self.coeffs[flat];
            if v.im.abs() > tol {
                return false;
            }
            let neg = [-c[0], -c[1], -c[2]];
            let w = self.coeffs[self.grid.index_of(&neg)];
            if (v - w).norm() > tol {
                return false;
            }
        }
        true
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coordinates of numerically nonzero coefficients.
    pub fn support(&self) -> Vec<Coord> {
        let mut out = Vec::new();
        for flat in 0..self.coeffs.len() {
            if self.coeffs[flat] != Complex64::new(0.0, 0.0) {
                out.push(self.grid.coord_of(flat));
            }
        }
        out
    }

    pub fn for_each_nonzero(&self, mut f: impl FnMut(Coord, Complex64)) {
        for flat in 0..self.coeffs.len() {
            let v = self.coeffs[flat];
            if v != Complex64::new(0.0, 0.0) {
                f(self.grid.coord_of(flat), v);
            }
        }
    }

    /// Field of the complex conjugate function: `out(xi) = conj(in(-xi))`.
    pub fn conjugate_reflect(&self) -> SpectralField {
        let mut out = SpectralField::zeros(&self.grid);
        for flat in 0..self.coeffs.len() {
            let c = self.grid.coord_of(flat);
            let neg = [-c[0], -c[1], -c[2]];
            out.coeffs[self.grid.index_of(&neg)] = self.coeffs[flat].conj();
        }
        out.real_even = self.real_even;
        out
    }

    pub fn scaled(&self, a: Complex64) -> SpectralField {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= a;
        }
        out.real_even = self.real_even && a.im == 0.0;
        out
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        out.real_even = self.real_even && other.real_even;
        Ok(out)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        out.real_even = self.real_even && other.real_even;
        Ok(out)
    }

    /// Copy coefficients into a grid with the same mesh and domain and at
    /// least the same extent.
    pub fn embed_into(&self, grid: &GridSpec) -> Result<SpectralField> {
        if grid.dim() != self.grid.dim()
            || grid.mesh() != self.grid.mesh()
            || grid.domain() != self.grid.domain()
            || grid.extent() < self.grid.extent()
        {
            return Err(Error::validation(
                "grid",
                "embedding target must share dim, mesh and domain and be at least as wide",
            ));
        }
        let mut out = SpectralField::zeros(grid);
        self.for_each_nonzero(|c, v| out.set(&c, v));
        out.real_even = self.real_even;
        Ok(out)
    }

    /// Weighted l^1 of the coefficients: the Wiener-algebra norm `FL^1`.
    pub fn fl1_norm(&self) -> f64 {
        let w = self.grid.measure_weight();
        crate::util::kahan_sum(self.coeffs.iter().map(|c| c.norm())) * w
    }
}

/// Zero all coefficients outside the half-open unit cube at integer `n`.
pub fn cube_restrict(f: &SpectralField, n: &Coord) -> Result<SpectralField> {
    if n.iter().take(f.grid().dim()).any(|&ni| ni.abs() > f.grid().extent()) {
        return Err(Error::validation("cube", format!("cube index {n:?} outside lattice extent")));
    }
    let grid = f.grid().clone();
    let mut out = SpectralField::zeros(&grid);
    for flat in 0..f.coeffs().len() {
        let c = grid.coord_of(flat);
        if in_cube(&grid, n, &c) {
            out.coeffs[flat] = f.coeffs[flat];
        }
    }
    out.real_even = false;
    Ok(out)
}

/// Initial data pair `(u0, u1)` on one grid.
#[derive(Clone, Debug)]
pub struct DataPair {
    pub u0: SpectralField,
    pub u1: SpectralField,
}

impl DataPair {
    pub fn new(u0: SpectralField, u1: SpectralField) -> Result<Self> {
        if u0.grid() != u1.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(DataPair { u0, u1 })
    }

    pub fn zeros(grid: &GridSpec) -> Self {
        DataPair { u0: SpectralField::zeros(grid), u1: SpectralField::zeros(grid) }
    }

    pub fn grid(&self) -> &GridSpec {
        self.u0.grid()
    }

    pub fn add(&self, other: &DataPair) -> Result<DataPair> {
        Ok(DataPair { u0: self.u0.add(&other.u0)?, u1: self.u1.add(&other.u1)? })
    }

    /// Pair norm in the Wiener algebra: `|u0|_FL1 + sqrt(2) |u1|_FL1_{-1}`.
    pub fn fl1_pair_norm(&self) -> f64 {
        let w = self.grid().measure_weight();
        let m1: f64 = crate::util::kahan_sum(self.u0.coeffs().iter().map(|c| c.norm())) * w;
        let mut terms = Vec::with_capacity(self.u1.coeffs().len());
        for flat in 0..self.u1.coeffs().len() {
            let c = self.grid().coord_of(flat);
            let xi = self.grid().freq(&c);
            terms.push(self.u1.coeffs()[flat].norm() * crate::spectral::grid::bracket_weight_freq(&xi, -1.0));
        }
        m1 + std::f64::consts::SQRT_2 * crate::util::kahan_sum(terms.into_iter()) * w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Domain;

    fn torus(extent: i64) -> GridSpec {
        GridSpec::new(1, extent, Domain::Torus, 1).unwrap()
    }

    #[test]
    fn cube_restrict_singleton() {
        let g = torus(8);
        let f = SpectralField::delta(&g, &[3, 0, 0], Complex64::new(1.0, 0.0));
        let same = cube_restrict(&f, &[3, 0, 0]).unwrap();
        assert_eq!(same.get(&[3, 0, 0]), Complex64::new(1.0, 0.0));
        let gone = cube_restrict(&f, &[2, 0, 0]).unwrap();
        assert_eq!(gone.max_abs(), 0.0);
    }

    #[test]
    fn cube_restrict_mesh_boundary() {
        let g = GridSpec::new(1, 4, Domain::TruncatedEuclidean, 2).unwrap();
        let f = SpectralField::delta(&g, &[5, 0, 0], Complex64::new(1.0, 0.0));
        assert_eq!(cube_restrict(&f, &[2, 0, 0]).unwrap().max_abs(), 1.0);
        assert_eq!(cube_restrict(&f, &[3, 0, 0]).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn conjugate_reflect_moves_frequency() {
        let g = torus(4);
        let f = SpectralField::delta(&g, &[2, 0, 0], Complex64::new(0.0, 1.0));
        let r = f.conjugate_reflect();
        assert_eq!(r.get(&[-2, 0, 0]), Complex64::new(0.0, -1.0));
        assert_eq!(r.get(&[2, 0, 0]), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn real_even_check() {
        let g = torus(4);
        let mut f = SpectralField::zeros(&g);
        f.set(&[1, 0, 0], Complex64::new(2.0, 0.0));
        f.set(&[-1, 0, 0], Complex64::new(2.0, 0.0));
        assert!(f.check_real_even(1e-12));
        f.set(&[-1, 0, 0], Complex64::new(2.0, 1e-6));
        assert!(!f.check_real_even(1e-12));
    }
}
