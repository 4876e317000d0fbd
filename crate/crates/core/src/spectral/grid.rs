//! Frequency lattice description.
//!
//! A grid covers the frequencies `xi = j / mesh` with integer `j`,
//! `|j| <= extent * mesh` per axis.  On the torus the mesh is one and the
//! lattice is the integer lattice; truncated Euclidean mode refines each
//! unit frequency cell into `mesh` steps and approximates frequency-side
//! integrals by Riemann sums with weight `mesh^-dim`.

use crate::error::{Error, Result};

/// Cap on total lattice size checked at construction (points, not bytes).
pub const MAX_LATTICE_POINTS: usize = 1 << 26;

/// Underlying manifold for measure and transform conventions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Torus,
    TruncatedEuclidean,
}

impl Domain {
    pub fn as_str(&self) -> &'static str {
        match self {
            Domain::Torus => "torus",
            Domain::TruncatedEuclidean => "truncated-euclidean",
        }
    }
}

impl std::str::FromStr for Domain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "torus" | "t" => Ok(Domain::Torus),
            "truncated-euclidean" | "euclidean" | "r" => Ok(Domain::TruncatedEuclidean),
            other => Err(Error::validation("domain", format!("unknown domain `{other}`"))),
        }
    }
}

/// Lattice coordinate in mesh units, unused axes zero.
pub type Coord = [i64; 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    dim: usize,
    extent: i64,
    domain: Domain,
    mesh: i64,
    /// `extent * mesh`, the largest index per axis.
    half: i64,
    /// `2 * half + 1`, points per axis.
    points_per_axis: usize,
}

impl GridSpec {
    /// Validated constructor; see module docs for the lattice convention.
    pub fn new(dim: usize, extent: i64, domain: Domain, mesh: i64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::validation("dim", format!("dim must be 1, 2 or 3, got {dim}")));
        }
        if extent < 1 {
            return Err(Error::validation("extent", format!("extent must be >= 1, got {extent}")));
        }
        if mesh < 1 {
            return Err(Error::validation("mesh", format!("mesh must be >= 1, got {mesh}")));
        }
        if domain == Domain::Torus && mesh != 1 {
            return Err(Error::validation("mesh", format!("mesh must be 1 on the torus, got {mesh}")));
        }
        let per_axis = 2u128 * extent as u128 * mesh as u128 + 1;
        let total = per_axis.pow(dim as u32);
        if total > MAX_LATTICE_POINTS as u128 {
            return Err(Error::SizeOverflow { points: total, cap: MAX_LATTICE_POINTS });
        }
        Ok(GridSpec {
            dim,
            extent,
            domain,
            mesh,
            half: extent * mesh,
            points_per_axis: per_axis as usize,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn extent(&self) -> i64 {
        self.extent
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn mesh(&self) -> i64 {
        self.mesh
    }

    /// Largest lattice index per axis (`extent * mesh`).
    pub fn half_points(&self) -> i64 {
        self.half
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// Total number of lattice points.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Riemann weight of one lattice point in the frequency measure.
    pub fn measure_weight(&self) -> f64 {
        (self.mesh as f64).powi(-(self.dim as i32))
    }

    /// Scale applied to counting convolutions so products follow the
    /// frequency measure; equals `measure_weight` (one on the torus).
    pub fn conv_scale(&self) -> f64 {
        self.measure_weight()
    }

    pub fn in_bounds(&self, c: &Coord) -> bool {
        (0..self.dim).all(|i| c[i].abs() <= self.half) && (self.dim..3).all(|i| c[i] == 0)
    }

    /// Flat index of a lattice coordinate (mesh units, centered).
    pub fn index_of(&self, c: &Coord) -> usize {
        debug_assert!(self.in_bounds(c));
        let mut idx = 0usize;
        for i in 0..self.dim {
            idx = idx * self.points_per_axis + (c[i] + self.half) as usize;
        }
        idx
    }

    pub fn coord_of(&self, mut flat: usize) -> Coord {
        let mut c = [0i64; 3];
        for i in (0..self.dim).rev() {
            c[i] = (flat % self.points_per_axis) as i64 - self.half;
            flat /= self.points_per_axis;
        }
        c
    }

    /// Frequency vector of a lattice coordinate.
    pub fn freq(&self, c: &Coord) -> [f64; 3] {
        let m = self.mesh as f64;
        [c[0] as f64 / m, c[1] as f64 / m, c[2] as f64 / m]
    }

    /// Euclidean norm `|xi|` of the frequency at a lattice coordinate.
    pub fn freq_norm(&self, c: &Coord) -> f64 {
        let f = self.freq(c);
        (f[0] * f[0] + f[1] * f[1] + f[2] * f[2]).sqrt()
    }

    /// Iterate all lattice coordinates in flat order.
    pub fn iter_coords(&self) -> impl Iterator<Item = Coord> + '_ {
        (0..self.len()).map(|flat| self.coord_of(flat))
    }

    /// Grid with the same mesh and domain but a larger extent.
    pub fn padded(&self, extent: i64) -> Result<GridSpec> {
        GridSpec::new(self.dim, extent, self.domain, self.mesh)
    }
}

/// Unit-cube index owning the frequency `xi`: the unique integer vector `n`
/// with `xi in n + (-1/2, 1/2]^d` per coordinate (upper face inclusive).
pub fn cube_of(grid: &GridSpec, c: &Coord) -> Coord {
    let m = grid.mesh();
    let mut n = [0i64; 3];
    for i in 0..grid.dim() {
        // smallest integer n with 2*j <= 2*n*m + m, i.e. ceil((2j - m) / 2m)
        n[i] = (2 * c[i] + m - 1).div_euclid(2 * m);
    }
    n
}

/// Whether lattice coordinate `c` lies in the half-open cube `n + Q_1`.
pub fn in_cube(grid: &GridSpec, n: &Coord, c: &Coord) -> bool {
    let m = grid.mesh();
    (0..grid.dim()).all(|i| {
        let j2 = 2 * c[i];
        j2 > 2 * n[i] * m - m && j2 <= 2 * n[i] * m + m
    }) && (grid.dim()..3).all(|i| c[i] == 0 && n[i] == 0)
}

/// Weight `<n>^s = (1 + |n|^2)^(s/2)` on cube indices.
pub fn bracket_weight(n: &Coord, s: f64) -> f64 {
    let n2 = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]) as f64;
    (1.0 + n2).powf(s / 2.0)
}

/// Weight `<xi>^s` at a real frequency vector.
pub fn bracket_weight_freq(xi: &[f64; 3], s: f64) -> f64 {
    let x2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    (1.0 + x2).powf(s / 2.0)
}
