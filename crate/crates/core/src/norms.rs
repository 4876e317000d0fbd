//! Function-space norms over the frequency lattice.
//!
//! Five families share one spec: Fourier amalgam (`l^q` over unit cubes of
//! `L^p`-in-frequency pieces with `<n>^s` weights), Fourier-Lebesgue,
//! Sobolev, and the smooth-window modulation and Wiener amalgam norms at
//! `p = 2`.  Frequency integrals are Riemann sums with the grid measure;
//! physical `L^2` is normalized so Plancherel is an isometry, which keeps
//! the torus collapse and the `q = 2` modulation/Wiener identity exact.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::spectral::field::{DataPair, SpectralField};
use crate::spectral::grid::{bracket_weight, bracket_weight_freq, cube_of, Coord, GridSpec};
use crate::spectral::product::pointwise_product;
use crate::spectral::transform::inverse_transform;
use crate::spectral::window::WindowBump;
use crate::util::{kahan_sum, lq_reduce};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceFamily {
    FourierAmalgam,
    FourierLebesgue,
    Modulation,
    WienerAmalgam,
    Sobolev,
}

impl SpaceFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpaceFamily::FourierAmalgam => "amalgam",
            SpaceFamily::FourierLebesgue => "fourier-lebesgue",
            SpaceFamily::Modulation => "modulation",
            SpaceFamily::WienerAmalgam => "wiener",
            SpaceFamily::Sobolev => "sobolev",
        }
    }
}

impl std::str::FromStr for SpaceFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "amalgam" | "fourier-amalgam" => Ok(SpaceFamily::FourierAmalgam),
            "fl" | "fourier-lebesgue" => Ok(SpaceFamily::FourierLebesgue),
            "modulation" => Ok(SpaceFamily::Modulation),
            "wiener" | "wiener-amalgam" => Ok(SpaceFamily::WienerAmalgam),
            "sobolev" => Ok(SpaceFamily::Sobolev),
            other => Err(Error::validation("family", format!("unknown space family `{other}`"))),
        }
    }
}

/// One concrete space: family plus exponents `(p, q, s)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceSpec {
    pub family: SpaceFamily,
    pub p: f64,
    pub q: f64,
    pub s: f64,
}

fn check_exponent(name: &'static str, v: f64) -> Result<()> {
    if v.is_nan() || v < 1.0 {
        return Err(Error::validation(name, format!("exponent must lie in [1, inf], got {v}")));
    }
    Ok(())
}

impl SpaceSpec {
    pub fn new(family: SpaceFamily, p: f64, q: f64, s: f64) -> Result<Self> {
        check_exponent("p", p)?;
        check_exponent("q", q)?;
        if !s.is_finite() {
            return Err(Error::validation("s", format!("regularity must be finite, got {s}")));
        }
        match family {
            SpaceFamily::Modulation | SpaceFamily::WienerAmalgam => {
                if p != 2.0 {
                    return Err(Error::validation(
                        "p",
                        format!("{} norms are implemented for p = 2 only, got {p}", family.as_str()),
                    ));
                }
            }
            SpaceFamily::Sobolev => {
                // p, q fixed at 2
                return Ok(SpaceSpec { family, p: 2.0, q: 2.0, s });
            }
            _ => {}
        }
        Ok(SpaceSpec { family, p, q, s })
    }

    pub fn fourier_amalgam(p: f64, q: f64, s: f64) -> Result<Self> {
        SpaceSpec::new(SpaceFamily::FourierAmalgam, p, q, s)
    }

    pub fn fourier_lebesgue(q: f64, s: f64) -> Result<Self> {
        SpaceSpec::new(SpaceFamily::FourierLebesgue, q, q, s)
    }

    pub fn modulation(q: f64, s: f64) -> Result<Self> {
        SpaceSpec::new(SpaceFamily::Modulation, 2.0, q, s)
    }

    pub fn wiener(q: f64, s: f64) -> Result<Self> {
        SpaceSpec::new(SpaceFamily::WienerAmalgam, 2.0, q, s)
    }

    pub fn sobolev(s: f64) -> Self {
        SpaceSpec { family: SpaceFamily::Sobolev, p: 2.0, q: 2.0, s }
    }

    /// Same space with a different regularity weight.
    pub fn with_regularity(&self, s: f64) -> SpaceSpec {
        SpaceSpec { s, ..*self }
    }
}

/// Norm for data pairs `X_s x X_{s-1}` with the `sqrt(2)` weight on the
/// velocity component.
#[derive(Clone, Copy, Debug)]
pub struct PairSpec {
    pub space: SpaceSpec,
}

impl PairSpec {
    pub fn new(space: SpaceSpec) -> Self {
        PairSpec { space }
    }
}

// ---------------------------------------------------------------------------
// cube-based norms
// ---------------------------------------------------------------------------

enum PAcc {
    Finite { sum: f64, carry: f64 },
    Sup(f64),
}

impl PAcc {
    fn new(p: f64) -> Self {
        if p.is_infinite() {
            PAcc::Sup(0.0)
        } else {
            PAcc::Finite { sum: 0.0, carry: 0.0 }
        }
    }

    fn push(&mut self, value: f64, p: f64, weight: f64) {
        match self {
            PAcc::Finite { sum, carry } => {
                let v = value.powf(p) * weight;
                let y = v - *carry;
                let t = *sum + y;
                *carry = (t - *sum) - y;
                *sum = t;
            }
            PAcc::Sup(m) => *m = m.max(value),
        }
    }

    fn finish(&self, p: f64) -> f64 {
        match self {
            PAcc::Finite { sum, .. } => sum.powf(1.0 / p),
            PAcc::Sup(m) => *m,
        }
    }
}

/// `| |chi_{n+Q_1} F f|_{L^p} <n>^s |_{l^q_n}` over the lattice cubes.
pub fn fourier_amalgam_norm(f: &SpectralField, p: f64, q: f64, s: f64) -> f64 {
    let grid = f.grid();
    let w = grid.measure_weight();
    let mut cubes: HashMap<Coord, PAcc> = HashMap::new();
    f.for_each_nonzero(|c, v| {
        let n = cube_of(grid, &c);
        cubes.entry(n).or_insert_with(|| PAcc::new(p)).push(v.norm(), p, w);
    });
    let mut terms: Vec<f64> =
        cubes.iter().map(|(n, acc)| acc.finish(p) * bracket_weight(n, s)).collect();
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    lq_reduce(terms.into_iter(), q)
}

/// Weighted Lebesgue norm of the transform: `| F f <xi>^s |_{L^q}`.
pub fn fl_norm(f: &SpectralField, q: f64, s: f64) -> f64 {
    let grid = f.grid();
    let w = grid.measure_weight();
    if q.is_infinite() {
        let mut sup = 0.0f64;
        f.for_each_nonzero(|c, v| {
            sup = sup.max(v.norm() * bracket_weight_freq(&grid.freq(&c), s));
        });
        return sup;
    }
    let mut terms = Vec::new();
    f.for_each_nonzero(|c, v| {
        terms.push((v.norm() * bracket_weight_freq(&grid.freq(&c), s)).powf(q) * w);
    });
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    kahan_sum(terms.into_iter()).powf(1.0 / q)
}

/// Sobolev norm `H^s`, the `q = 2` Fourier-Lebesgue case.
pub fn sobolev_norm(f: &SpectralField, s: f64) -> f64 {
    fl_norm(f, 2.0, s)
}

// ---------------------------------------------------------------------------
// smooth-window norms (p = 2)
// ---------------------------------------------------------------------------

/// Integer window centers whose bump overlaps the lattice coordinate.
fn axis_window_candidates(bump: &WindowBump, j: i64) -> Vec<i64> {
    let m = bump.mesh();
    let center = j.div_euclid(m);
    (center - 1..=center + 2).filter(|l| bump.h_at_offset(j - l * m) > 0.0).collect()
}

fn window_candidates(grid: &GridSpec, bump: &WindowBump, c: &Coord) -> Vec<Coord> {
    let mut axes: Vec<Vec<i64>> = Vec::with_capacity(grid.dim());
    for i in 0..grid.dim() {
        axes.push(axis_window_candidates(bump, c[i]));
    }
    let mut out = vec![[0i64; 3]];
    for (i, cands) in axes.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * cands.len());
        for base in &out {
            for &v in cands {
                let mut n = *base;
                n[i] = v;
                next.push(n);
            }
        }
        out = next;
    }
    out
}

/// Per-window squared `L^2` masses `sum sigma_n(xi)^2 |F f|^2 w`.
fn window_masses(f: &SpectralField, bump: &WindowBump) -> HashMap<Coord, f64> {
    let grid = f.grid();
    let w = grid.measure_weight();
    let mut masses: HashMap<Coord, f64> = HashMap::new();
    f.for_each_nonzero(|c, v| {
        for n in window_candidates(grid, bump, &c) {
            let sig = bump.sigma(grid, &n, &c);
            if sig != 0.0 {
                *masses.entry(n).or_insert(0.0) += (sig * v.norm()).powi(2) * w;
            }
        }
    });
    masses
}

/// Modulation norm at `p = 2`: `l^q_n` of `<n>^s |box_n f|_{L^2}`, computed
/// on the frequency side by Plancherel.
pub fn modulation_norm(f: &SpectralField, q: f64, s: f64) -> f64 {
    let bump = WindowBump::for_grid(f.grid());
    let mut terms: Vec<f64> =
        window_masses(f, &bump).iter().map(|(n, m2)| m2.sqrt() * bracket_weight(n, s)).collect();
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    lq_reduce(terms.into_iter(), q)
}

/// Wiener amalgam norm at `p = 2`: physical `L^2` of the pointwise `l^q_n`
/// of `<n>^s box_n f(x)` over the active windows.
pub fn wiener_amalgam_norm(f: &SpectralField, q: f64, s: f64) -> f64 {
    let grid = f.grid();
    let bump = WindowBump::for_grid(grid);
    let mut active: BTreeSet<Coord> = BTreeSet::new();
    f.for_each_nonzero(|c, _| {
        for n in window_candidates(grid, &bump, &c) {
            active.insert(n);
        }
    });
    if active.is_empty() {
        return 0.0;
    }
    let npts = grid.len();
    let mut acc = vec![0.0f64; npts];
    for n in &active {
        let weight = bracket_weight(n, s);
        let mut piece = SpectralField::zeros(grid);
        f.for_each_nonzero(|c, v| {
            let sig = bump.sigma(grid, n, &c);
            if sig != 0.0 {
                piece.set(&c, v * sig);
            }
        });
        let phys = inverse_transform(&piece);
        if q.is_infinite() {
            for (a, x) in acc.iter_mut().zip(&phys) {
                *a = a.max(weight * x.norm());
            }
        } else {
            for (a, x) in acc.iter_mut().zip(&phys) {
                *a += (weight * x.norm()).powf(q);
            }
        }
    }
    let mean_sq = if q.is_infinite() {
        kahan_sum(acc.iter().map(|a| a * a)) / npts as f64
    } else {
        kahan_sum(acc.iter().map(|a| a.powf(2.0 / q))) / npts as f64
    };
    // physical L2 normalized so Plancherel is exact
    (grid.measure_weight() * mean_sq).sqrt()
}

/// Norm in any supported family.
pub fn space_norm(f: &SpectralField, spec: &SpaceSpec) -> f64 {
    match spec.family {
        SpaceFamily::FourierAmalgam => fourier_amalgam_norm(f, spec.p, spec.q, spec.s),
        SpaceFamily::FourierLebesgue => fl_norm(f, spec.q, spec.s),
        SpaceFamily::Sobolev => sobolev_norm(f, spec.s),
        SpaceFamily::Modulation => modulation_norm(f, spec.q, spec.s),
        SpaceFamily::WienerAmalgam => wiener_amalgam_norm(f, spec.q, spec.s),
    }
}

/// Single `l^q` term at `n = n0`: cube piece for the sharp families,
/// `<n0>^s |sigma_{n0} F f|_{L^2}` for the smooth ones (Plancherel form).
pub fn restricted_norm(f: &SpectralField, spec: &SpaceSpec, n0: &Coord) -> Result<f64> {
    let grid = f.grid();
    if n0.iter().take(grid.dim()).any(|&ni| ni.abs() > grid.extent()) {
        return Err(Error::validation("n0", format!("cube index {n0:?} outside lattice")));
    }
    let value = match spec.family {
        SpaceFamily::FourierAmalgam | SpaceFamily::FourierLebesgue | SpaceFamily::Sobolev => {
            let p = match spec.family {
                SpaceFamily::FourierAmalgam => spec.p,
                SpaceFamily::FourierLebesgue => spec.q,
                _ => 2.0,
            };
            let w = grid.measure_weight();
            let mut acc = PAcc::new(p);
            f.for_each_nonzero(|c, v| {
                if cube_of(grid, &c) == *n0 {
                    acc.push(v.norm(), p, w);
                }
            });
            acc.finish(p) * bracket_weight(n0, spec.s)
        }
        SpaceFamily::Modulation | SpaceFamily::WienerAmalgam => {
            let bump = WindowBump::for_grid(grid);
            let w = grid.measure_weight();
            let mut mass = 0.0;
            f.for_each_nonzero(|c, v| {
                let sig = bump.sigma(grid, n0, &c);
                if sig != 0.0 {
                    mass += (sig * v.norm()).powi(2) * w;
                }
            });
            mass.sqrt() * bracket_weight(n0, spec.s)
        }
    };
    Ok(value)
}

/// `|u0|_{X_s} + sqrt(2) |u1|_{X_{s-1}}`.
pub fn pair_norm(pair: &DataPair, spec: &PairSpec) -> f64 {
    let s = spec.space.s;
    space_norm(&pair.u0, &spec.space)
        + std::f64::consts::SQRT_2 * space_norm(&pair.u1, &spec.space.with_regularity(s - 1.0))
}

/// Outcome of the module-inequality check
/// `|f g|_{X} <= |f|_{FL^1} |g|_{X} (1 + tol)`.
#[derive(Clone, Copy, Debug)]
pub struct AlgebraCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

pub fn algebra_check(
    f: &SpectralField,
    g: &SpectralField,
    spec: &SpaceSpec,
    tol: f64,
) -> Result<AlgebraCheck> {
    let product = pointwise_product(f, g, false)?;
    let lhs = space_norm(&product, spec);
    let rhs = f.fl1_norm() * space_norm(g, spec);
    Ok(AlgebraCheck { lhs, rhs, ok: lhs <= rhs * (1.0 + tol) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Domain;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn torus(extent: i64) -> GridSpec {
        GridSpec::new(1, extent, Domain::Torus, 1).unwrap()
    }

    fn random_field(grid: &GridSpec, seed: u64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..grid.len())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        SpectralField::from_coeffs(grid, coeffs).unwrap()
    }

    #[test]
    fn amalgam_singleton_cube() {
        let g = torus(8);
        let f = SpectralField::delta(&g, &[3, 0, 0], Complex64::new(1.0, 0.0));
        for s in [-0.7, 0.0, 1.3] {
            let expected = 10f64.powf(s / 2.0); // <3>^s
            for (p, q) in [(1.0, 1.0), (2.0, 1.0), (f64::INFINITY, 2.0), (1.5, f64::INFINITY)] {
                assert!((fourier_amalgam_norm(&f, p, q, s) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn torus_collapse_p_independent_equals_fl() {
        let g = torus(12);
        for seed in 0..20 {
            let f = random_field(&g, seed);
            for (q, s) in [(1.0, -0.4), (2.0, 0.0), (3.0, 0.8), (f64::INFINITY, -1.0)] {
                let base = fl_norm(&f, q, s);
                for p in [1.0, 2.0, 2.7, f64::INFINITY] {
                    let a = fourier_amalgam_norm(&f, p, q, s);
                    assert!((a - base).abs() <= 1e-12 * base.max(1.0), "p={p} q={q} s={s}");
                }
            }
        }
    }

    #[test]
    fn p_equals_q_matches_fl_on_euclidean_at_zero_weight() {
        let g = GridSpec::new(1, 6, Domain::TruncatedEuclidean, 3).unwrap();
        for seed in 0..10 {
            let f = random_field(&g, seed);
            for q in [1.0, 2.0, 4.0] {
                let a = fourier_amalgam_norm(&f, q, q, 0.0);
                let b = fl_norm(&f, q, 0.0);
                assert!((a - b).abs() <= 1e-12 * b.max(1.0));
            }
        }
    }

    #[test]
    fn fl_examples() {
        let g = torus(4);
        let d0 = SpectralField::delta(&g, &[0, 0, 0], Complex64::new(1.0, 0.0));
        for (q, s) in [(1.0, 0.3), (2.0, -0.8), (f64::INFINITY, 1.0)] {
            assert!((fl_norm(&d0, q, s) - 1.0).abs() < 1e-14);
        }
        let mut f = SpectralField::zeros(&g);
        f.set(&[0, 0, 0], Complex64::new(1.0, 0.0));
        f.set(&[1, 0, 0], Complex64::new(1.0, 0.0));
        assert!((fl_norm(&f, 2.0, 0.0) - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn sobolev_equals_amalgam_22_on_torus() {
        let g = torus(10);
        for seed in 0..10 {
            let f = random_field(&g, seed);
            for s in [-0.9, 0.0, 1.7] {
                let a = sobolev_norm(&f, s);
                let b = fourier_amalgam_norm(&f, 2.0, 2.0, s);
                assert!((a - b).abs() <= 1e-10 * a.max(1.0));
            }
        }
    }

    #[test]
    fn window_norms_of_lattice_delta() {
        let g = torus(8);
        let f = SpectralField::delta(&g, &[5, 0, 0], Complex64::new(1.0, 0.0));
        let expected = 26f64.powf(-0.35); // <5>^s at s = -0.7
        assert!((modulation_norm(&f, 1.0, -0.7) - expected).abs() < 1e-12);
        assert!((wiener_amalgam_norm(&f, 1.0, -0.7) - expected).abs() < 1e-10);
    }

    #[test]
    fn wiener_q2_equals_modulation_q2() {
        for grid in [torus(9), GridSpec::new(1, 5, Domain::TruncatedEuclidean, 3).unwrap()] {
            for seed in 0..8 {
                let f = random_field(&grid, seed);
                for s in [-0.6, 0.4] {
                    let m = modulation_norm(&f, 2.0, s);
                    let w = wiener_amalgam_norm(&f, 2.0, s);
                    assert!((m - w).abs() <= 1e-8 * m.max(1.0), "s={s} m={m} w={w}");
                }
            }
        }
    }

    #[test]
    fn wiener_l_embeddings_are_monotone_in_q() {
        // l^{q2} -> l^{q1} for q1 >= q2 with constant one
        for grid in [torus(7), GridSpec::new(1, 4, Domain::TruncatedEuclidean, 2).unwrap()] {
            for seed in 0..8 {
                let f = random_field(&grid, seed);
                let qs = [1.0, 2.0, 4.0, f64::INFINITY];
                for w in qs.windows(2) {
                    let lo = wiener_amalgam_norm(&f, w[1], -0.3);
                    let hi = wiener_amalgam_norm(&f, w[0], -0.3);
                    assert!(lo <= hi * (1.0 + 1e-10), "q {} vs {}", w[1], w[0]);
                }
            }
        }
    }

    #[test]
    fn restricted_examples() {
        let g = torus(6);
        let f = SpectralField::delta(&g, &[1, 0, 0], Complex64::new(1.0, 0.0));
        for s in [-0.4, 0.0, 2.0] {
            let spec = SpaceSpec::fourier_amalgam(2.0, 1.0, s).unwrap();
            let r = restricted_norm(&f, &spec, &[1, 0, 0]).unwrap();
            assert!((r - 2f64.powf(s / 2.0)).abs() < 1e-13);
        }
        // restricted term never exceeds the full norm
        for seed in 0..10 {
            let f = random_field(&g, seed);
            for spec in [
                SpaceSpec::fourier_amalgam(2.0, 1.5, -0.5).unwrap(),
                SpaceSpec::modulation(2.0, -0.5).unwrap(),
                SpaceSpec::sobolev(0.3),
            ] {
                let full = space_norm(&f, &spec);
                let r = restricted_norm(&f, &spec, &[1, 0, 0]).unwrap();
                assert!(r <= full * (1.0 + 1e-10));
            }
        }
    }

    #[test]
    fn restricted_rescaling_between_weights() {
        let g = torus(6);
        let f = random_field(&g, 3);
        let (s, theta) = (-0.4, 1.7);
        for spec in [
            SpaceSpec::fourier_amalgam(2.0, 1.0, s).unwrap(),
            SpaceSpec::wiener(1.0, s).unwrap(),
        ] {
            let at_s = restricted_norm(&f, &spec, &[1, 0, 0]).unwrap();
            let at_theta = restricted_norm(&f, &spec.with_regularity(theta), &[1, 0, 0]).unwrap();
            let factor = 2f64.powf((theta - s) / 2.0);
            assert!((at_theta - factor * at_s).abs() <= 1e-10 * at_theta.max(1.0));
        }
    }

    #[test]
    fn pair_norm_is_weighted_sum() {
        let g = torus(5);
        let f = random_field(&g, 1);
        let h = random_field(&g, 2);
        let spec = PairSpec::new(SpaceSpec::fourier_amalgam(2.0, 2.0, -0.4).unwrap());
        let zero = SpectralField::zeros(&g);
        let a = pair_norm(&DataPair::new(f.clone(), zero.clone()).unwrap(), &spec);
        assert!((a - space_norm(&f, &spec.space)).abs() < 1e-14);
        let b = pair_norm(&DataPair::new(zero.clone(), h.clone()).unwrap(), &spec);
        let expect =
            2f64.sqrt() * space_norm(&h, &spec.space.with_regularity(spec.space.s - 1.0));
        assert!((b - expect).abs() < 1e-14);
        let c = pair_norm(&DataPair::new(f, h).unwrap(), &spec);
        assert!((c - a - b).abs() < 1e-12 * c.max(1.0));
    }

    #[test]
    fn algebra_module_inequality() {
        let g = torus(16);
        let spec = SpaceSpec::fourier_amalgam(2.0, 1.0, 0.0).unwrap();
        // constant factor: equality up to rounding
        let one = SpectralField::delta(&g, &[0, 0, 0], Complex64::new(1.0, 0.0));
        let f = random_field(&g, 5);
        let chk = algebra_check(&one, &f, &spec, 1e-10).unwrap();
        assert!(chk.ok);
        assert!((chk.lhs - chk.rhs).abs() < 1e-10 * chk.rhs);
        // two deltas
        let d1 = SpectralField::delta(&g, &[1, 0, 0], Complex64::new(1.0, 0.0));
        let d2 = SpectralField::delta(&g, &[2, 0, 0], Complex64::new(1.0, 0.0));
        let chk = algebra_check(&d1, &d2, &spec, 1e-10).unwrap();
        assert!((chk.lhs - 1.0).abs() < 1e-13 && (chk.rhs - 1.0).abs() < 1e-13 && chk.ok);
        // random band-limited pairs on a 33-point lattice
        for seed in 0..25 {
            let f = random_field(&g, 100 + seed);
            let h = random_field(&g, 200 + seed);
            for spec in [
                SpaceSpec::fourier_amalgam(2.0, 1.0, 0.0).unwrap(),
                SpaceSpec::fourier_amalgam(f64::INFINITY, f64::INFINITY, 0.0).unwrap(),
                SpaceSpec::fourier_lebesgue(1.0, 0.0).unwrap(),
            ] {
                assert!(algebra_check(&f, &h, &spec, 1e-10).unwrap().ok, "seed {seed}");
            }
        }
    }

    #[test]
    fn monotone_weight_for_single_cube_support() {
        let g = torus(8);
        let mut f = SpectralField::zeros(&g);
        f.set(&[4, 0, 0], Complex64::new(0.7, 0.1));
        let spec = |s: f64| SpaceSpec::fourier_amalgam(2.0, 2.0, s).unwrap();
        let mut prev = 0.0;
        for k in 0..10 {
            let s = -2.0 + 0.5 * k as f64;
            let v = space_norm(&f, &spec(s));
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn homogeneity_and_triangle() {
        let specs = [
            SpaceSpec::fourier_amalgam(1.0, 1.0, -0.5).unwrap(),
            SpaceSpec::fourier_amalgam(2.0, f64::INFINITY, 0.7).unwrap(),
            SpaceSpec::fourier_lebesgue(2.0, -1.0).unwrap(),
            SpaceSpec::modulation(1.0, -0.4).unwrap(),
            SpaceSpec::wiener(2.0, 0.3).unwrap(),
            SpaceSpec::sobolev(-0.2),
        ];
        for grid in [torus(6), GridSpec::new(1, 3, Domain::TruncatedEuclidean, 2).unwrap()] {
            for seed in 0..17 {
                let f = random_field(&grid, 300 + seed);
                let g2 = random_field(&grid, 400 + seed);
                let alpha = Complex64::new(-1.3, 0.7);
                for spec in &specs {
                    let nf = space_norm(&f, spec);
                    let ng = space_norm(&g2, spec);
                    let nsum = space_norm(&f.add(&g2).unwrap(), spec);
                    let nscaled = space_norm(&f.scaled(alpha), spec);
                    assert!(nsum <= (nf + ng) * (1.0 + 1e-10), "{spec:?}");
                    assert!((nscaled - alpha.norm() * nf).abs() <= 1e-10 * nscaled.max(1.0));
                }
            }
        }
    }
}
