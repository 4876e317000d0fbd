//! Pointwise products of fields, exact for band-limited data.
//!
//! The transform of a product is the discrete convolution of the factor
//! coefficients scaled by the frequency-measure weight of the grid.  The
//! default path zero-pads so the convolution is linear, then crops back to
//! the lattice; content generated beyond the lattice extent is dropped.
//! With padding disabled the product is only accepted when the support sum
//! stays on the lattice, otherwise it reports aliasing.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::field::SpectralField;
use crate::spectral::grid::Coord;
use crate::spectral::transform::{forward_transform, inverse_transform};

/// Above this many index pairs the direct path switches to padded FFTs.
const SPARSE_PAIR_CAP: usize = 1 << 22;

fn support_radius(f: &SpectralField) -> i64 {
    let mut r = 0i64;
    f.for_each_nonzero(|c, _| {
        for x in c.iter().take(f.grid().dim()) {
            r = r.max(x.abs());
        }
    });
    r
}

fn sparse_convolve(f: &SpectralField, g: &SpectralField) -> SpectralField {
    let grid = f.grid();
    let half = grid.half_points();
    let mut acc: HashMap<Coord, Complex64> = HashMap::new();
    let mut fa: Vec<(Coord, Complex64)> = Vec::new();
    f.for_each_nonzero(|c, v| fa.push((c, v)));
    let mut gb: Vec<(Coord, Complex64)> = Vec::new();
    g.for_each_nonzero(|c, v| gb.push((c, v)));
    for (ca, va) in &fa {
        for (cb, vb) in &gb {
            let sum = [ca[0] + cb[0], ca[1] + cb[1], ca[2] + cb[2]];
            if sum.iter().take(grid.dim()).all(|x| x.abs() <= half) {
                *acc.entry(sum).or_insert(Complex64::new(0.0, 0.0)) += va * vb;
            }
        }
    }
    let scale = grid.conv_scale();
    let mut out = SpectralField::zeros(grid);
    for (c, v) in acc {
        out.set(&c, v * scale);
    }
    out
}

fn dense_convolve(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    let grid = f.grid();
    let rf = support_radius(f);
    let rg = support_radius(g);
    let m = grid.mesh();
    let pad_extent = ((rf + rg + m - 1) / m).max(1);
    let padded = grid.padded(pad_extent)?;
    let pf = f.embed_into(&padded)?;
    let pg = g.embed_into(&padded)?;
    let xf = inverse_transform(&pf);
    let xg = inverse_transform(&pg);
    let prod: Vec<Complex64> = xf.iter().zip(&xg).map(|(a, b)| a * b).collect();
    let conv = forward_transform(&prod, &padded)?;
    let scale = grid.conv_scale();
    let mut out = SpectralField::zeros(grid);
    conv.for_each_nonzero(|c, v| {
        if grid.in_bounds(&c) {
            out.set(&c, v * scale);
        }
    });
    Ok(out)
}

/// Product `f * g` (or `f * conj(g)`) lifted back to a field.
pub fn pointwise_product(
    f: &SpectralField,
    g: &SpectralField,
    conjugate_g: bool,
) -> Result<SpectralField> {
    pointwise_product_checked(f, g, conjugate_g, true)
}

/// Product with explicit anti-alias control; see module docs.
pub fn pointwise_product_checked(
    f: &SpectralField,
    g: &SpectralField,
    conjugate_g: bool,
    antialias: bool,
) -> Result<SpectralField> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let g_eff;
    let g_ref = if conjugate_g {
        g_eff = g.conjugate_reflect();
        &g_eff
    } else {
        g
    };
    let nnz_f = {
        let mut k = 0usize;
        f.for_each_nonzero(|_, _| k += 1);
        k
    };
    let nnz_g = {
        let mut k = 0usize;
        g_ref.for_each_nonzero(|_, _| k += 1);
        k
    };
    if !antialias {
        let needed = support_radius(f) + support_radius(g_ref);
        let available = f.grid().half_points();
        if needed > available && nnz_f > 0 && nnz_g > 0 {
            return Err(Error::Aliasing { needed, available });
        }
    }
    let real_even = f.flagged_real_even() && g.flagged_real_even();
    let mut out = if nnz_f.saturating_mul(nnz_g) <= SPARSE_PAIR_CAP {
        sparse_convolve(f, g_ref)
    } else {
        dense_convolve(f, g_ref)?
    };
    out.set_real_even_flag(real_even);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::{Domain, GridSpec};

    fn torus(extent: i64) -> GridSpec {
        GridSpec::new(1, extent, Domain::Torus, 1).unwrap()
    }

    #[test]
    fn delta_frequencies_add() {
        let g = torus(8);
        let f1 = SpectralField::delta(&g, &[1, 0, 0], Complex64::new(1.0, 0.0));
        let f2 = SpectralField::delta(&g, &[2, 0, 0], Complex64::new(1.0, 0.0));
        let p = pointwise_product(&f1, &f2, false).unwrap();
        assert!((p.get(&[3, 0, 0]) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        let mut nnz = 0;
        p.for_each_nonzero(|_, _| nnz += 1);
        assert_eq!(nnz, 1);
    }

    #[test]
    fn conjugation_reflects_frequency() {
        let g = torus(8);
        let f1 = SpectralField::delta(&g, &[1, 0, 0], Complex64::new(1.0, 0.0));
        let f2 = SpectralField::delta(&g, &[2, 0, 0], Complex64::new(1.0, 0.0));
        let p = pointwise_product(&f1, &f2, true).unwrap();
        assert!((p.get(&[-1, 0, 0]) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn aliasing_reported_when_padding_off() {
        let g = torus(4);
        let f1 = SpectralField::delta(&g, &[3, 0, 0], Complex64::new(1.0, 0.0));
        let f2 = SpectralField::delta(&g, &[3, 0, 0], Complex64::new(1.0, 0.0));
        let err = pointwise_product_checked(&f1, &f2, false, false).unwrap_err();
        assert!(matches!(err, Error::Aliasing { needed: 6, available: 4 }));
        // with padding the out-of-band sum is cropped, in-band is exact
        let p = pointwise_product(&f1, &f2, false).unwrap();
        assert_eq!(p.max_abs(), 0.0);
    }

    #[test]
    fn sparse_and_dense_paths_agree() {
        use rand::{Rng, SeedableRng};
        let g = torus(16);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let mut a = SpectralField::zeros(&g);
            let mut b = SpectralField::zeros(&g);
            for j in -16i64..=16 {
                a.set(&[j, 0, 0], Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                b.set(&[j, 0, 0], Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            }
            let sparse = sparse_convolve(&a, &b);
            let dense = dense_convolve(&a, &b).unwrap();
            for flat in 0..sparse.coeffs().len() {
                assert!((sparse.coeffs()[flat] - dense.coeffs()[flat]).norm() < 1e-12 * 40.0);
            }
        }
    }

    #[test]
    fn euclidean_products_carry_measure_weight() {
        let g = GridSpec::new(1, 4, Domain::TruncatedEuclidean, 2).unwrap();
        let f1 = SpectralField::delta(&g, &[1, 0, 0], Complex64::new(1.0, 0.0));
        let f2 = SpectralField::delta(&g, &[2, 0, 0], Complex64::new(1.0, 0.0));
        let p = pointwise_product(&f1, &f2, false).unwrap();
        assert!((p.get(&[3, 0, 0]) - Complex64::new(0.5, 0.0)).norm() < 1e-14);
    }
}
