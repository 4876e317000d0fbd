//! Discrete transforms between physical samples and lattice coefficients.
//!
//! Convention: on the torus the coefficients are Fourier coefficients,
//! `F f(n) = (1/|T^d|) int f e^{-i n x} dx`, discretized by the DFT with a
//! `1/n` forward factor, so Parseval reads `sum |F f|^2 = mean |f|^2` with
//! counting measure on the integer lattice.  Physical samples sit on the
//! uniform grid with the same centered flat indexing as the coefficients.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::spectral::field::SpectralField;
use crate::spectral::grid::GridSpec;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// One centered-index DFT along a line of `n` points (odd `n`, half `h`).
/// Forward maps samples to coefficients with the `1/n` factor; inverse is
/// the unnormalized adjoint, so the pair is an exact round trip.
fn line_transform(buf: &mut [Complex64], forward: bool) {
    let n = buf.len();
    let h = (n - 1) / 2;
    let fft = plan(n, !forward);
    fft.process(buf);
    // index rotation: centered lattice index j lives at array slot j + h
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let tau = 2.0 * std::f64::consts::PI / n as f64;
    for slot in 0..n {
        let j = slot as i64 - h as i64;
        let k = j.rem_euclid(n as i64) as usize;
        let phase = if forward {
            tau * (j * h as i64) as f64
        } else {
            -tau * (j * h as i64) as f64
        };
        let tw = Complex64::from_polar(1.0, phase);
        out[slot] = buf[k] * tw;
    }
    let scale = if forward { 1.0 / n as f64 } else { 1.0 };
    for (dst, src) in buf.iter_mut().zip(out) {
        *dst = src * scale;
    }
}

fn transform_nd(data: &mut [Complex64], grid: &GridSpec, forward: bool) {
    let n = grid.points_per_axis();
    let dim = grid.dim();
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    // stride of axis i in the flat layout (row major over dims)
    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        let lines = data.len() / n;
        for l in 0..lines {
            // base offset of the l-th line along this axis
            let block = l / stride;
            let offset = l % stride;
            let base = block * stride * n + offset;
            for (k, slot) in line.iter_mut().enumerate() {
                *slot = data[base + k * stride];
            }
            line_transform(&mut line, forward);
            for (k, slot) in line.iter().enumerate() {
                data[base + k * stride] = *slot;
            }
        }
    }
}

/// Physical samples to lattice coefficients.
pub fn forward_transform(samples: &[Complex64], grid: &GridSpec) -> Result<SpectralField> {
    if samples.len() != grid.len() {
        return Err(Error::validation(
            "samples",
            format!("sample count {} does not match lattice size {}", samples.len(), grid.len()),
        ));
    }
    let mut data = samples.to_vec();
    transform_nd(&mut data, grid, true);
    SpectralField::from_coeffs(grid, data)
}

/// Lattice coefficients to physical samples (synthesis).
pub fn inverse_transform(field: &SpectralField) -> Vec<Complex64> {
    let mut data = field.coeffs().to_vec();
    transform_nd(&mut data, field.grid(), false);
    data
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Domain;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: &GridSpec, seed: u64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..grid.len())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        SpectralField::from_coeffs(grid, coeffs).unwrap()
    }

    #[test]
    fn round_trip_is_identity() {
        for (dim, extent, mesh, dom) in [
            (1usize, 16i64, 1i64, Domain::Torus),
            (2, 5, 1, Domain::Torus),
            (1, 8, 3, Domain::TruncatedEuclidean),
            (3, 2, 1, Domain::Torus),
        ] {
            let grid = GridSpec::new(dim, extent, dom, mesh).unwrap();
            for seed in 0..25 {
                let f = random_field(&grid, seed);
                let samples = inverse_transform(&f);
                let back = forward_transform(&samples, &grid).unwrap();
                let scale = f.max_abs().max(1.0);
                for (a, b) in f.coeffs().iter().zip(back.coeffs()) {
                    assert!((a - b).norm() < 1e-12 * scale);
                }
            }
        }
    }

    #[test]
    fn pure_mode_transforms_to_delta() {
        // f(x) = e^{i 3 x} on the torus
        let grid = GridSpec::new(1, 8, Domain::Torus, 1).unwrap();
        let n = grid.len();
        let samples: Vec<Complex64> = (0..n)
            .map(|flat| {
                let m = grid.coord_of(flat)[0] as f64;
                let x = 2.0 * std::f64::consts::PI * m / n as f64;
                Complex64::from_polar(1.0, 3.0 * x)
            })
            .collect();
        let f = forward_transform(&samples, &grid).unwrap();
        assert!((f.get(&[3, 0, 0]) - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        for flat in 0..n {
            let c = grid.coord_of(flat);
            if c[0] != 3 {
                assert!(f.coeffs()[flat].norm() < 1e-13);
            }
        }
    }

    #[test]
    fn parseval_counting_measure() {
        let grid = GridSpec::new(1, 20, Domain::Torus, 1).unwrap();
        let f = random_field(&grid, 7);
        let samples = inverse_transform(&f);
        let lhs: f64 = f.coeffs().iter().map(|c| c.norm_sqr()).sum();
        let rhs: f64 =
            samples.iter().map(|c| c.norm_sqr()).sum::<f64>() / samples.len() as f64;
        assert!((lhs - rhs).abs() < 1e-12 * lhs.max(1.0));
    }
}
