//! Linear wave propagation as frequency multipliers.

use num_complex::Complex64;

use crate::spectral::field::{DataPair, SpectralField};

/// `sin(t w) / w` with the continuous limit `t` at `w = 0`.
pub fn wave_kernel(t: f64, omega: f64) -> f64 {
    if omega == 0.0 {
        t
    } else {
        (t * omega).sin() / omega
    }
}

/// Apply the propagator: `cos(t|xi|) F u0 + sin(t|xi|)/|xi| F u1`.
pub fn propagate_linear(pair: &DataPair, t: f64) -> SpectralField {
    let grid = pair.grid().clone();
    let mut out = SpectralField::zeros(&grid);
    let real_even = pair.u0.flagged_real_even() && pair.u1.flagged_real_even();
    for flat in 0..grid.len() {
        let a = pair.u0.coeffs()[flat];
        let b = pair.u1.coeffs()[flat];
        if a == Complex64::new(0.0, 0.0) && b == Complex64::new(0.0, 0.0) {
            continue;
        }
        let omega = grid.freq_norm(&grid.coord_of(flat));
        out.coeffs_mut()[flat] = a * (t * omega).cos() + b * wave_kernel(t, omega);
    }
    out.set_real_even_flag(real_even);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::{Domain, GridSpec};

    #[test]
    fn time_zero_returns_position_data() {
        let g = GridSpec::new(1, 8, Domain::Torus, 1).unwrap();
        let u0 = SpectralField::delta(&g, &[2, 0, 0], Complex64::new(0.3, -0.1));
        let pair = DataPair::new(u0.clone(), SpectralField::zeros(&g)).unwrap();
        let s = propagate_linear(&pair, 0.0);
        assert!((s.get(&[2, 0, 0]) - u0.get(&[2, 0, 0])).norm() < 1e-15);
    }

    #[test]
    fn cosine_multiplier_at_full_period() {
        let g = GridSpec::new(1, 8, Domain::Torus, 1).unwrap();
        let u0 = SpectralField::delta(&g, &[2, 0, 0], Complex64::new(1.0, 0.0));
        let pair = DataPair::new(u0, SpectralField::zeros(&g)).unwrap();
        let s = propagate_linear(&pair, std::f64::consts::PI);
        assert!((s.get(&[2, 0, 0]) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn zero_frequency_kernel_is_time() {
        let g = GridSpec::new(1, 4, Domain::Torus, 1).unwrap();
        let u1 = SpectralField::delta(&g, &[0, 0, 0], Complex64::new(1.0, 0.0));
        let pair = DataPair::new(SpectralField::zeros(&g), u1).unwrap();
        let s = propagate_linear(&pair, 0.3);
        assert!((s.get(&[0, 0, 0]) - Complex64::new(0.3, 0.0)).norm() < 1e-15);
    }
}
