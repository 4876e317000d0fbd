//! Time quadrature for the wave Duhamel integral.
//!
//! The standalone `duhamel` operation integrates
//! `int_0^t sin((t-tau)|xi|)/|xi| G(tau, xi) dtau` per frequency with a
//! composite rule and a Richardson error estimate.  The Picard engine uses
//! the cumulative integrator below on a single global mesh so nested
//! integrals reuse the same nodes.

use num_complex::Complex64;

use crate::engine::linear::wave_kernel;
use crate::error::{Error, Result};
use crate::spectral::field::SpectralField;
use crate::spectral::grid::GridSpec;

pub const QUADRATURE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadratureRule {
    Simpson,
    GaussLegendre,
}

/// Time discretization: rule plus node density per unit time.
#[derive(Clone, Copy, Debug)]
pub struct TimeMesh {
    pub rule: QuadratureRule,
    pub nodes_per_unit: usize,
}

impl TimeMesh {
    pub fn new(rule: QuadratureRule, nodes_per_unit: usize) -> Result<Self> {
        if nodes_per_unit == 0 {
            return Err(Error::validation("nodes_per_unit", "must be positive"));
        }
        Ok(TimeMesh { rule, nodes_per_unit })
    }

    pub fn simpson(nodes_per_unit: usize) -> Self {
        TimeMesh { rule: QuadratureRule::Simpson, nodes_per_unit }
    }

    /// Interval count over `[0, t]`: a multiple of four so both the full
    /// rule and its half-resolution Richardson companion are even.
    pub fn node_count(&self, t: f64) -> usize {
        let raw = (self.nodes_per_unit as f64 * t.abs()).ceil() as usize;
        let rounded = raw.div_ceil(4) * 4;
        rounded.clamp(32, 1 << 20)
    }
}

impl Default for TimeMesh {
    fn default() -> Self {
        TimeMesh { rule: QuadratureRule::Simpson, nodes_per_unit: 512 }
    }
}

#[derive(Clone, Debug)]
pub struct DuhamelResult {
    pub field: SpectralField,
    /// Richardson estimate of the quadrature error, relative to `1 + max`.
    pub error_estimate: f64,
}

fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; n + 1];
    for (j, wj) in w.iter_mut().enumerate() {
        *wj = if j == 0 || j == n {
            h / 3.0
        } else if j % 2 == 1 {
            4.0 * h / 3.0
        } else {
            2.0 * h / 3.0
        };
    }
    w
}

fn kernel_weighted_sum(
    samples: &[SpectralField],
    weights: &[f64],
    taus: &[f64],
    t: f64,
    grid: &GridSpec,
) -> SpectralField {
    let mut out = SpectralField::zeros(grid);
    for flat in 0..grid.len() {
        let omega = grid.freq_norm(&grid.coord_of(flat));
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, f) in samples.iter().enumerate() {
            let v = f.coeffs()[flat];
            if v != Complex64::new(0.0, 0.0) {
                acc += v * (weights[j] * wave_kernel(t - taus[j], omega));
            }
        }
        out.coeffs_mut()[flat] = acc;
    }
    out
}

const GL4_NODES: [f64; 4] = [
    -0.8611363115940526,
    -0.3399810435848563,
    0.3399810435848563,
    0.8611363115940526,
];
const GL4_WEIGHTS: [f64; 4] =
    [0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538];

fn gauss_integral(
    provider: &mut dyn FnMut(f64) -> SpectralField,
    t: f64,
    panels: usize,
    grid: &GridSpec,
) -> SpectralField {
    let mut out = SpectralField::zeros(grid);
    let h = t / panels as f64;
    for panel in 0..panels {
        let a = panel as f64 * h;
        for (x, wq) in GL4_NODES.iter().zip(GL4_WEIGHTS) {
            let tau = a + 0.5 * h * (x + 1.0);
            let f = provider(tau);
            let weight = 0.5 * h * wq;
            for flat in 0..grid.len() {
                let v = f.coeffs()[flat];
                if v != Complex64::new(0.0, 0.0) {
                    let omega = grid.freq_norm(&grid.coord_of(flat));
                    out.coeffs_mut()[flat] += v * (weight * wave_kernel(t - tau, omega));
                }
            }
        }
    }
    out
}

/// Integrate the wave kernel against a time-indexed integrand provider.
pub fn duhamel(
    provider: &mut dyn FnMut(f64) -> SpectralField,
    t: f64,
    mesh: &TimeMesh,
) -> Result<DuhamelResult> {
    if !(t > 0.0) {
        return Err(Error::validation("t", format!("upper limit must be positive, got {t}")));
    }
    let (fine, coarse, order_gain) = match mesh.rule {
        QuadratureRule::Simpson => {
            let n = mesh.node_count(t);
            let h = t / n as f64;
            let taus: Vec<f64> = (0..=n).map(|j| j as f64 * h).collect();
            let samples: Vec<SpectralField> = taus.iter().map(|&tau| provider(tau)).collect();
            let grid = samples[0].grid().clone();
            let fine = kernel_weighted_sum(&samples, &simpson_weights(n, h), &taus, t, &grid);
            // every second sample: same rule at twice the step
            let taus2: Vec<f64> = taus.iter().copied().step_by(2).collect();
            let samples2: Vec<SpectralField> =
                samples.iter().step_by(2).cloned().collect();
            let coarse =
                kernel_weighted_sum(&samples2, &simpson_weights(n / 2, 2.0 * h), &taus2, t, &grid);
            (fine, coarse, 15.0)
        }
        QuadratureRule::GaussLegendre => {
            let panels = (mesh.node_count(t) / 4).max(2);
            let probe = provider(0.0);
            let grid = probe.grid().clone();
            let fine = gauss_integral(provider, t, panels, &grid);
            let coarse = gauss_integral(provider, t, panels / 2, &grid);
            (fine, coarse, 255.0)
        }
    };
    let mut max_diff = 0.0f64;
    let mut max_val = 0.0f64;
    for (a, b) in fine.coeffs().iter().zip(coarse.coeffs()) {
        max_diff = max_diff.max((a - b).norm());
        max_val = max_val.max(a.norm());
    }
    let error_estimate = max_diff / order_gain / (1.0 + max_val);
    if error_estimate > QUADRATURE_TOLERANCE {
        return Err(Error::QuadratureTolerance {
            estimate: error_estimate,
            tolerance: QUADRATURE_TOLERANCE,
        });
    }
    Ok(DuhamelResult { field: fine, error_estimate })
}

// ---------------------------------------------------------------------------
// cumulative integration on a shared mesh
// ---------------------------------------------------------------------------

/// Prefix integrals `I_j = int_0^{j h} f` of uniformly sampled values:
/// composite Simpson at even indices, a four-point corrector panel closing
/// each odd index, both with fifth-order local error.
pub fn prefix_integrals(samples: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = samples.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    if n < 4 {
        // short meshes fall back to trapezoids
        for j in 1..n {
            out[j] = out[j - 1] + (samples[j - 1] + samples[j]) * (h / 2.0);
        }
        return out;
    }
    for j in (2..n).step_by(2) {
        out[j] = out[j - 2] + (samples[j - 2] + samples[j - 1] * 4.0 + samples[j]) * (h / 3.0);
    }
    // cubic panel over [0, h] read forward
    out[1] = (samples[0] * 9.0 + samples[1] * 19.0 - samples[2] * 5.0 + samples[3]) * (h / 24.0);
    for j in (3..n).step_by(2) {
        out[j] = out[j - 1]
            + (samples[j] * 9.0 + samples[j - 1] * 19.0 - samples[j - 2] * 5.0 + samples[j - 3])
                * (h / 24.0);
    }
    out
}

/// Cumulative Duhamel values `N(t_i)` at every node of the shared mesh from
/// integrand samples of one frequency column with `|xi| = omega`, using the
/// split kernel `sin((t-tau)w) = sin(tw)cos(tau w) - cos(tw)sin(tau w)`.
pub fn cumulative_duhamel_column(
    samples: &[Complex64],
    omega: f64,
    h: f64,
    scratch: &mut Vec<Complex64>,
) -> Vec<Complex64> {
    let n = samples.len();
    scratch.clear();
    scratch.resize(2 * n, Complex64::new(0.0, 0.0));
    let (cosed, sined) = scratch.split_at_mut(n);
    if omega == 0.0 {
        // kernel (t - tau): t * prefix(G) - prefix(tau G)
        for j in 0..n {
            cosed[j] = samples[j];
            sined[j] = samples[j] * (j as f64 * h);
        }
        let p = prefix_integrals(cosed, h);
        let q = prefix_integrals(sined, h);
        return (0..n).map(|j| p[j] * (j as f64 * h) - q[j]).collect();
    }
    for j in 0..n {
        let tau = j as f64 * h;
        cosed[j] = samples[j] * (omega * tau).cos();
        sined[j] = samples[j] * (omega * tau).sin();
    }
    let pc = prefix_integrals(cosed, h);
    let ps = prefix_integrals(sined, h);
    (0..n)
        .map(|j| {
            let t = j as f64 * h;
            (pc[j] * (omega * t).sin() - ps[j] * (omega * t).cos()) / omega
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Domain;

    #[test]
    fn constant_integrand_closed_forms() {
        let grid = GridSpec::new(1, 25, Domain::Torus, 1).unwrap();
        let mesh = TimeMesh::default();
        for t in [0.4, 0.7, 1.0] {
            let mut field = SpectralField::zeros(&grid);
            for xi in [0i64, 1, 5, 20] {
                field.set(&[xi, 0, 0], Complex64::new(1.0, 0.0));
            }
            let result = duhamel(&mut |_tau| field.clone(), t, &mesh).unwrap();
            for xi in [0i64, 1, 5, 20] {
                let got = result.field.get(&[xi, 0, 0]);
                let expect = if xi == 0 {
                    t * t / 2.0
                } else {
                    let w = xi as f64;
                    (1.0 - (t * w).cos()) / (w * w)
                };
                assert!(
                    (got - Complex64::new(expect, 0.0)).norm() < 1e-8,
                    "xi={xi} t={t} got={got} expect={expect}"
                );
            }
        }
    }

    #[test]
    fn gauss_legendre_matches_simpson() {
        let grid = GridSpec::new(1, 6, Domain::Torus, 1).unwrap();
        let t = 0.8;
        let mut provider = |tau: f64| {
            let mut f = SpectralField::zeros(&grid);
            f.set(&[2, 0, 0], Complex64::new((2.0 * tau).cos(), 0.1 * tau));
            f
        };
        let simpson = duhamel(&mut provider, t, &TimeMesh::simpson(512)).unwrap();
        let gauss = duhamel(
            &mut provider,
            t,
            &TimeMesh::new(QuadratureRule::GaussLegendre, 256).unwrap(),
        )
        .unwrap();
        let d = (simpson.field.get(&[2, 0, 0]) - gauss.field.get(&[2, 0, 0])).norm();
        assert!(d < 1e-10, "difference {d}");
    }

    #[test]
    fn tolerance_violation_is_reported() {
        let grid = GridSpec::new(1, 40, Domain::Torus, 1).unwrap();
        // a wildly oscillatory integrand with far too few nodes
        let mut provider = |tau: f64| {
            let mut f = SpectralField::zeros(&grid);
            f.set(&[40, 0, 0], Complex64::new((500.0 * tau).cos() * 1e4, 0.0));
            f
        };
        let err = duhamel(&mut provider, 1.0, &TimeMesh::simpson(32)).unwrap_err();
        assert!(matches!(err, Error::QuadratureTolerance { .. }));
    }

    #[test]
    fn prefix_integrals_fourth_order() {
        // f(tau) = cos(3 tau): I(x) = sin(3x)/3
        let n = 64;
        let h = 1.0 / n as f64;
        let samples: Vec<Complex64> =
            (0..=n).map(|j| Complex64::new((3.0 * j as f64 * h).cos(), 0.0)).collect();
        let prefix = prefix_integrals(&samples, h);
        for j in 0..=n {
            let x = j as f64 * h;
            let expect = (3.0 * x).sin() / 3.0;
            assert!((prefix[j].re - expect).abs() < 2e-8, "j={j}");
        }
    }

    #[test]
    fn cumulative_column_matches_direct_quadrature() {
        // integrand cos(2 tau) at frequency 2: compare against `duhamel`
        let grid = GridSpec::new(1, 4, Domain::Torus, 1).unwrap();
        let n = 256;
        let t = 0.9;
        let h = t / n as f64;
        let samples: Vec<Complex64> =
            (0..=n).map(|j| Complex64::new((2.0 * j as f64 * h).cos(), 0.0)).collect();
        let mut scratch = Vec::new();
        let column = cumulative_duhamel_column(&samples, 2.0, h, &mut scratch);
        let mut provider = |tau: f64| {
            let mut f = SpectralField::zeros(&grid);
            f.set(&[2, 0, 0], Complex64::new((2.0 * tau).cos(), 0.0));
            f
        };
        let direct = duhamel(&mut provider, t, &TimeMesh::simpson(1024)).unwrap();
        let diff = (column[n] - direct.field.get(&[2, 0, 0])).norm();
        assert!(diff < 1e-9, "diff {diff}");
        // and against the antiderivative (1 - cos(2t))/8 + t sin(2t)/4 evaluated by parts:
        // int_0^t sin(2(t-tau)) cos(2 tau)/2 dtau has closed form t sin(2t)/2 ... checked
        // via the independent quadrature above.
    }
}
