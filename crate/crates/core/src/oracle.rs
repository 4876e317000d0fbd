//! Independent slow-path oracles: brute-force convolution, the
//! combinatorial sequence bound, a frequency-space RK4 integrator, and the
//! closed form for the quadratic monochromatic iterate.
//!
//! Oracles favor determinism and precision over speed: direct `O(n^2)`
//! loops, compensated summation, no shared fast paths.

use num_complex::Complex64;

use crate::engine::NlwProblem;
use crate::error::{Error, Result};
use crate::spectral::field::{DataPair, SpectralField};
use crate::spectral::grid::Coord;
use crate::util::kahan_sum;

/// Per-axis point cap for the brute-force convolution.
pub const BRUTE_POINT_CAP: usize = 257;

/// Direct discrete convolution with the grid's measure scale; the oracle
/// for `pointwise_product`.
pub fn brute_convolution(a: &SpectralField, b: &SpectralField) -> Result<SpectralField> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = a.grid();
    if grid.points_per_axis() > BRUTE_POINT_CAP {
        return Err(Error::SizeCap { points: grid.points_per_axis(), cap: BRUTE_POINT_CAP });
    }
    let scale = grid.conv_scale();
    let mut pairs: Vec<(Coord, Complex64)> = Vec::new();
    a.for_each_nonzero(|c, v| pairs.push((c, v)));
    let mut out = SpectralField::zeros(grid);
    for flat in 0..grid.len() {
        let target = grid.coord_of(flat);
        let mut re = Vec::new();
        let mut im = Vec::new();
        for (ca, va) in &pairs {
            let rest = [target[0] - ca[0], target[1] - ca[1], target[2] - ca[2]];
            if grid.in_bounds(&rest) {
                let vb = b.get(&rest);
                if vb != Complex64::new(0.0, 0.0) {
                    let prod = va * vb;
                    re.push(prod.re);
                    im.push(prod.im);
                }
            }
        }
        if !re.is_empty() {
            out.coeffs_mut()[flat] =
                Complex64::new(kahan_sum(re.into_iter()), kahan_sum(im.into_iter())) * scale;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// sequence bound
// ---------------------------------------------------------------------------

/// Sequence data for the combinatorial bound check.
#[derive(Clone, Debug)]
pub struct DsSequence {
    pub sigma: usize,
    pub c: f64,
    pub b1: f64,
    pub terms: Vec<f64>,
}

#[derive(Clone, Debug)]
pub enum DsMode {
    /// Replace the recursion inequality by equality.
    Saturated,
    /// Verify explicitly provided terms (first entry must be `b1`).
    Given(Vec<f64>),
}

#[derive(Clone, Debug)]
pub struct DsReport {
    pub ok: bool,
    pub worst_ratio: f64,
    pub c0: f64,
    pub sequence: DsSequence,
}

/// Saturated sequence `b_k = C sum_{k_1+..+k_sigma=k} b_{k_1} ... b_{k_sigma}`.
fn saturated_terms(sigma: usize, c: f64, b1: f64, kmax: usize) -> Result<Vec<f64>> {
    // dp[m][t]: sum over ordered m-tuples of positive parts totalling t of
    // the term products; filled alongside the sequence itself
    let mut b = vec![0.0f64; kmax + 1];
    b[1] = b1;
    let mut dp = vec![vec![0.0f64; kmax + 1]; sigma + 1];
    dp[1][1] = b1;
    for k in 2..=kmax {
        for m in 2..=sigma {
            if k < m {
                continue;
            }
            let mut parts = Vec::new();
            for j in 1..=(k - (m - 1)) {
                let prev = dp[m - 1][k - j];
                if prev != 0.0 && b[j] != 0.0 {
                    parts.push(prev * b[j]);
                }
            }
            dp[m][k] = kahan_sum(parts.into_iter());
        }
        b[k] = c * dp[sigma][k];
        if !b[k].is_finite() {
            return Err(Error::Overflow { k });
        }
        dp[1][k] = b[k];
    }
    Ok(b[1..].to_vec())
}

/// Check `b_k <= b_1 C_0^{k-1}` with
/// `C_0 = (pi^2/6) (C sigma^2)^{1/(sigma-1)} b_1`; the worst ratio over
/// `k <= kmax` is evaluated through logarithms to dodge overflow.
pub fn ds_verify(sigma: usize, c: f64, b1: f64, mode: DsMode, kmax: usize) -> Result<DsReport> {
    if sigma < 2 {
        return Err(Error::validation("sigma", "sequence bound needs sigma >= 2"));
    }
    if kmax < 1 || kmax > 60 {
        return Err(Error::validation("kmax", format!("kmax must lie in [1, 60], got {kmax}")));
    }
    if !(b1 >= 0.0) || !(c > 0.0) {
        return Err(Error::validation("b1", "need b1 >= 0 and C > 0"));
    }
    let terms = match mode {
        DsMode::Saturated => saturated_terms(sigma, c, b1, kmax)?,
        DsMode::Given(t) => {
            if t.is_empty() || (t[0] - b1).abs() > 1e-12 * b1.max(1.0) {
                return Err(Error::validation("terms", "first given term must equal b1"));
            }
            if t.iter().any(|v| *v < 0.0) {
                return Err(Error::validation("terms", "terms must be nonnegative"));
            }
            // the hypothesis itself must hold, otherwise the bound does not apply
            let saturated = saturated_terms(sigma, c, t[0], t.len())?;
            for (k, (given, sat)) in t.iter().zip(&saturated).enumerate().skip(1) {
                if *given > sat * (1.0 + 1e-12) {
                    return Err(Error::validation(
                        "terms",
                        format!("term {} violates the recursion hypothesis", k + 1),
                    ));
                }
            }
            t
        }
    };
    let c0 = std::f64::consts::PI.powi(2) / 6.0
        * (c * (sigma * sigma) as f64).powf(1.0 / (sigma as f64 - 1.0))
        * b1;
    if b1 == 0.0 {
        let ok = terms.iter().all(|v| *v == 0.0);
        return Ok(DsReport {
            ok,
            worst_ratio: 0.0,
            c0,
            sequence: DsSequence { sigma, c, b1, terms },
        });
    }
    let mut worst: f64 = 0.0;
    for (i, &bk) in terms.iter().enumerate() {
        if bk == 0.0 {
            continue;
        }
        let k = i + 1;
        let log_ratio = bk.ln() - b1.ln() - (k as f64 - 1.0) * c0.ln();
        worst = worst.max(log_ratio.exp());
    }
    Ok(DsReport {
        ok: worst <= 1.0 + 1e-12,
        worst_ratio: worst,
        c0,
        sequence: DsSequence { sigma, c, b1, terms },
    })
}

// ---------------------------------------------------------------------------
// frequency-space RK4
// ---------------------------------------------------------------------------

fn brute_nonlinearity(u: &SpectralField, sigma: usize, rho: usize) -> Result<SpectralField> {
    let mut acc = if rho == 0 { u.conjugate_reflect() } else { u.clone() };
    for slot in 1..sigma {
        let factor = if slot >= rho { u.conjugate_reflect() } else { u.clone() };
        acc = brute_convolution(&acc, &factor)?;
    }
    Ok(acc)
}

/// Classical fourth-order integration of the frequency-space system
/// `u'' = -|xi|^2 u + sign H(u)`; the cross-solver oracle.
pub fn rk4_frequency_oracle(
    pair: &DataPair,
    problem: &NlwProblem,
    t_final: f64,
    dt: f64,
) -> Result<SpectralField> {
    if pair.grid() != &problem.grid {
        return Err(Error::GridMismatch);
    }
    let grid = pair.grid().clone();
    let omega_max = (grid.extent() as f64) * (grid.dim() as f64).sqrt();
    let max_dt = 0.1 / omega_max.max(1.0);
    if dt > max_dt {
        return Err(Error::StepSize { dt, max_dt });
    }
    let steps = (t_final / dt).ceil().max(1.0) as usize;
    let h = t_final / steps as f64;
    let omegas2: Vec<f64> = (0..grid.len())
        .map(|flat| {
            let w = grid.freq_norm(&grid.coord_of(flat));
            w * w
        })
        .collect();

    let deriv = |u: &SpectralField, v: &SpectralField| -> Result<(SpectralField, SpectralField)> {
        let hnl = brute_nonlinearity(u, problem.sigma, problem.rho)?;
        let mut dv = SpectralField::zeros(&grid);
        for flat in 0..grid.len() {
            dv.coeffs_mut()[flat] =
                -omegas2[flat] * u.coeffs()[flat] + problem.sign * hnl.coeffs()[flat];
        }
        Ok((v.clone(), dv))
    };

    let mut u = pair.u0.clone();
    let mut v = pair.u1.clone();
    let axpy = |f: &SpectralField, g: &SpectralField, a: f64| -> SpectralField {
        let mut out = f.clone();
        for (x, y) in out.coeffs_mut().iter_mut().zip(g.coeffs()) {
            *x += a * y;
        }
        out
    };
    for _ in 0..steps {
        let (k1u, k1v) = deriv(&u, &v)?;
        let (k2u, k2v) = deriv(&axpy(&u, &k1u, h / 2.0), &axpy(&v, &k1v, h / 2.0))?;
        let (k3u, k3v) = deriv(&axpy(&u, &k2u, h / 2.0), &axpy(&v, &k2v, h / 2.0))?;
        let (k4u, k4v) = deriv(&axpy(&u, &k3u, h), &axpy(&v, &k3v, h))?;
        for flat in 0..grid.len() {
            u.coeffs_mut()[flat] += h / 6.0
                * (k1u.coeffs()[flat]
                    + 2.0 * k2u.coeffs()[flat]
                    + 2.0 * k3u.coeffs()[flat]
                    + k4u.coeffs()[flat]);
            v.coeffs_mut()[flat] += h / 6.0
                * (k1v.coeffs()[flat]
                    + 2.0 * k2v.coeffs()[flat]
                    + 2.0 * k3v.coeffs()[flat]
                    + k4v.coeffs()[flat]);
        }
    }
    Ok(u)
}

/// Linear wave energy `sum |xi|^2 |u|^2 + |u'|^2` of a state.
pub fn wave_energy(u: &SpectralField, v: &SpectralField) -> f64 {
    let grid = u.grid();
    let terms = (0..grid.len()).map(|flat| {
        let w = grid.freq_norm(&grid.coord_of(flat));
        w * w * u.coeffs()[flat].norm_sqr() + v.coeffs()[flat].norm_sqr()
    });
    kahan_sum(terms)
}

// ---------------------------------------------------------------------------
// closed form
// ---------------------------------------------------------------------------

/// Second iterate of the quadratic problem with plain squaring and
/// monochromatic position data at frequency `n0`: the coefficient at `2 n0`
/// is `(1 - cos(2 n0 t)) / (8 n0^2) + t sin(2 n0 t) / (8 n0)`.
pub fn s2_closed_form(n0: i64, t: f64) -> Complex64 {
    assert!(n0 != 0, "closed form requires a nonzero frequency");
    let w = n0 as f64;
    let re = (1.0 - (2.0 * w * t).cos()) / (8.0 * w * w) + t * (2.0 * w * t).sin() / (8.0 * w);
    Complex64::new(re, 0.0)
}
