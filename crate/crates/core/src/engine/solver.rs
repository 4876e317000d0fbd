//! Two independent solvers for the wave Duhamel equation: summation of the
//! Picard series and direct fixed-point iteration on the time mesh.

use num_complex::Complex64;

use crate::engine::duhamel::{cumulative_duhamel_column, TimeMesh};
use crate::engine::linear::propagate_linear;
use crate::engine::nonlinearity::nonlinearity;
use crate::engine::picard::{picard_iterates, PicardSeries};
use crate::engine::NlwProblem;
use crate::error::{Error, Result};
use crate::spectral::field::{DataPair, SpectralField};

/// `T^2 (2 |data|_FL1)^(sigma-1)` must stay below this for either solver;
/// it makes the fixed-point map a contraction with factor at most 1/2.
pub const SMALLNESS_THRESHOLD: f64 = 0.125;

fn smallness_value(pair: &DataPair, sigma: usize, t_final: f64) -> f64 {
    let m = 2.0 * pair.fl1_pair_norm();
    t_final * t_final * m.powi(sigma as i32 - 1)
}

fn check_smallness(pair: &DataPair, sigma: usize, t_final: f64) -> Result<()> {
    let value = smallness_value(pair, sigma, t_final);
    if value > SMALLNESS_THRESHOLD {
        return Err(Error::Smallness { value, threshold: SMALLNESS_THRESHOLD });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct SeriesSolution {
    pub solution: SpectralField,
    /// Geometric bound on the FL^1 mass of the dropped iterates.
    pub tail_bound: f64,
    /// `(k, FL^1 norm)` of the summed terms.
    pub terms: Vec<(usize, f64)>,
    pub series: PicardSeries,
}

/// Sum the Picard series up to `kmax`, stopping early once a term drops
/// below `tol` in `FL^1` and bounding the remainder geometrically.
pub fn solve_series(
    pair: &DataPair,
    problem: &NlwProblem,
    t_final: f64,
    tol: f64,
    kmax: usize,
    mesh: &TimeMesh,
) -> Result<SeriesSolution> {
    check_smallness(pair, problem.sigma, t_final)?;
    let series = picard_iterates(pair, problem, kmax, t_final, mesh)?;
    let mut solution = SpectralField::zeros(pair.grid());
    let mut terms = Vec::new();
    let mut last_two: Vec<(usize, f64)> = Vec::new();
    let mut truncated = false;
    for entry in series.entries() {
        solution = solution.add(&entry.field)?;
        terms.push((entry.k, entry.fl1_norm));
        if entry.k > 1 && entry.fl1_norm > 0.0 {
            last_two.push((entry.k, entry.fl1_norm));
            if last_two.len() > 2 {
                last_two.remove(0);
            }
        }
        if entry.k > 1 && entry.fl1_norm < tol {
            truncated = true;
            break;
        }
    }
    let tail_bound = match last_two.as_slice() {
        [(k_prev, n_prev), (k_last, n_last)] => {
            let step_ratio = n_last / n_prev;
            if step_ratio >= 1.0 && *n_last >= tol {
                return Err(Error::NoConvergence { ratio: step_ratio });
            }
            let _ = (k_prev, k_last);
            if step_ratio >= 1.0 {
                0.0
            } else {
                n_last * step_ratio / (1.0 - step_ratio)
            }
        }
        _ => 0.0,
    };
    let _ = truncated;
    Ok(SeriesSolution { solution, tail_bound, terms, series })
}

/// Iterate the Duhamel map from the free evolution until successive
/// sup-in-time `FL^1` differences fall below `tol`.
pub fn solve_fixed_point(
    pair: &DataPair,
    problem: &NlwProblem,
    t_final: f64,
    tol: f64,
    itermax: usize,
    mesh: &TimeMesh,
) -> Result<SpectralField> {
    if itermax < 1 {
        return Err(Error::validation("itermax", "must be at least 1"));
    }
    check_smallness(pair, problem.sigma, t_final)?;
    let grid = pair.grid().clone();
    let nt = mesh.node_count(t_final);
    let h = t_final / nt as f64;
    let npts = grid.len();
    let omegas: Vec<f64> = (0..npts).map(|flat| grid.freq_norm(&grid.coord_of(flat))).collect();

    let free: Vec<SpectralField> =
        (0..=nt).map(|j| propagate_linear(pair, j as f64 * h)).collect();
    let mut current = free.clone();
    let mut prev_diff = f64::INFINITY;
    let mut growth_streak = 0usize;

    for _iter in 0..itermax {
        // nonlinearity samples at every node
        let mut hsamples: Vec<SpectralField> = Vec::with_capacity(nt + 1);
        for u in &current {
            let slots: Vec<&SpectralField> = (0..problem.sigma).map(|_| u).collect();
            hsamples.push(nonlinearity(&slots, problem.rho)?);
        }
        // cumulative Duhamel per lattice point
        let mut next: Vec<SpectralField> = free.clone();
        let mut column = vec![Complex64::new(0.0, 0.0); nt + 1];
        let mut scratch = Vec::new();
        for flat in 0..npts {
            let mut any = false;
            for (j, hs) in hsamples.iter().enumerate() {
                let v = hs.coeffs()[flat];
                column[j] = v;
                any |= v != Complex64::new(0.0, 0.0);
            }
            if !any {
                continue;
            }
            let vals = cumulative_duhamel_column(&column, omegas[flat], h, &mut scratch);
            for (j, nf) in next.iter_mut().enumerate() {
                nf.coeffs_mut()[flat] += vals[j] * problem.sign;
            }
        }
        // sup over nodes of the FL1 difference
        let mut diff = 0.0f64;
        for (a, b) in next.iter().zip(&current) {
            diff = diff.max(a.sub(b)?.fl1_norm());
        }
        current = next;
        if diff < tol {
            return Ok(current.pop().expect("nodes nonempty"));
        }
        if diff > prev_diff {
            growth_streak += 1;
            if growth_streak >= 3 {
                return Err(Error::NonContraction { count: growth_streak });
            }
        } else {
            growth_streak = 0;
        }
        prev_diff = diff;
    }
    Err(Error::NoConvergence { ratio: 1.0 })
}
