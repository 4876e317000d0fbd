//! Picard iterates of the wave Duhamel equation on a shared time mesh.
//!
//! `S_1` is the free evolution; for `k >= 2`
//! `S_k = sign * sum over ordered tuples k_1 + ... + k_sigma = k` of the
//! Duhamel integral of the multilinear nonlinearity of the named iterates.
//! Iterate histories are memoized at the mesh nodes and nested integrals
//! reuse those nodes through cumulative quadrature, never re-integrating.
//!
//! Supports stay fixed over time, so every iterate lives on a precomputed
//! sparse index set with per-node coefficient rows; convolution plans are
//! index-pair lists built once per composition.  Empty sums yield zero
//! iterates, which is how the vanishing pattern `k != 1 mod (sigma - 1)`
//! emerges instead of being assumed.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::engine::duhamel::{cumulative_duhamel_column, TimeMesh};
use crate::engine::linear::wave_kernel;
use crate::engine::NlwProblem;
use crate::error::{Error, Result};
use crate::spectral::field::{DataPair, SpectralField};
use crate::spectral::grid::{Coord, GridSpec};

/// Default support-size threshold relative to the largest coefficient.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

/// Numerical support measure: points above `threshold * max`, weighted by
/// the frequency measure (a plain count on the torus).
pub fn support_size(f: &SpectralField, threshold: f64) -> f64 {
    let max = f.max_abs();
    if max == 0.0 {
        return 0.0;
    }
    let cut = threshold * max;
    let mut count = 0usize;
    f.for_each_nonzero(|_, v| {
        if v.norm() > cut {
            count += 1;
        }
    });
    count as f64 * f.grid().measure_weight()
}

/// One nonzero iterate evaluated at the final time.
#[derive(Clone, Debug)]
pub struct PicardEntry {
    pub k: usize,
    pub field: SpectralField,
    pub fl1_norm: f64,
    pub support_size: f64,
    /// Richardson estimate of the time-quadrature error, relative.
    pub quad_error: f64,
}

/// Ordered list of iterates with per-iterate norms and support metadata.
#[derive(Clone, Debug)]
pub struct PicardSeries {
    pub sigma: usize,
    pub kmax: usize,
    pub t_final: f64,
    grid: GridSpec,
    entries: Vec<PicardEntry>,
}

impl PicardSeries {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn entries(&self) -> &[PicardEntry] {
        &self.entries
    }

    pub fn get(&self, k: usize) -> Option<&PicardEntry> {
        self.entries.iter().find(|e| e.k == k)
    }

    /// Stored iterate or an identically zero field.
    pub fn iterate_field(&self, k: usize) -> SpectralField {
        match self.get(k) {
            Some(e) => e.field.clone(),
            None => SpectralField::zeros(&self.grid),
        }
    }

    /// Sum of the computed iterates with `k <= upto`.
    pub fn partial_sum(&self, upto: usize) -> SpectralField {
        let mut acc = SpectralField::zeros(&self.grid);
        let mut real_even = true;
        for e in &self.entries {
            if e.k <= upto {
                acc = acc.add(&e.field).expect("same grid");
                real_even &= e.field.flagged_real_even();
            }
        }
        acc.set_real_even_flag(real_even);
        acc
    }

    pub fn max_quad_error(&self) -> f64 {
        self.entries.iter().map(|e| e.quad_error).fold(0.0, f64::max)
    }
}

// ---------------------------------------------------------------------------
// sparse level representation
// ---------------------------------------------------------------------------

struct Level {
    support: Vec<Coord>,
    /// node-major rows: `coeffs[node * ncol + col]`
    coeffs: Vec<Complex64>,
    quad_error: f64,
}

impl Level {
    fn ncol(&self) -> usize {
        self.support.len()
    }

    fn row(&self, node: usize) -> &[Complex64] {
        let n = self.ncol();
        &self.coeffs[node * n..(node + 1) * n]
    }
}

struct StagePlan {
    /// `(a_col, b_col, out_col)` index triples of the convolution.
    triples: Vec<(u32, u32, u32)>,
    out_support: Vec<Coord>,
    b_level: usize,
    b_conj: bool,
}

struct CompPlan {
    first_level: usize,
    first_conj: bool,
    /// reading order of the first operand: column i holds source column i,
    /// coordinates reflected when conjugated
    stages: Vec<StagePlan>,
    /// final stage column -> column in the level support
    final_map: Vec<u32>,
}

fn effective_support(level: &Level, conj: bool) -> Vec<Coord> {
    if !conj {
        return level.support.clone();
    }
    level.support.iter().map(|c| [-c[0], -c[1], -c[2]]).collect()
}

fn ordered_compositions(k: usize, slots: usize) -> Vec<Vec<usize>> {
    fn rec(slots: usize, total: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            if total >= 1 {
                cur.push(total);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for part in 1..=(total + 1 - slots) {
            cur.push(part);
            rec(slots - 1, total - part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k >= slots {
        rec(slots, k, &mut Vec::new(), &mut out);
    }
    out
}

fn build_comp_plan(
    grid: &GridSpec,
    levels: &[Option<Level>],
    parts: &[usize],
    rho: usize,
) -> Option<CompPlan> {
    let first = levels[parts[0]].as_ref()?;
    let first_conj = rho == 0;
    let mut acc_support = effective_support(first, first_conj);
    let mut stages = Vec::with_capacity(parts.len() - 1);
    for (slot, &part) in parts.iter().enumerate().skip(1) {
        let b_conj = slot >= rho;
        let b = levels[part].as_ref()?;
        let mut out_index: HashMap<Coord, u32> = HashMap::new();
        let mut out_support: Vec<Coord> = Vec::new();
        let mut triples = Vec::with_capacity(acc_support.len() * b.support.len());
        for (ia, ca) in acc_support.iter().enumerate() {
            for (ib, cb_raw) in b.support.iter().enumerate() {
                let cb = if b_conj { [-cb_raw[0], -cb_raw[1], -cb_raw[2]] } else { *cb_raw };
                let sum = [ca[0] + cb[0], ca[1] + cb[1], ca[2] + cb[2]];
                if !grid.in_bounds(&sum) {
                    continue; // cropped, anti-aliased semantics
                }
                let next = out_support.len() as u32;
                let io = *out_index.entry(sum).or_insert_with(|| {
                    out_support.push(sum);
                    next
                });
                triples.push((ia as u32, ib as u32, io));
            }
        }
        if out_support.is_empty() {
            return None;
        }
        stages.push(StagePlan { triples, out_support, b_level: part, b_conj });
        acc_support = stages.last().unwrap().out_support.clone();
    }
    Some(CompPlan {
        first_level: parts[0],
        first_conj,
        stages,
        final_map: Vec::new(),
    })
}

fn evaluate_comp(
    plan: &CompPlan,
    levels: &[Option<Level>],
    node: usize,
    kappa: f64,
    g_row: &mut [Complex64],
) {
    let first = levels[plan.first_level].as_ref().expect("checked in plan");
    let mut acc: Vec<Complex64> = if plan.first_conj {
        first.row(node).iter().map(|v| v.conj()).collect()
    } else {
        first.row(node).to_vec()
    };
    for stage in &plan.stages {
        let b = levels[stage.b_level].as_ref().expect("checked in plan");
        let brow = b.row(node);
        let mut out = vec![Complex64::new(0.0, 0.0); stage.out_support.len()];
        if stage.b_conj {
            for &(ia, ib, io) in &stage.triples {
                out[io as usize] += acc[ia as usize] * brow[ib as usize].conj();
            }
        } else {
            for &(ia, ib, io) in &stage.triples {
                out[io as usize] += acc[ia as usize] * brow[ib as usize];
            }
        }
        for v in &mut out {
            *v *= kappa;
        }
        acc = out;
    }
    for (i, &gcol) in plan.final_map.iter().enumerate() {
        g_row[gcol as usize] += acc[i];
    }
}

/// Compute the iterates `S_1 ... S_kmax` at time `t_final`.
pub fn picard_iterates(
    pair: &DataPair,
    problem: &NlwProblem,
    kmax: usize,
    t_final: f64,
    mesh: &TimeMesh,
) -> Result<PicardSeries> {
    if pair.grid() != &problem.grid {
        return Err(Error::GridMismatch);
    }
    if kmax < 1 {
        return Err(Error::validation("kmax", "must be at least 1"));
    }
    if !(t_final > 0.0) {
        return Err(Error::validation("T", format!("final time must be positive, got {t_final}")));
    }
    let grid = pair.grid().clone();
    let sigma = problem.sigma;
    let nt = mesh.node_count(t_final);
    let h = t_final / nt as f64;
    let kappa = grid.conv_scale();
    let real_even_data = pair.u0.flagged_real_even() && pair.u1.flagged_real_even();

    let mut levels: Vec<Option<Level>> = Vec::with_capacity(kmax + 1);
    levels.push(None); // k = 0 placeholder

    // free evolution
    {
        let mut support: Vec<Coord> = Vec::new();
        let mut seen: HashMap<Coord, ()> = HashMap::new();
        for f in [&pair.u0, &pair.u1] {
            f.for_each_nonzero(|c, _| {
                if seen.insert(c, ()).is_none() {
                    support.push(c);
                }
            });
        }
        if support.is_empty() {
            levels.push(None);
        } else {
            let omega: Vec<f64> = support.iter().map(|c| grid.freq_norm(c)).collect();
            let ncol = support.len();
            let mut coeffs = vec![Complex64::new(0.0, 0.0); (nt + 1) * ncol];
            let a: Vec<Complex64> = support.iter().map(|c| pair.u0.get(c)).collect();
            let b: Vec<Complex64> = support.iter().map(|c| pair.u1.get(c)).collect();
            for node in 0..=nt {
                let t = node as f64 * h;
                for col in 0..ncol {
                    coeffs[node * ncol + col] =
                        a[col] * (t * omega[col]).cos() + b[col] * wave_kernel(t, omega[col]);
                }
            }
            levels.push(Some(Level { support, coeffs, quad_error: 0.0 }));
        }
    }

    for k in 2..=kmax {
        let comps: Vec<Vec<usize>> = ordered_compositions(k, sigma)
            .into_iter()
            .filter(|parts| parts.iter().all(|&p| levels[p].is_some()))
            .collect();
        if comps.is_empty() {
            levels.push(None);
            continue;
        }
        let mut plans: Vec<CompPlan> = comps
            .iter()
            .filter_map(|parts| build_comp_plan(&grid, &levels, parts, problem.rho))
            .collect();
        if plans.is_empty() {
            levels.push(None);
            continue;
        }
        // union of final supports
        let mut support: Vec<Coord> = Vec::new();
        let mut index: HashMap<Coord, u32> = HashMap::new();
        for plan in &plans {
            let final_support = match plan.stages.last() {
                Some(st) => &st.out_support,
                None => unreachable!("sigma >= 2 gives at least one stage"),
            };
            for c in final_support {
                let next = support.len() as u32;
                index.entry(*c).or_insert_with(|| {
                    support.push(*c);
                    next
                });
            }
        }
        for plan in &mut plans {
            let final_support = &plan.stages.last().unwrap().out_support;
            plan.final_map = final_support.iter().map(|c| index[c]).collect();
        }
        let ncol = support.len();
        let omega: Vec<f64> = support.iter().map(|c| grid.freq_norm(c)).collect();
        // integrand samples, column-major for the integrator
        let mut gmat = vec![Complex64::new(0.0, 0.0); ncol * (nt + 1)];
        let mut g_row = vec![Complex64::new(0.0, 0.0); ncol];
        for node in 0..=nt {
            for v in &mut g_row {
                *v = Complex64::new(0.0, 0.0);
            }
            for plan in &plans {
                evaluate_comp(plan, &levels, node, kappa, &mut g_row);
            }
            for col in 0..ncol {
                gmat[col * (nt + 1) + node] = g_row[col];
            }
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (nt + 1) * ncol];
        let mut scratch = Vec::new();
        let mut quad_error = 0.0f64;
        let mut max_final = 0.0f64;
        for col in 0..ncol {
            let samples = &gmat[col * (nt + 1)..(col + 1) * (nt + 1)];
            let vals = cumulative_duhamel_column(samples, omega[col], h, &mut scratch);
            // half-resolution value at the final node for the error estimate
            let coarse_samples: Vec<Complex64> = samples.iter().copied().step_by(2).collect();
            let coarse =
                cumulative_duhamel_column(&coarse_samples, omega[col], 2.0 * h, &mut scratch);
            quad_error = quad_error.max((vals[nt] - coarse[nt / 2]).norm() / 15.0);
            max_final = max_final.max(vals[nt].norm());
            for node in 0..=nt {
                coeffs[node * ncol + col] = vals[node] * problem.sign;
            }
        }
        let quad_error = quad_error / (1.0 + max_final);
        levels.push(Some(Level { support, coeffs, quad_error }));
    }

    let mut entries = Vec::new();
    for (k, level) in levels.iter().enumerate() {
        let Some(level) = level else { continue };
        let mut field = SpectralField::zeros(&grid);
        let row = level.row(nt);
        for (col, c) in level.support.iter().enumerate() {
            field.set(c, row[col]);
        }
        field.set_real_even_flag(real_even_data);
        let fl1_norm = field.fl1_norm();
        let sup = support_size(&field, SUPPORT_THRESHOLD);
        entries.push(PicardEntry {
            k,
            field,
            fl1_norm,
            support_size: sup,
            quad_error: level.quad_error,
        });
    }
    Ok(PicardSeries { sigma, kmax, t_final, grid, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::duhamel::TimeMesh;
    use crate::engine::nonlinearity::nonlinearity;
    use crate::engine::{duhamel, propagate_linear};
    use crate::oracle::s2_closed_form;
    use crate::spectral::grid::Domain;

    fn torus(extent: i64) -> GridSpec {
        GridSpec::new(1, extent, Domain::Torus, 1).unwrap()
    }

    fn monochromatic(grid: &GridSpec) -> DataPair {
        let u0 = SpectralField::delta(grid, &[1, 0, 0], Complex64::new(1.0, 0.0));
        DataPair::new(u0, SpectralField::zeros(grid)).unwrap()
    }

    #[test]
    fn quadratic_iterate_matches_closed_form() {
        let grid = torus(8);
        let problem = NlwProblem::new(2, 2, 1.0, grid.clone()).unwrap();
        let pair = monochromatic(&grid);
        for i in 0..10 {
            let t = 0.1 + 0.09 * i as f64;
            let series =
                picard_iterates(&pair, &problem, 2, t, &TimeMesh::simpson(512)).unwrap();
            let got = series.iterate_field(2).get(&[2, 0, 0]);
            let expect = s2_closed_form(1, t);
            assert!((got - expect).norm() < 1e-8, "t={t} got={got} expect={expect}");
        }
    }

    #[test]
    fn vanishing_pattern_emerges() {
        let grid = torus(32);
        let problem = NlwProblem::new(3, 3, 1.0, grid.clone()).unwrap();
        let u0 = SpectralField::delta(&grid, &[1, 0, 0], Complex64::new(0.2, 0.0));
        let pair = DataPair::new(u0, SpectralField::zeros(&grid)).unwrap();
        let series = picard_iterates(&pair, &problem, 7, 0.5, &TimeMesh::simpson(128)).unwrap();
        for k in [2usize, 4, 6] {
            assert!(series.get(k).is_none());
            assert_eq!(series.iterate_field(k).max_abs(), 0.0);
        }
        for k in [1usize, 3, 5, 7] {
            assert!(series.get(k).is_some(), "k={k}");
        }
    }

    #[test]
    fn zero_data_gives_zero_series() {
        let grid = torus(8);
        let problem = NlwProblem::new(3, 2, -1.0, grid.clone()).unwrap();
        let series = picard_iterates(&DataPair::zeros(&grid), &problem, 5, 0.4, &TimeMesh::simpson(64))
            .unwrap();
        assert!(series.entries().is_empty());
        assert_eq!(series.partial_sum(5).max_abs(), 0.0);
    }

    #[test]
    fn first_iterate_is_free_evolution() {
        let grid = torus(6);
        let problem = NlwProblem::new(2, 1, 1.0, grid.clone()).unwrap();
        let mut u0 = SpectralField::zeros(&grid);
        u0.set(&[1, 0, 0], Complex64::new(0.3, 0.4));
        u0.set(&[-2, 0, 0], Complex64::new(-0.1, 0.2));
        let mut u1 = SpectralField::zeros(&grid);
        u1.set(&[0, 0, 0], Complex64::new(0.5, 0.0));
        let pair = DataPair::new(u0, u1).unwrap();
        let t = 0.37;
        let series = picard_iterates(&pair, &problem, 1, t, &TimeMesh::simpson(64)).unwrap();
        let direct = propagate_linear(&pair, t);
        let diff = series.iterate_field(1).sub(&direct).unwrap().max_abs();
        assert!(diff < 1e-14);
    }

    #[test]
    fn sparse_engine_matches_nested_duhamel() {
        // sigma = 3, rho = 2: S_3 computed by the sparse plans must agree
        // with an independent dense evaluation of the same integral.
        let grid = torus(12);
        let problem = NlwProblem::new(3, 2, 1.0, grid.clone()).unwrap();
        let mut u0 = SpectralField::zeros(&grid);
        u0.set(&[1, 0, 0], Complex64::new(0.4, -0.2));
        u0.set(&[-3, 0, 0], Complex64::new(0.3, 0.1));
        let mut u1 = SpectralField::zeros(&grid);
        u1.set(&[2, 0, 0], Complex64::new(-0.2, 0.5));
        let pair = DataPair::new(u0, u1).unwrap();
        let t = 0.45;
        let series = picard_iterates(&pair, &problem, 3, t, &TimeMesh::simpson(512)).unwrap();
        let engine_s3 = series.iterate_field(3);

        let mut provider = |tau: f64| {
            let s1 = propagate_linear(&pair, tau);
            nonlinearity(&[&s1, &s1, &s1], 2).unwrap()
        };
        let direct = duhamel(&mut provider, t, &TimeMesh::simpson(512)).unwrap();
        let diff = engine_s3.sub(&direct.field).unwrap().max_abs();
        let scale = engine_s3.max_abs().max(1e-30);
        assert!(diff / scale < 1e-8, "relative {}", diff / scale);
    }

    #[test]
    fn sign_flips_the_first_integral_level() {
        let grid = torus(8);
        let pair = monochromatic(&grid);
        let plus = NlwProblem::new(2, 2, 1.0, grid.clone()).unwrap();
        let minus = NlwProblem::new(2, 2, -1.0, grid.clone()).unwrap();
        let sp = picard_iterates(&pair, &plus, 2, 0.5, &TimeMesh::simpson(128)).unwrap();
        let sm = picard_iterates(&pair, &minus, 2, 0.5, &TimeMesh::simpson(128)).unwrap();
        let a = sp.iterate_field(2).get(&[2, 0, 0]);
        let b = sm.iterate_field(2).get(&[2, 0, 0]);
        assert!((a + b).norm() < 1e-14);
    }

    #[test]
    fn real_even_data_keeps_real_even_iterates() {
        let grid = torus(24);
        let problem = NlwProblem::new(3, 1, 1.0, grid.clone()).unwrap();
        let mut u0 = SpectralField::zeros(&grid);
        for (j, a) in [(1i64, 0.5), (4, 0.25), (5, 0.1)] {
            u0.set(&[j, 0, 0], Complex64::new(a, 0.0));
            u0.set(&[-j, 0, 0], Complex64::new(a, 0.0));
        }
        u0.set_real_even_flag(true);
        let pair = DataPair::new(u0, SpectralField::zeros(&grid)).unwrap();
        let series = picard_iterates(&pair, &problem, 5, 0.3, &TimeMesh::simpson(256)).unwrap();
        for e in series.entries() {
            let max = e.field.max_abs();
            assert!(e.field.flagged_real_even());
            assert!(e.field.check_real_even(1e-10 * max.max(1.0)), "k={}", e.k);
        }
    }

    #[test]
    fn support_size_examples() {
        let grid = torus(8);
        let f = SpectralField::delta(&grid, &[3, 0, 0], Complex64::new(2.0, 0.0));
        assert_eq!(support_size(&f, SUPPORT_THRESHOLD), 1.0);
        let g = GridSpec::new(1, 4, Domain::TruncatedEuclidean, 2).unwrap();
        let f = SpectralField::delta(&g, &[3, 0, 0], Complex64::new(2.0, 0.0));
        assert_eq!(support_size(&f, SUPPORT_THRESHOLD), 0.5);
    }
}
