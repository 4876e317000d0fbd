//! Inflation experiments: dominant-iterate lower bounds, tail and
//! cross-term measurements, and the full sweep over frequency scales.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use crate::engine::duhamel::TimeMesh;
use crate::engine::picard::{picard_iterates, PicardSeries};
use crate::engine::NlwProblem;
use crate::error::{Error, Result};
use crate::inflation::perturbation::{build_perturbation, PerturbationSpec};
use crate::inflation::regime::{
    check_regime, select_parameters, RegimeFlags, RegimeParams, DEFAULT_RATIO_THRESHOLD,
};
use crate::norms::{pair_norm, restricted_norm, space_norm, PairSpec, SpaceFamily, SpaceSpec};
use crate::spectral::field::DataPair;
use crate::spectral::grid::{Coord, Domain, GridSpec};

const E1: Coord = [1, 0, 0];

/// Lower-bound measurement on the dominant iterate of the perturbation.
#[derive(Clone, Copy, Debug)]
pub struct LowerBound {
    /// Restricted norm of `S_sigma` at the unit frequency cube.
    pub l_value: f64,
    pub r_sigma_t2: f64,
    pub ratio: f64,
    /// Whether `N^(-1/2) < T` held; below it the oscillatory remainder may
    /// swamp the resonant part and the ratio can degrade.
    pub time_precondition_ok: bool,
}

pub fn lower_bound_from_series(
    series: &PicardSeries,
    spec: &SpaceSpec,
    amplitude_r: f64,
    n_freq: i64,
) -> Result<LowerBound> {
    let sigma = series.sigma;
    let s_sigma = series.iterate_field(sigma);
    let l_value = restricted_norm(&s_sigma, spec, &E1)?;
    let r_sigma_t2 = amplitude_r.powi(sigma as i32) * series.t_final * series.t_final;
    Ok(LowerBound {
        l_value,
        r_sigma_t2,
        ratio: l_value / r_sigma_t2,
        time_precondition_ok: series.t_final > (n_freq as f64).powf(-0.5),
    })
}

/// Compute `S_sigma` of the perturbation datum and compare its restricted
/// norm against `R^sigma T^2`.
pub fn lower_bound_check(
    phi: &DataPair,
    problem: &NlwProblem,
    t_final: f64,
    spec: &SpaceSpec,
    pert: &PerturbationSpec,
    mesh: &TimeMesh,
) -> Result<LowerBound> {
    let series = picard_iterates(phi, problem, problem.sigma, t_final, mesh)?;
    lower_bound_from_series(&series, spec, pert.amplitude, pert.n_freq)
}

/// Linear, cross and tail contributions in the target space.
#[derive(Clone, Copy, Debug)]
pub struct TailCross {
    pub s1_norm: f64,
    pub cross_norm: f64,
    /// Sum of the computed high iterates plus the geometric remainder.
    pub tail_norm: f64,
    pub tail_computed: f64,
    /// Geometric estimate for the truncated iterates; infinite when the
    /// computed terms do not yet contract.
    pub tail_remainder: f64,
}

pub fn tail_and_cross_from_series(
    series_full: &PicardSeries,
    series_pert: &PicardSeries,
    spec: &SpaceSpec,
) -> Result<TailCross> {
    let sigma = series_full.sigma;
    let s1_norm = space_norm(&series_full.iterate_field(1), spec);
    let cross = series_full
        .iterate_field(sigma)
        .sub(&series_pert.iterate_field(sigma))?;
    let cross_norm = space_norm(&cross, spec);
    let mut tail_computed = 0.0;
    let mut tail_terms: Vec<(usize, f64, f64)> = Vec::new(); // (k, spec norm, fl1)
    for entry in series_full.entries() {
        if entry.k > sigma {
            let v = space_norm(&entry.field, spec);
            tail_computed += v;
            tail_terms.push((entry.k, v, entry.fl1_norm));
        }
    }
    let tail_remainder = match tail_terms.as_slice() {
        [] => 0.0,
        [.., (_, last_spec, last_fl1)] => {
            // contraction ratio between the last two nonzero iterates
            let prev_fl1 = tail_terms
                .len()
                .checked_sub(2)
                .map(|i| tail_terms[i].2)
                .or_else(|| series_full.get(sigma).map(|e| e.fl1_norm));
            match prev_fl1 {
                Some(prev) if prev > 0.0 => {
                    let r = last_fl1 / prev;
                    if r < 1.0 {
                        last_spec * r / (1.0 - r)
                    } else {
                        f64::INFINITY
                    }
                }
                _ => 0.0,
            }
        }
    };
    Ok(TailCross {
        s1_norm,
        cross_norm,
        tail_norm: tail_computed + tail_remainder,
        tail_computed,
        tail_remainder,
    })
}

/// Measure the decomposition of the solution for data `u0 + phi` against
/// the pure perturbation response.
pub fn tail_and_cross_terms(
    u0: &DataPair,
    phi: &DataPair,
    problem: &NlwProblem,
    t_final: f64,
    spec: &SpaceSpec,
    kmax: usize,
    mesh: &TimeMesh,
) -> Result<TailCross> {
    let full = picard_iterates(&u0.add(phi)?, problem, kmax, t_final, mesh)?;
    let pert = picard_iterates(phi, problem, kmax, t_final, mesh)?;
    tail_and_cross_from_series(&full, &pert, spec)
}

/// Sweep configuration; `family/p/q` fix the measuring space at data
/// regularity `s`, probed at every regularity in `thetas`.
#[derive(Clone, Debug)]
pub struct InflationConfig {
    pub s: f64,
    pub sigma: usize,
    pub rho: usize,
    pub sign: f64,
    pub delta: f64,
    pub thetas: Vec<f64>,
    pub n_list: Vec<i64>,
    pub m: f64,
    pub family: SpaceFamily,
    pub p: f64,
    pub q: f64,
    pub dim: usize,
    pub domain: Domain,
    pub mesh_refine: i64,
    pub kmax: Option<usize>,
    pub nodes_per_unit: Option<usize>,
    pub ratio_threshold: f64,
    pub threads: usize,
}

impl InflationConfig {
    pub fn new(s: f64, sigma: usize, rho: usize) -> Self {
        InflationConfig {
            s,
            sigma,
            rho,
            sign: 1.0,
            delta: 0.1,
            thetas: vec![s],
            n_list: vec![64, 128, 256, 512],
            m: 4.0,
            family: SpaceFamily::FourierAmalgam,
            p: 2.0,
            q: 2.0,
            dim: 1,
            domain: Domain::Torus,
            mesh_refine: 1,
            kmax: None,
            nodes_per_unit: None,
            ratio_threshold: DEFAULT_RATIO_THRESHOLD,
            threads: 1,
        }
    }

    pub fn space(&self) -> Result<SpaceSpec> {
        SpaceSpec::new(self.family, self.p, self.q, self.s)
    }

    pub fn validate(&self) -> Result<()> {
        self.space()?;
        if !(self.s < 0.0) {
            return Err(Error::validation("s", "inflation sweeps require s < 0"));
        }
        if self.sigma < 2 || self.sigma < self.rho {
            return Err(Error::validation("sigma", "need sigma >= max(rho, 2)"));
        }
        if self.thetas.is_empty() {
            return Err(Error::validation("theta", "need at least one probe regularity"));
        }
        if self.n_list.is_empty() {
            return Err(Error::validation("N", "need at least one frequency scale"));
        }
        if !(self.m >= 1.0) {
            return Err(Error::validation("m", "separation target must be at least 1"));
        }
        Ok(())
    }

    fn kmax_effective(&self) -> usize {
        self.kmax.unwrap_or(1 + 3 * (self.sigma - 1))
    }

    /// Node density resolving the fastest oscillation of the integrands,
    /// whose frequencies reach `kmax` times the data band edge.
    fn nodes_per_unit_effective(&self, n_freq: i64) -> usize {
        match self.nodes_per_unit {
            Some(n) => n,
            None => {
                let band = (2 * n_freq + 1) as usize;
                (2 * self.sigma * band).max(512)
            }
        }
    }
}

/// One sweep row: every measured quantity for a `(N, theta)` pair.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub n_freq: i64,
    pub amplitude_r: f64,
    pub time_t: f64,
    pub theta: f64,
    pub pert_pair_norm: f64,
    /// Full norm of the truncated series solution at regularity `theta`.
    pub sol_norm: f64,
    /// Restricted norm of the solution at the unit cube, weight `theta`.
    pub sol_restricted: f64,
    /// Restricted lower-bound value of the dominant iterate, weight `s`.
    pub restricted_l: f64,
    pub ratio_l: f64,
    pub s1_norm: f64,
    pub cross_norm: f64,
    pub tail_norm: f64,
    pub flags: RegimeFlags,
    pub chain_ok: bool,
    pub quad_error: f64,
    pub wall_ms: u128,
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub config: InflationConfig,
    pub u0_description: String,
    pub records: Vec<RunRecord>,
    pub total_wall_ms: u128,
}

fn failed_record(n_freq: i64, params: Option<&RegimeParams>, theta: f64, err: &Error) -> RunRecord {
    RunRecord {
        n_freq,
        amplitude_r: params.map_or(f64::NAN, |p| p.amplitude_r),
        time_t: params.map_or(f64::NAN, |p| p.time_t),
        theta,
        pert_pair_norm: f64::NAN,
        sol_norm: f64::NAN,
        sol_restricted: f64::NAN,
        restricted_l: f64::NAN,
        ratio_l: f64::NAN,
        s1_norm: f64::NAN,
        cross_norm: f64::NAN,
        tail_norm: f64::NAN,
        flags: check_regime(
            params.cloned().as_ref().unwrap_or(&RegimeParams {
                case: crate::inflation::regime::RegimeCase::A,
                s: -1.0,
                sigma: 2,
                delta: 0.1,
                n_freq,
                amplitude_r: f64::NAN,
                time_t: f64::NAN,
            }),
            1.0,
            DEFAULT_RATIO_THRESHOLD,
        ),
        chain_ok: false,
        quad_error: f64::NAN,
        wall_ms: 0,
        error: Some(err.to_string()),
    }
}

fn run_single_scale(
    config: &InflationConfig,
    u0: Option<&DataPair>,
    n_freq: i64,
) -> Vec<RunRecord> {
    let started = Instant::now();
    let params = match select_parameters(config.s, config.sigma, config.delta, n_freq) {
        Ok(p) => p,
        Err(e) => {
            return config.thetas.iter().map(|&th| failed_record(n_freq, None, th, &e)).collect()
        }
    };
    let build = || -> Result<Vec<RunRecord>> {
        let spec = config.space()?;
        let kmax = config.kmax_effective();
        let u0_radius = u0.map_or(0, |pair| {
            let mut r = 0i64;
            let dim = pair.grid().dim();
            for f in [&pair.u0, &pair.u1] {
                f.for_each_nonzero(|c, _| {
                    for x in c.iter().take(dim) {
                        r = r.max(x.abs());
                    }
                });
            }
            let mesh = pair.grid().mesh();
            (r + mesh - 1) / mesh
        });
        let band = (2 * n_freq + 1).max(u0_radius);
        let extent = kmax as i64 * band;
        let grid = GridSpec::new(config.dim, extent, config.domain, config.mesh_refine)?;
        let pert_spec = PerturbationSpec::new(n_freq, params.amplitude_r, config.dim)?;
        let phi = build_perturbation(&pert_spec, &grid)?;
        let problem = NlwProblem::new(config.sigma, config.rho, config.sign, grid.clone())?;
        let mesh = TimeMesh::simpson(config.nodes_per_unit_effective(n_freq));

        let series_pert =
            picard_iterates(&phi, &problem, kmax, params.time_t, &mesh)?;
        let (series_full, pair_full) = match u0 {
            None => (None, None),
            Some(data) => {
                let embedded = DataPair::new(
                    data.u0.embed_into(&grid)?,
                    data.u1.embed_into(&grid)?,
                )?;
                let sum = embedded.add(&phi)?;
                (Some(picard_iterates(&sum, &problem, kmax, params.time_t, &mesh)?), Some(sum))
            }
        };
        let _ = pair_full;
        let series_main = series_full.as_ref().unwrap_or(&series_pert);

        let pair_spec = PairSpec::new(spec);
        let pert_pair_norm = pair_norm(&phi, &pair_spec);
        let lower = lower_bound_from_series(&series_pert, &spec, params.amplitude_r, n_freq)?;
        let tc = tail_and_cross_from_series(series_main, &series_pert, &spec)?;
        let flags = check_regime(&params, config.m, config.ratio_threshold);
        let chain_ok = lower.l_value.is_finite()
            && tc.tail_norm.is_finite()
            && lower.l_value > 4.0 * (tc.s1_norm + tc.cross_norm + tc.tail_norm);
        let solution = series_main.partial_sum(kmax);
        let quad_error = series_main.max_quad_error().max(series_pert.max_quad_error());
        let wall_ms = started.elapsed().as_millis();

        let mut rows = Vec::with_capacity(config.thetas.len());
        for &theta in &config.thetas {
            let probe = spec.with_regularity(theta);
            rows.push(RunRecord {
                n_freq,
                amplitude_r: params.amplitude_r,
                time_t: params.time_t,
                theta,
                pert_pair_norm,
                sol_norm: space_norm(&solution, &probe),
                sol_restricted: restricted_norm(&solution, &probe, &E1)?,
                restricted_l: lower.l_value,
                ratio_l: lower.ratio,
                s1_norm: tc.s1_norm,
                cross_norm: tc.cross_norm,
                tail_norm: tc.tail_norm,
                flags,
                chain_ok,
                quad_error,
                wall_ms,
                error: None,
            });
        }
        Ok(rows)
    };
    match build() {
        Ok(rows) => rows,
        Err(e) => {
            config.thetas.iter().map(|&th| failed_record(n_freq, Some(&params), th, &e)).collect()
        }
    }
}

/// Run the sweep; per-scale failures are recorded and the sweep continues.
pub fn run_inflation(config: &InflationConfig, u0: Option<&DataPair>) -> Result<ExperimentReport> {
    config.validate()?;
    let started = Instant::now();
    let scales = config.n_list.clone();
    let threads = config.threads.clamp(1, scales.len().max(1));
    let mut slots: Vec<Option<Vec<RunRecord>>> = vec![None; scales.len()];
    if threads <= 1 {
        for (i, &n) in scales.iter().enumerate() {
            slots[i] = Some(run_single_scale(config, u0, n));
        }
    } else {
        let next = AtomicUsize::new(0);
        let results = Mutex::new(&mut slots);
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    if i >= scales.len() {
                        break;
                    }
                    let rows = run_single_scale(config, u0, scales[i]);
                    results.lock().expect("result lock")[i] = Some(rows);
                });
            }
        });
    }
    let mut records = Vec::new();
    for slot in slots {
        records.extend(slot.expect("every scale produced rows"));
    }
    let u0_description = match u0 {
        None => "zero".to_string(),
        Some(pair) => format!(
            "band-limited pair, radius {}",
            pair.u0.support().iter().map(|c| c[0].abs()).max().unwrap_or(0)
        ),
    };
    Ok(ExperimentReport {
        config: config.clone(),
        u0_description,
        records,
        total_wall_ms: started.elapsed().as_millis(),
    })
}
