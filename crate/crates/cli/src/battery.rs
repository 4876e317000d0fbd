//! The lemma battery behind `verify-lemmas`: every fast path is replayed
//! against its independent oracle and each check prints one line.

use num_complex::Complex64;

use amalgam_core::engine::{
    duhamel, nonlinearity, picard_iterates, solve_fixed_point, solve_series, NlwProblem, TimeMesh,
};
use amalgam_core::inflation::{
    build_perturbation, check_regime, select_parameters, PerturbationSpec,
    DEFAULT_RATIO_THRESHOLD,
};
use amalgam_core::norms::{
    algebra_check, fl_norm, fourier_amalgam_norm, modulation_norm, sobolev_norm, space_norm,
    wiener_amalgam_norm, SpaceSpec,
};
use amalgam_core::oracle::{
    brute_convolution, ds_verify, rk4_frequency_oracle, s2_closed_form, DsMode,
};
use amalgam_core::spectral::{DataPair, Domain, GridSpec, SpectralField};

/// Small deterministic generator so the battery needs no rng crate.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }
}

fn random_field(grid: &GridSpec, rng: &mut SplitMix64, amp: f64) -> SpectralField {
    let mut f = SpectralField::zeros(grid);
    for flat in 0..grid.len() {
        let c = grid.coord_of(flat);
        f.set(&c, Complex64::new(amp * rng.uniform(), amp * rng.uniform()));
    }
    f
}

pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, run: impl FnOnce() -> Result<String, String>) -> CheckResult {
    match run() {
        Ok(detail) => CheckResult { name, pass: true, detail },
        Err(detail) => CheckResult { name, pass: false, detail },
    }
}

fn torus(extent: i64) -> GridSpec {
    GridSpec::new(1, extent, Domain::Torus, 1).expect("grid")
}

/// Run the whole battery; each entry is one pass/fail row.
pub fn run_battery() -> Vec<CheckResult> {
    let mut results = Vec::new();

    results.push(check("product vs brute convolution", || {
        let grid = torus(16);
        let mut rng = SplitMix64(1);
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let a = random_field(&grid, &mut rng, 1.0);
            let b = random_field(&grid, &mut rng, 1.0);
            let fast = amalgam_core::spectral::pointwise_product(&a, &b, false)
                .map_err(|e| e.to_string())?;
            let slow = brute_convolution(&a, &b).map_err(|e| e.to_string())?;
            let scale = slow.max_abs().max(1.0);
            let diff = fast.sub(&slow).map_err(|e| e.to_string())?.max_abs() / scale;
            worst = worst.max(diff);
        }
        if worst < 1e-10 {
            Ok(format!("worst relative difference {worst:.2e}"))
        } else {
            Err(format!("difference {worst:.2e} above 1e-10"))
        }
    }));

    results.push(check("wave kernel quadrature closed forms", || {
        let grid = torus(25);
        let mesh = TimeMesh::simpson(512);
        let t = 0.7f64;
        let mut field = SpectralField::zeros(&grid);
        for xi in [0i64, 1, 5, 20] {
            field.set(&[xi, 0, 0], Complex64::new(1.0, 0.0));
        }
        let got = duhamel(&mut |_| field.clone(), t, &mesh).map_err(|e| e.to_string())?;
        let mut worst = 0.0f64;
        for xi in [0i64, 1, 5, 20] {
            let expect = if xi == 0 {
                t * t / 2.0
            } else {
                (1.0 - (t * xi as f64).cos()) / ((xi * xi) as f64)
            };
            worst = worst.max((got.field.get(&[xi, 0, 0]).re - expect).abs());
        }
        if worst < 1e-8 {
            Ok(format!("worst error {worst:.2e}"))
        } else {
            Err(format!("error {worst:.2e} above 1e-8"))
        }
    }));

    results.push(check("quadratic iterate closed form", || {
        let grid = torus(8);
        let problem = NlwProblem::new(2, 2, 1.0, grid.clone()).map_err(|e| e.to_string())?;
        let u0 = SpectralField::delta(&grid, &[1, 0, 0], Complex64::new(1.0, 0.0));
        let pair = DataPair::new(u0, SpectralField::zeros(&grid)).map_err(|e| e.to_string())?;
        let mut worst = 0.0f64;
        for i in 1..=10 {
            let t = i as f64 / 10.0;
            let series = picard_iterates(&pair, &problem, 2, t, &TimeMesh::simpson(512))
                .map_err(|e| e.to_string())?;
            let got = series.iterate_field(2).get(&[2, 0, 0]);
            worst = worst.max((got - s2_closed_form(1, t)).norm());
        }
        if worst < 1e-8 {
            Ok(format!("worst error {worst:.2e}"))
        } else {
            Err(format!("error {worst:.2e} above 1e-8"))
        }
    }));

    results.push(check("iterate vanishing pattern", || {
        let grid = torus(32);
        let problem = NlwProblem::new(3, 3, 1.0, grid.clone()).map_err(|e| e.to_string())?;
        let u0 = SpectralField::delta(&grid, &[1, 0, 0], Complex64::new(0.3, 0.0));
        let pair = DataPair::new(u0, SpectralField::zeros(&grid)).map_err(|e| e.to_string())?;
        let series = picard_iterates(&pair, &problem, 6, 0.4, &TimeMesh::simpson(128))
            .map_err(|e| e.to_string())?;
        for k in [2usize, 4, 6] {
            if series.iterate_field(k).max_abs() != 0.0 {
                return Err(format!("iterate {k} should vanish"));
            }
        }
        Ok("iterates 2, 4, 6 vanish exactly".to_string())
    }));

    results.push(check("sequence bound, saturated instances", || {
        let catalan = ds_verify(2, 1.0, 1.0, DsMode::Saturated, 25).map_err(|e| e.to_string())?;
        let random = ds_verify(3, 2.0, 0.5, DsMode::Saturated, 20).map_err(|e| e.to_string())?;
        if catalan.ok && random.ok {
            Ok(format!(
                "worst ratios {:.3e} and {:.3e}",
                catalan.worst_ratio, random.worst_ratio
            ))
        } else {
            Err("bound violated".to_string())
        }
    }));

    results.push(check("solver triple agreement", || {
        let grid = torus(12);
        let mesh = TimeMesh::simpson(256);
        let mut rng = SplitMix64(7);
        let mut worst = 0.0f64;
        for (sigma, rho) in [(2usize, 2usize), (3, 2)] {
            let problem =
                NlwProblem::new(sigma, rho, 1.0, grid.clone()).map_err(|e| e.to_string())?;
            let mut u0 = SpectralField::zeros(&grid);
            let mut u1 = SpectralField::zeros(&grid);
            for j in -3i64..=3 {
                u0.set(&[j, 0, 0], Complex64::new(0.04 * rng.uniform(), 0.04 * rng.uniform()));
                u1.set(&[j, 0, 0], Complex64::new(0.04 * rng.uniform(), 0.04 * rng.uniform()));
            }
            let pair = DataPair::new(u0, u1).map_err(|e| e.to_string())?;
            let t = 0.25;
            let series = solve_series(&pair, &problem, t, 1e-14, 1 + 4 * (sigma - 1), &mesh)
                .map_err(|e| e.to_string())?;
            let fixed = solve_fixed_point(&pair, &problem, t, 1e-12, 30, &mesh)
                .map_err(|e| e.to_string())?;
            let rk4 = rk4_frequency_oracle(&pair, &problem, t, 0.1 / 12.0)
                .map_err(|e| e.to_string())?;
            let base = rk4.fl1_norm();
            worst = worst
                .max(series.solution.sub(&fixed).map_err(|e| e.to_string())?.fl1_norm() / base);
            worst =
                worst.max(series.solution.sub(&rk4).map_err(|e| e.to_string())?.fl1_norm() / base);
        }
        if worst < 1e-5 {
            Ok(format!("worst relative difference {worst:.2e}"))
        } else {
            Err(format!("difference {worst:.2e} above 1e-5"))
        }
    }));

    results.push(check("module inequality", || {
        let grid = torus(16);
        let mut rng = SplitMix64(11);
        let spec = SpaceSpec::fourier_amalgam(2.0, 1.0, 0.0).map_err(|e| e.to_string())?;
        for i in 0..20 {
            let f = random_field(&grid, &mut rng, 1.0);
            let g = random_field(&grid, &mut rng, 1.0);
            let chk = algebra_check(&f, &g, &spec, 1e-10).map_err(|e| e.to_string())?;
            if !chk.ok {
                return Err(format!("pair {i}: lhs {} > rhs {}", chk.lhs, chk.rhs));
            }
        }
        Ok("20 random pairs satisfy the inequality".to_string())
    }));

    results.push(check("norm collapse identities", || {
        let grid = torus(10);
        let mut rng = SplitMix64(13);
        for _ in 0..10 {
            let f = random_field(&grid, &mut rng, 1.0);
            let s = -0.4;
            let base = fl_norm(&f, 1.5, s);
            for p in [1.0, 2.0, f64::INFINITY] {
                if (fourier_amalgam_norm(&f, p, 1.5, s) - base).abs() > 1e-12 * base {
                    return Err("torus p-independence failed".to_string());
                }
            }
            if (sobolev_norm(&f, s) - fourier_amalgam_norm(&f, 2.0, 2.0, s)).abs()
                > 1e-10 * sobolev_norm(&f, s)
            {
                return Err("Sobolev equality failed".to_string());
            }
            let m2 = modulation_norm(&f, 2.0, s);
            if (m2 - wiener_amalgam_norm(&f, 2.0, s)).abs() > 1e-8 * m2 {
                return Err("q = 2 window norm equality failed".to_string());
            }
            if wiener_amalgam_norm(&f, 1.0, s) > fourier_amalgam_norm(&f, 2.0, 1.0, s) * (1.0 + 1e-10)
            {
                return Err("inclusion inequality failed".to_string());
            }
        }
        Ok("collapse, Sobolev, window and inclusion identities hold".to_string())
    }));

    results.push(check("cube convolution lower bound", || {
        let grid = torus(32);
        let mut a = SpectralField::zeros(&grid);
        let mut b = SpectralField::zeros(&grid);
        for j in -2i64..=2 {
            a.set(&[7 + j, 0, 0], Complex64::new(1.0, 0.0));
            b.set(&[-3 + j, 0, 0], Complex64::new(1.0, 0.0));
        }
        let c = brute_convolution(&a, &b).map_err(|e| e.to_string())?;
        for j in -2i64..=2 {
            if c.get(&[4 + j, 0, 0]).re < 3.0 - 1e-12 {
                return Err(format!("value at offset {j} below 3"));
            }
        }
        Ok("convolution of cube indicators covers the sum cube".to_string())
    }));

    results.push(check("regime exponent identities", || {
        for (s, sigma, delta) in [(-0.4f64, 3usize, 0.1f64), (-1.0, 3, 0.1)] {
            for n in [64i64, 512, 4096] {
                let p = select_parameters(s, sigma, delta, n).map_err(|e| e.to_string())?;
                let sig = sigma as f64;
                let lhs = p.amplitude_r.powf(sig - 1.0) * p.time_t * p.time_t;
                let rhs = (n as f64).powf(-(sig - 1.0) * delta / 2.0);
                if (lhs / rhs - 1.0).abs() > 1e-10 {
                    return Err(format!("identity failed at s={s} N={n}"));
                }
                let _ = check_regime(&p, 4.0, DEFAULT_RATIO_THRESHOLD);
            }
        }
        Ok("power laws match in both cases".to_string())
    }));

    results.push(check("perturbation enumeration", || {
        let grid = torus(20);
        let spec = PerturbationSpec::new(8, 1.0, 1).map_err(|e| e.to_string())?;
        let pair = build_perturbation(&spec, &grid).map_err(|e| e.to_string())?;
        let spec_norm = SpaceSpec::fourier_amalgam(2.0, 1.0, 0.0).map_err(|e| e.to_string())?;
        let norm = space_norm(&pair.u0, &spec_norm);
        if (norm - 12.0).abs() > 1e-12 {
            return Err(format!("expected 12 lattice points, norm {norm}"));
        }
        Ok("the four cubes hold 12 lattice points".to_string())
    }));

    results.push(check("conjugated nonlinearity frequencies", || {
        let grid = torus(8);
        let d1 = SpectralField::delta(&grid, &[1, 0, 0], Complex64::new(1.0, 0.0));
        let h = nonlinearity(&[&d1, &d1], 1).map_err(|e| e.to_string())?;
        if (h.get(&[0, 0, 0]) - Complex64::new(1.0, 0.0)).norm() > 1e-14 {
            return Err("conjugated slot did not negate the frequency".to_string());
        }
        Ok("conjugation reflects frequencies".to_string())
    }));

    results
}
