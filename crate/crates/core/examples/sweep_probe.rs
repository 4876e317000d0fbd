//! Quick look at the sweep quantities across the default frequency scales.

use amalgam_core::inflation::{run_inflation, InflationConfig};

fn main() {
    let mut config = InflationConfig::new(-0.4, 3, 3);
    config.thetas = vec![-0.4, 0.0, 1.0, 2.0];
    let start = std::time::Instant::now();
    let report = run_inflation(&config, None).unwrap();
    println!("case A sweep in {:?}", start.elapsed());
    for r in &report.records {
        if (r.theta - config.s).abs() > 1e-12 {
            continue;
        }
        println!(
            "N={:4} R={:8.4} T={:7.4} pert={:8.5} L={:9.5} ratio={:7.4} S1={:8.4} tail={:10.4} solnorm={:10.4} quad={:.2e} err={:?} wall={}ms",
            r.n_freq, r.amplitude_r, r.time_t, r.pert_pair_norm, r.restricted_l, r.ratio_l,
            r.s1_norm, r.tail_norm, r.sol_norm, r.quad_error, r.error, r.wall_ms
        );
    }
    for r in &report.records {
        if r.n_freq == 64 {
            println!(
                "theta={:5.2} sol_restricted={:10.6} sol_norm={:12.6}",
                r.theta, r.sol_restricted, r.sol_norm
            );
        }
    }

    let mut config_b = InflationConfig::new(-1.0, 3, 3);
    config_b.thetas = vec![-1.0];
    let start = std::time::Instant::now();
    let report_b = run_inflation(&config_b, None).unwrap();
    println!("case B sweep in {:?}", start.elapsed());
    for r in &report_b.records {
        println!(
            "N={:4} R={:8.4} T={:7.4} pert={:8.5} L={:9.5} ratio={:7.4} S1={:8.4} tail={:10.4} quad={:.2e} err={:?}",
            r.n_freq, r.amplitude_r, r.time_t, r.pert_pair_norm, r.restricted_l, r.ratio_l,
            r.s1_norm, r.tail_norm, r.quad_error, r.error
        );
    }
}
