//! Result persistence: sweep CSV, flat-text run manifest, optional plot.
//!
//! The CSV carries only deterministic quantities, so identical
//! configurations produce byte-identical files; wall time lives in the
//! manifest.  The manifest is written last and atomically, after checking
//! that every output it lists exists.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::inflation::ExperimentReport;
use crate::io::config::{inflation_config_to_entries, Config};
use crate::io::field_csv::fmt17;
use crate::io::svg::render_loglog_plot;

pub const REPORT_COLUMNS: [&str; 19] = [
    "N",
    "R",
    "T",
    "theta",
    "pert_norm",
    "sol_norm",
    "sol_restricted",
    "restricted_L",
    "ratio_L",
    "S1",
    "cross",
    "tail",
    "flag_i",
    "flag_ii_a",
    "flag_ii_b",
    "flag_iii",
    "flag_iv",
    "chain_ok",
    "quad_error",
];

pub fn report_csv_string(report: &ExperimentReport) -> String {
    let mut out = String::new();
    out.push_str(&REPORT_COLUMNS.join(","));
    out.push('\n');
    for r in &report.records {
        let flag = |b: bool| if b { "1" } else { "0" };
        let row = [
            r.n_freq.to_string(),
            fmt17(r.amplitude_r),
            fmt17(r.time_t),
            fmt17(r.theta),
            fmt17(r.pert_pair_norm),
            fmt17(r.sol_norm),
            fmt17(r.sol_restricted),
            fmt17(r.restricted_l),
            fmt17(r.ratio_l),
            fmt17(r.s1_norm),
            fmt17(r.cross_norm),
            fmt17(r.tail_norm),
            flag(r.flags.i).to_string(),
            flag(r.flags.ii_a).to_string(),
            flag(r.flags.ii_b).to_string(),
            flag(r.flags.iii).to_string(),
            flag(r.flags.iv).to_string(),
            flag(r.chain_ok).to_string(),
            fmt17(r.quad_error),
        ];
        out.push_str(&row.join(","));
        if let Some(err) = &r.error {
            out.push_str(&format!(",error: {}", err.replace(',', ";")));
        }
        out.push('\n');
    }
    out
}

/// Parse a report CSV back into header and string cells.
pub fn read_report_rows(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Parse { what: "report csv".into(), why: "empty file".into() })?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(|s| s.trim().to_string()).collect::<Vec<_>>())
        .collect();
    Ok((header, rows))
}

fn atomic_write(path: &Path, content: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Log-log plot of the full solution norm against the frequency scale,
/// one polyline per probe regularity.
pub fn report_plot_svg(report: &ExperimentReport) -> String {
    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for &theta in &report.config.thetas {
        let pts: Vec<(f64, f64)> = report
            .records
            .iter()
            .filter(|r| r.error.is_none() && (r.theta - theta).abs() < 1e-12)
            .map(|r| (r.n_freq as f64, r.sol_norm))
            .collect();
        series.push((format!("theta = {theta}"), pts));
    }
    // the perturbation size shrinks while the norms grow
    let pert: Vec<(f64, f64)> = report
        .records
        .iter()
        .filter(|r| r.error.is_none() && (r.theta - report.config.thetas[0]).abs() < 1e-12)
        .map(|r| (r.n_freq as f64, r.pert_pair_norm))
        .collect();
    series.push(("perturbation".to_string(), pert));
    render_loglog_plot("solution norms vs frequency scale", "N", "norm", &series)
}

/// Write `report.csv`, `manifest.txt` and optionally `plot.svg` into `dir`.
/// Returns the paths written, manifest last.
pub fn write_report(
    report: &ExperimentReport,
    dir: &Path,
    with_plot: bool,
    command_line: &str,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut outputs = Vec::new();

    let csv_path = dir.join("report.csv");
    atomic_write(&csv_path, &report_csv_string(report))?;
    outputs.push(csv_path);

    if with_plot {
        let plot_path = dir.join("plot.svg");
        atomic_write(&plot_path, &report_plot_svg(report))?;
        outputs.push(plot_path);
    }

    let mut manifest = Config::default();
    manifest.set("command", command_line);
    manifest.set("version", env!("CARGO_PKG_VERSION"));
    manifest.set("u0", &report.u0_description);
    for (k, v) in inflation_config_to_entries(&report.config).iter() {
        manifest.set(&format!("config.{k}"), v);
    }
    let failures = report.records.iter().filter(|r| r.error.is_some()).count();
    manifest.set("rows", report.records.len());
    manifest.set("failures", failures);
    manifest.set("status", if failures == 0 { "ok" } else { "partial" });
    manifest.set("wall_ms", report.total_wall_ms);
    manifest.set(
        "outputs",
        outputs
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    for p in &outputs {
        if !p.exists() {
            return Err(Error::validation("manifest", format!("output {} missing", p.display())));
        }
    }
    let manifest_path = dir.join("manifest.txt");
    let mut text = String::new();
    for (k, v) in manifest.iter() {
        text.push_str(&format!("{k}: {v}\n"));
    }
    atomic_write(&manifest_path, &text)?;
    outputs.push(manifest_path);
    Ok(outputs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inflation::{run_inflation, InflationConfig};

    fn small_report() -> ExperimentReport {
        let mut config = InflationConfig::new(-0.4, 3, 3);
        config.n_list = vec![8, 16];
        config.thetas = vec![-0.4, 1.0];
        config.nodes_per_unit = Some(256);
        run_inflation(&config, None).unwrap()
    }

    #[test]
    fn row_count_is_scales_times_probes() {
        let report = small_report();
        let csv = report_csv_string(&report);
        let (header, rows) = read_report_rows(&csv).unwrap();
        assert_eq!(header.len(), REPORT_COLUMNS.len());
        assert_eq!(rows.len(), 4);
    }

    #[test]
    fn empty_report_is_header_only() {
        let mut report = small_report();
        report.records.clear();
        let csv = report_csv_string(&report);
        assert_eq!(csv.lines().count(), 1);
        assert!(csv.starts_with("N,R,T,theta"));
    }

    #[test]
    fn identical_runs_are_byte_identical() {
        let a = report_csv_string(&small_report());
        let b = report_csv_string(&small_report());
        assert_eq!(a, b);
    }

    #[test]
    fn manifest_lists_only_existing_outputs() {
        let report = small_report();
        let dir = std::env::temp_dir().join(format!("amalgam-report-{}", std::process::id()));
        let outputs = write_report(&report, &dir, true, "test run").unwrap();
        assert_eq!(outputs.len(), 3);
        let manifest = std::fs::read_to_string(dir.join("manifest.txt")).unwrap();
        assert!(manifest.contains("outputs: report.csv,plot.svg"));
        assert!(manifest.contains("status: ok"));
        assert!(manifest.contains("config.N: 8,16"));
        for line in manifest.lines() {
            assert!(line.contains(": "), "flat key: value lines only, got {line}");
        }
        std::fs::remove_dir_all(&dir).ok();
    }
}
