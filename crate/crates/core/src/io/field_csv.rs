//! Field dump format: CSV with one row per lattice point, columns
//! `xi_1..xi_d, re, im`, written in flat lattice order with 17 significant
//! digits.  Reading infers the grid from the frequency columns; the mesh
//! is the reciprocal of the smallest spacing, and refined lattices load as
//! truncated Euclidean grids unless a domain is forced.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::field::SpectralField;
use crate::spectral::grid::{Domain, GridSpec};

/// 17 significant digits, locale independent; infinities and NaN spelled out.
pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{x:.16e}")
    }
}

pub fn write_field_csv(f: &SpectralField, out: &mut dyn Write) -> Result<()> {
    let grid = f.grid();
    let mut header: Vec<String> = (1..=grid.dim()).map(|i| format!("xi_{i}")).collect();
    header.push("re".to_string());
    header.push("im".to_string());
    writeln!(out, "{}", header.join(","))?;
    for flat in 0..grid.len() {
        let c = grid.coord_of(flat);
        let xi = grid.freq(&c);
        let v = f.coeffs()[flat];
        let mut row: Vec<String> = (0..grid.dim()).map(|i| fmt17(xi[i])).collect();
        row.push(fmt17(v.re));
        row.push(fmt17(v.im));
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_field_csv_file(f: &SpectralField, path: &Path) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_field_csv(f, &mut file)
}

fn parse_err(why: impl Into<String>) -> Error {
    Error::Parse { what: "field csv".to_string(), why: why.into() }
}

/// Infer the mesh refinement from the sorted frequency values of one axis.
fn infer_mesh(values: &[f64]) -> Result<i64> {
    let mut spacing = f64::INFINITY;
    for w in values.windows(2) {
        let d = w[1] - w[0];
        if d > 1e-12 {
            spacing = spacing.min(d);
        }
    }
    if !spacing.is_finite() {
        return Ok(1);
    }
    let mesh = (1.0 / spacing).round();
    if mesh < 1.0 || (1.0 / spacing - mesh).abs() > 1e-6 {
        return Err(parse_err(format!("frequency spacing {spacing} is not a unit fraction")));
    }
    Ok(mesh as i64)
}

pub fn read_field_csv(text: &str, force_domain: Option<Domain>) -> Result<SpectralField> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| parse_err("empty file"))?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    if columns.len() < 3 || columns[columns.len() - 2] != "re" || columns[columns.len() - 1] != "im"
    {
        return Err(parse_err("header must be xi_1..xi_d,re,im"));
    }
    let dim = columns.len() - 2;
    if !(1..=3).contains(&dim) {
        return Err(parse_err(format!("unsupported dimension {dim}")));
    }
    let mut rows: Vec<([f64; 3], Complex64)> = Vec::new();
    let mut axis_values: Vec<BTreeSet<i64>> = vec![BTreeSet::new(); dim];
    let mut scaled: Vec<Vec<f64>> = vec![Vec::new(); dim];
    for (lineno, line) in lines.enumerate() {
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        if parts.len() != columns.len() {
            return Err(parse_err(format!("row {}: expected {} columns", lineno + 2, columns.len())));
        }
        let mut xi = [0f64; 3];
        for (i, v) in parts.iter().take(dim).enumerate() {
            xi[i] = v
                .parse::<f64>()
                .map_err(|_| parse_err(format!("row {}: bad frequency `{v}`", lineno + 2)))?;
            scaled[i].push(xi[i]);
        }
        let re = parts[dim]
            .parse::<f64>()
            .map_err(|_| parse_err(format!("row {}: bad real part", lineno + 2)))?;
        let im = parts[dim + 1]
            .parse::<f64>()
            .map_err(|_| parse_err(format!("row {}: bad imaginary part", lineno + 2)))?;
        rows.push((xi, Complex64::new(re, im)));
    }
    if rows.is_empty() {
        return Err(parse_err("no data rows"));
    }
    let mut mesh = 1i64;
    for values in scaled.iter_mut() {
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        values.dedup();
        mesh = mesh.max(infer_mesh(values)?);
    }
    let mut extent = 0i64;
    for (xi, _) in &rows {
        for (i, axis) in axis_values.iter_mut().enumerate() {
            let j = (xi[i] * mesh as f64).round();
            if (xi[i] * mesh as f64 - j).abs() > 1e-6 {
                return Err(parse_err(format!("frequency {} is not on a 1/{mesh} lattice", xi[i])));
            }
            axis.insert(j as i64);
            extent = extent.max((j as i64).abs());
        }
    }
    if extent % mesh != 0 {
        return Err(parse_err(format!(
            "largest index {extent} is not a whole multiple of the mesh {mesh}"
        )));
    }
    let domain = force_domain.unwrap_or(if mesh == 1 {
        Domain::Torus
    } else {
        Domain::TruncatedEuclidean
    });
    let grid = GridSpec::new(dim, (extent / mesh).max(1), domain, mesh)?;
    if rows.len() != grid.len() {
        return Err(parse_err(format!(
            "{} rows do not fill the {}-point lattice",
            rows.len(),
            grid.len()
        )));
    }
    let mut field = SpectralField::zeros(&grid);
    for (xi, v) in rows {
        let mut c = [0i64; 3];
        for i in 0..dim {
            c[i] = (xi[i] * mesh as f64).round() as i64;
        }
        field.set(&c, v);
    }
    Ok(field)
}

pub fn read_field_csv_file(path: &Path, force_domain: Option<Domain>) -> Result<SpectralField> {
    read_field_csv(&std::fs::read_to_string(path)?, force_domain)
}

#[cfg(test)]
mod tests {
    use super::*;
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
    fn round_trip_torus_and_refined() {
        for grid in [
            GridSpec::new(1, 6, Domain::Torus, 1).unwrap(),
            GridSpec::new(2, 3, Domain::Torus, 1).unwrap(),
            GridSpec::new(1, 4, Domain::TruncatedEuclidean, 4).unwrap(),
        ] {
            let f = random_field(&grid, 3);
            let mut buf = Vec::new();
            write_field_csv(&f, &mut buf).unwrap();
            let text = String::from_utf8(buf).unwrap();
            let back = read_field_csv(&text, None).unwrap();
            assert_eq!(back.grid(), &grid);
            for flat in 0..grid.len() {
                assert!((back.coeffs()[flat] - f.coeffs()[flat]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn seventeen_digit_format() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt17(f64::INFINITY), "inf");
        assert_eq!(fmt17(f64::NAN), "nan");
        // value survives the round trip exactly
        let x = -0.4821736529918736;
        assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn incomplete_lattice_is_rejected() {
        let text = "xi_1,re,im\n0,1,0\n1,0,0\n";
        let err = read_field_csv(text, None).unwrap_err();
        assert!(err.to_string().contains("lattice"), "{err}");
    }
}
