//! The multilinear nonlinearity: product of the first `rho` factors and
//! the conjugates of the remaining ones.

use crate::error::{Error, Result};
use crate::spectral::field::SpectralField;
use crate::spectral::product::pointwise_product;

/// `H(f_1, ..., f_sigma) = prod_{l <= rho} f_l  prod_{m > rho} conj(f_m)`,
/// folded left to right with anti-aliased products.
pub fn nonlinearity(fields: &[&SpectralField], rho: usize) -> Result<SpectralField> {
    if fields.len() < 2 {
        return Err(Error::validation("fields", "nonlinearity needs at least two factors"));
    }
    if rho > fields.len() {
        return Err(Error::validation(
            "rho",
            format!("rho = {rho} exceeds the factor count {}", fields.len()),
        ));
    }
    let grid = fields[0].grid();
    if fields.iter().any(|f| f.grid() != grid) {
        return Err(Error::GridMismatch);
    }
    let mut acc = if rho == 0 { fields[0].conjugate_reflect() } else { fields[0].clone() };
    for (i, f) in fields.iter().enumerate().skip(1) {
        acc = pointwise_product(&acc, f, i >= rho)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::{Domain, GridSpec};
    use num_complex::Complex64;

    fn torus(extent: i64) -> GridSpec {
        GridSpec::new(1, extent, Domain::Torus, 1).unwrap()
    }

    #[test]
    fn squares_add_frequencies() {
        let g = torus(8);
        let d1 = SpectralField::delta(&g, &[1, 0, 0], Complex64::new(1.0, 0.0));
        let h = nonlinearity(&[&d1, &d1], 2).unwrap();
        assert!((h.get(&[2, 0, 0]) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn conjugated_slot_negates_frequency() {
        let g = torus(8);
        let d1 = SpectralField::delta(&g, &[1, 0, 0], Complex64::new(1.0, 0.0));
        let h = nonlinearity(&[&d1, &d1], 1).unwrap();
        assert!((h.get(&[0, 0, 0]) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn triple_product_reaches_triple_frequency() {
        let g = torus(16);
        let d = SpectralField::delta(&g, &[5, 0, 0], Complex64::new(2.0, 0.0));
        let h = nonlinearity(&[&d, &d, &d], 3).unwrap();
        assert!((h.get(&[15, 0, 0]) - Complex64::new(8.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn all_conjugated_factors() {
        let g = torus(8);
        let d = SpectralField::delta(&g, &[1, 0, 0], Complex64::new(0.0, 1.0));
        let h = nonlinearity(&[&d, &d], 0).unwrap();
        // conj(f)^2 has transform conj(F f)(-.) convolved with itself
        assert!((h.get(&[-2, 0, 0]) - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
    }
}
