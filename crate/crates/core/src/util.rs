//! Small numeric helpers.

/// Compensated (Kahan) summation; keeps oracle accumulations well below
/// the tolerances they police.
pub fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `l^q` reduction of nonnegative terms with `q = inf` as supremum.
pub fn lq_reduce(terms: impl Iterator<Item = f64>, q: f64) -> f64 {
    if q.is_infinite() {
        terms.fold(0.0, f64::max)
    } else if (q - 1.0).abs() < 1e-15 {
        kahan_sum(terms)
    } else {
        kahan_sum(terms.map(|t| t.powf(q))).powf(1.0 / q)
    }
}
