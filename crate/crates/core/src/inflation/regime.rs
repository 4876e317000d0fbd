//! Amplitude/frequency/time selection for the two proof regimes and the
//! numeric separation conditions.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegimeCase {
    /// `-1/(sigma-1) <= s < 0`
    A,
    /// `s < -1/(sigma-1)`
    B,
}

/// Concrete `(R, T)` derived from `(s, sigma, delta, N)`.
#[derive(Clone, Copy, Debug)]
pub struct RegimeParams {
    pub case: RegimeCase,
    pub s: f64,
    pub sigma: usize,
    pub delta: f64,
    pub n_freq: i64,
    pub amplitude_r: f64,
    pub time_t: f64,
}

impl RegimeParams {
    pub fn r_sigma_t2(&self) -> f64 {
        self.amplitude_r.powi(self.sigma as i32) * self.time_t * self.time_t
    }
}

/// Case split and power laws:
/// case A sets `R = N^(-s-delta)`, `T = N^((sigma-1)(s+delta/2)/2)`;
/// case B sets `R = N^(1/(sigma-1)-delta)`, `T = N^(-1/2+(sigma-1)delta/4)`.
pub fn select_parameters(s: f64, sigma: usize, delta: f64, n_freq: i64) -> Result<RegimeParams> {
    if sigma < 2 {
        return Err(Error::validation("sigma", format!("need sigma >= 2, got {sigma}")));
    }
    if !(s < 0.0) {
        return Err(Error::validation("s", format!("regime selection requires s < 0, got {s}")));
    }
    if !(delta > 0.0) {
        return Err(Error::validation("delta", format!("slack must be positive, got {delta}")));
    }
    if n_freq < 2 {
        return Err(Error::validation("N", format!("frequency scale must exceed 1, got {n_freq}")));
    }
    let sig = sigma as f64;
    let nf = n_freq as f64;
    let boundary = -1.0 / (sig - 1.0);
    let (case, r_exp, t_exp) = if s >= boundary {
        if (sig + 1.0) / 2.0 * delta >= -s {
            return Err(Error::validation(
                "delta",
                format!(
                    "case A requires (sigma+1) delta / 2 < -s: {} >= {}",
                    (sig + 1.0) / 2.0 * delta,
                    -s
                ),
            ));
        }
        (RegimeCase::A, -s - delta, (sig - 1.0) / 2.0 * (s + delta / 2.0))
    } else {
        if (sig + 1.0) * delta >= 2.0 / (sig - 1.0) {
            return Err(Error::validation(
                "delta",
                format!(
                    "case B requires (sigma+1) delta < 2/(sigma-1): {} >= {}",
                    (sig + 1.0) * delta,
                    2.0 / (sig - 1.0)
                ),
            ));
        }
        if (sig - 1.0) * delta / 4.0 >= 0.5 {
            return Err(Error::validation(
                "delta",
                format!(
                    "case B requires (sigma-1) delta / 4 < 1/2: {} >= 0.5",
                    (sig - 1.0) * delta / 4.0
                ),
            ));
        }
        (RegimeCase::B, 1.0 / (sig - 1.0) - delta, -0.5 + (sig - 1.0) * delta / 4.0)
    };
    Ok(RegimeParams {
        case,
        s,
        sigma,
        delta,
        n_freq,
        amplitude_r: nf.powf(r_exp),
        time_t: nf.powf(t_exp),
    })
}

/// Raw separation quantities and their threshold flags.  Each listed value
/// must be small for the corresponding proof condition to hold:
/// (i) `N^(-1/2)/T` and `T`, (ii a) `R^(sigma-1) T^2`, (ii b) `1/R`,
/// (iii) `m / (R^sigma T^2)`, (iv) `R N^s m`.
#[derive(Clone, Copy, Debug)]
pub struct RegimeFlags {
    pub sqrt_n_inv_over_t: f64,
    pub t_value: f64,
    pub r_sigma_minus_1_t2: f64,
    pub r_inv: f64,
    pub m_over_r_sigma_t2: f64,
    pub r_n_s_times_m: f64,
    pub i: bool,
    pub ii_a: bool,
    pub ii_b: bool,
    pub iii: bool,
    pub iv: bool,
}

impl RegimeFlags {
    pub fn all(&self) -> bool {
        self.i && self.ii_a && self.ii_b && self.iii && self.iv
    }
}

/// Default reading of "much smaller": ratio at most one quarter.
pub const DEFAULT_RATIO_THRESHOLD: f64 = 0.25;

pub fn check_regime(params: &RegimeParams, m: f64, ratio_threshold: f64) -> RegimeFlags {
    let nf = params.n_freq as f64;
    let r = params.amplitude_r;
    let t = params.time_t;
    let sig = params.sigma as i32;
    let sqrt_n_inv_over_t = nf.powf(-0.5) / t;
    let r_sigma_minus_1_t2 = r.powi(sig - 1) * t * t;
    let r_inv = 1.0 / r;
    let m_over_r_sigma_t2 = m / (r.powi(sig) * t * t);
    let r_n_s_times_m = r * nf.powf(params.s) * m;
    let thr = ratio_threshold;
    RegimeFlags {
        sqrt_n_inv_over_t,
        t_value: t,
        r_sigma_minus_1_t2,
        r_inv,
        m_over_r_sigma_t2,
        r_n_s_times_m,
        i: sqrt_n_inv_over_t < thr && t < thr,
        ii_a: r_sigma_minus_1_t2 < thr,
        ii_b: r_inv < thr,
        iii: m_over_r_sigma_t2 < thr,
        iv: r_n_s_times_m < thr,
    }
}
