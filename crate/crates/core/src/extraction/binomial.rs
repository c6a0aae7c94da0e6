//! One-sided exact binomial test evaluated entirely in log space.

use std::f64::consts::LN_10;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Terms further than this below the running maximum (in natural log units)
/// contribute less than 1e-26 relative and are skipped.
const NEGLIGIBLE: f64 = 60.0;

fn ln_choose(n: u64, k: u64) -> f64 {
    if k == 0 || k == n {
        return 0.0;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

struct LogPmf {
    n: u64,
    ln_p: f64,
    ln_q: f64,
}

impl LogPmf {
    fn at(&self, k: u64) -> f64 {
        ln_choose(self.n, k) + k as f64 * self.ln_p + (self.n - k) as f64 * self.ln_q
    }
}

/// `ln(sum(exp(terms)))` without leaving log space.
fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    max + sum.ln()
}

/// `ln P(Binomial(n, p) >= x)` summed directly over the upper tail.
/// Terms past the mode only shrink, so the sum stops once they are negligible.
fn ln_upper_tail(pmf: &LogPmf, x: u64) -> f64 {
    let mode = ((pmf.n + 1) as f64 * pmf.ln_p.exp()).floor() as u64;
    let mut terms = Vec::new();
    let mut max = f64::NEG_INFINITY;
    for k in x..=pmf.n {
        let t = pmf.at(k);
        max = max.max(t);
        terms.push(t);
        if k > mode && t < max - NEGLIGIBLE {
            break;
        }
    }
    log_sum_exp(&terms)
}

/// `ln P(Binomial(n, p) <= x - 1)`.
fn ln_lower_tail(pmf: &LogPmf, x: u64) -> f64 {
    let terms: Vec<f64> = (0..x).map(|k| pmf.at(k)).collect();
    log_sum_exp(&terms)
}

/// Returns `-log10 P(Binomial(n, p0) >= x)`.
///
/// The p-value itself is never materialized, so tails far below the
/// smallest positive `f64` still yield a finite score. When the tail is
/// the bulk of the distribution the complement is summed instead, which
/// keeps scores near zero accurate in relative terms. A zero p-value
/// (`p0 == 0`, `x >= 1`) scores `+inf`.
pub fn binom_sf_log10(x: u64, n: u64, p0: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Argument("binomial test needs n >= 1".into()));
    }
    if x > n {
        return Err(Error::Argument(format!("successes {x} exceed trials {n}")));
    }
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::Argument(format!(
            "baseline probability {p0} outside [0, 1]"
        )));
    }
    if x == 0 || p0 == 1.0 {
        return Ok(0.0);
    }
    if p0 == 0.0 {
        return Ok(f64::INFINITY);
    }

    let pmf = LogPmf {
        n,
        ln_p: p0.ln(),
        ln_q: (-p0).ln_1p(),
    };
    let ln_sf = if x as f64 > n as f64 * p0 {
        ln_upper_tail(&pmf, x)
    } else {
        let ln_lower = ln_lower_tail(&pmf, x);
        if ln_lower < -std::f64::consts::LN_2 {
            (-ln_lower.exp()).ln_1p()
        } else {
            ln_upper_tail(&pmf, x)
        }
    };
    Ok((-ln_sf / LN_10).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_value(x: u64, n: u64, p0: f64) -> f64 {
        10f64.powf(-binom_sf_log10(x, n, p0).unwrap())
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn zero_successes_is_certain() {
        for n in [1, 2, 50, 10_000] {
            assert_eq!(binom_sf_log10(0, n, 0.3).unwrap(), 0.0);
        }
    }

    #[test]
    fn worked_example_values() {
        let nlp = binom_sf_log10(2, 2, 6.0 / 2831.0).unwrap();
        assert!((nlp - 5.35).abs() < 0.01, "{nlp}");
        assert!(rel(p_value(2, 2, 6.0 / 2831.0), 4.5e-6) < 0.01);
        assert!(rel(p_value(2, 2, 1916.0 / 2831.0), 0.46) < 0.01);
        assert!(rel(p_value(1, 2, 4.0 / 2831.0), 2.8e-3) < 0.01);
        assert!(rel(p_value(2, 2, 29.0 / 2831.0), 1.04e-4) < 0.01);
    }

    #[test]
    fn closed_forms() {
        // P(X >= n) = p^n and P(X >= 1) = 1 - (1-p)^n
        for &(n, p) in &[(5u64, 0.1), (17, 0.37), (40, 0.9)] {
            let all = binom_sf_log10(n, n, p).unwrap();
            assert!(rel(all, -(n as f64) * p.log10()) < 1e-12);
            let any = binom_sf_log10(1, n, p).unwrap();
            let expect = -(-(1.0 - p).powi(n as i32)).ln_1p() / LN_10;
            assert!(rel(any, expect) < 1e-10, "{any} vs {expect}");
        }
    }

    #[test]
    fn extremes() {
        assert_eq!(binom_sf_log10(3, 5, 1.0).unwrap(), 0.0);
        assert_eq!(binom_sf_log10(3, 5, 0.0).unwrap(), f64::INFINITY);
        // p-value 1e-5000: far below f64 range, still finite
        let v = binom_sf_log10(1000, 1000, 1e-5).unwrap();
        assert!((v - 5000.0).abs() < 1e-9, "{v}");
        let w = binom_sf_log10(999, 1000, 1e-5).unwrap();
        assert!(w.is_finite() && w < v);
    }

    #[test]
    fn domain_errors() {
        assert!(binom_sf_log10(1, 0, 0.5).is_err());
        assert!(binom_sf_log10(3, 2, 0.5).is_err());
        assert!(binom_sf_log10(1, 2, -0.1).is_err());
        assert!(binom_sf_log10(1, 2, 1.1).is_err());
        assert!(binom_sf_log10(1, 2, f64::NAN).is_err());
    }
}
