//! Binomial confidence intervals and small exact combinatorics.

/// Two-sided 99% standard normal quantile, `Φ⁻¹(0.995)`.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

/// Wilson score interval for `successes` out of `trials` at quantile `z`.
/// Returns `(0, 1)` when `trials == 0`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

pub fn wilson_99(successes: u64, trials: u64) -> (f64, f64) {
    wilson_interval(successes, trials, Z_99)
}

/// `n choose k` as f64 (exact for the small arguments used here).
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `Pr[e ⊆ A]` for a fixed pair `e` and uniform `A ∈ ([n] choose c)`.
pub fn pair_inside_subset_probability(n: u64, c: u64) -> f64 {
    if c < 2 || n < 2 {
        return 0.0;
    }
    binomial(n - 2, c - 2) / binomial(n, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_contains_point_estimate() {
        for (s, n) in [(0, 10), (5, 10), (10, 10), (37, 1000)] {
            let (lo, hi) = wilson_99(s, n);
            let p = s as f64 / n as f64;
            assert!(lo <= p && p <= hi, "{s}/{n}: [{lo}, {hi}]");
        }
        assert_eq!(wilson_99(0, 0), (0.0, 1.0));
        assert_eq!(wilson_99(0, 100).0, 0.0);
    }

    #[test]
    fn wilson_matches_closed_form_value() {
        // Reference values from statsmodels `proportion_confint(method="wilson")`.
        let (lo, hi) = wilson_interval(50, 100, 1.959_963_984_540_054);
        assert!((lo - 0.403_831_530_365_995_6).abs() < 1e-12);
        assert!((hi - 0.596_168_469_634_004_4).abs() < 1e-12);
        let (lo, hi) = wilson_99(3, 40);
        assert!((lo - 0.019_163_255_329).abs() < 1e-6, "{lo}");
        assert!((hi - 0.251_768_976_152).abs() < 1e-6, "{hi}");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(32, 6), 906_192.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert!((pair_inside_subset_probability(5, 2) - 0.1).abs() < 1e-15);
        assert_eq!(pair_inside_subset_probability(5, 1), 0.0);
    }
}
