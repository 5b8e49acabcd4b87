//! Closed-form probabilistic core: the expected score of a labeler who
//! follows the majority with probability `p_d`, binomial score-tail
//! probabilities, and class-imbalance-aware expected metrics.
//!
//! The model: each item's ground truth is a majority label, and a
//! candidate matches it independently with probability `p_d`. Scoring a
//! sample of `N` items is then a biased coin experiment, so tail
//! probabilities follow the binomial distribution, and the expected
//! confusion cells follow directly from the positive-class ratio `m`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::betainc_reg;

/// Probability that one more expert matches the panel's majority label.
///
/// Valid values lie in (0, 1]. Values at or below 1/2 are accepted (a
/// candidate may genuinely be worse than a coin) but logged as a
/// warning, since an annotator *population* below 1/2 against its own
/// majority is contradictory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgreementProbability(f64);

/// Matching probability of the uniform random labeler on binary tasks.
pub const RANDOM_LABELER_P: f64 = 0.5;

impl AgreementProbability {
    pub fn new(p_d: f64) -> Result<Self> {
        if !(p_d > 0.0 && p_d <= 1.0) {
            return Err(Error::Domain(format!(
                "agreement probability must lie in (0, 1], got {p_d}"
            )));
        }
        if p_d < RANDOM_LABELER_P {
            log::warn!("agreement probability {p_d} is below the random-labeler baseline 0.5");
        }
        Ok(Self(p_d))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Expected per-item score of a labeler with agreement probability `p_d`.
///
/// The expectation of a Bernoulli(p_d) indicator is p_d itself; the
/// value of this operation is the domain check, not the arithmetic.
pub fn expected_score(p_d: AgreementProbability) -> f64 {
    p_d.get()
}

/// A "how likely is a score at least this high" query.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailQuery {
    /// Number of scored items.
    pub n: u64,
    /// Correct-answer threshold; `P(Score >= r_c)` is the question.
    pub r_c: u64,
    /// Agreement probability of the labeler.
    pub p_d: f64,
}

impl TailQuery {
    pub fn new(n: u64, r_c: u64, p_d: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("sample count N must be positive".into()));
        }
        if r_c > n + 1 {
            return Err(Error::Domain(format!(
                "threshold r_c must lie in 0..=N+1, got r_c={r_c} with N={n}"
            )));
        }
        AgreementProbability::new(p_d)?;
        Ok(Self { n, r_c, p_d })
    }
}

/// P(Score >= r_c) for a labeler scoring `n` items with per-item match
/// probability `p_d`.
///
/// Uses the survival identity P(X >= k) = I_p(k, n-k+1) of the
/// regularized incomplete beta, which stays stable at the sample sizes
/// where term-by-term summation underflows (n ~ 2.5e5).
pub fn score_tail_probability(query: &TailQuery) -> Result<f64> {
    let TailQuery { n, r_c, p_d } = *query;
    if r_c == 0 {
        return Ok(1.0);
    }
    if r_c == n + 1 {
        return Ok(0.0);
    }
    if p_d == 1.0 {
        // Every item is matched surely, so any threshold up to n is met.
        return Ok(1.0);
    }
    betainc_reg(r_c as f64, (n - r_c + 1) as f64, p_d)
}

/// Expected confusion cells as fractions of the sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectedConfusion {
    pub e_tp: f64,
    pub e_fn: f64,
    pub e_fp: f64,
    pub e_tn: f64,
}

impl ExpectedConfusion {
    /// Scale the fractions to expected counts out of `n` items.
    pub fn counts(&self, n: u64) -> [f64; 4] {
        let n = n as f64;
        [self.e_tp * n, self.e_fn * n, self.e_fp * n, self.e_tn * n]
    }
}

/// Expected confusion fractions for agreement `p_d` and positive ratio `m`.
pub fn expected_confusion(p_d: f64, m: f64) -> Result<ExpectedConfusion> {
    let p_d = AgreementProbability::new(p_d)?.get();
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::Domain(format!(
            "positive ratio m must lie in [0, 1], got {m}"
        )));
    }
    Ok(ExpectedConfusion {
        e_tp: m * p_d,
        e_fn: m * (1.0 - p_d),
        e_fp: (1.0 - m) * (1.0 - p_d),
        e_tn: (1.0 - m) * p_d,
    })
}

/// Closed-form expected metrics for a labeler with agreement `p_d` under
/// positive-class ratio `m`.
///
/// Recall and accuracy equal `p_d` and are always defined; precision and
/// F1 become undefined (never zero) when their denominators vanish,
/// which happens only at `m = 0` with `p_d = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectedMetrics {
    pub p_d: f64,
    pub m: f64,
    pub precision: Option<f64>,
    pub recall: f64,
    pub f1: Option<f64>,
    pub accuracy: f64,
}

/// Evaluate the expected-metric formulas at (`p_d`, `m`).
pub fn expected_metrics(p_d: f64, m: f64) -> Result<ExpectedMetrics> {
    let conf = expected_confusion(p_d, m)?;
    let prec_den = conf.e_tp + conf.e_fp;
    let precision = (prec_den > 0.0).then(|| conf.e_tp / prec_den);
    let f1_den = 2.0 * m * p_d + (1.0 - p_d);
    let f1 = (f1_den > 0.0).then(|| 2.0 * m * p_d / f1_den);
    Ok(ExpectedMetrics {
        p_d,
        m,
        precision,
        recall: p_d,
        f1,
        accuracy: p_d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn tail(p_d: f64, n: u64, r_c: u64) -> f64 {
        score_tail_probability(&TailQuery::new(n, r_c, p_d).unwrap()).unwrap()
    }

    /// Exhaustive oracle: enumerate all 2^n outcome vectors, weight each
    /// by p^k (1-p)^(n-k), and accumulate the tail mass. Independent of
    /// the incomplete-beta path, usable up to n = 20.
    fn enumeration_tail(p: f64, n: u32, r_c: u32) -> f64 {
        assert!(n <= 20);
        let mut mass_by_correct = vec![0.0f64; n as usize + 1];
        for outcome in 0u32..(1 << n) {
            let k = outcome.count_ones();
            mass_by_correct[k as usize] += p.powi(k as i32) * (1.0 - p).powi((n - k) as i32);
        }
        mass_by_correct[r_c as usize..].iter().sum()
    }

    #[test]
    fn expected_score_is_identity() {
        for p in [0.6, 1.0, 0.5] {
            assert_eq!(expected_score(AgreementProbability::new(p).unwrap()), p);
        }
        assert!(AgreementProbability::new(0.0).is_err());
        assert!(AgreementProbability::new(1.2).is_err());
    }

    #[test]
    fn tail_trivial_thresholds() {
        assert_eq!(tail(0.6, 100, 0), 1.0);
        assert_eq!(tail(0.6, 100, 101), 0.0);
        assert_eq!(tail(1.0, 50, 50), 1.0);
        assert!(TailQuery::new(10, 12, 0.5).is_err());
        assert!(TailQuery::new(0, 0, 0.5).is_err());
    }

    #[test]
    fn tail_matches_enumeration_oracle_spot() {
        // Direct summation of C(30,k)/2^30 for k = 24..=30; the
        // coefficients are small enough for exact f64 arithmetic.
        let mut c = 1.0f64;
        let mut sum = 0.0f64;
        for k in 1..=30u64 {
            c = c * (30 - k + 1) as f64 / k as f64;
            if k >= 24 {
                sum += c;
            }
        }
        let oracle = sum / (1u64 << 30) as f64;
        assert_relative_eq!(tail(0.5, 30, 24), oracle, max_relative = 1e-12);
        assert_abs_diff_eq!(tail(0.5, 30, 24), 7.154531776905061e-4, epsilon = 1e-15);
    }

    #[test]
    fn tail_matches_exhaustive_enumeration_small_n() {
        for n in [3u32, 7, 12] {
            for p in [0.5, 0.6, 0.9] {
                for r_c in 0..=n {
                    let exact = enumeration_tail(p, n, r_c);
                    assert_abs_diff_eq!(tail(p, n as u64, r_c as u64), exact, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn tail_published_grid_values() {
        assert_abs_diff_eq!(tail(0.6, 100, 50), 0.98, epsilon = 0.005);
        assert_relative_eq!(tail(0.6, 100, 80), 1.6e-5, max_relative = 0.10);
        assert_relative_eq!(tail(0.5, 100, 80), 5.6e-10, max_relative = 0.10);
        // Exact survival value at (0.9, 10, 8), cross-checked against the
        // enumeration oracle above.
        assert_abs_diff_eq!(tail(0.9, 10, 8), 0.9298091736, epsilon = 1e-10);
    }

    #[test]
    fn tail_stable_at_screening_scale() {
        // Must not underflow or lose the tail at n ~ 2e5.
        let v = tail(0.6, 201_079, 120_000);
        assert!(v > 0.0 && v < 1.0);
        let hi = tail(0.6, 201_079, 100_000);
        assert!(hi > 0.999999);
    }

    #[test]
    fn expected_confusion_worked_example() {
        let c = expected_confusion(0.9, 0.2).unwrap();
        assert_abs_diff_eq!(c.e_tp, 0.18, epsilon = 1e-12);
        assert_abs_diff_eq!(c.e_fn, 0.02, epsilon = 1e-12);
        assert_abs_diff_eq!(c.e_fp, 0.08, epsilon = 1e-12);
        assert_abs_diff_eq!(c.e_tn, 0.72, epsilon = 1e-12);
        assert_abs_diff_eq!(c.counts(100)[0], 18.0, epsilon = 1e-9);

        let perfect = expected_confusion(1.0, 0.5).unwrap();
        assert_eq!(perfect.e_fn, 0.0);
        assert_eq!(perfect.e_fp, 0.0);

        let symmetric = expected_confusion(0.5, 0.5).unwrap();
        for cell in [
            symmetric.e_tp,
            symmetric.e_fn,
            symmetric.e_fp,
            symmetric.e_tn,
        ] {
            assert_abs_diff_eq!(cell, 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn expected_metrics_published_rows() {
        let m1 = expected_metrics(0.9, 0.01).unwrap();
        assert_abs_diff_eq!(m1.precision.unwrap(), 0.08, epsilon = 0.005);
        assert_abs_diff_eq!(m1.f1.unwrap(), 0.15, epsilon = 0.005);

        let m2 = expected_metrics(0.9, 0.10).unwrap();
        assert_abs_diff_eq!(m2.precision.unwrap(), 0.50, epsilon = 0.005);
        assert_abs_diff_eq!(m2.f1.unwrap(), 0.64, epsilon = 0.005);

        let m3 = expected_metrics(0.6, 0.229).unwrap();
        assert_abs_diff_eq!(m3.f1.unwrap(), 0.41, epsilon = 0.005);
        assert_abs_diff_eq!(m3.precision.unwrap(), 0.31, epsilon = 0.005);
        assert_abs_diff_eq!(m3.recall, 0.60, epsilon = 0.005);
        assert_abs_diff_eq!(m3.accuracy, 0.60, epsilon = 0.005);

        let m4 = expected_metrics(1.0, 0.3).unwrap();
        assert_eq!(m4.precision, Some(1.0));
        assert_eq!(m4.f1, Some(1.0));
        assert_eq!(m4.recall, 1.0);
        assert_eq!(m4.accuracy, 1.0);
    }

    #[test]
    fn expected_metrics_undefined_flagged_not_zeroed() {
        let und = expected_metrics(1.0, 0.0).unwrap();
        assert_eq!(und.precision, None);
        assert_eq!(und.f1, None);
        assert_eq!(und.recall, 1.0);
    }

    proptest! {
        #[test]
        fn tail_monotone_in_threshold(p in 0.05f64..=1.0, n in 1u64..200, r in 0u64..200) {
            prop_assume!(r < n);
            let lo = tail(p, n, r);
            let hi = tail(p, n, r + 1);
            prop_assert!(hi <= lo + 1e-12);
        }

        #[test]
        fn tail_monotone_in_agreement(p in 0.05f64..0.99, n in 1u64..200, r in 1u64..200) {
            prop_assume!(r <= n);
            let lo = tail(p, n, r);
            let hi = tail((p + 0.01).min(1.0), n, r);
            prop_assert!(hi >= lo - 1e-12);
        }

        #[test]
        fn confusion_cells_sum_to_one(p in 0.01f64..=1.0, m in 0.0f64..=1.0) {
            let c = expected_confusion(p, m).unwrap();
            let sum = c.e_tp + c.e_fn + c.e_fp + c.e_tn;
            prop_assert!((sum - 1.0).abs() < 1e-12);
            prop_assert!(c.e_tp >= 0.0 && c.e_fn >= 0.0 && c.e_fp >= 0.0 && c.e_tn >= 0.0);
        }

        #[test]
        fn f1_is_harmonic_mean_of_precision_recall(p in 0.01f64..=1.0, m in 0.001f64..=1.0) {
            let em = expected_metrics(p, m).unwrap();
            if let (Some(prec), Some(f1)) = (em.precision, em.f1) {
                if prec + em.recall > 0.0 {
                    let harmonic = 2.0 * prec * em.recall / (prec + em.recall);
                    prop_assert!((f1 - harmonic).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn f1_strictly_increasing_in_m(p in 0.02f64..0.999, m in 0.01f64..0.95) {
            let lo = expected_metrics(p, m).unwrap().f1.unwrap();
            let hi = expected_metrics(p, m + 0.02).unwrap().f1.unwrap();
            prop_assert!(hi > lo);
        }

        #[test]
        fn f1_strictly_increasing_in_p(p in 0.02f64..0.95, m in 0.01f64..0.999) {
            let lo = expected_metrics(p, m).unwrap().f1.unwrap();
            let hi = expected_metrics(p + 0.02, m).unwrap().f1.unwrap();
            prop_assert!(hi > lo);
        }
    }
}
