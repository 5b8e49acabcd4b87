//! Significance testing and summary statistics for human-minus-model
//! delta distributions.
//!
//! The default test is Welch's two-sample t-test (unequal variances,
//! Welch–Satterthwaite degrees of freedom) with a two-sided p-value; a
//! paired variant is available when the samples share keys. The
//! t-distribution CDF is evaluated through the same regularized
//! incomplete beta core as the binomial tails.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::Metric;
use crate::report::StratifiedReport;
use crate::special::betainc_reg;

/// Significance stars in the usual four-level convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stars {
    Four,
    Three,
    Two,
    One,
    NotSignificant,
}

impl Stars {
    /// Map a p-value to its star label; boundaries are inclusive.
    pub fn from_p_value(p: f64) -> Stars {
        if p <= 0.0001 {
            Stars::Four
        } else if p <= 0.001 {
            Stars::Three
        } else if p <= 0.01 {
            Stars::Two
        } else if p <= 0.05 {
            Stars::One
        } else {
            Stars::NotSignificant
        }
    }
}

impl fmt::Display for Stars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Stars::Four => "****",
            Stars::Three => "***",
            Stars::Two => "**",
            Stars::One => "*",
            Stars::NotSignificant => "ns",
        };
        f.write_str(text)
    }
}

/// Outcome of a t-test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignificanceResult {
    pub t_statistic: f64,
    pub degrees_of_freedom: f64,
    pub p_value: f64,
    pub stars: Stars,
}

/// CDF of Student's t distribution with `df` degrees of freedom.
///
/// Uses P(T <= t) = 1 - I_x(df/2, 1/2)/2 for t >= 0 with
/// x = df/(df + t^2), and symmetry for t < 0.
pub fn t_cdf(t: f64, df: f64) -> Result<f64> {
    if df.is_nan() || df <= 0.0 {
        return Err(Error::Domain(format!(
            "degrees of freedom must be positive, got {df}"
        )));
    }
    if t == 0.0 {
        return Ok(0.5);
    }
    let x = df / (df + t * t);
    let tail_mass = betainc_reg(df / 2.0, 0.5, x)?;
    Ok(if t > 0.0 {
        1.0 - tail_mass / 2.0
    } else {
        tail_mass / 2.0
    })
}

/// Two-sided p-value for a t statistic.
fn two_sided_p(t: f64, df: f64) -> Result<f64> {
    Ok((2.0 * t_cdf(-t.abs(), df)?).clamp(0.0, 1.0))
}

fn mean_and_sample_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let variance = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, variance)
}

/// Compare two samples; Welch by default, paired on request.
///
/// Identical samples (zero pooled variance) report t = 0, p = 1 rather
/// than a division error.
pub fn t_test(sample_a: &[f64], sample_b: &[f64], paired: bool) -> Result<SignificanceResult> {
    if paired {
        if sample_a.len() != sample_b.len() {
            return Err(Error::LengthMismatch {
                left: sample_a.len(),
                right: sample_b.len(),
            });
        }
        if sample_a.len() < 2 {
            return Err(Error::TooFewSamples(
                "paired t-test needs at least 2 pairs".into(),
            ));
        }
        let diffs: Vec<f64> = sample_a.iter().zip(sample_b).map(|(a, b)| a - b).collect();
        let (mean, variance) = mean_and_sample_variance(&diffs);
        let n = diffs.len() as f64;
        let df = n - 1.0;
        let se = (variance / n).sqrt();
        if se == 0.0 {
            let stars = Stars::from_p_value(1.0);
            return Ok(SignificanceResult {
                t_statistic: 0.0,
                degrees_of_freedom: df,
                p_value: 1.0,
                stars,
            });
        }
        let t = mean / se;
        let p = two_sided_p(t, df)?;
        return Ok(SignificanceResult {
            t_statistic: t,
            degrees_of_freedom: df,
            p_value: p,
            stars: Stars::from_p_value(p),
        });
    }

    if sample_a.len() < 2 || sample_b.len() < 2 {
        return Err(Error::TooFewSamples(
            "Welch t-test needs at least 2 values per sample".into(),
        ));
    }
    let (mean_a, var_a) = mean_and_sample_variance(sample_a);
    let (mean_b, var_b) = mean_and_sample_variance(sample_b);
    let n_a = sample_a.len() as f64;
    let n_b = sample_b.len() as f64;
    let se_a = var_a / n_a;
    let se_b = var_b / n_b;
    let se = (se_a + se_b).sqrt();
    if se == 0.0 {
        return Ok(SignificanceResult {
            t_statistic: 0.0,
            degrees_of_freedom: n_a + n_b - 2.0,
            p_value: 1.0,
            stars: Stars::NotSignificant,
        });
    }
    let t = (mean_a - mean_b) / se;
    // Welch–Satterthwaite degrees of freedom.
    let df = (se_a + se_b).powi(2) / (se_a.powi(2) / (n_a - 1.0) + se_b.powi(2) / (n_b - 1.0));
    let p = two_sided_p(t, df)?;
    Ok(SignificanceResult {
        t_statistic: t,
        degrees_of_freedom: df,
        p_value: p,
        stars: Stars::from_p_value(p),
    })
}

/// One delta observation with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaEntry {
    pub model_id: String,
    pub task_id: String,
    pub bin_label: String,
    pub value: f64,
}

/// A collection of deltas for one metric, plus how many candidate cells
/// were skipped because either side was undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaSample {
    pub metric: Metric,
    pub entries: Vec<DeltaEntry>,
    pub skipped_undefined: usize,
}

impl DeltaSample {
    pub fn values_for_bin(&self, bin_label: &str) -> Vec<f64> {
        self.entries
            .iter()
            .filter(|e| e.bin_label == bin_label)
            .map(|e| e.value)
            .collect()
    }
}

/// Which deltas to collect from stratified reports.
#[derive(Debug, Clone, Default)]
pub struct DeltaFilter {
    /// Restrict to these bin labels (all bins when empty).
    pub bins: Vec<String>,
    /// Restrict to these model ids (all models when empty).
    pub models: Vec<String>,
    /// Restrict to these task ids (all tasks when empty).
    pub tasks: Vec<String>,
}

impl DeltaFilter {
    fn admits(&self, list: &[String], value: &str) -> bool {
        list.is_empty() || list.iter().any(|v| v == value)
    }
}

/// Gather every defined H - M delta for `metric` across reports.
pub fn collect_deltas(
    reports: &[&StratifiedReport],
    metric: Metric,
    filter: &DeltaFilter,
) -> Result<DeltaSample> {
    let mut entries = Vec::new();
    let mut skipped = 0usize;
    for report in reports {
        for row in &report.rows {
            if !filter.admits(&filter.bins, &row.bin_label)
                || !filter.admits(&filter.tasks, &row.task_id)
            {
                continue;
            }
            for (model_id, per_metric) in &row.deltas {
                if !filter.admits(&filter.models, model_id) {
                    continue;
                }
                match per_metric.get(metric) {
                    Some(value) => entries.push(DeltaEntry {
                        model_id: model_id.clone(),
                        task_id: row.task_id.clone(),
                        bin_label: row.bin_label.clone(),
                        value,
                    }),
                    None => skipped += 1,
                }
            }
        }
    }
    if entries.is_empty() {
        return Err(Error::EmptySample(format!(
            "no defined {metric} deltas matched the filter"
        )));
    }
    Ok(DeltaSample {
        metric,
        entries,
        skipped_undefined: skipped,
    })
}

/// Five-number summary plus mean, for boxplot emission.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaSummary {
    pub n: usize,
    pub mean: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Quantile with linear interpolation between order statistics.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let position = q * (n - 1) as f64;
    let lower = position.floor() as usize;
    let upper = position.ceil() as usize;
    let weight = position - lower as f64;
    sorted[lower] * (1.0 - weight) + sorted[upper] * weight
}

/// Summarize a delta population.
pub fn delta_summary(values: &[f64]) -> Result<DeltaSummary> {
    if values.is_empty() {
        return Err(Error::EmptySample("no delta values to summarize".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("deltas are finite"));
    let mean = sorted.iter().sum::<f64>() / sorted.len() as f64;
    Ok(DeltaSummary {
        n: sorted.len(),
        mean,
        min: sorted[0],
        q1: quantile(&sorted, 0.25),
        median: quantile(&sorted, 0.5),
        q3: quantile(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
    })
}
