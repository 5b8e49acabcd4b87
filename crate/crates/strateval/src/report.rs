//! Stratified scorecards and cross-system comparison reports.
//!
//! A [`StratifiedReport`] holds, for every (task, bin) cell: the sample
//! size S, the positive ratio m, the closed-form expected metrics at
//! the bin's nominal agreement, each model's observed metrics, the
//! averaged human metrics, and the per-model H − M deltas. Every row
//! carries the evidence fields (bin agreement, annotation size, S, m).
//!
//! Three renderings share the same numeric content: delimited text and
//! JSON at full precision, and a two-decimal human-readable table.
//! Emission is a pure function of inputs and config, so re-running
//! produces byte-identical files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::dataset::{Dataset, PanelRange};
use crate::error::{Error, Result};
use crate::metrics::{confusion, delta, metrics, rater_average, Metric, MetricSet, RaterAverage};
use crate::prob::expected_metrics;
use crate::stats::{
    collect_deltas, delta_summary, t_test, DeltaFilter, DeltaSummary, SignificanceResult,
};
use crate::stratify::{stratify, ALL_BIN};

/// Averaged human metrics on one stratum; a `None` metric means every
/// rater was undefined there (rendered NaN±NaN).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HumanAverages {
    pub precision: Option<RaterAverage>,
    pub recall: Option<RaterAverage>,
    pub f1: Option<RaterAverage>,
    pub accuracy: Option<RaterAverage>,
}

impl HumanAverages {
    pub fn get(&self, metric: Metric) -> Option<RaterAverage> {
        match metric {
            Metric::Precision => self.precision,
            Metric::Recall => self.recall,
            Metric::F1 => self.f1,
            Metric::Accuracy => self.accuracy,
        }
    }
}

/// One (task, bin) cell of the scorecard.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub task_id: String,
    pub bin_label: String,
    /// Agreement used for the expected-metric reference; None for "All".
    pub nominal_p_d: Option<f64>,
    /// Ground-truth annotation panel size of this task.
    pub annotation_size: PanelRange,
    /// Sample size S of the stratum.
    pub sample_size: usize,
    /// Positive-class ratio m under majority labels.
    pub positive_ratio: f64,
    /// Closed-form reference at (nominal_p_d, observed m); None for "All".
    pub expected: Option<MetricSet>,
    /// Observed metrics per model system.
    pub models: BTreeMap<String, MetricSet>,
    /// Averaged metrics across human raters, when any were declared.
    pub human: Option<HumanAverages>,
    /// H − M per model; a `None` component means either side undefined.
    pub deltas: BTreeMap<String, MetricSet>,
}

/// Full stratified scorecard.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratifiedReport {
    /// Identity of the bin scheme, used to refuse cross-scheme compares.
    pub scheme_fingerprint: String,
    /// Bin labels in scheme order, then "All".
    pub bin_labels: Vec<String>,
    pub model_systems: Vec<String>,
    pub human_systems: Vec<String>,
    /// Tied-item count per task (excluded from all strata).
    pub tied_items: BTreeMap<String, usize>,
    pub rows: Vec<ReportRow>,
}

impl StratifiedReport {
    pub fn row(&self, task_id: &str, bin_label: &str) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.task_id == task_id && r.bin_label == bin_label)
    }

    pub fn task_ids(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self.rows.iter().map(|r| r.task_id.as_str()).collect();
        out.dedup();
        out
    }
}

/// Compute the stratified scorecard for a dataset.
///
/// Models are every prediction system not listed in
/// `config.human_systems`. Expected-metric references use each bin's
/// nominal agreement with the bin's observed m; the "All" row spans
/// mixed agreement levels so it carries no closed-form reference.
pub fn build_report(dataset: &Dataset, config: &Config) -> Result<StratifiedReport> {
    let summary = dataset.validate()?;
    if dataset.predictions.is_empty() {
        return Err(Error::NoPredictions);
    }
    if summary.orphan_predictions > 0 {
        let orphan = dataset
            .predictions
            .iter()
            .find(|p| {
                !dataset
                    .annotations
                    .iter()
                    .any(|a| a.item_id == p.item_id && a.task_id == p.task_id)
            })
            .expect("summary counted at least one orphan");
        return Err(Error::OrphanPrediction {
            item_id: orphan.item_id.clone(),
            task_id: orphan.task_id.clone(),
        });
    }

    let scheme = config.bin_scheme()?;
    let stratification = stratify(dataset, &scheme)?;

    let all_systems = dataset.system_ids();
    let human_systems: Vec<String> = all_systems
        .iter()
        .filter(|s| config.human_systems.contains(s))
        .cloned()
        .collect();
    let model_systems: Vec<String> = all_systems
        .iter()
        .filter(|s| !config.human_systems.contains(s))
        .cloned()
        .collect();

    let mut rows = Vec::new();
    let mut tied_items = BTreeMap::new();
    for (task_id, task) in &stratification.tasks {
        tied_items.insert(task_id.clone(), task.tied_items.len());

        let model_predictions: BTreeMap<&String, _> = model_systems
            .iter()
            .map(|s| (s, dataset.predictions_for(task_id, s)))
            .collect();
        let human_predictions: BTreeMap<&String, _> = human_systems
            .iter()
            .map(|s| (s, dataset.predictions_for(task_id, s)))
            .collect();

        for stratum in &task.strata {
            if stratum.sample_size() == 0 {
                continue;
            }
            let positive_ratio = stratum
                .positive_ratio()
                .expect("non-empty stratum has a ratio");
            let nominal_p_d = (stratum.bin_label != ALL_BIN)
                .then(|| scheme.nominal_p_d(&stratum.bin_label))
                .flatten();
            let expected = match nominal_p_d {
                Some(p_d) => {
                    let em = expected_metrics(p_d, positive_ratio)?;
                    Some(MetricSet {
                        precision: em.precision,
                        recall: Some(em.recall),
                        f1: em.f1,
                        accuracy: Some(em.accuracy),
                    })
                }
                None => None,
            };

            let mut models = BTreeMap::new();
            for (system, preds) in &model_predictions {
                let counts = confusion(stratum, &task.consensus, preds, system)?;
                models.insert((*system).clone(), metrics(&counts)?);
            }

            let mut human = None;
            if !human_systems.is_empty() {
                let mut per_rater = Vec::new();
                for (system, preds) in &human_predictions {
                    let counts = confusion(stratum, &task.consensus, preds, system)?;
                    per_rater.push(metrics(&counts)?);
                }
                let averaged = |metric: Metric| {
                    let values: Vec<Option<f64>> =
                        per_rater.iter().map(|m| m.get(metric)).collect();
                    rater_average(&values).ok()
                };
                human = Some(HumanAverages {
                    precision: averaged(Metric::Precision),
                    recall: averaged(Metric::Recall),
                    f1: averaged(Metric::F1),
                    accuracy: averaged(Metric::Accuracy),
                });
            }

            let mut deltas = BTreeMap::new();
            if let Some(human) = &human {
                for (system, observed) in &models {
                    let per_metric = |metric: Metric| {
                        human
                            .get(metric)
                            .and_then(|h| delta(&h, observed.get(metric)).ok())
                    };
                    deltas.insert(
                        system.clone(),
                        MetricSet {
                            precision: per_metric(Metric::Precision),
                            recall: per_metric(Metric::Recall),
                            f1: per_metric(Metric::F1),
                            accuracy: per_metric(Metric::Accuracy),
                        },
                    );
                }
            }

            rows.push(ReportRow {
                task_id: task_id.clone(),
                bin_label: stratum.bin_label.clone(),
                nominal_p_d,
                annotation_size: task.panel,
                sample_size: stratum.sample_size(),
                positive_ratio,
                expected,
                models,
                human,
                deltas,
            });
        }
    }

    let mut bin_labels: Vec<String> = scheme.labels().iter().map(|s| s.to_string()).collect();
    bin_labels.push(ALL_BIN.to_string());

    Ok(StratifiedReport {
        scheme_fingerprint: scheme.fingerprint(),
        bin_labels,
        model_systems,
        human_systems,
        tied_items,
        rows,
    })
}

fn fmt_opt(value: Option<f64>) -> String {
    match value {
        Some(v) => v.to_string(),
        None => "NaN".into(),
    }
}

fn fmt2(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.2}"),
        None => "NaN".into(),
    }
}

/// Long-format delimited rendering: one line per (task, bin, candidate,
/// metric), full precision, NaN for undefined cells.
pub fn render_report_csv(report: &StratifiedReport) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([
        "task",
        "bin",
        "nominal_p_d",
        "annotation_size_min",
        "annotation_size_max",
        "tied_items",
        "sample_size",
        "positive_ratio",
        "candidate",
        "kind",
        "metric",
        "value",
        "std",
        "n_raters",
        "n_excluded",
        "expected",
        "delta",
    ])?;
    for row in &report.rows {
        let tied = report.tied_items.get(&row.task_id).copied().unwrap_or(0);
        let shared = |candidate: &str, kind: &str, metric: Metric| {
            vec![
                row.task_id.clone(),
                row.bin_label.clone(),
                fmt_opt(row.nominal_p_d),
                row.annotation_size.min.to_string(),
                row.annotation_size.max.to_string(),
                tied.to_string(),
                row.sample_size.to_string(),
                row.positive_ratio.to_string(),
                candidate.to_string(),
                kind.to_string(),
                metric.to_string(),
            ]
        };
        for (system, observed) in &row.models {
            for metric in Metric::ALL {
                let mut record = shared(system, "model", metric);
                record.push(fmt_opt(observed.get(metric)));
                record.push(String::new());
                record.push(String::new());
                record.push(String::new());
                record.push(fmt_opt(row.expected.as_ref().and_then(|e| e.get(metric))));
                record.push(fmt_opt(row.deltas.get(system).and_then(|d| d.get(metric))));
                writer.write_record(&record)?;
            }
        }
        if let Some(human) = &row.human {
            for metric in Metric::ALL {
                let mut record = shared("H", "human", metric);
                match human.get(metric) {
                    Some(avg) => {
                        record.push(avg.mean.to_string());
                        record.push(avg.std.to_string());
                        record.push(avg.n_raters.to_string());
                        record.push(avg.n_excluded.to_string());
                    }
                    None => {
                        record.push("NaN".into());
                        record.push("NaN".into());
                        record.push("0".into());
                        record.push(report.human_systems.len().to_string());
                    }
                }
                record.push(fmt_opt(row.expected.as_ref().and_then(|e| e.get(metric))));
                record.push(String::new());
                writer.write_record(&record)?;
            }
        }
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Full-precision JSON rendering of the whole report.
pub fn render_report_json(report: &StratifiedReport) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    Ok(text)
}

/// Two-decimal human-readable table, one block per (task, model).
///
/// Each metric cell reads `model / human±std / delta / expected`; the
/// expected value is the closed-form reference at the bin's nominal
/// agreement and observed m ("-" on the aggregate row).
pub fn render_report_table(report: &StratifiedReport) -> String {
    let mut out = String::new();
    let header = format!(
        "{:<6} {:>7} {:>6}  {:>29}  {:>29}  {:>29}  {:>29}\n",
        "bin",
        "S",
        "m",
        "F1 (M/H/D/E)",
        "Precision (M/H/D/E)",
        "Recall (M/H/D/E)",
        "Accuracy (M/H/D/E)"
    );
    for task_id in report.task_ids() {
        let tied = report.tied_items.get(task_id).copied().unwrap_or(0);
        let task_rows: Vec<&ReportRow> = report
            .rows
            .iter()
            .filter(|r| r.task_id == task_id)
            .collect();
        let panel = task_rows[0].annotation_size;
        let panel_text = if panel.min == panel.max {
            panel.min.to_string()
        } else {
            format!("{}-{}", panel.min, panel.max)
        };
        for model in &report.model_systems {
            out.push_str(&format!(
                "task: {task_id} | model: {model} | annotation size: {panel_text} | tied items: {tied}\n"
            ));
            out.push_str(&header);
            for row in &task_rows {
                let cell = |metric: Metric| {
                    let m = fmt2(row.models.get(model).and_then(|s| s.get(metric)));
                    let h = match row.human.as_ref().and_then(|h| h.get(metric)) {
                        Some(avg) => format!("{:.2}±{:.2}", avg.mean, avg.std),
                        None => "NaN±NaN".into(),
                    };
                    let d = fmt2(row.deltas.get(model).and_then(|d| d.get(metric)));
                    let e = match row.expected.as_ref().and_then(|e| e.get(metric)) {
                        Some(v) => format!("{v:.2}"),
                        None => "-".into(),
                    };
                    format!("{m} / {h} / {d} / {e}")
                };
                out.push_str(&format!(
                    "{:<6} {:>7} {:>6.3}  {:>29}  {:>29}  {:>29}  {:>29}\n",
                    row.bin_label,
                    row.sample_size,
                    row.positive_ratio,
                    cell(Metric::F1),
                    cell(Metric::Precision),
                    cell(Metric::Recall),
                    cell(Metric::Accuracy),
                ));
            }
            out.push('\n');
        }
    }
    out
}

/// Flag raised when a task's overall metric sits below the evidence
/// threshold, meaning aggregate numbers alone cannot support a parity
/// claim and the stratified rows must be consulted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceWarning {
    pub task_id: String,
    pub model_id: String,
    pub metric: Metric,
    /// The model's "All"-bin value of the metric.
    pub value: f64,
    pub threshold: f64,
}

/// Emit a warning per (task, model) whose "All"-bin metric is strictly
/// below the threshold.
pub fn evidence_warnings(
    report: &StratifiedReport,
    metric: Metric,
    threshold: f64,
) -> Vec<EvidenceWarning> {
    let mut warnings = Vec::new();
    for row in &report.rows {
        if row.bin_label != ALL_BIN {
            continue;
        }
        for (model_id, observed) in &row.models {
            if let Some(value) = observed.get(metric) {
                if value < threshold {
                    warnings.push(EvidenceWarning {
                        task_id: row.task_id.clone(),
                        model_id: model_id.clone(),
                        metric,
                        value,
                        threshold,
                    });
                }
            }
        }
    }
    warnings
}

/// Where each (model, task, metric) reaches its largest and smallest
/// delta, and whether that matches the expected pattern (largest gap in
/// the top-agreement bin, smallest in the bottom one).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HighlightFlags {
    pub model_id: String,
    pub task_id: String,
    pub metric: Metric,
    pub max_bin: String,
    pub max_delta: f64,
    pub min_bin: String,
    pub min_delta: f64,
    pub max_at_top_bin: bool,
    pub min_at_bottom_bin: bool,
}

/// Compute highlight flags over the binned rows (the "All" row is an
/// aggregate, not a bin, so it never carries a highlight). Cells with
/// undefined deltas are skipped; ties resolve to the first bin in
/// scheme order.
pub fn highlight_flags(report: &StratifiedReport) -> Vec<HighlightFlags> {
    let binned: Vec<&String> = report
        .bin_labels
        .iter()
        .filter(|b| b.as_str() != ALL_BIN)
        .collect();
    let top_bin = binned.last().map(|s| s.as_str()).unwrap_or_default();
    let bottom_bin = binned.first().map(|s| s.as_str()).unwrap_or_default();

    let mut flags = Vec::new();
    for task_id in report.task_ids() {
        for model_id in &report.model_systems {
            for metric in Metric::ALL {
                let mut best: Option<(&str, f64)> = None;
                let mut worst: Option<(&str, f64)> = None;
                for bin in &binned {
                    let value = report
                        .row(task_id, bin)
                        .and_then(|r| r.deltas.get(model_id))
                        .and_then(|d| d.get(metric));
                    if let Some(v) = value {
                        if best.is_none_or(|(_, b)| v > b) {
                            best = Some((bin, v));
                        }
                        if worst.is_none_or(|(_, w)| v < w) {
                            worst = Some((bin, v));
                        }
                    }
                }
                if let (Some((max_bin, max_delta)), Some((min_bin, min_delta))) = (best, worst) {
                    flags.push(HighlightFlags {
                        model_id: model_id.clone(),
                        task_id: task_id.to_string(),
                        metric,
                        max_bin: max_bin.to_string(),
                        max_delta,
                        min_bin: min_bin.to_string(),
                        min_delta,
                        max_at_top_bin: max_bin == top_bin,
                        min_at_bottom_bin: min_bin == bottom_bin,
                    });
                }
            }
        }
    }
    flags
}

/// Options for [`compare`].
#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub metric: Metric,
    pub paired: bool,
    pub evidence_threshold: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            metric: Metric::F1,
            paired: false,
            evidence_threshold: 0.8,
        }
    }
}

/// Per-bin delta population summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinDeltaSummary {
    pub bin_label: String,
    pub summary: DeltaSummary,
}

/// Significance test between two bins' delta populations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinComparison {
    pub bin_a: String,
    pub bin_b: String,
    pub n_a: usize,
    pub n_b: usize,
    pub result: SignificanceResult,
}

/// Cross-system comparison: delta distributions per bin, significance
/// between bins, highlight flags, and evidence warnings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub metric: Metric,
    pub paired: bool,
    pub scheme_fingerprint: String,
    pub bin_labels: Vec<String>,
    pub skipped_undefined: usize,
    pub summaries: Vec<BinDeltaSummary>,
    pub tests: Vec<BinComparison>,
    pub highlights: Vec<HighlightFlags>,
    pub warnings: Vec<EvidenceWarning>,
}

/// Compare delta populations across bins over one or more stratified
/// reports (reports must share a bin scheme).
pub fn compare(reports: &[&StratifiedReport], options: &CompareOptions) -> Result<CompareReport> {
    let first = reports
        .first()
        .ok_or_else(|| Error::EmptySample("no reports given".into()))?;
    for report in reports.iter().skip(1) {
        if report.scheme_fingerprint != first.scheme_fingerprint {
            return Err(Error::MixedBinSchemes(format!(
                "`{}` vs `{}`",
                report.scheme_fingerprint, first.scheme_fingerprint
            )));
        }
    }

    let sample = collect_deltas(reports, options.metric, &DeltaFilter::default())?;

    let mut summaries = Vec::new();
    for bin in &first.bin_labels {
        let values = sample.values_for_bin(bin);
        if !values.is_empty() {
            summaries.push(BinDeltaSummary {
                bin_label: bin.clone(),
                summary: delta_summary(&values)?,
            });
        }
    }

    // Pairwise significance between bin populations, in scheme order.
    let mut tests = Vec::new();
    for (i, bin_a) in first.bin_labels.iter().enumerate() {
        for bin_b in first.bin_labels.iter().skip(i + 1) {
            let (a, b) = if options.paired {
                paired_values(&sample, bin_a, bin_b)
            } else {
                (sample.values_for_bin(bin_a), sample.values_for_bin(bin_b))
            };
            if a.len() < 2 || b.len() < 2 {
                continue;
            }
            tests.push(BinComparison {
                bin_a: bin_a.clone(),
                bin_b: bin_b.clone(),
                n_a: a.len(),
                n_b: b.len(),
                result: t_test(&a, &b, options.paired)?,
            });
        }
    }

    let mut highlights = Vec::new();
    let mut warnings = Vec::new();
    for report in reports {
        highlights.extend(highlight_flags(report));
        warnings.extend(evidence_warnings(
            report,
            options.metric,
            options.evidence_threshold,
        ));
    }

    Ok(CompareReport {
        metric: options.metric,
        paired: options.paired,
        scheme_fingerprint: first.scheme_fingerprint.clone(),
        bin_labels: first.bin_labels.clone(),
        skipped_undefined: sample.skipped_undefined,
        summaries,
        tests,
        highlights,
        warnings,
    })
}

/// Deltas present in both bins under the same (model, task) key, in
/// sorted key order.
fn paired_values(
    sample: &crate::stats::DeltaSample,
    bin_a: &str,
    bin_b: &str,
) -> (Vec<f64>, Vec<f64>) {
    let keyed = |bin: &str| -> BTreeMap<(String, String), f64> {
        sample
            .entries
            .iter()
            .filter(|e| e.bin_label == bin)
            .map(|e| ((e.model_id.clone(), e.task_id.clone()), e.value))
            .collect()
    };
    let map_a = keyed(bin_a);
    let map_b = keyed(bin_b);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (key, value) in &map_a {
        if let Some(other) = map_b.get(key) {
            a.push(*value);
            b.push(*other);
        }
    }
    (a, b)
}

/// Human-readable rendering of a comparison.
pub fn render_compare_text(report: &CompareReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "delta distributions (H - M) for {} across bins\n",
        report.metric
    ));
    out.push_str(&format!(
        "{:<6} {:>4} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}\n",
        "bin", "n", "mean", "min", "q1", "median", "q3", "max"
    ));
    for s in &report.summaries {
        let d = &s.summary;
        out.push_str(&format!(
            "{:<6} {:>4} {:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>8.3}\n",
            s.bin_label, d.n, d.mean, d.min, d.q1, d.median, d.q3, d.max
        ));
    }
    if report.skipped_undefined > 0 {
        out.push_str(&format!(
            "skipped {} undefined delta cells\n",
            report.skipped_undefined
        ));
    }

    if !report.tests.is_empty() {
        out.push_str(&format!(
            "\nsignificance ({} t-test, two-sided)\n",
            if report.paired { "paired" } else { "Welch" }
        ));
        for t in &report.tests {
            out.push_str(&format!(
                "{:<6} vs {:<6} t={:+.3} df={:.1} p={:.3e} {}\n",
                t.bin_a,
                t.bin_b,
                t.result.t_statistic,
                t.result.degrees_of_freedom,
                t.result.p_value,
                t.result.stars
            ));
        }
    }

    if !report.highlights.is_empty() {
        out.push_str("\nhighlights (per model/task/metric)\n");
        for h in &report.highlights {
            let pattern = match (h.max_at_top_bin, h.min_at_bottom_bin) {
                (true, true) => "expected pattern",
                (true, false) => "min off-pattern",
                (false, true) => "max off-pattern",
                (false, false) => "off-pattern",
            };
            out.push_str(&format!(
                "{} / {} / {}: max delta {:+.2} at bin {}, min delta {:+.2} at bin {} [{}]\n",
                h.model_id,
                h.task_id,
                h.metric,
                h.max_delta,
                h.max_bin,
                h.min_delta,
                h.min_bin,
                pattern
            ));
        }
    }

    if report.warnings.is_empty() {
        out.push_str("\nno evidence warnings\n");
    } else {
        out.push_str("\nevidence warnings\n");
        for w in &report.warnings {
            out.push_str(&format!(
                "task {} / model {}: overall {} = {:.2} is below the {:.0}% threshold; \
                 rely on the stratified rows, not the aggregate\n",
                w.task_id,
                w.model_id,
                w.metric,
                w.value,
                w.threshold * 100.0
            ));
        }
    }
    out
}

/// JSON rendering of a comparison.
pub fn render_compare_json(report: &CompareReport) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    Ok(text)
}

/// Delimited rendering of the per-bin delta summaries.
pub fn render_compare_csv(report: &CompareReport) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([
        "metric", "bin", "n", "mean", "min", "q1", "median", "q3", "max",
    ])?;
    for s in &report.summaries {
        let d = &s.summary;
        writer.write_record([
            report.metric.to_string(),
            s.bin_label.clone(),
            d.n.to_string(),
            d.mean.to_string(),
            d.min.to_string(),
            d.q1.to_string(),
            d.median.to_string(),
            d.q3.to_string(),
            d.max.to_string(),
        ])?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
