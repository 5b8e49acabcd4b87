//! Monte Carlo simulation of annotator panels and candidate labelers.
//!
//! Each simulated item draws a majority label (positive with
//! probability `m`) and a panel of votes that each match it with
//! probability `p_d`. Candidates are scored against that majority
//! label: under it, recall and accuracy are independent of `m`, which
//! is the property the sweep exists to demonstrate. (Scoring against
//! the panel's empirical majority instead would contaminate recall
//! with vote-flip noise at low `p_d`: at p_d = 0.6 the empirical
//! majority disagrees with its own distribution's label on ~21% of
//! 10-vote items.) The votes are still generated, and panels that tie
//! are resampled, so each run keeps its exact item count and the
//! panels remain available for agreement diagnostics.
//!
//! Two candidates answer every item: one that matches the majority
//! label with probability `p_d` (a simulated peer expert) and one that
//! flips a fair coin.
//!
//! Reproducibility: all randomness comes from ChaCha8, seeded from the
//! config, with one independent stream per run index. Serial and
//! parallel execution therefore give identical results.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Label;
use crate::error::{Error, Result};
use crate::metrics::{metrics, ConfusionCounts, Metric, MetricSet};
use crate::stratify::{consensus, Majority};

/// Parameters of one simulation cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    /// Probability that a vote (and the simulated expert) matches the
    /// latent label; must exceed 1/2.
    pub p_d: f64,
    /// Positive-class ratio of the latent labels, in (0, 1].
    pub m: f64,
    pub items_per_run: usize,
    pub annotators_per_item: usize,
    pub runs: usize,
    pub seed: u64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            p_d: 0.8,
            m: 0.5,
            items_per_run: 500,
            annotators_per_item: 10,
            runs: 20,
            seed: 42,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_d > 0.5 && self.p_d <= 1.0) {
            return Err(Error::Domain(format!(
                "simulation p_d must lie in (0.5, 1], got {}",
                self.p_d
            )));
        }
        if !(self.m > 0.0 && self.m <= 1.0) {
            return Err(Error::Domain(format!(
                "simulation m must lie in (0, 1], got {}",
                self.m
            )));
        }
        if self.items_per_run == 0 || self.annotators_per_item == 0 || self.runs == 0 {
            return Err(Error::Domain(
                "items_per_run, annotators_per_item and runs must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One synthetic item: its majority label and the panel's votes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulatedItem {
    pub consensus_label: Label,
    pub votes: Vec<Label>,
}

fn draw_label(rng: &mut impl Rng, p_positive: f64) -> Label {
    if rng.gen_bool(p_positive) {
        Label::Positive
    } else {
        Label::Negative
    }
}

/// Generate one run's panel of items. Items whose panel ties (possible
/// with even panels) are regenerated in full so the run keeps its exact
/// item count.
pub fn generate_panel(cfg: &SimulationConfig, rng: &mut impl Rng) -> Result<Vec<SimulatedItem>> {
    cfg.validate()?;
    let mut items = Vec::with_capacity(cfg.items_per_run);
    while items.len() < cfg.items_per_run {
        let latent = draw_label(rng, cfg.m);
        let votes: Vec<Label> = (0..cfg.annotators_per_item)
            .map(|_| {
                if rng.gen_bool(cfg.p_d) {
                    latent
                } else {
                    latent.flipped()
                }
            })
            .collect();
        if consensus(&votes)?.majority == Majority::Tied {
            continue;
        }
        items.push(SimulatedItem {
            consensus_label: latent,
            votes,
        });
    }
    Ok(items)
}

/// The two simulated candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CandidateKind {
    /// Matches the latent label with probability `p_d`, like one more
    /// expert drawn from the same population as the panel.
    SimHuman,
    /// Picks either binary label with probability 1/2.
    Random,
}

impl fmt::Display for CandidateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CandidateKind::SimHuman => f.write_str("sim_human"),
            CandidateKind::Random => f.write_str("random"),
        }
    }
}

/// Mean and standard deviation of one metric over runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricStat {
    pub mean: f64,
    /// Population standard deviation over runs.
    pub std: f64,
    /// Runs where the metric was defined; runs with an undefined value
    /// are excluded rather than coerced to zero.
    pub runs_included: usize,
}

/// Per-candidate aggregate over runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CandidateStats {
    pub precision: Option<MetricStat>,
    pub recall: Option<MetricStat>,
    pub f1: Option<MetricStat>,
    pub accuracy: Option<MetricStat>,
}

impl CandidateStats {
    pub fn get(&self, metric: Metric) -> Option<MetricStat> {
        match metric {
            Metric::Precision => self.precision,
            Metric::Recall => self.recall,
            Metric::F1 => self.f1,
            Metric::Accuracy => self.accuracy,
        }
    }
}

/// Result of one simulation cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub config: SimulationConfig,
    pub sim_human: CandidateStats,
    pub random: CandidateStats,
}

impl SimulationResult {
    pub fn candidate(&self, kind: CandidateKind) -> &CandidateStats {
        match kind {
            CandidateKind::SimHuman => &self.sim_human,
            CandidateKind::Random => &self.random,
        }
    }
}

fn aggregate(per_run: &[MetricSet], metric: Metric) -> Option<MetricStat> {
    let defined: Vec<f64> = per_run.iter().filter_map(|m| m.get(metric)).collect();
    if defined.is_empty() {
        return None;
    }
    let n = defined.len() as f64;
    let mean = defined.iter().sum::<f64>() / n;
    let variance = defined.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Some(MetricStat {
        mean,
        std: variance.sqrt(),
        runs_included: defined.len(),
    })
}

fn stats_from_runs(per_run: &[MetricSet]) -> CandidateStats {
    CandidateStats {
        precision: aggregate(per_run, Metric::Precision),
        recall: aggregate(per_run, Metric::Recall),
        f1: aggregate(per_run, Metric::F1),
        accuracy: aggregate(per_run, Metric::Accuracy),
    }
}

/// RNG for one run: same seed, one ChaCha stream per run index.
fn run_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn score_run(
    panel: &[SimulatedItem],
    cfg: &SimulationConfig,
    rng: &mut impl Rng,
) -> Result<(MetricSet, MetricSet)> {
    let mut human_counts = ConfusionCounts::default();
    let mut random_counts = ConfusionCounts::default();
    for item in panel {
        let truth = item.consensus_label;
        let human_answer = if rng.gen_bool(cfg.p_d) {
            item.consensus_label
        } else {
            item.consensus_label.flipped()
        };
        let random_answer = draw_label(rng, 0.5);
        for (answer, counts) in [
            (human_answer, &mut human_counts),
            (random_answer, &mut random_counts),
        ] {
            match (truth, answer) {
                (Label::Positive, Label::Positive) => counts.tpc += 1,
                (Label::Positive, Label::Negative) => counts.fnc += 1,
                (Label::Negative, Label::Positive) => counts.fpc += 1,
                (Label::Negative, Label::Negative) => counts.tnc += 1,
            }
        }
    }
    Ok((metrics(&human_counts)?, metrics(&random_counts)?))
}

/// Run one simulation cell with an explicit stream offset. Used by
/// [`sweep`] so each grid point draws from its own RNG streams.
fn run_simulation_streamed(cfg: &SimulationConfig, stream_base: u64) -> Result<SimulationResult> {
    cfg.validate()?;
    let mut human_runs = Vec::with_capacity(cfg.runs);
    let mut random_runs = Vec::with_capacity(cfg.runs);
    for run_index in 0..cfg.runs {
        let mut rng = run_rng(cfg.seed, stream_base + run_index as u64);
        let panel = generate_panel(cfg, &mut rng)?;
        let (human, random) = score_run(&panel, cfg, &mut rng)?;
        human_runs.push(human);
        random_runs.push(random);
    }
    Ok(SimulationResult {
        config: *cfg,
        sim_human: stats_from_runs(&human_runs),
        random: stats_from_runs(&random_runs),
    })
}

/// Run one simulation cell: `runs` independent panels, each scored for
/// both candidates against the panel's empirical majority.
pub fn run_simulation(cfg: &SimulationConfig) -> Result<SimulationResult> {
    run_simulation_streamed(cfg, 0)
}

/// One grid point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub p_d: f64,
    pub m: f64,
    pub result: SimulationResult,
}

/// Cross-product sweep over agreement and positive-ratio grids.
pub fn sweep(p_d_grid: &[f64], m_grid: &[f64], base: &SimulationConfig) -> Result<Vec<SweepPoint>> {
    if p_d_grid.is_empty() || m_grid.is_empty() {
        return Err(Error::Domain("sweep grids must be non-empty".into()));
    }
    let mut points = Vec::with_capacity(p_d_grid.len() * m_grid.len());
    for (i, &p_d) in p_d_grid.iter().enumerate() {
        for (j, &m) in m_grid.iter().enumerate() {
            let cfg = SimulationConfig { p_d, m, ..*base };
            // Distinct stream block per grid point keeps points independent.
            let point_index = (i * m_grid.len() + j) as u64;
            let stream_base = point_index << 32;
            points.push(SweepPoint {
                p_d,
                m,
                result: run_simulation_streamed(&cfg, stream_base)?,
            });
        }
    }
    Ok(points)
}

/// Write a sweep as plottable delimited text:
/// `p_d,m,candidate,metric,mean,std`.
pub fn write_sweep_csv<W: std::io::Write>(points: &[SweepPoint], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["p_d", "m", "candidate", "metric", "mean", "std"])?;
    for point in points {
        for kind in [CandidateKind::SimHuman, CandidateKind::Random] {
            let stats = point.result.candidate(kind);
            for metric in Metric::ALL {
                let (mean, std) = match stats.get(metric) {
                    Some(stat) => (stat.mean.to_string(), stat.std.to_string()),
                    None => ("NaN".into(), "NaN".into()),
                };
                writer.write_record([
                    point.p_d.to_string(),
                    point.m.to_string(),
                    kind.to_string(),
                    metric.to_string(),
                    mean,
                    std,
                ])?;
            }
        }
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg(p_d: f64, m: f64) -> SimulationConfig {
        SimulationConfig {
            p_d,
            m,
            ..Default::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(cfg(0.5, 0.5).validate().is_err());
        assert!(cfg(1.1, 0.5).validate().is_err());
        assert!(cfg(0.8, 0.0).validate().is_err());
        assert!(cfg(0.8, 1.0).validate().is_ok());
        assert!(SimulationConfig {
            runs: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn perfect_agreement_panel_is_unanimous() {
        let config = cfg(1.0, 0.5);
        let mut rng = run_rng(config.seed, 0);
        let panel = generate_panel(&config, &mut rng).unwrap();
        assert_eq!(panel.len(), config.items_per_run);
        for item in &panel {
            assert!(item.votes.iter().all(|v| *v == item.consensus_label));
        }
    }

    #[test]
    fn all_positive_ratio_forces_positive_latents() {
        let config = cfg(0.9, 1.0);
        let mut rng = run_rng(config.seed, 0);
        let panel = generate_panel(&config, &mut rng).unwrap();
        assert!(panel.iter().all(|i| i.consensus_label == Label::Positive));
    }

    #[test]
    fn panels_are_seed_deterministic() {
        let config = cfg(0.8, 0.3);
        let a = generate_panel(&config, &mut run_rng(42, 0)).unwrap();
        let b = generate_panel(&config, &mut run_rng(42, 0)).unwrap();
        assert_eq!(a, b);
        let c = generate_panel(&config, &mut run_rng(43, 0)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn simulation_results_are_deterministic() {
        let config = cfg(0.8, 0.3);
        let a = run_simulation(&config).unwrap();
        let b = run_simulation(&config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn perfect_agreement_gives_perfect_sim_human() {
        let result = run_simulation(&cfg(1.0, 0.5)).unwrap();
        let acc = result.sim_human.accuracy.unwrap();
        assert_eq!(acc.mean, 1.0);
        assert_eq!(acc.std, 0.0);
        let random_acc = result.random.accuracy.unwrap();
        assert_abs_diff_eq!(random_acc.mean, 0.5, epsilon = 0.03);
    }

    #[test]
    fn low_certainty_narrows_the_candidate_gap() {
        let result = run_simulation(&cfg(0.55, 0.5)).unwrap();
        let human = result.sim_human.accuracy.unwrap().mean;
        let random = result.random.accuracy.unwrap().mean;
        assert!(
            (human - random).abs() < 0.10,
            "human={human} random={random}"
        );
    }

    #[test]
    fn sim_human_f1_tracks_closed_form() {
        let result = run_simulation(&cfg(0.9, 0.5)).unwrap();
        let f1 = result.sim_human.f1.unwrap().mean;
        let expected = crate::prob::expected_metrics(0.9, 0.5).unwrap().f1.unwrap();
        assert_abs_diff_eq!(f1, expected, epsilon = 0.05);
    }

    #[test]
    fn sweep_has_grid_cardinality() {
        let quick = SimulationConfig {
            items_per_run: 50,
            runs: 3,
            ..Default::default()
        };
        let points = sweep(&[0.6, 0.8, 1.0], &[0.1, 0.3, 0.5], &quick).unwrap();
        assert_eq!(points.len(), 9);
        assert!(sweep(&[], &[0.5], &quick).is_err());
    }

    #[test]
    fn sweep_precision_rises_with_positive_ratio() {
        let points = sweep(&[0.9], &[0.1, 0.3, 0.5], &SimulationConfig::default()).unwrap();
        let precisions: Vec<f64> = points
            .iter()
            .map(|p| p.result.sim_human.precision.unwrap().mean)
            .collect();
        assert!(
            precisions[0] < precisions[1] && precisions[1] < precisions[2],
            "precisions {precisions:?} not increasing in m"
        );
    }

    #[test]
    fn sweep_csv_shape() {
        let quick = SimulationConfig {
            items_per_run: 30,
            runs: 2,
            ..Default::default()
        };
        let points = sweep(&[0.8], &[0.5], &quick).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&points, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "p_d,m,candidate,metric,mean,std");
        // 1 point x 2 candidates x 4 metrics
        assert_eq!(lines.len(), 1 + 8);
    }
}
