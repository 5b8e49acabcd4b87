//! Building an agreement-stratified scorecard from raw votes.
//!
//! Generates a synthetic dataset (400 items, two tasks, five
//! annotators per item, one model, three held-out raters), then
//! stratifies it by observed agreement and prints the scorecard with
//! sample sizes, positive ratios, expected-metric references, and
//! human-model deltas per bin.
//!
//! ```bash
//! cargo run --example stratified_report
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strateval::config::Config;
use strateval::dataset::{AnnotationRecord, Dataset, Label, PredictionRecord};
use strateval::report::{build_report, render_report_table};

fn draw(rng: &mut ChaCha8Rng, p: f64) -> Label {
    if rng.gen_bool(p) {
        Label::Positive
    } else {
        Label::Negative
    }
}

fn vote_for(rng: &mut ChaCha8Rng, truth: Label, p_match: f64) -> Label {
    if rng.gen_bool(p_match) {
        truth
    } else {
        truth.flipped()
    }
}

fn main() -> strateval::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut annotations = Vec::new();
    let mut predictions = Vec::new();

    // Two tasks with different difficulty: annotators agree more on the
    // first; the model is strong on the first, mediocre on the second.
    let tasks = [("dense_finding", 0.9, 0.88), ("subtle_finding", 0.7, 0.62)];
    for (task, panel_agreement, model_skill) in tasks {
        for i in 0..400 {
            let item = format!("case{i:03}");
            let truth = draw(&mut rng, 0.35);
            for a in 1..=5 {
                annotations.push(AnnotationRecord {
                    item_id: item.clone(),
                    task_id: task.into(),
                    annotator_id: format!("annotator_{a}"),
                    label: vote_for(&mut rng, truth, panel_agreement),
                });
            }
            predictions.push(PredictionRecord {
                item_id: item.clone(),
                task_id: task.into(),
                system_id: "candidate_model".into(),
                label: vote_for(&mut rng, truth, model_skill),
            });
            for r in 1..=3 {
                predictions.push(PredictionRecord {
                    item_id: item.clone(),
                    task_id: task.into(),
                    system_id: format!("rater_{r}"),
                    label: vote_for(&mut rng, truth, panel_agreement),
                });
            }
        }
    }

    let dataset = Dataset::new(annotations, predictions);
    let summary = dataset.validate()?;
    println!(
        "dataset: {} items x {} tasks, {} annotators, {} candidate systems\n",
        summary.items, summary.tasks, summary.annotators, summary.systems
    );

    let config = Config {
        human_systems: vec!["rater_1".into(), "rater_2".into(), "rater_3".into()],
        ..Config::default()
    };
    let report = build_report(&dataset, &config)?;
    print!("{}", render_report_table(&report));

    // The same numbers are available programmatically.
    for task in report.task_ids() {
        let row = report.row(task, "All").unwrap();
        let expected_top = report
            .row(task, "1.0")
            .and_then(|r| r.expected.as_ref().and_then(|e| e.f1));
        println!(
            "{task}: overall S={}, m={:.3}, top-bin expected F1 reference = {}",
            row.sample_size,
            row.positive_ratio,
            expected_top.map_or("n/a".into(), |v| format!("{v:.2}")),
        );
    }
    Ok(())
}
