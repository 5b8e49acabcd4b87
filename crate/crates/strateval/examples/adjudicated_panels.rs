//! Variable panels: two readers plus an adjudicator.
//!
//! Screening programmes often collect two independent reads and call a
//! third reader only on disagreement. The adjudicator's vote is one
//! more expert opinion, so disagreeing items end up with 2/3 observed
//! agreement and unanimous items with 2/2. When no held-out human
//! answers exist, a pseudo-rater drawn from the ground-truth votes
//! stands in: it behaves exactly like one more expert sampled from the
//! panel's distribution.
//!
//! ```bash
//! cargo run --example adjudicated_panels
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strateval::config::Config;
use strateval::dataset::{AnnotationRecord, Dataset, Label, PredictionRecord};
use strateval::report::{build_report, render_report_table};

fn main() -> strateval::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut annotations = Vec::new();
    let mut predictions = Vec::new();

    // 2000 screening cases, ~5% positive; readers disagree on a fifth.
    for i in 0..2000 {
        let item = format!("scan{i:04}");
        let truth = if rng.gen_bool(0.05) {
            Label::Positive
        } else {
            Label::Negative
        };
        let disagreement = rng.gen_bool(0.2);
        let reader_a = truth;
        let reader_b = if disagreement { truth.flipped() } else { truth };
        annotations.push(AnnotationRecord {
            item_id: item.clone(),
            task_id: "screening".into(),
            annotator_id: "reader_a".into(),
            label: reader_a,
        });
        annotations.push(AnnotationRecord {
            item_id: item.clone(),
            task_id: "screening".into(),
            annotator_id: "reader_b".into(),
            label: reader_b,
        });
        if disagreement {
            // adjudicator leans toward the eventual truth but is fallible
            annotations.push(AnnotationRecord {
                item_id: item.clone(),
                task_id: "screening".into(),
                annotator_id: "adjudicator".into(),
                label: if rng.gen_bool(0.9) {
                    truth
                } else {
                    truth.flipped()
                },
            });
        }
        // the screening model over-calls positives
        let model_answer = if truth == Label::Positive {
            if rng.gen_bool(0.85) {
                Label::Positive
            } else {
                Label::Negative
            }
        } else if rng.gen_bool(0.08) {
            Label::Positive
        } else {
            Label::Negative
        };
        predictions.push(PredictionRecord {
            item_id: item,
            task_id: "screening".into(),
            system_id: "screening_model".into(),
            label: model_answer,
        });
    }

    let mut dataset = Dataset::new(annotations, predictions);
    let summary = dataset.validate()?;
    let panel = &summary.panel_sizes["screening"];
    println!(
        "panel sizes {}..{} ({} items carry the adjudicator's extra vote)\n",
        panel.min, panel.max, summary.variable_panel_items
    );

    // No held-out humans here; sample a pseudo-rater from the votes.
    let pseudo = dataset.pseudo_rater("H'", 13);
    dataset.predictions.extend(pseudo);

    let config = Config {
        human_systems: vec!["H'".into()],
        ..Config::default()
    };
    let report = build_report(&dataset, &config)?;
    print!("{}", render_report_table(&report));

    // Only the 2/3 and unanimous bins can appear with these panels.
    let bins: Vec<&str> = report.rows.iter().map(|r| r.bin_label.as_str()).collect();
    println!("occupied bins: {bins:?}");
    for bin in ["0.6", "1.0"] {
        if let Some(row) = report.row("screening", bin) {
            let human = row.human.as_ref().unwrap();
            println!(
                "bin {bin}: S={}, m={:.3}, pseudo-rater accuracy {:.3} \
                 (expected ~{} for one more panel member)",
                row.sample_size,
                row.positive_ratio,
                human.accuracy.unwrap().mean,
                if bin == "0.6" { "2/3" } else { "1.0" },
            );
        }
    }
    Ok(())
}
