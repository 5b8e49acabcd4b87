//! Shared fixture: a three-task dataset with 5-annotator panels whose
//! per-bin sample sizes, positive ratios, and per-candidate confusion
//! counts are pinned to reference scorecard values. The counts were
//! solved offline by integer search so that every candidate's observed
//! metrics land within two-decimal rounding of the reference values.
#![allow(dead_code)] // each integration test crate uses a subset

use strateval::config::Config;
use strateval::dataset::{AnnotationRecord, Dataset, Label, PredictionRecord};

/// Per (task, bin): sample size, majority-positive count, model_a
/// (tp, fp), model_b (tp, fp), and three raters' (tp, fp).
pub type Cell = (
    &'static str,
    &'static str,
    usize,
    usize,
    (usize, usize),
    (usize, usize),
    [(usize, usize); 3],
);

pub const CELLS: &[Cell] = &[
    (
        "cardiomegaly",
        "0.6",
        142,
        72,
        (54, 35),
        (44, 34),
        [(40, 13), (37, 9), (55, 42)],
    ),
    (
        "cardiomegaly",
        "0.8",
        196,
        73,
        (60, 41),
        (44, 27),
        [(52, 21), (62, 37), (43, 7)],
    ),
    (
        "cardiomegaly",
        "1.0",
        162,
        6,
        (4, 13),
        (4, 14),
        [(6, 3), (6, 2), (2, 1)],
    ),
    (
        "lung_opacity",
        "0.6",
        106,
        55,
        (29, 17),
        (44, 34),
        [(34, 18), (37, 23), (32, 16)],
    ),
    (
        "lung_opacity",
        "0.8",
        125,
        67,
        (55, 11),
        (61, 21),
        [(54, 9), (61, 18), (50, 1)],
    ),
    (
        "lung_opacity",
        "1.0",
        269,
        142,
        (119, 6),
        (135, 23),
        [(132, 2), (142, 14), (142, 8)],
    ),
    (
        "support_devices",
        "0.6",
        50,
        29,
        (29, 19),
        (29, 20),
        [(26, 18), (17, 3), (21, 5)],
    ),
    (
        "support_devices",
        "0.8",
        105,
        74,
        (71, 20),
        (71, 22),
        [(66, 0), (66, 0), (72, 13)],
    ),
    (
        "support_devices",
        "1.0",
        345,
        158,
        (152, 91),
        (152, 90),
        [(153, 0), (154, 0), (153, 6)],
    ),
];

/// Reference row values: (task, bin, m to three decimals, model_a F1
/// delta, model_b F1 delta). "All" rows aggregate the three bins.
pub const REFERENCE_ROWS: &[(&str, &str, f64, f64, f64)] = &[
    ("cardiomegaly", "0.6", 0.507, -0.03, 0.05),
    ("cardiomegaly", "0.8", 0.372, 0.02, 0.10),
    ("cardiomegaly", "1.0", 0.037, 0.35, 0.37),
    ("cardiomegaly", "All", 0.302, 0.02, 0.10),
    ("lung_opacity", "0.6", 0.519, 0.06, -0.03),
    ("lung_opacity", "0.8", 0.536, 0.01, 0.02),
    ("lung_opacity", "1.0", 0.528, 0.07, 0.06),
    ("lung_opacity", "All", 0.528, 0.05, 0.03),
    ("support_devices", "0.6", 0.580, -0.03, -0.02),
    ("support_devices", "0.8", 0.705, 0.07, 0.08),
    ("support_devices", "1.0", 0.458, 0.22, 0.22),
    ("support_devices", "All", 0.522, 0.15, 0.15),
];

pub const MODELS: [&str; 2] = ["model_a", "model_b"];
pub const RATERS: [&str; 3] = ["rater_1", "rater_2", "rater_3"];

fn bin_vote_pattern(bin: &str, majority: Label, item_index: usize) -> Vec<Label> {
    let minority_count = match bin {
        "0.6" => 2,
        "0.8" => 1,
        "1.0" => 0,
        other => panic!("unexpected bin {other}"),
    };
    // Rotate which annotators hold the minority view.
    let mut votes = vec![majority; 5];
    for k in 0..minority_count {
        votes[(item_index + 2 * k) % 5] = majority.flipped();
    }
    votes
}

fn candidate_predictions(
    task: &str,
    system: &str,
    items: &[(String, Label)],
    tp: usize,
    fp: usize,
) -> Vec<PredictionRecord> {
    let mut positive_seen = 0usize;
    let mut negative_seen = 0usize;
    items
        .iter()
        .map(|(item_id, majority)| {
            let answer = match majority {
                Label::Positive => {
                    positive_seen += 1;
                    if positive_seen <= tp {
                        Label::Positive
                    } else {
                        Label::Negative
                    }
                }
                Label::Negative => {
                    negative_seen += 1;
                    if negative_seen <= fp {
                        Label::Positive
                    } else {
                        Label::Negative
                    }
                }
            };
            PredictionRecord {
                item_id: item_id.clone(),
                task_id: task.to_string(),
                system_id: system.to_string(),
                label: answer,
            }
        })
        .collect()
}

/// Materialize the pinned counts into a full dataset: 500 shared item
/// ids per task, five annotators, two models, three raters.
pub fn three_task_dataset() -> Dataset {
    let mut annotations = Vec::new();
    let mut predictions = Vec::new();

    let tasks: Vec<&str> = {
        let mut seen = Vec::new();
        for (task, ..) in CELLS {
            if !seen.contains(task) {
                seen.push(task);
            }
        }
        seen
    };

    for task in tasks {
        let mut next_item = 0usize;
        for (cell_task, bin, s, positives, model_a, model_b, raters) in CELLS {
            if cell_task != &task {
                continue;
            }
            // Items of this bin: majority-positive first, then negative.
            let items: Vec<(String, Label)> = (0..*s)
                .map(|i| {
                    let id = format!("img{:03}", next_item + i);
                    let majority = if i < *positives {
                        Label::Positive
                    } else {
                        Label::Negative
                    };
                    (id, majority)
                })
                .collect();
            next_item += s;

            for (i, (item_id, majority)) in items.iter().enumerate() {
                for (a, vote) in bin_vote_pattern(bin, *majority, i).into_iter().enumerate() {
                    annotations.push(AnnotationRecord {
                        item_id: item_id.clone(),
                        task_id: task.to_string(),
                        annotator_id: format!("annotator_{}", a + 1),
                        label: vote,
                    });
                }
            }

            predictions.extend(candidate_predictions(
                task, MODELS[0], &items, model_a.0, model_a.1,
            ));
            predictions.extend(candidate_predictions(
                task, MODELS[1], &items, model_b.0, model_b.1,
            ));
            for (r, (tp, fp)) in raters.iter().enumerate() {
                predictions.extend(candidate_predictions(task, RATERS[r], &items, *tp, *fp));
            }
        }
    }

    Dataset::new(annotations, predictions)
}

/// Config matching the fixture: the three raters are humans.
pub fn fixture_config() -> Config {
    Config {
        human_systems: RATERS.iter().map(|r| r.to_string()).collect(),
        ..Config::default()
    }
}

/// Write the fixture as CSV files for driving the command-line surface.
pub fn write_fixture_csvs(dir: &std::path::Path) -> (std::path::PathBuf, std::path::PathBuf) {
    let dataset = three_task_dataset();
    let annotations_path = dir.join("annotations.csv");
    let predictions_path = dir.join("predictions.csv");
    let annotations_file = std::fs::File::create(&annotations_path).unwrap();
    strateval::dataset::io::write_annotations(&dataset.annotations, annotations_file, b',')
        .unwrap();
    let predictions_file = std::fs::File::create(&predictions_path).unwrap();
    strateval::dataset::io::write_predictions(&dataset.predictions, predictions_file, b',')
        .unwrap();
    (annotations_path, predictions_path)
}
