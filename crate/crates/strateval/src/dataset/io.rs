//! Reading and writing annotation and prediction files.
//!
//! Two formats carry the same field names: delimited text (comma by
//! default) with a header row, and a JSON array of objects. Format is
//! chosen by file extension: `.json` is JSON, everything else is
//! delimited text.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::Deserialize;

use crate::dataset::{AnnotationRecord, Dataset, Label, LabelMapping, PredictionRecord};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
struct RawAnnotation {
    item_id: String,
    task_id: String,
    annotator_id: String,
    label: String,
}

#[derive(Debug, Deserialize)]
struct RawPrediction {
    item_id: String,
    task_id: String,
    system_id: String,
    label: String,
}

fn parse_label(mapping: &LabelMapping, raw: &str, path: &Path, record: u64) -> Result<Label> {
    mapping.parse(raw).ok_or_else(|| Error::Parse {
        path: path.display().to_string(),
        record,
        message: format!("label `{raw}` matches neither the positive nor the negative mapping"),
    })
}

fn is_json(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Read annotation records from a delimited or JSON file.
pub fn read_annotations(
    path: &Path,
    mapping: &LabelMapping,
    delimiter: u8,
) -> Result<Vec<AnnotationRecord>> {
    if is_json(path) {
        let mut text = String::new();
        BufReader::new(File::open(path)?).read_to_string(&mut text)?;
        let raw: Vec<RawAnnotation> = serde_json::from_str(&text)?;
        return raw
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                Ok(AnnotationRecord {
                    label: parse_label(mapping, &r.label, path, i as u64 + 1)?,
                    item_id: r.item_id,
                    task_id: r.task_id,
                    annotator_id: r.annotator_id,
                })
            })
            .collect();
    }

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .from_path(path)?;
    let mut out = Vec::new();
    for result in reader.deserialize::<RawAnnotation>() {
        let position = result
            .as_ref()
            .err()
            .and_then(|e| e.position().map(|p| p.line()))
            .unwrap_or(0);
        let raw = result.map_err(|e| Error::Parse {
            path: path.display().to_string(),
            record: position,
            message: e.to_string(),
        })?;
        let record = out.len() as u64 + 2; // header is line 1
        out.push(AnnotationRecord {
            label: parse_label(mapping, &raw.label, path, record)?,
            item_id: raw.item_id,
            task_id: raw.task_id,
            annotator_id: raw.annotator_id,
        });
    }
    Ok(out)
}

/// Read prediction records from a delimited or JSON file.
pub fn read_predictions(
    path: &Path,
    mapping: &LabelMapping,
    delimiter: u8,
) -> Result<Vec<PredictionRecord>> {
    if is_json(path) {
        let mut text = String::new();
        BufReader::new(File::open(path)?).read_to_string(&mut text)?;
        let raw: Vec<RawPrediction> = serde_json::from_str(&text)?;
        return raw
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                Ok(PredictionRecord {
                    label: parse_label(mapping, &r.label, path, i as u64 + 1)?,
                    item_id: r.item_id,
                    task_id: r.task_id,
                    system_id: r.system_id,
                })
            })
            .collect();
    }

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .from_path(path)?;
    let mut out = Vec::new();
    for result in reader.deserialize::<RawPrediction>() {
        let position = result
            .as_ref()
            .err()
            .and_then(|e| e.position().map(|p| p.line()))
            .unwrap_or(0);
        let raw = result.map_err(|e| Error::Parse {
            path: path.display().to_string(),
            record: position,
            message: e.to_string(),
        })?;
        let record = out.len() as u64 + 2;
        out.push(PredictionRecord {
            label: parse_label(mapping, &raw.label, path, record)?,
            item_id: raw.item_id,
            task_id: raw.task_id,
            system_id: raw.system_id,
        });
    }
    Ok(out)
}

/// Load a full dataset from an annotation file and a prediction file.
pub fn read_dataset(
    annotations_path: &Path,
    predictions_path: &Path,
    mapping: &LabelMapping,
    delimiter: u8,
) -> Result<Dataset> {
    Ok(Dataset::new(
        read_annotations(annotations_path, mapping, delimiter)?,
        read_predictions(predictions_path, mapping, delimiter)?,
    ))
}

/// Write annotation records as delimited text with a header row.
pub fn write_annotations<W: Write>(
    records: &[AnnotationRecord],
    out: W,
    delimiter: u8,
) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_writer(out);
    writer.write_record(["item_id", "task_id", "annotator_id", "label"])?;
    for r in records {
        writer.write_record([&r.item_id, &r.task_id, &r.annotator_id, r.label.as_str()])?;
    }
    writer.flush()?;
    Ok(())
}

/// Write prediction records as delimited text with a header row.
pub fn write_predictions<W: Write>(
    records: &[PredictionRecord],
    out: W,
    delimiter: u8,
) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_writer(out);
    writer.write_record(["item_id", "task_id", "system_id", "label"])?;
    for r in records {
        writer.write_record([&r.item_id, &r.task_id, &r.system_id, r.label.as_str()])?;
    }
    writer.flush()?;
    Ok(())
}

/// Write prediction records to a file path.
pub fn write_predictions_path(
    records: &[PredictionRecord],
    path: &Path,
    delimiter: u8,
) -> Result<()> {
    write_predictions(records, BufWriter::new(File::create(path)?), delimiter)
}
