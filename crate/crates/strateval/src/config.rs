//! Run configuration: label vocabulary, bin edges, candidate roles,
//! thresholds, and output options. Loaded from a TOML file; every field
//! has a default and command-line flags override file values.
//!
//! ```toml
//! # which prediction systems are held-out human raters
//! human_systems = ["rater_1", "rater_2", "rater_3"]
//!
//! evidence_threshold = 0.8
//! evidence_metric = "f1"
//! delimiter = ","
//! seed = 42
//! output_formats = ["table", "json"]
//!
//! [label_mapping]
//! positive = ["1", "yes", "positive", "true"]
//! negative = ["0", "no", "negative", "false"]
//!
//! # agreement bins: upper edges are exact decimals, exclusive except
//! # the last which must end at 1 and is inclusive
//! [[bins]]
//! label = "0.6"
//! upper = "0.7"
//! nominal_p_d = 0.6
//!
//! [[bins]]
//! label = "0.8"
//! upper = "0.9"
//! nominal_p_d = 0.8
//!
//! [[bins]]
//! label = "1.0"
//! upper = "1.0"
//! nominal_p_d = 0.985
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::LabelMapping;
use crate::error::{Error, Result};
use crate::metrics::Metric;
use crate::stratify::{parse_decimal_ratio, Bin, BinScheme};

/// One bin row as written in the config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BinConfig {
    pub label: String,
    /// Upper edge as a plain decimal string, e.g. "0.7".
    pub upper: String,
    /// Agreement value used for this bin's expected-metric reference.
    pub nominal_p_d: f64,
}

/// Full run configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub label_mapping: LabelMapping,
    /// Bin rows; empty means the built-in default scheme.
    pub bins: Vec<BinConfig>,
    /// Prediction systems treated as held-out human raters; everything
    /// else is scored as a model.
    pub human_systems: Vec<String>,
    pub evidence_threshold: f64,
    pub evidence_metric: Metric,
    /// Field delimiter for delimited input/output, single byte.
    pub delimiter: String,
    pub seed: u64,
    /// Report formats emitted by default: "table", "csv", "json".
    pub output_formats: Vec<String>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            label_mapping: LabelMapping::default(),
            bins: Vec::new(),
            human_systems: Vec::new(),
            evidence_threshold: 0.8,
            evidence_metric: Metric::F1,
            delimiter: ",".into(),
            seed: 42,
            output_formats: vec!["table".into()],
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let config: Config =
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.evidence_threshold) {
            return Err(Error::Config(format!(
                "evidence_threshold must lie in [0, 1], got {}",
                self.evidence_threshold
            )));
        }
        for format in &self.output_formats {
            if !["table", "csv", "json"].contains(&format.to_ascii_lowercase().as_str()) {
                return Err(Error::Config(format!("unknown output format `{format}`")));
            }
        }
        self.delimiter_byte()?;
        self.bin_scheme()?;
        Ok(())
    }

    pub fn delimiter_byte(&self) -> Result<u8> {
        let bytes = self.delimiter.as_bytes();
        if bytes.len() != 1 {
            return Err(Error::Config(format!(
                "delimiter must be a single byte, got `{}`",
                self.delimiter
            )));
        }
        Ok(bytes[0])
    }

    /// Materialize the configured bins, or the default scheme.
    pub fn bin_scheme(&self) -> Result<BinScheme> {
        if self.bins.is_empty() {
            return Ok(BinScheme::default());
        }
        let bins = self
            .bins
            .iter()
            .map(|b| {
                Ok(Bin {
                    label: b.label.clone(),
                    upper: parse_decimal_ratio(&b.upper)?,
                    nominal_p_d: b.nominal_p_d,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        BinScheme::new(bins)
    }
}
