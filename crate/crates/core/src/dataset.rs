//! Dataset ingestion and the bundled lifetime fixture.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::sample::SortedSample;

/// Name under which the bundled 48-point lifetime dataset is addressed.
pub const BUNDLED_LIFETIME: &str = "bundled:lifetime48";

/// Raw text of the bundled lifetime dataset (years to failure).
pub const LIFETIME48_TEXT: &str = include_str!("../data/lifetime48.txt");

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub observations: Vec<f64>,
    pub source: String,
}

impl Dataset {
    /// The 48 lifetimes in their original order.
    pub fn lifetime48() -> Self {
        Self::parse_str(
            LIFETIME48_TEXT,
            "lifetime48",
            BUNDLED_LIFETIME,
            Path::new(BUNDLED_LIFETIME),
        )
        .expect("bundled dataset parses")
    }

    /// Loads `bundled:lifetime48` or a file path.
    pub fn load(source: &str) -> Result<Self> {
        if source == BUNDLED_LIFETIME {
            return Ok(Self::lifetime48());
        }
        parse_dataset(Path::new(source))
    }

    /// Parses observations separated by newlines, whitespace or commas.
    /// Lines whose first non-blank character is `#` are skipped.
    pub fn parse_str(text: &str, name: &str, source: &str, path: &Path) -> Result<Self> {
        let mut observations = Vec::new();
        let mut bad = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            for tok in line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
            {
                let v: f64 = tok.parse().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    message: format!("`{tok}` is not a number"),
                })?;
                if !(v > 0.0 && v.is_finite()) {
                    bad.push(observations.len());
                }
                observations.push(v);
            }
        }
        if !bad.is_empty() {
            return Err(Error::InvalidSample {
                reason: "observations must be positive and finite",
                indices: bad,
            });
        }
        if observations.is_empty() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: 0,
                message: "no observations found".into(),
            });
        }
        Ok(Self {
            name: name.to_string(),
            observations,
            source: source.to_string(),
        })
    }

    pub fn sorted(&self) -> Result<SortedSample> {
        SortedSample::new(self.observations.clone())
    }
}

pub fn parse_dataset(path: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    Dataset::parse_str(
        &text,
        &name,
        &PathBuf::from(path).display().to_string(),
        path,
    )
}
