//! Line-delimited JSON files: canonical corpora, compiled training files,
//! prediction dumps, and schema files.

mod conll;
mod sample;

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub use conll::{category_name, convert_bio_str, convert_conll_bio, ConversionReport};
pub use sample::{low_resource_size, sample_low_resource};

use crate::error::DatasetError;
use crate::model::{validate_structure, CanonicalInstance, Schema};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Easy,
    Hard,
    Main,
}

impl Stage {
    pub const ALL: [Stage; 3] = [Stage::Easy, Stage::Hard, Stage::Main];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Easy => "easy",
            Stage::Hard => "hard",
            Stage::Main => "main",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Stage::ALL
            .into_iter()
            .find(|st| st.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown stage {s:?} (expected easy, hard or main)"))
    }
}

/// One row of a compiled training file: the full model input and its SEL target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompiledExample {
    pub id: String,
    pub stage: Stage,
    pub skill: Option<String>,
    pub input: String,
    pub target: String,
    #[serde(default)]
    pub meta: BTreeMap<String, serde_json::Value>,
}

/// A raw model generation for one evaluation instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub output: String,
}

fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<(usize, T)>, DatasetError> {
    let file = File::open(path).map_err(|e| DatasetError::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| DatasetError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|source| DatasetError::Malformed {
            path: path.to_path_buf(),
            line: i + 1,
            source,
        })?;
        out.push((i + 1, record));
    }
    Ok(out)
}

fn write_jsonl<T: Serialize>(items: &[T], path: &Path) -> Result<(), DatasetError> {
    let file = File::create(path).map_err(|e| DatasetError::io(path, e))?;
    let mut w = BufWriter::new(file);
    for item in items {
        let line = serde_json::to_string(item).expect("records always serialize");
        writeln!(w, "{line}").map_err(|e| DatasetError::io(path, e))?;
    }
    w.flush().map_err(|e| DatasetError::io(path, e))
}

/// Reads a canonical corpus, checking every span against its text.
pub fn read_canonical(path: impl AsRef<Path>) -> Result<Vec<CanonicalInstance>, DatasetError> {
    let path = path.as_ref();
    read_jsonl::<CanonicalInstance>(path)?
        .into_iter()
        .map(|(line, inst)| match validate_structure(&inst).first() {
            None => Ok(inst),
            Some(v) => Err(DatasetError::InvalidSpan {
                path: path.to_path_buf(),
                line,
                id: inst.id.clone(),
                detail: v.to_string(),
            }),
        })
        .collect()
}

pub fn write_canonical(instances: &[CanonicalInstance], path: impl AsRef<Path>) -> Result<(), DatasetError> {
    write_jsonl(instances, path.as_ref())
}

pub fn read_compiled(path: impl AsRef<Path>) -> Result<Vec<CompiledExample>, DatasetError> {
    Ok(read_jsonl(path.as_ref())?.into_iter().map(|(_, x)| x).collect())
}

/// Reads a compiled file keeping only rows of the given stages.
pub fn read_compiled_stages(
    path: impl AsRef<Path>,
    stages: &[Stage],
) -> Result<Vec<CompiledExample>, DatasetError> {
    let mut rows = read_compiled(path)?;
    rows.retain(|r| stages.contains(&r.stage));
    Ok(rows)
}

pub fn write_compiled(examples: &[CompiledExample], path: impl AsRef<Path>) -> Result<(), DatasetError> {
    write_jsonl(examples, path.as_ref())
}

pub fn read_predictions(path: impl AsRef<Path>) -> Result<Vec<PredictionRecord>, DatasetError> {
    Ok(read_jsonl(path.as_ref())?.into_iter().map(|(_, x)| x).collect())
}

pub fn write_predictions(records: &[PredictionRecord], path: impl AsRef<Path>) -> Result<(), DatasetError> {
    write_jsonl(records, path.as_ref())
}

pub fn read_schema(path: impl AsRef<Path>) -> Result<Schema, DatasetError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| DatasetError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| DatasetError::Malformed {
        path: path.to_path_buf(),
        line: source.line(),
        source,
    })
}

pub fn write_schema(schema: &Schema, path: impl AsRef<Path>) -> Result<(), DatasetError> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(schema).expect("schema always serializes");
    std::fs::write(path, text + "\n").map_err(|e| DatasetError::io(path, e))
}
