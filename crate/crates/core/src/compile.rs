//! Three-stage compilation of a canonical corpus into training rows.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CompileError, DatasetError};
use crate::hard::build_hard_set_with;
use crate::io::{sample_low_resource, write_compiled, CompiledExample, Stage};
use crate::model::{is_empty_target, validate_instance, CanonicalInstance, Schema, Task};
use crate::par::Execution;
use crate::prompt::{build_prompt, main_prompt};
use crate::sel::{normalization_notes, serialize, structure_of};
use crate::skills::decompose;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompileConfig {
    pub task: Task,
    pub stages: Vec<Stage>,
    /// Partners per base instance in the hard stage.
    pub m: usize,
    pub seed: u64,
    pub low_resource_ratio: Option<f64>,
    pub merge_stages: bool,
}

impl CompileConfig {
    pub fn new(task: Task) -> Self {
        CompileConfig {
            task,
            stages: Stage::ALL.to_vec(),
            m: 1,
            seed: DEFAULT_SEED,
            low_resource_ratio: None,
            merge_stages: false,
        }
    }

    fn wants(&self, stage: Stage) -> bool {
        self.stages.contains(&stage)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CompileSummary {
    pub source_instances: usize,
    pub instances: usize,
    pub per_stage: BTreeMap<Stage, usize>,
    pub per_skill: BTreeMap<String, usize>,
    pub empty_targets: usize,
    pub empty_target_ratio: f64,
    pub normalized_instances: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompileOutput {
    /// Rows per requested stage, in stage order.
    pub stages: BTreeMap<Stage, Vec<CompiledExample>>,
    pub summary: CompileSummary,
}

impl CompileOutput {
    /// All rows in easy, hard, main order.
    pub fn merged(&self) -> Vec<CompiledExample> {
        self.stages.values().flatten().cloned().collect()
    }
}

fn check_inputs(instances: &[CanonicalInstance], schema: &Schema, task: Task) -> Result<(), CompileError> {
    if schema.task != task {
        return Err(CompileError::SchemaTaskMismatch {
            schema: schema.task,
            requested: task,
        });
    }
    let problems = schema.problems();
    if !problems.is_empty() {
        return Err(CompileError::InvalidSchema(problems));
    }
    let mut count = 0;
    let mut first = None;
    for inst in instances {
        let v = validate_instance(inst, schema);
        if let Some(x) = v.first() {
            first.get_or_insert_with(|| format!("{}: {x}", inst.id));
        }
        count += v.len();
    }
    match first {
        None => Ok(()),
        Some(first) => Err(CompileError::InvalidInstances { count, first }),
    }
}

fn notes_meta(inst: &CanonicalInstance, meta: &mut BTreeMap<String, Value>) {
    let notes = normalization_notes(inst);
    if !notes.is_empty() {
        meta.insert("normalized".into(), json!(notes));
    }
}

fn main_rows(instances: &[CanonicalInstance], schema: &Schema, exec: Execution) -> Result<Vec<CompiledExample>, CompileError> {
    let spec = main_prompt(schema);
    exec.map(instances, |_, inst| {
        let mut meta = BTreeMap::new();
        notes_meta(inst, &mut meta);
        Ok(CompiledExample {
            id: inst.id.clone(),
            stage: Stage::Main,
            skill: None,
            input: build_prompt(&spec, &inst.text)?,
            target: serialize(&structure_of(inst))?,
            meta,
        })
    })
    .into_iter()
    .collect()
}

fn easy_rows(instances: &[CanonicalInstance], schema: &Schema, exec: Execution) -> Result<Vec<CompiledExample>, CompileError> {
    let per_inst = exec.map(instances, |_, inst| {
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        decompose(inst, schema)
            .into_iter()
            .map(|s| {
                let tag = s.skill.to_string();
                let k = seen.entry(tag.clone()).or_insert(0);
                *k += 1;
                let mut meta = BTreeMap::from([("parent_id".to_string(), json!(s.parent_id))]);
                if let Some(c) = &s.prompt.constraint {
                    meta.insert("constraint".into(), json!(c.to_string()));
                }
                notes_meta(inst, &mut meta);
                Ok(CompiledExample {
                    id: format!("{}#{tag}#{k}", s.parent_id),
                    stage: Stage::Easy,
                    skill: Some(tag),
                    input: build_prompt(&s.prompt, &inst.text)?,
                    target: serialize(&s.target)?,
                    meta,
                })
            })
            .collect::<Result<Vec<_>, CompileError>>()
    });
    let mut out = Vec::new();
    for rows in per_inst {
        out.extend(rows?);
    }
    Ok(out)
}

fn hard_rows(
    instances: &[CanonicalInstance],
    schema: &Schema,
    config: &CompileConfig,
    exec: Execution,
) -> Result<Vec<CompiledExample>, CompileError> {
    let spec = main_prompt(schema);
    let set = build_hard_set_with(instances, config.m, config.seed, exec)?;
    exec.map(&set, |i, h| {
        Ok(CompiledExample {
            id: format!("{}#hard#{}", h.base_id, i % config.m + 1),
            stage: Stage::Hard,
            skill: None,
            input: build_prompt(&spec, &h.text)?,
            target: serialize(&h.target)?,
            meta: BTreeMap::from([
                ("base_id".to_string(), json!(h.base_id)),
                ("partner_id".to_string(), json!(h.partner_id)),
                ("offset_shift".to_string(), json!(h.offset_shift)),
            ]),
        })
    })
    .into_iter()
    .collect()
}

pub fn compile(
    instances: &[CanonicalInstance],
    schema: &Schema,
    config: &CompileConfig,
) -> Result<CompileOutput, CompileError> {
    compile_with(instances, schema, config, Execution::default())
}

pub fn compile_with(
    instances: &[CanonicalInstance],
    schema: &Schema,
    config: &CompileConfig,
    exec: Execution,
) -> Result<CompileOutput, CompileError> {
    if config.stages.is_empty() {
        return Err(CompileError::NoStages);
    }
    check_inputs(instances, schema, config.task)?;
    let sampled;
    let instances = match config.low_resource_ratio {
        Some(r) => {
            sampled = sample_low_resource(instances, r, config.seed)?;
            &sampled[..]
        }
        None => instances,
    };

    let mut stages = BTreeMap::new();
    if config.wants(Stage::Easy) {
        stages.insert(Stage::Easy, easy_rows(instances, schema, exec)?);
    }
    if config.wants(Stage::Hard) {
        stages.insert(Stage::Hard, hard_rows(instances, schema, config, exec)?);
    }
    if config.wants(Stage::Main) {
        stages.insert(Stage::Main, main_rows(instances, schema, exec)?);
    }

    let mut summary = CompileSummary {
        instances: instances.len(),
        ..CompileSummary::default()
    };
    for (stage, rows) in &stages {
        summary.per_stage.insert(*stage, rows.len());
        for skill in rows.iter().filter_map(|r| r.skill.as_ref()) {
            *summary.per_skill.entry(skill.clone()).or_default() += 1;
        }
    }
    summary.empty_targets = instances.iter().filter(|i| is_empty_target(i)).count();
    summary.empty_target_ratio = if instances.is_empty() {
        0.0
    } else {
        summary.empty_targets as f64 / instances.len() as f64
    };
    summary.normalized_instances = instances
        .iter()
        .filter(|i| !normalization_notes(i).is_empty())
        .count();
    Ok(CompileOutput { stages, summary })
}

/// Writes `{stage}.jsonl` per stage (or `merged.jsonl`), `summary.json` and a
/// `manifest.json` echoing the config. Returns the written paths.
pub fn write_output(
    output: &CompileOutput,
    config: &CompileConfig,
    inputs: &Manifest,
    dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>, DatasetError> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| DatasetError::io(dir, e))?;
    let mut written = Vec::new();
    if config.merge_stages {
        let path = dir.join("merged.jsonl");
        write_compiled(&output.merged(), &path)?;
        written.push(path);
    } else {
        for (stage, rows) in &output.stages {
            let path = dir.join(format!("{stage}.jsonl"));
            write_compiled(rows, &path)?;
            written.push(path);
        }
    }
    let write_json = |name: &str, value: Value| -> Result<PathBuf, DatasetError> {
        let path = dir.join(name);
        let text = serde_json::to_string_pretty(&value).expect("json value serializes") + "\n";
        std::fs::write(&path, text).map_err(|e| DatasetError::io(&path, e))?;
        Ok(path)
    };
    written.push(write_json("summary.json", json!(output.summary))?);
    written.push(write_json(
        "manifest.json",
        json!({
            "config": config,
            "inputs": inputs,
            "version": env!("CARGO_PKG_VERSION"),
        }),
    )?);
    Ok(written)
}

/// Input locations recorded in the manifest.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Manifest {
    pub schema: Option<String>,
    pub inputs: Vec<String>,
}
