use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use selkit::compile::{write_output, Manifest};
use selkit::hard::recommended_partner_counts;
use selkit::io::{self, Stage};
use selkit::sel::parse;
use selkit::{CompileConfig, Schema, Task};

/// Build staged training files for text-to-structure extraction and score
/// model outputs against offset-annotated gold data.
#[derive(Parser)]
#[command(name = "selkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile canonical instances into easy/hard/main training files
    Compile(CompileArgs),
    /// Score raw model outputs against gold instances
    Score(ScoreArgs),
    /// Pretty-print one compiled example
    Inspect(InspectArgs),
    /// Convert a token-per-line BIO file into canonical NER instances
    Convert(ConvertArgs),
    /// Draw a low-resource subsample of a canonical file
    Sample(SampleArgs),
}

#[derive(Args)]
struct CompileArgs {
    /// Task: ner, re, ee, aste or asqp
    #[arg(long)]
    task: Task,
    /// Schema file (JSON)
    #[arg(long)]
    schema: PathBuf,
    /// Canonical instance files (JSON lines); read in the given order
    #[arg(long = "input", required = true, num_args = 1..)]
    inputs: Vec<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    /// Stages to emit, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = [Stage::Easy, Stage::Hard, Stage::Main])]
    stages: Vec<Stage>,
    /// Partners per base instance in the hard stage (required when hard is requested)
    #[arg(long)]
    m: Option<usize>,
    /// Seed for partner draws and low-resource sampling
    #[arg(long, default_value_t = selkit::compile::DEFAULT_SEED)]
    seed: u64,
    /// Keep only this fraction of the input, in (0, 1]
    #[arg(long)]
    low_resource_ratio: Option<f64>,
    /// Write all stages to one merged.jsonl instead of one file per stage
    #[arg(long)]
    merge: bool,
}

#[derive(Args)]
struct ScoreArgs {
    /// Gold canonical instances (JSON lines)
    #[arg(long)]
    gold: PathBuf,
    /// Prediction records {"id","output"} (JSON lines)
    #[arg(long)]
    predictions: PathBuf,
    #[arg(long)]
    task: Task,
    #[arg(long)]
    schema: PathBuf,
    /// Write the report as JSON here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InspectArgs {
    /// Compiled file (JSON lines)
    #[arg(long)]
    compiled: PathBuf,
    #[arg(long)]
    id: String,
}

#[derive(Args)]
struct ConvertArgs {
    /// BIO file: token first, tag last, blank line between sentences
    #[arg(long)]
    input: PathBuf,
    /// Canonical output file
    #[arg(long)]
    out: PathBuf,
    /// Instance ids are {prefix}-{n}
    #[arg(long, default_value = "sent")]
    prefix: String,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Fraction to keep, in (0, 1]
    #[arg(long)]
    ratio: f64,
    #[arg(long, default_value_t = selkit::compile::DEFAULT_SEED)]
    seed: u64,
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

fn compile(args: CompileArgs) -> Result<()> {
    let schema = io::read_schema(&args.schema)?;
    let hard = args.stages.contains(&Stage::Hard);
    let m = match (args.m, hard) {
        (Some(0), true) => bail!("--m must be at least 1"),
        (Some(m), _) => m,
        (None, true) => bail!("--m is required when the hard stage is requested"),
        (None, false) => 1,
    };
    if hard && !recommended_partner_counts(args.task).contains(&m) {
        eprintln!(
            "note: m = {m} is outside the usual partner counts {:?} for {}",
            recommended_partner_counts(args.task),
            args.task
        );
    }
    let mut instances = Vec::new();
    for path in &args.inputs {
        instances.extend(io::read_canonical(path)?);
    }
    let mut stages = args.stages.clone();
    stages.sort();
    stages.dedup();
    let config = CompileConfig {
        task: args.task,
        stages,
        m,
        seed: args.seed,
        low_resource_ratio: args.low_resource_ratio,
        merge_stages: args.merge,
    };
    let output = selkit::compile(&instances, &schema, &config)?;
    let manifest = Manifest {
        schema: Some(display(&args.schema)),
        inputs: args.inputs.iter().map(|p| display(p)).collect(),
    };
    let written = write_output(&output, &config, &manifest, &args.out)?;
    let s = &output.summary;
    println!("{} instances compiled", s.instances);
    for (stage, n) in &s.per_stage {
        println!("  {stage:<5} {n}");
    }
    for (skill, n) in &s.per_skill {
        println!("    {skill:<12} {n}");
    }
    println!("empty targets: {} ({:.1}%)", s.empty_targets, 100.0 * s.empty_target_ratio);
    if s.normalized_instances > 0 {
        println!("instances with normalized labels or spans: {}", s.normalized_instances);
    }
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn score(args: ScoreArgs) -> Result<()> {
    let schema = io::read_schema(&args.schema)?;
    let gold = io::read_canonical(&args.gold)?;
    let preds = io::read_predictions(&args.predictions)?;
    let report = selkit::score::score(&gold, &preds, args.task, &schema)?;
    print!("{}", report.to_table());
    if let Some(out) = &args.out {
        let text = serde_json::to_string_pretty(&report)? + "\n";
        std::fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}

fn inspect(args: InspectArgs) -> Result<()> {
    let rows = io::read_compiled(&args.compiled)?;
    let Some(row) = rows.iter().find(|r| r.id == args.id) else {
        bail!("no example with id {:?} in {}", args.id, args.compiled.display());
    };
    println!("id      {}", row.id);
    println!("stage   {}", row.stage);
    if let Some(skill) = &row.skill {
        println!("skill   {skill}");
    }
    for (k, v) in &row.meta {
        let v = v.as_str().map_or_else(|| v.to_string(), str::to_string);
        println!("{k:<7} {v}");
    }
    println!("input   {}", row.input);
    println!("target  {}", row.target);
    let (tree, diag) = parse(&row.target, &Schema::empty(Task::Ner));
    println!("tree");
    for line in tree.render_tree().lines() {
        println!("  {line}");
    }
    if !diag.is_clean() {
        println!("parse   {diag:?}");
    }
    Ok(())
}

fn convert(args: ConvertArgs) -> Result<()> {
    let (instances, report) = io::convert_conll_bio(&args.input, &args.prefix)?;
    io::write_canonical(&instances, &args.out)?;
    eprintln!(
        "{} sentences, {} tokens, {} entities ({} dangling I- tags started new entities)",
        report.sentences, report.tokens, report.entities, report.repaired_dangling
    );
    Ok(())
}

fn sample(args: SampleArgs) -> Result<()> {
    let instances = io::read_canonical(&args.input)?;
    let kept = io::sample_low_resource(&instances, args.ratio, args.seed)?;
    io::write_canonical(&kept, &args.out)?;
    eprintln!("kept {} of {}", kept.len(), instances.len());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compile(a) => compile(a),
        Command::Score(a) => score(a),
        Command::Inspect(a) => inspect(a),
        Command::Convert(a) => convert(a),
        Command::Sample(a) => sample(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
