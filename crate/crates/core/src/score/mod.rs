//! Offset-grounded micro-F1 evaluation.
//!
//! Predictions are parsed, grounded to offsets, and reduced to per-metric tuple
//! sets. Exact-duplicate tuples collapse; counts are summed over the corpus.

mod ground;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

pub use ground::{ground, GroundedPrediction, GroundingDiagnostics, Loc, UNKNOWN_TYPE};

use crate::error::ScoreError;
use crate::io::PredictionRecord;
use crate::model::{CanonicalInstance, Schema, Task, NULL_TEXT};
use crate::par::Execution;
use crate::sel::{normalize_text, parse};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Entity,
    RelationStrict,
    Trigger,
    Argument,
    SentimentTriplet,
    SentimentQuad,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Entity,
        Metric::RelationStrict,
        Metric::Trigger,
        Metric::Argument,
        Metric::SentimentTriplet,
        Metric::SentimentQuad,
    ];

    pub fn for_task(task: Task) -> &'static [Metric] {
        match task {
            Task::Ner => &[Metric::Entity],
            Task::Re => &[Metric::Entity, Metric::RelationStrict],
            Task::Ee => &[Metric::Trigger, Metric::Argument],
            Task::Aste => &[Metric::SentimentTriplet],
            Task::Asqp => &[Metric::SentimentQuad],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Entity => "entity",
            Metric::RelationStrict => "relation_strict",
            Metric::Trigger => "trigger",
            Metric::Argument => "argument",
            Metric::SentimentTriplet => "sentiment_triplet",
            Metric::SentimentQuad => "sentiment_quad",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A scoring tuple; its variant determines the metric it counts toward and
/// its fields are the match key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Tuple {
    Entity {
        span: Loc,
        category: String,
    },
    Relation {
        head: Loc,
        head_category: String,
        relation: String,
        tail: Loc,
        tail_category: String,
    },
    Trigger {
        span: Loc,
        event_type: String,
    },
    Argument {
        event_type: String,
        role: String,
        span: Loc,
    },
    Triplet {
        aspect: Loc,
        opinion: Loc,
        polarity: String,
    },
    /// String-level; `None` marks a missing slot and never matches.
    Quad {
        category: String,
        aspect: Option<String>,
        opinion: Option<String>,
        polarity: Option<String>,
    },
}

impl Tuple {
    pub fn metric(&self) -> Metric {
        match self {
            Tuple::Entity { .. } => Metric::Entity,
            Tuple::Relation { .. } => Metric::RelationStrict,
            Tuple::Trigger { .. } => Metric::Trigger,
            Tuple::Argument { .. } => Metric::Argument,
            Tuple::Triplet { .. } => Metric::SentimentTriplet,
            Tuple::Quad { .. } => Metric::SentimentQuad,
        }
    }
}

fn label(s: &str) -> String {
    normalize_text(s).into_owned()
}

fn at(span: &crate::model::Span) -> Loc {
    Loc::At(span.start, span.end)
}

/// Gold tuples of an instance for every metric of its task.
pub fn gold_tuples(inst: &CanonicalInstance) -> Vec<Tuple> {
    let mut out = Vec::new();
    match inst.task {
        Task::Ner | Task::Re => {
            out.extend(inst.entities.iter().map(|e| Tuple::Entity {
                span: at(&e.span),
                category: label(&e.category),
            }));
            out.extend(inst.relations.iter().filter_map(|r| {
                let head = inst.entities.get(r.head)?;
                let tail = inst.entities.get(r.tail)?;
                Some(Tuple::Relation {
                    head: at(&head.span),
                    head_category: label(&head.category),
                    relation: label(&r.relation),
                    tail: at(&tail.span),
                    tail_category: label(&tail.category),
                })
            }));
        }
        Task::Ee => {
            for ev in &inst.events {
                let event_type = label(&ev.trigger.category);
                out.push(Tuple::Trigger {
                    span: at(&ev.trigger.span),
                    event_type: event_type.clone(),
                });
                out.extend(ev.arguments.iter().map(|a| Tuple::Argument {
                    event_type: event_type.clone(),
                    role: label(&a.role),
                    span: at(&a.span),
                }));
            }
        }
        Task::Aste => out.extend(inst.sentiments.iter().filter_map(|s| {
            Some(Tuple::Triplet {
                aspect: at(s.aspect.as_ref()?),
                opinion: at(s.opinion.as_ref()?),
                polarity: s.polarity.as_str().to_string(),
            })
        })),
        Task::Asqp => {
            let text = |t: &Option<crate::model::Span>| {
                Some(t.as_ref().map_or(NULL_TEXT.to_string(), |s| label(&s.text)))
            };
            out.extend(inst.sentiments.iter().map(|s| Tuple::Quad {
                category: label(s.category.as_deref().unwrap_or(NULL_TEXT)),
                aspect: text(&s.aspect),
                opinion: text(&s.opinion),
                polarity: Some(s.polarity.as_str().to_string()),
            }));
        }
    }
    out
}

/// True positives and set sizes for one metric.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub tp: usize,
    pub n_pred: usize,
    pub n_gold: usize,
}

impl std::ops::Add for Counts {
    type Output = Counts;

    fn add(self, other: Counts) -> Counts {
        Counts {
            tp: self.tp + other.tp,
            n_pred: self.n_pred + other.n_pred,
            n_gold: self.n_gold + other.n_gold,
        }
    }
}

impl Counts {
    /// Set-semantics counts of one metric between two tuple lists.
    pub fn between(gold: &[Tuple], pred: &[Tuple], metric: Metric) -> Counts {
        let g: BTreeSet<&Tuple> = gold.iter().filter(|t| t.metric() == metric).collect();
        let p: BTreeSet<&Tuple> = pred.iter().filter(|t| t.metric() == metric).collect();
        Counts {
            tp: g.intersection(&p).count(),
            n_pred: p.len(),
            n_gold: g.len(),
        }
    }

    fn vacuous(&self) -> bool {
        self.n_pred == 0 && self.n_gold == 0
    }

    pub fn precision(&self) -> f64 {
        if self.vacuous() {
            1.0
        } else if self.n_pred == 0 {
            0.0
        } else {
            self.tp as f64 / self.n_pred as f64
        }
    }

    pub fn recall(&self) -> f64 {
        if self.vacuous() {
            1.0
        } else if self.n_gold == 0 {
            0.0
        } else {
            self.tp as f64 / self.n_gold as f64
        }
    }

    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricScore {
    pub metric: Metric,
    pub tp: usize,
    pub n_pred: usize,
    pub n_gold: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl MetricScore {
    pub fn new(metric: Metric, c: Counts) -> Self {
        MetricScore {
            metric,
            tp: c.tp,
            n_pred: c.n_pred,
            n_gold: c.n_gold,
            precision: c.precision(),
            recall: c.recall(),
            f1: c.f1(),
        }
    }
}

/// Parse and grounding totals over the corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ScoreDiagnostics {
    pub instances: usize,
    pub predictions: usize,
    pub missing_predictions: usize,
    pub recovered_parses: usize,
    pub dropped_fragments: usize,
    pub auto_closed_parens: usize,
    pub mentions: usize,
    pub ungrounded_mentions: usize,
    pub malformed_nodes: usize,
    pub unknown_labels: usize,
}

impl ScoreDiagnostics {
    fn add(mut self, o: &ScoreDiagnostics) -> Self {
        self.instances += o.instances;
        self.predictions += o.predictions;
        self.missing_predictions += o.missing_predictions;
        self.recovered_parses += o.recovered_parses;
        self.dropped_fragments += o.dropped_fragments;
        self.auto_closed_parens += o.auto_closed_parens;
        self.mentions += o.mentions;
        self.ungrounded_mentions += o.ungrounded_mentions;
        self.malformed_nodes += o.malformed_nodes;
        self.unknown_labels += o.unknown_labels;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreReport {
    pub task: Task,
    pub metrics: Vec<MetricScore>,
    pub diagnostics: ScoreDiagnostics,
}

impl ScoreReport {
    pub fn metric(&self, metric: Metric) -> Option<&MetricScore> {
        self.metrics.iter().find(|m| m.metric == metric)
    }

    /// Fixed-width table of the metrics followed by the diagnostics.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<18} {:>7} {:>7} {:>7} {:>9} {:>9} {:>9}\n",
            "metric", "tp", "pred", "gold", "precision", "recall", "f1"
        );
        for m in &self.metrics {
            out += &format!(
                "{:<18} {:>7} {:>7} {:>7} {:>9.4} {:>9.4} {:>9.4}\n",
                m.metric.name(),
                m.tp,
                m.n_pred,
                m.n_gold,
                m.precision,
                m.recall,
                m.f1
            );
        }
        let d = &self.diagnostics;
        out += &format!(
            "\ninstances {}  predictions {}  missing {}\n\
             recovered parses {}  dropped fragments {}  auto-closed parens {}\n\
             mentions {}  ungrounded {}  malformed nodes {}  unknown labels {}\n",
            d.instances,
            d.predictions,
            d.missing_predictions,
            d.recovered_parses,
            d.dropped_fragments,
            d.auto_closed_parens,
            d.mentions,
            d.ungrounded_mentions,
            d.malformed_nodes,
            d.unknown_labels
        );
        out
    }
}

/// Scores raw model outputs against gold instances. Gold instances without a
/// prediction are scored as empty output; a prediction whose id matches no gold
/// instance is an error.
pub fn score(
    gold: &[CanonicalInstance],
    preds: &[PredictionRecord],
    task: Task,
    schema: &Schema,
) -> Result<ScoreReport, ScoreError> {
    score_with(gold, preds, task, schema, Execution::default())
}

pub fn score_with(
    gold: &[CanonicalInstance],
    preds: &[PredictionRecord],
    task: Task,
    schema: &Schema,
    exec: Execution,
) -> Result<ScoreReport, ScoreError> {
    let mut by_id: HashMap<&str, &str> = HashMap::with_capacity(preds.len());
    for p in preds {
        if by_id.insert(p.id.as_str(), p.output.as_str()).is_some() {
            return Err(ScoreError::DuplicateId(p.id.clone()));
        }
    }
    let gold_ids: std::collections::HashSet<&str> = gold.iter().map(|g| g.id.as_str()).collect();
    let mut unknown: Vec<String> = preds
        .iter()
        .filter(|p| !gold_ids.contains(p.id.as_str()))
        .map(|p| p.id.clone())
        .collect();
    if !unknown.is_empty() {
        unknown.sort();
        return Err(ScoreError::UnknownIds(unknown));
    }

    let metrics = Metric::for_task(task);
    let per_instance = exec.map(gold, |_, inst| {
        let output = by_id.get(inst.id.as_str()).copied();
        let (parsed, pdiag) = parse(output.unwrap_or(""), schema);
        let grounded = ground(&parsed, &inst.text, schema, task);
        let gold_t = gold_tuples(inst);
        let counts: Vec<Counts> = metrics
            .iter()
            .map(|&m| Counts::between(&gold_t, &grounded.records, m))
            .collect();
        let g = &grounded.diagnostics;
        let diag = ScoreDiagnostics {
            instances: 1,
            predictions: usize::from(output.is_some()),
            missing_predictions: usize::from(output.is_none()),
            recovered_parses: usize::from(output.is_some() && pdiag.recovered),
            dropped_fragments: pdiag.dropped_fragments,
            auto_closed_parens: pdiag.auto_closed_parens,
            mentions: g.mentions,
            ungrounded_mentions: g.ungrounded,
            malformed_nodes: g.malformed_nodes,
            unknown_labels: g.unknown_labels,
        };
        (counts, diag)
    });

    let mut totals = vec![Counts::default(); metrics.len()];
    let mut diagnostics = ScoreDiagnostics::default();
    for (counts, diag) in &per_instance {
        for (t, c) in totals.iter_mut().zip(counts) {
            *t = *t + *c;
        }
        diagnostics = diagnostics.add(diag);
    }
    Ok(ScoreReport {
        task,
        metrics: metrics
            .iter()
            .zip(totals)
            .map(|(&m, c)| MetricScore::new(m, c))
            .collect(),
        diagnostics,
    })
}
