//! Canonical in-memory data model shared by every task.
//!
//! Offsets are character offsets into [`CanonicalInstance::text`], end-exclusive.
//! Implicit aspect or opinion terms (ACOS-style data) are `None` in the owning
//! [`SentimentTuple`] and render as the literal [`NULL_TEXT`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Surface form used for an implicit aspect or opinion term.
pub const NULL_TEXT: &str = "null";
pub const ASPECT: &str = "aspect";
pub const OPINION: &str = "opinion";
pub const CATEGORY: &str = "category";
pub const POLARITY: &str = "polarity";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Ner,
    Re,
    Ee,
    Aste,
    Asqp,
}

impl Task {
    pub const ALL: [Task; 5] = [Task::Ner, Task::Re, Task::Ee, Task::Aste, Task::Asqp];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Ner => "ner",
            Task::Re => "re",
            Task::Ee => "ee",
            Task::Aste => "aste",
            Task::Asqp => "asqp",
        }
    }

    pub fn is_absa(self) -> bool {
        matches!(self, Task::Aste | Task::Asqp)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown task {0:?} (expected one of ner, re, ee, aste, asqp)")]
pub struct UnknownTask(pub String);

impl FromStr for Task {
    type Err = UnknownTask;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Task::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownTask(s.to_string()))
    }
}

/// A contiguous text span.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub text: String,
}

impl Span {
    pub fn new(start: usize, end: usize, text: impl Into<String>) -> Self {
        Span {
            start,
            end,
            text: text.into(),
        }
    }

    /// Builds a span from character offsets, reading the surface text out of `text`.
    pub fn from_offsets(text: &str, start: usize, end: usize) -> Option<Self> {
        let surface = CharIndex::new(text).slice(start, end)?;
        Some(Span::new(start, end, surface))
    }

    pub fn shifted(&self, by: usize) -> Self {
        Span::new(self.start + by, self.end + by, self.text.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Entity {
    #[serde(flatten)]
    pub span: Span,
    pub category: String,
}

impl Entity {
    pub fn new(span: Span, category: impl Into<String>) -> Self {
        Entity {
            span,
            category: category.into(),
        }
    }
}

/// A (head, relation, tail) triplet; head and tail index the instance's entity list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationTriple {
    pub head: usize,
    pub relation: String,
    pub tail: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Argument {
    #[serde(flatten)]
    pub span: Span,
    pub role: String,
}

/// An event: the trigger's category is the event type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Event {
    pub trigger: Entity,
    #[serde(default)]
    pub arguments: Vec<Argument>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
            Polarity::Neutral => "neutral",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An ASTE triplet (`category` absent) or ASQP quad (`category` present).
/// `None` aspect/opinion marks an implicit term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SentimentTuple {
    #[serde(default)]
    pub category: Option<String>,
    pub aspect: Option<Span>,
    pub opinion: Option<Span>,
    pub polarity: Polarity,
}

/// Label inventory of a dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    pub task: Task,
    #[serde(default)]
    pub entity_categories: BTreeSet<String>,
    #[serde(default)]
    pub relations: BTreeSet<String>,
    #[serde(default)]
    pub event_types: BTreeSet<String>,
    #[serde(default)]
    pub argument_roles: BTreeSet<String>,
    #[serde(default)]
    pub aspect_categories: BTreeSet<String>,
    #[serde(default)]
    pub polarities: BTreeSet<String>,
}

impl Schema {
    pub fn empty(task: Task) -> Self {
        Schema {
            task,
            entity_categories: BTreeSet::new(),
            relations: BTreeSet::new(),
            event_types: BTreeSet::new(),
            argument_roles: BTreeSet::new(),
            aspect_categories: BTreeSet::new(),
            polarities: BTreeSet::new(),
        }
    }

    fn sets(&self) -> [(&'static str, &BTreeSet<String>); 6] {
        [
            ("entity_categories", &self.entity_categories),
            ("relations", &self.relations),
            ("event_types", &self.event_types),
            ("argument_roles", &self.argument_roles),
            ("aspect_categories", &self.aspect_categories),
            ("polarities", &self.polarities),
        ]
    }

    fn relevant_sets(task: Task) -> &'static [&'static str] {
        match task {
            Task::Ner => &["entity_categories"],
            Task::Re => &["entity_categories", "relations"],
            Task::Ee => &["event_types", "argument_roles"],
            Task::Aste => &["polarities"],
            Task::Asqp => &["aspect_categories", "polarities"],
        }
    }

    /// Problems with the schema itself: relevant sets must be non-empty, the rest empty.
    pub fn problems(&self) -> Vec<String> {
        let relevant = Self::relevant_sets(self.task);
        let mut out = Vec::new();
        for (name, set) in self.sets() {
            let wanted = relevant.contains(&name);
            if wanted && set.is_empty() {
                out.push(format!("{name} must be non-empty for task {}", self.task));
            } else if !wanted && !set.is_empty() {
                out.push(format!("{name} must be empty for task {}", self.task));
            }
            if let Some(bad) = set.iter().find(|l| l.trim().is_empty()) {
                out.push(format!("{name} contains a blank label {bad:?}"));
            }
            if let Some(bad) = set.iter().find(|l| l.contains(": ")) {
                out.push(format!("{name} label {bad:?} contains \": \""));
            }
        }
        out
    }

    /// Every label that may head a SEL node for this schema, including the fixed
    /// ABSA slot names.
    pub fn known_labels(&self) -> BTreeSet<&str> {
        let mut out: BTreeSet<&str> = self
            .sets()
            .into_iter()
            .flat_map(|(_, s)| s.iter().map(String::as_str))
            .collect();
        match self.task {
            Task::Aste => out.extend([ASPECT, OPINION]),
            Task::Asqp => out.extend([CATEGORY, ASPECT, OPINION, POLARITY]),
            _ => {}
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalInstance {
    pub id: String,
    pub task: Task,
    pub text: String,
    #[serde(default)]
    pub entities: Vec<Entity>,
    #[serde(default)]
    pub relations: Vec<RelationTriple>,
    #[serde(default)]
    pub events: Vec<Event>,
    #[serde(default)]
    pub sentiments: Vec<SentimentTuple>,
}

impl CanonicalInstance {
    pub fn new(id: impl Into<String>, task: Task, text: impl Into<String>) -> Self {
        CanonicalInstance {
            id: id.into(),
            task,
            text: text.into(),
            entities: Vec::new(),
            relations: Vec::new(),
            events: Vec::new(),
            sentiments: Vec::new(),
        }
    }

    /// Length of the text in characters.
    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }
}

/// True iff every annotation list relevant to the instance's task is empty.
///
/// For RE the entity list counts: an instance with entities but no relations
/// still has a non-empty main target.
pub fn is_empty_target(inst: &CanonicalInstance) -> bool {
    match inst.task {
        Task::Ner => inst.entities.is_empty(),
        Task::Re => inst.entities.is_empty() && inst.relations.is_empty(),
        Task::Ee => inst.events.is_empty(),
        Task::Aste | Task::Asqp => inst.sentiments.is_empty(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    DegenerateSpan { start: usize, end: usize },
    OutOfBounds { start: usize, end: usize, len: usize },
    TextMismatch { annotated: String, actual: String },
    EmptyLabel,
    UnknownLabel { set: &'static str, label: String },
    DanglingEntity { index: usize },
    IrrelevantAnnotations { field: &'static str },
    TaskMismatch { schema: Task, instance: Task },
    ImplicitSpanNotAllowed,
    CategoryPresence { expected: bool },
}

/// A single broken invariant, located by a JSON-path-like string such as `entities[2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub location: String,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.location)?;
        match &self.kind {
            ViolationKind::DegenerateSpan { start, end } => {
                write!(f, "degenerate span [{start}, {end})")
            }
            ViolationKind::OutOfBounds { start, end, len } => {
                write!(f, "span [{start}, {end}) exceeds text length {len}")
            }
            ViolationKind::TextMismatch { annotated, actual } => {
                write!(f, "span text {annotated:?} does not match text {actual:?}")
            }
            ViolationKind::EmptyLabel => f.write_str("empty label"),
            ViolationKind::UnknownLabel { set, label } => {
                write!(f, "label {label:?} is not in schema {set}")
            }
            ViolationKind::DanglingEntity { index } => {
                write!(f, "entity index {index} does not exist")
            }
            ViolationKind::IrrelevantAnnotations { field } => {
                write!(f, "{field} must be empty for this task")
            }
            ViolationKind::TaskMismatch { schema, instance } => {
                write!(f, "instance task {instance} does not match schema task {schema}")
            }
            ViolationKind::ImplicitSpanNotAllowed => {
                f.write_str("implicit span is only allowed for asqp")
            }
            ViolationKind::CategoryPresence { expected: true } => {
                f.write_str("asqp tuple needs an aspect category")
            }
            ViolationKind::CategoryPresence { expected: false } => {
                f.write_str("aste triplet must not carry an aspect category")
            }
        }
    }
}

/// Character-offset view over a string.
pub(crate) struct CharIndex<'a> {
    text: &'a str,
    // byte offset of every char boundary, including the final one
    bounds: Vec<usize>,
}

impl<'a> CharIndex<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        let mut bounds: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
        bounds.push(text.len());
        CharIndex { text, bounds }
    }

    pub(crate) fn char_len(&self) -> usize {
        self.bounds.len() - 1
    }

    pub(crate) fn slice(&self, start: usize, end: usize) -> Option<&'a str> {
        if start > end || end > self.char_len() {
            return None;
        }
        Some(&self.text[self.bounds[start]..self.bounds[end]])
    }

    /// Char offset of a byte offset that lies on a char boundary.
    pub(crate) fn char_at_byte(&self, byte: usize) -> usize {
        self.bounds
            .binary_search(&byte)
            .expect("byte offset on a char boundary")
    }
}

fn check_span(index: &CharIndex<'_>, span: &Span, location: String, out: &mut Vec<Violation>) {
    let len = index.char_len();
    let kind = if span.start >= span.end {
        ViolationKind::DegenerateSpan {
            start: span.start,
            end: span.end,
        }
    } else if span.end > len {
        ViolationKind::OutOfBounds {
            start: span.start,
            end: span.end,
            len,
        }
    } else {
        let actual = index.slice(span.start, span.end).unwrap_or_default();
        if actual == span.text {
            return;
        }
        ViolationKind::TextMismatch {
            annotated: span.text.clone(),
            actual: actual.to_string(),
        }
    };
    out.push(Violation { location, kind });
}

/// Checks span invariants and structural shape, without reference to a schema.
pub fn validate_structure(inst: &CanonicalInstance) -> Vec<Violation> {
    let index = CharIndex::new(&inst.text);
    let mut out = Vec::new();
    let push = |out: &mut Vec<Violation>, location: String, kind| {
        out.push(Violation { location, kind })
    };

    let relevant: &[&str] = match inst.task {
        Task::Ner => &["entities"],
        Task::Re => &["entities", "relations"],
        Task::Ee => &["events"],
        Task::Aste | Task::Asqp => &["sentiments"],
    };
    let lists = [
        ("entities", inst.entities.is_empty()),
        ("relations", inst.relations.is_empty()),
        ("events", inst.events.is_empty()),
        ("sentiments", inst.sentiments.is_empty()),
    ];
    for (field, empty) in lists {
        if !empty && !relevant.contains(&field) {
            push(
                &mut out,
                field.to_string(),
                ViolationKind::IrrelevantAnnotations { field },
            );
        }
    }

    for (i, e) in inst.entities.iter().enumerate() {
        check_span(&index, &e.span, format!("entities[{i}]"), &mut out);
        if e.category.is_empty() {
            push(&mut out, format!("entities[{i}].category"), ViolationKind::EmptyLabel);
        }
    }
    for (i, r) in inst.relations.iter().enumerate() {
        for index in [r.head, r.tail] {
            if index >= inst.entities.len() {
                push(
                    &mut out,
                    format!("relations[{i}]"),
                    ViolationKind::DanglingEntity { index },
                );
            }
        }
        if r.relation.is_empty() {
            push(&mut out, format!("relations[{i}].relation"), ViolationKind::EmptyLabel);
        }
    }
    for (i, ev) in inst.events.iter().enumerate() {
        check_span(&index, &ev.trigger.span, format!("events[{i}].trigger"), &mut out);
        if ev.trigger.category.is_empty() {
            push(&mut out, format!("events[{i}].trigger.category"), ViolationKind::EmptyLabel);
        }
        for (j, arg) in ev.arguments.iter().enumerate() {
            check_span(&index, &arg.span, format!("events[{i}].arguments[{j}]"), &mut out);
            if arg.role.is_empty() {
                push(
                    &mut out,
                    format!("events[{i}].arguments[{j}].role"),
                    ViolationKind::EmptyLabel,
                );
            }
        }
    }
    for (i, s) in inst.sentiments.iter().enumerate() {
        let quad = inst.task == Task::Asqp;
        if s.category.is_some() != quad {
            push(
                &mut out,
                format!("sentiments[{i}].category"),
                ViolationKind::CategoryPresence { expected: quad },
            );
        }
        if s.category.as_deref() == Some("") {
            push(&mut out, format!("sentiments[{i}].category"), ViolationKind::EmptyLabel);
        }
        for (name, term) in [("aspect", &s.aspect), ("opinion", &s.opinion)] {
            match term {
                Some(span) => check_span(&index, span, format!("sentiments[{i}].{name}"), &mut out),
                None if !quad => push(
                    &mut out,
                    format!("sentiments[{i}].{name}"),
                    ViolationKind::ImplicitSpanNotAllowed,
                ),
                None => {}
            }
        }
    }
    out
}

/// Full validation: structural checks plus schema membership of every label.
/// An empty result means the instance is well-formed.
pub fn validate_instance(inst: &CanonicalInstance, schema: &Schema) -> Vec<Violation> {
    let mut out = validate_structure(inst);
    if schema.task != inst.task {
        out.push(Violation {
            location: "task".to_string(),
            kind: ViolationKind::TaskMismatch {
                schema: schema.task,
                instance: inst.task,
            },
        });
    }
    let mut member = |set: &'static str, labels: &BTreeSet<String>, label: &str, location: String| {
        if !label.is_empty() && !labels.contains(label) {
            out.push(Violation {
                location,
                kind: ViolationKind::UnknownLabel {
                    set,
                    label: label.to_string(),
                },
            });
        }
    };

    for (i, e) in inst.entities.iter().enumerate() {
        member(
            "entity_categories",
            &schema.entity_categories,
            &e.category,
            format!("entities[{i}].category"),
        );
    }
    for (i, r) in inst.relations.iter().enumerate() {
        member(
            "relations",
            &schema.relations,
            &r.relation,
            format!("relations[{i}].relation"),
        );
    }
    for (i, ev) in inst.events.iter().enumerate() {
        member(
            "event_types",
            &schema.event_types,
            &ev.trigger.category,
            format!("events[{i}].trigger.category"),
        );
        for (j, arg) in ev.arguments.iter().enumerate() {
            member(
                "argument_roles",
                &schema.argument_roles,
                &arg.role,
                format!("events[{i}].arguments[{j}].role"),
            );
        }
    }
    for (i, s) in inst.sentiments.iter().enumerate() {
        if let Some(cat) = &s.category {
            member(
                "aspect_categories",
                &schema.aspect_categories,
                cat,
                format!("sentiments[{i}].category"),
            );
        }
        member(
            "polarities",
            &schema.polarities,
            s.polarity.as_str(),
            format!("sentiments[{i}].polarity"),
        );
    }
    out
}
