//! Model-input prefixes: hint tokens, an optional constraint, and the schema listing,
//! followed by `[Text]` and the raw text.

use std::fmt;
use std::str::FromStr;

use crate::error::PromptError;
use crate::model::{Schema, Task, ASPECT, CATEGORY, OPINION, POLARITY};

pub const TEXT_MARKER: &str = "[Text]";

/// Tokens telling the model which elements to extract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hint {
    /// entity category
    Hec,
    /// entity span
    Hes,
    /// entity
    He,
    /// relation
    Hr,
    /// event trigger
    Ht,
    /// argument
    Ha,
    /// aspect category
    Hc,
}

impl Hint {
    pub const ALL: [Hint; 7] = [
        Hint::Hec,
        Hint::Hes,
        Hint::He,
        Hint::Hr,
        Hint::Ht,
        Hint::Ha,
        Hint::Hc,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Hint::Hec => "[HEC]",
            Hint::Hes => "[HES]",
            Hint::He => "[HE]",
            Hint::Hr => "[HR]",
            Hint::Ht => "[HT]",
            Hint::Ha => "[HA]",
            Hint::Hc => "[HC]",
        }
    }
}

/// Schema and constraint markers. Declaration order is the rendering order of
/// schema groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Marker {
    Cat,
    Ent,
    Rel,
    Tri,
    Arg,
}

impl Marker {
    pub const ALL: [Marker; 5] = [Marker::Cat, Marker::Ent, Marker::Rel, Marker::Tri, Marker::Arg];

    pub fn token(self) -> &'static str {
        match self {
            Marker::Cat => "[Cat]",
            Marker::Ent => "[Ent]",
            Marker::Rel => "[Rel]",
            Marker::Tri => "[Tri]",
            Marker::Arg => "[Arg]",
        }
    }
}

impl FromStr for Hint {
    type Err = PromptError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Hint::ALL
            .into_iter()
            .find(|h| h.token() == s)
            .ok_or_else(|| PromptError::UnknownToken(s.to_string()))
    }
}

impl FromStr for Marker {
    type Err = PromptError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Marker::ALL
            .into_iter()
            .find(|m| m.token() == s)
            .ok_or_else(|| PromptError::UnknownToken(s.to_string()))
    }
}

/// Every reserved token, for registering as atomic vocabulary items.
pub fn reserved_tokens() -> Vec<&'static str> {
    Hint::ALL
        .iter()
        .map(|h| h.token())
        .chain(Marker::ALL.iter().map(|m| m.token()))
        .chain([TEXT_MARKER])
        .collect()
}

/// Restricts the target to one entity, relation or trigger.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub marker: Marker,
    pub label: String,
    pub span: Option<String>,
}

impl Constraint {
    pub fn label(marker: Marker, label: impl Into<String>) -> Self {
        Constraint {
            marker,
            label: label.into(),
            span: None,
        }
    }

    pub fn labeled_span(marker: Marker, label: impl Into<String>, span: impl Into<String>) -> Self {
        Constraint {
            marker,
            label: label.into(),
            span: Some(span.into()),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.marker.token(), self.label)?;
        if let Some(span) = &self.span {
            write!(f, ": {span}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PromptSpec {
    pub hints: Vec<Hint>,
    pub constraint: Option<Constraint>,
    pub schema_entries: Vec<(Marker, String)>,
}

impl PromptSpec {
    pub fn new(hints: Vec<Hint>) -> Self {
        PromptSpec {
            hints,
            constraint: None,
            schema_entries: Vec::new(),
        }
    }

    pub fn with_constraint(mut self, constraint: Constraint) -> Self {
        self.constraint = Some(constraint);
        self
    }

    pub fn with_entries(mut self, entries: impl IntoIterator<Item = (Marker, String)>) -> Self {
        self.schema_entries.extend(entries);
        self
    }

    /// Builds a spec from raw token strings, rejecting anything outside the
    /// reserved vocabulary.
    pub fn from_tokens<'a>(
        hints: impl IntoIterator<Item = &'a str>,
        entries: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, PromptError> {
        let hints = hints
            .into_iter()
            .map(str::parse)
            .collect::<Result<Vec<Hint>, _>>()?;
        let entries = entries
            .into_iter()
            .map(|(m, l)| Ok((m.parse::<Marker>()?, l.to_string())))
            .collect::<Result<Vec<_>, PromptError>>()?;
        Ok(PromptSpec::new(hints).with_entries(entries))
    }
}

fn check_label(label: &str) -> Result<(), PromptError> {
    if label.trim().is_empty() || label.contains(TEXT_MARKER) {
        return Err(PromptError::BadLabel(label.to_string()));
    }
    Ok(())
}

/// Renders `hints ++ constraint ++ schema ++ [Text] ++ text`, space-joined.
///
/// Schema entries are grouped by marker (category, entity, relation, trigger,
/// argument) and sorted by label within each group, so the input order of
/// `spec.schema_entries` never affects the output.
pub fn build_prompt(spec: &PromptSpec, text: &str) -> Result<String, PromptError> {
    if spec.hints.is_empty() {
        return Err(PromptError::NoHints);
    }
    let mut parts: Vec<String> = spec.hints.iter().map(|h| h.token().to_string()).collect();
    if let Some(c) = &spec.constraint {
        check_label(&c.label)?;
        parts.push(c.to_string());
    }
    let mut entries: Vec<&(Marker, String)> = spec.schema_entries.iter().collect();
    entries.sort();
    entries.dedup();
    for (marker, label) in entries {
        check_label(label)?;
        parts.push(format!("{} {label}", marker.token()));
    }
    parts.push(TEXT_MARKER.to_string());
    parts.push(text.to_string());
    Ok(parts.join(" "))
}

/// The two hint tokens of a task: the first extracts the primary elements
/// (entities, triggers, categories), the second their links.
pub fn task_hints(task: Task) -> [Hint; 2] {
    match task {
        Task::Ner => [Hint::Hec, Hint::Hes],
        Task::Re | Task::Aste => [Hint::He, Hint::Hr],
        Task::Ee => [Hint::Ht, Hint::Ha],
        Task::Asqp => [Hint::Hc, Hint::Ha],
    }
}

fn group(marker: Marker, labels: impl IntoIterator<Item = impl Into<String>>) -> Vec<(Marker, String)> {
    labels.into_iter().map(|l| (marker, l.into())).collect()
}

/// Schema entries of the primary group (entity categories, event types, ...).
pub fn primary_entries(schema: &Schema) -> Vec<(Marker, String)> {
    match schema.task {
        Task::Ner | Task::Re => group(Marker::Ent, schema.entity_categories.iter().cloned()),
        Task::Aste => group(Marker::Ent, [ASPECT, OPINION]),
        Task::Ee => group(Marker::Tri, schema.event_types.iter().cloned()),
        Task::Asqp => group(Marker::Cat, [CATEGORY]),
    }
}

/// Schema entries of the secondary group (relations, polarities, argument roles).
pub fn secondary_entries(schema: &Schema) -> Vec<(Marker, String)> {
    match schema.task {
        Task::Ner => Vec::new(),
        Task::Re => group(Marker::Rel, schema.relations.iter().cloned()),
        Task::Aste => group(Marker::Rel, schema.polarities.iter().cloned()),
        Task::Ee => group(Marker::Arg, schema.argument_roles.iter().cloned()),
        Task::Asqp => group(Marker::Arg, [ASPECT, OPINION, POLARITY]),
    }
}

/// Prompt of the main task (also used for hard-stage instances).
pub fn main_prompt(schema: &Schema) -> PromptSpec {
    PromptSpec::new(task_hints(schema.task).to_vec())
        .with_entries(primary_entries(schema))
        .with_entries(secondary_entries(schema))
}
