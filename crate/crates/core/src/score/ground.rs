//! Mapping generated surface strings back to character offsets.
//!
//! Each predicted mention is matched against exact, case-sensitive occurrences
//! of its text. Predictions sharing the same (text, label) take occurrences
//! left to right; a mention with no occurrence left is ungrounded and can never
//! match gold. Event arguments are consumed per event, since several events may
//! legitimately share one argument span. Relation tails resolve through the
//! prediction's own entity nodes, which also supplies the tail type.

use std::collections::HashMap;

use serde::Serialize;

use super::Tuple;
use crate::model::{CharIndex, Schema, Task, ASPECT, OPINION, POLARITY};
use crate::sel::{SelNode, SelStructure};

/// Tail type used when a relation tail matches none of the predicted entities.
pub const UNKNOWN_TYPE: &str = "unknown";

/// Where a predicted mention landed in the source text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Loc {
    At(usize, usize),
    /// No occurrence was available; carries the predicted text.
    Ungrounded(String),
}

impl Loc {
    pub fn is_grounded(&self) -> bool {
        matches!(self, Loc::At(..))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GroundingDiagnostics {
    pub mentions: usize,
    pub ungrounded: usize,
    /// Nodes ignored because they do not fit the task's target shape.
    pub malformed_nodes: usize,
    /// Node labels absent from the schema (still scored; they cannot match gold).
    pub unknown_labels: usize,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundedPrediction {
    pub records: Vec<Tuple>,
    pub diagnostics: GroundingDiagnostics,
}

struct Occurrences<'a> {
    text: &'a str,
    index: CharIndex<'a>,
    cache: HashMap<String, Vec<(usize, usize)>>,
}

impl<'a> Occurrences<'a> {
    fn new(text: &'a str) -> Self {
        Occurrences {
            text,
            index: CharIndex::new(text),
            cache: HashMap::new(),
        }
    }

    /// All (possibly overlapping) occurrences of `needle`, in char offsets.
    fn of(&mut self, needle: &str) -> &[(usize, usize)] {
        if !self.cache.contains_key(needle) {
            let mut found = Vec::new();
            if !needle.is_empty() {
                let width = needle.chars().count();
                let mut from = 0;
                while let Some(rel) = self.text[from..].find(needle) {
                    let byte = from + rel;
                    let start = self.index.char_at_byte(byte);
                    found.push((start, start + width));
                    from = byte + self.text[byte..].chars().next().map_or(1, char::len_utf8);
                }
            }
            self.cache.insert(needle.to_string(), found);
        }
        &self.cache[needle]
    }

    fn first(&mut self, needle: &str) -> Loc {
        match self.of(needle).first() {
            Some(&(s, e)) => Loc::At(s, e),
            None => Loc::Ungrounded(needle.to_string()),
        }
    }
}

#[derive(Default)]
struct Consumed(HashMap<(String, String), usize>);

impl Consumed {
    fn take(&mut self, occ: &mut Occurrences<'_>, text: &str, label: &str) -> Loc {
        let used = self.0.entry((text.to_string(), label.to_string())).or_insert(0);
        let loc = match occ.of(text).get(*used) {
            Some(&(s, e)) => Loc::At(s, e),
            None => Loc::Ungrounded(text.to_string()),
        };
        *used += 1;
        loc
    }
}

struct Grounder<'a, 's> {
    occ: Occurrences<'a>,
    known: std::collections::BTreeSet<&'s str>,
    diag: GroundingDiagnostics,
}

impl Grounder<'_, '_> {
    fn tally(&mut self, loc: &Loc) {
        self.diag.mentions += 1;
        if !loc.is_grounded() {
            self.diag.ungrounded += 1;
            if self.diag.notes.len() < 32 {
                if let Loc::Ungrounded(t) = loc {
                    self.diag.notes.push(format!("{t:?} does not occur in the text"));
                }
            }
        }
    }

    fn check_label(&mut self, label: &str) {
        if !self.known.is_empty() && !self.known.contains(label) {
            self.diag.unknown_labels += 1;
        }
    }

    fn malformed(&mut self, node: &SelNode, why: &str) {
        self.diag.malformed_nodes += 1;
        if self.diag.notes.len() < 32 {
            self.diag.notes.push(format!("ignored node {:?}: {why}", node.label));
        }
    }
}

/// Grounds a parsed prediction against its source text.
pub fn ground(parsed: &SelStructure, text: &str, schema: &Schema, task: Task) -> GroundedPrediction {
    let mut g = Grounder {
        occ: Occurrences::new(text),
        known: schema.known_labels(),
        diag: GroundingDiagnostics::default(),
    };
    let mut records = Vec::new();
    let mut consumed = Consumed::default();

    match task {
        Task::Ner => {
            for node in &parsed.roots {
                let Some(value) = &node.value else {
                    g.malformed(node, "entity without text");
                    continue;
                };
                g.check_label(&node.label);
                let span = consumed.take(&mut g.occ, value, &node.label);
                g.tally(&span);
                records.push(Tuple::Entity {
                    span,
                    category: node.label.clone(),
                });
            }
        }
        Task::Re | Task::Aste => {
            // entity (or aspect/opinion term) nodes first, so tails can resolve
            let mut entities: Vec<Option<(Loc, &str)>> = Vec::with_capacity(parsed.roots.len());
            for node in &parsed.roots {
                let Some(value) = &node.value else {
                    g.malformed(node, "entity without text");
                    entities.push(None);
                    continue;
                };
                g.check_label(&node.label);
                let span = consumed.take(&mut g.occ, value, &node.label);
                g.tally(&span);
                if task == Task::Re {
                    records.push(Tuple::Entity {
                        span: span.clone(),
                        category: node.label.clone(),
                    });
                }
                entities.push(Some((span, &node.label)));
            }
            for (node, grounded) in parsed.roots.iter().zip(&entities) {
                let Some((head, head_category)) = grounded else { continue };
                for child in &node.children {
                    let Some(tail_text) = &child.value else {
                        g.malformed(child, "relation without tail");
                        continue;
                    };
                    g.check_label(&child.label);
                    let resolved = parsed
                        .roots
                        .iter()
                        .zip(&entities)
                        .filter(|(n, _)| task == Task::Re || n.label != ASPECT)
                        .find_map(|(n, e)| (n.value.as_ref() == Some(tail_text)).then_some(e.as_ref()).flatten());
                    let (tail, tail_category) = match resolved {
                        Some((loc, cat)) => (loc.clone(), cat.to_string()),
                        None => {
                            let loc = g.occ.first(tail_text);
                            g.tally(&loc);
                            (loc, UNKNOWN_TYPE.to_string())
                        }
                    };
                    records.push(if task == Task::Re {
                        Tuple::Relation {
                            head: head.clone(),
                            head_category: head_category.to_string(),
                            relation: child.label.clone(),
                            tail,
                            tail_category,
                        }
                    } else {
                        Tuple::Triplet {
                            aspect: head.clone(),
                            opinion: tail,
                            polarity: child.label.clone(),
                        }
                    });
                }
            }
        }
        Task::Ee => {
            for node in &parsed.roots {
                let Some(trigger) = &node.value else {
                    g.malformed(node, "event without trigger");
                    continue;
                };
                g.check_label(&node.label);
                let span = consumed.take(&mut g.occ, trigger, &node.label);
                g.tally(&span);
                records.push(Tuple::Trigger {
                    span,
                    event_type: node.label.clone(),
                });
                let mut event_consumed = Consumed::default();
                for child in &node.children {
                    let Some(arg) = &child.value else {
                        g.malformed(child, "argument without text");
                        continue;
                    };
                    g.check_label(&child.label);
                    let span = event_consumed.take(&mut g.occ, arg, &child.label);
                    g.tally(&span);
                    records.push(Tuple::Argument {
                        event_type: node.label.clone(),
                        role: child.label.clone(),
                        span,
                    });
                }
            }
        }
        Task::Asqp => {
            for node in &parsed.roots {
                let Some(category) = &node.value else {
                    g.malformed(node, "quad without category");
                    continue;
                };
                if !schema.aspect_categories.is_empty() && !schema.aspect_categories.contains(category) {
                    g.diag.unknown_labels += 1;
                }
                let slot = |name: &str| {
                    node.children
                        .iter()
                        .find(|c| c.label == name)
                        .and_then(|c| c.value.clone())
                };
                records.push(Tuple::Quad {
                    category: category.clone(),
                    aspect: slot(ASPECT),
                    opinion: slot(OPINION),
                    polarity: slot(POLARITY),
                });
            }
        }
    }
    GroundedPrediction {
        records,
        diagnostics: g.diag,
    }
}
