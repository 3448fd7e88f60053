//! Canonical annotations → SEL target structure.

use std::borrow::Cow;

use super::{SelNode, SelStructure};
use crate::model::{CanonicalInstance, Span, Task, ASPECT, CATEGORY, NULL_TEXT, OPINION, POLARITY};

/// Makes arbitrary text safe as a SEL label or value: parentheses are deleted,
/// whitespace runs collapse to one space, and the ends are trimmed.
pub fn normalize_text(text: &str) -> Cow<'_, str> {
    let clean = !text.contains(['(', ')'])
        && !text.starts_with(char::is_whitespace)
        && !text.ends_with(char::is_whitespace)
        && !text
            .chars()
            .zip(text.chars().skip(1))
            .any(|(a, b)| a.is_whitespace() && (b.is_whitespace() || a != ' '));
    if clean {
        return Cow::Borrowed(text);
    }
    let stripped: String = text.chars().filter(|c| !matches!(c, '(' | ')')).collect();
    Cow::Owned(stripped.split_whitespace().collect::<Vec<_>>().join(" "))
}

fn valued(label: &str, value: &str) -> SelNode {
    let label = normalize_text(label);
    let value = normalize_text(value);
    SelNode {
        label: label.into_owned(),
        value: (!value.is_empty()).then(|| value.into_owned()),
        children: Vec::new(),
    }
}

fn term_text(term: &Option<Span>) -> &str {
    term.as_ref().map_or(NULL_TEXT, |s| s.text.as_str())
}

fn span_key(s: &Span) -> (usize, usize) {
    (s.start, s.end)
}

/// Linearizes an instance's gold annotations into its main-task target.
///
/// Roots follow text order (ASQP quads keep annotation order, since implicit
/// terms have no position). Relation children hang under their head entity,
/// ordered by tail position; event arguments are ordered by position.
pub fn structure_of(inst: &CanonicalInstance) -> SelStructure {
    let roots = match inst.task {
        Task::Ner => {
            let mut ents: Vec<_> = inst.entities.iter().collect();
            ents.sort_by(|a, b| {
                (span_key(&a.span), &a.category).cmp(&(span_key(&b.span), &b.category))
            });
            ents.into_iter()
                .map(|e| valued(&e.category, &e.span.text))
                .collect()
        }
        Task::Re => {
            let mut nodes: Vec<_> = inst
                .entities
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let mut rels: Vec<_> = inst
                        .relations
                        .iter()
                        .filter(|r| r.head == i && r.tail < inst.entities.len())
                        .collect();
                    rels.sort_by_key(|r| {
                        let t = &inst.entities[r.tail];
                        (span_key(&t.span), r.relation.as_str(), t.category.as_str())
                    });
                    let children = rels
                        .into_iter()
                        .map(|r| valued(&r.relation, &inst.entities[r.tail].span.text))
                        .collect();
                    (span_key(&e.span), valued(&e.category, &e.span.text).with_children(children))
                })
                .collect();
            // duplicate entities tie-break on their relations, not their index
            nodes.sort();
            nodes.into_iter().map(|(_, n)| n).collect()
        }
        Task::Aste => {
            // aspect and opinion terms are the entities, polarities the relations
            let mut terms: Vec<(&Span, &str)> = Vec::new();
            for s in &inst.sentiments {
                for (term, label) in [(&s.aspect, ASPECT), (&s.opinion, OPINION)] {
                    if let Some(span) = term {
                        if !terms.iter().any(|(t, l)| *t == span && *l == label) {
                            terms.push((span, label));
                        }
                    }
                }
            }
            terms.sort_by_key(|(s, l)| (span_key(s), *l));
            terms
                .into_iter()
                .map(|(span, label)| {
                    let mut triplets: Vec<_> = if label == ASPECT {
                        inst.sentiments
                            .iter()
                            .filter(|s| s.aspect.as_ref() == Some(span) && s.opinion.is_some())
                            .collect()
                    } else {
                        Vec::new()
                    };
                    triplets.sort_by_key(|s| {
                        (s.opinion.as_ref().map(span_key), s.polarity.as_str())
                    });
                    let children = triplets
                        .into_iter()
                        .map(|s| valued(s.polarity.as_str(), term_text(&s.opinion)))
                        .collect();
                    valued(label, &span.text).with_children(children)
                })
                .collect()
        }
        Task::Ee => {
            let mut events: Vec<_> = inst
                .events
                .iter()
                .map(|ev| {
                    let mut args: Vec<_> = ev.arguments.iter().collect();
                    args.sort_by(|a, b| (span_key(&a.span), &a.role).cmp(&(span_key(&b.span), &b.role)));
                    let children = args.into_iter().map(|a| valued(&a.role, &a.span.text)).collect();
                    let node = valued(&ev.trigger.category, &ev.trigger.span.text).with_children(children);
                    (span_key(&ev.trigger.span), node)
                })
                .collect();
            events.sort();
            events.into_iter().map(|(_, n)| n).collect()
        }
        Task::Asqp => inst
            .sentiments
            .iter()
            .map(|s| {
                let category = s.category.as_deref().unwrap_or(NULL_TEXT);
                valued(CATEGORY, category).with_children(vec![
                    valued(ASPECT, term_text(&s.aspect)),
                    valued(OPINION, term_text(&s.opinion)),
                    valued(POLARITY, s.polarity.as_str()),
                ])
            })
            .collect(),
    };
    SelStructure::new(roots)
}

/// Describes every label or span text that [`normalize_text`] would alter for
/// this instance. Empty for the overwhelming majority of data.
pub fn normalization_notes(inst: &CanonicalInstance) -> Vec<String> {
    let mut texts: Vec<&str> = Vec::new();
    for e in &inst.entities {
        texts.extend([e.span.text.as_str(), e.category.as_str()]);
    }
    texts.extend(inst.relations.iter().map(|r| r.relation.as_str()));
    for ev in &inst.events {
        texts.extend([ev.trigger.span.text.as_str(), ev.trigger.category.as_str()]);
        for a in &ev.arguments {
            texts.extend([a.span.text.as_str(), a.role.as_str()]);
        }
    }
    for s in &inst.sentiments {
        texts.extend(s.category.as_deref());
        texts.extend(s.aspect.as_ref().map(|a| a.text.as_str()));
        texts.extend(s.opinion.as_ref().map(|o| o.text.as_str()));
    }
    let mut notes: Vec<String> = Vec::new();
    for t in texts {
        if let Cow::Owned(n) = normalize_text(t) {
            let note = format!("{t:?} -> {n:?}");
            if !notes.contains(&note) {
                notes.push(note);
            }
        }
    }
    notes
}
