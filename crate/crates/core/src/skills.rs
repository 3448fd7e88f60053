//! Easy-stage skill instances: sub-tasks derived from the main target by
//! projecting out a substructure or restricting it to one gold element.
//!
//! | task | skill 1 | skill 2 | skill 3 | skill 4 |
//! |------|---------|---------|---------|---------|
//! | ner  | categories | entities of a category | | |
//! | re, aste | entities / terms | triplets of a head | relations / polarities | triplets of a relation |
//! | ee   | triggers | one event | | |
//! | asqp | categories | (category, aspect) | (category, opinion) | (category, polarity) |

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;

use crate::model::{CanonicalInstance, Schema, Task, ASPECT, CATEGORY, OPINION, POLARITY};
use crate::prompt::{primary_entries, secondary_entries, task_hints, Constraint, Marker, PromptSpec};
use crate::sel::{structure_of, SelNode, SelStructure};

/// Task-qualified skill identifier, rendered as e.g. `re.skill2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SkillTag {
    pub task: Task,
    pub index: u8,
}

impl SkillTag {
    pub fn new(task: Task, index: u8) -> Self {
        SkillTag { task, index }
    }

    /// Number of skills defined for a task.
    pub fn count(task: Task) -> u8 {
        match task {
            Task::Ner | Task::Ee => 2,
            Task::Re | Task::Aste | Task::Asqp => 4,
        }
    }

    /// Skills that carry a constraint and are emitted once per distinct gold value.
    pub fn is_constrained(self) -> bool {
        match self.task {
            Task::Ner | Task::Ee => self.index == 2,
            Task::Re | Task::Aste => self.index == 2 || self.index == 4,
            Task::Asqp => false,
        }
    }
}

impl fmt::Display for SkillTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.skill{}", self.task, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkillInstance {
    pub parent_id: String,
    pub skill: SkillTag,
    pub prompt: PromptSpec,
    pub target: SelStructure,
}

fn unique<T: Clone + Eq + Hash>(items: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut seen = HashSet::new();
    items
        .into_iter()
        .filter(|x| seen.insert(x.clone()))
        .collect()
}

fn constraint_for(marker: Marker, node: &SelNode) -> Constraint {
    match &node.value {
        Some(v) => Constraint::labeled_span(marker, node.label.clone(), v.clone()),
        None => Constraint::label(marker, node.label.clone()),
    }
}

fn heads(roots: &[SelNode]) -> Vec<SelNode> {
    roots.iter().map(SelNode::head).collect()
}

/// Decomposes one gold instance into its easy-stage skill instances, in skill
/// order. Constrained skills yield one instance per distinct gold value, in
/// order of first appearance in the main target; unconstrained skills always
/// yield exactly one instance, with an empty target when the gold is empty.
pub fn decompose(inst: &CanonicalInstance, schema: &Schema) -> Vec<SkillInstance> {
    debug_assert_eq!(inst.task, schema.task);
    let task = inst.task;
    let main = structure_of(inst);
    let roots = &main.roots;
    let [h1, h2] = task_hints(task);
    let primary = primary_entries(schema);
    let secondary = secondary_entries(schema);

    let mut out = Vec::new();
    let mut emit = |index: u8, prompt: PromptSpec, roots: Vec<SelNode>| {
        out.push(SkillInstance {
            parent_id: inst.id.clone(),
            skill: SkillTag::new(task, index),
            prompt,
            target: SelStructure::new(roots),
        })
    };

    match task {
        Task::Ner => {
            let cats = unique(roots.iter().map(|n| n.label.clone()));
            emit(
                1,
                PromptSpec::new(vec![h1]).with_entries(primary.clone()),
                cats.iter().cloned().map(SelNode::leaf).collect(),
            );
            // the constraint replaces the schema listing
            for cat in cats {
                let target = roots.iter().filter(|n| n.label == cat).cloned().collect();
                emit(
                    2,
                    PromptSpec::new(vec![h1, h2]).with_constraint(Constraint::label(Marker::Ent, cat)),
                    target,
                );
            }
        }
        Task::Re | Task::Aste => {
            emit(1, PromptSpec::new(vec![h1]).with_entries(primary.clone()), heads(roots));

            let linked: Vec<&SelNode> = roots.iter().filter(|n| !n.children.is_empty()).collect();
            for head in unique(linked.iter().map(|n| n.head())) {
                let target = linked
                    .iter()
                    .filter(|n| n.label == head.label && n.value == head.value)
                    .map(|n| (*n).clone())
                    .collect();
                emit(
                    2,
                    PromptSpec::new(vec![h1, h2])
                        .with_constraint(constraint_for(Marker::Ent, &head))
                        .with_entries(secondary.clone()),
                    target,
                );
            }

            let relations = unique(roots.iter().flat_map(|n| n.children.iter().map(|c| c.label.clone())));
            emit(
                3,
                PromptSpec::new(vec![h2]).with_entries(secondary.clone()),
                relations.iter().cloned().map(SelNode::leaf).collect(),
            );
            for rel in relations {
                let target = roots
                    .iter()
                    .filter_map(|n| {
                        let kids: Vec<SelNode> =
                            n.children.iter().filter(|c| c.label == rel).cloned().collect();
                        (!kids.is_empty()).then(|| n.head().with_children(kids))
                    })
                    .collect();
                emit(
                    4,
                    PromptSpec::new(vec![h1, h2])
                        .with_constraint(Constraint::label(Marker::Rel, rel))
                        .with_entries(primary.clone()),
                    target,
                );
            }
        }
        Task::Ee => {
            emit(1, PromptSpec::new(vec![h1]).with_entries(primary.clone()), heads(roots));
            for trigger in unique(roots.iter().map(SelNode::head)) {
                let target = roots
                    .iter()
                    .filter(|n| n.label == trigger.label && n.value == trigger.value)
                    .cloned()
                    .collect();
                emit(
                    2,
                    PromptSpec::new(vec![h1, h2])
                        .with_constraint(constraint_for(Marker::Tri, &trigger))
                        .with_entries(secondary.clone()),
                    target,
                );
            }
        }
        Task::Asqp => {
            emit(1, PromptSpec::new(vec![h1]).with_entries(primary.clone()), unique(heads(roots)));
            for (index, role) in [(2, ASPECT), (3, OPINION), (4, POLARITY)] {
                let target = unique(roots.iter().map(|n| {
                    let kids = n.children.iter().filter(|c| c.label == role).cloned().collect();
                    n.head().with_children(kids)
                }));
                emit(
                    index,
                    PromptSpec::new(vec![h1, h2])
                        .with_entries([(Marker::Cat, CATEGORY.to_string()), (Marker::Arg, role.to_string())]),
                    target,
                );
            }
        }
    }
    out
}
