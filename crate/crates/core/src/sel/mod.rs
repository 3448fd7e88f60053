//! The structural extraction language (SEL): a nested, parenthesized encoding of
//! extraction targets such as `((location: France) (person: Fischler))`.
//!
//! Grammar of serialized output:
//!
//! ```text
//! structure := '(' node (' ' node)* ')' | '()'
//! node      := '(' label (': ' value)? (' ' node)* ')'
//! ```

mod linearize;
mod parse;

use std::fmt;

pub use linearize::{normalization_notes, normalize_text, structure_of};
pub use parse::{parse, ParseDiagnostics};

use crate::error::SelError;

/// Separator between a node's label and its value.
pub const VALUE_SEP: &str = ": ";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SelNode {
    pub label: String,
    pub value: Option<String>,
    pub children: Vec<SelNode>,
}

impl SelNode {
    pub fn leaf(label: impl Into<String>) -> Self {
        SelNode {
            label: label.into(),
            value: None,
            children: Vec::new(),
        }
    }

    pub fn valued(label: impl Into<String>, value: impl Into<String>) -> Self {
        SelNode {
            label: label.into(),
            value: Some(value.into()),
            children: Vec::new(),
        }
    }

    pub fn with_children(mut self, children: Vec<SelNode>) -> Self {
        self.children = children;
        self
    }

    /// The same node without its children.
    pub fn head(&self) -> SelNode {
        SelNode {
            label: self.label.clone(),
            value: self.value.clone(),
            children: Vec::new(),
        }
    }

    fn check(&self) -> Result<(), SelError> {
        check_atom("label", &self.label)?;
        if self.label.contains(VALUE_SEP) {
            return Err(SelError::SeparatorInLabel(self.label.clone()));
        }
        if let Some(v) = &self.value {
            if v.is_empty() {
                return Err(SelError::EmptyValue);
            }
            check_atom("value", v)?;
        }
        self.children.iter().try_for_each(SelNode::check)
    }

    fn write(&self, out: &mut String) {
        out.push('(');
        out.push_str(&self.label);
        if let Some(v) = &self.value {
            out.push_str(VALUE_SEP);
            out.push_str(v);
        }
        for child in &self.children {
            out.push(' ');
            child.write(out);
        }
        out.push(')');
    }
}

fn check_atom(field: &'static str, text: &str) -> Result<(), SelError> {
    if text.is_empty() {
        return Err(SelError::EmptyLabel);
    }
    if text.contains(['(', ')']) {
        return Err(SelError::Parenthesis {
            field,
            text: text.to_string(),
        });
    }
    let mut prev_space = true;
    for c in text.chars() {
        let space = c.is_whitespace();
        if space && (prev_space || c != ' ') {
            return Err(SelError::Whitespace {
                field,
                text: text.to_string(),
            });
        }
        prev_space = space;
    }
    if prev_space {
        return Err(SelError::Whitespace {
            field,
            text: text.to_string(),
        });
    }
    Ok(())
}

/// An ordered forest of SEL nodes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SelStructure {
    pub roots: Vec<SelNode>,
}

impl SelStructure {
    pub fn new(roots: Vec<SelNode>) -> Self {
        SelStructure { roots }
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Checks that every label and value can be serialized and parsed back unchanged.
    pub fn validate(&self) -> Result<(), SelError> {
        self.roots.iter().try_for_each(SelNode::check)
    }

    /// Appends `other`'s roots after this structure's roots.
    pub fn concat(mut self, other: SelStructure) -> SelStructure {
        self.roots.extend(other.roots);
        self
    }

    /// Indented tree rendering, one node per line.
    pub fn render_tree(&self) -> String {
        fn go(node: &SelNode, depth: usize, out: &mut String) {
            out.push_str(&"  ".repeat(depth));
            out.push_str(&node.label);
            if let Some(v) = &node.value {
                out.push_str(" = ");
                out.push_str(v);
            }
            out.push('\n');
            for c in &node.children {
                go(c, depth + 1, out);
            }
        }
        let mut out = String::new();
        if self.roots.is_empty() {
            out.push_str("(empty)\n");
        }
        for r in &self.roots {
            go(r, 0, &mut out);
        }
        out
    }
}

/// Serializes a structure to its SEL string.
///
/// Labels and values must be non-empty, free of parentheses, and use single
/// interior spaces only; anything else is rejected.
pub fn serialize(structure: &SelStructure) -> Result<String, SelError> {
    structure.validate()?;
    let mut out = String::from("(");
    for (i, node) in structure.roots.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        node.write(&mut out);
    }
    out.push(')');
    Ok(out)
}

impl fmt::Display for SelStructure {
    /// Writes the SEL form, or an error marker when the structure is not serializable.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match serialize(self) {
            Ok(s) => f.write_str(&s),
            Err(e) => write!(f, "<invalid structure: {e}>"),
        }
    }
}
