use serde::{Deserialize, Serialize};

use super::{SelNode, SelStructure, VALUE_SEP};
use crate::model::Schema;

const MAX_NOTES: usize = 32;

/// What the parser had to repair to produce its structure.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseDiagnostics {
    pub recovered: bool,
    pub dropped_fragments: usize,
    pub auto_closed_parens: usize,
    pub notes: Vec<String>,
}

impl ParseDiagnostics {
    fn note(&mut self, msg: impl Into<String>) {
        self.recovered = true;
        if self.notes.len() < MAX_NOTES {
            self.notes.push(msg.into());
        }
    }

    fn drop_fragment(&mut self, at: usize, what: &str) {
        self.dropped_fragments += 1;
        self.note(format!("dropped {what} at byte {at}"));
    }

    pub fn is_clean(&self) -> bool {
        !self.recovered
    }
}

struct Frame {
    label: String,
    value: Option<String>,
    children: Vec<SelNode>,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    // known labels, longest first
    labels: Vec<&'a str>,
    diag: ParseDiagnostics,
}

/// Parses a (possibly malformed) SEL string. Never fails: unbalanced trailing
/// parentheses are closed, stray text and unlabeled nodes are dropped, and every
/// repair is counted in the returned diagnostics.
///
/// A node head splits into label and value at the first `": "`, unless a longer
/// schema label followed by `": "` starts the head.
pub fn parse<'a>(text: &'a str, schema: &'a Schema) -> (SelStructure, ParseDiagnostics) {
    let mut labels: Vec<&str> = schema.known_labels().into_iter().collect();
    labels.sort_by_key(|l| std::cmp::Reverse(l.len()));
    let mut parser = Parser {
        src: text,
        pos: 0,
        labels,
        diag: ParseDiagnostics::default(),
    };
    let roots = parser.document();
    (SelStructure::new(roots), parser.diag)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    /// Advances to the next byte in `stops` (or the end) and returns the skipped text.
    fn take_until(&mut self, stops: &[u8]) -> &'a str {
        let rest = &self.src.as_bytes()[self.pos..];
        let len = rest
            .iter()
            .position(|b| stops.contains(b))
            .unwrap_or(rest.len());
        let out = &self.src[self.pos..self.pos + len];
        self.pos += len;
        out
    }

    fn stray(&mut self, stops: &[u8]) {
        let at = self.pos;
        self.take_until(stops);
        self.diag.drop_fragment(at, "stray text");
    }

    fn document(&mut self) -> Vec<SelNode> {
        self.skip_ws();
        if self.peek().is_none() {
            self.diag.note("empty output");
            return Vec::new();
        }
        if self.peek() != Some('(') {
            self.stray(b"(");
        }
        if self.peek().is_none() {
            return Vec::new();
        }

        // "((a) (b))" has an enclosing list; "(a) (b)" is a bare node sequence.
        let after = self.src[self.pos + 1..].trim_start().chars().next();
        let enclosed = matches!(after, None | Some('(') | Some(')'));
        if enclosed {
            self.pos += 1;
        } else {
            self.diag.note("missing enclosing parentheses");
        }

        let mut root: Vec<SelNode> = Vec::new();
        let mut stack: Vec<Frame> = Vec::new();
        let mut closed = false;
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some('(') => {
                    self.pos += 1;
                    let head = normalize_ws(self.take_until(b"()"));
                    let (label, value) = self.split_head(&head);
                    stack.push(Frame {
                        label,
                        value,
                        children: Vec::new(),
                    });
                }
                Some(')') => {
                    let at = self.pos;
                    self.pos += 1;
                    if let Some(frame) = stack.pop() {
                        let parent = match stack.last_mut() {
                            Some(p) => &mut p.children,
                            None => &mut root,
                        };
                        self.finish(frame, parent);
                    } else if enclosed {
                        closed = true;
                        break;
                    } else {
                        self.diag.drop_fragment(at, "unmatched ')'");
                    }
                }
                Some(_) => self.stray(b"()"),
            }
        }

        if closed {
            self.skip_ws();
            if self.pos < self.src.len() {
                let at = self.pos;
                self.pos = self.src.len();
                self.diag.drop_fragment(at, "trailing content");
            }
        } else {
            while let Some(frame) = stack.pop() {
                self.diag.auto_closed_parens += 1;
                let parent = match stack.last_mut() {
                    Some(p) => &mut p.children,
                    None => &mut root,
                };
                self.finish(frame, parent);
            }
            if enclosed {
                self.diag.auto_closed_parens += 1;
            }
            if self.diag.auto_closed_parens > 0 {
                let n = self.diag.auto_closed_parens;
                self.diag.note(format!("auto-closed {n} parenthes{}", if n == 1 { "is" } else { "es" }));
            }
        }
        root
    }

    fn finish(&mut self, frame: Frame, parent: &mut Vec<SelNode>) {
        if frame.label.is_empty() {
            // keep whatever was nested under the unlabeled node
            self.diag.dropped_fragments += 1;
            self.diag.note("dropped unlabeled node");
            parent.extend(frame.children);
        } else {
            parent.push(SelNode {
                label: frame.label,
                value: frame.value,
                children: frame.children,
            });
        }
    }

    fn split_head(&self, head: &str) -> (String, Option<String>) {
        let first = head.find(VALUE_SEP);
        let schema_match = self
            .labels
            .iter()
            .find(|l| head.starts_with(**l) && head[l.len()..].starts_with(VALUE_SEP))
            .map(|l| l.len());
        let cut = match (first, schema_match) {
            (Some(f), Some(s)) => Some(f.max(s)),
            (f, s) => f.or(s),
        };
        match cut {
            Some(i) => (
                head[..i].to_string(),
                Some(head[i + VALUE_SEP.len()..].to_string()),
            ),
            None => (head.to_string(), None),
        }
    }
}

fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
