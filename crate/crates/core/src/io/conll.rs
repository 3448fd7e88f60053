use std::path::Path;

use crate::error::DatasetError;
use crate::model::{CanonicalInstance, Entity, Span, Task};

#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct ConversionReport {
    pub sentences: usize,
    pub tokens: usize,
    pub entities: usize,
    /// `I-` tags with no open entity of the same type, converted as `B-`.
    pub repaired_dangling: usize,
}

/// Schema label for a BIO entity type: the CoNLL-2003 abbreviations expand to
/// their full names, anything else is lowercased.
pub fn category_name(tag_type: &str) -> String {
    match tag_type {
        "LOC" => "location".to_string(),
        "PER" => "person".to_string(),
        "ORG" => "organization".to_string(),
        "MISC" => "miscellaneous".to_string(),
        other => other.to_lowercase(),
    }
}

struct Sentence {
    tokens: Vec<(String, Tag)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tag {
    Outside,
    Begin(String),
    Inside(String),
}

fn parse_tag(tag: &str) -> Option<Tag> {
    if tag == "O" {
        return Some(Tag::Outside);
    }
    let (prefix, ty) = tag.split_once('-')?;
    if ty.is_empty() {
        return None;
    }
    match prefix {
        "B" => Some(Tag::Begin(ty.to_string())),
        "I" => Some(Tag::Inside(ty.to_string())),
        _ => None,
    }
}

fn build(sentence: &Sentence, id: String, report: &mut ConversionReport) -> CanonicalInstance {
    let mut text = String::new();
    let mut offsets = Vec::with_capacity(sentence.tokens.len());
    let mut chars = 0;
    for (i, (tok, _)) in sentence.tokens.iter().enumerate() {
        if i > 0 {
            text.push(' ');
            chars += 1;
        }
        let len = tok.chars().count();
        offsets.push((chars, chars + len));
        text.push_str(tok);
        chars += len;
    }

    // (type, first token, last token)
    let mut runs: Vec<(String, usize, usize)> = Vec::new();
    let mut open: Option<usize> = None;
    for (i, (_, tag)) in sentence.tokens.iter().enumerate() {
        match tag {
            Tag::Outside => open = None,
            Tag::Begin(ty) => {
                runs.push((ty.clone(), i, i));
                open = Some(runs.len() - 1);
            }
            Tag::Inside(ty) => match open {
                Some(r) if runs[r].0 == *ty => runs[r].2 = i,
                _ => {
                    report.repaired_dangling += 1;
                    runs.push((ty.clone(), i, i));
                    open = Some(runs.len() - 1);
                }
            },
        }
    }

    let mut inst = CanonicalInstance::new(id, Task::Ner, text);
    for (ty, first, last) in runs {
        let (start, end) = (offsets[first].0, offsets[last].1);
        let span = Span::from_offsets(&inst.text, start, end).expect("offsets come from the joined text");
        inst.entities.push(Entity::new(span, category_name(&ty)));
    }
    report.sentences += 1;
    report.tokens += sentence.tokens.len();
    report.entities += inst.entities.len();
    inst
}

/// Converts token-per-line BIO text (token first, tag last, blank lines between
/// sentences) into NER instances with ids `{prefix}-{n}`. `-DOCSTART-` lines act
/// as sentence breaks. Errors carry the 1-based line number.
pub fn convert_bio_str(
    src: &str,
    id_prefix: &str,
) -> Result<(Vec<CanonicalInstance>, ConversionReport), (usize, String)> {
    let mut report = ConversionReport::default();
    let mut out = Vec::new();
    let mut current = Sentence { tokens: Vec::new() };
    let flush = |current: &mut Sentence, out: &mut Vec<CanonicalInstance>, report: &mut ConversionReport| {
        if !current.tokens.is_empty() {
            let id = format!("{id_prefix}-{}", out.len());
            out.push(build(current, id, report));
            current.tokens.clear();
        }
    };
    for (i, line) in src.lines().enumerate() {
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.is_empty() || cols[0] == "-DOCSTART-" {
            flush(&mut current, &mut out, &mut report);
            continue;
        }
        if cols.len() < 2 {
            return Err((i + 1, format!("expected `token tag`, found {line:?}")));
        }
        let tag_str = cols[cols.len() - 1];
        let tag = parse_tag(tag_str).ok_or_else(|| (i + 1, format!("unrecognized BIO tag {tag_str:?}")))?;
        current.tokens.push((cols[0].to_string(), tag));
    }
    flush(&mut current, &mut out, &mut report);
    Ok((out, report))
}

pub fn convert_conll_bio(
    path: impl AsRef<Path>,
    id_prefix: &str,
) -> Result<(Vec<CanonicalInstance>, ConversionReport), DatasetError> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path).map_err(|e| DatasetError::io(path, e))?;
    convert_bio_str(&src, id_prefix).map_err(|(line, detail)| DatasetError::BadTag {
        path: path.to_path_buf(),
        line,
        detail,
    })
}
