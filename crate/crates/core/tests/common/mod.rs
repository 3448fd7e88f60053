#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;

use selkit::model::{Argument, Entity, Event, Polarity, RelationTriple, SentimentTuple};
use selkit::{CanonicalInstance, Schema, SelNode, SelStructure, Span, Task};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/examples")
}

pub const EXAMPLES: [(Task, &str); 5] = [
    (Task::Ner, "ner"),
    (Task::Re, "re"),
    (Task::Ee, "ee"),
    (Task::Aste, "aste"),
    (Task::Asqp, "asqp"),
];

// ---- random SEL structures ----

const LABEL_WORDS: &[&str] = &["part", "of", "used", "for", "Zoë", "x1", "über", "a-b", "n/a", "東京", "q."];
const VALUE_WORDS: &[&str] = &["the", "cat", "a:", "b", ":", "x:y", "Kraków", "12", "null", "it's", "ß", "é"];

fn atom<R: Rng>(rng: &mut R, words: &[&str]) -> String {
    let n = rng.gen_range(1..=3);
    (0..n).map(|_| *words.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

fn node<R: Rng>(rng: &mut R, depth: usize) -> SelNode {
    let label = atom(rng, LABEL_WORDS);
    let mut n = if rng.gen_bool(0.7) {
        SelNode::valued(label, atom(rng, VALUE_WORDS))
    } else {
        SelNode::leaf(label)
    };
    if depth > 0 {
        let k = rng.gen_range(0..=3);
        n.children = (0..k).map(|_| node(rng, depth - 1)).collect();
    }
    n
}

pub fn random_structure<R: Rng>(rng: &mut R) -> SelStructure {
    let k = rng.gen_range(0..=4);
    SelStructure::new((0..k).map(|_| node(rng, 2)).collect())
}

// ---- random canonical instances ----

const TEXT_WORDS: &[&str] = &["the", "cat", "sat", "on", "mat", "Zoë", "Paris", "big", "red", "dog", "ran", "fast"];

pub fn schema_for(task: Task) -> Schema {
    let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    let mut s = Schema::empty(task);
    match task {
        Task::Ner => s.entity_categories = set(&["location", "organization", "person"]),
        Task::Re => {
            s.entity_categories = set(&["method", "task", "other scientific term"]);
            s.relations = set(&["conjunction", "part of", "used for"]);
        }
        Task::Ee => {
            s.event_types = set(&["attack", "elect", "transport"]);
            s.argument_roles = set(&["agent", "place", "victim"]);
        }
        Task::Aste => s.polarities = set(&["negative", "neutral", "positive"]),
        Task::Asqp => {
            s.aspect_categories = set(&["food quality", "service general", "ambience general"]);
            s.polarities = set(&["negative", "neutral", "positive"]);
        }
    }
    s
}

struct Text {
    text: String,
    // char offset of each token
    starts: Vec<usize>,
    lens: Vec<usize>,
}

impl Text {
    fn random<R: Rng>(rng: &mut R) -> Self {
        let n = rng.gen_range(1..=14);
        let words: Vec<&str> = (0..n).map(|_| *TEXT_WORDS.choose(rng).unwrap()).collect();
        let mut starts = Vec::new();
        let mut at = 0;
        for w in &words {
            starts.push(at);
            at += w.chars().count() + 1;
        }
        Text {
            text: words.join(" "),
            lens: words.iter().map(|w| w.chars().count()).collect(),
            starts,
        }
    }

    fn span<R: Rng>(&self, rng: &mut R) -> Span {
        let i = rng.gen_range(0..self.starts.len());
        let j = rng.gen_range(i..self.starts.len().min(i + 3));
        Span::from_offsets(&self.text, self.starts[i], self.starts[j] + self.lens[j]).unwrap()
    }
}

fn pick<R: Rng>(rng: &mut R, set: &BTreeSet<String>) -> String {
    set.iter().nth(rng.gen_range(0..set.len())).unwrap().clone()
}

fn polarity<R: Rng>(rng: &mut R) -> Polarity {
    *[Polarity::Positive, Polarity::Negative, Polarity::Neutral].choose(rng).unwrap()
}

/// A schema-valid instance; about one in six has an empty target.
pub fn random_instance<R: Rng>(rng: &mut R, task: Task, schema: &Schema, id: String) -> CanonicalInstance {
    let t = Text::random(rng);
    let mut inst = CanonicalInstance::new(id, task, t.text.clone());
    let empty = rng.gen_ratio(1, 6);
    let n = if empty { 0 } else { rng.gen_range(1..=5) };
    match task {
        Task::Ner | Task::Re => {
            for _ in 0..n {
                inst.entities.push(Entity::new(t.span(rng), pick(rng, &schema.entity_categories)));
            }
            if task == Task::Re && n > 0 {
                for _ in 0..rng.gen_range(0..=5) {
                    inst.relations.push(RelationTriple {
                        head: rng.gen_range(0..n),
                        relation: pick(rng, &schema.relations),
                        tail: rng.gen_range(0..n),
                    });
                }
            }
        }
        Task::Ee => {
            for _ in 0..n.min(3) {
                let arguments = (0..rng.gen_range(0..=3))
                    .map(|_| Argument {
                        span: t.span(rng),
                        role: pick(rng, &schema.argument_roles),
                    })
                    .collect();
                inst.events.push(Event {
                    trigger: Entity::new(t.span(rng), pick(rng, &schema.event_types)),
                    arguments,
                });
            }
        }
        Task::Aste => {
            for _ in 0..n {
                inst.sentiments.push(SentimentTuple {
                    category: None,
                    aspect: Some(t.span(rng)),
                    opinion: Some(t.span(rng)),
                    polarity: polarity(rng),
                });
            }
        }
        Task::Asqp => {
            for _ in 0..n.min(3) {
                inst.sentiments.push(SentimentTuple {
                    category: Some(pick(rng, &schema.aspect_categories)),
                    aspect: rng.gen_bool(0.7).then(|| t.span(rng)),
                    opinion: rng.gen_bool(0.7).then(|| t.span(rng)),
                    polarity: polarity(rng),
                });
            }
        }
    }
    inst
}

pub fn random_corpus<R: Rng>(rng: &mut R, task: Task, schema: &Schema, n: usize) -> Vec<CanonicalInstance> {
    (0..n)
        .map(|i| random_instance(rng, task, schema, format!("{task}-{i}")))
        .collect()
}

// ---- independent reference computations ----

/// Expected number of easy-stage rows per skill, counted from the annotations.
pub fn expected_skill_counts(inst: &CanonicalInstance) -> BTreeMap<u8, usize> {
    let distinct = |xs: Vec<(String, String)>| xs.into_iter().collect::<BTreeSet<_>>().len();
    let mut m = BTreeMap::new();
    m.insert(1, 1);
    match inst.task {
        Task::Ner => {
            let cats: BTreeSet<&str> = inst.entities.iter().map(|e| e.category.as_str()).collect();
            m.insert(2, cats.len());
        }
        Task::Re => {
            let heads = inst
                .relations
                .iter()
                .map(|r| {
                    let e = &inst.entities[r.head];
                    (e.category.clone(), e.span.text.clone())
                })
                .collect();
            m.insert(2, distinct(heads));
            m.insert(3, 1);
            let rels: BTreeSet<&str> = inst.relations.iter().map(|r| r.relation.as_str()).collect();
            m.insert(4, rels.len());
        }
        Task::Aste => {
            let aspects = inst
                .sentiments
                .iter()
                .map(|s| (String::new(), s.aspect.as_ref().unwrap().text.clone()))
                .collect();
            m.insert(2, distinct(aspects));
            m.insert(3, 1);
            let pols: BTreeSet<&str> = inst.sentiments.iter().map(|s| s.polarity.as_str()).collect();
            m.insert(4, pols.len());
        }
        Task::Ee => {
            let triggers = inst
                .events
                .iter()
                .map(|e| (e.trigger.category.clone(), e.trigger.span.text.clone()))
                .collect();
            m.insert(2, distinct(triggers));
        }
        Task::Asqp => {
            for k in 2..=4 {
                m.insert(k, 1);
            }
        }
    }
    m.retain(|_, v| *v > 0);
    m
}

/// Merge written from scratch: partner text after one space, partner offsets
/// shifted, partner relation indices moved past the base entities.
pub fn reference_merge(base: &CanonicalInstance, partner: &CanonicalInstance) -> CanonicalInstance {
    let shift = base.text.chars().count() + 1;
    let mv = |s: &Span| Span::new(s.start + shift, s.end + shift, s.text.clone());
    let mut out = base.clone();
    out.text = format!("{} {}", base.text, partner.text);
    for e in &partner.entities {
        out.entities.push(Entity::new(mv(&e.span), e.category.clone()));
    }
    for r in &partner.relations {
        out.relations.push(RelationTriple {
            head: r.head + base.entities.len(),
            relation: r.relation.clone(),
            tail: r.tail + base.entities.len(),
        });
    }
    for ev in &partner.events {
        out.events.push(Event {
            trigger: Entity::new(mv(&ev.trigger.span), ev.trigger.category.clone()),
            arguments: ev
                .arguments
                .iter()
                .map(|a| Argument {
                    span: mv(&a.span),
                    role: a.role.clone(),
                })
                .collect(),
        });
    }
    for s in &partner.sentiments {
        out.sentiments.push(SentimentTuple {
            category: s.category.clone(),
            aspect: s.aspect.as_ref().map(mv),
            opinion: s.opinion.as_ref().map(mv),
            polarity: s.polarity,
        });
    }
    out
}

/// Sorted multiset of serialized nodes, for order-insensitive forest comparison.
pub fn node_bag<'a>(nodes: impl IntoIterator<Item = &'a SelNode>) -> Vec<String> {
    let mut v: Vec<String> = nodes
        .into_iter()
        .map(|n| selkit::serialize(&SelStructure::new(vec![n.clone()])).unwrap())
        .collect();
    v.sort();
    v
}

/// P/R/F1 from raw counts, following the metric definitions directly.
pub fn prf(tp: usize, n_pred: usize, n_gold: usize) -> (f64, f64, f64) {
    if n_pred == 0 && n_gold == 0 {
        return (1.0, 1.0, 1.0);
    }
    let p = if n_pred == 0 { 0.0 } else { tp as f64 / n_pred as f64 };
    let r = if n_gold == 0 { 0.0 } else { tp as f64 / n_gold as f64 };
    let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    (p, r, f)
}

// ---- scorer oracle cases ----

// (aspect range, opinion range, polarity)
type Triplet = ((usize, usize), (usize, usize), String);

/// Gold/pred tuples are drawn over texts of unique fixed-width tokens, so every
/// mention has exactly one occurrence and its offsets are known up front.
pub struct OracleCase {
    pub gold: Vec<CanonicalInstance>,
    pub preds: Vec<selkit::io::PredictionRecord>,
    /// metric name -> (tp, n_pred, n_gold) summed over instances
    pub expected: BTreeMap<&'static str, (usize, usize, usize)>,
}

struct Tokens {
    text: String,
    n: usize,
}

impl Tokens {
    fn new(n: usize) -> Self {
        let text = (0..n).map(|i| format!("k{i:03}")).collect::<Vec<_>>().join(" ");
        Tokens { text, n }
    }
    // token range [i, j) -> (start, end, text)
    fn span(&self, i: usize, j: usize) -> Span {
        Span::from_offsets(&self.text, 5 * i, 5 * j - 1).unwrap()
    }
    /// Disjoint token ranges covering a prefix of the text.
    fn ranges<R: Rng>(&self, rng: &mut R) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.n {
            let j = (i + rng.gen_range(1..=2)).min(self.n);
            out.push((i, j));
            i = j;
        }
        out.shuffle(rng);
        out
    }
}

fn count<T: Ord + Clone>(gold: &[T], pred: &[T]) -> (usize, usize, usize) {
    let g: BTreeSet<T> = gold.iter().cloned().collect();
    let p: BTreeSet<T> = pred.iter().cloned().collect();
    (g.intersection(&p).count(), p.len(), g.len())
}

fn add(m: &mut BTreeMap<&'static str, (usize, usize, usize)>, k: &'static str, c: (usize, usize, usize)) {
    let e = m.entry(k).or_default();
    *e = (e.0 + c.0, e.1 + c.1, e.2 + c.2);
}

fn choose_label<R: Rng>(rng: &mut R, set: &BTreeSet<String>) -> String {
    pick(rng, set)
}

/// Keeps a gold item, perturbs it, or drops it.
fn perturb<R: Rng, T: Clone>(rng: &mut R, items: &[T], f: impl Fn(&mut R, &T) -> T) -> Vec<T> {
    let mut out = Vec::new();
    for x in items {
        match rng.gen_range(0..4) {
            0 => {}
            1 => out.push(f(rng, x)),
            _ => out.push(x.clone()),
        }
    }
    out
}

pub fn oracle_case<R: Rng>(rng: &mut R, task: Task, schema: &Schema) -> OracleCase {
    let mut case = OracleCase {
        gold: Vec::new(),
        preds: Vec::new(),
        expected: BTreeMap::new(),
    };
    let instances = rng.gen_range(1..=3);
    for k in 0..instances {
        let toks = Tokens::new(rng.gen_range(2..=12));
        let id = format!("o{k}");
        let mut inst = CanonicalInstance::new(id.clone(), task, toks.text.clone());
        let ranges = toks.ranges(rng);
        let n_gold = rng.gen_range(0..=ranges.len().min(4));
        let (gold_r, spare_r) = ranges.split_at(n_gold);
        let text_of = |r: (usize, usize)| toks.span(r.0, r.1).text;
        let at = |r: (usize, usize)| {
            let s = toks.span(r.0, r.1);
            (s.start, s.end)
        };
        let mut exp = BTreeMap::new();
        let output = match task {
            Task::Ner | Task::Re => {
                let cats = &schema.entity_categories;
                let gold_e: Vec<((usize, usize), String)> =
                    gold_r.iter().map(|&r| (r, choose_label(rng, cats))).collect();
                let mut pred_e = perturb(rng, &gold_e, |rng, (r, _)| (*r, choose_label(rng, cats)));
                for &r in spare_r.iter().take(rng.gen_range(0..=2)) {
                    pred_e.push((r, choose_label(rng, cats)));
                }
                pred_e.shuffle(rng);
                for (r, c) in &gold_e {
                    let s = toks.span(r.0, r.1);
                    inst.entities.push(Entity::new(s, c.clone()));
                }
                let ekey = |e: &((usize, usize), String)| (at(e.0), e.1.clone());
                add(
                    &mut exp,
                    "entity",
                    count(
                        &gold_e.iter().map(ekey).collect::<Vec<_>>(),
                        &pred_e.iter().map(ekey).collect::<Vec<_>>(),
                    ),
                );
                // relations as (head index, relation, tail index) into the entity lists
                let mut pred_rel: Vec<(usize, String, usize)> = Vec::new();
                if task == Task::Re {
                    let rels = &schema.relations;
                    if !gold_e.is_empty() {
                        for _ in 0..rng.gen_range(0..=3) {
                            inst.relations.push(RelationTriple {
                                head: rng.gen_range(0..gold_e.len()),
                                relation: choose_label(rng, rels),
                                tail: rng.gen_range(0..gold_e.len()),
                            });
                        }
                    }
                    let pos = |r: (usize, usize)| pred_e.iter().position(|e| e.0 == r);
                    for g in &inst.relations {
                        let (h, t) = (pos(gold_e[g.head].0), pos(gold_e[g.tail].0));
                        if let (Some(h), Some(t)) = (h, t) {
                            if rng.gen_ratio(3, 4) {
                                let rel = if rng.gen_ratio(1, 4) { choose_label(rng, rels) } else { g.relation.clone() };
                                pred_rel.push((h, rel, t));
                            }
                        }
                    }
                    if !pred_e.is_empty() {
                        for _ in 0..rng.gen_range(0..=1) {
                            pred_rel.push((
                                rng.gen_range(0..pred_e.len()),
                                choose_label(rng, rels),
                                rng.gen_range(0..pred_e.len()),
                            ));
                        }
                    }
                    let gkey: Vec<_> = inst
                        .relations
                        .iter()
                        .map(|r| (ekey(&gold_e[r.head]), r.relation.clone(), ekey(&gold_e[r.tail])))
                        .collect();
                    let pkey: Vec<_> = pred_rel
                        .iter()
                        .map(|(h, rel, t)| (ekey(&pred_e[*h]), rel.clone(), ekey(&pred_e[*t])))
                        .collect();
                    add(&mut exp, "relation_strict", count(&gkey, &pkey));
                }
                let roots: Vec<String> = pred_e
                    .iter()
                    .enumerate()
                    .map(|(i, (r, c))| {
                        let kids: String = pred_rel
                            .iter()
                            .filter(|(h, _, _)| *h == i)
                            .map(|(_, rel, t)| format!(" ({rel}: {})", text_of(pred_e[*t].0)))
                            .collect();
                        format!("({c}: {}{kids})", text_of(*r))
                    })
                    .collect();
                format!("({})", roots.join(" "))
            }
            Task::Ee => {
                let types = &schema.event_types;
                let roles = &schema.argument_roles;
                // (trigger range, type, [(arg range, role)])
                type Ev = ((usize, usize), String, Vec<((usize, usize), String)>);
                let gold_ev: Vec<Ev> = gold_r
                    .iter()
                    .map(|&r| {
                        let mut args: Vec<((usize, usize), String)> = Vec::new();
                        for _ in 0..rng.gen_range(0..=2) {
                            let a = ranges[rng.gen_range(0..ranges.len())];
                            if !args.iter().any(|x| x.0 == a) {
                                args.push((a, choose_label(rng, roles)));
                            }
                        }
                        (r, choose_label(rng, types), args)
                    })
                    .collect();
                let mut pred_ev = perturb(rng, &gold_ev, |rng, (r, t, args)| {
                    let t = if rng.gen_bool(0.5) { choose_label(rng, types) } else { t.clone() };
                    let args = perturb(rng, args, |rng, (a, _)| (*a, choose_label(rng, roles)));
                    (*r, t, args)
                });
                for &r in spare_r.iter().take(rng.gen_range(0..=1)) {
                    pred_ev.push((r, choose_label(rng, types), vec![(ranges[0], choose_label(rng, roles))]));
                }
                for (r, t, args) in &gold_ev {
                    inst.events.push(Event {
                        trigger: Entity::new(toks.span(r.0, r.1), t.clone()),
                        arguments: args
                            .iter()
                            .map(|(a, role)| Argument {
                                span: toks.span(a.0, a.1),
                                role: role.clone(),
                            })
                            .collect(),
                    });
                }
                let tkey = |evs: &[Ev]| evs.iter().map(|(r, t, _)| (at(*r), t.clone())).collect::<Vec<_>>();
                let akey = |evs: &[Ev]| {
                    evs.iter()
                        .flat_map(|(_, t, args)| args.iter().map(move |(a, role)| (t.clone(), role.clone(), at(*a))))
                        .collect::<Vec<_>>()
                };
                add(&mut exp, "trigger", count(&tkey(&gold_ev), &tkey(&pred_ev)));
                add(&mut exp, "argument", count(&akey(&gold_ev), &akey(&pred_ev)));
                let roots: Vec<String> = pred_ev
                    .iter()
                    .map(|(r, t, args)| {
                        let kids: String = args
                            .iter()
                            .map(|(a, role)| format!(" ({role}: {})", text_of(*a)))
                            .collect();
                        format!("({t}: {}{kids})", text_of(*r))
                    })
                    .collect();
                format!("({})", roots.join(" "))
            }
            Task::Aste => {
                let pols = &schema.polarities;
                // aspect ranges come from the gold ranges, opinions from anywhere
                let gold_t: Vec<Triplet> = (0..n_gold)
                    .map(|_| {
                        (
                            gold_r[rng.gen_range(0..gold_r.len())],
                            ranges[rng.gen_range(0..ranges.len())],
                            choose_label(rng, pols),
                        )
                    })
                    .collect();
                let mut pred_t = perturb(rng, &gold_t, |rng, (a, o, _)| (*a, *o, choose_label(rng, pols)));
                if rng.gen_bool(0.3) {
                    pred_t.push((ranges[0], ranges[ranges.len() - 1], choose_label(rng, pols)));
                }
                for (a, o, p) in &gold_t {
                    inst.sentiments.push(SentimentTuple {
                        category: None,
                        aspect: Some(toks.span(a.0, a.1)),
                        opinion: Some(toks.span(o.0, o.1)),
                        polarity: pol(p),
                    });
                }
                let key = |ts: &[Triplet]| {
                    ts.iter().map(|(a, o, p)| (at(*a), at(*o), p.clone())).collect::<Vec<_>>()
                };
                add(&mut exp, "sentiment_triplet", count(&key(&gold_t), &key(&pred_t)));
                let mut by_aspect: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
                let mut opinions: BTreeSet<(usize, usize)> = BTreeSet::new();
                for (a, o, p) in &pred_t {
                    by_aspect.entry(*a).or_default().push(format!(" ({p}: {})", text_of(*o)));
                    opinions.insert(*o);
                }
                let mut roots: Vec<String> = by_aspect
                    .iter()
                    .map(|(a, kids)| format!("(aspect: {}{})", text_of(*a), kids.concat()))
                    .collect();
                roots.extend(opinions.iter().map(|o| format!("(opinion: {})", text_of(*o))));
                roots.shuffle(rng);
                format!("({})", roots.join(" "))
            }
            Task::Asqp => {
                let cats = &schema.aspect_categories;
                let pols = &schema.polarities;
                type Quad = (String, Option<(usize, usize)>, Option<(usize, usize)>, String);
                let term = |rng: &mut R| rng.gen_bool(0.7).then(|| ranges[rng.gen_range(0..ranges.len())]);
                let gold_q: Vec<Quad> = (0..n_gold)
                    .map(|_| (choose_label(rng, cats), term(rng), term(rng), choose_label(rng, pols)))
                    .collect();
                let mut pred_q = perturb(rng, &gold_q, |rng, (c, a, o, _)| (c.clone(), *a, *o, choose_label(rng, pols)));
                if rng.gen_bool(0.3) {
                    pred_q.push((choose_label(rng, cats), term(rng), term(rng), choose_label(rng, pols)));
                }
                for (c, a, o, p) in &gold_q {
                    inst.sentiments.push(SentimentTuple {
                        category: Some(c.clone()),
                        aspect: a.map(|r| toks.span(r.0, r.1)),
                        opinion: o.map(|r| toks.span(r.0, r.1)),
                        polarity: pol(p),
                    });
                }
                let word = |t: &Option<(usize, usize)>| t.map_or("null".to_string(), text_of);
                // a dropped slot is never equal to any gold slot
                let mut pkey = Vec::new();
                let mut roots = Vec::new();
                for (c, a, o, p) in &pred_q {
                    let drop_slot = rng.gen_ratio(1, 8);
                    let slots = [("aspect", word(a)), ("opinion", word(o)), ("polarity", p.clone())];
                    let kids: String = slots
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| !(drop_slot && *i == 1))
                        .map(|(_, (l, v))| format!(" ({l}: {v})"))
                        .collect();
                    roots.push(format!("(category: {c}{kids})"));
                    let opinion = if drop_slot { None } else { Some(word(o)) };
                    pkey.push((c.clone(), Some(word(a)), opinion, Some(p.clone())));
                }
                let gkey: Vec<_> = gold_q
                    .iter()
                    .map(|(c, a, o, p)| (c.clone(), Some(word(a)), Some(word(o)), Some(p.clone())))
                    .collect();
                add(&mut exp, "sentiment_quad", count(&gkey, &pkey));
                format!("({})", roots.join(" "))
            }
        };
        case.gold.push(inst);
        if rng.gen_ratio(9, 10) {
            case.preds.push(selkit::io::PredictionRecord { id, output });
        } else {
            // no record: scored as empty output
            for c in exp.values_mut() {
                *c = (0, 0, c.2);
            }
        }
        for (k, c) in exp {
            add(&mut case.expected, k, c);
        }
    }
    case.preds.shuffle(rng);
    case
}

fn pol(s: &str) -> Polarity {
    serde_json::from_value(serde_json::Value::String(s.to_string())).unwrap()
}

// ---- worked-example fixture ----

#[derive(serde::Deserialize)]
pub struct Golden {
    pub id: String,
    pub input: String,
    pub target: String,
}

pub fn goldens() -> Vec<Golden> {
    let text = std::fs::read_to_string(fixture_dir().join("golden.jsonl")).unwrap();
    text.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

pub fn examples_corpus(name: &str) -> (Vec<CanonicalInstance>, Schema) {
    let dir = fixture_dir();
    (
        selkit::io::read_canonical(dir.join(format!("{name}.jsonl"))).unwrap(),
        selkit::io::read_schema(dir.join(format!("{name}.schema.json"))).unwrap(),
    )
}

/// Easy and main rows of all five example sentences, keyed by id.
pub fn compile_examples() -> BTreeMap<String, selkit::io::CompiledExample> {
    use selkit::io::Stage;
    let mut out = BTreeMap::new();
    for (task, name) in EXAMPLES {
        let (insts, schema) = examples_corpus(name);
        let mut config = selkit::CompileConfig::new(task);
        config.stages = vec![Stage::Easy, Stage::Main];
        for row in selkit::compile(&insts, &schema, &config).unwrap().merged() {
            out.insert(row.id.clone(), row);
        }
    }
    out
}

/// Mismatch descriptions between compiled rows and the goldens.
pub fn examples_mismatches() -> Vec<String> {
    let rows = compile_examples();
    let mut bad = Vec::new();
    for g in goldens() {
        match rows.get(&g.id) {
            None => bad.push(format!("{}: not produced", g.id)),
            Some(r) => {
                if r.input != g.input {
                    bad.push(format!("{} input:\n  got  {}\n  want {}", g.id, r.input, g.input));
                }
                if r.target != g.target {
                    bad.push(format!("{} target:\n  got  {}\n  want {}", g.id, r.target, g.target));
                }
            }
        }
    }
    bad
}
