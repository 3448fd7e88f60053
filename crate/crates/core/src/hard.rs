//! Hard-stage instances: two training instances concatenated into one, with the
//! partner's annotations shifted past the base text.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::ComposeError;
use crate::model::{is_empty_target, CanonicalInstance, RelationTriple, Task};
use crate::par::Execution;
use crate::sel::{structure_of, SelStructure};

/// Text inserted between the base and partner texts.
pub const SEPARATOR: &str = " ";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardInstance {
    pub base_id: String,
    pub partner_id: String,
    pub text: String,
    pub target: SelStructure,
    /// Characters added in front of every partner span.
    pub offset_shift: usize,
}

/// A copy of `inst` with every span moved `by` characters to the right.
pub fn shift_instance(inst: &CanonicalInstance, by: usize) -> CanonicalInstance {
    let mut out = inst.clone();
    for e in &mut out.entities {
        e.span = e.span.shifted(by);
    }
    for ev in &mut out.events {
        ev.trigger.span = ev.trigger.span.shifted(by);
        for a in &mut ev.arguments {
            a.span = a.span.shifted(by);
        }
    }
    for s in &mut out.sentiments {
        for term in [&mut s.aspect, &mut s.opinion].into_iter().flatten() {
            *term = term.shifted(by);
        }
    }
    out
}

/// The canonical instance a hard instance stands for: concatenated text, base
/// annotations, then shifted partner annotations.
pub fn merge_instances(base: &CanonicalInstance, partner: &CanonicalInstance) -> CanonicalInstance {
    let shift = base.char_len() + SEPARATOR.chars().count();
    let shifted = shift_instance(partner, shift);
    let offset = base.entities.len();
    let mut out = base.clone();
    out.id = format!("{}+{}", base.id, partner.id);
    out.text = format!("{}{SEPARATOR}{}", base.text, partner.text);
    out.entities.extend(shifted.entities);
    out.relations.extend(shifted.relations.into_iter().map(|r| RelationTriple {
        head: r.head + offset,
        relation: r.relation,
        tail: r.tail + offset,
    }));
    out.events.extend(shifted.events);
    out.sentiments.extend(shifted.sentiments);
    out
}

/// Concatenates `base` and `partner`. The partner must have a non-empty target.
pub fn compose(
    base: &CanonicalInstance,
    partner: &CanonicalInstance,
) -> Result<HardInstance, ComposeError> {
    if base.task != partner.task {
        return Err(ComposeError::TaskMismatch {
            base: base.id.clone(),
            partner: partner.id.clone(),
            base_task: base.task,
            partner_task: partner.task,
        });
    }
    if is_empty_target(partner) {
        return Err(ComposeError::EmptyPartner(partner.id.clone()));
    }
    let offset_shift = base.char_len() + SEPARATOR.chars().count();
    let target = structure_of(base).concat(structure_of(&shift_instance(partner, offset_shift)));
    Ok(HardInstance {
        base_id: base.id.clone(),
        partner_id: partner.id.clone(),
        text: format!("{}{SEPARATOR}{}", base.text, partner.text),
        target,
        offset_shift,
    })
}

/// Partner indices drawn for the base at `base_index`: `m` uniform draws with
/// replacement from `pool`, on an RNG stream owned by that base.
pub fn draw_partners(pool: &[usize], m: usize, seed: u64, base_index: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(base_index as u64);
    (0..m).map(|_| pool[rng.gen_range(0..pool.len())]).collect()
}

/// Builds `train.len() * m` hard instances: for every base (empty targets
/// included), `m` partners sampled from the instances with non-empty targets.
/// Output is ordered by (base index, draw index) and depends only on the inputs.
pub fn build_hard_set(
    train: &[CanonicalInstance],
    m: usize,
    seed: u64,
) -> Result<Vec<HardInstance>, ComposeError> {
    build_hard_set_with(train, m, seed, Execution::default())
}

pub fn build_hard_set_with(
    train: &[CanonicalInstance],
    m: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<HardInstance>, ComposeError> {
    if m == 0 {
        return Err(ComposeError::ZeroPartners);
    }
    let pool: Vec<usize> = (0..train.len())
        .filter(|&i| !is_empty_target(&train[i]))
        .collect();
    if pool.is_empty() {
        return Err(ComposeError::EmptyPool);
    }
    let per_base = exec.map(train, |i, base| {
        draw_partners(&pool, m, seed, i)
            .into_iter()
            .map(|p| compose(base, &train[p]))
            .collect::<Result<Vec<_>, _>>()
    });
    let mut out = Vec::with_capacity(train.len() * m);
    for batch in per_base {
        out.extend(batch?);
    }
    Ok(out)
}

/// Partner counts used for the hard stage in the reference setup: {1, 2} for
/// NER/RE/EE and {1, 2, 3} for the sentiment tasks.
pub fn recommended_partner_counts(task: Task) -> &'static [usize] {
    if task.is_absa() {
        &[1, 2, 3]
    } else {
        &[1, 2]
    }
}
