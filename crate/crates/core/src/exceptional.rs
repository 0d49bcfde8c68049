//! Exceptional sequences over hereditary algebras: the braid action, the
//! passage to and from silting objects, and a bounded connectivity probe.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::approx::{left_approximation, right_approximation};
use crate::complex::{cocone, cone};
use crate::decompose::{DecomposeError, ObjId, Registry};
use crate::mutation::{mutation, MutationError};
use crate::silting::{Direction, SiltingObject, Step};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExceptionalError {
    #[error("the algebra is not hereditary")]
    NotHereditary,
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error("the Hom relation among summands has a cycle")]
    CycleDetected,
    #[error("bad braid word: {0}")]
    BadWord(String),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Mutation(#[from] MutationError),
}

/// `σ_i` (positive) or `σ_i^{-1}`, with `i` 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub index: usize,
    pub inverse: bool,
}

impl Generator {
    pub fn inv(self) -> Generator {
        Generator { index: self.index, inverse: !self.inverse }
    }
}

/// Parses `s1,s2^-1,...`.
pub fn parse_word(text: &str) -> Result<Vec<Generator>, ExceptionalError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            let bad = || ExceptionalError::BadWord(tok.to_string());
            let body = tok.strip_prefix('s').ok_or_else(bad)?;
            let (num, inverse) = match body.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (body, false),
            };
            let index: usize = num.parse().map_err(|_| bad())?;
            if index == 0 {
                return Err(bad());
            }
            Ok(Generator { index, inverse })
        })
        .collect()
}

pub fn format_word(word: &[Generator]) -> String {
    word.iter()
        .map(|g| if g.inverse { format!("s{}^-1", g.index) } else { format!("s{}", g.index) })
        .collect::<Vec<_>>()
        .join(",")
}

fn require_hereditary(reg: &Registry) -> Result<(), ExceptionalError> {
    if reg.algebra().is_hereditary() {
        Ok(())
    } else {
        Err(ExceptionalError::NotHereditary)
    }
}

/// `Hom(X, X[i]) = 0` for `i != 0` and `End(X) = k`.
pub fn is_exceptional(reg: &Registry, x: ObjId) -> bool {
    let Some((lo, hi)) = reg.window(x, x) else { return false };
    (lo..=hi).all(|i| reg.hom_dim(x, x, i) == usize::from(i == 0))
}

fn all_vanish(reg: &Registry, a: ObjId, b: ObjId) -> bool {
    match reg.window(a, b) {
        None => true,
        Some((lo, hi)) => (lo..=hi).all(|i| reg.hom_dim(a, b, i) == 0),
    }
}

/// Checks every entry is exceptional and there are no backward morphisms.
pub fn validate(reg: &Registry, seq: &[ObjId]) -> Result<(), ExceptionalError> {
    for (i, &x) in seq.iter().enumerate() {
        if !is_exceptional(reg, x) {
            return Err(ExceptionalError::ValidationFailed(format!("{} is not exceptional", reg.label(x))));
        }
        for &y in &seq[..i] {
            if !all_vanish(reg, x, y) {
                return Err(ExceptionalError::ValidationFailed(format!(
                    "Hom({}, {}[*]) is nonzero",
                    reg.label(x),
                    reg.label(y)
                )));
            }
        }
    }
    Ok(())
}

pub fn is_full(reg: &Registry, seq: &[ObjId]) -> bool {
    seq.len() == reg.algebra().n_vertices()
}

fn shifts_between(reg: &Registry, a: ObjId, b: ObjId) -> Vec<i32> {
    match reg.window(a, b) {
        None => Vec::new(),
        Some((lo, hi)) => (lo..=hi).filter(|&i| reg.hom_dim(a, b, i) > 0).collect(),
    }
}

fn single(parts: Vec<ObjId>, what: &str) -> Result<ObjId, ExceptionalError> {
    match parts.as_slice() {
        [x] => Ok(*x),
        _ => Err(ExceptionalError::ValidationFailed(format!("{what} has {} summands", parts.len()))),
    }
}

/// `R_{X}Y`: co-cone of the evaluation `⊕ Hom(X[l], Y) ⊗ X[l] -> Y`.
pub fn right_braid_object(reg: &Registry, x: ObjId, y: ObjId) -> Result<ObjId, ExceptionalError> {
    let alg = reg.algebra();
    let class: Vec<ObjId> = shifts_between(reg, x, y).into_iter().map(|i| x.shifted(-i)).collect();
    let yo = reg.object(y);
    let a = right_approximation(reg, &yo, &class, false);
    single(reg.decompose(&cocone(alg, &a.map, &a.other, &yo))?, "R")
}

/// `L_{Y}X`: cone of the coevaluation `X -> ⊕ DHom(X, Y[l]) ⊗ Y[l]`.
pub fn left_braid_object(reg: &Registry, x: ObjId, y: ObjId) -> Result<ObjId, ExceptionalError> {
    let alg = reg.algebra();
    let class: Vec<ObjId> = shifts_between(reg, x, y).into_iter().map(|i| y.shifted(i)).collect();
    let xo = reg.object(x);
    let a = left_approximation(reg, &xo, &class, false);
    single(reg.decompose(&cone(alg, &a.map, &xo, &a.other))?, "L")
}

fn apply_generator(reg: &Registry, seq: &mut [ObjId], g: Generator) -> Result<(), ExceptionalError> {
    let i = g.index - 1;
    let (x, y) = (seq[i], seq[i + 1]);
    if g.inverse {
        seq[i] = y;
        seq[i + 1] = left_braid_object(reg, x, y)?;
    } else {
        seq[i] = right_braid_object(reg, x, y)?;
        seq[i + 1] = x;
    }
    Ok(())
}

/// Acts by a braid word; the last generator acts first.
pub fn braid_apply(reg: &Registry, seq: &[ObjId], word: &[Generator]) -> Result<Vec<ObjId>, ExceptionalError> {
    require_hereditary(reg)?;
    validate(reg, seq)?;
    for g in word {
        if g.index == 0 || g.index >= seq.len() {
            return Err(ExceptionalError::BadWord(format!("generator s{} on length {}", g.index, seq.len())));
        }
    }
    let mut out = seq.to_vec();
    for g in word.iter().rev() {
        apply_generator(reg, &mut out, *g)?;
    }
    validate(reg, &out)?;
    Ok(out)
}

pub fn shift_action(seq: &[ObjId], shifts: &[i32]) -> Vec<ObjId> {
    seq.iter().zip(shifts.iter().chain(std::iter::repeat(&0))).map(|(x, &l)| x.shifted(l)).collect()
}

/// Orders the summands of a silting object so that no morphisms go backwards.
pub fn silting_to_exceptional(reg: &Registry, m: &[ObjId]) -> Result<Vec<ObjId>, ExceptionalError> {
    require_hereditary(reg)?;
    let mut nodes: Vec<ObjId> = m.to_vec();
    nodes.sort();
    nodes.dedup();
    let k = nodes.len();
    let mut indeg = vec![0; k];
    let mut succ = vec![Vec::new(); k];
    for a in 0..k {
        for b in 0..k {
            if a != b && !all_vanish(reg, nodes[a], nodes[b]) {
                succ[a].push(b);
                indeg[b] += 1;
            }
        }
    }
    let mut ready: BTreeSet<usize> = (0..k).filter(|&i| indeg[i] == 0).collect();
    let mut out = Vec::new();
    while let Some(&i) = ready.iter().next() {
        ready.remove(&i);
        out.push(nodes[i]);
        for &j in &succ[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                ready.insert(j);
            }
        }
    }
    if out.len() != k {
        return Err(ExceptionalError::CycleDetected);
    }
    validate(reg, &out)?;
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct FromExceptional {
    pub gap: i32,
    pub shifts: Vec<i32>,
    pub object: SiltingObject,
}

/// `⊕ X_i[(i-1)a]` with `a` the least value with `Hom(X_i, X_j[>a]) = 0`.
pub fn exceptional_to_silting(reg: &Registry, seq: &[ObjId]) -> Result<FromExceptional, ExceptionalError> {
    require_hereditary(reg)?;
    validate(reg, seq)?;
    let mut gap = 0;
    for &x in seq {
        for &y in seq {
            if let Some(top) = shifts_between(reg, x, y).into_iter().max() {
                gap = gap.max(top);
            }
        }
    }
    let shifts: Vec<i32> = (0..seq.len() as i32).map(|i| i * gap).collect();
    let object = SiltingObject::new(reg, shift_action(seq, &shifts), None);
    Ok(FromExceptional { gap, shifts, object })
}

/// One irreducible mutation of a basic object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeStep {
    pub direction: Direction,
    pub at: ObjId,
    pub to: Vec<ObjId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeResult {
    Path(Vec<ProbeStep>),
    Exhausted,
}

/// Irreducible mutations of a basic object in both directions:
/// `(direction, mutated class, new class, result)`.
pub fn neighbours(
    reg: &Registry,
    node: &[ObjId],
    dirs: &[Direction],
) -> Result<Vec<(Direction, ObjId, ObjId, Vec<ObjId>)>, MutationError> {
    let m = SiltingObject { summands: node.to_vec(), trail: None, certificate: crate::silting::Certificate::NecessaryOnly };
    let mut out = Vec::new();
    for &d in dirs {
        for &x in node {
            let mu = mutation(reg, &m, &[x], d)?;
            let new = mu.new_part.first().copied().unwrap_or(x);
            out.push((d, x, new, mu.result.classes()));
        }
    }
    Ok(out)
}

fn opposite(d: Direction) -> Direction {
    match d {
        Direction::Left => Direction::Right,
        Direction::Right => Direction::Left,
    }
}

type Parents = HashMap<Vec<ObjId>, Option<(Vec<ObjId>, Direction, ObjId, ObjId)>>;

fn expand(
    reg: &Registry,
    frontier: &mut VecDeque<Vec<ObjId>>,
    seen: &mut Parents,
) -> Result<(), ExceptionalError> {
    let level: Vec<Vec<ObjId>> = frontier.drain(..).collect();
    for node in level {
        for (d, at, new, to) in neighbours(reg, &node, &[Direction::Left, Direction::Right])? {
            if !seen.contains_key(&to) {
                seen.insert(to.clone(), Some((node.clone(), d, at, new)));
                frontier.push_back(to);
            }
        }
    }
    Ok(())
}

fn forward_path(seen: &Parents, mut node: Vec<ObjId>) -> Vec<ProbeStep> {
    let mut steps = Vec::new();
    while let Some(Some((prev, d, at, _))) = seen.get(&node) {
        steps.push(ProbeStep { direction: *d, at: *at, to: node.clone() });
        node = prev.clone();
    }
    steps.reverse();
    steps
}

fn backward_path(seen: &Parents, mut node: Vec<ObjId>) -> Vec<ProbeStep> {
    let mut steps = Vec::new();
    while let Some(Some((prev, d, _, new))) = seen.get(&node) {
        steps.push(ProbeStep { direction: opposite(*d), at: *new, to: prev.clone() });
        node = prev.clone();
    }
    steps
}

/// Bidirectional search over irreducible mutations for a path of length at
/// most `budget`.
pub fn connectivity_probe(reg: &Registry, m: &[ObjId], n: &[ObjId], budget: usize) -> Result<ProbeResult, ExceptionalError> {
    let norm = |x: &[ObjId]| {
        let mut v = x.to_vec();
        v.sort();
        v.dedup();
        v
    };
    let (m, n) = (norm(m), norm(n));
    if m == n {
        return Ok(ProbeResult::Path(Vec::new()));
    }
    let mut fwd: Parents = HashMap::from([(m.clone(), None)]);
    let mut bwd: Parents = HashMap::from([(n.clone(), None)]);
    let mut ff = VecDeque::from([m]);
    let mut bf = VecDeque::from([n]);
    let (mut df, mut db) = (0, 0);
    while df + db < budget && !(ff.is_empty() && bf.is_empty()) {
        if (ff.len() <= bf.len() && !ff.is_empty()) || bf.is_empty() {
            expand(reg, &mut ff, &mut fwd)?;
            df += 1;
        } else {
            expand(reg, &mut bf, &mut bwd)?;
            db += 1;
        }
        let mut meets: Vec<&Vec<ObjId>> = fwd.keys().filter(|k| bwd.contains_key(*k)).collect();
        meets.sort();
        if let Some(meet) = meets.first() {
            let mut path = forward_path(&fwd, (*meet).clone());
            path.extend(backward_path(&bwd, (*meet).clone()));
            return Ok(ProbeResult::Path(path));
        }
    }
    Ok(ProbeResult::Exhausted)
}

pub fn hereditary_connectivity_probe(
    reg: &Registry,
    m: &[ObjId],
    n: &[ObjId],
    budget: usize,
) -> Result<ProbeResult, ExceptionalError> {
    require_hereditary(reg)?;
    connectivity_probe(reg, m, n, budget)
}

/// Attaches a mutation trail from `A` when the probe finds one.
pub fn certify_by_probe(reg: &Registry, obj: &SiltingObject, budget: usize) -> Result<SiltingObject, ExceptionalError> {
    if obj.trail.is_some() || obj.certificate.is_failed() {
        return Ok(obj.clone());
    }
    match connectivity_probe(reg, &reg.regular(), &obj.summands, budget)? {
        ProbeResult::Path(p) => {
            let trail = p.into_iter().map(|s| Step::Mutate { direction: s.direction, at: vec![s.at] }).collect();
            Ok(SiltingObject::new(reg, obj.summands.clone(), Some(trail)))
        }
        ProbeResult::Exhausted => Ok(obj.clone()),
    }
}
