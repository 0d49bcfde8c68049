//! Silting objects: vanishing predicates, certificates, the partial order,
//! resolution towers and Grothendieck coordinates.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::approx::right_approximation;
use crate::complex::{cocone, direct_sum, hom_space, hom_window, shift, Complex};
use crate::decompose::{DecomposeError, ObjId, Registry};
use crate::field::is_unimodular;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SiltingError {
    #[error("object is not in the aisle: Hom(M, N[{0}]) is nonzero")]
    NotInAisle(i32),
    #[error("resolution tower exceeded {0} steps")]
    IterationCap(usize),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Left,
    Right,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Left => "left",
            Direction::Right => "right",
        })
    }
}

/// One recorded step from the regular object.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Step {
    Mutate { direction: Direction, at: Vec<ObjId> },
    Shift { by: i32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason")]
pub enum Certificate {
    Verified,
    NecessaryOnly,
    Failed(String),
}

impl Certificate {
    pub fn is_failed(&self) -> bool {
        matches!(self, Certificate::Failed(_))
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Verified => f.write_str("verified"),
            Certificate::NecessaryOnly => f.write_str("necessary-only"),
            Certificate::Failed(r) => write!(f, "failed: {r}"),
        }
    }
}

/// A nonzero `Hom(src, dst[shift])` between summands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub shift: i32,
    pub src: ObjId,
    pub dst: ObjId,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiltingObject {
    /// Indecomposable summands with multiplicity, sorted.
    pub summands: Vec<ObjId>,
    pub trail: Option<Vec<Step>>,
    pub certificate: Certificate,
}

impl SiltingObject {
    pub fn regular(reg: &Registry) -> SiltingObject {
        SiltingObject::new(reg, reg.regular(), Some(Vec::new()))
    }

    pub fn new(reg: &Registry, mut summands: Vec<ObjId>, trail: Option<Vec<Step>>) -> SiltingObject {
        summands.sort();
        let certificate = certificate(reg, &summands, trail.is_some());
        SiltingObject { summands, trail, certificate }
    }

    /// Distinct summand classes.
    pub fn classes(&self) -> Vec<ObjId> {
        let mut c = self.summands.clone();
        c.dedup();
        c
    }

    pub fn basic(&self) -> SiltingObject {
        SiltingObject { summands: self.classes(), trail: self.trail.clone(), certificate: self.certificate.clone() }
    }

    pub fn delta(&self) -> usize {
        self.classes().len()
    }

    pub fn shifted(&self, reg: &Registry, k: i32) -> SiltingObject {
        let trail = self.trail.clone().map(|mut t| {
            t.push(Step::Shift { by: k });
            t
        });
        SiltingObject::new(reg, self.summands.iter().map(|s| s.shifted(k)).collect(), trail)
    }

    pub fn complex(&self, reg: &Registry) -> Complex {
        let parts: Vec<Complex> = self.summands.iter().map(|&s| reg.object(s)).collect();
        direct_sum(reg.algebra(), &parts.iter().collect::<Vec<_>>())
    }

    pub fn labels(&self, reg: &Registry) -> Vec<String> {
        self.summands.iter().map(|&s| reg.label(s)).collect()
    }

    pub fn describe(&self, reg: &Registry) -> String {
        if self.summands.is_empty() {
            return "0".into();
        }
        self.labels(reg).join(" ⊕ ")
    }

    pub fn k0_matrix(&self, reg: &Registry) -> Vec<Vec<i64>> {
        self.classes().iter().map(|&s| reg.k0_class(s)).collect()
    }
}

fn first_nonzero(reg: &Registry, a: &[ObjId], b: &[ObjId], keep: impl Fn(i32) -> bool) -> Option<Witness> {
    for &x in a {
        for &y in b {
            let Some((lo, hi)) = reg.window(x, y) else { continue };
            for i in lo..=hi {
                if keep(i) {
                    let dim = reg.hom(x, y, i).dim();
                    if dim > 0 {
                        return Some(Witness { shift: i, src: x, dst: y, dim });
                    }
                }
            }
        }
    }
    None
}

fn dedup(s: &[ObjId]) -> Vec<ObjId> {
    let mut c = s.to_vec();
    c.sort();
    c.dedup();
    c
}

/// First nonzero `Hom(M, M[i])` with `i > 0`.
pub fn presilting_witness(reg: &Registry, summands: &[ObjId]) -> Option<Witness> {
    let c = dedup(summands);
    first_nonzero(reg, &c, &c, |i| i > 0)
}

pub fn is_presilting(reg: &Registry, summands: &[ObjId]) -> bool {
    presilting_witness(reg, summands).is_none()
}

/// First nonzero `Hom(M, M[i])` with `i != 0`.
pub fn tilting_witness(reg: &Registry, summands: &[ObjId]) -> Option<Witness> {
    let c = dedup(summands);
    first_nonzero(reg, &c, &c, |i| i != 0)
}

pub fn is_tilting(reg: &Registry, summands: &[ObjId]) -> bool {
    tilting_witness(reg, summands).is_none()
}

pub fn k0_unimodular(reg: &Registry, summands: &[ObjId]) -> bool {
    let rows: Vec<Vec<i64>> = dedup(summands).iter().map(|&s| reg.k0_class(s)).collect();
    rows.len() == reg.algebra().n_vertices() && is_unimodular(&rows)
}

pub fn certificate(reg: &Registry, summands: &[ObjId], has_trail: bool) -> Certificate {
    if let Some(w) = presilting_witness(reg, summands) {
        return Certificate::Failed(format!(
            "Hom({}, {}[{}]) has dimension {}",
            reg.label(w.src),
            reg.label(w.dst),
            w.shift,
            w.dim
        ));
    }
    let n = reg.algebra().n_vertices();
    let delta = dedup(summands).len();
    if delta != n {
        return Certificate::Failed(format!("{delta} summand classes, expected {n}"));
    }
    if !k0_unimodular(reg, summands) {
        return Certificate::Failed("K0 classes are not a basis".into());
    }
    if has_trail {
        Certificate::Verified
    } else {
        Certificate::NecessaryOnly
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Greater,
    Less,
    Equal,
    Incomparable,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Greater => "greater",
            Relation::Less => "less",
            Relation::Equal => "equal",
            Relation::Incomparable => "incomparable",
        })
    }
}

/// `M ≥ N`: `Hom(M, N[i]) = 0` for all `i > 0`.
pub fn geq(reg: &Registry, m: &[ObjId], n: &[ObjId]) -> bool {
    first_nonzero(reg, &dedup(m), &dedup(n), |i| i > 0).is_none()
}

pub fn compare(reg: &Registry, m: &[ObjId], n: &[ObjId]) -> Relation {
    if dedup(m) == dedup(n) {
        return Relation::Equal;
    }
    match (geq(reg, m, n), geq(reg, n, m)) {
        (true, false) => Relation::Greater,
        (false, true) => Relation::Less,
        (true, true) => {
            log::warn!("both orders hold between non-isomorphic objects");
            Relation::Incomparable
        }
        (false, false) => Relation::Incomparable,
    }
}

/// Triangle `N_{i+1} -> M_i -> N_i -> N_{i+1}[1]` with `M_i -> N_i` a minimal
/// right approximation.
#[derive(Clone, Debug)]
pub struct TowerStage {
    pub remainder: Complex,
    pub approx: Vec<ObjId>,
}

#[derive(Clone, Debug)]
pub struct ResolutionTower {
    pub stages: Vec<TowerStage>,
    /// Final remainder, in `add M`.
    pub last: Vec<ObjId>,
}

impl ResolutionTower {
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }
}

/// Largest `i` with `Hom(M, X[i]) != 0`, if any.
pub fn top_shift(reg: &Registry, m: &[ObjId], x: &Complex) -> Result<Option<i32>, SiltingError> {
    let alg = reg.algebra();
    let mut best: Option<i32> = None;
    for &a in &dedup(m) {
        let src = reg.object(a);
        let Some((lo, hi)) = hom_window(&src, x) else { continue };
        for i in (lo..=hi).rev() {
            if best.is_some_and(|t| i <= t) {
                break;
            }
            if hom_space(alg, &src, &shift(x, i)).dim() > 0 {
                best = Some(i);
                break;
            }
        }
    }
    Ok(best)
}

pub fn resolution_tower(reg: &Registry, m: &[ObjId], n: &Complex) -> Result<ResolutionTower, SiltingError> {
    if let Some(t) = top_shift(reg, m, n)? {
        if t > 0 {
            return Err(SiltingError::NotInAisle(t));
        }
    }
    let classes = dedup(m);
    let alg = reg.algebra();
    let cap = 4 * (n.width() + 2) + 4 * reg.algebra().n_vertices();
    let mut cur = n.clone();
    let mut stages = Vec::new();
    // A minimal approximation is an isomorphism exactly when the remainder lies in add M,
    // so no decomposition of the remainders is needed.
    loop {
        let a = right_approximation(reg, &cur, &classes, true);
        let next = crate::complex::minimize(alg, &cocone(alg, &a.map, &a.other, &cur));
        if next.is_zero() {
            return Ok(ResolutionTower { stages, last: a.objects });
        }
        if stages.len() >= cap {
            return Err(SiltingError::IterationCap(cap));
        }
        stages.push(TowerStage { remainder: cur, approx: a.objects });
        cur = next;
    }
}

fn add_counts(out: &mut [i64], classes: &[ObjId], ids: &[ObjId], sign: i64) {
    for id in ids {
        let k = classes.iter().position(|c| c == id).expect("summand outside add M");
        out[k] += sign;
    }
}

/// Coordinates of `[X]` on the basis of summand classes of `M`.
pub fn gamma(reg: &Registry, m: &[ObjId], x: &Complex) -> Result<Vec<i64>, SiltingError> {
    let classes = dedup(m);
    let mut out = vec![0; classes.len()];
    let Some(k) = top_shift(reg, m, x)? else {
        return Ok(out);
    };
    // X[k] lies in the aisle
    let tower = resolution_tower(reg, m, &shift(x, k))?;
    let mut sign = 1;
    for st in &tower.stages {
        add_counts(&mut out, &classes, &st.approx, sign);
        sign = -sign;
    }
    add_counts(&mut out, &classes, &tower.last, sign);
    if k.rem_euclid(2) == 1 {
        for v in out.iter_mut() {
            *v = -*v;
        }
    }
    Ok(out)
}

/// Gamma vectors of the summand classes of `N` on the basis of `M`.
pub fn gamma_matrix(reg: &Registry, m: &[ObjId], n: &[ObjId]) -> Result<Vec<Vec<i64>>, SiltingError> {
    dedup(n).iter().map(|&s| gamma(reg, m, &reg.object(s))).collect()
}
