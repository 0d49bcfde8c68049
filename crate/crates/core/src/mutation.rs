//! Silting mutation, the tilting criterion for mutations, and the
//! Okuyama-Rickard and APR/BB constructions.

use thiserror::Error;

use crate::approx::{left_approximation, right_approximation, Approximation};
use crate::complex::{cocone, cone, direct_sum, hom_space, AMat, ChainMap, Complex};
use crate::decompose::{DecomposeError, ObjId, Registry};
use crate::linalg::{rank_of, Vector};
use crate::module_cat::{
    cokernel, direct_sum as module_sum, hom_modules, proj_dim_at_most_one, projective_cover, submodule_generated,
    tau_inverse_simple, ModuleError, Rep,
};
use crate::silting::{geq, is_tilting, Direction, SiltingObject, Step};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MutationError {
    #[error("{0} is not a summand")]
    NotASummand(String),
    #[error("empty mutation set")]
    Empty,
    #[error("invalid vertex set: {0}")]
    InvalidVertices(String),
    #[error("τ⁻¹S has projective dimension greater than one")]
    ProjDimTooBig,
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}

#[derive(Clone, Debug)]
pub struct Mutation {
    pub result: SiltingObject,
    /// Summand classes replacing the mutated ones.
    pub new_part: Vec<ObjId>,
    /// Cone summands that already lay in the kept part.
    pub discarded: Vec<ObjId>,
}

fn mutate(reg: &Registry, m: &SiltingObject, at: &[ObjId], dir: Direction) -> Result<Mutation, MutationError> {
    let alg = reg.algebra();
    let mut at = at.to_vec();
    at.sort();
    at.dedup();
    if at.is_empty() {
        return Err(MutationError::Empty);
    }
    for x in &at {
        if !m.summands.contains(x) {
            return Err(MutationError::NotASummand(reg.label(*x)));
        }
    }
    let rest: Vec<ObjId> = m.summands.iter().copied().filter(|s| !at.contains(s)).collect();
    let mut keep = rest.clone();
    keep.dedup();
    let mut summands = rest;
    let mut new_part = Vec::new();
    let mut discarded = Vec::new();
    for &x in &at {
        let xo = reg.object(x);
        let copies = m.summands.iter().filter(|s| **s == x).count();
        let pieces = match dir {
            Direction::Left => {
                let a = left_approximation(reg, &xo, &keep, true);
                reg.decompose(&cone(alg, &a.map, &xo, &a.other))?
            }
            Direction::Right => {
                let a = right_approximation(reg, &xo, &keep, true);
                reg.decompose(&cocone(alg, &a.map, &a.other, &xo))?
            }
        };
        for p in pieces {
            if keep.contains(&p) {
                log::warn!("mutation summand {} already in the kept part", reg.label(p));
                discarded.push(p);
                continue;
            }
            for _ in 0..copies {
                summands.push(p);
            }
            new_part.push(p);
        }
    }
    new_part.sort();
    new_part.dedup();
    if at.len() == 1 && new_part.len() != 1 {
        log::warn!("irreducible mutation produced {} new classes", new_part.len());
    }
    let trail = m.trail.clone().map(|mut t| {
        t.push(Step::Mutate { direction: dir, at: at.clone() });
        t
    });
    Ok(Mutation { result: SiltingObject::new(reg, summands, trail), new_part, discarded })
}

/// `μ⁺(M; X)`: replace each class in `at` by the cone of its minimal left
/// approximation by the remaining summands.
pub fn left_mutation(reg: &Registry, m: &SiltingObject, at: &[ObjId]) -> Result<Mutation, MutationError> {
    mutate(reg, m, at, Direction::Left)
}

/// `μ⁻(M; X)`, via co-cones of minimal right approximations.
pub fn right_mutation(reg: &Registry, m: &SiltingObject, at: &[ObjId]) -> Result<Mutation, MutationError> {
    mutate(reg, m, at, Direction::Right)
}

pub fn mutation(reg: &Registry, m: &SiltingObject, at: &[ObjId], dir: Direction) -> Result<Mutation, MutationError> {
    mutate(reg, m, at, dir)
}

fn induced_injective(reg: &Registry, a: &Approximation, x: &Complex, d: &Complex) -> bool {
    let alg = reg.algebra();
    // left: Hom(D', X) -> Hom(D', D) by f∘-, right: Hom(X, D') -> Hom(D, D') by -∘g
    let (src, dst) = if a.left {
        (hom_space(alg, d, x), hom_space(alg, d, &a.other))
    } else {
        (hom_space(alg, x, d), hom_space(alg, &a.other, d))
    };
    let vecs: Vec<Vector> = src
        .basis_maps(alg)
        .iter()
        .map(|h| {
            let c = if a.left { a.map.compose(alg, h) } else { h.compose(alg, &a.map) };
            dst.coords(alg, &c)
        })
        .collect();
    rank_of(alg.field(), dst.dim(), &vecs) == src.dim()
}

/// Predicts whether the mutation of a tilting object stays tilting: the
/// approximation must induce injections on Hom from (resp. to) every kept
/// summand.
pub fn tilting_check_for_mutation(
    reg: &Registry,
    m: &SiltingObject,
    at: &[ObjId],
    dir: Direction,
) -> Result<bool, MutationError> {
    let keep: Vec<ObjId> = m.classes().into_iter().filter(|s| !at.contains(s)).collect();
    for x in at {
        if !m.summands.contains(x) {
            return Err(MutationError::NotASummand(reg.label(*x)));
        }
        let xo = reg.object(*x);
        let a = match dir {
            Direction::Left => left_approximation(reg, &xo, &keep, true),
            Direction::Right => right_approximation(reg, &xo, &keep, true),
        };
        for &d in &keep {
            if !induced_injective(reg, &a, &xo, &reg.object(d)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn check_vertices(reg: &Registry, e: &[usize]) -> Result<Vec<usize>, MutationError> {
    let n = reg.algebra().n_vertices();
    let mut e = e.to_vec();
    e.sort();
    e.dedup();
    if e.is_empty() || e.iter().any(|&v| v >= n) {
        return Err(MutationError::InvalidVertices(format!("{e:?}")));
    }
    Ok(e)
}

#[derive(Clone, Debug)]
pub struct OkuyamaRickard {
    pub vertices: Vec<usize>,
    /// `P(eA(1-e)A) -> eA` in degrees 0 and 1.
    pub two_term: Complex,
    /// The whole object including the stalks of `(1-e)A`.
    pub complex: Complex,
    pub summands: Vec<ObjId>,
    /// Agreement with `μ⁻(A; eA)`.
    pub matches_mutation: bool,
    /// `Hom_A(eA/eA(1-e)A, (1-e)A) = 0`.
    pub criterion_tilting: bool,
    pub is_tilting: bool,
}

fn projective_sum(reg: &Registry, vs: &[usize]) -> Rep {
    let alg = reg.algebra();
    module_sum(alg, &vs.iter().map(|&v| Rep::projective(alg, v)).collect::<Vec<_>>())
}

pub fn okuyama_rickard(reg: &Registry, e: &[usize]) -> Result<OkuyamaRickard, MutationError> {
    let alg = reg.algebra();
    let f = alg.field();
    let e = check_vertices(reg, e)?;
    let n = alg.n_vertices();
    if e.len() == n {
        log::warn!("idempotent is the identity: the result is a shift of A");
    }
    let rest: Vec<usize> = (0..n).filter(|v| !e.contains(v)).collect();
    let ea = projective_sum(reg, &e);
    // generators: every path from an e-vertex ending outside e
    let mut gens = Vec::new();
    let mut offsets = vec![vec![0; n]; e.len() + 1];
    for (k, &i) in e.iter().enumerate() {
        for v in 0..n {
            offsets[k + 1][v] = offsets[k][v] + alg.block(i, v).len();
        }
    }
    for (k, &i) in e.iter().enumerate() {
        for &v in &rest {
            for r in 0..alg.block(i, v).len() {
                gens.push((v, crate::linalg::unit_vec(f, ea.dims[v], offsets[k][v] + r)));
            }
        }
    }
    let (sub, incl) = submodule_generated(alg, &ea, &gens);
    let (cover_vertices, entries) = if sub.is_zero() {
        (Vec::new(), Vec::new())
    } else {
        let cover = projective_cover(alg, &sub)?;
        let mut entries = Vec::new();
        for (&v, g) in cover.vertices.iter().zip(&cover.generators) {
            let y = incl.blocks[v].apply(g);
            let col: Vec<_> = (0..e.len())
                .map(|k| {
                    let mut q = alg.zero();
                    for (r, &b) in alg.block(e[k], v).iter().enumerate() {
                        crate::linalg::axpy(&mut q, &y[offsets[k][v] + r], &alg.basis_elem(b));
                    }
                    q
                })
                .collect();
            entries.push(col);
        }
        (cover.vertices, entries)
    };
    let mut d = AMat::zero(alg, e.len(), cover_vertices.len());
    for (s, col) in entries.iter().enumerate() {
        for (t, q) in col.iter().enumerate() {
            *d.at_mut(t, s) = q.clone();
        }
    }
    let two_term = if cover_vertices.is_empty() {
        Complex::stalk(e.clone(), 1)
    } else {
        Complex { lo: 0, terms: vec![cover_vertices, e.clone()], diffs: vec![d] }
    };
    let rest_stalk = Complex::stalk(rest.clone(), 0);
    let complex = direct_sum(alg, &[&two_term, &rest_stalk]);
    let summands = reg.decompose(&complex)?;
    let mu = right_mutation(reg, &SiltingObject::regular(reg), &e.iter().map(|&v| reg.projective(v)).collect::<Vec<_>>())?;
    let matches_mutation = mu.result.summands == summands;
    // eA / eA(1-e)A against (1-e)A
    let (quot, _) = cokernel(alg, &ea, &incl);
    let criterion_tilting = rest.is_empty() || hom_modules(alg, &quot, &projective_sum(reg, &rest)).is_empty();
    let is_tilting = is_tilting(reg, &summands);
    Ok(OkuyamaRickard { vertices: e, two_term, complex, summands, matches_mutation, criterion_tilting, is_tilting })
}

/// Both sides of `add eA ⊇ add e'A  ⇔  T_e ≥ T_e'`.
pub fn or_order_check(reg: &Registry, e: &[usize], e2: &[usize]) -> Result<(bool, bool), MutationError> {
    let a = okuyama_rickard(reg, e)?;
    let b = okuyama_rickard(reg, e2)?;
    let contains = b.vertices.iter().all(|v| a.vertices.contains(v));
    Ok((contains, geq(reg, &a.summands, &b.summands)))
}

#[derive(Clone, Debug)]
pub struct BbTilting {
    pub vertex: usize,
    /// `τ⁻¹S ⊕ (1-e)A`.
    pub module: Rep,
    pub tau_inverse: Rep,
    pub complex: Complex,
    pub summands: Vec<ObjId>,
    pub matches_mutation: bool,
    pub is_tilting: bool,
}

pub fn bb_tilting(reg: &Registry, i: usize) -> Result<BbTilting, MutationError> {
    let alg = reg.algebra();
    let n = alg.n_vertices();
    if i >= n {
        return Err(MutationError::InvalidVertices(format!("[{i}]")));
    }
    let tau = tau_inverse_simple(alg, i)?;
    if !proj_dim_at_most_one(alg, &tau.module) {
        return Err(MutationError::ProjDimTooBig);
    }
    let rest: Vec<usize> = (0..n).filter(|&v| v != i).collect();
    let rest_mod = projective_sum(reg, &rest);
    let module = module_sum(alg, &[tau.module.clone(), rest_mod]);
    let mut d = AMat::zero(alg, tau.targets.len(), 1);
    for (k, q) in tau.entries.iter().enumerate() {
        *d.at_mut(k, 0) = q.clone();
    }
    let two_term = Complex { lo: -1, terms: vec![vec![i], tau.targets.clone()], diffs: vec![d] };
    let complex = direct_sum(alg, &[&two_term, &Complex::stalk(rest, 0)]);
    let summands = reg.decompose(&complex)?;
    let mu = left_mutation(reg, &SiltingObject::regular(reg), &[reg.projective(i)])?;
    let matches_mutation = mu.result.summands == summands;
    let is_tilting = is_tilting(reg, &summands);
    Ok(BbTilting { vertex: i, module, tau_inverse: tau.module, complex, summands, matches_mutation, is_tilting })
}

/// The identity chain map as a degenerate approximation, used to check that
/// a summand of the class is approximated by a split mono.
pub fn is_split_mono(reg: &Registry, a: &Approximation, x: &Complex) -> bool {
    let alg = reg.algebra();
    let back = hom_space(alg, &a.other, x);
    let id = ChainMap::identity(alg, x);
    let target = hom_space(alg, x, x);
    let want = target.coords(alg, &id);
    let vecs: Vec<Vector> = back.basis_maps(alg).iter().map(|r| target.coords(alg, &r.compose(alg, &a.map))).collect();
    let mut with = vecs.clone();
    with.push(want);
    rank_of(alg.field(), target.dim(), &vecs) == rank_of(alg.field(), target.dim(), &with)
}
