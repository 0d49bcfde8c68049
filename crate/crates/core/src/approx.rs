//! Left and right add-approximations by finite sets of registered
//! indecomposables, minimized by greedy removal of redundant copies.

use crate::complex::{direct_sum, hom_space, sum_injection, ChainMap, Complex, HomSpace};
use crate::decompose::{ObjId, Registry};
use crate::linalg::{rank_of, Vector};

#[derive(Clone, Debug)]
pub struct Approximation {
    /// Summand copies of the add-part, in assembly order.
    pub objects: Vec<ObjId>,
    /// Their direct sum.
    pub other: Complex,
    /// `other -> X` for right, `X -> other` for left approximations.
    pub map: ChainMap,
    pub left: bool,
    pub minimal: bool,
}

struct Copy {
    obj: ObjId,
    map: ChainMap,
    /// For each class member, composites expressed in that member's Hom space.
    spans: Vec<Vec<Vector>>,
}

fn covers(copies: &[Copy], keep: &[bool], targets: &[HomSpace], field: crate::Field) -> bool {
    targets.iter().enumerate().all(|(t, h)| {
        let vecs: Vec<Vector> = copies
            .iter()
            .zip(keep)
            .filter(|(_, k)| **k)
            .flat_map(|(c, _)| c.spans[t].iter().cloned())
            .collect();
        rank_of(field, h.dim(), &vecs) == h.dim()
    })
}

fn build(reg: &Registry, x: &Complex, class: &[ObjId], minimize: bool, left: bool) -> Approximation {
    let alg = reg.algebra();
    let objs: Vec<Complex> = class.iter().map(|&d| reg.object(d)).collect();
    let homs: Vec<HomSpace> = objs
        .iter()
        .map(|o| if left { hom_space(alg, x, o) } else { hom_space(alg, o, x) })
        .collect();
    let mut copies = Vec::new();
    for (j, h) in homs.iter().enumerate() {
        for f in h.basis_maps(alg) {
            let spans = class
                .iter()
                .enumerate()
                .map(|(t, &dt)| {
                    let between =
                        if left { reg.hom(class[j], dt, 0) } else { reg.hom(dt, class[j], 0) };
                    between
                        .basis_maps(alg)
                        .iter()
                        .map(|g| {
                            let comp = if left { g.compose(alg, &f) } else { f.compose(alg, g) };
                            homs[t].coords(alg, &comp)
                        })
                        .collect()
                })
                .collect();
            copies.push(Copy { obj: class[j], map: f, spans });
        }
    }
    let mut keep = vec![true; copies.len()];
    if minimize {
        for i in 0..copies.len() {
            keep[i] = false;
            if !covers(&copies, &keep, &homs, alg.field()) {
                keep[i] = true;
            }
        }
    }
    let kept: Vec<&Copy> = copies.iter().zip(&keep).filter(|(_, k)| **k).map(|(c, _)| c).collect();
    let parts: Vec<Complex> = kept.iter().map(|c| reg.object(c.obj)).collect();
    let refs: Vec<&Complex> = parts.iter().collect();
    let other = direct_sum(alg, &refs);
    let mut map = ChainMap::zero();
    for (k, c) in kept.iter().enumerate() {
        let (inc, proj) = sum_injection(alg, &refs, k);
        let piece = if left { inc.compose(alg, &c.map) } else { c.map.compose(alg, &proj) };
        map = map.add(&piece);
    }
    Approximation { objects: kept.iter().map(|c| c.obj).collect(), other, map, left, minimal: minimize }
}

/// `X -> D` with every map from `X` to the class factoring through it.
pub fn left_approximation(reg: &Registry, x: &Complex, class: &[ObjId], minimize: bool) -> Approximation {
    build(reg, x, class, minimize, true)
}

/// `D -> X` with every map from the class to `X` factoring through it.
pub fn right_approximation(reg: &Registry, x: &Complex, class: &[ObjId], minimize: bool) -> Approximation {
    build(reg, x, class, minimize, false)
}

/// Re-checks the approximation property of an assembled map.
pub fn is_approximation(reg: &Registry, x: &Complex, class: &[ObjId], a: &Approximation) -> bool {
    let alg = reg.algebra();
    class.iter().all(|&d| {
        let o = reg.object(d);
        let (target, source) = if a.left {
            (hom_space(alg, x, &o), hom_space(alg, &a.other, &o))
        } else {
            (hom_space(alg, &o, x), hom_space(alg, &o, &a.other))
        };
        let vecs: Vec<Vector> = source
            .basis_maps(alg)
            .iter()
            .map(|g| {
                let comp = if a.left { g.compose(alg, &a.map) } else { a.map.compose(alg, g) };
                target.coords(alg, &comp)
            })
            .collect();
        rank_of(alg.field(), target.dim(), &vecs) == target.dim()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, Presentation};
    use crate::field::Field;
    use std::sync::Arc;

    fn reg(name: &str) -> Registry {
        Registry::new(Arc::new(build_algebra(&Presentation::builtin(name, Field::default()).unwrap()).unwrap()))
    }

    #[test]
    fn a2_approximations() {
        let r = reg("a2");
        let p1 = r.object(r.projective(0));
        let p2 = r.object(r.projective(1));
        let a = left_approximation(&r, &p1, &[r.projective(1)], true);
        assert!(a.objects.is_empty());
        assert!(a.other.is_zero());
        let a = left_approximation(&r, &p2, &[r.projective(0)], true);
        assert_eq!(a.objects, [r.projective(0)]);
        assert!(!a.map.is_zero());
        assert!(is_approximation(&r, &p2, &[r.projective(0)], &a));
        let b = right_approximation(&r, &p1, &[r.projective(1)], true);
        assert_eq!(b.objects, [r.projective(1)]);
        let b = right_approximation(&r, &p2, &[r.projective(0)], true);
        assert!(b.objects.is_empty());
    }

    #[test]
    fn greedy_drops_redundant_copies() {
        let r = reg("a2");
        let p1 = r.object(r.projective(0));
        // P_1 itself: the identity suffices, the copy of P_2 is redundant
        let class = [r.projective(0), r.projective(1)];
        let full = right_approximation(&r, &p1, &class, false);
        assert_eq!(full.objects.len(), 2);
        let min = right_approximation(&r, &p1, &class, true);
        assert_eq!(min.objects, [r.projective(0)]);
        assert!(is_approximation(&r, &p1, &class, &min));
        let left = left_approximation(&r, &p1, &class, true);
        assert_eq!(left.objects, [r.projective(0)]);
    }
}
