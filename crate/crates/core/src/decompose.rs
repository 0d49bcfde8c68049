//! Krull-Schmidt machinery: endomorphism algebras, radicals, primitive
//! idempotents, splitting of summands, and the registry of indecomposables.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Algebra;
use crate::complex::{hom_space, hom_window, minimize, shift, AMat, ChainMap, Complex, HomSpace};
use crate::field::{Field, Scalar};
use crate::linalg::{axpy, is_zero_vec, unit_vec, zero_vec, EchelonBasis, Matrix, Vector};
use crate::poly::{coprime_split, ext_gcd, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("the semisimple quotient of an endomorphism algebra does not split over {0}; rerun with another prime")]
    FieldTooSmall(Field),
    #[error("radical not computable by the trace form over {0} (characteristic too small for dimension {1})")]
    RadicalUnavailable(Field, usize),
    #[error("idempotent lifting did not converge")]
    LiftFailed,
}

/// Finite-dimensional associative algebra given by structure constants.
#[derive(Clone, Debug)]
pub struct FdAlgebra {
    pub field: Field,
    pub dim: usize,
    mult: Vec<Vec<Vector>>,
    pub one: Vector,
}

impl FdAlgebra {
    pub fn new(field: Field, mult: Vec<Vec<Vector>>, one: Vector) -> FdAlgebra {
        FdAlgebra { field, dim: one.len(), mult, one }
    }

    pub fn basis(&self, i: usize) -> Vector {
        unit_vec(self.field, self.dim, i)
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.field, self.dim);
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                axpy(&mut out, &(x * y), &self.mult[i][j]);
            }
        }
        out
    }

    /// Left multiplication by `a` as a matrix on the basis.
    pub fn left_matrix(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul(a, &self.basis(j))).collect();
        Matrix::from_columns(self.field, &cols, self.dim)
    }
}

/// `End_K(C)` with multiplication `x·y = x ∘ y` on homotopy classes.
pub fn endo_algebra(alg: &Algebra, c: &Complex) -> (FdAlgebra, HomSpace) {
    let h = hom_space(alg, c, c);
    let reps = h.basis_maps(alg);
    let mult = reps
        .iter()
        .map(|x| reps.iter().map(|y| h.coords(alg, &x.compose(alg, y))).collect())
        .collect();
    let one = if c.is_zero() { Vec::new() } else { h.coords(alg, &ChainMap::identity(alg, c)) };
    (FdAlgebra::new(alg.field(), mult, one), h)
}

/// Basis of the Jacobson radical: the kernel of the trace form, checked to be
/// nilpotent.
pub fn radical(e: &FdAlgebra) -> Result<Vec<Vector>, DecomposeError> {
    let f = e.field;
    let n = e.dim;
    if n == 0 {
        return Ok(Vec::new());
    }
    let ls: Vec<Matrix> = (0..n).map(|i| e.left_matrix(&e.basis(i))).collect();
    let mut t = Matrix::zeros(f, n, n);
    for i in 0..n {
        for j in i..n {
            let mut tr = f.zero();
            for k in 0..n {
                for l in 0..n {
                    let a = ls[i].get(k, l);
                    if !a.is_zero() {
                        tr += &(a * ls[j].get(l, k));
                    }
                }
            }
            t.set(i, j, tr.clone());
            t.set(j, i, tr);
        }
    }
    let rad = t.nullspace();
    // nilpotency: R^k must shrink to zero
    let mut power = rad.clone();
    let mut rank = power.len();
    while rank > 0 {
        let mut eb = EchelonBasis::new(f, n);
        let mut next = Vec::new();
        for x in &power {
            for y in &rad {
                let p = e.mul(x, y);
                if eb.insert(&p) {
                    next.push(p);
                }
            }
        }
        if next.len() >= rank {
            return Err(DecomposeError::RadicalUnavailable(f, n));
        }
        rank = next.len();
        power = next;
    }
    Ok(rad)
}

struct Splitter<'a> {
    e: &'a FdAlgebra,
    rad: EchelonBasis,
    rng: ChaCha8Rng,
}

impl Splitter<'_> {
    fn quotient_dim(&self, f: &[Scalar]) -> usize {
        let mut eb = EchelonBasis::new(self.e.field, self.e.dim);
        let mut d = 0;
        for i in 0..self.e.dim {
            let x = self.e.mul(&self.e.mul(f, &self.e.basis(i)), f);
            if eb.insert(&self.rad.residual(&x)) {
                d += 1;
            }
        }
        d
    }

    fn min_poly(&self, f: &[Scalar], x: &[Scalar]) -> Poly {
        let fld = self.e.field;
        let mut eb = EchelonBasis::new(fld, self.e.dim);
        let mut p = f.to_vec();
        let mut k = 0;
        loop {
            let r = self.rad.residual(&p);
            if let Some(c) = eb.coordinates(&r) {
                let mut coeffs: Vec<Scalar> = c.iter().map(|v| -v).collect();
                coeffs.truncate(k);
                while coeffs.len() < k {
                    coeffs.push(fld.zero());
                }
                coeffs.push(fld.one());
                return Poly::new(fld, coeffs);
            }
            eb.insert(&r);
            p = self.e.mul(&p, x);
            k += 1;
        }
    }

    fn eval(&self, poly: &Poly, f: &[Scalar], x: &[Scalar]) -> Vector {
        let mut acc = zero_vec(self.e.field, self.e.dim);
        for c in poly.coeffs.iter().rev() {
            acc = self.e.mul(&acc, x);
            axpy(&mut acc, c, f);
        }
        acc
    }

    fn lift(&self, mut e: Vector) -> Result<Vector, DecomposeError> {
        let fld = self.e.field;
        for _ in 0..64 {
            let e2 = self.e.mul(&e, &e);
            if e2 == e {
                return Ok(e);
            }
            let e3 = self.e.mul(&e2, &e);
            let mut next = zero_vec(fld, self.e.dim);
            axpy(&mut next, &fld.from_i64(3), &e2);
            axpy(&mut next, &fld.from_i64(-2), &e3);
            e = next;
        }
        Err(DecomposeError::LiftFailed)
    }

    fn random_element(&mut self, f: &[Scalar]) -> Vector {
        let fld = self.e.field;
        let mut x = zero_vec(fld, self.e.dim);
        for i in 0..self.e.dim {
            let c = match fld {
                Field::Prime(p) => fld.from_i64(self.rng.gen_range(0..p as i64)),
                Field::Rational => fld.from_i64(self.rng.gen_range(-3..=3)),
            };
            x[i] = c;
        }
        self.e.mul(&self.e.mul(f, &x), f)
    }

    fn split(&mut self, f: Vector, out: &mut Vec<Vector>) -> Result<(), DecomposeError> {
        if self.quotient_dim(&f) <= 1 {
            out.push(f);
            return Ok(());
        }
        let n = self.e.dim;
        for trial in 0..n + 64 {
            let x = if trial < n {
                self.e.mul(&self.e.mul(&f, &self.e.basis(trial)), &f)
            } else {
                self.random_element(&f)
            };
            let m = self.min_poly(&f, &x);
            let Some((g, h)) = coprime_split(&m) else { continue };
            // e(t) ≡ 1 mod g, ≡ 0 mod h
            let (_, _, v) = ext_gcd(&g, &h);
            let et = v.mul(&h).rem(&m);
            let approx = self.eval(&et, &f, &x);
            let e1 = self.lift(approx)?;
            let mut e2 = f.clone();
            axpy(&mut e2, &self.e.field.from_i64(-1), &e1);
            if is_zero_vec(&e1) || is_zero_vec(&e2) {
                continue;
            }
            self.split(e1, out)?;
            self.split(e2, out)?;
            return Ok(());
        }
        Err(DecomposeError::FieldTooSmall(self.e.field))
    }
}

/// Complete set of orthogonal primitive idempotents summing to one.
pub fn primitive_idempotents(e: &FdAlgebra) -> Result<Vec<Vector>, DecomposeError> {
    if e.dim == 0 {
        return Ok(Vec::new());
    }
    let rad_basis = radical(e)?;
    let mut rad = EchelonBasis::new(e.field, e.dim);
    for r in &rad_basis {
        rad.insert(r);
    }
    let mut s = Splitter { e, rad, rng: ChaCha8Rng::seed_from_u64(0x1d3e) };
    let mut out = Vec::new();
    s.split(e.one.clone(), &mut out)?;
    Ok(out)
}

fn chain_eq(alg: &Algebra, c: &Complex, a: &ChainMap, b: &ChainMap) -> bool {
    (c.lo..=c.hi()).all(|n| a.component(alg, c, c, n) == b.component(alg, c, c, n))
}

/// Scalar part of a matrix between sums of projectives.
fn scalar_part(alg: &Algebra, m: &AMat, rows: &[usize], cols: &[usize]) -> Matrix {
    let mut s = Matrix::zeros(alg.field(), m.rows, m.cols);
    for r in 0..m.rows {
        for c in 0..m.cols {
            if rows[r] == cols[c] {
                s.set(r, c, m.at(r, c)[rows[r]].clone());
            }
        }
    }
    s
}

/// Whether a chain endomorphism of a minimal complex is invertible.
pub fn is_unit_endo(alg: &Algebra, c: &Complex, f: &ChainMap) -> bool {
    (c.lo..=c.hi()).all(|n| {
        let t = c.term(n);
        t.is_empty() || scalar_part(alg, &f.component(alg, c, c, n), t, t).rank() == t.len()
    })
}

/// The summand of a minimal complex cut out by an idempotent of `End_K(C)`
/// given in the coordinates of `hom`.
pub fn split_summand(alg: &Algebra, c: &Complex, hom: &HomSpace, e: &[Scalar]) -> Result<Complex, DecomposeError> {
    let fld = alg.field();
    let mut em = hom.map_of(alg, e);
    let mut converged = false;
    for _ in 0..64 {
        let e2 = em.compose(alg, &em);
        if chain_eq(alg, c, &e2, &em) {
            converged = true;
            break;
        }
        let e3 = e2.compose(alg, &em);
        em = e2.scale(&fld.from_i64(3)).add(&e3.scale(&fld.from_i64(-2)));
    }
    if !converged {
        return Err(DecomposeError::LiftFailed);
    }
    let mut incl = Vec::new();
    let mut proj = Vec::new();
    let mut terms = Vec::new();
    for n in c.lo..=c.hi() {
        let t = c.term(n);
        let en = em.component(alg, c, c, n);
        let sc = scalar_part(alg, &en, t, t);
        let (_, cols) = sc.rref();
        let sub = Matrix::from_columns(fld, &cols.iter().map(|&j| sc.column(j)).collect::<Vec<_>>(), t.len());
        let (_, rows) = sub.transpose().rref();
        let all: Vec<usize> = (0..t.len()).collect();
        let g = en.select(&rows, &cols);
        let rv: Vec<usize> = rows.iter().map(|&r| t[r]).collect();
        let cv: Vec<usize> = cols.iter().map(|&s| t[s]).collect();
        let ginv = g.inverse_mod_radical(alg, &rv, &cv).ok_or(DecomposeError::LiftFailed)?;
        incl.push(en.select(&all, &cols));
        proj.push(ginv.mul(alg, &en.select(&rows, &all)));
        terms.push(cv);
    }
    let mut diffs = Vec::new();
    for k in 0..c.diffs.len() {
        diffs.push(proj[k + 1].mul(alg, &c.diffs[k].mul(alg, &incl[k])));
    }
    Ok(minimize(alg, &Complex { lo: c.lo, terms, diffs }.trimmed()))
}

/// Splits a complex along the connected components of its differential.
pub fn components(c: &Complex) -> Vec<Complex> {
    if c.is_zero() {
        return Vec::new();
    }
    let mut offsets = vec![0];
    for t in &c.terms {
        offsets.push(offsets.last().unwrap() + t.len());
    }
    let total = *offsets.last().unwrap();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (k, d) in c.diffs.iter().enumerate() {
        for t in 0..d.rows {
            for s in 0..d.cols {
                if !is_zero_vec(d.at(t, s)) {
                    let a = find(&mut parent, offsets[k] + s);
                    let b = find(&mut parent, offsets[k + 1] + t);
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    for x in 0..total {
        let r = find(&mut parent, x);
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    roots
        .into_iter()
        .map(|r| {
            let sel: Vec<Vec<usize>> = (0..c.terms.len())
                .map(|k| (0..c.terms[k].len()).filter(|&i| find(&mut parent, offsets[k] + i) == r).collect())
                .collect();
            let terms = sel.iter().enumerate().map(|(k, s)| s.iter().map(|&i| c.terms[k][i]).collect()).collect();
            let diffs = c.diffs.iter().enumerate().map(|(k, d)| d.select(&sel[k + 1], &sel[k])).collect();
            Complex { lo: c.lo, terms, diffs }.trimmed()
        })
        .collect()
}

/// Indecomposable summands of `C` (minimal, unregistered).
pub fn decompose_complex(alg: &Algebra, c: &Complex) -> Result<Vec<Complex>, DecomposeError> {
    let m = minimize(alg, c);
    let mut out = Vec::new();
    for comp in components(&m) {
        if comp.size() == 1 {
            out.push(comp);
            continue;
        }
        let (e, hom) = endo_algebra(alg, &comp);
        let idems = primitive_idempotents(&e)?;
        if idems.len() == 1 {
            out.push(comp);
            continue;
        }
        for i in &idems {
            let s = split_summand(alg, &comp, &hom, i)?;
            // a primitive idempotent can still leave a decomposable block when
            // components merge after the change of basis, so recurse
            if components(&s).len() > 1 {
                out.extend(decompose_complex(alg, &s)?);
            } else {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Isomorphism of minimal indecomposable complexes: some composite
/// `C -> D -> C` is invertible.
pub fn are_isomorphic_indec(alg: &Algebra, c: &Complex, d: &Complex) -> bool {
    let nv = alg.n_vertices();
    if c.graded_dims(nv) != d.graded_dims(nv) {
        return false;
    }
    if c == d {
        return true;
    }
    let h1 = hom_space(alg, c, d);
    if h1.is_zero() {
        return false;
    }
    let h2 = hom_space(alg, d, c);
    let fs = h1.basis_maps(alg);
    let gs = h2.basis_maps(alg);
    for f in &fs {
        for g in &gs {
            if is_unit_endo(alg, c, &g.compose(alg, f)) {
                return true;
            }
        }
    }
    false
}

/// A registered indecomposable: `base[shift]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjId {
    pub base: usize,
    pub shift: i32,
}

impl ObjId {
    pub fn shifted(self, k: i32) -> ObjId {
        ObjId { base: self.base, shift: self.shift + k }
    }
}

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.base, self.shift)
    }
}

/// Homotopy classes between registered objects, backed by a shared cache.
#[derive(Clone)]
pub struct HomView {
    space: Arc<HomSpace>,
    src_shift: i32,
}

impl HomView {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_zero()
    }

    pub fn class_map(&self, alg: &Algebra, k: usize) -> ChainMap {
        self.space.class_map(alg, k).shifted(self.src_shift)
    }

    pub fn basis_maps(&self, alg: &Algebra) -> Vec<ChainMap> {
        (0..self.dim()).map(|k| self.class_map(alg, k)).collect()
    }

    pub fn coords(&self, alg: &Algebra, f: &ChainMap) -> Vector {
        self.space.coords(alg, &f.shifted(-self.src_shift))
    }
}

type Key = Vec<(i32, Vec<usize>)>;

#[derive(Default)]
struct Inner {
    bases: Vec<Arc<Complex>>,
    buckets: HashMap<Key, Vec<usize>>,
}

/// Shift-normalized minimal indecomposables, deduplicated up to isomorphism.
pub struct Registry {
    alg: Arc<Algebra>,
    inner: Mutex<Inner>,
    homs: Mutex<HashMap<(usize, usize, i32), Arc<HomSpace>>>,
}

impl Registry {
    pub fn new(alg: Arc<Algebra>) -> Registry {
        let r = Registry { alg, inner: Mutex::new(Inner::default()), homs: Mutex::new(HashMap::new()) };
        // stalk projectives first so that their ids are the vertex indices
        for v in 0..r.alg.n_vertices() {
            r.register(&Complex::projective(v));
        }
        r
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap().bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Registers a minimal indecomposable complex.
    pub fn register(&self, c: &Complex) -> ObjId {
        assert!(!c.is_zero(), "cannot register the zero complex");
        let base = shift(c, c.lo);
        let id_shift = -c.lo;
        let key = base.graded_dims(self.alg.n_vertices());
        let mut inner = self.inner.lock().unwrap();
        if let Some(bucket) = inner.buckets.get(&key) {
            for &b in bucket {
                if are_isomorphic_indec(&self.alg, &inner.bases[b], &base) {
                    return ObjId { base: b, shift: id_shift };
                }
            }
        }
        let idx = inner.bases.len();
        inner.bases.push(Arc::new(base));
        inner.buckets.entry(key).or_default().push(idx);
        ObjId { base: idx, shift: id_shift }
    }

    pub fn base(&self, b: usize) -> Arc<Complex> {
        self.inner.lock().unwrap().bases[b].clone()
    }

    pub fn object(&self, id: ObjId) -> Complex {
        shift(&self.base(id.base), id.shift)
    }

    pub fn projective(&self, v: usize) -> ObjId {
        ObjId { base: v, shift: 0 }
    }

    pub fn regular(&self) -> Vec<ObjId> {
        (0..self.alg.n_vertices()).map(|v| self.projective(v)).collect()
    }

    pub fn label(&self, id: ObjId) -> String {
        let head = if id.base < self.alg.n_vertices() {
            format!("P{}", self.alg.vertex_label(id.base))
        } else {
            format!("C{}", id.base)
        };
        if id.shift == 0 {
            head
        } else {
            format!("{head}[{}]", id.shift)
        }
    }

    pub fn k0_class(&self, id: ObjId) -> Vec<i64> {
        let c = self.base(id.base).k0_class(self.alg.n_vertices());
        let sign = if id.shift.rem_euclid(2) == 0 { 1 } else { -1 };
        c.into_iter().map(|x| sign * x).collect()
    }

    /// `Hom_K(a, b[i])`.
    pub fn hom(&self, a: ObjId, b: ObjId, i: i32) -> HomView {
        let k = b.shift + i - a.shift;
        let key = (a.base, b.base, k);
        if let Some(s) = self.homs.lock().unwrap().get(&key) {
            return HomView { space: s.clone(), src_shift: a.shift };
        }
        let (ca, cb) = (self.base(a.base), self.base(b.base));
        let space = Arc::new(hom_space(&self.alg, &ca, &shift(&cb, k)));
        self.homs.lock().unwrap().insert(key, space.clone());
        HomView { space, src_shift: a.shift }
    }

    /// The interval of shifts `i` where `Hom(a, b[i])` may be nonzero.
    pub fn window(&self, a: ObjId, b: ObjId) -> Option<(i32, i32)> {
        hom_window(&self.object(a), &self.object(b))
    }

    pub fn hom_dim(&self, a: ObjId, b: ObjId, i: i32) -> usize {
        match self.window(a, b) {
            Some((lo, hi)) if i >= lo && i <= hi => self.hom(a, b, i).dim(),
            _ => 0,
        }
    }

    /// Indecomposable summands of an arbitrary complex, registered, sorted.
    pub fn decompose(&self, c: &Complex) -> Result<Vec<ObjId>, DecomposeError> {
        let mut ids: Vec<ObjId> = decompose_complex(&self.alg, c)?.iter().map(|s| self.register(s)).collect();
        ids.sort();
        Ok(ids)
    }

    /// Isomorphism of arbitrary complexes via their decompositions.
    pub fn are_isomorphic(&self, c: &Complex, d: &Complex) -> Result<bool, DecomposeError> {
        Ok(self.decompose(c)? == self.decompose(d)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, Presentation};
    use crate::complex::{cone, direct_sum, hom_space};

    fn build(name: &str) -> Arc<Algebra> {
        Arc::new(build_algebra(&Presentation::builtin(name, Field::default()).unwrap()).unwrap())
    }

    #[test]
    fn endo_dimensions() {
        let a = build("a2");
        let (e, _) = endo_algebra(&a, &Complex::regular(&a));
        assert_eq!(e.dim, 3);
        let (e, _) = endo_algebra(&a, &Complex::zero());
        assert_eq!(e.dim, 0);
        let d = build("dual-numbers");
        let (e, _) = endo_algebra(&d, &Complex::projective(0));
        assert_eq!(e.dim, 2);
        assert_eq!(radical(&e).unwrap().len(), 1);
    }

    #[test]
    fn radical_of_semisimple_and_field() {
        let f = Field::default();
        // 2x2 matrices with basis E11, E12, E21, E22
        let idx = |i: usize, j: usize| 2 * i + j;
        let mut mult = vec![vec![zero_vec(f, 4); 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    mult[idx(i, j)][idx(j, k)] = unit_vec(f, 4, idx(i, k));
                }
            }
        }
        let mut one = zero_vec(f, 4);
        one[0] = f.one();
        one[3] = f.one();
        let m2 = FdAlgebra::new(f, mult, one);
        assert!(radical(&m2).unwrap().is_empty());
        let idems = primitive_idempotents(&m2).unwrap();
        assert_eq!(idems.len(), 2);
        let k = FdAlgebra::new(f, vec![vec![unit_vec(f, 1, 0)]], unit_vec(f, 1, 0));
        assert!(radical(&k).unwrap().is_empty());
        assert_eq!(primitive_idempotents(&k).unwrap().len(), 1);
    }

    #[test]
    fn idempotents_of_regular_a2() {
        let a = build("a2");
        let c = Complex::regular(&a);
        let (e, h) = endo_algebra(&a, &c);
        let idems = primitive_idempotents(&e).unwrap();
        assert_eq!(idems.len(), 2);
        let mut sum = zero_vec(e.field, e.dim);
        for i in &idems {
            assert_eq!(&e.mul(i, i), i);
            axpy(&mut sum, &e.field.one(), i);
        }
        assert_eq!(sum, e.one);
        assert!(is_zero_vec(&e.mul(&idems[0], &idems[1])));
        let mut parts: Vec<Complex> = idems.iter().map(|i| split_summand(&a, &c, &h, i).unwrap()).collect();
        parts.sort_by_key(|p| p.terms.clone());
        assert_eq!(parts, [Complex::projective(0), Complex::projective(1)]);
    }

    #[test]
    fn split_cone_of_non_minimal_map() {
        // cone of (a, 0)^t: P_2 -> P_1 ⊕ P_2 splits as S̃_1 ⊕ P_2
        let a = build("a2");
        let p2 = Complex::projective(1);
        let tgt = Complex::stalk(vec![0, 1], 0);
        let mut m = AMat::zero(&a, 2, 1);
        *m.at_mut(0, 0) = a.basis_elem(2);
        let f = ChainMap { blocks: [(0, m)].into_iter().collect() };
        f.check(&a, &p2, &tgt).unwrap();
        let cn = cone(&a, &f, &p2, &tgt);
        let parts = decompose_complex(&a, &cn).unwrap();
        assert_eq!(parts.len(), 2);
        let reg = Registry::new(a.clone());
        let ids = reg.decompose(&cn).unwrap();
        assert!(ids.contains(&reg.projective(1)));
        let other = ids.iter().find(|i| **i != reg.projective(1)).unwrap();
        assert_eq!(reg.object(*other).terms, [vec![1], vec![0]]);
    }

    #[test]
    fn decompose_and_iso() {
        let a = build("a2");
        let reg = Registry::new(a.clone());
        let c = Complex::stalk(vec![0, 0, 1], 0);
        let ids = reg.decompose(&c).unwrap();
        assert_eq!(ids, [reg.projective(0), reg.projective(0), reg.projective(1)]);
        assert!(reg.decompose(&Complex::zero()).unwrap().is_empty());
        // S̃_1 plus a contractible piece
        let p2 = Complex::projective(1);
        let p1 = Complex::projective(0);
        let h = hom_space(&a, &p2, &p1);
        let s1 = cone(&a, &h.class_map(&a, 0), &p2, &p1);
        let junk = cone(&a, &ChainMap::identity(&a, &p1), &p1, &p1);
        let big = direct_sum(&a, &[&s1, &junk]);
        assert!(reg.are_isomorphic(&big, &s1).unwrap());
        assert!(!are_isomorphic_indec(&a, &p1, &p2));
        let x = reg.register(&s1);
        let y = reg.register(&shift(&s1, 3));
        assert_eq!(x.base, y.base);
        assert_eq!(y.shift, x.shift + 3);
        assert_eq!(reg.object(y), shift(&s1, 3));
    }

    #[test]
    fn ab0_cones_indecomposable() {
        let a = build("ab0");
        let p1 = Complex::projective(0);
        let p2 = Complex::projective(1);
        let h = hom_space(&a, &p1, &p2);
        let x = cone(&a, &h.class_map(&a, 0), &p1, &p2);
        assert_eq!(decompose_complex(&a, &x).unwrap().len(), 1);
        let (e, _) = endo_algebra(&a, &Complex::regular(&a));
        assert_eq!(e.dim, 4);
        assert_eq!(primitive_idempotents(&e).unwrap().len(), 2);
    }
}
