//! Bounded complexes of finitely generated projectives and the homotopy
//! category.
//!
//! Indexing is cohomological. A term is a list of vertices (one `P_v` per
//! entry); the differential `d^n: C^n -> C^{n+1}` is a matrix whose entry
//! `[t][s]` lies in `e_{C^{n+1}_t} A e_{C^n_s}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Elem};
use crate::field::{Scalar, ScalarRepr};
use crate::linalg::{axpy, is_zero_vec, zero_vec, EchelonBasis, Matrix, Vector};

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("malformed complex: {0}")]
    Malformed(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Matrix with algebra-element entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Elem>,
}

impl AMat {
    pub fn zero(alg: &Algebra, rows: usize, cols: usize) -> AMat {
        AMat { rows, cols, data: vec![alg.zero(); rows * cols] }
    }

    pub fn identity(alg: &Algebra, vertices: &[usize]) -> AMat {
        let n = vertices.len();
        let mut m = AMat::zero(alg, n, n);
        for (i, &v) in vertices.iter().enumerate() {
            *m.at_mut(i, i) = alg.idempotent(v);
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> &Elem {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Elem {
        &mut self.data[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| is_zero_vec(x))
    }

    pub fn mul(&self, alg: &Algebra, other: &AMat) -> AMat {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = AMat::zero(alg, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if is_zero_vec(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if is_zero_vec(b) {
                        continue;
                    }
                    let p = alg.mul(a, b);
                    for (x, y) in out.at_mut(i, j).iter_mut().zip(&p) {
                        *x += y;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &AMat) -> AMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        AMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Scalar) -> AMat {
        let data = self.data.iter().map(|a| a.iter().map(|x| x * c).collect()).collect();
        AMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> AMat {
        let data = self.data.iter().map(|a| a.iter().map(|x| -x).collect()).collect();
        AMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> AMat {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                data.push(self.at(r, c).clone());
            }
        }
        AMat { rows: rows.len(), cols: cols.len(), data }
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn blocks(alg: &Algebra, a: &AMat, b: &AMat, c: &AMat, d: &AMat) -> AMat {
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut m = AMat::zero(alg, rows, cols);
        let place = |m: &mut AMat, x: &AMat, r0: usize, c0: usize| {
            for i in 0..x.rows {
                for j in 0..x.cols {
                    *m.at_mut(r0 + i, c0 + j) = x.at(i, j).clone();
                }
            }
        };
        place(&mut m, a, 0, 0);
        place(&mut m, b, 0, a.cols);
        place(&mut m, c, a.rows, 0);
        place(&mut m, d, a.rows, a.cols);
        m
    }

    /// Inverse of a matrix between sums of projectives that is invertible
    /// modulo the radical. `rows` and `cols` are the target and source
    /// vertex lists.
    pub fn inverse_mod_radical(&self, alg: &Algebra, rows: &[usize], cols: &[usize]) -> Option<AMat> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let f = alg.field();
        // scalar part: coefficients of idempotents on same-vertex entries
        let mut g0 = Matrix::zeros(f, n, n);
        for r in 0..n {
            for c in 0..n {
                if rows[r] == cols[c] {
                    g0.set(r, c, self.at(r, c)[rows[r]].clone());
                }
            }
        }
        let g0inv = g0.inverse()?;
        let lift = |m: &Matrix, rv: &[usize]| -> AMat {
            let mut out = AMat::zero(alg, m.rows(), m.cols());
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    if !m.get(r, c).is_zero() {
                        out.at_mut(r, c)[rv[r]] = m.get(r, c).clone();
                    }
                }
            }
            out
        };
        // G0^{-1} maps rows-vertices to cols-vertices
        let g0inv_a = lift(&g0inv, cols);
        let g0_a = lift(&g0, rows);
        // N = G0^{-1}(G0 - G) is radical, G^{-1} = (sum N^k) G0^{-1}
        let nmat = g0inv_a.mul(alg, &g0_a.add(&self.neg()));
        let mut acc = AMat::identity(alg, cols);
        let mut term = AMat::identity(alg, cols);
        for _ in 0..=alg.presentation.path_length_cap * n.max(1) {
            term = term.mul(alg, &nmat);
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        Some(acc.mul(alg, &g0inv_a))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Complex {
    pub lo: i32,
    pub terms: Vec<Vec<usize>>,
    /// `diffs[k]` goes from degree `lo + k` to `lo + k + 1`.
    pub diffs: Vec<AMat>,
}

impl Complex {
    pub fn zero() -> Complex {
        Complex { lo: 0, terms: Vec::new(), diffs: Vec::new() }
    }

    pub fn stalk(vertices: Vec<usize>, degree: i32) -> Complex {
        Complex { lo: degree, terms: vec![vertices], diffs: Vec::new() }.trimmed()
    }

    pub fn projective(v: usize) -> Complex {
        Complex::stalk(vec![v], 0)
    }

    /// The regular module `A` as a stalk complex in degree 0.
    pub fn regular(alg: &Algebra) -> Complex {
        Complex::stalk((0..alg.n_vertices()).collect(), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(Vec::is_empty)
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    pub fn width(&self) -> usize {
        self.terms.len()
    }

    pub fn term(&self, n: i32) -> &[usize] {
        if n < self.lo || n > self.hi() {
            return &[];
        }
        &self.terms[(n - self.lo) as usize]
    }

    pub fn diff(&self, alg: &Algebra, n: i32) -> AMat {
        if n >= self.lo && n < self.hi() {
            self.diffs[(n - self.lo) as usize].clone()
        } else {
            AMat::zero(alg, self.term(n + 1).len(), self.term(n).len())
        }
    }

    fn diff_ref(&self, n: i32) -> Option<&AMat> {
        if n >= self.lo && n < self.hi() {
            Some(&self.diffs[(n - self.lo) as usize])
        } else {
            None
        }
    }

    /// Drops empty terms at both ends; the zero complex gets `lo = 0`.
    pub fn trimmed(mut self) -> Complex {
        while self.terms.first().is_some_and(Vec::is_empty) {
            self.terms.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.lo += 1;
        }
        while self.terms.last().is_some_and(Vec::is_empty) {
            self.terms.pop();
            self.diffs.pop();
        }
        if self.terms.is_empty() {
            return Complex::zero();
        }
        self
    }

    /// Per-degree vertex multiplicities, from `lo` to `hi`.
    pub fn graded_dims(&self, n_vertices: usize) -> Vec<(i32, Vec<usize>)> {
        self.terms
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let mut m = vec![0; n_vertices];
                for &v in t {
                    m[v] += 1;
                }
                (self.lo + k as i32, m)
            })
            .collect()
    }

    /// Euler characteristic of vertex multiplicities: the class in `K_0`.
    pub fn k0_class(&self, n_vertices: usize) -> Vec<i64> {
        let mut c = vec![0i64; n_vertices];
        for (n, dims) in self.graded_dims(n_vertices) {
            let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
            for (ci, d) in c.iter_mut().zip(dims) {
                *ci += sign * d as i64;
            }
        }
        c
    }

    pub fn check(&self, alg: &Algebra) -> Result<(), ComplexError> {
        let nv = alg.n_vertices();
        if self.diffs.len() + 1 != self.terms.len() && !(self.terms.is_empty() && self.diffs.is_empty()) {
            return Err(ComplexError::Malformed("number of differentials does not match the terms".into()));
        }
        for t in &self.terms {
            if t.iter().any(|&v| v >= nv) {
                return Err(ComplexError::Malformed("term uses an unknown vertex".into()));
            }
        }
        for (k, d) in self.diffs.iter().enumerate() {
            let (src, dst) = (&self.terms[k], &self.terms[k + 1]);
            if d.rows != dst.len() || d.cols != src.len() {
                return Err(ComplexError::Malformed(format!("differential {} has the wrong shape", self.lo + k as i32)));
            }
            for (t, &j) in dst.iter().enumerate() {
                for (s, &i) in src.iter().enumerate() {
                    let x = d.at(t, s);
                    let blk = alg.block(j, i);
                    if x.iter().enumerate().any(|(b, c)| !c.is_zero() && !blk.contains(&b)) {
                        return Err(ComplexError::Malformed(format!(
                            "entry ({t},{s}) of differential {} leaves its block",
                            self.lo + k as i32
                        )));
                    }
                }
            }
        }
        for k in 1..self.diffs.len() {
            if !self.diffs[k].mul(alg, &self.diffs[k - 1]).is_zero() {
                return Err(ComplexError::Malformed(format!("d∘d ≠ 0 at degree {}", self.lo + k as i32 - 1)));
            }
        }
        Ok(())
    }

    pub fn is_minimal(&self, alg: &Algebra) -> bool {
        self.diffs.iter().all(|d| d.data.iter().all(|x| alg.in_radical(x)))
    }

    /// Total number of indecomposable projective terms.
    pub fn size(&self) -> usize {
        self.terms.iter().map(Vec::len).sum()
    }
}

/// `C[n]`: degrees move down by `n`, differentials pick up `(-1)^n`.
pub fn shift(c: &Complex, n: i32) -> Complex {
    if c.is_zero() {
        return Complex::zero();
    }
    let diffs = if n.rem_euclid(2) == 0 { c.diffs.clone() } else { c.diffs.iter().map(AMat::neg).collect() };
    Complex { lo: c.lo - n, terms: c.terms.clone(), diffs }
}

/// Degree-zero chain map; components missing from the map are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub blocks: BTreeMap<i32, AMat>,
}

impl ChainMap {
    pub fn zero() -> ChainMap {
        ChainMap { blocks: BTreeMap::new() }
    }

    pub fn identity(alg: &Algebra, c: &Complex) -> ChainMap {
        let blocks = (c.lo..=c.hi())
            .filter(|&n| !c.term(n).is_empty())
            .map(|n| (n, AMat::identity(alg, c.term(n))))
            .collect();
        ChainMap { blocks }
    }

    pub fn component(&self, alg: &Algebra, src: &Complex, dst: &Complex, n: i32) -> AMat {
        match self.blocks.get(&n) {
            Some(m) => m.clone(),
            None => AMat::zero(alg, dst.term(n).len(), src.term(n).len()),
        }
    }

    /// `self ∘ other`
    pub fn compose(&self, alg: &Algebra, other: &ChainMap) -> ChainMap {
        let mut blocks = BTreeMap::new();
        for (n, b) in &self.blocks {
            if let Some(a) = other.blocks.get(n) {
                let m = b.mul(alg, a);
                if !m.is_zero() {
                    blocks.insert(*n, m);
                }
            }
        }
        ChainMap { blocks }
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        let mut blocks = self.blocks.clone();
        for (n, b) in &other.blocks {
            let m = match blocks.get(n) {
                Some(a) => a.add(b),
                None => b.clone(),
            };
            blocks.insert(*n, m);
        }
        ChainMap { blocks }
    }

    pub fn scale(&self, c: &Scalar) -> ChainMap {
        ChainMap { blocks: self.blocks.iter().map(|(n, b)| (*n, b.scale(c))).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(AMat::is_zero)
    }

    /// The same components read as a map `C[k] -> D[k]` (signs follow the
    /// shift convention so that the result is again a chain map).
    pub fn shifted(&self, k: i32) -> ChainMap {
        ChainMap { blocks: self.blocks.iter().map(|(n, b)| (n - k, b.clone())).collect() }
    }

    pub fn check(&self, alg: &Algebra, src: &Complex, dst: &Complex) -> Result<(), ComplexError> {
        let lo = src.lo.min(dst.lo) - 1;
        let hi = src.hi().max(dst.hi()) + 1;
        for n in lo..=hi {
            let lhs = dst.diff(alg, n).mul(alg, &self.component(alg, src, dst, n));
            let rhs = self.component(alg, src, dst, n + 1).mul(alg, &src.diff(alg, n));
            if lhs != rhs {
                return Err(ComplexError::NotChainMap(format!("square at degree {n} does not commute")));
            }
        }
        Ok(())
    }
}

/// Mapping cone: `C^{n+1} ⊕ D^n` with differential `[[-d_C, 0], [f, d_D]]`.
pub fn cone(alg: &Algebra, f: &ChainMap, c: &Complex, d: &Complex) -> Complex {
    if c.is_zero() {
        return d.clone();
    }
    if d.is_zero() {
        return shift(c, 1);
    }
    let lo = (c.lo - 1).min(d.lo);
    let hi = (c.hi() - 1).max(d.hi());
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for n in lo..=hi {
        let mut t = c.term(n + 1).to_vec();
        t.extend_from_slice(d.term(n));
        terms.push(t);
        if n < hi {
            let m = AMat::blocks(
                alg,
                &c.diff(alg, n + 1).neg(),
                &AMat::zero(alg, c.term(n + 2).len(), d.term(n).len()),
                &f.component(alg, c, d, n + 1),
                &d.diff(alg, n),
            );
            diffs.push(m);
        }
    }
    Complex { lo, terms, diffs }.trimmed()
}

/// `cone(f)[-1]`, sitting in the triangle `cocone -> C -> D`.
pub fn cocone(alg: &Algebra, f: &ChainMap, c: &Complex, d: &Complex) -> Complex {
    shift(&cone(alg, f, c, d), -1)
}

/// The canonical maps `D -> cone(f)` and `cone(f) -> C[1]`.
pub fn cone_maps(alg: &Algebra, f: &ChainMap, c: &Complex, d: &Complex) -> (Complex, ChainMap, ChainMap) {
    let cn = cone(alg, f, c, d);
    let mut inc = BTreeMap::new();
    let mut proj = BTreeMap::new();
    if !c.is_zero() && !d.is_zero() {
        for n in cn.lo..=cn.hi() {
            let a = c.term(n + 1).len();
            let b = d.term(n).len();
            let mut i = AMat::zero(alg, a + b, b);
            for k in 0..b {
                *i.at_mut(a + k, k) = alg.idempotent(d.term(n)[k]);
            }
            let mut p = AMat::zero(alg, a, a + b);
            for k in 0..a {
                *p.at_mut(k, k) = alg.idempotent(c.term(n + 1)[k]);
            }
            if b > 0 {
                inc.insert(n, i);
            }
            if a > 0 {
                proj.insert(n, p);
            }
        }
    } else if c.is_zero() {
        return (cn.clone(), ChainMap::identity(alg, d), ChainMap::zero());
    } else {
        return (cn.clone(), ChainMap::zero(), ChainMap::identity(alg, &cn));
    }
    (cn, ChainMap { blocks: inc }, ChainMap { blocks: proj })
}

/// Block-diagonal sum.
pub fn direct_sum(alg: &Algebra, parts: &[&Complex]) -> Complex {
    let parts: Vec<&Complex> = parts.iter().copied().filter(|c| !c.is_zero()).collect();
    if parts.is_empty() {
        return Complex::zero();
    }
    let lo = parts.iter().map(|c| c.lo).min().unwrap();
    let hi = parts.iter().map(|c| c.hi()).max().unwrap();
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for n in lo..=hi {
        terms.push(parts.iter().flat_map(|c| c.term(n).iter().copied()).collect::<Vec<_>>());
        if n < hi {
            let rows: usize = parts.iter().map(|c| c.term(n + 1).len()).sum();
            let cols: usize = parts.iter().map(|c| c.term(n).len()).sum();
            let mut m = AMat::zero(alg, rows, cols);
            let (mut r0, mut c0) = (0, 0);
            for c in &parts {
                if let Some(d) = c.diff_ref(n) {
                    for i in 0..d.rows {
                        for j in 0..d.cols {
                            *m.at_mut(r0 + i, c0 + j) = d.at(i, j).clone();
                        }
                    }
                }
                r0 += c.term(n + 1).len();
                c0 += c.term(n).len();
            }
            diffs.push(m);
        }
    }
    Complex { lo, terms, diffs }
}

/// Inclusion of and projection to the `k`-th part of a direct sum.
pub fn sum_injection(alg: &Algebra, parts: &[&Complex], k: usize) -> (ChainMap, ChainMap) {
    let lo = parts.iter().filter(|c| !c.is_zero()).map(|c| c.lo).min().unwrap_or(0);
    let hi = parts.iter().filter(|c| !c.is_zero()).map(|c| c.hi()).max().unwrap_or(-1);
    let mut inc = BTreeMap::new();
    let mut proj = BTreeMap::new();
    for n in lo..=hi {
        let total: usize = parts.iter().map(|c| c.term(n).len()).sum();
        let off: usize = parts[..k].iter().map(|c| c.term(n).len()).sum();
        let t = parts[k].term(n);
        if t.is_empty() {
            continue;
        }
        let mut i = AMat::zero(alg, total, t.len());
        let mut p = AMat::zero(alg, t.len(), total);
        for (j, &v) in t.iter().enumerate() {
            *i.at_mut(off + j, j) = alg.idempotent(v);
            *p.at_mut(j, off + j) = alg.idempotent(v);
        }
        inc.insert(n, i);
        proj.insert(n, p);
    }
    (ChainMap { blocks: inc }, ChainMap { blocks: proj })
}

/// `[lo_D - hi_C, hi_D - lo_C]`, outside of which `Hom(C, D[i])` vanishes.
pub fn hom_window(c: &Complex, d: &Complex) -> Option<(i32, i32)> {
    if c.is_zero() || d.is_zero() {
        return None;
    }
    Some((d.lo - c.hi(), d.hi() - c.lo))
}

#[derive(Clone, Debug)]
struct Var {
    degree: i32,
    row: usize,
    col: usize,
    basis: usize,
}

#[derive(Clone, Debug, Default)]
struct Layout {
    vars: Vec<Var>,
    index: BTreeMap<(i32, usize, usize), (usize, Vec<usize>)>,
}

impl Layout {
    /// Variables for maps `C^n -> D^{n + offset}` in every degree.
    fn new(alg: &Algebra, c: &Complex, d: &Complex, offset: i32) -> Layout {
        let mut l = Layout::default();
        if c.is_zero() || d.is_zero() {
            return l;
        }
        for n in c.lo..=c.hi() {
            let (src, dst) = (c.term(n), d.term(n + offset));
            for (t, &j) in dst.iter().enumerate() {
                for (s, &i) in src.iter().enumerate() {
                    let blk = alg.block(j, i).to_vec();
                    if blk.is_empty() {
                        continue;
                    }
                    l.index.insert((n, t, s), (l.vars.len(), blk.clone()));
                    for b in blk {
                        l.vars.push(Var { degree: n, row: t, col: s, basis: b });
                    }
                }
            }
        }
        l
    }

    fn len(&self) -> usize {
        self.vars.len()
    }

    fn to_map(&self, alg: &Algebra, c: &Complex, d: &Complex, v: &[Scalar]) -> ChainMap {
        let mut blocks: BTreeMap<i32, AMat> = BTreeMap::new();
        for (k, var) in self.vars.iter().enumerate() {
            if v[k].is_zero() {
                continue;
            }
            let m = blocks
                .entry(var.degree)
                .or_insert_with(|| AMat::zero(alg, d.term(var.degree).len(), c.term(var.degree).len()));
            m.at_mut(var.row, var.col)[var.basis] += &v[k];
        }
        ChainMap { blocks }
    }

    fn to_vec(&self, alg: &Algebra, f: &ChainMap) -> Vector {
        let mut v = zero_vec(alg.field(), self.len());
        for (n, m) in &f.blocks {
            for r in 0..m.rows {
                for c in 0..m.cols {
                    let x = m.at(r, c);
                    if let Some((off, blk)) = self.index.get(&(*n, r, c)) {
                        for (k, &b) in blk.iter().enumerate() {
                            v[off + k] = x[b].clone();
                        }
                    }
                }
            }
        }
        v
    }
}

/// `Hom_K(C, D)` for degree-zero maps: chain maps modulo null-homotopic ones.
/// For `Hom(C, D[i])` pass the shifted complex.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub src: Complex,
    pub dst: Complex,
    layout: Layout,
    classes: Vec<Vector>,
    echelon: EchelonBasis,
    class_slots: Vec<usize>,
    pub chain_dim: usize,
    pub null_dim: usize,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    pub fn is_zero(&self) -> bool {
        self.classes.is_empty()
    }

    /// Representative chain map of the `k`-th basis class.
    pub fn class_map(&self, alg: &Algebra, k: usize) -> ChainMap {
        self.layout.to_map(alg, &self.src, &self.dst, &self.classes[k])
    }

    pub fn basis_maps(&self, alg: &Algebra) -> Vec<ChainMap> {
        (0..self.dim()).map(|k| self.class_map(alg, k)).collect()
    }

    /// Coordinates of the class of the chain map `f` (assumed a chain map).
    pub fn coords(&self, alg: &Algebra, f: &ChainMap) -> Vector {
        let v = self.layout.to_vec(alg, f);
        let all = self.echelon.coordinates(&v).expect("map is not a chain map");
        self.class_slots.iter().map(|&i| all[i].clone()).collect()
    }

    pub fn is_null_homotopic(&self, alg: &Algebra, f: &ChainMap) -> bool {
        self.coords(alg, f).iter().all(Scalar::is_zero)
    }

    pub fn map_of(&self, alg: &Algebra, coords: &[Scalar]) -> ChainMap {
        let mut v = zero_vec(alg.field(), self.layout.len());
        for (c, cl) in coords.iter().zip(&self.classes) {
            axpy(&mut v, c, cl);
        }
        self.layout.to_map(alg, &self.src, &self.dst, &v)
    }
}

/// Coordinates of `x ∈ e_j A e_i` on the block basis.
fn block_coords<'a>(x: &'a [Scalar], blk: &'a [usize]) -> impl Iterator<Item = Scalar> + 'a {
    blk.iter().map(move |&b| x[b].clone())
}

pub fn hom_space(alg: &Algebra, c: &Complex, d: &Complex) -> HomSpace {
    let f = alg.field();
    let layout = Layout::new(alg, c, d, 0);
    let nv = layout.len();
    let empty = || HomSpace {
        src: c.clone(),
        dst: d.clone(),
        layout: layout.clone(),
        classes: Vec::new(),
        echelon: EchelonBasis::new(f, nv),
        class_slots: Vec::new(),
        chain_dim: 0,
        null_dim: 0,
    };
    if nv == 0 {
        return empty();
    }
    // constraint rows: (d_D f - f d_C)^n : C^n -> D^{n+1}
    let cons = Layout::new(alg, c, d, 1);
    let nc = cons.len();
    let kernel: Vec<Vector> = if nc == 0 {
        (0..nv).map(|i| crate::linalg::unit_vec(f, nv, i)).collect()
    } else {
        let mut mat = Matrix::zeros(f, nc, nv);
        for (k, var) in layout.vars.iter().enumerate() {
            let n = var.degree;
            let x = alg.basis_elem(var.basis);
            // d_D^n x at rows u of D^{n+1}
            if let Some(dd) = d.diff_ref(n) {
                for u in 0..dd.rows {
                    let a = dd.at(u, var.row);
                    if is_zero_vec(a) {
                        continue;
                    }
                    let p = alg.mul(a, &x);
                    if let Some((off, blk)) = cons.index.get(&(n, u, var.col)) {
                        for (i, val) in block_coords(&p, blk).enumerate() {
                            if !val.is_zero() {
                                let cur = mat.get(off + i, k) + &val;
                                mat.set(off + i, k, cur);
                            }
                        }
                    }
                }
            }
            // -(x d_C^{n-1}) contributes to degree n-1 constraints
            if let Some(dc) = c.diff_ref(n - 1) {
                for s in 0..dc.cols {
                    let a = dc.at(var.col, s);
                    if is_zero_vec(a) {
                        continue;
                    }
                    let p = alg.mul(&x, a);
                    if let Some((off, blk)) = cons.index.get(&(n - 1, var.row, s)) {
                        for (i, val) in block_coords(&p, blk).enumerate() {
                            if !val.is_zero() {
                                let cur = mat.get(off + i, k) - &val;
                                mat.set(off + i, k, cur);
                            }
                        }
                    }
                }
            }
        }
        mat.nullspace()
    };
    // null-homotopic maps from h^n: C^n -> D^{n-1}
    let hl = Layout::new(alg, c, d, -1);
    let mut nulls = Vec::new();
    for var in &hl.vars {
        let n = var.degree;
        let x = alg.basis_elem(var.basis);
        let mut v = zero_vec(f, nv);
        // d_D^{n-1} h^n into f^n
        if let Some(dd) = d.diff_ref(n - 1) {
            for u in 0..dd.rows {
                let a = dd.at(u, var.row);
                if is_zero_vec(a) {
                    continue;
                }
                let p = alg.mul(a, &x);
                if let Some((off, blk)) = layout.index.get(&(n, u, var.col)) {
                    for (i, val) in block_coords(&p, blk).enumerate() {
                        v[off + i] += &val;
                    }
                }
            }
        }
        // h^n d_C^{n-1} into f^{n-1}
        if let Some(dc) = c.diff_ref(n - 1) {
            for s in 0..dc.cols {
                let a = dc.at(var.col, s);
                if is_zero_vec(a) {
                    continue;
                }
                let p = alg.mul(&x, a);
                if let Some((off, blk)) = layout.index.get(&(n - 1, var.row, s)) {
                    for (i, val) in block_coords(&p, blk).enumerate() {
                        v[off + i] += &val;
                    }
                }
            }
        }
        if !is_zero_vec(&v) {
            nulls.push(v);
        }
    }
    let mut echelon = EchelonBasis::new(f, nv);
    let mut null_dim = 0;
    for h in &nulls {
        if echelon.insert(h) {
            null_dim += 1;
        }
    }
    // classes extend the null-homotopic span inside the kernel; slots record
    // their positions among all inserted vectors
    let mut classes = Vec::new();
    let mut class_slots = Vec::new();
    for (k, z) in kernel.iter().enumerate() {
        if echelon.insert(z) {
            class_slots.push(nulls.len() + k);
            classes.push(z.clone());
        }
    }
    HomSpace {
        src: c.clone(),
        dst: d.clone(),
        layout,
        classes,
        echelon,
        class_slots,
        chain_dim: kernel.len(),
        null_dim,
    }
}

/// `Hom_K(C, D[i])`.
pub fn hom_shift(alg: &Algebra, c: &Complex, d: &Complex, i: i32) -> HomSpace {
    hom_space(alg, c, &shift(d, i))
}

pub fn hom_dim(alg: &Algebra, c: &Complex, d: &Complex, i: i32) -> usize {
    match hom_window(c, d) {
        Some((lo, hi)) if i >= lo && i <= hi => hom_shift(alg, c, d, i).dim(),
        _ => 0,
    }
}

/// Result of Gaussian elimination with the homotopy equivalences between the
/// input and its minimal form.
pub struct Minimized {
    pub complex: Complex,
    pub to_min: ChainMap,
    pub from_min: ChainMap,
}

fn find_pivot(c: &Complex) -> Option<(usize, usize, usize)> {
    for (k, d) in c.diffs.iter().enumerate() {
        for t in 0..d.rows {
            for s in 0..d.cols {
                let v = c.terms[k][s];
                if c.terms[k + 1][t] == v && !d.at(t, s)[v].is_zero() {
                    return Some((k, t, s));
                }
            }
        }
    }
    None
}

fn remove_index(v: &[usize], i: usize) -> Vec<usize> {
    (0..v.len()).filter(|&j| j != i).collect()
}

/// Splits off contractible summands until every differential entry is radical.
pub fn minimize(alg: &Algebra, c: &Complex) -> Complex {
    minimize_impl(alg, c, false).complex
}

pub fn minimize_with_maps(alg: &Algebra, c: &Complex) -> Minimized {
    minimize_impl(alg, c, true)
}

fn minimize_impl(alg: &Algebra, c: &Complex, track: bool) -> Minimized {
    let mut cur = c.clone().trimmed();
    let mut to_min = if track { ChainMap::identity(alg, &cur) } else { ChainMap::zero() };
    let mut from_min = to_min.clone();
    while let Some((k, t, s)) = find_pivot(&cur) {
        let n = cur.lo + k as i32;
        let v = cur.terms[k][s];
        let d = &cur.diffs[k];
        let phi_inv = alg.local_inverse(d.at(t, s), v).unwrap();
        let keep_src = remove_index(&cur.terms[k], s);
        let keep_dst = remove_index(&cur.terms[k + 1], t);
        // d' = eps - gamma phi^{-1} delta
        let mut nd = d.select(&keep_dst, &keep_src);
        for (ti, &tt) in keep_dst.iter().enumerate() {
            let gamma = d.at(tt, s);
            if is_zero_vec(gamma) {
                continue;
            }
            let g_phi = alg.mul(gamma, &phi_inv);
            for (si, &ss) in keep_src.iter().enumerate() {
                let delta = d.at(t, ss);
                if is_zero_vec(delta) {
                    continue;
                }
                let corr = alg.mul(&g_phi, delta);
                for (x, y) in nd.at_mut(ti, si).iter_mut().zip(&corr) {
                    *x -= y;
                }
            }
        }
        let mut next = cur.clone();
        next.terms[k] = keep_src.iter().map(|&i| cur.terms[k][i]).collect();
        next.terms[k + 1] = keep_dst.iter().map(|&i| cur.terms[k + 1][i]).collect();
        next.diffs[k] = nd;
        if k > 0 {
            let rows: Vec<usize> = keep_src.clone();
            let cols: Vec<usize> = (0..cur.terms[k - 1].len()).collect();
            next.diffs[k - 1] = cur.diffs[k - 1].select(&rows, &cols);
        }
        if k + 1 < cur.diffs.len() {
            let rows: Vec<usize> = (0..cur.terms[k + 2].len()).collect();
            next.diffs[k + 1] = cur.diffs[k + 1].select(&rows, &keep_dst);
        }
        if track {
            // f: big -> small, identity away from degrees n, n+1
            let mut f = ChainMap::identity(alg, &cur);
            let mut g = ChainMap::identity(alg, &cur);
            let id_src = AMat::identity(alg, &cur.terms[k]);
            let id_dst = AMat::identity(alg, &cur.terms[k + 1]);
            let all_src: Vec<usize> = (0..cur.terms[k].len()).collect();
            let all_dst: Vec<usize> = (0..cur.terms[k + 1].len()).collect();
            // f^n = projection away from s
            f.blocks.insert(n, id_src.select(&keep_src, &all_src));
            // f^{n+1} = projection away from t, minus gamma phi^{-1} on column t
            let mut fn1 = id_dst.select(&keep_dst, &all_dst);
            for (ti, &tt) in keep_dst.iter().enumerate() {
                let gamma = d.at(tt, s);
                if !is_zero_vec(gamma) {
                    *fn1.at_mut(ti, t) = alg.mul(gamma, &phi_inv).iter().map(|x| -x).collect();
                }
            }
            f.blocks.insert(n + 1, fn1);
            // g^n = inclusion, with -phi^{-1} delta in row s
            let mut gn = id_src.select(&all_src, &keep_src);
            for (si, &ss) in keep_src.iter().enumerate() {
                let delta = d.at(t, ss);
                if !is_zero_vec(delta) {
                    *gn.at_mut(s, si) = alg.mul(&phi_inv, delta).iter().map(|x| -x).collect();
                }
            }
            g.blocks.insert(n, gn);
            g.blocks.insert(n + 1, id_dst.select(&all_dst, &keep_dst));
            prune(&mut f);
            prune(&mut g);
            to_min = f.compose(alg, &to_min);
            from_min = from_min.compose(alg, &g);
        }
        cur = next;
    }
    let trimmed = cur.clone().trimmed();
    if track {
        prune(&mut to_min);
        prune(&mut from_min);
    }
    Minimized { complex: trimmed, to_min, from_min }
}

fn prune(f: &mut ChainMap) {
    f.blocks.retain(|_, m| m.rows > 0 && m.cols > 0);
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRef {
    pub coeff: ScalarRepr,
    #[serde(default)]
    pub path: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryFile {
    pub row: usize,
    pub col: usize,
    pub terms: Vec<TermRef>,
}

/// File form: vertices are 1-based, differential entries are sparse with
/// block coordinates `(row, col)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub lo: i32,
    pub hi: i32,
    pub terms: Vec<Vec<usize>>,
    #[serde(default)]
    pub diffs: Vec<Vec<EntryFile>>,
}

impl ComplexFile {
    pub fn of(alg: &Algebra, c: &Complex) -> ComplexFile {
        if c.is_zero() {
            return ComplexFile { lo: 0, hi: -1, terms: vec![], diffs: vec![] };
        }
        let diffs = c
            .diffs
            .iter()
            .map(|d| {
                let mut entries = Vec::new();
                for r in 0..d.rows {
                    for col in 0..d.cols {
                        let x = d.at(r, col);
                        if is_zero_vec(x) {
                            continue;
                        }
                        let terms = alg
                            .elem_terms(x)
                            .into_iter()
                            .map(|(c, path)| TermRef { coeff: ScalarRepr::of(&c), path })
                            .collect();
                        entries.push(EntryFile { row: r, col, terms });
                    }
                }
                entries
            })
            .collect();
        ComplexFile {
            lo: c.lo,
            hi: c.hi(),
            terms: c.terms.iter().map(|t| t.iter().map(|v| v + 1).collect()).collect(),
            diffs,
        }
    }

    pub fn interpret(&self, alg: &Algebra) -> Result<Complex, ComplexError> {
        let bad = |m: String| ComplexError::Malformed(m);
        if self.terms.is_empty() {
            return Ok(Complex::zero());
        }
        if self.hi - self.lo + 1 != self.terms.len() as i32 {
            return Err(bad("lo/hi do not match the number of terms".into()));
        }
        let nv = alg.n_vertices();
        let mut terms = Vec::new();
        for t in &self.terms {
            let mut out = Vec::new();
            for &v in t {
                if v == 0 || v > nv {
                    return Err(bad(format!("vertex {v} out of range")));
                }
                out.push(v - 1);
            }
            terms.push(out);
        }
        if self.diffs.len() > terms.len().saturating_sub(1) {
            return Err(bad("too many differentials".into()));
        }
        let mut diffs = Vec::new();
        for k in 0..terms.len() - 1 {
            let (src, dst) = (&terms[k], &terms[k + 1]);
            let mut m = AMat::zero(alg, dst.len(), src.len());
            for e in self.diffs.get(k).map(Vec::as_slice).unwrap_or(&[]) {
                if e.row >= dst.len() || e.col >= src.len() {
                    return Err(bad(format!("entry ({}, {}) out of range", e.row, e.col)));
                }
                let (i, j) = (src[e.col], dst[e.row]);
                let mut x = alg.zero();
                for t in &e.terms {
                    let p = alg.path_from_names(&t.path, j)?;
                    if p.start != j || p.end != i {
                        return Err(bad(format!("path in entry ({}, {}) has the wrong endpoints", e.row, e.col)));
                    }
                    let c = t.coeff.interpret(alg.field()).map_err(|e| bad(e.to_string()))?;
                    axpy(&mut x, &c, &alg.path_elem(&p));
                }
                *m.at_mut(e.row, e.col) = x;
            }
            diffs.push(m);
        }
        let c = Complex { lo: self.lo, terms, diffs };
        c.check(alg)?;
        Ok(c.trimmed())
    }
}

impl Complex {
    pub fn to_json(&self, alg: &Algebra) -> serde_json::Value {
        serde_json::to_value(ComplexFile::of(alg, self)).unwrap()
    }

    pub fn from_json(alg: &Algebra, text: &str) -> Result<Complex, ComplexError> {
        let f: ComplexFile = serde_json::from_str(text)?;
        f.interpret(alg)
    }

    /// Human-readable one-line description, e.g. `P2 -a-> P1 [-1,0]`.
    pub fn describe(&self, alg: &Algebra) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let term = |t: &[usize]| -> String {
            if t.is_empty() {
                "0".into()
            } else {
                t.iter().map(|&v| format!("P{}", alg.vertex_label(v))).collect::<Vec<_>>().join("+")
            }
        };
        let mut s = term(&self.terms[0]);
        for (k, d) in self.diffs.iter().enumerate() {
            let entries: Vec<String> = d.data.iter().filter(|x| !is_zero_vec(x)).map(|x| alg.format_elem(x)).collect();
            s.push_str(&format!(" -{}-> ", entries.join(",")));
            s.push_str(&term(&self.terms[k + 1]));
        }
        format!("{s} @[{},{}]", self.lo, self.hi())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, Presentation};
    use crate::field::Field;

    fn build(name: &str) -> Algebra {
        build_algebra(&Presentation::builtin(name, Field::default()).unwrap()).unwrap()
    }

    /// `P_2 -a-> P_1` in degrees -1, 0 over A2.
    fn s1(alg: &Algebra) -> Complex {
        let mut d = AMat::zero(alg, 1, 1);
        *d.at_mut(0, 0) = alg.basis_elem(2);
        Complex { lo: -1, terms: vec![vec![1], vec![0]], diffs: vec![d] }
    }

    #[test]
    fn shifts() {
        let p1 = Complex::projective(0);
        let s = shift(&p1, 1);
        assert_eq!((s.lo, s.hi()), (-1, -1));
        let a = build("a2");
        let c = s1(&a);
        assert_eq!(shift(&shift(&c, 1), -1), c);
        assert_eq!(shift(&Complex::regular(&a), 2).lo, -2);
    }

    #[test]
    fn hom_a2() {
        let a = build("a2");
        let p1 = Complex::projective(0);
        let p2 = Complex::projective(1);
        assert_eq!(hom_space(&a, &p2, &p1).dim(), 1);
        assert_eq!(hom_space(&a, &p1, &p2).dim(), 0);
        let c = s1(&a);
        c.check(&a).unwrap();
        assert!(c.is_minimal(&a));
        assert_eq!(hom_shift(&a, &c, &c, 1).dim(), 0);
        let e = hom_space(&a, &c, &c);
        assert_eq!(e.dim(), 1);
        assert!(!e.is_null_homotopic(&a, &ChainMap::identity(&a, &c)));
    }

    #[test]
    fn cones_and_minimize() {
        let a = build("a2");
        let p1 = Complex::projective(0);
        let id = ChainMap::identity(&a, &p1);
        let cn = cone(&a, &id, &p1, &p1);
        cn.check(&a).unwrap();
        assert!(minimize(&a, &cn).is_zero());
        // a: P_2 -> P_1
        let p2 = Complex::projective(1);
        let h = hom_space(&a, &p2, &p1);
        let f = h.class_map(&a, 0);
        let cn = cone(&a, &f, &p2, &p1);
        cn.check(&a).unwrap();
        assert!(cn.is_minimal(&a));
        assert_eq!(minimize(&a, &cn), cn);
        assert_eq!(cn.terms, s1(&a).terms);
        let z = cone(&a, &ChainMap::zero(), &Complex::zero(), &p1);
        assert_eq!(z, p1);
    }

    #[test]
    fn minimize_strips_contractible() {
        let a = build("a2");
        let c = s1(&a);
        let p2 = Complex::projective(1);
        let contract = cone(&a, &ChainMap::identity(&a, &p2), &p2, &p2);
        let sum = direct_sum(&a, &[&c, &contract]);
        sum.check(&a).unwrap();
        let m = minimize_with_maps(&a, &sum);
        assert_eq!(m.complex, minimize(&a, &c));
        m.to_min.check(&a, &sum, &m.complex).unwrap();
        m.from_min.check(&a, &m.complex, &sum).unwrap();
        let fg = m.to_min.compose(&a, &m.from_min);
        assert_eq!(fg, ChainMap::identity(&a, &m.complex));
        let gf = m.from_min.compose(&a, &m.to_min);
        let e = hom_space(&a, &sum, &sum);
        let diff = gf.add(&ChainMap::identity(&a, &sum).scale(&a.field().from_i64(-1)));
        assert!(e.is_null_homotopic(&a, &diff));
    }

    #[test]
    fn windows() {
        assert_eq!(hom_window(&Complex::projective(0), &Complex::projective(1)), Some((0, 0)));
        let a = build("a2");
        assert_eq!(hom_window(&s1(&a), &Complex::projective(0)), Some((0, 1)));
    }

    #[test]
    fn file_round_trip() {
        let a = build("ab0");
        let p1 = Complex::projective(0);
        let p2 = Complex::projective(1);
        let h = hom_space(&a, &p1, &p2);
        let c = cone(&a, &h.class_map(&a, 0), &p1, &p2);
        let text = serde_json::to_string(&c.to_json(&a)).unwrap();
        assert_eq!(Complex::from_json(&a, &text).unwrap(), c);
    }
}
