//! Finite-dimensional path algebras `kQ/I` with an explicit path basis.
//!
//! Paths compose left to right: for `a: i -> j` and `b: j -> k` the product
//! `ab` runs from `i` to `k`. `Hom(e_i A, e_j A)` is `e_j A e_i`, the span of
//! paths from `j` to `i`, acting by left multiplication.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::field::{Field, FieldError, Scalar, ScalarRepr};
use crate::linalg::{is_zero_vec, zero_vec, Matrix, Vector};

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("algebra is infinite dimensional: nonzero paths of length {cap} survive (raise path_length_cap or add relations)")]
    InfiniteDimensional { cap: usize },
    #[error("malformed presentation: {0}")]
    MalformedPresentation(String),
    #[error("invalid vertex {0}")]
    InvalidVertex(usize),
    #[error("unknown builtin algebra {0:?}")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn malformed(msg: impl Into<String>) -> AlgebraError {
    AlgebraError::MalformedPresentation(msg.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub from: usize,
    pub to: usize,
}

/// A path, possibly trivial. `start` is only meaningful for trivial paths but
/// is always kept consistent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: usize,
    pub end: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Path {
        Path { start: v, end: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    fn order_key(&self) -> (usize, &[usize], usize) {
        (self.arrows.len(), &self.arrows, self.start)
    }

    pub fn concat(&self, other: &Path) -> Option<Path> {
        if self.end != other.start {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend(&other.arrows);
        Some(Path { start: self.start, end: other.end, arrows })
    }
}

#[derive(Clone, Debug)]
pub struct Presentation {
    pub field: Field,
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Vec<(Scalar, Vec<usize>)>>,
    pub path_length_cap: usize,
}

/// Vertex reference in files: a label, or a 1-based position.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexRef {
    Index(usize),
    Label(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrowFile {
    pub name: String,
    pub from: VertexRef,
    pub to: VertexRef,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermFile {
    pub coeff: ScalarRepr,
    pub path: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresentationFile {
    #[serde(default)]
    pub field_char: Option<u64>,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowFile>,
    #[serde(default)]
    pub relations: Vec<Vec<TermFile>>,
    pub path_length_cap: usize,
}

impl PresentationFile {
    pub fn interpret(&self, field_override: Option<Field>) -> Result<Presentation, AlgebraError> {
        let field = match field_override {
            Some(f) => f,
            None => match self.field_char {
                Some(c) => Field::from_characteristic(c)?,
                None => Field::default(),
            },
        };
        let vertex = |r: &VertexRef| -> Result<usize, AlgebraError> {
            match r {
                VertexRef::Index(i) if *i >= 1 && *i <= self.vertices.len() => Ok(i - 1),
                VertexRef::Index(i) => Err(malformed(format!("arrow endpoint {i} is not a vertex"))),
                VertexRef::Label(s) => self
                    .vertices
                    .iter()
                    .position(|v| v == s)
                    .ok_or_else(|| malformed(format!("arrow endpoint {s:?} is not a vertex"))),
            }
        };
        let mut arrows = Vec::new();
        for a in &self.arrows {
            arrows.push(Arrow { name: a.name.clone(), from: vertex(&a.from)?, to: vertex(&a.to)? });
        }
        let mut relations = Vec::new();
        for rel in &self.relations {
            let mut terms = Vec::new();
            for t in rel {
                let mut path = Vec::new();
                for name in &t.path {
                    let idx = arrows
                        .iter()
                        .position(|a| &a.name == name)
                        .ok_or_else(|| malformed(format!("relation uses unknown arrow {name:?}")))?;
                    path.push(idx);
                }
                terms.push((t.coeff.interpret(field)?, path));
            }
            relations.push(terms);
        }
        Ok(Presentation {
            field,
            vertices: self.vertices.clone(),
            arrows,
            relations,
            path_length_cap: self.path_length_cap,
        })
    }

    pub fn from_presentation(p: &Presentation) -> PresentationFile {
        PresentationFile {
            field_char: Some(p.field.characteristic() as u64),
            vertices: p.vertices.clone(),
            arrows: p
                .arrows
                .iter()
                .map(|a| ArrowFile {
                    name: a.name.clone(),
                    from: VertexRef::Label(p.vertices[a.from].clone()),
                    to: VertexRef::Label(p.vertices[a.to].clone()),
                })
                .collect(),
            relations: p
                .relations
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|(c, path)| TermFile {
                            coeff: ScalarRepr::of(c),
                            path: path.iter().map(|&i| p.arrows[i].name.clone()).collect(),
                        })
                        .collect()
                })
                .collect(),
            path_length_cap: p.path_length_cap,
        }
    }
}

impl Presentation {
    pub fn from_json(text: &str, field_override: Option<Field>) -> Result<Presentation, AlgebraError> {
        let file: PresentationFile = serde_json::from_str(text)?;
        file.interpret(field_override)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PresentationFile::from_presentation(self)).unwrap()
    }

    pub fn builtin(name: &str, field: Field) -> Result<Presentation, AlgebraError> {
        let arrow = |n: &str, f, t| Arrow { name: n.to_string(), from: f, to: t };
        let verts = |n: usize| (1..=n).map(|i| i.to_string()).collect::<Vec<_>>();
        let one = field.one();
        let p = match name {
            "k" => Presentation { field, vertices: verts(1), arrows: vec![], relations: vec![], path_length_cap: 1 },
            "a2" => Presentation {
                field,
                vertices: verts(2),
                arrows: vec![arrow("a", 0, 1)],
                relations: vec![],
                path_length_cap: 3,
            },
            "a3" => Presentation {
                field,
                vertices: verts(3),
                arrows: vec![arrow("a", 0, 1), arrow("b", 1, 2)],
                relations: vec![],
                path_length_cap: 4,
            },
            "kronecker" => Presentation {
                field,
                vertices: verts(2),
                arrows: vec![arrow("a", 0, 1), arrow("b", 0, 1)],
                relations: vec![],
                path_length_cap: 3,
            },
            "ab0" => Presentation {
                field,
                vertices: verts(2),
                arrows: vec![arrow("a", 0, 1), arrow("b", 1, 0)],
                relations: vec![vec![(one.clone(), vec![0, 1])], vec![(one, vec![1, 0])]],
                path_length_cap: 3,
            },
            "dual-numbers" => Presentation {
                field,
                vertices: verts(1),
                arrows: vec![arrow("x", 0, 0)],
                relations: vec![vec![(one, vec![0, 0])]],
                path_length_cap: 3,
            },
            _ => return Err(AlgebraError::UnknownBuiltin(name.to_string())),
        };
        Ok(p)
    }

    pub const BUILTINS: [&'static str; 6] = ["a2", "a3", "kronecker", "ab0", "dual-numbers", "k"];

    fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(malformed("no vertices"));
        }
        for a in &self.arrows {
            if a.from >= n || a.to >= n {
                return Err(malformed(format!("arrow {} has an undeclared endpoint", a.name)));
            }
        }
        for (i, a) in self.arrows.iter().enumerate() {
            if self.arrows[..i].iter().any(|b| b.name == a.name) {
                return Err(malformed(format!("duplicate arrow name {}", a.name)));
            }
        }
        let mut longest = 0;
        for rel in &self.relations {
            let mut ends = None;
            for (c, path) in rel {
                if c.field() != self.field {
                    return Err(malformed("relation coefficient from another field"));
                }
                if path.is_empty() {
                    return Err(malformed("relation contains a trivial path"));
                }
                if let Some(&bad) = path.iter().find(|&&i| i >= self.arrows.len()) {
                    return Err(malformed(format!("relation uses unknown arrow {bad}")));
                }
                for w in path.windows(2) {
                    if self.arrows[w[0]].to != self.arrows[w[1]].from {
                        return Err(malformed(format!(
                            "relation path {} is not composable",
                            path.iter().map(|&i| self.arrows[i].name.as_str()).collect::<Vec<_>>().join("")
                        )));
                    }
                }
                let e = (self.arrows[path[0]].from, self.arrows[*path.last().unwrap()].to);
                if *ends.get_or_insert(e) != e {
                    return Err(malformed("relation terms have different endpoints"));
                }
                longest = longest.max(path.len());
            }
        }
        if self.path_length_cap == 0 || self.path_length_cap < longest {
            return Err(malformed(format!(
                "path_length_cap {} is below the longest relation ({longest})",
                self.path_length_cap
            )));
        }
        Ok(())
    }
}

/// Element of the algebra as a dense coordinate vector over the basis.
pub type Elem = Vector;

pub type Sparse = Vec<(usize, Scalar)>;

#[derive(Clone, Debug)]
pub struct Algebra {
    pub presentation: Presentation,
    field: Field,
    basis: Vec<Path>,
    index: HashMap<Path, usize>,
    /// Normal forms of the pivot (non-basis) paths up to the cap.
    reductions: HashMap<Path, Sparse>,
    mult: Vec<Vec<Sparse>>,
    blocks: Vec<Vec<Vec<usize>>>,
    hereditary: bool,
    hash: String,
}

/// Builds the algebra: computes a path basis modulo the ideal generated by
/// the relations, computing inside `kQ / J^{cap+1}`.
pub fn build_algebra(pres: &Presentation) -> Result<Algebra, AlgebraError> {
    pres.validate()?;
    let field = pres.field;
    let n = pres.vertices.len();
    let cap = pres.path_length_cap;

    // all paths of length <= cap, by increasing length
    let mut paths: Vec<Path> = (0..n).map(Path::trivial).collect();
    let mut layer: Vec<Path> = paths.clone();
    for _ in 0..cap {
        let mut next = Vec::new();
        for p in &layer {
            for (ai, a) in pres.arrows.iter().enumerate() {
                if a.from == p.end {
                    let mut arrows = p.arrows.clone();
                    arrows.push(ai);
                    next.push(Path { start: p.start, end: a.to, arrows });
                }
            }
        }
        paths.extend(next.iter().cloned());
        layer = next;
    }
    paths.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
    let np = paths.len();
    let pos: HashMap<Path, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    // column c holds path np-1-c, so leading columns are the largest paths
    let col = |i: usize| np - 1 - i;

    let mut rows: Vec<Vector> = Vec::new();
    for rel in &pres.relations {
        let (s, t) = {
            let first = &rel[0].1;
            (pres.arrows[first[0]].from, pres.arrows[*first.last().unwrap()].to)
        };
        for u in paths.iter().filter(|u| u.end == s) {
            for v in paths.iter().filter(|v| v.start == t) {
                let mut row = zero_vec(field, np);
                let mut any = false;
                for (c, rp) in rel {
                    if u.len() + rp.len() + v.len() > cap {
                        continue;
                    }
                    let mut arrows = u.arrows.clone();
                    arrows.extend(rp);
                    arrows.extend(&v.arrows);
                    let p = Path { start: u.start, end: v.end, arrows };
                    let c2 = &row[col(pos[&p])] + c;
                    row[col(pos[&p])] = c2;
                    any = true;
                }
                if any && !is_zero_vec(&row) {
                    rows.push(row);
                }
            }
        }
    }

    let mut reductions = HashMap::new();
    let mut is_pivot = vec![false; np];
    if !rows.is_empty() {
        let m = Matrix::from_rows(field, rows, np);
        let (r, pivots) = m.rref();
        for (ri, &pc) in pivots.iter().enumerate() {
            let pi = np - 1 - pc;
            is_pivot[pi] = true;
            let mut nf = Vec::new();
            for c in pc + 1..np {
                let x = r.get(ri, c);
                if !x.is_zero() {
                    nf.push((np - 1 - c, -x));
                }
            }
            reductions.insert(paths[pi].clone(), nf);
        }
    }
    if is_pivot[..n].iter().any(|&b| b) {
        return Err(malformed("relations force a vertex idempotent to vanish"));
    }

    // basis: idempotents, then surviving paths by increasing length
    let basis: Vec<Path> = (0..np).filter(|&i| !is_pivot[i]).map(|i| paths[i].clone()).collect();
    let index: HashMap<Path, usize> = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    // translate reductions from path positions to basis indices
    let reductions: HashMap<Path, Sparse> = reductions
        .into_iter()
        .map(|(p, nf)| (p, nf.into_iter().map(|(pi, c)| (index[&paths[pi]], c)).collect()))
        .collect();

    for p in paths.iter().filter(|p| p.len() == cap) {
        let zero = reductions.get(p).is_some_and(|nf| nf.is_empty());
        if !zero {
            return Err(AlgebraError::InfiniteDimensional { cap });
        }
    }

    let d = basis.len();
    let mut alg = Algebra {
        presentation: pres.clone(),
        field,
        basis,
        index,
        reductions,
        mult: Vec::new(),
        blocks: vec![vec![Vec::new(); n]; n],
        hereditary: false,
        hash: String::new(),
    };
    let mut mult = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in 0..d {
            if let Some(p) = alg.basis[i].concat(&alg.basis[j]) {
                mult[i][j] = alg.normal_form(&p);
            }
        }
    }
    alg.mult = mult;
    for (i, p) in alg.basis.iter().enumerate() {
        alg.blocks[p.start][p.end].push(i);
    }
    alg.hereditary = alg.reductions.is_empty() && is_acyclic(n, &pres.arrows);
    let mut h = Sha256::new();
    h.update(PresentationFile::from_presentation(pres).canonical_bytes());
    alg.hash = hex::encode(h.finalize());
    Ok(alg)
}

impl PresentationFile {
    fn canonical_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).unwrap()
    }
}

fn is_acyclic(n: usize, arrows: &[Arrow]) -> bool {
    let mut indeg = vec![0usize; n];
    for a in arrows {
        indeg[a.to] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for a in arrows.iter().filter(|a| a.from == v) {
            indeg[a.to] -= 1;
            if indeg[a.to] == 0 {
                stack.push(a.to);
            }
        }
    }
    seen == n
}

impl Algebra {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.presentation.vertices.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn is_hereditary(&self) -> bool {
        self.hereditary
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.presentation.arrows
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.presentation.vertices[v]
    }

    /// Basis indices of the paths from `s` to `t`, i.e. of `e_s A e_t`.
    pub fn block(&self, s: usize, t: usize) -> &[usize] {
        &self.blocks[s][t]
    }

    /// Basis of `Hom(e_i A, e_j A) = e_j A e_i` as algebra elements.
    pub fn hom_proj_basis(&self, i: usize, j: usize) -> Result<Vec<Elem>, AlgebraError> {
        let n = self.n_vertices();
        if i >= n {
            return Err(AlgebraError::InvalidVertex(i));
        }
        if j >= n {
            return Err(AlgebraError::InvalidVertex(j));
        }
        Ok(self.block(j, i).iter().map(|&b| self.basis_elem(b)).collect())
    }

    pub fn basis_index(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn normal_form(&self, p: &Path) -> Sparse {
        if p.len() > self.presentation.path_length_cap {
            return Vec::new();
        }
        if let Some(&i) = self.index.get(p) {
            return vec![(i, self.field.one())];
        }
        self.reductions.get(p).cloned().unwrap_or_default()
    }

    pub fn zero(&self) -> Elem {
        zero_vec(self.field, self.dim())
    }

    pub fn basis_elem(&self, i: usize) -> Elem {
        let mut v = self.zero();
        v[i] = self.field.one();
        v
    }

    pub fn idempotent(&self, v: usize) -> Elem {
        self.basis_elem(v)
    }

    pub fn one(&self) -> Elem {
        let mut x = self.zero();
        for v in 0..self.n_vertices() {
            x[v] = self.field.one();
        }
        x
    }

    pub fn path_elem(&self, p: &Path) -> Elem {
        let mut x = self.zero();
        for (i, c) in self.normal_form(p) {
            x[i] += &c;
        }
        x
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Elem {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in &self.mult[i][j] {
                    out[*k] += &(&xy * c);
                }
            }
        }
        out
    }

    pub fn mult_table(&self, i: usize, j: usize) -> &Sparse {
        &self.mult[i][j]
    }

    /// Coefficient of `e_v` in `x`.
    pub fn unit_coeff<'a>(&self, x: &'a [Scalar], v: usize) -> &'a Scalar {
        &x[v]
    }

    /// Whether `x` lies in the radical (no idempotent component).
    pub fn in_radical(&self, x: &[Scalar]) -> bool {
        x[..self.n_vertices()].iter().all(Scalar::is_zero)
    }

    /// Inverse of a unit `x` of `e_v A e_v`.
    pub fn local_inverse(&self, x: &[Scalar], v: usize) -> Option<Elem> {
        let c = x[v].inv()?;
        let ev = self.idempotent(v);
        // x = c (e_v + r) with r radical; inverse = c^{-1} sum (-r)^k
        let mut r: Elem = x.iter().map(|y| y * &c).collect();
        r[v] = self.field.zero();
        let neg_r: Elem = r.iter().map(|y| -y).collect();
        let mut acc = ev.clone();
        let mut term = ev;
        for _ in 0..=self.presentation.path_length_cap {
            term = self.mul(&term, &neg_r);
            if is_zero_vec(&term) {
                break;
            }
            for (a, t) in acc.iter_mut().zip(&term) {
                *a += t;
            }
        }
        Some(acc.iter().map(|y| y * &c).collect())
    }

    pub fn path_name(&self, p: &Path) -> String {
        if p.is_trivial() {
            return format!("e{}", self.vertex_label(p.start));
        }
        let names: Vec<&str> = p.arrows.iter().map(|&a| self.presentation.arrows[a].name.as_str()).collect();
        if names.iter().all(|s| s.chars().count() == 1) {
            names.concat()
        } else {
            names.join("*")
        }
    }

    pub fn format_elem(&self, x: &[Scalar]) -> String {
        let mut parts = Vec::new();
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = self.path_name(&self.basis[i]);
            if c.is_one() {
                parts.push(name);
            } else {
                parts.push(format!("{c}{name}"));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }

    /// Parses a path written as a list of arrow names; the empty list is the
    /// idempotent at `vertex`.
    pub fn path_from_names(&self, names: &[String], vertex: usize) -> Result<Path, AlgebraError> {
        if names.is_empty() {
            return Ok(Path::trivial(vertex));
        }
        let mut arrows = Vec::new();
        for n in names {
            let i = self
                .presentation
                .arrows
                .iter()
                .position(|a| &a.name == n)
                .ok_or_else(|| malformed(format!("unknown arrow {n:?}")))?;
            arrows.push(i);
        }
        let a = &self.presentation.arrows;
        for w in arrows.windows(2) {
            if a[w[0]].to != a[w[1]].from {
                return Err(malformed(format!("path {} is not composable", names.concat())));
            }
        }
        Ok(Path { start: a[arrows[0]].from, end: a[*arrows.last().unwrap()].to, arrows })
    }

    /// Writes `x` as `(coeff, arrow names)` terms over basis paths.
    pub fn elem_terms(&self, x: &[Scalar]) -> Vec<(Scalar, Vec<String>)> {
        x.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let names = self.basis[i].arrows.iter().map(|&a| self.presentation.arrows[a].name.clone()).collect();
                (c.clone(), names)
            })
            .collect()
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "algebra over {} with {} vertices, dim {}", self.field, self.n_vertices(), self.dim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> Field {
        Field::default()
    }

    fn build(name: &str) -> Algebra {
        build_algebra(&Presentation::builtin(name, field()).unwrap()).unwrap()
    }

    #[test]
    fn a2_basis() {
        let a = build("a2");
        assert_eq!(a.dim(), 3);
        let names: Vec<_> = a.basis().iter().map(|p| a.path_name(p)).collect();
        assert_eq!(names, ["e1", "e2", "a"]);
        assert!(a.is_hereditary());
    }

    #[test]
    fn loop_with_square_relation() {
        let a = build("dual-numbers");
        assert_eq!(a.dim(), 2);
        assert!(!a.is_hereditary());
    }

    #[test]
    fn ab_zero_blocks() {
        let a = build("ab0");
        assert_eq!(a.dim(), 4);
        let h12 = a.hom_proj_basis(0, 1).unwrap();
        let h21 = a.hom_proj_basis(1, 0).unwrap();
        assert_eq!(h12.len(), 1);
        assert_eq!(h21.len(), 1);
        assert_eq!(a.format_elem(&h12[0]), "b");
        assert_eq!(a.format_elem(&h21[0]), "a");
    }

    #[test]
    fn a2_hom_blocks() {
        let a = build("a2");
        let h = a.hom_proj_basis(1, 0).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(a.format_elem(&h[0]), "a");
        assert!(a.hom_proj_basis(0, 1).unwrap().is_empty());
        for v in 0..2 {
            assert!(a.hom_proj_basis(v, v).unwrap().contains(&a.idempotent(v)));
        }
    }

    #[test]
    fn free_loop_is_infinite() {
        let mut p = Presentation::builtin("dual-numbers", field()).unwrap();
        p.relations.clear();
        assert!(matches!(build_algebra(&p), Err(AlgebraError::InfiniteDimensional { .. })));
    }

    #[test]
    fn malformed_presentations() {
        let mut p = Presentation::builtin("a2", field()).unwrap();
        p.arrows[0].to = 5;
        assert!(matches!(build_algebra(&p), Err(AlgebraError::MalformedPresentation(_))));
        let mut p = Presentation::builtin("a3", field()).unwrap();
        p.relations.push(vec![(field().one(), vec![1, 0])]);
        assert!(matches!(build_algebra(&p), Err(AlgebraError::MalformedPresentation(_))));
        let mut p = Presentation::builtin("dual-numbers", field()).unwrap();
        p.path_length_cap = 1;
        assert!(matches!(build_algebra(&p), Err(AlgebraError::MalformedPresentation(_))));
    }

    #[test]
    fn associativity_and_unit() {
        for name in Presentation::BUILTINS {
            let a = build(name);
            let one = a.one();
            for i in 0..a.dim() {
                let x = a.basis_elem(i);
                assert_eq!(a.mul(&one, &x), x);
                assert_eq!(a.mul(&x, &one), x);
                for j in 0..a.dim() {
                    let y = a.basis_elem(j);
                    for k in 0..a.dim() {
                        let z = a.basis_elem(k);
                        assert_eq!(a.mul(&a.mul(&x, &y), &z), a.mul(&x, &a.mul(&y, &z)));
                    }
                }
            }
            let total: usize = (0..a.n_vertices())
                .flat_map(|s| (0..a.n_vertices()).map(move |t| (s, t)))
                .map(|(s, t)| a.block(s, t).len())
                .sum();
            assert_eq!(total, a.dim());
        }
    }

    #[test]
    fn commutativity_relation() {
        // square with ab = cd: dimension 4 + 4 + 1
        let f = field();
        let p = Presentation {
            field: f,
            vertices: (1..=4).map(|i| i.to_string()).collect(),
            arrows: vec![
                Arrow { name: "a".into(), from: 0, to: 1 },
                Arrow { name: "b".into(), from: 1, to: 3 },
                Arrow { name: "c".into(), from: 0, to: 2 },
                Arrow { name: "d".into(), from: 2, to: 3 },
            ],
            relations: vec![vec![(f.one(), vec![0, 1]), (f.from_i64(-1), vec![2, 3])]],
            path_length_cap: 3,
        };
        let a = build_algebra(&p).unwrap();
        assert_eq!(a.dim(), 9);
        assert!(!a.is_hereditary());
        let ab = a.path_elem(&a.path_from_names(&["a".into(), "b".into()], 0).unwrap());
        let cd = a.path_elem(&a.path_from_names(&["c".into(), "d".into()], 0).unwrap());
        assert_eq!(ab, cd);
    }

    #[test]
    fn local_inverse_on_loop() {
        let a = build("dual-numbers");
        let f = field();
        let x = vec![f.from_i64(3), f.from_i64(5)];
        let inv = a.local_inverse(&x, 0).unwrap();
        assert_eq!(a.mul(&x, &inv), a.one());
    }

    #[test]
    fn json_round_trip() {
        let p = Presentation::builtin("ab0", field()).unwrap();
        let text = p.to_json();
        let q = Presentation::from_json(&text, None).unwrap();
        assert_eq!(build_algebra(&q).unwrap().hash(), build_algebra(&p).unwrap().hash());
    }
}
