//! Finite-dimensional right modules as quiver representations.
//!
//! An arrow `a: v -> w` acts by a `dim M_w x dim M_v` matrix on column
//! vectors, so the path `ab` acts by `M_b M_a`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Algebra, Elem, Path};
use crate::field::{Field, ScalarRepr};
use crate::linalg::{is_zero_vec, zero_vec, EchelonBasis, Matrix, Vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("the zero module has no projective cover")]
    ZeroModule,
    #[error("module is not an indecomposable projective")]
    NotProjective,
    #[error("module is not an indecomposable injective")]
    NotInjective,
    #[error("simple module S{0} is injective")]
    SimpleIsInjective(String),
    #[error("simple module S{0} has self-extensions")]
    SelfExtension(String),
    #[error("projective dimension of the inverse translate exceeds one")]
    ProjDimTooBig,
    #[error("invalid vertex {0}")]
    InvalidVertex(usize),
    #[error("malformed module: {0}")]
    Malformed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    pub dims: Vec<usize>,
    /// One matrix per arrow, in arrow order.
    pub maps: Vec<Matrix>,
}

/// Per-vertex matrices of a module homomorphism `M -> N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub blocks: Vec<Matrix>,
}

impl ModuleMap {
    pub fn zero(field: Field, src: &Rep, dst: &Rep) -> ModuleMap {
        ModuleMap { blocks: src.dims.iter().zip(&dst.dims).map(|(&s, &t)| Matrix::zeros(field, t, s)).collect() }
    }

    pub fn identity(field: Field, m: &Rep) -> ModuleMap {
        ModuleMap { blocks: m.dims.iter().map(|&d| Matrix::identity(field, d)).collect() }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(Matrix::rank).sum()
    }

    pub fn is_mono(&self, src: &Rep) -> bool {
        self.rank() == src.total_dim()
    }

    pub fn is_epi(&self, dst: &Rep) -> bool {
        self.rank() == dst.total_dim()
    }

    fn flatten(&self) -> Vector {
        self.blocks.iter().flat_map(|b| (0..b.rows()).flat_map(move |r| b.row(r).to_vec())).collect()
    }
}

impl Rep {
    pub fn zero(alg: &Algebra) -> Rep {
        let f = alg.field();
        Rep {
            dims: vec![0; alg.n_vertices()],
            maps: alg.arrows().iter().map(|_| Matrix::zeros(f, 0, 0)).collect(),
        }
    }

    pub fn semisimple(alg: &Algebra, dims: Vec<usize>) -> Rep {
        let f = alg.field();
        let maps = alg.arrows().iter().map(|a| Matrix::zeros(f, dims[a.to], dims[a.from])).collect();
        Rep { dims, maps }
    }

    pub fn simple(alg: &Algebra, i: usize) -> Rep {
        let mut dims = vec![0; alg.n_vertices()];
        dims[i] = 1;
        Rep::semisimple(alg, dims)
    }

    /// `P_i = e_i A`: at vertex `v` the paths from `i` to `v`.
    pub fn projective(alg: &Algebra, i: usize) -> Rep {
        let f = alg.field();
        let n = alg.n_vertices();
        let dims: Vec<usize> = (0..n).map(|v| alg.block(i, v).len()).collect();
        let mut maps = Vec::new();
        for (ai, a) in alg.arrows().iter().enumerate() {
            let src = alg.block(i, a.from);
            let dst = alg.block(i, a.to);
            let arrow = alg.path_elem(&Path { start: a.from, end: a.to, arrows: vec![ai] });
            let mut m = Matrix::zeros(f, dst.len(), src.len());
            for (c, &q) in src.iter().enumerate() {
                let prod = alg.mul(&alg.basis_elem(q), &arrow);
                for (r, &b) in dst.iter().enumerate() {
                    m.set(r, c, prod[b].clone());
                }
            }
            maps.push(m);
        }
        Rep { dims, maps }
    }

    /// `I_i = D(A e_i)`: at vertex `v` the dual of the paths from `v` to `i`.
    pub fn injective(alg: &Algebra, i: usize) -> Rep {
        let f = alg.field();
        let n = alg.n_vertices();
        let dims: Vec<usize> = (0..n).map(|v| alg.block(v, i).len()).collect();
        let mut maps = Vec::new();
        for (ai, a) in alg.arrows().iter().enumerate() {
            let src = alg.block(a.from, i);
            let dst = alg.block(a.to, i);
            let arrow = alg.path_elem(&Path { start: a.from, end: a.to, arrows: vec![ai] });
            let mut m = Matrix::zeros(f, dst.len(), src.len());
            for (r, &y) in dst.iter().enumerate() {
                let prod = alg.mul(&arrow, &alg.basis_elem(y));
                for (c, &q) in src.iter().enumerate() {
                    m.set(r, c, prod[q].clone());
                }
            }
            maps.push(m);
        }
        Rep { dims, maps }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// `m · p` for `m` at the start vertex of the path `p`.
    pub fn act_path(&self, alg: &Algebra, p: &Path, m: &[crate::field::Scalar]) -> Vector {
        let _ = alg;
        let mut v = m.to_vec();
        for &a in &p.arrows {
            v = self.maps[a].apply(&v);
        }
        v
    }

    /// `m · x` for `m` at vertex `v`; the result lives at the vertex `w`.
    pub fn act_elem(&self, alg: &Algebra, m: &[crate::field::Scalar], v: usize, x: &[crate::field::Scalar], w: usize) -> Vector {
        let mut out = zero_vec(alg.field(), self.dims[w]);
        for &b in alg.block(v, w) {
            if x[b].is_zero() {
                continue;
            }
            let y = self.act_path(alg, &alg.basis()[b], m);
            crate::linalg::axpy(&mut out, &x[b], &y);
        }
        out
    }

    pub fn check(&self, alg: &Algebra) -> Result<(), ModuleError> {
        if self.dims.len() != alg.n_vertices() || self.maps.len() != alg.arrows().len() {
            return Err(ModuleError::Malformed("wrong number of vertices or arrows".into()));
        }
        for (m, a) in self.maps.iter().zip(alg.arrows()) {
            if m.rows() != self.dims[a.to] || m.cols() != self.dims[a.from] {
                return Err(ModuleError::Malformed(format!("arrow {} has the wrong shape", a.name)));
            }
        }
        let f = alg.field();
        for rel in &alg.presentation.relations {
            let a = alg.arrows();
            let (s, t) = (a[rel[0].1[0]].from, a[*rel[0].1.last().unwrap()].to);
            let mut total = Matrix::zeros(f, self.dims[t], self.dims[s]);
            for (c, path) in rel {
                let mut m = Matrix::identity(f, self.dims[s]);
                for &ai in path {
                    m = self.maps[ai].mul(&m);
                }
                for r in 0..m.rows() {
                    for col in 0..m.cols() {
                        let v = total.get(r, col) + &(c * m.get(r, col));
                        total.set(r, col, v);
                    }
                }
            }
            if !total.is_zero() {
                return Err(ModuleError::Malformed("a relation does not act by zero".into()));
            }
        }
        Ok(())
    }
}

pub fn direct_sum(alg: &Algebra, reps: &[Rep]) -> Rep {
    let f = alg.field();
    let n = alg.n_vertices();
    let dims: Vec<usize> = (0..n).map(|v| reps.iter().map(|r| r.dims[v]).sum()).collect();
    let mut maps = Vec::new();
    for (ai, a) in alg.arrows().iter().enumerate() {
        let mut m = Matrix::zeros(f, dims[a.to], dims[a.from]);
        let (mut ro, mut co) = (0, 0);
        for r in reps {
            let b = &r.maps[ai];
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    m.set(ro + i, co + j, b.get(i, j).clone());
                }
            }
            ro += r.dims[a.to];
            co += r.dims[a.from];
        }
        maps.push(m);
    }
    Rep { dims, maps }
}

/// Subrepresentation with the given per-vertex bases (assumed closed).
fn restrict(alg: &Algebra, m: &Rep, bases: &[Vec<Vector>]) -> (Rep, ModuleMap) {
    let f = alg.field();
    let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
    let echelons: Vec<EchelonBasis> = bases
        .iter()
        .enumerate()
        .map(|(v, b)| {
            let mut e = EchelonBasis::new(f, m.dims[v]);
            for x in b {
                e.insert(x);
            }
            e
        })
        .collect();
    let mut maps = Vec::new();
    for (ai, a) in alg.arrows().iter().enumerate() {
        let mut mat = Matrix::zeros(f, dims[a.to], dims[a.from]);
        for (c, x) in bases[a.from].iter().enumerate() {
            let y = m.maps[ai].apply(x);
            let coords = echelons[a.to].coordinates(&y).expect("subspace is not closed under arrows");
            for (r, val) in coords.into_iter().enumerate() {
                mat.set(r, c, val);
            }
        }
        maps.push(mat);
    }
    let incl = ModuleMap {
        blocks: bases.iter().enumerate().map(|(v, b)| Matrix::from_columns(f, b, m.dims[v])).collect(),
    };
    (Rep { dims, maps }, incl)
}

/// Smallest subrepresentation containing the generators `(vertex, vector)`.
pub fn submodule_generated(alg: &Algebra, m: &Rep, gens: &[(usize, Vector)]) -> (Rep, ModuleMap) {
    let f = alg.field();
    let n = alg.n_vertices();
    let mut ech: Vec<EchelonBasis> = (0..n).map(|v| EchelonBasis::new(f, m.dims[v])).collect();
    let mut bases: Vec<Vec<Vector>> = vec![Vec::new(); n];
    let mut queue: Vec<(usize, Vector)> = gens.to_vec();
    while let Some((v, x)) = queue.pop() {
        if is_zero_vec(&x) || ech[v].contains(&x) {
            continue;
        }
        ech[v].insert(&x);
        bases[v].push(x.clone());
        for (ai, a) in alg.arrows().iter().enumerate() {
            if a.from == v {
                queue.push((a.to, m.maps[ai].apply(&x)));
            }
        }
    }
    restrict(alg, m, &bases)
}

pub struct Layers {
    pub top: Rep,
    pub rad: (Rep, ModuleMap),
    pub soc: (Rep, ModuleMap),
}

pub fn top_radical_socle(alg: &Algebra, m: &Rep) -> Layers {
    let f = alg.field();
    let n = alg.n_vertices();
    let mut gens = Vec::new();
    for (ai, a) in alg.arrows().iter().enumerate() {
        for c in 0..m.dims[a.from] {
            gens.push((a.to, m.maps[ai].column(c)));
        }
    }
    let rad = submodule_generated(alg, m, &gens);
    let top_dims: Vec<usize> = (0..n).map(|v| m.dims[v] - rad.0.dims[v]).collect();
    let mut soc_bases = Vec::new();
    for v in 0..n {
        let outgoing: Vec<usize> = (0..alg.arrows().len()).filter(|&ai| alg.arrows()[ai].from == v).collect();
        let rows: usize = outgoing.iter().map(|&ai| m.maps[ai].rows()).sum();
        let mut stacked = Matrix::zeros(f, rows, m.dims[v]);
        let mut r0 = 0;
        for &ai in &outgoing {
            let mm = &m.maps[ai];
            for r in 0..mm.rows() {
                for c in 0..mm.cols() {
                    stacked.set(r0 + r, c, mm.get(r, c).clone());
                }
            }
            r0 += mm.rows();
        }
        let basis = if rows == 0 {
            (0..m.dims[v]).map(|i| crate::linalg::unit_vec(f, m.dims[v], i)).collect()
        } else {
            stacked.nullspace()
        };
        soc_bases.push(basis);
    }
    let soc = restrict(alg, m, &soc_bases);
    Layers { top: Rep::semisimple(alg, top_dims), rad, soc }
}

/// The map `P_v -> M` sending `e_v` to `m`, as per-vertex columns.
fn generator_columns(alg: &Algebra, m: &Rep, v: usize, x: &[crate::field::Scalar], w: usize) -> Vec<Vector> {
    alg.block(v, w).iter().map(|&q| m.act_path(alg, &alg.basis()[q], x)).collect()
}

pub struct Cover {
    /// Vertex of each indecomposable summand of the cover.
    pub vertices: Vec<usize>,
    /// Image of `e_v` for each summand.
    pub generators: Vec<Vector>,
    pub module: Rep,
    pub epi: ModuleMap,
}

/// Map `⊕ P_{v_k} -> M` determined by the images of the idempotents.
pub fn map_from_projectives(alg: &Algebra, m: &Rep, vertices: &[usize], generators: &[Vector]) -> (Rep, ModuleMap) {
    let f = alg.field();
    let p = direct_sum(alg, &vertices.iter().map(|&v| Rep::projective(alg, v)).collect::<Vec<_>>());
    let blocks = (0..alg.n_vertices())
        .map(|w| {
            let cols: Vec<Vector> = vertices
                .iter()
                .zip(generators)
                .flat_map(|(&v, x)| generator_columns(alg, m, v, x, w))
                .collect();
            Matrix::from_columns(f, &cols, m.dims[w])
        })
        .collect();
    (p, ModuleMap { blocks })
}

pub fn projective_cover(alg: &Algebra, m: &Rep) -> Result<Cover, ModuleError> {
    if m.is_zero() {
        return Err(ModuleError::ZeroModule);
    }
    let f = alg.field();
    let layers = top_radical_socle(alg, m);
    let mut vertices = Vec::new();
    let mut generators = Vec::new();
    for v in 0..alg.n_vertices() {
        let mut e = EchelonBasis::new(f, m.dims[v]);
        for c in 0..layers.rad.0.dims[v] {
            e.insert(&layers.rad.1.blocks[v].column(c));
        }
        for i in 0..m.dims[v] {
            let u = crate::linalg::unit_vec(f, m.dims[v], i);
            if e.insert(&u) {
                vertices.push(v);
                generators.push(u);
            }
        }
    }
    let (module, epi) = map_from_projectives(alg, m, &vertices, &generators);
    Ok(Cover { vertices, generators, module, epi })
}

pub fn kernel(alg: &Algebra, src: &Rep, map: &ModuleMap) -> (Rep, ModuleMap) {
    let bases: Vec<Vec<Vector>> = map
        .blocks
        .iter()
        .enumerate()
        .map(|(v, b)| {
            if b.rows() == 0 {
                (0..src.dims[v]).map(|i| crate::linalg::unit_vec(alg.field(), src.dims[v], i)).collect()
            } else {
                b.nullspace()
            }
        })
        .collect();
    restrict(alg, src, &bases)
}

pub fn cokernel(alg: &Algebra, dst: &Rep, map: &ModuleMap) -> (Rep, ModuleMap) {
    let f = alg.field();
    let n = alg.n_vertices();
    let mut echelons = Vec::new();
    let mut complements: Vec<Vec<usize>> = Vec::new();
    let mut image_rank = Vec::new();
    for v in 0..n {
        let mut e = EchelonBasis::new(f, dst.dims[v]);
        let mut rank = 0;
        for c in 0..map.blocks[v].cols() {
            if e.insert(&map.blocks[v].column(c)) {
                rank += 1;
            }
        }
        let mut comp = Vec::new();
        for i in 0..dst.dims[v] {
            if e.insert(&crate::linalg::unit_vec(f, dst.dims[v], i)) {
                comp.push(i);
            }
        }
        echelons.push(e);
        complements.push(comp);
        image_rank.push(rank);
    }
    // quotient coordinates: the complement part of the coordinates in the
    // echelon basis (image columns, then complement units)
    let project = |v: usize, y: &[crate::field::Scalar]| -> Vector {
        let coords = echelons[v].coordinates(y).unwrap();
        let mut out = Vec::new();
        let nimg = map.blocks[v].cols();
        let mut k = nimg;
        for i in 0..dst.dims[v] {
            if complements[v].contains(&i) {
                out.push(coords[k].clone());
            }
            k += 1;
        }
        let _ = k;
        out
    };
    let dims: Vec<usize> = complements.iter().map(Vec::len).collect();
    let mut maps = Vec::new();
    for (ai, a) in alg.arrows().iter().enumerate() {
        let mut mat = Matrix::zeros(f, dims[a.to], dims[a.from]);
        for (c, &i) in complements[a.from].iter().enumerate() {
            let y = dst.maps[ai].apply(&crate::linalg::unit_vec(f, dst.dims[a.from], i));
            for (r, val) in project(a.to, &y).into_iter().enumerate() {
                mat.set(r, c, val);
            }
        }
        maps.push(mat);
    }
    let blocks = (0..n)
        .map(|v| {
            let cols: Vec<Vector> = (0..dst.dims[v])
                .map(|i| project(v, &crate::linalg::unit_vec(f, dst.dims[v], i)))
                .collect();
            Matrix::from_columns(f, &cols, dims[v])
        })
        .collect();
    let _ = image_rank;
    (Rep { dims, maps }, ModuleMap { blocks })
}

/// Basis of `Hom_A(M, N)`.
pub fn hom_modules(alg: &Algebra, m: &Rep, nrep: &Rep) -> Vec<ModuleMap> {
    let f = alg.field();
    let n = alg.n_vertices();
    let mut offsets = vec![0; n + 1];
    for v in 0..n {
        offsets[v + 1] = offsets[v] + nrep.dims[v] * m.dims[v];
    }
    let nvars = offsets[n];
    let var = |v: usize, r: usize, c: usize| offsets[v] + r * m.dims[v] + c;
    let mut rows = Vec::new();
    // N_a F_v - F_w M_a = 0 for a: v -> w
    for (ai, a) in alg.arrows().iter().enumerate() {
        let (v, w) = (a.from, a.to);
        for r in 0..nrep.dims[w] {
            for c in 0..m.dims[v] {
                let mut row = zero_vec(f, nvars);
                for k in 0..nrep.dims[v] {
                    let x = nrep.maps[ai].get(r, k);
                    if !x.is_zero() {
                        row[var(v, k, c)] += x;
                    }
                }
                for k in 0..m.dims[w] {
                    let x = m.maps[ai].get(k, c);
                    if !x.is_zero() {
                        row[var(w, r, k)] -= x;
                    }
                }
                rows.push(row);
            }
        }
    }
    let sols = if rows.is_empty() {
        (0..nvars).map(|i| crate::linalg::unit_vec(f, nvars, i)).collect()
    } else {
        Matrix::from_rows(f, rows, nvars).nullspace()
    };
    sols.into_iter()
        .map(|s| ModuleMap {
            blocks: (0..n)
                .map(|v| {
                    let mut b = Matrix::zeros(f, nrep.dims[v], m.dims[v]);
                    for r in 0..nrep.dims[v] {
                        for c in 0..m.dims[v] {
                            b.set(r, c, s[var(v, r, c)].clone());
                        }
                    }
                    b
                })
                .collect(),
        })
        .collect()
}

pub fn is_module_hom(alg: &Algebra, m: &Rep, nrep: &Rep, map: &ModuleMap) -> bool {
    alg.arrows()
        .iter()
        .enumerate()
        .all(|(ai, a)| nrep.maps[ai].mul(&map.blocks[a.from]) == map.blocks[a.to].mul(&m.maps[ai]))
}

/// `ν(q): I_i -> I_j` for `q ∈ e_j A e_i`, i.e. the image under the Nakayama
/// functor of `q·: P_i -> P_j`.
pub fn nakayama_map(alg: &Algebra, q: &Elem, i: usize, j: usize) -> ModuleMap {
    let f = alg.field();
    let blocks = (0..alg.n_vertices())
        .map(|v| {
            let src = alg.block(v, i);
            let dst = alg.block(v, j);
            let mut b = Matrix::zeros(f, dst.len(), src.len());
            for (r, &x) in dst.iter().enumerate() {
                let prod = alg.mul(&alg.basis_elem(x), q);
                for (c, &s) in src.iter().enumerate() {
                    b.set(r, c, prod[s].clone());
                }
            }
            b
        })
        .collect();
    ModuleMap { blocks }
}

pub fn nakayama(alg: &Algebra, i: usize) -> Result<Rep, ModuleError> {
    if i >= alg.n_vertices() {
        return Err(ModuleError::InvalidVertex(i));
    }
    Ok(Rep::injective(alg, i))
}

/// The vertex `i` with `M ≅ I_i`, i.e. `ν⁻¹ M = P_i`.
pub fn inverse_nakayama(alg: &Algebra, m: &Rep) -> Result<usize, ModuleError> {
    let soc = top_radical_socle(alg, m).soc.0;
    if soc.total_dim() != 1 {
        return Err(ModuleError::NotInjective);
    }
    let i = soc.dims.iter().position(|&d| d == 1).unwrap();
    // M embeds into its injective envelope I_i, and equal dimension forces
    // an isomorphism
    if Rep::injective(alg, i).dims == m.dims {
        Ok(i)
    } else {
        Err(ModuleError::NotInjective)
    }
}

/// The vertex `i` with `M ≅ P_i`.
pub fn projective_vertex(alg: &Algebra, m: &Rep) -> Result<usize, ModuleError> {
    let top = top_radical_socle(alg, m).top;
    if top.total_dim() != 1 {
        return Err(ModuleError::NotProjective);
    }
    let i = top.dims.iter().position(|&d| d == 1).unwrap();
    if Rep::projective(alg, i).dims == m.dims {
        Ok(i)
    } else {
        Err(ModuleError::NotProjective)
    }
}

/// `dim Ext¹(S_i, S_i)`: multiplicity of `S_i` in the top of `rad P_i`.
pub fn self_ext_simple(alg: &Algebra, i: usize) -> usize {
    let p = Rep::projective(alg, i);
    let rad = top_radical_socle(alg, &p).rad.0;
    top_radical_socle(alg, &rad).top.dims[i]
}

/// Whether the first syzygy of `M` is projective.
pub fn proj_dim_at_most_one(alg: &Algebra, m: &Rep) -> bool {
    if m.is_zero() {
        return true;
    }
    let cover = projective_cover(alg, m).unwrap();
    let (k, _) = kernel(alg, &cover.module, &cover.epi);
    if k.is_zero() {
        return true;
    }
    let kc = projective_cover(alg, &k).unwrap();
    kc.module.dims == k.dims
}

pub struct TauInverse {
    pub vertex: usize,
    /// `ν⁻¹` of the minimal injective copresentation: `q_k ∈ e_{v_k} A e_i`
    /// giving `P_i -> ⊕ P_{v_k}`.
    pub targets: Vec<usize>,
    pub entries: Vec<Elem>,
    pub module: Rep,
}

/// `τ⁻¹ S_i` as the cokernel of `ν⁻¹` applied to the minimal injective
/// copresentation `0 -> S_i -> I_i -> I`.
pub fn tau_inverse_simple(alg: &Algebra, i: usize) -> Result<TauInverse, ModuleError> {
    let n = alg.n_vertices();
    if i >= n {
        return Err(ModuleError::InvalidVertex(i));
    }
    let f = alg.field();
    let label = alg.vertex_label(i).to_string();
    let ii = Rep::injective(alg, i);
    if ii.total_dim() == 1 {
        return Err(ModuleError::SimpleIsInjective(label));
    }
    if self_ext_simple(alg, i) != 0 {
        return Err(ModuleError::SelfExtension(label));
    }
    let soc = top_radical_socle(alg, &ii).soc;
    let (c, pi) = cokernel(alg, &ii, &soc.1);
    let csoc = top_radical_socle(alg, &c).soc;
    let mut targets = Vec::new();
    let mut entries = Vec::new();
    for v in 0..n {
        if csoc.0.dims[v] == 0 {
            continue;
        }
        // functionals on C_v dual to an echelon basis of soc(C)_v
        let cols: Vec<Vector> = (0..csoc.0.dims[v]).map(|k| csoc.1.blocks[v].column(k)).collect();
        let (r, pivots) = Matrix::from_rows(f, cols, c.dims[v]).rref();
        let _ = r;
        let iv = Rep::injective(alg, v);
        let basis: Vec<Elem> = alg.hom_proj_basis(i, v).unwrap();
        let candidates: Vec<ModuleMap> = basis.iter().map(|q| nakayama_map(alg, q, i, v)).collect();
        for &p in &pivots {
            // the map I_i -> I_v: at vertex w, y ↦ (path x ∈ e_w A e_v ↦ λ(π(y)·x))
            let blocks: Vec<Matrix> = (0..n)
                .map(|w| {
                    let xs = alg.block(w, v);
                    let mut b = Matrix::zeros(f, xs.len(), ii.dims[w]);
                    for col in 0..ii.dims[w] {
                        let y = pi.blocks[w].column(col);
                        for (row, &x) in xs.iter().enumerate() {
                            let img = c.act_path(alg, &alg.basis()[x], &y);
                            b.set(row, col, img[p].clone());
                        }
                    }
                    b
                })
                .collect();
            let map = ModuleMap { blocks };
            debug_assert!(is_module_hom(alg, &ii, &iv, &map));
            // express as ν(q)
            let target = map.flatten();
            let cols: Vec<Vector> = candidates.iter().map(ModuleMap::flatten).collect();
            let sys = Matrix::from_columns(f, &cols, target.len());
            let coeffs = sys.solve(&target).expect("Hom(I_i, I_v) is spanned by Nakayama images");
            let mut q = alg.zero();
            for (c, b) in coeffs.iter().zip(&basis) {
                crate::linalg::axpy(&mut q, c, b);
            }
            targets.push(v);
            entries.push(q);
        }
    }
    // cokernel of P_i -> ⊕ P_{v_k}, x ↦ (q_k x)
    let pt = direct_sum(alg, &targets.iter().map(|&v| Rep::projective(alg, v)).collect::<Vec<_>>());
    let pi_rep = Rep::projective(alg, i);
    let blocks = (0..n)
        .map(|w| {
            let src = alg.block(i, w);
            let mut b = Matrix::zeros(f, pt.dims[w], src.len());
            for (col, &x) in src.iter().enumerate() {
                let mut r0 = 0;
                for (k, &v) in targets.iter().enumerate() {
                    let prod = alg.mul(&entries[k], &alg.basis_elem(x));
                    for (r, &b2) in alg.block(v, w).iter().enumerate() {
                        b.set(r0 + r, col, prod[b2].clone());
                    }
                    r0 += alg.block(v, w).len();
                }
            }
            b
        })
        .collect();
    let map = ModuleMap { blocks };
    debug_assert!(is_module_hom(alg, &pi_rep, &pt, &map));
    let (module, _) = cokernel(alg, &pt, &map);
    Ok(TauInverse { vertex: i, targets, entries, module })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleFile {
    pub dims: Vec<usize>,
    #[serde(default)]
    pub arrows: BTreeMap<String, Vec<Vec<ScalarRepr>>>,
}

impl ModuleFile {
    pub fn of(alg: &Algebra, m: &Rep) -> ModuleFile {
        let arrows = alg
            .arrows()
            .iter()
            .zip(&m.maps)
            .map(|(a, mat)| {
                let rows = (0..mat.rows()).map(|r| mat.row(r).iter().map(ScalarRepr::of).collect()).collect();
                (a.name.clone(), rows)
            })
            .collect();
        ModuleFile { dims: m.dims.clone(), arrows }
    }

    pub fn interpret(&self, alg: &Algebra) -> Result<Rep, ModuleError> {
        let f = alg.field();
        if self.dims.len() != alg.n_vertices() {
            return Err(ModuleError::Malformed("dimension vector has the wrong length".into()));
        }
        let mut maps = Vec::new();
        for a in alg.arrows() {
            let (r, c) = (self.dims[a.to], self.dims[a.from]);
            let mut m = Matrix::zeros(f, r, c);
            if let Some(rows) = self.arrows.get(&a.name) {
                if rows.len() != r && !(r == 0 && rows.is_empty()) {
                    return Err(ModuleError::Malformed(format!("arrow {} has the wrong shape", a.name)));
                }
                for (i, row) in rows.iter().enumerate() {
                    if row.len() != c {
                        return Err(ModuleError::Malformed(format!("arrow {} has the wrong shape", a.name)));
                    }
                    for (j, x) in row.iter().enumerate() {
                        m.set(i, j, x.interpret(f).map_err(|e| ModuleError::Malformed(e.to_string()))?);
                    }
                }
            }
            maps.push(m);
        }
        if let Some(name) = self.arrows.keys().find(|k| !alg.arrows().iter().any(|a| &&a.name == k)) {
            return Err(ModuleError::Malformed(format!("unknown arrow {name}")));
        }
        let rep = Rep { dims: self.dims.clone(), maps };
        rep.check(alg)?;
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, Presentation};

    fn build(name: &str) -> Algebra {
        build_algebra(&Presentation::builtin(name, Field::default()).unwrap()).unwrap()
    }

    #[test]
    fn standard_modules_a2() {
        let a = build("a2");
        assert_eq!(Rep::projective(&a, 0).dims, [1, 1]);
        assert_eq!(Rep::projective(&a, 1).dims, [0, 1]);
        assert_eq!(Rep::injective(&a, 0).dims, [1, 0]);
        assert_eq!(Rep::injective(&a, 1).dims, [1, 1]);
        for v in 0..2 {
            Rep::projective(&a, v).check(&a).unwrap();
            Rep::injective(&a, v).check(&a).unwrap();
        }
    }

    #[test]
    fn layers() {
        let a = build("a2");
        let p1 = Rep::projective(&a, 0);
        let l = top_radical_socle(&a, &p1);
        assert_eq!(l.top.dims, [1, 0]);
        assert_eq!(l.soc.0.dims, [0, 1]);
        assert!(top_radical_socle(&a, &Rep::simple(&a, 0)).rad.0.is_zero());
        let b = build("ab0");
        let l = top_radical_socle(&b, &Rep::projective(&b, 0));
        assert_eq!(l.soc.0.dims, [0, 1]);
    }

    #[test]
    fn covers() {
        let a = build("ab0");
        let p1 = Rep::projective(&a, 0);
        // span{a} ⊂ P_1, at vertex 2
        let (sub, _) = submodule_generated(&a, &p1, &[(1, vec![Field::default().one()])]);
        assert_eq!(sub.dims, [0, 1]);
        let c = projective_cover(&a, &sub).unwrap();
        assert_eq!(c.vertices, [1]);
        assert!(c.epi.is_epi(&sub));
        assert!(projective_cover(&a, &Rep::zero(&a)).is_err());
        let c = projective_cover(&a, &p1).unwrap();
        assert_eq!(c.module, p1);
    }

    #[test]
    fn hom_dimensions() {
        let a = build("ab0");
        assert_eq!(hom_modules(&a, &Rep::simple(&a, 0), &Rep::projective(&a, 1)).len(), 1);
        let b = build("a2");
        assert_eq!(hom_modules(&b, &Rep::simple(&b, 0), &Rep::projective(&b, 0)).len(), 0);
        for name in ["a2", "a3", "ab0", "kronecker", "dual-numbers"] {
            let alg = build(name);
            for i in 0..alg.n_vertices() {
                let p = Rep::projective(&alg, i);
                for m in (0..alg.n_vertices()).flat_map(|j| [Rep::projective(&alg, j), Rep::injective(&alg, j)]) {
                    assert_eq!(hom_modules(&alg, &p, &m).len(), m.dims[i]);
                }
            }
        }
    }

    #[test]
    fn nakayama_round_trip() {
        for name in ["a2", "a3", "ab0", "kronecker", "dual-numbers"] {
            let alg = build(name);
            for i in 0..alg.n_vertices() {
                assert_eq!(inverse_nakayama(&alg, &nakayama(&alg, i).unwrap()), Ok(i));
                let p = Rep::projective(&alg, i);
                assert_eq!(projective_vertex(&alg, &p), Ok(i));
            }
        }
        let a = build("a2");
        assert_eq!(nakayama(&a, 0).unwrap().dims, [1, 0]);
        assert_eq!(nakayama(&a, 1).unwrap().dims, Rep::projective(&a, 0).dims);
    }

    #[test]
    fn inverse_translates() {
        let a = build("a2");
        assert_eq!(tau_inverse_simple(&a, 1).unwrap().module.dims, [1, 0]);
        assert_eq!(tau_inverse_simple(&a, 0).err(), Some(ModuleError::SimpleIsInjective("1".into())));
        let b = build("a3");
        let t = tau_inverse_simple(&b, 2).unwrap();
        assert_eq!(t.module.dims, [0, 1, 0]);
        assert!(proj_dim_at_most_one(&b, &t.module));
        let d = build("dual-numbers");
        assert!(matches!(tau_inverse_simple(&d, 0), Err(ModuleError::SimpleIsInjective(_)) | Err(ModuleError::SelfExtension(_))));
    }

    #[test]
    fn module_file_round_trip() {
        let a = build("a3");
        let p = Rep::projective(&a, 0);
        let file = ModuleFile::of(&a, &p);
        let text = serde_json::to_string(&file).unwrap();
        let back: ModuleFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.interpret(&a).unwrap(), p);
    }
}
