use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use silting_core::complex::{cone, hom_space, ChainMap, Complex};
use silting_core::decompose::{ObjId, Registry};
use silting_core::exceptional::{
    braid_apply, connectivity_probe, exceptional_to_silting, hereditary_connectivity_probe, silting_to_exceptional,
    Generator, ProbeResult,
};
use silting_core::explorer::{bfs, hasse_check, BfsOptions, Directions, Graph};
use silting_core::field::integer_determinant;
use silting_core::module_cat::proj_dim_at_most_one;
use silting_core::mutation::{bb_tilting, left_mutation, okuyama_rickard, or_order_check, right_mutation};
use silting_core::silting::{
    compare, gamma, gamma_matrix, is_presilting, is_tilting, k0_unimodular, Relation, SiltingObject,
};
use silting_core::{build_algebra, Field, Presentation};

const CORPUS: [&str; 5] = ["a2", "a3", "kronecker", "ab0", "dual-numbers"];

struct Entry {
    name: &'static str,
    reg: Registry,
    graph: Graph,
}

fn registry(name: &str) -> Registry {
    let pres = Presentation::builtin(name, Field::default()).unwrap();
    Registry::new(Arc::new(build_algebra(&pres).unwrap()))
}

fn explore(reg: &Registry, depth: usize, directions: Directions) -> Graph {
    let opts = BfsOptions { depth, directions, mod_shift: false, max_nodes: 5000 };
    let g = bfs(reg, &SiltingObject::regular(reg), &opts).unwrap();
    assert!(!g.truncated, "node budget exhausted");
    g
}

fn corpus() -> Vec<Entry> {
    CORPUS
        .iter()
        .map(|&name| {
            let reg = registry(name);
            let graph = explore(&reg, 3, Directions::Both);
            Entry { name, reg, graph }
        })
        .collect()
}

fn two_term(reg: &Registry, from: usize, to: usize) -> ObjId {
    let alg = reg.algebra();
    let (p, q) = (Complex::projective(from), Complex::projective(to));
    let h = hom_space(alg, &p, &q);
    assert_eq!(h.dim(), 1);
    reg.register(&cone(alg, &h.class_map(alg, 0), &p, &q))
}

fn node_set(g: &Graph) -> BTreeSet<Vec<ObjId>> {
    g.nodes.iter().map(|n| n.summands.clone()).collect()
}

fn obj(parts: &[ObjId]) -> Vec<ObjId> {
    let mut v = parts.to_vec();
    v.sort();
    v
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn silting_quiver_fork() -> Result<(), String> {
    let reg = registry("ab0");
    let (p1, p2) = (reg.projective(0), reg.projective(1));
    let x = two_term(&reg, 0, 1);
    let y = two_term(&reg, 1, 0);
    let g1 = explore(&reg, 1, Directions::Left);
    let a = obj(&[p1, p2]);
    let first: BTreeSet<_> = [obj(&[x, p2]), obj(&[y, p1])].into_iter().collect();
    let mut want1 = first.clone();
    want1.insert(a.clone());
    ensure(node_set(&g1) == want1, || format!("depth 1 nodes {:?}", node_set(&g1)))?;
    ensure(g1.edges.len() == 2 && g1.edges.iter().all(|e| e.source == 0), || "depth 1 arrows".into())?;
    let g2 = explore(&reg, 2, Directions::Left);
    let added: BTreeSet<_> = node_set(&g2).difference(&want1).cloned().collect();
    let want2: BTreeSet<_> = [
        obj(&[x.shifted(1), p2]),
        obj(&[x, p1.shifted(1)]),
        obj(&[y.shifted(1), p1]),
        obj(&[y, p2.shifted(1)]),
    ]
    .into_iter()
    .collect();
    ensure(added == want2, || format!("depth 2 added {added:?}"))
}

fn local_chain() -> Result<(), String> {
    for name in ["dual-numbers", "k"] {
        let reg = registry(name);
        let g = explore(&reg, 3, Directions::Both);
        let a = reg.regular();
        let shifts: BTreeSet<_> = (-3..=3).map(|i| obj(&a.iter().map(|s| s.shifted(i)).collect::<Vec<_>>())).collect();
        ensure(node_set(&g) == shifts, || format!("{name}: nodes {:?}", node_set(&g)))?;
        ensure(g.edges.len() == 6, || format!("{name}: {} arrows", g.edges.len()))?;
        for e in &g.edges {
            let s = &g.nodes[e.source].summands;
            let t = &g.nodes[e.target].summands;
            ensure(t == &s.iter().map(|x| x.shifted(1)).collect::<Vec<_>>(), || format!("{name}: arrow {s:?} -> {t:?}"))?;
        }
    }
    Ok(())
}

fn mutation_is_silting(c: &[Entry]) -> Result<(), String> {
    for e in c {
        let n = e.reg.algebra().n_vertices();
        for node in &e.graph.nodes {
            let s = &node.summands;
            ensure(is_presilting(&e.reg, s), || format!("{}: {:?} not presilting", e.name, s))?;
            ensure(s.len() == n, || format!("{}: delta {} for {:?}", e.name, s.len(), s))?;
            ensure(k0_unimodular(&e.reg, s), || format!("{}: K0 not unimodular for {:?}", e.name, s))?;
        }
    }
    Ok(())
}

fn inverse_and_order(c: &[Entry]) -> Result<(), String> {
    for e in c {
        for node in &e.graph.nodes {
            let m = node.object();
            for x in m.classes() {
                let mu = left_mutation(&e.reg, &m, &[x]).map_err(|err| err.to_string())?;
                let back = right_mutation(&e.reg, &mu.result, &mu.new_part).map_err(|err| err.to_string())?;
                ensure(back.result.summands == m.summands, || format!("{}: inverse fails at {:?}", e.name, x))?;
                let rel = compare(&e.reg, &m.summands, &mu.result.summands);
                ensure(rel == Relation::Greater, || format!("{}: {:?} vs its mutation: {rel}", e.name, m.summands))?;
            }
        }
    }
    Ok(())
}

fn hasse(c: &[Entry]) -> Result<(), String> {
    for e in c {
        let mut graphs = vec![&e.graph];
        let left = explore(&e.reg, 3, Directions::Left);
        graphs.push(&left);
        for g in graphs {
            let rep = hasse_check(&e.reg, g).map_err(|err| err.to_string())?;
            ensure(rep.passed(), || format!("{}: {:?}", e.name, rep.violations))?;
        }
    }
    Ok(())
}

fn random_map(reg: &Registry, rng: &mut ChaCha8Rng, c: &Complex, d: &Complex) -> ChainMap {
    let alg = reg.algebra();
    let h = hom_space(alg, c, d);
    let coords: Vec<_> = (0..h.dim()).map(|_| alg.field().from_i64(rng.gen_range(-2..=2))).collect();
    h.map_of(alg, &coords)
}

fn grothendieck(c: &[Entry]) -> Result<(), String> {
    for e in c {
        let a = e.reg.regular();
        for node in &e.graph.nodes {
            let gm = gamma_matrix(&e.reg, &a, &node.summands).map_err(|err| err.to_string())?;
            let det = integer_determinant(&gm);
            ensure(det == 1.into() || det == (-1).into(), || format!("{}: det {det} for {:?}", e.name, node.summands))?;
            let k0: Vec<_> = node.summands.iter().map(|&s| e.reg.k0_class(s)).collect();
            ensure(gm == k0, || format!("{}: gamma on A differs from K0", e.name))?;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x6a3);
        let ids: Vec<ObjId> = e.graph.nodes.iter().flat_map(|n| n.summands.iter().copied()).collect();
        let bases: Vec<Vec<ObjId>> = (0..3).map(|_| e.graph.nodes[rng.gen_range(0..e.graph.nodes.len())].summands.clone()).collect();
        for t in 0..100 {
            let m = &bases[t % bases.len()];
            let ci = ids[rng.gen_range(0..ids.len())];
            let di = ids[rng.gen_range(0..ids.len())];
            let (cx, dx) = (e.reg.object(ci), e.reg.object(di));
            let f = random_map(&e.reg, &mut rng, &cx, &dx);
            let cn = cone(e.reg.algebra(), &f, &cx, &dx);
            let g = |x: &Complex| gamma(&e.reg, m, x).map_err(|err| err.to_string());
            let (gc, gd, gn) = (g(&cx)?, g(&dx)?, g(&cn)?);
            let sum: Vec<i64> = (0..gc.len()).map(|i| gc[i] - gd[i] + gn[i]).collect();
            ensure(sum.iter().all(|&v| v == 0), || format!("{}: additivity fails for {ci} -> {di}: {sum:?}", e.name))?;
        }
    }
    Ok(())
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (1..(1usize << n)).map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect()).collect()
}

fn okuyama_rickard_check(c: &[Entry]) -> Result<(), String> {
    for e in c {
        let n = e.reg.algebra().n_vertices();
        let all = subsets(n);
        for s in &all {
            let t = okuyama_rickard(&e.reg, s).map_err(|err| err.to_string())?;
            ensure(t.matches_mutation, || format!("{}: OR({s:?}) differs from right mutation", e.name))?;
            ensure(t.criterion_tilting == t.is_tilting, || format!("{}: tilting criterion disagrees at {s:?}", e.name))?;
        }
        for s in &all {
            for s2 in &all {
                let (contains, order) = or_order_check(&e.reg, s, s2).map_err(|err| err.to_string())?;
                ensure(contains == order, || format!("{}: order equivalence fails at {s:?}, {s2:?}", e.name))?;
            }
        }
    }
    Ok(())
}

fn apr_bb(c: &[Entry]) -> Result<(), String> {
    let mut found = BTreeSet::new();
    for e in c {
        for v in 0..e.reg.algebra().n_vertices() {
            let Ok(b) = bb_tilting(&e.reg, v) else { continue };
            found.insert((e.name, v));
            ensure(b.matches_mutation, || format!("{}: BB at {} differs from left mutation", e.name, v + 1))?;
            ensure(b.is_tilting, || format!("{}: BB at {} not tilting", e.name, v + 1))?;
            let pd = proj_dim_at_most_one(e.reg.algebra(), &b.module);
            ensure(pd, || format!("{}: BB module at {} has pd > 1", e.name, v + 1))?;
        }
    }
    ensure(found.contains(&("a2", 1)) && found.contains(&("a3", 2)), || format!("preconditions failed: {found:?}"))
}

fn symmetric_tilting(c: &[Entry]) -> Result<(), String> {
    let e = c.iter().find(|e| e.name == "dual-numbers").unwrap();
    for node in &e.graph.nodes {
        ensure(is_tilting(&e.reg, &node.summands), || format!("{:?} is not tilting", node.summands))?;
    }
    Ok(())
}

fn random_word(rng: &mut ChaCha8Rng, n: usize) -> Vec<Generator> {
    let len = rng.gen_range(1..=4);
    (0..len).map(|_| Generator { index: rng.gen_range(1..n), inverse: rng.gen_bool(0.5) }).collect()
}

fn braids(c: &[Entry]) -> Result<(), String> {
    let err = |x: silting_core::exceptional::ExceptionalError| x.to_string();
    let a3 = c.iter().find(|e| e.name == "a3").unwrap();
    let s = |k: usize, inverse: bool| Generator { index: k, inverse };
    let mut checked = 0;
    for node in &a3.graph.nodes {
        let seq = silting_to_exceptional(&a3.reg, &node.summands).map_err(err)?;
        for inv in [false, true] {
            let lhs = braid_apply(&a3.reg, &seq, &[s(1, inv), s(2, inv), s(1, inv)]).map_err(err)?;
            let rhs = braid_apply(&a3.reg, &seq, &[s(2, inv), s(1, inv), s(2, inv)]).map_err(err)?;
            ensure(lhs == rhs, || format!("braid relation fails on {seq:?}"))?;
            checked += 1;
        }
    }
    ensure(checked > 0, || "no sequences".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xb4a1d);
    for t in 0..50 {
        let e = c.iter().find(|e| e.name == if t % 2 == 0 { "a2" } else { "a3" }).unwrap();
        let node = &e.graph.nodes[rng.gen_range(0..e.graph.nodes.len())];
        let seq = silting_to_exceptional(&e.reg, &node.summands).map_err(err)?;
        let w = random_word(&mut rng, seq.len());
        let inv: Vec<Generator> = w.iter().rev().map(|g| g.inv()).collect();
        let moved = braid_apply(&e.reg, &seq, &w).map_err(err)?;
        let back = braid_apply(&e.reg, &moved, &inv).map_err(err)?;
        ensure(back == seq, || format!("{}: word {w:?} not undone", e.name))?;
    }
    for e in c.iter().filter(|e| e.name == "a2" || e.name == "a3") {
        for node in &e.graph.nodes {
            let seq = silting_to_exceptional(&e.reg, &node.summands).map_err(err)?;
            let t = exceptional_to_silting(&e.reg, &seq).map_err(err)?;
            ensure(!t.object.certificate.is_failed(), || format!("{}: {}", e.name, t.object.certificate))?;
            let p = hereditary_connectivity_probe(&e.reg, &node.summands, &t.object.summands, 10).map_err(err)?;
            ensure(matches!(p, ProbeResult::Path(_)), || format!("{}: {:?} not reached", e.name, t.object.summands))?;
        }
    }
    Ok(())
}

fn transitivity() -> Result<(), String> {
    let reg = registry("a2");
    let g = explore(&reg, 3, Directions::Both);
    ensure(g.nodes.len() >= 10, || format!("only {} nodes", g.nodes.len()))?;
    let first: Vec<_> = g.nodes.iter().take(10).map(|n| n.summands.clone()).collect();
    for i in 0..first.len() {
        for j in i + 1..first.len() {
            let p = connectivity_probe(&reg, &first[i], &first[j], 12).map_err(|e| e.to_string())?;
            ensure(matches!(p, ProbeResult::Path(_)), || format!("{:?} and {:?} not connected", first[i], first[j]))?;
        }
    }
    Ok(())
}

fn run(label: &str, f: impl FnOnce() -> Result<(), String>) -> bool {
    let t = Instant::now();
    let r = catch_unwind(AssertUnwindSafe(f));
    let secs = t.elapsed().as_secs_f64();
    match r {
        Ok(Ok(())) => {
            println!("PASS {label} ({secs:.2}s)");
            true
        }
        Ok(Err(msg)) => {
            println!("FAIL {label} ({secs:.2}s): {msg}");
            false
        }
        Err(_) => {
            println!("FAIL {label} ({secs:.2}s): panicked");
            false
        }
    }
}

fn main() {
    let t = Instant::now();
    let c = corpus();
    println!("corpus explored in {:.2}s: {}", t.elapsed().as_secs_f64(), c.iter().map(|e| format!("{} {}", e.name, e.graph.nodes.len())).collect::<Vec<_>>().join(", "));
    let results = [
        run("1 fork of the two-cycle algebra", silting_quiver_fork),
        run("2 shift chain for local algebras", local_chain),
        run("3 mutations are silting", || mutation_is_silting(&c)),
        run("4 inverse and order laws", || inverse_and_order(&c)),
        run("5 arrows are covering relations", || hasse(&c)),
        run("6 gamma basis and additivity", || grothendieck(&c)),
        run("7 Okuyama-Rickard complexes", || okuyama_rickard_check(&c)),
        run("8 APR/BB tilting", || apr_bb(&c)),
        run("9 symmetric algebra tilting", || symmetric_tilting(&c)),
        run("10 braid action and conversions", || braids(&c)),
        run("11 hereditary transitivity probe", transitivity),
    ];
    let failed = results.iter().filter(|r| !**r).count();
    println!("{} of {} criteria passed in {:.2}s", results.len() - failed, results.len(), t.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
