//! Breadth-first exploration of the silting quiver, Hasse verification and
//! graph export.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::decompose::{ObjId, Registry};
use crate::mutation::{mutation, MutationError};
use crate::silting::{geq, Certificate, Direction, SiltingObject, Step};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Directions {
    Left,
    Right,
    Both,
}

impl Directions {
    fn list(self) -> Vec<Direction> {
        match self {
            Directions::Left => vec![Direction::Left],
            Directions::Right => vec![Direction::Right],
            Directions::Both => vec![Direction::Left, Direction::Right],
        }
    }
}

#[derive(Clone, Debug)]
pub struct BfsOptions {
    pub depth: usize,
    pub directions: Directions,
    pub mod_shift: bool,
    pub max_nodes: usize,
}

impl Default for BfsOptions {
    fn default() -> Self {
        BfsOptions { depth: 2, directions: Directions::Left, mod_shift: false, max_nodes: 5000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub id: usize,
    /// Basic summand classes, sorted.
    pub summands: Vec<ObjId>,
    pub certificate: Certificate,
    pub trail: Option<Vec<Step>>,
    pub depth: usize,
    /// Every irreducible left mutation of the node was found in the graph.
    pub left_complete: bool,
}

impl Node {
    pub fn object(&self) -> SiltingObject {
        SiltingObject { summands: self.summands.clone(), trail: self.trail.clone(), certificate: self.certificate.clone() }
    }
}

/// `source -> target` is the left mutation of `source` at `at`, replaced by `new`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub at: ObjId,
    pub new: ObjId,
}

#[derive(Clone, Debug, Default)]
pub struct Graph {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub mod_shift: bool,
    /// Node budget ran out before the requested depth.
    pub truncated: bool,
    index: HashMap<Vec<ObjId>, usize>,
}

/// Shift so that the lowest nonzero degree among the summands is 0.
pub fn shift_normal_form(reg: &Registry, summands: &[ObjId]) -> (Vec<ObjId>, i32) {
    let lo = summands.iter().map(|&s| reg.object(s).lo).min().unwrap_or(0);
    (summands.iter().map(|s| s.shifted(lo)).collect(), lo)
}

fn basic(s: &[ObjId]) -> Vec<ObjId> {
    let mut v = s.to_vec();
    v.sort();
    v.dedup();
    v
}

impl Graph {
    pub fn new(mod_shift: bool) -> Graph {
        Graph { mod_shift, ..Graph::default() }
    }

    pub fn find(&self, summands: &[ObjId]) -> Option<usize> {
        self.index.get(&basic(summands)).copied()
    }

    pub fn find_object(&self, reg: &Registry, summands: &[ObjId]) -> Option<usize> {
        self.find(&self.key(reg, summands))
    }

    fn key(&self, reg: &Registry, summands: &[ObjId]) -> Vec<ObjId> {
        let b = basic(summands);
        if self.mod_shift {
            basic(&shift_normal_form(reg, &b).0)
        } else {
            b
        }
    }

    /// Inserts or finds a node; returns `(id, inserted)`.
    pub fn insert(&mut self, reg: &Registry, obj: &SiltingObject, depth: usize) -> (usize, bool) {
        let key = self.key(reg, &obj.summands);
        if let Some(&i) = self.index.get(&key) {
            return (i, false);
        }
        let id = self.nodes.len();
        let mut trail = obj.trail.clone();
        let shift = if self.mod_shift { shift_normal_form(reg, &basic(&obj.summands)).1 } else { 0 };
        if shift != 0 {
            if let Some(t) = trail.as_mut() {
                t.push(Step::Shift { by: shift });
            }
        }
        self.nodes.push(Node {
            id,
            summands: key.clone(),
            certificate: obj.certificate.clone(),
            trail,
            depth,
            left_complete: false,
        });
        self.index.insert(key, id);
        (id, true)
    }

    pub fn add_edge(&mut self, e: Edge) -> bool {
        if self.edges.contains(&e) {
            return false;
        }
        self.edges.push(e);
        true
    }

    /// Recomputes the induced left-mutation arrows among present nodes.
    pub fn close_edges(&mut self, reg: &Registry) -> Result<(), MutationError> {
        for u in 0..self.nodes.len() {
            let obj = self.nodes[u].object();
            let mut complete = true;
            for x in obj.classes() {
                let mu = mutation(reg, &obj, &[x], Direction::Left)?;
                match self.find_object(reg, &mu.result.summands) {
                    Some(v) => {
                        let new = mu.new_part.first().copied().unwrap_or(x);
                        self.add_edge(Edge { source: u, target: v, at: x, new });
                    }
                    None => complete = false,
                }
            }
            self.nodes[u].left_complete = complete;
        }
        self.edges.sort_by_key(|e| (e.source, e.target, e.at));
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

pub fn bfs(reg: &Registry, start: &SiltingObject, opts: &BfsOptions) -> Result<Graph, MutationError> {
    let mut g = Graph::new(opts.mod_shift);
    let (root, _) = g.insert(reg, &start.basic(), 0);
    let mut frontier = vec![root];
    for d in 0..opts.depth {
        let mut next = Vec::new();
        for &u in &frontier {
            let obj = g.nodes[u].object();
            for dir in opts.directions.list() {
                for x in obj.classes() {
                    if g.nodes.len() >= opts.max_nodes {
                        g.truncated = true;
                        g.close_edges(reg)?;
                        return Ok(g);
                    }
                    let mu = mutation(reg, &obj, &[x], dir)?;
                    let (v, fresh) = g.insert(reg, &mu.result.basic(), d + 1);
                    if fresh {
                        next.push(v);
                    }
                    let new = mu.new_part.first().copied().unwrap_or(x);
                    if dir == Direction::Right {
                        g.add_edge(Edge { source: v, target: u, at: new, new: x });
                    }
                }
            }
        }
        frontier = next;
    }
    g.close_edges(reg)?;
    Ok(g)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct HasseReport {
    pub arrows_checked: usize,
    pub covers_checked: usize,
    /// Nodes whose left mutations leave the explored set; covers out of them
    /// are not checked.
    pub exempt: Vec<usize>,
    pub violations: Vec<String>,
    pub note: String,
}

impl HasseReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `geq[i][j]` for all node pairs.
pub fn order_matrix(reg: &Registry, g: &Graph) -> Vec<Vec<bool>> {
    g.nodes.iter().map(|a| g.nodes.iter().map(|b| geq(reg, &a.summands, &b.summands)).collect()).collect()
}

pub fn hasse_check(reg: &Registry, g: &Graph) -> Result<HasseReport, MutationError> {
    let mut rep = HasseReport {
        note: "covering relations are checked within the explored node set only".into(),
        ..HasseReport::default()
    };
    if g.mod_shift {
        rep.note = "order checks skipped: nodes are identified up to shift".into();
        return Ok(rep);
    }
    let n = g.nodes.len();
    let ge = order_matrix(reg, g);
    let gt = |a: usize, b: usize| a != b && ge[a][b] && !ge[b][a];
    let between = |a: usize, b: usize| (0..n).find(|&l| l != a && l != b && gt(a, l) && gt(l, b));
    let label = |i: usize| format!("#{i} {}", g.nodes[i].object().describe(reg));
    for e in &g.edges {
        rep.arrows_checked += 1;
        if !gt(e.source, e.target) {
            rep.violations.push(format!("arrow {} -> {} is not strictly decreasing", label(e.source), label(e.target)));
        } else if let Some(l) = between(e.source, e.target) {
            rep.violations.push(format!(
                "arrow {} -> {} factors through {}",
                label(e.source),
                label(e.target),
                label(l)
            ));
        }
        let back = mutation(reg, &g.nodes[e.target].object(), &[e.new], Direction::Right)?;
        if basic(&back.result.summands) != g.nodes[e.source].summands {
            rep.violations.push(format!("right mutation of {} does not return {}", label(e.target), label(e.source)));
        }
    }
    for a in 0..n {
        if !g.nodes[a].left_complete {
            rep.exempt.push(a);
            continue;
        }
        for b in 0..n {
            if gt(a, b) && between(a, b).is_none() {
                rep.covers_checked += 1;
                if !g.edges.iter().any(|e| e.source == a && e.target == b) {
                    rep.violations.push(format!("cover {} > {} has no arrow", label(a), label(b)));
                }
            }
        }
    }
    Ok(rep)
}

fn node_label(reg: &Registry, g: &Graph, n: &Node) -> String {
    let d = n.object().describe(reg);
    if g.mod_shift {
        format!("[{d}]")
    } else {
        d
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn to_dot(reg: &Registry, g: &Graph) -> String {
    let mut out = String::from("digraph silting {\n");
    for n in &g.nodes {
        let _ = writeln!(out, "  n{} [label=\"{}\"];", n.id, escape(&node_label(reg, g, n)));
    }
    for e in &g.edges {
        let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.source, e.target, escape(&reg.label(e.at)));
    }
    out.push_str("}\n");
    out
}

pub fn to_json(reg: &Registry, g: &Graph) -> serde_json::Value {
    let nodes: Vec<_> = g
        .nodes
        .iter()
        .map(|n| {
            let (_, shift) = shift_normal_form(reg, &n.summands);
            json!({
                "id": n.id,
                "summands": n.summands,
                "labels": n.summands.iter().map(|&s| reg.label(s)).collect::<Vec<_>>(),
                "label": node_label(reg, g, n),
                "certificate": n.certificate,
                "gamma": n.summands.iter().map(|&s| reg.k0_class(s)).collect::<Vec<_>>(),
                "shift_normal_form": shift,
                "depth": n.depth,
            })
        })
        .collect();
    let edges: Vec<_> = g
        .edges
        .iter()
        .map(|e| {
            json!({
                "source": e.source,
                "target": e.target,
                "at": e.at,
                "new": e.new,
                "label": reg.label(e.at),
            })
        })
        .collect();
    json!({
        "field": reg.algebra().field().label(),
        "algebra_hash": reg.algebra().hash(),
        "mod_shift": g.mod_shift,
        "truncated": g.truncated,
        "nodes": nodes,
        "edges": edges,
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
    fn ab0_depth_one() {
        let r = reg("ab0");
        let opts = BfsOptions { depth: 1, ..BfsOptions::default() };
        let g = bfs(&r, &SiltingObject::regular(&r), &opts).unwrap();
        assert_eq!(g.nodes.len(), 3);
        assert_eq!(g.edges.len(), 2);
        let dot = to_dot(&r, &g);
        assert_eq!(dot.matches("->").count(), 2);
        assert!(hasse_check(&r, &g).unwrap().passed());
    }

    #[test]
    fn chain_for_local_algebra() {
        let r = reg("dual-numbers");
        let opts = BfsOptions { depth: 2, directions: Directions::Both, ..BfsOptions::default() };
        let g = bfs(&r, &SiltingObject::regular(&r), &opts).unwrap();
        assert_eq!(g.nodes.len(), 5);
        assert_eq!(g.edges.len(), 4);
        for e in &g.edges {
            let s = g.nodes[e.source].summands[0];
            assert_eq!(g.nodes[e.target].summands, [s.shifted(1)]);
        }
        assert!(hasse_check(&r, &g).unwrap().passed());
        let opts = BfsOptions { depth: 2, directions: Directions::Both, mod_shift: true, ..BfsOptions::default() };
        let g = bfs(&r, &SiltingObject::regular(&r), &opts).unwrap();
        assert_eq!(g.nodes.len(), 1);
        assert!(to_dot(&r, &g).contains("[P1]"));
    }

    #[test]
    fn empty_export() {
        let r = reg("k");
        let g = Graph::new(false);
        assert_eq!(to_dot(&r, &g), "digraph silting {\n}\n");
        assert_eq!(to_json(&r, &g)["nodes"].as_array().unwrap().len(), 0);
    }
}
