use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use silting_core::decompose::{ObjId, Registry};
use silting_core::explorer::{to_json, Edge, Graph};
use silting_core::mutation::mutation;
use silting_core::silting::{compare, Direction, SiltingObject};

use crate::error::ApiError;

/// One acknowledged request that changed the session state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "lowercase")]
pub enum Action {
    Mutate { node: usize, summand_class: String, direction: Direction },
    Undo,
}

pub struct Session {
    pub id: String,
    pub reg: Arc<Registry>,
    pub graph: Graph,
    pub current: usize,
    /// Nodes to return to on undo, most recent last.
    pub history: Vec<usize>,
    /// Every acknowledged action in order; replaying it rebuilds the graph.
    pub log: Vec<Action>,
}

impl Session {
    pub fn new(id: String, reg: Arc<Registry>) -> Session {
        let mut graph = Graph::new(false);
        graph.insert(&reg, &SiltingObject::regular(&reg), 0);
        Session { id, reg, graph, current: 0, history: Vec::new(), log: Vec::new() }
    }

    /// A class is named by its registry id (`base:shift`) or its label.
    pub fn resolve_class(&self, node: usize, name: &str) -> Result<ObjId, ApiError> {
        let summands = &self.graph.nodes[node].summands;
        summands
            .iter()
            .copied()
            .find(|&s| s.to_string() == name || self.reg.label(s) == name)
            .ok_or_else(|| ApiError::unprocessable("InvalidSummandClass", format!("{name:?} is not a summand class of node {node}")))
    }

    pub fn node(&self, id: usize) -> Result<&silting_core::explorer::Node, ApiError> {
        self.graph.nodes.get(id).ok_or_else(|| ApiError::not_found("UnknownNode", format!("no node {id}")))
    }

    /// Mutates the current node; returns the new node id and the arrow.
    pub fn mutate(&mut self, name: &str, direction: Direction) -> Result<(usize, Edge), ApiError> {
        let u = self.current;
        let x = self.resolve_class(u, name)?;
        let obj = self.graph.nodes[u].object();
        let mu = mutation(&self.reg, &obj, &[x], direction).map_err(ApiError::engine)?;
        let depth = self.graph.nodes[u].depth + 1;
        let (v, _) = self.graph.insert(&self.reg, &mu.result.basic(), depth);
        let new = mu.new_part.first().copied().unwrap_or(x);
        let edge = match direction {
            Direction::Left => Edge { source: u, target: v, at: x, new },
            Direction::Right => Edge { source: v, target: u, at: new, new: x },
        };
        self.graph.add_edge(edge);
        self.history.push(u);
        self.current = v;
        self.log.push(Action::Mutate { node: u, summand_class: x.to_string(), direction });
        Ok((v, edge))
    }

    pub fn undo(&mut self) -> Result<(), ApiError> {
        let prev = self.history.pop().ok_or_else(|| ApiError::conflict("NothingToUndo", "history is empty"))?;
        self.current = prev;
        self.log.push(Action::Undo);
        Ok(())
    }

    /// Rebuilds a session from the root by replaying an action log.
    pub fn replay(id: String, reg: Arc<Registry>, log: &[Action]) -> Result<Session, ApiError> {
        let mut s = Session::new(id, reg);
        for a in log {
            match a {
                Action::Mutate { node, summand_class, direction } => {
                    if *node != s.current {
                        return Err(ApiError::unprocessable("BadLog", "log does not start from the current node"));
                    }
                    s.mutate(summand_class, *direction)?;
                }
                Action::Undo => s.undo()?,
            }
        }
        Ok(s)
    }

    fn class_view(&self, id: ObjId) -> Value {
        let alg = self.reg.algebra();
        let c = self.reg.object(id);
        let dims: Vec<Value> = c.graded_dims(alg.n_vertices()).into_iter().map(|(d, v)| json!({ "degree": d, "dims": v })).collect();
        json!({
            "summand_class": id.to_string(),
            "label": self.reg.label(id),
            "graded_dims": dims,
            "gamma": self.reg.k0_class(id),
        })
    }

    pub fn node_view(&self, id: usize) -> Value {
        let n = &self.graph.nodes[id];
        let labels: Vec<String> = n.summands.iter().map(|&s| self.reg.label(s)).collect();
        json!({
            "id": n.id,
            "label": labels.join(" + "),
            "summands": n.summands.iter().map(|&s| self.class_view(s)).collect::<Vec<_>>(),
            "certificate": n.certificate,
            "depth": n.depth,
        })
    }

    pub fn edge_view(&self, e: &Edge) -> Value {
        json!({
            "source": e.source,
            "target": e.target,
            "at": e.at.to_string(),
            "new": e.new.to_string(),
            "label": self.reg.label(e.at),
        })
    }

    pub fn state_view(&self) -> Value {
        let n = &self.graph.nodes[self.current];
        let available: Vec<Value> = n
            .summands
            .iter()
            .flat_map(|&s| {
                [Direction::Left, Direction::Right].map(|d| json!({ "summand_class": s.to_string(), "direction": d }))
            })
            .collect();
        json!({
            "session_id": self.id,
            "current": self.node_view(self.current),
            "available_mutations": available,
            "node_count": self.graph.node_count(),
            "edge_count": self.graph.edges.len(),
            "history": self.history,
            "log": self.log,
        })
    }

    /// The explored graph, optionally identified up to shift.
    pub fn graph_view(&self, mod_shift: bool) -> Value {
        if !mod_shift {
            return to_json(&self.reg, &self.graph);
        }
        let mut q = Graph::new(true);
        let ids: Vec<usize> = self.graph.nodes.iter().map(|n| q.insert(&self.reg, &n.object(), n.depth).0).collect();
        for e in &self.graph.edges {
            let (at, new) = normalise_edge(&self.reg, &self.graph.nodes[e.source].summands, e);
            q.add_edge(Edge { source: ids[e.source], target: ids[e.target], at, new });
        }
        to_json(&self.reg, &q)
    }

    pub fn compare(&self, a: usize, b: usize) -> Result<Value, ApiError> {
        let (m, n) = (self.node(a)?, self.node(b)?);
        let r = compare(&self.reg, &m.summands, &n.summands);
        Ok(json!({ "a": a, "b": b, "relation": r.to_string() }))
    }
}

/// Edge labels follow their source node when it is shifted to normal form.
fn normalise_edge(reg: &Registry, source: &[ObjId], e: &Edge) -> (ObjId, ObjId) {
    let lo = source.iter().map(|&s| reg.object(s).lo).min().unwrap_or(0);
    (e.at.shifted(lo), e.new.shifted(lo))
}
