//! Graphs with paired directed edges: every edge `e` has an inverse `ē` with
//! `o(e) = t(ē)`, `ē != e`, and the involution is its own inverse. Trees are
//! the connected graphs with no non-trivial reduced loop.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("edge {edge:?} references unknown {what} {id:?}")]
    UnknownReference { edge: String, what: &'static str, id: String },
    #[error("graph fails the edge axioms: {0}")]
    InvalidGraph(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// One directed half-edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRecord {
    pub id: String,
    pub origin: usize,
    pub terminus: usize,
    pub inverse: usize,
}

/// A finite graph in the paired-edge formalism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGraph {
    vertices: Vec<String>,
    vertex_index: BTreeMap<String, usize>,
    edges: Vec<EdgeRecord>,
    edge_index: BTreeMap<String, usize>,
}

/// A single violated edge axiom, with the offending edge as witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    SelfInverse { edge: String },
    InvolutionBroken { edge: String, inverse_of_inverse: String },
    EndpointMismatch { edge: String, inverse: String },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::SelfInverse { edge } => write!(f, "self-inverse edge {edge:?}"),
            AxiomViolation::InvolutionBroken { edge, inverse_of_inverse } => {
                write!(f, "inverse of inverse of {edge:?} is {inverse_of_inverse:?}")
            }
            AxiomViolation::EndpointMismatch { edge, inverse } => {
                write!(f, "origin/terminus mismatch between {edge:?} and {inverse:?}")
            }
        }
    }
}

/// Outcome of `validate`: empty iff all edge axioms hold.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphValidation {
    pub violations: Vec<AxiomViolation>,
}

impl GraphValidation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Witness for a failed tree check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotATree {
    Empty,
    Disconnected { a: String, b: String },
    ReducedLoop { vertices: Vec<String> },
}

impl FiniteGraph {
    pub fn new() -> Self {
        FiniteGraph {
            vertices: Vec::new(),
            vertex_index: BTreeMap::new(),
            edges: Vec::new(),
            edge_index: BTreeMap::new(),
        }
    }

    pub fn add_vertex(&mut self, id: impl Into<String>) -> Result<usize, GraphError> {
        let id = id.into();
        if self.vertex_index.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        let ix = self.vertices.len();
        self.vertex_index.insert(id.clone(), ix);
        self.vertices.push(id);
        Ok(ix)
    }

    /// Adds the pair `e`, `ē` between two existing vertices.
    pub fn add_edge_pair(
        &mut self,
        id: impl Into<String>,
        rev_id: impl Into<String>,
        origin: &str,
        terminus: &str,
    ) -> Result<(), GraphError> {
        let id = id.into();
        let rev_id = rev_id.into();
        let o = self.vertex_ix(origin)?;
        let t = self.vertex_ix(terminus)?;
        if self.edge_index.contains_key(&id) {
            return Err(GraphError::DuplicateEdge(id));
        }
        if id == rev_id || self.edge_index.contains_key(&rev_id) {
            return Err(GraphError::DuplicateEdge(rev_id));
        }
        let fwd = self.edges.len();
        let bwd = fwd + 1;
        self.edge_index.insert(id.clone(), fwd);
        self.edge_index.insert(rev_id.clone(), bwd);
        self.edges.push(EdgeRecord { id, origin: o, terminus: t, inverse: bwd });
        self.edges.push(EdgeRecord { id: rev_id, origin: t, terminus: o, inverse: fwd });
        Ok(())
    }

    fn vertex_ix(&self, id: &str) -> Result<usize, GraphError> {
        self.vertex_index.get(id).copied().ok_or_else(|| GraphError::UnknownReference {
            edge: String::new(),
            what: "vertex",
            id: id.into(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, ix: usize) -> &str {
        &self.vertices[ix]
    }

    pub fn vertex_lookup(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn edge_lookup(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    /// Neighbor vertex indices, sorted by vertex id.
    pub fn neighbor_ixs(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter(|e| e.origin == v)
            .map(|e| e.terminus)
            .collect();
        out.sort_by(|&a, &b| self.vertices[a].cmp(&self.vertices[b]));
        out.dedup();
        out
    }

    /// Reports every violated edge axiom; empty report iff the graph is valid.
    pub fn validate(&self) -> GraphValidation {
        let mut violations = Vec::new();
        for e in &self.edges {
            let inv = &self.edges[e.inverse];
            if e.inverse == self.edge_index[&e.id] {
                violations.push(AxiomViolation::SelfInverse { edge: e.id.clone() });
                continue;
            }
            if inv.inverse != self.edge_index[&e.id] {
                violations.push(AxiomViolation::InvolutionBroken {
                    edge: e.id.clone(),
                    inverse_of_inverse: self.edges[inv.inverse].id.clone(),
                });
            }
            if e.origin != inv.terminus || e.terminus != inv.origin {
                violations.push(AxiomViolation::EndpointMismatch {
                    edge: e.id.clone(),
                    inverse: inv.id.clone(),
                });
            }
        }
        GraphValidation { violations }
    }

    /// True iff connected and without non-trivial reduced loops. On failure
    /// returns a witness: a disconnected pair or a reduced loop.
    pub fn is_tree(&self) -> Result<Result<(), NotATree>, GraphError> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(GraphError::InvalidGraph(report.violations[0].to_string()));
        }
        if self.vertices.is_empty() {
            return Ok(Err(NotATree::Empty));
        }
        // BFS over geometric edges; a revisit through a different edge pair
        // closes a reduced loop.
        let n = self.vertices.len();
        let mut parent_edge: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for (ix, e) in self.edges.iter().enumerate() {
                if e.origin != v {
                    continue;
                }
                if let Some(pe) = parent_edge[v] {
                    if self.edges[pe].inverse == ix {
                        continue; // walking straight back along the arrival edge
                    }
                }
                if e.terminus == v {
                    // a self-loop is itself a reduced loop of length 1
                    return Ok(Err(NotATree::ReducedLoop {
                        vertices: vec![self.vertices[v].clone(), self.vertices[v].clone()],
                    }));
                }
                if seen[e.terminus] {
                    // reconstruct the loop: lca -> v, cross edge, terminus -> lca
                    let mut path_a = self.path_to_root(v, &parent_edge);
                    let mut path_b = self.path_to_root(e.terminus, &parent_edge);
                    while path_a.len() > 1
                        && path_b.len() > 1
                        && path_a[path_a.len() - 1] == path_b[path_b.len() - 1]
                        && path_a[path_a.len() - 2] == path_b[path_b.len() - 2]
                    {
                        path_a.pop();
                        path_b.pop();
                    }
                    let lca = *path_a.last().unwrap();
                    debug_assert_eq!(Some(&lca), path_b.last());
                    let mut cycle = vec![self.vertices[lca].clone()];
                    cycle.extend(path_a.iter().rev().skip(1).map(|&u| self.vertices[u].clone()));
                    cycle.extend(path_b.iter().take(path_b.len() - 1).map(|&u| self.vertices[u].clone()));
                    cycle.push(self.vertices[lca].clone());
                    return Ok(Err(NotATree::ReducedLoop { vertices: cycle }));
                }
                seen[e.terminus] = true;
                parent_edge[e.terminus] = Some(ix);
                queue.push_back(e.terminus);
            }
        }
        if let Some(unreached) = (0..n).find(|&v| !seen[v]) {
            return Ok(Err(NotATree::Disconnected {
                a: self.vertices[0].clone(),
                b: self.vertices[unreached].clone(),
            }));
        }
        Ok(Ok(()))
    }

    fn path_to_root(&self, mut v: usize, parent_edge: &[Option<usize>]) -> Vec<usize> {
        let mut path = vec![v];
        while let Some(pe) = parent_edge[v] {
            v = self.edges[pe].origin;
            path.push(v);
        }
        path
    }

    /// Number of connected components (on the underlying undirected graph).
    pub fn component_count(&self) -> usize {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut comps = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            comps += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for e in self.edges.iter().filter(|e| e.origin == v) {
                    if !seen[e.terminus] {
                        seen[e.terminus] = true;
                        queue.push_back(e.terminus);
                    }
                }
            }
        }
        comps
    }

    /// Line-oriented serialization: `vertex <id>` and
    /// `edge <id> <origin> <terminus> <inverse-id>` lines.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&format!("vertex {v}\n"));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "edge {} {} {} {}\n",
                e.id,
                self.vertices[e.origin],
                self.vertices[e.terminus],
                self.edges[e.inverse].id
            ));
        }
        out
    }

    /// Parses the `to_lines` format. Edge lines may appear in any order but
    /// each pair must be mutually inverse.
    pub fn from_lines(text: &str) -> Result<Self, GraphError> {
        let mut g = FiniteGraph::new();
        let mut pending: Vec<(usize, String, String, String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["vertex", id] => {
                    g.add_vertex(*id)
                        .map_err(|e| GraphError::Parse { line: lineno + 1, message: e.to_string() })?;
                }
                ["edge", id, o, t, inv] => {
                    pending.push((
                        lineno + 1,
                        id.to_string(),
                        o.to_string(),
                        t.to_string(),
                        inv.to_string(),
                    ));
                }
                _ => {
                    return Err(GraphError::Parse {
                        line: lineno + 1,
                        message: format!("unrecognized line {line:?}"),
                    })
                }
            }
        }
        let mut done: BTreeSet<String> = BTreeSet::new();
        let by_id: BTreeMap<String, (usize, String, String, String, String)> =
            pending.iter().map(|p| (p.1.clone(), p.clone())).collect();
        for (lineno, id, o, t, inv) in &pending {
            if done.contains(id) {
                continue;
            }
            let partner = by_id.get(inv).ok_or_else(|| GraphError::Parse {
                line: *lineno,
                message: format!("edge {id:?} names missing inverse {inv:?}"),
            })?;
            if &partner.4 != id || &partner.2 != t || &partner.3 != o {
                return Err(GraphError::Parse {
                    line: *lineno,
                    message: format!("edges {id:?} and {inv:?} are not mutually inverse"),
                });
            }
            g.add_edge_pair(id.clone(), inv.clone(), o, t)
                .map_err(|e| GraphError::Parse { line: *lineno, message: e.to_string() })?;
            done.insert(id.clone());
            done.insert(inv.clone());
        }
        Ok(g)
    }
}

impl Default for FiniteGraph {
    fn default() -> Self {
        Self::new()
    }
}

/// Convenience builder: a path graph on the given vertex ids.
pub fn path_graph(ids: &[&str]) -> FiniteGraph {
    let mut g = FiniteGraph::new();
    for id in ids {
        g.add_vertex(*id).unwrap();
    }
    for w in ids.windows(2) {
        let e = format!("{}~{}", w[0], w[1]);
        let r = format!("{}~{}", w[1], w[0]);
        g.add_edge_pair(e, r, w[0], w[1]).unwrap();
    }
    g
}
