//! Trees, finite or lazily expanded, behind one host interface. Vertices are
//! canonical string keys: two keys are equal iff they name the same vertex.
//! Operations on lazy hosts take explicit radius budgets and report
//! "budget exhausted" separately from a definite negative.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::graph::{FiniteGraph, GraphError, NotATree};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("not a tree: {0:?}")]
    NotATree(NotATree),
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("vertex {0:?} not in tree")]
    VertexNotFound(String),
    #[error("budget {budget} exhausted while searching from {from:?}")]
    BudgetExhausted { from: String, budget: usize },
    #[error("vertex set is not a subtree: {0}")]
    NotASubtree(String),
    #[error("subtrees {i} and {j} have empty pairwise intersection")]
    DisjointPair { i: usize, j: usize },
    #[error("half-line breaks at index {0}: {1}")]
    BrokenHalfLine(usize, String),
}

/// Common interface of finite and lazily expanded trees.
///
/// `neighbors` must be deterministic: repeated calls return the same list in
/// the same order. `all_vertices` returns `Some` only on finite hosts.
pub trait TreeHost: Send + Sync {
    fn neighbors(&self, v: &str) -> Vec<String>;
    fn root(&self) -> String;
    fn all_vertices(&self) -> Option<Vec<String>> {
        None
    }
    fn is_finite(&self) -> bool {
        self.all_vertices().is_some()
    }
}

/// A validated finite tree with precomputed sorted adjacency.
#[derive(Debug, Clone)]
pub struct FiniteTree {
    graph: FiniteGraph,
    adjacency: BTreeMap<String, Vec<String>>,
}

impl FiniteTree {
    pub fn new(graph: FiniteGraph) -> Result<Self, TreeError> {
        match graph.is_tree()? {
            Ok(()) => {}
            Err(witness) => return Err(TreeError::NotATree(witness)),
        }
        let mut adjacency = BTreeMap::new();
        for v in 0..graph.vertex_count() {
            let ns = graph
                .neighbor_ixs(v)
                .into_iter()
                .map(|u| graph.vertex_id(u).to_string())
                .collect();
            adjacency.insert(graph.vertex_id(v).to_string(), ns);
        }
        Ok(FiniteTree { graph, adjacency })
    }

    pub fn graph(&self) -> &FiniteGraph {
        &self.graph
    }

    pub fn vertices(&self) -> impl Iterator<Item = &str> {
        self.adjacency.keys().map(|s| s.as_str())
    }

    pub fn contains(&self, v: &str) -> bool {
        self.adjacency.contains_key(v)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }
}

impl TreeHost for FiniteTree {
    fn neighbors(&self, v: &str) -> Vec<String> {
        self.adjacency.get(v).cloned().unwrap_or_default()
    }

    fn root(&self) -> String {
        // lexicographically least vertex
        self.adjacency.keys().next().cloned().unwrap_or_default()
    }

    fn all_vertices(&self) -> Option<Vec<String>> {
        Some(self.adjacency.keys().cloned().collect())
    }
}

type Expander = dyn Fn(&str) -> Vec<String> + Send + Sync;

/// A tree generated on demand from a root key and a deterministic expansion
/// function. Expansions are memoized; the cache fill is idempotent, so the
/// tree behaves as a pure value under concurrent use.
pub struct LazyTree {
    root: String,
    expander: Box<Expander>,
    cache: Mutex<BTreeMap<String, Arc<Vec<String>>>>,
}

impl LazyTree {
    pub fn new(
        root: impl Into<String>,
        expander: impl Fn(&str) -> Vec<String> + Send + Sync + 'static,
    ) -> Self {
        LazyTree { root: root.into(), expander: Box::new(expander), cache: Mutex::new(BTreeMap::new()) }
    }

    fn expand(&self, v: &str) -> Arc<Vec<String>> {
        if let Some(hit) = self.cache.lock().unwrap().get(v) {
            return hit.clone();
        }
        let fresh = Arc::new((self.expander)(v));
        let mut cache = self.cache.lock().unwrap();
        cache.entry(v.to_string()).or_insert(fresh).clone()
    }
}

impl std::fmt::Debug for LazyTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LazyTree").field("root", &self.root).finish_non_exhaustive()
    }
}

impl TreeHost for LazyTree {
    fn neighbors(&self, v: &str) -> Vec<String> {
        self.expand(v).as_ref().clone()
    }

    fn root(&self) -> String {
        self.root.clone()
    }
}

/// The unique reduced path between two vertices, as a vertex list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Geodesic {
    vertices: Vec<String>,
}

impl Geodesic {
    pub fn single(v: impl Into<String>) -> Self {
        Geodesic { vertices: vec![v.into()] }
    }

    pub fn from_vertices(vertices: Vec<String>) -> Self {
        assert!(!vertices.is_empty());
        Geodesic { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn start(&self) -> &str {
        &self.vertices[0]
    }

    pub fn end(&self) -> &str {
        self.vertices.last().unwrap()
    }

    pub fn reversed(&self) -> Geodesic {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Geodesic { vertices }
    }

    /// Vertices strictly between the endpoints.
    pub fn interior(&self) -> &[String] {
        if self.vertices.len() <= 2 {
            &[]
        } else {
            &self.vertices[1..self.vertices.len() - 1]
        }
    }
}

/// The unique geodesic from `x` to `y`, found by bidirectional breadth-first
/// search with parent pointers. Fails with `BudgetExhausted` when the distance
/// exceeds `budget`, and with `VertexNotFound` when a whole component was
/// explored without reaching `y`.
pub fn geodesic(host: &dyn TreeHost, x: &str, y: &str, budget: usize) -> Result<Geodesic, TreeError> {
    if let Some(all) = host.all_vertices() {
        for v in [x, y] {
            if !all.iter().any(|u| u == v) {
                return Err(TreeError::VertexNotFound(v.to_string()));
            }
        }
    }
    if x == y {
        return Ok(Geodesic::single(x));
    }
    let mut side_x = SearchSide::new(x);
    let mut side_y = SearchSide::new(y);
    while side_x.depth + side_y.depth < budget {
        let (grow, other) = if side_x.frontier.len() <= side_y.frontier.len() {
            (&mut side_x, &mut side_y)
        } else {
            (&mut side_y, &mut side_x)
        };
        if grow.frontier.is_empty() {
            // the component is fully explored
            return Err(TreeError::VertexNotFound(if grow.start == x {
                y.to_string()
            } else {
                x.to_string()
            }));
        }
        if let Some(meet) = grow.advance(host, other) {
            return Ok(stitch(&side_x, &side_y, &meet, x));
        }
    }
    Err(TreeError::BudgetExhausted { from: x.to_string(), budget })
}

/// Distance between two vertices; see `geodesic` for budget semantics.
pub fn distance(host: &dyn TreeHost, x: &str, y: &str, budget: usize) -> Result<usize, TreeError> {
    geodesic(host, x, y, budget).map(|g| g.len())
}

struct SearchSide {
    start: String,
    parent: BTreeMap<String, Option<String>>,
    frontier: Vec<String>,
    depth: usize,
}

impl SearchSide {
    fn new(start: &str) -> Self {
        SearchSide {
            start: start.to_string(),
            parent: BTreeMap::from([(start.to_string(), None)]),
            frontier: vec![start.to_string()],
            depth: 0,
        }
    }

    /// Expands one BFS layer; returns the meeting vertex if the other side is hit.
    fn advance(&mut self, host: &dyn TreeHost, other: &SearchSide) -> Option<String> {
        let mut next = Vec::new();
        let mut meet: Option<String> = None;
        for v in &self.frontier {
            for w in host.neighbors(v) {
                if self.parent.contains_key(&w) {
                    continue;
                }
                self.parent.insert(w.clone(), Some(v.clone()));
                if other.parent.contains_key(&w) && meet.is_none() {
                    meet = Some(w.clone());
                }
                next.push(w);
            }
        }
        self.frontier = next;
        self.depth += 1;
        meet
    }

    fn path_to_start(&self, from: &str) -> Vec<String> {
        let mut path = vec![from.to_string()];
        let mut cur = from.to_string();
        while let Some(Some(p)) = self.parent.get(&cur) {
            path.push(p.clone());
            cur = p.clone();
        }
        path
    }
}

fn stitch(side_x: &SearchSide, side_y: &SearchSide, meet: &str, x: &str) -> Geodesic {
    let (from_x, from_y) =
        if side_x.start == x { (side_x, side_y) } else { (side_y, side_x) };
    let mut path = from_x.path_to_start(meet);
    path.reverse(); // x .. meet
    let tail = from_y.path_to_start(meet); // meet .. y
    path.extend(tail.into_iter().skip(1));
    Geodesic { vertices: path }
}

/// All vertices within `radius` of `center`, with distances. On finite hosts
/// the frontier may be empty (the whole tree fits inside the radius).
#[derive(Debug, Clone)]
pub struct ExploredBall {
    center: String,
    radius: usize,
    dist: BTreeMap<String, usize>,
}

impl ExploredBall {
    pub fn center(&self) -> &str {
        &self.center
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn contains(&self, v: &str) -> bool {
        self.dist.contains_key(v)
    }

    pub fn distance_to_center(&self, v: &str) -> Option<usize> {
        self.dist.get(v).copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &str> {
        self.dist.keys().map(|s| s.as_str())
    }

    pub fn vertex_count(&self) -> usize {
        self.dist.len()
    }

    /// Vertices at exactly the ball radius — the only places where the
    /// unexplored part of a lazy host can attach.
    pub fn frontier(&self) -> impl Iterator<Item = &str> {
        self.dist.iter().filter(move |(_, &d)| d == self.radius).map(|(v, _)| v.as_str())
    }

    pub fn is_interior(&self, v: &str) -> bool {
        matches!(self.dist.get(v), Some(&d) if d < self.radius)
    }

    /// True when the ball covers a whole finite component (empty frontier),
    /// so nothing lies beyond it.
    pub fn closed(&self) -> bool {
        self.frontier().next().is_none()
    }

    /// Edges of the explored ball as ordered key pairs (each geometric edge
    /// once, endpoints sorted).
    pub fn edges(&self, host: &dyn TreeHost) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for v in self.dist.keys() {
            for w in host.neighbors(v) {
                if self.dist.contains_key(&w) && v.as_str() < w.as_str() {
                    out.push((v.clone(), w));
                }
            }
        }
        out
    }
}

/// Breadth-first exploration of the radius-`radius` ball around `center`.
pub fn ball(host: &dyn TreeHost, center: &str, radius: usize) -> ExploredBall {
    let mut dist = BTreeMap::from([(center.to_string(), 0usize)]);
    let mut frontier = vec![center.to_string()];
    for d in 1..=radius {
        let mut next = Vec::new();
        for v in &frontier {
            for w in host.neighbors(v) {
                if !dist.contains_key(&w) {
                    dist.insert(w.clone(), d);
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    ExploredBall { center: center.to_string(), radius, dist }
}

/// A non-empty, geodesically closed vertex set of a host tree. For trees this
/// is the same as being connected in the host.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subtree {
    vertices: BTreeSet<String>,
}

impl Subtree {
    /// Validates connectivity inside the host.
    pub fn new(host: &dyn TreeHost, vertices: BTreeSet<String>) -> Result<Self, TreeError> {
        if vertices.is_empty() {
            return Err(TreeError::NotASubtree("empty vertex set".into()));
        }
        let start = vertices.iter().next().unwrap().clone();
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for w in host.neighbors(&v) {
                if vertices.contains(&w) && seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        if seen.len() != vertices.len() {
            let missing = vertices.difference(&seen).next().unwrap();
            return Err(TreeError::NotASubtree(format!(
                "vertex {missing:?} not connected to the rest inside the host"
            )));
        }
        Ok(Subtree { vertices })
    }

    /// Skips the connectivity check; for sets already known to be geodesically
    /// closed (fixed-point sets of isometries, explored windows of axes).
    pub fn from_connected_set(vertices: BTreeSet<String>) -> Self {
        debug_assert!(!vertices.is_empty());
        Subtree { vertices }
    }

    pub fn vertices(&self) -> &BTreeSet<String> {
        &self.vertices
    }

    pub fn contains(&self, v: &str) -> bool {
        self.vertices.contains(v)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn intersection(&self, other: &Subtree) -> BTreeSet<String> {
        self.vertices.intersection(&other.vertices).cloned().collect()
    }
}

/// Result of intersecting a family of subtree windows on a lazy host.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LazyIntersection {
    /// Common vertices, entirely inside the horizon: the answer is exact.
    CommonVertices { vertices: BTreeSet<String> },
    /// The common part runs into the horizon along this path; `entry[i]` is
    /// the index from which the path stays inside the i-th subtree window.
    SharedTail { half_line: Vec<String>, entry: Vec<usize> },
    /// Pairwise intersections are non-empty but no common vertex and no
    /// shared tail was found inside the horizon.
    Undetermined { horizon: usize },
}

/// Intersection of finitely many subtrees of a finite host. Pairwise
/// non-empty intersection is required and implies (Helly property on trees)
/// that the common intersection is non-empty.
pub fn subtree_intersection(trees: &[Subtree]) -> Result<BTreeSet<String>, TreeError> {
    assert!(!trees.is_empty());
    check_pairwise(trees)?;
    let mut common = trees[0].vertices.clone();
    for t in &trees[1..] {
        common = common.intersection(&t.vertices).cloned().collect();
    }
    debug_assert!(!common.is_empty(), "pairwise-intersecting subtrees must share a vertex");
    Ok(common)
}

fn check_pairwise(trees: &[Subtree]) -> Result<(), TreeError> {
    for i in 0..trees.len() {
        for j in i + 1..trees.len() {
            if trees[i].vertices.is_disjoint(&trees[j].vertices) {
                return Err(TreeError::DisjointPair { i, j });
            }
        }
    }
    Ok(())
}

/// Intersection of subtrees of a lazy host, each given as a membership
/// predicate, examined inside the radius-`horizon` ball around the root.
pub fn lazy_subtree_intersection(
    host: &dyn TreeHost,
    members: &[&dyn Fn(&str) -> bool],
    horizon: usize,
) -> Result<LazyIntersection, TreeError> {
    assert!(!members.is_empty());
    let root = host.root();
    let window = ball(host, &root, horizon);
    let sets: Vec<BTreeSet<String>> = members
        .iter()
        .map(|m| window.vertices().filter(|v| m(v)).map(|v| v.to_string()).collect())
        .collect();
    for (i, s) in sets.iter().enumerate() {
        if s.is_empty() {
            return Err(TreeError::NotASubtree(format!(
                "subtree {i} has no vertex inside the horizon-{horizon} window"
            )));
        }
    }
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i].is_disjoint(&sets[j]) {
                return Err(TreeError::DisjointPair { i, j });
            }
        }
    }
    let mut common = sets[0].clone();
    for s in &sets[1..] {
        common = common.intersection(s).cloned().collect();
    }
    let touches_frontier = common.iter().any(|v| !window.is_interior(v));
    if !common.is_empty() && !touches_frontier {
        return Ok(LazyIntersection::CommonVertices { vertices: common });
    }
    // look for a path from the root to the frontier whose tail lies in every set
    let candidates: Vec<&String> = if common.is_empty() {
        sets[0].iter().filter(|v| !window.is_interior(v)).collect()
    } else {
        common.iter().filter(|v| !window.is_interior(v)).collect()
    };
    for far in candidates {
        let path = geodesic(host, &root, far, horizon + 1)?;
        let mut entry = Vec::with_capacity(sets.len());
        let mut ok = true;
        for s in &sets {
            // least index from which the remaining path stays inside s
            let vs = path.vertices();
            let mut idx = vs.len();
            while idx > 0 && s.contains(&vs[idx - 1]) {
                idx -= 1;
            }
            if idx >= vs.len() {
                ok = false;
                break;
            }
            entry.push(idx);
        }
        if ok {
            return Ok(LazyIntersection::SharedTail {
                half_line: path.vertices().to_vec(),
                entry,
            });
        }
    }
    Ok(LazyIntersection::Undetermined { horizon })
}

/// Minimum distance between two subtrees, together with a realizing geodesic
/// whose interior avoids both. Returns 0 with a single-vertex geodesic when
/// they intersect.
pub fn subtree_distance(
    host: &dyn TreeHost,
    s1: &Subtree,
    s2: &Subtree,
    budget: usize,
) -> Result<(usize, Geodesic), TreeError> {
    if let Some(common) = s1.vertices.intersection(&s2.vertices).next() {
        return Ok((0, Geodesic::single(common.clone())));
    }
    // multi-source BFS out of s1
    let mut parent: BTreeMap<String, Option<String>> =
        s1.vertices.iter().map(|v| (v.clone(), None)).collect();
    let mut frontier: Vec<String> = s1.vertices.iter().cloned().collect();
    for _d in 1..=budget {
        let mut next = Vec::new();
        for v in &frontier {
            for w in host.neighbors(v) {
                if parent.contains_key(&w) {
                    continue;
                }
                parent.insert(w.clone(), Some(v.clone()));
                if s2.contains(&w) {
                    let mut path = vec![w.clone()];
                    let mut cur = w.clone();
                    while let Some(Some(p)) = parent.get(&cur) {
                        path.push(p.clone());
                        cur = p.clone();
                    }
                    path.reverse();
                    let g = Geodesic::from_vertices(path);
                    debug_assert!(g
                        .interior()
                        .iter()
                        .all(|u| !s1.contains(u) && !s2.contains(u)));
                    return Ok((g.len(), g));
                }
                next.push(w);
            }
        }
        if next.is_empty() {
            return Err(TreeError::VertexNotFound(format!(
                "no vertex of the second subtree within the component of {:?}",
                s1.vertices.iter().next().unwrap()
            )));
        }
        frontier = next;
    }
    Err(TreeError::BudgetExhausted {
        from: s1.vertices.iter().next().unwrap().clone(),
        budget,
    })
}

/// A breadth-first index from a base vertex: parent pointers and depths out
/// to a radius. Distances between indexed vertices come from the deepest
/// common ancestor, with no further expansion; unindexed queries fall back to
/// the plain search.
#[derive(Debug)]
pub struct DistanceOracle {
    parent: BTreeMap<String, Option<String>>,
    depth: BTreeMap<String, usize>,
}

impl DistanceOracle {
    pub fn new(host: &dyn TreeHost, base: &str, radius: usize) -> Self {
        let mut parent: BTreeMap<String, Option<String>> =
            BTreeMap::from([(base.to_string(), None)]);
        let mut depth = BTreeMap::from([(base.to_string(), 0usize)]);
        let mut frontier = vec![base.to_string()];
        for d in 1..=radius {
            let mut next = Vec::new();
            for v in &frontier {
                for w in host.neighbors(v) {
                    if !parent.contains_key(&w) {
                        parent.insert(w.clone(), Some(v.clone()));
                        depth.insert(w.clone(), d);
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        DistanceOracle { parent, depth }
    }

    pub fn covers(&self, v: &str) -> bool {
        self.depth.contains_key(v)
    }

    /// Distance via the deepest common ancestor of the two parent chains.
    fn indexed_distance(&self, v: &str, w: &str) -> Option<usize> {
        let mut dv = *self.depth.get(v)?;
        let mut dw = *self.depth.get(w)?;
        let (total_v, total_w) = (dv, dw);
        let mut cv = v;
        let mut cw = w;
        while dv > dw {
            cv = self.parent[cv].as_deref()?;
            dv -= 1;
        }
        while dw > dv {
            cw = self.parent[cw].as_deref()?;
            dw -= 1;
        }
        while cv != cw {
            cv = self.parent[cv].as_deref()?;
            cw = self.parent[cw].as_deref()?;
            dv -= 1;
        }
        Some((total_v - dv) + (total_w - dv))
    }

    /// Exact distance; falls back to bidirectional search when an endpoint is
    /// outside the index.
    pub fn distance(
        &self,
        host: &dyn TreeHost,
        v: &str,
        w: &str,
        budget: usize,
    ) -> Result<usize, TreeError> {
        match self.indexed_distance(v, w) {
            Some(d) => Ok(d),
            None => distance(host, v, w, budget),
        }
    }
}

type HalfLineGen = dyn Fn(usize) -> String + Send + Sync;

/// An infinite path of distinct vertices, produced on demand and cached.
pub struct HalfLine {
    gen: Arc<HalfLineGen>,
    cache: Mutex<Vec<String>>,
}

impl HalfLine {
    pub fn new(gen: impl Fn(usize) -> String + Send + Sync + 'static) -> Self {
        HalfLine { gen: Arc::new(gen), cache: Mutex::new(Vec::new()) }
    }

    pub fn vertex(&self, i: usize) -> String {
        let mut cache = self.cache.lock().unwrap();
        while cache.len() <= i {
            let next = (self.gen)(cache.len());
            cache.push(next);
        }
        cache[i].clone()
    }

    pub fn prefix(&self, n: usize) -> Vec<String> {
        (0..n).map(|i| self.vertex(i)).collect()
    }

    /// Checks distinctness and adjacency of the first `n` vertices.
    pub fn validate(&self, host: &dyn TreeHost, n: usize) -> Result<(), TreeError> {
        let prefix = self.prefix(n);
        let mut seen = BTreeSet::new();
        for (i, v) in prefix.iter().enumerate() {
            if !seen.insert(v.clone()) {
                return Err(TreeError::BrokenHalfLine(i, format!("repeated vertex {v:?}")));
            }
            if i + 1 < prefix.len() && !host.neighbors(v).contains(&prefix[i + 1]) {
                return Err(TreeError::BrokenHalfLine(
                    i,
                    format!("{v:?} not adjacent to {:?}", prefix[i + 1]),
                ));
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for HalfLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HalfLine").finish_non_exhaustive()
    }
}

/// The bi-infinite line with vertex set the integers; useful host for
/// reflection/translation examples.
pub fn line_tree() -> LazyTree {
    LazyTree::new("0", |v| {
        let k: i64 = v.parse().expect("line vertices are integers");
        vec![(k - 1).to_string(), (k + 1).to_string()]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::path_graph;

    fn path_tree(ids: &[&str]) -> FiniteTree {
        FiniteTree::new(path_graph(ids)).unwrap()
    }

    #[test]
    fn geodesic_identity_case() {
        let t = path_tree(&["a", "b"]);
        let g = geodesic(&t, "a", "a", 10).unwrap();
        assert_eq!(g.len(), 0);
        assert_eq!(g.vertices(), &["a".to_string()]);
    }

    #[test]
    fn geodesic_along_path() {
        let t = path_tree(&["v0", "v1", "v2", "v3"]);
        let g = geodesic(&t, "v0", "v3", 10).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.vertices(), &["v0", "v1", "v2", "v3"]);
        assert_eq!(g.reversed().vertices(), geodesic(&t, "v3", "v0", 10).unwrap().vertices());
    }

    #[test]
    fn geodesic_missing_vertex() {
        let t = path_tree(&["a", "b"]);
        assert_eq!(geodesic(&t, "a", "zz", 10), Err(TreeError::VertexNotFound("zz".into())));
    }

    #[test]
    fn budget_exhaustion_on_line() {
        let line = line_tree();
        let err = geodesic(&line, "0", "9", 5).unwrap_err();
        assert!(matches!(err, TreeError::BudgetExhausted { budget: 5, .. }));
        assert_eq!(distance(&line, "0", "9", 20).unwrap(), 9);
        assert_eq!(distance(&line, "-3", "4", 20).unwrap(), 7);
    }

    #[test]
    fn ball_determinism() {
        let line = line_tree();
        let b1 = ball(&line, "0", 4);
        let b2 = ball(&line, "0", 4);
        let v1: Vec<&str> = b1.vertices().collect();
        let v2: Vec<&str> = b2.vertices().collect();
        assert_eq!(v1, v2);
        assert_eq!(b1.vertex_count(), 9);
        assert_eq!(b1.frontier().count(), 2);
    }

    #[test]
    fn interval_intersection() {
        let ids: Vec<String> = (0..=8).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = ids.iter().map(|s| s.as_str()).collect();
        let t = path_tree(&refs);
        let seg = |a: usize, b: usize| {
            Subtree::new(&t, (a..=b).map(|i| format!("v{i}")).collect()).unwrap()
        };
        let common = subtree_intersection(&[seg(0, 5), seg(3, 8), seg(4, 6)]).unwrap();
        assert_eq!(common, BTreeSet::from(["v4".to_string(), "v5".to_string()]));

        let err = subtree_intersection(&[seg(0, 1), seg(3, 4)]).unwrap_err();
        assert_eq!(err, TreeError::DisjointPair { i: 0, j: 1 });
    }

    #[test]
    fn subtree_distance_examples() {
        let ids: Vec<String> = (0..=6).map(|i| format!("{i}")).collect();
        let refs: Vec<&str> = ids.iter().map(|s| s.as_str()).collect();
        let t = path_tree(&refs);
        let seg = |a: usize, b: usize| {
            Subtree::new(&t, (a..=b).map(|i| format!("{i}")).collect()).unwrap()
        };
        let (d, bridge) = subtree_distance(&t, &seg(0, 1), &seg(4, 6), 10).unwrap();
        assert_eq!(d, 3);
        assert_eq!(bridge.vertices(), &["1", "2", "3", "4"]);

        let (d, _) = subtree_distance(&t, &seg(0, 3), &seg(3, 6), 10).unwrap();
        assert_eq!(d, 0);
    }

    #[test]
    fn subtree_connectivity_checked() {
        let t = path_tree(&["a", "b", "c"]);
        let err = Subtree::new(&t, BTreeSet::from(["a".to_string(), "c".to_string()])).unwrap_err();
        assert!(matches!(err, TreeError::NotASubtree(_)));
    }

    #[test]
    fn half_line_validates_on_line() {
        let line = line_tree();
        let hl = HalfLine::new(|i| i.to_string());
        hl.validate(&line, 10).unwrap();
        let broken = HalfLine::new(|i| (i % 3).to_string());
        assert!(broken.validate(&line, 10).is_err());
    }
}
