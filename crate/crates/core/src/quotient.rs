//! Finite group actions on finite trees: orbit quotients with the induced
//! incidence maps, cycle rank, fundamental domains lifted from the quotient,
//! and trees of groups with the positive edge orientation induced by which
//! edge monomorphisms are onto a vertex group.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{FiniteGraph, GraphError};
use crate::group::{FiniteGroup, GroupHom};
use crate::isometry::TreeAutomorphism;
use crate::tree::{FiniteTree, Subtree, TreeError, TreeHost};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ActionError {
    #[error("element {element:?} maps vertex {vertex:?} to unknown vertex {image:?}")]
    UnknownImage { element: String, vertex: String, image: String },
    #[error("element {element:?} is not a bijection on the vertices")]
    NotBijective { element: String },
    #[error("element {element:?} breaks adjacency at ({a:?}, {b:?})")]
    NotAdjacencyPreserving { element: String, a: String, b: String },
    #[error("assignment is not a homomorphism: {x:?} * {y:?} acts wrong")]
    NotHomomorphism { x: String, y: String },
    #[error("element {element:?} inverts the edge ({a:?}, {b:?})")]
    Inversion { element: String, a: String, b: String },
    #[error("{0}")]
    Tree(#[from] TreeError),
    #[error("{0}")]
    Graph(#[from] GraphError),
}

/// A finite group acting on a finite tree without inversion; the assignment
/// is checked to be a homomorphism on all pairs.
#[derive(Debug, Clone)]
pub struct FiniteAction {
    group: Arc<FiniteGroup>,
    tree: Arc<FiniteTree>,
    // perms[g][v] = image vertex index (graph vertex indexing)
    perms: Vec<Vec<usize>>,
}

impl FiniteAction {
    pub fn new(
        group: Arc<FiniteGroup>,
        tree: Arc<FiniteTree>,
        action: impl Fn(usize, &str) -> String,
    ) -> Result<Self, ActionError> {
        let graph = tree.graph();
        let n = graph.vertex_count();
        let mut perms = Vec::with_capacity(group.order());
        for e in group.elements() {
            let label = group.label(e).to_string();
            let mut perm = vec![usize::MAX; n];
            let mut hit = vec![false; n];
            for (v, slot) in perm.iter_mut().enumerate() {
                let vid = graph.vertex_id(v);
                let image = action(e, vid);
                let iv = graph.vertex_lookup(&image).ok_or_else(|| ActionError::UnknownImage {
                    element: label.clone(),
                    vertex: vid.to_string(),
                    image: image.clone(),
                })?;
                if hit[iv] {
                    return Err(ActionError::NotBijective { element: label });
                }
                hit[iv] = true;
                *slot = iv;
            }
            perms.push(perm);
        }
        let action = FiniteAction { group, tree, perms };
        action.validate()?;
        Ok(action)
    }

    fn validate(&self) -> Result<(), ActionError> {
        let graph = self.tree.graph();
        let g = &self.group;
        let id = &self.perms[g.identity()];
        if id.iter().enumerate().any(|(v, &iv)| v != iv) {
            return Err(ActionError::NotHomomorphism {
                x: g.label(g.identity()).into(),
                y: g.label(g.identity()).into(),
            });
        }
        for x in g.elements() {
            for y in g.elements() {
                let xy = g.mul(x, y);
                for v in 0..graph.vertex_count() {
                    if self.perms[xy][v] != self.perms[x][self.perms[y][v]] {
                        return Err(ActionError::NotHomomorphism {
                            x: g.label(x).into(),
                            y: g.label(y).into(),
                        });
                    }
                }
            }
        }
        for x in g.elements() {
            let perm = &self.perms[x];
            for e in graph.edges() {
                let (o, t) = (e.origin, e.terminus);
                let (io, it) = (perm[o], perm[t]);
                if !graph
                    .neighbor_ixs(io)
                    .contains(&it)
                {
                    return Err(ActionError::NotAdjacencyPreserving {
                        element: g.label(x).into(),
                        a: graph.vertex_id(o).into(),
                        b: graph.vertex_id(t).into(),
                    });
                }
                if io == t && it == o && o != t {
                    return Err(ActionError::Inversion {
                        element: g.label(x).into(),
                        a: graph.vertex_id(o).into(),
                        b: graph.vertex_id(t).into(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn tree(&self) -> &Arc<FiniteTree> {
        &self.tree
    }

    pub fn apply(&self, element: usize, vertex_ix: usize) -> usize {
        self.perms[element][vertex_ix]
    }

    /// The element as a table-based tree automorphism.
    pub fn automorphism(&self, element: usize) -> Result<TreeAutomorphism, ActionError> {
        let graph = self.tree.graph();
        let table: BTreeMap<String, String> = (0..graph.vertex_count())
            .map(|v| {
                (graph.vertex_id(v).to_string(), graph.vertex_id(self.perms[element][v]).to_string())
            })
            .collect();
        TreeAutomorphism::from_table(self.tree.clone(), self.group.label(element), table)
            .map_err(|_| ActionError::NotBijective { element: self.group.label(element).into() })
    }

    /// Vertex orbits, each sorted, listed by their least member.
    pub fn vertex_orbits(&self) -> Vec<Vec<usize>> {
        let graph = self.tree.graph();
        let n = graph.vertex_count();
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for v in 0..n {
            if seen[v] {
                continue;
            }
            let mut orbit: BTreeSet<usize> =
                self.perms.iter().map(|perm| perm[v]).collect();
            orbit.insert(v);
            for &u in &orbit {
                seen[u] = true;
            }
            orbits.push(orbit.into_iter().collect());
        }
        orbits
    }
}

/// The orbit graph of an action, with the induced origin/terminus/inverse
/// maps, plus the projection from host vertices and edges to orbit names.
#[derive(Debug, Clone)]
pub struct QuotientGraph {
    graph: FiniteGraph,
    vertex_orbit: BTreeMap<String, String>,
    edge_orbit: BTreeMap<String, String>,
}

impl QuotientGraph {
    pub fn graph(&self) -> &FiniteGraph {
        &self.graph
    }

    pub fn vertex_orbit(&self, v: &str) -> Option<&str> {
        self.vertex_orbit.get(v).map(|s| s.as_str())
    }

    pub fn edge_orbit(&self, e: &str) -> Option<&str> {
        self.edge_orbit.get(e).map(|s| s.as_str())
    }

    pub fn orbit_count(&self) -> usize {
        self.graph.vertex_count()
    }
}

/// Collapses the action to its orbit graph. Well-definedness of the induced
/// maps is asserted across every orbit member, not assumed.
pub fn quotient_graph(action: &FiniteAction) -> Result<QuotientGraph, ActionError> {
    let graph = action.tree().graph();
    let n = graph.vertex_count();
    // vertex orbits named by least member id
    let mut vertex_orbit_name: Vec<String> = vec![String::new(); n];
    for orbit in action.vertex_orbits() {
        let name = orbit
            .iter()
            .map(|&v| graph.vertex_id(v))
            .min()
            .expect("orbits are non-empty")
            .to_string();
        for &v in &orbit {
            vertex_orbit_name[v] = name.clone();
        }
    }
    // edge orbits on directed edges
    let edge_ix_by_pair: BTreeMap<(usize, usize), usize> = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| ((e.origin, e.terminus), i))
        .collect();
    let m = graph.edge_count();
    let mut edge_orbit_ix: Vec<Option<usize>> = vec![None; m];
    let mut orbit_members: Vec<Vec<usize>> = Vec::new();
    for e in 0..m {
        if edge_orbit_ix[e].is_some() {
            continue;
        }
        let ix = orbit_members.len();
        let mut members = BTreeSet::new();
        for perm in &action.perms {
            let rec = &graph.edges()[e];
            let image = edge_ix_by_pair[&(perm[rec.origin], perm[rec.terminus])];
            members.insert(image);
        }
        members.insert(e);
        for &f in &members {
            if e != f && edge_orbit_ix[f].is_some() {
                // orbits are equivalence classes; merging cannot happen for a
                // genuine group action
                return Err(ActionError::NotHomomorphism {
                    x: "edge orbit".into(),
                    y: graph.edges()[f].id.clone(),
                });
            }
            edge_orbit_ix[f] = Some(ix);
        }
        orbit_members.push(members.into_iter().collect());
    }
    // the involution must be fixed-point free on orbits (no inversion)
    for (ix, members) in orbit_members.iter().enumerate() {
        let e = members[0];
        let rev = graph.edges()[e].inverse;
        if edge_orbit_ix[rev] == Some(ix) {
            let rec = &graph.edges()[e];
            return Err(ActionError::Inversion {
                element: "<orbit>".into(),
                a: graph.vertex_id(rec.origin).into(),
                b: graph.vertex_id(rec.terminus).into(),
            });
        }
    }
    let edge_orbit_name: Vec<String> = orbit_members
        .iter()
        .map(|members| {
            members.iter().map(|&e| graph.edges()[e].id.clone()).min().expect("non-empty")
        })
        .collect();
    // induced maps, checked on every member
    let mut quotient = FiniteGraph::new();
    let mut vnames: Vec<&String> = vertex_orbit_name.iter().collect();
    vnames.sort();
    vnames.dedup();
    for name in vnames {
        quotient.add_vertex(name.clone())?;
    }
    let mut done: BTreeSet<usize> = BTreeSet::new();
    for (ix, members) in orbit_members.iter().enumerate() {
        let first = &graph.edges()[members[0]];
        let o_name = &vertex_orbit_name[first.origin];
        let t_name = &vertex_orbit_name[first.terminus];
        for &e in members {
            let rec = &graph.edges()[e];
            if &vertex_orbit_name[rec.origin] != o_name
                || &vertex_orbit_name[rec.terminus] != t_name
            {
                return Err(ActionError::NotHomomorphism {
                    x: "induced origin map".into(),
                    y: rec.id.clone(),
                });
            }
        }
        if done.contains(&ix) {
            continue;
        }
        let rev_ix = edge_orbit_ix[first.inverse].expect("all edges assigned");
        quotient.add_edge_pair(
            edge_orbit_name[ix].clone(),
            edge_orbit_name[rev_ix].clone(),
            o_name,
            t_name,
        )?;
        done.insert(ix);
        done.insert(rev_ix);
    }
    let report = quotient.validate();
    debug_assert!(report.is_valid(), "quotient violates the graph axioms: {:?}", report);
    let vertex_orbit = (0..n)
        .map(|v| (graph.vertex_id(v).to_string(), vertex_orbit_name[v].clone()))
        .collect();
    let edge_orbit = (0..m)
        .map(|e| {
            (graph.edges()[e].id.clone(), edge_orbit_name[edge_orbit_ix[e].unwrap()].clone())
        })
        .collect();
    Ok(QuotientGraph { graph: quotient, vertex_orbit, edge_orbit })
}

/// Free rank of the fundamental group of a graph: geometric edges minus
/// vertices plus components.
pub fn cycle_rank(graph: &FiniteGraph) -> usize {
    graph.edge_count() / 2 + graph.component_count() - graph.vertex_count()
}

/// Verdict of the finite-order case check: every element of a finite group
/// acting on a finite tree without inversion is elliptic, and the quotient
/// is again a tree (cycle rank zero).
#[derive(Debug, Clone, Serialize)]
pub struct EllipticGenerationVerdict {
    pub all_elliptic: bool,
    pub non_elliptic: Vec<String>,
    pub quotient_cycle_rank: usize,
    pub holds: bool,
}

pub fn elliptic_generation_check(
    action: &FiniteAction,
) -> Result<EllipticGenerationVerdict, ActionError> {
    let graph = action.tree().graph();
    let mut non_elliptic = Vec::new();
    for e in action.group().elements() {
        let fixes_something =
            (0..graph.vertex_count()).any(|v| action.apply(e, v) == v);
        if !fixes_something {
            non_elliptic.push(action.group().label(e).to_string());
        }
    }
    let q = quotient_graph(action)?;
    let rank = cycle_rank(q.graph());
    let all_elliptic = non_elliptic.is_empty();
    Ok(EllipticGenerationVerdict {
        all_elliptic,
        non_elliptic,
        quotient_cycle_rank: rank,
        holds: all_elliptic && rank == 0,
    })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DomainError {
    #[error("quotient is not a tree (cycle rank {0}); no fundamental domain lifted")]
    QuotientNotATree(usize),
    #[error("orbit of {0:?} was never reached; the lift is not connected")]
    OrbitUnreached(String),
}

/// A subtree meeting every vertex orbit exactly once, lifted greedily from
/// the orbit of the least vertex. Deterministic: neighbors are scanned in
/// sorted order.
pub fn fundamental_domain(
    action: &FiniteAction,
) -> Result<(Subtree, BTreeMap<String, String>), ActionError> {
    let q = quotient_graph(action)?;
    let rank = cycle_rank(q.graph());
    if rank != 0 {
        // cannot occur for a validated finite action; kept as a guard
        return Err(TreeError::NotASubtree(DomainError::QuotientNotATree(rank).to_string()).into());
    }
    let tree = action.tree();
    let root = tree.root();
    let mut chosen: BTreeMap<String, String> = BTreeMap::new(); // orbit -> representative
    let mut domain: BTreeSet<String> = BTreeSet::new();
    chosen.insert(q.vertex_orbit(&root).unwrap().to_string(), root.clone());
    domain.insert(root.clone());
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for w in tree.neighbors(&v) {
            let orbit = q.vertex_orbit(&w).unwrap().to_string();
            if let std::collections::btree_map::Entry::Vacant(slot) = chosen.entry(orbit) {
                slot.insert(w.clone());
                domain.insert(w.clone());
                queue.push_back(w);
            }
        }
    }
    if chosen.len() != q.orbit_count() {
        let missing = (0..q.graph().vertex_count())
            .map(|i| q.graph().vertex_id(i))
            .find(|name| !chosen.contains_key(*name))
            .unwrap_or("?");
        return Err(TreeError::NotASubtree(DomainError::OrbitUnreached(missing.into()).to_string())
            .into());
    }
    let subtree = Subtree::new(tree.as_ref(), domain)?;
    Ok((subtree, chosen))
}

/// A finite tree with a group on every vertex and edge and a monomorphism
/// from each edge group into the origin group of each direction.
#[derive(Debug)]
pub struct TreeOfGroups {
    name: String,
    tree: Arc<FiniteTree>,
    vertex_groups: BTreeMap<String, Arc<FiniteGroup>>,
    // per directed edge id: the map R_e -> R_{o(e)}
    alphas: BTreeMap<String, GroupHom>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TogError {
    #[error("vertex {0:?} has no group assigned")]
    MissingVertexGroup(String),
    #[error("edge {0:?} has no monomorphism assigned")]
    MissingAlpha(String),
    #[error("alpha for edge {edge:?} must map the edge group into {expected}, found {found}")]
    WrongCodomain { edge: String, expected: String, found: String },
    #[error("edge groups of {0:?} and its inverse differ")]
    MismatchedEdgeGroups(String),
    #[error("alpha for edge {edge:?} is not a monomorphism: {reason}")]
    NotMono { edge: String, reason: String },
    #[error("vertex {0:?} not in the tree")]
    UnknownVertex(String),
}

/// Local orientation class of a directed edge, from surjectivity of the two
/// monomorphisms: positive edges point from a vertex whose group is carried
/// isomorphically by the edge group toward a properly larger one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeClass {
    Positive,
    Negative,
    DegenerateBoth,
    DegenerateNeither,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrientationReport {
    /// class per directed edge id, by the local surjectivity rule
    pub local: BTreeMap<String, EdgeClass>,
    /// class per directed edge id, by the recursive whole-side rule
    pub global: BTreeMap<String, EdgeClass>,
    /// directed edge ids where the two rules disagree
    pub disagreements: Vec<String>,
}

impl TreeOfGroups {
    pub fn new(
        name: impl Into<String>,
        tree: Arc<FiniteTree>,
        vertex_groups: BTreeMap<String, Arc<FiniteGroup>>,
        alphas: BTreeMap<String, GroupHom>,
    ) -> Result<Self, TogError> {
        let graph = tree.graph();
        for v in tree.vertices() {
            if !vertex_groups.contains_key(v) {
                return Err(TogError::MissingVertexGroup(v.to_string()));
            }
        }
        for e in graph.edges() {
            let alpha = alphas.get(&e.id).ok_or_else(|| TogError::MissingAlpha(e.id.clone()))?;
            let origin = graph.vertex_id(e.origin);
            let expected = &vertex_groups[origin];
            if alpha.codomain() != expected {
                return Err(TogError::WrongCodomain {
                    edge: e.id.clone(),
                    expected: expected.name().to_string(),
                    found: alpha.codomain().name().to_string(),
                });
            }
            let rev = &graph.edges()[e.inverse];
            let alpha_rev = alphas.get(&rev.id).ok_or_else(|| TogError::MissingAlpha(rev.id.clone()))?;
            if alpha.domain() != alpha_rev.domain() {
                return Err(TogError::MismatchedEdgeGroups(e.id.clone()));
            }
            alpha.check_monomorphism().map_err(|v| TogError::NotMono {
                edge: e.id.clone(),
                reason: v.to_string(),
            })?;
        }
        Ok(TreeOfGroups { name: name.into(), tree, vertex_groups, alphas })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tree(&self) -> &Arc<FiniteTree> {
        &self.tree
    }

    pub fn vertex_group(&self, v: &str) -> Option<&Arc<FiniteGroup>> {
        self.vertex_groups.get(v)
    }

    pub fn alpha(&self, edge_id: &str) -> Option<&GroupHom> {
        self.alphas.get(edge_id)
    }

    fn edge_ids(&self) -> Vec<String> {
        self.tree.graph().edges().iter().map(|e| e.id.clone()).collect()
    }

    fn rev_id(&self, edge_id: &str) -> String {
        let graph = self.tree.graph();
        let ix = graph.edge_lookup(edge_id).expect("known edge");
        graph.edges()[graph.edges()[ix].inverse].id.clone()
    }

    fn origin_of(&self, edge_id: &str) -> String {
        let graph = self.tree.graph();
        let ix = graph.edge_lookup(edge_id).expect("known edge");
        graph.vertex_id(graph.edges()[ix].origin).to_string()
    }

    fn terminus_of(&self, edge_id: &str) -> String {
        let graph = self.tree.graph();
        let ix = graph.edge_lookup(edge_id).expect("known edge");
        graph.vertex_id(graph.edges()[ix].terminus).to_string()
    }

    /// Whether the whole origin-side of the edge folds into the edge group:
    /// alpha_e is onto the origin group and, recursively, every other edge
    /// arriving at the origin folds too. (On one vertex this is exactly
    /// alpha-surjectivity; the recursion extends it along the side subtree,
    /// using that a vertex group meets a side subgroup in the edge group.)
    fn collapses(&self, edge_id: &str, memo: &mut BTreeMap<String, bool>) -> bool {
        if let Some(&v) = memo.get(edge_id) {
            return v;
        }
        let alpha = &self.alphas[edge_id];
        let mut result = alpha.is_surjective();
        if result {
            let origin = self.origin_of(edge_id);
            let rev = self.rev_id(edge_id);
            let graph = self.tree.graph();
            for e in graph.edges() {
                // edges arriving at the origin from deeper in the side subtree
                if graph.vertex_id(e.terminus) == origin && e.id != rev {
                    let id = e.id.clone();
                    if !self.collapses(&id, memo) {
                        result = false;
                        break;
                    }
                }
            }
        }
        memo.insert(edge_id.to_string(), result);
        result
    }

    /// Partitions directed edges into positive, negative and degenerate, by
    /// both the local rule (alpha surjectivity at the two ends) and the
    /// recursive whole-side rule, flagging any disagreement.
    pub fn orient_edges(&self) -> OrientationReport {
        let classify = |surj: &dyn Fn(&str) -> bool| -> BTreeMap<String, EdgeClass> {
            self.edge_ids()
                .into_iter()
                .map(|id| {
                    let fwd = surj(&id);
                    let bwd = surj(&self.rev_id(&id));
                    let class = match (fwd, bwd) {
                        (true, false) => EdgeClass::Positive,
                        (false, true) => EdgeClass::Negative,
                        (true, true) => EdgeClass::DegenerateBoth,
                        (false, false) => EdgeClass::DegenerateNeither,
                    };
                    (id, class)
                })
                .collect()
        };
        let local = classify(&|id: &str| self.alphas[id].is_surjective());
        let mut memo = BTreeMap::new();
        for id in self.edge_ids() {
            self.collapses(&id, &mut memo);
        }
        let global = classify(&|id: &str| memo[id]);
        let disagreements = local
            .iter()
            .filter(|(id, class)| global[*id] != **class)
            .map(|(id, _)| id.clone())
            .collect();
        OrientationReport { local, global, disagreements }
    }
}

/// Where a positive walk stopped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum WalkEnd {
    /// No outgoing positive edge: the walk ends at this vertex.
    Sink { vertex: String },
    /// More than one outgoing positive edge; the orientation argument
    /// excludes this for genuine collapse data, so it is reported, not chosen.
    MultiplePositive { vertex: String, edges: Vec<String> },
    /// An outgoing degenerate edge makes the orientation at this vertex
    /// ill-defined.
    DegenerateEdge { vertex: String, edge: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct PositiveChainWalk {
    pub path: Vec<String>,
    /// group names along the path; each inclusion is witnessed by
    /// alpha_rev . alpha^-1 being a monomorphism
    pub groups: Vec<String>,
    pub end: WalkEnd,
}

/// Follows the unique outgoing positive edge from vertex to vertex,
/// collecting the increasing chain of vertex groups.
pub fn follow_positive_chain(
    tog: &TreeOfGroups,
    start: &str,
) -> Result<PositiveChainWalk, TogError> {
    if !tog.tree.contains(start) {
        return Err(TogError::UnknownVertex(start.to_string()));
    }
    let orientation = tog.orient_edges();
    let graph = tog.tree.graph();
    let mut path = vec![start.to_string()];
    let mut groups = vec![tog.vertex_groups[start].name().to_string()];
    let end = loop {
        let here = path.last().unwrap().clone();
        let here_ix = graph.vertex_lookup(&here).unwrap();
        let outgoing: Vec<&str> = graph
            .edges()
            .iter()
            .filter(|e| e.origin == here_ix)
            .map(|e| e.id.as_str())
            .collect();
        if let Some(deg) = outgoing.iter().find(|id| {
            matches!(
                orientation.local[**id],
                EdgeClass::DegenerateBoth | EdgeClass::DegenerateNeither
            )
        }) {
            break WalkEnd::DegenerateEdge { vertex: here, edge: deg.to_string() };
        }
        let positive: Vec<&str> = outgoing
            .iter()
            .copied()
            .filter(|id| orientation.local[*id] == EdgeClass::Positive)
            .collect();
        match positive.as_slice() {
            [] => break WalkEnd::Sink { vertex: here },
            [only] => {
                // witness the inclusion R_here -> R_next through the edge group
                let alpha = &tog.alphas[*only];
                let alpha_rev = &tog.alphas[&tog.rev_id(only)];
                let inclusion = alpha
                    .inverse_bijection()
                    .expect("positive edges carry bijective alpha")
                    .then(alpha_rev);
                debug_assert!(inclusion.check_monomorphism().is_ok());
                let next = tog.terminus_of(only);
                if path.contains(&next) {
                    // cannot happen in a tree; guard against malformed data
                    break WalkEnd::Sink { vertex: here };
                }
                groups.push(tog.vertex_groups[&next].name().to_string());
                path.push(next);
            }
            _ => {
                break WalkEnd::MultiplePositive {
                    vertex: here,
                    edges: positive.iter().map(|s| s.to_string()).collect(),
                }
            }
        }
    };
    Ok(PositiveChainWalk { path, groups, end })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{star_action, star_subgroup_action};
    use crate::graph::path_graph;

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(format!("z{n}"), n))
    }

    #[test]
    fn trivial_action_quotient_is_isomorphic() {
        let g = z(1);
        let tree = Arc::new(FiniteTree::new(path_graph(&["a", "b", "c"])).unwrap());
        let act = FiniteAction::new(g, tree.clone(), |_, v| v.to_string()).unwrap();
        let q = quotient_graph(&act).unwrap();
        assert_eq!(q.graph().vertex_count(), 3);
        assert_eq!(q.graph().edge_count(), 4);
        assert_eq!(cycle_rank(q.graph()), 0);
    }

    #[test]
    fn z2_star_quotient_is_single_edge() {
        let act = star_action(&z(2)).unwrap();
        let q = quotient_graph(&act).unwrap();
        assert_eq!(q.graph().vertex_count(), 2);
        assert_eq!(q.graph().edge_count(), 2);
        assert_eq!(q.vertex_orbit("0"), q.vertex_orbit("1"));
    }

    #[test]
    fn z3_star_quotient_is_single_edge() {
        let act = star_action(&z(3)).unwrap();
        let q = quotient_graph(&act).unwrap();
        assert_eq!(q.graph().vertex_count(), 2);
        assert_eq!(q.graph().edge_count(), 2);
    }

    #[test]
    fn edge_swap_rejected_as_inversion() {
        // caterpillar symmetric about its central edge: the swap inverts it
        let mut g = path_graph(&["u", "v"]);
        g.add_vertex("u1").unwrap();
        g.add_vertex("v1").unwrap();
        g.add_edge_pair("eu", "euR", "u", "u1").unwrap();
        g.add_edge_pair("ev", "evR", "v", "v1").unwrap();
        let tree = Arc::new(FiniteTree::new(g).unwrap());
        let err = FiniteAction::new(z(2), tree, |e, v| {
            if e == 0 {
                return v.to_string();
            }
            match v {
                "u" => "v".into(),
                "v" => "u".into(),
                "u1" => "v1".into(),
                "v1" => "u1".into(),
                _ => unreachable!(),
            }
        })
        .unwrap_err();
        assert!(matches!(err, ActionError::Inversion { .. }));
    }

    #[test]
    fn cycle_rank_examples() {
        let tree = path_graph(&["a", "b", "c", "d"]);
        assert_eq!(cycle_rank(&tree), 0);

        // one geometric loop on a single vertex
        let mut loop_graph = FiniteGraph::new();
        loop_graph.add_vertex("v").unwrap();
        loop_graph.add_edge_pair("e", "er", "v", "v").unwrap();
        assert_eq!(cycle_rank(&loop_graph), 1);

        // theta graph: two vertices, three geometric edges
        let mut theta = FiniteGraph::new();
        theta.add_vertex("x").unwrap();
        theta.add_vertex("y").unwrap();
        for i in 0..3 {
            theta.add_edge_pair(format!("e{i}"), format!("E{i}"), "x", "y").unwrap();
        }
        assert_eq!(cycle_rank(&theta), 2);
    }

    #[test]
    fn elliptic_generation_on_stars() {
        for group in [z(2), z(3), Arc::new(FiniteGroup::symmetric("s3", 3))] {
            let act = star_action(&group).unwrap();
            let verdict = elliptic_generation_check(&act).unwrap();
            assert!(verdict.holds, "failed for {}", group.name());
        }
    }

    #[test]
    fn fundamental_domain_examples() {
        // trivial action: the whole tree
        let tree = Arc::new(FiniteTree::new(path_graph(&["a", "b", "c"])).unwrap());
        let act = FiniteAction::new(z(1), tree, |_, v| v.to_string()).unwrap();
        let (dom, _) = fundamental_domain(&act).unwrap();
        assert_eq!(dom.len(), 3);

        // star actions: one edge
        for group in [z(2), z(3)] {
            let act = star_action(&group).unwrap();
            let (dom, chosen) = fundamental_domain(&act).unwrap();
            assert_eq!(dom.len(), 2);
            assert!(dom.contains("*"));
            assert_eq!(chosen.len(), 2);
        }
    }

    #[test]
    fn fundamental_domain_meets_orbits_once() {
        let s3 = Arc::new(FiniteGroup::symmetric("s3", 3));
        for sub in [vec![0], s3.subgroup_closure(&[s3.element("102").unwrap()])] {
            let act = star_subgroup_action(&s3, &sub).unwrap();
            let (dom, chosen) = fundamental_domain(&act).unwrap();
            let orbits = act.vertex_orbits();
            assert_eq!(dom.len(), orbits.len());
            assert_eq!(chosen.len(), orbits.len());
            for orbit in orbits {
                let graph = act.tree().graph();
                let hits = orbit
                    .iter()
                    .filter(|&&v| dom.contains(graph.vertex_id(v)))
                    .count();
                assert_eq!(hits, 1);
            }
        }
    }

    fn chain3_tog() -> TreeOfGroups {
        // x0 -- x1 -- x2 with groups Z2 < Z4 < Z8 and edge groups the smaller
        let tree = Arc::new(FiniteTree::new(path_graph(&["x0", "x1", "x2"])).unwrap());
        let g2 = z(2);
        let g4 = z(4);
        let g8 = z(8);
        let vgroups = BTreeMap::from([
            ("x0".to_string(), g2.clone()),
            ("x1".to_string(), g4.clone()),
            ("x2".to_string(), g8.clone()),
        ]);
        let alphas = BTreeMap::from([
            // edge x0~x1 has group Z2
            ("x0~x1".to_string(), GroupHom::identity(g2.clone())),
            ("x1~x0".to_string(), GroupHom::new(g2.clone(), g4.clone(), vec![0, 2]).unwrap()),
            // edge x1~x2 has group Z4
            ("x1~x2".to_string(), GroupHom::identity(g4.clone())),
            ("x2~x1".to_string(), GroupHom::new(g4, g8, vec![0, 2, 4, 6]).unwrap()),
        ]);
        TreeOfGroups::new("chain3", tree, vgroups, alphas).unwrap()
    }

    #[test]
    fn chain_tog_orients_upward() {
        let tog = chain3_tog();
        let report = tog.orient_edges();
        assert_eq!(report.local["x0~x1"], EdgeClass::Positive);
        assert_eq!(report.local["x1~x0"], EdgeClass::Negative);
        assert_eq!(report.local["x1~x2"], EdgeClass::Positive);
        assert!(report.disagreements.is_empty());

        let walk = follow_positive_chain(&tog, "x0").unwrap();
        assert_eq!(walk.path, vec!["x0", "x1", "x2"]);
        assert_eq!(walk.groups, vec!["z2", "z4", "z8"]);
        assert_eq!(walk.end, WalkEnd::Sink { vertex: "x2".to_string() });
    }

    #[test]
    fn all_equal_groups_degenerate_both() {
        let tree = Arc::new(FiniteTree::new(path_graph(&["x", "y"])).unwrap());
        let g2 = z(2);
        let vgroups =
            BTreeMap::from([("x".to_string(), g2.clone()), ("y".to_string(), g2.clone())]);
        let alphas = BTreeMap::from([
            ("x~y".to_string(), GroupHom::identity(g2.clone())),
            ("y~x".to_string(), GroupHom::identity(g2.clone())),
        ]);
        let tog = TreeOfGroups::new("same", tree, vgroups, alphas).unwrap();
        let report = tog.orient_edges();
        assert_eq!(report.local["x~y"], EdgeClass::DegenerateBoth);
        let walk = follow_positive_chain(&tog, "x").unwrap();
        assert!(matches!(walk.end, WalkEnd::DegenerateEdge { .. }));
    }

    #[test]
    fn free_splitting_degenerate_neither() {
        // single edge with trivial edge group and nontrivial vertex groups
        let tree = Arc::new(FiniteTree::new(path_graph(&["x", "y"])).unwrap());
        let triv = z(1);
        let vgroups = BTreeMap::from([("x".to_string(), z(2)), ("y".to_string(), z(3))]);
        let alphas = BTreeMap::from([
            ("x~y".to_string(), GroupHom::new(triv.clone(), z(2), vec![0]).unwrap()),
            ("y~x".to_string(), GroupHom::new(triv, z(3), vec![0]).unwrap()),
        ]);
        let tog = TreeOfGroups::new("split", tree, vgroups, alphas).unwrap();
        let report = tog.orient_edges();
        assert_eq!(report.local["x~y"], EdgeClass::DegenerateNeither);
        assert_eq!(report.global["x~y"], EdgeClass::DegenerateNeither);
    }

    #[test]
    fn single_vertex_walk_is_sink() {
        let mut g = FiniteGraph::new();
        g.add_vertex("x").unwrap();
        let tree = Arc::new(FiniteTree::new(g).unwrap());
        let vgroups = BTreeMap::from([("x".to_string(), z(2))]);
        let tog = TreeOfGroups::new("point", tree, vgroups, BTreeMap::new()).unwrap();
        let walk = follow_positive_chain(&tog, "x").unwrap();
        assert_eq!(walk.end, WalkEnd::Sink { vertex: "x".to_string() });
        assert_eq!(walk.path, vec!["x"]);
    }

    #[test]
    fn two_outgoing_positive_edges_reported() {
        // y -- x -- z with R_x = Z2 carried isomorphically into both edges
        let tree = Arc::new(FiniteTree::new(path_graph(&["y", "x", "z"])).unwrap());
        let g2 = z(2);
        let g4 = z(4);
        let vgroups = BTreeMap::from([
            ("x".to_string(), g2.clone()),
            ("y".to_string(), g4.clone()),
            ("z".to_string(), g4.clone()),
        ]);
        let embed = || GroupHom::new(g2.clone(), g4.clone(), vec![0, 2]).unwrap();
        let alphas = BTreeMap::from([
            ("x~z".to_string(), GroupHom::identity(g2.clone())),
            ("z~x".to_string(), embed()),
            ("y~x".to_string(), embed()),
            ("x~y".to_string(), GroupHom::identity(g2.clone())),
        ]);
        let tog = TreeOfGroups::new("fork", tree, vgroups, alphas).unwrap();
        let walk = follow_positive_chain(&tog, "x").unwrap();
        match walk.end {
            WalkEnd::MultiplePositive { vertex, edges } => {
                assert_eq!(vertex, "x");
                assert_eq!(edges.len(), 2);
            }
            other => panic!("expected multiplicity report, got {other:?}"),
        }
    }

    #[test]
    fn local_vs_global_disagreement() {
        // x -- y -- z: locally y~z is positive, but the x-side fails to
        // collapse because the x~y edge group is trivial under Z2
        let tree = Arc::new(FiniteTree::new(path_graph(&["x", "y", "z"])).unwrap());
        let triv = z(1);
        let g2 = z(2);
        let g4 = z(4);
        let vgroups = BTreeMap::from([
            ("x".to_string(), g2.clone()),
            ("y".to_string(), g2.clone()),
            ("z".to_string(), g4.clone()),
        ]);
        let alphas = BTreeMap::from([
            ("x~y".to_string(), GroupHom::new(triv.clone(), g2.clone(), vec![0]).unwrap()),
            ("y~x".to_string(), GroupHom::new(triv, g2.clone(), vec![0]).unwrap()),
            ("y~z".to_string(), GroupHom::identity(g2.clone())),
            ("z~y".to_string(), GroupHom::new(g2.clone(), g4, vec![0, 2]).unwrap()),
        ]);
        let tog = TreeOfGroups::new("mixed", tree, vgroups, alphas).unwrap();
        let report = tog.orient_edges();
        assert_eq!(report.local["y~z"], EdgeClass::Positive);
        assert_eq!(report.global["y~z"], EdgeClass::DegenerateNeither);
        assert!(report.disagreements.contains(&"y~z".to_string()));
    }
}
