//! Single-automorphism analysis: inversion detection, elliptic/hyperbolic
//! classification with the characteristic subtree, the amplitude by its two
//! independent routes (minimum displacement over a ball, and the
//! `max{0, d(x,g²x) - d(x,gx)}` formula), the composition law for disjoint
//! characteristic subtrees, and the neutral/attracting/repulsing trichotomy
//! for fixed ends.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::tree::{
    ball, distance, subtree_distance, DistanceOracle, ExploredBall, FiniteTree, HalfLine, Subtree,
    TreeError, TreeHost,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IsometryError {
    #[error("map is not an isometry: adjacent pair ({a:?}, {b:?}) has non-adjacent images")]
    NotIsometric { a: String, b: String },
    #[error("automorphism inverts the edge ({0:?}, {1:?})")]
    HasInversion(String, String),
    #[error("displacement minimum {boundary_min} is only attained on the window frontier; enlarge the window")]
    MinimumOnBoundary { boundary_min: usize },
    #[error("characteristic subtrees intersect at {vertex:?}")]
    SubtreesIntersect { vertex: String },
    #[error("no tail of the half-line is carried back into it within horizon {horizon}")]
    EndNotFixed { horizon: usize },
    #[error("vertex map is not bijective: {image:?} hit twice")]
    NotBijective { image: String },
    #[error("vertex {0:?} has no image in the table")]
    MissingImage(String),
    #[error("automorphism has no inverse map and one is required")]
    NoInverse,
    #[error(transparent)]
    Tree(#[from] TreeError),
}

type VertexMap = dyn Fn(&str) -> String + Send + Sync;

/// An adjacency-preserving bijection of a tree, given as a vertex map.
/// Finite hosts use explicit tables; lazy hosts use algebraic actions.
#[derive(Clone)]
pub struct TreeAutomorphism {
    host: Arc<dyn TreeHost>,
    label: String,
    forward: Arc<VertexMap>,
    backward: Option<Arc<VertexMap>>,
}

impl std::fmt::Debug for TreeAutomorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TreeAutomorphism").field("label", &self.label).finish_non_exhaustive()
    }
}

impl TreeAutomorphism {
    pub fn new(
        host: Arc<dyn TreeHost>,
        label: impl Into<String>,
        forward: impl Fn(&str) -> String + Send + Sync + 'static,
        backward: Option<Arc<VertexMap>>,
    ) -> Self {
        TreeAutomorphism { host, label: label.into(), forward: Arc::new(forward), backward }
    }

    /// Table-based automorphism of a finite tree. Checks bijectivity and
    /// adjacency preservation up front.
    pub fn from_table(
        host: Arc<FiniteTree>,
        label: impl Into<String>,
        table: BTreeMap<String, String>,
    ) -> Result<Self, IsometryError> {
        let mut inverse = BTreeMap::new();
        for v in host.vertices() {
            let img = table.get(v).ok_or_else(|| IsometryError::MissingImage(v.to_string()))?;
            if !host.contains(img) {
                return Err(TreeError::VertexNotFound(img.clone()).into());
            }
            if inverse.insert(img.clone(), v.to_string()).is_some() {
                return Err(IsometryError::NotBijective { image: img.clone() });
            }
        }
        for v in host.vertices() {
            for w in host.neighbors(v) {
                if !host.neighbors(&table[v]).contains(&table[&w]) {
                    return Err(IsometryError::NotIsometric { a: v.to_string(), b: w });
                }
            }
        }
        let fwd = table;
        let bwd = inverse;
        let host_dyn: Arc<dyn TreeHost> = host;
        Ok(TreeAutomorphism {
            host: host_dyn,
            label: label.into(),
            forward: Arc::new(move |v: &str| fwd[v].clone()),
            backward: Some(Arc::new(move |v: &str| bwd[v].clone())),
        })
    }

    pub fn identity(host: Arc<dyn TreeHost>) -> Self {
        TreeAutomorphism {
            host,
            label: "1".into(),
            forward: Arc::new(|v: &str| v.to_string()),
            backward: Some(Arc::new(|v: &str| v.to_string())),
        }
    }

    pub fn host(&self) -> &Arc<dyn TreeHost> {
        &self.host
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn apply(&self, v: &str) -> String {
        (self.forward)(v)
    }

    pub fn apply_inverse(&self, v: &str) -> Result<String, IsometryError> {
        match &self.backward {
            Some(b) => Ok(b(v)),
            None => Err(IsometryError::NoInverse),
        }
    }

    /// `self . other`: apply `other` first. Matches the product of group
    /// elements under a left action.
    pub fn compose(&self, other: &TreeAutomorphism) -> TreeAutomorphism {
        let f = self.forward.clone();
        let g = other.forward.clone();
        let backward = match (&self.backward, &other.backward) {
            (Some(fi), Some(gi)) => {
                let fi = fi.clone();
                let gi = gi.clone();
                Some(Arc::new(move |v: &str| gi(&fi(v))) as Arc<VertexMap>)
            }
            _ => None,
        };
        TreeAutomorphism {
            host: self.host.clone(),
            label: format!("({} {})", self.label, other.label),
            forward: Arc::new(move |v: &str| f(&g(v))),
            backward,
        }
    }

    pub fn inverse(&self) -> Result<TreeAutomorphism, IsometryError> {
        let backward = self.backward.clone().ok_or(IsometryError::NoInverse)?;
        Ok(TreeAutomorphism {
            host: self.host.clone(),
            label: format!("({})^-1", self.label),
            forward: backward,
            backward: Some(self.forward.clone()),
        })
    }

    pub fn pow(&self, n: usize) -> TreeAutomorphism {
        let mut acc = TreeAutomorphism::identity(self.host.clone());
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc.label = format!("({})^{}", self.label, n);
        acc
    }

    /// `f g f^-1`, the conjugate of `g` by `self`.
    pub fn conjugate(&self, g: &TreeAutomorphism) -> Result<TreeAutomorphism, IsometryError> {
        let conj = self.compose(g).compose(&self.inverse()?);
        Ok(conj)
    }

    /// The exploration window for classification: the whole tree on finite
    /// hosts, the radius-`window` ball around the root otherwise.
    pub fn window_ball(&self, window: usize) -> ExploredBall {
        let radius = match self.host.all_vertices() {
            Some(all) => all.len(), // always covers a finite tree
            None => window,
        };
        ball(self.host.as_ref(), &self.host.root(), radius)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Confidence {
    Exact,
    HorizonLimited,
}

/// Classification outcome. For `Elliptic`, `Exact` confidence means the fixed
/// set is complete (it never reaches the window frontier). For `Hyperbolic`,
/// `Exact` means the amplitude is certain (the displacement minimum was
/// attained strictly inside the window); the axis window is a finite piece of
/// the invariant line by nature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IsometryClass {
    Elliptic { fixed: BTreeSet<String> },
    Hyperbolic { axis_window: Vec<String>, amplitude: usize },
    Inversion { edge: (String, String) },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsometryReport {
    pub class: IsometryClass,
    pub confidence: Confidence,
}

impl IsometryReport {
    pub fn amplitude(&self) -> usize {
        match &self.class {
            IsometryClass::Elliptic { .. } => 0,
            IsometryClass::Hyperbolic { amplitude, .. } => *amplitude,
            IsometryClass::Inversion { .. } => 0,
        }
    }

    pub fn is_elliptic(&self) -> bool {
        matches!(self.class, IsometryClass::Elliptic { .. })
    }

    /// The characteristic subtree window: fixed set or axis piece.
    pub fn characteristic_window(&self) -> Option<Subtree> {
        match &self.class {
            IsometryClass::Elliptic { fixed } => Some(Subtree::from_connected_set(fixed.clone())),
            IsometryClass::Hyperbolic { axis_window, .. } if !axis_window.is_empty() => {
                Some(Subtree::from_connected_set(axis_window.iter().cloned().collect()))
            }
            _ => None,
        }
    }
}

/// Checks adjacency preservation on the window and scans for an inverted
/// edge: an edge (v, w) with g(v) = w and g(w) = v.
pub fn detect_inversion(
    g: &TreeAutomorphism,
    window: usize,
) -> Result<Option<(String, String)>, IsometryError> {
    let b = g.window_ball(window);
    detect_inversion_in(g, &b)
}

fn detect_inversion_in(
    g: &TreeAutomorphism,
    b: &ExploredBall,
) -> Result<Option<(String, String)>, IsometryError> {
    for (v, w) in b.edges(g.host.as_ref()) {
        let gv = g.apply(&v);
        let gw = g.apply(&w);
        if !g.host.neighbors(&gv).contains(&gw) {
            return Err(IsometryError::NotIsometric { a: v, b: w });
        }
        if gv == w && gw == v {
            return Ok(Some((v, w)));
        }
    }
    Ok(None)
}

fn displacement_budget(b: &ExploredBall, center_disp: usize) -> usize {
    2 * b.radius() + center_disp + 4
}

/// The amplitude as a minimum of displacements over a ball: the defining
/// formula, evaluated by brute force. Exact when the minimum is attained
/// strictly inside the ball (then no vertex outside can do better); errors
/// out when the minimum only occurs on the frontier.
pub fn amplitude_direct(
    g: &TreeAutomorphism,
    b: &ExploredBall,
) -> Result<(usize, String), IsometryError> {
    if let Some((v, w)) = detect_inversion_in(g, b)? {
        return Err(IsometryError::HasInversion(v, w));
    }
    let host = g.host.as_ref();
    let center_disp = distance(host, b.center(), &g.apply(b.center()), 16 * (b.radius() + 1))?;
    let budget = displacement_budget(b, center_disp);
    // every displacement endpoint lies within radius + center_disp of the
    // center, so one breadth-first index answers all of them
    let oracle = DistanceOracle::new(host, b.center(), b.radius() + center_disp);
    let mut disp: Vec<(usize, &str)> = Vec::with_capacity(b.vertex_count());
    for v in b.vertices() {
        disp.push((oracle.distance(host, v, &g.apply(v), budget)?, v));
    }
    let m = disp.iter().map(|&(d, _)| d).min().expect("ball is non-empty");
    let witness = disp
        .iter()
        .filter(|&&(d, v)| d == m && (b.closed() || b.is_interior(v)))
        .map(|&(_, v)| v)
        .next();
    match witness {
        Some(v) => Ok((m, v.to_string())),
        None => Err(IsometryError::MinimumOnBoundary { boundary_min: m }),
    }
}

/// The amplitude by the basepoint formula `max{0, d(x, g²x) - d(x, gx)}`,
/// valid at every vertex for automorphisms without inversion.
pub fn amplitude_formula(
    g: &TreeAutomorphism,
    x: &str,
    budget: usize,
) -> Result<usize, IsometryError> {
    let host = g.host.as_ref();
    let gx = g.apply(x);
    let ggx = g.apply(&gx);
    let d1 = distance(host, x, &gx, budget)?;
    let d2 = distance(host, x, &ggx, budget)?;
    Ok(d2.saturating_sub(d1))
}

/// Full classification over the window: inversion witness, or elliptic with
/// its fixed-set window, or hyperbolic with an ordered axis window on which
/// the automorphism shifts by its amplitude.
pub fn classify(g: &TreeAutomorphism, window: usize) -> Result<IsometryReport, IsometryError> {
    let b = g.window_ball(window);
    if let Some(edge) = detect_inversion_in(g, &b)? {
        return Ok(IsometryReport {
            class: IsometryClass::Inversion { edge },
            confidence: Confidence::Exact,
        });
    }
    let host = g.host.as_ref();
    let center_disp = distance(host, b.center(), &g.apply(b.center()), 16 * (b.radius() + 1))?;
    let budget = displacement_budget(&b, center_disp);
    let oracle = DistanceOracle::new(host, b.center(), b.radius() + center_disp);
    let mut disp: BTreeMap<&str, usize> = BTreeMap::new();
    let mut min = usize::MAX;
    for v in b.vertices() {
        let d = oracle.distance(host, v, &g.apply(v), budget)?;
        disp.insert(v, d);
        min = min.min(d);
    }
    let argmin: BTreeSet<String> = disp
        .iter()
        .filter(|(_, &d)| d == min)
        .map(|(v, _)| v.to_string())
        .collect();
    let min_interior = b.closed() || argmin.iter().any(|v| b.is_interior(v));
    if min == 0 {
        let complete = b.closed() || argmin.iter().all(|v| b.is_interior(v));
        return Ok(IsometryReport {
            class: IsometryClass::Elliptic { fixed: argmin },
            confidence: if complete { Confidence::Exact } else { Confidence::HorizonLimited },
        });
    }
    if !min_interior {
        // the window never reaches the characteristic subtree; the true class
        // is unknown (could even be elliptic further out)
        return Ok(IsometryReport {
            class: IsometryClass::Hyperbolic {
                axis_window: argmin.into_iter().collect(),
                amplitude: min,
            },
            confidence: Confidence::HorizonLimited,
        });
    }
    // the minimum is the amplitude and the argmin set is the axis inside the
    // window; order it into a path and orient it along the translation
    let axis_window = order_axis_window(g, &argmin, min);
    Ok(IsometryReport {
        class: IsometryClass::Hyperbolic { axis_window, amplitude: min },
        confidence: Confidence::Exact,
    })
}

fn order_axis_window(g: &TreeAutomorphism, set: &BTreeSet<String>, amplitude: usize) -> Vec<String> {
    let host = g.host.as_ref();
    if set.len() == 1 {
        return set.iter().cloned().collect();
    }
    let in_set_neighbors = |v: &str| -> Vec<String> {
        host.neighbors(v).into_iter().filter(|w| set.contains(w)).collect()
    };
    let mut endpoints: Vec<&String> =
        set.iter().filter(|v| in_set_neighbors(v).len() == 1).collect();
    endpoints.sort();
    let Some(start) = endpoints.first() else {
        return set.iter().cloned().collect();
    };
    let mut path = vec![(*start).clone()];
    let mut prev: Option<String> = None;
    loop {
        let cur = path.last().unwrap().clone();
        let next: Vec<String> = in_set_neighbors(&cur)
            .into_iter()
            .filter(|w| Some(w) != prev.as_ref())
            .collect();
        match next.as_slice() {
            [w] => {
                prev = Some(cur);
                path.push(w.clone());
            }
            [] => break,
            _ => return set.iter().cloned().collect(), // not a path; report unordered
        }
    }
    if path.len() != set.len() {
        return set.iter().cloned().collect();
    }
    // orient so that g shifts indices forward by the amplitude
    let pos: BTreeMap<&String, usize> = path.iter().zip(0..).collect();
    let mut reversed = false;
    for (i, v) in path.iter().enumerate() {
        if let Some(&j) = pos.get(&g.apply(v)) {
            reversed = j < i && i - j == amplitude;
            break;
        }
    }
    if reversed {
        path.reverse();
    }
    #[cfg(debug_assertions)]
    {
        let pos: BTreeMap<&String, usize> = path.iter().zip(0..).collect();
        for (i, v) in path.iter().enumerate() {
            if let Some(&j) = pos.get(&g.apply(v)) {
                assert_eq!(j, i + amplitude, "axis window must shift forward by the amplitude");
            }
        }
    }
    path
}

/// The characteristic subtree window with its confidence: the fixed-vertex
/// set if elliptic, the axis window if hyperbolic.
pub fn characteristic_subtree(
    g: &TreeAutomorphism,
    window: usize,
) -> Result<(Subtree, IsometryReport), IsometryError> {
    let report = classify(g, window)?;
    match report.characteristic_window() {
        Some(sub) => Ok((sub, report)),
        None => match report.class {
            IsometryClass::Inversion { edge } => Err(IsometryError::HasInversion(edge.0, edge.1)),
            _ => Err(IsometryError::MinimumOnBoundary { boundary_min: report.amplitude() }),
        },
    }
}

/// Both sides of the composition law for disjoint characteristic subtrees:
/// `amp(gh) = amp(g) + amp(h) + 2 dist(X_g, X_h)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CullerMorganVerdict {
    pub amplitude_g: usize,
    pub amplitude_h: usize,
    pub amplitude_gh: usize,
    pub dist: usize,
    pub lhs: usize,
    pub rhs: usize,
    pub equal: bool,
    pub confidence: Confidence,
}

pub fn culler_morgan_check(
    g: &TreeAutomorphism,
    h: &TreeAutomorphism,
    window: usize,
) -> Result<CullerMorganVerdict, IsometryError> {
    let (xg, rg) = characteristic_subtree(g, window)?;
    let (xh, rh) = characteristic_subtree(h, window)?;
    if let Some(common) = xg.intersection(&xh).into_iter().next() {
        return Err(IsometryError::SubtreesIntersect { vertex: common });
    }
    let finite_size = g.host.all_vertices().map(|v| v.len()).unwrap_or(0);
    let dist_budget = (8 * (window + 1)).max(finite_size);
    let (dist, _bridge) = subtree_distance(g.host.as_ref(), &xg, &xh, dist_budget)?;
    let gh = g.compose(h);
    let rgh = classify(&gh, window)?;
    if let IsometryClass::Inversion { edge } = rgh.class {
        return Err(IsometryError::HasInversion(edge.0, edge.1));
    }
    let lhs = rgh.amplitude();
    let rhs = rg.amplitude() + rh.amplitude() + 2 * dist;
    let confidence = if rg.confidence == Confidence::Exact
        && rh.confidence == Confidence::Exact
        && rgh.confidence == Confidence::Exact
    {
        Confidence::Exact
    } else {
        Confidence::HorizonLimited
    };
    Ok(CullerMorganVerdict {
        amplitude_g: rg.amplitude(),
        amplitude_h: rh.amplitude(),
        amplitude_gh: lhs,
        dist,
        lhs,
        rhs,
        equal: lhs == rhs,
        confidence,
    })
}

/// Outcome of checking Serre's lemma on a pair: if g, h and gh are all
/// elliptic then their fixed trees must share a vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SerreLemmaVerdict {
    /// All three elliptic; a common fixed vertex was found.
    CommonFixedVertex { vertex: String },
    /// Not all of g, h, gh are elliptic; the lemma does not apply.
    NotApplicable { g: String, h: String, gh: String },
    /// All three elliptic but at least one fixed-set window is incomplete and
    /// the windows happen to be disjoint: inconclusive at this horizon.
    Undetermined,
    /// All three elliptic with complete fixed sets that are pairwise
    /// disjoint. This cannot happen for a correct action on a tree.
    Violated,
}

pub fn serre_lemma_check(
    g: &TreeAutomorphism,
    h: &TreeAutomorphism,
    window: usize,
) -> Result<SerreLemmaVerdict, IsometryError> {
    let rg = classify(g, window)?;
    let rh = classify(h, window)?;
    let rgh = classify(&g.compose(h), window)?;
    let kind = |r: &IsometryReport| match (&r.class, r.confidence) {
        (IsometryClass::Elliptic { .. }, _) => "elliptic".to_string(),
        (IsometryClass::Hyperbolic { amplitude, .. }, Confidence::Exact) => {
            format!("hyperbolic({amplitude})")
        }
        (IsometryClass::Hyperbolic { .. }, Confidence::HorizonLimited) => "undetermined".into(),
        (IsometryClass::Inversion { .. }, _) => "inversion".to_string(),
    };
    if !(rg.is_elliptic() && rh.is_elliptic() && rgh.is_elliptic()) {
        return Ok(SerreLemmaVerdict::NotApplicable { g: kind(&rg), h: kind(&rh), gh: kind(&rgh) });
    }
    let (fg, fh) = match (&rg.class, &rh.class) {
        (IsometryClass::Elliptic { fixed: a }, IsometryClass::Elliptic { fixed: b }) => (a, b),
        _ => unreachable!(),
    };
    match fg.intersection(fh).next() {
        Some(v) => Ok(SerreLemmaVerdict::CommonFixedVertex { vertex: v.clone() }),
        None => {
            if rg.confidence == Confidence::Exact && rh.confidence == Confidence::Exact {
                Ok(SerreLemmaVerdict::Violated)
            } else {
                Ok(SerreLemmaVerdict::Undetermined)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FixedEndKind {
    Neutral,
    Attracting,
    Repulsing,
}

/// Trichotomy outcome for a fixed end: the kind, the index from which the
/// tail behaviour holds, and the constant shift realizing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedEndReport {
    pub kind: FixedEndKind,
    pub index: usize,
    pub shift: i64,
    pub confidence: Confidence,
}

/// Classifies the action of `g` on a fixed end: Neutral if a tail is fixed
/// pointwise, Attracting if a tail is shifted forward along the half-line,
/// Repulsing if backward.
pub fn classify_fixed_end(
    g: &TreeAutomorphism,
    end: &HalfLine,
    horizon: usize,
) -> Result<FixedEndReport, IsometryError> {
    assert!(horizon >= 2, "horizon too small to observe a tail");
    end.validate(g.host.as_ref(), horizon + 1)?;
    let prefix = end.prefix(horizon + 1);
    let pos: BTreeMap<&String, usize> = prefix.iter().zip(0..).collect();
    let shifts: Vec<Option<i64>> = prefix
        .iter()
        .enumerate()
        .map(|(m, v)| pos.get(&g.apply(v)).map(|&j| j as i64 - m as i64))
        .collect();
    let last_defined = match shifts.iter().rposition(|s| s.is_some()) {
        Some(m) => m,
        None => return Err(IsometryError::EndNotFixed { horizon }),
    };
    let shift = shifts[last_defined].unwrap();
    // the tail must be carried into the half-line with this constant shift;
    // images past the window boundary are the only allowed gaps
    let expected_last = if shift >= 0 { horizon as i64 - shift } else { horizon as i64 };
    if (last_defined as i64) < expected_last {
        return Err(IsometryError::EndNotFixed { horizon });
    }
    let mut index = last_defined;
    while index > 0 && shifts[index - 1] == Some(shift) {
        index -= 1;
    }
    let kind = match shift {
        0 => FixedEndKind::Neutral,
        s if s > 0 => FixedEndKind::Attracting,
        _ => FixedEndKind::Repulsing,
    };
    let period = shift.unsigned_abs().max(1) as usize;
    let confidence = if last_defined >= index + period {
        Confidence::Exact
    } else {
        Confidence::HorizonLimited
    };
    Ok(FixedEndReport { kind, index, shift, confidence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::path_graph;
    use crate::tree::line_tree;

    fn line_host() -> Arc<dyn TreeHost> {
        Arc::new(line_tree())
    }

    fn affine(host: &Arc<dyn TreeHost>, label: &str, sign: i64, offset: i64) -> TreeAutomorphism {
        let fwd = move |v: &str| {
            let k: i64 = v.parse().unwrap();
            (sign * k + offset).to_string()
        };
        let bwd = move |v: &str| {
            let k: i64 = v.parse().unwrap();
            (sign * (k - offset)).to_string()
        };
        TreeAutomorphism::new(host.clone(), label, fwd, Some(Arc::new(bwd)))
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<TreeAutomorphism>();
        assert_send_sync::<crate::tree::LazyTree>();
        assert_send_sync::<crate::tree::HalfLine>();
        assert_send_sync::<IsometryReport>();
    }

    #[test]
    fn identity_has_no_inversion() {
        let host = line_host();
        let id = TreeAutomorphism::identity(host);
        assert_eq!(detect_inversion(&id, 5).unwrap(), None);
    }

    #[test]
    fn single_edge_swap_is_inversion() {
        let tree = Arc::new(FiniteTree::new(path_graph(&["x", "y"])).unwrap());
        let table = BTreeMap::from([
            ("x".to_string(), "y".to_string()),
            ("y".to_string(), "x".to_string()),
        ]);
        let swap = TreeAutomorphism::from_table(tree, "swap", table).unwrap();
        assert_eq!(
            detect_inversion(&swap, 3).unwrap(),
            Some(("x".to_string(), "y".to_string()))
        );
    }

    #[test]
    fn midpoint_reflection_inverts_its_edge() {
        let host = line_host();
        // x -> -x + 1 reflects about the midpoint of (0, 1)
        let r = affine(&host, "R(1/2)", -1, 1);
        assert_eq!(detect_inversion(&r, 6).unwrap(), Some(("0".to_string(), "1".to_string())));
    }

    #[test]
    fn non_isometric_map_rejected() {
        let host = line_host();
        let crush = TreeAutomorphism::new(
            host,
            "crush",
            |v: &str| {
                let k: i64 = v.parse().unwrap();
                (k / 2).to_string()
            },
            None,
        );
        assert!(matches!(
            detect_inversion(&crush, 5),
            Err(IsometryError::NotIsometric { .. })
        ));
    }

    #[test]
    fn amplitude_direct_examples() {
        let host = line_host();
        let id = TreeAutomorphism::identity(host.clone());
        let b = ball(host.as_ref(), "0", 4);
        assert_eq!(amplitude_direct(&id, &b).unwrap().0, 0);

        let t2 = affine(&host, "t2", 1, 2);
        assert_eq!(amplitude_direct(&t2, &b).unwrap().0, 2);
    }

    #[test]
    fn boundary_only_minimum_is_an_error() {
        let host = line_host();
        // reflection about vertex 10: every displacement in a small ball
        // around 0 is minimized only at the frontier nearest the fixed point
        let refl = affine(&host, "R10", -1, 20);
        let b = ball(host.as_ref(), "0", 2);
        match amplitude_direct(&refl, &b) {
            Err(IsometryError::MinimumOnBoundary { boundary_min }) => {
                assert_eq!(boundary_min, 16); // d(2, 18)
            }
            other => panic!("expected boundary error, got {other:?}"),
        }
        // enlarging the window resolves it
        let b = ball(host.as_ref(), "0", 12);
        assert_eq!(amplitude_direct(&refl, &b).unwrap().0, 0);
    }

    #[test]
    fn amplitude_formula_on_the_line() {
        let host = line_host();
        let t2 = affine(&host, "t2", 1, 2);
        // d(0,4) - d(0,2) = 2
        assert_eq!(amplitude_formula(&t2, "0", 32).unwrap(), 2);
        let refl = affine(&host, "R0", -1, 0);
        // max{0, d(3,3) - d(3,-3)} = 0
        assert_eq!(amplitude_formula(&refl, "3", 32).unwrap(), 0);
    }

    #[test]
    fn classify_line_isometries() {
        let host = line_host();
        let t2 = affine(&host, "t2", 1, 2);
        let report = classify(&t2, 5).unwrap();
        assert_eq!(report.amplitude(), 2);
        assert_eq!(report.confidence, Confidence::Exact);
        match &report.class {
            IsometryClass::Hyperbolic { axis_window, amplitude } => {
                assert_eq!(*amplitude, 2);
                // axis window is an ordered segment shifted by 2
                let pos: BTreeMap<&String, usize> = axis_window.iter().zip(0..).collect();
                for (i, v) in axis_window.iter().enumerate() {
                    if let Some(&j) = pos.get(&t2.apply(v)) {
                        assert_eq!(j, i + 2);
                    }
                }
            }
            other => panic!("expected hyperbolic, got {other:?}"),
        }

        let refl = affine(&host, "R3", -1, 6); // fixes vertex 3
        let report = classify(&refl, 8).unwrap();
        match &report.class {
            IsometryClass::Elliptic { fixed } => {
                assert_eq!(fixed.iter().collect::<Vec<_>>(), vec!["3"]);
            }
            other => panic!("expected elliptic, got {other:?}"),
        }
        assert_eq!(report.confidence, Confidence::Exact);
    }

    #[test]
    fn identity_on_path_fixes_everything() {
        let tree = Arc::new(FiniteTree::new(path_graph(&["a", "b", "c", "d", "e"])).unwrap());
        let host: Arc<dyn TreeHost> = tree;
        let id = TreeAutomorphism::identity(host);
        let report = classify(&id, 3).unwrap();
        match report.class {
            IsometryClass::Elliptic { fixed } => assert_eq!(fixed.len(), 5),
            other => panic!("expected elliptic, got {other:?}"),
        }
    }

    #[test]
    fn culler_morgan_rejects_shared_axis() {
        let host = line_host();
        let t2 = affine(&host, "t2", 1, 2);
        let t3 = affine(&host, "t3", 1, 3);
        assert!(matches!(
            culler_morgan_check(&t2, &t3, 5),
            Err(IsometryError::SubtreesIntersect { .. })
        ));
    }

    #[test]
    fn culler_morgan_for_disjoint_reflections() {
        let host = line_host();
        let r0 = affine(&host, "R0", -1, 0); // fixes 0
        let r3 = affine(&host, "R3", -1, 6); // fixes 3
        let verdict = culler_morgan_check(&r0, &r3, 12).unwrap();
        assert_eq!(verdict.dist, 3);
        assert_eq!(verdict.lhs, 6);
        assert!(verdict.equal);
        assert_eq!(verdict.confidence, Confidence::Exact);
    }

    #[test]
    fn serre_lemma_identity_pair() {
        let host = line_host();
        let id = TreeAutomorphism::identity(host);
        match serre_lemma_check(&id, &id, 4).unwrap() {
            SerreLemmaVerdict::CommonFixedVertex { .. } => {}
            other => panic!("expected common vertex, got {other:?}"),
        }
    }

    #[test]
    fn fixed_end_trichotomy_on_line() {
        let host = line_host();
        let end = HalfLine::new(|i| i.to_string());
        let id = TreeAutomorphism::identity(host.clone());
        let rep = classify_fixed_end(&id, &end, 8).unwrap();
        assert_eq!((rep.kind, rep.index), (FixedEndKind::Neutral, 0));

        let t2 = affine(&host, "t2", 1, 2);
        let rep = classify_fixed_end(&t2, &end, 8).unwrap();
        assert_eq!(rep.kind, FixedEndKind::Attracting);

        let back = affine(&host, "t-2", 1, -2);
        let rep = classify_fixed_end(&back, &end, 8).unwrap();
        assert_eq!(rep.kind, FixedEndKind::Repulsing);

        // a reflection does not fix this end at all
        let refl = affine(&host, "R0", -1, 0);
        assert!(matches!(
            classify_fixed_end(&refl, &end, 8),
            Err(IsometryError::EndNotFixed { .. })
        ));
    }

    #[test]
    fn powers_scale_amplitude_on_line() {
        let host = line_host();
        let t2 = affine(&host, "t2", 1, 2);
        for n in 1..=5 {
            let rep = classify(&t2.pow(n), 2 * n + 3).unwrap();
            assert_eq!(rep.amplitude(), 2 * n);
        }
    }
}
