//! Example actions built explicitly: the coset tree of an increasing chain of
//! subgroups with its neutral fixed end, the star tree of a finite group, and
//! actions on the bi-infinite line through the infinite dihedral group.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::graph::FiniteGraph;
use crate::group::FiniteGroup;
use crate::isometry::TreeAutomorphism;
use crate::quotient::{ActionError, FiniteAction};
use crate::tree::{line_tree, FiniteTree, HalfLine, LazyTree, TreeHost};

fn pow128(p: u64, e: u32) -> u128 {
    assert!(e <= MAX_CHAIN_LEVEL, "chain exploration exceeded the supported depth");
    (p as u128).pow(e)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("element {element} lives at level {level}, beyond depth {depth}; raise the depth to at least {level}")]
    BeyondDepth { element: String, level: usize, depth: usize },
    #[error("malformed chain vertex key {0:?}")]
    BadKey(String),
    #[error("level {0} is not a subgroup: {1}")]
    BadLevel(usize, String),
    #[error("level {0} does not strictly contain level {1}")]
    NotIncreasing(usize, usize),
}

/// An element `a / p^k` of the p-quasicyclic group, stored in lowest terms
/// (`0 <= a < p^k`, `p` does not divide `a` unless the element is zero).
/// The membership level of the element is `k` after reduction. Arithmetic is
/// exact up to level `MAX_CHAIN_LEVEL`, far past any budgeted exploration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PruferElement {
    pub num: u128,
    pub level: u32,
}

/// Exploration depth ceiling keeping `p^level` inside exact integer range.
pub const MAX_CHAIN_LEVEL: u32 = 75;

impl PruferElement {
    pub fn zero() -> Self {
        PruferElement { num: 0, level: 0 }
    }

    pub fn new(p: u64, num: u128, level: u32) -> Self {
        let modulus = pow128(p, level);
        Self::reduced(p, num % modulus.max(1), level)
    }

    fn reduced(p: u64, mut num: u128, mut level: u32) -> Self {
        if num == 0 {
            return Self::zero();
        }
        let p = p as u128;
        while level > 0 && num.is_multiple_of(p) {
            num /= p;
            level -= 1;
        }
        PruferElement { num, level }
    }

    pub fn add(self, other: Self, p: u64) -> Self {
        let level = self.level.max(other.level);
        let modulus = pow128(p, level);
        let a = self.num * pow128(p, level - self.level);
        let b = other.num * pow128(p, level - other.level);
        Self::reduced(p, (a + b) % modulus.max(1), level)
    }

    pub fn render(&self, p: u64) -> String {
        if self.num == 0 {
            "0".to_string()
        } else {
            format!("{}/{}^{}", self.num, p, self.level)
        }
    }

    pub fn parse(p: u64, text: &str) -> Option<Self> {
        if text == "0" {
            return Some(Self::zero());
        }
        let (num, rest) = text.split_once('/')?;
        let (base, exp) = rest.split_once('^')?;
        if base.parse::<u64>().ok()? != p {
            return None;
        }
        let num: u128 = num.parse().ok()?;
        let level: u32 = exp.parse().ok()?;
        // only reduced spellings name elements; this keeps keys canonical
        if level == 0
            || level > 24
            || num == 0
            || num >= pow128(p, level)
            || num.is_multiple_of(p as u128)
        {
            return None;
        }
        Some(PruferElement { num, level })
    }
}

/// An increasing chain of groups `G_0 < G_1 < ...`: either the finite
/// subgroups of the p-quasicyclic group, or an explicit finite chain of
/// subgroups of a finite group.
#[derive(Debug)]
pub enum ChainSpec {
    Prufer { name: String, p: u64 },
    Finite { name: String, group: Arc<FiniteGroup>, levels: Vec<Vec<usize>> },
}

impl ChainSpec {
    pub fn prufer(name: impl Into<String>, p: u64) -> Self {
        assert!(p >= 2);
        ChainSpec::Prufer { name: name.into(), p }
    }

    /// An explicit chain of subgroups of a finite group; each level must be a
    /// subgroup strictly containing the previous one.
    pub fn finite(
        name: impl Into<String>,
        group: Arc<FiniteGroup>,
        levels: Vec<Vec<usize>>,
    ) -> Result<Self, ChainError> {
        assert!(!levels.is_empty());
        for (i, level) in levels.iter().enumerate() {
            group
                .check_subgroup(level)
                .map_err(|e| ChainError::BadLevel(i, e.to_string()))?;
        }
        for i in 1..levels.len() {
            let prev = &levels[i - 1];
            let cur = &levels[i];
            if !prev.iter().all(|x| cur.contains(x)) || prev.len() >= cur.len() {
                return Err(ChainError::NotIncreasing(i, i - 1));
            }
        }
        Ok(ChainSpec::Finite { name: name.into(), group, levels })
    }

    pub fn name(&self) -> &str {
        match self {
            ChainSpec::Prufer { name, .. } => name,
            ChainSpec::Finite { name, .. } => name,
        }
    }

    /// The least level containing the element; `None` if it lies in no level
    /// (possible only for finite chains that do not exhaust the group).
    pub fn membership_level(&self, element: &ChainElement) -> Option<usize> {
        match (self, element) {
            (ChainSpec::Prufer { .. }, ChainElement::Prufer(x)) => Some(x.level as usize),
            (ChainSpec::Finite { levels, .. }, ChainElement::Finite(x)) => {
                levels.iter().position(|l| l.contains(x))
            }
            _ => None,
        }
    }

    /// True when every member is proper in the next and the union is the
    /// whole acting group; the Prüfer chains are, finite chains are not.
    pub fn is_exhaustive_proper(&self) -> bool {
        matches!(self, ChainSpec::Prufer { .. })
    }

    pub fn parse_element(&self, text: &str) -> Option<ChainElement> {
        match self {
            ChainSpec::Prufer { p, .. } => PruferElement::parse(*p, text).map(ChainElement::Prufer),
            ChainSpec::Finite { group, .. } => {
                group.element(text).ok().map(ChainElement::Finite)
            }
        }
    }

    pub fn render_element(&self, element: &ChainElement) -> String {
        match (self, element) {
            (ChainSpec::Prufer { p, .. }, ChainElement::Prufer(x)) => x.render(*p),
            (ChainSpec::Finite { group, .. }, ChainElement::Finite(x)) => {
                group.label(*x).to_string()
            }
            _ => "<foreign element>".to_string(),
        }
    }

    /// The standard query family `1/p, 1/p^2, ..., 1/p^depth` for Prüfer
    /// chains; all elements for finite chains.
    pub fn standard_elements(&self, depth: usize) -> Vec<ChainElement> {
        match self {
            ChainSpec::Prufer { .. } => (1..=depth as u32)
                .map(|k| ChainElement::Prufer(PruferElement { num: 1, level: k }))
                .collect(),
            ChainSpec::Finite { levels, .. } => levels
                .last()
                .unwrap()
                .iter()
                .map(|&x| ChainElement::Finite(x))
                .collect(),
        }
    }
}

/// An element of the union of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ChainElement {
    Prufer(PruferElement),
    Finite(usize),
}

/// The tree built from a chain: one vertex per coset `g G_n`, an edge from
/// each `g G_n` up to `g G_{n+1}`. Keys look like `L<n>|<canonical rep>`.
/// The chain group acts by left translation; every element is elliptic and
/// fixes everything from its membership level up, so the end along the spine
/// `(G_0, G_1, ...)` is a neutral fixed end.
#[derive(Clone)]
pub struct ChainTree {
    spec: Arc<ChainSpec>,
    tree: Arc<LazyTree>,
    depth: usize,
}

impl ChainTree {
    /// `depth` bounds the levels that queries may name; the lazy host itself
    /// expands upward as far as budgets carry any operation.
    pub fn new(spec: Arc<ChainSpec>, depth: usize) -> Self {
        let expander_spec = spec.clone();
        let tree = Arc::new(LazyTree::new("L0|0", move |key| {
            chain_neighbors(&expander_spec, key).expect("expansion only sees canonical keys")
        }));
        ChainTree { spec, tree, depth }
    }

    pub fn spec(&self) -> &Arc<ChainSpec> {
        &self.spec
    }

    pub fn tree(&self) -> &Arc<LazyTree> {
        &self.tree
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The left-translation automorphism of an element. Elements living
    /// beyond the depth bound are rejected with the level they would need.
    pub fn translation(&self, element: &ChainElement) -> Result<TreeAutomorphism, ChainError> {
        let level = self.spec.membership_level(element).unwrap_or(usize::MAX);
        if level > self.depth {
            return Err(ChainError::BeyondDepth {
                element: self.spec.render_element(element),
                level,
                depth: self.depth,
            });
        }
        let spec = self.spec.clone();
        let g = *element;
        let spec_inv = self.spec.clone();
        let g_inv = negate(&self.spec, element);
        let host: Arc<dyn TreeHost> = self.tree.clone();
        Ok(TreeAutomorphism::new(
            host,
            self.spec.render_element(element),
            move |key: &str| chain_translate(&spec, &g, key).expect("canonical keys act"),
            Some(Arc::new(move |key: &str| {
                chain_translate(&spec_inv, &g_inv, key).expect("canonical keys act")
            })),
        ))
    }

    /// The half-line `(G_0, G_1, G_2, ...)` up the spine.
    pub fn spine_end(&self) -> HalfLine {
        HalfLine::new(|i| format!("L{i}|0"))
    }

    /// The least level from which the element fixes every coset: its
    /// membership level. This is the index certifying neutrality of the
    /// spine end.
    pub fn neutrality_index(&self, element: &ChainElement) -> Option<usize> {
        self.spec.membership_level(element)
    }

    /// Does the element fix the vertex? For chains this depends only on the
    /// level: `g` fixes `h G_n` iff `g` lies in `G_n`.
    pub fn fixes(&self, element: &ChainElement, key: &str) -> Result<bool, ChainError> {
        let moved = chain_translate(&self.spec, element, key)?;
        Ok(moved == key)
    }
}

fn negate(spec: &ChainSpec, element: &ChainElement) -> ChainElement {
    match (spec, element) {
        (ChainSpec::Prufer { p, .. }, ChainElement::Prufer(x)) => {
            if x.num == 0 {
                ChainElement::Prufer(*x)
            } else {
                let modulus = pow128(*p, x.level);
                ChainElement::Prufer(PruferElement { num: modulus - x.num, level: x.level })
            }
        }
        (ChainSpec::Finite { group, .. }, ChainElement::Finite(x)) => {
            ChainElement::Finite(group.inv(*x))
        }
        _ => panic!("element does not belong to this chain"),
    }
}

fn parse_chain_key(spec: &ChainSpec, key: &str) -> Result<(usize, ChainElement), ChainError> {
    let rest = key.strip_prefix('L').ok_or_else(|| ChainError::BadKey(key.to_string()))?;
    let (level, rep) = rest.split_once('|').ok_or_else(|| ChainError::BadKey(key.to_string()))?;
    let level: usize = level.parse().map_err(|_| ChainError::BadKey(key.to_string()))?;
    let rep = spec.parse_element(rep).ok_or_else(|| ChainError::BadKey(key.to_string()))?;
    // a key must spell the canonical representative of its coset
    if chain_coset_key(spec, level, &rep) != key {
        return Err(ChainError::BadKey(key.to_string()));
    }
    Ok((level, rep))
}

/// Canonical representative of the coset `g G_n`, as a key string.
fn chain_coset_key(spec: &ChainSpec, level: usize, g: &ChainElement) -> String {
    match (spec, g) {
        (ChainSpec::Prufer { p, .. }, ChainElement::Prufer(x)) => {
            // reduce g modulo G_n: keep the digits of a/p^k above level n
            if (x.level as usize) <= level {
                format!("L{level}|0")
            } else {
                let drop = pow128(*p, x.level - level as u32);
                let rem = x.num % drop;
                let canon = PruferElement::reduced(*p, rem, x.level);
                format!("L{level}|{}", canon.render(*p))
            }
        }
        (ChainSpec::Finite { group, levels, .. }, ChainElement::Finite(x)) => {
            // least-label representative of x * G_level
            let members = &levels[level.min(levels.len() - 1)];
            let rep = members
                .iter()
                .map(|&h| group.mul(*x, h))
                .min_by_key(|&y| group.label(y).to_string())
                .unwrap();
            format!("L{level}|{}", group.label(rep))
        }
        _ => panic!("element does not belong to this chain"),
    }
}

fn chain_translate(spec: &ChainSpec, g: &ChainElement, key: &str) -> Result<String, ChainError> {
    let (level, rep) = parse_chain_key(spec, key)?;
    let moved = match (spec, g, rep) {
        (ChainSpec::Prufer { p, .. }, ChainElement::Prufer(a), ChainElement::Prufer(b)) => {
            ChainElement::Prufer(a.add(b, *p))
        }
        (ChainSpec::Finite { group, .. }, ChainElement::Finite(a), ChainElement::Finite(b)) => {
            ChainElement::Finite(group.mul(*a, b))
        }
        _ => return Err(ChainError::BadKey(key.to_string())),
    };
    Ok(chain_coset_key(spec, level, &moved))
}

fn chain_neighbors(spec: &ChainSpec, key: &str) -> Result<Vec<String>, ChainError> {
    let (level, rep) = parse_chain_key(spec, key)?;
    let mut out = Vec::new();
    let top = match spec {
        ChainSpec::Prufer { .. } => usize::MAX,
        ChainSpec::Finite { levels, .. } => levels.len() - 1,
    };
    if level < top {
        out.push(chain_coset_key(spec, level + 1, &rep));
    }
    if level >= 1 {
        // the cosets of G_{level-1} inside this coset of G_level
        match (spec, rep) {
            (ChainSpec::Prufer { p, .. }, ChainElement::Prufer(base)) => {
                for j in 0..*p {
                    let shift = PruferElement::reduced(*p, j as u128, level as u32);
                    let child = base.add(shift, *p);
                    out.push(chain_coset_key(spec, level - 1, &ChainElement::Prufer(child)));
                }
            }
            (ChainSpec::Finite { group, levels, .. }, ChainElement::Finite(base)) => {
                let mut seen = Vec::new();
                for &h in &levels[level] {
                    let child = chain_coset_key(
                        spec,
                        level - 1,
                        &ChainElement::Finite(group.mul(base, h)),
                    );
                    if !seen.contains(&child) {
                        seen.push(child);
                    }
                }
                out.extend(seen);
            }
            _ => unreachable!(),
        }
    }
    Ok(out)
}

/// The star tree of a finite group: a hub `*` joined to one leaf per element.
/// The group acts fixing the hub and left-translating the leaves, so every
/// element is elliptic and non-identity elements fix only the hub.
pub fn star_tree(group: &Arc<FiniteGroup>) -> Arc<FiniteTree> {
    let mut g = FiniteGraph::new();
    g.add_vertex("*").unwrap();
    for label in group.labels() {
        g.add_vertex(label.clone()).unwrap();
    }
    for label in group.labels() {
        g.add_edge_pair(format!("out:{label}"), format!("in:{label}"), "*", label).unwrap();
    }
    Arc::new(FiniteTree::new(g).expect("stars are trees"))
}

/// The full left-translation action of the group on its star tree.
pub fn star_action(group: &Arc<FiniteGroup>) -> Result<FiniteAction, ActionError> {
    let tree = star_tree(group);
    let g = group.clone();
    FiniteAction::new(group.clone(), tree, move |elt, v| {
        if v == "*" {
            "*".to_string()
        } else {
            let x = g.element(v).expect("leaf labels are elements");
            g.label(g.mul(elt, x)).to_string()
        }
    })
}

/// The restriction of the star action to a subgroup, as an action of that
/// subgroup (relabelled with the parent's element labels).
pub fn star_subgroup_action(
    group: &Arc<FiniteGroup>,
    subgroup: &[usize],
) -> Result<FiniteAction, ActionError> {
    let tree = star_tree(group);
    let labels: Vec<String> = subgroup.iter().map(|&x| group.label(x).to_string()).collect();
    let table: Vec<Vec<usize>> = subgroup
        .iter()
        .map(|&x| {
            subgroup
                .iter()
                .map(|&y| {
                    let xy = group.mul(x, y);
                    subgroup.iter().position(|&z| z == xy).expect("closed subset")
                })
                .collect()
        })
        .collect();
    let sub = Arc::new(
        FiniteGroup::validate(format!("{}<{}", labels.join(","), group.name()), labels, table)
            .expect("a subgroup table is a group"),
    );
    let g = group.clone();
    let members = subgroup.to_vec();
    FiniteAction::new(sub, tree, move |elt, v| {
        let parent_elt = members[elt];
        if v == "*" {
            "*".to_string()
        } else {
            let x = g.element(v).expect("leaf labels are elements");
            g.label(g.mul(parent_elt, x)).to_string()
        }
    })
}

/// An affine map `x -> sign*x + offset` of the integer line; the composition
/// law is `(s1,k1)(s2,k2) = (s1*s2, s1*k2 + k1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DihedralElement {
    pub sign: i64,
    pub offset: i64,
}

impl DihedralElement {
    pub fn identity() -> Self {
        DihedralElement { sign: 1, offset: 0 }
    }

    pub fn translation(k: i64) -> Self {
        DihedralElement { sign: 1, offset: k }
    }

    /// Reflection about the point `c/2` (a vertex when `c` is even, an edge
    /// midpoint when odd).
    pub fn reflection(c: i64) -> Self {
        DihedralElement { sign: -1, offset: c }
    }

    pub fn apply(&self, x: i64) -> i64 {
        self.sign * x + self.offset
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &DihedralElement) -> DihedralElement {
        DihedralElement { sign: self.sign * other.sign, offset: self.sign * other.offset + self.offset }
    }

    pub fn inverse(&self) -> DihedralElement {
        // (s,k)^-1 = (s, -s*k)
        DihedralElement { sign: self.sign, offset: -self.sign * self.offset }
    }

    pub fn is_identity(&self) -> bool {
        self.sign == 1 && self.offset == 0
    }

    /// Amplitude of the line action: |offset| for translations, 0 for
    /// reflections (about a vertex).
    pub fn line_amplitude(&self) -> u64 {
        if self.sign == 1 {
            self.offset.unsigned_abs()
        } else {
            0
        }
    }

    /// The edge inverted by a reflection about an edge midpoint, if any.
    pub fn inversion_edge(&self) -> Option<(i64, i64)> {
        if self.sign == -1 && self.offset.rem_euclid(2) == 1 {
            let low = (self.offset - 1) / 2;
            Some((low, low + 1))
        } else {
            None
        }
    }
}

/// Which realization of the two standard generators to use: `b` as the
/// reflection about vertex 1 (no inversions) or about the midpoint of the
/// edge (0,1) (inverts that edge).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DinfConvention {
    VertexReflections,
    MidpointB,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DinfError {
    #[error("letter {0:?} is not 'a' or 'b'")]
    BadLetter(char),
    #[error("generator images violate relator {0:?}")]
    RelatorViolation(String),
}

/// Composes a word over {a, b} with a = reflection about vertex 0 and b per
/// the convention; letters act right-to-left, matching the group product.
pub fn dinf_word(word: &str, convention: DinfConvention) -> Result<DihedralElement, DinfError> {
    let a = DihedralElement::reflection(0);
    let b = match convention {
        DinfConvention::VertexReflections => DihedralElement::reflection(2),
        DinfConvention::MidpointB => DihedralElement::reflection(1),
    };
    let mut out = DihedralElement::identity();
    for ch in word.chars() {
        let img = match ch {
            'a' => a,
            'b' => b,
            _ => return Err(DinfError::BadLetter(ch)),
        };
        out = out.compose(&img);
    }
    Ok(out)
}

/// A family of line automorphisms realizing generator images, with the
/// relators verified on the affine side first.
pub struct LineActionFamily {
    host: Arc<dyn TreeHost>,
    images: BTreeMap<char, DihedralElement>,
}

impl LineActionFamily {
    pub fn new(
        images: BTreeMap<char, DihedralElement>,
        relators: &[&str],
    ) -> Result<Self, DinfError> {
        for relator in relators {
            let mut acc = DihedralElement::identity();
            for ch in relator.chars() {
                let img = images.get(&ch).ok_or(DinfError::BadLetter(ch))?;
                acc = acc.compose(img);
            }
            if !acc.is_identity() {
                return Err(DinfError::RelatorViolation(relator.to_string()));
            }
        }
        let host: Arc<dyn TreeHost> = Arc::new(line_tree());
        Ok(LineActionFamily { host, images })
    }

    pub fn host(&self) -> &Arc<dyn TreeHost> {
        &self.host
    }

    pub fn image(&self, generator: char) -> Option<DihedralElement> {
        self.images.get(&generator).copied()
    }

    /// Per-generator inversion witnesses: a reflection about an edge midpoint
    /// inverts that edge, so the family acts without inversion iff this map
    /// is empty.
    pub fn inversion_witnesses(&self) -> BTreeMap<char, (i64, i64)> {
        self.images
            .iter()
            .filter_map(|(c, img)| img.inversion_edge().map(|e| (*c, e)))
            .collect()
    }

    pub fn acts_without_inversion(&self) -> bool {
        self.inversion_witnesses().is_empty()
    }

    /// The line automorphism of a word over the generator alphabet.
    pub fn word_automorphism(&self, word: &str) -> Result<TreeAutomorphism, DinfError> {
        let mut elt = DihedralElement::identity();
        for ch in word.chars() {
            let img = self.images.get(&ch).ok_or(DinfError::BadLetter(ch))?;
            elt = elt.compose(img);
        }
        Ok(line_automorphism(&self.host, word, elt))
    }
}

/// A single affine map as an automorphism of the integer line tree.
pub fn line_automorphism(
    host: &Arc<dyn TreeHost>,
    label: &str,
    elt: DihedralElement,
) -> TreeAutomorphism {
    let inv = elt.inverse();
    TreeAutomorphism::new(
        host.clone(),
        label,
        move |v: &str| elt.apply(v.parse().expect("line keys are integers")).to_string(),
        Some(Arc::new(move |v: &str| {
            inv.apply(v.parse().expect("line keys are integers")).to_string()
        })),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::{
        classify, classify_fixed_end, detect_inversion, Confidence, FixedEndKind, IsometryClass,
    };
    use crate::tree::ball;

    fn prufer2() -> ChainTree {
        ChainTree::new(Arc::new(ChainSpec::prufer("prufer2", 2)), 20)
    }

    #[test]
    fn prufer_arithmetic() {
        let x = PruferElement::parse(2, "1/2^1").unwrap();
        assert_eq!(x.add(x, 2), PruferElement::zero());
        let y = PruferElement::parse(2, "1/2^2").unwrap();
        assert_eq!(y.add(y, 2), x);
        assert_eq!(PruferElement::parse(3, "3/3^2"), None); // not reduced
        assert_eq!(PruferElement::parse(3, "2/3^2").unwrap().level, 2);
    }

    #[test]
    fn chain_tree_shape() {
        let ct = prufer2();
        let t = ct.tree();
        // the root (a singleton coset) only points up
        assert_eq!(t.neighbors("L0|0"), vec!["L1|0"]);
        // a level-1 vertex: one parent, two children
        let n = t.neighbors("L1|0");
        assert_eq!(n, vec!["L2|0", "L0|0", "L0|1/2^1"]);
        // degree counts: 1 up + p down
        let b = ball(t.as_ref(), "L2|0", 1);
        assert_eq!(b.vertex_count(), 1 + 3);
    }

    #[test]
    fn chain_balls_are_trees() {
        let ct = ChainTree::new(Arc::new(ChainSpec::prufer("prufer3", 3)), 10);
        let t = ct.tree();
        let b = ball(t.as_ref(), "L0|0", 5);
        let mut g = crate::graph::FiniteGraph::new();
        for v in b.vertices() {
            g.add_vertex(v).unwrap();
        }
        for (i, (x, y)) in b.edges(t.as_ref()).iter().enumerate() {
            g.add_edge_pair(format!("e{i}"), format!("E{i}"), x, y).unwrap();
        }
        assert_eq!(g.is_tree().unwrap(), Ok(()));
    }

    #[test]
    fn chain_degrees_per_level() {
        // one neighbor up, [G_n : G_{n-1}] = p down, at every explored level
        for p in [2u64, 3] {
            let ct = ChainTree::new(Arc::new(ChainSpec::prufer(format!("prufer{p}"), p)), 10);
            let t = ct.tree();
            let b = ball(t.as_ref(), "L0|0", 6);
            for v in b.vertices() {
                let level: usize =
                    v.strip_prefix('L').unwrap().split('|').next().unwrap().parse().unwrap();
                let expected = if level == 0 { 1 } else { 1 + p as usize };
                assert_eq!(t.neighbors(v).len(), expected, "vertex {v}");
            }
        }
    }

    #[test]
    fn chain_element_fixes_its_tail() {
        let ct = prufer2();
        let half = ChainElement::Prufer(PruferElement::parse(2, "1/2^1").unwrap());
        // fixes every coset at level >= 1 within a window
        for key in ["L1|0", "L2|0", "L2|1/2^3", "L3|0"] {
            assert!(ct.fixes(&half, key).unwrap());
        }
        // moves every level-0 coset
        for key in ["L0|0", "L0|1/2^1", "L0|1/2^2"] {
            assert!(!ct.fixes(&half, key).unwrap());
        }
    }

    #[test]
    fn chain_translation_classifies_elliptic() {
        let ct = prufer2();
        let half = ChainElement::Prufer(PruferElement::parse(2, "1/2^1").unwrap());
        let auto = ct.translation(&half).unwrap();
        let report = classify(&auto, 4).unwrap();
        match report.class {
            IsometryClass::Elliptic { ref fixed } => {
                assert!(fixed.contains("L1|0"));
                assert!(!fixed.contains("L0|0"));
            }
            ref other => panic!("expected elliptic, got {other:?}"),
        }
        // the fixed set runs into the horizon, so it is never complete
        assert_eq!(report.confidence, Confidence::HorizonLimited);
    }

    #[test]
    fn spine_end_is_neutral_at_membership_level() {
        let ct = prufer2();
        let end = ct.spine_end();
        for k in 1..=3u32 {
            let e = ChainElement::Prufer(PruferElement { num: 1, level: k });
            let auto = ct.translation(&e).unwrap();
            let rep = classify_fixed_end(&auto, &end, 12).unwrap();
            assert_eq!(rep.kind, FixedEndKind::Neutral);
            assert_eq!(rep.index, k as usize);
            assert_eq!(ct.neutrality_index(&e), Some(k as usize));
        }
        let id = ChainElement::Prufer(PruferElement::zero());
        let auto = ct.translation(&id).unwrap();
        let rep = classify_fixed_end(&auto, &end, 12).unwrap();
        assert_eq!((rep.kind, rep.index), (FixedEndKind::Neutral, 0));
    }

    #[test]
    fn beyond_depth_rejected_with_hint() {
        let ct = ChainTree::new(Arc::new(ChainSpec::prufer("prufer3", 3)), 4);
        let deep = ChainElement::Prufer(PruferElement { num: 1, level: 9 });
        match ct.translation(&deep) {
            Err(ChainError::BeyondDepth { level: 9, depth: 4, .. }) => {}
            other => panic!("expected depth rejection, got {other:?}"),
        }
    }

    #[test]
    fn prufer3_level_two_element() {
        let ct = ChainTree::new(Arc::new(ChainSpec::prufer("prufer3", 3)), 20);
        let ninth = ChainElement::Prufer(PruferElement::parse(3, "1/3^2").unwrap());
        assert!(ct.fixes(&ninth, "L2|0").unwrap());
        assert!(ct.fixes(&ninth, "L3|0").unwrap());
        assert!(!ct.fixes(&ninth, "L1|0").unwrap());
        assert_eq!(ct.neutrality_index(&ninth), Some(2));
    }

    #[test]
    fn star_tree_shapes() {
        let z2 = Arc::new(FiniteGroup::cyclic("z2", 2));
        let t = star_tree(&z2);
        assert_eq!(t.vertex_count(), 3);
        let act = star_action(&z2).unwrap();
        let swap = act.automorphism(1).unwrap();
        assert_eq!(swap.apply("*"), "*");
        assert_eq!(swap.apply("0"), "1");
        assert_eq!(swap.apply("1"), "0");

        let s3 = Arc::new(FiniteGroup::symmetric("s3", 3));
        let t = star_tree(&s3);
        assert_eq!(t.vertex_count(), 7);
        let act = star_action(&s3).unwrap();
        // leaf stabilizers are trivial: only the identity fixes a leaf
        for e in s3.elements() {
            let auto = act.automorphism(e).unwrap();
            let fixes_leaf = s3.labels().iter().any(|l| auto.apply(l) == *l);
            assert_eq!(fixes_leaf, e == s3.identity());
        }
    }

    #[test]
    fn dinf_words_compose() {
        let a = dinf_word("a", DinfConvention::VertexReflections).unwrap();
        assert_eq!(a, DihedralElement { sign: -1, offset: 0 });
        let aa = dinf_word("aa", DinfConvention::VertexReflections).unwrap();
        assert!(aa.is_identity());
        let ab = dinf_word("ab", DinfConvention::VertexReflections).unwrap();
        assert_eq!(ab, DihedralElement { sign: 1, offset: -2 });
        assert_eq!(ab.line_amplitude(), 2);
    }

    #[test]
    fn line_amplitudes() {
        assert_eq!(DihedralElement::translation(4).line_amplitude(), 4);
        let refl6 = DihedralElement::reflection(6);
        assert_eq!(refl6.line_amplitude(), 0);
        assert_eq!(refl6.inversion_edge(), None);
        assert_eq!(DihedralElement::reflection(1).inversion_edge(), Some((0, 1)));
        // negative odd offsets floor correctly
        assert_eq!(DihedralElement::reflection(-3).inversion_edge(), Some((-2, -1)));
    }

    #[test]
    fn line_action_families() {
        let images = BTreeMap::from([
            ('a', DihedralElement::reflection(0)),
            ('b', DihedralElement::reflection(2)),
        ]);
        let fam = LineActionFamily::new(images, &["aa", "bb"]).unwrap();
        let refl6 = line_automorphism(fam.host(), "R3", DihedralElement::reflection(6));
        match classify(&refl6, 8).unwrap().class {
            IsometryClass::Elliptic { fixed } => {
                assert_eq!(fixed.into_iter().collect::<Vec<_>>(), vec!["3"]);
            }
            other => panic!("expected elliptic, got {other:?}"),
        }

        let with_inversion = BTreeMap::from([
            ('a', DihedralElement::reflection(0)),
            ('b', DihedralElement::reflection(1)),
        ]);
        let fam = LineActionFamily::new(with_inversion, &["aa", "bb"]).unwrap();
        assert!(!fam.acts_without_inversion());
        assert_eq!(fam.inversion_witnesses().get(&'b'), Some(&(0, 1)));
        let b = fam.word_automorphism("b").unwrap();
        assert_eq!(
            detect_inversion(&b, 6).unwrap(),
            Some(("0".to_string(), "1".to_string()))
        );

        // relator violation caught
        let bad = BTreeMap::from([
            ('a', DihedralElement::translation(2)),
            ('b', DihedralElement::reflection(0)),
        ]);
        assert!(matches!(
            LineActionFamily::new(bad, &["aa"]),
            Err(DinfError::RelatorViolation(_))
        ));
    }
}
