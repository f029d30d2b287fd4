//! Amalgamated free products `G = A *_C B` over finite factors: reduction of
//! raw words to normal form, algebraic element classification with translation
//! length, the tree on the left cosets `G/A ⊔ G/B` as a lazy host, and vertex
//! and edge stabilizers.
//!
//! Normal form convention: every element is spelt uniquely as
//! `s1 s2 ... sn * phi(c)` where the syllables `si` are non-trivial left-coset
//! transversal representatives taken alternately from the two factors, and the
//! head `c` lies in the amalgamated group. A coset key is then obtained by
//! dropping a trailing syllable from the vertex's own side and absorbing the
//! head into the factor, which makes vertex equality a plain string
//! comparison.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::group::{FiniteGroup, GroupError, GroupHom, Transversal};
use crate::isometry::TreeAutomorphism;
use crate::tree::{LazyTree, TreeHost};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AmalgamError {
    #[error("{0}")]
    Group(#[from] GroupError),
    #[error("map {name} is not a monomorphism: {reason}")]
    NotMonomorphism { name: String, reason: String },
    #[error("hom {name} must map the amalgamated group into factor {expected}")]
    WrongFactor { name: String, expected: String },
    #[error("letter {0:?} is not of the form A:<element> or B:<element>")]
    BadLetter(String),
    #[error("element {element:?} is not in factor {factor}")]
    UnknownElement { factor: String, element: String },
    #[error("malformed coset key {0:?}")]
    BadKey(String),
    #[error("vertices {0:?} and {1:?} are not adjacent")]
    NotAdjacent(String, String),
}

/// Which free factor a letter or syllable belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Side::A => 'A',
            Side::B => 'B',
        }
    }
}

/// One syllable: a non-trivial transversal representative in the given factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Syllable {
    pub side: Side,
    pub elem: usize,
}

/// The unique reduced spelling of a group element (see module docs).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NormalFormWord {
    syllables: Vec<Syllable>,
    head: usize,
}

impl NormalFormWord {
    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn head(&self) -> usize {
        self.head
    }

    pub fn syllable_length(&self) -> usize {
        self.syllables.len()
    }
}

/// Algebraic classification of an element acting on the coset tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementClass {
    /// Conjugate into a factor: `witness^-1 w witness` lies in `factor`
    /// (or in the amalgamated group when `in_amalgam` is set).
    Elliptic { witness: NormalFormWord, factor: Side, in_amalgam: bool },
    /// Cyclically reduced syllable length at least 2; that length is the
    /// translation length of the action on the coset tree.
    Hyperbolic { translation_length: usize, core: NormalFormWord },
}

/// A finite amalgam datum: factors, amalgamated group, the two monomorphisms
/// and the transversals that pin down all normal-form spellings.
#[derive(Debug)]
pub struct AmalgamSpec {
    name: String,
    factor_a: Arc<FiniteGroup>,
    factor_b: Arc<FiniteGroup>,
    amalgamated: Arc<FiniteGroup>,
    phi_a: GroupHom,
    phi_b: GroupHom,
    trans_a: Transversal,
    trans_b: Transversal,
    // decomp[x] = (transversal rep, c) with x = rep * phi(c)
    decomp_a: Vec<(usize, usize)>,
    decomp_b: Vec<(usize, usize)>,
    nontrivial: bool,
}

impl AmalgamSpec {
    pub fn new(
        name: impl Into<String>,
        phi_a: GroupHom,
        phi_b: GroupHom,
    ) -> Result<Arc<Self>, AmalgamError> {
        Self::with_transversals(name, phi_a, phi_b, None, None)
    }

    /// Builds the spec with caller-chosen transversals (defaults to the
    /// lexicographically-least rule). Changing representatives respells
    /// syllables but leaves every invariant quantity unchanged.
    pub fn with_transversals(
        name: impl Into<String>,
        phi_a: GroupHom,
        phi_b: GroupHom,
        reps_a: Option<&[usize]>,
        reps_b: Option<&[usize]>,
    ) -> Result<Arc<Self>, AmalgamError> {
        if phi_a.domain() != phi_b.domain() {
            return Err(AmalgamError::WrongFactor {
                name: "phi_A/phi_B".into(),
                expected: "a common amalgamated group".into(),
            });
        }
        for (hom, label) in [(&phi_a, "phi_A"), (&phi_b, "phi_B")] {
            hom.check_monomorphism().map_err(|v| AmalgamError::NotMonomorphism {
                name: label.into(),
                reason: v.to_string(),
            })?;
        }
        let factor_a = phi_a.codomain().clone();
        let factor_b = phi_b.codomain().clone();
        let amalgamated = phi_a.domain().clone();
        let image_a = phi_a.image();
        let image_b = phi_b.image();
        let trans_a = match reps_a {
            Some(r) => factor_a.left_cosets_with_reps(&image_a, r)?,
            None => factor_a.left_cosets(&image_a)?,
        };
        let trans_b = match reps_b {
            Some(r) => factor_b.left_cosets_with_reps(&image_b, r)?,
            None => factor_b.left_cosets(&image_b)?,
        };
        let decompose = |g: &Arc<FiniteGroup>, t: &Transversal, phi: &GroupHom| {
            g.elements()
                .map(|x| {
                    let rep = t.rep(x);
                    let inside = g.mul(g.inv(rep), x);
                    let c = phi.preimage(inside).expect("x lies in rep * image");
                    (rep, c)
                })
                .collect::<Vec<_>>()
        };
        let decomp_a = decompose(&factor_a, &trans_a, &phi_a);
        let decomp_b = decompose(&factor_b, &trans_b, &phi_b);
        let nontrivial = trans_a.coset_count() > 1 && trans_b.coset_count() > 1;
        Ok(Arc::new(AmalgamSpec {
            name: name.into(),
            factor_a,
            factor_b,
            amalgamated,
            phi_a,
            phi_b,
            trans_a,
            trans_b,
            decomp_a,
            decomp_b,
            nontrivial,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn factor(&self, side: Side) -> &Arc<FiniteGroup> {
        match side {
            Side::A => &self.factor_a,
            Side::B => &self.factor_b,
        }
    }

    pub fn amalgamated(&self) -> &Arc<FiniteGroup> {
        &self.amalgamated
    }

    pub fn phi(&self, side: Side) -> &GroupHom {
        match side {
            Side::A => &self.phi_a,
            Side::B => &self.phi_b,
        }
    }

    pub fn transversal(&self, side: Side) -> &Transversal {
        match side {
            Side::A => &self.trans_a,
            Side::B => &self.trans_b,
        }
    }

    /// False when one of the monomorphisms is onto its factor; such amalgams
    /// are permitted but everything hyperbolic degenerates.
    pub fn is_nontrivial(&self) -> bool {
        self.nontrivial
    }

    fn decomp(&self, side: Side, x: usize) -> (usize, usize) {
        match side {
            Side::A => self.decomp_a[x],
            Side::B => self.decomp_b[x],
        }
    }

    pub fn identity_word(&self) -> NormalFormWord {
        NormalFormWord { syllables: Vec::new(), head: self.amalgamated.identity() }
    }

    /// Right-multiplies the normal form by one factor letter, restoring the
    /// normal form. This is the only place the rewriting happens; every other
    /// word operation folds through it.
    fn push_letter(&self, w: &mut NormalFormWord, side: Side, x: usize) {
        let factor = self.factor(side);
        let phi = self.phi(side);
        // fold the head through the letter's factor
        let mut y = factor.mul(phi.apply(w.head), x);
        if let Some(last) = w.syllables.last() {
            if last.side == side {
                y = factor.mul(last.elem, y);
                w.syllables.pop();
            }
        }
        let (rep, c) = self.decomp(side, y);
        if rep != factor.identity() {
            w.syllables.push(Syllable { side, elem: rep });
        }
        w.head = c;
    }

    /// Reduces a raw word (a sequence of factor letters) to its normal form.
    /// `reduce` is a homomorphism: concatenation maps to `multiply`.
    pub fn reduce(&self, letters: &[(Side, usize)]) -> NormalFormWord {
        let mut w = self.identity_word();
        for &(side, x) in letters {
            self.push_letter(&mut w, side, x);
        }
        w
    }

    /// The letters of a normal form, suitable for re-reduction.
    pub fn letters_of(&self, w: &NormalFormWord) -> Vec<(Side, usize)> {
        let mut out: Vec<(Side, usize)> =
            w.syllables.iter().map(|s| (s.side, s.elem)).collect();
        if w.head != self.amalgamated.identity() {
            out.push((Side::A, self.phi_a.apply(w.head)));
        }
        out
    }

    pub fn multiply(&self, u: &NormalFormWord, v: &NormalFormWord) -> NormalFormWord {
        let mut w = u.clone();
        for s in &v.syllables {
            self.push_letter(&mut w, s.side, s.elem);
        }
        if v.head != self.amalgamated.identity() {
            self.push_letter(&mut w, Side::A, self.phi_a.apply(v.head));
        }
        w
    }

    pub fn inverse(&self, w: &NormalFormWord) -> NormalFormWord {
        let mut letters: Vec<(Side, usize)> = Vec::with_capacity(w.syllables.len() + 1);
        let c_inv = self.amalgamated.inv(w.head);
        if c_inv != self.amalgamated.identity() {
            letters.push((Side::A, self.phi_a.apply(c_inv)));
        }
        for s in w.syllables.iter().rev() {
            letters.push((s.side, self.factor(s.side).inv(s.elem)));
        }
        self.reduce(&letters)
    }

    /// A single factor element as a normal form.
    pub fn factor_word(&self, side: Side, x: usize) -> NormalFormWord {
        self.reduce(&[(side, x)])
    }

    /// Is the element in the chosen factor (syllable length 0, or a single
    /// syllable on that side)?
    pub fn lies_in_factor(&self, w: &NormalFormWord, side: Side) -> bool {
        match w.syllables.as_slice() {
            [] => true,
            [s] => s.side == side,
            _ => false,
        }
    }

    /// Is the element in the image of the amalgamated group?
    pub fn lies_in_amalgam(&self, w: &NormalFormWord) -> bool {
        w.syllables.is_empty()
    }

    /// Parses whitespace-separated letters `A:<label>` / `B:<label>`; the
    /// empty string and `"1"` denote the identity.
    pub fn parse_word(&self, text: &str) -> Result<NormalFormWord, AmalgamError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (side, label) = match token.split_once(':') {
                Some(("A", l)) => (Side::A, l),
                Some(("B", l)) => (Side::B, l),
                _ => return Err(AmalgamError::BadLetter(token.to_string())),
            };
            let factor = self.factor(side);
            let elem = factor.element(label).map_err(|_| AmalgamError::UnknownElement {
                factor: factor.name().to_string(),
                element: label.to_string(),
            })?;
            letters.push((side, elem));
        }
        Ok(self.reduce(&letters))
    }

    /// Canonical spelling of a normal form as a raw word; parsing it back
    /// yields the same normal form.
    pub fn render_word(&self, w: &NormalFormWord) -> String {
        let letters = self.letters_of(w);
        if letters.is_empty() {
            return "1".to_string();
        }
        letters
            .iter()
            .map(|&(side, x)| format!("{}:{}", side.letter(), self.factor(side).label(x)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Cyclic reduction: repeatedly conjugates away matching end syllables.
    /// Syllable length <= 1 after reduction means elliptic (with the
    /// accumulated conjugator as witness); otherwise the element is
    /// hyperbolic of translation length the core length.
    pub fn classify_element(&self, w: &NormalFormWord) -> ElementClass {
        let mut core = w.clone();
        let mut witness = self.identity_word();
        while core.syllable_length() >= 2 {
            let first = core.syllables[0];
            let last = core.syllables[core.syllable_length() - 1];
            if first.side != last.side {
                break;
            }
            let s = self.factor_word(first.side, first.elem);
            let s_inv = self.inverse(&s);
            core = self.multiply(&self.multiply(&s_inv, &core), &s);
            witness = self.multiply(&witness, &s);
        }
        if core.syllable_length() >= 2 {
            ElementClass::Hyperbolic { translation_length: core.syllable_length(), core }
        } else {
            let in_amalgam = core.syllables.is_empty();
            let factor = core.syllables.first().map(|s| s.side).unwrap_or(Side::A);
            ElementClass::Elliptic { witness, factor, in_amalgam }
        }
    }
}

/// A vertex of the coset tree: the side plus the canonical key word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BsVertex {
    pub side: Side,
    pub syllables: Vec<Syllable>,
}

impl AmalgamSpec {
    /// The canonical key of the coset `w * factor(side)`: drop a trailing
    /// syllable from the vertex's own side, absorb the head.
    pub fn coset_vertex(&self, w: &NormalFormWord, side: Side) -> BsVertex {
        let mut syllables = w.syllables.clone();
        if syllables.last().map(|s| s.side) == Some(side) {
            syllables.pop();
        }
        BsVertex { side, syllables }
    }

    pub fn vertex_key(&self, v: &BsVertex) -> String {
        let mut out = String::new();
        out.push(v.side.letter());
        out.push('|');
        let parts: Vec<String> = v
            .syllables
            .iter()
            .map(|s| format!("{}:{}", s.side.letter(), self.factor(s.side).label(s.elem)))
            .collect();
        out.push_str(&parts.join(" "));
        out
    }

    pub fn parse_vertex_key(&self, key: &str) -> Result<BsVertex, AmalgamError> {
        let (side_char, rest) =
            key.split_once('|').ok_or_else(|| AmalgamError::BadKey(key.to_string()))?;
        let side = match side_char {
            "A" => Side::A,
            "B" => Side::B,
            _ => return Err(AmalgamError::BadKey(key.to_string())),
        };
        let mut syllables = Vec::new();
        for token in rest.split_whitespace() {
            let (s, label) = match token.split_once(':') {
                Some(("A", l)) => (Side::A, l),
                Some(("B", l)) => (Side::B, l),
                _ => return Err(AmalgamError::BadKey(key.to_string())),
            };
            let factor = self.factor(s);
            let elem = factor
                .element(label)
                .map_err(|_| AmalgamError::BadKey(key.to_string()))?;
            syllables.push(Syllable { side: s, elem });
        }
        // key words must alternate and end opposite to the vertex side
        for pair in syllables.windows(2) {
            if pair[0].side == pair[1].side {
                return Err(AmalgamError::BadKey(key.to_string()));
            }
        }
        if syllables.last().map(|s| s.side) == Some(side) {
            return Err(AmalgamError::BadKey(key.to_string()));
        }
        Ok(BsVertex { side, syllables })
    }

    /// The normal form whose coset is the vertex.
    pub fn vertex_rep(&self, v: &BsVertex) -> NormalFormWord {
        NormalFormWord { syllables: v.syllables.clone(), head: self.amalgamated.identity() }
    }

    /// Left translation of a coset vertex.
    pub fn act(&self, w: &NormalFormWord, v: &BsVertex) -> BsVertex {
        let moved = self.multiply(w, &self.vertex_rep(v));
        self.coset_vertex(&moved, v.side)
    }

    pub fn act_on_key(&self, w: &NormalFormWord, key: &str) -> Result<String, AmalgamError> {
        let v = self.parse_vertex_key(key)?;
        Ok(self.vertex_key(&self.act(w, &v)))
    }

    /// Does `w` stabilize the vertex? Equivalent to membership in the
    /// conjugate `h * factor * h^-1` named by `stabilizer`.
    pub fn stabilizes(&self, w: &NormalFormWord, v: &BsVertex) -> bool {
        self.act(w, v) == *v
    }

    /// The stabilizer of a vertex, described as a conjugate of its factor.
    pub fn stabilizer(&self, v: &BsVertex) -> StabilizerDesc {
        StabilizerDesc { conjugator: self.vertex_rep(v), side: Some(v.side) }
    }

    /// The neighbors of a vertex in the coset tree: for an A-vertex `gA`,
    /// the B-vertices `g t B` over the transversal of the amalgam in A.
    pub fn vertex_neighbors(&self, v: &BsVertex) -> Vec<BsVertex> {
        let side = v.side;
        let other = side.other();
        let factor = self.factor(side);
        let mut out = Vec::new();
        for &rep in self.transversal(side).reps() {
            if rep == factor.identity() {
                // g * 1 * other-factor: drop a trailing other-side syllable
                let mut syllables = v.syllables.clone();
                if syllables.last().map(|s| s.side) == Some(other) {
                    syllables.pop();
                }
                out.push(BsVertex { side: other, syllables });
            } else {
                let mut syllables = v.syllables.clone();
                syllables.push(Syllable { side, elem: rep });
                out.push(BsVertex { side: other, syllables });
            }
        }
        out
    }

    /// The edge between adjacent vertices, described by an element lying in
    /// both cosets; the edge stabilizer is the conjugate of the amalgamated
    /// group by that element.
    pub fn edge_between(
        &self,
        v1: &BsVertex,
        v2: &BsVertex,
    ) -> Result<StabilizerDesc, AmalgamError> {
        let (va, vb) = match (v1.side, v2.side) {
            (Side::A, Side::B) => (v1, v2),
            (Side::B, Side::A) => (v2, v1),
            _ => {
                return Err(AmalgamError::NotAdjacent(
                    self.vertex_key(v1),
                    self.vertex_key(v2),
                ))
            }
        };
        if !self.vertex_neighbors(va).contains(vb) {
            return Err(AmalgamError::NotAdjacent(self.vertex_key(v1), self.vertex_key(v2)));
        }
        // the common element: the longer of the two key words
        let h = if vb.syllables.len() > va.syllables.len() {
            self.vertex_rep(vb)
        } else {
            self.vertex_rep(va)
        };
        Ok(StabilizerDesc { conjugator: h, side: None })
    }

    /// The tree on the left cosets `G/A ⊔ G/B`, rooted at the coset `A`.
    /// Degrees are the transversal sizes; the group acts by left translation
    /// without inversion.
    pub fn bs_tree(self: &Arc<Self>) -> Arc<LazyTree> {
        let spec = self.clone();
        Arc::new(LazyTree::new("A|", move |key| {
            let v = spec.parse_vertex_key(key).expect("expansion only sees canonical keys");
            spec.vertex_neighbors(&v).iter().map(|n| spec.vertex_key(n)).collect()
        }))
    }

    /// The left-translation automorphism of the coset tree.
    pub fn translation(
        self: &Arc<Self>,
        tree: &Arc<LazyTree>,
        w: &NormalFormWord,
    ) -> TreeAutomorphism {
        let host: Arc<dyn TreeHost> = tree.clone();
        let spec = self.clone();
        let word = w.clone();
        let spec_inv = self.clone();
        let word_inv = self.inverse(w);
        let backward = move |key: &str| {
            spec_inv.act_on_key(&word_inv, key).expect("canonical keys act")
        };
        TreeAutomorphism::new(
            host,
            self.render_word(w),
            move |key: &str| spec.act_on_key(&word, key).expect("canonical keys act"),
            Some(Arc::new(backward)),
        )
    }

    /// All normal forms of syllable length at most `max_syllables` (every
    /// head, every alternating spelling), in deterministic order.
    pub fn words_up_to(&self, max_syllables: usize) -> Vec<NormalFormWord> {
        let mut out = Vec::new();
        let heads: Vec<usize> = self.amalgamated.elements().collect();
        let nontrivial = |side: Side| -> Vec<usize> {
            let factor = self.factor(side);
            self.transversal(side)
                .reps()
                .iter()
                .copied()
                .filter(|&r| r != factor.identity())
                .collect()
        };
        let reps_a = nontrivial(Side::A);
        let reps_b = nontrivial(Side::B);
        let mut shapes: Vec<Vec<Syllable>> = vec![Vec::new()];
        let mut frontier: Vec<Vec<Syllable>> = vec![Vec::new()];
        for _ in 0..max_syllables {
            let mut next = Vec::new();
            for shape in &frontier {
                let allowed: Vec<Side> = match shape.last() {
                    None => vec![Side::A, Side::B],
                    Some(s) => vec![s.side.other()],
                };
                for side in allowed {
                    let reps = if side == Side::A { &reps_a } else { &reps_b };
                    for &r in reps {
                        let mut longer = shape.clone();
                        longer.push(Syllable { side, elem: r });
                        next.push(longer);
                    }
                }
            }
            shapes.extend(next.iter().cloned());
            frontier = next;
        }
        for shape in shapes {
            for &head in &heads {
                out.push(NormalFormWord { syllables: shape.clone(), head });
            }
        }
        out
    }
}

/// A subgroup presented as a conjugate `h F h^-1` of a factor (or of the
/// amalgamated group when `side` is `None`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerDesc {
    pub conjugator: NormalFormWord,
    /// `Some(side)`: conjugate of that factor. `None`: conjugate of the
    /// amalgamated group (an edge stabilizer).
    pub side: Option<Side>,
}

impl StabilizerDesc {
    /// Membership via the conjugacy description.
    pub fn contains(&self, spec: &AmalgamSpec, w: &NormalFormWord) -> bool {
        let h_inv = spec.inverse(&self.conjugator);
        let moved = spec.multiply(&spec.multiply(&h_inv, w), &self.conjugator);
        match self.side {
            Some(side) => spec.lies_in_factor(&moved, side),
            None => spec.lies_in_amalgam(&moved),
        }
    }

    /// The full element list `h x h^-1` for x in the named subgroup, as
    /// normal forms.
    pub fn elements(&self, spec: &AmalgamSpec) -> BTreeSet<NormalFormWord> {
        let h = &self.conjugator;
        let h_inv = spec.inverse(h);
        let base: Vec<NormalFormWord> = match self.side {
            Some(side) => spec
                .factor(side)
                .elements()
                .map(|x| spec.factor_word(side, x))
                .collect(),
            None => spec
                .amalgamated()
                .elements()
                .map(|c| spec.factor_word(Side::A, spec.phi(Side::A).apply(c)))
                .collect(),
        };
        base.into_iter()
            .map(|x| spec.multiply(&spec.multiply(h, &x), &h_inv))
            .collect()
    }
}
