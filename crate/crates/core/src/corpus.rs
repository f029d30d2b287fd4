//! The standard automorphism corpus the verification suites run over: all
//! short words in the two test amalgams acting on their coset trees, all short
//! words over the infinite dihedral generators acting on the line, full star
//! actions of the small groups, and translations of quasicyclic chain trees.

use std::sync::Arc;

use crate::amalgam::{AmalgamSpec, NormalFormWord};
use crate::constructions::{
    dinf_word, line_automorphism, star_action, ChainElement, ChainSpec, ChainTree,
    DinfConvention, PruferElement,
};
use crate::group::{FiniteGroup, GroupHom};
use crate::isometry::TreeAutomorphism;
use crate::quotient::FiniteAction;
use crate::tree::{line_tree, LazyTree, TreeHost};

pub struct AmalgamFamily {
    pub spec: Arc<AmalgamSpec>,
    pub tree: Arc<LazyTree>,
    pub words: Vec<NormalFormWord>,
    pub autos: Vec<TreeAutomorphism>,
}

impl AmalgamFamily {
    fn new(spec: Arc<AmalgamSpec>, max_syllables: usize) -> Self {
        let tree = spec.bs_tree();
        let words = spec.words_up_to(max_syllables);
        let autos = words.iter().map(|w| spec.translation(&tree, w)).collect();
        AmalgamFamily { spec, tree, words, autos }
    }
}

pub struct LineFamily {
    pub host: Arc<dyn TreeHost>,
    pub words: Vec<String>,
    pub autos: Vec<TreeAutomorphism>,
}

impl LineFamily {
    fn new(max_len: usize) -> Self {
        let host: Arc<dyn TreeHost> = Arc::new(line_tree());
        let mut words = vec![String::new()];
        let mut frontier = vec![String::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for ch in ['a', 'b'] {
                    let mut longer = w.clone();
                    longer.push(ch);
                    next.push(longer);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        let autos = words
            .iter()
            .map(|w| {
                let elt = dinf_word(w, DinfConvention::VertexReflections)
                    .expect("letters are a/b");
                let label = if w.is_empty() { "1" } else { w.as_str() };
                line_automorphism(&host, label, elt)
            })
            .collect();
        LineFamily { host, words, autos }
    }
}

pub struct StarFamily {
    pub action: FiniteAction,
    pub autos: Vec<TreeAutomorphism>,
}

impl StarFamily {
    fn new(group: &Arc<FiniteGroup>) -> Self {
        let action = star_action(group).expect("star actions validate");
        let autos = group
            .elements()
            .map(|e| action.automorphism(e).expect("star elements are automorphisms"))
            .collect();
        StarFamily { action, autos }
    }
}

pub struct ChainFamily {
    pub chain: ChainTree,
    pub elements: Vec<ChainElement>,
    pub autos: Vec<TreeAutomorphism>,
}

impl ChainFamily {
    fn new(p: u64, max_level: u32, depth: usize) -> Self {
        let chain = ChainTree::new(Arc::new(ChainSpec::prufer(format!("prufer{p}"), p)), depth);
        let mut elements = vec![ChainElement::Prufer(PruferElement::zero())];
        for level in 1..=max_level {
            for a in 1..p.pow(level) {
                if a % p != 0 {
                    elements.push(ChainElement::Prufer(PruferElement { num: a as u128, level }));
                }
            }
        }
        let autos = elements
            .iter()
            .map(|e| chain.translation(e).expect("corpus levels stay within depth"))
            .collect();
        ChainFamily { chain, elements, autos }
    }
}

/// The full corpus. Tree hosts are shared per family so exploration caches
/// warm up across all members.
pub struct Corpus {
    pub amalgams: Vec<AmalgamFamily>,
    pub line: LineFamily,
    pub stars: Vec<StarFamily>,
    pub chains: Vec<ChainFamily>,
}

/// The amalgam of the two smallest cyclic groups over the trivial group.
pub fn z2z3_spec() -> Arc<AmalgamSpec> {
    let triv = Arc::new(FiniteGroup::cyclic("triv", 1));
    let z2 = Arc::new(FiniteGroup::cyclic("z2", 2));
    let z3 = Arc::new(FiniteGroup::cyclic("z3", 3));
    let pa = GroupHom::new(triv.clone(), z2, vec![0]).unwrap();
    let pb = GroupHom::new(triv, z3, vec![0]).unwrap();
    AmalgamSpec::new("z2z3", pa, pb).expect("valid amalgam")
}

/// Cyclic groups of order 4 and 6 amalgamated over a common order-2 subgroup.
pub fn z4z6_spec() -> Arc<AmalgamSpec> {
    let z2 = Arc::new(FiniteGroup::cyclic("z2", 2));
    let z4 = Arc::new(FiniteGroup::cyclic("z4", 4));
    let z6 = Arc::new(FiniteGroup::cyclic("z6", 6));
    let pa = GroupHom::new(z2.clone(), z4, vec![0, 2]).unwrap();
    let pb = GroupHom::new(z2, z6, vec![0, 3]).unwrap();
    AmalgamSpec::new("z4z6", pa, pb).expect("valid amalgam")
}

impl Corpus {
    /// Words of syllable length <= 5 in both test amalgams, line words of
    /// length <= 8, the star actions of the groups of order <= 6 (and S3),
    /// and low-level chain translations for p = 2 and 3.
    pub fn standard() -> Self {
        let amalgams =
            vec![AmalgamFamily::new(z2z3_spec(), 5), AmalgamFamily::new(z4z6_spec(), 5)];
        let line = LineFamily::new(8);
        let star_groups: Vec<Arc<FiniteGroup>> = vec![
            Arc::new(FiniteGroup::cyclic("z2", 2)),
            Arc::new(FiniteGroup::cyclic("z3", 3)),
            Arc::new(FiniteGroup::cyclic("z4", 4)),
            Arc::new(FiniteGroup::cyclic("z5", 5)),
            Arc::new(FiniteGroup::cyclic("z6", 6)),
            Arc::new(FiniteGroup::dihedral("klein", 2)),
            Arc::new(FiniteGroup::symmetric("s3", 3)),
        ];
        let stars = star_groups.iter().map(StarFamily::new).collect();
        let chains = vec![ChainFamily::new(2, 4, 20), ChainFamily::new(3, 3, 20)];
        Corpus { amalgams, line, stars, chains }
    }

    pub fn automorphism_count(&self) -> usize {
        self.amalgams.iter().map(|f| f.autos.len()).sum::<usize>()
            + self.line.autos.len()
            + self.stars.iter().map(|f| f.autos.len()).sum::<usize>()
            + self.chains.iter().map(|f| f.autos.len()).sum::<usize>()
    }

    /// Every automorphism with a (family, label) tag, in deterministic order.
    pub fn all_autos(&self) -> Vec<(String, &TreeAutomorphism)> {
        let mut out = Vec::new();
        for fam in &self.amalgams {
            for (w, auto) in fam.words.iter().zip(&fam.autos) {
                out.push((format!("{}:{}", fam.spec.name(), fam.spec.render_word(w)), auto));
            }
        }
        for (w, auto) in self.line.words.iter().zip(&self.line.autos) {
            let label = if w.is_empty() { "1" } else { w.as_str() };
            out.push((format!("line:{label}"), auto));
        }
        for fam in &self.stars {
            let gname = fam.action.group().name().to_string();
            for (e, auto) in fam.action.group().elements().zip(&fam.autos) {
                out.push((format!("star[{gname}]:{}", fam.action.group().label(e)), auto));
            }
        }
        for fam in &self.chains {
            for (e, auto) in fam.elements.iter().zip(&fam.autos) {
                out.push((
                    format!("{}:{}", fam.chain.spec().name(), fam.chain.spec().render_element(e)),
                    auto,
                ));
            }
        }
        out
    }
}
