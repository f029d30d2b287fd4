//! Line-oriented text format declaring groups, homomorphisms, amalgams,
//! trees, chains, trees of groups and finite actions. Parsing is total with
//! line-numbered diagnostics; the printer re-emits canonical text that parses
//! back to the same declarations.
//!
//! ```text
//! # comments and blank lines are ignored
//! group z4 = cyclic 4            # builtins: cyclic, sym, dihedral
//! group k order 2                # explicit table
//! elements e a
//! e * e = e
//! e * a = a
//! a * e = a
//! a * a = e
//!
//! hom i24: z2 -> z4
//! 0 |-> 0
//! 1 |-> 2
//!
//! amalgam z4z6: z4 *_z2 z6       # followed by the two embedding hom blocks
//! hom pa: z2 -> z4
//! ...
//! hom pb: z2 -> z6
//! ...
//!
//! tree path3                     # vertex/edge lines, then end
//! vertex x0
//! edge e01 x0 x1 e10
//! ...
//! end
//!
//! chain pru2 prufer 2
//! chain c in z8                  # explicit subgroup chain, then end
//! level 0
//! level 0 4
//! end
//!
//! tog chain3 on path3            # vgroup/egroup/alpha lines, then end
//! vgroup x0 = z2
//! egroup e01 = z2
//! alpha e01 = id2
//! end
//!
//! action s = star z3             # the star action of a group
//! action r: z2 on path3          # explicit maps, one per element, then end
//! map 0: x0->x0 x1->x1 x2->x2
//! map 1: x0->x2 x1->x1 x2->x0
//! end
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::amalgam::AmalgamSpec;
use crate::constructions::{star_action, ChainSpec};
use crate::graph::FiniteGraph;
use crate::group::{FiniteGroup, GroupHom};
use crate::quotient::{FiniteAction, TreeOfGroups};
use crate::tree::FiniteTree;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

/// One parsed declaration, kept in order for printing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decl {
    GroupBuiltin { name: String, kind: String, n: usize },
    GroupTable { name: String, labels: Vec<String>, products: Vec<(String, String, String)> },
    Hom { name: String, domain: String, codomain: String, maps: Vec<(String, String)> },
    Amalgam { name: String, a: String, c: String, b: String, hom_a: Box<Decl>, hom_b: Box<Decl> },
    Tree { name: String, body: Vec<String> },
    ChainPrufer { name: String, p: u64 },
    ChainFinite { name: String, group: String, levels: Vec<Vec<String>> },
    Tog {
        name: String,
        tree: String,
        vgroups: Vec<(String, String)>,
        egroups: Vec<(String, String)>,
        alphas: Vec<(String, String)>,
    },
    ActionStar { name: String, group: String },
    ActionExplicit {
        name: String,
        group: String,
        tree: String,
        maps: Vec<(String, Vec<(String, String)>)>,
    },
}

/// All declarations of a spec text, with the built objects by name.
#[derive(Debug, Default)]
pub struct SpecFile {
    pub decls: Vec<Decl>,
    pub groups: BTreeMap<String, Arc<FiniteGroup>>,
    pub homs: BTreeMap<String, GroupHom>,
    pub amalgams: BTreeMap<String, Arc<AmalgamSpec>>,
    pub trees: BTreeMap<String, Arc<FiniteTree>>,
    pub chains: BTreeMap<String, Arc<ChainSpec>>,
    pub togs: BTreeMap<String, Arc<TreeOfGroups>>,
    pub actions: BTreeMap<String, Arc<FiniteAction>>,
}

struct Cursor<'a> {
    lines: Vec<(usize, &'a str)>,
    at: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, raw)| {
                let no_comment = match raw.find('#') {
                    Some(p) => &raw[..p],
                    None => raw,
                };
                (i + 1, no_comment.trim())
            })
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Cursor { lines, at: 0 }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.at).copied()
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let out = self.peek();
        if out.is_some() {
            self.at += 1;
        }
        out
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        self.next().ok_or_else(|| ParseError {
            line: self.lines.last().map(|(n, _)| *n + 1).unwrap_or(1),
            message: format!("unexpected end of input, expected {what}"),
        })
    }
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

impl SpecFile {
    pub fn new() -> Self {
        SpecFile::default()
    }

    /// The built-in prelude: standard small groups, the two test amalgams,
    /// quasicyclic chains, star actions and the orientation fixtures.
    pub fn builtin() -> Self {
        let mut spec = SpecFile::new();
        spec.extend(PRELUDE).expect("builtin prelude parses");
        spec
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut spec = SpecFile::new();
        spec.extend(text)?;
        Ok(spec)
    }

    /// Parses more declarations into this spec; names must be fresh.
    pub fn extend(&mut self, text: &str) -> Result<(), ParseError> {
        let mut cur = Cursor::new(text);
        while let Some((line, content)) = cur.peek() {
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields.first().copied() {
                Some("group") => self.parse_group(&mut cur)?,
                Some("hom") => {
                    let decl = self.parse_hom(&mut cur)?;
                    self.decls.push(decl);
                }
                Some("amalgam") => self.parse_amalgam(&mut cur)?,
                Some("tree") => self.parse_tree(&mut cur)?,
                Some("chain") => self.parse_chain(&mut cur)?,
                Some("tog") => self.parse_tog(&mut cur)?,
                Some("action") => self.parse_action(&mut cur)?,
                _ => return Err(err(line, format!("unrecognized declaration {content:?}"))),
            }
        }
        Ok(())
    }

    fn fresh(&self, line: usize, name: &str) -> Result<(), ParseError> {
        let taken = self.groups.contains_key(name)
            || self.homs.contains_key(name)
            || self.amalgams.contains_key(name)
            || self.trees.contains_key(name)
            || self.chains.contains_key(name)
            || self.togs.contains_key(name)
            || self.actions.contains_key(name);
        if taken {
            return Err(err(line, format!("name {name:?} already declared")));
        }
        Ok(())
    }

    fn group(&self, line: usize, name: &str) -> Result<Arc<FiniteGroup>, ParseError> {
        self.groups
            .get(name)
            .cloned()
            .ok_or_else(|| err(line, format!("group {name:?} not declared")))
    }

    fn parse_group(&mut self, cur: &mut Cursor) -> Result<(), ParseError> {
        let (line, content) = cur.next().unwrap();
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields.as_slice() {
            ["group", name, "=", kind, n] => {
                self.fresh(line, name)?;
                let n: usize = n.parse().map_err(|_| err(line, "order must be a number"))?;
                let group = match *kind {
                    "cyclic" => FiniteGroup::cyclic(*name, n),
                    "sym" => FiniteGroup::symmetric(*name, n),
                    "dihedral" => FiniteGroup::dihedral(*name, n),
                    _ => return Err(err(line, format!("unknown builtin {kind:?}"))),
                };
                self.groups.insert(name.to_string(), Arc::new(group));
                self.decls.push(Decl::GroupBuiltin {
                    name: name.to_string(),
                    kind: kind.to_string(),
                    n,
                });
                Ok(())
            }
            ["group", name, "order", n] => {
                self.fresh(line, name)?;
                let n: usize = n.parse().map_err(|_| err(line, "order must be a number"))?;
                let (eline, elems) = cur.expect("an elements line")?;
                let efields: Vec<&str> = elems.split_whitespace().collect();
                if efields.first() != Some(&"elements") || efields.len() != n + 1 {
                    return Err(err(eline, format!("expected `elements` with {n} labels")));
                }
                let labels: Vec<String> = efields[1..].iter().map(|s| s.to_string()).collect();
                let index: BTreeMap<&String, usize> = labels.iter().zip(0..).collect();
                let mut table = vec![vec![usize::MAX; n]; n];
                let mut products = Vec::with_capacity(n * n);
                for _ in 0..n * n {
                    let (pline, prod) = cur.expect("a product line `a * b = c`")?;
                    let p: Vec<&str> = prod.split_whitespace().collect();
                    match p.as_slice() {
                        [a, "*", b, "=", c] => {
                            let (ia, ib, ic) = (
                                index.get(&a.to_string()),
                                index.get(&b.to_string()),
                                index.get(&c.to_string()),
                            );
                            match (ia, ib, ic) {
                                (Some(&ia), Some(&ib), Some(&ic)) => {
                                    if table[ia][ib] != usize::MAX {
                                        return Err(err(
                                            pline,
                                            format!("product {a} * {b} given twice"),
                                        ));
                                    }
                                    table[ia][ib] = ic;
                                    products.push((a.to_string(), b.to_string(), c.to_string()));
                                }
                                _ => return Err(err(pline, "unknown element label")),
                            }
                        }
                        _ => return Err(err(pline, format!("malformed product line {prod:?}"))),
                    }
                }
                if let Some((i, j)) = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .find(|&(i, j)| table[i][j] == usize::MAX)
                {
                    return Err(err(
                        line,
                        format!("product {} * {} never given", labels[i], labels[j]),
                    ));
                }
                let group = FiniteGroup::validate(*name, labels.clone(), table)
                    .map_err(|e| err(line, e.to_string()))?;
                self.groups.insert(name.to_string(), Arc::new(group));
                self.decls.push(Decl::GroupTable { name: name.to_string(), labels, products });
                Ok(())
            }
            _ => Err(err(line, format!("malformed group declaration {content:?}"))),
        }
    }

    fn parse_hom(&mut self, cur: &mut Cursor) -> Result<Decl, ParseError> {
        let (line, content) = cur.next().unwrap();
        // hom <name>: <G> -> <H>
        let rest = content.strip_prefix("hom ").ok_or_else(|| err(line, "malformed hom"))?;
        let (name, sig) =
            rest.split_once(':').ok_or_else(|| err(line, "hom needs `name: dom -> cod`"))?;
        let name = name.trim();
        self.fresh(line, name)?;
        let (dom, cod) = sig
            .split_once("->")
            .ok_or_else(|| err(line, "hom signature needs `dom -> cod`"))?;
        let domain = self.group(line, dom.trim())?;
        let codomain = self.group(line, cod.trim())?;
        let mut map = vec![usize::MAX; domain.order()];
        let mut maps = Vec::with_capacity(domain.order());
        for _ in 0..domain.order() {
            let (mline, mcontent) = cur.expect("a mapping line `x |-> y`")?;
            let parts: Vec<&str> = mcontent.split_whitespace().collect();
            match parts.as_slice() {
                [x, "|->", y] => {
                    let ix = domain.element(x).map_err(|e| err(mline, e.to_string()))?;
                    let iy = codomain.element(y).map_err(|e| err(mline, e.to_string()))?;
                    if map[ix] != usize::MAX {
                        return Err(err(mline, format!("element {x} mapped twice")));
                    }
                    map[ix] = iy;
                    maps.push((x.to_string(), y.to_string()));
                }
                _ => return Err(err(mline, format!("malformed mapping line {mcontent:?}"))),
            }
        }
        let hom = GroupHom::new(domain, codomain, map).map_err(|e| err(line, e.to_string()))?;
        self.homs.insert(name.to_string(), hom);
        Ok(Decl::Hom {
            name: name.to_string(),
            domain: dom.trim().to_string(),
            codomain: cod.trim().to_string(),
            maps,
        })
    }

    fn parse_amalgam(&mut self, cur: &mut Cursor) -> Result<(), ParseError> {
        let (line, content) = cur.next().unwrap();
        // amalgam <name>: <A> *_<C> <B>
        let rest =
            content.strip_prefix("amalgam ").ok_or_else(|| err(line, "malformed amalgam"))?;
        let (name, sig) =
            rest.split_once(':').ok_or_else(|| err(line, "amalgam needs `name: A *_C B`"))?;
        let name = name.trim();
        self.fresh(line, name)?;
        let parts: Vec<&str> = sig.split_whitespace().collect();
        let (a, c, b) = match parts.as_slice() {
            [a, star, b] if star.starts_with("*_") => (*a, &star[2..], *b),
            _ => return Err(err(line, "amalgam signature must be `A *_C B`")),
        };
        let ga = self.group(line, a)?;
        let gc = self.group(line, c)?;
        let gb = self.group(line, b)?;
        let hom_a = self.parse_hom(cur)?;
        let hom_b = self.parse_hom(cur)?;
        let (na, nb) = match (&hom_a, &hom_b) {
            (Decl::Hom { name: na, .. }, Decl::Hom { name: nb, .. }) => (na.clone(), nb.clone()),
            _ => unreachable!(),
        };
        let pa = self.homs[&na].clone();
        let pb = self.homs[&nb].clone();
        for (hom, which, expect_cod) in [(&pa, "first", &ga), (&pb, "second", &gb)] {
            if hom.domain() != &gc {
                return Err(err(line, format!("{which} hom must start at {}", gc.name())));
            }
            if hom.codomain() != expect_cod {
                return Err(err(line, format!("{which} hom must land in {}", expect_cod.name())));
            }
        }
        let spec = AmalgamSpec::new(name, pa, pb).map_err(|e| err(line, e.to_string()))?;
        self.amalgams.insert(name.to_string(), spec);
        self.decls.push(Decl::Amalgam {
            name: name.to_string(),
            a: a.to_string(),
            c: c.to_string(),
            b: b.to_string(),
            hom_a: Box::new(hom_a),
            hom_b: Box::new(hom_b),
        });
        Ok(())
    }

    fn parse_tree(&mut self, cur: &mut Cursor) -> Result<(), ParseError> {
        let (line, content) = cur.next().unwrap();
        let fields: Vec<&str> = content.split_whitespace().collect();
        let name = match fields.as_slice() {
            ["tree", name] => *name,
            _ => return Err(err(line, "tree declaration is `tree <name>`")),
        };
        self.fresh(line, name)?;
        let mut body = Vec::new();
        loop {
            let (bline, bcontent) = cur.expect("vertex/edge lines then `end`")?;
            if bcontent == "end" {
                break;
            }
            if !(bcontent.starts_with("vertex ") || bcontent.starts_with("edge ")) {
                return Err(err(bline, format!("expected vertex/edge/end, got {bcontent:?}")));
            }
            body.push(bcontent.to_string());
        }
        let graph = FiniteGraph::from_lines(&body.join("\n"))
            .map_err(|e| err(line, e.to_string()))?;
        let tree = FiniteTree::new(graph).map_err(|e| err(line, e.to_string()))?;
        self.trees.insert(name.to_string(), Arc::new(tree));
        self.decls.push(Decl::Tree { name: name.to_string(), body });
        Ok(())
    }

    fn parse_chain(&mut self, cur: &mut Cursor) -> Result<(), ParseError> {
        let (line, content) = cur.next().unwrap();
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields.as_slice() {
            ["chain", name, "prufer", p] => {
                self.fresh(line, name)?;
                let p: u64 = p.parse().map_err(|_| err(line, "prime must be a number"))?;
                if p < 2 {
                    return Err(err(line, "prufer parameter must be at least 2"));
                }
                self.chains.insert(name.to_string(), Arc::new(ChainSpec::prufer(*name, p)));
                self.decls.push(Decl::ChainPrufer { name: name.to_string(), p });
                Ok(())
            }
            ["chain", name, "in", group] => {
                self.fresh(line, name)?;
                let g = self.group(line, group)?;
                let mut levels = Vec::new();
                let mut level_labels = Vec::new();
                loop {
                    let (lline, lcontent) = cur.expect("level lines then `end`")?;
                    if lcontent == "end" {
                        break;
                    }
                    let parts: Vec<&str> = lcontent.split_whitespace().collect();
                    if parts.first() != Some(&"level") {
                        return Err(err(lline, format!("expected level/end, got {lcontent:?}")));
                    }
                    let mut members = Vec::new();
                    for label in &parts[1..] {
                        members.push(g.element(label).map_err(|e| err(lline, e.to_string()))?);
                    }
                    members.sort_unstable();
                    levels.push(members);
                    level_labels.push(parts[1..].iter().map(|s| s.to_string()).collect());
                }
                let chain = ChainSpec::finite(*name, g, levels)
                    .map_err(|e| err(line, e.to_string()))?;
                self.chains.insert(name.to_string(), Arc::new(chain));
                self.decls.push(Decl::ChainFinite {
                    name: name.to_string(),
                    group: group.to_string(),
                    levels: level_labels,
                });
                Ok(())
            }
            _ => Err(err(line, format!("malformed chain declaration {content:?}"))),
        }
    }

    fn parse_tog(&mut self, cur: &mut Cursor) -> Result<(), ParseError> {
        let (line, content) = cur.next().unwrap();
        let fields: Vec<&str> = content.split_whitespace().collect();
        let (name, tree_name) = match fields.as_slice() {
            ["tog", name, "on", tree] => (*name, *tree),
            _ => return Err(err(line, "tog declaration is `tog <name> on <tree>`")),
        };
        self.fresh(line, name)?;
        let tree = self
            .trees
            .get(tree_name)
            .cloned()
            .ok_or_else(|| err(line, format!("tree {tree_name:?} not declared")))?;
        let mut vgroups = Vec::new();
        let mut egroups = Vec::new();
        let mut alphas = Vec::new();
        loop {
            let (bline, bcontent) = cur.expect("vgroup/egroup/alpha lines then `end`")?;
            if bcontent == "end" {
                break;
            }
            let parts: Vec<&str> = bcontent.split_whitespace().collect();
            match parts.as_slice() {
                ["vgroup", v, "=", g] => vgroups.push((v.to_string(), g.to_string())),
                ["egroup", e, "=", g] => egroups.push((e.to_string(), g.to_string())),
                ["alpha", e, "=", h] => alphas.push((e.to_string(), h.to_string())),
                _ => return Err(err(bline, format!("unrecognized tog line {bcontent:?}"))),
            }
        }
        let mut vertex_groups = BTreeMap::new();
        for (v, gname) in &vgroups {
            vertex_groups.insert(v.clone(), self.group(line, gname)?);
        }
        let mut egroup_map: BTreeMap<String, Arc<FiniteGroup>> = BTreeMap::new();
        for (e, gname) in &egroups {
            let g = self.group(line, gname)?;
            let graph = tree.graph();
            let ix = graph
                .edge_lookup(e)
                .ok_or_else(|| err(line, format!("edge {e:?} not in tree {tree_name:?}")))?;
            let rev = graph.edges()[graph.edges()[ix].inverse].id.clone();
            egroup_map.insert(e.clone(), g.clone());
            egroup_map.insert(rev, g);
        }
        let mut alpha_map = BTreeMap::new();
        for (e, hname) in &alphas {
            let hom = self
                .homs
                .get(hname)
                .cloned()
                .ok_or_else(|| err(line, format!("hom {hname:?} not declared")))?;
            if let Some(expected) = egroup_map.get(e) {
                if hom.domain() != expected {
                    return Err(err(
                        line,
                        format!("alpha for {e:?} must start at the edge group {}", expected.name()),
                    ));
                }
            }
            alpha_map.insert(e.clone(), hom);
        }
        let tog = TreeOfGroups::new(name, tree, vertex_groups, alpha_map)
            .map_err(|e| err(line, e.to_string()))?;
        self.togs.insert(name.to_string(), Arc::new(tog));
        self.decls.push(Decl::Tog {
            name: name.to_string(),
            tree: tree_name.to_string(),
            vgroups,
            egroups,
            alphas,
        });
        Ok(())
    }

    fn parse_action(&mut self, cur: &mut Cursor) -> Result<(), ParseError> {
        let (line, content) = cur.next().unwrap();
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields.as_slice() {
            ["action", name, "=", "star", group] => {
                self.fresh(line, name)?;
                let g = self.group(line, group)?;
                let action = star_action(&g).map_err(|e| err(line, e.to_string()))?;
                self.actions.insert(name.to_string(), Arc::new(action));
                self.decls.push(Decl::ActionStar {
                    name: name.to_string(),
                    group: group.to_string(),
                });
                Ok(())
            }
            _ => {
                // action <name>: <group> on <tree>
                let rest = content
                    .strip_prefix("action ")
                    .ok_or_else(|| err(line, "malformed action"))?;
                let (name, sig) = rest
                    .split_once(':')
                    .ok_or_else(|| err(line, "action needs `name: group on tree`"))?;
                let name = name.trim();
                self.fresh(line, name)?;
                let sig_fields: Vec<&str> = sig.split_whitespace().collect();
                let (gname, tname) = match sig_fields.as_slice() {
                    [g, "on", t] => (*g, *t),
                    _ => return Err(err(line, "action signature must be `group on tree`")),
                };
                let group = self.group(line, gname)?;
                let tree = self
                    .trees
                    .get(tname)
                    .cloned()
                    .ok_or_else(|| err(line, format!("tree {tname:?} not declared")))?;
                let mut tables: BTreeMap<usize, BTreeMap<String, String>> = BTreeMap::new();
                let mut decl_maps = Vec::new();
                loop {
                    let (mline, mcontent) = cur.expect("map lines then `end`")?;
                    if mcontent == "end" {
                        break;
                    }
                    let rest = mcontent
                        .strip_prefix("map ")
                        .ok_or_else(|| err(mline, format!("expected map/end, got {mcontent:?}")))?;
                    let (elt, pairs) = rest
                        .split_once(':')
                        .ok_or_else(|| err(mline, "map line needs `map <g>: v->w ...`"))?;
                    let e = group
                        .element(elt.trim())
                        .map_err(|e| err(mline, e.to_string()))?;
                    let mut table = BTreeMap::new();
                    let mut decl_pairs = Vec::new();
                    for pair in pairs.split_whitespace() {
                        let (v, w) = pair
                            .split_once("->")
                            .ok_or_else(|| err(mline, format!("malformed pair {pair:?}")))?;
                        table.insert(v.to_string(), w.to_string());
                        decl_pairs.push((v.to_string(), w.to_string()));
                    }
                    if tables.insert(e, table).is_some() {
                        return Err(err(mline, format!("element {elt} mapped twice")));
                    }
                    decl_maps.push((elt.trim().to_string(), decl_pairs));
                }
                for e in group.elements() {
                    if !tables.contains_key(&e) {
                        return Err(err(
                            line,
                            format!("no map line for element {}", group.label(e)),
                        ));
                    }
                }
                let action = FiniteAction::new(group, tree, |e, v| {
                    tables[&e].get(v).cloned().unwrap_or_else(|| format!("<unmapped {v}>"))
                })
                .map_err(|e| err(line, e.to_string()))?;
                self.actions.insert(name.to_string(), Arc::new(action));
                self.decls.push(Decl::ActionExplicit {
                    name: name.to_string(),
                    group: gname.to_string(),
                    tree: tname.to_string(),
                    maps: decl_maps,
                });
                Ok(())
            }
        }
    }

    /// Canonical text that parses back to the same declarations.
    pub fn print(&self) -> String {
        let mut out = String::new();
        for decl in &self.decls {
            print_decl(&mut out, decl);
        }
        out
    }
}

fn print_decl(out: &mut String, decl: &Decl) {
    match decl {
        Decl::GroupBuiltin { name, kind, n } => {
            let _ = writeln!(out, "group {name} = {kind} {n}");
        }
        Decl::GroupTable { name, labels, products } => {
            let _ = writeln!(out, "group {name} order {}", labels.len());
            let _ = writeln!(out, "elements {}", labels.join(" "));
            for (a, b, c) in products {
                let _ = writeln!(out, "{a} * {b} = {c}");
            }
        }
        Decl::Hom { name, domain, codomain, maps } => {
            let _ = writeln!(out, "hom {name}: {domain} -> {codomain}");
            for (x, y) in maps {
                let _ = writeln!(out, "{x} |-> {y}");
            }
        }
        Decl::Amalgam { name, a, c, b, hom_a, hom_b } => {
            let _ = writeln!(out, "amalgam {name}: {a} *_{c} {b}");
            print_decl(out, hom_a);
            print_decl(out, hom_b);
        }
        Decl::Tree { name, body } => {
            let _ = writeln!(out, "tree {name}");
            for line in body {
                let _ = writeln!(out, "{line}");
            }
            let _ = writeln!(out, "end");
        }
        Decl::ChainPrufer { name, p } => {
            let _ = writeln!(out, "chain {name} prufer {p}");
        }
        Decl::ChainFinite { name, group, levels } => {
            let _ = writeln!(out, "chain {name} in {group}");
            for level in levels {
                let _ = writeln!(out, "level {}", level.join(" "));
            }
            let _ = writeln!(out, "end");
        }
        Decl::Tog { name, tree, vgroups, egroups, alphas } => {
            let _ = writeln!(out, "tog {name} on {tree}");
            for (v, g) in vgroups {
                let _ = writeln!(out, "vgroup {v} = {g}");
            }
            for (e, g) in egroups {
                let _ = writeln!(out, "egroup {e} = {g}");
            }
            for (e, h) in alphas {
                let _ = writeln!(out, "alpha {e} = {h}");
            }
            let _ = writeln!(out, "end");
        }
        Decl::ActionStar { name, group } => {
            let _ = writeln!(out, "action {name} = star {group}");
        }
        Decl::ActionExplicit { name, group, tree, maps } => {
            let _ = writeln!(out, "action {name}: {group} on {tree}");
            for (elt, pairs) in maps {
                let rendered: Vec<String> =
                    pairs.iter().map(|(v, w)| format!("{v}->{w}")).collect();
                let _ = writeln!(out, "map {elt}: {}", rendered.join(" "));
            }
            let _ = writeln!(out, "end");
        }
    }
}

/// Declarations available without any user file: the standard small groups,
/// both test amalgams, the quasicyclic chains, star actions, a reflection
/// action, and the orientation fixtures.
pub const PRELUDE: &str = r#"
group triv = cyclic 1
group z2 = cyclic 2
group z3 = cyclic 3
group z4 = cyclic 4
group z5 = cyclic 5
group z6 = cyclic 6
group z8 = cyclic 8
group s3 = sym 3
group klein = dihedral 2

amalgam z2z3: z2 *_triv z3
hom t2: triv -> z2
0 |-> 0
hom t3: triv -> z3
0 |-> 0

amalgam z4z6: z4 *_z2 z6
hom pa46: z2 -> z4
0 |-> 0
1 |-> 2
hom pb46: z2 -> z6
0 |-> 0
1 |-> 3

chain prufer2 prufer 2
chain prufer3 prufer 3

action star-z2 = star z2
action star-z3 = star z3
action star-z4 = star z4
action star-s3 = star s3

tree path3
vertex x0
vertex x1
vertex x2
edge e01 x0 x1 e10
edge e10 x1 x0 e01
edge e12 x1 x2 e21
edge e21 x2 x1 e12
end

tree path5
vertex v0
vertex v1
vertex v2
vertex v3
vertex v4
edge f01 v0 v1 f10
edge f10 v1 v0 f01
edge f12 v1 v2 f21
edge f21 v2 v1 f12
edge f23 v2 v3 f32
edge f32 v3 v2 f23
edge f34 v3 v4 f43
edge f43 v4 v3 f34
end

action reflect-path5: z2 on path5
map 0: v0->v0 v1->v1 v2->v2 v3->v3 v4->v4
map 1: v0->v4 v1->v3 v2->v2 v3->v1 v4->v0
end

hom id2: z2 -> z2
0 |-> 0
1 |-> 1
hom id4: z4 -> z4
0 |-> 0
1 |-> 1
2 |-> 2
3 |-> 3
hom i24: z2 -> z4
0 |-> 0
1 |-> 2
hom i48: z4 -> z8
0 |-> 0
1 |-> 2
2 |-> 4
3 |-> 6

tog chain3 on path3
vgroup x0 = z2
vgroup x1 = z4
vgroup x2 = z8
egroup e01 = z2
egroup e12 = z4
alpha e01 = id2
alpha e10 = i24
alpha e12 = id4
alpha e21 = i48
end

tree edge1
vertex y0
vertex y1
edge ey y0 y1 eyR
edge eyR y1 y0 ey
end

tog z2z3split on edge1
vgroup y0 = z2
vgroup y1 = z3
egroup ey = triv
alpha ey = t2
alpha eyR = t3
end
"#;
