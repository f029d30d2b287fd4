//! Finite groups as validated multiplication tables, with subgroups, left-coset
//! transversals and homomorphism checking. Element labels are opaque strings;
//! everything downstream (normal forms, coset keys) is determined by the label
//! order fixed here.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("table is not square: {rows} rows over {n} elements")]
    NotSquare { rows: usize, n: usize },
    #[error("unknown element label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("no identity element")]
    NoIdentity,
    #[error("element {0:?} has no inverse")]
    NoInverse(String),
    #[error("associativity fails on ({a:?}, {b:?}, {c:?})")]
    NotAssociative { a: String, b: String, c: String },
    #[error("{0:?} is not a subgroup: {1}")]
    NotASubgroup(String, String),
    #[error("transversal does not pick one representative per coset: {0}")]
    BadTransversal(String),
}

/// Why a map fails to be a monomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomViolation {
    /// phi(x*y) != phi(x)*phi(y) for this pair of domain labels.
    Multiplicativity(String, String),
    /// Two distinct domain labels with the same image.
    Collision(String, String),
}

impl fmt::Display for HomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomViolation::Multiplicativity(x, y) => {
                write!(f, "multiplicativity fails on ({x:?}, {y:?})")
            }
            HomViolation::Collision(x, y) => write!(f, "images collide on ({x:?}, {y:?})"),
        }
    }
}

/// A finite group given by its multiplication table. Elements are addressed by
/// index into `labels`; the table stores `table[a][b] = a*b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a multiplication table and returns the group, or the first
    /// violated axiom with witnesses.
    pub fn validate(
        name: impl Into<String>,
        labels: Vec<String>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self, GroupError> {
        let n = labels.len();
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(GroupError::DuplicateLabel(l.clone()));
            }
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(GroupError::NotSquare { rows: table.len(), n });
        }
        for row in &table {
            for &v in row {
                if v >= n {
                    return Err(GroupError::UnknownLabel(format!("#{v}")));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            match (0..n).find(|&y| table[x][y] == identity && table[y][x] == identity) {
                Some(y) => inverse[x] = y,
                None => return Err(GroupError::NoInverse(labels[x].clone())),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative {
                            a: labels[a].clone(),
                            b: labels[b].clone(),
                            c: labels[c].clone(),
                        });
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.into(), labels, index, table, identity, inverse })
    }

    /// Cyclic group of order `n` with labels `"0".."n-1"`.
    pub fn cyclic(name: impl Into<String>, n: usize) -> Self {
        assert!(n >= 1);
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::validate(name, labels, table).expect("cyclic table is a group")
    }

    /// Symmetric group on `n` points; elements labelled by one-line notation,
    /// e.g. `"120"` for the 3-cycle sending 0 to 1.
    pub fn symmetric(name: impl Into<String>, n: usize) -> Self {
        assert!((1..=5).contains(&n), "symmetric groups supported up to S5");
        let mut perms: Vec<Vec<usize>> = vec![vec![]];
        for k in 0..n {
            let mut next = Vec::new();
            for p in &perms {
                for pos in 0..=k {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    next.push(q);
                }
            }
            perms = next;
        }
        perms.sort();
        let labels: Vec<String> = perms
            .iter()
            .map(|p| p.iter().map(|d| d.to_string()).collect::<String>())
            .collect();
        let pos: BTreeMap<&Vec<usize>, usize> = perms.iter().zip(0..).collect();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        // (p*q)(i) = p(q(i)), matching left-to-right application of p after q
                        let comp: Vec<usize> = (0..n).map(|i| p[q[i]]).collect();
                        pos[&comp]
                    })
                    .collect()
            })
            .collect();
        Self::validate(name, labels, table).expect("symmetric table is a group")
    }

    /// Dihedral group of order `2n`: rotations `r<k>` and reflections `s<k>`.
    pub fn dihedral(name: impl Into<String>, n: usize) -> Self {
        assert!(n >= 1);
        let mut labels: Vec<String> = (0..n).map(|k| format!("r{k}")).collect();
        labels.extend((0..n).map(|k| format!("s{k}")));
        // element 2n encoding: (flip, k) with flip*n + k; s<k> = s * r^k
        let mul = |x: usize, y: usize| -> usize {
            let (fx, kx) = (x / n, x % n);
            let (fy, ky) = (y / n, y % n);
            // r^k s = s r^{-k}; compose (f_x, k_x)*(f_y, k_y)
            let f = (fx + fy) % 2;
            let k = if fy == 0 { (kx + ky) % n } else { (n + ky + n - kx % n) % n };
            f * n + k
        };
        let table = (0..2 * n).map(|a| (0..2 * n).map(|b| mul(a, b)).collect()).collect();
        Self::validate(name, labels, table).expect("dihedral table is a group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element(&self, label: &str) -> Result<usize, GroupError> {
        self.index.get(label).copied().ok_or_else(|| GroupError::UnknownLabel(label.into()))
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order()
    }

    /// Smallest subset containing `gens`, closed under product and inverse.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut stack: Vec<usize> = vec![self.identity];
        for &g in gens {
            if !seen[g] {
                seen[g] = true;
                stack.push(g);
            }
        }
        let mut members = stack.clone();
        while let Some(x) = stack.pop() {
            for &g in &members.clone() {
                for y in [self.mul(x, g), self.mul(g, x), self.inv(x)] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                        members.push(y);
                    }
                }
            }
        }
        let mut out: Vec<usize> = (0..self.order()).filter(|&i| seen[i]).collect();
        out.sort_unstable();
        out
    }

    /// Checks that `subset` is closed under product and inverse and contains
    /// the identity.
    pub fn check_subgroup(&self, subset: &[usize]) -> Result<(), GroupError> {
        let name = |s: &[usize]| {
            let ls: Vec<&str> = s.iter().map(|&i| self.label(i)).collect();
            format!("{{{}}}", ls.join(", "))
        };
        let member = {
            let mut m = vec![false; self.order()];
            for &x in subset {
                m[x] = true;
            }
            m
        };
        if !member[self.identity] {
            return Err(GroupError::NotASubgroup(name(subset), "missing identity".into()));
        }
        for &x in subset {
            if !member[self.inv(x)] {
                return Err(GroupError::NotASubgroup(
                    name(subset),
                    format!("inverse of {:?} missing", self.label(x)),
                ));
            }
            for &y in subset {
                if !member[self.mul(x, y)] {
                    return Err(GroupError::NotASubgroup(
                        name(subset),
                        format!("product {:?}*{:?} escapes", self.label(x), self.label(y)),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Left cosets of a subgroup, with the default representative rule:
    /// the identity represents the subgroup itself, every other coset is
    /// represented by its lexicographically least element label.
    pub fn left_cosets(self: &Arc<Self>, subgroup: &[usize]) -> Result<Transversal, GroupError> {
        self.check_subgroup(subgroup)?;
        let mut coset_of = vec![usize::MAX; self.order()];
        let mut reps: Vec<usize> = Vec::new();
        // scan elements in label order so "least label" falls out of the scan
        let mut by_label: Vec<usize> = (0..self.order()).collect();
        by_label.sort_by(|&a, &b| self.label(a).cmp(self.label(b)));
        for &g in &by_label {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let rep = if subgroup.contains(&g) { self.identity } else { g };
            let id = reps.len();
            reps.push(rep);
            for &h in subgroup {
                coset_of[self.mul(g, h)] = id;
            }
        }
        // order cosets deterministically: identity coset first, then by rep label
        let mut order: Vec<usize> = (0..reps.len()).collect();
        order.sort_by_key(|&i| (reps[i] != self.identity, self.label(reps[i]).to_string()));
        let remap: BTreeMap<usize, usize> = order.iter().copied().zip(0..).collect();
        let reps: Vec<usize> = order.iter().map(|&i| reps[i]).collect();
        for c in coset_of.iter_mut() {
            *c = remap[c];
        }
        Ok(Transversal { subgroup: subgroup.to_vec(), reps, coset_of })
    }

    /// Like `left_cosets` but with caller-chosen representatives (one per
    /// coset, identity for the subgroup itself).
    pub fn left_cosets_with_reps(
        self: &Arc<Self>,
        subgroup: &[usize],
        chosen: &[usize],
    ) -> Result<Transversal, GroupError> {
        let default = self.left_cosets(subgroup)?;
        if chosen.len() != default.reps.len() {
            return Err(GroupError::BadTransversal(format!(
                "expected {} representatives, got {}",
                default.reps.len(),
                chosen.len()
            )));
        }
        let mut seen = vec![false; default.reps.len()];
        for &r in chosen {
            let c = default.coset_of[r];
            if seen[c] {
                return Err(GroupError::BadTransversal(format!(
                    "two representatives for the coset of {:?}",
                    self.label(default.reps[c])
                )));
            }
            seen[c] = true;
        }
        if chosen.first() != Some(&self.identity) || default.coset_of[chosen[0]] != 0 {
            return Err(GroupError::BadTransversal(
                "first representative must be the identity".into(),
            ));
        }
        // re-index cosets by the chosen reps, keeping the identity coset first
        let mut reps = chosen.to_vec();
        let mut order: Vec<usize> = (1..reps.len()).collect();
        order.sort_by_key(|&i| self.label(reps[i]).to_string());
        let mut remap = vec![0usize; reps.len()];
        let mut new_reps = vec![reps[0]];
        for (new_idx, &i) in order.iter().enumerate() {
            remap[default.coset_of[reps[i]]] = new_idx + 1;
            new_reps.push(reps[i]);
        }
        reps = new_reps;
        let coset_of = default.coset_of.iter().map(|&c| remap[c]).collect();
        Ok(Transversal { subgroup: subgroup.to_vec(), reps, coset_of })
    }
}

/// A left-coset transversal of a subgroup: one representative per coset gH,
/// the identity representing H itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transversal {
    subgroup: Vec<usize>,
    reps: Vec<usize>,
    coset_of: Vec<usize>,
}

impl Transversal {
    pub fn subgroup(&self) -> &[usize] {
        &self.subgroup
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn coset_count(&self) -> usize {
        self.reps.len()
    }

    /// Index of the coset containing `g`. Coset 0 is the subgroup itself.
    pub fn coset_index(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    /// Representative of the coset containing `g`.
    pub fn rep(&self, g: usize) -> usize {
        self.reps[self.coset_of[g]]
    }
}

/// A map between finite groups, given element-by-element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    domain: Arc<FiniteGroup>,
    codomain: Arc<FiniteGroup>,
    map: Vec<usize>,
}

impl GroupHom {
    pub fn new(
        domain: Arc<FiniteGroup>,
        codomain: Arc<FiniteGroup>,
        map: Vec<usize>,
    ) -> Result<Self, GroupError> {
        if map.len() != domain.order() {
            return Err(GroupError::NotSquare { rows: map.len(), n: domain.order() });
        }
        for &v in &map {
            if v >= codomain.order() {
                return Err(GroupError::UnknownLabel(format!("#{v}")));
            }
        }
        Ok(GroupHom { domain, codomain, map })
    }

    pub fn identity(group: Arc<FiniteGroup>) -> Self {
        let map = (0..group.order()).collect();
        GroupHom { domain: group.clone(), codomain: group, map }
    }

    pub fn domain(&self) -> &Arc<FiniteGroup> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteGroup> {
        &self.codomain
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// Image of the whole domain, sorted by element index.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.map.clone();
        img.sort_unstable();
        img.dedup();
        img
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.codomain.order()
    }

    /// `Ok(())` iff the map is a homomorphism and injective; otherwise the
    /// first witness in scan order.
    pub fn check_monomorphism(&self) -> Result<(), HomViolation> {
        let d = &self.domain;
        let c = &self.codomain;
        for x in 0..d.order() {
            for y in 0..d.order() {
                if self.map[d.mul(x, y)] != c.mul(self.map[x], self.map[y]) {
                    return Err(HomViolation::Multiplicativity(
                        d.label(x).into(),
                        d.label(y).into(),
                    ));
                }
            }
        }
        for x in 0..d.order() {
            for y in x + 1..d.order() {
                if self.map[x] == self.map[y] {
                    return Err(HomViolation::Collision(d.label(x).into(), d.label(y).into()));
                }
            }
        }
        Ok(())
    }

    /// Preimage of a codomain element, if any (useful once injectivity is known).
    pub fn preimage(&self, y: usize) -> Option<usize> {
        self.map.iter().position(|&v| v == y)
    }

    /// Composition `other . self` (apply self first).
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        debug_assert_eq!(self.codomain.order(), other.domain.order());
        GroupHom {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            map: self.map.iter().map(|&x| other.map[x]).collect(),
        }
    }

    /// Inverse of a bijective hom.
    pub fn inverse_bijection(&self) -> Option<GroupHom> {
        if self.map.len() != self.codomain.order() {
            return None;
        }
        let mut inv = vec![usize::MAX; self.codomain.order()];
        for (x, &y) in self.map.iter().enumerate() {
            if inv[y] != usize::MAX {
                return None;
            }
            inv[y] = x;
        }
        Some(GroupHom { domain: self.codomain.clone(), codomain: self.domain.clone(), map: inv })
    }
}
