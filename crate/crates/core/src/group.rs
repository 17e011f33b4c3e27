//! Finite groups as validated Cayley tables.
//!
//! Elements are indices `0..order` with the identity pinned at index 0.
//! Construction checks the full group axioms and reports the first failing
//! witness, so a corrupted table never leaks into later stages.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("table is not square: row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("table is empty; a group needs an identity element")]
    Empty,
    #[error("not closed: entry ({row},{col}) = {value} is outside 0..{order}")]
    NotClosed {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("index 0 is not an identity: product with {other} moves it")]
    NoIdentityAtZero { other: usize },
    #[error("not associative at ({a},{b},{c}): ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("no inverse: {line} {element} of the table is not a permutation")]
    NoInverse { element: usize, line: &'static str },
    #[error("labels: expected {expected} names, found {found}")]
    BadLabels { expected: usize, found: usize },
}

/// A finite group presented by its full multiplication table.
///
/// Invariant (checked at construction): index 0 is the identity, every row
/// and column is a permutation, and the operation is associative.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    abelian: bool,
    labels: Option<Vec<String>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}
impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Validates a Cayley table and builds the group.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let order = table.len();
        if order == 0 {
            return Err(GroupError::Empty);
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != order {
                return Err(GroupError::NotSquare {
                    row,
                    found: r.len(),
                    expected: order,
                });
            }
            for (col, &value) in r.iter().enumerate() {
                if value >= order {
                    return Err(GroupError::NotClosed {
                        row,
                        col,
                        value,
                        order,
                    });
                }
            }
        }
        for j in 0..order {
            if table[0][j] != j || table[j][0] != j {
                return Err(GroupError::NoIdentityAtZero { other: j });
            }
        }
        // Latin-square check: a repeated entry in a line rules out inverses.
        let mut seen = vec![false; order];
        for i in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for j in 0..order {
                if seen[table[i][j]] {
                    return Err(GroupError::NoInverse {
                        element: i,
                        line: "row",
                    });
                }
                seen[table[i][j]] = true;
            }
        }
        for j in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for i in 0..order {
                if seen[table[i][j]] {
                    return Err(GroupError::NoInverse {
                        element: j,
                        line: "column",
                    });
                }
                seen[table[i][j]] = true;
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = table[a][b];
                for c in 0..order {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let flat: Vec<usize> = table.iter().flatten().copied().collect();
        let mut inverse = vec![0usize; order];
        for i in 0..order {
            inverse[i] = (0..order)
                .find(|&j| flat[i * order + j] == 0)
                .expect("latin square row contains the identity");
        }
        let abelian = (0..order)
            .all(|a| (0..a).all(|b| flat[a * order + b] == flat[b * order + a]));
        Ok(FiniteGroup {
            order,
            table: flat,
            inverse,
            abelian,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GroupError> {
        if labels.len() != self.order {
            return Err(GroupError::BadLabels {
                expected: self.order,
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// b * a * b^-1.
    pub fn conj(&self, b: usize, a: usize) -> usize {
        self.mul(self.mul(b, a), self.inv(b))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut acc = x;
        let mut n = 1;
        while acc != 0 {
            acc = self.mul(acc, x);
            n += 1;
        }
        n
    }

    /// Multiset of element orders, as (order, count) sorted by order.
    pub fn order_histogram(&self) -> Vec<(usize, usize)> {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for x in self.elements() {
            *counts.entry(self.element_order(x)).or_insert(0) += 1;
        }
        let mut out: Vec<_> = counts.into_iter().collect();
        out.sort_unstable();
        out
    }

    pub fn pow(&self, x: usize, n: i64) -> usize {
        let ord = self.element_order(x) as i64;
        let mut e = n.rem_euclid(ord);
        let mut acc = 0usize;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn center(self: &Arc<Self>) -> Subgroup {
        let members: Vec<usize> = self
            .elements()
            .filter(|&z| self.elements().all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect();
        Subgroup::new(self, members).expect("center is a subgroup")
    }

    /// The automorphism a |-> x a x^-1.
    pub fn inner_automorphism(self: &Arc<Self>, x: usize) -> GroupHom {
        let map: Vec<usize> = self.elements().map(|a| self.conj(x, a)).collect();
        GroupHom::new(self, self, map).expect("conjugation is an automorphism")
    }

    /// Smallest subgroup containing `seed`, as a sorted element list.
    pub fn closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &g in seed {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    frontier.push(y);
                }
                let z = self.mul(g, x);
                if !inside[z] {
                    inside[z] = true;
                    frontier.push(z);
                }
            }
        }
        (0..self.order).filter(|&i| inside[i]).collect()
    }

    /// Greedy generating sequence: repeatedly adjoin the highest-order element
    /// not yet generated (ties broken by smallest index). Short sequences keep
    /// homomorphism searches narrow.
    pub fn generating_sequence(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut have = self.closure(&gens);
        while have.len() < self.order {
            let next = self
                .elements()
                .filter(|x| have.binary_search(x).is_err())
                .max_by_key(|&x| (self.element_order(x), std::cmp::Reverse(x)))
                .expect("group not yet generated");
            gens.push(next);
            have = self.closure(&gens);
        }
        gens
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("map has {found} entries, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("map sends {element} to {value}, outside the target")]
    OutOfRange { element: usize, value: usize },
    #[error("map does not send identity to identity")]
    IdentityNotPreserved,
    #[error("not a homomorphism at ({x},{y}): f(x*y) != f(x)*f(y)")]
    NotHomomorphism { x: usize, y: usize },
}

/// A validated homomorphism between two finite groups, stored pointwise.
#[derive(Debug, Clone)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<usize>,
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
            && *self.source == *other.source
            && *self.target == *other.target
    }
}
impl Eq for GroupHom {}

impl GroupHom {
    pub fn new(
        source: &Arc<FiniteGroup>,
        target: &Arc<FiniteGroup>,
        map: Vec<usize>,
    ) -> Result<Self, HomError> {
        if map.len() != source.order() {
            return Err(HomError::LengthMismatch {
                expected: source.order(),
                found: map.len(),
            });
        }
        for (element, &value) in map.iter().enumerate() {
            if value >= target.order() {
                return Err(HomError::OutOfRange { element, value });
            }
        }
        if map[0] != 0 {
            return Err(HomError::IdentityNotPreserved);
        }
        for x in source.elements() {
            for y in source.elements() {
                if map[source.mul(x, y)] != target.mul(map[x], map[y]) {
                    return Err(HomError::NotHomomorphism { x, y });
                }
            }
        }
        Ok(GroupHom {
            source: Arc::clone(source),
            target: Arc::clone(target),
            map,
        })
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> Self {
        GroupHom {
            source: Arc::clone(g),
            target: Arc::clone(g),
            map: g.elements().collect(),
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn kernel(&self) -> Subgroup {
        let members: Vec<usize> = self.source.elements().filter(|&x| self.map[x] == 0).collect();
        Subgroup::new(&self.source, members).expect("kernel is a subgroup")
    }

    pub fn image_elements(&self) -> Vec<usize> {
        let mut img: Vec<usize> = self.map.clone();
        img.sort_unstable();
        img.dedup();
        img
    }

    pub fn is_surjective(&self) -> bool {
        self.image_elements().len() == self.target.order()
    }

    pub fn is_injective(&self) -> bool {
        self.image_elements().len() == self.source.order()
    }

    pub fn is_bijective(&self) -> bool {
        self.source.order() == self.target.order() && self.is_surjective()
    }

    pub fn preimages(&self, y: usize) -> Vec<usize> {
        self.source.elements().filter(|&x| self.map[x] == y).collect()
    }

    /// Smallest preimage of each target element; defined only for surjections.
    pub fn canonical_preimage(&self, y: usize) -> usize {
        self.source
            .elements()
            .find(|&x| self.map[x] == y)
            .expect("surjection has a preimage")
    }

    /// other after self.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        assert_eq!(
            *self.target, *other.source,
            "composition requires matching groups"
        );
        GroupHom {
            source: Arc::clone(&self.source),
            target: Arc::clone(&other.target),
            map: self.map.iter().map(|&x| other.map[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Option<GroupHom> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0usize; self.target.order()];
        for x in self.source.elements() {
            inv[self.map[x]] = x;
        }
        Some(GroupHom {
            source: Arc::clone(&self.target),
            target: Arc::clone(&self.source),
            map: inv,
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubgroupError {
    #[error("member {member} is outside the parent group")]
    OutOfRange { member: usize },
    #[error("identity is missing from the member list")]
    MissingIdentity,
    #[error("not closed: {a} * {b} is outside the member list")]
    NotClosedUnderProduct { a: usize, b: usize },
}

/// A subgroup of a parent group, stored as a sorted member list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
    normal: bool,
}

impl Subgroup {
    pub fn new(parent: &Arc<FiniteGroup>, mut members: Vec<usize>) -> Result<Self, SubgroupError> {
        members.sort_unstable();
        members.dedup();
        if let Some(&m) = members.iter().find(|&&m| m >= parent.order()) {
            return Err(SubgroupError::OutOfRange { member: m });
        }
        if members.binary_search(&0).is_err() {
            return Err(SubgroupError::MissingIdentity);
        }
        for &a in &members {
            for &b in &members {
                if members.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(SubgroupError::NotClosedUnderProduct { a, b });
                }
            }
        }
        // Closure plus finiteness gives inverses for free.
        let normal = members.iter().all(|&h| {
            parent
                .elements()
                .all(|g| members.binary_search(&parent.conj(g, h)).is_ok())
        });
        Ok(Subgroup {
            parent: Arc::clone(parent),
            members,
            normal,
        })
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn position(&self, x: usize) -> Option<usize> {
        self.members.binary_search(&x).ok()
    }

    /// The subgroup as a standalone group on indices `0..order`, together
    /// with the inclusion back into the parent. Member 0 of the sorted list
    /// is the parent identity, so index 0 stays the identity.
    pub fn carrier(&self) -> (Arc<FiniteGroup>, GroupHom) {
        let n = self.members.len();
        let table: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.position(self.parent.mul(self.members[i], self.members[j]))
                            .expect("closed under product")
                    })
                    .collect()
            })
            .collect();
        let carrier = Arc::new(FiniteGroup::from_table(&table).expect("subgroup table is a group"));
        let incl = GroupHom::new(&carrier, &self.parent, self.members.clone())
            .expect("inclusion is a homomorphism");
        (carrier, incl)
    }

    /// Quotient by a normal subgroup: returns the quotient group (cosets
    /// indexed by their smallest member, identity coset first) and the
    /// projection. None when the subgroup is not normal.
    pub fn quotient(&self) -> Option<(Arc<FiniteGroup>, GroupHom)> {
        if !self.normal {
            return None;
        }
        let parent = &self.parent;
        let mut coset_rep: Vec<Option<usize>> = vec![None; parent.order()];
        let mut reps: Vec<usize> = Vec::new();
        for g in parent.elements() {
            if coset_rep[g].is_some() {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for &h in &self.members {
                coset_rep[parent.mul(g, h)] = Some(idx);
            }
        }
        let k = reps.len();
        let proj: Vec<usize> = parent
            .elements()
            .map(|g| coset_rep[g].expect("cosets cover the group"))
            .collect();
        let table: Vec<Vec<usize>> = (0..k)
            .map(|i| (0..k).map(|j| proj[parent.mul(reps[i], reps[j])]).collect())
            .collect();
        let quot = Arc::new(FiniteGroup::from_table(&table).expect("coset table is a group"));
        let hom = GroupHom::new(parent, &quot, proj).expect("projection is a homomorphism");
        Some((quot, hom))
    }
}

/// Word decomposition of a group over a generating sequence: each element is
/// either the identity or `parent * gen`, discovered breadth-first. Lets a
/// choice of generator images extend to a full candidate map in one pass.
struct WordTree {
    /// (parent element, generator index), identity has no entry.
    steps: Vec<Option<(usize, usize)>>,
    bfs_order: Vec<usize>,
}

fn word_tree(g: &FiniteGroup, gens: &[usize]) -> WordTree {
    let mut steps: Vec<Option<(usize, usize)>> = vec![None; g.order()];
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut bfs_order = vec![0usize];
    let mut head = 0;
    while head < bfs_order.len() {
        let x = bfs_order[head];
        head += 1;
        for (gi, &gen) in gens.iter().enumerate() {
            let y = g.mul(x, gen);
            if !seen[y] {
                seen[y] = true;
                steps[y] = Some((x, gi));
                bfs_order.push(y);
            }
        }
    }
    assert_eq!(bfs_order.len(), g.order(), "sequence must generate");
    WordTree { steps, bfs_order }
}

/// All homomorphisms source -> target, found by assigning images to a
/// generating sequence and validating the induced map. Candidate images are
/// pruned to those whose order divides the generator's order.
pub fn all_homs(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Vec<GroupHom> {
    let gens = source.generating_sequence();
    let tree = word_tree(source, &gens);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let ord = source.element_order(g);
            target
                .elements()
                .filter(|&t| ord % target.element_order(t) == 0)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut images = vec![0usize; gens.len()];
    search_homs(source, target, &tree, &candidates, 0, &mut images, &mut out);
    out
}

fn search_homs(
    source: &Arc<FiniteGroup>,
    target: &Arc<FiniteGroup>,
    tree: &WordTree,
    candidates: &[Vec<usize>],
    depth: usize,
    images: &mut Vec<usize>,
    out: &mut Vec<GroupHom>,
) {
    if depth == candidates.len() {
        let mut map = vec![0usize; source.order()];
        for &x in &tree.bfs_order {
            if let Some((parent, gi)) = tree.steps[x] {
                map[x] = target.mul(map[parent], images[gi]);
            }
        }
        if let Ok(h) = GroupHom::new(source, target, map) {
            out.push(h);
        }
        return;
    }
    for &c in &candidates[depth] {
        images[depth] = c;
        search_homs(source, target, tree, candidates, depth + 1, images, out);
    }
}

pub fn all_surjections(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Vec<GroupHom> {
    if source.order() % target.order() != 0 {
        return Vec::new();
    }
    all_homs(source, target)
        .into_iter()
        .filter(|h| h.is_surjective())
        .collect()
}

/// Exhaustive isomorphism test. Generator images are restricted to elements
/// of exactly matching order, which keeps the search shallow at desk scale.
pub fn find_isomorphism(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> Option<GroupHom> {
    if a.order() != b.order() || a.is_abelian() != b.is_abelian() {
        return None;
    }
    if a.order_histogram() != b.order_histogram() {
        return None;
    }
    let gens = a.generating_sequence();
    let tree = word_tree(a, &gens);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let ord = a.element_order(g);
            b.elements().filter(|&t| b.element_order(t) == ord).collect()
        })
        .collect();
    let mut images = vec![0usize; gens.len()];
    search_iso(a, b, &tree, &candidates, 0, &mut images)
}

fn search_iso(
    a: &Arc<FiniteGroup>,
    b: &Arc<FiniteGroup>,
    tree: &WordTree,
    candidates: &[Vec<usize>],
    depth: usize,
    images: &mut Vec<usize>,
) -> Option<GroupHom> {
    if depth == candidates.len() {
        let mut map = vec![0usize; a.order()];
        for &x in &tree.bfs_order {
            if let Some((parent, gi)) = tree.steps[x] {
                map[x] = b.mul(map[parent], images[gi]);
            }
        }
        let mut seen = vec![false; b.order()];
        for &y in &map {
            if seen[y] {
                return None;
            }
            seen[y] = true;
        }
        return GroupHom::new(a, b, map).ok();
    }
    for &c in &candidates[depth] {
        images[depth] = c;
        if let Some(h) = search_iso(a, b, tree, candidates, depth + 1, images) {
            return Some(h);
        }
    }
    None
}

pub fn is_isomorphic(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    find_isomorphism(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(catalog::cyclic(n))
    }

    #[test]
    fn rejects_missing_identity() {
        let err = FiniteGroup::from_table(&[vec![1, 0], vec![0, 1]]).unwrap_err();
        assert_eq!(err, GroupError::NoIdentityAtZero { other: 0 });
    }

    #[test]
    fn rejects_non_latin_row() {
        let err = FiniteGroup::from_table(&[vec![0, 1], vec![1, 1]]).unwrap_err();
        assert_eq!(
            err,
            GroupError::NoInverse {
                element: 1,
                line: "row"
            }
        );
    }

    #[test]
    fn rejects_out_of_range() {
        let err = FiniteGroup::from_table(&[vec![0, 1], vec![1, 2]]).unwrap_err();
        assert_eq!(
            err,
            GroupError::NotClosed {
                row: 1,
                col: 1,
                value: 2,
                order: 2
            }
        );
    }

    #[test]
    fn rejects_non_associative_latin_square() {
        // A unital Latin square of order 5 that is not Z/5 cannot be a
        // group, so associativity must fail: (1*1)*2 = 2 but 1*(1*2) = 4.
        let t: Vec<Vec<usize>> = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 3, 4, 0, 1],
            vec![3, 4, 1, 2, 0],
            vec![4, 2, 0, 1, 3],
        ];
        let err = FiniteGroup::from_table(&t).unwrap_err();
        assert!(matches!(err, GroupError::NotAssociative { .. }), "{err:?}");
    }

    #[test]
    fn every_single_entry_corruption_is_rejected() {
        for g in [
            catalog::cyclic(1),
            catalog::cyclic(2),
            catalog::cyclic(3),
            catalog::cyclic(4),
            catalog::klein_four(),
            catalog::cyclic(6),
            catalog::symmetric_3(),
        ] {
            let n = g.order();
            let table: Vec<Vec<usize>> =
                (0..n).map(|i| (0..n).map(|j| g.mul(i, j)).collect()).collect();
            for i in 0..n {
                for j in 0..n {
                    for v in 0..n {
                        if v == table[i][j] {
                            continue;
                        }
                        let mut bad = table.clone();
                        bad[i][j] = v;
                        assert!(
                            FiniteGroup::from_table(&bad).is_err(),
                            "corruption at ({i},{j})<-{v} accepted for order {n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn element_orders_and_inverses() {
        let s3 = Arc::new(catalog::symmetric_3());
        let mut hist = s3.order_histogram();
        hist.sort_unstable();
        assert_eq!(hist, vec![(1, 1), (2, 3), (3, 2)]);
        for x in s3.elements() {
            assert_eq!(s3.mul(x, s3.inv(x)), 0);
            assert_eq!(s3.mul(s3.inv(x), x), 0);
        }
    }

    #[test]
    fn hom_validation_catches_non_hom() {
        let z4 = z(4);
        let z2 = z(2);
        // x mod 2 is a hom; the parity-flipped map is not.
        assert!(GroupHom::new(&z4, &z2, vec![0, 1, 0, 1]).is_ok());
        let err = GroupHom::new(&z4, &z2, vec![0, 0, 1, 0]).unwrap_err();
        assert!(matches!(err, HomError::NotHomomorphism { .. }));
        let err = GroupHom::new(&z4, &z2, vec![1, 0, 1, 0]).unwrap_err();
        assert_eq!(err, HomError::IdentityNotPreserved);
    }

    #[test]
    fn kernel_and_image() {
        let z4 = z(4);
        let z2 = z(2);
        let h = GroupHom::new(&z4, &z2, vec![0, 1, 0, 1]).unwrap();
        assert_eq!(h.kernel().members(), &[0, 2]);
        assert!(h.is_surjective());
        assert!(!h.is_injective());
    }

    #[test]
    fn quotient_of_z4_by_z2() {
        let z4 = z(4);
        let sub = Subgroup::new(&z4, vec![0, 2]).unwrap();
        assert!(sub.is_normal());
        let (q, proj) = sub.quotient().unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj.apply(1), proj.apply(3));
        assert_ne!(proj.apply(1), proj.apply(2));
    }

    #[test]
    fn center_of_s3_is_trivial() {
        let s3 = Arc::new(catalog::symmetric_3());
        assert_eq!(s3.center().order(), 1);
        let d4 = Arc::new(catalog::dihedral(4));
        assert_eq!(d4.center().order(), 2);
    }

    #[test]
    fn hom_counts_match_known_values() {
        // |Hom(Z4, Z2)| = 2, |Hom(Z2, Z4)| = 2, |Hom(S3, Z2)| = 2,
        // |Hom(Z3, S3)| = 3, |Hom(S3, S3)| = 10.
        let z4 = z(4);
        let z2 = z(2);
        let z3 = z(3);
        let s3 = Arc::new(catalog::symmetric_3());
        assert_eq!(all_homs(&z4, &z2).len(), 2);
        assert_eq!(all_homs(&z2, &z4).len(), 2);
        assert_eq!(all_homs(&s3, &z2).len(), 2);
        assert_eq!(all_homs(&z3, &s3).len(), 3);
        assert_eq!(all_homs(&s3, &s3).len(), 10);
        assert_eq!(all_surjections(&z4, &z2).len(), 1);
    }

    #[test]
    fn isomorphism_distinguishes_groups() {
        let z4 = z(4);
        let v4 = Arc::new(catalog::klein_four());
        let z2z2 = Arc::new(catalog::abelian(&[2, 2]));
        assert!(!is_isomorphic(&z4, &v4));
        assert!(is_isomorphic(&v4, &z2z2));
        let d4 = Arc::new(catalog::dihedral(4));
        let q8 = Arc::new(catalog::quaternion_8());
        assert!(!is_isomorphic(&d4, &q8));
        assert!(is_isomorphic(&d4, &Arc::new(catalog::dihedral(4))));
    }

    #[test]
    fn inner_automorphisms_compose() {
        let s3 = Arc::new(catalog::symmetric_3());
        for x in s3.elements() {
            for y in s3.elements() {
                let a = s3.inner_automorphism(x);
                let b = s3.inner_automorphism(y);
                let xy = s3.inner_automorphism(s3.mul(x, y));
                // conj(xy) = conj(x) after conj(y)
                assert_eq!(b.then(&a), xy);
            }
        }
    }
}
