//! Finite groups stored as complete multiplication tables.
//!
//! Every group carries a list of named generators and uses index `0` for the
//! identity. Groups are immutable once built; operations that produce new
//! groups (quotients, pullbacks, extensions) return fresh values with a
//! deterministic element order so that serialized output is reproducible.

mod catalog;
mod dual;
mod iso;
mod ops;
mod pc;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use catalog::{build_group, CatalogSpec, ModularVariant};
pub use dual::{dual_action_predicate, DualActionData, DualActionFlags};
pub use iso::{find_isomorphism, is_isomorphic, ISO_ORDER_LIMIT};
pub use ops::{
    center, max_elem_abelian_quotient, min_generators, normal_subgroups, pullback, quotient, structure_invariants,
    subgroups_of_index2, Pullback, StructureInvariants,
};

/// Largest group order the toolkit will tabulate.
pub const MAX_ORDER: usize = 4096;

/// Orders up to this bound get a full associativity check; larger tables are sampled.
pub const FULL_ASSOC_LIMIT: usize = 64;

const ASSOC_SAMPLES: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("unknown group family `{0}`")]
    UnknownFamily(String),
    #[error("invalid catalog parameters: {0}")]
    InvalidParameter(String),
    #[error("group order {0} exceeds the limit of {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("presentation does not close to a group: {0}")]
    RelationInconsistent(String),
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("homomorphisms do not share a common target")]
    TargetMismatch,
    #[error("map is not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group is not a p-group for p = {0}")]
    NotPGroup(u64),
    #[error("m^2 is not congruent to 1 modulo |A| = {0}")]
    BadM(u64),
    #[error("invalid dual action data: {0}")]
    BadAction(String),
}

pub type Result<T> = std::result::Result<T, GroupError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedGenerator {
    pub name: String,
    pub index: usize,
}

/// A finite group given by its full multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct Group {
    order: usize,
    table: Vec<u16>,
    inverses: Vec<u16>,
    generators: Vec<NamedGenerator>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("order", &self.order)
            .field("generators", &self.generators)
            .finish_non_exhaustive()
    }
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    order: usize,
    table: Vec<Vec<usize>>,
    generators: Vec<NamedGenerator>,
}

impl Serialize for Group {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupJson {
            order: self.order,
            table: self.rows(),
            generators: self.generators.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Group {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GroupJson::deserialize(d)?;
        if raw.table.len() != raw.order {
            return Err(serde::de::Error::custom("table row count differs from order"));
        }
        Group::from_table(raw.table, raw.generators).map_err(serde::de::Error::custom)
    }
}

impl Group {
    /// Validates and wraps a multiplication table.
    ///
    /// Checks the Latin-square property, that index 0 is the identity,
    /// associativity (exhaustively up to order 64, on 10⁴ seeded random triples
    /// beyond) and that the generators generate.
    pub fn from_table(rows: Vec<Vec<usize>>, generators: Vec<NamedGenerator>) -> Result<Group> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if n > MAX_ORDER {
            return Err(GroupError::OrderTooLarge(n));
        }
        let mut table = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(GroupError::InvalidTable("table is not square".into()));
            }
            for &v in row {
                if v >= n {
                    return Err(GroupError::InvalidTable(format!("entry {v} out of range")));
                }
                table.push(v as u16);
            }
        }
        let g = Group::from_raw(n, table, generators)?;
        g.check_generators()?;
        Ok(g)
    }

    /// Builds a group from a flat row-major table, checking the group axioms
    /// but not that the generator list generates.
    pub(crate) fn from_raw(
        n: usize,
        table: Vec<u16>,
        generators: Vec<NamedGenerator>,
    ) -> Result<Group> {
        debug_assert_eq!(table.len(), n * n);
        for i in 0..n {
            if table[i] as usize != i || table[i * n] as usize != i {
                return Err(GroupError::InvalidTable("index 0 is not the identity".into()));
            }
        }
        let mut seen = vec![usize::MAX; n];
        for i in 0..n {
            for j in 0..n {
                let v = table[i * n + j] as usize;
                if seen[v] == i {
                    return Err(GroupError::InvalidTable(format!("row {i} repeats {v}")));
                }
                seen[v] = i;
            }
        }
        let mut seen = vec![usize::MAX; n];
        for j in 0..n {
            for i in 0..n {
                let v = table[i * n + j] as usize;
                if seen[v] == j {
                    return Err(GroupError::InvalidTable(format!("column {j} repeats {v}")));
                }
                seen[v] = j;
            }
        }
        let mut inverses = vec![0u16; n];
        for i in 0..n {
            let j = (0..n)
                .find(|&j| table[i * n + j] == 0)
                .expect("Latin square row contains the identity");
            inverses[i] = j as u16;
        }
        for g in &generators {
            if g.index >= n {
                return Err(GroupError::InvalidTable(format!(
                    "generator `{}` index {} out of range",
                    g.name, g.index
                )));
            }
        }
        let g = Group {
            order: n,
            table,
            inverses,
            generators,
        };
        g.check_associative()?;
        Ok(g)
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.order;
        let bad = |a: usize, b: usize, c: usize| {
            GroupError::RelationInconsistent(format!("associativity fails on ({a}, {b}, {c})"))
        };
        if n <= FULL_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(bad(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..ASSOC_SAMPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return Err(bad(a, b, c));
                }
            }
        }
        Ok(())
    }

    fn check_generators(&self) -> Result<()> {
        let gens: Vec<usize> = self.generators.iter().map(|g| g.index).collect();
        if self.closure(&gens).len() != self.order {
            return Err(GroupError::InvalidTable("generators do not generate the group".into()));
        }
        Ok(())
    }

    /// The trivial group.
    pub fn trivial() -> Group {
        Group {
            order: 1,
            table: vec![0],
            inverses: vec![0],
            generators: Vec::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut acc = 0;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    /// `a^{-1} b^{-1} a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// `g a g^{-1}`.
    pub fn conjugate(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn generators(&self) -> &[NamedGenerator] {
        &self.generators
    }

    /// Index of the generator with the given name.
    pub fn generator(&self, name: &str) -> Option<usize> {
        self.generators.iter().find(|g| g.name == name).map(|g| g.index)
    }

    pub(crate) fn with_generators(mut self, generators: Vec<NamedGenerator>) -> Group {
        self.generators = generators;
        self
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.mul(i, j)).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted element set of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&i| seen[i]).collect()
    }

    pub fn subgroup_generated(&self, gens: &[usize]) -> Subgroup {
        Subgroup {
            parent_order: self.order,
            elements: self.closure(gens),
        }
    }

    /// Normal closure of a set of elements.
    pub fn normal_closure(&self, elems: &[usize]) -> Subgroup {
        let mut gens: BTreeSet<usize> = BTreeSet::new();
        for &e in elems {
            for g in 0..self.order {
                gens.insert(self.conjugate(g, e));
            }
        }
        let gens: Vec<usize> = gens.into_iter().collect();
        self.subgroup_generated(&gens)
    }

    /// Exponent: least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order)
            .map(|a| self.element_order(a))
            .fold(1, num_integer::lcm)
    }

    /// The prime `p` when the order is a power of `p` (including the trivial group, `None`).
    pub fn prime(&self) -> Option<u64> {
        prime_power_base(self.order as u64)
    }

    /// Breadth-first spanning tree over right multiplication by `gens`:
    /// for each non-identity `y`, a pair `(y', g)` with `y = y'·g` and `y'`
    /// discovered earlier. Entry 0 is unused.
    pub(crate) fn spanning_tree(&self, gens: &[usize]) -> (Vec<usize>, Vec<(usize, usize)>) {
        let mut parent = vec![(usize::MAX, usize::MAX); self.order];
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut order = vec![0usize];
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for (k, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = (x, k);
                    order.push(y);
                }
            }
        }
        (order, parent)
    }
}

pub(crate) fn prime_power_base(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if !n.is_multiple_of(p) {
        p = n;
    }
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    (m == 1).then_some(p)
}

/// A subgroup, stored as the sorted list of parent indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subgroup {
    parent_order: usize,
    elements: Vec<usize>,
}

impl Subgroup {
    /// Wraps a sorted index set after checking closure in `parent`.
    pub fn new(parent: &Group, mut elements: Vec<usize>) -> Result<Subgroup> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) {
            return Err(GroupError::InvalidTable("subgroup must contain the identity".into()));
        }
        if elements.iter().any(|&e| e >= parent.order()) {
            return Err(GroupError::InvalidTable("subgroup index out of range".into()));
        }
        let mut member = vec![false; parent.order()];
        for &e in &elements {
            member[e] = true;
        }
        for &a in &elements {
            for &b in &elements {
                if !member[parent.mul(a, b)] {
                    return Err(GroupError::InvalidTable("subset is not closed".into()));
                }
            }
        }
        Ok(Subgroup {
            parent_order: parent.order(),
            elements,
        })
    }

    pub fn trivial(parent: &Group) -> Subgroup {
        Subgroup {
            parent_order: parent.order(),
            elements: vec![0],
        }
    }

    pub fn whole(parent: &Group) -> Subgroup {
        Subgroup {
            parent_order: parent.order(),
            elements: (0..parent.order()).collect(),
        }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_in_parent(&self) -> usize {
        self.parent_order / self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Position of `x` in the sorted element list, i.e. its index in [`Subgroup::as_group`].
    pub fn position(&self, x: usize) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    pub fn is_normal(&self, parent: &Group) -> bool {
        (0..parent.order()).all(|g| {
            self.elements
                .iter()
                .all(|&h| self.contains(parent.conjugate(g, h)))
        })
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            parent_order: self.parent_order,
            elements: self
                .elements
                .iter()
                .copied()
                .filter(|&x| other.contains(x))
                .collect(),
        }
    }

    /// The subgroup as a standalone group, elements in parent order, with
    /// the inclusion homomorphism.
    pub fn as_group(&self, parent: &Group) -> (Group, Vec<usize>) {
        let n = self.elements.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in &self.elements {
            for &b in &self.elements {
                let c = self.position(parent.mul(a, b)).expect("subgroup is closed");
                table.push(c as u16);
            }
        }
        let mut g = Group::from_raw(n, table, Vec::new()).expect("subgroup of a valid group");
        let gens = ops::generating_set(&g)
            .into_iter()
            .enumerate()
            .map(|(i, index)| NamedGenerator {
                name: format!("h{}", i + 1),
                index,
            })
            .collect();
        g = g.with_generators(gens);
        (g, self.elements.clone())
    }
}

/// A homomorphism between two tabulated groups.
#[derive(Debug, Clone)]
pub struct GroupHom {
    source: Arc<Group>,
    target: Arc<Group>,
    images: Vec<usize>,
}

impl GroupHom {
    /// Checks multiplicativity on all pairs before wrapping.
    pub fn new(source: Arc<Group>, target: Arc<Group>, images: Vec<usize>) -> Result<GroupHom> {
        if images.len() != source.order() {
            return Err(GroupError::NotAHomomorphism("image list has wrong length".into()));
        }
        if images.iter().any(|&i| i >= target.order()) {
            return Err(GroupError::NotAHomomorphism("image out of range".into()));
        }
        if images[0] != 0 {
            return Err(GroupError::NotAHomomorphism("identity not preserved".into()));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(GroupError::NotAHomomorphism(format!(
                        "fails on ({a}, {b})"
                    )));
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            images,
        })
    }

    pub(crate) fn new_unchecked(
        source: Arc<Group>,
        target: Arc<Group>,
        images: Vec<usize>,
    ) -> GroupHom {
        GroupHom {
            source,
            target,
            images,
        }
    }

    pub fn source(&self) -> &Arc<Group> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Group> {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &i in &self.images {
            hit[i] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup {
            parent_order: self.source.order(),
            elements: (0..self.source.order())
                .filter(|&x| self.images[x] == 0)
                .collect(),
        }
    }

    /// Preimage of a subgroup of the target.
    pub fn preimage(&self, sub: &Subgroup) -> Subgroup {
        Subgroup {
            parent_order: self.source.order(),
            elements: (0..self.source.order())
                .filter(|&x| sub.contains(self.images[x]))
                .collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.target.as_ref() != other.source.as_ref() {
            return Err(GroupError::TargetMismatch);
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        })
    }
}
