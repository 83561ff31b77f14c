//! Second cohomology with trivial coefficients `Z/p`.
//!
//! A [`Cocycle2`] stores `f(x, y)` as an exponent of a fixed primitive
//! `p`-th root of unity `ζ`, so the cocycle identity is written additively:
//! `f(x,y) + f(xy,z) = f(y,z) + f(x,yz)`. A factor set `{u_x}` in an
//! extension satisfies `u_x u_y = u_{xy} ζ^{f(x,y)}` with `u_1 = 1`.

mod cor;
mod h2;
pub(crate) mod linalg;
mod raise;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Group, GroupError, GroupHom, NamedGenerator, Subgroup};
use linalg::RowSpace;

pub use cor::{
    cor_image_search, corestrict_tate, lift_order_diag, prop54_report, CorWitness, LiftOrder,
    Prop54Report, COR_SEARCH_LIMIT,
};
pub use h2::{h2_enumerate, H2Result, CLASS_LIMIT};
pub use raise::{carry_cocycle, raise_lower, Direction, QuotientData};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("values do not form a normalized 2-cocycle")]
    NotACocycle,
    #[error("kernel is not central")]
    KernelNotCentral,
    #[error("kernel does not have prime order or is not generated by the given element")]
    KernelNotPrime,
    #[error("computation too large: {0}")]
    TooLarge(String),
    #[error("subgroup does not have index 2")]
    BadIndex,
    #[error("the chosen element lies in the subgroup")]
    GInH,
    #[error("expected coefficients mod {expected}, found mod {found}")]
    PrimeMismatch { expected: u64, found: u64 },
    #[error("cocycles live on different groups")]
    GroupMismatch,
    #[error("preimage of the chosen generator has order {found}, expected {expected}")]
    PreimageOrderMismatch { expected: usize, found: usize },
    #[error("quotient condition fails: {0}")]
    QuotientConditionFails(String),
    #[error("element is the identity")]
    IdentityElement,
    #[error("element has odd order {0}")]
    OddOrder(usize),
    #[error("group of order {0} is not a 2-group")]
    NotTwoGroup(usize),
}

pub type Result<T> = std::result::Result<T, CohomologyError>;

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// A 2-cochain `G × G → Z/p`, normally a normalized cocycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle2 {
    group: Arc<Group>,
    p: u64,
    values: Vec<u16>,
}

#[derive(Serialize, Deserialize)]
struct CocycleJson {
    p: u64,
    group: Group,
    values: Vec<Vec<u64>>,
}

impl Serialize for Cocycle2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CocycleJson {
            p: self.p,
            group: self.group.as_ref().clone(),
            values: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cocycle2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CocycleJson::deserialize(d)?;
        Cocycle2::new(Arc::new(raw.group), raw.p, raw.values).map_err(serde::de::Error::custom)
    }
}

impl Cocycle2 {
    /// Wraps a value table, reducing entries mod `p`. The cocycle identity is
    /// not checked here; see [`verify`].
    pub fn new(group: Arc<Group>, p: u64, values: Vec<Vec<u64>>) -> Result<Cocycle2> {
        if !is_prime(p) || p > u16::MAX as u64 {
            return Err(CohomologyError::NotPrime(p));
        }
        let n = group.order();
        if values.len() != n || values.iter().any(|r| r.len() != n) {
            return Err(CohomologyError::Shape(format!("expected a {n}×{n} table")));
        }
        Ok(Cocycle2 {
            group,
            p,
            values: values.into_iter().flatten().map(|v| (v % p) as u16).collect(),
        })
    }

    pub(crate) fn from_fn(
        group: Arc<Group>,
        p: u64,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> Cocycle2 {
        let n = group.order();
        let mut values = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                values.push((f(x, y) % p) as u16);
            }
        }
        Cocycle2 { group, p, values }
    }

    pub fn zero(group: Arc<Group>, p: u64) -> Result<Cocycle2> {
        if !is_prime(p) {
            return Err(CohomologyError::NotPrime(p));
        }
        Ok(Cocycle2::from_fn(group, p, |_, _| 0))
    }

    /// The coboundary `(δh)(x,y) = h(x) + h(y) − h(xy)`.
    pub fn coboundary(group: Arc<Group>, p: u64, h: &[u64]) -> Result<Cocycle2> {
        if h.len() != group.order() {
            return Err(CohomologyError::Shape("1-cochain length differs from |G|".into()));
        }
        if !is_prime(p) {
            return Err(CohomologyError::NotPrime(p));
        }
        let g = group.clone();
        Ok(Cocycle2::from_fn(group, p, |x, y| {
            (h[x] % p + h[y] % p + p - h[g.mul(x, y)] % p) % p
        }))
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn value(&self, x: usize, y: usize) -> u64 {
        self.values[x * self.group.order() + y] as u64
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        let n = self.group.order();
        (0..n).map(|x| (0..n).map(|y| self.value(x, y)).collect()).collect()
    }

    fn compatible(&self, other: &Cocycle2) -> Result<()> {
        if self.p != other.p {
            return Err(CohomologyError::PrimeMismatch {
                expected: self.p,
                found: other.p,
            });
        }
        if self.group.as_ref() != other.group.as_ref() {
            return Err(CohomologyError::GroupMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Cocycle2) -> Result<Cocycle2> {
        self.compatible(other)?;
        let p = self.p;
        Ok(Cocycle2::from_fn(self.group.clone(), p, |x, y| {
            self.value(x, y) + other.value(x, y)
        }))
    }

    pub fn sub(&self, other: &Cocycle2) -> Result<Cocycle2> {
        self.compatible(other)?;
        let p = self.p;
        Ok(Cocycle2::from_fn(self.group.clone(), p, |x, y| {
            self.value(x, y) + p - other.value(x, y)
        }))
    }

    pub fn scale(&self, k: u64) -> Cocycle2 {
        let p = self.p;
        Cocycle2::from_fn(self.group.clone(), p, |x, y| self.value(x, y) * (k % p))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn is_normalized(&self) -> bool {
        let n = self.group.order();
        (0..n).all(|x| self.value(0, x) == 0 && self.value(x, 0) == 0)
    }

    /// The cocycle identity, checked on triples `(x, y, g)` with `g` a
    /// generator; for normalized cochains this implies it for all triples.
    pub fn satisfies_identity(&self) -> bool {
        let g = &self.group;
        let n = g.order();
        let p = self.p;
        let gens: Vec<usize> = g.generators().iter().map(|ng| ng.index).collect();
        for x in 0..n {
            for y in 0..n {
                let xy = g.mul(x, y);
                let lhs0 = self.value(x, y);
                for &s in &gens {
                    let lhs = lhs0 + self.value(xy, s);
                    let rhs = self.value(y, s) + self.value(x, g.mul(y, s));
                    if lhs % p != rhs % p {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_cocycle(&self) -> bool {
        self.is_normalized() && self.satisfies_identity()
    }

    /// Whether `self − other` is a coboundary.
    pub fn cohomologous(&self, other: &Cocycle2) -> Result<bool> {
        Ok(coboundary_witness(&self.sub(other)?).is_some())
    }
}

/// Outcome of [`verify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub is_cocycle: bool,
    /// Only meaningful when `is_cocycle` holds.
    pub is_coboundary: bool,
    /// `h` with `f = δh` and `h(1) = 0`.
    pub witness: Option<Vec<u64>>,
}

/// Checks the cocycle conditions and solves `δh = f` over `F_p`.
pub fn verify(f: &Cocycle2) -> Verification {
    if !f.is_cocycle() {
        return Verification {
            is_cocycle: false,
            is_coboundary: false,
            witness: None,
        };
    }
    let witness = coboundary_witness(f);
    Verification {
        is_cocycle: true,
        is_coboundary: witness.is_some(),
        witness,
    }
}

/// Solves `δh = f` with `h` determined along a spanning tree by its values
/// on the generators.
pub(crate) fn coboundary_witness(f: &Cocycle2) -> Option<Vec<u64>> {
    let g = &f.group;
    let p = f.p;
    let n = g.order();
    let gens: Vec<usize> = g.generators().iter().map(|ng| ng.index).collect();
    let d = gens.len();
    // h(y) as an affine form: coefficients of h(g_k), then the constant
    let (bfs, parent) = g.spanning_tree(&gens);
    let mut h = vec![vec![0u64; d + 1]; n];
    for &y in bfs.iter().skip(1) {
        let (yp, k) = parent[y];
        let mut v = h[yp].clone();
        v[k] = (v[k] + 1) % p;
        v[d] = (v[d] + p - f.value(yp, gens[k])) % p;
        h[y] = v;
    }
    let mut space = RowSpace::new(p, d + 1);
    for x in 0..n {
        for y in 0..n {
            let xy = g.mul(x, y);
            // h(x) + h(y) − h(xy) = f(x, y)
            let mut row: Vec<u64> = (0..=d)
                .map(|i| (h[x][i] + h[y][i] + p - h[xy][i]) % p)
                .collect();
            row[d] = (f.value(x, y) + p - row[d]) % p;
            if space.insert(row) && space.solve_augmented().is_none() {
                return None;
            }
        }
    }
    let sol = space.solve_augmented()?;
    Some(
        (0..n)
            .map(|y| {
                let s: u64 = (0..d).map(|k| h[y][k] * sol[k]).sum::<u64>() + h[y][d];
                s % p
            })
            .collect(),
    )
}

/// A central extension `1 → Z/p → E → G → 1` with its cocycle.
#[derive(Debug, Clone)]
pub struct ExtensionClass {
    cocycle: Cocycle2,
    group: Arc<Group>,
    projection: GroupHom,
    kernel_gen: usize,
}

impl ExtensionClass {
    pub fn cocycle(&self) -> &Cocycle2 {
        &self.cocycle
    }

    /// The extension group `E`.
    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn projection(&self) -> &GroupHom {
        &self.projection
    }

    pub fn kernel_gen(&self) -> usize {
        self.kernel_gen
    }

    /// Wraps an existing extension, reading off its cocycle.
    pub fn from_extension(e: Arc<Group>, projection: GroupHom, kernel_gen: usize) -> Result<Self> {
        let cocycle = cocycle_of_extension(&e, &projection, kernel_gen)?;
        Ok(ExtensionClass {
            cocycle,
            group: e,
            projection,
            kernel_gen,
        })
    }

    /// Least-index preimage of a base element.
    pub fn section(&self, x: usize) -> usize {
        (0..self.group.order())
            .find(|&e| self.projection.apply(e) == x)
            .expect("projection is surjective")
    }

    /// Exponent `a` with `e = z^a` for a kernel element `e`.
    pub fn kernel_log(&self, e: usize) -> Option<u64> {
        let mut acc = 0;
        for a in 0..self.cocycle.p {
            if acc == e {
                return Some(a);
            }
            acc = self.group.mul(acc, self.kernel_gen);
        }
        None
    }
}

/// Factor set of a central extension using least-index preimages.
pub fn cocycle_of_extension(e: &Arc<Group>, proj: &GroupHom, kernel_gen: usize) -> Result<Cocycle2> {
    if proj.source().as_ref() != e.as_ref() {
        return Err(CohomologyError::GroupMismatch);
    }
    if !proj.is_surjective() {
        return Err(GroupError::NotAHomomorphism("projection is not surjective".into()).into());
    }
    let kernel = proj.kernel();
    let p = kernel.order() as u64;
    if !is_prime(p) || kernel_gen >= e.order() || !kernel.contains(kernel_gen) || kernel_gen == 0
    {
        return Err(CohomologyError::KernelNotPrime);
    }
    if (0..e.order()).any(|x| e.mul(x, kernel_gen) != e.mul(kernel_gen, x)) {
        return Err(CohomologyError::KernelNotCentral);
    }
    let mut log = vec![u64::MAX; e.order()];
    let mut acc = 0;
    for a in 0..p {
        log[acc] = a;
        acc = e.mul(acc, kernel_gen);
    }
    let base = proj.target().clone();
    let mut section = vec![usize::MAX; base.order()];
    for x in (0..e.order()).rev() {
        section[proj.apply(x)] = x;
    }
    let mut values = vec![vec![0u64; base.order()]; base.order()];
    for x in 0..base.order() {
        for y in 0..base.order() {
            let prod = e.mul(section[x], section[y]);
            let k = e.mul(e.inv(section[base.mul(x, y)]), prod);
            values[x][y] = log[k];
        }
    }
    Cocycle2::new(base, p, values)
}

/// The extension on pairs `(a, x)`, stored at index `x·p + a`, with
/// `(a, x)(b, y) = (a + b + f(x, y), xy)`.
pub fn extension_of_cocycle(f: &Cocycle2) -> Result<ExtensionClass> {
    if !f.is_cocycle() {
        return Err(CohomologyError::NotACocycle);
    }
    let g = f.group.clone();
    let p = f.p as usize;
    let n = g.order() * p;
    if n > crate::group::MAX_ORDER {
        return Err(GroupError::OrderTooLarge(n).into());
    }
    let mut rows = vec![vec![0usize; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        let (x, a) = (i / p, i % p);
        for (j, cell) in row.iter_mut().enumerate() {
            let (y, b) = (j / p, j % p);
            let c = (a + b + f.value(x, y) as usize) % p;
            *cell = g.mul(x, y) * p + c;
        }
    }
    let mut gens: Vec<NamedGenerator> = g
        .generators()
        .iter()
        .map(|ng| NamedGenerator {
            name: ng.name.clone(),
            index: ng.index * p,
        })
        .collect();
    gens.push(NamedGenerator {
        name: "zeta".into(),
        index: 1,
    });
    let e = Arc::new(Group::from_table(rows, gens)?);
    let projection = GroupHom::new(e.clone(), g, (0..n).map(|i| i / p).collect())?;
    Ok(ExtensionClass {
        cocycle: f.clone(),
        group: e,
        projection,
        kernel_gen: 1,
    })
}

/// Restriction to a subgroup, as a cocycle on [`Subgroup::as_group`].
pub fn restrict(f: &Cocycle2, h: &Subgroup) -> Result<Cocycle2> {
    if h.elements().iter().any(|&x| x >= f.group.order()) {
        return Err(CohomologyError::Shape("subgroup of another group".into()));
    }
    let (hg, elems) = h.as_group(&f.group);
    Ok(Cocycle2::from_fn(Arc::new(hg), f.p, |i, j| {
        f.value(elems[i], elems[j])
    }))
}

/// Inflation along `proj: G → G/N`.
pub fn inflate(f: &Cocycle2, proj: &GroupHom) -> Result<Cocycle2> {
    if proj.target().as_ref() != f.group.as_ref() {
        return Err(CohomologyError::GroupMismatch);
    }
    Ok(Cocycle2::from_fn(proj.source().clone(), f.p, |x, y| {
        f.value(proj.apply(x), proj.apply(y))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, is_isomorphic};

    fn build(s: &str) -> Arc<Group> {
        Arc::new(build_group(&s.parse().unwrap()).unwrap())
    }

    fn c4_over_c2() -> ExtensionClass {
        let c4 = build("C:4");
        let c2 = build("C:2");
        let proj = GroupHom::new(c4.clone(), c2, vec![0, 1, 0, 1]).unwrap();
        ExtensionClass::from_extension(c4, proj, 2).unwrap()
    }

    #[test]
    fn cyclic_four_factor_set() {
        let e = c4_over_c2();
        assert_eq!(e.cocycle().rows(), vec![vec![0, 0], vec![0, 1]]);
        let v = verify(e.cocycle());
        assert!(v.is_cocycle && !v.is_coboundary);
    }

    #[test]
    fn zero_cocycle_is_split() {
        let g = build("C:2");
        let f = Cocycle2::zero(g, 2).unwrap();
        let v = verify(&f);
        assert!(v.is_cocycle && v.is_coboundary);
        let e = extension_of_cocycle(&f).unwrap();
        assert!(is_isomorphic(e.group(), &build("E:p=2,r=2")).unwrap());
    }

    #[test]
    fn round_trip_is_exact() {
        let e = c4_over_c2();
        let back = extension_of_cocycle(e.cocycle()).unwrap();
        let again =
            cocycle_of_extension(back.group(), back.projection(), back.kernel_gen()).unwrap();
        assert_eq!(&again, e.cocycle());
        assert!(is_isomorphic(back.group(), &build("C:4")).unwrap());
    }

    #[test]
    fn non_normalized_table_is_rejected() {
        let g = build("C:2");
        let f = Cocycle2::new(g, 2, vec![vec![1, 0], vec![0, 0]]).unwrap();
        assert!(!verify(&f).is_cocycle);
        assert!(matches!(extension_of_cocycle(&f), Err(CohomologyError::NotACocycle)));
    }

    #[test]
    fn coboundary_witness_reproduces() {
        let g = build("D:8");
        let h: Vec<u64> = (0..8).map(|i| (i * i + 1) as u64 % 2).collect();
        let mut h0 = h.clone();
        h0[0] = 0;
        let f = Cocycle2::coboundary(g.clone(), 2, &h0).unwrap();
        let w = verify(&f).witness.unwrap();
        assert_eq!(Cocycle2::coboundary(g, 2, &w).unwrap(), f);
    }

    #[test]
    fn kernel_checks() {
        let d8 = build("D:8");
        let t = d8.generator("tau").unwrap();
        let c2 = build("C:2");
        // sign map with non-central kernel generator candidate
        let s = d8.generator("sigma").unwrap();
        let images: Vec<usize> = (0..8).map(|x| usize::from(x >= 4)).collect();
        let proj = GroupHom::new(d8.clone(), c2, images).unwrap();
        assert_eq!(proj.apply(t), 1);
        assert!(matches!(
            cocycle_of_extension(&d8, &proj, s),
            Err(CohomologyError::KernelNotPrime)
        ));
    }

    #[test]
    fn json_round_trip() {
        let e = c4_over_c2();
        let text = serde_json::to_string(e.cocycle()).unwrap();
        let back: Cocycle2 = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, e.cocycle());
    }
}
