//! Automatic realizations `G ⟹ H`: a small implication database with
//! closure queries.
//!
//! Edges come from three places: recorded implications (a JSON-lines file,
//! one `{"from", "to", "cite"}` object per line), parametric families
//! checked by rule, and quotient maps `G ⟹ G/N` found by isomorphism search
//! for orders up to 64.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpg::FpGModule;
use crate::group::{
    build_group, is_isomorphic, min_generators, normal_subgroups, quotient, CatalogSpec, Group, GroupError,
    ISO_ORDER_LIMIT,
};

const BUILTIN: &str = include_str!("../data/autoreal.jsonl");

#[derive(Debug, Error)]
pub enum AutorealError {
    #[error("unknown group spec `{spec}`: {source}")]
    UnknownSpec { spec: String, source: GroupError },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("line {line}: {detail}")]
    BadRecord { line: usize, detail: String },
    #[error("edge {from} => {to} needs more generators than its source has")]
    GeneratorCount { from: String, to: String },
    #[error("bad parameters: {0}")]
    BadParams(String),
}

pub type Result<T> = std::result::Result<T, AutorealError>;

fn parse_spec(s: &str) -> Result<CatalogSpec> {
    s.parse().map_err(|source| AutorealError::UnknownSpec {
        spec: s.to_string(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Recorded,
    Family,
    Quotient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub cite: String,
    pub kind: EdgeKind,
}

#[derive(Deserialize)]
struct Record {
    from: String,
    to: String,
    cite: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Implication {
    pub holds: Verdict,
    pub path: Vec<Edge>,
    /// why the answer is `Fails`, if it is
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Non-implications on record, as `(from family, to family)`.
const KNOWN_FALSE: &[(&str, &str, &str)] = &[("G2", "G1", "Br"), ("G4", "G3", "Mi-p4")];

fn family_name(s: &CatalogSpec) -> Option<(&'static str, u64)> {
    match s {
        CatalogSpec::Heisenberg { p } => Some(("G1", *p)),
        CatalogSpec::G2 { p } => Some(("G2", *p)),
        CatalogSpec::G3 { p } => Some(("G3", *p)),
        CatalogSpec::G4 { p } => Some(("G4", *p)),
        _ => None,
    }
}

fn is_odd_prime(p: u64) -> bool {
    p > 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn is_power_of(p: u64, mut m: u64) -> bool {
    if m == 0 {
        return false;
    }
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

/// Citation for a family edge `x ⟹ y`, if one applies.
fn family_edge(x: &CatalogSpec, y: &CatalogSpec) -> Option<&'static str> {
    use CatalogSpec::*;
    match (x, y) {
        (Cyclic(4), Cyclic(m)) if m.is_power_of_two() && *m > 1 => Some("Wh"),
        (Cyclic(p), Cyclic(m)) if is_odd_prime(*p) && is_power_of(*p, *m) && *m > 1 => Some("Wh"),
        (Heisenberg { p }, G2 { p: q }) if p == q && is_odd_prime(*p) => Some("Br Thm 2"),
        (G3 { p }, G4 { p: q }) if p == q && is_odd_prime(*p) => Some("Mi-p4 Thm 5.2"),
        (Mss { p, n, j }, Mss { p: p2, n: n2, j: j2 }) if p == p2 && n == n2 => {
            mss_target(*p, *n, *j).filter(|t| t == j2).map(|_| "MSS Thm 1")
        }
        _ => None,
    }
}

/// `p^{i+1}` when `j = pⁱ + c` with `0 ≤ i < n` and `1 ≤ c < p^{i+1} − pⁱ`.
fn mss_target(p: u64, n: u32, j: u64) -> Option<u64> {
    (0..n).find_map(|i| {
        let (lo, hi) = (p.checked_pow(i)?, p.checked_pow(i + 1)?);
        (j > lo && j < hi).then_some(hi)
    })
}

#[derive(Debug, Clone, Default)]
pub struct RealizationGraph {
    edges: Vec<Edge>,
}

impl RealizationGraph {
    /// The recorded implications shipped with the crate.
    pub fn builtin() -> RealizationGraph {
        RealizationGraph::from_jsonl(BUILTIN).expect("builtin database is valid")
    }

    /// Parses JSON lines, validating specs and generator counts.
    pub fn from_jsonl(text: &str) -> Result<RealizationGraph> {
        let mut g = RealizationGraph::default();
        g.extend_jsonl(text)?;
        Ok(g)
    }

    pub fn extend_jsonl(&mut self, text: &str) -> Result<()> {
        for (k, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let bad = |detail: String| AutorealError::BadRecord { line: k + 1, detail };
            let r: Record = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
            if r.cite.trim().is_empty() {
                return Err(bad("missing citation".into()));
            }
            self.add_edge(&r.from, &r.to, &r.cite)?;
        }
        Ok(())
    }

    pub fn add_edge(&mut self, from: &str, to: &str, cite: &str) -> Result<()> {
        let (f, t) = (parse_spec(from)?, parse_spec(to)?);
        if !gen_count_necessary(from, to)? {
            return Err(AutorealError::GeneratorCount {
                from: f.to_string(),
                to: t.to_string(),
            });
        }
        self.edges.push(Edge {
            from: f.to_string(),
            to: t.to_string(),
            cite: cite.to_string(),
            kind: EdgeKind::Recorded,
        });
        Ok(())
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Searches for a path `G ⟹ ⋯ ⟹ H`.
    pub fn implies(&self, g: &str, h: &str) -> Result<Implication> {
        let (gs, hs) = (parse_spec(g)?, parse_spec(h)?);
        let (gk, hk) = (gs.to_string(), hs.to_string());
        if reverse_known_false(g, h)? {
            return Ok(Implication {
                holds: Verdict::Fails,
                path: vec![],
                reason: Some("recorded non-implication".into()),
            });
        }
        if !gen_count_necessary(g, h)? {
            return Ok(Implication {
                holds: Verdict::Fails,
                path: vec![],
                reason: Some("target needs more generators than source".into()),
            });
        }
        if gk == hk {
            return Ok(Implication {
                holds: Verdict::Holds,
                path: vec![],
                reason: None,
            });
        }
        let mut candidates: Vec<CatalogSpec> = vec![gs.clone(), hs.clone()];
        for e in &self.edges {
            candidates.push(parse_spec(&e.from)?);
            candidates.push(parse_spec(&e.to)?);
        }
        let mut groups = GroupCache::default();
        let mut prev: HashMap<String, Edge> = HashMap::new();
        let mut seen = BTreeSet::from([gk.clone()]);
        let mut queue = VecDeque::from([gs]);
        while let Some(x) = queue.pop_front() {
            for (y, edge) in self.successors(&x, &candidates, &mut groups)? {
                let yk = y.to_string();
                if !seen.insert(yk.clone()) {
                    continue;
                }
                prev.insert(yk.clone(), edge);
                if yk == hk {
                    let mut path = Vec::new();
                    let mut cur = hk;
                    while cur != gk {
                        let e = prev[&cur].clone();
                        cur = e.from.clone();
                        path.push(e);
                    }
                    path.reverse();
                    return Ok(Implication {
                        holds: Verdict::Holds,
                        path,
                        reason: None,
                    });
                }
                queue.push_back(y);
            }
        }
        Ok(Implication {
            holds: Verdict::Unknown,
            path: vec![],
            reason: None,
        })
    }

    fn successors(
        &self,
        x: &CatalogSpec,
        candidates: &[CatalogSpec],
        groups: &mut GroupCache,
    ) -> Result<Vec<(CatalogSpec, Edge)>> {
        let xk = x.to_string();
        let edge = |to: &CatalogSpec, cite: &str, kind| Edge {
            from: xk.clone(),
            to: to.to_string(),
            cite: cite.to_string(),
            kind,
        };
        let mut out = Vec::new();
        for e in self.edges.iter().filter(|e| e.from == xk) {
            out.push((parse_spec(&e.to)?, e.clone()));
        }
        if let CatalogSpec::Mss { p, n, j } = x {
            if let Some(t) = mss_target(*p, *n, *j) {
                let y = CatalogSpec::Mss { p: *p, n: *n, j: t };
                out.push((y.clone(), edge(&y, "MSS Thm 1", EdgeKind::Family)));
            }
        }
        for y in candidates {
            if let Some(cite) = family_edge(x, y) {
                out.push((y.clone(), edge(y, cite, EdgeKind::Family)));
            }
        }
        for y in candidates {
            if y.to_string() != xk && groups.is_quotient(x, y)? {
                out.push((y.clone(), edge(y, "quotient", EdgeKind::Quotient)));
            }
        }
        Ok(out)
    }
}

#[derive(Default)]
struct GroupCache {
    built: HashMap<String, Option<Arc<Group>>>,
}

impl GroupCache {
    /// `None` when the group is too large to build.
    fn get(&mut self, s: &CatalogSpec) -> Option<Arc<Group>> {
        self.built
            .entry(s.to_string())
            .or_insert_with(|| build_group(s).ok().map(Arc::new))
            .clone()
    }

    fn is_quotient(&mut self, x: &CatalogSpec, y: &CatalogSpec) -> Result<bool> {
        let (Some(gx), Some(gy)) = (self.get(x), self.get(y)) else {
            return Ok(false);
        };
        let (nx, ny) = (gx.order(), gy.order());
        if nx > ISO_ORDER_LIMIT || nx % ny != 0 || ny == nx {
            return Ok(false);
        }
        for n in normal_subgroups(&gx).iter().filter(|n| n.order() == nx / ny) {
            let (q, _) = quotient(&gx, n)?;
            if is_isomorphic(&q, &gy)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// True for the recorded failures `G₂ ⟹ G₁` and `G₄ ⟹ G₃`.
pub fn reverse_known_false(g: &str, h: &str) -> Result<bool> {
    let (gs, hs) = (parse_spec(g)?, parse_spec(h)?);
    Ok(match (family_name(&gs), family_name(&hs)) {
        (Some((a, p)), Some((b, q))) => {
            p == q && is_odd_prime(p) && KNOWN_FALSE.iter().any(|(f, t, _)| *f == a && *t == b)
        }
        _ => false,
    })
}

/// `d(H) ≤ d(G)`, a necessary condition for `G ⟹ H`.
pub fn gen_count_necessary(g: &str, h: &str) -> Result<bool> {
    let (gs, hs) = (parse_spec(g)?, parse_spec(h)?);
    let (gg, hh) = (build_group(&gs)?, build_group(&hs)?);
    Ok(min_generators(&hh) <= min_generators(&gg))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityBound {
    pub group: String,
    pub p: u64,
    pub n: u32,
    pub k: u32,
    pub bound: BigUint,
}

/// `ν(F_p[Z/pⁿ]^k ⋊ Z/pⁿ) ≥ p^k`
pub fn multiplicity_bound(p: u64, n: u32, k: u32) -> Result<MultiplicityBound> {
    if !(p == 2 || is_odd_prime(p)) {
        return Err(AutorealError::BadParams(format!("{p} is not prime")));
    }
    if n == 0 || (p == 2 && n == 1) {
        return Err(AutorealError::BadParams(format!(
            "n = {n} is too small for p = {p}"
        )));
    }
    let q = BigUint::from(p).pow(n);
    Ok(MultiplicityBound {
        group: format!("F_{p}[C_{q}]^{k} x| C_{q}"),
        p,
        n,
        k,
        bound: BigUint::from(p).pow(k),
    })
}

/// How a module compares with the excluded shape
/// `F_p[G]/(σ − 1)^{pʲ+1} ⊕ (summands of p-power length)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcludedShape {
    /// some summand has length `pʲ + 1`, `0 ≤ j < n`, and all others have
    /// `p`-power length
    pub literal: bool,
    /// every summand has `p`-power length (the `j = −∞` reading)
    pub all_p_powers: bool,
}

pub fn excluded_shape(a: &FpGModule) -> ExcludedShape {
    let p = a.p();
    let d = a.multiplicities();
    let p_power = |len: u64| is_power_of(p, len);
    let all_p_powers = d.keys().all(|&l| p_power(l));
    let literal = (0..a.n()).any(|j| {
        let special = p.pow(j) + 1;
        d.get(&special).is_some_and(|&m| m > 0)
            && d.iter().all(|(&l, &m)| p_power(l) || (l == special && m == 1))
    });
    ExcludedShape { literal, all_p_powers }
}

/// The bound `p^k` applies: `A` avoids the excluded shape (literal reading)
/// and has room for `k` independent elements.
pub fn schultz_bound_applicable(a: &FpGModule, k: u64) -> bool {
    !excluded_shape(a).literal && k <= a.multiplicity(a.group_order())
}
