//! The named group families and their spec strings.
//!
//! | spec | group |
//! |------|-------|
//! | `C:n` | cyclic of order `n` |
//! | `E:p=2,r=3` | elementary abelian `(C_p)^r` |
//! | `D:2^n`, `SD:2^n`, `Q:2^n`, `M:2^n` | the 2-groups with a cyclic subgroup of index 2 |
//! | `G1:p=3` … `G7:p=3` | the groups of order `p³` and `p⁴` |
//! | `Mmod:p=3,n=3` | the modular `p`-group `M(pⁿ)` |
//! | `Mext:v=1z,p=3,n=3` | the extensions `G_{1,ζ}`, `G_{ζ,1}` (`z1`), `G_{ζ,ζ}` (`zz`) of `M(pⁿ)` |
//! | `MSS:p=3,n=1,j=2` | `F_p[C_{pⁿ}]/(σ−1)^j ⋊ C_{pⁿ}` |
//! | `AxB` | direct product |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::pc::{tabulate, PcPresentation, Word};
use super::{Group, GroupError, NamedGenerator, Result, MAX_ORDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModularVariant {
    /// `G_{1,ζ}`: `yx = x^{q+1} y z`, `z` central of order `p`.
    OneZeta,
    /// `G_{ζ,1}`: `y` of order `p²`, `yx = x^{q+1} y`.
    ZetaOne,
    /// `G_{ζ,ζ}`: `y` of order `p²`, `yx = x^{q+1} y^{p+1}`.
    ZetaZeta,
}

impl ModularVariant {
    fn code(self) -> &'static str {
        match self {
            ModularVariant::OneZeta => "1z",
            ModularVariant::ZetaOne => "z1",
            ModularVariant::ZetaZeta => "zz",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CatalogSpec {
    Cyclic(u64),
    ElemAbelian { p: u64, r: u32 },
    Dihedral(u64),
    SemiDihedral(u64),
    Quaternion(u64),
    Modular2(u64),
    Heisenberg { p: u64 },
    G2 { p: u64 },
    G3 { p: u64 },
    G4 { p: u64 },
    G5 { p: u64 },
    G6 { p: u64 },
    G7 { p: u64 },
    ModularM { p: u64, n: u32 },
    ModularExt { variant: ModularVariant, p: u64, n: u32 },
    Mss { p: u64, n: u32, j: u64 },
    DirectProduct(Vec<CatalogSpec>),
}

impl fmt::Display for CatalogSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CatalogSpec::*;
        match self {
            Cyclic(n) => write!(f, "C:{n}"),
            ElemAbelian { p, r } => write!(f, "E:p={p},r={r}"),
            Dihedral(n) => write!(f, "D:{n}"),
            SemiDihedral(n) => write!(f, "SD:{n}"),
            Quaternion(n) => write!(f, "Q:{n}"),
            Modular2(n) => write!(f, "M:{n}"),
            Heisenberg { p } => write!(f, "G1:p={p}"),
            G2 { p } => write!(f, "G2:p={p}"),
            G3 { p } => write!(f, "G3:p={p}"),
            G4 { p } => write!(f, "G4:p={p}"),
            G5 { p } => write!(f, "G5:p={p}"),
            G6 { p } => write!(f, "G6:p={p}"),
            G7 { p } => write!(f, "G7:p={p}"),
            ModularM { p, n } => write!(f, "Mmod:p={p},n={n}"),
            ModularExt { variant, p, n } => write!(f, "Mext:v={},p={p},n={n}", variant.code()),
            Mss { p, n, j } => write!(f, "MSS:p={p},n={n},j={j}"),
            DirectProduct(parts) => {
                for (i, s) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("x")?;
                    }
                    write!(f, "{s}")?;
                }
                Ok(())
            }
        }
    }
}

fn params(body: &str) -> Result<Vec<(String, String)>> {
    body.split(',')
        .filter(|s| !s.is_empty())
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| GroupError::InvalidParameter(format!("expected key=value in `{kv}`")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn get<T: FromStr>(ps: &[(String, String)], key: &str) -> Result<T> {
    let v = ps
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v)
        .ok_or_else(|| GroupError::InvalidParameter(format!("missing parameter `{key}`")))?;
    v.parse()
        .map_err(|_| GroupError::InvalidParameter(format!("bad value `{v}` for `{key}`")))
}

fn num<T: FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| GroupError::InvalidParameter(format!("bad number `{s}`")))
}

impl FromStr for CatalogSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parts = split_product(s);
        if parts.len() > 1 {
            return Ok(CatalogSpec::DirectProduct(
                parts.iter().map(|p| p.parse()).collect::<Result<_>>()?,
            ));
        }
        let (family, body) = s.split_once(':').unwrap_or((s, ""));
        let ps = || params(body);
        use CatalogSpec::*;
        Ok(match family.trim() {
            "C" => Cyclic(num(body)?),
            "E" => {
                let ps = ps()?;
                ElemAbelian {
                    p: get(&ps, "p")?,
                    r: get(&ps, "r")?,
                }
            }
            "D" => Dihedral(num(body)?),
            "SD" => SemiDihedral(num(body)?),
            "Q" => Quaternion(num(body)?),
            "M" => Modular2(num(body)?),
            "G1" => Heisenberg { p: get(&ps()?, "p")? },
            "G2" => G2 { p: get(&ps()?, "p")? },
            "G3" => G3 { p: get(&ps()?, "p")? },
            "G4" => G4 { p: get(&ps()?, "p")? },
            "G5" => G5 { p: get(&ps()?, "p")? },
            "G6" => G6 { p: get(&ps()?, "p")? },
            "G7" => G7 { p: get(&ps()?, "p")? },
            "Mmod" => {
                let ps = ps()?;
                ModularM {
                    p: get(&ps, "p")?,
                    n: get(&ps, "n")?,
                }
            }
            "Mext" => {
                let ps = ps()?;
                let v: String = get(&ps, "v")?;
                let variant = match v.as_str() {
                    "1z" => ModularVariant::OneZeta,
                    "z1" => ModularVariant::ZetaOne,
                    "zz" => ModularVariant::ZetaZeta,
                    _ => return Err(GroupError::InvalidParameter(format!("variant `{v}`"))),
                };
                ModularExt {
                    variant,
                    p: get(&ps, "p")?,
                    n: get(&ps, "n")?,
                }
            }
            "MSS" => {
                let ps = ps()?;
                Mss {
                    p: get(&ps, "p")?,
                    n: get(&ps, "n")?,
                    j: get(&ps, "j")?,
                }
            }
            other => return Err(GroupError::UnknownFamily(other.to_string())),
        })
    }
}

/// Splits `AxB` at every `x` that starts a new family name.
fn split_product(s: &str) -> Vec<&str> {
    let bytes = s.as_bytes();
    let mut parts = Vec::new();
    let mut start = 0;
    for i in 0..bytes.len() {
        if bytes[i] == b'x' && bytes.get(i + 1).is_some_and(|c| c.is_ascii_uppercase()) {
            parts.push(&s[start..i]);
            start = i + 1;
        }
    }
    parts.push(&s[start..]);
    parts
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn need_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(GroupError::InvalidParameter(format!("{p} is not prime")))
    }
}

/// Exponent `n` with `order = 2^n`, requiring `n >= min`.
fn two_power(order: u64, min: u32) -> Result<u32> {
    if order.is_power_of_two() && order.trailing_zeros() >= min {
        Ok(order.trailing_zeros())
    } else {
        Err(GroupError::InvalidParameter(format!(
            "order {order} must be 2^n with n >= {min}"
        )))
    }
}

fn checked_pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .filter(|&v| v <= MAX_ORDER as u64)
        .ok_or(GroupError::OrderTooLarge(usize::MAX))
}

fn inverse_mod(a: i64, m: i64) -> i64 {
    (0..m).find(|&x| (a * x).rem_euclid(m) == 1 % m).unwrap_or(1)
}

impl CatalogSpec {
    /// Order of the group the spec describes, without building it.
    pub fn order(&self) -> Result<u64> {
        use CatalogSpec::*;
        let checked = |v: Option<u64>| v.ok_or(GroupError::OrderTooLarge(usize::MAX));
        Ok(match self {
            Cyclic(n) => *n,
            ElemAbelian { p, r } => checked(p.checked_pow(*r))?,
            Dihedral(n) | SemiDihedral(n) | Quaternion(n) | Modular2(n) => *n,
            Heisenberg { p } | G2 { p } => checked(p.checked_pow(3))?,
            G3 { p } | G4 { p } | G5 { p } | G6 { p } | G7 { p } => checked(p.checked_pow(4))?,
            ModularM { p, n } => checked(p.checked_pow(*n))?,
            ModularExt { p, n, .. } => checked(p.checked_pow(n + 1))?,
            Mss { p, n, j } => {
                let j32 = u32::try_from(*j).map_err(|_| GroupError::OrderTooLarge(usize::MAX))?;
                checked(p.checked_pow(n + j32))?
            }
            DirectProduct(parts) => {
                let mut acc: u64 = 1;
                for s in parts {
                    acc = checked(acc.checked_mul(s.order()?))?;
                }
                acc
            }
        })
    }
}

/// Builds the group named by a catalog spec.
pub fn build_group(spec: &CatalogSpec) -> Result<Group> {
    let order = spec.order()?;
    if order > MAX_ORDER as u64 {
        return Err(GroupError::OrderTooLarge(order.min(usize::MAX as u64) as usize));
    }
    use CatalogSpec::*;
    match spec {
        Cyclic(n) => {
            if *n == 0 {
                return Err(GroupError::InvalidParameter("cyclic order 0".into()));
            }
            if *n == 1 {
                return Ok(Group::trivial());
            }
            tabulate(&PcPresentation::new(vec![*n as u32]), &[("g", vec![(0, 1)])])
        }
        ElemAbelian { p, r } => {
            need_prime(*p)?;
            let pres = PcPresentation::new(vec![*p as u32; *r as usize]);
            let names: Vec<String> = (1..=*r).map(|i| format!("e{i}")).collect();
            let named: Vec<(&str, Word)> = names
                .iter()
                .enumerate()
                .map(|(i, s)| (s.as_str(), vec![(i, 1)]))
                .collect();
            tabulate(&pres, &named)
        }
        Dihedral(n) => {
            let e = two_power(*n, 2)?;
            metacyclic(1 << (e - 1), 2, 0, -1, ("sigma", "tau"))
        }
        SemiDihedral(n) => {
            let e = two_power(*n, 4)?;
            let m = 1i64 << (e - 1);
            // r = 2^{n-2} - 1 is its own inverse mod 2^{n-1}
            metacyclic(m as u64, 2, 0, (1 << (e - 2)) - 1, ("sigma", "tau"))
        }
        Quaternion(n) => {
            let e = two_power(*n, 3)?;
            metacyclic(1 << (e - 1), 2, 1 << (e - 2), -1, ("sigma", "tau"))
        }
        Modular2(n) => {
            let e = two_power(*n, 4)?;
            metacyclic(1 << (e - 1), 2, 0, (1 << (e - 2)) + 1, ("sigma", "tau"))
        }
        Heisenberg { p } => {
            need_prime(*p)?;
            let pr = *p as u32;
            let pres = PcPresentation::new(vec![pr, pr, pr]).conjugate(0, 1, vec![(1, 1), (2, -1)]);
            tabulate(
                &pres,
                &[("g1", vec![(0, 1)]), ("g2", vec![(1, 1)]), ("g3", vec![(2, 1)])],
            )
        }
        G2 { p } => {
            need_prime(*p)?;
            // pc order g2, g1 with g2^{-1} g1 g2 = g1^{p+1}
            let pres = PcPresentation::new(vec![*p as u32, (*p * *p) as u32])
                .conjugate(0, 1, vec![(1, *p as i64 + 1)]);
            tabulate(&pres, &[("g1", vec![(1, 1)]), ("g2", vec![(0, 1)])])
        }
        G3 { p } => order_p4(*p, [Some(3), None, None, None], (2, vec![(1, 1), (2, 1)])),
        G4 { p } => order_p4(*p, [Some(3), Some(2), None, None], (2, vec![(1, 1), (2, 1)])),
        G5 { p } => order_p4(*p, [Some(2), None, Some(3), None], (3, vec![(1, 1), (3, 1)])),
        G6 { p } => order_p4(*p, [None, None, Some(3), None], (3, vec![(1, 1), (3, 1)])),
        G7 { p } => {
            need_prime(*p)?;
            let pr = *p as u32;
            // pc order mu, lambda, tau, sigma
            let pres = PcPresentation::new(vec![pr; 4])
                .conjugate(0, 1, vec![(1, 1), (2, -1)])
                .conjugate(0, 2, vec![(2, 1), (3, -1)]);
            tabulate(
                &pres,
                &[
                    ("sigma", vec![(3, 1)]),
                    ("tau", vec![(2, 1)]),
                    ("lambda", vec![(1, 1)]),
                    ("mu", vec![(0, 1)]),
                ],
            )
        }
        ModularM { p, n } => {
            need_prime(*p)?;
            if *n < 3 {
                return Err(GroupError::InvalidParameter("M(p^n) needs n >= 3".into()));
            }
            let m = checked_pow(*p, n - 1)?;
            let q = checked_pow(*p, n - 2)? as i64;
            metacyclic(m, *p, 0, 1 + q, ("alpha", "beta"))
        }
        ModularExt { variant, p, n } => modular_ext(*variant, *p, *n),
        Mss { p, n, j } => mss(*p, *n, *j),
        DirectProduct(parts) => {
            let mut acc = Group::trivial();
            let mut first = true;
            for (i, s) in parts.iter().enumerate() {
                let g = build_group(s)?;
                acc = if first {
                    first = false;
                    rename(g, i + 1)
                } else {
                    direct_product(&acc, &rename(g, i + 1))?
                };
            }
            Ok(acc)
        }
    }
}

fn rename(g: Group, factor: usize) -> Group {
    let gens = g
        .generators()
        .iter()
        .map(|ng| NamedGenerator {
            name: format!("{factor}.{}", ng.name),
            index: ng.index,
        })
        .collect();
    g.with_generators(gens)
}

/// Direct product with lexicographic element order `(a, b) ↦ a·|B| + b`.
pub(crate) fn direct_product(a: &Group, b: &Group) -> Result<Group> {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    if n > MAX_ORDER {
        return Err(GroupError::OrderTooLarge(n));
    }
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        let (xa, xb) = (x / nb, x % nb);
        for y in 0..n {
            let (ya, yb) = (y / nb, y % nb);
            table.push((a.mul(xa, ya) * nb + b.mul(xb, yb)) as u16);
        }
    }
    let mut gens: Vec<NamedGenerator> = a
        .generators()
        .iter()
        .map(|g| NamedGenerator {
            name: g.name.clone(),
            index: g.index * nb,
        })
        .collect();
    gens.extend(b.generators().iter().map(|g| NamedGenerator {
        name: g.name.clone(),
        index: g.index,
    }));
    Group::from_raw(n, table, gens)
}

/// `⟨σ, τ | σ^m = 1, τ^k = σ^s, τσ = σ^r τ⟩`, normal form `τ^a σ^b`.
fn metacyclic(m: u64, k: u64, s: i64, r: i64, names: (&str, &str)) -> Result<Group> {
    let mi = m as i64;
    let conj = inverse_mod(r.rem_euclid(mi), mi);
    let mut pres = PcPresentation::new(vec![k as u32, m as u32]);
    if conj % mi != 1 % mi {
        pres = pres.conjugate(0, 1, vec![(1, conj)]);
    }
    if s.rem_euclid(mi) != 0 {
        pres = pres.power(0, vec![(1, s.rem_euclid(mi))]);
    }
    tabulate(&pres, &[(names.0, vec![(1, 1)]), (names.1, vec![(0, 1)])])
}

/// The order-`p⁴` groups on `g1..g4`, all of relative order `p`.
/// `powers[i] = Some(j)` encodes `g_{i+1}^p = g_{j+1}`; the single
/// non-trivial conjugation is `g1^{-1} g2 g1 = g2 · g_c`.
fn order_p4(p: u64, powers: [Option<usize>; 4], comm: (usize, Word)) -> Result<Group> {
    need_prime(p)?;
    let mut pres = PcPresentation::new(vec![p as u32; 4]);
    for (i, t) in powers.iter().enumerate() {
        if let Some(j) = t {
            pres = pres.power(i, vec![(*j, 1)]);
        }
    }
    let (_, word) = comm;
    pres = pres.conjugate(0, 1, word);
    tabulate(
        &pres,
        &[
            ("g1", vec![(0, 1)]),
            ("g2", vec![(1, 1)]),
            ("g3", vec![(2, 1)]),
            ("g4", vec![(3, 1)]),
        ],
    )
}

fn modular_ext(variant: ModularVariant, p: u64, n: u32) -> Result<Group> {
    need_prime(p)?;
    if n < 3 {
        return Err(GroupError::InvalidParameter("M(p^n) extensions need n >= 3".into()));
    }
    let m = checked_pow(p, n - 1)?;
    let q = checked_pow(p, n - 2)? as i64;
    let mi = m as i64;
    let a = inverse_mod(q + 1, mi);
    match variant {
        ModularVariant::ZetaOne => metacyclic(m, p * p, 0, q + 1, ("x", "y")),
        ModularVariant::OneZeta | ModularVariant::ZetaZeta => {
            // pc order y, x, z with y^{-1} x y = x^{(q+1)^{-1}} z^{-1}
            let mut pres = PcPresentation::new(vec![p as u32, m as u32, p as u32])
                .conjugate(0, 1, vec![(1, a), (2, -1)]);
            if variant == ModularVariant::ZetaZeta {
                pres = pres.power(0, vec![(2, 1)]);
            }
            let mut named = vec![("x", vec![(1, 1)]), ("y", vec![(0, 1)])];
            if variant == ModularVariant::OneZeta {
                named.push(("z", vec![(2, 1)]));
            }
            tabulate(&pres, &named)
        }
    }
}

/// `F_p[C_{pⁿ}]/(σ−1)^j ⋊ C_{pⁿ}` on the basis `(σ−1)^i`, `i < j`.
fn mss(p: u64, n: u32, j: u64) -> Result<Group> {
    need_prime(p)?;
    let pn = checked_pow(p, n)?;
    if j == 0 || j > pn {
        return Err(GroupError::InvalidParameter(format!("need 1 <= j <= p^n = {pn}")));
    }
    let j = j as usize;
    // action of σ: e_i ↦ e_i + e_{i+1}; we need σ^{-1} = σ^{pⁿ-1}
    let step = |v: &Vec<u64>| {
        let mut w = v.clone();
        for i in 1..j {
            w[i] = (w[i] + v[i - 1]) % p;
        }
        w
    };
    let mut rel = vec![pn as u32];
    rel.extend(std::iter::repeat_n(p as u32, j));
    let mut pres = PcPresentation::new(rel);
    for i in 0..j {
        let mut v = vec![0u64; j];
        v[i] = 1;
        for _ in 0..pn - 1 {
            v = step(&v);
        }
        let word: Word = v
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(t, &c)| (t + 1, c as i64))
            .collect();
        if word != vec![(i + 1, 1)] {
            pres = pres.conjugate(0, i + 1, word);
        }
    }
    tabulate(&pres, &[("sigma", vec![(0, 1)]), ("a", vec![(1, 1)])])
}
