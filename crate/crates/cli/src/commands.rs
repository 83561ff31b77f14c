use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use pgal::autoreal::{self, AutorealError, RealizationGraph};
use pgal::cohomology::{self, Cocycle2, CohomologyError};
use pgal::fpg::{self, FpGModule, FpgError, IInvariant, NormData, SolutionCount};
use pgal::group::{self, build_group, CatalogSpec, Group, GroupError, Subgroup};
use pgal::kummer::{self, KummerError, KummerTheorem};
use pgal::obstruction::{self, ClassInput, DiagonalForm, GFamily, MassyInput, ModularCase, ObstructionError};
use pgal::symbols::{ramified_places, splits_over_q, FieldElem, SymbolError, SymbolProduct};

/// Version of the JSON payload layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Obstruction(#[from] ObstructionError),
    #[error(transparent)]
    Kummer(#[from] KummerError),
    #[error(transparent)]
    Fpg(#[from] FpgError),
    #[error(transparent)]
    Autoreal(#[from] AutorealError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("bad JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Group(_) => "group",
            CliError::Cohomology(_) => "cohomology",
            CliError::Symbol(_) => "symbol",
            CliError::Obstruction(_) => "obstruction",
            CliError::Kummer(_) => "kummer",
            CliError::Fpg(_) => "fpg",
            CliError::Autoreal(_) => "autoreal",
            CliError::Io(_) => "io",
            CliError::Json(_) => "json",
            CliError::Input(_) => "input",
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub struct CommandResult {
    pub payload: Value,
    pub human: String,
}

fn done(payload: Value, human: impl Into<String>) -> Result<CommandResult> {
    Ok(CommandResult {
        payload,
        human: human.into(),
    })
}

#[derive(Parser, Debug)]
#[command(name = "pgal", version, about = "Central embedding problems of p-groups")]
pub struct Cli {
    /// Print the JSON payload only
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build and inspect catalog groups
    #[command(subcommand)]
    Groups(GroupsCmd),
    /// Enumerate H²(G, Z/p)
    H2(H2Args),
    /// Corestrict a cocycle from an index-2 subgroup
    Cor(CorArgs),
    /// Obstructions as products of cyclic algebra symbols
    #[command(subcommand)]
    Obstruct(ObstructCmd),
    /// Explicit Kummer solutions
    Solve(SolveArgs),
    /// Module-theoretic solvability and counting
    #[command(subcommand)]
    Schultz(SchultzCmd),
    /// Automatic realization queries
    #[command(subcommand)]
    Autoreal(AutorealCmd),
    /// Symbol algebra
    #[command(subcommand)]
    Symbol(SymbolCmd),
    /// Print the payload schema version
    Schema,
}

#[derive(Subcommand, Debug)]
pub enum GroupsCmd {
    /// Tabulate a catalog group
    Build {
        #[arg(long)]
        spec: String,
    },
    /// Structure invariants
    Info {
        #[arg(long)]
        spec: String,
    },
    /// Decide whether two groups are isomorphic
    Iso {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// A subgroup as a standalone group
    Subgroup {
        #[arg(long)]
        group: String,
        /// element indices, comma separated
        #[arg(long)]
        elements: String,
    },
}

#[derive(Args, Debug)]
pub struct H2Args {
    /// catalog spec or group JSON file
    #[arg(long)]
    group: String,
    #[arg(long)]
    p: u64,
    /// include one cocycle per class
    #[arg(long)]
    reps: bool,
}

#[derive(Args, Debug)]
pub struct CorArgs {
    #[arg(long)]
    group: String,
    /// element indices of the index-2 subgroup
    #[arg(long)]
    subgroup: String,
    /// cocycle JSON file on the subgroup
    #[arg(long)]
    cocycle: String,
    /// coset representative outside the subgroup (default: least)
    #[arg(long)]
    element: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum ObstructCmd {
    /// C_4 over k(√a)
    C4 {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// C_{p²} over the cyclic extension k(a^{1/p})
    Cp2 {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// Central extensions of (C_p)^n from d-data
    Massy {
        #[arg(long)]
        p: u64,
        /// Kummer generators, comma separated
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// entries `dij=v`, comma separated, 1-based, i ≤ j
        #[arg(long, default_value = "")]
        d: String,
    },
    /// Extensions with modular group quotient
    Modular {
        #[arg(long)]
        variant: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        a1: String,
        #[arg(long, allow_hyphen_values = true)]
        a2: String,
        /// crossed-product factor as a symbol expression
        #[arg(long, default_value = "[crossed]")]
        crossed: String,
    },
    /// G3, G4, G5 over C_{p²} × C_p
    Gfamily {
        #[arg(long)]
        family: String,
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        a1: String,
        #[arg(long, allow_hyphen_values = true)]
        a2: String,
        #[arg(long, default_value = "[cyc]")]
        cyc: String,
        #[arg(long)]
        zeta_p2: bool,
    },
    /// Hasse-Witt invariant of a diagonal form
    Hw {
        /// entries, comma separated
        #[arg(long, allow_hyphen_values = true)]
        form: String,
    },
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    p: u64,
    /// 4.1 … 4.5 (or G1 … G5)
    #[arg(long, conflicts_with = "tower")]
    theorem: Option<String>,
    /// tower solving E_i, 2 ≤ i ≤ p
    #[arg(long)]
    tower: Option<u64>,
    /// name used for the norm witness
    #[arg(long)]
    witness: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum SchultzCmd {
    /// Solvability and number of solutions
    Solve {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        /// summand lengths, comma separated
        #[arg(long, default_value = "")]
        summands: String,
        /// 𝔇 per index (pⁿ values) or per level (n + 1 values)
        #[arg(long)]
        dims: String,
        /// i(K/k): -inf or 0 … n−1
        #[arg(long, allow_hyphen_values = true)]
        ikk: String,
        #[arg(long, action = clap::ArgAction::Set, default_value_t = true)]
        finite: bool,
    },
    /// Gaussian binomial (n choose m)_p
    Binom {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long)]
        p: u64,
    },
    /// Solvability of E_2, …, E_p
    Ei {
        #[arg(long)]
        p: u64,
        #[arg(long, action = clap::ArgAction::Set)]
        norm: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum AutorealCmd {
    /// Search for G ⟹ H
    Query {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// extra JSON-lines records
        #[arg(long)]
        db: Option<String>,
    },
    /// Realization multiplicity lower bound
    Bound {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum SymbolCmd {
    /// Normalize a product and decide splitting over Q
    Eval {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
}

pub fn run(cli: Cli) -> Result<CommandResult> {
    match cli.command {
        Command::Groups(c) => groups(c),
        Command::H2(a) => h2(a),
        Command::Cor(a) => cor(a),
        Command::Obstruct(c) => obstruct(c),
        Command::Solve(a) => solve(a),
        Command::Schultz(c) => schultz(c),
        Command::Autoreal(c) => autoreal_cmd(c),
        Command::Symbol(c) => symbol_cmd(c),
        Command::Schema => done(json!({ "schema": SCHEMA_VERSION }), SCHEMA_VERSION.to_string()),
    }
}

/// A catalog spec, or a path to group JSON.
fn load_group(s: &str) -> Result<Arc<Group>> {
    if s.ends_with(".json") || Path::new(s).is_file() {
        let text = std::fs::read_to_string(s)?;
        return Ok(Arc::new(serde_json::from_str(&text)?));
    }
    let spec: CatalogSpec = s.parse()?;
    Ok(Arc::new(build_group(&spec)?))
}

fn index_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| CliError::Input(format!("bad index `{t}`")))
        })
        .collect()
}

fn elem(s: &str) -> Result<FieldElem> {
    Ok(s.parse()?)
}

fn elem_list(s: &str) -> Result<Vec<FieldElem>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(elem).collect()
}

fn groups(c: GroupsCmd) -> Result<CommandResult> {
    match c {
        GroupsCmd::Build { spec } => {
            let g = load_group(&spec)?;
            let gens: Vec<&str> = g.generators().iter().map(|n| n.name.as_str()).collect();
            done(
                serde_json::to_value(g.as_ref())?,
                format!("{spec}: order {}, generators {}", g.order(), gens.join(", ")),
            )
        }
        GroupsCmd::Info { spec } => {
            let g = load_group(&spec)?;
            let inv = group::structure_invariants(&g);
            let human = format!(
                "order {}, exponent {}, center of order {}, {} generators needed, abelian: {}",
                g.order(),
                inv.exponent,
                inv.center.order(),
                inv.min_generators,
                g.is_abelian()
            );
            let mut v = serde_json::to_value(&inv)?;
            v["order"] = json!(g.order());
            v["abelian"] = json!(g.is_abelian());
            done(v, human)
        }
        GroupsCmd::Iso { a, b } => {
            let iso = group::is_isomorphic(&*load_group(&a)?, &*load_group(&b)?)?;
            done(json!({ "isomorphic": iso }), iso.to_string())
        }
        GroupsCmd::Subgroup { group, elements } => {
            let g = load_group(&group)?;
            let h = Subgroup::new(&g, index_list(&elements)?)?;
            let (hg, _) = h.as_group(&g);
            done(serde_json::to_value(&hg)?, format!("subgroup of order {}", hg.order()))
        }
    }
}

fn h2(a: H2Args) -> Result<CommandResult> {
    let g = load_group(&a.group)?;
    let r = cohomology::h2_enumerate(&g, a.p)?;
    let mut v = json!({
        "p": r.p,
        "dimension": r.dimension,
        "classes": r.classes,
        "basis_only": r.basis_only,
    });
    if a.reps {
        v["representatives"] = serde_json::to_value(&r.representatives)?;
    }
    let human = format!(
        "H^2({}, Z/{}) has dimension {} ({} classes)",
        a.group, r.p, r.dimension, r.classes
    );
    done(v, human)
}

fn cor(a: CorArgs) -> Result<CommandResult> {
    let g = load_group(&a.group)?;
    let h = Subgroup::new(&g, index_list(&a.subgroup)?)?;
    let fbar: Cocycle2 = serde_json::from_str(&std::fs::read_to_string(&a.cocycle)?)?;
    let elt = match a.element {
        Some(e) => e,
        None => (0..g.order())
            .find(|&x| !h.contains(x))
            .ok_or_else(|| CliError::Input("subgroup is the whole group".into()))?,
    };
    let f = cohomology::corestrict_tate(&fbar, &g, &h, elt)?;
    let zero = f.cohomologous(&Cocycle2::zero(g.clone(), 2)?)?;
    let human = format!(
        "corestriction on a group of order {} (element {elt}); split: {zero}",
        g.order()
    );
    done(serde_json::to_value(&f)?, human)
}

/// `{class, splits_over_Q, symbol}`; splitting is only decided for `p = 2`
/// and fully rational entries.
fn class_payload(s: &SymbolProduct) -> (Value, String) {
    let splits = if s.p() == 2 { splits_over_q(s).ok() } else { None };
    let v = json!({
        "class": s.to_string(),
        "splits_over_Q": splits,
        "symbol": s,
    });
    let human = match splits {
        Some(b) => format!("{s}\nsplits over Q: {b}"),
        None => s.to_string(),
    };
    (v, human)
}

/// `d12=1,d22=0` into an upper triangular matrix.
fn parse_d(s: &str, n: usize, p: u64) -> Result<Vec<Vec<u64>>> {
    let mut d = vec![vec![0u64; n]; n];
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let bad = || CliError::Input(format!("bad d entry `{item}`"));
        let (key, val) = item.split_once('=').ok_or_else(bad)?;
        let key = key.trim().strip_prefix('d').ok_or_else(bad)?;
        let (i, j): (usize, usize) = match key.split_once('_') {
            Some((i, j)) => (i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?),
            None if key.len() == 2 => (key[..1].parse().map_err(|_| bad())?, key[1..].parse().map_err(|_| bad())?),
            None => return Err(bad()),
        };
        if i == 0 || j == 0 || i > n || j > n || i > j {
            return Err(bad());
        }
        let v: i64 = val.trim().parse().map_err(|_| bad())?;
        d[i - 1][j - 1] = v.rem_euclid(p as i64) as u64;
    }
    Ok(d)
}

fn class_input(s: &str, p: u64) -> Result<ClassInput> {
    Ok(ClassInput::Known(SymbolProduct::parse(p, s)?))
}

fn obstruct(c: ObstructCmd) -> Result<CommandResult> {
    let s = match c {
        ObstructCmd::C4 { a } => obstruction::obstruction_c4(&elem(&a)?)?,
        ObstructCmd::Cp2 { p, a } => obstruction::obstruction_cp2(&elem(&a)?, p)?,
        ObstructCmd::Massy { p, a, d } => {
            let a = elem_list(&a)?;
            let d = parse_d(&d, a.len(), p)?;
            obstruction::massy(&MassyInput { p, a, d })?
        }
        ObstructCmd::Modular {
            variant,
            p,
            n,
            a1,
            a2,
            crossed,
        } => {
            let case: ModularCase = variant.parse()?;
            obstruction::modular_obstruction(case, p, n, &elem(&a1)?, &elem(&a2)?, &class_input(&crossed, p)?)?
        }
        ObstructCmd::Gfamily {
            family,
            p,
            a1,
            a2,
            cyc,
            zeta_p2,
        } => {
            let fam: GFamily = family.parse()?;
            obstruction::g_family_obstruction(fam, p, &elem(&a1)?, &elem(&a2)?, &class_input(&cyc, p)?, zeta_p2)?
        }
        ObstructCmd::Hw { form } => obstruction::hasse_witt(&DiagonalForm::new(elem_list(&form)?)?)?,
    };
    let (v, human) = class_payload(&s);
    done(v, human)
}

fn solve(a: SolveArgs) -> Result<CommandResult> {
    let expr = match (a.theorem, a.tower) {
        (Some(t), _) => {
            let theorem: KummerTheorem = t.parse()?;
            let role = theorem.witness_role();
            let name = a.witness.unwrap_or_else(|| role.to_string());
            kummer::build_solution(theorem, a.p, &BTreeMap::from([(role.to_string(), name)]))?
        }
        (None, Some(i)) => kummer::minac_swallow_solution(a.p, i, a.witness.as_deref().unwrap_or("omega"))?,
        (None, None) => return Err(CliError::Input("give --theorem or --tower".into())),
    };
    let human = expr.to_string();
    done(serde_json::to_value(&expr)?, human)
}

fn schultz(c: SchultzCmd) -> Result<CommandResult> {
    match c {
        SchultzCmd::Solve {
            p,
            n,
            summands,
            dims,
            ikk,
            finite,
        } => {
            let lengths: Vec<u64> = index_list(&summands)?.into_iter().map(|x| x as u64).collect();
            let a = FpGModule::from_summands(p, n, &lengths)?;
            let dims: Vec<u64> = index_list(&dims)?.into_iter().map(|x| x as u64).collect();
            let ikk: IInvariant = ikk.parse()?;
            let nd = NormData::new(p, n, &dims, ikk, finite)?;
            let ok = fpg::solvable(&a, &nd)?;
            let deltas: Vec<u64> = (1..=a.group_order() + 1)
                .map(|i| fpg::delta(&a, i))
                .collect::<std::result::Result<_, _>>()?;
            let count = if ok { Some(fpg::count_solutions(&a, &nd)?) } else { None };
            let diagnostics = fpg::count_diagnostics(&a, &nd)?;
            let human = match &count {
                Some(c) => format!("solvable; solutions: {c}"),
                None => "not solvable".to_string(),
            };
            let count_v = match &count {
                Some(SolutionCount::Finite(c)) => json!(c.to_string()),
                Some(SolutionCount::Infinite) => json!("infinite"),
                None => Value::Null,
            };
            done(
                json!({
                    "solvable": ok,
                    "count": count_v,
                    "deltas": deltas,
                    "dims": nd.dims(),
                    "diagnostics": diagnostics,
                }),
                human,
            )
        }
        SchultzCmd::Binom { n, m, p } => {
            let b = fpg::p_binomial(n, m, p);
            done(json!({ "value": b.to_string() }), b.to_string())
        }
        SchultzCmd::Ei { p, norm } => {
            let v = fpg::ei_solvability(p, norm);
            let human = v
                .iter()
                .enumerate()
                .map(|(k, b)| format!("E_{}: {b}", k + 2))
                .collect::<Vec<_>>()
                .join("\n");
            done(json!({ "solvable": v }), human)
        }
    }
}

fn autoreal_cmd(c: AutorealCmd) -> Result<CommandResult> {
    match c {
        AutorealCmd::Query { from, to, db } => {
            let mut g = RealizationGraph::builtin();
            if let Some(path) = db {
                g.extend_jsonl(&std::fs::read_to_string(path)?)?;
            }
            let r = g.implies(&from, &to)?;
            let mut human = format!("{from} => {to}: {}", r.holds);
            for e in &r.path {
                human.push_str(&format!("\n  {} => {} [{}]", e.from, e.to, e.cite));
            }
            if let Some(why) = &r.reason {
                human.push_str(&format!("\n  {why}"));
            }
            done(serde_json::to_value(&r)?, human)
        }
        AutorealCmd::Bound { p, n, k } => {
            let b = autoreal::multiplicity_bound(p, n, k)?;
            let human = format!("nu({}) >= {}", b.group, b.bound);
            done(serde_json::to_value(&b)?, human)
        }
    }
}

fn symbol_cmd(c: SymbolCmd) -> Result<CommandResult> {
    match c {
        SymbolCmd::Eval { p, expr } => {
            let s = SymbolProduct::parse(p, &expr)?.normalize();
            let (mut v, mut human) = class_payload(&s);
            v["trivial"] = json!(s.is_trivial());
            if p == 2 {
                if let Ok(places) = ramified_places(&s) {
                    let names: Vec<String> = places.iter().map(|q| q.to_string()).collect();
                    human.push_str(&format!("\nramified at: [{}]", names.join(", ")));
                    v["ramified"] = json!(names);
                }
            }
            done(v, human)
        }
    }
}
