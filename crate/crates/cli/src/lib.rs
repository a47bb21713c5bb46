//! Subcommands of the `invalg` binary.
//!
//! Every command returns a JSON value whose maps have sorted keys, so the
//! printed bytes depend only on the input, tolerance and seed.

use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use invalg::classify::{self, Enumeration};
use invalg::ideals::{self, Side, SubspaceOfV};
use invalg::json::{self as ij, JsonMatrix};
use invalg::linalg::CMat;
use invalg::matalg::InvariantSubalgebra;
use invalg::rep::{self, Representation};
use invalg::subspace::MatrixSubspace;
use invalg::{catalog, factor, lie, Error, Result};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "invalg",
    version,
    about = "Group-invariant ideals and subalgebras of End(V)"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = invalg::DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for the randomized steps.
    #[arg(long, global = true, default_value_t = invalg::DEFAULT_SEED)]
    pub seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the representation axioms and report basic structure.
    Validate { input: String },
    /// Invariant left and right ideals of End(V).
    Ideals {
        input: String,
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
    },
    /// Unital invariant subalgebras of End(V).
    Subalgebras {
        input: String,
        /// Also run the structural checks on every subalgebra.
        #[arg(long)]
        verify: bool,
    },
    /// Central simple invariant subalgebras and their tensor factorizations.
    Factor { input: String },
    /// Irreducible highest-weight modules and their invariant subalgebras.
    Lie {
        /// Factor types, e.g. `A1xA1` or `G2`.
        #[arg(long = "type")]
        types: String,
        /// Highest weights, one bracketed list per factor: `[1];[1]`.
        #[arg(long)]
        weights: String,
    },
    /// List the built-in groups and representations.
    Catalog {
        /// Print the JSON form of one entry, or of every entry with `all`.
        #[arg(long)]
        export: Option<String>,
    },
}

/// `catalog:KEY:REP`, or a path to a JSON file with `group` and
/// `representation`.
pub fn load_input(input: &str) -> Result<Representation> {
    if input.starts_with("catalog:") || !Path::new(input).exists() {
        return catalog::resolve(input).map(|(_, r)| r);
    }
    let text =
        std::fs::read_to_string(input).map_err(|e| Error::InvalidInput(format!("{input}: {e}")))?;
    ij::parse_input(&text).map(|(_, r)| r)
}

/// Round to twelve decimals so output bytes do not carry last-bit noise.
fn round(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    r + 0.0
}

fn matrix(m: &CMat) -> JsonMatrix {
    ij::matrix_to_json(m)
        .into_iter()
        .map(|row| row.into_iter().map(|[a, b]| [round(a), round(b)]).collect())
        .collect()
}

fn vectors(s: &SubspaceOfV) -> Vec<Vec<[f64; 2]>> {
    let b = s.basis();
    (0..b.ncols())
        .map(|k| {
            b.column(k)
                .iter()
                .map(|z| [round(z.re), round(z.im)])
                .collect()
        })
        .collect()
}

fn basis(s: &MatrixSubspace) -> Vec<JsonMatrix> {
    s.matrices().iter().map(matrix).collect()
}

fn header(command: &str, common: &Common) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m.insert("tol".into(), json!(common.tol));
    m.insert("seed".into(), json!(common.seed));
    m
}

fn is_irreducible(v: &Representation, tol: f64) -> Result<bool> {
    Ok(rep::equivariant_hom_space(v, v, tol)?.len() == 1)
}

pub fn cmd_validate(input: &str, common: &Common) -> Result<Value> {
    with_input(input, validate_report(&load_input(input)?, common))
}

fn with_input(input: &str, report: Result<serde_json::Map<String, Value>>) -> Result<Value> {
    let mut out = report?;
    out.insert("input".into(), json!(input));
    Ok(Value::Object(out))
}

pub fn validate_report(
    v: &Representation,
    common: &Common,
) -> Result<serde_json::Map<String, Value>> {
    let report = v.validate(common.tol)?;
    let mut out = header("validate", common);
    out.insert("order".into(), json!(v.group().order()));
    out.insert("dim".into(), json!(v.dim()));
    out.insert("linear".into(), json!(v.is_linear()));
    out.insert("max_deviation".into(), json!(report.max_deviation));
    out.insert(
        "worst_pair".into(),
        json!([report.worst_pair.0, report.worst_pair.1]),
    );
    out.insert("unitary".into(), json!(report.unitary));
    out.insert("irreducible".into(), json!(is_irreducible(v, common.tol)?));
    if v.is_linear() {
        let comps = v.isotypic_decomposition(common.tol)?;
        let comps: Vec<Value> = comps
            .iter()
            .map(|c| json!({"irrep": c.irrep, "irrep_dim": c.irrep_dim, "multiplicity": c.multiplicity}))
            .collect();
        out.insert("isotypic".into(), Value::Array(comps));
    }
    Ok(out)
}

pub fn cmd_ideals(input: &str, side: SideArg, common: &Common) -> Result<Value> {
    with_input(input, ideals_report(&load_input(input)?, side, common))
}

pub fn ideals_report(
    v: &Representation,
    side: SideArg,
    common: &Common,
) -> Result<serde_json::Map<String, Value>> {
    v.validate(common.tol)?;
    let sides: &[Side] = match side {
        SideArg::Left => &[Side::Left],
        SideArg::Right => &[Side::Right],
        SideArg::Both => &[Side::Left, Side::Right],
    };
    let mut out = header("ideals", common);
    out.insert("dim".into(), json!(v.dim()));
    for &s in sides {
        let list = ideals::invariant_ideals(v, s, common.tol)?;
        let items: Vec<Value> = list
            .iter()
            .map(|i| {
                json!({
                    "side": i.side,
                    "dim": i.dim(),
                    "basis": basis(&i.space),
                    "source": {"dim": i.source.dim(), "basis": vectors(&i.source)},
                })
            })
            .collect();
        out.insert(format!("{}_count", s.name()), json!(items.len()));
        out.insert(s.name().into(), Value::Array(items));
    }
    Ok(out)
}

fn subalgebra_json(alg: &InvariantSubalgebra, tol: f64) -> Value {
    json!({
        "dim": alg.dim(),
        "basis": basis(&alg.space),
        "component_dims": alg.component_dims,
        "multiplicities": alg.multiplicities,
        "num_components": alg.num_components(),
        "unital": alg.unital,
        "simple": alg.is_simple(),
        "central_simple": factor::is_central_simple(&alg.space, tol),
        "induction_datum": alg.induction_datum,
    })
}

pub fn enumeration_json(
    v: &Representation,
    en: &Enumeration,
    common: &Common,
) -> Result<serde_json::Map<String, Value>> {
    let mut out = serde_json::Map::new();
    out.insert("dim".into(), json!(v.dim()));
    if !v.is_linear() {
        // Induction data then refer to the cover's element indices.
        out.insert(
            "linear_cover_order".into(),
            json!(classify::linear_cover(v)?.group().order()),
        );
    }
    out.insert("count".into(), json!(en.len()));
    out.insert("dims".into(), json!(en.dims()));
    out.insert("complete".into(), json!(en.complete));
    out.insert("closure_added".into(), json!(en.closure_added));
    out.insert(
        "subalgebras".into(),
        en.subalgebras
            .iter()
            .map(|a| subalgebra_json(a, common.tol))
            .collect(),
    );
    let (list, certified) = classify::oracle(v, common.tol)?;
    out.insert(
        "oracle".into(),
        json!({"certified": certified, "count": list.len(), "agrees": classify::same_subspaces(en, &list)}),
    );
    Ok(out)
}

pub fn cmd_subalgebras(input: &str, verify: bool, common: &Common) -> Result<Value> {
    with_input(
        input,
        subalgebras_report(&load_input(input)?, verify, common),
    )
}

pub fn subalgebras_report(
    v: &Representation,
    verify: bool,
    common: &Common,
) -> Result<serde_json::Map<String, Value>> {
    v.validate(common.tol)?;
    let en = classify::enumerate_invariant_subalgebras(v, common.seed, common.tol)?;
    let mut out = header("subalgebras", common);
    out.extend(enumeration_json(v, &en, common)?);
    if verify {
        let report = classify::verify_classification(v, &en, common.seed, common.tol);
        out.insert("verification".into(), json!(report));
    }
    Ok(out)
}

fn cocycle_table(r: &Representation) -> Vec<Vec<[f64; 2]>> {
    let n = r.group().order();
    (0..n)
        .map(|g| {
            (0..n)
                .map(|h| {
                    let z = r.cocycle_value(g, h);
                    [round(z.re), round(z.im)]
                })
                .collect()
        })
        .collect()
}

pub fn cmd_factor(input: &str, common: &Common) -> Result<Value> {
    with_input(input, factor_report(&load_input(input)?, common))
}

pub fn factor_report(
    w: &Representation,
    common: &Common,
) -> Result<serde_json::Map<String, Value>> {
    w.validate(common.tol)?;
    let d = w.dim();
    let (list, certified) = factor::central_simple_invariant_subalgebras(w, common.tol)?;
    let mut pairs = Vec::new();
    for b in list.iter().filter(|b| b.dim() > 1 && b.dim() < d * d) {
        let f = factor::extract_factorization(b, w, common.seed, common.tol)?;
        pairs.push(json!({
            "dims": [f.b.dim(), f.z.dim()],
            "factor_dims": [f.a_dim, f.b_dim],
            "sigma": f.sigma.matrices().iter().map(matrix).collect::<Vec<_>>(),
            "tau": f.tau.matrices().iter().map(matrix).collect::<Vec<_>>(),
            "sigma_cocycle": cocycle_table(&f.sigma),
            "tau_cocycle": cocycle_table(&f.tau),
            "scalars": f.scalars.iter().map(|z| [round(z.re), round(z.im)]).collect::<Vec<_>>(),
            "basis_change": matrix(&f.basis_change),
            "residual": f.residual,
            "cocycle_deviation": f.cocycle_deviation(w),
        }));
    }
    let mut out = header("factor", common);
    out.insert("dim".into(), json!(d));
    out.insert("certified".into(), json!(certified));
    out.insert(
        "central_simple_dims".into(),
        json!(list.iter().map(MatrixSubspace::dim).collect::<Vec<_>>()),
    );
    out.insert("factorizations".into(), Value::Array(pairs));
    Ok(out)
}

pub fn cmd_lie(types: &str, weights: &str, common: &Common) -> Result<Value> {
    let factors = lie::parse_factors(types, weights)?;
    let cls = lie::etingof_enumerate(&factors)?;
    let mut out = header("lie", common);
    out.insert("type".into(), json!(types));
    out.insert("weights".into(), json!(weights));
    let fs: Vec<Value> = factors
        .iter()
        .zip(&cls.factor_dims)
        .map(|((s, w), dim)| json!({"type": s.to_string(), "weights": w.coords, "dim": dim.to_string()}))
        .collect();
    out.insert("factors".into(), Value::Array(fs));
    out.insert("nontrivial".into(), json!(cls.nontrivial));
    let subs: Vec<Value> = cls
        .subalgebras
        .iter()
        .map(|s| json!({"subset": s.subset, "dim": s.dim.to_string(), "dual": s.dual}))
        .collect();
    out.insert("count".into(), json!(subs.len()));
    out.insert("subalgebras".into(), Value::Array(subs));
    out.insert("total".into(), json!(cls.total.to_string()));
    Ok(Value::Object(out))
}

pub fn cmd_catalog(export: Option<&str>, common: &Common) -> Result<Value> {
    let mut out = header("catalog", common);
    match export {
        Some(key) => {
            let keys: Vec<&str> = if key == "all" {
                catalog::KEYS.to_vec()
            } else {
                vec![key]
            };
            let entries = keys
                .iter()
                .map(|k| {
                    Ok(serde_json::to_value(ij::export_entry(&catalog::entry(k)?))
                        .expect("catalog entries serialize"))
                })
                .collect::<Result<Vec<_>>>()?;
            out.insert("entries".into(), Value::Array(entries));
        }
        None => {
            let mut entries = Vec::new();
            for key in catalog::KEYS {
                let e = catalog::entry(key)?;
                let reps = e
                    .reps
                    .iter()
                    .map(|(name, r)| {
                        Ok(json!({
                            "name": name,
                            "dim": r.dim(),
                            "linear": r.is_linear(),
                            "irreducible": is_irreducible(r, common.tol)?,
                        }))
                    })
                    .collect::<Result<Vec<_>>>()?;
                entries
                    .push(json!({"key": key, "order": e.group.order(), "representations": reps}));
            }
            out.insert("entries".into(), Value::Array(entries));
        }
    }
    Ok(Value::Object(out))
}

pub fn run(cli: &Cli) -> Result<Value> {
    let c = &cli.common;
    match &cli.command {
        Command::Validate { input } => cmd_validate(input, c),
        Command::Ideals { input, side } => cmd_ideals(input, *side, c),
        Command::Subalgebras { input, verify } => cmd_subalgebras(input, *verify, c),
        Command::Factor { input } => cmd_factor(input, c),
        Command::Lie { types, weights } => cmd_lie(types, weights, c),
        Command::Catalog { export } => cmd_catalog(export.as_deref(), c),
    }
}

/// 0 on success, 2 for caps and limits, 1 for everything else.
pub fn exit_code(result: &Result<Value>) -> i32 {
    match result {
        Ok(_) => 0,
        Err(e) if e.is_limit() => 2,
        Err(_) => 1,
    }
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
