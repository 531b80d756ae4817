//! `k3aut` command-line front end.
//!
//! Exit codes: 0 success, 1 verification found a discrepancy, 2 usage or
//! input error, 3 computation error.

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use k3aut::classification::{self, Table1Row};
use k3aut::elliptic::{self, ModelSpec, RegistryStatus};
use k3aut::isometry::{self, SearchConstraints};
use k3aut::lattice::LatticeSpec;
use k3aut::lefschetz;
use k3aut::{Error, GramLattice};

#[derive(Parser)]
#[command(
    name = "k3aut",
    version,
    about = "Lattice, Lefschetz and elliptic-surface checks for K3 automorphisms"
)]
struct Cli {
    /// Machine-readable output with sorted keys.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice constructions and invariants.
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Fixed-locus profile and order constraints for an automorphism order.
    Classify(ClassifyArgs),
    /// Solve the fixed-point system for order N and Picard number R.
    Lefschetz {
        #[arg(long)]
        order: u32,
        #[arg(long)]
        rank: u32,
    },
    /// Weierstrass models.
    #[command(subcommand)]
    Elliptic(EllipticCommand),
    /// Table of 2-elementary lattices.
    #[command(subcommand)]
    Table(TableCommand),
    /// Bounded isometry search.
    #[command(subcommand)]
    Isometry(IsometryCommand),
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// Nikulin invariants of an expression such as `U+D4` or a JSON file.
    Invariants { input: String },
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    order: u32,
    /// Lattice expression or JSON file.
    #[arg(conflicts_with = "lattice", required_unless_present = "lattice")]
    input: Option<String>,
    #[arg(long)]
    lattice: Option<String>,
}

#[derive(Subcommand)]
enum EllipticCommand {
    /// Fibers, Shioda-Tate check and multiplier of a model file.
    Analyze { file: String },
    /// Re-verify every registered model.
    VerifyExamples,
}

#[derive(Subcommand)]
enum TableCommand {
    /// Recompute invariants of every row; exit 1 if a row is inconsistent.
    Verify,
}

#[derive(Subcommand)]
enum IsometryCommand {
    Search(SearchArgs),
}

#[derive(Args)]
struct SearchArgs {
    input: String,
    #[arg(long)]
    order: u32,
    #[arg(long, default_value_t = 1)]
    bound: i64,
    /// Require f^2 = -I.
    #[arg(long)]
    f2_minus_i: bool,
    /// Require trivial action on the discriminant group.
    #[arg(long)]
    trivial_disc: bool,
    #[arg(long, default_value_t = 6)]
    max_rank: usize,
    #[arg(long, default_value_t = 3)]
    max_bound: i64,
}

/// Failure kinds mapped onto exit codes.
enum Failure {
    Usage(String),
    Computation(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::InvalidLattice(_) | Error::InvalidInput(_) => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Computation(e),
        }
    }
}

struct Output {
    json: Value,
    text: String,
    /// A requested check found a discrepancy.
    discrepancy: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("serializable")
                );
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(u8::from(out.discrepancy))
        }
        Err(f) => {
            let (code, kind, message) = match f {
                Failure::Usage(m) => (2, "usage", m),
                Failure::Computation(e) => (3, "computation", e.to_string()),
            };
            if cli.json {
                println!("{}", json!({"error": kind, "message": message}));
            }
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

fn run(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::Lattice(LatticeCommand::Invariants { input }) => lattice_invariants(input),
        Command::Classify(args) => {
            let input = args
                .input
                .as_ref()
                .or(args.lattice.as_ref())
                .expect("clap enforces one");
            classify(args.order, input)
        }
        Command::Lefschetz { order, rank } => lefschetz_counts(*order, *rank),
        Command::Elliptic(EllipticCommand::Analyze { file }) => elliptic_analyze(file),
        Command::Elliptic(EllipticCommand::VerifyExamples) => verify_examples(),
        Command::Table(TableCommand::Verify) => table_verify(),
        Command::Isometry(IsometryCommand::Search(args)) => isometry_search(args),
    }
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))
}

fn load_lattice(input: &str) -> Result<GramLattice, Failure> {
    if Path::new(input).is_file() {
        let spec: LatticeSpec = serde_json::from_str(&read_file(input)?)
            .map_err(|e| Failure::Usage(format!("malformed lattice JSON in {input}: {e}")))?;
        return Ok(spec.build()?);
    }
    Ok(GramLattice::from_expr(input)?)
}

fn lattice_invariants(input: &str) -> Result<Output, Failure> {
    let l = load_lattice(input)?;
    let inv = l.nikulin_invariants()?;
    let text = format!(
        "rank {}\nsignature ({}, {})\na {}\np {}\ndelta {}\ninvariant factors {:?}\n",
        inv.rank,
        inv.t_plus,
        inv.t_minus,
        inv.a,
        inv.p.map_or("-".into(), |p| p.to_string()),
        inv.delta.map_or("-".into(), |d| d.to_string()),
        inv.invariant_factors
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>(),
    );
    Ok(Output {
        json: inv.to_json(),
        text,
        discrepancy: false,
    })
}

fn classify(order: u32, input: &str) -> Result<Output, Failure> {
    let l = load_lattice(input)?;
    let constraints = classification::order_constraints(order, &l)?;
    let profile = match classification::fixed_locus_profile(order, &l) {
        Ok(p) => Some(p),
        Err(Error::UnsupportedOrder(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let mut json = match &profile {
        Some(p) => p.to_json(),
        None => json!({ "order": order, "rank": l.rank(), "exists": Value::Null }),
    };
    json["constraints"] = constraints.to_json();
    let mut text = format!("order {order}, rank {}\n", l.rank());
    text.push_str(&format!(
        "order constraints {}\n",
        if constraints.allowed() {
            "satisfied"
        } else {
            "violated"
        }
    ));
    match &profile {
        Some(p) if p.exists => {
            let show = |v: Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
            text.push_str(&format!(
                "exists: yes\nM = {}, N = {}",
                show(p.m),
                show(p.n)
            ));
            if let Some(g) = p.genus {
                text.push_str(&format!(", genus {g}"));
            }
            if p.special.tag() != "none" {
                text.push_str(&format!(", {}", p.special.tag()));
            }
            text.push('\n');
        }
        Some(_) => text.push_str("exists: no\n"),
        None => text.push_str("no fixed-locus profile for this order\n"),
    }
    Ok(Output {
        json,
        text,
        discrepancy: false,
    })
}

fn lefschetz_counts(order: u32, rank: u32) -> Result<Output, Failure> {
    let sol = lefschetz::solve_fixed_point_counts(order, rank)?;
    let mut text = format!("order {order}, rank {rank}\n");
    for (t, v) in &sol.m {
        text.push_str(&format!("m_{} = {v}\n", t.key()));
    }
    text.push_str(&format!("M = {}\nc = {}\n", sol.total_isolated(), sol.c));
    if !sol.unique {
        text.push_str(&format!(
            "solution space of dimension {}\n",
            sol.solution_space_dim()
        ));
    }
    for o in &sol.obstructions {
        text.push_str(&format!("obstruction: {o}\n"));
    }
    Ok(Output {
        json: sol.to_json(),
        text,
        discrepancy: !sol.is_admissible(),
    })
}

fn elliptic_analyze(file: &str) -> Result<Output, Failure> {
    let spec: ModelSpec = serde_json::from_str(&read_file(file)?)
        .map_err(|e| Failure::Usage(format!("malformed model JSON: {e}")))?;
    let model = spec.model();
    let config = elliptic::analyze_fibers(&model)?;
    let mut issues: Vec<String> = config.diagnostics.iter().map(|d| d.to_string()).collect();
    let mut text = format!("{}\n", model.equation());
    for f in &config.fibers {
        text.push_str(&format!(
            "  {:<12} deg {}  {:<4} euler {}\n",
            f.place.to_string(),
            f.degree(),
            f.kodaira.to_string(),
            f.euler()
        ));
    }
    text.push_str(&format!(
        "total euler {}: {}\n",
        config.total_euler(),
        config.summary()
    ));
    let mut json = json!({ "equation": model.equation(), "fibers": config.to_json() });
    if let Some(claim) = &spec.claimed_s {
        let expr = claim.parse()?;
        match elliptic::shioda_tate_check(&config, &expr) {
            Ok(r) => {
                text.push_str(&format!("Shioda-Tate vs {claim}: mw = {}\n", r.mw_rank));
                json["shioda_tate"] = r.to_json();
            }
            Err(e) => {
                text.push_str(&format!("Shioda-Tate vs {claim}: {e}\n"));
                issues.push(e.to_string());
            }
        }
    }
    if let Some(phi) = &spec.automorphism {
        match elliptic::automorphism_multiplier(&model, phi) {
            Ok(m) => {
                text.push_str(&format!("multiplier {} of order {}\n", m.root, m.order));
                json["multiplier"] = json!({
                    "root": m.root,
                    "display": m.root.to_string(),
                    "order": m.order,
                    "value": m.value,
                });
            }
            Err(e) => {
                text.push_str(&format!("automorphism: {e}\n"));
                issues.push(e.to_string());
            }
        }
    }
    for i in &issues {
        text.push_str(&format!("issue: {i}\n"));
    }
    json["issues"] = json!(issues);
    Ok(Output {
        json,
        text,
        discrepancy: !issues.is_empty(),
    })
}

fn verify_examples() -> Result<Output, Failure> {
    let reports = elliptic::verify_registry();
    let mut text = String::new();
    for r in &reports {
        text.push_str(&format!(
            "{:<18} {:<10} {}\n",
            r.status.tag(),
            r.id,
            r.equation
        ));
        for i in &r.issues {
            text.push_str(&format!("    {i}\n"));
        }
    }
    let notes: Vec<Value> = elliptic::registry_notes()
        .iter()
        .map(|(id, note)| json!({"claimed_S": id, "note": note}))
        .collect();
    for (id, note) in elliptic::registry_notes() {
        text.push_str(&format!("{:<18} {:<10} {note}\n", "NOTE", id));
    }
    let failed = reports.iter().any(|r| r.status == RegistryStatus::Fail);
    let json = json!({
        "examples": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        "notes": notes,
        "failed": failed,
    });
    Ok(Output {
        json,
        text,
        discrepancy: failed,
    })
}

fn table_verify() -> Result<Output, Failure> {
    let rows = classification::verify_table1()?;
    let summary = classification::table1_summary(&rows);
    let mut text = String::new();
    for r in &rows {
        text.push_str(&format!(
            "{:<3} {:<3} {:<14} {:<18} {}\n",
            r.rank,
            r.a,
            r.s_expr,
            r.t_expr,
            if r.consistent {
                "ok".into()
            } else {
                format!("INCONSISTENT: {}", r.issues.join("; "))
            }
        ));
    }
    let inconsistent = rows.iter().filter(|r| !r.consistent).count();
    text.push_str(&format!(
        "{} rows, {inconsistent} inconsistent\n",
        rows.len()
    ));
    let json = json!({
        "rows": rows.iter().map(Table1Row::to_json).collect::<Vec<_>>(),
        "summary": summary,
        "inconsistent": inconsistent,
    });
    Ok(Output {
        json,
        text,
        discrepancy: inconsistent > 0,
    })
}

fn isometry_search(args: &SearchArgs) -> Result<Output, Failure> {
    let l = load_lattice(&args.input)?;
    let c = SearchConstraints {
        max_rank: args.max_rank,
        max_bound: args.max_bound,
        ..SearchConstraints::new(args.order, args.bound)
            .f2_minus_i(args.f2_minus_i)
            .trivial_action(args.trivial_disc)
    };
    let found = isometry::search_isometries(&l, &c)?;
    let mut text = format!(
        "{} isometries of order {} with entries in [-{b}, {b}] (certified up to entry bound {b})\n",
        found.len(),
        args.order,
        b = args.bound
    );
    for f in &found {
        text.push_str(&format!(
            "{:?}  trivial on A_L: {}\n",
            f.matrix, f.discriminant_action_trivial
        ));
    }
    let json = json!({
        "lattice": args.input,
        "order": args.order,
        "entry_bound": args.bound,
        "certified_up_to_entry_bound": args.bound,
        "require_f2_eq_minus_i": args.f2_minus_i,
        "require_trivial_discriminant_action": args.trivial_disc,
        "count": found.len(),
        "candidates": found.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
    });
    Ok(Output {
        json,
        text,
        discrepancy: false,
    })
}
