use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use katz_forge::classify::{
    enumerate_local_invariants, g2_pattern_check, kummer_pullback, monodromy_multiset, pullback_identities,
    solve_rigidity_tuples, verify_classification, RowReport, TupleRule, REGULAR_SOLN,
};
use katz_forge::engine::{
    op_fourier, op_middle_convolution, op_twist, parse_script, render_trace, rigidity_terms, run_script,
    ConnectionDescriptor, EngineError,
};
use katz_forge::jordan::split_top;
use katz_forge::scalars::parse_eigenvalue;

/// Formal-type calculus for rigid irregular connections on the punctured line.
#[derive(Parser)]
#[command(name = "katz-forge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Local and global invariants of a descriptor
    Check {
        descriptor: PathBuf,
        /// Exit 1 unless rig = 2
        #[arg(long)]
        expect_rigid: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Run a script of operations on a descriptor
    Replay {
        script: PathBuf,
        descriptor: PathBuf,
        /// Print every intermediate state
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Global Fourier transform
    Fourier {
        descriptor: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Middle convolution with the Kummer system of monodromy CHI
    Mc {
        #[arg(allow_hyphen_values = true)]
        chi: String,
        descriptor: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Twist by rank-one monodromies listed per column, e.g. `1,-l,-l^-1`
    Twist {
        #[arg(allow_hyphen_values = true)]
        monodromies: String,
        descriptor: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Tables and checks of the G2 classification
    Classify {
        /// Local invariant table per slope profile
        #[arg(long)]
        tables: bool,
        /// Rigidity tuples with this many singular points
        #[arg(long, value_name = "R")]
        tuples: Option<usize>,
        /// Only (irr, Soln) pairs realized by one shape
        #[arg(long, requires = "tuples")]
        joint: bool,
        /// Check the theorem rows and the excluded type
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Base change along z -> z^K, or the pullback identities of the list
    Pullback {
        #[arg(requires = "descriptor")]
        k: Option<u32>,
        descriptor: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
}

/// Failure with a fixed exit code.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn engine_exit(e: EngineError) -> anyhow::Error {
    let code = match &e {
        _ if e.is_out_of_scope() => 3,
        EngineError::Descriptor(_) | EngineError::Script { .. } => 2,
        _ => 1,
    };
    Exit(code, e.to_string()).into()
}

fn golden_dir() -> PathBuf {
    match std::env::var_os("KATZ_FORGE_GOLDEN_DIR") {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../golden"),
    }
}

fn load(path: &Path) -> Result<ConnectionDescriptor> {
    let text = fs::read_to_string(path).map_err(|e| Exit(2, format!("{}: {}", path.display(), e)))?;
    ConnectionDescriptor::parse_json(&text).map_err(|e| Exit(2, format!("{}: {}", path.display(), e)).into())
}

fn golden(name: &str) -> Result<ConnectionDescriptor> {
    load(&golden_dir().join("descriptors").join(format!("{}.json", name)))
}

fn print_descriptor(c: &ConnectionDescriptor, json: bool) -> Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(&c.to_json())?);
    } else {
        print!("{}", c);
    }
    Ok(())
}

fn check(path: &Path, expect_rigid: bool, json: bool) -> Result<()> {
    let c = load(path)?;
    let terms = rigidity_terms(&c).map_err(engine_exit)?;
    let mut points = Vec::new();
    for ((loc, ft), (irr, soln)) in c.singular_points().into_iter().zip(terms.irr.iter().zip(&terms.soln)) {
        let checks = ft.checks().map_err(|e| engine_exit(e.into()))?;
        let torus = ft.exponential_torus_dim().map_err(|e| engine_exit(e.into()))?;
        let slopes: Vec<String> =
            ft.invariants().slopes.iter().map(|(s, d)| format!("{}:{}", s, d)).collect();
        points.push(json!({
            "at": loc.to_string(),
            "type": ft.to_string(),
            "slopes": slopes,
            "irr_end": irr,
            "soln_end": soln,
            "self_dual": checks.self_dual,
            "det_trivial": checks.det_trivial,
            "torus_dim": torus,
            "g2_pattern": g2_pattern_check(&monodromy_multiset(ft)),
        }));
    }
    let rig = terms.value();
    if json {
        let v = json!({"rank": c.rank(), "rig": rig, "points": points});
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!("rank = {}", c.rank());
        for p in &points {
            println!("{}: {}", p["at"].as_str().unwrap(), p["type"].as_str().unwrap());
            let slopes: Vec<&str> = p["slopes"].as_array().unwrap().iter().filter_map(Value::as_str).collect();
            println!("  slopes {}", slopes.join(" "));
            println!("  irr(End) = {}, dim Soln(End) = {}", p["irr_end"], p["soln_end"]);
            println!(
                "  self-dual {}, det trivial {}, torus dim {}, G2 pattern {}",
                p["self_dual"], p["det_trivial"], p["torus_dim"], p["g2_pattern"]
            );
        }
        println!("rig = {}", rig);
    }
    if expect_rigid && rig != 2 {
        return Err(Exit(1, format!("not rigid: rig = {}", rig)).into());
    }
    Ok(())
}

fn replay(script: &Path, path: &Path, trace: bool, json: bool) -> Result<()> {
    let text = fs::read_to_string(script).map_err(|e| Exit(2, format!("{}: {}", script.display(), e)))?;
    let steps = parse_script(&text).map_err(engine_exit)?;
    let c = load(path)?;
    let (states, failure) = match run_script(&c, &steps) {
        Ok(t) => (t, None),
        Err(f) => (f.trace.clone(), Some(f)),
    };
    if json {
        let v: Vec<Value> = states.iter().map(|s| s.to_json()).collect();
        if trace {
            println!("{}", serde_json::to_string_pretty(&v)?);
        } else if failure.is_none() {
            print_descriptor(states.last().unwrap(), true)?;
        }
    } else if trace {
        print!("{}", render_trace(&states, &steps));
    } else if failure.is_none() {
        print_descriptor(states.last().unwrap(), false)?;
    }
    match failure {
        None => Ok(()),
        Some(f) => Err(engine_exit(f.error.clone()).context(format!("step {} ({})", f.step + 1, steps[f.step]))),
    }
}

fn row_line(r: &RowReport) -> String {
    let verdict = if r.passed() { "PASS".to_string() } else { format!("FAIL {}", r.failures.join("; ")) };
    let cube = r.exterior_cube.as_ref().map(|t| format!(" chi(L3) = {}", t.value())).unwrap_or_default();
    format!("{:<9} rig = {}  torus {}{}  {}", r.name, r.rig, r.torus_dim, cube, verdict)
}

fn row_json(r: &RowReport) -> Value {
    json!({
        "name": r.name,
        "rig": r.rig,
        "self_dual": r.self_dual,
        "det_trivial": r.det_trivial,
        "torus_dim": r.torus_dim,
        "g2_pattern": r.pattern,
        "exterior_cube_euler": r.exterior_cube.as_ref().map(|t| t.value()),
        "failures": r.failures,
        "pass": r.passed(),
    })
}

const THEOREM_ROWS: usize = 10;
/// Rows of the E1, E2 and E3 families, whose exterior cube is checked.
const CUBE_ROWS: usize = 5;

fn classify(tables: bool, tuples: Option<usize>, joint: bool, verify: bool, json: bool) -> Result<()> {
    if !tables && tuples.is_none() && !verify {
        return Err(Exit(2, "classify needs --tables, --tuples R or --verify".into()).into());
    }
    let mut out = serde_json::Map::new();
    let rows = if tables || tuples.is_some() { enumerate_local_invariants()? } else { Vec::new() };
    if tables {
        if json {
            let v: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "profile": r.profile.to_string(),
                        "shapes": r.shapes,
                        "soln": r.soln(),
                        "irr": r.irr(),
                        "pairs": r.pairs.iter().map(|(i, s)| json!([i, s])).collect::<Vec<_>>(),
                    })
                })
                .collect();
            out.insert("tables".into(), Value::Array(v));
        } else {
            println!("{:<12} {:>6}  {:<24} irr(End)", "profile", "shapes", "dim Soln(End)");
            for r in &rows {
                let s: Vec<String> = r.soln().iter().map(|x| x.to_string()).collect();
                let i: Vec<String> = r.irr().iter().map(|x| x.to_string()).collect();
                println!("{:<12} {:>6}  {:<24} {}", r.profile.to_string(), r.shapes, s.join(","), i.join(","));
            }
        }
    }
    if let Some(r) = tuples {
        if !(2..=4).contains(&r) {
            return Err(Exit(2, format!("--tuples takes 2, 3 or 4, got {}", r)).into());
        }
        let rule = if joint { TupleRule::Joint } else { TupleRule::Product };
        let ts = solve_rigidity_tuples(r, &rows, &REGULAR_SOLN, rule);
        if json {
            out.insert("tuples".into(), json!(ts.iter().map(|t| t.values()).collect::<Vec<_>>()));
        } else {
            println!("r = {}: {} tuples", r, ts.len());
            for t in &ts {
                println!("{}", t);
            }
        }
    }
    let mut failed = false;
    if verify {
        let mut theorem = Vec::new();
        for i in 1..=THEOREM_ROWS {
            let name = format!("row{:02}", i);
            theorem.push((name.clone(), golden(&name)?, i <= CUBE_ROWS));
        }
        let report =
            verify_classification(&theorem, &("excluded".into(), golden("excluded")?)).map_err(engine_exit)?;
        failed = !report.rows.iter().all(RowReport::passed);
        if json {
            out.insert(
                "verify".into(),
                json!({
                    "rows": report.rows.iter().map(row_json).collect::<Vec<_>>(),
                    "excluded": row_json(&report.excluded),
                }),
            );
        } else {
            for r in &report.rows {
                println!("{}", row_line(r));
            }
            println!("{}", row_line(&report.excluded));
        }
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&Value::Object(out))?);
    }
    if failed {
        return Err(Exit(1, "a theorem row failed verification".into()).into());
    }
    Ok(())
}

fn pullback(k: Option<u32>, path: Option<&Path>, json: bool) -> Result<()> {
    if let (Some(k), Some(path)) = (k, path) {
        if k == 0 {
            return Err(Exit(2, "K must be positive".into()).into());
        }
        let c = kummer_pullback(&load(path)?, k).map_err(engine_exit)?;
        return print_descriptor(&c, json);
    }
    let checks = pullback_identities(&golden("row10")?, &golden("row05")?, &golden("row09")?, &golden("row04")?)
        .map_err(engine_exit)?;
    if json {
        let v: Vec<Value> = checks
            .iter()
            .map(|c| json!({"name": c.name, "holds": c.holds(), "pullback": c.got.to_json(), "expected": c.expected.to_json()}))
            .collect();
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        for c in &checks {
            println!("{}: {}", c.name, if c.holds() { "holds" } else { "FAILS" });
            print!("{}", c.got);
        }
    }
    if checks.iter().all(|c| c.holds()) {
        Ok(())
    } else {
        Err(Exit(1, "a pullback identity fails".into()).into())
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Check { descriptor, expect_rigid, out } => check(&descriptor, expect_rigid, out.json),
        Command::Replay { script, descriptor, trace, out } => replay(&script, &descriptor, trace, out.json),
        Command::Fourier { descriptor, out } => {
            print_descriptor(&op_fourier(&load(&descriptor)?).map_err(engine_exit)?, out.json)
        }
        Command::Mc { chi, descriptor, out } => {
            let chi = parse_eigenvalue(&chi).map_err(|e| Exit(2, format!("CHI: {}", e)))?;
            print_descriptor(&op_middle_convolution(&load(&descriptor)?, &chi).map_err(engine_exit)?, out.json)
        }
        Command::Twist { monodromies, descriptor, out } => {
            let ls = split_top(&monodromies)
                .into_iter()
                .map(|s| parse_eigenvalue(s.trim()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Exit(2, format!("monodromies: {}", e)))?;
            print_descriptor(&op_twist(&load(&descriptor)?, &ls).map_err(engine_exit)?, out.json)
        }
        Command::Classify { tables, tuples, joint, verify, out } => classify(tables, tuples, joint, verify, out.json),
        Command::Pullback { k, descriptor, out } => pullback(k, descriptor.as_deref(), out.json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e);
            let code = e.chain().find_map(|c| c.downcast_ref::<Exit>()).map(|x| x.0).unwrap_or(1);
            ExitCode::from(code)
        }
    }
}
