//! Command-line surface: argument parsing and the four commands.

use clap::{Args, Parser, Subcommand};
use ntu_core::circuits::{components, max_circuit_weight};
use ntu_core::cographic::{beta, docset_masks, find_rooted_k2t_model, MODEL_CAP};
use ntu_core::config::Configuration;
use ntu_core::matrix::IntMat;
use ntu_core::oracle::BruteBudget;
use ntu_core::pipeline::{solve_cographic, solve_equality, solve_general, solve_mcicp, solve_mcipp, Status, Trace};
use ntu_core::proximity::{EqualityInstance, MINOR_CAP};
use ntu_core::tu::{is_totally_unimodular, max_minor};

use crate::error::{CliError, CliResult};
use crate::format::{td_from_spec, InstanceFile, InstanceKind, Loaded, Problem, TdSpec};
use crate::generate::{generate, GenOptions};
use crate::report::{SolveReport, StructureReport, TraceReport};
use crate::verify::{verify_pipeline, Verdict};

#[derive(Debug, Parser)]
#[command(name = "ntu", version, about = "Exact solver for nearly totally unimodular integer programs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance file.
    Solve(SolveArgs),
    /// Report structural properties of an instance file.
    Check(CheckArgs),
    /// Solve and compare with the brute-force oracle.
    Verify(SolveArgs),
    /// Print a random instance file.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    pub path: String,
    /// Compare with the brute-force oracle.
    #[arg(long)]
    pub verify: bool,
    /// Print the per-stage trace.
    #[arg(long)]
    pub trace: bool,
    #[arg(long)]
    pub json: bool,
    /// Lattice points the oracle may enumerate.
    #[arg(long)]
    pub budget: Option<u128>,
    /// Tree-decomposition file replacing the one in the instance.
    #[arg(long)]
    pub td: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    pub path: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: InstanceKind,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Variables for matrix kinds, vertices for graph kinds.
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub delta: Option<i64>,
}

/// Exit code and the text for each stream.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(e: &CliError) -> Self {
        Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    let r = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_solve(&SolveArgs { verify: true, ..a.clone() }),
        Command::Check(a) => cmd_check(a),
        Command::Gen(a) => cmd_gen(a),
    };
    r.unwrap_or_else(|e| Outcome::error(&e))
}

/// Runs the chain that fits the instance kind.
pub fn run_pipeline(loaded: &Loaded, trace: &mut Trace) -> CliResult<Status> {
    let status = match &loaded.problem {
        Problem::General(i) => solve_general(i, trace)?,
        Problem::Equality(i) => solve_equality(i, trace)?,
        Problem::Mcicp { inst, graph: Some(g) } => solve_cographic(inst, g, loaded.td.as_ref(), None, trace)?,
        Problem::Mcicp { inst, graph: None } => solve_mcicp(inst, trace)?,
        Problem::Mcipp(i) => solve_mcipp(i, loaded.td.as_ref(), loaded.superprofiles.as_ref(), trace)?,
    };
    if let Status::Optimal { value, x } = &status {
        if loaded.problem.evaluate(x) != Some(*value) {
            return Err(ntu_core::Error::Invariant("reported solution fails its re-check".into()).into());
        }
    }
    Ok(status)
}

/// Loads, solves and optionally verifies one instance file.
pub fn solve_file(file: &InstanceFile, args: &SolveArgs) -> CliResult<(SolveReport, i32)> {
    let mut loaded = file.load()?;
    if let Some(path) = &args.td {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
        let spec: TdSpec = serde_json::from_str(&text).map_err(|e| CliError::Parse(e.to_string()))?;
        let g = loaded.problem.graph().ok_or_else(|| CliError::Invalid("--td needs an instance with a graph".into()))?;
        loaded.td = Some(td_from_spec(&spec, g)?);
        loaded.superprofiles = None;
    }
    let mut trace = Trace::default();
    let status = run_pipeline(&loaded, &mut trace)?;
    let mut report = SolveReport::new(file.instance_kind.name(), &status);
    if args.trace {
        report.trace = Some(TraceReport::from_trace(&trace));
    }
    let mut code = 0;
    if args.verify {
        let mut budget = BruteBudget::default();
        if let Some(b) = args.budget {
            budget.lattice_points = b;
        }
        let v = verify_pipeline(&loaded.problem, &status, &budget);
        code = match v.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Unverified => 3,
        };
        report.verification = Some(v);
    }
    Ok((report, code))
}

fn cmd_solve(args: &SolveArgs) -> CliResult<Outcome> {
    let file = InstanceFile::read(&args.path)?;
    let (report, code) = solve_file(&file, args)?;
    let stdout = if args.json { report.to_json() } else { report.to_text() };
    Ok(Outcome { code, stdout, stderr: String::new() })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn matrix_properties(r: &mut StructureReport, inst: &EqualityInstance) -> CliResult<()> {
    r.push("variables", inst.n(), "format");
    r.push("k", inst.k(), "format");
    r.push("TU", yes(inst.a.dim() == 0 || is_totally_unimodular(&inst.a)?), "tu");
    r.push("max circuit weight", max_circuit_weight(&inst.a, &inst.w)?, "circuits");
    let comps = components(&inst.a).len();
    r.push("connectivity", if comps <= 1 { "connected".to_string() } else { format!("{comps} components") }, "circuits");
    Ok(())
}

/// Structural properties of a loaded instance.
pub fn structure(loaded: &Loaded) -> CliResult<StructureReport> {
    let mut r = StructureReport { kind: loaded.kind.name().into(), properties: Vec::new() };
    match &loaded.problem {
        Problem::General(i) => {
            r.push("variables", i.n(), "format");
            r.push("rows", i.m.len(), "format");
            r.push("k", i.k(), "format");
            r.push("extra columns", format!("{:?}", i.extra_cols), "format");
            let keep: Vec<usize> = (0..i.n()).filter(|j| !i.extra_cols.contains(j)).collect();
            let core: Vec<Vec<i64>> = i.a_rows().iter().map(|&row| keep.iter().map(|&j| i.m[row][j]).collect()).collect();
            let tu = core.is_empty() || keep.is_empty() || is_totally_unimodular(&Configuration::from_i64_rows(&core, keep.len())?)?;
            r.push("TU", yes(tu), "tu");
            r.push("max |subdeterminant|", max_minor(&IntMat::from_rows(&i.m, i.n()), MINOR_CAP)?, "tu");
        }
        Problem::Equality(i) => matrix_properties(&mut r, i)?,
        Problem::Mcicp { inst, graph } => {
            matrix_properties(&mut r, &inst.to_equality())?;
            if graph.is_some() {
                r.push("cographic for graph", "yes", "cographic");
            }
        }
        Problem::Mcipp(i) => {
            let g = &i.graph;
            r.push("vertices", g.n(), "cographic");
            r.push("edges", g.m(), "cographic");
            r.push("k", i.k(), "format");
            r.push("connectivity", if g.is_two_connected() { "2-connected" } else { "connected" }, "cographic");
            r.push("docsets", docset_masks(g, false)?.len(), "cographic");
            let betas = i.w.iter().map(|row| beta(g, row)).collect::<ntu_core::Result<Vec<_>>>()?;
            r.push("beta per row", format!("{betas:?}"), "cographic");
            let t = 4 * i.k() * i.delta as usize + 1;
            let verdict = if g.n() > MODEL_CAP {
                format!("not searched above {MODEL_CAP} vertices")
            } else {
                match find_rooted_k2t_model(g, &i.roots(), t)? {
                    None => "none".to_string(),
                    Some(m) => format!("found, hubs {:?}", m.hubs),
                }
            };
            r.push(&format!("rooted K2,{t} model"), verdict, "cographic");
        }
    }
    if let Some(td) = &loaded.td {
        r.push("decomposition", format!("{} nodes, ell {}", td.len(), td.ell), "mcippdp");
    }
    Ok(r)
}

fn cmd_check(args: &CheckArgs) -> CliResult<Outcome> {
    let loaded = InstanceFile::read(&args.path)?.load()?;
    let r = structure(&loaded)?;
    Ok(Outcome { code: 0, stdout: if args.json { r.to_json() } else { r.to_text() }, stderr: String::new() })
}

fn cmd_gen(args: &GenArgs) -> CliResult<Outcome> {
    let f = generate(args.kind, args.seed, GenOptions { size: args.size, k: args.k, delta: args.delta })?;
    Ok(Outcome { code: 0, stdout: f.emit(), stderr: String::new() })
}
