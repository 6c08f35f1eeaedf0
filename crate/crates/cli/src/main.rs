//! The `pebble` command line tool.

mod family;

use std::cell::RefCell;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::rc::Rc;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use pebble_constructions::{parse_anchors, product_reversible, product_standard, qbf_reduction, road, GadgetHandle};
use pebble_engine::{
    classify_config, parse_trace, region_space_from, validate_program, write_trace, Flavor, GoalClass, PebbleConfig,
    Region, TraceError,
};
use pebble_graph::{io, validate, Dag, Vertex, VertexSet};
use pebble_qbf::parse_qdimacs;
use pebble_solvers::{
    dt_play, dt_price, set_parallel, solve, Challenger, DtSolver, ExhaustiveChallenger, Goal, OptimalChallenger,
    OptimalPebbler, Pebbler, PriceQuery, PriceRecord, Response, SolveError,
};
use pebble_strategies::{BisectionPebbler, RoadChallenger};
use serde_json::{json, Value};

use family::Emitted;

#[derive(Parser)]
#[command(name = "pebble", version, about = "Exact prices and certified strategies for pebble games on DAGs")]
struct Cli {
    /// Worker threads for the solver; 1 disables the parallel frontier.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a graph family (path, chain, road, pyramid, tree, teabag, gpyr,
    /// xmas, mold, turnpike, centipede, product-rev, product-std, qbf).
    Gen {
        family: String,
        params: Vec<String>,
        /// Graph file; anchors go to `<out>.anchors`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact price of a graph read from a file or `-` for stdin.
    Solve {
        #[arg(default_value = "-")]
        graph: String,
        #[arg(long, default_value = "reversible")]
        flavor: String,
        #[arg(long, default_value = "persistent")]
        goal: String,
        /// File of vertex ids whose pebbles count.
        #[arg(long)]
        region: Option<PathBuf>,
        /// File of vertex ids forming the target of `--goal config`.
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        state_limit: Option<usize>,
        /// Quotient by interchangeable twin vertices.
        #[arg(long)]
        twins: bool,
    },
    /// Replay a trace and report its space, time and goal.
    Validate {
        graph: String,
        trace: String,
        #[arg(long)]
        start: Option<PathBuf>,
        #[arg(long)]
        region: Option<PathBuf>,
    },
    /// Emit and certify a strategy for a family.
    Strategy {
        family: String,
        params: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print only the certificate, never the expanded moves.
        #[arg(long)]
        summary: bool,
        /// Longest trace that will be expanded.
        #[arg(long, default_value_t = 5_000_000)]
        limit: u128,
    },
    /// Build the reduction graph of a QDIMACS formula.
    Reduce {
        formula: PathBuf,
        /// Take the K-fold product of the graph with itself.
        #[arg(long, default_value_t = 1)]
        amplify: usize,
        #[arg(long, default_value = "reversible")]
        flavor: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Referee a Dymond–Tompa game.
    Play {
        graph: String,
        /// `optimal` or `bisection:<standard trace file>`.
        #[arg(long, default_value = "optimal")]
        pebbler: String,
        /// `optimal`, `road` or `exhaustive`.
        #[arg(long, default_value = "optimal")]
        challenger: String,
        #[arg(long, default_value_t = 1000)]
        rounds: usize,
    },
    /// Print a graph in another format.
    Export {
        graph: String,
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        anchors: Option<PathBuf>,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Invalid(Value),
    Cap(Value),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n <= 1 {
            set_parallel(false);
        } else if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("{}", json!({ "error": e.to_string(), "kind": "usage" }));
            return ExitCode::from(2);
        }
    }
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("{}", json!({ "error": format!("{e:#}"), "kind": "usage" }));
            ExitCode::from(2)
        }
        Err(Failure::Invalid(v)) => {
            println!("{v}");
            ExitCode::from(3)
        }
        Err(Failure::Cap(v)) => {
            println!("{v}");
            ExitCode::from(4)
        }
    }
}

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Gen { family, params, out } => {
            let g = family::generate(&family, &params)?;
            emit_graph(&g, out.as_deref())?;
            Ok(())
        }
        Cmd::Solve { graph, flavor, goal, region, target, cap, state_limit, twins } => {
            solve_cmd(&graph, &flavor, &goal, region, target, cap, state_limit, twins)
        }
        Cmd::Validate { graph, trace, start, region } => validate_cmd(&graph, &trace, start, region),
        Cmd::Strategy { family, params, out, summary, limit } => strategy_cmd(&family, &params, out, summary, limit),
        Cmd::Reduce { formula, amplify, flavor, out } => reduce_cmd(&formula, amplify, &flavor, out),
        Cmd::Play { graph, pebbler, challenger, rounds } => play_cmd(&graph, &pebbler, &challenger, rounds),
        Cmd::Export { graph, dot, anchors } => {
            let d = read_graph(&graph)?;
            if !dot {
                print!("{}", io::write_dag(&d));
                return Ok(());
            }
            let sidecar = anchors.or_else(|| {
                let p = PathBuf::from(format!("{graph}.anchors"));
                p.exists().then_some(p)
            });
            let names = match sidecar {
                Some(p) => parse_anchors(&read_text(&p.to_string_lossy())?).map_err(anyhow::Error::from)?,
                None => Default::default(),
            };
            print!("{}", io::to_dot(&d, &names));
            Ok(())
        }
    }
}

fn read_text(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn read_graph(path: &str) -> anyhow::Result<Dag> {
    io::parse_dag(&read_text(path)?).map_err(|e| anyhow!("{path}: {e}"))
}

fn read_vertices(path: &Path, n: usize) -> anyhow::Result<Vec<Vertex>> {
    let text = read_text(&path.to_string_lossy())?;
    text.split_whitespace()
        .map(|t| {
            let v: Vertex = t.parse().with_context(|| format!("bad vertex `{t}` in {}", path.display()))?;
            if v >= n {
                bail!("vertex {v} out of range in {}", path.display());
            }
            Ok(v)
        })
        .collect()
}

fn emit_graph(g: &GadgetHandle, out: Option<&Path>) -> anyhow::Result<()> {
    let text = io::write_dag(&g.graph);
    match out {
        Some(p) => {
            std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
            if !g.anchors.is_empty() {
                let side = format!("{}.anchors", p.display());
                std::fs::write(&side, g.write_anchors()).with_context(|| format!("writing {side}"))?;
            }
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn goal_name(c: Option<GoalClass>) -> &'static str {
    match c {
        Some(GoalClass::Persistent) => "persistent",
        Some(GoalClass::Visiting) => "visiting",
        Some(GoalClass::Surrounding) => "surrounding",
        Some(GoalClass::Other) | None => "none",
    }
}

#[allow(clippy::too_many_arguments)]
fn solve_cmd(
    graph: &str,
    flavor: &str,
    goal: &str,
    region: Option<PathBuf>,
    target: Option<PathBuf>,
    cap: Option<usize>,
    state_limit: Option<usize>,
    twins: bool,
) -> Outcome {
    let d = read_graph(graph)?;
    let n = d.node_count();
    if flavor == "dt" {
        if goal != "persistent" {
            return Err(anyhow!("the Dymond–Tompa game has no `{goal}` goal").into());
        }
        let p = dt_price(&d, true).map_err(solve_failure)?;
        println!("{}", json!({ "graph": graph, "flavor": "dt", "goal": "persistent", "price": p }));
        return Ok(());
    }
    let flavor: Flavor = flavor.parse().map_err(|e: String| anyhow!(e))?;
    let goal = match goal {
        "persistent" => Goal::Persistent,
        "visiting" => Goal::Visiting,
        "surrounding" => Goal::Surrounding,
        "config" => {
            let t = target.ok_or_else(|| anyhow!("--goal config needs --target"))?;
            Goal::Config(PebbleConfig::from_vertices(n, read_vertices(&t, n)?))
        }
        other => return Err(anyhow!("unknown goal `{other}`").into()),
    };
    let mut q = PriceQuery::new(flavor, goal);
    if let Some(r) = region {
        q = q.with_region(Region::new(VertexSet::from_vertices(n, read_vertices(&r, n)?)));
    }
    if let Some(c) = cap {
        q = q.with_cap(c);
    }
    if let Some(l) = state_limit {
        q = q.with_state_limit(l);
    }
    if twins {
        q = q.with_twin_symmetry();
    }
    let s = solve(&d, &q).map_err(solve_failure)?;
    println!("{}", serde_json::to_string(&PriceRecord::new(graph, &q, &s)).expect("record serializes"));
    Ok(())
}

fn solve_failure(e: SolveError) -> Failure {
    match e {
        SolveError::CapExceeded { lower_bound, .. } | SolveError::StateLimit { lower_bound, .. } => {
            Failure::Cap(json!({ "error": e.to_string(), "lower_bound": lower_bound }))
        }
        other => Failure::Usage(anyhow!(other)),
    }
}

fn validate_cmd(graph: &str, trace: &str, start: Option<PathBuf>, region: Option<PathBuf>) -> Outcome {
    let d = read_graph(graph)?;
    let n = d.node_count();
    let t = parse_trace(&read_text(trace)?).map_err(|e| anyhow!("{trace}: {e}"))?;
    let start = match start {
        Some(p) => PebbleConfig::from_vertices(n, read_vertices(&p, n)?),
        None => PebbleConfig::empty(n),
    };
    let region = match region {
        Some(p) => Region::new(VertexSet::from_vertices(n, read_vertices(&p, n)?)),
        None => Region::all(n),
    };
    match region_space_from(&d, &t, &start, &region) {
        Ok((rep, rspace)) => {
            let goal = goal_name(classify_config(&d, &rep.final_config));
            println!(
                "{}",
                json!({
                    "valid": true,
                    "flavor": t.flavor.to_string(),
                    "space": rep.space,
                    "region_space": rspace,
                    "time": rep.time,
                    "goal": goal,
                    "final": rep.final_config.to_vec(),
                })
            );
            Ok(())
        }
        Err(TraceError::Illegal { index, mv, error }) => Err(Failure::Invalid(json!({
            "valid": false,
            "index": index,
            "move": mv.to_string(),
            "error": error.to_string(),
        }))),
        Err(e) => Err(Failure::Invalid(json!({ "valid": false, "error": e.to_string() }))),
    }
}

fn strategy_cmd(family: &str, params: &[String], out: Option<PathBuf>, summary: bool, limit: u128) -> Outcome {
    let (g, emitted) = family::strategy(family, params)?;
    let d = &g.graph;
    let n = d.node_count();
    let prog = match emitted {
        Emitted::Flat(t) => pebble_engine::TraceProgram::from_trace(&t),
        Emitted::Program(p) => p,
    };
    let rep = validate_program(d, &prog, &PebbleConfig::empty(n), None)
        .map_err(|e| Failure::Invalid(json!({ "valid": false, "error": e.to_string() })))?;
    let report = json!({
        "family": family,
        "params": params,
        "flavor": prog.flavor.to_string(),
        "nodes": n,
        "space": rep.space,
        "time": rep.time.to_string(),
        "goal": goal_name(classify_config(d, &rep.final_config)),
    });
    if summary {
        println!("{report}");
        return Ok(());
    }
    let flat = prog.expand(limit).map_err(|e| anyhow!("{e}; rerun with --summary or a larger --limit"))?;
    let text = write_trace(&flat);
    match out {
        Some(p) => {
            std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
            println!("{report}");
        }
        None => {
            print!("{text}");
            eprintln!("{report}");
        }
    }
    Ok(())
}

fn reduce_cmd(formula: &Path, amplify: usize, flavor: &str, out: Option<PathBuf>) -> Outcome {
    let text = read_text(&formula.to_string_lossy())?;
    let phi = parse_qdimacs(&text).map_err(|e| anyhow!("{}: {e}", formula.display()))?;
    let red = qbf_reduction(&phi).map_err(anyhow::Error::from)?;
    let flavor: Flavor = flavor.parse().map_err(|e: String| anyhow!(e))?;
    if amplify == 0 {
        return Err(anyhow!("--amplify must be at least 1").into());
    }
    let base = &red.gadget;
    let check = validate(&base.graph, true, 2);
    let mut g = base.clone();
    for _ in 1..amplify {
        let size = 3 * g.node_count() * base.node_count();
        if size > 20_000_000 {
            return Err(anyhow!("amplified graph would have about {size} vertices").into());
        }
        g = match flavor {
            Flavor::Reversible => product_reversible(&g, base).map_err(anyhow::Error::from)?,
            Flavor::Standard => product_standard(&g, base, None).map_err(anyhow::Error::from)?.gadget,
        };
    }
    let conj_tolls: Vec<Vec<usize>> =
        red.conjunctions.iter().map(|c| c.turnpikes.iter().map(|&k| red.turnpikes[k].toll).collect()).collect();
    let report = json!({
        "formula": formula.display().to_string(),
        "true": phi.evaluate(),
        "gamma": red.ledger,
        "budget": red.ledger.total(),
        "nodes": base.node_count(),
        "edges": base.graph.edge_count(),
        "max_fanin": base.graph.max_fanin(),
        "single_sink": base.graph.sinks().len() == 1,
        "structurally_valid": check.is_valid(),
        "turnpikes": red.turnpikes.len(),
        "clause_tolls": red.clauses.iter().map(|c| c.beta).collect::<Vec<_>>(),
        "conjunction_tolls": conj_tolls,
        "amplify": amplify,
        "amplified_nodes": g.node_count(),
    });
    if let Some(p) = out {
        emit_graph(&g, Some(&p))?;
    }
    println!("{report}");
    if !check.is_valid() {
        return Err(Failure::Invalid(json!({ "valid": false, "error": "reduction graph failed structural checks" })));
    }
    Ok(())
}

/// Finds `(w, l)` with `road(w, l)` identical to `d`.
fn road_shape(d: &Dag) -> Option<(usize, usize)> {
    let n = d.node_count();
    for w in 1..=n {
        let mut l = w - 1;
        loop {
            let r = road(w, l).ok()?;
            if r.node_count() > n {
                break;
            }
            if r.node_count() == n && r.graph.edges() == d.edges() && r.graph.sink() == d.sink() {
                return Some((w, l));
            }
            l += 1;
        }
    }
    None
}

fn play_cmd(graph: &str, pebbler: &str, challenger: &str, rounds: usize) -> Outcome {
    let d = read_graph(graph)?;
    let mut solver: Option<Rc<RefCell<DtSolver>>> = None;
    let mut shared = || -> anyhow::Result<Rc<RefCell<DtSolver>>> {
        if solver.is_none() {
            solver = Some(Rc::new(RefCell::new(DtSolver::new(&d, true)?)));
        }
        Ok(solver.clone().expect("just set"))
    };
    let mut p: Box<dyn Pebbler> = match pebbler.split_once(':') {
        None if pebbler == "optimal" => Box::new(OptimalPebbler(shared()?)),
        Some(("bisection", file)) => {
            let t = parse_trace(&read_text(file)?).map_err(|e| anyhow!("{file}: {e}"))?;
            Box::new(BisectionPebbler::new(&d, &t).map_err(anyhow::Error::from)?)
        }
        _ => return Err(anyhow!("unknown Pebbler `{pebbler}`").into()),
    };
    let mut c: Box<dyn Challenger> = match challenger {
        "optimal" => Box::new(OptimalChallenger(shared()?)),
        "exhaustive" => Box::new(ExhaustiveChallenger::new(p.as_ref(), rounds)),
        "road" => {
            let (w, l) = road_shape(&d).ok_or_else(|| anyhow!("graph is not a road in the documented layout"))?;
            Box::new(RoadChallenger::new(w, l).map_err(anyhow::Error::from)?)
        }
        other => return Err(anyhow!("unknown Challenger `{other}`").into()),
    };
    let t = dt_play(&d, p.as_mut(), c.as_mut(), rounds).map_err(anyhow::Error::from)?;
    let log: Vec<Value> = t
        .log
        .iter()
        .map(|r| {
            json!({
                "placed": r.placed,
                "response": if r.response == Response::Jump { "jump" } else { "stay" },
                "challenged": r.challenged,
            })
        })
        .collect();
    println!("{}", json!({ "rounds": t.rounds, "log": log, "final_challenged": t.final_state.challenged }));
    Ok(())
}
