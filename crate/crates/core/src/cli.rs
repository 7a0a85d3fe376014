//! Command-line front end. [`run_cli`] takes the argument vector and the
//! two output streams and returns the process exit code.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::blowup::blow_up;
use crate::exact::held_karp::{DEFAULT_BITMASK_LIMIT, MAX_BITMASK_LIMIT};
use crate::exact::oracle::{oracle_min_circuit, transition_system_count, DEFAULT_ENUMERATION_BUDGET};
use crate::exact::zero_cost::{zero_cost_circuit, ZeroCostError, ZeroCostOptions};
use crate::exact::{solve_via_tsp, Method, SolveError, SolveOptions, SolveResult};
use crate::io::{
    emit_circuit, emit_gadget, emit_graph, emit_tsp, export_dot, gadget_from_file, parse_circuit, parse_graph,
    GraphFile,
};
use crate::model::{circuit_cost, validate_circuit, EulerianCircuit, Graph, Rational};
use crate::planar::{crossings_forbidden, min_cost_atrail, PlanarError, PlaneGraph};
use crate::reduce::{line_graph_weighted, subdivide_twice};
use crate::sat::{build_gadget, extract_assignment, normalize_mod4, parse_cnf, ExtractError};

/// Environment variable holding the default `--max-bitmask`.
pub const BITMASK_ENV: &str = "TURNCOST_MAX_BITMASK";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "turncost", version, about = "Minimum turning-cost Eulerian circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Auto,
    Oracle,
    Tsp,
    TspContracted,
    Zerocost,
    Atrail,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the minimum circuit cost.
    Solve {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodChoice,
        /// Largest subset-DP size; defaults to $TURNCOST_MAX_BITMASK or 24.
        #[arg(long)]
        max_bitmask: Option<usize>,
        /// Largest number of transition systems the oracle may enumerate.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        max_enumeration: u128,
        /// Node budget for the zero-cost search.
        #[arg(long)]
        max_nodes: Option<u64>,
        #[arg(long)]
        circuit_out: Option<PathBuf>,
    },
    /// Exit 0 if some circuit costs at most the budget, 1 otherwise.
    Decide {
        graph: PathBuf,
        #[arg(long)]
        budget: String,
        #[arg(long)]
        max_bitmask: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        max_enumeration: u128,
    },
    /// Minimum-cost non-crossing circuit of an embedded 4-regular graph.
    Atrail {
        graph: PathBuf,
        #[arg(long)]
        circuit_out: Option<PathBuf>,
    },
    /// Build the gadget graph of a 3-CNF formula.
    Gadget {
        cnf: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        #[arg(long)]
        normalize_mod4: bool,
    },
    /// Read a truth assignment off a zero-cost circuit of a gadget.
    Extract { gadget: PathBuf, circuit: PathBuf },
    /// Replace high-degree gadget vertices by bounded-degree blocks.
    Blowup {
        gadget: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Write the TSP instance of the doubly subdivided line graph.
    Reduce {
        graph: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Check a circuit against a graph and print its cost.
    Verify {
        graph: PathBuf,
        circuit: PathBuf,
        /// Also require the cost to be at most this value.
        #[arg(long)]
        budget: Option<String>,
    },
    /// Graphviz rendering, optionally annotated with a circuit.
    ExportDot {
        graph: PathBuf,
        #[arg(long)]
        circuit: Option<PathBuf>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

/// A failed command, classified by exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    No(String),
    Input(String),
    Limit(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::No(_) => EXIT_NO,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Limit(_) => EXIT_LIMIT,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::No(m) | CliError::Input(m) | CliError::Limit(m) => m,
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::NotEulerian => CliError::Input(e.to_string()),
            SolveError::TooLarge { .. } | SolveError::InstanceTooLarge { .. } | SolveError::Overflow => {
                CliError::Limit(e.to_string())
            }
            SolveError::Lift(_) => CliError::Input(e.to_string()),
        }
    }
}

impl From<PlanarError> for CliError {
    fn from(e: PlanarError) -> Self {
        match e {
            PlanarError::TooLarge(_) => CliError::Limit(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ZeroCostError> for CliError {
    fn from(e: ZeroCostError) -> Self {
        match e {
            ZeroCostError::NotEulerian => CliError::Input(e.to_string()),
            ZeroCostError::BudgetExceeded(_) => CliError::Limit(e.to_string()),
        }
    }
}

type Outcome = Result<(), CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<GraphFile, CliError> {
    parse_graph(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_circuit(path: &Path, g: &Graph) -> Result<(String, EulerianCircuit), CliError> {
    let (name, c) =
        parse_circuit(&read(path)?, g).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    validate_circuit(g, &c).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok((name, c))
}

fn parse_rational(s: &str) -> Result<Rational, CliError> {
    s.parse::<Rational>().map_err(|e| CliError::Input(format!("`{s}`: {e}")))
}

fn bitmask_limit(flag: Option<usize>) -> Result<usize, CliError> {
    let limit = match flag {
        Some(n) => n,
        None => match std::env::var(BITMASK_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("{BITMASK_ENV}=`{v}` is not a non-negative integer")))?,
            Err(_) => DEFAULT_BITMASK_LIMIT,
        },
    };
    if limit > MAX_BITMASK_LIMIT {
        return Err(CliError::Input(format!("bitmask limit {limit} exceeds the maximum of {MAX_BITMASK_LIMIT}")));
    }
    Ok(limit)
}

/// The embedding, if the file declares one.
fn plane_of(f: &GraphFile) -> Result<Option<PlaneGraph>, CliError> {
    f.plane().transpose().map_err(CliError::from)
}

fn auto_planar(f: &GraphFile) -> Result<Option<PlaneGraph>, CliError> {
    let g = &f.graph;
    if f.rotation.is_none() || g.vertex_count() == 0 || g.vertices().any(|v| g.degree(v) != 4) {
        return Ok(None);
    }
    let Some(p) = plane_of(f)? else { return Ok(None) };
    Ok(crossings_forbidden(&p, &f.costs).then_some(p))
}

/// Solves a parsed graph file with the chosen method. The zero-cost search
/// reports [`CliError::No`] when no free circuit exists.
pub fn solve_file(
    f: &GraphFile,
    method: MethodChoice,
    options: &SolveOptions,
    zero_cost: ZeroCostOptions,
) -> Result<SolveResult, CliError> {
    let (g, w) = (&f.graph, &f.costs);
    match method {
        MethodChoice::Auto => {
            if let Some(p) = auto_planar(f)? {
                return Ok(min_cost_atrail(&p, w)?);
            }
            if !g.is_eulerian() {
                return Err(SolveError::NotEulerian.into());
            }
            if transition_system_count(g) <= options.enumeration_budget {
                solve_file(f, MethodChoice::Oracle, options, zero_cost)
            } else {
                Ok(solve_via_tsp(g, w, options)?)
            }
        }
        MethodChoice::Oracle => Ok(oracle_min_circuit(g, w, options.enumeration_budget)
            .map_err(SolveError::from)?
            .ok_or_else(|| CliError::Input("graph has no Eulerian circuit".into()))?),
        MethodChoice::Tsp => Ok(solve_via_tsp(g, w, &SolveOptions { contract_forced: false, ..*options })?),
        MethodChoice::TspContracted => Ok(solve_via_tsp(g, w, &SolveOptions { contract_forced: true, ..*options })?),
        MethodChoice::Atrail => {
            let p = plane_of(f)?.ok_or_else(|| CliError::Input("graph declares no rotations".into()))?;
            Ok(min_cost_atrail(&p, w)?)
        }
        MethodChoice::Zerocost => match zero_cost_circuit(g, w, zero_cost)? {
            Some(circuit) => Ok(SolveResult { cost: Rational::zero(), circuit, method: Method::ZeroCost }),
            None => Err(CliError::No("no zero-cost circuit".into())),
        },
    }
}

fn report(out: &mut dyn Write, f: &GraphFile, r: &SolveResult, circuit_out: Option<&Path>) -> Outcome {
    writeln!(out, "{}", r.cost).map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(path) = circuit_out {
        write(path, &emit_circuit(&f.name, &f.graph, &r.circuit))?;
    }
    Ok(())
}

fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let io = |e: std::io::Error| CliError::Input(e.to_string());
    match cli.command {
        Command::Solve { graph, method, max_bitmask, max_enumeration, max_nodes, circuit_out } => {
            let f = load_graph(&graph)?;
            let options = SolveOptions {
                bitmask_limit: bitmask_limit(max_bitmask)?,
                enumeration_budget: max_enumeration,
                ..SolveOptions::default()
            };
            let r = match solve_file(&f, method, &options, ZeroCostOptions { max_nodes }) {
                Err(CliError::No(m)) => {
                    writeln!(out, "none").map_err(io)?;
                    return Err(CliError::No(m));
                }
                r => r?,
            };
            writeln!(err, "method: {}", r.method).map_err(io)?;
            report(out, &f, &r, circuit_out.as_deref())
        }
        Command::Decide { graph, budget, max_bitmask, max_enumeration } => {
            let budget = parse_rational(&budget)?;
            let f = load_graph(&graph)?;
            let options = SolveOptions {
                bitmask_limit: bitmask_limit(max_bitmask)?,
                enumeration_budget: max_enumeration,
                ..SolveOptions::default()
            };
            let r = solve_file(&f, MethodChoice::Auto, &options, ZeroCostOptions::default())?;
            if r.cost <= budget {
                writeln!(out, "yes").map_err(io)?;
                Ok(())
            } else {
                writeln!(out, "no").map_err(io)?;
                Err(CliError::No(format!("minimum cost {} exceeds {budget}", r.cost)))
            }
        }
        Command::Atrail { graph, circuit_out } => {
            let f = load_graph(&graph)?;
            let r = solve_file(&f, MethodChoice::Atrail, &SolveOptions::default(), ZeroCostOptions::default())?;
            report(out, &f, &r, circuit_out.as_deref())
        }
        Command::Gadget { cnf, output, normalize_mod4: normalize } => {
            let formula = parse_cnf(&read(&cnf)?).map_err(|e| CliError::Input(format!("{}: {e}", cnf.display())))?;
            let mut g = build_gadget(&formula);
            if normalize {
                g = normalize_mod4(&g);
            }
            write(&output, &emit_gadget(&g))?;
            writeln!(out, "{} vertices, {} edges", g.graph.vertex_count(), g.graph.edge_count()).map_err(io)?;
            Ok(())
        }
        Command::Extract { gadget, circuit } => {
            let g = gadget_from_file(&read(&gadget)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", gadget.display())))?;
            let (_, c) = load_circuit(&circuit, &g.graph)?;
            let assignment = extract_assignment(&g, &c).map_err(|e| match e {
                ExtractError::Invalid(_) => CliError::Input(e.to_string()),
                _ => CliError::No(e.to_string()),
            })?;
            for (i, value) in assignment.iter().enumerate() {
                writeln!(out, "x{}={value}", i + 1).map_err(io)?;
            }
            Ok(())
        }
        Command::Blowup { gadget, output } => {
            let g = gadget_from_file(&read(&gadget)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", gadget.display())))?;
            let b = blow_up(&g).map_err(|e| CliError::Input(e.to_string()))?;
            write(&output, &emit_graph(&GraphFile::new("blowup", b.graph.clone(), b.costs)))?;
            writeln!(out, "{} vertices, {} edges, max degree {}", b.graph.vertex_count(), b.graph.edge_count(), b.graph.max_degree())
                .map_err(io)?;
            Ok(())
        }
        Command::Reduce { graph, output } => {
            let f = load_graph(&graph)?;
            if !f.graph.is_eulerian() {
                return Err(SolveError::NotEulerian.into());
            }
            let l = line_graph_weighted(&subdivide_twice(&f.graph, &f.costs));
            write(&output, &emit_tsp(&f.name, &l.tsp))?;
            writeln!(out, "{} nodes, {} arcs", l.tsp.node_count(), l.tsp.arc_count()).map_err(io)?;
            Ok(())
        }
        Command::Verify { graph, circuit, budget } => {
            let budget = budget.as_deref().map(parse_rational).transpose()?;
            let f = load_graph(&graph)?;
            let (_, c) = load_circuit(&circuit, &f.graph)?;
            let cost = circuit_cost(&f.graph, &f.costs, &c).map_err(|e| CliError::Input(e.to_string()))?;
            writeln!(out, "{cost}").map_err(io)?;
            match budget {
                Some(b) if cost > b => Err(CliError::No(format!("cost {cost} exceeds {b}"))),
                _ => Ok(()),
            }
        }
        Command::ExportDot { graph, circuit, output } => {
            let f = load_graph(&graph)?;
            let c = circuit.as_deref().map(|p| load_circuit(p, &f.graph)).transpose()?;
            let dot = export_dot(&f.name, &f.graph, c.as_ref().map(|(_, c)| c));
            match output {
                Some(path) => write(&path, &dot),
                None => out.write_all(dot.as_bytes()).map_err(io),
            }
        }
    }
}

pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match run(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "turncost: {}", f.message());
            f.code()
        }
    }
}
