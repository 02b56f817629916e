//! `dvy`: exact diversity and tight-span computations over JSON files.
//!
//! JSON goes to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 1 a check semantically failed (axiom violation, non-membership,
//! reconstruction failure) with the witness in the payload, 2 input or
//! format errors. All randomness is seeded; identical invocations print
//! identical bytes.

mod render;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dvy_core::diversity::{check_axioms, CheckMode, FiniteDiversity};
use dvy_core::io;
use dvy_core::{diameter_diversity, induced_metric, l1_diversity, truncate};

#[derive(Parser)]
#[command(name = "dvy", version, about = "Exact finite diversities, tight spans, and Steiner bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the diversity axioms of a value table.
    Check {
        file: PathBuf,
        /// Check only the generating family of triangle inequalities
        /// (restricted witnesses).
        #[arg(long)]
        fast: bool,
    },
    /// Restrict a diversity to pairs.
    Induced { file: PathBuf },
    /// Build a diversity from another object.
    Make {
        #[command(subcommand)]
        what: MakeCmd,
    },
    /// Tight-span operations.
    Tight {
        #[command(subcommand)]
        what: TightCmd,
    },
    /// Tree reconstruction and additivity.
    Phylo {
        #[command(subcommand)]
        what: PhyloCmd,
    },
    /// Steiner trees, weight programs, and lower bounds.
    Steiner {
        #[command(subcommand)]
        what: SteinerCmd,
    },
}

#[derive(Subcommand)]
enum MakeCmd {
    /// Diameter diversity of a metric.
    Diameter { metric: PathBuf },
    /// Coordinate-range diversity of a rational point set.
    L1 { points: PathBuf },
    /// Subtree-length diversity of a weighted tree (over its leaves).
    Tree { tree: PathBuf },
    /// Steiner-length diversity of a graph over its terminals.
    SteinerLength { graph: PathBuf },
    /// Truncation at order k.
    Truncate {
        diversity: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum TightCmd {
    /// Feasible-cone and tight-span membership of a span function.
    Member { diversity: PathBuf, function: PathBuf },
    /// Lower a feasible function to a tight one.
    Minimize { diversity: PathBuf, function: PathBuf },
    /// The Kuratowski function of an element.
    Kuratowski { diversity: PathBuf, element: String },
    /// The induced tight-span diversity of a family of tight functions.
    #[command(name = "deltaT")]
    DeltaT {
        diversity: PathBuf,
        #[arg(required = true)]
        functions: Vec<PathBuf>,
    },
    /// Seeded sample of tight points.
    Sample {
        diversity: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Closed-form three-point cell complex.
    Complex3 {
        diversity: PathBuf,
        /// Also write a 2D projection as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Tight point within prescribed radii of given families.
    Extend { diversity: PathBuf, constraints: PathBuf },
}

#[derive(Subcommand)]
enum PhyloCmd {
    /// Rebuild the weighted tree realizing a diversity exactly.
    Reconstruct { diversity: PathBuf },
    /// Four-point additivity check of a metric.
    Fourpoint { metric: PathBuf },
}

#[derive(Args)]
struct GraphArg {
    graph: PathBuf,
}

#[derive(Subcommand)]
enum SteinerCmd {
    /// Exact minimum Steiner tree within the graph.
    Exact { graph: PathBuf },
    /// Cheapest tree dominating a metric on pairs.
    Abstract { metric: PathBuf },
    /// Cheapest tree dominating a diversity on all subsets.
    Diversity { diversity: PathBuf },
    /// Truncation lower-bound ladder up to kmax, plus the exact optimum.
    Bounds {
        graph: PathBuf,
        #[arg(long)]
        kmax: Option<usize>,
    },
}

/// Payload plus whether the checked property held.
pub struct Outcome {
    pub json: serde_json::Value,
    pub pretty: String,
    pub ok: bool,
}

impl Outcome {
    fn pass(json: serde_json::Value, pretty: String) -> Self {
        Outcome {
            json,
            pretty,
            ok: true,
        }
    }

    fn fail(json: serde_json::Value, pretty: String) -> Self {
        Outcome {
            json,
            pretty,
            ok: false,
        }
    }
}

fn read(path: &PathBuf) -> Result<String, dvy_core::Error> {
    std::fs::read_to_string(path)
        .map_err(|e| dvy_core::Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_diversity(path: &PathBuf) -> Result<FiniteDiversity, dvy_core::Error> {
    let (ground, values) = io::read_diversity_raw(&read(path)?)?;
    FiniteDiversity::new(ground, values, CheckMode::Fast)
}

fn run(cli: &Cli) -> Result<Outcome, dvy_core::Error> {
    match &cli.command {
        Command::Check { file, fast } => {
            let (ground, values) = io::read_diversity_raw(&read(file)?)?;
            let mode = if *fast {
                CheckMode::Fast
            } else {
                CheckMode::Full
            };
            let report = check_axioms(&ground, &values, mode)?;
            Ok(render::axiom_report(&ground, &values, &report))
        }
        Command::Induced { file } => {
            let metric = induced_metric(&load_diversity(file)?);
            Ok(Outcome::pass(
                serde_json::to_value(io::write_metric(&metric)).unwrap(),
                render::pretty_metric(&metric),
            ))
        }
        Command::Make { what } => {
            let delta = match what {
                MakeCmd::Diameter { metric } => diameter_diversity(&io::read_metric(&read(metric)?)?),
                MakeCmd::L1 { points } => l1_diversity(&io::read_points(&read(points)?)?),
                MakeCmd::Tree { tree } => {
                    let t = io::read_tree(&read(tree)?)?;
                    let x = match t.leaf_labels() {
                        Some(ls) => ls.to_vec(),
                        None => t.nodes().to_vec(),
                    };
                    dvy_core::phylo::tree_diversity(&t, &x)?
                }
                MakeCmd::SteinerLength { graph } => {
                    let instance = io::read_graph_instance(&read(graph)?)?;
                    dvy_core::steiner::steiner_length_diversity(&instance)?
                }
                MakeCmd::Truncate { diversity, k } => truncate(&load_diversity(diversity)?, *k)?,
            };
            Ok(Outcome::pass(
                serde_json::to_value(io::write_diversity(&delta)).unwrap(),
                render::pretty_diversity(&delta),
            ))
        }
        Command::Tight { what } => run_tight(what),
        Command::Phylo { what } => run_phylo(what),
        Command::Steiner { what } => run_steiner(what),
    }
}

fn run_tight(cmd: &TightCmd) -> Result<Outcome, dvy_core::Error> {
    use dvy_core::tightspan::{
        delta_t, hyperconvex_extension, in_t, kuratowski, minimize_to_tight, sample_tight,
        three_point_complex,
    };
    match cmd {
        TightCmd::Member { diversity, function } => {
            let delta = load_diversity(diversity)?;
            let f = io::read_function(&read(function)?)?;
            let report = in_t(&delta, &f)?;
            Ok(render::membership(&delta, &f, &report))
        }
        TightCmd::Minimize { diversity, function } => {
            let delta = load_diversity(diversity)?;
            let g = io::read_function(&read(function)?)?;
            match minimize_to_tight(&delta, &g) {
                Ok(f) => Ok(Outcome::pass(
                    serde_json::to_value(io::write_function(&f)).unwrap(),
                    render::pretty_function(&f),
                )),
                Err(dvy_core::Error::NotInP { set, cover, cost }) => {
                    Ok(render::not_in_p(&delta, set, &cover, &cost))
                }
                Err(e) => Err(e),
            }
        }
        TightCmd::Kuratowski { diversity, element } => {
            let delta = load_diversity(diversity)?;
            let h = kuratowski(&delta, element)?;
            Ok(Outcome::pass(
                serde_json::to_value(io::write_function(&h)).unwrap(),
                render::pretty_function(&h),
            ))
        }
        TightCmd::DeltaT { diversity, functions } => {
            let delta = load_diversity(diversity)?;
            let funcs: Vec<_> = functions
                .iter()
                .map(|p| io::read_function(&read(p)?))
                .collect::<Result<_, _>>()?;
            let refs: Vec<&_> = funcs.iter().collect();
            let value = delta_t(&delta, &refs)?;
            Ok(Outcome::pass(
                serde_json::json!({ "delta_T": value.to_string() }),
                format!("delta_T = {value}"),
            ))
        }
        TightCmd::Sample { diversity, seed, count } => {
            let delta = load_diversity(diversity)?;
            let samples = sample_tight(&delta, *seed, *count)?;
            let jsons: Vec<_> = samples
                .iter()
                .map(|f| serde_json::to_value(io::write_function(f)).unwrap())
                .collect();
            let pretty = samples
                .iter()
                .map(render::pretty_function)
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome::pass(serde_json::json!({ "functions": jsons }), pretty))
        }
        TightCmd::Complex3 { diversity, svg } => {
            let delta = load_diversity(diversity)?;
            if delta.n() != 3 {
                return Err(dvy_core::Error::Input(format!(
                    "complex3 needs exactly 3 elements, got {}",
                    delta.n()
                )));
            }
            let g = delta.ground();
            let m = |bits: u32| delta.value(dvy_core::SubsetMask(bits)).clone();
            let complex = three_point_complex(m(0b011), m(0b101), m(0b110), m(0b111))?;
            if let Some(path) = svg {
                std::fs::write(path, svg::complex_svg(&complex, g.labels()))
                    .map_err(|e| dvy_core::Error::Input(format!("cannot write SVG: {e}")))?;
            }
            Ok(Outcome::pass(
                serde_json::to_value(io::write_complex(&complex)).unwrap(),
                render::pretty_complex(&complex),
            ))
        }
        TightCmd::Extend { diversity, constraints } => {
            let delta = load_diversity(diversity)?;
            let cs = io::read_constraints(&read(constraints)?, delta.ground())?;
            match hyperconvex_extension(&delta, &cs) {
                Ok(g) => Ok(Outcome::pass(
                    serde_json::to_value(io::write_function(&g)).unwrap(),
                    render::pretty_function(&g),
                )),
                Err(dvy_core::Error::Premise {
                    sublist,
                    required,
                    got,
                }) => {
                    // Re-derive the reported violation before printing.
                    let pooled: Vec<&dvy_core::tightspan::SpanFunction> = sublist
                        .iter()
                        .flat_map(|&i| cs[i].family().iter())
                        .collect();
                    let check = delta_t(&delta, &pooled)?;
                    let radii: dvy_core::Rat =
                        sublist.iter().map(|&i| cs[i].radius()).sum();
                    if check.to_string() != required || radii.to_string() != got || radii >= check
                    {
                        return Err(dvy_core::Error::Input(
                            "internal: a reported witness failed re-verification".into(),
                        ));
                    }
                    Ok(Outcome::fail(
                        serde_json::json!({
                            "premise": false,
                            "sublist": sublist,
                            "required": required,
                            "got": got,
                        }),
                        format!(
                            "premise fails on constraints {sublist:?}: radii sum {got} < delta_T {required}"
                        ),
                    ))
                }
                Err(e) => Err(e),
            }
        }
    }
}

fn run_phylo(cmd: &PhyloCmd) -> Result<Outcome, dvy_core::Error> {
    use dvy_core::phylo::{four_point_check, reconstruct_tree};
    match cmd {
        PhyloCmd::Reconstruct { diversity } => {
            let delta = load_diversity(diversity)?;
            match reconstruct_tree(&delta) {
                Ok(tree) => Ok(Outcome::pass(
                    serde_json::to_value(io::write_tree(&tree)).unwrap(),
                    render::pretty_tree(&tree),
                )),
                Err(failure) => Ok(render::reconstruct_failure(&delta, &failure)),
            }
        }
        PhyloCmd::Fourpoint { metric } => {
            let m = io::read_metric(&read(metric)?)?;
            let (ok, witness) = four_point_check(&m);
            Ok(render::four_point(&m, ok, witness.as_ref()))
        }
    }
}

fn run_steiner(cmd: &SteinerCmd) -> Result<Outcome, dvy_core::Error> {
    use dvy_core::steiner::{
        abstract_steiner, diversity_steiner, metric_steiner_exact, steiner_lower_bounds,
    };
    match cmd {
        SteinerCmd::Exact { graph } => {
            let instance = io::read_graph_instance(&read(graph)?)?;
            let tree = metric_steiner_exact(&instance, &instance.terminal_names())?;
            Ok(render::steiner_tree(&instance, &tree))
        }
        SteinerCmd::Abstract { metric } => {
            let m = io::read_metric(&read(metric)?)?;
            let sol = abstract_steiner(&m)?;
            Ok(render::steiner_solution(m.ground().labels(), &sol))
        }
        SteinerCmd::Diversity { diversity } => {
            let delta = load_diversity(diversity)?;
            let sol = diversity_steiner(&delta)?;
            Ok(render::steiner_solution(delta.ground().labels(), &sol))
        }
        SteinerCmd::Bounds { graph, kmax } => {
            let instance = io::read_graph_instance(&read(graph)?)?;
            let n = instance.terminal_names().len();
            let ladder = steiner_lower_bounds(&instance, kmax.unwrap_or(n))?;
            Ok(render::ladder(&instance, &ladder))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if cli.pretty {
                println!("{}", outcome.pretty);
            } else {
                println!("{}", serde_json::to_string(&outcome.json).unwrap());
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
