use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use eqforest::constructive::{solve_with, SolveMethod};
use eqforest::drawing::{is_planar, threshold_for};
use eqforest::exact::{threshold_report, SolveError};
use eqforest::experiment::{run_experiment, ExperimentConfig};
use eqforest::generator::{self, CorpusSpec, Family};
use eqforest::io::{self, FormatError};
use eqforest::{verify, ClassPredicate, Drawing, ExactDensityReport, SolveOutcome};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNKNOWN: u8 = 4;

#[derive(Parser)]
#[command(
    name = "eqforest",
    version,
    about = "Equitable tree-colorings of IC-plane graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(multiple = false)]
struct PredicateArgs {
    /// Classes must be forests of maximum degree at most D.
    #[arg(long, value_name = "D", value_parser = clap::value_parser!(u64).range(1..))]
    defect: Option<u64>,
    /// Classes must be independent sets.
    #[arg(long)]
    independent: bool,
}

impl PredicateArgs {
    fn predicate(&self) -> ClassPredicate {
        match (self.defect, self.independent) {
            (Some(d), _) => ClassPredicate::DefectiveForest(d as usize),
            (None, true) => ClassPredicate::Independent,
            (None, false) => ClassPredicate::Forest,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Constructive,
    Exact,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    RandomPlanar,
    Ic,
    Sharpness,
    Fan,
    Star,
    Cycle,
    Complete,
    Subdivide,
    Corpus,
}

#[derive(Subcommand)]
enum Command {
    /// Check a coloring against a graph.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        #[command(flatten)]
        predicate: PredicateArgs,
    },
    /// Find an equitable tree-m-coloring.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        #[arg(long, default_value_t = 10_000)]
        timeout_ms: u64,
        /// Write the move trace (JSON) here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the partition here instead of stdout.
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Print va_eq, va_eq* and the feasibility of every m.
    Threshold {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        predicate: PredicateArgs,
        /// Budget per class count.
        #[arg(long, default_value_t = 10_000)]
        timeout_ms: u64,
    },
    /// Audit a drawing against the girth-parameterized density bounds.
    Bounds {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Generate a graph, a drawing or a whole corpus.
    Generate {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Order (random-planar, ic, cycle, complete).
        #[arg(long)]
        n: Option<usize>,
        /// Minimum girth (random-planar, ic).
        #[arg(long, default_value_t = 3)]
        girth: usize,
        /// Maximum crossings (ic).
        #[arg(long)]
        crossings: Option<usize>,
        /// Clique order (sharpness).
        #[arg(long)]
        k: Option<usize>,
        /// Added vertices (sharpness); defaults to 2k - 3.
        #[arg(long)]
        t: Option<usize>,
        /// Path length (fan).
        #[arg(long)]
        path_len: Option<usize>,
        /// Maximum degree (star).
        #[arg(long)]
        delta: Option<usize>,
        /// Base graph file (subdivide).
        #[arg(long)]
        base: Option<PathBuf>,
        /// Subdivision vertices per edge (subdivide).
        #[arg(long)]
        r: Option<usize>,
        /// Instances per girth class (corpus).
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Largest order (corpus).
        #[arg(long, default_value_t = 60)]
        max_order: usize,
        /// Also emit the girth >= 26 class (corpus).
        #[arg(long)]
        high_girth: bool,
        /// Output file, or directory for a corpus.
        #[arg(short)]
        o: PathBuf,
    },
    /// Solve every corpus graph for a range of m and write the report.
    Experiment {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        report: PathBuf,
        /// Inclusive range `a..b`; default F(girth)..min(n, F(girth)+4).
        #[arg(long, value_parser = parse_range)]
        m_range: Option<(usize, usize)>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 10_000)]
        timeout_ms: u64,
        /// Leave the elapsed column empty so reports are reproducible.
        #[arg(long)]
        no_timing: bool,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a: usize = a.trim().parse().map_err(|_| "bad lower bound")?;
    let b: usize = b.trim().parse().map_err(|_| "bad upper bound")?;
    if a == 0 || a > b {
        return Err("need 1 <= a <= b".into());
    }
    Ok((a, b))
}

/// An error with the exit code it maps to.
struct Failure(u8, String);

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Failure {
        Failure(EXIT_INPUT, e.to_string())
    }
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure(EXIT_INPUT, msg.into())
}

fn load(path: &Path) -> Result<Drawing, Failure> {
    let (d, warnings) = io::read_graph_input(path)?;
    for w in warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(d)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Verify {
            graph,
            coloring,
            predicate,
        } => {
            let d = load(&graph)?;
            let p = io::read_partition(&coloring)?;
            let report = verify(d.graph(), &p, predicate.predicate())
                .map_err(|e| input_error(e.to_string()))?;
            println!("{report}");
            Ok(if report.is_valid() { 0 } else { EXIT_FAIL })
        }
        Command::Solve {
            graph,
            m,
            method,
            timeout_ms,
            trace,
            o,
        } => {
            let d = load(&graph)?;
            let method = match method {
                MethodArg::Constructive => SolveMethod::Constructive,
                MethodArg::Exact => SolveMethod::Exact,
                MethodArg::Auto => SolveMethod::Auto,
            };
            let report = solve_with(
                d.graph(),
                m as usize,
                method,
                Duration::from_millis(timeout_ms),
            );
            if let Some(path) = &trace {
                write_file(path, &io::trace_to_string(&report.trace))?;
            }
            match &report.outcome {
                SolveOutcome::Sat(p) => {
                    let by = report.decided_by.map(|s| s.to_string()).unwrap_or_default();
                    eprintln!("SAT ({by})");
                    match &o {
                        Some(path) => io::write_partition(path, p)?,
                        None => print!("{}", io::partition_to_string(p)),
                    }
                    Ok(0)
                }
                SolveOutcome::Unsat => {
                    println!("UNSAT");
                    Ok(EXIT_FAIL)
                }
                SolveOutcome::Unknown(reason) => {
                    println!("UNKNOWN ({reason})");
                    Ok(EXIT_UNKNOWN)
                }
            }
        }
        Command::Threshold {
            graph,
            predicate,
            timeout_ms,
        } => {
            let d = load(&graph)?;
            match threshold_report(
                d.graph(),
                predicate.predicate(),
                Duration::from_millis(timeout_ms),
            ) {
                Ok(r) => {
                    println!(
                        "va_eq={} va_eq*={} feasibility={}",
                        r.va_eq,
                        r.va_eq_star,
                        r.feasibility_bits()
                    );
                    Ok(0)
                }
                Err(e @ SolveError::Undecided { .. }) => {
                    println!("UNKNOWN: {e}");
                    Ok(EXIT_UNKNOWN)
                }
                Err(e) => Err(input_error(e.to_string())),
            }
        }
        Command::Bounds { graph } => {
            let d = load(&graph)?;
            let violations = d.validate_one_plane();
            let ic = d.is_ic();
            let planar = is_planar(&d.planarize());
            let r: ExactDensityReport = d.check_density();
            println!("n={} e={} girth={}", r.order, r.edges, r.girth);
            for v in &violations {
                println!("  {v}");
            }
            println!("1-plane: {}", verdict(violations.is_empty()));
            println!("IC: {}", verdict(ic));
            println!("planar skeleton: {}", verdict(planar));
            match &r.edge_bound {
                Some(b) => {
                    let approx = *b.numer() as f64 / *b.denom() as f64;
                    println!(
                        "edge bound: {} <= {b} (~{approx:.3}) {}",
                        r.edges,
                        verdict(r.edges_ok)
                    );
                }
                None => println!("edge bound: vacuous (acyclic) PASS"),
            }
            match (r.min_degree, r.min_degree_bound) {
                (Some(d), Some(b)) => {
                    println!("min degree: {d} <= {b} {}", verdict(r.min_degree_ok))
                }
                _ => println!("min degree: vacuous PASS"),
            }
            println!(
                "crossings: {} <= {} {}",
                r.crossings,
                r.crossing_cap,
                verdict(r.crossings_ok)
            );
            println!("F(girth)={}", threshold_for(r.girth));
            let ok = violations.is_empty() && ic && planar && r.passes();
            println!("overall: {}", verdict(ok));
            Ok(if ok { 0 } else { EXIT_FAIL })
        }
        Command::Generate {
            family,
            seed,
            n,
            girth,
            crossings,
            k,
            t,
            path_len,
            delta,
            base,
            r,
            count,
            max_order,
            high_girth,
            o,
        } => {
            let need = |v: Option<usize>, flag: &str| {
                v.ok_or_else(|| input_error(format!("--{flag} is required")))
            };
            let gen_err = |e: generator::GeneratorError| input_error(e.to_string());
            let graph = match family {
                FamilyArg::Corpus => {
                    let mut spec = CorpusSpec::new(seed, count);
                    spec.max_order = max_order;
                    if high_girth {
                        spec.girths.push(26);
                    }
                    let entries = generator::corpus(&spec).map_err(gen_err)?;
                    io::write_corpus(&o, &spec, &entries)?;
                    eprintln!("wrote {} drawings to {}", entries.len(), o.display());
                    return Ok(0);
                }
                FamilyArg::RandomPlanar => {
                    generator::random_planar(need(n, "n")?, girth, seed).map_err(gen_err)?
                }
                FamilyArg::Ic => {
                    let n = need(n, "n")?;
                    let g = generator::random_planar(n, girth, seed).map_err(gen_err)?;
                    let d = generator::ic_augment(&g, crossings.unwrap_or(n / 4), seed)
                        .map_err(gen_err)?;
                    io::write_drawing(&o, &d)?;
                    return Ok(0);
                }
                FamilyArg::Sharpness => {
                    let k = need(k, "k")?;
                    let t = t.unwrap_or((2 * k).saturating_sub(3));
                    generator::sharpness_example(k, t).map_err(gen_err)?
                }
                FamilyArg::Fan => {
                    generator::fan_example(need(path_len, "path-len")?).map_err(gen_err)?
                }
                FamilyArg::Star => {
                    generator::named(&Family::Star(need(delta, "delta")?)).map_err(gen_err)?
                }
                FamilyArg::Cycle => {
                    generator::named(&Family::Cycle(need(n, "n")?)).map_err(gen_err)?
                }
                FamilyArg::Complete => {
                    generator::named(&Family::Complete(need(n, "n")?)).map_err(gen_err)?
                }
                FamilyArg::Subdivide => {
                    let base = base.ok_or_else(|| input_error("--base is required"))?;
                    let g = load(&base)?.graph().clone();
                    generator::subdivide(&g, need(r, "r")?)
                }
            };
            io::write_drawing(&o, &Drawing::plane(graph))?;
            Ok(0)
        }
        Command::Experiment {
            corpus,
            report,
            m_range,
            jobs,
            timeout_ms,
            no_timing,
        } => {
            let graphs = io::read_corpus_dir(&corpus)?;
            let cfg = ExperimentConfig {
                m_range,
                jobs: jobs.max(1),
                timeout: Duration::from_millis(timeout_ms),
                timing: !no_timing,
                ..Default::default()
            };
            let summary = run_experiment(&graphs, &cfg);
            write_file(&report, &io::report_to_string(&summary.rows))?;
            eprintln!(
                "{} graphs, {} contradictions, {} verification failures",
                summary.rows.len(),
                summary.contradictions,
                summary.verify_failures
            );
            Ok(if summary.ok() { 0 } else { EXIT_FAIL })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
