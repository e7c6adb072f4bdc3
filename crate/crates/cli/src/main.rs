use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use oldr::discretizer::validate_separation;
use oldr::geometry::{build_grid, build_workspace};
use oldr::ilp_core::Backend;
use oldr::separation_prover::{verify, Verdict};

use oldr_cli::bench::{plot_svg, raw_tsv, run_bench, summarize, summary_tsv, BenchSpec, Pattern};
use oldr_cli::formats::{read_instance, read_plan, write_instance, write_plan, PlanFile};
use oldr_cli::pipeline::{solve_instance, Method};
use oldr_cli::render::{render_svg, RenderMode};
use oldr_cli::{resolve_backend, SOLVER_CMD_ENV};

const DEFAULT_EPSILONS: [f64; 3] = [0.1, 0.05, 0.025];

#[derive(Parser)]
#[command(name = "oldr", version, about = "Labeled disc routing on a triangular grid")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
    /// Random seed for generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// ILP backend: auto, exhaustive or external.
    #[arg(long, global = true, default_value = "auto")]
    backend: String,
    /// External solver command with {model} and {solution} placeholders.
    #[arg(long, global = true)]
    solver_cmd: Option<String>,
    /// Output file (or prefix for bench); stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenPattern {
    Random,
    Dense,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance.
    Gen {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        /// Number of robots; for dense, defaults to as many as fit.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, value_enum, default_value = "random")]
        pattern: GenPattern,
        /// Dense pitch slightly above 8/3; `--strict false` packs at exactly 8/3.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        strict: bool,
    },
    /// Solve an instance and write the validated continuous plan.
    Solve {
        instance: PathBuf,
        /// triilp, triilp-split-K, paft or isag.
        #[arg(long, default_value = "triilp")]
        method: String,
        /// Also write the grid-phase plan here.
        #[arg(long)]
        discrete_out: Option<PathBuf>,
    },
    /// Run the snapping-clearance case sweep.
    Prove {
        /// Comma-separated epsilons, run in descending order. Without it the
        /// default schedule stops at the first passing epsilon.
        #[arg(long, value_delimiter = ',')]
        epsilon: Vec<f64>,
    },
    /// Run a benchmark suite; writes PREFIX.tsv, PREFIX.raw.tsv and PREFIX.svg.
    Bench {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        /// Comma-separated robot counts.
        #[arg(long, value_delimiter = ',', required = true)]
        counts: Vec<usize>,
        /// Number of seeds per count, starting at --seed.
        #[arg(long, default_value_t = 10)]
        runs: u64,
        /// random, dense, dense-exact or identity.
        #[arg(long, default_value = "random")]
        pattern: String,
        /// Comma-separated methods.
        #[arg(long, value_delimiter = ',', default_value = "triilp")]
        methods: Vec<String>,
    },
    /// Draw an instance, optionally with a plan, as SVG.
    Render {
        instance: PathBuf,
        #[arg(long)]
        plan: Option<PathBuf>,
        /// Time (continuous plan) or step (discrete plan) to draw.
        #[arg(long, default_value_t = 0.0)]
        at: f64,
        /// Draw whole trajectories instead of one configuration.
        #[arg(long)]
        trace: bool,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl ToString) -> Failure {
    Failure { code, msg: msg.to_string() }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| fail(1, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_text(p: &Path) -> Result<String, Failure> {
    fs::read_to_string(p).map_err(|e| fail(2, format!("{}: {e}", p.display())))
}

fn backend(cli: &Cli) -> Result<Backend, Failure> {
    let env = std::env::var(SOLVER_CMD_ENV).ok();
    resolve_backend(&cli.backend, cli.solver_cmd.as_deref(), env.as_deref()).map_err(|e| fail(2, e))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.cmd {
        Command::Gen { n1, n2, count, pattern, strict } => {
            let ws = build_workspace(*n1, *n2).map_err(|e| fail(2, e))?;
            let inst = match pattern {
                GenPattern::Random => {
                    let n = count.ok_or_else(|| fail(2, "--count is required for the random pattern"))?;
                    oldr::instance_gen::random_continuous(&ws, n, cli.seed)
                }
                GenPattern::Dense => oldr::instance_gen::dense_continuous(&ws, *count, *strict, cli.seed),
            }
            .map_err(|e| fail(3, e))?;
            emit(&cli.out, &write_instance(&inst))
        }
        Command::Solve { instance, method, discrete_out } => {
            let method: Method = method.parse().map_err(|e| fail(2, e))?;
            let inst = read_instance(&read_text(instance)?).map_err(|e| fail(2, e))?;
            let report = validate_separation(&inst);
            if !report.is_admissible() {
                return Err(fail(3, format!("instance is not admissible:\n{report}")));
            }
            let backend = backend(cli)?;
            let out = solve_instance(&inst, method, &backend).map_err(|e| fail(e.exit_code(), e))?;
            let fields = out.fields();
            let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in &fields {
                eprintln!("{k:<width$}  {v}");
            }
            for (k, v) in &fields {
                eprintln!("{k}={v}");
            }
            if let Some(p) = discrete_out {
                emit(&Some(p.clone()), &write_plan(&PlanFile::Discrete(out.discrete.clone())))?;
            }
            emit(&cli.out, &write_plan(&PlanFile::Continuous(out.continuous)))
        }
        Command::Prove { epsilon } => {
            let explicit = !epsilon.is_empty();
            let mut eps: Vec<f64> = if explicit { epsilon.clone() } else { DEFAULT_EPSILONS.to_vec() };
            eps.sort_by(|a, b| b.total_cmp(a));
            let mut text = String::new();
            let mut passed = false;
            for e in eps {
                if !(e > 0.0 && e.is_finite()) {
                    return Err(fail(2, format!("epsilon must be positive, got {e}")));
                }
                let cert = verify(e);
                eprintln!("epsilon={e} min_delta={:.9} verdict={}", cert.min_delta, cert.verdict);
                if !text.is_empty() {
                    text.push('\n');
                }
                text.push_str(&cert.to_string());
                passed |= cert.verdict == Verdict::Pass;
                if passed && !explicit {
                    break;
                }
            }
            emit(&cli.out, &text)?;
            if passed {
                Ok(())
            } else {
                Err(fail(1, "no epsilon passed"))
            }
        }
        Command::Bench { n1, n2, counts, runs, pattern, methods } => {
            let pattern = match pattern.as_str() {
                "random" => Pattern::Random,
                "dense" => Pattern::Dense { strict: true },
                "dense-exact" => Pattern::Dense { strict: false },
                "identity" => Pattern::Identity,
                other => return Err(fail(2, format!("unknown pattern `{other}`"))),
            };
            let methods: Vec<Method> = methods.iter().map(|m| m.parse()).collect::<Result<_, _>>().map_err(|e| fail(2, e))?;
            let spec = BenchSpec {
                workspace: build_workspace(*n1, *n2).map_err(|e| fail(2, e))?,
                counts: counts.clone(),
                seeds: (cli.seed..cli.seed + runs).collect(),
                pattern,
                methods,
            };
            let raw = run_bench(&spec, &backend(cli)?);
            let summary = summarize(&raw);
            match &cli.out {
                Some(prefix) => {
                    let with = |ext: &str| PathBuf::from(format!("{}.{ext}", prefix.display()));
                    emit(&Some(with("tsv")), &summary_tsv(&summary))?;
                    emit(&Some(with("raw.tsv")), &raw_tsv(&raw))?;
                    emit(&Some(with("svg")), &plot_svg(&summary))
                }
                None => emit(&None, &summary_tsv(&summary)),
            }
        }
        Command::Render { instance, plan, at, trace } => {
            let inst = read_instance(&read_text(instance)?).map_err(|e| fail(2, e))?;
            let plan = match plan {
                Some(p) => Some(read_plan(&read_text(p)?).map_err(|e| fail(2, e))?),
                None => None,
            };
            let grid = build_grid(&inst.workspace);
            let mode = if *trace { RenderMode::Trace } else { RenderMode::At(*at) };
            let svg = render_svg(&inst, &grid, plan.as_ref(), mode).map_err(|e| fail(2, e))?;
            emit(&cli.out, &svg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("oldr: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
