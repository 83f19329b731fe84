//! Command-line driver behind the `pfl` binary.
//!
//! Exit codes: `check` returns 0 for true and 1 for false; `forall` returns
//! 0 for valid, 1 for a counterexample and 3 for unknown; every other
//! successful command returns 0. Errors return 2.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::fault_tree::{FaultTree, ProbVector};
use crate::langpfl::{self, format_result, format_vector, Lowered, Outcome, TaskKind};
use crate::logic::Formula2;
use crate::prob::{self, EvalResult, Layer1, DEFAULT_EQ_TOLERANCE, DEFAULT_MONOMIAL_CAP};
use crate::region::{self, Forall, RegionConfig, DEFAULT_DIM_CAP, DEFAULT_EPSILON};

/// Largest tree `computeall` enumerates without `--force`.
pub const COMPUTEALL_GUARD: usize = 24;

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pfl", version, about = "Query fault trees with a probabilistic logic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide a probability assertion for the given basic-event probabilities.
    Check(QueryArgs),
    /// Evaluate a probability expression.
    Compute(QueryArgs),
    /// Enumerate the status vectors satisfying a Boolean formula.
    Computeall {
        #[command(flatten)]
        query: QueryArgs,
        /// Enumerate even when the tree has more than 24 basic events.
        #[arg(long)]
        force: bool,
    },
    /// Split the parameter space into boxes where the assertion holds, fails or is undecided.
    Partition {
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        region: RegionArgs,
        /// Partition file to write; the summary goes to standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Decide whether the assertion holds for every probability vector.
    Forall {
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        region: RegionArgs,
    },
    /// Write the negated assertion as an SMT-LIB2 script.
    ExportSmt {
        #[command(flatten)]
        query: QueryArgs,
        /// Script file to write instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct QueryArgs {
    /// Fault tree file.
    #[arg(long, short)]
    tree: PathBuf,
    /// Query file.
    #[arg(long, short, required_unless_present = "query_text", conflicts_with = "query_text")]
    query: Option<PathBuf>,
    /// Query text given inline.
    #[arg(long)]
    query_text: Option<String>,
    /// Basic-event probability as NAME=VALUE; repeatable.
    #[arg(long = "prob", short = 'p', value_name = "NAME=VALUE")]
    probs: Vec<String>,
    /// File with one `NAME VALUE` pair per line; flags take precedence.
    #[arg(long)]
    prob_file: Option<PathBuf>,
    /// Probability for basic events given no value.
    #[arg(long)]
    default_prob: Option<f64>,
    /// Tolerance for `=` comparisons.
    #[arg(long, default_value_t = DEFAULT_EQ_TOLERANCE)]
    eq_tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Debug, Args)]
struct RegionArgs {
    /// Undecided volume to stop at.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Largest number of parameter dimensions.
    #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
    dim_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    /// One result line per task.
    Machine,
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

struct Loaded {
    tree: FaultTree,
    lowered: Lowered,
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load(args: &QueryArgs) -> Result<Loaded, Failure> {
    if args.eq_tolerance.is_nan() || args.eq_tolerance <= 0.0 {
        return Err(Failure(format!("--eq-tolerance must be positive, got {}", args.eq_tolerance)));
    }
    let tree_text = read(&args.tree)?;
    let tree = FaultTree::parse(&tree_text).map_err(|e| Failure(format!("{}: {e}", args.tree.display())))?;
    let (origin, text) = match (&args.query, &args.query_text) {
        (Some(path), _) => (path.display().to_string(), read(path)?),
        (None, Some(text)) => ("<query>".to_string(), text.clone()),
        (None, None) => return Err(Failure("no query given".into())),
    };
    let lowered = langpfl::parse_query(&text)
        .and_then(|q| langpfl::lower_query(&q, &tree))
        .map_err(|e| Failure(format!("{origin}: {e}")))?;
    Ok(Loaded { tree, lowered })
}

fn parse_prob(name: &str, value: &str) -> Result<f64, Failure> {
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| Failure(format!("probability for `{name}` is not a number: `{value}`")))?;
    if !(0.0..=1.0).contains(&v) {
        return Err(Failure(format!("probability for `{name}` is outside [0, 1]: {v}")));
    }
    Ok(v)
}

/// Basic-event probabilities from the file, then the flags, then the default.
fn rho(args: &QueryArgs, tree: &FaultTree) -> Result<ProbVector, Failure> {
    let mut given: BTreeMap<String, f64> = BTreeMap::new();
    if let Some(path) = &args.prob_file {
        let text = read(path)?;
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Failure(format!("{}:{}: expected `NAME VALUE`", path.display(), i + 1)));
            };
            let v = parse_prob(name, value).map_err(|Failure(m)| Failure(format!("{}:{}: {m}", path.display(), i + 1)))?;
            if given.insert(name.to_string(), v).is_some() {
                return Err(Failure(format!("{}:{}: `{name}` given twice", path.display(), i + 1)));
            }
        }
    }
    let mut flagged = std::collections::BTreeSet::new();
    for item in &args.probs {
        let Some((name, value)) = item.split_once('=') else {
            return Err(Failure(format!("--prob expects NAME=VALUE, got `{item}`")));
        };
        let name = name.trim();
        if !flagged.insert(name.to_string()) {
            return Err(Failure(format!("--prob `{name}` given twice")));
        }
        given.insert(name.to_string(), parse_prob(name, value)?);
    }
    if let Some(d) = args.default_prob {
        parse_prob("--default-prob", &d.to_string())?;
    }
    for name in given.keys() {
        match tree.event(name) {
            None => return Err(Failure(format!("probability given for unknown event `{name}`"))),
            Some(e) if !tree.is_basic(e) => {
                return Err(Failure(format!("probability given for `{name}`, which is not a basic event")))
            }
            Some(_) => {}
        }
    }
    let mut probs = Vec::with_capacity(tree.num_basic());
    for name in tree.basic_event_names() {
        match given.get(name).copied().or(args.default_prob) {
            Some(v) => probs.push(v),
            None => return Err(Failure(format!("no probability for basic event `{name}`; pass --prob or --default-prob"))),
        }
    }
    Ok(ProbVector::new(probs)?)
}

fn region_config(args: &RegionArgs, eq_tolerance: f64) -> Result<RegionConfig, Failure> {
    if !(args.epsilon > 0.0 && args.epsilon <= 1.0) {
        return Err(Failure(format!("--epsilon must lie in (0, 1], got {}", args.epsilon)));
    }
    Ok(RegionConfig {
        epsilon: args.epsilon,
        eq_tolerance,
        dim_cap: args.dim_cap,
        ..RegionConfig::default()
    })
}

fn assertion(loaded: &Loaded, command: &str) -> Result<Formula2, Failure> {
    match &loaded.lowered {
        Lowered::Check(psi) => Ok(psi.clone()),
        other => Err(Failure(format!(
            "`{command}` needs a `check:` query, found `{}:`",
            other.kind().keyword()
        ))),
    }
}

fn expect_kind(loaded: &Loaded, kind: TaskKind) -> Result<(), Failure> {
    if loaded.lowered.kind() == kind {
        Ok(())
    } else {
        Err(Failure(format!(
            "`{}` needs a `{}:` query, found `{}:`",
            kind.keyword(),
            kind.keyword(),
            loaded.lowered.kind().keyword()
        )))
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Check(args) => {
            let loaded = load(&args)?;
            expect_kind(&loaded, TaskKind::Check)?;
            let psi = assertion(&loaded, "check")?;
            let rho = rho(&args, &loaded.tree)?;
            let holds = prob::check_layer2(&loaded.tree, &psi, &rho, args.eq_tolerance)?;
            writeln!(out, "{}", format_result(&Outcome::Check(holds)))?;
            Ok(if holds { EXIT_TRUE } else { EXIT_FALSE })
        }
        Command::Compute(args) => {
            let loaded = load(&args)?;
            expect_kind(&loaded, TaskKind::Compute)?;
            let Lowered::Compute(xi) = &loaded.lowered else { unreachable!() };
            let rho = rho(&args, &loaded.tree)?;
            let value = prob::eval_layer3(&loaded.tree, xi, &rho)?;
            match (args.format, value) {
                (Format::Machine, EvalResult::Value(v)) => writeln!(out, "{v:e}")?,
                (Format::Machine, EvalResult::Undefined) => writeln!(out, "undefined")?,
                (Format::Human, _) => writeln!(out, "{}", format_result(&Outcome::Compute(value)))?,
            }
            Ok(EXIT_TRUE)
        }
        Command::Computeall { query: args, force } => {
            let loaded = load(&args)?;
            expect_kind(&loaded, TaskKind::ComputeAll)?;
            let n = loaded.tree.num_basic();
            if n > COMPUTEALL_GUARD && !force {
                return Err(Failure(format!(
                    "tree has {n} basic events; computeall enumerates up to 2^{n} vectors, pass --force to proceed"
                )));
            }
            let Lowered::ComputeAll(phi) = &loaded.lowered else { unreachable!() };
            let l1 = Layer1::compile(&loaded.tree, phi)?;
            let names: Vec<String> = l1.model().derived().basic_event_names().iter().map(|s| s.to_string()).collect();
            let vectors = l1.satisfaction_set()?;
            match args.format {
                Format::Machine => {
                    let sets: Vec<String> = vectors.iter().map(|v| format_vector(&names, v)).collect();
                    writeln!(out, "{}", sets.join(" "))?;
                }
                Format::Human => {
                    let text = format_result(&Outcome::ComputeAll { names, vectors });
                    if !text.is_empty() {
                        writeln!(out, "{text}")?;
                    }
                }
            }
            Ok(EXIT_TRUE)
        }
        Command::Partition { query: args, region: r, output } => {
            let loaded = load(&args)?;
            let psi = assertion(&loaded, "partition")?;
            let cfg = region_config(&r, args.eq_tolerance)?;
            let p = region::partition(&loaded.tree, &psi, &cfg)?;
            let text = region::write_partition(&p);
            match output {
                Some(path) => {
                    std::fs::write(&path, &text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
                    match args.format {
                        Format::Machine => writeln!(
                            out,
                            "vol_yes={} vol_no={} vol_maybe={} complete={}",
                            p.vol_yes, p.vol_no, p.vol_maybe, p.complete
                        )?,
                        Format::Human => {
                            for line in text.lines().take_while(|l| l.starts_with('#')) {
                                writeln!(out, "{line}")?;
                            }
                        }
                    }
                }
                None => write!(out, "{text}")?,
            }
            Ok(EXIT_TRUE)
        }
        Command::Forall { query: args, region: r } => {
            let loaded = load(&args)?;
            let psi = assertion(&loaded, "forall")?;
            let cfg = region_config(&r, args.eq_tolerance)?;
            let names = loaded.tree.basic_event_names();
            match region::check_forall(&loaded.tree, &psi, &cfg)? {
                Forall::Valid => {
                    writeln!(out, "Valid")?;
                    Ok(EXIT_TRUE)
                }
                Forall::Counterexample(rho) => {
                    let pairs: Vec<String> =
                        names.iter().zip(rho.as_slice()).map(|(n, v)| format!("{n}={v}")).collect();
                    writeln!(out, "Counterexample {}", pairs.join(" "))?;
                    Ok(EXIT_FALSE)
                }
                Forall::Unknown { maybe_volume } => {
                    writeln!(out, "Unknown maybe_volume={maybe_volume}")?;
                    Ok(EXIT_UNKNOWN)
                }
            }
        }
        Command::ExportSmt { query: args, output } => {
            let loaded = load(&args)?;
            let psi = assertion(&loaded, "export-smt")?;
            let script = region::export_smt(&loaded.tree, &psi, DEFAULT_MONOMIAL_CAP)?;
            match output {
                Some(path) => {
                    std::fs::write(&path, &script).map_err(|e| Failure(format!("{}: {e}", path.display())))?
                }
                None => write!(out, "{script}")?,
            }
            Ok(EXIT_TRUE)
        }
    }
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_TRUE };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(Failure(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_ERROR
        }
    }
}
