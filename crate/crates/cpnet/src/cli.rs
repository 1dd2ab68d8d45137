//! Command-line entry points. Exit status 0 on success, 1 on invalid input, 2 when a
//! computation budget runs out.

use std::ffi::OsString;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cpnet_core::classes::{enumerate_class_with_budget, Budget};
use cpnet_core::generate::{random_net, random_tree};
use cpnet_core::graph::DEFAULT_VERTEX_BUDGET;
use cpnet_core::learners::{
    learn_kbounded_complete, learn_kbounded_incomplete, learn_tree_complete, learn_tree_incomplete,
    learn_with_corruption, LearnResult, Strategy,
};
use cpnet_core::oracles::{sample_corruption_set, CorruptionMode, CorruptionSet, OracleSession};
use cpnet_core::teaching::{teaching_set_incomplete, teaching_set_maximal, teaching_set_universal, verify_teaching_set};
use cpnet_core::universal::{construct_minimal, construct_product, UniversalSet};
use cpnet_core::{instance_space, ClassSpec, Completeness, CpNet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dot::{dependency_dot, induced_dot};
use crate::formats::{
    corruption_from_json, learn_result_to_json, parse_net, parse_universal, teaching_set_to_json, transcript_to_json,
    universal_to_text, FormatError, SwapJson, UniversalJson,
};
use crate::report::{dims_row, write_csv};
use crate::service::{serve, ServiceConfig};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Budget(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Budget(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Budget(m) => f.write_str(m),
        }
    }
}

impl From<cpnet_core::Error> for CliError {
    fn from(e: cpnet_core::Error) -> Self {
        match e {
            cpnet_core::Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Core(c) => c.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "cpnet", version, about = "Learn, teach and measure acyclic CP-nets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a CSV row with the class dimensions and structural flags.
    Dims(DimsArgs),
    /// Build a teaching set for a net and optionally verify it against its class.
    Teach(TeachArgs),
    /// Learn a net from simulated membership queries.
    Learn(LearnArgs),
    /// Construct a universal set.
    Universal(UniversalArgs),
    /// Seeded learning runs against corrupted oracles, one CSV row per run.
    Simulate(SimulateArgs),
    /// Export a net as Graphviz DOT.
    Dot(DotArgs),
    /// Run the HTTP elicitation service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct ClassArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long)]
    pub k: usize,
    /// Only complete nets (the default).
    #[arg(long, conflicts_with = "incomplete")]
    pub complete: bool,
    /// Allow Empty rows.
    #[arg(long)]
    pub incomplete: bool,
}

impl ClassArgs {
    fn spec(&self) -> CliResult<ClassSpec> {
        let c = if self.incomplete { Completeness::AllowIncomplete } else { Completeness::CompleteOnly };
        Ok(ClassSpec::new(self.n, self.m, self.k, c)?)
    }
}

#[derive(Debug, Args)]
pub struct DimsArgs {
    #[command(flatten)]
    pub class: ClassArgs,
    #[arg(long, default_value_t = Budget::default().steps)]
    pub budget: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TeachMethod {
    Auto,
    Maximal,
    Universal,
    Incomplete,
}

#[derive(Debug, Args)]
pub struct TeachArgs {
    #[arg(long)]
    pub target: PathBuf,
    /// Class bound; defaults to the `k` in the target file.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub incomplete: bool,
    #[arg(long)]
    pub universal: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TeachMethod::Auto)]
    pub method: TeachMethod,
    /// Check that the set singles out the target in the enumerated class.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = Budget::default().steps)]
    pub budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    None,
    Lim,
    Mal,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::None => Strategy::None,
            StrategyArg::Lim => Strategy::Lim,
            StrategyArg::Mal => Strategy::Mal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LearnerArg {
    Auto,
    Tree,
    Kbounded,
}

#[derive(Debug, Args)]
pub struct LearnArgs {
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub incomplete: bool,
    #[arg(long, value_enum, default_value_t = StrategyArg::None)]
    pub strategy: StrategyArg,
    #[arg(long, value_enum, default_value_t = LearnerArg::Auto)]
    pub learner: LearnerArg,
    /// Seed for sampling the corrupted set when `--corruption` is absent.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub universal: Option<PathBuf>,
    /// JSON list of corrupted swaps.
    #[arg(long)]
    pub corruption: Option<PathBuf>,
    /// Where to write the query transcript.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum UniversalMethod {
    Product,
    Minimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UniversalFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct UniversalArgs {
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long)]
    pub z: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = UniversalMethod::Product)]
    pub method: UniversalMethod,
    #[arg(long, value_enum, default_value_t = UniversalFormat::Text)]
    pub format: UniversalFormat,
    #[arg(long, default_value_t = 100_000_000)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::None)]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = 10)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub universal: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DotArgs {
    #[arg(long)]
    pub target: PathBuf,
    /// Export the induced preference graph instead of the dependency graph.
    #[arg(long)]
    pub induced: bool,
    #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET)]
    pub budget: usize,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "CPNET_BIND", default_value = "127.0.0.1")]
    pub bind: String,
    #[arg(long, env = "CPNET_PORT", default_value_t = 8080)]
    pub port: u16,
    #[arg(long, env = "CPNET_DATA_DIR")]
    pub data_dir: Option<PathBuf>,
    /// Seconds without an answer after which a session is aborted.
    #[arg(long, env = "CPNET_SESSION_TIMEOUT", default_value_t = 3600)]
    pub session_timeout: u64,
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match command {
        Command::Dims(a) => dims(a, out),
        Command::Teach(a) => teach(a, out, err),
        Command::Learn(a) => learn(a, out),
        Command::Universal(a) => universal(a, out),
        Command::Simulate(a) => simulate(a, out),
        Command::Dot(a) => dot(a, out),
        Command::Serve(a) => serve_command(a, err),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// Reads a target net and moves it into the class with bound `k` when one is given.
fn load_net(path: &Path, k: Option<usize>, incomplete: bool) -> CliResult<CpNet> {
    let net = parse_net(&read(path)?, incomplete.then_some(Completeness::AllowIncomplete))?;
    match k {
        Some(k) => Ok(net.with_spec(net.spec().with_k(k)?)?),
        None => Ok(net),
    }
}

fn load_universal(path: &Path, k: usize) -> CliResult<UniversalSet> {
    Ok(parse_universal(&read(path)?, 2, k)?)
}

fn dims(a: DimsArgs, out: &mut dyn Write) -> CliResult {
    let row = dims_row(&a.class.spec()?, Budget::new(a.budget))?;
    write_csv(&[row], out)?;
    Ok(())
}

fn teach(a: TeachArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let net = load_net(&a.target, a.k, a.incomplete)?;
    let spec = *net.spec();
    let u = match &a.universal {
        Some(p) => load_universal(p, spec.k)?,
        None => construct_product(spec.m, spec.n - 1, spec.k)?,
    };
    let set = match a.method {
        TeachMethod::Maximal => teaching_set_maximal(&net, &spec)?,
        TeachMethod::Universal => teaching_set_universal(&net, &spec, &u)?,
        TeachMethod::Incomplete => teaching_set_incomplete(&net, &spec, &u)?,
        TeachMethod::Auto if !spec.is_complete() => teaching_set_incomplete(&net, &spec, &u)?,
        TeachMethod::Auto => match teaching_set_maximal(&net, &spec) {
            Ok(t) => t,
            Err(cpnet_core::Error::NotMaximal) => teaching_set_universal(&net, &spec, &u)?,
            Err(e) => return Err(e.into()),
        },
    };
    serde_json::to_writer_pretty(&mut *out, &teaching_set_to_json(&set))?;
    writeln!(out)?;
    if a.verify {
        let class = enumerate_class_with_budget(&spec, a.budget)?;
        let ok = verify_teaching_set(&set, &class);
        writeln!(err, "verified: {ok} ({} examples, {} concepts)", set.len(), class.len())?;
        if !ok {
            return Err(CliError::Validation("the teaching set does not single out the target".into()));
        }
    }
    Ok(())
}

fn corruption_for(spec: &ClassSpec, strategy: StrategyArg, seed: u64) -> CliResult<CorruptionSet> {
    let mode = match strategy {
        StrategyArg::None => return Ok(CorruptionSet::default()),
        StrategyArg::Lim => CorruptionMode::LimitedBound,
        StrategyArg::Mal => CorruptionMode::MaliciousBound,
    };
    Ok(sample_corruption_set(spec, mode, seed)?.0)
}

fn oracle_for(target: &CpNet, strategy: StrategyArg, corruption: CorruptionSet) -> OracleSession {
    match strategy {
        StrategyArg::None => OracleSession::perfect(target.clone()),
        StrategyArg::Lim => OracleSession::limited(target.clone(), corruption),
        StrategyArg::Mal => OracleSession::malicious(target.clone(), corruption),
    }
}

fn run_learner(
    oracle: &mut OracleSession,
    spec: &ClassSpec,
    learner: LearnerArg,
    strategy: StrategyArg,
    u: Option<&UniversalSet>,
) -> CliResult<LearnResult> {
    if strategy != StrategyArg::None {
        return Ok(learn_with_corruption(oracle, spec, strategy.into(), u)?);
    }
    let tree = match learner {
        LearnerArg::Auto => spec.k <= 1,
        LearnerArg::Tree => true,
        LearnerArg::Kbounded => false,
    };
    let r = if tree {
        if spec.is_complete() {
            learn_tree_complete(oracle, spec)?
        } else {
            learn_tree_incomplete(oracle, spec)?
        }
    } else {
        let owned;
        let u = match u {
            Some(u) => u,
            None => {
                owned = construct_product(2, spec.n - 1, spec.k)?;
                &owned
            }
        };
        if spec.is_complete() {
            learn_kbounded_complete(oracle, spec, u)?
        } else {
            learn_kbounded_incomplete(oracle, spec, u)?
        }
    };
    Ok(r)
}

fn same_concept(a: &CpNet, b: &CpNet) -> bool {
    instance_space(a.spec(), true).iter().all(|x| a.evaluate(x) == b.evaluate(x))
}

#[derive(Serialize)]
struct LearnOutput {
    #[serde(flatten)]
    result: crate::formats::LearnResultJson,
    exact: bool,
}

fn learn(a: LearnArgs, out: &mut dyn Write) -> CliResult {
    let target = load_net(&a.target, a.k, a.incomplete)?;
    let spec = *target.spec();
    let u = a.universal.as_deref().map(|p| load_universal(p, spec.k)).transpose()?;
    let corruption = match &a.corruption {
        Some(p) => corruption_from_json(&serde_json::from_str::<Vec<SwapJson>>(&read(p)?)?)?,
        None => corruption_for(&spec, a.strategy, a.seed)?,
    };
    let mut oracle = oracle_for(&target, a.strategy, corruption);
    let r = run_learner(&mut oracle, &spec, a.learner, a.strategy, u.as_ref())?;
    let transcript = match &a.transcript {
        Some(p) => {
            std::fs::write(p, serde_json::to_vec_pretty(&transcript_to_json(oracle.kind(), oracle.log()))?)?;
            Some(p.display().to_string())
        }
        None => None,
    };
    let exact = same_concept(&r.net, &target);
    serde_json::to_writer_pretty(&mut *out, &LearnOutput { result: learn_result_to_json(&r, transcript), exact })?;
    writeln!(out)?;
    Ok(())
}

fn universal(a: UniversalArgs, out: &mut dyn Write) -> CliResult {
    let u = match a.method {
        UniversalMethod::Product => construct_product(a.m, a.z, a.k)?,
        UniversalMethod::Minimal => construct_minimal(a.m, a.z, a.k, a.budget)?,
    };
    match a.format {
        UniversalFormat::Text => write!(out, "{}", universal_to_text(&u))?,
        UniversalFormat::Json => {
            serde_json::to_writer(&mut *out, &UniversalJson::from_set(&u))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct TrialRow {
    trial: u64,
    seed: u64,
    corrupted: usize,
    certificate: usize,
    edges: usize,
    queries: usize,
    exact: bool,
}

fn simulate(a: SimulateArgs, out: &mut dyn Write) -> CliResult {
    let spec = ClassSpec::complete(a.n, 2, a.k)?;
    let u = a.universal.as_deref().map(|p| load_universal(p, spec.k)).transpose()?;
    let mut w = csv::Writer::from_writer(out);
    for trial in 0..a.trials {
        let seed = a.seed.wrapping_add(trial);
        let mode = match a.strategy {
            StrategyArg::Mal => Some(CorruptionMode::MaliciousBound),
            StrategyArg::Lim => Some(CorruptionMode::LimitedBound),
            StrategyArg::None => None,
        };
        let (corruption, certificate) = match mode {
            Some(m) => sample_corruption_set(&spec, m, seed)?,
            None => (CorruptionSet::default(), 0),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let target = if a.k <= 1 { random_tree(a.n, 2, &mut rng)? } else { random_net(&spec, &mut rng)? };
        let corrupted = corruption.len();
        let mut oracle = oracle_for(&target, a.strategy, corruption);
        let (queries, exact) = match run_learner(&mut oracle, &spec, LearnerArg::Auto, a.strategy, u.as_ref()) {
            Ok(r) => (r.queries_used, same_concept(&r.net, &target)),
            Err(CliError::Budget(m)) => return Err(CliError::Budget(m)),
            Err(_) => (oracle.distinct(), false),
        };
        w.serialize(TrialRow { trial, seed, corrupted, certificate, edges: target.edge_count(), queries, exact })?;
    }
    w.flush()?;
    Ok(())
}

fn dot(a: DotArgs, out: &mut dyn Write) -> CliResult {
    let net = load_net(&a.target, None, false)?;
    let text = if a.induced { induced_dot(&net, a.budget)? } else { dependency_dot(&net, None) };
    write!(out, "{text}")?;
    Ok(())
}

fn serve_command(a: ServeArgs, err: &mut dyn Write) -> CliResult {
    let addr: SocketAddr = format!("{}:{}", a.bind, a.port)
        .parse()
        .map_err(|e| CliError::Validation(format!("bad address: {e}")))?;
    let config = ServiceConfig { data_dir: a.data_dir, session_timeout: Duration::from_secs(a.session_timeout) };
    writeln!(err, "listening on http://{addr}")?;
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    runtime.block_on(serve(addr, config))?;
    Ok(())
}
