//! Command implementations behind the `monogamy` binary.

pub mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use thiserror::Error;

use monogamy::campaign::{
    format_sig17, run_campaign, search, write_csv, CampaignConfig, Objective, PivotPolicy, Sampler, SearchConfig,
    SearchResult, SearchStatus,
};
use monogamy::inequalities::{parse_qubit, qubit_label, InequalityId, DEFAULT_TOL};
use monogamy::states::{from_acin, named_state, parse_state_file, AcinParams, NamedState, PureState, StateFile};

pub use report::{compute_report, render_text, ComputeReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

impl From<monogamy::Error> for CliError {
    fn from(e: monogamy::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "monogamy",
    version,
    about = "CHSH nonlocality and concurrence monogamy relations for qubit pure states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Every correlation quantity and inequality report for one state.
    Compute(ComputeArgs),
    /// Sample states and check the selected inequalities on each.
    Verify(VerifyArgs),
    /// Simplex search for extremal three-qubit states.
    Search(SearchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// `ghz`, `w`, `zero`, `ghz_alpha:<α>` (optionally prefixed `named:`),
    /// `acin:l0,l1,l2,l3,l4,phi`, or `file:<path>`.
    #[arg(long)]
    pub state: String,
    #[arg(long, default_value = "A")]
    pub pivot: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// `haar`, `acin`, `named` (ghz, w, zero) or `named:<s1>,<s2>,...`.
    #[arg(long, default_value = "haar")]
    pub sampler: String,
    /// Number of samples (ignored for named lists).
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// Register size for Haar sampling.
    #[arg(long, default_value_t = 3)]
    pub qubits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated inequality identifiers, or `all`.
    #[arg(long, default_value = "all")]
    pub ineq: String,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Pivot qubit, or `all`.
    #[arg(long, default_value = "A")]
    pub pivot: String,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Worker threads (defaults to one per core).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// `max-residual`, `max-residual-asymmetry` or `min-margin:<id>`.
    #[arg(long)]
    pub objective: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2000)]
    pub iters: usize,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub threshold: f64,
    #[arg(long, default_value = "A")]
    pub pivot: String,
    /// Output path for the best state document; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Named(NamedState),
    Acin(AcinParams),
    File(PathBuf),
}

impl FromStr for StateSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(StateSpec::File(PathBuf::from(path)));
        }
        if let Some(list) = s.strip_prefix("acin:") {
            let vals = list
                .split(',')
                .enumerate()
                .map(|(i, v)| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Usage(format!("acin field {} (`{}`) is not a number", i + 1, v.trim())))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            let [l0, l1, l2, l3, l4, phi]: [f64; 6] = vals
                .try_into()
                .map_err(|v: Vec<f64>| CliError::Usage(format!("acin expects 6 values, got {}", v.len())))?;
            return Ok(StateSpec::Acin(AcinParams::new([l0, l1, l2, l3, l4], phi)?));
        }
        let name = s.strip_prefix("named:").unwrap_or(s);
        let named: NamedState = name.parse()?;
        named_state(named)?;
        Ok(StateSpec::Named(named))
    }
}

impl StateSpec {
    pub fn load(&self) -> Result<PureState, CliError> {
        match self {
            StateSpec::Named(n) => Ok(named_state(*n)?),
            StateSpec::Acin(p) => Ok(from_acin(p)?),
            StateSpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                parse_state_file(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
            }
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Pretty JSON with every float written as 17 significant digits.
struct Sig17Formatter(PrettyFormatter<'static>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl Formatter for Sig17Formatter {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_sig17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    );
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17Formatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("serializing to memory");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write, path: &Path) -> Result<(), CliError> {
    out.write_all(to_json_string(value).as_bytes())
        .and_then(|_| writeln!(out))
        .and_then(|_| out.flush())
        .map_err(io_err(path))
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Compute(args) => cmd_compute(&args, stdout),
        Command::Verify(args) => cmd_verify(&args, stdout),
        Command::Search(args) => cmd_search(&args, stdout),
    }
}

pub fn cmd_compute(args: &ComputeArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let state = args.state.parse::<StateSpec>()?.load()?;
    if state.n_qubits() < 3 {
        return Err(CliError::Usage(format!(
            "compute needs 3 to 6 qubits, state has {}",
            state.n_qubits()
        )));
    }
    let pivot = parse_qubit(&args.pivot, state.n_qubits())?;
    let report = compute_report(&state, pivot)?;
    let stdout_path = Path::new("<stdout>");
    match args.format {
        Format::Json => write_json(&report, stdout, stdout_path)?,
        Format::Text => stdout
            .write_all(render_text(&report).as_bytes())
            .map_err(io_err(stdout_path))?,
    }
    Ok(EXIT_OK)
}

fn parse_sampler(s: &str) -> Result<Sampler, CliError> {
    match s.trim() {
        "haar" => Ok(Sampler::Haar),
        "acin" => Ok(Sampler::Acin),
        "named" => Ok(Sampler::Named(vec![NamedState::Ghz, NamedState::W, NamedState::Zero])),
        other => {
            let list = other
                .strip_prefix("named:")
                .ok_or_else(|| CliError::Usage(format!("unknown sampler `{other}`")))?;
            let names = list
                .split(',')
                .map(|n| n.parse::<NamedState>())
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Sampler::Named(names))
        }
    }
}

/// Maps verify flags onto a validated campaign configuration.
pub fn campaign_config(args: &VerifyArgs) -> Result<CampaignConfig, CliError> {
    let sampler = parse_sampler(&args.sampler)?;
    let n_qubits = match sampler {
        Sampler::Haar => args.qubits,
        _ => 3,
    };
    let pivots = if args.pivot.trim().eq_ignore_ascii_case("all") {
        PivotPolicy::All
    } else {
        PivotPolicy::Fixed(parse_qubit(&args.pivot, n_qubits)?)
    };
    let cfg = CampaignConfig {
        sampler,
        n_samples: args.n,
        n_qubits,
        seed: args.seed,
        inequalities: InequalityId::parse_list(&args.ineq, n_qubits)?,
        tolerance: args.tol,
        pivots,
        workers: args.workers,
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = campaign_config(args)?;
    // Open outputs first so an unwritable path fails before the run.
    let mut csv_out = args.csv.as_deref().map(|p| create(p).map(|w| (p, w))).transpose()?;
    let mut summary_out = args.summary.as_deref().map(|p| create(p).map(|w| (p, w))).transpose()?;

    let outcome = run_campaign(&cfg)?;
    if let Some((path, w)) = csv_out.as_mut() {
        write_csv(&outcome.records, w).map_err(io_err(path))?;
    }
    if let Some((path, w)) = summary_out.as_mut() {
        write_json(&outcome.summary, w, path)?;
    }

    let s = &outcome.summary;
    let mut table = format!(
        "{} samples, tolerance {:e}, {:.3} s\n{:<12} {:>8} {:>10} {:>25} {:>25}\n",
        s.samples, s.tolerance, s.wall_time_seconds, "inequality", "count", "violations", "min margin", "mean margin"
    );
    for row in &s.inequalities {
        table.push_str(&format!(
            "{:<12} {:>8} {:>10} {:>25} {:>25}\n",
            row.inequality.as_str(),
            row.count,
            row.violations,
            format_sig17(row.min_margin),
            format_sig17(row.mean_margin)
        ));
    }
    stdout
        .write_all(table.as_bytes())
        .map_err(io_err(Path::new("<stdout>")))?;
    Ok(if s.total_violations == 0 {
        EXIT_OK
    } else {
        EXIT_VIOLATIONS
    })
}

/// Best state of a search run; readable back as a state file.
#[derive(Debug, Serialize)]
pub struct SearchDocument {
    #[serde(flatten)]
    pub state: StateFile,
    pub objective_kind: String,
    pub objective: f64,
    pub pivot: char,
    pub status: SearchStatus,
    pub restart: usize,
    pub iterations: usize,
    pub acin: AcinParams,
    pub restart_values: Vec<f64>,
    /// Best-so-far minimized objective per iteration of the winning restart.
    pub trace: Vec<f64>,
}

impl SearchDocument {
    pub fn new(objective: Objective, pivot: usize, r: &SearchResult) -> Self {
        Self {
            state: StateFile::from_state(&r.state),
            objective_kind: objective.to_string(),
            objective: r.objective,
            pivot: qubit_label(pivot),
            status: r.status,
            restart: r.restart,
            iterations: r.iterations,
            acin: r.params,
            restart_values: r.restart_values.clone(),
            trace: r.trace.clone(),
        }
    }
}

pub fn cmd_search(args: &SearchArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let objective: Objective = args.objective.parse()?;
    let cfg = SearchConfig {
        objective,
        max_iterations: args.iters,
        restarts: args.restarts,
        seed: args.seed,
        threshold: args.threshold,
        pivot: parse_qubit(&args.pivot, 3)?,
    };
    cfg.validate()?;
    let mut out = args.out.as_deref().map(|p| create(p).map(|w| (p, w))).transpose()?;
    let result = search(&cfg)?;
    let doc = SearchDocument::new(objective, cfg.pivot, &result);
    match out.as_mut() {
        Some((path, w)) => {
            write_json(&doc, w, path)?;
            writeln!(
                stdout,
                "{objective}: {} ({:?}, restart {}, {} iterations)",
                format_sig17(result.objective),
                result.status,
                result.restart,
                result.iterations
            )
            .map_err(io_err(Path::new("<stdout>")))?;
        }
        None => write_json(&doc, stdout, Path::new("<stdout>"))?,
    }
    Ok(EXIT_OK)
}
