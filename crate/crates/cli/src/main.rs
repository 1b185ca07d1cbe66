//! `netcentral`: validate, measure, rank and compare transit network files.

mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{
    ArgGroup, ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum,
};
use netcentral_core::analytics::{line_summaries, rank, rank_correlation, top_count, top_fraction};
use netcentral_core::engine::all_measures;
use netcentral_core::{
    apply_scenario, load_network, scenario_diff, CentralityTable, Edit, LoadError, Measure,
    NetworkDocument, TransitNetwork,
};

/// Process exit statuses.
mod status {
    pub const OK: u8 = 0;
    pub const FORMAT: u8 = 2;
    pub const VALIDATION: u8 = 3;
    pub const ANALYSIS: u8 = 4;
    pub const USAGE: u8 = 5;
}

#[derive(Debug, Parser)]
#[command(
    name = "netcentral",
    version,
    about = "Centrality analysis for transit network files"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a network file and print its structure.
    Validate { file: PathBuf },
    /// Per-station and per-link centrality table.
    Analyze(AnalyzeArgs),
    /// Stations ordered by one measure.
    Rank(RankArgs),
    /// Five-number summary of one measure for every line.
    Lines(LinesArgs),
    /// Spearman rank correlation between two measures.
    Corr(CorrArgs),
    /// Apply topology edits and compare centrality before and after.
    Scenario(ScenarioArgs),
    /// Graph file with centrality attributes for external tools.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphFormat {
    Graphml,
    Dot,
    Csv,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
    /// Destination file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("cutoff").required(true).args(["top", "top_fraction"])))]
struct RankArgs {
    file: PathBuf,
    #[arg(long)]
    measure: Measure,
    /// Keep the first N stations.
    #[arg(long)]
    top: Option<usize>,
    /// Keep the first ceil(F * n) stations, 0 < F <= 1.
    #[arg(long, value_parser = parse_fraction)]
    top_fraction: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LinesArgs {
    file: PathBuf,
    #[arg(long)]
    measure: Measure,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CorrArgs {
    file: PathBuf,
    #[arg(long)]
    x: Measure,
    #[arg(long)]
    y: Measure,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    file: PathBuf,
    /// Merge two stations: `a,b` or `a,b,new-id`.
    #[arg(long, value_parser = parse_merge)]
    merge: Vec<Edit>,
    /// Add a link: `a,b,line`.
    #[arg(long, value_parser = parse_add_link)]
    add_link: Vec<Edit>,
    /// Remove a link: `a,b`.
    #[arg(long, value_parser = parse_remove_link)]
    remove_link: Vec<Edit>,
    /// Measure whose ranks and line means are reported.
    #[arg(long, default_value = "closeness")]
    compare: Measure,
}

#[derive(Debug, Args)]
struct ExportArgs {
    file: PathBuf,
    #[arg(long, value_enum)]
    format: GraphFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_fraction(s: &str) -> Result<f64, String> {
    let f: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if f > 0.0 && f <= 1.0 {
        Ok(f)
    } else {
        Err(format!("fraction must lie in (0, 1], got {s}"))
    }
}

fn split_fields(s: &str, min: usize, max: usize, shape: &str) -> Result<Vec<String>, String> {
    let fields: Vec<String> = s.split(',').map(|f| f.trim().to_owned()).collect();
    if fields.len() < min || fields.len() > max || fields.iter().any(String::is_empty) {
        return Err(format!("expected `{shape}`, got `{s}`"));
    }
    Ok(fields)
}

fn parse_merge(s: &str) -> Result<Edit, String> {
    let mut f = split_fields(s, 2, 3, "a,b[,new-id]")?.into_iter();
    let (a, b) = (f.next().unwrap_or_default(), f.next().unwrap_or_default());
    Ok(Edit::MergeStations {
        a,
        b,
        new_id: f.next(),
    })
}

fn parse_add_link(s: &str) -> Result<Edit, String> {
    let f = split_fields(s, 3, 3, "a,b,line")?;
    let line = f[2]
        .parse()
        .map_err(|_| format!("line must be a number from 1 to 255, got `{}`", f[2]))?;
    Ok(Edit::AddLink {
        a: f[0].clone(),
        b: f[1].clone(),
        line,
    })
}

fn parse_remove_link(s: &str) -> Result<Edit, String> {
    let f = split_fields(s, 2, 2, "a,b")?;
    Ok(Edit::RemoveLink {
        a: f[0].clone(),
        b: f[1].clone(),
    })
}

/// A failed command: message for the error stream and the exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn load(path: &Path) -> Result<(NetworkDocument, TransitNetwork), Failure> {
    let bytes = fs::read(path).map_err(|e| {
        Failure::new(
            status::USAGE,
            format!("{}: cannot read: {e}", path.display()),
        )
    })?;
    load_network(&bytes).map_err(|e| {
        let code = if e.is_syntax() {
            status::FORMAT
        } else {
            status::VALIDATION
        };
        let place = match e.position() {
            Some(p) => format!("{}:{}:{}", path.display(), p.line, p.column),
            None => path.display().to_string(),
        };
        let message = match &e {
            LoadError::Parse(p) => p.to_string(),
            LoadError::Build { error, .. } => error.to_string(),
        };
        Failure::new(code, format!("{place}: {message}"))
    })
}

fn measure(network: &TransitNetwork) -> Result<CentralityTable, Failure> {
    all_measures::<f64>(network).map_err(|e| Failure::new(status::ANALYSIS, e.to_string()))
}

/// Writes to `out` atomically, or to standard output.
fn emit(out: Option<&Path>, content: &str) -> Outcome {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| Failure::new(status::USAGE, format!("cannot write output: {e}")))
        }
        Some(path) => {
            let fail = |e: std::io::Error| {
                Failure::new(
                    status::USAGE,
                    format!("{}: cannot write: {e}", path.display()),
                )
            };
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
            tmp.write_all(content.as_bytes()).map_err(fail)?;
            tmp.persist(path).map_err(|e| fail(e.error))?;
            Ok(())
        }
    }
}

fn run_validate(file: &Path) -> Outcome {
    let (doc, network) = load(file)?;
    emit(None, &report::validation(&doc.name, &network))
}

fn run_analyze(args: &AnalyzeArgs) -> Outcome {
    let (doc, network) = load(&args.file)?;
    let table = measure(&network)?;
    let text = match args.format {
        TableFormat::Csv => report::analysis_csv(&network, &table),
        TableFormat::Json => report::analysis_json(&doc.name, &network, &table),
    };
    emit(args.out.as_deref(), &text)
}

fn run_rank(args: &RankArgs) -> Outcome {
    let (_, network) = load(&args.file)?;
    let table = measure(&network)?;
    let ranked = rank(&table, args.measure);
    let ranked = match (args.top, args.top_fraction) {
        (Some(n), _) => top_count(&ranked, n),
        (None, Some(f)) => {
            top_fraction(&ranked, f).map_err(|e| Failure::new(status::USAGE, e.to_string()))?
        }
        (None, None) => ranked,
    };
    emit(args.out.as_deref(), &report::ranking_csv(&network, &ranked))
}

fn run_lines(args: &LinesArgs) -> Outcome {
    let (_, network) = load(&args.file)?;
    let table = measure(&network)?;
    emit(
        args.out.as_deref(),
        &report::lines_csv(&line_summaries(&network, &table, args.measure)),
    )
}

fn run_corr(args: &CorrArgs) -> Outcome {
    let (_, network) = load(&args.file)?;
    let table = measure(&network)?;
    let rho = rank_correlation(&table, args.x, args.y)
        .map_err(|e| Failure::new(status::ANALYSIS, e.to_string()))?;
    emit(None, &format!("{rho:.6}\n"))
}

fn run_scenario(args: &ScenarioArgs, edits: Vec<Edit>) -> Outcome {
    let (_, network) = load(&args.file)?;
    if edits.is_empty() {
        return emit(None, "no changes\n");
    }
    let scenario = apply_scenario(&network, &edits)
        .map_err(|e| Failure::new(status::ANALYSIS, e.to_string()))?;
    let diff = scenario_diff::<f64>(&scenario)
        .map_err(|e| Failure::new(status::ANALYSIS, e.to_string()))?;
    emit(None, &report::scenario(&scenario, &diff, args.compare))
}

fn run_export(args: &ExportArgs) -> Outcome {
    let (doc, network) = load(&args.file)?;
    let table = measure(&network)?;
    let text = match args.format {
        GraphFormat::Graphml => netcentral_core::export::to_graphml(&doc.name, &network, &table),
        GraphFormat::Dot => netcentral_core::export::to_dot(&doc.name, &network, &table),
        GraphFormat::Csv => report::analysis_csv(&network, &table),
    };
    emit(args.out.as_deref(), &text)
}

/// Scenario edits in the order they appeared on the command line.
fn ordered_edits(matches: &ArgMatches) -> Vec<Edit> {
    let Some(sub) = matches.subcommand_matches("scenario") else {
        return Vec::new();
    };
    let mut edits: Vec<(usize, Edit)> = Vec::new();
    for id in ["merge", "add_link", "remove_link"] {
        if let (Some(values), Some(indices)) = (sub.get_many::<Edit>(id), sub.indices_of(id)) {
            edits.extend(indices.zip(values.cloned()));
        }
    }
    edits.sort_by_key(|(i, _)| *i);
    edits.into_iter().map(|(_, e)| e).collect()
}

fn main() -> ExitCode {
    let matches = match Cli::command().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                status::USAGE
            } else {
                status::OK
            });
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(status::USAGE);
        }
    };
    let outcome = match &cli.command {
        Command::Validate { file } => run_validate(file),
        Command::Analyze(a) => run_analyze(a),
        Command::Rank(a) => run_rank(a),
        Command::Lines(a) => run_lines(a),
        Command::Corr(a) => run_corr(a),
        Command::Scenario(a) => run_scenario(a, ordered_edits(&matches)),
        Command::Export(a) => run_export(a),
    };
    match outcome {
        Ok(()) => ExitCode::from(status::OK),
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
