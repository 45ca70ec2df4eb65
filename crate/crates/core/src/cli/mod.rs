//! Command-line front end.
//!
//! Exit codes: 0 success, 1 internal error, 2 usage error, 3 profitable
//! deviation found, 4 I/O error. Files are written through a temporary file
//! in the target directory and renamed into place, so a failed run leaves
//! no partial output behind.

mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cake::{Fraction, PlayerId};
use crate::engine::{self, equilibrium_profile, ChoicePolicy, CutPolicy, GameConfig, Rule, StrategyProfile};
use crate::equilibrium::{certify_nash, payoff_curve, Grid, Verdict};
use crate::error::Error;
use crate::metrics;

pub use output::{fig1_rows, fig2_rows, fig3_rows, write_atomic, Fig1Row, Fig2Row, Fig3Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Internal = 1,
    Usage = 2,
    Deviation = 3,
    Io = 4,
}

impl From<Exit> for ExitCode {
    fn from(e: Exit) -> Self {
        ExitCode::from(e as u8)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Internal(String),
    Io(String),
}

impl CliError {
    fn exit(&self) -> Exit {
        match self {
            CliError::Usage(_) => Exit::Usage,
            CliError::Internal(_) => Exit::Internal,
            CliError::Io(_) => Exit::Io,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Internal(m) | CliError::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Degenerate(_) | Error::Trace(_) => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "cakecut", version, about = "Iterated cake-cutting games with exact arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play one game and print the partition
    Simulate(SimulateArgs),
    /// Search on-grid cut deviations for a profitable one
    CheckEquilibrium(CheckArgs),
    /// Write fig1.csv, fig2.csv and fig3.csv
    Figures(FiguresArgs),
    /// Normalized first-cutter payoff against the deviation epsilon
    PayoffCurve(CurveArgs),
    /// Price of Anarchy per player count
    Poa(PoaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Vanilla,
    Bp,
}

impl From<RuleArg> for Rule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Vanilla => Rule::Vanilla,
            RuleArg::Bp => Rule::BiggestPlayer,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// Composition rule
    #[arg(long, value_enum, default_value = "bp")]
    pub rule: RuleArg,
    /// Number of players
    #[arg(long)]
    pub n: usize,
    /// Strategy overrides: first-cut=p/q (player 1), cut=halve|proportional|p/q,
    /// choice=bigger|first|best
    #[arg(long = "profile", value_name = "KEY=VAL", value_delimiter = ',')]
    pub profile: Vec<String>,
    /// Shift player 1's first cut by this fraction
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<Fraction>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub game: ProfileArgs,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the JSON-lines event trace here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub game: ProfileArgs,
    /// Grid resolution L; candidate cuts are i/L
    #[arg(long, default_value_t = 2520)]
    pub grid: u64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    /// Largest player count for fig1 and fig3
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
    /// Player counts for fig2
    #[arg(long = "fig2-n", value_delimiter = ',', default_values_t = [2usize, 3, 5, 10])]
    pub fig2_n: Vec<usize>,
    #[arg(long, default_value_t = 2520)]
    pub grid: u64,
    /// Output directory
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2520)]
    pub grid: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PoaArgs {
    #[arg(long, value_enum, default_value = "vanilla")]
    pub rule: RuleArg,
    /// Single player count; overrides --n-max
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Usage } else { Exit::Success };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match dispatch(&cli.command, stdout) {
        Ok(exit) => exit,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit()
        }
    }
}

pub fn main_from_env() -> ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock()).into()
}

fn dispatch(command: &Command, out: &mut dyn Write) -> Result<Exit, CliError> {
    match command {
        Command::Simulate(a) => simulate(a, out),
        Command::CheckEquilibrium(a) => check_equilibrium(a, out),
        Command::Figures(a) => figures(a, out),
        Command::PayoffCurve(a) => curve(a, out),
        Command::Poa(a) => poa(a, out),
    }
}

/// Equilibrium profile of the rule with the `KEY=VAL` overrides applied.
pub fn build_profile(args: &ProfileArgs) -> Result<(GameConfig, StrategyProfile), CliError> {
    let config = GameConfig::unit(args.n, args.rule.into())?;
    let mut profile = equilibrium_profile(&config);
    let mut first_cut = None;
    for item in &args.profile {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("profile entry '{item}' is not KEY=VAL")))?;
        let parse_fraction = |v: &str| {
            v.parse::<Fraction>()
                .map_err(|e| CliError::Usage(format!("{key}: {e}")))
        };
        match key.trim() {
            "first-cut" => first_cut = Some(parse_fraction(value)?),
            "cut" => {
                let policy = match value {
                    "halve" => CutPolicy::Halve,
                    "proportional" => CutPolicy::Proportional,
                    v => CutPolicy::fixed(parse_fraction(v)?)?,
                };
                (1..=args.n).for_each(|i| profile.get_mut(PlayerId(i)).expect("in range").cut = policy.clone());
            }
            "choice" => {
                let policy = match value {
                    "bigger" => ChoicePolicy::Bigger,
                    "first" => ChoicePolicy::First,
                    "best" | "best-response" => ChoicePolicy::BestResponse,
                    v => return Err(CliError::Usage(format!("unknown choice policy '{v}'"))),
                };
                (1..=args.n).for_each(|i| profile.get_mut(PlayerId(i)).expect("in range").choice = policy);
            }
            k => return Err(CliError::Usage(format!("unknown profile key '{k}'"))),
        }
    }
    if let Some(eps) = &args.epsilon {
        if first_cut.is_some() {
            return Err(CliError::Usage("--epsilon and first-cut are mutually exclusive".into()));
        }
        if args.n < 2 {
            return Err(CliError::Usage("--epsilon needs n >= 2".into()));
        }
        let base = profile.get(PlayerId(1)).expect("n >= 2").alpha(args.n, false);
        first_cut = Some(base + eps);
    }
    if let Some(alpha) = first_cut {
        if args.n < 2 {
            return Err(CliError::Usage("a single player never cuts".into()));
        }
        profile = engine::deviate(&profile, PlayerId(1), alpha)?;
    }
    Ok((config, profile))
}

#[derive(Serialize)]
struct SimulateReport<'a> {
    rule: Rule,
    n: usize,
    pieces: Vec<PieceRow>,
    cuts: usize,
    queries: &'a crate::open_game::QueryCounter,
}

#[derive(Serialize)]
struct PieceRow {
    player: PlayerId,
    lo: Fraction,
    hi: Fraction,
    share: Fraction,
}

fn simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<Exit, CliError> {
    let (config, profile) = build_profile(&args.game)?;
    let (partition, trace) = engine::play(&config, &profile)?;
    let rows: Vec<PieceRow> = partition
        .iter()
        .map(|(player, piece)| PieceRow {
            player,
            lo: piece.lo().clone(),
            hi: piece.hi().clone(),
            share: piece.size(),
        })
        .collect();
    if let Some(path) = &args.out {
        write_atomic(path, trace.to_json_lines().as_bytes())?;
    }
    let mut text = String::new();
    match args.format {
        None => {
            text += &format!("rule: {}\nn: {}\n", config.rule, config.n);
            for r in &rows {
                text += &format!("{} [{}, {}) share {}\n", r.player, r.lo, r.hi, r.share);
            }
            text += &format!(
                "cuts: {}\nqueries: {} ({} cuts, {} evals)\n",
                trace.cuts(),
                trace.queries.total(),
                trace.queries.cuts,
                trace.queries.evals
            );
        }
        Some(Format::Csv) => {
            text += "player,lo,hi,share,share_decimal\n";
            for r in &rows {
                text += &format!("{},{},{},{},{}\n", r.player.0, r.lo, r.hi, r.share, r.share.to_decimal(12));
            }
        }
        Some(Format::Json) => {
            let report = SimulateReport {
                rule: config.rule,
                n: config.n,
                pieces: rows,
                cuts: trace.cuts(),
                queries: &trace.queries,
            };
            text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Internal(e.to_string()))?;
            text.push('\n');
        }
    }
    out.write_all(text.as_bytes()).map_err(io_err)?;
    Ok(Exit::Success)
}

fn grid_arg(l: u64) -> Result<Grid, CliError> {
    Ok(Grid::new(l)?)
}

fn check_equilibrium(args: &CheckArgs, out: &mut dyn Write) -> Result<Exit, CliError> {
    let (config, profile) = build_profile(&args.game)?;
    let cert = certify_nash(&config, &profile, grid_arg(args.grid)?)?;
    let mut text = String::new();
    if args.format == Some(Format::Json) {
        text = serde_json::to_string_pretty(&cert).map_err(|e| CliError::Internal(e.to_string()))?;
        text.push('\n');
    } else {
        text += &format!("rule: {}\nn: {}\ngrid: {}\n", cert.rule, cert.n, cert.grid.resolution());
        for r in &cert.players {
            match (&r.baseline_cut, &r.best_deviation, &r.best_delta) {
                (Some(cut), Some(dev), Some(delta)) => {
                    text += &format!(
                        "{} cut {} payoff {} checked {} best deviation {} delta {}\n",
                        r.player, cut, r.baseline_payoff, r.deviations_checked, dev, delta
                    )
                }
                _ => text += &format!("{} no cut payoff {}\n", r.player, r.baseline_payoff),
            }
        }
        let verdict = match cert.verdict {
            Verdict::NoProfitableDeviation => "no-profitable-deviation",
            Verdict::DeviationFound => "deviation-found",
        };
        text += &format!("verdict: {verdict}\n");
        if let (Verdict::DeviationFound, Some((r, delta))) = (cert.verdict, cert.best_deviation()) {
            text += &format!(
                "improving deviation: {} cuts {} for +{}\n",
                r.player,
                r.best_deviation.as_ref().expect("delta implies deviation"),
                delta
            );
        }
    }
    out.write_all(text.as_bytes()).map_err(io_err)?;
    Ok(match cert.verdict {
        Verdict::NoProfitableDeviation => Exit::Success,
        Verdict::DeviationFound => Exit::Deviation,
    })
}

fn figures(args: &FiguresArgs, out: &mut dyn Write) -> Result<Exit, CliError> {
    let grid = grid_arg(args.grid)?;
    if args.n_max < 2 {
        return Err(CliError::Usage("--n-max must be >= 2".into()));
    }
    let fig1 = output::to_csv(&fig1_rows(args.n_max)?)?;
    let fig2 = output::to_csv(&fig2_rows(&args.fig2_n, grid)?)?;
    let fig3 = output::to_csv(&fig3_rows(args.n_max)?)?;
    let files = [("fig1.csv", fig1), ("fig2.csv", fig2), ("fig3.csv", fig3)];
    let targets: Vec<(PathBuf, Vec<u8>)> = files.into_iter().map(|(name, data)| (args.out.join(name), data)).collect();
    output::write_all_atomic(&targets)?;
    for (path, _) in &targets {
        writeln!(out, "wrote {}", path.display()).map_err(io_err)?;
    }
    Ok(Exit::Success)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, data: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, data),
        None => out.write_all(data).map_err(io_err),
    }
}

fn curve(args: &CurveArgs, out: &mut dyn Write) -> Result<Exit, CliError> {
    let points = payoff_curve(args.n, grid_arg(args.grid)?)?;
    let rows: Vec<Fig2Row> = points.iter().map(|p| Fig2Row::new(args.n, p)).collect();
    let data = match args.format {
        Format::Csv => output::to_csv(&rows)?,
        Format::Json => output::to_json(&points)?,
    };
    emit(out, args.out.as_deref(), &data)?;
    Ok(Exit::Success)
}

fn poa(args: &PoaArgs, out: &mut dyn Write) -> Result<Exit, CliError> {
    let ns: Vec<usize> = match args.n {
        Some(n) => vec![n],
        None => (2..=args.n_max).collect(),
    };
    let reports = ns
        .iter()
        .map(|&n| metrics::poa(n, args.rule.into()))
        .collect::<Result<Vec<_>, _>>()?;
    let data = match args.format {
        Format::Csv => {
            let rows: Vec<output::PoaRow> = reports.iter().map(output::PoaRow::from).collect();
            output::to_csv(&rows)?
        }
        Format::Json => output::to_json(&reports)?,
    };
    emit(out, args.out.as_deref(), &data)?;
    Ok(Exit::Success)
}
