mod corpus;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use input::{Input, InputEcho, Invariant, Route, Session, Stats};

/// `println!` that stops quietly when stdout is closed.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Usage(String),
    Internal(String),
    /// Verification ran and found disagreements; already reported.
    Mismatch(usize),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Internal(_) | CliError::Mismatch(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
            CliError::Mismatch(n) => write!(f, "{n} mismatch(es)"),
        }
    }
}

macro_rules! internal_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Internal(e.to_string())
            }
        }
    )*};
}
internal_from!(tielink::skein::SkeinError, tielink::tbmw::AlgebraError, tielink::PolyError);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Values,
    Route,
    Mirror,
    All,
}

#[derive(Parser)]
#[command(name = "tielink", version, about = "Invariants of tied links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one invariant of a tied braid closure or a PD diagram.
    Compute {
        /// Tied braid word, e.g. "s1 -s2 e1"; empty for the trivial braid.
        #[arg(long, conflicts_with = "pd", allow_hyphen_values = true)]
        braid: Option<String>,
        #[arg(long, requires = "braid")]
        strands: Option<usize>,
        /// Ties between closure components, 1-based blocks such as "1,2|3".
        #[arg(long, requires = "braid")]
        partition: Option<String>,
        #[arg(long)]
        pd: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "L")]
        invariant: Invariant,
        #[arg(long, value_enum, default_value = "skein")]
        route: Route,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Also compute through the other route and fail on disagreement.
        #[arg(long)]
        cross_check: bool,
    },
    /// Decide whether invariants distinguish two inputs ("N : word [| partition]" or "pd:FILE").
    Compare {
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
        #[arg(long = "invariant", value_enum, default_values = ["L"])]
        invariants: Vec<Invariant>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check a corpus file of expected values.
    Verify {
        corpus: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        mode: Mode,
    },
}

#[derive(Serialize)]
struct ComputeReport {
    input: InputEcho,
    invariant: Invariant,
    route: Route,
    value: String,
    millis: f64,
    stats: Stats,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_check: Option<CrossCheck>,
}

#[derive(Serialize)]
struct CrossCheck {
    route: Route,
    agrees: bool,
    millis: f64,
}

#[derive(Serialize)]
struct CompareReport {
    left: InputEcho,
    right: InputEcho,
    results: Vec<CompareRow>,
    distinguished: bool,
}

#[derive(Serialize)]
struct CompareRow {
    invariant: Invariant,
    left: String,
    right: String,
    difference: String,
    distinguished: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tielink: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compute { braid, strands, partition, pd, invariant, route, format, cross_check } => {
            let input = match (braid, pd) {
                (Some(b), None) => {
                    let n = strands.ok_or_else(|| CliError::Usage("--braid needs --strands".into()))?;
                    Input::from_braid(&b, n, partition.as_deref())?
                }
                (None, Some(p)) => Input::from_pd(p)?,
                _ => return Err(CliError::Usage("give exactly one of --braid or --pd".into())),
            };
            compute(&input, invariant, route, format, cross_check)
        }
        Command::Compare { left, right, invariants, format } => {
            compare(&Input::from_spec(&left)?, &Input::from_spec(&right)?, &invariants, format)
        }
        Command::Verify { corpus, mode } => verify(&corpus, mode),
    }
}

fn compute(input: &Input, inv: Invariant, route: Route, format: Format, cross: bool) -> Result<(), CliError> {
    let mut session = Session::new();
    let (value, millis) = session.timed(input, inv, route)?;
    let stats = session.stats(route);
    let cross_check = if cross {
        let other = match route {
            Route::Skein => Route::Trace,
            Route::Trace => Route::Skein,
        };
        let (v, ms) = session.timed(input, inv, other)?;
        Some(CrossCheck { route: other, agrees: v == value, millis: ms })
    } else {
        None
    };
    let disagree = cross_check.as_ref().is_some_and(|c| !c.agrees);
    let report = ComputeReport { input: input.echo(), invariant: inv, route, value: value.to_string(), millis, stats, cross_check };
    match format {
        Format::Json => out!("{}", serde_json::to_string_pretty(&report).expect("serializable")),
        Format::Text => {
            out!("{}", report.value);
            eprintln!("{} via {:?} in {:.3} ms", inv.name(), route, millis);
            if let Some(c) = &report.cross_check {
                eprintln!("cross-check via {:?}: {}", c.route, if c.agrees { "agrees" } else { "DISAGREES" });
            }
        }
    }
    if disagree {
        return Err(CliError::Internal("routes disagree".into()));
    }
    Ok(())
}

fn compare(left: &Input, right: &Input, invariants: &[Invariant], format: Format) -> Result<(), CliError> {
    let mut session = Session::new();
    let mut results = Vec::new();
    for &inv in invariants {
        let l = session.compute(left, inv, Route::Skein)?;
        let r = session.compute(right, inv, Route::Skein)?;
        let diff = &l - &r;
        results.push(CompareRow {
            invariant: inv,
            left: l.to_string(),
            right: r.to_string(),
            difference: diff.to_string(),
            distinguished: !diff.is_zero(),
        });
    }
    let distinguished = results.iter().any(|r| r.distinguished);
    let report = CompareReport { left: left.echo(), right: right.echo(), results, distinguished };
    match format {
        Format::Json => out!("{}", serde_json::to_string_pretty(&report).expect("serializable")),
        Format::Text => {
            for r in &report.results {
                out!("{}: {}", r.invariant.name(), if r.distinguished { "distinguished" } else { "not distinguished" });
                out!("  left - right = {}", r.difference);
            }
            out!("{}", if report.distinguished { "distinguished" } else { "not distinguished" });
        }
    }
    Ok(())
}

fn verify(path: &std::path::Path, mode: Mode) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let rows = corpus::parse(&text)?;
    let base = path.parent().unwrap_or(std::path::Path::new("."));
    let mut session = Session::new();
    let (mut checked, mut pending, mut bad) = (0usize, 0usize, 0usize);
    for row in &rows {
        if row.status == corpus::Status::Pending {
            pending += 1;
            out!("PEND  {}{}", row.name, row.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default());
            continue;
        }
        let input = row.input(base)?;
        let mut failures = Vec::new();
        let value = session.compute(&input, Invariant::L, Route::Skein)?;
        if matches!(mode, Mode::Values | Mode::All) && value != row.expected {
            failures.push(format!("value {value}, expected {}", row.expected));
        }
        if matches!(mode, Mode::Route | Mode::All) {
            if let Input::Braid { partition: None, .. } = &input {
                let via = session.compute(&input, Invariant::L, Route::Trace)?;
                if via != value {
                    failures.push(format!("trace route gives {via}"));
                }
            }
        }
        if matches!(mode, Mode::Mirror | Mode::All) {
            let m = session.compute(&input.mirror(), Invariant::L, Route::Skein)?;
            if m != value.invert_var("a") {
                failures.push(format!("mirror gives {m}"));
            }
        }
        checked += 1;
        if failures.is_empty() {
            out!("ok    {}", row.name);
        } else {
            bad += 1;
            out!("FAIL  {}: {}", row.name, failures.join("; "));
        }
    }
    out!("{checked} checked, {bad} failed, {pending} pending");
    if bad > 0 {
        return Err(CliError::Mismatch(bad));
    }
    Ok(())
}
