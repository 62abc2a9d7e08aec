use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use poisson_maxima::sweep::{self, Format, GridPoint, SweepTable};

/// Largest count accepted by `--n`.
const MAX_COUNT: u64 = 1_000_000_000_000_000;
/// Upper end of the decade range for `prob` and `modes`.
const MAX_LOG10_N: f64 = 40.0;
const THREADS_VAR: &str = "POISSON_MAXIMA_THREADS";

#[derive(Parser)]
#[command(name = "poisson-maxima", version, about = "Exact and asymptotic modes of the maximum of n Poisson variables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distribution of the maximum, one row per k.
    Dist(CommonArgs),
    /// Two-point focussing probability P_n over a decade grid.
    Prob(CommonArgs),
    /// Exact mode against the asymptotic estimates.
    Modes(CommonArgs),
    /// Every computed quantity for a single instance.
    Point(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Poisson mean; a comma list sweeps several values.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    lambda: Vec<f64>,
    /// log10 of the number of variables; a comma list is accepted.
    #[arg(long = "log10-n", value_delimiter = ',', group = "size", allow_negative_numbers = true)]
    log10_n: Vec<f64>,
    /// Decade grid as min:max:step.
    #[arg(long = "log10-n-range", group = "size")]
    log10_n_range: Option<String>,
    /// Number of variables as an integer.
    #[arg(long, group = "size")]
    n: Option<u64>,
    /// Last k emitted by `dist`.
    #[arg(long = "k-max")]
    k_max: Option<u64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

enum Failure {
    Usage(String),
    Numeric(String),
}

fn grid(args: &CommonArgs, bounded: bool) -> Result<Vec<GridPoint>, Failure> {
    let points: Vec<GridPoint> = if let Some(n) = args.n {
        if n == 0 || n > MAX_COUNT {
            return Err(Failure::Usage(format!("--n must be in 1..={MAX_COUNT}")));
        }
        vec![GridPoint::from_count(n)]
    } else if let Some(range) = &args.log10_n_range {
        sweep::parse_range(range).map_err(Failure::Usage)?.into_iter().map(GridPoint::from_log10).collect()
    } else if !args.log10_n.is_empty() {
        args.log10_n.iter().copied().map(GridPoint::from_log10).collect()
    } else {
        return Err(Failure::Usage("one of --log10-n, --log10-n-range or --n is required".into()));
    };
    for p in &points {
        if !p.log10_n.is_finite() || p.log10_n < 0.0 {
            return Err(Failure::Usage(format!("log10_n must be finite and >= 0, got {}", p.log10_n)));
        }
        if bounded && p.log10_n > MAX_LOG10_N {
            return Err(Failure::Usage(format!("log10_n must not exceed {MAX_LOG10_N}, got {}", p.log10_n)));
        }
    }
    Ok(points)
}

fn lambdas(args: &CommonArgs) -> Result<Vec<f64>, Failure> {
    for &l in &args.lambda {
        if !(l.is_finite() && l > 0.0) {
            return Err(Failure::Usage(format!("--lambda must be positive and finite, got {l}")));
        }
    }
    Ok(args.lambda.clone())
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("{THREADS_VAR} must be a nonnegative integer, got `{raw}`")))?;
    if threads > 0 {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    Ok(())
}

/// True when at least one non-key cell holds a value.
fn has_data(table: &SweepTable) -> bool {
    table.rows.iter().any(|row| row.iter().skip(2).any(|c| c.as_f64().is_some()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let (args, table, warnings) = match &cli.command {
        Command::Dist(a) => {
            let (t, w) = sweep::dist_table(&lambdas(a)?, &grid(a, false)?, a.k_max);
            (a, t, w)
        }
        Command::Prob(a) => {
            let (t, w) = sweep::prob_table(&lambdas(a)?, &grid(a, true)?);
            (a, t, w)
        }
        Command::Modes(a) => {
            let (t, w) = sweep::modes_table(&lambdas(a)?, &grid(a, true)?);
            (a, t, w)
        }
        Command::Point(a) => {
            let ls = lambdas(a)?;
            let ps = grid(a, false)?;
            if ls.len() != 1 || ps.len() != 1 {
                return Err(Failure::Usage("point takes exactly one lambda and one n".into()));
            }
            let (t, w) = sweep::point_table(ls[0], ps[0]);
            (a, t, w)
        }
    };
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    if !has_data(&table) {
        return Err(Failure::Numeric("no values could be computed".into()));
    }
    let text = table.render(args.format.into());
    match &args.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Numeric(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Numeric(format!("cannot write output: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
