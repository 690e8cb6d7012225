mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use xihd_core::moments::{stat_moments, NullMoments};
use xihd_core::{calibration, independence, Error, Model, SimSpec, TestKind, TieBreak};

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or unwritable file (exit 2).
    Io(String),
    /// Malformed input or arguments (exit 2).
    Parse(String),
    /// Well-formed input that breaks a data or domain rule (exit 3).
    Contract(String),
}

impl CliError {
    /// Wraps a library error, naming the offending column by label if known.
    pub fn contract(err: Error, labels: Option<&[String]>) -> Self {
        let named = |c: usize| {
            labels
                .and_then(|l| l.get(c))
                .map_or_else(|| format!("column {}", c + 1), |l| format!("column `{l}`"))
        };
        let msg = match &err {
            Error::TiesPresent {
                column: Some(c),
                value,
            } => format!(
                "tied value {value} in {}; rerun with --break-ties <seed> to break ties at random",
                named(*c)
            ),
            Error::NonFiniteValue {
                row,
                column: Some(c),
            } => format!("non-finite value at row {} in {}", row + 1, named(*c)),
            _ => err.to_string(),
        };
        CliError::Contract(msg)
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Parse(_) => 2,
            CliError::Contract(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Parse(m) | CliError::Contract(m) => m,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "xihd",
    version,
    about = "High-dimensional complete-independence tests based on Chatterjee's xi",
    after_help = "Set XIHD_THREADS to an integer >= 1 to cap the number of worker threads."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test a CSV sample for complete independence of its columns.
    Test(TestArgs),
    /// Estimate rejection frequencies on simulated data.
    Simulate(SimulateArgs),
    /// Export the matrix of pairwise xi coefficients as CSV.
    Xi(XiArgs),
    /// Print the null constants for given n and p.
    Moments(MomentsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Quadratic,
    Extreme,
    Enhanced,
}

impl From<Kind> for TestKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Quadratic => TestKind::Quadratic,
            Kind::Extreme => TestKind::Extreme,
            Kind::Enhanced => TestKind::Enhanced,
        }
    }
}

fn kinds(requested: &[Kind]) -> Vec<TestKind> {
    if requested.is_empty() {
        return TestKind::ALL.to_vec();
    }
    let mut out: Vec<TestKind> = requested.iter().map(|&k| k.into()).collect();
    out.sort();
    out.dedup();
    out
}

#[derive(clap::Args, Debug)]
struct TestArgs {
    /// CSV file: header row of column labels, then one observation per row.
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long, default_value_t = 0.05)]
    alpha: f64,
    /// Test to run; repeat for several. Defaults to all three.
    #[arg(short, long = "kind", value_enum)]
    kinds: Vec<Kind>,
    /// Break ties uniformly at random with this seed instead of failing.
    #[arg(long, value_name = "SEED")]
    break_ties: Option<u64>,
    #[arg(short, long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct SimulateArgs {
    /// Model id (E1a..E3d); repeat or comma-separate for several.
    #[arg(short, long = "model", required = true, value_delimiter = ',')]
    models: Vec<String>,
    /// Sample size; repeat or comma-separate for several.
    #[arg(short, long = "n", required = true, value_delimiter = ',')]
    n: Vec<usize>,
    /// Dimension; repeat or comma-separate for several.
    #[arg(short, long = "p", required = true, value_delimiter = ',')]
    p: Vec<usize>,
    #[arg(short, long, default_value_t = 1000)]
    reps: usize,
    #[arg(short, long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long, default_value_t = 0.05)]
    alpha: f64,
    /// Test to run; repeat for several. Defaults to all three.
    #[arg(short, long = "kind", value_enum)]
    kinds: Vec<Kind>,
    /// Correlation parameter for E2a and E2b.
    #[arg(long)]
    rho: Option<f64>,
    /// Noise level for E3d.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(short, long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct XiArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, value_name = "SEED")]
    break_ties: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct MomentsArgs {
    #[arg(short, long)]
    n: usize,
    #[arg(short, long)]
    p: usize,
    #[arg(short, long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn check_alpha(alpha: f64) -> Result<(), CliError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(CliError::Contract(format!(
            "alpha = {alpha} must lie in (0, 1)"
        )))
    }
}

fn tie_mode(seed: Option<u64>) -> TieBreak {
    seed.map_or(TieBreak::Reject, TieBreak::Random)
}

fn cmd_test(args: TestArgs) -> Result<(), CliError> {
    check_alpha(args.alpha)?;
    let data = input::read_csv(&args.input)?;
    let reports = xihd_core::run_tests(
        &data,
        &kinds(&args.kinds),
        args.alpha,
        tie_mode(args.break_ties),
    )
    .map_err(|e| CliError::contract(e, Some(data.labels())))?;
    let text = match args.format {
        Format::Json => output::to_json(&reports)?,
        Format::Table => output::reports_table(&reports),
    };
    output::emit(args.output.as_deref(), &text)
}

fn parse_model(id: &str, rho: Option<f64>, lambda: Option<f64>) -> Result<Model, CliError> {
    let mut model: Model = id.trim().parse().map_err(CliError::Parse)?;
    if let Some(rho) = rho {
        model = model.with_rho(rho);
    }
    if let Some(lambda) = lambda {
        model = model.with_lambda(lambda);
    }
    Ok(model)
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    check_alpha(args.alpha)?;
    let tests = kinds(&args.kinds);
    let models = args
        .models
        .iter()
        .map(|m| parse_model(m, args.rho, args.lambda))
        .collect::<Result<Vec<_>, _>>()?;

    // Validate the whole grid before spending time on any of it.
    let mut specs = Vec::new();
    for &model in &models {
        for &n in &args.n {
            for &p in &args.p {
                let spec = SimSpec {
                    reps: args.reps,
                    alpha: args.alpha,
                    tests: tests.clone(),
                    ..SimSpec::new(model, n, p, args.seed)
                };
                spec.validate().map_err(|e| CliError::contract(e, None))?;
                specs.push(spec);
            }
        }
    }

    let mut results = Vec::with_capacity(specs.len());
    for spec in &specs {
        let result = xihd_core::run_simulation(spec).map_err(|e| CliError::contract(e, None))?;
        eprintln!(
            "{} n={} p={}: {} replicates in {:.2}s",
            result.model, result.n, result.p, result.reps, result.wall_time
        );
        results.push(result);
    }
    let text = match args.format {
        Format::Json => output::to_json(&results)?,
        Format::Table => output::simulation_table(&results),
    };
    output::emit(args.output.as_deref(), &text)
}

fn cmd_xi(args: XiArgs) -> Result<(), CliError> {
    let data = input::read_csv(&args.input)?;
    let xi = xihd_core::xi::xi_matrix_with(&data, tie_mode(args.break_ties))
        .map_err(|e| CliError::contract(e, Some(data.labels())))?;
    if let Some(seed) = args.break_ties {
        eprintln!("ties broken at random with seed {seed}");
    }
    let text = output::xi_csv(&xi, data.labels())?;
    output::emit(args.output.as_deref(), &text)
}

/// All seven null constants for one `(n, p)`.
#[derive(Debug, serde::Serialize)]
struct Constants {
    n: usize,
    p: usize,
    u_n: f64,
    v_n2: f64,
    cov_n: f64,
    mu_np: f64,
    sigma_np2: f64,
    c_p: f64,
    delta_np: f64,
}

fn cmd_moments(args: MomentsArgs) -> Result<(), CliError> {
    let (n, p) = (args.n, args.p);
    let consts = (|| {
        let stat = stat_moments(n, p)?;
        let null = NullMoments::new(n)?;
        Ok::<_, Error>(Constants {
            n,
            p,
            u_n: null.u_n,
            v_n2: null.v_n2,
            cov_n: null.cov_n,
            mu_np: stat.mu_np,
            sigma_np2: stat.sigma_np2,
            c_p: calibration::cp(p)?,
            delta_np: independence::delta_np(n, p)?,
        })
    })()
    .map_err(|e| CliError::contract(e, None))?;
    let text = match args.format {
        Format::Json => output::to_json(&consts)?,
        Format::Table => {
            let rows = [
                ("u_n", consts.u_n),
                ("v_n2", consts.v_n2),
                ("cov_n", consts.cov_n),
                ("mu_np", consts.mu_np),
                ("sigma_np2", consts.sigma_np2),
                ("c_p", consts.c_p),
                ("delta_np", consts.delta_np),
            ];
            let mut s = format!("n = {n}, p = {p}\n");
            for (name, v) in rows {
                s.push_str(&format!("{name:<10} {v:>22.14e}\n"));
            }
            s
        }
    };
    output::emit(args.output.as_deref(), &text)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("XIHD_THREADS") else {
        return Ok(());
    };
    let threads: usize =
        raw.trim().parse().ok().filter(|&t| t >= 1).ok_or_else(|| {
            CliError::Parse(format!("XIHD_THREADS = `{raw}` is not an integer >= 1"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Io(format!("cannot start thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Test(a) => cmd_test(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Xi(a) => cmd_xi(a),
        Command::Moments(a) => cmd_moments(a),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
