use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fe_vfunc::cli::{self, CoeffMode, CurrentArgs, Suite};
use fe_vfunc::coeffcore::DEFAULT_ORDER;
use fe_vfunc::output::{Format, OutputRecord};
use fe_vfunc::verify::DEFAULT_SCAN_GRID;
use fe_vfunc::vfunction::Method;

#[derive(Parser)]
#[command(
    name = "fe-vfunc",
    version,
    about = "Field emission elliptic function v(l') tables, checks and emission currents"
)]
struct Args {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "csv")]
    format: OutFormat,

    /// Omit the timestamp from the output metadata.
    #[arg(long, global = true)]
    no_timestamp: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    ClosedForm,
    Series,
    Factored,
    ThreeTerm,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::ClosedForm => Method::ClosedForm,
            MethodArg::Series => Method::Series,
            MethodArg::Factored => Method::Factored,
            MethodArg::ThreeTerm => Method::ThreeTerm,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Ode,
    Limits,
    Cayley,
    Scan,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Ode => Suite::Ode,
            SuiteArg::Limits => Suite::Limits,
            SuiteArg::Cayley => Suite::Cayley,
            SuiteArg::Scan => Suite::Scan,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact or decimal coefficient tables of the series expansion.
    Coeffs {
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        /// Print decimals rounded to this many places instead of exact rationals.
        #[arg(long)]
        decimals: Option<u32>,
    },
    /// v and dv/dl' at a single point.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        lp: f64,
        #[arg(long, value_enum, default_value = "closed-form")]
        method: MethodArg,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// v and dv/dl' on a uniform grid, endpoints included.
    Table {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        lp_min: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        lp_max: f64,
        /// Number of grid points.
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long, value_enum, default_value = "closed-form")]
        method: MethodArg,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Maximum and mean deviation of a method from the closed form over [0, 1].
    Scan {
        #[arg(long, value_enum, default_value = "three-term")]
        method: MethodArg,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        #[arg(long, default_value_t = DEFAULT_SCAN_GRID)]
        grid: usize,
        /// Emit every grid point instead of the summary row.
        #[arg(long)]
        records: bool,
    },
    /// Run verification suites; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
    },
    /// Fowler-Nordheim-type current density with mu = v(f).
    Current {
        /// Work function (eV).
        #[arg(long)]
        phi: f64,
        /// Local barrier field (V/nm).
        #[arg(long = "field", short = 'F')]
        field: f64,
        /// Scaled barrier field in [0, 1].
        #[arg(long, short = 'f')]
        f: f64,
        #[arg(long)]
        lambda: Option<f64>,
        /// First FN Constant.
        #[arg(long)]
        a: Option<f64>,
        /// Second FN Constant.
        #[arg(long)]
        b: Option<f64>,
        /// JSON or key=value file with a_const, b_const, lambda.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn run(command: Command) -> fe_vfunc::Result<(bool, OutputRecord)> {
    let ok = |rec| Ok((true, rec));
    match command {
        Command::Coeffs { order, decimals } => {
            let mode = decimals.map_or(CoeffMode::Exact, CoeffMode::Decimal);
            ok(cli::cmd_coeffs(order, mode)?)
        }
        Command::Eval { lp, method, order } => ok(cli::cmd_eval(lp, method.into(), order)?),
        Command::Table {
            lp_min,
            lp_max,
            grid,
            method,
            order,
        } => ok(cli::cmd_table(lp_min, lp_max, grid, method.into(), order)?),
        Command::Scan {
            method,
            order,
            grid,
            records,
        } => ok(cli::cmd_scan(method.into(), order, grid, records)?),
        Command::Verify { suite } => cli::cmd_verify(suite.into()),
        Command::Current {
            phi,
            field,
            f,
            lambda,
            a,
            b,
            config,
        } => ok(cli::cmd_current(&CurrentArgs {
            phi,
            field,
            f,
            lambda,
            a_const: a,
            b_const: b,
            config,
        })?),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (passed, mut record) = match run(args.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if !args.no_timestamp {
        let now = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
        record.meta("timestamp", now);
    }
    let format = match args.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(record.render(format).as_bytes()).is_err() {
        return ExitCode::from(EXIT_USAGE);
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        let failed: Vec<&str> = record
            .rows
            .iter()
            .filter(|r| matches!(r.last(), Some(fe_vfunc::output::Cell::Text(s)) if s == "FAIL"))
            .filter_map(|r| match &r[1] {
                fe_vfunc::output::Cell::Text(s) => Some(s.as_str()),
                _ => None,
            })
            .collect();
        eprintln!("verification failed: {}", failed.join("; "));
        ExitCode::from(EXIT_CHECK_FAILED)
    }
}
