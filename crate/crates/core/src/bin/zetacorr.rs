use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use zetacorr::corr::CorrKindPair;
use zetacorr::report::{self, Command, Format, RunConfig, RunError};
use zetacorr::sieve::ArithmeticFunctionKind;

#[derive(Parser)]
#[command(name = "zetacorr", version, about = "Correlation sums of the Mobius and Liouville functions and their zero-side counterparts")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv, global = true)]
    format: FormatArg,
    /// Output file (default: stdout).
    #[arg(long = "out", global = true)]
    out_path: Option<PathBuf>,
    /// Worker threads for sieving and zero sums.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sieve an arithmetic function and its running sum.
    Sieve {
        #[arg(long, value_enum, default_value_t = KindArg::Mobius)]
        kind: KindArg,
        #[arg(long)]
        n_max: u64,
        #[arg(long, default_value_t = report::DEFAULT_STRIDE)]
        stride: u64,
    },
    /// Logarithmically averaged correlation sums, one row per stride.
    Corr {
        #[arg(long, value_enum, default_value_t = PairArg::Mobius)]
        kind: PairArg,
        #[arg(long)]
        n_max: u64,
        #[arg(long, default_value_t = report::DEFAULT_STRIDE)]
        stride: u64,
        /// Also report the 1/n^(1+delta) weighted sum.
        #[arg(long)]
        delta: Option<f64>,
        /// With --t-height, take N = floor(T^(1-c)) for the weighted sum.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        t_height: Option<f64>,
        /// Zero table for the reference line.
        #[arg(long)]
        zeros: Option<PathBuf>,
        /// JSON state file rewritten after every sieved segment.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Continue from --checkpoint if it exists.
        #[arg(long)]
        resume: bool,
    },
    /// Zero-side sums at checkpoints every STRIDE zeros.
    Zerosums {
        #[arg(long)]
        zeros: Option<PathBuf>,
        #[arg(long)]
        t_height: Option<f64>,
        #[arg(long, default_value_t = report::DEFAULT_STRIDE)]
        stride: u64,
        /// Leave sum_B empty (it needs zeta(2 rho) for every zero).
        #[arg(long)]
        skip_sum_b: bool,
    },
    /// Explicit-formula values of M(n-1) and L(n-1) for 2 <= n <= N.
    Reconstruct {
        #[arg(long)]
        zeros: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        n_max: u64,
        #[arg(long)]
        t_height: Option<f64>,
    },
    /// Print the reference constants.
    Constants,
    /// Run the built-in invariant suites.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairArg {
    Mobius,
    Liouville,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Mobius,
    Liouville,
    MobiusSquared,
    One,
}

fn config(cli: Cli) -> RunConfig {
    let mut c = match cli.command {
        Cmd::Sieve { kind, n_max, stride } => {
            let mut c = RunConfig::new(Command::Sieve);
            c.sieve_kind = match kind {
                KindArg::Mobius => ArithmeticFunctionKind::Mobius,
                KindArg::Liouville => ArithmeticFunctionKind::Liouville,
                KindArg::MobiusSquared => ArithmeticFunctionKind::MobiusSquared,
                KindArg::One => ArithmeticFunctionKind::One,
            };
            c.n_max = Some(n_max);
            c.stride = stride;
            c
        }
        Cmd::Corr { kind, n_max, stride, delta, c: cc, t_height, zeros, checkpoint, resume } => {
            let mut c = RunConfig::new(Command::Corr);
            c.kind_pair = match kind {
                PairArg::Mobius => CorrKindPair::MobiusMertens,
                PairArg::Liouville => CorrKindPair::LiouvilleSummatory,
            };
            c.n_max = Some(n_max);
            c.stride = stride;
            c.delta = delta;
            c.c = cc;
            c.t_height = t_height;
            c.zeros_path = zeros;
            c.checkpoint = checkpoint;
            c.resume = resume;
            c
        }
        Cmd::Zerosums { zeros, t_height, stride, skip_sum_b } => {
            let mut c = RunConfig::new(Command::Zerosums);
            c.zeros_path = zeros;
            c.t_height = t_height;
            c.stride = stride;
            c.skip_sum_b = skip_sum_b;
            c
        }
        Cmd::Reconstruct { zeros, n_max, t_height } => {
            let mut c = RunConfig::new(Command::Reconstruct);
            c.zeros_path = zeros;
            c.n_max = Some(n_max);
            c.t_height = t_height;
            c
        }
        Cmd::Constants => RunConfig::new(Command::Constants),
        Cmd::Selftest => RunConfig::new(Command::Selftest),
    };
    c.format = match cli.common.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    c.out_path = cli.common.out_path;
    c.threads = cli.common.threads;
    c
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { RunError::USAGE } else { 0 });
        }
    };
    match report::execute(&config(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = match e.status {
                RunError::IO => "i/o error",
                RunError::USAGE => "usage error",
                _ => "invariant violation",
            };
            eprintln!("zetacorr: {kind}: {e}");
            ExitCode::from(e.status)
        }
    }
}
