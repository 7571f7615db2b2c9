//! The `degree` command-line tool.
//!
//! Exit codes: 0 on success, 1 when a verification finds a mismatch or a
//! bound violation, 2 on usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use degree_core::ChainSpec;
use num_bigint::BigInt;

mod commands;
mod output;

pub use output::{Output, OutputEnvelope};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "degree",
    version,
    about = "Exact degrees of noninvertibility of finite functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Emit one JSON document instead of text lines.
    #[arg(long)]
    pub json: bool,
    /// Append a decimal approximation with this many fractional digits.
    #[arg(long, value_name = "K")]
    pub decimals: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fibers, degree and generalized degrees of a function file.
    Deg(DegArgs),
    /// Closed-form expected degree of a random composition chain.
    Expected(ExpectedArgs),
    /// Closed-form expected deg(f, q) of a random function.
    ExpectedQ(ExpectedQArgs),
    /// Compare enumeration and multinomial oracles against closed forms.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Rows of the Stirling triangles, or a Stirling transform.
    Stirling(StirlingArgs),
    /// Check the composition bounds on given functions or exhaustively.
    Bounds(BoundsArgs),
    /// Seeded Monte Carlo estimates.
    #[command(subcommand)]
    Simulate(SimulateCommand),
}

#[derive(Debug, Args)]
pub struct DegArgs {
    /// Function file: `n m : i_1 .. i_n` (one-based) or JSON (zero-based).
    #[arg(long)]
    pub file: PathBuf,
    /// Exponents for deg(f, q); repeat or comma-separate.
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u32>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExpectedArgs {
    /// Comma-separated set sizes n_1,..,n_{t+1}.
    #[arg(long)]
    pub sizes: ChainSpec,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExpectedQArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub q: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Maximum number of objects an oracle may enumerate.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    /// Worker threads for enumeration.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Enumeration and nested-multinomial chain averages against the closed form.
    Chain {
        #[arg(long)]
        sizes: ChainSpec,
        #[command(flatten)]
        oracle: OracleArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Enumerated deg(f, q) averages and power sums for q = 1..=qmax.
    Degq {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        qmax: u32,
        #[command(flatten)]
        oracle: OracleArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Both sides of the multinomial square-sum identity.
    En {
        #[arg(long)]
        m: usize,
        /// Comma-separated nonnegative parts k_1,..,k_n.
        #[arg(long, value_delimiter = ',', required = true)]
        parts: Vec<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The Stirling-transform identities.
    Corollary {
        /// The alternating Stirling sum is checked for q = 1..=qmax.
        #[arg(long)]
        qmax: u32,
        /// The power-sum form is checked for n = 1..=nmax ..
        #[arg(long, default_value_t = 5)]
        nmax: usize,
        /// .. and q = 1..=main-qmax.
        #[arg(long, default_value_t = 6)]
        main_qmax: u32,
        #[command(flatten)]
        oracle: OracleArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StirlingKind {
    /// Set partitions into k blocks.
    Second,
    /// Permutations with k cycles (unsigned).
    First,
    /// (-1)^(n-k) times the first kind.
    Signed,
}

#[derive(Debug, Args)]
pub struct StirlingArgs {
    #[arg(long, value_enum, default_value_t = StirlingKind::Second)]
    pub kind: StirlingKind,
    /// Print rows 0..=N.
    #[arg(
        long,
        value_name = "N",
        conflicts_with = "transform",
        required_unless_present = "transform"
    )]
    pub rows: Option<usize>,
    /// Comma-separated sequence a_1,a_2,.. to transform.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub transform: Option<Vec<BigInt>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Outer function f: Y -> Z.
    #[arg(long, requires = "g", conflicts_with = "exhaustive")]
    pub f: Option<PathBuf>,
    /// Inner function g: X -> Y.
    #[arg(long, requires = "f")]
    pub g: Option<PathBuf>,
    /// Check every function pair with all set sizes up to --n.
    #[arg(long, requires = "n", required_unless_present = "f")]
    pub exhaustive: bool,
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SamplerArgs {
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Subcommand)]
pub enum SimulateCommand {
    /// Mean degree of random compositions along a chain.
    Chain {
        #[arg(long)]
        sizes: ChainSpec,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Mean largest fiber of a random endofunction.
    Maxfiber {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{rendered}")
            } else {
                write!(stdout, "{rendered}")
            };
            return code;
        }
    };
    let (result, output_args) = commands::dispatch(cli.command);
    match result {
        Ok(output) => {
            let written = if output_args.json {
                serde_json::to_string(&output.envelope)
                    .map_err(std::io::Error::other)
                    .and_then(|s| writeln!(stdout, "{s}"))
            } else {
                output
                    .lines
                    .iter()
                    .try_for_each(|l| writeln!(stdout, "{l}"))
            };
            if let Err(e) = written {
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    return EXIT_OK;
                }
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_USAGE;
            }
            if output.passed() {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            }
        }
        Err(message) => {
            let _ = writeln!(stderr, "error: {message}");
            EXIT_USAGE
        }
    }
}
