use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "regcount", version, about = "Regular counting constraints over counter-DFAs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a propagator once and print its removals.
    Propagate {
        #[command(flatten)]
        input: InstanceArgs,
        /// Overrides the mode stored in the instance file.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Print the exactly supported values by enumerating ground sequences.
    Oracle {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long, env = "REGCOUNT_CAP", default_value_t = regcount::oracle::DEFAULT_CAP)]
        cap: u64,
    },
    /// Print prefix (and optionally suffix) sweep rows.
    DumpSweep {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, value_enum, default_value_t = ExtremumArg::Min)]
        mode: ExtremumArg,
        #[arg(long, value_enum, default_value_t = RowsArg::Pre)]
        rows: RowsArg,
    },
    /// Check random instances against the oracle.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, value_enum, default_value_t = FuzzMode::All)]
        mode: FuzzMode,
        #[arg(long, env = "REGCOUNT_CAP", default_value_t = regcount::oracle::DEFAULT_CAP)]
        cap: u64,
        /// Longest generated sequence.
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long, default_value_t = 5)]
        max_states: usize,
        /// Directory receiving an instance file per violation.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Enumerate all solutions by propagate-and-branch search.
    Solve {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Also print every solution.
        #[arg(long)]
        print_solutions: bool,
    },
    /// Compare propagators at the root node over a corpus.
    Bench {
        /// Instance files or directories of instance files.
        paths: Vec<PathBuf>,
        /// Generate random instances for these catalog automata.
        #[arg(long, value_delimiter = ',')]
        catalog: Vec<String>,
        /// Generated instances per catalog automaton.
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [ModeArg::Exact, ModeArg::Decomposed])]
        modes: Vec<ModeArg>,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Check an automaton or instance file.
    Validate { path: PathBuf },
    /// Print a built-in automaton as JSON.
    Catalog {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

/// Where the instance comes from: a file, or an automaton plus inline domains.
#[derive(Debug, Args)]
pub struct InstanceArgs {
    /// Instance file (`-` reads standard input).
    pub instance: Option<PathBuf>,
    /// Automaton file, `catalog:NAME`, or `-` for standard input.
    #[arg(long, conflicts_with = "instance")]
    pub automaton: Option<String>,
    /// Sequence domains: positions separated by `;`, symbols by `,`.
    #[arg(long, requires = "automaton")]
    pub vars: Option<String>,
    /// Counter domain, comma separated.
    #[arg(long, requires = "automaton")]
    pub counter: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Atmost,
    Atleast,
    Exact,
    Decomposed,
}

impl From<ModeArg> for regcount::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Atmost => regcount::Mode::AtMost,
            ModeArg::Atleast => regcount::Mode::AtLeast,
            ModeArg::Exact => regcount::Mode::Exact,
            ModeArg::Decomposed => regcount::Mode::DecomposedExact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FuzzMode {
    Atmost,
    Atleast,
    Exact,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExtremumArg {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RowsArg {
    Pre,
    Suf,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Table,
    Tsv,
}
