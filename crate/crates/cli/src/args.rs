use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Certified beta-expansions, digit-frequency generators and self-affine fibres.
///
/// Bases are given as `dec:<decimal>`, `poly:<integer polynomial>:[lo,hi]` or a bare decimal.
/// Points and frequencies are decimals or fractions `a/b`.
#[derive(Debug, Parser)]
#[command(name = "betafibre", version)]
pub struct Cli {
    /// Write the main output here instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical intervals and synthesis constants, with n(β) and the frequency window.
    Constants {
        #[arg(long)]
        beta: String,
        /// Alphabet for the interval endpoints.
        #[arg(long, default_value = "01")]
        alphabet: String,
    },
    /// Partition table of O with the zero-heavy and one-heavy return words.
    Table {
        #[arg(long)]
        beta: String,
        #[arg(long, default_value = "01")]
        alphabet: String,
    },
    /// Generate digits of an expansion with block certificates.
    Expand(ExpandArgs),
    /// Enclosure of the Komornik–Loreti constant.
    Kl {
        /// Enclosure width at most 2^-bits.
        #[arg(long, default_value_t = 64)]
        bits: u32,
    },
    /// The multinacci number of order n and a prefix of its quasi-greedy expansion.
    Multinacci {
        #[arg(short)]
        n: u32,
        /// Length of the printed quasi-greedy prefix (default 4(n+1)).
        #[arg(long)]
        len: Option<usize>,
    },
    /// The first M rungs of the base ladder between the golden ratio and β_KL.
    Ladder {
        #[arg(short = 'M')]
        m: usize,
    },
    /// Lower bound for the dimension of the points without a simply normal expansion.
    Dim {
        #[arg(short)]
        k: u32,
        #[arg(long)]
        beta: String,
    },
    /// Certified δ for the horizontal base β₁.
    Delta {
        #[arg(long)]
        beta1: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Certified interval in the vertical fibre over x, optionally with the digits of one point.
    Fibre {
        #[arg(long)]
        beta1: String,
        #[arg(long)]
        beta2: String,
        #[arg(long)]
        beta3: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Point of the fibre interval to reconstruct.
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        /// Digits of the reconstructed word.
        #[arg(long, default_value_t = 2000)]
        digits: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Points (CSV) or a hit-count raster (PGM) of the attractor.
    Render(RenderArgs),
    /// The Hare–Sidorov criterion for a pair of bases.
    Hs {
        #[arg(long)]
        beta1: String,
        #[arg(long)]
        beta2: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpandKind {
    Freq,
    Accum,
    Normal,
    Hybrid,
    Slowgrowth,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    pub kind: ExpandKind,
    #[arg(long)]
    pub beta: String,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Number of digits.
    #[arg(long, short, default_value_t = 1000)]
    pub n: usize,
    /// Target frequency of the low digit (freq).
    #[arg(long)]
    pub p: Option<String>,
    /// Comma-separated targets to cycle through (accum); the dyadic schedule if absent.
    #[arg(long)]
    pub targets: Option<String>,
    /// Growth function (slowgrowth): `sqrt`, `linear:<scale>` or `pow:<num>/<den>`.
    #[arg(long, default_value = "sqrt")]
    pub growth: String,
    /// Alphabet for freq and accum.
    #[arg(long, default_value = "01")]
    pub alphabet: String,
    /// Certificate log (JSON lines).
    #[arg(long)]
    pub log: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Threshold c in (0,1) for the word inequalities.
    #[arg(long, default_value = "1/2")]
    pub c_threshold: String,
    /// Grid search with this step instead of bisection.
    #[arg(long)]
    pub grid_step: Option<String>,
    /// Largest δ tried by the grid search.
    #[arg(long, default_value = "1/2")]
    pub grid_max: String,
    /// Upper end of the bisection bracket.
    #[arg(long, default_value = "1/2")]
    pub bisect_hi: String,
    #[arg(long, default_value_t = 20)]
    pub bisect_iterations: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Chaos,
    Depth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Pgm,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub beta1: String,
    #[arg(long)]
    pub beta2: String,
    #[arg(long)]
    pub beta3: String,
    #[arg(long, value_enum, default_value_t = Mode::Chaos)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Points in chaos mode.
    #[arg(long, default_value_t = 100_000)]
    pub points: usize,
    /// Word length in depth mode.
    #[arg(long, default_value_t = 16)]
    pub depth: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value_t = 512)]
    pub width: usize,
    #[arg(long, default_value_t = 512)]
    pub height: usize,
}
