use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod failure;

use failure::Failure;

/// Polynomial spectral factors of Laurent polynomial matrices.
///
/// Matrices are read and written as JSON:
/// {"m": 2, "N": 1, "kind": "laurent", "coeffs": {"-1": [[[re, im], ..], ..], ..}}.
/// Exit status: 0 success, 1 bad input, 2 numerical failure, 3 violated
/// precondition, 4 size limit. Errors are reported on stderr as JSON.
#[derive(Parser, Debug)]
#[command(name = "specfact", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor a density S = P P~ (optimal, or with a prescribed determinant).
    Factor {
        /// Laurent matrix JSON file.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = FactorMode::Optimal)]
        mode: FactorMode,
        /// Scalar polynomial JSON (1x1 "poly") for --mode with-det.
        #[arg(long)]
        det_file: Option<PathBuf>,
        /// Convergence tolerance of Bauer's method [default: 1e-10, or SPECFACT_TOL].
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 4096)]
        max_block: usize,
        /// Write the factor here instead of embedding it in the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write all 2^L factors of a density with simple determinant roots.
    Enumerate {
        input: PathBuf,
        /// Refuse densities with more than this many root pairs.
        #[arg(long = "max-L", default_value_t = 20)]
        max_l: usize,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Move one determinant zero of a factor to its reflection 1/conj(root).
    Flip {
        /// Polynomial matrix JSON file.
        input: PathBuf,
        /// Zero to move, as "re,im".
        #[arg(long, allow_hyphen_values = true)]
        root: String,
        /// Accept determinant zeros of higher multiplicity.
        #[arg(long)]
        allow_multiple: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a factor reproduces a density.
    Verify {
        factor: PathBuf,
        matrix: PathBuf,
        /// Relative residual tolerance [default: 1e-8, or SPECFACT_TOL].
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Daubechies lowpass filter of order K.
    Daubechies {
        #[arg(long = "K")]
        k: usize,
        #[arg(long, value_enum, default_value_t = WaveletMode::MinPhase)]
        mode: WaveletMode,
        /// Root choice per free pair ("0" outside, "1" inside) for --mode selection.
        #[arg(long)]
        selection: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Number of frequency samples on [0, pi].
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// In CSV output, print the sampled response instead of coefficients.
        #[arg(long)]
        curves: bool,
    },
    /// Two inequivalent factors of diag(s, s) with equal determinants.
    ExampleNonunique {
        #[arg(long, default_value = "0.5,0", allow_hyphen_values = true)]
        a: String,
    },
    /// Random density with planted determinant roots.
    #[command(hide = true)]
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long = "N", default_value_t = 1)]
        n: usize,
        /// Probability that a planted root lies outside the disk.
        #[arg(long, default_value_t = 0.0)]
        outside_prob: f64,
        /// Also write the planted factor here.
        #[arg(long)]
        factor_out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FactorMode {
    Optimal,
    WithDet,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum WaveletMode {
    MinPhase,
    MidPhase,
    Balanced,
    Selection,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Factor {
            input,
            mode,
            det_file,
            tol,
            max_block,
            out,
        } => commands::factor(&input, mode, det_file.as_deref(), tol, max_block, out.as_deref()),
        Command::Enumerate {
            input,
            max_l,
            out_dir,
            tol,
        } => commands::enumerate(&input, max_l, &out_dir, tol),
        Command::Flip {
            input,
            root,
            allow_multiple,
            out,
        } => commands::flip(&input, &root, allow_multiple, out.as_deref()),
        Command::Verify { factor, matrix, tol } => commands::verify(&factor, &matrix, tol),
        Command::Daubechies {
            k,
            mode,
            selection,
            format,
            samples,
            curves,
        } => commands::daubechies(k, mode, selection.as_deref(), format, samples, curves),
        Command::ExampleNonunique { a } => commands::example_nonunique(&a),
        Command::Random {
            seed,
            m,
            n,
            outside_prob,
            factor_out,
        } => commands::random(seed, m, n, outside_prob, factor_out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            return Failure::Usage(e.kind().to_string(), e.to_string()).report();
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}
