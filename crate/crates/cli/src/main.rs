mod commands;
mod input;
mod output;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;

/// Bad input; exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<symapolar::Error> for UsageError {
    fn from(e: symapolar::Error) -> Self {
        UsageError(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "symapolar",
    version,
    about = "Exact apolarity checks for complete symmetric polynomials and symmetric cubics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Number of variables.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// h:<d>, p:<c0,c1,c2> or raw:@file.json
    #[arg(long, global = true)]
    pub form: Option<String>,
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    /// Cubic plane point a0,a1,a2 (integers or num/den).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Sweep the integer grid of this radius plus curve and line samples.
    #[arg(long, global = true)]
    pub grid: Option<i64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, hide = true)]
    pub inject_fault: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hilbert function of S/ann F.
    Hilbert,
    /// Lefschetz rank table for a linear form (default: the sum of the variables).
    Slp {
        /// Coefficients of the linear form.
        #[arg(long, allow_hyphen_values = true)]
        ell: Option<String>,
    },
    /// Generators of ann(h_{n,e}) through the M-spaces.
    AnnStructure,
    /// Exact power-sum decomposition of h_{n,d}.
    VerifyDecomposition,
    /// The 13-variable quartic identity.
    Quartic13,
    /// Classify a symmetric cubic by its plane point.
    ClassifyCubic,
    /// Waring certificate for a symmetric cubic.
    WaringCert,
    /// Scheme certificate for the cactus rank on the tangent line.
    CactusCert,
    /// Graded Betti numbers of S/ann F.
    Betti,
    /// Betti numbers of a symmetric cubic against the case formula.
    VerifyBetti,
    /// Jacobian determinant checks of the orbit maps at random points.
    GenericRank {
        /// Explicit parameters instead of random ones.
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Numeric preimage of h_{n,4} under the quartic orbit map.
    SolveH4,
    /// SVG of the cubic curve, the three lines and the special points.
    AtlasPlot,
    /// Dimension counts for symmetric forms.
    Dims,
}

fn dispatch(cmd: &Command, g: &Global) -> Result<output::Report, UsageError> {
    use commands as c;
    match cmd {
        Command::Hilbert => c::hilbert(g),
        Command::Slp { ell } => c::slp(g, ell.as_deref()),
        Command::AnnStructure => c::ann_structure(g),
        Command::VerifyDecomposition => c::verify_decomposition(g),
        Command::Quartic13 => c::quartic13(g),
        Command::ClassifyCubic => c::classify_cubic(g),
        Command::WaringCert => c::waring_cert(g),
        Command::CactusCert => c::cactus_cert(g),
        Command::Betti => c::betti(g),
        Command::VerifyBetti => c::verify_betti(g),
        Command::GenericRank { params, samples } => c::generic_rank(g, params.as_deref(), *samples),
        Command::SolveH4 => c::solve_h4(g),
        Command::AtlasPlot => c::atlas_plot(g),
        Command::Dims => c::dims(g),
    }
}

fn usage_failure(msg: &str) -> ExitCode {
    eprintln!("{}", serde_json::json!({ "error": msg.trim_end() }));
    ExitCode::from(2)
}

fn run(cli: &Cli) -> Result<bool, UsageError> {
    let format = cli.global.format.unwrap_or(match cli.command {
        Command::AtlasPlot => Format::Svg,
        _ => Format::Json,
    });
    let report = dispatch(&cli.command, &cli.global)?;
    let doc = report.render(format)?;
    match &cli.global.out {
        Some(path) => {
            fs::write(path, doc).map_err(|e| UsageError(format!("cannot write `{}`: {e}", path.display())))?
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(doc.as_bytes());
        }
    }
    Ok(report.falsified)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return usage_failure(&e.to_string()),
    };
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => usage_failure(&e.0),
    }
}
