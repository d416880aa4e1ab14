use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fpmc::cli::{self, EnumerateArgs};
use fpmc::fixtures::FixtureParams;
use fpmc::report::Report;

#[derive(Parser)]
#[command(name = "fpmc", version, about = "Exact certificates for finite polyhedral Mori cones")]
struct Cli {
    /// Print the exact JSON report instead of the summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants, dual graph, canonical class and a spanning subset.
    Analyze { file: String },
    /// Decide whether the nef side lies in the closed light cone.
    Certify { file: String },
    /// Build a verified ample class.
    Ample {
        file: String,
        #[arg(long)]
        minimal: bool,
        #[arg(long)]
        reider: bool,
    },
    /// Classify the (-2)-curve components.
    Roots { file: String },
    /// Check K^2 = 0 with affine (-2)-components of total rank 8.
    Case2b { file: String },
    /// Enumerate admissible Gram matrices.
    EnumerateGram {
        #[arg(long)]
        rho: usize,
        #[arg(long)]
        delta: u64,
        #[arg(long)]
        bounds: bool,
        #[arg(long)]
        pmax: Option<u64>,
        #[arg(long)]
        max_offdiag: Option<i64>,
    },
    /// Classes of bounded square and genus in the span of the curves.
    Classes {
        file: String,
        #[arg(long)]
        delta: u64,
        #[arg(long)]
        pmax: u64,
    },
    /// Mordell-Weil torsion of a fiber configuration.
    Mw {
        #[arg(long, conflicts_with = "verify_table")]
        fibers: Option<String>,
        #[arg(long)]
        verify_table: bool,
    },
    /// Run a blow-up script.
    Blowup { script: String },
    /// List or show built-in fixtures.
    Fixtures {
        id: Option<String>,
        #[arg(long)]
        export: bool,
        #[arg(long, default_value_t = 3)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        g: u64,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Check the almost finite polyhedral conditions.
    Almost {
        file: String,
        /// Coefficients of r over the curves, comma separated or a JSON array.
        #[arg(long = "r", allow_hyphen_values = true)]
        r: String,
        /// JSON file with an array of generator divisors.
        #[arg(long)]
        gens: Option<String>,
        #[arg(long = "R")]
        r_bound: Option<i64>,
    },
}

fn with_file(command: &str, path: &str, f: impl FnOnce(&str) -> Report) -> Report {
    match cli::read_file(path) {
        Ok(text) => f(&text),
        Err(e) => Report::from_error(command, path.as_bytes(), &e),
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let report = match &args.command {
        Command::Analyze { file } => with_file("analyze", file, cli::analyze),
        Command::Certify { file } => with_file("certify", file, cli::certify),
        Command::Ample { file, minimal, reider } => {
            with_file("ample", file, |t| cli::ample(t, *minimal, *reider))
        }
        Command::Roots { file } => with_file("roots", file, cli::roots),
        Command::Case2b { file } => with_file("case2b", file, cli::case2b),
        Command::EnumerateGram { rho, delta, bounds, pmax, max_offdiag } => {
            cli::enumerate(&EnumerateArgs {
                rho: *rho,
                delta: *delta,
                bounds: *bounds,
                pmax: *pmax,
                max_offdiag: *max_offdiag,
            })
        }
        Command::Classes { file, delta, pmax } => {
            with_file("classes", file, |t| cli::classes(t, *delta, *pmax))
        }
        Command::Mw { fibers, verify_table } => match (fibers, verify_table) {
            (Some(f), _) => cli::mw_fibers(f),
            (None, true) => cli::mw_verify_table(),
            (None, false) => {
                let e = fpmc::Error::input("mw", "give --fibers or --verify-table");
                Report::from_error("mw", b"", &e)
            }
        },
        Command::Blowup { script } => with_file("blowup", script, cli::blowup),
        Command::Fixtures { id, export, n, g, k } => {
            let rep = cli::fixtures_cmd(id.as_deref(), *export, FixtureParams { n: *n, g: *g, k: *k });
            if *export && rep.exit_code == 0 {
                // exported data is a loadable file, not a report
                let text = serde_json::to_string_pretty(&rep.payload).expect("json") + "\n";
                let _ = std::io::stdout().lock().write_all(text.as_bytes());
                return ExitCode::SUCCESS;
            }
            rep
        }
        Command::Almost { file, r, gens, r_bound } => {
            let gens_text = match gens.as_deref().map(cli::read_file).transpose() {
                Ok(t) => t,
                Err(e) => {
                    let rep = Report::from_error("almost", file.as_bytes(), &e);
                    return finish(&rep, args.json);
                }
            };
            with_file("almost", file, |t| cli::almost(t, r, gens_text.as_deref(), *r_bound))
        }
    };
    finish(&report, args.json)
}

fn finish(report: &Report, json: bool) -> ExitCode {
    let text = if json {
        report.to_json() + "\n"
    } else {
        cli::render_human(report)
    };
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    ExitCode::from(report.exit_code as u8)
}
