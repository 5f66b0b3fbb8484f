use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fpp_core::report::{emit_report, run_claims, ConfigSet, Format, LoadError, Registry, Report};
use fpp_core::surface::Case;

const EXIT_FAILED_CLAIM: u8 = 1;
const EXIT_MALFORMED: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "fpp-verify",
    version,
    about = "Exact verification of a fake projective plane construction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the claim registry and write a certificate report.
    Run(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// Which X configuration(s) to verify.
    #[arg(long, value_enum, default_value_t = CaseArg::All)]
    case: CaseArg,
    /// Directory holding Y.json, X_caseI.json, X_caseII.json (and optionally
    /// descent_case*.json); the embedded data is used when omitted.
    #[arg(long, value_name = "DIR")]
    config: Option<PathBuf>,
    /// Output path; the report goes to stdout when omitted.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Print a per-claim summary to stderr.
    #[arg(long)]
    verbose: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    Ii,
    All,
}

impl CaseArg {
    fn cases(self) -> Vec<Case> {
        match self {
            CaseArg::I => vec![Case::I],
            CaseArg::Ii => vec![Case::II],
            CaseArg::All => Case::ALL.to_vec(),
        }
    }

    fn label(self) -> &'static str {
        match self {
            CaseArg::I => "I",
            CaseArg::Ii => "II",
            CaseArg::All => "all",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Md,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Md => Format::Markdown,
        }
    }
}

fn init_logging(verbose: bool) {
    let default = if verbose { "info" } else { "error" };
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FPP_VERIFY_LOG", default))
        .format_timestamp(None)
        .init();
}

fn timestamp() -> String {
    time::OffsetDateTime::now_utc()
        .format(&time::format_description::well_known::Rfc3339)
        .unwrap_or_default()
}

fn run(args: RunArgs) -> ExitCode {
    let cases = args.case.cases();
    let set = match &args.config {
        Some(dir) => match ConfigSet::load_dir(dir, &cases) {
            Ok(set) => set,
            Err(e @ LoadError::Malformed { .. }) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_MALFORMED);
            }
            Err(e @ LoadError::Io { .. }) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_IO);
            }
        },
        None => ConfigSet::embedded(&cases),
    };
    log::info!("evaluating claims for case selection {}", args.case.label());
    let report = Report::new(args.case.label(), run_claims(&set, &Registry::embedded()), timestamp());
    let bytes = emit_report(&report, args.format.into());
    let written = match &args.report {
        Some(path) => fs::write(path, &bytes).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).map_err(|e| e.to_string())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_IO);
    }
    let s = report.summary;
    if args.verbose {
        for c in &report.claims {
            eprintln!("{:<32} {:?}", c.claim_id, c.status);
        }
    }
    eprintln!(
        "{} claims: {} verified, {} asserted-unverified, {} failed",
        s.total, s.verified, s.asserted_unverified, s.failed
    );
    if report.has_failures() {
        ExitCode::from(EXIT_FAILED_CLAIM)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => {
            init_logging(args.verbose);
            run(args)
        }
    }
}
