use std::path::PathBuf;
use std::process::ExitCode;

use ck::config::{parse_range, parse_window};
use ck::{CliError, Command, Format, ModuleFamily, RunConfig, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "ck", version, about = "Exact checks for graded Lie conformal algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Builtin algebra (cv, chv, csv, csv-ext) or path to a JSON spec.
    #[arg(long, default_value = "csv")]
    algebra: String,
    /// Index window, e.g. -2..2.
    #[arg(long, default_value = "-2..2", allow_hyphen_values = true)]
    window: String,
    /// Ansatz degree bound (default 6 for derivations, 5 otherwise).
    #[arg(long = "deg-bound")]
    deg_bound: Option<u32>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    RankOne,
    Uniform,
    Pattern,
    AllPatterns,
}

#[derive(Subcommand)]
enum Cmd {
    /// Skew-symmetry and Jacobi identity on the window.
    Verify(Common),
    /// Outer derivations per degree c.
    Derivations {
        #[command(flatten)]
        common: Common,
        /// Degree range, e.g. -1..1.
        #[arg(long, default_value = "-1..1", allow_hyphen_values = true)]
        degrees: String,
    },
    /// Second cohomology per index sum.
    Cohomology(Common),
    /// Module family checks and the extension solvers.
    Modules {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = FamilyArg::RankOne)]
        family: FamilyArg,
        /// 0/1 pattern from the window's lower end, for --family pattern.
        #[arg(long)]
        pattern: Option<String>,
        /// Check a module given as JSON rules instead.
        #[arg(long)]
        rules: Option<PathBuf>,
    },
    /// Translate OPE commutators and compare with the algebra table.
    Ope {
        #[command(flatten)]
        common: Common,
        /// OPE JSON file; the builtin commutator table when absent.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

fn config(cli: Cli) -> Result<(RunConfig, Option<PathBuf>), CliError> {
    let (command, common) = match cli.cmd {
        Cmd::Verify(c) => (Command::Verify, c),
        Cmd::Derivations { common, degrees } => (Command::Derivations { degrees: parse_range(&degrees)? }, common),
        Cmd::Cohomology(c) => (Command::Cohomology, c),
        Cmd::Modules { common, family, pattern, rules } => {
            let family = match (family, pattern) {
                (FamilyArg::Pattern, Some(p)) => ModuleFamily::Pattern(p),
                (FamilyArg::Pattern, None) => return Err(CliError::Usage("--family pattern needs --pattern".into())),
                (_, Some(_)) => return Err(CliError::Usage("--pattern needs --family pattern".into())),
                (FamilyArg::RankOne, None) => ModuleFamily::RankOne,
                (FamilyArg::Uniform, None) => ModuleFamily::Uniform,
                (FamilyArg::AllPatterns, None) => ModuleFamily::AllPatterns,
            };
            (Command::Modules { family, rules }, common)
        }
        Cmd::Ope { common, file } => (Command::Ope { file }, common),
    };
    let mut cfg = RunConfig::new(command, &common.algebra);
    cfg.window = parse_window(&common.window)?;
    if let Some(d) = common.deg_bound {
        cfg.degbound = d;
    }
    cfg.format = match common.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    Ok((cfg, common.out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config(cli).and_then(|(cfg, out)| Ok((ck::run(&cfg)?, cfg.format, out)));
    let (report, format, out) = match result {
        Ok(x) => x,
        Err(e) => {
            eprintln!("ck: {}", e);
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let text = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &text) {
                eprintln!("ck: {}: {}", path.display(), e);
                return ExitCode::from(EXIT_USAGE as u8);
            }
            eprintln!("{}: {}", report.command, if report.passed { "PASS" } else { "FAIL" });
        }
        None => {
            use std::io::Write;
            // A closed pipe (`ck ... | head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
        }
    }
    ExitCode::from(if report.passed { EXIT_PASS } else { EXIT_FAIL } as u8)
}
