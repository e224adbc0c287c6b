use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blowup::session::corpus::{check_expectations, expectations, CORPUS};
use blowup::session::{emit_report, parse_session, run_session, Directive, DirectiveKind, Format, RunConfig, Session, SessionError};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_COMPUTATION: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

/// Invariants of blowup algebras of m-primary ideals.
#[derive(Parser)]
#[command(name = "blowup", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Common,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Search bound for the reduction number.
    #[arg(long, global = true)]
    cap: Option<u32>,
    /// Window for regularity checks (default r + d + 2).
    #[arg(long, global = true)]
    nmax: Option<u32>,
    /// Directory of the on-disk Gröbner basis cache.
    #[arg(long, global = true, env = "BLOWUP_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, env = "BLOWUP_JOBS")]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a session file and print its report.
    Run { file: PathBuf },
    /// Evaluate one checklist statement on the pair (I, J) of a session file.
    Check {
        file: PathBuf,
        #[arg(long)]
        statement: String,
    },
    /// Run the bundled sessions, or the `.session` files of a directory,
    /// and compare with their `# expect` lines.
    Selftest { dir: Option<PathBuf> },
}

impl Common {
    fn config(&self) -> RunConfig {
        let mut c = RunConfig { nmax: self.nmax, cache_dir: self.cache_dir.clone(), jobs: self.jobs, ..RunConfig::default() };
        if let Some(cap) = self.cap {
            c.reduction_cap = cap;
        }
        c
    }

    fn format(&self) -> Format {
        match self.format {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        }
    }
}

fn load(path: &Path) -> Result<Session, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_session(&text).map_err(|e| format!("{}:{e}", path.display()))
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_COMPUTATION)
}

fn run(file: &Path, opts: &Common) -> ExitCode {
    let session = match load(file) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    match run_session(&session, &opts.config()) {
        Ok(report) => {
            print!("{}", emit_report(&report, opts.format()));
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn check(file: &Path, statement: &str, opts: &Common) -> ExitCode {
    let mut session = match load(file) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    session.directives = vec![Directive { kind: DirectiveKind::Check(statement.to_string()), options: Vec::new(), line: 0 }];
    let report = match run_session(&session, &opts.config()) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let verdict = &report.results[0].value;
    match opts.format {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(verdict).unwrap()),
        OutputFormat::Text => {
            let field = |k: &str| verdict[k].as_str().unwrap_or_default().to_string();
            println!("{}: {}", field("id"), field("statement"));
            println!("  hypothesis {}", if verdict["hypothesis_holds"] == true { "holds" } else { "fails" });
            println!("  conclusion {}", field("verdict"));
            println!("  {}", field("detail"));
        }
    }
    ExitCode::SUCCESS
}

fn sessions_in(dir: &Path) -> Result<Vec<(String, String)>, String> {
    let read = std::fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut paths: Vec<PathBuf> = read.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "session")).collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            std::fs::read_to_string(&p).map(|t| (name, t)).map_err(|e| format!("{}: {e}", p.display()))
        })
        .collect()
}

fn selftest(dir: Option<&Path>, opts: &Common) -> ExitCode {
    let entries = match dir {
        Some(d) => match sessions_in(d) {
            Ok(v) => v,
            Err(e) => return fail(e),
        },
        None => CORPUS.iter().map(|e| (e.name.to_string(), e.text.to_string())).collect(),
    };
    let config = opts.config();
    let mut mismatched = false;
    for (name, text) in &entries {
        let entry = Entry { name, text };
        let outcome = parse_session(entry.text).map_err(SessionError::from).and_then(|s| run_session(&s, &config));
        let report = match outcome {
            Ok(r) => r,
            Err(e) => return fail(format!("{}: {e}", entry.name)),
        };
        let expected = match expectations(entry.text) {
            Ok(e) => e,
            Err(e) => return fail(format!("{}: {e}", entry.name)),
        };
        let bad = check_expectations(&report.to_json(), &expected);
        if bad.is_empty() {
            println!("ok    {:<18} {} values", entry.name, expected.len());
        } else {
            mismatched = true;
            println!("FAIL  {:<18} {} of {} values differ", entry.name, bad.len(), expected.len());
            for m in bad {
                let found = m.found.map(|v| v.to_string()).unwrap_or_else(|| "missing".into());
                println!("      {}: expected {}, found {found}", m.path, m.expected);
            }
        }
    }
    if mismatched {
        ExitCode::from(EXIT_MISMATCH)
    } else {
        ExitCode::SUCCESS
    }
}

struct Entry<'a> {
    name: &'a str,
    text: &'a str,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Run { file } => run(file, &cli.opts),
        Command::Check { file, statement } => check(file, statement, &cli.opts),
        Command::Selftest { dir } => selftest(dir.as_deref(), &cli.opts),
    }
}
