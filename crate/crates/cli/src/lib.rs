//! The `gpoisson` document format: declarations of charts, structures and
//! tasks, a parser and canonical renderer for it, and a batch runner.

pub mod document;
pub mod lexer;
pub mod parser;
pub mod render;
pub mod run;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use document::Document;
pub use parser::{parse, ErrorKind, ParseError};
pub use render::render;
pub use run::{run_document, Options, TaskResult, Verdict};

#[derive(Debug, Parser)]
#[command(name = "gpoisson", about = "Verify graded Poisson structures declared in a document")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the tasks of a document.
    Check {
        file: PathBuf,
        /// Run only tasks whose label, target or kind equals NAME.
        #[arg(long, value_name = "NAME")]
        task: Option<String>,
        /// Print the machine-readable report instead of the human one.
        #[arg(long)]
        json: bool,
        /// Abort any task whose intermediate polynomials exceed this word length.
        #[arg(long, value_name = "K")]
        max_degree: Option<u32>,
        /// Add seeded randomized bracket checks where a task offers them.
        #[arg(long, value_name = "N")]
        seed: Option<u64>,
    },
    /// Print the canonical rendering of a document.
    Fmt { file: PathBuf },
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

fn load(file: &PathBuf, err: &mut dyn Write) -> Result<Document, i32> {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "gpoisson: cannot read {}: {e}", file.display());
            return Err(EXIT_USAGE);
        }
    };
    parse(&text).map_err(|e| {
        let _ = writeln!(err, "{}:{e}", file.display());
        EXIT_USAGE
    })
}

/// Runs the command line `args` (including the program name) and returns
/// the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match cli.command {
        Command::Fmt { file } => match load(&file, err) {
            Ok(doc) => {
                let _ = write!(out, "{}", render(&doc));
                EXIT_PASS
            }
            Err(code) => code,
        },
        Command::Check {
            file,
            task,
            json,
            max_degree,
            seed,
        } => {
            let doc = match load(&file, err) {
                Ok(d) => d,
                Err(code) => return code,
            };
            let opts = Options { seed, max_degree, task };
            let results = match run_document(&doc, &opts) {
                Ok(r) => r,
                Err(message) => {
                    let _ = writeln!(err, "gpoisson: {message}");
                    return EXIT_USAGE;
                }
            };
            let _ = if json {
                writeln!(out, "{}", run::json_report(&results))
            } else {
                write!(out, "{}", run::human_report(&results))
            };
            run::exit_code(&results)
        }
    }
}
