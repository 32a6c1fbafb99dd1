//! The `homalg` command line.
//!
//! Exit codes: 0 verified or OK, 1 usage, parse or I/O error, 2 inconclusive,
//! 3 violation or failed invariant.

pub mod commands;
pub mod config;
pub mod input;
pub mod store;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::error::{Error, Result};

pub use config::{Config, Flags};
pub use store::DiskCache;

/// Result of one command: a JSON document, its table rendering and the exit code.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub json: Value,
    pub table: String,
    pub code: i32,
    /// The table text is the JSON document itself.
    pub raw: bool,
}

impl Outcome {
    pub fn new(json: Value, table: String, code: i32) -> Self {
        Outcome { json, table, code, raw: false }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => pretty(&self.json),
            Format::Table if self.raw => pretty(&self.json),
            Format::Table => format!("{}\n", self.table),
        }
    }
}

/// Exit code for an error: 2 for exhausted windows, 3 for broken invariants, else 1.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Inconclusive(_)
        | Error::WindowTooSmall { .. }
        | Error::NotFiniteProjDim { .. }
        | Error::CutoffTooSmall(_) => 2,
        Error::AssociativityFailure { .. }
        | Error::UnitFailure { .. }
        | Error::InvalidStructure(_)
        | Error::InfiniteDimensional { .. } => 3,
        _ => 1,
    }
}

/// Pretty JSON with a trailing newline.
pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Resolved configuration plus the report cache.
pub struct Context {
    pub config: Config,
    pub cache: Option<DiskCache>,
}

impl Context {
    pub fn new(config: Config) -> Self {
        let cache = config.cache.clone().map(DiskCache::new);
        Context { config, cache }
    }

    /// Memoizes a report under the content hash of `kind` and `parts`.
    pub fn cached(&self, kind: &str, mut parts: Vec<Value>, compute: impl FnOnce() -> Result<Value>) -> Result<Value> {
        let Some(cache) = &self.cache else {
            return compute();
        };
        parts.push(Value::from(env!("CARGO_PKG_VERSION")));
        let key = crate::cache::content_key(&format!("report:{kind}"), &parts.iter().collect::<Vec<_>>());
        if let Some(v) = cache.get(&key) {
            return Ok(v);
        }
        let v = compute()?;
        cache.put(&key, &v);
        Ok(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "homalg",
    version,
    about = "Exact homological algebra over finite-dimensional algebras and trivial-extension DG-rings"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    /// Certification window (default 12).
    #[arg(long, global = true)]
    pub cutoff: Option<usize>,
    /// Largest module dimension in FPD searches (default 6).
    #[arg(long = "max-dim", global = true)]
    pub max_dim: Option<usize>,
    /// Field for quivers that do not name one: Q, F5, prime:7, ...
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Cache directory.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Disable the cache.
    #[arg(long = "no-cache", global = true)]
    pub no_cache: bool,
    /// Config file (default ./homalg.toml when present).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate an algebra, quiver, DG-ring, module, bimodule or complex file.
    Ingest {
        path: String,
        /// Algebra for module and complex documents without an "algebra" key.
        #[arg(long)]
        algebra: Option<String>,
        /// DG-ring for DG-module documents without a "ring" key.
        #[arg(long)]
        dgring: Option<String>,
    },
    /// Projective, injective or flat dimension.
    Dims {
        #[arg(long, conflicts_with = "dgring", required_unless_present = "dgring")]
        algebra: Option<String>,
        #[arg(long)]
        dgring: Option<String>,
        /// regular, dual, simple:i, projective:i, injective:i (suffix @n for degree n) or a file.
        #[arg(long, default_value = "regular")]
        target: String,
        #[arg(long, value_enum)]
        kind: commands::Kind,
    },
    /// Write the trivial extension A ⋉ DA[-shift] with DA in degree `shift`.
    Trivext {
        #[arg(long)]
        algebra: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = -1)]
        shift: i32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the dualizing-complex axioms.
    Dualizing {
        #[arg(long)]
        algebra: String,
        /// da, regular, simple (suffix @n for degree n) or a bimodule (complex) file.
        #[arg(long, default_value = "da")]
        with: String,
    },
    /// Finitistic projective dimension search over the test family.
    Fpd {
        #[arg(long, conflicts_with = "dgring", required_unless_present = "dgring")]
        algebra: Option<String>,
        #[arg(long)]
        dgring: Option<String>,
    },
    /// Run theorem suites over fixtures.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
        /// Fixture names or files, comma separated (default: the bundled corpus).
        #[arg(long, value_delimiter = ',')]
        fixtures: Vec<String>,
        /// Build lifts with a deliberately broken construction.
        #[arg(long, value_enum)]
        mutate: Option<verify::Mutation>,
        /// Also write a JUnit-style XML summary.
        #[arg(long)]
        junit: Option<PathBuf>,
    },
    /// Tor profile of a bimodule complex against a module.
    TorCert {
        #[arg(long)]
        algebra: String,
        /// da, regular, simple (suffix @n) or a file.
        #[arg(long, default_value = "da")]
        bimodule: String,
        /// regular, dual, simple:i, projective:i, injective:i or a file.
        #[arg(long, default_value = "simple:0")]
        module: String,
        /// 0..6, 0..=6 or 0,2,4.
        #[arg(long, default_value = "0..=6")]
        degrees: String,
    },
}

fn dispatch(ctx: &Context, cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Ingest { path, algebra, dgring } => commands::ingest(ctx, path, algebra.as_deref(), dgring.as_deref()),
        Command::Dims { algebra, dgring, target, kind } => {
            commands::dims(ctx, algebra.as_deref(), dgring.as_deref(), target, *kind)
        }
        Command::Trivext { algebra, shift, output } => commands::trivext(ctx, algebra, *shift, output.as_deref()),
        Command::Dualizing { algebra, with } => commands::dualizing(ctx, algebra, with),
        Command::Fpd { algebra, dgring } => commands::fpd(ctx, algebra.as_deref(), dgring.as_deref()),
        Command::Verify { suite, fixtures, mutate, junit } => {
            verify::verify(ctx, *suite, fixtures, *mutate, junit.as_deref())
        }
        Command::TorCert { algebra, bimodule, module, degrees } => {
            commands::tor_cert(ctx, algebra, bimodule, module, degrees)
        }
    }
}

/// Runs the CLI on `args`, writing to the given streams; returns the exit code.
pub fn run<I, T>(args: I, env: impl Fn(&str) -> Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let g = &cli.global;
    let flags = Flags {
        config: g.config.clone(),
        cutoff: g.cutoff,
        max_dim: g.max_dim,
        field: g.field.clone(),
        cache: g.cache.clone(),
        no_cache: g.no_cache,
    };
    let config = match Config::resolve(&flags, env) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let ctx = Context::new(config);
    crate::cache::install(ctx.cache.clone().map(|c| Arc::new(c) as Arc<dyn crate::cache::ResolutionStore>));
    let result = dispatch(&ctx, &cli.command);
    crate::cache::install(None);
    match result {
        Ok(o) => {
            let _ = out.write_all(o.render(g.format).as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Entry point of the `homalg` binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), |k| std::env::var(k).ok(), &mut stdout.lock(), &mut stderr.lock())
}
