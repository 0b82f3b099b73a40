//! Command-line front end for the driverset toolkit.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use driverset::graph::{build_graph, parse_edge_list, Graph, GraphSpec};
use driverset::{Error, Limits};

pub mod expectations;
pub mod report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CAPABILITY: i32 = 1;
pub const EXIT_ARGUMENT: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "driverset", about = "Driver sets, zero forcing and structural controllability of graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for sampled systems.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest n for driver-set and zero-forcing enumeration.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Zero threshold for the floating-point cross-check.
    #[arg(long, global = true, default_value_t = driverset::spectral::DEFAULT_ZERO_TOL)]
    pub tol: f64,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Include wall-clock timing in JSON output.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full report: multiplicity bound, minimum driver sets, zero forcing, classification.
    Analyze {
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Minimum driver sets only.
    Drivers {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        classify: bool,
    },
    /// Zero forcing number and minimum zero forcing sets.
    Zf {
        #[arg(long)]
        graph: String,
    },
    /// Certified system on which the given driver set fails.
    Witness {
        #[arg(long)]
        graph: String,
        /// Comma-separated vertices, e.g. `1,4`.
        #[arg(long)]
        set: String,
    },
    /// Check the embedded table of expected results.
    VerifyPaper,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Options {
    pub seed: u64,
    pub limits: Limits,
    pub tol: f64,
    pub timing: bool,
}

impl Options {
    fn from_cli(cli: &Cli) -> Options {
        Options {
            seed: cli.seed,
            limits: cli
                .cap
                .map_or_else(Limits::default, |n| Limits::default().with_enumeration_cap(n)),
            tol: cli.tol,
            timing: cli.timing,
        }
    }
}

impl Default for Options {
    fn default() -> Options {
        Options {
            seed: 0,
            limits: Limits::default(),
            tol: driverset::spectral::DEFAULT_ZERO_TOL,
            timing: false,
        }
    }
}

/// Parse `path:N`, `cycle:N`, `hypercube:K` or `file:PATH`.
pub fn parse_graph(descriptor: &str) -> driverset::Result<Graph> {
    let (kind, arg) = descriptor
        .split_once(':')
        .ok_or_else(|| Error::Descriptor(format!("expected KIND:ARG, got {descriptor:?}")))?;
    let number = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::Descriptor(format!("bad size {s:?} in {descriptor:?}")))
    };
    match kind {
        "path" => build_graph(&GraphSpec::Path(number(arg)?)),
        "cycle" => build_graph(&GraphSpec::Cycle(number(arg)?)),
        "hypercube" => {
            let k = u32::try_from(number(arg)?)
                .map_err(|_| Error::Descriptor(format!("dimension too large in {descriptor:?}")))?;
            build_graph(&GraphSpec::Hypercube(k))
        }
        "file" => {
            let text = std::fs::read_to_string(arg)
                .map_err(|e| Error::Descriptor(format!("cannot read {arg}: {e}")))?;
            parse_edge_list(&text)
        }
        _ => Err(Error::Descriptor(format!(
            "unknown graph kind {kind:?}; use path, cycle, hypercube or file"
        ))),
    }
}

/// Parse a comma-separated vertex list into a sorted set.
pub fn parse_set(text: &str) -> driverset::Result<Vec<usize>> {
    let mut s = text
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::Argument(format!("bad vertex {v:?} in {text:?}")))
        })
        .collect::<driverset::Result<Vec<usize>>>()?;
    s.sort_unstable();
    if s.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Argument(format!("repeated vertex in {text:?}")));
    }
    Ok(s)
}

fn exit_code(e: &Error) -> i32 {
    if e.is_capability() {
        EXIT_CAPABILITY
    } else {
        EXIT_ARGUMENT
    }
}

/// Run a parsed command. Returns the exit code and the text for standard output.
fn dispatch(cli: &Cli) -> driverset::Result<(i32, String)> {
    let opts = Options::from_cli(cli);
    let text = match &cli.command {
        Command::Analyze { graph, format } => {
            let r = report::analyze(&parse_graph(graph)?, graph, &opts)?;
            match format {
                Format::Json => report::to_json(&r),
                Format::Table => report::to_table(&r),
            }
        }
        Command::Drivers { graph, classify } => {
            report::to_json(&report::drivers(&parse_graph(graph)?, graph, *classify, &opts)?)
        }
        Command::Zf { graph } => report::to_json(&report::zero_forcing(&parse_graph(graph)?, graph, &opts)?),
        Command::Witness { graph, set } => {
            let s = parse_set(set)?;
            report::to_json(&report::witness(&parse_graph(graph)?, graph, &s, &opts)?)
        }
        Command::VerifyPaper => {
            let r = expectations::verify_expectations(&opts);
            let code = if r.failed > 0 { EXIT_VERIFICATION } else { EXIT_OK };
            return Ok((code, report::to_json(&r)));
        }
    };
    Ok((EXIT_OK, text))
}

/// Run the CLI on `argv` (including the program name). Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{shown}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{shown}");
                    EXIT_ARGUMENT
                }
            };
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            let _ = writeln!(err, "error: --jobs must be at least 1");
            return EXIT_ARGUMENT;
        }
        builder = builder.num_threads(jobs);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return EXIT_CAPABILITY;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok((code, text)) => match writeln!(out, "{text}") {
            Ok(()) => code,
            Err(e) => {
                let _ = writeln!(err, "error: cannot write output: {e}");
                EXIT_CAPABILITY
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
