//! `freetrace`: exact free cumulants of trace words from the command line.
//!
//! Exit codes: 0 on success, 1 on a finding or budget violation, 2 on bad input.

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use freetrace::nc::{
    enumerate_nc_pairings, enumerate_nc_with_limit, is_connecting, kreweras, Composition,
};
use freetrace::{
    compare_engine_oracle, format_rational, Engine, EngineConfig, Error, NcPartition, OracleBudget,
    TraceWord,
};

#[derive(Parser)]
#[command(
    name = "freetrace",
    version,
    about = "Exact free cumulants of traces of powers of a free unitary"
)]
struct Cli {
    /// Largest total power for partition enumeration.
    #[arg(long, global = true, default_value_t = freetrace::engine::DEFAULT_ENUMERATION_LIMIT,
          value_parser = parse_positive)]
    limit: usize,

    /// Worker threads: a positive integer or `auto`.
    #[arg(long, global = true, env = "FREETRACE_WORKERS", default_value = "1", value_parser = parse_workers)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Noncrossing partition utilities.
    #[command(subcommand)]
    Nc(NcCommand),
    /// Free cumulant of a trace word, as a Laurent polynomial in n.
    Cumulant(CumulantArgs),
    /// Circularity check plus engine/oracle comparison.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum NcCommand {
    /// Stream NC(p) as one JSON object per line.
    List {
        #[arg(long)]
        p: usize,
        /// Only noncrossing pairings.
        #[arg(long)]
        pairings: bool,
    },
    /// Kreweras complement of a noncrossing partition.
    Kreweras(PartitionArgs),
    /// Whether a partition connects the intervals of a composition.
    Connecting {
        #[command(flatten)]
        partition: PartitionArgs,
        /// Comma-separated parts, e.g. `2,2`.
        #[arg(long)]
        composition: String,
    },
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long)]
    p: usize,
    /// Blocks as JSON, e.g. `[[1,2],[3]]`.
    #[arg(long)]
    blocks: String,
}

#[derive(Args)]
struct CumulantArgs {
    /// Comma-separated factors `u^<p>` with optional trailing `*`.
    #[arg(long)]
    word: String,
    /// Also evaluate at this dimension.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    at_n: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 6, value_parser = parse_positive)]
    max_p: usize,
    /// Largest number of factors in the circularity check.
    #[arg(long, default_value_t = 4, value_parser = parse_positive)]
    max_s: usize,
    /// Dimensions for the oracle comparison.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3", value_parser = clap::value_parser!(u32).range(1..))]
    n: Vec<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("expected a positive integer, got {s:?}")),
        Ok(k) => Ok(k),
    }
}

fn parse_workers(s: &str) -> Result<usize, String> {
    if s == "auto" {
        Ok(0)
    } else {
        parse_positive(s)
    }
}

/// Why a command stopped early.
enum Failure {
    Finding,
    Usage(String),
    Budget(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::LimitExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(e) => Failure::Io(e),
            other => Failure::Io(io::Error::other(format!("{other:?}"))),
        }
    }
}

type Outcome = Result<(), Failure>;

fn print_json<W: Write, T: Serialize>(out: &mut W, value: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")
}

fn parse_partition(args: &PartitionArgs) -> Result<NcPartition, Failure> {
    let blocks: Vec<Vec<usize>> = serde_json::from_str(&args.blocks)
        .map_err(|e| Failure::Usage(format!("bad --blocks: {e}")))?;
    Ok(NcPartition::new(args.p, blocks)?)
}

fn cmd_nc<W: Write>(command: NcCommand, limit: usize, out: &mut W) -> Outcome {
    match command {
        NcCommand::List { p, pairings } => {
            let partitions = enumerate_nc_with_limit(p, limit)?;
            let partitions = if pairings {
                enumerate_nc_pairings(p)?
            } else {
                partitions
            };
            for pi in partitions {
                print_json(out, &pi)?;
            }
        }
        NcCommand::Kreweras(args) => print_json(out, &kreweras(&parse_partition(&args)?))?,
        NcCommand::Connecting {
            partition,
            composition,
        } => {
            let pi = parse_partition(&partition)?;
            let parts = composition
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Usage(format!("bad --composition: {e}")))?;
            let c = Composition::new(parts)?;
            #[derive(Serialize)]
            struct Connecting<'a> {
                partition: &'a NcPartition,
                composition: &'a [usize],
                connecting: bool,
            }
            let connecting = is_connecting(&pi, &c)?;
            print_json(
                out,
                &Connecting {
                    partition: &pi,
                    composition: c.parts(),
                    connecting,
                },
            )?;
        }
    }
    Ok(())
}

fn cmd_cumulant<W: Write>(args: CumulantArgs, engine: &Engine, out: &mut W) -> Outcome {
    let word: TraceWord = args.word.parse()?;
    let report = engine.trace_cumulant_brown(&word)?;
    #[derive(Serialize)]
    struct Evaluation {
        n: u64,
        value: String,
    }
    #[derive(Serialize)]
    struct Document<'a> {
        #[serde(flatten)]
        report: &'a freetrace::CumulantReport,
        #[serde(skip_serializing_if = "Option::is_none")]
        at_n: Option<Evaluation>,
    }
    let at_n = match args.at_n {
        Some(n) => Some(Evaluation {
            n,
            value: format_rational(&report.value.eval(n)?),
        }),
        None => None,
    };
    print_json(
        out,
        &Document {
            report: &report,
            at_n,
        },
    )?;
    Ok(())
}

fn cmd_verify<W: Write>(args: VerifyArgs, engine: &Engine, out: &mut W) -> Outcome {
    let circularity = engine.circularity_report(args.max_p, args.max_s)?;
    let comparison = compare_engine_oracle(engine, args.max_p, &args.n, OracleBudget::default())?;
    match args.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Document<'a> {
                checked: usize,
                mismatches: &'a [freetrace::verify::Mismatch],
                n_values: &'a [u32],
                circularity: &'a freetrace::CircularityReport,
            }
            print_json(
                out,
                &Document {
                    checked: comparison.checked,
                    mismatches: &comparison.mismatches,
                    n_values: &args.n,
                    circularity: &circularity,
                },
            )?;
        }
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut *out);
            csv.write_record(["suite", "word", "n", "expected", "actual", "status"])?;
            for word in TraceWord::enumerate(args.max_p, args.max_s) {
                let expected = freetrace::circular_limit(&word);
                let actual = engine.asymptotic_distribution(&word)?;
                let status = if expected == actual { "pass" } else { "fail" };
                csv.write_record([
                    "circularity",
                    &word.to_string(),
                    "inf",
                    &format_rational(&expected),
                    &format_rational(&actual),
                    status,
                ])?;
            }
            for c in &comparison.comparisons {
                csv.write_record([
                    "oracle",
                    &c.word.to_string(),
                    &c.n.to_string(),
                    &format_rational(&c.oracle),
                    &format_rational(&c.engine),
                    if c.agrees() { "pass" } else { "fail" },
                ])?;
            }
            csv.flush()?;
        }
    }
    if circularity.passed() && comparison.passed() {
        Ok(())
    } else {
        Err(Failure::Finding)
    }
}

fn run(cli: Cli) -> Outcome {
    let engine = Engine::new(EngineConfig {
        enumeration_limit: cli.limit,
        workers: cli.workers,
        ..EngineConfig::default()
    });
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let outcome = match cli.command {
        Command::Nc(command) => cmd_nc(command, cli.limit, &mut out),
        Command::Cumulant(args) => cmd_cumulant(args, &engine, &mut out),
        Command::Verify(args) => cmd_verify(args, &engine, &mut out),
    };
    out.flush()?;
    outcome
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Finding) => ExitCode::from(1),
        Err(Failure::Budget(msg)) => {
            eprintln!("freetrace: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("freetrace: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("freetrace: {e}");
            ExitCode::from(1)
        }
    }
}
