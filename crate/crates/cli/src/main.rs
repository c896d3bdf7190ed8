//! `fpc` — partitions, orbits, inverse-limit threads, and conjecture sweeps
//! from the command line.
//!
//! Exit codes: 0 success (a report full of counterexamples is still a
//! success), 2 usage, 3 parse error, 4 dimension mismatch, 5 size ceiling,
//! 6 I/O, 7 other domain errors. All stdout is line-oriented and stable
//! across runs; timing goes to stderr.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use fpc_core::conjecture::{
    exhaustive_sweep, sampled_sweep, FamilyDescriptor, FamilyMode, SweepMode, SweepOptions,
};
use fpc_core::inverse_system::{InverseSystem, PartitionFamily, Semantics};
use fpc_core::partitions::{enumerate_partitions, FULL_LATTICE_CEILING};
use fpc_core::{parse_endofunction, parse_partition, Error};

#[derive(Debug, Parser, PartialEq)]
#[command(
    name = "fpc",
    version,
    about = "Partition inverse limits and fixed-point sweeps for finite dynamical systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, PartialEq)]
enum Command {
    /// List every partition of {0, …, n−1} and the Bell count
    Partitions(PartitionsArgs),
    /// Show the blocks of a partition that one orbit revisits forever
    Recurrent(RecurrentArgs),
    /// Enumerate the inverse-limit threads for one map and point
    Limit(LimitArgs),
    /// Sweep the fixed-point equivalence over a map space and report
    Conjecture(ConjectureArgs),
}

#[derive(Debug, Args, PartialEq)]
struct PartitionsArgs {
    /// Ground-set size
    #[arg(long)]
    n: usize,
    /// Override the size ceiling
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Args, PartialEq)]
struct RecurrentArgs {
    /// Map as an image table, e.g. "[1,2,1]"
    #[arg(long)]
    map: String,
    /// Base point
    #[arg(long)]
    point: usize,
    /// Partition, e.g. "{0,1}|{2}" or "[0,0,1]"
    #[arg(long)]
    partition: String,
}

#[derive(Debug, Args, PartialEq)]
struct LimitArgs {
    /// Map as an image table, e.g. "[1,2,1]"
    #[arg(long)]
    map: String,
    /// Base point
    #[arg(long)]
    point: usize,
    /// Limit semantics: standard | point-supported
    #[arg(long, value_parser = parse_semantics)]
    semantics: Semantics,
    /// Partition family: full | file:PATH
    #[arg(long, default_value = "full")]
    family: FamilySpec,
    /// Return at most this many threads
    #[arg(long)]
    cap: Option<usize>,
    /// Override the size ceiling
    #[arg(long)]
    force: bool,
    /// Print the nodes, the restricted coarsening maps, and the verifier's checks
    #[arg(long)]
    explain: bool,
}

#[derive(Debug, Args, PartialEq)]
struct ConjectureArgs {
    /// Ground-set size
    #[arg(long)]
    n: usize,
    /// Limit semantics: standard | point-supported
    #[arg(long, value_parser = parse_semantics)]
    semantics: Semantics,
    /// Partition family: full | file:PATH
    #[arg(long, default_value = "full")]
    family: FamilySpec,
    /// Sample this many maps instead of sweeping exhaustively
    #[arg(long)]
    sample: Option<u64>,
    /// Seed for sampled sweeps
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-point thread cap
    #[arg(long)]
    cap: Option<usize>,
    /// Write the JSON report to this path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sweep worker threads (content never depends on this)
    #[arg(long)]
    workers: Option<usize>,
    /// Override the sweep and lattice ceilings
    #[arg(long)]
    force: bool,
}

fn parse_semantics(text: &str) -> Result<Semantics, String> {
    text.parse().map_err(|err: Error| err.to_string())
}

#[derive(Debug, Clone, PartialEq)]
enum FamilySpec {
    Full,
    File(PathBuf),
}

impl FromStr for FamilySpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "full" {
            Ok(FamilySpec::Full)
        } else if let Some(path) = s.strip_prefix("file:") {
            Ok(FamilySpec::File(PathBuf::from(path)))
        } else {
            Err(format!("expected 'full' or 'file:PATH', got '{s}'"))
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Full => f.write_str("full"),
            FamilySpec::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

// ---------------------------------------------------------------------------
// Error handling and exit codes
// ---------------------------------------------------------------------------

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(err) => err.fmt(f),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::Core(err)
    }
}

fn exit_code(err: &CliError) -> u8 {
    match err {
        CliError::Io { .. } => 6,
        CliError::Core(err) => match err {
            Error::Parse { .. } => 3,
            Error::DimensionMismatch { .. } => 4,
            Error::CeilingExceeded { .. } => 5,
            Error::EmptyGroundSet | Error::Usage { .. } => 2,
            _ => 7,
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => err.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Partitions(args) => cmd_partitions(args),
        Command::Recurrent(args) => cmd_recurrent(args),
        Command::Limit(args) => cmd_limit(args),
        Command::Conjecture(args) => cmd_conjecture(args),
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_partitions(args: PartitionsArgs) -> Result<(), CliError> {
    if !args.force && args.n > FULL_LATTICE_CEILING {
        return Err(Error::CeilingExceeded {
            n: args.n,
            ceiling: FULL_LATTICE_CEILING,
            what: "partition listing",
        }
        .into());
    }
    let mut count = 0u64;
    for partition in enumerate_partitions(args.n)? {
        println!("{} {}", partition.rgs_text(), partition.blocks_text());
        count += 1;
    }
    println!("{count} partitions");
    Ok(())
}

fn cmd_recurrent(args: RecurrentArgs) -> Result<(), CliError> {
    let map = parse_endofunction(&args.map)?;
    let partition = parse_partition(&args.partition)?;
    let recurrent = map.recurrent_blocks(args.point, &partition)?;
    for &block in recurrent.blocks() {
        println!("{}", partition.block_text(block));
    }
    Ok(())
}

fn build_family(spec: &FamilySpec, n: usize, force: bool) -> Result<PartitionFamily, CliError> {
    match spec {
        FamilySpec::Full => {
            if force {
                Ok(PartitionFamily::full_lattice_unchecked(n)?)
            } else {
                Ok(PartitionFamily::full_lattice(n)?)
            }
        }
        FamilySpec::File(path) => Ok(load_family(path)?),
    }
}

fn load_family(path: &PathBuf) -> Result<PartitionFamily, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let mut members = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let partition = parse_partition(line).map_err(|err| match err {
            Error::Parse { position, message } => Error::Parse {
                position,
                message: format!("{}:{}: {message}", path.display(), index + 1),
            },
            other => other,
        })?;
        members.push(partition);
    }
    Ok(PartitionFamily::new(members)?)
}

fn format_points(points: &[usize]) -> String {
    let body: Vec<String> = points.iter().map(|p| p.to_string()).collect();
    format!("[{}]", body.join(","))
}

fn cmd_limit(args: LimitArgs) -> Result<(), CliError> {
    let map = parse_endofunction(&args.map)?;
    let family = build_family(&args.family, map.n(), args.force)?;
    let system = InverseSystem::build(&map, args.point, &family)?;

    if args.explain {
        let shape = map.orbit_shape(args.point)?;
        println!(
            "explain: orbit of {} under {}: tail {} cycle {} periodic {}",
            args.point,
            map,
            format_points(shape.tail()),
            format_points(shape.cycle()),
            shape.is_periodic()
        );
        println!(
            "explain: family has {} members{}",
            family.len(),
            if family.is_full_lattice() {
                " (full lattice)"
            } else {
                ""
            }
        );
        for (member, node) in family.members().iter().zip(system.nodes()) {
            let blocks: Vec<String> = node
                .blocks()
                .iter()
                .map(|&block| member.block_text(block))
                .collect();
            println!("explain: node {}: {}", member.rgs_text(), blocks.join(" "));
        }
        for edge in family.refinement_edges() {
            let fine = &family.members()[edge.fine];
            let coarse = &family.members()[edge.coarse];
            let pairs: Vec<String> = system.nodes()[edge.fine]
                .blocks()
                .iter()
                .map(|&block| {
                    format!(
                        "{}->{}",
                        fine.block_text(block),
                        coarse.block_text(edge.table[block])
                    )
                })
                .collect();
            println!(
                "explain: edge {} => {}: {}",
                fine.rgs_text(),
                coarse.rgs_text(),
                pairs.join(" ")
            );
        }
    }

    let enumeration = system.threads_capped(args.semantics, args.cap);
    for (index, thread) in enumeration.threads.iter().enumerate() {
        let record = thread.to_record(&family);
        let body: Vec<String> = record
            .0
            .iter()
            .map(|entry| format!("{}->{}", entry.partition, entry.block))
            .collect();
        println!("thread {}: {}", index + 1, body.join(" "));
        if args.explain {
            system
                .verify_thread(thread, args.semantics)
                .map_err(|violation| Error::Internal(violation.to_string()))?;
            println!("explain: thread {} verified", index + 1);
        }
    }
    let count = enumeration.threads.len();
    let plural = if count == 1 { "thread" } else { "threads" };
    let truncated = if enumeration.truncated {
        " (truncated by cap)"
    } else {
        ""
    };
    println!("{count} {plural}{truncated}");
    Ok(())
}

fn cmd_conjecture(args: ConjectureArgs) -> Result<(), CliError> {
    let family_mode = match &args.family {
        FamilySpec::Full => FamilyMode::FullLattice,
        FamilySpec::File(path) => FamilyMode::Given(load_family(path)?),
    };
    let options = SweepOptions {
        workers: args.workers,
        force: args.force,
        thread_cap: args.cap,
        cancel: None,
    };
    let report = match args.sample {
        Some(sample_size) => sampled_sweep(
            args.n,
            args.semantics,
            sample_size,
            args.seed,
            &family_mode,
            &options,
        )?,
        None => exhaustive_sweep(args.n, args.semantics, &family_mode, &options)?,
    };
    let family_text = match &report.family {
        FamilyDescriptor::FullLattice { .. } => "full-lattice".to_string(),
        FamilyDescriptor::Explicit { members } => format!("explicit({})", members.len()),
    };
    let mode_text = match &report.mode {
        SweepMode::Exhaustive => "exhaustive".to_string(),
        SweepMode::Sampled { sample_size, seed } => {
            format!("sampled(size={sample_size},seed={seed})")
        }
    };
    println!(
        "n={} semantics={} family={} mode={} points={} holds={} counterexamples={} forward={} backward={} complete={}",
        report.n,
        report.semantics,
        family_text,
        mode_text,
        report.total_points,
        report.holds_count,
        report.counterexample_count(),
        report.direction.forward_failures,
        report.direction.backward_failures,
        report.complete
    );
    eprintln!("sweep completed in {:.2?}", report.wall_time);
    if let Some(path) = &args.out {
        fs::write(path, report.to_json()).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        println!("report written to {}", path.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Config round-trip support
// ---------------------------------------------------------------------------

#[cfg(test)]
impl Cli {
    /// The canonical argv (without the binary name) that re-parses to this
    /// configuration.
    fn to_args(&self) -> Vec<String> {
        let mut argv = Vec::new();
        match &self.command {
            Command::Partitions(args) => {
                argv.push("partitions".into());
                argv.push("--n".into());
                argv.push(args.n.to_string());
                if args.force {
                    argv.push("--force".into());
                }
            }
            Command::Recurrent(args) => {
                argv.push("recurrent".into());
                argv.push("--map".into());
                argv.push(args.map.clone());
                argv.push("--point".into());
                argv.push(args.point.to_string());
                argv.push("--partition".into());
                argv.push(args.partition.clone());
            }
            Command::Limit(args) => {
                argv.push("limit".into());
                argv.push("--map".into());
                argv.push(args.map.clone());
                argv.push("--point".into());
                argv.push(args.point.to_string());
                argv.push("--semantics".into());
                argv.push(args.semantics.to_string());
                argv.push("--family".into());
                argv.push(args.family.to_string());
                if let Some(cap) = args.cap {
                    argv.push("--cap".into());
                    argv.push(cap.to_string());
                }
                if args.force {
                    argv.push("--force".into());
                }
                if args.explain {
                    argv.push("--explain".into());
                }
            }
            Command::Conjecture(args) => {
                argv.push("conjecture".into());
                argv.push("--n".into());
                argv.push(args.n.to_string());
                argv.push("--semantics".into());
                argv.push(args.semantics.to_string());
                argv.push("--family".into());
                argv.push(args.family.to_string());
                if let Some(sample) = args.sample {
                    argv.push("--sample".into());
                    argv.push(sample.to_string());
                }
                argv.push("--seed".into());
                argv.push(args.seed.to_string());
                if let Some(cap) = args.cap {
                    argv.push("--cap".into());
                    argv.push(cap.to_string());
                }
                if let Some(out) = &args.out {
                    argv.push("--out".into());
                    argv.push(out.display().to_string());
                }
                if let Some(workers) = args.workers {
                    argv.push("--workers".into());
                    argv.push(workers.to_string());
                }
                if args.force {
                    argv.push("--force".into());
                }
            }
        }
        argv
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip(argv: &[&str]) {
        let parsed = Cli::try_parse_from(std::iter::once("fpc").chain(argv.iter().copied()))
            .expect("argv parses");
        let rebuilt = parsed.to_args();
        let reparsed =
            Cli::try_parse_from(std::iter::once("fpc".to_string()).chain(rebuilt.iter().cloned()))
                .expect("canonical argv parses");
        assert_eq!(parsed, reparsed, "round trip through {rebuilt:?}");
    }

    #[test]
    fn configs_round_trip_through_their_text_form() {
        round_trip(&["partitions", "--n", "4"]);
        round_trip(&["partitions", "--n", "13", "--force"]);
        round_trip(&[
            "recurrent",
            "--map",
            "[1,2,1]",
            "--point",
            "0",
            "--partition",
            "{0,1}|{2}",
        ]);
        round_trip(&[
            "limit",
            "--map",
            "[0,1,2]",
            "--point",
            "1",
            "--semantics",
            "standard",
            "--family",
            "full",
            "--cap",
            "5",
            "--explain",
        ]);
        round_trip(&[
            "limit",
            "--map",
            "[0,0]",
            "--point",
            "1",
            "--semantics",
            "point-supported",
            "--family",
            "file:members.txt",
        ]);
        round_trip(&[
            "conjecture",
            "--n",
            "3",
            "--semantics",
            "standard",
            "--sample",
            "100",
            "--seed",
            "42",
            "--out",
            "report.json",
            "--workers",
            "4",
            "--force",
        ]);
    }

    #[test]
    fn family_spec_parses_both_forms() {
        assert_eq!(FamilySpec::from_str("full").unwrap(), FamilySpec::Full);
        assert_eq!(
            FamilySpec::from_str("file:members.txt").unwrap(),
            FamilySpec::File(PathBuf::from("members.txt"))
        );
        assert!(FamilySpec::from_str("lattice").is_err());
    }

    #[test]
    fn semantics_values_parse() {
        assert_eq!(parse_semantics("standard").unwrap(), Semantics::Standard);
        assert_eq!(
            parse_semantics("point-supported").unwrap(),
            Semantics::PointSupported
        );
        assert!(parse_semantics("both").is_err());
    }
}
