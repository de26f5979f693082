//! File-based command line interface over the boolsplit library.
//!
//! Exit codes: 0 success, 2 input/parse errors, 3 precondition failures
//! (e.g. no admissible witness, exhausted configuration), 4 internal
//! invariant violations and certificate verification failures.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use boolsplit::{
    cert::CertIoError, coherent_split, generate, read_jsonl, write_jsonl, Certificate,
    CertificatePayload, FeedError, FeedLogCert, GroupElement, OpenBox, OracleBank, OracleState,
    PeriodicSet, RunManifest, Sim, SimConfig, SimError, SimPoint, SplitError, SplitOptions,
    SplitStats, SplitterState, StarMode, StreamKind, StreamProfile, UltrafilterId, VerifyFailure,
};

#[derive(Parser)]
#[command(name = "boolsplit", version, about = "Splitting engine for free Boolean groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum KindArg {
    StarFree,
    StarRich,
    Mixed,
    Bucketed,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    Auto,
    Finite,
    Infinite,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a pairwise-distinct element stream (JSON lines).
    Generate {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Size of the non-star point pool.
        #[arg(long, default_value_t = 1000)]
        pool_size: usize,
        /// Bucket count for the bucketed profile.
        #[arg(long, default_value_t = 3)]
        buckets: usize,
        /// Dominant bucket share in percent for the bucketed profile.
        #[arg(long, default_value_t = 70)]
        dominant_percent: u8,
    },
    /// Feed a stream to the online splitter; emit reports plus a summary.
    Split {
        #[arg(long)]
        input: PathBuf,
        /// Where to write the report lines; stdout when omitted.
        #[arg(long)]
        reports: Option<PathBuf>,
        /// Optionally seal the run into a replayable certificate.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Split a stream by a coherent map and emit the certificate.
    CoherentSplit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cutoff: usize,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        /// Total goals on the forcing path (id prelude plus hit goals).
        #[arg(long)]
        schedule_length: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer a list of membership queries on one lazy ultrafilter oracle.
    Oracle {
        /// JSON-lines file of eventually periodic sets.
        #[arg(long)]
        queries: PathBuf,
        #[arg(long, default_value_t = 0)]
        id: u32,
        /// Where to write the transcript lines; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-stage construction simulator.
    Simulate {
        #[command(subcommand)]
        what: SimulateCommand,
    },
    /// Replay certificates; nonzero exit on any mismatch.
    Verify {
        files: Vec<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SimulateCommand {
    /// Selective-pseudocompactness witness for a box sequence.
    Selective {
        #[arg(long)]
        config: PathBuf,
        /// JSON array of open boxes.
        #[arg(long)]
        boxes: PathBuf,
        /// The ultrafilter id to witness against.
        #[arg(long)]
        p: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Convergence refutation for a faithfully indexed family.
    Refute {
        #[arg(long)]
        config: PathBuf,
        /// JSON-lines file of {"g": point, "element": points} records.
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// One line of a refutation family file.
#[derive(Serialize, Deserialize)]
struct FamilyLine {
    g: SimPoint,
    element: GroupElement,
}

enum CliError {
    Input(String),
    Precondition(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Precondition(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError::Input(e.to_string())
    }
}

impl From<CertIoError> for CliError {
    fn from(e: CertIoError) -> CliError {
        CliError::Input(e.to_string())
    }
}

impl From<FeedError> for CliError {
    fn from(e: FeedError) -> CliError {
        CliError::Precondition(e.to_string())
    }
}

impl From<SplitError> for CliError {
    fn from(e: SplitError) -> CliError {
        match e {
            SplitError::IncoherentResult(_) | SplitError::Eval(_) => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> CliError {
        match e {
            SimError::Internal(_) => CliError::Internal(e.to_string()),
            SimError::Split(inner) => inner.into(),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<VerifyFailure> for CliError {
    fn from(e: VerifyFailure) -> CliError {
        CliError::Internal(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.code());
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Generate { kind, size, seed, out, pool_size, buckets, dominant_percent } => {
            if size < 1 {
                return Err(CliError::Precondition("size must be at least 1".into()));
            }
            let kind = match kind {
                KindArg::StarFree => StreamKind::StarFree,
                KindArg::StarRich => StreamKind::StarRich,
                KindArg::Mixed => StreamKind::Mixed,
                KindArg::Bucketed => StreamKind::Bucketed,
            };
            let mut profile = StreamProfile::new(kind, size, seed);
            profile.pool_size = pool_size;
            profile.buckets = buckets;
            profile.dominant_percent = dominant_percent;
            let elems = generate(&profile);
            write_jsonl(&out, &elems)?;
            Ok(())
        }
        Command::Split { input, reports, cert } => {
            let elems: Vec<GroupElement> = read_jsonl(&input)?;
            let mut splitter = SplitterState::new();
            for elem in &elems {
                splitter.feed(elem)?;
            }
            let (count0, count1) = splitter.counts();
            let summary = SplitStats { count0, count1, steered: splitter.steered() };
            let mut lines: Vec<serde_json::Value> = splitter
                .log()
                .iter()
                .map(serde_json::to_value)
                .collect::<Result<_, _>>()?;
            lines.push(serde_json::to_value(summary)?);
            match &reports {
                Some(path) => write_jsonl(path, &lines)?,
                None => {
                    for line in &lines {
                        println!("{line}");
                    }
                }
            }
            if let Some(path) = cert {
                let manifest = RunManifest::new("split").input(input.display().to_string());
                let payload = CertificatePayload::Split(FeedLogCert {
                    manifest: Some(manifest),
                    reports: splitter.log().to_vec(),
                    summary,
                });
                Certificate::seal(payload).write_to(path)?;
            }
            Ok(())
        }
        Command::CoherentSplit { input, cutoff, mode, schedule_length, out } => {
            let elems: Vec<GroupElement> = read_jsonl(&input)?;
            let mode = match mode {
                ModeArg::Auto => StarMode::Auto,
                ModeArg::Finite => StarMode::Finite,
                ModeArg::Infinite => StarMode::Infinite,
            };
            let opts = SplitOptions { cutoff, mode, schedule_len: schedule_length };
            let mut bank = OracleBank::new();
            let mut cert = coherent_split(&elems, opts, &mut bank)?;
            let mut manifest =
                RunManifest::new("coherent-split").input(input.display().to_string());
            manifest.mode = Some(format!("{mode:?}").to_lowercase());
            manifest.cutoff = Some(cutoff as u64);
            manifest.schedule_len = schedule_length.map(|n| n as u64);
            cert.manifest = Some(manifest);
            Certificate::seal(CertificatePayload::CoherentSplit(cert)).write_to(out)?;
            Ok(())
        }
        Command::Oracle { queries, id, out } => {
            let sets: Vec<PeriodicSet> = read_jsonl(&queries)?;
            let mut state = OracleState::fresh(UltrafilterId(id));
            for set in &sets {
                state.query(set);
            }
            match &out {
                Some(path) => write_jsonl(path, state.transcript())?,
                None => {
                    for entry in state.transcript() {
                        println!("{}", serde_json::to_string(entry)?);
                    }
                }
            }
            Ok(())
        }
        Command::Simulate { what } => match what {
            SimulateCommand::Selective { config, boxes, p, out } => {
                let cfg: SimConfig = serde_json::from_str(&std::fs::read_to_string(&config)?)?;
                let box_list: Vec<OpenBox> =
                    serde_json::from_str(&std::fs::read_to_string(&boxes)?)?;
                let mut sim = Sim::new(cfg)?;
                let mut cert = sim.witness_selective(UltrafilterId(p), &box_list)?;
                let manifest = RunManifest::new("simulate selective")
                    .input(config.display().to_string())
                    .input(boxes.display().to_string());
                cert.manifest = Some(manifest);
                Certificate::seal(CertificatePayload::Selective(cert)).write_to(out)?;
                Ok(())
            }
            SimulateCommand::Refute { config, family, out } => {
                let cfg: SimConfig = serde_json::from_str(&std::fs::read_to_string(&config)?)?;
                let lines: Vec<FamilyLine> = read_jsonl(&family)?;
                let fam: Vec<(SimPoint, GroupElement)> =
                    lines.into_iter().map(|l| (l.g, l.element)).collect();
                let mut sim = Sim::new(cfg)?;
                let mut cert = sim.witness_no_convergence(&fam)?;
                let manifest = RunManifest::new("simulate refute")
                    .input(config.display().to_string())
                    .input(family.display().to_string());
                cert.manifest = Some(manifest);
                Certificate::seal(CertificatePayload::Refutation(cert)).write_to(out)?;
                Ok(())
            }
        },
        Command::Verify { files } => {
            if files.is_empty() {
                return Err(CliError::Input("no certificate files given".into()));
            }
            for file in &files {
                let cert = Certificate::read_from(file)?;
                cert.verify().map_err(|e| {
                    CliError::Internal(format!("{}: {e}", file.display()))
                })?;
                println!("OK {} ({})", file.display(), cert.payload.kind());
            }
            Ok(())
        }
    }
}
