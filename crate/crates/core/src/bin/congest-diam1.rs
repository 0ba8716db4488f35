use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use congest_diam1::harness::suites::{growth_csv, round_growth};
use congest_diam1::harness::{
    csv_escape, run_experiment, run_suite, CorpusSpec, ExperimentConfig, HarnessError, InstanceSource, Protocol,
    DEFAULT_ORACLE_LIMIT,
};
use congest_diam1::instances::{generate, InstanceDescriptor};

#[derive(Parser)]
#[command(name = "congest-diam1", version, about = "Broadcast CONGEST protocols on diameter-1 digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance from a descriptor such as "F:k=3,q=5,sigma=101"
    Gen {
        descriptor: String,
        /// Replaces the seed of a random (R1) descriptor
        #[arg(long)]
        seed: Option<u64>,
        /// Write the instance JSON here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a protocol on instances and compare against the oracles
    Run {
        #[arg(long, short)]
        protocol: Protocol,
        /// Instance descriptor (repeatable)
        #[arg(long = "instance", short)]
        instances: Vec<String>,
        /// Graph file: JSON from `gen` or an edge list (repeatable)
        #[arg(long = "file", short)]
        files: Vec<PathBuf>,
        /// Random corpus, e.g. "sizes=2-128,count=1000,seed=7,p=0.33"
        #[arg(long)]
        corpus: Option<String>,
        /// Replaces the corpus seed
        #[arg(long)]
        seed: Option<u64>,
        /// BFS source (defaults to the instance's designated source)
        #[arg(long)]
        source: Option<usize>,
        #[arg(long)]
        budget_bits: Option<usize>,
        #[arg(long)]
        max_rounds: Option<usize>,
        /// Skip oracle comparison above this many vertices
        #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
        oracle_limit: usize,
        /// Include every vertex's output in the report
        #[arg(long)]
        outputs: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named property suite
    Verify {
        /// lemma1, lemma2-exhaustive, fseq, sandwich, dis2, families, injectivity, round-growth
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Checks,
    Harness(HarnessError),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        Failure::Harness(e)
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io { path: path.to_path_buf(), source }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), HarnessError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(io_err(path)),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{}", text.trim_end()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(io_err(Path::new("<stdout>"))(e)),
                _ => Ok(()),
            }
        }
    }
}

fn gen(descriptor: &str, seed: Option<u64>, out: Option<&Path>) -> Result<(), Failure> {
    let mut desc: InstanceDescriptor = descriptor.parse().map_err(HarnessError::from)?;
    if let (InstanceDescriptor::RandomDiam1 { seed: s, .. }, Some(new)) = (&mut desc, seed) {
        *s = new;
    }
    let inst = generate(&desc).map_err(HarnessError::from)?;
    let json = serde_json::to_string_pretty(&inst).expect("instances serialize");
    emit(&json, out)?;
    let summary = format!(
        "{desc}: n={} edges={} underlying_diameter={}",
        inst.graph.n(),
        inst.graph.edge_count(),
        inst.graph.underlying_diameter()
    );
    // keep stdout clean for the JSON when no file was given
    if out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { descriptor, seed, out } => gen(&descriptor, seed, out.as_deref()),
        Command::Run {
            protocol,
            instances,
            files,
            corpus,
            seed,
            source,
            budget_bits,
            max_rounds,
            oracle_limit,
            outputs,
            format,
            out,
        } => {
            let mut sources: Vec<InstanceSource> = instances.into_iter().map(InstanceSource::Descriptor).collect();
            sources.extend(files.into_iter().map(InstanceSource::File));
            if let Some(text) = corpus {
                let mut spec: CorpusSpec = text.parse()?;
                if let Some(seed) = seed {
                    spec.seed = seed;
                }
                sources.push(InstanceSource::Corpus(spec));
            }
            if sources.is_empty() {
                return Err(
                    HarnessError::Corpus("no instances given (use --instance, --file or --corpus)".into()).into()
                );
            }
            let mut cfg = ExperimentConfig::new(protocol, sources);
            cfg.budget_bits = budget_bits;
            cfg.max_rounds = max_rounds;
            cfg.source = source;
            cfg.include_outputs = outputs;
            cfg.oracle_limit = oracle_limit;
            let report = run_experiment(&cfg)?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize"),
                Format::Csv => report.to_csv(),
            };
            emit(&text, out.as_deref())?;
            eprintln!(
                "{protocol}: {} instances, {} failed, max rounds {}, max bits {}",
                report.total, report.failed, report.max_rounds_used, report.max_bits
            );
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
        Command::Verify { suite, seed, format, out } => {
            let (report, csv) = if suite == "round-growth" {
                let (report, rows) = round_growth(&[4, 8, 16, 32], seed)?;
                (report, growth_csv(&rows))
            } else {
                let report = run_suite(&suite, seed)?;
                let csv = format!(
                    "suite,passed,checked,failures\n{},{},{},{}\n",
                    csv_escape(&report.suite),
                    report.passed,
                    report.checked,
                    report.failures
                );
                (report, csv)
            };
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize"),
                Format::Csv => csv,
            };
            emit(&text, out.as_deref())?;
            eprintln!(
                "{}: {} ({} checks, {} failures)",
                report.suite,
                if report.passed { "PASS" } else { "FAIL" },
                report.checked,
                report.failures
            );
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Harness(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
