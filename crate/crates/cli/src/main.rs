//! `fan`: enumerate restricted Gröbner fans and test them for regularity.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use grobfan::io::{self, ClassifyDocument, FanDocument, IdealFile, RegularityDocument};
use grobfan::poly::Tiebreak;
use grobfan::{certificate, fan, regularity};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: grobfan::Error },
    #[error(transparent)]
    Compute(#[from] grobfan::Error),
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "fan", version, about = "Restricted Gröbner fans and their regularity")]
struct Cli {
    /// Worker threads for enumeration (defaults to all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the restricted Gröbner fan of an ideal file.
    Enumerate(FanArgs),
    /// Test a fan document for regularity.
    Regularity {
        fan: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Enumerate the slice of the extended fan through the homogenized ideal.
    Extended(FanArgs),
    /// Replay the embedded non-regularity certificate.
    VerifyPaperCert {
        #[arg(long, value_enum, default_value_t = Report::Text)]
        report: Report,
    },
    /// Show the marked reduced Gröbner basis and cone selected by a weight.
    Classify {
        file: PathBuf,
        #[arg(long, value_name = "W1,W2,...", allow_hyphen_values = true)]
        weight: String,
        #[arg(long)]
        tiebreak: Option<String>,
    },
}

#[derive(clap::Args)]
struct FanArgs {
    file: PathBuf,
    /// Order used to break ties between weights: `lex` or `grevlex`.
    #[arg(long)]
    tiebreak: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Record the wall-clock time in the document metadata.
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Report {
    Json,
    Text,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn write_or_print(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_ideal(path: &Path, tiebreak: Option<&str>) -> Result<IdealFile> {
    let mut file = io::parse_ideal_file(&read(path)?).map_err(|source| CliError::Input { path: path.into(), source })?;
    if let Some(name) = tiebreak {
        file.tiebreak = Tiebreak::parse(name).ok_or_else(|| CliError::Usage(format!("unknown tiebreak {name:?}")))?;
    }
    Ok(file)
}

fn run_fan(args: &FanArgs, extended: bool) -> Result<ExitCode> {
    let file = load_ideal(&args.file, args.tiebreak.as_deref())?;
    let start = Instant::now();
    let (kind, graph) = if extended {
        ("extended", fan::extended_fan_slice(&file.ideal, &file.tiebreak_order())?)
    } else {
        ("restricted", fan::enumerate_restricted_fan(&file.ideal, &file.tiebreak_order())?)
    };
    let mut doc = FanDocument::new(&file, kind, &graph)?;
    if args.timings {
        doc.metadata.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    write_or_print(args.output.as_deref(), &doc.to_json())?;
    if args.output.is_some() {
        println!("{} cones, {} edges", graph.cones.len(), graph.edges.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn run_regularity(path: &Path, output: Option<&Path>) -> Result<ExitCode> {
    let doc = FanDocument::from_json(&read(path)?).map_err(|source| CliError::Input { path: path.into(), source })?;
    let graph = doc.edge_graph()?;
    let outcome = regularity::check_graph(&graph)?;
    write_or_print(output, &RegularityDocument::new(&graph, &outcome).to_json())?;
    eprintln!("{}", outcome.verdict());
    Ok(if outcome.is_embedding() { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn run_certificate(report: Report) -> Result<ExitCode> {
    let result = certificate::verify_certificate(&certificate::ideal(), &certificate::CertificateData::embedded())?;
    match report {
        Report::Text => print!("{}", result.to_text()),
        Report::Json => println!("{}", serde_json::to_string_pretty(&result).expect("serializable")),
    }
    if result.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("certificate checks failed");
        Ok(ExitCode::from(3))
    }
}

fn run_classify(path: &Path, weight: &str, tiebreak: Option<&str>) -> Result<ExitCode> {
    let file = load_ideal(path, tiebreak)?;
    let w = io::parse_weight(weight).map_err(|e| CliError::Usage(format!("--weight: {e}")))?;
    if w.len() != file.ring.nvars() {
        return Err(CliError::Usage(format!("--weight has {} entries, ring has {} variables", w.len(), file.ring.nvars())));
    }
    let (key, cone) = fan::cone_at(&file.ideal, &file.tiebreak_order(), &w)?;
    print!("{}", ClassifyDocument::new(&file, &w, &key, &cone)?.to_json());
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    match &cli.command {
        Command::Enumerate(args) => run_fan(args, false),
        Command::Extended(args) => run_fan(args, true),
        Command::Regularity { fan, output } => run_regularity(fan, output.as_deref()),
        Command::VerifyPaperCert { report } => run_certificate(*report),
        Command::Classify { file, weight, tiebreak } => run_classify(file, weight, tiebreak.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
