use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rights_service::config::ServiceConfig;
use rights_service::{cli, serve};

#[derive(Parser)]
#[command(name = "rights", version, about = "GDPR rights-exercise engine")]
struct Args {
    /// Vocabulary Turtle file (defaults to the built-in seed).
    #[arg(long, global = true)]
    vocab: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP service.
    Serve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Shape-check a notice, policy or record document.
    Validate { file: PathBuf },
    /// Evaluate a request policy against an event log.
    Evaluate {
        #[arg(long)]
        policy: PathBuf,
        #[arg(long)]
        log: PathBuf,
        /// RFC 3339 evaluation time.
        #[arg(long)]
        now: String,
    },
    /// List the rights applicable under a legal basis.
    Rights {
        #[arg(long = "legal-basis")]
        legal_basis: String,
    },
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_env("RIGHTS_LOG").unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .init();
    let args = Args::parse();
    let result = match args.command {
        Command::Serve { config } => run_server(&config, args.vocab),
        Command::Validate { file } => cli::load_vocab(args.vocab.as_deref()).and_then(|ds| cli::validate(&file, &ds)).map(print),
        Command::Evaluate { policy, log, now } => cli::evaluate(&policy, &log, &now).map(print),
        Command::Rights { legal_basis } => {
            cli::load_vocab(args.vocab.as_deref()).and_then(|ds| cli::rights(&legal_basis, &ds)).map(print)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn print(text: String) {
    print!("{text}");
}

fn run_server(path: &std::path::Path, vocab: Option<PathBuf>) -> anyhow::Result<()> {
    let mut config = ServiceConfig::load(path)?;
    if vocab.is_some() {
        config.vocab_path = vocab;
    }
    tokio::runtime::Builder::new_multi_thread().enable_all().build()?.block_on(serve(config))
}
