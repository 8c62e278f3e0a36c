use std::io;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use critiq::{Format, ServeOptions, EXIT_ERROR};

/// Critique canvas designs for hierarchy, alignment, whitespace and unity.
#[derive(Parser)]
#[command(name = "critiq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report issues; exits 1 when any are found.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        principle: Option<String>,
        /// Also print the awareness or solution explanation tables.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Write the design as SVG, optionally with one annotation layer.
    Render {
        file: PathBuf,
        #[arg(long)]
        principle: Option<String>,
        /// awareness (default) or solution.
        #[arg(long)]
        mode: Option<String>,
        /// Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score detection against a labeled corpus.
    Evaluate {
        corpus_dir: PathBuf,
        labels_file: PathBuf,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// List property changes between two designs; exits 1 when they differ.
    Diff { file_a: PathBuf, file_b: PathBuf },
    /// Run the live critique service until interrupted.
    Serve {
        #[arg(long, env = "CRITIQ_PORT", default_value_t = critiq_service::DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value = "critiq-logs")]
        log_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    let mut stdout = io::stdout().lock();
    let outcome = match cli.command {
        Command::Analyze {
            file,
            principle,
            mode,
            format,
        } => critiq::analyze(
            &file,
            principle.as_deref(),
            mode.as_deref(),
            format,
            &mut stdout,
        ),
        Command::Render {
            file,
            principle,
            mode,
            out,
        } => critiq::render_to(&file, principle.as_deref(), mode.as_deref(), out.as_deref()),
        Command::Evaluate {
            corpus_dir,
            labels_file,
            format,
        } => critiq::evaluate(&corpus_dir, &labels_file, format, &mut stdout),
        Command::Diff { file_a, file_b } => critiq::diff(&file_a, &file_b, &mut stdout),
        Command::Serve {
            port,
            host,
            log_dir,
        } => {
            let shutdown = Arc::new(AtomicBool::new(false));
            let flag = Arc::clone(&shutdown);
            if let Err(e) = ctrlc::set_handler(move || flag.store(true, Ordering::SeqCst)) {
                log::warn!("no interrupt handler: {e}");
            }
            critiq::serve(
                &ServeOptions {
                    host,
                    port,
                    log_dir,
                },
                shutdown,
            )
        }
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
