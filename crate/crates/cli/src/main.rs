//! `fortress`: validate, run, play and share Amorphous Fortress definitions.

mod commands;
mod error;
mod keys;
mod play;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::RunArgs;
use crate::keys::Scheme;
use crate::play::Mode;

#[derive(Parser)]
#[command(name = "fortress", version, about = "Amorphous Fortress toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a .fort file and list every error.
    Validate { path: PathBuf },
    /// Simulate headlessly until termination or the tick limit.
    Run {
        path: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Press random directions for player entities.
        #[arg(long)]
        auto_player: bool,
    },
    /// Drive player entities from a script or the keyboard.
    Play {
        path: PathBuf,
        /// Input script, lines of `T<tick> <id> <UP|DOWN|LEFT|RIGHT|SKIP>`.
        #[arg(
            long,
            conflicts_with = "interactive",
            required_unless_present = "interactive"
        )]
        inputs: Option<PathBuf>,
        /// Read keys (P pauses, R resets, Q quits). Without a terminal, one line of keys per tick.
        #[arg(long)]
        interactive: bool,
        #[arg(long, value_enum, default_value_t)]
        scheme: Scheme,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print action-node frequencies across a store.
    Stats {
        #[arg(long)]
        store: PathBuf,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "fortresses.jsonl")]
        store: PathBuf,
    },
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .init();

    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Validate { path } => commands::validate(path).map(|ok| if ok { 0 } else { 1 }),
        Cmd::Run {
            path,
            run,
            auto_player,
        } => commands::run(path, run, *auto_player).map(|_| 0),
        Cmd::Play {
            path,
            inputs,
            scheme,
            run,
            ..
        } => {
            let mode = match inputs {
                Some(script) => Mode::Script(script),
                None => Mode::Interactive(*scheme),
            };
            play::play(path, mode, run).map(|_| 0)
        }
        Cmd::Stats { store } => commands::stats(store).map(|_| 0),
        Cmd::Serve { port, store } => commands::serve(*port, store).map(|_| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
