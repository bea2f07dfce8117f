use std::fs;
use std::net::{Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use fortress_core::{
    parse, render_log, render_map, validate_text, AutoPlayer, Fortress, InputSource, NoInput,
    Status,
};
use fortress_store::{Store, StoreConfig};

use crate::error::{CliError, Result};

/// Flags shared by `run` and `play`.
#[derive(Debug, Clone, clap::Args)]
pub struct RunArgs {
    /// Override the fortress seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Stop after this many ticks if the fortress has not terminated.
    #[arg(long, default_value_t = 1000)]
    pub ticks: u64,
    /// Write the event log here.
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Ticks per second of wall-clock pacing; unpaced when absent.
    #[arg(long)]
    pub tps: Option<f64>,
}

impl RunArgs {
    pub fn pace(&self) {
        if let Some(d) = self.interval() {
            thread::sleep(d);
        }
    }

    pub fn interval(&self) -> Option<Duration> {
        self.tps
            .filter(|t| *t > 0.0)
            .map(|t| Duration::from_secs_f64(1.0 / t))
    }
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Parses `path`, printing diagnostics to stderr when it does not compile.
pub fn load(path: &Path) -> Result<Fortress> {
    let text = read(path)?;
    parse(&text).map_err(|errors| {
        for e in &errors {
            eprintln!("{}:{}: {} {}", path.display(), e.line, e.code, e.message);
        }
        CliError::Domain(format!("{} has {} error(s)", path.display(), errors.len()))
    })
}

/// A fresh run of `def`, seeded by `seed` or the definition's own seed spec.
pub fn start(def: &Fortress, seed: Option<u64>) -> Result<(Fortress, u64)> {
    let seed = seed.unwrap_or_else(|| def.seed_spec.resolve());
    let f = def
        .init(Some(seed))
        .map_err(|e| CliError::Domain(format!("cannot start: {e}")))?;
    Ok((f, seed))
}

pub fn write_log(path: Option<&Path>, f: &Fortress) -> Result<()> {
    if let Some(path) = path {
        fs::write(path, render_log(&f.log)).map_err(|e| CliError::io(path, e))?;
    }
    Ok(())
}

pub fn status_line(f: &Fortress) -> String {
    match f.status {
        Status::Terminated(reason) => format!("{reason} at tick {}", f.tick),
        Status::Running => format!("Running at tick {} (tick limit)", f.tick),
    }
}

/// Returns true when there were no errors.
pub fn validate(path: &Path) -> Result<bool> {
    let text = read(path)?;
    let errors = validate_text(&text);
    for e in &errors {
        println!("{}:{}: {} {}", path.display(), e.line, e.code, e.message);
    }
    Ok(errors.is_empty())
}

pub fn run(path: &Path, args: &RunArgs, auto_player: bool) -> Result<()> {
    let def = load(path)?;
    run_fortress(&def, args, auto_player)
}

pub fn run_fortress(def: &Fortress, args: &RunArgs, auto_player: bool) -> Result<()> {
    let (mut f, seed) = start(def, args.seed)?;
    // Offset so the auto-player's draws are not the engine's draws.
    let mut input: Box<dyn InputSource> = if auto_player {
        Box::new(AutoPlayer::new(seed ^ 0x5EED_F00D))
    } else {
        Box::new(NoInput)
    };
    println!("seed: {seed}");
    if args.tps.is_none() {
        let (done, _) = f.run(args.ticks, input.as_mut());
        f = done;
    } else {
        while f.status == Status::Running && f.tick < args.ticks {
            let inputs = input.next_inputs(&f);
            f.step(&inputs)
                .map_err(|e| CliError::Domain(e.to_string()))?;
            args.pace();
        }
    }
    print!("{}", render_map(&f));
    println!("{}", status_line(&f));
    println!("ticks: {}", f.tick);
    write_log(args.log.as_deref(), &f)
}

pub fn stats(store_path: &Path) -> Result<()> {
    if !store_path.is_file() {
        return Err(CliError::Env(format!(
            "{}: no such store",
            store_path.display()
        )));
    }
    let store = Store::open(store_path, StoreConfig::default())?;
    let stats = store.node_stats();
    println!("{:<18} {:>6}", "node", "count");
    for (kind, n) in stats.descending().into_iter().filter(|&(_, n)| n > 0) {
        println!("{:<18} {:>6}", kind.name(), n);
    }
    println!("{:<18} {:>6}", "total", stats.total());
    Ok(())
}

pub fn serve(port: u16, store_path: &Path) -> Result<()> {
    let store = Store::open(store_path, StoreConfig::default())?;
    let addr = SocketAddr::from((Ipv4Addr::UNSPECIFIED, port));
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Env(e.to_string()))?;
    runtime
        .block_on(fortress_store::serve(addr, Arc::new(store)))
        .map_err(|e| CliError::Env(format!("serving on {addr}: {e}")))
}
