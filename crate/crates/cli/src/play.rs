//! `fortress play`: scripted replay or keyboard control.

use std::collections::BTreeMap;
use std::io::{self, BufRead, IsTerminal, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use crossterm::event::{self, Event, KeyCode, KeyEventKind};
use crossterm::{cursor, terminal, ExecutableCommand};
use fortress_core::{render_map_marked, Fortress, InputScript, PlayerInput, Status};

use crate::commands::{load, read, run_fortress, start, status_line, write_log, RunArgs};
use crate::error::{CliError, Result};
use crate::keys::{map_key, parse_key_word, Command, Key, Scheme};

pub enum Mode<'a> {
    Script(&'a Path),
    Interactive(Scheme),
}

fn frame(f: &Fortress) -> String {
    format!(
        "T{}\n{}",
        f.tick,
        render_map_marked(f, |e| e.player_controlled)
    )
}

/// The same input for every player-controlled instance.
fn broadcast(f: &Fortress, input: PlayerInput) -> BTreeMap<u64, PlayerInput> {
    f.instances
        .iter()
        .filter(|e| e.player_controlled)
        .map(|e| (e.id, input))
        .collect()
}

pub fn play(path: &Path, mode: Mode<'_>, args: &RunArgs) -> Result<()> {
    let def = load(path)?;
    if !def.has_player() {
        eprintln!(
            "warning: {} has no player nodes; running it instead",
            path.display()
        );
        return run_fortress(&def, args, false);
    }
    match mode {
        Mode::Script(script) => play_script(&def, script, args),
        Mode::Interactive(scheme) => {
            if io::stdin().is_terminal() {
                let interval = args.interval().unwrap_or(Duration::from_millis(250));
                let mut keys = TerminalKeys::new(scheme, interval)
                    .map_err(|e| CliError::Env(e.to_string()))?;
                play_keys(&def, args, &mut keys)
            } else {
                play_keys(&def, args, &mut LineKeys::new(scheme, io::stdin().lock()))
            }
        }
    }
}

fn play_script(def: &Fortress, script_path: &Path, args: &RunArgs) -> Result<()> {
    let script = InputScript::parse(&read(script_path)?).map_err(|e| {
        CliError::Domain(format!(
            "{}:{}: {}",
            script_path.display(),
            e.line,
            e.message
        ))
    })?;
    let (mut f, seed) = start(def, args.seed)?;
    script.check_ids(&f).map_err(|e| {
        CliError::Domain(format!(
            "{}:{}: {}",
            script_path.display(),
            e.line,
            e.message
        ))
    })?;
    let mut source = script.into_source();
    println!("seed: {seed}");
    print!("{}", frame(&f));
    while f.status == Status::Running && f.tick < args.ticks {
        let inputs = fortress_core::InputSource::next_inputs(&mut source, &f);
        f.step(&inputs)
            .map_err(|e| CliError::Domain(e.to_string()))?;
        print!("{}", frame(&f));
        args.pace();
    }
    println!("{}", status_line(&f));
    println!("ticks: {}", f.tick);
    write_log(args.log.as_deref(), &f)
}

/// Keys gathered for one tick; `None` ends the session.
trait KeySource {
    fn next(&mut self, paused: bool) -> io::Result<Option<Vec<Command>>>;
    fn show(&mut self, text: &str) -> io::Result<()>;
}

fn play_keys(def: &Fortress, args: &RunArgs, keys: &mut dyn KeySource) -> Result<()> {
    let (mut f, seed) = start(def, args.seed)?;
    let io_err = |e: io::Error| CliError::Env(e.to_string());
    let mut paused = false;
    loop {
        let state = if paused { "paused" } else { "running" };
        keys.show(&format!("seed {seed}  {state}\n{}", frame(&f)))
            .map_err(io_err)?;
        if f.status != Status::Running || f.tick >= args.ticks {
            break;
        }
        let Some(commands) = keys.next(paused).map_err(io_err)? else {
            break;
        };
        let mut input = PlayerInput::Skip;
        let mut reset = false;
        for c in commands {
            match c {
                Command::Input(i) => input = i,
                Command::Pause => paused = !paused,
                Command::Reset => reset = true,
                Command::Quit => {
                    write_log(args.log.as_deref(), &f)?;
                    return Ok(());
                }
            }
        }
        if reset {
            // Same resolved seed, so the replay is identical.
            f = start(def, Some(seed))?.0;
            continue;
        }
        if !paused {
            let inputs = broadcast(&f, input);
            f.step(&inputs)
                .map_err(|e| CliError::Domain(e.to_string()))?;
        }
    }
    keys.show(&format!("{}\nticks: {}\n", status_line(&f), f.tick))
        .map_err(io_err)?;
    write_log(args.log.as_deref(), &f)
}

/// One line of whitespace-separated key words per tick, for pipes and tests.
struct LineKeys<R> {
    scheme: Scheme,
    input: R,
}

impl<R: BufRead> LineKeys<R> {
    fn new(scheme: Scheme, input: R) -> Self {
        LineKeys { scheme, input }
    }
}

impl<R: BufRead> KeySource for LineKeys<R> {
    fn next(&mut self, _paused: bool) -> io::Result<Option<Vec<Command>>> {
        let mut line = String::new();
        if self.input.read_line(&mut line)? == 0 {
            return Ok(None);
        }
        Ok(Some(
            line.split_whitespace()
                .filter_map(parse_key_word)
                .filter_map(|k| map_key(self.scheme, k))
                .collect(),
        ))
    }

    fn show(&mut self, text: &str) -> io::Result<()> {
        let mut out = io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()
    }
}

/// Raw-mode keyboard; collects keys for one tick interval.
struct TerminalKeys {
    scheme: Scheme,
    interval: Duration,
}

impl TerminalKeys {
    fn new(scheme: Scheme, interval: Duration) -> io::Result<Self> {
        terminal::enable_raw_mode()?;
        Ok(TerminalKeys { scheme, interval })
    }

    fn key(&self, ev: Event) -> Option<Command> {
        let Event::Key(k) = ev else { return None };
        if k.kind == KeyEventKind::Release {
            return None;
        }
        let key = match k.code {
            KeyCode::Up => Key::Up,
            KeyCode::Down => Key::Down,
            KeyCode::Left => Key::Left,
            KeyCode::Right => Key::Right,
            KeyCode::Esc => Key::Esc,
            KeyCode::Char(c) => Key::Char(c),
            _ => return None,
        };
        map_key(self.scheme, key)
    }
}

impl Drop for TerminalKeys {
    fn drop(&mut self) {
        let _ = terminal::disable_raw_mode();
    }
}

impl KeySource for TerminalKeys {
    fn next(&mut self, paused: bool) -> io::Result<Option<Vec<Command>>> {
        let mut out = Vec::new();
        if paused {
            while out.is_empty() {
                if let Some(c) = self.key(event::read()?) {
                    out.push(c);
                }
            }
            return Ok(Some(out));
        }
        let deadline = Instant::now() + self.interval;
        loop {
            let left = deadline.saturating_duration_since(Instant::now());
            if left.is_zero() || !event::poll(left)? {
                return Ok(Some(out));
            }
            if let Some(c) = self.key(event::read()?) {
                out.push(c);
            }
        }
    }

    fn show(&mut self, text: &str) -> io::Result<()> {
        let mut out = io::stdout().lock();
        out.execute(terminal::Clear(terminal::ClearType::All))?;
        out.execute(cursor::MoveTo(0, 0))?;
        out.write_all(text.replace('\n', "\r\n").as_bytes())?;
        out.flush()
    }
}
