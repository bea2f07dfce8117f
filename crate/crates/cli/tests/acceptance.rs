//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fail. Run with `cargo test -p fortress-cli --test acceptance`.

use std::collections::{BTreeMap, BTreeSet};
use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;
use std::thread;
use std::time::{Duration, Instant};

use fortress_core::generate::{random_fortress, GenOptions};
use fortress_core::input::ScriptEntry;
use fortress_core::{
    manhattan, parse, render_log, serialize, validate_text, Action, ActionKind, Condition,
    ConditionKind, EntityClass, ErrorCode, Fortress, InputScript, NoInput, PlayerInput, Pos,
    RunOutcome, SeedSpec, SplitMix64, Status, TerminationReason, Verb,
};
use fortress_store::{backpack_place, NewFortress, Store, StoreConfig, StoreError};
use rand::rngs::StdRng;
use rand::SeedableRng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn repo(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}

fn load(rel: &str) -> Fortress {
    let text = std::fs::read_to_string(repo(rel)).unwrap();
    parse(&text).unwrap_or_else(|e| panic!("{rel}: {e:?}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(started: Instant, limit: Duration) -> Result<(), String> {
    let took = started.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
}

// Link wanders, the Korok turns into a seed next to him, he takes the seed.
fn scenario_a() -> Check {
    let started = Instant::now();
    let def = load("fortresses/zelda_a.fort");
    for seed in 0..50u64 {
        let mut f = def.init(Some(seed)).map_err(|e| e.to_string())?;
        while f.status == Status::Running && f.tick < 50_000 {
            let r = f.step(&BTreeMap::new()).map_err(|e| e.to_string())?;
            if r.events.iter().any(|e| e.verb == Verb::Took) {
                break;
            }
        }
        let log = &f.log;
        let transformed = log
            .iter()
            .position(|e| e.verb == Verb::Transformed && e.detail == "k->$")
            .ok_or(format!("seed {seed}: no k->$ transform"))?;
        let took = log
            .iter()
            .position(|e| e.verb == Verb::Took && e.detail.ends_with(":$"))
            .ok_or(format!("seed {seed}: Link never took $"))?;
        ensure(transformed < took, || {
            format!("seed {seed}: took $ before transform")
        })?;
        let victim = log[took]
            .detail
            .trim_start_matches('#')
            .split(':')
            .next()
            .unwrap()
            .to_string();
        let removed = log[took..]
            .iter()
            .find(|e| e.verb == Verb::Removed && e.actor_id.to_string() == victim)
            .ok_or(format!("seed {seed}: no removal after took"))?;
        ensure(removed.pos == log[took].pos, || {
            format!(
                "seed {seed}: $ removed at {} but Link at {}",
                removed.pos, log[took].pos
            )
        })?;
    }
    within_time(started, Duration::from_secs(5))?;
    Ok(format!("50/50 seeds, {:.2?}", started.elapsed()))
}

// The Bokoblin chases once Link is within 5; Link dies on contact.
fn scenario_b() -> Check {
    let started = Instant::now();
    let def = load("fortresses/zelda_b.fort");
    let mut deaths = 0;
    let mut chase_moves = 0;
    for seed in 0..50u64 {
        let mut f = def.init(Some(seed)).map_err(|e| e.to_string())?;
        let find = |f: &Fortress, c: char| f.instances.iter().find(|e| e.ch == c).map(|e| e.pos);
        let mut chasing = false;
        while f.status == Status::Running && f.tick < 2000 {
            let b_before = find(&f, 'B').ok_or("no Bokoblin")?;
            let link_alive_before = find(&f, 'L').is_some();
            let r = f.step(&BTreeMap::new()).map_err(|e| e.to_string())?;
            let b_after = find(&f, 'B').ok_or("no Bokoblin")?;
            // Link acts before the Bokoblin, so his end-of-tick cell is what the Bokoblin saw.
            let link = r
                .events
                .iter()
                .rev()
                .find(|e| e.actor_char == 'L')
                .map(|e| e.pos)
                .or(find(&f, 'L'));
            let b_node = f.instances.iter().find(|e| e.ch == 'B').unwrap().node;
            if let (true, Some(l)) = (link_alive_before, link) {
                let d0 = manhattan(b_before, l);
                if d0 <= 5 && d0 > 0 {
                    ensure(b_node == 1, || {
                        format!("seed {seed} T{}: within 5 but not chasing", f.tick)
                    })?;
                    ensure(manhattan(b_after, l) < d0, || {
                        format!(
                            "seed {seed} T{}: chase {b_before}->{b_after} vs Link {l}",
                            f.tick
                        )
                    })?;
                    chase_moves += 1;
                }
            }
            if b_node == 1 {
                chasing = true;
            } else {
                ensure(!chasing, || format!("seed {seed}: left chase"))?;
            }
            for e in r
                .events
                .iter()
                .filter(|e| e.actor_char == 'L' && e.verb == Verb::Removed)
            {
                ensure(e.pos == b_after || e.pos == b_before, || {
                    format!(
                        "seed {seed} T{}: Link removed at {} away from Bokoblin",
                        f.tick, e.pos
                    )
                })?;
                let b_at_death = f
                    .log
                    .iter()
                    .rev()
                    .find(|x| x.actor_char == 'B' && x.tick < e.tick)
                    .map(|x| x.pos);
                ensure(b_at_death.is_none_or(|p| p == e.pos), || {
                    format!(
                        "seed {seed}: Link removed at {} not under the Bokoblin",
                        e.pos
                    )
                })?;
                deaths += 1;
            }
        }
    }
    within_time(started, Duration::from_secs(5))?;
    ensure(deaths > 0, || "Link never died in 50 seeds".into())?;
    Ok(format!(
        "50 seeds, {chase_moves} chase moves all closing, {deaths} contact deaths, {:.2?}",
        started.elapsed()
    ))
}

fn run_until_done(f: Fortress, limit: u64) -> (Fortress, RunOutcome) {
    f.run(limit, &mut NoInput)
}

fn termination() -> Check {
    let mut notes = Vec::new();

    let started = Instant::now();
    let (f, out) = run_until_done(load("fortresses/idle.fort").init(None).unwrap(), 10_000);
    ensure(
        out == RunOutcome::Terminated(TerminationReason::Inactivity) && f.tick == 100,
        || format!("idle: {out:?} at {}", f.tick),
    )?;
    within_time(started, Duration::from_secs(1))?;
    notes.push("idle=Inactivity@100".to_string());

    let started = Instant::now();
    let mut die = Fortress::new("die", SeedSpec::Fixed(1));
    die.add_class(EntityClass::new('x', "x").with_node(Action::Die));
    die.place('x', Pos::new(4, 4));
    die.place('x', Pos::new(9, 2));
    let (f, out) = run_until_done(die.init(None).unwrap(), 10_000);
    ensure(
        out == RunOutcome::Terminated(TerminationReason::Extinction) && f.tick == 1,
        || format!("die: {out:?} at {}", f.tick),
    )?;
    within_time(started, Duration::from_secs(1))?;
    notes.push("die=Extinction@1".to_string());

    let started = Instant::now();
    let mut f = load("fortresses/cloner.fort").init(None).unwrap();
    let p0 = f.population() as u64;
    while f.status == Status::Running {
        f.step(&BTreeMap::new()).unwrap();
        let expected = p0 << f.tick;
        ensure(f.population() as u64 == expected, || {
            format!(
                "cloner: population {} at tick {}, want {expected}",
                f.population(),
                f.tick
            )
        })?;
    }
    // First t with p0 * 2^t > 168.
    let want_tick = (0..).find(|t| p0 << t > 168).unwrap();
    ensure(
        f.status == Status::Terminated(TerminationReason::Overpopulation) && f.tick == want_tick,
        || {
            format!(
                "cloner: {:?} at {}, want Overpopulation at {want_tick}",
                f.status, f.tick
            )
        },
    )?;
    within_time(started, Duration::from_secs(1))?;
    notes.push(format!("cloner=Overpopulation@{want_tick} with 2^t trace"));
    Ok(notes.join(", "))
}

fn random_script(f: &Fortress, rng: &mut SplitMix64, ticks: u64) -> InputScript {
    let players: Vec<u64> = f
        .instances
        .iter()
        .filter(|e| e.player_controlled)
        .map(|e| e.id)
        .collect();
    let mut entries = Vec::new();
    if !players.is_empty() {
        for tick in 1..=ticks {
            for &id in &players {
                if rng.below(3) > 0 {
                    entries.push(ScriptEntry {
                        tick,
                        id,
                        input: PlayerInput::ALL[rng.below(5)],
                    });
                }
            }
        }
    }
    InputScript::new(entries)
}

fn determinism() -> Check {
    let started = Instant::now();
    let mut rng = SplitMix64::new(0xD00D);
    let mut with_players = 0;
    for i in 0..100 {
        let def = random_fortress(&mut rng, GenOptions::default());
        let seed = rng.next_u64();
        let first = def.init(Some(seed)).map_err(|e| format!("case {i}: {e}"))?;
        let script = random_script(&first, &mut rng, 300);
        if !script.entries.is_empty() {
            with_players += 1;
        }
        let mut logs = Vec::new();
        for _ in 0..2 {
            let f = def.init(Some(seed)).unwrap();
            let (done, _) = f.run(300, &mut script.clone().into_source());
            logs.push(render_log(&done.log));
        }
        ensure(logs[0] == logs[1], || format!("case {i}: logs differ"))?;
    }
    within_time(started, Duration::from_secs(30))?;
    Ok(format!(
        "100 fortresses ({with_players} scripted), identical logs, {:.2?}",
        started.elapsed()
    ))
}

fn satisfied(cond: Condition, actor: Pos, dwell: u32, others: &[(char, Pos)]) -> bool {
    let any = |c: char, ok: &dyn Fn(u32) -> bool| {
        others
            .iter()
            .any(|&(ch, p)| ch == c && ok(manhattan(actor, p)))
    };
    match cond {
        Condition::None => true,
        Condition::Step { n } => dwell >= n,
        Condition::Within { target, n } => any(target, &|d| d <= n),
        Condition::NextTo { target } => any(target, &|d| d == 1),
        Condition::Touch { target } => any(target, &|d| d == 0),
    }
}

fn edge_priority() -> Check {
    let mut rng = SplitMix64::new(0xED6E);
    let actions: Vec<Action> = [
        ActionKind::Take,
        ActionKind::Chase,
        ActionKind::Push,
        ActionKind::Add,
    ]
    .iter()
    .flat_map(|&k| ['A', 'B', 'Z'].map(move |c| Action::from_parts(k, Some(c)).unwrap()))
    .collect();
    let mut multi = 0;
    for case in 0..1000 {
        let mut class = EntityClass::new('A', "actor").with_node(Action::Idle);
        let extra = 1 + rng.below(6);
        let mut pool = actions.clone();
        for _ in 0..extra {
            class = class.with_node(pool.remove(rng.below(pool.len())));
        }
        let mut targets: Vec<usize> = (0..=extra).collect();
        let edge_count = 1 + rng.below(targets.len());
        for _ in 0..edge_count {
            let to = targets.remove(rng.below(targets.len()));
            let target = ['A', 'B', 'Z'][rng.below(3)];
            let n = 1 + rng.below(4) as u32;
            let cond = match ConditionKind::ALL[rng.below(5)] {
                ConditionKind::None => Condition::None,
                ConditionKind::Step => Condition::Step { n },
                ConditionKind::Within => Condition::Within { target, n },
                ConditionKind::NextTo => Condition::NextTo { target },
                ConditionKind::Touch => Condition::Touch { target },
            };
            class = class.with_edge(0, to, cond);
        }

        let mut f = Fortress::new("priority", SeedSpec::Fixed(case));
        f.add_class(class.clone());
        f.add_class(EntityClass::new('B', "b").with_node(Action::Idle));
        f.add_class(EntityClass::new('Z', "z").with_node(Action::Idle));
        let actor = Pos::new(1 + rng.below(3) as i32, 1 + rng.below(2) as i32);
        f.place('A', actor);
        let mut others = Vec::new();
        for _ in 0..rng.below(4) {
            let p = Pos::new(actor.x + rng.below(4) as i32, actor.y + rng.below(3) as i32);
            // Later in reading order than the actor so it moves first.
            if (p.y, p.x) > (actor.y, actor.x) || p == actor {
                f.place('B', p);
                others.push(('B', p));
            }
        }
        let mut f = f.init(None).map_err(|e| format!("case {case}: {e}"))?;
        let actor_id = f
            .instances
            .iter()
            .find(|e| e.ch == 'A' && e.pos == actor)
            .unwrap()
            .id;
        ensure(actor_id == 0, || format!("case {case}: actor is not first"))?;
        let dwell = rng.below(5) as u32;
        f.instances[0].dwell = dwell as u64;

        // Dwell counts the current tick when edges are evaluated.
        let sat: Vec<_> = class
            .edges
            .iter()
            .filter(|e| satisfied(e.condition, actor, dwell + 1, &others))
            .collect();
        if sat.len() > 1 {
            multi += 1;
        }
        let want = sat
            .iter()
            .max_by(|a, b| {
                a.condition
                    .kind()
                    .cmp(&b.condition.kind())
                    .then(b.to.cmp(&a.to))
            })
            .map(|e| format!("0->{}", e.to));
        let r = f.step(&BTreeMap::new()).unwrap();
        let got = r
            .events
            .iter()
            .find(|e| e.actor_id == 0 && e.verb == Verb::Transitioned)
            .map(|e| e.detail.clone());
        ensure(got == want, || {
            format!(
                "case {case}: engine {got:?}, oracle {want:?}, edges {:?}",
                class.edges
            )
        })?;
    }
    Ok(format!(
        "1000 configurations, {multi} with several satisfied edges"
    ))
}

fn compiler() -> Check {
    let dir = repo("crates/core/tests/golden");
    // (file, expected diagnostics). A 169-glyph map also has the wrong shape.
    let mut catalog: Vec<(ErrorCode, Vec<(ErrorCode, usize)>)> =
        ErrorCode::ALL.iter().map(|&c| (c, Vec::new())).collect();
    let lines = [6, 7, 6, 6, 6, 8, 13, 13, 13, 7, 6, 10, 3, 9, 18];
    for (i, (code, want)) in catalog.iter_mut().enumerate() {
        want.push((*code, lines[i]));
        if *code == ErrorCode::TooManyInitialEntities {
            want.extend((12..=17).map(|l| (ErrorCode::MapDimensionMismatch, l)));
        }
        want.sort();
    }
    for (code, want) in catalog {
        let text = std::fs::read_to_string(dir.join(format!("{}.fort", code.code())))
            .map_err(|e| e.to_string())?;
        let mut got: Vec<(ErrorCode, usize)> = validate_text(&text)
            .into_iter()
            .map(|e| (e.code, e.line))
            .collect();
        got.sort();
        ensure(got == want, || {
            format!("{code}: want {want:?}, got {got:?}")
        })?;
    }

    let started = Instant::now();
    let cases: u64 = 1_000_000;
    let workers = thread::available_parallelism().map_or(4, |n| n.get()) as u64;
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let crashes: u64 = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    let mut rng = SplitMix64::new(0xF022 + w);
                    let pool: Vec<Vec<u8>> = (0..32)
                        .map(|_| {
                            serialize(&random_fortress(&mut rng, GenOptions::default()))
                                .into_bytes()
                        })
                        .collect();
                    let mut crashes = 0;
                    for _ in (w..cases).step_by(workers as usize) {
                        let bytes = fuzz_case(&mut rng, &pool);
                        let text = String::from_utf8_lossy(&bytes);
                        let ok = panic::catch_unwind(|| {
                            let errors = validate_text(&text);
                            let lines = text.lines().count().max(1);
                            errors.iter().all(|e| e.line >= 1 && e.line <= lines)
                        });
                        if !matches!(ok, Ok(true)) {
                            crashes += 1;
                        }
                    }
                    crashes
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or(u64::MAX))
            .sum()
    });
    panic::set_hook(hook);
    ensure(crashes == 0, || {
        format!("{crashes} fuzz cases crashed or reported bad lines")
    })?;
    Ok(format!(
        "15 golden files exact, {cases} fuzz cases clean, {:.2?}",
        started.elapsed()
    ))
}

fn fuzz_case(rng: &mut SplitMix64, pool: &[Vec<u8>]) -> Vec<u8> {
    const ALPHABET: &[u8] =
        b" \n\t#.-0123456789aLk$Z\"\\ENDMAPNODEEDGEFORTRESSSEEDENTITYwithinnextTo";
    match rng.below(3) {
        0 => (0..rng.below(300)).map(|_| rng.below(256) as u8).collect(),
        1 => (0..rng.below(300))
            .map(|_| ALPHABET[rng.below(ALPHABET.len())])
            .collect(),
        _ => {
            let mut bytes = pool[rng.below(pool.len())].clone();
            for _ in 0..1 + rng.below(8) {
                let i = rng.below(bytes.len().max(1));
                match rng.below(4) {
                    0 if !bytes.is_empty() => {
                        bytes.remove(i);
                    }
                    1 => bytes.insert(i.min(bytes.len()), ALPHABET[rng.below(ALPHABET.len())]),
                    2 if !bytes.is_empty() => {
                        let j = rng.below(bytes.len());
                        bytes.swap(i, j);
                    }
                    _ if !bytes.is_empty() => bytes[i] = rng.below(256) as u8,
                    _ => {}
                }
            }
            bytes
        }
    }
}

fn round_trip() -> Check {
    let mut rng = SplitMix64::new(0x0F0F);
    for i in 0..500 {
        let f = random_fortress(&mut rng, GenOptions::default());
        let back = parse(&serialize(&f)).map_err(|e| format!("case {i}: {e:?}"))?;
        ensure(back == f, || format!("case {i}: parse(serialize(f)) != f"))?;
    }
    Ok("500 fortresses".into())
}

fn backpack_distribution() -> Check {
    let entity = EntityClass::new('A', "Ant").with_node(Action::Take('$'));
    let chars: BTreeSet<char> = ['&', 'M', '+'].into();
    let mut rng = StdRng::seed_from_u64(0xBAC4);
    let draws = 10_000;
    let mut counts: BTreeMap<char, u32> = BTreeMap::new();
    for _ in 0..draws {
        let r = backpack_place(&entity, &chars, &mut rng);
        let t = r.class.nodes[0].action.target().ok_or("target lost")?;
        *counts.entry(t).or_default() += 1;
    }
    let legal: BTreeSet<char> = ['&', 'M', '+', 'A'].into();
    ensure(
        counts.keys().copied().collect::<BTreeSet<_>>() == legal,
        || format!("outcomes {counts:?}"),
    )?;
    let mut chi2 = 0.0;
    for (&c, &n) in &counts {
        let p = n as f64 / draws as f64;
        ensure((p - 0.25).abs() <= 0.02, || {
            format!("take {c} frequency {p:.4}")
        })?;
        chi2 += (n as f64 - 2500.0).powi(2) / 2500.0;
    }
    // 3 degrees of freedom, p = 0.001.
    ensure(chi2 < 16.27, || format!("chi-square {chi2:.2}"))?;
    let freq: Vec<String> = counts
        .iter()
        .map(|(c, n)| format!("{c}:{:.3}", *n as f64 / draws as f64))
        .collect();
    Ok(format!("{} (chi2 {chi2:.2})", freq.join(" ")))
}

fn config() -> StoreConfig {
    StoreConfig {
        hash_rounds: 1000,
        ..Default::default()
    }
}

fn service() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("store.jsonl");
    let text = std::fs::read_to_string(repo("fortresses/zelda_b.fort")).unwrap();
    let guard = text.replace("FORTRESS \"Zelda B: Bokoblin\"", "FORTRESS \"Guard Dog\"");
    ensure(guard != text, || "could not rename sample".into())?;

    let before = {
        let s = Store::open(&path, config()).map_err(|e| e.to_string())?;
        let a = s
            .submit(NewFortress::new(text.clone()), None)
            .map_err(|e| e.to_string())?;
        ensure(s.get(a).unwrap().author == "dork", || {
            "anonymous author is not dork".into()
        })?;
        let token = s.register("link", "pw", None).map_err(|e| e.to_string())?;
        let b = s
            .submit(NewFortress::new(guard.clone()).remix_of(a), Some(&token))
            .map_err(|e| e.to_string())?;
        let c = s
            .submit(NewFortress::new(text.clone()).remix_of(b), None)
            .map_err(|e| e.to_string())?;
        let recent: Vec<u64> = s.recent(1).iter().map(|r| r.id).collect();
        ensure(recent == vec![c], || format!("recent(1) = {recent:?}"))?;
        let hits: Vec<u64> = s
            .search(None, Some("guard"))
            .unwrap()
            .iter()
            .map(|r| r.id)
            .collect();
        ensure(hits == vec![b], || format!("search guard = {hits:?}"))?;
        let hits: Vec<u64> = s
            .search(Some("dork"), None)
            .unwrap()
            .iter()
            .map(|r| r.id)
            .collect();
        ensure(hits == vec![c, a], || format!("search dork = {hits:?}"))?;
        ensure(s.lineage(c).unwrap() == vec![a, b, c], || "lineage".into())?;
        for n in 1..=174 {
            ensure(s.record_play(b).unwrap() == n, || "play count".into())?;
        }
        for n in 1..=10 {
            ensure(
                s.backpack_add(&token, a, 'B').map(|bp| bp.len()).ok() == Some(n),
                || "backpack add".into(),
            )?;
        }
        ensure(
            matches!(
                s.backpack_add(&token, a, 'B'),
                Err(StoreError::BackpackFull(10))
            ),
            || "11th backpack add accepted".into(),
        )?;
        (s.all(), s.user("link").unwrap(), s.node_stats())
    };

    let s = Store::open(&path, config()).map_err(|e| e.to_string())?;
    ensure(s.all() == before.0, || {
        "records changed across restart".into()
    })?;
    ensure(s.user("link").as_ref() == Some(&before.1), || {
        "account changed across restart".into()
    })?;
    ensure(s.node_stats() == before.2, || {
        "stats changed across restart".into()
    })?;
    ensure(s.get(2).unwrap().play_count == 174, || {
        "play count lost".into()
    })?;

    for _ in 0..127 {
        s.submit(NewFortress::new(text.clone()), None)
            .map_err(|e| e.to_string())?;
    }
    let recent = s.recent(1000);
    ensure(
        recent.len() == 120 && recent[0].id == 130 && recent[119].id == 11,
        || format!("recent returned {} records", recent.len()),
    )?;
    Ok("flow, restart, recent cap 120, backpack cap 10, anonymous dork".into())
}

fn node_stats() -> Check {
    let s = Store::ephemeral(config());
    let mut rng = SplitMix64::new(0x57A7);
    for _ in 0..50 {
        let text = serialize(&random_fortress(&mut rng, GenOptions::default()));
        s.submit(NewFortress::new(text), None)
            .map_err(|e| e.to_string())?;
    }
    // Recount from the stored text alone.
    let mut recount: BTreeMap<String, u64> = BTreeMap::new();
    let mut total_nodes = 0;
    for r in s.all() {
        for line in r.fortress_text.lines() {
            let mut words = line.split_whitespace();
            if words.next() == Some("NODE") {
                let action = words.nth(1).ok_or("NODE line without action")?;
                *recount.entry(action.to_string()).or_default() += 1;
                total_nodes += 1;
            }
        }
    }
    let stats = s.node_stats();
    for (kind, n) in stats.all() {
        let want = recount.get(kind.name()).copied().unwrap_or(0);
        ensure(n == want, || {
            format!("{}: store {n}, recount {want}", kind.name())
        })?;
    }
    ensure(stats.total() == total_nodes, || {
        format!("sum {} != {total_nodes}", stats.total())
    })?;
    ensure(
        recount.keys().all(|k| ActionKind::from_name(k).is_some()),
        || "unknown action in text".into(),
    )?;
    Ok(format!("50 fortresses, {total_nodes} nodes"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("scenario-a", scenario_a),
        ("scenario-b", scenario_b),
        ("termination", termination),
        ("determinism", determinism),
        ("edge-priority", edge_priority),
        ("compiler", compiler),
        ("round-trip", round_trip),
        ("backpack-remap", backpack_distribution),
        ("service", service),
        ("node-stats", node_stats),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let result = panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(note) => println!("PASS {name:<15} {note}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name:<15} {why}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
