//! The tick loop.
//!
//! Each tick every live instance takes one turn in ascending id order. A turn
//! bumps the dwell counter, takes at most one transition (highest-priority
//! satisfied edge, lowest target node on ties), then runs the action of the
//! now-current node. Instances spawned during a tick wait for the next one.
//! Termination is checked once, after the last turn.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::input::{InputSource, PlayerInput};
use crate::model::{
    manhattan, Action, Condition, Direction, EntityClass, EntityInstance, Fortress, FortressError,
    Pos, SimEvent, Status, TerminationReason, Verb, INACTIVITY_LIMIT, OVERPOPULATION_LIMIT,
};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("fortress definition is invalid ({} problem(s))", .0.len())]
    InvalidDefinition(Vec<FortressError>),
    #[error("the simulation has already terminated")]
    AlreadyTerminated,
    #[error("no live instance with id {0}")]
    UnknownInstance(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct XrayEntry {
    pub node: usize,
    pub last_edge: Option<(usize, usize)>,
}

/// What the X-ray view shows for one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Xray<'a> {
    pub class: &'a EntityClass,
    pub node: usize,
    pub last_edge: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TickReport {
    pub tick: u64,
    pub events: Vec<SimEvent>,
    pub status: Status,
    pub xray: BTreeMap<u64, XrayEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunOutcome {
    Terminated(TerminationReason),
    MaxTicksReached,
}

impl Fortress {
    /// Returns a fresh run of this definition: ids reassigned 0..k in reading
    /// order, everything at node 0, tick 0, RNG seeded from `seed_override`
    /// or the definition's seed spec.
    pub fn init(&self, seed_override: Option<u64>) -> Result<Fortress, EngineError> {
        let errors = self.validate();
        if !errors.is_empty() {
            return Err(EngineError::InvalidDefinition(errors));
        }
        let seed = seed_override.unwrap_or_else(|| self.seed_spec.resolve());
        let mut f = self.clone();
        f.instances.sort_by_key(|e| (e.pos.y, e.pos.x, e.id));
        for (id, inst) in f.instances.iter_mut().enumerate() {
            let player = self.is_player_class(inst.ch);
            *inst = EntityInstance::new(id as u64, inst.ch, inst.pos, player);
        }
        f.next_id = f.instances.len() as u64;
        f.tick = 0;
        f.rng = SplitMix64::new(seed);
        f.last_activity_tick = 0;
        f.status = Status::Running;
        f.log.clear();
        Ok(f)
    }

    pub fn step(&mut self, inputs: &BTreeMap<u64, PlayerInput>) -> Result<TickReport, EngineError> {
        if let Status::Terminated(_) = self.status {
            return Err(EngineError::AlreadyTerminated);
        }
        self.tick += 1;
        let first_event = self.log.len();
        let order: Vec<u64> = self.instances.iter().map(|e| e.id).collect();
        for id in order {
            if let Some(idx) = self.index_of(id) {
                self.take_turn(idx, inputs.get(&id).copied());
            }
        }
        if let Some(reason) = self.check_termination() {
            self.status = Status::Terminated(reason);
        }
        Ok(TickReport {
            tick: self.tick,
            events: self.log[first_event..].to_vec(),
            status: self.status,
            xray: self.xray_all(),
        })
    }

    /// Extinction, then overpopulation, then inactivity.
    pub fn check_termination(&self) -> Option<TerminationReason> {
        if self.instances.is_empty() {
            Some(TerminationReason::Extinction)
        } else if self.instances.len() > OVERPOPULATION_LIMIT {
            Some(TerminationReason::Overpopulation)
        } else if self.tick.saturating_sub(self.last_activity_tick) >= INACTIVITY_LIMIT {
            Some(TerminationReason::Inactivity)
        } else {
            None
        }
    }

    /// Steps until termination or `max_ticks` further ticks.
    pub fn run(mut self, max_ticks: u64, input: &mut dyn InputSource) -> (Fortress, RunOutcome) {
        for _ in 0..max_ticks {
            if let Status::Terminated(reason) = self.status {
                return (self, RunOutcome::Terminated(reason));
            }
            let inputs = input.next_inputs(&self);
            if self.step(&inputs).is_err() {
                break;
            }
        }
        let outcome = match self.status {
            Status::Terminated(reason) => RunOutcome::Terminated(reason),
            Status::Running => RunOutcome::MaxTicksReached,
        };
        (self, outcome)
    }

    pub fn xray(&self, id: u64) -> Result<Xray<'_>, EngineError> {
        let inst = self.instance(id).ok_or(EngineError::UnknownInstance(id))?;
        let class = self
            .classes
            .get(&inst.ch)
            .ok_or(EngineError::UnknownInstance(id))?;
        Ok(Xray {
            class,
            node: inst.node,
            last_edge: inst.last_edge,
        })
    }

    pub fn xray_all(&self) -> BTreeMap<u64, XrayEntry> {
        self.instances
            .iter()
            .map(|e| {
                (
                    e.id,
                    XrayEntry {
                        node: e.node,
                        last_edge: e.last_edge,
                    },
                )
            })
            .collect()
    }

    fn take_turn(&mut self, idx: usize, input: Option<PlayerInput>) {
        self.instances[idx].dwell += 1;

        let actor = &self.instances[idx];
        let class = &self.classes[&actor.ch];
        let chosen = class
            .outgoing(actor.node)
            .filter(|e| eval_condition(e.condition, actor, self))
            .max_by(|a, b| {
                a.condition
                    .kind()
                    .cmp(&b.condition.kind())
                    .then(b.to.cmp(&a.to))
            })
            .map(|e| (e.from, e.to));

        if let Some((from, to)) = chosen {
            let inst = &mut self.instances[idx];
            inst.node = to;
            inst.dwell = 0;
            inst.last_edge = Some((from, to));
            self.emit(idx, Verb::Transitioned, format!("{from}->{to}"));
        }

        let actor = &self.instances[idx];
        let Some(node) = self.classes[&actor.ch].node(actor.node) else {
            return;
        };
        match node.action {
            Action::Idle => self.emit(idx, Verb::Idled, "-".into()),
            Action::Move => {
                let dir = self.rng.direction();
                self.try_move(idx, dir, None);
            }
            Action::Die => self.remove(idx, "die".into()),
            Action::Clone => {
                let ch = self.instances[idx].ch;
                self.spawn(idx, ch);
            }
            Action::Add(c) => self.spawn(idx, c),
            Action::Push(c) => {
                let dir = self.rng.direction();
                self.push(idx, c, dir);
            }
            Action::Take(c) => self.take(idx, c),
            Action::Chase(c) => self.chase(idx, c),
            Action::Transform(c) => self.transform(idx, c),
            Action::MoveWall(c) => {
                let dir = self.rng.direction();
                self.try_move(idx, dir, Some(c));
            }
            Action::PlayerMove => {
                if let Some(dir) = self.player_direction(idx, input) {
                    self.try_move(idx, dir, None);
                }
            }
            Action::PlayerPush(c) => {
                if let Some(dir) = self.player_direction(idx, input) {
                    self.push(idx, c, dir);
                }
            }
            Action::PlayerMoveWall(c) => {
                if let Some(dir) = self.player_direction(idx, input) {
                    self.try_move(idx, dir, Some(c));
                }
            }
        }
    }

    /// Logs the consumed input. `Skip` (or no input) idles the actor.
    fn player_direction(&mut self, idx: usize, input: Option<PlayerInput>) -> Option<Direction> {
        let input = input.unwrap_or(PlayerInput::Skip);
        self.emit(idx, Verb::Input, input.name().into());
        let dir = input.direction();
        if dir.is_none() {
            self.emit(idx, Verb::Idled, "-".into());
        }
        dir
    }

    fn emit(&mut self, idx: usize, verb: Verb, detail: String) {
        let actor = &self.instances[idx];
        let event = SimEvent {
            tick: self.tick,
            actor_id: actor.id,
            actor_char: actor.ch,
            verb,
            detail,
            pos: actor.pos,
        };
        self.record(event);
    }

    fn record(&mut self, event: SimEvent) {
        if event.verb.is_activity() {
            self.last_activity_tick = self.tick;
        }
        self.log.push(event);
    }

    fn occupied_by(&self, pos: Pos, ch: char) -> bool {
        self.instances.iter().any(|e| e.pos == pos && e.ch == ch)
    }

    /// Moves one cell unless the destination is a wall or holds a `blocker`.
    fn try_move(&mut self, idx: usize, dir: Direction, blocker: Option<char>) {
        let dest = self.instances[idx].pos.step(dir);
        let blocked = !dest.is_interior() || blocker.is_some_and(|c| self.occupied_by(dest, c));
        if blocked {
            self.emit(idx, Verb::Blocked, dir.letter().to_string());
        } else {
            self.instances[idx].pos = dest;
            self.emit(idx, Verb::Moved, dir.letter().to_string());
        }
    }

    fn push(&mut self, idx: usize, target: char, dir: Direction) {
        let actor_id = self.instances[idx].id;
        let dest = self.instances[idx].pos.step(dir);
        let victims: Vec<usize> = (0..self.instances.len())
            .filter(|&i| {
                let e = &self.instances[i];
                e.id != actor_id && e.ch == target && e.pos == dest
            })
            .collect();
        if victims.is_empty() {
            return self.try_move(idx, dir, None);
        }
        let beyond = dest.step(dir);
        if !beyond.is_interior() {
            return self.emit(idx, Verb::Blocked, dir.letter().to_string());
        }
        for v in victims {
            self.instances[v].pos = beyond;
            let victim = &self.instances[v];
            let event = SimEvent {
                tick: self.tick,
                actor_id,
                actor_char: self.instances[idx].ch,
                verb: Verb::Pushed,
                detail: format!("#{}:{}", victim.id, victim.ch),
                pos: beyond,
            };
            self.record(event);
        }
        self.instances[idx].pos = dest;
        self.emit(idx, Verb::Moved, dir.letter().to_string());
    }

    /// Nearest other instance of `target` by Manhattan distance, lowest id on ties.
    fn nearest(&self, idx: usize, target: char) -> Option<usize> {
        let actor = &self.instances[idx];
        self.instances
            .iter()
            .enumerate()
            .filter(|(_, e)| e.ch == target && e.id != actor.id)
            .min_by_key(|(_, e)| (manhattan(actor.pos, e.pos), e.id))
            .map(|(i, _)| i)
    }

    fn take(&mut self, idx: usize, target: char) {
        let Some(v) = self.nearest(idx, target) else {
            return self.emit(idx, Verb::Idled, "-".into());
        };
        let victim = self.instances[v].clone();
        self.emit(idx, Verb::Took, format!("#{}:{}", victim.id, victim.ch));
        let taker = self.instances[idx].id;
        self.remove(v, format!("taken-by-#{taker}"));
    }

    fn chase(&mut self, idx: usize, target: char) {
        let Some(t) = self.nearest(idx, target) else {
            return self.emit(idx, Verb::Idled, "-".into());
        };
        let from = self.instances[idx].pos;
        let to = self.instances[t].pos;
        let (dx, dy) = (to.x - from.x, to.y - from.y);
        if dx == 0 && dy == 0 {
            return self.emit(idx, Verb::Idled, "-".into());
        }
        let horizontal = (dx != 0).then_some(if dx > 0 {
            Direction::East
        } else {
            Direction::West
        });
        let vertical = (dy != 0).then_some(if dy > 0 {
            Direction::South
        } else {
            Direction::North
        });
        let (first, second) = if dx.abs() >= dy.abs() {
            (horizontal, vertical)
        } else {
            (vertical, horizontal)
        };
        for dir in [first, second].into_iter().flatten() {
            let dest = from.step(dir);
            if dest.is_interior() {
                self.instances[idx].pos = dest;
                return self.emit(idx, Verb::Moved, dir.letter().to_string());
            }
        }
        self.emit(idx, Verb::Idled, "-".into())
    }

    fn spawn(&mut self, idx: usize, ch: char) {
        let pos = self.instances[idx].pos;
        let id = self.place(ch, pos);
        self.emit(idx, Verb::Spawned, format!("#{id}:{ch}"));
    }

    fn transform(&mut self, idx: usize, ch: char) {
        let old = self.instances[idx].ch;
        self.emit(idx, Verb::Transformed, format!("{old}->{ch}"));
        let player = self.is_player_class(ch);
        let inst = &mut self.instances[idx];
        inst.ch = ch;
        inst.node = 0;
        inst.dwell = 0;
        inst.last_edge = None;
        inst.player_controlled = player;
    }

    fn remove(&mut self, idx: usize, detail: String) {
        self.emit(idx, Verb::Removed, detail);
        self.instances.remove(idx);
    }
}

/// True when `cond` holds for `actor`. Target searches skip the actor itself
/// but see other instances of its own class.
pub fn eval_condition(cond: Condition, actor: &EntityInstance, fortress: &Fortress) -> bool {
    let others = |target: char| {
        fortress
            .instances
            .iter()
            .filter(move |e| e.ch == target && e.id != actor.id)
            .map(|e| manhattan(actor.pos, e.pos))
    };
    match cond {
        Condition::None => true,
        Condition::Step { n } => actor.dwell >= u64::from(n),
        Condition::Within { target, n } => others(target).any(|d| d <= n),
        Condition::NextTo { target } => others(target).any(|d| d == 1),
        Condition::Touch { target } => others(target).any(|d| d == 0),
    }
}
