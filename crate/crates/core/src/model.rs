//! Domain types shared by the engine, the definition language and the store.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rng::SplitMix64;

/// Full grid width, border included.
pub const WIDTH: i32 = 16;
/// Full grid height, border included.
pub const HEIGHT: i32 = 8;
/// Number of interior floor cells (14 x 6).
pub const INTERIOR_CELLS: usize = ((WIDTH - 2) * (HEIGHT - 2)) as usize;
/// A fortress holding more than this many instances is overpopulated.
pub const OVERPOPULATION_LIMIT: usize = 2 * INTERIOR_CELLS;
/// Ticks without activity before a run ends by inactivity.
pub const INACTIVITY_LIMIT: u64 = 100;

pub const WALL: char = '#';
pub const FLOOR: char = '.';

/// A grid coordinate. `x` grows east, `y` grows south.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pos {
    pub x: i32,
    pub y: i32,
}

impl Pos {
    pub const fn new(x: i32, y: i32) -> Self {
        Pos { x, y }
    }

    /// True for the 14x6 floor area inside the border walls.
    pub fn is_interior(self) -> bool {
        (1..WIDTH - 1).contains(&self.x) && (1..HEIGHT - 1).contains(&self.y)
    }

    pub fn step(self, dir: Direction) -> Pos {
        let (dx, dy) = dir.delta();
        Pos::new(self.x + dx, self.y + dy)
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

pub fn manhattan(a: Pos, b: Pos) -> u32 {
    a.x.abs_diff(b.x) + a.y.abs_diff(b.y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    North,
    East,
    South,
    West,
}

impl Direction {
    /// Order used when mapping RNG output to a direction.
    pub const ALL: [Direction; 4] = [
        Direction::North,
        Direction::East,
        Direction::South,
        Direction::West,
    ];

    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::North => (0, -1),
            Direction::East => (1, 0),
            Direction::South => (0, 1),
            Direction::West => (-1, 0),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Direction::North => 'N',
            Direction::East => 'E',
            Direction::South => 'S',
            Direction::West => 'W',
        }
    }
}

/// Action kind without its target character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    Idle,
    Move,
    Die,
    Clone,
    Push,
    Take,
    Chase,
    Add,
    Transform,
    MoveWall,
    PlayerMove,
    PlayerPush,
    PlayerMoveWall,
}

impl ActionKind {
    pub const ALL: [ActionKind; 13] = [
        ActionKind::Idle,
        ActionKind::Move,
        ActionKind::Die,
        ActionKind::Clone,
        ActionKind::Push,
        ActionKind::Take,
        ActionKind::Chase,
        ActionKind::Add,
        ActionKind::Transform,
        ActionKind::MoveWall,
        ActionKind::PlayerMove,
        ActionKind::PlayerPush,
        ActionKind::PlayerMoveWall,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ActionKind::Idle => "idle",
            ActionKind::Move => "move",
            ActionKind::Die => "die",
            ActionKind::Clone => "clone",
            ActionKind::Push => "push",
            ActionKind::Take => "take",
            ActionKind::Chase => "chase",
            ActionKind::Add => "add",
            ActionKind::Transform => "transform",
            ActionKind::MoveWall => "move_wall",
            ActionKind::PlayerMove => "player_move",
            ActionKind::PlayerPush => "player_push",
            ActionKind::PlayerMoveWall => "player_move_wall",
        }
    }

    pub fn from_name(name: &str) -> Option<ActionKind> {
        ActionKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn takes_target(self) -> bool {
        !matches!(
            self,
            ActionKind::Idle
                | ActionKind::Move
                | ActionKind::Die
                | ActionKind::Clone
                | ActionKind::PlayerMove
        )
    }

    pub fn is_player(self) -> bool {
        matches!(
            self,
            ActionKind::PlayerMove | ActionKind::PlayerPush | ActionKind::PlayerMoveWall
        )
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What a node does while it is the active state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "target", rename_all = "snake_case")]
pub enum Action {
    Idle,
    Move,
    Die,
    Clone,
    Push(char),
    Take(char),
    Chase(char),
    Add(char),
    Transform(char),
    MoveWall(char),
    PlayerMove,
    PlayerPush(char),
    PlayerMoveWall(char),
}

impl Action {
    /// Builds an action from its kind, checking that the target is present exactly when required.
    pub fn from_parts(kind: ActionKind, target: Option<char>) -> Option<Action> {
        let action = match (kind, target) {
            (ActionKind::Idle, None) => Action::Idle,
            (ActionKind::Move, None) => Action::Move,
            (ActionKind::Die, None) => Action::Die,
            (ActionKind::Clone, None) => Action::Clone,
            (ActionKind::PlayerMove, None) => Action::PlayerMove,
            (ActionKind::Push, Some(c)) => Action::Push(c),
            (ActionKind::Take, Some(c)) => Action::Take(c),
            (ActionKind::Chase, Some(c)) => Action::Chase(c),
            (ActionKind::Add, Some(c)) => Action::Add(c),
            (ActionKind::Transform, Some(c)) => Action::Transform(c),
            (ActionKind::MoveWall, Some(c)) => Action::MoveWall(c),
            (ActionKind::PlayerPush, Some(c)) => Action::PlayerPush(c),
            (ActionKind::PlayerMoveWall, Some(c)) => Action::PlayerMoveWall(c),
            _ => return None,
        };
        Some(action)
    }

    pub fn kind(self) -> ActionKind {
        match self {
            Action::Idle => ActionKind::Idle,
            Action::Move => ActionKind::Move,
            Action::Die => ActionKind::Die,
            Action::Clone => ActionKind::Clone,
            Action::Push(_) => ActionKind::Push,
            Action::Take(_) => ActionKind::Take,
            Action::Chase(_) => ActionKind::Chase,
            Action::Add(_) => ActionKind::Add,
            Action::Transform(_) => ActionKind::Transform,
            Action::MoveWall(_) => ActionKind::MoveWall,
            Action::PlayerMove => ActionKind::PlayerMove,
            Action::PlayerPush(_) => ActionKind::PlayerPush,
            Action::PlayerMoveWall(_) => ActionKind::PlayerMoveWall,
        }
    }

    pub fn target(self) -> Option<char> {
        match self {
            Action::Push(c)
            | Action::Take(c)
            | Action::Chase(c)
            | Action::Add(c)
            | Action::Transform(c)
            | Action::MoveWall(c)
            | Action::PlayerPush(c)
            | Action::PlayerMoveWall(c) => Some(c),
            _ => None,
        }
    }

    /// Same kind, new target. Targetless actions are returned unchanged.
    pub fn with_target(self, c: char) -> Action {
        Action::from_parts(self.kind(), self.target().map(|_| c)).unwrap_or(self)
    }

    /// The (kind, target) pair that must be unique within one class.
    pub fn signature(self) -> (ActionKind, Option<char>) {
        (self.kind(), self.target())
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.target() {
            Some(c) => write!(f, "{} {}", self.kind(), c),
            None => write!(f, "{}", self.kind()),
        }
    }
}

/// Condition kind ordered by transition priority, lowest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionKind {
    None,
    Step,
    Within,
    NextTo,
    Touch,
}

impl ConditionKind {
    pub const ALL: [ConditionKind; 5] = [
        ConditionKind::None,
        ConditionKind::Step,
        ConditionKind::Within,
        ConditionKind::NextTo,
        ConditionKind::Touch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConditionKind::None => "none",
            ConditionKind::Step => "step",
            ConditionKind::Within => "within",
            ConditionKind::NextTo => "nextTo",
            ConditionKind::Touch => "touch",
        }
    }

    pub fn from_name(name: &str) -> Option<ConditionKind> {
        ConditionKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn takes_target(self) -> bool {
        matches!(
            self,
            ConditionKind::Within | ConditionKind::NextTo | ConditionKind::Touch
        )
    }

    pub fn takes_count(self) -> bool {
        matches!(self, ConditionKind::Step | ConditionKind::Within)
    }
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Guard on an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Condition {
    None,
    Step { n: u32 },
    Within { target: char, n: u32 },
    NextTo { target: char },
    Touch { target: char },
}

impl Condition {
    pub fn kind(self) -> ConditionKind {
        match self {
            Condition::None => ConditionKind::None,
            Condition::Step { .. } => ConditionKind::Step,
            Condition::Within { .. } => ConditionKind::Within,
            Condition::NextTo { .. } => ConditionKind::NextTo,
            Condition::Touch { .. } => ConditionKind::Touch,
        }
    }

    pub fn target(self) -> Option<char> {
        match self {
            Condition::Within { target, .. }
            | Condition::NextTo { target }
            | Condition::Touch { target } => Some(target),
            _ => None,
        }
    }

    pub fn count(self) -> Option<u32> {
        match self {
            Condition::Step { n } | Condition::Within { n, .. } => Some(n),
            _ => None,
        }
    }

    pub fn with_target(self, c: char) -> Condition {
        match self {
            Condition::Within { n, .. } => Condition::Within { target: c, n },
            Condition::NextTo { .. } => Condition::NextTo { target: c },
            Condition::Touch { .. } => Condition::Touch { target: c },
            other => other,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Condition::None => f.write_str("none"),
            Condition::Step { n } => write!(f, "step {n}"),
            Condition::Within { target, n } => write!(f, "within {target} {n}"),
            Condition::NextTo { target } => write!(f, "nextTo {target}"),
            Condition::Touch { target } => write!(f, "touch {target}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FsmNode {
    pub index: usize,
    pub action: Action,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FsmEdge {
    pub from: usize,
    pub to: usize,
    pub condition: Condition,
}

/// A behavior template: glyph, display name and FSM. Node 0 is the initial state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EntityClass {
    #[serde(rename = "char")]
    pub ch: char,
    pub name: String,
    pub nodes: Vec<FsmNode>,
    pub edges: Vec<FsmEdge>,
}

impl EntityClass {
    pub fn new(ch: char, name: impl Into<String>) -> Self {
        EntityClass {
            ch,
            name: name.into(),
            nodes: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// Appends a node with the next free index.
    pub fn with_node(mut self, action: Action) -> Self {
        let index = self.nodes.len();
        self.nodes.push(FsmNode { index, action });
        self
    }

    pub fn with_edge(mut self, from: usize, to: usize, condition: Condition) -> Self {
        self.edges.push(FsmEdge {
            from,
            to,
            condition,
        });
        self
    }

    pub fn node(&self, index: usize) -> Option<&FsmNode> {
        self.nodes.iter().find(|n| n.index == index)
    }

    pub fn outgoing(&self, from: usize) -> impl Iterator<Item = &FsmEdge> {
        self.edges.iter().filter(move |e| e.from == from)
    }

    pub fn has_player_node(&self) -> bool {
        self.nodes.iter().any(|n| n.action.kind().is_player())
    }

    /// Every character referenced by a node or edge.
    pub fn referenced_chars(&self) -> impl Iterator<Item = char> + '_ {
        self.nodes
            .iter()
            .filter_map(|n| n.action.target())
            .chain(self.edges.iter().filter_map(|e| e.condition.target()))
    }

    /// Sorts nodes by index and edges by (from, to).
    pub fn canonicalize(&mut self) {
        self.nodes.sort_by_key(|n| n.index);
        self.edges.sort_by_key(|e| (e.from, e.to));
    }
}

/// Printable ASCII other than the wall, floor and space glyphs.
pub fn is_valid_entity_char(c: char) -> bool {
    c.is_ascii_graphic() && c != WALL && c != FLOOR
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StructuralCode {
    EmptyFsm,
    ReservedCharacter,
    BadNodeIndex,
    DuplicateActionSignature,
    DuplicateDirectedEdge,
    BadCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StructuralError {
    pub code: StructuralCode,
    /// Position in `nodes` of the offending node.
    pub node: Option<usize>,
    /// Position in `edges` of the offending edge.
    pub edge: Option<usize>,
    pub message: String,
}

impl fmt::Display for StructuralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.code, self.message)
    }
}

/// Checks every class invariant. An empty result means the class is well formed.
pub fn validate_class(class: &EntityClass) -> Vec<StructuralError> {
    let mut errors = Vec::new();
    let mut push = |code, node, edge, message: String| {
        errors.push(StructuralError {
            code,
            node,
            edge,
            message,
        })
    };

    if !is_valid_entity_char(class.ch) {
        push(
            StructuralCode::ReservedCharacter,
            None,
            None,
            format!("{:?} cannot be used as an entity character", class.ch),
        );
    }
    if class.nodes.is_empty() {
        push(
            StructuralCode::EmptyFsm,
            None,
            None,
            format!("entity {:?} has no nodes", class.ch),
        );
    }

    let mut seen_index = vec![false; class.nodes.len()];
    let mut signatures = Vec::with_capacity(class.nodes.len());
    for (pos, node) in class.nodes.iter().enumerate() {
        match seen_index.get_mut(node.index) {
            Some(seen) if !*seen => *seen = true,
            _ => push(
                StructuralCode::BadNodeIndex,
                Some(pos),
                None,
                format!(
                    "node index {} is duplicated or leaves a gap (expected 0..{})",
                    node.index,
                    class.nodes.len()
                ),
            ),
        }
        if let Some(t) = node.action.target() {
            if !is_valid_entity_char(t) {
                push(
                    StructuralCode::ReservedCharacter,
                    Some(pos),
                    None,
                    format!("{t:?} cannot be used as a target character"),
                );
            }
        }
        let sig = node.action.signature();
        if signatures.contains(&sig) {
            push(
                StructuralCode::DuplicateActionSignature,
                Some(pos),
                None,
                format!("action `{}` is already used by another node", node.action),
            );
        } else {
            signatures.push(sig);
        }
    }

    let node_exists = |i: usize| class.nodes.iter().any(|n| n.index == i);
    let mut pairs = Vec::with_capacity(class.edges.len());
    for (pos, edge) in class.edges.iter().enumerate() {
        for end in [edge.from, edge.to] {
            if !node_exists(end) {
                push(
                    StructuralCode::BadNodeIndex,
                    None,
                    Some(pos),
                    format!(
                        "edge {}-{} references missing node {end}",
                        edge.from, edge.to
                    ),
                );
            }
        }
        if edge.condition.count() == Some(0) {
            push(
                StructuralCode::BadCount,
                None,
                Some(pos),
                format!("`{}` needs a count of at least 1", edge.condition.kind()),
            );
        }
        if let Some(t) = edge.condition.target() {
            if !is_valid_entity_char(t) {
                push(
                    StructuralCode::ReservedCharacter,
                    None,
                    Some(pos),
                    format!("{t:?} cannot be used as a target character"),
                );
            }
        }
        if pairs.contains(&(edge.from, edge.to)) {
            push(
                StructuralCode::DuplicateDirectedEdge,
                None,
                Some(pos),
                format!("edge {}-{} is defined more than once", edge.from, edge.to),
            );
        } else {
            pairs.push((edge.from, edge.to));
        }
    }
    errors
}

/// Seed used when a fortress is (re)initialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeedSpec {
    Fixed(u64),
    Random,
}

impl SeedSpec {
    /// A fixed seed, or a fresh one drawn from the OS for `Random`.
    pub fn resolve(self) -> u64 {
        match self {
            SeedSpec::Fixed(s) => s,
            SeedSpec::Random => rand::random(),
        }
    }
}

impl fmt::Display for SeedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedSpec::Fixed(s) => write!(f, "{s}"),
            SeedSpec::Random => f.write_str("__RANDOM__"),
        }
    }
}

/// A live agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EntityInstance {
    pub id: u64,
    #[serde(rename = "char")]
    pub ch: char,
    pub pos: Pos,
    pub node: usize,
    pub dwell: u64,
    pub player_controlled: bool,
    /// Most recent transition taken, kept for introspection.
    pub last_edge: Option<(usize, usize)>,
}

impl EntityInstance {
    pub fn new(id: u64, ch: char, pos: Pos, player_controlled: bool) -> Self {
        EntityInstance {
            id,
            ch,
            pos,
            node: 0,
            dwell: 0,
            player_controlled,
            last_edge: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TerminationReason {
    Extinction,
    Overpopulation,
    Inactivity,
}

impl fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TerminationReason::Extinction => "Extinction",
            TerminationReason::Overpopulation => "Overpopulation",
            TerminationReason::Inactivity => "Inactivity",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Running,
    Terminated(TerminationReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verb {
    Moved,
    Blocked,
    Spawned,
    Removed,
    Transformed,
    Pushed,
    Took,
    Transitioned,
    Idled,
    Input,
}

impl Verb {
    pub fn name(self) -> &'static str {
        match self {
            Verb::Moved => "moved",
            Verb::Blocked => "blocked",
            Verb::Spawned => "spawned",
            Verb::Removed => "removed",
            Verb::Transformed => "transformed",
            Verb::Pushed => "pushed",
            Verb::Took => "took",
            Verb::Transitioned => "transitioned",
            Verb::Idled => "idled",
            Verb::Input => "input",
        }
    }

    /// Events that reset the inactivity counter.
    pub fn is_activity(self) -> bool {
        matches!(
            self,
            Verb::Moved
                | Verb::Spawned
                | Verb::Removed
                | Verb::Transformed
                | Verb::Pushed
                | Verb::Took
        )
    }
}

impl fmt::Display for Verb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One logged world change.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimEvent {
    pub tick: u64,
    pub actor_id: u64,
    pub actor_char: char,
    pub verb: Verb,
    pub detail: String,
    pub pos: Pos,
}

impl fmt::Display for SimEvent {
    /// `T<tick> #<id>:<char> <verb> <detail> @(<x>,<y>)`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T{} #{}:{} {} {} @{}",
            self.tick, self.actor_id, self.actor_char, self.verb, self.detail, self.pos
        )
    }
}

/// Renders events one per line, LF-terminated.
pub fn render_log<'a>(events: impl IntoIterator<Item = &'a SimEvent>) -> String {
    let mut out = String::new();
    for e in events {
        out.push_str(&e.to_string());
        out.push('\n');
    }
    out
}

/// The 16x8 world: definitions, live instances and run state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fortress {
    pub name: String,
    pub author: String,
    pub notes: String,
    pub seed_spec: SeedSpec,
    pub classes: BTreeMap<char, EntityClass>,
    /// Live instances, always sorted by ascending id.
    pub instances: Vec<EntityInstance>,
    pub tick: u64,
    pub rng: SplitMix64,
    pub last_activity_tick: u64,
    pub status: Status,
    pub log: Vec<SimEvent>,
    pub next_id: u64,
}

impl Fortress {
    /// An empty definition with no classes or instances.
    pub fn new(name: impl Into<String>, seed_spec: SeedSpec) -> Self {
        let seed = match seed_spec {
            SeedSpec::Fixed(s) => s,
            SeedSpec::Random => 0,
        };
        Fortress {
            name: name.into(),
            author: String::new(),
            notes: String::new(),
            seed_spec,
            classes: BTreeMap::new(),
            instances: Vec::new(),
            tick: 0,
            rng: SplitMix64::new(seed),
            last_activity_tick: 0,
            status: Status::Running,
            log: Vec::new(),
            next_id: 0,
        }
    }

    pub fn add_class(&mut self, class: EntityClass) {
        self.classes.insert(class.ch, class);
    }

    /// Places a new instance at node 0 and returns its id.
    pub fn place(&mut self, ch: char, pos: Pos) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        let player = self.is_player_class(ch);
        self.instances
            .push(EntityInstance::new(id, ch, pos, player));
        id
    }

    pub fn is_player_class(&self, ch: char) -> bool {
        self.classes
            .get(&ch)
            .is_some_and(EntityClass::has_player_node)
    }

    pub fn has_player(&self) -> bool {
        self.classes.values().any(EntityClass::has_player_node)
    }

    pub fn instance(&self, id: u64) -> Option<&EntityInstance> {
        self.index_of(id).map(|i| &self.instances[i])
    }

    pub(crate) fn index_of(&self, id: u64) -> Option<usize> {
        self.instances.binary_search_by_key(&id, |e| e.id).ok()
    }

    pub fn population(&self) -> usize {
        self.instances.len()
    }

    pub fn count_of(&self, ch: char) -> usize {
        self.instances.iter().filter(|e| e.ch == ch).count()
    }

    /// Checks all classes plus fortress-level rules: every referenced or placed
    /// character must be defined, and every instance must sit on the floor.
    pub fn validate(&self) -> Vec<FortressError> {
        let mut errors = Vec::new();
        for (key, class) in &self.classes {
            if *key != class.ch {
                errors.push(FortressError::KeyMismatch {
                    key: *key,
                    ch: class.ch,
                });
            }
            for e in validate_class(class) {
                errors.push(FortressError::Class {
                    ch: class.ch,
                    error: e,
                });
            }
            for t in class.referenced_chars() {
                if !self.classes.contains_key(&t) && is_valid_entity_char(t) {
                    errors.push(FortressError::UndefinedTarget {
                        ch: class.ch,
                        target: t,
                    });
                }
            }
        }
        for inst in &self.instances {
            if !self.classes.contains_key(&inst.ch) {
                errors.push(FortressError::UndefinedInstance {
                    id: inst.id,
                    ch: inst.ch,
                });
            }
            if !inst.pos.is_interior() {
                errors.push(FortressError::OutOfBounds {
                    id: inst.id,
                    pos: inst.pos,
                });
            }
        }
        if self.instances.len() > OVERPOPULATION_LIMIT {
            errors.push(FortressError::TooManyInstances(self.instances.len()));
        }
        errors
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FortressError {
    #[error("entity {ch:?}: {error}")]
    Class { ch: char, error: StructuralError },
    #[error("class stored under {key:?} has character {ch:?}")]
    KeyMismatch { key: char, ch: char },
    #[error("entity {ch:?} references undefined character {target:?}")]
    UndefinedTarget { ch: char, target: char },
    #[error("instance #{id} uses undefined character {ch:?}")]
    UndefinedInstance { id: u64, ch: char },
    #[error("instance #{id} at {pos} is outside the floor area")]
    OutOfBounds { id: u64, pos: Pos },
    #[error("{0} initial instances exceed the population limit")]
    TooManyInstances(usize),
}
