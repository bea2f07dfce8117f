use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use super::{CompileError, ErrorCode};
use crate::model::{
    is_valid_entity_char, validate_class, Action, ActionKind, Condition, ConditionKind,
    EntityClass, Fortress, FsmEdge, FsmNode, Pos, SeedSpec, StructuralCode, FLOOR, HEIGHT,
    OVERPOPULATION_LIMIT, WALL, WIDTH,
};

struct EntityDraft {
    line: usize,
    ch: Option<char>,
    name: String,
    nodes: Vec<NodeDraft>,
    edges: Vec<(usize, FsmEdge)>,
    /// Indices of NODE lines that named an index but failed to parse otherwise.
    failed_nodes: Vec<(usize, usize)>,
}

struct NodeDraft {
    line: usize,
    node: FsmNode,
}

struct MapDraft {
    line: usize,
    rows: Vec<(usize, String)>,
    end_line: Option<usize>,
}

#[derive(Default)]
struct Header {
    name: Option<String>,
    author: Option<String>,
    seed: Option<SeedSpec>,
    notes: Option<String>,
}

enum Block {
    Top,
    Entity(EntityDraft),
    Map(MapDraft),
}

#[derive(Default)]
struct Parser {
    errors: Vec<CompileError>,
    header: Header,
    entities: Vec<EntityDraft>,
    map: Option<MapDraft>,
}

impl Parser {
    fn error(&mut self, code: ErrorCode, line: usize, message: impl Into<String>) {
        self.errors.push(CompileError::new(code, line, message));
    }

    fn syntax(&mut self, line: usize, message: impl Into<String>) {
        self.error(ErrorCode::SyntaxError, line, message);
    }
}

pub(super) fn parse(text: &str) -> Result<Fortress, Vec<CompileError>> {
    let mut p = Parser::default();
    let mut block = Block::Top;
    let mut last_line = 1;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let trimmed = raw.trim();

        block = match block {
            Block::Map(mut map) => {
                if trimmed == "END" {
                    map.end_line = Some(line);
                    p.map = Some(map);
                    Block::Top
                } else {
                    map.rows.push((line, trimmed.to_string()));
                    Block::Map(map)
                }
            }
            Block::Entity(mut ent) => {
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    Block::Entity(ent)
                } else {
                    let (kw, rest) = split_keyword(trimmed);
                    match kw {
                        "NODE" => {
                            node_line(&mut p, &mut ent, line, rest);
                            Block::Entity(ent)
                        }
                        "EDGE" => {
                            edge_line(&mut p, &mut ent, line, rest);
                            Block::Entity(ent)
                        }
                        "END" => {
                            if !rest.is_empty() {
                                p.syntax(line, "unexpected text after END");
                            }
                            p.entities.push(ent);
                            Block::Top
                        }
                        "ENTITY" | "MAP" | "FORTRESS" | "AUTHOR" | "SEED" | "NOTES" => {
                            p.syntax(
                                ent.line,
                                "ENTITY block is not closed by END before the next section",
                            );
                            p.entities.push(ent);
                            top_line(&mut p, line, trimmed)
                        }
                        other => {
                            p.syntax(line, format!("unknown statement `{other}` in ENTITY block"));
                            Block::Entity(ent)
                        }
                    }
                }
            }
            Block::Top => {
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    Block::Top
                } else {
                    top_line(&mut p, line, trimmed)
                }
            }
        };
    }

    match block {
        Block::Top => {}
        Block::Entity(ent) => {
            p.syntax(ent.line, "ENTITY block is not closed by END");
            p.entities.push(ent);
        }
        Block::Map(map) => {
            p.syntax(map.line, "MAP block is not closed by END");
            p.map = Some(map);
        }
    }

    finish(p, last_line)
}

fn split_keyword(s: &str) -> (&str, &str) {
    match s.find(char::is_whitespace) {
        Some(i) => (&s[..i], s[i..].trim()),
        None => (s, ""),
    }
}

fn top_line(p: &mut Parser, line: usize, trimmed: &str) -> Block {
    let (kw, rest) = split_keyword(trimmed);
    match kw {
        "FORTRESS" | "AUTHOR" | "NOTES" => {
            // A malformed value still counts as present for the missing-section check.
            let value = parse_quoted(rest).unwrap_or_else(|msg| {
                p.syntax(line, format!("{kw}: {msg}"));
                String::new()
            });
            let slot = match kw {
                "FORTRESS" => &mut p.header.name,
                "AUTHOR" => &mut p.header.author,
                _ => &mut p.header.notes,
            };
            if slot.is_some() {
                p.syntax(line, format!("{kw} given more than once"));
            } else {
                *slot = Some(value);
            }
        }
        "SEED" => {
            let seed = if rest == "__RANDOM__" {
                Some(SeedSpec::Random)
            } else {
                rest.parse::<u64>().ok().map(SeedSpec::Fixed)
            };
            match seed {
                None => {
                    p.syntax(
                        line,
                        format!("SEED must be a u64 or __RANDOM__, got `{rest}`"),
                    );
                    p.header.seed.get_or_insert(SeedSpec::Random);
                }
                Some(_) if p.header.seed.is_some() => p.syntax(line, "SEED given more than once"),
                Some(s) => p.header.seed = Some(s),
            }
        }
        "ENTITY" => return entity_header(p, line, rest),
        "MAP" => {
            if !rest.is_empty() {
                p.syntax(line, "unexpected text after MAP");
            }
            if p.map.is_some() {
                p.syntax(line, "MAP given more than once");
            }
            return Block::Map(MapDraft {
                line,
                rows: Vec::new(),
                end_line: None,
            });
        }
        "NODE" | "EDGE" | "END" => p.syntax(line, format!("{kw} outside of an ENTITY block")),
        other => p.syntax(line, format!("unknown statement `{other}`")),
    }
    Block::Top
}

fn entity_header(p: &mut Parser, line: usize, rest: &str) -> Block {
    let mut draft = EntityDraft {
        line,
        ch: None,
        name: String::new(),
        nodes: Vec::new(),
        edges: Vec::new(),
        failed_nodes: Vec::new(),
    };
    let mut chars = rest.chars();
    match (chars.next(), chars.next()) {
        (Some(c), sep) if sep.is_none_or(char::is_whitespace) => {
            draft.ch = Some(c);
            match parse_quoted(chars.as_str().trim()) {
                Ok(name) => draft.name = name,
                Err(msg) => p.syntax(line, format!("ENTITY name: {msg}")),
            }
        }
        _ => p.syntax(line, "ENTITY needs a single character and a quoted name"),
    }
    Block::Entity(draft)
}

/// A single-character target argument.
fn target_char(p: &mut Parser, line: usize, tok: Option<&str>, what: &str) -> Option<char> {
    let Some(tok) = tok else {
        p.syntax(line, format!("`{what}` needs a target character"));
        return None;
    };
    let mut cs = tok.chars();
    match (cs.next(), cs.next()) {
        (Some(c), None) if is_valid_entity_char(c) => Some(c),
        (Some(c), None) => {
            p.error(
                ErrorCode::ReservedCharacter,
                line,
                format!("{c:?} cannot be used as a target character"),
            );
            None
        }
        _ => {
            p.syntax(line, format!("target `{tok}` must be a single character"));
            None
        }
    }
}

fn node_line(p: &mut Parser, ent: &mut EntityDraft, line: usize, rest: &str) {
    let mut toks = rest.split_whitespace();
    let index = match toks.next().map(str::parse::<usize>) {
        Some(Ok(i)) => i,
        Some(Err(_)) => {
            p.error(
                ErrorCode::BadNodeIndex,
                line,
                "node index must be a non-negative integer",
            );
            return;
        }
        None => {
            p.syntax(line, "expected `NODE <index> <action> [<char>]`");
            return;
        }
    };
    let action = node_action(p, line, &mut toks);
    match action {
        Some(action) => ent.nodes.push(NodeDraft {
            line,
            node: FsmNode { index, action },
        }),
        None => ent.failed_nodes.push((line, index)),
    }
}

fn node_action<'a>(
    p: &mut Parser,
    line: usize,
    toks: &mut impl Iterator<Item = &'a str>,
) -> Option<Action> {
    let Some(name) = toks.next() else {
        p.syntax(line, "NODE is missing its action");
        return None;
    };
    let Some(kind) = ActionKind::from_name(name) else {
        p.error(
            ErrorCode::UnknownAction,
            line,
            format!("unknown action `{name}`"),
        );
        return None;
    };
    let target = if kind.takes_target() {
        Some(target_char(p, line, toks.next(), name)?)
    } else {
        None
    };
    if let Some(extra) = toks.next() {
        p.syntax(line, format!("unexpected `{extra}` after `{name}`"));
        return None;
    }
    Action::from_parts(kind, target)
}

fn edge_line(p: &mut Parser, ent: &mut EntityDraft, line: usize, rest: &str) {
    let mut toks = rest.split_whitespace();
    let Some(ends) = toks.next() else {
        p.syntax(
            line,
            "expected `EDGE <from>-<to> <condition> [<char>] [<count>]`",
        );
        return;
    };
    let Some((a, b)) = ends.split_once('-') else {
        p.syntax(
            line,
            format!("edge endpoints `{ends}` must look like `0-1`"),
        );
        return;
    };
    let (Ok(from), Ok(to)) = (a.parse::<usize>(), b.parse::<usize>()) else {
        p.error(
            ErrorCode::BadNodeIndex,
            line,
            format!("edge endpoints `{ends}` must be node indices"),
        );
        return;
    };
    let Some(name) = toks.next() else {
        p.syntax(line, "EDGE is missing its condition");
        return;
    };
    let Some(kind) = ConditionKind::from_name(name) else {
        p.error(
            ErrorCode::UnknownCondition,
            line,
            format!("unknown condition `{name}`"),
        );
        return;
    };
    let target = if kind.takes_target() {
        match target_char(p, line, toks.next(), name) {
            Some(c) => Some(c),
            None => return,
        }
    } else {
        None
    };
    let count = if kind.takes_count() {
        match toks.next().map(str::parse::<u32>) {
            Some(Ok(n)) if n >= 1 => Some(n),
            Some(_) => {
                p.error(
                    ErrorCode::BadCount,
                    line,
                    format!("`{name}` count must be an integer of at least 1"),
                );
                return;
            }
            None => {
                p.error(ErrorCode::BadCount, line, format!("`{name}` needs a count"));
                return;
            }
        }
    } else {
        None
    };
    if let Some(extra) = toks.next() {
        p.syntax(line, format!("unexpected `{extra}` after `{name}`"));
        return;
    }
    let condition = match (kind, target, count) {
        (ConditionKind::None, _, _) => Condition::None,
        (ConditionKind::Step, _, Some(n)) => Condition::Step { n },
        (ConditionKind::Within, Some(target), Some(n)) => Condition::Within { target, n },
        (ConditionKind::NextTo, Some(target), _) => Condition::NextTo { target },
        (ConditionKind::Touch, Some(target), _) => Condition::Touch { target },
        _ => unreachable!("arguments checked above"),
    };
    ent.edges.push((
        line,
        FsmEdge {
            from,
            to,
            condition,
        },
    ));
}

fn parse_quoted(s: &str) -> Result<String, String> {
    let Some(body) = s.strip_prefix('"') else {
        return Err("expected a quoted string".into());
    };
    let mut out = String::new();
    let mut chars = body.chars();
    while let Some(c) = chars.next() {
        match c {
            '"' => {
                let rest = chars.as_str().trim();
                if !rest.is_empty() {
                    return Err(format!("unexpected `{rest}` after string"));
                }
                return Ok(out);
            }
            '\\' => match chars.next() {
                Some(e @ ('"' | '\\')) => out.push(e),
                Some(e) => return Err(format!("unknown escape `\\{e}`")),
                None => return Err("unterminated string".into()),
            },
            c => out.push(c),
        }
    }
    Err("unterminated string".into())
}

fn finish(mut p: Parser, last_line: usize) -> Result<Fortress, Vec<CompileError>> {
    let defined: BTreeSet<char> = p.entities.iter().filter_map(|e| e.ch).collect();
    let mut classes: BTreeMap<char, EntityClass> = BTreeMap::new();

    let entities = std::mem::take(&mut p.entities);
    for ent in &entities {
        check_entity(&mut p, ent, &defined, &mut classes);
    }

    let map_seen = p.map.is_some();
    let mut placed = Vec::new();
    if let Some(map) = p.map.take() {
        placed = check_map(&mut p, &map, &defined);
    }

    let missing: Vec<&str> = [
        ("FORTRESS", p.header.name.is_none()),
        ("SEED", p.header.seed.is_none()),
        ("ENTITY", entities.is_empty()),
        ("MAP", !map_seen),
    ]
    .into_iter()
    .filter_map(|(name, missing)| missing.then_some(name))
    .collect();
    for name in missing {
        p.error(
            ErrorCode::MissingSection,
            last_line,
            format!("required section {name} is missing"),
        );
    }

    if !p.errors.is_empty() {
        let mut errors = p.errors;
        errors.sort_by_key(|e| e.line);
        return Err(errors);
    }

    let seed = p.header.seed.unwrap_or(SeedSpec::Random);
    let mut f = Fortress::new(p.header.name.unwrap_or_default(), seed);
    f.author = p.header.author.unwrap_or_default();
    f.notes = p.header.notes.unwrap_or_default();
    f.classes = classes;
    for (ch, pos) in placed {
        f.place(ch, pos);
    }
    debug_assert!(f.validate().is_empty(), "{:?}", f.validate());
    Ok(f)
}

fn check_entity(
    p: &mut Parser,
    ent: &EntityDraft,
    defined: &BTreeSet<char>,
    classes: &mut BTreeMap<char, EntityClass>,
) {
    let Some(ch) = ent.ch else { return };

    let mut class = EntityClass::new(ch, ent.name.clone());
    class.nodes = ent.nodes.iter().map(|n| n.node).collect();
    class.edges = ent.edges.iter().map(|(_, e)| e).copied().collect();

    // Index checks include the NODE lines that failed for other reasons, so a
    // bad action does not also produce a gap error.
    let mut all: Vec<(usize, usize)> = ent.nodes.iter().map(|n| (n.line, n.node.index)).collect();
    all.extend(ent.failed_nodes.iter().copied());
    all.sort();
    let total = all.len();
    let mut seen = vec![false; total];
    for &(line, index) in &all {
        match seen.get_mut(index) {
            Some(s) if !*s => *s = true,
            _ => {
                p.error(
                    ErrorCode::BadNodeIndex,
                    line,
                    format!(
                        "node index {index} is duplicated or leaves a gap (expected 0..{total})"
                    ),
                );
            }
        }
    }
    let failed: BTreeSet<usize> = ent.failed_nodes.iter().map(|&(_, i)| i).collect();

    for err in validate_class(&class) {
        let node_line = err.node.map(|i| ent.nodes[i].line);
        let edge = err.edge.map(|i| &ent.edges[i]);
        let line = node_line.or(edge.map(|(l, _)| *l)).unwrap_or(ent.line);
        let code = match err.code {
            StructuralCode::EmptyFsm => {
                if total > 0 {
                    continue;
                }
                ErrorCode::BadNodeIndex
            }
            StructuralCode::ReservedCharacter => ErrorCode::ReservedCharacter,
            StructuralCode::BadNodeIndex => {
                if err.node.is_some() {
                    continue;
                }
                let (_, e) = edge.expect("edge error");
                if failed.contains(&e.from) || failed.contains(&e.to) {
                    continue;
                }
                ErrorCode::BadNodeIndex
            }
            StructuralCode::DuplicateActionSignature => ErrorCode::DuplicateActionSignature,
            StructuralCode::DuplicateDirectedEdge => ErrorCode::DuplicateDirectedEdge,
            StructuralCode::BadCount => ErrorCode::BadCount,
        };
        p.error(code, line, err.message);
    }

    for n in &ent.nodes {
        if let Some(t) = n.node.action.target() {
            if !defined.contains(&t) {
                p.error(
                    ErrorCode::UndefinedTargetCharacter,
                    n.line,
                    format!("target {t:?} is not a defined entity character"),
                );
            }
        }
    }
    for (line, e) in &ent.edges {
        if let Some(t) = e.condition.target() {
            if !defined.contains(&t) {
                p.error(
                    ErrorCode::UndefinedTargetCharacter,
                    *line,
                    format!("target {t:?} is not a defined entity character"),
                );
            }
        }
    }

    match classes.entry(ch) {
        Entry::Occupied(_) => p.error(
            ErrorCode::DuplicateEntityCharacter,
            ent.line,
            format!("entity {ch:?} is defined more than once"),
        ),
        Entry::Vacant(slot) => {
            class.canonicalize();
            slot.insert(class);
        }
    }
}

fn check_map(p: &mut Parser, map: &MapDraft, defined: &BTreeSet<char>) -> Vec<(char, Pos)> {
    let mut placed = Vec::new();
    let mut glyphs = 0usize;
    let (w, h) = (WIDTH as usize, HEIGHT as usize);

    for (y, (line, row)) in map.rows.iter().enumerate() {
        let len = row.chars().count();
        if y < h && len != w {
            p.error(
                ErrorCode::MapDimensionMismatch,
                *line,
                format!("map row has {len} characters, expected {w}"),
            );
        }
        for (x, c) in row.chars().enumerate() {
            let pos = Pos::new(x as i32, y as i32);
            let shaped = y < h && len == w;
            if c == WALL || c == FLOOR {
                if shaped && (c == WALL) != !pos.is_interior() {
                    let msg = if c == WALL {
                        format!("wall inside the floor area at column {}", x + 1)
                    } else {
                        format!("border cell at column {} must be a wall", x + 1)
                    };
                    p.error(ErrorCode::BadBorder, *line, msg);
                }
                continue;
            }
            if !c.is_ascii() || !defined.contains(&c) {
                p.error(
                    ErrorCode::UnknownMapCharacter,
                    *line,
                    format!(
                        "map character {c:?} at column {} is not a defined entity",
                        x + 1
                    ),
                );
                continue;
            }
            glyphs += 1;
            if shaped {
                if pos.is_interior() {
                    placed.push((c, pos));
                } else {
                    p.error(
                        ErrorCode::BadBorder,
                        *line,
                        format!("border cell at column {} must be a wall", x + 1),
                    );
                }
            }
        }
    }

    if map.rows.len() > h {
        p.error(
            ErrorCode::MapDimensionMismatch,
            map.rows[h].0,
            format!("map has {} rows, expected {h}", map.rows.len()),
        );
    } else if map.rows.len() < h {
        p.error(
            ErrorCode::MapDimensionMismatch,
            map.end_line.unwrap_or(map.line),
            format!("map has {} rows, expected {h}", map.rows.len()),
        );
    }
    if glyphs > OVERPOPULATION_LIMIT {
        p.error(
            ErrorCode::TooManyInitialEntities,
            map.line,
            format!("{glyphs} entities on the map, at most {OVERPOPULATION_LIMIT} allowed"),
        );
    }
    placed
}
