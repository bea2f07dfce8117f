//! Seeded generator of random, structurally valid fortresses. Used by the
//! property tests and handy for load testing a store.

use crate::model::{
    is_valid_entity_char, Action, ActionKind, Condition, ConditionKind, EntityClass, Fortress, Pos,
    SeedSpec, HEIGHT, WIDTH,
};
use crate::rng::SplitMix64;

/// Knobs for [`random_fortress`].
#[derive(Debug, Clone, Copy)]
pub struct GenOptions {
    pub max_classes: usize,
    pub max_nodes: usize,
    pub max_edges: usize,
    pub max_instances: usize,
    /// Allow player nodes.
    pub player_nodes: bool,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            max_classes: 5,
            max_nodes: 6,
            max_edges: 8,
            max_instances: 24,
            player_nodes: true,
        }
    }
}

const NAME_CHARS: &[char] = &[
    'a', 'b', 'k', 'o', 'r', 'z', 'A', 'Q', ' ', '"', '\\', '-', '#', '.', 'é', '7', '!',
];

fn pick<T: Copy>(rng: &mut SplitMix64, items: &[T]) -> T {
    items[rng.below(items.len())]
}

fn random_string(rng: &mut SplitMix64, max: usize) -> String {
    let len = rng.below(max + 1);
    (0..len).map(|_| pick(rng, NAME_CHARS)).collect()
}

pub fn random_fortress(rng: &mut SplitMix64, opts: GenOptions) -> Fortress {
    let pool: Vec<char> = (0u8..128)
        .map(char::from)
        .filter(|&c| is_valid_entity_char(c))
        .collect();
    let class_count = 1 + rng.below(opts.max_classes.max(1));
    let mut chars: Vec<char> = Vec::new();
    while chars.len() < class_count {
        let c = pick(rng, &pool);
        if !chars.contains(&c) {
            chars.push(c);
        }
    }

    let seed_spec = if rng.below(10) == 0 {
        SeedSpec::Random
    } else {
        SeedSpec::Fixed(rng.next_u64())
    };
    let mut f = Fortress::new(random_string(rng, 12), seed_spec);
    f.author = random_string(rng, 8);
    f.notes = random_string(rng, 20);

    let kinds: Vec<ActionKind> = ActionKind::ALL
        .into_iter()
        .filter(|k| opts.player_nodes || !k.is_player())
        .collect();
    for &ch in &chars {
        f.add_class(random_class(rng, ch, &chars, &kinds, opts));
    }

    let want = rng.below(opts.max_instances + 1);
    let cells = ((WIDTH - 2) * (HEIGHT - 2)) as usize;
    for y in 1..HEIGHT - 1 {
        for x in 1..WIDTH - 1 {
            if rng.below(cells) < want {
                f.place(pick(rng, &chars), Pos::new(x, y));
            }
        }
    }
    f
}

fn random_class(
    rng: &mut SplitMix64,
    ch: char,
    chars: &[char],
    kinds: &[ActionKind],
    opts: GenOptions,
) -> EntityClass {
    let mut class = EntityClass::new(ch, random_string(rng, 10));
    let node_target = 1 + rng.below(opts.max_nodes.max(1));
    let mut attempts = 0;
    while class.nodes.len() < node_target && attempts < 50 {
        attempts += 1;
        let kind = pick(rng, kinds);
        let target = kind.takes_target().then(|| pick(rng, chars));
        let action = Action::from_parts(kind, target).expect("target matches kind");
        if class
            .nodes
            .iter()
            .all(|n| n.action.signature() != action.signature())
        {
            class = class.with_node(action);
        }
    }

    let n = class.nodes.len();
    let edge_target = rng.below(opts.max_edges + 1);
    let mut pairs = Vec::new();
    for _ in 0..edge_target * 2 {
        if pairs.len() >= edge_target {
            break;
        }
        let pair = (rng.below(n), rng.below(n));
        if pairs.contains(&pair) {
            continue;
        }
        pairs.push(pair);
        let condition = random_condition(rng, chars);
        class = class.with_edge(pair.0, pair.1, condition);
    }
    class.canonicalize();
    class
}

fn random_condition(rng: &mut SplitMix64, chars: &[char]) -> Condition {
    let target = pick(rng, chars);
    let n = 1 + rng.below(8) as u32;
    match pick(rng, &ConditionKind::ALL) {
        ConditionKind::None => Condition::None,
        ConditionKind::Step => Condition::Step { n },
        ConditionKind::Within => Condition::Within { target, n },
        ConditionKind::NextTo => Condition::NextTo { target },
        ConditionKind::Touch => Condition::Touch { target },
    }
}
