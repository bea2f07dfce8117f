//! Dropping a saved entity into a different fortress.
//!
//! Targets that name characters absent from the destination are rewritten
//! to characters that exist there (or to the entity itself).

use std::collections::{BTreeMap, BTreeSet, HashSet};

use fortress_core::{ActionKind, EntityClass, FsmEdge};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaceReport {
    pub class: EntityClass,
    /// Old target character to its replacement.
    pub mapping: BTreeMap<char, char>,
    /// Nodes removed because every rewrite collided, as `(old index, action)`.
    pub dropped_nodes: Vec<(usize, String)>,
    /// Edges removed along with those nodes.
    pub dropped_edges: Vec<FsmEdge>,
}

/// Rewrites every target character outside `fortress_chars ∪ {entity.ch}`.
///
/// Each foreign character gets one replacement, drawn uniformly from the
/// legal characters that do not create a duplicate `(kind, target)` node.
/// If every choice collides, a uniform draw is kept and the later of each
/// colliding pair of nodes is dropped together with its edges.
pub fn backpack_place<R: Rng + ?Sized>(
    entity: &EntityClass,
    fortress_chars: &BTreeSet<char>,
    rng: &mut R,
) -> PlaceReport {
    let mut class = entity.clone();
    class.canonicalize();
    let mut legal = fortress_chars.clone();
    legal.insert(class.ch);
    let legal: Vec<char> = legal.into_iter().collect();

    let mut foreign: Vec<char> = Vec::new();
    for c in class.referenced_chars() {
        if !legal.contains(&c) && !foreign.contains(&c) {
            foreign.push(c);
        }
    }

    let mut mapping = BTreeMap::new();
    for &f in &foreign {
        // Signatures already fixed: nodes whose target is legal or mapped.
        let settled: HashSet<(ActionKind, Option<char>)> = class
            .nodes
            .iter()
            .filter_map(|n| {
                resolve(n.action.target(), &legal, &mapping).map(|t| (n.action.kind(), t))
            })
            .collect();
        let moving: Vec<ActionKind> = class
            .nodes
            .iter()
            .filter(|n| n.action.target() == Some(f))
            .map(|n| n.action.kind())
            .collect();
        let free: Vec<char> = legal
            .iter()
            .copied()
            .filter(|&c| moving.iter().all(|&k| !settled.contains(&(k, Some(c)))))
            .collect();
        let pool = if free.is_empty() { &legal } else { &free };
        mapping.insert(f, pool[rng.gen_range(0..pool.len())]);
    }

    for node in &mut class.nodes {
        if let Some(&to) = node.action.target().and_then(|t| mapping.get(&t)) {
            node.action = node.action.with_target(to);
        }
    }
    for edge in &mut class.edges {
        if let Some(&to) = edge.condition.target().and_then(|t| mapping.get(&t)) {
            edge.condition = edge.condition.with_target(to);
        }
    }

    let mut seen = HashSet::new();
    let mut dropped = BTreeSet::new();
    for node in &class.nodes {
        if !seen.insert(node.action.signature()) {
            dropped.insert(node.index);
        }
    }

    let mut report = PlaceReport {
        class: EntityClass::new(class.ch, class.name.clone()),
        mapping,
        dropped_nodes: Vec::new(),
        dropped_edges: Vec::new(),
    };
    let mut renumber = BTreeMap::new();
    for node in &class.nodes {
        if dropped.contains(&node.index) {
            report
                .dropped_nodes
                .push((node.index, node.action.to_string()));
        } else {
            renumber.insert(node.index, report.class.nodes.len());
            report.class = report.class.clone().with_node(node.action);
        }
    }
    for edge in &class.edges {
        match (renumber.get(&edge.from), renumber.get(&edge.to)) {
            (Some(&from), Some(&to)) => report.class.edges.push(FsmEdge {
                from,
                to,
                condition: edge.condition,
            }),
            _ => report.dropped_edges.push(*edge),
        }
    }
    report
}

/// `Some(target)` once a node's target is final, `None` while it is still foreign.
fn resolve(
    target: Option<char>,
    legal: &[char],
    mapping: &BTreeMap<char, char>,
) -> Option<Option<char>> {
    match target {
        None => Some(None),
        Some(t) if legal.contains(&t) => Some(Some(t)),
        Some(t) => mapping.get(&t).map(|&m| Some(m)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fortress_core::{validate_class, Action, Condition};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn chars(s: &str) -> BTreeSet<char> {
        s.chars().collect()
    }

    #[test]
    fn take_dollar_lands_on_a_legal_char() {
        let a = EntityClass::new('A', "Ant").with_node(Action::Take('$'));
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..50 {
            let r = backpack_place(&a, &chars("&M+"), &mut rng);
            let t = r.class.nodes[0].action.target().unwrap();
            assert!("&M+A".contains(t));
            assert_eq!(r.mapping[&'$'], t);
        }
    }

    #[test]
    fn defined_targets_are_untouched() {
        let a = EntityClass::new('A', "Ant")
            .with_node(Action::Take('M'))
            .with_node(Action::Chase('A'))
            .with_edge(0, 1, Condition::Within { target: 'M', n: 3 });
        let r = backpack_place(&a, &chars("M"), &mut StdRng::seed_from_u64(0));
        assert_eq!(r.class, a);
        assert!(r.mapping.is_empty());
    }

    #[test]
    fn edges_follow_the_same_mapping() {
        let a = EntityClass::new('A', "Ant")
            .with_node(Action::Idle)
            .with_node(Action::Take('$'))
            .with_edge(0, 1, Condition::Touch { target: '$' });
        let r = backpack_place(&a, &chars("&M+"), &mut StdRng::seed_from_u64(3));
        assert_eq!(
            r.class.nodes[1].action.target(),
            r.class.edges[0].condition.target()
        );
    }

    #[test]
    fn collisions_are_redrawn() {
        // take & exists, so $ must never become &.
        let a = EntityClass::new('A', "Ant")
            .with_node(Action::Take('&'))
            .with_node(Action::Take('$'));
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..100 {
            let r = backpack_place(&a, &chars("&M"), &mut rng);
            assert!(r.dropped_nodes.is_empty());
            assert_ne!(r.class.nodes[1].action, Action::Take('&'));
            assert!(validate_class(&r.class).is_empty());
        }
    }

    #[test]
    fn impossible_rewrite_drops_node_and_edges() {
        // Only legal char is A itself, and take A is already present.
        let a = EntityClass::new('A', "Ant")
            .with_node(Action::Take('A'))
            .with_node(Action::Take('$'))
            .with_node(Action::Idle)
            .with_edge(0, 1, Condition::None)
            .with_edge(1, 2, Condition::None)
            .with_edge(0, 2, Condition::Step { n: 1 });
        let r = backpack_place(&a, &BTreeSet::new(), &mut StdRng::seed_from_u64(0));
        assert_eq!(r.dropped_nodes, vec![(1, "take A".to_string())]);
        assert_eq!(r.dropped_edges.len(), 2);
        assert_eq!(r.class.nodes.len(), 2);
        assert_eq!(
            r.class.edges,
            vec![FsmEdge {
                from: 0,
                to: 1,
                condition: Condition::Step { n: 1 }
            }]
        );
        assert!(validate_class(&r.class).is_empty());
    }
}
