use std::fmt::Write;

use crate::model::Fortress;
use crate::render::render_map;

/// Canonical text: header, entities sorted by character (nodes by index,
/// edges by endpoints), then the map.
pub fn serialize(fortress: &Fortress) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "FORTRESS {}", quote(&fortress.name));
    if !fortress.author.is_empty() {
        let _ = writeln!(out, "AUTHOR {}", quote(&fortress.author));
    }
    let _ = writeln!(out, "SEED {}", fortress.seed_spec);
    if !fortress.notes.is_empty() {
        let _ = writeln!(out, "NOTES {}", quote(&fortress.notes));
    }

    for class in fortress.classes.values() {
        let mut class = class.clone();
        class.canonicalize();
        let _ = writeln!(out, "\nENTITY {} {}", class.ch, quote(&class.name));
        for node in &class.nodes {
            let _ = writeln!(out, "  NODE {} {}", node.index, node.action);
        }
        for edge in &class.edges {
            let _ = writeln!(out, "  EDGE {}-{} {}", edge.from, edge.to, edge.condition);
        }
        out.push_str("END\n");
    }

    out.push_str("\nMAP\n");
    out.push_str(&render_map(fortress));
    out.push_str("END\n");
    out
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            q.push('\\');
        }
        q.push(c);
    }
    q.push('"');
    q
}
