//! ASCII rendering of the 16x8 grid.

use crate::model::{EntityInstance, Fortress, Pos, FLOOR, HEIGHT, WALL, WIDTH};

/// One character per cell. Where instances overlap, the highest id is drawn.
pub fn render_map(fortress: &Fortress) -> String {
    let grid = glyphs(fortress);
    let mut out = String::with_capacity(((WIDTH + 1) * HEIGHT) as usize);
    for row in grid {
        out.extend(row.iter().map(|(c, _)| *c));
        out.push('\n');
    }
    out
}

/// Three characters per cell; cells whose visible instance satisfies `marked`
/// are drawn as `[c]`.
pub fn render_map_marked(fortress: &Fortress, marked: impl Fn(&EntityInstance) -> bool) -> String {
    let mut grid: Vec<Vec<(char, bool)>> = glyphs(fortress)
        .into_iter()
        .map(|row| row.into_iter().map(|(c, _)| (c, false)).collect())
        .collect();
    for e in &fortress.instances {
        if let Some(cell) = cell_mut(&mut grid, e.pos) {
            cell.1 = marked(e);
        }
    }
    let mut out = String::new();
    for row in grid {
        for (c, m) in row {
            if m {
                out.push('[');
                out.push(c);
                out.push(']');
            } else {
                out.push(' ');
                out.push(c);
                out.push(' ');
            }
        }
        out.push('\n');
    }
    out
}

fn glyphs(fortress: &Fortress) -> Vec<Vec<(char, Option<u64>)>> {
    let mut grid: Vec<Vec<(char, Option<u64>)>> = (0..HEIGHT)
        .map(|y| {
            (0..WIDTH)
                .map(|x| {
                    let c = if Pos::new(x, y).is_interior() {
                        FLOOR
                    } else {
                        WALL
                    };
                    (c, None)
                })
                .collect()
        })
        .collect();
    for e in &fortress.instances {
        if let Some(cell) = cell_mut(&mut grid, e.pos) {
            *cell = (e.ch, Some(e.id));
        }
    }
    grid
}

fn cell_mut<T>(grid: &mut [Vec<T>], pos: Pos) -> Option<&mut T> {
    let y = usize::try_from(pos.y).ok()?;
    let x = usize::try_from(pos.x).ok()?;
    grid.get_mut(y)?.get_mut(x)
}
