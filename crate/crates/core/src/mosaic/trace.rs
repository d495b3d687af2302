use serde::{Deserialize, Serialize};

use super::{Mosaic, MosaicError, Side};

/// One pass of a strand through a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Passage {
    pub cell: usize,
    pub entry: Side,
    pub exit: Side,
    /// `Some(true)` over, `Some(false)` under; `None` away from crossings.
    pub over: Option<bool>,
}

impl Passage {
    /// Direction of travel (x east, y north).
    pub fn direction(&self) -> (i32, i32) {
        let (ex, ey) = self.exit.vector();
        let (nx, ny) = self.entry.vector();
        (ex - nx, ey - ny)
    }
}

/// A closed strand: cyclic sequence of passages.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strand {
    pub passages: Vec<Passage>,
}

impl Strand {
    pub fn crossings(&self) -> impl Iterator<Item = &Passage> {
        self.passages.iter().filter(|p| p.over.is_some())
    }
}

/// Decomposes a valid mosaic into closed strands.
///
/// Strands start at the lowest-indexed cell holding an unvisited connection;
/// the entry side is the one that comes first clockwise from north. Every
/// connection pair belongs to exactly one passage of one strand.
pub fn trace_components(m: &Mosaic) -> Result<Vec<Strand>, MosaicError> {
    m.ensure_valid()?;
    let n = m.size();
    // visited[cell][pair index]
    let mut visited = vec![[false; 2]; n * n];
    let mut strands = Vec::new();

    for start in 0..n * n {
        let tile = m.tile_at(start);
        for (pair_idx, &(a, b)) in tile.connections().iter().enumerate() {
            if visited[start][pair_idx] {
                continue;
            }
            let entry0 = if a.index() < b.index() { a } else { b };
            let mut passages = Vec::new();
            let (mut cell, mut entry) = (start, entry0);
            loop {
                let t = m.tile_at(cell);
                let idx = t
                    .connections()
                    .iter()
                    .position(|&(x, y)| x == entry || y == entry)
                    .expect("valid mosaics have matching connection points");
                let exit = t.partner(entry).unwrap();
                visited[cell][idx] = true;
                let over = t.crossing_over().map(|axis| axis == entry.axis());
                passages.push(Passage {
                    cell,
                    entry,
                    exit,
                    over,
                });
                cell = m
                    .neighbor(cell, exit)
                    .expect("valid mosaics have no boundary connections");
                entry = exit.opposite();
                if cell == start && entry == entry0 {
                    break;
                }
            }
            strands.push(Strand { passages });
        }
    }
    Ok(strands)
}

/// Crossing sign at a crossing cell from the two passage directions.
pub(crate) fn crossing_sign(over_dir: (i32, i32), under_dir: (i32, i32)) -> i8 {
    let cross = over_dir.0 * under_dir.1 - over_dir.1 * under_dir.0;
    debug_assert!(cross != 0);
    if cross > 0 {
        1
    } else {
        -1
    }
}
