//! Combinatorics of rectangular sub-blocks of tiles.

use std::collections::BTreeSet;

use crate::mosaic::{Side, Tile};

/// A connection point on the outer boundary of a block, as (row, col, side).
pub type BoundaryPoint = (usize, usize, Side);

/// Boundary points listed clockwise from the top-left corner.
pub fn boundary_points(rows: usize, cols: usize) -> Vec<BoundaryPoint> {
    let mut pts = Vec::with_capacity(2 * (rows + cols));
    for c in 0..cols {
        pts.push((0, c, Side::N));
    }
    for r in 0..rows {
        pts.push((r, cols - 1, Side::E));
    }
    for c in (0..cols).rev() {
        pts.push((rows - 1, c, Side::S));
    }
    for r in (0..rows).rev() {
        pts.push((r, 0, Side::W));
    }
    pts
}

fn tiles(cells: &[u8]) -> Option<Vec<Tile>> {
    cells.iter().map(|&c| Tile::new(c)).collect()
}

/// Which boundary points carry a connection.
pub fn boundary_signature(rows: usize, cols: usize, cells: &[u8]) -> Vec<bool> {
    boundary_points(rows, cols)
        .into_iter()
        .map(|(r, c, s)| Tile::new(cells[r * cols + c]).is_some_and(|t| t.has(s)))
        .collect()
}

/// Every interior edge of the block is matched on both sides.
pub fn internally_consistent(rows: usize, cols: usize, cells: &[u8]) -> bool {
    let Some(ts) = tiles(cells) else {
        return false;
    };
    for r in 0..rows {
        for c in 0..cols {
            let t = ts[r * cols + c];
            if c + 1 < cols && t.has(Side::E) != ts[r * cols + c + 1].has(Side::W) {
                return false;
            }
            if r + 1 < rows && t.has(Side::S) != ts[(r + 1) * cols + c].has(Side::N) {
                return false;
            }
        }
    }
    true
}

/// How strands run through a block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TangleShape {
    /// Pairs of boundary point indices joined by a strand, each pair sorted.
    pub matching: BTreeSet<(usize, usize)>,
    /// Closed loops lying entirely inside the block.
    pub loops: usize,
    pub crossings: usize,
}

/// Traces strands through an internally consistent block.
pub fn tangle_shape(rows: usize, cols: usize, cells: &[u8]) -> Option<TangleShape> {
    if !internally_consistent(rows, cols, cells) {
        return None;
    }
    let ts = tiles(cells)?;
    let pts = boundary_points(rows, cols);
    let mut used = vec![[false; 2]; rows * cols];
    let mut matching = BTreeSet::new();

    let pair_index = |t: Tile, side: Side| {
        t.connections()
            .iter()
            .position(|&(a, b)| a == side || b == side)
    };

    for (start_idx, &(r0, c0, s0)) in pts.iter().enumerate() {
        let t0 = ts[r0 * cols + c0];
        let Some(p0) = pair_index(t0, s0) else { continue };
        if used[r0 * cols + c0][p0] {
            continue;
        }
        let (mut r, mut c, mut entry) = (r0, c0, s0);
        loop {
            let t = ts[r * cols + c];
            let p = pair_index(t, entry).expect("consistent block");
            used[r * cols + c][p] = true;
            let exit = t.partner(entry).unwrap();
            let (dr, dc) = exit.offset();
            let (nr, nc) = (r as isize + dr, c as isize + dc);
            if nr < 0 || nc < 0 || nr >= rows as isize || nc >= cols as isize {
                let end = pts
                    .iter()
                    .position(|&q| q == (r, c, exit))
                    .expect("exit lies on the boundary");
                matching.insert((start_idx.min(end), start_idx.max(end)));
                break;
            }
            r = nr as usize;
            c = nc as usize;
            entry = exit.opposite();
        }
    }

    // what is left over forms closed loops
    let mut loops = 0;
    for cell in 0..rows * cols {
        for (p, &(a, _)) in ts[cell].connections().iter().enumerate() {
            if used[cell][p] {
                continue;
            }
            loops += 1;
            let (mut r, mut c, mut entry) = (cell / cols, cell % cols, a);
            loop {
                let t = ts[r * cols + c];
                let q = pair_index(t, entry).unwrap();
                if used[r * cols + c][q] {
                    break;
                }
                used[r * cols + c][q] = true;
                let exit = t.partner(entry).unwrap();
                let (dr, dc) = exit.offset();
                r = (r as isize + dr) as usize;
                c = (c as isize + dc) as usize;
                entry = exit.opposite();
            }
        }
    }

    let crossings = ts.iter().filter(|t| t.is_crossing()).count();
    Some(TangleShape {
        matching,
        loops,
        crossings,
    })
}

/// Quarter turn clockwise of a rows×cols block; result is cols×rows.
pub fn rotate_block(rows: usize, cols: usize, cells: &[u8]) -> Vec<u8> {
    let mut out = vec![0; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            let t = Tile::new(cells[r * cols + c]).expect("valid tile ids");
            // (r, c) -> (c, rows-1-r) in a cols x rows block
            out[c * rows + (rows - 1 - r)] = t.rotate_cw().id();
        }
    }
    out
}

pub fn flip_block(rows: usize, cols: usize, cells: &[u8]) -> Vec<u8> {
    let mut out = vec![0; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            let t = Tile::new(cells[r * cols + c]).expect("valid tile ids");
            out[r * cols + (cols - 1 - c)] = t.flip_horizontal().id();
        }
    }
    out
}

pub fn mirror_block(cells: &[u8]) -> Vec<u8> {
    cells
        .iter()
        .map(|&c| Tile::new(c).expect("valid tile ids").mirror_crossing().id())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_order() {
        let pts = boundary_points(2, 2);
        assert_eq!(pts.len(), 8);
        assert_eq!(pts[0], (0, 0, Side::N));
        assert_eq!(pts[2], (0, 1, Side::E));
        assert_eq!(pts[7], (0, 0, Side::W));
    }

    #[test]
    fn kink_shape() {
        let a = tangle_shape(2, 2, &[0, 0, 1, 0]).unwrap();
        let b = tangle_shape(2, 2, &[2, 1, 9, 4]).unwrap();
        assert_eq!(a.matching, b.matching);
        assert_eq!(a.loops, 0);
        assert_eq!(b.loops, 0);
        assert_eq!(b.crossings, 1);
    }

    #[test]
    fn circle_is_a_loop() {
        let s = tangle_shape(2, 2, &[2, 1, 3, 4]).unwrap();
        assert!(s.matching.is_empty());
        assert_eq!(s.loops, 1);
    }

    #[test]
    fn inconsistent_block_has_no_shape() {
        assert!(tangle_shape(1, 2, &[5, 0]).is_none());
    }

    #[test]
    fn rotating_four_times_is_identity() {
        let b = vec![2, 5, 1, 10, 0, 6];
        let mut x = b.clone();
        let (mut r, mut c) = (2, 3);
        for _ in 0..4 {
            x = rotate_block(r, c, &x);
            std::mem::swap(&mut r, &mut c);
        }
        assert_eq!(x, b);
    }
}
