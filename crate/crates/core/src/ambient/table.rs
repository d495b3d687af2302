use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::pattern::{flip_block, mirror_block, rotate_block, tangle_shape, boundary_signature};
use super::{AmbientError, MoveInstance, MoveRef, MoveTemplate};
use crate::mosaic::{Mosaic, TILE_COUNT};

/// The bundled move table (format version 1).
pub const DEFAULT_TABLE_JSON: &str = include_str!("../../assets/default_moves.v1.json");

/// A validated list of templates with a lookup index from block contents to
/// the replacement patterns they admit.
#[derive(Clone, Debug)]
pub struct MoveTable {
    templates: Vec<MoveTemplate>,
    shapes: Vec<(usize, usize)>,
    index: HashMap<(usize, usize, Vec<u8>), Vec<(u32, usize)>>,
}

impl MoveTable {
    pub fn new(templates: Vec<MoveTemplate>) -> Result<MoveTable, AmbientError> {
        let mut index: HashMap<(usize, usize, Vec<u8>), Vec<(u32, usize)>> = HashMap::new();
        let mut shapes = BTreeSet::new();
        for (i, t) in templates.iter().enumerate() {
            t.check()?;
            shapes.insert((t.rows, t.cols));
            index
                .entry((t.rows, t.cols, t.pattern_a.clone()))
                .or_default()
                .push((i as u32, 1));
            index
                .entry((t.rows, t.cols, t.pattern_b.clone()))
                .or_default()
                .push((i as u32, 0));
        }
        Ok(MoveTable {
            templates,
            shapes: shapes.into_iter().collect(),
            index,
        })
    }

    pub fn from_json(text: &str) -> Result<MoveTable, AmbientError> {
        let templates: Vec<MoveTemplate> =
            serde_json::from_str(text).map_err(|e| AmbientError::Json(e.to_string()))?;
        MoveTable::new(templates)
    }

    pub fn to_json(&self) -> String {
        templates_to_json(&self.templates)
    }

    pub fn default_table() -> MoveTable {
        MoveTable::from_json(DEFAULT_TABLE_JSON).expect("bundled move table is valid")
    }

    pub fn templates(&self) -> &[MoveTemplate] {
        &self.templates
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn instance(&self, mv: MoveRef) -> MoveInstance {
        self.templates[mv.template as usize].at(mv.row as usize, mv.col as usize)
    }

    /// Every instance that fits an n×n lattice.
    pub fn instances(&self, n: usize) -> Vec<MoveInstance> {
        let mut out = Vec::new();
        for t in &self.templates {
            for row in 0..=n.saturating_sub(t.rows) {
                for col in 0..=n.saturating_sub(t.cols) {
                    if row + t.rows <= n && col + t.cols <= n {
                        out.push(t.at(row, col));
                    }
                }
            }
        }
        out
    }

    /// Mosaics reachable from `m` by one move, with the move used.
    /// Order: shapes, then anchors row-major, then template order.
    pub fn neighbors(&self, m: &Mosaic) -> Vec<(Mosaic, MoveRef)> {
        let n = m.size();
        let mut out = Vec::new();
        for &(rows, cols) in &self.shapes {
            if rows > n || cols > n {
                continue;
            }
            for row in 0..=n - rows {
                for col in 0..=n - cols {
                    let block = m.block(row, col, rows, cols);
                    let Some(hits) = self.index.get(&(rows, cols, block)) else {
                        continue;
                    };
                    for &(ti, side) in hits {
                        let t = &self.templates[ti as usize];
                        let replacement = if side == 1 { &t.pattern_b } else { &t.pattern_a };
                        let mut next = m.clone();
                        next.write_block(row, col, cols, replacement);
                        out.push((
                            next,
                            MoveRef {
                                template: ti,
                                row: row as u16,
                                col: col as u16,
                            },
                        ));
                    }
                }
            }
        }
        out
    }
}

fn templates_to_json(templates: &[MoveTemplate]) -> String {
    // one template per line keeps the asset diff-friendly
    let lines: Vec<String> = templates
        .iter()
        .map(|t| format!("  {}", serde_json::to_string(t).expect("template serializes")))
        .collect();
    format!("[\n{}\n]\n", lines.join(",\n"))
}

/// Builds the default move table from first principles.
///
/// * Planar isotopies: all crossingless, loop-free blocks of shape 2×2, 1×2
///   and 2×1 are grouped by boundary signature and strand matching; each
///   group is linked to its smallest member. Two such blocks are isotopic
///   relative to the block boundary, so each link is a planar isotopy.
/// * Reidemeister moves: one R1 kink, one R2 bigon and one R3 triangle
///   (with both choices of the fixed crossing), closed under the eight
///   symmetries of the square and under exchanging over and under.
pub fn default_templates() -> Vec<MoveTemplate> {
    let mut out = Vec::new();
    for (rows, cols) in [(1, 2), (2, 1), (2, 2)] {
        out.extend(planar_templates(rows, cols));
    }
    out.extend(closed_family(
        "R1",
        2,
        2,
        &[(vec![0, 0, 1, 0], vec![2, 1, 9, 4])],
    ));
    out.extend(closed_family(
        "R2",
        2,
        2,
        &[(vec![7, 8, 3, 4], vec![9, 9, 3, 4])],
    ));
    // strand from the top-left corner to the bottom-right corner slides over
    // the crossing of the horizontal and vertical strands
    let r3 = |fixed: u8| {
        (
            vec![6, 6, 0, 10, fixed, 5, 3, 9, 5],
            vec![3, 9, 1, 5, fixed, 10, 0, 6, 3],
        )
    };
    out.extend(closed_family("R3", 3, 3, &[r3(9), r3(10)]));
    out
}

fn planar_templates(rows: usize, cols: usize) -> Vec<MoveTemplate> {
    let mut groups: BTreeMap<(Vec<bool>, Vec<(usize, usize)>), Vec<Vec<u8>>> = BTreeMap::new();
    let cells = rows * cols;
    let crossingless: Vec<u8> = (0..TILE_COUNT).filter(|&t| t != 9 && t != 10).collect();
    let total = crossingless.len().pow(cells as u32);
    for code in 0..total {
        let mut c = code;
        let block: Vec<u8> = (0..cells)
            .map(|_| {
                let t = crossingless[c % crossingless.len()];
                c /= crossingless.len();
                t
            })
            .collect();
        let Some(shape) = tangle_shape(rows, cols, &block) else {
            continue;
        };
        if shape.loops > 0 {
            continue;
        }
        let key = (
            boundary_signature(rows, cols, &block),
            shape.matching.into_iter().collect(),
        );
        groups.entry(key).or_default().push(block);
    }
    let mut out = Vec::new();
    for members in groups.values_mut() {
        if members.len() < 2 {
            continue;
        }
        members.sort();
        let hub = members[0].clone();
        for other in &members[1..] {
            out.push(MoveTemplate {
                name: String::new(),
                rows,
                cols,
                pattern_a: hub.clone(),
                pattern_b: other.clone(),
            });
        }
    }
    for (i, t) in out.iter_mut().enumerate() {
        t.name = format!("P{rows}x{cols}-{i}");
    }
    out
}

fn closed_family(prefix: &str, rows: usize, cols: usize, seeds: &[(Vec<u8>, Vec<u8>)]) -> Vec<MoveTemplate> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (a0, b0) in seeds {
        for mirror in [false, true] {
            let (a, b) = if mirror {
                (mirror_block(a0), mirror_block(b0))
            } else {
                (a0.clone(), b0.clone())
            };
            for flip in [false, true] {
                let (mut r, mut c) = (rows, cols);
                let (mut pa, mut pb) = if flip {
                    (flip_block(r, c, &a), flip_block(r, c, &b))
                } else {
                    (a.clone(), b.clone())
                };
                for _ in 0..4 {
                    let key = if pa <= pb {
                        (r, c, pa.clone(), pb.clone())
                    } else {
                        (r, c, pb.clone(), pa.clone())
                    };
                    if seen.insert(key) {
                        out.push(MoveTemplate {
                            name: String::new(),
                            rows: r,
                            cols: c,
                            pattern_a: pa.clone(),
                            pattern_b: pb.clone(),
                        });
                    }
                    pa = rotate_block(r, c, &pa);
                    pb = rotate_block(r, c, &pb);
                    std::mem::swap(&mut r, &mut c);
                }
            }
        }
    }
    for (i, t) in out.iter_mut().enumerate() {
        t.name = format!("{prefix}-{i}");
    }
    out
}

/// JSON text of [`default_templates`], exactly as shipped.
pub fn default_table_json() -> String {
    templates_to_json(&default_templates())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_asset_matches_generator() {
        assert_eq!(DEFAULT_TABLE_JSON, default_table_json());
    }

    #[test]
    fn generated_templates_pass_checks() {
        let ts = default_templates();
        for t in &ts {
            t.check().unwrap();
        }
        let names: BTreeSet<&str> = ts.iter().map(|t| t.name.as_str()).collect();
        assert_eq!(names.len(), ts.len());
        for prefix in ["R1-", "R2-", "R3-", "P2x2-"] {
            assert!(ts.iter().any(|t| t.name.starts_with(prefix)), "{prefix}");
        }
    }

    #[test]
    fn reidemeister_templates_keep_strand_matching() {
        for t in default_templates() {
            let a = tangle_shape(t.rows, t.cols, &t.pattern_a).unwrap();
            let b = tangle_shape(t.rows, t.cols, &t.pattern_b).unwrap();
            assert_eq!(a.matching, b.matching, "{}", t.name);
            assert_eq!(a.loops, b.loops, "{}", t.name);
        }
    }

    #[test]
    fn loader_rejects_signature_violation() {
        let bad = r#"[{"name":"x","rows":1,"cols":2,"pattern_a":[3,4],"pattern_b":[0,0]}]"#;
        assert!(matches!(
            MoveTable::from_json(bad),
            Err(AmbientError::BadTemplate { .. })
        ));
    }
}
