//! Mosaics: n×n grids of tiles, their connection discipline and text/JSON forms.

mod tile;
mod trace;

pub use tile::{Axis, Side, Tile, TILE_COUNT};
pub(crate) use trace::crossing_sign;
pub use trace::{trace_components, Passage, Strand};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MosaicError {
    #[error("lattice size must be positive")]
    ZeroSize,
    #[error("expected {expected} cells for an {n}x{n} mosaic, found {found}")]
    CellCount { n: usize, expected: usize, found: usize },
    #[error("cell {index} holds tile id {id}, outside 0..=10")]
    BadTile { index: usize, id: u8 },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("mosaic is not suitably connected ({} violating edge(s))", .0.len())]
    NotSuitablyConnected(Vec<EdgeViolation>),
    #[error("invalid mosaic JSON: {0}")]
    Json(String),
}

/// An n×n mosaic, cells stored row-major from the top-left corner.
///
/// Cells are raw ids so that out-of-range ids survive a round trip and are
/// reported by [`Mosaic::validate`] instead of at parse time.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "MosaicJson", into = "MosaicJson")]
pub struct Mosaic {
    n: usize,
    cells: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct MosaicJson {
    n: usize,
    cells: Vec<u8>,
}

impl TryFrom<MosaicJson> for Mosaic {
    type Error = MosaicError;
    fn try_from(j: MosaicJson) -> Result<Self, Self::Error> {
        Mosaic::new(j.n, j.cells)
    }
}

impl From<Mosaic> for MosaicJson {
    fn from(m: Mosaic) -> Self {
        MosaicJson {
            n: m.n,
            cells: m.cells,
        }
    }
}

/// Where an interior or boundary edge breaks the connection discipline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeViolation {
    /// A connection point lies on the outer boundary of the block.
    Boundary { row: usize, col: usize, side: Side },
    /// Exactly one of two adjacent cells has a connection point on the shared edge.
    Mismatch {
        row: usize,
        col: usize,
        side: Side,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<EdgeViolation>,
}

impl Mosaic {
    pub fn new(n: usize, cells: Vec<u8>) -> Result<Mosaic, MosaicError> {
        if n == 0 {
            return Err(MosaicError::ZeroSize);
        }
        if cells.len() != n * n {
            return Err(MosaicError::CellCount {
                n,
                expected: n * n,
                found: cells.len(),
            });
        }
        Ok(Mosaic { n, cells })
    }

    pub fn blank(n: usize) -> Mosaic {
        assert!(n > 0);
        Mosaic {
            n,
            cells: vec![0; n * n],
        }
    }

    pub fn from_rows(rows: &[&[u8]]) -> Result<Mosaic, MosaicError> {
        let n = rows.len();
        let cells: Vec<u8> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Mosaic::new(n, cells)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn id_at(&self, row: usize, col: usize) -> u8 {
        self.cells[row * self.n + col]
    }

    /// Tile at (row, col); panics on a malformed id, so validate first.
    pub fn tile(&self, row: usize, col: usize) -> Tile {
        Tile::new(self.id_at(row, col)).expect("mosaic holds a malformed tile id")
    }

    pub fn tile_at(&self, index: usize) -> Tile {
        Tile::new(self.cells[index]).expect("mosaic holds a malformed tile id")
    }

    pub fn set(&mut self, row: usize, col: usize, tile: Tile) {
        self.cells[row * self.n + col] = tile.id();
    }

    pub fn neighbor(&self, index: usize, side: Side) -> Option<usize> {
        let (r, c) = (index / self.n, index % self.n);
        let (dr, dc) = side.offset();
        let (nr, nc) = (r as isize + dr, c as isize + dc);
        if nr < 0 || nc < 0 || nr >= self.n as isize || nc >= self.n as isize {
            None
        } else {
            Some(nr as usize * self.n + nc as usize)
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c == 9 || c == 10).count()
    }

    /// Total number of connection pairs over all tiles.
    pub fn connection_pairs(&self) -> usize {
        self.cells
            .iter()
            .filter_map(|&c| Tile::new(c))
            .map(|t| t.connections().len())
            .sum()
    }

    /// Checks the suitably-connected condition.
    ///
    /// Returns `Err(BadTile)` for the first malformed id; otherwise a report
    /// listing every violating edge (each interior edge reported once, from
    /// its north or west cell).
    pub fn validate(&self) -> Result<ValidationReport, MosaicError> {
        if let Some(index) = self.cells.iter().position(|&c| c >= TILE_COUNT) {
            return Err(MosaicError::BadTile {
                index,
                id: self.cells[index],
            });
        }
        let n = self.n;
        let mut violations = Vec::new();
        for row in 0..n {
            for col in 0..n {
                let t = self.tile(row, col);
                for side in Side::ALL {
                    let on_boundary = match side {
                        Side::N => row == 0,
                        Side::S => row == n - 1,
                        Side::W => col == 0,
                        Side::E => col == n - 1,
                    };
                    if on_boundary {
                        if t.has(side) {
                            violations.push(EdgeViolation::Boundary { row, col, side });
                        }
                    } else if matches!(side, Side::E | Side::S) {
                        let (dr, dc) = side.offset();
                        let other = self.tile((row as isize + dr) as usize, (col as isize + dc) as usize);
                        if t.has(side) != other.has(side.opposite()) {
                            violations.push(EdgeViolation::Mismatch { row, col, side });
                        }
                    }
                }
            }
        }
        Ok(ValidationReport {
            valid: violations.is_empty(),
            violations,
        })
    }

    pub fn is_valid(&self) -> bool {
        matches!(self.validate(), Ok(r) if r.valid)
    }

    /// Validates, turning a failed report into an error.
    pub fn ensure_valid(&self) -> Result<(), MosaicError> {
        let report = self.validate()?;
        if report.valid {
            Ok(())
        } else {
            Err(MosaicError::NotSuitablyConnected(report.violations))
        }
    }

    /// Canonical text form: a header line with n, then n rows of n ids.
    pub fn encode(&self) -> String {
        let mut out = String::with_capacity(self.n * self.n * 3 + 8);
        out.push_str(&self.n.to_string());
        out.push('\n');
        for row in self.cells.chunks(self.n) {
            let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn decode(text: &str) -> Result<Mosaic, MosaicError> {
        let parse_err = |line: usize, column: usize, message: String| MosaicError::Parse {
            line,
            column,
            message,
        };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, 1, "empty document".into()))?;
        let n: usize = header
            .trim()
            .parse()
            .map_err(|_| parse_err(1, 1, format!("bad header {:?}", header.trim())))?;
        if n == 0 {
            return Err(parse_err(1, 1, "lattice size must be positive".into()));
        }
        let mut cells = Vec::with_capacity(n * n);
        let mut rows = 0;
        for (i, line) in lines {
            let lineno = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            if rows == n {
                return Err(parse_err(lineno, 1, format!("more than {n} rows")));
            }
            let mut count = 0;
            for (column, tok) in tokens(line) {
                count += 1;
                if count > n {
                    return Err(parse_err(
                        lineno,
                        column,
                        format!("row has more than {n} entries"),
                    ));
                }
                let id: u8 = tok
                    .parse()
                    .map_err(|_| parse_err(lineno, column, format!("bad tile id {tok:?}")))?;
                cells.push(id);
            }
            if count < n {
                return Err(parse_err(
                    lineno,
                    line.len() + 1,
                    format!("row has {count} entries, expected {n}"),
                ));
            }
            rows += 1;
        }
        if rows < n {
            let last = text.lines().count();
            return Err(parse_err(last + 1, 1, format!("expected {n} rows, found {rows}")));
        }
        Mosaic::new(n, cells)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("mosaic serializes")
    }

    /// Accepts either the text form or the JSON form `{"n":..,"cells":[..]}`.
    pub fn parse_any(text: &str) -> Result<Mosaic, MosaicError> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| MosaicError::Json(e.to_string()))
        } else {
            Mosaic::decode(text)
        }
    }

    /// Swaps over and under at every crossing.
    pub fn mirror(&self) -> Mosaic {
        let cells = self
            .cells
            .iter()
            .map(|&c| Tile::new(c).map(|t| t.mirror_crossing().id()).unwrap_or(c))
            .collect();
        Mosaic { n: self.n, cells }
    }

    /// Copy of the sub-block with top-left corner `(row, col)`.
    pub fn block(&self, row: usize, col: usize, rows: usize, cols: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(rows * cols);
        for r in row..row + rows {
            out.extend_from_slice(&self.cells[r * self.n + col..r * self.n + col + cols]);
        }
        out
    }

    pub fn write_block(&mut self, row: usize, col: usize, cols: usize, block: &[u8]) {
        for (i, chunk) in block.chunks(cols).enumerate() {
            let start = (row + i) * self.n + col;
            self.cells[start..start + cols].copy_from_slice(chunk);
        }
    }

    /// Unicode rendering, one glyph per cell.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for row in self.cells.chunks(self.n) {
            for &c in row {
                out.push(Tile::new(c).map(Tile::glyph).unwrap_or('?'));
            }
            out.push('\n');
        }
        out
    }
}

fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out.into_iter()
}

impl fmt::Display for Mosaic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl FromStr for Mosaic {
    type Err = MosaicError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mosaic::parse_any(s)
    }
}

/// Built-in mosaics used throughout the tests and the CLI.
pub mod library {
    use super::Mosaic;

    /// Smallest closed loop: four quarter arcs in a 2×2 block.
    pub fn circle_2x2() -> Mosaic {
        Mosaic::from_rows(&[&[2, 1], &[3, 4]]).unwrap()
    }

    /// The 2×2 circle placed with its top-left corner at `(row, col)` of an n×n lattice.
    pub fn circle_at(n: usize, row: usize, col: usize) -> Mosaic {
        let mut m = Mosaic::blank(n);
        m.write_block(row, col, 2, &[2, 1, 3, 4]);
        m
    }

    /// Classical trefoil of the 4×4 lattice (left mosaic of the standard figure).
    pub fn trefoil() -> Mosaic {
        Mosaic::decode(include_str!("../../fixtures/trefoil.mosaic")).unwrap()
    }

    /// A figure-eight knot mosaic in the 5×5 lattice.
    pub fn figure_eight() -> Mosaic {
        Mosaic::decode(include_str!("../../fixtures/figure_eight.mosaic")).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::library::*;
    use super::*;

    #[test]
    fn trefoil_fixture_is_valid() {
        let r = trefoil().validate().unwrap();
        assert!(r.valid, "{:?}", r.violations);
        assert_eq!(trefoil().crossing_count(), 3);
    }

    #[test]
    fn blank_and_single_arc() {
        assert!(Mosaic::blank(1).is_valid());
        let arc = Mosaic::new(1, vec![1]).unwrap();
        let r = arc.validate().unwrap();
        assert!(!r.valid);
        assert_eq!(r.violations.len(), 2);
        assert!(r
            .violations
            .iter()
            .all(|v| matches!(v, EdgeViolation::Boundary { .. })));
    }

    #[test]
    fn mismatch_reported_once() {
        // straight line whose right end runs into a blank
        let m = Mosaic::from_rows(&[&[0, 0, 0], &[2, 5, 0], &[3, 4, 0]]).unwrap();
        let r = m.validate().unwrap();
        assert_eq!(
            r.violations,
            vec![
                EdgeViolation::Mismatch { row: 1, col: 1, side: Side::E },
                EdgeViolation::Mismatch { row: 1, col: 1, side: Side::S },
            ]
        );
    }

    #[test]
    fn malformed_id_is_rejected_with_index() {
        let m = Mosaic::new(2, vec![0, 0, 12, 0]).unwrap();
        assert_eq!(m.validate(), Err(MosaicError::BadTile { index: 2, id: 12 }));
    }

    #[test]
    fn circle_text_form() {
        let text = circle_2x2().encode();
        assert_eq!(text, "2\n2 1\n3 4\n");
        assert_eq!(text.lines().count(), 3);
        assert_eq!(Mosaic::decode(&text).unwrap(), circle_2x2());
    }

    #[test]
    fn long_row_is_a_parse_error() {
        let text = "4\n0 0 0 0\n0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0\n0 0 0 0\n0 0 0 0\n";
        match Mosaic::decode(text) {
            Err(MosaicError::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(column, 9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_and_ragged_inputs_rejected() {
        assert!(matches!(Mosaic::decode("0\n"), Err(MosaicError::Parse { .. })));
        assert!(matches!(Mosaic::decode("2\n0 0\n"), Err(MosaicError::Parse { .. })));
        assert!(matches!(Mosaic::decode("2\n0 x\n0 0\n"), Err(MosaicError::Parse { line: 2, column: 3, .. })));
        assert!(matches!(Mosaic::parse_any(r#"{"n":2,"cells":[0,0,0]}"#), Err(MosaicError::Json(_))));
        assert!(matches!(Mosaic::parse_any(r#"{"n":0,"cells":[]}"#), Err(MosaicError::Json(_))));
    }

    #[test]
    fn trefoil_fixture_round_trips_byte_identically() {
        let text = include_str!("../../fixtures/trefoil.mosaic");
        assert_eq!(Mosaic::decode(text).unwrap().encode(), text);
    }

    #[test]
    fn json_form() {
        let m = circle_2x2();
        assert_eq!(m.to_json(), r#"{"n":2,"cells":[2,1,3,4]}"#);
        assert_eq!(Mosaic::parse_any(&m.to_json()).unwrap(), m);
    }
}
