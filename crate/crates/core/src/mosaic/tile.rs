//! The eleven mosaic tiles.
//!
//! Tile ids follow a fixed convention (the pictorial source gives no
//! numbering semantics):
//!
//! | id | connections            | note                         |
//! |----|------------------------|------------------------------|
//! | 0  | none                   | blank                        |
//! | 1  | W–S                    | quarter arc                  |
//! | 2  | S–E                    | quarter arc                  |
//! | 3  | E–N                    | quarter arc                  |
//! | 4  | N–W                    | quarter arc                  |
//! | 5  | W–E                    | horizontal line              |
//! | 6  | N–S                    | vertical line                |
//! | 7  | W–S and E–N            | double arc                   |
//! | 8  | S–E and N–W            | double arc                   |
//! | 9  | W–E over N–S           | crossing, horizontal on top  |
//! | 10 | N–S over W–E           | crossing, vertical on top    |

use std::fmt;

use serde::{Deserialize, Serialize};

pub const TILE_COUNT: u8 = 11;

/// Edge midpoint of a tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    N,
    E,
    S,
    W,
}

impl Side {
    /// Clockwise order starting at north.
    pub const ALL: [Side; 4] = [Side::N, Side::E, Side::S, Side::W];

    pub fn opposite(self) -> Side {
        match self {
            Side::N => Side::S,
            Side::E => Side::W,
            Side::S => Side::N,
            Side::W => Side::E,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Outward unit vector with x pointing east and y pointing north.
    pub fn vector(self) -> (i32, i32) {
        match self {
            Side::N => (0, 1),
            Side::E => (1, 0),
            Side::S => (0, -1),
            Side::W => (-1, 0),
        }
    }

    /// (row, col) offset of the neighbouring cell across this side.
    pub fn offset(self) -> (isize, isize) {
        match self {
            Side::N => (-1, 0),
            Side::E => (0, 1),
            Side::S => (1, 0),
            Side::W => (0, -1),
        }
    }

    pub fn axis(self) -> Axis {
        match self {
            Side::E | Side::W => Axis::Horizontal,
            Side::N | Side::S => Axis::Vertical,
        }
    }

    /// Quarter turn clockwise.
    pub fn rotate_cw(self) -> Side {
        match self {
            Side::N => Side::E,
            Side::E => Side::S,
            Side::S => Side::W,
            Side::W => Side::N,
        }
    }

    /// Mirror across the vertical axis (west and east swap).
    pub fn flip_horizontal(self) -> Side {
        match self {
            Side::E => Side::W,
            Side::W => Side::E,
            s => s,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Horizontal,
    Vertical,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::Horizontal => Axis::Vertical,
            Axis::Vertical => Axis::Horizontal,
        }
    }
}

use Side::{E, N, S, W};

const CONNECTIONS: [&[(Side, Side)]; TILE_COUNT as usize] = [
    &[],
    &[(W, S)],
    &[(S, E)],
    &[(E, N)],
    &[(N, W)],
    &[(W, E)],
    &[(N, S)],
    &[(W, S), (E, N)],
    &[(S, E), (N, W)],
    &[(W, E), (N, S)],
    &[(W, E), (N, S)],
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tile(u8);

impl Tile {
    pub const BLANK: Tile = Tile(0);
    pub const CROSS_H: Tile = Tile(9);
    pub const CROSS_V: Tile = Tile(10);

    pub fn new(id: u8) -> Option<Tile> {
        (id < TILE_COUNT).then_some(Tile(id))
    }

    pub fn all() -> impl Iterator<Item = Tile> {
        (0..TILE_COUNT).map(Tile)
    }

    pub fn id(self) -> u8 {
        self.0
    }

    pub fn connections(self) -> &'static [(Side, Side)] {
        CONNECTIONS[self.0 as usize]
    }

    pub fn has(self, side: Side) -> bool {
        self.connections()
            .iter()
            .any(|&(a, b)| a == side || b == side)
    }

    /// The side joined to `side` inside this tile.
    pub fn partner(self, side: Side) -> Option<Side> {
        self.connections().iter().find_map(|&(a, b)| {
            if a == side {
                Some(b)
            } else if b == side {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Over-strand axis, for the two crossing tiles only.
    pub fn crossing_over(self) -> Option<Axis> {
        match self.0 {
            9 => Some(Axis::Horizontal),
            10 => Some(Axis::Vertical),
            _ => None,
        }
    }

    pub fn is_crossing(self) -> bool {
        self.crossing_over().is_some()
    }

    /// Bitmask of occupied sides, bit i for `Side::ALL[i]`.
    pub fn side_mask(self) -> u8 {
        Side::ALL
            .iter()
            .filter(|s| self.has(**s))
            .fold(0, |m, s| m | 1 << s.index())
    }

    fn from_geometry(pairs: &[(Side, Side)], over: Option<Axis>) -> Tile {
        let norm = |p: &[(Side, Side)]| {
            let mut v: Vec<(Side, Side)> = p
                .iter()
                .map(|&(a, b)| if a <= b { (a, b) } else { (b, a) })
                .collect();
            v.sort();
            v
        };
        let want = norm(pairs);
        Tile::all()
            .find(|t| norm(t.connections()) == want && t.crossing_over() == over)
            .expect("tile set is closed under the square's symmetries")
    }

    /// The tile turned a quarter turn clockwise.
    pub fn rotate_cw(self) -> Tile {
        let pairs: Vec<_> = self
            .connections()
            .iter()
            .map(|&(a, b)| (a.rotate_cw(), b.rotate_cw()))
            .collect();
        Tile::from_geometry(&pairs, self.crossing_over().map(Axis::other))
    }

    /// The tile mirrored west–east. Over/under information is kept.
    pub fn flip_horizontal(self) -> Tile {
        let pairs: Vec<_> = self
            .connections()
            .iter()
            .map(|&(a, b)| (a.flip_horizontal(), b.flip_horizontal()))
            .collect();
        Tile::from_geometry(&pairs, self.crossing_over())
    }

    /// Crossing tiles swap over and under; everything else is unchanged.
    pub fn mirror_crossing(self) -> Tile {
        match self.0 {
            9 => Tile::CROSS_V,
            10 => Tile::CROSS_H,
            _ => self,
        }
    }

    /// Box-drawing glyph used by the text renderer.
    pub fn glyph(self) -> char {
        [' ', '┐', '┌', '└', '┘', '─', '│', '⟋', '⟍', '┿', '╂'][self.0 as usize]
    }
}

impl fmt::Display for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eleven_tiles_with_expected_shapes() {
        assert_eq!(Tile::all().count(), 11);
        let counts: Vec<usize> = Tile::all().map(|t| t.connections().len()).collect();
        assert_eq!(counts, vec![0, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2]);
        assert_eq!(Tile::all().filter(|t| t.is_crossing()).count(), 2);
        // each side used at most once per tile
        for t in Tile::all() {
            for s in Side::ALL {
                let uses = t
                    .connections()
                    .iter()
                    .filter(|&&(a, b)| a == s || b == s)
                    .count();
                assert!(uses <= 1, "tile {t} side {s:?}");
            }
        }
    }

    #[test]
    fn rotation_has_order_four_and_swaps_crossings() {
        for t in Tile::all() {
            let r = t.rotate_cw().rotate_cw().rotate_cw().rotate_cw();
            assert_eq!(r, t);
            assert_eq!(t.flip_horizontal().flip_horizontal(), t);
        }
        assert_eq!(Tile::CROSS_H.rotate_cw(), Tile::CROSS_V);
        assert_eq!(Tile(1).rotate_cw(), Tile(4));
        assert_eq!(Tile(7).rotate_cw(), Tile(8));
        assert_eq!(Tile(1).flip_horizontal(), Tile(2));
    }

    #[test]
    fn partner_lookup() {
        assert_eq!(Tile(7).partner(Side::E), Some(Side::N));
        assert_eq!(Tile(9).partner(Side::N), Some(Side::S));
        assert_eq!(Tile(3).partner(Side::W), None);
        assert_eq!(Tile::new(11), None);
    }
}
