//! The ambient group: local tile-rewrite moves acting as permutations of the
//! suitably connected mosaics of a fixed lattice, and orbit enumeration.
//!
//! Moves are data. A [`MoveTemplate`] is an unordered pair of equally shaped
//! sub-blocks exposing identical boundary connection points; applying it at
//! an anchor swaps one pattern for the other, so every generator is an
//! involution and validity is preserved.

pub mod pattern;
mod table;

pub use table::{default_table_json, default_templates, MoveTable, DEFAULT_TABLE_JSON};

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mosaic::{Mosaic, MosaicError};
use crate::par::Execution;

/// Default cap on orbit size.
pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AmbientError {
    #[error("move template {name:?}: {reason}")]
    BadTemplate { name: String, reason: String },
    #[error("anchor ({row}, {col}) puts a {rows}x{cols} block outside the {n}x{n} lattice")]
    AnchorOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
        n: usize,
    },
    #[error("orbit exceeded the budget of {budget} members (partial orbit has {explored})")]
    BudgetExceeded { budget: usize, explored: usize },
    #[error("lattice sizes differ ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error(transparent)]
    Mosaic(#[from] MosaicError),
    #[error("invalid move table JSON: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveTemplate {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub pattern_a: Vec<u8>,
    pub pattern_b: Vec<u8>,
}

impl MoveTemplate {
    /// Checks shape, tile ids, internal consistency and boundary signatures.
    pub fn check(&self) -> Result<(), AmbientError> {
        let bad = |reason: &str| AmbientError::BadTemplate {
            name: self.name.clone(),
            reason: reason.to_string(),
        };
        if self.rows == 0 || self.cols == 0 || self.rows > 3 || self.cols > 3 {
            return Err(bad("shape must be between 1x1 and 3x3"));
        }
        let len = self.rows * self.cols;
        if self.pattern_a.len() != len || self.pattern_b.len() != len {
            return Err(bad("pattern length does not match shape"));
        }
        if self.pattern_a == self.pattern_b {
            return Err(bad("patterns are identical"));
        }
        for p in [&self.pattern_a, &self.pattern_b] {
            if !pattern::internally_consistent(self.rows, self.cols, p) {
                return Err(bad("pattern has a malformed tile id or an unmatched interior edge"));
            }
        }
        if pattern::boundary_signature(self.rows, self.cols, &self.pattern_a)
            != pattern::boundary_signature(self.rows, self.cols, &self.pattern_b)
        {
            return Err(bad("patterns expose different boundary connection points"));
        }
        Ok(())
    }

    pub fn at(&self, row: usize, col: usize) -> MoveInstance {
        MoveInstance {
            template: self.clone(),
            row,
            col,
        }
    }
}

/// A template placed at an anchor (top-left corner of the sub-block).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveInstance {
    pub template: MoveTemplate,
    pub row: usize,
    pub col: usize,
}

impl MoveInstance {
    pub fn fits(&self, n: usize) -> bool {
        self.row + self.template.rows <= n && self.col + self.template.cols <= n
    }

    /// Swaps pattern a for pattern b (or b for a) when the block matches;
    /// otherwise returns the mosaic unchanged.
    pub fn apply(&self, m: &Mosaic) -> Result<Mosaic, AmbientError> {
        let t = &self.template;
        if !self.fits(m.size()) {
            return Err(AmbientError::AnchorOutOfRange {
                row: self.row,
                col: self.col,
                rows: t.rows,
                cols: t.cols,
                n: m.size(),
            });
        }
        let block = m.block(self.row, self.col, t.rows, t.cols);
        let replacement = if block == t.pattern_a {
            &t.pattern_b
        } else if block == t.pattern_b {
            &t.pattern_a
        } else {
            return Ok(m.clone());
        };
        let mut out = m.clone();
        out.write_block(self.row, self.col, t.cols, replacement);
        Ok(out)
    }
}

/// Compact witness step used internally: (template index, row, col).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MoveRef {
    pub template: u32,
    pub row: u16,
    pub col: u16,
}

#[derive(Clone, Copy, Debug)]
pub struct OrbitSettings {
    pub budget: usize,
    pub execution: Execution,
}

impl Default for OrbitSettings {
    fn default() -> Self {
        OrbitSettings {
            budget: DEFAULT_BUDGET,
            execution: Execution::default(),
        }
    }
}

/// A complete orbit under every move instance of a table.
#[derive(Clone, Debug)]
pub struct Orbit {
    members: Vec<Mosaic>,
    index: HashMap<Mosaic, usize>,
    parent: Vec<Option<(usize, MoveRef)>>,
}

impl Orbit {
    pub fn representative(&self) -> &Mosaic {
        &self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: &Mosaic) -> bool {
        self.index.contains_key(m)
    }

    /// Members in discovery (breadth-first) order.
    pub fn members(&self) -> &[Mosaic] {
        &self.members
    }

    /// Canonical keys (the text encodings) of all members, sorted.
    pub fn keys(&self) -> BTreeSet<String> {
        self.members.iter().map(Mosaic::encode).collect()
    }

    /// Move sequence carrying the representative to `m`.
    pub fn witness(&self, m: &Mosaic, table: &MoveTable) -> Option<Vec<MoveInstance>> {
        let mut at = *self.index.get(m)?;
        let mut steps = Vec::new();
        while let Some((p, mv)) = self.parent[at] {
            steps.push(table.instance(mv));
            at = p;
        }
        steps.reverse();
        Some(steps)
    }
}

struct Search<'a> {
    table: &'a MoveTable,
    settings: OrbitSettings,
    members: Vec<Mosaic>,
    index: HashMap<Mosaic, usize>,
    parent: Vec<Option<(usize, MoveRef)>>,
}

impl<'a> Search<'a> {
    fn new(start: &Mosaic, table: &'a MoveTable, settings: OrbitSettings) -> Self {
        let mut index = HashMap::new();
        index.insert(start.clone(), 0);
        Search {
            table,
            settings,
            members: vec![start.clone()],
            index,
            parent: vec![None],
        }
    }

    /// Runs breadth-first levels until closure, or until `target` is reached.
    ///
    /// Neighbour generation for a level runs under the configured execution;
    /// insertion is a sequential pass in frontier order, so discovery order
    /// and witnesses match a single-threaded search exactly.
    fn run(&mut self, target: Option<&Mosaic>) -> Result<Option<usize>, AmbientError> {
        if let Some(t) = target {
            if let Some(&i) = self.index.get(t) {
                return Ok(Some(i));
            }
        }
        let mut level = 0..1;
        while !level.is_empty() {
            let frontier = &self.members[level.clone()];
            let table = self.table;
            let expanded = self
                .settings
                .execution
                .map_slice(frontier, |m| table.neighbors(m));
            let next_start = self.members.len();
            for (offset, neighbors) in expanded.into_iter().enumerate() {
                let from = level.start + offset;
                for (m, mv) in neighbors {
                    if self.index.contains_key(&m) {
                        continue;
                    }
                    if self.members.len() >= self.settings.budget {
                        return Err(AmbientError::BudgetExceeded {
                            budget: self.settings.budget,
                            explored: self.members.len(),
                        });
                    }
                    let i = self.members.len();
                    let hit = target == Some(&m);
                    self.index.insert(m.clone(), i);
                    self.members.push(m);
                    self.parent.push(Some((from, mv)));
                    if hit {
                        return Ok(Some(i));
                    }
                }
            }
            level = next_start..self.members.len();
        }
        Ok(None)
    }
}

/// Breadth-first closure of `{m}` under every instance of every template.
pub fn orbit(m: &Mosaic, table: &MoveTable, settings: OrbitSettings) -> Result<Orbit, AmbientError> {
    m.ensure_valid()?;
    let mut search = Search::new(m, table, settings);
    search.run(None)?;
    Ok(Orbit {
        members: search.members,
        index: search.index,
        parent: search.parent,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SameOrbit {
    pub same: bool,
    /// Replays `a` to `b` through [`MoveInstance::apply`] when `same` holds.
    pub witness: Option<Vec<MoveInstance>>,
}

/// Decides whether `b` lies in the orbit of `a`, with a witness when it does.
pub fn same_orbit(
    a: &Mosaic,
    b: &Mosaic,
    table: &MoveTable,
    settings: OrbitSettings,
) -> Result<SameOrbit, AmbientError> {
    if a.size() != b.size() {
        return Err(AmbientError::SizeMismatch(a.size(), b.size()));
    }
    a.ensure_valid()?;
    b.ensure_valid()?;
    let mut search = Search::new(a, table, settings);
    match search.run(Some(b))? {
        Some(mut at) => {
            let mut steps = Vec::new();
            while let Some((p, mv)) = search.parent[at] {
                steps.push(table.instance(mv));
                at = p;
            }
            steps.reverse();
            Ok(SameOrbit {
                same: true,
                witness: Some(steps),
            })
        }
        None => Ok(SameOrbit {
            same: false,
            witness: None,
        }),
    }
}

/// Applies a move sequence in order.
pub fn replay(m: &Mosaic, moves: &[MoveInstance]) -> Result<Mosaic, AmbientError> {
    moves.iter().try_fold(m.clone(), |acc, mv| mv.apply(&acc))
}
