//! Wirtinger presentations of knot groups and the library of complex fields
//! whose zero sets on the three-sphere are knots.

mod fields;

pub use fields::{phase, ComplexField, FieldKind, DEFAULT_PHASE_TOL};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::invariants::{PlanarDiagram, UnionFind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("Wirtinger presentations need a knot, got {0} components")]
    NotAKnot(usize),
    #[error("unknown field {0:?} (expected unknot, milnor:p,q, rudolph_F or rudolph_G)")]
    UnknownField(String),
    #[error("bad field parameters: {0}")]
    BadParameters(String),
    #[error("phase is undefined at a point where |f| = {modulus:e} <= {tol:e}")]
    UndefinedPhase { modulus: f64, tol: f64 },
}

/// A letter g_i^(±1) of a group word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        Letter { generator, inverse }
    }
}

/// A finite group presentation ⟨g_1..g_n | r_1..r_m⟩ with word relators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<Vec<Letter>>,
}

impl Presentation {
    /// Exponent sum of every generator in a relator.
    pub fn exponent_sums(&self, relator: &[Letter]) -> Vec<i64> {
        let mut v = vec![0; self.generators];
        for l in relator {
            v[l.generator] += if l.inverse { -1 } else { 1 };
        }
        v
    }

    /// Adds the relator g_i = 1.
    pub fn with_trivial_generator(&self, i: usize) -> Presentation {
        let mut p = self.clone();
        p.relators.push(vec![Letter::new(i, false)]);
        p
    }

    /// Image of a relator under the map sending every generator to t,
    /// as the exponent of t.
    pub fn degree_under_t(&self, relator: &[Letter]) -> i64 {
        self.exponent_sums(relator).iter().sum()
    }
}

/// Rank of the free part of the abelianized group: generators minus the
/// rank of the integer exponent-sum matrix.
pub fn abelianization_rank(p: &Presentation) -> usize {
    let rows: Vec<Vec<i64>> = p.relators.iter().map(|r| p.exponent_sums(r)).collect();
    p.generators - integer_rank(rows, p.generators)
}

/// Rank over Q by fraction-free elimination (gcd-normalized rows).
fn integer_rank(mut rows: Vec<Vec<i64>>, cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r == rank || rows[r][col] == 0 {
                continue;
            }
            let (a, b) = (rows[rank][col], rows[r][col]);
            let pivot_row = rows[rank].clone();
            for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                *x = *x * a - *y * b;
            }
            let g = rows[r].iter().fold(0i64, |g, &x| gcd(g, x.abs()));
            if g > 1 {
                rows[r].iter_mut().for_each(|x| *x /= g);
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One Wirtinger relation a_output = a_over⁻¹ · a_input · a_over (0-based arcs).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WirtingerRelation {
    pub output: usize,
    pub over: usize,
    pub input: usize,
}

impl WirtingerRelation {
    /// The boundary word c⁻¹ b⁻¹ a b with c output, b over, a input.
    pub fn relator(&self) -> Vec<Letter> {
        vec![
            Letter::new(self.output, true),
            Letter::new(self.over, true),
            Letter::new(self.input, false),
            Letter::new(self.over, false),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WirtingerPresentation {
    pub arcs: usize,
    pub relations: Vec<WirtingerRelation>,
}

impl WirtingerPresentation {
    pub fn presentation(&self) -> Presentation {
        Presentation {
            generators: self.arcs,
            relators: self.relations.iter().map(WirtingerRelation::relator).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for WirtingerPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arcs == 1 {
            writeln!(f, "gens: a1")?;
        } else {
            writeln!(f, "gens: a1..a{}", self.arcs)?;
        }
        for (i, r) in self.relations.iter().enumerate() {
            writeln!(
                f,
                "rel {}: a{} = a{}^-1 a{} a{}",
                i + 1,
                r.output + 1,
                r.over + 1,
                r.input + 1,
                r.over + 1
            )?;
        }
        Ok(())
    }
}

/// Wirtinger presentation of a knot diagram.
///
/// Arcs are maximal over-passages, numbered by their lowest edge label. At
/// each crossing the input arc is the incoming under-arc when the over
/// strand runs from left to right as seen along the under strand, which is
/// the case at positive crossings; at negative crossings the roles of the
/// two under-arcs swap.
pub fn wirtinger(d: &PlanarDiagram) -> Result<WirtingerPresentation, ClassifyError> {
    if d.component_count() != 1 {
        return Err(ClassifyError::NotAKnot(d.component_count()));
    }
    let pd = d.pd();
    if pd.is_empty() {
        return Ok(WirtingerPresentation {
            arcs: 1,
            relations: vec![],
        });
    }
    let edges = 2 * pd.len();
    let mut uf = UnionFind::new(edges);
    for x in &pd {
        uf.union(x.over_in() - 1, x.over_out() - 1);
    }
    let mut label: BTreeMap<usize, usize> = BTreeMap::new();
    for e in 0..edges {
        let root = uf.find(e);
        let next = label.len();
        label.entry(root).or_insert(next);
    }
    let mut arc = |e: usize| label[&uf.find(e - 1)];
    let relations = pd
        .iter()
        .map(|x| {
            let (under_in, under_out) = (arc(x.edges[0]), arc(x.edges[2]));
            let over = arc(x.over_in());
            let (input, output) = if x.sign > 0 {
                (under_in, under_out)
            } else {
                (under_out, under_in)
            };
            WirtingerRelation { output, over, input }
        })
        .collect();
    Ok(WirtingerPresentation {
        arcs: label.len(),
        relations,
    })
}
