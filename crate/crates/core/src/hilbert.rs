//! Finite-support state vectors over labelled bases, the unitary permutation
//! action of a group acting on the labels, and diagonal observables built
//! from orbit partitions.
//!
//! Labels are strings. For mosaic states the label is the canonical text
//! encoding of the mosaic; for the general quantization of a set of motifs
//! acted on by a group, labels are opaque and the action is supplied by the
//! caller as a bijection on labels.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ambient::{self, AmbientError, MoveInstance, MoveTable, Orbit, OrbitSettings};
use crate::mosaic::{Mosaic, MosaicError, TILE_COUNT};

/// Absolute tolerance for inner-product comparisons.
pub const INNER_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HilbertError {
    #[error("basis label {label:?} is not a mosaic: {source}")]
    BadLabel { label: String, source: MosaicError },
    #[error("label {label:?} lives in the {found}x{found} lattice, expected {expected}x{expected}")]
    LatticeSize {
        label: String,
        expected: usize,
        found: usize,
    },
    #[error("action is not a permutation: {a:?} and {b:?} both map to {image:?}")]
    NotPermutation { a: String, b: String, image: String },
    #[error("invariant is not constant on the orbit of {first:?}: {first_value} at {first:?}, {second_value} at {second:?}")]
    NotOrbitConstant {
        first: String,
        first_value: f64,
        second: String,
        second_value: f64,
    },
    #[error(transparent)]
    Ambient(#[from] AmbientError),
    #[error("invalid state JSON: {0}")]
    Json(String),
    #[error("invariant evaluation failed: {0}")]
    Invariant(String),
}

/// Dimension 11^(n²) of the n×n mosaic space.
pub fn dim(n: usize) -> BigUint {
    BigUint::from(TILE_COUNT).pow((n * n) as u32)
}

/// A finite linear combination of basis labels. Zero amplitudes are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StateVector {
    amplitudes: BTreeMap<String, Complex64>,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    label: String,
    re: f64,
    im: f64,
}

impl StateVector {
    pub fn zero() -> StateVector {
        StateVector::default()
    }

    pub fn basis(label: impl Into<String>) -> StateVector {
        let mut s = StateVector::zero();
        s.add(label, Complex64::new(1.0, 0.0));
        s
    }

    pub fn mosaic(m: &Mosaic) -> StateVector {
        StateVector::basis(m.encode())
    }

    pub fn from_terms<I, L>(terms: I) -> StateVector
    where
        I: IntoIterator<Item = (L, Complex64)>,
        L: Into<String>,
    {
        let mut s = StateVector::zero();
        for (l, a) in terms {
            s.add(l, a);
        }
        s
    }

    /// Adds `amp` to the coefficient of `label`, dropping exact zeros.
    pub fn add(&mut self, label: impl Into<String>, amp: Complex64) {
        let label = label.into();
        let v = self.amplitudes.get(&label).copied().unwrap_or_default() + amp;
        if v == Complex64::new(0.0, 0.0) {
            self.amplitudes.remove(&label);
        } else {
            self.amplitudes.insert(label, v);
        }
    }

    pub fn amplitude(&self, label: &str) -> Complex64 {
        self.amplitudes.get(label).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Complex64)> {
        self.amplitudes.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn scale(&self, c: Complex64) -> StateVector {
        StateVector::from_terms(self.iter().map(|(l, a)| (l.to_string(), a * c)))
    }

    pub fn plus(&self, other: &StateVector) -> StateVector {
        let mut s = self.clone();
        for (l, a) in other.iter() {
            s.add(l, a);
        }
        s
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Hermitian inner product, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        let (small, large, conj_small) = if self.amplitudes.len() <= other.amplitudes.len() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        small
            .amplitudes
            .iter()
            .filter_map(|(k, a)| {
                large.amplitudes.get(k).map(|b| {
                    if conj_small {
                        a.conj() * b
                    } else {
                        b.conj() * a
                    }
                })
            })
            .sum()
    }

    /// Permutes labels by a bijection; refuses maps that collide on the support.
    pub fn permute<F>(&self, mut f: F) -> Result<StateVector, HilbertError>
    where
        F: FnMut(&str) -> Result<String, HilbertError>,
    {
        let mut out: BTreeMap<String, (String, Complex64)> = BTreeMap::new();
        for (l, a) in self.iter() {
            let image = f(l)?;
            if let Some((prev, _)) = out.get(&image) {
                return Err(HilbertError::NotPermutation {
                    a: prev.clone(),
                    b: l.to_string(),
                    image,
                });
            }
            out.insert(image, (l.to_string(), a));
        }
        Ok(StateVector {
            amplitudes: out.into_iter().map(|(k, (_, a))| (k, a)).collect(),
        })
    }

    pub fn to_json(&self) -> String {
        let entries: Vec<Entry> = self
            .iter()
            .map(|(l, a)| Entry {
                label: l.to_string(),
                re: a.re,
                im: a.im,
            })
            .collect();
        serde_json::to_string_pretty(&entries).expect("state serializes")
    }

    pub fn from_json(text: &str) -> Result<StateVector, HilbertError> {
        let entries: Vec<Entry> =
            serde_json::from_str(text).map_err(|e| HilbertError::Json(e.to_string()))?;
        Ok(StateVector::from_terms(
            entries
                .into_iter()
                .map(|e| (e.label, Complex64::new(e.re, e.im))),
        ))
    }
}

fn label_mosaic(label: &str) -> Result<Mosaic, HilbertError> {
    Mosaic::decode(label).map_err(|source| HilbertError::BadLabel {
        label: label.to_string(),
        source,
    })
}

/// Applies a sequence of move instances to every basis mosaic of `psi`.
pub fn act(moves: &[MoveInstance], psi: &StateVector) -> Result<StateVector, HilbertError> {
    let mut n = None;
    psi.permute(|label| {
        let m = label_mosaic(label)?;
        match n {
            None => n = Some(m.size()),
            Some(k) if k != m.size() => {
                return Err(HilbertError::LatticeSize {
                    label: label.to_string(),
                    expected: k,
                    found: m.size(),
                })
            }
            _ => {}
        }
        for mv in moves {
            if !mv.fits(m.size()) {
                return Err(AmbientError::AnchorOutOfRange {
                    row: mv.row,
                    col: mv.col,
                    rows: mv.template.rows,
                    cols: mv.template.cols,
                    n: m.size(),
                }
                .into());
            }
        }
        Ok(ambient::replay(&m, moves)?.encode())
    })
}

/// Quantization of a set of motifs acted on by a group: the group element is
/// given as a label bijection and extended linearly (hence unitarily).
pub fn act_on_motifs<F>(g: F, psi: &StateVector) -> Result<StateVector, HilbertError>
where
    F: Fn(&str) -> String,
{
    psi.permute(|l| Ok(g(l)))
}

/// One orbit of the materialized partition.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OrbitSummary {
    pub orbit_representative: String,
    pub eigenvalue: f64,
    pub orbit_size: usize,
}

type InvariantFn = dyn Fn(&Mosaic) -> Result<f64, HilbertError> + Send + Sync;

#[derive(Default)]
struct Partition {
    orbit_of: HashMap<Mosaic, usize>,
    orbits: Vec<(Arc<Orbit>, f64)>,
}

/// A real diagonal operator, constant on ambient-group orbits.
///
/// The orbit partition is materialized lazily: the orbit of a label is
/// computed the first time that label is queried and cached behind a
/// read-mostly lock, so lookups from several threads are safe and the
/// eigenvalues never depend on query order.
pub struct DiagonalObservable {
    table: Arc<MoveTable>,
    settings: OrbitSettings,
    n: usize,
    kind: ObservableKind,
    cache: RwLock<Partition>,
}

enum ObservableKind {
    /// Eigenvalue 1 on one fixed orbit, 0 elsewhere.
    Characteristic(Arc<Orbit>),
    /// Eigenvalue inv(representative) on each orbit.
    Invariant(Box<InvariantFn>),
}

impl DiagonalObservable {
    /// Projector onto the orbit of `k`.
    pub fn chi(
        k: &Mosaic,
        table: Arc<MoveTable>,
        settings: OrbitSettings,
    ) -> Result<DiagonalObservable, HilbertError> {
        let o = Arc::new(ambient::orbit(k, &table, settings)?);
        let mut part = Partition::default();
        for m in o.members() {
            part.orbit_of.insert(m.clone(), 0);
        }
        part.orbits.push((o.clone(), 1.0));
        Ok(DiagonalObservable {
            table,
            settings,
            n: k.size(),
            kind: ObservableKind::Characteristic(o),
            cache: RwLock::new(part),
        })
    }

    /// The observable whose eigenvalue on each orbit is `inv` of its members.
    /// `inv` is checked to be constant on every orbit that gets materialized.
    pub fn invariant<F>(
        inv: F,
        n: usize,
        table: Arc<MoveTable>,
        settings: OrbitSettings,
    ) -> DiagonalObservable
    where
        F: Fn(&Mosaic) -> Result<f64, HilbertError> + Send + Sync + 'static,
    {
        DiagonalObservable {
            table,
            settings,
            n,
            kind: ObservableKind::Invariant(Box::new(inv)),
            cache: RwLock::new(Partition::default()),
        }
    }

    pub fn lattice(&self) -> usize {
        self.n
    }

    /// Eigenvalue on a basis mosaic.
    pub fn eigenvalue(&self, m: &Mosaic) -> Result<f64, HilbertError> {
        if m.size() != self.n {
            return Err(HilbertError::LatticeSize {
                label: m.encode(),
                expected: self.n,
                found: m.size(),
            });
        }
        if let ObservableKind::Characteristic(o) = &self.kind {
            return Ok(if o.contains(m) { 1.0 } else { 0.0 });
        }
        {
            let part = self.cache.read().expect("observable cache poisoned");
            if let Some(&i) = part.orbit_of.get(m) {
                return Ok(part.orbits[i].1);
            }
        }
        let ObservableKind::Invariant(inv) = &self.kind else {
            unreachable!()
        };
        let o = ambient::orbit(m, &self.table, self.settings)?;
        let rep = o.representative();
        let value = inv(rep)?;
        for other in o.members() {
            let v = inv(other)?;
            if v != value {
                return Err(HilbertError::NotOrbitConstant {
                    first: rep.encode(),
                    first_value: value,
                    second: other.encode(),
                    second_value: v,
                });
            }
        }
        let mut part = self.cache.write().expect("observable cache poisoned");
        // another thread may have won the race; its answer is identical
        if let Some(&i) = part.orbit_of.get(m) {
            return Ok(part.orbits[i].1);
        }
        let id = part.orbits.len();
        for member in o.members() {
            part.orbit_of.insert(member.clone(), id);
        }
        part.orbits.push((Arc::new(o), value));
        Ok(value)
    }

    /// Applies the operator to a state of mosaic labels.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector, HilbertError> {
        let mut out = StateVector::zero();
        for (label, a) in psi.iter() {
            let m = label_mosaic(label)?;
            let lambda = self.eigenvalue(&m)?;
            out.add(label, a * lambda);
        }
        Ok(out)
    }

    /// ⟨ψ|O|ψ⟩ / ⟨ψ|ψ⟩.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64, HilbertError> {
        let o = self.apply(psi)?;
        Ok(psi.inner(&o).re / psi.norm_sqr())
    }

    /// Orbits materialized so far, sorted by representative encoding.
    pub fn export(&self) -> Vec<OrbitSummary> {
        let part = self.cache.read().expect("observable cache poisoned");
        let mut out: Vec<OrbitSummary> = part
            .orbits
            .iter()
            .map(|(o, v)| OrbitSummary {
                orbit_representative: o.representative().encode(),
                eigenvalue: *v,
                orbit_size: o.len(),
            })
            .collect();
        out.sort_by(|a, b| a.orbit_representative.cmp(&b.orbit_representative));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mosaic::library::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dimensions() {
        assert_eq!(dim(1), BigUint::from(11u32));
        assert_eq!(dim(2), BigUint::from(14641u32));
        assert_eq!(dim(3), BigUint::from(2357947691u64));
    }

    #[test]
    fn inner_products() {
        let k = StateVector::mosaic(&trefoil());
        let k2 = StateVector::mosaic(&circle_at(4, 0, 0));
        assert_eq!(k.inner(&k), c(1.0, 0.0));
        assert_eq!(k.inner(&k2), c(0.0, 0.0));
        assert_eq!(k.scale(c(0.0, 1.0)).inner(&k), c(0.0, -1.0));
    }

    #[test]
    fn zero_amplitudes_are_dropped() {
        let mut s = StateVector::basis("a");
        s.add("a", c(-1.0, 0.0));
        assert!(s.is_zero());
        let t = StateVector::basis("b").scale(c(0.0, 0.0));
        assert_eq!(t.support_len(), 0);
    }

    #[test]
    fn motif_action_must_be_a_permutation() {
        let s = StateVector::from_terms([("x", c(1.0, 0.0)), ("y", c(0.0, 1.0))]);
        let swapped = act_on_motifs(|l| if l == "x" { "y".into() } else { "x".into() }, &s).unwrap();
        assert_eq!(swapped.amplitude("y"), c(1.0, 0.0));
        assert!(matches!(
            act_on_motifs(|_| "z".into(), &s),
            Err(HilbertError::NotPermutation { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let s = StateVector::from_terms([("2\n2 1\n3 4\n", c(0.6, 0.0)), ("1\n0\n", c(0.0, 0.8))]);
        assert_eq!(StateVector::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn act_rejects_mixed_lattices() {
        let s = StateVector::from_terms([
            (Mosaic::blank(2).encode(), c(1.0, 0.0)),
            (Mosaic::blank(3).encode(), c(1.0, 0.0)),
        ]);
        assert!(matches!(act(&[], &s), Err(HilbertError::LatticeSize { .. })));
    }
}
