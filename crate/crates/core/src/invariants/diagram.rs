//! Oriented knot and link diagrams.
//!
//! A diagram is stored as a signed Gauss code: for each component with at
//! least one crossing, the cyclic list of crossings it passes through with
//! over/under flags, plus one sign per crossing and a count of crossingless
//! components. Planar-diagram (PD) quadruples are derived from it on demand.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::InvariantError;
use crate::mosaic::{trace_components, Mosaic};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussPassage {
    pub crossing: usize,
    pub over: bool,
}

/// One crossing in PD form. `edges` are listed counterclockwise starting
/// from the incoming under-edge: `[under_in, _, under_out, _]`. For a
/// positive crossing slot 1 is the outgoing over-edge, for a negative one it
/// is the incoming over-edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PdCrossing {
    pub edges: [usize; 4],
    pub sign: i8,
}

impl PdCrossing {
    pub fn over_in(&self) -> usize {
        if self.sign > 0 {
            self.edges[3]
        } else {
            self.edges[1]
        }
    }

    pub fn over_out(&self) -> usize {
        if self.sign > 0 {
            self.edges[1]
        } else {
            self.edges[3]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanarDiagram {
    components: Vec<Vec<GaussPassage>>,
    signs: Vec<i8>,
    free_loops: usize,
}

impl PlanarDiagram {
    /// Checks that every crossing is passed exactly once over and once under.
    pub fn new(
        components: Vec<Vec<GaussPassage>>,
        signs: Vec<i8>,
        free_loops: usize,
    ) -> Result<PlanarDiagram, InvariantError> {
        let mut seen = vec![[0usize; 2]; signs.len()];
        for p in components.iter().flatten() {
            let slot = seen
                .get_mut(p.crossing)
                .ok_or_else(|| InvariantError::Malformed(format!("crossing {} has no sign", p.crossing)))?;
            slot[p.over as usize] += 1;
        }
        if let Some(x) = seen.iter().position(|s| *s != [1, 1]) {
            return Err(InvariantError::Malformed(format!(
                "crossing {x} must be passed once over and once under"
            )));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(InvariantError::Malformed("signs must be +1 or -1".into()));
        }
        if components.iter().any(Vec::is_empty) {
            return Err(InvariantError::Malformed("empty component in Gauss code".into()));
        }
        Ok(PlanarDiagram {
            components,
            signs,
            free_loops,
        })
    }

    pub fn unknot() -> PlanarDiagram {
        PlanarDiagram {
            components: vec![],
            signs: vec![],
            free_loops: 1,
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.signs.len()
    }

    pub fn component_count(&self) -> usize {
        self.components.len() + self.free_loops
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn gauss_code(&self) -> &[Vec<GaussPassage>] {
        &self.components
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn writhe(&self) -> i32 {
        self.signs.iter().map(|&s| s as i32).sum()
    }

    /// Swaps over and under everywhere.
    pub fn mirror(&self) -> PlanarDiagram {
        PlanarDiagram {
            components: self
                .components
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|p| GaussPassage {
                            crossing: p.crossing,
                            over: !p.over,
                        })
                        .collect()
                })
                .collect(),
            signs: self.signs.iter().map(|s| -s).collect(),
            free_loops: self.free_loops,
        }
    }

    /// Edge ids are 1-based and run consecutively along each component;
    /// edge `k` of a component leaves its k-th passage.
    pub fn pd(&self) -> Vec<PdCrossing> {
        let c = self.signs.len();
        let mut under_in = vec![0; c];
        let mut under_out = vec![0; c];
        let mut over_in = vec![0; c];
        let mut over_out = vec![0; c];
        let mut next = 1;
        for comp in &self.components {
            let first = next;
            let len = comp.len();
            for (j, p) in comp.iter().enumerate() {
                let incoming = if j == 0 { first + len - 1 } else { first + j - 1 };
                let outgoing = first + j;
                if p.over {
                    over_in[p.crossing] = incoming;
                    over_out[p.crossing] = outgoing;
                } else {
                    under_in[p.crossing] = incoming;
                    under_out[p.crossing] = outgoing;
                }
            }
            next += len;
        }
        (0..c)
            .map(|x| {
                let sign = self.signs[x];
                let edges = if sign > 0 {
                    [under_in[x], over_out[x], under_out[x], over_in[x]]
                } else {
                    [under_in[x], over_in[x], under_out[x], over_out[x]]
                };
                PdCrossing { edges, sign }
            })
            .collect()
    }

    /// `PD[X[a,b,c,d], ...]`; crossingless components are not representable
    /// and are dropped.
    pub fn pd_text(&self) -> String {
        let xs: Vec<String> = self
            .pd()
            .iter()
            .map(|x| format!("X[{},{},{},{}]", x.edges[0], x.edges[1], x.edges[2], x.edges[3]))
            .collect();
        format!("PD[{}]", xs.join(", "))
    }

    /// Parses `PD[X[..], ..]` (the wrapper is optional). Orientation follows
    /// the edge numbering, so each component must carry consecutive labels.
    pub fn from_pd_text(text: &str) -> Result<PlanarDiagram, InvariantError> {
        let body = text.trim();
        let body = body
            .strip_prefix("PD[")
            .and_then(|b| b.strip_suffix(']'))
            .unwrap_or(body);
        let mut quads = Vec::new();
        let mut rest = body.trim();
        while !rest.is_empty() {
            let r = rest
                .strip_prefix("X[")
                .ok_or_else(|| InvariantError::Parse(format!("expected X[ at {rest:?}")))?;
            let end = r
                .find(']')
                .ok_or_else(|| InvariantError::Parse("unterminated X[".into()))?;
            let nums: Result<Vec<usize>, _> = r[..end].split(',').map(|s| s.trim().parse()).collect();
            let nums = nums.map_err(|e| InvariantError::Parse(format!("bad edge label: {e}")))?;
            if nums.len() != 4 {
                return Err(InvariantError::Parse(format!(
                    "crossing needs 4 edge labels, found {}",
                    nums.len()
                )));
            }
            quads.push([nums[0], nums[1], nums[2], nums[3]]);
            rest = r[end + 1..].trim_start().trim_start_matches(',').trim_start();
        }
        PlanarDiagram::from_pd(&quads)
    }

    /// Builds a diagram from PD quadruples, inferring each sign from the
    /// edge numbering of the over strand.
    pub fn from_pd(quads: &[[usize; 4]]) -> Result<PlanarDiagram, InvariantError> {
        let pd: Vec<PdCrossing> = quads
            .iter()
            .map(|&[i, j, k, l]| {
                let positive = i == j || k == l || j == l + 1 || l > j + 1;
                PdCrossing {
                    edges: [i, j, k, l],
                    sign: if positive { 1 } else { -1 },
                }
            })
            .collect();
        PlanarDiagram::from_signed_pd(&pd)
    }

    /// Recovers the Gauss code of a signed PD by following edges head to tail.
    pub fn from_signed_pd(pd: &[PdCrossing]) -> Result<PlanarDiagram, InvariantError> {
        // edge -> (crossing, over) where the edge ends, and where it starts
        let mut head: BTreeMap<usize, (usize, bool)> = BTreeMap::new();
        let mut tail: BTreeMap<usize, (usize, bool)> = BTreeMap::new();
        let dup = |e: usize| InvariantError::Malformed(format!("edge {e} does not appear exactly twice with opposite roles"));
        for (x, c) in pd.iter().enumerate() {
            for (e, over, into) in [
                (c.edges[0], false, true),
                (c.edges[2], false, false),
                (c.over_in(), true, true),
                (c.over_out(), true, false),
            ] {
                let map = if into { &mut head } else { &mut tail };
                if map.insert(e, (x, over)).is_some() {
                    return Err(dup(e));
                }
            }
        }
        if head.len() != tail.len() || head.keys().zip(tail.keys()).any(|(a, b)| a != b) {
            let e = head
                .keys()
                .find(|e| !tail.contains_key(e))
                .or_else(|| tail.keys().find(|e| !head.contains_key(e)))
                .copied()
                .unwrap_or(0);
            return Err(dup(e));
        }
        let mut visited = BTreeMap::new();
        let mut components = Vec::new();
        for &start in head.keys() {
            if visited.contains_key(&start) {
                continue;
            }
            let out_edge = |(x, over): (usize, bool)| if over { pd[x].over_out() } else { pd[x].edges[2] };
            let first = tail[&start];
            let mut comp = Vec::new();
            let mut at = first;
            loop {
                comp.push(GaussPassage { crossing: at.0, over: at.1 });
                let e = out_edge(at);
                visited.insert(e, ());
                at = head[&e];
                if at == first {
                    break;
                }
            }
            components.push(comp);
        }
        PlanarDiagram::new(components, pd.iter().map(|c| c.sign).collect(), 0)
    }

    /// Reads a diagram off a valid mosaic.
    ///
    /// Crossings are numbered by cell index; each component is oriented by
    /// the strand traversal convention of the mosaic tracer.
    pub fn from_mosaic(m: &Mosaic) -> Result<PlanarDiagram, InvariantError> {
        let strands = trace_components(m)?;
        if strands.is_empty() {
            return Err(InvariantError::NoComponents);
        }
        let crossing_cells: Vec<usize> = m
            .cells()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 9 || c == 10)
            .map(|(i, _)| i)
            .collect();
        let id_of: BTreeMap<usize, usize> = crossing_cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut over_dir = vec![(0, 0); crossing_cells.len()];
        let mut under_dir = vec![(0, 0); crossing_cells.len()];
        let mut components = Vec::new();
        let mut free_loops = 0;
        for s in &strands {
            let comp: Vec<GaussPassage> = s
                .crossings()
                .map(|p| {
                    let x = id_of[&p.cell];
                    let over = p.over == Some(true);
                    if over {
                        over_dir[x] = p.direction();
                    } else {
                        under_dir[x] = p.direction();
                    }
                    GaussPassage { crossing: x, over }
                })
                .collect();
            if comp.is_empty() {
                free_loops += 1;
            } else {
                components.push(comp);
            }
        }
        let signs = (0..crossing_cells.len())
            .map(|x| crate::mosaic::crossing_sign(over_dir[x], under_dir[x]))
            .collect();
        PlanarDiagram::new(components, signs, free_loops)
    }

    /// Faces of the diagram on the sphere, each as a cyclic list of
    /// (crossing, slot) corners. Free loops are ignored.
    pub fn faces(&self) -> Vec<Vec<(usize, usize)>> {
        let pd = self.pd();
        let mut ends: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (x, c) in pd.iter().enumerate() {
            for (i, &e) in c.edges.iter().enumerate() {
                ends.entry(e).or_default().push((x, i));
            }
        }
        let other_end = |x: usize, i: usize| {
            let e = pd[x].edges[i];
            let v = &ends[&e];
            if v[0] == (x, i) {
                v[1]
            } else {
                v[0]
            }
        };
        let mut used = vec![[false; 4]; pd.len()];
        let mut faces = Vec::new();
        for x in 0..pd.len() {
            for i in 0..4 {
                if used[x][i] {
                    continue;
                }
                let mut face = Vec::new();
                let (mut cx, mut ci) = (x, i);
                while !used[cx][ci] {
                    used[cx][ci] = true;
                    face.push((cx, ci));
                    let (y, j) = other_end(cx, ci);
                    cx = y;
                    ci = (j + 1) % 4;
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Number of connected pieces of the crossing graph.
    fn split_pieces(&self) -> usize {
        let c = self.signs.len();
        let mut uf = UnionFind::new(c);
        for comp in &self.components {
            for w in comp.windows(2) {
                uf.union(w[0].crossing, w[1].crossing);
            }
        }
        (0..c).filter(|&x| uf.find(x) == x).count()
    }

    /// Euler characteristic check V − E + F = 2 per connected piece.
    pub fn is_planar(&self) -> bool {
        let c = self.signs.len() as i64;
        if c == 0 {
            return true;
        }
        let f = self.faces().len() as i64;
        c - 2 * c + f == 2 * self.split_pieces() as i64
    }

    /// Repeatedly removes Reidemeister I kinks and Reidemeister II bigons.
    pub fn simplify(&self) -> PlanarDiagram {
        let mut d = self.clone();
        loop {
            if let Some(x) = d.find_kink() {
                d = d.remove_crossings(&[x]);
                continue;
            }
            if let Some((x, y)) = d.find_bigon() {
                d = d.remove_crossings(&[x, y]);
                continue;
            }
            return d;
        }
    }

    fn find_kink(&self) -> Option<usize> {
        for comp in &self.components {
            let n = comp.len();
            for j in 0..n {
                if n > 1 && comp[j].crossing == comp[(j + 1) % n].crossing {
                    return Some(comp[j].crossing);
                }
            }
        }
        None
    }

    fn find_bigon(&self) -> Option<(usize, usize)> {
        for face in self.faces() {
            if face.len() != 2 {
                continue;
            }
            let (x, i) = face[0];
            let (y, j) = face[1];
            if x == y {
                continue;
            }
            // face[0] leaves x along e1 and arrives at y one slot before
            // face[1]; e2 then returns to x one slot before face[0]
            let e1_over_at_x = i % 2 == 1;
            let e1_over_at_y = (j + 3) % 4 % 2 == 1;
            if e1_over_at_x == e1_over_at_y {
                return Some((x, y));
            }
        }
        None
    }

    fn remove_crossings(&self, xs: &[usize]) -> PlanarDiagram {
        let mut renumber = vec![usize::MAX; self.signs.len()];
        let mut signs = Vec::new();
        for (x, &s) in self.signs.iter().enumerate() {
            if !xs.contains(&x) {
                renumber[x] = signs.len();
                signs.push(s);
            }
        }
        let mut free_loops = self.free_loops;
        let mut components = Vec::new();
        for comp in &self.components {
            let kept: Vec<GaussPassage> = comp
                .iter()
                .filter(|p| !xs.contains(&p.crossing))
                .map(|p| GaussPassage {
                    crossing: renumber[p.crossing],
                    over: p.over,
                })
                .collect();
            if kept.is_empty() {
                free_loops += 1;
            } else {
                components.push(kept);
            }
        }
        PlanarDiagram {
            components,
            signs,
            free_loops,
        }
    }
}

/// Minimal union-find over `0..n`.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when two classes merged.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mosaic::library::*;

    #[test]
    fn trefoil_mosaic_diagram() {
        let d = PlanarDiagram::from_mosaic(&trefoil()).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.writhe().abs(), 3);
        assert!(d.is_planar());
    }

    #[test]
    fn pd_text_round_trip() {
        let d = PlanarDiagram::from_pd_text("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]").unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.component_count(), 1);
        let again = PlanarDiagram::from_pd_text(&d.pd_text()).unwrap();
        assert_eq!(again.pd(), d.pd());
    }

    #[test]
    fn malformed_pd_rejected() {
        assert!(PlanarDiagram::from_pd_text("X[1,2,3]").is_err());
        assert!(PlanarDiagram::from_pd_text("X[1,1,1,1]").is_err());
        assert!(PlanarDiagram::from_pd_text("Y[1,2,3,4]").is_err());
    }

    #[test]
    fn kink_simplifies_away() {
        let d = PlanarDiagram::from_pd_text("X[1,1,2,2]").unwrap();
        let s = d.simplify();
        assert_eq!(s.crossing_count(), 0);
        assert_eq!(s.component_count(), 1);
    }

    #[test]
    fn trefoil_does_not_simplify() {
        let d = PlanarDiagram::from_mosaic(&trefoil()).unwrap();
        assert_eq!(d.simplify().crossing_count(), 3);
    }

    #[test]
    fn bigon_simplifies_away() {
        // two strands of a 2-component unlink overlapping twice
        let d = PlanarDiagram::new(
            vec![
                vec![GaussPassage { crossing: 0, over: true }, GaussPassage { crossing: 1, over: true }],
                vec![GaussPassage { crossing: 1, over: false }, GaussPassage { crossing: 0, over: false }],
            ],
            vec![1, -1],
            0,
        )
        .unwrap();
        assert!(d.is_planar());
        let s = d.simplify();
        assert_eq!(s.crossing_count(), 0);
        assert_eq!(s.component_count(), 2);
    }

    #[test]
    fn blank_mosaic_has_no_diagram() {
        assert!(matches!(
            PlanarDiagram::from_mosaic(&Mosaic::blank(3)),
            Err(InvariantError::NoComponents)
        ));
    }
}
