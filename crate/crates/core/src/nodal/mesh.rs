//! Zero set of a sampled complex field by piecewise-linear interpolation on
//! a Freudenthal (Kuhn) triangulation of the lattice.
//!
//! On each tetrahedron the interpolant is an affine map R³ → C whose zero
//! set is a line, so it meets the tetrahedron in a segment joining two
//! faces. A face is hit when the origin lies inside the triangle of its
//! three values in C. Ties are broken by simulation of simplicity: the
//! origin is replaced by (ε, ε²) for an infinitesimal ε, which makes every
//! face test a pure function of the face and keeps the segment count per
//! tetrahedron at zero or two.

use std::collections::HashMap;

use num_complex::Complex64;

use super::{NodalError, SampleGrid};
use crate::par::Execution;

/// Sorted global node indices of a triangle.
pub(crate) type FaceKey = [u32; 3];

#[derive(Clone, Copy, Debug)]
pub(crate) struct Segment {
    pub ends: [(FaceKey, [f64; 3]); 2],
}

const TETS: [[usize; 4]; 6] = [
    [0, 1, 3, 7],
    [0, 1, 5, 7],
    [0, 2, 3, 7],
    [0, 2, 6, 7],
    [0, 4, 5, 7],
    [0, 4, 6, 7],
];

fn det(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Sign of det(a − p, b − p) with p = (ε, ε²).
fn orient(a: Complex64, b: Complex64) -> i8 {
    for v in [det(a, b), a.im - b.im, b.re - a.re] {
        if v > 0.0 {
            return 1;
        }
        if v < 0.0 {
            return -1;
        }
    }
    0
}

fn face_hit(v: [Complex64; 3]) -> bool {
    let s0 = orient(v[0], v[1]);
    s0 != 0 && s0 == orient(v[1], v[2]) && s0 == orient(v[2], v[0])
}

/// Barycentric weights of the zero of the affine interpolant on a triangle.
fn face_weights(v: [Complex64; 3]) -> [f64; 3] {
    let l = [det(v[1], v[2]), det(v[2], v[0]), det(v[0], v[1])];
    let sum: f64 = l.iter().sum();
    if sum == 0.0 || !sum.is_finite() {
        return [1.0 / 3.0; 3];
    }
    let mut w = l.map(|x| (x / sum).max(0.0));
    let t: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= t);
    w
}

fn sign_class(v: Complex64) -> (bool, bool) {
    (v.re > 0.0, v.im > 0.0)
}

/// Scans every cube of the lattice; returns segments in lattice coordinates,
/// ordered by cube (z slab outermost) and tetrahedron.
pub(crate) fn scan(grid: &SampleGrid, values: &[Complex64], exec: Execution) -> Result<Vec<Segment>, NodalError> {
    let n = grid.n;
    assert_eq!(values.len(), grid.node_count());
    let slabs = exec.map_range(0..n, |k| scan_slab(grid, values, k));
    let mut out = Vec::new();
    for s in slabs {
        out.extend(s?);
    }
    Ok(out)
}

fn scan_slab(grid: &SampleGrid, values: &[Complex64], k: usize) -> Result<Vec<Segment>, NodalError> {
    let n = grid.n;
    let mut out = Vec::new();
    let mut ids = [0u32; 8];
    let mut vals = [Complex64::new(0.0, 0.0); 8];
    for j in 0..n {
        for i in 0..n {
            for b in 0..8 {
                let id = grid.node_index(i + (b & 1), j + (b >> 1 & 1), k + (b >> 2 & 1));
                ids[b] = id as u32;
                vals[b] = values[id];
            }
            if vals.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                return Err(NodalError::NonFinite {
                    location: grid.position([i as f64, j as f64, k as f64]),
                });
            }
            let first = sign_class(vals[0]);
            if vals.iter().all(|v| sign_class(*v).0 == first.0)
                || vals.iter().all(|v| sign_class(*v).1 == first.1)
            {
                continue;
            }
            for tet in TETS {
                let mut hits: [(FaceKey, [f64; 3]); 4] = [([0; 3], [0.0; 3]); 4];
                let mut count = 0;
                for skip in 0..4 {
                    let mut corners = [0usize; 3];
                    let mut c = 0;
                    for (m, &corner) in tet.iter().enumerate() {
                        if m != skip {
                            corners[c] = corner;
                            c += 1;
                        }
                    }
                    corners.sort_by_key(|&b| ids[b]);
                    let v = corners.map(|b| vals[b]);
                    if !face_hit(v) {
                        continue;
                    }
                    let w = face_weights(v);
                    let mut p = [0.0; 3];
                    for (t, &b) in corners.iter().enumerate() {
                        let off = [(b & 1) as f64, (b >> 1 & 1) as f64, (b >> 2 & 1) as f64];
                        let base = [i as f64, j as f64, k as f64];
                        for a in 0..3 {
                            p[a] += w[t] * (base[a] + off[a]);
                        }
                    }
                    hits[count] = (corners.map(|b| ids[b]), p);
                    count += 1;
                }
                match count {
                    0 => {}
                    2 => out.push(Segment {
                        ends: [hits[0], hits[1]],
                    }),
                    _ => {
                        return Err(NodalError::Degenerate {
                            location: grid.position([i as f64 + 0.5, j as f64 + 0.5, k as f64 + 0.5]),
                            faces: count,
                        })
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A closed chain of face points in lattice coordinates.
pub(crate) struct Chain {
    pub points: Vec<[f64; 3]>,
    pub closure_gap: f64,
}

/// Links segments that share a face into closed chains.
///
/// Chains start at their smallest face key, and are listed in order of
/// that key. A face touched by a single segment is an open end.
pub(crate) fn chain(segments: &[Segment], period: Option<f64>) -> Result<Vec<Chain>, Vec<[f64; 3]>> {
    let mut faces: HashMap<FaceKey, ([f64; 3], Vec<usize>)> = HashMap::new();
    for (s, seg) in segments.iter().enumerate() {
        for (key, p) in seg.ends {
            faces.entry(key).or_insert_with(|| (p, Vec::new())).1.push(s);
        }
    }
    let mut open: Vec<(FaceKey, [f64; 3])> = faces
        .iter()
        .filter(|(_, (_, segs))| segs.len() != 2)
        .map(|(k, (p, _))| (*k, *p))
        .collect();
    if !open.is_empty() {
        open.sort_by_key(|(k, _)| *k);
        return Err(open.into_iter().map(|(_, p)| p).collect());
    }
    let mut keys: Vec<FaceKey> = faces.keys().copied().collect();
    keys.sort_unstable();
    let mut used = vec![false; segments.len()];
    let mut chains = Vec::new();
    for start in keys {
        let (p0, segs) = &faces[&start];
        let Some(&first_seg) = segs.iter().find(|&&s| !used[s]) else {
            continue;
        };
        let mut points = vec![*p0];
        let mut seg = first_seg;
        let mut at = start;
        let closure_gap = loop {
            used[seg] = true;
            let [(ka, _), (kb, pb)] = segments[seg].ends;
            let (next, p_next) = if ka == at { (kb, pb) } else { (ka, segments[seg].ends[0].1) };
            if next == start {
                let d: f64 = (0..3)
                    .map(|a| {
                        let mut x = p_next[a] - p0[a];
                        if let Some(l) = period {
                            x -= l * (x / l).round();
                        }
                        x * x
                    })
                    .sum::<f64>()
                    .sqrt();
                break d;
            }
            points.push(faces[&next].0);
            at = next;
            let ss = &faces[&next].1;
            seg = if ss[0] == seg { ss[1] } else { ss[0] };
        };
        chains.push(Chain { points, closure_gap });
    }
    Ok(chains)
}
