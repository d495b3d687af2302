use serde::{Deserialize, Serialize};

use super::FieldState;
use crate::nodal::{extract_with, hausdorff, ExtractSettings, NodalCurve};
use crate::par::Execution;

#[derive(Clone, Copy, Debug)]
pub struct TrackSettings {
    pub execution: Execution,
    /// Largest displacement, in units of the grid spacing, for which two
    /// components of consecutive snapshots count as the same line.
    pub match_cells: f64,
    /// Components whose neighbourhood amplitude never exceeds this fraction
    /// of the snapshot's peak |ψ| are dropped as unresolved.
    pub amplitude_floor: f64,
}

impl Default for TrackSettings {
    fn default() -> Self {
        TrackSettings {
            execution: Execution::default(),
            match_cells: 4.0,
            amplitude_floor: 1e-3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Creation,
    Annihilation,
    Reconnection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodalEvent {
    pub snapshot: usize,
    pub time: f64,
    pub kind: EventKind,
    /// Component indices in the previous extracted snapshot.
    pub before: Vec<usize>,
    /// Component indices in this snapshot.
    pub after: Vec<usize>,
    /// Directed distance from the unmatched component to the nearest line
    /// on the other side.
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub index: usize,
    pub time: f64,
    pub curve: Option<NodalCurve>,
    /// Why extraction failed, for gaps.
    pub error: Option<String>,
    /// (previous component, this component, Hausdorff distance).
    pub matches: Vec<(usize, usize, f64)>,
    pub max_displacement: Option<f64>,
    /// Components removed by the amplitude floor.
    pub dropped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tracking {
    pub snapshots: Vec<Snapshot>,
    pub events: Vec<NodalEvent>,
}

impl Tracking {
    pub fn component_counts(&self) -> Vec<Option<usize>> {
        self.snapshots
            .iter()
            .map(|s| s.curve.as_ref().map(|c| c.component_count()))
            .collect()
    }

    /// Largest matched displacement over the whole run.
    pub fn max_displacement(&self) -> f64 {
        self.snapshots
            .iter()
            .filter_map(|s| s.max_displacement)
            .fold(0.0, f64::max)
    }
}

/// Largest |ψ| over the eight nodes of the cell containing `x`.
fn local_amplitude(s: &FieldState, x: [f64; 3]) -> f64 {
    let n = s.n;
    let h = s.side / n as f64;
    let base = x.map(|v| ((v + 0.5 * s.side) / h).floor() as i64);
    let mut m: f64 = 0.0;
    for b in 0..8 {
        let i = (base[0] + (b & 1)).rem_euclid(n as i64) as usize;
        let j = (base[1] + (b >> 1 & 1)).rem_euclid(n as i64) as usize;
        let k = (base[2] + (b >> 2 & 1)).rem_euclid(n as i64) as usize;
        m = m.max(s.values[i + n * (j + n * k)].norm());
    }
    m
}

fn min_image(p: [f64; 3], q: [f64; 3], period: f64) -> f64 {
    (0..3)
        .map(|a| {
            let d = p[a] - q[a];
            let d = d - period * (d / period).round();
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Largest distance from a vertex of `a` to the vertex set `b`.
fn directed(a: &[[f64; 3]], b: &[[f64; 3]], period: f64) -> f64 {
    a.iter()
        .map(|&p| b.iter().map(|&q| min_image(p, q, period)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Extracts the nodal set of every state and links components across
/// consecutive extracted snapshots. A failed extraction is a gap: the next
/// extracted snapshot is compared with the last one before the gap.
pub fn track_nodal(history: &[FieldState], settings: TrackSettings) -> Tracking {
    let extract = ExtractSettings {
        refine: None,
        execution: settings.execution,
    };
    let mut snapshots: Vec<Snapshot> = Vec::with_capacity(history.len());
    let mut events = Vec::new();
    let mut last: Option<usize> = None;
    for (index, s) in history.iter().enumerate() {
        let grid = s.grid();
        let mut dropped = 0;
        let (curve, error) = match extract_with(&grid, &s.values, None, extract) {
            Ok(mut c) => {
                let peak = s.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
                let before = c.components.len();
                c.components.retain(|k| {
                    k.points
                        .iter()
                        .any(|&x| local_amplitude(s, x) >= settings.amplitude_floor * peak)
                });
                dropped = before - c.components.len();
                c.residual = c.components.iter().map(|k| k.residual).fold(0.0, f64::max);
                (Some(c), None)
            }
            Err(e) => (None, Some(e.to_string())),
        };
        let mut snap = Snapshot {
            index,
            time: s.time,
            curve,
            error,
            matches: Vec::new(),
            max_displacement: None,
            dropped,
        };
        if let (Some(cur), Some(p)) = (&snap.curve, last) {
            let prev = snapshots[p].curve.as_ref().expect("last points at an extracted snapshot");
            let radius = settings.match_cells * grid.spacing();
            let (matches, evs) = link(prev, cur, s.side, radius);
            snap.max_displacement = Some(matches.iter().map(|m| m.2).fold(0.0, f64::max));
            snap.matches = matches;
            events.extend(evs.into_iter().map(|(kind, before, after, distance)| NodalEvent {
                snapshot: index,
                time: s.time,
                kind,
                before,
                after,
                distance,
            }));
        }
        if snap.curve.is_some() {
            last = Some(index);
        }
        snapshots.push(snap);
    }
    Tracking { snapshots, events }
}

type Link = (Vec<(usize, usize, f64)>, Vec<(EventKind, Vec<usize>, Vec<usize>, f64)>);

fn link(prev: &NodalCurve, cur: &NodalCurve, period: f64, radius: f64) -> Link {
    let a: Vec<&[[f64; 3]]> = prev.components.iter().map(|c| &c.points[..]).collect();
    let b: Vec<&[[f64; 3]]> = cur.components.iter().map(|c| &c.points[..]).collect();
    let d: Vec<Vec<f64>> = a
        .iter()
        .map(|x| b.iter().map(|y| hausdorff(x, y, Some(period))).collect())
        .collect();
    let best_b = |i: usize| (0..b.len()).min_by(|&p, &q| d[i][p].total_cmp(&d[i][q]));
    let best_a = |j: usize| (0..a.len()).min_by(|&p, &q| d[p][j].total_cmp(&d[q][j]));

    let mut matches = Vec::new();
    let mut a_used = vec![false; a.len()];
    let mut b_used = vec![false; b.len()];
    for i in 0..a.len() {
        if let Some(j) = best_b(i) {
            if best_a(j) == Some(i) && d[i][j] <= radius {
                matches.push((i, j, d[i][j]));
                a_used[i] = true;
                b_used[j] = true;
            }
        }
    }

    let mut events = Vec::new();
    for j in (0..b.len()).filter(|&j| !b_used[j]) {
        let near = (0..a.len())
            .map(|i| (i, directed(b[j], a[i], period)))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match near {
            Some((i, dist)) if dist <= radius => events.push((EventKind::Reconnection, vec![i], vec![j], dist)),
            Some((_, dist)) => events.push((EventKind::Creation, vec![], vec![j], dist)),
            None => events.push((EventKind::Creation, vec![], vec![j], f64::INFINITY)),
        }
    }
    for i in (0..a.len()).filter(|&i| !a_used[i]) {
        let near = (0..b.len())
            .map(|j| (j, directed(a[i], b[j], period)))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match near {
            Some((j, dist)) if dist <= radius => events.push((EventKind::Reconnection, vec![i], vec![j], dist)),
            Some((_, dist)) => events.push((EventKind::Annihilation, vec![i], vec![], dist)),
            None => events.push((EventKind::Annihilation, vec![i], vec![], f64::INFINITY)),
        }
    }
    (matches, events)
}
