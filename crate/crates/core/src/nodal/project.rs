use serde::{Deserialize, Serialize};

use super::{Chart, NodalCurve, NodalError};
use crate::invariants::{jones, BracketSettings, GaussPassage, InvariantError, LaurentPoly, PlanarDiagram};

pub const DEFAULT_DIRECTION: [f64; 3] = [1.0, 0.618, 0.382];
pub const MAX_RETRIES: usize = 32;

/// Relative tolerance for the genericity tests of a projection.
const GENERIC_TOL: f64 = 1e-9;
/// Smallest accepted sine of the angle between two crossing segments.
const MIN_CROSSING_SINE: f64 = 1e-6;
/// Turns sharper than arccos(-0.9) (about 154°) count as hairpins.
const HAIRPIN_COS: f64 = 0.9;

#[derive(Clone, Copy, Debug)]
pub struct VerifySettings {
    pub direction: [f64; 3],
    pub max_retries: usize,
    pub bracket: BracketSettings,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            direction: DEFAULT_DIRECTION,
            max_retries: MAX_RETRIES,
            bracket: BracketSettings::default(),
        }
    }
}

/// A generic projection of a set of closed polylines and the diagram it gives.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection {
    pub direction: [f64; 3],
    pub retries: usize,
    pub diagram: PlanarDiagram,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    #[serde(rename = "match")]
    pub matched: bool,
    /// The match was against the mirror image of the expected knot.
    pub mirror: bool,
    pub computed: LaurentPoly,
    pub expected: LaurentPoly,
    pub computed_text: String,
    pub expected_text: String,
    pub crossings_projected: usize,
    pub crossings_reduced: usize,
    pub direction: [f64; 3],
    pub retries: usize,
}

type V3 = [f64; 3];

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize(a: V3) -> V3 {
    let n = dot(a, a).sqrt();
    a.map(|v| v / n)
}

fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// The k-th direction tried: the base direction, then fixed perturbations
/// from an additive recurrence.
fn direction(base: V3, k: usize) -> V3 {
    if k == 0 {
        return normalize(base);
    }
    let alpha = [0.754_877_666_2, 0.569_840_290_9, 0.414_213_562_4];
    let kf = k as f64;
    let p = alpha.map(|a| (kf * a).fract() - 0.5);
    normalize([base[0] + 0.3 * p[0], base[1] + 0.3 * p[1], base[2] + 0.3 * p[2]])
}

struct Seg {
    comp: usize,
    index: usize,
    a: [f64; 2],
    b: [f64; 2],
    da: f64,
    db: f64,
}

struct Event {
    t: f64,
    crossing: usize,
    over: bool,
}

/// Removes vertices where the polyline nearly doubles back on itself or
/// repeats its predecessor. Refinement can leave such hairpins a fraction
/// of a grid cell long; they change no knot type but defeat the
/// genericity tests.
pub fn tidy(line: &[V3]) -> Vec<V3> {
    let edge = |a: V3, b: V3| [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let mut lens: Vec<f64> = (0..line.len())
        .map(|i| {
            let e = edge(line[i], line[(i + 1) % line.len()]);
            dot(e, e).sqrt()
        })
        .collect();
    lens.sort_by(f64::total_cmp);
    let min_len = 1e-3 * lens.get(lens.len() / 2).copied().unwrap_or(0.0);
    let mut pts = line.to_vec();
    loop {
        let n = pts.len();
        if n <= 3 {
            return pts;
        }
        let mut keep = vec![true; n];
        let mut prev = n - 1;
        for i in 0..n {
            let next = (i + 1) % n;
            let a = edge(pts[prev], pts[i]);
            let b = edge(pts[i], pts[next]);
            let (la, lb) = (dot(a, a).sqrt(), dot(b, b).sqrt());
            if la < min_len || dot(a, b) < -HAIRPIN_COS * la * lb {
                keep[i] = false;
            } else {
                prev = i;
            }
        }
        if keep.iter().all(|&k| k) || keep.iter().filter(|&&k| k).count() < 3 {
            return pts;
        }
        pts = pts.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect();
    }
}

/// Projects closed polylines along the first generic direction and reads
/// off the diagram. Over means nearer the viewer, who looks down the
/// projection direction from +∞.
pub fn diagram_of_curve(lines: &[Vec<V3>], settings: VerifySettings) -> Result<Projection, NodalError> {
    let lines: Vec<Vec<V3>> = lines.iter().map(|l| tidy(l)).collect();
    let lines = &lines[..];
    for k in 0..=settings.max_retries {
        let d = direction(settings.direction, k);
        if let Some(diagram) = try_project(lines, d)? {
            return Ok(Projection {
                direction: d,
                retries: k,
                diagram,
            });
        }
    }
    Err(NodalError::NonGenericProjection {
        retries: settings.max_retries,
    })
}

/// `Ok(None)` signals a non-generic direction.
fn try_project(lines: &[Vec<V3>], d: V3) -> Result<Option<PlanarDiagram>, NodalError> {
    let helper = if d[0].abs() < 0.6 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = normalize(cross3(d, helper));
    let e2 = cross3(d, e1);

    let mut segs = Vec::new();
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for (c, line) in lines.iter().enumerate() {
        let n = line.len();
        if n < 3 {
            return Err(NodalError::Invariant(InvariantError::Malformed(format!(
                "component {c} has only {n} vertices"
            ))));
        }
        for i in 0..n {
            let (p, q) = (line[i], line[(i + 1) % n]);
            let a = [dot(p, e1), dot(p, e2)];
            let b = [dot(q, e1), dot(q, e2)];
            for k in 0..2 {
                lo[k] = lo[k].min(a[k]);
                hi[k] = hi[k].max(a[k]);
            }
            segs.push(Seg {
                comp: c,
                index: i,
                a,
                b,
                da: dot(p, d),
                db: dot(q, d),
            });
        }
    }
    let scale = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-300);
    let tol = GENERIC_TOL * scale;

    // sweep over x
    let mut order: Vec<usize> = (0..segs.len()).collect();
    let xmin = |s: &Seg| s.a[0].min(s.b[0]);
    let xmax = |s: &Seg| s.a[0].max(s.b[0]);
    order.sort_by(|&i, &j| xmin(&segs[i]).total_cmp(&xmin(&segs[j])).then(i.cmp(&j)));

    let mut events: Vec<Vec<Event>> = (0..segs.len()).map(|_| Vec::new()).collect();
    let mut points: Vec<[f64; 2]> = Vec::new();
    let mut over_dir: Vec<[f64; 2]> = Vec::new();
    let mut under_dir: Vec<[f64; 2]> = Vec::new();
    for (oi, &i) in order.iter().enumerate() {
        let si = &segs[i];
        let (ylo, yhi) = (si.a[1].min(si.b[1]), si.a[1].max(si.b[1]));
        for &j in &order[oi + 1..] {
            let sj = &segs[j];
            if xmin(sj) > xmax(si) + tol {
                break;
            }
            if sj.a[1].min(sj.b[1]) > yhi + tol || sj.a[1].max(sj.b[1]) < ylo - tol {
                continue;
            }
            if si.comp == sj.comp {
                let n = lines[si.comp].len();
                if (si.index + 1) % n == sj.index || (sj.index + 1) % n == si.index {
                    continue;
                }
            }
            let r = [si.b[0] - si.a[0], si.b[1] - si.a[1]];
            let s = [sj.b[0] - sj.a[0], sj.b[1] - sj.a[1]];
            let qp = [sj.a[0] - si.a[0], sj.a[1] - si.a[1]];
            let denom = cross2(r, s);
            let rl = (r[0] * r[0] + r[1] * r[1]).sqrt();
            let sl = (s[0] * s[0] + s[1] * s[1]).sqrt();
            if rl == 0.0 || sl == 0.0 {
                return Ok(None);
            }
            if denom.abs() <= MIN_CROSSING_SINE * rl * sl {
                // parallel: only a problem when the segments overlap
                if cross2(qp, r).abs() <= tol * rl {
                    let t0 = (qp[0] * r[0] + qp[1] * r[1]) / (rl * rl);
                    let t1 = t0 + (s[0] * r[0] + s[1] * r[1]) / (rl * rl);
                    if t0.max(t1) >= -GENERIC_TOL && t0.min(t1) <= 1.0 + GENERIC_TOL {
                        return Ok(None);
                    }
                }
                continue;
            }
            let t = cross2(qp, s) / denom;
            let u = cross2(qp, r) / denom;
            let eps_t = tol / rl;
            let eps_u = tol / sl;
            if t < -eps_t || t > 1.0 + eps_t || u < -eps_u || u > 1.0 + eps_u {
                continue;
            }
            if t <= eps_t || t >= 1.0 - eps_t || u <= eps_u || u >= 1.0 - eps_u {
                // crossing through a vertex
                return Ok(None);
            }
            let depth_i = si.da + t * (si.db - si.da);
            let depth_j = sj.da + u * (sj.db - sj.da);
            if (depth_i - depth_j).abs() <= tol {
                return Ok(None);
            }
            let x = points.len();
            points.push([si.a[0] + t * r[0], si.a[1] + t * r[1]]);
            let i_over = depth_i > depth_j;
            events[i].push(Event { t, crossing: x, over: i_over });
            events[j].push(Event {
                t: u,
                crossing: x,
                over: !i_over,
            });
            if i_over {
                over_dir.push(r);
                under_dir.push(s);
            } else {
                over_dir.push(s);
                under_dir.push(r);
            }
        }
    }

    // triple points and near-coincident crossings
    let mut by_x: Vec<usize> = (0..points.len()).collect();
    by_x.sort_by(|&a, &b| points[a][0].total_cmp(&points[b][0]).then(a.cmp(&b)));
    for (k, &a) in by_x.iter().enumerate() {
        for &b in &by_x[k + 1..] {
            if points[b][0] - points[a][0] > tol {
                break;
            }
            if (points[b][1] - points[a][1]).abs() <= tol {
                return Ok(None);
            }
        }
    }

    let mut components = Vec::new();
    let mut free_loops = 0;
    let mut at = 0;
    for line in lines {
        let mut comp = Vec::new();
        for ev in &mut events[at..at + line.len()] {
            ev.sort_by(|p, q| p.t.total_cmp(&q.t));
            comp.extend(ev.iter().map(|e| GaussPassage {
                crossing: e.crossing,
                over: e.over,
            }));
        }
        at += line.len();
        if comp.is_empty() {
            free_loops += 1;
        } else {
            components.push(comp);
        }
    }
    let signs = (0..points.len())
        .map(|x| if cross2(over_dir[x], under_dir[x]) > 0.0 { 1 } else { -1 })
        .collect();
    Ok(Some(PlanarDiagram::new(components, signs, free_loops)?))
}

/// Lifts a closed polyline on the periodic box to R³ by minimum-image
/// steps. Fails when the lift does not close, i.e. the curve winds around
/// the box.
fn unwrap_periodic(points: &[V3], period: f64) -> Result<Vec<V3>, NodalError> {
    let step = |a: V3, b: V3| {
        let mut d = [0.0; 3];
        for k in 0..3 {
            let x = b[k] - a[k];
            d[k] = x - period * (x / period).round();
        }
        d
    };
    let mut out = Vec::with_capacity(points.len());
    let mut at = match points.first() {
        Some(&p) => p,
        None => return Ok(out),
    };
    out.push(at);
    for w in points.windows(2) {
        let d = step(w[0], w[1]);
        at = [at[0] + d[0], at[1] + d[1], at[2] + d[2]];
        out.push(at);
    }
    let d = step(points[points.len() - 1], points[0]);
    let end = [at[0] + d[0], at[1] + d[1], at[2] + d[2]];
    let drift = (0..3).map(|k| (end[k] - out[0][k]).abs()).fold(0.0, f64::max);
    if drift > 0.5 * period {
        return Err(NodalError::Chart("curve winds around the periodic box".into()));
    }
    Ok(out)
}

/// Compares the knot type of a single-component nodal curve with an
/// expected diagram through their Jones polynomials, up to mirror image.
pub fn verify_knot_type(
    c: &NodalCurve,
    expected: &PlanarDiagram,
    settings: VerifySettings,
) -> Result<VerifyReport, NodalError> {
    if c.component_count() != 1 {
        return Err(NodalError::ComponentCount(c.component_count()));
    }
    let lines: Vec<Vec<V3>> = match c.grid.chart {
        Chart::FlatBox => c
            .components
            .iter()
            .map(|k| unwrap_periodic(&k.points, 2.0 * c.grid.extent))
            .collect::<Result<_, _>>()?,
        Chart::Stereographic { .. } => c.components.iter().map(|k| k.points.clone()).collect(),
    };
    let proj = diagram_of_curve(&lines, settings)?;
    let reduced = proj.diagram.simplify();
    let computed = jones(&reduced, settings.bracket)?;
    let want = jones(expected, settings.bracket)?;
    let direct = computed == want;
    let mirrored = computed == want.invert_variable();
    Ok(VerifyReport {
        matched: direct || mirrored,
        mirror: !direct && mirrored,
        computed_text: computed.display_sqrt_t(),
        expected_text: want.display_sqrt_t(),
        computed,
        expected: want,
        crossings_projected: proj.diagram.crossing_count(),
        crossings_reduced: reduced.crossing_count(),
        direction: proj.direction,
        retries: proj.retries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::jones_in_t;
    use std::f64::consts::TAU;

    /// (2,3) torus knot on a standard torus.
    fn torus_knot(samples: usize) -> Vec<V3> {
        (0..samples)
            .map(|i| {
                let s = TAU * i as f64 / samples as f64;
                let r = 2.0 + (3.0 * s).cos();
                [r * (2.0 * s).cos(), r * (2.0 * s).sin(), (3.0 * s).sin()]
            })
            .collect()
    }

    #[test]
    fn round_circle_has_no_crossings() {
        let c: Vec<V3> = (0..50)
            .map(|i| {
                let s = TAU * i as f64 / 50.0;
                [s.cos(), s.sin(), 0.0]
            })
            .collect();
        let p = diagram_of_curve(&[c], VerifySettings::default()).unwrap();
        assert_eq!(p.diagram.crossing_count(), 0);
        assert_eq!(p.retries, 0);
    }

    #[test]
    fn parametric_trefoil_projects_to_a_trefoil() {
        let p = diagram_of_curve(&[torus_knot(300)], VerifySettings::default()).unwrap();
        let d = p.diagram.simplify();
        let v = jones_in_t(&jones(&d, Default::default()).unwrap()).unwrap();
        assert_eq!(v.evaluate(-1.0).unwrap().abs(), 3.0);
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn hairpins_are_removed() {
        let line = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.5, 0.0, 0.0], [1.2, 0.0, 0.0], [1.0, 1.0, 0.0]];
        let t = tidy(&line);
        assert!(t.len() < line.len());
        assert!(t.contains(&[1.0, 1.0, 0.0]));
    }

    #[test]
    fn periodic_lift() {
        let l = unwrap_periodic(&[[3.9, 0.0, 0.0], [-3.9, 0.0, 0.0], [-3.9, 1.0, 0.0]], 8.0).unwrap();
        assert!((l[1][0] - 4.1).abs() < 1e-12);
        let winding: Vec<V3> = (0..8).map(|i| [-4.0 + i as f64, 0.0, 0.0]).collect();
        assert!(unwrap_periodic(&winding, 8.0).is_err());
    }

    #[test]
    fn perturbation_sequence_is_fixed() {
        assert_eq!(direction(DEFAULT_DIRECTION, 3), direction(DEFAULT_DIRECTION, 3));
        assert_ne!(direction(DEFAULT_DIRECTION, 1), direction(DEFAULT_DIRECTION, 2));
    }
}
