//! Nodal lines of complex fields: extraction on a sampled lattice, Newton
//! refinement, projection to a knot diagram, and phase-fiber sampling.

mod chart;
mod export;
mod fiber;
mod mesh;
mod project;
mod refine;

pub use chart::{from_sphere, to_sphere, wrap, Chart, Pole, SampleGrid, DEFAULT_EXTENT};
pub use export::{curve_csv, curve_obj, fiber_csv};
pub use fiber::{sample_fiber, FiberPoint};
pub use project::{
    diagram_of_curve, verify_knot_type, Projection, VerifyReport, VerifySettings, DEFAULT_DIRECTION, MAX_RETRIES,
};
pub use refine::{RefineSettings, TransversalityWarning};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::ComplexField;
use crate::invariants::InvariantError;
use crate::par::Execution;

/// Smallest accepted lattice resolution.
pub const MIN_RESOLUTION: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NodalError {
    #[error("resolution {0} is below the minimum of 16")]
    Resolution(usize),
    #[error("non-finite field value near {location:?}")]
    NonFinite { location: [f64; 3] },
    #[error("degenerate tetrahedron near {location:?} ({faces} faces hit)")]
    Degenerate { location: [f64; 3], faces: usize },
    #[error("{} open chain end(s), first at {:?}; the curve leaves the box or the lattice is too coarse", .endpoints.len(), .endpoints.first())]
    OpenChain { endpoints: Vec<[f64; 3]> },
    #[error("no generic projection found after {retries} perturbations")]
    NonGenericProjection { retries: usize },
    #[error("verification needs a single closed component, found {0}")]
    ComponentCount(usize),
    #[error("field kind and chart do not match: {0}")]
    Chart(String),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

/// One closed polyline of the nodal set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodalComponent {
    /// Vertices in chart coordinates; the last joins back to the first.
    pub points: Vec<[f64; 3]>,
    /// Max |f| over vertices (after refinement when enabled).
    pub residual: f64,
    /// Distance between where the chain walk ended and where it began.
    pub closure_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodalCurve {
    pub grid: SampleGrid,
    pub components: Vec<NodalComponent>,
    pub residual: f64,
    pub warnings: Vec<TransversalityWarning>,
}

impl NodalCurve {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.components.iter().map(|c| c.points.len()).sum()
    }

    pub fn points(&self) -> impl Iterator<Item = [f64; 3]> + '_ {
        self.components.iter().flat_map(|c| c.points.iter().copied())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ExtractSettings {
    pub refine: Option<RefineSettings>,
    pub execution: Execution,
}

impl Default for ExtractSettings {
    fn default() -> Self {
        ExtractSettings {
            refine: Some(RefineSettings::default()),
            execution: Execution::default(),
        }
    }
}

/// Field value at a point given in chart coordinates.
pub fn eval_chart(f: &ComplexField, chart: Chart, x: [f64; 3]) -> Complex64 {
    match chart {
        Chart::Stereographic { pole } => f.eval_real(to_sphere(x, pole, f.radius)),
        // box coordinates are read as plus-pole chart coordinates
        Chart::FlatBox => f.eval_real(to_sphere(x, Pole::Plus, f.radius)),
    }
}

/// Samples `f` at every lattice node, x-index fastest.
pub fn sample(f: &ComplexField, grid: &SampleGrid, exec: Execution) -> Vec<Complex64> {
    let m = grid.nodes_per_axis();
    let slabs = exec.map_range(0..m, |k| {
        let mut out = Vec::with_capacity(m * m);
        for j in 0..m {
            for i in 0..m {
                let x = grid.position([i as f64, j as f64, k as f64]);
                out.push(eval_chart(f, grid.chart, x));
            }
        }
        out
    });
    slabs.concat()
}

/// Extracts the zero set of `f` on a sphere chart, refining vertices onto
/// the true zero set.
pub fn extract(f: &ComplexField, grid: &SampleGrid, settings: ExtractSettings) -> Result<NodalCurve, NodalError> {
    if grid.periodic() {
        return Err(NodalError::Chart("library fields are extracted on sphere charts".into()));
    }
    let values = sample(f, grid, settings.execution);
    let eval = |x: [f64; 3]| eval_chart(f, grid.chart, x);
    extract_with(grid, &values, Some(&eval), settings)
}

/// Extracts the zero set of sampled values. `eval` enables refinement;
/// without it (or with refinement disabled) vertices stay on the
/// piecewise-linear interpolant and residuals are measured from `values`.
pub fn extract_with(
    grid: &SampleGrid,
    values: &[Complex64],
    eval: Option<&(dyn Fn([f64; 3]) -> Complex64 + Sync)>,
    settings: ExtractSettings,
) -> Result<NodalCurve, NodalError> {
    if grid.n < MIN_RESOLUTION {
        return Err(NodalError::Resolution(grid.n));
    }
    let segments = mesh::scan(grid, values, settings.execution)?;
    let period = grid.periodic().then_some(grid.n as f64);
    let chains = mesh::chain(&segments, period).map_err(|ends| NodalError::OpenChain {
        endpoints: ends.into_iter().map(|p| grid.position(p)).collect(),
    })?;
    let h = grid.spacing();
    let mut components = Vec::with_capacity(chains.len());
    let mut warnings = Vec::new();
    for ch in chains {
        let pts: Vec<[f64; 3]> = ch.points.iter().map(|&p| grid.position(p)).collect();
        let (points, residual) = match (eval, settings.refine) {
            (Some(ev), Some(rs)) => {
                let r = refine::refine(&pts, ev, h, grid.periodic().then_some(grid.extent), rs, settings.execution);
                warnings.extend(r.warnings);
                (r.points, r.residual)
            }
            (Some(ev), None) => {
                let res = pts.iter().map(|&p| ev(p).norm()).fold(0.0, f64::max);
                (pts, res)
            }
            (None, _) => {
                let res = ch
                    .points
                    .iter()
                    .map(|&p| interpolate(grid, values, p).norm())
                    .fold(0.0, f64::max);
                (pts, res)
            }
        };
        components.push(NodalComponent {
            points,
            residual,
            closure_gap: ch.closure_gap * h,
        });
    }
    let residual = components.iter().map(|c| c.residual).fold(0.0, f64::max);
    Ok(NodalCurve {
        grid: *grid,
        components,
        residual,
        warnings,
    })
}

/// Trilinear interpolation of node values at lattice coordinates.
fn interpolate(grid: &SampleGrid, values: &[Complex64], p: [f64; 3]) -> Complex64 {
    let base = p.map(|v| v.floor());
    let f = [p[0] - base[0], p[1] - base[1], p[2] - base[2]];
    let m = grid.nodes_per_axis() as isize;
    let idx = |v: f64, d: usize| -> usize {
        let i = v as isize + d as isize;
        if grid.periodic() {
            i.rem_euclid(m) as usize
        } else {
            i.clamp(0, m - 1) as usize
        }
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for b in 0..8usize {
        let d = [b & 1, b >> 1 & 1, b >> 2 & 1];
        let w: f64 = (0..3).map(|a| if d[a] == 1 { f[a] } else { 1.0 - f[a] }).product();
        if w == 0.0 {
            continue;
        }
        acc += values[grid.node_index(idx(base[0], d[0]), idx(base[1], d[1]), idx(base[2], d[2]))] * w;
    }
    acc
}

fn dist(a: [f64; 3], b: [f64; 3], period: Option<f64>) -> f64 {
    (0..3)
        .map(|i| {
            let mut d = a[i] - b[i];
            if let Some(l) = period {
                d -= l * (d / l).round();
            }
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn point_segment_distance(p: [f64; 3], a: [f64; 3], b: [f64; 3]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let ap = [p[0] - a[0], p[1] - a[1], p[2] - a[2]];
    let len2: f64 = ab.iter().map(|v| v * v).sum();
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((0..3).map(|i| ab[i] * ap[i]).sum::<f64>() / len2).clamp(0.0, 1.0)
    };
    dist(p, [a[0] + t * ab[0], a[1] + t * ab[1], a[2] + t * ab[2]], None)
}

/// Symmetric Hausdorff distance between two point sets; `period` selects
/// minimum-image distances in a periodic cube of that side.
pub fn hausdorff(a: &[[f64; 3]], b: &[[f64; 3]], period: Option<f64>) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let directed = |x: &[[f64; 3]], y: &[[f64; 3]]| {
        x.iter()
            .map(|&p| y.iter().map(|&q| dist(p, q, period)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Largest distance from a vertex of `a` to the closed polyline `b`.
pub fn directed_polyline_distance(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
    let n = b.len();
    a.iter()
        .map(|&p| {
            (0..n)
                .map(|i| point_segment_distance(p, b[i], b[(i + 1) % n]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Curve of `c` (a chart-`c.grid` curve) re-expressed in another
/// stereographic chart; vertices at the other pole are dropped.
pub fn transfer(c: &NodalCurve, radius: f64, to: Pole) -> Result<Vec<Vec<[f64; 3]>>, NodalError> {
    let Chart::Stereographic { pole } = c.grid.chart else {
        return Err(NodalError::Chart("only sphere charts can be transferred".into()));
    };
    Ok(c.components
        .iter()
        .map(|comp| {
            comp.points
                .iter()
                .filter_map(|&x| from_sphere(to_sphere(x, pole, radius), to, radius))
                .collect()
        })
        .collect())
}

/// Hausdorff distance on the overlap of two sphere-chart extractions of one
/// field, measured in the chart of `a`. Only vertices that lie inside both
/// sample boxes (shrunk by `margin`) are compared.
pub fn chart_agreement(a: &NodalCurve, b: &NodalCurve, radius: f64, margin: f64) -> Result<f64, NodalError> {
    let (Chart::Stereographic { pole: pa }, Chart::Stereographic { pole: pb }) = (a.grid.chart, b.grid.chart) else {
        return Err(NodalError::Chart("chart agreement needs two sphere charts".into()));
    };
    let inside = |g: &SampleGrid, x: [f64; 3]| x.iter().all(|v| v.abs() <= g.extent - margin);
    let to_b = |x: [f64; 3]| from_sphere(to_sphere(x, pa, radius), pb, radius);
    let to_a = |x: [f64; 3]| from_sphere(to_sphere(x, pb, radius), pa, radius);

    let a_lines: Vec<Vec<[f64; 3]>> = a.components.iter().map(|c| c.points.clone()).collect();
    let b_in_a: Vec<Vec<[f64; 3]>> = b
        .components
        .iter()
        .map(|c| c.points.iter().filter_map(|&x| to_a(x)).collect())
        .collect();

    let a_overlap: Vec<[f64; 3]> = a
        .points()
        .filter(|&x| inside(&a.grid, x) && to_b(x).is_some_and(|y| inside(&b.grid, y)))
        .collect();
    let b_overlap: Vec<[f64; 3]> = b
        .points()
        .filter(|&y| inside(&b.grid, y))
        .filter_map(|y| to_a(y).filter(|&x| inside(&a.grid, x)))
        .collect();

    let to_lines = |pts: &[[f64; 3]], lines: &[Vec<[f64; 3]>]| {
        pts.iter()
            .map(|&p| {
                lines
                    .iter()
                    .filter(|l| l.len() > 1)
                    .map(|l| directed_polyline_distance(&[p], l))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    Ok(to_lines(&a_overlap, &b_in_a).max(to_lines(&b_overlap, &a_lines)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::FieldKind;

    #[test]
    fn unknot_field_gives_one_circle() {
        let f = ComplexField::new(FieldKind::Unknot);
        let g = SampleGrid::stereographic(Pole::Plus, 24, DEFAULT_EXTENT);
        let c = extract(&f, &g, ExtractSettings::default()).unwrap();
        assert_eq!(c.component_count(), 1);
        assert!(c.residual < 1e-8, "{}", c.residual);
    }

    #[test]
    fn coarse_grid_is_refused() {
        let f = ComplexField::new(FieldKind::Unknot);
        let g = SampleGrid::stereographic(Pole::Plus, 8, DEFAULT_EXTENT);
        assert_eq!(extract(&f, &g, Default::default()).unwrap_err(), NodalError::Resolution(8));
    }

    #[test]
    fn hausdorff_minimum_image() {
        let a = [[3.9, 0.0, 0.0]];
        let b = [[-3.9, 0.0, 0.0]];
        assert!((hausdorff(&a, &b, Some(8.0)) - 0.2).abs() < 1e-12);
        assert!((hausdorff(&a, &b, None) - 7.8).abs() < 1e-12);
        assert_eq!(hausdorff(&[], &[], None), 0.0);
    }
}
