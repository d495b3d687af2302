use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::{eval_chart, SampleGrid};
use crate::classify::ComplexField;
use crate::par::Execution;

/// A lattice node on (or near) the phase preimage of an angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberPoint {
    pub x: [f64; 3],
    /// Argument of f, in [0, 2π).
    pub phase: f64,
    pub abs: f64,
}

/// Angular distance on the circle.
fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Lattice nodes whose phase is within `band` of `theta` and whose
/// modulus exceeds `nodal_tol`, in lattice order.
pub fn sample_fiber(
    f: &ComplexField,
    theta: f64,
    grid: &SampleGrid,
    band: f64,
    nodal_tol: f64,
    exec: Execution,
) -> Vec<FiberPoint> {
    let m = grid.nodes_per_axis();
    let band = band.min(PI);
    exec.map_range(0..m, |k| {
        let mut out = Vec::new();
        for j in 0..m {
            for i in 0..m {
                let x = grid.position([i as f64, j as f64, k as f64]);
                let v = eval_chart(f, grid.chart, x);
                let abs = v.norm();
                if !(abs > nodal_tol) {
                    continue;
                }
                let phase = v.arg().rem_euclid(TAU);
                if angle_gap(phase, theta) <= band {
                    out.push(FiberPoint { x, phase, abs });
                }
            }
        }
        out
    })
    .concat()
}
