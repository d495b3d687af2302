use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::wrap;
use crate::par::Execution;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefineSettings {
    pub max_steps: usize,
    /// Converged once |f| falls below this.
    pub tol: f64,
    /// Condition number of the normal-plane Jacobian above which a
    /// transversality warning is recorded.
    pub max_condition: f64,
}

impl Default for RefineSettings {
    fn default() -> Self {
        RefineSettings {
            max_steps: 20,
            tol: 1e-10,
            max_condition: 1e8,
        }
    }
}

/// A vertex where the zero set looks non-transverse.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransversalityWarning {
    pub point: [f64; 3],
    pub condition: f64,
}

pub(crate) struct Refined {
    pub points: Vec<[f64; 3]>,
    pub residual: f64,
    pub warnings: Vec<TransversalityWarning>,
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn axpy(x: [f64; 3], s: f64, d: [f64; 3]) -> [f64; 3] {
    [x[0] + s * d[0], x[1] + s * d[1], x[2] + s * d[2]]
}

/// Orthonormal basis of the plane normal to `t`.
fn normal_plane(t: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if t[0].abs() < 0.6 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let u = cross(t, helper);
    let u = u.map(|v| v / norm(u));
    let v = cross(t, u);
    (u, v)
}

/// Damped Newton iteration on (Re f, Im f) for every vertex, moving only
/// within the plane normal to the local tangent of the polyline.
pub(crate) fn refine(
    pts: &[[f64; 3]],
    eval: &(dyn Fn([f64; 3]) -> Complex64 + Sync),
    h: f64,
    half_period: Option<f64>,
    settings: RefineSettings,
    exec: Execution,
) -> Refined {
    let n = pts.len();
    let results = exec.map_range(0..n, |i| {
        let prev = pts[(i + n - 1) % n];
        let next = pts[(i + 1) % n];
        let mut t = sub(next, prev);
        if let Some(half) = half_period {
            t = t.map(|v| wrap(v, half));
        }
        let tn = norm(t);
        let t = if tn > 0.0 { t.map(|v| v / tn) } else { [1.0, 0.0, 0.0] };
        newton(pts[i], t, eval, h, settings)
    });
    let mut points = Vec::with_capacity(n);
    let mut residual: f64 = 0.0;
    let mut warnings = Vec::new();
    for (p, r, cond) in results {
        points.push(p);
        residual = residual.max(r);
        if cond > settings.max_condition {
            warnings.push(TransversalityWarning { point: p, condition: cond });
        }
    }
    Refined {
        points,
        residual,
        warnings,
    }
}

fn newton(
    x0: [f64; 3],
    t: [f64; 3],
    eval: &(dyn Fn([f64; 3]) -> Complex64 + Sync),
    h: f64,
    s: RefineSettings,
) -> ([f64; 3], f64, f64) {
    let (u, v) = normal_plane(t);
    let eta = 1e-6 * h;
    let mut x = x0;
    let mut fx = eval(x);
    let mut cond = 1.0;
    for _ in 0..s.max_steps {
        if fx.norm() < s.tol {
            break;
        }
        let du = (eval(axpy(x, eta, u)) - eval(axpy(x, -eta, u))) / (2.0 * eta);
        let dv = (eval(axpy(x, eta, v)) - eval(axpy(x, -eta, v))) / (2.0 * eta);
        // J = [[du.re, dv.re], [du.im, dv.im]]
        let det = du.re * dv.im - dv.re * du.im;
        let fro2 = du.norm_sqr() + dv.norm_sqr();
        cond = if det == 0.0 {
            f64::INFINITY
        } else {
            // σmax/σmin for a 2x2 matrix from its Frobenius norm and determinant
            let d = det.abs();
            let disc = (fro2 * fro2 - 4.0 * d * d).max(0.0).sqrt();
            ((fro2 + disc) / (fro2 - disc).max(f64::MIN_POSITIVE)).sqrt()
        };
        if !cond.is_finite() {
            break;
        }
        let a = (-fx.re * dv.im + dv.re * fx.im) / det;
        let b = (-du.re * fx.im + du.im * fx.re) / det;
        let mut step = axpy([0.0; 3], a, u);
        step = axpy(step, b, v);
        let len = norm(step);
        if len > 0.5 * h {
            step = step.map(|c| c * 0.5 * h / len);
        }
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..10 {
            let y = axpy(x, lambda, step);
            let fy = eval(y);
            if fy.norm() < fx.norm() {
                x = y;
                fx = fy;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (x, fx.norm(), cond)
}
