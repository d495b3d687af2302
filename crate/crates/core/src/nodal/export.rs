use std::fmt::Write;

use super::{FiberPoint, NodalCurve};

/// One row per vertex: `component,index,x,y,z,abs_f`. `abs_f` is the
/// modulus returned by `eval` at the vertex.
pub fn curve_csv(c: &NodalCurve, eval: impl Fn([f64; 3]) -> f64) -> String {
    let mut s = String::from("component,index,x,y,z,abs_f\n");
    for (ci, comp) in c.components.iter().enumerate() {
        for (i, p) in comp.points.iter().enumerate() {
            let _ = writeln!(s, "{ci},{i},{:.12e},{:.12e},{:.12e},{:.6e}", p[0], p[1], p[2], eval(*p));
        }
    }
    s
}

/// Wavefront OBJ with one closed `l` polyline per component.
pub fn curve_obj(c: &NodalCurve) -> String {
    let mut s = String::from("# nodal curve\n");
    for p in c.points() {
        let _ = writeln!(s, "v {:.12e} {:.12e} {:.12e}", p[0], p[1], p[2]);
    }
    let mut base = 1;
    for (ci, comp) in c.components.iter().enumerate() {
        let n = comp.points.len();
        let _ = write!(s, "o component_{ci}\nl");
        for i in 0..n {
            let _ = write!(s, " {}", base + i);
        }
        let _ = writeln!(s, " {base}");
        base += n;
    }
    s
}

pub fn fiber_csv(points: &[FiberPoint]) -> String {
    let mut s = String::from("x,y,z,phase,abs_f\n");
    for p in points {
        let _ = writeln!(
            s,
            "{:.12e},{:.12e},{:.12e},{:.12e},{:.6e}",
            p.x[0], p.x[1], p.x[2], p.phase, p.abs
        );
    }
    s
}
