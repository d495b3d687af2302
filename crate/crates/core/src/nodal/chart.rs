use serde::{Deserialize, Serialize};

/// Which pole of the sphere a stereographic chart projects from. The poles
/// are (z, w) = (±r, 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pole {
    Plus,
    Minus,
}

impl Pole {
    fn sign(self) -> f64 {
        match self {
            Pole::Plus => 1.0,
            Pole::Minus => -1.0,
        }
    }

    pub fn opposite(self) -> Pole {
        match self {
            Pole::Plus => Pole::Minus,
            Pole::Minus => Pole::Plus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Chart {
    /// R³ ≅ S³_r minus a pole.
    Stereographic { pole: Pole },
    /// A periodic cube, used for evolved fields.
    FlatBox,
}

/// Inverse stereographic projection onto the sphere of radius `r`, as
/// (Re z, Im z, Re w, Im w).
pub fn to_sphere(x: [f64; 3], pole: Pole, r: f64) -> [f64; 4] {
    let s = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    let k = 2.0 / (s + 1.0);
    [
        r * pole.sign() * (s - 1.0) / (s + 1.0),
        r * k * x[0],
        r * k * x[1],
        r * k * x[2],
    ]
}

/// Stereographic projection of a point of the radius-`r` sphere; `None` at the pole.
pub fn from_sphere(p: [f64; 4], pole: Pole, r: f64) -> Option<[f64; 3]> {
    let d = 1.0 - pole.sign() * p[0] / r;
    if d <= 1e-300 {
        return None;
    }
    Some([p[1] / r / d, p[2] / r / d, p[3] / r / d])
}

/// A cubic lattice of sample points.
///
/// Nodes sit at `-extent + offset[a] + i * spacing` along each axis. Sphere
/// charts have `n + 1` nodes per axis; the flat box is periodic with `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub chart: Chart,
    pub n: usize,
    pub extent: f64,
    pub offset: [f64; 3],
}

/// Default half-width of stereographic sample boxes.
pub const DEFAULT_EXTENT: f64 = 3.0;

/// Shift of the sphere-chart lattice, in units of the spacing, that keeps
/// symmetric fields off exact lattice coincidences.
const GENERIC_SHIFT: [f64; 3] = [0.1373, 0.2916, 0.0529];

impl SampleGrid {
    pub fn stereographic(pole: Pole, n: usize, extent: f64) -> SampleGrid {
        let h = 2.0 * extent / n as f64;
        SampleGrid {
            chart: Chart::Stereographic { pole },
            n,
            extent,
            offset: GENERIC_SHIFT.map(|g| g * h),
        }
    }

    pub fn flat_box(n: usize, side: f64) -> SampleGrid {
        SampleGrid {
            chart: Chart::FlatBox,
            n,
            extent: side / 2.0,
            offset: [0.0; 3],
        }
    }

    pub fn periodic(&self) -> bool {
        matches!(self.chart, Chart::FlatBox)
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / self.n as f64
    }

    pub fn nodes_per_axis(&self) -> usize {
        if self.periodic() {
            self.n
        } else {
            self.n + 1
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes_per_axis().pow(3)
    }

    /// Chart coordinates of fractional lattice coordinates.
    pub fn position(&self, idx: [f64; 3]) -> [f64; 3] {
        let h = self.spacing();
        let mut p = [0.0; 3];
        for a in 0..3 {
            p[a] = -self.extent + self.offset[a] + idx[a] * h;
        }
        if self.periodic() {
            p = p.map(|v| wrap(v, self.extent));
        }
        p
    }

    /// Linear node index; node (i, j, k) has x-index i varying fastest.
    pub fn node_index(&self, i: usize, j: usize, k: usize) -> usize {
        let m = self.nodes_per_axis();
        (i % m) + m * ((j % m) + m * (k % m))
    }

    /// Lies inside the sampled box (sphere charts only).
    pub fn contains(&self, x: [f64; 3]) -> bool {
        (0..3).all(|a| {
            let lo = -self.extent + self.offset[a];
            x[a] >= lo && x[a] <= lo + 2.0 * self.extent
        })
    }
}

/// Maps `v` into [-half, half).
pub fn wrap(v: f64, half: f64) -> f64 {
    let l = 2.0 * half;
    v - l * ((v + half) / l).floor()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charts_are_inverse() {
        for pole in [Pole::Plus, Pole::Minus] {
            let x = [0.3, -1.2, 2.5];
            let p = to_sphere(x, pole, 1.7);
            let n: f64 = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((n - 1.7).abs() < 1e-14);
            let y = from_sphere(p, pole, 1.7).unwrap();
            for a in 0..3 {
                assert!((x[a] - y[a]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn origin_maps_to_opposite_pole() {
        let p = to_sphere([0.0; 3], Pole::Plus, 1.0);
        assert_eq!(p, [-1.0, 0.0, 0.0, 0.0]);
        assert!(from_sphere([1.0, 0.0, 0.0, 0.0], Pole::Plus, 1.0).is_none());
    }

    #[test]
    fn wrapping() {
        assert_eq!(wrap(4.5, 4.0), -3.5);
        assert_eq!(wrap(-4.0, 4.0), -4.0);
        assert_eq!(wrap(1.0, 4.0), 1.0);
    }
}
