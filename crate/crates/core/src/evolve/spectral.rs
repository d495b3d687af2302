//! Split-step spectral propagator on the periodic box.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{EvolutionConfig, FieldState, Hamiltonian};
use crate::par::Execution;

/// Signed mode number of FFT output slot `m` on an `n`-point axis.
fn mode(m: usize, n: usize) -> f64 {
    if m <= n / 2 {
        m as f64
    } else {
        m as f64 - n as f64
    }
}

/// In-place 3D transform of an `n³` array with x fastest.
pub(crate) struct Fft3 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fft3 {
    pub(crate) fn new(n: usize) -> Fft3 {
        let mut planner = FftPlanner::new();
        Fft3 {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// Unnormalized transform; `inverse` selects the positive exponent.
    pub(crate) fn transform(&self, data: &mut [Complex64], inverse: bool, exec: Execution) {
        let n = self.n;
        let plan = if inverse { &self.inverse } else { &self.forward };
        // x lines are contiguous
        exec.for_each_chunk_mut(data, n * n, |_, slab| {
            let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
            plan.process_with_scratch(slab, &mut scratch);
        });
        // y lines live inside one z slab
        exec.for_each_chunk_mut(data, n * n, |_, slab| {
            let mut line = vec![Complex64::new(0.0, 0.0); n];
            let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
            for i in 0..n {
                for j in 0..n {
                    line[j] = slab[i + n * j];
                }
                plan.process_with_scratch(&mut line, &mut scratch);
                for j in 0..n {
                    slab[i + n * j] = line[j];
                }
            }
        });
        // z lines span slabs: transform copies, then scatter back per slab
        let src: &[Complex64] = data;
        let lines = exec.map_range(0..n * n, |ij| {
            let mut line: Vec<Complex64> = (0..n).map(|k| src[ij + n * n * k]).collect();
            plan.process(&mut line);
            line
        });
        exec.for_each_chunk_mut(data, n * n, |k, slab| {
            for (ij, v) in slab.iter_mut().enumerate() {
                *v = lines[ij][k];
            }
        });
    }
}

/// Precomputed phase factors for one time step.
pub struct Propagator {
    n: usize,
    dt: f64,
    fft: Fft3,
    /// Kinetic factor exp(-i k² dt / 2) per axis mode; the box is cubic.
    kinetic: Vec<Complex64>,
    /// exp(-i V dt / 2) per node, empty for the free Hamiltonian.
    half_potential: Vec<Complex64>,
    exec: Execution,
}

impl Propagator {
    /// Propagator for `cfg.dt`; the config is assumed valid.
    pub fn new(cfg: &EvolutionConfig, exec: Execution) -> Propagator {
        Propagator::with_dt(cfg, cfg.dt, exec)
    }

    /// Propagator for an arbitrary, possibly negative, step.
    pub fn with_dt(cfg: &EvolutionConfig, dt: f64, exec: Execution) -> Propagator {
        let n = cfg.n;
        let kinetic = (0..n)
            .map(|m| {
                let k = TAU * mode(m, n) / cfg.side;
                Complex64::from_polar(1.0, -0.5 * k * k * dt)
            })
            .collect();
        let half_potential = match cfg.hamiltonian {
            Hamiltonian::Free => Vec::new(),
            Hamiltonian::Harmonic { omega } => {
                let grid = cfg.grid();
                let slabs = exec.map_range(0..n, |k| {
                    let mut out = Vec::with_capacity(n * n);
                    for j in 0..n {
                        for i in 0..n {
                            let x = grid.position([i as f64, j as f64, k as f64]);
                            let v: f64 = (0..3).map(|a| 0.5 * omega[a] * omega[a] * x[a] * x[a]).sum();
                            out.push(Complex64::from_polar(1.0, -0.5 * v * dt));
                        }
                    }
                    out
                });
                slabs.concat()
            }
        };
        Propagator {
            n,
            dt,
            fft: Fft3::new(n),
            kinetic,
            half_potential,
            exec,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn kinetic_step(&self, values: &mut [Complex64]) {
        let n = self.n;
        self.fft.transform(values, false, self.exec);
        let norm = 1.0 / (n * n * n) as f64;
        let kin = &self.kinetic;
        self.exec.for_each_chunk_mut(values, n * n, |k, slab| {
            for j in 0..n {
                let kyz = kin[j] * kin[k] * norm;
                for i in 0..n {
                    slab[i + n * j] *= kin[i] * kyz;
                }
            }
        });
        self.fft.transform(values, true, self.exec);
    }

    fn potential_half_step(&self, values: &mut [Complex64]) {
        let n = self.n;
        let pot = &self.half_potential;
        self.exec.for_each_chunk_mut(values, n * n, |k, slab| {
            for (o, v) in slab.iter_mut().enumerate() {
                *v *= pot[k * n * n + o];
            }
        });
    }

    /// Advances the state by one step: exact for the free Hamiltonian,
    /// symmetric (Strang) splitting for the harmonic one.
    pub fn step(&self, s: &mut FieldState) {
        assert_eq!(s.n, self.n, "state and propagator resolutions differ");
        if self.half_potential.is_empty() {
            self.kinetic_step(&mut s.values);
        } else {
            self.potential_half_step(&mut s.values);
            self.kinetic_step(&mut s.values);
            self.potential_half_step(&mut s.values);
        }
        s.time += self.dt;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_numbers_wrap() {
        let m: Vec<f64> = (0..8).map(|i| mode(i, 8)).collect();
        assert_eq!(m, vec![0.0, 1.0, 2.0, 3.0, 4.0, -3.0, -2.0, -1.0]);
    }

    #[test]
    fn forward_then_inverse_is_n_cubed() {
        let n = 8;
        let f = Fft3::new(n);
        let orig: Vec<Complex64> = (0..n * n * n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut d = orig.clone();
        f.transform(&mut d, false, Execution::Sequential);
        f.transform(&mut d, true, Execution::Parallel);
        for (a, b) in orig.iter().zip(&d) {
            assert!((a * (n * n * n) as f64 - b).norm() < 1e-10);
        }
    }

    #[test]
    fn single_mode_lands_in_one_bin() {
        let n = 8;
        let f = Fft3::new(n);
        let mut d: Vec<Complex64> = (0..n * n * n)
            .map(|idx| {
                let (i, j, k) = (idx % n, idx / n % n, idx / (n * n));
                let ph = TAU * (i as f64 + 2.0 * j as f64 + 3.0 * k as f64) / n as f64;
                Complex64::from_polar(1.0, ph)
            })
            .collect();
        f.transform(&mut d, false, Execution::Parallel);
        let peak = 1 + n * (2 + n * 3);
        for (idx, v) in d.iter().enumerate() {
            let want = if idx == peak { (n * n * n) as f64 } else { 0.0 };
            assert!((v.norm() - want).abs() < 1e-9, "{idx} {v}");
        }
    }
}
