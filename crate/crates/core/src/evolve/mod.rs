//! Schrödinger evolution i∂ψ/∂t = Hψ (ħ = m = 1) of sampled fields on a
//! periodic cube, and tracking of their nodal lines through time.

mod io;
mod spectral;
mod track;

pub use io::{events_csv, read_snapshot, timeseries_csv, write_snapshot, SNAPSHOT_MAGIC};
pub use spectral::Propagator;
pub use track::{track_nodal, EventKind, NodalEvent, Snapshot, TrackSettings, Tracking};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::ComplexField;
use crate::nodal::{to_sphere, Pole, SampleGrid};
use crate::par::Execution;

#[derive(Debug, Error)]
pub enum EvolveError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("non-finite value at step {step}")]
    Overflow { step: usize },
    #[error("snapshot format: {0}")]
    Snapshot(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Hamiltonian {
    /// H = -Δ/2
    Free,
    /// H = -Δ/2 + Σ ω_a² x_a² / 2
    Harmonic { omega: [f64; 3] },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub hamiltonian: Hamiltonian,
    /// Side L of the periodic cube [-L/2, L/2)³.
    pub side: f64,
    /// Nodes per axis; a power of two.
    pub n: usize,
    pub dt: f64,
    pub steps: usize,
}

/// Ratio of box side to the bounding radius of an initial knot.
pub const SIDE_PER_RADIUS: f64 = 8.0;

impl EvolutionConfig {
    pub fn validate(&self) -> Result<(), EvolveError> {
        let bad = |m: String| Err(EvolveError::Config(m));
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.side.is_finite() && self.side > 0.0) {
            return bad(format!("box side must be positive, got {}", self.side));
        }
        if self.n < 2 || !self.n.is_power_of_two() {
            return bad(format!("resolution must be a power of two, got {}", self.n));
        }
        if let Hamiltonian::Harmonic { omega } = self.hamiltonian {
            if omega.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
                return bad(format!("frequencies must be non-negative, got {omega:?}"));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> SampleGrid {
        SampleGrid::flat_box(self.n, self.side)
    }

    pub fn spacing(&self) -> f64 {
        self.side / self.n as f64
    }
}

/// Initial wavefunctions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialState {
    /// A library field pulled back to the box by inverse stereographic
    /// projection of `x / scale`, tapered by a Gaussian of width `envelope`.
    Field {
        field: ComplexField,
        scale: f64,
        envelope: f64,
    },
    /// exp(i k·x) with k = 2π m / L.
    PlaneWave { modes: [i64; 3] },
    /// exp(-|x - c|² / (2 w²) + i p·x), a coherent state of the isotropic
    /// oscillator when w = ω^{-1/2}.
    Gaussian {
        center: [f64; 3],
        width: f64,
        momentum: [f64; 3],
    },
}

impl InitialState {
    /// Library field with the default envelope for a box of side `side`.
    pub fn field(field: ComplexField, side: f64) -> InitialState {
        InitialState::Field {
            field,
            scale: 1.0,
            envelope: side / 12.0,
        }
    }

    pub fn value(&self, x: [f64; 3], side: f64) -> Complex64 {
        match *self {
            InitialState::Field {
                ref field,
                scale,
                envelope,
            } => {
                let y = x.map(|v| v / scale);
                let r2: f64 = x.iter().map(|v| v * v).sum();
                field.eval_real(to_sphere(y, Pole::Plus, field.radius)) * (-0.5 * r2 / (envelope * envelope)).exp()
            }
            InitialState::PlaneWave { modes } => {
                let ph: f64 = (0..3)
                    .map(|a| std::f64::consts::TAU * modes[a] as f64 * x[a] / side)
                    .sum();
                Complex64::from_polar(1.0, ph)
            }
            InitialState::Gaussian {
                center,
                width,
                momentum,
            } => {
                let r2: f64 = (0..3).map(|a| (x[a] - center[a]).powi(2)).sum();
                let ph: f64 = (0..3).map(|a| momentum[a] * x[a]).sum();
                Complex64::from_polar((-0.5 * r2 / (width * width)).exp(), ph)
            }
        }
    }
}

/// Sampled wavefunction on the box lattice of a config, x-index fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    pub n: usize,
    pub side: f64,
    pub values: Vec<Complex64>,
    pub time: f64,
    /// L² norm at t = 0.
    pub norm0: f64,
}

impl FieldState {
    pub fn from_values(n: usize, side: f64, values: Vec<Complex64>, time: f64) -> FieldState {
        assert_eq!(values.len(), n * n * n);
        let mut s = FieldState {
            n,
            side,
            values,
            time,
            norm0: 0.0,
        };
        s.norm0 = s.norm();
        s
    }

    pub fn initial(cfg: &EvolutionConfig, init: &InitialState, exec: Execution) -> FieldState {
        let grid = cfg.grid();
        let n = cfg.n;
        let slabs = exec.map_range(0..n, |k| {
            let mut out = Vec::with_capacity(n * n);
            for j in 0..n {
                for i in 0..n {
                    out.push(init.value(grid.position([i as f64, j as f64, k as f64]), cfg.side));
                }
            }
            out
        });
        FieldState::from_values(n, cfg.side, slabs.concat(), 0.0)
    }

    pub fn grid(&self) -> SampleGrid {
        SampleGrid::flat_box(self.n, self.side)
    }

    fn cell_volume(&self) -> f64 {
        (self.side / self.n as f64).powi(3)
    }

    /// L² norm with the lattice quadrature.
    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell_volume()).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Relative L² distance ‖a - b‖ / ‖b‖.
    pub fn relative_distance(&self, other: &FieldState) -> f64 {
        let d: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let b: f64 = other.values.iter().map(|v| v.norm_sqr()).sum();
        (d / b).sqrt()
    }

    /// Probability-weighted mean position, in box coordinates.
    pub fn center(&self) -> [f64; 3] {
        let grid = self.grid();
        let n = self.n;
        let mut acc = [0.0; 3];
        let mut total = 0.0;
        for (idx, v) in self.values.iter().enumerate() {
            let p = v.norm_sqr();
            let x = grid.position([(idx % n) as f64, (idx / n % n) as f64, (idx / (n * n)) as f64]);
            for a in 0..3 {
                acc[a] += p * x[a];
            }
            total += p;
        }
        acc.map(|v| v / total)
    }
}

/// Runs `cfg.steps` steps, keeping the initial state and every
/// `every`-th state (and always the last).
pub fn run(
    cfg: &EvolutionConfig,
    init: FieldState,
    every: usize,
    exec: Execution,
) -> Result<Vec<FieldState>, EvolveError> {
    cfg.validate()?;
    if init.n != cfg.n {
        return Err(EvolveError::Config(format!(
            "state has {} nodes per axis, config {}",
            init.n, cfg.n
        )));
    }
    let every = every.max(1);
    let prop = Propagator::new(cfg, exec);
    let mut state = init;
    let mut out = vec![state.clone()];
    for step in 1..=cfg.steps {
        prop.step(&mut state);
        if step % every == 0 || step == cfg.steps {
            if !state.is_finite() {
                return Err(EvolveError::Overflow { step });
            }
            out.push(state.clone());
        }
    }
    Ok(out)
}
