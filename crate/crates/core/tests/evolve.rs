use num_complex::Complex64;
use proptest::prelude::*;

use qknot::classify::ComplexField;
use qknot::evolve::{
    read_snapshot, run, track_nodal, write_snapshot, EvolutionConfig, FieldState, Hamiltonian, InitialState,
    Propagator, TrackSettings,
};
use qknot::par::Execution;

/// Box side holding the milnor(2,3) nodal curve with room to spare.
const KNOT_SIDE: f64 = 17.6;
const UNITARITY_TOL: f64 = 1e-10;

fn config(hamiltonian: Hamiltonian, n: usize, side: f64, dt: f64, steps: usize) -> EvolutionConfig {
    EvolutionConfig {
        hamiltonian,
        side,
        n,
        dt,
        steps,
    }
}

fn harmonic(w: f64) -> Hamiltonian {
    Hamiltonian::Harmonic { omega: [w; 3] }
}

fn knotted(cfg: &EvolutionConfig) -> FieldState {
    let f: ComplexField = "milnor:2,3".parse().unwrap();
    FieldState::initial(cfg, &InitialState::field(f, cfg.side), Execution::Parallel)
}

fn ground_state(cfg: &EvolutionConfig) -> FieldState {
    let g = InitialState::Gaussian {
        center: [0.0; 3],
        width: 1.0,
        momentum: [0.0; 3],
    };
    FieldState::initial(cfg, &g, Execution::Parallel)
}

fn drift(a: &FieldState, b: &FieldState) -> f64 {
    (a.norm() - b.norm()).abs() / b.norm()
}

#[test]
fn plane_wave_stays_a_phase_multiple_with_no_nodes() {
    let cfg = config(Hamiltonian::Free, 16, 8.0, 0.1, 20);
    let s0 = FieldState::initial(&cfg, &InitialState::PlaneWave { modes: [2, 0, -1] }, Execution::Parallel);
    let history = run(&cfg, s0.clone(), 5, Execution::Parallel).unwrap();
    let k2 = (std::f64::consts::TAU / 8.0).powi(2) * 5.0;
    for s in &history {
        let phase = Complex64::from_polar(1.0, -0.5 * k2 * s.time);
        assert!(s.values.iter().zip(&s0.values).all(|(a, b)| (a - b * phase).norm() < 1e-12));
    }
    let t = track_nodal(&history, TrackSettings::default());
    assert!(t.component_counts().iter().all(|c| *c == Some(0)));
}

#[test]
fn harmonic_ground_state_density_is_stationary() {
    let cfg = config(harmonic(1.0), 64, 16.0, 1e-3, 100);
    let s0 = ground_state(&cfg);
    let last = run(&cfg, s0.clone(), 100, Execution::Parallel).unwrap().pop().unwrap();
    let peak = s0.values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    let worst = last
        .values
        .iter()
        .zip(&s0.values)
        .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).abs())
        .fold(0.0, f64::max);
    assert!(worst / peak < 1e-6, "{}", worst / peak);
}

#[test]
fn knotted_state_keeps_its_norm() {
    for h in [Hamiltonian::Free, harmonic(0.5)] {
        let cfg = config(h, 64, KNOT_SIDE, 0.01, 100);
        let s0 = knotted(&cfg);
        let last = run(&cfg, s0.clone(), 100, Execution::Parallel).unwrap().pop().unwrap();
        assert!(drift(&last, &s0) < UNITARITY_TOL, "{h:?}: {}", drift(&last, &s0));
    }
}

#[test]
fn free_steps_compose_exactly() {
    let cfg = config(Hamiltonian::Free, 32, KNOT_SIDE, 0.04, 1);
    let s0 = knotted(&cfg);
    let mut one = s0.clone();
    Propagator::new(&cfg, Execution::Parallel).step(&mut one);
    let mut two = s0;
    let half = Propagator::with_dt(&cfg, 0.02, Execution::Parallel);
    half.step(&mut two);
    half.step(&mut two);
    assert!(one.relative_distance(&two) < 1e-13, "{}", one.relative_distance(&two));
}

#[test]
fn stepping_back_restores_the_initial_state() {
    for h in [Hamiltonian::Free, harmonic(1.0)] {
        let cfg = config(h, 32, KNOT_SIDE, 0.02, 1);
        let s0 = knotted(&cfg);
        let mut s = s0.clone();
        let fwd = Propagator::new(&cfg, Execution::Parallel);
        let back = Propagator::with_dt(&cfg, -cfg.dt, Execution::Parallel);
        for _ in 0..25 {
            fwd.step(&mut s);
        }
        for _ in 0..25 {
            back.step(&mut s);
        }
        assert!(s.relative_distance(&s0) < UNITARITY_TOL, "{h:?}");
    }
}

/// Coherent-state centre against the classical orbit x(t) = x0 cos t + p0 sin t.
#[test]
fn splitting_error_is_second_order() {
    let (x0, p0, t_end) = ([1.0, 0.0, 0.0], [0.0, 0.5, 0.0], 1.0);
    let init = InitialState::Gaussian {
        center: x0,
        width: 1.0,
        momentum: p0,
    };
    let errors: Vec<f64> = [0.1, 0.05, 0.025]
        .iter()
        .map(|&dt| {
            let steps = (t_end / dt as f64).round() as usize;
            let cfg = config(harmonic(1.0), 64, 16.0, dt, steps);
            let s0 = FieldState::initial(&cfg, &init, Execution::Parallel);
            let c = run(&cfg, s0, steps, Execution::Parallel).unwrap().pop().unwrap().center();
            (0..3)
                .map(|a| (c[a] - (x0[a] * t_end.cos() + p0[a] * t_end.sin())).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.5..4.5).contains(&ratio), "{errors:?}");
    }
}

#[test]
fn static_history_has_identical_curves() {
    let cfg = config(Hamiltonian::Free, 64, KNOT_SIDE, 0.01, 0);
    let s0 = knotted(&cfg);
    let history = run(&cfg, s0.clone(), 1, Execution::Parallel).unwrap();
    assert_eq!(history.len(), 1);
    let t = track_nodal(&[s0.clone(), s0.clone(), s0], TrackSettings::default());
    let counts = t.component_counts();
    assert!(counts[0].is_some_and(|c| c > 0));
    assert!(counts.iter().all(|c| *c == counts[0]));
    assert_eq!(t.max_displacement(), 0.0);
    assert!(t.events.is_empty());
    assert_eq!(t.snapshots[0].curve, t.snapshots[2].curve);
}

#[test]
fn nodeless_gaussian_has_an_empty_curve() {
    let cfg = config(harmonic(1.0), 32, 12.0, 0.01, 20);
    let history = run(&cfg, ground_state(&cfg), 5, Execution::Parallel).unwrap();
    let t = track_nodal(&history, TrackSettings::default());
    assert_eq!(t.snapshots.len(), history.len());
    assert!(t.component_counts().iter().all(|c| *c == Some(0)), "{:?}", t.component_counts());
}

#[test]
fn displacement_shrinks_with_the_time_step() {
    let t_end = 0.1;
    let displacement = |dt: f64| {
        let steps = (t_end / dt as f64).round() as usize;
        let cfg = config(Hamiltonian::Free, 64, KNOT_SIDE, dt, steps);
        let history = run(&cfg, knotted(&cfg), 1, Execution::Parallel).unwrap();
        let t = track_nodal(&history, TrackSettings::default());
        assert!(t.component_counts().iter().all(Option::is_some));
        t.max_displacement()
    };
    let coarse = displacement(0.05);
    let fine = displacement(0.025);
    assert!(fine < coarse, "dt: {coarse}, dt/2: {fine}");
}

#[test]
fn snapshots_round_trip_through_bytes() {
    let cfg = config(Hamiltonian::Free, 16, 6.0, 0.1, 1);
    let s = ground_state(&cfg);
    let mut buf = Vec::new();
    write_snapshot(&s, &mut buf).unwrap();
    assert_eq!(read_snapshot(buf.as_slice()).unwrap(), s);
    buf[0] ^= 1;
    assert!(read_snapshot(buf.as_slice()).is_err());
}

#[test]
fn sequential_and_parallel_runs_agree() {
    let cfg = config(harmonic(0.7), 32, KNOT_SIDE, 0.02, 10);
    let s0 = knotted(&cfg);
    let a = run(&cfg, s0.clone(), 10, Execution::Sequential).unwrap();
    let b = run(&cfg, s0, 10, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_coherent_states_evolve_unitarily(
        center in prop::array::uniform3(-2.0f64..2.0),
        momentum in prop::array::uniform3(-1.5f64..1.5),
        width in 0.6f64..1.8,
        omega in 0.0f64..2.0,
        dt in 1e-3f64..0.1,
    ) {
        let cfg = config(harmonic(omega), 16, 10.0, dt, 20);
        let s0 = FieldState::initial(&cfg, &InitialState::Gaussian { center, width, momentum }, Execution::Sequential);
        let last = run(&cfg, s0.clone(), 20, Execution::Sequential).unwrap().pop().unwrap();
        prop_assert!(drift(&last, &s0) < UNITARITY_TOL);
        let mut back = last;
        let rev = Propagator::with_dt(&cfg, -dt, Execution::Sequential);
        for _ in 0..20 {
            rev.step(&mut back);
        }
        prop_assert!(back.relative_distance(&s0) < UNITARITY_TOL);
    }
}
