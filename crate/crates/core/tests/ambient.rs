mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qknot::ambient::{orbit, replay, same_orbit, AmbientError, MoveInstance, MoveTable, OrbitSettings};
use qknot::hilbert::{act, StateVector};
use qknot::mosaic::{library, Mosaic};

/// Orbit sizes under the shipped move table.
const TREFOIL_ORBIT: usize = 2;
const FIGURE_EIGHT_ORBIT: usize = 224;
const CIRCLE_4_ORBIT: usize = 1420;

fn table() -> MoveTable {
    MoveTable::default_table()
}

/// A valid mosaic together with move instances, half of which are known
/// to match a block of the mosaic.
fn mosaic_and_moves() -> impl Strategy<Value = (Mosaic, Vec<MoveInstance>)> {
    (any::<u64>(), 2usize..=5).prop_map(|(seed, n)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = table();
        let m = common::random_valid(n, &mut rng, 0.4);
        let all = t.instances(n);
        let mut moves = Vec::new();
        let mut cur = m.clone();
        for _ in 0..6 {
            let nb = t.neighbors(&cur);
            let mv = if !nb.is_empty() && rng.gen_bool(0.5) {
                t.instance(nb[rng.gen_range(0..nb.len())].1)
            } else {
                all[rng.gen_range(0..all.len())].clone()
            };
            cur = mv.apply(&cur).unwrap();
            moves.push(mv);
        }
        (m, moves)
    })
}

#[test]
fn pinned_orbit_sizes() {
    let t = table();
    let s = OrbitSettings::default();
    assert_eq!(orbit(&library::trefoil(), &t, s).unwrap().len(), TREFOIL_ORBIT);
    assert_eq!(orbit(&library::figure_eight(), &t, s).unwrap().len(), FIGURE_EIGHT_ORBIT);
    assert_eq!(orbit(&library::circle_at(4, 0, 0), &t, s).unwrap().len(), CIRCLE_4_ORBIT);
}

#[test]
fn orbit_is_independent_of_the_starting_member() {
    let t = table();
    let s = OrbitSettings::default();
    let a = orbit(&library::circle_at(4, 0, 0), &t, s).unwrap();
    let b = orbit(&library::circle_at(4, 2, 2), &t, s).unwrap();
    assert_eq!(a.keys(), b.keys());
}

#[test]
fn witnesses_replay_to_their_target() {
    let t = table();
    let s = OrbitSettings::default();
    let a = library::circle_at(4, 0, 0);
    let b = library::circle_at(4, 2, 1);
    let r = same_orbit(&a, &b, &t, s).unwrap();
    assert!(r.same);
    assert_eq!(replay(&a, r.witness.as_ref().unwrap()).unwrap(), b);

    let o = orbit(&a, &t, s).unwrap();
    for m in o.members().iter().step_by(97) {
        let w = o.witness(m, &t).unwrap();
        assert_eq!(&replay(o.representative(), &w).unwrap(), m);
    }
}

#[test]
fn trefoil_and_unknot_are_in_different_orbits() {
    let r = same_orbit(&library::trefoil(), &library::circle_at(4, 1, 1), &table(), OrbitSettings::default()).unwrap();
    assert!(!r.same);
    assert!(r.witness.is_none());
}

#[test]
fn budget_overrun_is_an_error() {
    let s = OrbitSettings {
        budget: 10,
        ..Default::default()
    };
    match orbit(&library::circle_at(4, 0, 0), &table(), s) {
        Err(AmbientError::BudgetExceeded { budget: 10, .. }) => {}
        other => panic!("expected a budget error, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn moves_are_validity_preserving_involutions((m, moves) in mosaic_and_moves()) {
        for mv in &moves {
            let once = mv.apply(&m).unwrap();
            prop_assert!(once.validate().unwrap().valid);
            prop_assert_eq!(mv.apply(&once).unwrap(), m.clone());
        }
    }

    #[test]
    fn action_on_states_preserves_inner_products((m, moves) in mosaic_and_moves(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = table();
        let mut labels = vec![m.clone()];
        labels.extend(t.neighbors(&m).into_iter().map(|(x, _)| x).take(4));
        let mut psi = StateVector::zero();
        let mut phi = StateVector::zero();
        for l in &labels {
            psi.add(l.encode(), Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            phi.add(l.encode(), Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
        let gpsi = act(&moves, &psi).unwrap();
        let gphi = act(&moves, &phi).unwrap();
        prop_assert!((gpsi.norm_sqr() - psi.norm_sqr()).abs() < 1e-12);
        prop_assert!((gpsi.inner(&gphi) - psi.inner(&phi)).norm() < 1e-12);
        let inverse: Vec<MoveInstance> = moves.iter().rev().cloned().collect();
        let back = act(&inverse, &gpsi).unwrap();
        prop_assert!((back.inner(&psi) - psi.norm_sqr()).norm() < 1e-12);
    }
}
