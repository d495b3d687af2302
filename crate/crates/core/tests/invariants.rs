mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qknot::ambient::{orbit, MoveTable, OrbitSettings};
use qknot::invariants::{bracket, jones, jones_in_t, jones_of_mosaic, BracketSettings, LaurentPoly, PlanarDiagram};
use qknot::mosaic::{library, Mosaic};

use common::*;

const TREFOIL_PD: &str = include_str!("../fixtures/trefoil.pd");
const FIGURE_EIGHT_PD: &str = include_str!("../fixtures/figure_eight.pd");

fn settings() -> BracketSettings {
    BracketSettings::default()
}

fn bracket_poly(p: &Poly) -> LaurentPoly {
    LaurentPoly::from_terms(p.iter().map(|(&e, &c)| (e, c)))
}

#[test]
fn fixture_mosaics_match_the_state_sum_oracle() {
    for m in [library::trefoil(), library::figure_eight(), library::circle_2x2()] {
        let d = PlanarDiagram::from_mosaic(&m).unwrap();
        assert_eq!(bracket(&d, settings()).unwrap(), bracket_poly(&mosaic_bracket(&m)));
        assert_eq!(jones_of_mosaic(&m, settings()).unwrap(), mosaic_jones(&m));
    }
    assert_eq!(mosaic_jones(&library::trefoil()), right_trefoil());
    assert_eq!(mosaic_jones(&library::figure_eight()), figure_eight());
    assert_eq!(mosaic_jones(&library::circle_2x2()), LaurentPoly::one());
}

#[test]
fn fixture_pd_codes_match_the_label_oracle() {
    for text in [TREFOIL_PD, FIGURE_EIGHT_PD] {
        let d = PlanarDiagram::from_pd_text(text).unwrap();
        let quads = parse_pd(text);
        assert_eq!(bracket(&d, settings()).unwrap(), bracket_poly(&pd_bracket(&quads)));
        assert_eq!(jones(&d, settings()).unwrap(), pd_jones(&quads));
    }
    assert_eq!(pd_jones(&parse_pd(FIGURE_EIGHT_PD)), figure_eight());
    let t = pd_jones(&parse_pd(TREFOIL_PD));
    assert!(t == right_trefoil() || t == right_trefoil().invert_variable());
}

#[test]
fn pd_text_survives_a_round_trip() {
    for m in [library::trefoil(), library::figure_eight()] {
        let d = PlanarDiagram::from_mosaic(&m).unwrap();
        let back = PlanarDiagram::from_pd_text(&d.pd_text()).unwrap();
        assert_eq!(jones(&back, settings()).unwrap(), jones(&d, settings()).unwrap());
    }
}

#[test]
fn trefoil_determinant_is_three() {
    let v = jones_in_t(&jones_of_mosaic(&library::trefoil(), settings()).unwrap()).unwrap();
    assert_eq!(v.evaluate(-1.0).unwrap().abs(), 3.0);
    let v = jones_in_t(&jones_of_mosaic(&library::figure_eight(), settings()).unwrap()).unwrap();
    assert_eq!(v.evaluate(-1.0).unwrap().abs(), 5.0);
}

#[test]
fn split_union_multiplies_by_the_loop_value() {
    let mut m = Mosaic::blank(9);
    m.write_block(0, 0, 4, library::trefoil().cells());
    m.write_block(4, 4, 5, library::figure_eight().cells());
    let loop_value = LaurentPoly::from_terms([(1, -1), (-1, -1)]);
    let expected = &(&right_trefoil() * &figure_eight()) * &loop_value;
    assert_eq!(jones_of_mosaic(&m, settings()).unwrap(), expected);
}

#[test]
fn sequential_and_parallel_state_sums_agree() {
    let d = PlanarDiagram::from_mosaic(&library::figure_eight()).unwrap();
    let seq = BracketSettings {
        execution: qknot::par::Execution::Sequential,
        ..settings()
    };
    assert_eq!(bracket(&d, seq).unwrap(), bracket(&d, settings()).unwrap());
}

#[test]
fn crossing_cap_is_enforced() {
    let d = PlanarDiagram::from_mosaic(&library::figure_eight()).unwrap();
    let capped = BracketSettings { cap: 3, ..settings() };
    assert!(bracket(&d, capped).is_err());
}

fn mosaic_bracket_of(m: &Mosaic) -> LaurentPoly {
    bracket(&PlanarDiagram::from_mosaic(m).unwrap(), settings()).unwrap()
}

/// Planar, R2 and R3 moves fix the bracket; an R1 move multiplies it by -A^(±3).
fn check_single_moves(m: &Mosaic, table: &MoveTable) {
    let b = mosaic_bracket_of(m);
    let twist_up = &b * &LaurentPoly::monomial(-1, 3);
    let twist_down = &b * &LaurentPoly::monomial(-1, -3);
    for (next, mv) in table.neighbors(m) {
        let name = &table.templates()[mv.template as usize].name;
        let nb = mosaic_bracket_of(&next);
        if name.starts_with("R1") {
            assert!(nb == twist_up || nb == twist_down, "{name} on\n{}", m.render());
        } else {
            assert_eq!(nb, b, "{name} on\n{}", m.render());
        }
    }
}

#[test]
fn single_moves_act_on_the_bracket_as_expected() {
    let table = MoveTable::default_table();
    let o = orbit(&library::circle_at(4, 1, 1), &table, OrbitSettings::default()).unwrap();
    for m in o.members().iter().step_by(7) {
        check_single_moves(m, &table);
    }
    for m in [library::trefoil(), library::figure_eight()] {
        let o = orbit(&m, &table, OrbitSettings::default()).unwrap();
        for member in o.members() {
            check_single_moves(member, &table);
        }
    }
}

fn knot_strategy(max_crossings: usize) -> impl Strategy<Value = Mosaic> {
    (any::<u64>(), 3usize..=5).prop_filter_map("too many crossings or no strands", move |(seed, n)| {
        let m = random_valid(n, &mut ChaCha8Rng::seed_from_u64(seed), 0.45);
        (m.crossing_count() <= max_crossings && m.cells().iter().any(|&c| c != 0)).then_some(m)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bracket_matches_oracle_on_random_mosaics(m in knot_strategy(8)) {
        let d = PlanarDiagram::from_mosaic(&m).unwrap();
        prop_assert_eq!(bracket(&d, settings()).unwrap(), bracket_poly(&mosaic_bracket(&m)));
    }

    #[test]
    fn jones_matches_oracle_on_random_knots(m in knot_strategy(8)) {
        let d = PlanarDiagram::from_mosaic(&m).unwrap();
        prop_assume!(d.component_count() == 1);
        prop_assert_eq!(jones(&d, settings()).unwrap(), mosaic_jones(&m));
    }

    #[test]
    fn mirror_inverts_the_variable(m in knot_strategy(8)) {
        let d = PlanarDiagram::from_mosaic(&m).unwrap();
        prop_assume!(d.component_count() == 1);
        let v = jones(&d, settings()).unwrap();
        prop_assert_eq!(jones_of_mosaic(&m.mirror(), settings()).unwrap(), v.invert_variable());
    }

    #[test]
    fn simplification_preserves_jones(m in knot_strategy(8)) {
        let d = PlanarDiagram::from_mosaic(&m).unwrap();
        let s = d.simplify();
        prop_assert!(s.crossing_count() <= d.crossing_count());
        prop_assert_eq!(jones(&s, settings()).unwrap(), jones(&d, settings()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jones_is_constant_on_orbits(m in knot_strategy(6)) {
        prop_assume!(m.size() <= 4);
        prop_assume!(PlanarDiagram::from_mosaic(&m).unwrap().component_count() == 1);
        let table = MoveTable::default_table();
        let o = orbit(&m, &table, OrbitSettings { budget: 20_000, ..Default::default() });
        prop_assume!(o.is_ok());
        let o = o.unwrap();
        let v = jones_of_mosaic(&m, settings()).unwrap();
        for member in o.members().iter().take(300) {
            prop_assert_eq!(&jones_of_mosaic(member, settings()).unwrap(), &v);
        }
    }
}
