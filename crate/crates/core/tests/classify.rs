mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qknot::classify::{abelianization_rank, phase, wirtinger, ClassifyError, ComplexField, FieldKind};
use qknot::invariants::PlanarDiagram;
use qknot::mosaic::library;

const TREFOIL_PD: &str = include_str!("../fixtures/trefoil.pd");
const FIGURE_EIGHT_PD: &str = include_str!("../fixtures/figure_eight.pd");

/// Absolute determinant of a square integer matrix by Bareiss elimination.
fn det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]).abs()
}

/// Knot determinant from Fox colorings: each crossing imposes
/// 2·over − under_in − under_out = 0; any first minor of that matrix.
fn coloring_determinant(d: &PlanarDiagram) -> i128 {
    let w = wirtinger(d).unwrap();
    if w.relations.is_empty() {
        return 1;
    }
    let mut m = vec![vec![0i128; w.arcs]; w.relations.len()];
    for (row, r) in m.iter_mut().zip(&w.relations) {
        row[r.over] += 2;
        row[r.input] -= 1;
        row[r.output] -= 1;
    }
    let minor: Vec<Vec<i128>> = m[1..].iter().map(|row| row[1..].to_vec()).collect();
    det(minor)
}

fn check_knot(d: &PlanarDiagram) {
    let w = wirtinger(d).unwrap();
    let p = w.presentation();
    assert_eq!(w.relations.len(), d.crossing_count());
    assert_eq!(w.arcs, d.crossing_count().max(1));
    for r in &p.relators {
        assert_eq!(p.degree_under_t(r), 0);
    }
    assert_eq!(abelianization_rank(&p), 1);
}

#[test]
fn fixture_presentations() {
    for m in [library::trefoil(), library::figure_eight(), library::circle_2x2()] {
        check_knot(&PlanarDiagram::from_mosaic(&m).unwrap());
    }
    for text in [TREFOIL_PD, FIGURE_EIGHT_PD] {
        check_knot(&PlanarDiagram::from_pd_text(text).unwrap());
    }
}

#[test]
fn coloring_determinants_of_the_fixtures() {
    let det_of = |m| coloring_determinant(&PlanarDiagram::from_mosaic(&m).unwrap());
    assert_eq!(det_of(library::trefoil()), 3);
    assert_eq!(det_of(library::figure_eight()), 5);
    assert_eq!(det_of(library::circle_2x2()), 1);
}

#[test]
fn links_are_refused() {
    let mut m = qknot::mosaic::Mosaic::blank(4);
    m.write_block(0, 0, 2, library::circle_2x2().cells());
    m.write_block(2, 2, 2, library::circle_2x2().cells());
    let d = PlanarDiagram::from_mosaic(&m).unwrap();
    assert!(matches!(wirtinger(&d), Err(ClassifyError::NotAKnot(2))));
}

#[test]
fn field_names_parse() {
    let f: ComplexField = "milnor:2,3".parse().unwrap();
    assert_eq!(f.kind, FieldKind::Milnor { p: 2, q: 3 });
    assert_eq!("milnor(2,3)".parse::<ComplexField>().unwrap(), f);
    assert_eq!(f.to_string().parse::<ComplexField>().unwrap(), f);
    assert!("milnor:0,3".parse::<ComplexField>().is_err());
    assert!("unknot:1".parse::<ComplexField>().is_err());
    assert!(matches!("solenoid".parse::<ComplexField>(), Err(ClassifyError::UnknownField(_))));
    assert_eq!(ComplexField::milnor(2, 4).unwrap().expected_components(), Some(2));
}

#[test]
fn phase_is_undefined_on_the_zero_set() {
    let f = ComplexField::new(FieldKind::Unknot);
    let zero = Complex64::new(0.0, 0.0);
    assert!(matches!(
        phase(&f, zero, Complex64::new(1.0, 0.0), 1e-12),
        Err(ClassifyError::UndefinedPhase { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_knots_have_consistent_presentations(seed in any::<u64>(), n in 3usize..=5) {
        let m = common::random_valid(n, &mut ChaCha8Rng::seed_from_u64(seed), 0.45);
        prop_assume!(m.crossing_count() <= 8 && m.cells().iter().any(|&c| c != 0));
        let d = PlanarDiagram::from_mosaic(&m).unwrap();
        prop_assume!(d.component_count() == 1);
        check_knot(&d);
        let jones_det = common::mosaic_jones(&m)
            .terms()
            .map(|(e, c)| {
                // t^(e/2) at t = -1 is i^e; the sum is real for knots
                let re = [1, 0, -1, 0][e.rem_euclid(4) as usize];
                re * c as i128
            })
            .sum::<i128>()
            .abs();
        prop_assert_eq!(coloring_determinant(&d), jones_det);
    }

    #[test]
    fn phase_lies_in_a_full_turn(re in -2.0f64..2.0, im in -2.0f64..2.0, wr in -2.0f64..2.0, wi in -2.0f64..2.0) {
        let f = ComplexField::milnor(2, 3).unwrap();
        let (z, w) = (Complex64::new(re, im), Complex64::new(wr, wi));
        prop_assume!(f.eval(z, w).norm() > 1e-9);
        let a = phase(&f, z, w, 1e-12).unwrap();
        prop_assert!((0.0..std::f64::consts::TAU).contains(&a));
        let v = f.eval(z, w);
        prop_assert!((Complex64::from_polar(v.norm(), a) - v).norm() < 1e-9 * (1.0 + v.norm()));
    }
}
