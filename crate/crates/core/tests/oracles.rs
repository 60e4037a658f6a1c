mod common;

use num_bigint::BigInt;
use proptest::prelude::*;

use plumbing::contfrac::{rational, NegContinuedFraction};
use plumbing::{
    enumerate_quadruples, lemma1_check, IntersectionMatrix, PlumbingGraph, SphereQuadruple,
};

use common::{brute_negative_definite, brute_quadruples, cofactor_det, star_corpus};

fn random_tree() -> impl Strategy<Value = PlumbingGraph> {
    (1usize..=9)
        .prop_flat_map(|n| {
            let parents: Vec<_> = (1..n).map(|i| 0..i).collect();
            (prop::collection::vec(-6i64..=1, n), parents)
        })
        .prop_map(|(weights, parents)| {
            let edges: Vec<_> = parents
                .iter()
                .enumerate()
                .map(|(i, &p)| (p, i + 1))
                .collect();
            PlumbingGraph::new(weights, &edges).unwrap()
        })
}

#[test]
fn e8_determinant_matches_cofactor_expansion() {
    let g = PlumbingGraph::star(-2, &[vec![-2], vec![-2, -2], vec![-2, -2, -2, -2]]);
    assert_eq!(cofactor_det(&g.intersection_matrix().rows()), 1);
    assert_eq!(g.determinant(), BigInt::from(1));
}

#[test]
fn sigma_237_minors_are_alternating() {
    let g = PlumbingGraph::star(-1, &[vec![-2], vec![-3], vec![-7]]);
    assert!(brute_negative_definite(&g));
    assert!(g.is_negative_definite());
}

#[test]
fn corpus_determinants_match_cofactor_expansion() {
    for g in star_corpus() {
        let rows = g.intersection_matrix().rows();
        assert_eq!(g.determinant(), BigInt::from(cofactor_det(&rows)), "{g}");
    }
}

proptest! {
    #[test]
    fn bareiss_matches_cofactor_on_trees(g in random_tree()) {
        let rows = g.intersection_matrix().rows();
        prop_assert_eq!(g.determinant(), BigInt::from(cofactor_det(&rows)));
        prop_assert_eq!(g.is_negative_definite(), brute_negative_definite(&g));
    }

    #[test]
    fn bareiss_matches_cofactor_on_dense_matrices(rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 6), 6)) {
        let m = IntersectionMatrix::from_rows(&rows);
        prop_assert_eq!(m.determinant(), BigInt::from(cofactor_det(&rows)));
    }

    #[test]
    fn intersection_matrix_shape(g in random_tree()) {
        let m = g.intersection_matrix();
        for v in 0..g.len() {
            prop_assert_eq!(m.get(v, v), g.weight(v));
            let ones = (0..g.len()).filter(|&w| w != v && m.get(v, w) == 1).count();
            prop_assert_eq!(ones, g.degree(v));
            for w in 0..g.len() {
                prop_assert_eq!(m.get(v, w), m.get(w, v));
                if v != w {
                    prop_assert!(m.get(v, w) == 0 || m.get(v, w) == 1);
                }
            }
        }
    }

    #[test]
    fn negative_definite_forces_negative_weights(g in random_tree()) {
        if g.is_negative_definite() {
            prop_assert!(g.weights().iter().all(|&m| m <= -1));
        }
    }

    #[test]
    fn blow_down_preserves_abs_det(g in random_tree()) {
        let h = g.blow_down().unwrap();
        let (before, after) = (g.determinant(), h.determinant());
        prop_assert_eq!(before.magnitude(), after.magnitude());
        prop_assert!(!(0..h.len()).any(|v| h.weight(v) == -1 && h.degree(v) <= 2));
    }
}

#[test]
fn continued_fraction_round_trip() {
    let mut checked = 0;
    for a in 1..=50i64 {
        for b in -50..0i64 {
            let x = rational(a, b);
            if num_integer::Integer::gcd(&a, &b) != 1 || x >= rational(-1, 1) {
                continue;
            }
            let cf = NegContinuedFraction::expand(&x).unwrap();
            assert!(cf.coeffs().iter().all(|&t| t <= -2));
            assert_eq!(cf.value(), x);
            checked += 1;
        }
    }
    assert!(checked > 700, "{checked}");
}

#[test]
fn three_then_twos_family() {
    for j in 0..30i64 {
        let mut coeffs = vec![-3];
        coeffs.extend(std::iter::repeat_n(-2, j as usize));
        let cf = NegContinuedFraction::new(coeffs).unwrap();
        assert_eq!(cf.value(), rational(2 * j + 3, -(j + 1)));
    }
}

#[test]
fn convergent_recurrences() {
    for a in 2..=50i64 {
        for b in -(a - 1)..0 {
            if num_integer::Integer::gcd(&a, &b) != 1 {
                continue;
            }
            let cf = NegContinuedFraction::expand(&rational(a, b)).unwrap();
            let table = cf.convergents();
            let p = cf.len();
            assert_eq!(table.b(p), -1);
            assert_eq!(table.get(1), (a, b));
            for l in 1..=p {
                let t = cf.coeffs()[l - 1];
                assert_eq!(table.b(l), -table.a(l + 1));
                assert_eq!(table.a(l), -t * table.a(l + 1) + table.b(l + 1));
                assert!(table.a(l) > 0 && table.b(l) < 0);
                let tail = NegContinuedFraction::new(cf.coeffs()[l - 1..].to_vec()).unwrap();
                assert_eq!(tail.value(), rational(table.a(l), table.b(l)));
            }
        }
    }
}

#[test]
fn quadruple_enumeration_matches_brute_scan() {
    for bound in [5, 8, 13, 20, 40] {
        let closure: Vec<_> = enumerate_quadruples(bound)
            .iter()
            .map(|q| (q.a1, q.b1, q.a2, q.b2))
            .collect();
        assert_eq!(closure, brute_quadruples(bound), "bound {bound}");
    }
    assert!(enumerate_quadruples(20).len() >= 10);
}

#[test]
fn exactly_one_ratio_at_least_minus_two() {
    for (a1, b1, a2, b2) in brute_quadruples(60) {
        let small = |a: i64, b: i64| a <= -2 * b;
        assert!(small(a1, b1) != small(a2, b2), "({a1},{b1},{a2},{b2})");
    }
}

#[test]
fn reduction_terminates_in_base_family() {
    for q in enumerate_quadruples(60) {
        let mut cur = q;
        let mut steps = 0;
        while let Ok(next) = cur.reduce() {
            assert!(next.sum() < cur.sum());
            assert!(next.a1 > 0 && next.a2 > 0);
            cur = next;
            steps += 1;
        }
        assert!(steps < q.sum());
        assert!(cur.is_base_case());
        assert_eq!((cur.a1, cur.b1), (2, -1));
        assert_eq!(cur.a2, 1 - 2 * cur.b2);
    }
}

#[test]
fn bumped_inequalities_hold_on_every_quadruple() {
    for q in enumerate_quadruples(60) {
        let (r1, r2) = q.rays();
        let ok = lemma1_check(&r1.continued_fraction(), &r2.continued_fraction()).unwrap();
        assert_eq!(ok, (true, true), "{q}");
    }
}

#[test]
fn quadruple_from_either_order() {
    assert_eq!(
        SphereQuadruple::new(4, -1, 3, -2).unwrap(),
        SphereQuadruple::new(3, -2, 4, -1).unwrap()
    );
}
