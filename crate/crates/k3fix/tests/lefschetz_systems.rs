//! System-level checks of the holomorphic Lefschetz constraint builder.

mod common;

use std::collections::BTreeMap;

use common::{approx_eq, Cx};
use k3fix::cyclotomic::{euler_phi, CyclotomicNumber};
use k3fix::lefschetz::{
    build_holomorphic_system, curve_unit_term, holomorphic_lhs, isolated_point_types,
    multiplicity_name, point_term, CurveContribution, FixedLocusConfig, PointType,
};
use k3fix::{rat, Rational};

fn pt(order: u32, i: u32, j: u32) -> PointType {
    PointType::new(order, i, j).unwrap()
}

#[test]
fn point_term_agrees_with_complex_evaluation() {
    for (order, i, j) in [(7u32, 2u32, 6u32), (7, 4, 4), (21, 2, 20), (42, 7, 36)] {
        let exact = point_term(&pt(order, i, j)).unwrap();
        let expected = Cx::one()
            .sub(Cx::root_of_unity(order, i as i64))
            .mul(Cx::one().sub(Cx::root_of_unity(order, j as i64)))
            .inv();
        assert!(
            approx_eq(exact.embed(), expected, 1e-9),
            "a(P_{order}^({i},{j}))"
        );
    }
}

#[test]
fn curve_unit_term_agrees_with_complex_evaluation() {
    for order in [7u32, 21, 42] {
        let exact = curve_unit_term(order).unwrap();
        let z = Cx::root_of_unity(order, 1);
        let d = Cx::one().sub(z);
        let expected = Cx::one().add(z).div(d.mul(d));
        assert!(approx_eq(exact.embed(), expected, 1e-9), "order {order}");
    }
}

#[test]
fn galois_conjugate_sums_of_point_terms_are_rational() {
    // the full conjugate orbit sum is Galois-invariant, hence in Q
    for order in 3..=42u32 {
        for t in isolated_point_types(order) {
            let term = point_term(&t).unwrap();
            let mut total = CyclotomicNumber::zero(order);
            for k in 1..order {
                if common::gcd(k, order) == 1 {
                    total = &total + &term.galois(k);
                }
            }
            assert!(
                total.as_rational().is_some(),
                "conjugate sum of a(P_{order}^{t}) must be rational"
            );
        }
    }
}

#[test]
fn order_21_substitution_invariant() {
    // the known fixed-locus multiset solves every coordinate equation
    let system = build_holomorphic_system(21).unwrap();
    let mut m = BTreeMap::new();
    m.insert(pt(21, 2, 20), 3u32);
    m.insert(pt(21, 3, 19), 2);
    m.insert(pt(21, 4, 18), 1);
    m.insert(pt(21, 5, 17), 1);
    m.insert(pt(21, 6, 16), 1);
    m.insert(pt(21, 7, 15), 3);
    let config = FixedLocusConfig::new(21, m, CurveContribution::new(vec![0])).unwrap();
    assert!(system.is_satisfied_by(&config.as_values(&system)));
    assert_eq!(config.total_points(), 11);
    assert_eq!(config.euler(), 13);
}

#[test]
fn order_42_substitution_invariant() {
    let system = build_holomorphic_system(42).unwrap();
    let mut m = BTreeMap::new();
    m.insert(pt(42, 2, 41), 3u32);
    m.insert(pt(42, 3, 40), 2);
    m.insert(pt(42, 4, 39), 1);
    m.insert(pt(42, 5, 38), 1);
    m.insert(pt(42, 6, 37), 1);
    m.insert(pt(42, 7, 36), 1);
    let config = FixedLocusConfig::new(42, m, CurveContribution::new(vec![0])).unwrap();
    assert!(system.is_satisfied_by(&config.as_values(&system)));
    assert_eq!(config.total_points(), 9);
    assert_eq!(config.euler(), 11);
}

#[test]
fn wrong_substitutions_fail() {
    let system = build_holomorphic_system(21).unwrap();
    let mut m = BTreeMap::new();
    m.insert(pt(21, 2, 20), 4u32); // off by one
    m.insert(pt(21, 3, 19), 2);
    m.insert(pt(21, 4, 18), 1);
    m.insert(pt(21, 5, 17), 1);
    m.insert(pt(21, 6, 16), 1);
    m.insert(pt(21, 7, 15), 3);
    let config = FixedLocusConfig::new(21, m, CurveContribution::new(vec![0])).unwrap();
    assert!(!system.is_satisfied_by(&config.as_values(&system)));
}

#[test]
fn system_dimensions_by_exact_elimination() {
    // (#types + 1) - rank is the affine dimension of the rational solution set
    for (order, expected_rank) in [(7u32, 3usize), (21, 6), (42, 6)] {
        let system = build_holomorphic_system(order).unwrap();
        assert_eq!(system.equalities.len(), euler_phi(order));
        assert_eq!(system.rank(), expected_rank, "order {order}");
        let dim = system.num_vars() - system.rank();
        let elim = system.reduced(&[]).unwrap();
        assert_eq!(elim.free.len(), dim, "free variables = solution dimension");
    }
}

#[test]
fn order_7_rational_solution_line() {
    // eliminating everything but g_sum: m(2,6) = 2g+2, m(3,5) = 2g+1,
    // m(4,4) = g
    let system = build_holomorphic_system(7).unwrap();
    let elim = system.solve_for(&["m(2,6)", "m(3,5)", "m(4,4)"]).unwrap();
    let g_col = system.variable_index("g_sum").unwrap();
    let expect = [("m(2,6)", rat(2), rat(2)), ("m(3,5)", rat(2), rat(1)), ("m(4,4)", rat(1), rat(0))];
    for (name, g_coeff, constant) in expect {
        let row = elim.row_for(name).unwrap();
        assert_eq!(row.constant, constant, "{name} constant");
        let term: Vec<&(usize, Rational)> =
            row.terms.iter().filter(|(c, _)| *c == g_col).collect();
        assert_eq!(term.len(), 1, "{name} depends only on g_sum");
        assert_eq!(term[0].1, g_coeff, "{name} coefficient of g_sum");
        assert_eq!(row.terms.len(), 1);
    }
}

#[test]
fn multiplicity_names_are_stable() {
    assert_eq!(multiplicity_name(&pt(21, 2, 20)), "m(2,20)");
    let lhs = holomorphic_lhs(21).unwrap();
    assert_eq!(lhs.coords()[0], rat(1));
}
