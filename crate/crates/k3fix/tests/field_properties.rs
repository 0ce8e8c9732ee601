//! Property suites for the cyclotomic field arithmetic.

mod common;

use common::{approx_eq, moebius, phi_by_counting, Cx};
use k3fix::cyclotomic::{
    cyclotomic_polynomial, divisors, euler_phi, primitive_trace, CyclotomicNumber, IntPoly,
};
use k3fix::{ratio, Rational};
use proptest::prelude::*;

fn embed_oracle(v: &CyclotomicNumber) -> Cx {
    let mut acc = Cx::new(0.0, 0.0);
    for (e, c) in v.coords().iter().enumerate() {
        let c = num_traits::ToPrimitive::to_f64(c).unwrap();
        acc = acc.add(Cx::root_of_unity(v.conductor(), e as i64).scale(c));
    }
    acc
}

/// Random element with coordinate height <= 1000.
fn cyclotomic(conductor: u32) -> impl Strategy<Value = CyclotomicNumber> {
    prop::collection::vec((-1000i64..=1000, 1i64..=1000), euler_phi(conductor)).prop_map(
        move |pairs| {
            let coords: Vec<Rational> = pairs.into_iter().map(|(n, d)| ratio(n, d)).collect();
            CyclotomicNumber::from_coords(conductor, coords).unwrap()
        },
    )
}

fn any_cyclotomic() -> impl Strategy<Value = CyclotomicNumber> {
    prop::sample::select(vec![1u32, 2, 6, 7, 12, 21, 42]).prop_flat_map(cyclotomic)
}

proptest! {
    #[test]
    fn addition_commutes_and_associates(
        (a, b, c) in prop::sample::select(vec![7u32, 21, 42]).prop_flat_map(|n| {
            (cyclotomic(n), cyclotomic(n), cyclotomic(n))
        })
    ) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a - &b) + &b, a);
    }

    #[test]
    fn multiplication_commutes_associates_distributes(
        (a, b, c) in prop::sample::select(vec![7u32, 21, 42]).prop_flat_map(|n| {
            (cyclotomic(n), cyclotomic(n), cyclotomic(n))
        })
    ) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn nonzero_elements_invert(a in any_cyclotomic()) {
        prop_assume!(!a.is_zero());
        let inv = a.invert().unwrap();
        prop_assert_eq!(&a * &inv, CyclotomicNumber::one(a.conductor()));
    }

    #[test]
    fn embedding_respects_the_operations(
        (a, b) in prop::sample::select(vec![7u32, 12, 21, 42]).prop_flat_map(|n| {
            (cyclotomic(n), cyclotomic(n))
        })
    ) {
        let (ea, eb) = (embed_oracle(&a), embed_oracle(&b));
        prop_assert!(approx_eq((&a + &b).embed(), ea.add(eb), 1e-9));
        prop_assert!(approx_eq((&a * &b).embed(), ea.mul(eb), 1e-9));
    }

    #[test]
    fn embedding_of_inverse(a in cyclotomic(21)) {
        prop_assume!(!a.is_zero());
        let inv = a.invert().unwrap();
        // compare in product form; a tiny |embed(a)| makes 1/z ill-conditioned
        let product = embed_oracle(&a).mul(Cx::new(inv.embed().0, inv.embed().1));
        prop_assert!(approx_eq((product.re, product.im), Cx::one(), 1e-6));
    }
}

#[test]
fn primitive_trace_is_moebius_up_to_100() {
    for n in 1..=100 {
        assert_eq!(primitive_trace(n), moebius(n), "n = {n}");
    }
}

#[test]
fn totient_matches_counting_and_divisor_sum() {
    for n in 1..=100u32 {
        assert_eq!(euler_phi(n), phi_by_counting(n), "phi({n})");
        let total: usize = divisors(n).into_iter().map(euler_phi).sum();
        assert_eq!(total, n as usize, "sum of phi(d) over d | {n}");
    }
}

#[test]
fn cyclotomic_product_identity_up_to_100() {
    for n in 1..=100u32 {
        let mut product = IntPoly::from_i64(&[1]);
        for d in divisors(n) {
            product = product.mul(&cyclotomic_polynomial(d));
        }
        assert_eq!(product, IntPoly::x_pow_minus_one(n), "n = {n}");
    }
}

#[test]
fn embedding_of_inverted_product_example() {
    // 1 / ((1 - zeta^2)(1 - zeta^20)) in Q(zeta_21), against direct complex
    // evaluation
    let one = CyclotomicNumber::one(21);
    let f2 = &one - &CyclotomicNumber::root_power(21, 2);
    let f20 = &one - &CyclotomicNumber::root_power(21, 20);
    let exact = (&f2 * &f20).invert().unwrap();

    let c2 = Cx::one().sub(Cx::root_of_unity(21, 2));
    let c20 = Cx::one().sub(Cx::root_of_unity(21, 20));
    let expected = c2.mul(c20).inv();
    assert!(approx_eq(exact.embed(), expected, 1e-9));
}

#[test]
fn root_powers_embed_onto_the_unit_circle() {
    for n in [7u32, 21, 42] {
        for k in 0..n as i64 {
            let z = CyclotomicNumber::root_power(n, k);
            assert!(
                approx_eq(z.embed(), Cx::root_of_unity(n, k), 1e-9),
                "zeta_{n}^{k}"
            );
        }
    }
}
