// Algebraic invariants checked on random inputs.

use std::sync::OnceLock;

use num_bigint::BigUint;
use proptest::prelude::*;

use primnormal::arith;
use primnormal::ff::{build_field, FieldContext, FieldElement};
use primnormal::knormal;
use primnormal::poly::{self, Poly};
use primnormal::sieve;

const SHAPES: [(u64, u32, u32); 10] = [
    (2, 1, 5),
    (2, 1, 8),
    (2, 2, 3),
    (3, 1, 4),
    (3, 2, 2),
    (5, 1, 3),
    (7, 1, 4),
    (2, 1, 12),
    (3, 1, 6),
    (13, 1, 2),
];

fn fields() -> &'static [FieldContext] {
    static F: OnceLock<Vec<FieldContext>> = OnceLock::new();
    F.get_or_init(|| {
        SHAPES
            .iter()
            .map(|&(p, e, n)| build_field(p, e, n).unwrap())
            .collect()
    })
}

/// A field and three elements of it, given by index.
fn field_and_elements() -> impl Strategy<Value = (usize, u64, u64, u64)> {
    (0..SHAPES.len()).prop_flat_map(|i| {
        let size = fields()[i].cardinality_u64().unwrap();
        (Just(i), 0..size, 0..size, 0..size)
    })
}

fn els(
    i: usize,
    a: u64,
    b: u64,
    c: u64,
) -> (
    &'static FieldContext,
    FieldElement,
    FieldElement,
    FieldElement,
) {
    let ctx = &fields()[i];
    (ctx, ctx.from_index(a), ctx.from_index(b), ctx.from_index(c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms((i, a, b, c) in field_and_elements()) {
        let (ctx, a, b, c) = els(i, a, b, c);
        prop_assert_eq!(ctx.mul(&a, &b), ctx.mul(&b, &a));
        prop_assert_eq!(ctx.mul(&ctx.mul(&a, &b), &c), ctx.mul(&a, &ctx.mul(&b, &c)));
        prop_assert_eq!(ctx.mul(&a, &ctx.add(&b, &c)), ctx.add(&ctx.mul(&a, &b), &ctx.mul(&a, &c)));
        prop_assert_eq!(ctx.sub(&ctx.add(&a, &b), &b), a.clone());
        if !ctx.is_zero(&a) {
            prop_assert_eq!(ctx.mul(&a, &ctx.inv(&a).unwrap()), ctx.one());
        }
        prop_assert_eq!(ctx.index(&a), ctx.index(&ctx.from_index(ctx.index(&a))));
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative((i, a, b, _c) in field_and_elements()) {
        let (ctx, a, b, _) = els(i, a, b, 0);
        let q = ctx.q().clone();
        prop_assert_eq!(ctx.frobenius(&a, 1), ctx.pow(&a, &q));
        prop_assert_eq!(ctx.frobenius(&ctx.add(&a, &b), 1), ctx.add(&ctx.frobenius(&a, 1), &ctx.frobenius(&b, 1)));
        prop_assert_eq!(ctx.frobenius(&ctx.mul(&a, &b), 1), ctx.mul(&ctx.frobenius(&a, 1), &ctx.frobenius(&b, 1)));
        prop_assert_eq!(ctx.frobenius(&a, ctx.n()), a);
    }

    #[test]
    fn traces_are_linear_and_land_in_subfields((i, a, b, c) in field_and_elements()) {
        let (ctx, a, b, c) = els(i, a, b, c);
        // c restricted to F_q acts as a scalar
        let s = ctx.trace(&c, 1).unwrap();
        for m in arith::divisors_u64(ctx.n() as u64) {
            let m = m as u32;
            let ta = ctx.trace(&a, m).unwrap();
            prop_assert!(ctx.project(m, &ta).unwrap().is_some());
            let lhs = ctx.trace(&ctx.add(&ctx.mul(&s, &a), &b), m).unwrap();
            let rhs = ctx.add(&ctx.mul(&s, &ta), &ctx.trace(&b, m).unwrap());
            prop_assert_eq!(lhs, rhs);
            // transitivity through F_{q^m}
            prop_assert_eq!(ctx.relative_trace(&ta, m, 1).unwrap(), ctx.trace(&a, 1).unwrap());
        }
    }

    #[test]
    fn classifiers_agree((i, a, _b, _c) in field_and_elements()) {
        let (ctx, a, _, _) = els(i, a, 0, 0);
        let k = knormal::k_normality(ctx, &a);
        prop_assert_eq!(k, knormal::k_normality_gcd(ctx, &a));
        let m = knormal::sigma_minimal_poly(ctx, &a);
        prop_assert_eq!(m.degree().unwrap() as u32, ctx.n() - k);
        prop_assert!(ctx.is_zero(&poly::linearized_apply(ctx, &m, &a)));
    }

    #[test]
    fn poly_divrem(
        i in 0..SHAPES.len(),
        a in prop::collection::vec(0u32..13, 0..12),
        b in prop::collection::vec(0u32..13, 1..8),
    ) {
        let f = fields()[i].base_field();
        let p = fields()[i].p() as u32;
        let a = Poly::new(f, a.into_iter().map(|c| c % p).collect());
        let b = Poly::new(f, b.into_iter().map(|c| c % p).collect());
        prop_assume!(!b.is_zero());
        let (qt, r) = a.divrem(&b).unwrap();
        prop_assert_eq!(&(&qt * &b) + &r, a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn poly_factor_product(i in 0..SHAPES.len(), c in prop::collection::vec(0u32..13, 2..9)) {
        let f = fields()[i].base_field();
        let p = fields()[i].p() as u32;
        let mut c: Vec<u32> = c.into_iter().map(|x| x % p).collect();
        *c.last_mut().unwrap() = 1;
        let g = Poly::new(f, c);
        let fac = poly::factor_poly(&g).unwrap();
        prop_assert_eq!(fac.product(f), g);
        for (h, _) in &fac.factors {
            prop_assert!(h.is_irreducible());
        }
    }

    #[test]
    fn integer_factor_product(n in 2u64..1_000_000_000_000) {
        let fs = arith::factor_u64(n);
        prop_assert_eq!(fs.iter().map(|&(p, k)| p.pow(k)).product::<u64>(), n);
        prop_assert!(fs.iter().all(|&(p, _)| arith::is_prime_u64(p)));
        let big = arith::factor_default(&BigUint::from(n));
        prop_assert_eq!(big.product(), BigUint::from(n));
    }

    #[test]
    fn quotient_factor_count_matches_factorization(qi in 0usize..8, n in 2u64..40) {
        let (p, e) = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2), (11, 1), (2, 3)][qi];
        let ctx = build_field(p, e, 1).unwrap();
        let f = ctx.base_field();
        let xn = Poly::xn_minus_1(f, n as usize);
        let (t, _) = xn.divrem(&Poly::linear(f, 1)).unwrap();
        let q = p.pow(e);
        prop_assert_eq!(poly::factor_poly(&t).unwrap().distinct_count() as u64, sieve::w_t_quotient(q, n));
        prop_assert_eq!(poly::factor_xn_minus_1(f, n as usize).distinct_count() as u64, sieve::xn_minus_1_factor_count(q, n));
    }
}
