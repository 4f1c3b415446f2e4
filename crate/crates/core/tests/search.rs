// Search behaviour: determinism, the n = 2 exhaustion, prescribed traces
// and the construction for p^2 | n.

use primnormal::arith;
use primnormal::ff::build_field;
use primnormal::knormal;
use primnormal::search::{
    find_primitive_with_trace, search_primitive_1normal, search_via_trace_lift, SearchOptions,
    SearchStatus,
};
use primnormal::Error;

#[test]
fn hit_is_the_minimal_exponent_for_any_job_count() {
    let ctx = build_field(2, 1, 14).unwrap();
    let exps: Vec<Option<u64>> = [1, 2, 8]
        .into_iter()
        .map(|jobs| {
            let opts = SearchOptions {
                jobs: Some(jobs),
                ..Default::default()
            };
            search_primitive_1normal(&ctx, &opts).unwrap().exponent
        })
        .collect();
    assert!(exps[0].is_some());
    assert!(exps.iter().all(|e| *e == exps[0]), "{exps:?}");
}

#[test]
fn iteration_cap_reports_budget() {
    let ctx = build_field(13, 1, 2).unwrap();
    let opts = SearchOptions {
        max_iterations: Some(5),
        ..Default::default()
    };
    let r = search_primitive_1normal(&ctx, &opts).unwrap();
    assert_eq!(r.status, SearchStatus::Budget);
}

// n = 3: every primitive element of trace zero is 1-normal; for q = 4 there
// is no primitive element of trace zero at all
#[test]
fn trace_zero_primitive_cubics_are_one_normal() {
    for q in arith::prime_powers_in(2, 16) {
        let (p, e) = arith::prime_power_decompose(q).unwrap();
        let ctx = build_field(p, e, 3).unwrap();
        let size = ctx.cardinality_u64().unwrap();
        let ks: Vec<u32> = (1..size)
            .map(|i| ctx.from_index(i))
            .filter(|a| ctx.is_zero(&ctx.trace(a, 1).unwrap()) && ctx.is_primitive(a))
            .map(|a| knormal::k_normality(&ctx, &a))
            .collect();
        assert_eq!(ks.is_empty(), q == 4, "q = {q}");
        assert!(ks.iter().all(|&k| k == 1), "q = {q}: {ks:?}");
    }
}

#[test]
fn prescribed_trace() {
    let ctx = build_field(3, 1, 4).unwrap();
    for k in 0..9 {
        let beta = ctx.subfield_element(2, k).unwrap();
        let r = find_primitive_with_trace(&ctx, 2, &beta, &SearchOptions::default()).unwrap();
        if let Some(a) = &r.element {
            assert!(ctx.is_primitive(a));
            assert_eq!(ctx.trace(a, 2).unwrap(), beta);
        }
    }
    let outside = ctx.generator().clone();
    assert!(matches!(
        find_primitive_with_trace(&ctx, 2, &outside, &SearchOptions::default()),
        Err(Error::Hypothesis(_))
    ));
}

#[test]
fn trace_lift_when_p_squared_divides_n() {
    for (p, n) in [(2, 4), (2, 8), (2, 12), (3, 9)] {
        let ctx = build_field(p, 1, n).unwrap();
        let lift = search_via_trace_lift(&ctx, &SearchOptions::default()).unwrap();
        let a = lift.result.element.expect("lift found");
        assert!(ctx.is_primitive(&a));
        assert_eq!(knormal::k_normality(&ctx, &a), 1);
    }
    let ctx = build_field(2, 1, 6).unwrap();
    assert!(matches!(
        search_via_trace_lift(&ctx, &SearchOptions::default()),
        Err(Error::Hypothesis(_))
    ));
}
