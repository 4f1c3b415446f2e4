// Primitive elements of prescribed trace, and the construction for p^2 | n
// that lifts an element of F_{q^{ps}} with σ-minimal polynomial
// (x^{ps} - 1)/(x - 1) to a primitive 1-normal element.
//
// cargo run --release --example trace_lift

use primnormal::search::{find_primitive_with_trace, search_via_trace_lift, SearchOptions};
use primnormal::{build_field, knormal, Result};

fn main() -> Result<()> {
    let opts = SearchOptions::default();

    let ctx = build_field(2, 2, 3)?;
    let r = find_primitive_with_trace(&ctx, 1, &ctx.zero(), &opts)?;
    println!("F_64 over F_4, trace 0: {:?}", r.status);
    let r = find_primitive_with_trace(&ctx, 1, &ctx.one(), &opts)?;
    println!("F_64 over F_4, trace 1: {}", r.element.unwrap());

    for (p, e, n) in [(2, 1, 4), (2, 1, 12), (3, 1, 9)] {
        let ctx = build_field(p, e, n)?;
        let t = search_via_trace_lift(&ctx, &opts)?;
        let a = t.result.element.unwrap();
        println!(
            "q={} n={n}: β = {} lifts to {a}, primitive {}, k = {}",
            ctx.q(),
            t.beta,
            ctx.is_primitive(&a),
            knormal::k_normality_gcd(&ctx, &a)
        );
    }
    Ok(())
}
