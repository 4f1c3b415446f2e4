// Search for a primitive 1-normal element over powers of the generator,
// in parallel with a deterministic answer, and show the n = 2 exhaustion.
//
// cargo run --release --example search

use std::time::Duration;

use primnormal::search::{search_primitive_1normal, SearchOptions};
use primnormal::{build_field, knormal, Result};

fn main() -> Result<()> {
    let opts = SearchOptions {
        budget: Some(Duration::from_secs(60)),
        ..Default::default()
    };
    for (p, e, n) in [(2, 1, 3), (2, 2, 3), (3, 1, 6), (13, 1, 5), (2, 1, 20)] {
        let ctx = build_field(p, e, n)?;
        let r = search_primitive_1normal(&ctx, &opts)?;
        let a = r.element.as_ref().expect("a hit exists for n >= 3");
        println!(
            "q={} n={n}: g^{} = {a} (k = {}) after {} candidates in {:?}",
            ctx.q(),
            r.exponent.unwrap(),
            knormal::k_normality(&ctx, a),
            r.iterations,
            r.elapsed
        );
    }
    let ctx = build_field(5, 1, 2)?;
    let r = search_primitive_1normal(&ctx, &opts)?;
    println!(
        "q=5 n=2: {:?} after checking all {} primitive elements",
        r.status, r.iterations
    );
    Ok(())
}
