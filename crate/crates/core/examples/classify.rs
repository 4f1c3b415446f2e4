// Classify elements by k-normality with both classifiers (σ-minimal
// polynomial and the gcd with x^n - 1) and print the histogram of k.
//
// cargo run --example classify

use primnormal::knormal;
use primnormal::{build_field, FieldContext, Result};

fn main() -> Result<()> {
    let ctx = build_field(2, 1, 4)?;
    for text in ["0", "1", "0,1", "1,1,0,1", "g^3"] {
        let a = ctx.parse_element(text)?;
        let r = knormal::classify(&ctx, &a);
        println!(
            "{text:>8} -> {}: m = {}, k = {} (gcd classifier {}), primitive {}",
            r.element,
            r.sigma_min_poly,
            r.k,
            knormal::k_normality_gcd(&ctx, &a),
            r.is_primitive
        );
    }
    histogram(&ctx)?;

    // the root of x^5 - x - 2 over F_5 is 3-normal
    let quintic = FieldContext::with_modulus(5, 1, 5, &[3, 4, 0, 0, 0, 1])?;
    let alpha = quintic.z();
    println!(
        "root of x^5-x-2: m = {}, k = {}",
        knormal::sigma_minimal_poly(&quintic, &alpha),
        knormal::k_normality(&quintic, &alpha)
    );
    Ok(())
}

fn histogram(ctx: &FieldContext) -> Result<()> {
    let h = knormal::k_histogram(ctx, 1 << 20)?;
    println!("histogram of k over F_{}^{}: {h:?}", ctx.q(), ctx.n());
    Ok(())
}
