// Multiplicative and additive characters, Gauss sums and the characteristic
// functions of d-free, T-free and prescribed-trace elements.
//
// cargo run --example characters

use std::sync::Arc;

use primnormal::characters::CharEvaluator;
use primnormal::knormal;
use primnormal::{build_field, Poly, Result};

fn main() -> Result<()> {
    let ctx = Arc::new(build_field(2, 1, 4)?);
    let ev = CharEvaluator::new(ctx.clone())?;
    let b = ctx.one();

    let g = ev.gauss_sum(3, &b);
    println!("G(η_3, χ_1) = {g:.6}, |G| = {:.6}, q^(n/2) = 4", g.norm());

    // ω_15 picks out the primitive elements
    let w = ctx.parse_element("g^7")?;
    let v = ctx.parse_element("g^5")?;
    println!(
        "ω_15(g^7) = {:.6}, ω_15(g^5) = {:.6}",
        ev.omega(15, &w)?.re,
        ev.omega(15, &v)?.re
    );

    // Ω_T with T = x^4 - 1 picks out the normal elements
    let t = Poly::xn_minus_1(ctx.base_field(), 4);
    for text in ["1,1,0,1", "1,1,1,0"] {
        let a = ctx.parse_element(text)?;
        println!(
            "Ω_T({text}) = {:.6}, k = {}",
            ev.omega_poly(&t, &a)?.re,
            knormal::k_normality(&ctx, &a)
        );
    }

    // T_{2,β} picks out the elements with Tr_{16/4} = β
    let beta = ctx.trace(&w, 2)?;
    println!(
        "T_(2,Tr(g^7))(g^7) = {:.6}",
        ev.trace_indicator(2, &beta, &w)?.re
    );
    Ok(())
}
