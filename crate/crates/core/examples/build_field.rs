// Build F_{q^n}, look at its modulus and generator, and do some arithmetic,
// Frobenius and trace work, including the subfield maps.
//
// cargo run --example build_field

use primnormal::{build_field, Result};

fn main() -> Result<()> {
    let ctx = build_field(3, 1, 4)?;
    println!(
        "F_{}^{} has {} elements",
        ctx.q(),
        ctx.n(),
        ctx.cardinality()
    );
    println!("modulus (c0..cD): {:?}", ctx.modulus());
    println!("generator g = {}", ctx.generator());
    println!(
        "q^n - 1 = {} with primes {:?}",
        ctx.group_order(),
        ctx.group_order_factors().distinct_primes()
    );

    let a = ctx.parse_element("1,2,0,1")?;
    let b = ctx.parse_element("g^17")?;
    println!("a = {a}, b = g^17 = {b}");
    println!(
        "a*b = {}, a/b = {}",
        ctx.mul(&a, &b),
        ctx.mul(&a, &ctx.inv(&b)?)
    );
    println!(
        "conjugates of a: {:?}",
        ctx.conjugates(&a)
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
    );
    println!(
        "Tr(a) to F_3 = {}, to F_9 = {}",
        ctx.trace(&a, 1)?,
        ctx.trace(&a, 2)?
    );
    println!(
        "order of a = {}, primitive: {}",
        ctx.multiplicative_order(&a)?,
        ctx.is_primitive(&a)
    );

    // the subfield F_9 sits inside as a 2-dimensional F_3-space
    let t = ctx.trace(&a, 2)?;
    println!(
        "Tr_{{81/9}}(a) has F_9 coordinates {:?}",
        ctx.project(2, &t)?.unwrap()
    );

    // a field over a non-prime base: F_{4^3}
    let f64_ = build_field(2, 2, 3)?;
    println!(
        "F_4^3: modulus {:?}, F_4 generator embeds as {}",
        f64_.modulus(),
        f64_.subfield_element(1, 2)?
    );
    Ok(())
}
