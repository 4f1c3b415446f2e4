// The number of k-normal elements from the divisors of x^n - 1, checked
// against enumeration where that is cheap.
//
// cargo run --example count_knormal

use primnormal::knormal;
use primnormal::{build_field, Result};

fn main() -> Result<()> {
    for (p, e, n) in [(2, 1, 6), (3, 1, 4), (2, 2, 3), (5, 1, 5)] {
        let q = (p as u64).pow(e);
        let counts: Vec<String> = (0..=n)
            .map(|k| knormal::count_k_normal(q, n, k).map(|c| c.to_string()))
            .collect::<Result<_>>()?;
        let hist = knormal::k_histogram(&build_field(p, e, n)?, 1 << 16)?;
        println!(
            "q={q} n={n}: N_k = [{}], enumeration {hist:?}",
            counts.join(", ")
        );
    }
    // far too large to enumerate
    println!("N_1 for q=7, n=12: {}", knormal::count_k_normal(7, 12, 1)?);
    Ok(())
}
