// The counting functions W, w, d, θ and the sieve inequalities, and the
// scans that rebuild the exception tables.
//
// cargo run --release --example sieve_tables

use num_bigint::BigUint;
use primnormal::sieve;
use primnormal::tables::{self, Table};
use primnormal::Result;

fn main() -> Result<()> {
    let t = BigUint::from(48u32);
    println!(
        "W(48) = {}, d(48) = {}, θ(48) = {}",
        sieve::W_int(&t)?,
        sieve::d_int(&t)?,
        sieve::theta(&t)?
    );

    for (q, n) in [(4, 15), (2, 11), (5, 3), (4, 7)] {
        let r = sieve::check_sieve(q, n)?;
        println!(
            "sieve ({q}, {n}): W(T)={} W={} -> {}",
            r.w_t, r.w_int, r.verdict
        );
    }
    let pairs = sieve::scan_cohen_pairs()?;
    println!("{} failing pairs, first few {:?}", pairs.len(), &pairs[..5]);

    let n4 = sieve::scan_n4(tables::N4_LIMIT);
    println!(
        "n=4: {} failures up to {}, largest {:?}",
        n4.count, n4.limit, n4.max_q
    );
    println!("n=5 exceptions: {:?}", sieve::scan_n5(Some(50)).exceptions);
    println!(
        "C_(2,3) = {}, C_(5,3) = {}",
        sieve::compute_C_ps(2, 3)?,
        sieve::compute_C_ps(5, 3)?
    );
    println!("n=ps sieve (8, 7): {}", sieve::check_sievep(8, 7)?.verdict);
    println!(
        "n=p exception at q=5: {}",
        sieve::check_n_eq_p(5)?.exception
    );

    let (header, rows) = Table::CPs.build()?;
    let csv = tables::to_csv(&header, &rows);
    println!(
        "c-ps table matches golden copy: {}",
        tables::diff(Table::CPs.golden(), &csv).is_empty()
    );
    Ok(())
}
