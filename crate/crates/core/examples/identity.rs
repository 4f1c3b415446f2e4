// Count primitive, f-free elements with prescribed trace directly and
// through the Gauss-sum expansion, for several parameter sets.
//
// cargo run --example identity

use std::sync::Arc;

use primnormal::characters::{verify_propmain_identity, CharEvaluator};
use primnormal::{build_field, Error, Poly, Result};

fn main() -> Result<()> {
    let cases: [(u64, u32, u32, u32, &str, &str); 4] = [
        (3, 1, 4, 1, "(x+1)(x^2+1)", "0"),
        (2, 1, 4, 2, "1", "0"),
        (5, 1, 3, 1, "x^2+x+1", "1"),
        (2, 1, 6, 2, "x^2+x+1", "0,1,1,0,1,0"),
    ];
    for (p, e, n, m, f, beta) in cases {
        let ev = CharEvaluator::new(Arc::new(build_field(p, e, n)?))?;
        let f = Poly::parse(ev.ctx().base_field(), f)?;
        let beta = ev.ctx().trace(&ev.ctx().parse_element(beta)?, m)?;
        let r = verify_propmain_identity(&ev, m, &f, &beta)?;
        println!(
            "q={} n={} m={} f={} β={}: exact {} identity {:.6} bound {}",
            r.q, r.n, r.m, r.f, r.beta, r.n_exact, r.n_from_identity, r.bound_holds
        );
    }
    // x + 1 = x - 1 in characteristic 2, so this is outside the hypotheses
    let ev = CharEvaluator::new(Arc::new(build_field(2, 1, 4)?))?;
    let f = Poly::parse(ev.ctx().base_field(), "x+1")?;
    match verify_propmain_identity(&ev, 2, &f, &ev.ctx().zero()) {
        Err(Error::Hypothesis(msg)) => println!("rejected: {msg}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
