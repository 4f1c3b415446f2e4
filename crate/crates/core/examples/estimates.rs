// The bounding estimates as executable predicates.
//
// cargo run --release --example estimates

use primnormal::sieve::{verify_estimate, Estimate};
use primnormal::{Error, Result};

fn main() -> Result<()> {
    let estimates = [
        Estimate::WtBoundF2 { n: 21 },
        Estimate::WtBoundF4 { n: 21 },
        Estimate::MersenneWBound { n: 45 },
        Estimate::TotientRatioLogBound { q: 5, s: 2 },
        Estimate::CyclotomicQuotientPrimes2p { q: 7, s: 3 },
        Estimate::QuinticQuotientPrimes { q: 31 },
        Estimate::QuinticSieveLargeQ { q: 131_101 },
        Estimate::QuotientWBound {
            item: 1,
            q: 7,
            s: 2,
        },
        Estimate::DivisorCountBound { m: 720_720 },
        Estimate::EvenPlusOneWBound {
            item: 2,
            q: 4,
            s: 19,
        },
    ];
    for est in &estimates {
        let r = verify_estimate(est)?;
        println!(
            "{:<32} lhs {:>14.4} rhs {:>14.4} {}",
            est.id(),
            r.lhs,
            r.rhs,
            r.verdict
        );
    }
    match verify_estimate(&Estimate::QuotientWBound {
        item: 1,
        q: 5,
        s: 1,
    }) {
        Err(Error::Hypothesis(msg)) => println!("outside hypotheses: {msg}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
