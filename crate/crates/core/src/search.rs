//! Searching for primitive 1-normal elements: the exponent scan over powers
//! of the generator, primitive elements with prescribed relative trace, and
//! the trace-lift construction for `p^2 | n`.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::ff::{FieldContext, FieldElement};
use crate::knormal;
use crate::poly::{self, Poly};

/// How a search ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStatus {
    Found,
    /// Every candidate exponent was examined without a hit.
    Exhausted,
    /// Stopped by the wall-clock or iteration budget before finishing.
    Budget,
}

/// Controls for the exponent scan.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// First exponent to try (at least 1).
    pub start: u64,
    /// Cap on the number of exponents scanned.
    pub max_iterations: Option<u64>,
    pub budget: Option<Duration>,
    /// Worker count; `None` uses the rayon default.
    pub jobs: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            start: 1,
            max_iterations: None,
            budget: None,
            jobs: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub status: SearchStatus,
    pub element: Option<FieldElement>,
    /// `i` with `element = g^i`.
    pub exponent: Option<u64>,
    /// Exponents coprime to `q^n - 1` that were tested, up to the hit.
    pub iterations: u64,
    pub elapsed: Duration,
}

impl SearchResult {
    pub fn found(&self) -> bool {
        self.status == SearchStatus::Found
    }
}

/// Serializable view of a [`SearchResult`].
#[derive(Clone, Debug, Serialize)]
pub struct SearchRecord {
    pub q: String,
    pub n: u32,
    pub modulus: Vec<u32>,
    pub found: bool,
    pub status: SearchStatus,
    pub element: Option<String>,
    pub exponent: Option<u64>,
    pub iterations: u64,
    pub elapsed_secs: f64,
}

impl SearchRecord {
    pub fn new(ctx: &FieldContext, r: &SearchResult) -> SearchRecord {
        SearchRecord {
            q: ctx.q().to_string(),
            n: ctx.n(),
            modulus: ctx.modulus().to_vec(),
            found: r.found(),
            status: r.status,
            element: r.element.as_ref().map(|e| e.to_string()),
            exponent: r.exponent,
            iterations: r.iterations,
            elapsed_secs: r.elapsed.as_secs_f64(),
        }
    }
}

/// Exponents per worker chunk.
const CHUNK: u64 = 1 << 10;

struct ChunkOutcome {
    hit: Option<(u64, FieldElement)>,
    tested: u64,
    complete: bool,
}

/// Scan `g^i` for `i` in `[opts.start, q^n - 1)` with `gcd(i, q^n - 1) = 1`
/// and return the least exponent satisfying `accept`.
fn scan_exponents<F>(ctx: &FieldContext, opts: &SearchOptions, accept: F) -> Result<SearchResult>
where
    F: Fn(&FieldElement) -> bool + Sync,
{
    let began = Instant::now();
    let order = ctx.cardinality_u64().map(|c| c - 1).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "q^n = {} exceeds the search range",
            ctx.cardinality()
        ))
    })?;
    let start = opts.start.max(1);
    let mut end = order.max(start);
    if let Some(cap) = opts.max_iterations {
        end = end.min(start.saturating_add(cap));
    }
    let capped = end < order;
    let jobs = opts.jobs.unwrap_or_else(rayon::current_num_threads).max(1) as u64;
    let deadline = opts.budget.map(|b| began + b);
    let stop = AtomicBool::new(false);
    let g = ctx.generator().clone();

    let run_chunk = |lo: u64, hi: u64| -> ChunkOutcome {
        let mut a = ctx.pow_u64(&g, lo);
        let mut tested = 0;
        for i in lo..hi {
            if (i - lo).is_multiple_of(256) {
                if stop.load(Ordering::Relaxed) {
                    return ChunkOutcome {
                        hit: None,
                        tested,
                        complete: false,
                    };
                }
                if deadline.is_some_and(|d| Instant::now() >= d) {
                    stop.store(true, Ordering::Relaxed);
                    return ChunkOutcome {
                        hit: None,
                        tested,
                        complete: false,
                    };
                }
            }
            if arith::gcd_u64(i, order) == 1 {
                tested += 1;
                if accept(&a) {
                    return ChunkOutcome {
                        hit: Some((i, a)),
                        tested,
                        complete: true,
                    };
                }
            }
            a = ctx.mul(&a, &g);
        }
        ChunkOutcome {
            hit: None,
            tested,
            complete: true,
        }
    };

    let mut iterations = 0;
    let mut lo = start;
    while lo < end {
        let window_end = end.min(lo.saturating_add(CHUNK * jobs));
        let bounds: Vec<(u64, u64)> = (lo..window_end)
            .step_by(CHUNK as usize)
            .map(|a| (a, (a + CHUNK).min(window_end)))
            .collect();
        let outcomes: Vec<ChunkOutcome> = match opts.jobs {
            Some(1) => bounds.iter().map(|&(a, b)| run_chunk(a, b)).collect(),
            _ => bounds.par_iter().map(|&(a, b)| run_chunk(a, b)).collect(),
        };
        // chunks are in exponent order, so the first hit is the least one
        for o in outcomes {
            if !o.complete {
                return Ok(SearchResult {
                    status: SearchStatus::Budget,
                    element: None,
                    exponent: None,
                    iterations: iterations + o.tested,
                    elapsed: began.elapsed(),
                });
            }
            iterations += o.tested;
            if let Some((i, a)) = o.hit {
                return Ok(SearchResult {
                    status: SearchStatus::Found,
                    element: Some(a),
                    exponent: Some(i),
                    iterations,
                    elapsed: began.elapsed(),
                });
            }
        }
        lo = window_end;
    }
    Ok(SearchResult {
        status: if capped {
            SearchStatus::Budget
        } else {
            SearchStatus::Exhausted
        },
        element: None,
        exponent: None,
        iterations,
        elapsed: began.elapsed(),
    })
}

/// The least `i` with `gcd(i, q^n - 1) = 1` such that `g^i` is 1-normal.
pub fn search_primitive_1normal(ctx: &FieldContext, opts: &SearchOptions) -> Result<SearchResult> {
    scan_exponents(ctx, opts, |a| knormal::k_normality_gcd(ctx, a) == 1)
}

/// The first primitive `α` (in generator-power order) with
/// `Tr_{q^n/q^m}(α) = β`.
pub fn find_primitive_with_trace(
    ctx: &FieldContext,
    m: u32,
    beta: &FieldElement,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    let n = ctx.n();
    if m == 0 || !n.is_multiple_of(m) || m == n {
        return Err(Error::Hypothesis(format!(
            "m = {m} must be a proper divisor of n = {n}"
        )));
    }
    if ctx.project(m, beta)?.is_none() {
        return Err(Error::Hypothesis(format!(
            "{beta} is not in the subfield of degree {m}"
        )));
    }
    scan_exponents(ctx, opts, |a| {
        ctx.trace(a, m).map(|t| &t == beta).unwrap_or(false)
    })
}

/// Result of [`search_via_trace_lift`].
#[derive(Clone, Debug)]
pub struct TraceLift {
    /// Element of `F_{q^{ps}}` with σ-minimal polynomial `(x^{ps} - 1)/(x - 1)`.
    pub beta: FieldElement,
    pub result: SearchResult,
}

/// Whether `b` (in the subfield of degree `m`) has σ-minimal polynomial
/// `(x^m - 1)/(x - 1)` over `F_q`.
pub fn has_quotient_min_poly(ctx: &FieldContext, b: &FieldElement, m: u32) -> Result<bool> {
    let f = ctx.base_field();
    let xm = Poly::xn_minus_1(f, m as usize);
    let (t, _) = xm.divrem(&Poly::linear(f, 1))?;
    if !ctx.is_zero(&poly::linearized_apply(ctx, &t, b)) {
        return Ok(false);
    }
    let fac = poly::factor_poly(&t)?;
    for (g, _) in &fac.factors {
        let (h, _) = t.divrem(g)?;
        if ctx.is_zero(&poly::linearized_apply(ctx, &h, b)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For `p^2 | n`: take the first `β ∈ F_{q^{ps}}` (enumeration order) with
/// σ-minimal polynomial `(x^{ps} - 1)/(x - 1)`, then the first primitive `α`
/// with `Tr_{q^n/q^{ps}}(α) = β`. The result is checked to be primitive and
/// 1-normal.
pub fn search_via_trace_lift(ctx: &FieldContext, opts: &SearchOptions) -> Result<TraceLift> {
    let (p, n) = (ctx.p(), ctx.n() as u64);
    if n % (p * p) != 0 {
        return Err(Error::Hypothesis(format!(
            "p^2 = {} must divide n = {n}",
            p * p
        )));
    }
    let ps = (n / p) as u32;
    let size = ctx
        .q_u64()
        .checked_pow(ps)
        .ok_or_else(|| Error::InvalidParameter("subfield too large to enumerate".into()))?;
    let mut beta = None;
    for k in 0..size {
        let b = ctx.subfield_element(ps, k)?;
        if has_quotient_min_poly(ctx, &b, ps)? {
            beta = Some(b);
            break;
        }
    }
    let beta = beta.ok_or_else(|| {
        Error::Internal(format!(
            "no element of degree {ps} has the required minimal polynomial"
        ))
    })?;
    let result = find_primitive_with_trace(ctx, ps, &beta, opts)?;
    if let Some(a) = &result.element {
        if !ctx.is_primitive(a) || knormal::k_normality_gcd(ctx, a) != 1 {
            return Err(Error::Internal(format!(
                "trace lift produced {a}, not primitive 1-normal"
            )));
        }
    }
    Ok(TraceLift { beta, result })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::build_field;

    fn check_hit(ctx: &FieldContext, r: &SearchResult) {
        let a = r.element.as_ref().unwrap();
        assert!(ctx.is_primitive(a));
        assert_eq!(knormal::k_normality(ctx, a), 1);
        assert_eq!(&ctx.pow_u64(ctx.generator(), r.exponent.unwrap()), a);
    }

    #[test]
    fn small_searches() {
        let o = SearchOptions::default();
        let ctx = build_field(2, 1, 2).unwrap();
        assert_eq!(
            search_primitive_1normal(&ctx, &o).unwrap().status,
            SearchStatus::Exhausted
        );
        for (p, e, n) in [(2, 1, 3), (2, 2, 3), (3, 1, 4), (5, 1, 3)] {
            let ctx = build_field(p, e, n).unwrap();
            let r = search_primitive_1normal(&ctx, &o).unwrap();
            assert!(r.found(), "{p} {e} {n}");
            check_hit(&ctx, &r);
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let ctx = build_field(2, 1, 12).unwrap();
        let seq = SearchOptions {
            jobs: Some(1),
            ..Default::default()
        };
        let par = SearchOptions {
            jobs: Some(4),
            ..Default::default()
        };
        let a = search_primitive_1normal(&ctx, &seq).unwrap();
        let b = search_primitive_1normal(&ctx, &par).unwrap();
        assert_eq!(a.exponent, b.exponent);
        assert_eq!(a.iterations, b.iterations);
        let late = SearchOptions {
            start: a.exponent.unwrap() + 1,
            ..Default::default()
        };
        let c = search_primitive_1normal(&ctx, &late).unwrap();
        assert!(c.exponent.unwrap() > a.exponent.unwrap());
    }

    #[test]
    fn iteration_cap_is_budget() {
        let ctx = build_field(3, 1, 2).unwrap();
        let o = SearchOptions {
            max_iterations: Some(2),
            ..Default::default()
        };
        assert_eq!(
            search_primitive_1normal(&ctx, &o).unwrap().status,
            SearchStatus::Budget
        );
    }

    #[test]
    fn prescribed_trace() {
        let o = SearchOptions::default();
        let ctx = build_field(2, 2, 3).unwrap();
        let r = find_primitive_with_trace(&ctx, 1, &ctx.zero(), &o).unwrap();
        assert_eq!(r.status, SearchStatus::Exhausted);
        let ctx = build_field(2, 1, 4).unwrap();
        let r = find_primitive_with_trace(&ctx, 1, &ctx.one(), &o).unwrap();
        assert!(r.found());
        assert_eq!(
            ctx.trace(r.element.as_ref().unwrap(), 1).unwrap(),
            ctx.one()
        );
        let ctx = build_field(3, 1, 2).unwrap();
        assert!(!find_primitive_with_trace(&ctx, 1, &ctx.zero(), &o)
            .unwrap()
            .found());
        assert!(find_primitive_with_trace(&ctx, 2, &ctx.zero(), &o).is_err());
    }

    #[test]
    fn trace_lift() {
        let o = SearchOptions::default();
        for (p, e, n) in [(2, 1, 4), (3, 1, 9), (2, 1, 8), (2, 2, 4)] {
            let ctx = build_field(p, e, n).unwrap();
            let t = search_via_trace_lift(&ctx, &o).unwrap();
            assert!(t.result.found());
            check_hit(&ctx, &t.result);
        }
        let ctx = build_field(3, 1, 6).unwrap();
        assert!(matches!(
            search_via_trace_lift(&ctx, &o),
            Err(Error::Hypothesis(_))
        ));
    }
}
