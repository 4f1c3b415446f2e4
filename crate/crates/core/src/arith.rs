//! Integer arithmetic: primality, prime powers, and factorization of the
//! numbers `p^k - 1` that the field constructions and sieve checks need.
//!
//! Factoring is trial division to [`TRIAL_BOUND`] followed by Brent's variant
//! of Pollard rho. A number that cannot be split within the budget is kept as
//! an unresolved cofactor; since every such cofactor is free of primes up to
//! the trial bound, the number of distinct primes it can hide is bounded by
//! `log c / log TRIAL_BOUND`. Callers that only need an inequality use those
//! bounds instead of a complete factorization.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Trial-division bound applied before Pollard rho.
pub const TRIAL_BOUND: u64 = 1_000_000;

/// Miller-Rabin with the first 13 prime bases is deterministic below this.
pub const MR_DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const MR_EXTRA_BASES: [u64; 7] = [43, 47, 53, 59, 61, 67, 71];

/// Budget for [`factor`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorBudget {
    pub trial_bound: u64,
    /// Cofactors wider than this many bits are not attacked with rho.
    pub rho_max_bits: u64,
    /// Iteration cap per rho attempt.
    pub rho_iterations: u64,
    /// Number of rho polynomials `x^2 + c` tried before giving up.
    pub rho_attempts: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: TRIAL_BOUND,
            rho_max_bits: 160,
            rho_iterations: 1 << 22,
            rho_attempts: 6,
        }
    }
}

/// Outcome of a primality test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Primality {
    Prime,
    /// Passed Miller-Rabin with 20 fixed bases above the deterministic range.
    ProbablePrime,
    Composite,
}

fn sieve(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut is = vec![true; limit + 1];
    is[0] = false;
    if limit >= 1 {
        is[1] = false;
    }
    let mut i = 2;
    while i * i <= limit {
        if is[i] {
            let mut j = i * i;
            while j <= limit {
                is[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    is.iter()
        .enumerate()
        .filter_map(|(k, &b)| b.then_some(k as u64))
        .collect()
}

/// Primes up to [`TRIAL_BOUND`], computed once.
pub fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(TRIAL_BOUND))
}

/// All primes `<= limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit <= TRIAL_BOUND {
        let ps = small_primes();
        let end = ps.partition_point(|&p| p <= limit);
        ps[..end].to_vec()
    } else {
        sieve(limit)
    }
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u64(r, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic primality for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES[..12] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &MR_BASES[..12] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let mask = u64::MAX as u128;
    let (a0, a1) = (a & mask, a >> 64);
    let (b0, b1) = (b & mask, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
    let lo = (p00 & mask) | ((mid & mask) << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

/// Montgomery arithmetic modulo an odd `n < 2^127`.
#[derive(Clone, Copy, Debug)]
struct Mont {
    n: u128,
    ninv: u128,
    r2: u128,
}

impl Mont {
    fn new(n: u128) -> Self {
        debug_assert!(n & 1 == 1 && n < (1u128 << 127));
        let mut x = n;
        for _ in 0..7 {
            x = x.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(x)));
        }
        let ninv = x.wrapping_neg();
        let r = (u128::MAX % n + 1) % n;
        let mut r2 = r;
        for _ in 0..128 {
            r2 <<= 1;
            if r2 >= n {
                r2 -= n;
            }
        }
        Mont { n, ninv, r2 }
    }

    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.ninv);
        let (mh, ml) = mul_wide(m, self.n);
        let (_, carry) = lo.overflowing_add(ml);
        let t = hi + mh + carry as u128;
        if t >= self.n {
            t - self.n
        } else {
            t
        }
    }

    fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }

    fn to_mont(&self, a: u128) -> u128 {
        self.mul(a % self.n, self.r2)
    }

    fn one(&self) -> u128 {
        self.to_mont(1)
    }

    fn pow(&self, mut b: u128, mut e: u128) -> u128 {
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    fn add(&self, a: u128, b: u128) -> u128 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }
}

fn mr_u128(n: u128, bases: &[u64]) -> bool {
    let mont = Mont::new(n);
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let one = mont.one();
    let minus_one = mont.to_mont(n - 1);
    'outer: for &a in bases {
        if (a as u128).is_multiple_of(n) {
            continue;
        }
        let mut x = mont.pow(mont.to_mont(a as u128), d);
        if x == one || x == minus_one {
            continue;
        }
        for _ in 1..s {
            x = mont.mul(x, x);
            if x == minus_one {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn mr_big(n: &BigUint, bases: &[u64]) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'outer: for &a in bases {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primality test: exact below [`MR_DETERMINISTIC_LIMIT`], probabilistic above.
pub fn is_prime(n: &BigUint) -> Primality {
    if let Some(v) = n.to_u64() {
        return if is_prime_u64(v) {
            Primality::Prime
        } else {
            Primality::Composite
        };
    }
    for &p in small_primes().iter().take(200) {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    let passes = |bases: &[u64]| match n.to_u128() {
        Some(v) if v < (1u128 << 127) => mr_u128(v, bases),
        _ => mr_big(n, bases),
    };
    if !passes(&MR_BASES) {
        return Primality::Composite;
    }
    match n.to_u128() {
        Some(v) if v < MR_DETERMINISTIC_LIMIT => Primality::Prime,
        _ => {
            if passes(&MR_EXTRA_BASES) {
                Primality::ProbablePrime
            } else {
                Primality::Composite
            }
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent's rho on an odd composite `n < 2^127`. The polynomial schedule
/// `x^2 + c` with `c = attempt + 1` and starting point 2 is fixed, so the
/// factor found is reproducible.
fn rho_u128(n: u128, budget: &FactorBudget) -> Option<u128> {
    let mont = Mont::new(n);
    for attempt in 0..budget.rho_attempts {
        let c = mont.to_mont(attempt as u128 + 1);
        let f = |x: u128| mont.add(mont.mul(x, x), c);
        let mut y = mont.to_mont(2);
        let mut r: u64 = 1;
        let mut q = mont.one();
        let mut g = 1u128;
        let mut x = y;
        let mut ys = y;
        let m: u64 = 128;
        let mut iters: u64 = 0;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let lim = m.min(r - k);
                for _ in 0..lim {
                    y = f(y);
                    let diff = x.abs_diff(y);
                    q = mont.mul(q, diff);
                }
                g = gcd_u128(q, n);
                k += lim;
                iters += lim;
            }
            r *= 2;
            if iters > budget.rho_iterations {
                break;
            }
        }
        if g == n || g == 0 {
            // Backtrack one step at a time.
            g = 1;
            let mut guard = 0u64;
            while g == 1 && guard < 1 << 20 {
                ys = f(ys);
                let diff = x.abs_diff(ys);
                g = gcd_u128(diff, n);
                guard += 1;
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

fn rho_big(n: &BigUint, budget: &FactorBudget) -> Option<BigUint> {
    let one = BigUint::one();
    for attempt in 0..budget.rho_attempts {
        let c = BigUint::from(attempt + 1);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = one.clone();
        let mut g = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m: u64 = 64;
        let mut iters = 0u64;
        let limit = budget.rho_iterations / 16;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                let lim = m.min(r - k);
                for _ in 0..lim {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += lim;
                iters += lim;
            }
            r *= 2;
            if iters > limit {
                break;
            }
        }
        if &g == n || g.is_zero() {
            g = one.clone();
            let mut guard = 0u64;
            while g == one && guard < limit {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                guard += 1;
            }
        }
        if g > one && &g < n {
            return Some(g);
        }
    }
    None
}

/// Prime factorization of a positive integer, possibly partial.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntFactors {
    /// Proven primes with multiplicities.
    pub primes: BTreeMap<BigUint, u32>,
    /// Probable primes (beyond the deterministic Miller-Rabin range).
    pub probable: BTreeMap<BigUint, u32>,
    /// Composite cofactors that could not be split within the budget.
    pub unresolved: Vec<BigUint>,
    /// Every unresolved cofactor is free of primes up to this bound.
    pub trial_bound: u64,
}

impl IntFactors {
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }

    /// Whether every listed prime is proven (no probable primes, no unresolved parts).
    pub fn is_certified(&self) -> bool {
        self.is_complete() && self.probable.is_empty()
    }

    /// All primes (proven and probable) with multiplicities, ascending.
    pub fn prime_powers(&self) -> Vec<(BigUint, u32)> {
        let mut all: BTreeMap<BigUint, u32> = self.primes.clone();
        for (p, k) in &self.probable {
            *all.entry(p.clone()).or_default() += k;
        }
        all.into_iter().collect()
    }

    pub fn distinct_primes(&self) -> Vec<BigUint> {
        self.prime_powers().into_iter().map(|(p, _)| p).collect()
    }

    fn known_distinct(&self) -> u32 {
        (self.primes.len() + self.probable.len()) as u32
    }

    /// Upper bound on the number of distinct primes inside the unresolved part.
    fn unresolved_upper(&self) -> u32 {
        let logb = (self.trial_bound.max(2) as f64).ln();
        self.unresolved
            .iter()
            .map(|c| {
                // floor with a small safety margin upward
                let bits = c.bits() as f64;
                ((bits * std::f64::consts::LN_2) / logb).floor() as u32 + 1
            })
            .sum()
    }

    /// Bounds `(lower, upper)` on the number of distinct prime factors.
    pub fn omega_bounds(&self) -> (u32, u32) {
        let k = self.known_distinct();
        if self.unresolved.is_empty() {
            (k, k)
        } else {
            (k + 1, k + self.unresolved_upper())
        }
    }

    /// Exact number of distinct prime factors when the factorization is complete.
    pub fn omega(&self) -> Option<u32> {
        self.is_complete().then(|| self.known_distinct())
    }

    /// Number of divisors, when complete.
    pub fn divisor_count(&self) -> Option<BigUint> {
        self.is_complete().then(|| {
            self.prime_powers()
                .iter()
                .fold(BigUint::one(), |acc, (_, k)| acc * BigUint::from(k + 1))
        })
    }

    /// `phi(N)/N` exactly, when complete.
    pub fn totient_ratio(&self) -> Option<BigRational> {
        self.is_complete().then(|| {
            self.distinct_primes()
                .iter()
                .fold(BigRational::one(), |acc, r| {
                    acc * BigRational::new((r - 1u32).into(), r.clone().into())
                })
        })
    }

    /// A rigorous upper bound on `N/phi(N)`.
    pub fn inverse_totient_ratio_upper(&self) -> BigRational {
        let known = self
            .distinct_primes()
            .iter()
            .fold(BigRational::one(), |acc, r| {
                acc * BigRational::new(r.clone().into(), (r - 1u32).into())
            });
        if self.unresolved.is_empty() {
            return known;
        }
        let b = BigUint::from(self.trial_bound);
        let per = BigRational::new((&b + 1u32).into(), b.into());
        let k = self.unresolved_upper();
        (0..k).fold(known, |acc, _| acc * &per)
    }

    /// The integer this factorization describes.
    pub fn product(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (p, k) in self.prime_powers() {
            acc *= p.pow(k);
        }
        for c in &self.unresolved {
            acc *= c;
        }
        acc
    }

    /// Multiply in another factorization.
    pub fn merge(&mut self, other: &IntFactors) {
        for (p, k) in &other.primes {
            *self.primes.entry(p.clone()).or_default() += k;
        }
        for (p, k) in &other.probable {
            *self.probable.entry(p.clone()).or_default() += k;
        }
        self.unresolved.extend(other.unresolved.iter().cloned());
        self.trial_bound = if self.trial_bound == 0 {
            other.trial_bound
        } else {
            self.trial_bound.min(other.trial_bound.max(1))
        };
        self.normalize();
    }

    /// Divide known primes out of unresolved cofactors.
    fn normalize(&mut self) {
        if self.unresolved.is_empty() {
            return;
        }
        let known = self.distinct_primes();
        let mut rest = Vec::new();
        for mut c in std::mem::take(&mut self.unresolved) {
            for p in &known {
                while (&c % p).is_zero() {
                    c /= p;
                    if self.primes.contains_key(p) {
                        *self.primes.get_mut(p).unwrap() += 1;
                    } else {
                        *self.probable.get_mut(p).unwrap() += 1;
                    }
                }
            }
            if c.is_one() {
                continue;
            }
            match is_prime(&c) {
                Primality::Prime => *self.primes.entry(c).or_default() += 1,
                Primality::ProbablePrime => *self.probable.entry(c).or_default() += 1,
                Primality::Composite => rest.push(c),
            }
        }
        rest.sort();
        self.unresolved = rest;
    }
}

/// Factor `n >= 1` within `budget`.
pub fn factor(n: &BigUint, budget: &FactorBudget) -> IntFactors {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut out = IntFactors {
        trial_bound: budget.trial_bound,
        ..Default::default()
    };
    let mut m = n.clone();
    let mut proven_by_trial = false;
    for &p in small_primes() {
        if p > budget.trial_bound {
            break;
        }
        if let Some(v) = m.to_u128() {
            if (p as u128) * (p as u128) > v {
                proven_by_trial = true;
                break;
            }
            let mut v = v;
            let mut k = 0;
            while v % p as u128 == 0 {
                v /= p as u128;
                k += 1;
            }
            if k > 0 {
                out.primes.insert(BigUint::from(p), k);
                m = BigUint::from(v);
            }
        } else {
            if (&m % p).is_zero() {
                let mut k = 0;
                while (&m % p).is_zero() {
                    m /= p;
                    k += 1;
                }
                out.primes.insert(BigUint::from(p), k);
            }
        }
    }
    if m.is_one() {
        return out;
    }
    if proven_by_trial {
        *out.primes.entry(m).or_default() += 1;
        return out;
    }
    let mut stack = vec![m];
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        match is_prime(&c) {
            Primality::Prime => {
                *out.primes.entry(c).or_default() += 1;
                continue;
            }
            Primality::ProbablePrime => {
                *out.probable.entry(c).or_default() += 1;
                continue;
            }
            Primality::Composite => {}
        }
        if let Some(r) = integer_root_exact(&c) {
            let (root, k) = r;
            for _ in 0..k {
                stack.push(root.clone());
            }
            continue;
        }
        let split = if c.bits() < 127 {
            let v = c.to_u128().unwrap();
            rho_u128(v, budget).map(BigUint::from)
        } else if c.bits() <= budget.rho_max_bits {
            rho_big(&c, budget)
        } else {
            None
        };
        match split {
            Some(d) => {
                let e = &c / &d;
                stack.push(d);
                stack.push(e);
            }
            None => out.unresolved.push(c),
        }
    }
    out.normalize();
    out
}

/// If `c = r^k` for some `k >= 2`, return the largest such `k` with its root.
fn integer_root_exact(c: &BigUint) -> Option<(BigUint, u32)> {
    let bits = c.bits() as u32;
    for k in (2..=bits.min(64)).rev() {
        let r = c.nth_root(k);
        if r > BigUint::one() && &r.pow(k) == c {
            return Some((r, k));
        }
    }
    None
}

/// Factor with the default budget.
pub fn factor_default(n: &BigUint) -> IntFactors {
    factor(n, &FactorBudget::default())
}

/// Factor a machine integer completely (always succeeds below 2^64).
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0);
    let f = factor_default(&BigUint::from(n));
    f.prime_powers()
        .into_iter()
        .map(|(p, k)| (p.to_u64().unwrap(), k))
        .collect()
}

/// Sorted divisors of `n`.
pub fn divisors_u64(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, k) in factor_u64(n) {
        let cur = ds.clone();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

/// Moebius function.
pub fn moebius(n: u64) -> i32 {
    let f = factor_u64(n);
    if f.iter().any(|&(_, k)| k > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Multiplicative order of `a` modulo `m` (`gcd(a, m) = 1`, `m >= 2`).
pub fn multiplicative_order_mod(a: u64, m: u64) -> u64 {
    assert!(m >= 2 && gcd_u64(a % m, m) == 1);
    let phi = euler_phi(m);
    let mut ord = phi;
    for (p, _) in factor_u64(phi) {
        while ord.is_multiple_of(p) && pow_mod_u64(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    ord
}

/// `q = p^e` decomposition.
pub fn prime_power_decompose(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = factor_u64(q);
    (f.len() == 1).then(|| f[0])
}

/// Prime powers in `[lo, hi]`, ascending.
pub fn prime_powers_in(lo: u64, hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for p in primes_up_to(hi) {
        let mut q = p;
        loop {
            if q >= lo {
                out.push(q);
            }
            match q.checked_mul(p) {
                Some(next) if next <= hi => q = next,
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out
}

/// Value of the `d`-th cyclotomic polynomial at `x`.
pub fn cyclotomic_value(d: u64, x: u64) -> BigUint {
    let xb = BigUint::from(x);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for e in divisors_u64(d) {
        let term = xb.pow(e as u32) - 1u32;
        match moebius(d / e) {
            1 => num *= term,
            -1 => den *= term,
            _ => {}
        }
    }
    num / den
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<(u64, u64), Arc<IntFactors>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), Arc<IntFactors>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Factorization of `Phi_d(p)`, cached.
pub fn factor_cyclotomic(p: u64, d: u64) -> Arc<IntFactors> {
    if let Some(f) = cyclotomic_cache().lock().unwrap().get(&(p, d)) {
        return f.clone();
    }
    let f = Arc::new(factor_default(&cyclotomic_value(d, p)));
    cyclotomic_cache().lock().unwrap().insert((p, d), f.clone());
    f
}

/// Factorization of `p^k - 1` assembled from its cyclotomic pieces.
pub fn factor_pk_minus_1(p: u64, k: u64) -> IntFactors {
    factor_pk_quotient(p, k, 0)
}

/// Factorization of `(p^k - 1)/(p^j - 1)` for `j | k` (`j = 0` means no
/// denominator), built as the product of `Phi_d(p)` over `d | k`, `d` not
/// dividing `j`.
pub fn factor_pk_quotient(p: u64, k: u64, j: u64) -> IntFactors {
    assert!(k >= 1 && (j == 0 || k.is_multiple_of(j)));
    let mut out = IntFactors {
        trial_bound: TRIAL_BOUND,
        ..Default::default()
    };
    for d in divisors_u64(k) {
        if j != 0 && j.is_multiple_of(d) {
            continue;
        }
        out.merge(&factor_cyclotomic(p, d));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primality() {
        let brute = |n: u64| {
            n >= 2
                && (2..n)
                    .take_while(|d| d * d <= n)
                    .all(|d| !n.is_multiple_of(d))
        };
        for n in 0..5000 {
            assert_eq!(is_prime_u64(n), brute(n), "{n}");
        }
        assert!(is_prime_u64(18446744073709551557));
        assert!(!is_prime_u64(3215031751));
    }

    #[test]
    fn big_primality() {
        let p = (BigUint::one() << 64) + 13u32;
        assert_eq!(is_prime(&p), Primality::Prime);
        // 2^89 - 1 is prime but beyond the deterministic range.
        let m89 = (BigUint::one() << 89) - 1u32;
        assert_eq!(is_prime(&m89), Primality::ProbablePrime);
        let m97 = (BigUint::one() << 97) - 1u32;
        assert_eq!(is_prime(&m97), Primality::Composite);
    }

    #[test]
    fn factors_multiply_back() {
        for n in [
            1u64,
            2,
            48,
            624,
            1 << 40,
            600851475143,
            18446744073709551615,
        ] {
            let f = factor_default(&BigUint::from(n));
            assert_eq!(f.product(), BigUint::from(n));
            assert!(f.is_complete());
        }
    }

    #[test]
    fn rho_splits_semiprime() {
        // two 31-bit primes, beyond the trial bound
        let a = 2147483647u64;
        let b = 2147483629u64;
        let f = factor_default(&(BigUint::from(a) * BigUint::from(b)));
        assert_eq!(
            f.distinct_primes(),
            vec![BigUint::from(b), BigUint::from(a)]
        );
    }

    #[test]
    fn mersenne_97() {
        let f = factor_pk_minus_1(2, 97);
        assert_eq!(f.product(), (BigUint::one() << 97) - 1u32);
        assert_eq!(f.omega_bounds(), (2, 2));
        assert!(f.primes.contains_key(&BigUint::from(11447u32)));
    }

    #[test]
    fn cyclotomic_pieces() {
        assert_eq!(cyclotomic_value(1, 5), BigUint::from(4u32));
        assert_eq!(cyclotomic_value(4, 5), BigUint::from(26u32));
        assert_eq!(cyclotomic_value(6, 2), BigUint::from(3u32));
        let f = factor_pk_minus_1(2, 30);
        assert_eq!(f.product(), BigUint::from((1u64 << 30) - 1));
        assert_eq!(f.omega(), Some(6));
        let g = factor_pk_quotient(3, 6, 2);
        assert_eq!(g.product(), BigUint::from(91u32));
    }

    #[test]
    fn arithmetic_functions() {
        assert_eq!(divisors_u64(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(moebius(30), -1);
        assert_eq!(moebius(12), 0);
        assert_eq!(euler_phi(15), 8);
        assert_eq!(multiplicative_order_mod(2, 11), 10);
        assert_eq!(prime_power_decompose(121), Some((11, 2)));
        assert_eq!(prime_power_decompose(12), None);
        assert_eq!(
            prime_powers_in(2, 16),
            vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16]
        );
    }

    #[test]
    fn unresolved_bounds_are_rigorous() {
        let f = IntFactors {
            primes: [(BigUint::from(3u32), 1)].into_iter().collect(),
            probable: BTreeMap::new(),
            unresolved: vec![BigUint::from(1_000_003u64) * BigUint::from(1_000_033u64)],
            trial_bound: TRIAL_BOUND,
        };
        let (lo, hi) = f.omega_bounds();
        assert!(lo <= 3 && 3 <= hi);
    }
}
