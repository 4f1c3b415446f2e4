//! Dense univariate polynomial algorithms over any finite field implementing
//! [`FieldOps`]. Polynomials are coefficient vectors, lowest degree first,
//! with no trailing zeros (the zero polynomial is the empty vector).

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Arithmetic of a finite field, as needed by the polynomial routines.
pub trait FieldOps {
    type E: Clone + PartialEq + Eq + std::fmt::Debug;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Multiplicative inverse; panics on zero.
    fn inv(&self, a: &Self::E) -> Self::E;
    /// Characteristic.
    fn characteristic(&self) -> u64;
    /// Degree over the prime field.
    fn prime_degree(&self) -> u32;
    /// Number of elements.
    fn size(&self) -> BigUint;
    /// The `k`-th element in enumeration order (base-p digits of `k`).
    fn element(&self, k: u64) -> Self::E;
    /// Inverse of [`FieldOps::element`].
    fn index(&self, a: &Self::E) -> u64;

    fn pow(&self, a: &Self::E, e: &BigUint) -> Self::E {
        let mut r = self.one();
        for i in (0..e.bits()).rev() {
            r = self.mul(&r, &r);
            if e.bit(i) {
                r = self.mul(&r, a);
            }
        }
        r
    }

    /// `a^(1/p)`.
    fn pth_root(&self, a: &Self::E) -> Self::E {
        let d = self.prime_degree();
        if d == 1 {
            return a.clone();
        }
        let e = BigUint::from(self.characteristic()).pow(d - 1);
        self.pow(a, &e)
    }
}

pub fn trim<F: FieldOps>(f: &F, mut a: Vec<F::E>) -> Vec<F::E> {
    while let Some(c) = a.last() {
        if f.is_zero(c) {
            a.pop();
        } else {
            break;
        }
    }
    a
}

pub fn degree<E>(a: &[E]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn constant<F: FieldOps>(f: &F, c: F::E) -> Vec<F::E> {
    trim(f, vec![c])
}

pub fn x_pow<F: FieldOps>(f: &F, k: usize) -> Vec<F::E> {
    let mut v = vec![f.zero(); k + 1];
    v[k] = f.one();
    v
}

pub fn add<F: FieldOps>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let v = (0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(f, v)
}

pub fn sub<F: FieldOps>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let v = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(f, v)
}

pub fn scale<F: FieldOps>(f: &F, a: &[F::E], c: &F::E) -> Vec<F::E> {
    trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn mul<F: FieldOps>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = f.mul(x, y);
            out[i + j] = f.add(&out[i + j], &t);
        }
    }
    trim(f, out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem<F: FieldOps>(f: &F, a: &[F::E], b: &[F::E]) -> (Vec<F::E>, Vec<F::E>) {
    let db = degree(b).expect("division by the zero polynomial");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let lead_inv = f.inv(&b[db]);
    let mut r = a.to_vec();
    let mut q = vec![f.zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = f.mul(&r[i + db], &lead_inv);
        if f.is_zero(&c) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = f.mul(&c, bj);
            r[i + j] = f.sub(&r[i + j], &t);
        }
        q[i] = c;
    }
    r.truncate(db);
    (trim(f, q), trim(f, r))
}

pub fn rem<F: FieldOps>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    divrem(f, a, b).1
}

/// Exact quotient `a / b`; panics if `b` does not divide `a`.
pub fn div_exact<F: FieldOps>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let (q, r) = divrem(f, a, b);
    assert!(r.is_empty(), "inexact polynomial division");
    q
}

pub fn monic<F: FieldOps>(f: &F, a: &[F::E]) -> Vec<F::E> {
    match a.last() {
        None => Vec::new(),
        Some(l) => {
            let li = f.inv(l);
            scale(f, a, &li)
        }
    }
}

pub fn is_one<F: FieldOps>(f: &F, a: &[F::E]) -> bool {
    a.len() == 1 && a[0] == f.one()
}

/// Monic greatest common divisor (zero if both inputs are zero).
pub fn gcd<F: FieldOps>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// Extended gcd: returns `(g, s, t)` with `s a + t b = g`, `g` monic.
pub fn ext_gcd<F: FieldOps>(f: &F, a: &[F::E], b: &[F::E]) -> (Vec<F::E>, Vec<F::E>, Vec<F::E>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (constant(f, f.one()), Vec::new());
    let (mut t0, mut t1) = (Vec::new(), constant(f, f.one()));
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &q, &s1));
        let t = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(l) => {
            let li = f.inv(l);
            (scale(f, &r0, &li), scale(f, &s0, &li), scale(f, &t0, &li))
        }
    }
}

pub fn mulmod<F: FieldOps>(f: &F, a: &[F::E], b: &[F::E], m: &[F::E]) -> Vec<F::E> {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod<F: FieldOps>(f: &F, a: &[F::E], e: &BigUint, m: &[F::E]) -> Vec<F::E> {
    let mut r = rem(f, &constant(f, f.one()), m);
    let base = rem(f, a, m);
    for i in (0..e.bits()).rev() {
        r = mulmod(f, &r, &r, m);
        if e.bit(i) {
            r = mulmod(f, &r, &base, m);
        }
    }
    r
}

pub fn derivative<F: FieldOps>(f: &F, a: &[F::E]) -> Vec<F::E> {
    let p = f.characteristic();
    let v = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| {
            let k = f.element((i as u64) % p);
            f.mul(&k, c)
        })
        .collect();
    trim(f, v)
}

/// Compare polynomials: degree first, then coefficients from the top down by
/// enumeration index.
pub fn graded_cmp<F: FieldOps>(f: &F, a: &[F::E], b: &[F::E]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for i in (0..a.len()).rev() {
            let c = f.index(&a[i]).cmp(&f.index(&b[i]));
            if c != std::cmp::Ordering::Equal {
                return c;
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// Square-free decomposition of a monic polynomial: pairs `(g, i)` with `g`
/// square-free and `f = prod g^i`.
pub fn squarefree<F: FieldOps>(f: &F, a: &[F::E]) -> Vec<(Vec<F::E>, u32)> {
    let mut out = Vec::new();
    sqf_rec(f, &monic(f, a), 1, &mut out);
    out
}

fn sqf_rec<F: FieldOps>(f: &F, a: &[F::E], mult: u32, out: &mut Vec<(Vec<F::E>, u32)>) {
    if degree(a).unwrap_or(0) == 0 {
        return;
    }
    let p = f.characteristic() as u32;
    let d = derivative(f, a);
    if d.is_empty() {
        sqf_rec(f, &pth_root_poly(f, a), mult * p, out);
        return;
    }
    let mut c = gcd(f, a, &d);
    let mut w = div_exact(f, a, &c);
    let mut i = 1;
    while !is_one(f, &w) {
        let y = gcd(f, &w, &c);
        let fac = div_exact(f, &w, &y);
        if !is_one(f, &fac) {
            out.push((fac, i * mult));
        }
        w = y;
        c = div_exact(f, &c, &w);
        i += 1;
    }
    if !is_one(f, &c) {
        sqf_rec(f, &pth_root_poly(f, &c), mult * p, out);
    }
}

fn pth_root_poly<F: FieldOps>(f: &F, a: &[F::E]) -> Vec<F::E> {
    let p = f.characteristic() as usize;
    let v = a.iter().step_by(p).map(|c| f.pth_root(c)).collect();
    trim(f, v)
}

/// Distinct-degree factorization of a square-free monic polynomial.
pub fn distinct_degree<F: FieldOps>(f: &F, a: &[F::E]) -> Vec<(Vec<F::E>, usize)> {
    let q = f.size();
    let x = x_pow(f, 1);
    let mut out = Vec::new();
    let mut rest = a.to_vec();
    let mut h = rem(f, &x, &rest);
    let mut d = 0;
    while degree(&rest).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = powmod(f, &h, &q, &rest);
        let g = gcd(f, &rest, &sub(f, &h, &x));
        if !is_one(f, &g) {
            rest = div_exact(f, &rest, &g);
            h = rem(f, &h, &rest);
            out.push((g, d));
        }
    }
    if let Some(dr) = degree(&rest) {
        if dr > 0 {
            out.push((rest, dr));
        }
    }
    out
}

/// Seed of the trial-polynomial stream; fixed so that factor order and
/// chosen roots are reproducible.
const SPLIT_SEED: u64 = 0x5911_7000;

/// A trial polynomial of degree below `len` with coefficients drawn
/// uniformly from `F` (from its first `2^63` elements if larger).
fn trial_poly<F: FieldOps>(f: &F, rng: &mut ChaCha8Rng, len: usize) -> Vec<F::E> {
    let q = f.size().to_u64().unwrap_or(u64::MAX).min(1 << 63);
    let v = (0..len).map(|_| f.element(rng.gen_range(0..q))).collect();
    trim(f, v)
}

/// A candidate splitting polynomial for a product of degree-`d` irreducibles.
fn splitter<F: FieldOps>(f: &F, a: &[F::E], r: &[F::E], d: usize) -> Vec<F::E> {
    let q = f.size();
    if f.characteristic() == 2 {
        // absolute trace map r + r^2 + ... + r^(2^(k d - 1)) with q = 2^k
        let steps = f.prime_degree() as usize * d;
        let mut acc = rem(f, r, a);
        let mut cur = acc.clone();
        for _ in 1..steps {
            cur = mulmod(f, &cur, &cur, a);
            acc = add(f, &acc, &cur);
        }
        acc
    } else {
        let e = (q.pow(d as u32) - BigUint::one()) >> 1;
        let t = powmod(f, r, &e, a);
        sub(f, &t, &constant(f, f.one()))
    }
}

/// Equal-degree factorization: split a product of distinct monic
/// irreducibles of degree `d` using a deterministic sequence of trial
/// polynomials.
pub fn equal_degree<F: FieldOps>(f: &F, a: &[F::E], d: usize) -> Vec<Vec<F::E>> {
    let n = degree(a).unwrap_or(0);
    if n == d {
        return vec![a.to_vec()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    loop {
        let r = trial_poly(f, &mut rng, n);
        if degree(&r).unwrap_or(0) == 0 {
            continue;
        }
        let s = splitter(f, a, &r, d);
        let g = gcd(f, a, &s);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = div_exact(f, a, &g);
            let mut out = equal_degree(f, &g, d);
            out.extend(equal_degree(f, &h, d));
            return out;
        }
    }
}

/// Complete factorization of a nonzero polynomial into monic irreducibles
/// with multiplicities, sorted in graded order. The leading coefficient is
/// returned separately.
pub fn factor<F: FieldOps>(f: &F, a: &[F::E]) -> (F::E, Vec<(Vec<F::E>, u32)>) {
    let lead = a.last().expect("cannot factor the zero polynomial").clone();
    let mut out: Vec<(Vec<F::E>, u32)> = Vec::new();
    for (sq, m) in squarefree(f, a) {
        for (g, d) in distinct_degree(f, &sq) {
            for irr in equal_degree(f, &g, d) {
                match out.iter_mut().find(|(h, _)| *h == irr) {
                    Some(slot) => slot.1 += m,
                    None => out.push((irr, m)),
                }
            }
        }
    }
    out.sort_by(|x, y| graded_cmp(f, &x.0, &y.0));
    (lead, out)
}

/// Rabin's irreducibility test.
pub fn is_irreducible<F: FieldOps>(f: &F, a: &[F::E]) -> bool {
    let n = match degree(a) {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let a = monic(f, a);
    let q = f.size();
    let x = x_pow(f, 1);
    let frob_pow = |k: usize| -> Vec<F::E> {
        let mut h = rem(f, &x, &a);
        for _ in 0..k {
            h = powmod(f, &h, &q, &a);
        }
        h
    };
    for (r, _) in crate::arith::factor_u64(n as u64) {
        let h = frob_pow(n / r as usize);
        let g = gcd(f, &a, &sub(f, &h, &x));
        if !is_one(f, &g) {
            return false;
        }
    }
    let h = frob_pow(n);
    rem(f, &sub(f, &h, &x), &a).is_empty()
}

/// One root of a polynomial that splits into distinct linear factors.
/// Panics after 256 consecutive unsuccessful trials, which for a split
/// squarefree input has probability below `2^-256`.
pub fn split_root<F: FieldOps>(f: &F, a: &[F::E]) -> F::E {
    let mut g = monic(f, a);
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut misses = 0;
    loop {
        let n = degree(&g).expect("no roots in the zero polynomial");
        assert!(n > 0, "constant polynomial has no roots");
        if n == 1 {
            return f.neg(&g[0]);
        }
        let r = trial_poly(f, &mut rng, n);
        let s = splitter(f, &g, &r, 1);
        let h = gcd(f, &g, &s);
        let dh = degree(&h).unwrap_or(0);
        if dh > 0 && dh < n {
            let other = div_exact(f, &g, &h);
            g = if dh <= n - dh { h } else { other };
            misses = 0;
        } else {
            misses += 1;
            assert!(
                misses < 256,
                "split_root: polynomial does not split into distinct linear factors"
            );
        }
    }
}

/// Evaluate at a point (Horner).
pub fn eval<F: FieldOps>(f: &F, a: &[F::E], x: &F::E) -> F::E {
    let mut acc = f.zero();
    for c in a.iter().rev() {
        acc = f.add(&f.mul(&acc, x), c);
    }
    acc
}
