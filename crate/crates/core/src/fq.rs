//! Standalone small fields `F_q`, `q = p^e`, with elements stored as integer
//! indices (`sum c_i p^i` over the coefficient vector in `F_p[y]/(M)`).
//!
//! Each `(p, d)` has one canonical modulus: the first monic primitive
//! polynomial of degree `d` in index order of its lower coefficients. The
//! same modulus is used for the base field `F_q` and for every subfield of a
//! [`FieldContext`](crate::ff::FieldContext), so elements mean the same thing
//! everywhere.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;

use crate::arith;
use crate::error::{Error, Result};
use crate::upoly::{self, FieldOps};

/// Largest `q` (for `e > 1`) supported by the log/exp tables.
pub const MAX_TABLE_Q: u64 = 1 << 20;

/// The finite field `F_q`.
#[derive(Debug)]
pub struct Fq {
    p: u64,
    e: u32,
    q: u64,
    /// Canonical modulus over `F_p` (monic, length `e + 1`); `[0, 1]` when `e = 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

fn fq_cache() -> &'static Mutex<HashMap<(u64, u32), Arc<Fq>>> {
    static C: OnceLock<Mutex<HashMap<(u64, u32), Arc<Fq>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Fq {
    /// The field with `p^e` elements (cached).
    pub fn new(p: u64, e: u32) -> Result<Arc<Fq>> {
        if !arith::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidParameter(
                "field degree must be positive".into(),
            ));
        }
        if p > u32::MAX as u64 {
            return Err(Error::InvalidParameter(format!(
                "characteristic {p} exceeds 32 bits"
            )));
        }
        if let Some(f) = fq_cache().lock().unwrap().get(&(p, e)) {
            return Ok(f.clone());
        }
        let f = Arc::new(if e == 1 {
            Fq {
                p,
                e,
                q: p,
                modulus: vec![0, 1],
                exp: Vec::new(),
                log: Vec::new(),
            }
        } else {
            Self::build_tables(p, e)?
        });
        fq_cache().lock().unwrap().insert((p, e), f.clone());
        Ok(f)
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Arc<Fq>> {
        Self::new(p, 1)
    }

    fn build_tables(p: u64, e: u32) -> Result<Fq> {
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_TABLE_Q)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "F_{{{p}^{e}}} exceeds the table limit of {MAX_TABLE_Q} elements"
                ))
            })?;
        let modulus = canonical_modulus(p, e as usize)?;
        let d = e as usize;
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![0u32; q as usize];
        // y^i as a digit vector, multiplied by y each step
        let mut cur = vec![0u64; d];
        cur[0] = 1;
        for (i, slot) in exp.iter_mut().enumerate() {
            let idx = cur.iter().rev().fold(0u64, |acc, &c| acc * p + c);
            *slot = idx as u32;
            log[idx as usize] = i as u32;
            let top = cur[d - 1];
            for j in (1..d).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for j in 0..d {
                    cur[j] = (cur[j] + p - top * modulus[j] as u64 % p) % p;
                }
            }
        }
        Ok(Fq {
            p,
            e,
            q,
            modulus,
            exp,
            log,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Canonical modulus of `F_q` over `F_p`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Digits (coefficients over `F_p`) of an element.
    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.e as usize);
        let mut k = a as u64;
        for _ in 0..self.e {
            v.push((k % self.p) as u32);
            k /= self.p;
        }
        v
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p + (c as u64 % self.p)) as u32
    }

    /// `c mod p` as an element of the prime subfield.
    pub fn from_int(&self, c: i64) -> u32 {
        c.rem_euclid(self.p as i64) as u32
    }

    /// The canonical generator `y` of `F_q^*` (for `e = 1` the least primitive root).
    pub fn generator(&self) -> u32 {
        if self.e > 1 {
            return self.exp[1 % self.exp.len()];
        }
        if self.p == 2 {
            return 1;
        }
        let fac = arith::factor_u64(self.p - 1);
        (1..self.p)
            .find(|&g| {
                fac.iter()
                    .all(|&(r, _)| pow_u64(g, (self.p - 1) / r, self.p) != 1)
            })
            .unwrap() as u32
    }

    fn add_digits(&self, a: u32, b: u32, sign: u64) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut x, mut y) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.e {
            let (dx, dy) = (x % self.p, y % self.p);
            let d = (dx + sign * dy) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        out as u32
    }
}

fn pow_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

impl FieldOps for Fq {
    type E = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        if self.e == 1 {
            ((*a as u64 + *b as u64) % self.p) as u32
        } else {
            self.add_digits(*a, *b, 1)
        }
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if self.e == 1 {
            ((*a as u64 + self.p - *b as u64) % self.p) as u32
        } else {
            self.add_digits(*a, *b, self.p - 1)
        }
    }
    fn neg(&self, a: &u32) -> u32 {
        self.sub(&0, a)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if self.e == 1 {
            ((*a as u64 * *b as u64) % self.p) as u32
        } else if *a == 0 || *b == 0 {
            0
        } else {
            let n = self.q - 1;
            let s = (self.log[*a as usize] as u64 + self.log[*b as usize] as u64) % n;
            self.exp[s as usize]
        }
    }
    fn inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "zero has no inverse");
        if self.e == 1 {
            pow_u64(*a as u64, self.p - 2, self.p) as u32
        } else {
            let n = self.q - 1;
            self.exp[((n - self.log[*a as usize] as u64) % n) as usize]
        }
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn prime_degree(&self) -> u32 {
        self.e
    }
    fn size(&self) -> BigUint {
        BigUint::from(self.q)
    }
    fn element(&self, k: u64) -> u32 {
        (k % self.q) as u32
    }
    fn index(&self, a: &u32) -> u64 {
        *a as u64
    }
}

fn modulus_cache() -> &'static Mutex<HashMap<(u64, usize), Vec<u32>>> {
    static C: OnceLock<Mutex<HashMap<(u64, usize), Vec<u32>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Whether monic `f` over `F_p` of degree `d` is primitive, given the prime
/// divisors of `p^d - 1`.
pub fn is_primitive_poly(fp: &Fq, f: &[u32], primes: &[BigUint]) -> bool {
    let d = f.len() - 1;
    if f[0] == 0 || !upoly::is_irreducible(fp, f) {
        return false;
    }
    let order = BigUint::from(fp.p()).pow(d as u32) - 1u32;
    let x = vec![0u32, 1];
    primes.iter().all(|r| {
        let h = upoly::powmod(fp, &x, &(&order / r), f);
        !upoly::is_one(fp, &h)
    })
}

/// The canonical primitive modulus of degree `d` over `F_p`: the first monic
/// primitive polynomial when the lower coefficients run through
/// `k = 1, 2, ...` written in base `p` (constant term least significant).
pub fn canonical_modulus(p: u64, d: usize) -> Result<Vec<u32>> {
    if let Some(m) = modulus_cache().lock().unwrap().get(&(p, d)) {
        return Ok(m.clone());
    }
    let fp = Fq::prime(p)?;
    let fac = arith::factor_pk_minus_1(p, d as u64);
    if !fac.is_complete() {
        return Err(Error::FactorBudget(format!("{p}^{d} - 1")));
    }
    let primes = fac.distinct_primes();
    let mut k: u64 = 1;
    let found = loop {
        let mut f = Vec::with_capacity(d + 1);
        let mut t = k;
        for _ in 0..d {
            f.push((t % p) as u32);
            t /= p;
        }
        if t > 0 {
            return Err(Error::Internal(format!(
                "no primitive polynomial of degree {d} over F_{p}"
            )));
        }
        f.push(1);
        if is_primitive_poly(&fp, &f, &primes) {
            break f;
        }
        k += 1;
    };
    modulus_cache()
        .lock()
        .unwrap()
        .insert((p, d), found.clone());
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_moduli() {
        assert_eq!(canonical_modulus(2, 4).unwrap(), vec![1, 1, 0, 0, 1]);
        assert_eq!(canonical_modulus(2, 2).unwrap(), vec![1, 1, 1]);
        // x^2 + x + 2 is the first primitive quadratic over F_3
        assert_eq!(canonical_modulus(3, 2).unwrap(), vec![2, 1, 1]);
    }

    #[test]
    fn field_axioms_f9_f16() {
        for (p, e) in [(3u64, 2u32), (2, 4), (5, 2)] {
            let f = Fq::new(p, e).unwrap();
            let q = f.q() as u32;
            for a in 0..q {
                for b in 0..q {
                    let s = f.add(&a, &b);
                    assert_eq!(f.sub(&s, &b), a);
                    let m = f.mul(&a, &b);
                    assert_eq!(m, f.mul(&b, &a));
                    if b != 0 {
                        assert_eq!(f.mul(&m, &f.inv(&b)), a);
                    }
                    for c in [1u32, q - 1] {
                        let lhs = f.mul(&a, &f.add(&b, &c));
                        let rhs = f.add(&f.mul(&a, &b), &f.mul(&a, &c));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn generators() {
        assert_eq!(Fq::prime(7).unwrap().generator(), 3);
        let f = Fq::new(2, 3).unwrap();
        let g = f.generator();
        let mut seen = std::collections::HashSet::new();
        let mut x = 1u32;
        for _ in 0..7 {
            seen.insert(x);
            x = f.mul(&x, &g);
        }
        assert_eq!(seen.len(), 7);
    }
}
