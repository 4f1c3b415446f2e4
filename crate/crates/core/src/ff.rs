//! The extension field `F_{q^n}`, `q = p^e`, as one flat tower
//! `F_p[z]/(F)` with `deg F = e n`, together with its subfields `F_{q^m}`,
//! `m | n`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::arith::{self, IntFactors};
use crate::error::{Error, Result};
use crate::fq::{self, Fq};
use crate::poly::{self, Factorization, Poly};
use crate::upoly::{self, FieldOps};

/// Default cap on the number of elements an enumeration may visit.
pub const ENUMERATION_LIMIT: u64 = 1 << 30;

/// A prime power `q = p^e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimePower {
    pub p: u64,
    pub e: u32,
    pub q: BigUint,
}

impl PrimePower {
    pub fn new(p: u64, e: u32) -> Result<PrimePower> {
        if !arith::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidParameter("exponent must be positive".into()));
        }
        Ok(PrimePower {
            p,
            e,
            q: BigUint::from(p).pow(e),
        })
    }

    /// Decompose `q` into `p^e`.
    pub fn from_q(q: u64) -> Result<PrimePower> {
        let (p, e) = arith::prime_power_decompose(q).ok_or(Error::NotPrimePower(q))?;
        PrimePower::new(p, e)
    }

    pub fn q_u64(&self) -> Option<u64> {
        self.q.to_u64()
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.e)
        }
    }
}

/// An element of `F_{q^n}`: coordinates over `F_p` in the basis
/// `1, z, ..., z^{D-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `F_{q^m}` inside `F_{q^n}`: the powers of a root of the canonical modulus
/// of degree `e m`, and a change of basis for projecting back.
#[derive(Clone, Debug)]
pub struct Subfield {
    pub m: u32,
    /// `F_p`-basis `r^0, ..., r^{em-1}`.
    basis: Vec<FieldElement>,
    /// Rows of the inverse of `[basis | completion]`.
    reducer: Vec<Vec<u32>>,
}

impl Subfield {
    /// Degree over `F_p`.
    pub fn prime_degree(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }
}

/// The field `F_{q^n}` with all the data the other modules need.
pub struct FieldContext {
    base: PrimePower,
    n: u32,
    degree: usize,
    modulus: Vec<u32>,
    fp: Arc<Fq>,
    fq: Arc<Fq>,
    cardinality: BigUint,
    group_order: BigUint,
    group_order_factors: IntFactors,
    order_primes: Vec<BigUint>,
    generator: FieldElement,
    /// `z^{D+k} mod F` for `k < D - 1`.
    reduction: Vec<Vec<u32>>,
    /// Column `i` is `z^{iq}`.
    frob: Vec<Vec<u32>>,
    /// `Tr_{p^D/p}(z^i)`.
    trace_p: Vec<u32>,
    subfields: BTreeMap<u32, Subfield>,
    xn_factorization: OnceLock<Factorization>,
    xn_divisors: OnceLock<Vec<Poly>>,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldContext(F_{{{}^{}}})", self.base, self.n)
    }
}

/// Build `F_{q^n}` for `q = p^e` using the canonical modulus of degree `e n`.
pub fn build_field(p: u64, e: u32, n: u32) -> Result<FieldContext> {
    FieldContext::new(p, e, n)
}

impl FieldContext {
    pub fn new(p: u64, e: u32, n: u32) -> Result<FieldContext> {
        let base = PrimePower::new(p, e)?;
        if n == 0 {
            return Err(Error::InvalidParameter(
                "extension degree must be positive".into(),
            ));
        }
        let d = e as usize * n as usize;
        let modulus = fq::canonical_modulus(p, d)?;
        Self::assemble(base, n, modulus, true)
    }

    /// Build `F_{q^n}` on a caller-supplied irreducible modulus of degree
    /// `e n` over `F_p` (monic, lowest coefficient first).
    pub fn with_modulus(p: u64, e: u32, n: u32, modulus: &[u32]) -> Result<FieldContext> {
        let base = PrimePower::new(p, e)?;
        if n == 0 {
            return Err(Error::InvalidParameter(
                "extension degree must be positive".into(),
            ));
        }
        let fp = Fq::prime(p)?;
        let m = upoly::trim(
            &*fp,
            modulus.iter().map(|&c| (c as u64 % p) as u32).collect(),
        );
        let d = e as usize * n as usize;
        if upoly::degree(&m) != Some(d) || m[d] != 1 {
            return Err(Error::InvalidParameter(format!(
                "modulus must be monic of degree {d}"
            )));
        }
        if !upoly::is_irreducible(&*fp, &m) {
            return Err(Error::InvalidParameter("modulus is reducible".into()));
        }
        let canonical = fq::canonical_modulus(p, d).ok() == Some(m.clone());
        Self::assemble(base, n, m, canonical)
    }

    fn assemble(
        base: PrimePower,
        n: u32,
        modulus: Vec<u32>,
        canonical: bool,
    ) -> Result<FieldContext> {
        let p = base.p;
        let d = modulus.len() - 1;
        let fp = Fq::prime(p)?;
        let fq = Fq::new(p, base.e)?;
        let cardinality = BigUint::from(p).pow(d as u32);
        let group_order = &cardinality - 1u32;
        let group_order_factors = arith::factor_pk_minus_1(p, d as u64);
        if !group_order_factors.is_complete() {
            return Err(Error::FactorBudget(format!("{p}^{d} - 1")));
        }
        let order_primes = group_order_factors.distinct_primes();

        let mut reduction = Vec::new();
        let mut cur = upoly::x_pow(&*fp, d);
        cur = upoly::rem(&*fp, &cur, &modulus);
        for _ in 0..d.saturating_sub(1) {
            reduction.push(pad(&cur, d));
            cur = upoly::mulmod(&*fp, &cur, &[0, 1], &modulus);
        }

        let mut ctx = FieldContext {
            base,
            n,
            degree: d,
            modulus,
            fp,
            fq,
            cardinality,
            group_order,
            group_order_factors,
            order_primes,
            generator: FieldElement { coeffs: vec![0; d] },
            reduction,
            frob: Vec::new(),
            trace_p: Vec::new(),
            subfields: BTreeMap::new(),
            xn_factorization: OnceLock::new(),
            xn_divisors: OnceLock::new(),
        };

        let zq = upoly::powmod(&*ctx.fp, &[0, 1], &ctx.base.q, &ctx.modulus);
        let mut col = vec![1u32];
        for _ in 0..d {
            ctx.frob.push(pad(&col, d));
            col = upoly::mulmod(&*ctx.fp, &col, &zq, &ctx.modulus);
        }
        ctx.trace_p = newton_traces(&ctx.fp, &ctx.modulus);
        ctx.generator = ctx.find_generator();

        for m in arith::divisors_u64(n as u64) {
            let m = m as u32;
            let sub = ctx.make_subfield(m, canonical && m == n)?;
            ctx.subfields.insert(m, sub);
        }
        Ok(ctx)
    }

    fn find_generator(&self) -> FieldElement {
        let p = self.base.p;
        // z, z+1, ... in index order, then the constants
        let mut k = if self.degree == 1 { 1 } else { p };
        loop {
            let a = self.from_index(k);
            if !self.is_zero(&a) && self.is_primitive(&a) {
                return a;
            }
            k += 1;
        }
    }

    fn make_subfield(&self, m: u32, use_z: bool) -> Result<Subfield> {
        let em = self.base.e as usize * m as usize;
        let d = self.degree;
        let basis = if em == 1 {
            vec![self.one()]
        } else {
            let root = if use_z {
                self.z()
            } else {
                let mm = fq::canonical_modulus(self.base.p, em)?;
                let lifted: Vec<FieldElement> = mm.iter().map(|&c| self.from_prime(c)).collect();
                upoly::split_root(self, &lifted)
            };
            let mut b = Vec::with_capacity(em);
            let mut cur = self.one();
            for _ in 0..em {
                b.push(cur.clone());
                cur = self.mul(&cur, &root);
            }
            b
        };
        // complete the basis with unit vectors and invert
        let mut cols: Vec<Vec<u32>> = basis.iter().map(|b| b.coeffs.clone()).collect();
        for i in 0..d {
            if cols.len() == d {
                break;
            }
            let mut unit = vec![0u32; d];
            unit[i] = 1;
            let mut trial = cols.clone();
            trial.push(unit);
            if rank(&self.fp, &trial) == trial.len() {
                cols = trial;
            }
        }
        let reducer = invert_columns(&self.fp, &cols)
            .ok_or_else(|| Error::Internal("subfield basis is singular".into()))?;
        Ok(Subfield { m, basis, reducer })
    }

    pub fn base(&self) -> &PrimePower {
        &self.base
    }

    pub fn p(&self) -> u64 {
        self.base.p
    }

    pub fn e(&self) -> u32 {
        self.base.e
    }

    pub fn q(&self) -> &BigUint {
        &self.base.q
    }

    /// `q` as a machine word (panics above `2^64`, which no field here reaches).
    pub fn q_u64(&self) -> u64 {
        self.base.q.to_u64().expect("q exceeds 64 bits")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Degree `e n` over `F_p`.
    pub fn prime_degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn prime_field(&self) -> &Arc<Fq> {
        &self.fp
    }

    /// The base field `F_q` as a standalone field.
    pub fn base_field(&self) -> &Arc<Fq> {
        &self.fq
    }

    pub fn cardinality(&self) -> &BigUint {
        &self.cardinality
    }

    /// `q^n` as a machine word, if it fits.
    pub fn cardinality_u64(&self) -> Option<u64> {
        self.cardinality.to_u64()
    }

    pub fn group_order(&self) -> &BigUint {
        &self.group_order
    }

    pub fn group_order_factors(&self) -> &IntFactors {
        &self.group_order_factors
    }

    pub fn generator(&self) -> &FieldElement {
        &self.generator
    }

    pub fn subfield(&self, m: u32) -> Result<&Subfield> {
        self.subfields.get(&m).ok_or_else(|| Error::NotADivisor {
            divisor: m.to_string(),
            value: self.n.to_string(),
        })
    }

    pub fn subfields(&self) -> impl Iterator<Item = &Subfield> {
        self.subfields.values()
    }

    /// Factorization of `x^n - 1` over `F_q`.
    pub fn xn_factorization(&self) -> &Factorization {
        self.xn_factorization
            .get_or_init(|| poly::factor_xn_minus_1(&self.fq, self.n as usize))
    }

    /// All monic divisors of `x^n - 1`, in graded order.
    pub fn xn_divisors(&self) -> &[Poly] {
        self.xn_divisors
            .get_or_init(|| poly::xn_divisors(&self.fq, self.n as usize))
    }

    /// Error unless `q^n` is at most `limit`; returns `q^n`.
    pub fn check_enumeration(&self, limit: u64) -> Result<u64> {
        match self.cardinality.to_u64() {
            Some(c) if c <= limit => Ok(c),
            _ => Err(Error::EnumerationBudget {
                size: self.cardinality.to_string(),
                limit,
            }),
        }
    }

    // ---- elements ----

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.degree],
        }
    }

    pub fn one(&self) -> FieldElement {
        let mut c = vec![0; self.degree];
        c[0] = 1;
        FieldElement { coeffs: c }
    }

    /// The class of `z`.
    pub fn z(&self) -> FieldElement {
        if self.degree == 1 {
            return FieldElement {
                coeffs: vec![((self.p() - self.modulus[0] as u64) % self.p()) as u32],
            };
        }
        let mut c = vec![0; self.degree];
        c[1] = 1;
        FieldElement { coeffs: c }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.degree {
            return Err(Error::InvalidParameter(format!(
                "{} coordinates given for a field of degree {}",
                coeffs.len(),
                self.degree
            )));
        }
        let mut c: Vec<u32> = coeffs
            .iter()
            .map(|&x| (x as u64 % self.p()) as u32)
            .collect();
        c.resize(self.degree, 0);
        Ok(FieldElement { coeffs: c })
    }

    /// The element whose coordinates are the base-`p` digits of `k`.
    pub fn from_index(&self, k: u64) -> FieldElement {
        let p = self.p();
        let mut t = k;
        let coeffs = (0..self.degree)
            .map(|_| {
                let c = (t % p) as u32;
                t /= p;
                c
            })
            .collect();
        FieldElement { coeffs }
    }

    /// Inverse of [`FieldContext::from_index`]; saturates above `u64::MAX`.
    pub fn index(&self, a: &FieldElement) -> u64 {
        let p = self.p() as u128;
        let mut acc: u128 = 0;
        for &c in a.coeffs.iter().rev() {
            acc = acc.saturating_mul(p).saturating_add(c as u128);
        }
        acc.min(u64::MAX as u128) as u64
    }

    /// A prime-field constant.
    pub fn from_prime(&self, c: u32) -> FieldElement {
        let mut v = vec![0; self.degree];
        v[0] = (c as u64 % self.p()) as u32;
        FieldElement { coeffs: v }
    }

    /// All elements in index order (bounded by `limit`).
    pub fn elements(&self, limit: u64) -> Result<impl Iterator<Item = FieldElement> + '_> {
        let size = self.check_enumeration(limit)?;
        Ok((0..size).map(move |k| self.from_index(k)))
    }

    /// Parse `[c0,c1,...]` or `c0,c1,...` (coordinates over `F_p`), `g^i`
    /// (power of the generator), or `#k` (enumeration index).
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("g^") {
            let i: BigUint = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            return Ok(self.pow(&self.generator, &i));
        }
        if let Some(rest) = s.strip_prefix('#') {
            let k: u64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad index in {s:?}")))?;
            return Ok(self.from_index(k));
        }
        let inner = s.trim_start_matches('[').trim_end_matches(']');
        let coeffs = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map(|v| (v % self.p()) as u32)
                    .map_err(|_| Error::Parse(format!("bad coordinate {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        self.from_coeffs(&coeffs)
    }

    // ---- arithmetic ----

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p();
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| ((x as u64 + y as u64) % p) as u32)
            .collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p();
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| ((x as u64 + p - y as u64) % p) as u32)
            .collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.sub(&self.zero(), a)
    }

    /// Multiply by a prime-field scalar.
    pub fn scale(&self, a: &FieldElement, c: u32) -> FieldElement {
        let p = self.p();
        let coeffs = a
            .coeffs
            .iter()
            .map(|&x| (x as u64 * c as u64 % p) as u32)
            .collect();
        FieldElement { coeffs }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let d = self.degree;
        let p = self.p();
        if d == 1 {
            return FieldElement {
                coeffs: vec![(a.coeffs[0] as u64 * b.coeffs[0] as u64 % p) as u32],
            };
        }
        // D (p-1)^2 < 2^64 keeps the plain u64 accumulators exact
        let small = p < (1 << 20) && d < (1 << 20);
        let mut prod = vec![0u64; 2 * d - 1];
        if small {
            for (i, &x) in a.coeffs.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.coeffs.iter().enumerate() {
                    prod[i + j] += x as u64 * y as u64;
                }
            }
            for v in prod.iter_mut() {
                *v %= p;
            }
            let mut out: Vec<u64> = prod[..d].to_vec();
            for (k, row) in self.reduction.iter().enumerate() {
                let c = prod[d + k];
                if c == 0 {
                    continue;
                }
                for (o, &r) in out.iter_mut().zip(row) {
                    *o += c * r as u64;
                }
            }
            FieldElement {
                coeffs: out.into_iter().map(|v| (v % p) as u32).collect(),
            }
        } else {
            let mm = |x: u64, y: u64| (x as u128 * y as u128 % p as u128) as u64;
            for (i, &x) in a.coeffs.iter().enumerate() {
                for (j, &y) in b.coeffs.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + mm(x as u64, y as u64)) % p;
                }
            }
            let mut out: Vec<u64> = prod[..d].to_vec();
            for (k, row) in self.reduction.iter().enumerate() {
                let c = prod[d + k];
                for (o, &r) in out.iter_mut().zip(row) {
                    *o = (*o + mm(c, r as u64)) % p;
                }
            }
            FieldElement {
                coeffs: out.into_iter().map(|v| v as u32).collect(),
            }
        }
    }

    pub fn square(&self, a: &FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if self.is_zero(a) {
            return Err(Error::ZeroElement);
        }
        let fp = &*self.fp;
        let av = upoly::trim(fp, a.coeffs.clone());
        let (_, s, _) = upoly::ext_gcd(fp, &av, &self.modulus);
        Ok(FieldElement {
            coeffs: pad(&s, self.degree),
        })
    }

    pub fn pow(&self, a: &FieldElement, e: &BigUint) -> FieldElement {
        let mut r = self.one();
        for i in (0..e.bits()).rev() {
            r = self.mul(&r, &r);
            if e.bit(i) {
                r = self.mul(&r, a);
            }
        }
        r
    }

    pub fn pow_u64(&self, a: &FieldElement, e: u64) -> FieldElement {
        self.pow(a, &BigUint::from(e))
    }

    /// `a^{q^j}`.
    pub fn frobenius(&self, a: &FieldElement, j: u32) -> FieldElement {
        let mut cur = a.clone();
        for _ in 0..(j % self.n) {
            cur = self.frobenius_once(&cur);
        }
        cur
    }

    fn frobenius_once(&self, a: &FieldElement) -> FieldElement {
        let p = self.p();
        let mut out = vec![0u64; self.degree];
        for (i, &c) in a.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &f) in out.iter_mut().zip(&self.frob[i]) {
                *o = (*o + c as u64 * f as u64) % p;
            }
        }
        FieldElement {
            coeffs: out.into_iter().map(|v| v as u32).collect(),
        }
    }

    /// `a, a^q, ..., a^{q^{n-1}}`.
    pub fn conjugates(&self, a: &FieldElement) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(self.n as usize);
        let mut cur = a.clone();
        for _ in 0..self.n {
            let next = self.frobenius_once(&cur);
            out.push(cur);
            cur = next;
        }
        out
    }

    /// `Tr_{q^n/q^m}(a)`, as an element of `F_{q^n}` lying in `F_{q^m}`.
    pub fn trace(&self, a: &FieldElement, m: u32) -> Result<FieldElement> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(Error::NotADivisor {
                divisor: m.to_string(),
                value: self.n.to_string(),
            });
        }
        let mut acc = self.zero();
        let mut cur = a.clone();
        for _ in 0..self.n / m {
            acc = self.add(&acc, &cur);
            cur = self.frobenius(&cur, m);
        }
        Ok(acc)
    }

    /// `Tr_{q^m/q^l}(a)` for `a` in `F_{q^m}`, `l | m | n`.
    pub fn relative_trace(&self, a: &FieldElement, m: u32, l: u32) -> Result<FieldElement> {
        if l == 0 || m == 0 || !m.is_multiple_of(l) || !self.n.is_multiple_of(m) {
            return Err(Error::NotADivisor {
                divisor: format!("{l} | {m}"),
                value: self.n.to_string(),
            });
        }
        let mut acc = self.zero();
        let mut cur = a.clone();
        for _ in 0..m / l {
            acc = self.add(&acc, &cur);
            cur = self.frobenius(&cur, l);
        }
        Ok(acc)
    }

    /// `Tr_{q^n/q}(a)` as an element of the standalone `F_q`.
    pub fn trace_to_base(&self, a: &FieldElement) -> u32 {
        let t = self.trace(a, 1).expect("1 divides n");
        self.project_base(&t).expect("trace lies in F_q")
    }

    /// Absolute trace `Tr_{q^n/p}(a)` in `F_p`.
    pub fn abs_trace(&self, a: &FieldElement) -> u32 {
        let p = self.p();
        let s = a
            .coeffs
            .iter()
            .zip(&self.trace_p)
            .fold(0u64, |acc, (&c, &t)| (acc + c as u64 * t as u64) % p);
        s as u32
    }

    /// Exact multiplicative order by the divide-out method.
    pub fn multiplicative_order(&self, a: &FieldElement) -> Result<BigUint> {
        if self.is_zero(a) {
            return Err(Error::ZeroElement);
        }
        let mut order = self.group_order.clone();
        for (r, k) in self.group_order_factors.prime_powers() {
            for _ in 0..k {
                let cand = &order / &r;
                if self.pow(a, &cand) == self.one() {
                    order = cand;
                } else {
                    break;
                }
            }
        }
        Ok(order)
    }

    pub fn is_primitive(&self, a: &FieldElement) -> bool {
        if self.is_zero(a) {
            return false;
        }
        let one = self.one();
        self.order_primes
            .iter()
            .all(|r| self.pow(a, &(&self.group_order / r)) != one)
    }

    // ---- subfields ----

    /// Embed `F_{q^m}` coordinates (over `F_p`, length `e m`).
    pub fn embed(&self, m: u32, coords: &[u32]) -> Result<FieldElement> {
        let sub = self.subfield(m)?;
        if coords.len() > sub.basis.len() {
            return Err(Error::InvalidParameter(format!(
                "too many coordinates for F_{{q^{m}}}"
            )));
        }
        let mut acc = self.zero();
        for (b, &c) in sub.basis.iter().zip(coords) {
            if c != 0 {
                acc = self.add(&acc, &self.scale(b, c));
            }
        }
        Ok(acc)
    }

    /// Coordinates of `a` in `F_{q^m}`, or `None` if `a` is not in it.
    pub fn project(&self, m: u32, a: &FieldElement) -> Result<Option<Vec<u32>>> {
        let sub = self.subfield(m)?;
        let p = self.p();
        let mut out = Vec::with_capacity(sub.basis.len());
        for (i, row) in sub.reducer.iter().enumerate() {
            let v = row
                .iter()
                .zip(&a.coeffs)
                .fold(0u64, |acc, (&r, &c)| (acc + r as u64 * c as u64) % p)
                as u32;
            if i < sub.basis.len() {
                out.push(v);
            } else if v != 0 {
                return Ok(None);
            }
        }
        Ok(Some(out))
    }

    /// The `k`-th element of `F_{q^m}` (digits of `k` in base `p`).
    pub fn subfield_element(&self, m: u32, k: u64) -> Result<FieldElement> {
        let em = self.subfield(m)?.basis.len();
        let p = self.p();
        let mut t = k;
        let coords: Vec<u32> = (0..em)
            .map(|_| {
                let c = (t % p) as u32;
                t /= p;
                c
            })
            .collect();
        self.embed(m, &coords)
    }

    /// Index of a subfield element inside `F_{q^m}` (inverse of
    /// [`FieldContext::subfield_element`]).
    pub fn subfield_index(&self, m: u32, a: &FieldElement) -> Result<Option<u64>> {
        let p = self.p();
        Ok(self
            .project(m, a)?
            .map(|c| c.iter().rev().fold(0u64, |acc, &x| acc * p + x as u64)))
    }

    /// Embed an element of the standalone `F_q`.
    pub fn embed_base(&self, c: u32) -> FieldElement {
        if self.base.e == 1 {
            return self.from_prime(c);
        }
        let digits = self.fq.digits(c);
        self.embed(1, &digits).expect("1 divides n")
    }

    /// Project onto the standalone `F_q`.
    pub fn project_base(&self, a: &FieldElement) -> Option<u32> {
        if self.base.e == 1 {
            return a.coeffs[1..].iter().all(|&c| c == 0).then(|| a.coeffs[0]);
        }
        self.project(1, a)
            .expect("1 divides n")
            .map(|d| self.fq.from_digits(&d))
    }
}

impl FieldOps for FieldContext {
    type E = FieldElement;

    fn zero(&self) -> FieldElement {
        FieldContext::zero(self)
    }
    fn one(&self) -> FieldElement {
        FieldContext::one(self)
    }
    fn is_zero(&self, a: &FieldElement) -> bool {
        FieldContext::is_zero(self, a)
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldContext::add(self, a, b)
    }
    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldContext::sub(self, a, b)
    }
    fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldContext::neg(self, a)
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldContext::mul(self, a, b)
    }
    fn inv(&self, a: &FieldElement) -> FieldElement {
        FieldContext::inv(self, a).expect("zero has no inverse")
    }
    fn characteristic(&self) -> u64 {
        self.base.p
    }
    fn prime_degree(&self) -> u32 {
        self.degree as u32
    }
    fn size(&self) -> BigUint {
        self.cardinality.clone()
    }
    fn element(&self, k: u64) -> FieldElement {
        self.from_index(k)
    }
    fn index(&self, a: &FieldElement) -> u64 {
        FieldContext::index(self, a)
    }
}

fn pad(v: &[u32], d: usize) -> Vec<u32> {
    let mut out = v.to_vec();
    out.resize(d, 0);
    out
}

/// Power sums of the roots of monic `f` (Newton's identities): `Tr(z^i)`.
fn newton_traces(fp: &Fq, f: &[u32]) -> Vec<u32> {
    let d = f.len() - 1;
    let p = fp.p();
    let c = |j: usize| f[j] as u64; // coefficient of z^j
    let mut s = vec![0u64; d];
    s[0] = d as u64 % p;
    for k in 1..d {
        // s_k = -(sum_{i=1}^{k-1} c_{d-i} s_{k-i} + k c_{d-k})
        let mut acc = (k as u64 % p) * c(d - k) % p;
        for i in 1..k {
            acc = (acc + c(d - i) * s[k - i]) % p;
        }
        s[k] = (p - acc) % p;
    }
    s.into_iter().map(|v| v as u32).collect()
}

fn rank(fp: &Fq, cols: &[Vec<u32>]) -> usize {
    let mut rows: Vec<Vec<u32>> = cols.to_vec();
    let width = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..width {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = fp.inv(&rows[r][c]);
        let pivot: Vec<u32> = rows[r].iter().map(|x| fp.mul(x, &inv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = fp.sub(x, &fp.mul(&f, y));
                }
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}

/// Inverse of the square matrix whose columns are `cols`, as rows.
fn invert_columns(fp: &Fq, cols: &[Vec<u32>]) -> Option<Vec<Vec<u32>>> {
    let d = cols.len();
    // augmented [A | I] with A[i][j] = cols[j][i]
    let mut a: Vec<Vec<u32>> = (0..d)
        .map(|i| {
            let mut row: Vec<u32> = (0..d).map(|j| cols[j][i]).collect();
            row.extend((0..d).map(|j| (i == j) as u32));
            row
        })
        .collect();
    for c in 0..d {
        let piv = (c..d).find(|&i| a[i][c] != 0)?;
        a.swap(c, piv);
        let inv = fp.inv(&a[c][c]);
        let pivot: Vec<u32> = a[c].iter().map(|x| fp.mul(x, &inv)).collect();
        for (i, row) in a.iter_mut().enumerate() {
            if i != c && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = fp.sub(x, &fp.mul(&f, y));
                }
            }
        }
        a[c] = pivot;
    }
    Some(a.into_iter().map(|row| row[d..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let f8 = build_field(2, 1, 3).unwrap();
        assert_eq!(f8.group_order(), &BigUint::from(7u32));
        assert_eq!(
            f8.group_order_factors().distinct_primes(),
            vec![BigUint::from(7u32)]
        );
        let f5 = build_field(5, 1, 1).unwrap();
        assert_eq!(
            f5.multiplicative_order(f5.generator()).unwrap(),
            BigUint::from(4u32)
        );
        let f64 = build_field(2, 2, 3).unwrap();
        assert_eq!(f64.group_order(), &BigUint::from(63u32));
        assert_eq!(
            f64.group_order_factors().prime_powers(),
            vec![(BigUint::from(3u32), 2), (BigUint::from(7u32), 1)]
        );
    }

    #[test]
    fn mul_inv_and_frobenius_agree_with_powers() {
        for (p, e, n) in [
            (2, 1, 3),
            (3, 1, 4),
            (2, 2, 3),
            (3, 2, 2),
            (5, 1, 3),
            (7, 1, 1),
        ] {
            let ctx = build_field(p, e, n).unwrap();
            let q = ctx.q().clone();
            for a in ctx.elements(2000).unwrap() {
                assert_eq!(ctx.frobenius(&a, 1), ctx.pow(&a, &q));
                assert_eq!(ctx.frobenius(&a, n), a);
                if !ctx.is_zero(&a) {
                    assert_eq!(ctx.mul(&a, &ctx.inv(&a).unwrap()), ctx.one());
                }
            }
        }
    }

    #[test]
    fn primitive_count_and_exponents() {
        let ctx = build_field(2, 1, 4).unwrap();
        let g = ctx.generator().clone();
        for i in 1..15u64 {
            let a = ctx.pow_u64(&g, i);
            assert_eq!(ctx.is_primitive(&a), arith::gcd_u64(i, 15) == 1);
        }
        let count = ctx
            .elements(100)
            .unwrap()
            .filter(|a| ctx.is_primitive(a))
            .count();
        assert_eq!(count, 8);
    }

    #[test]
    fn subfields_embed_project_and_trace() {
        for (p, e, n) in [(2, 1, 6), (3, 1, 4), (2, 2, 4), (3, 2, 2), (2, 3, 2)] {
            let ctx = build_field(p, e, n).unwrap();
            for sub in ctx.subfields() {
                let m = sub.m;
                let size = p.pow(e * m);
                for k in 0..size.min(300) {
                    let a = ctx.subfield_element(m, k).unwrap();
                    assert_eq!(ctx.frobenius(&a, m), a);
                    assert_eq!(ctx.subfield_index(m, &a).unwrap(), Some(k));
                }
                for a in ctx.elements(5000).unwrap().take(200) {
                    let t = ctx.trace(&a, m).unwrap();
                    assert!(ctx.project(m, &t).unwrap().is_some());
                    assert_eq!(
                        ctx.relative_trace(&t, m, 1).unwrap(),
                        ctx.trace(&a, 1).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn base_field_embedding_matches_standalone() {
        let ctx = build_field(2, 2, 3).unwrap();
        let f4 = ctx.base_field().clone();
        for a in 0..4u32 {
            for b in 0..4u32 {
                let x = ctx.mul(&ctx.embed_base(a), &ctx.embed_base(b));
                assert_eq!(ctx.project_base(&x), Some(f4.mul(&a, &b)));
            }
        }
    }

    #[test]
    fn abs_trace_matches_sum() {
        let ctx = build_field(3, 2, 2).unwrap();
        for a in ctx.elements(100).unwrap() {
            let mut acc = ctx.zero();
            let mut cur = a.clone();
            for _ in 0..4 {
                acc = ctx.add(&acc, &cur);
                cur = ctx.pow_u64(&cur, 3);
            }
            assert_eq!(ctx.project(1, &acc).unwrap().unwrap()[0], ctx.abs_trace(&a));
        }
    }

    #[test]
    fn explicit_modulus() {
        // x^5 - x - 2 over F_5
        let ctx = FieldContext::with_modulus(5, 1, 5, &[3, 4, 0, 0, 0, 1]).unwrap();
        assert!(ctx.is_primitive(ctx.generator()));
        assert!(FieldContext::with_modulus(2, 1, 2, &[1, 0, 1]).is_err());
    }
}
