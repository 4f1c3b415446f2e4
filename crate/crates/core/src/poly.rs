//! Polynomials over `F_q`: factorization, divisors of `x^n - 1`, the
//! polynomial Euler function, and the linearized action on `F_{q^n}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::ff::{FieldContext, FieldElement};
use crate::fq::Fq;
use crate::upoly::{self, FieldOps};

/// A dense polynomial over `F_q`, lowest coefficient first.
#[derive(Clone)]
pub struct Poly {
    field: Arc<Fq>,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(field: &Arc<Fq>, coeffs: Vec<u32>) -> Poly {
        let q = field.q();
        let coeffs = coeffs.into_iter().map(|c| (c as u64 % q) as u32).collect();
        Poly {
            field: field.clone(),
            coeffs: upoly::trim(&**field, coeffs),
        }
    }

    /// Coefficients given as integers, reduced into the prime subfield.
    pub fn from_ints(field: &Arc<Fq>, coeffs: &[i64]) -> Poly {
        let v = coeffs.iter().map(|&c| field.from_int(c)).collect();
        Poly::new(field, v)
    }

    pub fn zero(field: &Arc<Fq>) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn one(field: &Arc<Fq>) -> Poly {
        Poly::new(field, vec![1])
    }

    /// `x^k`.
    pub fn x_pow(field: &Arc<Fq>, k: usize) -> Poly {
        Poly::new(field, upoly::x_pow(&**field, k))
    }

    /// `x^n - 1`.
    pub fn xn_minus_1(field: &Arc<Fq>, n: usize) -> Poly {
        let mut v = upoly::x_pow(&**field, n);
        v[0] = field.sub(&v[0], &1);
        Poly::new(field, v)
    }

    /// `x - c`.
    pub fn linear(field: &Arc<Fq>, c: u32) -> Poly {
        Poly::new(field, vec![field.neg(&c), 1])
    }

    pub fn field(&self) -> &Arc<Fq> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        upoly::degree(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        upoly::is_one(&*self.field, &self.coeffs)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn leading(&self) -> Option<u32> {
        self.coeffs.last().copied()
    }

    fn wrap(&self, coeffs: Vec<u32>) -> Poly {
        Poly {
            field: self.field.clone(),
            coeffs,
        }
    }

    fn same_field(&self, other: &Poly) {
        assert!(
            self.field.p() == other.field.p() && self.field.e() == other.field.e(),
            "polynomials over different fields"
        );
    }

    pub fn monic(&self) -> Poly {
        self.wrap(upoly::monic(&*self.field, &self.coeffs))
    }

    /// Quotient and remainder.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(d);
        if d.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (q, r) = upoly::divrem(&*self.field, &self.coeffs, &d.coeffs);
        Ok((self.wrap(q), self.wrap(r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    pub fn divides(&self, f: &Poly) -> bool {
        !self.is_zero() && f.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.same_field(other);
        self.wrap(upoly::gcd(&*self.field, &self.coeffs, &other.coeffs))
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::one(&self.field);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    pub fn derivative(&self) -> Poly {
        self.wrap(upoly::derivative(&*self.field, &self.coeffs))
    }

    pub fn is_irreducible(&self) -> bool {
        upoly::is_irreducible(&*self.field, &self.coeffs)
    }

    /// Monic reciprocal `x^deg f(1/x) / f(0)`; requires `f(0) != 0`.
    pub fn reciprocal(&self) -> Poly {
        let mut v = self.coeffs.clone();
        v.reverse();
        self.wrap(upoly::monic(&*self.field, &upoly::trim(&*self.field, v)))
    }

    pub fn eval(&self, x: u32) -> u32 {
        upoly::eval(&*self.field, &self.coeffs, &x)
    }

    /// Parse `x^4+2x+1`, `x^2-1`, `(x+1)(x^2+1)`, `(x+1)^3`. Integer
    /// coefficients live in the prime subfield; `[c0,c1,...]` writes a
    /// general element of `F_q` by its coordinates over `F_p`.
    pub fn parse(field: &Arc<Fq>, s: &str) -> Result<Poly> {
        let mut p = Parser {
            field,
            chars: s.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        };
        let r = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(Error::Parse(format!(
                "unexpected '{}' at position {} in {s:?}",
                p.chars[p.pos], p.pos
            )));
        }
        Ok(r)
    }

    fn fmt_coeff(&self, c: u32) -> String {
        if (c as u64) < self.field.p() {
            c.to_string()
        } else {
            let d = self.field.digits(c);
            let parts: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            format!("[{}]", parts.join(","))
        }
    }
}

struct Parser<'a> {
    field: &'a Arc<Fq>,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {}", self.pos))
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero(self.field);
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    false
                }
                Some('-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            if c == '*' {
                self.pos += 1;
            } else if !(c == '(' || c == 'x' || c == '[' || c.is_ascii_digit()) {
                break;
            }
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("number out of range"))
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.number()?;
            u32::try_from(e).map_err(|_| self.err("exponent out of range"))
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                e
            }
            Some('x') => {
                self.pos += 1;
                Poly::x_pow(self.field, 1)
            }
            Some('[') => {
                self.pos += 1;
                let mut digits = Vec::new();
                loop {
                    let d = self.number()?;
                    digits.push((d % self.field.p()) as u32);
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some(']') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.err("expected ',' or ']'")),
                    }
                }
                if digits.len() > self.field.e() as usize {
                    return Err(self.err("too many coordinates for a coefficient"));
                }
                Poly::new(self.field, vec![self.field.from_digits(&digits)])
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.number()?;
                Poly::new(self.field, vec![(v % self.field.p()) as u32])
            }
            _ => return Err(self.err("expected a term")),
        };
        let k = self.exponent()?;
        Ok(base.pow(k))
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field.p() == other.field.p()
            && self.field.e() == other.field.e()
            && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded order: degree first, then coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        upoly::graded_cmp(&*self.field, &self.coeffs, &other.coeffs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for i in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[i];
            if c == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('+');
            }
            let cs = self.fmt_coeff(c);
            match i {
                0 => out.push_str(&cs),
                _ => {
                    if c != 1 {
                        out.push_str(&cs);
                    }
                    out.push('x');
                    if i > 1 {
                        out.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self} over F_{})", self.field.q())
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.same_field(rhs);
        self.wrap(upoly::add(&*self.field, &self.coeffs, &rhs.coeffs))
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.same_field(rhs);
        self.wrap(upoly::sub(&*self.field, &self.coeffs, &rhs.coeffs))
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.same_field(rhs);
        self.wrap(upoly::mul(&*self.field, &self.coeffs, &rhs.coeffs))
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.wrap(upoly::trim(
            &*self.field,
            self.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        ))
    }
}

/// Factorization into monic irreducibles with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u32,
    /// Sorted in graded order.
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn field(&self) -> Option<&Arc<Fq>> {
        self.factors.first().map(|(p, _)| p.field())
    }

    /// The product of the factor powers times the unit.
    pub fn product(&self, field: &Arc<Fq>) -> Poly {
        let mut acc = Poly::new(field, vec![self.unit]);
        for (f, k) in &self.factors {
            acc = &acc * &f.pow(*k);
        }
        acc
    }

    pub fn distinct_count(&self) -> usize {
        self.factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, k)| *k == 1)
    }

    pub fn degree(&self) -> usize {
        self.factors
            .iter()
            .map(|(f, k)| f.degree().unwrap() * *k as usize)
            .sum()
    }
}

/// Complete factorization (square-free, distinct-degree, equal-degree).
pub fn factor_poly(f: &Poly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (unit, facs) = upoly::factor(&*f.field, &f.coeffs);
    Ok(Factorization {
        unit,
        factors: facs.into_iter().map(|(g, k)| (f.wrap(g), k)).collect(),
    })
}

type XnKey = (u64, u32, usize);

fn xn_cache() -> &'static Mutex<HashMap<XnKey, Factorization>> {
    static C: OnceLock<Mutex<HashMap<XnKey, Factorization>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Factorization of `x^n - 1` over `F_q`: with `n = p^b s`, `p` not dividing
/// `s`, factor `x^s - 1` and raise multiplicities to `p^b`.
pub fn factor_xn_minus_1(field: &Arc<Fq>, n: usize) -> Factorization {
    assert!(n >= 1);
    let key = (field.p(), field.e(), n);
    if let Some(f) = xn_cache().lock().unwrap().get(&key) {
        return f.clone();
    }
    let p = field.p() as usize;
    let (mut s, mut pb) = (n, 1u32);
    while s % p == 0 {
        s /= p;
        pb *= p as u32;
    }
    let base = factor_poly(&Poly::xn_minus_1(field, s)).expect("x^s - 1 is nonzero");
    let fac = Factorization {
        unit: 1,
        factors: base.factors.into_iter().map(|(g, k)| (g, k * pb)).collect(),
    };
    xn_cache().lock().unwrap().insert(key, fac.clone());
    fac
}

/// `Phi_q(f)` from a factorization: `prod (q^{dk} - q^{d(k-1)})`.
pub fn phi_q_of(fac: &Factorization, q: u64) -> BigUint {
    let qb = BigUint::from(q);
    fac.factors.iter().fold(BigUint::one(), |acc, (g, k)| {
        let d = g.degree().unwrap() as u32;
        acc * (qb.pow(d * k) - qb.pow(d * (k - 1)))
    })
}

/// The polynomial Euler function `|(F_q[x]/(f))^*|` of a monic polynomial.
pub fn phi_q(f: &Poly) -> Result<BigUint> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Err(Error::NotMonic(f.to_string()));
    }
    Ok(phi_q_of(&factor_poly(f)?, f.field.q()))
}

/// Polynomial Moebius function.
pub fn poly_moebius(fac: &Factorization) -> i32 {
    if fac.is_squarefree() {
        if fac.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

/// All monic divisors of the factored polynomial, optionally only those of
/// a given degree, in graded order.
pub fn monic_divisors(fac: &Factorization, degree_filter: Option<usize>) -> Vec<Poly> {
    monic_divisors_factored(fac, degree_filter)
        .into_iter()
        .map(|(d, _)| d)
        .collect()
}

/// Like [`monic_divisors`], each divisor paired with its own factorization.
pub fn monic_divisors_factored(
    fac: &Factorization,
    degree_filter: Option<usize>,
) -> Vec<(Poly, Factorization)> {
    let field = match fac.field() {
        Some(f) => f.clone(),
        // a unit: without a field there is no `1` to return, callers handle it
        None => return Vec::new(),
    };
    let degs: Vec<usize> = fac
        .factors
        .iter()
        .map(|(g, _)| g.degree().unwrap())
        .collect();
    let mut out = Vec::new();
    let mut exps = vec![0u32; fac.factors.len()];
    loop {
        let d: usize = exps.iter().zip(&degs).map(|(&e, &g)| e as usize * g).sum();
        if degree_filter.is_none_or(|want| want == d) {
            let mut poly = Poly::one(&field);
            let mut parts = Vec::new();
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    poly = &poly * &fac.factors[i].0.pow(e);
                    parts.push((fac.factors[i].0.clone(), e));
                }
            }
            out.push((
                poly,
                Factorization {
                    unit: 1,
                    factors: parts,
                },
            ));
        }
        // next exponent vector
        let mut i = 0;
        loop {
            if i == exps.len() {
                out.sort_by(|a, b| a.0.cmp(&b.0));
                return out;
            }
            if exps[i] < fac.factors[i].1 {
                exps[i] += 1;
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Divisors of `x^n - 1`, including `1`, in graded order.
pub fn xn_divisors(field: &Arc<Fq>, n: usize) -> Vec<Poly> {
    let fac = factor_xn_minus_1(field, n);
    let mut v = monic_divisors(&fac, None);
    if v.is_empty() {
        v.push(Poly::one(field));
    }
    v
}

/// The linearized action `f o a = sum f_i a^{q^i}`.
pub fn linearized_apply(ctx: &FieldContext, f: &Poly, a: &FieldElement) -> FieldElement {
    let mut acc = ctx.zero();
    let mut conj = a.clone();
    for (i, &c) in f.coeffs().iter().enumerate() {
        if i > 0 {
            conj = ctx.frobenius(&conj, 1);
        }
        if c != 0 {
            let t = ctx.mul(&ctx.embed_base(c), &conj);
            acc = ctx.add(&acc, &t);
        }
    }
    acc
}

/// The linearized action given the precomputed conjugates `a^{q^i}`, `i < n`
/// (exponents taken mod `n`).
pub fn linearized_apply_conj(ctx: &FieldContext, f: &Poly, conj: &[FieldElement]) -> FieldElement {
    let n = conj.len();
    let mut acc = ctx.zero();
    for (i, &c) in f.coeffs().iter().enumerate() {
        if c != 0 {
            let t = ctx.mul(&ctx.embed_base(c), &conj[i % n]);
            acc = ctx.add(&acc, &t);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, e: u32) -> Arc<Fq> {
        Fq::new(p, e).unwrap()
    }

    #[test]
    fn display_and_parse_round_trip() {
        let f3 = f(3, 1);
        let a = Poly::parse(&f3, "x^4+2x+1").unwrap();
        assert_eq!(a.to_string(), "x^4+2x+1");
        let b = Poly::parse(&f3, "(x+1)(x^2+1)").unwrap();
        assert_eq!(b, Poly::from_ints(&f3, &[1, 1, 1, 1]));
        let c = Poly::parse(&f3, "x^2-1").unwrap();
        assert_eq!(c.to_string(), "x^2+2");
        let f4 = f(2, 2);
        let d = Poly::parse(&f4, "x^2+[0,1]x+1").unwrap();
        assert_eq!(d.to_string(), "x^2+[0,1]x+1");
        assert!(Poly::parse(&f3, "x^^2").is_err());
    }

    #[test]
    fn factor_x4_minus_1_over_f3() {
        let f3 = f(3, 1);
        let fac = factor_poly(&Poly::xn_minus_1(&f3, 4)).unwrap();
        let names: Vec<String> = fac.factors.iter().map(|(g, _)| g.to_string()).collect();
        assert_eq!(names, vec!["x+1", "x+2", "x^2+1"]);
    }

    #[test]
    fn xn_minus_1_examples() {
        let f2 = f(2, 1);
        let a = factor_xn_minus_1(&f2, 4);
        assert_eq!(a.factors, vec![(Poly::parse(&f2, "x+1").unwrap(), 4)]);
        let b = factor_xn_minus_1(&f2, 3);
        assert_eq!(b.factors.len(), 2);
        let c = factor_xn_minus_1(&f(3, 1), 6);
        assert_eq!(
            c.factors.iter().map(|x| x.1).collect::<Vec<_>>(),
            vec![3, 3]
        );
    }

    #[test]
    fn phi_examples() {
        let f2 = f(2, 1);
        assert_eq!(
            phi_q(&Poly::parse(&f2, "x^2+x+1").unwrap()).unwrap(),
            BigUint::from(3u32)
        );
        assert_eq!(
            phi_q(&Poly::xn_minus_1(&f2, 3)).unwrap(),
            BigUint::from(3u32)
        );
        let f7 = f(7, 1);
        assert_eq!(
            phi_q(&Poly::parse(&f7, "x-1").unwrap()).unwrap(),
            BigUint::from(6u32)
        );
        assert!(phi_q(&Poly::from_ints(&f7, &[1, 2])).is_err());
    }

    #[test]
    fn divisor_examples() {
        let f2 = f(2, 1);
        let d = monic_divisors(&factor_xn_minus_1(&f2, 3), Some(2));
        assert_eq!(d, vec![Poly::parse(&f2, "x^2+x+1").unwrap()]);
        let f3 = f(3, 1);
        assert_eq!(monic_divisors(&factor_xn_minus_1(&f3, 4), None).len(), 8);
        assert_eq!(
            monic_divisors(&factor_xn_minus_1(&f(2, 1), 4), None).len(),
            5
        );
    }

    #[test]
    fn factors_over_extension_fields() {
        for (p, e, n) in [(2u64, 2u32, 5usize), (3, 2, 4), (2, 3, 7), (5, 2, 3)] {
            let fq = f(p, e);
            let x = Poly::xn_minus_1(&fq, n);
            let fac = factor_poly(&x).unwrap();
            assert_eq!(fac.product(&fq), x);
            assert!(fac.factors.iter().all(|(g, _)| g.is_irreducible()));
        }
    }
}
