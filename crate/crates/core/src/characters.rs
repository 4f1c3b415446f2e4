//! Multiplicative and additive characters of small fields, Gauss sums, and
//! the character-sum indicators for freeness and prescribed trace.
//!
//! Additive characters are grouped by the reciprocal of the σ-minimal
//! polynomial: since `D o χ_δ = χ_{D(σ^{-1}) δ}`, the characters annihilated
//! by `D` and by no proper divisor are the `χ_δ` whose σ-minimal polynomial
//! is the monic reciprocal `D*`. For divisors closed under reciprocation the
//! two descriptions coincide.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::ff::{FieldContext, FieldElement};
use crate::knormal;
use crate::poly::{self, Poly};

/// A character value.
pub type ComplexValue = Complex64;

/// Largest `q^n` for which character tables are built.
pub const MAX_CHAR_FIELD: u64 = 1 << 16;

/// Tables for evaluating characters of `F_{q^n}`.
pub struct CharEvaluator {
    ctx: Arc<FieldContext>,
    size: u64,
    order: u64,
    /// Discrete log of the element with index `i` (unused at 0).
    dlog: Vec<u32>,
    /// Index of `g^i`.
    exp: Vec<u32>,
    /// Absolute trace of the element with index `i`.
    abs_trace: Vec<u32>,
    roots_n: Vec<Complex64>,
    roots_p: Vec<Complex64>,
    /// σ-minimal polynomial of each element, as an index into `ctx.xn_divisors()`.
    sigma_min: OnceLock<Vec<u32>>,
    witnesses: Mutex<HashMap<(u32, u64), u64>>,
    /// Indices of the elements of each subfield `F_{q^m}`.
    subfields: Mutex<HashMap<u32, Arc<Vec<u64>>>>,
}

fn unit_roots(k: u64) -> Vec<Complex64> {
    (0..k)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / k as f64))
        .collect()
}

impl CharEvaluator {
    pub fn new(ctx: Arc<FieldContext>) -> Result<CharEvaluator> {
        let size = ctx.check_enumeration(MAX_CHAR_FIELD)?;
        let order = size - 1;
        let mut dlog = vec![u32::MAX; size as usize];
        let mut exp = Vec::with_capacity(order as usize);
        let g = ctx.generator().clone();
        let mut cur = ctx.one();
        for i in 0..order {
            let idx = ctx.index(&cur);
            dlog[idx as usize] = i as u32;
            exp.push(idx as u32);
            cur = ctx.mul(&cur, &g);
        }
        let abs_trace = (0..size)
            .map(|i| ctx.abs_trace(&ctx.from_index(i)))
            .collect();
        let p = ctx.p();
        Ok(CharEvaluator {
            ctx,
            size,
            order,
            dlog,
            exp,
            abs_trace,
            roots_n: unit_roots(order),
            roots_p: unit_roots(p),
            sigma_min: OnceLock::new(),
            witnesses: Mutex::new(HashMap::new()),
            subfields: Mutex::new(HashMap::new()),
        })
    }

    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    /// `q^n`.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// `q^n - 1`.
    pub fn group_order(&self) -> u64 {
        self.order
    }

    fn idx(&self, w: &FieldElement) -> u64 {
        self.ctx.index(w)
    }

    /// Discrete logarithm to the base of the field generator.
    pub fn dlog(&self, w: &FieldElement) -> Option<u64> {
        let i = self.idx(w);
        (i != 0).then(|| self.dlog[i as usize] as u64)
    }

    fn mul_idx(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = (self.dlog[a as usize] as u64 + self.dlog[b as usize] as u64) % self.order;
        self.exp[s as usize] as u64
    }

    fn eta_idx(&self, d: u64, w: u64) -> Complex64 {
        let d = d % self.order;
        if w == 0 {
            return if d == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        let k = (d as u128 * self.dlog[w as usize] as u128 % self.order as u128) as usize;
        self.roots_n[k]
    }

    fn chi_idx(&self, b: u64, w: u64) -> Complex64 {
        self.roots_p[self.abs_trace[self.mul_idx(b, w) as usize] as usize]
    }

    /// `η_d(w) = exp(2πi d log_g(w) / (q^n - 1))`, extended by `η_0(0) = 1`
    /// and `η_d(0) = 0` otherwise.
    pub fn mult_char(&self, d: u64, w: &FieldElement) -> ComplexValue {
        self.eta_idx(d, self.idx(w))
    }

    /// `χ_b(w) = exp(2πi Tr_{q^n/p}(b w) / p)`.
    pub fn add_char(&self, b: &FieldElement, w: &FieldElement) -> ComplexValue {
        self.chi_idx(self.idx(b), self.idx(w))
    }

    /// `G(η_d, χ_b) = sum_{w in F_{q^n}} η_d(w) χ_b(w)` by direct summation.
    pub fn gauss_sum(&self, d: u64, b: &FieldElement) -> ComplexValue {
        let bi = self.idx(b);
        (0..self.size)
            .map(|w| self.eta_idx(d, w) * self.chi_idx(bi, w))
            .sum()
    }

    /// `ω_t(w)`; `t` must divide `q^n - 1`. Returns 0 at `w = 0`, where the
    /// multiplicative indicator is not defined.
    pub fn omega(&self, t: u64, w: &FieldElement) -> Result<ComplexValue> {
        if t == 0 || !self.order.is_multiple_of(t) {
            return Err(Error::NotADivisor {
                divisor: t.to_string(),
                value: self.order.to_string(),
            });
        }
        let wi = self.idx(w);
        if wi == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for d in arith::divisors_u64(t) {
            let mu = arith::moebius(d);
            if mu == 0 {
                continue;
            }
            let inner: Complex64 = self
                .exact_order_exponents(d)
                .map(|j| self.eta_idx(j, wi))
                .sum();
            acc += inner * (mu as f64 / arith::euler_phi(d) as f64);
        }
        Ok(acc * theta_f64(t))
    }

    /// Exponents `j` with `η_j` of exact order `d`: `j = (q^n-1)/d * u`,
    /// `gcd(u, d) = 1`.
    pub fn exact_order_exponents(&self, d: u64) -> impl Iterator<Item = u64> + '_ {
        let step = self.order / d;
        (1..=d)
            .filter(move |&u| arith::gcd_u64(u, d) == 1)
            .map(move |u| (step * u) % self.order)
    }

    fn sigma_min_table(&self) -> &[u32] {
        self.sigma_min.get_or_init(|| {
            let ctx = &*self.ctx;
            let divs = ctx.xn_divisors();
            let pos: HashMap<&Poly, u32> = divs
                .iter()
                .enumerate()
                .map(|(i, d)| (d, i as u32))
                .collect();
            (0..self.size)
                .map(|i| {
                    let m = knormal::sigma_minimal_poly(ctx, &ctx.from_index(i));
                    pos[&m]
                })
                .collect()
        })
    }

    /// Indices of the `δ` with `D o χ_δ = χ_0` and `D` minimal.
    pub fn additive_order_class(&self, d: &Poly) -> Vec<u64> {
        let target = d.reciprocal();
        let divs = self.ctx.xn_divisors();
        let Some(pos) = divs.iter().position(|x| *x == target) else {
            return Vec::new();
        };
        let table = self.sigma_min_table();
        (0..self.size)
            .filter(|&i| table[i as usize] == pos as u32)
            .collect()
    }

    /// Monic divisors of a factored divisor of `x^n - 1`, including `1`
    /// when the factorization is empty.
    fn divisors_of(&self, fac: &poly::Factorization) -> Vec<(Poly, poly::Factorization)> {
        if fac.factors.is_empty() {
            return vec![(Poly::one(self.ctx.base_field()), fac.clone())];
        }
        poly::monic_divisors_factored(fac, None)
    }

    fn check_xn_divisor(&self, t: &Poly) -> Result<poly::Factorization> {
        let xn = Poly::xn_minus_1(self.ctx.base_field(), self.ctx.n() as usize);
        if !t.is_monic() || !t.divides(&xn) {
            return Err(Error::NotADivisor {
                divisor: t.to_string(),
                value: xn.to_string(),
            });
        }
        poly::factor_poly(t)
    }

    /// `Ω_T(w)`; `T` must be a monic divisor of `x^n - 1`.
    pub fn omega_poly(&self, t: &Poly, w: &FieldElement) -> Result<ComplexValue> {
        let fac = self.check_xn_divisor(t)?;
        let wi = self.idx(w);
        let q = self.ctx.q_u64();
        let mut acc = Complex64::new(0.0, 0.0);
        for (d, dfac) in self.divisors_of(&fac) {
            let mu = poly::poly_moebius(&dfac);
            if mu == 0 {
                continue;
            }
            let phi = poly::phi_q_of(&dfac, q).to_f64().unwrap();
            let inner: Complex64 = self
                .additive_order_class(&d)
                .into_iter()
                .map(|delta| self.chi_idx(delta, wi))
                .sum();
            acc += inner * (mu as f64 / phi);
        }
        Ok(acc * big_theta_f64(&fac, q))
    }

    /// The first element (in index order) with `Tr_{q^n/q^m} = β`.
    pub fn trace_witness(&self, m: u32, beta: &FieldElement) -> Result<FieldElement> {
        let ctx = &*self.ctx;
        let key = (m, self.idx(beta));
        if let Some(&a) = self.witnesses.lock().unwrap().get(&key) {
            return Ok(ctx.from_index(a));
        }
        if ctx.project(m, beta)?.is_none() {
            return Err(Error::InvalidParameter(format!(
                "{beta} is not in F_{{q^{m}}}"
            )));
        }
        for i in 0..self.size {
            let a = ctx.from_index(i);
            if ctx.trace(&a, m)? == *beta {
                self.witnesses.lock().unwrap().insert(key, i);
                return Ok(a);
            }
        }
        Err(Error::Internal("trace map is not surjective".into()))
    }

    /// `T_{m,β}(w) = q^{-m} sum_{d in F_{q^m}} χ_d(w - α)`.
    pub fn trace_indicator(
        &self,
        m: u32,
        beta: &FieldElement,
        w: &FieldElement,
    ) -> Result<ComplexValue> {
        let ctx = &*self.ctx;
        let alpha = self.trace_witness(m, beta)?;
        let diff = self.idx(&ctx.sub(w, &alpha));
        let sub = self.subfield_indices(m)?;
        let acc: Complex64 = sub.iter().map(|&d| self.chi_idx(d, diff)).sum();
        Ok(acc / sub.len() as f64)
    }

    fn subfield_indices(&self, m: u32) -> Result<Arc<Vec<u64>>> {
        if let Some(v) = self.subfields.lock().unwrap().get(&m) {
            return Ok(v.clone());
        }
        let ctx = &*self.ctx;
        let v = (0..subfield_size(ctx, m))
            .map(|k| Ok(self.idx(&ctx.subfield_element(m, k)?)))
            .collect::<Result<Vec<u64>>>()?;
        let v = Arc::new(v);
        self.subfields.lock().unwrap().insert(m, v.clone());
        Ok(v)
    }
}

fn subfield_size(ctx: &FieldContext, m: u32) -> u64 {
    ctx.p().pow(ctx.e() * m)
}

/// `θ(t) = φ(t)/t`.
pub fn theta_f64(t: u64) -> f64 {
    arith::euler_phi(t) as f64 / t as f64
}

/// `Θ(T) = Φ_q(T)/q^{deg T}`.
pub fn big_theta_f64(fac: &poly::Factorization, q: u64) -> f64 {
    fac.factors
        .iter()
        .map(|(g, _)| 1.0 - (q as f64).powi(-(g.degree().unwrap() as i32)))
        .product()
}

/// Outcome of checking the counting identity for primitive, `f`-free
/// elements of prescribed subfield trace.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub q: u64,
    pub n: u32,
    pub m: u32,
    pub f: String,
    pub beta: String,
    /// Direct count.
    pub n_exact: u64,
    /// The count recovered from the character-sum expansion over nonzero `w`.
    pub n_from_identity: f64,
    /// The expansion with the leading term `q^n` and no trivial-character
    /// terms, which also counts `w = 0` when `β = 0` and `f = 1`.
    pub n_leading_term_form: f64,
    /// `n_exact / (θ(q^n-1) Θ(f))`.
    pub normalized: f64,
    /// `q^{n-m} - q^{n/2} W(q^n-1) W(f)`.
    pub rhs_bound: f64,
    /// Whether `normalized > rhs_bound`.
    pub bound_holds: bool,
}

/// Count the primitive, `f`-free elements `w` with `Tr_{q^n/q^m}(w) = β`
/// directly, and again through the Gauss-sum expansion.
pub fn verify_propmain_identity(
    ev: &CharEvaluator,
    m: u32,
    f: &Poly,
    beta: &FieldElement,
) -> Result<IdentityReport> {
    let ctx = ev.ctx();
    let (p, n, q) = (ctx.p(), ctx.n(), ctx.q_u64());
    if m == 0 || n % m != 0 || m == n {
        return Err(Error::Hypothesis(format!(
            "m = {m} must properly divide n = {n}"
        )));
    }
    if m != 1 && !is_power_of(m as u64, p) {
        return Err(Error::Hypothesis(format!(
            "m = {m} is neither 1 nor a power of p = {p}"
        )));
    }
    let f = f.monic();
    let fac = ev
        .check_xn_divisor(&f)
        .map_err(|e| Error::Hypothesis(e.to_string()))?;
    let x1 = Poly::linear(ctx.base_field(), 1);
    if x1.divides(&f) {
        return Err(Error::Hypothesis(format!("x - 1 divides f = {f}")));
    }
    if ctx.project(m, beta)?.is_none() {
        return Err(Error::Hypothesis(format!("{beta} is not in F_{{q^{m}}}")));
    }

    // direct count
    let mut n_exact = 0u64;
    for i in 1..ev.size {
        let w = ctx.from_index(i);
        if ctx.trace(&w, m)? == *beta && ctx.is_primitive(&w) && knormal::is_T_free(ctx, &w, &f)? {
            n_exact += 1;
        }
    }

    // character side
    let order = ev.order;
    let qm = subfield_size(ctx, m);
    let alpha = ev.trace_witness(m, beta)?;
    let alpha_i = ev.idx(&alpha);
    let cs: Vec<(u64, Complex64)> = (0..qm)
        .map(|k| {
            let c = ev.idx(&ctx.subfield_element(m, k).unwrap());
            (c, ev.chi_idx(c, alpha_i).conj())
        })
        .collect();
    // multiplicative part: (j, μ(d)/φ(d)) over squarefree d > 1
    let mut mult: Vec<(u64, f64)> = Vec::new();
    for d in arith::divisors_u64(order) {
        let mu = arith::moebius(d);
        if d == 1 || mu == 0 {
            continue;
        }
        let wgt = mu as f64 / arith::euler_phi(d) as f64;
        mult.extend(ev.exact_order_exponents(d).map(|j| (j, wgt)));
    }
    // G(η_j, χ_1) for the exponents in use
    let g1: HashMap<u64, Complex64> = mult
        .iter()
        .map(|&(j, _)| {
            let s: Complex64 = (1..ev.size)
                .map(|w| ev.eta_idx(j, w) * ev.chi_idx(1, w))
                .sum();
            (j, s)
        })
        .collect();
    let gauss = |j: u64, b: u64| -> Complex64 {
        // G(η, χ_b) = conj(η(b)) G(η, χ_1) for b != 0
        ev.eta_idx(j, b).conj() * g1[&j]
    };
    // additive part: (δ, M(D)/Φ(D)) over squarefree D | f, δ = 0 for D = 1
    let mut add: Vec<(FieldElement, f64)> = Vec::new();
    for (d, dfac) in ev.divisors_of(&fac) {
        let mu = poly::poly_moebius(&dfac);
        if mu == 0 {
            continue;
        }
        let wgt = mu as f64 / poly::phi_q_of(&dfac, q).to_f64().unwrap();
        if d.is_one() {
            add.push((ctx.zero(), wgt));
            continue;
        }
        add.extend(
            ev.additive_order_class(&d)
                .into_iter()
                .map(|i| (ctx.from_index(i), wgt)),
        );
    }

    // sum over w != 0 of η(w) χ_b(w), weighted over the η of the expansion
    let size = ev.size as f64;
    let mult_sum = |b: u64| -> Complex64 {
        // trivial η: q^n [b = 0] - 1
        let mut s = Complex64::new(if b == 0 { size - 1.0 } else { -1.0 }, 0.0);
        if b != 0 {
            for &(j, wj) in &mult {
                s += gauss(j, b) * wj;
            }
        }
        s
    };
    let mut total = Complex64::new(0.0, 0.0);
    for &(c, ac) in &cs {
        let c_el = ctx.from_index(c);
        let mut inner = Complex64::new(0.0, 0.0);
        for (delta, wd) in &add {
            inner += mult_sum(ev.idx(&ctx.add(delta, &c_el))) * *wd;
        }
        total += ac * inner;
    }
    let scale = theta_f64(order) * big_theta_f64(&fac, q);
    let n_from_identity = (total / qm as f64).re * scale;

    let w_int = 2f64.powi(ctx.group_order_factors().distinct_primes().len() as i32);
    let w_f = 2f64.powi(fac.factors.len() as i32);
    let rhs_bound = (q as f64).powi((n - m) as i32) - (q as f64).powf(n as f64 / 2.0) * w_int * w_f;
    let normalized = n_exact as f64 / scale;
    let zero_counted = f.is_one() && ctx.is_zero(beta);
    let n_leading_term_form = n_from_identity + if zero_counted { scale } else { 0.0 };
    Ok(IdentityReport {
        q,
        n,
        m,
        f: f.to_string(),
        beta: beta.to_string(),
        n_exact,
        n_from_identity,
        n_leading_term_form,
        normalized,
        rhs_bound,
        bound_holds: normalized > rhs_bound,
    })
}

fn is_power_of(mut m: u64, p: u64) -> bool {
    while m > 1 && m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::build_field;

    fn ev(p: u64, e: u32, n: u32) -> CharEvaluator {
        CharEvaluator::new(Arc::new(build_field(p, e, n).unwrap())).unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-6
    }

    #[test]
    fn character_values() {
        let e4 = ev(2, 1, 2);
        let g = e4.ctx().generator().clone();
        assert!(close(
            e4.mult_char(1, &g),
            Complex64::from_polar(1.0, 2.0 * PI / 3.0)
        ));
        assert!(close(e4.mult_char(0, &g), Complex64::new(1.0, 0.0)));
        let e9 = ev(3, 1, 2);
        let ctx = e9.ctx();
        for u in ctx.elements(9).unwrap() {
            for v in ctx.elements(9).unwrap() {
                for d in 0..8 {
                    let lhs = e9.mult_char(d, &ctx.mul(&u, &v));
                    assert!(close(lhs, e9.mult_char(d, &u) * e9.mult_char(d, &v)));
                }
                let s = e9.add_char(&ctx.one(), &ctx.add(&u, &v));
                assert!(close(
                    s,
                    e9.add_char(&ctx.one(), &u) * e9.add_char(&ctx.one(), &v)
                ));
            }
        }
    }

    #[test]
    fn gauss_sum_values() {
        let e9 = ev(3, 1, 2);
        let ctx = e9.ctx();
        assert!(close(
            e9.gauss_sum(0, &ctx.zero()),
            Complex64::new(9.0, 0.0)
        ));
        assert!(close(e9.gauss_sum(0, &ctx.one()), Complex64::new(0.0, 0.0)));
        for d in 1..8 {
            for b in ctx.elements(9).unwrap().skip(1) {
                assert!((e9.gauss_sum(d, &b).norm() - 3.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn omega_matches_freeness_on_f16() {
        let e = ev(2, 1, 4);
        let ctx = e.ctx();
        for t in [1u64, 3, 5, 15] {
            for w in ctx.elements(16).unwrap().skip(1) {
                let free = knormal::is_d_free(ctx, &w, &t.into()).unwrap();
                assert!(close(
                    e.omega(t, &w).unwrap(),
                    Complex64::new(free as u8 as f64, 0.0)
                ));
            }
        }
    }

    #[test]
    fn omega_poly_non_reciprocal_divisor() {
        // x^3 + x + 1 is not its own reciprocal
        let e = ev(2, 1, 7);
        let ctx = e.ctx();
        let t = Poly::parse(ctx.base_field(), "x^3+x+1").unwrap();
        for w in ctx.elements(128).unwrap() {
            let free = knormal::is_T_free(ctx, &w, &t).unwrap();
            let v = e.omega_poly(&t, &w).unwrap();
            assert!(close(v, Complex64::new(free as u8 as f64, 0.0)), "{w}");
        }
    }

    #[test]
    fn identity_small_instance() {
        let e = ev(3, 1, 4);
        let ctx = e.ctx();
        let f = Poly::parse(ctx.base_field(), "(x+1)(x^2+1)").unwrap();
        let r = verify_propmain_identity(&e, 1, &f, &ctx.zero()).unwrap();
        assert!((r.n_exact as f64 - r.n_from_identity).abs() < 1e-4, "{r:?}");
    }

    #[test]
    fn identity_with_f_one() {
        for (p, n, m) in [(3u64, 3u32, 1u32), (2, 4, 2), (5, 3, 1)] {
            let e = ev(p, 1, n);
            let ctx = e.ctx();
            let one = Poly::one(ctx.base_field());
            assert!(close(
                e.omega_poly(&one, &ctx.one()).unwrap(),
                Complex64::new(1.0, 0.0)
            ));
            for k in 0..p.pow(m) {
                let beta = ctx.subfield_element(m, k).unwrap();
                let r = verify_propmain_identity(&e, m, &one, &beta).unwrap();
                assert!((r.n_exact as f64 - r.n_from_identity).abs() < 1e-4, "{r:?}");
            }
        }
    }
}
