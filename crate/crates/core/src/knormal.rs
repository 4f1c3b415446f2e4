//! k-normal elements: σ-minimal polynomials, the two classifiers, freeness
//! predicates and the exact count `N_k`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{FieldContext, FieldElement};
use crate::fq::Fq;
use crate::poly::{self, Poly};
use crate::upoly;

/// Classification of a single element.
#[derive(Clone, Debug)]
pub struct KNormalityReport {
    pub element: FieldElement,
    pub sigma_min_poly: Poly,
    pub k: u32,
    pub is_primitive: bool,
    /// Multiplicative order; `None` for zero.
    pub order: Option<BigUint>,
}

/// Serializable view of a [`KNormalityReport`].
#[derive(Clone, Debug, Serialize)]
pub struct KNormalityRecord {
    pub element: String,
    pub sigma_min_poly: String,
    pub k: u32,
    pub is_primitive: bool,
    pub order: Option<String>,
}

impl From<&KNormalityReport> for KNormalityRecord {
    fn from(r: &KNormalityReport) -> Self {
        KNormalityRecord {
            element: r.element.to_string(),
            sigma_min_poly: r.sigma_min_poly.to_string(),
            k: r.k,
            is_primitive: r.is_primitive,
            order: r.order.as_ref().map(|o| o.to_string()),
        }
    }
}

/// The monic divisor `m` of `x^n - 1` of least degree with `m o a = 0`.
pub fn sigma_minimal_poly(ctx: &FieldContext, a: &FieldElement) -> Poly {
    let conj = ctx.conjugates(a);
    sigma_minimal_poly_conj(ctx, &conj)
}

/// [`sigma_minimal_poly`] from precomputed conjugates `a^{q^i}`, `i < n`.
pub fn sigma_minimal_poly_conj(ctx: &FieldContext, conj: &[FieldElement]) -> Poly {
    for h in ctx.xn_divisors() {
        if ctx.is_zero(&poly::linearized_apply_conj(ctx, h, conj)) {
            return h.clone();
        }
    }
    unreachable!("x^n - 1 annihilates every element")
}

/// `n - deg m_{σ,a}`.
pub fn k_normality(ctx: &FieldContext, a: &FieldElement) -> u32 {
    let m = sigma_minimal_poly(ctx, a);
    ctx.n() - m.degree().unwrap() as u32
}

/// Degree of `gcd(x^n - 1, g_a)` over `F_{q^n}[x]`, where
/// `g_a = sum a^{q^i} x^{n-1-i}`.
pub fn k_normality_gcd(ctx: &FieldContext, a: &FieldElement) -> u32 {
    let n = ctx.n() as usize;
    let conj = ctx.conjugates(a);
    let g: Vec<FieldElement> = (0..n).map(|j| conj[n - 1 - j].clone()).collect();
    let g = upoly::trim(ctx, g);
    let mut xn = vec![ctx.zero(); n + 1];
    xn[0] = ctx.neg(&ctx.one());
    xn[n] = ctx.one();
    let d = upoly::gcd(ctx, &xn, &g);
    upoly::degree(&d).unwrap_or(0) as u32
}

/// Full classification of one element.
pub fn classify(ctx: &FieldContext, a: &FieldElement) -> KNormalityReport {
    let m = sigma_minimal_poly(ctx, a);
    let k = ctx.n() - m.degree().unwrap() as u32;
    let order = ctx.multiplicative_order(a).ok();
    KNormalityReport {
        element: a.clone(),
        sigma_min_poly: m,
        k,
        is_primitive: order.as_ref() == Some(ctx.group_order()),
        order,
    }
}

/// Whether a nonzero `a` is `d`-free: `gcd(d, (q^n - 1)/ord(a)) = 1`.
pub fn is_d_free(ctx: &FieldContext, a: &FieldElement, d: &BigUint) -> Result<bool> {
    let n = ctx.group_order();
    if d.is_zero() || !(n % d).is_zero() {
        return Err(Error::NotADivisor {
            divisor: d.to_string(),
            value: n.to_string(),
        });
    }
    let ord = ctx.multiplicative_order(a)?;
    Ok(d.gcd(&(n / ord)).is_one())
}

/// Whether `a` is `T`-free: `gcd(T, (x^n - 1)/m_{σ,a}) = 1`.
#[allow(non_snake_case)]
pub fn is_T_free(ctx: &FieldContext, a: &FieldElement, t: &Poly) -> Result<bool> {
    let xn = Poly::xn_minus_1(ctx.base_field(), ctx.n() as usize);
    if !t.is_monic() || !t.divides(&xn) {
        return Err(Error::NotADivisor {
            divisor: t.to_string(),
            value: xn.to_string(),
        });
    }
    let m = sigma_minimal_poly(ctx, a);
    let (cof, _) = xn.divrem(&m)?;
    Ok(t.gcd(&cof).is_one())
}

/// `N_k = sum_{h | x^n - 1, deg h = n - k} Phi_q(h)`.
pub fn count_k_normal(q: u64, n: u32, k: u32) -> Result<BigUint> {
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
    }
    let (p, e) = crate::arith::prime_power_decompose(q).ok_or(Error::NotPrimePower(q))?;
    let f = Fq::new(p, e)?;
    let fac = poly::factor_xn_minus_1(&f, n as usize);
    let total = poly::monic_divisors_factored(&fac, Some((n - k) as usize))
        .iter()
        .fold(BigUint::zero(), |acc, (_, hf)| acc + poly::phi_q_of(hf, q));
    Ok(total)
}

/// Brute-force histogram of `k` over all of `F_{q^n}`: entry `k` counts the
/// `k`-normal elements.
pub fn k_histogram(ctx: &FieldContext, limit: u64) -> Result<Vec<u64>> {
    let size = ctx.check_enumeration(limit)?;
    let n = ctx.n() as usize;
    let hist = (0..size)
        .into_par_iter()
        .fold(
            || vec![0u64; n + 1],
            |mut h, i| {
                h[k_normality(ctx, &ctx.from_index(i)) as usize] += 1;
                h
            },
        )
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::build_field;

    #[test]
    fn spec_examples() {
        let f8 = build_field(2, 1, 3).unwrap();
        assert_eq!(k_normality_gcd(&f8, &f8.one()), 2);
        assert_eq!(k_normality(&f8, &f8.one()), 2);
        assert_eq!(k_normality(&f8, &f8.zero()), 3);
        assert_eq!(k_normality_gcd(&f8, &f8.zero()), 3);
        assert!(sigma_minimal_poly(&f8, &f8.zero()).is_one());

        let f81 = build_field(3, 1, 4).unwrap();
        let two = f81.from_prime(2);
        assert_eq!(sigma_minimal_poly(&f81, &two).to_string(), "x+2");

        assert_eq!(count_k_normal(2, 3, 1).unwrap(), BigUint::from(3u32));
        assert_eq!(count_k_normal(2, 3, 0).unwrap(), BigUint::from(3u32));
        assert_eq!(count_k_normal(7, 4, 4).unwrap(), BigUint::one());
    }

    #[test]
    fn remark_quintic_root_is_3_normal() {
        let ctx = crate::ff::FieldContext::with_modulus(5, 1, 5, &[3, 4, 0, 0, 0, 1]).unwrap();
        let alpha = ctx.z();
        let m = sigma_minimal_poly(&ctx, &alpha);
        assert_eq!(m, Poly::parse(ctx.base_field(), "(x-1)^2").unwrap());
        assert_eq!(k_normality_gcd(&ctx, &alpha), 3);
    }

    #[test]
    fn f4_normal_elements() {
        let ctx = build_field(2, 1, 2).unwrap();
        let ks: Vec<u32> = ctx
            .elements(4)
            .unwrap()
            .map(|a| k_normality(&ctx, &a))
            .collect();
        assert_eq!(ks, vec![2, 1, 0, 0]);
    }

    #[test]
    fn freeness() {
        let ctx = build_field(2, 1, 4).unwrap();
        let g = ctx.generator().clone();
        let a3 = ctx.pow_u64(&g, 5); // order 3
        assert!(!is_d_free(&ctx, &a3, &BigUint::from(5u32)).unwrap());
        assert!(is_d_free(&ctx, &a3, &BigUint::from(3u32)).unwrap());
        assert!(is_d_free(&ctx, &a3, &BigUint::one()).unwrap());
        assert!(is_d_free(&ctx, &a3, &BigUint::from(7u32)).is_err());
        let xn = Poly::xn_minus_1(ctx.base_field(), 4);
        for a in ctx.elements(16).unwrap() {
            let normal = k_normality(&ctx, &a) == 0;
            assert_eq!(is_T_free(&ctx, &a, &xn).unwrap(), normal);
            assert!(is_T_free(&ctx, &a, &Poly::one(ctx.base_field())).unwrap());
        }
    }

    #[test]
    fn histogram_matches_counts() {
        for (p, e, n) in [(2, 1, 4), (3, 1, 3), (2, 2, 3), (5, 1, 2)] {
            let ctx = build_field(p, e, n).unwrap();
            let h = k_histogram(&ctx, 1 << 12).unwrap();
            let q = p.pow(e);
            for k in 0..=n {
                assert_eq!(
                    BigUint::from(h[k as usize]),
                    count_k_normal(q, n, k).unwrap()
                );
            }
        }
    }
}
