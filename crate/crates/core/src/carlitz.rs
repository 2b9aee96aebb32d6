//! The Carlitz module: `C_θ = θ + τ`, factorials, exponential and logarithm.

use crate::error::{Error, Result};
use crate::field::{enumerate_monic, Field};
use crate::laurent::{div_ceil, precision_string, LaurentSeries};
use crate::poly::Poly;
use crate::special::pi_bar;
use crate::tate::{expand_inverse_monic, TateElement};

/// `d_n`, the product of all monic polynomials of degree `n`.
pub fn factorial_d(field: &'static Field, n: u32) -> LaurentSeries {
    let mut d = LaurentSeries::one(field);
    let q = field.q() as i64;
    for i in 1..=n {
        // d_i = (θ^{q^i} - θ)·d_{i-1}^q
        let bracket = LaurentSeries::theta_pow(field, q.pow(i)).sub(&LaurentSeries::theta_pow(field, 1));
        d = bracket.mul(&d.tau());
    }
    d
}

/// `d_n` by multiplying out every monic polynomial of degree `n`.
pub fn factorial_d_direct(field: &'static Field, n: u32) -> LaurentSeries {
    enumerate_monic(field, n as i64)
        .expect("nonnegative degree")
        .fold(LaurentSeries::one(field), |acc, a| acc.mul(&LaurentSeries::from_theta_poly(field, &a)))
}

/// `l_i = (θ - θ^q)(θ - θ^{q²})⋯(θ - θ^{q^i})`.
pub fn log_denominator(field: &'static Field, i: u32) -> LaurentSeries {
    let q = field.q() as i64;
    (1..=i).fold(LaurentSeries::one(field), |acc, j| {
        acc.mul(&LaurentSeries::theta_pow(field, 1).sub(&LaurentSeries::theta_pow(field, q.pow(j))))
    })
}

/// `Σ b_i τ^i` with Tate-algebra coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewPolynomial {
    coeffs: Vec<TateElement>,
}

impl SkewPolynomial {
    pub fn new(coeffs: Vec<TateElement>) -> Self {
        SkewPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[TateElement] {
        &self.coeffs
    }

    /// `C_θ = θ + τ`.
    pub fn carlitz_theta(field: &'static Field, s: usize) -> Self {
        let theta = TateElement::from_series(s, LaurentSeries::theta_pow(field, 1));
        SkewPolynomial { coeffs: vec![theta, TateElement::one(field, s)] }
    }

    /// Composition `self ∘ other`, using `τ·b = τ(b)·τ`.
    pub fn compose(&self, other: &Self) -> Self {
        let Some(first) = self.coeffs.first().or(other.coeffs.first()) else {
            return SkewPolynomial { coeffs: vec![] };
        };
        let (f, s) = (first.field(), first.s());
        let len = (self.coeffs.len() + other.coeffs.len()).saturating_sub(1);
        let mut out = vec![TateElement::zero(f, s); len];
        for (i, b) in self.coeffs.iter().enumerate() {
            for (j, c) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&b.mul(&c.tau_pow(i as u32)));
            }
        }
        SkewPolynomial { coeffs: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        SkewPolynomial { coeffs }
    }

    /// `C_a` for `a` a polynomial in `θ` with `𝔽_q[t]` coefficients.
    pub fn carlitz(a: &Poly, s: usize) -> Result<Self> {
        let f = a.field();
        let c_theta = Self::carlitz_theta(f, s);
        let mut power = SkewPolynomial { coeffs: vec![TateElement::one(f, s)] };
        let mut acc = SkewPolynomial { coeffs: vec![] };
        for k in 0..=a.theta_degree().unwrap_or(0) {
            let ak = a.theta_coeff(k);
            if !ak.is_zero() {
                let ak = TateElement::from_poly(&ak, s)?;
                let term = SkewPolynomial { coeffs: power.coeffs.iter().map(|b| ak.mul(b)).collect() };
                acc = acc.add(&term);
            }
            power = c_theta.compose(&power);
        }
        Ok(acc)
    }

    pub fn evaluate(&self, x: &TateElement) -> TateElement {
        let mut acc = TateElement::zero(x.field(), x.s());
        for (i, b) in self.coeffs.iter().enumerate() {
            acc = acc.add(&b.mul(&x.tau_pow(i as u32)));
        }
        acc
    }
}

/// `C_a(f)`.
pub fn carlitz_action(a: &Poly, f: &TateElement) -> Result<TateElement> {
    Ok(SkewPolynomial::carlitz(a, f.s().max(a.t_vars_used()))?.evaluate(f))
}

fn insufficient(f: &TateElement, n: i64) -> Error {
    let den = f.field().lattice_den();
    Error::InsufficientPrecision {
        required: precision_string(Some(n), den),
        available: precision_string(f.precision(), den),
    }
}

/// Number of exponential terms used for input valuation `v` and target `n`.
pub fn exp_term_count(field: &Field, v: i64, n: i64) -> u32 {
    let q = field.q() as i64;
    let den = field.lattice_den();
    let mut i = 0u32;
    loop {
        let shifted = v + i as i64 * den;
        if shifted > 0 && q.pow(i) * shifted >= n {
            return i;
        }
        i += 1;
    }
}

/// `exp_C(f) = Σ d_i^{-1} τ^i(f)`, exact below lattice index `n`.
///
/// Term `i` has valuation `q^i (v + i(q-1))`; summation stops at the first
/// `i` with `v + i(q-1) > 0` whose bound reaches `n`. The input must be
/// known below `n`.
pub fn exp_carlitz(f: &TateElement, n: i64) -> Result<TateElement> {
    let field = f.field();
    if f.is_exact_zero() {
        return Ok(TateElement::zero(field, f.s()));
    }
    if f.precision().is_some_and(|p| p < n) {
        return Err(insufficient(f, n));
    }
    let Some(v) = f.valuation() else {
        return Ok(TateElement::zero_at(field, f.s(), n));
    };
    let q = field.q() as i64;
    let den = field.lattice_den();
    let mut acc = TateElement::zero_at(field, f.s(), n);
    for i in 0..exp_term_count(field, v, n) {
        let qi = q.pow(i);
        if qi * (v + i as i64 * den) >= n {
            continue;
        }
        let fi = f.truncate(div_ceil(n - i as i64 * qi * den, qi)).tau_pow(i);
        let dinv = factorial_d(field, i).invert_to(n - qi * v)?;
        acc = acc.add(&fi.mul_capped(&TateElement::from_series(f.s(), dinv), Some(n)));
    }
    Ok(acc)
}

/// `exp_C` on a series.
pub fn exp_series(z: &LaurentSeries, n: i64) -> Result<LaurentSeries> {
    Ok(exp_carlitz(&TateElement::from_series(0, z.clone()), n)?.constant_term())
}

/// `log_C(g) = Σ τ^i(g)/l_i` on the disk `v_∞(g) > -q/(q-1)`, exact below `n`.
pub fn log_carlitz(g: &TateElement, n: i64) -> Result<TateElement> {
    let field = g.field();
    if g.is_exact_zero() {
        return Ok(TateElement::zero(field, g.s()));
    }
    if g.precision().is_some_and(|p| p < n) {
        return Err(insufficient(g, n));
    }
    let Some(v) = g.valuation() else {
        return Ok(TateElement::zero_at(field, g.s(), n));
    };
    let q = field.q() as i64;
    if v <= -q {
        return Err(Error::OutsideLogDomain);
    }
    let mut acc = TateElement::zero_at(field, g.s(), n);
    let mut i = 0u32;
    loop {
        let qi = q.pow(i);
        let lval = qi * q - q;
        if qi * v + lval >= n {
            break;
        }
        let gi = g.truncate(div_ceil(n - lval, qi)).tau_pow(i);
        let linv = log_denominator(field, i).invert_to(n - qi * v)?;
        acc = acc.add(&gi.mul_capped(&TateElement::from_series(g.s(), linv), Some(n)));
        i += 1;
    }
    Ok(acc)
}

pub fn log_series(z: &LaurentSeries, n: i64) -> Result<LaurentSeries> {
    Ok(log_carlitz(&TateElement::from_series(0, z.clone()), n)?.constant_term())
}

/// `exp_C(π̃·θ^j/a)` for `a` monic in `θ` and `0 ≤ j < deg_θ a`.
pub fn torsion_point(a: &Poly, j: u32, s: usize, n: i64) -> Result<TateElement> {
    let field = a.field();
    let d = a.theta_degree().ok_or(Error::NotMonic)?;
    if !a.is_monic_in_theta() {
        return Err(Error::NotMonic);
    }
    if j >= d {
        return Err(Error::IndexOutOfRange { index: j as i64, bound: d as i64 });
    }
    let q = field.q() as i64;
    let den = field.lattice_den();
    let ainv = expand_inverse_monic(a, s, n + q + j as i64 * den)?;
    let pi = pi_bar(field, n + q)?;
    let x = TateElement::from_series(s, pi.mul(&LaurentSeries::theta_pow(field, j as i64))).mul_capped(&ainv, Some(n));
    exp_carlitz(&x, n)
}

/// `z·∏ (1 - (z/(π̃a))^{q-1})` over monic `a` with `deg a ≤ d_max`.
pub fn weierstrass_partial_product(z: &LaurentSeries, d_max: u32, n: i64) -> Result<LaurentSeries> {
    let field = z.field();
    let q = field.q() as u64;
    let vz = z.valuation().ok_or(Error::ZeroDivisor { precision: precision_string(z.precision(), field.lattice_den()) })?;
    let pi = pi_bar(field, n + 2 * q as i64)?;
    let pi_inv = pi.invert()?;
    let mut acc = z.truncate(n);
    for d in 0..=d_max {
        for a in enumerate_monic(field, d as i64)? {
            let ainv = LaurentSeries::from_theta_poly(field, &a).invert_to(n)?;
            let x = z.mul_capped(&pi_inv, Some(n)).mul_capped(&ainv, Some(n));
            let factor = LaurentSeries::one(field).sub(&x.pow_capped(q - 1, n - vz));
            acc = acc.mul_capped(&factor, Some(n));
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fe;

    fn f3() -> &'static Field {
        Field::get(3, 1).unwrap()
    }

    #[test]
    fn factorials() {
        let f = f3();
        assert_eq!(factorial_d(f, 0), LaurentSeries::one(f));
        assert_eq!(factorial_d(f, 1).to_string(), "θ^3 + 2θ");
        for q in [2, 3] {
            let f = Field::for_q(q).unwrap();
            for n in 0..=2 {
                assert_eq!(factorial_d(f, n), factorial_d_direct(f, n));
            }
            for n in 0..=4u32 {
                let v = factorial_d(f, n).valuation().unwrap();
                assert_eq!(v, -(n as i64) * (q as i64).pow(n) * f.lattice_den());
            }
        }
    }

    #[test]
    fn carlitz_theta_on_worked_example() {
        for q in [2, 3, 4, 5] {
            let f = Field::for_q(q).unwrap();
            let x = TateElement::from_poly(&Poly::parse(f, "t1 - θ").unwrap(), 1).unwrap();
            let got = carlitz_action(&Poly::theta(f), &x).unwrap();
            let want = Poly::parse(f, "t1*θ + t1 - θ^2").unwrap().sub(&Poly::theta(f).pow(q));
            assert_eq!(got, TateElement::from_poly(&want, 1).unwrap());
        }
    }

    #[test]
    fn action_composes() {
        let f = f3();
        let x = TateElement::from_poly(&Poly::parse(f, "t1*θ^2 + 1").unwrap(), 1).unwrap();
        let th = Poly::theta(f);
        let twice = carlitz_action(&th, &carlitz_action(&th, &x).unwrap()).unwrap();
        assert_eq!(carlitz_action(&th.pow(2), &x).unwrap(), twice);
        assert_eq!(carlitz_action(&Poly::one(f), &x).unwrap(), x);
    }

    #[test]
    fn exp_two_terms() {
        let f = f3();
        let z = LaurentSeries::theta_pow(f, -2);
        let e = exp_series(&z, 22).unwrap();
        // θ^{-2} + θ^{-6}/(θ^3 - θ) = θ^{-2} + θ^{-9} + θ^{-11} + …
        let want = LaurentSeries::from_terms(f, &[(4, Fe(1)), (18, Fe(1)), (22, Fe(1))], Some(22));
        assert_eq!(e, want.truncate(22));
        assert!(exp_series(&LaurentSeries::zero(f), 10).unwrap().is_exact_zero());
        assert!(matches!(exp_series(&z.truncate(4), 10), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn log_inverts_exp() {
        let f = f3();
        for z in [LaurentSeries::theta_pow(f, -1), LaurentSeries::one(f), LaurentSeries::monomial(f, Fe(2), 1)] {
            let e = exp_series(&z, 30).unwrap();
            assert!(log_series(&e, 30).unwrap().eq_mod(&z, 30));
            let l = log_series(&z, 30).unwrap();
            assert!(exp_series(&l, 30).unwrap().eq_mod(&z, 30));
        }
        assert!(matches!(log_series(&LaurentSeries::theta_pow(f, 2), 10), Err(Error::OutsideLogDomain)));
    }

    #[test]
    fn weierstrass_product_converges() {
        let f = f3();
        let z = LaurentSeries::theta_pow(f, -1);
        let n = 60;
        let e = exp_series(&z, n).unwrap();
        let mut last = i64::MIN;
        for d in 0..3 {
            let w = weierstrass_partial_product(&z, d, n).unwrap();
            let gap = e.first_discrepancy(&w, n).unwrap_or(n);
            assert!(gap > last || gap == n, "D={d}: {gap} ≤ {last}");
            last = gap;
        }
        assert_eq!(last, n);
    }
}
