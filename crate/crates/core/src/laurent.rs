//! Truncated Laurent series in `θ^{-1}` on the lattice `(1/(q-1))·ℤ`.
//!
//! All exponents and precisions are stored as integers in lattice units:
//! the term `c·θ^{-k/(q-1)}` sits at lattice index `k`, so `θ^n` is at
//! `-n·(q-1)`. A series with precision `N` knows every coefficient at
//! indices `< N`; `None` means the series is exact (finitely supported).
//! The empty series with finite precision is the "zero at working
//! precision" state and is kept distinct from the exact zero.
//!
//! Coefficients are stored densely from the first nonzero term.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::conv::convolve;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::poly::RationalFunction;

/// Precision in lattice units; `None` is `+∞`.
pub type Precision = Option<i64>;

pub(crate) fn pmin(a: Precision, b: Precision) -> Precision {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

pub(crate) fn padd(a: Precision, b: i64) -> Precision {
    a.map(|x| x + b)
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn div_ceil(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// Reduced fraction string for a lattice value, e.g. `-3/2`.
pub fn lattice_fraction(k: i64, den: i64) -> String {
    let g = gcd(k, den).max(1);
    let (n, d) = (k / g, den / g);
    if d == 1 {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

pub fn precision_string(p: Precision, den: i64) -> String {
    match p {
        None => "inf".to_string(),
        Some(k) => lattice_fraction(k, den),
    }
}

/// Parses `a`, `a/b` or `inf` into lattice units.
pub fn parse_lattice(s: &str, den: i64) -> Result<Precision> {
    let s = s.trim();
    if s == "inf" {
        return Ok(None);
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().map_err(|_| Error::Parse(format!("bad fraction `{s}`")))?;
    let d: i64 = d.parse().map_err(|_| Error::Parse(format!("bad fraction `{s}`")))?;
    if d <= 0 || (n * den) % d != 0 {
        return Err(Error::Parse(format!("`{s}` is not on the lattice (1/{den})ℤ")));
    }
    Ok(Some(n * den / d))
}

#[derive(Clone)]
pub struct LaurentSeries {
    field: &'static Field,
    start: i64,
    coeffs: Vec<Fe>,
    precision: Precision,
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field)
            && self.start == other.start
            && self.coeffs == other.coeffs
            && self.precision == other.precision
    }
}

impl Eq for LaurentSeries {}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl LaurentSeries {
    pub(crate) fn from_dense(field: &'static Field, start: i64, coeffs: Vec<Fe>, precision: Precision) -> Self {
        let mut s = LaurentSeries { field, start, coeffs, precision };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if let Some(n) = self.precision {
            let keep = (n - self.start).clamp(0, self.coeffs.len() as i64) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.start = 0;
        }
    }

    pub fn zero(field: &'static Field) -> Self {
        LaurentSeries { field, start: 0, coeffs: vec![], precision: None }
    }

    /// Zero known only below lattice index `n`.
    pub fn zero_at(field: &'static Field, n: i64) -> Self {
        LaurentSeries { field, start: 0, coeffs: vec![], precision: Some(n) }
    }

    pub fn one(field: &'static Field) -> Self {
        Self::constant(field, Fe::ONE)
    }

    pub fn constant(field: &'static Field, c: Fe) -> Self {
        Self::monomial(field, c, 0)
    }

    /// The exact term `c·θ^{-k/(q-1)}`.
    pub fn monomial(field: &'static Field, c: Fe, k: i64) -> Self {
        Self::from_dense(field, k, vec![c], None)
    }

    /// `θ^n` for an integer `n`.
    pub fn theta_pow(field: &'static Field, n: i64) -> Self {
        Self::monomial(field, Fe::ONE, -n * field.lattice_den())
    }

    /// Exact series of a polynomial in `θ`, coefficients low to high.
    pub fn from_theta_poly(field: &'static Field, coeffs: &[Fe]) -> Self {
        let den = field.lattice_den();
        let d = coeffs.len() as i64 - 1;
        if d < 0 {
            return Self::zero(field);
        }
        let mut dense = vec![Fe::ZERO; (d * den + 1) as usize];
        for (i, &c) in coeffs.iter().enumerate() {
            dense[((d - i as i64) * den) as usize] = c;
        }
        Self::from_dense(field, -d * den, dense, None)
    }

    /// Builds a series from `(lattice index, coefficient)` pairs.
    pub fn from_terms(field: &'static Field, terms: &[(i64, Fe)], precision: Precision) -> Self {
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return LaurentSeries { field, start: 0, coeffs: vec![], precision };
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut dense = vec![Fe::ZERO; (hi - lo + 1) as usize];
        for &(k, c) in terms {
            let slot = &mut dense[(k - lo) as usize];
            *slot = field.add(*slot, c);
        }
        Self::from_dense(field, lo, dense, precision)
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn lattice_den(&self) -> i64 {
        self.field.lattice_den()
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// `v_∞` in lattice units, `None` when no term is known to be nonzero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    /// Valuation, or the precision for a series indistinguishable from 0.
    pub(crate) fn valuation_or_precision(&self) -> Precision {
        self.valuation().or(self.precision)
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.precision.is_none()
    }

    /// True when no coefficient below the precision is nonzero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn coeff(&self, k: i64) -> Fe {
        let i = k - self.start;
        if i < 0 || i >= self.coeffs.len() as i64 {
            Fe::ZERO
        } else {
            self.coeffs[i as usize]
        }
    }

    /// Nonzero terms `(lattice index, coefficient)` in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Fe)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, &c)| (self.start + i as i64, c))
    }

    fn same_field(&self, other: &Self) {
        assert!(std::ptr::eq(self.field, other.field), "{}", Error::FieldMismatch);
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        let precision = pmin(self.precision, other.precision);
        if self.coeffs.is_empty() && other.coeffs.is_empty() {
            return LaurentSeries { field: self.field, start: 0, coeffs: vec![], precision };
        }
        let lo = if self.coeffs.is_empty() {
            other.start
        } else if other.coeffs.is_empty() {
            self.start
        } else {
            self.start.min(other.start)
        };
        let hi = (self.start + self.coeffs.len() as i64).max(other.start + other.coeffs.len() as i64);
        let hi = match precision {
            Some(n) => hi.min(n),
            None => hi,
        };
        if hi <= lo {
            return LaurentSeries { field: self.field, start: 0, coeffs: vec![], precision };
        }
        let f = self.field;
        let dense = (lo..hi).map(|k| f.add(self.coeff(k), other.coeff(k))).collect();
        Self::from_dense(f, lo, dense, precision)
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        LaurentSeries {
            field: f,
            start: self.start,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            precision: self.precision,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fe) -> Self {
        let f = self.field;
        Self::from_dense(f, self.start, self.coeffs.iter().map(|&x| f.mul(c, x)).collect(), self.precision)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_capped(other, None)
    }

    /// Product with output precision additionally capped at `cap`.
    pub fn mul_capped(&self, other: &Self, cap: Precision) -> Self {
        self.same_field(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(self.field);
        }
        let va = self.valuation_or_precision().unwrap();
        let vb = other.valuation_or_precision().unwrap();
        let precision = pmin(pmin(padd(self.precision, vb), padd(other.precision, va)), cap);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return LaurentSeries { field: self.field, start: 0, coeffs: vec![], precision };
        }
        let start = self.start + other.start;
        let mut len = (self.coeffs.len() + other.coeffs.len() - 1) as i64;
        if let Some(n) = precision {
            len = len.min(n - start).max(0);
        }
        let dense = convolve(self.field, &self.coeffs, &other.coeffs, len as usize);
        Self::from_dense(self.field, start, dense, precision)
    }

    /// Inverse with the natural precision `N - 2v`.
    pub fn invert(&self) -> Result<Self> {
        match self.precision {
            None if self.coeffs.len() > 1 => Err(Error::UnboundedPrecision),
            None => self.invert_to(0),
            Some(n) => {
                let v = self.valuation().ok_or_else(|| self.zero_divisor())?;
                self.invert_to(n - 2 * v)
            }
        }
    }

    fn zero_divisor(&self) -> Error {
        Error::ZeroDivisor { precision: precision_string(self.precision, self.lattice_den()) }
    }

    /// Inverse known below `min(N - 2v, cap)`; exact for exact monomials.
    pub fn invert_to(&self, cap: i64) -> Result<Self> {
        let v = self.valuation().ok_or_else(|| self.zero_divisor())?;
        let f = self.field;
        let c_inv = f.inv(self.coeffs[0]).unwrap();
        if self.precision.is_none() && self.coeffs.len() == 1 {
            return Ok(Self::monomial(f, c_inv, -v));
        }
        let precision = pmin(padd(self.precision, -2 * v), Some(cap)).unwrap();
        let count = precision + v;
        if count <= 0 {
            return Ok(Self::zero_at(f, precision));
        }
        let count = count as usize;
        let neg_c_inv = f.neg(c_inv);
        let a = &self.coeffs;
        let mut b = Vec::with_capacity(count);
        b.push(c_inv);
        for k in 1..count {
            let mut s = Fe::ZERO;
            for i in 1..=k.min(a.len() - 1) {
                if !a[i].is_zero() {
                    s = f.add(s, f.mul(a[i], b[k - i]));
                }
            }
            b.push(f.mul(neg_c_inv, s));
        }
        Ok(Self::from_dense(f, -v, b, Some(precision)))
    }

    /// `self / other` with sound precision, capped at `cap`.
    pub fn div_capped(&self, other: &Self, cap: i64) -> Result<Self> {
        let va = self.valuation_or_precision().unwrap_or(0);
        let inv = other.invert_to(cap - va)?;
        Ok(self.mul_capped(&inv, Some(cap)))
    }

    /// `μ^m`: exponents and precision scaled by `p^m`, coefficients by Frobenius.
    pub fn mu(&self, m: i32) -> Result<Self> {
        let f = self.field;
        let p = f.p() as i64;
        if m >= 0 {
            let factor = p.pow(m as u32);
            if self.coeffs.is_empty() {
                return Ok(LaurentSeries { field: f, start: 0, coeffs: vec![], precision: padd(self.precision.map(|n| n * factor), 0) });
            }
            let mut dense = vec![Fe::ZERO; (self.coeffs.len() - 1) * factor as usize + 1];
            for (i, &c) in self.coeffs.iter().enumerate() {
                dense[i * factor as usize] = f.frobenius(c, m);
            }
            Ok(Self::from_dense(f, self.start * factor, dense, self.precision.map(|n| n * factor)))
        } else {
            let factor = p.pow(m.unsigned_abs());
            let mut terms = Vec::new();
            for (k, c) in self.terms() {
                if k % factor != 0 {
                    return Err(Error::NotInMuImage(m.unsigned_abs()));
                }
                terms.push((k / factor, f.frobenius(c, m)));
            }
            Ok(Self::from_terms(f, &terms, self.precision.map(|n| div_ceil(n, factor))))
        }
    }

    /// `τ = μ^e`.
    pub fn tau(&self) -> Self {
        self.mu(self.field.e() as i32).expect("positive twists always succeed")
    }

    pub fn tau_pow(&self, i: u32) -> Self {
        self.mu((self.field.e() * i) as i32).expect("positive twists always succeed")
    }

    /// Multiplication by `θ^{-k/(q-1)}`.
    pub fn shift(&self, k: i64) -> Self {
        if self.coeffs.is_empty() {
            return LaurentSeries { precision: padd(self.precision, k), ..self.clone() };
        }
        LaurentSeries {
            field: self.field,
            start: self.start + k,
            coeffs: self.coeffs.clone(),
            precision: padd(self.precision, k),
        }
    }

    /// Re-declares the precision; only for values whose error bound is
    /// established by the caller.
    pub(crate) fn with_precision(&self, p: Precision) -> Self {
        Self::from_dense(self.field, self.start, self.coeffs.clone(), p)
    }

    /// Forgets every term at lattice index `≥ n`.
    pub fn truncate(&self, n: i64) -> Self {
        let mut s = self.clone();
        s.precision = pmin(s.precision, Some(n));
        s.normalize();
        s
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Self::one(self.field);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Power with intermediate products capped so the result is exact below `cap`.
    pub fn pow_capped(&self, n: u64, cap: i64) -> Self {
        let v = self.valuation_or_precision().unwrap_or(0).min(0);
        let inner = cap - (n as i64 - 1).max(0) * v;
        let mut acc = Self::one(self.field);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_capped(&base, Some(inner));
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_capped(&base, Some(inner));
            }
        }
        acc.truncate(cap)
    }

    /// Coefficientwise equality at indices `< n`.
    pub fn eq_mod(&self, other: &Self, n: i64) -> bool {
        self.first_discrepancy(other, n).is_none()
    }

    /// Smallest index `< n` where the two series differ.
    pub fn first_discrepancy(&self, other: &Self, n: i64) -> Option<i64> {
        let lo = [self.valuation(), other.valuation()].into_iter().flatten().min()?;
        let hi = (self.start + self.coeffs.len() as i64).max(other.start + other.coeffs.len() as i64).min(n);
        (lo..hi).find(|&k| self.coeff(k) != other.coeff(k))
    }

    /// Exact polynomial in `θ` (coefficients low to high) if the series is one.
    pub fn to_theta_poly(&self) -> Option<Vec<Fe>> {
        if self.precision.is_some() {
            return None;
        }
        self.integral_part_below(None)
    }

    /// Coefficients of the nonnegative integral powers of `θ`, provided
    /// every known term is such a power.
    pub(crate) fn integral_part_below(&self, _n: Precision) -> Option<Vec<Fe>> {
        let den = self.lattice_den();
        if self.coeffs.is_empty() {
            return Some(vec![]);
        }
        let mut out = vec![Fe::ZERO; (-self.start / den + 1).max(0) as usize];
        for (k, c) in self.terms() {
            if k > 0 || k % den != 0 {
                return None;
            }
            out[(-k / den) as usize] = c;
        }
        Some(out)
    }

    pub fn to_json(&self) -> SeriesJson {
        let den = self.lattice_den();
        SeriesJson {
            lattice_den: den,
            precision: precision_string(self.precision, den),
            terms: self
                .terms()
                .map(|(k, c)| TermJson { exp: lattice_fraction(k, den), coeff: self.field.format_element(c) })
                .collect(),
        }
    }

    pub fn from_json(field: &'static Field, j: &SeriesJson) -> Result<Self> {
        let den = field.lattice_den();
        if j.lattice_den != den {
            return Err(Error::Parse(format!("lattice denominator {} does not match q-1 = {den}", j.lattice_den)));
        }
        let precision = parse_lattice(&j.precision, den)?;
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            let k = parse_lattice(&t.exp, den)?.ok_or_else(|| Error::Parse("infinite exponent".into()))?;
            terms.push((k, field.parse_element(&t.coeff)?));
        }
        Ok(Self::from_terms(field, &terms, precision))
    }
}

/// JSON mirror of a series; exponents `j` stand for `θ^{-j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub lattice_den: i64,
    pub precision: String,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: String,
    pub coeff: String,
}

pub(crate) fn theta_power_string(k: i64, den: i64) -> String {
    // the term sits at θ^{-k/den}
    let g = gcd(k, den).max(1);
    let (n, d) = (-k / g, den / g);
    match (n, d) {
        (0, _) => String::new(),
        (1, 1) => "θ".to_string(),
        (n, 1) if n > 0 => format!("θ^{n}"),
        (n, 1) => format!("θ^({n})"),
        (n, d) => format!("θ^({n}/{d})"),
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den = self.lattice_den();
        let mut parts = Vec::new();
        for (k, c) in self.terms() {
            let mono = theta_power_string(k, den);
            let coeff = self.field.display_element(c);
            parts.push(match (mono.is_empty(), c == Fe::ONE) {
                (true, _) => coeff,
                (false, true) => mono,
                (false, false) => format!("{coeff}{mono}"),
            });
        }
        if let Some(n) = self.precision {
            let o = theta_power_string(n, den);
            parts.push(if o.is_empty() { "O(1)".to_string() } else { format!("O({o})") });
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Expansion of a `θ`-only rational function at the infinite place,
/// exact below lattice index `n`.
pub fn expand_rational(r: &RationalFunction, n: i64) -> Result<LaurentSeries> {
    let field = r.field();
    let (num, den) = r.theta_parts().ok_or_else(|| Error::NotExpandable(r.to_string()))?;
    let num = LaurentSeries::from_theta_poly(field, &num);
    let den = LaurentSeries::from_theta_poly(field, &den);
    if num.is_exact_zero() {
        return Ok(num);
    }
    num.div_capped(&den, n)
}

impl std::ops::Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: Self) -> LaurentSeries {
        LaurentSeries::add(self, rhs)
    }
}

impl std::ops::Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: Self) -> LaurentSeries {
        LaurentSeries::sub(self, rhs)
    }
}

impl std::ops::Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: Self) -> LaurentSeries {
        LaurentSeries::mul(self, rhs)
    }
}

impl std::ops::Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> &'static Field {
        Field::get(3, 1).unwrap()
    }

    fn series(f: &'static Field, lo: i64, cs: &[u8], prec: i64) -> LaurentSeries {
        let terms: Vec<_> = cs.iter().enumerate().map(|(i, &c)| (lo + i as i64, Fe(c))).collect();
        LaurentSeries::from_terms(f, &terms, Some(prec))
    }

    #[test]
    fn additive_cancellation_is_zero_at_precision() {
        let f = f3();
        let a = LaurentSeries::theta_pow(f, 1).truncate(10);
        let b = a.scale(Fe(2));
        let s = a.add(&b);
        assert!(s.is_zero() && !s.is_exact_zero());
        assert_eq!(s.precision(), Some(10));
    }

    #[test]
    fn addition_precision_is_the_minimum() {
        let f = f3();
        // θ^{-1} mod θ^{-5} plus θ^{-4} mod θ^{-3}, in lattice units (den 2)
        let a = LaurentSeries::theta_pow(f, -1).truncate(10);
        let b = LaurentSeries::theta_pow(f, -4).truncate(6);
        let s = a.add(&b);
        assert_eq!(s, LaurentSeries::theta_pow(f, -1).truncate(6));
    }

    #[test]
    fn invert_cubic() {
        let f = f3();
        let d1 = LaurentSeries::from_theta_poly(f, &[Fe(0), Fe(2), Fe(0), Fe(1)]);
        let inv = d1.invert_to(16).unwrap();
        // θ^{-3} + θ^{-5} + θ^{-7} mod θ^{-8}
        let want = LaurentSeries::from_terms(f, &[(6, Fe(1)), (10, Fe(1)), (14, Fe(1))], Some(16));
        assert_eq!(inv, want);
        assert_eq!(d1.mul(&inv), LaurentSeries::one(f).truncate(10));
        assert!(matches!(d1.invert(), Err(Error::UnboundedPrecision)));
        assert!(LaurentSeries::zero_at(f, 4).invert().is_err());
        assert_eq!(LaurentSeries::one(f).invert().unwrap(), LaurentSeries::one(f));
    }

    #[test]
    fn expand_rational_matches_invert() {
        let f = f3();
        let r = RationalFunction::parse(f, "1/(θ^3 - θ)").unwrap();
        let s = expand_rational(&r, 16).unwrap();
        let inv = LaurentSeries::from_theta_poly(f, &[Fe(0), Fe(2), Fe(0), Fe(1)]).invert_to(16).unwrap();
        assert_eq!(s, inv);
        let r = RationalFunction::parse(f, "1/θ").unwrap();
        assert_eq!(expand_rational(&r, 10).unwrap(), LaurentSeries::theta_pow(f, -1).truncate(10));
    }

    #[test]
    fn mu_examples() {
        let f = f3();
        assert_eq!(LaurentSeries::theta_pow(f, 1).mu(1).unwrap(), LaurentSeries::theta_pow(f, 3));
        let a = LaurentSeries::from_terms(f, &[(2, Fe(1)), (4, Fe(1))], None);
        let b = LaurentSeries::from_terms(f, &[(6, Fe(1)), (12, Fe(1))], None);
        assert_eq!(a.mu(1).unwrap(), b);
        assert_eq!(b.mu(-1).unwrap(), a);
        assert!(matches!(LaurentSeries::monomial(f, Fe(1), 1).mu(-1), Err(Error::NotInMuImage(1))));
        let c = series(f, 3, &[1, 2], 7);
        assert_eq!(c.mu(1).unwrap().mu(-1).unwrap(), c);
    }

    #[test]
    fn display_and_json() {
        let f = f3();
        let d1 = LaurentSeries::from_theta_poly(f, &[Fe(0), Fe(2), Fe(0), Fe(1)]);
        assert_eq!(d1.to_string(), "θ^3 + 2θ");
        let z = LaurentSeries::monomial(f, f.zeta_ram(), -3).truncate(4);
        assert_eq!(z.to_string(), "[0+1*g]θ^(3/2) + O(θ^(-2))");
        let j = z.to_json();
        assert_eq!(j.terms[0].exp, "-3/2");
        assert_eq!(j.precision, "2");
        assert_eq!(LaurentSeries::from_json(f, &j).unwrap(), z);
    }

    fn arb_series() -> impl Strategy<Value = LaurentSeries> {
        (-6i64..6, proptest::collection::vec(0u8..9, 1..12), 0i64..10).prop_map(|(lo, cs, extra)| {
            let f = f3();
            let prec = lo + cs.len() as i64 + extra;
            series(f, lo, &cs, prec)
        })
    }

    proptest! {
        #[test]
        fn valuation_is_additive(a in arb_series(), b in arb_series()) {
            if let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) {
                let c = a.mul(&b);
                prop_assert_eq!(c.valuation(), Some(va + vb));
            }
        }

        #[test]
        fn mu_is_a_ring_morphism(a in arb_series(), b in arb_series()) {
            prop_assert_eq!(a.mul(&b).mu(1).unwrap(), a.mu(1).unwrap().mul(&b.mu(1).unwrap()));
            prop_assert_eq!(a.add(&b).mu(1).unwrap(), a.mu(1).unwrap().add(&b.mu(1).unwrap()));
            if let Some(v) = a.valuation() {
                prop_assert_eq!(a.mu(1).unwrap().valuation(), Some(3 * v));
            }
        }

        #[test]
        fn inversion_round_trips(a in arb_series()) {
            if a.valuation().is_some() {
                let inv = a.invert().unwrap();
                let one = a.mul(&inv);
                let n = one.precision().unwrap();
                prop_assert!(one.eq_mod(&LaurentSeries::one(a.field()), n));
                let back = inv.invert().unwrap();
                prop_assert!(back.eq_mod(&a, back.precision().unwrap()));
                prop_assert_eq!(back.precision(), a.precision());
            }
        }

        #[test]
        fn precision_is_sound(a in arb_series(), b in arb_series(), extra in proptest::collection::vec(0u8..9, 4)) {
            // extending the inputs with more known terms never changes the
            // product or inverse below the declared precision
            let extend = |s: &LaurentSeries| {
                let n = s.precision().unwrap();
                let mut terms: Vec<_> = s.terms().collect();
                terms.extend(extra.iter().enumerate().map(|(i, &c)| (n + i as i64, Fe(c))));
                LaurentSeries::from_terms(s.field(), &terms, Some(n + 4))
            };
            let (a2, b2) = (extend(&a), extend(&b));
            let p = a.mul(&b);
            let n = p.precision().unwrap();
            prop_assert!(a2.mul(&b2).eq_mod(&p, n));
            if a.valuation().is_some() {
                let i = a.invert().unwrap();
                prop_assert!(a2.invert().unwrap().eq_mod(&i, i.precision().unwrap()));
            }
        }
    }
}
