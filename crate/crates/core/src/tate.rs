//! Truncated elements of the Tate algebra 𝕋_s.
//!
//! An element is a finite sum `Σ f_m t^m` whose coefficients are
//! [`LaurentSeries`] sharing one Gauss precision `N`: every coefficient is
//! known below `N`, and every monomial absent from the map has coefficient
//! `0 mod θ^{-N}`. The per-variable degree cap is read off the support.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{binom_mod_p, Fe, Field};
use crate::laurent::{padd, pmin, precision_string, LaurentSeries, Precision, SeriesJson};
use crate::poly::{Poly, RationalFunction, TMono, MAX_T_VARS, T_ONE};

#[derive(Clone)]
pub struct TateElement {
    field: &'static Field,
    s: usize,
    terms: BTreeMap<TMono, LaurentSeries>,
    precision: Precision,
}

impl PartialEq for TateElement {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field) && self.terms == other.terms && self.precision == other.precision
    }
}

impl Eq for TateElement {}

impl fmt::Debug for TateElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn mono_mul(a: &TMono, b: &TMono) -> TMono {
    let mut m = T_ONE;
    for i in 0..MAX_T_VARS {
        m[i] = a[i] + b[i];
    }
    m
}

fn check_s(s: usize) -> Result<()> {
    if s > MAX_T_VARS {
        return Err(Error::TooManyVariables { max: MAX_T_VARS, got: s });
    }
    Ok(())
}

impl TateElement {
    /// Builds an element, truncating every coefficient to `precision`.
    pub fn from_terms(
        field: &'static Field,
        s: usize,
        terms: impl IntoIterator<Item = (TMono, LaurentSeries)>,
        precision: Precision,
    ) -> Result<Self> {
        check_s(s)?;
        let mut map: BTreeMap<TMono, LaurentSeries> = BTreeMap::new();
        let mut prec = precision;
        for (m, c) in terms {
            if m[s..].iter().any(|&e| e > 0) {
                return Err(Error::VariableOutOfRange(m.iter().rposition(|&e| e > 0).unwrap() + 1));
            }
            prec = pmin(prec, c.precision());
            match map.get_mut(&m) {
                Some(old) => *old = old.add(&c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        Ok(Self::normalized(field, s, map, prec))
    }

    fn normalized(field: &'static Field, s: usize, terms: BTreeMap<TMono, LaurentSeries>, precision: Precision) -> Self {
        let terms = terms
            .into_iter()
            .map(|(m, c)| (m, if let Some(n) = precision { c.truncate(n).with_precision(Some(n)) } else { c }))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        TateElement { field, s, terms, precision }
    }

    pub fn zero(field: &'static Field, s: usize) -> Self {
        TateElement { field, s, terms: BTreeMap::new(), precision: None }
    }

    pub fn zero_at(field: &'static Field, s: usize, n: i64) -> Self {
        TateElement { field, s, terms: BTreeMap::new(), precision: Some(n) }
    }

    pub fn one(field: &'static Field, s: usize) -> Self {
        Self::from_series(s, LaurentSeries::one(field))
    }

    /// A `t`-constant element.
    pub fn from_series(s: usize, c: LaurentSeries) -> Self {
        let field = c.field();
        let precision = c.precision();
        let mut terms = BTreeMap::new();
        terms.insert(T_ONE, c);
        Self::normalized(field, s, terms, precision)
    }

    /// The variable `t_i`, `i` counted from 1.
    pub fn t(field: &'static Field, s: usize, i: usize) -> Result<Self> {
        if i == 0 || i > s {
            return Err(Error::VariableOutOfRange(i));
        }
        let mut m = T_ONE;
        m[i - 1] = 1;
        Self::from_terms(field, s, [(m, LaurentSeries::one(field))], None)
    }

    /// Exact image of a polynomial in `θ, t_1..t_s`.
    pub fn from_poly(p: &Poly, s: usize) -> Result<Self> {
        let f = p.field();
        if p.t_vars_used() > s {
            return Err(Error::VariableOutOfRange(p.t_vars_used()));
        }
        let mut by_mono: BTreeMap<TMono, Vec<(i64, Fe)>> = BTreeMap::new();
        for (d, m, c) in p.terms() {
            by_mono.entry(m).or_default().push((-(d as i64) * f.lattice_den(), c));
        }
        Self::from_terms(f, s, by_mono.into_iter().map(|(m, ts)| (m, LaurentSeries::from_terms(f, &ts, None))), None)
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TMono, &LaurentSeries)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &TMono) -> LaurentSeries {
        self.terms.get(m).cloned().unwrap_or_else(|| match self.precision {
            Some(n) => LaurentSeries::zero_at(self.field, n),
            None => LaurentSeries::zero(self.field),
        })
    }

    /// The `t`-constant coefficient.
    pub fn constant_term(&self) -> LaurentSeries {
        self.coefficient(&T_ONE)
    }

    /// Largest exponent of each variable in the support.
    pub fn degree_cap(&self) -> Vec<u16> {
        (0..self.s).map(|i| self.terms.keys().map(|m| m[i]).max().unwrap_or(0)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.precision.is_none()
    }

    /// Gauss valuation in lattice units, if some coefficient is known nonzero.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.values().filter_map(|c| c.valuation()).min()
    }

    pub fn gauss_valuation(&self) -> Result<i64> {
        self.valuation()
            .ok_or_else(|| Error::ZeroAtPrecision(precision_string(self.precision, self.field.lattice_den())))
    }

    fn valuation_or_precision(&self) -> Precision {
        self.valuation().or(self.precision)
    }

    pub(crate) fn with_precision(&self, p: Precision) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (*m, c.with_precision(None))).collect();
        Self::normalized(self.field, self.s, terms, p)
    }

    fn same_field(&self, other: &Self) {
        assert!(std::ptr::eq(self.field, other.field), "{}", Error::FieldMismatch);
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        let precision = pmin(self.precision, other.precision);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(old) => *old = old.add(c),
                None => {
                    terms.insert(*m, c.clone());
                }
            }
        }
        Self::normalized(self.field, self.s.max(other.s), terms, precision)
    }

    pub fn neg(&self) -> Self {
        TateElement {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fe) -> Self {
        let terms = self.terms.iter().map(|(m, x)| (*m, x.scale(c))).collect();
        Self::normalized(self.field, self.s, terms, self.precision)
    }

    /// Multiplication by `θ^{-k/(q-1)}`.
    pub fn shift(&self, k: i64) -> Self {
        TateElement {
            terms: self.terms.iter().map(|(m, c)| (*m, c.shift(k))).collect(),
            precision: padd(self.precision, k),
            ..self.clone()
        }
    }

    pub fn truncate(&self, n: i64) -> Self {
        Self::normalized(self.field, self.s, self.terms.clone(), pmin(self.precision, Some(n)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_capped(other, None)
    }

    /// Product whose precision is the Gauss rule `min(N_a + v_b, N_b + v_a)`,
    /// additionally capped at `cap`.
    pub fn mul_capped(&self, other: &Self, cap: Precision) -> Self {
        self.same_field(other);
        let s = self.s.max(other.s);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(self.field, s);
        }
        let va = self.valuation_or_precision().unwrap();
        let vb = other.valuation_or_precision().unwrap();
        let precision = pmin(pmin(padd(self.precision, vb), padd(other.precision, va)), cap);
        let mut b_terms: Vec<(i64, &TMono, &LaurentSeries)> =
            other.terms.iter().map(|(m, c)| (c.valuation().unwrap(), m, c)).collect();
        b_terms.sort_by_key(|t| t.0);
        let mut acc: BTreeMap<TMono, LaurentSeries> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let vca = ca.valuation().unwrap();
            for &(vcb, mb, cb) in &b_terms {
                if precision.is_some_and(|n| vca + vcb >= n) {
                    break;
                }
                let prod = ca.mul_capped(cb, precision);
                let m = mono_mul(ma, mb);
                match acc.get_mut(&m) {
                    Some(old) => *old = old.add(&prod),
                    None => {
                        acc.insert(m, prod);
                    }
                }
            }
        }
        Self::normalized(self.field, s, acc, precision)
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Self::one(self.field, self.s);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `μ^m` on every coefficient; `t`-monomials are fixed.
    pub fn mu(&self, m: u32) -> Self {
        let factor = (self.field.p() as i64).pow(m);
        TateElement {
            terms: self.terms.iter().map(|(k, c)| (*k, c.mu(m as i32).expect("nonnegative twist"))).collect(),
            precision: self.precision.map(|n| n * factor),
            ..self.clone()
        }
    }

    /// `τ = μ^e`.
    pub fn tau(&self) -> Self {
        self.mu(self.field.e())
    }

    pub fn tau_pow(&self, i: u32) -> Self {
        self.mu(self.field.e() * i)
    }

    /// Splits a unit as `c·θ^{-v}·(1 + u)` with `v(u) > 0`.
    fn unit_parts(&self) -> Result<(i64, Fe)> {
        let v = self.valuation().ok_or_else(|| Error::ZeroDivisor {
            precision: precision_string(self.precision, self.field.lattice_den()),
        })?;
        let c = self.constant_term().coeff(v);
        let residue_is_constant =
            self.terms.iter().all(|(m, x)| *m == T_ONE || x.valuation().unwrap() > v);
        if c.is_zero() || !residue_is_constant {
            return Err(Error::NotAUnit);
        }
        Ok((v, c))
    }

    /// Inverse with the natural precision `N - 2v`.
    pub fn invert(&self) -> Result<Self> {
        let (v, _) = self.unit_parts()?;
        match self.precision {
            None if self.terms.len() == 1 && self.terms.values().next().unwrap().is_monomial() => self.invert_to(0),
            None => Err(Error::UnboundedPrecision),
            Some(n) => self.invert_to(n - 2 * v),
        }
    }

    /// Inverse known below `min(N - 2v, cap)`, by Newton iteration on the
    /// normalized unit.
    pub fn invert_to(&self, cap: i64) -> Result<Self> {
        let (v, c) = self.unit_parts()?;
        let f = self.field;
        let c_inv = f.inv(c).unwrap();
        if self.precision.is_none() && self.terms.len() == 1 && self.constant_term().is_monomial() {
            return Ok(Self::from_series(self.s, LaurentSeries::monomial(f, c_inv, -v)));
        }
        let precision = pmin(padd(self.precision, -2 * v), Some(cap)).unwrap();
        let target = precision + v;
        if target <= 0 {
            return Ok(Self::zero_at(f, self.s, precision));
        }
        // g = 1 + u with v(u) ≥ 1, known below N - v ≥ target
        let g = self.shift(-v).scale(c_inv).truncate(target).with_precision(None);
        let one = Self::one(f, self.s);
        let u = g.sub(&one);
        let mut err = u.valuation().unwrap_or(target);
        let mut inv = one.clone();
        let two = Self::from_series(self.s, LaurentSeries::constant(f, f.from_int(2)));
        while err < target {
            let gs = g.mul_capped(&inv, Some(target)).with_precision(None);
            inv = inv.mul_capped(&two.sub(&gs), Some(target)).with_precision(None);
            err = err.saturating_mul(2);
        }
        Ok(inv.truncate(target).with_precision(Some(target)).shift(-v).scale(c_inv))
    }

    /// `𝒟_n` in the variable `t_var` (counted from 1): `t^m ↦ binom(m, n) t^{m-n}`.
    pub fn divided_derivative(&self, n: u32, var: usize) -> Result<Self> {
        if var == 0 || var > self.s {
            return Err(Error::VariableOutOfRange(var));
        }
        let p = self.field.p();
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let k = m[var - 1] as u32;
            if k < n {
                continue;
            }
            let b = binom_mod_p(k as u64, n as u64, p);
            if b == 0 {
                continue;
            }
            let mut m2 = *m;
            m2[var - 1] = (k - n) as u16;
            terms.push((m2, c.scale(self.field.from_int(b as i64))));
        }
        Self::from_terms(self.field, self.s, terms, self.precision)
    }

    /// Substitutes `t_var := value` for a value in the closed unit disk.
    pub fn substitute_unit_disk(&self, var: usize, value: &TateElement) -> Result<Self> {
        if var == 0 || var > self.s {
            return Err(Error::VariableOutOfRange(var));
        }
        let vv = value.valuation_or_precision().unwrap_or(0);
        if vv < 0 {
            return Err(Error::OutsideUnitDisk);
        }
        let vf = match self.valuation_or_precision() {
            Some(v) => v,
            None => return Ok(self.clone()),
        };
        let s = self.s.max(value.s);
        let precision = pmin(self.precision, padd(value.precision, vf));
        let max_deg = self.terms.keys().map(|m| m[var - 1]).max().unwrap_or(0);
        let mut powers = vec![Self::one(self.field, s)];
        for k in 1..=max_deg as usize {
            let next = powers[k - 1].mul_capped(value, precision.map(|n| n - vf));
            powers.push(next);
        }
        let mut acc = match precision {
            Some(n) => Self::zero_at(self.field, s, n),
            None => Self::zero(self.field, s),
        };
        for (m, c) in &self.terms {
            let mut rest = *m;
            rest[var - 1] = 0;
            let k = m[var - 1] as usize;
            let mono = Self::from_terms(self.field, s, [(rest, c.clone())], self.precision)?;
            acc = acc.add(&mono.mul_capped(&powers[k], precision));
        }
        Ok(acc)
    }

    /// Coefficientwise equality below lattice index `n`.
    pub fn eq_mod(&self, other: &Self, n: i64) -> bool {
        self.first_discrepancy(other, n).is_none()
    }

    /// Smallest lattice index `< n` at which some coefficient differs.
    pub fn first_discrepancy(&self, other: &Self, n: i64) -> Option<i64> {
        let mut monos: Vec<&TMono> = self.terms.keys().chain(other.terms.keys()).collect();
        monos.sort();
        monos.dedup();
        monos
            .into_iter()
            .filter_map(|m| {
                let a = self.terms.get(m).cloned().unwrap_or_else(|| LaurentSeries::zero(self.field));
                let b = other.terms.get(m).cloned().unwrap_or_else(|| LaurentSeries::zero(self.field));
                a.first_discrepancy(&b, n)
            })
            .min()
    }

    pub fn to_json(&self) -> TateJson {
        let den = self.field.lattice_den();
        TateJson {
            s: self.s,
            lattice_den: den,
            precision: precision_string(self.precision, den),
            degree_cap: self.degree_cap(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TateTermJson { t: m[..self.s].to_vec(), coeff: c.to_json() })
                .collect(),
        }
    }

    pub fn from_json(field: &'static Field, j: &TateJson) -> Result<Self> {
        let precision = crate::laurent::parse_lattice(&j.precision, field.lattice_den())?;
        let mut terms = Vec::new();
        for t in &j.terms {
            if t.t.len() != j.s {
                return Err(Error::Parse("monomial length differs from s".into()));
            }
            let mut m = T_ONE;
            m[..j.s].copy_from_slice(&t.t);
            terms.push((m, LaurentSeries::from_json(field, &t.coeff)?));
        }
        Self::from_terms(field, j.s, terms, precision)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TateJson {
    pub s: usize,
    pub lattice_den: i64,
    pub precision: String,
    pub degree_cap: Vec<u16>,
    pub terms: Vec<TateTermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TateTermJson {
    pub t: Vec<u16>,
    pub coeff: SeriesJson,
}

impl fmt::Display for TateElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let coeff = c.with_precision(None).to_string();
            let mut factors = vec![format!("({coeff})")];
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("t{}", i + 1)),
                    e => factors.push(format!("t{}^{e}", i + 1)),
                }
            }
            parts.push(factors.join("*"));
        }
        if let Some(n) = self.precision {
            parts.push(format!("O({})", LaurentSeries::monomial(self.field, Fe::ONE, n).with_precision(None)));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// `1/a` for `a` monic in `θ` with `t`-polynomial lower coefficients,
/// exact below lattice index `n`.
pub fn expand_inverse_monic(a: &Poly, s: usize, n: i64) -> Result<TateElement> {
    if a.theta_degree().is_none() || !a.is_monic_in_theta() {
        return Err(Error::NotMonic);
    }
    TateElement::from_poly(a, s)?.invert_to(n)
}

/// A rational function of `K_s` as an element of `𝕋_s`, exact below `n`.
/// The denominator must be monic in `θ` up to a constant.
pub fn expand_rational_tate(r: &RationalFunction, s: usize, n: i64) -> Result<TateElement> {
    let field = r.field();
    let num = TateElement::from_poly(r.num(), s)?;
    if num.is_exact_zero() {
        return Ok(num);
    }
    let c = r.den().leading_theta_coeff().constant_value().filter(|c| !c.is_zero());
    let c = c.ok_or_else(|| Error::NotExpandable(r.to_string()))?;
    let cinv = field.inv(c).expect("nonzero");
    let shift = r.num().theta_degree().unwrap_or(0) as i64 * field.lattice_den();
    let inv = expand_inverse_monic(&r.den().scale(cinv), s, n + shift)?.scale(cinv);
    Ok(num.mul_capped(&inv, Some(n)))
}

impl std::ops::Add for &TateElement {
    type Output = TateElement;
    fn add(self, rhs: Self) -> TateElement {
        TateElement::add(self, rhs)
    }
}

impl std::ops::Sub for &TateElement {
    type Output = TateElement;
    fn sub(self, rhs: Self) -> TateElement {
        TateElement::sub(self, rhs)
    }
}

impl std::ops::Mul for &TateElement {
    type Output = TateElement;
    fn mul(self, rhs: Self) -> TateElement {
        TateElement::mul(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> &'static Field {
        Field::get(3, 1).unwrap()
    }

    fn poly(s: &str) -> Poly {
        Poly::parse(f3(), s).unwrap()
    }

    fn tate(s: &str, vars: usize) -> TateElement {
        TateElement::from_poly(&poly(s), vars).unwrap()
    }

    #[test]
    fn gauss_valuation_examples() {
        let f = f3();
        assert_eq!(TateElement::one(f, 1).gauss_valuation().unwrap(), 0);
        let x = tate("t1", 1).mul(&TateElement::from_series(1, LaurentSeries::theta_pow(f, -2)));
        assert_eq!(x.gauss_valuation().unwrap(), 4);
        assert_eq!(tate("θ + t1", 1).gauss_valuation().unwrap(), -2);
        assert!(matches!(TateElement::zero_at(f, 1, 6).gauss_valuation(), Err(Error::ZeroAtPrecision(_))));
    }

    #[test]
    fn mu_examples() {
        assert_eq!(tate("t1 - θ", 1).mu(1), tate("t1 - θ^3", 1));
        assert_eq!(tate("t1*t2", 2).mu(2), tate("t1*t2", 2));
        for p in ["1", "t1", "t1 + t2^2"] {
            assert_eq!(tate(p, 2).mu(1), tate(p, 2));
        }
    }

    #[test]
    fn divided_derivative_examples() {
        assert!(tate("t1^3", 1).divided_derivative(1, 1).unwrap().is_zero());
        assert_eq!(tate("t1^4", 1).divided_derivative(1, 1).unwrap(), tate("t1^3", 1));
        assert!(tate("θ^2 + 1", 1).divided_derivative(2, 1).unwrap().is_zero());
    }

    #[test]
    fn divided_derivatives_compose_with_lucas_binomials() {
        let f = f3();
        for k in 0..12u16 {
            let mono = TateElement::from_terms(f, 1, [([k, 0, 0, 0], LaurentSeries::one(f))], None).unwrap();
            for a in 0..=4u32 {
                for b in 0..=4u32 {
                    let lhs = mono.divided_derivative(b, 1).unwrap().divided_derivative(a, 1).unwrap();
                    let c = binom_mod_p((a + b) as u64, a as u64, 3);
                    let rhs = mono.divided_derivative(a + b, 1).unwrap().scale(f.from_int(c as i64));
                    assert_eq!(lhs, rhs, "k={k} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn inverse_of_theta_minus_t() {
        let f = f3();
        let inv = expand_inverse_monic(&poly("θ - t1"), 1, 12).unwrap();
        let want: Vec<_> = (0..5u16).map(|k| ([k, 0, 0, 0], LaurentSeries::theta_pow(f, -(k as i64) - 1))).collect();
        assert_eq!(inv, TateElement::from_terms(f, 1, want, Some(12)).unwrap());
        let back = tate("θ - t1", 1).mul(&inv);
        assert_eq!(back.precision(), Some(10));
        assert!(back.eq_mod(&TateElement::one(f, 1), 10));
        assert_eq!(
            expand_inverse_monic(&poly("θ"), 1, 12).unwrap(),
            TateElement::from_series(1, LaurentSeries::theta_pow(f, -1))
        );
        assert!(matches!(expand_inverse_monic(&poly("2*θ + t1"), 1, 12), Err(Error::NotMonic)));
        assert!(matches!(tate("t1", 1).invert(), Err(Error::NotAUnit)));
    }

    #[test]
    fn substitution_examples() {
        let f = f3();
        let w = expand_inverse_monic(&poly("θ - t1"), 1, 20).unwrap();
        let at0 = w.substitute_unit_disk(1, &TateElement::zero(f, 1)).unwrap();
        assert_eq!(at0, TateElement::from_series(1, w.constant_term()));
        assert_eq!(w.substitute_unit_disk(1, &tate("t1", 1)).unwrap(), w);
        // (1 - tθ^{-1})^{-1} at t = θ^{-1}
        let g = tate("1", 1).sub(&tate("t1", 1).shift(2)).invert_to(16).unwrap();
        let h = g.substitute_unit_disk(1, &TateElement::from_series(1, LaurentSeries::theta_pow(f, -1))).unwrap();
        let want: Vec<_> = (0..4).map(|k| (4 * k, Fe::ONE)).collect();
        let want = LaurentSeries::from_terms(f, &want, Some(16));
        assert_eq!(h.constant_term(), want);
        assert!(matches!(
            w.substitute_unit_disk(1, &TateElement::from_series(1, LaurentSeries::theta_pow(f, 1))),
            Err(Error::OutsideUnitDisk)
        ));
    }

    #[test]
    fn json_round_trip() {
        let f = f3();
        let w = expand_inverse_monic(&poly("θ - t1 - t2"), 2, 9).unwrap();
        let j = w.to_json();
        assert_eq!(TateElement::from_json(f, &j).unwrap(), w);
    }

    fn arb_tate() -> impl Strategy<Value = TateElement> {
        proptest::collection::vec(((0u16..3, 0u16..3), -3i64..4, proptest::collection::vec(0u8..9, 1..5)), 1..5)
            .prop_map(|terms| {
                let f = f3();
                let ts = terms.into_iter().map(|((a, b), lo, cs)| {
                    let s: Vec<_> = cs.iter().enumerate().map(|(i, &c)| (lo + i as i64, Fe(c))).collect();
                    ([a, b, 0, 0], LaurentSeries::from_terms(f, &s, None))
                });
                TateElement::from_terms(f, 2, ts, Some(12)).unwrap()
            })
    }

    proptest! {
        #[test]
        fn gauss_valuation_is_multiplicative(a in arb_tate(), b in arb_tate()) {
            if let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) {
                let c = a.mul(&b);
                if c.precision().unwrap() > va + vb {
                    prop_assert_eq!(c.valuation(), Some(va + vb));
                }
            }
        }

        #[test]
        fn mu_is_multiplicative_and_scales_valuation(a in arb_tate(), b in arb_tate()) {
            prop_assert_eq!(a.mul(&b).mu(1), a.mu(1).mul(&b.mu(1)));
            prop_assert_eq!(a.add(&b).mu(1), a.mu(1).add(&b.mu(1)));
            prop_assert_eq!(a.mu(1).valuation(), a.valuation().map(|v| 3 * v));
        }

        #[test]
        fn product_is_precision_sound(a in arb_tate(), b in arb_tate()) {
            let lo = a.mul(&b);
            let hi = a.with_precision(Some(16)).mul(&b.with_precision(Some(16)));
            let n = lo.precision().unwrap();
            prop_assert!(lo.eq_mod(&hi, n));
        }
    }
}
