//! Polynomials and rational functions in `θ, t_1, …, t_s`.
//!
//! These are the exact coefficients of μ-polynomials and the inputs of the
//! Carlitz action. Text form: `2*θ^3*t1 + [0+1*g]*t2 + 1`; `theta` is
//! accepted for `θ`, and a rational function is written `(num)/(den)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

pub const MAX_T_VARS: usize = 4;

/// Exponent vector of a monomial in `t_1..t_4`.
pub type TMono = [u16; MAX_T_VARS];

pub const T_ONE: TMono = [0; MAX_T_VARS];

#[derive(Clone)]
pub struct Poly {
    field: &'static Field,
    terms: BTreeMap<(u32, TMono), Fe>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Poly {
    pub fn zero(field: &'static Field) -> Self {
        Poly { field, terms: BTreeMap::new() }
    }

    pub fn constant(field: &'static Field, c: Fe) -> Self {
        Self::monomial(field, c, 0, T_ONE)
    }

    pub fn one(field: &'static Field) -> Self {
        Self::constant(field, Fe::ONE)
    }

    pub fn monomial(field: &'static Field, c: Fe, theta_deg: u32, t: TMono) -> Self {
        let mut p = Self::zero(field);
        if !c.is_zero() {
            p.terms.insert((theta_deg, t), c);
        }
        p
    }

    pub fn theta(field: &'static Field) -> Self {
        Self::monomial(field, Fe::ONE, 1, T_ONE)
    }

    /// The variable `t_i`, `i` counted from 1.
    pub fn t(field: &'static Field, i: usize) -> Result<Self> {
        if i == 0 || i > MAX_T_VARS {
            return Err(Error::VariableOutOfRange(i));
        }
        let mut m = T_ONE;
        m[i - 1] = 1;
        Ok(Self::monomial(field, Fe::ONE, 0, m))
    }

    /// Polynomial in `θ` alone, coefficients low to high.
    pub fn from_theta_coeffs(field: &'static Field, coeffs: &[Fe]) -> Self {
        let mut p = Self::zero(field);
        for (i, &c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert((i as u32, T_ONE), c);
            }
        }
        p
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, TMono, Fe)> + '_ {
        self.terms.iter().map(|(&(d, m), &c)| (d, m, c))
    }

    pub fn theta_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    /// Number of `t`-variables actually used.
    pub fn t_vars_used(&self) -> usize {
        self.terms
            .keys()
            .map(|(_, m)| m.iter().rposition(|&e| e > 0).map_or(0, |i| i + 1))
            .max()
            .unwrap_or(0)
    }

    pub fn is_theta_only(&self) -> bool {
        self.t_vars_used() == 0
    }

    pub fn theta_coeffs(&self) -> Option<Vec<Fe>> {
        if !self.is_theta_only() {
            return None;
        }
        let d = self.theta_degree().map_or(0, |d| d as usize + 1);
        let mut v = vec![Fe::ZERO; d];
        for (&(k, _), &c) in &self.terms {
            v[k as usize] = c;
        }
        Some(v)
    }

    /// Coefficient of `θ^k` as a polynomial in the `t`-variables.
    pub fn theta_coeff(&self, k: u32) -> Poly {
        let mut p = Self::zero(self.field);
        for (&(d, m), &c) in &self.terms {
            if d == k {
                p.terms.insert((0, m), c);
            }
        }
        p
    }

    pub fn constant_value(&self) -> Option<Fe> {
        match self.terms.len() {
            0 => Some(Fe::ZERO),
            1 => self.terms.get(&(0, T_ONE)).copied(),
            _ => None,
        }
    }

    fn insert_add(&mut self, key: (u32, TMono), c: Fe) {
        let f = self.field;
        let e = self.terms.entry(key).or_insert(Fe::ZERO);
        *e = f.add(*e, c);
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        for (&k, &c) in &other.terms {
            r.insert_add(k, c);
        }
        r
    }

    pub fn neg(&self) -> Poly {
        let f = self.field;
        Poly { field: f, terms: self.terms.iter().map(|(&k, &c)| (k, f.neg(c))).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fe) -> Poly {
        let mut r = Self::zero(self.field);
        for (&k, &x) in &self.terms {
            r.insert_add(k, self.field.mul(c, x));
        }
        r
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let f = self.field;
        let mut r = Self::zero(f);
        for (&(da, ma), &ca) in &self.terms {
            for (&(db, mb), &cb) in &other.terms {
                let mut m = T_ONE;
                for i in 0..MAX_T_VARS {
                    m[i] = ma[i] + mb[i];
                }
                r.insert_add((da + db, m), f.mul(ca, cb));
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Self::one(self.field);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `μ^m` on coefficients: `θ ↦ θ^{p^m}`, scalars by Frobenius, `t` fixed.
    pub fn mu(&self, m: u32) -> Poly {
        let f = self.field;
        let factor = f.p().pow(m);
        let mut r = Self::zero(f);
        for (&(d, mono), &c) in &self.terms {
            r.insert_add((d * factor, mono), f.frobenius(c, m as i32));
        }
        r
    }

    /// The leading coefficient in `θ` as a `t`-polynomial.
    pub fn leading_theta_coeff(&self) -> Poly {
        self.theta_degree().map_or_else(|| Self::zero(self.field), |d| self.theta_coeff(d))
    }

    pub fn is_monic_in_theta(&self) -> bool {
        self.leading_theta_coeff().constant_value() == Some(Fe::ONE)
    }

    /// Highest term in key order (θ-degree first).
    fn lead(&self) -> Option<Fe> {
        self.terms.values().next_back().copied()
    }

    pub fn parse(field: &'static Field, s: &str) -> Result<Poly> {
        let mut p = Parser { field, chars: s.chars().collect(), pos: 0 };
        let r = p.expr()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(Error::Parse(format!("trailing input in `{s}`")));
        }
        Ok(r)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (&(d, m), &c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            match d {
                0 => {}
                1 => factors.push("θ".to_string()),
                d => factors.push(format!("θ^{d}")),
            }
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("t{}", i + 1)),
                    e => factors.push(format!("t{}^{e}", i + 1)),
                }
            }
            if c != Fe::ONE || factors.is_empty() {
                factors.insert(0, self.field.display_element(c));
            }
            parts.push(factors.join("*"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

struct Parser {
    field: &'static Field,
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {}", self.pos))
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = if self.peek() == Some('-') {
            self.pos += 1;
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let n = self.number()?;
            return Ok(base.pow(n as u32));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("expected a number"))
    }

    fn atom(&mut self) -> Result<Poly> {
        let f = self.field;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some('[') => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|&c| c != ']') {
                    self.pos += 1;
                }
                if self.pos >= self.chars.len() {
                    return Err(self.err("unclosed `[`"));
                }
                self.pos += 1;
                let s: String = self.chars[start..self.pos].iter().collect();
                Ok(Poly::constant(f, f.parse_element(&s)?))
            }
            Some('θ') => {
                self.pos += 1;
                Ok(Poly::theta(f))
            }
            Some('t') => {
                let rest: String = self.chars[self.pos..].iter().take(5).collect();
                if rest == "theta" {
                    self.pos += 5;
                    return Ok(Poly::theta(f));
                }
                self.pos += 1;
                let i = self.number()?;
                Poly::t(f, i as usize)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(Poly::constant(f, f.from_int((n % f.p() as u64) as i64)))
            }
            _ => Err(self.err("unexpected input")),
        }
    }
}

/// Univariate helpers over 𝔽_{q²}, coefficients low to high.
pub(crate) mod upoly {
    use crate::field::{Fe, Field};

    pub fn trim(mut a: Vec<Fe>) -> Vec<Fe> {
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
        a
    }

    pub fn deg(a: &[Fe]) -> Option<usize> {
        a.iter().rposition(|c| !c.is_zero())
    }

    pub fn sub(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| f.sub(a.get(i).copied().unwrap_or_default(), b.get(i).copied().unwrap_or_default()))
                .collect(),
        )
    }

    pub fn mul(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut r = vec![Fe::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = f.add(r[i + j], f.mul(x, y));
            }
        }
        trim(r)
    }

    pub fn divrem(f: &Field, a: &[Fe], b: &[Fe]) -> (Vec<Fe>, Vec<Fe>) {
        let db = deg(b).expect("division by the zero polynomial");
        let lead_inv = f.inv(b[db]).unwrap();
        let mut r = trim(a.to_vec());
        if r.len() <= db {
            return (vec![], r);
        }
        let mut quo = vec![Fe::ZERO; r.len() - db];
        while let Some(dr) = deg(&r) {
            if dr < db {
                break;
            }
            let c = f.mul(r[dr], lead_inv);
            quo[dr - db] = c;
            for i in 0..=db {
                r[dr - db + i] = f.sub(r[dr - db + i], f.mul(c, b[i]));
            }
            r = trim(r);
        }
        (trim(quo), r)
    }

    pub fn monic(f: &Field, a: &[Fe]) -> Vec<Fe> {
        match deg(a) {
            None => vec![],
            Some(d) => {
                let inv = f.inv(a[d]).unwrap();
                a[..=d].iter().map(|&c| f.mul(c, inv)).collect()
            }
        }
    }

    pub fn gcd(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let (_, r) = divrem(f, &a, &b);
            a = b;
            b = r;
        }
        monic(f, &a)
    }
}

/// `num/den` with a nonzero denominator.
///
/// In `θ` alone the representative is fully reduced with a monic
/// denominator; with `t`-variables only the denominator's leading
/// coefficient is normalized to 1.
#[derive(Clone)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RationalFunction {}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDivisor { precision: "inf".into() });
        }
        let f = num.field;
        if num.is_zero() {
            return Ok(RationalFunction { num, den: Poly::one(f) });
        }
        if let (Some(a), Some(b)) = (num.theta_coeffs(), den.theta_coeffs()) {
            let g = upoly::gcd(f, &a, &b);
            let (a, _) = upoly::divrem(f, &a, &g);
            let (b, _) = upoly::divrem(f, &b, &g);
            let lead = f.inv(b[upoly::deg(&b).unwrap()]).unwrap();
            let a: Vec<Fe> = a.iter().map(|&c| f.mul(c, lead)).collect();
            let b: Vec<Fe> = b.iter().map(|&c| f.mul(c, lead)).collect();
            return Ok(RationalFunction { num: Poly::from_theta_coeffs(f, &a), den: Poly::from_theta_coeffs(f, &b) });
        }
        let lead = f.inv(den.lead().unwrap()).unwrap();
        Ok(RationalFunction { num: num.scale(lead), den: den.scale(lead) })
    }

    pub fn from_poly(p: Poly) -> Self {
        let f = p.field;
        RationalFunction { num: p, den: Poly::one(f) }
    }

    pub fn constant(field: &'static Field, c: Fe) -> Self {
        Self::from_poly(Poly::constant(field, c))
    }

    pub fn one(field: &'static Field) -> Self {
        Self::constant(field, Fe::ONE)
    }

    pub fn field(&self) -> &'static Field {
        self.num.field
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `(num, den)` coefficient vectors when no `t`-variable occurs.
    pub fn theta_parts(&self) -> Option<(Vec<Fe>, Vec<Fe>)> {
        Some((self.num.theta_coeffs()?, self.den.theta_coeffs()?))
    }

    pub fn t_vars_used(&self) -> usize {
        self.num.t_vars_used().max(self.den.t_vars_used())
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn mu(&self, m: u32) -> Self {
        Self::new(self.num.mu(m), self.den.mu(m)).unwrap()
    }

    pub fn parse(field: &'static Field, s: &str) -> Result<Self> {
        let mut depth = 0i32;
        let mut split = None;
        for (i, c) in s.char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                '/' if depth == 0 => split = Some(i),
                _ => {}
            }
        }
        match split {
            None => Ok(Self::from_poly(Poly::parse(field, s)?)),
            Some(i) => Self::new(Poly::parse(field, &s[..i])?, Poly::parse(field, &s[i + 1..])?),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.constant_value() == Some(Fe::ONE) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Rational reconstruction of a power series `Σ r_i x^i` known mod `x^k`.
///
/// Returns `(P, Q)` with `Q(0) = 1`, `deg P < k/2`, `deg Q ≤ k/2` and
/// `P ≡ Q·R (mod x^k)`, or `None` when no such pair exists.
pub fn rational_reconstruction(field: &Field, r: &[Fe], k: usize) -> Option<(Vec<Fe>, Vec<Fe>)> {
    let mut modulus = vec![Fe::ZERO; k + 1];
    modulus[k] = Fe::ONE;
    let series = upoly::trim(r.iter().take(k).copied().collect());
    let (mut r0, mut r1) = (modulus, series);
    let (mut t0, mut t1): (Vec<Fe>, Vec<Fe>) = (vec![], vec![Fe::ONE]);
    let bound = k / 2;
    while upoly::deg(&r1).is_some_and(|d| d >= bound) {
        let (quo, rem) = upoly::divrem(field, &r0, &r1);
        let t2 = upoly::sub(field, &t0, &upoly::mul(field, &quo, &t1));
        (r0, r1) = (r1, rem);
        (t0, t1) = (t1, t2);
    }
    if upoly::deg(&t1).is_some_and(|d| d > bound) || t1.first().map_or(true, |c| c.is_zero()) {
        return None;
    }
    let c = field.inv(t1[0]).unwrap();
    let p: Vec<Fe> = r1.iter().map(|&x| field.mul(x, c)).collect();
    let q: Vec<Fe> = t1.iter().map(|&x| field.mul(x, c)).collect();
    Some((upoly::trim(p), upoly::trim(q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> &'static Field {
        Field::get(3, 1).unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        let f = f3();
        let p = Poly::parse(f, "2*θ^3*t1 + theta + 1").unwrap();
        assert_eq!(p.to_string(), "2*θ^3*t1 + θ + 1");
        assert_eq!(Poly::parse(f, &p.to_string()).unwrap(), p);
        let q = Poly::parse(f, "(θ - t1)^2").unwrap();
        assert_eq!(q, Poly::parse(f, "θ^2 + θ*t1 + t1^2").unwrap());
    }

    #[test]
    fn rational_reduces_in_theta() {
        let f = f3();
        let r = RationalFunction::parse(f, "(θ^2 - 1)/(2*θ - 2)").unwrap();
        assert_eq!(r.to_string(), "2*θ + 2");
        let s = RationalFunction::parse(f, "(1)/(θ^3 - θ)").unwrap();
        assert_eq!(s.den().to_string(), "θ^3 + 2*θ");
    }

    #[test]
    fn mu_twists_theta_only() {
        let f = f3();
        let p = Poly::parse(f, "t1 - θ").unwrap();
        assert_eq!(p.mu(1), Poly::parse(f, "t1 - θ^3").unwrap());
    }

    #[test]
    fn reconstruction_recovers_geometric_series() {
        let f = f3();
        // 1/(1 - x) = 1 + x + x^2 + ...
        let r = vec![Fe::ONE; 10];
        let (p, q) = rational_reconstruction(f, &r, 10).unwrap();
        assert_eq!(p, vec![Fe::ONE]);
        assert_eq!(q, vec![Fe::ONE, f.from_int(-1)]);
    }
}
