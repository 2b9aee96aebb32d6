//! μ-difference polynomials over `K_s`.
//!
//! A monomial is an exponent table `e[l][j]`, the exponent of `μ^j(X_{l+1})`.
//! Rows are stored without trailing zeros so that equal monomials compare equal.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::RationalFunction;
use crate::tate::{expand_rational_tate, TateElement};

pub type ExpTable = Vec<Vec<u32>>;

fn normalize(mut t: ExpTable) -> ExpTable {
    for row in t.iter_mut() {
        while row.last() == Some(&0) {
            row.pop();
        }
    }
    t
}

#[derive(Clone, Debug)]
pub struct MuPolynomial {
    field: &'static Field,
    n: usize,
    terms: BTreeMap<ExpTable, RationalFunction>,
}

impl PartialEq for MuPolynomial {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field) && self.n == other.n && self.terms == other.terms
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    /// Every exponent is below `p`.
    Tame,
    /// No `μ^j(X)` with `j > 0` after removing a common shift.
    RegularByDepthZero,
    /// Multi-homogeneous for the grading `deg μ^i(X_l) = p^i`.
    CriticalCandidate,
    Unknown,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MuTermJson {
    pub exponents: ExpTable,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MuPolyJson {
    pub symbols: usize,
    pub terms: Vec<MuTermJson>,
}

impl MuPolynomial {
    pub fn zero(field: &'static Field, n: usize) -> Self {
        MuPolynomial { field, n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: RationalFunction) -> Self {
        Self::monomial(n, vec![vec![]; n], c)
    }

    pub fn monomial(n: usize, table: ExpTable, c: RationalFunction) -> Self {
        let mut p = Self::zero(c.field(), n);
        p.insert(normalize(table), c);
        p
    }

    /// `μ^j(X_l)`, `l` counted from 1.
    pub fn symbol(field: &'static Field, n: usize, l: usize, j: usize) -> Result<Self> {
        if l == 0 || l > n {
            return Err(Error::VariableOutOfRange(l));
        }
        let mut t = vec![vec![]; n];
        t[l - 1] = vec![0; j + 1];
        t[l - 1][j] = 1;
        Ok(Self::monomial(n, t, RationalFunction::one(field)))
    }

    fn insert(&mut self, table: ExpTable, c: RationalFunction) {
        let sum = match self.terms.remove(&table) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(table, sum);
        }
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn symbols(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpTable, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `j` with `μ^j(X_l)` present; `None` if no symbol occurs.
    pub fn depth(&self) -> Option<usize> {
        self.terms.keys().flat_map(|t| t.iter().map(|r| r.len())).filter(|&len| len > 0).max().map(|len| len - 1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.n = self.n.max(other.n);
        for (t, c) in &other.terms {
            out.insert(pad(t, out.n), c.clone());
        }
        out.terms = std::mem::take(&mut out.terms).into_iter().map(|(t, c)| (pad(&t, out.n), c)).collect();
        out
    }

    pub fn neg(&self) -> Self {
        MuPolynomial { terms: self.terms.iter().map(|(t, c)| (t.clone(), c.neg())).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n.max(other.n);
        let mut out = Self::zero(self.field, n);
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                let (ta, tb) = (pad(ta, n), pad(tb, n));
                let table = ta
                    .iter()
                    .zip(&tb)
                    .map(|(ra, rb)| {
                        let len = ra.len().max(rb.len());
                        (0..len).map(|j| ra.get(j).unwrap_or(&0) + rb.get(j).unwrap_or(&0)).collect()
                    })
                    .collect();
                out.insert(table, ca.mul(cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.n, RationalFunction::one(self.field));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `P^μ`: `μ` applied to every coefficient.
    pub fn twist_coefficients(&self) -> Self {
        MuPolynomial { terms: self.terms.iter().map(|(t, c)| (t.clone(), c.mu(1))).collect(), ..self.clone() }
    }

    /// `μ(P)`: every `μ`-index raised by one and the coefficients twisted.
    pub fn shift(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| {
                let t = t
                    .iter()
                    .map(|r| if r.is_empty() { vec![] } else { std::iter::once(0).chain(r.iter().copied()).collect() })
                    .collect();
                (t, c.mu(1))
            })
            .collect();
        MuPolynomial { terms, ..self.clone() }
    }

    /// Substitutes `μ^j(X_l) := μ^j(f_l)` and expands the coefficients.
    pub fn evaluate(&self, f: &[TateElement], n: i64) -> Result<TateElement> {
        if f.len() != self.n {
            return Err(Error::InvalidParameter(format!("expected {} arguments, got {}", self.n, f.len())));
        }
        let s = f.iter().map(|x| x.s()).max().unwrap_or(0);
        let parts: Vec<TateElement> = self
            .terms
            .par_iter()
            .map(|(table, c)| -> Result<TateElement> {
                let mut m = TateElement::one(self.field, s);
                for (l, row) in table.iter().enumerate() {
                    for (j, &e) in row.iter().enumerate() {
                        if e > 0 {
                            m = m.mul(&f[l].mu(j as u32).pow(e as u64));
                        }
                    }
                }
                let vm = m.valuation().unwrap_or(0);
                let coeff = expand_rational_tate(c, s, n - vm)?;
                Ok(coeff.mul_capped(&m, Some(n)))
            })
            .collect::<Result<_>>()?;
        Ok(parts.iter().fold(TateElement::zero(self.field, s), |acc, x| acc.add(x)))
    }

    pub fn classify(&self) -> Result<Classification> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let p = self.field.p();
        let exps = || self.terms.keys().flat_map(|t| t.iter().flat_map(|r| r.iter().copied()));
        let lowest = self
            .terms
            .keys()
            .flat_map(|t| t.iter().filter_map(|r| r.iter().position(|&e| e > 0)))
            .min();
        let effective_depth = match (self.depth(), lowest) {
            (Some(d), Some(lo)) => d - lo,
            _ => 0,
        };
        if effective_depth == 0 {
            return Ok(Classification::RegularByDepthZero);
        }
        if exps().all(|e| e < p) {
            return Ok(Classification::Tame);
        }
        let weights = |t: &ExpTable| -> Vec<u64> {
            t.iter().map(|r| r.iter().enumerate().map(|(j, &e)| e as u64 * (p as u64).pow(j as u32)).sum()).collect()
        };
        let mut ws = self.terms.keys().map(|t| weights(&pad(t, self.n)));
        let first = ws.next().expect("nonzero");
        if ws.all(|w| w == first) {
            return Ok(Classification::CriticalCandidate);
        }
        Ok(Classification::Unknown)
    }

    /// Normal form modulo `(X^{p^k} - μ^k(X))`: carries `μ^j(X)^p ↦ μ^{j+1}(X)`,
    /// lowest index first, until every exponent is below `p`.
    pub fn reduce_mod_p(&self) -> Result<Self> {
        if self.n != 1 {
            return Err(Error::TooManyVariables { max: 1, got: self.n });
        }
        let p = self.field.p();
        let mut out = Self::zero(self.field, 1);
        for (t, c) in &self.terms {
            let mut row = t[0].clone();
            let mut j = 0;
            while j < row.len() {
                if row[j] >= p {
                    let carry = row[j] / p;
                    row[j] %= p;
                    if j + 1 == row.len() {
                        row.push(0);
                    }
                    row[j + 1] += carry;
                }
                j += 1;
            }
            out.insert(normalize(vec![row]), c.clone());
        }
        Ok(out)
    }

    pub fn to_json(&self) -> MuPolyJson {
        MuPolyJson {
            symbols: self.n,
            terms: self.terms.iter().map(|(t, c)| MuTermJson { exponents: t.clone(), coeff: c.to_string() }).collect(),
        }
    }

    pub fn from_json(field: &'static Field, j: &MuPolyJson) -> Result<Self> {
        let mut p = Self::zero(field, j.symbols);
        for t in &j.terms {
            if t.exponents.len() != j.symbols {
                return Err(Error::Parse("exponent table has the wrong number of rows".into()));
            }
            p.insert(normalize(t.exponents.clone()), RationalFunction::parse(field, &t.coeff)?);
        }
        Ok(p)
    }

    /// Parses `coeff * X1^a * m(X1)^b * m2(X2)^c ± …`.
    pub fn parse(field: &'static Field, n: usize, text: &str) -> Result<Self> {
        let mut out = Self::zero(field, n);
        for (sign, term) in split_top(text, &['+', '-']) {
            let mut table = vec![vec![]; n];
            let mut coeff_parts = Vec::new();
            for factor in split_top(&term, &['*']).into_iter().map(|(_, f)| f) {
                match parse_symbol(&factor)? {
                    Some((l, j, e)) => {
                        if l == 0 || l > n {
                            return Err(Error::VariableOutOfRange(l));
                        }
                        let row: &mut Vec<u32> = &mut table[l - 1];
                        if row.len() <= j {
                            row.resize(j + 1, 0);
                        }
                        row[j] += e;
                    }
                    None => coeff_parts.push(factor),
                }
            }
            let mut c = if coeff_parts.is_empty() {
                RationalFunction::one(field)
            } else {
                RationalFunction::parse(field, &coeff_parts.join("*"))?
            };
            if sign == '-' {
                c = c.neg();
            }
            out.insert(normalize(table), c);
        }
        Ok(out)
    }
}

fn pad(t: &ExpTable, n: usize) -> ExpTable {
    let mut t = t.clone();
    t.resize(n, vec![]);
    t
}

/// Splits at top-level separators; each piece carries the separator before it.
fn split_top(text: &str, seps: &[char]) -> Vec<(char, String)> {
    let mut out = Vec::new();
    let (mut depth, mut cur, mut sign) = (0i32, String::new(), '+');
    let mut prev_significant: Option<char> = None;
    for ch in text.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        // a sign right after '^', '*' or '/' belongs to the operand
        let unary = ch == '-' && matches!(prev_significant, Some('^') | Some('*') | Some('/'));
        if depth == 0 && seps.contains(&ch) && !unary {
            if !cur.trim().is_empty() {
                out.push((sign, cur.trim().to_string()));
            }
            cur.clear();
            sign = ch;
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev_significant = Some(ch);
        }
    }
    if !cur.trim().is_empty() {
        out.push((sign, cur.trim().to_string()));
    }
    out
}

/// `X3^2` → `(3, 0, 2)`, `m(X1)` → `(1, 1, 1)`, `m2(X1)^4` → `(1, 2, 4)`.
fn parse_symbol(f: &str) -> Result<Option<(usize, usize, u32)>> {
    let f = f.trim();
    let (base, exp) = match f.rfind('^') {
        Some(i) if !f[i..].contains(')') && (f.starts_with('X') || f.starts_with('m')) => (&f[..i], Some(&f[i + 1..])),
        _ => (f, None),
    };
    let parse_num = |s: &str| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad index in {f}")));
    let sym = if let Some(rest) = base.strip_prefix('X') {
        if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
            return Ok(None);
        }
        (parse_num(rest)?, 0)
    } else if let Some(rest) = base.strip_prefix('m') {
        let Some(open) = rest.find('(') else { return Ok(None) };
        let j = if open == 0 { 1 } else { parse_num(&rest[..open])? };
        let inner = rest[open + 1..].strip_suffix(')').ok_or_else(|| Error::Parse(format!("unclosed μ in {f}")))?;
        let l = inner.trim().strip_prefix('X').ok_or_else(|| Error::Parse(format!("expected X in {f}")))?;
        (parse_num(l)?, j)
    } else {
        return Ok(None);
    };
    let e = match exp {
        Some(e) => e.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in {f}")))?,
        None => 1,
    };
    Ok(Some((sym.0, sym.1, e)))
}

impl fmt::Display for MuPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (t, c) in &self.terms {
            let mut factors = Vec::new();
            let coeff = c.to_string();
            let one = RationalFunction::one(self.field);
            for (l, row) in t.iter().enumerate() {
                for (j, &e) in row.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let base = match j {
                        0 => format!("X{}", l + 1),
                        1 => format!("m(X{})", l + 1),
                        _ => format!("m{j}(X{})", l + 1),
                    };
                    factors.push(if e == 1 { base } else { format!("{base}^{e}") });
                }
            }
            if factors.is_empty() || *c != one {
                factors.insert(0, if coeff.contains(['+', ' ']) && !coeff.starts_with('(') { format!("({coeff})") } else { coeff });
            }
            parts.push(factors.join(" * "));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::omega;

    fn f3() -> &'static Field {
        Field::get(3, 1).unwrap()
    }

    fn mp(s: &str) -> MuPolynomial {
        MuPolynomial::parse(f3(), 1, s).unwrap()
    }

    #[test]
    fn omega_relation_is_tame_and_vanishes() {
        let f = f3();
        let p = mp("m(X1) - (t1 - θ) * X1");
        assert_eq!(p.classify().unwrap(), Classification::Tame);
        let w = omega(f, 1, 1, 30).unwrap();
        assert!(p.evaluate(&[w.clone()], 20).unwrap().is_zero());
        // Z(P^μ) = μ(Z(P)) and Z(μ(P)) = Z(P)
        assert!(p.twist_coefficients().evaluate(&[w.mu(1)], 20).unwrap().is_zero());
        let shifted = p.shift();
        assert_eq!(shifted, mp("m2(X1) - (t1 - θ^3) * m(X1)"));
        assert_eq!(shifted.depth(), Some(2));
        assert!(shifted.evaluate(&[w], 20).unwrap().is_zero());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(mp("m(X1) - X1^3").classify().unwrap(), Classification::CriticalCandidate);
        assert_eq!(mp("X1^2 + θ*X1 + 1").classify().unwrap(), Classification::RegularByDepthZero);
        assert_eq!(mp("m(X1)^4 - X1").classify().unwrap(), Classification::Unknown);
        assert!(MuPolynomial::zero(f3(), 1).classify().is_err());
    }

    #[test]
    fn frobenius_polynomial_vanishes_on_constants() {
        let f = Field::get(3, 2).unwrap();
        let p = MuPolynomial::parse(f, 1, "m(X1) - X1^3").unwrap();
        for c in f.elements() {
            let x = TateElement::from_series(0, crate::LaurentSeries::constant(f, c));
            assert!(p.evaluate(&[x], 10).unwrap().is_zero());
        }
    }

    #[test]
    fn reduction_and_text() {
        assert_eq!(mp("X1^4").reduce_mod_p().unwrap(), mp("X1 * m(X1)"));
        assert_eq!(mp("X1^9 + m(X1)^3").reduce_mod_p().unwrap(), mp("2*m2(X1)"));
        let p = mp("(t1 - θ) * X1^2 * m(X1) + 2*m3(X1)");
        assert_eq!(mp(&p.to_string()), p);
        let j = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(MuPolynomial::from_json(f3(), &serde_json::from_str(&j).unwrap()).unwrap(), p);
    }
}
