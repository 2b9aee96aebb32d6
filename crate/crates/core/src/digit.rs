//! The digit ring `R⟨Y⟩`, spanned by `⟨Y⟩^i = ∏_j Y_j^{i_j}` where `i_j` are
//! the base-`p` digits of `i`, and its map onto tame μ-polynomials.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::mupoly::MuPolynomial;
use crate::poly::RationalFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoeffRing {
    /// `𝔽_{q²}`.
    Constants,
    /// `𝔽_q(t)`.
    RationalFunctions,
}

#[derive(Clone, Debug)]
pub struct DigitPolynomial {
    field: &'static Field,
    ring: CoeffRing,
    terms: BTreeMap<u64, RationalFunction>,
}

impl PartialEq for DigitPolynomial {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field) && self.ring == other.ring && self.terms == other.terms
    }
}

/// Base-`p` digits, least significant first.
pub fn digits(mut i: u64, p: u32) -> Vec<u32> {
    let mut out = Vec::new();
    while i > 0 {
        out.push((i % p as u64) as u32);
        i /= p as u64;
    }
    out
}

pub fn from_digits(d: &[u32], p: u32) -> u64 {
    d.iter().rev().fold(0u64, |acc, &x| acc * p as u64 + x as u64)
}

/// Digits of `k = i + j` through `i_n + j_n + b_{n-1} = k_n + p·b_n`.
pub fn carry_add(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len().max(b.len()) + 1);
    let mut carry = 0;
    for n in 0..a.len().max(b.len()) {
        let total = a.get(n).unwrap_or(&0) + b.get(n).unwrap_or(&0) + carry;
        out.push(total % p);
        carry = total / p;
    }
    if carry > 0 {
        out.push(carry);
    }
    out
}

impl DigitPolynomial {
    pub fn zero(field: &'static Field, ring: CoeffRing) -> Self {
        DigitPolynomial { field, ring, terms: BTreeMap::new() }
    }

    pub fn one(field: &'static Field, ring: CoeffRing) -> Self {
        let mut f = Self::zero(field, ring);
        f.terms.insert(0, RationalFunction::one(field));
        f
    }

    /// `c·⟨Y⟩^i`.
    pub fn monomial(ring: CoeffRing, i: u64, c: RationalFunction) -> Result<Self> {
        let mut f = Self::zero(c.field(), ring);
        f.insert(i, c)?;
        Ok(f)
    }

    fn insert(&mut self, i: u64, c: RationalFunction) -> Result<()> {
        if self.ring == CoeffRing::Constants && !(c.num().constant_value().is_some() && c.den().constant_value().is_some()) {
            return Err(Error::RingMismatch);
        }
        let sum = match self.terms.remove(&i) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(i, sum);
        }
        Ok(())
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &RationalFunction)> {
        self.terms.iter().map(|(i, c)| (*i, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring || !std::ptr::eq(self.field, other.field) {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.insert(*i, c.clone())?;
        }
        Ok(out)
    }

    /// Product through digit carries: `⟨Y⟩^i·⟨Y⟩^j = ⟨Y⟩^{i+j}`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let p = self.field.p();
        let mut out = Self::zero(self.field, self.ring);
        for (i, a) in &self.terms {
            let di = digits(*i, p);
            for (j, b) in &other.terms {
                let k = from_digits(&carry_add(&di, &digits(*j, p), p), p);
                out.insert(k, a.mul(b))?;
            }
        }
        Ok(out)
    }

    /// Coefficients of the image in `R[Z]`, indexed by the power of `Z`.
    pub fn to_rz(&self) -> BTreeMap<u64, RationalFunction> {
        self.terms.clone()
    }

    pub fn from_rz(field: &'static Field, ring: CoeffRing, coeffs: &BTreeMap<u64, RationalFunction>) -> Result<Self> {
        let mut out = Self::zero(field, ring);
        for (i, c) in coeffs {
            out.insert(*i, c.clone())?;
        }
        Ok(out)
    }

    /// `φ(⟨Y⟩^i) = X^{i_0} μ(X)^{i_1} ⋯`.
    pub fn phi_to_mu(&self) -> MuPolynomial {
        let p = self.field.p();
        self.terms.iter().fold(MuPolynomial::zero(self.field, 1), |acc, (i, c)| {
            acc.add(&MuPolynomial::monomial(1, vec![digits(*i, p)], c.clone()))
        })
    }
}

impl fmt::Display for DigitPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let p = self.field.p();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(i, c)| {
                let ys: Vec<String> = digits(*i, p)
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d > 0)
                    .map(|(j, &d)| if d == 1 { format!("Y{j}") } else { format!("Y{j}^{d}") })
                    .collect();
                let c = c.to_string();
                match (ys.is_empty(), c == "1") {
                    (true, _) => c,
                    (false, true) => ys.join("*"),
                    (false, false) => format!("({c})*{}", ys.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carries() {
        // Y0^2 · Y0^2 = Y0·Y1 at p = 3
        assert_eq!(carry_add(&[2], &[2], 3), vec![1, 1]);
        let f = Field::get(3, 1).unwrap();
        let one = RationalFunction::one(f);
        let y2 = DigitPolynomial::monomial(CoeffRing::Constants, 2, one.clone()).unwrap();
        let y4 = DigitPolynomial::monomial(CoeffRing::Constants, 4, one).unwrap();
        assert_eq!(y2.multiply(&y2).unwrap(), y4);
        assert_eq!(y4.to_string(), "Y0*Y1");
        assert_eq!(y2.multiply(&DigitPolynomial::one(f, CoeffRing::Constants)).unwrap(), y2);
    }

    #[test]
    fn ring_tags_must_match() {
        let f = Field::get(3, 1).unwrap();
        let a = DigitPolynomial::one(f, CoeffRing::Constants);
        let b = DigitPolynomial::one(f, CoeffRing::RationalFunctions);
        assert_eq!(a.multiply(&b), Err(Error::RingMismatch));
        let t = RationalFunction::parse(f, "t1").unwrap();
        assert!(DigitPolynomial::monomial(CoeffRing::Constants, 1, t).is_err());
    }

    #[test]
    fn phi_is_multiplicative_mod_p() {
        let f = Field::get(3, 1).unwrap();
        let one = RationalFunction::one(f);
        for i in 0..27u64 {
            for j in 0..27u64 {
                let a = DigitPolynomial::monomial(CoeffRing::Constants, i, one.clone()).unwrap();
                let b = DigitPolynomial::monomial(CoeffRing::Constants, j, one.clone()).unwrap();
                let lhs = a.phi_to_mu().mul(&b.phi_to_mu()).reduce_mod_p().unwrap();
                assert_eq!(lhs, a.multiply(&b).unwrap().phi_to_mu(), "i={i} j={j}");
            }
        }
    }
}
