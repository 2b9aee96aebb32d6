//! Finite fields 𝔽_p ⊂ 𝔽_q ⊂ 𝔽_{q²}.
//!
//! Everything is table driven: 𝔽_{q²} is built once per `(p, e)` as
//! `𝔽_p[g]/(M(g))` with `M` the least monic irreducible of degree `2e`
//! (coefficient vectors compared as base-`p` integers, constant term
//! least significant). An element is stored as the integer
//! `c_0 + c_1 p + … + c_{2e-1} p^{2e-1}` of its coordinates in the basis
//! `1, g, …, g^{2e-1}`; that integer is also the canonical ordering used
//! for deterministic choices such as [`Field::zeta_ram`].
//!
//! 𝔽_q is the subfield fixed by `x ↦ x^q`. Fields are interned and live
//! for the whole process, so a `&'static Field` can be copied freely.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported `q²`; element indices fit in a byte.
pub const MAX_FIELD_ORDER: u32 = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(pub u8);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    size: usize,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    frob: Vec<u8>,
    subfield: Vec<Fe>,
    subfield_pos: Vec<u8>,
    zeta_ram: Fe,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field(p={}, e={}, q={})", self.p, self.e, self.q)
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn registry() -> &'static Mutex<HashMap<(u32, u32), &'static Field>> {
    static REG: OnceLock<Mutex<HashMap<(u32, u32), &'static Field>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Remainder of `a` modulo the monic `m` over 𝔽_p (coefficients low to high).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (k, &mk) in m.iter().enumerate() {
                r[shift + k] = (r[shift + k] + p * p - lead * mk % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn digits(mut x: u32, p: u32, n: usize) -> Vec<u32> {
    let mut d = vec![0; n];
    for slot in d.iter_mut() {
        *slot = x % p;
        x /= p;
    }
    d
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    for deg in 1..=n / 2 {
        // every monic polynomial of degree `deg`
        for idx in 0..p.pow(deg as u32) {
            let mut g = digits(idx, p, deg);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Returns the interned field for characteristic `p` and `q = p^e`.
    pub fn get(p: u32, e: u32) -> Result<&'static Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("p = {p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidField("e must be positive".into()));
        }
        let size = (p as u64).checked_pow(2 * e).unwrap_or(u64::MAX);
        if size > MAX_FIELD_ORDER as u64 {
            return Err(Error::InvalidField(format!(
                "q² = {size} exceeds the supported maximum {MAX_FIELD_ORDER}"
            )));
        }
        let mut reg = registry().lock().expect("field registry poisoned");
        if let Some(f) = reg.get(&(p, e)) {
            return Ok(f);
        }
        let field: &'static Field = Box::leak(Box::new(Field::build(p, e)));
        reg.insert((p, e), field);
        Ok(field)
    }

    /// Convenience constructor from `q`.
    pub fn for_q(q: u32) -> Result<&'static Field> {
        if q < 2 {
            return Err(Error::InvalidField(format!("q = {q}")));
        }
        let p = (2..=q).find(|d| q % d == 0).unwrap();
        let mut e = 0;
        let mut r = q;
        while r % p == 0 {
            r /= p;
            e += 1;
        }
        if r != 1 {
            return Err(Error::InvalidField(format!("q = {q} is not a prime power")));
        }
        Field::get(p, e)
    }

    fn build(p: u32, e: u32) -> Field {
        let n = 2 * e as usize;
        let q = p.pow(e);
        let size = (q * q) as usize;

        let mut modulus = None;
        for idx in 0..p.pow(n as u32) {
            let mut f = digits(idx, p, n);
            f.push(1);
            if is_irreducible(&f, p) {
                modulus = Some(f);
                break;
            }
        }
        let modulus = modulus.expect("an irreducible polynomial exists in every degree");

        let mut add = vec![0u8; size * size];
        let mut mul = vec![0u8; size * size];
        let mut neg = vec![0u8; size];
        let all: Vec<Vec<u32>> = (0..size as u32).map(|x| digits(x, p, n)).collect();
        for a in 0..size {
            neg[a] = undigits(&all[a].iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p) as u8;
            for b in 0..size {
                let s: Vec<u32> = all[a].iter().zip(&all[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * size + b] = undigits(&s, p) as u8;
                let mut prod = vec![0u32; 2 * n - 1];
                for (i, &x) in all[a].iter().enumerate() {
                    for (j, &y) in all[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let r = poly_rem(&prod, &modulus, p);
                mul[a * size + b] = undigits(&r, p) as u8;
            }
        }
        let mut inv = vec![0u8; size];
        for a in 1..size {
            inv[a] = (1..size).find(|&b| mul[a * size + b] == 1).unwrap() as u8;
        }
        let pow = |mut x: usize, mut k: u64| -> usize {
            let mut acc = 1usize;
            while k > 0 {
                if k & 1 == 1 {
                    acc = mul[acc * size + x] as usize;
                }
                x = mul[x * size + x] as usize;
                k >>= 1;
            }
            acc
        };
        let frob: Vec<u8> = (0..size).map(|x| pow(x, p as u64) as u8).collect();
        let subfield: Vec<Fe> = (0..size).filter(|&x| pow(x, q as u64) == x).map(|x| Fe(x as u8)).collect();
        let mut subfield_pos = vec![u8::MAX; size];
        for (i, x) in subfield.iter().enumerate() {
            subfield_pos[x.index()] = i as u8;
        }
        let minus_one = neg[1] as usize;
        let zeta_ram = (1..size).find(|&x| pow(x, (q - 1) as u64) == minus_one).map(|x| Fe(x as u8));

        Field {
            p,
            e,
            q,
            size,
            modulus,
            add,
            mul,
            neg,
            inv,
            frob,
            subfield,
            subfield_pos,
            zeta_ram: zeta_ram.expect("𝔽_{q²} contains a (q-1)-th root of -1"),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of elements of 𝔽_{q²}.
    pub fn order(&self) -> usize {
        self.size
    }

    /// Denominator of the exponent lattice `(1/(q-1))·ℤ`.
    pub fn lattice_den(&self) -> i64 {
        (self.q - 1) as i64
    }

    /// Monic modulus of 𝔽_{q²} over 𝔽_p, coefficients low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.add[a.index() * self.size + b.index()])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.mul[a.index() * self.size + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.index()])
    }

    #[inline]
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        (!a.is_zero()).then(|| Fe(self.inv[a.index()]))
    }

    pub fn pow(&self, mut x: Fe, mut k: u64) -> Fe {
        let mut acc = Fe::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            k >>= 1;
        }
        acc
    }

    /// The image of an integer in 𝔽_p ⊂ 𝔽_{q²}.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u8)
    }

    /// `x^{p^m}`; negative `m` takes the unique `p^{|m|}`-th root.
    pub fn frobenius(&self, x: Fe, m: i32) -> Fe {
        // Frobenius has order 2e on 𝔽_{q²}
        let period = 2 * self.e as i32;
        let steps = m.rem_euclid(period);
        let mut y = x;
        for _ in 0..steps {
            y = Fe(self.frob[y.index()]);
        }
        y
    }

    /// Elements of 𝔽_q in canonical (index) order.
    pub fn subfield(&self) -> &[Fe] {
        &self.subfield
    }

    pub fn in_subfield(&self, x: Fe) -> bool {
        self.subfield_pos[x.index()] != u8::MAX
    }

    /// Position of `x` in [`Field::subfield`].
    pub fn subfield_position(&self, x: Fe) -> Option<usize> {
        let pos = self.subfield_pos[x.index()];
        (pos != u8::MAX).then_some(pos as usize)
    }

    /// The distinguished `ζ` with `ζ^{q-1} = -1`: least such element in
    /// index order. For even `q` this is `1`.
    pub fn zeta_ram(&self) -> Fe {
        self.zeta_ram
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.size).map(|x| Fe(x as u8))
    }

    /// Coordinates over 𝔽_p in the basis `1, g, …, g^{2e-1}`.
    pub fn coordinates(&self, x: Fe) -> Vec<u32> {
        digits(x.0 as u32, self.p, 2 * self.e as usize)
    }

    /// Serialized form `c0+c1*g+c2*g^2…` listing every coordinate.
    pub fn format_element(&self, x: Fe) -> String {
        let mut s = String::new();
        for (i, c) in self.coordinates(x).iter().enumerate() {
            match i {
                0 => s.push_str(&c.to_string()),
                1 => s.push_str(&format!("+{c}*g")),
                _ => s.push_str(&format!("+{c}*g^{i}")),
            }
        }
        s
    }

    /// Short human form: a bare digit for elements of 𝔽_p.
    pub fn display_element(&self, x: Fe) -> String {
        if (x.0 as u32) < self.p {
            x.0.to_string()
        } else {
            format!("[{}]", self.format_element(x))
        }
    }

    /// Parses either the full `c0+c1*g…` form or a bare 𝔽_p digit.
    pub fn parse_element(&self, s: &str) -> Result<Fe> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        let n = 2 * self.e as usize;
        let mut coords = vec![0u32; n];
        for part in s.split('+') {
            let part = part.trim();
            let (c, power) = if let Some((c, g)) = part.split_once('*') {
                let power = match g.trim() {
                    "g" => 1,
                    other => other
                        .strip_prefix("g^")
                        .and_then(|k| k.parse::<usize>().ok())
                        .ok_or_else(|| Error::Parse(format!("bad field term `{part}`")))?,
                };
                (c, power)
            } else {
                (part, 0)
            };
            let c: u32 = c.trim().parse().map_err(|_| Error::Parse(format!("bad digit in `{part}`")))?;
            if c >= self.p || power >= n {
                return Err(Error::Parse(format!("field term `{part}` out of range")));
            }
            coords[power] = (coords[power] + c) % self.p;
        }
        Ok(Fe(undigits(&coords, self.p) as u8))
    }

    pub fn config(&'static self) -> FieldConfig {
        FieldConfig {
            p: self.p,
            e: self.e,
            q: self.q,
            modulus: self.modulus.clone(),
            zeta_ram: self.format_element(self.zeta_ram),
        }
    }
}

/// Serializable description of a field; the modulus pins down the basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    pub modulus: Vec<u32>,
    pub zeta_ram: String,
}

impl FieldConfig {
    pub fn field(&self) -> Result<&'static Field> {
        let f = Field::get(self.p, self.e)?;
        if f.modulus != self.modulus {
            return Err(Error::InvalidField("modulus differs from the canonical one".into()));
        }
        Ok(f)
    }
}

/// Free-function form of [`Field::frobenius`].
pub fn frobenius(field: &Field, x: Fe, m: i32) -> Fe {
    field.frobenius(x, m)
}

/// Free-function form of [`Field::zeta_ram`].
pub fn zeta_ram(field: &Field) -> Fe {
    field.zeta_ram()
}

/// Monic polynomials of a fixed degree over 𝔽_q, coefficients low to high.
///
/// The lower coefficients `(c_0, …, c_{d-1})` run through base-`q`
/// counting order, `c_0` least significant, each digit interpreted through
/// [`Field::subfield`].
pub struct MonicIter {
    field: &'static Field,
    degree: usize,
    next: u64,
    count: u64,
}

impl Iterator for MonicIter {
    type Item = Vec<Fe>;

    fn next(&mut self) -> Option<Vec<Fe>> {
        if self.next >= self.count {
            return None;
        }
        let v = monic_from_index(self.field, self.degree, self.next);
        self.next += 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = (self.count - self.next) as usize;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for MonicIter {}

pub fn enumerate_monic(field: &'static Field, d: i64) -> Result<MonicIter> {
    if d < 0 {
        return Err(Error::NegativeDegree(d));
    }
    Ok(MonicIter {
        field,
        degree: d as usize,
        next: 0,
        count: (field.q() as u64).pow(d as u32),
    })
}

/// The `index`-th monic polynomial of degree `d` in enumeration order.
pub fn monic_from_index(field: &Field, d: usize, mut index: u64) -> Vec<Fe> {
    let q = field.q() as u64;
    let mut coeffs = Vec::with_capacity(d + 1);
    for _ in 0..d {
        coeffs.push(field.subfield()[(index % q) as usize]);
        index /= q;
    }
    coeffs.push(Fe::ONE);
    coeffs
}

/// `binom(m, n) mod p` by Lucas' theorem.
pub fn binom_mod_p(mut m: u64, mut n: u64, p: u32) -> u32 {
    let p = p as u64;
    let mut acc = 1u64;
    while n > 0 || m > 0 {
        let (mi, ni) = (m % p, n % p);
        if ni > mi {
            return 0;
        }
        // small binomial mi choose ni, both < p
        let mut b = 1u64;
        for k in 0..ni {
            b = b * (mi - k) / (k + 1);
        }
        acc = acc * (b % p) % p;
        m /= p;
        n /= p;
    }
    acc as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_binom(m: u64, n: u64) -> u128 {
        if n > m {
            return 0;
        }
        let mut b: u128 = 1;
        for k in 0..n {
            b = b * (m - k) as u128 / (k + 1) as u128;
        }
        b
    }

    #[test]
    fn frobenius_fixes_one_and_prime_field() {
        let f = Field::get(3, 1).unwrap();
        assert_eq!(f.frobenius(Fe::ONE, 5), Fe::ONE);
        assert_eq!(f.frobenius(Fe(2), 1), Fe(2));
    }

    #[test]
    fn frobenius_round_trip_exhaustive() {
        for (p, e) in [(2, 1), (3, 1), (5, 1), (2, 2), (7, 1), (3, 2)] {
            let f = Field::get(p, e).unwrap();
            for x in f.elements() {
                assert_eq!(f.frobenius(f.frobenius(x, -1), 1), x);
                assert_eq!(f.frobenius(f.frobenius(x, 1), -1), x);
            }
        }
    }

    #[test]
    fn frobenius_is_a_ring_morphism() {
        for (p, e) in [(2, 1), (3, 1), (5, 1), (2, 2)] {
            let f = Field::get(p, e).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let fa = f.frobenius(a, 1);
                    let fb = f.frobenius(b, 1);
                    assert_eq!(f.frobenius(f.add(a, b), 1), f.add(fa, fb));
                    assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(fa, fb));
                }
            }
        }
    }

    #[test]
    fn zeta_ram_values() {
        let f2 = Field::get(2, 1).unwrap();
        assert_eq!(f2.zeta_ram(), Fe::ONE);
        for (p, e) in [(3, 1), (5, 1), (2, 2), (7, 1), (3, 2), (13, 1)] {
            let f = Field::get(p, e).unwrap();
            let z = f.zeta_ram();
            let q = f.q() as u64;
            assert_eq!(f.add(f.pow(z, q - 1), Fe::ONE), Fe::ZERO);
            // least in canonical order
            for x in f.elements().take_while(|&x| x < z) {
                assert_ne!(f.add(f.pow(x, q - 1), Fe::ONE), Fe::ZERO);
            }
        }
        let f3 = Field::get(3, 1).unwrap();
        let z = f3.zeta_ram();
        assert_eq!(f3.mul(z, z), f3.from_int(-1));
        assert_eq!(f3.pow(z, 4), Fe::ONE);
    }

    #[test]
    fn field_axioms_small() {
        let f = Field::get(2, 2).unwrap();
        for a in f.elements() {
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
            }
            assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
        }
        assert_eq!(f.subfield().len(), 4);
        assert!(f.inv(Fe::ZERO).is_none());
    }

    #[test]
    fn monic_enumeration() {
        let f3 = Field::get(3, 1).unwrap();
        assert_eq!(enumerate_monic(f3, 0).unwrap().collect::<Vec<_>>(), vec![vec![Fe::ONE]]);
        let d1: Vec<_> = enumerate_monic(f3, 1).unwrap().collect();
        assert_eq!(d1, vec![vec![Fe(0), Fe(1)], vec![Fe(1), Fe(1)], vec![Fe(2), Fe(1)]]);
        let f2 = Field::get(2, 1).unwrap();
        let d2: Vec<_> = enumerate_monic(f2, 2).unwrap().collect();
        let expect = [[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]];
        assert_eq!(d2.len(), 4);
        for (got, want) in d2.iter().zip(expect) {
            assert_eq!(got.iter().map(|x| x.0).collect::<Vec<_>>(), want.to_vec());
        }
        for f in [f2, f3] {
            for d in 0..=6 {
                let all: Vec<_> = enumerate_monic(f, d).unwrap().collect();
                assert_eq!(all.len() as u64, (f.q() as u64).pow(d as u32));
                let set: std::collections::HashSet<_> = all.iter().collect();
                assert_eq!(set.len(), all.len());
            }
        }
        assert!(matches!(enumerate_monic(f3, -1), Err(Error::NegativeDegree(-1))));
    }

    #[test]
    fn monic_over_non_prime_q_uses_subfield() {
        let f4 = Field::get(2, 2).unwrap();
        for a in enumerate_monic(f4, 2).unwrap() {
            assert!(a.iter().all(|&c| f4.in_subfield(c)));
        }
    }

    #[test]
    fn lucas_matches_integer_binomials() {
        for p in [2u32, 3, 5] {
            for m in 0..40u64 {
                for n in 0..=m + 1 {
                    assert_eq!(binom_mod_p(m, n, p) as u128, brute_binom(m, n) % p as u128, "{m} {n} {p}");
                }
            }
        }
    }

    #[test]
    fn element_format_round_trip() {
        let f = Field::get(3, 1).unwrap();
        for x in f.elements() {
            assert_eq!(f.parse_element(&f.format_element(x)).unwrap(), x);
        }
        assert_eq!(f.format_element(f.zeta_ram()), "0+1*g");
        assert_eq!(f.parse_element("2").unwrap(), Fe(2));
        assert!(f.parse_element("3").is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Field::get(4, 1).is_err());
        assert!(Field::get(17, 1).is_err());
        assert!(Field::for_q(6).is_err());
        assert_eq!(Field::for_q(9).unwrap().e(), 2);
    }
}
