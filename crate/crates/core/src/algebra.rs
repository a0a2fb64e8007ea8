//! Exact arithmetic over F2[U,V], its quotient by (UV), and integer Laurent
//! polynomials in one variable.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which ring a coefficient lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    /// F2[U,V].
    Full,
    /// F2[U,V]/(UV).
    UvZero,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Full => write!(f, "FULL"),
            Mode::UvZero => write!(f, "UVZERO"),
        }
    }
}

/// The monomial U^u V^v.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mono {
    pub u: u32,
    pub v: u32,
}

impl Mono {
    pub const ONE: Mono = Mono { u: 0, v: 0 };

    pub fn new(u: u32, v: u32) -> Self {
        Mono { u, v }
    }

    pub fn is_unit(self) -> bool {
        self.u == 0 && self.v == 0
    }

    pub fn is_mixed(self) -> bool {
        self.u > 0 && self.v > 0
    }

    /// Product, or `None` when it vanishes in `mode`.
    pub fn mul(self, other: Mono, mode: Mode) -> Option<Mono> {
        let m = Mono::new(self.u + other.u, self.v + other.v);
        if mode == Mode::UvZero && m.is_mixed() {
            None
        } else {
            Some(m)
        }
    }

    /// Exchange the roles of U and V.
    pub fn swap(self) -> Mono {
        Mono::new(self.v, self.u)
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U^{} V^{}", self.u, self.v)
    }
}

/// An element of F2[U,V] or F2[U,V]/(UV): a set of monomials with coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingElem {
    terms: BTreeSet<Mono>,
    mode: Mode,
}

impl RingElem {
    pub fn zero(mode: Mode) -> Self {
        RingElem {
            terms: BTreeSet::new(),
            mode,
        }
    }

    pub fn one(mode: Mode) -> Self {
        Self::mono(Mono::ONE, mode)
    }

    /// A single monomial; mixed monomials collapse to zero in the quotient.
    pub fn mono(m: Mono, mode: Mode) -> Self {
        let mut r = Self::zero(mode);
        if !(mode == Mode::UvZero && m.is_mixed()) {
            r.terms.insert(m);
        }
        r
    }

    pub fn u_pow(k: u32, mode: Mode) -> Self {
        Self::mono(Mono::new(k, 0), mode)
    }

    pub fn v_pow(k: u32, mode: Mode) -> Self {
        Self::mono(Mono::new(0, k), mode)
    }

    pub fn from_monos<I: IntoIterator<Item = Mono>>(monos: I, mode: Mode) -> Self {
        let mut r = Self::zero(mode);
        for m in monos {
            r.toggle(m);
        }
        r
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = Mono> + '_ {
        self.terms.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single term, if there is exactly one.
    pub fn as_mono(&self) -> Option<Mono> {
        if self.terms.len() == 1 {
            self.terms.iter().next().copied()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_mono() == Some(Mono::ONE)
    }

    pub fn has_unit_term(&self) -> bool {
        self.terms.contains(&Mono::ONE)
    }

    /// Add a monomial (char 2: adding a present term removes it).
    pub fn toggle(&mut self, m: Mono) {
        if self.mode == Mode::UvZero && m.is_mixed() {
            return;
        }
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &RingElem) {
        for m in other.terms() {
            self.toggle(m);
        }
    }

    pub fn mul_mono(&self, m: Mono) -> RingElem {
        let mut r = RingElem::zero(self.mode);
        for t in self.terms() {
            if let Some(p) = t.mul(m, self.mode) {
                r.toggle(p);
            }
        }
        r
    }

    /// Reinterpret in another ring; going to the quotient drops mixed terms.
    pub fn with_mode(&self, mode: Mode) -> RingElem {
        RingElem::from_monos(self.terms(), mode)
    }

    /// Ring automorphism exchanging U and V.
    pub fn swap_uv(&self) -> RingElem {
        RingElem::from_monos(self.terms().map(Mono::swap), self.mode)
    }

    /// Value at U = V = 0.
    pub fn constant_term(&self) -> bool {
        self.has_unit_term()
    }

    /// Formal partial derivative in U, with integer coefficients reduced mod 2.
    pub fn d_du(&self) -> RingElem {
        let mut r = RingElem::zero(self.mode);
        for t in self.terms() {
            if t.u % 2 == 1 {
                r.toggle(Mono::new(t.u - 1, t.v));
            }
        }
        r
    }

    /// Formal partial derivative in V, with integer coefficients reduced mod 2.
    pub fn d_dv(&self) -> RingElem {
        let mut r = RingElem::zero(self.mode);
        for t in self.terms() {
            if t.v % 2 == 1 {
                r.toggle(Mono::new(t.u, t.v - 1));
            }
        }
        r
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Sum in the same ring.
pub fn ring_add(x: &RingElem, y: &RingElem) -> Result<RingElem> {
    if x.mode != y.mode {
        return Err(Error::ModeMismatch);
    }
    let mut r = x.clone();
    r.add_assign(y);
    Ok(r)
}

/// Product in the same ring.
pub fn ring_mul(x: &RingElem, y: &RingElem) -> Result<RingElem> {
    if x.mode != y.mode {
        return Err(Error::ModeMismatch);
    }
    let mut r = RingElem::zero(x.mode);
    for a in x.terms() {
        for b in y.terms() {
            if let Some(p) = a.mul(b, x.mode) {
                r.toggle(p);
            }
        }
    }
    Ok(r)
}

/// Integer Laurent polynomial in t. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(c: i64, e: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(c, e);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (c, e) in terms {
            p.add_term(c, e);
        }
        p
    }

    pub fn add_term(&mut self, c: i64, e: i64) {
        if c == 0 {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.coeffs.remove(&e);
        }
    }

    pub fn coeff(&self, e: i64) -> i64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// (exponent, coefficient) pairs, exponents descending.
    pub fn terms_desc(&self) -> Vec<(i64, i64)> {
        self.coeffs.iter().rev().map(|(&e, &c)| (e, c)).collect()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn is_symmetric(&self) -> bool {
        self.coeffs.iter().all(|(&e, &c)| self.coeff(-e) == c)
    }

    /// Multiply by t^k.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    /// Substitute t ↦ t^k.
    pub fn substitute_power(&self, k: i64) -> LaurentPoly {
        LaurentPoly::from_terms(self.coeffs.iter().map(|(&e, &c)| (c, e * k)))
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (&e, &c) in &other.coeffs {
            r.add_term(-c, e);
        }
        r
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        let (dtop, dlead) = d.coeffs.iter().next_back().map(|(&e, &c)| (e, c))?;
        let Some(lo) = self.min_exp() else {
            return Some(LaurentPoly::zero());
        };
        let lo = lo - d.min_exp()?;
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while let Some((&e, &c)) = rem.coeffs.iter().next_back() {
            let qe = e - dtop;
            if qe < lo || c % dlead != 0 {
                return None;
            }
            let qc = c / dlead;
            quot.add_term(qc, qe);
            rem = rem.sub(&laurent_mul(&LaurentPoly::monomial(qc, qe), d));
        }
        Some(quot)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms_desc()
            .into_iter()
            .map(|(e, c)| format!("{c}*t^{e}"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl std::str::FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = LaurentPoly::zero();
        for tok in s.split_whitespace() {
            if tok == "0" {
                continue;
            }
            let bad = || Error::Parse(format!("bad Laurent term {tok:?}"));
            let (c, e) = tok.split_once("*t^").ok_or_else(bad)?;
            let c: i64 = c.parse().map_err(|_| bad())?;
            let e: i64 = e.parse().map_err(|_| bad())?;
            p.add_term(c, e);
        }
        Ok(p)
    }
}

/// Convolution product.
pub fn laurent_mul(p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
    let mut r = LaurentPoly::zero();
    for (&e1, &c1) in &p.coeffs {
        for (&e2, &c2) in &q.coeffs {
            r.add_term(c1 * c2, e1 + e2);
        }
    }
    r
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Symmetrized Alexander polynomial of the (p,q) torus knot.
pub fn alexander_torus(p: i64, q: i64) -> Result<LaurentPoly> {
    if p < 2 || q == 0 || gcd(p, q) != 1 {
        return Err(Error::InvalidTorus { p, q });
    }
    let q = q.abs();
    // (t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1))
    let minus_one = |k: i64| LaurentPoly::from_terms([(1, k), (-1, 0)]);
    let num = laurent_mul(&minus_one(p * q), &minus_one(1));
    let den = laurent_mul(&minus_one(p), &minus_one(q));
    let quot = num.div_exact(&den).ok_or(Error::InvalidTorus { p, q })?;
    let top = quot.max_exp().unwrap_or(0);
    Ok(quot.shift(-top / 2))
}
