//! Exact polynomials in the deformation parameters `λ`, `s` and `t`.
//!
//! Coefficients are arbitrary-precision integers. The `λ` exponent is stored
//! in half units so that `√λ` (the weight of a creation or annihilation step)
//! is an ordinary monomial; every moment returned by the engines has an
//! integral `λ` exponent, which [`MultiPoly::has_integral_lambda`] asserts.
//!
//! Text rendering uses the variables `l`, `s`, `t` with caret exponents, in
//! graded lexicographic order from the highest term down:
//! `l^3 + l^2*s + 2*l^2 + l`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("λ exponent {0}/2 is not integral and λ has no exact rational square root")]
    NonIntegralLambdaExponent(u32),
    #[error("invalid deformation parameters: {0}")]
    InvalidParams(String),
    #[error("malformed term record: {0}")]
    MalformedTerm(String),
}

/// A point `(λ, s, t)` with `λ > 0` and `0 < s, t ≤ 1`.
///
/// The limits `s → 0` and `t → 0` are not points of this type; they are taken
/// on the polynomial side with [`MultiPoly::specialize_zero`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformParams {
    lambda: BigRational,
    s: BigRational,
    t: BigRational,
}

impl DeformParams {
    pub fn new(lambda: BigRational, s: BigRational, t: BigRational) -> Result<Self, PolyError> {
        if !lambda.is_positive() {
            return Err(PolyError::InvalidParams(format!("λ = {lambda} must be positive")));
        }
        for (name, v) in [("s", &s), ("t", &t)] {
            if !v.is_positive() || *v > BigRational::one() {
                return Err(PolyError::InvalidParams(format!("{name} = {v} must lie in (0, 1]")));
            }
        }
        Ok(Self { lambda, s, t })
    }

    /// Convenience constructor from integer ratios `(num, den)`.
    pub fn from_ratios(lambda: (i64, i64), s: (i64, i64), t: (i64, i64)) -> Result<Self, PolyError> {
        let r = |(n, d): (i64, i64)| {
            if d == 0 {
                Err(PolyError::InvalidParams("zero denominator".into()))
            } else {
                Ok(BigRational::new(n.into(), d.into()))
            }
        };
        Self::new(r(lambda)?, r(s)?, r(t)?)
    }

    pub fn lambda(&self) -> &BigRational {
        &self.lambda
    }

    pub fn s(&self) -> &BigRational {
        &self.s
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }
}

/// Exponent triple `(λ^{half_lambda/2}, s^s, t^t)`.
///
/// Ordered graded-lexicographically: total degree (in half units, `λ`
/// counting `half_lambda / 2`) first, then `(λ, s, t)` lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub half_lambda: u32,
    pub s: u32,
    pub t: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        half_lambda: 0,
        s: 0,
        t: 0,
    };

    pub fn new(half_lambda: u32, s: u32, t: u32) -> Self {
        Self { half_lambda, s, t }
    }

    fn half_degree(&self) -> u64 {
        self.half_lambda as u64 + 2 * (self.s as u64 + self.t as u64)
    }

    fn mul(self, other: Monomial) -> Monomial {
        Monomial {
            half_lambda: self.half_lambda + other.half_lambda,
            s: self.s + other.s,
            t: self.t + other.t,
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.half_degree()
            .cmp(&other.half_degree())
            .then(self.half_lambda.cmp(&other.half_lambda))
            .then(self.s.cmp(&other.s))
            .then(self.t.cmp(&other.t))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `λ^{1/2}`, `s`, `t` with big-integer coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn term(m: Monomial, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c.into());
        p
    }

    /// `λ^k`.
    pub fn lambda_pow(k: u32) -> Self {
        Self::term(Monomial::new(2 * k, 0, 0), 1)
    }

    /// `λ^{1/2}`.
    pub fn sqrt_lambda() -> Self {
        Self::term(Monomial::new(1, 0, 0), 1)
    }

    pub fn s_pow(k: u32) -> Self {
        Self::term(Monomial::new(0, k, 0), 1)
    }

    pub fn t_pow(k: u32) -> Self {
        Self::term(Monomial::new(0, 0, k), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::ONE).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn has_integral_lambda(&self) -> bool {
        self.terms.keys().all(|m| m.half_lambda % 2 == 0)
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Whether any term carries a positive power of `s` (resp. `t`).
    pub fn mentions_s(&self) -> bool {
        self.terms.keys().any(|m| m.s > 0)
    }

    pub fn mentions_t(&self) -> bool {
        self.terms.keys().any(|m| m.t > 0)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact value at `v`. Half-integral `λ` exponents are accepted only when
    /// `λ` is the square of a rational.
    pub fn eval(&self, v: &DeformParams) -> Result<BigRational, PolyError> {
        let sqrt_lambda = exact_sqrt(&v.lambda);
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let lam = if m.half_lambda % 2 == 0 {
                pow_rat(&v.lambda, m.half_lambda / 2)
            } else {
                let r = sqrt_lambda
                    .as_ref()
                    .ok_or(PolyError::NonIntegralLambdaExponent(m.half_lambda))?;
                pow_rat(r, m.half_lambda)
            };
            total += BigRational::from_integer(c.clone()) * lam * pow_rat(&v.s, m.s) * pow_rat(&v.t, m.t);
        }
        Ok(total)
    }

    /// Floating-point value; `0^0 = 1`, so `s = 0` or `t = 0` evaluate the
    /// corresponding limit.
    pub fn eval_f64(&self, lambda: f64, s: f64, t: f64) -> f64 {
        let sl = lambda.sqrt();
        self.terms
            .iter()
            .map(|(m, c)| {
                let c: f64 = c.to_string().parse().unwrap_or(f64::NAN);
                c * sl.powi(m.half_lambda as i32) * s.powi(m.s as i32) * t.powi(m.t as i32)
            })
            .sum()
    }

    /// Drop every term with a positive `s` exponent (if `kill_s`) or positive
    /// `t` exponent (if `kill_t`): the limits `s → 0`, `t → 0`.
    pub fn specialize_zero(&self, kill_s: bool, kill_t: bool) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !(kill_s && m.s > 0) && !(kill_t && m.t > 0))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Substitute `s = 1` by erasing `s` exponents.
    pub fn set_s_one(&self) -> Self {
        self.map_monomials(|m| Monomial { s: 0, ..m })
    }

    /// Substitute `t = 1` by erasing `t` exponents.
    pub fn set_t_one(&self) -> Self {
        self.map_monomials(|m| Monomial { t: 0, ..m })
    }

    fn map_monomials(&self, f: impl Fn(Monomial) -> Monomial) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(f(*m), c.clone());
        }
        out
    }

    /// Coefficients of `λ^0, λ^1, …` for a polynomial in `λ` alone.
    /// Returns `None` if `s`, `t` or a half-integral `λ` power occurs.
    pub fn lambda_coefficients(&self) -> Option<Vec<BigInt>> {
        if self.mentions_s() || self.mentions_t() || !self.has_integral_lambda() {
            return None;
        }
        let top = self.terms.keys().map(|m| m.half_lambda / 2).max().unwrap_or(0);
        let mut out = vec![BigInt::zero(); top as usize + 1];
        for (m, c) in &self.terms {
            out[(m.half_lambda / 2) as usize] = c.clone();
        }
        Some(out)
    }

    pub fn from_lambda_coefficients(coeffs: &[BigInt]) -> Self {
        let mut p = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::new(2 * k as u32, 0, 0), c.clone());
        }
        p
    }
}

fn pow_rat(base: &BigRational, e: u32) -> BigRational {
    num_traits::pow(base.clone(), e as usize)
}

fn exact_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(*mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> Result<bool, fmt::Error> {
    let mut factors = Vec::new();
    match m.half_lambda {
        0 => {}
        2 => factors.push("l".to_string()),
        h if h % 2 == 0 => factors.push(format!("l^{}", h / 2)),
        h => factors.push(format!("l^({h}/2)")),
    }
    for (name, e) in [("s", m.s), ("t", m.t)] {
        match e {
            0 => {}
            1 => factors.push(name.to_string()),
            e => factors.push(format!("{name}^{e}")),
        }
    }
    write!(f, "{}", factors.join("*"))?;
    Ok(!factors.is_empty())
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            if *m == Monomial::ONE {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

/// `λ` exponent in half units, serialized as a JSON integer when integral
/// and as a decimal (`0.5`, `1.5`, …) otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct HalfExponent(u32);

impl Serialize for HalfExponent {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        if self.0.is_multiple_of(2) {
            ser.serialize_u32(self.0 / 2)
        } else {
            ser.serialize_f64(self.0 as f64 / 2.0)
        }
    }
}

impl<'de> Deserialize<'de> for HalfExponent {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = HalfExponent;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a nonnegative integer or half-integer")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<HalfExponent, E> {
                u32::try_from(2 * v).map(HalfExponent).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<HalfExponent, E> {
                u64::try_from(v).map_err(E::custom).and_then(|v| self.visit_u64(v))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<HalfExponent, E> {
                let h = 2.0 * v;
                if h < 0.0 || h.fract() != 0.0 || h > u32::MAX as f64 {
                    return Err(E::custom(format!("{v} is not a nonnegative half-integer")));
                }
                Ok(HalfExponent(h as u32))
            }
        }
        de.deserialize_any(V)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    el: HalfExponent,
    es: u32,
    et: u32,
    coeff: String,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let records: Vec<TermRecord> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| TermRecord {
                el: HalfExponent(m.half_lambda),
                es: m.s,
                et: m.t,
                coeff: c.to_string(),
            })
            .collect();
        records.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(de)?;
        let mut p = MultiPoly::zero();
        for r in records {
            let c: BigInt = r
                .coeff
                .parse()
                .map_err(|_| de::Error::custom(PolyError::MalformedTerm(r.coeff.clone())))?;
            p.add_term(Monomial::new(r.el.0, r.es, r.et), c);
        }
        Ok(p)
    }
}
