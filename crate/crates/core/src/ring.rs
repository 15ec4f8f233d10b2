//! Laurent polynomials over ℤ, ℚ and prime fields, characters on ℤⁿ and
//! the χ-grading used throughout the crate.
//!
//! Convention: the initial part of `f` with respect to a character `χ`
//! collects the terms whose monomials take the *minimal* χ-value.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_rank, Error, Result};
use crate::rational::{dot, format_rational, int, parse_rational, primitive_integer_vector, ExtRational, Rational};

/// An element of ℤⁿ, written multiplicatively as a monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn zero(rank: usize) -> Self {
        Monomial(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut e = vec![0; rank];
        e[i] = 1;
        Monomial(e)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|a| -a).collect())
    }

    pub fn as_rationals(&self) -> Vec<Rational> {
        self.0.iter().map(|&e| int(e)).collect()
    }

    pub fn norm_squared(&self) -> i64 {
        self.0.iter().map(|e| e * e).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p", rename_all = "snake_case")]
pub enum CoefficientDomain {
    IntegerRing,
    RationalField,
    PrimeField(u64),
}

impl CoefficientDomain {
    pub fn prime_field(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(CoefficientDomain::PrimeField(p))
        } else {
            Err(Error::InvalidInput(format!("{p} is not prime")))
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, CoefficientDomain::IntegerRing)
    }

    /// Brings a rational into canonical form for this domain.
    pub fn normalize(&self, q: &Rational) -> Result<Rational> {
        match self {
            CoefficientDomain::RationalField => Ok(q.clone()),
            CoefficientDomain::IntegerRing => {
                if q.is_integer() {
                    Ok(q.clone())
                } else {
                    Err(Error::InvalidInput(format!(
                        "coefficient {} is not an integer",
                        format_rational(q)
                    )))
                }
            }
            CoefficientDomain::PrimeField(p) => {
                let p = BigInt::from(*p);
                let den = q.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(Error::InvalidInput(format!(
                        "denominator of {} vanishes mod {p}",
                        format_rational(q)
                    )));
                }
                let inv = mod_inverse(&den, &p);
                Ok(Rational::from_integer((q.numer() * inv).mod_floor(&p)))
            }
        }
    }

    pub(crate) fn reduce(&self, q: Rational) -> Rational {
        match self {
            CoefficientDomain::PrimeField(_) => self.normalize(&q).expect("field element"),
            _ => q,
        }
    }

    /// Multiplicative inverse in the domain, if it exists.
    pub fn inverse(&self, q: &Rational) -> Option<Rational> {
        if q.is_zero() {
            return None;
        }
        match self {
            CoefficientDomain::RationalField => Some(q.recip()),
            CoefficientDomain::IntegerRing => {
                if q.is_integer() && q.numer().abs().is_one() {
                    Some(q.clone())
                } else {
                    None
                }
            }
            CoefficientDomain::PrimeField(p) => {
                let p = BigInt::from(*p);
                Some(Rational::from_integer(mod_inverse(&q.to_integer(), &p)))
            }
        }
    }
}

pub(crate) fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    e.x.mod_floor(p)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A real character χ : ℤⁿ → ℚ given by its values on the standard basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character(#[serde(with = "crate::rational::serde_q::vec")] pub Vec<Rational>);

impl Character {
    pub fn new(values: Vec<Rational>) -> Self {
        Character(values)
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Character(values.iter().map(|&v| int(v)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn direction(&self) -> Option<Direction> {
        primitive_integer_vector(&self.0).map(Direction)
    }

    pub fn neg(&self) -> Character {
        Character(self.0.iter().map(|q| -q).collect())
    }

    pub fn norm_squared(&self) -> Rational {
        dot(&self.0, &self.0)
    }
}

/// The ray class [χ] = ℝ_{>0}χ, stored as its primitive integer representative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction(pub Vec<BigInt>);

impl Direction {
    pub fn from_ints(values: &[i64]) -> Result<Self> {
        let q: Vec<Rational> = values.iter().map(|&v| int(v)).collect();
        primitive_integer_vector(&q)
            .map(Direction)
            .ok_or_else(|| Error::InvalidInput("the zero vector has no direction".into()))
    }

    pub fn from_rationals(values: &[Rational]) -> Option<Self> {
        primitive_integer_vector(values).map(Direction)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn character(&self) -> Character {
        Character(self.0.iter().map(|v| Rational::from_integer(v.clone())).collect())
    }

    pub fn neg(&self) -> Direction {
        Direction(self.0.iter().map(|v| -v).collect())
    }

    pub fn to_f64_unit(&self) -> Vec<f64> {
        let v: Vec<f64> = self.0.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| x / n).collect()
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "[({})]", parts.join(","))
    }
}

impl Serialize for Direction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::rational::serde_int::vec::serialize(&self.0, s)
    }
}

/// Exact evaluation χ(g) = Σ χᵢ gᵢ.
pub fn chi_value(chi: &Character, g: &Monomial) -> Result<Rational> {
    check_rank(chi.rank(), g.rank())?;
    Ok(chi
        .0
        .iter()
        .zip(&g.0)
        .filter(|(_, &e)| e != 0)
        .map(|(c, &e)| c * int(e))
        .sum())
}

fn chi_unchecked(chi: &Character, g: &Monomial) -> Rational {
    chi.0
        .iter()
        .zip(&g.0)
        .filter(|(_, &e)| e != 0)
        .map(|(c, &e)| c * int(e))
        .sum()
}

/// A finitely supported map ℤⁿ → D with no stored zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    rank: usize,
    domain: CoefficientDomain,
    terms: BTreeMap<Monomial, Rational>,
}

impl LaurentPoly {
    pub fn zero(rank: usize, domain: CoefficientDomain) -> Self {
        LaurentPoly { rank, domain, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize, domain: CoefficientDomain) -> Self {
        Self::monomial(rank, domain, Monomial::zero(rank), int(1))
    }

    pub fn constant(rank: usize, domain: CoefficientDomain, c: Rational) -> Self {
        Self::monomial(rank, domain, Monomial::zero(rank), c)
    }

    pub fn monomial(rank: usize, domain: CoefficientDomain, g: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(rank, domain);
        p.add_term(g, c);
        p
    }

    pub fn variable(rank: usize, domain: CoefficientDomain, i: usize) -> Self {
        Self::monomial(rank, domain, Monomial::unit(rank, i), int(1))
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// monomials are summed.
    pub fn from_terms(
        rank: usize,
        domain: CoefficientDomain,
        terms: impl IntoIterator<Item = (Vec<i64>, Rational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(rank, domain.clone());
        for (e, c) in terms {
            check_rank(rank, e.len())?;
            let c = domain.normalize(&c)?;
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn from_int_terms(rank: usize, domain: CoefficientDomain, terms: &[(&[i64], i64)]) -> Self {
        Self::from_terms(rank, domain, terms.iter().map(|(e, c)| (e.to_vec(), int(*c))))
            .expect("well-formed literal")
    }

    fn add_term(&mut self, g: Monomial, c: Rational) {
        debug_assert_eq!(g.rank(), self.rank);
        let sum = match self.terms.get(&g) {
            Some(old) => self.domain.reduce(old + c),
            None => self.domain.reduce(c),
        };
        if sum.is_zero() {
            self.terms.remove(&g);
        } else {
            self.terms.insert(g, sum);
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn domain(&self) -> &CoefficientDomain {
        &self.domain
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coefficient(&self, g: &Monomial) -> Rational {
        self.terms.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::zero(self.rank))
                .is_some_and(|c| c.is_one())
    }

    /// The same polynomial regarded over another domain.
    pub fn with_domain(&self, domain: CoefficientDomain) -> Result<Self> {
        Self::from_terms(
            self.rank,
            domain,
            self.terms.iter().map(|(g, c)| (g.0.clone(), c.clone())),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.rank, self.domain.clone());
        for (g, a) in &self.terms {
            out.add_term(g.clone(), a * c);
        }
        out
    }

    /// Multiplication by the monomial `g` (a unit of the group ring).
    pub fn shift(&self, g: &Monomial) -> Self {
        LaurentPoly {
            rank: self.rank,
            domain: self.domain.clone(),
            terms: self.terms.iter().map(|(h, c)| (h.mul(g), c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.rank, self.domain.clone());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes rational values for the variables (all nonzero).
    pub fn eval_rational(&self, point: &[Rational]) -> Result<Rational> {
        check_rank(self.rank, point.len())?;
        if point.iter().any(Zero::is_zero) {
            return Err(Error::InvalidInput("Laurent evaluation at zero".into()));
        }
        Ok(self
            .terms
            .iter()
            .map(|(g, c)| {
                g.0.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, x)| acc * pow_signed(x, e))
            })
            .sum())
    }

    /// Minimal and maximal exponent of variable `i` over the support.
    pub fn degree_span(&self, i: usize) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|g| g.0[i]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    fn binary_check(&self, other: &Self) {
        assert_eq!(self.rank, other.rank, "rank mismatch in Laurent arithmetic");
        assert_eq!(self.domain, other.domain, "domain mismatch in Laurent arithmetic");
    }
}

pub(crate) fn pow_signed(x: &Rational, e: i64) -> Rational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, other: &LaurentPoly) -> LaurentPoly {
        self.binary_check(other);
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, other: &LaurentPoly) -> LaurentPoly {
        self + &(-other)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            rank: self.rank,
            domain: self.domain.clone(),
            terms: self
                .terms
                .iter()
                .map(|(g, c)| (g.clone(), self.domain.reduce(-c)))
                .collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, other: &LaurentPoly) -> LaurentPoly {
        self.binary_check(other);
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                *acc.entry(g.mul(h)).or_insert_with(Rational::zero) += a * b;
            }
        }
        let domain = self.domain.clone();
        LaurentPoly {
            rank: self.rank,
            terms: acc
                .into_iter()
                .map(|(g, c)| (g, domain.reduce(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
            domain,
        }
    }
}

/// `v_χ(f) = min_{g ∈ supp f} χ(g)`, and `+∞` for `f = 0`.
pub fn v_chi(chi: &Character, f: &LaurentPoly) -> Result<ExtRational> {
    check_rank(f.rank(), chi.rank())?;
    Ok(f.support()
        .map(|g| chi_unchecked(chi, g))
        .min()
        .map_or(ExtRational::Infinity, ExtRational::Finite))
}

/// Sum of the terms of `f` of minimal χ-value; zero for `f = 0`.
pub fn initial_part(chi: &Character, f: &LaurentPoly) -> Result<LaurentPoly> {
    Ok(grading(chi, f)?
        .into_iter()
        .next()
        .map(|(_, p)| p)
        .unwrap_or_else(|| LaurentPoly::zero(f.rank(), f.domain().clone())))
}

/// The χ-homogeneous components of `f`, by strictly increasing degree.
pub fn grading(chi: &Character, f: &LaurentPoly) -> Result<Vec<(Rational, LaurentPoly)>> {
    check_rank(f.rank(), chi.rank())?;
    let mut grades: BTreeMap<Rational, LaurentPoly> = BTreeMap::new();
    for (g, c) in f.terms() {
        grades
            .entry(chi_unchecked(chi, g))
            .or_insert_with(|| LaurentPoly::zero(f.rank(), f.domain().clone()))
            .add_term(g.clone(), c.clone());
    }
    Ok(grades.into_iter().collect())
}

pub(crate) fn variable_name(rank: usize, i: usize) -> String {
    const SHORT: [&str; 4] = ["x", "y", "z", "w"];
    if rank <= 4 {
        SHORT[i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (g, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let mut factors = Vec::new();
            for (i, &e) in g.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(variable_name(self.rank, i)),
                    _ => factors.push(format!("{}^{}", variable_name(self.rank, i), e)),
                }
            }
            if factors.is_empty() {
                f.write_str(&format_rational(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", format_rational(&abs))?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Parses expressions such as `x + y + 1`, `1 - 36*x^-2`, `2x - y`, `1/2 x1^3 x2`.
///
/// Variables are `x, y, z, w` or `x1, x2, …`. When `rank` is `None` it is the
/// largest variable index used (at least 1).
pub fn parse_poly(src: &str, rank: Option<usize>, domain: CoefficientDomain) -> Result<LaurentPoly> {
    let tokens = tokenize(src)?;
    let mut pos = 0;
    let mut raw: Vec<(Vec<(usize, i64)>, Rational)> = Vec::new();
    let mut max_var = 0usize;
    let peek = |pos: usize| tokens.get(pos);
    let mut first = true;
    while pos < tokens.len() || first {
        let mut sign = int(1);
        match peek(pos) {
            Some(Token::Plus) => pos += 1,
            Some(Token::Minus) => {
                sign = int(-1);
                pos += 1;
            }
            _ if !first => return Err(Error::Parse(format!("expected + or - in {src:?}"))),
            _ => {}
        }
        first = false;
        let mut coeff = sign;
        let mut factors = Vec::new();
        let mut saw_any = false;
        loop {
            match peek(pos) {
                Some(Token::Number(q)) => {
                    coeff *= q.clone();
                    pos += 1;
                }
                Some(Token::Var(i)) => {
                    let i = *i;
                    pos += 1;
                    let mut e = 1i64;
                    if let Some(Token::Caret) = peek(pos) {
                        pos += 1;
                        let mut neg = false;
                        if let Some(Token::Minus) = peek(pos) {
                            neg = true;
                            pos += 1;
                        }
                        match peek(pos) {
                            Some(Token::Number(q)) if q.is_integer() => {
                                e = q.to_integer().to_i64().ok_or_else(|| {
                                    Error::Parse("exponent out of range".into())
                                })?;
                                pos += 1;
                            }
                            _ => return Err(Error::Parse(format!("bad exponent in {src:?}"))),
                        }
                        if neg {
                            e = -e;
                        }
                    }
                    max_var = max_var.max(i + 1);
                    factors.push((i, e));
                }
                _ => {
                    if !saw_any {
                        return Err(Error::Parse(format!("empty term in {src:?}")));
                    }
                    break;
                }
            }
            saw_any = true;
            if let Some(Token::Star) = peek(pos) {
                pos += 1;
                if !matches!(peek(pos), Some(Token::Number(_)) | Some(Token::Var(_))) {
                    return Err(Error::Parse(format!("dangling * in {src:?}")));
                }
            }
        }
        raw.push((factors, coeff));
    }
    let rank = rank.unwrap_or(max_var.max(1));
    if max_var > rank {
        return Err(Error::Parse(format!(
            "{src:?} uses {max_var} variables but rank is {rank}"
        )));
    }
    let terms = raw.into_iter().map(|(factors, c)| {
        let mut e = vec![0i64; rank];
        for (i, k) in factors {
            e[i] += k;
        }
        (e, c)
    });
    LaurentPoly::from_terms(rank, domain, terms)
}

#[derive(Debug, Clone)]
enum Token {
    Number(Rational),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' if matches!(out.last(), Some(Token::Caret)) => i += 1,
            ')' if matches!(out.last(), Some(Token::Number(_))) => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token::Number(parse_rational(&s)?));
            }
            'x' | 'y' | 'z' | 'w' => {
                i += 1;
                if c == 'x' && i < chars.len() && chars[i].is_ascii_digit() {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    let k: usize = s.parse().map_err(|_| Error::Parse(s.clone()))?;
                    if k == 0 {
                        return Err(Error::Parse("variables are numbered from x1".into()));
                    }
                    out.push(Token::Var(k - 1));
                } else {
                    out.push(Token::Var(match c {
                        'x' => 0,
                        'y' => 1,
                        'z' => 2,
                        _ => 3,
                    }));
                }
            }
            _ => return Err(Error::Parse(format!("unexpected character {c:?} in {src:?}"))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    const Q: CoefficientDomain = CoefficientDomain::RationalField;
    const Z: CoefficientDomain = CoefficientDomain::IntegerRing;

    fn p(s: &str) -> LaurentPoly {
        parse_poly(s, None, Z).unwrap()
    }

    #[test]
    fn chi_value_examples() {
        let g = Monomial(vec![2, 3]);
        assert_eq!(chi_value(&Character::from_ints(&[1, -1]), &g).unwrap(), int(-1));
        assert_eq!(chi_value(&Character::from_ints(&[0, 0]), &Monomial(vec![5, 7])).unwrap(), int(0));
        let chi = Character::new(vec![frac(1, 2), frac(1, 3)]);
        assert_eq!(chi_value(&chi, &Monomial(vec![2, -3])).unwrap(), int(0));
        assert!(matches!(
            chi_value(&chi, &Monomial(vec![1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn v_chi_examples() {
        assert_eq!(v_chi(&Character::from_ints(&[-1]), &p("x - 6")).unwrap(), ExtRational::Finite(int(-1)));
        assert_eq!(v_chi(&Character::from_ints(&[1]), &LaurentPoly::zero(1, Z)).unwrap(), ExtRational::Infinity);
        assert_eq!(v_chi(&Character::from_ints(&[2, 3]), &p("x + y + 1")).unwrap(), ExtRational::Finite(int(0)));
    }

    #[test]
    fn initial_part_examples() {
        let f = p("x - 6");
        assert_eq!(initial_part(&Character::from_ints(&[1]), &f).unwrap(), p("-6"));
        assert_eq!(initial_part(&Character::from_ints(&[-1]), &f).unwrap(), p("x"));
        let g = p("1 - 36*x^-2");
        assert_eq!(initial_part(&Character::from_ints(&[-1]), &g).unwrap(), p("1"));
        assert_eq!(initial_part(&Character::from_ints(&[1]), &g).unwrap(), p("-36x^-2"));
        assert!(initial_part(&Character::from_ints(&[1]), &LaurentPoly::zero(1, Z)).unwrap().is_zero());
    }

    #[test]
    fn grading_examples() {
        let f = p("x + y + 1");
        let gr = grading(&Character::from_ints(&[1, 2]), &f).unwrap();
        assert_eq!(gr, vec![(int(0), p("1").with_rank(2)), (int(1), p("x").with_rank(2)), (int(2), p("y"))]);
        let gr = grading(&Character::from_ints(&[1, 1]), &p("x + y")).unwrap();
        assert_eq!(gr, vec![(int(1), p("x + y"))]);
        assert!(grading(&Character::from_ints(&[1]), &LaurentPoly::zero(1, Z)).unwrap().is_empty());
    }

    #[test]
    fn parser_and_display_round_trip() {
        for s in ["x + y + 1", "1 - 36*x^-2", "2*x - y", "-x^2*y^-1 + 1/2"] {
            let f = parse_poly(s, None, Q).unwrap();
            let g = parse_poly(&f.to_string(), Some(f.rank()), Q).unwrap();
            assert_eq!(f, g, "{s}");
        }
        assert_eq!(p("2x y^2").to_string(), "2*x*y^2");
        assert!(parse_poly("x +", None, Q).is_err());
        assert!(parse_poly("x ** y", None, Q).is_err());
        assert!(parse_poly("1/2 x", None, Z).is_err());
    }

    #[test]
    fn prime_field_reduction() {
        let f2 = CoefficientDomain::prime_field(2).unwrap();
        let f = parse_poly("x + 1", None, f2.clone()).unwrap();
        let sq = &f * &f;
        assert_eq!(sq, parse_poly("x^2 + 1", None, f2.clone()).unwrap());
        assert!(CoefficientDomain::prime_field(4).is_err());
        let third = f2.normalize(&frac(1, 3)).unwrap();
        assert_eq!(third, int(1));
    }

    #[test]
    fn evaluation() {
        let f = p("1 - 36*x^-2");
        assert_eq!(f.eval_rational(&[int(6)]).unwrap(), int(0));
        assert_eq!(p("x - 5").eval_rational(&[int(6)]).unwrap(), int(1));
    }

    impl LaurentPoly {
        fn with_rank(&self, rank: usize) -> LaurentPoly {
            LaurentPoly::from_terms(
                rank,
                self.domain.clone(),
                self.terms.iter().map(|(g, c)| {
                    let mut e = g.0.clone();
                    e.resize(rank, 0);
                    (e, c.clone())
                }),
            )
            .unwrap()
        }
    }
}
