//! Valuations on ℚ, Newton polygons and prime supports.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, ExtRational, Rational};
use crate::ring::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValuationSpec {
    Trivial,
    PAdic { p: u64 },
    /// Explicit values for a finite set of coefficients. Lookups extend
    /// the table through `v(-a) = v(a)`, `v(1/a) = -v(a)` and single
    /// products of two entries.
    Table {
        #[serde(with = "table_serde")]
        entries: Vec<(Rational, ExtRational)>,
    },
}

mod table_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[(Rational, ExtRational)], s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw: Vec<(String, &ExtRational)> = v.iter().map(|(a, w)| (format_rational(a), w)).collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<(Rational, ExtRational)>, D::Error> {
        let raw: Vec<(String, ExtRational)> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|(a, w)| {
                crate::rational::parse_rational(&a)
                    .map(|a| (a, w))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

impl ValuationSpec {
    pub fn padic(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(ValuationSpec::PAdic { p })
    }

    /// Checks the table axioms on the supplied entries: only 0 is sent to
    /// +∞, `v(1) = 0`, and `v(ab) = v(a) + v(b)` whenever `ab` is also listed.
    pub fn validate(&self) -> Result<()> {
        match self {
            ValuationSpec::Trivial => Ok(()),
            ValuationSpec::PAdic { p } => {
                if is_prime(*p) {
                    Ok(())
                } else {
                    Err(Error::InvalidInput(format!("{p} is not prime")))
                }
            }
            ValuationSpec::Table { entries } => {
                for (a, w) in entries {
                    if a.is_zero() != w.is_infinite() {
                        return Err(Error::InvalidInput(format!("table assigns {w} to {}", format_rational(a))));
                    }
                    if a.is_one() && *w != ExtRational::Finite(int(0)) {
                        return Err(Error::InvalidInput("table must send 1 to 0".into()));
                    }
                }
                for (a, wa) in entries {
                    for (b, wb) in entries {
                        let ab = a * b;
                        if let Some((_, wab)) = entries.iter().find(|(c, _)| *c == ab) {
                            if *wab != wa.add(wb) {
                                return Err(Error::InvalidInput(format!(
                                    "table is not multiplicative at {} * {}",
                                    format_rational(a),
                                    format_rational(b)
                                )));
                            }
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

/// Exponent of `p` in a nonzero integer.
fn multiplicity(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut k = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        k += 1;
    }
    k
}

pub fn padic_value(p: u64, a: &Rational) -> ExtRational {
    if a.is_zero() {
        return ExtRational::Infinity;
    }
    let p = BigInt::from(p);
    ExtRational::Finite(int(multiplicity(a.numer(), &p) - multiplicity(a.denom(), &p)))
}

pub fn value(v: &ValuationSpec, a: &Rational) -> Result<ExtRational> {
    if a.is_zero() {
        return Ok(ExtRational::Infinity);
    }
    match v {
        ValuationSpec::Trivial => Ok(ExtRational::Finite(Rational::zero())),
        ValuationSpec::PAdic { p } => Ok(padic_value(*p, a)),
        ValuationSpec::Table { entries } => table_lookup(entries, a)
            .ok_or_else(|| Error::UnknownCoefficient(format_rational(a))),
    }
}

fn table_lookup(entries: &[(Rational, ExtRational)], a: &Rational) -> Option<ExtRational> {
    if a.abs().is_one() {
        return Some(ExtRational::Finite(int(0)));
    }
    let direct = |x: &Rational| {
        entries.iter().find_map(|(b, w)| {
            if *b == *x || *b == -x {
                Some(w.clone())
            } else if !b.is_zero() && (b.recip() == *x || b.recip() == -x) {
                w.finite().map(|q| ExtRational::Finite(-q))
            } else {
                None
            }
        })
    };
    if let Some(w) = direct(a) {
        return Some(w);
    }
    for (b, wb) in entries {
        if b.is_zero() {
            continue;
        }
        if let Some(w) = direct(&(a / b)) {
            return Some(w.add(wb));
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub points: Vec<(i64, ExtRational)>,
    #[serde(with = "hull_serde")]
    pub hull: Vec<(i64, Rational)>,
    pub slopes: Vec<Segment>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segment {
    #[serde(with = "crate::rational::serde_q")]
    pub slope: Rational,
    pub length: i64,
}

mod hull_serde {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &[(i64, Rational)], s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw: Vec<(i64, String)> = v.iter().map(|(i, q)| (*i, format_rational(q))).collect();
        raw.serialize(s)
    }
}

impl NewtonPolygon {
    /// `(valuation, multiplicity)` of the roots, one entry per segment:
    /// a segment of slope `s` and length `ℓ` gives `ℓ` roots of valuation `-s`.
    pub fn root_valuations(&self) -> Vec<(Rational, i64)> {
        self.slopes.iter().map(|s| (-s.slope.clone(), s.length)).collect()
    }
}

fn cross(o: &(i64, Rational), a: &(i64, Rational), b: &(i64, Rational)) -> Rational {
    int(a.0 - o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * int(b.0 - o.0)
}

/// Newton polygon of `Σ coeffs[i] Xⁱ`.
pub fn newton_polygon(coeffs: &[Rational], v: &ValuationSpec) -> Result<NewtonPolygon> {
    if coeffs.iter().all(Zero::is_zero) {
        return Err(Error::InvalidInput("zero polynomial has no Newton polygon".into()));
    }
    if coeffs[0].is_zero() || coeffs[coeffs.len() - 1].is_zero() {
        return Err(Error::Precondition("leading and trailing coefficients must be nonzero".into()));
    }
    let mut points = Vec::with_capacity(coeffs.len());
    let mut finite = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        let w = value(v, c)?;
        if let Some(q) = w.finite() {
            finite.push((i as i64, q.clone()));
        }
        points.push((i as i64, w));
    }
    let mut hull: Vec<(i64, Rational)> = Vec::new();
    for p in finite {
        while hull.len() >= 2 && !cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p).is_positive() {
            hull.pop();
        }
        hull.push(p);
    }
    let slopes = hull
        .windows(2)
        .map(|w| {
            let length = w[1].0 - w[0].0;
            Segment { slope: (&w[1].1 - &w[0].1) / int(length), length }
        })
        .collect();
    Ok(NewtonPolygon { points, hull, slopes })
}

/// Primes dividing some numerator or denominator.
pub fn prime_support(values: &[Rational]) -> Result<BTreeSet<u64>> {
    let mut primes = BTreeSet::new();
    for q in values {
        if q.is_zero() {
            return Err(Error::InvalidInput("prime support of zero".into()));
        }
        factor_into(q.numer(), &mut primes)?;
        factor_into(q.denom(), &mut primes)?;
    }
    Ok(primes)
}

const TRIAL_LIMIT: u64 = 1 << 20;

fn factor_into(n: &BigInt, primes: &mut BTreeSet<u64>) -> Result<()> {
    let mut n = n.abs();
    let mut d = 2u64;
    while d < TRIAL_LIMIT && BigInt::from(d) * BigInt::from(d) <= n {
        let bd = BigInt::from(d);
        if n.is_multiple_of(&bd) {
            primes.insert(d);
            while n.is_multiple_of(&bd) {
                n /= &bd;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        match n.to_u64() {
            Some(r) if is_prime(r) => {
                primes.insert(r);
            }
            _ => return Err(Error::GuardExceeded(format!("cannot factor {n} by trial division"))),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn value_examples() {
        let v2 = ValuationSpec::padic(2).unwrap();
        assert_eq!(value(&v2, &int(6)).unwrap(), ExtRational::Finite(int(1)));
        assert_eq!(value(&ValuationSpec::padic(3).unwrap(), &frac(1, 9)).unwrap(), ExtRational::Finite(int(-2)));
        assert_eq!(value(&ValuationSpec::Trivial, &int(0)).unwrap(), ExtRational::Infinity);
        assert!(ValuationSpec::padic(4).is_err());
    }

    #[test]
    fn table_lookup_extends() {
        let t = ValuationSpec::Table {
            entries: vec![(int(5), ExtRational::Finite(frac(1, 2))), (int(7), ExtRational::Finite(int(3)))],
        };
        t.validate().unwrap();
        assert_eq!(value(&t, &int(-5)).unwrap(), ExtRational::Finite(frac(1, 2)));
        assert_eq!(value(&t, &frac(1, 7)).unwrap(), ExtRational::Finite(int(-3)));
        assert_eq!(value(&t, &int(35)).unwrap(), ExtRational::Finite(frac(7, 2)));
        assert_eq!(value(&t, &int(1)).unwrap(), ExtRational::Finite(int(0)));
        assert!(matches!(value(&t, &int(11)), Err(Error::UnknownCoefficient(_))));
        let bad = ValuationSpec::Table { entries: vec![(int(1), ExtRational::Finite(int(2)))] };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn newton_examples() {
        let v2 = ValuationSpec::padic(2).unwrap();
        let np = newton_polygon(&[int(-6), int(1)], &v2).unwrap();
        assert_eq!(np.slopes, vec![Segment { slope: int(-1), length: 1 }]);
        assert_eq!(np.root_valuations(), vec![(int(1), 1)]);

        let np = newton_polygon(&[int(8), int(-6), int(1)], &v2).unwrap();
        assert_eq!(np.slopes, vec![Segment { slope: int(-2), length: 1 }, Segment { slope: int(-1), length: 1 }]);
        assert_eq!(np.root_valuations(), vec![(int(2), 1), (int(1), 1)]);

        let np = newton_polygon(&[int(1), int(0), int(1)], &ValuationSpec::Trivial).unwrap();
        assert_eq!(np.slopes, vec![Segment { slope: int(0), length: 2 }]);
        assert!(newton_polygon(&[int(0), int(0)], &ValuationSpec::Trivial).is_err());
    }

    #[test]
    fn prime_support_examples() {
        let s = |v: &[Rational]| prime_support(v).unwrap().into_iter().collect::<Vec<_>>();
        assert_eq!(s(&[int(6)]), vec![2, 3]);
        assert_eq!(s(&[int(2), frac(1, 3)]), vec![2, 3]);
        assert!(s(&[int(1), int(-1)]).is_empty());
        assert!(prime_support(&[int(0)]).is_err());
    }
}
