//! Exact tropical hypersurfaces, prevarieties and the global tropical set over ℤ.

use serde::Serialize;

use crate::error::{check_rank, Error, Result};
use crate::lp::Strength;
use crate::polyhedra::{Constraint, Fan, Polyhedron};
use crate::rational::Rational;
use crate::ring::{CoefficientDomain, LaurentPoly, Monomial};
use crate::valuation::{prime_support, value, ValuationSpec};

/// A tropical hypersurface; `unit` marks a single-monomial input, whose
/// hypersurface is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TropicalHypersurface {
    pub fan: Fan,
    pub unit: bool,
}

fn valued_terms(f: &LaurentPoly, v: &ValuationSpec) -> Result<Vec<(Monomial, Rational)>> {
    if matches!(f.domain(), CoefficientDomain::PrimeField(_)) && *v != ValuationSpec::Trivial {
        return Err(Error::Unsupported("only the trivial valuation exists on a finite field".into()));
    }
    f.terms()
        .map(|(g, c)| {
            let w = value(v, c)?;
            let w = w.finite().cloned().expect("nonzero coefficients have finite value");
            Ok((g.clone(), w))
        })
        .collect()
}

/// All `χ` where `min_g (v(c_g) + χ·g)` is attained at least twice.
pub fn trop_hypersurface(f: &LaurentPoly, v: &ValuationSpec) -> Result<TropicalHypersurface> {
    if f.is_zero() {
        return Err(Error::InvalidInput("the zero polynomial has no tropical hypersurface".into()));
    }
    v.validate()?;
    let n = f.rank();
    let terms = valued_terms(f, v)?;
    if terms.len() == 1 {
        return Ok(TropicalHypersurface { fan: Fan::empty(n), unit: true });
    }
    let affine = |k: usize, i: usize| -> (Vec<Rational>, Rational) {
        let normal = terms[k].0.0.iter().zip(&terms[i].0.0).map(|(a, b)| Rational::from_integer((a - b).into())).collect();
        (normal, &terms[k].1 - &terms[i].1)
    };
    let mut pieces = Vec::new();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            let mut p = Polyhedron::space(n);
            let (a, b) = affine(j, i);
            p.push(Constraint::new(a, b, Strength::Eq));
            for k in (0..terms.len()).filter(|&k| k != i && k != j) {
                let (a, b) = affine(k, i);
                p.push(Constraint::new(a, b, Strength::Ge));
            }
            pieces.push(p);
        }
    }
    Ok(TropicalHypersurface { fan: Fan::from_pieces(n, pieces)?, unit: false })
}

/// Intersection of the generators' hypersurfaces; an outer bound for the
/// tropical variety of the ideal they generate.
pub fn trop_prevariety(gens: &[LaurentPoly], v: &ValuationSpec) -> Result<Fan> {
    let Some(first) = gens.first() else {
        return Err(Error::InvalidInput("prevariety needs at least one generator".into()));
    };
    let n = first.rank();
    let mut acc = Fan::whole(n);
    for g in gens {
        check_rank(n, g.rank())?;
        if g.is_zero() {
            continue;
        }
        let h = trop_hypersurface(g, v)?;
        if h.unit {
            return Ok(Fan::empty(n));
        }
        acc = acc.intersect(&h.fan)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlobalTropical {
    /// Primes whose valuations were added to the trivial one.
    pub primes: Vec<u64>,
    pub fan: Fan,
}

/// Union of the trivial and all p-adic hypersurfaces of an integer polynomial.
/// Only primes dividing a coefficient can contribute anything new.
pub fn global_tropical_z(f: &LaurentPoly) -> Result<GlobalTropical> {
    if f.is_zero() {
        return Err(Error::InvalidInput("the zero polynomial has no tropical hypersurface".into()));
    }
    if *f.domain() != CoefficientDomain::IntegerRing {
        return Err(Error::InvalidInput("global tropical set is defined for integer polynomials".into()));
    }
    let coeffs: Vec<Rational> = f.terms().map(|(_, c)| c.clone()).collect();
    let primes: Vec<u64> = prime_support(&coeffs)?.into_iter().collect();
    let mut fan = trop_hypersurface(f, &ValuationSpec::Trivial)?.fan;
    for &p in &primes {
        fan = fan.union(&trop_hypersurface(f, &ValuationSpec::PAdic { p })?.fan)?;
    }
    Ok(GlobalTropical { primes, fan })
}

/// Brute-force test that the minimum of `v(c_g) + χ·g` is attained twice.
pub fn min_attained_twice(f: &LaurentPoly, v: &ValuationSpec, chi: &[Rational]) -> Result<bool> {
    check_rank(f.rank(), chi.len())?;
    let terms = valued_terms(f, v)?;
    let vals: Vec<Rational> = terms
        .iter()
        .map(|(g, w)| w + g.0.iter().zip(chi).map(|(e, x)| x * Rational::from_integer((*e).into())).sum::<Rational>())
        .collect();
    let Some(min) = vals.iter().min() else {
        return Ok(false);
    };
    Ok(vals.iter().filter(|x| *x == min).count() >= 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::ring::{parse_poly, Direction};

    fn q_poly(s: &str) -> LaurentPoly {
        parse_poly(s, None, CoefficientDomain::RationalField).unwrap()
    }

    fn z_poly(s: &str) -> LaurentPoly {
        parse_poly(s, None, CoefficientDomain::IntegerRing).unwrap()
    }

    fn dir(v: &[i64]) -> Direction {
        Direction::from_ints(v).unwrap()
    }

    #[test]
    fn tropical_line() {
        let t = trop_hypersurface(&q_poly("x + y + 1"), &ValuationSpec::Trivial).unwrap();
        assert!(!t.unit);
        assert_eq!(t.fan.rays().unwrap(), vec![dir(&[-1, -1]), dir(&[0, 1]), dir(&[1, 0])]);
        assert_eq!(t.fan.pure_dimension(), Some(1));
    }

    #[test]
    fn padic_point_and_trivial_origin() {
        let f = q_poly("x - 6");
        let t = trop_hypersurface(&f, &ValuationSpec::PAdic { p: 2 }).unwrap();
        assert!(t.fan.set_eq(&Fan::from_pieces(1, vec![Polyhedron::point(&[int(1)])]).unwrap()).unwrap());
        let t = trop_hypersurface(&f, &ValuationSpec::Trivial).unwrap();
        assert!(t.fan.set_eq(&Fan::origin(1)).unwrap());
        let unit = trop_hypersurface(&q_poly("3*x^2"), &ValuationSpec::Trivial).unwrap();
        assert!(unit.unit && unit.fan.is_empty());
        assert!(trop_hypersurface(&LaurentPoly::zero(1, CoefficientDomain::RationalField), &ValuationSpec::Trivial).is_err());
    }

    #[test]
    fn prevariety_examples() {
        let f = q_poly("x - 6");
        let v = ValuationSpec::PAdic { p: 2 };
        let pre = trop_prevariety(std::slice::from_ref(&f), &v).unwrap();
        assert!(pre.set_eq(&trop_hypersurface(&f, &v).unwrap().fan).unwrap());

        let pre = trop_prevariety(&[q_poly("x + y + 1"), q_poly("x - y")], &ValuationSpec::Trivial).unwrap();
        let expected = Fan::from_rays(2, &[dir(&[-1, -1])]).unwrap();
        assert!(pre.set_eq(&expected).unwrap());

        let pre = trop_prevariety(&[q_poly("x + y + 1"), q_poly("2*y")], &ValuationSpec::Trivial).unwrap();
        assert!(pre.is_empty());
    }

    #[test]
    fn global_examples() {
        let g = global_tropical_z(&z_poly("x - 6")).unwrap();
        assert_eq!(g.primes, vec![2, 3]);
        assert!(g.fan.contains(&[int(0)]) && g.fan.contains(&[int(1)]));
        assert!(!g.fan.contains(&[int(2)]));

        let g = global_tropical_z(&z_poly("2*x - y")).unwrap();
        assert_eq!(g.primes, vec![2]);
        let l0 = Polyhedron::space(2).with(Constraint::new(vec![int(1), int(-1)], int(0), Strength::Eq));
        let l1 = Polyhedron::space(2).with(Constraint::new(vec![int(-1), int(1)], int(-1), Strength::Eq));
        assert!(g.fan.set_eq(&Fan::from_pieces(2, vec![l0, l1]).unwrap()).unwrap());

        let g = global_tropical_z(&z_poly("x - 1")).unwrap();
        assert!(g.primes.is_empty());
        assert!(g.fan.set_eq(&Fan::origin(1)).unwrap());
    }

    #[test]
    fn finite_field_needs_trivial_valuation() {
        let f = parse_poly("x + 1", None, CoefficientDomain::PrimeField(2)).unwrap();
        assert!(trop_hypersurface(&f, &ValuationSpec::PAdic { p: 2 }).is_err());
        assert!(trop_hypersurface(&f, &ValuationSpec::Trivial).is_ok());
    }
}
