//! Buchberger's algorithm over ℚ and 𝔽_p, used for ideal membership in the
//! Laurent ring and for saturating ideals at the product of the variables.
//!
//! A Laurent ideal `I = (f₁,…,f_k)` is handled in `k[x₁,…,xₙ,t]` as
//! `J = (f₁',…,f_k', t·x₁⋯xₙ − 1)`, where `fᵢ'` is `fᵢ` shifted to have no
//! negative exponents. Then `J ∩ k[x]` is the saturation of `(fᵢ')` and a
//! Laurent polynomial lies in `I` iff its shifted form lies in `J`.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{check_rank, Error, Result};
use crate::rational::Rational;
use crate::ring::{CoefficientDomain, LaurentPoly};

/// Largest rank accepted.
pub const MAX_VARIABLES: usize = 4;
/// Largest total degree of an input after clearing denominators of monomials.
pub const MAX_DEGREE: u32 = 12;
const MAX_BASIS: usize = 400;
const MAX_PAIRS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Order {
    Grevlex,
    /// The last variable first, then grevlex on the rest; eliminates it.
    EliminateLast,
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

fn compare(order: Order, a: &[u32], b: &[u32]) -> Ordering {
    match order {
        Order::Grevlex => grevlex(a, b),
        Order::EliminateLast => {
            let k = a.len() - 1;
            a[k].cmp(&b[k]).then_with(|| grevlex(&a[..k], &b[..k]))
        }
    }
}

type Term = (Vec<u32>, Rational);

/// Terms sorted by decreasing monomial order.
#[derive(Debug, Clone, PartialEq)]
struct Poly(Vec<Term>);

struct Ring {
    order: Order,
    domain: CoefficientDomain,
}

impl Ring {
    fn sorted(&self, map: HashMap<Vec<u32>, Rational>) -> Poly {
        let mut terms: Vec<Term> = map
            .into_iter()
            .map(|(m, c)| (m, self.domain.reduce(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        terms.sort_by(|a, b| compare(self.order, &b.0, &a.0));
        Poly(terms)
    }

    fn monic(&self, p: Poly) -> Poly {
        let inv = self.domain.inverse(&p.0[0].1).expect("field coefficient");
        Poly(p.0.into_iter().map(|(m, c)| (m, self.domain.reduce(c * &inv))).collect())
    }

    /// `p - c · x^m · q`.
    fn sub_scaled(&self, p: &Poly, c: &Rational, m: &[u32], q: &Poly) -> Poly {
        let mut map: HashMap<Vec<u32>, Rational> = p.0.iter().cloned().collect();
        for (e, d) in &q.0 {
            let key: Vec<u32> = e.iter().zip(m).map(|(a, b)| a + b).collect();
            let entry = map.entry(key).or_insert_with(Rational::zero);
            *entry -= c * d;
        }
        self.sorted(map)
    }

    /// Full reduction of `p` modulo `basis` (all monic).
    fn reduce(&self, mut p: Poly, basis: &[Poly]) -> Poly {
        let mut rest: Vec<Term> = Vec::new();
        while let Some((lm, lc)) = p.0.first().cloned() {
            match basis.iter().find(|g| divides(&g.0[0].0, &lm)) {
                Some(g) => {
                    let m: Vec<u32> = lm.iter().zip(&g.0[0].0).map(|(a, b)| a - b).collect();
                    p = self.sub_scaled(&p, &lc, &m, g);
                }
                None => {
                    rest.push((lm, lc));
                    p.0.remove(0);
                }
            }
        }
        Poly(rest)
    }

    fn spoly(&self, f: &Poly, g: &Poly) -> Poly {
        let l = lcm(&f.0[0].0, &g.0[0].0);
        let mf: Vec<u32> = l.iter().zip(&f.0[0].0).map(|(a, b)| a - b).collect();
        let mg: Vec<u32> = l.iter().zip(&g.0[0].0).map(|(a, b)| a - b).collect();
        let zero = Poly(Vec::new());
        let a = self.sub_scaled(&zero, &-Rational::one(), &mf, f);
        self.sub_scaled(&a, &Rational::one(), &mg, g)
    }

    /// Reduced Gröbner basis of the given polynomials.
    fn groebner(&self, input: Vec<Poly>) -> Result<Vec<Poly>> {
        let mut basis: Vec<Poly> = Vec::new();
        for p in input {
            let r = self.reduce(p, &basis);
            if !r.0.is_empty() {
                basis.push(self.monic(r));
            }
        }
        let mut pairs: Vec<(usize, usize)> = (0..basis.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let mut processed = 0;
        while !pairs.is_empty() {
            processed += 1;
            if processed > MAX_PAIRS || basis.len() > MAX_BASIS {
                return Err(Error::GuardExceeded("Gröbner basis computation exceeded its budget".into()));
            }
            // Normal strategy: smallest lcm first, ties by index.
            let k = (0..pairs.len())
                .min_by(|&a, &b| {
                    let la = lcm(&basis[pairs[a].0].0[0].0, &basis[pairs[a].1].0[0].0);
                    let lb = lcm(&basis[pairs[b].0].0[0].0, &basis[pairs[b].1].0[0].0);
                    compare(self.order, &la, &lb).then(pairs[a].cmp(&pairs[b]))
                })
                .expect("nonempty");
            let (i, j) = pairs.swap_remove(k);
            let (li, lj) = (&basis[i].0[0].0, &basis[j].0[0].0);
            if li.iter().zip(lj).all(|(a, b)| *a == 0 || *b == 0) {
                continue;
            }
            let r = self.reduce(self.spoly(&basis[i], &basis[j]), &basis);
            if !r.0.is_empty() {
                let new = basis.len();
                basis.push(self.monic(r));
                pairs.extend((0..new).map(|i| (i, new)));
            }
        }
        // Interreduce.
        let mut minimal: Vec<Poly> = Vec::new();
        for (i, g) in basis.iter().enumerate() {
            let redundant = basis.iter().enumerate().any(|(j, h)| {
                j != i && divides(&h.0[0].0, &g.0[0].0) && (h.0[0].0 != g.0[0].0 || j < i)
            });
            if !redundant {
                minimal.push(g.clone());
            }
        }
        let mut reduced = Vec::with_capacity(minimal.len());
        for i in 0..minimal.len() {
            let others: Vec<Poly> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
            let head = Poly(vec![minimal[i].0[0].clone()]);
            let tail = self.reduce(Poly(minimal[i].0[1..].to_vec()), &others);
            let mut terms = head.0;
            terms.extend(tail.0);
            reduced.push(Poly(terms));
        }
        reduced.sort_by(|a, b| compare(self.order, &a.0[0].0, &b.0[0].0));
        Ok(reduced)
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn check_domain(domain: &CoefficientDomain) -> Result<()> {
    if !domain.is_field() {
        return Err(Error::Unsupported("ideal computations need field coefficients".into()));
    }
    Ok(())
}

/// Shifts a Laurent polynomial into `k[x]` and appends a zero `t` exponent.
fn cleared(f: &LaurentPoly, ring: &Ring) -> Result<Poly> {
    let n = f.rank();
    let lows: Vec<i64> = (0..n).map(|i| f.degree_span(i).map_or(0, |s| s.0)).collect();
    let mut map = HashMap::new();
    for (g, c) in f.terms() {
        let mut e: Vec<u32> = g.0.iter().zip(&lows).map(|(a, l)| (a - l) as u32).collect();
        if e.iter().sum::<u32>() > MAX_DEGREE {
            return Err(Error::GuardExceeded(format!("total degree above {MAX_DEGREE}")));
        }
        e.push(0);
        map.insert(e, c.clone());
    }
    Ok(ring.sorted(map))
}

fn rabinowitsch(n: usize, ring: &Ring) -> Poly {
    let mut map = HashMap::new();
    map.insert(vec![1; n + 1], Rational::one());
    map.insert(vec![0; n + 1], -Rational::one());
    ring.sorted(map)
}

fn setup(gens: &[LaurentPoly], order: Order) -> Result<(usize, Ring, Vec<Poly>)> {
    let Some(first) = gens.first() else {
        return Err(Error::InvalidInput("need at least one generator".into()));
    };
    let n = first.rank();
    let domain = first.domain().clone();
    check_domain(&domain)?;
    if n > MAX_VARIABLES {
        return Err(Error::GuardExceeded(format!("ideal computations are limited to {MAX_VARIABLES} variables")));
    }
    let ring = Ring { order, domain: domain.clone() };
    let mut polys = Vec::with_capacity(gens.len() + 1);
    for g in gens {
        check_rank(n, g.rank())?;
        if *g.domain() != domain {
            return Err(Error::InvalidInput("generators over different domains".into()));
        }
        if !g.is_zero() {
            polys.push(cleared(g, &ring)?);
        }
    }
    polys.push(rabinowitsch(n, &ring));
    Ok((n, ring, polys))
}

/// Whether `lambda` lies in the ideal of the Laurent ring generated by `gens`.
pub fn ideal_membership(lambda: &LaurentPoly, gens: &[LaurentPoly]) -> Result<bool> {
    check_domain(lambda.domain())?;
    if let Some(g) = gens.first() {
        check_rank(g.rank(), lambda.rank())?;
        if g.domain() != lambda.domain() {
            return Err(Error::InvalidInput("element and generators over different domains".into()));
        }
    }
    if lambda.is_zero() {
        return Ok(true);
    }
    if gens.iter().all(LaurentPoly::is_zero) {
        return Ok(false);
    }
    let (_, ring, polys) = setup(gens, Order::Grevlex)?;
    let basis = ring.groebner(polys)?;
    let l = cleared(lambda, &ring)?;
    Ok(ring.reduce(l, &basis).0.is_empty())
}

/// Generators of the Laurent ideal `(gens)`: the reduced Gröbner basis of
/// its contraction to `k[x]`, which is saturated at the variables. The unit
/// ideal yields `[1]`.
pub fn saturated_basis(gens: &[LaurentPoly]) -> Result<Vec<LaurentPoly>> {
    let (n, ring, polys) = setup(gens, Order::EliminateLast)?;
    let domain = ring.domain.clone();
    if polys.len() == 1 {
        return Ok(Vec::new());
    }
    let basis = ring.groebner(polys)?;
    Ok(basis
        .into_iter()
        .filter(|p| p.0.iter().all(|(e, _)| e[n] == 0))
        .map(|p| {
            let terms = p.0.into_iter().map(|(e, c)| (e[..n].iter().map(|&v| v as i64).collect(), c));
            LaurentPoly::from_terms(n, domain.clone(), terms).expect("field coefficients")
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_poly;

    fn q(s: &str, n: usize) -> LaurentPoly {
        parse_poly(s, Some(n), CoefficientDomain::RationalField).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(ideal_membership(&q("x^2 - 36", 1), &[q("x - 6", 1)]).unwrap());
        assert!(!ideal_membership(&q("x - 5", 1), &[q("x - 6", 1)]).unwrap());
        assert!(ideal_membership(&q("x + y + 1", 2), &[q("x + y + 1", 2), q("x - y", 2)]).unwrap());
        // Laurent units: 1 - 36x^-2 = -36x^-2 (x - 6)(x + 6)
        assert!(ideal_membership(&q("1 - 36*x^-2", 1), &[q("x - 6", 1)]).unwrap());
        // x·y ∈ (x·y²) only after inverting y
        assert!(ideal_membership(&q("x*y", 2), &[q("x*y^2", 2)]).unwrap());
    }

    #[test]
    fn integer_coefficients_are_rejected() {
        let z = parse_poly("x - 6", None, CoefficientDomain::IntegerRing).unwrap();
        assert!(matches!(ideal_membership(&z, &[z.clone()]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn degree_guard() {
        assert!(matches!(
            ideal_membership(&q("x^13 - 1", 1), &[q("x - 1", 1)]),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn saturation() {
        // x is a unit, so (x·y - x, x²) is the unit ideal
        let b = saturated_basis(&[q("x*y - x", 2), q("x^2", 2)]).unwrap();
        assert_eq!(b, vec![q("1", 2)]);
        // (x·(y - 1), x·(x - 2)) saturates to (y - 1, x - 2)
        let b = saturated_basis(&[q("x*y - x", 2), q("x^2 - 2*x", 2)]).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.contains(&q("y - 1", 2)) && b.contains(&q("x - 2", 2)));
        let f2 = CoefficientDomain::PrimeField(2);
        let b = saturated_basis(&[parse_poly("x^2 + 1", None, f2.clone()).unwrap()]).unwrap();
        assert_eq!(b, vec![parse_poly("x^2 + 1", None, f2).unwrap()]);
    }
}
