use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use sigmatrop::dynamics::{lifts_identity, sigma_of_push, PushMap};
use sigmatrop::lp::Strength;
use sigmatrop::polyhedra::{in_open_hemisphere, Hemisphere};
use sigmatrop::rational::{frac, int, ExtRational, Rational};
use sigmatrop::ring::{grading, initial_part, v_chi, Character, CoefficientDomain, Direction, LaurentPoly};
use sigmatrop::sigma::{certificate_valid, sigma, sigma_scalar_action_with, ComplementReason, ModulePresentation, SearchBounds};
use sigmatrop::tropical::{trop_hypersurface, trop_prevariety};
use sigmatrop::valuation::{newton_polygon, prime_support, value, ValuationSpec};

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn poly_terms(n: usize, max_terms: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<(Vec<i64>, i64)>> {
    prop::collection::vec((prop::collection::vec(lo..=hi, n), (-5i64..=5).prop_filter("nonzero", |c| *c != 0)), 1..=max_terms)
}

fn build(n: usize, domain: &CoefficientDomain, terms: &[(Vec<i64>, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(n, domain.clone(), terms.iter().map(|(e, c)| (e.clone(), int(*c)))).unwrap()
}

fn character(n: usize) -> impl Strategy<Value = Character> {
    prop::collection::vec((-6i64..=6, 1i64..=4), n).prop_map(|v| Character::new(v.into_iter().map(|(a, b)| frac(a, b)).collect()))
}

fn domain() -> impl Strategy<Value = CoefficientDomain> {
    prop_oneof![
        Just(CoefficientDomain::IntegerRing),
        Just(CoefficientDomain::RationalField),
        Just(CoefficientDomain::PrimeField(5)),
    ]
}

/// `(rank, f terms, h terms, χ)` with f and h sharing the rank.
fn pair() -> impl Strategy<Value = (usize, Vec<(Vec<i64>, i64)>, Vec<(Vec<i64>, i64)>, Character)> {
    (1usize..=3).prop_flat_map(|n| (Just(n), poly_terms(n, 5, -3, 3), poly_terms(n, 5, -3, 3), character(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn valuation_of_products_and_sums((n, f, h, chi) in pair(), d in domain()) {
        let (f, h) = (build(n, &d, &f), build(n, &d, &h));
        prop_assume!(!f.is_zero() && !h.is_zero());
        let vf = v_chi(&chi, &f).unwrap();
        let vh = v_chi(&chi, &h).unwrap();
        prop_assert_eq!(v_chi(&chi, &(&f * &h)).unwrap(), vf.add(&vh));
        prop_assert!(v_chi(&chi, &(&f + &h)).unwrap() >= vf.clone().min(vh));
        let lhs = initial_part(&chi, &(&f * &h)).unwrap();
        let rhs = &initial_part(&chi, &f).unwrap() * &initial_part(&chi, &h).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn grading_reassembles(
        (n, f, chi) in (1usize..=4).prop_flat_map(|n| (Just(n), poly_terms(n, 8, -3, 3), character(n))),
    ) {
        let f = build(n, &CoefficientDomain::RationalField, &f);
        let parts = grading(&chi, &f).unwrap();
        let mut sum = LaurentPoly::zero(n, CoefficientDomain::RationalField);
        let mut seen = BTreeSet::new();
        for (level, part) in &parts {
            prop_assert!(seen.insert(level.clone()));
            for (g, _) in part.terms() {
                let v: Rational = g.0.iter().zip(chi.values()).map(|(e, c)| c * int(*e)).sum();
                prop_assert_eq!(&v, level);
            }
            sum = &sum + part;
        }
        prop_assert_eq!(sum, f);
    }
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=60).prop_filter_map("nonzero", |(a, b)| (a != 0).then(|| frac(a, b)))
}

fn padic_oracle(p: u64, q: &Rational) -> i64 {
    let count = |mut x: BigInt| {
        let mut k = 0;
        while (&x % p).is_zero() {
            x /= p;
            k += 1;
        }
        k
    };
    count(q.numer().abs()) - count(q.denom().clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn primes_outside_the_support_give_zero(values in prop::collection::vec(nonzero_rational(), 1..6), i in 0usize..PRIMES.len()) {
        let p = PRIMES[i];
        let support = prime_support(&values).unwrap();
        for a in &values {
            let v = value(&ValuationSpec::PAdic { p }, a).unwrap();
            prop_assert_eq!(&v, &ExtRational::Finite(int(padic_oracle(p, a))));
            if !support.contains(&p) {
                prop_assert_eq!(v, ExtRational::Finite(Rational::zero()));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn newton_slopes_are_root_valuations(roots in prop::collection::vec(nonzero_rational(), 1..6), i in 0usize..3) {
        let p = PRIMES[i];
        // Coefficients of Π (X − r), lowest degree first.
        let mut coeffs = vec![Rational::one()];
        for r in &roots {
            let mut next = vec![Rational::zero(); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        let np = newton_polygon(&coeffs, &ValuationSpec::PAdic { p }).unwrap();
        let mut got: Vec<Rational> = Vec::new();
        for (v, mult) in np.root_valuations() {
            got.extend(std::iter::repeat(v).take(mult as usize));
        }
        let mut want: Vec<Rational> = roots.iter().map(|r| int(padic_oracle(p, r))).collect();
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }
}

fn valued_poly() -> impl Strategy<Value = (LaurentPoly, ValuationSpec)> {
    let terms = prop::collection::vec(
        ((-2i64..=2, -2i64..=2), (1i64..=12).prop_map(|c| if c % 2 == 0 { c } else { -c })),
        2..=6,
    );
    (terms, prop_oneof![Just(ValuationSpec::Trivial), Just(ValuationSpec::PAdic { p: 2 }), Just(ValuationSpec::PAdic { p: 3 })])
        .prop_filter_map("needs two monomials", |(t, v)| {
            let f = LaurentPoly::from_terms(2, CoefficientDomain::RationalField, t.into_iter().map(|((a, b), c)| (vec![a, b], int(c)))).unwrap();
            (f.len() >= 2).then_some((f, v))
        })
}

/// min over terms of v(c) + χ·g attained twice, computed directly.
fn attained_twice(f: &LaurentPoly, v: &ValuationSpec, chi: &[Rational]) -> bool {
    let vals: Vec<Rational> = f
        .terms()
        .map(|(g, c)| {
            let w = match v {
                ValuationSpec::PAdic { p } => int(padic_oracle(*p, c)),
                _ => Rational::zero(),
            };
            w + g.0.iter().zip(chi).map(|(e, x)| x * int(*e)).sum::<Rational>()
        })
        .collect();
    let m = vals.iter().min().unwrap();
    vals.iter().filter(|x| *x == m).count() >= 2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn hypersurface_matches_oracle_on_grid((f, v) in valued_poly()) {
        let fan = trop_hypersurface(&f, &v).unwrap().fan;
        for a in -8i64..=8 {
            for b in 1i64..=8 {
                for c in -8i64..=8 {
                    for d in 1i64..=8 {
                        let chi = [frac(a, b), frac(c, d)];
                        prop_assert_eq!(fan.contains(&chi), attained_twice(&f, &v, &chi), "at {:?}", chi);
                    }
                }
            }
        }
        prop_assert_eq!(fan.pure_dimension(), Some(1));
        for piece in fan.pieces() {
            let x = piece.relative_interior_point().unwrap();
            prop_assert!(fan.balanceable_at(&Character::new(x)).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn fan_operations((f, v) in valued_poly(), chi in character(2), k in 1i64..=9) {
        let fan = trop_hypersurface(&f, &v).unwrap().fan;
        let inf = fan.local_cone_at_infinity();
        prop_assert!(inf.local_cone_at_infinity().set_eq(&inf).unwrap());
        let conical = trop_hypersurface(&f, &ValuationSpec::Trivial).unwrap().fan;
        prop_assert!(conical.local_cone_at_origin().set_eq(&conical).unwrap());
        let sphere = fan.radial_projection();
        let scaled = Character::new(chi.values().iter().map(|x| x * int(k)).collect());
        prop_assert_eq!(sphere.contains_character(&chi).unwrap(), sphere.contains_character(&scaled).unwrap());
    }

    #[test]
    fn hemisphere_certificates_verify(dirs in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 1..7)) {
        let dirs: Vec<Direction> = dirs.iter().filter_map(|d| Direction::from_ints(d).ok()).collect();
        prop_assume!(!dirs.is_empty());
        let h = in_open_hemisphere(&dirs).unwrap();
        prop_assert!(h.verify(&dirs));
        // Any grid witness forces the witness branch.
        let grid_witness = (-3i64..=3).flat_map(|a| (-3i64..=3).flat_map(move |b| (-3i64..=3).map(move |c| [a, b, c]))).any(|w| {
            dirs.iter().all(|d| d.0.iter().zip(w).map(|(x, y)| x * BigInt::from(y)).sum::<BigInt>().is_positive())
        });
        if grid_witness {
            prop_assert!(matches!(h, Hemisphere::Witness(_)));
        }
    }
}

fn scalar_rhos() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(
        (-2i64..=2, -1i64..=1, -1i64..=1, prop::bool::ANY)
            .prop_filter_map("not a unit", |(a, b, c, neg)| {
                let r = pow(2, a) * pow(3, b) * pow(5, c);
                (r != Rational::one()).then(|| if neg { -r } else { r })
            }),
        1..=2,
    )
}

fn pow(p: i64, e: i64) -> Rational {
    let base = int(p);
    if e >= 0 {
        (0..e).fold(Rational::one(), |acc, _| acc * &base)
    } else {
        (0..-e).fold(Rational::one(), |acc, _| acc / &base)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sigma_is_certified(rhos in scalar_rhos()) {
        let m = ModulePresentation::scalar(rhos.clone()).unwrap();
        // Small boxes keep the run short; undecided pieces are fine here.
        let bounds = SearchBounds { max_box: 3, ..SearchBounds::default() };
        let r = sigma_scalar_action_with(&m, &bounds).unwrap();
        for c in &r.certificates {
            prop_assert!(certificate_valid(&c.lambda, &c.sample.character(), &m).unwrap());
            if let Some(x) = c.region.relative_interior_point() {
                if x.iter().any(|v| !v.is_zero()) {
                    prop_assert!(certificate_valid(&c.lambda, &Character::new(x), &m).unwrap());
                }
            }
        }
        for piece in r.proved_sigma.pieces() {
            let x = piece.relative_interior_point().unwrap();
            prop_assert!(r.certificates.iter().any(|c| c.region.contains(&x)));
        }
        for w in &r.complement_witnesses {
            if let ComplementReason::Valuation { valuation: ValuationSpec::PAdic { p }, values } = &w.reason {
                let expected: Vec<Rational> = rhos.iter().map(|q| int(padic_oracle(*p, q))).collect();
                prop_assert_eq!(values, &expected);
                prop_assert!(w.cone.contains(values));
            } else {
                prop_assert!(false, "unexpected witness {:?}", w.reason);
            }
        }
    }

    #[test]
    fn complement_lies_in_the_tropical_variety((n, f) in (1usize..=2).prop_flat_map(|n| (Just(n), poly_terms(n, 4, -2, 2)))) {
        let f = build(n, &CoefficientDomain::RationalField, &f);
        prop_assume!(f.len() >= 2);
        let m = ModulePresentation::cyclic(n, CoefficientDomain::RationalField, vec![f.clone()]).unwrap();
        let r = sigma(&m).unwrap();
        let trop = trop_prevariety(&[f], &ValuationSpec::Trivial).unwrap().radial_projection();
        prop_assert!(r.proved_complement.is_subset_of(&trop).unwrap());
    }

    #[test]
    fn pushes_are_open_and_lifting_ones_certify(a in 0i64..=3, b in 0i64..=3, c in -2i64..=2) {
        prop_assume!(a + b > 0);
        // On ℤ[1/2, 1/3] with x ↦ 2, y ↦ 3, 2^a 3^b x^{-a} y^{-b} acts as 1.
        let m = ModulePresentation::scalar(vec![int(2), int(3)]).unwrap();
        let z = CoefficientDomain::IntegerRing;
        let mono = |k: i64, e: [i64; 2]| LaurentPoly::from_terms(2, z.clone(), [(e.to_vec(), int(k))]).unwrap();
        let main = mono(2i64.pow(a as u32) * 3i64.pow(b as u32), [-a, -b]);
        // Adding c·(6x⁻¹y⁻¹ − 1)·x⁻¹ keeps the action and the open cone shape.
        let extra = &(&mono(6, [-2, -1]) - &mono(1, [-1, 0])).scale(&int(c));
        let phi = PushMap::scalar(&main + extra).unwrap();
        prop_assert!(lifts_identity(&phi, &m).unwrap());
        let fan = sigma_of_push(&phi).unwrap();
        for piece in fan.pieces() {
            for con in piece.constraints() {
                prop_assert_eq!(con.strength, Strength::Gt);
            }
        }
        let r = sigma(&m).unwrap();
        prop_assert!(fan.radial_projection().is_subset_of(&r.proved_sigma).unwrap());
    }
}
