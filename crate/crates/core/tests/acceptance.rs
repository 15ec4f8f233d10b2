//! Acceptance criteria 1–9. Runs without the libtest harness so the
//! per-criterion verdict lines always reach the output; exits nonzero if
//! any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sigmatrop::amoeba::{amoeba_sample, angle_between_deg, log_limit_directions, Fibration};
use sigmatrop::dynamics::{check_angle_bound, compose_gsh_check, gsh, lambda_of_push_estimate, sigma_of_push, PushMap};
use sigmatrop::hyperbolic::{sample_elements, verify_infinity_obstruction_a, verify_push_b, verify_support_at_zero_a};
use sigmatrop::job::{run_str, RunOptions};
use sigmatrop::linalg::QMatrix;
use sigmatrop::rational::{frac, int, ExtRational, Rational};
use sigmatrop::ring::{initial_part, parse_poly, Character, CoefficientDomain, Direction, LaurentPoly};
use sigmatrop::sigma::{
    certificate_search, certificate_valid, determinant_reduction, matrix_certificate_valid, metabelian_fp,
    metabelian_fp_infinity, sigma, Decision, ModulePresentation, PolyMatrix,
};
use sigmatrop::tropical::trop_hypersurface;
use sigmatrop::valuation::ValuationSpec;

// Pinned tolerances and budgets.
const LINE_HEIGHT: i64 = 8;
const BOX_K: u32 = 6;
const COEFF_C: i64 = 1_000_000;
const DET_CASES: usize = 30;
const PUSH_CASES: usize = 200;
const PUSH_MAX_RANK: usize = 3;
const PUSH_MAX_TERMS: usize = 4;
const LAMBDA_ITERATIONS: usize = 6;
const SUPPORT_J_MAX: i64 = 8;
const AMOEBA_MIN_RADIUS: f64 = 15.0;
const AMOEBA_ANGLE_DEG: f64 = 5.0;
const AMOEBA_COVERAGE: f64 = 0.95;
const AMOEBA_BINS: usize = 72;
const THREADS: [usize; 2] = [1, 8];

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn q(s: &str) -> LaurentPoly {
    parse_poly(s, None, CoefficientDomain::RationalField).unwrap()
}

fn within(budget: Duration, start: Instant) -> Outcome {
    let t = start.elapsed();
    if t <= budget {
        Ok(format!("{:.2}s", t.as_secs_f64()))
    } else {
        Err(format!("took {:.2}s, budget {:.0}s", t.as_secs_f64(), budget.as_secs_f64()))
    }
}

/// min(χ₁, χ₂, 0) attained at least twice.
fn line_oracle(a: &Rational, b: &Rational) -> bool {
    let z = Rational::zero();
    let m = a.min(b).min(&z).clone();
    [a, b, &z].iter().filter(|v| ***v == m).count() >= 2
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let h = trop_hypersurface(&q("x + y + 1"), &ValuationSpec::Trivial).map_err(|e| e.to_string())?;
    let rays = h.fan.rays().map_err(|e| e.to_string())?;
    let expected: Vec<Direction> =
        [[-1, -1], [0, 1], [1, 0]].iter().map(|d| Direction::from_ints(d).unwrap()).collect();
    ensure!(rays == expected, "rays {rays:?}");
    let mut checked = 0;
    for a in -LINE_HEIGHT..=LINE_HEIGHT {
        for b in 1..=LINE_HEIGHT {
            for c in -LINE_HEIGHT..=LINE_HEIGHT {
                for d in 1..=LINE_HEIGHT {
                    let chi = [frac(a, b), frac(c, d)];
                    ensure!(h.fan.contains(&chi) == line_oracle(&chi[0], &chi[1]), "disagree at {chi:?}");
                    checked += 1;
                }
            }
        }
    }
    ensure!(h.fan.pure_dimension() == Some(1), "pure dimension {:?}", h.fan.pure_dimension());
    let balanced = h.fan.balanceable_at(&Character::from_ints(&[0, 0])).map_err(|e| e.to_string())?;
    ensure!(balanced, "not balanceable at the origin");
    Ok(format!("3 rays, {checked} directions agree, dim 1, balanced; {}", within(Duration::from_secs(1), start)?))
}

/// `1 − 6^{j+1} x^{−(j+1)}` for some j ≥ 0.
fn telescoped_j(lambda: &LaurentPoly) -> Option<u32> {
    let terms: Vec<_> = lambda.terms().collect();
    if terms.len() != 2 {
        return None;
    }
    let (g0, c0) = terms.iter().find(|(g, _)| g.0 == [0])?;
    let (g1, c1) = terms.iter().find(|(g, _)| g.0 != [0])?;
    let e = -g1.0[0];
    (g0.0 == [0] && c0.is_one() && e >= 1 && **c1 == -Rational::from_integer(BigInt::from(6).pow(e as u32)))
        .then_some(e as u32 - 1)
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let m = ModulePresentation::scalar(vec![int(6)]).map_err(|e| e.to_string())?;
    let r = sigma(&m).map_err(|e| e.to_string())?;
    let plus = Direction::from_ints(&[1]).unwrap();
    let minus = Direction::from_ints(&[-1]).unwrap();
    let complement = r.proved_complement.finite_directions().map_err(|e| e.to_string())?;
    let inside = r.proved_sigma.finite_directions().map_err(|e| e.to_string())?;
    ensure!(complement == Some(vec![plus.clone()]), "complement {complement:?}");
    ensure!(inside == Some(vec![minus.clone()]), "sigma {inside:?}");
    let cert = r.certificate_for(&minus).ok_or("no certificate at [-1]")?;
    let j = telescoped_j(&cert.lambda).ok_or_else(|| format!("certificate {} is not telescoped", cert.lambda))?;
    // x acts by 6, so λ(6) = 0 means λ kills the module; the leading term at χ = −1 is 1.
    ensure!(cert.lambda.eval_rational(&[int(6)]).unwrap().is_zero(), "λ(6) ≠ 0");
    let chi = Character::from_ints(&[-1]);
    ensure!(initial_part(&chi, &cert.lambda).unwrap().is_one(), "initial part is not 1");
    ensure!(certificate_valid(&cert.lambda, &chi, &m).unwrap(), "library rejects its own certificate");
    ensure!(metabelian_fp(&m).unwrap() == Decision::True, "fp");
    ensure!(metabelian_fp_infinity(&m).unwrap() == Decision::True, "fp_infinity");
    let none = certificate_search(&m, &Character::from_ints(&[1]), BOX_K, &BigInt::from(COEFF_C)).map_err(|e| e.to_string())?;
    ensure!(none.is_none(), "found {none:?} at χ = (1)");
    Ok(format!("λ = {} (j = {j}), no certificate at +1 within K={BOX_K}; {}", cert.lambda, within(Duration::from_secs(10), start)?))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let m = ModulePresentation::cyclic(1, CoefficientDomain::prime_field(2).unwrap(), vec![]).map_err(|e| e.to_string())?;
    let r = sigma(&m).map_err(|e| e.to_string())?;
    let both = vec![Direction::from_ints(&[-1]).unwrap(), Direction::from_ints(&[1]).unwrap()];
    ensure!(r.proved_complement.finite_directions().unwrap() == Some(both), "complement is not S⁰");
    ensure!(metabelian_fp(&m).unwrap() == Decision::False, "fp");
    ensure!(metabelian_fp_infinity(&m).unwrap() == Decision::False, "fp_infinity");
    Ok(format!("complement = S⁰, both predicates false; {}", within(Duration::from_secs(1), start)?))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for m in [2u64, 3, 4, 5, 8, 9] {
        let f = q(&format!("x - {m}"));
        let delta0 = trop_hypersurface(&f, &ValuationSpec::Trivial).unwrap().fan;
        for p in [2u64, 3, 5] {
            let delta_p = trop_hypersurface(&f, &ValuationSpec::padic(p).unwrap()).unwrap().fan;
            let divides = m % p == 0;
            let at_inf = delta_p.local_cone_at_infinity();
            ensure!(at_inf.set_eq(&delta0).unwrap(), "LC_∞ ≠ Δ⁰ for m={m}, p={p}");
            // The single tropical point is v_p(m), which is the origin exactly when p ∤ m.
            let at_zero = delta_p.local_cone_at_origin();
            ensure!(at_zero.is_empty() == divides, "LC₀ for m={m}, p={p}");
            if !divides {
                ensure!(at_zero.set_eq(&delta0).unwrap(), "LC₀ ≠ Δ⁰ for m={m}, p={p}");
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} (m, p) pairs; {}", within(Duration::from_secs(1), start)?))
}

/// Random `1 + y·q(y)` or `y·q(y)` with `y` the monomial of positive χ-value.
fn random_factor(rng: &mut ChaCha8Rng, y: &LaurentPoly, unit: bool) -> LaurentPoly {
    let mut acc = if unit { LaurentPoly::one(y.rank(), y.domain().clone()) } else { LaurentPoly::zero(y.rank(), y.domain().clone()) };
    let mut power = y.clone();
    for _ in 0..rng.gen_range(1..=3) {
        acc = &acc + &power.scale(&int(rng.gen_range(-4..=4)));
        power = &power * y;
    }
    if !unit && acc.is_zero() {
        acc = y.clone();
    }
    acc
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let z = CoefficientDomain::IntegerRing;
    // A = ℤ[1/6] ⊕ ℤ[1/10] (rank 1) and ℤ[1/6, 1/3] ⊕ ℤ[1/10, 1/5] (rank 2), diagonal actions.
    let setups: [(Vec<[i64; 2]>, &str, &str, Vec<i64>); 2] = [
        (vec![[6, 10]], "1 - 6*x^-1", "1 - 10*x^-1", vec![-1]),
        (vec![[6, 10], [3, 5]], "1 - 6*x^-1", "1 - 10*x^-1", vec![-2, 1]),
    ];
    let mut valid = 0;
    for case in 0..DET_CASES {
        let (eig, k1, k2, chi) = &setups[case % setups.len()];
        let n = eig.len();
        let mats = eig
            .iter()
            .map(|[a, b]| QMatrix::from_rows(vec![vec![int(*a), int(0)], vec![int(0), int(*b)]]).unwrap())
            .collect();
        let m = ModulePresentation::matrix(mats, vec![vec![int(1), int(0)], vec![int(0), int(1)]]).unwrap();
        let p = |s: &str| parse_poly(s, Some(n), z.clone()).unwrap();
        let (k1, k2, y) = (p(k1), p(k2), p("x^-1"));
        // Column j must vanish under the j-th eigencharacter.
        let theta = PolyMatrix::new(vec![
            vec![&k1 * &random_factor(&mut rng, &y, true), &k2 * &random_factor(&mut rng, &y, false)],
            vec![&k1 * &random_factor(&mut rng, &y, false), &k2 * &random_factor(&mut rng, &y, true)],
        ])
        .unwrap();
        let chi = Character::from_ints(chi);
        if !matrix_certificate_valid(&theta, &chi, &m).map_err(|e| e.to_string())? {
            return Err(format!("generated case {case} is not a matrix certificate"));
        }
        valid += 1;
        let det = determinant_reduction(&theta).map_err(|e| e.to_string())?;
        ensure!(certificate_valid(&det, &chi, &m).map_err(|e| e.to_string())?, "det θ invalid in case {case}");
        ensure!(initial_part(&chi, &det).unwrap().is_one(), "det θ initial part in case {case}");
    }
    Ok(format!("{valid}/{DET_CASES} valid matrix certificates reduce to valid determinants; {}", within(Duration::from_secs(30), start)?))
}

fn random_push(rng: &mut ChaCha8Rng) -> PushMap {
    let n = rng.gen_range(1..=PUSH_MAX_RANK);
    let k = rng.gen_range(1..=2);
    let rows = (0..k)
        .map(|_| {
            (0..k)
                .map(|_| {
                    let terms: Vec<(Vec<i64>, Rational)> = (0..rng.gen_range(0..=PUSH_MAX_TERMS))
                        .map(|_| ((0..n).map(|_| rng.gen_range(-2..=2)).collect(), int(rng.gen_range(-3..=3))))
                        .collect();
                    LaurentPoly::from_terms(n, CoefficientDomain::IntegerRing, terms).unwrap()
                })
                .collect()
        })
        .collect();
    PushMap::from_rows(rows).unwrap()
}

/// min over all monomials of all entries of χ·g, or None without monomials.
fn min_shift(phi: &PushMap, chi: &[Rational]) -> Option<Rational> {
    phi.matrix()
        .rows()
        .iter()
        .flatten()
        .flat_map(|e| e.support().map(|g| g.0.iter().zip(chi).map(|(a, c)| c * int(*a)).sum::<Rational>()).collect::<Vec<_>>())
        .min()
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut positive, mut angles, mut composed) = (0, 0, 0);
    for case in 0..PUSH_CASES {
        let phi = random_push(&mut rng);
        let n = phi.rank();
        let fan = sigma_of_push(&phi).unwrap();
        let chi = match fan.pieces().first().and_then(|p| p.relative_interior_point()).filter(|_| rng.gen_bool(0.5)) {
            Some(x) if x.iter().any(|v| !v.is_zero()) => x,
            _ => (0..n).map(|_| frac(rng.gen_range(-5..=5), rng.gen_range(1..=3))).collect(),
        };
        let character = Character::new(chi.clone());
        let g = gsh(&phi, &character).unwrap();
        let oracle = min_shift(&phi, &chi).map_or(true, |v| v.is_positive());
        ensure!(fan.contains(&chi) == g.is_positive(), "case {case}: Σ(φ) membership disagrees with gsh = {g}");
        ensure!(g.is_positive() == oracle, "case {case}: gsh sign disagrees with the oracle");
        let psi = random_push_like(&mut rng, &phi);
        let rep = compose_gsh_check(&phi, &psi, &character).unwrap();
        ensure!(rep.pass, "case {case}: composition bound fails: {:?}", rep.checks.iter().find(|c| !c.pass));
        composed += 1;
        if let ExtRational::Finite(v) = &g {
            if v.is_positive() && !character.is_zero() {
                positive += 1;
                let one = LaurentPoly::one(n, CoefficientDomain::IntegerRing);
                let zero = LaurentPoly::zero(n, CoefficientDomain::IntegerRing);
                let start_vec: Vec<LaurentPoly> = (0..phi.size()).map(|i| if i == 0 { one.clone() } else { zero.clone() }).collect();
                let est = lambda_of_push_estimate(&phi, &start_vec, LAMBDA_ITERATIONS).unwrap();
                let rep = check_angle_bound(&phi, &character, &est.directions).unwrap();
                ensure!(rep.pass, "case {case}: angle bound fails: {:?}", rep.checks.iter().find(|c| !c.pass));
                angles += rep.checks.len();
            }
        }
    }
    Ok(format!(
        "{PUSH_CASES} pushes, {positive} with gsh > 0, {angles} angle checks, {composed} composition checks; {}",
        within(Duration::from_secs(60), start)?
    ))
}

/// A second random push of the same size and rank.
fn random_push_like(rng: &mut ChaCha8Rng, phi: &PushMap) -> PushMap {
    loop {
        let psi = random_push(rng);
        if psi.size() == phi.size() && psi.rank() == phi.rank() {
            return psi;
        }
    }
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let r = verify_support_at_zero_a(2, 0, SUPPORT_J_MAX).map_err(|e| e.to_string())?;
    ensure!(r.pass && r.increasing && r.rows.len() == SUPPORT_J_MAX as usize + 1, "support at 0 fails");
    let r = verify_infinity_obstruction_a(2, &int(2), 10, 4).map_err(|e| e.to_string())?;
    ensure!(r.pass && r.solutions.is_empty() && r.candidates == 21u64.pow(4), "obstruction at ∞ fails");
    for p in [2u64, 3, 5] {
        let lambdas = sample_elements(p, 20, p).unwrap();
        let r = verify_push_b(p, &lambdas).map_err(|e| e.to_string())?;
        let exact = r.shift_arg == int((p * p) as i64);
        let float = (r.shift - 2.0 * (p as f64).ln()).abs() < 1e-12;
        ensure!(r.pass && exact && float, "push for p = {p}");
    }
    Ok(format!("support levels 4^0..4^{SUPPORT_J_MAX}, 21^4 candidates, shifts p² for p = 2, 3, 5; {}", within(Duration::from_secs(30), start)?))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let grid: Vec<f64> = (0..=160).map(|i| -40.0 + 0.5 * i as f64).collect();
    let mut summary = Vec::new();
    for src in ["x + y + 1", "y - 6*x", "2*x - y"] {
        let f = q(src);
        let expected: Vec<[f64; 2]> = trop_hypersurface(&f, &ValuationSpec::Trivial)
            .unwrap()
            .fan
            .local_cone_at_infinity()
            .rays()
            .unwrap()
            .iter()
            .map(|d| {
                let u = d.to_f64_unit();
                [u[0], u[1]]
            })
            .collect();
        let cloud = amoeba_sample(&f, &grid, 24, Fibration::Both).map_err(|e| e.to_string())?;
        let lim = log_limit_directions(&cloud, AMOEBA_MIN_RADIUS, AMOEBA_BINS).map_err(|e| e.to_string())?;
        let nearest = |d: [f64; 2]| expected.iter().map(|e| angle_between_deg(d, *e)).fold(f64::INFINITY, f64::min);
        for d in &lim.directions {
            ensure!(nearest(d.direction) <= AMOEBA_ANGLE_DEG, "{src}: direction {:?} is {:.2}° off", d.direction, nearest(d.direction));
        }
        for e in &expected {
            let hit = lim.directions.iter().any(|d| angle_between_deg(d.direction, *e) <= AMOEBA_ANGLE_DEG);
            ensure!(hit, "{src}: no populated bin near ray {e:?}");
        }
        let near: usize = lim.directions.iter().filter(|d| nearest(d.direction) <= AMOEBA_ANGLE_DEG).map(|d| d.count).sum();
        let share = near as f64 / lim.far_points.max(1) as f64;
        ensure!(share >= AMOEBA_COVERAGE, "{src}: only {:.1}% of far points near a ray", 100.0 * share);
        summary.push(format!("{src}: {} bins", lim.directions.len()));
    }
    Ok(format!("{}; {}", summary.join(", "), within(Duration::from_secs(60), start)?))
}

const JOBS: &[&str] = &[
    r#"{"version":1,"command":"trop","payload":{"generators":["x + y + 1"]}}"#,
    r#"{"version":1,"command":"trop","payload":{"generators":["x + y + 2", "x*y - 4"],"valuation":{"kind":"p_adic","p":2}}}"#,
    r#"{"version":1,"command":"sigma","payload":{"module":{"kind":"scalar","rhos":[6]}}}"#,
    r#"{"version":1,"command":"sigma","payload":{"module":{"kind":"scalar","rhos":[2, "3/5"]}}}"#,
    r#"{"version":1,"command":"sigma","payload":{"module":{"kind":"cyclic","domain":{"kind":"integer_ring"},"generators":["x + y - 2"]}}}"#,
    r#"{"version":1,"command":"group","payload":{"module":{"kind":"cyclic","rank":1,"domain":{"kind":"prime_field","p":2},"generators":[]},"m":2}}"#,
    r#"{"version":1,"command":"group","payload":{"module":{"kind":"direct_sum","parts":[{"kind":"scalar","rhos":[6]},{"kind":"scalar","rhos":["1/5"]}]},"m":3}}"#,
    r#"{"version":1,"command":"dyn","payload":{"push":[["2*x^-1 + y^-1","0"],["x^-1","3*y^-1"]],"chi":[-1,-1],"compose_with":[["x^-1","y^-2"],["0","x^-1*y^-1"]],"estimate":{"start":["1","0"],"iterations":5}}}"#,
    r#"{"version":1,"command":"h2","payload":{"check":"infinity_obstruction_a","p":2,"q":2,"coeff_bound":10,"k_max":4}}"#,
    r#"{"version":1,"command":"h2","payload":{"check":"zero_obstruction","module":"b","p":2,"q":4,"coeff_bound":5,"size_bound":2,"k_max":2}}"#,
    r#"{"version":1,"command":"h2","payload":{"check":"push_b","p":5}}"#,
    r#"{"version":1,"command":"amoeba","payload":{"f":"y - 6*x","s_min":-20,"s_max":20,"steps":41,"min_radius":15}}"#,
];

fn run_all(threads: usize) -> Vec<String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| JOBS.iter().map(|j| run_str(j, RunOptions::default()).map(|d| d.to_json()).unwrap_or_else(|e| e.to_string())).collect())
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let runs: Vec<Vec<String>> = THREADS.iter().map(|&t| run_all(t)).collect();
    for (i, (a, b)) in runs[0].iter().zip(&runs[1]).enumerate() {
        ensure!(a == b, "job {i} differs between {} and {} threads", THREADS[0], THREADS[1]);
        ensure!(a.starts_with('{'), "job {i} failed: {a}");
    }
    let bytes: usize = runs[0].iter().map(String::len).sum();
    Ok(format!("{} documents ({bytes} bytes) identical at {:?} threads; {:.2}s", JOBS.len(), THREADS, start.elapsed().as_secs_f64()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("tropical line", criterion_1),
        ("Σ⁰ of ℤ[1/6]", criterion_2),
        ("lamplighter module", criterion_3),
        ("local cones of x − m", criterion_4),
        ("determinant reduction", criterion_5),
        ("push dynamics", criterion_6),
        ("hyperbolic lab", criterion_7),
        ("amoeba limit directions", criterion_8),
        ("thread-count determinism", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let label = format!("criterion {}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str()) || name.contains(f.as_str())) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("{label} [{name}]: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("{label} [{name}]: FAIL ({why})");
            }
        }
    }
    println!("acceptance: {} failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
