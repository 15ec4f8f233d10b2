//! Σ⁰ of finitely generated ℤⁿ-modules: proved inner and outer
//! approximations, annihilator certificates, and the metabelian finiteness
//! predicates read off from them.
//!
//! A direction is only ever placed in `proved_sigma` together with a
//! certificate λ (λA = 0, χ-initial part 1) and only placed in
//! `proved_complement` together with a valuation realizing it. Anything
//! else stays undecided.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{check_rank, Error, Result};
use crate::groebner::{ideal_membership, saturated_basis};
use crate::linalg::{integer_rows, integer_solution_with_unit, lattice_contains, nullspace_of, rank_of, QMatrix};
use crate::lp::Strength;
use crate::par;
use crate::polyhedra::{combinations, in_open_hemisphere, Constraint, Hemisphere, Polyhedron, SphericalSet};
use crate::rational::{int, lcm_of_denominators, Rational};
use crate::ring::{chi_value, grading, initial_part, Character, CoefficientDomain, Direction, LaurentPoly, Monomial};
use crate::tropical::{global_tropical_z, trop_hypersurface, trop_prevariety};
use crate::valuation::{padic_value, prime_support, ValuationSpec};

/// How the module A is given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleMode {
    /// `D[G]/I` with `I` generated by `gens`.
    Cyclic { domain: CoefficientDomain, gens: Vec<LaurentPoly> },
    /// The subring `ℤ[ρ₁^±,…,ρₙ^±]` of ℚ, the i-th basis element acting by ρᵢ.
    Scalar { rhos: Vec<Rational> },
    /// The ℤG-submodule of ℚ^d generated by `generators`, the i-th basis
    /// element acting by `mats[i]`.
    Matrix { mats: Vec<QMatrix>, generators: Vec<Vec<Rational>> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulePresentation {
    rank: usize,
    mode: ModuleMode,
}

impl ModulePresentation {
    pub fn cyclic(rank: usize, domain: CoefficientDomain, gens: Vec<LaurentPoly>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidInput("G = ℤⁿ needs n ≥ 1".into()));
        }
        for g in &gens {
            check_rank(rank, g.rank())?;
            if *g.domain() != domain {
                return Err(Error::InvalidInput("ideal generators over a different domain".into()));
            }
        }
        Ok(ModulePresentation { rank, mode: ModuleMode::Cyclic { domain, gens } })
    }

    pub fn scalar(rhos: Vec<Rational>) -> Result<Self> {
        if rhos.is_empty() {
            return Err(Error::InvalidInput("G = ℤⁿ needs n ≥ 1".into()));
        }
        if rhos.iter().any(Zero::is_zero) {
            return Err(Error::InvalidInput("scalar actions must be by nonzero rationals".into()));
        }
        Ok(ModulePresentation { rank: rhos.len(), mode: ModuleMode::Scalar { rhos } })
    }

    /// Checks that the matrices are invertible and commute and that the
    /// generators span ℚ^d.
    pub fn matrix(mats: Vec<QMatrix>, generators: Vec<Vec<Rational>>) -> Result<Self> {
        let Some(first) = mats.first() else {
            return Err(Error::InvalidInput("G = ℤⁿ needs n ≥ 1".into()));
        };
        let d = first.rows();
        if d == 0 {
            return Err(Error::InvalidInput("the module needs d ≥ 1".into()));
        }
        for m in &mats {
            if !m.is_square() || m.rows() != d {
                return Err(Error::DimensionMismatch { expected: d, found: m.rows().max(m.cols()) });
            }
            if m.determinant()?.is_zero() {
                return Err(Error::InvalidInput("action matrices must be invertible".into()));
            }
        }
        for (i, a) in mats.iter().enumerate() {
            for b in &mats[i + 1..] {
                if a.mul(b) != b.mul(a) {
                    return Err(Error::InvalidInput("action matrices must commute".into()));
                }
            }
        }
        for v in &generators {
            check_rank(d, v.len())?;
        }
        if rank_of(&generators, d) != d {
            return Err(Error::InvalidInput("generators must span ℚ^d".into()));
        }
        Ok(ModulePresentation { rank: mats.len(), mode: ModuleMode::Matrix { mats, generators } })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mode(&self) -> &ModuleMode {
        &self.mode
    }

    /// Length of the generating tuple that matrix certificates act on.
    pub fn generator_count(&self) -> usize {
        match &self.mode {
            ModuleMode::Matrix { generators, .. } => generators.len(),
            _ => 1,
        }
    }

    /// Direct sum of two action modules, as a block-diagonal matrix action.
    pub fn direct_sum(&self, other: &ModulePresentation) -> Result<ModulePresentation> {
        check_rank(self.rank, other.rank)?;
        let (Some(a), Some(b)) = (self.action(), other.action()) else {
            return Err(Error::Unsupported("direct sums of cyclic presentations".into()));
        };
        let d = a.dim + b.dim;
        let mats = a
            .mats
            .iter()
            .zip(&b.mats)
            .map(|(x, y)| {
                let mut m = QMatrix::zeros(d, d);
                for i in 0..a.dim {
                    for j in 0..a.dim {
                        m[(i, j)] = x[(i, j)].clone();
                    }
                }
                for i in 0..b.dim {
                    for j in 0..b.dim {
                        m[(a.dim + i, a.dim + j)] = y[(i, j)].clone();
                    }
                }
                m
            })
            .collect();
        let pad = |v: &[Rational], before: usize, after: usize| {
            let mut out = vec![Rational::zero(); before];
            out.extend_from_slice(v);
            out.resize(before + v.len() + after, Rational::zero());
            out
        };
        let generators = a
            .generators
            .iter()
            .map(|v| pad(v, 0, b.dim))
            .chain(b.generators.iter().map(|v| pad(v, a.dim, 0)))
            .collect();
        ModulePresentation::matrix(mats, generators)
    }

    fn action(&self) -> Option<Action> {
        match &self.mode {
            ModuleMode::Cyclic { .. } => None,
            ModuleMode::Scalar { rhos } => Some(Action::new(
                rhos.iter().map(|r| QMatrix::scalar(1, r.clone())).collect(),
                vec![vec![int(1)]],
            )),
            ModuleMode::Matrix { mats, generators } => Some(Action::new(mats.clone(), generators.clone())),
        }
    }
}

struct Action {
    dim: usize,
    mats: Vec<QMatrix>,
    inverses: Vec<QMatrix>,
    generators: Vec<Vec<Rational>>,
}

impl Action {
    fn new(mats: Vec<QMatrix>, generators: Vec<Vec<Rational>>) -> Self {
        let inverses = mats.iter().map(|m| m.inverse().expect("validated invertible")).collect();
        Action { dim: mats[0].rows(), mats, inverses, generators }
    }

    fn monomial(&self, g: &Monomial) -> QMatrix {
        let mut acc = QMatrix::identity(self.dim);
        for (i, &e) in g.0.iter().enumerate() {
            let base = if e < 0 { &self.inverses[i] } else { &self.mats[i] };
            for _ in 0..e.unsigned_abs() {
                acc = acc.mul(base);
            }
        }
        acc
    }

    fn eval(&self, f: &LaurentPoly) -> QMatrix {
        f.terms()
            .fold(QMatrix::zeros(self.dim, self.dim), |acc, (g, c)| acc.add(&self.monomial(g).scale(c)))
    }
}

fn content(f: &LaurentPoly) -> BigInt {
    f.terms().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c.numer()))
}

fn nonzero_generators(gens: &[LaurentPoly]) -> Vec<LaurentPoly> {
    gens.iter().filter(|g| !g.is_zero()).cloned().collect()
}

fn cyclic_membership(lambda: &LaurentPoly, domain: &CoefficientDomain, gens: &[LaurentPoly]) -> Result<bool> {
    if lambda.domain() != domain {
        return Err(Error::InvalidInput("element and module over different domains".into()));
    }
    let gens = nonzero_generators(gens);
    if gens.is_empty() {
        return Ok(lambda.is_zero());
    }
    match domain {
        CoefficientDomain::IntegerRing => {
            let [f] = gens.as_slice() else {
                return Err(Error::Unsupported("cyclic modules over ℤ need a principal ideal".into()));
            };
            if !content(f).is_one() {
                return Err(Error::Unsupported("cyclic modules over ℤ need a primitive generator".into()));
            }
            // Gauss: for primitive f, divisibility in ℤG equals divisibility in ℚG.
            let q = CoefficientDomain::RationalField;
            ideal_membership(&lambda.with_domain(q.clone())?, &[f.with_domain(q)?])
        }
        _ => ideal_membership(lambda, &gens),
    }
}

/// Whether λ kills A: λ(M₁,…,Mₙ) = 0 for action modules, λ ∈ I for cyclic ones.
pub fn annihilates(lambda: &LaurentPoly, m: &ModulePresentation) -> Result<bool> {
    check_rank(m.rank, lambda.rank())?;
    match &m.mode {
        ModuleMode::Cyclic { domain, gens } => cyclic_membership(lambda, domain, gens),
        _ => {
            if matches!(lambda.domain(), CoefficientDomain::PrimeField(_)) {
                return Err(Error::InvalidInput("action modules are ℤ-modules".into()));
            }
            Ok(m.action().expect("action mode").eval(lambda).is_zero())
        }
    }
}

fn integral(lambda: &LaurentPoly) -> bool {
    lambda.terms().all(|(_, c)| c.is_integer())
}

/// λ certifies `[χ] ∈ Σ⁰` when it annihilates A and its χ-initial part is 1.
pub fn certificate_valid(lambda: &LaurentPoly, chi: &Character, m: &ModulePresentation) -> Result<bool> {
    if chi.is_zero() {
        return Err(Error::Precondition("certificates need a nonzero character".into()));
    }
    check_rank(m.rank, chi.rank())?;
    check_rank(m.rank, lambda.rank())?;
    if !initial_part(chi, lambda)?.is_one() {
        return Ok(false);
    }
    if !matches!(m.mode, ModuleMode::Cyclic { .. }) && !integral(lambda) {
        return Ok(false);
    }
    annihilates(lambda, m)
}

/// Search limits shared by the certificate searches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_box: u32,
    pub coeff_bound: BigInt,
    pub max_certificates: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_box: 6, coeff_bound: BigInt::from(1_000_000), max_certificates: 64 }
    }
}

const MAX_BOX_POINTS: usize = 100_000;
const FULL_SUPPORT_LIMIT: usize = 40;
const PAIR_LIMIT: usize = 200;
const CHUNK: usize = 4096;

fn box_points(n: usize, k: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![-k; n];
    loop {
        out.push(Monomial(cur.clone()));
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < k {
                cur[i] += 1;
                break;
            }
            cur[i] = -k;
        }
    }
}

/// Searches λ = 1 + Σ u_g x^g over `g` accepted by `accept`, solving
/// λ(M) = 0 over ℤ. Order: box size, then support size, then lexicographic
/// order of the support; the first solution of height ≤ C wins.
fn search(
    m: &ModulePresentation,
    bounds: &SearchBounds,
    accept: impl Fn(&Monomial) -> Result<bool>,
) -> Result<Option<LaurentPoly>> {
    let Some(action) = m.action() else {
        return Err(Error::Unsupported(
            "certificate search needs a scalar or matrix action; check cyclic certificates with certificate_valid".into(),
        ));
    };
    let n = m.rank;
    let zero = Monomial::zero(n);
    let zero_col = action.monomial(&zero).entries().to_vec();
    let mut cands: Vec<(Monomial, Vec<Rational>)> = Vec::new();
    for k in 1..=i64::from(bounds.max_box) {
        if (2 * k as usize + 1).checked_pow(n as u32).is_none_or(|c| c > MAX_BOX_POINTS) {
            break;
        }
        let before = cands.len();
        for g in box_points(n, k) {
            if g.0.iter().map(|e| e.abs()).max() == Some(k) && accept(&g)? {
                let col = action.monomial(&g).entries().to_vec();
                cands.push((g, col));
            }
        }
        if cands.len() == before {
            continue;
        }
        cands.sort_by(|a, b| a.0.cmp(&b.0));
        let rows: Vec<Vec<Rational>> = (0..zero_col.len())
            .map(|r| std::iter::once(zero_col[r].clone()).chain(cands.iter().map(|c| c.1[r].clone())).collect())
            .collect();
        let b = integer_rows(&rows);
        let columns: Vec<Vec<BigInt>> = (1..=cands.len()).map(|j| b.iter().map(|row| row[j].clone()).collect()).collect();
        let target: Vec<BigInt> = b.iter().map(|row| -&row[0]).collect();
        if !lattice_contains(&columns, &target) {
            continue;
        }
        let fresh: Vec<bool> = cands.iter().map(|c| c.0 .0.iter().map(|e| e.abs()).max() == Some(k)).collect();
        let m_c = cands.len();
        let sparse = match m_c {
            c if c <= FULL_SUPPORT_LIMIT => 3,
            c if c <= PAIR_LIMIT => 2,
            _ => 1,
        };
        let mut supports: Vec<Vec<usize>> = Vec::new();
        for size in 1..=sparse.min(m_c) {
            supports.extend(combinations(m_c, size).into_iter().filter(|s| s.iter().any(|&i| fresh[i])));
        }
        if m_c <= FULL_SUPPORT_LIMIT && m_c > sparse {
            supports.push((0..m_c).collect());
        }
        for chunk in supports.chunks(CHUNK) {
            let solved = par::map(chunk, |s| solve_on_support(&b, s, &bounds.coeff_bound));
            if let Some((s, u)) = chunk.iter().zip(solved).find_map(|(s, u)| u.map(|u| (s, u))) {
                let terms = std::iter::once((zero.0.clone(), Rational::one())).chain(
                    s.iter().zip(&u[1..]).map(|(&i, c)| (cands[i].0 .0.clone(), Rational::from_integer(c.clone()))),
                );
                return Ok(Some(LaurentPoly::from_terms(n, CoefficientDomain::IntegerRing, terms)?));
            }
        }
    }
    Ok(None)
}

fn solve_on_support(b: &[Vec<BigInt>], support: &[usize], bound: &BigInt) -> Option<Vec<BigInt>> {
    let sub: Vec<Vec<BigInt>> = b
        .iter()
        .map(|row| std::iter::once(row[0].clone()).chain(support.iter().map(|&i| row[i + 1].clone())).collect())
        .collect();
    let u = integer_solution_with_unit(&sub, support.len() + 1, 0)?;
    (u.iter().all(|c| c.abs() <= *bound) && u[1..].iter().any(|c| !c.is_zero())).then_some(u)
}

/// Looks for an integral certificate at χ, supported on `{0}` and monomials
/// of positive χ-value inside growing boxes `[−K′, K′]ⁿ`, `K′ ≤ K`.
pub fn certificate_search(
    m: &ModulePresentation,
    chi: &Character,
    max_box: u32,
    coeff_bound: &BigInt,
) -> Result<Option<LaurentPoly>> {
    if chi.is_zero() {
        return Err(Error::Precondition("certificates need a nonzero character".into()));
    }
    check_rank(m.rank, chi.rank())?;
    let bounds = SearchBounds { max_box, coeff_bound: coeff_bound.clone(), ..SearchBounds::default() };
    search(m, &bounds, |g| Ok(chi_value(chi, g)?.is_positive()))
}

/// Like [`certificate_search`], but the certificate must be valid at every
/// nonzero character of the cone at once.
pub fn certificate_search_cone(
    m: &ModulePresentation,
    cone: &Polyhedron,
    max_box: u32,
    coeff_bound: &BigInt,
) -> Result<Option<LaurentPoly>> {
    check_rank(m.rank, cone.rank())?;
    if !cone.is_conical() || !cone.has_nonzero_point() {
        return Err(Error::Precondition("expected a cone with a nonzero point".into()));
    }
    let bounds = SearchBounds { max_box, coeff_bound: coeff_bound.clone(), ..SearchBounds::default() };
    search(m, &bounds, |g| {
        let below = Constraint::linear(g.0.iter().map(|&e| int(-e)).collect(), Strength::Ge);
        Ok(!cone.clone().with(below).has_nonzero_point())
    })
}

/// The open cone of characters at which λ has initial part 1.
pub fn validity_cone(lambda: &LaurentPoly) -> Polyhedron {
    let n = lambda.rank();
    let mut p = Polyhedron::space(n);
    if !lambda.coefficient(&Monomial::zero(n)).is_one() {
        return p.with(Constraint::new(vec![Rational::zero(); n], int(-1), Strength::Ge));
    }
    for g in lambda.support().filter(|g| !g.is_zero()) {
        p.push(Constraint::linear(g.as_rationals(), Strength::Gt));
    }
    p
}

/// A square matrix over the group ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyMatrix {
    rows: Vec<Vec<LaurentPoly>>,
}

const MAX_LAPLACE: usize = 8;

impl PolyMatrix {
    pub fn new(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let k = rows.len();
        let Some(first) = rows.first().and_then(|r| r.first()) else {
            return Err(Error::InvalidInput("empty matrix".into()));
        };
        let (rank, domain) = (first.rank(), first.domain().clone());
        for r in &rows {
            if r.len() != k {
                return Err(Error::InvalidInput("θ must be square".into()));
            }
            for e in r {
                check_rank(rank, e.rank())?;
                if *e.domain() != domain {
                    return Err(Error::InvalidInput("matrix entries over different domains".into()));
                }
            }
        }
        Ok(PolyMatrix { rows })
    }

    pub fn diagonal(entries: Vec<LaurentPoly>) -> Result<Self> {
        let k = entries.len();
        let rows = entries
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                let zero = LaurentPoly::zero(e.rank(), e.domain().clone());
                let mut row = vec![zero; k];
                row[i] = e;
                row
            })
            .collect();
        PolyMatrix::new(rows)
    }

    pub fn identity(k: usize, rank: usize, domain: CoefficientDomain) -> Result<Self> {
        PolyMatrix::diagonal(vec![LaurentPoly::one(rank, domain); k])
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rank(&self) -> usize {
        self.rows[0][0].rank()
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<LaurentPoly>] {
        &self.rows
    }

    pub fn domain(&self) -> &CoefficientDomain {
        self.rows[0][0].domain()
    }

    pub fn transpose(&self) -> PolyMatrix {
        let k = self.size();
        PolyMatrix { rows: (0..k).map(|j| (0..k).map(|i| self.rows[i][j].clone()).collect()).collect() }
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        check_rank(self.size(), other.size())?;
        check_rank(self.rank(), other.rank())?;
        let k = self.size();
        let rows = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        (0..k).fold(LaurentPoly::zero(self.rank(), self.domain().clone()), |acc, l| {
                            &acc + &(&self.rows[i][l] * &other.rows[l][j])
                        })
                    })
                    .collect()
            })
            .collect();
        PolyMatrix::new(rows)
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        check_rank(self.size(), other.size())?;
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
        PolyMatrix::new(rows)
    }

    /// θ·v for a column vector v.
    pub fn apply(&self, v: &[LaurentPoly]) -> Result<Vec<LaurentPoly>> {
        check_rank(self.size(), v.len())?;
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(LaurentPoly::zero(self.rank(), self.domain().clone()), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    /// Entries' components of χ-degree zero, or `None` if some entry has
    /// negative χ-order.
    fn degree_zero_part(&self, chi: &Character) -> Result<Option<Vec<Vec<LaurentPoly>>>> {
        let mut out = Vec::with_capacity(self.size());
        for row in &self.rows {
            let mut r = Vec::with_capacity(row.len());
            for e in row {
                let grades = grading(chi, e)?;
                if grades.first().is_some_and(|(d, _)| d.is_negative()) {
                    return Ok(None);
                }
                r.push(
                    grades
                        .into_iter()
                        .find(|(d, _)| d.is_zero())
                        .map(|(_, p)| p)
                        .unwrap_or_else(|| LaurentPoly::zero(e.rank(), e.domain().clone())),
                );
            }
            out.push(r);
        }
        Ok(Some(out))
    }
}

/// θ certifies `[χ] ∈ Σ⁰` when θ·a = 0 on the generating tuple and its
/// χ-initial grade is the identity matrix.
pub fn matrix_certificate_valid(theta: &PolyMatrix, chi: &Character, m: &ModulePresentation) -> Result<bool> {
    if chi.is_zero() {
        return Err(Error::Precondition("certificates need a nonzero character".into()));
    }
    check_rank(m.rank, chi.rank())?;
    check_rank(m.rank, theta.rank())?;
    check_rank(m.generator_count(), theta.size())?;
    let Some(zero_part) = theta.degree_zero_part(chi)? else {
        return Ok(false);
    };
    for (i, row) in zero_part.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if (i == j && !e.is_one()) || (i != j && !e.is_zero()) {
                return Ok(false);
            }
        }
    }
    matrix_annihilates(theta, m)
}

/// Whether θ·a = 0 for the generating tuple a of A.
pub fn matrix_annihilates(theta: &PolyMatrix, m: &ModulePresentation) -> Result<bool> {
    check_rank(m.rank, theta.rank())?;
    check_rank(m.generator_count(), theta.size())?;
    match (m.action(), &m.mode) {
        (None, ModuleMode::Cyclic { domain, .. }) => annihilates(&theta.entry(0, 0).with_domain(domain.clone())?, m),
        (Some(action), _) => {
            if !theta.rows.iter().flatten().all(integral) {
                return Ok(false);
            }
            for row in &theta.rows {
                let mut acc = vec![Rational::zero(); action.dim];
                for (e, a) in row.iter().zip(&action.generators) {
                    for (x, y) in acc.iter_mut().zip(action.eval(e).mul_vec(a)) {
                        *x += y;
                    }
                }
                if acc.iter().any(|x| !x.is_zero()) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (None, _) => unreachable!("only cyclic presentations lack an action"),
    }
}

/// det θ by Laplace expansion. A valid matrix certificate at χ has a
/// determinant that is a valid scalar certificate at χ.
pub fn determinant_reduction(theta: &PolyMatrix) -> Result<LaurentPoly> {
    if theta.size() > MAX_LAPLACE {
        return Err(Error::GuardExceeded(format!("Laplace expansion limited to {MAX_LAPLACE}×{MAX_LAPLACE}")));
    }
    let idx: Vec<usize> = (0..theta.size()).collect();
    Ok(laplace(&theta.rows, 0, &idx))
}

fn laplace(rows: &[Vec<LaurentPoly>], row: usize, cols: &[usize]) -> LaurentPoly {
    let sample = &rows[0][0];
    if cols.is_empty() {
        return LaurentPoly::one(sample.rank(), sample.domain().clone());
    }
    let mut acc = LaurentPoly::zero(sample.rank(), sample.domain().clone());
    for (pos, &c) in cols.iter().enumerate() {
        let e = &rows[row][c];
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = e * &laplace(rows, row + 1, &rest);
        acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Three-valued answer for predicates that may depend on undecided directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    True,
    False,
    Undecided,
}

impl From<bool> for Decision {
    fn from(b: bool) -> Self {
        if b {
            Decision::True
        } else {
            Decision::False
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Sigma,
    Complement,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaCertificate {
    /// Cone of characters at which `lambda` is valid.
    pub region: Polyhedron,
    pub sample: Direction,
    pub lambda: LaurentPoly,
}

/// Why the characters of a cone lie outside Σ⁰.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComplementReason {
    /// A valuation of the coefficient ring whose values on the generators of
    /// G span the cone.
    Valuation {
        valuation: ValuationSpec,
        #[serde(with = "crate::rational::serde_q::vec")]
        values: Vec<Rational>,
    },
    /// Some positive multiple of each character lies in the tropical
    /// hypersurface of the generator of the annihilator.
    Tropical { valuation: ValuationSpec, generator: LaurentPoly },
    /// The annihilator is zero, so every monomial valuation survives.
    ZeroIdeal,
    /// The generator vanishes mod p, so A maps onto 𝔽_p[G].
    Reduction { p: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementWitness {
    pub cone: Polyhedron,
    #[serde(flatten)]
    pub reason: ComplementReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaResult {
    pub rank: usize,
    pub proved_sigma: SphericalSet,
    pub proved_complement: SphericalSet,
    pub undecided: SphericalSet,
    pub certificates: Vec<SigmaCertificate>,
    pub complement_witnesses: Vec<ComplementWitness>,
    /// Outer bound for the complement when only a prevariety is known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complement_bound: Option<SphericalSet>,
    pub exact: bool,
    pub notes: Vec<String>,
}

/// Outcome of the FPₘ hemisphere test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FpmOutcome {
    pub m: usize,
    pub decision: Decision,
    /// Set for 3 ≤ m, where the criterion is only conjectured.
    pub conjectural: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_subset: Option<Vec<Direction>>,
}

const MAX_FPM_POINTS: usize = 12;

impl SigmaResult {
    fn assemble(
        rank: usize,
        proved_sigma: SphericalSet,
        proved_complement: SphericalSet,
        certificates: Vec<SigmaCertificate>,
        complement_witnesses: Vec<ComplementWitness>,
        notes: Vec<String>,
    ) -> Result<Self> {
        let undecided = proved_sigma.union(&proved_complement)?.complement();
        Ok(SigmaResult {
            rank,
            exact: undecided.is_empty(),
            proved_sigma,
            proved_complement,
            undecided,
            certificates,
            complement_witnesses,
            complement_bound: None,
            notes,
        })
    }

    pub fn classify(&self, d: &Direction) -> Result<Membership> {
        Ok(if self.proved_sigma.contains(d)? {
            Membership::Sigma
        } else if self.proved_complement.contains(d)? {
            Membership::Complement
        } else {
            Membership::Undecided
        })
    }

    /// First certificate whose region contains `d`.
    pub fn certificate_for(&self, d: &Direction) -> Option<&SigmaCertificate> {
        let chi = d.character();
        self.certificates.iter().find(|c| c.region.contains(chi.values()))
    }

    pub fn witness_for(&self, d: &Direction) -> Option<&ComplementWitness> {
        let chi = d.character();
        self.complement_witnesses.iter().find(|w| w.cone.contains(chi.values()))
    }

    /// Finite presentability of the metabelian extension: Σ⁰ ∪ −Σ⁰ must be
    /// the whole sphere.
    pub fn finitely_presented(&self) -> Decision {
        if self.proved_sigma.covers_with_antipodal() {
            return Decision::True;
        }
        if self.undecided.is_empty() {
            return Decision::False;
        }
        match self.proved_sigma.union(&self.undecided) {
            Ok(optimistic) if optimistic.covers_with_antipodal() => Decision::Undecided,
            _ => Decision::False,
        }
    }

    /// Type FP∞: the complement is finite and inside an open hemisphere.
    pub fn fp_infinity(&self) -> Result<Decision> {
        let Some(dirs) = self.proved_complement.finite_directions()? else {
            return Ok(Decision::False);
        };
        let inside = dirs.is_empty() || matches!(in_open_hemisphere(&dirs)?, Hemisphere::Witness(_));
        Ok(match (inside, self.undecided.is_empty()) {
            (false, _) => Decision::False,
            (true, true) => Decision::True,
            (true, false) => Decision::Undecided,
        })
    }

    /// Whether every m-point subset of the complement lies in an open
    /// hemisphere.
    pub fn fp_m(&self, m: usize) -> Result<FpmOutcome> {
        if m == 0 {
            return Err(Error::InvalidInput("m must be positive".into()));
        }
        let conjectural = m >= 3;
        let undecided = FpmOutcome { m, decision: Decision::Undecided, conjectural, failing_subset: None };
        if !self.undecided.is_empty() {
            return Ok(undecided);
        }
        let Some(dirs) = self.proved_complement.finite_directions()? else {
            return Ok(undecided);
        };
        if dirs.len() > MAX_FPM_POINTS {
            return Err(Error::GuardExceeded(format!("complement has more than {MAX_FPM_POINTS} points")));
        }
        if dirs.is_empty() {
            return Ok(FpmOutcome { decision: Decision::True, ..undecided });
        }
        let size = m.min(dirs.len());
        let subsets = combinations(dirs.len(), size);
        let verdicts = par::map(&subsets, |s| {
            let pts: Vec<Direction> = s.iter().map(|&i| dirs[i].clone()).collect();
            in_open_hemisphere(&pts).map(|h| matches!(h, Hemisphere::Witness(_)))
        });
        for (s, v) in subsets.iter().zip(verdicts) {
            if !v? {
                return Ok(FpmOutcome {
                    m,
                    decision: Decision::False,
                    conjectural,
                    failing_subset: Some(s.iter().map(|&i| dirs[i].clone()).collect()),
                });
            }
        }
        Ok(FpmOutcome { m, decision: Decision::True, conjectural, failing_subset: None })
    }
}

fn nonzero_point(p: &Polyhedron) -> Option<Vec<Rational>> {
    if let Some(x) = p.relative_interior_point() {
        if x.iter().any(|v| !v.is_zero()) {
            return Some(x);
        }
    }
    let n = p.rank();
    for i in 0..n {
        for s in [1, -1] {
            let mut normal = vec![Rational::zero(); n];
            normal[i] = int(s);
            let q = p.clone().with(Constraint::new(normal, int(-1), Strength::Ge));
            if let Some(x) = q.relative_interior_point() {
                return Some(x);
            }
        }
    }
    None
}

fn sample_direction(p: &Polyhedron) -> Result<Direction> {
    nonzero_point(p)
        .and_then(|x| Direction::from_rationals(&x))
        .ok_or_else(|| Error::Precondition("cone without nonzero points".into()))
}

struct Cover {
    sigma: SphericalSet,
    certificates: Vec<SigmaCertificate>,
    notes: Vec<String>,
}

/// Covers `target` with certificate regions: first one certificate for a
/// whole piece, then a pointwise certificate whose validity cone is removed.
/// Pieces where both fail are left out of the cover.
fn cover_sigma(m: &ModulePresentation, target: &SphericalSet, bounds: &SearchBounds) -> Result<Cover> {
    let n = m.rank;
    let mut remaining = target.clone();
    let mut cover = Cover { sigma: SphericalSet::empty(n), certificates: Vec::new(), notes: Vec::new() };
    while let Some(piece) = remaining.pieces().first().cloned() {
        if cover.certificates.len() >= bounds.max_certificates {
            cover.notes.push(format!("stopped after {} certificates", bounds.max_certificates));
            break;
        }
        let piece_set = SphericalSet::from_cones(n, vec![piece.clone()])?;
        if let Some(lambda) = certificate_search_cone(m, &piece, bounds.max_box, &bounds.coeff_bound)? {
            let sample = sample_direction(&piece)?;
            cover.sigma = cover.sigma.union(&piece_set)?;
            remaining = remaining.difference(&piece_set)?;
            cover.certificates.push(SigmaCertificate { region: piece, sample, lambda });
            continue;
        }
        let sample = sample_direction(&piece)?;
        match certificate_search(m, &sample.character(), bounds.max_box, &bounds.coeff_bound)? {
            Some(lambda) => {
                let region = validity_cone(&lambda);
                let region_set = SphericalSet::from_cones(n, vec![region.clone()])?;
                cover.sigma = cover.sigma.union(&region_set.intersect(target)?)?;
                remaining = remaining.difference(&region_set)?;
                cover.certificates.push(SigmaCertificate { region, sample, lambda });
            }
            None => {
                cover.notes.push(format!(
                    "no certificate near {sample} with box ≤ {} and coefficients ≤ {}",
                    bounds.max_box, bounds.coeff_bound
                ));
                remaining = remaining.difference(&piece_set)?;
            }
        }
    }
    Ok(cover)
}

/// Characteristic polynomial det(tI − A), coefficients by ascending degree.
fn char_poly(a: &QMatrix) -> Vec<Rational> {
    let d = a.rows();
    let mut coeffs = vec![Rational::zero(); d + 1];
    coeffs[d] = Rational::one();
    let mut mk = QMatrix::zeros(d, d);
    for k in 1..=d {
        mk = a.mul(&mk).add(&QMatrix::scalar(d, coeffs[d - k + 1].clone()));
        let am = a.mul(&mk);
        let trace: Rational = (0..d).map(|i| am[(i, i)].clone()).sum();
        coeffs[d - k] = -trace / int(k as i64);
    }
    coeffs
}

const MAX_DIVISORS: usize = 4096;

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut n = n.abs();
    let mut out = vec![BigInt::one()];
    for p in prime_support(&[Rational::from_integer(n.clone())])? {
        let p = BigInt::from(p);
        let mut powers = vec![BigInt::one()];
        while n.is_multiple_of(&p) {
            n /= &p;
            powers.push(powers.last().expect("nonempty") * &p);
        }
        out = out.iter().flat_map(|d| powers.iter().map(move |q| d * q)).collect();
        if out.len() > MAX_DIVISORS {
            return Err(Error::GuardExceeded("too many divisors in the rational root test".into()));
        }
    }
    Ok(out)
}

fn horner(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Distinct rational roots, sorted.
fn rational_roots(coeffs: &[Rational]) -> Result<Vec<Rational>> {
    let mut coeffs: Vec<Rational> = coeffs.to_vec();
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    let mut roots = Vec::new();
    let lead = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if lead > 0 {
        roots.push(Rational::zero());
        coeffs.drain(..lead);
    }
    if coeffs.len() < 2 {
        return Ok(roots);
    }
    let scale = Rational::from_integer(lcm_of_denominators(&coeffs));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &scale).to_integer()).collect();
    let ps = divisors(&ints[0])?;
    let qs = divisors(ints.last().expect("degree ≥ 1"))?;
    for p in &ps {
        for q in &qs {
            for s in [1, -1] {
                let x = Rational::new(p * s, q.clone());
                if !roots.contains(&x) && horner(&coeffs, &x).is_zero() {
                    roots.push(x);
                }
            }
        }
    }
    roots.sort();
    Ok(roots)
}

const MAX_EIGEN_COMBOS: usize = 4096;

/// Joint eigenvalue tuples when the commuting matrices diagonalize over ℚ.
fn joint_eigen_tuples(mats: &[QMatrix]) -> Result<Option<Vec<Vec<Rational>>>> {
    let d = mats[0].rows();
    let eig: Vec<Vec<Rational>> = mats.iter().map(|m| rational_roots(&char_poly(m))).collect::<Result<_>>()?;
    let combos: usize = eig.iter().map(Vec::len).product();
    if combos > MAX_EIGEN_COMBOS {
        return Err(Error::GuardExceeded("too many joint eigenvalue combinations".into()));
    }
    let mut tuples = Vec::new();
    let mut total = 0;
    let mut idx = vec![0usize; mats.len()];
    if combos == 0 {
        return Ok(None);
    }
    loop {
        let tuple: Vec<Rational> = idx.iter().zip(&eig).map(|(&i, e)| e[i].clone()).collect();
        let rows: Vec<Vec<Rational>> = mats
            .iter()
            .zip(&tuple)
            .flat_map(|(m, l)| m.add(&QMatrix::scalar(d, -l)).to_rows())
            .collect();
        let k = nullspace_of(&rows, d).len();
        if k > 0 {
            total += k;
            tuples.push(tuple);
        }
        let mut pos = mats.len();
        loop {
            if pos == 0 {
                return Ok((total == d).then_some(tuples));
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < eig[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Σ⁰ of a ℤ-module on which G acts by scalars or commuting matrices. The
/// complement comes from the p-adic valuations of the (joint) eigenvalues,
/// and the rest of the sphere is covered by searched certificates.
pub fn sigma_scalar_action_exact(m: &ModulePresentation) -> Result<SigmaResult> {
    sigma_scalar_action_with(m, &SearchBounds::default())
}

pub fn sigma_scalar_action_with(m: &ModulePresentation, bounds: &SearchBounds) -> Result<SigmaResult> {
    let n = m.rank;
    let tuples = match &m.mode {
        ModuleMode::Scalar { rhos } => Some(vec![rhos.clone()]),
        ModuleMode::Matrix { mats, .. } => joint_eigen_tuples(mats)?,
        ModuleMode::Cyclic { .. } => {
            return Err(Error::Unsupported("expected a scalar or matrix action".into()));
        }
    };
    let mut notes = Vec::new();
    let mut found: BTreeMap<Direction, ComplementWitness> = BTreeMap::new();
    match &tuples {
        Some(tuples) => {
            for t in tuples {
                for p in prime_support(t)? {
                    let values: Vec<Rational> =
                        t.iter().map(|r| padic_value(p, r).finite().cloned().expect("nonzero")).collect();
                    if let Some(d) = Direction::from_rationals(&values) {
                        found.entry(d.clone()).or_insert_with(|| ComplementWitness {
                            cone: Polyhedron::open_ray(&d),
                            reason: ComplementReason::Valuation { valuation: ValuationSpec::PAdic { p }, values },
                        });
                    }
                }
            }
        }
        None => notes.push("action is not diagonalizable over ℚ; complement left undecided".into()),
    }
    let dirs: Vec<Direction> = found.keys().cloned().collect();
    let complement = SphericalSet::from_directions(n, &dirs)?;
    let target = if tuples.is_some() { complement.complement() } else { SphericalSet::sphere(n) };
    let cover = cover_sigma(m, &target, bounds)?;
    notes.extend(cover.notes);
    SigmaResult::assemble(n, cover.sigma, complement, cover.certificates, found.into_values().collect(), notes)
}

/// Certificates `c_g⁻¹ x^{−g} f` on the open normal cone of each vertex `g`
/// of the Newton polytope whose coefficient is invertible in the domain.
fn vertex_certificates(f: &LaurentPoly) -> Result<Vec<SigmaCertificate>> {
    let mut out = Vec::new();
    for (g0, c0) in f.terms() {
        let Some(inv) = f.domain().inverse(c0) else {
            continue;
        };
        let mut region = Polyhedron::space(f.rank());
        for g in f.support().filter(|g| *g != g0) {
            let diff: Vec<Rational> = g.0.iter().zip(&g0.0).map(|(a, b)| int(a - b)).collect();
            region.push(Constraint::linear(diff, Strength::Gt));
        }
        if !region.has_nonzero_point() {
            continue;
        }
        let lambda = f.shift(&g0.inverse()).scale(&inv);
        out.push(SigmaCertificate { sample: sample_direction(&region)?, region, lambda });
    }
    Ok(out)
}

fn sigma_from_certificates(n: usize, certs: &[SigmaCertificate]) -> Result<SphericalSet> {
    SphericalSet::from_cones(n, certs.iter().map(|c| c.region.clone()).collect())
}

fn zero_ideal_result(n: usize, domain: &CoefficientDomain) -> Result<SigmaResult> {
    let witness = ComplementWitness { cone: Polyhedron::space(n), reason: ComplementReason::ZeroIdeal };
    let note = format!("A is the free module over {domain:?}");
    SigmaResult::assemble(n, SphericalSet::empty(n), SphericalSet::sphere(n), Vec::new(), vec![witness], vec![note])
}

fn unit_ideal_result(n: usize, domain: &CoefficientDomain) -> Result<SigmaResult> {
    let one = LaurentPoly::one(n, domain.clone());
    let region = Polyhedron::space(n);
    let cert = SigmaCertificate { sample: sample_direction(&region)?, region, lambda: one };
    SigmaResult::assemble(n, SphericalSet::sphere(n), SphericalSet::empty(n), vec![cert], Vec::new(), vec!["A = 0".into()])
}

fn tropical_witnesses(f: &LaurentPoly, v: &ValuationSpec) -> Result<Vec<ComplementWitness>> {
    let set = trop_hypersurface(f, v)?.fan.radial_projection();
    Ok(set
        .pieces()
        .iter()
        .map(|p| ComplementWitness {
            cone: p.clone(),
            reason: ComplementReason::Tropical { valuation: v.clone(), generator: f.clone() },
        })
        .collect())
}

/// Σ⁰ of `k[G]/I` over a field k. Principal ideals are exact: the
/// complement is the radial projection of the tropical hypersurface. For
/// several generators the prevariety of a Gröbner basis bounds the
/// complement and the rest of the sphere is certified.
pub fn sigma_cyclic_field(m: &ModulePresentation) -> Result<SigmaResult> {
    let ModuleMode::Cyclic { domain, gens } = &m.mode else {
        return Err(Error::Unsupported("expected a cyclic presentation".into()));
    };
    if !domain.is_field() {
        return Err(Error::Unsupported("cyclic modules over ℤ go through sigma_cyclic_integer".into()));
    }
    let n = m.rank;
    let gens = nonzero_generators(gens);
    if gens.is_empty() {
        return zero_ideal_result(n, domain);
    }
    let basis = if gens.len() == 1 { gens } else { saturated_basis(&gens)? };
    if basis.iter().any(|b| b.len() == 1) {
        return unit_ideal_result(n, domain);
    }
    if let [f] = basis.as_slice() {
        let witnesses = tropical_witnesses(f, &ValuationSpec::Trivial)?;
        let complement = SphericalSet::from_cones(n, witnesses.iter().map(|w| w.cone.clone()).collect())?;
        let certs = vertex_certificates(f)?;
        let sigma = sigma_from_certificates(n, &certs)?;
        return SigmaResult::assemble(n, sigma, complement, certs, witnesses, Vec::new());
    }
    let bound = trop_prevariety(&basis, &ValuationSpec::Trivial)?.radial_projection();
    let mut certs = Vec::new();
    for b in &basis {
        certs.extend(vertex_certificates(b)?);
    }
    let sigma = sigma_from_certificates(n, &certs)?;
    let note = format!("annihilator has {} basis elements; complement only bounded by their prevariety", basis.len());
    let mut r = SigmaResult::assemble(n, sigma, SphericalSet::empty(n), certs, Vec::new(), vec![note])?;
    r.complement_bound = Some(bound);
    Ok(r)
}

/// Σ⁰ of `ℤ[G]/(f)`. The complement is the radial projection of the union
/// of the trivial and p-adic hypersurfaces of f; vertices with a unit
/// coefficient give the certificates.
pub fn sigma_cyclic_integer(m: &ModulePresentation) -> Result<SigmaResult> {
    let ModuleMode::Cyclic { domain: CoefficientDomain::IntegerRing, gens } = &m.mode else {
        return Err(Error::Unsupported("expected a cyclic presentation over ℤ".into()));
    };
    let n = m.rank;
    let gens = nonzero_generators(gens);
    let f = match gens.as_slice() {
        [] => return zero_ideal_result(n, &CoefficientDomain::IntegerRing),
        [f] => f,
        _ => return Err(Error::Unsupported("cyclic modules over ℤ need a principal ideal".into())),
    };
    let c = content(f);
    if !c.is_one() {
        let p = *prime_support(&[Rational::from_integer(c)])?.iter().next().expect("content > 1");
        let witness = ComplementWitness { cone: Polyhedron::space(n), reason: ComplementReason::Reduction { p } };
        return SigmaResult::assemble(n, SphericalSet::empty(n), SphericalSet::sphere(n), Vec::new(), vec![witness], Vec::new());
    }
    if f.len() == 1 {
        return unit_ideal_result(n, &CoefficientDomain::IntegerRing);
    }
    let global = global_tropical_z(f)?;
    let mut witnesses = tropical_witnesses(f, &ValuationSpec::Trivial)?;
    for &p in &global.primes {
        witnesses.extend(tropical_witnesses(f, &ValuationSpec::PAdic { p })?);
    }
    let complement = global.fan.radial_projection();
    let certs = vertex_certificates(f)?;
    let sigma = sigma_from_certificates(n, &certs)?;
    SigmaResult::assemble(n, sigma, complement, certs, witnesses, Vec::new())
}

/// Σ⁰ with default search bounds, dispatched on the presentation.
pub fn sigma(m: &ModulePresentation) -> Result<SigmaResult> {
    match &m.mode {
        ModuleMode::Cyclic { domain: CoefficientDomain::IntegerRing, .. } => sigma_cyclic_integer(m),
        ModuleMode::Cyclic { .. } => sigma_cyclic_field(m),
        _ => sigma_scalar_action_exact(m),
    }
}

/// Σ⁰(A′ ⊕ A″) = Σ⁰(A′) ∩ Σ⁰(A″), with products of certificates.
pub fn sigma_direct_sum(r1: &SigmaResult, r2: &SigmaResult) -> Result<SigmaResult> {
    check_rank(r1.rank, r2.rank)?;
    let n = r1.rank;
    let sigma = r1.proved_sigma.intersect(&r2.proved_sigma)?;
    let complement = r1.proved_complement.union(&r2.proved_complement)?;
    let mut certs = Vec::new();
    for a in &r1.certificates {
        for b in &r2.certificates {
            if a.lambda.domain() != b.lambda.domain() {
                return Err(Error::InvalidInput("summands over different coefficient rings".into()));
            }
            let region = a.region.intersect(&b.region);
            if !region.has_nonzero_point() {
                continue;
            }
            certs.push(SigmaCertificate { sample: sample_direction(&region)?, region, lambda: &a.lambda * &b.lambda });
        }
    }
    let mut witnesses = r1.complement_witnesses.clone();
    for w in &r2.complement_witnesses {
        if !witnesses.contains(w) {
            witnesses.push(w.clone());
        }
    }
    let mut notes = r1.notes.clone();
    notes.extend(r2.notes.iter().cloned());
    let mut r = SigmaResult::assemble(n, sigma, complement, certs, witnesses, notes)?;
    if r1.complement_bound.is_some() || r2.complement_bound.is_some() {
        let outer = |x: &SigmaResult| match &x.complement_bound {
            Some(b) => Ok(b.clone()),
            None => x.proved_complement.union(&x.undecided),
        };
        r.complement_bound = Some(outer(r1)?.union(&outer(r2)?)?);
    }
    Ok(r)
}

pub fn metabelian_fp(m: &ModulePresentation) -> Result<Decision> {
    Ok(sigma(m)?.finitely_presented())
}

pub fn metabelian_fp_infinity(m: &ModulePresentation) -> Result<Decision> {
    sigma(m)?.fp_infinity()
}

pub fn fpm_test(m: &ModulePresentation, k: usize) -> Result<FpmOutcome> {
    sigma(m)?.fp_m(k)
}

/// Largest absolute coefficient, for reporting.
pub fn coefficient_height(lambda: &LaurentPoly) -> Option<i64> {
    lambda.terms().map(|(_, c)| c.abs().to_integer()).max().and_then(|h| h.to_i64())
}
