//! Push maps on free ℤG-modules with the canonical control map, where the
//! basis element `x_j` sits at the origin and `g·x_j` at `g`.
//!
//! Characters are not normalized. For a character χ, [`gsh`] returns
//! `min_j v_χ(φ(x_j))`; the guaranteed shift toward the unit character
//! `χ/|χ|` is that value divided by `|χ|`. Restricting the infimum to the
//! basis is exact here: φ is equivariant, so shifting c by g shifts every
//! height by χ(g), and the height of a sum is at least the minimum of the
//! heights of its terms.

use num_traits::Signed;
use serde::Serialize;

use crate::error::{check_rank, Error, Result};
use crate::lp::Strength;
use crate::polyhedra::{Constraint, Fan, Polyhedron};
use crate::rational::{dot, to_f64, ExtRational, Rational};
use crate::ring::{v_chi, Character, CoefficientDomain, Direction, LaurentPoly, Monomial};
use crate::sigma::{matrix_annihilates, ModulePresentation, PolyMatrix};

/// An equivariant endomorphism of `(ℤG)^k`, column j being the image of `x_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PushMap(PolyMatrix);

impl PushMap {
    pub fn new(matrix: PolyMatrix) -> Result<Self> {
        if *matrix.domain() != CoefficientDomain::IntegerRing {
            return Err(Error::InvalidInput("push maps have integer coefficients".into()));
        }
        Ok(PushMap(matrix))
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        PushMap::new(PolyMatrix::new(rows)?)
    }

    /// Multiplication by `f` on ℤG.
    pub fn scalar(f: LaurentPoly) -> Result<Self> {
        PushMap::from_rows(vec![vec![f]])
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }

    pub fn rank(&self) -> usize {
        self.0.rank()
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.0
    }

    fn column(&self, j: usize) -> impl Iterator<Item = &LaurentPoly> {
        self.0.rows().iter().map(move |row| &row[j])
    }

    /// Every monomial occurring in some column.
    fn support(&self) -> Vec<Monomial> {
        let mut out: Vec<Monomial> = self.0.rows().iter().flatten().flat_map(|e| e.support().cloned()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// φ ∘ ψ: apply ψ first.
    pub fn compose(&self, psi: &PushMap) -> Result<PushMap> {
        Ok(PushMap(self.0.mul(&psi.0)?))
    }

    pub fn power(&self, k: u32) -> Result<PushMap> {
        let mut acc = PushMap(PolyMatrix::identity(self.size(), self.rank(), CoefficientDomain::IntegerRing)?);
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }
}

/// ‖φ‖ as an exact squared length together with its float value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PushNorm {
    pub squared: i64,
    pub value: f64,
}

/// Largest displacement `|g|` over the monomials of φ's columns.
pub fn norm(phi: &PushMap) -> PushNorm {
    let squared = phi.support().iter().map(Monomial::norm_squared).max().unwrap_or(0);
    PushNorm { squared, value: (squared as f64).sqrt() }
}

/// `min_j v_χ(φ(x_j))`; `+∞` when every column is zero.
pub fn gsh(phi: &PushMap, chi: &Character) -> Result<ExtRational> {
    check_rank(phi.rank(), chi.rank())?;
    let mut best = ExtRational::Infinity;
    for j in 0..phi.size() {
        for e in phi.column(j) {
            best = best.min(v_chi(chi, e)?);
        }
    }
    Ok(best)
}

/// The open cone `{χ : χ(g) > 0 for every monomial g of φ}` on which the
/// guaranteed shift is positive.
pub fn sigma_of_push(phi: &PushMap) -> Result<Fan> {
    let n = phi.rank();
    let mut cone = Polyhedron::space(n);
    for g in phi.support() {
        cone.push(Constraint::linear(g.as_rationals(), Strength::Gt));
    }
    Fan::from_pieces(n, vec![cone])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaEstimate {
    /// Distinct directions of the nonzero support points of the last
    /// iterates, sorted.
    pub directions: Vec<Direction>,
    pub iterations: usize,
    /// First k with φᵏ(c) = 0, if the orbit died out.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub died_out_at: Option<usize>,
}

const TAIL: usize = 3;

/// Directions of the supports of φᵏ(c) for the last few k ≤ `iters`.
pub fn lambda_of_push_estimate(phi: &PushMap, c: &[LaurentPoly], iters: usize) -> Result<LambdaEstimate> {
    check_rank(phi.size(), c.len())?;
    for e in c {
        check_rank(phi.rank(), e.rank())?;
    }
    let mut current = c.to_vec();
    let mut tail: Vec<Vec<LaurentPoly>> = Vec::new();
    let mut died_out_at = None;
    let mut done = 0;
    for k in 1..=iters {
        current = phi.0.apply(&current)?;
        done = k;
        if current.iter().all(LaurentPoly::is_zero) {
            died_out_at = Some(k);
            break;
        }
        tail.push(current.clone());
        if tail.len() > TAIL {
            tail.remove(0);
        }
    }
    let mut directions: Vec<Direction> = tail
        .iter()
        .flatten()
        .flat_map(|e| e.support().filter_map(|g| Direction::from_rationals(&g.as_rationals())))
        .collect();
    directions.sort();
    directions.dedup();
    Ok(LambdaEstimate { directions, iterations: done, died_out_at })
}

/// Float slack allowed on top of the exact angle comparison.
pub const ANGLE_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleCheck {
    pub direction: Direction,
    pub angle: f64,
    pub exact: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleReport {
    #[serde(with = "crate::rational::serde_q")]
    pub gsh: Rational,
    pub norm_squared: i64,
    /// arccos of the unit guaranteed shift over ‖φ‖.
    pub radius: f64,
    pub checks: Vec<AngleCheck>,
    pub pass: bool,
}

/// Checks that each estimated limit direction is within angle
/// `arccos(gsh/‖φ‖)` of χ. The comparison `cos ∠(χ, e) ≥ gsh/(|χ|·‖φ‖)`
/// is done exactly on squares; the float angle gets [`ANGLE_SLACK`].
pub fn check_angle_bound(phi: &PushMap, chi: &Character, dirs: &[Direction]) -> Result<AngleReport> {
    let shift = gsh(phi, chi)?;
    let v = match shift.finite() {
        Some(v) if v.is_positive() => v.clone(),
        _ => return Err(Error::Precondition("the guaranteed shift must be positive and finite".into())),
    };
    let nrm = norm(phi);
    let chi_sq = chi.norm_squared();
    let nrm_q = Rational::from_integer(nrm.squared.into());
    let ratio = to_f64(&v) / (to_f64(&chi_sq).sqrt() * nrm.value);
    let radius = ratio.clamp(-1.0, 1.0).acos();
    let mut checks = Vec::with_capacity(dirs.len());
    for d in dirs {
        check_rank(chi.rank(), d.rank())?;
        let e = d.character();
        let ce = dot(chi.values(), e.values());
        // χ·e · ‖φ‖ ≥ v·|e|, with both sides squared once χ·e > 0.
        let exact = ce.is_positive() && &ce * &ce * &nrm_q >= &v * &v * e.norm_squared();
        let cos = to_f64(&ce) / (to_f64(&chi_sq).sqrt() * to_f64(&e.norm_squared()).sqrt());
        let angle = cos.clamp(-1.0, 1.0).acos();
        checks.push(AngleCheck { direction: d.clone(), angle, exact, pass: exact || angle <= radius + ANGLE_SLACK });
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(AngleReport { gsh: v, norm_squared: nrm.squared, radius, checks, pass })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftBound {
    pub label: String,
    pub value: ExtRational,
    pub bound: ExtRational,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComposeReport {
    pub checks: Vec<ShiftBound>,
    pub pass: bool,
}

/// Highest power tested in [`compose_gsh_check`].
pub const MAX_POWER: u32 = 5;

/// Superadditivity of the guaranteed shift: `gsh(φψ) ≥ gsh(φ) + gsh(ψ)` and
/// `gsh(φᵏ) ≥ k·gsh(φ)` for `k ≤ 5`, all exact.
pub fn compose_gsh_check(phi: &PushMap, psi: &PushMap, chi: &Character) -> Result<ComposeReport> {
    check_rank(phi.size(), psi.size())?;
    check_rank(phi.rank(), psi.rank())?;
    let g_phi = gsh(phi, chi)?;
    let mut checks = Vec::new();
    let mut record = |label: String, value: ExtRational, bound: ExtRational| {
        let pass = value >= bound;
        checks.push(ShiftBound { label, value, bound, pass });
    };
    record("phi.psi".into(), gsh(&phi.compose(psi)?, chi)?, g_phi.add(&gsh(psi, chi)?));
    let mut power = phi.clone();
    for k in 1..=MAX_POWER {
        if k > 1 {
            power = phi.compose(&power)?;
        }
        record(format!("phi^{k}"), gsh(&power, chi)?, g_phi.scale(&Rational::from_integer(k.into())));
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(ComposeReport { checks, pass })
}

/// Whether `ε ∘ φ = ε` for the augmentation ε : (ℤG)^k → A sending `x_j`
/// to the j-th generator of A; equivalently `1 − φᵀ` kills the generators.
pub fn lifts_identity(phi: &PushMap, m: &ModulePresentation) -> Result<bool> {
    check_rank(m.rank(), phi.rank())?;
    matrix_annihilates(&push_certificate(phi)?, m)
}

/// `1 − φᵀ`: a matrix certificate at every χ with positive guaranteed
/// shift, when φ lifts the identity of A.
pub fn push_certificate(phi: &PushMap) -> Result<PolyMatrix> {
    let id = PolyMatrix::identity(phi.size(), phi.rank(), CoefficientDomain::IntegerRing)?;
    id.sub(&phi.0.transpose())
}
