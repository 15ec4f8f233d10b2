//! The group `⟨a, t | t a t⁻¹ = a^{p²}⟩` as upper triangular matrices
//! `[[pᵏ, b], [0, p⁻ᵏ]]` acting on the upper half-plane, its modules A and
//! B over ℤ[1/p], and exact checks of their horospherical limit sets.
//!
//! All geometry stays rational. A Busemann value `ln L` is carried as its
//! log-argument `L`, so sums of Busemann values become products and every
//! comparison is exact.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::polyhedra::combinations;
use crate::rational::{int, to_f64, Rational};
use crate::ring::pow_signed;

/// The element `[[pᵏ, b], [0, p⁻ᵏ]]`, i.e. `z ↦ p^{2k} z + pᵏ b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GroupElement {
    pub k: i64,
    #[serde(with = "crate::rational::serde_q")]
    pub b: Rational,
}

/// The group for a fixed prime-like base `p ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BsGroup {
    pub p: u64,
}

fn is_power_of(d: &BigInt, p: &BigInt) -> bool {
    let mut d = d.clone();
    while d.is_multiple_of(p) && !d.is_one() {
        d /= p;
    }
    d.is_one()
}

impl BsGroup {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidInput("p must be at least 2".into()));
        }
        Ok(BsGroup { p })
    }

    fn pq(&self) -> Rational {
        int(self.p as i64)
    }

    fn ppow(&self, e: i64) -> Rational {
        pow_signed(&self.pq(), e)
    }

    pub fn element(&self, k: i64, b: Rational) -> Result<GroupElement> {
        if !is_power_of(b.denom(), &BigInt::from(self.p)) {
            return Err(Error::InvalidInput(format!("{b} is not in ℤ[1/{}]", self.p)));
        }
        Ok(GroupElement { k, b })
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { k: 0, b: Rational::zero() }
    }

    pub fn t(&self) -> GroupElement {
        GroupElement { k: 1, b: Rational::zero() }
    }

    pub fn a(&self) -> GroupElement {
        GroupElement { k: 0, b: Rational::one() }
    }

    /// Matrix product `[[p^{k₁}, b₁],[0, p^{−k₁}]]·[[p^{k₂}, b₂],[0, p^{−k₂}]]`.
    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        GroupElement { k: g.k + h.k, b: self.ppow(g.k) * &h.b + &g.b * self.ppow(-h.k) }
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        GroupElement { k: -g.k, b: -g.b.clone() }
    }

    pub fn matrix(&self, g: &GroupElement) -> [[Rational; 2]; 2] {
        [[self.ppow(g.k), g.b.clone()], [Rational::zero(), self.ppow(-g.k)]]
    }

    pub fn act(&self, g: &GroupElement, z: &HPoint) -> HPoint {
        let s = self.ppow(2 * g.k);
        HPoint { re: &s * &z.re + self.ppow(g.k) * &g.b, im: s * &z.im }
    }

    pub fn act_boundary(&self, g: &GroupElement, xi: &Boundary) -> Boundary {
        match xi {
            Boundary::Infinity => Boundary::Infinity,
            Boundary::Real(x) => Boundary::Real(self.ppow(2 * g.k) * x + self.ppow(g.k) * &g.b),
        }
    }
}

/// A point of the upper half-plane with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HPoint {
    #[serde(with = "crate::rational::serde_q")]
    pub re: Rational,
    #[serde(with = "crate::rational::serde_q")]
    pub im: Rational,
}

impl HPoint {
    pub fn new(re: Rational, im: Rational) -> Result<Self> {
        if !im.is_positive() {
            return Err(Error::InvalidInput("points of the upper half-plane need Im z > 0".into()));
        }
        Ok(HPoint { re, im })
    }

    /// The base point i.
    pub fn i() -> Self {
        HPoint { re: Rational::zero(), im: Rational::one() }
    }
}

/// Image of the base point under the Möbius action `z ↦ p^{2k}z + pᵏb`.
pub fn mobius_act(group: &BsGroup, g: &GroupElement, z: &HPoint) -> Result<HPoint> {
    if !z.im.is_positive() {
        return Err(Error::InvalidInput("points of the upper half-plane need Im z > 0".into()));
    }
    Ok(group.act(g, z))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Infinity,
    Real(#[serde(with = "crate::rational::serde_q")] Rational),
}

/// A Busemann value `ln(arg)`, with the float only for display.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogValue {
    #[serde(with = "crate::rational::serde_q")]
    pub arg: Rational,
    pub value: f64,
}

impl LogValue {
    fn new(arg: Rational) -> Self {
        let value = to_f64(&arg).ln();
        LogValue { arg, value }
    }
}

/// Busemann function at ξ normalized to vanish at i: `ln Im z` at ∞ and
/// `ln((1+ξ²)·Im z / |z−ξ|²)` at a real ξ.
pub fn busemann(xi: &Boundary, z: &HPoint) -> Result<LogValue> {
    if !z.im.is_positive() {
        return Err(Error::InvalidInput("points of the upper half-plane need Im z > 0".into()));
    }
    Ok(LogValue::new(busemann_arg(xi, z)))
}

fn busemann_arg(xi: &Boundary, z: &HPoint) -> Rational {
    match xi {
        Boundary::Infinity => z.im.clone(),
        Boundary::Real(x) => {
            let dx = &z.re - x;
            (Rational::one() + x * x) * &z.im / (&dx * &dx + &z.im * &z.im)
        }
    }
}

/// The horoball `{z : busemann(ξ, z) ≥ ln level}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HoroballSpec {
    pub xi: Boundary,
    /// Log-argument of the Busemann threshold.
    #[serde(with = "crate::rational::serde_q")]
    pub level: Rational,
}

impl HoroballSpec {
    pub fn new(xi: Boundary, level: Rational) -> Result<Self> {
        if !level.is_positive() {
            return Err(Error::InvalidInput("horoball levels are positive log-arguments".into()));
        }
        Ok(HoroballSpec { xi, level })
    }

    pub fn contains(&self, z: &HPoint) -> bool {
        busemann_arg(&self.xi, z) >= self.level
    }

    /// The image horoball g·HB. The normalization at i is not
    /// g-invariant, so the level picks up the factor `busemann(gξ, g·i)`.
    pub fn translate(&self, group: &BsGroup, g: &GroupElement) -> HoroballSpec {
        let xi = group.act_boundary(g, &self.xi);
        let shift = busemann_arg(&xi, &group.act(g, &HPoint::i()));
        HoroballSpec { level: &self.level * shift, xi }
    }
}

/// Which of the two modules over ℤ[1/p]: t acts by p² on A and by p⁻² on B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HModule {
    A,
    B,
}

/// A finitely supported ℤ-combination of group elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupRingElement {
    terms: BTreeMap<GroupElement, i64>,
}

impl Serialize for GroupRingElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            k: i64,
            #[serde(with = "crate::rational::serde_q")]
            b: &'a Rational,
            coefficient: i64,
        }
        s.collect_seq(self.terms.iter().map(|(g, c)| Term { k: g.k, b: &g.b, coefficient: *c }))
    }
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (GroupElement, i64)>) -> Self {
        let mut out = Self::zero();
        for (g, c) in terms {
            out.add_term(g, c);
        }
        out
    }

    pub fn add_term(&mut self, g: GroupElement, c: i64) {
        let e = self.terms.entry(g).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &i64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Right multiplication by `c·h`.
    pub fn right_mul(&self, group: &BsGroup, h: &GroupElement, c: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(g, m)| (group.mul(g, h), m * c)))
    }

    /// The control image `{g·i : g ∈ supp}`.
    pub fn control_image(&self, group: &BsGroup) -> Vec<HPoint> {
        self.terms.keys().map(|g| group.act(g, &HPoint::i())).collect()
    }
}

/// Augmentation ε sending `g = (k, b)` to `p^{±2k}`.
pub fn epsilon(c: &GroupRingElement, module: HModule, p: u64) -> Rational {
    let sign = match module {
        HModule::A => 2,
        HModule::B => -2,
    };
    let base = int(p as i64);
    c.terms().map(|(g, m)| int(*m) * pow_signed(&base, sign * g.k)).sum()
}

/// Moves every coefficient onto the power of t with the same k. Each step
/// adds a multiple of `tᵏ − g`, which lies in ker ε, and the imaginary
/// parts of the control image can only be dropped by cancellation.
pub fn reduce_to_t_powers(c: &GroupRingElement) -> GroupRingElement {
    GroupRingElement::from_terms(c.terms().map(|(g, m)| (GroupElement { k: g.k, b: Rational::zero() }, *m)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportRow {
    pub j: i64,
    #[serde(with = "crate::rational::serde_q")]
    pub epsilon: Rational,
    pub busemann: LogValue,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportReport {
    pub p: u64,
    pub k: i64,
    pub rows: Vec<SupportRow>,
    pub increasing: bool,
    pub pass: bool,
}

/// For `j = |k|..=j_max`, the element `c_j = p^{2(k+j)} t^{−j}` maps to
/// `a = p^{2k}` in A and its control point `p^{−2j}i` has Busemann value
/// `ln p^{2j}` at 0, growing without bound.
pub fn verify_support_at_zero_a(p: u64, k: i64, j_max: i64) -> Result<SupportReport> {
    let group = BsGroup::new(p)?;
    let start = k.abs();
    if j_max < start {
        return Err(Error::Precondition(format!("need j_max ≥ |k| = {start}")));
    }
    let target = group.ppow(2 * k);
    let zero = Boundary::Real(Rational::zero());
    let mut rows = Vec::new();
    for j in start..=j_max {
        let coeff = group.ppow(2 * (k + j)).to_integer().to_i64().ok_or_else(|| {
            Error::GuardExceeded("coefficient p^{2(k+j)} does not fit in 64 bits".into())
        })?;
        let c = GroupRingElement::from_terms([(GroupElement { k: -j, b: Rational::zero() }, coeff)]);
        let eps = epsilon(&c, HModule::A, p);
        let point = c.control_image(&group).remove(0);
        let b = busemann(&zero, &point)?;
        let pass = eps == target && point.im == group.ppow(-2 * j) && b.arg == group.ppow(2 * j);
        rows.push(SupportRow { j, epsilon: eps, busemann: b, pass });
    }
    let increasing = rows.windows(2).all(|w| w[0].busemann.arg < w[1].busemann.arg);
    let pass = increasing && rows.iter().all(|r| r.pass);
    Ok(SupportReport { p, k, rows, increasing, pass })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InfinityReport {
    pub p: u64,
    #[serde(with = "crate::rational::serde_q")]
    pub q: Rational,
    /// Least k with `p^{2k} ≥ q`.
    pub min_exponent: i64,
    /// Every admissible term `m_k p^{2k}` is divisible by p², and 1 is not.
    pub symbolic: Verdict,
    pub candidates: u64,
    pub solutions: Vec<Vec<i64>>,
    pub pass: bool,
}

const MAX_CANDIDATES: u64 = 50_000_000;

fn least_exponent(group: &BsGroup, q: &Rational) -> i64 {
    let mut k = 0;
    while group.ppow(2 * k) < *q {
        k += 1;
    }
    while group.ppow(2 * (k - 1)) >= *q {
        k -= 1;
    }
    k
}

fn candidate_count(choices: u64, slots: u32) -> Result<u64> {
    choices
        .checked_pow(slots)
        .filter(|c| *c <= MAX_CANDIDATES)
        .ok_or_else(|| Error::GuardExceeded(format!("more than {MAX_CANDIDATES} candidates")))
}

/// No `c = Σ m_k tᵏ` with control image in `{Im ≥ q}` has ε_A(c) = 1.
/// The symbolic part uses `q > 1 ⟹ k ≥ 1 ⟹ p² | ε(c)`; the brute-force
/// part enumerates `m_k ∈ [−C, C]` for `1 ≤ k ≤ k_max`.
pub fn verify_infinity_obstruction_a(p: u64, q: &Rational, coeff_bound: i64, k_max: u32) -> Result<InfinityReport> {
    let group = BsGroup::new(p)?;
    if !q.is_positive() || coeff_bound < 0 {
        return Err(Error::InvalidInput("q must be positive and the coefficient bound nonnegative".into()));
    }
    let k0 = least_exponent(&group, q);
    let p2 = BigInt::from(p) * BigInt::from(p);
    let symbolic = if k0 >= 1 {
        let divisible = (k0..k0 + 4).all(|k| group.ppow(2 * k).to_integer().is_multiple_of(&p2));
        if divisible && !BigInt::one().is_multiple_of(&p2) {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    } else {
        Verdict::Inconclusive
    };
    let ks: Vec<i64> = (k0.max(1)..=i64::from(k_max)).collect();
    let width = (2 * coeff_bound + 1) as u64;
    let candidates = candidate_count(width, ks.len() as u32)?;
    let weights: Vec<BigInt> = ks.iter().map(|&k| group.ppow(2 * k).to_integer()).collect();
    let firsts: Vec<i64> = (-coeff_bound..=coeff_bound).collect();
    let found = par::map(&firsts, |&m0| {
        let mut out = Vec::new();
        if ks.is_empty() {
            return out;
        }
        let mut m = vec![-coeff_bound; ks.len()];
        m[0] = m0;
        loop {
            let eps: BigInt = m.iter().zip(&weights).map(|(mi, w)| BigInt::from(*mi) * w).sum();
            if eps.is_one() {
                out.push(m.clone());
            }
            let mut i = ks.len();
            loop {
                if i == 1 {
                    return out;
                }
                i -= 1;
                if m[i] < coeff_bound {
                    m[i] += 1;
                    break;
                }
                m[i] = -coeff_bound;
            }
        }
    });
    let solutions: Vec<Vec<i64>> = found.into_iter().flatten().collect();
    let pass = solutions.is_empty() && symbolic != Verdict::Fail;
    Ok(InfinityReport { p, q: q.clone(), min_exponent: k0, symbolic, candidates, solutions, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PushRow {
    pub lambda: GroupRingElement,
    pub epsilon_preserved: bool,
    /// `Im` of each control point is multiplied by exactly p².
    pub im_scaled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PushReport {
    pub p: u64,
    pub rows: Vec<PushRow>,
    /// Log-argument of the guaranteed shift toward ∞.
    #[serde(with = "crate::rational::serde_q")]
    pub shift_arg: Rational,
    pub shift: f64,
    pub pass: bool,
}

/// Right multiplication by `p²t` fixes ε_B and multiplies the imaginary
/// part of every control point by p², a Busemann shift of exactly `2 ln p`
/// toward ∞.
pub fn verify_push_b(p: u64, lambdas: &[GroupRingElement]) -> Result<PushReport> {
    let group = BsGroup::new(p)?;
    let p2 = (p * p) as i64;
    let scale = int(p2);
    let mut rows = Vec::with_capacity(lambdas.len());
    for l in lambdas {
        let pushed = l.right_mul(&group, &group.t(), p2);
        let epsilon_preserved = epsilon(&pushed, HModule::B, p) == epsilon(l, HModule::B, p);
        let before: BTreeMap<&GroupElement, HPoint> = l.terms().map(|(g, _)| (g, group.act(g, &HPoint::i()))).collect();
        let im_scaled = l.terms().all(|(g, _)| {
            let moved = group.act(&group.mul(g, &group.t()), &HPoint::i());
            let old = &before[g];
            moved.re == old.re && moved.im == &old.im * &scale
        });
        rows.push(PushRow { lambda: l.clone(), epsilon_preserved, im_scaled });
    }
    let pass = rows.iter().all(|r| r.epsilon_preserved && r.im_scaled);
    Ok(PushReport { p, rows, shift: to_f64(&scale).ln(), shift_arg: scale, pass })
}

/// Deterministic pseudo-random elements of ℤG with small support.
pub fn sample_elements(p: u64, count: usize, seed: u64) -> Result<Vec<GroupRingElement>> {
    let group = BsGroup::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let size = rng.gen_range(1..=4);
        let mut terms = Vec::with_capacity(size);
        for _ in 0..size {
            let k = rng.gen_range(-3..=3);
            let b = Rational::new(BigInt::from(rng.gen_range(-8..=8)), BigInt::from(p).pow(rng.gen_range(0..=2)));
            terms.push((group.element(k, b)?, rng.gen_range(-5..=5)));
        }
        out.push(GroupRingElement::from_terms(terms));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroObstructionReport {
    pub module: HModule,
    pub p: u64,
    #[serde(with = "crate::rational::serde_q")]
    pub q: Rational,
    /// Group elements whose control point lies in the horoball.
    pub elements: usize,
    pub candidates: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<GroupRingElement>,
}

/// Brute-force search for c with `ε(c) = 1` and control image in the
/// horoball at 0 of level `ln q`, over at most `size_bound` terms with
/// `|k| ≤ k_max`, b-denominators dividing `p^{k_max}` and coefficients in
/// `[−C, C]`.
pub fn verify_zero_obstruction(
    module: HModule,
    p: u64,
    q: &Rational,
    coeff_bound: i64,
    size_bound: usize,
    k_max: i64,
) -> Result<ZeroObstructionReport> {
    let group = BsGroup::new(p)?;
    if !q.is_positive() || coeff_bound < 0 || k_max < 0 {
        return Err(Error::InvalidInput("bounds must be nonnegative and q positive".into()));
    }
    let ball = HoroballSpec::new(Boundary::Real(Rational::zero()), q.clone())?;
    // Inside the horoball: 1/(p^{2k} + b²) ≥ q, so b² ≤ 1/q.
    let den = group.ppow(k_max);
    let reach = (q.recip() * &den * &den).to_integer();
    let mut m_max = BigInt::zero();
    while (&m_max + 1u32) * (&m_max + 1u32) <= reach {
        m_max += 1u32;
    }
    let m_max = m_max.to_i64().ok_or_else(|| Error::GuardExceeded("too many translations".into()))?;
    let mut elements = Vec::new();
    for k in -k_max..=k_max {
        for m in -m_max..=m_max {
            let g = GroupElement { k, b: Rational::from_integer(m.into()) / &den };
            if ball.contains(&group.act(&g, &HPoint::i())) {
                elements.push(g);
            }
        }
    }
    let coeffs: Vec<i64> = (-coeff_bound..=coeff_bound).filter(|c| *c != 0).collect();
    let mut supports = Vec::new();
    let mut candidates = 0u64;
    for s in 1..=size_bound.min(elements.len()) {
        for sub in combinations(elements.len(), s) {
            candidates += candidate_count(coeffs.len() as u64, s as u32)?;
            if candidates > MAX_CANDIDATES {
                return Err(Error::GuardExceeded(format!("more than {MAX_CANDIDATES} candidates")));
            }
            supports.push(sub);
        }
    }
    let weights: Vec<Rational> = elements
        .iter()
        .map(|g| epsilon(&GroupRingElement::from_terms([(g.clone(), 1)]), module, p))
        .collect();
    let found = par::map(&supports, |sub| {
        let mut idx = vec![0usize; sub.len()];
        loop {
            let eps: Rational = sub.iter().zip(&idx).map(|(&e, &i)| &weights[e] * int(coeffs[i])).sum();
            if eps.is_one() {
                return Some(GroupRingElement::from_terms(
                    sub.iter().zip(&idx).map(|(&e, &i)| (elements[e].clone(), coeffs[i])),
                ));
            }
            let mut pos = sub.len();
            loop {
                if pos == 0 {
                    return None;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < coeffs.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    });
    let witness = found.into_iter().flatten().next();
    Ok(ZeroObstructionReport { module, p, q: q.clone(), elements: elements.len(), candidates, witness })
}
