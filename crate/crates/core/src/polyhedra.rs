//! Rational polyhedra, finite unions of them (fans) and subsets of the
//! character sphere.
//!
//! A [`Polyhedron`] is a finite conjunction of constraints `a·x + b = 0`,
//! `≥ 0` or `> 0`, so relatively open pieces are representable. A [`Fan`]
//! is a finite union of possibly overlapping polyhedra; the tropical sets
//! of p-adic valuations need affine pieces, so offsets are allowed. A
//! [`SphericalSet`] is a fan of cones read modulo positive scaling, with
//! the origin ignored.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{check_rank, Error, Result};
use crate::linalg::{nullspace_of, rank_of};
use crate::lp::{find_point, maximize, LinearConstraint, LpOutcome, Rel, Strength};
use crate::par;
use crate::rational::{dot, int, primitive_integer_vector, serde_q, Rational};
use crate::ring::{Character, Direction};

/// Largest rank accepted by ray enumeration.
pub const MAX_RAY_RANK: usize = 6;

/// `normal · x + offset` compared with zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Constraint {
    #[serde(with = "serde_q::vec")]
    pub normal: Vec<Rational>,
    #[serde(with = "serde_q")]
    pub offset: Rational,
    pub strength: Strength,
}

impl Constraint {
    pub fn new(normal: Vec<Rational>, offset: Rational, strength: Strength) -> Self {
        Constraint { normal, offset, strength }.normalized()
    }

    pub fn linear(normal: Vec<Rational>, strength: Strength) -> Self {
        Constraint::new(normal, Rational::zero(), strength)
    }

    /// Scales to a primitive integer row; equalities get a positive leading entry.
    fn normalized(mut self) -> Self {
        let mut all = self.normal.clone();
        all.push(self.offset.clone());
        if let Some(p) = primitive_integer_vector(&all) {
            let mut p: Vec<Rational> = p.into_iter().map(Rational::from_integer).collect();
            if self.strength == Strength::Eq && p.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative()) {
                for v in p.iter_mut() {
                    *v = -v.clone();
                }
            }
            self.offset = p.pop().expect("offset entry");
            self.normal = p;
        }
        self
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.normal, x) + &self.offset
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let v = self.eval(x);
        match self.strength {
            Strength::Eq => v.is_zero(),
            Strength::Ge => !v.is_negative(),
            Strength::Gt => v.is_positive(),
        }
    }

    fn is_linear(&self) -> bool {
        self.offset.is_zero()
    }

    /// `Some(truth)` when the normal vanishes.
    fn constant_truth(&self) -> Option<bool> {
        if self.normal.iter().all(Zero::is_zero) {
            Some(self.holds(&vec![Rational::zero(); self.normal.len()]))
        } else {
            None
        }
    }

    fn flipped(&self, strength: Strength) -> Constraint {
        Constraint::new(self.normal.iter().map(|v| -v).collect(), -self.offset.clone(), strength)
    }

    /// Constraints whose union is the complement of this one.
    fn negations(&self) -> Vec<Constraint> {
        match self.strength {
            Strength::Eq => vec![
                Constraint::new(self.normal.clone(), self.offset.clone(), Strength::Gt),
                self.flipped(Strength::Gt),
            ],
            Strength::Ge => vec![self.flipped(Strength::Gt)],
            Strength::Gt => vec![self.flipped(Strength::Ge)],
        }
    }

    fn closed(&self) -> Constraint {
        let mut c = self.clone();
        if c.strength == Strength::Gt {
            c.strength = Strength::Ge;
        }
        c
    }
}

/// A convex rational polyhedron, possibly relatively open, possibly empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Polyhedron {
    rank: usize,
    constraints: Vec<Constraint>,
    #[serde(skip)]
    infeasible: bool,
}

/// Cones are polyhedra whose constraints have zero offsets.
pub type RationalCone = Polyhedron;

impl Polyhedron {
    /// All of ℚⁿ.
    pub fn space(rank: usize) -> Self {
        Polyhedron { rank, constraints: Vec::new(), infeasible: false }
    }

    pub fn new(rank: usize, constraints: impl IntoIterator<Item = Constraint>) -> Result<Self> {
        let mut p = Polyhedron::space(rank);
        for c in constraints {
            check_rank(rank, c.normal.len())?;
            p.push(c);
        }
        Ok(p)
    }

    /// The cone `{eqs·x = 0, ge·x ≥ 0, gt·x > 0}`.
    pub fn cone(rank: usize, eqs: &[Vec<Rational>], ge: &[Vec<Rational>], gt: &[Vec<Rational>]) -> Result<Self> {
        let tag = |rows: &[Vec<Rational>], s: Strength| {
            rows.iter().map(move |r| Constraint::linear(r.clone(), s)).collect::<Vec<_>>()
        };
        let mut all = tag(eqs, Strength::Eq);
        all.extend(tag(ge, Strength::Ge));
        all.extend(tag(gt, Strength::Gt));
        Polyhedron::new(rank, all)
    }

    pub fn point(x: &[Rational]) -> Self {
        let n = x.len();
        let mut p = Polyhedron::space(n);
        for (i, xi) in x.iter().enumerate() {
            let mut e = vec![Rational::zero(); n];
            e[i] = int(1);
            p.push(Constraint::new(e, -xi.clone(), Strength::Eq));
        }
        p
    }

    pub fn origin(rank: usize) -> Self {
        Polyhedron::point(&vec![Rational::zero(); rank])
    }

    /// The open ray `ℝ_{>0} d`.
    pub fn open_ray(d: &Direction) -> Self {
        let v = d.character().0;
        let n = v.len();
        let mut p = Polyhedron::space(n);
        for normal in nullspace_of(std::slice::from_ref(&v), n) {
            p.push(Constraint::linear(normal, Strength::Eq));
        }
        p.push(Constraint::linear(v, Strength::Gt));
        p
    }

    pub fn push(&mut self, c: Constraint) {
        match c.constant_truth() {
            Some(true) => {}
            Some(false) => self.infeasible = true,
            None => {
                if let Err(pos) = self.constraints.binary_search(&c) {
                    self.constraints.insert(pos, c);
                }
            }
        }
    }

    pub fn with(mut self, c: Constraint) -> Self {
        self.push(c);
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        !self.infeasible && self.constraints.iter().all(|c| c.holds(x))
    }

    pub fn contains_character(&self, chi: &Character) -> Result<bool> {
        check_rank(self.rank, chi.rank())?;
        Ok(self.contains(chi.values()))
    }

    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        let mut p = self.clone();
        p.infeasible |= other.infeasible;
        for c in &other.constraints {
            p.push(c.clone());
        }
        p
    }

    pub fn is_conical(&self) -> bool {
        self.constraints.iter().all(Constraint::is_linear)
    }

    pub fn find_point(&self) -> Option<Vec<Rational>> {
        if self.infeasible {
            return None;
        }
        let rows: Vec<(&[Rational], &Rational, Strength)> = self
            .constraints
            .iter()
            .map(|c| (c.normal.as_slice(), &c.offset, c.strength))
            .collect();
        find_point(self.rank, &rows)
    }

    pub fn is_empty(&self) -> bool {
        self.find_point().is_none()
    }

    /// Indices of weak inequalities that hold with equality on all of `self`.
    fn implicit_equalities(&self) -> Vec<usize> {
        (0..self.constraints.len())
            .filter(|&i| {
                self.constraints[i].strength == Strength::Ge && {
                    let mut q = self.clone();
                    q.constraints[i].strength = Strength::Gt;
                    q.is_empty()
                }
            })
            .collect()
    }

    /// Dimension of the affine hull; `None` when empty.
    pub fn dimension(&self) -> Option<usize> {
        self.find_point()?;
        let implicit = self.implicit_equalities();
        let rows: Vec<Vec<Rational>> = self
            .constraints
            .iter()
            .enumerate()
            .filter(|(i, c)| c.strength == Strength::Eq || implicit.contains(i))
            .map(|(_, c)| c.normal.clone())
            .collect();
        Some(self.rank - rank_of(&rows, self.rank))
    }

    /// A point of the relative interior.
    pub fn relative_interior_point(&self) -> Option<Vec<Rational>> {
        self.find_point()?;
        let implicit = self.implicit_equalities();
        let mut q = self.clone();
        for (i, c) in q.constraints.iter_mut().enumerate() {
            if c.strength == Strength::Ge && !implicit.contains(&i) {
                c.strength = Strength::Gt;
            }
        }
        q.find_point()
    }

    /// Whether some point other than the origin lies in `self`.
    pub fn has_nonzero_point(&self) -> bool {
        match self.find_point() {
            None => false,
            Some(p) => p.iter().any(|v| !v.is_zero()) || self.dimension().unwrap_or(0) > 0,
        }
    }

    pub fn closure(&self) -> Polyhedron {
        let mut p = Polyhedron::space(self.rank);
        p.infeasible = self.infeasible;
        for c in &self.constraints {
            p.push(c.closed());
        }
        p
    }

    /// `{d : x + t d ∈ self for all t ≥ 0}` for any `x` in `self`; `None` when empty.
    pub fn recession_cone(&self) -> Option<Polyhedron> {
        if self.is_empty() {
            return None;
        }
        let mut p = Polyhedron::space(self.rank);
        for c in &self.constraints {
            let s = if c.strength == Strength::Eq { Strength::Eq } else { Strength::Ge };
            p.push(Constraint::linear(c.normal.clone(), s));
        }
        Some(p)
    }

    /// Directions `d` such that `t d ∈ self` for all small `t > 0`; `None` when
    /// no such segment can exist because the origin is not in the closure.
    pub fn tangent_cone_at_origin(&self) -> Option<Polyhedron> {
        if self.infeasible {
            return None;
        }
        let mut p = Polyhedron::space(self.rank);
        for c in &self.constraints {
            if c.offset.is_zero() {
                p.push(c.clone());
            } else if c.strength == Strength::Eq || c.offset.is_negative() {
                return None;
            }
        }
        Some(p)
    }

    /// `self - x`.
    pub fn translate(&self, x: &[Rational]) -> Polyhedron {
        let mut p = Polyhedron::space(self.rank);
        p.infeasible = self.infeasible;
        for c in &self.constraints {
            p.push(Constraint::new(c.normal.clone(), c.eval(x), c.strength));
        }
        p
    }

    /// `-self`.
    pub fn negate(&self) -> Polyhedron {
        let mut p = Polyhedron::space(self.rank);
        p.infeasible = self.infeasible;
        for c in &self.constraints {
            p.push(Constraint::new(c.normal.iter().map(|v| -v).collect(), c.offset.clone(), c.strength));
        }
        p
    }

    /// The cone `{d : t d ∈ self for some t > 0}`, by Fourier–Motzkin
    /// elimination of `t` from the homogenized system.
    pub fn radial_cone(&self) -> Polyhedron {
        if self.is_conical() {
            return self.clone();
        }
        let n = self.rank;
        let mut rows: Vec<(Vec<Rational>, Rational, Strength)> = self
            .constraints
            .iter()
            .map(|c| (c.normal.clone(), c.offset.clone(), c.strength))
            .collect();
        rows.push((vec![Rational::zero(); n], int(1), Strength::Gt));
        let mut out = Polyhedron::space(n);
        out.infeasible = self.infeasible;
        if let Some(k) = rows.iter().position(|r| r.2 == Strength::Eq && !r.1.is_zero()) {
            let (ae, ce, _) = rows.remove(k);
            for (a, c, s) in rows {
                let f = &c / &ce;
                let normal: Vec<Rational> = a.iter().zip(&ae).map(|(x, y)| x - &f * y).collect();
                out.push(Constraint::linear(normal, s));
            }
            return out;
        }
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for (a, c, s) in rows {
            if c.is_zero() {
                out.push(Constraint::linear(a, s));
            } else if c.is_positive() {
                lower.push((a, c, s));
            } else {
                upper.push((a, c, s));
            }
        }
        for (al, cl, sl) in &lower {
            for (au, cu, su) in &upper {
                let normal: Vec<Rational> = al.iter().zip(au).map(|(l, u)| cl * u - cu * l).collect();
                let s = if *sl == Strength::Gt || *su == Strength::Gt { Strength::Gt } else { Strength::Ge };
                out.push(Constraint::linear(normal, s));
            }
        }
        out
    }

    /// Whether `self ⊆ closure(other)`.
    pub fn contained_in_closure_of(&self, other: &Polyhedron) -> bool {
        if other.infeasible {
            return self.is_empty();
        }
        other
            .closure()
            .constraints
            .iter()
            .flat_map(Constraint::negations)
            .all(|neg| self.clone().with(neg).is_empty())
    }

    /// Primitive generators of the closure of a cone: the extreme rays of its
    /// pointed part plus `±` a basis of its lineality space, sorted
    /// lexicographically.
    pub fn rays(&self) -> Result<Vec<Direction>> {
        if self.rank > MAX_RAY_RANK {
            return Err(Error::GuardExceeded(format!(
                "ray enumeration is limited to rank {MAX_RAY_RANK}, got {}",
                self.rank
            )));
        }
        if !self.is_conical() {
            return Err(Error::Precondition("rays are defined for cones only".into()));
        }
        if self.is_empty() {
            return Ok(Vec::new());
        }
        let n = self.rank;
        let cl = self.closure();
        let eqs: Vec<Vec<Rational>> = cl
            .constraints
            .iter()
            .filter(|c| c.strength == Strength::Eq)
            .map(|c| c.normal.clone())
            .collect();
        let ges: Vec<Vec<Rational>> = cl
            .constraints
            .iter()
            .filter(|c| c.strength != Strength::Eq)
            .map(|c| c.normal.clone())
            .collect();
        let mut all_rows = eqs.clone();
        all_rows.extend(ges.iter().cloned());
        let lineality = nullspace_of(&all_rows, n);
        let mut out = BTreeSet::new();
        for l in &lineality {
            let d = Direction::from_rationals(l).expect("nonzero basis vector");
            out.insert(d.neg());
            out.insert(d);
        }
        let mut base = eqs;
        base.extend(lineality.iter().cloned());
        let r0 = rank_of(&base, n);
        if r0 < n {
            let k = n - 1 - r0;
            for subset in combinations(ges.len(), k) {
                let mut rows = base.clone();
                rows.extend(subset.iter().map(|&i| ges[i].clone()));
                let ns = nullspace_of(&rows, n);
                if ns.len() != 1 {
                    continue;
                }
                for v in [ns[0].clone(), ns[0].iter().map(|x| -x).collect()] {
                    if ges.iter().all(|g| !dot(g, &v).is_negative()) {
                        out.insert(Direction::from_rationals(&v).expect("nonzero kernel vector"));
                    }
                }
            }
        }
        Ok(out.into_iter().collect())
    }
}

/// All `k`-subsets of `0..m` in lexicographic order.
pub(crate) fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

/// Removes pieces failing `keep` and exact duplicates, preserving order.
fn prune(pieces: Vec<Polyhedron>, keep: fn(&Polyhedron) -> bool) -> Vec<Polyhedron> {
    let flags = par::map(&pieces, |p| keep(p));
    let mut seen = BTreeSet::new();
    pieces
        .into_iter()
        .zip(flags)
        .filter(|(p, k)| *k && seen.insert(p.constraints.clone()))
        .map(|(p, _)| p)
        .collect()
}

fn nonempty(p: &Polyhedron) -> bool {
    !p.is_empty()
}

fn intersect_all(a: &[Polyhedron], b: &[Polyhedron], keep: fn(&Polyhedron) -> bool) -> Vec<Polyhedron> {
    let pairs: Vec<Polyhedron> = a.iter().flat_map(|p| b.iter().map(move |q| p.intersect(q))).collect();
    prune(pairs, keep)
}

/// Pieces covering the complement of a union, split piece by piece.
fn complement_of(rank: usize, pieces: &[Polyhedron], keep: fn(&Polyhedron) -> bool) -> Vec<Polyhedron> {
    let mut acc = vec![Polyhedron::space(rank)];
    for p in pieces {
        if p.infeasible {
            continue;
        }
        let mut negation = Vec::new();
        for (i, c) in p.constraints.iter().enumerate() {
            for neg in c.negations() {
                let mut q = Polyhedron::space(rank);
                for earlier in &p.constraints[..i] {
                    q.push(earlier.clone());
                }
                q.push(neg);
                negation.push(q);
            }
        }
        acc = intersect_all(&acc, &negation, keep);
        if acc.is_empty() {
            break;
        }
    }
    acc
}

/// A finite union of rational polyhedra in ℚⁿ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fan {
    rank: usize,
    pieces: Vec<Polyhedron>,
}

impl Fan {
    pub fn empty(rank: usize) -> Self {
        Fan { rank, pieces: Vec::new() }
    }

    pub fn whole(rank: usize) -> Self {
        Fan { rank, pieces: vec![Polyhedron::space(rank)] }
    }

    pub fn origin(rank: usize) -> Self {
        Fan { rank, pieces: vec![Polyhedron::origin(rank)] }
    }

    /// Builds a fan, dropping empty pieces.
    pub fn from_pieces(rank: usize, pieces: Vec<Polyhedron>) -> Result<Self> {
        for p in &pieces {
            check_rank(rank, p.rank)?;
        }
        Ok(Fan { rank, pieces: prune(pieces, nonempty) })
    }

    /// Fan spanned by the given rays, each as a separate closed ray.
    pub fn from_rays(rank: usize, rays: &[Direction]) -> Result<Self> {
        let mut pieces = vec![Polyhedron::origin(rank)];
        for d in rays {
            check_rank(rank, d.rank())?;
            pieces.push(Polyhedron::open_ray(d));
        }
        Fan::from_pieces(rank, pieces)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn pieces(&self) -> &[Polyhedron] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    pub fn contains_character(&self, chi: &Character) -> Result<bool> {
        check_rank(self.rank, chi.rank())?;
        Ok(self.contains(chi.values()))
    }

    pub fn is_conical(&self) -> bool {
        self.pieces.iter().all(Polyhedron::is_conical)
    }

    pub fn union(&self, other: &Fan) -> Result<Fan> {
        check_rank(self.rank, other.rank)?;
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        Fan::from_pieces(self.rank, pieces)
    }

    pub fn intersect(&self, other: &Fan) -> Result<Fan> {
        check_rank(self.rank, other.rank)?;
        Ok(Fan { rank: self.rank, pieces: intersect_all(&self.pieces, &other.pieces, nonempty) })
    }

    pub fn complement(&self) -> Fan {
        Fan { rank: self.rank, pieces: complement_of(self.rank, &self.pieces, nonempty) }
    }

    pub fn difference(&self, other: &Fan) -> Result<Fan> {
        self.intersect(&other.complement())
    }

    pub fn is_subset_of(&self, other: &Fan) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn set_eq(&self, other: &Fan) -> Result<bool> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }

    pub fn translate(&self, x: &[Rational]) -> Fan {
        Fan { rank: self.rank, pieces: self.pieces.iter().map(|p| p.translate(x)).collect() }
    }

    /// Union of the rays from 0 having an initial segment of positive length
    /// in the fan; empty when 0 is not in the fan.
    pub fn local_cone_at_origin(&self) -> Fan {
        let zero = vec![Rational::zero(); self.rank];
        if !self.contains(&zero) {
            return Fan::empty(self.rank);
        }
        let mut pieces = vec![Polyhedron::origin(self.rank)];
        pieces.extend(self.pieces.iter().filter_map(Polyhedron::tangent_cone_at_origin));
        Fan { rank: self.rank, pieces: prune(pieces, nonempty) }
    }

    /// Union of the recession cones of the pieces, always including the origin.
    pub fn local_cone_at_infinity(&self) -> Fan {
        let mut pieces = vec![Polyhedron::origin(self.rank)];
        pieces.extend(self.pieces.iter().filter_map(Polyhedron::recession_cone));
        Fan { rank: self.rank, pieces: prune(pieces, nonempty) }
    }

    /// `{[χ] : χ ∈ F, χ ≠ 0}`.
    pub fn radial_projection(&self) -> SphericalSet {
        let cones: Vec<Polyhedron> = self.pieces.iter().map(Polyhedron::radial_cone).collect();
        SphericalSet { rank: self.rank, pieces: prune(cones, Polyhedron::has_nonzero_point) }
    }

    /// Sorted union of the rays of all pieces; the fan must be conical.
    pub fn rays(&self) -> Result<Vec<Direction>> {
        let mut out = BTreeSet::new();
        for p in &self.pieces {
            out.extend(p.rays()?);
        }
        Ok(out.into_iter().collect())
    }

    /// Common dimension of the pieces not contained in the closure of a
    /// higher-dimensional piece; `None` if these differ or the fan is empty.
    pub fn pure_dimension(&self) -> Option<usize> {
        let dims: Vec<usize> = self.pieces.iter().map(|p| p.dimension().unwrap_or(0)).collect();
        let maximal: BTreeSet<usize> = (0..self.pieces.len())
            .filter(|&i| {
                !(0..self.pieces.len())
                    .any(|j| dims[j] > dims[i] && self.pieces[i].contained_in_closure_of(&self.pieces[j]))
            })
            .map(|i| dims[i])
            .collect();
        if maximal.len() == 1 {
            maximal.into_iter().next()
        } else {
            None
        }
    }

    /// Whether the positive hull of the local cone at `x` is a linear space.
    pub fn balanceable_at(&self, x: &Character) -> Result<bool> {
        check_rank(self.rank, x.rank())?;
        if !self.contains(x.values()) {
            return Err(Error::Precondition("point is not in the fan".into()));
        }
        let local = self.translate(x.values()).local_cone_at_origin();
        let mut generators = BTreeSet::new();
        for p in local.pieces() {
            generators.extend(p.rays()?);
        }
        let gens: Vec<Vec<Rational>> = generators.into_iter().map(|d| d.character().0).collect();
        Ok(strictly_positive_relation(&gens, self.rank))
    }
}

/// Whether `Σ μⱼ rⱼ = 0` has a solution with every `μⱼ ≥ 1`.
fn strictly_positive_relation(gens: &[Vec<Rational>], n: usize) -> bool {
    if gens.is_empty() {
        return true;
    }
    let m = gens.len();
    let mut cons = Vec::with_capacity(n + m);
    for i in 0..n {
        cons.push(LinearConstraint::new(gens.iter().map(|g| g[i].clone()).collect(), Rel::Eq, Rational::zero()));
    }
    for j in 0..m {
        let mut e = vec![Rational::zero(); m];
        e[j] = int(1);
        cons.push(LinearConstraint::new(e, Rel::Ge, int(1)));
    }
    !matches!(maximize(m, &vec![Rational::zero(); m], &cons), LpOutcome::Infeasible)
}

/// A subset of the character sphere, stored as a union of cones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SphericalSet {
    rank: usize,
    pieces: Vec<Polyhedron>,
}

impl SphericalSet {
    pub fn empty(rank: usize) -> Self {
        SphericalSet { rank, pieces: Vec::new() }
    }

    pub fn sphere(rank: usize) -> Self {
        SphericalSet { rank, pieces: vec![Polyhedron::space(rank)] }
    }

    pub fn from_cones(rank: usize, cones: Vec<Polyhedron>) -> Result<Self> {
        for c in &cones {
            check_rank(rank, c.rank)?;
            if !c.is_conical() {
                return Err(Error::InvalidInput("spherical sets are built from cones".into()));
            }
        }
        Ok(SphericalSet { rank, pieces: prune(cones, Polyhedron::has_nonzero_point) })
    }

    pub fn from_directions(rank: usize, dirs: &[Direction]) -> Result<Self> {
        let mut cones = Vec::with_capacity(dirs.len());
        for d in dirs {
            check_rank(rank, d.rank())?;
            cones.push(Polyhedron::open_ray(d));
        }
        SphericalSet::from_cones(rank, cones)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn pieces(&self) -> &[Polyhedron] {
        &self.pieces
    }

    /// The cone over the set, origin included.
    pub fn cone(&self) -> Fan {
        let mut pieces = self.pieces.clone();
        pieces.push(Polyhedron::origin(self.rank));
        Fan { rank: self.rank, pieces: prune(pieces, nonempty) }
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn contains(&self, d: &Direction) -> Result<bool> {
        check_rank(self.rank, d.rank())?;
        let v = d.character();
        Ok(self.pieces.iter().any(|p| p.contains(v.values())))
    }

    /// Membership of `[χ]`; false for the zero character.
    pub fn contains_character(&self, chi: &Character) -> Result<bool> {
        check_rank(self.rank, chi.rank())?;
        Ok(!chi.is_zero() && self.pieces.iter().any(|p| p.contains(chi.values())))
    }

    pub fn union(&self, other: &SphericalSet) -> Result<SphericalSet> {
        check_rank(self.rank, other.rank)?;
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        Ok(SphericalSet { rank: self.rank, pieces: prune(pieces, Polyhedron::has_nonzero_point) })
    }

    pub fn intersect(&self, other: &SphericalSet) -> Result<SphericalSet> {
        check_rank(self.rank, other.rank)?;
        Ok(SphericalSet {
            rank: self.rank,
            pieces: intersect_all(&self.pieces, &other.pieces, Polyhedron::has_nonzero_point),
        })
    }

    pub fn complement(&self) -> SphericalSet {
        SphericalSet {
            rank: self.rank,
            pieces: complement_of(self.rank, &self.pieces, Polyhedron::has_nonzero_point),
        }
    }

    pub fn difference(&self, other: &SphericalSet) -> Result<SphericalSet> {
        self.intersect(&other.complement())
    }

    pub fn negate(&self) -> SphericalSet {
        SphericalSet { rank: self.rank, pieces: self.pieces.iter().map(Polyhedron::negate).collect() }
    }

    pub fn is_subset_of(&self, other: &SphericalSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn set_eq(&self, other: &SphericalSet) -> Result<bool> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }

    /// Whether `S ∪ -S` is the whole sphere, tested as `C ∩ -C = ∅` for the
    /// complement `C`.
    pub fn covers_with_antipodal(&self) -> bool {
        let c = self.complement();
        c.intersect(&c.negate()).map(|x| x.is_empty()).unwrap_or(false)
    }

    /// Largest dimension of a piece as a subset of the sphere.
    pub fn sphere_dimension(&self) -> Option<usize> {
        self.pieces.iter().filter_map(|p| p.dimension()).max().map(|d| d - 1)
    }

    /// The points of the set when it is finite.
    pub fn finite_directions(&self) -> Result<Option<Vec<Direction>>> {
        if self.sphere_dimension().unwrap_or(0) > 0 {
            return Ok(None);
        }
        let mut out = BTreeSet::new();
        for p in &self.pieces {
            for d in p.rays()? {
                if p.contains(d.character().values()) {
                    out.insert(d);
                }
            }
        }
        Ok(Some(out.into_iter().collect()))
    }

    /// Generators of the closures of the pieces, sorted.
    pub fn rays(&self) -> Result<Vec<Direction>> {
        let mut out = BTreeSet::new();
        for p in &self.pieces {
            out.extend(p.rays()?);
        }
        Ok(out.into_iter().collect())
    }
}

/// Outcome of the open-hemisphere test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hemisphere {
    /// `χ` with `χ·u > 0` for all inputs.
    Witness(Character),
    /// Convex weights `λ` with `Σ λᵢ uᵢ = 0`.
    Combination(#[serde(with = "serde_q::vec")] Vec<Rational>),
}

impl Hemisphere {
    /// Re-checks the certificate against the inputs.
    pub fn verify(&self, dirs: &[Direction]) -> bool {
        match self {
            Hemisphere::Witness(chi) => dirs.iter().all(|d| dot(chi.values(), d.character().values()).is_positive()),
            Hemisphere::Combination(lambda) => {
                if lambda.len() != dirs.len()
                    || lambda.iter().any(|l| l.is_negative())
                    || !lambda.iter().sum::<Rational>().is_one()
                {
                    return false;
                }
                let n = dirs.first().map_or(0, Direction::rank);
                (0..n).all(|i| {
                    lambda
                        .iter()
                        .zip(dirs)
                        .map(|(l, d)| l * Rational::from_integer(d.0[i].clone()))
                        .sum::<Rational>()
                        .is_zero()
                })
            }
        }
    }
}

/// Decides whether the directions lie in an open hemisphere.
pub fn in_open_hemisphere(dirs: &[Direction]) -> Result<Hemisphere> {
    let Some(first) = dirs.first() else {
        return Err(Error::InvalidInput("hemisphere test needs at least one direction".into()));
    };
    let n = first.rank();
    for d in dirs {
        check_rank(n, d.rank())?;
    }
    let vecs: Vec<Vec<Rational>> = dirs.iter().map(|d| d.character().0).collect();
    // Witness: minimize Σ χ·u subject to χ·u ≥ 1.
    let cons: Vec<LinearConstraint> = vecs.iter().map(|u| LinearConstraint::new(u.clone(), Rel::Ge, int(1))).collect();
    let objective: Vec<Rational> = (0..n).map(|i| -vecs.iter().map(|u| u[i].clone()).sum::<Rational>()).collect();
    if let LpOutcome::Optimal { point, .. } = maximize(n, &objective, &cons) {
        return Ok(Hemisphere::Witness(Character(point)));
    }
    let m = vecs.len();
    let mut cons = Vec::with_capacity(n + m + 1);
    for i in 0..n {
        cons.push(LinearConstraint::new(vecs.iter().map(|u| u[i].clone()).collect(), Rel::Eq, Rational::zero()));
    }
    cons.push(LinearConstraint::new(vec![int(1); m], Rel::Eq, int(1)));
    for j in 0..m {
        let mut e = vec![Rational::zero(); m];
        e[j] = int(1);
        cons.push(LinearConstraint::new(e, Rel::Ge, Rational::zero()));
    }
    match maximize(m, &vec![Rational::zero(); m], &cons) {
        LpOutcome::Optimal { point, .. } => Ok(Hemisphere::Combination(point)),
        _ => unreachable!("Gordan alternative: one of the two systems is feasible"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn dir(v: &[i64]) -> Direction {
        Direction::from_ints(v).unwrap()
    }

    fn ge(rank: usize, normal: &[i64], offset: i64) -> Polyhedron {
        Polyhedron::space(rank).with(Constraint::new(q(normal), int(offset), Strength::Ge))
    }

    fn tropical_line() -> Fan {
        Fan::from_rays(2, &[dir(&[-1, -1]), dir(&[1, 0]), dir(&[0, 1])]).unwrap()
    }

    #[test]
    fn membership_examples() {
        let c = Polyhedron::cone(2, &[], &[q(&[1, 0])], &[]).unwrap();
        assert!(c.contains_character(&Character::from_ints(&[1, 5])).unwrap());
        let c = Polyhedron::cone(2, &[], &[], &[q(&[1, 0])]).unwrap();
        assert!(!c.contains_character(&Character::from_ints(&[0, 1])).unwrap());
        let c = Polyhedron::cone(2, &[q(&[1, -1])], &[], &[]).unwrap();
        assert!(c.contains_character(&Character::from_ints(&[2, 2])).unwrap());
        assert!(c.contains_character(&Character::from_ints(&[2])).is_err());
    }

    #[test]
    fn ray_examples() {
        let quadrant = Polyhedron::cone(2, &[], &[q(&[1, 0]), q(&[0, 1])], &[]).unwrap();
        assert_eq!(quadrant.rays().unwrap(), vec![dir(&[0, 1]), dir(&[1, 0])]);
        let diag = Polyhedron::cone(2, &[q(&[1, -1])], &[q(&[-1, 0])], &[]).unwrap();
        assert_eq!(diag.rays().unwrap(), vec![dir(&[-1, -1])]);
        let plane = Polyhedron::space(2);
        assert_eq!(plane.rays().unwrap(), vec![dir(&[-1, 0]), dir(&[0, -1]), dir(&[0, 1]), dir(&[1, 0])]);
        assert!(Polyhedron::space(7).rays().is_err());
        // a 3d cone over a square
        let sq = Polyhedron::cone(3, &[], &[q(&[1, 0, 1]), q(&[-1, 0, 1]), q(&[0, 1, 1]), q(&[0, -1, 1])], &[]).unwrap();
        assert_eq!(sq.rays().unwrap().len(), 4);
    }

    #[test]
    fn dimension_and_emptiness() {
        let p = Polyhedron::cone(2, &[], &[q(&[1, 0]), q(&[-1, 0])], &[]).unwrap();
        assert_eq!(p.dimension(), Some(1));
        let p = Polyhedron::cone(2, &[], &[q(&[1, 0])], &[q(&[-1, 0])]).unwrap();
        assert!(p.is_empty());
        assert_eq!(Polyhedron::origin(3).dimension(), Some(0));
        assert_eq!(Polyhedron::space(3).dimension(), Some(3));
    }

    #[test]
    fn local_cone_at_origin_examples() {
        let point = Fan::from_pieces(1, vec![Polyhedron::point(&[int(1)])]).unwrap();
        assert!(point.local_cone_at_origin().is_empty());
        let ray = Fan::from_pieces(1, vec![ge(1, &[1], 0)]).unwrap();
        assert!(ray.local_cone_at_origin().set_eq(&ray).unwrap());
        let seg = Polyhedron::space(2)
            .with(Constraint::new(q(&[0, 1]), int(0), Strength::Eq))
            .with(Constraint::new(q(&[1, 0]), int(-1), Strength::Ge))
            .with(Constraint::new(q(&[-1, 0]), int(2), Strength::Ge));
        assert!(Fan::from_pieces(2, vec![seg]).unwrap().local_cone_at_origin().is_empty());
        // a ray whose initial segment is split across two pieces
        let split = Fan::from_pieces(1, vec![Polyhedron::origin(1), Polyhedron::cone(1, &[], &[], &[q(&[1])]).unwrap()]).unwrap();
        assert!(split.local_cone_at_origin().set_eq(&ray).unwrap());
    }

    #[test]
    fn local_cone_at_infinity_examples() {
        let point = Fan::from_pieces(1, vec![Polyhedron::point(&[int(1)])]).unwrap();
        assert!(point.local_cone_at_infinity().set_eq(&Fan::origin(1)).unwrap());
        let half = Fan::from_pieces(1, vec![ge(1, &[1], -1)]).unwrap();
        let ray = Fan::from_pieces(1, vec![ge(1, &[1], 0)]).unwrap();
        assert!(half.local_cone_at_infinity().set_eq(&ray).unwrap());
        let line = Polyhedron::space(2).with(Constraint::new(q(&[0, 1]), int(-1), Strength::Eq));
        let lc = Fan::from_pieces(2, vec![line]).unwrap().local_cone_at_infinity();
        let axis = Fan::from_pieces(2, vec![Polyhedron::cone(2, &[q(&[0, 1])], &[], &[]).unwrap()]).unwrap();
        assert!(lc.set_eq(&axis).unwrap());
        assert!(lc.local_cone_at_infinity().set_eq(&lc).unwrap());
    }

    #[test]
    fn hemisphere_examples() {
        let dirs = vec![dir(&[1, 0]), dir(&[0, 1])];
        let h = in_open_hemisphere(&dirs).unwrap();
        assert_eq!(h, Hemisphere::Witness(Character::from_ints(&[1, 1])));
        assert!(h.verify(&dirs));
        let dirs = vec![dir(&[1, 0]), dir(&[-1, 0])];
        let h = in_open_hemisphere(&dirs).unwrap();
        assert_eq!(h, Hemisphere::Combination(vec![frac(1, 2), frac(1, 2)]));
        let dirs = vec![dir(&[1, 0]), dir(&[0, 1]), dir(&[-1, -1])];
        let h = in_open_hemisphere(&dirs).unwrap();
        assert_eq!(h, Hemisphere::Combination(vec![frac(1, 3); 3]));
        assert!(h.verify(&dirs));
        assert!(in_open_hemisphere(&[]).is_err());
    }

    #[test]
    fn antipodal_cover_examples() {
        let removed = SphericalSet::from_directions(2, &[dir(&[1, 0]), dir(&[0, 1])]).unwrap();
        assert!(removed.complement().covers_with_antipodal());
        assert!(!SphericalSet::empty(1).covers_with_antipodal());
        assert!(SphericalSet::sphere(3).covers_with_antipodal());
        let pair = SphericalSet::from_directions(2, &[dir(&[1, 0]), dir(&[-1, 0])]).unwrap();
        assert!(!pair.complement().covers_with_antipodal());
    }

    #[test]
    fn balance_and_purity() {
        let line = tropical_line();
        assert_eq!(line.pure_dimension(), Some(1));
        assert!(line.balanceable_at(&Character::from_ints(&[0, 0])).unwrap());
        assert!(line.balanceable_at(&Character::from_ints(&[3, 0])).unwrap());
        let ray = Fan::from_rays(2, &[dir(&[1, 0])]).unwrap();
        assert!(!ray.balanceable_at(&Character::from_ints(&[0, 0])).unwrap());
        let full_line = Fan::from_rays(2, &[dir(&[1, 0]), dir(&[-1, 0])]).unwrap();
        assert!(full_line.balanceable_at(&Character::from_ints(&[0, 0])).unwrap());
        assert!(line.balanceable_at(&Character::from_ints(&[1, 1])).is_err());

        let mixed = Fan::from_pieces(
            2,
            vec![
                Polyhedron::cone(2, &[], &[q(&[1, 0]), q(&[0, 1])], &[]).unwrap(),
                Polyhedron::open_ray(&dir(&[-1, -1])),
            ],
        )
        .unwrap();
        assert_eq!(mixed.pure_dimension(), None);
        assert_eq!(Fan::origin(2).pure_dimension(), Some(0));
        assert_eq!(Fan::empty(2).pure_dimension(), None);
    }

    #[test]
    fn radial_projection_of_affine_pieces() {
        // the point χ = 1 in rank 1 projects to [+1]
        let p = Fan::from_pieces(1, vec![Polyhedron::point(&[int(1)])]).unwrap();
        let s = p.radial_projection();
        assert!(s.contains(&dir(&[1])).unwrap());
        assert!(!s.contains(&dir(&[-1])).unwrap());
        // the affine line y = x + 1 projects onto the open half-plane y > x
        let l = Polyhedron::space(2).with(Constraint::new(q(&[-1, 1]), int(-1), Strength::Eq));
        let s = Fan::from_pieces(2, vec![l]).unwrap().radial_projection();
        assert!(s.contains(&dir(&[0, 1])).unwrap());
        assert!(s.contains(&dir(&[-1, 0])).unwrap());
        assert!(!s.contains(&dir(&[1, 1])).unwrap());
        assert!(!s.contains(&dir(&[1, 0])).unwrap());
        assert!(!s.contains(&dir(&[-1, -1])).unwrap());
        // a half-line {x ≥ -1} contains the origin and so every direction
        let s = Fan::from_pieces(1, vec![ge(1, &[1], 1)]).unwrap().radial_projection();
        assert!(s.set_eq(&SphericalSet::sphere(1)).unwrap());
    }

    #[test]
    fn complement_round_trip() {
        let line = tropical_line();
        let comp = line.complement();
        assert!(!comp.contains(&q(&[0, 0])));
        assert!(comp.contains(&q(&[1, 1])));
        assert!(comp.complement().set_eq(&line).unwrap());
        let sphere_line = line.radial_projection();
        assert_eq!(sphere_line.finite_directions().unwrap().unwrap(), vec![dir(&[-1, -1]), dir(&[0, 1]), dir(&[1, 0])]);
    }
}
