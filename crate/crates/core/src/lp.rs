//! Exact rational linear programming: a dense two-phase simplex with
//! Bland's rule, and strict-inequality feasibility built on top of it.

use num_traits::{Signed, Zero};

use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Ge,
    Le,
}

/// `coeffs · x  rel  rhs` over free real variables `x`.
#[derive(Debug, Clone)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rational>,
    pub rel: Rel,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<Rational>, rel: Rel, rhs: Rational) -> Self {
        LinearConstraint { coeffs, rel, rhs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { point: Vec<Rational>, value: Rational },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (v, p) in self.rows[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · y` from the current feasible basis. Columns with
    /// `allowed[j] == false` never enter. Returns false when unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        let ncols = cost.len();
        loop {
            let entering = (0..ncols).find(|&j| {
                if !allowed[j] || self.basis.contains(&j) {
                    return false;
                }
                let mut r = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    let t = &self.rows[i][j];
                    if !t.is_zero() && !cost[b].is_zero() {
                        r -= &cost[b] * t;
                    }
                }
                r.is_positive()
            });
            let Some(j) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let t = &self.rows[i][j];
                if t.is_positive() {
                    let ratio = &self.rhs[i] / t;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, j),
            }
        }
    }
}

/// Maximizes `objective · x` over free variables `x ∈ ℚⁿ`.
pub fn maximize(n: usize, objective: &[Rational], constraints: &[LinearConstraint]) -> LpOutcome {
    let m = constraints.len();
    let n_slack = constraints.iter().filter(|c| c.rel != Rel::Eq).count();
    // Columns: x⁺ (n), x⁻ (n), slacks, artificials (m).
    let n_struct = 2 * n + n_slack;
    let ncols = n_struct + m;
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut slack = 2 * n;
    for (i, c) in constraints.iter().enumerate() {
        debug_assert_eq!(c.coeffs.len(), n);
        let mut row = vec![Rational::zero(); ncols];
        for (j, a) in c.coeffs.iter().enumerate() {
            row[j] = a.clone();
            row[n + j] = -a.clone();
        }
        match c.rel {
            Rel::Eq => {}
            Rel::Le => {
                row[slack] = int(1);
                slack += 1;
            }
            Rel::Ge => {
                row[slack] = int(-1);
                slack += 1;
            }
        }
        let mut b = c.rhs.clone();
        if b.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            b = -b;
        }
        row[n_struct + i] = int(1);
        rows.push(row);
        rhs.push(b);
    }
    let mut t = Tableau { rows, rhs, basis: (n_struct..ncols).collect() };

    // Phase one.
    let mut cost1 = vec![Rational::zero(); ncols];
    for c in cost1.iter_mut().skip(n_struct) {
        *c = int(-1);
    }
    let all = vec![true; ncols];
    t.optimize(&cost1, &all);
    let infeas: Rational = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(&b, _)| b >= n_struct)
        .map(|(_, v)| v.clone())
        .sum();
    if infeas.is_positive() {
        return LpOutcome::Infeasible;
    }
    // Drive artificials out of the basis, dropping redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n_struct {
            match (0..n_struct).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }

    // Phase two.
    let mut cost2 = vec![Rational::zero(); ncols];
    for (j, c) in objective.iter().enumerate() {
        cost2[j] = c.clone();
        cost2[n + j] = -c.clone();
    }
    let allowed: Vec<bool> = (0..ncols).map(|j| j < n_struct).collect();
    if !t.optimize(&cost2, &allowed) {
        return LpOutcome::Unbounded;
    }
    let mut y = vec![Rational::zero(); ncols];
    for (b, v) in t.basis.iter().zip(&t.rhs) {
        y[*b] = v.clone();
    }
    let point: Vec<Rational> = (0..n).map(|j| &y[j] - &y[n + j]).collect();
    let value = objective.iter().zip(&point).map(|(a, b)| a * b).sum();
    LpOutcome::Optimal { point, value }
}

/// Strength of a homogeneous-or-affine constraint `normal · x + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strength {
    /// `= 0`
    Eq,
    /// `≥ 0`
    Ge,
    /// `> 0`
    Gt,
}

/// Finds a point satisfying `a·x + b (=, ≥, >) 0` for every `(a, b, strength)`,
/// or `None` if the system is infeasible.
pub fn find_point(n: usize, constraints: &[(&[Rational], &Rational, Strength)]) -> Option<Vec<Rational>> {
    let has_strict = constraints.iter().any(|c| c.2 == Strength::Gt);
    let dim = if has_strict { n + 1 } else { n };
    let mut lp = Vec::with_capacity(constraints.len() + 1);
    for (a, b, s) in constraints {
        let mut coeffs: Vec<Rational> = a.to_vec();
        if has_strict {
            coeffs.push(if *s == Strength::Gt { int(-1) } else { Rational::zero() });
        }
        let rel = if *s == Strength::Eq { Rel::Eq } else { Rel::Ge };
        lp.push(LinearConstraint::new(coeffs, rel, -(*b).clone()));
    }
    let mut objective = vec![Rational::zero(); dim];
    if has_strict {
        let mut cap = vec![Rational::zero(); dim];
        cap[n] = int(1);
        lp.push(LinearConstraint::new(cap, Rel::Le, int(1)));
        objective[n] = int(1);
    }
    match maximize(dim, &objective, &lp) {
        LpOutcome::Optimal { mut point, value } => {
            if has_strict && !value.is_positive() {
                None
            } else {
                point.truncate(n);
                Some(point)
            }
        }
        LpOutcome::Unbounded => unreachable!("objective is capped"),
        LpOutcome::Infeasible => None,
    }
}
