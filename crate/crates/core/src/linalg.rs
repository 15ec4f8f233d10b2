//! Dense exact linear algebra over ℚ and ℤ: elimination, kernels, integer
//! kernel lattices (column Hermite reduction) and LLL size reduction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, lcm_of_denominators, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = int(1);
        }
        m
    }

    pub fn scalar(n: usize, c: Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn transpose(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = &m[(r, j)] * &f;
                        m[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the right kernel `{x : Mx = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = int(1);
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let mut det = int(1);
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            det *= m[(c, c)].clone();
            for i in c + 1..m.rows {
                if !m[(i, c)].is_zero() {
                    let f = &m[(i, c)] / &m[(c, c)];
                    for j in c..m.cols {
                        let v = &m[(c, j)] * &f;
                        m[(i, j)] -= v;
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = int(1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(out)
    }

    /// `M^k` for any integer `k`; negative powers need an invertible matrix.
    pub fn pow(&self, k: i64) -> Option<QMatrix> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = QMatrix::identity(self.rows);
        let mut b = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Some(acc)
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(format_rational).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(format_rational).collect();
            seq.serialize_element(&r)?;
        }
        seq.end()
    }
}

/// Rank of a list of rational row vectors of common length `n`.
pub fn rank_of(rows: &[Vec<Rational>], n: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    QMatrix::from_rows(rows.to_vec())
        .map(|m| m.rank())
        .unwrap_or_else(|_| panic!("rows must have length {n}"))
}

/// Basis of `{x ∈ ℚⁿ : r·x = 0 for every row r}`.
pub fn nullspace_of(rows: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    if rows.is_empty() {
        return (0..n)
            .map(|i| {
                let mut v = vec![Rational::zero(); n];
                v[i] = int(1);
                v
            })
            .collect();
    }
    QMatrix::from_rows(rows.to_vec()).expect("rectangular").nullspace()
}

/// Scales each rational row to a primitive integer row.
pub fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let l = lcm_of_denominators(r);
            r.iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

/// A ℤ-basis of the integer kernel `{u ∈ ℤᵐ : B u = 0}` of an integer matrix
/// with `m` columns, computed by unimodular column operations.
pub fn integer_kernel(b: &[Vec<BigInt>], m: usize) -> Vec<Vec<BigInt>> {
    // Work on columns: cols[j] is column j of B, u[j] the matching column of U.
    let rows = b.len();
    let mut cols: Vec<Vec<BigInt>> = (0..m).map(|j| (0..rows).map(|i| b[i][j].clone()).collect()).collect();
    let mut u: Vec<Vec<BigInt>> = (0..m)
        .map(|j| {
            let mut e = vec![BigInt::zero(); m];
            e[j] = BigInt::one();
            e
        })
        .collect();
    let mut start = 0;
    for i in 0..rows {
        if start == m {
            break;
        }
        // Euclid on row i across columns start..m until one nonzero remains.
        loop {
            let nz: Vec<usize> = (start..m).filter(|&j| !cols[j][i].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&j) = nz.first() {
                    cols.swap(start, j);
                    u.swap(start, j);
                    start += 1;
                }
                break;
            }
            let piv = *nz.iter().min_by_key(|&&j| cols[j][i].abs()).unwrap();
            for &j in &nz {
                if j == piv {
                    continue;
                }
                let q = cols[j][i].div_floor(&cols[piv][i]);
                if q.is_zero() {
                    continue;
                }
                let (cp, up) = (cols[piv].clone(), u[piv].clone());
                for (x, y) in cols[j].iter_mut().zip(&cp) {
                    *x -= &q * y;
                }
                for (x, y) in u[j].iter_mut().zip(&up) {
                    *x -= &q * y;
                }
            }
        }
    }
    u.drain(start..).collect()
}

/// LLL reduction (δ = 3/4) of linearly independent integer vectors.
pub fn lll_reduce(mut basis: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = basis.len();
    if n <= 1 {
        return basis;
    }
    let delta = Rational::new(BigInt::from(3), BigInt::from(4));
    let to_q = |v: &Vec<BigInt>| -> Vec<Rational> { v.iter().map(|x| Rational::from_integer(x.clone())).collect() };
    let dotq = |a: &[Rational], b: &[Rational]| -> Rational { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let gram_schmidt = |basis: &Vec<Vec<BigInt>>| -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
        let mut bstar: Vec<Vec<Rational>> = Vec::new();
        let mut mu = vec![vec![Rational::zero(); basis.len()]; basis.len()];
        for i in 0..basis.len() {
            let bi = to_q(&basis[i]);
            let mut v = bi.clone();
            for j in 0..i {
                let denom = dotq(&bstar[j], &bstar[j]);
                mu[i][j] = dotq(&bi, &bstar[j]) / denom;
                for (x, y) in v.iter_mut().zip(&bstar[j]) {
                    *x -= &mu[i][j] * y;
                }
            }
            bstar.push(v);
        }
        (bstar, mu)
    };
    let mut k = 1;
    let mut guard = 0usize;
    while k < n && guard < 10_000 {
        guard += 1;
        let (_, mu) = gram_schmidt(&basis);
        for j in (0..k).rev() {
            let q = round_rational(&mu[k][j]);
            if !q.is_zero() {
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
            }
        }
        let (bstar, mu) = gram_schmidt(&basis);
        let lhs = dotq(&bstar[k], &bstar[k]);
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * dotq(&bstar[k - 1], &bstar[k - 1]);
        if lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    basis
}

pub(crate) fn round_rational(q: &Rational) -> BigInt {
    (q + Rational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

fn height(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
}

/// Finds an integer vector `u` with `B u = 0` and `u[pinned] = 1`, trying to
/// keep its max-norm small. `None` means no such integer vector exists.
pub fn integer_solution_with_unit(b: &[Vec<BigInt>], m: usize, pinned: usize) -> Option<Vec<BigInt>> {
    let kernel = integer_kernel(b, m);
    if kernel.is_empty() {
        return None;
    }
    // Combine kernel vectors so that the pinned coordinate becomes 1.
    let a: Vec<Vec<BigInt>> = vec![kernel.iter().map(|v| v[pinned].clone()).collect()];
    let g = a[0].iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_one() {
        return None;
    }
    let coeffs = bezout(&a[0]);
    let mut particular = vec![BigInt::zero(); m];
    for (c, v) in coeffs.iter().zip(&kernel) {
        for (x, y) in particular.iter_mut().zip(v) {
            *x += c * y;
        }
    }
    // Homogeneous part: kernel combinations whose pinned coordinate is zero.
    let hom_coeffs = integer_kernel(&a, kernel.len());
    let mut hom: Vec<Vec<BigInt>> = hom_coeffs
        .iter()
        .map(|c| {
            let mut v = vec![BigInt::zero(); m];
            for (ci, k) in c.iter().zip(&kernel) {
                for (x, y) in v.iter_mut().zip(k) {
                    *x += ci * y;
                }
            }
            v
        })
        .collect();
    if hom.is_empty() {
        return Some(particular);
    }
    hom = lll_reduce(hom);
    if hom.len() == 1 {
        return Some(minimize_along(&particular, &hom[0]));
    }
    Some(babai_reduce(particular, &hom))
}

/// Whether `target` lies in the ℤ-span of `gens`, via an echelon basis of
/// the lattice built by integer row reduction.
pub fn lattice_contains(gens: &[Vec<BigInt>], target: &[BigInt]) -> bool {
    let r = target.len();
    // Rows in echelon form, keyed by leading index.
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for g in gens {
        let mut v = g.clone();
        for i in 0..r {
            if v[i].is_zero() {
                continue;
            }
            match basis.iter().position(|(lead, _)| *lead == i) {
                None => {
                    let pos = basis.iter().position(|(lead, _)| *lead > i).unwrap_or(basis.len());
                    basis.insert(pos, (i, v));
                    break;
                }
                Some(k) => {
                    let b = &mut basis[k].1;
                    while !v[i].is_zero() {
                        let q = b[i].div_floor(&v[i]);
                        for (x, y) in b.iter_mut().zip(&v) {
                            *x -= &q * y;
                        }
                        std::mem::swap(b, &mut v);
                    }
                }
            }
        }
    }
    let mut t = target.to_vec();
    for (lead, b) in &basis {
        let (q, rem) = t[*lead].div_rem(&b[*lead]);
        if !rem.is_zero() {
            return false;
        }
        for (x, y) in t.iter_mut().zip(b) {
            *x -= &q * y;
        }
    }
    t.iter().all(Zero::is_zero)
}

fn bezout(a: &[BigInt]) -> Vec<BigInt> {
    // Coefficients c with Σ cᵢ aᵢ = gcd(a).
    let mut coeffs = vec![BigInt::zero(); a.len()];
    let mut g = BigInt::zero();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        if g.is_zero() {
            g = ai.clone();
            coeffs[i] = BigInt::one();
            continue;
        }
        let e = g.extended_gcd(ai);
        for c in coeffs.iter_mut().take(i) {
            *c *= &e.x;
        }
        coeffs[i] = e.y.clone();
        g = e.gcd;
    }
    if g.is_negative() {
        for c in coeffs.iter_mut() {
            *c = -c.clone();
        }
    }
    coeffs
}

/// Exact minimizer of `max |p + t d|` over integer `t`.
fn minimize_along(p: &[BigInt], d: &[BigInt]) -> Vec<BigInt> {
    let eval = |t: &BigInt| -> BigInt {
        height(&p.iter().zip(d).map(|(x, y)| x + t * y).collect::<Vec<_>>())
    };
    // Candidate breakpoints t = -pᵢ/dᵢ (floor and ceil) and intersections of
    // the lines |pᵢ + t dᵢ| = |pⱼ + t dⱼ|; the function is convex in t.
    let mut cands: Vec<BigInt> = vec![BigInt::zero()];
    let push = |c: &mut Vec<BigInt>, q: Rational| {
        c.push(q.floor().to_integer());
        c.push(q.ceil().to_integer());
    };
    for i in 0..p.len() {
        if !d[i].is_zero() {
            push(&mut cands, Rational::new(-p[i].clone(), d[i].clone()));
        }
        for j in 0..p.len() {
            for s in [BigInt::one(), -BigInt::one()] {
                let den = &d[i] - &s * &d[j];
                if !den.is_zero() {
                    push(&mut cands, Rational::new(&s * &p[j] - &p[i], den));
                }
            }
        }
    }
    let best = cands
        .into_iter()
        .min_by(|a, b| eval(a).cmp(&eval(b)).then_with(|| a.abs().cmp(&b.abs())).then_with(|| a.cmp(b)))
        .unwrap();
    p.iter().zip(d).map(|(x, y)| x + &best * y).collect()
}

fn babai_reduce(mut p: Vec<BigInt>, basis: &[Vec<BigInt>]) -> Vec<BigInt> {
    // Greedy descent: subtract rounded projections, then local ±1 moves.
    for _ in 0..4 {
        for b in basis.iter().rev() {
            let bb: BigInt = b.iter().map(|x| x * x).sum();
            let pb: BigInt = p.iter().zip(b).map(|(x, y)| x * y).sum();
            let q = round_rational(&Rational::new(pb, bb));
            if !q.is_zero() {
                for (x, y) in p.iter_mut().zip(b) {
                    *x -= &q * y;
                }
            }
        }
    }
    loop {
        let h0 = height(&p);
        for b in basis {
            p = minimize_along(&p, b);
        }
        if height(&p) >= h0 {
            break;
        }
    }
    p
}
