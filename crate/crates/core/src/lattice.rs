//! Exact integer and rational linear algebra.
//!
//! Everything here works over `BigInt` / `BigRational`; there is no floating
//! point anywhere in the crate. The lattice operations (saturation, lattice
//! indices, quotient coordinates) are all driven by the Smith normal form.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type RationalVector = Vec<BigRational>;
pub type IntVector = Vec<BigInt>;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. `cols` is needed so that a matrix with no
    /// rows still knows its width.
    pub fn from_rows(cols: usize, rows: Vec<IntVector>) -> Self {
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        IntegerMatrix { rows: n_rows, cols, data }
    }

    pub fn from_i64(cols: usize, rows: &[&[i64]]) -> Self {
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<IntVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntegerMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.row_vecs();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    pub fn rank(&self) -> usize {
        rational_rank(&self.row_vecs().iter().map(|r| to_rational(r)).collect::<Vec<_>>())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[source * self.cols + j] * factor;
            self.data[target * self.cols + j] += v;
        }
    }

    /// col[target] += factor * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + source] * factor;
            self.data[i * self.cols + target] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }
}

impl Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_vec(self.row(i)))?;
        }
        write!(f, "]")
    }
}

pub(crate) fn fmt_vec<T: fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// `M = U * D * V` with `U`, `V` unimodular and `D` diagonal with
/// `d_1 | d_2 | ...`, all diagonal entries nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form. Pivots are chosen as the smallest nonzero absolute value
/// in the active submatrix, ties broken in row-major order, so the output is
/// fully deterministic.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    'outer: for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &d[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    match pivot {
                        Some((pi, pj)) if d[(pi, pj)].abs() <= x.abs() => {}
                        _ => pivot = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break 'outer };
            d.swap_rows(t, pi);
            u.swap_cols(t, pi);
            d.swap_cols(t, pj);
            v.swap_rows(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                if !q.is_zero() {
                    d.add_row_multiple(i, t, &-q.clone());
                    u.add_col_multiple(t, i, &q);
                }
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                if !q.is_zero() {
                    d.add_col_multiple(j, t, &-q.clone());
                    v.add_row_multiple(t, j, &q);
                }
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match bad_row {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_col_multiple(i, t, &-BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_col(t);
        }
    }
    SmithForm { u, d, v }
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `m`.
/// Zero rows are dropped; pivots are positive and entries above a pivot are
/// reduced into `[0, pivot)`.
pub fn hermite_normal_form(m: &IntegerMatrix) -> IntegerMatrix {
    let cols = m.cols();
    let mut a = m.row_vecs();
    let n = a.len();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        for i in r + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let eg = a[r][c].extended_gcd(&a[i][c]);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let ar = &a[r][c] / &g;
            let ai = &a[i][c] / &g;
            let new_r: IntVector = (0..cols).map(|j| &x * &a[r][j] + &y * &a[i][j]).collect();
            let new_i: IntVector = (0..cols).map(|j| &ai * &a[r][j] - &ar * &a[i][j]).collect();
            a[r] = new_r;
            a[i] = new_i;
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                for j in 0..cols {
                    let v = &q * &a[r][j];
                    a[i][j] -= v;
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a.retain(|row| row.iter().any(|x| !x.is_zero()));
    IntegerMatrix::from_rows(cols, a)
}

/// Basis (in Hermite form) of `span_Q(rows of b) ∩ Z^n`.
pub fn saturate(b: &IntegerMatrix) -> IntegerMatrix {
    let smith = smith_normal_form(b);
    let r = smith.rank();
    let basis: Vec<IntVector> = (0..r).map(|i| smith.v.row(i).to_vec()).collect();
    hermite_normal_form(&IntegerMatrix::from_rows(b.cols(), basis))
}

/// The primitive integer vector on the ray through `v`.
pub fn primitive_generator(v: &[BigRational]) -> Result<IntVector> {
    if v.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    Ok(primitive(&clear_denominators(v)))
}

/// Scales a rational vector by the positive lcm of its denominators.
pub fn clear_denominators(v: &[BigRational]) -> IntVector {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Divides an integer vector by the gcd of its entries (zero stays zero).
pub fn primitive(v: &[BigInt]) -> IntVector {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Index `[Z^n : Λ1 ⊕ Λ2]` where `Λi` is the saturation of the row lattice of `bi`.
pub fn lattice_index(b1: &IntegerMatrix, b2: &IntegerMatrix) -> Result<BigInt> {
    if b1.cols() != b2.cols() {
        return Err(Error::DimensionMismatch { expected: b1.cols(), found: b2.cols() });
    }
    let n = b1.cols();
    let s1 = saturate(b1);
    let s2 = saturate(b2);
    if s1.rows() + s2.rows() != n {
        return Err(Error::NotComplementary(format!(
            "ranks {} + {} != {}",
            s1.rows(),
            s2.rows(),
            n
        )));
    }
    let det = s1.stack(&s2).determinant();
    if det.is_zero() {
        return Err(Error::NotComplementary("spans intersect nontrivially".into()));
    }
    Ok(det.abs())
}

/// A surjective integral map `Z^n -> Z^(n-d)` whose kernel is a saturated
/// rank-`d` sublattice. Stored as a `(n-d) x n` matrix in Hermite form, so
/// that two maps with the same kernel are bit-identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientMap {
    matrix: IntegerMatrix,
}

impl QuotientMap {
    pub fn identity(n: usize) -> Self {
        QuotientMap { matrix: IntegerMatrix::identity(n) }
    }

    /// The map `R^n -> R^0`.
    pub fn onto_point(n: usize) -> Self {
        QuotientMap { matrix: IntegerMatrix::zeros(0, n) }
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, x: &[BigRational]) -> RationalVector {
        (0..self.matrix.rows())
            .map(|i| {
                self.matrix
                    .row(i)
                    .iter()
                    .zip(x)
                    .fold(BigRational::zero(), |acc, (a, b)| acc + BigRational::from(a.clone()) * b)
            })
            .collect()
    }

    pub fn apply_int(&self, x: &[BigInt]) -> IntVector {
        (0..self.matrix.rows())
            .map(|i| self.matrix.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Quotient coordinates for `Z^n / (span(L) ∩ Z^n)`.
pub fn quotient_coordinates(l: &IntegerMatrix, n: usize) -> Result<QuotientMap> {
    if l.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: l.cols() });
    }
    let smith = smith_normal_form(l);
    let r = smith.rank();
    if r == n {
        return Err(Error::FullRankQuotient);
    }
    if r == 0 {
        return Ok(QuotientMap::identity(n));
    }
    // x = c V with c = x V^{-1}; the last n - r coordinates of c kill the kernel.
    let v_inv = unimodular_inverse(&smith.v);
    let map_rows: Vec<IntVector> = (r..n).map(|j| (0..n).map(|i| v_inv[(i, j)].clone()).collect()).collect();
    let matrix = hermite_normal_form(&IntegerMatrix::from_rows(n, map_rows));
    debug_assert_eq!(matrix.rows(), n - r);
    Ok(QuotientMap { matrix })
}

fn unimodular_inverse(m: &IntegerMatrix) -> IntegerMatrix {
    let n = m.rows();
    let mut aug: Vec<RationalVector> = (0..n)
        .map(|i| {
            let mut row = to_rational(m.row(i));
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    assert_eq!(pivots.len(), n, "matrix is singular");
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let x = &aug[i][n + j];
                    assert!(x.is_integer(), "inverse is not integral");
                    x.to_integer()
                })
                .collect()
        })
        .collect();
    IntegerMatrix::from_rows(n, rows)
}

// ---------------------------------------------------------------------------
// Rational helpers

pub fn to_rational(v: &[BigInt]) -> RationalVector {
    v.iter().map(|x| BigRational::from(x.clone())).collect()
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn ints(v: &[i64]) -> IntVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rats(v: &[i64]) -> RationalVector {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_mixed(a: &[BigInt], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + BigRational::from(x.clone()) * y)
}

/// In-place reduced row echelon form. Returns pivot columns; zero rows are
/// moved to the bottom.
pub fn row_reduce(m: &mut [RationalVector]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = &f * &m[r][j];
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rational_rank(rows: &[RationalVector]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// Basis of `{x : rows · x = 0}` over the rationals, scaled to primitive integer vectors.
pub fn nullspace(rows: &[RationalVector], n: usize) -> Vec<IntVector> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(&mut m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); n];
            x[f] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -m[i][f].clone();
            }
            primitive(&clear_denominators(&x))
        })
        .collect()
}

/// Solves `sum_i c_i * basis_i = target` for the coefficients `c`, if a
/// solution exists. `basis` need not be independent; the returned solution
/// sets free coefficients to zero.
pub fn solve_in_span(basis: &[RationalVector], target: &[BigRational]) -> Option<RationalVector> {
    let n = target.len();
    let k = basis.len();
    // Rows are coordinates, columns are basis vectors plus the target.
    let mut aug: Vec<RationalVector> = (0..n)
        .map(|i| {
            let mut row: RationalVector = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.contains(&k) {
        return None;
    }
    let mut c = vec![BigRational::zero(); k];
    for (i, &p) in pivots.iter().enumerate() {
        c[p] = aug[i][k].clone();
    }
    Some(c)
}

/// Orthogonal projection of `x` onto the orthogonal complement of `span(basis)`.
pub fn project_out(x: &[BigRational], basis: &[RationalVector]) -> RationalVector {
    if basis.is_empty() {
        return x.to_vec();
    }
    // Solve the Gram system G c = B x, then x - B^T c.
    let k = basis.len();
    let gram: Vec<RationalVector> = (0..k)
        .map(|i| {
            let mut row: RationalVector = (0..k).map(|j| dot_rat(&basis[i], &basis[j])).collect();
            row.push(dot_rat(&basis[i], x));
            row
        })
        .collect();
    let mut g = gram;
    let pivots = row_reduce(&mut g);
    let mut c = vec![BigRational::zero(); k];
    for (i, &p) in pivots.iter().enumerate() {
        if p < k {
            c[p] = g[i][k].clone();
        }
    }
    let mut out = x.to_vec();
    for (ci, b) in c.iter().zip(basis) {
        for (o, bj) in out.iter_mut().zip(b) {
            *o -= ci * bj;
        }
    }
    out
}
