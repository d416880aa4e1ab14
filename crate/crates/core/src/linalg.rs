//! Exact integer and rational linear algebra.
//!
//! Everything here works over `BigInt`/`BigRational`; there is no floating
//! point. Matrices are small (dimension at most a few dozen), so the
//! algorithms are the textbook ones: symmetric Gaussian elimination for
//! congruence diagonalization, row reduction for kernels and linear systems,
//! and the elementary-operation Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Reduced fraction with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Symmetric integer matrix. Entries are machine integers; every derived
/// quantity is computed in arbitrary precision.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntSymMatrix {
    dim: usize,
    entries: Vec<i64>,
}

impl fmt::Debug for IntSymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl IntSymMatrix {
    /// Builds a matrix from rows, rejecting ragged or asymmetric input.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::input("gram", "matrix is empty"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::input(
                    format!("gram[{i}]"),
                    format!("row has length {}, expected {dim}", row.len()),
                ));
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::input(
                        format!("gram[{i}][{j}]"),
                        format!(
                            "matrix is not symmetric: gram[{i}][{j}] = {} but gram[{j}][{i}] = {}",
                            rows[i][j], rows[j][i]
                        ),
                    ));
                }
            }
        }
        Ok(Self {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from a function of the upper triangle; `f(i, j)` is
    /// only consulted for `i <= j`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                entries[i * dim + j] = v;
                entries[j * dim + i] = v;
            }
        }
        Self { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| i64::from(i == j))
    }

    pub fn diagonal(diag: &[i64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { 0 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diagonal_entries(&self) -> Vec<i64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// Principal submatrix on the given index list (in that order).
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }

    /// Simultaneous row/column permutation: entry `(i, j)` of the result is
    /// entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        self.principal_submatrix(perm)
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .map(|(&a, b)| b * a)
                    .sum::<BigInt>()
            })
            .collect()
    }

    pub fn apply_rational(&self, x: &[Rational]) -> Vec<Rational> {
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Rational::zero(), |acc, (&a, b)| acc + b * rat(a))
            })
            .collect()
    }

    pub fn bilinear(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        dot(x, &self.apply(y))
    }

    pub fn bilinear_rational(&self, x: &[Rational], y: &[Rational]) -> Rational {
        dot_rational(x, &self.apply_rational(y))
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix::from_fn(self.dim, self.dim, |i, j| rat(self.get(i, j)))
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.dim, self.dim, |i, j| int(self.get(i, j)))
    }

    pub fn signature(&self) -> Signature {
        signature_and_diagonalize(self).signature
    }

    pub fn rank(&self) -> usize {
        let s = self.signature();
        s.n_plus + s.n_minus
    }

    pub fn det(&self) -> BigInt {
        let d = signature_and_diagonalize(self);
        let prod = d
            .diagonal
            .iter()
            .fold(Rational::one(), |acc, x| acc * x);
        debug_assert!(prod.is_integer());
        // The transform is a product of swaps and unit shears, so det T = +-1
        // and det M equals the product of the diagonal.
        prod.to_integer()
    }
}

pub fn dot(x: &[BigInt], y: &[BigInt]) -> BigInt {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn dot_rational(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter().zip(y).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

/// Inertia triple of a real symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl Signature {
    pub fn new(n_plus: usize, n_minus: usize, n_zero: usize) -> Self {
        Self {
            n_plus,
            n_minus,
            n_zero,
        }
    }

    pub fn dim(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }

    pub fn rank(&self) -> usize {
        self.n_plus + self.n_minus
    }

    /// Signature `(1, r - 1)` on the non-degenerate part.
    pub fn is_hyperbolic_span(&self) -> bool {
        self.n_plus == 1
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.n_plus, self.n_minus, self.n_zero)
    }
}

/// Dense rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        f.debug_list().entries(rows).finish()
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| rows[i][j].clone())
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| rat(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        RatMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Rational::zero(), |acc, k| acc + self.get(i, k) * other.get(k, j))
        })
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        (0..self.rows).map(|i| dot_rational(self.row(i), x)).collect()
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

    /// `row[dst] += factor * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, factor: &Rational) {
        for j in 0..self.cols {
            let v = self.get(src, j) * factor;
            let cur = &mut self.data[dst * self.cols + j];
            *cur += v;
        }
    }

    /// `col[dst] += factor * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, factor: &Rational) {
        for i in 0..self.rows {
            let v = self.get(i, src) * factor;
            let cur = &mut self.data[i * self.cols + dst];
            *cur += v;
        }
    }

    /// Exact inverse, `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a.get(col, col).clone();
            let pinv = p.recip();
            for j in 0..n {
                let v = a.get(col, j) * &pinv;
                a.set(col, j, v);
                let w = inv.get(col, j) * &pinv;
                inv.set(col, j, w);
            }
            for r in 0..n {
                if r != col && !a.get(r, col).is_zero() {
                    let f = -a.get(r, col).clone();
                    a.add_row(r, col, &f);
                    inv.add_row(r, col, &f);
                }
            }
        }
        Some(inv)
    }

    /// Reduced row echelon form; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let pinv = self.get(row, col).recip();
            for j in 0..self.cols {
                let v = self.get(row, j) * &pinv;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r != row && !self.get(r, col).is_zero() {
                    let f = -self.get(r, col).clone();
                    self.add_row(r, row, &f);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Rational basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut a = self.clone();
        let pivots = a.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -a.get(r, f).clone();
                }
                v
            })
            .collect()
    }
}

/// Result of congruence diagonalization: `transformᵀ · M · transform = diag(diagonal)`.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    pub signature: Signature,
    pub diagonal: Vec<Rational>,
    pub transform: RatMatrix,
}

/// Congruence diagonalization with symmetric pivoting.
pub fn signature_and_diagonalize(m: &IntSymMatrix) -> Diagonalization {
    diagonalize_symmetric(&m.to_rational())
}

/// Same as [`signature_and_diagonalize`] for a rational symmetric matrix.
pub fn diagonalize_symmetric(m: &RatMatrix) -> Diagonalization {
    let n = m.rows();
    assert_eq!(n, m.cols(), "matrix must be square");
    let mut a = m.clone();
    let mut t = RatMatrix::identity(n);
    for k in 0..n {
        let pivot = (k..n).find(|&i| !a.get(i, i).is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => {
                // All remaining diagonal entries vanish. Use x_i -> x_i + x_j on a
                // nonzero off-diagonal pair, which makes the new (i, i) entry 2 a_ij.
                let pair = (k..n)
                    .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a.get(i, j).is_zero());
                let Some((i, j)) = pair else {
                    break;
                };
                let one = Rational::one();
                a.add_col(i, j, &one);
                a.add_row(i, j, &one);
                t.add_col(i, j, &one);
                i
            }
        };
        a.swap_rows(k, pivot);
        a.swap_cols(k, pivot);
        t.swap_cols(k, pivot);
        let p = a.get(k, k).clone();
        for j in (k + 1)..n {
            if a.get(k, j).is_zero() {
                continue;
            }
            let f = -(a.get(k, j) / &p);
            a.add_col(j, k, &f);
            a.add_row(j, k, &f);
            t.add_col(j, k, &f);
        }
    }
    let diagonal: Vec<Rational> = (0..n).map(|i| a.get(i, i).clone()).collect();
    let mut sig = Signature::new(0, 0, 0);
    for d in &diagonal {
        if d.is_positive() {
            sig.n_plus += 1;
        } else if d.is_negative() {
            sig.n_minus += 1;
        } else {
            sig.n_zero += 1;
        }
    }
    Diagonalization {
        signature: sig,
        diagonal,
        transform: t,
    }
}

/// Dense integer matrix (used for Smith normal form and unimodular transforms).
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        f.debug_list().entries(rows).finish()
    }
}

impl IntMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| int(rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        IntMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |i, j| Rational::from_integer(self.get(i, j).clone()))
    }

    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let q = self.to_rational();
        let mut a = q;
        let n = self.rows;
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return BigInt::zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let piv = a.get(col, col).clone();
            det *= &piv;
            for r in (col + 1)..n {
                if !a.get(r, col).is_zero() {
                    let f = -(a.get(r, col) / &piv);
                    a.add_row(r, col, &f);
                }
            }
        }
        det.to_integer()
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

    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * factor;
            self.data[dst * self.cols + j] += v;
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * factor;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j).clone();
            self.set(r, j, v);
        }
    }
}

/// `u · m · v = s` with `u`, `v` unimodular and `s` diagonal, each diagonal
/// entry dividing the next.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal of `s` (length `min(rows, cols)`), zeros included.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i).clone())
            .collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = s.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < s.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithForm { u, s, v };
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = s.get(t, t).clone();
            let mut clean = true;
            for i in (t + 1)..rows {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = -s.get(i, t).div_floor(&pivot);
                s.add_row(i, t, &q);
                u.add_row(i, t, &q);
                clean &= s.get(i, t).is_zero();
            }
            for j in (t + 1)..cols {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = -s.get(t, j).div_floor(&pivot);
                s.add_col(j, t, &q);
                v.add_col(j, t, &q);
                clean &= s.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !s.get(i, j).is_multiple_of(&pivot)));
            if let Some(i) = bad_row {
                let one = BigInt::one();
                s.add_row(t, i, &one);
                u.add_row(t, i, &one);
                continue;
            }
            break;
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, s, v }
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction. The zero vector maps to zeros.
pub fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let l = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    primitive(ints)
}

/// Divides out the gcd of the entries.
pub fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

pub fn gcd_of(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Primitive integer vectors spanning the null space of `m`, each oriented so
/// that its first nonzero entry is positive.
pub fn kernel_basis(m: &IntSymMatrix) -> Vec<Vec<BigInt>> {
    integer_kernel(&m.to_rational())
}

pub fn integer_kernel(m: &RatMatrix) -> Vec<Vec<BigInt>> {
    m.nullspace()
        .iter()
        .map(|v| {
            let mut w = clear_denominators(v);
            if w.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                w.iter_mut().for_each(|x| *x = -x.clone());
            }
            w
        })
        .collect()
}

/// Outcome of an exact linear solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rational>),
    Inconsistent,
    /// Consistent with a `nullity`-dimensional solution space; `particular`
    /// has all free variables set to zero.
    Underdetermined {
        particular: Vec<Rational>,
        nullity: usize,
    },
}

pub fn solve_linear(a: &RatMatrix, b: &[Rational]) -> Solution {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let n = a.cols();
    let mut aug = RatMatrix::from_fn(a.rows(), n + 1, |i, j| {
        if j < n {
            a.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let pivots = aug.rref();
    if pivots.last() == Some(&n) {
        return Solution::Inconsistent;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.get(r, n).clone();
    }
    if pivots.len() == n {
        Solution::Unique(x)
    } else {
        Solution::Underdetermined {
            particular: x,
            nullity: n - pivots.len(),
        }
    }
}

/// Indices of a maximal linearly independent subset of the rows of `m`,
/// chosen greedily in index order.
pub fn independent_rows(m: &IntSymMatrix) -> Vec<usize> {
    let n = m.dim();
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    for i in 0..n {
        let mut v: Vec<Rational> = m.row(i).iter().map(|&x| rat(x)).collect();
        // reduce against the echelon rows collected so far
        for b in &basis {
            let lead = b.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
            if !v[lead].is_zero() {
                let f = &v[lead] / &b[lead];
                for (vk, bk) in v.iter_mut().zip(b) {
                    *vk -= &f * bk;
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            chosen.push(i);
            basis.push(v);
        }
    }
    chosen
}

/// Largest integer `r` with `r * r <= n` for `n >= 0`.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "square root of a negative number");
    n.sqrt()
}

/// Floor of the square root of a non-negative rational.
pub fn floor_sqrt(q: &Rational) -> BigInt {
    assert!(!q.is_negative());
    // floor(sqrt(p / d)) = floor(sqrt(p * d) / d)
    let p = q.numer();
    let d = q.denom();
    let mut r = isqrt(&(p * d)) / d;
    while Rational::from_integer(&r + 1) * Rational::from_integer(&r + 1) <= *q {
        r += 1;
    }
    while Rational::from_integer(r.clone()) * Rational::from_integer(r.clone()) > *q {
        r -= 1;
    }
    r
}
