//! Exact integer linear algebra: Smith normal form, sublattice indices,
//! primitive vectors and the vertical index of a point set.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{gcd_all, sub, Scalar};

/// A dense rectangular integer matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix<T> {
    rows: Vec<Vec<T>>,
    cols: usize,
}

impl<T: Scalar> IntMatrix<T> {
    /// Builds a matrix from its rows. All rows must share one length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self { rows, cols })
    }

    /// Convenience constructor for literals; panics on ragged input.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| T::from_small(v)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![vec![T::zero(); cols]; rows],
            cols,
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.rows[i][i] = T::one();
        }
        m
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.cols).map(|j| self.column(j)).collect();
        Self {
            rows,
            cols: self.rows.len(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.row_count() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.row_count(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.cols)
                    .map(|j| {
                        r.iter()
                            .zip(&other.rows)
                            .fold(T::zero(), |acc, (a, orow)| acc + a.clone() * orow[j].clone())
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            rows,
            cols: other.cols,
        })
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[T]) -> Vec<T> {
        debug_assert_eq!(v.len(), self.rows.len());
        (0..self.cols)
            .map(|j| {
                v.iter()
                    .zip(&self.rows)
                    .fold(T::zero(), |acc, (a, r)| acc + a.clone() * r[j].clone())
            })
            .collect()
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        debug_assert_eq!(v.len(), self.cols);
        self.rows
            .iter()
            .map(|r| crate::scalar::dot(r, v))
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<T> {
        if self.rows.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                found: self.cols,
            });
        }
        Ok(bareiss_determinant(self.rows.clone()))
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        rank_of(&self.rows)
    }
}

impl<T: fmt::Display> fmt::Display for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub(crate) fn bareiss_determinant<T: Scalar>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    if n == 0 {
        return T::one();
    }
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Rank of a list of vectors (fraction-free row echelon form).
pub fn rank_of<T: Scalar>(vectors: &[Vec<T>]) -> usize {
    let mut a: Vec<Vec<T>> = vectors.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            if a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            let g = a[rank][col].clone();
            for j in col..cols {
                let v = a[i][j].clone() * g.clone() - a[rank][j].clone() * f.clone();
                a[i][j] = v;
            }
            let content = gcd_all(&a[i]);
            if !content.is_zero() && !content.is_one() {
                for x in a[i].iter_mut() {
                    *x = x.clone() / content.clone();
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of the affine hull of a nonempty point set.
pub fn affine_dimension<T: Scalar>(points: &[Vec<T>]) -> usize {
    match points.split_first() {
        None => 0,
        Some((base, rest)) => {
            let diffs: Vec<Vec<T>> = rest.iter().map(|p| sub(p, base)).collect();
            rank_of(&diffs)
        }
    }
}

/// Result of [`smith_normal_form`]: `u * m * v == d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<T> {
    pub u: IntMatrix<T>,
    pub d: IntMatrix<T>,
    pub v: IntMatrix<T>,
    /// Inverse of `v`, maintained alongside it.
    pub v_inv: IntMatrix<T>,
}

impl<T: Scalar> SmithForm<T> {
    /// The diagonal entries `d_1 | d_2 | ...` (including trailing zeros).
    pub fn divisors(&self) -> Vec<T> {
        let k = self.d.row_count().min(self.d.col_count());
        (0..k).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn nonzero_divisors(&self) -> Vec<T> {
        self.divisors().into_iter().filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.nonzero_divisors().len()
    }
}

/// Smith normal form with unimodular transforms.
///
/// Works on any rectangular integer matrix; an empty matrix yields empty
/// transforms.
pub fn smith_normal_form<T: Scalar>(m: &IntMatrix<T>) -> SmithForm<T> {
    let rows = m.row_count();
    let cols = m.col_count();
    let mut a = m.rows.clone();
    let mut u = IntMatrix::identity(rows).rows;
    let mut v = IntMatrix::identity(cols).rows;
    let mut vi = IntMatrix::identity(cols).rows;

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, u, v, vi, cols);
            };
            a.swap(t, pi);
            u.swap(t, pi);
            if pj != t {
                for row in a.iter_mut().chain(v.iter_mut()) {
                    row.swap(t, pj);
                }
                vi.swap(t, pj);
            }

            let pivot = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&pivot);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&pivot);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                // inverse of the column operation acts on rows of v^-1
                let neg = -q;
                row_axpy(&mut vi, t, j, &neg);
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                continue;
            }

            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => {
                    let one = -T::one();
                    row_axpy(&mut a, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    finish(a, u, v, vi, cols)
}

fn finish<T: Scalar>(
    a: Vec<Vec<T>>,
    u: Vec<Vec<T>>,
    v: Vec<Vec<T>>,
    vi: Vec<Vec<T>>,
    cols: usize,
) -> SmithForm<T> {
    let rows = a.len();
    SmithForm {
        u: IntMatrix { rows: u, cols: rows },
        d: IntMatrix { rows: a, cols },
        v: IntMatrix { rows: v, cols },
        v_inv: IntMatrix { rows: vi, cols },
    }
}

/// `row[target] -= q * row[source]`
fn row_axpy<T: Scalar>(m: &mut [Vec<T>], target: usize, source: usize, q: &T) {
    let src = m[source].clone();
    for (x, s) in m[target].iter_mut().zip(src) {
        *x = x.clone() - q.clone() * s;
    }
}

/// `col[target] -= q * col[source]`
fn col_axpy<T: Scalar>(m: &mut [Vec<T>], target: usize, source: usize, q: &T) {
    for row in m.iter_mut() {
        let s = row[source].clone();
        row[target] = row[target].clone() - q.clone() * s;
    }
}

/// A natural number extended by a distinguished infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedNat<T> {
    Finite(T),
    Infinity,
}

impl<T: Scalar> ExtendedNat<T> {
    pub fn finite(&self) -> Option<&T> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Self::Finite(v) if v.is_one())
    }
}

impl<T: fmt::Display> fmt::Display for ExtendedNat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(v) => write!(f, "{v}"),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

/// Index of the sublattice generated by `generators` in `Z^ambient_rank`;
/// infinite when the generators do not span a full-rank lattice.
pub fn lattice_index<T: Scalar>(generators: &[Vec<T>], ambient_rank: usize) -> Result<ExtendedNat<T>> {
    if let Some(bad) = generators.iter().find(|g| g.len() != ambient_rank) {
        return Err(Error::DimensionMismatch {
            expected: ambient_rank,
            found: bad.len(),
        });
    }
    if ambient_rank == 0 {
        return Ok(ExtendedNat::Finite(T::one()));
    }
    if generators.is_empty() {
        return Ok(ExtendedNat::Infinity);
    }
    let snf = smith_normal_form(&IntMatrix::from_rows(generators.to_vec())?);
    let divisors = snf.nonzero_divisors();
    if divisors.len() < ambient_rank {
        return Ok(ExtendedNat::Infinity);
    }
    Ok(ExtendedNat::Finite(
        divisors.into_iter().fold(T::one(), |acc, d| acc * d),
    ))
}

/// Differences `p - p_0` truncated to the first `n` (vertical) coordinates.
pub fn vertical_differences<T: Scalar>(points: &[Vec<T>], n: usize) -> Vec<Vec<T>> {
    let Some(base) = points.first() else {
        return Vec::new();
    };
    points[1..]
        .iter()
        .map(|p| sub(&p[..n], &base[..n]))
        .filter(|d| !crate::scalar::is_zero_vector(d))
        .collect()
}

/// Vertical index: the index in `Z^n` of the lattice generated by the
/// differences of `points` after forgetting the last two coordinates.
pub fn ind_v<T: Scalar>(points: &[Vec<T>], n: usize) -> Result<ExtendedNat<T>> {
    if let Some(bad) = points.iter().find(|p| p.len() != n + 2) {
        return Err(Error::DimensionMismatch {
            expected: n + 2,
            found: bad.len(),
        });
    }
    lattice_index(&vertical_differences(points, n), n)
}

/// Divides a nonzero vector by the gcd of its entries.
pub fn primitive_part<T: Scalar>(v: &[T]) -> Result<Vec<T>> {
    let g = gcd_all(v);
    if g.is_zero() {
        return Err(Error::ZeroDirection);
    }
    Ok(v.iter().map(|x| x.clone() / g.clone()).collect())
}

/// A finite support set in `Z^(n+2)`; the last two coordinates are the
/// fiber coordinates `(y, t)` kept by the projection.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportSet<T> {
    points: Vec<Vec<T>>,
    n: usize,
}

impl<T: Scalar> SupportSet<T> {
    /// Validates shape and removes repeated points (first occurrence wins).
    pub fn new(points: Vec<Vec<T>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidInput("empty support set".into()));
        };
        let len = first.len();
        if len < 3 {
            return Err(Error::InvalidInput(format!(
                "points must have at least 3 coordinates, found {len}"
            )));
        }
        if let Some(bad) = points.iter().find(|p| p.len() != len) {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: bad.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        let points: Vec<Vec<T>> = points.into_iter().filter(|p| seen.insert(p.clone())).collect();
        Ok(Self { points, n: len - 2 })
    }

    pub fn from_i64(points: &[&[i64]]) -> Result<Self> {
        Self::new(
            points
                .iter()
                .map(|p| p.iter().map(|&v| T::from_small(v)).collect())
                .collect(),
        )
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    /// Number of vertical coordinates.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 2
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[T]) -> bool {
        self.points.iter().any(|q| q.as_slice() == p)
    }

    pub fn translate(&self, shift: &[T]) -> Self {
        Self {
            points: self
                .points
                .iter()
                .map(|p| crate::scalar::add(p, shift))
                .collect(),
            n: self.n,
        }
    }

    /// Applies `x -> M x` to every point.
    pub fn transform(&self, m: &IntMatrix<T>) -> Result<Self> {
        if m.row_count() != self.dim() || m.col_count() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m.col_count(),
            });
        }
        Self::new(self.points.iter().map(|p| m.apply(p)).collect())
    }

    pub fn ind_v(&self) -> ExtendedNat<T> {
        ind_v(&self.points, self.n).expect("support set points have length n + 2")
    }
}

/// Multiplies the two fiber coordinates of every point by `factor`.
pub fn fiber_scale<T: Scalar>(a: &SupportSet<T>, factor: &T) -> Result<SupportSet<T>> {
    if !factor.is_positive() {
        return Err(Error::InvalidInput(format!("scale factor must be >= 1, got {factor}")));
    }
    let n = a.n();
    let points = a
        .points()
        .iter()
        .map(|p| {
            p.iter()
                .enumerate()
                .map(|(i, x)| if i >= n { x.clone() * factor.clone() } else { x.clone() })
                .collect()
        })
        .collect();
    SupportSet::new(points)
}
