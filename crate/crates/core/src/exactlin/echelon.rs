//! Fraction-free (Bareiss) elimination and the rank, kernel, solve and
//! determinant routines built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntegerMatrix, RationalMatrix};
use crate::error::{Error, Result};
use crate::par;

/// Row echelon form produced by Bareiss elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Upper echelon matrix; rows past `pivots.len()` are zero.
    pub matrix: IntegerMatrix,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
    /// `order[k]` is the input row that ended up in position `k`. The first
    /// `rank` entries index a maximal independent set of input rows.
    pub order: Vec<usize>,
    /// Parity of the row permutation, `+1` or `-1`.
    pub sign: i8,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Bareiss elimination with the smallest-index nonzero row as pivot.
/// Every intermediate entry is a minor of the input, so all divisions are exact.
pub fn bareiss(mut m: IntegerMatrix) -> Echelon {
    let rows = m.rows();
    let cols = m.cols();
    let mut order: Vec<usize> = (0..rows).collect();
    let mut pivots = Vec::new();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap_rows(p, r);
            order.swap(p, r);
            sign = -sign;
        }
        let pivot_row: Vec<BigInt> = m.row(r)[c..].to_vec();
        let pivot = pivot_row[0].clone();
        let prev_ref = &prev;
        par::for_each_row_mut(m.entries_mut(), cols, r + 1, |_, row| {
            let tail = &mut row[c..];
            let lead = std::mem::take(&mut tail[0]);
            for (x, p) in tail[1..].iter_mut().zip(&pivot_row[1..]) {
                let mut v = &pivot * &*x;
                if !lead.is_zero() && !p.is_zero() {
                    v -= &lead * p;
                }
                if !v.is_zero() && !prev_ref.is_one() {
                    v /= prev_ref;
                }
                *x = v;
            }
        });
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    Echelon {
        matrix: m,
        pivots,
        order,
        sign,
    }
}

/// Clears denominators row by row; row scaling preserves rank, kernel and row space.
pub fn integer_rows(m: &RationalMatrix) -> IntegerMatrix {
    let mut out = IntegerMatrix::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        let lcm = m
            .row(i)
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        for (dst, x) in out.row_mut(i).iter_mut().zip(m.row(i)) {
            *dst = x.numer() * (&lcm / x.denom());
        }
    }
    out
}

/// Exact rank.
pub fn rank(m: &RationalMatrix) -> usize {
    bareiss(integer_rows(m)).rank()
}

/// Exact rank of an integer matrix.
pub fn rank_integer(m: &IntegerMatrix) -> usize {
    bareiss(m.clone()).rank()
}

/// Reduced row echelon form of the nonzero rows of `e`, as rationals.
fn reduced_rows(e: &Echelon) -> Vec<Vec<BigRational>> {
    let r = e.rank();
    let mut rows: Vec<Vec<BigRational>> = (0..r)
        .map(|k| {
            e.matrix
                .row(k)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    for k in (0..r).rev() {
        let p = e.pivots[k];
        let inv = rows[k][p].recip();
        for x in rows[k].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let (above, rest) = rows.split_at_mut(k);
        let pivot_row = &rest[0];
        for row in above.iter_mut() {
            let f = row[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
    rows
}

/// Basis of the right null space, one vector per free column, normalised so
/// the free coordinate is 1 and the other free coordinates are 0. This is the
/// basis read off the reduced row echelon form, hence independent of row order.
pub fn kernel(m: &RationalMatrix) -> Vec<Vec<BigRational>> {
    kernel_of_echelon(&bareiss(integer_rows(m)), m.cols())
}

/// Same as [`kernel`] for an integer matrix.
pub fn kernel_integer(m: &IntegerMatrix) -> Vec<Vec<BigRational>> {
    kernel_of_echelon(&bareiss(m.clone()), m.cols())
}

fn kernel_of_echelon(e: &Echelon, cols: usize) -> Vec<Vec<BigRational>> {
    let reduced = reduced_rows(e);
    let mut is_pivot = vec![false; cols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (k, &p) in e.pivots.iter().enumerate() {
                v[p] = -reduced[k][f].clone();
            }
            v
        })
        .collect()
}

/// Outcome of [`solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// A solution; free variables are set to zero.
    Solved(Vec<BigRational>),
    /// `b` is outside the column space: `rank [M | b] = rank M + 1`.
    Inconsistent { rank: usize, augmented_rank: usize },
}

/// Solves `m x = b` exactly.
pub fn solve(m: &RationalMatrix, b: &[BigRational]) -> Result<Solution> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            m.rows()
        )));
    }
    let cols = m.cols();
    let augmented = RationalMatrix::from_fn(m.rows(), cols + 1, |i, j| {
        if j < cols {
            m[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let e = bareiss(integer_rows(&augmented));
    if e.pivots.last() == Some(&cols) {
        return Ok(Solution::Inconsistent {
            rank: e.rank() - 1,
            augmented_rank: e.rank(),
        });
    }
    let reduced = reduced_rows(&e);
    let mut x = vec![BigRational::zero(); cols];
    for (k, &p) in e.pivots.iter().enumerate() {
        x[p] = reduced[k][cols].clone();
    }
    Ok(Solution::Solved(x))
}

/// Determinant of a square integer matrix.
pub fn determinant(m: &IntegerMatrix) -> Result<BigInt> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch(format!(
            "determinant of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let e = bareiss(m.clone());
    if e.rank() < n {
        return Ok(BigInt::zero());
    }
    let last = e.matrix[(n - 1, n - 1)].clone();
    Ok(if e.sign < 0 { -last } else { last })
}

/// Indices of a maximal linearly independent set of rows (the first rows, in
/// input order, that are not spanned by earlier ones).
pub fn independent_rows(m: &IntegerMatrix) -> Vec<usize> {
    let mut rows = independent_columns(&m.transpose());
    rows.sort_unstable();
    rows
}

/// Indices of the pivot columns, i.e. the greedy left-to-right independent set.
pub fn independent_columns(m: &IntegerMatrix) -> Vec<usize> {
    bareiss(m.clone()).pivots
}

/// Inverse of a square nonsingular rational matrix by Gauss-Jordan elimination.
pub fn inverse(m: &RationalMatrix) -> Result<RationalMatrix> {
    let n = m.rows();
    if n != m.cols() {
        return Err(Error::DimensionMismatch(format!(
            "inverse of a {}x{} matrix",
            n,
            m.cols()
        )));
    }
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&i| !a[i][c].is_zero())
            .ok_or_else(|| Error::InvalidArgument("matrix is singular".into()))?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = a[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
    RationalMatrix::from_rows(a.into_iter().map(|r| r[n..].to_vec()).collect(), n)
}

/// Repeated exact solves of `M x = b` for a fixed integer matrix `M` of full
/// column rank. An invertible square block `M_J` is inverted once; every
/// candidate solution is then checked against all of `M`, so a right-hand
/// side outside the column space is always detected.
#[derive(Clone, Debug)]
pub struct FullColumnRankSolver {
    matrix: IntegerMatrix,
    rows: Vec<usize>,
    inverse: RationalMatrix,
}

impl FullColumnRankSolver {
    pub fn new(matrix: IntegerMatrix) -> Result<Self> {
        let rows = independent_rows(&matrix);
        if rows.len() != matrix.cols() {
            return Err(Error::InvalidArgument(format!(
                "matrix has rank {} < {} columns",
                rows.len(),
                matrix.cols()
            )));
        }
        let block = matrix.select_rows(&rows).to_rational();
        let inverse = inverse(&block)?;
        Ok(FullColumnRankSolver {
            matrix,
            rows,
            inverse,
        })
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    /// The unique `x` with `M x = b`, or `None` when `b` is not in the column space.
    pub fn solve(&self, b: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
        if b.len() != self.matrix.rows() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.matrix.rows()
            )));
        }
        let restricted: Vec<BigRational> = self.rows.iter().map(|&i| b[i].clone()).collect();
        let x = self.inverse.mul_vec(&restricted)?;
        // Check M x = b over the integers: scale by the common denominator.
        let denom = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let numer: Vec<BigInt> = x.iter().map(|v| v.numer() * (&denom / v.denom())).collect();
        let lhs = self.matrix.mul_vec(&numer)?;
        let ok = lhs.iter().zip(b).all(|(l, r)| {
            let scaled = r * BigRational::from_integer(denom.clone());
            scaled.is_integer() && *l == scaled.to_integer()
        });
        Ok(ok.then_some(x))
    }
}

/// `true` iff the integer is `±2^k` for some `k >= 0`.
pub fn is_power_of_two(x: &BigInt) -> bool {
    let a = x.abs();
    !a.is_zero() && a.clone() & (a - BigInt::one()) == BigInt::zero()
}
