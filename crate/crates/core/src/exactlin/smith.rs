//! Smith normal form with unimodular transforms kept as elementary-operation
//! logs. The dense transforms can be materialized on demand, but the mandatory
//! recomposition check replays the logs directly, which keeps wide matrices
//! (a few hundred rows against thousands of columns) cheap.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;
use crate::error::{Error, Result};
use crate::par;

/// One elementary unimodular operation on rows (or columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryOp {
    Swap(usize, usize),
    Negate(usize),
    /// `line[dst] += factor * line[src]`
    AddMul {
        dst: usize,
        src: usize,
        factor: BigInt,
    },
}

/// A unimodular matrix stored as the product of elementary operations, in the
/// order they were applied. Every factor has determinant ±1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Unimodular {
    dim: usize,
    ops: Vec<ElementaryOp>,
}

impl Unimodular {
    fn new(dim: usize) -> Self {
        Unimodular {
            dim,
            ops: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[ElementaryOp] {
        &self.ops
    }

    /// Determinant, read off the log: swaps and negations flip the sign,
    /// shears do not change it.
    pub fn determinant(&self) -> i8 {
        self.ops.iter().fold(1, |s, op| match op {
            ElementaryOp::Swap(a, b) if a != b => -s,
            ElementaryOp::Negate(_) => -s,
            _ => s,
        })
    }

    /// Dense `U` with `U·M` equal to the row operations applied to `M`.
    pub fn to_row_matrix(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::identity(self.dim);
        apply_row_ops(&mut m, &self.ops);
        m
    }

    /// Dense `V` with `M·V` equal to the column operations applied to `M`.
    pub fn to_column_matrix(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::identity(self.dim);
        apply_col_ops(&mut m, &self.ops);
        m
    }
}

/// `U·M·V = D` with `D` diagonal, `d₁ | d₂ | …` and every `dᵢ > 0`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub rows: usize,
    pub cols: usize,
    /// Row operations (the factor `U`).
    pub u: Unimodular,
    /// Column operations (the factor `V`).
    pub v: Unimodular,
    /// Nonzero diagonal of `D`, in order.
    pub divisors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// The diagonal matrix `D`.
    pub fn diagonal(&self) -> IntegerMatrix {
        let mut d = IntegerMatrix::zeros(self.rows, self.cols);
        for (k, x) in self.divisors.iter().enumerate() {
            d[(k, k)] = x.clone();
        }
        d
    }

    /// Applies the row operations to `m`, i.e. returns `U·m`.
    pub fn apply_u(&self, m: &IntegerMatrix) -> Result<IntegerMatrix> {
        if m.rows() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "U is {0}x{0}, matrix has {1} rows",
                self.rows,
                m.rows()
            )));
        }
        let mut out = m.clone();
        apply_row_ops(&mut out, &self.u.ops);
        Ok(out)
    }

    /// Replays the logs on `m` and compares with `D`.
    pub fn recomposes(&self, m: &IntegerMatrix) -> bool {
        if m.rows() != self.rows || m.cols() != self.cols {
            return false;
        }
        let mut work = m.clone();
        apply_row_ops(&mut work, &self.u.ops);
        apply_col_ops(&mut work, &self.v.ops);
        work == self.diagonal()
    }

    pub fn all_divisors_one(&self) -> bool {
        self.divisors.iter().all(One::is_one)
    }
}

fn apply_row_ops(m: &mut IntegerMatrix, ops: &[ElementaryOp]) {
    let cols = m.cols();
    for op in ops {
        match op {
            ElementaryOp::Swap(a, b) => m.swap_rows(*a, *b),
            ElementaryOp::Negate(a) => {
                for x in m.row_mut(*a) {
                    *x = -std::mem::take(x);
                }
            }
            ElementaryOp::AddMul { dst, src, factor } => {
                let src_row = m.row(*src).to_vec();
                for (x, s) in m.row_mut(*dst).iter_mut().zip(&src_row).take(cols) {
                    if !s.is_zero() {
                        *x += factor * s;
                    }
                }
            }
        }
    }
}

fn apply_col_ops(m: &mut IntegerMatrix, ops: &[ElementaryOp]) {
    let cols = m.cols();
    // Columns ops act on every row independently.
    par::for_each_row_mut(m.entries_mut(), cols, 0, |_, row| {
        for op in ops {
            match op {
                ElementaryOp::Swap(a, b) => row.swap(*a, *b),
                ElementaryOp::Negate(a) => row[*a] = -std::mem::take(&mut row[*a]),
                ElementaryOp::AddMul { dst, src, factor } => {
                    if !row[*src].is_zero() {
                        let add = factor * &row[*src];
                        row[*dst] += add;
                    }
                }
            }
        }
    });
}

/// Position of a nonzero entry of minimal absolute value in the block
/// `[t.., t..]`, ties broken by smallest row then smallest column.
fn min_pivot(m: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let x = &m[(i, j)];
            if x.is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => x.abs() < m[b].abs(),
            };
            if better {
                best = Some((i, j));
                if x.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

/// Smith normal form of `m`. The recomposition `U·M·V = D` is checked before
/// returning; a failure is reported as an internal error.
pub fn smith(m: &IntegerMatrix) -> Result<SmithDecomposition> {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = Unimodular::new(rows);
    let mut v = Unimodular::new(cols);
    let mut divisors = Vec::new();

    for t in 0..rows.min(cols) {
        let Some(_) = min_pivot(&a, t) else { break };
        loop {
            let (pi, pj) = min_pivot(&a, t).expect("block is nonzero");
            if pi != t {
                a.swap_rows(pi, t);
                u.ops.push(ElementaryOp::Swap(pi, t));
            }
            if pj != t {
                a.swap_cols(pj, t);
                v.ops.push(ElementaryOp::Swap(pj, t));
            }
            let pivot = a[(t, t)].clone();

            // Clear column t below the pivot.
            let pivot_row: Vec<BigInt> = a.row(t).to_vec();
            let mut factors = vec![BigInt::zero(); rows];
            for (i, f) in factors.iter_mut().enumerate().skip(t + 1) {
                let x = &a[(i, t)];
                if !x.is_zero() {
                    *f = -x.div_floor(&pivot);
                }
            }
            for (i, f) in factors.iter().enumerate().skip(t + 1) {
                if !f.is_zero() {
                    u.ops.push(ElementaryOp::AddMul {
                        dst: i,
                        src: t,
                        factor: f.clone(),
                    });
                }
            }
            let factors_ref = &factors;
            par::for_each_row_mut(a.entries_mut(), cols, t + 1, |i, row| {
                let f = &factors_ref[i];
                if f.is_zero() {
                    return;
                }
                for (x, p) in row[t..].iter_mut().zip(&pivot_row[t..]) {
                    if !p.is_zero() {
                        *x += f * p;
                    }
                }
            });

            // Clear row t to the right. Rows below have a zero in column t
            // only once the column is clean, so defer until then.
            let column_clean = (t + 1..rows).all(|i| a[(i, t)].is_zero());
            if !column_clean {
                continue;
            }
            for j in t + 1..cols {
                let x = &a[(t, j)];
                if x.is_zero() {
                    continue;
                }
                let f = -x.div_floor(&pivot);
                if f.is_zero() {
                    continue;
                }
                let add = &f * &pivot;
                a[(t, j)] += add;
                v.ops.push(ElementaryOp::AddMul {
                    dst: j,
                    src: t,
                    factor: f,
                });
            }
            let row_clean = (t + 1..cols).all(|j| a[(t, j)].is_zero());
            if !row_clean {
                continue;
            }

            // Enforce divisibility: pull a bad row up and repeat.
            if !pivot.abs().is_one() {
                let bad = (t + 1..rows)
                    .find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
                if let Some(i) = bad {
                    let src_row: Vec<BigInt> = a.row(i).to_vec();
                    for (x, s) in a.row_mut(t).iter_mut().zip(&src_row) {
                        *x += s;
                    }
                    u.ops.push(ElementaryOp::AddMul {
                        dst: t,
                        src: i,
                        factor: BigInt::one(),
                    });
                    continue;
                }
            }
            if pivot.is_negative() {
                a[(t, t)] = -pivot;
                u.ops.push(ElementaryOp::Negate(t));
                // Row t is zero beyond column t, so negating it touches only the pivot.
            }
            divisors.push(a[(t, t)].clone());
            break;
        }
    }

    let decomposition = SmithDecomposition {
        rows,
        cols,
        u,
        v,
        divisors,
    };
    let chain_ok = decomposition
        .divisors
        .windows(2)
        .all(|w| w[1].is_multiple_of(&w[0]));
    if !chain_ok || !decomposition.recomposes(m) {
        return Err(Error::Internal(
            "Smith normal form failed its recomposition check".into(),
        ));
    }
    Ok(decomposition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::echelon::determinant;

    fn im(rows: &[Vec<i64>], cols: usize) -> IntegerMatrix {
        IntegerMatrix::from_i64_rows(rows, cols).unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// gcd of all k×k minors, by brute force over row and column subsets.
    fn minor_gcd(m: &IntegerMatrix, k: usize) -> BigInt {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            (0u32..1 << n)
                .filter(|s| s.count_ones() as usize == k)
                .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
                .collect()
        }
        let mut g = BigInt::zero();
        for r in subsets(m.rows(), k) {
            for c in subsets(m.cols(), k) {
                let sub = m.select_rows(&r).select_columns(&c);
                g = g.gcd(&determinant(&sub).unwrap());
            }
        }
        g
    }

    #[test]
    fn diagonal_and_zero_examples() {
        let d = smith(&im(&[vec![2, 0], vec![0, 3]], 2)).unwrap();
        assert_eq!(d.divisors, ints(&[1, 6]));
        let z = smith(&IntegerMatrix::zeros(3, 4)).unwrap();
        assert!(z.divisors.is_empty());
        let e = smith(&IntegerMatrix::zeros(0, 0)).unwrap();
        assert!(e.divisors.is_empty());
    }

    #[test]
    fn transforms_are_unimodular_and_recompose() {
        let m = im(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
        let s = smith(&m).unwrap();
        assert_eq!(s.divisors, ints(&[2, 6, 12]));
        let u = s.u.to_row_matrix();
        let v = s.v.to_column_matrix();
        assert_eq!(determinant(&u).unwrap().abs(), BigInt::one());
        assert_eq!(determinant(&v).unwrap().abs(), BigInt::one());
        assert_eq!(determinant(&u).unwrap(), BigInt::from(s.u.determinant()));
        assert_eq!(u.mul(&m).unwrap().mul(&v).unwrap(), s.diagonal());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn divisors_match_minor_gcds(r in 1usize..5, c in 1usize..5, seed in proptest::collection::vec(-6i64..7, 16)) {
                let rows: Vec<Vec<i64>> = (0..r).map(|i| seed[i * c..(i + 1) * c].to_vec()).collect();
                let m = im(&rows, c);
                let s = smith(&m).unwrap();
                prop_assert!(s.recomposes(&m));
                let u = s.u.to_row_matrix();
                let v = s.v.to_column_matrix();
                prop_assert_eq!(u.mul(&m).unwrap().mul(&v).unwrap(), s.diagonal());
                // d1 d2 ... dk equals the gcd of the k×k minors.
                let mut prod = BigInt::one();
                for k in 1..=r.min(c) {
                    let g = minor_gcd(&m, k);
                    if k <= s.rank() {
                        prod *= &s.divisors[k - 1];
                        prop_assert_eq!(&prod, &g);
                    } else {
                        prop_assert!(g.is_zero());
                    }
                }
            }
        }
    }
}
