//! Integer row lattices: incremental Hermite normal form and saturation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;
use super::smith::smith;
use crate::error::{Error, Result};

/// A sublattice of `ℤ^dim`, kept as a reduced row Hermite basis: pivots
/// strictly increase, pivot entries are positive, and entries above a pivot
/// lie in `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct HermiteLattice {
    dim: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl HermiteLattice {
    pub fn new(dim: usize) -> Self {
        HermiteLattice {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> IntegerMatrix {
        IntegerMatrix::from_rows(self.rows.clone(), self.dim).expect("rows have lattice dimension")
    }

    /// Adds `v` to the generating set. Returns `true` if the lattice grew.
    pub fn insert(&mut self, v: &[BigInt]) -> Result<bool> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in a lattice of dimension {}",
                v.len(),
                self.dim
            )));
        }
        let mut v = v.to_vec();
        let mut changed = false;
        let mut k = 0;
        while let Some(c) = v.iter().position(|x| !x.is_zero()) {
            while k < self.pivots.len() && self.pivots[k] < c {
                k += 1;
            }
            if k == self.pivots.len() || self.pivots[k] != c {
                if v[c].is_negative() {
                    v.iter_mut().for_each(|x| *x = -std::mem::take(x));
                }
                self.rows.insert(k, v);
                self.pivots.insert(k, c);
                changed = true;
                break;
            }
            let b = &self.rows[k];
            if v[c].is_multiple_of(&b[c]) {
                let q = &v[c] / &b[c];
                for (x, y) in v.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x -= &q * y;
                    }
                }
                continue;
            }
            // Replace the basis row by the gcd combination and keep reducing
            // the cofactor combination, whose entry at c vanishes.
            let e = b[c].extended_gcd(&v[c]);
            let (bc, vc) = (&b[c] / &e.gcd, &v[c] / &e.gcd);
            let new_b: Vec<BigInt> = b.iter().zip(&v).map(|(y, x)| &e.x * y + &e.y * x).collect();
            let new_v: Vec<BigInt> = b.iter().zip(&v).map(|(y, x)| &bc * x - &vc * y).collect();
            self.rows[k] = new_b;
            v = new_v;
            changed = true;
        }
        if changed {
            self.reduce();
        }
        Ok(changed)
    }

    fn reduce(&mut self) {
        for k in 0..self.rows.len() {
            let c = self.pivots[k];
            if self.rows[k][c].is_negative() {
                self.rows[k].iter_mut().for_each(|x| *x = -std::mem::take(x));
            }
            let (above, rest) = self.rows.split_at_mut(k);
            let pivot_row = &rest[0];
            for row in above.iter_mut() {
                let q = row[c].div_floor(&pivot_row[c]);
                if q.is_zero() {
                    continue;
                }
                for (x, y) in row.iter_mut().zip(pivot_row) {
                    if !y.is_zero() {
                        *x -= &q * y;
                    }
                }
            }
        }
    }

    /// `true` iff the lattice equals its saturation `(ℚ·L) ∩ ℤ^dim`.
    pub fn is_saturated(&self) -> Result<bool> {
        Ok(smith(&self.basis())?.all_divisors_one())
    }
}

/// A basis (as rows) of the saturation `rowspan_ℚ(m) ∩ ℤ^cols`: with
/// `U·m·V = D`, the rows of `U·m` are `dᵢ` times a unimodular basis.
pub fn saturated_row_basis(m: &IntegerMatrix) -> Result<IntegerMatrix> {
    let s = smith(m)?;
    let um = s.apply_u(m)?;
    let rows: Vec<Vec<BigInt>> = s
        .divisors
        .iter()
        .enumerate()
        .map(|(i, d)| {
            um.row(i)
                .iter()
                .map(|x| {
                    debug_assert!(x.is_multiple_of(d));
                    x / d
                })
                .collect()
        })
        .collect();
    let basis = IntegerMatrix::from_rows(rows, m.cols())?;
    for i in 0..basis.rows() {
        if basis.row(i).iter().all(Zero::is_zero) {
            return Err(Error::Internal("saturated basis has a zero row".into()));
        }
    }
    Ok(basis)
}

/// `true` iff every nonzero elementary divisor of `m` is 1.
pub fn unimodular_divisors(m: &IntegerMatrix) -> Result<bool> {
    Ok(smith(m)?.divisors.iter().all(One::is_one))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::echelon::rank_integer;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hermite_insertion_combines_generators() {
        let mut l = HermiteLattice::new(2);
        assert!(l.insert(&ints(&[4, 0])).unwrap());
        assert!(l.insert(&ints(&[6, 0])).unwrap());
        assert_eq!(l.basis().to_rows(), vec![ints(&[2, 0])]);
        assert!(!l.insert(&ints(&[-8, 0])).unwrap());
        assert!(!l.is_saturated().unwrap());
        l.insert(&ints(&[3, 1])).unwrap();
        assert_eq!(l.rank(), 2);
        assert!(!l.is_saturated().unwrap());
        l.insert(&ints(&[0, 1])).unwrap();
        assert!(l.is_saturated().unwrap());
    }

    #[test]
    fn saturation_divides_out_divisors() {
        let m = IntegerMatrix::from_i64_rows(&[vec![2, 2, 0], vec![0, 3, 3]], 3).unwrap();
        let b = saturated_row_basis(&m).unwrap();
        assert_eq!(b.rows(), 2);
        assert!(unimodular_divisors(&b).unwrap());
        let stacked = IntegerMatrix::from_rows([m.to_rows(), b.to_rows()].concat(), 3).unwrap();
        assert_eq!(rank_integer(&stacked), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn hermite_lattice_has_same_rank_and_index(vs in proptest::collection::vec(proptest::collection::vec(-5i64..6, 4), 1..6)) {
                let mut l = HermiteLattice::new(4);
                for v in &vs {
                    l.insert(&ints(v)).unwrap();
                }
                let m = IntegerMatrix::from_i64_rows(&vs, 4).unwrap();
                let basis = l.basis();
                prop_assert_eq!(l.rank(), rank_integer(&m));
                // Same lattice: identical elementary divisors.
                prop_assert_eq!(smith(&m).unwrap().divisors, smith(&basis).unwrap().divisors);
                for w in l.pivots.windows(2) {
                    prop_assert!(w[0] < w[1]);
                }
            }
        }
    }
}
