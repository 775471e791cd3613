use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::combinat::FCurve;
use crate::divisors::{Ambient, DivisorClass};
use crate::error::Result;
use crate::exactlin::{kernel_integer, rank, IntegerMatrix, RationalMatrix};

/// The constraints `x ↦ x·F` for `F` in `curves`, as rows over the basis,
/// with repeated rows dropped.
pub(crate) fn constraints(amb: &Ambient, curves: &[FCurve]) -> Result<IntegerMatrix> {
    let p = amb.pairing().matrix();
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for j in amb.pairing().curve_positions(curves)? {
        let col: Vec<BigInt> = p.column(j);
        if seen.insert(col.clone()) {
            rows.push(col);
        }
    }
    IntegerMatrix::from_rows(rows, amb.rank())
}

/// Classes meeting every curve of `curves` in degree zero, as a basis.
pub fn family_kernel(amb: &Ambient, curves: &[FCurve]) -> Result<Vec<DivisorClass>> {
    let q = constraints(amb, curves)?;
    Ok(kernel_integer(&q)
        .into_iter()
        .map(|coords| DivisorClass { n: amb.n(), coords })
        .collect())
}

pub(crate) fn annihilates(q: &IntegerMatrix, v: &[BigRational]) -> bool {
    (0..q.rows()).all(|i| {
        q.row(i)
            .iter()
            .zip(v)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(BigRational::zero(), |acc, (a, b)| acc + BigRational::from_integer(a.clone()) * b)
            .is_zero()
    })
}

pub(crate) fn rank_of(vectors: &[DivisorClass], dim: usize) -> usize {
    let rows: Vec<Vec<BigRational>> = vectors.iter().map(|x| x.coords.clone()).collect();
    rank(&RationalMatrix::from_rows(rows, dim).expect("coordinate vectors share the basis"))
}

pub(crate) fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}
