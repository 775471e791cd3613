use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinat::{check_ambient, enum_basis, enum_fcurves, BasisVector, FCurve};
use crate::error::{Error, Result};
use crate::exactlin::IntegerMatrix;
use crate::par;

/// Degrees `D²(a)·F` for `a ∈ A_n` (rows) and all F-curves `F` (columns).
#[derive(Clone, Debug)]
pub struct PairingMatrix {
    n: usize,
    basis: Vec<BasisVector>,
    curves: Vec<FCurve>,
    matrix: IntegerMatrix,
    basis_index: HashMap<u32, usize>,
    curve_index: HashMap<FCurve, usize>,
}

/// At level one for `sl₂` the degree is 1 exactly when every block carries
/// an odd number of ones.
#[inline]
pub fn pairing_entry(a: &BasisVector, curve: &FCurve) -> bool {
    curve
        .blocks()
        .iter()
        .all(|b| (a.bits() & b.0).count_ones() % 2 == 1)
}

impl PairingMatrix {
    /// Builds the matrix, one column per curve in parallel.
    pub fn build(n: usize) -> Result<Self> {
        Self::build_with(n, |curves, basis| {
            par::map(curves, |c| basis.iter().map(|a| pairing_entry(a, c)).collect())
        })
    }

    /// Single-threaded build; produces the identical matrix.
    pub fn build_sequential(n: usize) -> Result<Self> {
        Self::build_with(n, |curves, basis| {
            par::map_sequential(curves, |c| basis.iter().map(|a| pairing_entry(a, c)).collect())
        })
    }

    /// As [`Self::build`], refusing ambients above `max_n`.
    pub fn build_bounded(n: usize, max_n: usize) -> Result<Self> {
        if n > max_n {
            return Err(Error::ResourceBound { n, max: max_n });
        }
        Self::build(n)
    }

    fn build_with(
        n: usize,
        columns: impl FnOnce(&[FCurve], &[BasisVector]) -> Vec<Vec<bool>>,
    ) -> Result<Self> {
        check_ambient(n)?;
        let basis = enum_basis(n)?;
        let curves = enum_fcurves(n)?;
        let cols = columns(&curves, &basis);
        let matrix = IntegerMatrix::from_fn(basis.len(), curves.len(), |i, j| {
            if cols[j][i] {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        });
        Ok(Self::from_parts(n, basis, curves, matrix))
    }

    pub(crate) fn from_parts(
        n: usize,
        basis: Vec<BasisVector>,
        curves: Vec<FCurve>,
        matrix: IntegerMatrix,
    ) -> Self {
        let basis_index = basis.iter().enumerate().map(|(i, a)| (a.bits(), i)).collect();
        let curve_index = curves.iter().enumerate().map(|(j, c)| (*c, j)).collect();
        PairingMatrix {
            n,
            basis,
            curves,
            matrix,
            basis_index,
            curve_index,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn curves(&self) -> &[FCurve] {
        &self.curves
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn basis_position(&self, bits: u32) -> Option<usize> {
        self.basis_index.get(&bits).copied()
    }

    pub fn curve_position(&self, curve: &FCurve) -> Option<usize> {
        self.curve_index.get(curve).copied()
    }

    /// Column indices of the given curves.
    pub fn curve_positions(&self, curves: &[FCurve]) -> Result<Vec<usize>> {
        curves
            .iter()
            .map(|c| {
                self.curve_position(c).ok_or_else(|| Error::AmbientMismatch {
                    expected: self.n,
                    found: c.n(),
                })
            })
            .collect()
    }
}

impl PartialEq for PairingMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.basis == other.basis
            && self.curves == other.curves
            && self.matrix == other.matrix
    }
}

impl Eq for PairingMatrix {}
