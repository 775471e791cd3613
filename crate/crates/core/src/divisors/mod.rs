//! Divisor classes in the sl2 level one basis, their values on F-curves, and
//! the named classes `ψᵢ` and `δ_S`.

mod cache;
mod json;
mod pairing;

pub use cache::{read_pairing, write_pairing, PairingCache};
pub use json::{ClassJson, CoordJson, FunctionalJson, ValueJson};
pub use pairing::{pairing_entry, PairingMatrix};

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinat::{BasisVector, FCurve, LabelSet, Permutation};
use crate::error::{Error, Result};
use crate::exactlin::{saturated_row_basis, FullColumnRankSolver, IntegerMatrix};

/// Coordinates in the basis `{D²(a) : a ∈ A_n}`, indexed as `enum_basis(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    pub n: usize,
    pub coords: Vec<BigRational>,
}

impl DivisorClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// Values on every F-curve, indexed as `enum_fcurves(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFunctional {
    pub n: usize,
    pub values: Vec<BigRational>,
    /// Set when the values are known to come from a divisor class.
    pub realizable: bool,
}

impl CurveFunctional {
    pub fn from_integers(n: usize, values: impl IntoIterator<Item = i64>) -> Self {
        CurveFunctional {
            n,
            values: values.into_iter().map(|v| BigRational::from_integer(v.into())).collect(),
            realizable: false,
        }
    }
}

/// The pairing matrix together with a solver for `Pᵀ c = v`.
#[derive(Clone, Debug)]
pub struct Ambient {
    pairing: PairingMatrix,
    solver: FullColumnRankSolver,
    integral: OnceLock<IntegerMatrix>,
}

impl Ambient {
    pub fn new(pairing: PairingMatrix) -> Result<Self> {
        let solver = FullColumnRankSolver::new(pairing.matrix().transpose()).map_err(|e| {
            Error::Internal(format!("pairing matrix for n={} is rank deficient: {e}", pairing.n()))
        })?;
        Ok(Ambient {
            pairing,
            solver,
            integral: OnceLock::new(),
        })
    }

    pub fn build(n: usize) -> Result<Self> {
        Self::new(PairingMatrix::build(n)?)
    }

    pub fn n(&self) -> usize {
        self.pairing.n()
    }

    pub fn pairing(&self) -> &PairingMatrix {
        &self.pairing
    }

    pub fn basis(&self) -> &[BasisVector] {
        self.pairing.basis()
    }

    pub fn curves(&self) -> &[FCurve] {
        self.pairing.curves()
    }

    pub fn rank(&self) -> usize {
        self.basis().len()
    }

    /// A ℤ-basis (rows, as functionals) of the integral classes: rational
    /// classes whose values on all F-curves are integers.
    pub fn integral_basis(&self) -> Result<&IntegerMatrix> {
        if let Some(b) = self.integral.get() {
            return Ok(b);
        }
        let b = saturated_row_basis(self.pairing.matrix())?;
        Ok(self.integral.get_or_init(|| b))
    }

    fn check_class(&self, x: &DivisorClass) -> Result<()> {
        if x.n != self.n() {
            return Err(Error::AmbientMismatch {
                expected: self.n(),
                found: x.n,
            });
        }
        if x.coords.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates, basis has {}",
                x.coords.len(),
                self.rank()
            )));
        }
        Ok(())
    }

    pub fn zero_class(&self) -> DivisorClass {
        DivisorClass {
            n: self.n(),
            coords: vec![BigRational::zero(); self.rank()],
        }
    }

    /// The basis class `D²(a)`.
    pub fn basis_class(&self, bits: u32) -> Result<DivisorClass> {
        let k = self.pairing.basis_position(bits).ok_or_else(|| {
            Error::InvalidArgument(format!("bits {bits:#b} do not index a basis vector"))
        })?;
        let mut x = self.zero_class();
        x.coords[k] = BigRational::one();
        Ok(x)
    }

    /// `x ↦ (x·F)_F`, i.e. `Pᵀ x`.
    pub fn class_to_functional(&self, x: &DivisorClass) -> Result<CurveFunctional> {
        self.check_class(x)?;
        let m = self.pairing.matrix();
        let values = crate::par::map_range(m.cols(), |j| {
            let mut acc = BigRational::zero();
            for (i, c) in x.coords.iter().enumerate() {
                if !c.is_zero() && !m[(i, j)].is_zero() {
                    acc += c * BigRational::from_integer(m[(i, j)].clone());
                }
            }
            acc
        });
        Ok(CurveFunctional {
            n: self.n(),
            values,
            realizable: true,
        })
    }

    /// The unique class with the given values, or `None` if no class has them.
    pub fn expand(&self, v: &CurveFunctional) -> Result<Option<DivisorClass>> {
        if v.n != self.n() {
            return Err(Error::AmbientMismatch {
                expected: self.n(),
                found: v.n,
            });
        }
        Ok(self.solver.solve(&v.values)?.map(|coords| DivisorClass { n: self.n(), coords }))
    }

    /// `ψᵢ = 2^{4-n} Σ_a (-1)^{aᵢ+1} D²(a)`.
    pub fn psi_in_basis(&self, i: usize) -> Result<DivisorClass> {
        let n = self.n();
        if i == 0 || i > n {
            return Err(Error::InvalidArgument(format!("index {i} outside 1..={n}")));
        }
        let scale = BigRational::new(BigInt::one(), BigInt::one() << (n - 4));
        let coords = self
            .basis()
            .iter()
            .map(|a| if a.weight(i) == 1 { scale.clone() } else { -scale.clone() })
            .collect();
        Ok(DivisorClass { n, coords })
    }

    /// `ψᵢ` as a functional: 1 on curves with `{i}` a block.
    pub fn psi_functional(&self, i: usize) -> Result<CurveFunctional> {
        let values = crate::coinv::psi_functional(i, self.curves())?;
        Ok(CurveFunctional {
            n: self.n(),
            values: values.into_iter().map(|v| BigRational::from_integer(v.into())).collect(),
            realizable: true,
        })
    }

    /// `δ_S` as a functional, checked to come from a class before returning.
    pub fn boundary_delta(&self, s: LabelSet) -> Result<CurveFunctional> {
        let n = self.n();
        let full = LabelSet::full(n);
        if !s.is_subset(full) || s.len() < 2 || n - s.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "boundary set {s} needs at least two points on each side in 1..={n}"
            )));
        }
        let values = self
            .curves()
            .iter()
            .map(|c| BigRational::from_integer(boundary_degree(s, c).into()))
            .collect();
        let mut v = CurveFunctional {
            n,
            values,
            realizable: false,
        };
        if self.expand(&v)?.is_none() {
            return Err(Error::Internal(format!(
                "boundary functional for {s} is not realized by any class"
            )));
        }
        v.realizable = true;
        Ok(v)
    }

    /// Pullback along forgetting a new point inserted at position `i` of
    /// `M_{0,n+1}`: each `D²(a)` goes to `D²(a with 0 at i)`.
    pub fn pullback_class(&self, x: &DivisorClass, target: &Ambient, i: usize) -> Result<DivisorClass> {
        self.check_class(x)?;
        if target.n() != self.n() + 1 {
            return Err(Error::AmbientMismatch {
                expected: self.n() + 1,
                found: target.n(),
            });
        }
        if i == 0 || i > target.n() {
            return Err(Error::InvalidArgument(format!(
                "insert position {i} outside 1..={}",
                target.n()
            )));
        }
        let mut y = target.zero_class();
        for (a, c) in self.basis().iter().zip(&x.coords) {
            let bits = insert_zero_bit(a.bits(), i);
            let k = target.pairing.basis_position(bits).ok_or_else(|| {
                Error::Internal("inserted basis vector missing from target basis".into())
            })?;
            y.coords[k] = c.clone();
        }
        Ok(y)
    }

    /// `σ·x`: the coordinate of `D²(a)` moves to `D²(σ·a)`.
    pub fn relabel(&self, x: &DivisorClass, sigma: &Permutation) -> Result<DivisorClass> {
        self.check_class(x)?;
        if sigma.n() != self.n() {
            return Err(Error::AmbientMismatch {
                expected: self.n(),
                found: sigma.n(),
            });
        }
        let mut y = self.zero_class();
        for (a, c) in self.basis().iter().zip(&x.coords) {
            let image = sigma.apply_set(a.support()).0;
            let k = self
                .pairing
                .basis_position(image)
                .ok_or_else(|| Error::Internal("relabelled basis vector missing".into()))?;
            y.coords[k] = c.clone();
        }
        Ok(y)
    }
}

/// Degree of `δ_S` on `F(I,J,K,L)`: +1 if `S` or its complement is the union
/// of two blocks, -1 if it is one block, 0 otherwise.
pub fn boundary_degree(s: LabelSet, curve: &FCurve) -> i64 {
    let n = curve.n();
    let sc = s.complement(n);
    let blocks = curve.blocks();
    if blocks.iter().any(|&b| b == s || b == sc) {
        return -1;
    }
    for i in 0..4 {
        for j in i + 1..4 {
            let u = blocks[i].union(blocks[j]);
            if u == s || u == sc {
                return 1;
            }
        }
    }
    0
}

/// Inserts a zero at 1-based position `i` of a bit vector.
pub(crate) fn insert_zero_bit(bits: u32, i: usize) -> u32 {
    let low = bits & ((1u32 << (i - 1)) - 1);
    let high = (bits >> (i - 1)) << i;
    low | high
}
