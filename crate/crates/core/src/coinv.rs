//! Type A, level one coinvariant divisors `D^m(a₁..aₙ)` and their
//! intersection numbers with F-curves.

use std::fmt;
use std::str::FromStr;

use crate::combinat::{check_ambient, FCurve, Permutation};
use crate::error::{Error, Result};

/// `D^m(a₁..aₙ)` for `sl_m` at level one. Weights live in `ℤ/m`, the fusion
/// group at this level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoinvariantDivisor {
    m: u32,
    weights: Vec<u32>,
    trivial: bool,
}

impl CoinvariantDivisor {
    pub fn new(m: u32, weights: Vec<u32>) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!("rank m={m} must be at least 2")));
        }
        check_ambient(weights.len())?;
        if let Some(a) = weights.iter().find(|&&a| a >= m) {
            return Err(Error::InvalidArgument(format!("weight {a} outside [0, {m})")));
        }
        let trivial = weights.iter().map(|&a| a as u64).sum::<u64>() % m as u64 != 0;
        Ok(CoinvariantDivisor { m, weights, trivial })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// `true` when the weight sum is nonzero mod `m`, i.e. the bundle has rank 0.
    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    /// Rank of the bundle of coinvariants in genus zero: 1 or 0.
    pub fn rank0(&self) -> u32 {
        u32::from(!self.trivial)
    }

    /// Degree on the F-curve `F`: the degree on `M_{0,4}` of the four block
    /// sums, each reduced mod `m`.
    pub fn intersect(&self, curve: &FCurve) -> Result<u32> {
        if curve.n() != self.n() {
            return Err(Error::AmbientMismatch {
                expected: self.n(),
                found: curve.n(),
            });
        }
        if self.trivial {
            return Ok(0);
        }
        let sums = curve.blocks().map(|b| {
            let s: u64 = b.iter().map(|i| self.weights[i - 1] as u64).sum();
            (s % self.m as u64) as u32
        });
        deg_m04(self.m, sums)
    }

    /// Values on a list of curves, in order.
    pub fn functional(&self, curves: &[FCurve]) -> Result<Vec<u32>> {
        curves.iter().map(|c| self.intersect(c)).collect()
    }

    /// Pullback along the map forgetting a new point inserted at position
    /// `i` (1-based in the target `M_{0,n+1}`): weight 0 is inserted there.
    pub fn pullback_projection(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.n() + 1 {
            return Err(Error::InvalidArgument(format!(
                "insert position {i} outside 1..={}",
                self.n() + 1
            )));
        }
        let mut weights = self.weights.clone();
        weights.insert(i - 1, 0);
        CoinvariantDivisor::new(self.m, weights)
    }

    /// Inverse of [`Self::pullback_projection`]: removes a zero weight.
    pub fn drop_zero(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.n() || self.weights[i - 1] != 0 {
            return Err(Error::InvalidArgument(format!(
                "position {i} does not carry a zero weight"
            )));
        }
        let mut weights = self.weights.clone();
        weights.remove(i - 1);
        CoinvariantDivisor::new(self.m, weights)
    }

    /// Pullback along the section gluing point `n` onto point `i`: the two
    /// weights fuse to `aᵢ + aₙ mod m`.
    pub fn pullback_section(&self, i: usize) -> Result<Self> {
        let n = self.n();
        if i == 0 || i >= n {
            return Err(Error::InvalidArgument(format!(
                "section index {i} outside 1..={}",
                n - 1
            )));
        }
        let mut weights = self.weights[..n - 1].to_vec();
        weights[i - 1] = (weights[i - 1] + self.weights[n - 1]) % self.m;
        CoinvariantDivisor::new(self.m, weights)
    }

    /// `σ·D`: the weight at `σ(i)` is `aᵢ`.
    pub fn relabel(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.n() != self.n() {
            return Err(Error::AmbientMismatch {
                expected: self.n(),
                found: sigma.n(),
            });
        }
        let mut weights = vec![0; self.n()];
        for (i, &a) in self.weights.iter().enumerate() {
            weights[sigma.apply(i + 1) - 1] = a;
        }
        CoinvariantDivisor::new(self.m, weights)
    }
}

impl fmt::Display for CoinvariantDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D[{}]:", self.m)?;
        for (k, a) in self.weights.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for CoinvariantDivisor {
    type Err = Error;

    /// Parses `D[m]:a1,...,an`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected D[m]:a1,...,an, found {s:?}"));
        let rest = s.trim().strip_prefix("D[").ok_or_else(bad)?;
        let (m, weights) = rest.split_once("]:").ok_or_else(bad)?;
        let m: u32 = m.parse().map_err(|_| bad())?;
        let weights = weights
            .split(',')
            .map(|w| w.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        CoinvariantDivisor::new(m, weights)
    }
}

/// Degree of `D^m(a₁..a₄)` on `M_{0,4}`.
pub fn deg_m04(m: u32, weights: [u32; 4]) -> Result<u32> {
    if let Some(a) = weights.iter().find(|&&a| a >= m) {
        return Err(Error::InvalidArgument(format!("weight {a} outside [0, {m})")));
    }
    let mut a = weights;
    a.sort_unstable();
    let [a1, a2, a3, a4] = a;
    if a1 + a2 + a3 + a4 != 2 * m {
        return Ok(0);
    }
    Ok(if a2 + a3 >= a1 + a4 { a1 } else { m - a4 })
}

/// `1` if `{i}` is a block of `curve`, else `0`: the degree of `ψᵢ` on it.
pub fn psi_on_curve(i: usize, curve: &FCurve) -> Result<u32> {
    if i == 0 || i > curve.n() {
        return Err(Error::InvalidArgument(format!(
            "index {i} outside 1..={}",
            curve.n()
        )));
    }
    Ok(u32::from(curve.is_singleton(i)))
}

/// `ψᵢ` evaluated on every curve of `curves`.
pub fn psi_functional(i: usize, curves: &[FCurve]) -> Result<Vec<u32>> {
    curves.iter().map(|c| psi_on_curve(i, c)).collect()
}
