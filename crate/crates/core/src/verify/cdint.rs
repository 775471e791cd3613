use std::collections::HashSet;

use num_bigint::BigInt;
use serde_json::json;

use super::context::Context;
use super::knudsen::check_n;
use super::linear::strings;
use super::report::{ReportBuilder, VerificationReport};
use crate::coinv::CoinvariantDivisor;
use crate::error::{Error, Result};
use crate::exactlin::echelon::is_power_of_two;
use crate::exactlin::{smith, HermiteLattice};
use crate::par;

/// Largest number of weight vectors part 1 enumerates for a single `m`.
pub const MAX_WEIGHT_VECTORS: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CdintPart {
    /// Integral classes are generated by coinvariant divisors of level one.
    Generation,
    /// The sl2 basis is a ℤ[1/2]-basis of the integral classes.
    HalfIntegralBasis,
}

impl CdintPart {
    pub fn from_number(part: u8) -> Result<Self> {
        match part {
            1 => Ok(CdintPart::Generation),
            2 => Ok(CdintPart::HalfIntegralBasis),
            _ => Err(Error::InvalidArgument(format!("part must be 1 or 2, got {part}"))),
        }
    }

    fn number(self) -> u8 {
        match self {
            CdintPart::Generation => 1,
            CdintPart::HalfIntegralBasis => 2,
        }
    }
}

pub fn verify_cdint(ctx: &Context, n: usize, part: CdintPart, m_max: u32) -> Result<VerificationReport> {
    check_n(n, 4)?;
    let mut b = ReportBuilder::new("cdint", n);
    b.param("part", part.number());
    let amb = ctx.ambient(n)?;
    let r = amb.rank();
    match part {
        CdintPart::HalfIntegralBasis => {
            let s = smith(amb.pairing().matrix())?;
            b.check("rank", r, s.rank())
                .check("divisors_powers_of_two", true, s.divisors.iter().all(is_power_of_two))
                .witness("divisors", strings(&s.divisors));
        }
        CdintPart::Generation => {
            if m_max < 2 {
                return Err(Error::InvalidArgument(format!("m_max must be at least 2, got {m_max}")));
            }
            b.param("m_max", m_max);
            let curves = amb.curves();
            let mut lattice = HermiteLattice::new(curves.len());
            let mut seen: HashSet<Vec<u32>> = HashSet::new();
            let mut steps = Vec::new();
            let mut minimal = None;
            for m in 2..=m_max {
                let count = u64::from(m).checked_pow(n as u32 - 1).filter(|&c| c <= MAX_WEIGHT_VECTORS);
                let Some(count) = count else {
                    return Err(Error::TooLarge(format!(
                        "{m}^{} weight vectors at n={n}, m={m}",
                        n - 1
                    )));
                };
                let functionals = par::map_range(count as usize, |code| {
                    let mut weights = Vec::with_capacity(n);
                    let mut c = code as u64;
                    let mut sum = 0u64;
                    for _ in 0..n - 1 {
                        let w = (c % u64::from(m)) as u32;
                        c /= u64::from(m);
                        sum += u64::from(w);
                        weights.push(w);
                    }
                    weights.push(((u64::from(m) - sum % u64::from(m)) % u64::from(m)) as u32);
                    let d = CoinvariantDivisor::new(m, weights).expect("weights are in range");
                    d.functional(curves).expect("same ambient")
                });
                let mut new = 0usize;
                for f in functionals {
                    if f.iter().all(|&v| v == 0) || !seen.insert(f.clone()) {
                        continue;
                    }
                    new += 1;
                    let v: Vec<BigInt> = f.into_iter().map(BigInt::from).collect();
                    lattice.insert(&v)?;
                }
                let saturated = lattice.rank() == r && lattice.is_saturated()?;
                steps.push(json!({"m": m, "new_functionals": new, "lattice_rank": lattice.rank(), "saturated": saturated}));
                if saturated {
                    minimal = Some(m);
                    break;
                }
            }
            b.check("saturated", true, minimal.is_some())
                .check("lattice_rank", r, lattice.rank())
                .witness("minimal_m_max", minimal)
                .witness("steps", steps);
        }
    }
    Ok(b.finish())
}
