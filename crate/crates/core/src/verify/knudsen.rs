use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::context::Context;
use super::report::{ReportBuilder, VerificationReport};
use crate::coinv::CoinvariantDivisor;
use crate::combinat::{balanced_weights, curve_family, CurveFamily, FCurve, LabelSet, WeightAssignment};
use crate::divisors::CurveFunctional;
use crate::error::{Error, Result};

/// The divisor dual to one Knudsen curve `F({n-1},{n},I,J)`.
#[derive(Clone, Debug, Serialize)]
pub struct KnudsenDualEntry {
    pub curve: String,
    /// The block `I`, the one containing 1.
    pub block: String,
    pub weights: WeightAssignment,
    pub m: u32,
    pub divisor: String,
    /// Smallest degree over all F-curves.
    pub min_degree: i64,
    /// The functional of the divisor lies in the span of the pairing matrix.
    pub realizable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KnudsenDualCertificate {
    pub n: usize,
    pub entries: Vec<KnudsenDualEntry>,
    /// `matrix[k][l]` is the degree of divisor `k` on Knudsen curve `l`.
    pub matrix: Vec<Vec<u32>>,
    pub identity: bool,
    pub nonnegative: bool,
}

impl KnudsenDualCertificate {
    pub fn passed(&self) -> bool {
        self.identity && self.nonnegative && self.entries.iter().all(|e| e.realizable)
    }
}

pub(crate) fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidArgument(format!("need n >= {min}, got n={n}")));
    }
    Ok(())
}

/// For each Knudsen curve `C = F({n-1},{n},I,J)` with `1 ∈ I`: weights on
/// `[n-2]` balancing only `{I, J}`, `m = Σ_I a + 1`, and `D^m(a, 1, 1)`.
pub fn knudsen_dual_basis(ctx: &Context, n: usize) -> Result<KnudsenDualCertificate> {
    check_n(n, 5)?;
    let amb = ctx.ambient(n)?;
    let knu = curve_family(n, &CurveFamily::Knudsen)?;
    let x = LabelSet::full(n - 2);
    let divisors: Vec<(FCurve, LabelSet, WeightAssignment, CoinvariantDivisor)> = knu
        .iter()
        .map(|c| {
            let block = c.block_of(1);
            let w = balanced_weights(x, block)?;
            let m = u32::try_from(w.total(block) + 1)
                .map_err(|_| Error::Internal("weight total overflows u32".into()))?;
            let mut weights: Vec<u32> = w.values().into_iter().map(|v| v as u32).collect();
            weights.extend([1, 1]);
            Ok((*c, block, w, CoinvariantDivisor::new(m, weights)?))
        })
        .collect::<Result<_>>()?;

    let matrix: Vec<Vec<u32>> = divisors
        .iter()
        .map(|(_, _, _, d)| d.functional(&knu))
        .collect::<Result<_>>()?;
    let identity = matrix
        .iter()
        .enumerate()
        .all(|(k, row)| row.iter().enumerate().all(|(l, &v)| v == u32::from(k == l)));

    let mut entries = Vec::with_capacity(divisors.len());
    for (c, block, w, d) in divisors {
        let values = d.functional(amb.curves())?;
        let min_degree = values.iter().map(|&v| i64::from(v)).min().unwrap_or(0);
        let functional = CurveFunctional {
            n,
            values: values
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
            realizable: false,
        };
        let realizable = amb.expand(&functional)?.is_some();
        entries.push(KnudsenDualEntry {
            curve: c.encode(),
            block: block.to_string(),
            weights: w,
            m: d.m(),
            divisor: d.to_string(),
            min_degree,
            realizable,
        });
    }
    let nonnegative = entries.iter().all(|e| e.min_degree >= 0);
    Ok(KnudsenDualCertificate {
        n,
        entries,
        matrix,
        identity,
        nonnegative,
    })
}

/// Report form of [`knudsen_dual_basis`].
pub fn verify_knudual(ctx: &Context, n: usize) -> Result<VerificationReport> {
    let mut b = ReportBuilder::new("knudual", n);
    let cert = knudsen_dual_basis(ctx, n)?;
    let count = cert.entries.len();
    b.check("knudsen_curves", (1usize << (n - 3)) - 1, count)
        .check("identity_matrix", true, cert.identity)
        .check("nonnegative_on_all_curves", true, cert.nonnegative)
        .check(
            "realizable_divisors",
            count,
            cert.entries.iter().filter(|e| e.realizable).count(),
        )
        .witness("certificate", &cert);
    Ok(b.finish())
}
