use num_bigint::BigInt;
use num_traits::One;

use super::context::Context;
use super::knudsen::check_n;
use super::report::{ReportBuilder, VerificationReport};
use crate::combinat::{FCurve, LabelSet};
use crate::error::{Error, Result};
use crate::exactlin::{determinant, IntegerMatrix};

/// Subsets `A ⊆ [n] \ {i,j}` with `|A| >= 2`, largest first, then
/// lexicographic on the sorted elements.
pub fn charproj_subsets(n: usize, i: usize, j: usize) -> Vec<LabelSet> {
    let rest = LabelSet::full(n).without(i).without(j);
    let mut sets: Vec<LabelSet> = (0..=rest.0)
        .map(LabelSet)
        .filter(|s| s.is_subset(rest) && s.len() >= 2)
        .collect();
    sets.sort_by(|a, b| {
        b.len()
            .cmp(&a.len())
            .then_with(|| a.iter().collect::<Vec<_>>().cmp(&b.iter().collect::<Vec<_>>()))
    });
    sets
}

/// `F_A = F({i}, {min A}, A \ {min A}, (A ∪ {i})^c)`.
pub fn charproj_curve(n: usize, i: usize, a: LabelSet) -> Result<FCurve> {
    let min = a.min().ok_or_else(|| Error::InvalidArgument("empty subset".into()))?;
    FCurve::new(
        n,
        [
            LabelSet::singleton(i),
            LabelSet::singleton(min),
            a.without(min),
            a.union(LabelSet::singleton(i)).complement(n),
        ],
    )
}

/// The matrix `δ_{A_l} · F_{A_k}` (rows curves, columns boundaries) is upper
/// triangular with unit diagonal.
pub fn verify_charproj_certificate(ctx: &Context, n: usize, i: usize, j: usize) -> Result<VerificationReport> {
    check_n(n, 4)?;
    if i == 0 || j == 0 || i > n || j > n || i == j {
        return Err(Error::InvalidArgument(format!(
            "need distinct i, j in 1..={n}, got i={i}, j={j}"
        )));
    }
    let mut b = ReportBuilder::new("charproj-cert", n);
    b.param("i", i).param("j", j);
    let amb = ctx.ambient(n)?;
    let sets = charproj_subsets(n, i, j);
    let curves: Vec<FCurve> = sets.iter().map(|&a| charproj_curve(n, i, a)).collect::<Result<_>>()?;
    let positions = amb.pairing().curve_positions(&curves)?;
    let deltas = sets
        .iter()
        .map(|&a| amb.boundary_delta(a))
        .collect::<Result<Vec<_>>>()?;
    let size = sets.len();
    let table: Vec<Vec<i64>> = positions
        .iter()
        .map(|&p| {
            deltas
                .iter()
                .map(|d| {
                    let v = &d.values[p];
                    i64::try_from(v.to_integer()).expect("boundary degrees are small integers")
                })
                .collect()
        })
        .collect();
    let upper = (0..size).all(|k| (0..k).all(|l| table[k][l] == 0));
    let unit = (0..size).all(|k| table[k][k] == 1);
    let det = determinant(&IntegerMatrix::from_i64_rows(&table, size)?)?;

    let expected_size = (1usize << (n - 2)) - (n - 2) - 1;
    b.check("size", expected_size, size)
        .check("upper_triangular", true, upper)
        .check("unit_diagonal", true, unit)
        .check("determinant", BigInt::one().to_string(), det.to_string())
        .witness("subsets", sets.iter().map(ToString::to_string).collect::<Vec<_>>())
        .witness("curves", curves.iter().map(FCurve::encode).collect::<Vec<_>>())
        .witness("matrix", &table);
    Ok(b.finish())
}
