use num_traits::Zero;
use serde_json::json;

use super::context::Context;
use super::knudsen::{check_n, knudsen_dual_basis};
use super::linear::{annihilates, constraints, rank_of, strings};
use super::report::{ReportBuilder, VerificationReport};
use crate::combinat::{curve_family, picard_rank, CurveFamily, FCurve, LabelSet};
use crate::divisors::{Ambient, DivisorClass};
use crate::error::{Error, Result};
use crate::exactlin::{kernel_integer, smith, IntegerMatrix};

/// Images of the pullbacks along forgetting each point of `positions`,
/// computed by inserting a zero weight into every basis class of `M_{0,n-1}`.
fn pullback_images(ctx: &Context, amb: &Ambient, positions: &[usize]) -> Result<Vec<DivisorClass>> {
    let small = ctx.ambient(amb.n() - 1)?;
    let mut out = Vec::new();
    for &p in positions {
        for a in small.basis() {
            out.push(small.pullback_class(&small.basis_class(a.bits())?, amb, p)?);
        }
    }
    Ok(out)
}

/// Elementary divisors of the integral classes restricted to `curves`,
/// i.e. of the map from integral classes to `ℤ^curves`.
fn integral_restriction(amb: &Ambient, curves: &[FCurve]) -> Result<(usize, Vec<String>, bool)> {
    let cols = amb.pairing().curve_positions(curves)?;
    let restricted: IntegerMatrix = amb.integral_basis()?.select_columns(&cols);
    let s = smith(&restricted)?;
    Ok((s.rank(), strings(&s.divisors), s.all_divisors_one()))
}

/// The kernel of intersecting with the Kapranov curves is spanned by `ψₙ`,
/// and those curves span a hyperplane.
pub fn verify_charkap(ctx: &Context, n: usize) -> Result<VerificationReport> {
    check_n(n, 5)?;
    let mut b = ReportBuilder::new("charkap", n);
    let amb = ctx.ambient(n)?;
    let r = amb.rank();
    let family = CurveFamily::Kapranov;
    let kap = curve_family(n, &family)?;
    let q = constraints(&amb, &kap)?;
    let kernel = kernel_integer(&q);
    let psi = amb.psi_in_basis(n)?;
    let psi_in_kernel = !psi.is_zero() && annihilates(&q, &psi.coords);
    let psi_values = amb.psi_functional(n)?;
    let outside: Vec<usize> = (0..amb.curves().len())
        .filter(|&j| !family.contains(&amb.curves()[j]))
        .collect();
    let separated = outside
        .iter()
        .filter(|&&j| !psi_values.values[j].is_zero())
        .count();

    b.check("kernel_dim", 1, kernel.len())
        .check("psi_n_spans_kernel", true, psi_in_kernel && kernel.len() == 1)
        .check("span_rank", r - 1, r - kernel.len())
        .check("outside_curves_not_in_span", outside.len(), separated)
        .witness("kapranov_curves", kap.len())
        .witness("picard_rank", r)
        .witness("kernel_basis", kernel.iter().map(|v| strings(v)).collect::<Vec<_>>())
        .witness("psi_n", strings(&psi.coords));
    Ok(b.finish())
}

/// Knudsen curves: kernel equals the image of the two pullbacks, its
/// dimension, and surjectivity onto `ℚ^F_Knu` and `ℤ^F_Knu`.
pub fn verify_charknu(ctx: &Context, n: usize) -> Result<VerificationReport> {
    check_n(n, 5)?;
    let mut b = ReportBuilder::new("charknu", n);
    let amb = ctx.ambient(n)?;
    let r = amb.rank();
    let knu = curve_family(n, &CurveFamily::Knudsen)?;
    let k = (1usize << (n - 3)) - 1;
    let q = constraints(&amb, &knu)?;
    let kernel = kernel_integer(&q);
    let image = pullback_images(ctx, &amb, &[n - 1, n])?;
    let image_rank = rank_of(&image, r);
    let image_in_kernel = image.iter().all(|x| annihilates(&q, &x.coords));
    let cert = knudsen_dual_basis(ctx, n)?;
    let (z_rank, z_divisors, z_unit) = integral_restriction(&amb, &knu)?;

    b.check("knudsen_curves", k, knu.len())
        .check("kernel_equals_image", true, image_in_kernel && image_rank == kernel.len())
        .check("kernel_dim", r - k, kernel.len())
        .check("rational_surjective", true, r - kernel.len() == knu.len())
        .check("dual_certificate", true, cert.passed())
        .check("integral_rank", knu.len(), z_rank)
        .check("integral_divisors_all_one", true, z_unit)
        .witness("picard_rank", r)
        .witness("image_dim", image_rank)
        .witness("knudsen_curves", strings(&knu))
        .witness("integral_divisors", z_divisors)
        .witness(
            "dual_divisors",
            cert.entries.iter().map(|e| json!({"curve": e.curve, "divisor": e.divisor})).collect::<Vec<_>>(),
        );
    Ok(b.finish())
}

/// `F_{S,T}`: kernel equals the sum of the images from `M_{0,S}` and
/// `M_{0,T}`, and the span has the inclusion–exclusion dimension.
pub fn verify_chargen(ctx: &Context, n: usize, s: LabelSet, t: LabelSet) -> Result<VerificationReport> {
    check_n(n, 4)?;
    let full = LabelSet::full(n);
    if !s.is_subset(full) || !t.is_subset(full) || s.len() < 3 || t.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "S={s}, T={t} must be subsets of 1..={n} with at least three elements"
        )));
    }
    let mut b = ReportBuilder::new("chargen", n);
    b.param("S", s.to_string()).param("T", t.to_string());
    let amb = ctx.ambient(n)?;
    let r = amb.rank();
    let family = curve_family(n, &CurveFamily::FiberProduct { s, t })?;
    let q = constraints(&amb, &family)?;
    let kernel = kernel_integer(&q);
    let image: Vec<DivisorClass> = amb
        .basis()
        .iter()
        .filter(|a| a.support().is_subset(s) || a.support().is_subset(t))
        .map(|a| amb.basis_class(a.bits()))
        .collect::<Result<_>>()?;
    let image_rank = rank_of(&image, r);
    let image_in_kernel = image.iter().all(|x| annihilates(&q, &x.coords));
    let st = s.intersection(t);
    let expected_kernel = picard_rank(s.len()) + picard_rank(t.len()) - picard_rank(st.len());

    b.check("kernel_equals_image", true, image_in_kernel && image_rank == kernel.len())
        .check("kernel_dim", expected_kernel, kernel.len())
        .check("span_dim", r - expected_kernel, r - kernel.len())
        .witness("family_size", family.len())
        .witness("picard_rank", r)
        .witness(
            "rank_terms",
            json!({"n": r, "S": picard_rank(s.len()), "T": picard_rank(t.len()), "S_and_T": picard_rank(st.len())}),
        );
    Ok(b.finish())
}

/// Curves on which `ψᵢ` vanishes cut out exactly the line spanned by `ψᵢ`.
pub fn verify_psi_extremal(ctx: &Context, n: usize, i: usize) -> Result<VerificationReport> {
    check_n(n, 4)?;
    if i == 0 || i > n {
        return Err(Error::InvalidArgument(format!("index {i} outside 1..={n}")));
    }
    let mut b = ReportBuilder::new("psi-extremal", n);
    b.param("i", i);
    let amb = ctx.ambient(n)?;
    let r = amb.rank();
    let vanishing: Vec<FCurve> = amb.curves().iter().filter(|c| !c.is_singleton(i)).copied().collect();
    let q = constraints(&amb, &vanishing)?;
    let kernel = kernel_integer(&q);
    let psi = amb.psi_in_basis(i)?;
    b.check("constraint_rank", r - 1, r - kernel.len())
        .check("psi_in_kernel", true, !psi.is_zero() && annihilates(&q, &psi.coords))
        .witness("vanishing_curves", vanishing.len())
        .witness("picard_rank", r);
    Ok(b.finish())
}

/// For `A ⊆ F_Knu`: the kernel has dimension `rank Pic - |A|` and the
/// integral classes surject onto `ℤ^A`.
pub fn verify_knu_rank(ctx: &Context, n: usize, a: &[FCurve]) -> Result<VerificationReport> {
    check_n(n, 5)?;
    let family = CurveFamily::Knudsen;
    let mut seen = std::collections::HashSet::new();
    for c in a {
        if c.n() != n || !family.contains(c) || !seen.insert(*c) {
            return Err(Error::InvalidArgument(format!(
                "{c} is not a new Knudsen curve on M_0,{n}"
            )));
        }
    }
    let mut b = ReportBuilder::new("knu-rank", n);
    b.param("A", strings(a));
    let amb = ctx.ambient(n)?;
    let r = amb.rank();
    let q = constraints(&amb, a)?;
    let kernel = kernel_integer(&q);
    let (z_rank, z_divisors, z_unit) = integral_restriction(&amb, a)?;
    b.check("kernel_dim", picard_rank(n) - a.len(), kernel.len())
        .check("integral_rank", a.len(), z_rank)
        .check("integral_divisors_all_one", true, z_unit)
        .witness("picard_rank", r)
        .witness("integral_divisors", z_divisors);
    Ok(b.finish())
}

/// `F_{T,i} = F([n] \ {i,n-1,n}, {i}, {n-1}, {n})`.
pub fn triple_curve(n: usize, i: usize) -> Result<FCurve> {
    let full = LabelSet::full(n);
    let t = full.without(i).without(n - 1).without(n);
    FCurve::new(n, [t, LabelSet::singleton(i), LabelSet::singleton(n - 1), LabelSet::singleton(n)])
}

/// The images of `πᵢ*, π_{n-1}*, πₙ*` together have codimension `2^{n-4}`,
/// while the kernel of the single curve `F_{T,i}` has codimension 1.
pub fn verify_triple(ctx: &Context, n: usize, i: usize) -> Result<VerificationReport> {
    check_n(n, 5)?;
    if i == 0 || i > n - 2 {
        return Err(Error::InvalidArgument(format!("index {i} outside 1..={}", n - 2)));
    }
    let mut b = ReportBuilder::new("triple", n);
    b.param("i", i);
    let amb = ctx.ambient(n)?;
    let r = amb.rank();
    let image = pullback_images(ctx, &amb, &[i, n - 1, n])?;
    let image_rank = rank_of(&image, r);
    let curve = triple_curve(n, i)?;
    let q = constraints(&amb, &[curve])?;
    let kernel = kernel_integer(&q);
    b.check("image_codim", 1usize << (n - 4), r - image_rank)
        .check("curve_kernel_codim", 1, r - kernel.len())
        .check("image_in_curve_kernel", true, image.iter().all(|x| annihilates(&q, &x.coords)))
        .witness("curve", curve.encode())
        .witness("picard_rank", r);
    Ok(b.finish())
}
