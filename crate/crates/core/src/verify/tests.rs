use super::*;
use crate::combinat::{curve_family, CurveFamily, FCurve, LabelSet};
use crate::error::Error;

fn set(labels: &[usize], n: usize) -> LabelSet {
    LabelSet::from_labels(labels.iter().copied(), n).unwrap()
}

fn assert_pass(r: &VerificationReport) {
    assert!(r.passed(), "{} n={} failed: {:?}\n{}", r.theorem, r.n, r.mismatches(), serde_json::to_string_pretty(r).unwrap());
}

#[test]
fn charkap_small() {
    let ctx = Context::default();
    for n in 5..=6 {
        let r = verify_charkap(&ctx, n).unwrap();
        assert_pass(&r);
        assert_eq!(r.computed["kernel_dim"], 1);
    }
    assert!(verify_charkap(&ctx, 4).is_err());
}

#[test]
fn charknu_small() {
    let ctx = Context::default();
    let r5 = verify_charknu(&ctx, 5).unwrap();
    assert_pass(&r5);
    assert_eq!(r5.computed["kernel_dim"], 2);
    let r6 = verify_charknu(&ctx, 6).unwrap();
    assert_pass(&r6);
    assert_eq!(r6.computed["kernel_dim"], 9);
}

#[test]
fn chargen_examples() {
    let ctx = Context::default();
    let keel = verify_chargen(&ctx, 6, set(&[1, 2, 3, 4, 5], 6), set(&[1, 2, 3, 6], 6)).unwrap();
    assert_pass(&keel);
    let proj = verify_chargen(&ctx, 6, set(&[1, 2, 3, 4, 5], 6), set(&[1, 2, 3, 4, 5], 6)).unwrap();
    assert_pass(&proj);
    assert_eq!(proj.computed["kernel_dim"], 5);
    assert!(verify_chargen(&ctx, 6, set(&[1, 2], 6), set(&[1, 2, 3], 6)).is_err());
}

#[test]
fn chargen_family_matches_named_families() {
    for n in 5..=7 {
        let CurveFamily::FiberProduct { s, t } = CurveFamily::projection(n, n) else { unreachable!() };
        let fam = curve_family(n, &CurveFamily::FiberProduct { s, t }).unwrap();
        assert!(fam.iter().all(|c| c.is_singleton(n)));
    }
}

#[test]
fn knudsen_dual_example() {
    let ctx = Context::default();
    let cert = knudsen_dual_basis(&ctx, 5).unwrap();
    assert!(cert.passed());
    let e = cert.entries.iter().find(|e| e.curve == "1|2,3|4|5").unwrap();
    assert_eq!(e.weights.values(), vec![2, 1, 1]);
    assert_eq!(e.m, 3);
    assert_eq!(e.divisor, "D[3]:2,1,1,1,1");
    assert_eq!(cert.matrix, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    assert_pass(&verify_knudual(&ctx, 6).unwrap());
}

#[test]
fn charproj_n5_table() {
    let ctx = Context::default();
    let r = verify_charproj_certificate(&ctx, 5, 5, 4).unwrap();
    assert_pass(&r);
    let curves: Vec<FCurve> = r.witnesses["curves"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| FCurve::parse(s.as_str().unwrap(), 5).unwrap())
        .collect();
    let expected_curves = ["5|1|2,3|4", "5|1|2|3,4", "5|1|3|2,4", "5|2|3|1,4"]
        .map(|s| FCurve::parse(s, 5).unwrap());
    assert_eq!(curves, expected_curves);
    assert_eq!(
        r.witnesses["matrix"],
        serde_json::json!([[1, 0, 0, -1], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    );
    let r6 = verify_charproj_certificate(&ctx, 6, 6, 5).unwrap();
    assert_pass(&r6);
    assert_eq!(r6.computed["size"], 11);
    assert!(verify_charproj_certificate(&ctx, 5, 2, 2).is_err());
}

#[test]
fn charproj_every_pair_small() {
    let ctx = Context::default();
    for n in 4..=6 {
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    assert_pass(&verify_charproj_certificate(&ctx, n, i, j).unwrap());
                }
            }
        }
    }
}

#[test]
fn cdint_examples() {
    let ctx = Context::default();
    assert_pass(&verify_cdint(&ctx, 5, CdintPart::HalfIntegralBasis, 0).unwrap());
    let r4 = verify_cdint(&ctx, 4, CdintPart::Generation, 2).unwrap();
    assert_pass(&r4);
    assert_eq!(r4.witnesses["minimal_m_max"], 2);
    assert!(verify_cdint(&ctx, 4, CdintPart::Generation, 1).is_err());
    assert!(CdintPart::from_number(3).is_err());
}

#[test]
fn psi_extremal_examples() {
    let ctx = Context::default();
    let r = verify_psi_extremal(&ctx, 5, 5).unwrap();
    assert_pass(&r);
    assert_eq!(r.witnesses["vanishing_curves"], 4);
    assert_pass(&verify_psi_extremal(&ctx, 6, 1).unwrap());
}

#[test]
fn knu_rank_examples() {
    let ctx = Context::default();
    let knu5 = curve_family(5, &CurveFamily::Knudsen).unwrap();
    let empty = verify_knu_rank(&ctx, 5, &[]).unwrap();
    assert_pass(&empty);
    assert_eq!(empty.computed["kernel_dim"], 5);
    let two = verify_knu_rank(&ctx, 5, &knu5[..2]).unwrap();
    assert_pass(&two);
    assert_eq!(two.computed["kernel_dim"], 3);
    let knu6 = curve_family(6, &CurveFamily::Knudsen).unwrap();
    let all6 = verify_knu_rank(&ctx, 6, &knu6).unwrap();
    assert_pass(&all6);
    assert_eq!(all6.computed["kernel_dim"], 9);
    let not_knu = FCurve::parse("1|2|3|4,5", 5).unwrap();
    assert!(verify_knu_rank(&ctx, 5, &[not_knu]).is_err());
    assert!(verify_knu_rank(&ctx, 5, &[knu5[0], knu5[0]]).is_err());
}

#[test]
fn triple_examples() {
    let ctx = Context::default();
    let r5 = verify_triple(&ctx, 5, 1).unwrap();
    assert_pass(&r5);
    assert_eq!(r5.computed["image_codim"], 2);
    let r6 = verify_triple(&ctx, 6, 1).unwrap();
    assert_pass(&r6);
    assert_eq!(r6.computed["image_codim"], 4);
    assert!(verify_triple(&ctx, 6, 5).is_err());
}

#[test]
fn reports_are_reproducible_and_bounded() {
    let ctx = Context::default();
    let a = verify_charknu(&ctx, 6).unwrap().untimed();
    let b = verify_charknu(&Context::default(), 6).unwrap().untimed();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let small = Context::new(6);
    assert!(matches!(verify_charkap(&small, 7), Err(Error::ResourceBound { n: 7, max: 6 })));
}
