use std::time::Instant;

use picubed_core::numctx::{mk_context, ref_pi, Real};
use picubed_core::series::{partial_sum, SeriesId};
use picubed_core::verify::{
    gupta_partial, plouffe_s, verify_identity, IdentityId, Report,
};

fn check(id: IdentityId, digits: u32) -> Report {
    let ctx = mk_context(digits as u64 + 5).unwrap();
    verify_identity(id, digits, &ctx).unwrap()
}

fn assert_pass_invariant(r: &Report, digits: u32) {
    if r.pass {
        let bits = r.lhs.prec();
        let scale = r.lhs.abs().max(Real::one(bits));
        let tol = &picubed_core::numctx::pow10_neg(digits, bits) * &scale;
        assert!(r.abs_diff <= tol, "{}", r.id);
        assert!(r.certified_digits >= digits, "{}", r.id);
    }
}

#[test]
fn suite_passes_at_fifteen_digits() {
    for id in IdentityId::suite() {
        let r = check(id, 15);
        assert_pass_invariant(&r, 15);
        assert_eq!(r.pass, !id.expected_to_fail(), "{id}: {r:?}");
        assert_eq!(r.uses_reference_pi, id.uses_reference_pi());
    }
}

#[test]
fn central_binomial_identity_thirty_digits() {
    let start = Instant::now();
    let r = check(IdentityId::Eq2CentralBinomial, 30);
    assert!(r.pass);
    assert!(r.terms_used <= 60, "{}", r.terms_used);
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn harmonic_identity_within_120_terms() {
    let r = check(IdentityId::Eq4SunHarmonic, 15);
    assert!(r.pass);
    assert!(r.terms_used <= 120, "{}", r.terms_used);
}

#[test]
fn plouffe_identities_twenty_digits() {
    for id in [IdentityId::PlouffePi, IdentityId::PlouffePi3] {
        let start = Instant::now();
        let r = check(id, 20);
        assert!(r.pass, "{id}: {r:?}");
        // three sums, each at most 25 terms
        assert!(r.terms_used <= 75, "{id}: {}", r.terms_used);
        assert!(start.elapsed().as_secs_f64() < 2.0);
    }
}

#[test]
fn plouffe_six_digits() {
    let r = check(IdentityId::PlouffePi, 6);
    assert!(r.pass);
    assert_eq!(picubed_core::numctx::to_sig_digits(&r.lhs, 7), "3.141593");
}

#[test]
fn doubling_digits_keeps_passes() {
    let levels: [(IdentityId, u32); 9] = [
        (IdentityId::Eq2CentralBinomial, 20),
        (IdentityId::Eq4SunHarmonic, 20),
        (IdentityId::PlouffePi, 20),
        (IdentityId::PlouffePi3, 20),
        (IdentityId::GuptaFamily(0), 5),
        (IdentityId::GuptaFamily(1), 5),
        (IdentityId::GuptaFamily(2), 5),
        (IdentityId::GuptaFamily(3), 5),
        (IdentityId::GuptaFamily(4), 5),
    ];
    for (id, d) in levels {
        let low = check(id, d);
        assert!(low.pass, "{id} at {d}");
        let high = check(id, 2 * d);
        assert!(high.pass, "{id} at {}", 2 * d);
    }
}

#[test]
fn gupta_zero_is_thirty_two_times_alternating_cubes() {
    let ctx = mk_context(30).unwrap();
    let bits = ctx.bits();
    for n_max in [1u64, 2, 10, 100] {
        let g = gupta_partial(0, n_max, &ctx).unwrap();
        let a = partial_sum(&SeriesId::AltOddCubesCorrected, n_max, &ctx).unwrap();
        let slack = (&g.abs() * &Real::from_int(8 * n_max as i64, bits)).mul_pow2(1 - bits as i64);
        assert!((&g - &a).abs() <= slack, "n_max={n_max}");
    }
}

#[test]
fn gupta_one_reduces_to_fifth_powers() {
    // (8/3)π³ − (512/π²)·Σ(−1)^{n+1}/(2n−1)⁵ with the fifth-power sum 5π⁵/1536
    // gives π³; the direct partial sum must approach it like n_max⁻³.
    let ctx = mk_context(30).unwrap();
    let bits = ctx.bits();
    let pi3 = ref_pi(&ctx).powi(3);
    let s = gupta_partial(1, 2000, &ctx).unwrap();
    let tol = Real::from_ratio(&1.into(), &1_000_000_000u64.into(), bits);
    assert!((&s - &pi3).abs() <= tol);
    let pi = ref_pi(&ctx);
    let closed = &(&pi3 * &Real::from_ratio(&8.into(), &3.into(), bits))
        - &(&(&pi.powi(3) * &Real::from_int(512 * 5, bits)) / &Real::from_int(1536, bits));
    assert!((&closed - &pi3).abs() <= (&pi3 * &Real::from_int(64, bits)).mul_pow2(1 - bits as i64));
}

#[test]
fn plouffe_sums_positive_and_decreasing_in_r() {
    let ctx = mk_context(25).unwrap();
    for n in [1u32, 3] {
        for k in [1u64, 5, 12] {
            let s1 = plouffe_s(n, 1, &ctx, k).unwrap();
            let s2 = plouffe_s(n, 2, &ctx, k).unwrap();
            let s4 = plouffe_s(n, 4, &ctx, k).unwrap();
            assert!(s4 > Real::zero(64));
            assert!(s1 > s2 && s2 > s4, "n={n} K={k}");
        }
    }
}

#[test]
fn gupta_out_of_range() {
    assert!(IdentityId::gupta(9).is_err());
    let ctx = mk_context(20).unwrap();
    assert!(gupta_partial(9, 3, &ctx).is_err());
}
