//! Mode-mixing integration checked against the closed-form solution
//! available for this ramp shape, plus the protocol's time map against a
//! brute-force quadrature.
//!
//! Because `omega^2(tau)` is linear in `c^2(tau)`, the squared frequency
//! itself follows a tanh profile, for which the asymptotic mixing is known
//! exactly:
//!
//! `|beta_inf|^2 = sinh^2(pi (omega_f - omega_i) / 2a)
//!                 / [ sinh(pi omega_i / a) sinh(pi omega_f / a) ]`.
//!
//! The oracle is validated against its own limiting regimes (sudden and
//! adiabatic) before being compared with the integrator.

use proptest::prelude::*;
use roton_core::dispersion::{Frame, PhysicsParams, R_MAX};
use roton_core::quench::{integrate_mode, integrate_mode_rebased, QuenchProtocol};

fn final_params(r: f64, a: f64) -> PhysicsParams {
    PhysicsParams::new(r, a, 0.0, Frame::Final).unwrap()
}

/// `ln sinh x` for `x > 0` without overflow.
fn ln_sinh(x: f64) -> f64 {
    if x < 30.0 {
        x.sinh().ln()
    } else {
        x - std::f64::consts::LN_2 + (-(-2.0 * x).exp()).ln_1p()
    }
}

/// Exact asymptotic pair production for a tanh sweep of `omega^2`.
fn beta2_closed_form(omega_i: f64, omega_f: f64, rate: f64) -> f64 {
    let pa = std::f64::consts::PI / rate;
    (2.0 * ln_sinh(0.5 * pa * (omega_f - omega_i).abs())
        - ln_sinh(pa * omega_i)
        - ln_sinh(pa * omega_f))
    .exp()
}

#[test]
fn closed_form_oracle_has_the_right_limits() {
    let (oi, of) = (0.75f64.sqrt(), 1.25f64.sqrt());
    // Sudden limit: |beta|^2 -> (omega_f - omega_i)^2 / (4 omega_i omega_f).
    let sudden = (of - oi).powi(2) / (4.0 * oi * of);
    let fast = beta2_closed_form(oi, of, 1e5);
    assert!(
        ((fast - sudden) / sudden).abs() < 1e-8,
        "fast {fast} vs sudden {sudden}"
    );
    // Adiabatic limit: exponential suppression ~ exp(-2 pi omega_i / a).
    let slow = beta2_closed_form(oi, of, 0.05 * oi);
    assert!(slow < 1e-50, "adiabatic value {slow}");
    assert!(slow > 0.0);
    // Frozen reference for the workhorse example (rate = omega_i).
    let frozen = 6.718_479_692_438_701e-4;
    let val = beta2_closed_form(oi, of, oi);
    assert!(
        ((val - frozen) / frozen).abs() < 1e-12,
        "closed form {val} vs frozen {frozen}"
    );
}

#[test]
fn integrator_matches_the_closed_form() {
    // Deterministic spread of regimes: contact and dipolar, phonon and
    // particle momenta, slow through fast ramps.
    let cases: [(f64, f64, f64, f64, f64); 6] = [
        // (r, a, k, ratio, rate / omega_i)
        (0.0, 1.0, 1.0, 0.5, 1.0),
        (0.0, 1.0, 0.3, 0.25, 2.0),
        (R_MAX, 2.0, 1.5, 0.5, 0.7),
        (R_MAX, 3.0, 0.8, 0.4, 1.5),
        (0.6, 1.5, 2.5, 0.7, 3.0),
        (1.0, 0.5, 0.15, 0.125, 1.2),
    ];
    for &(r, a, k, ratio, rate_rel) in &cases {
        let p = final_params(r, a);
        let omega_i = roton_core::dispersion::spectrum(k, &p, ratio).unwrap().omega;
        let proto = QuenchProtocol::new(ratio, rate_rel * omega_i).unwrap();
        let mode = integrate_mode(k, &p, &proto, 1e-12).unwrap();
        let want = beta2_closed_form(mode.omega_i, mode.omega_f, proto.rate());
        let got = mode.beta_abs2();
        let rel = ((got - want) / want).abs();
        assert!(
            rel < 1e-7,
            "case r={r} a={a} k={k} ratio={ratio} rate_rel={rate_rel}: \
             beta^2 = {got:e} vs closed form {want:e} (rel {rel:.2e})"
        );
    }
}

#[test]
fn frequencies_match_the_stationary_spectra() {
    // omega_i/omega_f stored on the state must equal the contact closed
    // forms when R = 0.
    let p = final_params(0.0, 1.0);
    let proto = QuenchProtocol::new(0.5, 1.0).unwrap();
    let k = 1.0;
    let mode = integrate_mode(k, &p, &proto, 1e-10).unwrap();
    let oi = k * (0.25 * k * k + 0.5).sqrt();
    let of = k * (0.25 * k * k + 1.0).sqrt();
    assert!((mode.omega_i - oi).abs() < 1e-12 * oi);
    assert!((mode.omega_f - of).abs() < 1e-12 * of);
}

#[test]
fn faster_ramps_produce_more_pairs() {
    let p = final_params(0.0, 1.0);
    let k = 0.6;
    let omega_i = roton_core::dispersion::spectrum(k, &p, 0.5).unwrap().omega;
    let slow = integrate_mode(k, &p, &QuenchProtocol::new(0.5, 0.2 * omega_i).unwrap(), 1e-11)
        .unwrap()
        .beta_abs2();
    let fast = integrate_mode(k, &p, &QuenchProtocol::new(0.5, 2.0 * omega_i).unwrap(), 1e-11)
        .unwrap()
        .beta_abs2();
    assert!(
        fast > 10.0 * slow,
        "fast ramp {fast:e} should dominate slow ramp {slow:e}"
    );
}

#[test]
fn phase_rebasing_leaves_observables_unchanged() {
    let p = final_params(0.9, 1.2);
    let proto = QuenchProtocol::new(0.5, 1.3).unwrap();
    let k = 0.8;
    let base = integrate_mode(k, &p, &proto, 1e-12).unwrap();
    let shifted = integrate_mode_rebased(k, &p, &proto, 1e-12, &[], 1.234).unwrap();
    let rel = ((base.beta_abs2() - shifted.beta_abs2()) / base.beta_abs2()).abs();
    assert!(rel < 1e-8, "beta^2 changed under phase re-basing: {rel:e}");
    // The correlator combination alpha conj(beta) e^{-2 i theta} is the
    // phase-invariant object.
    let corr = |m: &roton_core::ModeState| {
        m.alpha * m.beta.conj() * roton_core::Complex64::from_polar(1.0, -2.0 * m.theta)
    };
    let d = (corr(&base) - corr(&shifted)).norm() / corr(&base).norm();
    assert!(d < 1e-7, "correlator changed under phase re-basing: {d:e}");
}

#[test]
fn lab_time_matches_brute_force_quadrature() {
    let proto = QuenchProtocol::new(0.5, 1.0).unwrap();
    // Frozen from an independent adaptive quadrature at 1e-15 accuracy.
    let frozen = 1.360_377_073_914_880_4;
    let got = proto.lab_time(5.0);
    assert!(
        ((got - frozen) / frozen).abs() < 1e-8,
        "lab_time(5) = {got} vs frozen {frozen}"
    );
    // And against an in-test fixed-step Simpson rule on several windows.
    let simpson = |tau: f64| {
        let n = 200_000;
        let h = tau / n as f64;
        let f = |t: f64| proto.scale_factor(t).powi(2);
        let mut acc = f(0.0) + f(tau);
        for i in 1..n {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(h * i as f64);
        }
        acc * h / 3.0
    };
    for &tau in &[-8.0, -1.0, 0.5, 3.0, 11.0] {
        let want = simpson(tau);
        let got = proto.lab_time(tau);
        assert!(
            (got - want).abs() < 1e-9 * want.abs().max(1.0),
            "tau = {tau}: {got} vs {want}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The symplectic norm survives arbitrary stable quenches.
    #[test]
    fn normalization_holds_for_random_quenches(
        k in 0.1..4.0f64,
        r in 0.0..R_MAX,
        a in 0.1..2.0f64,
        ratio in 0.1..0.9f64,
        rate in 0.3..3.0f64,
    ) {
        let p = final_params(r, a);
        let proto = QuenchProtocol::new(ratio, rate).unwrap();
        // A <= 2 keeps every dipolar strength below the instability
        // threshold, so integration must succeed.
        let mode = integrate_mode(k, &p, &proto, 1e-9).unwrap();
        let drift = (mode.alpha_abs2() - mode.beta_abs2() - 1.0).abs();
        prop_assert!(drift < 1e-7, "drift = {drift:e}");
        prop_assert!(mode.beta_abs2() >= 0.0);
    }
}
