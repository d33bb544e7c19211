//! Correlation observables: route consistency, envelope tightness, thermal
//! behavior, and the small-momentum expansion of the thermal correlation.

use roton_core::correlations::{
    envelopes, g2_low_t_expansion, g2_post_quench, g2_stationary_thermal, thermal_occupation,
    Detection,
};
use roton_core::dispersion::{vacuum_correlation, Frame, PhysicsParams, R_MAX};
use roton_core::quench::{final_occupation, integrate_mode, integrate_mode_sampled, QuenchProtocol};

fn final_params(r: f64, a: f64, t: f64) -> PhysicsParams {
    PhysicsParams::new(r, a, t, Frame::Final).unwrap()
}

#[test]
fn post_quench_g2_agrees_between_its_two_formulations() {
    // Route 1 goes through the trace; route 2 through the final occupation
    // numbers (n_k, c_k).  Both must give the same correlation to 1e-12.
    let p = final_params(R_MAX, 2.5, 0.0);
    let proto = QuenchProtocol::new(0.5, 1.5).unwrap();
    for &(k, n_in) in &[(0.4, 0.0), (1.1, 0.0), (0.7, 0.8), (2.0, 2.5)] {
        let mode = integrate_mode(k, &p, &proto, 1e-12).unwrap();
        let (g2, g2n) = g2_post_quench(&mode, proto.tau_end(), n_in, &p, &proto).unwrap();
        let (n_k, c_k) = final_occupation(&mode, n_in).unwrap();
        let phase = roton_core::Complex64::from_polar(1.0, -2.0 * mode.theta);
        let g2n_occ = 2.0 * n_k + 1.0 + 2.0 * (c_k * phase).re;
        assert!(
            (g2n - g2n_occ).abs() <= 1e-12 * g2n.abs().max(1.0),
            "k={k} n_in={n_in}: {g2n} vs {g2n_occ}"
        );
        let weight = vacuum_correlation(k, &p, proto.c2_of_tau(proto.tau_end())).unwrap();
        assert!(
            (g2 - weight * g2n).abs() <= 1e-12 * g2.abs().max(1.0),
            "weight route mismatch at k={k}"
        );
    }
}

#[test]
fn dense_sampling_reaches_the_envelopes_after_saturation() {
    // Once the ramp has saturated, alpha and beta freeze and the normalized
    // correlation oscillates between the envelopes; a dense scan over one
    // full oscillation must come within sampling error of both.
    let p = final_params(R_MAX, 2.5, 0.0);
    let ratio = 0.5;
    let k = 0.9;
    let omega_f = roton_core::dispersion::spectrum(k, &p, 1.0).unwrap().omega;
    let rate = 1.5;
    let coda = 1.2 * std::f64::consts::PI / omega_f;
    let proto = QuenchProtocol::with_end(ratio, rate, 12.0 / rate + coda).unwrap();
    let t1 = proto.tau_end();
    let t0 = t1 - coda;
    let n = 2000;
    let samples: Vec<f64> = (0..=n).map(|i| t0 + (t1 - t0) * i as f64 / n as f64).collect();
    let mode = integrate_mode_sampled(k, &p, &proto, 1e-11, &samples).unwrap();
    let (lower, upper) = envelopes(&mode, 0.0).unwrap();
    let mut seen_min = f64::INFINITY;
    let mut seen_max = f64::NEG_INFINITY;
    for &tau in &samples {
        let (_, g2n) = g2_post_quench(&mode, tau, 0.0, &p, &proto).unwrap();
        assert!(
            g2n >= lower - 1e-9 && g2n <= upper + 1e-9,
            "normalized g2 escaped the envelopes at tau = {tau}"
        );
        seen_min = seen_min.min(g2n);
        seen_max = seen_max.max(g2n);
    }
    // Sampling 2000 points over 1.2 oscillations resolves the extrema to
    // ~(phase step)^2 ~ 2e-5 of the oscillation amplitude.
    let amp = 0.5 * (upper - lower);
    assert!(seen_min - lower < 1e-4 * amp.max(1e-3), "min {seen_min} vs lower {lower}");
    assert!(upper - seen_max < 1e-4 * amp.max(1e-3), "max {seen_max} vs upper {upper}");
}

#[test]
fn product_of_envelopes_is_the_squared_thermal_weight() {
    // (|a|-|b|)^2 (|a|+|b|)^2 (2n+1)^2 = (|a|^2-|b|^2)^2 (2n+1)^2
    // = (2 n_in + 1)^2 by the symplectic norm.
    let p = final_params(0.0, 1.0, 0.0);
    let proto = QuenchProtocol::new(0.25, 2.0).unwrap();
    let mode = integrate_mode(0.5, &p, &proto, 1e-12).unwrap();
    for &n_in in &[0.0, 0.37, 4.2] {
        let (lo, hi) = envelopes(&mode, n_in).unwrap();
        let want = (2.0 * n_in + 1.0).powi(2);
        assert!(
            (lo * hi - want).abs() < 1e-9 * want,
            "n_in = {n_in}: {lo} * {hi} != {want}"
        );
    }
}

#[test]
fn thermal_occupation_weakens_the_witness_monotonically() {
    let p = final_params(0.0, 1.0, 0.0);
    let proto = QuenchProtocol::new(0.5, 3.0).unwrap();
    let mode = integrate_mode(0.4, &p, &proto, 1e-11).unwrap();
    let mut prev = -1.0;
    for &n_in in &[0.0, 0.1, 0.5, 2.0] {
        let (lo, _) = envelopes(&mode, n_in).unwrap();
        assert!(lo > prev, "lower envelope must rise with n_in");
        prev = lo;
    }
    // Classification can only get weaker as n_in grows.
    let (lo_cold, _) = envelopes(&mode, 0.0).unwrap();
    let (lo_warm, _) = envelopes(&mode, 1.0).unwrap();
    assert!(Detection::from_lower(lo_cold) <= Detection::from_lower(lo_warm));
}

#[test]
fn stationary_g2_rises_with_temperature_and_relaxes_to_one() {
    let k = 0.5;
    let mut prev = 0.0;
    for &t in &[0.0, 0.3, 1.0, 3.0] {
        let g2 = g2_stationary_thermal(k, &final_params(R_MAX, 2.0, t)).unwrap();
        assert!(g2 > prev, "g2 must increase with T");
        prev = g2;
    }
    // Large momentum: the weight H/omega -> 1 and the occupation dies, so
    // g2 -> 1 like kernel/H.
    let p = final_params(R_MAX, 3.4, 1.0);
    let g2_20 = g2_stationary_thermal(20.0, &p).unwrap();
    let g2_50 = g2_stationary_thermal(50.0, &p).unwrap();
    assert!((g2_20 - 1.0).abs() < 5e-3, "g2(20) = {g2_20}");
    assert!((g2_50 - 1.0).abs() < 1e-3, "g2(50) = {g2_50}");
    assert!((g2_50 - 1.0).abs() < (g2_20 - 1.0).abs());
}

#[test]
fn low_t_expansion_has_cubic_remainder_for_dipolar() {
    // At R_MAX, A = 1, T = 1 the remainder is genuinely cubic: the measured
    // coefficient |g2 - expansion| / k^3 stays near 1.00 over a decade.
    let p = final_params(R_MAX, 1.0, 1.0);
    let coeff = |k: f64| {
        let exact = g2_stationary_thermal(k, &p).unwrap();
        let approx = g2_low_t_expansion(k, &p).unwrap();
        (exact - approx).abs() / k.powi(3)
    };
    let c_hi = coeff(0.1);
    let c_lo = coeff(0.01);
    assert!(
        (0.9..1.1).contains(&c_hi) && (0.9..1.1).contains(&c_lo),
        "cubic coefficients {c_lo} / {c_hi} drifted from the frozen ~1.00"
    );
    assert!(
        (c_lo / c_hi - 1.0).abs() < 0.05,
        "cubic coefficient not stable under refinement: {c_lo} vs {c_hi}"
    );
}

#[test]
fn low_t_expansion_is_exact_through_quadratic_for_contact() {
    // With R = 0 the cubic term vanishes too: the remainder is quartic with
    // coefficient ~0.061 at A = 1, T = 1.
    let p = final_params(0.0, 1.0, 1.0);
    for &k in &[0.005, 0.02, 0.1] {
        let exact = g2_stationary_thermal(k, &p).unwrap();
        let approx = g2_low_t_expansion(k, &p).unwrap();
        let quartic = (exact - approx).abs() / k.powi(4);
        assert!(
            (0.05..0.08).contains(&quartic),
            "k = {k}: quartic coefficient {quartic} drifted"
        );
    }
    // And the k -> 0 value is T itself.
    assert!((g2_low_t_expansion(0.0, &p).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn phonon_occupation_dominates_vacuum_at_low_momentum() {
    // In the phonon regime g2 -> T: occupation ~ T/omega beats the vacuum
    // weight ~ omega/(2 f2)... combined they give exactly T + O(k).
    let t = 0.7;
    let p = final_params(0.0, 1.0, t);
    let g2 = g2_stationary_thermal(1e-4, &p).unwrap();
    assert!((g2 - t).abs() < 1e-3, "g2(k->0) = {g2} vs T = {t}");
    let n = thermal_occupation(1e-4, t).unwrap();
    assert!(n > 1e3);
}
