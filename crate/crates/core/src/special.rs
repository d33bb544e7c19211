//! Scaled complementary error function.
//!
//! The quasi-2D interaction kernel needs `erfcx(x) = exp(x^2) * erfc(x)` for
//! arguments from 0 up to arbitrarily large momenta, where the naive product
//! `exp(x^2) * erfc(x)` overflows long before the result (~ `1/(sqrt(pi) x)`)
//! stops being representable.  We therefore evaluate erfcx directly with
//! W. J. Cody's rational minimax approximations (the netlib CALERF scheme,
//! Math. Comp. 23 (1969) 631; TOMS 16 (1990) 29), which are accurate to
//! ~18 significant decimal digits in exact arithmetic:
//!
//! * `x <= 0.46875`  — rational approximation of erf, then one safe
//!   multiplication by `exp(x^2) <= exp(0.22)`;
//! * `0.46875 < x <= 4` — rational approximation of erfcx itself
//!   (no exponential is evaluated at all);
//! * `x > 4` — rational approximation in `1/x^2` of the deviation from the
//!   asymptote `1/(sqrt(pi) x)`;
//! * `x >= 6.71e7` — the asymptote alone (the `1/x^2` correction is below
//!   machine precision).

/// 1/sqrt(pi).
const SQRPI: f64 = 5.641_895_835_477_563e-1;
/// Seam between the erf-based and the direct rational branch.
const THRESH: f64 = 0.46875;
/// Below this, `x*x` underflows the rational variable; erf(x) ~ 2x/sqrt(pi).
const XSMALL: f64 = 1.11e-16;
/// Above this, `1 - 1/(2x^2) == 1` in f64: use the bare asymptote.
const XHUGE: f64 = 6.71e7;

/// Coefficients for erf on `|x| <= 0.46875` (Cody, interval 1).
const A: [f64; 5] = [
    3.161_123_743_870_565_6e0,
    1.138_641_541_510_501_6e2,
    3.774_852_376_853_02e2,
    3.209_377_589_138_469_4e3,
    1.857_777_061_846_031_5e-1,
];
const B: [f64; 4] = [
    2.360_129_095_234_412_2e1,
    2.440_246_379_344_441_7e2,
    1.282_616_526_077_372_3e3,
    2.844_236_833_439_171e3,
];

/// Coefficients for erfcx on `0.46875 <= x <= 4` (Cody, interval 2).
const C: [f64; 9] = [
    5.641_884_969_886_701e-1,
    8.883_149_794_388_377,
    6.611_919_063_714_163e1,
    2.986_351_381_974_001e2,
    8.819_522_212_417_69e2,
    1.712_047_612_634_070_7e3,
    2.051_078_377_826_071_6e3,
    1.230_339_354_797_997_2e3,
    2.153_115_354_744_038_3e-8,
];
const D: [f64; 8] = [
    1.574_492_611_070_983_5e1,
    1.176_939_508_913_125e2,
    5.371_811_018_620_099e2,
    1.621_389_574_566_690_3e3,
    3.290_799_235_733_459_7e3,
    4.362_619_090_143_247e3,
    3.439_367_674_143_721_6e3,
    1.230_339_354_803_749_5e3,
];

/// Coefficients for erfcx on `x > 4` (Cody, interval 3, variable `1/x^2`).
const P: [f64; 6] = [
    3.053_266_349_612_323_6e-1,
    3.603_448_999_498_044_5e-1,
    1.257_817_261_112_292_6e-1,
    1.608_378_514_874_227_5e-2,
    6.587_491_615_298_378e-4,
    1.631_538_713_730_209_7e-2,
];
const Q: [f64; 5] = [
    2.568_520_192_289_822,
    1.872_952_849_923_460_4,
    5.279_051_029_514_285e-1,
    6.051_834_131_244_132e-2,
    2.335_204_976_268_691_8e-3,
];

/// Scaled complementary error function `erfcx(x) = exp(x^2) erfc(x)` for
/// non-negative `x`.
///
/// Relative accuracy is a few units in the last place over the whole
/// non-negative axis; no intermediate overflows for any representable `x`.
pub(crate) fn erfcx(x: f64) -> f64 {
    debug_assert!(x >= 0.0, "erfcx is only implemented for x >= 0");
    if x <= THRESH {
        // erf via the degree-4/4 rational in x^2, then scale by exp(x^2).
        let ysq = if x > XSMALL { x * x } else { 0.0 };
        let mut xnum = A[4] * ysq;
        let mut xden = ysq;
        for i in 0..3 {
            xnum = (xnum + A[i]) * ysq;
            xden = (xden + B[i]) * ysq;
        }
        let erf = x * (xnum + A[3]) / (xden + B[3]);
        ysq.exp() * (1.0 - erf)
    } else if x <= 4.0 {
        // Direct rational approximation of erfcx; no exponential involved.
        let mut xnum = C[8] * x;
        let mut xden = x;
        for i in 0..7 {
            xnum = (xnum + C[i]) * x;
            xden = (xden + D[i]) * x;
        }
        (xnum + C[7]) / (xden + D[7])
    } else if x < XHUGE {
        // erfcx(x) = (1/sqrt(pi) - ysq*R(ysq)) / x with ysq = 1/x^2.
        let ysq = 1.0 / (x * x);
        let mut xnum = P[5] * ysq;
        let mut xden = ysq;
        for i in 0..4 {
            xnum = (xnum + P[i]) * ysq;
            xden = (xden + Q[i]) * ysq;
        }
        let r = ysq * (xnum + P[4]) / (xden + Q[4]);
        (SQRPI - r) / x
    } else {
        // 1 - 1/(2x^2) is indistinguishable from 1 here.
        SQRPI / x
    }
}
