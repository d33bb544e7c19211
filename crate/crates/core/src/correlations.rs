//! Density-density correlations and the entanglement witness built on them.
//!
//! The observable is the static structure factor per mode,
//! `G2(k) = (u+v)^2 <(b + b^dag)^2>/...`, reduced here to the two numbers
//! that matter: the full correlation `g2` (with the vacuum weight
//! `(u+v)^2 = H/omega`) and its normalized form `g2 / (u+v)^2`, which for a
//! quenched state oscillates between two envelopes.  Comparing the lower
//! envelope against the quantum thresholds 1/2 and 1 classifies each mode as
//! steerable, nonseparable, or undetected.

use crate::dispersion::{spectrum, vacuum_correlation, Frame, PhysicsParams};
use crate::error::{Error, Result};
use crate::quench::{ModeState, QuenchProtocol};

/// Bose-Einstein occupation `1 / (exp(omega/T) - 1)`.
///
/// Requires `omega > 0`; `T = 0` returns 0 exactly, and large `omega/T`
/// underflows smoothly to 0 (never NaN or negative).
pub fn thermal_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::Domain(format!("frequency omega = {omega} must be > 0")));
    }
    if !temperature.is_finite() || temperature < 0.0 {
        return Err(Error::Domain(format!("temperature T = {temperature} must be >= 0")));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    // exp_m1 keeps the phonon regime (omega/T -> 0, n ~ T/omega) accurate.
    Ok(1.0 / (omega / temperature).exp_m1())
}

/// Stationary thermal correlation
/// `g2(k) = (H/omega) coth(omega / 2T) = (u+v)^2 (2 n_k + 1)`.
pub fn g2_stationary_thermal(k: f64, params: &PhysicsParams) -> Result<f64> {
    let mode = spectrum(k, params, 1.0)?;
    let n = thermal_occupation(mode.omega, params.temperature)?;
    Ok(vacuum_correlation(k, params, 1.0)? * (2.0 * n + 1.0))
}

/// Small-`k` expansion of the stationary thermal correlation at `T > 0`:
///
/// `g2 ~ T (1 + (3/2) sqrt(A) R k)
///      + [ T (9 A R^2 / 4 - 3 A R / sqrt(2 pi) - 1/4) + 1/(12 T) ] k^2
///      + O(k^3)`.
///
/// The linear and quadratic interaction terms come from expanding the kernel
/// inside `H/omega ~ T` coth; the positive `9 A R^2/4` piece is the square
/// of the linear kernel correction generated when the expansion of
/// `1/omega^2` is pushed to second order.
pub fn g2_low_t_expansion(k: f64, params: &PhysicsParams) -> Result<f64> {
    if !k.is_finite() || k < 0.0 {
        return Err(Error::Domain(format!("momentum k = {k} must be >= 0")));
    }
    let t = params.temperature;
    if t <= 0.0 {
        return Err(Error::Domain(
            "low-temperature expansion needs T > 0 (the 1/12T term diverges)".into(),
        ));
    }
    let (r, a) = (params.r, params.a);
    let sqrt_a = a.sqrt();
    let linear = 1.5 * sqrt_a * r;
    let quad =
        t * (2.25 * a * r * r - 3.0 * a * r / (2.0 * std::f64::consts::PI).sqrt() - 0.25)
            + 1.0 / (12.0 * t);
    Ok(t * (1.0 + linear * k) + quad * k * k)
}

/// Post-quench density correlation of one mode at proper time `tau_m`,
/// assuming the pre-quench state was thermal with occupation `n_in`.
///
/// Returns `(g2, g2_normalized)` where
///
/// `g2 = (u+v)^2(tau_m) * [ |alpha|^2 + |beta|^2
///        + 2 Re(alpha conj(beta) e^{-2 i theta}) ] (2 n_in + 1)`
///
/// and `g2_normalized` drops the instantaneous vacuum weight `(u+v)^2`.
/// The mode must have been integrated with a trace sample at `tau_m`
/// (or `tau_m` may be the window end, where the final state is used).
pub fn g2_post_quench(
    mode: &ModeState,
    tau_m: f64,
    n_in: f64,
    params: &PhysicsParams,
    protocol: &QuenchProtocol,
) -> Result<(f64, f64)> {
    if !n_in.is_finite() || n_in < 0.0 {
        return Err(Error::Domain(format!("input occupation n_in = {n_in} must be >= 0")));
    }
    let (tau0, tau_end) = (protocol.tau0(), protocol.tau_end());
    if !tau_m.is_finite() || tau_m < tau0 || tau_m > tau_end {
        return Err(Error::Window { tau: tau_m, tau0, tau_end });
    }
    let t_tol = 1e-9 * tau_m.abs().max(1.0);
    let (alpha, beta, theta) = if let Some(s) = mode
        .trace
        .iter()
        .find(|s| (s.tau - tau_m).abs() <= t_tol)
    {
        (s.alpha, s.beta, s.theta)
    } else if (tau_m - tau_end).abs() <= t_tol {
        (mode.alpha, mode.beta, mode.theta)
    } else {
        return Err(Error::Domain(format!(
            "no trace sample at tau = {tau_m}; request it when integrating the mode"
        )));
    };
    let f2 = protocol.c2_of_tau(tau_m);
    let weight = vacuum_correlation(mode.k, params, f2)?;
    let (sin2t, cos2t) = (2.0 * theta).sin_cos();
    let cross = alpha * beta.conj();
    let bracket = alpha.norm_sqr()
        + beta.norm_sqr()
        + 2.0 * (cross.re * cos2t + cross.im * sin2t);
    let g2n = bracket * (2.0 * n_in + 1.0);
    Ok((weight * g2n, g2n))
}

/// Time-independent envelopes bounding the normalized post-quench
/// correlation of a saturated mode:
///
/// `lower, upper = (|alpha| -+ |beta|)^2 (2 n_in + 1)`.
pub fn envelopes(mode: &ModeState, n_in: f64) -> Result<(f64, f64)> {
    if !n_in.is_finite() || n_in < 0.0 {
        return Err(Error::Domain(format!("input occupation n_in = {n_in} must be >= 0")));
    }
    let (am, bm) = (mode.alpha.norm(), mode.beta.norm());
    let weight = 2.0 * n_in + 1.0;
    Ok(((am - bm).powi(2) * weight, (am + bm).powi(2) * weight))
}

/// Outcome of the correlation witness for one mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Detection {
    /// Lower envelope below 1/2: the bipartition is steerable.
    Steerable,
    /// Lower envelope below 1 (but not 1/2): nonseparable.
    Nonseparable,
    /// Lower envelope at or above 1: the witness sees nothing.
    NotDetected,
}

impl Detection {
    /// Classify from the lower envelope value.
    pub fn from_lower(lower: f64) -> Self {
        if lower < 0.5 {
            Detection::Steerable
        } else if lower < 1.0 {
            Detection::Nonseparable
        } else {
            Detection::NotDetected
        }
    }

    /// Witness threshold the class was tested against.
    pub fn threshold(self) -> f64 {
        match self {
            Detection::Steerable => 0.5,
            Detection::Nonseparable | Detection::NotDetected => 1.0,
        }
    }
}

impl std::fmt::Display for Detection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Detection::Steerable => write!(f, "steerable"),
            Detection::Nonseparable => write!(f, "nonseparable"),
            Detection::NotDetected => write!(f, "not_detected"),
        }
    }
}

/// Witness verdict for a single momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeClassification {
    /// Momentum in final-frame units.
    pub k: f64,
    /// Lower envelope of the normalized correlation.
    pub lower: f64,
    /// Upper envelope of the normalized correlation.
    pub upper: f64,
    /// Detection class of this mode.
    pub class: Detection,
    /// Distance of the lower envelope below the class threshold
    /// (negative for undetected modes).
    pub margin: f64,
}

/// Classification of a whole momentum grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EntanglementReport {
    /// Per-mode verdicts in the momentum order supplied.
    pub modes: Vec<ModeClassification>,
}

impl EntanglementReport {
    /// Momentum interval `[k_first, k_last]` of modes classified at least
    /// `Nonseparable`, if any.
    pub fn nonseparable_band(&self) -> Option<(f64, f64)> {
        self.band(|c| c.class != Detection::NotDetected)
    }

    /// Momentum interval of `Steerable` modes, if any.
    pub fn steerable_band(&self) -> Option<(f64, f64)> {
        self.band(|c| c.class == Detection::Steerable)
    }

    fn band(&self, pred: impl Fn(&ModeClassification) -> bool) -> Option<(f64, f64)> {
        let mut iter = self.modes.iter().filter(|c| pred(c));
        let first = iter.next()?;
        let last = iter.last().unwrap_or(first);
        Some((first.k, last.k))
    }
}

/// Classify `(k, lower, upper)` triples against the witness thresholds.
pub fn classify(points: &[(f64, f64, f64)]) -> EntanglementReport {
    let modes = points
        .iter()
        .map(|&(k, lower, upper)| {
            let class = Detection::from_lower(lower);
            ModeClassification {
                k,
                lower,
                upper,
                class,
                margin: class.threshold() - lower,
            }
        })
        .collect();
    EntanglementReport { modes }
}

/// Independent variable of a [`CorrelationSeries`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Proper time at fixed momentum.
    Time,
    /// Momentum at fixed observation time.
    Momentum,
}

/// One row of a correlation series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPoint {
    /// Abscissa (`tau` or `k` depending on the axis).
    pub x: f64,
    /// Full correlation including the vacuum weight.
    pub g2: f64,
    /// Normalized correlation (vacuum weight divided out).
    pub g2_normalized: f64,
    /// Lower/upper envelopes when meaningful for the series.
    pub envelope: Option<(f64, f64)>,
}

/// Validated container for a correlation scan.
///
/// Checks once, at construction: finite, strictly ascending abscissae;
/// non-negative correlations; ordered envelopes.  The normalized value may
/// transiently exceed its asymptotic envelopes mid-ramp, so containment is
/// deliberately not enforced here.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSeries {
    /// What the abscissa means.
    pub axis: Axis,
    /// Frame of momenta/times/energies in the series.
    pub frame: Frame,
    points: Vec<SeriesPoint>,
}

impl CorrelationSeries {
    /// Validated constructor.
    pub fn new(axis: Axis, frame: Frame, points: Vec<SeriesPoint>) -> Result<Self> {
        for p in &points {
            if !p.x.is_finite() || !p.g2.is_finite() || !p.g2_normalized.is_finite() {
                return Err(Error::Domain(format!("non-finite series point at x = {}", p.x)));
            }
            if p.g2 < -1e-12 || p.g2_normalized < -1e-12 {
                return Err(Error::Domain(format!(
                    "negative correlation g2 = {} at x = {}",
                    p.g2, p.x
                )));
            }
            if let Some((lo, hi)) = p.envelope {
                if !(lo.is_finite() && hi.is_finite()) || lo > hi + 1e-12 || lo < -1e-12 {
                    return Err(Error::Domain(format!(
                        "bad envelope ({lo}, {hi}) at x = {}",
                        p.x
                    )));
                }
            }
        }
        for pair in points.windows(2) {
            if pair[1].x <= pair[0].x {
                return Err(Error::Domain(format!(
                    "series abscissae must be strictly ascending: {} then {}",
                    pair[0].x, pair[1].x
                )));
            }
        }
        Ok(Self { axis, frame, points })
    }

    /// The validated rows.
    pub fn points(&self) -> &[SeriesPoint] {
        &self.points
    }
}
