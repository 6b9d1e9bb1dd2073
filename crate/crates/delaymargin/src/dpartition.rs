//! Stability boundary curves of the coefficient plane.
//!
//! For the scalar delay equation with instantaneous coefficient `-a` and
//! delayed coefficient `w = rho e^{i psi}`, the boundary of the stable
//! region at a fixed delay is swept by coefficient pairs admitting a purely
//! imaginary characteristic root `i Omega`.  Writing `theta = tau * Omega`,
//! every boundary branch is a trigonometric curve in the `(a, rho)`
//! half-plane of a fixed phase `psi`:
//!
//! ```text
//!     a(theta)   = -theta cot(theta - psi) / tau ,
//!     rho(theta) = -theta / (tau sin(theta - psi)) ,
//! ```
//!
//! with `theta` ranging over one of the label-indexed frequency windows
//! returned by [`interval_of`].  [`gamma_curve`] samples these curves
//! directly; [`hayes_curve`] and [`sakata_curve`] produce the classical
//! real-coefficient boundary (`psi = pi`) and its fixed-phase
//! generalization, whose fold structure is governed by the scalar
//! functions in [`crate::scalarfun`].  [`match_tau_label`] and
//! [`ray_ordering`] invert the picture, identifying which curve a given
//! coefficient pair sits on and in which order a ray from the origin
//! crosses the curve family.
//!
//! All curves are sampled on Chebyshev-node grids: samples cluster
//! quadratically toward the interval endpoints, where the parametrizations
//! diverge, but never come closer than a fixed fraction of the interval
//! length.  Keeping clear of the endpoints is essential in double
//! precision: reconstructing `theta` from rounded `(a, rho)` coordinates
//! amplifies their rounding by `(rho / Omega)^2`, which grows as the
//! inverse square of the endpoint distance.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalarfun::split_point;
use crate::stability::{angular_frequency, critical_delay, tau_ladder};
use crate::types::{
    BoundaryCurve, CoefficientPoint, CurveKind, CurveLabel, CurveSample, FrequencyInterval,
    RayCrossing,
};

/// Fraction of the parameter-interval length kept clear of each endpoint.
const STANDOFF_FRACTION: f64 = 1e-4;

/// Relative tolerance for matching a delay against a crossing delay.
const MATCH_TOL: f64 = 1e-9;

/// Largest ladder index scanned when matching a delay to a curve label.
const MATCH_N_MAX: u32 = 64;

/// Tolerance for validating that a ray direction has the stated phase.
const PHASE_TOL: f64 = 1e-12;

fn check_tau(tau: f64, what: &str) -> Result<()> {
    if tau.is_finite() && tau > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{what}: delay must be positive and finite, got {tau}"
        )))
    }
}

fn check_samples(n_samples: usize, what: &str) -> Result<()> {
    if n_samples >= 2 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{what}: need at least 2 samples, got {n_samples}"
        )))
    }
}

fn check_psi(psi: f64, what: &str) -> Result<()> {
    if psi.is_finite() && -PI < psi && psi <= PI {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{what}: phase must lie in (-pi, pi], got {psi}"
        )))
    }
}

/// Chebyshev-node grid: `n` points strictly inside `(lo, hi)`, clustered
/// quadratically toward both endpoints but never closer to either than
/// `STANDOFF_FRACTION` of the interval length.
fn graded_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let standoff = STANDOFF_FRACTION * (hi - lo);
    let inner_lo = lo + standoff;
    let span = (hi - lo) - 2.0 * standoff;
    (0..n)
        .map(|i| {
            let half_angle = PI * (2 * i + 1) as f64 / (4 * n) as f64;
            let t = half_angle.sin().powi(2);
            inner_lo + t * span
        })
        .collect()
}

/// Hayes boundary coordinates at angle `theta`, as `(a, rho)`.
///
/// The delay enters only through the two final divisions, so the exact
/// scaling law `(a, rho)(tau) = (a, rho)(1) / tau` is preserved to the
/// last bit whenever the division by `tau` is exact (powers of two).
fn hayes_point(theta: f64, tau: f64) -> (f64, f64) {
    let rho_unit = theta / theta.sin();
    let a_unit = -(rho_unit * theta.cos());
    (a_unit / tau, rho_unit / tau)
}

/// Fixed-phase boundary coordinates at angle `theta`, as `(a, rho)`.
///
/// `v = theta - phase` stays in a half-period where `-theta / sin(v)` is
/// positive, and `a` is derived from `rho` by a single multiplication so
/// the pair inherits correlated rounding (their ratio `a / rho = cos(v)`
/// is accurate to a few ulps even where both coordinates are large).
fn phase_point(theta: f64, phase: f64, tau: f64) -> (f64, f64) {
    let v = theta - phase;
    let rho_unit = -(theta / v.sin());
    let a_unit = rho_unit * v.cos();
    (a_unit / tau, rho_unit / tau)
}

/// The stability boundary for real coefficient pairs at delay `tau`,
/// parametrized by `theta` in `(0, pi)`:
///
/// ```text
///     a(theta) = -theta cot(theta) / tau ,
///     w(theta) = -theta / (tau sin(theta))     (real, so rho = -w).
/// ```
///
/// Samples run from the `(-1/tau, -1/tau)` corner (`theta -> 0`) toward
/// `a -> +infinity` (`theta -> pi`), stored as `(theta, a, rho)` with
/// `w = -rho`; every sample satisfies `w < -|a|`.  Together with the ray
/// `w = a` on `[-1/tau, infinity)` this curve encloses the delay-`tau`
/// stable region of the real coefficient plane.
///
/// # Errors
///
/// Domain error if `tau` is not positive and finite or `n_samples < 2`.
pub fn hayes_curve(tau: f64, n_samples: usize) -> Result<BoundaryCurve> {
    check_tau(tau, "hayes_curve")?;
    check_samples(n_samples, "hayes_curve")?;
    let samples = graded_grid(0.0, PI, n_samples)
        .into_iter()
        .map(|theta| {
            let (a, rho) = hayes_point(theta, tau);
            CurveSample { param: theta, a, rho }
        })
        .collect();
    Ok(BoundaryCurve {
        kind: CurveKind::Hayes,
        psi: PI,
        tau,
        samples,
    })
}

/// The stability boundary at fixed phase `phi = Arg w` in `(0, pi)` and
/// delay `tau`, parametrized by `theta` in `(0, phi)`:
///
/// ```text
///     a(theta)   = -theta cot(theta - phi) / tau ,
///     rho(theta) = -theta / (tau sin(theta - phi)) .
/// ```
///
/// For `phi <= pi/2` the curve is the graph of a single radius function
/// over `a <= 0`; past the right angle it folds at `theta = S(phi)`,
/// reaching the minimal coefficient `a = -M(phi)/tau` at radius
/// `sqrt(M(phi))/tau` before turning back toward positive `a`.  When the
/// fold exists, the sample nearest the fold angle is replaced by the exact
/// fold point computed from [`split_point`], so the returned curve always
/// contains the fold.
///
/// # Errors
///
/// Domain error if `phi` lies outside the open interval `(0, pi)`, `tau`
/// is not positive and finite, or `n_samples < 2`.
pub fn sakata_curve(phi: f64, tau: f64, n_samples: usize) -> Result<BoundaryCurve> {
    if !(phi.is_finite() && 0.0 < phi && phi < PI) {
        return Err(Error::domain(format!(
            "sakata_curve: phase must lie strictly inside (0, pi), got {phi}"
        )));
    }
    check_tau(tau, "sakata_curve")?;
    check_samples(n_samples, "sakata_curve")?;
    let mut samples: Vec<CurveSample> = graded_grid(0.0, phi, n_samples)
        .into_iter()
        .map(|theta| {
            let (a, rho) = phase_point(theta, phi, tau);
            CurveSample { param: theta, a, rho }
        })
        .collect();
    if phi > FRAC_PI_2 {
        // Pin the node nearest the fold angle to the exact fold point: the
        // trigonometric parametrization rounds -tau*a slightly past M(phi)
        // there, and downstream radius inversions need r <= M to hold.
        let split = split_point(phi)?;
        let nearest = samples
            .iter()
            .enumerate()
            .min_by(|(_, s), (_, t)| {
                let ds = (s.param - split.s_phi).abs();
                let dt = (t.param - split.s_phi).abs();
                ds.total_cmp(&dt)
            })
            .map(|(i, _)| i)
            .expect("at least 2 samples");
        samples[nearest] = CurveSample {
            param: split.s_phi,
            a: -split.m_phi / tau,
            rho: split.m_phi.sqrt() / tau,
        };
    }
    Ok(BoundaryCurve {
        kind: CurveKind::Sakata,
        psi: phi,
        tau,
        samples,
    })
}

/// The frequency window carrying the labelled boundary branch: the range
/// of `theta = tau * Omega` realized on that branch at phase `psi`.
///
/// ```text
///     I_k(psi) = psi + 2 k pi + (-pi, 0)    for k >= 1,
///     I_k(psi) = psi + 2 k pi + (0, pi)     for k <= -1,
///     I_c(psi) = (0, psi)  or  (psi, 0)     by the sign of psi.
/// ```
///
/// All windows are open at both ends.
///
/// # Errors
///
/// Domain error if `psi` lies outside `(-pi, pi]`, if the label is
/// `Branch(0)` (branch indices are nonzero), or if the critical window is
/// requested at `psi = 0`, where it degenerates to the empty set: a
/// positive real delayed coefficient admits no critical crossing.
pub fn interval_of(label: CurveLabel, psi: f64) -> Result<FrequencyInterval> {
    check_psi(psi, "interval_of")?;
    match label {
        CurveLabel::Critical => {
            if psi == 0.0 {
                Err(Error::domain(
                    "interval_of: the critical window is empty at psi = 0".to_string(),
                ))
            } else if psi > 0.0 {
                Ok(FrequencyInterval::open(0.0, psi))
            } else {
                Ok(FrequencyInterval::open(psi, 0.0))
            }
        }
        CurveLabel::Branch(0) => Err(Error::domain(
            "interval_of: branch indices are nonzero".to_string(),
        )),
        CurveLabel::Branch(k) => {
            let base = psi + TAU * f64::from(k);
            if k >= 1 {
                Ok(FrequencyInterval::open(base - PI, base))
            } else {
                Ok(FrequencyInterval::open(base, base + PI))
            }
        }
    }
}

/// One branch of the boundary-curve family at phase `psi` and delay `tau`,
/// parametrized by the signed crossing frequency `Omega = theta / tau`
/// with `theta` sampled over the interior of [`interval_of`]`(label, psi)`.
///
/// Samples store `Omega` as `param` — negative on the `Branch(k <= -1)`
/// curves and on the critical curve for `psi < 0` — and satisfy `rho > 0`,
/// `|a| < rho`, and `rho^2 - a^2 = Omega^2`; the critical curve lies in
/// the delay-dependent cone `a > rho cos(psi)`.  Scaling the delay scales
/// the curve: `gamma_curve(label, psi, s tau)` equals
/// `gamma_curve(label, psi, tau) / s` samplewise.
///
/// # Errors
///
/// Domain error under the same conditions as [`interval_of`], or if `tau`
/// is not positive and finite, or `n_samples < 2`.
pub fn gamma_curve(
    label: CurveLabel,
    psi: f64,
    tau: f64,
    n_samples: usize,
) -> Result<BoundaryCurve> {
    check_tau(tau, "gamma_curve")?;
    check_samples(n_samples, "gamma_curve")?;
    let window = interval_of(label, psi)?;
    let samples = graded_grid(window.lo, window.hi, n_samples)
        .into_iter()
        .map(|theta| {
            let (a, rho) = phase_point(theta, psi, tau);
            CurveSample { param: theta / tau, a, rho }
        })
        .collect();
    Ok(BoundaryCurve {
        kind: CurveKind::Gamma(label),
        psi,
        tau,
        samples,
    })
}

/// All crossing delays of `p` with their curve labels, in matching
/// precedence order: the critical delay first (when `p` is
/// delay-dependent), then the plus and minus ladder delays for each index
/// `n = 1, ..., MATCH_N_MAX`.
fn crossing_candidates(p: &CoefficientPoint) -> Result<Vec<(f64, CurveLabel)>> {
    let omega = angular_frequency(p)?;
    let rho = p.rho();
    let psi = p.w.arg();
    let acos_term = (p.a / rho).acos();
    let mut candidates = Vec::with_capacity(1 + 2 * MATCH_N_MAX as usize);
    match critical_delay(p) {
        Ok(tau_c) => candidates.push((tau_c, CurveLabel::Critical)),
        Err(Error::Domain(_)) => {}
        Err(e) => return Err(e),
    }
    for n in 1..=MATCH_N_MAX {
        let shift = TAU * f64::from(n);
        let k = n as i32;
        candidates.push(((psi - acos_term + shift) / omega, CurveLabel::Branch(k)));
        candidates.push(((-psi - acos_term + shift) / omega, CurveLabel::Branch(-k)));
    }
    Ok(candidates)
}

fn delays_match(tau: f64, candidate: f64) -> bool {
    candidate > 0.0 && (tau - candidate).abs() <= MATCH_TOL * tau.max(candidate)
}

/// Identify the boundary branch through `p` at delay `tau`, if any.
///
/// Returns `Critical` when `tau` matches the critical delay of `p` to
/// `1e-9` relative accuracy, otherwise `Branch(n)` or `Branch(-n)` for
/// the smallest ladder index `n <= 64` whose crossing delay matches, and
/// `None` when no crossing delay of `p` equals `tau`.  Exactly at the
/// real-axis degeneracies two branches pass through the same point; the
/// precedence (critical first, then plus before minus) mirrors the
/// coincidence ordering of [`tau_ladder`], and [`match_tau_labels`]
/// returns the full set.
///
/// # Errors
///
/// Domain error if `tau` is not positive and finite or `p` lies outside
/// the open cone `|a| < |w|` (no purely imaginary root exists, so no
/// boundary branch passes through `p` at any delay).
pub fn match_tau_label(p: &CoefficientPoint, tau: f64) -> Result<Option<CurveLabel>> {
    check_tau(tau, "match_tau_label")?;
    Ok(crossing_candidates(p)?
        .into_iter()
        .find(|&(candidate, _)| delays_match(tau, candidate))
        .map(|(_, label)| label))
}

/// All boundary branches through `p` at delay `tau`, in matching
/// precedence order.
///
/// The list is empty when `tau` matches no crossing delay, holds a single
/// label in the generic case, and holds two exactly at the real-axis
/// coincidences: at `psi = 0` the delays of `Branch(n)` and `Branch(-n)`
/// collapse, and at `psi = pi` the critical delay meets `Branch(-1)` and
/// each `Branch(n)` meets `Branch(-(n+1))`.
///
/// # Errors
///
/// Same conditions as [`match_tau_label`].
pub fn match_tau_labels(p: &CoefficientPoint, tau: f64) -> Result<Vec<CurveLabel>> {
    check_tau(tau, "match_tau_labels")?;
    Ok(crossing_candidates(p)?
        .into_iter()
        .filter(|&(candidate, _)| delays_match(tau, candidate))
        .map(|(_, label)| label)
        .collect())
}

/// The ordered crossings of the ray `{ s * direction : s > 0 }` with the
/// boundary-curve family at phase `psi` and delay `tau`.
///
/// By the cone scaling law `tau_*(s a, s w) = tau_*(a, w) / s`, the ray
/// through `direction` meets the branch labelled `*` exactly at the scale
/// `s = tau_*(direction) / tau`; the returned crossings are those of the
/// delay ladder of `direction` up to index `n_max`, sorted by increasing
/// scale, with coincident branches (at `psi = 0` and `psi = pi`) merged
/// into a single crossing carrying the secondary label.  The critical
/// branch appears if and only if `direction` is delay-dependent.
///
/// # Errors
///
/// Domain error if `tau` is not positive and finite, `psi` lies outside
/// `(-pi, pi]`, `direction.w` is zero or its argument differs from `psi`
/// by more than `1e-12`, or `direction` lies outside the cone
/// `|a| < |w|`; the usual ladder restrictions (`n_max >= 1`) apply.
pub fn ray_ordering(
    psi: f64,
    tau: f64,
    direction: &CoefficientPoint,
    n_max: u32,
) -> Result<Vec<RayCrossing>> {
    check_tau(tau, "ray_ordering")?;
    check_psi(psi, "ray_ordering")?;
    match direction.psi() {
        Some(arg) if (arg - psi).abs() <= PHASE_TOL => {}
        Some(arg) => {
            return Err(Error::domain(format!(
                "ray_ordering: direction has phase {arg}, expected {psi}"
            )));
        }
        None => {
            return Err(Error::domain(
                "ray_ordering: direction must have a nonzero delayed coefficient".to_string(),
            ));
        }
    }
    let ladder = tau_ladder(direction, n_max)?;
    Ok(ladder
        .entries
        .iter()
        .map(|entry| RayCrossing {
            s: entry.tau / tau,
            label: CurveLabel::from(entry.label),
            coincident: entry.coincident.map(CurveLabel::from),
        })
        .collect())
}

/// Flag the grid points still stable at delay `tau` by virtue of a late
/// critical crossing.
///
/// Each grid entry is an `(a, rho)` pair interpreted at phase `psi`; the
/// returned triple carries `true` exactly when the point is
/// delay-dependent with critical delay exceeding `tau` — the region swept
/// by the shrunken critical curves `gamma_curve(Critical, psi, tau') / s`
/// over `s > 1`.  Points with no critical delay (outside the
/// delay-dependent cone, including `rho <= |a|`) are flagged `false`
/// rather than rejected, so coarse scans over rectangles need no
/// pre-filtering.
///
/// # Errors
///
/// Domain error if `tau` is not positive and finite or `psi` lies outside
/// `(-pi, pi]`.
pub fn critical_region_scan(
    psi: f64,
    tau: f64,
    grid: &[(f64, f64)],
) -> Result<Vec<(f64, f64, bool)>> {
    check_tau(tau, "critical_region_scan")?;
    check_psi(psi, "critical_region_scan")?;
    let mut flagged = Vec::with_capacity(grid.len());
    for &(a, rho) in grid {
        let p = CoefficientPoint::new(a, Complex64::from_polar(rho, psi));
        let keeps_stability = match critical_delay(&p) {
            Ok(tau_c) => tau_c > tau,
            Err(Error::Domain(_)) => false,
            Err(e) => return Err(e),
        };
        flagged.push((a, rho, keeps_stability));
    }
    Ok(flagged)
}
