//! Closed-form stability machinery for `z + a - w e^{-tau z} = 0`.
//!
//! For real `a` the coefficient plane splits into three regions:
//!
//! * **I** (delay-independent stable): `a >= |w|` and `a > Re(w)` — stable
//!   for every delay;
//! * **II** (delay-dependent): `w != 0` and `Re(w) < a < |w|` — stable
//!   exactly for `tau` below the critical delay `tau_c`;
//! * **III** (never stable): `a <= Re(w)`.
//!
//! In region II the delay axis carries a ladder of imaginary-axis crossing
//! delays `tau_n^{+-} = (psi_{+-} - arccos(a/|w|) + 2 n pi) / Omega` (with
//! `psi_{+-} = +-Arg(w)` and `Omega = sqrt(|w|^2 - a^2)`), interleaved
//! around the critical delay. The module also provides the direct stability
//! predicates: the real-coefficient (Hayes) and fixed-phase region tests
//! phrased through the radius functions of [`crate::scalarfun`], their
//! complex-`a` analogue, and the Lambert-W half-plane test they all factor
//! through.

use crate::error::{Error, Result};
use crate::scalarfun;
use crate::types::{
    CoefficientPoint, CrossingLabel, DelayWindow, LadderEntry, RegionClass, TauLadder,
};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, TAU};

/// Classifies a real-`a` coefficient pair into the three stability regions.
///
/// Total on real inputs: exactly one of the three tags applies. `w = 0`
/// degenerates to region I for `a > 0` and region III otherwise.
pub fn classify(p: &CoefficientPoint) -> RegionClass {
    let rho = p.rho();
    if p.a >= rho && p.a > p.w.re {
        RegionClass::DelayIndependentStable
    } else if p.a <= p.w.re {
        RegionClass::DelayIndependentUnstable
    } else {
        // Re(w) < a < |w| (and hence w != 0).
        RegionClass::DelayDependent
    }
}

/// Distance from `p` to the nearest classification boundary, measured as
/// the smallest slack among the defining inequalities (`a` against `|w|`,
/// `Re(w)`, and `-|w|`).
///
/// The region theorems are sharp, so classification itself uses exact
/// floating-point comparisons; sampling harnesses use this helper to stay
/// clear of the measure-zero boundary set where double rounding could flip
/// a verdict.
pub fn boundary_distance(p: &CoefficientPoint) -> f64 {
    let rho = p.rho();
    (p.a - rho)
        .abs()
        .min((p.a - p.w.re).abs())
        .min((p.a + rho).abs())
}

/// Angular crossing frequency `Omega = sqrt(|w|^2 - a^2)`.
///
/// # Errors
///
/// Rejects `|a| >= |w|` (no imaginary-axis crossing exists).
pub fn angular_frequency(p: &CoefficientPoint) -> Result<f64> {
    let rho = p.rho();
    if !(p.a.abs() < rho) {
        return Err(Error::domain(format!(
            "angular_frequency: need |a| < |w|, got a = {}, |w| = {rho}",
            p.a
        )));
    }
    Ok((rho * rho - p.a * p.a).sqrt())
}

/// Critical delay `tau_c` for a delay-dependent pair: the smallest delay at
/// which a characteristic root reaches the imaginary axis,
///
/// ```text
///     tau_c = (|Arg w| - arccos(a / |w|)) / Omega .
/// ```
///
/// The equivalent arccot expression `(|Arg w| - arccot(a / Omega)) / Omega`
/// is evaluated alongside and the two must agree to `1e-11`; disagreement
/// is reported as a numerical failure rather than silently returning
/// either value.
///
/// # Errors
///
/// Rejects pairs outside the delay-dependent region.
pub fn critical_delay(p: &CoefficientPoint) -> Result<f64> {
    if classify(p) != RegionClass::DelayDependent {
        return Err(Error::domain(format!(
            "critical_delay: ({}, {}) is not delay-dependent (need Re(w) < a < |w|)",
            p.a, p.w
        )));
    }
    let rho = p.rho();
    let psi = p.w.arg();
    let omega = angular_frequency(p)?;
    let via_arccos = (psi.abs() - (p.a / rho).acos()) / omega;
    let via_arccot = (psi.abs() - scalarfun::arccot(p.a / omega)?.radians) / omega;
    if (via_arccos - via_arccot).abs() > 1e-11 * via_arccos.abs().max(1.0) {
        return Err(Error::numerical(format!(
            "critical_delay: arccos and arccot forms disagree ({via_arccos} vs {via_arccot}) \
             at a = {}, w = {}",
            p.a, p.w
        )));
    }
    Ok(via_arccos)
}

/// The critical-delay expression in Matsunaga's parametrization
/// `w = -b e^{i theta}` with `b != 0` and `theta` in `[-pi/2, pi/2]`:
///
/// ```text
///     sgn(b) / sqrt(b^2 - a^2) * (arccos(-a / b) - |theta|) .
/// ```
///
/// The value equals the formal critical-delay expression at
/// `(a, -b e^{i theta})` whether or not that pair is delay-dependent (for
/// `b < 0` both can be negative); [`critical_delay`] is the domain-checked
/// interface.
///
/// # Errors
///
/// Rejects `b = 0`, `b^2 <= a^2`, and `theta` outside `[-pi/2, pi/2]`.
pub fn matsunaga_delay(b: f64, theta: f64, a: f64) -> Result<f64> {
    if b == 0.0 || !b.is_finite() {
        return Err(Error::domain(format!(
            "matsunaga_delay: b must be nonzero and finite, got {b}"
        )));
    }
    if !(theta.abs() <= FRAC_PI_2) {
        return Err(Error::domain(format!(
            "matsunaga_delay: theta must lie in [-pi/2, pi/2], got {theta}"
        )));
    }
    if !(b * b > a * a) {
        return Err(Error::domain(format!(
            "matsunaga_delay: need b^2 > a^2, got b = {b}, a = {a}"
        )));
    }
    let omega = (b * b - a * a).sqrt();
    Ok(b.signum() / omega * ((-a / b).acos() - theta.abs()))
}

/// The set of delays for which the equation is stable, as a window.
///
/// Region I gives every positive delay, region III none, and region II the
/// open interval up to the critical delay.
pub fn delay_window(p: &CoefficientPoint) -> DelayWindow {
    match classify(p) {
        RegionClass::DelayIndependentStable => DelayWindow::AllPositive,
        RegionClass::DelayIndependentUnstable => DelayWindow::Empty,
        RegionClass::DelayDependent => {
            // Delay-dependent classification guarantees the domain check
            // inside critical_delay passes; arccos/arccot disagreement
            // would still surface as a panic in debug builds via expect.
            DelayWindow::UpTo(
                critical_delay(p).expect("delay-dependent pair must have a critical delay"),
            )
        }
    }
}

/// Sign of the crossing frequency attached to a primary ladder label.
fn label_omega(label: CrossingLabel, psi: f64, omega: f64) -> f64 {
    match label {
        CrossingLabel::Critical => {
            if psi > 0.0 {
                omega
            } else {
                -omega
            }
        }
        CrossingLabel::Plus(_) => omega,
        CrossingLabel::Minus(_) => -omega,
    }
}

/// Precedence for choosing the primary label of coincident entries.
fn label_rank(label: CrossingLabel) -> (u8, u32) {
    match label {
        CrossingLabel::Critical => (0, 0),
        CrossingLabel::Plus(n) => (1, n),
        CrossingLabel::Minus(n) => (2, n),
    }
}

/// The ladder of imaginary-axis crossing delays up to index `n_max`.
///
/// Entries are sorted strictly increasing in `tau`. The critical delay
/// appears (labelled `Critical`) exactly when the pair is delay-dependent;
/// `Plus(n)` and `Minus(n)` carry the crossing frequencies `+Omega` and
/// `-Omega` respectively. For `Arg(w)` in `{0, pi}` the ladder degenerates:
/// coincident delays are emitted once, with the secondary label recorded on
/// the entry and both signed frequencies reported by
/// [`TauLadder::omegas_at`].
///
/// # Errors
///
/// Rejects `w = 0`, `|a| >= |w|`, and `n_max = 0`.
pub fn tau_ladder(p: &CoefficientPoint, n_max: u32) -> Result<TauLadder> {
    if p.w == Complex64::new(0.0, 0.0) {
        return Err(Error::domain("tau_ladder: w must be nonzero".to_string()));
    }
    if n_max == 0 {
        return Err(Error::domain("tau_ladder: n_max must be >= 1".to_string()));
    }
    let omega = angular_frequency(p)?;
    let rho = p.rho();
    let psi = p.w.arg();
    let acos_term = (p.a / rho).acos();

    let mut candidates: Vec<(f64, CrossingLabel)> = Vec::new();
    if classify(p) == RegionClass::DelayDependent {
        candidates.push((critical_delay(p)?, CrossingLabel::Critical));
    }
    // Generate one index past n_max so that coincidences across the index
    // shift at Arg(w) = pi (tau_n^+ = tau_{n+1}^-) are still detected on
    // the retained entries.
    for n in 1..=(n_max + 1) {
        let shift = TAU * n as f64;
        candidates.push((
            (psi - acos_term + shift) / omega,
            CrossingLabel::Plus(n),
        ));
        candidates.push((
            (-psi - acos_term + shift) / omega,
            CrossingLabel::Minus(n),
        ));
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut entries: Vec<LadderEntry> = Vec::new();
    let mut i = 0;
    while i < candidates.len() {
        let mut group = vec![candidates[i]];
        while i + 1 < candidates.len()
            && (candidates[i + 1].0 - candidates[i].0).abs()
                <= 1e-12 * candidates[i].0.abs().max(1.0)
        {
            i += 1;
            group.push(candidates[i]);
        }
        i += 1;
        group.sort_by_key(|&(_, l)| label_rank(l));
        let (tau, primary) = group[0];
        let within_range = |l: CrossingLabel| match l {
            CrossingLabel::Critical => true,
            CrossingLabel::Plus(n) | CrossingLabel::Minus(n) => n <= n_max,
        };
        if !within_range(primary) {
            continue;
        }
        entries.push(LadderEntry {
            tau,
            label: primary,
            coincident: group.get(1).map(|&(_, l)| l),
            omega: label_omega(primary, psi, omega),
        });
    }
    Ok(TauLadder { entries })
}

/// Direct stability predicate for real `a`: true iff every characteristic
/// root has negative real part at delay `tau`.
///
/// Equivalent to `tau` lying in [`delay_window`]; evaluated directly from
/// the closed-form conditions (`a >= |w|` with `a != w`, or `|a| < |w|`
/// with `|Arg w| > arccos(a/|w|) + tau Omega`).
///
/// # Panics
///
/// Panics if `tau` is not strictly positive.
pub fn is_stable(a: f64, w: Complex64, tau: f64) -> bool {
    assert!(tau > 0.0, "is_stable: tau must be positive, got {tau}");
    let rho = w.norm();
    if a >= rho && !(w.im == 0.0 && w.re == a) {
        return true;
    }
    if a.abs() < rho {
        let omega = (rho * rho - a * a).sqrt();
        return w.arg().abs() > (a / rho).acos() + tau * omega;
    }
    false
}

/// `arccos(cos(x))` evaluated by exact period folding (no cancellation for
/// large `x`).
fn arccos_cos(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    y.min(TAU - y)
}

/// Stability predicate allowing complex `a`: true iff every root of
/// `z + a - w e^{-tau z}` has negative real part.
///
/// Holds iff `Re(a) > |w|`, or `-|w| < Re(a) <= |w|` together with
/// `arccos(cos(tau Im(a) + Arg w)) > arccos(Re(a)/|w|) +
/// tau sqrt(|w|^2 - Re(a)^2)`. For `w = 0` the answer is `Re(a) > 0`.
///
/// # Panics
///
/// Panics if `tau` is not strictly positive.
pub fn is_stable_complex(a: Complex64, w: Complex64, tau: f64) -> bool {
    assert!(
        tau > 0.0,
        "is_stable_complex: tau must be positive, got {tau}"
    );
    let rho = w.norm();
    if rho == 0.0 {
        return a.re > 0.0;
    }
    if a.re > rho {
        return true;
    }
    if a.re <= -rho {
        return false;
    }
    let lhs = arccos_cos(tau * a.im + w.arg());
    let rhs = (a.re / rho).acos() + tau * (rho * rho - a.re * a.re).max(0.0).sqrt();
    lhs > rhs
}

/// Half-plane test for the full Lambert W root set: true iff `Re(z) <
/// sigma` for every solution `z` of `z e^z = zeta`.
///
/// Holds iff `sigma e^sigma > |zeta|`, or `-|zeta| < sigma e^sigma <=
/// |zeta|` together with `|Arg zeta| > arccos(sigma e^sigma / |zeta|) +
/// sqrt((|zeta| e^{-sigma})^2 - sigma^2)`. With `zeta = tau w e^{tau a}`
/// and `sigma = tau Re(a)` this is exactly [`is_stable_complex`].
pub fn lambert_halfplane_test(zeta: Complex64, sigma: f64) -> bool {
    let m = zeta.norm();
    let se = sigma * sigma.exp();
    if se > m {
        return true;
    }
    if se <= -m {
        return false;
    }
    // -m < se <= m here, so the ratio is in (-1, 1] and the radicand is
    // nonnegative up to rounding.
    let r = m * (-sigma).exp();
    let radicand = (r * r - sigma * sigma).max(0.0);
    zeta.arg().abs() > (se / m).acos() + radicand.sqrt()
}

/// Region test for real coefficients (the classical Hayes criterion):
/// stability at delay `tau` holds iff `a > -1/tau` and
/// `-(1/tau) R(-tau a) < w < a`.
///
/// # Panics
///
/// Panics if `tau` is not strictly positive.
pub fn hayes_region_test(a: f64, w: f64, tau: f64) -> bool {
    assert!(
        tau > 0.0,
        "hayes_region_test: tau must be positive, got {tau}"
    );
    if !(a > -1.0 / tau) {
        return false;
    }
    // a > -1/tau makes -tau a < 1, so R is defined.
    let r = scalarfun::big_r(-tau * a).expect("argument below 1 by the guard above");
    -r / tau < w && w < a
}

/// Region test for complex `w` at fixed phase `phi = |Arg w|` in `(0, pi)`:
/// stability at delay `tau` in terms of the radius functions.
///
/// For `phi <= pi/2`: stable iff `a > 0` and `|w| < (1/tau) R(-tau a;
/// phi)`. For `phi > pi/2` the boundary folds, and stability holds iff
/// either `a >= 0` and `|w| < (1/tau) R_2(-tau a; phi)`, or `-M(phi)/tau <
/// a < 0` and `(1/tau) R_1(-tau a; phi) < |w| < (1/tau) R_2(-tau a; phi)`.
///
/// # Panics
///
/// Panics if `tau` is not strictly positive or if `w` lies on the real
/// axis (`phi` would degenerate to `0` or `pi`; use [`hayes_region_test`]
/// there).
pub fn sakata_region_test(a: f64, w: Complex64, tau: f64) -> bool {
    assert!(
        tau > 0.0,
        "sakata_region_test: tau must be positive, got {tau}"
    );
    assert!(
        w.im != 0.0,
        "sakata_region_test: w must lie off the real axis, got {w}"
    );
    let phi = w.arg().abs();
    let rho = w.norm();
    let r = -tau * a;
    if phi <= FRAC_PI_2 {
        if a <= 0.0 {
            return false;
        }
        // a > 0 makes r < 0, inside the domain of R(.; phi).
        let bound = scalarfun::big_r_phi(r, phi).expect("negative argument by the guard above");
        return rho < bound / tau;
    }
    let sp = scalarfun::split_point(phi).expect("phi in (pi/2, pi) for w off the real axis");
    if a >= 0.0 {
        let upper = scalarfun::big_r2(r, phi).expect("r <= 0 <= M(phi)");
        return rho < upper / tau;
    }
    if r < sp.m_phi {
        // -M(phi)/tau < a < 0: the annular band between the two branches.
        let lower = scalarfun::big_r1(r, phi).expect("0 < r < M(phi)");
        let upper = scalarfun::big_r2(r, phi).expect("0 < r < M(phi)");
        return lower / tau < rho && rho < upper / tau;
    }
    false
}
