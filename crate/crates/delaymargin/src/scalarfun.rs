//! Scalar special functions underlying the stability conditions.
//!
//! Everything here is elementary but load-bearing: the delay margins and
//! boundary curves of the other modules are phrased in terms of
//!
//! * `arccot`, the inverse of `cot` restricted to `(0, pi)`;
//! * `C(theta) = theta * cot(theta)` on `(0, pi)` (strictly decreasing from
//!   1 to `-inf`), its inverse `C^{-1}: (-inf, 1) -> (0, pi)`, and the
//!   radius function `R(r) = C^{-1}(r) / sin(C^{-1}(r))`;
//! * the phase-shifted family `C(theta; phi) = theta * cot(theta - phi)` on
//!   `[0, phi)`. For `phi <= pi/2` it is strictly decreasing with a single
//!   inverse; for `phi > pi/2` it rises to a fold at `theta = S(phi)` with
//!   peak value `M(phi) = cos^2(S(phi) - phi)` and falls to `-inf` after
//!   it, giving the two inverse branches `C_1^{-1}` (increasing, on
//!   `[0, M]`) and `C_2^{-1}` (decreasing, on `(-inf, M]`);
//! * the derived radius functions `R(r; phi)`, `R_1`, `R_2`, all of the
//!   form `-theta / sin(theta - phi)` with `theta` the matching inverse.
//!
//! All inverses are computed by bracketed bisection followed by secant
//! refinement to `1e-13` absolute tolerance in `theta`; the brackets never
//! evaluate the singular interval endpoints.

use crate::error::{Error, Result};
use crate::types::{AngleValue, SplitPoint};
use std::f64::consts::{FRAC_PI_2, PI};

/// Absolute tolerance in `theta` for every bracketed inverse solve.
const THETA_TOL: f64 = 1e-13;

/// Width below which bisection hands over to secant refinement.
const SECANT_HANDOVER: f64 = 1e-6;

/// Solves `g(theta) = 0` on the open bracket `(lo, hi)`.
///
/// `g` must be finite and strictly monotone on the open interval with a
/// sign change across its unique root; the endpoints themselves are never
/// evaluated (several callers have singularities there).
/// `g_positive_at_lo` states the sign of `g` just inside the left
/// endpoint. Bisection narrows the bracket, then secant steps (discarded
/// whenever they leave the bracket) polish the root; every evaluation also
/// tightens the bracket, so the hybrid cannot escape.
fn invert_monotone(g: impl Fn(f64) -> f64, lo0: f64, hi0: f64, g_positive_at_lo: bool) -> f64 {
    debug_assert!(lo0 < hi0);
    let (mut lo, mut hi) = (lo0, hi0);
    let mut last: Option<(f64, f64)> = None;
    let mut before_last: Option<(f64, f64)> = None;
    for _ in 0..140 {
        if hi - lo <= THETA_TOL {
            break;
        }
        let mut x = 0.5 * (lo + hi);
        if hi - lo <= SECANT_HANDOVER {
            if let (Some((x1, y1)), Some((x2, y2))) = (last, before_last) {
                if y1 != y2 {
                    let xs = x1 - y1 * (x1 - x2) / (y1 - y2);
                    if xs > lo && xs < hi {
                        x = xs;
                    }
                }
            }
        }
        let y = g(x);
        if y == 0.0 {
            return x;
        }
        if (y > 0.0) == g_positive_at_lo {
            lo = x;
        } else {
            hi = x;
        }
        before_last = last;
        last = Some((x, y));
        if let (Some((x1, _)), Some((x2, _))) = (last, before_last) {
            if hi - lo <= SECANT_HANDOVER && (x1 - x2).abs() <= 0.5 * THETA_TOL {
                return x1;
            }
        }
    }
    0.5 * (lo + hi)
}

/// Inverse cotangent with range `(0, pi)`.
///
/// # Errors
///
/// Rejects non-finite input.
pub fn arccot(x: f64) -> Result<AngleValue> {
    if !x.is_finite() {
        return Err(Error::domain(format!("arccot: input must be finite, got {x}")));
    }
    Ok(AngleValue::new(FRAC_PI_2 - x.atan()))
}

/// `C(theta) = theta * cot(theta)` on `(0, pi)`.
///
/// Strictly decreasing, with `C(theta) -> 1` as `theta -> 0` and
/// `C(theta) -> -inf` as `theta -> pi`. Small arguments are evaluated by
/// the series `1 - theta^2/3 - theta^4/45 - ...` to preserve the limit
/// accurately.
///
/// # Errors
///
/// Rejects `theta` outside the open interval `(0, pi)`.
pub fn big_c(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::domain(format!(
            "big_c: theta must lie in (0, pi), got {theta}"
        )));
    }
    if theta < 1e-4 {
        let t2 = theta * theta;
        return Ok(1.0 - t2 / 3.0 - t2 * t2 / 45.0);
    }
    Ok(theta * theta.cos() / theta.sin())
}

/// Inverse of [`big_c`]: the unique `theta` in `(0, pi)` with
/// `theta * cot(theta) = r`, defined for `r < 1` and strictly decreasing.
///
/// # Errors
///
/// Rejects `r >= 1` (the supremum `C(0+) = 1` is never attained) and
/// non-finite input.
pub fn big_c_inv(r: f64) -> Result<AngleValue> {
    if !(r < 1.0) {
        return Err(Error::domain(format!("big_c_inv: need r < 1, got {r}")));
    }
    if r == 0.0 {
        return Ok(AngleValue::new(FRAC_PI_2));
    }
    // C decreases from 1 to -inf on (0, pi), so C - r is positive near 0.
    let theta = invert_monotone(|t| big_c_raw(t) - r, 0.0, PI, true);
    Ok(AngleValue::new(theta))
}

/// [`big_c`] without the domain check, for solver internals.
fn big_c_raw(theta: f64) -> f64 {
    if theta < 1e-4 {
        let t2 = theta * theta;
        return 1.0 - t2 / 3.0 - t2 * t2 / 45.0;
    }
    theta * theta.cos() / theta.sin()
}

/// `R(r) = C^{-1}(r) / sin(C^{-1}(r))` for `r < 1`.
///
/// Equivalently `r / cos(C^{-1}(r))` for `r != 0`; the evaluation picks
/// whichever form keeps the denominator away from zero (`|r| <= 1` forces
/// `sin` large, `|r| > 1` forces `cos` large), so the result stays fully
/// accurate as `r -> -inf` where `theta -> pi`.
///
/// # Errors
///
/// Rejects `r >= 1` and non-finite input.
pub fn big_r(r: f64) -> Result<f64> {
    let theta = big_c_inv(r)?.radians;
    if r.abs() <= 1.0 {
        Ok(theta / theta.sin())
    } else {
        Ok(r / theta.cos())
    }
}

/// `C(theta; phi) = theta * cot(theta - phi)` for `0 <= theta < phi < pi`.
///
/// # Errors
///
/// Rejects arguments outside the stated domain.
pub fn big_c_phi(theta: f64, phi: f64) -> Result<f64> {
    check_phi_full(phi)?;
    if !(theta >= 0.0 && theta < phi) {
        return Err(Error::domain(format!(
            "big_c_phi: need 0 <= theta < phi, got theta = {theta}, phi = {phi}"
        )));
    }
    Ok(big_c_phi_raw(theta, phi))
}

fn big_c_phi_raw(theta: f64, phi: f64) -> f64 {
    let d = theta - phi;
    theta * d.cos() / d.sin()
}

/// The fold data `(S(phi), M(phi))` of `C(.; phi)` for `phi` in
/// `(pi/2, pi)`: `S(phi)` is the unique root of `sin(2 theta - 2 phi) =
/// 2 theta` in `(0, phi)` and `M(phi) = cos^2(S(phi) - phi)` the fold
/// value.
///
/// # Errors
///
/// Rejects `phi` outside `(pi/2, pi)`.
pub fn split_point(phi: f64) -> Result<SplitPoint> {
    if !(phi > FRAC_PI_2 && phi < PI) {
        return Err(Error::domain(format!(
            "split_point: need phi in (pi/2, pi), got {phi}"
        )));
    }
    // f(0) = -sin(2 phi) > 0 for phi in (pi/2, pi) and f is strictly
    // decreasing with f(phi) = -2 phi < 0, so the root is unique.
    let f = |t: f64| (2.0 * t - 2.0 * phi).sin() - 2.0 * t;
    let s_phi = invert_monotone(f, 0.0, phi, true);
    let c = (s_phi - phi).cos();
    Ok(SplitPoint {
        phi,
        s_phi,
        m_phi: c * c,
    })
}

fn check_phi_full(phi: f64) -> Result<()> {
    if !(phi > 0.0 && phi < PI) {
        return Err(Error::domain(format!(
            "phase phi must lie in (0, pi), got {phi}"
        )));
    }
    Ok(())
}

fn check_phi_upper(phi: f64) -> Result<SplitPoint> {
    if !(phi > FRAC_PI_2 && phi < PI) {
        return Err(Error::domain(format!(
            "phase phi must lie in (pi/2, pi) for the two-branch inverses, got {phi}"
        )));
    }
    split_point(phi)
}

/// Rising-branch inverse of `C(.; phi)` for `phi > pi/2`: the unique
/// `theta` in `[0, S(phi)]` with `C(theta; phi) = r`, defined for `r` in
/// `[0, M(phi)]` and strictly increasing in `r`.
///
/// # Errors
///
/// Rejects `r` outside `[0, M(phi)]` and `phi` outside `(pi/2, pi)`.
pub fn big_c1_inv(r: f64, phi: f64) -> Result<AngleValue> {
    let sp = check_phi_upper(phi)?;
    if !(r >= 0.0 && r <= sp.m_phi) {
        return Err(Error::domain(format!(
            "big_c1_inv: need r in [0, M(phi)] = [0, {}], got {r}",
            sp.m_phi
        )));
    }
    if r == 0.0 {
        return Ok(AngleValue::new(0.0));
    }
    if r == sp.m_phi {
        return Ok(AngleValue::new(sp.s_phi));
    }
    // C(.; phi) rises from 0 to M on [0, S], so C - r is negative near 0.
    let g = |t: f64| big_c_phi_raw(t, phi) - r;
    Ok(AngleValue::new(invert_monotone(g, 0.0, sp.s_phi, false)))
}

/// Falling-branch inverse of `C(.; phi)` for `phi > pi/2`: the unique
/// `theta` in `[S(phi), phi)` with `C(theta; phi) = r`, defined for
/// `r <= M(phi)` and strictly decreasing in `r`.
///
/// # Errors
///
/// Rejects `r > M(phi)` and `phi` outside `(pi/2, pi)`.
pub fn big_c2_inv(r: f64, phi: f64) -> Result<AngleValue> {
    let sp = check_phi_upper(phi)?;
    if !(r <= sp.m_phi) {
        return Err(Error::domain(format!(
            "big_c2_inv: need r <= M(phi) = {}, got {r}",
            sp.m_phi
        )));
    }
    if r == sp.m_phi {
        return Ok(AngleValue::new(sp.s_phi));
    }
    let g = |t: f64| big_c_phi_raw(t, phi) - r;
    let hi = expand_toward_singularity(&g, sp.s_phi, phi, r)?;
    // C(.; phi) falls from M to -inf on [S, phi), so C - r is positive
    // near S.
    Ok(AngleValue::new(invert_monotone(g, sp.s_phi, hi, true)))
}

/// Single-branch inverse of `C(.; phi)` for `phi <= pi/2`: the unique
/// `theta` in `[0, phi)` with `C(theta; phi) = r`, defined for `r <= 0`
/// and strictly decreasing in `r`.
///
/// # Errors
///
/// Rejects `r > 0` and `phi` outside `(0, pi/2]`.
pub fn big_c_phi_inv(r: f64, phi: f64) -> Result<AngleValue> {
    if !(phi > 0.0 && phi <= FRAC_PI_2) {
        return Err(Error::domain(format!(
            "big_c_phi_inv: need phi in (0, pi/2], got {phi}"
        )));
    }
    if !(r <= 0.0) {
        return Err(Error::domain(format!(
            "big_c_phi_inv: need r <= 0 for phi <= pi/2, got {r}"
        )));
    }
    if r == 0.0 {
        return Ok(AngleValue::new(0.0));
    }
    let g = |t: f64| big_c_phi_raw(t, phi) - r;
    let hi = expand_toward_singularity(&g, 0.0, phi, r)?;
    Ok(AngleValue::new(invert_monotone(g, 0.0, hi, true)))
}

/// Moves the right bracket end toward the singular endpoint `phi`
/// (halving the remaining distance each step) until `g` goes below zero,
/// which must happen since `C(.; phi) -> -inf` there.
fn expand_toward_singularity(
    g: &impl Fn(f64) -> f64,
    lo: f64,
    phi: f64,
    r: f64,
) -> Result<f64> {
    let mut gap = 0.5 * (phi - lo);
    for _ in 0..1100 {
        let hi = phi - gap;
        if hi > lo && g(hi) < 0.0 {
            return Ok(hi);
        }
        gap *= 0.5;
    }
    Err(Error::numerical(format!(
        "could not bracket C(.; phi) = r near the singular endpoint (phi = {phi}, r = {r})"
    )))
}

/// `R(r; phi) = -C^{-1}(r; phi) / sin(C^{-1}(r; phi) - phi)` for
/// `phi <= pi/2` and `r <= 0`; strictly decreasing in `r` with
/// `R(0; phi) = 0`.
///
/// # Errors
///
/// As for [`big_c_phi_inv`].
pub fn big_r_phi(r: f64, phi: f64) -> Result<f64> {
    let theta = big_c_phi_inv(r, phi)?.radians;
    Ok(radius_from_theta(theta, phi, r))
}

/// Rising radius branch for `phi > pi/2`: `R_1(r; phi)` on `[0, M(phi)]`,
/// strictly increasing from 0 to `sqrt(M(phi))`.
///
/// # Errors
///
/// As for [`big_c1_inv`].
pub fn big_r1(r: f64, phi: f64) -> Result<f64> {
    let theta = big_c1_inv(r, phi)?.radians;
    Ok(radius_from_theta(theta, phi, r))
}

/// Falling radius branch for `phi > pi/2`: `R_2(r; phi)` on
/// `(-inf, M(phi)]`, strictly decreasing from `+inf` to `sqrt(M(phi))`,
/// with `R_2(0; phi) = phi - pi/2`.
///
/// # Errors
///
/// As for [`big_c2_inv`].
pub fn big_r2(r: f64, phi: f64) -> Result<f64> {
    let theta = big_c2_inv(r, phi)?.radians;
    Ok(radius_from_theta(theta, phi, r))
}

/// `-theta / sin(theta - phi)`, switching to the equivalent
/// `-r / cos(theta - phi)` when `|r| > 1`.
///
/// The angle form is exact at `r = 0` (where the falling branch has
/// `theta - phi = -pi/2` and the `r`-form is 0/0), while the `r`-form
/// stays accurate as `theta -> phi` where the sine vanishes; `|r| = 1`
/// separates the regimes with both denominators provably bounded away
/// from zero.
fn radius_from_theta(theta: f64, phi: f64, r: f64) -> f64 {
    let d = theta - phi;
    if r.abs() <= 1.0 {
        -theta / d.sin()
    } else {
        -r / d.cos()
    }
}
