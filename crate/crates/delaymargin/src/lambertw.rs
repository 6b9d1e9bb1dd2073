//! Lambert W function: real branches on their natural domains and the full
//! family of complex branches.
//!
//! `W_k(zeta)` denotes the branch-`k` solution of `z * e^z = zeta` under the
//! standard branch convention of Corless, Gonnet, Hare, Jeffrey & Knuth
//! (1996): `W_0` is real on `[-1/e, inf)`, `W_{-1}` real on `[-1/e, 0)`, and
//! away from the branch cuts `Im W_k` lies in (approximately)
//! `((2k - 1) pi, (2k + 1) pi)`, with cuts closed counterclockwise (a
//! negative real `zeta` is treated as lying on the upper side of the cut).
//!
//! All evaluations are Halley iterations from analytically chosen seeds
//! (near-zero series, branch-point series in `p = sqrt(2 (e zeta + 1))`,
//! and the asymptotic seed `L - log L` with `L = log zeta + 2 pi i k`),
//! followed by an a-posteriori branch-index verification.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Branch index of the Lambert W function: any integer, with `k = 0` the
/// principal branch and `k = -1` the other real-capable branch.
pub type BranchIndex = i32;

/// `-1/e`, the branch point where `W_0` and `W_{-1}` meet at `-1`.
pub(crate) fn branch_point() -> f64 {
    -(-1.0f64).exp()
}

/// Grace below `-1/e` within which real inputs are clamped to the branch
/// point rather than rejected (absorbs upstream rounding).
const BRANCH_POINT_SLACK: f64 = 1e-15;

/// Residual acceptance threshold, relative to `max(1, |zeta|)`.
const RESIDUAL_TOL: f64 = 1e-13;

const MAX_HALLEY: usize = 100;

/// Principal real branch `W_0: [-1/e, inf) -> [-1, inf)`.
///
/// The result `y` satisfies `y * e^y = x` with residual at most
/// `1e-13 * max(1, |x|)`.
///
/// # Errors
///
/// Rejects `x < -1/e - 1e-15` (inputs within the grace band are clamped to
/// the branch point) and non-finite input.
pub fn w0_real(x: f64) -> Result<f64> {
    let bp = branch_point();
    if !x.is_finite() || x < bp - BRANCH_POINT_SLACK {
        return Err(Error::domain(format!(
            "w0_real: x must be >= -1/e = {bp}, got {x}"
        )));
    }
    let x = x.max(bp);
    if x == bp {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    // Seed selection: branch-point series near -1/e, Maclaurin series near
    // 0, log-based seeds elsewhere; Halley does the rest.
    let seed = if x - bp < 0.3 {
        let p = (2.0 * ((1.0f64).exp() * x + 1.0)).sqrt();
        let s = branch_point_series(Complex64::new(p, 0.0)).re;
        if p < 1e-4 {
            return Ok(s);
        }
        s
    } else if x.abs() <= 0.3 {
        x * (1.0 - x + 1.5 * x * x)
    } else if x <= std::f64::consts::E {
        (1.0 + x).ln()
    } else {
        let l = x.ln();
        l - l.ln()
    };
    let y = halley_real(seed, x)?;
    Ok(y)
}

/// Secondary real branch `W_{-1}: [-1/e, 0) -> (-inf, -1]`.
///
/// The result `y` satisfies `y * e^y = x` with residual at most
/// `1e-13 * max(1, |x|)`.
///
/// # Errors
///
/// Rejects `x` outside `[-1/e, 0)` (a grace band of `1e-15` below `-1/e`
/// is clamped to the branch point).
pub fn wm1_real(x: f64) -> Result<f64> {
    let bp = branch_point();
    if !x.is_finite() || x < bp - BRANCH_POINT_SLACK || x >= 0.0 {
        return Err(Error::domain(format!(
            "wm1_real: x must lie in [-1/e, 0) = [{bp}, 0), got {x}"
        )));
    }
    let x = x.max(bp);
    if x == bp {
        return Ok(-1.0);
    }
    let seed = if x - bp < 0.3 {
        let p = (2.0 * ((1.0f64).exp() * x + 1.0)).sqrt();
        let s = branch_point_series(Complex64::new(-p, 0.0)).re;
        if p < 1e-4 {
            return Ok(s);
        }
        s
    } else {
        // ln(-x) - ln(-ln(-x)) is a uniformly good seed on (-1/e, 0).
        let l = (-x).ln();
        l - (-l).ln()
    };
    let y = halley_real(seed, x)?;
    Ok(y)
}

/// Branch-`k` complex Lambert W: the solution of `z * e^z = zeta` on branch
/// `k` of the standard convention, with residual at most
/// `1e-12 * max(1, |zeta|)`.
///
/// Real `zeta` on the real domains of `W_0` / `W_{-1}` delegates to the
/// real evaluators (so those results are exactly real), and conjugate
/// symmetry `W_{-k}(conj zeta) = conj(W_k(zeta))` holds bit-for-bit by
/// construction: inputs in the open lower half-plane are canonicalized
/// through conjugation.
///
/// # Errors
///
/// Rejects `zeta = 0` for `k != 0` (`W_0(0) = 0` is the only branch through
/// the origin) and reports a numerical failure if no seed converges.
pub fn wk_complex(k: BranchIndex, zeta: Complex64) -> Result<Complex64> {
    if !zeta.re.is_finite() || !zeta.im.is_finite() {
        return Err(Error::domain(format!(
            "wk_complex: zeta must be finite, got {zeta}"
        )));
    }
    if zeta == Complex64::new(0.0, 0.0) {
        if k == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(Error::domain(format!(
            "wk_complex: W_{k} has no finite value at zeta = 0"
        )));
    }
    // Canonicalize to the closed upper half-plane so that conjugate
    // symmetry is exact by construction.
    if zeta.im < 0.0 {
        return Ok(wk_complex(-k, zeta.conj())?.conj());
    }
    let bp = branch_point();
    // Real inputs on the real branch domains: delegate, keeping the result
    // exactly real.
    if zeta.im == 0.0 {
        if k == 0 && zeta.re >= bp - BRANCH_POINT_SLACK {
            return Ok(Complex64::new(w0_real(zeta.re)?, 0.0));
        }
        if k == -1 && zeta.re >= bp - BRANCH_POINT_SLACK && zeta.re < 0.0 {
            return Ok(Complex64::new(wm1_real(zeta.re)?, 0.0));
        }
    }

    let scale = zeta.norm().max(1.0);
    for seed in seed_ladder(k, zeta) {
        if !seed.re.is_finite() || !seed.im.is_finite() {
            continue;
        }
        if let Some(w) = halley_complex(seed, zeta) {
            // The measurable residual floor grows with |w|: evaluating
            // w e^w loses a phase ulp per unit of Im(w), so on far
            // branches the test must scale with the conditioning.
            let tol = RESIDUAL_TOL * scale * (1.0 + w.norm());
            if (w * w.exp() - zeta).norm() <= tol && branch_index_of(w, zeta) == k {
                return Ok(w);
            }
        }
    }
    Err(Error::numerical(format!(
        "wk_complex: Halley iteration failed to converge to branch {k} at zeta = {zeta}"
    )))
}

/// Branch-point expansion `W = -1 + p - p^2/3 + (11/72) p^3 + O(p^4)` with
/// `p = +-sqrt(2 (e zeta + 1))`; the sign of `p` selects the branch.
fn branch_point_series(p: Complex64) -> Complex64 {
    let p2 = p * p;
    Complex64::new(-1.0, 0.0) + p - p2 / 3.0 + p2 * p * (11.0 / 72.0)
}

/// Candidate seeds for branch `k` at `zeta` (upper half-plane), best first.
fn seed_ladder(k: BranchIndex, zeta: Complex64) -> Vec<Complex64> {
    let bp = branch_point();
    let mut seeds = Vec::new();
    let near_bp = (zeta - Complex64::new(bp, 0.0)).norm() < 0.3;
    if near_bp && (k == 0 || k == -1) {
        // W_0 and W_{-1} collide at the branch point on the upper side;
        // the expansion parameter's sign picks the branch.
        let p = (2.0 * ((1.0f64).exp() * zeta + 1.0)).sqrt();
        let p = if k == 0 { p } else { -p };
        seeds.push(branch_point_series(p));
    }
    if k == 0 {
        if zeta.norm() <= 0.05 {
            seeds.push(zeta * (Complex64::new(1.0, 0.0) - zeta + 1.5 * zeta * zeta));
        }
        let one_plus = Complex64::new(1.0, 0.0) + zeta;
        if zeta.norm() <= 2.0 && one_plus.norm() > 1e-6 {
            seeds.push(one_plus.ln());
        }
    }
    // Asymptotic seed L - log L with L the branch-k logarithm; also covers
    // |zeta| -> 0 for k != 0, where L has a large negative real part.
    let l = zeta.ln() + Complex64::new(0.0, TAU * k as f64);
    if l.norm() > 0.5 {
        seeds.push(l - l.ln());
    }
    seeds
}

/// Recovers the branch index from a converged value via
/// `Im w + Arg w = Arg zeta + 2 pi k` (the imaginary part of
/// `w + log w = log zeta + 2 pi i k`).
fn branch_index_of(w: Complex64, zeta: Complex64) -> i32 {
    ((w.im + w.arg() - zeta.arg()) / TAU).round() as i32
}

/// Halley iteration for `w e^w = x` over the reals.
fn halley_real(mut w: f64, x: f64) -> Result<f64> {
    let scale = x.abs().max(1.0);
    for _ in 0..MAX_HALLEY {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= 0.1 * RESIDUAL_TOL * scale {
            return Ok(w);
        }
        let fp = ew * (1.0 + w);
        // Halley: w <- w - f / (f' - f f''/(2 f')); f''/f' = (2+w)/(1+w).
        let denom = fp - f * (2.0 + w) / (2.0 * (1.0 + w));
        let step = f / denom;
        w -= step;
        if !w.is_finite() {
            break;
        }
        if step.abs() <= 1e-16 * (1.0 + w.abs()) {
            break;
        }
    }
    let resid = (w * w.exp() - x).abs();
    if w.is_finite() && resid <= RESIDUAL_TOL * scale {
        Ok(w)
    } else {
        Err(Error::numerical(format!(
            "lambert W real iteration stalled at w = {w} (residual {resid:.3e}) for x = {x}"
        )))
    }
}

/// Halley iteration for `w e^w = zeta` over the complexes; returns `None`
/// instead of an error so the caller can fall through the seed ladder.
fn halley_complex(mut w: Complex64, zeta: Complex64) -> Option<Complex64> {
    let scale = zeta.norm().max(1.0);
    for _ in 0..MAX_HALLEY {
        let ew = w.exp();
        let f = w * ew - zeta;
        if f.norm() <= 0.1 * RESIDUAL_TOL * scale {
            return Some(w);
        }
        let one_plus = Complex64::new(1.0, 0.0) + w;
        if one_plus.norm() < 1e-12 {
            return None;
        }
        let fp = ew * one_plus;
        let denom = fp - f * (Complex64::new(2.0, 0.0) + w) / (2.0 * one_plus);
        let step = f / denom;
        w -= step;
        if !w.re.is_finite() || !w.im.is_finite() {
            return None;
        }
        if step.norm() <= 1e-16 * (1.0 + w.norm()) {
            break;
        }
    }
    if (w * w.exp() - zeta).norm() <= RESIDUAL_TOL * scale * (1.0 + w.norm()) {
        Some(w)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn assert_close(x: f64, want: f64, tol: f64, what: &str) {
        assert!(
            (x - want).abs() <= tol,
            "{what}: got {x}, want {want} (diff {:.3e})",
            (x - want).abs()
        );
    }

    fn assert_close_c(z: Complex64, want: Complex64, tol: f64, what: &str) {
        assert!(
            (z - want).norm() <= tol,
            "{what}: got {z}, want {want} (diff {:.3e})",
            (z - want).norm()
        );
    }

    #[test]
    fn w0_real_special_points() {
        assert_eq!(w0_real(0.0).unwrap(), 0.0);
        assert_eq!(w0_real(branch_point()).unwrap(), -1.0);
        assert_close(w0_real((1.0f64).exp()).unwrap(), 1.0, 1e-14, "W0(e)");
    }

    #[test]
    fn w0_real_frozen_values() {
        // Reference values computed with 40-digit arithmetic.
        assert_close(w0_real(1.0).unwrap(), 0.5671432904097839, 1e-13, "W0(1)");
        assert_close(
            w0_real(0.01).unwrap(),
            0.009901473843595012,
            1e-14,
            "W0(0.01)",
        );
        assert_close(
            w0_real(-0.2).unwrap(),
            -0.2591711018190737,
            1e-13,
            "W0(-0.2)",
        );
    }

    #[test]
    fn w0_real_domain() {
        let bp = branch_point();
        // Grace band below the branch point is clamped, beyond is rejected.
        assert_eq!(w0_real(bp - 1e-16).unwrap(), -1.0);
        assert!(w0_real(bp - 1e-13).is_err());
        assert!(w0_real(f64::NAN).is_err());
        assert!(w0_real(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn w0_real_residual_sweep() {
        let mut x = branch_point() + 1e-12;
        let mut steps = 0;
        while x < 1e6 {
            let y = w0_real(x).unwrap();
            let resid = (y * y.exp() - x).abs();
            assert!(
                resid <= 1e-13 * x.abs().max(1.0),
                "residual {resid:.3e} too large at x = {x}"
            );
            assert!(y >= -1.0);
            x = if x < 0.0 { x * 0.5 } else { (x + 1e-3) * 1.7 };
            steps += 1;
        }
        assert!(steps > 30);
    }

    #[test]
    fn wm1_real_special_points() {
        assert_eq!(wm1_real(branch_point()).unwrap(), -1.0);
        let x = -2.0 * (-2.0f64).exp();
        assert_close(wm1_real(x).unwrap(), -2.0, 1e-13, "Wm1(-2 e^-2)");
    }

    #[test]
    fn wm1_real_frozen_values() {
        assert_close(
            wm1_real(-0.01).unwrap(),
            -6.472775124394005,
            1e-12,
            "Wm1(-0.01)",
        );
        assert_close(
            wm1_real(-0.1).unwrap(),
            -3.577152063957297,
            1e-12,
            "Wm1(-0.1)",
        );
        // Divergence toward 0-.
        let y = wm1_real(-1e-8).unwrap();
        assert!(y < -16.0, "Wm1(-1e-8) = {y} not < -16");
        assert_close(y, -21.48818394400980, 1e-10, "Wm1(-1e-8)");
    }

    #[test]
    fn wm1_real_domain() {
        assert!(wm1_real(0.0).is_err());
        assert!(wm1_real(0.1).is_err());
        assert!(wm1_real(-0.5).is_err());
        assert!(wm1_real(f64::NAN).is_err());
        assert_eq!(wm1_real(branch_point() - 1e-16).unwrap(), -1.0);
    }

    #[test]
    fn wm1_real_residual_sweep() {
        let mut x = branch_point() + 1e-12;
        while x < -1e-12 {
            let y = wm1_real(x).unwrap();
            let resid = (y * y.exp() - x).abs();
            assert!(
                resid <= 1e-13,
                "residual {resid:.3e} too large at x = {x}"
            );
            assert!(y <= -1.0);
            x *= 0.7;
        }
    }

    #[test]
    fn wk_frozen_values() {
        // Reference values computed with 40-digit arithmetic.
        let z = Complex64::new(2.0, 3.0);
        assert_close_c(
            wk_complex(0, z).unwrap(),
            Complex64::new(1.0900765344857908, 0.5301397207748388),
            1e-12,
            "W_0(2+3i)",
        );
        assert_close_c(
            wk_complex(1, z).unwrap(),
            Complex64::new(-0.4462717121285748, 5.6158833577598378),
            1e-12,
            "W_1(2+3i)",
        );
        assert_close_c(
            wk_complex(-1, z).unwrap(),
            Complex64::new(-0.0315828083898751, -3.7211079866370611),
            1e-12,
            "W_-1(2+3i)",
        );
        // Negative real axis, upper-side closure.
        assert_close_c(
            wk_complex(0, Complex64::new(-2.0, 0.0)).unwrap(),
            Complex64::new(0.1728160028399999, 1.6736864137408427),
            1e-12,
            "W_0(-2)",
        );
        assert_close_c(
            wk_complex(1, Complex64::new(-2.0, 0.0)).unwrap(),
            Complex64::new(-1.3607494244085734, 7.6785890798165937),
            1e-12,
            "W_1(-2)",
        );
        // W_0(-pi/2) = i pi/2 exactly.
        assert_close_c(
            wk_complex(0, Complex64::new(-std::f64::consts::FRAC_PI_2, 0.0)).unwrap(),
            Complex64::new(0.0, std::f64::consts::FRAC_PI_2),
            1e-13,
            "W_0(-pi/2)",
        );
    }

    #[test]
    fn wk_omega_constant() {
        let w = wk_complex(0, Complex64::new(1.0, 0.0)).unwrap();
        assert_close_c(
            w,
            Complex64::new(0.5671432904097839, 0.0),
            1e-13,
            "W_0(1)",
        );
        assert_eq!(w.im, 0.0, "W_0(1) must be exactly real");
    }

    #[test]
    fn wk_trivial_and_branch_one() {
        assert_close_c(
            wk_complex(0, Complex64::new(std::f64::consts::E, 0.0)).unwrap(),
            Complex64::new(1.0, 0.0),
            1e-13,
            "W_0(e)",
        );
        // k = 1 at zeta = 1: residual-checked, Im in (pi, 3 pi).
        let z = Complex64::new(1.0, 0.0);
        let w = wk_complex(1, z).unwrap();
        assert!((w * w.exp() - z).norm() <= 1e-12);
        assert!(w.im > PI && w.im < 3.0 * PI, "Im W_1(1) = {}", w.im);
    }

    #[test]
    fn wk_zero_input() {
        assert_eq!(
            wk_complex(0, Complex64::new(0.0, 0.0)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert!(wk_complex(1, Complex64::new(0.0, 0.0)).is_err());
        assert!(wk_complex(-1, Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn wk_residual_property() {
        // 1000 pseudo-random zeta with 1e-3 <= |zeta| <= 1e3 and |k| <= 8,
        // excluding the branch-cut neighborhood for |k| <= 1.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_1a3b);
        let mut checked = 0;
        while checked < 1000 {
            let log_r = rng.random_range(-3.0f64..3.0);
            let r = 10.0f64.powf(log_r);
            let th = rng.random_range(-PI..PI);
            let zeta = Complex64::from_polar(r, th);
            let k = rng.random_range(-8i32..=8);
            if k.abs() <= 1 && zeta.im.abs() < 1e-6 && zeta.re < 0.0 {
                continue;
            }
            let w = wk_complex(k, zeta).unwrap();
            let resid = (w * w.exp() - zeta).norm();
            assert!(
                resid <= 1e-12 * zeta.norm().max(1.0),
                "residual {resid:.3e} at k = {k}, zeta = {zeta}"
            );
            checked += 1;
        }
    }

    #[test]
    fn wk_branch_separation() {
        for zeta in [
            Complex64::new(2.0, 3.0),
            Complex64::new(-0.1, 0.2),
            Complex64::new(5.0, 0.0),
            Complex64::new(0.3, -0.7),
        ] {
            let mut prev = f64::NEG_INFINITY;
            for k in -3..=3 {
                let w = wk_complex(k, zeta).unwrap();
                assert!(
                    w.im > prev,
                    "Im W_k not increasing at k = {k}, zeta = {zeta}: {} <= {prev}",
                    w.im
                );
                prev = w.im;
            }
        }
    }

    #[test]
    fn wk_real_branch_consistency() {
        let bp = branch_point();
        let n = 200;
        for i in 1..n {
            let x = bp + (0.0 - bp) * i as f64 / n as f64 - 1e-9;
            if x >= 0.0 || x <= bp {
                continue;
            }
            let w0c = wk_complex(0, Complex64::new(x, 0.0)).unwrap();
            assert_eq!(w0c.im, 0.0);
            assert_close(w0c.re, w0_real(x).unwrap(), 1e-11, "W_0 real consistency");
            let wm1c = wk_complex(-1, Complex64::new(x, 0.0)).unwrap();
            assert_eq!(wm1c.im, 0.0);
            assert_close(
                wm1c.re,
                wm1_real(x).unwrap(),
                1e-11,
                "W_-1 real consistency",
            );
        }
    }

    #[test]
    fn wk_conjugate_symmetry_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0_1d5e);
        for _ in 0..200 {
            let zeta = Complex64::new(
                rng.random_range(-10.0f64..10.0),
                rng.random_range(0.001f64..10.0),
            );
            for k in -3..=3 {
                let a = wk_complex(-k, zeta.conj()).unwrap();
                let b = wk_complex(k, zeta).unwrap().conj();
                // Canonicalization makes this exact, well inside the 1e-11
                // contract.
                assert_eq!(a, b, "conjugate symmetry broken at k = {k}, zeta = {zeta}");
            }
        }
    }

    #[test]
    fn wk_near_branch_point_complex() {
        // Just above the branch point the three values of W_0, W_{-1}
        // must still satisfy the defining equation and stay distinct.
        let bp = branch_point();
        for eps in [1e-6, 1e-3, 1e-2] {
            let zeta = Complex64::new(bp, eps);
            let w0 = wk_complex(0, zeta).unwrap();
            let wm1 = wk_complex(-1, zeta).unwrap();
            assert!((w0 * w0.exp() - zeta).norm() <= 1e-12);
            assert!((wm1 * wm1.exp() - zeta).norm() <= 1e-12);
            assert!((w0 - wm1).norm() > 1e-4);
        }
    }
}
