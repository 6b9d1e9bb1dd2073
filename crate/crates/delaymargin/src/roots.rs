//! Characteristic-root location and verification.
//!
//! The characteristic function `h(z) = z + a - w e^{-tau z}` has its full
//! root set expressible through the Lambert function: substituting
//! `u = tau (z + a)` turns `h(z) = 0` into `u e^u = tau w e^{tau a}`, so
//! the roots are exactly
//!
//! ```text
//!     z_k = W_k(tau w e^{tau a}) / tau - a ,    k in Z.
//! ```
//!
//! [`roots_right_of`] enumerates the finitely many branches that can reach
//! a given right half-plane and polishes each root by Newton iteration on
//! `h`.  [`count_roots_rect`] is an independent oracle: it counts roots in
//! a rectangle by the argument principle, integrating `h'/h` along the
//! contour, and shares nothing with the Lambert route.
//! [`crossing_derivative`] evaluates the closed-form velocity of a purely
//! imaginary root as the delay varies, and [`envelopes`] the small-delay
//! bands confining the real parts of all roots.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lambertw::{branch_point, w0_real, wk_complex, wm1_real};
use crate::types::{CharParams, Envelope, Root, RootSet};

/// Two roots closer than this are reported once, as a double root.
const SEPARATION: f64 = 1e-8;

/// Residual bound defining an acceptable root: `|h(z)|` relative to
/// `max(1, |z| + |a| + |w|)`.
const RESIDUAL_TOL: f64 = 1e-9;

/// Contour samples per rectangle edge in the root-proximity check.
const CONTOUR_SAMPLES: u32 = 128;

/// Minimum allowed distance from a root to the counting contour.
const CONTOUR_CLEARANCE: f64 = 1e-7;

/// Total absolute tolerance on the raw contour integral of `h'/h`
/// (2 pi times the winding tolerance of 1e-3, split over four edges).
const WINDING_TOL: f64 = 2.0 * std::f64::consts::PI * 1e-3;

/// Maximum bisection depth of the adaptive edge quadrature.
const QUAD_MAX_DEPTH: u32 = 48;

/// 15-point Gauss-Legendre rule on [-1, 1].
const GL15: [(f64, f64); 15] = [
    (-0.987_992_518_020_485_43, 0.030_753_241_996_117_268),
    (-0.937_273_392_400_705_90, 0.070_366_047_488_108_125),
    (-0.848_206_583_410_427_22, 0.107_159_220_467_171_935),
    (-0.724_417_731_360_170_05, 0.139_570_677_926_154_314),
    (-0.570_972_172_608_538_85, 0.166_269_205_816_993_934),
    (-0.394_151_347_077_563_37, 0.186_161_000_015_562_211),
    (-0.201_194_093_997_434_52, 0.198_431_485_327_111_576),
    (0.0, 0.202_578_241_925_561_273),
    (0.201_194_093_997_434_52, 0.198_431_485_327_111_576),
    (0.394_151_347_077_563_37, 0.186_161_000_015_562_211),
    (0.570_972_172_608_538_85, 0.166_269_205_816_993_934),
    (0.724_417_731_360_170_05, 0.139_570_677_926_154_314),
    (0.848_206_583_410_427_22, 0.107_159_220_467_171_935),
    (0.937_273_392_400_705_90, 0.070_366_047_488_108_125),
    (0.987_992_518_020_485_43, 0.030_753_241_996_117_268),
];

fn check_char_tau(p: &CharParams, what: &str) -> Result<()> {
    if p.tau.is_finite() && p.tau > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{what}: delay must be positive and finite, got {}",
            p.tau
        )))
    }
}

/// The characteristic value `h(z) = z + a - w e^{-tau z}`.
pub fn char_value(p: &CharParams, z: Complex64) -> Complex64 {
    z + p.a - p.w * (-p.tau * z).exp()
}

/// The characteristic derivative `h'(z) = 1 + tau w e^{-tau z}`.
fn char_derivative(p: &CharParams, z: Complex64) -> Complex64 {
    Complex64::new(1.0, 0.0) + p.tau * p.w * (-p.tau * z).exp()
}

/// Polish a root candidate by Newton iteration on `h`, stopping at the
/// residual floor or when the iteration stops improving.
fn newton_refine(p: &CharParams, start: Complex64) -> (Complex64, f64) {
    let mut z = start;
    let mut residual = char_value(p, z).norm();
    for _ in 0..12 {
        let scale = 1.0f64.max(z.norm() + p.a.norm() + p.w.norm());
        if residual <= 1e-14 * scale {
            break;
        }
        let derivative = char_derivative(p, z);
        if derivative.norm() == 0.0 {
            break;
        }
        let next = z - char_value(p, z) / derivative;
        let next_residual = char_value(p, next).norm();
        if next_residual < residual {
            z = next;
            residual = next_residual;
        } else {
            break;
        }
    }
    (z, residual)
}

/// All characteristic roots with `Re(z) >= sigma_min`, via Lambert branch
/// enumeration.
///
/// Any root in that half-plane satisfies the disk bound
/// `|z| <= |a| + |w| e^{-tau sigma_min}`, so its Lambert image
/// `W = tau (z + a)` has bounded imaginary part and only finitely many
/// branches qualify; those are enumerated with two safety branches on each
/// side, mapped through `z_k = W_k(tau w e^{tau a}) / tau - a`, Newton
/// polished, filtered to the half-plane, and deduplicated.  Where two
/// branches coalesce (the Lambert branch point, a double characteristic
/// root) the root is reported once with multiplicity 2.  For `w = 0` the
/// characteristic function is entire linear and the single root `-a` is
/// returned directly.
///
/// Roots are ordered by decreasing real part, ties by increasing
/// imaginary part.
///
/// # Errors
///
/// Domain error for a non-positive or non-finite delay, a non-finite
/// `sigma_min`, or a half-plane so deep that the branch enumeration would
/// be unbounded; Lambert evaluation failures propagate.
pub fn roots_right_of(p: &CharParams, sigma_min: f64) -> Result<RootSet> {
    check_char_tau(p, "roots_right_of")?;
    if !sigma_min.is_finite() {
        return Err(Error::domain(format!(
            "roots_right_of: sigma_min must be finite, got {sigma_min}"
        )));
    }
    let mut set = RootSet::default();
    if p.w == Complex64::new(0.0, 0.0) {
        let z = -p.a;
        if z.re >= sigma_min {
            set.roots.push(Root {
                z,
                branch: 0,
                residual: char_value(p, z).norm(),
                multiplicity: 1,
            });
        }
        return Ok(set);
    }

    let radius = p.a.norm() + p.w.norm() * (-p.tau * sigma_min).exp();
    let im_bound = p.tau * (radius + p.a.im.abs());
    let branches = (im_bound / std::f64::consts::TAU).ceil() + 2.0;
    if !branches.is_finite() || branches > 2000.0 {
        return Err(Error::domain(format!(
            "roots_right_of: half-plane Re >= {sigma_min} requires enumerating \
             ~{branches} Lambert branches; raise sigma_min"
        )));
    }
    let k_max = branches as i32;

    let zeta = p.zeta();
    for k in -k_max..=k_max {
        let w_val = wk_complex(k, zeta)?;
        let candidate = w_val / p.tau - p.a;
        let (z, residual) = newton_refine(p, candidate);
        if z.re < sigma_min {
            continue;
        }
        let scale = 1.0f64.max(z.norm() + p.a.norm() + p.w.norm());
        if residual > RESIDUAL_TOL * scale {
            return Err(Error::numerical(format!(
                "roots_right_of: branch {k} root {z} kept residual {residual:.3e}"
            )));
        }
        match set
            .roots
            .iter_mut()
            .find(|root| (root.z - z).norm() <= SEPARATION)
        {
            Some(existing) => {
                // Two branches coalescing at the Lambert branch point: a
                // double characteristic root, reported once.
                existing.multiplicity = 2;
                if residual < existing.residual {
                    existing.z = z;
                    existing.residual = residual;
                }
            }
            None => set.roots.push(Root {
                z,
                branch: k,
                residual,
                multiplicity: 1,
            }),
        }
    }
    set.roots.sort_by(|x, y| {
        y.z.re
            .total_cmp(&x.z.re)
            .then(x.z.im.total_cmp(&y.z.im))
    });
    Ok(set)
}

/// Gauss-Legendre evaluation of `h'/h` along the straight segment from
/// `z0` to `z1`.
fn segment_integral(p: &CharParams, z0: Complex64, z1: Complex64) -> Complex64 {
    let center = 0.5 * (z0 + z1);
    let half = 0.5 * (z1 - z0);
    let mut sum = Complex64::new(0.0, 0.0);
    for &(node, weight) in &GL15 {
        let z = center + half * node;
        sum += weight * char_derivative(p, z) / char_value(p, z);
    }
    half * sum
}

/// Adaptive bisection of an edge until the local integral is resolved to
/// `tol`, splitting the tolerance with each level.
fn edge_integral(
    p: &CharParams,
    z0: Complex64,
    z1: Complex64,
    tol: f64,
    depth: u32,
) -> Result<Complex64> {
    let whole = segment_integral(p, z0, z1);
    let mid = 0.5 * (z0 + z1);
    let refined = segment_integral(p, z0, mid) + segment_integral(p, mid, z1);
    if (whole - refined).norm() <= tol {
        return Ok(refined);
    }
    if depth == 0 {
        return Err(Error::numerical(
            "count_roots_rect: contour quadrature did not converge".to_string(),
        ));
    }
    Ok(edge_integral(p, z0, mid, 0.5 * tol, depth - 1)?
        + edge_integral(p, mid, z1, 0.5 * tol, depth - 1)?)
}

/// Count characteristic roots inside an axis-aligned rectangle by the
/// argument principle.
///
/// The winding number of `h` around the boundary is computed as the
/// contour integral of `h'/h` with `h'(z) = 1 + tau w e^{-tau z}`, by
/// adaptive composite Gauss-Legendre quadrature per edge, refined until
/// the estimate stabilizes within `1e-3`; the result must land within
/// `0.25` of an integer.  The routine shares no machinery with
/// [`roots_right_of`] and serves as its independent check.  Roots are
/// counted with multiplicity.
///
/// # Errors
///
/// Domain error for an empty or non-finite rectangle or non-positive
/// delay, or when a root lies within `1e-7` of the contour (detected by
/// sampling the Newton step `|h| / |h'|` along the edges); numerical error
/// when the quadrature fails to converge or the winding estimate is not
/// close to an integer.
pub fn count_roots_rect(
    p: &CharParams,
    re_range: (f64, f64),
    im_range: (f64, f64),
) -> Result<usize> {
    check_char_tau(p, "count_roots_rect")?;
    let (re_lo, re_hi) = re_range;
    let (im_lo, im_hi) = im_range;
    if !(re_lo.is_finite() && re_hi.is_finite() && im_lo.is_finite() && im_hi.is_finite())
        || re_lo >= re_hi
        || im_lo >= im_hi
    {
        return Err(Error::domain(format!(
            "count_roots_rect: invalid rectangle [{re_lo}, {re_hi}] x [{im_lo}, {im_hi}]"
        )));
    }
    let corners = [
        Complex64::new(re_lo, im_lo),
        Complex64::new(re_hi, im_lo),
        Complex64::new(re_hi, im_hi),
        Complex64::new(re_lo, im_hi),
    ];

    // Proximity check: a root within CONTOUR_CLEARANCE of the boundary
    // makes the winding ill-defined.  The Newton step length |h|/|h'|
    // estimates the distance to the nearest root.
    for edge in 0..4 {
        let z0 = corners[edge];
        let z1 = corners[(edge + 1) % 4];
        for i in 0..=CONTOUR_SAMPLES {
            let t = f64::from(i) / f64::from(CONTOUR_SAMPLES);
            let z = z0 + (z1 - z0) * t;
            let value = char_value(p, z);
            let derivative = char_derivative(p, z);
            if derivative.norm() > 0.0 && value.norm() <= CONTOUR_CLEARANCE * derivative.norm() {
                return Err(Error::domain(format!(
                    "count_roots_rect: a root lies within {CONTOUR_CLEARANCE:.0e} \
                     of the contour near {z}"
                )));
            }
        }
    }

    let mut integral = Complex64::new(0.0, 0.0);
    for edge in 0..4 {
        let z0 = corners[edge];
        let z1 = corners[(edge + 1) % 4];
        integral += edge_integral(p, z0, z1, 0.25 * WINDING_TOL, QUAD_MAX_DEPTH)?;
    }
    let winding = integral / Complex64::new(0.0, std::f64::consts::TAU);
    let count = winding.re.round();
    if (winding - count).norm() > 0.25 || count < 0.0 {
        return Err(Error::numerical(format!(
            "count_roots_rect: winding estimate {winding} is not a nonnegative integer"
        )));
    }
    Ok(count as usize)
}

/// The velocity `z'(s_0)` of a purely imaginary characteristic root
/// `z_0 = i omega0` as the delay varies, in closed form:
///
/// ```text
///     z'(s0) = omega0 (omega0 + Im a) / D
///              - i omega0 (s0 [(omega0 + Im a)^2 + (Re a)^2] + Re a) / D ,
///     D      = (1 + s0 Re a)^2 + [s0 (omega0 + Im a)]^2 .
/// ```
///
/// The sign of the real part equals the sign of
/// `omega0 (omega0 + Im a)`; in particular, for real `a` every crossing
/// moves rightward.  The value is checked against the equivalent compact
/// form `-z_0 (z_0 + a) / (1 + s0 (z_0 + a))` to `1e-9` before returning.
///
/// # Errors
///
/// Domain error if `omega0` is zero or any input is non-finite, or if
/// `1 + s0 (i omega0 + a) = 0` (a degenerate crossing, `h'(z_0) = 0`);
/// numerical error if the two evaluation routes disagree.
pub fn crossing_derivative(a: Complex64, omega0: f64, s0: f64) -> Result<Complex64> {
    if !(a.re.is_finite() && a.im.is_finite() && omega0.is_finite() && s0.is_finite()) {
        return Err(Error::domain(
            "crossing_derivative: inputs must be finite".to_string(),
        ));
    }
    if omega0 == 0.0 {
        return Err(Error::domain(
            "crossing_derivative: crossing frequency must be nonzero".to_string(),
        ));
    }
    let z0 = Complex64::new(0.0, omega0);
    let denom_root = Complex64::new(1.0, 0.0) + s0 * (z0 + a);
    let scale = 1.0 + s0.abs() * (omega0.abs() + a.norm());
    if denom_root.norm() <= 1e-14 * scale {
        return Err(Error::domain(format!(
            "crossing_derivative: degenerate crossing, h'(i omega0) = 0 \
             (1 + s0 (i omega0 + a) = {denom_root})"
        )));
    }

    let shifted = omega0 + a.im;
    let denom = (1.0 + s0 * a.re).powi(2) + (s0 * shifted).powi(2);
    let value = Complex64::new(
        omega0 * shifted / denom,
        -omega0 * (s0 * (shifted * shifted + a.re * a.re) + a.re) / denom,
    );

    // Independent route: differentiate h(z(s); s) = 0 directly.
    let compact = -z0 * (z0 + a) / denom_root;
    if (value - compact).norm() > 1e-9 * value.norm().max(1.0) {
        return Err(Error::numerical(format!(
            "crossing_derivative: closed form {value} and direct form {compact} disagree"
        )));
    }
    Ok(value)
}

/// Small-delay envelopes for the real parts of all characteristic roots.
///
/// Under the smallness condition `tau |w| e^{tau |a|} < 1/e` every root
/// satisfies `Re(z) <= sigma_minus1` or
/// `sigma0_minus <= Re(z) <= sigma0_plus`, where
///
/// ```text
///     sigma0_plus  = W_0( tau |w| e^{-tau |a|}) / tau + |a| ,
///     sigma0_minus = W_0(-tau |w| e^{ tau |a|}) / tau - |a| ,
///     sigma_minus1 = W_-1(-tau |w| e^{ tau |a|}) / tau - |a| .
/// ```
///
/// As `tau -> 0` the principal band tightens to `[-(|a|+|w|), |a|+|w|]`
/// while `sigma_minus1 -> -infinity`.
///
/// # Errors
///
/// Domain error if `w = 0`, the delay is not positive and finite, or the
/// smallness condition fails — the message then reports the largest
/// admissible delay for these coefficients.
pub fn envelopes(p: &CharParams) -> Result<Envelope> {
    check_char_tau(p, "envelopes")?;
    if p.w == Complex64::new(0.0, 0.0) {
        return Err(Error::domain(
            "envelopes: delayed coefficient must be nonzero".to_string(),
        ));
    }
    let a_abs = p.a.norm();
    let w_abs = p.w.norm();
    let product = p.tau * w_abs * (p.tau * a_abs).exp();
    if !(product < -branch_point()) {
        let tau_bound = if a_abs > 0.0 {
            w0_real(a_abs / (w_abs * std::f64::consts::E))? / a_abs
        } else {
            1.0 / (std::f64::consts::E * w_abs)
        };
        return Err(Error::domain(format!(
            "envelopes: tau |w| e^(tau |a|) = {product:.6} >= 1/e; \
             the envelopes exist for tau < {tau_bound:.6}"
        )));
    }
    let envelope = Envelope {
        sigma0_plus: w0_real(p.tau * w_abs * (-p.tau * a_abs).exp())? / p.tau + a_abs,
        sigma0_minus: w0_real(-product)? / p.tau - a_abs,
        sigma_minus1: wm1_real(-product)? / p.tau - a_abs,
    };
    debug_assert!(envelope.sigma_minus1 <= envelope.sigma0_minus);
    debug_assert!(envelope.sigma0_minus <= envelope.sigma0_plus);
    Ok(envelope)
}
