//! Stability theory for the scalar delay characteristic equation
//!
//! ```text
//!     h(z; a, w, tau) = z + a - w * exp(-tau * z) = 0,
//! ```
//!
//! the characteristic equation of the linear delay differential equation
//! `x'(t) = -a x(t) + w x(t - tau)` with a single discrete delay `tau > 0`.
//! The crate answers the classical questions about this equation exactly
//! where exact answers exist and numerically where they do not:
//!
//! * **Classification** of a real coefficient pair `(a, w)` into the
//!   delay-independent stable / delay-dependent / never-stable regions, with
//!   the critical delay `tau_c` and the full ladder of imaginary-axis
//!   crossing delays in the delay-dependent case ([`stability`]).
//! * **Stability boundary curves** in the coefficient plane for a fixed
//!   delay: the classical real-coefficient boundary going back to
//!   Hayes (1950), its constant-phase analogue for complex `w`, and the
//!   D-partition boundary curves swept by purely imaginary roots
//!   ([`dpartition`]).
//! * **Root location**: every characteristic root is `(1/tau) W_k(tau w
//!   e^{tau a}) - a` for some branch `k` of the Lambert W function
//!   (Corless et al. 1996), which turns right-half-plane root enumeration
//!   into a finite branch sweep ([`roots`], [`lambertw`]), cross-checkable
//!   against an argument-principle winding count.
//! * **Direct simulation** of the underlying delay differential equation by
//!   the method of steps, as an independent, formula-free oracle
//!   ([`simulate`]).
//!
//! The scalar special functions these results are phrased in (the function
//! `theta * cot(theta)` and its phase-shifted relatives, their inverses, and
//! the derived radius functions) live in [`scalarfun`].
//!
//! # Conventions
//!
//! Throughout, `rho = |w|`, `psi = Arg(w)` in `(-pi, pi]`, and
//! `Omega = sqrt(|w|^2 - a^2)` is the crossing angular frequency defined for
//! `|a| < |w|`. Inputs outside a function's mathematical domain produce
//! [`Error::Domain`]; convergence or conditioning failures produce
//! [`Error::Numerical`].
//!
//! # Example
//!
//! ```
//! use delaymargin::{classify, critical_delay, is_stable, CoefficientPoint, RegionClass};
//! use num_complex::Complex64;
//!
//! // Pure negative feedback x'(t) = -x(t - tau): stable up to tau = pi/2.
//! let p = CoefficientPoint::new(0.0, Complex64::new(-1.0, 0.0));
//! assert_eq!(classify(&p), RegionClass::DelayDependent);
//! let tau_c = critical_delay(&p).unwrap();
//! assert!((tau_c - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
//! assert!(is_stable(0.0, Complex64::new(-1.0, 0.0), 1.5));
//! assert!(!is_stable(0.0, Complex64::new(-1.0, 0.0), 1.6));
//! ```

pub mod dpartition;
mod error;
pub mod lambertw;
pub mod roots;
pub mod scalarfun;
pub mod simulate;
pub mod stability;
mod types;

pub use error::{Error, Result};
pub use types::{
    AngleValue, BoundaryCurve, CharParams, CoefficientPoint, CrossingLabel, CurveKind, CurveLabel,
    CurveSample, DelayWindow, Envelope, FrequencyInterval, LadderEntry, RayCrossing, RegionClass,
    Root, RootSet, SimResult, SplitPoint, TauLadder, Verdict,
};

pub use dpartition::{
    critical_region_scan, gamma_curve, hayes_curve, interval_of, match_tau_label,
    match_tau_labels, ray_ordering, sakata_curve,
};
pub use roots::{char_value, count_roots_rect, crossing_derivative, envelopes, roots_right_of};
pub use simulate::{simulate, simulate_with_history, HistorySpec};
pub use stability::{
    angular_frequency, boundary_distance, classify, critical_delay, delay_window,
    hayes_region_test, is_stable, is_stable_complex, lambert_halfplane_test, matsunaga_delay,
    sakata_region_test, tau_ladder,
};
