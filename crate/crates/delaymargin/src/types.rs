//! Shared value types for the crate's public API.

use num_complex::Complex64;
use std::fmt;

/// An angle in radians produced by one of the inverse scalar functions.
///
/// The invariant interval depends on the producing function: `arccot` and
/// the inverse of `theta * cot(theta)` return values in `(0, pi)`, the
/// phase-shifted inverses return values in `[0, phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleValue {
    /// The angle in radians.
    pub radians: f64,
}

impl AngleValue {
    pub(crate) fn new(radians: f64) -> Self {
        AngleValue { radians }
    }
}

/// The fold data of the phase-shifted boundary for a phase `phi > pi/2`.
///
/// `s_phi` is the unique solution of `sin(2 theta - 2 phi) = 2 theta` in
/// `(0, phi)`; it splits `[0, phi)` into the two monotone pieces of
/// `theta * cot(theta - phi)`. `m_phi = cos^2(s_phi - phi)` is the shared
/// extreme value of both pieces, i.e. the fold ordinate of the boundary
/// curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitPoint {
    /// The phase `phi` in `(pi/2, pi)`.
    pub phi: f64,
    /// Split angle `S(phi)`, in `(0, phi - pi/2)`.
    pub s_phi: f64,
    /// Peak value `M(phi) = cos^2(S(phi) - phi)`, in `(0, 1)`.
    pub m_phi: f64,
}

/// A real-`a`, complex-`w` coefficient pair of the delay equation
/// `x'(t) = -a x(t) + w x(t - tau)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientPoint {
    /// Instantaneous coefficient (real).
    pub a: f64,
    /// Delayed coefficient.
    pub w: Complex64,
}

impl CoefficientPoint {
    pub fn new(a: f64, w: Complex64) -> Self {
        CoefficientPoint { a, w }
    }

    /// Convenience constructor from the polar data `(a, rho, psi)` of `w`.
    pub fn from_polar(a: f64, rho: f64, psi: f64) -> Self {
        CoefficientPoint {
            a,
            w: Complex64::from_polar(rho, psi),
        }
    }

    /// Modulus `rho = |w|`.
    pub fn rho(&self) -> f64 {
        self.w.norm()
    }

    /// Principal argument `psi = Arg(w)` in `(-pi, pi]`, or `None` for
    /// `w = 0` where the argument is undefined.
    pub fn psi(&self) -> Option<f64> {
        if self.w == Complex64::new(0.0, 0.0) {
            None
        } else {
            Some(self.w.arg())
        }
    }

    /// Absolute phase `phi = |Arg(w)|` in `[0, pi]`, or `None` for `w = 0`.
    pub fn phi(&self) -> Option<f64> {
        self.psi().map(f64::abs)
    }
}

/// Stability class of a coefficient pair, following the trichotomy of the
/// delay interval `T(a, w) = { tau > 0 : asymptotically stable }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionClass {
    /// Region I: stable for every delay (`T = (0, inf)`);
    /// holds iff `a >= |w|` and `a > Re(w)`.
    DelayIndependentStable,
    /// Region II: stable exactly for `tau < tau_c` (`T = (0, tau_c)`);
    /// holds iff `w != 0` and `Re(w) < a < |w|`.
    DelayDependent,
    /// Region III: unstable for every delay (`T` empty);
    /// holds iff `a <= Re(w)`.
    DelayIndependentUnstable,
}

impl RegionClass {
    /// Classical roman-numeral name of the region.
    pub fn as_roman(&self) -> &'static str {
        match self {
            RegionClass::DelayIndependentStable => "I",
            RegionClass::DelayDependent => "II",
            RegionClass::DelayIndependentUnstable => "III",
        }
    }
}

impl fmt::Display for RegionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_roman())
    }
}

/// The set of delays for which the equation is asymptotically stable,
/// which is always of one of these three forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DelayWindow {
    /// Stable for every `tau > 0`.
    AllPositive,
    /// Stable for no `tau > 0`.
    Empty,
    /// Stable exactly for `0 < tau < tau_c` (the payload is `tau_c`).
    UpTo(f64),
}

impl fmt::Display for DelayWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DelayWindow::AllPositive => f.write_str("all"),
            DelayWindow::Empty => f.write_str("none"),
            DelayWindow::UpTo(tau_c) => write!(f, "(0, {tau_c})"),
        }
    }
}

/// Label of an imaginary-axis crossing delay.
///
/// `Critical` is the first crossing `tau_c` (defined only in the
/// delay-dependent region); `Plus(n)`/`Minus(n)` are the members
/// `tau_n^+`/`tau_n^-` (`n >= 1`) of the crossing ladder, at which the
/// crossing root is `+i Omega` / `-i Omega` respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrossingLabel {
    Critical,
    Plus(u32),
    Minus(u32),
}

impl fmt::Display for CrossingLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossingLabel::Critical => f.write_str("critical"),
            CrossingLabel::Plus(n) => write!(f, "+{n}"),
            CrossingLabel::Minus(n) => write!(f, "-{n}"),
        }
    }
}

/// One rung of the crossing-delay ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderEntry {
    /// The crossing delay.
    pub tau: f64,
    /// Primary label of this delay value.
    pub label: CrossingLabel,
    /// Secondary label when two ladder members coincide (which happens
    /// exactly for real `w`: `psi = 0` pairs `tau_n^+` with `tau_n^-`,
    /// `psi = pi` pairs `tau_c` with `tau_1^-` and `tau_n^+` with
    /// `tau_{n+1}^-`).
    pub coincident: Option<CrossingLabel>,
    /// Signed crossing frequency of the primary label: the root entering
    /// the axis at this delay is `i * omega`. (`+Omega` for `Plus` and for
    /// `Critical` with `psi > 0`; `-Omega` for `Minus` and for `Critical`
    /// with `psi < 0`. A coincident label contributes the mirrored root,
    /// see [`TauLadder::omegas_at`].)
    pub omega: f64,
}

/// The increasing ladder of crossing delays of a coefficient pair.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TauLadder {
    /// Entries in strictly increasing `tau` order.
    pub entries: Vec<LadderEntry>,
}

impl TauLadder {
    /// Both crossing frequencies of entry `i`: the primary one and, for a
    /// coincident entry, the one contributed by the secondary label.
    pub fn omegas_at(&self, i: usize) -> Vec<f64> {
        let e = &self.entries[i];
        match e.coincident {
            None => vec![e.omega],
            Some(_) => vec![e.omega, -e.omega],
        }
    }
}

/// Label of a D-partition boundary curve: the critical-delay curve or the
/// `k`-th crossing curve (`k != 0`; positive `k` maps to `tau_k^+`,
/// negative `k` to `tau_{-k}^-`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveLabel {
    Critical,
    Branch(i32),
}

impl fmt::Display for CurveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveLabel::Critical => f.write_str("critical"),
            CurveLabel::Branch(k) => write!(f, "{k:+}"),
        }
    }
}

impl From<CrossingLabel> for CurveLabel {
    fn from(l: CrossingLabel) -> Self {
        match l {
            CrossingLabel::Critical => CurveLabel::Critical,
            CrossingLabel::Plus(n) => CurveLabel::Branch(n as i32),
            CrossingLabel::Minus(n) => CurveLabel::Branch(-(n as i32)),
        }
    }
}

/// What a [`BoundaryCurve`] is a sample of.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveKind {
    /// Real-coefficient stability boundary (Hayes), `psi = pi`.
    Hayes,
    /// Constant-phase stability boundary for `phi = |Arg(w)|` in `(0, pi)`.
    Sakata,
    /// D-partition curve swept by a purely imaginary root.
    Gamma(CurveLabel),
}

/// One sample of a boundary curve in the `(a, rho)` half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    /// Parameter value that generated the sample (an angle `theta` for the
    /// stability boundaries, a signed `tau * Omega` product divided by
    /// `tau` — i.e. the signed frequency `Omega` — for D-partition curves).
    pub param: f64,
    /// Instantaneous coefficient.
    pub a: f64,
    /// Modulus coordinate: `w = rho * e^{i psi}` with the curve's phase.
    /// For the Hayes curve `psi = pi`, so the real coefficient is `-rho`.
    pub rho: f64,
}

/// A sampled boundary curve at fixed phase and delay.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub kind: CurveKind,
    /// Phase of `w` along the curve: `pi` for Hayes, `phi` in `(0, pi)`
    /// for the constant-phase boundary, signed `psi` for D-partition
    /// curves.
    pub psi: f64,
    /// Delay the curve belongs to.
    pub tau: f64,
    /// Samples with `param` strictly increasing.
    pub samples: Vec<CurveSample>,
}

/// An interval of `tau * Omega` values attached to a D-partition curve.
///
/// Every interval produced by this crate is open on both sides (the curves
/// diverge at the endpoints); the flags exist so the type can state that
/// explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyInterval {
    /// Lower endpoint.
    pub lo: f64,
    /// Upper endpoint.
    pub hi: f64,
    /// Whether `lo` itself belongs to the interval.
    pub lo_closed: bool,
    /// Whether `hi` itself belongs to the interval.
    pub hi_closed: bool,
}

impl FrequencyInterval {
    /// The open interval `(lo, hi)`.
    pub(crate) fn open(lo: f64, hi: f64) -> Self {
        FrequencyInterval {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

/// One crossing of a coefficient ray with the D-partition curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayCrossing {
    /// Scale factor: the ray point `s * (a, w)` lies on the labelled curve.
    pub s: f64,
    /// Curve met at this scale.
    pub label: CurveLabel,
    /// Second curve met at exactly the same scale (only for real `w`,
    /// i.e. `psi = 0` or `psi = pi`).
    pub coincident: Option<CurveLabel>,
}

/// Parameters of the characteristic function
/// `h(z) = z + a - w * exp(-tau * z)` with complex `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharParams {
    pub a: Complex64,
    pub w: Complex64,
    /// Delay, `tau > 0`.
    pub tau: f64,
}

impl CharParams {
    pub fn new(a: Complex64, w: Complex64, tau: f64) -> Self {
        CharParams { a, w, tau }
    }

    /// The Lambert argument `zeta = tau * w * exp(tau * a)`: the root set
    /// of the characteristic equation is `(1/tau) W(zeta) - a`.
    pub fn zeta(&self) -> Complex64 {
        self.tau * self.w * (self.tau * self.a).exp()
    }
}

/// A characteristic root found by branch enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    /// Root location.
    pub z: Complex64,
    /// Lambert branch index it came from.
    pub branch: i32,
    /// Final residual `|h(z)|`.
    pub residual: f64,
    /// Root multiplicity: 2 where two branches coalesce (the branch-point
    /// double root), otherwise 1.
    pub multiplicity: u32,
}

/// Roots found in a right half-plane, ordered by decreasing real part
/// (ties by increasing imaginary part).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RootSet {
    pub roots: Vec<Root>,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Root> {
        self.roots.iter()
    }
}

/// Small-delay envelopes for the real parts of all characteristic roots:
/// every root satisfies `Re(z) <= sigma_minus1` or
/// `sigma0_minus <= Re(z) <= sigma0_plus`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    /// Upper edge of the principal band, `-> |a| + |w|` as `tau -> 0`.
    pub sigma0_plus: f64,
    /// Lower edge of the principal band, `-> -(|a| + |w|)` as `tau -> 0`.
    pub sigma0_minus: f64,
    /// Everything below this is the secondary cluster, `-> -inf` as
    /// `tau -> 0`.
    pub sigma_minus1: f64,
}

/// Verdict of a direct simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Late-window amplitude fell below 0.9 of the mid-window amplitude.
    Decaying,
    /// Late-window amplitude exceeded 1.1 of the mid-window amplitude
    /// (or the state overflowed).
    Growing,
    /// Neither threshold was met over the given horizon.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Decaying => f.write_str("decaying"),
            Verdict::Growing => f.write_str("growing"),
            Verdict::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

/// Result of a direct simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult {
    /// Ratio of the final-window sup-amplitude to the mid-window
    /// sup-amplitude; `inf` if the state overflowed.
    pub decay_ratio: f64,
    pub verdict: Verdict,
}
