//! Command-line interface to the `delaymargin` stability library.
//!
//! Subcommands cover the region classifier, the critical delay and its
//! equivalent closed forms, the crossing-delay ladder, boundary-curve
//! sampling, right-half-plane root enumeration, a seeded oracle
//! cross-check, and a stability grid sweep.
//!
//! Output conventions: JSON objects carry a `schema_version` field and
//! are printed on a single line with keys in sorted order; CSV output
//! has a single header row and LF line endings.  All numbers are
//! printed in the shortest representation that parses back to the exact
//! double, so identical invocations are byte-identical and data files
//! round-trip losslessly.  Exit codes: 0 on success, 1 on usage errors,
//! 2 on domain errors, 3 on numerical failures.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use delaymargin::{
    boundary_distance, classify, count_roots_rect, critical_delay, delay_window, gamma_curve,
    hayes_curve, is_stable, matsunaga_delay, roots_right_of, sakata_curve, scalarfun, simulate,
    tau_ladder, BoundaryCurve, CharParams, CoefficientPoint, CurveKind, CurveLabel, DelayWindow,
    Error, RegionClass, Verdict,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;

const SCHEMA_VERSION: u32 = 1;

/// Stability analysis of the delay equation x'(t) = -a x(t) + w x(t - tau).
#[derive(Parser)]
#[command(name = "delaymargin", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the coefficient pair into region I/II/III with its delay window.
    Classify {
        /// Real instantaneous coefficient a.
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        /// Delayed coefficient w as `re,im` (or a bare real).
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        w: Complex64,
    },
    /// Critical delay tau_c with the equivalent closed-form expressions.
    Tauc {
        /// Real instantaneous coefficient a.
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        /// Delayed coefficient w as `re,im` (or a bare real).
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        w: Complex64,
    },
    /// Crossing-delay ladder tau_n^± up to index n.
    Ladder {
        /// Real instantaneous coefficient a.
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        /// Delayed coefficient w as `re,im` (or a bare real).
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        w: Complex64,
        /// Highest ladder index.
        #[arg(long)]
        n: u32,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Sample a stability boundary curve in the (a, rho) half-plane.
    Curve {
        /// Which curve family to sample.
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Phase phi = |Arg w| in (0, pi); required for `sakata`.
        #[arg(long, allow_negative_numbers = true)]
        phi: Option<f64>,
        /// Phase psi = Arg w in (-pi, pi]; required for `gamma`.
        #[arg(long, allow_negative_numbers = true)]
        psi: Option<f64>,
        /// Delay tau > 0.
        #[arg(long)]
        tau: f64,
        /// Curve label for `gamma`: `c` (critical) or a nonzero integer k.
        #[arg(long, value_parser = parse_label, allow_hyphen_values = true)]
        label: Option<CurveLabel>,
        /// Number of samples along the curve (>= 2).
        #[arg(long)]
        samples: usize,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Characteristic roots with real part at least sigma-min.
    Roots {
        /// Complex instantaneous coefficient a as `re,im` (or a bare real).
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        a: Complex64,
        /// Delayed coefficient w as `re,im` (or a bare real).
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        w: Complex64,
        /// Delay tau > 0.
        #[arg(long)]
        tau: f64,
        /// Left edge of the reported half-plane.
        #[arg(long, allow_negative_numbers = true)]
        sigma_min: f64,
    },
    /// Cross-check closed-form stability, root counting, and simulation
    /// on a seeded random sample.
    Verify {
        /// Seed for the sample generator (identical runs are byte-identical).
        #[arg(long)]
        seed: u64,
        /// Number of sample points to draw.
        #[arg(long)]
        count: u64,
    },
    /// Stability grid over an (a, rho) rectangle at fixed psi and tau (CSV).
    Scan {
        /// Range for a as `lo,hi`.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        a_range: (f64, f64),
        /// Range for rho = |w| as `lo,hi` with lo >= 0.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        rho_range: (f64, f64),
        /// Phase Arg w in (-pi, pi].
        #[arg(long, allow_negative_numbers = true)]
        psi: f64,
        /// Delay tau > 0.
        #[arg(long)]
        tau: f64,
        /// Grid resolution as `n` (both axes) or `na,nrho`; each >= 2.
        #[arg(long, value_parser = parse_resolution)]
        resolution: (usize, usize),
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy)]
enum KindArg {
    Hayes,
    Sakata,
    Gamma,
}

/// Grid sweep specification for the `scan` command.
struct SweepSpec {
    a_range: (f64, f64),
    rho_range: (f64, f64),
    psi: f64,
    tau: f64,
    resolution: (usize, usize),
}

impl SweepSpec {
    fn validate(&self) -> Result<(), Error> {
        let ok_range = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && lo < hi;
        if !ok_range(self.a_range) || !ok_range(self.rho_range) {
            return Err(Error::domain(format!(
                "scan: ranges must be finite and non-degenerate, got a in {:?}, rho in {:?}",
                self.a_range, self.rho_range
            )));
        }
        if self.rho_range.0 < 0.0 {
            return Err(Error::domain(format!(
                "scan: rho range must be nonnegative, got lo = {}",
                self.rho_range.0
            )));
        }
        if self.resolution.0 < 2 || self.resolution.1 < 2 {
            return Err(Error::domain(format!(
                "scan: resolution must be at least 2 per axis, got {:?}",
                self.resolution
            )));
        }
        if !(self.psi > -PI && self.psi <= PI) {
            return Err(Error::domain(format!(
                "scan: psi must lie in (-pi, pi], got {}",
                self.psi
            )));
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::domain(format!(
                "scan: tau must be positive and finite, got {}",
                self.tau
            )));
        }
        Ok(())
    }
}

enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = !matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if usage {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Lib(Error::Domain(msg))) => {
            eprintln!("domain error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Lib(Error::Numerical(msg))) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Classify { a, w } => cmd_classify(a, w),
        Command::Tauc { a, w } => cmd_tauc(a, w),
        Command::Ladder { a, w, n, format } => cmd_ladder(a, w, n, format),
        Command::Curve {
            kind,
            phi,
            psi,
            tau,
            label,
            samples,
            format,
        } => cmd_curve(kind, phi, psi, tau, label, samples, format),
        Command::Roots {
            a,
            w,
            tau,
            sigma_min,
        } => cmd_roots(a, w, tau, sigma_min),
        Command::Verify { seed, count } => cmd_verify(seed, count),
        Command::Scan {
            a_range,
            rho_range,
            psi,
            tau,
            resolution,
        } => cmd_scan(SweepSpec {
            a_range,
            rho_range,
            psi,
            tau,
            resolution,
        }),
    }
}

// ---------------------------------------------------------------------------
// Flag value parsers
// ---------------------------------------------------------------------------

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{t}` is not a number"))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => Err(format!("`{s}` is not of the form `re` or `re,im`")),
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if let [lo, hi] = parts.as_slice() {
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{t}` is not a number"))
        };
        Ok((parse(lo)?, parse(hi)?))
    } else {
        Err(format!("`{s}` is not of the form `lo,hi`"))
    }
}

fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("`{t}` is not a positive integer"))
    };
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [n] => {
            let n = parse(n)?;
            Ok((n, n))
        }
        [na, nr] => Ok((parse(na)?, parse(nr)?)),
        _ => Err(format!("`{s}` is not of the form `n` or `na,nrho`")),
    }
}

fn parse_label(s: &str) -> Result<CurveLabel, String> {
    if s == "c" || s == "critical" {
        return Ok(CurveLabel::Critical);
    }
    match s.parse::<i32>() {
        Ok(0) | Err(_) => Err(format!(
            "`{s}` is not a curve label (`c` or a nonzero integer)"
        )),
        Ok(k) => Ok(CurveLabel::Branch(k)),
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_classify(a: f64, w: Complex64) -> Result<(), CliError> {
    let p = CoefficientPoint::new(a, w);
    let region = classify(&p);
    let window = match delay_window(&p) {
        DelayWindow::AllPositive => json!("all"),
        DelayWindow::Empty => json!("none"),
        DelayWindow::UpTo(tau_c) => json!({ "tau_below": tau_c }),
    };
    emit_json(&json!({
        "schema_version": SCHEMA_VERSION,
        "region": region.as_roman(),
        "window": window,
    }));
    Ok(())
}

fn cmd_tauc(a: f64, w: Complex64) -> Result<(), CliError> {
    let p = CoefficientPoint::new(a, w);
    let tau_c = critical_delay(&p)?;
    let rho = p.rho();
    let psi = w.arg();
    let omega = delaymargin::angular_frequency(&p)?;
    let via_arccos = (psi.abs() - (a / rho).acos()) / omega;
    let via_arccot = (psi.abs() - scalarfun::arccot(a / omega)?.radians) / omega;
    // Matsunaga's parametrization writes w = -b e^{i theta} with theta in
    // [-pi/2, pi/2]; the sign of b selects which half-turn absorbs the
    // phase.
    let (b, theta) = if psi.abs() >= FRAC_PI_2 {
        (rho, psi - PI.copysign(psi))
    } else {
        (-rho, psi)
    };
    let matsunaga = matsunaga_delay(b, theta, a)?;
    emit_json(&json!({
        "schema_version": SCHEMA_VERSION,
        "tau_c": tau_c,
        "arccos_form": via_arccos,
        "arccot_form": via_arccot,
        "matsunaga_form": matsunaga,
    }));
    Ok(())
}

fn cmd_ladder(a: f64, w: Complex64, n: u32, format: Format) -> Result<(), CliError> {
    let p = CoefficientPoint::new(a, w);
    let ladder = tau_ladder(&p, n)?;
    match format {
        Format::Json => {
            let entries: Vec<Value> = ladder
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "tau": e.tau,
                        "label": e.label.to_string(),
                        "omega": e.omega,
                        "coincident": e.coincident.map(|l| l.to_string()),
                    })
                })
                .collect();
            emit_json(&json!({
                "schema_version": SCHEMA_VERSION,
                "a": a,
                "w": { "re": w.re, "im": w.im },
                "n": n,
                "entries": entries,
            }));
        }
        Format::Csv => {
            let mut out = String::from("tau,label,omega,coincident\n");
            for e in &ladder.entries {
                let coincident = e.coincident.map(|l| l.to_string()).unwrap_or_default();
                out.push_str(&format!("{},{},{},{coincident}\n", e.tau, e.label, e.omega));
            }
            print!("{out}");
        }
    }
    Ok(())
}

fn cmd_curve(
    kind: KindArg,
    phi: Option<f64>,
    psi: Option<f64>,
    tau: f64,
    label: Option<CurveLabel>,
    samples: usize,
    format: Format,
) -> Result<(), CliError> {
    let reject = |flag: &str, kind: &str| {
        Err(CliError::Usage(format!(
            "--{flag} does not apply to --kind {kind}"
        )))
    };
    let curve = match kind {
        KindArg::Hayes => {
            if phi.is_some() {
                return reject("phi", "hayes");
            }
            if psi.is_some() {
                return reject("psi", "hayes");
            }
            if label.is_some() {
                return reject("label", "hayes");
            }
            hayes_curve(tau, samples)?
        }
        KindArg::Sakata => {
            if psi.is_some() {
                return reject("psi", "sakata");
            }
            if label.is_some() {
                return reject("label", "sakata");
            }
            let phi = phi.ok_or_else(|| {
                CliError::Usage("--kind sakata requires --phi".to_string())
            })?;
            sakata_curve(phi, tau, samples)?
        }
        KindArg::Gamma => {
            if phi.is_some() {
                return reject("phi", "gamma");
            }
            let psi = psi.ok_or_else(|| {
                CliError::Usage("--kind gamma requires --psi".to_string())
            })?;
            let label = label.ok_or_else(|| {
                CliError::Usage("--kind gamma requires --label".to_string())
            })?;
            gamma_curve(label, psi, tau, samples)?
        }
    };
    match format {
        Format::Json => emit_json(&curve_json(&curve)),
        Format::Csv => {
            let mut out = String::from("param,a,rho\n");
            for s in &curve.samples {
                out.push_str(&format!("{},{},{}\n", s.param, s.a, s.rho));
            }
            print!("{out}");
        }
    }
    Ok(())
}

fn curve_json(curve: &BoundaryCurve) -> Value {
    let (kind, label) = match curve.kind {
        CurveKind::Hayes => ("hayes", None),
        CurveKind::Sakata => ("sakata", None),
        CurveKind::Gamma(label) => ("gamma", Some(label.to_string())),
    };
    let samples: Vec<Value> = curve
        .samples
        .iter()
        .map(|s| json!({ "param": s.param, "a": s.a, "rho": s.rho }))
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "label": label,
        "psi": curve.psi,
        "tau": curve.tau,
        "samples": samples,
    })
}

fn cmd_roots(a: Complex64, w: Complex64, tau: f64, sigma_min: f64) -> Result<(), CliError> {
    let params = CharParams::new(a, w, tau);
    let set = roots_right_of(&params, sigma_min)?;
    let roots: Vec<Value> = set
        .iter()
        .map(|r| {
            json!({
                "re": r.z.re,
                "im": r.z.im,
                "branch": r.branch,
                "multiplicity": r.multiplicity,
                "residual": r.residual,
            })
        })
        .collect();
    emit_json(&json!({
        "schema_version": SCHEMA_VERSION,
        "sigma_min": sigma_min,
        "count": set.len(),
        "roots": roots,
    }));
    Ok(())
}

fn cmd_verify(seed: u64, count: u64) -> Result<(), CliError> {
    // Margin below which a drawn point is considered too close to a
    // stability boundary (in tau, against every ladder rung) or to a
    // region boundary (in the coefficient plane) to compare oracles.
    const MARGIN: f64 = 1e-3;
    // Simulation horizon in delay units: long enough that any point
    // with a meaningful stability margin leaves the dead band.
    const HORIZON_DELAYS: f64 = 60.0;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evaluated = 0u64;
    let mut skipped = 0u64;
    let mut stable_count = 0u64;
    let mut inconclusive = 0u64;
    let mut disagreements: Vec<Value> = Vec::new();

    for _ in 0..count {
        let a = rng.random_range(-3.0..=3.0);
        let rho = rng.random_range(0.0..=3.0);
        let psi = rng.random_range(-PI..PI);
        let tau = 5.0 - rng.random_range(0.0..5.0);
        let w = Complex64::from_polar(rho, psi);
        let p = CoefficientPoint::new(a, w);

        if boundary_distance(&p) < MARGIN {
            skipped += 1;
            continue;
        }
        if classify(&p) == RegionClass::DelayDependent {
            let ladder = tau_ladder(&p, 16)?;
            if ladder.entries.iter().any(|e| (e.tau - tau).abs() < MARGIN) {
                skipped += 1;
                continue;
            }
        }

        let stable = is_stable(a, w, tau);
        let params = CharParams::new(Complex64::new(a, 0.0), w, tau);
        let enumerated = roots_right_of(&params, 0.0)?;
        let bound = a.abs() + rho + 1.0;
        let counted = count_roots_rect(&params, (0.0, bound), (-bound, bound))?;
        let sim = simulate(Complex64::new(a, 0.0), w, tau, HORIZON_DELAYS * tau)?;

        evaluated += 1;
        if stable {
            stable_count += 1;
        }
        let sim_stable = match sim.verdict {
            Verdict::Decaying => Some(true),
            Verdict::Growing => Some(false),
            Verdict::Inconclusive => {
                inconclusive += 1;
                None
            }
        };
        let mut agree = (enumerated.is_empty() == stable) && ((counted == 0) == stable);
        if let Some(s) = sim_stable {
            agree &= s == stable;
        }
        if !agree {
            disagreements.push(json!({
                "a": a,
                "w": { "re": w.re, "im": w.im },
                "tau": tau,
                "closed_form_stable": stable,
                "roots_found": enumerated.len(),
                "rect_count": counted,
                "decay_ratio": sim.decay_ratio,
            }));
        }
    }

    let n_disagree = disagreements.len();
    emit_json(&json!({
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "count": count,
        "evaluated": evaluated,
        "skipped_near_boundary": skipped,
        "stable": stable_count,
        "unstable": evaluated - stable_count,
        "simulator_inconclusive": inconclusive,
        "disagreements": disagreements,
    }));
    if n_disagree > 0 {
        return Err(CliError::Lib(Error::numerical(format!(
            "verify: {n_disagree} oracle disagreement(s) on seed {seed}"
        ))));
    }
    Ok(())
}

fn cmd_scan(spec: SweepSpec) -> Result<(), CliError> {
    spec.validate()?;
    let (na, nr) = spec.resolution;
    let lerp = |(lo, hi): (f64, f64), i: usize, n: usize| {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    };
    let mut out = String::from("a,rho,stable,tau_c\n");
    for i in 0..na {
        let a = lerp(spec.a_range, i, na);
        for j in 0..nr {
            let rho = lerp(spec.rho_range, j, nr);
            let p = CoefficientPoint::from_polar(a, rho, spec.psi);
            let stable = is_stable(a, p.w, spec.tau) as u8;
            let tau_c = if classify(&p) == RegionClass::DelayDependent {
                critical_delay(&p)?
            } else {
                f64::NAN
            };
            out.push_str(&format!("{a},{rho},{stable},{tau_c}\n"));
        }
    }
    print!("{out}");
    Ok(())
}

fn emit_json(value: &Value) {
    println!("{value}");
}
