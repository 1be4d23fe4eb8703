//! Improper integrals with endpoint limits, domination tests, the Frullani
//! identity, Laplace transforms with the r -> 0 evaluation route, and
//! Fourier transforms of absolutely integrable functions.

use num::complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{adaptive, aitken_limit};

/// Integration endpoint: finite or infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    Finite(f64),
    NegInf,
    PosInf,
}

impl Endpoint {
    pub fn from_f64(x: f64) -> Endpoint {
        if x == f64::INFINITY {
            Endpoint::PosInf
        } else if x == f64::NEG_INFINITY {
            Endpoint::NegInf
        } else {
            Endpoint::Finite(x)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    AbsolutelyConvergent,
    ConditionallyConvergentHeuristic,
    Divergent,
    Unknown,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::AbsolutelyConvergent => "absolutely_convergent",
            Classification::ConditionallyConvergentHeuristic => "conditionally_convergent_heuristic",
            Classification::Divergent => "divergent",
            Classification::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct ImproperResult {
    pub value: Complex64,
    pub classification: Classification,
    /// The integral of |f| when it stabilized.
    pub abs_integral: Option<f64>,
    /// Partial sums toward the lower and upper endpoint.
    pub lower_trend: Vec<f64>,
    pub upper_trend: Vec<f64>,
    pub evaluations: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct ImproperOptions {
    pub tol: f64,
    /// Maximum number of geometric endpoint steps per side.
    pub max_steps: usize,
    /// Steps that must be consumed before stabilization may be declared.
    /// Callers that know a damping envelope (the Laplace transform) use
    /// this to keep oscillatory cancellation from stopping the scan early.
    pub min_steps: usize,
    pub eval_cap: u64,
    pub divergence_threshold: f64,
    /// Consecutive small gaps required to declare stabilization.
    pub stable_runs: usize,
}

impl Default for ImproperOptions {
    fn default() -> Self {
        ImproperOptions {
            tol: 1e-8,
            max_steps: 24,
            min_steps: 0,
            eval_cap: 20_000_000,
            divergence_threshold: 1e12,
            stable_runs: 3,
        }
    }
}

impl ImproperOptions {
    pub fn with_tol(tol: f64) -> Self {
        ImproperOptions { tol, ..Default::default() }
    }
}

/// Successive integration nodes marching from the anchor toward an endpoint
/// along a geometric sequence (ratio 1/2 toward finite endpoints, doubling
/// spans toward infinite ones).
fn endpoint_nodes(anchor: f64, end: Endpoint, steps: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(steps);
    match end {
        Endpoint::Finite(e) => {
            let mut gap = e - anchor;
            for _ in 0..steps {
                gap *= 0.5;
                out.push(e - gap);
            }
        }
        Endpoint::PosInf => {
            let mut span = 1.0f64.max(anchor.abs());
            for _ in 0..steps {
                out.push(anchor + span);
                span *= 2.0;
            }
        }
        Endpoint::NegInf => {
            let mut span = 1.0f64.max(anchor.abs());
            for _ in 0..steps {
                out.push(anchor - span);
                span *= 2.0;
            }
        }
    }
    out
}

struct SideScan {
    /// Cumulative integrals from the anchor to each node.
    partials: Vec<f64>,
    /// Best limit estimate: the raw partial when the raw deltas converged,
    /// the accelerated limit otherwise. Acceleration on an already-settled
    /// oscillatory sequence only amplifies quadrature noise.
    value: f64,
    abs_value: f64,
    stabilized: bool,
    abs_stabilized: bool,
    diverged: bool,
    evaluations: u64,
}

fn scan_side(
    f: &dyn Fn(f64) -> f64,
    anchor: f64,
    end: Endpoint,
    opts: &ImproperOptions,
) -> Result<SideScan> {
    if let Endpoint::Finite(e) = end {
        if e == anchor {
            return Ok(SideScan {
                partials: vec![0.0],
                value: 0.0,
                abs_value: 0.0,
                stabilized: true,
                abs_stabilized: true,
                diverged: false,
                evaluations: 0,
            });
        }
    }
    let nodes = endpoint_nodes(anchor, end, opts.max_steps);
    let sign = match end {
        Endpoint::Finite(e) => (e - anchor).signum(),
        Endpoint::PosInf => 1.0,
        Endpoint::NegInf => -1.0,
    };
    let mut evals: u64 = 0;
    let mut partials = Vec::with_capacity(nodes.len());
    let mut abs_partials = Vec::with_capacity(nodes.len());
    let mut acc = 0.0f64;
    let mut abs_acc = 0.0f64;
    let mut prev = anchor;
    let mut ok_runs = 0usize;
    let mut abs_runs = 0usize;
    let mut stabilized = false;
    let mut abs_stab = false;
    let mut diverged = false;
    let slice_tol = opts.tol / (4.0 * opts.max_steps as f64);
    // Stabilization is judged on the accelerated limit estimates, since the
    // reported value may be the accelerated one.
    let mut last_lim = f64::NAN;
    let mut last_abs_lim = f64::NAN;
    let mut raw_runs = 0usize;
    let mut raw_abs_runs = 0usize;
    let mut raw_converged = false;
    let mut raw_abs_converged = false;
    for node in nodes {
        // Slices always contribute positively to the one-sided integral
        // (from x toward the anchor, or from the anchor toward y).
        let (a, b) = if sign > 0.0 { (prev, node) } else { (node, prev) };
        let budget = opts.eval_cap.saturating_sub(evals);
        let mut g = |x: f64| f(x);
        let r = adaptive(&mut g, a, b, slice_tol, budget)?;
        let mut h = |x: f64| f(x).abs();
        let ra = adaptive(&mut h, a, b, slice_tol.max(opts.tol / 16.0), budget)?;
        evals += r.evaluations + ra.evaluations;
        acc += r.value;
        abs_acc += ra.value;
        partials.push(acc);
        abs_partials.push(abs_acc);
        if acc.abs() > opts.divergence_threshold || !acc.is_finite() {
            diverged = true;
            break;
        }
        if r.value.abs() < opts.tol / 2.0 {
            raw_runs += 1;
            if raw_runs >= opts.stable_runs && partials.len() >= opts.min_steps {
                raw_converged = true;
            }
        } else {
            raw_runs = 0;
        }
        if ra.value.abs() < opts.tol / 2.0 {
            raw_abs_runs += 1;
            if raw_abs_runs >= opts.stable_runs && partials.len() >= opts.min_steps {
                raw_abs_converged = true;
            }
        } else {
            raw_abs_runs = 0;
        }
        if partials.len() >= 3 {
            let lim = aitken_limit(&partials);
            if (lim - last_lim).abs() < opts.tol / 2.0 {
                ok_runs += 1;
                if ok_runs >= opts.stable_runs && partials.len() >= opts.min_steps {
                    stabilized = true;
                }
            } else {
                ok_runs = 0;
            }
            last_lim = lim;
            let abs_lim = aitken_limit(&abs_partials);
            if (abs_lim - last_abs_lim).abs() < opts.tol / 2.0 {
                abs_runs += 1;
                if abs_runs >= opts.stable_runs {
                    abs_stab = true;
                }
            } else {
                abs_runs = 0;
            }
            last_abs_lim = abs_lim;
        }
        if (stabilized || raw_converged) && (abs_stab || raw_abs_converged || abs_acc > opts.divergence_threshold) {
            break;
        }
        prev = node;
    }
    let stabilized = stabilized || raw_converged;
    let abs_stab = abs_stab || raw_abs_converged;
    // Trend divergence: positive slice contributions that are not shrinking
    // (ratio near or above one) cannot sum to a finite limit.
    if !stabilized && !diverged && partials.len() >= 6 {
        let deltas: Vec<f64> = partials.windows(2).map(|w| w[1] - w[0]).collect();
        let tail = &deltas[deltas.len() - 4..];
        let monotone_growth = tail.iter().all(|&d| d > 0.0);
        let ratio_near_one = tail.windows(2).all(|w| w[1] / w[0] >= 0.999);
        if monotone_growth && ratio_near_one {
            diverged = true;
        }
    }
    let value = if raw_converged {
        *partials.last().unwrap_or(&0.0)
    } else {
        aitken_limit(&partials)
    };
    let abs_value = if raw_abs_converged {
        *abs_partials.last().unwrap_or(&0.0)
    } else {
        aitken_limit(&abs_partials)
    };
    Ok(SideScan {
        partials,
        value,
        abs_value,
        stabilized,
        abs_stabilized: abs_stab,
        diverged,
        evaluations: evals,
    })
}

fn pick_anchor(a: Endpoint, b: Endpoint) -> f64 {
    match (a, b) {
        (Endpoint::Finite(x), Endpoint::Finite(y)) => 0.5 * (x + y),
        (Endpoint::Finite(x), Endpoint::PosInf) => x + 1.0,
        (Endpoint::NegInf, Endpoint::Finite(y)) => y - 1.0,
        (Endpoint::NegInf, Endpoint::PosInf) => 0.0,
        _ => 0.0,
    }
}

/// Improper integral of a continuous function over `(a, b)`.
///
/// Both one-sided limits along geometric node sequences must individually
/// stabilize; each limit is Aitken-accelerated. Classification reflects the
/// behaviour of the companion integral of `|f|`.
pub fn improper_integral(
    f: &dyn Fn(f64) -> f64,
    a: Endpoint,
    b: Endpoint,
    opts: &ImproperOptions,
) -> Result<ImproperResult> {
    match (a, b) {
        (Endpoint::PosInf, _) | (_, Endpoint::NegInf) => {
            return Err(Error::domain("endpoints out of order"));
        }
        (Endpoint::Finite(x), Endpoint::Finite(y)) if x >= y => {
            return Err(Error::domain("endpoints out of order"));
        }
        _ => {}
    }
    let anchor = pick_anchor(a, b);
    let lower = scan_side(f, anchor, a, opts)?;
    let upper = scan_side(f, anchor, b, opts)?;
    let evaluations = lower.evaluations + upper.evaluations;

    if lower.diverged || upper.diverged {
        return Ok(ImproperResult {
            value: Complex64::new(f64::NAN, 0.0),
            classification: Classification::Divergent,
            abs_integral: None,
            lower_trend: lower.partials,
            upper_trend: upper.partials,
            evaluations,
        });
    }
    if !(lower.stabilized && upper.stabilized) {
        return Ok(ImproperResult {
            value: Complex64::new(f64::NAN, 0.0),
            classification: Classification::Unknown,
            abs_integral: None,
            lower_trend: lower.partials,
            upper_trend: upper.partials,
            evaluations,
        });
    }
    let value = lower.value + upper.value;
    let abs_finite = lower.abs_stabilized && upper.abs_stabilized;
    let classification = if abs_finite {
        Classification::AbsolutelyConvergent
    } else {
        // the value stabilized but |f| kept growing within the budget
        Classification::ConditionallyConvergentHeuristic
    };
    Ok(ImproperResult {
        value: Complex64::new(value, 0.0),
        classification,
        abs_integral: if abs_finite { Some(lower.abs_value + upper.abs_value) } else { None },
        lower_trend: lower.partials,
        upper_trend: upper.partials,
        evaluations,
    })
}

/// Complex-valued improper integral (real and imaginary parts integrated on
/// shared machinery).
pub fn improper_integral_complex(
    f: &dyn Fn(f64) -> Complex64,
    a: Endpoint,
    b: Endpoint,
    opts: &ImproperOptions,
) -> Result<ImproperResult> {
    let re = improper_integral(&|x| f(x).re, a, b, opts)?;
    let im = improper_integral(&|x| f(x).im, a, b, opts)?;
    let classification = match (re.classification, im.classification) {
        (Classification::Divergent, _) | (_, Classification::Divergent) => Classification::Divergent,
        (Classification::Unknown, _) | (_, Classification::Unknown) => Classification::Unknown,
        (Classification::AbsolutelyConvergent, Classification::AbsolutelyConvergent) => {
            Classification::AbsolutelyConvergent
        }
        _ => Classification::ConditionallyConvergentHeuristic,
    };
    Ok(ImproperResult {
        value: Complex64::new(re.value.re, im.value.re),
        classification,
        abs_integral: None,
        lower_trend: re.lower_trend,
        upper_trend: re.upper_trend,
        evaluations: re.evaluations + im.evaluations,
    })
}

/// Domination report: `|f| <= phi` spot-checked, `int phi` convergent, and
/// the implied bound on `|int f|`.
#[derive(Debug)]
pub struct DominationReport {
    pub integral_f: f64,
    pub integral_phi: f64,
    pub bound_holds: bool,
}

pub fn dominated_test(
    f: &dyn Fn(f64) -> f64,
    phi: &dyn Fn(f64) -> f64,
    a: Endpoint,
    b: Endpoint,
    opts: &ImproperOptions,
) -> Result<DominationReport> {
    // Spot-check |f| <= phi on a geometric spread of sample points.
    let anchor = pick_anchor(a, b);
    let mut samples = vec![anchor];
    samples.extend(endpoint_nodes(anchor, a, opts.max_steps.min(16)));
    samples.extend(endpoint_nodes(anchor, b, opts.max_steps.min(16)));
    for base in samples.clone() {
        samples.push(base + 1e-3);
    }
    for x in samples {
        let fx = f(x);
        let px = phi(x);
        if fx.is_finite() && px.is_finite() && fx.abs() > px * (1.0 + 1e-12) + 1e-300 {
            return Err(Error::domain(format!(
                "domination violated at x = {}: |f| = {} > phi = {}",
                x,
                fx.abs(),
                px
            )));
        }
    }
    let phi_int = improper_integral(phi, a, b, opts)?;
    if phi_int.classification == Classification::Divergent
        || phi_int.classification == Classification::Unknown
    {
        return Err(Error::numeric("dominating integral did not converge"));
    }
    let f_int = improper_integral(f, a, b, opts)?;
    let bound_holds = f_int.value.re.abs() <= phi_int.value.re + 2.0 * opts.tol;
    Ok(DominationReport {
        integral_f: f_int.value.re,
        integral_phi: phi_int.value.re,
        bound_holds,
    })
}

/// Frullani integral: quadrature value against the closed form
/// `(f(inf) - f(0)) log(b/a)`.
#[derive(Debug)]
pub struct FrullaniReport {
    pub formula: f64,
    pub quadrature: f64,
    pub f_zero: f64,
    pub f_inf: f64,
}

pub fn frullani(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    opts: &ImproperOptions,
) -> Result<FrullaniReport> {
    if !(0.0 < a && a < b) {
        return Err(Error::domain("frullani needs 0 < a < b"));
    }
    // Endpoint limits of f along geometric sequences, Aitken-accelerated.
    let zero_seq: Vec<f64> = (4..24).map(|k| f(0.5f64.powi(k))).collect();
    let inf_seq: Vec<f64> = (0..40).map(|k| f(1.5f64.powi(k))).collect();
    let f0 = aitken_limit(&zero_seq);
    let finf = aitken_limit(&inf_seq);
    if !(f0.is_finite() && finf.is_finite()) {
        return Err(Error::numeric("endpoint limits of f did not stabilize"));
    }
    let g = move |t: f64| (f(b * t) - f(a * t)) / t;
    let quad = improper_integral(&g, Endpoint::Finite(0.0), Endpoint::PosInf, opts)?;
    let formula = (finf - f0) * (b / a).ln();
    Ok(FrullaniReport { formula, quadrature: quad.value.re, f_zero: f0, f_inf: finf })
}

/// Laplace transform `int_0^inf e^{-rt} f(t) dt` for `r > 0`.
pub fn laplace_transform(f: &dyn Fn(f64) -> f64, r: f64, opts: &ImproperOptions) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::domain("laplace transform needs r > 0"));
    }
    let g = move |t: f64| (-r * t).exp() * f(t);
    // Scan at least until the exponential envelope alone is below
    // tolerance; otherwise oscillatory cancellation can look stable while a
    // real tail remains.
    let t_star = ((4.0 / opts.tol).max(1e3).ln() / r).max(2.0);
    let need = t_star.log2().ceil() as usize + 1;
    let mut opts = *opts;
    opts.min_steps = opts.min_steps.max(need);
    opts.max_steps = opts.max_steps.max(need + 6);
    let res = improper_integral(&g, Endpoint::Finite(0.0), Endpoint::PosInf, &opts)?;
    match res.classification {
        Classification::Divergent | Classification::Unknown => {
            Err(Error::numeric("laplace transform did not converge"))
        }
        _ => Ok(res.value.re),
    }
}

#[derive(Debug)]
pub struct LaplaceLimitReport {
    pub value: f64,
    pub transform_trend: Vec<f64>,
    pub evaluations_hint: usize,
}

/// The sanctioned route for conditionally convergent integrals on
/// `(0, inf)`: evaluate the Laplace transform along `r_k = r0 * 2^-k` and
/// extrapolate `r -> 0` with a Richardson step per halving.
pub fn laplace_limit_r0(
    f: &dyn Fn(f64) -> f64,
    r0: f64,
    steps: usize,
    opts: &ImproperOptions,
) -> Result<LaplaceLimitReport> {
    if r0 <= 0.0 {
        return Err(Error::domain("need r0 > 0"));
    }
    let mut rs = Vec::new();
    let mut transforms = Vec::new();
    let mut richardson: Vec<f64> = Vec::new();
    let mut last: Option<f64> = None;
    let mut r = r0;
    for k in 0..steps {
        let lr = laplace_transform(f, r, opts)?;
        rs.push(r);
        transforms.push(lr);
        if k > 0 {
            // One Richardson step for an O(r) leading error term.
            let extr = 2.0 * transforms[k] - transforms[k - 1];
            if let Some(prev) = last {
                if (extr - prev).abs() < opts.tol {
                    richardson.push(extr);
                    return Ok(LaplaceLimitReport {
                        value: extr,
                        transform_trend: transforms,
                        evaluations_hint: k + 1,
                    });
                }
            }
            richardson.push(extr);
            last = Some(extr);
        }
        r *= 0.5;
    }
    if richardson.len() >= 3 {
        let value = aitken_limit(&richardson);
        return Ok(LaplaceLimitReport {
            value,
            transform_trend: transforms,
            evaluations_hint: steps,
        });
    }
    Err(Error::numeric("laplace limit r->0 did not stabilize"))
}

/// Fourier transform `int f(x) e^{-i x xi} dx` over the support hint.
pub fn fourier_transform(
    f: &dyn Fn(f64) -> f64,
    support: (Endpoint, Endpoint),
    xi: f64,
    opts: &ImproperOptions,
) -> Result<ImproperResult> {
    let g = move |x: f64| {
        let fx = f(x);
        Complex64::new(fx * (x * xi).cos(), -fx * (x * xi).sin())
    };
    improper_integral_complex(&g, support.0, support.1, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn opts(tol: f64) -> ImproperOptions {
        ImproperOptions::with_tol(tol)
    }

    #[test]
    fn inverse_square_tail() {
        let r = improper_integral(
            &|t| t.powi(-2),
            Endpoint::Finite(1.0),
            Endpoint::PosInf,
            &opts(1e-9),
        )
        .unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-8);
        assert_eq!(r.classification, Classification::AbsolutelyConvergent);
    }

    #[test]
    fn inverse_sqrt_at_zero() {
        let r = improper_integral(
            &|t| t.powf(-0.5),
            Endpoint::Finite(0.0),
            Endpoint::Finite(1.0),
            &opts(1e-9),
        )
        .unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-8);
    }

    #[test]
    fn cubic_exponential_moment() {
        // int_0^inf t^3 e^{-2t} dt = 3!/2^4 = 6/16
        let r = improper_integral(
            &|t| t.powi(3) * (-2.0 * t).exp(),
            Endpoint::Finite(0.0),
            Endpoint::PosInf,
            &opts(1e-10),
        )
        .unwrap();
        assert!((r.value.re - 6.0 / 16.0).abs() < 1e-9);
    }

    #[test]
    fn divergent_harmonic_tail() {
        let r = improper_integral(
            &|t| 1.0 / t,
            Endpoint::Finite(1.0),
            Endpoint::PosInf,
            &opts(1e-8),
        )
        .unwrap();
        assert!(matches!(r.classification, Classification::Unknown | Classification::Divergent));
    }

    #[test]
    fn dominated_exp_sin() {
        // f = e^-t sin t, phi = e^-t on (0, inf): int f = 1/2 <= 1.
        let rep = dominated_test(
            &|t: f64| (-t).exp() * t.sin(),
            &|t: f64| (-t).exp(),
            Endpoint::Finite(0.0),
            Endpoint::PosInf,
            &opts(1e-9),
        )
        .unwrap();
        assert!((rep.integral_f - 0.5).abs() < 1e-8);
        assert!((rep.integral_phi - 1.0).abs() < 1e-8);
        assert!(rep.bound_holds);
    }

    #[test]
    fn dominated_equality_and_violation() {
        let rep = dominated_test(
            &|t: f64| (-t).exp(),
            &|t: f64| (-t).exp(),
            Endpoint::Finite(0.0),
            Endpoint::PosInf,
            &opts(1e-9),
        )
        .unwrap();
        assert!((rep.integral_f - rep.integral_phi).abs() < 1e-9);

        let err = dominated_test(
            &|t: f64| 2.0 * (-t).exp(),
            &|t: f64| (-t).exp(),
            Endpoint::Finite(0.0),
            Endpoint::PosInf,
            &opts(1e-9),
        );
        assert!(err.is_err());
    }

    #[test]
    fn frullani_arctan() {
        // f = arctan, a = 1, b = e: value (pi/2 - 0) * 1.
        let rep = frullani(&|t: f64| t.atan(), 1.0, E, &opts(1e-8)).unwrap();
        assert!((rep.formula - PI / 2.0).abs() < 1e-6);
        assert!((rep.quadrature - rep.formula).abs() < 1e-6);
    }

    #[test]
    fn frullani_constant_is_zero() {
        let rep = frullani(&|_| 3.5, 1.0, 2.0, &opts(1e-9)).unwrap();
        assert!(rep.formula.abs() < 1e-12);
        assert!(rep.quadrature.abs() < 1e-8);
    }

    #[test]
    fn frullani_decaying_sign() {
        // f = e^{-t}: (0 - 1) log(b/a).
        let rep = frullani(&|t: f64| (-t).exp(), 1.0, 2.0, &opts(1e-8)).unwrap();
        assert!((rep.formula + 2.0f64.ln()).abs() < 1e-6);
        assert!((rep.quadrature - rep.formula).abs() < 1e-6);
    }

    #[test]
    fn laplace_basics() {
        // f = 1: transform 1/r.
        let l = laplace_transform(&|_| 1.0, 0.5, &opts(1e-9)).unwrap();
        assert!((l - 2.0).abs() < 1e-8);
        // f = t^2: 2/r^3 at r = 1.
        let l = laplace_transform(&|t: f64| t * t, 1.0, &opts(1e-9)).unwrap();
        assert!((l - 2.0).abs() < 1e-8);
    }

    #[test]
    fn laplace_of_sinc() {
        // pi/2 - arctan r at r = 1.
        let sinc = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
        let l = laplace_transform(&sinc, 1.0, &opts(1e-10)).unwrap();
        assert!((l - (PI / 2.0 - 1.0f64.atan())).abs() < 1e-8);
    }

    #[test]
    fn dirichlet_via_laplace_limit() {
        let sinc = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
        let rep = laplace_limit_r0(&sinc, 0.8, 8, &opts(1e-5)).unwrap();
        assert!((rep.value - PI / 2.0).abs() < 1e-4);
    }

    #[test]
    fn laplace_limit_exponential() {
        let rep = laplace_limit_r0(&|t: f64| (-t).exp(), 0.5, 10, &opts(1e-8)).unwrap();
        assert!((rep.value - 1.0).abs() < 1e-7);
    }

    #[test]
    fn cos_difference_over_t_limit() {
        // (cos at - cos bt)/t with a=1, b=2 -> (1/2) log 4 as r -> 0.
        let f = |t: f64| if t == 0.0 { 0.0 } else { (t.cos() - (2.0 * t).cos()) / t };
        let rep = laplace_limit_r0(&f, 0.8, 9, &opts(2e-5)).unwrap();
        assert!((rep.value - 0.5 * 4.0f64.ln()).abs() < 1e-4, "got {}", rep.value);
    }

    #[test]
    fn fourier_of_box() {
        // hat f(xi) = 2 sin(xi)/xi for the indicator of [-1,1]; zero at pi.
        let r = fourier_transform(
            &|_| 1.0,
            (Endpoint::Finite(-1.0), Endpoint::Finite(1.0)),
            PI,
            &opts(1e-10),
        )
        .unwrap();
        assert!(r.value.norm() < 1e-9);
    }

    #[test]
    fn fourier_of_decaying_exponential() {
        // (0,inf) e^{-x}: 1/(1 + i xi); at xi = 1: 0.5 - 0.5i.
        let r = fourier_transform(
            &|x: f64| (-x).exp(),
            (Endpoint::Finite(0.0), Endpoint::PosInf),
            1.0,
            &opts(1e-10),
        )
        .unwrap();
        assert!((r.value.re - 0.5).abs() < 1e-8);
        assert!((r.value.im + 0.5).abs() < 1e-8);
    }

    #[test]
    fn fourier_at_zero_is_plain_integral() {
        let r = fourier_transform(
            &|x: f64| (-x * x).exp(),
            (Endpoint::NegInf, Endpoint::PosInf),
            0.0,
            &opts(1e-10),
        )
        .unwrap();
        assert!((r.value.re - PI.sqrt()).abs() < 1e-8);
        assert!(r.value.im.abs() < 1e-12);
    }

    #[test]
    fn conjugate_symmetry() {
        let f = |x: f64| (-x.abs()).exp();
        for xi in [0.3, 1.0, 2.7] {
            let plus = fourier_transform(&f, (Endpoint::NegInf, Endpoint::PosInf), xi, &opts(1e-9))
                .unwrap()
                .value;
            let minus = fourier_transform(&f, (Endpoint::NegInf, Endpoint::PosInf), -xi, &opts(1e-9))
                .unwrap()
                .value;
            assert!((plus - minus.conj()).norm() < 1e-7);
        }
    }
}
