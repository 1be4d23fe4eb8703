//! Monotone-extension machinery: generator sequences with exact partial
//! integrals, bracket certification, level approximation, push-up
//! sequences and moving averages against bump kernels.

use std::sync::Arc;

use num::ToPrimitive;

use crate::error::{Error, Result};
use crate::rational::{rat_to_f64, Rat};
use crate::steps1d::StepFunction1D;
use crate::stepsnd::{StepFunctionND, DEFAULT_CELL_CAP};

/// What the monotone machinery needs from a step-function space: an exact
/// preintegral and an exact pointwise order with witnesses.
pub trait StepSpace: Clone {
    type Point: Clone + std::fmt::Debug;

    fn preintegral(&self) -> Rat;
    fn le(&self, other: &Self) -> Result<std::result::Result<(), Self::Point>>;
}

impl StepSpace for StepFunction1D {
    type Point = Rat;

    fn preintegral(&self) -> Rat {
        self.width_integral()
    }

    fn le(&self, other: &Self) -> Result<std::result::Result<(), Rat>> {
        Ok(self.pointwise_le(other))
    }
}

impl StepSpace for StepFunctionND {
    type Point = Vec<Rat>;

    fn preintegral(&self) -> Rat {
        self.volume_integral()
    }

    fn le(&self, other: &Self) -> Result<std::result::Result<(), Vec<Rat>>> {
        self.pointwise_le(other, DEFAULT_CELL_CAP)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

/// A function presented by a monotone generator sequence of step functions.
/// Monotonicity is verified exactly on every consulted prefix.
pub struct MonotoneRep<S: StepSpace> {
    pub direction: Direction,
    generator: Arc<dyn Fn(usize) -> S + Send + Sync>,
    pub limit_hint: Option<f64>,
}

impl<S: StepSpace> MonotoneRep<S> {
    pub fn new(direction: Direction, generator: impl Fn(usize) -> S + Send + Sync + 'static) -> Self {
        MonotoneRep { direction, generator: Arc::new(generator), limit_hint: None }
    }

    pub fn with_hint(mut self, hint: f64) -> Self {
        self.limit_hint = Some(hint);
        self
    }

    /// Generator at index `n >= 1`.
    pub fn member(&self, n: usize) -> S {
        (self.generator)(n)
    }

    fn check_step(&self, prev: &S, next: &S, n: usize) -> Result<()> {
        let ok = match self.direction {
            Direction::Up => prev.le(next)?,
            Direction::Down => next.le(prev)?,
        };
        if let Err(witness) = ok {
            return Err(Error::domain(format!(
                "generator not monotone at index {} (witness {:?})",
                n, witness
            )));
        }
        Ok(())
    }
}

/// Outcome of driving a monotone generator toward its limit integral.
#[derive(Debug, Clone)]
pub enum ExtendedOutcome {
    /// Successive exact partials settled under the tolerance for three
    /// consecutive steps. The limit claim is heuristic by construction.
    Converged { value: f64, partials: Vec<Rat>, steps: usize, heuristic_limit: bool },
    /// Partials crossed the divergence threshold.
    Diverged { at_step: usize, partial: f64 },
    /// Budget exhausted without a verdict.
    Inconclusive { partials: Vec<Rat> },
}

#[derive(Debug, Clone, Copy)]
pub struct ExtendOptions {
    pub tol: f64,
    pub n_max: usize,
    pub divergence_threshold: f64,
    pub stable_runs: usize,
}

impl Default for ExtendOptions {
    fn default() -> Self {
        ExtendOptions { tol: 1e-9, n_max: 64, divergence_threshold: 1e12, stable_runs: 3 }
    }
}

/// Drives `I(f_n)` along the generator, checking monotonicity exactly on
/// the consulted prefix, and reports the trend.
pub fn extended_integral<S: StepSpace>(
    rep: &MonotoneRep<S>,
    opts: &ExtendOptions,
) -> Result<ExtendedOutcome> {
    let mut partials: Vec<Rat> = Vec::new();
    let mut prev_member: Option<S> = None;
    let mut runs = 0usize;
    for n in 1..=opts.n_max {
        let m = rep.member(n);
        if let Some(p) = &prev_member {
            rep.check_step(p, &m, n)?;
        }
        let integral = m.preintegral();
        let value = rat_to_f64(&integral);
        if !value.is_finite() || value.abs() > opts.divergence_threshold {
            return Ok(ExtendedOutcome::Diverged { at_step: n, partial: value });
        }
        if let Some(last) = partials.last() {
            let gap = rat_to_f64(&(&integral - last)).abs();
            if gap < opts.tol {
                runs += 1;
            } else {
                runs = 0;
            }
        }
        partials.push(integral);
        if runs >= opts.stable_runs {
            return Ok(ExtendedOutcome::Converged {
                value: rat_to_f64(partials.last().unwrap()),
                partials,
                steps: n,
                heuristic_limit: true,
            });
        }
        prev_member = Some(m);
    }
    // Exhausted the index budget: non-shrinking gaps mean the partial
    // integrals cannot settle, which for a monotone generator is divergence.
    if partials.len() >= 5 {
        let gaps: Vec<f64> = partials
            .windows(2)
            .map(|w| rat_to_f64(&(&w[1] - &w[0])).abs())
            .collect();
        let last = gaps[gaps.len() - 1];
        let earlier = gaps[gaps.len() - 5];
        if last > opts.tol && earlier > 0.0 && last >= 0.99 * earlier {
            return Ok(ExtendedOutcome::Diverged {
                at_step: opts.n_max,
                partial: rat_to_f64(partials.last().unwrap()),
            });
        }
    }
    Ok(ExtendedOutcome::Inconclusive { partials })
}

/// An integrable function presented as a pair of monotone step bounds:
/// `minus` increases from below, `plus` decreases from above.
pub struct Bracket<S: StepSpace> {
    pub minus: MonotoneRep<S>,
    pub plus: MonotoneRep<S>,
}

impl<S: StepSpace> Bracket<S> {
    pub fn new(minus: MonotoneRep<S>, plus: MonotoneRep<S>) -> Result<Bracket<S>> {
        if minus.direction != Direction::Up || plus.direction != Direction::Down {
            return Err(Error::domain(
                "bracket needs an increasing lower side and a decreasing upper side",
            ));
        }
        Ok(Bracket { minus, plus })
    }
}

/// A successful bracket certificate: at index `n` the exact gap between the
/// upper and lower integrals is at most epsilon, and the integral of the
/// bracketed function lies in `interval`.
#[derive(Debug, Clone)]
pub struct BracketCertificate {
    pub n: usize,
    pub gap: Rat,
    pub interval: (Rat, Rat),
}

#[derive(Debug)]
pub struct BracketFailure {
    pub achieved_gap: Option<Rat>,
    pub n_max: usize,
}

/// Certifies a bracket: finds `n` with `I(plus_n) - I(minus_n) <= eps`,
/// verifying `minus_n <= plus_n` pointwise (exactly) at each consulted
/// index.
pub fn certify_bracket<S: StepSpace>(
    bracket: &Bracket<S>,
    eps: &Rat,
    n_max: usize,
) -> Result<std::result::Result<BracketCertificate, BracketFailure>> {
    let mut prev_minus: Option<S> = None;
    let mut prev_plus: Option<S> = None;
    let mut achieved: Option<Rat> = None;
    for n in 1..=n_max {
        let lo = bracket.minus.member(n);
        let hi = bracket.plus.member(n);
        if let Some(p) = &prev_minus {
            bracket.minus.check_step(p, &lo, n)?;
        }
        if let Some(p) = &prev_plus {
            bracket.plus.check_step(p, &hi, n)?;
        }
        if let Err(witness) = lo.le(&hi)? {
            return Err(Error::domain(format!(
                "inconsistent bracket at index {}: lower exceeds upper at {:?}",
                n, witness
            )));
        }
        let il = lo.preintegral();
        let iu = hi.preintegral();
        let gap = &iu - &il;
        if &gap <= eps {
            return Ok(Ok(BracketCertificate { n, gap, interval: (il, iu) }));
        }
        achieved = Some(gap);
        prev_minus = Some(lo);
        prev_plus = Some(hi);
    }
    Ok(Err(BracketFailure { achieved_gap: achieved, n_max }))
}

/// A strictly increasing positive grid for level approximation.
#[derive(Debug, Clone)]
pub struct LevelGrid(Vec<f64>);

impl LevelGrid {
    pub fn new(levels: Vec<f64>) -> Result<LevelGrid> {
        if levels.is_empty() {
            return Err(Error::domain("level grid must be nonempty"));
        }
        if levels[0] <= 0.0 || levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("levels must be strictly increasing and positive"));
        }
        Ok(LevelGrid(levels))
    }

    /// The binary partition `{1/2^n, 2/2^n, ..., n*2^n/2^n}` of mesh `1/n`.
    pub fn binary_partition(n: u32) -> LevelGrid {
        let scale = (2.0f64).powi(n as i32);
        let count = (n as u64) * (2u64.pow(n));
        let levels = (1..=count).map(|k| k as f64 / scale).collect();
        LevelGrid(levels)
    }

    pub fn levels(&self) -> &[f64] {
        &self.0
    }

    /// Mesh: `max { r_1, gaps, 1/r_n }`.
    pub fn mesh(&self) -> f64 {
        let gaps = self.0.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        self.0[0].max(gaps).max(1.0 / self.0[self.0.len() - 1])
    }

    /// The lower staircase value of `h` at level `v = h(x)`: the largest
    /// grid value `r_j <= v` with `v < r_{j+1}`; values at or above the top
    /// grid level contribute nothing.
    pub fn staircase(&self, v: f64) -> f64 {
        let r = &self.0;
        if v < r[0] || v >= r[r.len() - 1] {
            return 0.0;
        }
        match r.binary_search_by(|x| x.partial_cmp(&v).unwrap()) {
            Ok(j) => r[j],
            Err(j) => r[j - 1],
        }
    }
}

/// Level approximation of a positive function over a finite grid, as a
/// weighted-indicator description plus an evaluator.
pub struct LevelApprox<'f> {
    h: &'f dyn Fn(&[f64]) -> f64,
    pub grid: LevelGrid,
}

impl<'f> LevelApprox<'f> {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.grid.staircase((self.h)(x))
    }

    /// The bucket list `(r_j, r_{j+1})` with weight `r_j`.
    pub fn buckets(&self) -> Vec<(f64, f64)> {
        self.grid.levels().windows(2).map(|w| (w[0], w[1])).collect()
    }
}

pub fn level_approximation<'f>(
    h: &'f dyn Fn(&[f64]) -> f64,
    grid: LevelGrid,
) -> LevelApprox<'f> {
    LevelApprox { h, grid }
}

/// The push-up sequence `g_n = 1 /\ (n (f - f /\ t))`, increasing to the
/// indicator of `[f > t]`.
pub fn pushup_sequence<'f>(
    f: &'f dyn Fn(&[f64]) -> f64,
    t: f64,
    n: u32,
) -> impl Fn(&[f64]) -> f64 + 'f {
    move |x: &[f64]| {
        let v = f(x);
        (n as f64 * (v - v.min(t))).min(1.0)
    }
}

/// Bump kernels with unit mass supported in a ball of radius `r`.
#[derive(Debug, Clone, Copy)]
pub enum KernelKind {
    /// `(1 - (|u|/r)^2)^3`, C^2 at the support boundary.
    Poly3,
    /// `(1 - |u|/r)`, merely continuous.
    Triangle,
}

#[derive(Debug, Clone, Copy)]
pub struct BumpKernel {
    pub kind: KernelKind,
    pub radius: f64,
    pub dim: usize,
}

impl BumpKernel {
    pub fn new(kind: KernelKind, radius: f64, dim: usize) -> Result<BumpKernel> {
        if radius <= 0.0 {
            return Err(Error::domain("kernel radius must be positive"));
        }
        if dim == 0 || dim > 2 {
            return Err(Error::domain("kernels are provided for dimensions 1 and 2"));
        }
        Ok(BumpKernel { kind, radius, dim })
    }

    /// Normalization constant so the kernel has unit mass.
    fn norm_const(&self) -> f64 {
        let r = self.radius;
        match (self.kind, self.dim) {
            // int_{-r}^{r} (1-(u/r)^2)^3 du = 32 r / 35
            (KernelKind::Poly3, 1) => 35.0 / (32.0 * r),
            // int_{B_r} (1-(|u|/r)^2)^3 du = pi r^2 / 4
            (KernelKind::Poly3, 2) => 4.0 / (std::f64::consts::PI * r * r),
            // int_{-r}^{r} (1-|u|/r) du = r
            (KernelKind::Triangle, 1) => 1.0 / r,
            // int_{B_r} (1-|u|/r) du = pi r^2 / 3
            (KernelKind::Triangle, 2) => 3.0 / (std::f64::consts::PI * r * r),
            _ => unreachable!(),
        }
    }

    pub fn eval(&self, u: &[f64]) -> f64 {
        let s: f64 = u.iter().map(|c| c * c).sum::<f64>().sqrt() / self.radius;
        if s >= 1.0 {
            return 0.0;
        }
        let shape = match self.kind {
            KernelKind::Poly3 => (1.0 - s * s).powi(3),
            KernelKind::Triangle => 1.0 - s,
        };
        shape * self.norm_const()
    }

    /// A recorded bound on `int |grad rho|` per unit translation; controls
    /// the x-continuity of moving averages.
    pub fn tv_proxy(&self) -> f64 {
        let r = self.radius;
        match (self.kind, self.dim) {
            (KernelKind::Poly3, 1) => 2.0 * self.norm_const(),
            (KernelKind::Triangle, 1) => 2.0 * self.norm_const(),
            // crude but recorded: sup |grad rho| * area of support
            (KernelKind::Poly3, 2) => {
                let sup_grad = 6.0 / r * self.norm_const() * 0.25; // max of 6s(1-s^2)^2/r at s ~ 0.447
                sup_grad * std::f64::consts::PI * r * r
            }
            (KernelKind::Triangle, 2) => {
                (self.norm_const() / r) * std::f64::consts::PI * r * r
            }
            _ => unreachable!(),
        }
    }
}

/// Moving average of a set against a unit-mass bump kernel:
/// `A^rho(x) = int_A rho(y - x) dy`, evaluated on a self-normalizing
/// midpoint grid refined until the value settles under the tolerance.
pub fn moving_average(
    member: &dyn Fn(&[f64]) -> bool,
    kernel: &BumpKernel,
    x: &[f64],
    tol: f64,
    eval_cap: u64,
) -> Result<f64> {
    if x.len() != kernel.dim {
        return Err(Error::domain("point dimension must match the kernel"));
    }
    let d = kernel.dim;
    let r = kernel.radius;
    let mut n: u64 = 64;
    let mut prev: Option<f64> = None;
    let mut evals: u64 = 0;
    loop {
        let cells = n.pow(d as u32);
        evals += cells;
        if evals > eval_cap {
            return Err(Error::resource("moving average evaluations", eval_cap));
        }
        let h = 2.0 * r / n as f64;
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        let mut idx = vec![0u64; d];
        loop {
            let y: Vec<f64> = (0..d)
                .map(|k| x[k] - r + h * (idx[k] as f64 + 0.5))
                .collect();
            let u: Vec<f64> = (0..d).map(|k| y[k] - x[k]).collect();
            let w = kernel.eval(&u);
            if w > 0.0 {
                den += w;
                if member(&y) {
                    num += w;
                }
            }
            let mut ax = 0;
            loop {
                if ax == d {
                    break;
                }
                idx[ax] += 1;
                if idx[ax] < n {
                    break;
                }
                idx[ax] = 0;
                ax += 1;
            }
            if ax == d {
                break;
            }
        }
        let value = if den > 0.0 { num / den } else { 0.0 };
        if let Some(p) = prev {
            if (value - p).abs() < tol / 2.0 {
                return Ok(value);
            }
        }
        prev = Some(value);
        n *= 2;
    }
}

/// Exact finite-scale convergence checks used by the property suites.
pub fn exact_limit_matches<S: StepSpace>(
    seq: impl Fn(usize) -> S,
    limit: &S,
    upto: usize,
) -> Result<bool> {
    let last = seq(upto);
    // the limit must dominate the sequence and the final member must reach it
    if last.le(limit)?.is_err() {
        return Ok(false);
    }
    Ok(last.preintegral() == limit.preintegral())
}

pub fn rat_usize(r: &Rat) -> Option<usize> {
    r.to_integer().to_usize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::steps1d::Interval;

    fn interval_oc(a: Rat, b: Rat) -> Interval {
        Interval::oc(a, b).unwrap()
    }

    #[test]
    fn extended_integral_converges_to_unit() {
        // f_n = (0, 1 - 1/n]: partial integrals 1 - 1/n.
        let rep = MonotoneRep::new(Direction::Up, |n| {
            let hi = rat_int(1) - rat(1, n as i64 + 1);
            StepFunction1D::indicator(&interval_oc(rat_int(0), hi))
        });
        let out = extended_integral(&rep, &ExtendOptions { tol: 1e-3, n_max: 4000, ..Default::default() })
            .unwrap();
        match out {
            ExtendedOutcome::Converged { value, heuristic_limit, .. } => {
                assert!((value - 1.0).abs() < 0.1);
                assert!(heuristic_limit);
            }
            other => panic!("expected convergence, got {:?}", other),
        }
    }

    #[test]
    fn extended_integral_diverges() {
        // f_n = n * (0,1]
        let rep = MonotoneRep::new(Direction::Up, |n| {
            StepFunction1D::scaled_indicator(&interval_oc(rat_int(0), rat_int(1)), rat_int(n as i64))
        });
        let out = extended_integral(
            &rep,
            &ExtendOptions { tol: 1e-9, n_max: 50, divergence_threshold: 20.0, ..Default::default() },
        )
        .unwrap();
        assert!(matches!(out, ExtendedOutcome::Diverged { .. }));
    }

    #[test]
    fn extended_integral_rejects_non_monotone() {
        let rep = MonotoneRep::new(Direction::Up, |n| {
            // alternates: not increasing
            let c = if n % 2 == 0 { rat_int(2) } else { rat_int(1) };
            StepFunction1D::scaled_indicator(&interval_oc(rat_int(0), rat_int(1)), c)
        });
        assert!(extended_integral(&rep, &ExtendOptions::default()).is_err());
    }

    #[test]
    fn graded_comb_trend_matches_alternating_series() {
        // Sum over [a_{2n}, a_{2n-1}] with a_n = 1/n: widths telescope to
        // log 2; oracle is the alternating harmonic series.
        let comb = |upto: usize| {
            let terms: Vec<(Interval, Rat)> = (1..=upto)
                .map(|n| {
                    let hi = rat(1, (2 * n - 1) as i64);
                    let lo = rat(1, (2 * n) as i64);
                    (Interval::closed(lo, hi).unwrap(), rat_int(1))
                })
                .collect();
            StepFunction1D::from_terms(&terms)
        };
        let rep = MonotoneRep::new(Direction::Up, move |n| comb(n));
        let out = extended_integral(
            &rep,
            &ExtendOptions { tol: 1e-4, n_max: 200, ..Default::default() },
        )
        .unwrap();
        let oracle: f64 = (1..=400).map(|k| (-1.0f64).powi(k as i32 + 1) / k as f64).sum();
        match out {
            ExtendedOutcome::Converged { value, .. } => {
                assert!((value - oracle).abs() < 0.02, "value {} oracle {}", value, oracle)
            }
            ExtendedOutcome::Inconclusive { partials } => {
                let last = rat_to_f64(partials.last().unwrap());
                assert!((last - 2.0f64.ln()).abs() < 0.01);
            }
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn trivial_bracket_certifies_with_zero_gap() {
        let f = StepFunction1D::scaled_indicator(&interval_oc(rat_int(0), rat_int(2)), rat(3, 2));
        let f2 = f.clone();
        let bracket = Bracket::new(
            MonotoneRep::new(Direction::Up, move |_| f.clone()),
            MonotoneRep::new(Direction::Down, move |_| f2.clone()),
        )
        .unwrap();
        let cert = certify_bracket(&bracket, &rat_int(0), 5).unwrap().unwrap();
        assert_eq!(cert.gap, rat_int(0));
        assert_eq!(cert.interval.0, rat_int(3));
    }

    #[test]
    fn darboux_style_bracket_gap_shrinks() {
        // x^2 on (0,1] via step bounds on a 2^n grid: gap = 1/2^n exactly
        // (sum of (k^2-(k-1)^2)/4^n telescopes).
        let lower = |n: usize| {
            let cells = 1usize << n;
            let terms: Vec<(Interval, Rat)> = (1..=cells)
                .map(|k| {
                    let lo = rat((k - 1) as i64, cells as i64);
                    let hi = rat(k as i64, cells as i64);
                    let v = rat(((k - 1) * (k - 1)) as i64, (cells * cells) as i64);
                    (interval_oc(lo, hi), v)
                })
                .collect();
            StepFunction1D::from_terms(&terms)
        };
        let upper = |n: usize| {
            let cells = 1usize << n;
            let terms: Vec<(Interval, Rat)> = (1..=cells)
                .map(|k| {
                    let lo = rat((k - 1) as i64, cells as i64);
                    let hi = rat(k as i64, cells as i64);
                    let v = rat((k * k) as i64, (cells * cells) as i64);
                    (interval_oc(lo, hi), v)
                })
                .collect();
            StepFunction1D::from_terms(&terms)
        };
        let bracket = Bracket::new(
            MonotoneRep::new(Direction::Up, move |n| lower(n)),
            MonotoneRep::new(Direction::Down, move |n| upper(n)),
        )
        .unwrap();
        let cert = certify_bracket(&bracket, &rat(1, 64), 10).unwrap().unwrap();
        assert_eq!(cert.n, 6);
        assert_eq!(cert.gap, rat(1, 64));
        // containment of the true integral 1/3
        assert!(cert.interval.0 <= rat(1, 3) && rat(1, 3) <= cert.interval.1);
    }

    #[test]
    fn inconsistent_bracket_is_an_error() {
        let low = StepFunction1D::scaled_indicator(&interval_oc(rat_int(0), rat_int(1)), rat_int(2));
        let high = StepFunction1D::indicator(&interval_oc(rat_int(0), rat_int(1)));
        let bracket = Bracket::new(
            MonotoneRep::new(Direction::Up, move |_| low.clone()),
            MonotoneRep::new(Direction::Down, move |_| high.clone()),
        )
        .unwrap();
        assert!(certify_bracket(&bracket, &rat(1, 100), 3).is_err());
    }

    #[test]
    fn level_approximation_examples() {
        // h = 3/2 on (0,1], grid {1,2}: staircase value 1 inside.
        let h = |x: &[f64]| if x[0] > 0.0 && x[0] <= 1.0 { 1.5 } else { 0.0 };
        let la = level_approximation(&h, LevelGrid::new(vec![1.0, 2.0]).unwrap());
        assert_eq!(la.eval(&[0.5]), 1.0);
        assert_eq!(la.eval(&[2.0]), 0.0);
        // h == 0 -> zero approximation
        let z = |_: &[f64]| 0.0;
        let la = level_approximation(&z, LevelGrid::new(vec![1.0, 2.0]).unwrap());
        assert_eq!(la.eval(&[0.3]), 0.0);
    }

    #[test]
    fn binary_partition_mesh() {
        for n in 1..=4u32 {
            let g = LevelGrid::binary_partition(n);
            assert!((g.mesh() - 1.0 / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn level_approximation_monotone_in_grid_and_below_h() {
        let h = |x: &[f64]| (x[0] * 3.0).sin().abs() * 2.0 + 0.1;
        let coarse = level_approximation(&h, LevelGrid::binary_partition(2));
        let fine = level_approximation(&h, LevelGrid::binary_partition(4));
        for i in 0..1000 {
            let x = [i as f64 / 250.0 - 2.0];
            let c = coarse.eval(&x);
            let f = fine.eval(&x);
            let hv = h(&x);
            assert!(c <= f + 1e-12, "grid refinement must not decrease the staircase");
            assert!(f <= hv, "staircase must stay below h");
        }
    }

    #[test]
    fn pushup_examples() {
        let f = |x: &[f64]| x[0];
        // f = x on [0,2], t = 1: g_100(1.5) = 1.
        let g = pushup_sequence(&f, 1.0, 100);
        assert_eq!(g(&[1.5]), 1.0);
        assert_eq!(g(&[0.5]), 0.0);
        // at x = 1 + 1/(2n): n * (1/(2n)) = 1/2.
        let n = 25u32;
        let g = pushup_sequence(&f, 1.0, n);
        let x = 1.0 + 1.0 / (2.0 * n as f64);
        assert!((g(&[x]) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pushup_monotone_in_n() {
        let f = |x: &[f64]| (x[0] - 0.3).cos();
        for i in 0..200 {
            let x = [i as f64 / 40.0 - 2.5];
            let mut prev = 0.0;
            for n in [1u32, 2, 4, 8, 16, 64] {
                let g = pushup_sequence(&f, 0.5, n);
                let v = g(&x);
                assert!(v + 1e-12 >= prev);
                assert!((0.0..=1.0).contains(&v));
                prev = v;
            }
            // limit indicator matches [f > t] away from the boundary
            let fv = f(&x);
            if (fv - 0.5).abs() > 1e-3 {
                let g = pushup_sequence(&f, 0.5, 100_000);
                let v = g(&x);
                assert_eq!(v, if fv > 0.5 { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn moving_average_interval() {
        let a = |y: &[f64]| y[0] > 0.0 && y[0] < 1.0;
        let k = BumpKernel::new(KernelKind::Poly3, 0.1, 1).unwrap();
        let v = moving_average(&a, &k, &[0.5], 1e-6, 10_000_000).unwrap();
        assert_eq!(v, 1.0);
        let v = moving_average(&a, &k, &[-1.0], 1e-6, 10_000_000).unwrap();
        assert_eq!(v, 0.0);
        let v = moving_average(&a, &k, &[0.0], 1e-4, 10_000_000).unwrap();
        assert!((v - 0.5).abs() < 1e-4, "got {}", v);
    }

    #[test]
    fn moving_average_disk() {
        let a = |y: &[f64]| y[0] * y[0] + y[1] * y[1] < 1.0;
        let k = BumpKernel::new(KernelKind::Triangle, 0.2, 2).unwrap();
        let inside = moving_average(&a, &k, &[0.0, 0.0], 1e-3, 50_000_000).unwrap();
        assert_eq!(inside, 1.0);
        let outside = moving_average(&a, &k, &[2.0, 0.0], 1e-3, 50_000_000).unwrap();
        assert_eq!(outside, 0.0);
        // On a straight boundary the symmetric kernel averages to 1/2; the
        // disk edge itself sits strictly below 1/2 (the boundary curves away).
        let half = |y: &[f64]| y[0] < 1.0;
        let edge = moving_average(&half, &k, &[1.0, 0.0], 5e-3, 50_000_000).unwrap();
        assert!((edge - 0.5).abs() < 0.01, "got {}", edge);
        let disk_edge = moving_average(&a, &k, &[1.0, 0.0], 5e-3, 50_000_000).unwrap();
        assert!(disk_edge < 0.5);
    }

    #[test]
    fn moving_average_x_continuity_within_tv_proxy() {
        let a = |y: &[f64]| y[0] > 0.0 && y[0] < 1.0;
        let k = BumpKernel::new(KernelKind::Poly3, 0.25, 1).unwrap();
        let tv = k.tv_proxy();
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..=80 {
            let x = -0.5 + 2.0 * i as f64 / 80.0;
            let v = moving_average(&a, &k, &[x], 1e-4, 10_000_000).unwrap();
            if let Some((px, pv)) = prev {
                assert!((v - pv).abs() <= tv * (x - px).abs() + 1e-3);
            }
            prev = Some((x, v));
        }
    }

    #[test]
    fn kernels_have_unit_mass() {
        // midpoint check of the normalization constants
        for (kind, dim) in [
            (KernelKind::Poly3, 1usize),
            (KernelKind::Triangle, 1),
            (KernelKind::Poly3, 2),
            (KernelKind::Triangle, 2),
        ] {
            let k = BumpKernel::new(kind, 0.7, dim).unwrap();
            let n = 400;
            let h = 2.0 * k.radius / n as f64;
            let mut total = 0.0;
            if dim == 1 {
                for i in 0..n {
                    let u = -k.radius + h * (i as f64 + 0.5);
                    total += k.eval(&[u]) * h;
                }
            } else {
                for i in 0..n {
                    for j in 0..n {
                        let u = [-k.radius + h * (i as f64 + 0.5), -k.radius + h * (j as f64 + 0.5)];
                        total += k.eval(&u) * h * h;
                    }
                }
            }
            assert!((total - 1.0).abs() < 2e-3, "mass {} for {:?}/{}", total, kind, dim);
        }
    }
}
