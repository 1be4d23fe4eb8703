//! Cauchy-Riemann-Darboux bracketing: lower/upper step approximants over
//! multiple partitions, Riemann sums with sample rules, and certified
//! integral enclosures whose width is controlled by the modulus of
//! continuity at the mesh size.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{rat_from_f64, Rat};
use crate::steps1d::Interval;
use crate::stepsnd::{Rectangle, StepFunctionND};
use crate::toolbox::Modulus;

/// Default cap on integrand evaluations for certified runs.
pub const DEFAULT_EVAL_CAP: u64 = 10_000_000;

/// A closed box in R^d described by per-axis float bounds.
#[derive(Debug, Clone)]
pub struct BoxF {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxF {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<BoxF> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::domain("box bounds must match and be nonempty"));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::domain("box must have finite positive extent"));
        }
        Ok(BoxF { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }
}

/// Per-axis ordered breakpoints over a closed box.
#[derive(Debug, Clone)]
pub struct MultiPartition {
    breaks: Vec<Vec<f64>>,
}

impl MultiPartition {
    /// Uniform partition with `n[k]` cells on axis `k`.
    pub fn uniform(b: &BoxF, n: &[usize]) -> Result<MultiPartition> {
        if n.len() != b.dim() || n.iter().any(|&k| k == 0) {
            return Err(Error::domain("need a positive cell count per axis"));
        }
        let breaks = b
            .lo
            .iter()
            .zip(&b.hi)
            .zip(n)
            .map(|((&a, &c), &k)| {
                (0..=k).map(|i| a + (c - a) * i as f64 / k as f64).collect::<Vec<f64>>()
            })
            .collect();
        Ok(MultiPartition { breaks })
    }

    pub fn dim(&self) -> usize {
        self.breaks.len()
    }

    pub fn breaks(&self) -> &[Vec<f64>] {
        &self.breaks
    }

    /// Mesh: the largest per-axis gap.
    pub fn mesh(&self) -> f64 {
        self.breaks
            .iter()
            .flat_map(|axis| axis.windows(2).map(|w| w[1] - w[0]))
            .fold(0.0, f64::max)
    }

    pub fn cell_count(&self) -> u64 {
        self.breaks.iter().map(|a| (a.len() - 1) as u64).product()
    }

    /// Bisects every gap on one axis (0-based); the mesh halves there.
    pub fn refine(&self, axis: usize) -> MultiPartition {
        let mut breaks = self.breaks.clone();
        let old = &self.breaks[axis];
        let mut fine = Vec::with_capacity(old.len() * 2 - 1);
        for w in old.windows(2) {
            fine.push(w[0]);
            fine.push(0.5 * (w[0] + w[1]));
        }
        fine.push(*old.last().unwrap());
        breaks[axis] = fine;
        MultiPartition { breaks }
    }

    /// Axis whose largest gap is widest.
    pub fn widest_axis(&self) -> usize {
        self.breaks
            .iter()
            .enumerate()
            .max_by(|a, b| {
                let ga = a.1.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
                let gb = b.1.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
                ga.partial_cmp(&gb).unwrap()
            })
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    /// Iterates over all open-closed cells `(lo, hi]`.
    pub fn cells(&self) -> CellIter<'_> {
        CellIter { part: self, idx: vec![0; self.breaks.len()], done: false }
    }
}

pub struct CellIter<'a> {
    part: &'a MultiPartition,
    idx: Vec<usize>,
    done: bool,
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Cell {
    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    pub fn diagonal(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    fn to_rectangle(&self) -> Rectangle {
        Rectangle::new(
            self.lo
                .iter()
                .zip(&self.hi)
                .map(|(&a, &b)| {
                    Interval::oc(rat_from_f64(a).expect("finite"), rat_from_f64(b).expect("finite"))
                        .expect("ordered")
                })
                .collect(),
        )
    }
}

impl<'a> Iterator for CellIter<'a> {
    type Item = Cell;

    fn next(&mut self) -> Option<Cell> {
        if self.done {
            return None;
        }
        let d = self.part.breaks.len();
        let lo: Vec<f64> = (0..d).map(|k| self.part.breaks[k][self.idx[k]]).collect();
        let hi: Vec<f64> = (0..d).map(|k| self.part.breaks[k][self.idx[k] + 1]).collect();
        // advance
        let mut ax = 0;
        loop {
            if ax == d {
                self.done = true;
                break;
            }
            self.idx[ax] += 1;
            if self.idx[ax] < self.part.breaks[ax].len() - 1 {
                break;
            }
            self.idx[ax] = 0;
            ax += 1;
        }
        Some(Cell { lo, hi })
    }
}

/// How cell bounds are produced for the Darboux pair.
pub enum BoundMode<'a> {
    /// Corner-and-center sampling; tight for monotone integrands but not
    /// certified.
    Sampled,
    /// Certified bounds `f(center) -+ C_f(cell diagonal)`.
    Modulus(&'a Modulus),
}

/// Lower and upper step approximants over the partition cells, with a flag
/// recording whether the bracketing is certified.
pub fn darboux_pair(
    f: &dyn Fn(&[f64]) -> f64,
    part: &MultiPartition,
    mode: BoundMode<'_>,
) -> (StepFunctionND, StepFunctionND, bool) {
    let d = part.dim();
    let mut lower_terms = Vec::new();
    let mut upper_terms = Vec::new();
    let certified = matches!(mode, BoundMode::Modulus(m) if m.is_exact());
    for cell in part.cells() {
        let (lo_v, hi_v) = match &mode {
            BoundMode::Sampled => {
                let mut lo_v = f64::INFINITY;
                let mut hi_v = f64::NEG_INFINITY;
                // corners + center
                let corners = 1usize << d;
                for mask in 0..corners {
                    let p: Vec<f64> = (0..d)
                        .map(|k| if mask >> k & 1 == 1 { cell.hi[k] } else { cell.lo[k] })
                        .collect();
                    let v = f(&p);
                    lo_v = lo_v.min(v);
                    hi_v = hi_v.max(v);
                }
                let v = f(&cell.center());
                (lo_v.min(v), hi_v.max(v))
            }
            BoundMode::Modulus(m) => {
                let c = f(&cell.center());
                let w = m.value(cell.diagonal());
                (c - w, c + w)
            }
        };
        let rect = cell.to_rectangle();
        lower_terms.push((rect.clone(), rat_from_f64(lo_v).unwrap_or_else(Rat::default)));
        upper_terms.push((rect, rat_from_f64(hi_v).unwrap_or_else(Rat::default)));
    }
    (
        StepFunctionND::from_terms(d, lower_terms),
        StepFunctionND::from_terms(d, upper_terms),
        certified,
    )
}

/// Sample-point rule for Riemann sums over open-closed cells.
#[derive(Debug, Clone, Copy)]
pub enum SampleRule {
    Center,
    /// The lower-left corner of each cell.
    Left,
    /// Uniform draw per cell, strictly inside; reproducible per seed.
    Random(u64),
}

pub fn riemann_sum(f: &dyn Fn(&[f64]) -> f64, part: &MultiPartition, rule: SampleRule) -> f64 {
    let mut rng = match rule {
        SampleRule::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for cell in part.cells() {
        let xi: Vec<f64> = match rule {
            SampleRule::Center => cell.center(),
            SampleRule::Left => cell.lo.clone(),
            SampleRule::Random(_) => {
                let rng = rng.as_mut().unwrap();
                cell.lo
                    .iter()
                    .zip(&cell.hi)
                    .map(|(&a, &b)| {
                        let u: f64 = rng.gen_range(0.0..1.0);
                        b - u * (b - a)
                    })
                    .collect()
            }
        };
        let term = f(&xi) * cell.volume();
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// A certified enclosure of an integral.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Enclosure {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub width: f64,
    pub evals: u64,
    pub mesh: f64,
}

impl Enclosure {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Failure carrying the best enclosure reached before the cap.
#[derive(Debug)]
pub struct CertifyFailure {
    pub partial: Enclosure,
    pub cap: u64,
}

/// Certified integral over a closed box by global dyadic refinement of the
/// widest axis. Cell bounds come from the declared modulus, so
/// `lower <= integral <= upper` holds whenever the modulus is a true bound;
/// refinement stops once `upper - lower <= tol`.
pub fn certified_integral(
    f: &dyn Fn(&[f64]) -> f64,
    b: &BoxF,
    modulus: &Modulus,
    tol: f64,
    eval_cap: u64,
) -> std::result::Result<Enclosure, CertifyFailure> {
    let mut part = MultiPartition::uniform(b, &vec![1; b.dim()]).expect("valid box");
    let mut evals: u64 = 0;
    loop {
        let cells = part.cell_count();
        let mut lower = 0.0f64;
        let mut upper = 0.0f64;
        let mut comp_l = 0.0f64;
        let mut comp_u = 0.0f64;
        for cell in part.cells() {
            let c = f(&cell.center());
            let w = modulus.value(cell.diagonal());
            let vol = cell.volume();
            let lo_term = (c - w) * vol;
            let hi_term = (c + w) * vol;
            let t = lower + lo_term;
            comp_l += if lower.abs() >= lo_term.abs() { (lower - t) + lo_term } else { (lo_term - t) + lower };
            lower = t;
            let t = upper + hi_term;
            comp_u += if upper.abs() >= hi_term.abs() { (upper - t) + hi_term } else { (hi_term - t) + upper };
            upper = t;
        }
        lower += comp_l;
        upper += comp_u;
        evals += cells;
        let enc = Enclosure {
            value: 0.5 * (lower + upper),
            lower,
            upper,
            width: upper - lower,
            evals,
            mesh: part.mesh(),
        };
        if enc.width <= tol {
            return Ok(enc);
        }
        if evals.saturating_add(cells * 2) > eval_cap {
            return Err(CertifyFailure { partial: enc, cap: eval_cap });
        }
        part = part.refine(part.widest_axis());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn unit_box() -> BoxF {
        BoxF::new(vec![0.0], vec![1.0]).unwrap()
    }

    #[test]
    fn darboux_pair_linear_sampled() {
        // f(x) = x on [0,1], n = 4: lower sum 3/8, upper sum 5/8.
        let part = MultiPartition::uniform(&unit_box(), &[4]).unwrap();
        let (lo, hi, certified) = darboux_pair(&|p| p[0], &part, BoundMode::Sampled);
        assert!(!certified);
        assert_eq!(lo.volume_integral(), rat(3, 8));
        assert_eq!(hi.volume_integral(), rat(5, 8));
    }

    #[test]
    fn darboux_pair_constant() {
        let part = MultiPartition::uniform(&BoxF::new(vec![0.0], vec![2.0]).unwrap(), &[3]).unwrap();
        let (lo, hi, _) = darboux_pair(&|_| 5.0, &part, BoundMode::Sampled);
        assert_eq!(lo.volume_integral(), rat(10, 1));
        assert_eq!(hi.volume_integral(), rat(10, 1));
    }

    #[test]
    fn darboux_modulus_encloses_antiderivative() {
        // f = x^2 with Lipschitz 2 on [0,1], n = 10: enclosure contains 1/3.
        let part = MultiPartition::uniform(&unit_box(), &[10]).unwrap();
        let m = Modulus::lipschitz(2.0);
        let (lo, hi, certified) = darboux_pair(&|p| p[0] * p[0], &part, BoundMode::Modulus(&m));
        assert!(certified);
        let third = rat(1, 3);
        assert!(lo.volume_integral() <= third && third <= hi.volume_integral());
    }

    #[test]
    fn riemann_rules() {
        let part = MultiPartition::uniform(&unit_box(), &[4]).unwrap();
        let left = riemann_sum(&|p| p[0], &part, SampleRule::Left);
        assert!((left - 0.375).abs() < 1e-15);
        let center = riemann_sum(&|p| p[0], &part, SampleRule::Center);
        assert!((center - 0.5).abs() < 1e-15);

        let pi_box = BoxF::new(vec![0.0], vec![std::f64::consts::PI]).unwrap();
        let part = MultiPartition::uniform(&pi_box, &[1000]).unwrap();
        let mid = riemann_sum(&|p| p[0].sin(), &part, SampleRule::Center);
        assert!((mid - 2.0).abs() < 1e-5);
    }

    #[test]
    fn riemann_random_is_deterministic_and_sandwiched() {
        let part = MultiPartition::uniform(&unit_box(), &[16]).unwrap();
        let f = |p: &[f64]| (3.0 * p[0]).sin() + p[0];
        let a = riemann_sum(&f, &part, SampleRule::Random(42));
        let b = riemann_sum(&f, &part, SampleRule::Random(42));
        assert_eq!(a, b);
        let m = Modulus::lipschitz(4.0);
        let (lo, hi, _) = darboux_pair(&f, &part, BoundMode::Modulus(&m));
        let lo_i = crate::rational::rat_to_f64(&lo.volume_integral());
        let hi_i = crate::rational::rat_to_f64(&hi.volume_integral());
        for rule in [SampleRule::Center, SampleRule::Left, SampleRule::Random(7)] {
            let s = riemann_sum(&f, &part, rule);
            assert!(lo_i <= s && s <= hi_i);
        }
    }

    #[test]
    fn refinement_brackets_monotonically() {
        // lower sums nondecreasing, upper nonincreasing for f = e^x.
        let f = |p: &[f64]| p[0].exp();
        let m = Modulus::lipschitz(std::f64::consts::E);
        let mut part = MultiPartition::uniform(&unit_box(), &[2]).unwrap();
        let mut prev: Option<(f64, f64)> = None;
        for _ in 0..5 {
            let (lo, hi, _) = darboux_pair(&f, &part, BoundMode::Modulus(&m));
            let l = crate::rational::rat_to_f64(&lo.volume_integral());
            let u = crate::rational::rat_to_f64(&hi.volume_integral());
            if let Some((pl, pu)) = prev {
                assert!(l >= pl - 1e-12);
                assert!(u <= pu + 1e-12);
            }
            prev = Some((l, u));
            part = part.refine(0);
        }
    }

    #[test]
    fn refine_halves_mesh() {
        let part = MultiPartition::uniform(&unit_box(), &[2]).unwrap();
        let fine = part.refine(0);
        assert_eq!(fine.cell_count(), 4);
        assert!((fine.mesh() - part.mesh() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn certified_linear() {
        let enc = certified_integral(
            &|p| p[0],
            &unit_box(),
            &Modulus::lipschitz(1.0),
            1e-6,
            DEFAULT_EVAL_CAP,
        )
        .unwrap();
        assert!(enc.width <= 1e-6);
        assert!(enc.contains(0.5));
        assert!((enc.value - 0.5).abs() < 1e-6);
    }

    #[test]
    fn certified_2d_sum() {
        let b = BoxF::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let enc = certified_integral(
            &|p| p[0] + p[1],
            &b,
            &Modulus::lipschitz(std::f64::consts::SQRT_2),
            1e-2,
            DEFAULT_EVAL_CAP,
        )
        .unwrap();
        assert!(enc.contains(1.0));
        assert!(enc.width <= 1e-2);
    }

    #[test]
    fn certified_cap_returns_partial() {
        let err = certified_integral(
            &|p| p[0].sin(),
            &unit_box(),
            &Modulus::lipschitz(1.0),
            1e-12,
            2000,
        )
        .unwrap_err();
        assert!(err.partial.width > 1e-12);
        assert_eq!(err.cap, 2000);
    }

    #[test]
    fn soundness_against_fine_oracle() {
        // A fine midpoint sum (10x finer) must land inside certified
        // enclosures of sin over [0, 2].
        let b = BoxF::new(vec![0.0], vec![2.0]).unwrap();
        let m = Modulus::lipschitz(1.0);
        for n in [4usize, 16, 64] {
            let part = MultiPartition::uniform(&b, &[n]).unwrap();
            let (lo, hi, _) = darboux_pair(&|p| p[0].sin(), &part, BoundMode::Modulus(&m));
            let fine = MultiPartition::uniform(&b, &[n * 10]).unwrap();
            let oracle = riemann_sum(&|p| p[0].sin(), &fine, SampleRule::Center);
            let l = crate::rational::rat_to_f64(&lo.volume_integral());
            let u = crate::rational::rat_to_f64(&hi.volume_integral());
            assert!(l <= oracle && oracle <= u);
        }
    }
}
