//! Metric utilities consumed by the analysis layers: sup norms, moduli of
//! continuity, distance functions and the Tietze extension formula over
//! finite point sets.

use std::sync::Arc;

use crate::error::{Error, Result};

/// A modulus of continuity `delta -> C_f(delta)`, tagged by whether it is a
/// guaranteed bound (`exact`) or a sampled estimate.
#[derive(Clone)]
pub struct Modulus {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    exact: bool,
}

impl Modulus {
    /// The exact modulus of an `L`-Lipschitz function: `C_f(delta) = L*delta`.
    pub fn lipschitz(l: f64) -> Modulus {
        Modulus { eval: Arc::new(move |d| l * d), exact: true }
    }

    /// Caller-declared modulus; `exact` asserts it is a true upper bound.
    pub fn from_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static, exact: bool) -> Modulus {
        Modulus { eval: Arc::new(f), exact }
    }

    pub fn value(&self, delta: f64) -> f64 {
        (self.eval)(delta.max(0.0))
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }
}

/// A finite set of points in R^d; the concrete stand-in for compact sets.
#[derive(Debug, Clone)]
pub struct FinitePointSet {
    points: Vec<Vec<f64>>,
}

impl FinitePointSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<FinitePointSet> {
        if points.is_empty() {
            return Err(Error::domain("point set must be nonempty"));
        }
        let d = points[0].len();
        if points.iter().any(|p| p.len() != d) {
            return Err(Error::domain("points must share a dimension"));
        }
        Ok(FinitePointSet { points })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }
}

pub fn euclid(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Exact minimum of Euclidean distances to a finite set.
pub fn distance_function(a: &FinitePointSet, x: &[f64]) -> f64 {
    a.points.iter().map(|p| euclid(p, x)).fold(f64::INFINITY, f64::min)
}

/// Sup-norm report: a sampled lower bound, and a guaranteed upper bound
/// when a Lipschitz constant allows inflating the sample.
#[derive(Debug, Clone, Copy)]
pub struct SupNorm {
    pub lower: f64,
    pub upper: Option<f64>,
    pub exact: bool,
}

/// Domain of a sup-norm query.
pub enum NormDomain<'a> {
    Points(&'a FinitePointSet),
    /// A closed box given by per-axis bounds.
    Box { lo: &'a [f64], hi: &'a [f64] },
}

/// Sup norm of `|f|` over the domain. Exact over finite sets; over boxes a
/// sampled grid gives the lower bound and a declared Lipschitz constant
/// certifies the upper bound.
pub fn sup_norm(
    f: &dyn Fn(&[f64]) -> f64,
    domain: NormDomain<'_>,
    samples_per_axis: usize,
    lipschitz: Option<f64>,
) -> SupNorm {
    match domain {
        NormDomain::Points(set) => {
            let m = set.points.iter().map(|p| f(p).abs()).fold(0.0f64, f64::max);
            SupNorm { lower: m, upper: Some(m), exact: true }
        }
        NormDomain::Box { lo, hi } => {
            let d = lo.len();
            let n = samples_per_axis.max(2);
            let mut best = 0.0f64;
            let mut idx = vec![0usize; d];
            loop {
                let p: Vec<f64> = (0..d)
                    .map(|k| lo[k] + (hi[k] - lo[k]) * idx[k] as f64 / (n - 1) as f64)
                    .collect();
                best = best.max(f(&p).abs());
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
            // Covering radius of the grid: half a cell diagonal.
            let diag: f64 = (0..d)
                .map(|k| ((hi[k] - lo[k]) / (n - 1) as f64 / 2.0).powi(2))
                .sum::<f64>()
                .sqrt();
            let upper = lipschitz.map(|l| best + l * diag);
            SupNorm { lower: best, upper, exact: false }
        }
    }
}

/// Sampled estimate of `C_f(delta)` over an interval, or the exact value
/// `L*delta` when a Lipschitz constant is declared.
pub fn modulus_estimate(
    f: &dyn Fn(f64) -> f64,
    interval: (f64, f64),
    delta: f64,
    samples: usize,
    lipschitz: Option<f64>,
) -> Modulus {
    if delta <= 0.0 {
        return Modulus::from_fn(|_| 0.0, true);
    }
    if let Some(l) = lipschitz {
        return Modulus::lipschitz(l);
    }
    let (a, b) = interval;
    let n = samples.max(4);
    let mut best = 0.0f64;
    for i in 0..n {
        let s = a + (b - a) * i as f64 / (n - 1) as f64;
        for frac in [0.25, 0.5, 0.75, 1.0] {
            let t = (s + delta * frac).min(b);
            best = best.max((f(s) - f(t)).abs());
        }
    }
    // Extend the single-delta sample to other gap sizes: linear below the
    // sampled delta, subadditive block count above it.
    let val = best;
    Modulus::from_fn(
        move |d| {
            if d <= delta {
                val * d / delta
            } else {
                val * (d / delta).ceil()
            }
        },
        false,
    )
}

/// The Riesz form of the Tietze extension from a finite set:
/// `g(x) = d(x, K) * max_y h(y)/|x-y|` off `K` and `g = h` on `K`.
pub fn tietze_extend(k: &FinitePointSet, h: &[f64], x: &[f64]) -> Result<f64> {
    if h.len() != k.points.len() {
        return Err(Error::domain("one value per point required"));
    }
    if h.iter().any(|v| *v < 0.0) {
        return Err(Error::domain("tietze extension needs h >= 0"));
    }
    for (p, v) in k.points.iter().zip(h) {
        if euclid(p, x) == 0.0 {
            return Ok(*v);
        }
    }
    let d = distance_function(k, x);
    let m = k
        .points
        .iter()
        .zip(h)
        .map(|(y, hy)| hy / euclid(x, y))
        .fold(0.0f64, f64::max);
    Ok(d * m)
}
