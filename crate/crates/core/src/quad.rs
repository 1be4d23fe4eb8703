//! Adaptive quadrature primitives shared by the analysis layers.
//!
//! One-dimensional integration uses a 7-15 Gauss-Kronrod pair with
//! worst-first interval subdivision. Multi-dimensional boxes go through
//! repeated (iterated) one-dimensional integration. Sequence limits are
//! accelerated with iterated Aitken delta-squared steps.

use crate::error::{Error, Result};

/// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// Value, error estimate and evaluation count of a quadrature run.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: u64,
}

fn gk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        kron += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kron * h;
    // The raw Gauss-Kronrod difference overestimates the Kronrod error on
    // smooth integrands, which is the conservative side.
    let err = ((kron - gauss) * h).abs();
    (value, err)
}

/// Adaptively integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    eval_cap: u64,
) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("adaptive quadrature needs finite endpoints"));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, abs_error: 0.0, evaluations: 0 });
    }
    struct Seg {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }
    let mut evals: u64 = 15;
    let (v0, e0) = gk15(f, a, b);
    let mut segs = vec![Seg { a, b, value: v0, err: e0 }];
    loop {
        let total_err: f64 = segs.iter().map(|s| s.err).sum();
        if total_err <= tol {
            break;
        }
        if evals + 30 > eval_cap {
            return Err(Error::resource("quadrature evaluations", eval_cap));
        }
        // split the worst segment
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .expect("nonempty");
        let seg = segs.swap_remove(worst);
        let m = 0.5 * (seg.a + seg.b);
        if m <= seg.a || m >= seg.b {
            // interval exhausted at machine precision; accept its estimate
            segs.push(Seg { err: 0.0, ..seg });
            continue;
        }
        let (v1, e1) = gk15(f, seg.a, m);
        let (v2, e2) = gk15(f, m, seg.b);
        evals += 30;
        segs.push(Seg { a: seg.a, b: m, value: v1, err: e1 });
        segs.push(Seg { a: m, b: seg.b, value: v2, err: e2 });
    }
    // Neumaier-compensated sum keeps serial results reproducible.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    segs.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap());
    for s in &segs {
        let t = sum + s.value;
        if sum.abs() >= s.value.abs() {
            comp += (sum - t) + s.value;
        } else {
            comp += (s.value - t) + sum;
        }
        sum = t;
    }
    Ok(QuadResult {
        value: sum + comp,
        abs_error: segs.iter().map(|s| s.err).sum(),
        evaluations: evals,
    })
}

/// Iterated-1D cubature over a rectangular box, inner axes integrated per
/// outer evaluation point.
pub fn adaptive_box(
    f: &dyn Fn(&[f64]) -> f64,
    lo: &[f64],
    hi: &[f64],
    tol: f64,
    eval_cap: u64,
) -> Result<QuadResult> {
    assert_eq!(lo.len(), hi.len());
    let dim = lo.len();
    if dim == 0 {
        return Ok(QuadResult { value: f(&[]), abs_error: 0.0, evaluations: 1 });
    }
    let evals = std::cell::Cell::new(0u64);
    fn level(
        f: &dyn Fn(&[f64]) -> f64,
        lo: &[f64],
        hi: &[f64],
        point: &mut Vec<f64>,
        axis: usize,
        tol: f64,
        eval_cap: u64,
        evals: &std::cell::Cell<u64>,
    ) -> Result<f64> {
        // Error at this level propagates through the enclosing integrals
        // scaled by the lengths of the axes above it.
        let span_above: f64 = (axis + 1..lo.len()).map(|k| hi[k] - lo[k]).product();
        let local_tol = tol / 2.0f64.powi((lo.len() - axis) as i32) / span_above.max(1e-12);
        let mut err: Option<Error> = None;
        let mut g = |x: f64| -> f64 {
            point[axis] = x;
            if axis == 0 {
                evals.set(evals.get() + 1);
                f(point)
            } else {
                match level(f, lo, hi, &mut point.clone(), axis - 1, tol, eval_cap, evals) {
                    Ok(v) => v,
                    Err(e) => {
                        err = Some(e);
                        0.0
                    }
                }
            }
        };
        let r = adaptive(&mut g, lo[axis], hi[axis], local_tol, eval_cap)?;
        if evals.get() > eval_cap {
            return Err(Error::resource("cubature evaluations", eval_cap));
        }
        if let Some(e) = err {
            return Err(e);
        }
        Ok(r.value)
    }
    let mut point = vec![0.0; dim];
    let value = level(f, lo, hi, &mut point, dim - 1, tol, eval_cap, &evals)?;
    Ok(QuadResult { value, abs_error: tol, evaluations: evals.get() })
}

/// One Aitken delta-squared pass.
fn aitken_pass(s: &[f64]) -> Vec<f64> {
    if s.len() < 3 {
        return s.to_vec();
    }
    let mut out = Vec::with_capacity(s.len() - 2);
    for w in s.windows(3) {
        let denom = w[2] - 2.0 * w[1] + w[0];
        if denom == 0.0 || !denom.is_finite() {
            out.push(w[2]);
        } else {
            out.push(w[2] - (w[2] - w[1]).powi(2) / denom);
        }
    }
    out
}

/// Iterated Aitken extrapolation; returns the best available limit estimate.
pub fn aitken_limit(seq: &[f64]) -> f64 {
    let mut cur = seq.to_vec();
    while cur.len() >= 3 {
        let next = aitken_pass(&cur);
        if next.iter().any(|x| !x.is_finite()) {
            break;
        }
        cur = next;
    }
    *cur.last().unwrap_or(&f64::NAN)
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // Legendre P_n(x) and derivative via recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let mut p0 = 1.0;
        let mut p1 = x;
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn adaptive_matches_antiderivatives() {
        let mut f = |x: f64| x * x;
        let r = adaptive(&mut f, 0.0, 1.0, 1e-12, 100_000).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-12);

        let mut f = |x: f64| x.sin();
        let r = adaptive(&mut f, 0.0, PI, 1e-12, 100_000).unwrap();
        assert!((r.value - 2.0).abs() < 1e-11);

        let mut f = |x: f64| (-x).exp();
        let r = adaptive(&mut f, 0.0, 30.0, 1e-12, 1_000_000).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn adaptive_cap_is_enforced() {
        // A needle the cap cannot resolve.
        let mut f = |x: f64| 1.0 / ((x - 0.3141).powi(2) + 1e-18);
        assert!(adaptive(&mut f, 0.0, 1.0, 1e-14, 600).is_err());
    }

    #[test]
    fn box_cubature_2d() {
        // int over (0,1)x(0,2) of x*y = 1/2 * 2 = 1
        let f = |p: &[f64]| p[0] * p[1];
        let r = adaptive_box(&f, &[0.0, 0.0], &[1.0, 2.0], 1e-10, 10_000_000).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn box_cubature_3d() {
        let f = |p: &[f64]| p[0] + p[1] + p[2];
        let r = adaptive_box(&f, &[0.0; 3], &[1.0; 3], 1e-9, 50_000_000).unwrap();
        assert!((r.value - 1.5).abs() < 1e-8);
    }

    #[test]
    fn aitken_geometric() {
        // s_k = 1 - 2^-k converges to 1; Aitken nails geometric sequences.
        let seq: Vec<f64> = (0..8).map(|k| 1.0 - 0.5f64.powi(k)).collect();
        assert!((aitken_limit(&seq) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        // exact for degree <= 15: check x^10 on [-1,1] = 2/11
        let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(10)).sum();
        assert!((s - 2.0 / 11.0).abs() < 1e-13);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-13);
    }
}
