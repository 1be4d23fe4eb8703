//! Jacobian change of variables, surface integrals via the Gram extent
//! density, coarea and divergence checks, and the exact determinant
//! toolbox (Gram, Sylvester, Cauchy-Binet).

use num::{One, Zero};

use crate::darboux::BoxF;
use crate::error::{Error, Result};
use crate::quad::{adaptive, adaptive_box, QuadResult};
use crate::rational::Rat;
use crate::stepsnd::Rectangle;

// ---------------------------------------------------------------------------
// exact rational matrices

/// Dense exact-rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Result<RatMat> {
        if data.len() != rows * cols {
            return Err(Error::domain("matrix data length mismatch"));
        }
        Ok(RatMat { rows, cols, data })
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Result<RatMat> {
        RatMat::new(rows, cols, data.iter().map(|&v| Rat::from_integer(v.into())).collect())
    }

    pub fn zero(rows: usize, cols: usize) -> RatMat {
        RatMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> RatMat {
        let mut m = RatMat::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rat {
        &mut self.data[r * self.cols + c]
    }

    pub fn matmul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * other.at(k, j);
                    *out.at_mut(i, j) += prod;
                }
            }
        }
        out
    }

    pub fn neg(&self) -> RatMat {
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v.clone()).collect(),
        }
    }

    /// Exact determinant by fraction Gaussian elimination.
    pub fn det(&self) -> Result<Rat> {
        if self.rows != self.cols {
            return Err(Error::domain("determinant needs a square matrix"));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero());
            let Some(p) = pivot else { return Ok(Rat::zero()) };
            if p != col {
                for j in 0..n {
                    a.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let piv = a[col * n + col].clone();
            det *= piv.clone();
            for r in col + 1..n {
                let factor = &a[r * n + col] / &piv;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let sub = &factor * &a[col * n + j];
                    a[r * n + j] -= sub;
                }
            }
        }
        Ok(det)
    }

    /// Coefficients of `det(tI + M)` in ascending powers of `t`
    /// (Faddeev-LeVerrier recursion, exact over the rationals).
    pub fn char_poly_shifted(&self) -> Result<Vec<Rat>> {
        if self.rows != self.cols {
            return Err(Error::domain("characteristic polynomial needs a square matrix"));
        }
        let n = self.rows;
        // det(tI - M) = t^n + c_1 t^{n-1} + ... + c_n via the recursion
        // N_1 = M, c_k = -tr(M N_{k-1} + ...)/k; run it on -M to shift signs.
        let m = self.neg();
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one(); // t^n
        let mut nk = m.clone();
        let mut ck = Rat::zero();
        for k in 1..=n {
            if k > 1 {
                // N_k = M (N_{k-1} + c_{k-1} I)
                let mut shifted = nk.clone();
                for i in 0..n {
                    *shifted.at_mut(i, i) += ck.clone();
                }
                nk = m.matmul(&shifted);
            }
            let trace: Rat = (0..n).map(|i| nk.at(i, i).clone()).sum();
            ck = -trace / Rat::from_integer((k as i64).into());
            coeffs[n - k] = ck.clone();
        }
        Ok(coeffs)
    }

    fn minor(&self, keep_rows: &[usize], keep_cols: &[usize]) -> RatMat {
        let mut data = Vec::with_capacity(keep_rows.len() * keep_cols.len());
        for &r in keep_rows {
            for &c in keep_cols {
                data.push(self.at(r, c).clone());
            }
        }
        RatMat { rows: keep_rows.len(), cols: keep_cols.len(), data }
    }
}

fn subsets_of_size(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, m, &mut Vec::new(), &mut out);
    out
}

/// Exact polynomial comparison of `t^n det(tI_m + AB)` against
/// `t^m det(tI_n + BA)`.
#[derive(Debug)]
pub struct SylvesterReport {
    pub lhs: Vec<Rat>,
    pub rhs: Vec<Rat>,
    pub equal: bool,
}

pub fn sylvester_identity_check(a: &RatMat, b: &RatMat) -> Result<SylvesterReport> {
    if a.rows != b.cols || a.cols != b.rows {
        return Err(Error::domain("need A m x n against B n x m"));
    }
    let m = a.rows;
    let n = a.cols;
    let ab = a.matmul(b);
    let ba = b.matmul(a);
    let pab = ab.char_poly_shifted()?; // degree m
    let pba = ba.char_poly_shifted()?; // degree n
    let deg = m + n;
    let mut lhs = vec![Rat::zero(); deg + 1];
    for (k, c) in pab.iter().enumerate() {
        lhs[k + n] = c.clone();
    }
    let mut rhs = vec![Rat::zero(); deg + 1];
    for (k, c) in pba.iter().enumerate() {
        rhs[k + m] = c.clone();
    }
    let equal = lhs == rhs;
    Ok(SylvesterReport { lhs, rhs, equal })
}

/// Cauchy-Binet comparison. Four quantities are reported:
/// `det(AB)`; the column-subset sum `sum_J det(A_J) det(B^J)`; the sum of
/// principal m x m minors of `BA` (the coefficient-of-t^n form, always
/// equal to the other two); and the complementary-minor sum over `BA`
/// (minors of size n - m indexed by the complement of J), which coincides
/// with the rest exactly when `n = 2m`. The last one is reported rather
/// than reconciled so that the mismatch stays visible.
#[derive(Debug)]
pub struct CauchyBinetReport {
    pub det_ab: Rat,
    pub subset_sum: Rat,
    pub principal_minor_sum: Rat,
    pub complementary_sum: Rat,
    /// det(AB) == subset sum == principal-minor sum.
    pub identity_holds: bool,
    /// the complementary-minor sum also matches.
    pub complementary_matches: bool,
}

pub fn cauchy_binet_check(a: &RatMat, b: &RatMat) -> Result<CauchyBinetReport> {
    if a.rows != b.cols || a.cols != b.rows {
        return Err(Error::domain("need A m x n against B n x m"));
    }
    let m = a.rows;
    let n = a.cols;
    if m >= n {
        return Err(Error::domain("cauchy-binet comparison needs m < n"));
    }
    let det_ab = a.matmul(b).det()?;
    let all_rows: Vec<usize> = (0..m).collect();
    let mut subset_sum = Rat::zero();
    for j in subsets_of_size(n, m) {
        let aj = a.minor(&all_rows, &j);
        let bj = b.minor(&j, &all_rows);
        subset_sum += aj.det()? * bj.det()?;
    }
    let ba = b.matmul(a);
    let mut principal_minor_sum = Rat::zero();
    for k in subsets_of_size(n, m) {
        principal_minor_sum += ba.minor(&k, &k).det()?;
    }
    let mut complementary_sum = Rat::zero();
    for j in subsets_of_size(n, m) {
        let keep: Vec<usize> = (0..n).filter(|k| !j.contains(k)).collect();
        complementary_sum += ba.minor(&keep, &keep).det()?;
    }
    let identity_holds = det_ab == subset_sum && det_ab == principal_minor_sum;
    let complementary_matches = det_ab == complementary_sum;
    Ok(CauchyBinetReport {
        det_ab,
        subset_sum,
        principal_minor_sum,
        complementary_sum,
        identity_holds,
        complementary_matches,
    })
}

// ---------------------------------------------------------------------------
// float matrices and charts

/// Small dense f64 matrix, row-major.
#[derive(Debug, Clone)]
pub struct MatF {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl MatF {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> MatF {
        assert_eq!(data.len(), rows * cols);
        MatF { rows, cols, data }
    }

    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    /// Gram matrix `M^T M` (cols x cols).
    pub fn gram(&self) -> MatF {
        let mut g = vec![0.0; self.cols * self.cols];
        for i in 0..self.cols {
            for j in 0..self.cols {
                let mut s = 0.0;
                for r in 0..self.rows {
                    s += self.at(r, i) * self.at(r, j);
                }
                g[i * self.cols + j] = s;
            }
        }
        MatF::new(self.cols, self.cols, g)
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut p = col;
            for r in col + 1..n {
                if a[r * n + col].abs() > a[p * n + col].abs() {
                    p = r;
                }
            }
            if a[p * n + col] == 0.0 {
                return 0.0;
            }
            if p != col {
                for j in 0..n {
                    a.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let piv = a[col * n + col];
            det *= piv;
            for r in col + 1..n {
                let f = a[r * n + col] / piv;
                for j in col..n {
                    a[r * n + j] -= f * a[col * n + j];
                }
            }
        }
        det
    }
}

/// A parametrization `u -> phi(u)` of an m-dimensional object in R^d with
/// its derivative callback.
pub struct Chart<'a> {
    pub m: usize,
    pub d: usize,
    pub phi: Box<dyn Fn(&[f64]) -> Vec<f64> + 'a>,
    /// d x m differential at u.
    pub dphi: Box<dyn Fn(&[f64]) -> MatF + 'a>,
    pub domain: ChartDomain<'a>,
}

pub enum ChartDomain<'a> {
    Box(BoxF),
    /// An open parameter set described by conservative cell predicates over
    /// exact closed hulls: `inside` certifies the closure lies in the set,
    /// `outside` (optional pruning) certifies it misses the set.
    Open {
        bbox: BoxF,
        inside: Box<dyn Fn(&Rectangle) -> bool + 'a>,
        outside: Option<Box<dyn Fn(&Rectangle) -> bool + 'a>>,
        max_level: u32,
    },
}

impl<'a> Chart<'a> {
    pub fn new_box(
        m: usize,
        d: usize,
        domain: BoxF,
        phi: impl Fn(&[f64]) -> Vec<f64> + 'a,
        dphi: impl Fn(&[f64]) -> MatF + 'a,
    ) -> Result<Chart<'a>> {
        if m > d || m == 0 {
            return Err(Error::domain("chart needs 1 <= m <= d"));
        }
        if domain.dim() != m {
            return Err(Error::domain("domain dimension must equal m"));
        }
        Ok(Chart { m, d, phi: Box::new(phi), dphi: Box::new(dphi), domain: ChartDomain::Box(domain) })
    }
}

/// The extent density `sqrt(det(dphi^T dphi))` at `u`.
pub fn gram_extent_density(chart: &Chart<'_>, u: &[f64]) -> f64 {
    let j = (chart.dphi)(u);
    j.gram().det().max(0.0).sqrt()
}

/// The m-volume of the parallelotope spanned by the given vectors in R^d.
pub fn gram_parallelotope_volume(vectors: &[Vec<f64>]) -> Result<f64> {
    if vectors.is_empty() {
        return Err(Error::domain("need at least one vector"));
    }
    let d = vectors[0].len();
    if vectors.iter().any(|v| v.len() != d) || vectors.len() > d {
        return Err(Error::domain("need m <= d vectors of equal dimension"));
    }
    let m = vectors.len();
    let mut data = vec![0.0; d * m];
    for (c, v) in vectors.iter().enumerate() {
        for (r, &x) in v.iter().enumerate() {
            data[r * m + c] = x;
        }
    }
    let j = MatF::new(d, m, data);
    Ok(j.gram().det().max(0.0).sqrt())
}

fn integrate_domain(
    domain: &ChartDomain<'_>,
    integrand: &dyn Fn(&[f64]) -> f64,
    tol: f64,
    eval_cap: u64,
) -> Result<QuadResult> {
    match domain {
        ChartDomain::Box(b) => adaptive_box(integrand, &b.lo, &b.hi, tol, eval_cap),
        ChartDomain::Open { bbox, inside, outside, max_level } => {
            // Frontier descent through the dyadic stages: a cell certified
            // inside is integrated at the level where it first qualifies, a
            // cell certified outside is pruned, anything undecided splits
            // into its children. Work stays proportional to the boundary.
            let d = bbox.dim();
            let base_level = 2u32;
            let make_closed = |ks: &[i64], s: f64| -> Rectangle {
                Rectangle::new(
                    ks.iter()
                        .map(|&k| {
                            let lo = crate::rational::rat_from_f64((k - 1) as f64 * s).unwrap();
                            let hi = crate::rational::rat_from_f64(k as f64 * s).unwrap();
                            crate::steps1d::Interval::closed(lo, hi).unwrap()
                        })
                        .collect(),
                )
            };
            let scale0 = 0.5f64.powi(base_level as i32);
            let mut frontier: Vec<Vec<i64>> = Vec::new();
            {
                let ranges: Vec<(i64, i64)> = (0..d)
                    .map(|k| {
                        let lo = (bbox.lo[k] / scale0).floor() as i64 + 1;
                        let hi = (bbox.hi[k] / scale0).ceil() as i64;
                        (lo, hi)
                    })
                    .collect();
                if ranges.iter().any(|(a, b)| a > b) {
                    return Ok(QuadResult { value: 0.0, abs_error: 0.0, evaluations: 0 });
                }
                let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
                loop {
                    frontier.push(idx.clone());
                    let mut ax = 0;
                    loop {
                        if ax == d {
                            break;
                        }
                        idx[ax] += 1;
                        if idx[ax] <= ranges[ax].1 {
                            break;
                        }
                        idx[ax] = ranges[ax].0;
                        ax += 1;
                    }
                    if ax == d {
                        break;
                    }
                }
            }
            let mut total = 0.0f64;
            let mut totals: Vec<f64> = Vec::new();
            let mut last_extrapolated = f64::NAN;
            let mut evals = 0u64;
            let mut small_increments = 0usize;
            for level in base_level..=*max_level {
                let scale = 0.5f64.powi(level as i32);
                let mut fresh: Vec<Vec<i64>> = Vec::new();
                let mut next: Vec<Vec<i64>> = Vec::new();
                for ks in frontier.drain(..) {
                    let closure = make_closed(&ks, scale);
                    if inside(&closure) {
                        fresh.push(ks);
                    } else if outside.as_ref().map_or(false, |out| out(&closure)) {
                        // pruned
                    } else if level < *max_level {
                        // split into children
                        let mut child = vec![0i64; d];
                        let mut sel = vec![0u8; d];
                        loop {
                            for k in 0..d {
                                child[k] = 2 * ks[k] - 1 + sel[k] as i64;
                            }
                            next.push(child.clone());
                            let mut ax = 0;
                            loop {
                                if ax == d {
                                    break;
                                }
                                sel[ax] += 1;
                                if sel[ax] < 2 {
                                    break;
                                }
                                sel[ax] = 0;
                                ax += 1;
                            }
                            if ax == d {
                                break;
                            }
                        }
                    }
                }
                let level_budget = tol / 4.0 * 0.5f64.powi((level - base_level) as i32);
                let per_tile = level_budget / (fresh.len() as f64).max(1.0);
                let mut increment = 0.0f64;
                for ks in fresh {
                    let lo: Vec<f64> = ks.iter().map(|&k| (k - 1) as f64 * scale).collect();
                    let hi: Vec<f64> = ks.iter().map(|&k| k as f64 * scale).collect();
                    let budget = eval_cap.saturating_sub(evals);
                    if budget < 1000 {
                        return Err(Error::resource("cubature evaluations", eval_cap));
                    }
                    let r = adaptive_box(integrand, &lo, &hi, per_tile, budget)?;
                    increment += r.value;
                    evals += r.evaluations;
                }
                total += increment;
                totals.push(total);
                if level > base_level && increment.abs() < tol / 4.0 {
                    small_increments += 1;
                    if small_increments >= 2 {
                        return Ok(QuadResult { value: total, abs_error: tol, evaluations: evals });
                    }
                } else {
                    small_increments = 0;
                }
                // The level totals miss a boundary layer whose mass decays
                // geometrically; accelerate and stop once the extrapolated
                // limit settles.
                if totals.len() >= 3 {
                    let extr = crate::quad::aitken_limit(&totals);
                    if (extr - last_extrapolated).abs() < tol / 2.0 {
                        return Ok(QuadResult {
                            value: extr,
                            abs_error: (extr - total).abs() + tol,
                            evaluations: evals,
                        });
                    }
                    last_extrapolated = extr;
                }
                frontier = next;
                if frontier.is_empty() {
                    return Ok(QuadResult { value: total, abs_error: tol, evaluations: evals });
                }
            }
            Err(Error::resource("tiling level", *max_level as u64))
        }
    }
}

/// Surface integral `int_M f |dx|_M` through the chart.
pub fn surface_integral(
    chart: &Chart<'_>,
    f: &dyn Fn(&[f64]) -> f64,
    tol: f64,
    eval_cap: u64,
) -> Result<QuadResult> {
    let integrand = |u: &[f64]| {
        let x = (chart.phi)(u);
        f(&x) * gram_extent_density(chart, u)
    };
    integrate_domain(&chart.domain, &integrand, tol, eval_cap)
}

/// Total extent (area, length) of the chart image.
pub fn extent(chart: &Chart<'_>, tol: f64, eval_cap: u64) -> Result<QuadResult> {
    surface_integral(chart, &|_| 1.0, tol, eval_cap)
}

/// Length of a curve chart (m = 1).
pub fn curve_length(chart: &Chart<'_>, tol: f64, eval_cap: u64) -> Result<QuadResult> {
    if chart.m != 1 {
        return Err(Error::domain("curve length needs an m = 1 chart"));
    }
    extent(chart, tol, eval_cap)
}

/// Change-of-variables integral: `int_V g = int_U g(phi(x)) |det phi'(x)| dx`
/// evaluated on the right-hand side (the chart must have m = d).
pub fn jacobian_integrate(
    chart: &Chart<'_>,
    g: &dyn Fn(&[f64]) -> f64,
    tol: f64,
    eval_cap: u64,
) -> Result<QuadResult> {
    if chart.m != chart.d {
        return Err(Error::domain("jacobian integration needs m = d"));
    }
    let integrand = |u: &[f64]| {
        let x = (chart.phi)(u);
        let j = (chart.dphi)(u);
        g(&x) * j.det().abs()
    };
    integrate_domain(&chart.domain, &integrand, tol, eval_cap)
}

/// A scalar level function with its gradient callback.
pub struct LevelFunction<'a> {
    pub psi: Box<dyn Fn(&[f64]) -> f64 + 'a>,
    pub grad: Box<dyn Fn(&[f64]) -> Vec<f64> + 'a>,
}

impl<'a> LevelFunction<'a> {
    pub fn new(
        psi: impl Fn(&[f64]) -> f64 + 'a,
        grad: impl Fn(&[f64]) -> Vec<f64> + 'a,
    ) -> LevelFunction<'a> {
        LevelFunction { psi: Box::new(psi), grad: Box::new(grad) }
    }
}

/// Flux of the vector field through the level surface parametrized by the
/// chart: `int F . n |dx|` with `n = grad psi / |grad psi|`.
pub fn flux_integral(
    level: &LevelFunction<'_>,
    field: &dyn Fn(&[f64]) -> Vec<f64>,
    chart: &Chart<'_>,
    tol: f64,
    eval_cap: u64,
) -> Result<QuadResult> {
    let f = |x: &[f64]| {
        let g = (level.grad)(x);
        let norm: f64 = g.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let fv = field(x);
        fv.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>() / norm
    };
    surface_integral(chart, &f, tol, eval_cap)
}

/// Coarea comparison for a scalar submersion: the weighted volume integral
/// against the v-integral of level-surface integrals.
#[derive(Debug)]
pub struct CoareaReport {
    pub volume_side: f64,
    pub level_side: f64,
    pub discrepancy: f64,
    pub within_tol: bool,
}

/// `charts_at(v)` must parametrize the level set `[psi = v]`.
pub fn coarea_check<'a>(
    level: &LevelFunction<'_>,
    f: &dyn Fn(&[f64]) -> f64,
    volume_domain: &BoxF,
    v_range: (f64, f64),
    charts_at: &dyn Fn(f64) -> Chart<'a>,
    tol: f64,
    eval_cap: u64,
) -> Result<CoareaReport> {
    // Left side: int f(x) |grad psi(x)| dx over the support box.
    let lhs_integrand = |x: &[f64]| {
        let g = (level.grad)(x);
        let norm: f64 = g.iter().map(|c| c * c).sum::<f64>().sqrt();
        f(x) * norm
    };
    let lhs = adaptive_box(&lhs_integrand, &volume_domain.lo, &volume_domain.hi, tol / 4.0, eval_cap)?;
    // Right side: int dv of the surface integral over [psi = v].
    let mut inner = |v: f64| -> f64 {
        let chart = charts_at(v);
        surface_integral(&chart, f, tol / 8.0 / (v_range.1 - v_range.0).max(1.0), eval_cap)
            .map(|r| r.value)
            .unwrap_or(f64::NAN)
    };
    let rhs = adaptive(&mut inner, v_range.0, v_range.1, tol / 4.0, eval_cap)?;
    let discrepancy = (lhs.value - rhs.value).abs();
    Ok(CoareaReport {
        volume_side: lhs.value,
        level_side: rhs.value,
        discrepancy,
        within_tol: discrepancy <= tol,
    })
}

/// Divergence-theorem comparison over `[a <= psi <= b]`: the volume
/// integral of `div F` (via the coarea route) against the flux difference
/// between the two boundary levels.
#[derive(Debug)]
pub struct DivergenceReport {
    pub volume_side: f64,
    pub flux_side: f64,
    pub discrepancy: f64,
    pub within_tol: bool,
}

pub fn divergence_check<'a>(
    level: &LevelFunction<'_>,
    field: &dyn Fn(&[f64]) -> Vec<f64>,
    divergence: &dyn Fn(&[f64]) -> f64,
    v_range: (f64, f64),
    charts_at: &dyn Fn(f64) -> Chart<'a>,
    tol: f64,
    eval_cap: u64,
) -> Result<DivergenceReport> {
    let (a, b) = v_range;
    if !(a < b) {
        return Err(Error::domain("need a < b"));
    }
    // Volume side via coarea: int_a^b dv int_{[psi=v]} div F / |grad psi|.
    let mut inner = |v: f64| -> f64 {
        let chart = charts_at(v);
        let f = |x: &[f64]| {
            let g = (level.grad)(x);
            let norm: f64 = g.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm == 0.0 {
                0.0
            } else {
                divergence(x) / norm
            }
        };
        surface_integral(&chart, &f, tol / 8.0 / (b - a).max(1.0), eval_cap)
            .map(|r| r.value)
            .unwrap_or(f64::NAN)
    };
    let volume_side = adaptive(&mut inner, a, b, tol / 4.0, eval_cap)?.value;
    let flux_b = flux_integral(level, field, &charts_at(b), tol / 4.0, eval_cap)?.value;
    let flux_a = flux_integral(level, field, &charts_at(a), tol / 4.0, eval_cap)?.value;
    let flux_side = flux_b - flux_a;
    let discrepancy = (volume_side - flux_side).abs();
    Ok(DivergenceReport { volume_side, flux_side, discrepancy, within_tol: discrepancy <= tol })
}

// ---------------------------------------------------------------------------
// stock charts used by the CLI and tests

/// Sphere of radius `r` in R^3: chart over (0, pi) x (0, 2 pi).
pub fn sphere_chart<'a>(r: f64) -> Chart<'a> {
    Chart::new_box(
        2,
        3,
        BoxF::new(vec![0.0, 0.0], vec![std::f64::consts::PI, 2.0 * std::f64::consts::PI]).unwrap(),
        move |u| {
            let (th, ph) = (u[0], u[1]);
            vec![r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos()]
        },
        move |u| {
            let (th, ph) = (u[0], u[1]);
            MatF::new(
                3,
                2,
                vec![
                    r * th.cos() * ph.cos(),
                    -r * th.sin() * ph.sin(),
                    r * th.cos() * ph.sin(),
                    r * th.sin() * ph.cos(),
                    -r * th.sin(),
                    0.0,
                ],
            )
        },
    )
    .expect("valid chart")
}

/// Torus with center radius `a` and tube radius `b`.
pub fn torus_chart<'a>(a: f64, b: f64) -> Chart<'a> {
    let two_pi = 2.0 * std::f64::consts::PI;
    Chart::new_box(
        2,
        3,
        BoxF::new(vec![0.0, 0.0], vec![two_pi, two_pi]).unwrap(),
        move |u| {
            let (ph, th) = (u[0], u[1]);
            vec![(a + b * th.sin()) * ph.cos(), (a + b * th.sin()) * ph.sin(), b * th.cos()]
        },
        move |u| {
            let (ph, th) = (u[0], u[1]);
            MatF::new(
                3,
                2,
                vec![
                    -(a + b * th.sin()) * ph.sin(),
                    b * th.cos() * ph.cos(),
                    (a + b * th.sin()) * ph.cos(),
                    b * th.cos() * ph.sin(),
                    0.0,
                    -b * th.sin(),
                ],
            )
        },
    )
    .expect("valid chart")
}

/// Circle of radius `r` in R^2.
pub fn circle_chart<'a>(r: f64) -> Chart<'a> {
    Chart::new_box(
        1,
        2,
        BoxF::new(vec![0.0], vec![2.0 * std::f64::consts::PI]).unwrap(),
        move |u| vec![r * u[0].cos(), r * u[0].sin()],
        move |u| MatF::new(2, 1, vec![-r * u[0].sin(), r * u[0].cos()]),
    )
    .expect("valid chart")
}

/// Polar coordinates on (0, R) x (-pi, pi) as an m = d = 2 chart.
pub fn polar_chart<'a>(r_max: f64) -> Chart<'a> {
    Chart::new_box(
        2,
        2,
        BoxF::new(vec![0.0, -std::f64::consts::PI], vec![r_max, std::f64::consts::PI]).unwrap(),
        |u| vec![u[0] * u[1].cos(), u[0] * u[1].sin()],
        |u| {
            MatF::new(
                2,
                2,
                vec![u[1].cos(), -u[0] * u[1].sin(), u[1].sin(), u[0] * u[1].cos()],
            )
        },
    )
    .expect("valid chart")
}

/// The standard simplex face `{x >= 0, x_1 + ... + x_d = 1}` in R^d,
/// parametrized over its projection (an m = d-1 open simplex); provided for
/// d = 3 over a triangle domain.
pub fn simplex_face_chart_3d<'a>() -> Chart<'a> {
    Chart {
        m: 2,
        d: 3,
        phi: Box::new(|u| vec![u[0], u[1], 1.0 - u[0] - u[1]]),
        dphi: Box::new(|_| MatF::new(3, 2, vec![1.0, 0.0, 0.0, 1.0, -1.0, -1.0])),
        domain: ChartDomain::Open {
            bbox: BoxF::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap(),
            inside: Box::new(|r: &Rectangle| {
                // closure inside the open triangle {u > 0, v > 0, u + v < 1}
                let u_lo = r.axes()[0].lo();
                let v_lo = r.axes()[1].lo();
                let u_hi = r.axes()[0].hi();
                let v_hi = r.axes()[1].hi();
                u_lo > &Rat::zero() && v_lo > &Rat::zero() && (u_hi + v_hi) < Rat::one()
            }),
            outside: Some(Box::new(|r: &Rectangle| {
                let u_hi = r.axes()[0].hi();
                let v_hi = r.axes()[1].hi();
                let u_lo = r.axes()[0].lo();
                let v_lo = r.axes()[1].lo();
                u_hi <= &Rat::zero() || v_hi <= &Rat::zero() || (u_lo + v_lo) >= Rat::one()
            })),
            max_level: 16,
        },
    }
}
