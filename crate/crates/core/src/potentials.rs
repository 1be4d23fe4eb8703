//! Coulomb/Newton potentials with a singularity cut: the ball around the
//! evaluation point is never quadratured, only bounded analytically and
//! charged to the error budget; the outer region integrates in
//! radial-spherical form. Includes gradients, Poisson-residual checks in
//! 3D and the 2D logarithmic potential.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quad::{adaptive, gauss_legendre};

/// A charge density with a caller-declared decay certificate
/// `|rho(y)| <= M (1 + |y|)^-beta` and a local sup-bound callback.
#[derive(Clone)]
pub struct Density {
    pub dim: usize,
    rho: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    pub decay_m: f64,
    pub decay_beta: f64,
    local_bound: Arc<dyn Fn(&[f64], f64) -> f64 + Send + Sync>,
}

impl Density {
    pub fn new(
        dim: usize,
        rho: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        decay_m: f64,
        decay_beta: f64,
        local_bound: impl Fn(&[f64], f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Density> {
        if decay_m <= 0.0 || decay_beta <= 0.0 {
            return Err(Error::domain("decay certificate needs M > 0, beta > 0"));
        }
        Ok(Density {
            dim,
            rho: Arc::new(rho),
            decay_m,
            decay_beta,
            local_bound: Arc::new(local_bound),
        })
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        (self.rho)(y)
    }

    /// `sup |rho| over the closed ball of radius delta at a`.
    pub fn local_sup(&self, a: &[f64], delta: f64) -> f64 {
        (self.local_bound)(a, delta)
    }

    /// The standard Gaussian bump `e^{-|y|^2}` with a valid certificate.
    pub fn gaussian(dim: usize) -> Density {
        let rho = |y: &[f64]| (-(y.iter().map(|c| c * c).sum::<f64>())).exp();
        // e^{-r^2} <= 30 (1+r)^{-6} everywhere
        let local = |a: &[f64], delta: f64| {
            let r = a.iter().map(|c| c * c).sum::<f64>().sqrt();
            let nearest = (r - delta).max(0.0);
            (-(nearest * nearest)).exp()
        };
        Density::new(dim, rho, 30.0, 6.0, local).expect("valid")
    }

    /// Uniform density on the ball of the given radius with unit total
    /// charge (dimension 2 or 3).
    pub fn uniform_ball(dim: usize, radius: f64) -> Density {
        let vol = match dim {
            2 => std::f64::consts::PI * radius * radius,
            3 => 4.0 / 3.0 * std::f64::consts::PI * radius.powi(3),
            _ => panic!("uniform ball provided for dimensions 2 and 3"),
        };
        let rho0 = 1.0 / vol;
        let r2 = radius * radius;
        let rho = move |y: &[f64]| {
            if y.iter().map(|c| c * c).sum::<f64>() <= r2 {
                rho0
            } else {
                0.0
            }
        };
        let m = rho0 * (1.0 + radius).powi(8);
        let local = move |a: &[f64], delta: f64| {
            let r = a.iter().map(|c| c * c).sum::<f64>().sqrt();
            if r - delta <= radius {
                rho0
            } else {
                0.0
            }
        };
        Density::new(dim, rho, m, 8.0, local).expect("valid")
    }

    /// A C-infinity bump supported in the ball of the given radius:
    /// `exp(-1/(1 - (|y|/R)^2))` inside, zero outside. Radially
    /// nonincreasing, so the local bound is exact.
    pub fn smooth_bump(dim: usize, radius: f64) -> Density {
        let r2 = radius * radius;
        let rho = move |y: &[f64]| {
            let s = y.iter().map(|c| c * c).sum::<f64>() / r2;
            if s >= 1.0 {
                0.0
            } else {
                (-1.0 / (1.0 - s)).exp()
            }
        };
        let m = (1.0 + radius).powi(8);
        let local = move |a: &[f64], delta: f64| {
            let r = a.iter().map(|c| c * c).sum::<f64>().sqrt();
            let nearest = (r - delta).max(0.0);
            let s = nearest * nearest / r2;
            if s >= 1.0 {
                0.0
            } else {
                (-1.0 / (1.0 - s)).exp()
            }
        };
        Density::new(dim, rho, m, 8.0, local).expect("valid")
    }

    pub fn zero(dim: usize) -> Density {
        Density::new(dim, |_| 0.0, 1.0, 8.0, |_, _| 0.0).expect("valid")
    }

    /// Spot-checks the decay certificate at random points; an observed
    /// violation rejects the density.
    pub fn spot_check_decay(&self, seed: u64, samples: usize) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let y: Vec<f64> = (0..self.dim).map(|_| rng.gen_range(-20.0..20.0)).collect();
            let r = y.iter().map(|c| c * c).sum::<f64>().sqrt();
            let bound = self.decay_m * (1.0 + r).powf(-self.decay_beta);
            if self.eval(&y).abs() > bound * (1.0 + 1e-9) {
                return Err(Error::domain(format!(
                    "decay certificate violated at |y| = {}",
                    r
                )));
            }
        }
        Ok(())
    }
}

fn sphere_area(dim: usize) -> f64 {
    match dim {
        2 => 2.0 * std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI,
        _ => panic!("spherical quadrature provided for dimensions 2 and 3"),
    }
}

/// Fixed-order spherical quadrature nodes `(weight, direction)`.
/// Product Gauss in the polar angle and trapezoid in the periodic one.
fn sphere_nodes(dim: usize, polar_order: usize, azimuthal_order: usize) -> Vec<(f64, Vec<f64>)> {
    match dim {
        2 => {
            let n = azimuthal_order;
            let w = 2.0 * std::f64::consts::PI / n as f64;
            (0..n)
                .map(|j| {
                    let phi = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                    (w, vec![phi.cos(), phi.sin()])
                })
                .collect()
        }
        3 => {
            let (nodes, weights) = gauss_legendre(polar_order);
            let n = azimuthal_order;
            let wphi = 2.0 * std::f64::consts::PI / n as f64;
            let mut out = Vec::with_capacity(polar_order * n);
            for (ct, wt) in nodes.iter().zip(&weights) {
                let st = (1.0 - ct * ct).max(0.0).sqrt();
                for j in 0..n {
                    let phi = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                    out.push((wt * wphi, vec![st * phi.cos(), st * phi.sin(), *ct]));
                }
            }
            out
        }
        _ => panic!("spherical quadrature provided for dimensions 2 and 3"),
    }
}

/// Potential value with its certified error budget.
#[derive(Debug, Clone, Copy)]
pub struct PotentialValue {
    pub value: f64,
    /// Inner-ball bound + analytic tail bound + quadrature estimates.
    pub budget: f64,
    pub evaluations: u64,
    pub delta_used: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct PotentialOptions {
    pub polar_order: usize,
    pub azimuthal_order: usize,
    pub eval_cap: u64,
    pub delta_floor_factor: f64,
}

impl Default for PotentialOptions {
    fn default() -> Self {
        PotentialOptions {
            polar_order: 32,
            azimuthal_order: 64,
            eval_cap: 200_000_000,
            delta_floor_factor: 1e-6,
        }
    }
}

/// Analytic bound on the tail `int_R^inf r^p |S(r)| dr` from the decay
/// certificate, where `S(r)` is the spherical average times the area.
fn tail_bound(dim: usize, p: f64, rho: &Density, x_norm: f64, r0: f64) -> f64 {
    // for r >= r0 >= 2(|x|+1): r <= 2(1 + r - |x|), so
    // r^p <= 2^max(p,0) (1 + r - |x|)^p
    let beta = rho.decay_beta;
    let expo = p - beta; // integrand bounded by C u^{p - beta}
    if expo >= -1.0 {
        return f64::INFINITY;
    }
    let u0 = 1.0 + r0 - x_norm;
    sphere_area(dim) * rho.decay_m * 2.0f64.powf(p.max(0.0)) * u0.powf(expo + 1.0) / (-(expo + 1.0))
}

struct RadialScan {
    value: f64,
    quad_error: f64,
    tail: f64,
    evaluations: u64,
}

/// Integrates `int_delta^inf r^p S(r) dr` where `S(r)` is the spherical
/// integral of a direction-dependent integrand.
fn radial_scan(
    rho: &Density,
    x: &[f64],
    p: f64,
    delta: f64,
    tol: f64,
    opts: &PotentialOptions,
    weight: &dyn Fn(f64, &[f64], f64) -> f64, // (r, omega, rho_val) -> contribution
) -> Result<RadialScan> {
    let dim = rho.dim;
    let nodes = sphere_nodes(dim, opts.polar_order, opts.azimuthal_order);
    let x_norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
    let evals = std::cell::Cell::new(0u64);
    let shell = |r: f64| -> f64 {
        let mut s = 0.0;
        for (w, omega) in &nodes {
            let y: Vec<f64> = (0..dim).map(|k| x[k] + r * omega[k]).collect();
            let val = rho.eval(&y);
            s += w * weight(r, omega, val);
        }
        evals.set(evals.get() + nodes.len() as u64);
        r.powf(p) * s
    };
    let mut r_hi = (2.0 * (x_norm + 1.0)).max(2.0 * delta);
    let mut value = 0.0;
    let mut quad_error = 0.0;
    let mut lo = delta;
    let mut tail;
    loop {
        let mut f = |r: f64| shell(r);
        let r = adaptive(&mut f, lo, r_hi, tol / 16.0, opts.eval_cap)?;
        value += r.value;
        quad_error += r.abs_error;
        tail = tail_bound(dim, p, rho, x_norm, r_hi);
        if tail < tol / 4.0 {
            break;
        }
        lo = r_hi;
        r_hi *= 2.0;
        if evals.get() > opts.eval_cap {
            return Err(Error::resource("potential evaluations", opts.eval_cap));
        }
    }
    Ok(RadialScan { value, quad_error, tail, evaluations: evals.get() })
}

/// The Coulomb potential `phi_gamma(x) = int rho(y) / |x-y|^gamma dy`.
///
/// The ball `|y - x| <= delta` contributes only its analytic bound
/// `sup|rho| * |S^{d-1}| * delta^{d-gamma} / (d-gamma)` to the budget;
/// `delta` is halved automatically until the budget fits the tolerance.
pub fn coulomb_potential(
    rho: &Density,
    gamma: f64,
    x: &[f64],
    delta: f64,
    tol: f64,
    opts: &PotentialOptions,
) -> Result<PotentialValue> {
    let d = rho.dim;
    if x.len() != d {
        return Err(Error::domain("point dimension mismatch"));
    }
    if gamma >= d as f64 {
        return Err(Error::domain("coulomb potential needs gamma < d"));
    }
    if rho.decay_beta + gamma <= d as f64 {
        return Err(Error::domain("decay certificate too weak: need beta + gamma > d"));
    }
    let mut delta = delta;
    let floor = delta * opts.delta_floor_factor;
    let mut evaluations = 0u64;
    loop {
        let inner =
            rho.local_sup(x, delta) * sphere_area(d) * delta.powf(d as f64 - gamma) / (d as f64 - gamma);
        if inner <= tol / 2.0 {
            let p = d as f64 - gamma - 1.0;
            let scan = radial_scan(rho, x, p, delta, tol, opts, &|_, _, v| v)?;
            evaluations += scan.evaluations;
            return Ok(PotentialValue {
                value: scan.value,
                budget: inner + scan.tail + scan.quad_error,
                evaluations,
                delta_used: delta,
            });
        }
        delta *= 0.5;
        if delta < floor {
            return Err(Error::resource("singularity cut refinement", 1));
        }
    }
}

/// The gradient `phi_gamma'(x) = gamma int (y-x)/|x-y|^{gamma+2} rho(y) dy`.
pub fn coulomb_gradient(
    rho: &Density,
    gamma: f64,
    x: &[f64],
    delta: f64,
    tol: f64,
    opts: &PotentialOptions,
) -> Result<(Vec<f64>, f64)> {
    let d = rho.dim;
    if gamma + 1.0 >= d as f64 {
        return Err(Error::domain("gradient needs d - gamma - 1 > 0"));
    }
    let mut delta = delta;
    let floor = delta * opts.delta_floor_factor;
    loop {
        let inner = gamma
            * rho.local_sup(x, delta)
            * sphere_area(d)
            * delta.powf(d as f64 - gamma - 1.0)
            / (d as f64 - gamma - 1.0);
        if inner <= tol / 2.0 {
            let p = d as f64 - gamma - 2.0;
            let mut grad = vec![0.0; d];
            let mut budget = inner;
            for axis in 0..d {
                let scan = radial_scan(rho, x, p, delta, tol, opts, &|_, omega, v| omega[axis] * v)?;
                grad[axis] = gamma * scan.value;
                budget += gamma * (scan.tail + scan.quad_error);
            }
            return Ok((grad, budget));
        }
        delta *= 0.5;
        if delta < floor {
            return Err(Error::resource("singularity cut refinement", 1));
        }
    }
}

/// Poisson-equation residual at a point: compares `-laplacian(phi)` by
/// second central differences against `|S^{d-1}| rho(a)`.
#[derive(Debug, Clone, Copy)]
pub struct PoissonReport {
    pub neg_laplacian: f64,
    pub source_value: f64,
    pub residual: f64,
    pub relative: f64,
}

pub fn poisson_residual(
    rho: &Density,
    a: &[f64],
    h_fd: f64,
    tol: f64,
    opts: &PotentialOptions,
) -> Result<PoissonReport> {
    let d = rho.dim;
    if d != 3 {
        return Err(Error::domain("poisson residual: the Coulomb case is d = 3, gamma = d - 2"));
    }
    let gamma = d as f64 - 2.0;
    let phi_tol = tol * h_fd * h_fd / (8.0 * d as f64);
    let phi = |p: &[f64]| -> Result<f64> {
        Ok(coulomb_potential(rho, gamma, p, 0.05, phi_tol, opts)?.value)
    };
    let center = phi(a)?;
    let mut lap = 0.0;
    for axis in 0..d {
        let mut plus = a.to_vec();
        plus[axis] += h_fd;
        let mut minus = a.to_vec();
        minus[axis] -= h_fd;
        lap += (phi(&plus)? - 2.0 * center + phi(&minus)?) / (h_fd * h_fd);
    }
    let neg_laplacian = -lap;
    let source_value = sphere_area(d) * rho.eval(a);
    let residual = (neg_laplacian - source_value).abs();
    let relative = if source_value != 0.0 { residual / source_value.abs() } else { residual };
    Ok(PoissonReport { neg_laplacian, source_value, residual, relative })
}

/// The 2D logarithmic potential `phi(x) = -int rho(y) log|x-y| dy`.
pub fn log_potential_2d(
    rho: &Density,
    x: &[f64],
    delta: f64,
    tol: f64,
    opts: &PotentialOptions,
) -> Result<PotentialValue> {
    let d = rho.dim;
    if d != 2 {
        return Err(Error::domain("log potential is the d = 2 case"));
    }
    if rho.decay_beta <= 2.0 {
        return Err(Error::domain("decay certificate too weak: need beta > 2"));
    }
    let mut delta = delta.min(0.5);
    let floor = delta * opts.delta_floor_factor;
    loop {
        // int_{|u|<=delta} |log|u|| du = 2 pi (delta^2/4 - delta^2 log(delta)/2)
        let inner = rho.local_sup(x, delta)
            * 2.0
            * std::f64::consts::PI
            * (delta * delta / 4.0 - delta * delta * delta.ln() / 2.0);
        if inner <= tol / 2.0 {
            // radial form: -int_delta^inf r log r S(r) dr needs a custom
            // tail bound because of the log factor: log r <= r^s / s.
            let s = (rho.decay_beta - 2.0) / 2.0;
            let x_norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
            let nodes = sphere_nodes(2, opts.polar_order, opts.azimuthal_order);
            let evals = std::cell::Cell::new(0u64);
            let shell = |r: f64| -> f64 {
                let mut acc = 0.0;
                for (w, omega) in &nodes {
                    let y = [x[0] + r * omega[0], x[1] + r * omega[1]];
                    acc += w * rho.eval(&y);
                }
                evals.set(evals.get() + nodes.len() as u64);
                -r * r.ln() * acc
            };
            let mut lo = delta;
            let mut r_hi = (2.0 * (x_norm + 1.0)).max(2.0 * delta);
            let mut value = 0.0;
            let mut quad_error = 0.0;
            let tail = loop {
                let mut f = |r: f64| shell(r);
                let r = adaptive(&mut f, lo, r_hi, tol / 16.0, opts.eval_cap)?;
                value += r.value;
                quad_error += r.abs_error;
                let u0 = 1.0 + r_hi - x_norm;
                let expo = 1.0 + s - rho.decay_beta;
                let t = 2.0 * std::f64::consts::PI
                    * rho.decay_m
                    * 2.0f64.powf(1.0 + s)
                    / s
                    * u0.powf(expo + 1.0)
                    / (-(expo + 1.0));
                if t < tol / 4.0 {
                    break t;
                }
                lo = r_hi;
                r_hi *= 2.0;
                if evals.get() > opts.eval_cap {
                    return Err(Error::resource("potential evaluations", opts.eval_cap));
                }
            };
            return Ok(PotentialValue {
                value,
                budget: inner + tail + quad_error,
                evaluations: evals.get(),
                delta_used: delta,
            });
        }
        delta *= 0.5;
        if delta < floor {
            return Err(Error::resource("singularity cut refinement", 1));
        }
    }
}

/// 2D analog of the Poisson residual: `-laplacian(phi) = 2 pi rho`.
pub fn log_poisson_residual_2d(
    rho: &Density,
    a: &[f64],
    h_fd: f64,
    tol: f64,
    opts: &PotentialOptions,
) -> Result<PoissonReport> {
    let phi_tol = tol * h_fd * h_fd / 16.0;
    let phi = |p: &[f64]| -> Result<f64> { Ok(log_potential_2d(rho, p, 0.05, phi_tol, opts)?.value) };
    let center = phi(a)?;
    let mut lap = 0.0;
    for axis in 0..2 {
        let mut plus = a.to_vec();
        plus[axis] += h_fd;
        let mut minus = a.to_vec();
        minus[axis] -= h_fd;
        lap += (phi(&plus)? - 2.0 * center + phi(&minus)?) / (h_fd * h_fd);
    }
    let neg_laplacian = -lap;
    let source_value = 2.0 * std::f64::consts::PI * rho.eval(a);
    let residual = (neg_laplacian - source_value).abs();
    let relative = if source_value != 0.0 { residual / source_value.abs() } else { residual };
    Ok(PoissonReport { neg_laplacian, source_value, residual, relative })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_opts() -> PotentialOptions {
        PotentialOptions::default()
    }

    /// Shell-theorem oracle for radial densities in 3D with gamma = 1:
    /// phi(r) = 4 pi [ (1/r) int_0^r s^2 rho(s) ds + int_r^inf s rho(s) ds ].
    fn shell_oracle_3d(rho_radial: &dyn Fn(f64) -> f64, r: f64) -> f64 {
        let mut inner = |s: f64| s * s * rho_radial(s);
        let a = adaptive(&mut inner, 0.0, r, 1e-12, 10_000_000).unwrap().value;
        let mut outer = |s: f64| s * rho_radial(s);
        let b = adaptive(&mut outer, r, 40.0, 1e-12, 10_000_000).unwrap().value;
        4.0 * std::f64::consts::PI * (a / r + b)
    }

    #[test]
    fn gaussian_matches_shell_theorem() {
        let rho = Density::gaussian(3);
        rho.spot_check_decay(1, 1000).unwrap();
        for r in [0.5, 1.0, 2.0] {
            let x = [r, 0.0, 0.0];
            let got = coulomb_potential(&rho, 1.0, &x, 0.05, 1e-4, &default_opts()).unwrap();
            let want = shell_oracle_3d(&|s| (-(s * s)).exp(), r);
            assert!(
                (got.value - want).abs() <= got.budget.max(1e-4),
                "r = {}: got {} want {} budget {}",
                r,
                got.value,
                want,
                got.budget
            );
        }
    }

    #[test]
    fn zero_density_gives_zero() {
        let rho = Density::zero(3);
        let got = coulomb_potential(&rho, 1.0, &[0.3, 0.1, -0.2], 0.05, 1e-8, &default_opts()).unwrap();
        assert_eq!(got.value, 0.0);
    }

    #[test]
    fn uniform_ball_outside_is_point_charge() {
        // total charge 1: phi(x) = 1/|x| outside the ball.
        let rho = Density::uniform_ball(3, 1.0);
        let x = [2.5, 0.0, 0.0];
        let got = coulomb_potential(&rho, 1.0, &x, 0.05, 1e-4, &default_opts()).unwrap();
        assert!(
            (got.value - 1.0 / 2.5).abs() < 2e-3,
            "got {} want {}",
            got.value,
            1.0 / 2.5
        );
    }

    #[test]
    fn delta_robustness() {
        // halving delta changes the value by less than the reported budget
        let rho = Density::gaussian(3);
        let x = [0.7, -0.3, 0.2];
        let a = coulomb_potential(&rho, 1.0, &x, 0.08, 1e-4, &default_opts()).unwrap();
        let b = coulomb_potential(&rho, 1.0, &x, 0.04, 1e-4, &default_opts()).unwrap();
        assert!((a.value - b.value).abs() <= a.budget + b.budget);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let rho = Density::gaussian(3);
        let x = [0.8, 0.2, -0.4];
        let (grad, _) = coulomb_gradient(&rho, 1.0, &x, 0.05, 1e-5, &default_opts()).unwrap();
        let h = 1e-2;
        for axis in 0..3 {
            let mut plus = x.to_vec();
            plus[axis] += h;
            let mut minus = x.to_vec();
            minus[axis] -= h;
            let fp = coulomb_potential(&rho, 1.0, &plus, 0.05, 1e-7, &default_opts()).unwrap().value;
            let fm = coulomb_potential(&rho, 1.0, &minus, 0.05, 1e-7, &default_opts()).unwrap().value;
            let fd = (fp - fm) / (2.0 * h);
            let rel = (grad[axis] - fd).abs() / fd.abs().max(1e-6);
            assert!(rel < 1e-3, "axis {}: analytic {} fd {}", axis, grad[axis], fd);
        }
    }

    #[test]
    fn gradient_is_radial_for_radial_density() {
        let rho = Density::gaussian(3);
        let x = [1.2, 0.0, 0.0];
        let (grad, _) = coulomb_gradient(&rho, 1.0, &x, 0.05, 1e-5, &default_opts()).unwrap();
        // gradient points toward -x, transverse components vanish
        assert!(grad[0] < 0.0);
        assert!(grad[1].abs() < 1e-6 && grad[2].abs() < 1e-6);
        let zero = Density::zero(3);
        let (g0, _) = coulomb_gradient(&zero, 1.0, &x, 0.05, 1e-6, &default_opts()).unwrap();
        assert!(g0.iter().all(|c| *c == 0.0));
    }

    #[test]
    fn poisson_residual_gaussian() {
        let rho = Density::gaussian(3);
        let rep = poisson_residual(&rho, &[0.0, 0.0, 0.0], 0.05, 1e-2, &default_opts()).unwrap();
        assert!(
            rep.relative <= 1e-2,
            "residual {} relative {} (-lap {} vs {})",
            rep.residual,
            rep.relative,
            rep.neg_laplacian,
            rep.source_value
        );
    }

    #[test]
    fn harmonicity_away_from_support() {
        // Smooth density vanishing near the probe: -lap phi ~ 0 there.
        // Seen from the probe the support subtends a small angle, so the
        // spherical orders go up accordingly.
        let rho = Density::smooth_bump(3, 0.5);
        let opts = PotentialOptions { polar_order: 96, azimuthal_order: 192, ..Default::default() };
        let rep = poisson_residual(&rho, &[2.0, 0.0, 0.0], 0.05, 1e-2, &opts).unwrap();
        assert_eq!(rep.source_value, 0.0);
        assert!(rep.neg_laplacian.abs() < 2e-2, "got {}", rep.neg_laplacian);
    }

    #[test]
    fn log_potential_outside_support_tracks_point_charge() {
        // radial smooth bump of charge Q: phi(x) = -Q log|x| outside the
        // support by the 2D shell argument.
        let rho = Density::smooth_bump(2, 1.0);
        let mut charge_integrand = |r: f64| {
            2.0 * std::f64::consts::PI * r * rho.eval(&[r, 0.0])
        };
        let q = adaptive(&mut charge_integrand, 0.0, 1.0, 1e-12, 10_000_000).unwrap().value;
        let opts = PotentialOptions { azimuthal_order: 1024, ..Default::default() };
        for r in [2.0f64, 3.0] {
            let got = log_potential_2d(&rho, &[r, 0.0], 0.05, 1e-5, &opts).unwrap();
            assert!(
                (got.value + q * r.ln()).abs() < 1e-3,
                "r = {}: got {} want {}",
                r,
                got.value,
                -q * r.ln()
            );
        }
    }

    #[test]
    fn log_poisson_residual_2d_gaussian() {
        let rho = Density::gaussian(2);
        let rep = log_poisson_residual_2d(&rho, &[0.0, 0.0], 0.05, 1e-2, &default_opts()).unwrap();
        assert!(rep.relative <= 1e-2, "relative {}", rep.relative);
    }

    #[test]
    fn rejects_bad_parameters() {
        let rho = Density::gaussian(3);
        assert!(coulomb_potential(&rho, 3.0, &[0.0; 3], 0.05, 1e-6, &default_opts()).is_err());
        assert!(coulomb_gradient(&rho, 2.5, &[0.0; 3], 0.05, 1e-6, &default_opts()).is_err());
        let weak = Density::new(3, |_| 0.0, 1.0, 1.0, |_, _| 0.0).unwrap();
        assert!(coulomb_potential(&weak, 1.0, &[0.0; 3], 0.05, 1e-6, &default_opts()).is_err());
    }
}
