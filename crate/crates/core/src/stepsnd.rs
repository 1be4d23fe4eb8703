//! d-dimensional rectangles and step functions with the exact volume
//! integral, partial integrals, repeated-integral verification and dyadic
//! tilings of open sets.

use std::collections::HashMap;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat_zero, Rat};
use crate::steps1d::Interval;

/// Default cap on the number of cells materialized by canonicalization.
pub const DEFAULT_CELL_CAP: u64 = 1_000_000;

/// A product of bounded intervals. `axes.len()` is the ambient dimension;
/// dimension zero (the empty product) is the scalar unit cell used by
/// fully-reduced partial integrals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rectangle {
    axes: Vec<Interval>,
}

impl Rectangle {
    pub fn new(axes: Vec<Interval>) -> Rectangle {
        Rectangle { axes }
    }

    pub fn unit() -> Rectangle {
        Rectangle { axes: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Interval] {
        &self.axes
    }

    pub fn is_empty(&self) -> bool {
        self.axes.iter().any(|iv| iv.is_empty())
    }

    /// Product of widths; rectangles of lower dimension have volume zero.
    pub fn volume(&self) -> Rat {
        let mut v = Rat::one();
        for iv in &self.axes {
            v *= iv.width();
        }
        v
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.axes.len() == x.len() && self.axes.iter().zip(x).all(|(iv, c)| iv.contains(c))
    }
}

/// A step function on R^d: a finite linear combination of rectangles.
///
/// The sum form is kept as-is (the volume integral is linear, so most
/// operations need no refinement); `canonicalize` produces the disjoint
/// common-refinement form when pointwise structure matters.
#[derive(Debug, Clone)]
pub struct StepFunctionND {
    dim: usize,
    parts: Vec<(Rectangle, Rat)>,
}

impl StepFunctionND {
    pub fn zero(dim: usize) -> StepFunctionND {
        StepFunctionND { dim, parts: Vec::new() }
    }

    pub fn indicator(r: &Rectangle) -> StepFunctionND {
        StepFunctionND::from_terms(r.dim(), vec![(r.clone(), Rat::one())])
    }

    pub fn from_terms(dim: usize, terms: Vec<(Rectangle, Rat)>) -> StepFunctionND {
        let parts = terms
            .into_iter()
            .filter(|(r, c)| r.dim() == dim && !r.is_empty() && !c.is_zero())
            .collect();
        StepFunctionND { dim, parts }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parts(&self) -> &[(Rectangle, Rat)] {
        &self.parts
    }

    pub fn is_zero_form(&self) -> bool {
        self.parts.is_empty()
    }

    /// Exact pointwise evaluation (valid in sum form and canonical form).
    pub fn value_at(&self, x: &[Rat]) -> Rat {
        let mut v = rat_zero();
        for (r, c) in &self.parts {
            if r.contains(x) {
                v += c.clone();
            }
        }
        v
    }

    pub fn add(&self, other: &StepFunctionND) -> StepFunctionND {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut terms = self.parts.clone();
        terms.extend(other.parts.clone());
        StepFunctionND::from_terms(self.dim, terms)
    }

    pub fn scale(&self, alpha: &Rat) -> StepFunctionND {
        let terms = self.parts.iter().map(|(r, c)| (r.clone(), c * alpha)).collect();
        StepFunctionND::from_terms(self.dim, terms)
    }

    pub fn neg(&self) -> StepFunctionND {
        self.scale(&-Rat::one())
    }

    pub fn sub(&self, other: &StepFunctionND) -> StepFunctionND {
        self.add(&other.neg())
    }

    /// Exact volume integral: linear in the sum form, so no refinement is
    /// needed.
    pub fn volume_integral(&self) -> Rat {
        self.parts.iter().map(|(r, c)| c * r.volume()).sum()
    }

    /// The scalar carried by a zero-dimensional step function.
    pub fn scalar_value(&self) -> Rat {
        assert_eq!(self.dim, 0, "scalar_value needs dimension zero");
        self.parts.iter().map(|(_, c)| c.clone()).sum()
    }

    /// Integrates out the given axis (1-based like the ambient coordinate),
    /// producing an exact step function in the remaining variables.
    pub fn partial_integral(&self, axis: usize) -> Result<StepFunctionND> {
        if axis == 0 || axis > self.dim {
            return Err(Error::domain(format!(
                "axis {} out of range for dimension {}",
                axis, self.dim
            )));
        }
        let j = axis - 1;
        let mut acc: HashMap<Rectangle, Rat> = HashMap::new();
        for (r, c) in &self.parts {
            let w = r.axes()[j].width();
            if w.is_zero() {
                continue; // lower-dimensional part on this axis
            }
            let mut axes = r.axes().to_vec();
            axes.remove(j);
            let reduced = Rectangle::new(axes);
            *acc.entry(reduced).or_insert_with(rat_zero) += c * w;
        }
        let terms: Vec<(Rectangle, Rat)> = acc.into_iter().collect();
        Ok(StepFunctionND::from_terms(self.dim - 1, terms))
    }

    /// Canonical disjoint form on the per-axis common refinement.
    /// The cell count is capped to guard resources.
    pub fn canonicalize(&self, cap: u64) -> Result<StepFunctionND> {
        if self.parts.is_empty() {
            return Ok(StepFunctionND::zero(self.dim));
        }
        let grid = RefinementGrid::build(self.dim, self.parts.iter().map(|(r, _)| r))?;
        let mut acc: HashMap<Vec<u32>, Rat> = HashMap::new();
        let mut counted: u64 = 0;
        for (r, c) in &self.parts {
            let spans: Vec<Vec<u32>> = (0..self.dim).map(|ax| grid.covered(ax, &r.axes()[ax])).collect();
            let mut cells: u64 = 1;
            for s in &spans {
                cells = cells.saturating_mul(s.len() as u64);
            }
            counted = counted.saturating_add(cells);
            if counted > cap {
                return Err(Error::resource("canonicalization cell count", cap));
            }
            let mut idx = vec![0usize; self.dim];
            loop {
                let key: Vec<u32> = (0..self.dim).map(|ax| spans[ax][idx[ax]]).collect();
                *acc.entry(key).or_insert_with(rat_zero) += c.clone();
                // advance the multi-index
                let mut ax = 0;
                loop {
                    if ax == self.dim {
                        break;
                    }
                    idx[ax] += 1;
                    if idx[ax] < spans[ax].len() {
                        break;
                    }
                    idx[ax] = 0;
                    ax += 1;
                }
                if ax == self.dim {
                    break;
                }
            }
        }
        let mut terms: Vec<(Rectangle, Rat)> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(key, c)| (grid.cell(&key), c))
            .collect();
        terms.sort_by(|a, b| format!("{:?}", a.0).cmp(&format!("{:?}", b.0)));
        Ok(StepFunctionND { dim: self.dim, parts: terms })
    }

    /// Exact pointwise binary operation via the common refinement.
    fn pointwise_with(
        &self,
        other: &StepFunctionND,
        cap: u64,
        op: impl Fn(&Rat, &Rat) -> Rat,
    ) -> Result<StepFunctionND> {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let grid = RefinementGrid::build(
            self.dim,
            self.parts.iter().chain(other.parts.iter()).map(|(r, _)| r),
        )?;
        let mut keys: std::collections::HashSet<Vec<u32>> = std::collections::HashSet::new();
        let mut counted: u64 = 0;
        for (r, _) in self.parts.iter().chain(other.parts.iter()) {
            let spans: Vec<Vec<u32>> = (0..self.dim).map(|ax| grid.covered(ax, &r.axes()[ax])).collect();
            let mut cells: u64 = 1;
            for s in &spans {
                cells = cells.saturating_mul(s.len() as u64);
            }
            counted = counted.saturating_add(cells);
            if counted > cap {
                return Err(Error::resource("pointwise refinement cell count", cap));
            }
            let mut idx = vec![0usize; self.dim];
            if spans.iter().any(|s| s.is_empty()) {
                continue;
            }
            loop {
                keys.insert((0..self.dim).map(|ax| spans[ax][idx[ax]]).collect());
                let mut ax = 0;
                loop {
                    if ax == self.dim {
                        break;
                    }
                    idx[ax] += 1;
                    if idx[ax] < spans[ax].len() {
                        break;
                    }
                    idx[ax] = 0;
                    ax += 1;
                }
                if ax == self.dim {
                    break;
                }
            }
        }
        let mut terms: Vec<(Rectangle, Rat)> = Vec::new();
        for key in keys {
            let cell = grid.cell(&key);
            let x = grid.sample(&key);
            let v = op(&self.value_at(&x), &other.value_at(&x));
            if !v.is_zero() {
                terms.push((cell, v));
            }
        }
        terms.sort_by(|a, b| format!("{:?}", a.0).cmp(&format!("{:?}", b.0)));
        Ok(StepFunctionND { dim: self.dim, parts: terms })
    }

    pub fn mul(&self, other: &StepFunctionND, cap: u64) -> Result<StepFunctionND> {
        self.pointwise_with(other, cap, |a, b| a * b)
    }

    pub fn join(&self, other: &StepFunctionND, cap: u64) -> Result<StepFunctionND> {
        self.pointwise_with(other, cap, |a, b| if a >= b { a.clone() } else { b.clone() })
    }

    pub fn meet(&self, other: &StepFunctionND, cap: u64) -> Result<StepFunctionND> {
        self.pointwise_with(other, cap, |a, b| if a <= b { a.clone() } else { b.clone() })
    }

    /// Exact pointwise equality (independent of representation).
    pub fn pointwise_eq(&self, other: &StepFunctionND, cap: u64) -> Result<bool> {
        let diff = self.sub(other).canonicalize(cap)?;
        Ok(diff.parts.is_empty())
    }

    /// Exact pointwise `self <= other`; on failure returns a witness point.
    pub fn pointwise_le(
        &self,
        other: &StepFunctionND,
        cap: u64,
    ) -> Result<std::result::Result<(), Vec<Rat>>> {
        let diff = other.sub(self).canonicalize(cap)?;
        for (r, c) in diff.parts() {
            if c.is_negative() {
                let witness: Vec<Rat> = r
                    .axes()
                    .iter()
                    .map(|iv| {
                        if iv.is_point() {
                            iv.lo().clone()
                        } else {
                            (iv.lo() + iv.hi()) / Rat::from_integer(2.into())
                        }
                    })
                    .collect();
                return Ok(Err(witness));
            }
        }
        Ok(Ok(()))
    }
}

/// Per-axis common refinement bookkeeping. Part index `2k` is the point at
/// breakpoint `k`, `2k+1` the open interval to the next breakpoint.
struct RefinementGrid {
    axes: Vec<Vec<Rat>>,
}

impl RefinementGrid {
    fn build<'a>(dim: usize, rects: impl Iterator<Item = &'a Rectangle>) -> Result<RefinementGrid> {
        let mut axes: Vec<Vec<Rat>> = vec![Vec::new(); dim];
        for r in rects {
            if r.dim() != dim {
                return Err(Error::domain("mixed dimensions in refinement"));
            }
            for (ax, iv) in r.axes().iter().enumerate() {
                axes[ax].push(iv.lo().clone());
                axes[ax].push(iv.hi().clone());
            }
        }
        for a in &mut axes {
            a.sort();
            a.dedup();
        }
        Ok(RefinementGrid { axes })
    }

    /// Indices of axis parts covered by the interval.
    fn covered(&self, ax: usize, iv: &Interval) -> Vec<u32> {
        let breaks = &self.axes[ax];
        let mut out = Vec::new();
        for (k, p) in breaks.iter().enumerate() {
            if iv.contains(p) {
                out.push(2 * k as u32);
            }
            if let Some(q) = breaks.get(k + 1) {
                let mid = (p + q) / Rat::from_integer(2.into());
                if iv.contains(&mid) {
                    out.push(2 * k as u32 + 1);
                }
            }
        }
        out
    }

    fn axis_part(&self, ax: usize, code: u32) -> Interval {
        let breaks = &self.axes[ax];
        let k = (code / 2) as usize;
        if code % 2 == 0 {
            Interval::point(breaks[k].clone())
        } else {
            Interval::open(breaks[k].clone(), breaks[k + 1].clone()).expect("grid order")
        }
    }

    fn cell(&self, key: &[u32]) -> Rectangle {
        Rectangle::new(
            key.iter().enumerate().map(|(ax, &code)| self.axis_part(ax, code)).collect(),
        )
    }

    fn sample(&self, key: &[u32]) -> Vec<Rat> {
        key.iter()
            .enumerate()
            .map(|(ax, &code)| {
                let iv = self.axis_part(ax, code);
                if iv.is_point() {
                    iv.lo().clone()
                } else {
                    (iv.lo() + iv.hi()) / Rat::from_integer(2.into())
                }
            })
            .collect()
    }
}

/// Report from checking the repeated integral formula on all axis orders.
#[derive(Debug)]
pub struct FubiniReport {
    pub volume: Rat,
    pub orders_checked: usize,
    pub mismatch: Option<(Vec<usize>, Rat)>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n);
            out.push(q);
        }
    }
    out
}

/// Asserts that the volume integral equals every axis-order composition of
/// partial integrals, exactly.
pub fn repeated_integral_check(f: &StepFunctionND) -> Result<FubiniReport> {
    let volume = f.volume_integral();
    let orders = permutations(f.dim());
    for order in &orders {
        let mut g = f.clone();
        // Axis labels refer to the original coordinates; integrating axis j
        // removes it, shifting the labels above it down by one.
        let mut remaining: Vec<usize> = (1..=f.dim()).collect();
        for &ax in order {
            let pos = remaining.iter().position(|&a| a == ax).expect("axis present");
            g = g.partial_integral(pos + 1)?;
            remaining.remove(pos);
        }
        let repeated = g.scalar_value();
        if repeated != volume {
            return Ok(FubiniReport {
                volume,
                orders_checked: orders.len(),
                mismatch: Some((order.clone(), repeated)),
            });
        }
    }
    Ok(FubiniReport { volume, orders_checked: orders.len(), mismatch: None })
}

/// A finite stage of the dyadic tiling of an open set: disjoint open-closed
/// cells `((k-1)/2^n, k/2^n]^d` whose closures the membership predicate
/// certifies to lie inside the set.
#[derive(Debug, Clone)]
pub struct Tiling {
    pub level: u32,
    pub tiles: Vec<Rectangle>,
}

impl Tiling {
    pub fn total_volume(&self) -> Rat {
        self.tiles.iter().map(|t| t.volume()).sum()
    }
}

/// Enumerates the level-`n` dyadic cells meeting `bbox` whose closures the
/// conservative predicate places inside the open set.
///
/// The predicate receives the *closed* hull of each candidate cell and must
/// answer "closure contained in U" without false positives.
pub fn dyadic_tiling(
    inside: &dyn Fn(&Rectangle) -> bool,
    level: u32,
    bbox: &Rectangle,
    cap: u64,
) -> Result<Tiling> {
    let d = bbox.dim();
    if d == 0 {
        return Err(Error::domain("bounding box must have dimension >= 1"));
    }
    let scale = Rat::new(num::BigInt::one(), num::BigInt::from(2u32).pow(level));
    // Index ranges per axis: cells ((k-1)s, ks] meeting (lo, hi).
    let mut ranges: Vec<(i64, i64)> = Vec::with_capacity(d);
    let mut count: u64 = 1;
    for iv in bbox.axes() {
        let lo = (iv.lo() / &scale).floor();
        let hi = (iv.hi() / &scale).ceil();
        let lo = num::ToPrimitive::to_i64(lo.numer()).ok_or_else(|| Error::domain("bbox too large"))?;
        let hi = num::ToPrimitive::to_i64(hi.numer()).ok_or_else(|| Error::domain("bbox too large"))?;
        ranges.push((lo + 1, hi));
        let span = (hi - lo).max(0) as u64;
        count = count.saturating_mul(span);
        if count > cap {
            return Err(Error::resource("dyadic cell count", cap));
        }
    }
    let mut tiles = Vec::new();
    let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    if ranges.iter().any(|(a, b)| a > b) {
        return Ok(Tiling { level, tiles });
    }
    loop {
        let cell = Rectangle::new(
            idx.iter()
                .map(|&k| {
                    let hi = Rat::from_integer(k.into()) * &scale;
                    let lo = Rat::from_integer((k - 1).into()) * &scale;
                    Interval::oc(lo, hi).expect("dyadic order")
                })
                .collect(),
        );
        let closure = Rectangle::new(
            cell.axes()
                .iter()
                .map(|iv| Interval::closed(iv.lo().clone(), iv.hi().clone()).expect("order"))
                .collect(),
        );
        if inside(&closure) {
            tiles.push(cell);
        }
        // advance
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
    Ok(Tiling { level, tiles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int, rat_to_f64};

    fn oc(a: i64, b: i64) -> Interval {
        Interval::oc(rat_int(a), rat_int(b)).unwrap()
    }

    #[test]
    fn volume_examples() {
        let r = Rectangle::new(vec![oc(0, 1), oc(0, 2)]);
        assert_eq!(StepFunctionND::indicator(&r).volume_integral(), rat_int(2));
        // A segment {0} x (0,1] in R^2 has volume zero.
        let seg = Rectangle::new(vec![Interval::point(rat_int(0)), oc(0, 1)]);
        assert_eq!(StepFunctionND::indicator(&seg).volume_integral(), rat_int(0));
    }

    #[test]
    fn partial_integral_examples() {
        let r = Rectangle::new(vec![oc(0, 1), oc(0, 2)]);
        let f = StepFunctionND::indicator(&r);
        let g = f.partial_integral(2).unwrap();
        assert_eq!(g.dim(), 1);
        assert_eq!(g.value_at(&[rat(1, 2)]), rat_int(2));
        // Lower-dimensional part integrates to the zero function.
        let seg = Rectangle::new(vec![Interval::point(rat_int(0)), oc(0, 1)]);
        let z = StepFunctionND::indicator(&seg).partial_integral(1).unwrap();
        assert!(z.is_zero_form());
    }

    #[test]
    fn repeated_integral_single_rectangle() {
        let r = Rectangle::new(vec![oc(0, 2), oc(0, 3), oc(0, 5)]);
        let f = StepFunctionND::indicator(&r);
        let rep = repeated_integral_check(&f).unwrap();
        assert_eq!(rep.volume, rat_int(30));
        assert_eq!(rep.orders_checked, 6);
        assert!(rep.mismatch.is_none());
    }

    #[test]
    fn repeated_integral_zero() {
        let rep = repeated_integral_check(&StepFunctionND::zero(3)).unwrap();
        assert_eq!(rep.volume, rat_int(0));
        assert!(rep.mismatch.is_none());
    }

    #[test]
    fn canonical_overlap_2d() {
        let a = Rectangle::new(vec![oc(0, 2), oc(0, 2)]);
        let b = Rectangle::new(vec![oc(1, 3), oc(1, 3)]);
        let f = StepFunctionND::indicator(&a).add(&StepFunctionND::indicator(&b));
        let c = f.canonicalize(DEFAULT_CELL_CAP).unwrap();
        assert_eq!(c.value_at(&[rat(3, 2), rat(3, 2)]), rat_int(2));
        assert_eq!(c.value_at(&[rat(1, 2), rat(1, 2)]), rat_int(1));
        assert_eq!(c.volume_integral(), f.volume_integral());
        // Canonical parts are disjoint: every point value is a single part's coefficient.
        let probe = vec![rat(3, 2), rat(3, 2)];
        let hits = c.parts().iter().filter(|(r, _)| r.contains(&probe)).count();
        assert_eq!(hits, 1);
    }

    #[test]
    fn indicator_product_is_intersection_nd() {
        let a = StepFunctionND::indicator(&Rectangle::new(vec![oc(0, 2), oc(0, 2)]));
        let b = StepFunctionND::indicator(&Rectangle::new(vec![oc(1, 3), oc(0, 2)]));
        let p = a.mul(&b, DEFAULT_CELL_CAP).unwrap();
        let expected = StepFunctionND::indicator(&Rectangle::new(vec![oc(1, 2), oc(0, 2)]));
        assert!(p.pointwise_eq(&expected, DEFAULT_CELL_CAP).unwrap());
    }

    #[test]
    fn lattice_identity_nd() {
        let f = StepFunctionND::indicator(&Rectangle::new(vec![oc(0, 2), oc(0, 1)]));
        let g = StepFunctionND::indicator(&Rectangle::new(vec![oc(1, 3), oc(0, 2)]));
        let lhs = f.join(&g, DEFAULT_CELL_CAP).unwrap().add(&f.meet(&g, DEFAULT_CELL_CAP).unwrap());
        let rhs = f.add(&g);
        assert!(lhs.pointwise_eq(&rhs, DEFAULT_CELL_CAP).unwrap());
    }

    #[test]
    fn tiling_unit_interval_level3() {
        // U = (0,1): tiles of total width >= 1 - 2/8 at level 3.
        let inside = |r: &Rectangle| {
            let iv = &r.axes()[0];
            iv.lo() > &rat_int(0) && iv.hi() < &rat_int(1)
        };
        let bbox = Rectangle::new(vec![oc(0, 1)]);
        let t = dyadic_tiling(&inside, 3, &bbox, DEFAULT_CELL_CAP).unwrap();
        assert_eq!(t.tiles.len(), 6);
        assert!(t.total_volume() >= rat_int(1) - rat(2, 8));
    }

    #[test]
    fn tiling_empty_set() {
        let inside = |_: &Rectangle| false;
        let bbox = Rectangle::new(vec![oc(0, 1), oc(0, 1)]);
        let t = dyadic_tiling(&inside, 4, &bbox, DEFAULT_CELL_CAP).unwrap();
        assert!(t.tiles.is_empty());
    }

    fn disk_inside(r: &Rectangle) -> bool {
        // closure subset of the open unit disk <=> the farthest corner is
        // strictly inside; exact in rationals.
        let x = r.axes()[0].lo().abs().max(r.axes()[0].hi().abs());
        let y = r.axes()[1].lo().abs().max(r.axes()[1].hi().abs());
        &x * &x + &y * &y < rat_int(1)
    }

    #[test]
    fn tiling_disk_monotone_and_convergent() {
        let bbox = Rectangle::new(vec![
            Interval::oc(rat_int(-1), rat_int(1)).unwrap(),
            Interval::oc(rat_int(-1), rat_int(1)).unwrap(),
        ]);
        let mut prev = rat_int(0);
        for level in [2u32, 4, 6, 8] {
            let t = dyadic_tiling(&disk_inside, level, &bbox, DEFAULT_CELL_CAP).unwrap();
            let vol = t.total_volume();
            assert!(vol >= prev, "tile volume must be nondecreasing in level");
            assert!(rat_to_f64(&vol) <= std::f64::consts::PI);
            prev = vol;
        }
        assert!(std::f64::consts::PI - rat_to_f64(&prev) < 0.05);
    }

    #[test]
    fn tiling_disjointness_spot() {
        let bbox = Rectangle::new(vec![
            Interval::oc(rat_int(-1), rat_int(1)).unwrap(),
            Interval::oc(rat_int(-1), rat_int(1)).unwrap(),
        ]);
        let t = dyadic_tiling(&disk_inside, 4, &bbox, DEFAULT_CELL_CAP).unwrap();
        // Indicator sum equals join (0/1-valued): tiles are disjoint.
        let sum = t
            .tiles
            .iter()
            .fold(StepFunctionND::zero(2), |acc, r| acc.add(&StepFunctionND::indicator(r)));
        let c = sum.canonicalize(DEFAULT_CELL_CAP).unwrap();
        assert!(c.parts().iter().all(|(_, v)| *v == rat_int(1)));
    }

    #[test]
    fn cell_cap_enforced() {
        let inside = |_: &Rectangle| true;
        let bbox = Rectangle::new(vec![oc(0, 1), oc(0, 1)]);
        let err = dyadic_tiling(&inside, 12, &bbox, 1000).unwrap_err();
        matches!(err, Error::Resource { .. });
    }
}
