//! Approximate semi-conjugacy `H(x, y) = (x, h_x(y))` onto `Phi x L`.
//!
//! The perturbation only moves fibers along `v^s`, so `h_x` is a correction
//! `w v^s` given by the backward series
//! `w(P) = -sum_{k=1..K} eig_s^{k-1} D(F^{-k} P)`, `D` the one-step
//! displacement. Truncating at depth `K` leaves the residual
//! `|eig_s|^K |D(F^{-K} P)|` in `H o F = (Phi x L) o H`.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::seed::task_rng;
use crate::system::{ProductPoint, ShubSystem, SystemError};
use crate::torus::torus_distance;

/// Signed `v^s` displacement the flow adds to `L y` at `pt`. Exactly zero
/// off the support.
pub fn displacement_term(sys: &ShubSystem, pt: ProductPoint) -> Result<f64, SystemError> {
    Ok(sys.step(pt)?.1.displacement)
}

/// The series coefficient `w` at `pt` for depth `k`.
pub fn correction(sys: &ShubSystem, pt: ProductPoint, k: usize) -> Result<f64, SystemError> {
    if !sys.is_perturbed() {
        return Ok(0.0);
    }
    let eig = sys.l().eig_s;
    let mut w = 0.0;
    let mut weight = 1.0;
    let mut back = pt;
    for _ in 0..k {
        back = sys.map_inverse(back)?;
        w -= weight * displacement_term(sys, back)?;
        weight *= eig;
    }
    Ok(w)
}

/// `H_K(pt)`. The base is passed through unchanged.
pub fn h_approx(sys: &ShubSystem, pt: ProductPoint, k: usize) -> Result<ProductPoint, SystemError> {
    let w = correction(sys, pt, k)?;
    if w == 0.0 {
        return Ok(pt);
    }
    let vs = sys.chart().v_s;
    Ok(ProductPoint::new(pt.base, pt.fiber.translate([w * vs[0], w * vs[1]])))
}

/// `d(H_K(F pt), (Phi x L)(H_K pt))`, taking the larger of the two
/// component distances.
pub fn conjugacy_defect(sys: &ShubSystem, pt: ProductPoint, k: usize) -> Result<f64, SystemError> {
    let lhs = h_approx(sys, sys.map_forward(pt)?, k)?;
    let rhs = sys.product_map(h_approx(sys, pt, k)?);
    Ok(torus_distance(lhs.base, rhs.base).max(torus_distance(lhs.fiber, rhs.fiber)))
}

fn sample_points(sample_size: usize, seed: u64) -> Vec<ProductPoint> {
    (0..sample_size)
        .map(|i| ProductPoint::random(&mut task_rng(seed, i as u64)))
        .collect()
}

fn par_max<F>(points: &[ProductPoint], f: F) -> Result<f64, SystemError>
where
    F: Fn(ProductPoint) -> Result<f64, SystemError> + Sync,
{
    let vals = points.par_iter().map(|&p| f(p)).collect::<Result<Vec<_>, _>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

/// Supremum of [`conjugacy_defect`] over `sample_size` seeded uniform points.
pub fn semiconjugacy_residual(sys: &ShubSystem, sample_size: usize, k: usize, seed: u64) -> Result<f64, SystemError> {
    let pts = sample_points(sample_size.max(1), seed);
    par_max(&pts, |p| conjugacy_defect(sys, p, k))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiconjApprox {
    pub depth: usize,
    /// Measured supremum of `|D|`.
    pub e_sup: f64,
    /// `|eig_s|^K e_sup / (1 - |eig_s|)`.
    pub error_bound: f64,
}

/// Sup of `|D|` over seeded uniform points.
pub fn displacement_sup(sys: &ShubSystem, sample_size: usize, seed: u64) -> Result<f64, SystemError> {
    let pts = sample_points(sample_size.max(1), seed);
    par_max(&pts, |p| displacement_term(sys, p).map(f64::abs))
}

pub fn semiconj_approx(sys: &ShubSystem, depth: usize, e_sup: f64) -> SemiconjApprox {
    let ls = sys.l().lambda_s;
    SemiconjApprox {
        depth,
        e_sup,
        error_bound: ls.powi(depth as i32) * e_sup / (1.0 - ls),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualRow {
    pub depth: usize,
    pub residual: f64,
    pub error_bound: f64,
}

/// Residuals for each depth on one common sample.
pub fn residual_sweep(
    sys: &ShubSystem,
    depths: &[usize],
    sample_size: usize,
    seed: u64,
) -> Result<Vec<ResidualRow>, SystemError> {
    let e_sup = displacement_sup(sys, sample_size, seed ^ 0x5eed)?;
    depths
        .iter()
        .map(|&k| {
            Ok(ResidualRow {
                depth: k,
                residual: semiconjugacy_residual(sys, sample_size, k, seed)?,
                error_bound: semiconj_approx(sys, k, e_sup).error_bound,
            })
        })
        .collect()
}

pub fn residual_csv(rows: &[ResidualRow]) -> String {
    let mut out = String::from("depth,residual,error_bound\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.depth, r.residual, r.error_bound);
    }
    out
}

/// Least-squares slope of `ln(residual)` against depth. `None` when a
/// residual is not positive.
pub fn log_residual_slope(rows: &[ResidualRow]) -> Option<f64> {
    if rows.len() < 2 || rows.iter().any(|r| !(r.residual > 0.0)) {
        return None;
    }
    let n = rows.len() as f64;
    let xm = rows.iter().map(|r| r.depth as f64).sum::<f64>() / n;
    let ym = rows.iter().map(|r| r.residual.ln()).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for r in rows {
        let dx = r.depth as f64 - xm;
        sxy += dx * (r.residual.ln() - ym);
        sxx += dx * dx;
    }
    Some(sxy / sxx)
}

/// Box counts on the `b^4` grid of `T^2 x T^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxHistogram {
    pub boxes_per_axis: usize,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl BoxHistogram {
    pub fn new(boxes_per_axis: usize) -> Self {
        let b = boxes_per_axis.max(1);
        BoxHistogram {
            boxes_per_axis: b,
            counts: vec![0; b.pow(4)],
            total: 0,
        }
    }

    /// Index `i1 + b i2 + b^2 i3 + b^3 i4` over `(x1, x2, y1, y2)`.
    pub fn box_index(&self, p: &ProductPoint) -> usize {
        let b = self.boxes_per_axis;
        let cell = |v: f64| ((v * b as f64).floor() as usize).min(b - 1);
        [p.base.x1, p.base.x2, p.fiber.x1, p.fiber.x2]
            .iter()
            .rev()
            .fold(0, |acc, &v| acc * b + cell(v))
    }

    pub fn add(&mut self, p: &ProductPoint) {
        let i = self.box_index(p);
        self.counts[i] += 1;
        self.total += 1;
    }

    /// `max_box |count / total - b^-4|`.
    pub fn discrepancy(&self) -> f64 {
        if self.total == 0 {
            return 1.0;
        }
        let expected = 1.0 / self.counts.len() as f64;
        self.counts
            .iter()
            .map(|&c| (c as f64 / self.total as f64 - expected).abs())
            .fold(0.0, f64::max)
    }

    /// CSV with columns `box,count,expected`.
    pub fn to_csv(&self) -> String {
        let expected = self.total as f64 / self.counts.len() as f64;
        let mut out = String::from("box,count,expected\n");
        for (i, c) in self.counts.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", i, c, expected);
        }
        out
    }
}

/// Histogram of `H_K` images of `points`.
pub fn pushforward_histogram(
    sys: &ShubSystem,
    points: &[ProductPoint],
    k: usize,
    boxes_per_axis: usize,
) -> Result<BoxHistogram, SystemError> {
    let images = points.par_iter().map(|&p| h_approx(sys, p, k)).collect::<Result<Vec<_>, _>>()?;
    let mut hist = BoxHistogram::new(boxes_per_axis);
    for p in &images {
        hist.add(p);
    }
    Ok(hist)
}

/// Largest deviation of the `H_K` pushforward of the empirical measure on
/// `points` from Lebesgue measure, over the `b^4` boxes.
pub fn pushforward_discrepancy(
    sys: &ShubSystem,
    points: &[ProductPoint],
    k: usize,
    boxes_per_axis: usize,
) -> Result<f64, SystemError> {
    Ok(pushforward_histogram(sys, points, k, boxes_per_axis)?.discrepancy())
}
