//! Lyapunov spectra, central exponents, periodic growth rates and Birkhoff
//! averages.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use nalgebra::Matrix4;
use rayon::prelude::*;

use crate::periodic::PeriodicCensus;
use crate::seed::task_rng;
use crate::semiconj::pushforward_histogram;
use crate::system::{ProductPoint, ShubSystem, SystemError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Qr4d,
    Triangular,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Qr4d => "qr4d",
            Method::Triangular => "triangular",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovEstimate {
    /// Ascending.
    pub exponents: [f64; 4],
    pub n: usize,
    pub start: ProductPoint,
    pub method: Method,
}

impl LyapunovEstimate {
    pub fn max_difference(&self, other: &LyapunovEstimate) -> f64 {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn sorted(mut e: [f64; 4]) -> [f64; 4] {
    e.sort_by(f64::total_cmp);
    e
}

/// Finite-time exponent along the centre direction `v^s`:
/// `(1/N) sum log |J22|` over `N` steps from `start`.
pub fn central_exponent(sys: &ShubSystem, start: ProductPoint, n: usize) -> Result<f64, SystemError> {
    let n = n.max(1);
    let mut pt = start;
    let mut sum = 0.0;
    for _ in 0..n {
        let (next, fs) = sys.step(pt)?;
        sum += fs.jacobian[1][1].abs().ln();
        pt = next;
    }
    Ok(sum / n as f64)
}

pub fn lyapunov_spectrum(
    sys: &ShubSystem,
    start: ProductPoint,
    n: usize,
    method: Method,
) -> Result<LyapunovEstimate, SystemError> {
    let n = n.max(1);
    let exponents = match method {
        Method::Triangular => {
            let lb = sys.phi().log_lambda_u();
            sorted([-lb, lb, sys.l().log_lambda_u(), central_exponent(sys, start, n)?])
        }
        Method::Qr4d => {
            // A frame in general position: coordinate frames can sit inside
            // invariant subspaces of the block-triangular cocycle.
            let mut q = Matrix4::<f64>::from_fn(|i, j| ((4 * i + j) as f64 * 0.7).sin() + if i == j { 2.0 } else { 0.0 })
                .qr()
                .q();
            let mut sums = [0.0; 4];
            let mut pt = start;
            for _ in 0..n {
                let d = sys.full_derivative(pt)?;
                let qr = (d * q).qr();
                let r = qr.r();
                for (i, s) in sums.iter_mut().enumerate() {
                    *s += r[(i, i)].abs().ln();
                }
                q = qr.q();
                pt = sys.map_forward(pt)?;
            }
            sorted(sums.map(|s| s / n as f64))
        }
    };
    Ok(LyapunovEstimate { exponents, n, start, method })
}

/// CSV with columns `method,n,x1,x2,y1,y2,e1,e2,e3,e4`.
pub fn lyapunov_csv(estimates: &[LyapunovEstimate]) -> String {
    let mut out = String::from("method,n,x1,x2,y1,y2,e1,e2,e3,e4\n");
    for e in estimates {
        let s = e.start;
        let x = e.exponents;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            e.method.as_str(),
            e.n,
            s.base.x1,
            s.base.x2,
            s.fiber.x1,
            s.fiber.x2,
            x[0],
            x[1],
            x[2],
            x[3]
        );
    }
    out
}

/// Uniform random start number `index` of the stream `seed`.
pub fn random_start(seed: u64, index: u64) -> ProductPoint {
    ProductPoint::random(&mut task_rng(seed, index))
}

/// Central exponents at horizon `n` from `samples` seeded uniform starts,
/// in start order.
pub fn central_exponent_samples(sys: &ShubSystem, samples: usize, n: usize, seed: u64) -> Result<Vec<f64>, SystemError> {
    (0..samples as u64)
        .into_par_iter()
        .map(|i| central_exponent(sys, random_start(seed, i), n))
        .collect()
}

/// Fraction of seeded uniform starts whose central exponent at horizon `n`
/// is negative.
pub fn contracting_fraction(sys: &ShubSystem, samples: usize, n: usize, seed: u64) -> Result<f64, SystemError> {
    let samples = samples.max(1);
    let exps = central_exponent_samples(sys, samples, n, seed)?;
    Ok(exps.iter().filter(|&&e| e < 0.0).count() as f64 / samples as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRow {
    pub n: u32,
    pub skew_rate: f64,
    pub product_rate: f64,
    /// `skew_rate - h_top`.
    pub deviation: f64,
    /// `(1/n) log 3`.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthTable {
    pub rows: Vec<GrowthRow>,
    pub h_top: f64,
}

pub fn growth_rate_table(sys: &ShubSystem, censuses: &[PeriodicCensus]) -> GrowthTable {
    let h_top = sys.topological_entropy();
    let rows = censuses
        .iter()
        .map(|c| {
            let nf = c.n as f64;
            let skew_rate = (c.total_skew_count as f64).ln() / nf;
            GrowthRow {
                n: c.n,
                skew_rate,
                product_rate: (c.total_product_count as f64).ln() / nf,
                deviation: skew_rate - h_top,
                slack: 3f64.ln() / nf,
            }
        })
        .collect();
    GrowthTable { rows, h_top }
}

impl GrowthTable {
    /// CSV with columns `n,skew_rate,product_rate,deviation,slack,h_top`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,skew_rate,product_rate,deviation,slack,h_top\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.n, r.skew_rate, r.product_rate, r.deviation, r.slack, self.h_top
            );
        }
        out
    }

    /// Gnuplot script plotting both rates against `n` from `csv_name`.
    pub fn gnuplot_script(&self, csv_name: &str) -> String {
        format!(
            "set datafile separator ','\n\
             set key autotitle columnhead\n\
             set xlabel 'n'\n\
             set ylabel 'growth rate'\n\
             htop = {}\n\
             plot '{csv_name}' using 1:2 with linespoints title 'skew', \\\n     \
             '{csv_name}' using 1:3 with linespoints title 'product', \\\n     \
             htop with lines title 'h_top'\n",
            self.h_top
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    Base,
    Fiber,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Cos,
    Sin,
}

/// Test functions on `T^2 x T^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observable {
    Constant,
    Fourier { factor: Factor, mode: [i32; 2], phase: Phase },
}

impl Observable {
    pub fn eval(&self, p: &ProductPoint) -> f64 {
        match *self {
            Observable::Constant => 1.0,
            Observable::Fourier { factor, mode, phase } => {
                let z = match factor {
                    Factor::Base => p.base,
                    Factor::Fiber => p.fiber,
                };
                let arg = TAU * (mode[0] as f64 * z.x1 + mode[1] as f64 * z.x2);
                match phase {
                    Phase::Cos => arg.cos(),
                    Phase::Sin => arg.sin(),
                }
            }
        }
    }

    /// Lebesgue mean.
    pub fn mean(&self) -> f64 {
        match self {
            Observable::Constant => 1.0,
            Observable::Fourier { .. } => 0.0,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Observable::Constant => "one".to_string(),
            Observable::Fourier { factor, mode, phase } => format!(
                "{}_{}({},{})",
                match factor {
                    Factor::Base => "base",
                    Factor::Fiber => "fiber",
                },
                match phase {
                    Phase::Cos => "cos",
                    Phase::Sin => "sin",
                },
                mode[0],
                mode[1]
            ),
        }
    }

    /// Modes `(1,0), (0,1), (1,1), (1,-1)` as cosine and sine on each
    /// factor.
    pub fn default_set() -> Vec<Observable> {
        let mut out = Vec::with_capacity(16);
        for factor in [Factor::Base, Factor::Fiber] {
            for mode in [[1, 0], [0, 1], [1, 1], [1, -1]] {
                for phase in [Phase::Cos, Phase::Sin] {
                    out.push(Observable::Fourier { factor, mode, phase });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BirkhoffReport {
    pub observables: Vec<Observable>,
    /// `averages[start][observable]`.
    pub averages: Vec<Vec<f64>>,
    /// Max minus min across starts, per observable.
    pub spread: Vec<f64>,
    pub max_spread: f64,
    pub n: usize,
}

impl BirkhoffReport {
    /// Largest `|average - Lebesgue mean|` over starts, per observable.
    pub fn max_bias(&self) -> Vec<f64> {
        self.observables
            .iter()
            .enumerate()
            .map(|(j, o)| self.averages.iter().map(|a| (a[j] - o.mean()).abs()).fold(0.0, f64::max))
            .collect()
    }
}

/// Birkhoff averages over `F^0 .. F^{N-1}`.
pub fn birkhoff_averages(
    sys: &ShubSystem,
    start: ProductPoint,
    n: usize,
    observables: &[Observable],
) -> Result<Vec<f64>, SystemError> {
    let n = n.max(1);
    let mut sums = vec![0.0; observables.len()];
    let mut pt = start;
    for _ in 0..n {
        for (s, o) in sums.iter_mut().zip(observables) {
            *s += o.eval(&pt);
        }
        pt = sys.map_forward(pt)?;
    }
    Ok(sums.into_iter().map(|s| s / n as f64).collect())
}

pub fn birkhoff_compare(
    sys: &ShubSystem,
    starts: usize,
    n: usize,
    observables: &[Observable],
    seed: u64,
) -> Result<BirkhoffReport, SystemError> {
    let averages = (0..starts.max(2) as u64)
        .into_par_iter()
        .map(|i| birkhoff_averages(sys, random_start(seed, i), n, observables))
        .collect::<Result<Vec<_>, _>>()?;
    let spread: Vec<f64> = (0..observables.len())
        .map(|j| {
            let (lo, hi) = averages
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), a| (lo.min(a[j]), hi.max(a[j])));
            hi - lo
        })
        .collect();
    let max_spread = spread.iter().copied().fold(0.0, f64::max);
    Ok(BirkhoffReport {
        observables: observables.to_vec(),
        averages,
        spread,
        max_spread,
        n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyReport {
    pub n: u32,
    pub count: u64,
    pub discrepancy: f64,
    pub grid: usize,
}

/// Discrepancy of the `H_K` images of all period-`n` points on a `grid^4`
/// box partition.
pub fn periodic_discrepancy(
    sys: &ShubSystem,
    census: &PeriodicCensus,
    k: usize,
    grid: usize,
) -> Result<DiscrepancyReport, SystemError> {
    let hist = pushforward_histogram(sys, &census.points(), k, grid)?;
    Ok(DiscrepancyReport {
        n: census.n,
        count: hist.total,
        discrepancy: hist.discrepancy(),
        grid: hist.boxes_per_axis,
    })
}

/// CSV with columns `n,count,discrepancy,grid`.
pub fn discrepancy_csv(reports: &[DiscrepancyReport]) -> String {
    let mut out = String::from("n,count,discrepancy,grid\n");
    for r in reports {
        let _ = writeln!(out, "{},{},{},{}", r.n, r.count, r.discrepancy, r.grid);
    }
    out
}
