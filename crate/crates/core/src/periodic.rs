//! Periodic points of the skew product.
//!
//! Every periodic point of `F` lies over a periodic point `(x, y*)` of
//! `Phi x L`. For each such pair the fiber return map `g^n_x` is solved by
//! Newton iteration seeded at `y*`; when `y* = theta0` and the base orbit
//! passes through the perturbation, a root sweep along the centre leaf
//! through `theta0` picks up the two extra saddles created by the
//! perturbation. A class therefore holds one or three fiber solutions.

use std::collections::HashSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::perturbation::{integrate_flow, FiberChart};
use crate::system::{Mat2, ProductPoint, ShubSystem, SystemError};
use crate::torus::{
    displacement, enumerate_periodic_exact, periodic_count, torus_distance, RationalPoint,
    TorusError, TorusPoint,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PeriodicError {
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("{which} point {point} is not {n}-periodic")]
    NotPeriodic {
        which: &'static str,
        point: RationalPoint,
        n: u32,
    },
    #[error("Newton iteration from seed ({}, {}) did not converge (last residual {residual:e})", seed.x1, seed.x2)]
    NewtonDiverged { seed: TorusPoint, residual: f64 },
    #[error("class over base {base}, target {target} has {count} solutions, outside [1, 3]")]
    CountOutOfRange {
        base: RationalPoint,
        target: RationalPoint,
        count: usize,
    },
    #[error("census needs {count} classes, above the cap {cap}")]
    CapExceeded { count: u128, cap: u128 },
    #[error("epsilon {epsilon} is not below half the minimum base separation {separation}")]
    EpsilonTooLarge { epsilon: f64, separation: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stability {
    SaddleIndex2,
    SourceIndex3,
    NonhyperbolicWarning,
}

impl Stability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stability::SaddleIndex2 => "saddle-index2",
            Stability::SourceIndex3 => "source-index3",
            Stability::NonhyperbolicWarning => "nonhyperbolic-warning",
        }
    }

    /// Unstable index is 2 from the base and the fiber's `v^u` direction,
    /// plus one when the centre multiplier exceeds 1.
    pub fn from_center_multiplier(mult_c: f64, tol: f64) -> Stability {
        let m = mult_c.abs();
        if (m - 1.0).abs() <= tol {
            Stability::NonhyperbolicWarning
        } else if m > 1.0 {
            Stability::SourceIndex3
        } else {
            Stability::SaddleIndex2
        }
    }

    pub fn unstable_index(&self) -> Option<usize> {
        match self {
            Stability::SaddleIndex2 => Some(2),
            Stability::SourceIndex3 => Some(3),
            Stability::NonhyperbolicWarning => None,
        }
    }
}

/// Tunables of the fiber solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinderConfig {
    pub newton_max_iter: usize,
    pub newton_tol: f64,
    pub sweep_points: usize,
    /// Sweep covers `[-w rho, w rho]` along the centre leaf.
    pub sweep_half_width: f64,
    pub bisection_tol: f64,
    pub dedup_tol: f64,
    pub residual_tol: f64,
    pub hyperbolicity_tol: f64,
    /// Upper bound on `#Per_n(Phi) * #Per_n(L)` for a census.
    pub cap: u128,
}

impl Default for FinderConfig {
    fn default() -> Self {
        FinderConfig {
            newton_max_iter: 50,
            newton_tol: 1e-11,
            sweep_points: 4096,
            sweep_half_width: 2.0,
            bisection_tol: 1e-12,
            dedup_tol: 1e-7,
            residual_tol: 1e-8,
            hyperbolicity_tol: 1e-8,
            cap: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberSolution {
    pub fiber: TorusPoint,
    /// Multiplier along `v^u` (`eig_u^n`).
    pub mult_u: f64,
    /// Multiplier along the centre direction `v^s`.
    pub mult_c: f64,
    pub stability: Stability,
    /// `|g^n(y) - y|`, recomputed after the solve.
    pub residual: f64,
}

impl FiberSolution {
    pub fn point(&self, base: TorusPoint) -> ProductPoint {
        ProductPoint::new(base, self.fiber)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicClass {
    pub n: u32,
    pub base_point: TorusPoint,
    pub base_exact: RationalPoint,
    pub target_fiber: TorusPoint,
    pub target_exact: RationalPoint,
    /// Sorted along `v^s` relative to the target.
    pub solutions: Vec<FiberSolution>,
    pub meets_support: bool,
    pub is_theta0: bool,
    pub warnings: Vec<String>,
}

impl PeriodicClass {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicCensus {
    pub n: u32,
    pub classes: Vec<PeriodicClass>,
    pub total_product_count: u128,
    pub total_skew_count: u128,
}

impl PeriodicCensus {
    /// `total_product <= total_skew <= 3 total_product`.
    pub fn sandwich_holds(&self) -> bool {
        self.total_product_count <= self.total_skew_count
            && self.total_skew_count <= 3 * self.total_product_count
    }

    /// All periodic points, in class order.
    pub fn points(&self) -> Vec<ProductPoint> {
        self.classes
            .iter()
            .flat_map(|c| c.solutions.iter().map(|s| s.point(c.base_point)))
            .collect()
    }

    /// CSV with columns `n,base_x1,base_x2,fiber_x1,fiber_x2,mult_u,mult_c,stability,class_id`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,base_x1,base_x2,fiber_x1,fiber_x2,mult_u,mult_c,stability,class_id\n");
        for (id, c) in self.classes.iter().enumerate() {
            for s in &c.solutions {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    self.n,
                    c.base_point.x1,
                    c.base_point.x2,
                    s.fiber.x1,
                    s.fiber.x2,
                    s.mult_u,
                    s.mult_c,
                    s.stability.as_str(),
                    id
                );
            }
        }
        out
    }
}

/// Multipliers and stability of a fiber solution, from a fresh cocycle
/// evaluation. Also returns the residual `|g^n(y) - y|`.
pub fn classify_stability(
    sys: &ShubSystem,
    base: TorusPoint,
    fiber: TorusPoint,
    n: u32,
    tol: f64,
) -> Result<FiberSolution, PeriodicError> {
    let (end, jac) = sys.fiber_cocycle(ProductPoint::new(base, fiber), n as usize)?;
    let residual = torus_distance(end.fiber, fiber);
    let mult_c = jac[1][1];
    Ok(FiberSolution {
        fiber,
        mult_u: jac[0][0],
        mult_c,
        stability: Stability::from_center_multiplier(mult_c, tol),
        residual,
    })
}

fn lower_solve(jac: &Mat2, rhs: FiberChart) -> Option<FiberChart> {
    let d1 = jac[0][0] - 1.0;
    let d2 = jac[1][1] - 1.0;
    if d1 == 0.0 || d2.abs() < 1e-14 {
        return None;
    }
    let x1 = rhs.u1 / d1;
    let x2 = (rhs.u2 - jac[1][0] * x1) / d2;
    Some(FiberChart::new(x1, x2))
}

/// Newton iteration for `g^n_x(y) = y` on the torus.
fn newton(sys: &ShubSystem, base: TorusPoint, seed: TorusPoint, n: u32, cfg: &FinderConfig) -> Result<TorusPoint, PeriodicError> {
    let mut y = seed;
    let mut residual = f64::INFINITY;
    for it in 0..=cfg.newton_max_iter {
        let (end, jac) = sys.fiber_cocycle(ProductPoint::new(base, y), n as usize)?;
        let d = displacement(end.fiber, y);
        residual = d[0].hypot(d[1]);
        if residual < cfg.newton_tol {
            return Ok(y);
        }
        if it == cfg.newton_max_iter {
            break;
        }
        let c = sys.chart().to_chart(d);
        let Some(step) = lower_solve(&jac, FiberChart::new(-c.u1, -c.u2)) else { break };
        if !(step.norm() < 0.5) {
            break;
        }
        y = y.translate(sys.chart().to_ambient(step));
    }
    Err(PeriodicError::NewtonDiverged { seed, residual })
}

/// Base factors along the orbit: `dist(Phi^{i+1} x, q)` for `i < n`.
fn orbit_base_dists(sys: &ShubSystem, base: TorusPoint, n: u32) -> Vec<f64> {
    let phi = &sys.params().phi;
    let mut x = base;
    (0..n)
        .map(|_| {
            x = phi.apply(x);
            sys.base_dist(x)
        })
        .collect()
}

/// Return map of `g^n_x` restricted to the centre leaf `{u1 = 0}` through
/// `theta0`, in the chart coordinate `u2 = s`.
fn leaf_return(sys: &ShubSystem, dists: &[f64], s0: f64) -> Result<f64, PeriodicError> {
    let p = sys.params();
    let mut s = s0;
    for &bd in dists {
        s *= sys.l().eig_s;
        if s.abs() < p.bump.rho {
            s = integrate_flow(&p.bump, bd, FiberChart::new(0.0, s), p.t, p.integrator_steps)
                .map_err(SystemError::from)?
                .endpoint
                .u2;
        }
    }
    Ok(s)
}

fn leaf_sweep(sys: &ShubSystem, dists: &[f64], cfg: &FinderConfig) -> Result<Vec<f64>, PeriodicError> {
    let w = cfg.sweep_half_width * sys.bump().rho;
    let m = cfg.sweep_points.max(2);
    let g = |s: f64| leaf_return(sys, dists, s).map(|v| v - s);
    let grid: Vec<f64> = (0..m).map(|i| -w + 2.0 * w * i as f64 / (m - 1) as f64).collect();
    let vals = grid.iter().map(|&s| g(s)).collect::<Result<Vec<_>, _>>()?;
    let mut roots = Vec::new();
    for i in 0..m - 1 {
        let (a, b) = (grid[i], grid[i + 1]);
        let (fa, fb) = (vals[i], vals[i + 1]);
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa * fb >= 0.0 {
            continue;
        }
        let (mut lo, mut hi, mut flo) = (a, b, fa);
        while hi - lo > cfg.bisection_tol {
            let mid = 0.5 * (lo + hi);
            let fm = g(mid)?;
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (fm < 0.0) == (flo < 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    if vals[m - 1] == 0.0 {
        roots.push(grid[m - 1]);
    }
    Ok(roots)
}

/// Solves `g^n_x(y) = y` in the class of `(base, target)`.
pub fn solve_fiber_fixed_points(
    sys: &ShubSystem,
    base: RationalPoint,
    target: RationalPoint,
    n: u32,
    cfg: &FinderConfig,
) -> Result<PeriodicClass, PeriodicError> {
    let p = sys.params();
    if !base.is_periodic(&p.phi, n) {
        return Err(PeriodicError::NotPeriodic { which: "base", point: base, n });
    }
    if !target.is_periodic(&p.l, n) {
        return Err(PeriodicError::NotPeriodic { which: "target", point: target, n });
    }
    let base_point = base.to_torus();
    let target_fiber = target.to_torus();
    let dists = orbit_base_dists(sys, base_point, n);
    let meets_support = sys.is_perturbed() && dists.iter().any(|&d| d <= p.bump.rho);
    let is_theta0 = torus_distance(target_fiber, p.theta0) < 1e-12;

    let mut warnings = Vec::new();
    let mut candidates = Vec::new();
    match newton(sys, base_point, target_fiber, n, cfg) {
        Ok(y) => candidates.push(y),
        Err(e @ PeriodicError::NewtonDiverged { .. }) => warnings.push(e.to_string()),
        Err(e) => return Err(e),
    }
    let newton_failed = candidates.is_empty();
    if is_theta0 && meets_support {
        let vs = sys.chart().v_s;
        for s in leaf_sweep(sys, &dists, cfg)? {
            let seed = p.theta0.translate([s * vs[0], s * vs[1]]);
            match newton(sys, base_point, seed, n, cfg) {
                Ok(y) if torus_distance(y, seed) < 1e-6 => candidates.push(y),
                _ => candidates.push(seed),
            }
        }
    }
    if newton_failed && candidates.is_empty() {
        return Err(PeriodicError::NewtonDiverged {
            seed: target_fiber,
            residual: f64::NAN,
        });
    }

    let mut unique: Vec<TorusPoint> = Vec::new();
    for y in candidates {
        if unique.iter().all(|u| torus_distance(*u, y) > cfg.dedup_tol) {
            unique.push(y);
        }
    }
    let mut solutions = unique
        .into_iter()
        .map(|y| classify_stability(sys, base_point, y, n, cfg.hyperbolicity_tol))
        .collect::<Result<Vec<_>, _>>()?;
    let key = |s: &FiberSolution| sys.chart().to_chart(displacement(s.fiber, target_fiber)).u2;
    solutions.sort_by(|a, b| key(a).total_cmp(&key(b)));

    let count = solutions.len();
    if !(1..=3).contains(&count) {
        return Err(PeriodicError::CountOutOfRange { base, target, count });
    }
    if count == 2 {
        warnings.push("degenerate class with two solutions".to_string());
        for s in &mut solutions {
            s.stability = Stability::NonhyperbolicWarning;
        }
    }
    for s in &solutions {
        if s.residual >= cfg.residual_tol {
            warnings.push(format!("residual {:e} at ({}, {})", s.residual, s.fiber.x1, s.fiber.x2));
        }
    }
    Ok(PeriodicClass {
        n,
        base_point,
        base_exact: base,
        target_fiber,
        target_exact: target,
        solutions,
        meets_support,
        is_theta0,
        warnings,
    })
}

/// Transports a solved class one step along the base orbit.
fn propagate(sys: &ShubSystem, class: &PeriodicClass, cfg: &FinderConfig) -> Result<PeriodicClass, PeriodicError> {
    let p = sys.params();
    let overflow = TorusError::Overflow { n: class.n };
    let base_exact = class.base_exact.apply(&p.phi).ok_or(overflow.clone())?;
    let target_exact = class.target_exact.apply(&p.l).ok_or(overflow)?;
    let base_point = base_exact.to_torus();
    let target_fiber = target_exact.to_torus();
    let mut warnings = Vec::new();
    let mut solutions = Vec::with_capacity(class.solutions.len());
    for s in &class.solutions {
        let image = sys.map_forward(s.point(class.base_point))?;
        let fiber = match newton(sys, base_point, image.fiber, class.n, cfg) {
            Ok(y) => y,
            Err(e) => {
                warnings.push(e.to_string());
                image.fiber
            }
        };
        let mut sol = classify_stability(sys, base_point, fiber, class.n, cfg.hyperbolicity_tol)?;
        if class.solutions.len() == 2 {
            sol.stability = Stability::NonhyperbolicWarning;
        }
        solutions.push(sol);
    }
    let key = |s: &FiberSolution| sys.chart().to_chart(displacement(s.fiber, target_fiber)).u2;
    solutions.sort_by(|a, b| key(a).total_cmp(&key(b)));
    Ok(PeriodicClass {
        n: class.n,
        base_point,
        base_exact,
        target_fiber,
        target_exact,
        solutions,
        meets_support: class.meets_support,
        is_theta0: torus_distance(target_fiber, p.theta0) < 1e-12,
        warnings,
    })
}

/// Base orbits of `Per_n(Phi)`, each starting at its smallest point.
fn base_orbits(sys: &ShubSystem, points: &[RationalPoint], n: u32) -> Result<Vec<Vec<RationalPoint>>, PeriodicError> {
    let phi = &sys.params().phi;
    let mut seen = HashSet::new();
    let mut orbits = Vec::new();
    for &x in points {
        if seen.contains(&x) {
            continue;
        }
        let mut orbit = vec![x];
        seen.insert(x);
        let mut y = x.apply(phi).ok_or(TorusError::Overflow { n })?;
        while y != x {
            seen.insert(y);
            orbit.push(y);
            y = y.apply(phi).ok_or(TorusError::Overflow { n })?;
        }
        orbits.push(orbit);
    }
    Ok(orbits)
}

/// All periodic classes of period `n`. Parallel over base orbits; the result
/// is sorted by `(base, target)` so it does not depend on the schedule.
pub fn census(sys: &ShubSystem, n: u32, cfg: &FinderConfig) -> Result<PeriodicCensus, PeriodicError> {
    let p = sys.params();
    let nb = periodic_count(&p.phi, n)?;
    let nf = periodic_count(&p.l, n)?;
    let count = nb.checked_mul(nf).ok_or(TorusError::Overflow { n })?;
    if count > cfg.cap {
        return Err(PeriodicError::CapExceeded { count, cap: cfg.cap });
    }
    let bases = enumerate_periodic_exact(&p.phi, n, cfg.cap)?;
    let fibers = enumerate_periodic_exact(&p.l, n, cfg.cap)?;
    let orbits = base_orbits(sys, &bases, n)?;

    let per_orbit: Vec<Vec<PeriodicClass>> = orbits
        .par_iter()
        .map(|orbit| {
            let mut out = Vec::with_capacity(orbit.len() * fibers.len());
            for &y in &fibers {
                let mut class = solve_fiber_fixed_points(sys, orbit[0], y, n, cfg)?;
                for _ in 1..orbit.len() {
                    let next = propagate(sys, &class, cfg)?;
                    out.push(std::mem::replace(&mut class, next));
                }
                out.push(class);
            }
            Ok(out)
        })
        .collect::<Result<_, PeriodicError>>()?;

    let mut classes: Vec<PeriodicClass> = per_orbit.into_iter().flatten().collect();
    classes.sort_by_key(|c| (c.base_exact, c.target_exact));
    let total_skew_count = classes.iter().map(|c| c.len() as u128).sum();
    Ok(PeriodicCensus {
        n,
        classes,
        total_product_count: count,
        total_skew_count,
    })
}

/// Periodic points whose orbits stay `epsilon`-close to the orbit of one
/// given periodic point.
#[derive(Debug, Clone, PartialEq)]
pub struct BowenCluster {
    /// `(class index, solution index)` of the centre.
    pub centre: (usize, usize),
    pub members: Vec<(usize, usize)>,
}

impl BowenCluster {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Minimum distance between distinct base points of the census.
pub fn min_base_separation(census: &PeriodicCensus) -> f64 {
    let mut bases: Vec<TorusPoint> = Vec::new();
    let mut last: Option<RationalPoint> = None;
    for c in &census.classes {
        if last != Some(c.base_exact) {
            bases.push(c.base_point);
            last = Some(c.base_exact);
        }
    }
    let mut best = f64::INFINITY;
    for i in 0..bases.len() {
        for j in i + 1..bases.len() {
            best = best.min(torus_distance(bases[i], bases[j]));
        }
    }
    best
}

/// Bowen-ball clusters `{Q : max_{|i| <= horizon} d(F^i P, F^i Q) <= epsilon}`
/// for every periodic point `P` of the census.
pub fn bowen_clusters(
    sys: &ShubSystem,
    census: &PeriodicCensus,
    epsilon: f64,
    horizon: usize,
) -> Result<Vec<BowenCluster>, PeriodicError> {
    let separation = min_base_separation(census);
    if !(2.0 * epsilon < separation) {
        return Err(PeriodicError::EpsilonTooLarge { epsilon, separation });
    }
    // Points over different base points are separated at time 0, so only
    // classes over a common base point need comparing.
    let mut groups: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut last: Option<RationalPoint> = None;
    for (ci, c) in census.classes.iter().enumerate() {
        if last != Some(c.base_exact) {
            groups.push(Vec::new());
            last = Some(c.base_exact);
        }
        let g = groups.last_mut().expect("group pushed above");
        g.extend((0..c.len()).map(|si| (ci, si)));
    }
    let orbit = |idx: (usize, usize)| -> Result<Vec<ProductPoint>, PeriodicError> {
        let c = &census.classes[idx.0];
        let start = c.solutions[idx.1].point(c.base_point);
        let mut pts = Vec::with_capacity(2 * horizon + 1);
        pts.push(start);
        let (mut f, mut b) = (start, start);
        for _ in 0..horizon {
            f = sys.map_forward(f)?;
            b = sys.map_inverse(b)?;
            pts.push(f);
            pts.push(b);
        }
        Ok(pts)
    };
    let per_group: Vec<Vec<BowenCluster>> = groups
        .par_iter()
        .map(|group| {
            let orbits = group.iter().map(|&i| orbit(i)).collect::<Result<Vec<_>, _>>()?;
            let close = |a: &[ProductPoint], b: &[ProductPoint]| {
                a.iter().zip(b).all(|(x, y)| x.distance(y) <= epsilon)
            };
            Ok(group
                .iter()
                .enumerate()
                .map(|(i, &centre)| BowenCluster {
                    centre,
                    members: group
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| close(&orbits[i], &orbits[j]))
                        .map(|(_, &m)| m)
                        .collect(),
                })
                .collect())
        })
        .collect::<Result<_, PeriodicError>>()?;
    Ok(per_group.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{validate_params, ShubParams};

    fn reference() -> ShubSystem {
        validate_params(ShubParams::reference()).unwrap()
    }

    const Q: RationalPoint = RationalPoint::ORIGIN;

    fn q_exact() -> RationalPoint {
        RationalPoint::new(0, 1, 2)
    }

    #[test]
    fn source_and_two_saddles_over_q() {
        let s = reference();
        let class = solve_fiber_fixed_points(&s, q_exact(), Q, 1, &FinderConfig::default()).unwrap();
        assert_eq!(class.len(), 3);
        let stab: Vec<_> = class.solutions.iter().map(|x| x.stability).collect();
        assert_eq!(
            stab,
            vec![Stability::SaddleIndex2, Stability::SourceIndex3, Stability::SaddleIndex2]
        );
        let source = &class.solutions[1];
        assert_eq!(source.fiber, TorusPoint::ORIGIN);
        assert!((source.mult_u - 2.6180340).abs() < 1e-6);
        assert!((source.mult_c - 1.5490).abs() < 1e-4);
        // saddles on opposite sides of theta0 along v^s
        let u: Vec<f64> = class
            .solutions
            .iter()
            .map(|x| s.chart().local(TorusPoint::ORIGIN, x.fiber).u2)
            .collect();
        assert!(u[0] < 0.0 && u[2] > 0.0);
        for sol in [&class.solutions[0], &class.solutions[2]] {
            assert!(sol.mult_c < 1.0);
            assert!(sol.mult_c <= s.l().lambda_s + 1e-8);
            assert!(sol.residual < 1e-8);
            assert!((sol.mult_u / s.l().lambda_u - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn single_saddle_over_p() {
        let s = reference();
        let class = solve_fiber_fixed_points(&s, Q, Q, 1, &FinderConfig::default()).unwrap();
        assert_eq!(class.len(), 1);
        let sol = class.solutions[0];
        assert_eq!(sol.stability, Stability::SaddleIndex2);
        assert_eq!(sol.mult_u, s.l().eig_u);
        assert_eq!(sol.mult_c, s.l().eig_s);
    }

    #[test]
    fn unperturbed_classes_are_points() {
        let s = validate_params(ShubParams::reference().unperturbed()).unwrap();
        let cfg = FinderConfig::default();
        for n in 1..=3 {
            let c = census(&s, n, &cfg).unwrap();
            assert_eq!(c.total_skew_count, c.total_product_count);
            for class in &c.classes {
                assert!(torus_distance(class.solutions[0].fiber, class.target_fiber) < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_non_periodic_input() {
        let s = reference();
        let err = solve_fiber_fixed_points(&s, RationalPoint::new(1, 0, 3), Q, 1, &FinderConfig::default());
        assert!(matches!(err, Err(PeriodicError::NotPeriodic { which: "base", .. })));
    }

    #[test]
    fn census_n1_and_cap() {
        let s = reference();
        let c = census(&s, 1, &FinderConfig::default()).unwrap();
        assert_eq!(c.total_product_count, 2);
        assert_eq!(c.total_skew_count, 4);
        let csv = c.to_csv();
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.starts_with("n,base_x1,base_x2,fiber_x1,fiber_x2,mult_u,mult_c,stability,class_id\n"));
        let cfg = FinderConfig { cap: 10, ..FinderConfig::default() };
        assert!(matches!(census(&s, 2, &cfg), Err(PeriodicError::CapExceeded { count: 60, cap: 10 })));
    }

    #[test]
    fn stability_thresholds() {
        assert_eq!(Stability::from_center_multiplier(1.0 + 1e-9, 1e-8), Stability::NonhyperbolicWarning);
        assert_eq!(Stability::from_center_multiplier(1.1, 1e-8), Stability::SourceIndex3);
        assert_eq!(Stability::from_center_multiplier(-0.3, 1e-8), Stability::SaddleIndex2);
    }

    #[test]
    fn bowen_epsilon_check() {
        let s = reference();
        let c = census(&s, 1, &FinderConfig::default()).unwrap();
        assert!(matches!(bowen_clusters(&s, &c, 0.3, 1), Err(PeriodicError::EpsilonTooLarge { .. })));
        let clusters = bowen_clusters(&s, &c, 0.02, 1).unwrap();
        assert_eq!(clusters.len(), 4);
        assert!(clusters.iter().all(|k| (1..=3).contains(&k.size())));
    }
}
