//! The fiber perturbation: a radial bump profile, the chart around the fixed
//! point of `L` aligned with its eigenvectors, and the time-`t` flow of
//!
//! ```text
//! u1' = 0,   u2' = u2 * b(|w - q|) * b(|(u1, u2)|)
//! ```
//!
//! integrated with classical RK4 together with its variational equations.

use thiserror::Error;

use crate::torus::{displacement, HyperbolicAutomorphism, TorusPoint};

/// Chart coordinates are only used below this radius (half the injectivity
/// radius of the flat torus).
pub const CHART_RADIUS: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("integrator needs at least one step")]
    NoSteps,
    #[error("half-step comparison {error:e} exceeds tolerance {tol:e} with {steps} steps")]
    StepTooCoarse { error: f64, tol: f64, steps: usize },
    #[error("point is {radius} away from the chart centre (limit {CHART_RADIUS})")]
    OutsideChart { radius: f64 },
}

/// Shape of the transition of the bump between `rho/2` and `rho`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BumpKind {
    /// `s(t) = f(t) / (f(t) + f(1 - t))`, `f(t) = exp(-1/t)`: C-infinity.
    #[default]
    Smooth,
    /// `s(t) = 10 t^3 - 15 t^4 + 6 t^5`: C2, cheaper.
    Quintic,
}

/// Radial bump: 1 on `[0, rho/2)`, 0 on `(rho, inf)`, monotone in between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpProfile {
    pub rho: f64,
    pub kind: BumpKind,
}

fn expo(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

impl BumpProfile {
    pub fn new(rho: f64) -> Self {
        BumpProfile {
            rho,
            kind: BumpKind::Smooth,
        }
    }

    pub fn with_kind(rho: f64, kind: BumpKind) -> Self {
        BumpProfile { rho, kind }
    }

    /// Transition function on `[0, 1]`.
    pub fn transition(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        match self.kind {
            BumpKind::Smooth => {
                let a = expo(t);
                a / (a + expo(1.0 - t))
            }
            BumpKind::Quintic => t * t * t * (10.0 + t * (-15.0 + 6.0 * t)),
        }
    }

    fn transition_derivative(&self, t: f64) -> f64 {
        if t <= 0.0 || t >= 1.0 {
            return 0.0;
        }
        match self.kind {
            BumpKind::Smooth => {
                let (a, b) = (expo(t), expo(1.0 - t));
                let (da, db) = (a / (t * t), b / ((1.0 - t) * (1.0 - t)));
                let s = a + b;
                (da * b + a * db) / (s * s)
            }
            BumpKind::Quintic => 30.0 * t * t * (1.0 - t) * (1.0 - t),
        }
    }

    fn t_of(&self, r: f64) -> f64 {
        (self.rho - r) / (0.5 * self.rho)
    }

    pub fn value(&self, r: f64) -> f64 {
        if r < 0.5 * self.rho {
            1.0
        } else if r > self.rho {
            0.0
        } else {
            self.transition(self.t_of(r))
        }
    }

    /// `db/dr`.
    pub fn derivative(&self, r: f64) -> f64 {
        if r < 0.5 * self.rho || r > self.rho {
            0.0
        } else {
            -2.0 / self.rho * self.transition_derivative(self.t_of(r))
        }
    }
}

pub fn bump_value(profile: &BumpProfile, r: f64) -> f64 {
    profile.value(r)
}

/// Coordinates `u1 v^u + u2 v^s` relative to the chart centre.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FiberChart {
    pub u1: f64,
    pub u2: f64,
}

impl FiberChart {
    pub fn new(u1: f64, u2: f64) -> Self {
        FiberChart { u1, u2 }
    }

    pub fn norm(&self) -> f64 {
        self.u1.hypot(self.u2)
    }
}

/// Linear change of basis between ambient displacements and `(v^u, v^s)`
/// coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartBasis {
    pub v_u: [f64; 2],
    pub v_s: [f64; 2],
    inv: [[f64; 2]; 2],
}

impl ChartBasis {
    pub fn new(l: &HyperbolicAutomorphism) -> Self {
        let (a, b, c, d) = (l.v_u[0], l.v_s[0], l.v_u[1], l.v_s[1]);
        let det = a * d - b * c;
        ChartBasis {
            v_u: l.v_u,
            v_s: l.v_s,
            inv: [[d / det, -b / det], [-c / det, a / det]],
        }
    }

    pub fn to_chart(&self, d: [f64; 2]) -> FiberChart {
        FiberChart {
            u1: self.inv[0][0] * d[0] + self.inv[0][1] * d[1],
            u2: self.inv[1][0] * d[0] + self.inv[1][1] * d[1],
        }
    }

    pub fn to_ambient(&self, c: FiberChart) -> [f64; 2] {
        [
            c.u1 * self.v_u[0] + c.u2 * self.v_s[0],
            c.u1 * self.v_u[1] + c.u2 * self.v_s[1],
        ]
    }

    /// Chart coordinates of the shortest representative of `y - centre`,
    /// without the validity check.
    pub fn local(&self, centre: TorusPoint, y: TorusPoint) -> FiberChart {
        self.to_chart(displacement(y, centre))
    }
}

pub fn chart_from_torus(
    l: &HyperbolicAutomorphism,
    theta0: TorusPoint,
    y: TorusPoint,
) -> Result<FiberChart, FlowError> {
    let c = ChartBasis::new(l).local(theta0, y);
    let radius = c.norm();
    if radius >= CHART_RADIUS {
        return Err(FlowError::OutsideChart { radius });
    }
    Ok(c)
}

pub fn chart_to_torus(l: &HyperbolicAutomorphism, theta0: TorusPoint, c: FiberChart) -> TorusPoint {
    theta0.translate(ChartBasis::new(l).to_ambient(c))
}

/// Endpoint and Jacobian `[[1, 0], [j21, j22]]` of the flow, in chart
/// coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowResult {
    pub endpoint: FiberChart,
    pub jacobian: [[f64; 2]; 2],
    /// RK4 steps actually performed; zero when the flow is the identity.
    pub steps_taken: usize,
}

impl FlowResult {
    fn identity(start: FiberChart) -> Self {
        FlowResult {
            endpoint: start,
            jacobian: [[1.0, 0.0], [0.0, 1.0]],
            steps_taken: 0,
        }
    }
}

/// Right-hand side of the `(u2, j21, j22)` system for fixed `u1` and base
/// factor `c = b(base_dist)`.
#[inline]
fn rhs(profile: &BumpProfile, c: f64, u1: f64, s: [f64; 3]) -> [f64; 3] {
    let u2 = s[0];
    let r = u1.hypot(u2);
    let b = profile.value(r);
    let (f_u1, f_u2) = if r > 0.0 {
        let db = profile.derivative(r);
        (c * u2 * db * u1 / r, c * (b + u2 * u2 * db / r))
    } else {
        (0.0, c * b)
    };
    [c * u2 * b, f_u1 + f_u2 * s[1], f_u2 * s[2]]
}

/// Time-`t` flow of the fiber ODE started at `start`, by fixed-step RK4.
///
/// Returns the start point and the identity bit-exactly when the base factor
/// vanishes or `start` lies outside the fiber support: there the vector field
/// is zero and the point is stationary.
pub fn integrate_flow(
    profile: &BumpProfile,
    base_dist: f64,
    start: FiberChart,
    t: f64,
    steps: usize,
) -> Result<FlowResult, FlowError> {
    if steps == 0 {
        return Err(FlowError::NoSteps);
    }
    let c = profile.value(base_dist);
    if c == 0.0 || t == 0.0 || start.norm() >= profile.rho {
        return Ok(FlowResult::identity(start));
    }
    let h = t / steps as f64;
    let u1 = start.u1;
    let mut s = [start.u2, 0.0, 1.0];
    let add = |s: [f64; 3], k: [f64; 3], a: f64| [s[0] + a * k[0], s[1] + a * k[1], s[2] + a * k[2]];
    for _ in 0..steps {
        let k1 = rhs(profile, c, u1, s);
        let k2 = rhs(profile, c, u1, add(s, k1, 0.5 * h));
        let k3 = rhs(profile, c, u1, add(s, k2, 0.5 * h));
        let k4 = rhs(profile, c, u1, add(s, k3, h));
        for i in 0..3 {
            s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    Ok(FlowResult {
        endpoint: FiberChart::new(u1, s[0]),
        jacobian: [[1.0, 0.0], [s[1], s[2]]],
        steps_taken: steps,
    })
}

/// [`integrate_flow`] plus a comparison against the same integration with
/// twice the number of steps.
pub fn integrate_flow_checked(
    profile: &BumpProfile,
    base_dist: f64,
    start: FiberChart,
    t: f64,
    steps: usize,
    tol: f64,
) -> Result<FlowResult, FlowError> {
    let coarse = integrate_flow(profile, base_dist, start, t, steps)?;
    if coarse.steps_taken == 0 {
        return Ok(coarse);
    }
    let fine = integrate_flow(profile, base_dist, start, t, 2 * steps)?;
    let error = (coarse.endpoint.u2 - fine.endpoint.u2).abs();
    if error > tol {
        return Err(FlowError::StepTooCoarse { error, tol, steps });
    }
    Ok(coarse)
}

/// Inverse of the discrete time-`t` map: solves `integrate_flow(.., t).u2 = target.u2`
/// for fixed `u1` by Newton iteration, seeded with the time-`-t` flow.
pub fn invert_flow(
    profile: &BumpProfile,
    base_dist: f64,
    target: FiberChart,
    t: f64,
    steps: usize,
) -> Result<FiberChart, FlowError> {
    let seed = integrate_flow(profile, base_dist, target, -t, steps)?;
    if seed.steps_taken == 0 && target.norm() >= profile.rho {
        return Ok(target);
    }
    let mut x = seed.endpoint;
    for _ in 0..8 {
        let f = integrate_flow(profile, base_dist, x, t, steps)?;
        let r = f.endpoint.u2 - target.u2;
        if r == 0.0 {
            break;
        }
        let step = r / f.jacobian[1][1];
        x.u2 -= step;
        if step.abs() <= 1e-17 * (1.0 + x.u2.abs()) {
            break;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{eigen_data, IntMatrix2};

    const RHO: f64 = 0.15;

    #[test]
    fn bump_plateau_and_support() {
        for kind in [BumpKind::Smooth, BumpKind::Quintic] {
            let b = BumpProfile::with_kind(RHO, kind);
            assert_eq!(b.value(0.0), 1.0);
            assert_eq!(b.value(0.49 * RHO), 1.0);
            assert_eq!(b.value(2.0 * RHO), 0.0);
            assert_eq!(b.value(1.0001 * RHO), 0.0);
            let mid = b.value(0.75 * RHO);
            assert!(mid > 0.0 && mid < 1.0);
        }
    }

    #[test]
    fn transition_symmetry() {
        for kind in [BumpKind::Smooth, BumpKind::Quintic] {
            let b = BumpProfile::with_kind(RHO, kind);
            for i in 0..=100 {
                let t = i as f64 / 100.0;
                assert!((b.transition(t) + b.transition(1.0 - t) - 1.0).abs() < 1e-12);
            }
            assert!((b.value(0.75 * RHO) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn bump_monotone_on_grid() {
        for kind in [BumpKind::Smooth, BumpKind::Quintic] {
            let b = BumpProfile::with_kind(RHO, kind);
            let mut prev = b.value(0.0);
            for i in 1..=10_000 {
                let v = b.value(2.0 * RHO * i as f64 / 10_000.0);
                assert!(v <= prev);
                assert!((0.0..=1.0).contains(&v));
                prev = v;
            }
        }
    }

    #[test]
    fn bump_derivative_matches_differences() {
        for kind in [BumpKind::Smooth, BumpKind::Quintic] {
            let b = BumpProfile::with_kind(RHO, kind);
            for i in 1..100 {
                let r = RHO * (0.5 + 0.5 * i as f64 / 100.0);
                let h = 1e-7;
                let fd = (b.value(r + h) - b.value(r - h)) / (2.0 * h);
                assert!((fd - b.derivative(r)).abs() < 1e-5 * (1.0 + fd.abs()), "r={r}");
            }
        }
    }

    #[test]
    fn closed_form_region() {
        let b = BumpProfile::new(RHO);
        for &u2 in &[1e-3, -0.01, 0.015] {
            let t = 1.4;
            let r = integrate_flow(&b, 0.0, FiberChart::new(0.0, u2), t, 64).unwrap();
            let exact = u2 * f64::exp(t);
            assert!(((r.endpoint.u2 - exact) / exact).abs() < 1e-8);
            assert!(((r.jacobian[1][1] - t.exp()) / t.exp()).abs() < 1e-8);
        }
    }

    #[test]
    fn off_support_is_identity() {
        let b = BumpProfile::new(RHO);
        let start = FiberChart::new(0.01, 0.02);
        let r = integrate_flow(&b, RHO * 1.01, start, 1.4, 64).unwrap();
        assert_eq!(r.endpoint, start);
        assert_eq!(r.jacobian, [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(r.steps_taken, 0);

        let outside = FiberChart::new(0.1, 0.12);
        let r = integrate_flow(&b, 0.0, outside, -1.4, 64).unwrap();
        assert_eq!(r.endpoint, outside);
        assert_eq!(r.steps_taken, 0);
    }

    #[test]
    fn zero_steps_rejected() {
        let b = BumpProfile::new(RHO);
        assert_eq!(
            integrate_flow(&b, 0.0, FiberChart::default(), 1.0, 0),
            Err(FlowError::NoSteps)
        );
    }

    #[test]
    fn coarse_steps_are_flagged() {
        let b = BumpProfile::new(RHO);
        let start = FiberChart::new(0.0, 0.06);
        let err = integrate_flow_checked(&b, 0.0, start, 1.4, 2, 1e-9).unwrap_err();
        assert!(matches!(err, FlowError::StepTooCoarse { .. }));
        assert!(integrate_flow_checked(&b, 0.0, start, 1.4, 512, 1e-9).is_ok());
    }

    #[test]
    fn inverse_flow_is_exact_inverse() {
        let b = BumpProfile::new(RHO);
        for i in 0..50 {
            let a = i as f64 * 0.7;
            let start = FiberChart::new(0.08 * a.cos(), 0.1 * (1.3 * a).sin());
            let fwd = integrate_flow(&b, 0.04, start, 1.4, 64).unwrap();
            let back = invert_flow(&b, 0.04, fwd.endpoint, 1.4, 64).unwrap();
            assert!((back.u2 - start.u2).abs() < 1e-14);
        }
    }

    #[test]
    fn chart_basis_examples() {
        let l = eigen_data(IntMatrix2::new(2, 1, 1, 1)).unwrap();
        let theta0 = TorusPoint::ORIGIN;
        assert_eq!(chart_from_torus(&l, theta0, theta0).unwrap(), FiberChart::new(0.0, 0.0));
        let y = theta0.translate([0.01 * l.v_s[0], 0.01 * l.v_s[1]]);
        let c = chart_from_torus(&l, theta0, y).unwrap();
        assert!(c.u1.abs() < 1e-12 && (c.u2 - 0.01).abs() < 1e-12);
        assert!(matches!(
            chart_from_torus(&l, theta0, TorusPoint::new(0.4, 0.4)),
            Err(FlowError::OutsideChart { .. })
        ));
    }
}
