//! The skew product `F(x, y) = (Phi x, psi^T_{Phi x}(L y))` on `T^2 x T^2`.
//!
//! Fiber Jacobians are expressed in the `(v^u, v^s)` basis of `L`, where the
//! fiber cocycle is lower triangular with `(1,1)` entry equal to the unstable
//! eigenvalue of `L`.

use nalgebra::{Matrix4, Vector4};
use rand::Rng;
use thiserror::Error;

use crate::perturbation::{
    integrate_flow, integrate_flow_checked, invert_flow, BumpProfile, ChartBasis, FlowError,
};
use crate::torus::{
    eigen_data, torus_distance, HyperbolicAutomorphism, IntMatrix2, TorusError,
    TorusPoint,
};

/// 2x2 real matrix, row-major.
pub type Mat2 = [[f64; 2]; 2];

pub const IDENTITY2: Mat2 = [[1.0, 0.0], [0.0, 1.0]];

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// Step used for the finite-difference base-to-fiber block of the derivative.
pub const FD_STEP: f64 = 1e-6;

/// Entries above this magnitude abort a cocycle product.
pub const JACOBIAN_LIMIT: f64 = 1e300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SystemError {
    #[error("matrix {which} is invalid: {source}")]
    InvalidMatrix {
        which: &'static str,
        #[source]
        source: TorusError,
    },
    #[error("{name} = ({x1}, {x2}) is not fixed by {map}: image at distance {distance:e}")]
    NotFixedPoint {
        name: &'static str,
        map: &'static str,
        x1: f64,
        x2: f64,
        distance: f64,
    },
    #[error("flow time T = {t} violates 1 < lambda_s e^T = {stretch} < lambda_u = {lambda_u}")]
    BadFlowTime { t: f64, stretch: f64, lambda_u: f64 },
    #[error("support radius rho = {rho} reaches p: dist(p, q) = {distance}")]
    SupportHitsP { distance: f64, rho: f64 },
    #[error("gamma = 1/beta_1 = {gamma} is not below gamma_1 = lambda_s = {gamma1}")]
    GammaOrderViolated { gamma: f64, gamma1: f64 },
    #[error("rho = {rho} must lie in (0, 1/4)")]
    RhoTooLarge { rho: f64 },
    #[error("integrator_steps must be positive")]
    NoSteps,
    #[error("fiber cocycle entry exceeded {JACOBIAN_LIMIT:e} at n = {n}")]
    JacobianOverflow { n: usize },
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// A point of `T^2 x T^2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProductPoint {
    pub base: TorusPoint,
    pub fiber: TorusPoint,
}

impl ProductPoint {
    pub fn new(base: TorusPoint, fiber: TorusPoint) -> Self {
        ProductPoint { base, fiber }
    }

    /// Lebesgue-uniform sample.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        ProductPoint {
            base: TorusPoint::new(rng.gen(), rng.gen()),
            fiber: TorusPoint::new(rng.gen(), rng.gen()),
        }
    }

    /// Sup of the two component distances.
    pub fn distance(&self, o: &ProductPoint) -> f64 {
        torus_distance(self.base, o.base).max(torus_distance(self.fiber, o.fiber))
    }
}

/// Raw parameters. `t == 0` denotes the unperturbed product `Phi x L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShubParams {
    pub phi: IntMatrix2,
    pub l: IntMatrix2,
    pub t: f64,
    pub q: TorusPoint,
    pub p: TorusPoint,
    pub theta0: TorusPoint,
    pub bump: BumpProfile,
    pub integrator_steps: usize,
    /// Optional half-step comparison tolerance for every flow evaluation.
    pub step_check_tol: Option<f64>,
}

impl ShubParams {
    /// `Phi = [[3,2],[1,1]]`, `L = [[2,1],[1,1]]`, `T = 1.4`, `rho = 0.15`,
    /// `q = (0, 1/2)`, `p = theta0 = (0, 0)`, 64 RK4 steps.
    pub fn reference() -> Self {
        ShubParams {
            phi: IntMatrix2::new(3, 2, 1, 1),
            l: IntMatrix2::new(2, 1, 1, 1),
            t: 1.4,
            q: TorusPoint::new(0.0, 0.5),
            p: TorusPoint::new(0.0, 0.0),
            theta0: TorusPoint::new(0.0, 0.0),
            bump: BumpProfile::new(0.15),
            integrator_steps: 64,
            step_check_tol: None,
        }
    }

    pub fn unperturbed(mut self) -> Self {
        self.t = 0.0;
        self
    }
}

/// A validated system.
#[derive(Debug, Clone, PartialEq)]
pub struct ShubSystem {
    params: ShubParams,
    phi: HyperbolicAutomorphism,
    l: HyperbolicAutomorphism,
    phi_inv: IntMatrix2,
    l_inv: IntMatrix2,
    chart: ChartBasis,
}

/// One application of a fiber map `f_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberStep {
    pub fiber: TorusPoint,
    /// Signed `v^s` displacement added by the flow to `L y`.
    pub displacement: f64,
    /// Fiber Jacobian in the chart basis.
    pub jacobian: Mat2,
}

const FIXED_TOL: f64 = 1e-12;

pub fn validate_params(params: ShubParams) -> Result<ShubSystem, SystemError> {
    let phi = eigen_data(params.phi).map_err(|source| SystemError::InvalidMatrix { which: "phi", source })?;
    let l = eigen_data(params.l).map_err(|source| SystemError::InvalidMatrix { which: "L", source })?;
    if params.integrator_steps == 0 {
        return Err(SystemError::NoSteps);
    }
    for (name, map, m, pt) in [
        ("q", "phi", &params.phi, params.q),
        ("p", "phi", &params.phi, params.p),
        ("theta0", "L", &params.l, params.theta0),
    ] {
        let distance = torus_distance(m.apply(pt), pt);
        if distance > FIXED_TOL {
            return Err(SystemError::NotFixedPoint { name, map, x1: pt.x1, x2: pt.x2, distance });
        }
    }
    let t = params.t;
    let stretch = l.lambda_s * t.exp();
    if !(t >= 0.0) || (t > 0.0 && !(1.0 < stretch && stretch < l.lambda_u)) {
        return Err(SystemError::BadFlowTime { t, stretch, lambda_u: l.lambda_u });
    }
    let rho = params.bump.rho;
    if !(rho > 0.0 && rho < 0.25) {
        return Err(SystemError::RhoTooLarge { rho });
    }
    let distance = torus_distance(params.p, params.q);
    if distance <= rho {
        return Err(SystemError::SupportHitsP { distance, rho });
    }
    let gamma = 1.0 / phi.lambda_u;
    if !(gamma < l.lambda_s) {
        return Err(SystemError::GammaOrderViolated { gamma, gamma1: l.lambda_s });
    }
    let phi_inv = params.phi.unimodular_inverse().map_err(|source| SystemError::InvalidMatrix { which: "phi", source })?;
    let l_inv = params.l.unimodular_inverse().map_err(|source| SystemError::InvalidMatrix { which: "L", source })?;
    Ok(ShubSystem {
        params,
        phi,
        l,
        phi_inv,
        l_inv,
        chart: ChartBasis::new(&l),
    })
}

impl ShubSystem {
    pub fn params(&self) -> &ShubParams {
        &self.params
    }

    pub fn phi(&self) -> &HyperbolicAutomorphism {
        &self.phi
    }

    pub fn l(&self) -> &HyperbolicAutomorphism {
        &self.l
    }

    pub fn chart(&self) -> &ChartBasis {
        &self.chart
    }

    pub fn bump(&self) -> &BumpProfile {
        &self.params.bump
    }

    pub fn is_perturbed(&self) -> bool {
        self.params.t > 0.0
    }

    /// `gamma = 1 / beta_1`.
    pub fn gamma(&self) -> f64 {
        1.0 / self.phi.lambda_u
    }

    /// `gamma_1 = lambda_s` of `L`.
    pub fn gamma1(&self) -> f64 {
        self.l.lambda_s
    }

    /// `gamma_2 = lambda_s e^T`.
    pub fn gamma2(&self) -> f64 {
        self.l.lambda_s * self.params.t.exp()
    }

    /// `log beta_1 + log beta_2`.
    pub fn topological_entropy(&self) -> f64 {
        self.phi.log_lambda_u() + self.l.log_lambda_u()
    }

    pub fn base_dist(&self, base_image: TorusPoint) -> f64 {
        torus_distance(base_image, self.params.q)
    }

    /// Whether the perturbation can act on fibers over `base_image`.
    pub fn base_in_support(&self, base_image: TorusPoint) -> bool {
        self.is_perturbed() && self.params.bump.value(self.base_dist(base_image)) > 0.0
    }

    fn flow(&self, base_dist: f64, start: crate::perturbation::FiberChart, t: f64) -> Result<crate::perturbation::FlowResult, FlowError> {
        let p = &self.params;
        match p.step_check_tol {
            Some(tol) => integrate_flow_checked(&p.bump, base_dist, start, t, p.integrator_steps, tol),
            None => integrate_flow(&p.bump, base_dist, start, t, p.integrator_steps),
        }
    }

    /// `f_x(y) = psi^T_{Phi x}(L y)`, given `base_image = Phi x`.
    pub fn fiber_step(&self, base_image: TorusPoint, fiber: TorusPoint) -> Result<FiberStep, SystemError> {
        let ly = self.params.l.apply(fiber);
        let linear = [[self.l.eig_u, 0.0], [0.0, self.l.eig_s]];
        let identity = FiberStep { fiber: ly, displacement: 0.0, jacobian: linear };
        if !self.is_perturbed() {
            return Ok(identity);
        }
        let u = self.chart.local(self.params.theta0, ly);
        if u.norm() >= self.params.bump.rho {
            return Ok(identity);
        }
        let flow = self.flow(self.base_dist(base_image), u, self.params.t)?;
        if flow.steps_taken == 0 {
            return Ok(identity);
        }
        let d = flow.endpoint.u2 - u.u2;
        let vs = self.chart.v_s;
        Ok(FiberStep {
            fiber: ly.translate([d * vs[0], d * vs[1]]),
            displacement: d,
            jacobian: mat2_mul(&flow.jacobian, &linear),
        })
    }

    /// One forward step together with its fiber data.
    pub fn step(&self, pt: ProductPoint) -> Result<(ProductPoint, FiberStep), SystemError> {
        let base = self.params.phi.apply(pt.base);
        let fs = self.fiber_step(base, pt.fiber)?;
        Ok((ProductPoint::new(base, fs.fiber), fs))
    }

    pub fn map_forward(&self, pt: ProductPoint) -> Result<ProductPoint, SystemError> {
        Ok(self.step(pt)?.0)
    }

    /// Exact inverse of [`ShubSystem::map_forward`]: the flow is inverted by
    /// Newton iteration on the discrete forward map.
    pub fn map_inverse(&self, pt: ProductPoint) -> Result<ProductPoint, SystemError> {
        let base = self.phi_inv.apply(pt.base);
        let mut z = pt.fiber;
        if self.is_perturbed() {
            let u = self.chart.local(self.params.theta0, pt.fiber);
            if u.norm() < self.params.bump.rho {
                let bd = self.base_dist(pt.base);
                if self.params.bump.value(bd) > 0.0 {
                    let pre = invert_flow(&self.params.bump, bd, u, self.params.t, self.params.integrator_steps)?;
                    let d = pre.u2 - u.u2;
                    let vs = self.chart.v_s;
                    z = pt.fiber.translate([d * vs[0], d * vs[1]]);
                }
            }
        }
        Ok(ProductPoint::new(base, self.l_inv.apply(z)))
    }

    /// `(Phi x L)(pt)`.
    pub fn product_map(&self, pt: ProductPoint) -> ProductPoint {
        ProductPoint::new(self.params.phi.apply(pt.base), self.params.l.apply(pt.fiber))
    }

    /// `(Phi x L)^{-1}(pt)`.
    pub fn product_inverse(&self, pt: ProductPoint) -> ProductPoint {
        ProductPoint::new(self.phi_inv.apply(pt.base), self.l_inv.apply(pt.fiber))
    }

    /// Full 4x4 derivative in `(base ambient, fiber chart)` coordinates. The
    /// flow moves only `u2`, so the base-to-fiber block has a zero `u1` row;
    /// its `u2` row is a central finite difference of the displacement with
    /// step [`FD_STEP`].
    pub fn full_derivative(&self, pt: ProductPoint) -> Result<Matrix4<f64>, SystemError> {
        let (_, fs) = self.step(pt)?;
        let phi = &self.params.phi;
        let mut d = Matrix4::zeros();
        d[(0, 0)] = phi.a11 as f64;
        d[(0, 1)] = phi.a12 as f64;
        d[(1, 0)] = phi.a21 as f64;
        d[(1, 1)] = phi.a22 as f64;
        for i in 0..2 {
            for j in 0..2 {
                d[(2 + i, 2 + j)] = fs.jacobian[i][j];
            }
        }
        if self.is_perturbed() {
            for j in 0..2 {
                let mut e = [0.0; 2];
                e[j] = FD_STEP;
                let plus = ProductPoint::new(pt.base.translate(e), pt.fiber);
                let minus = ProductPoint::new(pt.base.translate([-e[0], -e[1]]), pt.fiber);
                let dp = self.step(plus)?.1.displacement;
                let dm = self.step(minus)?.1.displacement;
                d[(3, j)] = (dp - dm) / (2.0 * FD_STEP);
            }
        }
        Ok(d)
    }

    /// `g^n_x`: the endpoint of `n` steps and the product of fiber Jacobians.
    pub fn fiber_cocycle(&self, start: ProductPoint, n: usize) -> Result<(ProductPoint, Mat2), SystemError> {
        let mut pt = start;
        let mut jac = IDENTITY2;
        for k in 1..=n {
            let (next, fs) = self.step(pt)?;
            jac = mat2_mul(&fs.jacobian, &jac);
            if jac.iter().flatten().any(|x| !(x.abs() <= JACOBIAN_LIMIT)) {
                return Err(SystemError::JacobianOverflow { n: k });
            }
            pt = next;
        }
        Ok((pt, jac))
    }

    /// Area growth of the two-dimensional unstable subspace over one step,
    /// after pushing the frame `{(v^u_Phi, 0), (0, v^u_L)}` through
    /// `burn_in` steps with re-orthonormalisation.
    pub fn unstable_area_growth(&self, start: ProductPoint, burn_in: usize) -> Result<f64, SystemError> {
        let vu = self.phi.v_u;
        let mut frame = [
            Vector4::new(vu[0], vu[1], 0.0, 0.0),
            Vector4::new(0.0, 0.0, 1.0, 0.0),
        ];
        let mut pt = start;
        let mut growth = 1.0;
        for _ in 0..=burn_in {
            let d = self.full_derivative(pt)?;
            let a = d * frame[0];
            let b = d * frame[1];
            let na = a.norm();
            let qa = a / na;
            let b_perp = b - qa * qa.dot(&b);
            let nb = b_perp.norm();
            growth = na * nb;
            frame = [qa, b_perp / nb];
            pt = self.map_forward(pt)?;
        }
        Ok(growth)
    }
}
