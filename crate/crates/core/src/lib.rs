//! Numerical laboratory for Shub's partially hyperbolic skew products
//! `F = phi^T o (Phi x L)` on `T^2 x T^2`.

pub mod ergodic;
pub mod periodic;
pub mod perturbation;
pub mod seed;
pub mod semiconj;
pub mod system;
pub mod torus;

pub use periodic::{census, FinderConfig, PeriodicCensus, PeriodicClass, PeriodicError, Stability};
pub use perturbation::{BumpKind, BumpProfile, FiberChart, FlowError, FlowResult};
pub use system::{validate_params, ProductPoint, ShubParams, ShubSystem, SystemError};
pub use torus::{HyperbolicAutomorphism, IntMatrix2, RationalPoint, TorusError, TorusPoint};
