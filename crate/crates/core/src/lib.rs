//! Quantum hypothesis testing with a composite null hypothesis.
//!
//! * [`hermitian`]: dense Hermitian operators, spectral calculus on supports,
//!   states, tensor powers and the JSON operator file format.
//! * [`divergence`]: traditional and sandwiched Rényi divergences, Umegaki
//!   relative entropy and the `κ` constant.
//! * [`np_oracle`]: exact optimal type-II error `β_ε` from the Lagrangian dual
//!   of the Neyman–Pearson program, with a recovered primal test.
//! * [`covering_net`]: trace-norm nets over finite pools of states.
//! * [`stein_bounds`]: finite-`n` upper and lower bounds on `(1/n) log β_ε`.
//! * [`experiments`]: sweeps, CSV output and the property-verification suite.
//!
//! Numerics are generic over [`scalar::Real`] (`f32` or `f64`); the aliases
//! below fix the scalar type.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod covering_net;
pub mod divergence;
pub mod error;
pub mod experiments;
pub mod hermitian;
pub mod np_oracle;
pub mod scalar;
pub mod stein_bounds;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Operator = hermitian::HermitianOperator<f64>;
pub type Operator32 = hermitian::HermitianOperator<f32>;
pub type Density = hermitian::State<f64>;
pub type Density32 = hermitian::State<f32>;
pub type Eigen = hermitian::EigenDecomposition<f64>;
pub type Eigen32 = hermitian::EigenDecomposition<f32>;
pub type Divergence = divergence::DivergenceValue<f64>;
pub type Divergence32 = divergence::DivergenceValue<f32>;
pub type Instance = stein_bounds::HypothesisInstance<f64>;
pub type Instance32 = stein_bounds::HypothesisInstance<f32>;
pub type Report = stein_bounds::BoundReport<f64>;
pub type Net = covering_net::CoveringNet<f64>;
pub type Solution = np_oracle::DualSolution<f64>;
pub type Test = np_oracle::BinaryTest<f64>;
