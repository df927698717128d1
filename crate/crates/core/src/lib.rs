//! Left-invariant Hermitian curvature flow on complex 2-step nilpotent Lie
//! groups, realized as an ODE on structure constants.
//!
//! Everything is generic over the real scalar `T` (`f32` or `f64`); the
//! aliases below fix `f64`.
//!
//! ```
//! use hcf_core::{catalog, k_from_bracket, C64};
//!
//! let h = catalog::heisenberg3(C64::new(2.0, 0.0)).unwrap();
//! let k = k_from_bracket(&h.bracket);
//! assert!((k.matrix[(2, 2)].re - 2.0).abs() < 1e-12);
//! ```

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod curvature;
pub mod error;
pub mod flow;
pub mod linalg;
pub mod scalar;
pub mod soliton;

pub use algebra::catalog;
pub use algebra::{act, bracket_inner, endo_inner, pi_action, validate, AlgebraDescriptor, BracketTensor};
pub use curvature::{k_from_bracket, k_from_metric, CurvatureOperator, MetricCurvature};
pub use error::{Error, Result};
pub use flow::{
    integrate_bracket_flow, integrate_metric_flow, integrate_norm_companion, integrate_normalized_flow,
    IntegratorConfig, Termination,
};
pub use scalar::Real;
pub use soliton::{fingerprint, fixed_point_is_soliton, soliton_solve, uniqueness_probe};

/// Identifies the normalization conventions baked into every number this
/// crate produces: `K = ½ Σ_{i<j} μ_ij μ_ijᴴ`, brackets stored for `i < j`,
/// `⟨μ, λ⟩ = Σ_{i<j,k} μ_ij^k conj(λ_ij^k)`, metric flow `h' = −K(h)`.
pub const CONVENTION_VERSION: &str = "hcf-conventions/1: K=1/2*sum_{i<j} mu_ij mu_ij^H; pairs i<j; <A,B>=tr(A B^H)";

pub type C64 = scalar::C<f64>;
pub type Matrix = scalar::CMatrix<f64>;
pub type Bracket = BracketTensor<f64>;
pub type Descriptor = AlgebraDescriptor<f64>;
pub type Config = IntegratorConfig<f64>;
pub type Trace = flow::FlowTrace<f64>;
pub type Report = soliton::SolitonReport<f64>;
