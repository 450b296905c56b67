//! Numerics: working-precision reals, `zeta`, `li`, Euler-product constants,
//! Mertens products, residual fits and maximal-order tables.

pub mod constants;
pub mod euler;
pub mod fit;
pub mod li;
pub mod maximal;
pub mod mertens;
pub mod real;
pub mod theorems;
pub mod zeta;

pub use constants::{named_constant, ConstantName, ConstantParams, ConstantsCache, Exponent};
pub use euler::{euler_product, ConstantResult, EulerProductSpec, LocalSeries};
pub use fit::{residual_fit, FitReport, MainModel, MainTerm, Normalization};
pub use li::li;
pub use maximal::{maximal_order_report, MaximalKind, MaximalReport};
pub use mertens::{mertens_constant, mertens_ratio};
pub use real::Real;
pub use theorems::{fit_target, fit_target_default, FitTarget, TheoremFit};
pub use zeta::{euler_gamma, zeta_one_third, zeta_real};
