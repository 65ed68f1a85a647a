//! Bessel-Struve kernel `S_nu`, the normalized functions `z S_nu` and
//! `z (2 - S_nu)`, and the coefficient criteria placing them (and the
//! operators `J_nu`, `Q_nu` built on them) in the classes `T_lambda(alpha)`
//! and `L_lambda(alpha)`.
//!
//! - [`series`]: coefficients, evaluation, moment sums at `z = 1`.
//! - [`criteria`]: closed-form conditions and critical-order bisection.
//! - [`operators`]: normalized series, Hadamard product, `J_nu`, `Q_nu`, coefficient sums.
//! - [`verifier`]: disk sampling, ODE residual, high-precision oracle.
//! - [`cli`]: the `bsk` command-line front end.

// `!(x > 0.0)` style guards deliberately reject NaN alongside out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod criteria;
pub mod error;
pub mod operators;
pub mod series;
pub mod verifier;

pub use criteria::{critical_nu, ClassParams, Condition, ConditionForm, DixitPalParams, MembershipVerdict};
pub use error::{Error, Result};
pub use operators::{NormalizedSeries, SignConvention};
pub use series::{KernelOrder, MomentSet};
