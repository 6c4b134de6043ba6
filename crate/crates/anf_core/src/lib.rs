//! Abs-normal programs with quadratic data: model, switching solve, signatures and
//! point-wise Jacobians.

pub mod eval;
pub mod program;
pub mod quadratic;

pub use eval::{constraint_jacobians, eval, jacobian_z, solve_fixed_signature, AnfError, ConstraintJacobians, EvalResult};
pub use program::{validate, AbsNormalProgram, SignatureVector, ValidationReport};
pub use quadratic::QuadraticFunc;
