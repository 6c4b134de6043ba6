//! Exact rational arithmetic, certified linear programming and cone conversion.
//!
//! Everything here is exact: there are no tolerances anywhere, and every LP verdict
//! comes with a certificate that [`lp::validate`] re-checks by substitution.

pub mod dd;
pub mod lp;
pub mod matrix;
pub mod rational;

pub use dd::{canonical_basis, dd_hrep_to_vrep, dd_vrep_to_hrep, ConeRows, Generators, PolyCone};
pub use lp::{lp_solve, validate, CertificateKind, LpCertificate, LpError, LpOutcome, LpProblem, Sense};
pub use matrix::RatMatrix;
pub use rational::{
    add_vec, dot, format_rational, format_vec, is_zero_vec, neg_vec, parse_rational, primitive, rat, ratio,
    rvec, scale_vec, sign, sub_vec, ParseRationalError, Rational,
};
