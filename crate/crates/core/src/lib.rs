//! Exact reduction of integrals of products of polynomial powers by two-term
//! recurrence relations.
//!
//! An integrand is `cofactor * transc * prod(base_i ^ exponent_i)` with
//! rational exponents. The catalog holds 136 relations of the shape
//! `k1 * INT(I1) + INT(I2) + G = 0`, each tied to a form (the degrees of the
//! bases) and a degeneracy case (which discriminants and resultants vanish).
//! The engine chains relations until every exponent lies in a target window,
//! and the verifier checks every identity by exact differentiation.

pub mod arith;
pub mod catalog;
pub mod engine;
pub mod error;
pub mod frontend;
pub mod integrand;
pub mod par;
pub mod verify;

pub use arith::{Poly, Rat};
pub use catalog::{AlgTerm, Catalog, RelationInstance, Rule, SolveFor};
pub use engine::{
    absorb_cofactor, apply_step, instance_for, reduce, reduce_with, ReduceOptions, ReductionResult, Rewrite, Status,
    Step,
};
pub use error::{Error, Result};
pub use frontend::{parse_expr, parse_integrand, print_expr, serialize_result};
pub use integrand::{
    classify, degeneracy_profile, normalize, FormTag, Integrand, PowerFactor, TranscFactor, TranscKind, Window,
};
pub use par::Execution;
pub use verify::{selftest_catalog, verify_result, verify_rewrite, verify_step};
