//! Exact certificates of Pareto optimality over convex polyhedra.
//!
//! The crate decides whether a utility vector is Pareto optimal in a
//! polyhedral utility possibility set and, when it is, produces a
//! machine-checkable certificate: a short sequence of nonnegative welfare
//! weights, the last strictly positive, that the point maximizes one after
//! another. From such a certificate it derives a piecewise-linear concave
//! welfare function and a sequential Nash bargaining plan.
//!
//! For exchange economies with piecewise-linear concave utilities it
//! compiles the (downward closed) utility possibility set into inequalities
//! and, given a Pareto optimal endowment, synthesizes strictly positive
//! prices supporting the endowment as a Walrasian equilibrium.
//!
//! All arithmetic is exact ([`rational::Rational`]); nothing is decided up
//! to a tolerance.

pub mod batch;
pub mod economy;
pub mod io;
pub mod lp;
pub mod pareto;
pub mod polyhedron;
pub mod rational;
pub mod report;
pub mod simplex;

mod par;

pub use economy::{Economy, PlcUtility, WalrasianResult};
pub use lp::{LpResult, LpStatus};
pub use pareto::{BargainingPlan, Certificate, Classification, Strategy, WelfareFunction};
pub use polyhedron::{Constraint, Face, HRep, NormalCone, Polyhedron, VRep};
pub use rational::{IndexSet, Rational, Vector};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for dimension {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("point {0} does not belong to the set")]
    NotInSet(String),
    #[error("the polyhedron is empty")]
    Empty,
    #[error("zero normal vector")]
    ZeroNormal,
    #[error("objective is unbounded over the set")]
    Unbounded,
    #[error("point is not Pareto optimal; dominated by {dominator}")]
    NotMaximal { dominator: String },
    #[error("the set has no maximal points")]
    NoMaximalPoints,
    #[error("rejected at step {step}: {reason}")]
    Rejected { step: usize, reason: String },
    #[error("aggregate endowment is not minimal in the sum of upper contour sets; {witness} is smaller")]
    NotMinimal { witness: String },
    #[error("invalid face chain at link {link}: {reason}")]
    InvalidChain { link: usize, reason: String },
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no strictly positive normal exists: {0}")]
    NoPositiveNormal(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
