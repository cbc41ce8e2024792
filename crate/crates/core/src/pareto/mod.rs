//! Pareto optimality over polyhedral utility sets: dominance tests,
//! classification, sequential welfare certificates, welfare functions and
//! bargaining plans.

mod certificate;
mod partition;
mod welfare;

pub use certificate::{
    construct_certificate, construct_certificate_in, verify_certificate, verify_partition_certificate, Certificate,
    Strategy,
};
pub use partition::{
    realize_pattern, search_partition_certificate, InfeasibilityReport, PartitionOptions, PartitionSearch,
    PatternOutcome, DEFAULT_PATTERN_CAP,
};
pub use welfare::{
    audit_bargaining, bargaining_plan, build_welfare, verify_bargaining, BargainingAudit, BargainingPlan,
    BargainingRound, WelfareFunction, DEFAULT_EXPONENT_CAP,
};

use std::sync::Arc;

use num_traits::One;

use crate::lp::{nonnegative_in_cone, strictly_positive_in_cone};
use crate::polyhedron::{minimal_face_at, normal_cone_at, Constraint, HRep, Polyhedron};
use crate::rational::{add, format_vector, zeros, Rational, Vector};
use crate::simplex::Outcome;
use crate::{Error, Result};

/// Outcome of the dominance linear program.
#[derive(Debug, Clone, PartialEq)]
pub struct Dominance {
    pub maximal: bool,
    /// A point `v > u` of the set when `u` is not maximal.
    pub dominator: Option<Vector>,
}

/// Solves `max Σ v_i` over `h ∩ {v >= u}`; `u` is maximal iff the optimum is `Σ u_i`.
pub fn is_maximal(h: &HRep, u: &[Rational]) -> Result<Dominance> {
    h.validate()?;
    if u.len() != h.dim {
        return Err(Error::DimensionMismatch {
            expected: h.dim,
            found: u.len(),
        });
    }
    if !h.contains(u) {
        return Err(Error::NotInSet(format_vector(u)));
    }
    let n = h.dim;
    let mut lp = h.linear_program().maximize(vec![Rational::one(); n]);
    for (i, ui) in u.iter().enumerate() {
        let mut row = zeros(n);
        row[i] = -Rational::one();
        lp.le.push((row, -ui));
    }
    let total: Rational = u.iter().sum();
    match lp.solve() {
        Outcome::Optimal { value, .. } if value == total => Ok(Dominance {
            maximal: true,
            dominator: None,
        }),
        Outcome::Optimal { x, .. } => Ok(Dominance {
            maximal: false,
            dominator: Some(x),
        }),
        Outcome::Unbounded { x, ray } => {
            let dominator = if x.as_slice() != u { x } else { add(u, &ray) };
            Ok(Dominance {
                maximal: false,
                dominator: Some(dominator),
            })
        }
        Outcome::Infeasible => Err(Error::Internal("dominance program infeasible at a member point".into())),
    }
}

/// Position of a point relative to `U^{++} ⊂ U^P ⊂ U^+`.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub in_set: bool,
    pub pareto: bool,
    pub plus: bool,
    pub plus_plus: bool,
    pub dominator: Option<Vector>,
    /// A nonzero nonnegative normal maximized at the point, when `plus`.
    pub nonnegative_normal: Option<Vector>,
    /// A strictly positive normal maximized at the point, when `plus_plus`.
    pub positive_normal: Option<Vector>,
}

impl Classification {
    fn outside() -> Self {
        Self {
            in_set: false,
            pareto: false,
            plus: false,
            plus_plus: false,
            dominator: None,
            nonnegative_normal: None,
            positive_normal: None,
        }
    }
}

/// Classifies `u` by the normal cone at its minimal face and the dominance program.
pub fn classify(p: &Arc<Polyhedron>, u: &[Rational]) -> Result<Classification> {
    if u.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: u.len(),
        });
    }
    if !p.contains(u) {
        return Ok(Classification::outside());
    }
    let cone = normal_cone_at(&minimal_face_at(p, u)?);
    let nonnegative_normal = nonnegative_in_cone(&cone);
    let positive_normal = strictly_positive_in_cone(&cone);
    let dom = is_maximal(p.hrep(), u)?;
    let c = Classification {
        in_set: true,
        pareto: dom.maximal,
        plus: nonnegative_normal.is_some(),
        plus_plus: positive_normal.is_some(),
        dominator: dom.dominator,
        nonnegative_normal,
        positive_normal,
    };
    if (c.plus_plus && !c.pareto) || (c.pareto && !c.plus) {
        return Err(Error::Internal(format!(
            "containment chain violated at {}",
            format_vector(u)
        )));
    }
    Ok(c)
}

/// `h ∩ {x_i = u_i, i ∈ fixed}`.
pub(crate) fn fix_coordinates(h: &HRep, u: &[Rational], fixed: impl IntoIterator<Item = usize>) -> HRep {
    let mut out = h.clone();
    for i in fixed {
        let mut row = zeros(h.dim);
        row[i] = Rational::one();
        out.eqs.push(Constraint::new(row, u[i].clone()));
    }
    out
}

pub(crate) fn check_point(p: &Polyhedron, u: &[Rational]) -> Result<()> {
    if u.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: u.len(),
        });
    }
    if !p.contains(u) {
        return Err(Error::NotInSet(format_vector(u)));
    }
    Ok(())
}

pub(crate) fn require_maximal(p: &Polyhedron, u: &[Rational]) -> Result<()> {
    let dom = is_maximal(p.hrep(), u)?;
    match dom.dominator {
        None if dom.maximal => Ok(()),
        Some(d) => Err(Error::NotMaximal {
            dominator: format_vector(&d),
        }),
        None => Err(Error::Internal("dominated point without a dominator".into())),
    }
}
