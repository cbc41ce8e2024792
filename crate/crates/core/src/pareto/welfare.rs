//! The piecewise-linear welfare function of a certificate and the sequential
//! Nash bargaining plan it induces.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::certificate::Certificate;
use super::{check_point, fix_coordinates};
use crate::lp::{maximize_hrep, LpStatus};
use crate::polyhedron::Polyhedron;
use crate::rational::{dot, format_rational, is_strictly_positive, sub, support, IndexSet, Rational, Vector};
use crate::{Error, Result};

/// Largest total integer exponent used when comparing Nash products.
pub const DEFAULT_EXPONENT_CAP: u64 = 10_000;

/// `W(u') = min_t ⟨φ^t, u' - u⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WelfareFunction {
    #[serde(with = "crate::io::serde_rational::vec")]
    pub base: Vector,
    #[serde(with = "crate::io::serde_rational::mat")]
    pub normals: Vec<Vector>,
}

pub fn build_welfare(cert: &Certificate, u: &[Rational]) -> Result<WelfareFunction> {
    if cert.is_empty() {
        return Err(Error::Precondition("certificate has no normals".into()));
    }
    if let Some(phi) = cert.normals.iter().find(|phi| phi.len() != u.len()) {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: phi.len(),
        });
    }
    Ok(WelfareFunction {
        base: u.to_vec(),
        normals: cert.normals.clone(),
    })
}

impl WelfareFunction {
    pub fn evaluate(&self, v: &[Rational]) -> Result<Rational> {
        if v.len() != self.base.len() {
            return Err(Error::DimensionMismatch {
                expected: self.base.len(),
                found: v.len(),
            });
        }
        let d = sub(v, &self.base);
        let value = self
            .normals
            .iter()
            .map(|phi| dot(phi, &d))
            .min()
            .expect("welfare functions have at least one normal");
        Ok(value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BargainingRound {
    /// Position of the normal in the certificate (1-based).
    pub step: usize,
    /// `I^t`.
    pub agents: IndexSet,
    /// `ψ_i` for `i ∈ I^t`.
    pub powers: BTreeMap<usize, Rational>,
    /// `φ^t`.
    pub normal: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BargainingPlan {
    pub base: Vector,
    pub rounds: Vec<BargainingRound>,
}

/// Rounds `I^t = supp φ^t ∖ ∪_{s<t} I^s` with powers
/// `ψ_i = φ^t_i u_i / Σ_{j ∈ I^t} φ^t_j u_j`. Steps that add no new agent
/// are omitted.
pub fn bargaining_plan(cert: &Certificate, u: &[Rational]) -> Result<BargainingPlan> {
    if !is_strictly_positive(u) {
        return Err(Error::Precondition(
            "bargaining needs utilities strictly above the zero disagreement point".into(),
        ));
    }
    let n = u.len();
    let mut seen = IndexSet::new();
    let mut rounds = Vec::new();
    for (t, phi) in cert.normals.iter().enumerate() {
        if phi.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: phi.len(),
            });
        }
        let agents: IndexSet = support(phi).difference(&seen).copied().collect();
        if agents.is_empty() {
            continue;
        }
        let total: Rational = agents.iter().map(|&i| &phi[i] * &u[i]).sum();
        let powers = agents.iter().map(|&i| (i, &phi[i] * &u[i] / &total)).collect();
        seen.extend(agents.iter().copied());
        rounds.push(BargainingRound {
            step: t + 1,
            agents,
            powers,
            normal: phi.clone(),
        });
    }
    if seen.len() != n {
        return Err(Error::Precondition(
            "the normals' supports do not cover every agent".into(),
        ));
    }
    Ok(BargainingPlan {
        base: u.to_vec(),
        rounds,
    })
}

/// Counts gathered while auditing a plan.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BargainingAudit {
    /// Vertices of the feasible sets at which Nash products were compared.
    pub products_compared: usize,
    /// Vertices skipped because some bargainer's utility is not positive there.
    pub skipped: usize,
}

fn rejected(round: usize, reason: String) -> Error {
    Error::Rejected { step: round, reason }
}

/// Checks, for every round `t` with feasible set
/// `V^{t-1} = P ∩ {v_i = u_i for agents of earlier rounds}`:
/// (a) `max ⟨φ^t, v⟩` over `V^{t-1}` equals `⟨φ^t, u⟩`;
/// (b) `ψ_i φ^t_j u_j = ψ_j φ^t_i u_i`, `Σ ψ = 1` and `ψ > 0`;
/// (c) at every vertex `v` of `V^{t-1}` positive on `I^t`,
/// `Π v_i^{k_i} <= Π u_i^{k_i}` with `k_i = ψ_i D` for the common denominator `D`.
pub fn audit_bargaining(p: &Arc<Polyhedron>, plan: &BargainingPlan, exponent_cap: u64) -> Result<BargainingAudit> {
    let u = &plan.base;
    check_point(p, u)?;
    if !is_strictly_positive(u) {
        return Err(Error::Precondition("base point is not strictly positive".into()));
    }
    let mut audit = BargainingAudit::default();
    let mut earlier = IndexSet::new();
    for (r, round) in plan.rounds.iter().enumerate() {
        let label = r + 1;
        let phi = &round.normal;
        if phi.len() != u.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                found: phi.len(),
            });
        }
        let keys: IndexSet = round.powers.keys().copied().collect();
        if keys != round.agents || round.agents.is_empty() || !round.agents.is_disjoint(&earlier) {
            return Err(rejected(
                label,
                "bargainers overlap earlier rounds or lack powers".into(),
            ));
        }
        let feasible = fix_coordinates(p.hrep(), u, earlier.iter().copied());

        // (a)
        let target = dot(phi, u);
        let lp = maximize_hrep(&feasible, phi)?;
        match (lp.status, lp.value) {
            (LpStatus::Optimal, Some(v)) if v <= target => {}
            (LpStatus::Optimal, Some(v)) => {
                return Err(rejected(
                    label,
                    format!(
                        "weighted sum reaches {} above {}",
                        format_rational(&v),
                        format_rational(&target)
                    ),
                ))
            }
            _ => return Err(rejected(label, "weighted sum unbounded on the feasible set".into())),
        }

        // (b)
        let mut sum = Rational::zero();
        for (&i, psi_i) in &round.powers {
            if !psi_i.is_positive() {
                return Err(rejected(label, format!("power of agent {} is not positive", i + 1)));
            }
            sum += psi_i;
            for (&j, psi_j) in &round.powers {
                if psi_i * &phi[j] * &u[j] != psi_j * &phi[i] * &u[i] {
                    return Err(rejected(
                        label,
                        format!("powers of agents {} and {} are not proportional", i + 1, j + 1),
                    ));
                }
            }
        }
        if !sum.is_one() {
            return Err(rejected(label, format!("powers sum to {}", format_rational(&sum))));
        }

        // (c)
        let denominator = round
            .powers
            .values()
            .fold(BigInt::one(), |acc, psi| acc.lcm(psi.denom()));
        let exponents: Vec<(usize, u64)> = round
            .powers
            .iter()
            .map(|(&i, psi)| {
                let k = (psi * Rational::from_integer(denominator.clone())).to_integer();
                u64::try_from(k).map(|k| (i, k))
            })
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::ResourceCap("Nash exponent does not fit in 64 bits".into()))?;
        let total: u64 = exponents.iter().map(|&(_, k)| k).sum();
        if total > exponent_cap {
            return Err(Error::ResourceCap(format!(
                "Nash product exponent {total} exceeds the cap {exponent_cap}"
            )));
        }
        let product = |v: &[Rational]| -> Rational {
            exponents
                .iter()
                .map(|&(i, k)| num_traits::pow(v[i].clone(), k as usize))
                .product()
        };
        let reference = product(u);
        let region = Polyhedron::from_hrep(&feasible)?;
        for v in &region.vrep().vertices {
            if round.agents.iter().all(|&i| v[i] == u[i]) {
                continue;
            }
            if round.agents.iter().any(|&i| !v[i].is_positive()) {
                audit.skipped += 1;
                continue;
            }
            audit.products_compared += 1;
            if product(v) > reference {
                return Err(rejected(
                    label,
                    format!("vertex {} has a larger Nash product", crate::rational::format_vector(v)),
                ));
            }
        }
        earlier.extend(round.agents.iter().copied());
    }
    if earlier.len() != u.len() {
        return Err(rejected(plan.rounds.len(), "rounds do not cover every agent".into()));
    }
    Ok(audit)
}

/// `true` iff [`audit_bargaining`] accepts the plan with the default exponent cap.
pub fn verify_bargaining(p: &Arc<Polyhedron>, plan: &BargainingPlan) -> Result<bool> {
    match audit_bargaining(p, plan, DEFAULT_EXPONENT_CAP) {
        Ok(_) => Ok(true),
        Err(Error::Rejected { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}
