//! Sequential utilitarian welfare certificates: replay and construction.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::{check_point, require_maximal};
use crate::io::{CertificateDoc, FaceDoc};
use crate::polyhedron::{exposed_subface, minimal_face_at, Exposure, Face, Polyhedron};
use crate::rational::{
    add, ceil, format_vector, is_nonneg, is_strictly_positive, is_zero, scale, support, zeros, IndexSet, Rational,
    Vector,
};
use crate::{Error, Result};

/// A tuple of normals together with the nested argmax faces it generates.
#[derive(Debug, Clone)]
pub struct Certificate {
    /// `φ^1, …, φ^T`.
    pub normals: Vec<Vector>,
    /// `U^1 ⊃ … ⊃ U^T`, faces of the utility set.
    pub faces: Vec<Face>,
    /// `β^t = max ⟨φ^t, ·⟩` over `U^{t-1}`.
    pub values: Vec<Rational>,
    /// `λ^2, …, λ^T` used during construction; empty for replayed tuples.
    pub lambdas: Vec<Rational>,
    /// Exposing normals `ψ^1, …, ψ^T` of the chain, when constructed.
    pub exposing: Vec<Vector>,
    /// `G^1 ⊃ … ⊃ G^T`, faces of the downward closure, when constructed.
    pub chain: Option<Vec<Face>>,
}

impl Certificate {
    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    /// `U^T`.
    pub fn terminal(&self) -> &Face {
        self.faces.last().expect("certificates have at least one step")
    }

    pub fn to_doc(&self) -> CertificateDoc {
        CertificateDoc {
            normals: self.normals.clone(),
            lambdas: self.lambdas.clone(),
            faces: self
                .faces
                .iter()
                .map(|f| FaceDoc {
                    active: f.active().iter().copied().collect(),
                    dim: Some(f.dim()),
                })
                .collect(),
            verified: true,
        }
    }
}

/// How the exposure chain of the downward closure is chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    /// One step: the minimal face is exposed directly.
    Direct,
    /// A maximal chain, one dimension at a time.
    Flag,
    /// Caller-supplied chain, given by active sets against the canonical
    /// inequalities of the downward closure, ending at the minimal face.
    GivenChain(Vec<IndexSet>),
}

enum Terminal {
    Positive,
    Partition,
}

/// Replays `Φ` on `p` and accepts iff every normal is nonnegative and
/// nonzero, there are at most `n` of them, the last is strictly positive, and
/// `u` survives every argmax step.
pub fn verify_certificate(p: &Arc<Polyhedron>, u: &[Rational], normals: &[Vector]) -> Result<Certificate> {
    replay(p, u, normals, Terminal::Positive)
}

/// Variant for partition certificates: the supports must be pairwise
/// disjoint and cover every coordinate instead of the last normal being
/// strictly positive.
pub fn verify_partition_certificate(p: &Arc<Polyhedron>, u: &[Rational], normals: &[Vector]) -> Result<Certificate> {
    replay(p, u, normals, Terminal::Partition)
}

fn reject(step: usize, reason: impl Into<String>) -> Error {
    Error::Rejected {
        step,
        reason: reason.into(),
    }
}

fn replay(p: &Arc<Polyhedron>, u: &[Rational], normals: &[Vector], rule: Terminal) -> Result<Certificate> {
    check_point(p, u)?;
    let n = p.dim();
    if normals.is_empty() {
        return Err(reject(0, "no normals given"));
    }
    if normals.len() > n {
        return Err(reject(normals.len(), format!("more than {n} normals")));
    }
    for (t, phi) in normals.iter().enumerate() {
        let step = t + 1;
        if phi.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: phi.len(),
            });
        }
        if let Some(i) = phi.iter().position(Signed::is_negative) {
            return Err(reject(step, format!("negative entry at coordinate {}", i + 1)));
        }
        if is_zero(phi) {
            return Err(reject(step, "zero normal"));
        }
    }
    match rule {
        Terminal::Positive => {
            if !is_strictly_positive(normals.last().expect("nonempty")) {
                return Err(reject(normals.len(), "last normal not strictly positive"));
            }
        }
        Terminal::Partition => {
            let mut covered = IndexSet::new();
            for (t, phi) in normals.iter().enumerate() {
                let s = support(phi);
                if !s.is_disjoint(&covered) {
                    return Err(reject(t + 1, "support overlaps an earlier step"));
                }
                covered.extend(s);
            }
            if covered.len() != n {
                return Err(reject(normals.len(), "supports do not cover every coordinate"));
            }
        }
    }

    let mut current = Face::whole(p)?;
    let mut faces = Vec::with_capacity(normals.len());
    let mut values = Vec::with_capacity(normals.len());
    for (t, phi) in normals.iter().enumerate() {
        let step = t + 1;
        match exposed_subface(&current, phi)? {
            Exposure::Unbounded { ray } => {
                return Err(reject(
                    step,
                    format!("unbounded subproblem along {}", format_vector(&ray)),
                ))
            }
            Exposure::Face { face, value } => {
                if !face.contains(u) {
                    return Err(reject(step, "u dropped"));
                }
                current = face.clone();
                faces.push(face);
                values.push(value);
            }
        }
    }
    Ok(Certificate {
        normals: normals.to_vec(),
        faces,
        values,
        lambdas: Vec::new(),
        exposing: Vec::new(),
        chain: None,
    })
}

/// Builds a certificate for a maximal `u`, computing the downward closure.
pub fn construct_certificate(p: &Arc<Polyhedron>, u: &[Rational], strategy: &Strategy) -> Result<Certificate> {
    check_point(p, u)?;
    require_maximal(p, u)?;
    let dc = p.downward_closure()?.into_arc();
    construct_certificate_in(p, &dc, u, strategy)
}

/// Builds a certificate given a precomputed downward closure `dc` of `p`.
///
/// The chain `dc = G^0 ⊋ G^1 ⊋ … ⊋ G^T = F` ends at the minimal face `F`
/// of `dc` at `u`; `ψ^t` is the sum of the inequality normals that become
/// active from `G^{t-1}` to `G^t`, and `φ^t = λ^t φ^{t-1} + ψ^t` with
/// `λ^t = 1 + max_{i ∈ supp φ^{t-1}} ⌈|ψ^t_i| / φ^{t-1}_i⌉`. The normals are
/// replayed on `p` and the terminal face must coincide with `F`.
pub fn construct_certificate_in(
    p: &Arc<Polyhedron>,
    dc: &Arc<Polyhedron>,
    u: &[Rational],
    strategy: &Strategy,
) -> Result<Certificate> {
    check_point(p, u)?;
    if dc.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: dc.dim(),
        });
    }
    require_maximal(p, u)?;
    let target = minimal_face_at(dc, u)?;
    let root = Face::whole(dc)?;
    if target == root {
        return Err(Error::NoMaximalPoints);
    }

    let chain = match strategy {
        Strategy::Direct => vec![target.clone()],
        Strategy::Flag => flag_chain(&root, &target)?,
        Strategy::GivenChain(sets) => given_chain(dc, &root, &target, sets)?,
    };

    let h = dc.hrep();
    let mut exposing = Vec::with_capacity(chain.len());
    let mut previous = &root;
    for (t, g) in chain.iter().enumerate() {
        let mut psi = zeros(h.dim);
        for &j in g.active().difference(previous.active()) {
            psi = add(&psi, &h.ineqs[j].normal);
        }
        let link_error = |reason: String| match strategy {
            Strategy::GivenChain(_) => Error::InvalidChain { link: t + 1, reason },
            _ => Error::Internal(format!("chain link {}: {reason}", t + 1)),
        };
        if is_zero(&psi) || !is_nonneg(&psi) {
            return Err(link_error(format!(
                "exposing normal {} is not semipositive",
                format_vector(&psi)
            )));
        }
        match exposed_subface(previous, &psi)? {
            Exposure::Face { face, .. } if face == *g => {}
            _ => return Err(link_error("face is not exposed by its newly active normals".into())),
        }
        exposing.push(psi);
        previous = g;
    }

    let mut normals: Vec<Vector> = Vec::with_capacity(chain.len());
    let mut lambdas = Vec::new();
    for psi in &exposing {
        let phi = match normals.last() {
            None => psi.clone(),
            Some(prev) => {
                let mut lambda = Rational::zero();
                for i in support(prev) {
                    let r = ceil(&(psi[i].abs() / &prev[i]));
                    if r > lambda {
                        lambda = r;
                    }
                }
                lambda += Rational::from_integer(1.into());
                let phi = add(&scale(&lambda, prev), psi);
                lambdas.push(lambda);
                phi
            }
        };
        normals.push(phi);
    }

    let mut cert = verify_certificate(p, u, &normals)
        .map_err(|e| Error::Internal(format!("constructed certificate failed replay: {e}")))?;
    if !cert.terminal().same_points(&target) {
        return Err(Error::Internal(
            "terminal face differs from the minimal face of the downward closure".into(),
        ));
    }
    cert.lambdas = lambdas;
    cert.exposing = exposing;
    cert.chain = Some(chain);
    Ok(cert)
}

/// Descends one dimension at a time, making the smallest-index admissible
/// constraint of the target tight at each step.
fn flag_chain(root: &Face, target: &Face) -> Result<Vec<Face>> {
    let parent = root.parent();
    let mut chain = Vec::new();
    let mut current = root.clone();
    while current != *target {
        let next = target
            .active()
            .difference(current.active())
            .find_map(|&j| {
                let mut seed = current.active().clone();
                seed.insert(j);
                Face::from_active(parent, &seed).filter(|f| f.dim() == current.dim() - 1)
            })
            .ok_or_else(|| Error::Internal("no facet of the current face contains the target".into()))?;
        chain.push(next.clone());
        current = next;
    }
    Ok(chain)
}

fn given_chain(dc: &Arc<Polyhedron>, root: &Face, target: &Face, sets: &[IndexSet]) -> Result<Vec<Face>> {
    if sets.is_empty() {
        return Err(Error::InvalidChain {
            link: 0,
            reason: "empty chain".into(),
        });
    }
    let m = dc.hrep().ineqs.len();
    let mut chain = Vec::with_capacity(sets.len());
    let mut previous = root.clone();
    for (t, set) in sets.iter().enumerate() {
        let link = t + 1;
        if let Some(&bad) = set.iter().find(|&&j| j >= m) {
            return Err(Error::InvalidChain {
                link,
                reason: format!("constraint index {bad} out of range ({m} inequalities)"),
            });
        }
        let face = Face::from_active(dc, set).ok_or_else(|| Error::InvalidChain {
            link,
            reason: "active set describes an empty face".into(),
        })?;
        if !face.is_subface_of(&previous) || face == previous {
            return Err(Error::InvalidChain {
                link,
                reason: "face is not a proper subface of its predecessor".into(),
            });
        }
        previous = face.clone();
        chain.push(face);
    }
    if previous != *target {
        return Err(Error::InvalidChain {
            link: sets.len(),
            reason: "chain does not end at the minimal face of the point".into(),
        });
    }
    Ok(chain)
}
