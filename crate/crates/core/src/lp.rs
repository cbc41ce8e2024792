//! Linear programs over polyhedra and normal cones.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::polyhedron::{exposed_face, Exposure, Face, HRep, NormalCone, Polyhedron};
use crate::rational::{is_zero, primitive, zeros, IndexSet, Rational, Vector};
use crate::simplex::{LinearProgram, Outcome};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct LpResult {
    pub status: LpStatus,
    /// Optimal value when `Optimal`.
    pub value: Option<Rational>,
    /// Optimal point when `Optimal`, improving recession ray when `Unbounded`.
    pub witness: Option<Vector>,
    /// Full argmax face when `Optimal`.
    pub argmax: Option<Face>,
}

impl LpResult {
    fn infeasible() -> Self {
        Self {
            status: LpStatus::Infeasible,
            value: None,
            witness: None,
            argmax: None,
        }
    }
}

/// `max ⟨φ, x⟩` over `p`, with the complete set of maximizers as a face.
pub fn maximize(p: &Arc<Polyhedron>, phi: &[Rational]) -> Result<LpResult> {
    if phi.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: phi.len(),
        });
    }
    if is_zero(phi) {
        return Err(Error::ZeroNormal);
    }
    if p.is_empty() {
        return Ok(LpResult::infeasible());
    }
    let lp = p.hrep().linear_program().maximize(phi.to_vec());
    match (lp.solve(), exposed_face(p, phi)?) {
        (Outcome::Optimal { x, value }, Exposure::Face { face, value: v }) if v == value => Ok(LpResult {
            status: LpStatus::Optimal,
            value: Some(value),
            witness: Some(x),
            argmax: Some(face),
        }),
        (Outcome::Unbounded { ray, .. }, Exposure::Unbounded { .. }) => Ok(LpResult {
            status: LpStatus::Unbounded,
            value: None,
            witness: Some(ray),
            argmax: None,
        }),
        _ => Err(Error::Internal("solver and generator scoring disagree".into())),
    }
}

/// `max ⟨φ, x⟩` over an inequality system, without computing the argmax face.
pub fn maximize_hrep(h: &HRep, phi: &[Rational]) -> Result<LpResult> {
    h.validate()?;
    if phi.len() != h.dim {
        return Err(Error::DimensionMismatch {
            expected: h.dim,
            found: phi.len(),
        });
    }
    Ok(match h.linear_program().maximize(phi.to_vec()).solve() {
        Outcome::Optimal { x, value } => LpResult {
            status: LpStatus::Optimal,
            value: Some(value),
            witness: Some(x),
            argmax: None,
        },
        Outcome::Unbounded { ray, .. } => LpResult {
            status: LpStatus::Unbounded,
            value: None,
            witness: Some(ray),
            argmax: None,
        },
        Outcome::Infeasible => LpResult::infeasible(),
    })
}

/// Some point of `h`, or `None` when it is empty.
pub fn feasible_point(h: &HRep) -> Result<Option<Vector>> {
    h.validate()?;
    Ok(match h.linear_program().solve() {
        Outcome::Optimal { x, .. } | Outcome::Unbounded { x, .. } => Some(x),
        Outcome::Infeasible => None,
    })
}

/// Variables `(μ, ν, φ)` with `φ = Σ μ_j g_j + Σ ν_k l_k`, `μ >= 0`, `ν` free.
struct ConeProgram {
    k: usize,
    l: usize,
    n: usize,
}

impl ConeProgram {
    fn new(c: &NormalCone) -> (Self, LinearProgram) {
        let (k, l, n) = (c.generators.len(), c.lineality.len(), c.dim);
        let mut lp = LinearProgram::new(k + l + n);
        for j in 0..k {
            lp.nonneg[j] = true;
        }
        for i in 0..n {
            let mut row = zeros(k + l + n);
            for (j, g) in c.generators.iter().chain(&c.lineality).enumerate() {
                row[j] = g[i].clone();
            }
            row[k + l + i] = -Rational::one();
            lp.eq.push((row, Rational::zero()));
        }
        (Self { k, l, n }, lp)
    }

    fn phi_index(&self, i: usize) -> usize {
        self.k + self.l + i
    }

    fn phi_of(&self, x: &[Rational]) -> Vector {
        x[self.k + self.l..].to_vec()
    }

    fn width(&self) -> usize {
        self.k + self.l + self.n
    }

    fn unit(&self, j: usize, coef: Rational) -> Vector {
        let mut v = zeros(self.width());
        v[j] = coef;
        v
    }
}

/// Minimizes `objective` and pins its optimal value as an equality.
fn minimize_and_fix(lp: &mut LinearProgram, objective: Vector) -> Option<Vector> {
    lp.objective = objective.iter().map(|x| -x).collect();
    match lp.solve() {
        Outcome::Optimal { x, value } => {
            lp.eq.push((objective, -value));
            Some(x)
        }
        _ => None,
    }
}

/// A vector `φ >> 0` of the cone, or `None` when the cone has none.
///
/// Decided by the feasibility of `φ_i >= 1` for every `i`. The returned
/// vector minimizes `Σ μ`, then `Σ φ`, then `φ_1, φ_2, …` in turn, and is
/// finally scaled to a primitive integer vector.
pub fn strictly_positive_in_cone(c: &NormalCone) -> Option<Vector> {
    let (cp, mut lp) = ConeProgram::new(c);
    for i in 0..cp.n {
        lp.le
            .push((cp.unit(cp.phi_index(i), -Rational::one()), -Rational::one()));
    }
    tie_break(&cp, &mut lp)
}

/// Minimizes `Σ μ`, then `Σ φ`, then each `φ_i` in turn; returns the
/// primitive integer multiple of the final `φ`.
fn tie_break(cp: &ConeProgram, lp: &mut LinearProgram) -> Option<Vector> {
    let mut sum_mu = zeros(cp.width());
    for x in sum_mu[..cp.k].iter_mut() {
        *x = Rational::one();
    }
    minimize_and_fix(lp, sum_mu)?;
    let mut sum_phi = zeros(cp.width());
    for i in 0..cp.n {
        sum_phi[cp.phi_index(i)] = Rational::one();
    }
    let mut x = minimize_and_fix(lp, sum_phi)?;
    for i in 0..cp.n {
        x = minimize_and_fix(lp, cp.unit(cp.phi_index(i), Rational::one()))?;
    }
    Some(primitive(&cp.phi_of(&x)))
}

/// A vector of the cone with `φ_i >= 1` on `positive` and `φ_i = 0`
/// elsewhere, lying in the relative interior of all such vectors: every
/// generator that can carry positive weight under the pattern gets weight
/// at least one. Ties are broken as in [`strictly_positive_in_cone`].
pub fn relative_interior_normal(c: &NormalCone, positive: &IndexSet) -> Option<Vector> {
    let pattern = |extra: &[usize]| {
        let (cp, mut lp) = ConeProgram::new(c);
        for i in 0..cp.n {
            let row = cp.unit(cp.phi_index(i), -Rational::one());
            if positive.contains(&i) {
                lp.le.push((row, -Rational::one()));
            } else {
                lp.eq.push((row, Rational::zero()));
            }
        }
        for &j in extra {
            lp.le.push((cp.unit(j, -Rational::one()), -Rational::one()));
        }
        (cp, lp)
    };
    let (_, lp) = pattern(&[]);
    if matches!(lp.solve(), Outcome::Infeasible) {
        return None;
    }
    let weighted: Vec<usize> = (0..c.generators.len())
        .filter(|&j| !matches!(pattern(&[j]).1.solve(), Outcome::Infeasible))
        .collect();
    let (cp, mut lp) = pattern(&weighted);
    for j in (0..cp.k).filter(|j| !weighted.contains(j)) {
        lp.eq.push((cp.unit(j, Rational::one()), Rational::zero()));
    }
    tie_break(&cp, &mut lp)
}

/// A nonzero vector `φ >= 0` of the cone (normalized so `Σ φ = 1` before
/// scaling to a primitive integer vector), or `None`.
pub fn nonnegative_in_cone(c: &NormalCone) -> Option<Vector> {
    let (cp, mut lp) = ConeProgram::new(c);
    let mut total = zeros(cp.width());
    for i in 0..cp.n {
        lp.nonneg[cp.phi_index(i)] = true;
        total[cp.phi_index(i)] = Rational::one();
    }
    lp.eq.push((total, Rational::one()));
    match lp.solve() {
        Outcome::Optimal { x, .. } => Some(primitive(&cp.phi_of(&x))),
        _ => None,
    }
}

/// Whether `φ` belongs to the cone.
pub fn cone_contains(c: &NormalCone, phi: &[Rational]) -> bool {
    if phi.len() != c.dim {
        return false;
    }
    let (cp, mut lp) = ConeProgram::new(c);
    for (i, x) in phi.iter().enumerate() {
        lp.eq.push((cp.unit(cp.phi_index(i), Rational::one()), x.clone()));
    }
    !matches!(lp.solve(), Outcome::Infeasible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{dot, int, ivec};

    fn u2() -> Arc<Polyhedron> {
        Polyhedron::from_points(2, vec![ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[1, 1]), ivec(&[0, 2])])
            .unwrap()
            .into_arc()
    }

    fn cone(gens: &[&[i64]], lin: &[&[i64]], dim: usize) -> NormalCone {
        NormalCone {
            dim,
            generators: gens.iter().map(|g| ivec(g)).collect(),
            lineality: lin.iter().map(|g| ivec(g)).collect(),
        }
    }

    #[test]
    fn maximize_reports_value_and_argmax() {
        let p = u2();
        let r = maximize(&p, &ivec(&[1, 0])).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.value, Some(int(1)));
        let face = r.argmax.unwrap();
        assert_eq!(face.vertices(), vec![&ivec(&[1, 0]), &ivec(&[1, 1])]);
        assert_eq!(dot(r.witness.as_ref().unwrap(), &ivec(&[1, 0])), int(1));

        let r = maximize(&p, &ivec(&[1, 1])).unwrap();
        assert_eq!(r.value, Some(int(2)));
        assert_eq!(r.argmax.unwrap().vertices(), vec![&ivec(&[0, 2]), &ivec(&[1, 1])]);
    }

    #[test]
    fn maximize_unbounded_over_downward_closure() {
        let d = u2().downward_closure().unwrap().into_arc();
        let r = maximize(&d, &ivec(&[1, -1])).unwrap();
        assert_eq!(r.status, LpStatus::Unbounded);
        let ray = r.witness.unwrap();
        assert!(dot(&ray, &ivec(&[1, -1])) > int(0));
        assert!(d.hrep().ineqs.iter().all(|c| dot(&c.normal, &ray) <= int(0)));
    }

    #[test]
    fn feasible_points() {
        let h = u2().hrep().clone();
        assert!(h.contains(&feasible_point(&h).unwrap().unwrap()));
        let bad = HRep::new(1)
            .with_ineq(ivec(&[1]), int(0))
            .with_ineq(ivec(&[-1]), int(-1));
        assert_eq!(feasible_point(&bad).unwrap(), None);
        let pt = HRep::new(1).with_eq(ivec(&[1]), int(1));
        assert_eq!(feasible_point(&pt).unwrap(), Some(ivec(&[1])));
    }

    #[test]
    fn strictly_positive_members() {
        // Σμ is minimized first: μ = (0, 1).
        assert_eq!(
            strictly_positive_in_cone(&cone(&[&[1, 0], &[1, 1]], &[], 2)),
            Some(ivec(&[1, 1]))
        );
        assert_eq!(strictly_positive_in_cone(&cone(&[&[1, 0]], &[], 2)), None);
        assert_eq!(
            strictly_positive_in_cone(&cone(&[&[1, 1, 0], &[0, 0, 1]], &[], 3)),
            Some(ivec(&[1, 1, 1]))
        );
        assert_eq!(strictly_positive_in_cone(&cone(&[], &[&[1, -1]], 2)), None);
        assert_eq!(
            strictly_positive_in_cone(&cone(&[], &[&[2, 1]], 2)),
            Some(ivec(&[2, 1]))
        );
        assert_eq!(
            strictly_positive_in_cone(&cone(&[&[1, 2], &[2, 1]], &[], 2)),
            Some(ivec(&[1, 1]))
        );
    }

    #[test]
    fn pattern_normals() {
        let c = cone(&[&[1, 0], &[1, 1]], &[], 2);
        assert_eq!(
            relative_interior_normal(&c, &IndexSet::from([0, 1])),
            Some(ivec(&[2, 1]))
        );
        assert_eq!(relative_interior_normal(&c, &IndexSet::from([0])), Some(ivec(&[1, 0])));
        assert_eq!(relative_interior_normal(&c, &IndexSet::from([1])), None);
        let edge = cone(&[&[1, 1]], &[&[1, 0]], 2);
        assert_eq!(
            relative_interior_normal(&edge, &IndexSet::from([1])),
            Some(ivec(&[0, 1]))
        );
    }

    #[test]
    fn nonnegative_members() {
        assert_eq!(nonnegative_in_cone(&cone(&[&[-1, 0], &[0, -1]], &[], 2)), None);
        assert_eq!(nonnegative_in_cone(&cone(&[&[1, 0]], &[], 2)), Some(ivec(&[1, 0])));
        assert_eq!(
            nonnegative_in_cone(&cone(&[&[1, -1]], &[&[0, 1]], 2)),
            Some(ivec(&[1, 0]))
        );
        assert_eq!(nonnegative_in_cone(&NormalCone::trivial(2)), None);
    }

    #[test]
    fn membership() {
        let c = cone(&[&[1, 0], &[1, 1]], &[], 2);
        assert!(cone_contains(&c, &ivec(&[3, 1])));
        assert!(cone_contains(&c, &ivec(&[0, 0])));
        assert!(!cone_contains(&c, &ivec(&[0, 1])));
    }
}
