//! Faces identified by active sets of a canonical inequality system.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::{Constraint, HRep, Polyhedron};
use crate::rational::{dot, format_vector, is_zero, rank, IndexSet, Rational, Vector};
use crate::simplex::Outcome;
use crate::{Error, Result};

/// Default bound on the number of faces [`enumerate_faces`] will visit.
pub const DEFAULT_FACE_CAP: usize = 100_000;

/// Nonempty face `parent ∩ {a_j x = b_j, j ∈ active}` with a maximal active set.
#[derive(Debug, Clone)]
pub struct Face {
    parent: Arc<Polyhedron>,
    active: IndexSet,
    dim: isize,
}

impl PartialEq for Face {
    fn eq(&self, other: &Self) -> bool {
        self.active == other.active && (Arc::ptr_eq(&self.parent, &other.parent) || self.parent == other.parent)
    }
}

impl Eq for Face {}

impl Face {
    /// The improper face (the polyhedron itself).
    pub fn whole(parent: &Arc<Polyhedron>) -> Result<Self> {
        Self::from_active(parent, &IndexSet::new()).ok_or(Error::Empty)
    }

    /// Face cut out by making `seed` tight, closed up to its maximal active
    /// set. `None` when that face is empty.
    pub fn from_active(parent: &Arc<Polyhedron>, seed: &IndexSet) -> Option<Self> {
        let verts: Vec<usize> = parent
            .vertex_incidence()
            .iter()
            .enumerate()
            .filter(|(_, tight)| seed.is_subset(tight))
            .map(|(i, _)| i)
            .collect();
        if verts.is_empty() {
            return None;
        }
        let rays: Vec<usize> = parent
            .ray_incidence()
            .iter()
            .enumerate()
            .filter(|(_, tight)| seed.is_subset(tight))
            .map(|(i, _)| i)
            .collect();
        let mut active: IndexSet = parent.vertex_incidence()[verts[0]].clone();
        for &v in &verts[1..] {
            active = active.intersection(&parent.vertex_incidence()[v]).copied().collect();
        }
        for &r in &rays {
            active = active.intersection(&parent.ray_incidence()[r]).copied().collect();
        }
        let h = parent.hrep();
        let normals: Vec<Vector> = h
            .eqs
            .iter()
            .map(|c| c.normal.clone())
            .chain(active.iter().map(|&j| h.ineqs[j].normal.clone()))
            .collect();
        let dim = (h.dim - rank(&normals, h.dim)) as isize;
        Some(Self {
            parent: Arc::clone(parent),
            active,
            dim,
        })
    }

    pub fn parent(&self) -> &Arc<Polyhedron> {
        &self.parent
    }

    pub fn active(&self) -> &IndexSet {
        &self.active
    }

    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn is_whole(&self) -> bool {
        self.dim == self.parent.affine_dim()
    }

    pub fn vertices(&self) -> Vec<&Vector> {
        let p = &self.parent;
        p.vrep()
            .vertices
            .iter()
            .zip(p.vertex_incidence())
            .filter(|(_, tight)| self.active.is_subset(tight))
            .map(|(v, _)| v)
            .collect()
    }

    pub fn rays(&self) -> Vec<&Vector> {
        let p = &self.parent;
        p.vrep()
            .rays
            .iter()
            .zip(p.ray_incidence())
            .filter(|(_, tight)| self.active.is_subset(tight))
            .map(|(r, _)| r)
            .collect()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays().is_empty()
    }

    /// The face as a standalone system: active rows become equalities.
    pub fn hrep(&self) -> HRep {
        let h = self.parent.hrep();
        let mut out = HRep::new(h.dim);
        out.eqs = h.eqs.clone();
        for (j, c) in h.ineqs.iter().enumerate() {
            if self.active.contains(&j) {
                out.eqs.push(c.clone());
            } else {
                out.ineqs.push(c.clone());
            }
        }
        out
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.parent.contains(x)
            && self
                .active
                .iter()
                .all(|&j| self.parent.hrep().ineqs[j].slack(x).is_zero())
    }

    /// `x` lies in the face and in no proper subface.
    pub fn contains_in_relative_interior(&self, x: &[Rational]) -> bool {
        self.parent.contains(x) && self.parent.tight_at(x) == self.active
    }

    /// Inclusion as faces of the same parent.
    pub fn is_subface_of(&self, other: &Face) -> bool {
        self.active.is_superset(&other.active)
    }

    /// Equality as point sets, also across different parents.
    pub fn same_points(&self, other: &Face) -> bool {
        self.dim == other.dim && self.within(other) && other.within(self)
    }

    fn within(&self, other: &Face) -> bool {
        self.vertices().into_iter().all(|v| other.contains(v))
            && self.rays().into_iter().all(|r| other.is_recession_direction(r))
    }

    /// `r` is a recession direction of the face.
    pub fn is_recession_direction(&self, r: &[Rational]) -> bool {
        let h = self.parent.hrep();
        h.eqs.iter().all(|c| dot(&c.normal, r).is_zero())
            && h.ineqs.iter().enumerate().all(|(j, c)| {
                let s = dot(&c.normal, r);
                if self.active.contains(&j) {
                    s.is_zero()
                } else {
                    !s.is_positive()
                }
            })
    }

    pub fn active_constraints(&self) -> Vec<&Constraint> {
        self.active.iter().map(|&j| &self.parent.hrep().ineqs[j]).collect()
    }
}

/// `{ Σ μ_j g_j + Σ ν_k l_k | μ >= 0 }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalCone {
    pub dim: usize,
    pub generators: Vec<Vector>,
    pub lineality: Vec<Vector>,
}

impl NormalCone {
    /// `{0}` in dimension `dim`.
    pub fn trivial(dim: usize) -> Self {
        Self {
            dim,
            generators: Vec::new(),
            lineality: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().chain(&self.lineality).all(|g| is_zero(g))
    }
}

/// Unique face containing `u` in its relative interior.
pub fn minimal_face_at(parent: &Arc<Polyhedron>, u: &[Rational]) -> Result<Face> {
    if u.len() != parent.dim() {
        return Err(Error::DimensionMismatch {
            expected: parent.dim(),
            found: u.len(),
        });
    }
    if !parent.contains(u) {
        return Err(Error::NotInSet(format_vector(u)));
    }
    let tight = parent.tight_at(u);
    let face = Face::from_active(parent, &tight)
        .ok_or_else(|| Error::Internal("face through a member point is empty".into()))?;
    debug_assert_eq!(face.active, tight);
    Ok(face)
}

/// Result of maximizing a linear functional over a face.
#[derive(Debug, Clone)]
pub enum Exposure {
    Face {
        face: Face,
        value: Rational,
    },
    /// The supremum is `+∞`; `ray` is a recession direction with positive objective.
    Unbounded {
        ray: Vector,
    },
}

impl Exposure {
    pub fn face(&self) -> Option<&Face> {
        match self {
            Exposure::Face { face, .. } => Some(face),
            Exposure::Unbounded { .. } => None,
        }
    }
}

/// `argmax_{x ∈ P} ⟨φ, x⟩` as a face of `P`.
pub fn exposed_face(parent: &Arc<Polyhedron>, phi: &[Rational]) -> Result<Exposure> {
    exposed_subface(&Face::whole(parent)?, phi)
}

/// `argmax_{x ∈ F} ⟨φ, x⟩` for a face `F`, returned as a face of the same parent.
///
/// The optimal value comes from the simplex solver over the face's own
/// inequality system; the argmax face is the set of generators attaining it.
pub fn exposed_subface(face: &Face, phi: &[Rational]) -> Result<Exposure> {
    let parent = face.parent();
    if phi.len() != parent.dim() {
        return Err(Error::DimensionMismatch {
            expected: parent.dim(),
            found: phi.len(),
        });
    }
    if is_zero(phi) {
        return Err(Error::ZeroNormal);
    }
    let lp = face.hrep().linear_program().maximize(phi.to_vec());
    let value = match lp.solve() {
        Outcome::Infeasible => return Err(Error::Internal("nonempty face reported infeasible".into())),
        Outcome::Unbounded { ray, .. } => return Ok(Exposure::Unbounded { ray }),
        Outcome::Optimal { value, .. } => value,
    };
    if let Some(r) = face.rays().into_iter().find(|r| dot(phi, r).is_positive()) {
        return Err(Error::Internal(format!(
            "solver bounded but ray {} improves the objective",
            format_vector(r)
        )));
    }

    let p = parent;
    let mut seed: Option<IndexSet> = None;
    for (v, tight) in p.vrep().vertices.iter().zip(p.vertex_incidence()) {
        if face.active.is_subset(tight) && dot(phi, v) == value {
            seed = Some(match seed {
                None => tight.clone(),
                Some(s) => s.intersection(tight).copied().collect(),
            });
        }
    }
    let mut active = seed.ok_or_else(|| Error::Internal("optimal value attained at no vertex".into()))?;
    for (r, tight) in p.vrep().rays.iter().zip(p.ray_incidence()) {
        if face.active.is_subset(tight) && dot(phi, r).is_zero() {
            active = active.intersection(tight).copied().collect();
        }
    }
    let face = Face::from_active(parent, &active).ok_or_else(|| Error::Internal("argmax face is empty".into()))?;
    Ok(Exposure::Face { face, value })
}

/// Normals of the active inequalities (generators) and of the equalities (lineality).
pub fn normal_cone_at(face: &Face) -> NormalCone {
    let h = face.parent().hrep();
    NormalCone {
        dim: h.dim,
        generators: face.active.iter().map(|&j| h.ineqs[j].normal.clone()).collect(),
        lineality: h.eqs.iter().map(|c| c.normal.clone()).collect(),
    }
}

/// Every nonempty face of dimension `<= max_dim` (all faces when `None`),
/// each exactly once, ordered by decreasing dimension then active set.
pub fn enumerate_faces(parent: &Arc<Polyhedron>, max_dim: Option<isize>, cap: usize) -> Result<Vec<Face>> {
    if parent.is_empty() {
        return Ok(Vec::new());
    }
    let n_ineqs = parent.hrep().ineqs.len();
    let root = Face::whole(parent)?;
    let mut seen: BTreeSet<IndexSet> = BTreeSet::from([root.active.clone()]);
    let mut queue = VecDeque::from([root]);
    let mut out = Vec::new();
    while let Some(f) = queue.pop_front() {
        for j in 0..n_ineqs {
            if f.active.contains(&j) {
                continue;
            }
            let mut seed = f.active.clone();
            seed.insert(j);
            let Some(g) = Face::from_active(parent, &seed) else {
                continue;
            };
            if seen.insert(g.active.clone()) {
                if seen.len() > cap {
                    return Err(Error::ResourceCap(format!("more than {cap} faces")));
                }
                queue.push_back(g);
            }
        }
        if max_dim.is_none_or(|m| f.dim <= m) {
            out.push(f);
        }
    }
    out.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.active.cmp(&b.active)));
    Ok(out)
}
