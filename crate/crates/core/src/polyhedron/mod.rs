//! Convex polyhedra in inequality (H) and generator (V) form.
//!
//! A [`Polyhedron`] always carries both representations in canonical form:
//!
//! * equalities span the affine hull and are in reduced row echelon form,
//!   scaled to primitive integer normals with a positive leading entry;
//! * inequalities are exactly the facets, reduced modulo the equalities,
//!   scaled to primitive integer normals (positive scaling only) and sorted;
//! * vertices and rays are sorted, rays primitive; lines appear as a pair of
//!   opposite rays.
//!
//! Two polyhedra are equal as point sets iff their canonical H-representations
//! are equal.

mod dd;
mod face;
mod fm;

pub use face::{
    enumerate_faces, exposed_face, exposed_subface, minimal_face_at, normal_cone_at, Exposure, Face, NormalCone,
    DEFAULT_FACE_CAP,
};
pub use fm::{cartesian_product, minkowski_sum, minkowski_sum_all, project_eliminate, DEFAULT_PROJECTION_CAP};

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::io::serde_rational;
use crate::rational::{
    dot, is_zero, nullspace, primitive, primitive_scale, project_out, rank, rref, zeros, IndexSet, Rational, Vector,
};
use crate::simplex::{LinearProgram, Outcome};
use crate::{Error, Result};

/// `normal · x <= rhs` (or `=` when stored among equalities).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Constraint {
    #[serde(rename = "a", with = "serde_rational::vec")]
    pub normal: Vector,
    #[serde(rename = "b", with = "serde_rational::scalar")]
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(normal: Vector, rhs: Rational) -> Self {
        Self { normal, rhs }
    }

    /// `normal · x >= rhs`, stored as `-normal · x <= -rhs`.
    pub fn ge(normal: Vector, rhs: Rational) -> Self {
        Self {
            normal: normal.iter().map(|x| -x).collect(),
            rhs: -rhs,
        }
    }

    pub fn slack(&self, x: &[Rational]) -> Rational {
        &self.rhs - dot(&self.normal, x)
    }

    fn scaled(&self, s: &Rational) -> Self {
        Self {
            normal: self.normal.iter().map(|x| x * s).collect(),
            rhs: &self.rhs * s,
        }
    }
}

/// Inequality description `{x | A x <= b, E x = f}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HRep {
    pub dim: usize,
    pub ineqs: Vec<Constraint>,
    #[serde(default)]
    pub eqs: Vec<Constraint>,
}

/// Generator description `conv(vertices) + cone(rays)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VRep {
    pub dim: usize,
    #[serde(with = "serde_rational::mat")]
    pub vertices: Vec<Vector>,
    #[serde(default, with = "serde_rational::mat")]
    pub rays: Vec<Vector>,
}

impl HRep {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            ineqs: Vec::new(),
            eqs: Vec::new(),
        }
    }

    /// Canonical empty set: the single row `0 · x <= -1`.
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            ineqs: vec![Constraint::new(zeros(dim), -Rational::one())],
            eqs: Vec::new(),
        }
    }

    pub fn is_marked_empty(&self) -> bool {
        self.ineqs.iter().any(|c| is_zero(&c.normal) && c.rhs.is_negative())
            || self.eqs.iter().any(|c| is_zero(&c.normal) && !c.rhs.is_zero())
    }

    pub fn with_ineq(mut self, normal: Vector, rhs: Rational) -> Self {
        self.ineqs.push(Constraint::new(normal, rhs));
        self
    }

    pub fn with_eq(mut self, normal: Vector, rhs: Rational) -> Self {
        self.eqs.push(Constraint::new(normal, rhs));
        self
    }

    pub fn validate(&self) -> Result<()> {
        for c in self.ineqs.iter().chain(&self.eqs) {
            if c.normal.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: c.normal.len(),
                });
            }
        }
        if self.dim == 0 {
            return Err(Error::Parse("polyhedron dimension must be positive".into()));
        }
        Ok(())
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim
            && self.ineqs.iter().all(|c| !c.slack(x).is_negative())
            && self.eqs.iter().all(|c| c.slack(x).is_zero())
    }

    /// Image under `x -> -x`.
    pub fn negated(&self) -> Self {
        let flip = |c: &Constraint| Constraint::new(c.normal.iter().map(|x| -x).collect(), c.rhs.clone());
        Self {
            dim: self.dim,
            ineqs: self.ineqs.iter().map(flip).collect(),
            eqs: self.eqs.iter().map(flip).collect(),
        }
    }

    /// Intersection with another system in the same space.
    pub fn intersect(&self, other: &HRep) -> Result<HRep> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut out = self.clone();
        out.ineqs.extend(other.ineqs.iter().cloned());
        out.eqs.extend(other.eqs.iter().cloned());
        Ok(out)
    }

    pub(crate) fn linear_program(&self) -> LinearProgram {
        let mut lp = LinearProgram::new(self.dim);
        lp.le = self.ineqs.iter().map(|c| (c.normal.clone(), c.rhs.clone())).collect();
        lp.eq = self.eqs.iter().map(|c| (c.normal.clone(), c.rhs.clone())).collect();
        lp
    }

    /// Irredundant canonical form computed with linear programs only
    /// (implicit equality detection followed by per-row redundancy tests).
    pub fn canonicalize_lp(&self) -> Result<HRep> {
        self.validate()?;
        if self.is_marked_empty() {
            return Ok(HRep::empty(self.dim));
        }
        if matches!(self.linear_program().solve(), Outcome::Infeasible) {
            return Ok(HRep::empty(self.dim));
        }
        let mut eqs = self.eqs.clone();
        let mut ineqs = Vec::new();
        for (j, c) in self.ineqs.iter().enumerate() {
            if is_zero(&c.normal) {
                continue;
            }
            let mut lp = self.linear_program();
            lp.objective = c.normal.iter().map(|x| -x).collect();
            // Tight everywhere iff min a·x == b.
            let implicit = match lp.solve() {
                Outcome::Optimal { value, .. } => -value == c.rhs,
                _ => false,
            };
            if implicit {
                eqs.push(c.clone());
            } else {
                ineqs.push((j, c.clone()));
            }
        }
        let eqs = reduce_equalities(&eqs, self.dim)
            .ok_or_else(|| Error::Internal("feasible system with inconsistent equalities".into()))?;
        let mut rows: Vec<Constraint> = ineqs
            .into_iter()
            .map(|(_, c)| primitive_constraint(&reduce_modulo(&c, &eqs)))
            .filter(|c| !is_zero(&c.normal))
            .collect();
        rows.sort();
        rows.dedup_by(|later, earlier| later.normal == earlier.normal);
        let kept = remove_redundant(self.dim, &eqs, rows)
            .ok_or_else(|| Error::Internal("feasible system became infeasible".into()))?;
        Ok(finalize(self.dim, eqs, kept))
    }
}

impl VRep {
    pub fn new(dim: usize, vertices: Vec<Vector>, rays: Vec<Vector>) -> Self {
        Self { dim, vertices, rays }
    }

    pub fn empty(dim: usize) -> Self {
        Self::new(dim, Vec::new(), Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        for v in self.vertices.iter().chain(&self.rays) {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: v.len(),
                });
            }
        }
        if self.rays.iter().any(|r| is_zero(r)) {
            return Err(Error::Parse("rays must be nonzero".into()));
        }
        if self.dim == 0 {
            return Err(Error::Parse("polyhedron dimension must be positive".into()));
        }
        Ok(())
    }
}

/// Reduces `[E | f]` to reduced row echelon form with primitive integer rows.
/// Returns `None` when the equalities are inconsistent.
fn reduce_equalities(eqs: &[Constraint], dim: usize) -> Option<Vec<Constraint>> {
    let rows: Vec<Vector> = eqs
        .iter()
        .map(|c| {
            let mut r = c.normal.clone();
            r.push(c.rhs.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&rows, dim + 1);
    if pivots.last() == Some(&dim) {
        return None;
    }
    Some(
        r.into_iter()
            .map(|row| {
                let c = Constraint::new(row[..dim].to_vec(), row[dim].clone());
                primitive_constraint(&c)
            })
            .collect(),
    )
}

fn pivot_of(c: &Constraint) -> usize {
    c.normal.iter().position(|x| !x.is_zero()).expect("nonzero equality")
}

/// Eliminates the pivot columns of the (echelon) equalities from `c`.
fn reduce_modulo(c: &Constraint, eqs: &[Constraint]) -> Constraint {
    let mut out = c.clone();
    for e in eqs {
        let p = pivot_of(e);
        if out.normal[p].is_zero() {
            continue;
        }
        let f = &out.normal[p] / &e.normal[p];
        for (x, y) in out.normal.iter_mut().zip(&e.normal) {
            *x -= &f * y;
        }
        out.rhs -= &f * &e.rhs;
    }
    out
}

fn primitive_constraint(c: &Constraint) -> Constraint {
    if is_zero(&c.normal) {
        return c.clone();
    }
    c.scaled(&primitive_scale(&c.normal))
}

/// Sequentially drops rows implied by the remaining system. `None` if infeasible.
fn remove_redundant(dim: usize, eqs: &[Constraint], rows: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut kept = rows;
    let mut j = 0;
    while j < kept.len() {
        let mut lp = LinearProgram::new(dim).maximize(kept[j].normal.clone());
        lp.eq = eqs.iter().map(|c| (c.normal.clone(), c.rhs.clone())).collect();
        lp.le = kept
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, c)| (c.normal.clone(), c.rhs.clone()))
            .collect();
        match lp.solve() {
            Outcome::Infeasible => return None,
            Outcome::Optimal { value, .. } if value <= kept[j].rhs => {
                kept.remove(j);
            }
            _ => j += 1,
        }
    }
    Some(kept)
}

fn finalize(dim: usize, eqs: Vec<Constraint>, mut ineqs: Vec<Constraint>) -> HRep {
    ineqs.sort();
    HRep { dim, ineqs, eqs }
}

/// Facet description of `conv(vertices) + cone(rays)`; irredundant and canonical.
pub fn hrep_from_vrep(v: &VRep) -> Result<HRep> {
    v.validate()?;
    let d = v.dim;
    if v.is_empty() {
        return Ok(HRep::empty(d));
    }
    // (a, b) with a·v <= b for every vertex and a·r <= 0 for every ray.
    let mut rows = Vec::with_capacity(v.vertices.len() + v.rays.len());
    for p in &v.vertices {
        let mut row: Vector = p.iter().map(|x| -x).collect();
        row.push(Rational::one());
        rows.push(row);
    }
    for r in &v.rays {
        let mut row: Vector = r.iter().map(|x| -x).collect();
        row.push(Rational::zero());
        rows.push(row);
    }
    let gens = dd::cone_generators(&rows, &[], d + 1);

    let eqs: Vec<Constraint> = gens
        .lineality
        .iter()
        .map(|l| Constraint::new(l[..d].to_vec(), l[d].clone()))
        .collect();
    let eqs = reduce_equalities(&eqs, d).ok_or_else(|| Error::Internal("inconsistent hull equalities".into()))?;

    let mut unit = zeros(d + 1);
    unit[d] = Rational::one();
    let trivial = primitive(&project_out(&unit, &gens.lineality));

    let mut ineqs: Vec<Constraint> = gens
        .rays
        .iter()
        .filter(|r| primitive(r) != trivial)
        .map(|r| {
            let c = Constraint::new(r[..d].to_vec(), r[d].clone());
            primitive_constraint(&reduce_modulo(&c, &eqs))
        })
        .filter(|c| !is_zero(&c.normal))
        .collect();
    ineqs.sort();
    ineqs.dedup();
    Ok(finalize(d, eqs, ineqs))
}

/// Vertices and rays of `{x | A x <= b, E x = f}`; empty input gives an empty VRep.
pub fn vrep_from_hrep(h: &HRep) -> Result<VRep> {
    h.validate()?;
    let d = h.dim;
    if h.is_marked_empty() {
        return Ok(VRep::empty(d));
    }
    // Homogenize over (x, t): b t - a x >= 0, t >= 0, f t - e x = 0.
    let mut ineqs: Vec<Vector> = h
        .ineqs
        .iter()
        .filter(|c| !is_zero(&c.normal))
        .map(|c| {
            let mut row: Vector = c.normal.iter().map(|x| -x).collect();
            row.push(c.rhs.clone());
            row
        })
        .collect();
    let mut t = zeros(d + 1);
    t[d] = Rational::one();
    ineqs.push(t);
    let eqs: Vec<Vector> = h
        .eqs
        .iter()
        .map(|c| {
            let mut row: Vector = c.normal.iter().map(|x| -x).collect();
            row.push(c.rhs.clone());
            row
        })
        .collect();
    let gens = dd::cone_generators(&ineqs, &eqs, d + 1);

    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for r in &gens.rays {
        if r[d].is_positive() {
            let inv = r[d].recip();
            vertices.push(r[..d].iter().map(|x| x * &inv).collect::<Vector>());
        } else {
            rays.push(primitive(&r[..d]));
        }
    }
    if vertices.is_empty() {
        return Ok(VRep::empty(d));
    }
    for l in &gens.lineality {
        let l = primitive(&l[..d]);
        rays.push(l.iter().map(|x| -x).collect());
        rays.push(l);
    }
    vertices.sort();
    vertices.dedup();
    rays.sort();
    rays.dedup();
    Ok(VRep::new(d, vertices, rays))
}

/// A polyhedron with both canonical representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyhedron {
    hrep: HRep,
    vrep: VRep,
    /// Tight inequality indices per vertex.
    vertex_incidence: Vec<IndexSet>,
    /// Inequality indices with `a · r = 0` per ray.
    ray_incidence: Vec<IndexSet>,
}

impl Polyhedron {
    pub fn from_hrep(h: &HRep) -> Result<Self> {
        let vrep = vrep_from_hrep(h)?;
        let hrep = hrep_from_vrep(&vrep)?;
        Ok(Self::assemble(hrep, vrep))
    }

    pub fn from_vrep(v: &VRep) -> Result<Self> {
        let hrep = hrep_from_vrep(v)?;
        let vrep = vrep_from_hrep(&hrep)?;
        Ok(Self::assemble(hrep, vrep))
    }

    fn assemble(hrep: HRep, vrep: VRep) -> Self {
        let vertex_incidence = vrep
            .vertices
            .iter()
            .map(|v| {
                (0..hrep.ineqs.len())
                    .filter(|&j| hrep.ineqs[j].slack(v).is_zero())
                    .collect()
            })
            .collect();
        let ray_incidence = vrep
            .rays
            .iter()
            .map(|r| {
                (0..hrep.ineqs.len())
                    .filter(|&j| dot(&hrep.ineqs[j].normal, r).is_zero())
                    .collect()
            })
            .collect();
        Self {
            hrep,
            vrep,
            vertex_incidence,
            ray_incidence,
        }
    }

    pub(crate) fn vertex_incidence(&self) -> &[IndexSet] {
        &self.vertex_incidence
    }

    pub(crate) fn ray_incidence(&self) -> &[IndexSet] {
        &self.ray_incidence
    }

    /// Convex hull of finitely many points.
    pub fn from_points(dim: usize, points: Vec<Vector>) -> Result<Self> {
        Self::from_vrep(&VRep::new(dim, points, Vec::new()))
    }

    pub fn into_arc(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn hrep(&self) -> &HRep {
        &self.hrep
    }

    pub fn vrep(&self) -> &VRep {
        &self.vrep
    }

    pub fn dim(&self) -> usize {
        self.hrep.dim
    }

    pub fn is_empty(&self) -> bool {
        self.vrep.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.vrep.rays.is_empty()
    }

    /// Dimension of the affine hull, `-1` when empty.
    pub fn affine_dim(&self) -> isize {
        if self.is_empty() {
            return -1;
        }
        let normals: Vec<Vector> = self.hrep.eqs.iter().map(|c| c.normal.clone()).collect();
        (self.dim() - rank(&normals, self.dim())) as isize
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.hrep.contains(x)
    }

    /// `dc(P) = P - R^n_+`, via the generator route.
    pub fn downward_closure(&self) -> Result<Self> {
        Self::from_vrep(&downward_closure_vrep(&self.vrep))
    }

    /// Image under `x -> -x`.
    pub fn negated(&self) -> Result<Self> {
        Self::from_hrep(&self.hrep.negated())
    }

    /// Lineality space basis (directions `l` with `±l` both recession directions).
    pub fn lineality(&self) -> Vec<Vector> {
        let normals: Vec<Vector> = self
            .hrep
            .ineqs
            .iter()
            .chain(&self.hrep.eqs)
            .map(|c| c.normal.clone())
            .collect();
        nullspace(&normals, self.dim())
    }

    /// Indices of the inequalities tight at `x`.
    pub fn tight_at(&self, x: &[Rational]) -> IndexSet {
        self.hrep
            .ineqs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.slack(x).is_zero())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Appends the rays `-e_i` for every coordinate.
pub fn downward_closure_vrep(v: &VRep) -> VRep {
    let mut out = v.clone();
    if out.is_empty() {
        return out;
    }
    for i in 0..v.dim {
        let mut r = zeros(v.dim);
        r[i] = -Rational::one();
        out.rays.push(r);
    }
    out
}

/// Downward closure of an inequality system (convert, add rays, convert back).
pub fn downward_closure_hrep(h: &HRep) -> Result<HRep> {
    let v = vrep_from_hrep(h)?;
    hrep_from_vrep(&downward_closure_vrep(&v))
}
