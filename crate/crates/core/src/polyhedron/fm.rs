//! Projection by Fourier–Motzkin elimination, with linear-programming
//! redundancy removal after every eliminated coordinate.

use num_traits::{Signed, Zero};

use super::{primitive_constraint, remove_redundant, Constraint, HRep};
use crate::rational::{is_zero, IndexSet, Rational};
use crate::{Error, Result};

/// Default bound on the number of rows produced by a single elimination step.
pub const DEFAULT_PROJECTION_CAP: usize = 20_000;

/// Image of `h` under the coordinate projection onto `keep` (in increasing
/// index order). The result is canonical and irredundant.
pub fn project_eliminate(h: &HRep, keep: &IndexSet) -> Result<HRep> {
    project_eliminate_with_cap(h, keep, DEFAULT_PROJECTION_CAP)
}

pub fn project_eliminate_with_cap(h: &HRep, keep: &IndexSet, cap: usize) -> Result<HRep> {
    h.validate()?;
    if keep.is_empty() {
        return Err(Error::Precondition(
            "projection must keep at least one coordinate".into(),
        ));
    }
    if let Some(&bad) = keep.iter().find(|&&i| i >= h.dim) {
        return Err(Error::IndexOutOfRange { index: bad, len: h.dim });
    }
    let out_dim = keep.len();
    let restrict = |c: &Constraint| Constraint::new(keep.iter().map(|&i| c.normal[i].clone()).collect(), c.rhs.clone());
    if h.is_marked_empty() {
        return Ok(HRep::empty(out_dim));
    }

    let mut eqs: Vec<Constraint> = h.eqs.clone();
    let mut ineqs: Vec<Constraint> = h.ineqs.clone();
    let mut remaining: Vec<usize> = (0..h.dim).filter(|i| !keep.contains(i)).collect();

    while !remaining.is_empty() {
        // Substitution through an equality is exact and never grows the system.
        let substitution = eqs.iter().enumerate().find_map(|(e, c)| {
            remaining
                .iter()
                .position(|&k| !c.normal[k].is_zero())
                .map(|pos| (e, pos))
        });
        if let Some((e, pos)) = substitution {
            let k = remaining.remove(pos);
            let pivot = eqs.remove(e);
            let eliminate = |c: &mut Constraint| {
                if c.normal[k].is_zero() {
                    return;
                }
                let f = &c.normal[k] / &pivot.normal[k];
                for (x, y) in c.normal.iter_mut().zip(&pivot.normal) {
                    *x -= &f * y;
                }
                c.rhs -= &f * &pivot.rhs;
            };
            eqs.iter_mut().for_each(eliminate);
            ineqs.iter_mut().for_each(eliminate);
        } else {
            let (pos, _) = remaining
                .iter()
                .enumerate()
                .map(|(pos, &k)| {
                    let p = ineqs.iter().filter(|c| c.normal[k].is_positive()).count();
                    let n = ineqs.iter().filter(|c| c.normal[k].is_negative()).count();
                    (pos, p * n)
                })
                .min_by_key(|&(pos, cost)| (cost, pos))
                .expect("remaining is nonempty");
            let k = remaining.remove(pos);
            let (mut next, rest): (Vec<Constraint>, Vec<Constraint>) =
                ineqs.into_iter().partition(|c| c.normal[k].is_zero());
            let (upper, lower): (Vec<Constraint>, Vec<Constraint>) =
                rest.into_iter().partition(|c| c.normal[k].is_positive());
            if upper.len() * lower.len() + next.len() > cap {
                return Err(Error::ResourceCap(format!(
                    "eliminating coordinate {k} would produce {} rows",
                    upper.len() * lower.len() + next.len()
                )));
            }
            for p in &upper {
                for n in &lower {
                    let a = -&n.normal[k];
                    let b = &p.normal[k];
                    let combo = Constraint::new(
                        p.normal.iter().zip(&n.normal).map(|(x, y)| &a * x + b * y).collect(),
                        &a * &p.rhs + b * &n.rhs,
                    );
                    next.push(combo);
                }
            }
            ineqs = next;
        }

        // Rows with a vanishing normal are either trivial or certify emptiness.
        let mut kept = Vec::with_capacity(ineqs.len());
        for c in ineqs {
            if is_zero(&c.normal) {
                if c.rhs.is_negative() {
                    return Ok(HRep::empty(out_dim));
                }
            } else {
                kept.push(primitive_constraint(&c));
            }
        }
        for c in &eqs {
            if is_zero(&c.normal) && !c.rhs.is_zero() {
                return Ok(HRep::empty(out_dim));
            }
        }
        eqs.retain(|c| !is_zero(&c.normal));
        kept.sort();
        kept.dedup_by(|later, earlier| later.normal == earlier.normal);
        ineqs = match remove_redundant(h.dim, &eqs, kept) {
            Some(rows) => rows,
            None => return Ok(HRep::empty(out_dim)),
        };
    }

    let projected = HRep {
        dim: out_dim,
        ineqs: ineqs.iter().map(restrict).collect(),
        eqs: eqs.iter().map(restrict).collect(),
    };
    projected.canonicalize_lp()
}

/// Block-diagonal system over the concatenated coordinates.
pub fn cartesian_product(parts: &[HRep]) -> Result<HRep> {
    if parts.is_empty() {
        return Err(Error::Precondition("cartesian product of no factors".into()));
    }
    let total: usize = parts.iter().map(|h| h.dim).sum();
    let mut out = HRep::new(total);
    let mut offset = 0;
    for h in parts {
        h.validate()?;
        let lift = |c: &Constraint| {
            let mut normal = vec![Rational::zero(); total];
            for (i, x) in c.normal.iter().enumerate() {
                normal[offset + i] = x.clone();
            }
            Constraint::new(normal, c.rhs.clone())
        };
        out.ineqs.extend(h.ineqs.iter().map(lift));
        out.eqs.extend(h.eqs.iter().map(lift));
        offset += h.dim;
    }
    Ok(out)
}

/// `{x + y | x ∈ p, y ∈ q}`.
pub fn minkowski_sum(p: &HRep, q: &HRep) -> Result<HRep> {
    minkowski_sum_all(&[p.clone(), q.clone()])
}

/// Sum of several polyhedra: the product followed by projection along the sum map.
pub fn minkowski_sum_all(parts: &[HRep]) -> Result<HRep> {
    let d = parts
        .first()
        .ok_or_else(|| Error::Precondition("Minkowski sum of no summands".into()))?
        .dim;
    if let Some(bad) = parts.iter().find(|h| h.dim != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.dim,
        });
    }
    let k = parts.len();
    let mut blocks = parts.to_vec();
    blocks.push(HRep::new(d));
    let mut lifted = cartesian_product(&blocks)?;
    // z - Σ x_i = 0 coordinatewise.
    for c in 0..d {
        let mut normal = vec![Rational::zero(); (k + 1) * d];
        for i in 0..k {
            normal[i * d + c] = -Rational::from_integer(1.into());
        }
        normal[k * d + c] = Rational::from_integer(1.into());
        lifted.eqs.push(Constraint::new(normal, Rational::zero()));
    }
    let keep: IndexSet = (k * d..(k + 1) * d).collect();
    project_eliminate(&lifted, &keep)
}
