//! Search for certificates whose normals have pairwise disjoint supports
//! covering every coordinate.

use std::sync::Arc;

use super::certificate::{verify_partition_certificate, Certificate};
use super::check_point;
use crate::lp::relative_interior_normal;
use crate::polyhedron::{exposed_subface, Exposure, Face, NormalCone, Polyhedron};
use crate::rational::{IndexSet, Rational, Vector};
use crate::{Error, Result};

/// Default bound on the number of pattern steps examined by one search.
pub const DEFAULT_PATTERN_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionOptions {
    /// Largest number of blocks tried.
    pub bound_t: usize,
    /// Largest number of pattern steps examined before giving up.
    pub cap: usize,
}

impl PartitionOptions {
    pub fn new(bound_t: usize) -> Self {
        Self {
            bound_t,
            cap: DEFAULT_PATTERN_CAP,
        }
    }
}

/// Result of realizing one ordered partition.
#[derive(Debug, Clone)]
pub enum PatternOutcome {
    Realized(Certificate),
    /// No normal supported exactly on block `step` (1-based) is maximized at `u`.
    Blocked {
        step: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibilityReport {
    /// Number of pattern steps examined.
    pub explored: usize,
    /// Block prefixes at which no admissible normal exists.
    pub dead_ends: Vec<Vec<IndexSet>>,
}

#[derive(Debug, Clone)]
pub enum PartitionSearch {
    Found(Certificate),
    Infeasible(InfeasibilityReport),
}

/// Normal cone at `u` of the face `current`: the inequalities tight at `u`
/// outside the face's active set generate it, while the equalities and the
/// active normals span its lineality.
fn cone_at(current: &Face, tight: &IndexSet) -> NormalCone {
    let h = current.parent().hrep();
    NormalCone {
        dim: h.dim,
        generators: tight
            .difference(current.active())
            .map(|&j| h.ineqs[j].normal.clone())
            .collect(),
        lineality: h
            .eqs
            .iter()
            .map(|c| c.normal.clone())
            .chain(current.active().iter().map(|&j| h.ineqs[j].normal.clone()))
            .collect(),
    }
}

/// One step: a normal supported exactly on `block`, maximized at `u` over
/// `current`, chosen in the relative interior of all such normals so the
/// exposed face is as small as possible.
fn advance(current: &Face, tight: &IndexSet, block: &IndexSet) -> Result<Option<(Vector, Face)>> {
    let Some(phi) = relative_interior_normal(&cone_at(current, tight), block) else {
        return Ok(None);
    };
    match exposed_subface(current, &phi)? {
        Exposure::Face { face, .. } => Ok(Some((phi, face))),
        Exposure::Unbounded { .. } => Err(Error::Internal("normal-cone element is unbounded".into())),
    }
}

fn validate_blocks(n: usize, blocks: &[IndexSet]) -> Result<()> {
    let mut seen = IndexSet::new();
    for b in blocks {
        if b.is_empty() {
            return Err(Error::Precondition("empty block in pattern".into()));
        }
        if let Some(&i) = b.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        if !b.is_disjoint(&seen) {
            return Err(Error::Precondition("pattern blocks overlap".into()));
        }
        seen.extend(b.iter().copied());
    }
    if seen.len() != n {
        return Err(Error::Precondition(
            "pattern blocks do not cover every coordinate".into(),
        ));
    }
    Ok(())
}

/// Attempts the ordered partition `blocks` at `u`.
pub fn realize_pattern(p: &Arc<Polyhedron>, u: &[Rational], blocks: &[IndexSet]) -> Result<PatternOutcome> {
    check_point(p, u)?;
    validate_blocks(p.dim(), blocks)?;
    let tight = p.tight_at(u);
    let mut current = Face::whole(p)?;
    let mut normals = Vec::with_capacity(blocks.len());
    for (t, block) in blocks.iter().enumerate() {
        match advance(&current, &tight, block)? {
            None => return Ok(PatternOutcome::Blocked { step: t + 1 }),
            Some((phi, face)) => {
                normals.push(phi);
                current = face;
            }
        }
    }
    let cert = verify_partition_certificate(p, u, &normals)
        .map_err(|e| Error::Internal(format!("realized pattern failed replay: {e}")))?;
    Ok(PatternOutcome::Realized(cert))
}

struct Search {
    tight: IndexSet,
    cap: usize,
    explored: usize,
    dead_ends: Vec<Vec<IndexSet>>,
}

/// Nonempty subsets of `rest`, ordered by size then lexicographically,
/// leaving at least `reserve` coordinates behind.
fn candidate_blocks(rest: &[usize], reserve: usize) -> Vec<IndexSet> {
    let mut out: Vec<IndexSet> = Vec::new();
    let max = rest.len() - reserve;
    for mask in 1u64..(1u64 << rest.len()) {
        let size = mask.count_ones() as usize;
        if size <= max {
            out.push(
                (0..rest.len())
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| rest[b])
                    .collect(),
            );
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    out
}

impl Search {
    fn dfs(
        &mut self,
        current: &Face,
        rest: &IndexSet,
        blocks_left: usize,
        prefix: &mut Vec<IndexSet>,
        normals: &mut Vec<Vector>,
    ) -> Result<bool> {
        let rest_vec: Vec<usize> = rest.iter().copied().collect();
        let candidates = if blocks_left == 1 {
            vec![rest.clone()]
        } else {
            candidate_blocks(&rest_vec, blocks_left - 1)
        };
        for block in candidates {
            self.explored += 1;
            if self.explored > self.cap {
                return Err(Error::ResourceCap(format!("more than {} pattern steps", self.cap)));
            }
            prefix.push(block.clone());
            match advance(current, &self.tight, &block)? {
                None => self.dead_ends.push(prefix.clone()),
                Some((phi, face)) => {
                    normals.push(phi);
                    let remaining: IndexSet = rest.difference(&block).copied().collect();
                    if blocks_left == 1 || self.dfs(&face, &remaining, blocks_left - 1, prefix, normals)? {
                        return Ok(true);
                    }
                    normals.pop();
                }
            }
            prefix.pop();
        }
        Ok(false)
    }
}

/// Searches ordered partitions of the coordinates into `T` blocks, for `T`
/// from `min(bound_t, n)` down to one, for normals supported exactly on the
/// blocks in order and maximized at `u` at every step. The search is
/// exhaustive: `Infeasible` means no such pattern exists within the bound.
pub fn search_partition_certificate(
    p: &Arc<Polyhedron>,
    u: &[Rational],
    options: &PartitionOptions,
) -> Result<PartitionSearch> {
    check_point(p, u)?;
    let n = p.dim();
    if options.bound_t == 0 {
        return Err(Error::Precondition(
            "bound on the number of steps must be positive".into(),
        ));
    }
    if n > 63 {
        return Err(Error::ResourceCap(format!(
            "{n} coordinates is too many to enumerate partitions"
        )));
    }
    let mut search = Search {
        tight: p.tight_at(u),
        cap: options.cap,
        explored: 0,
        dead_ends: Vec::new(),
    };
    let root = Face::whole(p)?;
    let all: IndexSet = (0..n).collect();
    for t in (1..=options.bound_t.min(n)).rev() {
        let mut prefix = Vec::new();
        let mut normals = Vec::new();
        if search.dfs(&root, &all, t, &mut prefix, &mut normals)? {
            let cert = verify_partition_certificate(p, u, &normals)
                .map_err(|e| Error::Internal(format!("found pattern failed replay: {e}")))?;
            return Ok(PartitionSearch::Found(cert));
        }
    }
    Ok(PartitionSearch::Infeasible(InfeasibilityReport {
        explored: search.explored,
        dead_ends: search.dead_ends,
    }))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::{cone5, blocked_point, u2};
    use super::*;
    use crate::rational::ivec;

    fn found(s: PartitionSearch) -> Vec<Vector> {
        match s {
            PartitionSearch::Found(c) => c.normals,
            PartitionSearch::Infeasible(r) => panic!("no pattern: {r:?}"),
        }
    }

    #[test]
    fn u2_serial_dictatorship() {
        let p = u2();
        let two = search_partition_certificate(&p, &ivec(&[1, 1]), &PartitionOptions::new(2)).unwrap();
        assert_eq!(found(two), vec![ivec(&[1, 0]), ivec(&[0, 1])]);
        let one = search_partition_certificate(&p, &ivec(&[1, 1]), &PartitionOptions::new(1)).unwrap();
        assert_eq!(found(one), vec![ivec(&[2, 1])]);
    }

    #[test]
    fn split_pattern_is_blocked_at_step_two() {
        let (p, u) = blocked_point();
        let out = realize_pattern(&p, &u, &[IndexSet::from([0, 1]), IndexSet::from([2])]).unwrap();
        assert!(matches!(out, PatternOutcome::Blocked { step: 2 }));
        let out = realize_pattern(&p, &u, &[IndexSet::from([0, 1, 2])]).unwrap();
        assert!(matches!(out, PatternOutcome::Realized(_)));
    }

    #[test]
    fn blocked_point_has_no_finer_pattern() {
        let (p, u) = blocked_point();
        let opts = PartitionOptions::new(3);
        let normals = found(search_partition_certificate(&p, &u, &opts).unwrap());
        assert_eq!(normals.len(), 1);
        let mut finer_found = false;
        for blocks in [
            vec![IndexSet::from([0, 1]), IndexSet::from([2])],
            vec![IndexSet::from([0, 2]), IndexSet::from([1])],
            vec![IndexSet::from([1, 2]), IndexSet::from([0])],
            vec![IndexSet::from([2]), IndexSet::from([0, 1])],
        ] {
            finer_found |= matches!(realize_pattern(&p, &u, &blocks).unwrap(), PatternOutcome::Realized(_));
        }
        assert!(!finer_found);
    }

    #[test]
    fn dominated_points_have_no_pattern() {
        match search_partition_certificate(&cone5(), &ivec(&[0, 1, 0]), &PartitionOptions::new(3)).unwrap() {
            PartitionSearch::Infeasible(r) => {
                assert!(r.explored > 0);
                assert!(!r.dead_ends.is_empty());
            }
            PartitionSearch::Found(c) => panic!("unexpected {:?}", c.normals),
        }
    }

    #[test]
    fn cap_and_shape_errors() {
        let p = u2();
        let opts = PartitionOptions { bound_t: 2, cap: 0 };
        assert!(matches!(
            search_partition_certificate(&p, &ivec(&[1, 1]), &opts),
            Err(Error::ResourceCap(_))
        ));
        assert!(realize_pattern(&p, &ivec(&[1, 1]), &[IndexSet::from([0])]).is_err());
        assert!(realize_pattern(&p, &ivec(&[1, 1]), &[IndexSet::from([0, 1]), IndexSet::from([1])]).is_err());
    }
}
