//! Certifying every vertex of many polytopes at once.

use std::sync::Arc;

use crate::pareto::{construct_certificate_in, Strategy};
use crate::polyhedron::Polyhedron;
use crate::rational::Vector;
use crate::{par, Error, Result};

/// How independent jobs are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecutionMode {
    /// Data-parallel over jobs when built with the `parallel` feature,
    /// sequential otherwise.
    #[default]
    Parallel,
    Sequential,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOutcome {
    pub vertex: Vector,
    /// `None` when the vertex is dominated.
    pub normals: Option<Vec<Vector>>,
}

impl VertexOutcome {
    pub fn is_maximal(&self) -> bool {
        self.normals.is_some()
    }
}

/// Certificates (or domination) for every vertex of `p`, in vertex order.
pub fn certify_vertices(p: &Arc<Polyhedron>, strategy: &Strategy) -> Result<Vec<VertexOutcome>> {
    let dc = p.downward_closure()?.into_arc();
    p.vrep()
        .vertices
        .iter()
        .map(|v| match construct_certificate_in(p, &dc, v, strategy) {
            Ok(cert) => Ok(VertexOutcome {
                vertex: v.clone(),
                normals: Some(cert.normals),
            }),
            Err(Error::NotMaximal { .. }) => Ok(VertexOutcome {
                vertex: v.clone(),
                normals: None,
            }),
            Err(e) => Err(e),
        })
        .collect()
}

/// [`certify_vertices`] over a batch; results keep the input order in both modes.
pub fn certify_batch(
    polytopes: &[Arc<Polyhedron>],
    strategy: &Strategy,
    mode: ExecutionMode,
) -> Vec<Result<Vec<VertexOutcome>>> {
    let job = |p: &Arc<Polyhedron>| certify_vertices(p, strategy);
    match mode {
        ExecutionMode::Parallel => par::map(polytopes, job),
        ExecutionMode::Sequential => par::map_sequential(polytopes, job),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pareto::fixtures::{cone5, u2};
    use crate::rational::ivec;

    #[test]
    fn modes_agree() {
        let batch = vec![u2(), cone5(), u2()];
        let a = certify_batch(&batch, &Strategy::Flag, ExecutionMode::Parallel);
        let b = certify_batch(&batch, &Strategy::Flag, ExecutionMode::Sequential);
        assert_eq!(a, b);
        let u2_out = a[0].as_ref().unwrap();
        let maximal: Vec<&Vector> = u2_out.iter().filter(|o| o.is_maximal()).map(|o| &o.vertex).collect();
        assert_eq!(maximal, vec![&ivec(&[0, 2]), &ivec(&[1, 1])]);
    }
}
