mod common;

use std::sync::Arc;

use pareto_core::polyhedron::{
    enumerate_faces, hrep_from_vrep, minimal_face_at, vrep_from_hrep, Polyhedron, VRep, DEFAULT_FACE_CAP,
};
use pareto_core::rational::{frac, ivec, Vector};
use proptest::prelude::*;

fn points() -> impl Strategy<Value = (usize, Vec<Vector>)> {
    (2usize..=4).prop_flat_map(|d| {
        prop::collection::vec(prop::collection::vec((-6i64..=6, 1i64..=4), d), 1..=9).prop_map(move |pts| {
            (
                d,
                pts.into_iter()
                    .map(|p| p.into_iter().map(|(n, q)| frac(n, q)).collect())
                    .collect(),
            )
        })
    })
}

fn contains_all(p: &Polyhedron, q: &Polyhedron) -> bool {
    q.vrep().vertices.iter().all(|v| p.contains(v))
        && q.vrep().rays.iter().all(|r| {
            let base = &p.vrep().vertices[0];
            let far: Vector = base.iter().zip(r).map(|(b, x)| b + x).collect();
            p.contains(&far)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn representations_round_trip((d, pts) in points()) {
        let v = VRep::new(d, pts.clone(), Vec::new());
        let back = vrep_from_hrep(&hrep_from_vrep(&v).unwrap()).unwrap();
        let h = hrep_from_vrep(&v).unwrap();
        for p in &pts {
            prop_assert!(h.contains(p));
        }
        for w in &back.vertices {
            prop_assert!(pts.contains(w));
        }
        prop_assert!(back.rays.is_empty());
    }

    #[test]
    fn downward_closure_is_idempotent_and_monotone((d, pts) in points(), extra in prop::collection::vec(-6i64..=6, 4)) {
        let p = Polyhedron::from_points(d, pts.clone()).unwrap();
        let dc = p.downward_closure().unwrap();
        let again = dc.downward_closure().unwrap();
        prop_assert_eq!(again.hrep(), dc.hrep());
        let mut more = pts;
        more.push(ivec(&extra[..d]));
        let q = Polyhedron::from_points(d, more).unwrap();
        let dq = q.downward_closure().unwrap();
        prop_assert!(contains_all(&dq, &dc));
        prop_assert!(contains_all(&dc, &p));
    }

    #[test]
    fn minimal_faces_partition_vertices((d, pts) in points()) {
        let p = Arc::new(Polyhedron::from_points(d, pts).unwrap());
        let faces = enumerate_faces(&p, None, DEFAULT_FACE_CAP).unwrap();
        for v in &p.vrep().vertices {
            let f = minimal_face_at(&p, v).unwrap();
            prop_assert_eq!(f.dim(), 0);
            prop_assert_eq!(faces.iter().filter(|g| g.contains_in_relative_interior(v)).count(), 1);
        }
        let mut actives: Vec<_> = faces.iter().map(|f| f.active().clone()).collect();
        actives.sort();
        actives.dedup();
        prop_assert_eq!(actives.len(), faces.len());
    }
}

#[test]
fn fixture_face_counts() {
    let count = |p: &Arc<Polyhedron>| enumerate_faces(p, None, DEFAULT_FACE_CAP).unwrap().len();
    assert_eq!(count(&common::u2()), 9);
    // Square pyramid: 5 vertices, 8 edges, 5 facets and the body.
    assert_eq!(count(&common::cone5()), 19);
    let point = Polyhedron::from_points(2, vec![ivec(&[3, 4])]).unwrap().into_arc();
    assert_eq!(count(&point), 1);
}
