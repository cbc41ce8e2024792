mod common;

use std::sync::Arc;

use num_traits::{One, Zero};
use pareto_core::lp::{cone_contains, maximize, strictly_positive_in_cone, LpStatus};
use pareto_core::polyhedron::{exposed_face, minimal_face_at, Exposure, NormalCone, Polyhedron};
use pareto_core::rational::{frac, inner_product, int, nullspace, rank, rref, Rational, Vector};
use pareto_core::simplex::{LinearProgram, Outcome};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vector>> {
    prop::collection::vec(prop::collection::vec((-3i64..=3, 1i64..=3), cols), rows).prop_map(|m| {
        m.into_iter()
            .map(|r| r.into_iter().map(|(n, d)| frac(n, d)).collect())
            .collect()
    })
}

/// Laplace expansion along the first row.
fn det(m: &[Vector]) -> Rational {
    if m.is_empty() {
        return Rational::one();
    }
    let n = m.len();
    let mut total = Rational::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vector> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != c)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][c] * det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == k)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Largest `k` with a nonzero `k x k` minor.
fn rank_by_minors(m: &[Vector], cols: usize) -> usize {
    let rows = m.len();
    (1..=rows.min(cols))
        .rev()
        .find(|&k| {
            subsets(rows, k).iter().any(|rs| {
                subsets(cols, k).iter().any(|cs| {
                    let sub: Vec<Vector> = rs
                        .iter()
                        .map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect())
                        .collect();
                    !det(&sub).is_zero()
                })
            })
        })
        .unwrap_or(0)
}

fn polytope() -> impl Strategy<Value = Arc<Polyhedron>> {
    (2usize..=3)
        .prop_flat_map(|d| prop::collection::vec(prop::collection::vec((-6i64..=6, 1i64..=4), d), d + 1..=8))
        .prop_map(|pts| {
            let d = pts[0].len();
            let pts = pts
                .into_iter()
                .map(|p| p.into_iter().map(|(n, q)| frac(n, q)).collect())
                .collect();
            Polyhedron::from_points(d, pts).unwrap().into_arc()
        })
}

fn objective(d: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-4i64..=4, d)
        .prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
        .prop_map(|v| v.into_iter().map(int).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_matches_minors(m in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c))) {
        let cols = m[0].len();
        prop_assert_eq!(rank(&m, cols), rank_by_minors(&m, cols));
    }

    #[test]
    fn nullspace_is_annihilated(m in (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| matrix(r, c))) {
        let cols = m[0].len();
        let basis = nullspace(&m, cols);
        prop_assert_eq!(basis.len(), cols - rank(&m, cols));
        for x in &basis {
            for row in &m {
                prop_assert!(inner_product(row, x).unwrap().is_zero());
            }
        }
        let (r, pivots) = rref(&m, cols);
        for (row, &p) in r.iter().zip(&pivots) {
            prop_assert!(row[p].is_one());
        }
    }

    #[test]
    fn optimum_is_the_best_vertex((p, phi) in polytope().prop_flat_map(|p| { let d = p.dim(); (Just(p), objective(d)) })) {
        let res = maximize(&p, &phi).unwrap();
        prop_assert_eq!(res.status, LpStatus::Optimal);
        let scores: Vec<Rational> = p.vrep().vertices.iter().map(|v| inner_product(&phi, v).unwrap()).collect();
        let best = scores.iter().max().unwrap().clone();
        prop_assert_eq!(res.value.clone().unwrap(), best.clone());
        // The argmax face is the union of the minimal faces of optimal vertices.
        let face = res.argmax.unwrap();
        for (v, s) in p.vrep().vertices.iter().zip(&scores) {
            prop_assert_eq!(face.contains(v), *s == best);
            if *s == best {
                prop_assert!(minimal_face_at(&p, v).unwrap().is_subface_of(&face));
            }
        }
    }

    #[test]
    fn positive_normal_iff_every_coordinate_is_reached(
        gens in (2usize..=4).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(0i64..=3, n), 1..=4))
    ) {
        let n = gens[0].len();
        let cone = NormalCone {
            dim: n,
            generators: gens.iter().map(|g| g.iter().map(|&x| int(x)).collect()).collect(),
            lineality: Vec::new(),
        };
        let reachable = (0..n).all(|i| gens.iter().any(|g| g[i] > 0));
        match strictly_positive_in_cone(&cone) {
            Some(phi) => {
                prop_assert!(reachable);
                prop_assert!(phi.iter().all(|x| *x >= int(1)));
                prop_assert!(cone_contains(&cone, &phi));
            }
            None => prop_assert!(!reachable),
        }
    }
}

#[test]
fn bland_terminates_on_duplicated_facets() {
    let p = common::u2();
    let mut lp = LinearProgram::new(2).maximize(vec![int(1), int(1)]);
    for _ in 0..4 {
        for c in &p.hrep().ineqs {
            lp.le.push((c.normal.clone(), c.rhs.clone()));
        }
    }
    match lp.solve() {
        Outcome::Optimal { value, .. } => assert_eq!(value, int(2)),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn blocked_coordinate_has_no_positive_normal() {
    let cone = NormalCone {
        dim: 2,
        generators: vec![vec![int(1), int(0)]],
        lineality: Vec::new(),
    };
    assert_eq!(strictly_positive_in_cone(&cone), None);
    // Sign-blocked: the only way to reach coordinate 2 drags coordinate 1 negative.
    let cone = NormalCone {
        dim: 2,
        generators: vec![vec![int(-1), int(1)]],
        lineality: Vec::new(),
    };
    assert_eq!(strictly_positive_in_cone(&cone), None);
}

#[test]
fn unbounded_exposure_on_a_downward_closure() {
    let dc = common::u2().downward_closure().unwrap().into_arc();
    assert!(matches!(
        exposed_face(&dc, &[int(-1), int(0)]).unwrap(),
        Exposure::Unbounded { .. }
    ));
    assert_eq!(maximize(&dc, &[int(-1), int(1)]).unwrap().status, LpStatus::Unbounded);
}
