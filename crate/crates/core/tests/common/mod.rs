#![allow(dead_code)]

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use pareto_core::economy::{eval_plc, lifted_allocation_system};
use pareto_core::polyhedron::{vrep_from_hrep, Constraint, HRep, Polyhedron, VRep};
use pareto_core::rational::{frac, int, ivec, zeros, IndexSet, Rational, Vector};
use pareto_core::{Economy, PlcUtility};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Seed from `PARETO_SEED`, falling back to a fixed value.
pub fn seed() -> u64 {
    std::env::var("PARETO_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed());
    r.set_stream(stream);
    r
}

pub fn random_rational(rng: &mut impl Rng, max_num: i64, max_den: i64) -> Rational {
    frac(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

/// Convex hull of 3..=12 random points in dimension 2..=4, coordinates with
/// denominators at most 8.
pub fn random_polytope(rng: &mut impl Rng) -> Arc<Polyhedron> {
    let d = rng.gen_range(2..=4);
    let k = rng.gen_range(d + 1..=12);
    let points: Vec<Vector> = (0..k)
        .map(|_| (0..d).map(|_| random_rational(rng, 16, 8)).collect())
        .collect();
    Polyhedron::from_points(d, points).unwrap().into_arc()
}

/// Like [`random_polytope`] but with integer coordinates in `1..=6`.
pub fn random_positive_polytope(rng: &mut impl Rng) -> Arc<Polyhedron> {
    let d = rng.gen_range(2..=4);
    let k = rng.gen_range(d + 1..=10);
    let points: Vec<Vector> = (0..k)
        .map(|_| (0..d).map(|_| int(rng.gen_range(1..=6))).collect())
        .collect();
    Polyhedron::from_points(d, points).unwrap().into_arc()
}

pub fn instances(count: usize) -> Vec<Arc<Polyhedron>> {
    let mut r = rng(1);
    (0..count).map(|_| random_polytope(&mut r)).collect()
}

/// `u` is maximal in `h` iff `h ∩ {v >= u}` has no vertex other than `u`.
/// Uses vertex enumeration only, never the simplex solver.
pub fn dominance_oracle(h: &HRep, u: &[Rational]) -> bool {
    let mut g = h.clone();
    for i in 0..h.dim {
        let mut row = zeros(h.dim);
        row[i] = -Rational::one();
        g.ineqs.push(Constraint::new(row, -&u[i]));
    }
    let v = vrep_from_hrep(&g).unwrap();
    assert!(!v.is_empty(), "u must lie in the set");
    v.vertices.iter().all(|w| w.as_slice() == u) && v.rays.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

/// `conv(vertices) - R^n_+` from a point list, through vertex enumeration.
pub fn downward_closure_of_points(dim: usize, points: Vec<Vector>) -> HRep {
    let rays = (0..dim)
        .map(|i| {
            let mut r = zeros(dim);
            r[i] = -Rational::one();
            r
        })
        .collect();
    Polyhedron::from_vrep(&VRep::new(dim, points, rays))
        .unwrap()
        .hrep()
        .clone()
}

/// Random PLC utility over `goods` goods with `pieces` pieces; gradients are
/// strictly positive when `positive`, otherwise entries are in `0..=4`.
pub fn random_plc(rng: &mut impl Rng, goods: usize, pieces: usize, positive: bool) -> PlcUtility {
    let lo = if positive { 1 } else { 0 };
    PlcUtility::new(
        (0..pieces)
            .map(|_| {
                let g: Vector = (0..goods).map(|_| int(rng.gen_range(lo..=4))).collect();
                (g, int(rng.gen_range(0..=4)))
            })
            .collect(),
    )
    .unwrap()
}

fn random_bundle(rng: &mut impl Rng, goods: usize) -> Vector {
    loop {
        let b: Vector = (0..goods)
            .map(|_| frac(rng.gen_range(0..=4), rng.gen_range(1..=3)))
            .collect();
        if b.iter().any(|x| x.is_positive()) {
            return b;
        }
    }
}

pub fn random_economy(rng: &mut impl Rng, agents: usize, goods: usize, max_pieces: usize, positive: bool) -> Economy {
    let utilities = (0..agents)
        .map(|_| {
            let k = rng.gen_range(1..=max_pieces);
            random_plc(rng, goods, k, positive)
        })
        .collect();
    let endowments = (0..agents).map(|_| random_bundle(rng, goods)).collect();
    Economy::new(utilities, endowments).unwrap()
}

/// dc of the utility possibility set as `cl conv ∪_k U_k`.
pub fn per_combination_dc(e: &Economy) -> HRep {
    downward_closure_of_points(e.agents(), per_combination_points(e))
}

/// For every choice of one piece per agent, the vertices of the allocations
/// on which those pieces are the active minima, mapped to utilities.
pub fn per_combination_points(e: &Economy) -> Vec<Vector> {
    let (n, m) = (e.agents(), e.goods());
    let width = n * m;
    let mut base = HRep::new(width);
    for col in 0..width {
        let mut row = zeros(width);
        row[col] = -Rational::one();
        base.ineqs.push(Constraint::new(row, Rational::zero()));
    }
    for j in 0..m {
        let mut row = zeros(width);
        for i in 0..n {
            row[i * m + j] = Rational::one();
        }
        base.ineqs.push(Constraint::new(row, e.total()[j].clone()));
    }
    let counts: Vec<usize> = e.utilities().iter().map(|u| u.pieces.len()).collect();
    let mut points = Vec::new();
    for combo in combinations(&counts) {
        let mut h = base.clone();
        for (i, &k) in combo.iter().enumerate() {
            let pieces = &e.utilities()[i].pieces;
            for (k2, other) in pieces.iter().enumerate() {
                if k2 == k {
                    continue;
                }
                // piece_k(x_i) <= piece_k2(x_i)
                let mut row = zeros(width);
                for j in 0..m {
                    row[i * m + j] = &pieces[k].gradient[j] - &other.gradient[j];
                }
                h.ineqs.push(Constraint::new(row, &other.offset - &pieces[k].offset));
            }
        }
        let v = vrep_from_hrep(&h).unwrap();
        assert!(v.rays.is_empty(), "allocations are bounded");
        for x in &v.vertices {
            let image: Vector = combo
                .iter()
                .enumerate()
                .map(|(i, &k)| {
                    let p = &e.utilities()[i].pieces[k];
                    let u: Rational = p.gradient.iter().zip(&x[i * m..(i + 1) * m]).map(|(c, y)| c * y).sum();
                    let u = u + &p.offset;
                    debug_assert_eq!(u, eval_plc(&e.utilities()[i], &x[i * m..(i + 1) * m]).unwrap());
                    u
                })
                .collect();
            points.push(image);
        }
    }
    points
}

fn combinations(counts: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &c in counts {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..c).map(move |k| {
                    let mut p = prefix.clone();
                    p.push(k);
                    p
                })
            })
            .collect();
    }
    out
}

/// Economy whose endowment allocation maximizes `Σ w_i u_i` for random
/// positive weights `w`, found over the lifted allocation system. Retries
/// until every agent's optimal bundle is nonzero.
pub fn pareto_endowment_economy(rng: &mut impl Rng, agents: usize, goods: usize) -> Economy {
    loop {
        let seed_econ = random_economy(rng, agents, goods, 3, true);
        let h = lifted_allocation_system(&seed_econ);
        let mut phi = zeros(h.dim);
        for i in 0..agents {
            phi[agents * goods + i] = int(rng.gen_range(1..=5));
        }
        let res = pareto_core::lp::maximize_hrep(&h, &phi).unwrap();
        let x = res.witness.expect("welfare program is bounded");
        let endowments: Vec<Vector> = (0..agents).map(|i| x[i * goods..(i + 1) * goods].to_vec()).collect();
        if endowments.iter().any(|b| b.iter().all(|v| v.is_zero())) {
            continue;
        }
        return Economy::new(seed_econ.utilities().to_vec(), endowments).unwrap();
    }
}

/// `max u(x)` over `{x >= 0 | ⟨p, x⟩ <= budget}` by enumerating the vertices
/// of the epigraph polytope.
pub fn budget_optimum(u: &PlcUtility, prices: &[Rational], budget: &Rational) -> Rational {
    let m = u.goods();
    let mut h = HRep::new(m + 1);
    for j in 0..m {
        let mut row = zeros(m + 1);
        row[j] = -Rational::one();
        h.ineqs.push(Constraint::new(row, Rational::zero()));
    }
    let mut row = prices.to_vec();
    row.push(Rational::zero());
    h.ineqs.push(Constraint::new(row, budget.clone()));
    for p in &u.pieces {
        let mut row: Vector = p.gradient.iter().map(|c| -c).collect();
        row.push(Rational::one());
        h.ineqs.push(Constraint::new(row, p.offset.clone()));
    }
    // Bound t from below by the utility at the origin.
    let mut row = zeros(m + 1);
    row[m] = -Rational::one();
    let floor = eval_plc(u, &zeros(m)).unwrap();
    h.ineqs.push(Constraint::new(row, -floor));
    let v = vrep_from_hrep(&h).unwrap();
    v.vertices.iter().map(|x| x[m].clone()).max().unwrap()
}

pub fn u2() -> Arc<Polyhedron> {
    Polyhedron::from_points(2, vec![ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[1, 1]), ivec(&[0, 2])])
        .unwrap()
        .into_arc()
}

pub fn cone5() -> Arc<Polyhedron> {
    Polyhedron::from_points(
        3,
        vec![
            ivec(&[1, 0, 0]),
            ivec(&[-1, 0, 0]),
            ivec(&[0, -1, 0]),
            ivec(&[0, 1, 0]),
            ivec(&[0, 1, 1]),
        ],
    )
    .unwrap()
    .into_arc()
}

pub fn linear(c: &[i64]) -> PlcUtility {
    PlcUtility::new(vec![(ivec(c), Rational::zero())]).unwrap()
}

pub fn econ1() -> Economy {
    Economy::new(
        vec![linear(&[2, 1]), linear(&[1, 2])],
        vec![ivec(&[1, 0]), ivec(&[0, 1])],
    )
    .unwrap()
}

pub fn econ1_swapped() -> Economy {
    Economy::new(
        vec![linear(&[2, 1]), linear(&[1, 2])],
        vec![ivec(&[0, 1]), ivec(&[1, 0])],
    )
    .unwrap()
}

/// Random convex combination of `points` with small positive weights.
pub fn random_combination(rng: &mut impl Rng, points: &[&Vector]) -> Vector {
    let weights: Vec<Rational> = points.iter().map(|_| int(rng.gen_range(1..=4))).collect();
    let total: Rational = weights.iter().sum();
    let dim = points[0].len();
    let mut out = zeros(dim);
    for (w, p) in weights.iter().zip(points) {
        for (o, x) in out.iter_mut().zip(p.iter()) {
            *o += w * x / &total;
        }
    }
    out
}

pub fn unit(dim: usize, j: usize) -> Vector {
    let mut v = zeros(dim);
    v[j] = Rational::one();
    v
}

pub fn support_of(v: &[Rational]) -> IndexSet {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect()
}

pub fn is_nonneg(v: &[Rational]) -> bool {
    v.iter().all(|x| !x.is_negative())
}
