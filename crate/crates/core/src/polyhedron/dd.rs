//! Double description: generators of a polyhedral cone `{y | A y >= 0, E y = 0}`.
//!
//! Inequalities are inserted one at a time. Lines of the current cone are
//! consumed first; once every remaining line lies in the new hyperplane the
//! rays are split, and a positive/negative pair spawns a new ray only when
//! the pair is adjacent (combinatorial test on zero sets).

use num_traits::{Signed, Zero};

use crate::rational::{dot, nullspace, primitive, Rational, Vector};

/// Lineality basis plus extreme rays of the pointed part (which lies in the
/// orthogonal complement of the lineality space).
#[derive(Debug, Clone, Default)]
pub(crate) struct ConeGenerators {
    pub lineality: Vec<Vector>,
    pub rays: Vec<Vector>,
}

#[derive(Clone)]
struct Ray {
    dir: Vector,
    zeros: Bits,
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn is_subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

pub(crate) fn cone_generators(ineqs: &[Vector], eqs: &[Vector], dim: usize) -> ConeGenerators {
    let all: Vec<Vector> = ineqs.iter().chain(eqs).cloned().collect();
    let lineality = nullspace(&all, dim);

    let mut restrict: Vec<Vector> = eqs.to_vec();
    restrict.extend(lineality.iter().cloned());
    let mut lines: Vec<Vector> = nullspace(&restrict, dim).into_iter().map(|l| primitive(&l)).collect();
    let mut rays: Vec<Ray> = Vec::new();
    let m = ineqs.len();

    for (k, a) in ineqs.iter().enumerate() {
        if let Some(pos) = lines.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l = lines.swap_remove(pos);
            let mut al = dot(a, &l);
            if al.is_negative() {
                l.iter_mut().for_each(|x| *x = -&*x);
                al = -al;
            }
            for other in lines.iter_mut() {
                let c = dot(a, other);
                if !c.is_zero() {
                    let f = c / &al;
                    for (x, y) in other.iter_mut().zip(&l) {
                        *x -= &f * y;
                    }
                    *other = primitive(other);
                }
            }
            for r in rays.iter_mut() {
                let c = dot(a, &r.dir);
                if !c.is_zero() {
                    let f = c / &al;
                    for (x, y) in r.dir.iter_mut().zip(&l) {
                        *x -= &f * y;
                    }
                    r.dir = primitive(&r.dir);
                }
                r.zeros.set(k);
            }
            let mut zeros = Bits::new(m);
            for j in 0..k {
                zeros.set(j);
            }
            rays.push(Ray { dir: l, zeros });
            continue;
        }

        let values: Vec<Rational> = rays.iter().map(|r| dot(a, &r.dir)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zeros.set(k);
                }
            }
            continue;
        }

        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.and(&rays[n].zeros);
                let adjacent = !rays
                    .iter()
                    .enumerate()
                    .any(|(i, r)| i != p && i != n && common.is_subset_of(&r.zeros));
                if !adjacent {
                    continue;
                }
                let ap = &values[p];
                let an = &values[n];
                let dir: Vector = rays[n]
                    .dir
                    .iter()
                    .zip(&rays[p].dir)
                    .map(|(xn, xp)| ap * xn - an * xp)
                    .collect();
                let mut zeros = common;
                zeros.set(k);
                fresh.push(Ray {
                    dir: primitive(&dir),
                    zeros,
                });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if values[i].is_negative() {
                continue;
            }
            if values[i].is_zero() {
                r.zeros.set(k);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }

    debug_assert!(
        lines.is_empty(),
        "cone restricted to the lineality complement is pointed"
    );
    let mut out: Vec<Vector> = rays.into_iter().map(|r| r.dir).collect();
    out.sort();
    out.dedup();
    ConeGenerators { lineality, rays: out }
}
