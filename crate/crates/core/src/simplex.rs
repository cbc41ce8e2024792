//! Dense two-phase primal simplex over exact rationals, pivoting fraction-free
//! on an integer tableau.
//!
//! Pivoting follows Bland's smallest-index rule for both the entering and
//! the leaving variable, so the method terminates on degenerate problems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{zeros, Rational, Vector};

/// `maximize objective · x` subject to linear rows; each variable is either
/// free or constrained to be nonnegative.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub ncols: usize,
    pub objective: Vector,
    /// Rows `a · x <= b`.
    pub le: Vec<(Vector, Rational)>,
    /// Rows `a · x = b`.
    pub eq: Vec<(Vector, Rational)>,
    /// `nonneg[j]` adds the bound `x_j >= 0`.
    pub nonneg: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Optimal {
        x: Vector,
        value: Rational,
    },
    /// `x` is feasible and `ray` a recession direction with positive objective.
    Unbounded {
        x: Vector,
        ray: Vector,
    },
    Infeasible,
}

impl LinearProgram {
    /// Program over free variables with an all-zero objective.
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            objective: zeros(ncols),
            le: Vec::new(),
            eq: Vec::new(),
            nonneg: vec![false; ncols],
        }
    }

    pub fn maximize(mut self, objective: Vector) -> Self {
        debug_assert_eq!(objective.len(), self.ncols);
        self.objective = objective;
        self
    }

    pub fn solve(&self) -> Outcome {
        Tableau::build(self).run()
    }
}

/// Fraction-free tableau: the true entries are `rows[i][j] / det` with
/// `det > 0`. Every entry stays a signed minor of the row-scaled input, so
/// each pivot update is an exact integer division and no gcd is taken.
///
/// Column layout: structural columns (free variables split in two), then
/// slacks, then artificials.
struct Tableau {
    rows: Vec<Vec<BigInt>>,
    rhs: Vec<BigInt>,
    basis: Vec<usize>,
    det: BigInt,
    ncols: usize,
    n_artificial_start: usize,
    /// For each original variable: (positive column, optional negative column).
    var_cols: Vec<(usize, Option<usize>)>,
    cost: Vector,
}

/// Objective row in tableau scaling: the reduced cost of column `j` is
/// `reduced[j] / (det * scale)` and the objective value `-value / (det * scale)`.
struct Objective {
    reduced: Vec<BigInt>,
    value: BigInt,
    scale: BigInt,
}

fn exact_div(x: BigInt, d: &BigInt) -> BigInt {
    if d.is_one() {
        return x;
    }
    let (q, r) = x.div_rem(d);
    debug_assert!(r.is_zero(), "fraction-free pivot left a remainder");
    q
}

/// Smallest positive `l` with `l * x` integral for every entry.
fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

fn scaled(x: &Rational, l: &BigInt) -> BigInt {
    x.numer() * (l / x.denom())
}

fn update(
    row: &mut [BigInt],
    rhs: &mut BigInt,
    c: usize,
    p: &BigInt,
    det: &BigInt,
    pivot_row: &[BigInt],
    pivot_rhs: &BigInt,
) {
    let f = row[c].clone();
    for (x, y) in row.iter_mut().zip(pivot_row) {
        let mut v = &*x * p;
        if !f.is_zero() && !y.is_zero() {
            v -= &f * y;
        }
        *x = exact_div(v, det);
    }
    let mut v = &*rhs * p;
    if !f.is_zero() {
        v -= &f * pivot_rhs;
    }
    *rhs = exact_div(v, det);
}

fn negate_all(xs: &mut [BigInt]) {
    for x in xs.iter_mut() {
        if !x.is_zero() {
            *x = -std::mem::take(x);
        }
    }
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let mut var_cols = Vec::with_capacity(lp.ncols);
        let mut next = 0;
        for j in 0..lp.ncols {
            if lp.nonneg[j] {
                var_cols.push((next, None));
                next += 1;
            } else {
                var_cols.push((next, Some(next + 1)));
                next += 2;
            }
        }
        let n_struct = next;
        let n_slack = lp.le.len();
        let m = lp.le.len() + lp.eq.len();

        // Rows needing an artificial: equalities and `<=` rows with negative rhs.
        let needs_art: Vec<bool> = lp
            .le
            .iter()
            .map(|(_, b)| b.is_negative())
            .chain(lp.eq.iter().map(|_| true))
            .collect();
        let n_art = needs_art.iter().filter(|&&x| x).count();
        let ncols = n_struct + n_slack + n_art;

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut art = n_struct + n_slack;
        for (i, (a, b)) in lp.le.iter().chain(lp.eq.iter()).enumerate() {
            // Scaling a row by a positive constant only rescales its slack,
            // so slacks and artificials keep unit coefficients.
            let l = common_denominator(a.iter().chain(std::iter::once(b)));
            let flip = b.is_negative();
            let signed = |v: BigInt| if flip { -v } else { v };
            let mut row = vec![BigInt::zero(); ncols];
            for (j, coef) in a.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let v = signed(scaled(coef, &l));
                let (p, n) = var_cols[j];
                if let Some(n) = n {
                    row[n] = -&v;
                }
                row[p] = v;
            }
            if i < n_slack {
                row[n_struct + i] = signed(BigInt::one());
            }
            if needs_art[i] {
                row[art] = BigInt::one();
                basis.push(art);
                art += 1;
            } else {
                basis.push(n_struct + i);
            }
            rows.push(row);
            rhs.push(signed(scaled(b, &l)));
        }

        let mut cost = zeros(ncols);
        for (j, c) in lp.objective.iter().enumerate() {
            let (p, n) = var_cols[j];
            cost[p] = c.clone();
            if let Some(n) = n {
                cost[n] = -c.clone();
            }
        }

        Self {
            rows,
            rhs,
            basis,
            det: BigInt::one(),
            ncols,
            n_artificial_start: n_struct + n_slack,
            var_cols,
            cost,
        }
    }

    fn pivot(&mut self, r: usize, c: usize, obj: Option<&mut Objective>) {
        let p = self.rows[r][c].clone();
        let det = std::mem::replace(&mut self.det, p.clone());
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i != r {
                update(&mut self.rows[i], &mut self.rhs[i], c, &p, &det, &pivot_row, &pivot_rhs);
            }
        }
        let mut obj = obj;
        if let Some(o) = obj.as_mut() {
            update(&mut o.reduced, &mut o.value, c, &p, &det, &pivot_row, &pivot_rhs);
        }
        self.basis[r] = c;
        if self.det.is_negative() {
            self.det = -std::mem::take(&mut self.det);
            for row in &mut self.rows {
                negate_all(row);
            }
            negate_all(&mut self.rhs);
            if let Some(o) = obj {
                negate_all(&mut o.reduced);
                o.value = -std::mem::take(&mut o.value);
            }
        }
    }

    fn objective(&self, cost: &[Rational]) -> Objective {
        let scale = common_denominator(cost);
        let c: Vec<BigInt> = cost.iter().map(|x| scaled(x, &scale)).collect();
        let mut reduced: Vec<BigInt> = c.iter().map(|x| x * &self.det).collect();
        let mut value = BigInt::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &c[b];
            if cb.is_zero() {
                continue;
            }
            for (x, y) in reduced.iter_mut().zip(&self.rows[i]) {
                if !y.is_zero() {
                    *x -= cb * y;
                }
            }
            value -= cb * &self.rhs[i];
        }
        Objective { reduced, value, scale }
    }

    /// Runs Bland pivots on `obj`; returns the unbounded entering column.
    fn optimize(&mut self, obj: &mut Objective, allowed: usize) -> Option<usize> {
        loop {
            let c = (0..allowed).find(|&j| obj.reduced[j].is_positive())?;
            let mut best: Option<usize> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(k) => {
                        // rhs_i / a_i against rhs_k / a_k, denominators positive.
                        let lhs = &self.rhs[i] * &self.rows[k][c];
                        let rhs = &self.rhs[k] * a;
                        lhs < rhs || (lhs == rhs && self.basis[i] < self.basis[k])
                    }
                };
                if better {
                    best = Some(i);
                }
            }
            match best {
                None => return Some(c),
                Some(r) => self.pivot(r, c, Some(obj)),
            }
        }
    }

    fn ratio(&self, x: &BigInt) -> Rational {
        Rational::new(x.clone(), self.det.clone())
    }

    fn column_values(&self) -> Vector {
        let mut col = zeros(self.ncols);
        for (i, &b) in self.basis.iter().enumerate() {
            col[b] = self.ratio(&self.rhs[i]);
        }
        col
    }

    fn to_original(&self, col: &[Rational]) -> Vector {
        self.var_cols
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => &col[p] - &col[n],
                None => col[p].clone(),
            })
            .collect()
    }

    fn run(mut self) -> Outcome {
        let art = self.n_artificial_start;
        if self.basis.iter().any(|&b| b >= art) {
            let mut phase1 = zeros(self.ncols);
            for x in phase1[art..].iter_mut() {
                *x = -Rational::one();
            }
            let mut obj = self.objective(&phase1);
            let unbounded = self.optimize(&mut obj, self.ncols);
            debug_assert!(unbounded.is_none(), "phase one is bounded above by zero");
            if obj.value.is_positive() {
                return Outcome::Infeasible;
            }
            // Drive zero-level artificials out of the basis or drop their rows.
            let mut r = 0;
            while r < self.rows.len() {
                if self.basis[r] < art {
                    r += 1;
                    continue;
                }
                match (0..art).find(|&j| !self.rows[r][j].is_zero()) {
                    Some(c) => {
                        self.pivot(r, c, None);
                        r += 1;
                    }
                    None => {
                        self.rows.remove(r);
                        self.rhs.remove(r);
                        self.basis.remove(r);
                    }
                }
            }
        }

        let cost = self.cost.clone();
        let mut obj = self.objective(&cost);
        let unbounded = self.optimize(&mut obj, art);
        let col = self.column_values();
        let x = self.to_original(&col);
        match unbounded {
            None => Outcome::Optimal {
                x,
                value: Rational::new(-obj.value, &self.det * &obj.scale),
            },
            Some(c) => {
                let mut dir = zeros(self.ncols);
                dir[c] = Rational::one();
                for (i, &b) in self.basis.iter().enumerate() {
                    dir[b] = -self.ratio(&self.rows[i][c]);
                }
                Outcome::Unbounded {
                    x,
                    ray: self.to_original(&dir),
                }
            }
        }
    }
}
