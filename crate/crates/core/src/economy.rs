//! Exchange economies with piecewise-linear concave utilities: the utility
//! possibility set, monotonicity checks, and supporting prices for a Pareto
//! optimal endowment.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::io::{AgentDoc, EconomyDoc, PieceDoc};
use crate::lp::strictly_positive_in_cone;
use crate::pareto::{classify, is_maximal};
use crate::polyhedron::{
    downward_closure_hrep, minimal_face_at, minkowski_sum_all, normal_cone_at, project_eliminate, Constraint, HRep,
    Polyhedron,
};
use crate::rational::{
    dot, format_vector, is_nonneg, is_strictly_positive, is_zero, zeros, IndexSet, Rational, Vector,
};
use crate::simplex::{LinearProgram, Outcome};
use crate::{par, Error, Result};

/// One affine piece `⟨gradient, x⟩ + offset`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Piece {
    #[serde(with = "crate::io::serde_rational::vec")]
    pub gradient: Vector,
    #[serde(with = "crate::io::serde_rational::scalar")]
    pub offset: Rational,
}

/// `u(x) = min_k ⟨c_k, x⟩ + d_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlcUtility {
    pub pieces: Vec<Piece>,
}

impl PlcUtility {
    pub fn new(pieces: Vec<(Vector, Rational)>) -> Result<Self> {
        let Some((first, _)) = pieces.first() else {
            return Err(Error::Precondition("a utility needs at least one piece".into()));
        };
        let m = first.len();
        if let Some((c, _)) = pieces.iter().find(|(c, _)| c.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: c.len(),
            });
        }
        Ok(Self {
            pieces: pieces
                .into_iter()
                .map(|(gradient, offset)| Piece { gradient, offset })
                .collect(),
        })
    }

    pub fn goods(&self) -> usize {
        self.pieces[0].gradient.len()
    }

    fn shifted_to_zero(&self) -> Self {
        let base = self.pieces.iter().map(|p| &p.offset).min().expect("nonempty").clone();
        Self {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    gradient: p.gradient.clone(),
                    offset: &p.offset - &base,
                })
                .collect(),
        }
    }
}

/// `u(x)` for a bundle `x >= 0`.
pub fn eval_plc(u: &PlcUtility, x: &[Rational]) -> Result<Rational> {
    if x.len() != u.goods() {
        return Err(Error::DimensionMismatch {
            expected: u.goods(),
            found: x.len(),
        });
    }
    if !is_nonneg(x) {
        return Err(Error::Precondition(format!(
            "bundle {} has a negative quantity",
            format_vector(x)
        )));
    }
    Ok(u.pieces
        .iter()
        .map(|p| dot(&p.gradient, x) + &p.offset)
        .min()
        .expect("nonempty"))
}

/// Every piece's gradient is strictly positive, which makes `u` strictly
/// monotonic. `false` is inconclusive.
pub fn strict_monotonicity_sufficient(u: &PlcUtility) -> bool {
    u.pieces.iter().all(|p| is_strictly_positive(&p.gradient))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Economy {
    goods: usize,
    utilities: Vec<PlcUtility>,
    endowments: Vec<Vector>,
    total: Vector,
}

impl Economy {
    /// Validates the data and shifts every utility so that `u_i(0) = 0`.
    pub fn new(utilities: Vec<PlcUtility>, endowments: Vec<Vector>) -> Result<Self> {
        if utilities.is_empty() {
            return Err(Error::Precondition("an economy needs at least one agent".into()));
        }
        if utilities.len() != endowments.len() {
            return Err(Error::DimensionMismatch {
                expected: utilities.len(),
                found: endowments.len(),
            });
        }
        let goods = utilities[0].goods();
        if goods == 0 {
            return Err(Error::Precondition("an economy needs at least one good".into()));
        }
        for (i, (u, e)) in utilities.iter().zip(&endowments).enumerate() {
            for len in [u.goods(), e.len()] {
                if len != goods {
                    return Err(Error::DimensionMismatch {
                        expected: goods,
                        found: len,
                    });
                }
            }
            if !is_nonneg(e) || is_zero(e) {
                return Err(Error::Precondition(format!(
                    "endowment of agent {} must be nonnegative and nonzero",
                    i + 1
                )));
            }
        }
        let mut total = zeros(goods);
        for e in &endowments {
            for (t, x) in total.iter_mut().zip(e) {
                *t += x;
            }
        }
        Ok(Self {
            goods,
            utilities: utilities.iter().map(PlcUtility::shifted_to_zero).collect(),
            endowments,
            total,
        })
    }

    pub fn from_doc(doc: &EconomyDoc) -> Result<Self> {
        let mut utilities = Vec::with_capacity(doc.agents.len());
        for agent in &doc.agents {
            let u = PlcUtility::new(agent.pieces.iter().map(|p| (p.c.clone(), p.d.clone())).collect())?;
            if u.goods() != doc.goods {
                return Err(Error::DimensionMismatch {
                    expected: doc.goods,
                    found: u.goods(),
                });
            }
            utilities.push(u);
        }
        Self::new(utilities, doc.agents.iter().map(|a| a.endowment.clone()).collect())
    }

    pub fn to_doc(&self) -> EconomyDoc {
        EconomyDoc {
            goods: self.goods,
            agents: self
                .utilities
                .iter()
                .zip(&self.endowments)
                .map(|(u, e)| AgentDoc {
                    pieces: u
                        .pieces
                        .iter()
                        .map(|p| PieceDoc {
                            c: p.gradient.clone(),
                            d: p.offset.clone(),
                        })
                        .collect(),
                    endowment: e.clone(),
                })
                .collect(),
        }
    }

    pub fn agents(&self) -> usize {
        self.utilities.len()
    }

    pub fn goods(&self) -> usize {
        self.goods
    }

    pub fn utilities(&self) -> &[PlcUtility] {
        &self.utilities
    }

    pub fn endowments(&self) -> &[Vector] {
        &self.endowments
    }

    /// `ē = Σ e_i`.
    pub fn total(&self) -> &Vector {
        &self.total
    }

    /// `(u_i(e_i))_i`.
    pub fn endowment_utilities(&self) -> Vector {
        self.utilities
            .iter()
            .zip(&self.endowments)
            .map(|(u, e)| eval_plc(u, e).expect("validated at construction"))
            .collect()
    }

    /// `inf u_i` over bundles in `[0, ē]`, attained piece by piece at a box vertex.
    pub fn lowest_utilities(&self) -> Vector {
        self.utilities
            .iter()
            .map(|u| {
                u.pieces
                    .iter()
                    .map(|p| {
                        p.gradient
                            .iter()
                            .zip(&self.total)
                            .filter(|(c, _)| c.is_negative())
                            .map(|(c, e)| c * e)
                            .sum::<Rational>()
                            + &p.offset
                    })
                    .min()
                    .expect("nonempty")
            })
            .collect()
    }
}

/// Allocation polytope lifted with utility coordinates: variables are the
/// bundles `x_1, …, x_n` (agent-major) followed by `v`, with `x >= 0`,
/// `Σ_i x_i <= ē` and `v_i <= ⟨c_{i,k}, x_i⟩ + d_{i,k}` for every piece.
pub fn lifted_allocation_system(e: &Economy) -> HRep {
    let (n, m) = (e.agents(), e.goods());
    let width = n * m + n;
    let mut h = HRep::new(width);
    for col in 0..n * m {
        let mut row = zeros(width);
        row[col] = -Rational::one();
        h.ineqs.push(Constraint::new(row, Rational::zero()));
    }
    for j in 0..m {
        let mut row = zeros(width);
        for i in 0..n {
            row[i * m + j] = Rational::one();
        }
        h.ineqs.push(Constraint::new(row, e.total[j].clone()));
    }
    for (i, u) in e.utilities.iter().enumerate() {
        for p in &u.pieces {
            let mut row = zeros(width);
            for (j, c) in p.gradient.iter().enumerate() {
                row[i * m + j] = -c;
            }
            row[n * m + i] = Rational::one();
            h.ineqs.push(Constraint::new(row, p.offset.clone()));
        }
    }
    h
}

/// Downward closure of the utility possibility set, by projecting the
/// lifted allocation system onto the utility coordinates.
pub fn build_dc_utility_set(e: &Economy) -> Result<HRep> {
    let (n, m) = (e.agents(), e.goods());
    let keep: IndexSet = (n * m..n * m + n).collect();
    project_eliminate(&lifted_allocation_system(e), &keep)
}

/// `{v ∈ dc(U) | v_i >= inf u_i}`: every utility vector weakly below an
/// attainable one and above each agent's lowest attainable utility.
pub fn utility_set(e: &Economy) -> Result<Polyhedron> {
    let mut h = build_dc_utility_set(e)?;
    for (i, low) in e.lowest_utilities().into_iter().enumerate() {
        let mut row = zeros(e.agents());
        row[i] = -Rational::one();
        h.ineqs.push(Constraint::new(row, -low));
    }
    Polyhedron::from_hrep(&h)
}

/// Checks that Pareto optimality and maximizing a nonzero nonnegative
/// normal agree at every sampled utility vector. Requires every utility to
/// pass [`strict_monotonicity_sufficient`].
pub fn check_up_equals_uplus(e: &Economy, sample: &[Vector]) -> Result<bool> {
    if let Some(i) = e.utilities.iter().position(|u| !strict_monotonicity_sufficient(u)) {
        return Err(Error::Precondition(format!(
            "utility of agent {} is not known to be strictly monotonic",
            i + 1
        )));
    }
    let u = utility_set(e)?.into_arc();
    for v in sample {
        let c = classify(&u, v)?;
        if c.pareto != c.plus {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-agent outcome of the budget problem at the synthesized prices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgentCheck {
    #[serde(with = "crate::io::serde_rational::scalar")]
    pub budget: Rational,
    /// `u_i(e_i)`.
    #[serde(with = "crate::io::serde_rational::scalar")]
    pub endowment_utility: Rational,
    /// Optimal value of `max u_i` over the budget set.
    #[serde(with = "crate::io::serde_rational::scalar")]
    pub attained: Rational,
    /// An optimal bundle of the budget problem.
    #[serde(with = "crate::io::serde_rational::vec")]
    pub demand: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalrasianResult {
    #[serde(with = "crate::io::serde_rational::vec")]
    pub prices: Vector,
    pub agents: Vec<AgentCheck>,
    pub verified: bool,
}

/// `{x >= 0 | u(x) >= level}`.
fn upper_contour(u: &PlcUtility, level: &Rational) -> HRep {
    let m = u.goods();
    let mut h = HRep::new(m);
    for j in 0..m {
        let mut row = zeros(m);
        row[j] = -Rational::one();
        h.ineqs.push(Constraint::new(row, Rational::zero()));
    }
    for p in &u.pieces {
        h.ineqs.push(Constraint::ge(p.gradient.clone(), level - &p.offset));
    }
    h
}

/// `max u(x)` subject to `⟨p, x⟩ <= budget`, `x >= 0`, as the epigraph program.
fn best_affordable(u: &PlcUtility, prices: &[Rational], budget: &Rational) -> Result<(Rational, Vector)> {
    let m = u.goods();
    // Columns: x (m, nonnegative) then t (free).
    let mut objective = zeros(m + 1);
    objective[m] = Rational::one();
    let mut lp = LinearProgram::new(m + 1).maximize(objective);
    lp.nonneg = (0..=m).map(|c| c < m).collect();
    for p in &u.pieces {
        let mut row: Vector = p.gradient.iter().map(|c| -c).collect();
        row.push(Rational::one());
        lp.le.push((row, p.offset.clone()));
    }
    let mut row = prices.to_vec();
    row.push(Rational::zero());
    lp.le.push((row, budget.clone()));
    match lp.solve() {
        Outcome::Optimal { x, value } => Ok((value, x[..m].to_vec())),
        Outcome::Unbounded { .. } => Err(Error::Internal("budget problem unbounded at positive prices".into())),
        Outcome::Infeasible => Err(Error::Internal("budget problem infeasible".into())),
    }
}

/// Strictly positive prices at which the endowment allocation is a Walrasian
/// equilibrium.
///
/// Requires `(u_i(e_i))` to be Pareto optimal. Builds the upper contour sets
/// `A_i`, their sum `A`, checks that `ē` is minimal in `A`, takes a strictly
/// positive normal of `dc(-A)` at `-ē`, and re-solves every agent's budget
/// problem at those prices.
pub fn second_welfare_prices(e: &Economy) -> Result<WalrasianResult> {
    let levels = e.endowment_utilities();
    let dc = build_dc_utility_set(e)?;
    let dom = is_maximal(&dc, &levels)?;
    if !dom.maximal {
        let d = dom
            .dominator
            .ok_or_else(|| Error::Internal("dominated without a dominator".into()))?;
        return Err(Error::NotMaximal {
            dominator: format_vector(&d),
        });
    }

    let contours: Vec<HRep> = e
        .utilities
        .iter()
        .zip(&levels)
        .map(|(u, level)| upper_contour(u, level))
        .collect();
    let sum = minkowski_sum_all(&contours)?;
    let m = e.goods();
    if !sum.contains(&e.total) {
        return Err(Error::Internal(
            "aggregate endowment outside the sum of upper contour sets".into(),
        ));
    }

    let mut below = sum.linear_program().maximize(vec![-Rational::one(); m]);
    for j in 0..m {
        let mut row = zeros(m);
        row[j] = Rational::one();
        below.le.push((row, e.total[j].clone()));
    }
    let total: Rational = e.total.iter().sum();
    match below.solve() {
        Outcome::Optimal { x, value } if -&value < total => {
            return Err(Error::NotMinimal {
                witness: format_vector(&x),
            })
        }
        Outcome::Optimal { .. } => {}
        _ => return Err(Error::Internal("minimality program is not bounded and feasible".into())),
    }

    let reflected = Polyhedron::from_hrep(&downward_closure_hrep(&sum.negated())?)?.into_arc();
    let corner: Vector = e.total.iter().map(|x| -x).collect();
    let cone = normal_cone_at(&minimal_face_at(&reflected, &corner)?);
    let prices = strictly_positive_in_cone(&cone)
        .ok_or_else(|| Error::NoPositiveNormal(format!("at {}", format_vector(&corner))))?;

    let jobs: Vec<usize> = (0..e.agents()).collect();
    let checks = par::map(&jobs, |&i| {
        let budget = dot(&prices, &e.endowments[i]);
        best_affordable(&e.utilities[i], &prices, &budget).map(|(attained, demand)| AgentCheck {
            budget,
            endowment_utility: levels[i].clone(),
            attained,
            demand,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let verified = checks.iter().all(|c| c.attained == c.endowment_utility);
    Ok(WalrasianResult {
        prices,
        agents: checks,
        verified,
    })
}
