//! Exact rational scalars, vectors and small dense linear algebra.
//!
//! Everything in the crate is built on [`Rational`], an arbitrary precision
//! fraction kept in lowest terms with a positive denominator. Vectors are plain
//! `Vec<Rational>`; the helpers here treat slices as column vectors.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary precision rational, always normalized (gcd 1, denominator > 0).
pub type Rational = BigRational;

/// Dense vector of rationals.
pub type Vector = Vec<Rational>;

/// Sorted set of coordinate or constraint indices (0-based).
pub type IndexSet = BTreeSet<usize>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d`; panics when `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zeros(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

/// Builds a vector from integer entries.
pub fn ivec(entries: &[i64]) -> Vector {
    entries.iter().map(|&x| int(x)).collect()
}

/// Largest decimal exponent accepted by [`parse_rational`].
pub const MAX_DECIMAL_EXPONENT: i64 = 10_000;

/// Parses `"7"`, `"-3/4"` or a finite decimal such as `"0.125"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not an exact rational: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().map_err(|_| bad())?;
        let den: BigInt = q.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            if exp.abs() > MAX_DECIMAL_EXPONENT {
                return Err(Error::Parse(format!("exponent too large in {text:?}")));
            }
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, fraction) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && fraction.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(fraction.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("0{whole}{fraction}").parse().map_err(|_| bad())?;
    let scale = exponent - fraction.len() as i64;
    let ten = BigInt::from(10);
    let magnitude = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(if negative { -magnitude } else { magnitude })
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `(a, b, c)` rendering used in reports.
pub fn format_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(","))
}

fn check_dims(a: &[Rational], b: &[Rational]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

/// Exact `Σ a_i b_i`.
pub fn inner_product(a: &[Rational], b: &[Rational]) -> Result<Rational> {
    check_dims(a, b)?;
    Ok(dot(a, b))
}

/// Inner product without the dimension check; callers guarantee equal lengths.
pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Indices of the nonzero entries.
pub fn support(v: &[Rational]) -> IndexSet {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect()
}

/// The 0/1 vector of `set` in dimension `n`.
pub fn indicator(set: &IndexSet, n: usize) -> Result<Vector> {
    if let Some(&bad) = set.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: bad, len: n });
    }
    Ok((0..n)
        .map(|i| {
            if set.contains(&i) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect())
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(alpha: &Rational, v: &[Rational]) -> Vector {
    v.iter().map(|x| alpha * x).collect()
}

pub fn neg(v: &[Rational]) -> Vector {
    v.iter().map(|x| -x).collect()
}

pub fn is_zero(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `v >= 0` componentwise.
pub fn is_nonneg(v: &[Rational]) -> bool {
    v.iter().all(|x| !x.is_negative())
}

/// `v > 0`: nonnegative and nonzero.
pub fn is_semipositive(v: &[Rational]) -> bool {
    is_nonneg(v) && !is_zero(v)
}

/// `v >> 0`: every entry strictly positive.
pub fn is_strictly_positive(v: &[Rational]) -> bool {
    v.iter().all(Signed::is_positive)
}

/// `a > b` in the Pareto order: `a >= b` and `a != b`.
pub fn dominates(a: &[Rational], b: &[Rational]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x >= y) && a != b
}

/// Smallest positive multiple of `v` with integer entries of gcd 1.
///
/// The zero vector is returned unchanged.
pub fn primitive(v: &[Rational]) -> Vector {
    if is_zero(v) {
        return v.to_vec();
    }
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| Rational::from_integer(x / &gcd)).collect()
}

/// Multiplier `s > 0` such that `s * v` is [`primitive`].
pub fn primitive_scale(v: &[Rational]) -> Rational {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let gcd = v
        .iter()
        .map(|x| (x * &lcm).to_integer())
        .fold(BigInt::zero(), |acc, x| acc.gcd(&x));
    if gcd.is_zero() {
        Rational::one()
    } else {
        Rational::new(lcm, gcd)
    }
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vector], ncols: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut m: Vec<Vector> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vector], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x | rows · x = 0}`.
pub fn nullspace(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = zeros(ncols);
            x[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect()
}

/// Orthogonal projection of `v` onto the complement of `span(basis)`.
pub fn project_out(v: &[Rational], basis: &[Vector]) -> Vector {
    if basis.is_empty() {
        return v.to_vec();
    }
    let ortho = gram_schmidt(basis);
    let mut out = v.to_vec();
    for b in &ortho {
        let coef = dot(&out, b) / dot(b, b);
        if !coef.is_zero() {
            for (x, y) in out.iter_mut().zip(b) {
                *x -= &coef * y;
            }
        }
    }
    out
}

/// Orthogonal (not normalized) basis of `span(vs)`.
pub fn gram_schmidt(vs: &[Vector]) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for b in &out {
            let coef = dot(&w, b) / dot(b, b);
            if !coef.is_zero() {
                for (x, y) in w.iter_mut().zip(b) {
                    *x -= &coef * y;
                }
            }
        }
        if !is_zero(&w) {
            out.push(w);
        }
    }
    out
}

/// Solves `rows · x = rhs` for one solution, or `None` when inconsistent.
pub fn solve(rows: &[Vector], rhs: &[Rational], ncols: usize) -> Option<Vector> {
    let augmented: Vec<Vector> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let (r, pivots) = rref(&augmented, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = zeros(ncols);
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Ceiling of a rational as a rational integer.
pub fn ceil(x: &Rational) -> Rational {
    x.ceil()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inner_product_examples() {
        assert_eq!(inner_product(&ivec(&[1, 0]), &ivec(&[1, 1])).unwrap(), int(1));
        let u = vec![frac(1, 2), frac(1, 2), frac(-1, 2)];
        assert_eq!(inner_product(&ivec(&[2, 1, 1]), &u).unwrap(), int(1));
        assert_eq!(inner_product(&ivec(&[1, 1]), &ivec(&[1, 1])).unwrap(), int(2));
    }

    #[test]
    fn inner_product_rejects_mismatch() {
        let err = inner_product(&ivec(&[1, 2]), &ivec(&[1])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 2, found: 1 }));
    }

    #[test]
    fn support_examples() {
        assert_eq!(support(&ivec(&[1, 1, 0])), IndexSet::from([0, 1]));
        assert_eq!(support(&ivec(&[2, 1, 1])), IndexSet::from([0, 1, 2]));
        assert!(support(&ivec(&[0, 0])).is_empty());
    }

    #[test]
    fn indicator_examples() {
        assert_eq!(indicator(&IndexSet::from([0]), 2).unwrap(), ivec(&[1, 0]));
        assert_eq!(indicator(&IndexSet::from([0, 1]), 3).unwrap(), ivec(&[1, 1, 0]));
        assert_eq!(indicator(&IndexSet::new(), 2).unwrap(), ivec(&[0, 0]));
        assert!(matches!(
            indicator(&IndexSet::from([2]), 2),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));
    }

    #[test]
    fn parses_exact_forms() {
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("-3/4").unwrap(), frac(-3, 4));
        assert_eq!(parse_rational("6/-8").unwrap(), frac(-3, 4));
        assert_eq!(parse_rational("0.125").unwrap(), frac(1, 8));
        assert_eq!(parse_rational("-.5").unwrap(), frac(-1, 2));
        assert_eq!(parse_rational("1.5e2").unwrap(), int(150));
        assert_eq!(parse_rational("25e-2").unwrap(), frac(1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rational(&frac(4, -6)), "-2/3");
        assert_eq!(format_rational(&int(5)), "5");
        assert_eq!(format_vector(&[int(3), frac(1, 2)]), "(3,1/2)");
    }

    #[test]
    fn primitive_scaling() {
        assert_eq!(primitive(&[frac(1, 2), frac(3, 4)]), ivec(&[2, 3]));
        assert_eq!(primitive(&ivec(&[-4, 6, 0])), ivec(&[-2, 3, 0]));
        let v = vec![frac(2, 3), frac(-4, 9)];
        assert_eq!(scale(&primitive_scale(&v), &v), primitive(&v));
    }

    #[test]
    fn nullspace_and_solve() {
        let rows = vec![ivec(&[1, 1, 0]), ivec(&[0, 1, 1])];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert!(dot(r, &ns[0]).is_zero());
        }
        let x = solve(&rows, &ivec(&[2, 3]), 3).unwrap();
        assert_eq!(dot(&rows[0], &x), int(2));
        assert_eq!(dot(&rows[1], &x), int(3));
        assert!(solve(&[ivec(&[1, 1]), ivec(&[2, 2])], &ivec(&[1, 3]), 2).is_none());
    }

    #[test]
    fn projection_is_orthogonal() {
        let basis = vec![ivec(&[1, 1, 0])];
        let p = project_out(&ivec(&[2, 0, 5]), &basis);
        assert!(dot(&p, &basis[0]).is_zero());
        assert_eq!(p, ivec(&[1, -1, 5]));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| frac(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert!(a.denom() > &BigInt::zero());
            let s = &a + &b;
            prop_assert_eq!(s.numer().gcd(s.denom()), BigInt::one());
            if !b.is_zero() {
                prop_assert_eq!((&a / &b) * &b, a.clone());
            }
        }

        #[test]
        fn support_is_scale_invariant(
            v in proptest::collection::vec(-3i64..4, 1..6),
            alpha in small_rational(),
        ) {
            prop_assume!(!alpha.is_zero());
            let v = ivec(&v);
            prop_assert_eq!(support(&scale(&alpha, &v)), support(&v));
        }

        #[test]
        fn parse_format_round_trip(x in small_rational()) {
            prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
        }
    }
}
