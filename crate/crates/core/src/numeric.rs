//! Vector and matrix primitives: top/bottom, Hilbert's seminorm, stochastic
//! matrices, the Dobrushin ergodicity coefficient and invariant measures.

use std::ops::Deref;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{convert, Rational, Scalar};

/// A finite, nonempty real vector indexed by states.
#[derive(Debug, Clone, PartialEq)]
pub struct Valuation<S>(Vec<S>);

impl<S: Scalar> Valuation<S> {
    pub fn new(entries: Vec<S>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyValuation);
        }
        if let Some(i) = entries.iter().position(|x| !x.is_finite_value()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self(entries))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![S::zero(); n])
    }

    pub fn into_inner(self) -> Vec<S> {
        self.0
    }
}

impl<S> Deref for Valuation<S> {
    type Target = [S];

    fn deref(&self) -> &[S] {
        &self.0
    }
}

/// Largest entry.
pub fn top<S: Scalar>(v: &[S]) -> Result<S> {
    let (first, rest) = v.split_first().ok_or(Error::EmptyValuation)?;
    Ok(rest.iter().fold(first.clone(), |m, x| S::max_of(m, x.clone())))
}

/// Smallest entry.
pub fn bottom<S: Scalar>(v: &[S]) -> Result<S> {
    let (first, rest) = v.split_first().ok_or(Error::EmptyValuation)?;
    Ok(rest.iter().fold(first.clone(), |m, x| S::min_of(m, x.clone())))
}

/// `top(v) - bottom(v)`; vanishes exactly on constant vectors.
pub fn hilbert_seminorm<S: Scalar>(v: &[S]) -> Result<S> {
    Ok(top(v)? - bottom(v)?)
}

pub fn sup_norm<S: Scalar>(v: &[S]) -> Result<S> {
    if v.is_empty() {
        return Err(Error::EmptyValuation);
    }
    Ok(v.iter().fold(S::zero(), |m, x| S::max_of(m, x.abs())))
}

/// Entrywise `a - b`.
pub fn difference<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

/// `‖a - b‖_H`.
pub fn hilbert_distance<S: Scalar>(a: &[S], b: &[S]) -> Result<S> {
    if a.len() != b.len() {
        return Err(Error::Dimension { expected: a.len(), got: b.len() });
    }
    hilbert_seminorm(&difference(a, b))
}

/// Adds `c` to every entry.
pub fn shifted<S: Scalar>(v: &[S], c: &S) -> Vec<S> {
    v.iter().map(|x| x.clone() + c.clone()).collect()
}

/// Square row-stochastic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix<S> {
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> StochasticMatrix<S> {
    /// Validates nonnegativity and unit row sums (exact for rationals,
    /// `S::row_sum_tolerance()` otherwise).
    pub fn new(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotStochastic("no rows".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotStochastic(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(j) = row.iter().position(|x| !x.is_finite_value() || *x < S::zero()) {
                return Err(Error::NotStochastic(format!("entry ({i},{j}) is negative or non-finite")));
            }
            let sum = row.iter().fold(S::zero(), |acc, x| acc + x.clone());
            if (sum.clone() - S::one()).abs() > S::row_sum_tolerance() {
                return Err(Error::RowSum { location: format!("row {i}"), sum: sum.to_string() });
            }
        }
        Ok(Self { rows })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
            .collect();
        Self { rows }
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<Vec<S>>) -> Self {
        Self { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.rows[i][j]
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: v.len() });
        }
        Ok(self.rows.iter().map(|row| dot(row, v)).collect())
    }

    /// Matrix product `self * other`; stochastic matrices are closed under it.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.dim();
        if other.dim() != n {
            return Err(Error::Dimension { expected: n, got: other.dim() });
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                (0..n)
                    .map(|j| {
                        row.iter()
                            .zip(&other.rows)
                            .fold(S::zero(), |acc, (a, r)| acc + a.clone() * r[j].clone())
                    })
                    .collect()
            })
            .collect();
        Ok(Self { rows })
    }

    /// `theta * I + (1 - theta) * self`.
    pub fn damped(&self, theta: &S) -> Self {
        let keep = S::one() - theta.clone();
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, x)| {
                        let d = keep.clone() * x.clone();
                        if i == j {
                            d + theta.clone()
                        } else {
                            d
                        }
                    })
                    .collect()
            })
            .collect();
        Self { rows }
    }

    pub fn is_positive(&self) -> bool {
        self.rows.iter().flatten().all(|x| *x > S::zero())
    }

    pub fn map<T: Scalar>(&self) -> StochasticMatrix<T> {
        StochasticMatrix { rows: self.rows.iter().map(|r| r.iter().map(convert).collect()).collect() }
    }

    /// Support digraph adjacency: `succ[i]` lists `j` with `P_ij > 0`.
    pub fn support(&self) -> Vec<Vec<usize>> {
        self.rows
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, x)| **x > S::zero()).map(|(j, _)| j).collect())
            .collect()
    }
}

pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Dobrushin ergodicity coefficient `1 - min_{i<j} Σ_k min(M_ik, M_jk)`.
pub fn dobrushin_delta<S: Scalar>(m: &StochasticMatrix<S>) -> Result<S> {
    let n = m.dim();
    if n < 2 {
        return Err(Error::TooFewRows);
    }
    let mut min_overlap: Option<S> = None;
    for i in 0..n {
        for j in i + 1..n {
            let overlap = m.rows[i]
                .iter()
                .zip(&m.rows[j])
                .fold(S::zero(), |acc, (a, b)| acc + S::min_of(a.clone(), b.clone()));
            min_overlap = Some(match min_overlap {
                Some(cur) => S::min_of(cur, overlap),
                None => overlap,
            });
        }
    }
    Ok(S::one() - min_overlap.expect("n >= 2"))
}

/// Largest size accepted by [`dobrushin_bruteforce`].
pub const BRUTEFORCE_MAX_DIM: usize = 20;

/// `max_{u ∈ {0,1}^n} ‖M u‖_H`, the Hilbert operator seminorm by enumeration
/// of the extreme points of the unit ball.
pub fn dobrushin_bruteforce<S: Scalar>(m: &StochasticMatrix<S>) -> Result<S> {
    let n = m.dim();
    if n > BRUTEFORCE_MAX_DIM {
        return Err(Error::OracleSizeLimit(format!("n = {n} exceeds {BRUTEFORCE_MAX_DIM}")));
    }
    let mut best = S::zero();
    for mask in 0u32..(1u32 << n) {
        let u: Vec<S> = (0..n).map(|k| if mask >> k & 1 == 1 { S::one() } else { S::zero() }).collect();
        let image = m.mul_vec(&u)?;
        best = S::max_of(best, hilbert_seminorm(&image)?);
    }
    Ok(best)
}

/// Invariant probability vector of a unichain matrix.
///
/// Solves `(Pᵀ - I) π = 0` with the last equation replaced by `Σ π = 1`;
/// exact scalars go through fraction-free elimination.
pub fn stationary_distribution<S: Scalar>(p: &StochasticMatrix<S>) -> Result<Vec<S>> {
    if S::EXACT {
        let pi = stationary_distribution_exact(p)?;
        Ok(pi.iter().map(S::from_rational).collect())
    } else {
        stationary_distribution_float(p)
    }
}

/// Exact invariant measure of the rational image of `p`.
pub fn stationary_distribution_exact<S: Scalar>(p: &StochasticMatrix<S>) -> Result<Vec<Rational>> {
    let n = p.dim();
    let rational: Vec<Vec<Rational>> = p
        .rows
        .iter()
        .map(|r| r.iter().map(|x| x.to_rational().expect("finite")).collect())
        .collect();
    let mut system = invariant_system(n, |i, j| rational[i][j].clone());
    let integer_rows: Vec<Vec<BigInt>> = system.drain(..).map(|row| clear_denominators(&row)).collect();
    bareiss_solve(integer_rows)
}

/// Augmented rows `[Pᵀ - I | 0]` with the last row `[1 … 1 | 1]`.
fn invariant_system<S: Scalar>(n: usize, entry: impl Fn(usize, usize) -> S) -> Vec<Vec<S>> {
    let mut a = Vec::with_capacity(n);
    for row in 0..n {
        let mut r = Vec::with_capacity(n + 1);
        for col in 0..n {
            if row == n - 1 {
                r.push(S::one());
            } else {
                let mut v = entry(col, row);
                if row == col {
                    v = v - S::one();
                }
                r.push(v);
            }
        }
        r.push(if row == n - 1 { S::one() } else { S::zero() });
        a.push(r);
    }
    a
}

fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// Bareiss elimination on an integer augmented system `[A | b]`, then exact
/// back substitution.
fn bareiss_solve(mut a: Vec<Vec<BigInt>>) -> Result<Vec<Rational>> {
    let n = a.len();
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot_row = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(Error::MultipleInvariantMeasures)?;
        a.swap(k, pivot_row);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut rhs = Rational::from_integer(a[i][n].clone());
        for j in i + 1..n {
            rhs -= Rational::from_integer(a[i][j].clone()) * &x[j];
        }
        x[i] = rhs / Rational::from_integer(a[i][i].clone());
    }
    Ok(x)
}

fn stationary_distribution_float<S: Scalar>(p: &StochasticMatrix<S>) -> Result<Vec<S>> {
    let n = p.dim();
    let mut a = invariant_system(n, |i, j| p.rows[i][j].clone());
    let tol = S::pivot_tolerance();
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&x, &y| a[x][k].abs().partial_cmp(&a[y][k].abs()).expect("finite"))
            .expect("nonempty range");
        if a[pivot_row][k].abs() <= tol {
            return Err(Error::MultipleInvariantMeasures);
        }
        a.swap(k, pivot_row);
        for i in k + 1..n {
            let factor = a[i][k].clone() / a[k][k].clone();
            if factor.is_zero() {
                continue;
            }
            for j in k..=n {
                let v = a[i][j].clone() - factor.clone() * a[k][j].clone();
                a[i][j] = v;
            }
        }
    }
    let mut x = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut rhs = a[i][n].clone();
        for j in i + 1..n {
            rhs = rhs - a[i][j].clone() * x[j].clone();
        }
        x[i] = rhs / a[i][i].clone();
    }
    for v in x.iter_mut() {
        if *v < S::zero() && v.abs() <= tol {
            *v = S::zero();
        }
    }
    Ok(x)
}

/// Exact long-run average payoff `π·r` of a unichain matrix.
pub fn mean_payoff_exact<S: Scalar>(p: &StochasticMatrix<S>, r: &[S]) -> Result<Rational> {
    if r.len() != p.dim() {
        return Err(Error::Dimension { expected: p.dim(), got: r.len() });
    }
    let finals = crate::structure::final_classes_of_support(&p.support());
    if finals.len() > 1 {
        return Err(Error::Multichain(finals));
    }
    let pi = stationary_distribution_exact(p)?;
    Ok(pi.iter().zip(r).fold(Rational::zero(), |acc, (a, b)| acc + a * convert::<S, Rational>(b)))
}
