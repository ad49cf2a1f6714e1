//! Sign determination from Tarski queries: sign conditions, adapted
//! families, matrices of signs and the incremental step.
//!
//! Sign conditions are ordered lexicographically with `0 < 1 < −1`,
//! exponent vectors with `0 < 1 < 2`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::linalg::{row_rank_profile, solve};
use crate::matrix::{kron, Matrix};

pub type SignCondition = Vec<i8>;
pub type Exponent = Vec<u8>;

fn sign_rank(s: i8) -> u8 {
    match s {
        0 => 0,
        1 => 1,
        _ => 2,
    }
}

pub fn cmp_signs(a: &[i8], b: &[i8]) -> Ordering {
    a.iter().map(|&s| sign_rank(s)).cmp(b.iter().map(|&s| sign_rank(s)))
}

pub fn sort_signs(sigma: &mut [SignCondition]) {
    sigma.sort_by(|a, b| cmp_signs(a, b));
}

/// `Ada(Σ)` by recursion on the first coordinate.  `Σ = {()}` gives `{()}`.
pub fn ada(sigma: &[SignCondition]) -> Vec<Exponent> {
    if sigma.is_empty() {
        return Vec::new();
    }
    if sigma[0].is_empty() {
        return vec![Vec::new()];
    }
    if sigma[0].len() == 1 {
        let mut distinct: Vec<i8> = sigma.iter().map(|s| s[0]).collect();
        distinct.sort();
        distinct.dedup();
        return (0..distinct.len() as u8).map(|a| vec![a]).collect();
    }
    let mut tails: Vec<(SignCondition, usize)> = Vec::new();
    for s in sigma {
        let tail = s[1..].to_vec();
        match tails.iter_mut().find(|(t, _)| *t == tail) {
            Some((_, k)) => *k += 1,
            None => tails.push((tail, 1)),
        }
    }
    tails.sort_by(|a, b| cmp_signs(&a.0, &b.0));
    let mut out = Vec::new();
    for (lead, min_ext) in [(0u8, 1usize), (1, 2), (2, 3)] {
        let sub: Vec<SignCondition> = tails.iter().filter(|(_, k)| *k >= min_ext).map(|(t, _)| t.clone()).collect();
        for rest in ada(&sub) {
            let mut a = vec![lead];
            a.extend(rest);
            out.push(a);
        }
    }
    out
}

/// `σ^α = ∏ σ(k)^α(k)` with `0^0 = 1`.
pub fn sign_power(sigma: &[i8], alpha: &[u8]) -> i64 {
    let mut v = 1i64;
    for (&s, &a) in sigma.iter().zip(alpha) {
        if a == 0 {
            continue;
        }
        if s == 0 {
            return 0;
        }
        if s < 0 && a % 2 == 1 {
            v = -v;
        }
    }
    v
}

/// Entry `(i, j)` is `σ_j^{α_i}`.
pub fn mat_of_signs(a: &[Exponent], sigma: &[SignCondition]) -> Matrix<i64> {
    Matrix::from_fn(a.len(), sigma.len(), |i, j| sign_power(&sigma[j], &a[i]))
}

/// Solves the base system for one polynomial:
/// `[[1,1,1],[0,1,−1],[0,1,1]]·(c₀, c₊, c₋) = (TQ(1), TQ(g), TQ(g²))`.
pub fn solve_base_queries(tq1: i64, tqg: i64, tqg2: i64) -> Result<(i64, i64, i64)> {
    let c_eq = tq1 - tqg2;
    let (p2, n2) = (tqg2 + tqg, tqg2 - tqg);
    if c_eq < 0 || p2 < 0 || n2 < 0 || p2 % 2 != 0 {
        return Err(Error::InconsistentQueries(format!("({tq1}, {tqg}, {tqg2}) has no non-negative integer solution")));
    }
    Ok((c_eq, p2 / 2, n2 / 2))
}

fn to_rat(m: &Matrix<i64>) -> Matrix<BigRational> {
    m.map(|&x| BigRational::from_integer(BigInt::from(x)))
}

/// Solves `M·c = T` over the integers, insisting on non-negative integral
/// counts.
pub fn solve_counts(m: &Matrix<i64>, t: &[i64]) -> Result<Vec<i64>> {
    if m.rows() == 0 {
        return Ok(Vec::new());
    }
    let tr: Vec<BigRational> = t.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
    let c = solve(&to_rat(m), &tr).ok_or_else(|| Error::InternalConsistency("singular matrix of signs".into()))?;
    c.iter()
        .map(|x| {
            if !x.is_integer() || x.is_negative() {
                Err(Error::InconsistentQueries(format!("count {x} is not a non-negative integer")))
            } else {
                i64::try_from(x.to_integer()).map_err(|_| Error::InconsistentQueries("count overflow".into()))
            }
        })
        .collect()
}

/// Keeps the columns with nonzero counts, then the rows of the row rank
/// profile; returns the pruned `(Σ, Ada, Mat, counts)`.
pub fn prune(
    sigma: &[SignCondition],
    adapted: &[Exponent],
    m: &Matrix<i64>,
    keep: &[bool],
) -> (Vec<SignCondition>, Vec<Exponent>, Matrix<i64>) {
    let cols: Vec<usize> = (0..sigma.len()).filter(|&j| keep[j]).collect();
    let all_rows: Vec<usize> = (0..adapted.len()).collect();
    let reduced = m.submatrix(&all_rows, &cols);
    let rows = row_rank_profile(&to_rat(&reduced));
    let new_sigma = cols.iter().map(|&j| sigma[j].clone()).collect();
    let new_ada = rows.iter().map(|&i| adapted[i].clone()).collect();
    (new_sigma, new_ada, reduced.submatrix(&rows, &(0..cols.len()).collect::<Vec<_>>()))
}

/// `Σ`, `Ada(Σ)`, `Mat(Ada(Σ), Σ)` and the counts `c(Σ, Z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignDetState {
    pub sigma: Vec<SignCondition>,
    pub ada: Vec<Exponent>,
    pub mat: Matrix<i64>,
    pub counts: Vec<i64>,
}

impl SignDetState {
    /// The state for an empty list of polynomials on a set of `size` points:
    /// the single empty sign condition.
    pub fn initial(size: i64) -> Self {
        if size == 0 {
            return SignDetState { sigma: Vec::new(), ada: Vec::new(), mat: Matrix::new(0, 0, Vec::new()), counts: Vec::new() };
        }
        SignDetState { sigma: vec![Vec::new()], ada: vec![Vec::new()], mat: Matrix::new(1, 1, vec![1]), counts: vec![size] }
    }

    pub fn len(&self) -> usize {
        self.sigma.first().map_or(0, |s| s.len())
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }
}

/// One step of incremental sign determination for a new polynomial `Q`
/// prepended to the current list.  `tq(α)` must return the Tarski query of
/// `Q^{α(0)} · ∏ Q_k^{α(k)}` on the common point set.
pub fn signdet_step(state: &SignDetState, mut tq: impl FnMut(&[u8]) -> Result<i64>) -> Result<SignDetState> {
    if state.sigma.is_empty() {
        return Ok(state.clone());
    }
    let width = state.len();
    let base = |a: u8| {
        let mut alpha = vec![0u8; width + 1];
        alpha[0] = a;
        alpha
    };
    let (c0, cp, cn) = solve_base_queries(tq(&base(0))?, tq(&base(1))?, tq(&base(2))?)?;
    let s: Vec<SignCondition> = [(0i8, c0), (1, cp), (-1, cn)].iter().filter(|(_, c)| *c > 0).map(|&(v, _)| vec![v]).collect();
    let a = ada(&s);
    let mut alphas = Vec::with_capacity(a.len() * state.ada.len());
    for x in &a {
        for beta in &state.ada {
            let mut alpha = x.clone();
            alpha.extend_from_slice(beta);
            alphas.push(alpha);
        }
    }
    let mut sigma = Vec::with_capacity(s.len() * state.sigma.len());
    for x in &s {
        for rest in &state.sigma {
            let mut sg = x.clone();
            sg.extend_from_slice(rest);
            sigma.push(sg);
        }
    }
    let m = kron(&mat_of_signs(&a, &s), &state.mat);
    let t: Vec<i64> = alphas.iter().map(|al| tq(al)).collect::<Result<_>>()?;
    let c = solve_counts(&m, &t)?;
    let keep: Vec<bool> = c.iter().map(|&x| x > 0).collect();
    let (sigma, adapted, mat) = prune(&sigma, &alphas, &m, &keep);
    let counts = c.into_iter().filter(|&x| x > 0).collect();
    Ok(SignDetState { sigma, ada: adapted, mat, counts })
}

/// Tarski query on an explicit list of sign vectors (one per point).
pub fn tq_from_signs(points: &[SignCondition], alpha: &[u8]) -> i64 {
    points.iter().map(|s| sign_power(s, alpha)).sum()
}

/// Realizable sign conditions and their counts by direct enumeration.
pub fn exhaustive_signs(points: &[SignCondition]) -> (Vec<SignCondition>, Vec<i64>) {
    let mut sigma: Vec<SignCondition> = points.to_vec();
    sort_signs(&mut sigma);
    sigma.dedup();
    let counts = sigma.iter().map(|s| points.iter().filter(|p| *p == s).count() as i64).collect();
    (sigma, counts)
}

/// Whether `Mat(a, sigma)` is square and invertible.
pub fn is_adapted(a: &[Exponent], sigma: &[SignCondition]) -> bool {
    a.len() == sigma.len() && row_rank_profile(&to_rat(&mat_of_signs(a, sigma))).len() == a.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_queries() {
        assert_eq!(solve_base_queries(3, 1, 3).unwrap(), (0, 2, 1));
        assert_eq!(solve_base_queries(2, 0, 2).unwrap(), (0, 1, 1));
        assert_eq!(solve_base_queries(5, 0, 0).unwrap(), (5, 0, 0));
        assert!(solve_base_queries(1, 2, 1).is_err());
        assert!(solve_base_queries(2, 1, 2).is_err());
    }

    #[test]
    fn adapted_families() {
        assert_eq!(ada(&[vec![0], vec![1], vec![-1]]), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(ada(&[vec![1]]), vec![vec![0]]);
        let sigma = vec![vec![0, 1], vec![1, 1], vec![1, -1]];
        let a = ada(&sigma);
        assert_eq!(a, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert!(is_adapted(&a, &sigma));
    }

    #[test]
    fn matrix_of_signs() {
        let m = mat_of_signs(&[vec![0], vec![1], vec![2]], &[vec![0], vec![1], vec![-1]]);
        assert_eq!(m.to_rows(), vec![vec![1, 1, 1], vec![0, 1, -1], vec![0, 1, 1]]);
        assert_eq!(mat_of_signs(&[vec![0, 0]], &[vec![-1, 0]]).to_rows(), vec![vec![1]]);
    }

    #[test]
    fn first_step_on_three_points() {
        let pts = vec![vec![1i8], vec![1], vec![-1]];
        let st = signdet_step(&SignDetState::initial(3), |a| Ok(tq_from_signs(&pts, a))).unwrap();
        assert_eq!(st.sigma, vec![vec![1], vec![-1]]);
        assert_eq!(st.counts, vec![2, 1]);
        assert_eq!(st.ada, vec![vec![0], vec![1]]);

        let empty = signdet_step(&SignDetState::initial(0), |_| Ok(0)).unwrap();
        assert!(empty.sigma.is_empty());
    }

    #[test]
    fn repeated_polynomial_stays_diagonal() {
        // second polynomial equal to the first
        let signs = [1i8, -1, 1, 0];
        let pts1: Vec<SignCondition> = signs.iter().map(|&s| vec![s]).collect();
        let pts2: Vec<SignCondition> = signs.iter().map(|&s| vec![s, s]).collect();
        let st = signdet_step(&SignDetState::initial(4), |a| Ok(tq_from_signs(&pts1, a))).unwrap();
        let st = signdet_step(&st, |a| Ok(tq_from_signs(&pts2, a))).unwrap();
        assert!(st.sigma.iter().all(|s| s[0] == s[1]));
        assert_eq!(st.counts.iter().sum::<i64>(), 4);
        let (sigma, counts) = exhaustive_signs(&pts2);
        assert_eq!(st.sigma, sigma);
        assert_eq!(st.counts, counts);
    }
}
