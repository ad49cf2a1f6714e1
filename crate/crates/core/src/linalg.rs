//! Exact linear algebra: signatures of rational symmetric matrices, ranks,
//! row rank profiles, and leading principal minors of parametric matrices.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hermite::{OpenSetCertificate, ParametricSymMatrix};
use crate::matrix::Matrix;
use crate::poly::{Monomial, Poly};
use crate::ratfn::RatFn;
use crate::upoly::UPoly;

/// `#positive − #negative` eigenvalues.
pub fn signature_exact(s: &Matrix<BigRational>) -> Result<i64> {
    signature_int(&integral_scaling(s))
}

/// The matrix times the (positive) lcm of its entry denominators.
pub fn integral_scaling(s: &Matrix<BigRational>) -> Matrix<BigInt> {
    let den = s.data().iter().fold(BigInt::one(), |d, x| num_integer::Integer::lcm(&d, x.denom()));
    s.map(|x| x.numer() * (&den / x.denom()))
}

/// Signature of an integer symmetric matrix from the signs of its
/// characteristic polynomial: the polynomial is real-rooted, so Descartes'
/// rule counts positive and negative eigenvalues exactly.
pub fn signature_int(s: &Matrix<BigInt>) -> Result<i64> {
    if !s.is_symmetric() {
        return Err(Error::InvalidInput("signature of a non-symmetric matrix".into()));
    }
    let c = charpoly(s);
    let var = |flip: bool| {
        let mut last = 0;
        let mut v = 0;
        for (i, x) in c.iter().enumerate() {
            let mut sg = if x.is_positive() { 1 } else if x.is_negative() { -1 } else { continue };
            if flip && i % 2 == 1 {
                sg = -sg;
            }
            if last != 0 && sg != last {
                v += 1;
            }
            last = sg;
        }
        v
    };
    Ok(var(false) - var(true))
}

/// Coefficients of `det(λI − A)`, leading first, by Berkowitz's
/// division-free algorithm.
pub fn charpoly(a: &Matrix<BigInt>) -> Vec<BigInt> {
    let n = a.rows();
    if n == 0 {
        return vec![BigInt::one()];
    }
    let mut vect = vec![BigInt::one(), -a.get(0, 0)];
    for r in 1..n {
        let mut q = vec![BigInt::one(), -a.get(r, r)];
        let mut v: Vec<BigInt> = (0..r).map(|i| a.get(i, r).clone()).collect();
        for _ in 0..r {
            let dot: BigInt = (0..r).map(|j| a.get(r, j) * &v[j]).sum();
            q.push(-dot);
            v = (0..r).map(|i| (0..r).map(|j| a.get(i, j) * &v[j]).sum()).collect();
        }
        vect = (0..r + 2)
            .map(|i| (0..=i.min(r)).map(|j| &q[i - j] * &vect[j]).sum())
            .collect();
    }
    vect
}

/// Row echelon elimination; returns pivot rows in order of discovery, which
/// is the lexicographically first maximal independent set of rows.
pub fn row_rank_profile(m: &Matrix<BigRational>) -> Vec<usize> {
    // Gaussian elimination on the transpose picks pivot columns greedily
    // left to right, i.e. rows of `m` in order.
    let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut profile = Vec::new();
    for i in 0..m.rows() {
        let mut v = m.row(i).to_vec();
        for (col, b) in &basis {
            if !v[*col].is_zero() {
                let f = &v[*col] / &b[*col];
                for (x, y) in v.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        if let Some(col) = v.iter().position(|x| !x.is_zero()) {
            basis.push((col, v));
            profile.push(i);
        }
    }
    profile
}

pub fn rank(m: &Matrix<BigRational>) -> usize {
    row_rank_profile(m).len()
}

/// Solves `m·x = b` for square invertible `m`; `None` when singular.
pub fn solve(m: &Matrix<BigRational>, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = m.rows();
    assert!(m.is_square() && b.len() == n);
    let mut a: Vec<Vec<BigRational>> = m.to_rows();
    for (row, bi) in a.iter_mut().zip(b) {
        row.push(bi.clone());
    }
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(k, p);
        let piv = a[k][k].clone();
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &piv;
            for j in k..=n {
                if !a[k][j].is_zero() {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    Some((0..n).map(|i| &a[i][n] / &a[i][i]).collect())
}

pub fn determinant(m: &Matrix<BigRational>) -> BigRational {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.to_rows();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else { return BigRational::zero() };
        if p != k {
            a.swap(k, p);
            det = -det;
        }
        let piv = a[k][k].clone();
        det *= &piv;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &piv;
            for j in k..n {
                if !a[k][j].is_zero() {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    det
}

/// Number of sign changes in a sequence of nonzero signs.
pub fn sign_variations(signs: &[i32]) -> usize {
    signs.windows(2).filter(|w| w[0] * w[1] < 0).count()
}

/// Signature from leading principal minors `M_1..M_r` (all nonzero) of a
/// rank-`r` matrix: `r − 2·Var(1, M_1, …, M_r)`.
pub fn signature_from_minors(minor_signs: &[i32]) -> i64 {
    let mut seq = vec![1];
    seq.extend_from_slice(minor_signs);
    minor_signs.len() as i64 - 2 * sign_variations(&seq) as i64
}

/// Invertible rational matrix used for the congruence `Uᵗ·H·U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceSeed {
    pub u: Matrix<BigRational>,
    pub seed: u64,
}

/// Entries are drawn uniformly from `[−2^16, 2^16]`.
pub const CONGRUENCE_BOUND: i64 = 1 << 16;

impl CongruenceSeed {
    pub fn identity(dim: usize) -> Self {
        CongruenceSeed { u: Matrix::identity(dim, &BigRational::one()), seed: 0 }
    }

    /// Draws `U` from a ChaCha stream keyed by `seed`, rejecting singular
    /// matrices.
    pub fn draw(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let u = Matrix::from_fn(dim, dim, |_, _| {
                BigRational::from_integer(BigInt::from(rng.random_range(-CONGRUENCE_BOUND..=CONGRUENCE_BOUND)))
            });
            if dim == 0 || !determinant(&u).is_zero() {
                return CongruenceSeed { u, seed };
            }
        }
    }
}

/// Numerators of the leading principal minors of `Uᵗ·H·U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorSequence {
    pub minors: Vec<Poly>,
    pub rank: usize,
}

/// Denominator factors of `M` (positive, primitive, integer coefficients)
/// with their largest exponents, and `D·M` for `D = ∏ b^e`.
fn clear_denominators(m: &Matrix<RatFn>) -> (Vec<(Poly, u32)>, Matrix<Poly>) {
    let k = m.data()[0].denominator_exponents().len();
    let mut top = vec![0u32; k];
    for e in m.data() {
        if e.is_zero() {
            continue;
        }
        for (t, &x) in top.iter_mut().zip(e.denominator_exponents()) {
            *t = (*t).max(x);
        }
    }
    if top.iter().all(|&x| x == 0) {
        return (Vec::new(), m.map(|e| e.numerator().clone()));
    }
    let basis = basis_of(m);
    let sp = m.data()[0].numerator().space().clone();
    let d = RatFn::new(Poly::one(&sp), top.clone(), basis.clone()).denominator();
    let dr = RatFn::from_poly(d, &basis);
    let p = m.map(|e| {
        e.mul(&dr)
            .as_polynomial()
            .cloned()
            .expect("common denominator clears every entry")
    });
    let factors = basis.iter().zip(&top).filter(|(_, &e)| e > 0).map(|(b, &e)| (positive_primitive(b), e)).collect();
    (factors, p)
}

fn basis_of(m: &Matrix<RatFn>) -> Arc<Vec<Poly>> {
    m.data()[0].basis().clone()
}

/// Divides by the positive rational content, keeping the sign.
fn positive_primitive(p: &Poly) -> Poly {
    let (c, q) = p.primitive_part();
    if c.is_negative() {
        q.neg()
    } else {
        q
    }
}

/// Leading principal minors `M_1..M_r` of `Uᵗ·H·U`, `r = rank`.  Each
/// returned polynomial has the same sign as the corresponding minor wherever
/// both are defined.  With `P = D·M` and `minor_k(M) = minor_k(P)/D^k`, the
/// result is `minor_k(P)·D^(k mod 2)` divided by the largest even power of
/// each denominator factor that divides it.
pub fn leading_principal_minors(h: &ParametricSymMatrix, u: &CongruenceSeed, rank: usize) -> Result<MinorSequence> {
    let d = h.dim();
    if rank == 0 || d == 0 {
        return Ok(MinorSequence { minors: Vec::new(), rank: 0 });
    }
    let (factors, p) = clear_denominators(&h.entries);
    let a = Congruent::new(&p, &u.u);
    let raw = match leading_minors_interpolated(&a, rank, &factors) {
        Some(v) => v,
        None => leading_minors_bareiss(&a.symbolic(), rank)?
            .into_iter()
            .enumerate()
            .map(|(k, p)| strip_even_powers(&times_odd_den(p, k, &factors), &factors))
            .collect(),
    };
    let mut minors = Vec::with_capacity(rank);
    for p in raw {
        if p.is_zero() {
            return Err(Error::ResampleNeeded);
        }
        minors.push(positive_primitive(&p));
    }
    Ok(MinorSequence { minors, rank })
}

/// `Uᵗ·P·U` kept as its two factors, both scaled to integer coefficients
/// by positive constants; `P` is evaluated first and `U` applied to the
/// numbers.
struct Congruent {
    p: Matrix<Poly>,
    /// `None` for the identity.
    u: Option<Vec<Vec<BigInt>>>,
}

impl Congruent {
    fn new(p: &Matrix<Poly>, u: &Matrix<BigRational>) -> Self {
        let mut lcm = BigInt::one();
        for e in p.data() {
            for (_, c) in e.terms() {
                lcm = num_integer::Integer::lcm(&lcm, c.denom());
            }
        }
        let p = p.map(|e| e.scale(&BigRational::from_integer(lcm.clone())));
        let d = u.rows();
        if *u == Matrix::identity(d, &BigRational::one()) {
            return Congruent { p, u: None };
        }
        let lcm = u.data().iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let u = (0..d).map(|i| (0..d).map(|j| (u.get(i, j) * &lcm).to_integer()).collect()).collect();
        Congruent { p, u: Some(u) }
    }

    fn space(&self) -> &Arc<crate::poly::VarSpace> {
        self.p.get(0, 0).space()
    }

    /// Bound on `f` (a degree) of entry `(i, c)`.
    fn entry_degree(&self, i: usize, c: usize, f: &dyn Fn(&Poly) -> usize) -> usize {
        let Some(u) = &self.u else { return f(self.p.get(i, c)) };
        let d = self.p.rows();
        let mut best = 0;
        for r in (0..d).filter(|&r| !u[r][i].is_zero()) {
            for s in (0..d).filter(|&s| !u[s][c].is_zero()) {
                best = best.max(f(self.p.get(r, s)));
            }
        }
        best
    }

    fn symbolic(&self) -> Matrix<Poly> {
        let Some(u) = &self.u else { return self.p.clone() };
        let sp = self.space().clone();
        let um = Matrix::from_rows(
            u.iter().map(|row| row.iter().map(|c| Poly::constant(&sp, BigRational::from_integer(c.clone()))).collect()).collect(),
        );
        um.transpose().mul(&self.p).mul(&um)
    }

    /// The leading `rank × rank` block at an integer parameter point.
    fn block(&self, rank: usize, eta: &[BigInt]) -> Vec<Vec<BigInt>> {
        let Some(u) = &self.u else { return eval_block(&self.p, rank, eta) };
        let d = self.p.rows();
        let pv = eval_block(&self.p, d, eta);
        // (Uᵗ·P)[i][s] for the first `rank` rows, then times U
        let left: Vec<Vec<BigInt>> = (0..rank)
            .map(|i| (0..d).map(|s| (0..d).filter(|&r| !u[r][i].is_zero()).map(|r| &u[r][i] * &pv[r][s]).sum()).collect())
            .collect();
        let mut m = vec![vec![BigInt::zero(); rank]; rank];
        for i in 0..rank {
            for c in i..rank {
                let v: BigInt = (0..d).map(|s| &left[i][s] * &u[s][c]).sum();
                m[c][i] = v.clone();
                m[i][c] = v;
            }
        }
        m
    }
}

/// `p·D` for minors of odd size (`k` counts from zero).
fn times_odd_den(p: Poly, k: usize, factors: &[(Poly, u32)]) -> Poly {
    if k % 2 == 1 {
        return p;
    }
    factors.iter().fold(p, |acc, (b, e)| acc.mul(&b.pow(*e)))
}

fn strip_even_powers(p: &Poly, factors: &[(Poly, u32)]) -> Poly {
    let mut p = p.clone();
    if p.is_zero() {
        return p;
    }
    for (b, _) in factors {
        let b2 = b.mul(b);
        while let Some(q) = p.div_exact(&b2) {
            p = q;
        }
    }
    p
}

/// Bareiss elimination over `Q[y]` without pivoting; the pivots are the
/// leading principal minors.
fn leading_minors_bareiss(a: &Matrix<Poly>, rank: usize) -> Result<Vec<Poly>> {
    let d = a.rows();
    let mut a = a.clone();
    let mut out = Vec::with_capacity(rank);
    let mut prev = Poly::one(a.get(0, 0).space());
    for k in 0..rank {
        let piv = a.get(k, k).clone();
        if piv.is_zero() {
            return Err(Error::ResampleNeeded);
        }
        out.push(piv.clone());
        if k + 1 == rank {
            break;
        }
        for i in k + 1..d {
            for j in i..d {
                let v = a.get(i, j).mul(&piv).sub(&a.get(i, k).mul(a.get(k, j)));
                let v = v.div_exact(&prev).ok_or_else(|| {
                    Error::InternalConsistency("inexact division in fraction-free elimination".into())
                })?;
                a.set(i, j, v.clone());
                if i != j {
                    a.set(j, i, v);
                }
            }
        }
        prev = piv;
    }
    Ok(out)
}

/// Largest evaluation grid the interpolation path accepts.
const MAX_GRID: usize = 2_000_000;

/// `0, 1, −1, 2, −2, …`
fn grid_value(i: usize) -> BigInt {
    let h = i.div_ceil(2) as i64;
    BigInt::from(if i % 2 == 1 { h } else { -h })
}

fn eval_int(p: &Poly, eta: &[BigInt]) -> BigInt {
    let n = p.space().n();
    let mut point = vec![BigRational::zero(); n];
    point.extend(eta.iter().map(|v| BigRational::from_integer(v.clone())));
    p.eval(&point).to_integer()
}

/// Values of the reduced minors `minor_k(A)·D^(k mod 2) / ∏ b^strip` at
/// integer points.  `A` has integer coefficients.
struct Reduced<'a> {
    a: &'a Congruent,
    rank: usize,
    factors: &'a [(Poly, u32)],
    /// Exponent of each factor divided out of each minor; always even.
    strip: Vec<Vec<u32>>,
    /// Bounds on the total degree of each reduced minor.
    total: Vec<usize>,
    /// Direction of the line used where a stripped factor vanishes.
    dir: Vec<BigInt>,
    /// Grid centre; moved off the origin so that stripped factors rarely
    /// vanish on grid points.
    centre: Vec<i64>,
}

impl Reduced<'_> {
    fn nodes(&self, j: usize, m: usize) -> Vec<BigInt> {
        (0..m).map(|i| grid_value(i) + self.centre[j]).collect()
    }

    /// `None` entries where a stripped factor vanishes; `Err` on an inexact
    /// division.
    fn direct(&self, eta: &[BigInt]) -> std::result::Result<Vec<Option<BigInt>>, ()> {
        let raw = leading_minors_int(self.a.block(self.rank, eta));
        let fv: Vec<BigInt> = self.factors.iter().map(|(b, _)| eval_int(b, eta)).collect();
        let dv = fv.iter().zip(self.factors).fold(BigInt::one(), |acc, (v, (_, e))| acc * num_traits::pow(v.clone(), *e as usize));
        let mut out = Vec::with_capacity(self.rank);
        for (k, v) in raw.into_iter().enumerate() {
            let num = if k % 2 == 0 { v * &dv } else { v };
            let den = fv.iter().zip(&self.strip[k]).fold(BigInt::one(), |acc, (f, &e)| acc * num_traits::pow(f.clone(), e as usize));
            if den.is_zero() {
                out.push(None);
                continue;
            }
            let (q, r) = num_integer::Integer::div_rem(&num, &den);
            if !r.is_zero() {
                return Err(());
            }
            out.push(Some(q));
        }
        Ok(out)
    }

    /// All reduced minors at `eta`; where a stripped factor vanishes the
    /// value comes from interpolation along a line through `eta`.
    fn values(&self, eta: &[BigInt]) -> Option<Vec<BigInt>> {
        let vals = self.direct(eta).ok()?;
        if vals.iter().all(Option::is_some) {
            return Some(vals.into_iter().map(Option::unwrap).collect());
        }
        let need: usize = vals.iter().enumerate().filter(|(_, v)| v.is_none()).map(|(k, _)| self.total[k] + 1).max()?;
        let mut nodes: Vec<Vec<BigInt>> = vec![Vec::new(); self.rank];
        let mut ys: Vec<Vec<BigInt>> = vec![Vec::new(); self.rank];
        let mut s = 0i64;
        while nodes.iter().enumerate().any(|(k, n)| vals[k].is_none() && n.len() < self.total[k] + 1) {
            s += 1;
            if s as usize > 4 * need + 16 {
                return None;
            }
            let p: Vec<BigInt> = eta.iter().zip(&self.dir).map(|(e, d)| e + d * s).collect();
            for (k, v) in self.direct(&p).ok()?.into_iter().enumerate() {
                if let (None, Some(v)) = (&vals[k], v) {
                    if nodes[k].len() < self.total[k] + 1 {
                        nodes[k].push(BigInt::from(s));
                        ys[k].push(v);
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(self.rank);
        for (k, v) in vals.into_iter().enumerate() {
            match v {
                Some(v) => out.push(v),
                None => out.push(newton_coefficients(&nodes[k], std::mem::take(&mut ys[k]))?.swap_remove(0)),
            }
        }
        Some(out)
    }
}

/// Multiplicity of each factor in each minor of `A`, read off along a random
/// line, turned into the even exponent stripped from the reduced minor.
fn strip_exponents(a: &Congruent, rank: usize, factors: &[(Poly, u32)], total: &[usize], rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
    if factors.is_empty() {
        return vec![Vec::new(); rank];
    }
    let t = a.space().t();
    let base: Vec<BigInt> = (0..t).map(|_| BigInt::from(rng.random_range(-1024i64..=1024))).collect();
    let dir: Vec<BigInt> = (0..t).map(|_| BigInt::from(rng.random_range(1i64..=1024))).collect();
    let at = |s: i64| -> Vec<BigInt> { base.iter().zip(&dir).map(|(b, d)| b + d * s).collect() };
    let along = |m: usize, f: &dyn Fn(&[BigInt]) -> Vec<BigInt>| -> Vec<UPoly> {
        let xs: Vec<BigInt> = (0..=m as i64).map(BigInt::from).collect();
        let vals: Vec<Vec<BigInt>> = (0..=m as i64).map(|s| f(&at(s))).collect();
        (0..vals[0].len())
            .map(|k| {
                let c = newton_coefficients(&xs, vals.iter().map(|v| v[k].clone()).collect()).expect("integer nodes");
                UPoly::new(c.into_iter().map(BigRational::from_integer).collect())
            })
            .collect()
    };
    let top = total.iter().copied().max().unwrap_or(0);
    let minors = along(top, &|p| leading_minors_int(a.block(rank, p)));
    let bs: Vec<UPoly> = factors
        .iter()
        .map(|(b, _)| along(b.degree().unwrap_or(0) as usize, &|p| vec![eval_int(b, p)]).remove(0))
        .collect();
    minors
        .iter()
        .enumerate()
        .map(|(k, r)| {
            factors
                .iter()
                .zip(&bs)
                .map(|((_, e), b)| {
                    let mut m = if k % 2 == 0 { *e } else { 0 };
                    if b.degree() > 0 && !r.is_zero() {
                        let mut r = r.clone();
                        loop {
                            let (q, rem) = r.div_rem(b);
                            if !rem.is_zero() {
                                break;
                            }
                            m += 1;
                            r = q;
                        }
                    }
                    m - m % 2
                })
                .collect()
        })
        .collect()
}

/// Reduced leading principal minors `1..=rank` of a matrix over `Z[y]` by
/// evaluation on an integer grid and tensor-product interpolation.
///
/// Row sums of the largest entry degrees bound the degree in each parameter
/// but are often far from sharp.  The grid is first sized by the degrees
/// seen along random lines, and the result is checked at random points off
/// the grid; on a mismatch the proven bounds are used.  `None` when the grid
/// would be too large.
fn leading_minors_interpolated(a: &Congruent, rank: usize, factors: &[(Poly, u32)]) -> Option<Vec<Poly>> {
    let (n, t) = (a.space().n(), a.space().t());
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e7e_0b5e);
    let deg = |p: &Poly, j: usize| p.degree_in(n + j).unwrap_or(0) as usize;
    let row_max = |i: usize, k: usize, f: &dyn Fn(&Poly) -> usize| (0..=k).map(|c| a.entry_degree(i, c, f)).max().unwrap();
    let raw_bound = |k: usize, f: &dyn Fn(&Poly) -> usize| -> usize { (0..=k).map(|i| row_max(i, k, f)).sum() };
    let total_deg = |p: &Poly| p.degree().unwrap_or(0) as usize;
    let raw_total: Vec<usize> = (0..rank).map(|k| raw_bound(k, &total_deg)).collect();
    let strip = strip_exponents(a, rank, factors, &raw_total, &mut rng);
    let adjust = |k: usize, raw: usize, f: &dyn Fn(&Poly) -> usize| -> usize {
        let mut up = raw;
        if k % 2 == 0 {
            up += factors.iter().map(|(b, e)| f(b) * *e as usize).sum::<usize>();
        }
        let down: usize = factors.iter().zip(&strip[k]).map(|((b, _), &e)| f(b) * e as usize).sum();
        up.saturating_sub(down)
    };
    let total: Vec<usize> = (0..rank).map(|k| adjust(k, raw_total[k], &total_deg)).collect();
    let bounds: Vec<Vec<usize>> = (0..rank)
        .map(|k| (0..t).map(|j| adjust(k, raw_bound(k, &|p| deg(p, j)), &|p| deg(p, j)).min(total[k])).collect())
        .collect();
    let dir = (0..t).map(|_| BigInt::from(rng.random_range(1i64..=64))).collect();
    let centre = (0..t).map(|_| if factors.is_empty() { 0 } else { rng.random_range(-64i64..=64) }).collect();
    let red = Reduced { a, rank, factors, strip, total, dir, centre };
    let seen = probe_degrees(&red, &bounds, &mut rng)?;
    if let Some(v) = interpolate_minors(&red, &seen) {
        if check_minors(&red, &v, &mut rng) {
            return Some(v);
        }
    }
    if seen == bounds {
        return None;
    }
    let v = interpolate_minors(&red, &bounds)?;
    check_minors(&red, &v, &mut rng).then_some(v)
}

/// The leading `rank × rank` block of a symmetric matrix at an integer
/// parameter point.
fn eval_block(a: &Matrix<Poly>, rank: usize, eta: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); rank]; rank];
    for i in 0..rank {
        for c in i..rank {
            let e = a.get(i, c);
            let v = if e.is_zero() { BigInt::zero() } else { eval_int(e, eta) };
            m[c][i] = v.clone();
            m[i][c] = v;
        }
    }
    m
}

fn random_point(t: usize, rng: &mut ChaCha8Rng) -> Vec<BigInt> {
    (0..t).map(|_| BigInt::from(rng.random_range(-(1i64 << 20)..=(1i64 << 20)))).collect()
}

/// Degree of each minor in each parameter along two random lines, capped by
/// the proven bounds.
fn probe_degrees(red: &Reduced, bounds: &[Vec<usize>], rng: &mut ChaCha8Rng) -> Option<Vec<Vec<usize>>> {
    let (rank, t) = (red.rank, bounds[0].len());
    let mut seen = vec![vec![0usize; t]; rank];
    for j in 0..t {
        let top = bounds.iter().map(|b| b[j]).max().unwrap();
        let xs = red.nodes(j, top + 1);
        for _ in 0..2 {
            let mut eta = random_point(t, rng);
            let mut values = vec![Vec::with_capacity(top + 1); rank];
            for x in &xs {
                eta[j] = x.clone();
                for (k, v) in red.values(&eta)?.into_iter().enumerate() {
                    values[k].push(v);
                }
            }
            for (k, vals) in values.into_iter().enumerate() {
                let m = bounds[k][j] + 1;
                let d = match newton_coefficients(&xs[..m], vals[..m].to_vec()) {
                    Some(c) => c.iter().rposition(|x| !x.is_zero()).unwrap_or(0),
                    None => bounds[k][j],
                };
                seen[k][j] = seen[k][j].max(d);
            }
        }
    }
    Some(seen)
}

/// Compares interpolated minors with direct evaluation at random points.
fn check_minors(red: &Reduced, minors: &[Poly], rng: &mut ChaCha8Rng) -> bool {
    let t = red.a.space().t();
    (0..2).all(|_| {
        let eta = random_point(t, rng);
        let Some(direct) = red.values(&eta) else { return false };
        let q: Vec<BigRational> = eta.iter().map(|v| BigRational::from_integer(v.clone())).collect();
        minors.iter().zip(&direct).all(|(p, v)| p.eval_params(&q) == BigRational::from_integer(v.clone()))
    })
}

/// Interpolation on the tensor grid given by `degs[k][j]`, the degree of
/// minor `k + 1` in parameter `j`.
fn interpolate_minors(red: &Reduced, degs: &[Vec<usize>]) -> Option<Vec<Poly>> {
    let sp = red.a.space().clone();
    let (n, t, rank) = (sp.n(), sp.t(), red.rank);
    let sizes: Vec<usize> = (0..t).map(|j| degs.iter().map(|d| d[j]).max().unwrap() + 1).collect();
    let total = sizes.iter().try_fold(1usize, |acc, &m| acc.checked_mul(m))?;
    if total > MAX_GRID {
        return None;
    }
    let xs: Vec<Vec<BigInt>> = sizes.iter().enumerate().map(|(j, &m)| red.nodes(j, m)).collect();
    let subs: Vec<Vec<usize>> = degs.iter().map(|d| d.iter().map(|&b| b + 1).collect()).collect();
    // each minor keeps only its own sub-grid, in row-major order
    let mut values: Vec<Vec<BigInt>> = subs.iter().map(|s| Vec::with_capacity(s.iter().product())).collect();
    let mut idx = vec![0usize; t];
    for _ in 0..total {
        let eta: Vec<BigInt> = idx.iter().enumerate().map(|(j, &i)| xs[j][i].clone()).collect();
        for (k, v) in red.values(&eta)?.into_iter().enumerate() {
            if idx.iter().zip(&subs[k]).all(|(i, m)| i < m) {
                values[k].push(v);
            }
        }
        for j in (0..t).rev() {
            idx[j] += 1;
            if idx[j] < sizes[j] {
                break;
            }
            idx[j] = 0;
        }
    }
    let out = (0..rank)
        .map(|k| {
            let sub = &subs[k];
            let mut vals = std::mem::take(&mut values[k]);
            tensor_interpolate(&mut vals, sub, &xs)?;
            let mut terms = Vec::new();
            let mut at = vec![0u32; t];
            for c in vals {
                if !c.is_zero() {
                    let mut e = vec![0u32; n];
                    e.extend_from_slice(&at);
                    terms.push((Monomial::from_exponents(e), BigRational::from_integer(c)));
                }
                for j in (0..t).rev() {
                    at[j] += 1;
                    if (at[j] as usize) < sub[j] {
                        break;
                    }
                    at[j] = 0;
                }
            }
            Some(Poly::from_terms(&sp, terms))
        })
        .collect::<Option<Vec<Poly>>>()?;
    Some(out)
}

/// Turns values on a tensor grid (last axis fastest) into coefficients of
/// the interpolating polynomial, one axis at a time.  The polynomial has
/// integer coefficients and the nodes are integers, so every divided
/// difference is an integer; `None` if one is not (a bad degree bound).
fn tensor_interpolate(vals: &mut [BigInt], sizes: &[usize], xs: &[Vec<BigInt>]) -> Option<()> {
    let t = sizes.len();
    for j in 0..t {
        let m = sizes[j];
        let stride: usize = sizes[j + 1..].iter().product();
        let outer: usize = sizes[..j].iter().product();
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * m * stride + inner;
                let ys: Vec<BigInt> = (0..m).map(|i| vals[base + i * stride].clone()).collect();
                for (i, c) in newton_coefficients(&xs[j][..m], ys)?.into_iter().enumerate() {
                    vals[base + i * stride] = c;
                }
            }
        }
    }
    Some(())
}

/// Monomial coefficients of the polynomial through `(xs[i], ys[i])`.
fn newton_coefficients(xs: &[BigInt], mut c: Vec<BigInt>) -> Option<Vec<BigInt>> {
    let m = xs.len();
    for k in 1..m {
        for i in (k..m).rev() {
            let dx = &xs[i] - &xs[i - k];
            let (q, r) = num_integer::Integer::div_rem(&(&c[i] - &c[i - 1]), &dx);
            if !r.is_zero() {
                return None;
            }
            c[i] = q;
        }
    }
    let mut p = vec![BigInt::zero(); m];
    p[0] = c[m - 1].clone();
    for k in (0..m - 1).rev() {
        // p ← p·(z − x_k) + c_k
        let xk = &xs[k];
        for i in (1..m).rev() {
            let shifted = &p[i - 1] - &p[i] * xk;
            p[i] = shifted;
        }
        p[0] = &c[k] - &p[0] * xk;
    }
    Some(p)
}

/// All leading principal minors of an integer matrix: Bareiss pivots while
/// they are nonzero, separate determinants after a zero pivot.
fn leading_minors_int(m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let d = m.len();
    let mut a = m.clone();
    let mut out = Vec::with_capacity(d);
    let mut prev = BigInt::one();
    for k in 0..d {
        let piv = a[k][k].clone();
        out.push(piv.clone());
        if piv.is_zero() {
            for r in k + 1..d {
                let sub: Vec<Vec<BigInt>> = m[..=r].iter().map(|row| row[..=r].to_vec()).collect();
                out.push(det_int(sub));
            }
            return out;
        }
        for i in k + 1..d {
            for j in k + 1..d {
                a[i][j] = (&a[i][j] * &piv - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = piv;
    }
    out
}

/// Determinant by Bareiss elimination with row exchanges.
fn det_int(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let d = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..d {
        let Some(p) = (k..d).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..d {
            for j in k + 1..d {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[d - 1][d - 1]
}

/// Random integer point in `[−bound, bound]^t` avoiding `w_∞` and every
/// denominator of `h`.
fn random_good_point(h: &ParametricSymMatrix, cert: &OpenSetCertificate, rng: &mut ChaCha8Rng) -> Vec<BigRational> {
    let t = h.label.space().t();
    let mut bound = 64i64;
    loop {
        let eta: Vec<BigRational> =
            (0..t).map(|_| BigRational::from_integer(BigInt::from(rng.random_range(-bound..=bound)))).collect();
        if cert.contains(&eta) && h.eval(&eta).is_ok() {
            return eta;
        }
        bound *= 2;
    }
}

/// Rank of `h` over `Q(y)`: ranks at two random points must agree,
/// otherwise fraction-free elimination over `Q[y]` decides.
pub fn rank_parametric(h: &ParametricSymMatrix, cert: &OpenSetCertificate, seed: u64) -> Result<usize> {
    if h.dim() == 0 {
        return Ok(0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_4a7e);
    let e1 = random_good_point(h, cert, &mut rng);
    let e2 = random_good_point(h, cert, &mut rng);
    let r1 = rank(&h.eval(&e1)?);
    let r2 = rank(&h.eval(&e2)?);
    if r1 == r2 {
        return Ok(r1);
    }
    Ok(rank_symbolic(&clear_denominators(&h.entries).1))
}

/// Rank of a polynomial matrix by fraction-free elimination with pivoting.
pub fn rank_symbolic(m: &Matrix<Poly>) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.to_rows();
    let mut r = 0;
    let mut prev: Option<Poly> = None;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in r + 1..rows {
            for j in c + 1..cols {
                let mut v = a[i][j].mul(&piv).sub(&a[i][c].mul(&a[r][j]));
                if let Some(pv) = &prev {
                    v = v.div_exact(pv).expect("Bareiss division is exact");
                }
                a[i][j] = v;
            }
            a[i][c] = Poly::zero(piv.space());
        }
        prev = Some(piv);
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::first_hermite_matrix;
    use crate::matrix::kron;
    use crate::upoly::sign_of;
    use crate::parse::parse_poly;
    use crate::poly::VarSpace;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn qm(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    #[test]
    fn interpolated_minors_match_elimination() {
        let sp = VarSpace::new(&["x"], &["a", "b"]).unwrap();
        let src = [
            ["a^2 - 3*b", "2*a*b + 1/2", "b^3 - a"],
            ["2*a*b + 1/2", "a + b^2", "7"],
            ["b^3 - a", "7", "a^3*b - 2/3"],
        ];
        let m = Matrix::from_rows(
            src.iter().map(|r| r.iter().map(|e| parse_poly(&sp, e).unwrap()).collect()).collect(),
        );
        let m = m.map(|e| e.scale(&q(6)));
        let fast = leading_minors_interpolated(&Congruent::new(&m, &Matrix::identity(3, &q(1))), 3, &[]).unwrap();
        let slow = leading_minors_bareiss(&m, 3).unwrap();
        for (f, s) in fast.iter().zip(&slow) {
            assert_eq!(f, s);
        }
        let u = CongruenceSeed::draw(3, 5).u;
        let c = Congruent::new(&m, &u);
        let fast = leading_minors_interpolated(&c, 3, &[]).unwrap();
        let slow = leading_minors_bareiss(&c.symbolic(), 3).unwrap();
        assert_eq!(fast, slow);
        assert_eq!(leading_minors_int(vec![vec![0.into(), 1.into()], vec![1.into(), 0.into()]]), vec![0.into(), (-1).into()]);
    }

    #[test]
    fn signatures() {
        assert_eq!(signature_exact(&qm(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap(), 3);
        assert_eq!(signature_exact(&qm(&[&[0, 1], &[1, 0]])).unwrap(), 0);
        assert_eq!(signature_exact(&qm(&[&[2, 0], &[0, -8]])).unwrap(), 0);
        assert_eq!(signature_exact(&qm(&[&[2, 0], &[0, 8]])).unwrap(), 2);
        assert_eq!(signature_exact(&qm(&[&[0, 0], &[0, 0]])).unwrap(), 0);
        assert!(signature_exact(&qm(&[&[0, 1], &[2, 0]])).is_err());
    }

    #[test]
    fn rank_profiles() {
        assert_eq!(row_rank_profile(&qm(&[&[1, 1], &[1, 1], &[0, 1]])), vec![0, 2]);
        assert_eq!(row_rank_profile(&qm(&[&[1, 0], &[0, 1]])), vec![0, 1]);
        assert!(row_rank_profile(&qm(&[&[0, 0], &[0, 0]])).is_empty());
    }

    #[test]
    fn kronecker_examples() {
        let b = qm(&[&[1, 2], &[3, 4]]);
        assert_eq!(kron(&qm(&[&[1]]), &b), b);
        let i2 = Matrix::identity(2, &q(1));
        let i3 = Matrix::identity(3, &q(1));
        assert_eq!(kron(&i2, &i3), Matrix::identity(6, &q(1)));
        assert_eq!(kron(&qm(&[&[1, 1], &[0, 1]]), &qm(&[&[2]])), qm(&[&[2, 2], &[0, 2]]));
    }

    fn herm(params: &[&str], f: &str) -> crate::hermite::HermiteData {
        let sp = VarSpace::new(&["x"], params).unwrap();
        first_hermite_matrix(&sp, &[parse_poly(&sp, f).unwrap()]).unwrap()
    }

    #[test]
    fn parametric_minors() {
        let h = herm(&["y"], "x^2 - y");
        let u = CongruenceSeed::identity(2);
        let ms = leading_principal_minors(&h.h1, &u, 2).unwrap();
        let strs: Vec<String> = ms.minors.iter().map(|m| m.to_string()).collect();
        assert_eq!(strs, vec!["1", "y"]);

        let h = herm(&["y1", "y2"], "x^2 + y1*x + y2");
        let ms = leading_principal_minors(&h.h1, &u, 2).unwrap();
        let strs: Vec<String> = ms.minors.iter().map(|m| m.to_string()).collect();
        assert_eq!(strs, vec!["1", "y1^2 - 4*y2"]);
        assert_eq!(rank_parametric(&h.h1, &h.cert, 1).unwrap(), 2);
    }

    #[test]
    fn minors_keep_sign_through_denominators() {
        // y x^2 - 1: H_1 = [[2, 0], [0, 2/y]]
        let h = herm(&["y"], "y*x^2 - 1");
        let ms = leading_principal_minors(&h.h1, &CongruenceSeed::identity(2), 2).unwrap();
        let strs: Vec<String> = ms.minors.iter().map(|m| m.to_string()).collect();
        assert_eq!(strs, vec!["1", "y"]);
        for eta in [-3i64, -1, 2, 5] {
            let e = [q(eta)];
            let s = h.h1.eval(&e).unwrap();
            let d2 = determinant(&s);
            assert_eq!(sign_of(&ms.minors[1].eval_params(&e)), sign_of(&d2));
            assert_eq!(sign_of(&ms.minors[0].eval_params(&e)), 1);
        }
    }

    #[test]
    fn parametric_rank() {
        let sp = VarSpace::new(&["x"], &["y"]).unwrap();
        let p = |s: &str| RatFn::from_poly(parse_poly(&sp, s).unwrap(), &Arc::new(Vec::new()));
        let cert = OpenSetCertificate { w_infinity: Poly::one(&sp), factors: vec![] };
        let h = ParametricSymMatrix {
            entries: Matrix::from_rows(vec![vec![p("y"), p("y")], vec![p("y"), p("y")]]),
            label: Poly::one(&sp),
        };
        assert_eq!(rank_parametric(&h, &cert, 3).unwrap(), 1);
        let z = ParametricSymMatrix {
            entries: Matrix::from_rows(vec![vec![p("0"), p("0")], vec![p("0"), p("0")]]),
            label: Poly::one(&sp),
        };
        assert_eq!(rank_parametric(&z, &cert, 3).unwrap(), 0);
        assert_eq!(rank_symbolic(&h.entries.map(|e| e.numerator().clone())), 1);
    }

    fn small_sym(vals: &[i64], n: usize) -> Matrix<BigRational> {
        let mut m = Matrix::from_fn(n, n, |_, _| q(0));
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                m.set(i, j, q(vals[k]));
                m.set(j, i, q(vals[k]));
                k += 1;
            }
        }
        m
    }

    proptest! {
        #[test]
        fn congruence_invariance(vals in prop::collection::vec(-3i64..=3, 10), useed in 0u64..1000) {
            let s = small_sym(&vals, 4);
            let u = CongruenceSeed::draw(4, useed).u;
            let t = u.transpose().mul(&s).mul(&u);
            let sig = signature_exact(&s).unwrap();
            prop_assert_eq!(sig, signature_exact(&t).unwrap());
            let r = rank(&s) as i64;
            prop_assert!(sig.abs() <= r);
            prop_assert_eq!((sig - r).rem_euclid(2), 0);
        }

        #[test]
        fn minor_rule_matches(vals in prop::collection::vec(-4i64..=4, 10)) {
            let s = small_sym(&vals, 4);
            let r = rank(&s);
            let minors: Vec<i32> = (1..=r)
                .map(|k| {
                    let idx: Vec<usize> = (0..k).collect();
                    sign_of(&determinant(&s.submatrix(&idx, &idx)))
                })
                .collect();
            if minors.iter().all(|&x| x != 0) {
                prop_assert_eq!(signature_from_minors(&minors), signature_exact(&s).unwrap());
            }
        }
    }
}
