//! The quotient algebra `A_K = K[x]/⟨f⟩_K`: monomial basis and
//! multiplication matrices.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::GroebnerBasis;
use crate::matrix::Matrix;
use crate::poly::{block_cmp, Monomial, Poly};
use crate::ratfn::RatFn;

#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    gb: Arc<GroebnerBasis>,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

/// Matrix of multiplication by `label` on the monomial basis; column `j`
/// holds the coordinates of `label · b_j`.
#[derive(Clone, Debug)]
pub struct MultMatrix {
    pub entries: Matrix<RatFn>,
    pub label: Poly,
}

/// Staircase of the Gröbner basis over `K`.  Fails when some unknown has no
/// pure power among the leading x-monomials.  A leading x-monomial equal to
/// 1 (a nonzero pure-parameter element) makes `⟨f⟩_K = K[x]` and `ℬ` empty.
pub fn monomial_basis(gb: Arc<GroebnerBasis>) -> Result<QuotientAlgebra> {
    let space = gb.space().clone();
    let n = space.n();
    let nv = space.nvars();
    let lms = gb.leading_x_monomials();
    if gb.is_inconsistent() || lms.iter().any(|m| m.is_one()) {
        return Ok(QuotientAlgebra { gb, basis: Vec::new(), index: HashMap::new() });
    }
    for i in 0..n {
        let pure = lms.iter().any(|m| m.exponent(i) > 0 && (0..n).all(|k| k == i || m.exponent(k) == 0));
        if !pure {
            let stairs: Vec<String> = lms
                .iter()
                .map(|m| Poly::monomial(&space, m.clone(), num_rational::BigRational::from_integer(1.into())).to_string())
                .collect();
            return Err(Error::NotZeroDimensional(format!(
                "no pure power of {} among the leading monomials [{}]",
                space.name(i),
                stairs.join(", ")
            )));
        }
    }
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut frontier = vec![Monomial::one(nv)];
    let mut basis = Vec::new();
    while let Some(m) = frontier.pop() {
        if !seen.insert(m.exponents().to_vec()) {
            continue;
        }
        if lms.iter().any(|l| l.divides(&m)) {
            continue;
        }
        for i in 0..n {
            frontier.push(m.mul(&Monomial::var(nv, i)));
        }
        basis.push(m);
    }
    basis.sort_by(|a, b| block_cmp(n, a, b));
    let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    Ok(QuotientAlgebra { gb, basis, index })
}

impl QuotientAlgebra {
    pub fn groebner(&self) -> &Arc<GroebnerBasis> {
        &self.gb
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// `δ = dim_K A_K`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_poly(&self, i: usize) -> Poly {
        Poly::monomial(self.gb.space(), self.basis[i].clone(), num_rational::BigRational::from_integer(1.into()))
    }

    /// Coordinates of the normal form of `p` on `ℬ`.
    pub fn coords(&self, p: &Poly) -> Result<Vec<RatFn>> {
        let nf = self.gb.normal_form(p)?;
        let lcb = self.gb.lc_basis_shared();
        let zero = RatFn::from_poly(Poly::zero(self.gb.space()), lcb);
        let mut out = vec![zero; self.dim()];
        for (xm, c) in nf.num.x_groups() {
            let k = *self.index.get(&xm).ok_or_else(|| {
                Error::InternalConsistency(format!("normal form has a term outside the monomial basis: {xm:?}"))
            })?;
            out[k] = RatFn::new(c, nf.den.clone(), lcb.clone());
        }
        Ok(out)
    }

    /// Multiplication matrix of `g`, one normal form per column.
    pub fn mult_matrix(&self, g: &Poly) -> Result<MultMatrix> {
        let d = self.dim();
        let cols: Vec<Vec<RatFn>> = (0..d).map(|j| self.coords(&g.mul(&self.basis_poly(j)))).collect::<Result<_>>()?;
        Ok(MultMatrix { entries: Matrix::from_fn(d, d, |i, j| cols[j][i].clone()), label: g.clone() })
    }

    /// `M_b` for every `b ∈ ℬ`.  Column `j` of `M_{b_i}` is the normal form
    /// of `b_i·b_j`, so each product is reduced once.
    pub fn basis_mult_matrices(&self) -> Result<Vec<MultMatrix>> {
        let d = self.dim();
        let mut prods: HashMap<(usize, usize), Vec<RatFn>> = HashMap::new();
        for i in 0..d {
            for j in i..d {
                let m = self.basis[i].mul(&self.basis[j]);
                let v = match self.index.get(&m) {
                    Some(&k) => self.unit(k),
                    None => self.coords(&Poly::monomial(
                        self.gb.space(),
                        m,
                        num_rational::BigRational::from_integer(1.into()),
                    ))?,
                };
                prods.insert((i, j), v);
            }
        }
        Ok((0..d)
            .map(|i| {
                let entries = Matrix::from_fn(d, d, |r, j| prods[&(i.min(j), i.max(j))][r].clone());
                MultMatrix { entries, label: self.basis_poly(i) }
            })
            .collect())
    }

    fn unit(&self, k: usize) -> Vec<RatFn> {
        let lcb = self.gb.lc_basis_shared();
        let sp = self.gb.space();
        (0..self.dim())
            .map(|i| RatFn::from_poly(if i == k { Poly::one(sp) } else { Poly::zero(sp) }, lcb))
            .collect()
    }

    /// `Σ c_b M_b` where `c` are the coordinates of `g`.
    pub fn mult_matrix_from_basis_matrices(&self, g: &Poly, mb: &[MultMatrix]) -> Result<MultMatrix> {
        let d = self.dim();
        let c = self.coords(g)?;
        let lcb = self.gb.lc_basis_shared();
        let zero = RatFn::from_poly(Poly::zero(self.gb.space()), lcb);
        let mut acc = Matrix::from_fn(d, d, |_, _| zero.clone());
        for (cb, m) in c.iter().zip(mb) {
            if !cb.is_zero() {
                acc = acc.add(&m.entries.map(|e| e.mul(cb)));
            }
        }
        Ok(MultMatrix { entries: acc, label: g.clone() })
    }
}
