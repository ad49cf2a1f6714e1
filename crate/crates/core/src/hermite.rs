//! Parametric Hermite matrices `H_g = (tr(L_{g·b_i·b_j}))_{i,j}` over `Q(y)`,
//! the open-set polynomial `w_∞`, specialization and degree audits.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groebner::{reduced_groebner, GroebnerBasis};
use crate::matrix::{Matrix, Scalar};
use crate::poly::{Poly, VarSpace};
use crate::quotient::{monomial_basis, MultMatrix, QuotientAlgebra};
use crate::ratfn::RatFn;

#[derive(Clone, Debug)]
pub struct ParametricSymMatrix {
    pub entries: Matrix<RatFn>,
    pub label: Poly,
}

impl ParametricSymMatrix {
    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    /// Whether every entry lies in `Q[y]`.
    pub fn is_polynomial(&self) -> bool {
        self.entries.data().iter().all(|e| e.is_polynomial())
    }

    /// Entrywise evaluation at `y = η`, gated by the open-set certificate.
    pub fn specialize(&self, eta: &[BigRational], cert: &OpenSetCertificate) -> Result<Matrix<BigRational>> {
        if !cert.contains(eta) {
            return Err(Error::OutsideOpenSet);
        }
        self.entries.try_map(|e| e.eval(eta))
    }

    /// Evaluation without the certificate check; used where `η` is already
    /// known to avoid every denominator.
    pub fn eval(&self, eta: &[BigRational]) -> Result<Matrix<BigRational>> {
        self.entries.try_map(|e| e.eval(eta))
    }
}

/// `w_∞` and the leading coefficients it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenSetCertificate {
    pub w_infinity: Poly,
    pub factors: Vec<Poly>,
}

impl OpenSetCertificate {
    pub fn contains(&self, eta: &[BigRational]) -> bool {
        !self.w_infinity.eval_params(eta).is_zero()
    }
}

pub fn w_infinity(gb: &GroebnerBasis) -> OpenSetCertificate {
    let mut factors: Vec<Poly> = Vec::new();
    for c in gb.leading_x_coeffs() {
        if c.is_constant() {
            continue;
        }
        let c = c.normalized();
        if !factors.contains(&c) {
            factors.push(c);
        }
    }
    OpenSetCertificate { w_infinity: gb.w_infinity(), factors }
}

/// Degree bounds for regular inputs whose Gröbner basis satisfies
/// `deg p = deg_x p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeBudget {
    pub n: u64,
    pub t: u64,
    pub s: u64,
    pub d: u64,
    pub lambda: u64,
}

impl DegreeBudget {
    pub fn new(n: u64, t: u64, s: u64, d: u64) -> Self {
        DegreeBudget { n, t, s, d, lambda: n * d.saturating_sub(1) }
    }

    /// Bound on every leading principal minor of `H_g`.
    pub fn minor_bound(&self, deg_g: u64) -> u64 {
        (deg_g + self.lambda) * self.d.pow(self.n as u32)
    }

    /// `𝔇`, covering every `g^α` with `α ∈ {0,1,2}^s`.
    pub fn global_bound(&self) -> u64 {
        (2 * self.s * self.d + self.lambda) * self.d.pow(self.n as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeOffense {
    pub row: usize,
    pub col: usize,
    /// `None` for an entry with a nonconstant denominator.
    pub degree: Option<i64>,
    pub bound: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub pass: bool,
    pub offending: Vec<DegreeOffense>,
    pub minor_bound: u64,
}

/// Checks `deg H[i][j] ≤ deg(g) + deg(b_i) + deg(b_j)` entrywise.
pub fn audit_degrees(h: &ParametricSymMatrix, qa: &QuotientAlgebra, deg_g: u64, budget: &DegreeBudget) -> DegreeReport {
    let n = qa.groebner().space().n();
    let mut offending = Vec::new();
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            let e = h.entries.get(i, j);
            let bound = deg_g as i64 + qa.basis()[i].degree_x(n) as i64 + qa.basis()[j].degree_x(n) as i64;
            if !e.is_polynomial() {
                offending.push(DegreeOffense { row: i, col: j, degree: None, bound });
                continue;
            }
            if let Some(deg) = e.degree() {
                if deg > bound {
                    offending.push(DegreeOffense { row: i, col: j, degree: Some(deg), bound });
                }
            }
        }
    }
    DegreeReport { pass: offending.is_empty(), offending, minor_bound: budget.minor_bound(deg_g) }
}

/// `H_1[i][j] = tr(M_{b_i b_j})`, computed through the trace form
/// `τ_k = tr(M_{b_k})`: column `j` of `M_{b_i}` holds the coordinates of
/// `b_i·b_j`.
pub fn hermite_h1(qa: &QuotientAlgebra, mb: &[MultMatrix]) -> ParametricSymMatrix {
    let d = qa.dim();
    let sp = qa.groebner().space().clone();
    let traces: Vec<RatFn> = mb.iter().map(|m| m.entries.trace()).collect();
    let entries = Matrix::from_fn(d, d, |i, j| {
        let col = (0..d).map(|k| mb[i].entries.get(k, j));
        let mut acc = traces[0].zero_like();
        for (c, t) in col.zip(&traces) {
            if !c.is_zero() && !t.is_zero() {
                acc = acc.add(&c.mul(t));
            }
        }
        acc
    });
    ParametricSymMatrix { entries, label: Poly::one(&sp) }
}

/// `H_g = H_1 · M_g`, with symmetry checked.
pub fn hermite_g(h1: &ParametricSymMatrix, mg: &MultMatrix) -> Result<ParametricSymMatrix> {
    if h1.dim() != mg.entries.rows() {
        return Err(Error::InvalidInput("Hermite and multiplication matrices differ in size".into()));
    }
    if h1.dim() == 0 {
        return Ok(ParametricSymMatrix { entries: h1.entries.clone(), label: mg.label.clone() });
    }
    let entries = h1.entries.mul(&mg.entries);
    if !entries.is_symmetric() {
        return Err(Error::InternalConsistency(format!("H_1·M_g is not symmetric for g = {}", mg.label)));
    }
    Ok(ParametricSymMatrix { entries, label: mg.label.clone() })
}

/// Everything derived from the equations alone: `𝒢`, `ℬ`, `{M_b}`, `w_∞`
/// and `H_1`.
#[derive(Clone, Debug)]
pub struct HermiteData {
    pub gb: Arc<GroebnerBasis>,
    pub qa: QuotientAlgebra,
    pub mb: Vec<MultMatrix>,
    pub cert: OpenSetCertificate,
    pub h1: ParametricSymMatrix,
}

pub fn first_hermite_matrix(space: &Arc<VarSpace>, f: &[Poly]) -> Result<HermiteData> {
    if f.is_empty() || f.iter().all(|p| p.is_zero()) {
        return Err(Error::InvalidInput("at least one nonzero equation is required".into()));
    }
    let gb = Arc::new(reduced_groebner(space, f)?);
    let qa = monomial_basis(gb.clone())?;
    let mb = qa.basis_mult_matrices()?;
    let cert = w_infinity(&gb);
    let h1 = if qa.dim() == 0 {
        ParametricSymMatrix { entries: Matrix::new(0, 0, Vec::new()), label: Poly::one(space) }
    } else {
        hermite_h1(&qa, &mb)
    };
    Ok(HermiteData { gb, qa, mb, cert, h1 })
}

impl HermiteData {
    pub fn dim(&self) -> usize {
        self.qa.dim()
    }

    pub fn mult_matrix(&self, g: &Poly) -> Result<MultMatrix> {
        self.qa.mult_matrix_from_basis_matrices(g, &self.mb)
    }

    pub fn hermite_of(&self, g: &Poly) -> Result<ParametricSymMatrix> {
        hermite_g(&self.h1, &self.mult_matrix(g)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn data(unknowns: &[&str], params: &[&str], f: &[&str]) -> HermiteData {
        let sp = VarSpace::new(unknowns, params).unwrap();
        let polys: Vec<Poly> = f.iter().map(|s| parse_poly(&sp, s).unwrap()).collect();
        first_hermite_matrix(&sp, &polys).unwrap()
    }

    fn rows(m: &ParametricSymMatrix) -> Vec<Vec<String>> {
        m.entries.to_rows().iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn first_hermite_matrices() {
        let h = data(&["x"], &["y"], &["x^2 - y"]);
        assert_eq!(rows(&h.h1), vec![vec!["2", "0"], vec!["0", "2*y"]]);
        let h = data(&["x"], &["y1", "y2"], &["x^2 + y1*x + y2"]);
        assert_eq!(rows(&h.h1), vec![vec!["2", "-y1"], vec!["-y1", "y1^2 - 2*y2"]]);
        let h = data(&["x"], &["y"], &["x - y"]);
        assert_eq!(rows(&h.h1), vec![vec!["1"]]);
    }

    #[test]
    fn weighted_hermite_matrix() {
        let h = data(&["x"], &["y"], &["x^2 - y"]);
        let sp = h.gb.space().clone();
        let hx = h.hermite_of(&parse_poly(&sp, "x").unwrap()).unwrap();
        assert_eq!(rows(&hx), vec![vec!["0", "2*y"], vec!["2*y", "0"]]);
        let h3 = h.hermite_of(&parse_poly(&sp, "3").unwrap()).unwrap();
        assert_eq!(rows(&h3), vec![vec!["6", "0"], vec!["0", "6*y"]]);
        assert_eq!(h.hermite_of(&Poly::one(&sp)).unwrap().entries, h.h1.entries);
    }

    #[test]
    fn open_set_and_specialization() {
        let h = data(&["x"], &["y"], &["x^2 - y"]);
        assert!(h.cert.w_infinity.is_one());
        let s = h.h1.specialize(&[q(4)], &h.cert).unwrap();
        assert_eq!(s.to_rows(), vec![vec![q(2), q(0)], vec![q(0), q(8)]]);
        let s = h.h1.specialize(&[q(0)], &h.cert).unwrap();
        assert_eq!(s.to_rows(), vec![vec![q(2), q(0)], vec![q(0), q(0)]]);

        let h = data(&["x"], &["y"], &["y*x - 1"]);
        assert_eq!(h.cert.w_infinity.to_string(), "y");
        assert_eq!(h.h1.specialize(&[q(0)], &h.cert), Err(Error::OutsideOpenSet));

        let h = data(&["x1", "x2"], &["y1", "y2"], &["y1^2*x1^2 - 1", "y1*y2*x2 - 1"]);
        assert_eq!(h.cert.w_infinity.to_string(), "y1*y2");
    }

    #[test]
    fn degree_audit() {
        let h = data(&["x"], &["y"], &["x^2 - y"]);
        let budget = DegreeBudget::new(1, 1, 1, 2);
        assert!(audit_degrees(&h.h1, &h.qa, 0, &budget).pass);
        let sp = h.gb.space().clone();
        let hx = h.hermite_of(&parse_poly(&sp, "x").unwrap()).unwrap();
        assert!(audit_degrees(&hx, &h.qa, 1, &budget).pass);
        let mut bad = h.h1.clone();
        let lcb = h.gb.lc_basis_shared().clone();
        bad.entries.set(1, 1, RatFn::from_poly(parse_poly(&sp, "y^99").unwrap(), &lcb));
        let rep = audit_degrees(&bad, &h.qa, 0, &budget);
        assert!(!rep.pass);
        assert_eq!(rep.offending, vec![DegreeOffense { row: 1, col: 1, degree: Some(99), bound: 2 }]);
        assert_eq!(budget.minor_bound(1), 4);
    }
}
