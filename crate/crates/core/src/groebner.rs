//! Reduced Gröbner bases in the block order `grevlex(x) ≻ grevlex(y)` and
//! normal forms over the parameter field `K = Q(y)`.
//!
//! Buchberger runs on integer-primitive polynomials so that no rational
//! arithmetic happens during reduction; the final basis is made monic.

use std::cmp::Ordering as CmpOrdering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gcd;
use crate::poly::{block_cmp, Monomial, Poly, VarSpace};

type Term = (Monomial, BigInt);

#[derive(Clone, Debug)]
struct IPoly {
    terms: Vec<Term>,
}

impl IPoly {
    fn from_poly(p: &Poly) -> IPoly {
        let (_, pp) = p.primitive_part();
        IPoly { terms: pp.terms().iter().map(|(m, c)| (m.clone(), c.to_integer())).collect() }
    }

    fn to_poly(&self, space: &Arc<VarSpace>) -> Poly {
        Poly::from_terms(space, self.terms.iter().map(|(m, c)| (m.clone(), BigRational::from_integer(c.clone()))))
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

fn make_primitive(terms: &mut [Term]) {
    let mut g = BigInt::zero();
    for (_, c) in terms.iter() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        return;
    }
    if terms[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, c) in terms.iter_mut() {
            *c = &*c / &g;
        }
    }
}

/// `ka·a − kb·m·b`, both inputs sorted decreasingly.
fn combine(n: usize, a: &[Term], ka: &BigInt, b: &[Term], kb: &BigInt, m: &Monomial) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut bm: Option<Monomial> = b.first().map(|t| t.0.mul(m));
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), &bm) {
            (Some(x), Some(y)) => block_cmp(n, &x.0, y),
            (Some(_), None) => CmpOrdering::Greater,
            (None, _) => CmpOrdering::Less,
        };
        match ord {
            CmpOrdering::Greater => {
                out.push((a[i].0.clone(), &a[i].1 * ka));
                i += 1;
            }
            CmpOrdering::Less => {
                out.push((bm.take().unwrap(), -(&b[j].1 * kb)));
                j += 1;
                bm = b.get(j).map(|t| t.0.mul(m));
            }
            CmpOrdering::Equal => {
                let c = &a[i].1 * ka - &b[j].1 * kb;
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
                bm = b.get(j).map(|t| t.0.mul(m));
            }
        }
    }
    out
}

/// Full (head and tail) fraction-free reduction of `p` by `basis`.
fn reduce(n: usize, p: Vec<Term>, basis: &[&IPoly]) -> IPoly {
    let mut p = p;
    let mut start = 0;
    let mut done: Vec<Term> = Vec::new();
    let mut steps = 0usize;
    while start < p.len() {
        let (m, c) = &p[start];
        let divisor = basis.iter().find(|g| g.lm().divides(m));
        match divisor {
            None => {
                done.push(p[start].clone());
                start += 1;
            }
            Some(g) => {
                let q = g.lm().quotient_of(m).expect("divisibility checked");
                let a = g.lc();
                let gg = a.gcd(c);
                let ka = a / &gg;
                let kb = c / &gg;
                p = combine(n, &p[start..], &ka, &g.terms, &kb, &q);
                start = 0;
                if !ka.is_one() {
                    for (_, d) in done.iter_mut() {
                        *d *= &ka;
                    }
                }
                steps += 1;
                if steps % 16 == 0 {
                    shrink_content(&mut done, &mut p);
                }
            }
        }
    }
    make_primitive(&mut done);
    IPoly { terms: done }
}

fn shrink_content(a: &mut [Term], b: &mut [Term]) {
    let mut g = BigInt::zero();
    for (_, c) in a.iter().chain(b.iter()) {
        g = g.gcd(c);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() {
        return;
    }
    for (_, c) in a.iter_mut().chain(b.iter_mut()) {
        *c = &*c / &g;
    }
}

fn s_poly(n: usize, f: &IPoly, g: &IPoly) -> Vec<Term> {
    let l = f.lm().lcm(g.lm());
    let uf = f.lm().quotient_of(&l).unwrap();
    let ug = g.lm().quotient_of(&l).unwrap();
    let gg = f.lc().gcd(g.lc());
    let kf = g.lc() / &gg;
    let kg = f.lc() / &gg;
    let fm: Vec<Term> = f.terms.iter().map(|(m, c)| (m.mul(&uf), c.clone())).collect();
    combine(n, &fm, &kf, &g.terms, &kg, &ug)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Buchberger {
    n: usize,
    polys: Vec<IPoly>,
    in_basis: Vec<bool>,
    pairs: Vec<Pair>,
}

impl Buchberger {
    fn active(&self) -> Vec<&IPoly> {
        self.polys.iter().zip(&self.in_basis).filter(|(_, &a)| a).map(|(p, _)| p).collect()
    }

    /// Gebauer–Möller pair update after adding `h`.
    fn update(&mut self, h: IPoly) {
        let hi = self.polys.len();
        let hlm = h.lm().clone();
        self.polys.push(h);
        self.in_basis.push(false);
        let lcm_with = |g: usize, polys: &[IPoly]| hlm.lcm(polys[g].lm());

        let mut c: Vec<usize> = (0..hi).filter(|&g| self.in_basis[g]).collect();
        let mut d: Vec<usize> = Vec::new();
        while let Some(g1) = c.pop() {
            let l1 = lcm_with(g1, &self.polys);
            let coprime = hlm.is_coprime(self.polys[g1].lm());
            let dominated = c.iter().chain(d.iter()).any(|&g2| lcm_with(g2, &self.polys).divides(&l1));
            if coprime || !dominated {
                d.push(g1);
            }
        }
        let e: Vec<usize> = d.into_iter().filter(|&g| !hlm.is_coprime(self.polys[g].lm())).collect();

        let polys = &self.polys;
        self.pairs.retain(|p| {
            !(hlm.divides(&p.lcm)
                && hlm.lcm(polys[p.i].lm()) != p.lcm
                && hlm.lcm(polys[p.j].lm()) != p.lcm)
        });
        for g in e {
            let lcm = lcm_with(g, &self.polys);
            self.pairs.push(Pair { i: g, j: hi, lcm });
        }
        for g in 0..hi {
            if self.in_basis[g] && hlm.divides(self.polys[g].lm()) {
                self.in_basis[g] = false;
            }
        }
        self.in_basis[hi] = true;
    }

    fn select(&mut self) -> Option<Pair> {
        let n = self.n;
        let best = (0..self.pairs.len()).min_by(|&a, &b| {
            let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
            block_cmp(n, &pa.lcm, &pb.lcm).then((pa.j, pa.i).cmp(&(pb.j, pb.i)))
        })?;
        Some(self.pairs.swap_remove(best))
    }
}

/// A reduced Gröbner basis of `⟨F⟩ ⊂ Q[y, x]` together with the data used to
/// pass to `K[x]`: leading x-monomials, their coefficients in `Q[y]`, and a
/// pairwise coprime squarefree basis of those coefficients.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    space: Arc<VarSpace>,
    generators: Vec<Poly>,
    leading_x: Vec<Monomial>,
    leading_coeffs: Vec<Poly>,
    lc_basis: Arc<Vec<Poly>>,
    lc_factors: Vec<(BigRational, Vec<u32>)>,
}

/// Reduced, monic Gröbner basis of `⟨F⟩` in the block elimination order.
/// `⟨F⟩ = ⟨1⟩` yields the basis `{1}` (see [`GroebnerBasis::is_inconsistent`]).
pub fn reduced_groebner(space: &Arc<VarSpace>, f: &[Poly]) -> Result<GroebnerBasis> {
    if f.iter().any(|p| !crate::poly::same_space(p.space(), space)) {
        return Err(Error::SpaceMismatch);
    }
    let n = space.n();
    let mut bb = Buchberger { n, polys: Vec::new(), in_basis: Vec::new(), pairs: Vec::new() };
    let mut inputs: Vec<IPoly> = f.iter().filter(|p| !p.is_zero()).map(IPoly::from_poly).collect();
    inputs.sort_by(|a, b| block_cmp(n, a.lm(), b.lm()));
    for p in inputs {
        let h = reduce(n, p.terms, &bb.active());
        if h.is_zero() {
            continue;
        }
        if h.lm().is_one() {
            return Ok(GroebnerBasis::from_generators(space, vec![Poly::one(space)]));
        }
        bb.update(h);
    }
    while let Some(pair) = bb.select() {
        let s = s_poly(n, &bb.polys[pair.i], &bb.polys[pair.j]);
        if s.is_empty() {
            continue;
        }
        let h = reduce(n, s, &bb.active());
        if h.is_zero() {
            continue;
        }
        if h.lm().is_one() {
            return Ok(GroebnerBasis::from_generators(space, vec![Poly::one(space)]));
        }
        bb.update(h);
    }
    // minimal already; interreduce tails
    let minimal: Vec<IPoly> = bb.active().into_iter().cloned().collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (k, g) in minimal.iter().enumerate() {
        let others: Vec<&IPoly> = minimal.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, p)| p).collect();
        // no other leading monomial divides the head, so only the tail moves
        let r = reduce(n, g.terms.clone(), &others);
        reduced.push(r.to_poly(space).monic());
    }
    reduced.sort_by(|a, b| block_cmp(n, a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    Ok(GroebnerBasis::from_generators(space, reduced))
}

impl GroebnerBasis {
    fn from_generators(space: &Arc<VarSpace>, generators: Vec<Poly>) -> GroebnerBasis {
        let mut leading_x = Vec::with_capacity(generators.len());
        let mut leading_coeffs = Vec::with_capacity(generators.len());
        for g in &generators {
            let (m, c) = g.leading_data_x().expect("nonzero generator");
            leading_x.push(m);
            leading_coeffs.push(c);
        }
        let lc_basis = Arc::new(gcd::coprime_basis(&leading_coeffs));
        let lc_factors = leading_coeffs
            .iter()
            .map(|c| gcd::factor_over(c, &lc_basis).expect("coprime basis covers every leading coefficient"))
            .collect();
        GroebnerBasis { space: space.clone(), generators, leading_x, leading_coeffs, lc_basis, lc_factors }
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `⟨F⟩ = ⟨1⟩`: the system has no complex solutions.
    pub fn is_inconsistent(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_constant()
    }

    /// Leading x-monomials `lm_x(g)`.
    pub fn leading_x_monomials(&self) -> &[Monomial] {
        &self.leading_x
    }

    /// Leading coefficients `lc_x(g) ∈ Q[y]`.
    pub fn leading_x_coeffs(&self) -> &[Poly] {
        &self.leading_coeffs
    }

    /// Pairwise coprime squarefree polynomials whose products give every
    /// nonconstant `lc_x(g)` up to a rational constant.
    pub fn lc_basis(&self) -> &[Poly] {
        &self.lc_basis
    }

    pub(crate) fn lc_basis_shared(&self) -> &Arc<Vec<Poly>> {
        &self.lc_basis
    }

    /// `w_∞`, the product of [`Self::lc_basis`]; outside its zero set the
    /// basis specializes to a Gröbner basis of the fibre.
    pub fn w_infinity(&self) -> Poly {
        self.lc_basis.iter().fold(Poly::one(&self.space), |acc, b| acc.mul(b))
    }

    /// Whether every generator has total degree equal to its degree in `x`.
    pub fn is_degree_regular(&self) -> bool {
        self.generators.iter().all(|g| g.degree() == g.degree_x())
    }

    /// Normal form of `p` over `K`.
    pub fn normal_form(&self, p: &Poly) -> Result<NormalForm> {
        if !crate::poly::same_space(p.space(), &self.space) {
            return Err(Error::SpaceMismatch);
        }
        let mut den = vec![0u32; self.lc_basis.len()];
        if self.is_inconsistent() {
            return Ok(NormalForm { num: Poly::zero(&self.space), den });
        }
        let n = self.space.n();
        let mut num = p.clone();
        let mut kept: Vec<(Monomial, BigRational)> = Vec::new();
        // `kept` holds terms already known to be irreducible, scaled along
        // with `num` whenever the denominator grows.
        loop {
            let groups = num.x_groups();
            let Some((xm, coeff)) = groups.into_iter().next() else { break };
            let hit = self.leading_x.iter().position(|l| l.divides(&xm));
            match hit {
                None => {
                    let split = num.terms().iter().take_while(|(m, _)| m.x_part(n) == xm).count();
                    kept.extend_from_slice(&num.terms()[..split]);
                    num = Poly::from_terms(&self.space, num.terms()[split..].to_vec());
                }
                Some(k) => {
                    let (kappa, exps) = &self.lc_factors[k];
                    let l = self.factor_product(exps);
                    let q = self.leading_x[k].quotient_of(&xm).unwrap();
                    let c = coeff.scale(&kappa.recip());
                    let sub = self.generators[k].mul_monomial(&q, &BigRational::one()).mul(&c);
                    num = num.mul(&l).sub(&sub);
                    if !l.is_one() {
                        kept = Poly::from_terms(&self.space, std::mem::take(&mut kept)).mul(&l).terms().to_vec();
                    }
                    for (d, e) in den.iter_mut().zip(exps) {
                        *d += e;
                    }
                }
            }
        }
        let mut num = Poly::from_terms(&self.space, kept);
        for (j, b) in self.lc_basis.iter().enumerate() {
            while den[j] > 0 {
                match num.div_exact(b) {
                    Some(q) => {
                        num = q;
                        den[j] -= 1;
                    }
                    None => break,
                }
            }
        }
        Ok(NormalForm { num, den })
    }

    fn factor_product(&self, exps: &[u32]) -> Poly {
        let mut acc = Poly::one(&self.space);
        for (b, &e) in self.lc_basis.iter().zip(exps) {
            if e > 0 {
                acc = acc.mul(&b.pow(e));
            }
        }
        acc
    }

    /// Basis of the fibre over `η`, in the unknowns-only space.  Fails with
    /// [`Error::OutsideOpenSet`] when some `lc_x(g)` vanishes at `η`.
    pub fn specialize(&self, eta: &[BigRational]) -> Result<Vec<Poly>> {
        if eta.len() != self.space.t() {
            return Err(Error::InvalidInput(format!(
                "expected {} parameter values, got {}",
                self.space.t(),
                eta.len()
            )));
        }
        if self.leading_coeffs.iter().any(|c| c.eval_params(eta).is_zero()) {
            return Err(Error::OutsideOpenSet);
        }
        let target = self.space.unknowns_only();
        Ok(self.generators.iter().map(|g| g.specialize(eta, &target)).collect())
    }
}

/// `num / ∏ basis[j]^den[j]` where `basis` is the coprime basis of the
/// Gröbner basis that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub num: Poly,
    pub den: Vec<u32>,
}

impl NormalForm {
    pub fn denominator(&self, gb: &GroebnerBasis) -> Poly {
        gb.factor_product(&self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn gb_of(unknowns: &[&str], params: &[&str], f: &[&str]) -> GroebnerBasis {
        let sp = VarSpace::new(unknowns, params).unwrap();
        let polys: Vec<Poly> = f.iter().map(|s| parse_poly(&sp, s).unwrap()).collect();
        reduced_groebner(&sp, &polys).unwrap()
    }

    fn strs(gb: &GroebnerBasis) -> Vec<String> {
        gb.generators().iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn single_parametric_quadric() {
        let gb = gb_of(&["x"], &["y"], &["x^2 - y"]);
        assert_eq!(strs(&gb), vec!["x^2 - y"]);
        assert!(gb.lc_basis().is_empty());
        assert!(gb.w_infinity().is_one());
    }

    #[test]
    fn two_unknowns_shape() {
        let gb = gb_of(&["x1", "x2"], &[], &["x1^2 - 1", "x2 - x1"]);
        assert_eq!(strs(&gb), vec!["x1 - x2", "x2^2 - 1"]);
    }

    #[test]
    fn inconsistent_input() {
        let gb = gb_of(&["x"], &["y"], &["x - 1", "x + 1"]);
        assert!(gb.is_inconsistent());
        assert_eq!(strs(&gb), vec!["1"]);
    }

    #[test]
    fn normal_form_over_parameter_field() {
        let gb = gb_of(&["x"], &["y"], &["x^2 - y"]);
        let sp = gb.space().clone();
        let nf = gb.normal_form(&parse_poly(&sp, "x^3").unwrap()).unwrap();
        assert_eq!(nf.num, parse_poly(&sp, "x*y").unwrap());
        assert!(nf.den.is_empty());
    }

    #[test]
    fn normal_form_with_denominators() {
        // y x - 1: over K, x = 1/y
        let gb = gb_of(&["x"], &["y"], &["y*x - 1"]);
        let sp = gb.space().clone();
        assert_eq!(gb.lc_basis(), &[parse_poly(&sp, "y").unwrap()]);
        let nf = gb.normal_form(&parse_poly(&sp, "x^2 + y").unwrap()).unwrap();
        // 1/y^2 + y = (1 + y^3)/y^2
        assert_eq!(nf.num, parse_poly(&sp, "y^3 + 1").unwrap());
        assert_eq!(nf.den, vec![2]);
        let nf = gb.normal_form(&parse_poly(&sp, "y*x").unwrap()).unwrap();
        assert_eq!(nf.num, parse_poly(&sp, "1").unwrap());
        assert_eq!(nf.den, vec![0]);
    }

    #[test]
    fn specialization_checks_open_set() {
        let gb = gb_of(&["x"], &["y"], &["y*x - 1"]);
        assert_eq!(gb.specialize(&[BigRational::zero()]), Err(Error::OutsideOpenSet));
        let fibre = gb.specialize(&[BigRational::from_integer(2.into())]).unwrap();
        assert_eq!(fibre[0].to_string(), "2*x - 1");
    }

    #[test]
    fn cyclic_like_system_is_reduced() {
        let gb = gb_of(&["a", "b", "c"], &[], &["a + b + c", "a*b + b*c + c*a", "a*b*c - 1"]);
        let lms: Vec<&Monomial> = gb.generators().iter().map(|g| g.leading_monomial().unwrap()).collect();
        for (i, a) in lms.iter().enumerate() {
            for (j, g) in gb.generators().iter().enumerate() {
                if i != j {
                    assert!(g.terms().iter().all(|(m, _)| !a.divides(m)), "not reduced");
                }
            }
        }
        assert!(gb.generators().iter().all(|g| g.leading_coeff().unwrap().is_one()));
    }
}
