//! Ground-truth counting of real solutions of fully specialized systems.
//!
//! The solutions are put in shape position: for a separating linear form
//! `z = x_n + Σ λ_i x_i` the radical ideal is `⟨x_i − φ_i(z), χ(z)⟩`, so
//! real points correspond to real roots of the squarefree `χ` and every
//! sign is decided on the univariate `g(φ(z)) mod χ`.  Nothing here touches
//! Hermite matrices or signatures.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::groebner::reduced_groebner;
use crate::poly::{Poly, VarSpace};
use crate::signdet::SignCondition;
use crate::upoly::{isolate_real_roots, sign_at_root, RealRoot, UPoly};

const MAX_SHEARS: i64 = 24;

/// Real solutions of a zero-dimensional system, isolated through the roots
/// of a squarefree eliminant.
#[derive(Clone, Debug)]
pub struct IsolatedRoots {
    n: usize,
    chi: UPoly,
    roots: Vec<RealRoot>,
    coords: Vec<UPoly>,
}

impl IsolatedRoots {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Squarefree eliminant whose real roots are in bijection with the points.
    pub fn eliminant(&self) -> &UPoly {
        &self.chi
    }

    /// Disjoint isolating data for the eliminant, sorted increasingly.
    pub fn roots(&self) -> &[RealRoot] {
        &self.roots
    }

    /// Always true: the eliminant is squarefree by construction.
    pub fn multiplicity_free(&self) -> bool {
        true
    }

    /// Shrinks every isolating interval below `width`.
    pub fn refine_to(&mut self, width: &BigRational) {
        for r in &mut self.roots {
            while r.width() > *width {
                *r = crate::upoly::refine(&self.chi, r);
            }
        }
    }

    /// Sign of `g` at each real solution, in root order.
    pub fn signs(&self, g: &Poly) -> Result<Vec<i8>> {
        let q = self.compose(g)?;
        self.roots.iter().map(|r| sign_at_root(&self.chi, r, &q).map(|s| s as i8)).collect()
    }

    /// Rational approximation of each solution to within the current
    /// interval width, mostly useful for display.
    pub fn approximations(&self) -> Vec<Vec<BigRational>> {
        self.roots
            .iter()
            .map(|r| {
                let z = r.approx();
                self.coords.iter().map(|c| c.eval(&z)).collect()
            })
            .collect()
    }

    fn compose(&self, g: &Poly) -> Result<UPoly> {
        if g.space().n() != self.n {
            return Err(Error::SpaceMismatch);
        }
        if (self.n..g.space().nvars()).any(|v| g.uses_var(v)) {
            return Err(Error::InvalidInput(format!("oracle input still depends on parameters: {g}")));
        }
        let mut powers: Vec<Vec<UPoly>> = self.coords.iter().map(|c| vec![UPoly::constant(BigRational::one()), c.clone()]).collect();
        let mut acc = UPoly::zero();
        for (m, c) in g.terms() {
            let mut t = UPoly::constant(c.clone());
            for (i, pw) in powers.iter_mut().enumerate() {
                let e = m.exponent(i) as usize;
                while pw.len() <= e {
                    let next = pw.last().unwrap().mul(&self.coords[i]).rem(&self.chi);
                    pw.push(next);
                }
                if e > 0 {
                    t = t.mul(&pw[e]).rem(&self.chi);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc.rem(&self.chi))
    }
}

/// Isolates the real solutions of `f`, which must not involve parameters.
pub fn isolate(f: &[Poly]) -> Result<IsolatedRoots> {
    let Some(first) = f.first() else {
        return Err(Error::PositiveDimensional);
    };
    let space = first.space().clone();
    let n = space.n();
    for p in f {
        if (n..space.nvars()).any(|v| p.uses_var(v)) {
            return Err(Error::InvalidInput(format!("oracle input still depends on parameters: {p}")));
        }
    }
    if n == 0 {
        return Err(Error::InvalidInput("system has no unknowns".into()));
    }
    if n == 1 {
        let mut g = UPoly::zero();
        for p in f {
            g = g.gcd(&UPoly::from_poly(p, 0));
        }
        if g.is_zero() {
            return Err(Error::PositiveDimensional);
        }
        let chi = g.squarefree();
        let roots = isolate_real_roots(&chi);
        return Ok(IsolatedRoots { n, chi, roots, coords: vec![UPoly::z()] });
    }
    let mut system: Vec<Poly> = f.to_vec();
    let mut radical = false;
    loop {
        for k in 0..MAX_SHEARS {
            let lambda: Vec<i64> = (0..n - 1).map(|i| if k == 0 { 0 } else { (k + 1).pow(i as u32 + 1) * if k % 2 == 0 { 1 } else { -1 } }).collect();
            match try_shape(&space, &system, &lambda)? {
                Shape::Inconsistent => {
                    return Ok(IsolatedRoots { n, chi: UPoly::constant(BigRational::one()), roots: Vec::new(), coords: vec![UPoly::zero(); n] })
                }
                Shape::Found(chi, coords) => {
                    let roots = isolate_real_roots(&chi);
                    return Ok(IsolatedRoots { n, chi, roots, coords });
                }
                Shape::Retry(sq) => {
                    if k == 0 && !radical {
                        system.push(sq);
                    }
                }
            }
        }
        if radical {
            return Err(Error::InternalConsistency("no separating linear form found".into()));
        }
        // x_j-eliminants made squarefree give the radical (Seidenberg)
        for j in 0..n {
            system.push(coordinate_eliminant(&space, &system, j)?);
        }
        radical = true;
    }
}

enum Shape {
    Inconsistent,
    Found(UPoly, Vec<UPoly>),
    /// Not in shape position; carries the squarefree eliminant lifted back.
    Retry(Poly),
}

fn aux_space(n: usize) -> Arc<VarSpace> {
    let names: Vec<String> = (0..n - 1).map(|i| format!("v{i}")).collect();
    VarSpace::new(&names, &["z".to_string()]).expect("valid names")
}

fn try_shape(space: &Arc<VarSpace>, f: &[Poly], lambda: &[i64]) -> Result<Shape> {
    let n = space.n();
    let aux = aux_space(n);
    let z = Poly::var(&aux, n - 1);
    let mut images: Vec<Poly> = (0..space.nvars()).map(|_| Poly::zero(&aux)).collect();
    let mut last = z.clone();
    for i in 0..n - 1 {
        images[i] = Poly::var(&aux, i);
        last = last.sub(&images[i].scale(&BigRational::from_integer(lambda[i].into())));
    }
    images[n - 1] = last;
    let fz: Vec<Poly> = f.iter().map(|p| p.substitute(&images, &aux)).collect();
    let gb = reduced_groebner(&aux, &fz)?;
    if gb.is_inconsistent() {
        return Ok(Shape::Inconsistent);
    }
    let Some(elim) = gb.generators().iter().find(|p| p.is_pure_parameter()) else {
        return Err(Error::PositiveDimensional);
    };
    let chi = UPoly::from_poly(elim, n - 1);
    let sq = chi.squarefree();
    let shaped = gb.generators().len() == n && chi.degree() == sq.degree();
    if shaped {
        let mut coords = vec![UPoly::zero(); n];
        let mut ok = true;
        for p in gb.generators().iter().filter(|p| !p.is_pure_parameter()) {
            let groups = p.x_groups();
            let lin: Vec<&(crate::poly::Monomial, Poly)> = groups.iter().filter(|(m, _)| !m.is_one()).collect();
            if lin.len() != 1 || lin[0].0.degree() != 1 || !lin[0].1.is_constant() {
                ok = false;
                break;
            }
            let i = (0..n - 1).find(|&i| lin[0].0.exponent(i) == 1).unwrap();
            let c = lin[0].1.constant_value().unwrap();
            let rest = groups.iter().find(|(m, _)| m.is_one()).map(|(_, q)| q.clone()).unwrap_or_else(|| Poly::zero(&aux));
            coords[i] = UPoly::from_poly(&rest, n - 1).scale(&(-BigRational::one() / c));
        }
        if ok {
            let mut xn = UPoly::z();
            for i in 0..n - 1 {
                xn = xn.sub(&coords[i].scale(&BigRational::from_integer(lambda[i].into())));
            }
            coords[n - 1] = xn.rem(&sq);
            return Ok(Shape::Found(sq, coords));
        }
    }
    // pull sq(z) back to the original coordinates
    let mut lin = Poly::var(space, n - 1);
    for i in 0..n - 1 {
        lin = lin.add(&Poly::var(space, i).scale(&BigRational::from_integer(lambda[i].into())));
    }
    let mut back = Poly::zero(space);
    for c in sq.coeffs().iter().rev() {
        back = back.mul(&lin).add(&Poly::constant(space, c.clone()));
    }
    Ok(Shape::Retry(back))
}

/// Squarefree generator of `⟨f⟩ ∩ Q[x_j]`, written in the original space.
fn coordinate_eliminant(space: &Arc<VarSpace>, f: &[Poly], j: usize) -> Result<Poly> {
    let n = space.n();
    let aux = aux_space(n);
    let mut images: Vec<Poly> = (0..space.nvars()).map(|_| Poly::zero(&aux)).collect();
    let mut slot = 0;
    for (i, img) in images.iter_mut().enumerate().take(n) {
        if i == j {
            *img = Poly::var(&aux, n - 1);
        } else {
            *img = Poly::var(&aux, slot);
            slot += 1;
        }
    }
    let fz: Vec<Poly> = f.iter().map(|p| p.substitute(&images, &aux)).collect();
    let gb = reduced_groebner(&aux, &fz)?;
    if gb.is_inconsistent() {
        return Ok(Poly::one(space));
    }
    let Some(elim) = gb.generators().iter().find(|p| p.is_pure_parameter()) else {
        return Err(Error::PositiveDimensional);
    };
    let sq = UPoly::from_poly(elim, n - 1).squarefree();
    let x = Poly::var(space, j);
    let mut back = Poly::zero(space);
    for c in sq.coeffs().iter().rev() {
        back = back.mul(&x).add(&Poly::constant(space, c.clone()));
    }
    Ok(back)
}

/// Number of real solutions of `f` and the sign vector of `g` at each one
/// (sorted).
pub fn count_and_sign(f: &[Poly], g: &[Poly]) -> Result<(usize, Vec<SignCondition>)> {
    let roots = isolate(f)?;
    let per_g: Vec<Vec<i8>> = g.iter().map(|q| roots.signs(q)).collect::<Result<_>>()?;
    let mut signs: Vec<SignCondition> = (0..roots.len()).map(|k| per_g.iter().map(|v| v[k]).collect()).collect();
    signs.sort();
    Ok((roots.len(), signs))
}

/// `Σ sign g(x)` over the isolated solutions.
pub fn tarski_query_direct(g: &Poly, roots: &IsolatedRoots) -> Result<i64> {
    if g.is_zero() {
        return Ok(0);
    }
    Ok(roots.signs(g)?.iter().map(|&s| s as i64).sum())
}

/// Real-solution count of `f(η, ·)`.
pub fn count_at(f: &[Poly], eta: &[BigRational]) -> Result<usize> {
    Ok(isolate(&specialize_all(f, eta))?.len())
}

/// Number of real solutions of `f(η, ·) = 0` at which every `g(η, ·)` is
/// positive.
pub fn count_satisfying(f: &[Poly], g: &[Poly], eta: &[BigRational]) -> Result<usize> {
    let (_, signs) = count_and_sign(&specialize_all(f, eta), &specialize_all(g, eta))?;
    Ok(signs.iter().filter(|s| s.iter().all(|&x| x > 0)).count())
}

/// Substitutes the parameters and moves every polynomial to the
/// unknowns-only space.
pub fn specialize_all(f: &[Poly], eta: &[BigRational]) -> Vec<Poly> {
    let Some(first) = f.first() else { return Vec::new() };
    let target = first.space().unknowns_only();
    f.iter().map(|p| p.specialize(eta, &target)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn sys(unknowns: &[&str], eqs: &[&str]) -> (Arc<VarSpace>, Vec<Poly>) {
        let sp = VarSpace::new(unknowns, &[]).unwrap();
        let f = eqs.iter().map(|s| parse_poly(&sp, s).unwrap()).collect();
        (sp, f)
    }

    #[test]
    fn univariate_counts() {
        let (sp, f) = sys(&["x"], &["x^2 - 4"]);
        let x = parse_poly(&sp, "x").unwrap();
        let (c, s) = count_and_sign(&f, std::slice::from_ref(&x)).unwrap();
        assert_eq!(c, 2);
        assert_eq!(s, vec![vec![-1], vec![1]]);
        let (_, f) = sys(&["x"], &["x^2 + 1"]);
        assert_eq!(count_and_sign(&f, &[]).unwrap().0, 0);
    }

    #[test]
    fn bivariate_counts() {
        let (sp, f) = sys(&["x1", "x2"], &["x1 - x2", "x2^2 - 2"]);
        let x1 = parse_poly(&sp, "x1").unwrap();
        let (c, s) = count_and_sign(&f, &[x1]).unwrap();
        assert_eq!(c, 2);
        assert_eq!(s, vec![vec![-1], vec![1]]);
    }

    #[test]
    fn tarski_queries() {
        let (sp, f) = sys(&["x"], &["x^2 - 4"]);
        let r = isolate(&f).unwrap();
        let q = |s: &str| parse_poly(&sp, s).unwrap();
        assert_eq!(tarski_query_direct(&q("1"), &r).unwrap(), 2);
        assert_eq!(tarski_query_direct(&q("x"), &r).unwrap(), 0);
        assert_eq!(tarski_query_direct(&q("x^2"), &r).unwrap(), 2);
        let (sp, f) = sys(&["x"], &["x^3 - x"]);
        let r = isolate(&f).unwrap();
        assert_eq!(tarski_query_direct(&parse_poly(&sp, "1").unwrap(), &r).unwrap(), 3);
    }

    #[test]
    fn non_radical_and_unseparated_inputs() {
        // double point at the origin plus two real points sharing x2
        let (sp, f) = sys(&["x1", "x2"], &["x1^2 - x2^2", "x2^2 - x2"]);
        let x1 = parse_poly(&sp, "x1").unwrap();
        let (c, s) = count_and_sign(&f, &[x1]).unwrap();
        assert_eq!(c, 3);
        assert_eq!(s, vec![vec![-1], vec![0], vec![1]]);
        let (_, f) = sys(&["x1", "x2"], &["x1^2", "x1*x2", "x2^2"]);
        assert_eq!(count_and_sign(&f, &[]).unwrap().0, 1);
    }

    #[test]
    fn degenerate_inputs() {
        let (_, f) = sys(&["x1", "x2"], &["x1 - 1", "x1 + 1"]);
        assert_eq!(count_and_sign(&f, &[]).unwrap().0, 0);
        let (_, f) = sys(&["x1", "x2"], &["x1 - x2"]);
        assert_eq!(count_and_sign(&f, &[]).unwrap_err(), Error::PositiveDimensional);
    }

    #[test]
    fn three_unknowns() {
        let (sp, f) = sys(&["a", "b", "c"], &["a^2 - 1", "b^2 - a - 3", "c - a*b"]);
        let c = parse_poly(&sp, "c").unwrap();
        // a = 1: b = ±2; a = −1: b = ±√2; c = ab
        let (n, s) = count_and_sign(&f, &[c]).unwrap();
        assert_eq!(n, 4);
        assert_eq!(s, vec![vec![-1], vec![-1], vec![1], vec![1]]);
    }
}
