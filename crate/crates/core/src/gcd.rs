//! Multivariate gcd, resultants and squarefree decompositions over `Q`,
//! via the subresultant pseudo-remainder sequence applied recursively in
//! the highest-index variable.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::Poly;
use crate::upoly::UPoly;

type Coeffs = Vec<Poly>;

fn trim(c: &mut Coeffs) {
    while c.last().is_some_and(|p| p.is_zero()) {
        c.pop();
    }
}

fn deg(c: &Coeffs) -> usize {
    c.len() - 1
}

fn lc(c: &Coeffs) -> &Poly {
    c.last().expect("nonzero coefficient vector")
}

fn exact(a: &Poly, b: &Poly) -> Poly {
    a.div_exact(b)
        .unwrap_or_else(|| panic!("inexact division in subresultant sequence: ({a}) / ({b})"))
}

fn main_var(a: &Poly, b: &Poly) -> Option<usize> {
    (0..a.space().nvars()).rev().find(|&v| a.uses_var(v) || b.uses_var(v))
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b`.
fn prem(a: &Coeffs, b: &Coeffs) -> Coeffs {
    let mut r = a.clone();
    let db = deg(b);
    let lb = lc(b).clone();
    let mut e = (deg(a) + 1).saturating_sub(db) as u32;
    while !r.is_empty() && deg(&r) >= db {
        let shift = deg(&r) - db;
        let lr = lc(&r).clone();
        for c in r.iter_mut() {
            *c = c.mul(&lb);
        }
        for (k, bc) in b.iter().enumerate() {
            let idx = k + shift;
            r[idx] = r[idx].sub(&lr.mul(bc));
        }
        trim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let f = lb.pow(e);
        for c in r.iter_mut() {
            *c = c.mul(&f);
        }
    }
    r
}

fn content_of(c: &Coeffs) -> Poly {
    let mut g = Poly::zero(c[0].space());
    for p in c.iter().filter(|p| !p.is_zero()) {
        g = gcd(&g, p);
        if g.is_constant() {
            break;
        }
    }
    g
}

/// Content of `p` viewed as a polynomial in `var`.
pub fn content_in(p: &Poly, var: usize) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    content_of(&p.coeffs_in(var))
}

/// Normalized gcd (primitive over `Z`, positive leading coefficient);
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.space());
    }
    if certified_coprime(a, b) {
        return Poly::one(a.space());
    }
    let v = main_var(a, b).expect("nonconstant input");
    let nv = a.space().nvars();
    if (0..nv).all(|w| w == v || !(a.uses_var(w) || b.uses_var(w))) {
        let g = UPoly::from_poly(a, v).gcd(&UPoly::from_poly(b, v));
        let sp = a.space();
        let cs: Coeffs = g.coeffs().iter().map(|c| Poly::constant(sp, c.clone())).collect();
        return Poly::from_coeffs_in(sp, v, &cs).normalized();
    }
    if !a.uses_var(v) {
        return gcd(a, &content_in(b, v));
    }
    if !b.uses_var(v) {
        return gcd(&content_in(a, v), b);
    }
    let mut ca = a.coeffs_in(v);
    let mut cb = b.coeffs_in(v);
    let conta = content_of(&ca);
    let contb = content_of(&cb);
    let d = gcd(&conta, &contb);
    ca.iter_mut().for_each(|c| *c = exact(c, &conta));
    cb.iter_mut().for_each(|c| *c = exact(c, &contb));
    if deg(&ca) < deg(&cb) {
        std::mem::swap(&mut ca, &mut cb);
    }
    let sp = a.space().clone();
    let mut g = Poly::one(&sp);
    let mut h = Poly::one(&sp);
    loop {
        let delta = (deg(&ca) - deg(&cb)) as u32;
        let r = prem(&ca, &cb);
        if r.is_empty() {
            break;
        }
        if deg(&r) == 0 {
            cb = vec![Poly::one(&sp)];
            break;
        }
        ca = cb;
        let div = g.mul(&h.pow(delta));
        cb = r.iter().map(|c| exact(c, &div)).collect();
        g = lc(&ca).clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => exact(&g.pow(delta), &h.pow(delta - 1)),
        };
    }
    let cont = content_of(&cb);
    let pp: Coeffs = cb.iter().map(|c| exact(c, &cont)).collect();
    Poly::from_coeffs_in(&sp, v, &pp).mul(&d).normalized()
}

/// Resultant of `a` and `b` with respect to `var`.
pub fn resultant(a: &Poly, b: &Poly, var: usize) -> Poly {
    let sp = a.space().clone();
    if a.is_zero() || b.is_zero() {
        return Poly::zero(&sp);
    }
    let others: Vec<usize> = (0..sp.nvars()).filter(|&v| v != var && (a.uses_var(v) || b.uses_var(v))).collect();
    if others.len() <= 1 && a.uses_var(var) && b.uses_var(var) {
        return resultant_interpolated(a, b, var, others.first().copied());
    }
    resultant_prs(a, b, var)
}

/// Subresultant pseudo-remainder resultant.
fn resultant_prs(a: &Poly, b: &Poly, var: usize) -> Poly {
    let sp = a.space().clone();
    let mut ca = a.coeffs_in(var);
    let mut cb = b.coeffs_in(var);
    let (da, db) = (deg(&ca), deg(&cb));
    if da == 0 {
        return ca[0].pow(db as u32);
    }
    if db == 0 {
        return cb[0].pow(da as u32);
    }
    let mut negate = false;
    if da < db {
        std::mem::swap(&mut ca, &mut cb);
        if da % 2 == 1 && db % 2 == 1 {
            negate = true;
        }
    }
    let conta = content_of(&ca);
    let contb = content_of(&cb);
    let t = conta.pow(deg(&cb) as u32).mul(&contb.pow(deg(&ca) as u32));
    ca.iter_mut().for_each(|c| *c = exact(c, &conta));
    cb.iter_mut().for_each(|c| *c = exact(c, &contb));
    let mut g = Poly::one(&sp);
    let mut h = Poly::one(&sp);
    loop {
        let delta = (deg(&ca) - deg(&cb)) as u32;
        if deg(&ca) % 2 == 1 && deg(&cb) % 2 == 1 {
            negate = !negate;
        }
        let r = prem(&ca, &cb);
        if r.is_empty() {
            return Poly::zero(&sp);
        }
        ca = cb;
        let div = g.mul(&h.pow(delta));
        cb = r.iter().map(|c| exact(c, &div)).collect();
        g = lc(&ca).clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => exact(&g.pow(delta), &h.pow(delta - 1)),
        };
        if deg(&cb) == 0 {
            break;
        }
    }
    let da = deg(&ca) as u32;
    let hb = lc(&cb).pow(da);
    let h = if da == 0 { h } else { exact(&hb, &h.pow(da - 1)) };
    let res = t.mul(&h);
    if negate {
        res.neg()
    } else {
        res
    }
}

/// `p` with every variable but `v` replaced by `vals[i]`.
fn restrict(p: &Poly, v: usize, vals: &[BigRational]) -> UPoly {
    let mut coeffs = vec![BigRational::zero(); p.degree_in(v).map_or(0, |d| d as usize + 1)];
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (i, &e) in m.exponents().iter().enumerate() {
            if i != v && e > 0 {
                t *= crate::poly::pow_rat(&vals[i], e);
            }
        }
        coeffs[m.exponent(v) as usize] += t;
    }
    UPoly::new(coeffs)
}

/// Evaluation values tried for the variables that are specialized away.
fn eval_point(nvars: usize, attempt: u64) -> Vec<BigRational> {
    (0..nvars as u64)
        .map(|i| {
            let k = (attempt * 7919 + i * 104_729 + 3) % 2003;
            BigRational::from_integer((k as i64 - 1001).into())
        })
        .collect()
}

/// Proves `gcd(a, b) = 1` when possible: for every shared variable `v`, a
/// point keeping both leading coefficients in `v` nonzero at which the
/// univariate gcd is constant bounds `deg_v gcd(a, b)` by zero.
fn certified_coprime(a: &Poly, b: &Poly) -> bool {
    let nv = a.space().nvars();
    let shared: Vec<usize> = (0..nv).filter(|&v| a.uses_var(v) && b.uses_var(v)).collect();
    'vars: for v in shared {
        for attempt in 0..3 {
            let pt = eval_point(nv, attempt);
            let ua = restrict(a, v, &pt);
            let ub = restrict(b, v, &pt);
            if ua.degree() as u32 != a.degree_in(v).unwrap() || ub.degree() as u32 != b.degree_in(v).unwrap() {
                continue;
            }
            if ua.gcd(&ub).degree() == 0 {
                continue 'vars;
            }
            return false;
        }
        return false;
    }
    true
}

/// Univariate resultant over `Q` by Euclid's algorithm.
fn uresultant(a: &UPoly, b: &UPoly) -> BigRational {
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut acc = BigRational::one();
    loop {
        if a.is_zero() || b.is_zero() {
            return BigRational::zero();
        }
        let (da, db) = (a.degree(), b.degree());
        if db == 0 {
            return acc * crate::poly::pow_rat(&b.lc(), da as u32);
        }
        if da == 0 {
            return acc * crate::poly::pow_rat(&a.lc(), db as u32);
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return BigRational::zero();
        }
        if da % 2 == 1 && db % 2 == 1 {
            acc = -acc;
        }
        acc *= crate::poly::pow_rat(&b.lc(), (da - r.degree()) as u32);
        a = b;
        b = r;
    }
}

/// Resultant in `var` of polynomials involving at most one other variable
/// `w`, by evaluation at integer values of `w` and Newton interpolation.
fn resultant_interpolated(a: &Poly, b: &Poly, var: usize, w: Option<usize>) -> Poly {
    let sp = a.space().clone();
    let nv = sp.nvars();
    let zeros = vec![BigRational::zero(); nv];
    let Some(w) = w else {
        return Poly::constant(&sp, uresultant(&restrict(a, var, &zeros), &restrict(b, var, &zeros)));
    };
    let (da, db) = (a.degree_in(var).unwrap(), b.degree_in(var).unwrap());
    let bound = a.degree_in(w).unwrap_or(0) * db + b.degree_in(w).unwrap_or(0) * da;
    let lca = a.coeffs_in(var).pop().unwrap();
    let lcb = b.coeffs_in(var).pop().unwrap();
    let mut xs: Vec<BigRational> = Vec::new();
    let mut ys: Vec<BigRational> = Vec::new();
    let mut k: i64 = 0;
    while xs.len() <= bound as usize {
        // 0, 1, −1, 2, −2, …
        let x = BigRational::from_integer(if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) }.into());
        k += 1;
        let mut pt = zeros.clone();
        pt[w] = x.clone();
        if lca.eval(&pt).is_zero() || lcb.eval(&pt).is_zero() {
            continue;
        }
        ys.push(uresultant(&restrict(a, var, &pt), &restrict(b, var, &pt)));
        xs.push(x);
    }
    // Newton divided differences, then Horner in the Newton basis
    let n = xs.len();
    let mut coef = ys;
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc = UPoly::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        acc = acc.mul(&UPoly::new(vec![-xs[i].clone(), BigRational::one()])).add(&UPoly::constant(coef[i].clone()));
    }
    let wv = Poly::var(&sp, w);
    let mut out = Poly::zero(&sp);
    for c in acc.coeffs().iter().rev() {
        out = out.mul(&wv).add(&Poly::constant(&sp, c.clone()));
    }
    out
}

/// Discriminant-like projection: `res(p, ∂p/∂var)`, which vanishes exactly
/// where `p` acquires a repeated root in `var` or its leading coefficient
/// vanishes.
pub fn discriminant(p: &Poly, var: usize) -> Poly {
    resultant(p, &p.derivative(var), var)
}

/// Product of the distinct irreducible factors of `p`, normalized.
pub fn squarefree_part(p: &Poly) -> Poly {
    if p.is_constant() {
        return if p.is_zero() { p.clone() } else { Poly::one(p.space()) };
    }
    let mut g = p.clone();
    for v in 0..p.space().nvars() {
        if p.uses_var(v) {
            g = gcd(&g, &p.derivative(v));
            if g.is_constant() {
                break;
            }
        }
    }
    exact(p, &g).normalized()
}

/// Pairwise coprime squarefree polynomials over which every input factors
/// as a constant times a power product; constants are dropped.
pub fn coprime_basis(polys: &[Poly]) -> Vec<Poly> {
    let mut basis: Vec<Poly> = Vec::new();
    for p in polys {
        if p.is_constant() {
            continue;
        }
        // p = s_1 s_2 ⋯ with s_k the squarefree part of p / (s_1 ⋯ s_{k−1})
        let mut stack = Vec::new();
        let mut rest = p.clone();
        while !rest.is_constant() {
            let s = squarefree_part(&rest);
            rest = exact(&rest, &s);
            stack.push(s);
        }
        while let Some(q) = stack.pop() {
            if q.is_constant() {
                continue;
            }
            let mut split = false;
            for i in 0..basis.len() {
                let g = gcd(&basis[i], &q);
                if g.is_constant() {
                    continue;
                }
                let b = basis.swap_remove(i);
                let b1 = exact(&b, &g).normalized();
                let q1 = exact(&q, &g).normalized();
                basis.push(g);
                if !b1.is_constant() {
                    basis.push(b1);
                }
                stack.push(q1);
                split = true;
                break;
            }
            if !split {
                basis.push(q);
            }
        }
    }
    basis.sort_by(|a, b| {
        let ka = (a.degree(), a.to_string());
        let kb = (b.degree(), b.to_string());
        ka.cmp(&kb)
    });
    basis
}

/// Writes `p = c · ∏ basis[j]^e[j]` when possible.
pub fn factor_over(p: &Poly, basis: &[Poly]) -> Option<(num_rational::BigRational, Vec<u32>)> {
    let mut rest = p.clone();
    let mut exps = vec![0u32; basis.len()];
    for (j, b) in basis.iter().enumerate() {
        while let Some(q) = rest.div_exact(b) {
            rest = q;
            exps[j] += 1;
        }
    }
    let c = rest.constant_value()?;
    if c.is_zero() {
        return None;
    }
    Some((c, exps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::VarSpace;
    use std::sync::Arc;

    fn sp() -> Arc<VarSpace> {
        VarSpace::new(&["x"], &["a", "b"]).unwrap()
    }

    fn p(s: &str) -> Poly {
        parse_poly(&sp(), s).unwrap()
    }

    #[test]
    fn gcd_of_shared_factor() {
        let g = gcd(&p("(x - a)*(x + b)^2"), &p("(x + b)*(a*x - 1)"));
        assert_eq!(g, p("x + b"));
        assert!(gcd(&p("x^2 + 1"), &p("x - a")).is_one());
        assert_eq!(gcd(&p("6*a*b"), &p("4*a^2")), p("a"));
    }

    #[test]
    fn resultant_matches_sylvester_by_hand() {
        // res_x(x^2 + a x + b, 2x + a) = -(a^2 - 4b)
        let f = p("x^2 + a*x + b");
        let r = resultant(&f, &f.derivative(0), 0);
        assert_eq!(r, p("-a^2 + 4*b"));
        // res_x(x - a, x - b) = b - a ... up to the sign convention res = prod (alpha - beta)
        let r = resultant(&p("x - a"), &p("x - b"), 0);
        assert_eq!(r, p("a - b"));
        assert!(resultant(&p("(x-a)*(x+1)"), &p("(x-a)*x"), 0).is_zero());
    }

    #[test]
    fn squarefree_and_basis() {
        assert_eq!(squarefree_part(&p("a^2*b*(x-1)^3")), p("a*b*x - a*b"));
        let basis = coprime_basis(&[p("a^2"), p("a*b")]);
        assert_eq!(basis, vec![p("a"), p("b")]);
        let (c, e) = factor_over(&p("3*a^2*b"), &basis).unwrap();
        assert_eq!(c, crate::poly::rat(3));
        assert_eq!(e, vec![2, 1]);
    }

    #[test]
    fn basis_splits_repeated_factors() {
        let q = p("a^4 - a^2");
        let b = coprime_basis(std::slice::from_ref(&q));
        assert_eq!(b, vec![p("a"), p("a^2 - 1")]);
        assert_eq!(factor_over(&q, &b).unwrap().1, vec![2, 1]);
    }

    #[test]
    fn interpolated_resultant_matches_subresultants() {
        let cases = [
            ("a^3*b - 2*a*b^2 + 5", "3*a^2 - b^3 + a*b - 1"),
            ("a^2 + b^2 - 1", "a - b"),
            ("b*a^2 + a + b", "b^2*a - 1"),
            ("a^4 - 2*a^2*b + b^2 - b", "4*a^3 - 4*a*b"),
        ];
        for (x, y) in cases {
            let (x, y) = (p(x), p(y));
            // variable index 1 is `a`
            assert_eq!(resultant(&x, &y, 1), resultant_prs(&x, &y, 1), "{x} / {y}");
            assert_eq!(resultant(&x, &y, 2), resultant_prs(&x, &y, 2), "{x} / {y}");
        }
    }

    #[test]
    fn coprimality_certificate() {
        assert!(certified_coprime(&p("a^2 + b"), &p("a - b^2 + 1")));
        assert!(!certified_coprime(&p("(a + b)*(a - 1)"), &p("(a + b)*b")));
        assert_eq!(gcd(&p("(a + b)*(a - 1)"), &p("(a + b)*b")), p("a + b"));
    }
}
