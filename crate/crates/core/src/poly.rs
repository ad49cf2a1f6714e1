//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables are split into unknowns `x_1 ≻ … ≻ x_n` followed by parameters
//! `y_1 ≻ … ≻ y_t`; index `i < n` is an unknown, `i ≥ n` a parameter. Terms
//! are always kept sorted decreasingly for the block elimination ordering
//! (grevlex on the unknowns, ties broken by grevlex on the parameters), which
//! restricts to plain grevlex on polynomials living in one block only.

use std::cmp::Ordering as CmpOrdering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Names of the unknowns and parameters, in decreasing variable order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSpace {
    unknowns: Vec<String>,
    parameters: Vec<String>,
}

impl VarSpace {
    pub fn new<S: AsRef<str>>(unknowns: &[S], parameters: &[S]) -> Result<Arc<Self>> {
        let unknowns: Vec<String> = unknowns.iter().map(|s| s.as_ref().to_string()).collect();
        let parameters: Vec<String> = parameters.iter().map(|s| s.as_ref().to_string()).collect();
        if unknowns.is_empty() {
            return Err(Error::InvalidInput("at least one unknown is required".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for name in unknowns.iter().chain(parameters.iter()) {
            if !is_identifier(name) {
                return Err(Error::InvalidInput(format!("`{name}` is not a valid variable name")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidInput(format!("variable `{name}` declared twice")));
            }
        }
        Ok(Arc::new(VarSpace { unknowns, parameters }))
    }

    /// Number of unknowns.
    pub fn n(&self) -> usize {
        self.unknowns.len()
    }

    /// Number of parameters.
    pub fn t(&self) -> usize {
        self.parameters.len()
    }

    pub fn nvars(&self) -> usize {
        self.unknowns.len() + self.parameters.len()
    }

    pub fn unknowns(&self) -> &[String] {
        &self.unknowns
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn name(&self, index: usize) -> &str {
        if index < self.n() {
            &self.unknowns[index]
        } else {
            &self.parameters[index - self.n()]
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.unknowns
            .iter()
            .chain(self.parameters.iter())
            .position(|v| v == name)
    }

    /// The space with the same unknowns and no parameters.
    pub fn unknowns_only(&self) -> Arc<VarSpace> {
        Arc::new(VarSpace { unknowns: self.unknowns.clone(), parameters: Vec::new() })
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Exponent vector over all variables of a space (unknowns first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0[index]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn degree_x(&self, n: usize) -> u32 {
        self.0[..n].iter().sum()
    }

    pub fn degree_y(&self, n: usize) -> u32 {
        self.0[n..].iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// The monomial with all parameter exponents cleared.
    pub fn x_part(&self, n: usize) -> Monomial {
        let mut e = self.0.clone();
        e[n..].iter_mut().for_each(|v| *v = 0);
        Monomial(e)
    }

    /// The monomial with all unknown exponents cleared.
    pub fn y_part(&self, n: usize) -> Monomial {
        let mut e = self.0.clone();
        e[..n].iter_mut().for_each(|v| *v = 0);
        Monomial(e)
    }
}

fn grevlex(a: &[u32], b: &[u32]) -> CmpOrdering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    if da != db {
        return da.cmp(&db);
    }
    for (ea, eb) in a.iter().zip(b).rev() {
        if ea != eb {
            // smaller exponent on the last differing variable wins
            return eb.cmp(ea);
        }
    }
    CmpOrdering::Equal
}

pub(crate) fn block_cmp(n: usize, a: &Monomial, b: &Monomial) -> CmpOrdering {
    grevlex(&a.0[..n], &b.0[..n]).then_with(|| grevlex(&a.0[n..], &b.0[n..]))
}

/// Monomial orderings used by the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    /// grevlex on the unknown exponents only.
    GrevlexUnknowns,
    /// grevlex on the parameter exponents only.
    GrevlexParameters,
    /// grevlex on unknowns, ties broken by grevlex on parameters.
    BlockElimination,
}

pub fn compare(space: &VarSpace, m1: &Monomial, m2: &Monomial, ord: Ordering) -> Result<CmpOrdering> {
    let nv = space.nvars();
    if m1.0.len() != nv || m2.0.len() != nv {
        return Err(Error::SpaceMismatch);
    }
    let n = space.n();
    Ok(match ord {
        Ordering::GrevlexUnknowns => grevlex(&m1.0[..n], &m2.0[..n]),
        Ordering::GrevlexParameters => grevlex(&m1.0[n..], &m2.0[n..]),
        Ordering::BlockElimination => block_cmp(n, m1, m2),
    })
}

/// A polynomial in `Q[y][x]`, terms sorted decreasingly in block order.
#[derive(Clone)]
pub struct Poly {
    space: Arc<VarSpace>,
    terms: Vec<(Monomial, BigRational)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

pub(crate) fn same_space(a: &Arc<VarSpace>, b: &Arc<VarSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked binary arithmetic.
pub fn poly_arith(p: &Poly, q: &Poly, op: ArithOp) -> Result<Poly> {
    if !same_space(&p.space, &q.space) {
        return Err(Error::SpaceMismatch);
    }
    Ok(match op {
        ArithOp::Add => p.add(q),
        ArithOp::Sub => p.sub(q),
        ArithOp::Mul => p.mul(q),
    })
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

// Integer fast paths: `Ratio` normalizes through a binary gcd even when
// both denominators are 1, which is quadratic in the operand size.

#[inline]
pub(crate) fn q_add(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_integer() && b.is_integer() {
        BigRational::from_integer(a.numer() + b.numer())
    } else {
        a + b
    }
}

#[inline]
pub(crate) fn q_sub(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_integer() && b.is_integer() {
        BigRational::from_integer(a.numer() - b.numer())
    } else {
        a - b
    }
}

#[inline]
pub(crate) fn q_mul(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_integer() && b.is_integer() {
        BigRational::from_integer(a.numer() * b.numer())
    } else {
        a * b
    }
}

#[inline]
pub(crate) fn q_div(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_integer() && b.is_integer() {
        let (q, r) = num_integer::Integer::div_rem(a.numer(), b.numer());
        if r.is_zero() {
            return BigRational::from_integer(q);
        }
    }
    a / b
}

impl Poly {
    pub fn zero(space: &Arc<VarSpace>) -> Poly {
        Poly { space: space.clone(), terms: Vec::new() }
    }

    pub fn one(space: &Arc<VarSpace>) -> Poly {
        Poly::constant(space, BigRational::one())
    }

    pub fn constant(space: &Arc<VarSpace>, c: BigRational) -> Poly {
        let mut p = Poly::zero(space);
        if !c.is_zero() {
            p.terms.push((Monomial::one(space.nvars()), c));
        }
        p
    }

    pub fn var(space: &Arc<VarSpace>, index: usize) -> Poly {
        Poly {
            space: space.clone(),
            terms: vec![(Monomial::var(space.nvars(), index), BigRational::one())],
        }
    }

    pub fn monomial(space: &Arc<VarSpace>, m: Monomial, c: BigRational) -> Poly {
        let mut p = Poly::zero(space);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Builds a polynomial from arbitrary (possibly repeated, zero) terms.
    pub fn from_terms<I>(space: &Arc<VarSpace>, terms: I) -> Poly
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.0.len(), space.nvars());
            *acc.entry(m).or_insert_with(BigRational::zero) += c;
        }
        Self::from_map(space, acc)
    }

    fn from_map(space: &Arc<VarSpace>, acc: HashMap<Monomial, BigRational>) -> Poly {
        let n = space.n();
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| block_cmp(n, &b.0, &a.0));
        Poly { space: space.clone(), terms }
    }

    /// Terms already sorted decreasingly, without duplicates or zeros.
    pub(crate) fn from_sorted_terms(space: &Arc<VarSpace>, terms: Vec<(Monomial, BigRational)>) -> Poly {
        debug_assert!(terms.windows(2).all(|w| block_cmp(space.n(), &w[0].0, &w[1].0) == CmpOrdering::Greater));
        Poly { space: space.clone(), terms }
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && !self.is_zero() && self.terms[0].1.is_one()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    /// Coefficient of the constant term.
    pub fn constant_term(&self) -> BigRational {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => BigRational::zero(),
        }
    }

    pub fn leading_term(&self) -> Option<&(Monomial, BigRational)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.terms.first().map(|t| &t.1)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn degree_x(&self) -> Option<u32> {
        let n = self.space.n();
        self.terms.iter().map(|(m, _)| m.degree_x(n)).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        let n = self.space.n();
        self.terms.iter().map(|(m, _)| m.degree_y(n)).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.0[var]).max()
    }

    /// True when no unknown appears.
    pub fn is_pure_parameter(&self) -> bool {
        let n = self.space.n();
        self.terms.iter().all(|(m, _)| m.degree_x(n) == 0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.0[var] > 0)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.space);
        }
        Poly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), q_mul(a, c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.space);
        }
        Poly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), q_mul(a, c))).collect(),
        }
    }

    fn merge(&self, other: &Poly, negate_other: bool) -> Poly {
        assert!(same_space(&self.space, &other.space), "polynomials from different spaces");
        let n = self.space.n();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match block_cmp(n, &a[i].0, &b[j].0) {
                CmpOrdering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                CmpOrdering::Less => {
                    let c = if negate_other { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                CmpOrdering::Equal => {
                    let c = if negate_other { q_sub(&a[i].1, &b[j].1) } else { q_add(&a[i].1, &b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate_other { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Poly { space: self.space.clone(), terms: out }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert!(same_space(&self.space, &other.space), "polynomials from different spaces");
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.space);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_monomial(m, c);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_monomial(m, c);
        }
        let mut acc: HashMap<Monomial, BigRational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = q_mul(ca, cb);
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        let v = e.get_mut();
                        *v = q_add(v, &prod);
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        Self::from_map(&self.space, acc)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.space);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[var] > 0)
            .map(|(m, c)| {
                let mut e = m.0.clone();
                let k = e[var];
                e[var] -= 1;
                (Monomial(e), c * rat(k as i64))
            });
        Poly::from_terms(&self.space, terms)
    }

    /// Evaluates every variable; `point` has length `nvars`.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.space.nvars());
        if self.terms.is_empty() {
            return BigRational::zero();
        }
        // integer arithmetic throughout, one division at the end:
        // p(n/d) · L · ∏ d_i^{D_i} = Σ (L c) ∏ n_i^{e_i} d_i^{D_i − e_i}
        let nv = point.len();
        let mut top = vec![0u32; nv];
        let mut lcm = BigInt::one();
        for (m, c) in &self.terms {
            for (t, &e) in top.iter_mut().zip(&m.0) {
                *t = (*t).max(e);
            }
            if !c.is_integer() {
                lcm = num_integer::Integer::lcm(&lcm, c.denom());
            }
        }
        let table = |base: &BigInt, k: u32| {
            let mut v = Vec::with_capacity(k as usize + 1);
            v.push(BigInt::one());
            for _ in 0..k {
                let next = v.last().unwrap() * base;
                v.push(next);
            }
            v
        };
        let nums: Vec<Vec<BigInt>> = (0..nv).map(|i| table(point[i].numer(), top[i])).collect();
        let dens: Vec<Vec<BigInt>> = (0..nv).map(|i| table(point[i].denom(), top[i])).collect();
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut v = if lcm.is_one() { c.numer().clone() } else { c.numer() * (&lcm / c.denom()) };
            for (i, &e) in m.0.iter().enumerate() {
                if top[i] == 0 {
                    continue;
                }
                if e > 0 {
                    v *= &nums[i][e as usize];
                }
                if !point[i].is_integer() && e < top[i] {
                    v *= &dens[i][(top[i] - e) as usize];
                }
            }
            total += v;
        }
        let mut den = lcm;
        for i in 0..nv {
            if !point[i].is_integer() {
                den *= &dens[i][top[i] as usize];
            }
        }
        BigRational::new(total, den)
    }

    /// Evaluates a pure-parameter polynomial at `eta ∈ Q^t`.
    pub fn eval_params(&self, eta: &[BigRational]) -> BigRational {
        let n = self.space.n();
        assert_eq!(eta.len(), self.space.t());
        let mut point = vec![BigRational::zero(); n];
        point.extend_from_slice(eta);
        debug_assert!(self.is_pure_parameter());
        self.eval(&point)
    }

    /// Substitutes `y = eta`, keeping the result in the same space.
    pub fn subs_params(&self, eta: &[BigRational]) -> Poly {
        let n = self.space.n();
        assert_eq!(eta.len(), self.space.t());
        let terms = self.terms.iter().map(|(m, c)| {
            let mut v = c.clone();
            for (k, y) in eta.iter().enumerate() {
                let e = m.0[n + k];
                if e > 0 {
                    v *= pow_rat(y, e);
                }
            }
            (m.x_part(n), v)
        });
        Poly::from_terms(&self.space, terms)
    }

    /// Substitutes `y = eta` and moves the result into `target`, a space
    /// with the same unknowns and no parameters.
    pub fn specialize(&self, eta: &[BigRational], target: &Arc<VarSpace>) -> Poly {
        let n = self.space.n();
        assert_eq!(target.nvars(), n);
        let p = self.subs_params(eta);
        Poly::from_terms(target, p.terms.into_iter().map(|(m, c)| (Monomial(m.0[..n].to_vec()), c)))
    }

    /// Composition: variable `i` is replaced by `images[i]`, all in `target`.
    pub fn substitute(&self, images: &[Poly], target: &Arc<VarSpace>) -> Poly {
        assert_eq!(images.len(), self.space.nvars());
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(target), p.clone()]).collect();
        let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut v = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(&cache[1]);
                    cache.push(next);
                }
                v = v.mul(&cache[e as usize]);
            }
            for (mm, cc) in v.terms {
                *acc.entry(mm).or_insert_with(BigRational::zero) += cc;
            }
        }
        Self::from_map(target, acc)
    }

    /// Re-embeds a polynomial into another space via a variable map
    /// (`map[i]` is the index in `target` of variable `i`).
    pub fn rename_into(&self, map: &[usize], target: &Arc<VarSpace>) -> Poly {
        let nv = target.nvars();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0u32; nv];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] += k;
            }
            (Monomial(e), c.clone())
        });
        Poly::from_terms(target, terms)
    }

    /// Leading x-monomial (grevlex on unknowns) and its coefficient in `Q[y]`.
    pub fn leading_data_x(&self) -> Result<(Monomial, Poly)> {
        let n = self.space.n();
        let first = self
            .terms
            .first()
            .ok_or_else(|| Error::InvalidInput("leading data of the zero polynomial".into()))?;
        let lm = first.0.x_part(n);
        let lc_terms: Vec<_> = self
            .terms
            .iter()
            .take_while(|(m, _)| m.x_part(n) == lm)
            .map(|(m, c)| (m.y_part(n), c.clone()))
            .collect();
        Ok((lm, Poly::from_sorted_terms(&self.space, lc_terms)))
    }

    /// Groups terms by their x-part, in decreasing x order; each coefficient
    /// is a pure-parameter polynomial.
    pub fn x_groups(&self) -> Vec<(Monomial, Poly)> {
        let n = self.space.n();
        let mut out: Vec<(Monomial, Poly)> = Vec::new();
        let mut start = 0;
        while start < self.terms.len() {
            let xm = self.terms[start].0.x_part(n);
            let mut end = start;
            while end < self.terms.len() && self.terms[end].0.x_part(n) == xm {
                end += 1;
            }
            let coeff: Vec<_> = self.terms[start..end]
                .iter()
                .map(|(m, c)| (m.y_part(n), c.clone()))
                .collect();
            out.push((xm, Poly::from_sorted_terms(&self.space, coeff)));
            start = end;
        }
        out
    }

    /// Coefficients as a univariate polynomial in `var`: `result[k]` is the
    /// coefficient of `var^k`.
    pub fn coeffs_in(&self, var: usize) -> Vec<Poly> {
        let deg = match self.degree_in(var) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut buckets: Vec<Vec<(Monomial, BigRational)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut e = m.0.clone();
            e[var] = 0;
            buckets[k].push((Monomial(e), c.clone()));
        }
        // removing one variable keeps the relative order of the remaining terms
        buckets
            .into_iter()
            .map(|ts| Poly::from_sorted_terms(&self.space, ts))
            .collect()
    }

    pub fn from_coeffs_in(space: &Arc<VarSpace>, var: usize, coeffs: &[Poly]) -> Poly {
        let mut acc = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut e = m.0.clone();
                e[var] += k as u32;
                acc.push((Monomial(e), a.clone()));
            }
        }
        Poly::from_terms(space, acc)
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert!(same_space(&self.space, &divisor.space));
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let (dm, dc) = divisor.terms[0].clone();
        if divisor.terms.len() == 1 {
            let inv = dc.recip();
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                out.push((dm.quotient_of(m)?, c * &inv));
            }
            return Some(Poly { space: self.space.clone(), terms: out });
        }
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let q = dm.quotient_of(&m)?;
            let qc = q_div(&c, &dc);
            rem = rem.sub(&divisor.mul_monomial(&q, &qc));
            quot.push((q, qc));
        }
        Some(Poly { space: self.space.clone(), terms: quot })
    }

    /// Positive rational content `c` and primitive integer polynomial `p`
    /// with `self = c * p`, leading coefficient of `p` positive.
    pub fn primitive_part(&self) -> (BigRational, Poly) {
        if self.is_zero() {
            return (BigRational::one(), self.clone());
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for (_, c) in &self.terms {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.terms[0].1.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// Primitive integer form with positive leading coefficient.
    pub fn normalized(&self) -> Poly {
        self.primitive_part().1
    }

    /// Same polynomial divided by its leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            Some(c) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    pub fn to_string_in(&self) -> String {
        self.to_string()
    }
}

pub(crate) fn pow_rat(base: &BigRational, e: u32) -> BigRational {
    num_traits::pow::pow(base.clone(), e as usize)
}

fn fmt_monomial(space: &VarSpace, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(space.name(i).to_string()),
            _ => parts.push(format!("{}^{}", space.name(i), e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", fmt_monomial(&self.space, m))?;
            } else {
                write!(f, "{}*{}", abs, fmt_monomial(&self.space, m))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn space() -> Arc<VarSpace> {
        VarSpace::new(&["x1", "x2"], &["y1", "y2"]).unwrap()
    }

    fn p(s: &str) -> Poly {
        parse_poly(&space(), s).unwrap()
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn grevlex_examples() {
        let sp = space();
        let c = compare(&sp, &mono(&[2, 0, 0, 0]), &mono(&[1, 1, 0, 0]), Ordering::GrevlexUnknowns).unwrap();
        assert_eq!(c, CmpOrdering::Greater);
        let c = compare(&sp, &mono(&[0, 0, 0, 0]), &mono(&[1, 0, 0, 0]), Ordering::GrevlexUnknowns).unwrap();
        assert_eq!(c, CmpOrdering::Less);
        let c = compare(&sp, &mono(&[0, 0, 3, 0]), &mono(&[1, 0, 0, 0]), Ordering::BlockElimination).unwrap();
        assert_eq!(c, CmpOrdering::Less);
    }

    #[test]
    fn compare_rejects_foreign_monomials() {
        let sp = space();
        assert_eq!(
            compare(&sp, &mono(&[1, 0]), &mono(&[0, 1, 0, 0]), Ordering::BlockElimination),
            Err(Error::SpaceMismatch)
        );
    }

    #[test]
    fn arithmetic_examples() {
        let x = |s| p(s);
        assert_eq!(x("(x1+y1) + (x1-y1)"), x("2*x1"));
        assert_eq!(x("x1+y1").add(&x("x1-y1")), x("2*x1"));
        assert_eq!(x("x1-1").mul(&x("x1+1")), x("x1^2-1"));
        assert_eq!(x("x1*y2 - 3").add(&Poly::zero(&space())), x("x1*y2 - 3"));
        let other = VarSpace::new(&["z"], &[]).unwrap();
        assert!(poly_arith(&x("x1"), &Poly::var(&other, 0), ArithOp::Add).is_err());
    }

    #[test]
    fn leading_data_examples() {
        let (lm, lc) = p("y1*x1^2 + x2").leading_data_x().unwrap();
        assert_eq!(lm, mono(&[2, 0, 0, 0]));
        assert_eq!(lc, p("y1"));
        let (lm, lc) = p("(y1+1)*x1 + y2").leading_data_x().unwrap();
        assert_eq!(lm, mono(&[1, 0, 0, 0]));
        assert_eq!(lc, p("y1+1"));
        let (lm, lc) = p("y1^2").leading_data_x().unwrap();
        assert!(lm.is_one());
        assert_eq!(lc, p("y1^2"));
        assert!(Poly::zero(&space()).leading_data_x().is_err());
    }

    #[test]
    fn exact_division() {
        let a = p("x1^2*y1 - y1*y2^2");
        let b = p("x1 - y2");
        assert_eq!(a.div_exact(&b).unwrap(), p("x1*y1 + y1*y2"));
        assert!(p("x1^2 + 1").div_exact(&b).is_none());
    }

    #[test]
    fn univariate_views_roundtrip() {
        let a = p("3*x1^2*y1 - x1*y2 + x2 + 7");
        let cs = a.coeffs_in(0);
        assert_eq!(cs.len(), 3);
        assert_eq!(Poly::from_coeffs_in(&space(), 0, &cs), a);
    }

    #[test]
    fn primitive_part_is_integral_with_positive_lead() {
        let a = p("-2/3*x1 + 4/9*y1");
        let (c, pp) = a.primitive_part();
        assert_eq!(pp, p("3*x1 - 2*y1"));
        assert_eq!(pp.scale(&c), a);
    }

    #[test]
    fn display_formats() {
        assert_eq!(p("x1^2 - 1/2*x1*y1 + 3").to_string(), "x1^2 - 1/2*x1*y1 + 3");
        assert_eq!(p("-x2 + y2").to_string(), "-x2 + y2");
        assert_eq!(Poly::zero(&space()).to_string(), "0");
    }
}
