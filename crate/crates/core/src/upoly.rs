//! Dense univariate polynomials over `Q` and exact real root isolation by
//! Descartes' rule of signs with bisection.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// `coeffs[k]` is the coefficient of `z^k`; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<BigRational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UPoly::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        UPoly::new(vec![c])
    }

    /// The variable `z`.
    pub fn z() -> Self {
        UPoly::new(vec![BigRational::zero(), BigRational::one()])
    }

    /// Reads a polynomial that uses at most the variable `var`.
    pub fn from_poly(p: &Poly, var: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); p.degree_in(var).map_or(0, |d| d as usize + 1)];
        for (m, c) in p.terms() {
            debug_assert!(m.exponents().iter().enumerate().all(|(i, &e)| i == var || e == 0));
            coeffs[m.exponent(var) as usize] += c;
        }
        UPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> i32 {
        sign_of(&self.eval(x))
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            out[i] += c;
        }
        UPoly::new(out)
    }

    pub fn neg(&self) -> UPoly {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigRational) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Euclidean division `self = q·d + r`.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.coeffs.len() < d.coeffs.len() {
            return (UPoly::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let dl = d.lc();
        let dd = d.degree();
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lc().recip();
        self.scale(&l)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return self.add(o).monic();
        }
        if self.degree() == 0 || o.degree() == 0 {
            return UPoly::constant(BigRational::one());
        }
        let g = gcd_int(&self.to_primitive_ints(), &o.to_primitive_ints());
        UPoly::new(g.into_iter().map(BigRational::from_integer).collect()).monic()
    }

    pub fn squarefree(&self) -> UPoly {
        if self.degree() == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Primitive integer coefficients with positive leading coefficient.
    pub fn to_primitive_ints(&self) -> Vec<BigInt> {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if g.is_zero() {
            return ints;
        }
        if ints.last().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        for c in ints.iter_mut() {
            *c = &*c / &g;
        }
        ints
    }

    /// Composition `self(q(z))`.
    pub fn compose(&self, q: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&UPoly::constant(c.clone()));
        }
        acc
    }
}

const PRIMES: [u64; 3] = [4_611_686_018_427_387_847, 4_611_686_018_427_387_817, 4_611_686_018_427_387_787];

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn reduce(c: &[BigInt], p: u64) -> Vec<u64> {
    let m = BigInt::from(p);
    c.iter().map(|x| x.mod_floor(&m).try_into().unwrap()).collect()
}

fn trim_mod(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Monic gcd over `Z/p`; empty for `gcd(0, 0)`.
fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim_mod(&mut a);
    trim_mod(&mut b);
    while !b.is_empty() {
        let inv = powmod(*b.last().unwrap(), p - 2, p);
        while a.len() >= b.len() {
            let f = mulmod(*a.last().unwrap(), inv, p);
            let shift = a.len() - b.len();
            for (i, &c) in b.iter().enumerate() {
                let t = mulmod(f, c, p);
                a[i + shift] = (a[i + shift] + p - t) % p;
            }
            trim_mod(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&l) = a.last() {
        let inv = powmod(l, p - 2, p);
        a.iter_mut().for_each(|c| *c = mulmod(*c, inv, p));
    }
    a
}

fn gcd_degree_mod(a: Vec<u64>, b: Vec<u64>, p: u64) -> usize {
    gcd_mod(a, b, p).len().saturating_sub(1)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let (mut d, mut r) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn content(c: &[BigInt]) -> BigInt {
    c.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

fn primitive(mut c: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = content(&c);
    if g.is_zero() {
        return c;
    }
    if c.last().is_some_and(|x| x.is_negative()) {
        g = -g;
    }
    c.iter_mut().for_each(|x| *x = &*x / &g);
    c
}

/// Whether `d` divides `a` over `Z[z]`.
fn divides_int(a: &[BigInt], d: &[BigInt]) -> bool {
    let mut r = a.to_vec();
    let ld = d.last().unwrap();
    while r.len() >= d.len() {
        let (q, rem) = r.last().unwrap().div_rem(ld);
        if !rem.is_zero() {
            return false;
        }
        let shift = r.len() - d.len();
        for (i, c) in d.iter().enumerate() {
            r[i + shift] -= &q * c;
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r.is_empty()
}

/// Primitive gcd with positive leading coefficient of two nonzero integer
/// polynomials, by reduction modulo word-size primes and Chinese remaindering.
pub fn gcd_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (a, b) = (primitive(a.to_vec()), primitive(b.to_vec()));
    let lcg = a.last().unwrap().gcd(b.last().unwrap());
    let mut p = 1u64 << 62;
    let mut dmin = usize::MAX;
    let mut acc: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut last: Option<Vec<BigInt>> = None;
    loop {
        p -= 1;
        while !is_prime_u64(p) {
            p -= 1;
        }
        let (ra, rb) = (reduce(&a, p), reduce(&b, p));
        if ra.last() == Some(&0) || rb.last() == Some(&0) {
            continue;
        }
        let g = gcd_mod(ra, rb, p);
        let d = g.len() - 1;
        if d == 0 {
            return vec![BigInt::one()];
        }
        if d > dmin {
            continue;
        }
        let l = reduce(std::slice::from_ref(&lcg), p)[0];
        let g: Vec<BigInt> = g.into_iter().map(|c| BigInt::from(mulmod(c, l, p))).collect();
        let bp = BigInt::from(p);
        if d < dmin {
            dmin = d;
            acc = g;
            modulus = bp;
            last = None;
        } else {
            // CRT: x ≡ acc mod m, x ≡ g mod p
            let inv = BigInt::from(powmod(reduce(std::slice::from_ref(&modulus), p)[0], p - 2, p));
            for (x, gp) in acc.iter_mut().zip(&g) {
                let t = ((gp - &*x) * &inv).mod_floor(&bp);
                *x += &modulus * t;
            }
            modulus *= bp;
        }
        let half = &modulus >> 1usize;
        let sym: Vec<BigInt> = acc.iter().map(|x| if x > &half { x - &modulus } else { x.clone() }).collect();
        let cand = primitive(sym);
        if last.as_ref() == Some(&cand) && divides_int(&a, &cand) && divides_int(&b, &cand) {
            return cand;
        }
        last = Some(cand);
    }
}

/// True when the integer polynomials are certainly coprime over `Q`: a
/// common factor would survive reduction modulo a prime dividing neither
/// leading coefficient.
pub fn coprime_modular(a: &[BigInt], b: &[BigInt]) -> bool {
    for &p in &PRIMES {
        let (ra, rb) = (reduce(a, p), reduce(b, p));
        if ra.last() == Some(&0) || rb.last() == Some(&0) {
            continue;
        }
        if gcd_degree_mod(ra, rb, p) == 0 {
            return true;
        }
    }
    false
}

pub fn sign_of(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn int_eval_sign(p: &[BigInt], x: &BigRational) -> i32 {
    // Horner on numerator/denominator keeps everything integral.
    let (num, den) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut den_pow = BigInt::one();
    for c in p.iter().rev() {
        acc = acc * num + c * &den_pow;
        den_pow *= den;
    }
    // acc = den^deg · p(x) up to the constant positive factor den^...
    if acc.is_positive() {
        1
    } else if acc.is_negative() {
        -1
    } else {
        0
    }
}

fn taylor_shift_int(p: &mut [BigInt], a: &BigInt) {
    let n = p.len();
    if a.is_zero() {
        return;
    }
    for i in 0..n {
        for k in (i..n - 1).rev() {
            let t = &p[k + 1] * a;
            p[k] += t;
        }
    }
}

fn sign_variations(coeffs: &[BigInt]) -> usize {
    let mut last = 0;
    let mut v = 0;
    for c in coeffs {
        let s = if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            continue;
        };
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// Descartes bound for the number of roots of `p` in the open interval `(a, b)`.
pub fn descartes_bound(p: &[BigInt], a: &BigRational, b: &BigRational) -> usize {
    debug_assert!(a < b);
    let n = p.len();
    if n <= 1 {
        return 0;
    }
    // q(x) = D^deg · p((A + W x)/D) with a = A/D, b - a = W/D.
    let d = a.denom().lcm(b.denom());
    let scale = BigRational::from_integer(d.clone());
    let a_int = (a * &scale).to_integer();
    let w_int = ((b - a) * &scale).to_integer();
    let deg = n - 1;
    let mut q: Vec<BigInt> = Vec::with_capacity(n);
    let mut dpow = BigInt::one();
    let mut dpows = vec![BigInt::one(); n];
    for k in 1..n {
        dpow *= &d;
        dpows[k] = dpow.clone();
    }
    for (i, c) in p.iter().enumerate() {
        q.push(c * &dpows[deg - i]);
    }
    taylor_shift_int(&mut q, &a_int);
    let mut wpow = BigInt::one();
    for c in q.iter_mut() {
        *c *= &wpow;
        wpow *= &w_int;
    }
    // roots in (0,1) ↔ positive roots of (x+1)^deg q(1/(x+1))
    q.reverse();
    taylor_shift_int(&mut q, &BigInt::one());
    sign_variations(&q)
}

/// A real root, either known exactly or isolated in an open interval whose
/// endpoints are not roots and carry opposite signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealRoot {
    Exact(BigRational),
    Interval(BigRational, BigRational),
}

impl RealRoot {
    pub fn lower(&self) -> &BigRational {
        match self {
            RealRoot::Exact(v) => v,
            RealRoot::Interval(lo, _) => lo,
        }
    }

    pub fn upper(&self) -> &BigRational {
        match self {
            RealRoot::Exact(v) => v,
            RealRoot::Interval(_, hi) => hi,
        }
    }

    pub fn width(&self) -> BigRational {
        self.upper() - self.lower()
    }

    /// Rational approximation (midpoint of the interval).
    pub fn approx(&self) -> BigRational {
        (self.lower() + self.upper()) / BigRational::from_integer(2.into())
    }
}

fn cauchy_bound(p: &[BigInt]) -> BigRational {
    let lead = p.last().unwrap().abs();
    let mut m = BigInt::zero();
    for c in &p[..p.len() - 1] {
        if c.abs() > m {
            m = c.abs();
        }
    }
    // 1 + max|a_i / a_n|, rounded up to a power of two
    let bound = BigRational::one() + BigRational::new(m, lead);
    let mut b = BigRational::one();
    let two = BigRational::from_integer(2.into());
    while b < bound {
        b *= &two;
    }
    b
}

/// Isolates all real roots of the squarefree part of `p`, sorted increasingly.
pub fn isolate_real_roots(p: &UPoly) -> Vec<RealRoot> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let sq = p.squarefree();
    let mut ints = sq.to_primitive_ints();
    let mut out = Vec::new();
    if ints[0].is_zero() {
        out.push(RealRoot::Exact(BigRational::zero()));
        ints.remove(0);
    }
    // with a root at 0 divided out, endpoints at 0 are fine for refinement
    let red = UPoly::new(ints.iter().map(|c| BigRational::from_integer(c.clone())).collect());
    let b = cauchy_bound(&ints);
    let (k, bound) = (b.to_integer().bits() - 1, b.to_integer());
    let mirrored: Vec<BigInt> =
        ints.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect();
    for (q, neg) in [(&ints, false), (&mirrored, true)] {
        for (c, lvl, exact) in isolate_unit(q, k) {
            // root interval (c, c+1)/2^lvl on the scale where the bound is 1
            let den = BigInt::one() << lvl;
            let lo = BigRational::new(&c * &bound, den.clone());
            let hi = BigRational::new((&c + 1) * &bound, den);
            let (lo, hi) = if neg { (-hi, -lo) } else { (lo, hi) };
            out.push(if exact {
                RealRoot::Exact(if neg { hi } else { lo })
            } else {
                RealRoot::Interval(lo, hi)
            });
        }
    }
    let mut roots: Vec<RealRoot> = out
        .into_iter()
        .map(|r| match r {
            RealRoot::Interval(lo, hi) => {
                let mut r = tighten(&ints, lo, hi);
                // unit width keeps sample points beyond the extreme roots small
                while r.width() > BigRational::one() {
                    r = refine(&red, &r);
                }
                r
            }
            e => e,
        })
        .collect();
    roots.sort_by(|a, b| a.lower().cmp(b.lower()));
    roots
}

/// Positive roots of `p` below `2^k` by Descartes bisection on the unit
/// interval. Items are `(c, level, exact)`: an isolating interval
/// `(c, c+1)/2^level`, or with `exact` the root `c/2^level`.
fn isolate_unit(p: &[BigInt], k: u64) -> Vec<(BigInt, u64, bool)> {
    let d = p.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    // q(x) = p(2^k x)
    let root: Vec<BigInt> = p.iter().enumerate().map(|(i, c)| c << (k as usize * i)).collect();
    let mut out = Vec::new();
    let mut stack = vec![(root, BigInt::zero(), 0u64)];
    while let Some((q, c, lvl)) = stack.pop() {
        let mut r: Vec<BigInt> = q.iter().rev().cloned().collect();
        taylor_shift_int(&mut r, &BigInt::one());
        let v = sign_variations(&r);
        if v == 0 {
            continue;
        }
        if v == 1 {
            out.push((c, lvl, false));
            continue;
        }
        let dq = q.len() - 1;
        let mut left: Vec<BigInt> = q.iter().enumerate().map(|(i, a)| a << (dq - i)).collect();
        let g = left.iter().fold(BigInt::zero(), |g, a| g.gcd(a));
        if g > BigInt::one() {
            for a in left.iter_mut() {
                *a /= &g;
            }
        }
        let mut right = left.clone();
        taylor_shift_int(&mut right, &BigInt::one());
        let c2: BigInt = &c << 1usize;
        if right[0].is_zero() {
            out.push((&c2 + 1, lvl + 1, true));
            right.remove(0);
        }
        stack.push((right, c2.clone() + 1, lvl + 1));
        stack.push((left, c2, lvl + 1));
    }
    out
}

/// Makes interval endpoints non-roots (bisecting if needed).
fn tighten(p: &[BigInt], mut lo: BigRational, mut hi: BigRational) -> RealRoot {
    let two = BigRational::from_integer(2.into());
    loop {
        let slo = int_eval_sign(p, &lo);
        let shi = int_eval_sign(p, &hi);
        if slo != 0 && shi != 0 && slo != shi {
            return RealRoot::Interval(lo, hi);
        }
        let mid = (&lo + &hi) / &two;
        if int_eval_sign(p, &mid) == 0 {
            return RealRoot::Exact(mid);
        }
        if descartes_bound(p, &lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// Halves an isolating interval of a root of the squarefree `p`.
pub fn refine(p: &UPoly, root: &RealRoot) -> RealRoot {
    match root {
        RealRoot::Exact(_) => root.clone(),
        RealRoot::Interval(lo, hi) => {
            let two = BigRational::from_integer(2.into());
            let mid = (lo + hi) / &two;
            let smid = p.sign_at(&mid);
            if smid == 0 {
                return RealRoot::Exact(mid);
            }
            // an endpoint may be a root of another factor of `p`
            let slo = p.sign_at(lo);
            let left = if slo != 0 { slo * smid < 0 } else { p.sign_at(hi) * smid > 0 };
            if left {
                RealRoot::Interval(lo.clone(), mid)
            } else {
                RealRoot::Interval(mid, hi.clone())
            }
        }
    }
}

/// Smallest interval width before giving up on deciding a sign.
const MAX_REFINEMENTS: usize = 128;

/// Sign of `q` at a root of the squarefree polynomial `p`, decided exactly:
/// a common root is detected through `gcd(p, q)`, otherwise the interval is
/// refined until `q` has no root in it.
pub fn sign_at_root(p: &UPoly, root: &RealRoot, q: &UPoly) -> Result<i32> {
    if q.is_zero() {
        return Ok(0);
    }
    let (mut lo, mut hi) = match root {
        RealRoot::Exact(v) => return Ok(q.sign_at(v)),
        RealRoot::Interval(lo, hi) => (lo.clone(), hi.clone()),
    };
    let g = p.gcd(q);
    if g.degree() > 0 && g.sign_at(&lo) * g.sign_at(&hi) < 0 {
        return Ok(0);
    }
    let qi = q.to_primitive_ints();
    let two = BigRational::from_integer(2.into());
    for _ in 0..=MAX_REFINEMENTS {
        if descartes_bound(&qi, &lo, &hi) == 0 {
            // no root of q strictly inside, and the root of p is interior
            return Ok(q.sign_at(&((&lo + &hi) / &two)));
        }
        match refine(p, &RealRoot::Interval(lo.clone(), hi.clone())) {
            RealRoot::Exact(v) => return Ok(q.sign_at(&v)),
            RealRoot::Interval(a, b) => {
                lo = a;
                hi = b;
            }
        }
    }
    Err(Error::NeedsExactRoot)
}

/// Simplest rational (smallest denominator, then smallest magnitude) in the
/// open interval `(a, b)`.
pub fn simplest_between(a: &BigRational, b: &BigRational) -> BigRational {
    assert!(a < b, "empty interval");
    let zero = BigRational::zero();
    if a < &zero && b > &zero {
        return zero;
    }
    if b <= &zero {
        return -simplest_between(&-b, &-a);
    }
    let fl = a.floor();
    let next = &fl + BigRational::one();
    if &next < b {
        return next;
    }
    let fa = a - &fl;
    let fb = b - &fl;
    if fa.is_zero() {
        let inner = fb.recip().floor() + BigRational::one();
        return fl + inner.recip();
    }
    fl + simplest_between(&fb.recip(), &fa.recip()).recip()
}

/// One rational point in every open interval cut out by the roots, plus one
/// beyond each end; with no roots, the single point 0.
pub fn points_between_roots(roots: &[RealRoot]) -> Vec<BigRational> {
    if roots.is_empty() {
        return vec![BigRational::zero()];
    }
    let one = BigRational::one();
    let mut pts = Vec::with_capacity(roots.len() + 1);
    pts.push(roots[0].lower().floor() - &one);
    for w in roots.windows(2) {
        let (left, right) = (w[0].upper(), w[1].lower());
        let pt = match left.cmp(right) {
            Ordering::Equal => left.clone(),
            Ordering::Less => simplest_between(left, right),
            Ordering::Greater => panic!("overlapping isolating intervals"),
        };
        pts.push(pt);
    }
    pts.push(roots.last().unwrap().upper().ceil() + &one);
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn isolates_quadratic_roots() {
        let p = UPoly::from_ints(&[-2, 0, 1]);
        let roots = isolate_real_roots(&p);
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!(p.sign_at(r.lower()) * p.sign_at(r.upper()) < 0);
        }
        assert!(roots[0].upper() < roots[1].lower());
    }

    #[test]
    fn exact_roots_and_sample_points() {
        let p = UPoly::from_ints(&[-1, 0, 1]);
        let roots = isolate_real_roots(&p);
        assert_eq!(roots.len(), 2);
        let pts = points_between_roots(&roots);
        assert_eq!(pts, vec![q(-2, 1), q(0, 1), q(2, 1)]);
        let pts = points_between_roots(&isolate_real_roots(&UPoly::from_ints(&[0, 1])));
        assert_eq!(pts, vec![q(-1, 1), q(1, 1)]);
    }

    #[test]
    fn repeated_roots_are_counted_once() {
        // (z-1)^3 (z+2)
        let p = UPoly::from_ints(&[-1, 3, -3, 1]).mul(&UPoly::from_ints(&[2, 1]));
        assert_eq!(isolate_real_roots(&p).len(), 2);
        assert!(isolate_real_roots(&UPoly::from_ints(&[1, 0, 1])).is_empty());
    }

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_between(&q(1, 3), &q(1, 2)), q(2, 5));
        assert_eq!(simplest_between(&q(-1, 2), &q(3, 1)), q(0, 1));
        assert_eq!(simplest_between(&q(1, 1), &q(3, 2)), q(4, 3));
        assert_eq!(simplest_between(&q(-3, 2), &q(-1, 1)), q(-4, 3));
    }

    #[test]
    fn modular_coprimality() {
        let ints = |v: &[i64]| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
        assert!(coprime_modular(&ints(&[-2, 0, 1]), &ints(&[-3, 1])));
        assert!(!coprime_modular(&ints(&[-2, 1, 1]), &ints(&[-1, 1])));
        let p = UPoly::from_ints(&[-1, 0, 1]);
        assert_eq!(p.gcd(&UPoly::from_ints(&[1, 1])), UPoly::from_ints(&[1, 1]));
        assert_eq!(p.gcd(&UPoly::from_ints(&[2, 1])), UPoly::from_ints(&[1]));
    }

    #[test]
    fn signs_at_algebraic_roots() {
        // roots ±sqrt(2); q = z: signs -, +; q = z^2 - 2 vanishes
        let p = UPoly::from_ints(&[-2, 0, 1]);
        let roots = isolate_real_roots(&p);
        assert_eq!(sign_at_root(&p, &roots[0], &UPoly::z()).unwrap(), -1);
        assert_eq!(sign_at_root(&p, &roots[1], &UPoly::z()).unwrap(), 1);
        assert_eq!(sign_at_root(&p, &roots[1], &UPoly::from_ints(&[-4, 0, 2])).unwrap(), 0);
        // z - 1.41 is negative at sqrt(2)? 1.41 < 1.4142 so positive
        let lin = UPoly::new(vec![q(-141, 100), q(1, 1)]);
        assert_eq!(sign_at_root(&p, &roots[1], &lin).unwrap(), 1);
        let lin = UPoly::new(vec![q(-1415, 1000), q(1, 1)]);
        assert_eq!(sign_at_root(&p, &roots[1], &lin).unwrap(), -1);
    }

    proptest! {
        #[test]
        fn root_count_matches_product_of_linear_factors(rs in proptest::collection::btree_set(-20i64..20, 0..6)) {
            let mut p = UPoly::from_ints(&[1]);
            for r in &rs {
                p = p.mul(&UPoly::from_ints(&[-r, 1]));
            }
            // an irreducible quadratic factor adds no real roots
            p = p.mul(&UPoly::from_ints(&[3, 1, 1]));
            let roots = isolate_real_roots(&p);
            prop_assert_eq!(roots.len(), rs.len());
            for (root, r) in roots.iter().zip(rs.iter()) {
                let v = q(*r, 1);
                prop_assert!(root.lower() <= &v && &v <= root.upper());
            }
            let pts = points_between_roots(&roots);
            prop_assert_eq!(pts.len(), rs.len() + 1);
            for pt in &pts {
                prop_assert!(p.sign_at(pt) != 0);
            }
        }
    }
}
