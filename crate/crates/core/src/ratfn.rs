//! Elements of `Q(y)` whose denominators factor over a fixed coprime basis
//! of polynomials (the leading coefficients of a Gröbner basis).  This is
//! enough to express every normal form over `K` without general
//! rational-function gcds.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::Scalar;
use crate::poly::Poly;

#[derive(Clone)]
pub struct RatFn {
    num: Poly,
    den: Vec<u32>,
    basis: Arc<Vec<Poly>>,
}

impl RatFn {
    /// `num / ∏ basis[j]^den[j]`, cancelled where possible.
    pub fn new(num: Poly, den: Vec<u32>, basis: Arc<Vec<Poly>>) -> RatFn {
        assert_eq!(den.len(), basis.len());
        let mut r = RatFn { num, den, basis };
        r.cancel();
        r
    }

    pub fn from_poly(num: Poly, basis: &Arc<Vec<Poly>>) -> RatFn {
        RatFn { num, den: vec![0; basis.len()], basis: basis.clone() }
    }

    pub fn basis(&self) -> &Arc<Vec<Poly>> {
        &self.basis
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator_exponents(&self) -> &[u32] {
        &self.den
    }

    pub fn denominator(&self) -> Poly {
        let mut acc = Poly::one(self.num.space());
        for (b, &e) in self.basis.iter().zip(&self.den) {
            if e > 0 {
                acc = acc.mul(&b.pow(e));
            }
        }
        acc
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.iter().all(|&e| e == 0)
    }

    pub fn as_polynomial(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    /// Total degree of numerator minus that of denominator; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        let d = self.num.degree()? as i64;
        let dd: i64 = self
            .basis
            .iter()
            .zip(&self.den)
            .map(|(b, &e)| b.degree().unwrap_or(0) as i64 * e as i64)
            .sum();
        Some(d - dd)
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.iter_mut().for_each(|e| *e = 0);
            return;
        }
        for (j, b) in self.basis.iter().enumerate() {
            while self.den[j] > 0 {
                match self.num.div_exact(b) {
                    Some(q) => {
                        self.num = q;
                        self.den[j] -= 1;
                    }
                    None => break,
                }
            }
        }
    }

    fn lift(&self, target: &[u32]) -> Poly {
        let mut out = self.num.clone();
        for ((b, &have), &want) in self.basis.iter().zip(&self.den).zip(target) {
            if want > have {
                out = out.mul(&b.pow(want - have));
            }
        }
        out
    }

    fn add_signed(&self, o: &RatFn, negate: bool) -> RatFn {
        let den: Vec<u32> = self.den.iter().zip(&o.den).map(|(a, b)| *a.max(b)).collect();
        let a = self.lift(&den);
        let b = o.lift(&den);
        let num = if negate { a.sub(&b) } else { a.add(&b) };
        RatFn::new(num, den, self.basis.clone())
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if o.num.is_zero() {
            return self.clone();
        }
        if self.num.is_zero() {
            return o.clone();
        }
        self.add_signed(o, false)
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        if o.num.is_zero() {
            return self.clone();
        }
        self.add_signed(o, true)
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone(), basis: self.basis.clone() }
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        if self.num.is_zero() || o.num.is_zero() {
            return RatFn::from_poly(Poly::zero(self.num.space()), &self.basis);
        }
        let den: Vec<u32> = self.den.iter().zip(&o.den).map(|(a, b)| a + b).collect();
        let num = self.num.mul(&o.num);
        if den.iter().all(|&e| e == 0) {
            return RatFn { num, den, basis: self.basis.clone() };
        }
        RatFn::new(num, den, self.basis.clone())
    }

    pub fn scale(&self, c: &BigRational) -> RatFn {
        RatFn { num: self.num.scale(c), den: self.den.clone(), basis: self.basis.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Value at `y = η`; errors when the denominator vanishes there.
    pub fn eval(&self, eta: &[BigRational]) -> Result<BigRational> {
        let n = self.num.eval_params(eta);
        if self.is_polynomial() {
            return Ok(n);
        }
        let d = self.denominator().eval_params(eta);
        if d.is_zero() {
            return Err(Error::InternalConsistency("denominator vanishes at the specialization point".into()));
        }
        Ok(n / d)
    }
}

impl PartialEq for RatFn {
    fn eq(&self, o: &RatFn) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        let den: Vec<u32> = self.den.iter().zip(&o.den).map(|(a, b)| *a.max(b)).collect();
        self.lift(&den) == o.lift(&den)
    }
}

impl Eq for RatFn {}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.denominator())
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Scalar for RatFn {
    fn zero_like(&self) -> Self {
        RatFn::from_poly(Poly::zero(self.num.space()), &self.basis)
    }
    fn one_like(&self) -> Self {
        RatFn::from_poly(Poly::one(self.num.space()), &self.basis)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn is_nil(&self) -> bool {
        self.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::VarSpace;

    #[test]
    fn arithmetic_cancels_basis_factors() {
        let sp = VarSpace::new(&["x"], &["a", "b"]).unwrap();
        let p = |s: &str| parse_poly(&sp, s).unwrap();
        let basis = Arc::new(vec![p("a"), p("b")]);
        let inv_a = RatFn::new(p("1"), vec![1, 0], basis.clone());
        let a = RatFn::from_poly(p("a"), &basis);
        assert_eq!(inv_a.mul(&a), RatFn::from_poly(p("1"), &basis));
        let s = inv_a.add(&RatFn::new(p("1"), vec![0, 1], basis.clone()));
        // 1/a + 1/b = (a + b)/(ab)
        assert_eq!(s.numerator(), &p("a + b"));
        assert_eq!(s.denominator(), p("a*b"));
        assert!(s.sub(&s).is_zero());
        let eta = [BigRational::from_integer(2.into()), BigRational::from_integer(3.into())];
        assert_eq!(s.eval(&eta).unwrap(), BigRational::new(5.into(), 6.into()));
        assert_eq!(s.degree(), Some(-1));
    }
}
