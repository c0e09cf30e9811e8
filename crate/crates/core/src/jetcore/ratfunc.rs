//! Rational functions in canonical form.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::mpoly::MPoly;
use super::Rat;
use crate::error::{Error, Result};

/// Quotient of two polynomials with gcd 1 and monic denominator.
///
/// The normal form is unique, so structural equality is equality of functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::from_poly(MPoly::one())
    }

    pub fn constant(c: Rat) -> Self {
        RatFunc::from_poly(MPoly::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        RatFunc::from_poly(MPoly::from_int(c))
    }

    pub fn var(index: usize) -> Self {
        RatFunc::from_poly(MPoly::var(index))
    }

    pub fn from_poly(p: MPoly) -> Self {
        RatFunc {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        if let Some(c) = den.as_constant() {
            return RatFunc {
                num: num.scale(&c.recip()),
                den: MPoly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff().recip();
        RatFunc {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        match (self.num.max_var(), self.den.max_var()) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn contains_var(&self, index: usize) -> bool {
        self.num.contains_var(index) || self.den.contains_var(index)
    }

    pub fn vars_below(&self, bound: usize) -> bool {
        self.num.vars_below(bound) && self.den.vars_below(bound)
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::normalized(
            &self.num * &rhs.den,
            &self.den * &rhs.num,
        ))
    }

    pub fn pow(&self, e: i32) -> Result<RatFunc> {
        if e >= 0 {
            Ok(RatFunc {
                num: self.num.pow(e as u32),
                den: self.den.pow(e as u32),
            })
        } else {
            self.inv()?.pow(-e)
        }
    }

    /// Partial derivative with respect to variable `index`.
    pub fn derivative(&self, index: usize) -> RatFunc {
        let dn = self.num.derivative(index);
        if self.den.is_one() {
            return RatFunc::from_poly(dn);
        }
        let dd = self.den.derivative(index);
        if dd.is_zero() {
            return RatFunc::normalized(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        RatFunc::normalized(num, &self.den * &self.den)
    }

    /// Value at a point given for a prefix of the variables.
    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(point) / d)
    }

    /// Replaces variables by rational functions; `None` leaves a variable untouched.
    ///
    /// Works over a common denominator so only one gcd is taken at the end.
    pub fn compose<F>(&self, mut subst: F) -> Result<RatFunc>
    where
        F: FnMut(usize) -> Option<RatFunc>,
    {
        let nvars = self.max_var().map_or(0, |v| v + 1);
        let images: Vec<Option<RatFunc>> = (0..nvars).map(&mut subst).collect();
        let num = compose_poly(&self.num, &images);
        let den = compose_poly(&self.den, &images);
        num.div(&den).map_err(|_| {
            Error::Degenerate("denominator vanishes identically after substitution".into())
        })
    }
}

/// Substitutes rational functions into a polynomial over a common denominator.
fn compose_poly(p: &MPoly, images: &[Option<RatFunc>]) -> RatFunc {
    let mut max_deg = vec![0u32; images.len()];
    for (m, _) in p.terms() {
        for (i, &e) in m.exps().iter().enumerate() {
            if images[i].is_some() {
                max_deg[i] = max_deg[i].max(e);
            }
        }
    }
    let mut common = MPoly::one();
    for (i, img) in images.iter().enumerate() {
        if let Some(img) = img {
            if max_deg[i] > 0 && !img.den.is_one() {
                common = &common * &img.den.pow(max_deg[i]);
            }
        }
    }
    let mut acc = MPoly::zero();
    let mut cache: std::collections::BTreeMap<(usize, u32), MPoly> = Default::default();
    for (m, c) in p.terms() {
        let mut kept = m.exps().to_vec();
        let mut factor = MPoly::constant(c.clone());
        for (i, img) in images.iter().enumerate() {
            let Some(img) = img else { continue };
            let e = m.exp(i);
            if i < kept.len() {
                kept[i] = 0;
            }
            if max_deg[i] == 0 {
                continue;
            }
            let part = cache.entry((i, e)).or_insert_with(|| {
                let n = img.num.pow(e);
                if img.den.is_one() {
                    n
                } else {
                    &n * &img.den.pow(max_deg[i] - e)
                }
            });
            factor = &factor * &*part;
        }
        acc = &acc + &factor.mul_monomial(&super::mpoly::Monomial::from_exps(kept));
    }
    RatFunc::normalized(acc, common)
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl From<MPoly> for RatFunc {
    fn from(p: MPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return RatFunc::from_poly(&self.num + &rhs.num);
            }
            return RatFunc::normalized(&self.num + &rhs.num, self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        RatFunc::normalized(num, &(&a * &b) * &g)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        // cross-cancel before multiplying
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("divides");
        let d2 = rhs.den.div_exact(&g1).expect("divides");
        let n2 = rhs.num.div_exact(&g2).expect("divides");
        let d1 = self.den.div_exact(&g2).expect("divides");
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let lc = den.leading_coeff().recip();
        RatFunc {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: RatFunc) -> RatFunc {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl Ord for RatFunc {
    fn cmp(&self, other: &Self) -> Ordering {
        self.num
            .cmp(&other.num)
            .then_with(|| self.den.cmp(&other.den))
    }
}

impl PartialOrd for RatFunc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::display::ratfunc_to_string(self))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::display::ratfunc_to_string(self))
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> RatFunc {
        RatFunc::var(0)
    }
    fn y() -> RatFunc {
        RatFunc::var(1)
    }

    #[test]
    fn difference_of_squares_cancels() {
        let num = &(&x() * &x()) - &(&y() * &y());
        let q = num.div(&(&x() - &y())).unwrap();
        assert_eq!(q, &x() + &y());
        assert!(q.is_polynomial());
    }

    #[test]
    fn division_by_zero_is_error() {
        assert_eq!(x().div(&RatFunc::zero()), Err(Error::DivisionByZero));
        assert_eq!(RatFunc::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn canonical_sign_and_scale() {
        let a = RatFunc::new(MPoly::from_int(2), MPoly::var(0).scale(&Rat::from_integer((-4).into()))).unwrap();
        let b = RatFunc::new(MPoly::from_int(-1), MPoly::from_int(2) * MPoly::var(0)).unwrap();
        assert_eq!(a, b);
        assert!(a.den().leading_coeff().is_one());
    }

    #[test]
    fn quotient_rule() {
        let f = RatFunc::one().div(&x()).unwrap();
        let df = f.derivative(0);
        assert_eq!(df, -&RatFunc::one().div(&(&x() * &x())).unwrap());
    }

    #[test]
    fn compose_substitutes() {
        // (x + y)/x with y -> 1/x
        let f = (&x() + &y()).div(&x()).unwrap();
        let g = f.compose(|i| (i == 1).then(|| RatFunc::one().div(&x()).unwrap())).unwrap();
        let expected = (&(&x() * &x()) + &RatFunc::one()).div(&(&x() * &x())).unwrap();
        assert_eq!(g, expected);
    }
}
