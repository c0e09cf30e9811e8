//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are identified by index. The jet layer fixes the meaning of the
//! indices (`0 = x`, `1 = y`, `k + 1 = y^(k)`), but nothing in this module
//! depends on it. Exponent vectors are stored with trailing zeros trimmed, so
//! polynomials in different numbers of variables combine without padding.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::Rat;

/// Exponent vector of a monomial.
///
/// Ordered graded-lexicographically with `v0 < v1 < v2 < ...`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: usize) -> Self {
        Self::var_pow(index, 1)
    }

    pub fn var_pow(index: usize, exp: u32) -> Self {
        let mut v = vec![0; index + 1];
        v[index] = exp;
        Monomial::from_exps(v)
    }

    pub fn from_exps(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, index: usize) -> u32 {
        self.0.get(index).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Highest variable index with a nonzero exponent.
    pub fn max_var(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let v = (0..n).map(|i| self.exp(i) + other.exp(i)).collect();
        Monomial(v)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let v = (0..self.0.len()).map(|i| self.exp(i) - other.exp(i)).collect();
        Some(Monomial::from_exps(v))
    }

    /// Returns the monomial with the exponent of `index` set to zero, and that exponent.
    pub fn split_var(&self, index: usize) -> (Monomial, u32) {
        let e = self.exp(index);
        if e == 0 {
            return (self.clone(), 0);
        }
        let mut v = self.0.clone();
        v[index] = 0;
        (Monomial::from_exps(v), e)
    }

    pub fn with_exp(&self, index: usize, exp: u32) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= index {
            v.resize(index + 1, 0);
        }
        v[index] = exp;
        Monomial::from_exps(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in (0..n).rev() {
                match self.exp(i).cmp(&other.exp(i)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Polynomial with rational coefficients; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        MPoly::term(c, Monomial::one())
    }

    pub fn from_int(c: i64) -> Self {
        MPoly::constant(Rat::from_integer(c.into()))
    }

    pub fn var(index: usize) -> Self {
        MPoly::term(Rat::one(), Monomial::var(index))
    }

    pub fn term(c: Rat, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(it: I) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(Rat::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(index)).max().unwrap_or(0)
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(Monomial::max_var).max()
    }

    pub fn contains_var(&self, index: usize) -> bool {
        self.terms.keys().any(|m| m.exp(index) > 0)
    }

    /// True if every variable present has index below `bound`.
    pub fn vars_below(&self, bound: usize) -> bool {
        self.max_var().is_none_or(|v| v < bound)
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(n, a)| (n.mul(m), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut result = MPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, index: usize) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(index);
            if e > 0 {
                out.add_term(m.with_exp(index, e - 1), c * Rat::from_integer(e.into()));
            }
        }
        out
    }

    /// Makes the leading coefficient 1.
    pub fn monic(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        let lc = self.leading_coeff();
        self.scale(&lc.recip())
    }

    /// Coefficients with respect to the variable `index`, lowest power first.
    pub fn coeffs_in(&self, index: usize) -> Vec<MPoly> {
        let deg = self.degree_in(index) as usize;
        let mut out = vec![MPoly::zero(); deg + 1];
        if self.is_zero() {
            return vec![];
        }
        for (m, c) in &self.terms {
            let (rest, e) = m.split_var(index);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(index: usize, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, a) in c.terms() {
                out.add_term(m.with_exp(index, e as u32), a.clone());
            }
        }
        out
    }

    /// Collects coefficients with respect to all variables with index `>= split`.
    ///
    /// Returns a map from monomials in the high variables to polynomials in the low ones.
    pub fn collect_above(&self, split: usize) -> BTreeMap<Monomial, MPoly> {
        let mut out: BTreeMap<Monomial, MPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let exps = m.exps();
            let low = Monomial::from_exps(exps.iter().take(split).copied().collect());
            let high = Monomial::from_exps(
                exps.iter()
                    .enumerate()
                    .map(|(i, &e)| if i < split { 0 } else { e })
                    .collect(),
            );
            out.entry(high).or_default().add_term(low, c.clone());
        }
        out
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = divisor.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            rem = &rem - &divisor.mul_monomial(&qm).scale(&qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Value at a point given for a prefix of the variables; other variables must be absent.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    v *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            acc += v;
        }
        acc
    }

    /// Replaces variables by polynomials; `None` leaves the variable untouched.
    pub fn compose<F>(&self, mut subst: F) -> MPoly
    where
        F: FnMut(usize) -> Option<MPoly>,
    {
        let nvars = self.max_var().map_or(0, |v| v + 1);
        let images: Vec<Option<MPoly>> = (0..nvars).map(&mut subst).collect();
        let mut powers: BTreeMap<(usize, u32), MPoly> = BTreeMap::new();
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::with_capacity(m.exps().len());
            let mut factor = MPoly::constant(c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                match (&images[i], e) {
                    (_, 0) => kept.push(0),
                    (None, e) => kept.push(e),
                    (Some(img), e) => {
                        kept.push(0);
                        let p = powers.entry((i, e)).or_insert_with(|| img.pow(e));
                        factor = &factor * &*p;
                    }
                }
            }
            let kept = Monomial::from_exps(kept);
            out = &out + &factor.mul_monomial(&kept);
        }
        out
    }

    /// Rational content: the positive rational `c` with `self / c` having coprime integer coefficients.
    pub fn rational_content(&self) -> Rat {
        use num_integer::Integer;
        let mut num = num_bigint::BigInt::zero();
        let mut den = num_bigint::BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rat::one();
        }
        Rat::new(num, den)
    }

    /// Integer-primitive form with positive leading coefficient.
    pub fn integer_primitive(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        let mut c = self.rational_content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::display::poly_to_string(self))
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::display::poly_to_string(self))
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl Ord for MPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.iter().rev().cmp(other.terms.iter().rev())
    }
}

impl PartialOrd for MPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> MPoly {
        MPoly::var(0)
    }
    fn y() -> MPoly {
        MPoly::var(1)
    }

    #[test]
    fn grlex_order() {
        assert!(Monomial::var(1) > Monomial::var(0));
        assert!(Monomial::var_pow(0, 2) > Monomial::var(1));
        let xy = Monomial::from_exps(vec![1, 1]);
        assert!(Monomial::var_pow(1, 2) > xy);
        assert!(xy > Monomial::var_pow(0, 2));
    }

    #[test]
    fn exact_division() {
        let a = &(&x() * &x()) - &(&y() * &y());
        let b = &x() - &y();
        assert_eq!(a.div_exact(&b), Some(&x() + &y()));
        assert_eq!(b.div_exact(&a), None);
        assert_eq!((&a + &MPoly::one()).div_exact(&b), None);
    }

    #[test]
    fn coefficient_split_roundtrip() {
        let p = &(&x().pow(3) * &y()) + &(&y().pow(2) - &MPoly::from_int(4));
        let cs = p.coeffs_in(1);
        assert_eq!(cs.len(), 3);
        assert_eq!(MPoly::from_coeffs_in(1, &cs), p);
    }

    #[test]
    fn compose_translates() {
        // (x + 1)^2 evaluated through composition
        let p = x().pow(2);
        let q = p.compose(|i| (i == 0).then(|| &x() + &MPoly::one()));
        assert_eq!(q, &(&x().pow(2) + &x().scale(&Rat::from_integer(2.into()))) + &MPoly::one());
    }

    #[test]
    fn derivative_and_eval() {
        let p = &x().pow(3) + &(&x() * &y());
        assert_eq!(p.derivative(0), &x().pow(2).scale(&Rat::from_integer(3.into())) + &y());
        let v = p.eval(&[Rat::from_integer(2.into()), Rat::from_integer(5.into())]);
        assert_eq!(v, Rat::from_integer(18.into()));
    }
}
