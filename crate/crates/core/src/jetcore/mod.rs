//! Exact arithmetic substrate: rationals, polynomials, rational functions and
//! differential polynomials on the jet space of a scalar ODE.
//!
//! Variable indices follow one fixed convention everywhere in the crate:
//! `0` is `x`, and `k + 1` is the jet coordinate `y^(k)` (so `1` is `y`).

pub mod display;
pub mod gcd;
pub mod mpoly;
pub mod ratfunc;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use mpoly::{MPoly, Monomial};
pub use ratfunc::RatFunc;

use crate::error::{Error, Result};

/// Exact rational number in lowest terms with positive denominator.
pub type Rat = BigRational;

pub const X: usize = 0;
pub const Y: usize = 1;

/// Variable index of the jet coordinate `y^(k)`.
pub const fn jet(k: usize) -> usize {
    k + 1
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Total derivative of a polynomial on the jet space.
pub fn total_derivative_poly(p: &MPoly) -> MPoly {
    let mut out = p.derivative(X);
    let top = p.max_var().unwrap_or(0);
    for idx in Y..=top {
        let d = p.derivative(idx);
        if !d.is_zero() {
            out = &out + &(&d * &MPoly::var(idx + 1));
        }
    }
    out
}

/// Total derivative of a rational function on the jet space.
pub fn total_derivative_ratfunc(r: &RatFunc) -> RatFunc {
    let dn = total_derivative_poly(r.num());
    if r.is_polynomial() {
        return RatFunc::from_poly(dn);
    }
    let dd = total_derivative_poly(r.den());
    let num = &(&dn * r.den()) - &(r.num() * &dd);
    RatFunc::new(num, r.den() * r.den()).expect("nonzero denominator")
}

/// Differential function of `x, y, y', ..., y^(k)` with an explicit order bound `k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct JetPoly {
    order: usize,
    expr: RatFunc,
}

impl JetPoly {
    pub fn new(order: usize, expr: RatFunc) -> Result<Self> {
        if !expr.vars_below(jet(order) + 1) {
            return Err(Error::Internal(format!(
                "jet expression {expr} exceeds declared order {order}"
            )));
        }
        Ok(JetPoly { order, expr })
    }

    /// Wraps `expr` with the smallest order bound that contains it.
    pub fn tight(expr: RatFunc) -> Self {
        let order = expr.max_var().map_or(0, |v| v.saturating_sub(1));
        JetPoly { order, expr }
    }

    pub fn zero() -> Self {
        JetPoly::tight(RatFunc::zero())
    }

    /// The coordinate `y^(k)`.
    pub fn jet_var(k: usize) -> Self {
        JetPoly {
            order: k,
            expr: RatFunc::var(jet(k)),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn expr(&self) -> &RatFunc {
        &self.expr
    }

    pub fn into_expr(self) -> RatFunc {
        self.expr
    }

    /// Highest jet order actually present (0 when only `x`, `y` or constants appear).
    pub fn effective_order(&self) -> usize {
        self.expr.max_var().map_or(0, |v| v.saturating_sub(1))
    }

    pub fn add(&self, o: &JetPoly) -> JetPoly {
        JetPoly {
            order: self.order.max(o.order),
            expr: &self.expr + &o.expr,
        }
    }

    pub fn sub(&self, o: &JetPoly) -> JetPoly {
        JetPoly {
            order: self.order.max(o.order),
            expr: &self.expr - &o.expr,
        }
    }

    pub fn mul(&self, o: &JetPoly) -> JetPoly {
        JetPoly {
            order: self.order.max(o.order),
            expr: &self.expr * &o.expr,
        }
    }

    pub fn div(&self, o: &JetPoly) -> Result<JetPoly> {
        Ok(JetPoly {
            order: self.order.max(o.order),
            expr: self.expr.div(&o.expr)?,
        })
    }

    pub fn neg(&self) -> JetPoly {
        JetPoly {
            order: self.order,
            expr: -&self.expr,
        }
    }
}

/// `D_x p = ∂_x p + Σ y^(k+1) ∂_{y^(k)} p`; raises the order bound by one.
pub fn total_derivative(p: &JetPoly) -> JetPoly {
    JetPoly {
        order: p.order + 1,
        expr: total_derivative_ratfunc(&p.expr),
    }
}

/// Eliminates `y^(k)` for every `k >= n` using `y^(n) = -f` and its total derivatives.
pub fn substitute_top(p: &JetPoly, n: usize, f: &JetPoly) -> Result<JetPoly> {
    if n == 0 {
        return Err(Error::Contract("substitute_top needs n >= 1".into()));
    }
    if f.expr.max_var().is_some_and(|v| v >= jet(n)) {
        return Err(Error::Contract(format!(
            "right-hand side has order {} >= {n}",
            f.effective_order()
        )));
    }
    let top = p.effective_order();
    if top < n || !(n..=top).any(|k| p.expr.contains_var(jet(k))) {
        return Ok(JetPoly {
            order: p.order.min(n - 1),
            expr: p.expr.clone(),
        });
    }
    // images[k - n] is the value of y^(k) on solutions
    let mut images = vec![-&f.expr];
    for _ in n..top {
        let d = total_derivative_ratfunc(images.last().expect("nonempty"));
        let reduced = d.compose(|i| (i == jet(n)).then(|| images[0].clone()))?;
        images.push(reduced);
    }
    let expr = p.expr.compose(|i| {
        if i >= jet(n) && i <= jet(top) {
            Some(images[i - jet(n)].clone())
        } else {
            None
        }
    })?;
    Ok(JetPoly {
        order: n - 1,
        expr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jv(k: usize) -> JetPoly {
        JetPoly::jet_var(k)
    }
    fn xj() -> JetPoly {
        JetPoly::tight(RatFunc::var(X))
    }

    #[test]
    fn total_derivative_examples() {
        let x2 = xj().mul(&xj());
        assert_eq!(total_derivative(&x2).expr(), &RatFunc::var(X).scale(&int(2)));
        assert_eq!(total_derivative(&jv(0)).expr(), jv(1).expr());
        let yy1 = jv(0).mul(&jv(1));
        let expected = jv(1).mul(&jv(1)).add(&jv(0).mul(&jv(2)));
        assert_eq!(total_derivative(&yy1).expr(), expected.expr());
        assert_eq!(total_derivative(&yy1).order(), 2);
    }

    #[test]
    fn substitute_top_examples() {
        let minus_y = jv(0).neg();
        assert_eq!(substitute_top(&jv(2), 2, &minus_y).unwrap().expr(), jv(0).expr());
        assert_eq!(substitute_top(&jv(3), 2, &minus_y).unwrap().expr(), jv(1).expr());
        let f = jv(1).mul(&jv(1));
        let p = xj().mul(&jv(2)).add(&jv(1));
        let expected = xj().mul(&f.neg()).add(&jv(1));
        let got = substitute_top(&p, 2, &f).unwrap();
        assert_eq!(got.expr(), expected.expr());
        assert_eq!(got.order(), 1);
    }

    #[test]
    fn substitute_top_degenerate_denominator() {
        // 1/(y'' + y) on y'' = -y has a vanishing denominator
        let p = JetPoly::tight(RatFunc::one().div(&jv(2).add(&jv(0)).into_expr()).unwrap());
        let err = substitute_top(&p, 2, &jv(0)).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
    }

    #[test]
    fn order_bound_is_enforced() {
        assert!(JetPoly::new(1, RatFunc::var(jet(2))).is_err());
        assert!(JetPoly::new(2, RatFunc::var(jet(2))).is_ok());
    }
}
