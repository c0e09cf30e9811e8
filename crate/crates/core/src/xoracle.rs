//! Test-instance factory: pushes a linear constant-coefficient ODE through a
//! closed-form point transformation and returns the resulting nonlinear ODE
//! together with the ground truth it was built from.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::jetcore::{jet, total_derivative_ratfunc, Rat, RatFunc, X, Y};
use crate::liealg::CaseTag;
use crate::odeparse::{parse_expr, Context, Func, OdeSpec, SourceExpr};
use crate::recover::{affine_class, affine_equivalent, CharPoly};

/// Transcendental part of a term: `exp(exponent) * Π log(arg)^power`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TransKey {
    pub exponent: RatFunc,
    pub logs: BTreeMap<RatFunc, u32>,
}

impl TransKey {
    pub fn rational() -> Self {
        TransKey {
            exponent: RatFunc::zero(),
            logs: BTreeMap::new(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.exponent.is_zero() && self.logs.is_empty()
    }

    fn mul(&self, o: &TransKey) -> TransKey {
        let mut logs = self.logs.clone();
        for (g, p) in &o.logs {
            *logs.entry(g.clone()).or_insert(0) += p;
        }
        TransKey {
            exponent: &self.exponent + &o.exponent,
            logs,
        }
    }
}

/// Finite sum `Σ c_K(x, y, y', ...) * K` over transcendental keys `K`.
///
/// Distinct keys are treated as linearly independent over rational functions.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExpSum {
    terms: BTreeMap<TransKey, RatFunc>,
}

impl ExpSum {
    pub fn zero() -> Self {
        ExpSum::default()
    }

    pub fn rational(r: RatFunc) -> Self {
        ExpSum::term(TransKey::rational(), r)
    }

    pub fn term(k: TransKey, c: RatFunc) -> Self {
        let mut s = ExpSum::zero();
        s.add_term(k, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TransKey, &RatFunc)> {
        self.terms.iter()
    }

    fn add_term(&mut self, k: TransKey, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k.clone()).or_insert_with(RatFunc::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    /// The rational function, if no transcendental factor survives.
    pub fn as_rational(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero()),
            1 => {
                let (k, c) = self.terms.iter().next().expect("one term");
                k.is_rational().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_single(&self) -> Option<(&TransKey, &RatFunc)> {
        (self.terms.len() == 1).then(|| self.terms.iter().next().expect("one term"))
    }

    pub fn add(&self, o: &ExpSum) -> ExpSum {
        let mut s = self.clone();
        for (k, c) in &o.terms {
            s.add_term(k.clone(), c.clone());
        }
        s
    }

    pub fn neg(&self) -> ExpSum {
        ExpSum {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &ExpSum) -> ExpSum {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &RatFunc) -> ExpSum {
        let mut s = ExpSum::zero();
        for (k, c) in &self.terms {
            s.add_term(k.clone(), c * r);
        }
        s
    }

    pub fn mul(&self, o: &ExpSum) -> ExpSum {
        let mut s = ExpSum::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                s.add_term(k1.mul(k2), c1 * c2);
            }
        }
        s
    }

    /// Quotient by a single log-free term.
    pub fn div(&self, o: &ExpSum) -> Result<ExpSum> {
        let (k, c) = o
            .as_single()
            .ok_or_else(|| Error::OutsideClass(format!("cannot divide by the sum {o}")))?;
        if !k.logs.is_empty() {
            return Err(Error::OutsideClass(format!("cannot divide by {o}")));
        }
        let inv = TransKey {
            exponent: -&k.exponent,
            logs: BTreeMap::new(),
        };
        Ok(self.mul(&ExpSum::term(inv, c.inv()?)))
    }

    pub fn pow(&self, e: i64) -> Result<ExpSum> {
        let base = if e < 0 {
            ExpSum::rational(RatFunc::one()).div(self)?
        } else {
            self.clone()
        };
        let mut acc = ExpSum::rational(RatFunc::one());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn differentiate(&self, d: &dyn Fn(&RatFunc) -> RatFunc) -> ExpSum {
        let mut s = ExpSum::zero();
        for (k, c) in &self.terms {
            s.add_term(k.clone(), d(c));
            if !k.exponent.is_zero() {
                s.add_term(k.clone(), c * &d(&k.exponent));
            }
            for (g, &p) in &k.logs {
                // p log(g)^(p-1) g'/g
                let mut lower = k.clone();
                if p == 1 {
                    lower.logs.remove(g);
                } else {
                    lower.logs.insert(g.clone(), p - 1);
                }
                let dg = d(g).div(g).expect("log argument is nonzero");
                s.add_term(lower, &(c * &dg) * &RatFunc::from_int(p as i64));
            }
        }
        s
    }

    /// Total derivative in `x` on the jet space.
    pub fn total_derivative(&self) -> ExpSum {
        self.differentiate(&total_derivative_ratfunc)
    }

    pub fn partial(&self, index: usize) -> ExpSum {
        self.differentiate(&|r: &RatFunc| r.derivative(index))
    }
}

impl fmt::Display for ExpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut s = format!("({c})");
                if !k.exponent.is_zero() {
                    s.push_str(&format!("*exp({})", k.exponent));
                }
                for (g, p) in &k.logs {
                    s.push_str(&format!("*log({g})^{p}"));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Evaluates a closed-form tree; `t` and `u` are replaced by the given sums when present.
pub fn to_expsum(e: &SourceExpr, t: Option<&ExpSum>, u: Option<&ExpSum>) -> Result<ExpSum> {
    use SourceExpr as S;
    let rec = |a: &SourceExpr| to_expsum(a, t, u);
    Ok(match e {
        S::Num(r) => ExpSum::rational(RatFunc::constant(r.clone())),
        S::X => ExpSum::rational(RatFunc::var(X)),
        S::Y(k) => ExpSum::rational(RatFunc::var(jet(*k))),
        S::T => t.cloned().ok_or_else(|| Error::Contract("t is not bound".into()))?,
        S::U => u.cloned().ok_or_else(|| Error::Contract("u is not bound".into()))?,
        S::Neg(a) => rec(a)?.neg(),
        S::Add(a, b) => rec(a)?.add(&rec(b)?),
        S::Sub(a, b) => rec(a)?.sub(&rec(b)?),
        S::Mul(a, b) => rec(a)?.mul(&rec(b)?),
        S::Div(a, b) => rec(a)?.div(&rec(b)?)?,
        S::Pow(a, k) => rec(a)?.pow(*k)?,
        S::Func(func, a) => {
            let arg = rec(a)?.as_rational().ok_or_else(|| {
                Error::OutsideClass(format!("{}({a}) of a transcendental argument", func.name()))
            })?;
            match func {
                Func::Exp => ExpSum::term(
                    TransKey {
                        exponent: arg,
                        logs: BTreeMap::new(),
                    },
                    RatFunc::one(),
                ),
                Func::Log => {
                    if arg.is_zero() {
                        return Err(Error::Degenerate("log(0)".into()));
                    }
                    if arg.is_one() {
                        return Ok(ExpSum::zero());
                    }
                    ExpSum::term(
                        TransKey {
                            exponent: RatFunc::zero(),
                            logs: [(arg, 1)].into_iter().collect(),
                        },
                        RatFunc::one(),
                    )
                }
            }
        }
    })
}

/// `u = ψ(x, y)`, `t = φ(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointTransformation {
    pub psi: SourceExpr,
    pub phi: SourceExpr,
}

impl PointTransformation {
    pub fn parse(psi: &str, phi: &str) -> Result<Self> {
        let t = PointTransformation {
            psi: parse_expr(psi, Context::Transform)?,
            phi: parse_expr(phi, Context::Transform)?,
        };
        t.jacobian()?;
        Ok(t)
    }

    fn sums(&self) -> Result<(ExpSum, ExpSum)> {
        Ok((to_expsum(&self.psi, None, None)?, to_expsum(&self.phi, None, None)?))
    }

    /// `φ_x ψ_y − φ_y ψ_x`; an error if it vanishes identically.
    pub fn jacobian(&self) -> Result<ExpSum> {
        let (psi, phi) = self.sums()?;
        let det = phi.partial(X).mul(&psi.partial(Y)).sub(&phi.partial(Y).mul(&psi.partial(X)));
        if det.is_zero() {
            return Err(Error::InvalidTransformation(format!(
                "Jacobian of (u = {}, t = {}) vanishes identically",
                self.psi, self.phi
            )));
        }
        Ok(det)
    }
}

impl fmt::Display for PointTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u = {}, t = {}", self.psi, self.phi)
    }
}

#[derive(Clone, Debug)]
pub struct OracleInstance {
    pub ode: OdeSpec,
    pub source: CharPoly,
    pub transformation: PointTransformation,
    pub expected: CaseTag,
}

/// Polynomial with roots `0, 1, ..., n-1`.
pub fn progression_poly(n: usize) -> CharPoly {
    let roots: Vec<Rat> = (0..n as i64).map(|k| Rat::from_integer(k.into())).collect();
    CharPoly::from_roots(&roots)
}

/// Expected certificate case of the image of `p`.
///
/// The linear equation is point-equivalent to `u^(n) = 0` exactly when its
/// roots form an arithmetic progression (a repeated root counts, with step 0),
/// and every second-order linear equation is.
pub fn expected_case(p: &CharPoly) -> CaseTag {
    let n = p.degree();
    if n <= 2 || affine_class(p).is_trivial() || affine_equivalent(p, &progression_poly(n)) {
        CaseTag::Trivial
    } else {
        CaseTag::ConstantCoefficients
    }
}

/// Image of `u^(n) + a_{n-1} u^(n-1) + ... + a_0 u = 0` under `t`.
pub fn push_linear(p: &CharPoly, t: &PointTransformation) -> Result<OracleInstance> {
    let n = p.degree();
    if n < 2 {
        return Err(Error::OrderTooLow(n));
    }
    t.jacobian()?;
    let (psi, phi) = t.sums()?;
    let dphi = phi.total_derivative();
    if dphi.as_single().is_none() {
        return Err(Error::OutsideClass(format!("D_x of t = {} is not a single term", t.phi)));
    }
    let mut derivs = vec![psi];
    for _ in 0..n {
        let next = derivs.last().expect("nonempty").total_derivative().div(&dphi)?;
        derivs.push(next);
    }
    let mut lhs = derivs[n].clone();
    for (k, a) in p.coeffs().iter().enumerate() {
        lhs = lhs.add(&derivs[k].scale(&RatFunc::constant(a.clone())));
    }
    let (_, r) = lhs
        .as_single()
        .ok_or_else(|| Error::OutsideClass(format!("image keeps {} transcendental terms", lhs.len())))?;
    let num = r.num();
    if num.max_var() != Some(jet(n)) || num.degree_in(jet(n)) != 1 {
        return Err(Error::OutsideClass("image is not linear in the highest derivative".into()));
    }
    let cs = num.coeffs_in(jet(n));
    let f = RatFunc::from_poly(cs[0].clone()).div(&RatFunc::from_poly(cs[1].clone()))?;
    Ok(OracleInstance {
        ode: OdeSpec::new(n, f)?,
        source: p.clone(),
        transformation: t.clone(),
        expected: expected_case(p),
    })
}

/// Outcome of pulling a generator back to `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PulledBack {
    Generator { xi: RatFunc, eta: RatFunc },
    /// The components are not rational in closed form; the check is skipped, not passed.
    Skipped(String),
}

/// `τ ∂t + ω ∂u` expressed as `ξ ∂x + η ∂y` through `t`.
pub fn pulled_back_generator(t: &PointTransformation, tau: &SourceExpr, omega: &SourceExpr) -> Result<PulledBack> {
    let det = t.jacobian()?;
    let (psi, phi) = t.sums()?;
    let compose = |e: &SourceExpr| to_expsum(e, Some(&phi), Some(&psi));
    let (tau, omega) = match (compose(tau), compose(omega)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(Error::OutsideClass(m)), _) | (_, Err(Error::OutsideClass(m))) => {
            return Ok(PulledBack::Skipped(m))
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let xi_num = psi.partial(Y).mul(&tau).sub(&phi.partial(Y).mul(&omega));
    let eta_num = phi.partial(X).mul(&omega).sub(&psi.partial(X).mul(&tau));
    let (xi, eta) = match (xi_num.div(&det), eta_num.div(&det)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return Ok(PulledBack::Skipped("Jacobian is not a single term".into())),
    };
    match (xi.as_rational(), eta.as_rational()) {
        (Some(xi), Some(eta)) => Ok(PulledBack::Generator { xi, eta }),
        _ => Ok(PulledBack::Skipped("pulled-back components are not rational".into())),
    }
}

/// Known symmetries `(τ, ω)` of the linear equation with characteristic polynomial `p`,
/// restricted to rational roots: `∂t`, `u ∂u` and `t^j e^(λ t) ∂u` for each root `λ` of multiplicity `> j`.
pub fn linear_generators(p: &CharPoly, roots: &[Rat]) -> Vec<(SourceExpr, SourceExpr)> {
    use SourceExpr as S;
    let zero = S::num(0);
    let mut out = vec![(S::num(1), zero.clone()), (zero.clone(), S::U)];
    let mut seen: Vec<&Rat> = Vec::new();
    for r in roots {
        if seen.contains(&r) || !p.eval(r).is_zero() {
            continue;
        }
        seen.push(r);
        let mult = roots.iter().filter(|s| *s == r).count();
        let e = S::Func(Func::Exp, Box::new(S::Mul(Box::new(S::Num(r.clone())), Box::new(S::T))));
        for j in 0..mult {
            let f = if j == 0 {
                e.clone()
            } else {
                S::Mul(Box::new(S::Pow(Box::new(S::T), j as i64)), Box::new(e.clone()))
            };
            out.push((zero.clone(), f));
        }
    }
    out
}

/// The shipped transformations as `(ψ, φ)` texts.
pub fn shipped_transformations() -> Vec<(&'static str, &'static str)> {
    vec![
        ("y", "x"),
        ("exp(y)", "x"),
        ("y", "exp(x)"),
        ("1/y", "x"),
        ("y/x", "1/x"),
    ]
}

/// Root multisets of the source polynomials, degrees 2 to 4.
pub fn corpus_roots() -> Vec<Vec<i64>> {
    vec![
        vec![0, 0],
        vec![0, 1],
        vec![-1, 1],
        vec![2, 3],
        vec![0, 0, 0],
        vec![-1, 0, 1],
        vec![0, 0, 1],
        vec![1, 2, 4],
        vec![0, 1, 3],
        vec![0, 0, 0, 0],
        vec![0, 1, 2, 3],
        vec![0, 0, 1, 1],
        vec![-2, -1, 1, 2],
    ]
}

/// One entry of the corpus: the source roots and the instance, or why it was discarded.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub roots: Vec<Rat>,
    pub transformation: (&'static str, &'static str),
    pub instance: std::result::Result<OracleInstance, Error>,
}

/// Every shipped transformation applied to every corpus polynomial.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for roots in corpus_roots() {
        let roots: Vec<Rat> = roots.into_iter().map(|r| Rat::from_integer(r.into())).collect();
        let p = CharPoly::from_roots(&roots);
        for tr in shipped_transformations() {
            let instance = PointTransformation::parse(tr.0, tr.1).and_then(|t| push_linear(&p, &t));
            out.push(CorpusEntry {
                roots: roots.clone(),
                transformation: tr,
                instance,
            });
        }
    }
    out
}
