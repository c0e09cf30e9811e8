//! Determining system of the Lie point symmetries of an ODE.
//!
//! The infinitesimal generator `ξ ∂x + η ∂y` is prolonged to the jet space,
//! applied to `y^(n) + f`, restricted to solutions by eliminating `y^(n)`, and
//! split along monomials in `y', ..., y^(n-1)`. Each coefficient is a linear
//! homogeneous PDE in `ξ(x, y)` and `η(x, y)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::jetcore::gcd::{content_above, lcm};
use crate::jetcore::{
    display, jet, substitute_top, total_derivative_ratfunc, JetPoly, MPoly, Monomial, RatFunc, X,
    Y,
};
use crate::odeparse::OdeSpec;

/// The two infinitesimals. `Xi < Eta`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Unknown {
    Xi,
    Eta,
}

impl Unknown {
    pub const ALL: [Unknown; 2] = [Unknown::Xi, Unknown::Eta];

    pub fn name(self) -> &'static str {
        match self {
            Unknown::Xi => "xi",
            Unknown::Eta => "eta",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// The derivative `∂^(dx+dy) u / ∂x^dx ∂y^dy` of one infinitesimal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Slot {
    pub unknown: Unknown,
    pub dx: u32,
    pub dy: u32,
}

impl Slot {
    pub const fn new(unknown: Unknown, dx: u32, dy: u32) -> Self {
        Slot { unknown, dx, dy }
    }

    pub fn xi(dx: u32, dy: u32) -> Self {
        Slot::new(Unknown::Xi, dx, dy)
    }

    pub fn eta(dx: u32, dy: u32) -> Self {
        Slot::new(Unknown::Eta, dx, dy)
    }

    pub fn order(&self) -> u32 {
        self.dx + self.dy
    }

    pub fn shifted(&self, dx: u32, dy: u32) -> Slot {
        Slot::new(self.unknown, self.dx + dx, self.dy + dy)
    }

    /// If `other` is a derivative of `self` (including `self`), the extra derivative orders.
    pub fn divides(&self, other: &Slot) -> Option<(u32, u32)> {
        (self.unknown == other.unknown && self.dx <= other.dx && self.dy <= other.dy)
            .then(|| (other.dx - self.dx, other.dy - self.dy))
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unknown.name())?;
        if self.order() > 0 {
            write!(f, "_{}{}", "x".repeat(self.dx as usize), "y".repeat(self.dy as usize))?;
        }
        Ok(())
    }
}

/// Linear homogeneous combination of slots with rational-function coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct LinDiffPoly {
    terms: BTreeMap<Slot, RatFunc>,
}

impl LinDiffPoly {
    pub fn zero() -> Self {
        LinDiffPoly::default()
    }

    pub fn slot(s: Slot) -> Self {
        LinDiffPoly::term(s, RatFunc::one())
    }

    pub fn term(s: Slot, c: RatFunc) -> Self {
        let mut p = LinDiffPoly::zero();
        p.add_term(s, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Slot, RatFunc)>>(it: I) -> Self {
        let mut p = LinDiffPoly::zero();
        for (s, c) in it {
            p.add_term(s, c);
        }
        p
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

    pub fn terms(&self) -> impl Iterator<Item = (&Slot, &RatFunc)> {
        self.terms.iter()
    }

    pub fn slots(&self) -> impl Iterator<Item = &Slot> {
        self.terms.keys()
    }

    pub fn coeff(&self, s: &Slot) -> Option<&RatFunc> {
        self.terms.get(s)
    }

    pub fn add_term(&mut self, s: Slot, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(s) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn remove(&mut self, s: &Slot) -> Option<RatFunc> {
        self.terms.remove(s)
    }

    pub fn add(&self, o: &LinDiffPoly) -> LinDiffPoly {
        let mut out = self.clone();
        for (s, c) in &o.terms {
            out.add_term(*s, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &LinDiffPoly) -> LinDiffPoly {
        let mut out = self.clone();
        for (s, c) in &o.terms {
            out.add_term(*s, -c);
        }
        out
    }

    pub fn scale(&self, c: &RatFunc) -> LinDiffPoly {
        if c.is_zero() {
            return LinDiffPoly::zero();
        }
        LinDiffPoly {
            terms: self.terms.iter().map(|(s, a)| (*s, a * c)).collect(),
        }
    }

    /// `self - c * other`.
    pub fn sub_scaled(&self, c: &RatFunc, other: &LinDiffPoly) -> LinDiffPoly {
        let mut out = self.clone();
        for (s, a) in &other.terms {
            out.add_term(*s, -&(a * c));
        }
        out
    }

    pub fn max_order(&self) -> u32 {
        self.terms.keys().map(Slot::order).max().unwrap_or(0)
    }

    /// Partial derivative in `x` (`wrt_x`) or `y` of the expression as a function of `(x, y)`.
    pub fn partial(&self, wrt_x: bool) -> LinDiffPoly {
        let var = if wrt_x { X } else { Y };
        let (dx, dy) = if wrt_x { (1, 0) } else { (0, 1) };
        let mut out = LinDiffPoly::zero();
        for (s, c) in &self.terms {
            out.add_term(*s, c.derivative(var));
            out.add_term(s.shifted(dx, dy), c.clone());
        }
        out
    }

    /// `∂x^dx ∂y^dy` applied to the expression.
    pub fn derivative(&self, dx: u32, dy: u32) -> LinDiffPoly {
        let mut out = self.clone();
        for _ in 0..dx {
            out = out.partial(true);
        }
        for _ in 0..dy {
            out = out.partial(false);
        }
        out
    }

    /// Total derivative on the jet space, with the slots read as functions of `(x, y)`.
    pub fn total_derivative(&self) -> LinDiffPoly {
        let yp = RatFunc::var(jet(1));
        let mut out = LinDiffPoly::zero();
        for (s, c) in &self.terms {
            out.add_term(*s, total_derivative_ratfunc(c));
            out.add_term(s.shifted(1, 0), c.clone());
            out.add_term(s.shifted(0, 1), c * &yp);
        }
        out
    }

    /// Applies the operator to explicit rational infinitesimals.
    pub fn apply(&self, xi: &RatFunc, eta: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (s, c) in &self.terms {
            let mut v = match s.unknown {
                Unknown::Xi => xi.clone(),
                Unknown::Eta => eta.clone(),
            };
            for _ in 0..s.dx {
                v = v.derivative(X);
            }
            for _ in 0..s.dy {
                v = v.derivative(Y);
            }
            acc = &acc + &(c * &v);
        }
        acc
    }

    fn map_coeffs<F>(&self, mut f: F) -> Result<LinDiffPoly>
    where
        F: FnMut(&RatFunc) -> Result<RatFunc>,
    {
        let mut out = LinDiffPoly::zero();
        for (s, c) in &self.terms {
            out.add_term(*s, f(c)?);
        }
        Ok(out)
    }
}

impl fmt::Display for LinDiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(s, c)| format!("({c})*{s}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `η^(k) = D_x η^(k-1) - y^(k) D_x ξ`.
pub fn prolong(eta_prev: &LinDiffPoly, k: usize) -> LinDiffPoly {
    let dxi = LinDiffPoly::slot(Slot::xi(0, 0)).total_derivative();
    eta_prev
        .total_derivative()
        .sub(&dxi.scale(&RatFunc::var(jet(k))))
}

/// `η^(0), ..., η^(n)`.
pub fn prolongations(n: usize) -> Vec<LinDiffPoly> {
    let mut out = vec![LinDiffPoly::slot(Slot::eta(0, 0))];
    for k in 1..=n {
        let next = prolong(out.last().expect("nonempty"), k);
        out.push(next);
    }
    out
}

/// Determining system, with each equation tagged by the jet monomial it came from.
#[derive(Clone, Debug)]
pub struct LinDiffSystem {
    pub equations: Vec<LinDiffPoly>,
    /// For every equation, the monomials in `y', ..., y^(n-1)` whose coefficients produced it.
    pub provenance: Vec<Vec<Monomial>>,
}

impl LinDiffSystem {
    pub fn new(equations: Vec<LinDiffPoly>) -> Self {
        let provenance = vec![Vec::new(); equations.len()];
        LinDiffSystem {
            equations,
            provenance,
        }
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn max_order(&self) -> u32 {
        self.equations.iter().map(LinDiffPoly::max_order).max().unwrap_or(0)
    }

    /// True if the explicit rational pair `(ξ, η)` satisfies every equation.
    pub fn annihilates(&self, xi: &RatFunc, eta: &RatFunc) -> bool {
        self.equations.iter().all(|e| e.apply(xi, eta).is_zero())
    }
}

/// Renders a monomial in the jet coordinates, `1` for the empty monomial.
pub fn monomial_label(m: &Monomial) -> String {
    if m.is_one() {
        return "1".to_string();
    }
    let p = MPoly::term(crate::jetcore::int(1), m.clone());
    display::poly_to_string(&p)
}

/// Builds the determining system of `y^(n) + f = 0`.
pub fn determining_system(o: &OdeSpec) -> Result<LinDiffSystem> {
    let n = o.order();
    if n < 2 {
        return Err(Error::OrderTooLow(n));
    }
    let f = o.rhs();
    let etas = prolongations(n);

    // X(y^(n) + f) = η^(n) + ξ f_x + Σ_{k<n} η^(k) f_{y^(k)}
    let mut invariance = etas[n].clone();
    let fx = f.expr().derivative(X);
    invariance = invariance.add(&LinDiffPoly::term(Slot::xi(0, 0), fx));
    for (k, eta_k) in etas.iter().enumerate().take(n) {
        let fk = f.expr().derivative(jet(k));
        if !fk.is_zero() {
            invariance = invariance.add(&eta_k.scale(&fk));
        }
    }

    let restricted = invariance.map_coeffs(|c| {
        let c = JetPoly::tight(c.clone());
        substitute_top(&c, n, f).map(JetPoly::into_expr)
    })?;

    // clear denominators in the jet coordinates only
    let mut common = MPoly::one();
    for (_, c) in restricted.terms() {
        if !c.is_polynomial() {
            common = lcm(&common, c.den());
        }
    }
    let jet_part = if common.is_constant() {
        MPoly::one()
    } else {
        let xy_part = content_above(&common, jet(1));
        common.div_exact(&xy_part).expect("content divides")
    };
    let jet_part = RatFunc::from_poly(jet_part);

    let mut by_monomial: BTreeMap<Monomial, LinDiffPoly> = BTreeMap::new();
    for (s, c) in restricted.terms() {
        let cleared = c * &jet_part;
        if !cleared.den().vars_below(jet(1)) {
            return Err(Error::Internal(format!(
                "jet denominator survived clearing: {cleared}"
            )));
        }
        let den = RatFunc::from_poly(cleared.den().clone());
        for (mono, coeff) in cleared.num().collect_above(jet(1)) {
            let coeff = RatFunc::from_poly(coeff).div(&den)?;
            by_monomial.entry(mono).or_default().add_term(*s, coeff);
        }
    }

    let mut equations: Vec<LinDiffPoly> = Vec::new();
    let mut provenance: Vec<Vec<Monomial>> = Vec::new();
    let mut seen: Vec<LinDiffPoly> = Vec::new();
    for (mono, eq) in by_monomial {
        if eq.is_zero() {
            continue;
        }
        let normal = scalar_normal(&eq)?;
        if let Some(i) = seen.iter().position(|s| *s == normal) {
            provenance[i].push(mono);
            continue;
        }
        seen.push(normal);
        equations.push(eq);
        provenance.push(vec![mono]);
    }

    let sys = LinDiffSystem {
        equations,
        provenance,
    };
    if sys.max_order() as usize > n {
        return Err(Error::Internal(format!(
            "determining system has slot order {} > {n}",
            sys.max_order()
        )));
    }
    Ok(sys)
}

/// Representative of the line `{c * p}`: divided by the coefficient of its largest slot.
fn scalar_normal(p: &LinDiffPoly) -> Result<LinDiffPoly> {
    let (_, lead) = p
        .terms
        .iter()
        .next_back()
        .ok_or_else(|| Error::Internal("zero equation".into()))?;
    let inv = lead.inv()?;
    Ok(p.scale(&inv))
}
