//! Abstract Lie algebra of the point symmetries, read from truncated Taylor
//! solutions of the involutive determining system, and the linearization
//! certificate built from it.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::detgen::{Slot, Unknown};
use crate::error::{Error, Result};
use crate::janet::InvolutiveSystem;
use crate::jetcore::display::rat_to_string;
use crate::jetcore::{int, rat, MPoly, Rat, RatFunc, X, Y};
use crate::linalg::{self, Matrix};

fn factorial(n: u32) -> Rat {
    Rat::from_integer((1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k)))
}

fn binomial(n: u32, k: u32) -> Rat {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Bivariate power series in `(x - x0, y - y0)` truncated at total degree `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series2 {
    order: u32,
    // c[i][j] is the coefficient of X^i Y^j, i + j <= order
    c: Vec<Vec<Rat>>,
}

impl Series2 {
    pub fn zero(order: u32) -> Self {
        let c = (0..=order)
            .map(|i| vec![Rat::zero(); (order - i + 1) as usize])
            .collect();
        Series2 { order, c }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn get(&self, i: u32, j: u32) -> Rat {
        if i + j > self.order {
            return Rat::zero();
        }
        self.c[i as usize][j as usize].clone()
    }

    pub fn set(&mut self, i: u32, j: u32, v: Rat) {
        self.c[i as usize][j as usize] = v;
    }

    fn indices(order: u32) -> impl Iterator<Item = (u32, u32)> {
        (0..=order).flat_map(move |i| (0..=order - i).map(move |j| (i, j)))
    }

    /// Taylor expansion of a polynomial in `x, y` at `point`.
    pub fn from_poly_at(p: &MPoly, point: &(Rat, Rat), order: u32) -> Self {
        let shifted = p.compose(|i| match i {
            X => Some(&MPoly::var(X) + &MPoly::constant(point.0.clone())),
            Y => Some(&MPoly::var(Y) + &MPoly::constant(point.1.clone())),
            _ => None,
        });
        let mut s = Series2::zero(order);
        for (m, c) in shifted.terms() {
            let (i, j) = (m.exp(X), m.exp(Y));
            if i + j <= order {
                s.set(i, j, c.clone());
            }
        }
        s
    }

    /// Taylor expansion of a rational function of `x, y`; fails where the denominator vanishes.
    pub fn from_ratfunc_at(r: &RatFunc, point: &(Rat, Rat), order: u32) -> Result<Self> {
        if !r.vars_below(Y + 1) {
            return Err(Error::Internal(format!("coefficient {r} depends on jet variables")));
        }
        let num = Series2::from_poly_at(r.num(), point, order);
        if r.is_polynomial() {
            return Ok(num);
        }
        let den = Series2::from_poly_at(r.den(), point, order);
        num.div(&den).ok_or_else(|| {
            Error::SingularPoint(rat_to_string(&point.0), rat_to_string(&point.1))
        })
    }

    pub fn add(&self, o: &Series2) -> Series2 {
        let order = self.order.min(o.order);
        let mut s = Series2::zero(order);
        for (i, j) in Series2::indices(order) {
            s.set(i, j, self.get(i, j) + o.get(i, j));
        }
        s
    }

    pub fn sub(&self, o: &Series2) -> Series2 {
        let order = self.order.min(o.order);
        let mut s = Series2::zero(order);
        for (i, j) in Series2::indices(order) {
            s.set(i, j, self.get(i, j) - o.get(i, j));
        }
        s
    }

    pub fn mul(&self, o: &Series2) -> Series2 {
        let order = self.order.min(o.order);
        let mut s = Series2::zero(order);
        for (i, j) in Series2::indices(order) {
            let a = self.get(i, j);
            if a.is_zero() {
                continue;
            }
            for (k, l) in Series2::indices(order - i - j) {
                let b = o.get(k, l);
                if !b.is_zero() {
                    let cur = s.get(i + k, j + l);
                    s.set(i + k, j + l, cur + &a * b);
                }
            }
        }
        s
    }

    /// Quotient, or `None` if `o` has zero constant term.
    pub fn div(&self, o: &Series2) -> Option<Series2> {
        let c0 = o.get(0, 0);
        if c0.is_zero() {
            return None;
        }
        let order = self.order.min(o.order);
        let mut q = Series2::zero(order);
        // graded by total degree so every needed q entry is already known
        for d in 0..=order {
            for i in 0..=d {
                let j = d - i;
                let mut acc = self.get(i, j);
                for (k, l) in Series2::indices(d) {
                    if (k, l) == (0, 0) || k > i || l > j {
                        continue;
                    }
                    let b = o.get(k, l);
                    if !b.is_zero() {
                        acc -= b * q.get(i - k, j - l);
                    }
                }
                q.set(i, j, acc / &c0);
            }
        }
        Some(q)
    }

    /// Partial derivative; the result is exact to one order less.
    pub fn partial(&self, wrt_x: bool) -> Series2 {
        let order = self.order.saturating_sub(1);
        let mut s = Series2::zero(order);
        if self.order == 0 {
            return s;
        }
        for (i, j) in Series2::indices(order) {
            let v = if wrt_x {
                self.get(i + 1, j) * int(i as i64 + 1)
            } else {
                self.get(i, j + 1) * int(j as i64 + 1)
            };
            s.set(i, j, v);
        }
        s
    }

    /// `∂x^i ∂y^j` of the series at the expansion point.
    pub fn derivative_value(&self, i: u32, j: u32) -> Rat {
        self.get(i, j) * factorial(i) * factorial(j)
    }
}

/// Formal power series solution, stored as derivative values at the expansion point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesSolution {
    pub point: (Rat, Rat),
    pub order: u32,
    pub values: BTreeMap<Slot, Rat>,
}

impl SeriesSolution {
    pub fn value(&self, s: &Slot) -> Rat {
        self.values.get(s).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn taylor(&self, u: Unknown) -> Series2 {
        let mut s = Series2::zero(self.order);
        for (slot, v) in &self.values {
            if slot.unknown == u && slot.order() <= self.order {
                s.set(slot.dx, slot.dy, v / (factorial(slot.dx) * factorial(slot.dy)));
            }
        }
        s
    }

    fn from_taylor(point: (Rat, Rat), xi: &Series2, eta: &Series2) -> Self {
        let order = xi.order().min(eta.order());
        let mut values = BTreeMap::new();
        for (u, s) in [(Unknown::Xi, xi), (Unknown::Eta, eta)] {
            for (i, j) in Series2::indices(order) {
                let v = s.derivative_value(i, j);
                if !v.is_zero() {
                    values.insert(Slot::new(u, i, j), v);
                }
            }
        }
        SeriesSolution { point, order, values }
    }

    pub fn truncate(&self, order: u32) -> Self {
        SeriesSolution {
            point: self.point.clone(),
            order,
            values: self
                .values
                .iter()
                .filter(|(s, _)| s.order() <= order)
                .map(|(s, v)| (*s, v.clone()))
                .collect(),
        }
    }
}

/// Deterministic sequence of candidate expansion points.
pub fn expansion_points() -> impl Iterator<Item = (Rat, Rat)> {
    let head = vec![
        (int(0), int(0)),
        (int(1), int(1)),
        (int(1), int(2)),
        (int(2), int(1)),
        (rat(1, 2), rat(1, 3)),
    ];
    let tail = (2..40i64).flat_map(|k| {
        [
            (int(k + 1), int(k + 2)),
            (rat(1, k + 1), int(-k)),
            (int(-k), rat(2, 2 * k + 1)),
        ]
    });
    head.into_iter().chain(tail)
}

/// Whether every coefficient of the solved system is analytic at `point`.
pub fn is_regular_point(inv: &InvolutiveSystem, point: &(Rat, Rat)) -> bool {
    let p = [point.0.clone(), point.1.clone()];
    inv.denominators().iter().all(|d| !d.eval(&p).is_zero())
}

/// Regular points of `inv`, in the order of [`expansion_points`].
pub fn regular_points(inv: &InvolutiveSystem) -> impl Iterator<Item = (Rat, Rat)> + '_ {
    expansion_points().filter(move |p| is_regular_point(inv, p))
}

fn singular(point: &(Rat, Rat)) -> Error {
    Error::SingularPoint(rat_to_string(&point.0), rat_to_string(&point.1))
}

/// Taylor data of the solved equations: for each, the leader and the expanded tail.
struct Expanded<'a> {
    inv: &'a InvolutiveSystem,
    tails: Vec<Vec<(Slot, Series2)>>,
}

impl<'a> Expanded<'a> {
    fn new(inv: &'a InvolutiveSystem, point: &(Rat, Rat), order: u32) -> Result<Self> {
        if !is_regular_point(inv, point) {
            return Err(singular(point));
        }
        let mut tails = Vec::with_capacity(inv.equations.len());
        for (e, l) in inv.equations.iter().zip(&inv.leaders) {
            let mut t = Vec::new();
            for (s, c) in e.terms() {
                if s != l {
                    t.push((*s, Series2::from_ratfunc_at(c, point, order)?));
                }
            }
            tails.push(t);
        }
        Ok(Expanded { inv, tails })
    }

    /// Derivative value at `s` of the solution with the given parametric data.
    fn value(&self, s: Slot, initial: &HashMap<Slot, Rat>, cache: &mut HashMap<Slot, Rat>) -> Rat {
        if let Some(v) = cache.get(&s) {
            return v.clone();
        }
        let v = match self.inv.leader_dividing(&s) {
            None => initial.get(&s).cloned().unwrap_or_else(Rat::zero),
            Some((idx, (a, b))) => {
                // D^(a,b) of (leader + Σ c_t t) = 0, expanded by Leibniz
                let mut acc = Rat::zero();
                for (t, c) in &self.tails[idx] {
                    for i in 0..=a {
                        for j in 0..=b {
                            let dc = c.derivative_value(a - i, b - j);
                            if dc.is_zero() {
                                continue;
                            }
                            let w = self.value(t.shifted(i, j), initial, cache);
                            if !w.is_zero() {
                                acc += binomial(a, i) * binomial(b, j) * dc * w;
                            }
                        }
                    }
                }
                -acc
            }
        };
        cache.insert(s, v.clone());
        v
    }
}

/// One formal solution per parametric slot, with delta initial data, through total order `order`.
///
/// Needs an orderly ranking, so that back-substitution never leaves total order `order`.
pub fn series_basis(inv: &InvolutiveSystem, point: &(Rat, Rat), order: u32) -> Result<Vec<SeriesSolution>> {
    if !inv.ranking.is_orderly() {
        return Err(Error::Contract("series expansion needs an orderly ranking".into()));
    }
    let ex = Expanded::new(inv, point, order)?;
    let mut out = Vec::with_capacity(inv.parametric.len());
    for p in &inv.parametric {
        let initial: HashMap<Slot, Rat> = [(*p, Rat::one())].into_iter().collect();
        let mut cache = HashMap::new();
        let mut values = BTreeMap::new();
        for u in Unknown::ALL {
            for (i, j) in Series2::indices(order) {
                let s = Slot::new(u, i, j);
                let v = ex.value(s, &initial, &mut cache);
                if !v.is_zero() {
                    values.insert(s, v);
                }
            }
        }
        out.push(SeriesSolution {
            point: point.clone(),
            order,
            values,
        });
    }
    Ok(out)
}

/// Structure constants `C[i][j][k]` of `[X_i, X_j] = Σ_k C[i][j][k] X_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraTable {
    pub m: usize,
    pub c: Vec<Vec<Vec<Rat>>>,
}

impl LieAlgebraTable {
    pub fn zero(m: usize) -> Self {
        LieAlgebraTable {
            m,
            c: vec![vec![linalg::zero_vec(m); m]; m],
        }
    }

    /// Bracket of two elements given in basis coordinates.
    pub fn bracket(&self, u: &[Rat], v: &[Rat]) -> Vec<Rat> {
        let mut out = linalg::zero_vec(self.m);
        for i in 0..self.m {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..self.m {
                if v[j].is_zero() {
                    continue;
                }
                let f = &u[i] * &v[j];
                for (o, c) in out.iter_mut().zip(&self.c[i][j]) {
                    *o += &f * c;
                }
            }
        }
        out
    }

    pub fn check_antisymmetry(&self) -> std::result::Result<(), String> {
        for i in 0..self.m {
            for j in 0..self.m {
                for k in 0..self.m {
                    if self.c[i][j][k] != -&self.c[j][i][k] {
                        return Err(format!("C[{i}][{j}][{k}] != -C[{j}][{i}][{k}]"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_jacobi(&self) -> std::result::Result<(), String> {
        let m = self.m;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for s in 0..m {
                        let mut acc = Rat::zero();
                        for l in 0..m {
                            acc += &self.c[i][j][l] * &self.c[l][k][s]
                                + &self.c[j][k][l] * &self.c[l][i][s]
                                + &self.c[k][i][l] * &self.c[l][j][s];
                        }
                        if !acc.is_zero() {
                            return Err(format!("Jacobi identity fails at ({i},{j},{k};{s})"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for LieAlgebraTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in 0..self.m {
            for j in (i + 1)..self.m {
                let terms: Vec<String> = self.c[i][j]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| format!("{}*X{}", rat_to_string(c), k + 1))
                    .collect();
                if terms.is_empty() {
                    continue;
                }
                if !first {
                    writeln!(f)?;
                }
                first = false;
                write!(f, "[X{}, X{}] = {}", i + 1, j + 1, terms.join(" + "))?;
            }
        }
        if first {
            write!(f, "abelian")?;
        }
        Ok(())
    }
}

fn bracket_series(a: &SeriesSolution, b: &SeriesSolution) -> SeriesSolution {
    let (xa, ea) = (a.taylor(Unknown::Xi), a.taylor(Unknown::Eta));
    let (xb, eb) = (b.taylor(Unknown::Xi), b.taylor(Unknown::Eta));
    // X_a(f) = ξ_a f_x + η_a f_y
    let apply = |xi: &Series2, eta: &Series2, f: &Series2| {
        xi.mul(&f.partial(true)).add(&eta.mul(&f.partial(false)))
    };
    let xi = apply(&xa, &ea, &xb).sub(&apply(&xb, &eb, &xa));
    let eta = apply(&xa, &ea, &eb).sub(&apply(&xb, &eb, &ea));
    SeriesSolution::from_taylor(a.point.clone(), &xi, &eta)
}

/// Structure constants of the algebra spanned by `basis`.
///
/// Each bracket is recomputed as a series, its parametric data are read off as
/// coordinates, and the full series of the combination is compared against it.
pub fn structure_constants(inv: &InvolutiveSystem, basis: &[SeriesSolution]) -> Result<LieAlgebraTable> {
    let m = basis.len();
    if m != inv.parametric.len() {
        return Err(Error::Contract(format!(
            "basis has {m} elements, system has {} parametric derivatives",
            inv.parametric.len()
        )));
    }
    let mut table = LieAlgebraTable::zero(m);
    if m == 0 {
        return Ok(table);
    }
    let order = basis[0].order;
    if order < inv.max_parametric_order() + 1 {
        return Err(Error::Contract(format!(
            "truncation {order} too low to read brackets"
        )));
    }
    for i in 0..m {
        for j in (i + 1)..m {
            let br = bracket_series(&basis[i], &basis[j]);
            let coords: Vec<Rat> = inv.parametric.iter().map(|p| br.value(p)).collect();
            for s in Unknown::ALL.iter().flat_map(|&u| {
                Series2::indices(br.order).map(move |(a, b)| Slot::new(u, a, b))
            }) {
                let combo = basis
                    .iter()
                    .zip(&coords)
                    .fold(Rat::zero(), |acc, (e, c)| acc + c * e.value(&s));
                if combo != br.value(&s) {
                    return Err(Error::Internal(format!(
                        "bracket [X{}, X{}] is not a symmetry at slot {s}",
                        i + 1,
                        j + 1
                    )));
                }
            }
            table.c[j][i] = coords.iter().map(|c| -c).collect();
            table.c[i][j] = coords;
        }
    }
    Ok(table)
}

/// Default truncation order: two above the highest parametric derivative.
pub fn default_truncation(inv: &InvolutiveSystem) -> u32 {
    inv.max_parametric_order() + 2
}

/// Structure constants at `point` and truncation `order`, re-derived at `order + 1` as a check.
pub fn algebra_at(inv: &InvolutiveSystem, point: &(Rat, Rat), order: u32) -> Result<LieAlgebraTable> {
    let table = structure_constants(inv, &series_basis(inv, point, order)?)?;
    let check = structure_constants(inv, &series_basis(inv, point, order + 1)?)?;
    if table != check {
        return Err(Error::Internal(format!(
            "structure constants change between truncation {order} and {}",
            order + 1
        )));
    }
    Ok(table)
}

/// A subspace of the algebra, kept as an RREF basis in coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subalgebra {
    pub parent: LieAlgebraTable,
    pub basis: Matrix,
    pub pivots: Vec<usize>,
}

impl Subalgebra {
    pub fn span(parent: &LieAlgebraTable, vectors: &[Vec<Rat>]) -> Self {
        let (basis, pivots) = if vectors.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            linalg::rref(vectors)
        };
        Subalgebra {
            parent: parent.clone(),
            basis,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coordinates(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        linalg::coordinates(&self.basis, &self.pivots, v)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coordinates(v).is_some()
    }
}

/// Span of all brackets `[X_i, X_j]`.
pub fn derived_algebra(l: &LieAlgebraTable) -> Subalgebra {
    let mut vecs = Vec::new();
    for i in 0..l.m {
        for j in (i + 1)..l.m {
            if !linalg::is_zero_vec(&l.c[i][j]) {
                vecs.push(l.c[i][j].clone());
            }
        }
    }
    Subalgebra::span(l, &vecs)
}

pub fn is_abelian(s: &Subalgebra) -> bool {
    let b = &s.basis;
    (0..b.len()).all(|i| ((i + 1)..b.len()).all(|j| linalg::is_zero_vec(&s.parent.bracket(&b[i], &b[j]))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Linearizable,
    NotLinearizable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// Equivalent to `u^(n) = 0`.
    Trivial,
    /// `m = n + 2`.
    ConstantCoefficients,
    /// `m = n + 1`.
    NonconstantCoefficients,
    None,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Linearizable => "linearizable",
            Verdict::NotLinearizable => "not-linearizable",
        }
    }
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Trivial => "trivial",
            CaseTag::ConstantCoefficients => "constant-coefficients",
            CaseTag::NonconstantCoefficients => "nonconstant-coefficients",
            CaseTag::None => "none",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub case: CaseTag,
    pub n: usize,
    pub m: usize,
    pub derived_dim: usize,
    pub derived_abelian: bool,
}

/// Linearization test from the order, the symmetry dimension and the derived algebra.
pub fn classify(n: usize, m: usize, derived_dim: usize, derived_abelian: bool) -> Certificate {
    let maximal = (n == 2 && m == 8) || (n >= 3 && m == n + 4);
    let submaximal = n >= 3 && (m == n + 1 || m == n + 2) && derived_abelian && derived_dim == n;
    let (verdict, case) = if maximal {
        (Verdict::Linearizable, CaseTag::Trivial)
    } else if submaximal && m == n + 2 {
        (Verdict::Linearizable, CaseTag::ConstantCoefficients)
    } else if submaximal {
        (Verdict::Linearizable, CaseTag::NonconstantCoefficients)
    } else {
        (Verdict::NotLinearizable, CaseTag::None)
    };
    Certificate {
        verdict,
        case,
        n,
        m,
        derived_dim,
        derived_abelian,
    }
}

pub fn certify(n: usize, l: &LieAlgebraTable) -> Certificate {
    let d = derived_algebra(l);
    classify(n, l.m, d.dim(), is_abelian(&d))
}

/// Upper bound on the symmetry dimension of an order-`n` equation.
pub fn dimension_bound(n: usize) -> usize {
    if n == 2 {
        8
    } else {
        n + 4
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detgen::{determining_system, LinDiffPoly, LinDiffSystem};
    use crate::janet::{complete, default_ranking};
    use crate::odeparse::parse_ode;

    fn pt(a: i64, b: i64) -> (Rat, Rat) {
        (int(a), int(b))
    }

    fn involutive(text: &str) -> InvolutiveSystem {
        let sys = determining_system(&parse_ode(text).unwrap()).unwrap();
        complete(&sys, default_ranking()).unwrap()
    }

    fn system(eqs: Vec<LinDiffPoly>) -> InvolutiveSystem {
        complete(&LinDiffSystem::new(eqs), default_ranking()).unwrap()
    }

    #[test]
    fn series_division_inverts_multiplication() {
        let p = &(&MPoly::var(X) * &MPoly::var(Y)) + &MPoly::from_int(3);
        let q = &MPoly::var(X).pow(2) + &MPoly::one();
        let point = (rat(1, 2), int(-1));
        let sp = Series2::from_poly_at(&p, &point, 5);
        let sq = Series2::from_poly_at(&q, &point, 5);
        assert_eq!(sp.mul(&sq).div(&sq).unwrap(), sp);
        let r = RatFunc::new(p, q).unwrap();
        let sr = Series2::from_ratfunc_at(&r, &point, 5).unwrap();
        assert_eq!(sr.mul(&sq), sp);
    }

    #[test]
    fn singular_point_rejected() {
        let r = RatFunc::one().div(&RatFunc::var(X)).unwrap();
        let e = Series2::from_ratfunc_at(&r, &pt(0, 0), 3).unwrap_err();
        assert!(matches!(e, Error::SingularPoint(..)));
    }

    #[test]
    fn constants_only_basis() {
        let inv = system(vec![
            LinDiffPoly::slot(Slot::xi(1, 0)),
            LinDiffPoly::slot(Slot::xi(0, 1)),
            LinDiffPoly::slot(Slot::eta(1, 0)),
            LinDiffPoly::slot(Slot::eta(0, 1)),
        ]);
        let basis = series_basis(&inv, &pt(0, 0), 3).unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0].values.len(), 1);
        assert_eq!(basis[0].value(&Slot::xi(0, 0)), int(1));
        assert_eq!(basis[1].value(&Slot::eta(0, 0)), int(1));
        let t = structure_constants(&inv, &basis).unwrap();
        assert_eq!(t, LieAlgebraTable::zero(2));
        assert_eq!(derived_algebra(&t).dim(), 0);
    }

    #[test]
    fn affine_line_bracket() {
        // ξ_xx = 0, ξ_y = 0, η = 0: generators ∂x and x∂x
        let inv = system(vec![
            LinDiffPoly::slot(Slot::xi(2, 0)),
            LinDiffPoly::slot(Slot::xi(0, 1)),
            LinDiffPoly::slot(Slot::eta(0, 0)),
        ]);
        assert_eq!(inv.parametric, vec![Slot::xi(0, 0), Slot::xi(1, 0)]);
        let t = algebra_at(&inv, &pt(0, 0), default_truncation(&inv)).unwrap();
        assert_eq!(t.c[0][1], vec![int(1), int(0)]);
        assert_eq!(t.c[1][0], vec![int(-1), int(0)]);
        let d = derived_algebra(&t);
        assert_eq!(d.dim(), 1);
        assert!(is_abelian(&d));
    }

    #[test]
    fn series_satisfy_the_system() {
        let inv = involutive("y'' = y^2");
        let point = pt(1, 2);
        let basis = series_basis(&inv, &point, 5).unwrap();
        for sol in &basis {
            for (e, l) in inv.equations.iter().zip(&inv.leaders) {
                // evaluate the equation itself at the point
                let mut acc = sol.value(l);
                for (s, c) in e.terms().filter(|(s, _)| *s != l) {
                    acc += c.eval(&[point.0.clone(), point.1.clone()]).unwrap() * sol.value(s);
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn free_particle_generators_in_span() {
        let inv = involutive("y'' = 0");
        let point = pt(0, 0);
        let n = 4;
        let basis = series_basis(&inv, &point, n).unwrap();
        assert_eq!(basis.len(), 8);
        let (x, y) = (MPoly::var(X), MPoly::var(Y));
        let zero = MPoly::zero();
        let one = MPoly::one();
        let gens = [
            (one.clone(), zero.clone()),
            (zero.clone(), one.clone()),
            (x.clone(), zero.clone()),
            (y.clone(), zero.clone()),
            (zero.clone(), x.clone()),
            (zero.clone(), y.clone()),
            (&x * &x, &x * &y),
            (&x * &y, &y * &y),
        ];
        let slots: Vec<Slot> = Unknown::ALL
            .iter()
            .flat_map(|&u| Series2::indices(n).map(move |(a, b)| Slot::new(u, a, b)))
            .collect();
        let rows: Vec<Vec<Rat>> = basis.iter().map(|b| slots.iter().map(|s| b.value(s)).collect()).collect();
        let (rb, piv) = linalg::rref(&rows);
        assert_eq!(rb.len(), 8);
        for (xi, eta) in gens {
            let sol = SeriesSolution::from_taylor(
                point.clone(),
                &Series2::from_poly_at(&xi, &point, n),
                &Series2::from_poly_at(&eta, &point, n),
            );
            let v: Vec<Rat> = slots.iter().map(|s| sol.value(s)).collect();
            assert!(linalg::coordinates(&rb, &piv, &v).is_some());
        }
    }

    #[test]
    fn truncation_stability() {
        let inv = involutive("y'' + (y')^2 = 0");
        let a = series_basis(&inv, &pt(1, 1), 4).unwrap();
        let b = series_basis(&inv, &pt(1, 1), 6).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x, &y.truncate(4));
        }
    }

    #[test]
    fn maximal_algebra_is_perfect() {
        let inv = involutive("y'' = 0");
        let t = algebra_at(&inv, &pt(0, 0), default_truncation(&inv)).unwrap();
        t.check_antisymmetry().unwrap();
        t.check_jacobi().unwrap();
        let d = derived_algebra(&t);
        assert_eq!(d.dim(), 8);
        assert!(!is_abelian(&d));
        let c = certify(2, &t);
        assert_eq!((c.verdict, c.case), (Verdict::Linearizable, CaseTag::Trivial));
    }

    #[test]
    fn second_point_gives_same_invariants() {
        let inv = involutive("y'' = y^2");
        let mut pts = regular_points(&inv);
        let (p, q) = (pts.next().unwrap(), pts.next().unwrap());
        let n = default_truncation(&inv);
        let a = certify(2, &algebra_at(&inv, &p, n).unwrap());
        let b = certify(2, &algebra_at(&inv, &q, n).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.m, 2);
        assert_eq!(a.verdict, Verdict::NotLinearizable);
    }

    #[test]
    fn classification_table() {
        let c = classify(2, 8, 8, false);
        assert_eq!((c.verdict, c.case), (Verdict::Linearizable, CaseTag::Trivial));
        let c = classify(3, 5, 3, true);
        assert_eq!((c.verdict, c.case), (Verdict::Linearizable, CaseTag::ConstantCoefficients));
        let c = classify(3, 4, 3, true);
        assert_eq!(c.case, CaseTag::NonconstantCoefficients);
        assert_eq!(classify(2, 2, 1, true).verdict, Verdict::NotLinearizable);
        assert_eq!(classify(3, 5, 2, true).verdict, Verdict::NotLinearizable);
        assert_eq!(classify(3, 5, 3, false).verdict, Verdict::NotLinearizable);
        assert_eq!(classify(4, 8, 8, false).case, CaseTag::Trivial);
    }
}
