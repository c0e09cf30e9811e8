//! Characteristic polynomial recovery for constant-coefficient linearizable
//! equations, and the affine equivalence of characteristic polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::jetcore::display::{derivative_name, rat_to_string};
use crate::jetcore::{int, Rat};
use crate::liealg::{LieAlgebraTable, Subalgebra};
use crate::linalg::{self, Matrix};

/// Monic `z^n + a_{n-1} z^{n-1} + ... + a_0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharPoly {
    coeffs: Vec<Rat>,
}

impl CharPoly {
    /// From `a_0, ..., a_{n-1}`.
    pub fn new(coeffs: Vec<Rat>) -> Self {
        CharPoly { coeffs }
    }

    /// From coefficients listed highest degree first; the leading one is divided out.
    pub fn from_high_first(cs: &[Rat]) -> Result<Self> {
        let Some((lead, rest)) = cs.split_first() else {
            return Err(Error::Contract("empty coefficient list".into()));
        };
        if lead.is_zero() {
            return Err(Error::Contract("leading coefficient is zero".into()));
        }
        Ok(CharPoly {
            coeffs: rest.iter().rev().map(|c| c / lead).collect(),
        })
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        CharPoly {
            coeffs: linalg::zero_vec(n),
        }
    }

    /// `Π (z - r)`.
    pub fn from_roots(roots: &[Rat]) -> Self {
        let mut full = vec![Rat::one()];
        for r in roots {
            full = mul_full(&full, &[-r.clone(), Rat::one()]);
        }
        CharPoly::from_full(full)
    }

    fn from_full(mut full: Vec<Rat>) -> Self {
        full.pop();
        CharPoly { coeffs: full }
    }

    /// Coefficients from degree 0 up to and including the leading 1.
    fn full(&self) -> Vec<Rat> {
        let mut v = self.coeffs.clone();
        v.push(Rat::one());
        v
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_0, ..., a_{n-1}`.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn eval(&self, z: &Rat) -> Rat {
        self.full().iter().rev().fold(Rat::zero(), |acc, c| acc * z + c)
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let full = self.full();
        let names: Vec<String> = (0..=n)
            .map(|k| match k {
                0 => String::new(),
                1 => "z".into(),
                k => format!("z^{k}"),
            })
            .collect();
        f.write_str(&render_terms(&full, &names))
    }
}

/// Joins `c_k * name_k` from the highest `k` down, skipping zeros.
fn render_terms(full: &[Rat], names: &[String]) -> String {
    let mut out = String::new();
    for k in (0..full.len()).rev() {
        let c = &full[k];
        if c.is_zero() {
            continue;
        }
        let a = c.abs();
        let body = match (names[k].is_empty(), a.is_one()) {
            (true, _) => rat_to_string(&a),
            (false, true) => names[k].clone(),
            (false, false) => format!("{}*{}", rat_to_string(&a), names[k]),
        };
        match (out.is_empty(), c.is_negative()) {
            (true, false) => out.push_str(&body),
            (true, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (false, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (false, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn mul_full(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = linalg::zero_vec(a.len() + b.len() - 1);
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `p(alpha z + beta)` on full coefficient vectors, by Horner.
fn compose_linear(full: &[Rat], alpha: &Rat, beta: &Rat) -> Vec<Rat> {
    let lin = [beta.clone(), alpha.clone()];
    let mut acc = vec![Rat::zero()];
    for c in full.iter().rev() {
        acc = mul_full(&acc, &lin);
        acc[0] += c;
    }
    acc.truncate(full.len());
    acc
}

/// Polynomial whose roots are `k λ + b` for the roots `λ` of `p`: `k^n p((z - b)/k)`.
pub fn transform(p: &CharPoly, k: &Rat, b: &Rat) -> Result<CharPoly> {
    if k.is_zero() {
        return Err(Error::Contract("affine map needs k != 0".into()));
    }
    let inv = k.recip();
    let mut full = compose_linear(&p.full(), &inv, &(-b * &inv));
    let scale = num_traits::pow(k.clone(), p.degree());
    for c in full.iter_mut() {
        *c *= &scale;
    }
    Ok(CharPoly::from_full(full))
}

/// Orbit of a characteristic polynomial under root maps `λ -> k λ + b`, `k != 0`.
///
/// After centering, the coefficient `c_j` of `z^(n-j)` scales like `k^j`.
/// With `S` the indices `j >= 2` where `c_j != 0`, `g = gcd(S)` and integers
/// `t_j` with `Σ t_j j = g`, the product `w = Π c_j^(t_j)` scales like `k^g`, so
/// `I_j = c_j w^(-j/g)` is invariant. `S` and the `I_j` determine the orbit over ℂ.
#[derive(Clone, Debug)]
pub struct AffineClass {
    pub degree: usize,
    /// Trace-centered representative, `a_0, ..., a_{n-1}`.
    pub centered: CharPoly,
    /// Indices `j` in `2..=n` with `c_j = 0`.
    pub zero_pattern: Vec<usize>,
    /// `(j, I_j)` for `j` in the support.
    pub invariants: Vec<(usize, Rat)>,
}

impl PartialEq for AffineClass {
    fn eq(&self, o: &Self) -> bool {
        self.degree == o.degree && self.zero_pattern == o.zero_pattern && self.invariants == o.invariants
    }
}

impl Eq for AffineClass {}

impl AffineClass {
    /// Whether every root coincides (the class of `z^n`).
    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }
}

/// Centered coefficients `c_0 = 1, c_1 = 0, c_2, ..., c_n` (`c_j` multiplies `z^(n-j)`).
pub fn centered_coefficients(p: &CharPoly) -> Vec<Rat> {
    let n = p.degree();
    if n == 0 {
        return vec![Rat::one()];
    }
    let shift = -&p.coeffs[n - 1] / int(n as i64);
    let full = compose_linear(&p.full(), &Rat::one(), &shift);
    (0..=n).map(|j| full[n - j].clone()).collect()
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Integers `t_j` with `Σ t_j j = gcd(S)`, fixed by folding the extended gcd over `S` in order.
fn bezout(support: &[usize]) -> (usize, Vec<BigInt>) {
    let mut g = BigInt::from(support[0]);
    let mut t = vec![BigInt::one()];
    for &j in &support[1..] {
        let (d, x, y) = ext_gcd(&g, &BigInt::from(j));
        for v in t.iter_mut() {
            *v *= &x;
        }
        t.push(y);
        g = d;
    }
    let g: usize = g.try_into().expect("small gcd");
    (g, t)
}

fn rat_pow(r: &Rat, e: &BigInt) -> Rat {
    let k: i32 = e.try_into().expect("exponent fits in i32");
    if k >= 0 {
        num_traits::pow(r.clone(), k as usize)
    } else {
        num_traits::pow(r.recip(), (-k) as usize)
    }
}

pub fn affine_class(p: &CharPoly) -> AffineClass {
    let n = p.degree();
    let c = centered_coefficients(p);
    let centered = CharPoly::from_high_first(&c).expect("monic");
    let support: Vec<usize> = (2..=n).filter(|&j| !c[j].is_zero()).collect();
    let zero_pattern: Vec<usize> = (2..=n).filter(|&j| c[j].is_zero()).collect();
    let mut invariants = Vec::new();
    if !support.is_empty() {
        let (g, t) = bezout(&support);
        let w = support
            .iter()
            .zip(&t)
            .fold(Rat::one(), |acc, (&j, tj)| acc * rat_pow(&c[j], tj));
        for &j in &support {
            let e = BigInt::from(j / g);
            invariants.push((j, &c[j] * rat_pow(&w, &-e)));
        }
    }
    AffineClass {
        degree: n,
        centered,
        zero_pattern,
        invariants,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivReason {
    Equivalent,
    DegreeMismatch,
    ZeroPatternDiffers,
    InvariantsDiffer,
}

impl EquivReason {
    pub fn as_str(self) -> &'static str {
        match self {
            EquivReason::Equivalent => "equivalent",
            EquivReason::DegreeMismatch => "degree-mismatch",
            EquivReason::ZeroPatternDiffers => "zero-pattern-differs",
            EquivReason::InvariantsDiffer => "invariants-differ",
        }
    }
}

/// Cross-multiplied test `c_j^{j0} c'_{j0}^j = c'_j^{j0} c_{j0}^j` with `j0` the first support index.
///
/// Necessary for affine equivalence; not sufficient when the support has gcd > 1
/// and the `j0`-th roots of unity act nontrivially.
pub fn cross_multiplied_condition(p: &CharPoly, q: &CharPoly) -> bool {
    if p.degree() != q.degree() {
        return false;
    }
    let (c, d) = (centered_coefficients(p), centered_coefficients(q));
    let n = p.degree();
    if (2..=n).any(|j| c[j].is_zero() != d[j].is_zero()) {
        return false;
    }
    let Some(j0) = (2..=n).find(|&j| !c[j].is_zero()) else {
        return true;
    };
    (j0 + 1..=n).all(|j| {
        num_traits::pow(c[j].clone(), j0) * num_traits::pow(d[j0].clone(), j)
            == num_traits::pow(d[j].clone(), j0) * num_traits::pow(c[j0].clone(), j)
    })
}

pub fn affine_equivalence(p: &CharPoly, q: &CharPoly) -> EquivReason {
    if p.degree() != q.degree() {
        return EquivReason::DegreeMismatch;
    }
    let (a, b) = (affine_class(p), affine_class(q));
    let reason = if a.zero_pattern != b.zero_pattern {
        EquivReason::ZeroPatternDiffers
    } else if a.invariants != b.invariants {
        EquivReason::InvariantsDiffer
    } else {
        EquivReason::Equivalent
    };
    debug_assert!(reason != EquivReason::Equivalent || cross_multiplied_condition(p, q));
    reason
}

pub fn affine_equivalent(p: &CharPoly, q: &CharPoly) -> bool {
    affine_equivalence(p, q) == EquivReason::Equivalent
}

/// Linear ODE in `u(t)` whose characteristic polynomial is `p`.
pub fn charpoly_to_ode(p: &CharPoly) -> String {
    let names: Vec<String> = (0..=p.degree()).map(|k| derivative_name("u", k)).collect();
    format!("{} = 0", render_terms(&p.full(), &names))
}

/// Representative ODE of a class: the trace-centered polynomial at its own scale.
pub fn class_to_ode(c: &AffineClass) -> String {
    charpoly_to_ode(&c.centered)
}

/// Two vectors completing the basis of `d` to the whole algebra, picked greedily from unit vectors.
pub fn factor_space(l: &LieAlgebraTable, d: &Subalgebra) -> Result<(Vec<Rat>, Vec<Rat>)> {
    if l.m < d.dim() + 2 || l.m - d.dim() != 2 {
        return Err(Error::Contract(format!(
            "factor space has dimension {}, expected 2",
            l.m - d.dim()
        )));
    }
    let mut rows = d.basis.clone();
    let mut picked = Vec::new();
    for i in 0..l.m {
        let e = linalg::unit_vec(l.m, i);
        rows.push(e.clone());
        if linalg::rank(&rows) == rows.len() {
            picked.push(e);
            if picked.len() == 2 {
                break;
            }
        } else {
            rows.pop();
        }
    }
    let e2 = picked.pop().expect("two vectors");
    let e1 = picked.pop().expect("two vectors");
    Ok((e1, e2))
}

/// Matrix of `ad e` restricted to `d`; column `i` holds the coordinates of `[e, d_i]`.
pub fn adjoint_on_derived(l: &LieAlgebraTable, d: &Subalgebra, e: &[Rat]) -> Result<Matrix> {
    if d.contains(e) {
        return Err(Error::Contract("acting vector lies in the derived algebra".into()));
    }
    let k = d.dim();
    let mut a = vec![linalg::zero_vec(k); k];
    for (i, di) in d.basis.iter().enumerate() {
        let w = l.bracket(e, di);
        let coords = d
            .coordinates(&w)
            .ok_or_else(|| Error::Internal("bracket leaves the derived algebra".into()))?;
        for (r, c) in coords.into_iter().enumerate() {
            a[r][i] = c;
        }
    }
    Ok(a)
}

/// Outcome of the recovery steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recovery {
    pub acting: Vec<Rat>,
    pub action_matrix: Matrix,
    pub char_poly: CharPoly,
}

/// Characteristic polynomial of the first non-scalar action among `e1`, `e2`, `e1 + e2`.
pub fn recover_charpoly(l: &LieAlgebraTable, d: &Subalgebra) -> Result<Recovery> {
    let (e1, e2) = factor_space(l, d)?;
    let sum: Vec<Rat> = e1.iter().zip(&e2).map(|(a, b)| a + b).collect();
    for e in [e1, e2, sum] {
        let a = adjoint_on_derived(l, d, &e)?;
        if !linalg::is_scalar(&a) {
            let char_poly = CharPoly::new(linalg::charpoly(&a));
            return Ok(Recovery {
                acting: e,
                action_matrix: a,
                char_poly,
            });
        }
    }
    Err(Error::Internal("every candidate acts as a scalar on the derived algebra".into()))
}

/// Characteristic polynomial read off a given acting vector.
pub fn charpoly_for(l: &LieAlgebraTable, d: &Subalgebra, e: &[Rat]) -> Result<CharPoly> {
    Ok(CharPoly::new(linalg::charpoly(&adjoint_on_derived(l, d, e)?)))
}
