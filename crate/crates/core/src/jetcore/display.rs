//! Text rendering of polynomials and rational functions in the ODE grammar.

use num_traits::{One, Signed};

use super::mpoly::{MPoly, Monomial};
use super::ratfunc::RatFunc;
use super::Rat;

/// Name of variable `index` under the jet convention (`x`, `y`, `y'`, ..., `y^(k)`).
pub fn var_name(index: usize) -> String {
    match index {
        0 => "x".to_string(),
        k => derivative_name("y", k - 1),
    }
}

/// `u`, `u'`, ..., `u''''`, then `u^(k)`.
pub fn derivative_name(base: &str, k: usize) -> String {
    if k <= 4 {
        format!("{}{}", base, "'".repeat(k))
    } else {
        format!("{base}^({k})")
    }
}

pub fn rat_to_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn power_to_string(index: usize, exp: u32) -> String {
    let name = var_name(index);
    if exp == 1 {
        name
    } else if index <= 1 {
        format!("{name}^{exp}")
    } else {
        format!("({name})^{exp}")
    }
}

fn monomial_to_string(m: &Monomial) -> String {
    m.exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| power_to_string(i, e))
        .collect::<Vec<_>>()
        .join("*")
}

/// Unsigned rendering of `|c| * m`.
fn term_body(c: &Rat, m: &Monomial) -> String {
    let a = c.abs();
    if m.is_one() {
        rat_to_string(&a)
    } else if a.is_one() {
        monomial_to_string(m)
    } else {
        format!("{}*{}", rat_to_string(&a), monomial_to_string(m))
    }
}

/// Terms in decreasing monomial order, joined with ` + ` / ` - `.
pub fn poly_to_string(p: &MPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let body = term_body(c, m);
        match (i, c.is_negative()) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}

fn is_single_power(p: &MPoly) -> bool {
    p.len() == 1
        && p.terms().next().is_some_and(|(m, c)| {
            c.is_one() && m.exps().iter().filter(|&&e| e > 0).count() == 1
        })
}

pub fn ratfunc_to_string(r: &RatFunc) -> String {
    if r.is_polynomial() {
        return poly_to_string(r.num());
    }
    let num = poly_to_string(r.num());
    let num = if r.num().len() > 1 {
        format!("({num})")
    } else {
        num
    };
    let den = poly_to_string(r.den());
    let den = if is_single_power(r.den()) {
        den
    } else {
        format!("({den})")
    };
    format!("{num}/{den}")
}
