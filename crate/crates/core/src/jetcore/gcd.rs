//! Multivariate gcd over the rationals by recursive primitive remainder sequences.
//!
//! A polynomial is viewed as univariate in its highest variable with
//! coefficients in the remaining ones; contents are taken recursively and the
//! primitive parts are run through a pseudo-remainder Euclid loop.

use num_traits::Zero;

use super::mpoly::MPoly;
use super::{rat, Rat};

/// Greatest common divisor, normalized to leading coefficient 1 (zero iff both inputs are zero).
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    if a == b {
        return a.monic();
    }
    let va = a.max_var().expect("non-constant");
    let vb = b.max_var().expect("non-constant");
    let v = va.max(vb);
    if va < v {
        return gcd(a, &content(b, v));
    }
    if vb < v {
        return gcd(&content(a, v), b);
    }
    let ca = content(a, v);
    let cb = content(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = if coprime_image(&pa, &pb, v) {
        MPoly::one()
    } else {
        primitive_gcd(&pa, &pb, v)
    };
    (&c * &g).monic()
}

/// Least common multiple, normalized to leading coefficient 1.
pub fn lcm(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() || b.is_zero() {
        return MPoly::zero();
    }
    let g = gcd(a, b);
    (a * &b.div_exact(&g).expect("gcd divides")).monic()
}

/// Content of `p` viewed as a polynomial in variable `v`: gcd of its coefficients.
pub fn content(p: &MPoly, v: usize) -> MPoly {
    let mut g = MPoly::zero();
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Primitive part with respect to `v`, scaled to integer coefficients.
pub fn primitive_part(p: &MPoly, v: usize) -> MPoly {
    if p.is_zero() {
        return MPoly::zero();
    }
    let c = content(p, v);
    p.div_exact(&c).expect("content divides").integer_primitive()
}

/// Content with respect to all variables with index `>= split`, as a polynomial in the lower ones.
pub fn content_above(p: &MPoly, split: usize) -> MPoly {
    let mut g = MPoly::zero();
    for c in p.collect_above(split).values() {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Evaluation test for coprimality in `v`: at a point where neither leading
/// coefficient vanishes, `deg_v gcd(a, b)` is at most the degree of the gcd of
/// the univariate images. A constant image gcd therefore proves that `a` and
/// `b`, both primitive in `v`, are coprime. `false` means inconclusive.
fn coprime_image(a: &MPoly, b: &MPoly, v: usize) -> bool {
    let ac = a.coeffs_in(v);
    let bc = b.coeffs_in(v);
    let nvars = a.max_var().max(b.max_var()).map_or(0, |m| m + 1);
    for attempt in 0..3i64 {
        let point: Vec<Rat> = (0..nvars as i64).map(|i| rat(2 + 3 * i + 7 * attempt, 3 + attempt)).collect();
        let image = |cs: &[MPoly]| cs.iter().map(|c| c.eval(&point)).collect::<Vec<Rat>>();
        let (ai, bi) = (image(&ac), image(&bc));
        if ai.last().is_some_and(|c| c.is_zero()) || bi.last().is_some_and(|c| c.is_zero()) {
            continue;
        }
        return univariate_gcd_degree(ai, bi) == 0;
    }
    false
}

/// Degree of the gcd of two dense univariate polynomials (low degree first, nonzero leading terms).
fn univariate_gcd_degree(mut f: Vec<Rat>, mut g: Vec<Rat>) -> usize {
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        if g.len() == 1 {
            return 0;
        }
        let lead = g.last().expect("nonzero").clone();
        while f.len() >= g.len() {
            let q = f.last().expect("nonzero").clone() / &lead;
            let shift = f.len() - g.len();
            for (i, c) in g.iter().enumerate() {
                f[shift + i] -= &q * c;
            }
            while f.last().is_some_and(|c| c.is_zero()) {
                f.pop();
            }
        }
        if f.is_empty() {
            return g.len() - 1;
        }
        std::mem::swap(&mut f, &mut g);
    }
}

fn primitive_gcd(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) {
        (a.integer_primitive(), b.integer_primitive())
    } else {
        (b.integer_primitive(), a.integer_primitive())
    };
    loop {
        let r = pseudo_rem(&f, &g, v);
        if r.is_zero() {
            return primitive_part(&g, v);
        }
        if r.degree_in(v) == 0 {
            return MPoly::one();
        }
        f = g;
        g = primitive_part(&r, v);
    }
}

/// Sparse pseudo-remainder of `f` by `g` in variable `v`.
fn pseudo_rem(f: &MPoly, g: &MPoly, v: usize) -> MPoly {
    let dg = g.degree_in(v);
    let gc = g.coeffs_in(v);
    let lg = gc.last().cloned().expect("nonzero divisor");
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(v) >= dg {
        let dr = r.degree_in(v);
        let lr = r.coeffs_in(v).pop().expect("nonzero");
        let shift = super::mpoly::Monomial::var_pow(v, dr - dg);
        r = &(&r * &lg) - &(g * &lr).mul_monomial(&shift);
        r = r.integer_primitive();
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetcore::Rat;

    fn x() -> MPoly {
        MPoly::var(0)
    }
    fn y() -> MPoly {
        MPoly::var(1)
    }
    fn z() -> MPoly {
        MPoly::var(2)
    }
    fn c(n: i64) -> MPoly {
        MPoly::from_int(n)
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        let a = &x().pow(2) - &y().pow(2);
        let b = &x() - &y();
        assert_eq!(gcd(&a, &b), (&x() - &y()).monic());
    }

    #[test]
    fn gcd_trivariate_with_content() {
        let common = &(&x() * &y()) + &z();
        let a = &(&common * &(&x() + &c(1))) * &y();
        let b = &(&common * &(&z() - &c(2))) * &(&y() * &c(3));
        assert_eq!(gcd(&a, &b), (&common * &y()).monic());
    }

    #[test]
    fn gcd_coprime() {
        let a = &x().pow(2) + &c(1);
        let b = &x() + &y();
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn gcd_rational_coefficients() {
        let half = MPoly::constant(Rat::new(1.into(), 2.into()));
        let a = &(&x() + &half) * &(&y() - &c(1));
        let b = &(&x() + &half) * &(&y() + &c(1));
        assert_eq!(gcd(&a, &b), &x() + &half);
    }

    #[test]
    fn gcd_coprime_after_product_rule() {
        // numerator and denominator of D_x(p/q) for a pair that used to stall the remainder sequence
        let p = &(&(&x() * &y().pow(2)) * &z().pow(2)) + &(&x().pow(2) * &z());
        let q = &(&y() * &z().pow(2)) - &(&(&x() * &y()) + &c(3));
        let w = MPoly::var(3);
        let dp = &(&p.derivative(0) + &(&p.derivative(1) * &z())) + &(&p.derivative(2) * &w);
        let dq = &(&q.derivative(0) + &(&q.derivative(1) * &z())) + &(&q.derivative(2) * &w);
        let num = &(&dp * &q) - &(&p * &dq);
        assert!(gcd(&num, &(&q * &q)).is_one());
        assert_eq!(gcd(&(&num * &q), &(&q * &q)), q.monic());
    }

    #[test]
    fn lcm_product() {
        let a = &x() * &y();
        let b = &y() * &z();
        assert_eq!(lcm(&a, &b), &(&x() * &y()) * &z());
    }

    #[test]
    fn content_above_splits_jets() {
        // x*(y' + y) * (x + y)  -> content in x,y wrt jets: x*(x+y)
        let p = &(&x() * &(&z() + &y())) * &(&x() + &y());
        let g = content_above(&p, 2);
        assert_eq!(g, (&x() * &(&x() + &y())).monic());
    }
}
