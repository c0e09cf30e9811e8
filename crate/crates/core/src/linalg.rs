//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::jetcore::Rat;

/// Row-major dense matrix.
pub type Matrix = Vec<Vec<Rat>>;

pub fn zero_vec(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Rat> {
    let mut v = zero_vec(n);
    v[i] = Rat::one();
    v
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| unit_vec(n, i)).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(Rat::zero(), |acc, k| acc + &row[k] * &b[k][j])
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Reduced row echelon form of the row space; zero rows dropped. Returns rows and pivot columns.
pub fn rref(rows: &[Vec<Rat>]) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    rref(rows).0.len()
}

/// Coordinates of `v` in the basis given by RREF rows, or `None` if `v` is outside the span.
pub fn coordinates(basis: &Matrix, pivots: &[usize], v: &[Rat]) -> Option<Vec<Rat>> {
    let coords: Vec<Rat> = pivots.iter().map(|&p| v[p].clone()).collect();
    let mut rest = v.to_vec();
    for (row, c) in basis.iter().zip(&coords) {
        for (r, b) in rest.iter_mut().zip(row) {
            *r -= c * b;
        }
    }
    is_zero_vec(&rest).then_some(coords)
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(unit_vec(n, i));
            r
        })
        .collect();
    let (red, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn is_scalar(a: &Matrix) -> bool {
    let Some(d) = a.first().and_then(|r| r.first()) else {
        return true;
    };
    a.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, v)| if i == j { v == d } else { v.is_zero() })
    })
}

/// Coefficients `a_0, ..., a_{n-1}` of the monic `det(zI - A)` (Faddeev-LeVerrier).
pub fn charpoly(a: &Matrix) -> Vec<Rat> {
    let n = a.len();
    let mut coeffs = zero_vec(n);
    let mut m = zero_vec_matrix(n);
    let mut c_prev = Rat::one();
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c_prev;
        }
        m = next;
        let am = mat_mul(a, &m);
        let tr = (0..n).fold(Rat::zero(), |acc, i| acc + &am[i][i]);
        let c = -tr / Rat::from_integer((k as i64).into());
        coeffs[n - k] = c.clone();
        c_prev = c;
    }
    coeffs
}

fn zero_vec_matrix(n: usize) -> Matrix {
    vec![zero_vec(n); n]
}

/// Determinant by cofactor expansion; exponential, for cross-checks on small matrices.
pub fn det_laplace(a: &Matrix) -> Rat {
    let n = a.len();
    if n == 0 {
        return Rat::one();
    }
    let mut acc = Rat::zero();
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let minor: Matrix = a[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let t = &a[0][j] * det_laplace(&minor);
        if j % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetcore::int;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn rref_and_coordinates() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let (r, p) = rref(&a);
        assert_eq!(p, vec![0, 1]);
        assert_eq!(coordinates(&r, &p, &[int(1), int(3), int(4)]), Some(vec![int(1), int(3)]));
        assert_eq!(coordinates(&r, &p, &[int(0), int(0), int(1)]), None);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1], &[7, 4]]);
        assert_eq!(mat_mul(&a, &inverse(&a).unwrap()), identity(2));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn charpoly_jordan_block() {
        let a = m(&[&[2, 0, 0], &[1, 2, 0], &[0, 0, 5]]);
        assert_eq!(charpoly(&a), vec![int(-20), int(24), int(-9)]);
        assert_eq!(det_laplace(&a), int(20));
    }

    #[test]
    fn scalar_detection() {
        assert!(is_scalar(&m(&[&[3, 0], &[0, 3]])));
        assert!(!is_scalar(&m(&[&[3, 0], &[1, 3]])));
    }
}
