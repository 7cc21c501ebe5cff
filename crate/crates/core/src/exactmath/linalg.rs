//! Dense exact linear algebra over an arbitrary field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::PolyOverQ;
use super::rational::ExactRational;

/// Field operations for linear algebra, with element type `E`.
pub trait Field {
    type E: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Option<Self::E>;
    fn is_zero(&self, a: &Self::E) -> bool;
}

/// The field Q.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type E = ExactRational;
    fn zero(&self) -> ExactRational {
        BigRational::zero()
    }
    fn one(&self) -> ExactRational {
        BigRational::one()
    }
    fn add(&self, a: &ExactRational, b: &ExactRational) -> ExactRational {
        a + b
    }
    fn sub(&self, a: &ExactRational, b: &ExactRational) -> ExactRational {
        a - b
    }
    fn mul(&self, a: &ExactRational, b: &ExactRational) -> ExactRational {
        a * b
    }
    fn inv(&self, a: &ExactRational) -> Option<ExactRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &ExactRational) -> bool {
        a.is_zero()
    }
}

pub type Matrix<E> = Vec<Vec<E>>;

/// Reduce `m` in place to reduced row echelon form; returns pivot columns.
pub fn rref<F: Field>(f: &F, m: &mut Matrix<F::E>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv(&m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..rows {
            if i == r || f.is_zero(&m[i][c]) {
                continue;
            }
            let factor = m[i][c].clone();
            for j in 0..cols {
                let t = f.mul(&factor, &m[r][j]);
                m[i][j] = f.sub(&m[i][j], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel `{v : m v = 0}`.
pub fn nullspace<F: Field>(f: &F, m: &Matrix<F::E>) -> Vec<Vec<F::E>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.clone();
    let pivots = rref(f, &mut a);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.sub(&f.zero(), &a[row][free]);
        }
        basis.push(v);
    }
    basis
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::E>) -> usize {
    let mut a = m.clone();
    rref(f, &mut a).len()
}

pub fn det<F: Field>(f: &F, m: &Matrix<F::E>) -> F::E {
    let n = m.len();
    let mut a = m.clone();
    let mut acc = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !f.is_zero(&a[i][c])) else {
            return f.zero();
        };
        if p != c {
            a.swap(p, c);
            acc = f.sub(&f.zero(), &acc);
        }
        acc = f.mul(&acc, &a[c][c]);
        let inv = f.inv(&a[c][c]).unwrap();
        for i in c + 1..n {
            if f.is_zero(&a[i][c]) {
                continue;
            }
            let factor = f.mul(&a[i][c], &inv);
            for j in c..n {
                let t = f.mul(&factor, &a[c][j]);
                a[i][j] = f.sub(&a[i][j], &t);
            }
        }
    }
    acc
}

/// Solve `m x = b` for square invertible `m`.
pub fn solve<F: Field>(f: &F, m: &Matrix<F::E>, b: &[F::E]) -> Option<Vec<F::E>> {
    let n = m.len();
    let mut aug: Matrix<F::E> = m
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n].clone()).collect())
}

pub fn mat_mul<F: Field>(f: &F, a: &Matrix<F::E>, b: &Matrix<F::E>) -> Matrix<F::E> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(&row[k], &b[k][j]))))
                .collect()
        })
        .collect()
}

/// Characteristic polynomial `det(x I - m)` of a rational square matrix, via
/// reduction to Hessenberg form.
pub fn charpoly(m: &Matrix<ExactRational>) -> PolyOverQ {
    let n = m.len();
    let f = Rationals;
    let mut h = m.clone();
    // similarity transform to upper Hessenberg form
    for c in 0..n.saturating_sub(2) {
        let Some(p) = (c + 1..n).find(|&i| !h[i][c].is_zero()) else {
            continue;
        };
        if p != c + 1 {
            h.swap(p, c + 1);
            for row in h.iter_mut() {
                row.swap(p, c + 1);
            }
        }
        let inv = h[c + 1][c].recip();
        for i in c + 2..n {
            if h[i][c].is_zero() {
                continue;
            }
            let u = &h[i][c] * &inv;
            for j in 0..n {
                let t = &u * &h[c + 1][j];
                h[i][j] = f.sub(&h[i][j], &t);
            }
            for row in h.iter_mut() {
                let t = &u * &row[i];
                row[c + 1] = &row[c + 1] + &t;
            }
        }
    }
    // recurrence on leading principal minors
    let x = PolyOverQ::x();
    let mut polys = vec![PolyOverQ::one()];
    for k in 0..n {
        let diag = &x - &PolyOverQ::constant(h[k][k].clone());
        let mut pk = &diag * &polys[k];
        let mut prod = BigRational::one();
        for i in (0..k).rev() {
            prod = &prod * &h[i + 1][i];
            if prod.is_zero() {
                break;
            }
            let term = polys[i].scale(&(&prod * &h[i][k]));
            pk = &pk - &term;
        }
        polys.push(pk);
    }
    polys.pop().unwrap()
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::E> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { f.one() } else { f.zero() })
                .collect()
        })
        .collect()
}

pub fn int_matrix(rows: &[&[i64]]) -> Matrix<ExactRational> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn small_charpolys() {
        let m = int_matrix(&[&[2, 1], &[1, 2]]);
        assert_eq!(charpoly(&m), PolyOverQ::from_ints([3, -4, 1]));
        let m = int_matrix(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(charpoly(&m), PolyOverQ::from_ints([-1, 0, 0, 1]));
    }

    #[test]
    fn kernel_and_solve() {
        let m = int_matrix(&[&[1, 2, 3], &[2, 4, 6]]);
        let ker = nullspace(&Rationals, &m);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for row in &m {
                let s: ExactRational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(s.is_zero());
            }
        }
        let a = int_matrix(&[&[2, 1], &[1, 3]]);
        let x = solve(&Rationals, &a, &[rat(3, 1), rat(5, 1)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
    }

    proptest! {
        #[test]
        fn charpoly_matches_determinant(entries in prop::collection::vec(-9i64..9, 16), t in -5i64..5) {
            let m: Matrix<ExactRational> = entries.chunks(4).map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect();
            let shifted: Matrix<ExactRational> = m.iter().enumerate()
                .map(|(i, r)| r.iter().enumerate().map(|(j, x)| if i == j { rat(t, 1) - x } else { -x.clone() }).collect())
                .collect();
            prop_assert_eq!(charpoly(&m).eval(&rat(t, 1)), det(&Rationals, &shifted));
        }
    }
}
