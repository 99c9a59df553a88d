//! Dense linear algebra over a field. Elimination always pivots on the
//! leftmost column with the topmost nonzero entry, so results are
//! reproducible bit-for-bit.

use super::field::Field;
use crate::error::{Error, Result};

pub type Matrix<E> = Vec<Vec<E>>;

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect()
}

pub fn transpose<E: Clone>(m: &Matrix<E>) -> Matrix<E> {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(f.zero(), |acc, (x, brow)| f.add(&acc, &f.mul(x, &brow[j])))
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: Field>(f: &F, a: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().map(|row| dot(f, row, v)).collect()
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter()
        .zip(b)
        .fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref<F: Field>(f: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = vec![];
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
            if i != r && !f.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let v = f.mul(&factor, &m[r][j]);
                    m[i][j] = f.sub(&m[i][j], &v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut a = m.clone();
    rref(f, &mut a).len()
}

/// Basis of the right kernel {v : m v = 0}, one vector per free column in
/// increasing order, with a 1 in that column.
pub fn nullspace<F: Field>(f: &F, m: &Matrix<F::Elem>, cols: usize) -> Vec<Vec<F::Elem>> {
    let mut a = m.clone();
    let pivots = rref(f, &mut a);
    let mut basis = vec![];
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(&a[r][free]);
        }
        basis.push(v);
    }
    basis
}

pub fn det<F: Field>(f: &F, m: &Matrix<F::Elem>) -> F::Elem {
    let n = m.len();
    let mut a = m.clone();
    let mut d = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !f.is_zero(&a[i][c])) else {
            return f.zero();
        };
        if p != c {
            a.swap(p, c);
            d = f.neg(&d);
        }
        d = f.mul(&d, &a[c][c]);
        let inv = f.inv(&a[c][c]).expect("nonzero pivot");
        for i in c + 1..n {
            if f.is_zero(&a[i][c]) {
                continue;
            }
            let factor = f.mul(&a[i][c], &inv);
            for j in c..n {
                let v = f.mul(&factor, &a[c][j]);
                a[i][j] = f.sub(&a[i][j], &v);
            }
        }
    }
    d
}

/// Determinant by cofactor expansion along the first row (small matrices,
/// and an independent check of `det`).
pub fn det_cofactor<F: Field>(f: &F, m: &Matrix<F::Elem>) -> F::Elem {
    let n = m.len();
    if n == 0 {
        return f.one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = f.zero();
    for j in 0..n {
        if f.is_zero(&m[0][j]) {
            continue;
        }
        let minor: Matrix<F::Elem> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = f.mul(&m[0][j], &det_cofactor(f, &minor));
        acc = if j % 2 == 0 { f.add(&acc, &term) } else { f.sub(&acc, &term) };
    }
    acc
}

pub fn inverse<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    let n = m.len();
    let mut a: Matrix<F::Elem> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
            row
        })
        .collect();
    let piv = rref(f, &mut a);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return Err(Error::InvalidInput("singular matrix".into()));
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// One solution of m x = b, if any.
pub fn solve<F: Field>(f: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Matrix<F::Elem> = m
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let piv = rref(f, &mut a);
    if piv.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![f.zero(); cols];
    for (r, &pc) in piv.iter().enumerate() {
        x[pc] = a[r][cols].clone();
    }
    Some(x)
}

/// Adjugate of a 2x2 matrix.
pub fn adjugate2<F: Field>(f: &F, m: &[[F::Elem; 2]; 2]) -> [[F::Elem; 2]; 2] {
    [
        [m[1][1].clone(), f.neg(&m[0][1])],
        [f.neg(&m[1][0]), m[0][0].clone()],
    ]
}
