//! Dense matrices over a [`Field`], row-major `Vec<Vec<Elem>>`.

use crate::error::{Error, Result};
use crate::fields::{Elem, Field};

pub type Matrix = Vec<Vec<Elem>>;

pub fn zeros(f: &Field, rows: usize, cols: usize) -> Matrix {
    vec![vec![f.zero(); cols]; rows]
}

pub fn identity(f: &Field, n: usize) -> Matrix {
    let mut m = zeros(f, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = f.one();
    }
    m
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mul(f: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b.iter()).fold(f.zero(), |acc, (x, brow)| f.add(&acc, &f.mul(x, &brow[j]))))
                .collect()
        })
        .collect()
}

pub fn mat_vec(f: &Field, a: &Matrix, v: &[Elem]) -> Vec<Elem> {
    a.iter().map(|row| dot(f, row, v)).collect()
}

pub fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
}

pub fn add(f: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| f.add(x, y)).collect()).collect()
}

pub fn scale(f: &Field, c: &Elem, a: &Matrix) -> Matrix {
    a.iter().map(|r| r.iter().map(|x| f.mul(c, x)).collect()).collect()
}

pub fn kron(f: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m) = (a.len(), b.len());
    let mut out = zeros(f, n * m, n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = f.mul(&a[i][j], &b[k][l]);
                }
            }
        }
    }
    out
}

/// Block-diagonal sum of two square matrices.
pub fn block_diag(f: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m) = (a.len(), b.len());
    let mut out = zeros(f, n + m, n + m);
    for i in 0..n {
        out[i][..n].clone_from_slice(&a[i]);
    }
    for i in 0..m {
        out[n + i][n..].clone_from_slice(&b[i]);
    }
    out
}

/// Row echelon reduction in place; returns pivot columns.
fn reduce(f: &Field, m: &mut Matrix) -> Vec<usize> {
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
        let inv = f.inv(&m[r][c]).expect("pivot nonzero");
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !f.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let t = f.mul(&factor, &m[r][j]);
                    m[i][j] = f.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(f: &Field, m: &Matrix) -> usize {
    let mut m = m.clone();
    reduce(f, &mut m).len()
}

pub fn det(f: &Field, m: &Matrix) -> Elem {
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
        let piv = a[c][c].clone();
        d = f.mul(&d, &piv);
        let inv = f.inv(&piv).expect("pivot nonzero");
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
    d
}

pub fn inverse(f: &Field, m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m.iter().zip(identity(f, n)).map(|(r, e)| r.iter().cloned().chain(e).collect()).collect();
    let pivots = reduce(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::DivisionByZero);
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of the right null space {v : m·v = 0}.
pub fn kernel(f: &Field, m: &Matrix, cols: usize) -> Vec<Vec<Elem>> {
    let mut a = m.clone();
    let pivots = reduce(f, &mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&a[r][fc]);
            }
            v
        })
        .collect()
}

/// One solution of m·x = b, if any.
pub fn solve(f: &Field, m: &Matrix, b: &[Elem]) -> Option<Vec<Elem>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut aug: Matrix =
        m.iter().zip(b).map(|(r, x)| r.iter().cloned().chain(std::iter::once(x.clone())).collect()).collect();
    let pivots = reduce(f, &mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![f.zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    Some(x)
}

pub fn is_zero_vec(f: &Field, v: &[Elem]) -> bool {
    v.iter().all(|x| f.is_zero(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det_over_q() {
        let f = Field::rationals();
        let m: Matrix = vec![vec![f.from_i64(2), f.from_i64(1)], vec![f.from_i64(5), f.from_i64(3)]];
        assert_eq!(det(&f, &m), f.one());
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(mul(&f, &m, &inv), identity(&f, 2));
    }

    #[test]
    fn kernel_over_f3() {
        let f = Field::gf(3).unwrap();
        let m: Matrix = vec![vec![f.one(), f.one(), f.one()]];
        let k = kernel(&f, &m, 3);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(f.is_zero(&dot(&f, &m[0], &v)));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = Field::rationals();
        let m: Matrix = vec![vec![f.one(), f.one()], vec![f.one(), f.one()]];
        assert!(solve(&f, &m, &[f.one(), f.from_i64(2)]).is_none());
        let x = solve(&f, &m, &[f.one(), f.one()]).unwrap();
        assert_eq!(mat_vec(&f, &m, &x), vec![f.one(), f.one()]);
    }
}
