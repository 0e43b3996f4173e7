use crate::error::{Error, Result};
use crate::fields::{Elem, Field};
use crate::linalg::{self, Matrix};

use super::bilinear::BilinearForm;

/// Quadratic form q(x) = xᵀ M x with M upper triangular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    field: Field,
    coeffs: Matrix,
}

/// Folds an arbitrary square matrix S into the upper-triangular matrix
/// describing the same quadratic form xᵀSx.
pub(crate) fn fold_upper(f: &Field, s: &Matrix) -> Matrix {
    let n = s.len();
    let mut m = linalg::zeros(f, n, n);
    for i in 0..n {
        m[i][i] = s[i][i].clone();
        for j in i + 1..n {
            m[i][j] = f.add(&s[i][j], &s[j][i]);
        }
    }
    m
}

impl QuadraticForm {
    /// Builds a form from any square matrix; the lower triangle is folded
    /// into the upper one.
    pub fn new(field: &Field, coeffs: Matrix) -> Result<Self> {
        let n = coeffs.len();
        if coeffs.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("coefficient matrix must be square".into()));
        }
        Ok(Self { field: field.clone(), coeffs: fold_upper(field, &coeffs) })
    }

    pub fn zero_dim(field: &Field) -> Self {
        Self { field: field.clone(), coeffs: Vec::new() }
    }

    /// ⟨a1,…,an⟩ as the quadratic form Σ ai xi².
    pub fn diagonal(field: &Field, entries: &[Elem]) -> Result<Self> {
        if entries.iter().any(|e| field.is_zero(e)) {
            return Err(Error::ZeroEntry);
        }
        let mut m = linalg::zeros(field, entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[i][i] = e.clone();
        }
        Ok(Self { field: field.clone(), coeffs: m })
    }

    /// Orthogonal sum of `planes` copies of the hyperbolic plane xy.
    pub fn hyperbolic(field: &Field, planes: usize) -> Self {
        let mut m = linalg::zeros(field, 2 * planes, 2 * planes);
        for i in 0..planes {
            m[2 * i][2 * i + 1] = field.one();
        }
        Self { field: field.clone(), coeffs: m }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn coeffs(&self) -> &Matrix {
        &self.coeffs
    }
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, x: &[Elem]) -> Elem {
        let f = &self.field;
        linalg::dot(f, x, &linalg::mat_vec(f, &self.coeffs, x))
    }

    /// Matrix of the polar form b_q, namely M + Mᵀ.
    pub fn polar_matrix(&self) -> Matrix {
        let f = &self.field;
        linalg::add(f, &self.coeffs, &linalg::transpose(&self.coeffs))
    }

    pub fn polar(&self, x: &[Elem], y: &[Elem]) -> Elem {
        let f = &self.field;
        f.add(
            &linalg::dot(f, x, &linalg::mat_vec(f, &self.coeffs, y)),
            &linalg::dot(f, y, &linalg::mat_vec(f, &self.coeffs, x)),
        )
    }

    pub fn polar_form(&self) -> BilinearForm {
        BilinearForm::new(&self.field, self.polar_matrix()).expect("polar matrix is symmetric")
    }

    pub fn is_nonsingular(&self) -> bool {
        !self.field.is_zero(&linalg::det(&self.field, &self.polar_matrix()))
    }

    pub fn require_nonsingular(&self) -> Result<()> {
        if self.is_nonsingular() {
            Ok(())
        } else {
            Err(Error::SingularForm)
        }
    }

    /// q'(y) = q(T y); the columns of `t` are the new basis vectors.
    pub fn transform(&self, t: &Matrix) -> Self {
        let f = &self.field;
        let s = linalg::mul(f, &linalg::transpose(t), &linalg::mul(f, &self.coeffs, t));
        Self { field: f.clone(), coeffs: fold_upper(f, &s) }
    }

    /// Restriction to the span of `basis`.
    pub fn restrict(&self, basis: &[Vec<Elem>]) -> Self {
        if basis.is_empty() {
            return Self::zero_dim(&self.field);
        }
        self.transform(&linalg::transpose(&basis.to_vec()))
    }

    pub fn orthogonal_sum(&self, other: &Self) -> Result<Self> {
        self.field.check_same(&other.field)?;
        Ok(Self { field: self.field.clone(), coeffs: linalg::block_diag(&self.field, &self.coeffs, &other.coeffs) })
    }

    pub fn scale(&self, c: &Elem) -> Result<Self> {
        if self.field.is_zero(c) {
            return Err(Error::ZeroScalar);
        }
        Ok(Self { field: self.field.clone(), coeffs: linalg::scale(&self.field, c, &self.coeffs) })
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field.from_i64(-1)).expect("−1 is nonzero")
    }

    pub fn diagonal_entries(&self) -> Option<Vec<Elem>> {
        let f = &self.field;
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                if !f.is_zero(&self.coeffs[i][j]) {
                    return None;
                }
            }
        }
        Some((0..self.dim()).map(|i| self.coeffs[i][i].clone()).collect())
    }

    /// Orthogonal diagonalization in characteristic ≠ 2: returns entries
    /// a_i and T with q(T y) = Σ a_i y_i². Radical directions give a_i = 0.
    pub fn diagonalize(&self) -> Result<(Vec<Elem>, Matrix)> {
        let f = &self.field;
        if f.characteristic() == 2 {
            return Err(Error::UnsupportedField("quadratic forms are not diagonalizable in characteristic 2".into()));
        }
        // congruence elimination on the Gram matrix of b = b_q / 2
        let half = f.inv(&f.from_i64(2))?;
        let n = self.dim();
        let mut g = linalg::scale(f, &half, &self.polar_matrix());
        let mut t = linalg::identity(f, n);
        let mut entries = Vec::with_capacity(n);
        for k in 0..n {
            if f.is_zero(&g[k][k]) {
                if let Some(j) = (k + 1..n).find(|&j| !f.is_zero(&g[j][j])) {
                    g.swap(k, j);
                    for row in g.iter_mut() {
                        row.swap(k, j);
                    }
                    for row in t.iter_mut() {
                        row.swap(k, j);
                    }
                } else if let Some(j) = (k + 1..n).find(|&j| !f.is_zero(&g[k][j])) {
                    // e_k + e_j has value 2 b(e_k, e_j) ≠ 0
                    for i in 0..n {
                        let v = f.add(&g[k][i], &g[j][i]);
                        g[k][i] = v;
                    }
                    for i in 0..n {
                        let v = f.add(&g[i][k], &g[i][j]);
                        g[i][k] = v;
                    }
                    for row in t.iter_mut() {
                        let v = f.add(&row[k], &row[j]);
                        row[k] = v;
                    }
                } else {
                    entries.push(f.zero());
                    continue;
                }
            }
            let pivot = g[k][k].clone();
            let pinv = f.inv(&pivot)?;
            for i in k + 1..n {
                if f.is_zero(&g[k][i]) {
                    continue;
                }
                let c = f.mul(&g[k][i], &pinv);
                for m in 0..n {
                    let v = f.sub(&g[i][m], &f.mul(&c, &g[k][m]));
                    g[i][m] = v;
                }
                for m in 0..n {
                    let v = f.sub(&g[m][i], &f.mul(&c, &g[m][k]));
                    g[m][i] = v;
                }
                for row in t.iter_mut() {
                    let v = f.sub(&row[i], &f.mul(&c, &row[k]));
                    row[i] = v;
                }
            }
            entries.push(pivot);
        }
        Ok((entries, t))
    }
}

/// φ ⊗ ρ: the quadratic form with polar b_φ ⊗ b_ρ and (v⊗w) ↦ φ(v,v)ρ(w).
pub fn tensor(b: &BilinearForm, q: &QuadraticForm) -> Result<QuadraticForm> {
    let f = q.field();
    b.field().check_same(f)?;
    let (n, m) = (b.dim(), q.dim());
    let g = b.gram();
    let p = q.polar_matrix();
    let mut out = linalg::zeros(f, n * m, n * m);
    for i in 0..n {
        for k in 0..m {
            for l in k..m {
                out[i * m + k][i * m + l] = f.mul(&g[i][i], &q.coeffs()[k][l]);
            }
        }
        for j in i + 1..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = f.mul(&g[i][j], &p[k][l]);
                }
            }
        }
    }
    Ok(QuadraticForm { field: f.clone(), coeffs: out })
}

#[cfg(test)]
mod tests {
    use super::super::bilinear::diagonal_bilinear;
    use super::*;

    #[test]
    fn polar_identity_small() {
        let f = Field::gf(3).unwrap();
        let q =
            QuadraticForm::new(&f, vec![vec![f.from_i64(1), f.from_i64(2)], vec![f.zero(), f.from_i64(2)]]).unwrap();
        let els = f.elements().unwrap();
        for a in &els {
            for b in &els {
                for c in &els {
                    for d in &els {
                        let x = [a.clone(), b.clone()];
                        let y = [c.clone(), d.clone()];
                        let s = [f.add(a, c), f.add(b, d)];
                        let lhs = q.polar(&x, &y);
                        let rhs = f.sub(&f.sub(&q.eval(&s), &q.eval(&x)), &q.eval(&y));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn one_tensor_q_is_q() {
        let f = Field::rationals();
        let q =
            QuadraticForm::new(&f, vec![vec![f.from_i64(3), f.from_i64(1)], vec![f.zero(), f.from_i64(-2)]]).unwrap();
        let one = diagonal_bilinear(&f, &[f.one()]).unwrap();
        assert_eq!(tensor(&one, &q).unwrap(), q);
    }

    #[test]
    fn diagonalize_over_q() {
        let f = Field::rationals();
        let q = QuadraticForm::hyperbolic(&f, 2);
        let (d, t) = q.diagonalize().unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(q.transform(&t), QuadraticForm::diagonal(&f, &d).unwrap());
    }

    #[test]
    fn singular_forms_detected() {
        let f = Field::gf(2).unwrap();
        let q = QuadraticForm::diagonal(&f, &[f.one()]).unwrap();
        assert!(!q.is_nonsingular());
        assert!(QuadraticForm::hyperbolic(&f, 1).is_nonsingular());
    }
}
