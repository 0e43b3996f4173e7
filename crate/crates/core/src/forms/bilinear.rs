use crate::error::{Error, Result};
use crate::fields::{Elem, Field};
use crate::linalg::{self, Matrix};

/// Symmetric bilinear form given by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    field: Field,
    gram: Matrix,
}

/// Result of splitting a symmetric bilinear form into anisotropic lines and
/// alternating planes.
#[derive(Debug, Clone)]
pub struct BilinearDiagonalization {
    pub entries: Vec<Elem>,
    /// Number of alternating hyperbolic planes left over (char 2 only).
    pub alternating_planes: usize,
    /// Columns are the new basis vectors.
    pub transform: Matrix,
}

impl BilinearForm {
    pub fn new(field: &Field, gram: Matrix) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("Gram matrix must be square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotHermitian("bilinear Gram matrix is not symmetric".into()));
                }
            }
        }
        Ok(Self { field: field.clone(), gram })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }
    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn eval(&self, x: &[Elem], y: &[Elem]) -> Elem {
        let f = &self.field;
        linalg::dot(f, x, &linalg::mat_vec(f, &self.gram, y))
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.field.is_zero(&linalg::det(&self.field, &self.gram))
    }

    /// Alternating: b(x,x) = 0 for all x, i.e. zero diagonal and skew.
    pub fn is_alternating(&self) -> bool {
        let f = &self.field;
        (0..self.dim()).all(|i| f.is_zero(&self.gram[i][i]))
            && (0..self.dim()).all(|i| (0..i).all(|j| self.gram[i][j] == f.neg(&self.gram[j][i])))
    }

    pub fn diagonal_entries(&self) -> Option<Vec<Elem>> {
        let f = &self.field;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if i != j && !f.is_zero(&self.gram[i][j]) {
                    return None;
                }
            }
        }
        Some((0..self.dim()).map(|i| self.gram[i][i].clone()).collect())
    }

    pub fn orthogonal_sum(&self, other: &Self) -> Result<Self> {
        self.field.check_same(&other.field)?;
        Ok(Self { field: self.field.clone(), gram: linalg::block_diag(&self.field, &self.gram, &other.gram) })
    }

    pub fn scale(&self, c: &Elem) -> Result<Self> {
        if self.field.is_zero(c) {
            return Err(Error::ZeroScalar);
        }
        Ok(Self { field: self.field.clone(), gram: linalg::scale(&self.field, c, &self.gram) })
    }

    /// Splits off lines ⟨b(x,x)⟩ while some vector has b(x,x) ≠ 0; what
    /// remains is alternating and is reported as hyperbolic planes.
    pub fn diagonalize(&self) -> Result<BilinearDiagonalization> {
        let f = &self.field;
        if !self.is_nondegenerate() {
            return Err(Error::Degenerate);
        }
        let n = self.dim();
        let mut basis: Vec<Vec<Elem>> = linalg::identity(f, n);
        let mut entries = Vec::new();
        let mut chosen: Vec<Vec<Elem>> = Vec::new();
        loop {
            let pick =
                basis.iter().position(|v| !f.is_zero(&self.eval(v, v))).map(|i| basis[i].clone()).or_else(|| {
                    for i in 0..basis.len() {
                        for j in i + 1..basis.len() {
                            let s: Vec<Elem> = basis[i].iter().zip(&basis[j]).map(|(a, b)| f.add(a, b)).collect();
                            if !f.is_zero(&self.eval(&s, &s)) {
                                return Some(s);
                            }
                        }
                    }
                    None
                });
            let Some(v) = pick else { break };
            let a = self.eval(&v, &v);
            let ainv = f.inv(&a)?;
            let mut rest = Vec::new();
            for w in &basis {
                let c = f.mul(&self.eval(&v, w), &ainv);
                let w2: Vec<Elem> = w.iter().zip(&v).map(|(x, y)| f.sub(x, &f.mul(&c, y))).collect();
                rest.push(w2);
            }
            // drop one dependent vector: keep a basis of the complement
            basis = independent_subset(f, rest, basis.len() - 1);
            entries.push(a);
            chosen.push(v);
        }
        let alternating_planes = basis.len() / 2;
        chosen.extend(basis);
        Ok(BilinearDiagonalization { entries, alternating_planes, transform: linalg::transpose(&chosen) })
    }
}

fn independent_subset(f: &Field, vecs: Vec<Vec<Elem>>, want: usize) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = Vec::new();
    for v in vecs {
        let mut trial = out.clone();
        trial.push(v.clone());
        if linalg::rank(f, &trial) == trial.len() {
            out = trial;
        }
        if out.len() == want {
            break;
        }
    }
    out
}

pub fn diagonal_bilinear(field: &Field, entries: &[Elem]) -> Result<BilinearForm> {
    if entries.iter().any(|e| field.is_zero(e)) {
        return Err(Error::ZeroEntry);
    }
    let mut gram = linalg::zeros(field, entries.len(), entries.len());
    for (i, e) in entries.iter().enumerate() {
        gram[i][i] = e.clone();
    }
    Ok(BilinearForm { field: field.clone(), gram })
}

/// ⟨⟨a1,…,am⟩⟩ = ⟨1,a1⟩ ⊗ … ⊗ ⟨1,am⟩, diagonal entries ordered by the
/// binary expansion of the index.
pub fn bilinear_pfister(field: &Field, slots: &[Elem]) -> Result<BilinearForm> {
    if slots.iter().any(|e| field.is_zero(e)) {
        return Err(Error::ZeroSlot);
    }
    let mut entries = vec![field.one()];
    for a in slots {
        let scaled: Vec<Elem> = entries.iter().map(|e| field.mul(e, a)).collect();
        entries.extend(scaled);
    }
    diagonal_bilinear(field, &entries)
}

pub fn tensor_bb(b1: &BilinearForm, b2: &BilinearForm) -> Result<BilinearForm> {
    b1.field.check_same(&b2.field)?;
    Ok(BilinearForm { field: b1.field.clone(), gram: linalg::kron(&b1.field, &b1.gram, &b2.gram) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pfister_over_f5() {
        let f = Field::gf(5).unwrap();
        let b = bilinear_pfister(&f, &[f.from_i64(2), f.from_i64(3)]).unwrap();
        let d: Vec<i64> = vec![1, 2, 3, 1];
        assert_eq!(b.diagonal_entries().unwrap(), d.iter().map(|x| f.from_i64(*x)).collect::<Vec<_>>());
    }

    #[test]
    fn zero_fold_pfister_is_one() {
        let f = Field::rationals();
        assert_eq!(bilinear_pfister(&f, &[]).unwrap().diagonal_entries().unwrap(), vec![f.one()]);
    }

    #[test]
    fn zero_entries_rejected() {
        let f = Field::rationals();
        assert_eq!(diagonal_bilinear(&f, &[f.one(), f.zero()]), Err(Error::ZeroEntry));
        assert_eq!(bilinear_pfister(&f, &[f.zero()]), Err(Error::ZeroSlot));
    }

    #[test]
    fn diag_one_one_over_f2_not_alternating() {
        let f = Field::gf(2).unwrap();
        let b = diagonal_bilinear(&f, &[f.one(), f.one()]).unwrap();
        assert!(!b.is_alternating());
    }

    #[test]
    fn char_two_alternating_part() {
        let f = Field::gf(2).unwrap();
        let (o, z) = (f.one(), f.zero());
        // ⟨1⟩ ⊥ alternating plane
        let gram = vec![
            vec![o.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), o.clone()],
            vec![z.clone(), o.clone(), z.clone()],
        ];
        let b = BilinearForm::new(&f, gram).unwrap();
        let d = b.diagonalize().unwrap();
        // ⟨1⟩ ⊥ H is isometric to ⟨1,1,1⟩ in char 2: everything diagonalizes
        assert_eq!(d.entries.len() + 2 * d.alternating_planes, 3);
        let h = BilinearForm::new(&f, vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]]).unwrap();
        let d = h.diagonalize().unwrap();
        assert_eq!(d.alternating_planes, 1);
        assert!(d.entries.is_empty());
    }
}
