use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::fields::local::{function_global_index, rational_global_index, GlobalIndex};
use crate::fields::oracle::as_ratfuncs;
use crate::fields::{isotropy_oracle, AnisotropyCertificate, Elem, FieldKind, IsotropyOutcome};
use crate::linalg::{self, Matrix};

use super::QuadraticForm;

/// q ≅ (witt_index · H) ⊥ anisotropic_kernel, with H the plane xy.
#[derive(Debug, Clone)]
pub struct WittDecomposition {
    pub witt_index: usize,
    pub anisotropic_kernel: QuadraticForm,
    pub kernel_certificate: AnisotropyCertificate,
    /// Columns: x_1, y_1, …, x_k, y_k, then a basis of the kernel.
    pub transform: Matrix,
}

impl WittDecomposition {
    /// Re-derives the decomposition from the transform: q(T·) must equal
    /// the hyperbolic part ⊥ kernel coefficient-for-coefficient.
    pub fn verify(&self, q: &QuadraticForm) -> bool {
        let f = q.field();
        let expected =
            QuadraticForm::hyperbolic(f, self.witt_index).orthogonal_sum(&self.anisotropic_kernel).expect("same field");
        !f.is_zero(&linalg::det(f, &self.transform)) && q.transform(&self.transform) == expected
    }
}

fn pick_independent(f: &crate::fields::Field, vecs: Vec<Vec<Elem>>, want: usize) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = Vec::with_capacity(want);
    for v in vecs {
        if out.len() == want {
            break;
        }
        out.push(v);
        if linalg::rank(f, &out) < out.len() {
            out.pop();
        }
    }
    out
}

/// Splits off hyperbolic planes one witness at a time.
pub fn witt_decompose(q: &QuadraticForm) -> Result<WittDecomposition> {
    q.require_nonsingular()?;
    let f = q.field();
    let mut basis: Vec<Vec<Elem>> = linalg::identity(f, q.dim());
    let mut cols: Vec<Vec<Elem>> = Vec::new();
    let mut index = 0;
    loop {
        let sub = q.restrict(&basis);
        let outcome = isotropy_oracle(&sub)?;
        let w = match outcome {
            IsotropyOutcome::Witness(w) => w,
            IsotropyOutcome::Anisotropic(cert) => {
                cols.extend(basis);
                return Ok(WittDecomposition {
                    witt_index: index,
                    anisotropic_kernel: sub,
                    kernel_certificate: cert,
                    transform: linalg::transpose(&cols),
                });
            }
            IsotropyOutcome::Undecided => {
                return Err(Error::OracleUndecided {
                    stage: format!("witt decomposition of a {}-dimensional subform", sub.dim()),
                    partial_index: index,
                })
            }
        };
        let x = lin_comb(f, &basis, &w);
        let Some(v) = basis.iter().find(|v| !f.is_zero(&q.polar(&x, v))) else {
            return Err(Error::SingularForm);
        };
        let c = f.inv(&q.polar(&x, v))?;
        let y: Vec<Elem> = v.iter().map(|e| f.mul(e, &c)).collect();
        let qy = q.eval(&y);
        let y: Vec<Elem> = y.iter().zip(&x).map(|(a, b)| f.sub(a, &f.mul(&qy, b))).collect();
        let projected: Vec<Vec<Elem>> = basis
            .iter()
            .map(|v| {
                let by = q.polar(v, &y);
                let bx = q.polar(v, &x);
                v.iter()
                    .zip(&x)
                    .zip(&y)
                    .map(|((vi, xi), yi)| f.sub(&f.sub(vi, &f.mul(&by, xi)), &f.mul(&bx, yi)))
                    .collect()
            })
            .collect();
        let want = basis.len() - 2;
        basis = pick_independent(f, projected, want);
        cols.push(x);
        cols.push(y);
        index += 1;
    }
}

fn lin_comb(f: &crate::fields::Field, basis: &[Vec<Elem>], w: &[Elem]) -> Vec<Elem> {
    let n = basis.first().map_or(0, |b| b.len());
    let mut x = vec![f.zero(); n];
    for (b, c) in basis.iter().zip(w) {
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi = f.add(xi, &f.mul(c, bi));
        }
    }
    x
}

/// Local-global Witt index data for ℚ and F_p(t) with p odd.
pub fn global_index(q: &QuadraticForm) -> Result<Option<GlobalIndex>> {
    q.require_nonsingular()?;
    let f = q.field();
    match f.kind() {
        FieldKind::Rationals => {
            let (d, _) = q.diagonalize()?;
            let d: Vec<BigRational> = d.iter().map(|e| f.rat(e).expect("rational")).collect();
            Ok(Some(rational_global_index(&d)?))
        }
        FieldKind::RationalFunctions { p } if p != 2 => {
            let (d, _) = q.diagonalize()?;
            Ok(Some(function_global_index(&as_ratfuncs(&d), p)?))
        }
        _ => Ok(None),
    }
}

pub fn witt_index(q: &QuadraticForm) -> Result<usize> {
    match global_index(q)? {
        Some(g) => Ok(g.witt_index),
        None => Ok(witt_decompose(q)?.witt_index),
    }
}

pub fn is_hyperbolic(q: &QuadraticForm) -> Result<bool> {
    if q.dim() % 2 == 1 {
        q.require_nonsingular()?;
        return Ok(false);
    }
    Ok(2 * witt_index(q)? == q.dim())
}

/// q1 ≅ q2 iff dimensions agree and q1 ⊥ (−q2) is hyperbolic.
pub fn isometric(q1: &QuadraticForm, q2: &QuadraticForm) -> Result<bool> {
    q1.field().check_same(q2.field())?;
    q1.require_nonsingular()?;
    q2.require_nonsingular()?;
    if q1.dim() != q2.dim() {
        return Ok(false);
    }
    if q1 == q2 {
        return Ok(true);
    }
    is_hyperbolic(&q1.orthogonal_sum(&q2.neg())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Field;

    fn diag(f: &Field, v: &[i64]) -> QuadraticForm {
        QuadraticForm::diagonal(f, &v.iter().map(|x| f.from_i64(*x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn hyperbolic_plane_over_q() {
        let f = Field::rationals();
        let d = witt_decompose(&diag(&f, &[1, -1])).unwrap();
        assert_eq!(d.witt_index, 1);
        assert_eq!(d.anisotropic_kernel.dim(), 0);
        assert!(d.verify(&diag(&f, &[1, -1])));
    }

    #[test]
    fn decompositions_verify() {
        for f in [Field::gf(3).unwrap(), Field::gf(4).unwrap(), Field::gf(5).unwrap(), Field::rationals()] {
            let q = if f.characteristic() == 2 { QuadraticForm::hyperbolic(&f, 2) } else { diag(&f, &[1, 2, 1, 1, 2]) };
            let d = witt_decompose(&q).unwrap();
            assert!(d.verify(&q), "{}", f.name());
        }
    }

    #[test]
    fn isometry_over_f3() {
        let f = Field::gf(3).unwrap();
        assert!(!isometric(&diag(&f, &[1, 1]), &diag(&f, &[1, 2])).unwrap());
        assert!(isometric(&diag(&f, &[1, 1]), &diag(&f, &[2, 2])).unwrap());
    }

    #[test]
    fn rational_index_agrees_with_decomposition() {
        let f = Field::rationals();
        for v in [vec![1, -1, 2, -2, 3], vec![1, 1, 1, -7], vec![1, 2, -3, -6], vec![1, 1, 1, 1, -1, -1]] {
            let q = diag(&f, &v);
            assert_eq!(witt_index(&q).unwrap(), witt_decompose(&q).unwrap().witt_index, "{v:?}");
        }
    }
}
