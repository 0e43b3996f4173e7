use num_rational::BigRational;
use serde::Serialize;

use crate::error::Result;
use crate::fields::local::{hasse_invariant, rational_relevant_places};
use crate::fields::oracle::symplectic_blocks;
use crate::fields::{Elem, Field, FieldKind, Place};
use crate::linalg;

use super::QuadraticForm;

/// Classical invariants of a nonsingular quadratic form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub dim: usize,
    /// "disc" (signed discriminant) or "arf".
    pub kind: &'static str,
    /// Printed representative of the class.
    pub value: String,
    /// Whether the class is trivial; `None` if undecided.
    pub trivial: Option<bool>,
    /// Hasse symbols per relevant place of ℚ.
    pub hasse_profile: Vec<(Place, i32)>,
    /// (positive, negative) counts over ℝ, for ℚ.
    pub signature: Option<(usize, usize)>,
}

/// (−1)^{n(n−1)/2} det of the symmetric Gram matrix (char ≠ 2).
pub fn signed_discriminant(q: &QuadraticForm) -> Result<Elem> {
    let f = q.field();
    let n = q.dim();
    let half = f.inv(&f.from_i64(2))?;
    let gram = linalg::scale(f, &half, &q.polar_matrix());
    let d = linalg::det(f, &gram);
    Ok(if (n * n.saturating_sub(1) / 2) % 2 == 1 { f.neg(&d) } else { d })
}

/// Σ q(e_i) q(f_i) over a symplectic basis (char 2), a class in F/℘(F).
pub fn arf(q: &QuadraticForm) -> Result<Elem> {
    let f = q.field();
    let (blocks, _) = symplectic_blocks(q)?;
    Ok(blocks.iter().fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b))))
}

/// Whether the discriminant (char ≠ 2) or Arf invariant (char 2) is trivial.
pub fn disc_or_arf_trivial(q: &QuadraticForm) -> Result<Option<bool>> {
    let f = q.field();
    if f.characteristic() == 2 {
        Ok(f.in_artin_schreier_image(&arf(q)?))
    } else {
        Ok(Some(f.is_square(&signed_discriminant(q)?)))
    }
}

fn square_class_label(f: &Field, d: &Elem) -> String {
    match f.kind() {
        FieldKind::Rationals => {
            let r = f.rat(d).expect("rational");
            crate::fields::rational::square_free_part(&r).map(|s| s.to_string()).unwrap_or_else(|_| "0".into())
        }
        FieldKind::Finite { .. } => {
            if f.is_square(d) {
                "1".into()
            } else {
                "nonsquare".into()
            }
        }
        FieldKind::RationalFunctions { .. } => f.format(d),
    }
}

pub fn invariants(q: &QuadraticForm) -> Result<Invariants> {
    q.require_nonsingular()?;
    let f = q.field();
    if f.characteristic() == 2 {
        let a = arf(q)?;
        let trivial = f.in_artin_schreier_image(&a);
        let value = match (f.kind(), trivial) {
            (FieldKind::Finite { .. }, Some(true)) => "0".into(),
            _ => f.format(&a),
        };
        return Ok(Invariants {
            dim: q.dim(),
            kind: "arf",
            value,
            trivial,
            hasse_profile: Vec::new(),
            signature: None,
        });
    }
    let d = signed_discriminant(q)?;
    let mut hasse_profile = Vec::new();
    let mut signature = None;
    if f.kind() == FieldKind::Rationals {
        let (diag, _) = q.diagonalize()?;
        let diag: Vec<BigRational> = diag.iter().map(|e| f.rat(e).expect("rational")).collect();
        for place in rational_relevant_places(&diag)? {
            let s = hasse_invariant(&diag, &place)?;
            hasse_profile.push((place, s));
        }
        let pos = diag.iter().filter(|a| num_traits::Signed::is_positive(*a)).count();
        signature = Some((pos, diag.len() - pos));
    }
    Ok(Invariants {
        dim: q.dim(),
        kind: "disc",
        value: square_class_label(f, &d),
        trivial: Some(f.is_square(&d)),
        hasse_profile,
        signature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_plane_trivial() {
        for f in [Field::gf(2).unwrap(), Field::gf(5).unwrap(), Field::rationals()] {
            let inv = invariants(&QuadraticForm::hyperbolic(&f, 1)).unwrap();
            assert_eq!(inv.trivial, Some(true), "{}", f.name());
        }
    }

    #[test]
    fn arf_of_norm_form_f2() {
        let f = Field::gf(2).unwrap();
        let o = f.one();
        let q = QuadraticForm::new(&f, vec![vec![o.clone(), o.clone()], vec![f.zero(), o.clone()]]).unwrap();
        assert_eq!(arf(&q).unwrap(), o);
        assert_eq!(invariants(&q).unwrap().trivial, Some(false));
    }

    #[test]
    fn four_squares_over_q() {
        let f = Field::rationals();
        let q = QuadraticForm::diagonal(&f, &[f.one(), f.one(), f.one(), f.one()]).unwrap();
        let inv = invariants(&q).unwrap();
        assert_eq!(inv.value, "1");
        assert_eq!(inv.signature, Some((4, 0)));
        // ∏_{i<j} (1,1)_v = 1 everywhere
        assert!(inv.hasse_profile.iter().all(|(_, s)| *s == 1));
    }
}
