//! Hilbert symbols over the completions of ℚ.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::rational::{legendre, unit_residue, valuation};
use super::{Elem, Field, FieldKind, Place};
use crate::error::{Error, Result};

/// (a, b)_v ∈ {+1, −1}: +1 iff z² = a x² + b y² has a nontrivial solution
/// over the completion of ℚ at `v`.
pub fn hilbert_symbol(field: &Field, a: &Elem, b: &Elem, v: &Place) -> Result<i32> {
    if field.kind() != FieldKind::Rationals {
        return Err(Error::UnsupportedField(format!("Hilbert symbols are implemented over QQ, not {}", field.name())));
    }
    let (Elem::Rat(a), Elem::Rat(b)) = (a, b) else {
        return Err(Error::FieldMismatch);
    };
    hilbert_rat(a, b, v)
}

pub fn hilbert_rat(a: &BigRational, b: &BigRational, v: &Place) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    match v {
        Place::Real => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Prime(2) => {
            let (alpha, beta) = (valuation(a, 2), valuation(b, 2));
            let u = unit_residue(a, 2, 3);
            let w = unit_residue(b, 2, 3);
            let eps = |x: u64| ((x - 1) / 2) % 2;
            let omega = |x: u64| ((x * x - 1) / 8) % 2;
            let e = eps(u) * eps(w) + (alpha.rem_euclid(2) as u64) * omega(w) + (beta.rem_euclid(2) as u64) * omega(u);
            Ok(if e % 2 == 0 { 1 } else { -1 })
        }
        Place::Prime(p) => {
            let p = *p;
            let (alpha, beta) = (valuation(a, p), valuation(b, p));
            let u = unit_residue(a, p, 1);
            let w = unit_residue(b, p, 1);
            let mut s = 1i32;
            if (alpha * beta).rem_euclid(2) == 1 && ((p - 1) / 2) % 2 == 1 {
                s = -s;
            }
            if beta.rem_euclid(2) == 1 {
                s *= legendre(u, p);
            }
            if alpha.rem_euclid(2) == 1 {
                s *= legendre(w, p);
            }
            Ok(s)
        }
        _ => Err(Error::UnsupportedField(format!("{v} is not a place of QQ"))),
    }
}

#[cfg(test)]
mod tests {
    use super::super::rational::rat;
    use super::*;

    #[test]
    fn minus_one_minus_one() {
        assert_eq!(hilbert_rat(&rat(-1, 1), &rat(-1, 1), &Place::Real).unwrap(), -1);
        assert_eq!(hilbert_rat(&rat(-1, 1), &rat(-1, 1), &Place::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert_rat(&rat(-1, 1), &rat(-1, 1), &Place::Prime(3)).unwrap(), 1);
    }

    #[test]
    fn one_is_always_trivial() {
        for b in [-7i64, -2, 3, 5, 6] {
            for v in [Place::Real, Place::Prime(2), Place::Prime(3), Place::Prime(7)] {
                assert_eq!(hilbert_rat(&rat(1, 1), &rat(b, 1), &v).unwrap(), 1);
            }
        }
    }

    #[test]
    fn rejects_other_fields() {
        let f = Field::gf(5).unwrap();
        let x = f.one();
        assert!(matches!(hilbert_symbol(&f, &x, &x, &Place::Real), Err(Error::UnsupportedField(_))));
    }
}
