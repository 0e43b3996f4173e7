//! Similarity of quadratic forms: a scalar c with q1 ≅ c·q2.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::fields::local::{hasse_invariant, is_local_square_rat, rational_relevant_places};
use crate::fields::poly::Poly;
use crate::fields::ratfunc::RatFunc;
use crate::fields::rational::is_square_rat;
use crate::fields::{Elem, Field, FieldKind, Place};
use crate::forms::{isometric, QuadraticForm};

/// Extra primes outside the relevant set tried over ℚ before giving up.
const EXTRA_PRIME_LIMIT: u64 = 400;

fn try_scalars(q1: &QuadraticForm, q2: &QuadraticForm, cands: impl IntoIterator<Item = Elem>) -> Result<Option<Elem>> {
    for c in cands {
        if isometric(q1, &q2.scale(&c)?)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Products of all subsets of `gens`, the empty product first.
fn subset_products(f: &Field, gens: &[Elem]) -> Vec<Elem> {
    let mut out = vec![f.one()];
    for g in gens {
        let more: Vec<Elem> = out.iter().map(|x| f.mul(x, g)).collect();
        out.extend(more);
    }
    out
}

/// Some(c) with q1 ≅ c·q2, None if no such c exists, or OracleUndecided
/// when the candidate search is exhausted without a proof of absence.
pub fn similarity_scalar(q1: &QuadraticForm, q2: &QuadraticForm) -> Result<Option<Elem>> {
    let f = q1.field();
    f.check_same(q2.field())?;
    if q1.dim() != q2.dim() {
        return Ok(None);
    }
    match f.kind() {
        FieldKind::Finite { .. } => {
            let mut cands = vec![f.one()];
            if f.characteristic() != 2 {
                let ns = f.elements().expect("finite").into_iter().find(|e| !f.is_zero(e) && !f.is_square(e));
                cands.extend(ns);
            }
            try_scalars(q1, q2, cands)
        }
        FieldKind::Rationals => rational_similarity(q1, q2),
        FieldKind::RationalFunctions { p } => {
            let mut gens = Vec::new();
            if p != 2 {
                let ns = (1..p).find(|c| !f.is_square(&f.from_i64(*c as i64)));
                gens.extend(ns.map(|c| f.from_i64(c as i64)));
            }
            let mut factors: BTreeSet<Poly> = BTreeSet::new();
            for q in [q1, q2] {
                for row in q.coeffs() {
                    for e in row {
                        if let Elem::Fun(r) = e {
                            for poly in [&r.num, &r.den] {
                                if poly.degree().unwrap_or(0) > 0 {
                                    factors.extend(poly.factor(p).1.into_iter().map(|(g, _)| g));
                                }
                            }
                        }
                    }
                }
            }
            gens.extend(factors.into_iter().take(10).map(|g| Elem::Fun(RatFunc::from_poly(g))));
            match try_scalars(q1, q2, subset_products(f, &gens))? {
                Some(c) => Ok(Some(c)),
                None => Err(Error::OracleUndecided {
                    stage: "similarity scalar search over F_p(t)".into(),
                    partial_index: 0,
                }),
            }
        }
    }
}

fn rationals_of(f: &Field, q: &QuadraticForm) -> Result<Vec<BigRational>> {
    let (d, _) = q.diagonalize()?;
    Ok(d.iter().map(|e| f.rat(e).expect("rational")).collect())
}

fn product(d: &[BigRational]) -> BigRational {
    d.iter().fold(BigRational::one(), |a, b| a * b)
}

fn signature(d: &[BigRational]) -> (usize, usize) {
    let pos = d.iter().filter(|a| a.is_positive()).count();
    (pos, d.len() - pos)
}

/// Local-global criterion for the existence of a similarity scalar when the
/// dimension is even: equal discriminants, matching or swapped signatures,
/// and at each relevant prime where the signed discriminant δ is a local
/// square, equal Hasse invariants (elsewhere (c, δ)_p can be adjusted).
fn rational_similarity_possible(d1: &[BigRational], d2: &[BigRational]) -> Result<bool> {
    let n = d1.len();
    let disc1 = product(d1);
    let disc2 = product(d2);
    if !is_square_rat(&(disc1.clone() * disc2)) {
        return Ok(false);
    }
    let (p1, n1) = signature(d1);
    let s2 = signature(d2);
    if (p1, n1) != s2 && (n1, p1) != s2 {
        return Ok(false);
    }
    let delta = if (n / 2) % 2 == 1 { -disc1 } else { disc1 };
    let all: Vec<BigRational> = d1.iter().chain(d2).cloned().collect();
    for place in rational_relevant_places(&all)? {
        if place == Place::Real {
            continue;
        }
        if is_local_square_rat(&delta, &place) && hasse_invariant(d1, &place)? != hasse_invariant(d2, &place)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn rational_similarity(q1: &QuadraticForm, q2: &QuadraticForm) -> Result<Option<Elem>> {
    let f = q1.field();
    let d1 = rationals_of(f, q1)?;
    let d2 = rationals_of(f, q2)?;
    if d1.len() % 2 == 1 {
        // disc(c·q2) = c·disc(q2) forces the square class of c
        let c = f.from_rational(&(product(&d1) / product(&d2)))?;
        return try_scalars(q1, q2, [c]);
    }
    if !rational_similarity_possible(&d1, &d2)? {
        return Ok(None);
    }
    let all: Vec<BigRational> = d1.iter().chain(&d2).cloned().collect();
    let primes: Vec<u64> = rational_relevant_places(&all)?
        .into_iter()
        .filter_map(|p| match p {
            Place::Prime(p) => Some(p),
            _ => None,
        })
        .collect();
    let mut gens = vec![f.from_i64(-1)];
    gens.extend(primes.iter().take(12).map(|p| f.from_i64(*p as i64)));
    let units = subset_products(f, &gens);
    if let Some(c) = try_scalars(q1, q2, units.iter().cloned())? {
        return Ok(Some(c));
    }
    let mut ell = 3u64;
    while ell < EXTRA_PRIME_LIMIT {
        let is_prime = (2..ell).take_while(|k| k * k <= ell).all(|k| ell % k != 0);
        if is_prime && !primes.contains(&ell) {
            let l = f.from_i64(ell as i64);
            if let Some(c) = try_scalars(q1, q2, units.iter().map(|u| f.mul(u, &l)))? {
                return Ok(Some(c));
            }
        }
        ell += 2;
    }
    Err(Error::OracleUndecided {
        stage: format!(
            "similarity scalar over ℚ (criterion holds, no scalar among S-units times primes < {EXTRA_PRIME_LIMIT})"
        ),
        partial_index: 0,
    })
}

/// Square-free integer representative of a rational, for display.
pub fn square_class_label(f: &Field, c: &Elem) -> String {
    if let Some(r) = f.rat(c) {
        if let Ok(n) = crate::fields::rational::square_free_part(&r) {
            if let Some(v) = n.to_i64() {
                return v.to_string();
            }
            return BigInt::to_string(&n);
        }
    }
    f.format(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(f: &Field, v: &[i64]) -> QuadraticForm {
        QuadraticForm::diagonal(f, &v.iter().map(|x| f.from_i64(*x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rational_scalars() {
        let f = Field::rationals();
        let c = similarity_scalar(&diag(&f, &[3, 6]), &diag(&f, &[1, 2])).unwrap().unwrap();
        assert!(isometric(&diag(&f, &[3, 6]), &diag(&f, &[1, 2]).scale(&c).unwrap()).unwrap());
        assert_eq!(similarity_scalar(&diag(&f, &[1, 1]), &diag(&f, &[1, 2])).unwrap(), None);
        // c = 5 ∉ {±1, 2} is still found: ⟨1,1⟩ represents 5
        let c = similarity_scalar(&diag(&f, &[5, 5]), &diag(&f, &[1, 1])).unwrap();
        assert!(c.is_some());
        assert!(similarity_scalar(&diag(&f, &[1, 1, 1]), &diag(&f, &[7, 7, 7])).unwrap().is_some());
    }

    #[test]
    fn finite_scalars() {
        let f = Field::gf(5).unwrap();
        assert!(similarity_scalar(&diag(&f, &[2, 2]), &diag(&f, &[1, 1])).unwrap().is_some());
        assert_eq!(similarity_scalar(&diag(&f, &[1, 2, 1]), &diag(&f, &[1, 1, 1, 1])).unwrap(), None);
    }
}
