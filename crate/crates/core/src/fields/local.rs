//! Invariant-level local analysis of diagonal quadratic forms.
//!
//! Over ℚ a diagonal form ⟨a1,…,an⟩ is classified at each place by its
//! dimension, discriminant square class and Hasse invariant
//! ∏_{i<j}(ai,aj)_v (signature at the real place). Over F_p(t) with p odd,
//! completions are handled through the two residue forms of the Springer
//! decomposition. Global Witt indices follow from the local ones by the
//! local-global principle.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;
use std::collections::BTreeSet;

use super::hilbert::hilbert_rat;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::rational::{factor_int, is_square_rat, legendre, unit_residue, valuation};
use super::Place;
use crate::error::{Error, Result};

/// Witt index of a form over one completion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalReport {
    pub place: Place,
    pub dim: usize,
    pub witt_index: usize,
}

impl LocalReport {
    pub fn isotropic(&self) -> bool {
        self.witt_index > 0
    }
    pub fn hyperbolic(&self) -> bool {
        2 * self.witt_index == self.dim
    }
    pub fn anisotropic(&self) -> bool {
        self.witt_index == 0
    }
}

/// Global Witt index together with the local data it was derived from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlobalIndex {
    pub dim: usize,
    pub witt_index: usize,
    pub locals: Vec<LocalReport>,
    /// Upper bound coming from places outside the relevant set
    /// (parity and the global discriminant).
    pub generic_bound: usize,
}

// ------------------------------------------------------------------ rationals

pub fn is_local_square_rat(x: &BigRational, place: &Place) -> bool {
    match place {
        Place::Real => x.is_positive(),
        Place::Prime(2) => valuation(x, 2) % 2 == 0 && unit_residue(x, 2, 3) == 1,
        Place::Prime(p) => valuation(x, *p) % 2 == 0 && legendre(unit_residue(x, *p, 1), *p) == 1,
        _ => false,
    }
}

/// Real place plus 2 plus every prime dividing a numerator or denominator.
pub fn rational_relevant_places(diag: &[BigRational]) -> Result<Vec<Place>> {
    let mut primes: BTreeSet<u64> = BTreeSet::from([2]);
    for a in diag {
        for n in [a.numer(), a.denom()] {
            if n.abs() > BigInt::one() {
                primes.extend(factor_int(n)?.into_keys());
            }
        }
    }
    let mut out = vec![Place::Real];
    out.extend(primes.into_iter().map(Place::Prime));
    Ok(out)
}

fn product(diag: &[BigRational]) -> BigRational {
    diag.iter().fold(BigRational::one(), |acc, a| acc * a)
}

pub fn hasse_invariant(diag: &[BigRational], place: &Place) -> Result<i32> {
    let mut s = 1;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            s *= hilbert_rat(&diag[i], &diag[j], place)?;
        }
    }
    Ok(s)
}

fn isotropic_by_invariants(n: usize, d: &BigRational, s: i32, place: &Place) -> Result<bool> {
    let minus_one = -BigRational::one();
    Ok(match n {
        0 | 1 => false,
        2 => is_local_square_rat(&(-d.clone()), place),
        3 => s == hilbert_rat(&minus_one, &(-d.clone()), place)?,
        4 => !is_local_square_rat(d, place) || s == hilbert_rat(&minus_one, &minus_one, place)?,
        _ => true,
    })
}

/// Witt index of ⟨diag⟩ over the completion of ℚ at `place`.
pub fn rational_local_index(diag: &[BigRational], place: &Place) -> Result<usize> {
    if let Place::Real = place {
        let pos = diag.iter().filter(|a| a.is_positive()).count();
        return Ok(pos.min(diag.len() - pos));
    }
    let mut n = diag.len();
    let mut d = product(diag);
    let mut s = hasse_invariant(diag, place)?;
    let mut index = 0;
    while isotropic_by_invariants(n, &d, s, place)? {
        // split off a hyperbolic plane: d' = −d, s' = s·(−1, d')
        d = -d;
        s *= hilbert_rat(&-BigRational::one(), &d, place)?;
        n -= 2;
        index += 1;
    }
    Ok(index)
}

pub fn rational_local_isotropic(diag: &[BigRational], place: &Place) -> Result<bool> {
    if let Place::Real = place {
        return Ok(rational_local_index(diag, place)? > 0);
    }
    let d = product(diag);
    let s = hasse_invariant(diag, place)?;
    isotropic_by_invariants(diag.len(), &d, s, place)
}

fn signed_discriminant(diag: &[BigRational]) -> BigRational {
    let n = diag.len();
    let d = product(diag);
    if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        -d
    } else {
        d
    }
}

fn generic_bound(dim: usize, signed_disc_is_square: bool) -> usize {
    if dim % 2 == 1 {
        (dim - 1) / 2
    } else if signed_disc_is_square {
        dim / 2
    } else {
        dim.saturating_sub(2) / 2
    }
}

/// Global Witt index over ℚ as the minimum of local indices.
pub fn rational_global_index(diag: &[BigRational]) -> Result<GlobalIndex> {
    let dim = diag.len();
    let places = rational_relevant_places(diag)?;
    let mut locals = Vec::with_capacity(places.len());
    for place in places {
        let witt_index = rational_local_index(diag, &place)?;
        locals.push(LocalReport { place, dim, witt_index });
    }
    let generic = generic_bound(dim, is_square_rat(&signed_discriminant(diag)));
    let witt_index = locals.iter().map(|l| l.witt_index).min().unwrap_or(0).min(generic);
    Ok(GlobalIndex { dim, witt_index, locals, generic_bound: generic })
}

/// Isotropy over ℚ by Hasse–Minkowski; returns the first obstructing place.
pub fn rational_isotropic(diag: &[BigRational]) -> Result<(bool, Option<Place>)> {
    match diag.len() {
        0 | 1 => Ok((false, None)),
        2 => Ok((is_square_rat(&-(diag[0].clone() * &diag[1])), None)),
        _ => {
            for place in rational_relevant_places(diag)? {
                if !rational_local_isotropic(diag, &place)? {
                    return Ok((false, Some(place)));
                }
            }
            Ok((true, None))
        }
    }
}

// ------------------------------------------------------------ F_p(t), p odd

/// Residue field of a place of F_p(t): F_p[t]/(π), or F_p at infinity.
struct Residue<'a> {
    p: u32,
    pi: Option<&'a Poly>,
}

impl Residue<'_> {
    fn degree(&self) -> u32 {
        self.pi.map(|pi| pi.degree().unwrap_or(0) as u32).unwrap_or(1)
    }

    fn reduce(&self, f: &Poly) -> Poly {
        match self.pi {
            Some(pi) => f.rem(pi, self.p),
            None => f.clone(),
        }
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&a.mul(b, self.p))
    }

    fn inv(&self, a: &Poly) -> Poly {
        let order = (self.p as u128).pow(self.degree());
        match self.pi {
            Some(pi) => a.powmod(order - 2, pi, self.p),
            None => Poly::constant(super::poly::inverse_mod_p(a.leading(), self.p), self.p),
        }
    }

    fn is_square(&self, a: &Poly) -> bool {
        let order = (self.p as u128).pow(self.degree());
        let e = (order - 1) / 2;
        match self.pi {
            Some(pi) => a.powmod(e, pi, self.p) == Poly::one(),
            None => legendre(a.leading() as u64, self.p as u64) == 1,
        }
    }

    /// Valuation and residue of the unit part of a nonzero rational function.
    fn split(&self, x: &RatFunc) -> (i64, Poly) {
        match self.pi {
            Some(pi) => {
                let v = x.valuation(pi, self.p);
                let mut num = x.num.clone();
                let mut den = x.den.clone();
                for _ in 0..v.max(0) {
                    num = num.divrem(pi, self.p).0;
                }
                for _ in 0..(-v).max(0) {
                    den = den.divrem(pi, self.p).0;
                }
                let r = self.mul(&self.reduce(&num), &self.inv(&self.reduce(&den)));
                (v, r)
            }
            None => {
                let v = x.valuation_infinity();
                let c =
                    x.num.leading() as u64 * super::poly::inverse_mod_p(x.den.leading(), self.p) as u64 % self.p as u64;
                (v, Poly::constant(c as u32, self.p))
            }
        }
    }

    /// Witt index of a diagonal form over this finite residue field.
    fn form_index(&self, entries: &[Poly]) -> usize {
        let m = entries.len();
        if m % 2 == 1 {
            return (m - 1) / 2;
        }
        if m == 0 {
            return 0;
        }
        let mut d = Poly::one();
        for e in entries {
            d = self.mul(&d, e);
        }
        if (m / 2) % 2 == 1 {
            d = self.reduce(&d.neg(self.p));
        }
        if self.is_square(&d) {
            m / 2
        } else {
            (m - 2) / 2
        }
    }
}

fn check_odd(p: u32) -> Result<()> {
    if p == 2 {
        Err(Error::UnsupportedField("residue-form analysis needs odd characteristic".into()))
    } else {
        Ok(())
    }
}

/// Witt index over the completion of F_p(t) at `place` (p odd), via the
/// first and second residue forms.
pub fn function_local_index(diag: &[RatFunc], p: u32, place: &Place) -> Result<usize> {
    check_odd(p)?;
    let res = match place {
        Place::Poly(pi) => Residue { p, pi: Some(pi) },
        Place::Infinity => Residue { p, pi: None },
        _ => return Err(Error::UnsupportedField(format!("{place} is not a place of F_{p}(t)"))),
    };
    let mut first = Vec::new();
    let mut second = Vec::new();
    for a in diag {
        let (v, r) = res.split(a);
        if v.rem_euclid(2) == 0 {
            first.push(r);
        } else {
            second.push(r);
        }
    }
    Ok(res.form_index(&first) + res.form_index(&second))
}

pub fn function_relevant_places(diag: &[RatFunc], p: u32) -> Vec<Place> {
    let mut set: BTreeSet<Poly> = BTreeSet::new();
    for a in diag {
        for f in [&a.num, &a.den] {
            if f.degree().unwrap_or(0) > 0 {
                set.extend(f.factor(p).1.into_iter().map(|(g, _)| g));
            }
        }
    }
    let mut places: Vec<Place> = set.into_iter().map(Place::Poly).collect();
    places.sort_by(|a, b| match (a, b) {
        (Place::Poly(x), Place::Poly(y)) => super::poly::cmp_poly(x, y),
        _ => std::cmp::Ordering::Equal,
    });
    places.push(Place::Infinity);
    places
}

fn ratfunc_is_square(x: &RatFunc, p: u32) -> bool {
    let nd = x.num.mul(&x.den, p);
    let (lead, fac) = nd.factor(p);
    legendre(lead as u64, p as u64) == 1 && fac.iter().all(|(_, m)| m % 2 == 0)
}

pub fn function_global_index(diag: &[RatFunc], p: u32) -> Result<GlobalIndex> {
    check_odd(p)?;
    let dim = diag.len();
    let mut locals = Vec::new();
    for place in function_relevant_places(diag, p) {
        let witt_index = function_local_index(diag, p, &place)?;
        locals.push(LocalReport { place, dim, witt_index });
    }
    let mut d = diag.iter().fold(RatFunc::one(), |acc, a| acc.mul(a, p));
    if (dim * dim.saturating_sub(1) / 2) % 2 == 1 {
        d = d.neg(p);
    }
    let generic = generic_bound(dim, ratfunc_is_square(&d, p));
    let witt_index = locals.iter().map(|l| l.witt_index).min().unwrap_or(0).min(generic);
    Ok(GlobalIndex { dim, witt_index, locals, generic_bound: generic })
}

/// Isotropy over F_p(t), p odd, by the local-global principle.
pub fn function_isotropic(diag: &[RatFunc], p: u32) -> Result<(bool, Option<Place>)> {
    check_odd(p)?;
    match diag.len() {
        0 | 1 => Ok((false, None)),
        2 => Ok((ratfunc_is_square(&diag[0].mul(&diag[1], p).neg(p), p), None)),
        n => {
            if n >= 5 {
                return Ok((true, None));
            }
            for place in function_relevant_places(diag, p) {
                if function_local_index(diag, p, &place)? == 0 {
                    return Ok((false, Some(place)));
                }
            }
            Ok((true, None))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::rational::rat;
    use super::*;

    fn rats(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|x| rat(*x, 1)).collect()
    }

    #[test]
    fn sums_of_squares() {
        // ⟨1,1,1⟩ is anisotropic at 2 and R, ⟨1,1,1,1⟩ only at R
        let (iso, place) = rational_isotropic(&rats(&[1, 1, 1])).unwrap();
        assert!(!iso);
        assert_eq!(place, Some(Place::Real));
        assert_eq!(rational_local_index(&rats(&[1, 1, 1]), &Place::Prime(2)).unwrap(), 0);
        assert_eq!(rational_local_index(&rats(&[1, 1, 1]), &Place::Prime(3)).unwrap(), 1);
        assert_eq!(rational_local_index(&rats(&[1, 1, 1, 1]), &Place::Prime(2)).unwrap(), 0);
        assert_eq!(rational_local_index(&rats(&[1, 1, 1, 1]), &Place::Prime(3)).unwrap(), 2);
    }

    #[test]
    fn hyperbolic_forms_have_full_index() {
        let g = rational_global_index(&rats(&[1, -1, 3, -3])).unwrap();
        assert_eq!(g.witt_index, 2);
        let g = rational_global_index(&rats(&[1, -1, 1, 1])).unwrap();
        assert_eq!(g.witt_index, 1);
        // disc 2 nonsquare: ⟨1,−2⟩ anisotropic globally although isotropic nowhere special
        let g = rational_global_index(&rats(&[1, -2])).unwrap();
        assert_eq!(g.witt_index, 0);
    }

    #[test]
    fn quaternion_norm_form_minus_three_two() {
        // ⟨1,3,−2,−6⟩ is anisotropic, obstructed at 3
        let (iso, place) = rational_isotropic(&rats(&[1, 3, -2, -6])).unwrap();
        assert!(!iso);
        assert!(matches!(place, Some(Place::Prime(2)) | Some(Place::Prime(3))));
    }

    #[test]
    fn function_field_residue_forms() {
        let p = 3;
        let t = RatFunc::t();
        let one = RatFunc::one();
        // ⟨1, t⟩ ⊥ ⟨−1, −t⟩ is hyperbolic
        let diag = vec![one.clone(), t.clone(), one.neg(p), t.neg(p)];
        assert_eq!(function_global_index(&diag, p).unwrap().witt_index, 2);
        // ⟨1, 1, t, t⟩: −1 is not a square mod 3, anisotropic at t
        let diag = vec![one.clone(), one.clone(), t.clone(), t.clone()];
        let (iso, place) = function_isotropic(&diag, p).unwrap();
        assert!(!iso);
        assert!(place.is_some());
    }
}
