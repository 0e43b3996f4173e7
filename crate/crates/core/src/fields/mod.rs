//! Exact base fields and the isotropy oracle every decision procedure
//! dispatches through.
//!
//! A [`Field`] is a cheap, shareable handle (finite field GF(p^k), the
//! rationals, or a rational function field F_p(t)). Elements are plain
//! [`Elem`] payloads; all arithmetic goes through the owning handle so that
//! payloads stay canonical and equality is structural.

pub mod finite;
pub mod hilbert;
pub mod local;
pub mod oracle;
pub mod poly;
pub mod ratfunc;
pub mod rational;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use finite::GaloisField;
use poly::Poly;
use ratfunc::RatFunc;

pub use hilbert::hilbert_symbol;
pub use oracle::{isotropy_oracle, AnisotropyCertificate, IsotropyOutcome};

/// Which concrete field a handle stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FieldKind {
    Finite { p: u32, k: u32 },
    Rationals,
    RationalFunctions { p: u32 },
}

/// A place of ℚ or of F_p(t).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Real,
    Prime(u64),
    /// Finite place of F_p(t) given by a monic irreducible polynomial.
    Poly(Poly),
    Infinity,
}

impl Place {
    pub fn prime(p: u64) -> Result<Self> {
        if p < 2 || !num_prime::nt_funcs::is_prime64(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Place::Prime(p))
    }

    pub fn poly(pi: Poly, p: u32) -> Result<Self> {
        if !pi.is_monic() || !pi.is_irreducible(p) {
            return Err(Error::InvalidField(format!("{} is not monic irreducible over F_{p}", pi.format("t"))));
        }
        Ok(Place::Poly(pi))
    }

    pub fn label(&self) -> String {
        match self {
            Place::Real => "R".into(),
            Place::Prime(p) => format!("Q_{p}"),
            Place::Poly(pi) => format!("({})", pi.format("t")),
            Place::Infinity => "inf".into(),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

/// Search bounds and seed used by oracles over infinite fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleBounds {
    /// Height bound for rational witness searches (also bounds the
    /// auxiliary value search when splitting ℚ-forms).
    pub search_height: u64,
    /// Polynomial degree bound for witness searches over F_p(t).
    pub search_degree: u32,
    pub seed: u64,
    /// Candidate budget for constructive Pfister-slot searches.
    pub pfister_budget: usize,
}

impl Default for OracleBounds {
    fn default() -> Self {
        Self { search_height: 400, search_degree: 3, seed: 0x7d1_5eed, pfister_budget: 20_000 }
    }
}

/// Exact element payload.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Fin(u32),
    Rat(BigRational),
    Fun(RatFunc),
}

#[derive(Debug)]
enum Inner {
    Finite(GaloisField),
    Rationals,
    Functions { p: u32 },
}

/// Shareable handle to a base field.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
    bounds: OracleBounds,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.kind() == other.kind()
    }
}
impl Eq for Field {}

impl Field {
    pub fn finite(p: u32, k: u32) -> Result<Self> {
        Ok(Self::wrap(Inner::Finite(GaloisField::new(p, k)?)))
    }

    /// GF(q) for a prime power q.
    pub fn gf(q: u64) -> Result<Self> {
        let fac = num_prime::nt_funcs::factorize64(q);
        if fac.len() != 1 {
            return Err(Error::InvalidField(format!("{q} is not a prime power")));
        }
        let (&p, &k) = fac.iter().next().expect("one factor");
        Self::finite(p as u32, k as u32)
    }

    pub fn rationals() -> Self {
        Self::wrap(Inner::Rationals)
    }

    pub fn rational_functions(p: u32) -> Result<Self> {
        if !finite::is_prime_u32(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Self::wrap(Inner::Functions { p }))
    }

    fn wrap(inner: Inner) -> Self {
        Self { inner: Arc::new(inner), bounds: OracleBounds::default() }
    }

    pub fn with_bounds(&self, bounds: OracleBounds) -> Self {
        Self { inner: self.inner.clone(), bounds }
    }

    pub fn bounds(&self) -> OracleBounds {
        self.bounds
    }

    pub fn kind(&self) -> FieldKind {
        match &*self.inner {
            Inner::Finite(g) => FieldKind::Finite { p: g.p(), k: g.k() },
            Inner::Rationals => FieldKind::Rationals,
            Inner::Functions { p } => FieldKind::RationalFunctions { p: *p },
        }
    }

    pub fn characteristic(&self) -> u32 {
        match &*self.inner {
            Inner::Finite(g) => g.p(),
            Inner::Rationals => 0,
            Inner::Functions { p } => *p,
        }
    }

    /// Field order, `None` when infinite.
    pub fn cardinality(&self) -> Option<u64> {
        match &*self.inner {
            Inner::Finite(g) => Some(g.order() as u64),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(&*self.inner, Inner::Finite(_))
    }

    pub fn galois(&self) -> Option<&GaloisField> {
        match &*self.inner {
            Inner::Finite(g) => Some(g),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self.kind() {
            FieldKind::Finite { p, k } => format!("GF({})", (p as u64).pow(k)),
            FieldKind::Rationals => "QQ".into(),
            FieldKind::RationalFunctions { p } => format!("Fp_t({p})"),
        }
    }

    pub fn check_same(&self, other: &Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    // ---------------------------------------------------------------- constructors

    pub fn zero(&self) -> Elem {
        self.from_i64(0)
    }
    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match &*self.inner {
            Inner::Finite(g) => Elem::Fin(g.from_int(n)),
            Inner::Rationals => Elem::Rat(BigRational::from_integer(BigInt::from(n))),
            Inner::Functions { p } => Elem::Fun(RatFunc::from_poly(Poly::constant(n.rem_euclid(*p as i64) as u32, *p))),
        }
    }

    pub fn from_ratio(&self, n: i64, d: i64) -> Result<Elem> {
        self.div(&self.from_i64(n), &self.from_i64(d))
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Elem> {
        match &*self.inner {
            Inner::Rationals => Ok(Elem::Rat(r.clone())),
            _ => {
                let reduce = |x: &BigInt| -> i64 {
                    let p = BigInt::from(self.characteristic());
                    num_integer::Integer::mod_floor(x, &p).try_into().expect("small residue")
                };
                let n = self.from_i64(reduce(r.numer()));
                let d = self.from_i64(reduce(r.denom()));
                self.div(&n, &d)
            }
        }
    }

    /// The generator `z` of GF(p^k) or the variable `t` of F_p(t).
    pub fn generator(&self) -> Result<Elem> {
        match &*self.inner {
            Inner::Finite(g) => Ok(Elem::Fin(g.generator_power(1))),
            Inner::Functions { .. } => Ok(Elem::Fun(RatFunc::t())),
            Inner::Rationals => Err(Error::UnsupportedField("QQ has no generator symbol".into())),
        }
    }

    pub fn rat(&self, e: &Elem) -> Option<BigRational> {
        match e {
            Elem::Rat(r) => Some(r.clone()),
            _ => None,
        }
    }

    // ---------------------------------------------------------------- arithmetic

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (&*self.inner, a, b) {
            (Inner::Finite(g), Elem::Fin(x), Elem::Fin(y)) => Elem::Fin(g.add(*x, *y)),
            (Inner::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (Inner::Functions { p }, Elem::Fun(x), Elem::Fun(y)) => Elem::Fun(x.add(y, *p)),
            _ => panic!("element does not belong to {}", self.name()),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&*self.inner, a) {
            (Inner::Finite(g), Elem::Fin(x)) => Elem::Fin(g.neg(*x)),
            (Inner::Rationals, Elem::Rat(x)) => Elem::Rat(-x),
            (Inner::Functions { p }, Elem::Fun(x)) => Elem::Fun(x.neg(*p)),
            _ => panic!("element does not belong to {}", self.name()),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&*self.inner, a, b) {
            (Inner::Finite(g), Elem::Fin(x), Elem::Fin(y)) => Elem::Fin(g.mul(*x, *y)),
            (Inner::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (Inner::Functions { p }, Elem::Fun(x), Elem::Fun(y)) => Elem::Fun(x.mul(y, *p)),
            _ => panic!("element does not belong to {}", self.name()),
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        match (&*self.inner, a) {
            (Inner::Finite(g), Elem::Fin(x)) => g.inv(*x).map(Elem::Fin).ok_or(Error::DivisionByZero),
            (Inner::Rationals, Elem::Rat(x)) => {
                if x.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Elem::Rat(x.recip()))
                }
            }
            (Inner::Functions { p }, Elem::Fun(x)) => x.inv(*p).map(Elem::Fun).ok_or(Error::DivisionByZero),
            _ => panic!("element does not belong to {}", self.name()),
        }
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, e: u64) -> Elem {
        let mut out = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = self.mul(&out, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        out
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Fin(x) => *x == 0,
            Elem::Rat(x) => x.is_zero(),
            Elem::Fun(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    pub fn eq(&self, a: &Elem, b: &Elem) -> bool {
        a == b
    }

    /// Decides whether `a` is a square in the field.
    pub fn is_square(&self, a: &Elem) -> bool {
        match (&*self.inner, a) {
            (Inner::Finite(g), Elem::Fin(x)) => g.is_square(*x),
            (Inner::Rationals, Elem::Rat(x)) => rational::is_square_rat(x),
            (Inner::Functions { p }, Elem::Fun(x)) => {
                if x.is_zero() {
                    return true;
                }
                // n/d is a square iff n·d is a square polynomial
                let nd = x.num.mul(&x.den, *p);
                poly_is_square(&nd, *p)
            }
            _ => panic!("element does not belong to {}", self.name()),
        }
    }

    pub fn sqrt(&self, a: &Elem) -> Option<Elem> {
        match (&*self.inner, a) {
            (Inner::Finite(g), Elem::Fin(x)) => g.sqrt(*x).map(Elem::Fin),
            (Inner::Rationals, Elem::Rat(x)) => rational::sqrt_rat(x).map(Elem::Rat),
            (Inner::Functions { p }, Elem::Fun(x)) => {
                let n = poly_sqrt(&x.num, *p)?;
                let d = poly_sqrt(&x.den, *p)?;
                RatFunc::new(n, d, *p).map(Elem::Fun)
            }
            _ => panic!("element does not belong to {}", self.name()),
        }
    }

    /// All elements, for finite fields, in code order.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        self.galois().map(|g| (0..g.order()).map(Elem::Fin).collect())
    }

    /// Seeded sampling from a bounded subset (finite fields: uniform).
    pub fn sample<R: Rng>(&self, rng: &mut R, height: u64) -> Elem {
        match &*self.inner {
            Inner::Finite(g) => Elem::Fin(rng.gen_range(0..g.order())),
            Inner::Rationals => {
                let h = height.max(1) as i64;
                let n = rng.gen_range(-h..=h);
                let d = rng.gen_range(1..=h);
                Elem::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
            }
            Inner::Functions { p } => {
                let deg = rng.gen_range(0..=height.clamp(0, 3) as usize);
                let coeffs: Vec<u32> = (0..=deg).map(|_| rng.gen_range(0..*p)).collect();
                Elem::Fun(RatFunc::new(Poly(coeffs), Poly::one(), *p).expect("unit denominator"))
            }
        }
    }

    pub fn sample_nonzero<R: Rng>(&self, rng: &mut R, height: u64) -> Elem {
        loop {
            let e = self.sample(rng, height);
            if !self.is_zero(&e) {
                return e;
            }
        }
    }

    pub fn format(&self, a: &Elem) -> String {
        match (&*self.inner, a) {
            (Inner::Finite(g), Elem::Fin(x)) => g.format(*x),
            (Inner::Rationals, Elem::Rat(x)) => {
                if x.denom().is_one() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            (Inner::Functions { .. }, Elem::Fun(x)) => x.format(),
            _ => panic!("element does not belong to {}", self.name()),
        }
    }

    /// Sign of a rational element (None elsewhere).
    pub fn sign(&self, a: &Elem) -> Option<i32> {
        match a {
            Elem::Rat(x) => Some(if x.is_positive() {
                1
            } else if x.is_negative() {
                -1
            } else {
                0
            }),
            _ => None,
        }
    }

    /// Artin–Schreier image test in characteristic 2: is `a = x² + x` solvable?
    /// `None` when undecided (non-Laurent rational functions).
    pub fn in_artin_schreier_image(&self, a: &Elem) -> Option<bool> {
        match (&*self.inner, a) {
            (Inner::Finite(g), Elem::Fin(x)) if g.p() == 2 => Some(g.absolute_trace(*x) == 0),
            (Inner::Functions { p: 2 }, Elem::Fun(x)) => artin_schreier_laurent(x).map(|r| r.is_some()),
            _ => None,
        }
    }

    /// A root of u² + u = a in characteristic 2: `None` when undecided,
    /// `Some(None)` when a is not in the Artin–Schreier image.
    pub fn artin_schreier_root(&self, a: &Elem) -> Option<Option<Elem>> {
        match (&*self.inner, a) {
            (Inner::Finite(g), Elem::Fin(x)) if g.p() == 2 => Some(g.solve_artin_schreier(*x).map(Elem::Fin)),
            (Inner::Functions { p: 2 }, Elem::Fun(x)) => artin_schreier_laurent(x).map(|r| r.map(Elem::Fun)),
            _ => None,
        }
    }

    /// Embeds this finite field into GF(p^{k·degree}); returns the target field
    /// and the image of every element code.
    pub fn finite_extension(&self, degree: u32) -> Result<(Field, Vec<u32>)> {
        let g = self.galois().ok_or_else(|| Error::UnsupportedField("finite extensions need a finite base".into()))?;
        let big = Field::finite(g.p(), g.k() * degree)?.with_bounds(self.bounds);
        let bg = big.galois().expect("finite");
        let q_small = g.order() as u64;
        let q_big = bg.order() as u64;
        // candidates for the image of the small generator: the order-(q−1) subgroup
        let step = (q_big - 1) / (q_small - 1);
        let modulus = g.modulus();
        let mut root = None;
        for j in 0..(q_small - 1).max(1) {
            let cand = bg.generator_power(step * j);
            // evaluate the small modulus, coefficients are prime-field digits
            let mut acc = 0u32;
            for c in modulus.iter().rev() {
                acc = bg.add(bg.mul(acc, cand), *c);
            }
            if acc == 0 {
                root = Some(cand);
                break;
            }
        }
        let root = root.ok_or_else(|| Error::InternalInconsistency("no embedding root found".into()))?;
        let image = (0..g.order())
            .map(|code| {
                let coeffs = g.coefficients(code);
                let mut acc = 0u32;
                for c in coeffs.iter().rev() {
                    acc = bg.add(bg.mul(acc, root), *c);
                }
                acc
            })
            .collect();
        Ok((big, image))
    }
}

pub(crate) fn poly_is_square(f: &Poly, p: u32) -> bool {
    if p == 2 {
        return f.0.iter().skip(1).step_by(2).all(|c| *c == 0);
    }
    let (lead, fac) = f.factor(p);
    let lead_ok = p == 2 || rational::legendre(lead as u64, p as u64) == 1;
    lead_ok && fac.iter().all(|(_, m)| m % 2 == 0)
}

pub(crate) fn poly_sqrt(f: &Poly, p: u32) -> Option<Poly> {
    if f.is_zero() {
        return Some(Poly::zero());
    }
    if p == 2 {
        if !poly_is_square(f, p) {
            return None;
        }
        return Some(Poly(f.0.iter().step_by(2).copied().collect()));
    }
    let (lead, fac) = f.factor(p);
    if fac.iter().any(|(_, m)| m % 2 == 1) {
        return None;
    }
    let g = GaloisField::new(p, 1).ok()?;
    let r = g.sqrt(lead)?;
    let mut out = Poly::constant(r, p);
    for (h, m) in fac {
        out = out.mul(&h.pow(m / 2, p), p);
    }
    Some(out)
}

/// Solves u² + u = x over F_2(t) when x is a Laurent polynomial; `None`
/// when x has another denominator, `Some(None)` when x is not in the image.
fn artin_schreier_laurent(x: &RatFunc) -> Option<Option<RatFunc>> {
    let den = &x.den;
    let shift = den.degree().unwrap_or(0);
    if *den != Poly::monomial(shift) {
        return None;
    }
    let mut terms: std::collections::BTreeSet<i64> = std::collections::BTreeSet::new();
    for (i, c) in x.num.0.iter().enumerate() {
        if *c != 0 {
            terms.insert(i as i64 - shift as i64);
        }
    }
    let toggle = |set: &mut std::collections::BTreeSet<i64>, e: i64| {
        if !set.remove(&e) {
            set.insert(e);
        }
    };
    let mut root: std::collections::BTreeSet<i64> = std::collections::BTreeSet::new();
    // poles at infinity from the top, then poles at t from the bottom;
    // u ∋ t^m contributes t^{2m} + t^m
    loop {
        let top = terms.iter().next_back().copied().filter(|e| *e > 0);
        let bottom = terms.iter().next().copied().filter(|e| *e < 0);
        let e = match (top, bottom) {
            (Some(e), _) | (None, Some(e)) => e,
            (None, None) => break,
        };
        if e % 2 != 0 {
            return Some(None);
        }
        toggle(&mut terms, e);
        toggle(&mut terms, e / 2);
        toggle(&mut root, e / 2);
    }
    // a surviving constant 1 is not in the image: F_2 is algebraically closed in F_2(t)
    if terms.contains(&0) {
        return Some(None);
    }
    let low = root.iter().next().copied().unwrap_or(0).min(0);
    let mut num = vec![0u32; root.iter().next_back().map_or(0, |h| (h - low) as usize + 1)];
    for e in &root {
        num[(e - low) as usize] = 1;
    }
    while num.last() == Some(&0) {
        num.pop();
    }
    Some(RatFunc::new(Poly(num), Poly::monomial((-low) as usize), 2))
}

/// An element bundled with its field, for ergonomic external use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    pub field: Field,
    pub value: Elem,
}

impl FieldElement {
    pub fn new(field: &Field, value: Elem) -> Self {
        Self { field: field.clone(), value }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(&self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_is_not_a_square_in_f3() {
        let f = Field::gf(3).unwrap();
        assert!(!f.is_square(&f.from_i64(2)));
        let squares: Vec<_> = f.elements().unwrap().iter().map(|x| f.mul(x, x)).collect();
        assert!(!squares.contains(&f.from_i64(2)));
    }

    #[test]
    fn nine_quarters_is_a_square() {
        let q = Field::rationals();
        let x = q.from_ratio(9, 4).unwrap();
        assert!(q.is_square(&x));
        assert_eq!(q.sqrt(&x), Some(q.from_ratio(3, 2).unwrap()));
    }

    #[test]
    fn every_element_of_f4_is_a_square() {
        let f = Field::gf(4).unwrap();
        let elems = f.elements().unwrap();
        assert_eq!(elems.len(), 4);
        for a in &elems {
            assert!(f.is_square(a));
            let hits = elems.iter().filter(|x| f.mul(x, x) == *a).count();
            assert_eq!(hits, 1);
        }
    }

    #[test]
    fn inverse_of_zero_errors() {
        for f in [Field::gf(5).unwrap(), Field::rationals(), Field::rational_functions(3).unwrap()] {
            assert_eq!(f.inv(&f.zero()), Err(Error::DivisionByZero));
        }
    }

    #[test]
    fn function_field_squares() {
        let f = Field::rational_functions(3).unwrap();
        let t = f.generator().unwrap();
        let t2 = f.mul(&t, &t);
        assert!(f.is_square(&t2));
        assert!(!f.is_square(&t));
        assert!(!f.is_square(&f.from_i64(2)));
        let g = Field::rational_functions(2).unwrap();
        let t = g.generator().unwrap();
        let x = g.add(&g.mul(&t, &t), &g.one());
        assert!(g.is_square(&x));
        assert_eq!(g.sqrt(&x), Some(g.add(&t, &g.one())));
    }

    #[test]
    fn subfield_embedding_is_a_ring_map() {
        let f = Field::gf(9).unwrap();
        let (big, image) = f.finite_extension(2).unwrap();
        let g = f.galois().unwrap();
        let bg = big.galois().unwrap();
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(image[g.mul(a, b) as usize], bg.mul(image[a as usize], image[b as usize]));
                assert_eq!(image[g.add(a, b) as usize], bg.add(image[a as usize], image[b as usize]));
            }
        }
    }

    #[test]
    fn artin_schreier_over_f2t() {
        let f = Field::rational_functions(2).unwrap();
        let t = f.generator().unwrap();
        // t² + t is in the image, t is not
        assert_eq!(f.in_artin_schreier_image(&f.add(&f.mul(&t, &t), &t)), Some(true));
        assert_eq!(f.in_artin_schreier_image(&t), Some(false));
        assert_eq!(f.in_artin_schreier_image(&f.one()), Some(false));
        let g = Field::gf(4).unwrap();
        let traces: Vec<_> = g.elements().unwrap().iter().map(|x| g.in_artin_schreier_image(x).unwrap()).collect();
        assert_eq!(traces.iter().filter(|b| **b).count(), 2);
    }
}
