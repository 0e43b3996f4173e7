//! Integer and rational helpers: factorisation, square classes, valuations.

use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Prime factorisation of |n| for nonzero n.
pub fn factor_int(n: &BigInt) -> Result<BTreeMap<u64, u32>> {
    let m = n.abs().to_u128().ok_or_else(|| Error::UnsupportedField(format!("integer {n} too large to factor")))?;
    if m == 0 {
        return Err(Error::DivisionByZero);
    }
    let mut out = BTreeMap::new();
    for (p, e) in num_prime::nt_funcs::factorize128(m) {
        let p = u64::try_from(p).map_err(|_| Error::UnsupportedField(format!("prime factor of {n} exceeds u64")))?;
        out.insert(p, e as u32);
    }
    Ok(out)
}

pub fn is_square_int(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub fn is_square_rat(r: &BigRational) -> bool {
    // lowest terms: r is a square iff numerator and denominator are
    is_square_int(r.numer()) && is_square_int(r.denom())
}

pub fn sqrt_rat(r: &BigRational) -> Option<BigRational> {
    if !is_square_rat(r) {
        return None;
    }
    Some(BigRational::new(r.numer().sqrt(), r.denom().sqrt()))
}

/// Square-free integer s and rational k with r = s·k².
pub fn square_free_decomposition(r: &BigRational) -> Result<(BigInt, BigRational)> {
    if r.is_zero() {
        return Err(Error::ZeroEntry);
    }
    let nd = r.numer() * r.denom();
    let fac = factor_int(&nd)?;
    let mut s = BigInt::one();
    let mut m = BigInt::one();
    for (p, e) in fac {
        let pb = BigInt::from(p);
        if e % 2 == 1 {
            s *= &pb;
        }
        m *= num_traits::pow(pb, (e / 2) as usize);
    }
    if nd.sign() == Sign::Minus {
        s = -s;
    }
    // r = nd / den² = s m² / den²
    let k = BigRational::new(m, r.denom().clone());
    Ok((s, k))
}

pub fn square_free_part(r: &BigRational) -> Result<BigInt> {
    Ok(square_free_decomposition(r)?.0)
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(r: &BigRational, p: u64) -> i64 {
    let pb = BigInt::from(p);
    let mut v = 0i64;
    let mut n = r.numer().clone();
    while !n.is_zero() && n.is_multiple_of(&pb) {
        n /= &pb;
        v += 1;
    }
    let mut d = r.denom().clone();
    while d.is_multiple_of(&pb) {
        d /= &pb;
        v -= 1;
    }
    v
}

/// Unit part r·p^{−v} reduced modulo p^m, as a residue in [0, p^m).
pub fn unit_residue(r: &BigRational, p: u64, m: u32) -> u64 {
    let v = valuation(r, p);
    let pb = BigInt::from(p);
    let mut n = r.numer().clone();
    let mut d = r.denom().clone();
    if v > 0 {
        n /= num_traits::pow(pb.clone(), v as usize);
    } else if v < 0 {
        d /= num_traits::pow(pb.clone(), (-v) as usize);
    }
    let modulus = BigInt::from(p).pow(m);
    let dinv = d.mod_floor(&modulus).modinv(&modulus).expect("denominator is a unit");
    (n.mod_floor(&modulus) * dinv).mod_floor(&modulus).to_u64().expect("residue fits")
}

pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let e = (p - 1) / 2;
    let mut result = 1u128;
    let mut base = a as u128;
    let mut k = e;
    let pm = p as u128;
    while k > 0 {
        if k & 1 == 1 {
            result = result * base % pm;
        }
        base = base * base % pm;
        k >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_free_parts() {
        let (s, k) = square_free_decomposition(&rat(-18, 5)).unwrap();
        assert_eq!(s, BigInt::from(-10));
        assert_eq!(BigRational::from_integer(s) * &k * &k, rat(-18, 5));
        assert_eq!(square_free_part(&rat(9, 4)).unwrap(), BigInt::one());
    }

    #[test]
    fn valuations_and_residues() {
        assert_eq!(valuation(&rat(12, 5), 2), 2);
        assert_eq!(valuation(&rat(12, 25), 5), -2);
        assert_eq!(unit_residue(&rat(12, 1), 2, 3), 3);
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(3, 7), -1);
    }
}
