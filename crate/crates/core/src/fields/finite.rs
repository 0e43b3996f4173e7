//! Table-driven arithmetic for small Galois fields GF(p^k).
//!
//! Elements are encoded as integers `0..q`: the base-`p` digits of the code
//! are the coefficients (lowest first) of a polynomial in the generator `z`,
//! reduced modulo a primitive polynomial of degree `k`. Multiplication goes
//! through discrete log / antilog tables, addition is digit-wise.

use crate::error::{Error, Result};

/// Largest field order we build tables for.
pub const MAX_ORDER: u64 = 1 << 20;

#[derive(Debug)]
pub struct GaloisField {
    p: u32,
    k: u32,
    q: u32,
    /// Monic primitive modulus, coefficients lowest first (length k + 1).
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub(crate) fn is_prime_u32(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl GaloisField {
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime_u32(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidField("extension degree must be ≥ 1".into()));
        }
        let q = (p as u64)
            .checked_pow(k)
            .filter(|q| *q <= MAX_ORDER)
            .ok_or_else(|| Error::InvalidField(format!("GF({p}^{k}) is too large")))?;
        let q = q as u32;
        if k == 1 {
            // smallest primitive root modulo p
            for g in 1..p.max(2) {
                if let Some(exp) = Self::cycle_prime(p, g) {
                    let modulus = vec![(p - g) % p, 1];
                    let log = Self::invert_exp(&exp, q);
                    return Ok(Self { p, k, q, modulus, exp, log });
                }
            }
            // p = 2: the only unit is 1
            let exp = vec![1];
            let log = Self::invert_exp(&exp, q);
            return Ok(Self { p, k, q, modulus: vec![1, 1], exp, log });
        }
        // Lexicographically first monic polynomial of degree k for which z is primitive.
        let tail_count = q; // p^k choices for the lower coefficients
        for code in 0..tail_count {
            let mut modulus = digits(code, p, k);
            modulus.push(1);
            if modulus[0] == 0 {
                continue;
            }
            if let Some(exp) = Self::cycle_poly(p, k, &modulus) {
                let log = Self::invert_exp(&exp, q);
                return Ok(Self { p, k, q, modulus, exp, log });
            }
        }
        Err(Error::InvalidField(format!("no primitive polynomial found for GF({p}^{k})")))
    }

    fn cycle_prime(p: u32, g: u32) -> Option<Vec<u32>> {
        let order = p - 1;
        let mut exp = Vec::with_capacity(order as usize);
        let mut x = 1u32;
        for i in 0..order {
            if i > 0 && x == 1 {
                return None;
            }
            exp.push(x);
            x = ((x as u64 * g as u64) % p as u64) as u32;
        }
        (x == 1).then_some(exp)
    }

    fn cycle_poly(p: u32, k: u32, modulus: &[u32]) -> Option<Vec<u32>> {
        let q = (p as u64).pow(k) as u32;
        let order = q - 1;
        let mut exp = Vec::with_capacity(order as usize);
        let mut coeffs = vec![0u32; k as usize];
        coeffs[0] = 1;
        for i in 0..order {
            let code = encode(&coeffs, p);
            if i > 0 && code == 1 {
                return None;
            }
            exp.push(code);
            // multiply by z and reduce by the monic modulus
            let top = coeffs[k as usize - 1];
            for j in (1..k as usize).rev() {
                coeffs[j] = coeffs[j - 1];
            }
            coeffs[0] = 0;
            if top != 0 {
                for (j, c) in coeffs.iter_mut().enumerate() {
                    *c = (*c + p - (top * modulus[j]) % p) % p;
                }
            }
        }
        (encode(&coeffs, p) == 1).then_some(exp)
    }

    fn invert_exp(exp: &[u32], q: u32) -> Vec<u32> {
        let mut log = vec![u32::MAX; q as usize];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        log
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn order(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut scale) = (a, b, 0u32, 1u32);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let (mut a, mut out, mut scale) = (a, 0u32, 1u32);
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * scale;
            a /= self.p;
            scale *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let e = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % n as u64;
        self.exp[e as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// Discrete log with respect to the generator `z`.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn generator_power(&self, e: u64) -> u32 {
        self.exp[(e % (self.q as u64 - 1)) as usize]
    }

    pub fn is_square(&self, a: u32) -> bool {
        a == 0 || self.p == 2 || self.log[a as usize] % 2 == 0
    }

    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        let n = self.q - 1;
        let l = self.log[a as usize];
        if n % 2 == 1 {
            // squaring is a bijection; halve the exponent modulo the odd group order
            let half = ((l as u64 * ((n as u64 + 1) / 2)) % n as u64) as u32;
            return Some(self.exp[half as usize]);
        }
        (l % 2 == 0).then(|| self.exp[(l / 2) as usize])
    }

    /// Absolute trace to the prime field, returned as an element code.
    pub fn absolute_trace(&self, a: u32) -> u32 {
        let mut acc = 0u32;
        let mut x = a;
        for _ in 0..self.k {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        acc
    }

    /// A solution of y² + y = c in characteristic 2, found by solving the
    /// F_2-linear system for y ↦ y² + y on coefficient vectors.
    pub fn solve_artin_schreier(&self, c: u32) -> Option<u32> {
        if self.p != 2 {
            return None;
        }
        let k = self.k as usize;
        // rows: (image bits, preimage bits)
        let mut rows: Vec<(u32, u32)> = (0..k)
            .map(|i| {
                let y = 1u32 << i;
                (self.add(self.mul(y, y), y), y)
            })
            .collect();
        let mut target = (c, 0u32);
        let mut r = 0;
        for bit in 0..k {
            let mask = 1u32 << bit;
            let Some(p) = (r..k).find(|&i| rows[i].0 & mask != 0) else {
                continue;
            };
            rows.swap(r, p);
            let pivot = rows[r];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.0 & mask != 0 {
                    row.0 ^= pivot.0;
                    row.1 ^= pivot.1;
                }
            }
            if target.0 & mask != 0 {
                target.0 ^= pivot.0;
                target.1 ^= pivot.1;
            }
            r += 1;
        }
        (target.0 == 0).then_some(target.1)
    }

    /// Coefficients of the element as a polynomial in the generator.
    pub fn coefficients(&self, a: u32) -> Vec<u32> {
        digits(a, self.p, self.k)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> u32 {
        // reduce arbitrary-length coefficient lists through Horner evaluation at z
        let z = self.generator_power(1);
        let mut acc = 0u32;
        for c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, z), c % self.p);
        }
        acc
    }

    pub fn format(&self, a: u32) -> String {
        if self.k == 1 {
            return a.to_string();
        }
        let coeffs = self.coefficients(a);
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

pub(crate) fn digits(mut code: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(code % p);
        code /= p;
    }
    out
}

pub(crate) fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_consistent() {
        for (p, k) in [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (2, 3), (5, 2), (3, 4)] {
            let f = GaloisField::new(p, k).unwrap();
            let q = f.order();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
            }
            // distributivity on a sample
            for a in (0..q).step_by(((q / 7).max(1)) as usize) {
                for b in 0..q {
                    let c = (a + 2 * b) % q;
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn squares_match_enumeration() {
        for (p, k) in [(3, 1), (5, 1), (3, 2), (2, 2), (7, 1)] {
            let f = GaloisField::new(p, k).unwrap();
            let squares: std::collections::BTreeSet<u32> = (0..f.order()).map(|x| f.mul(x, x)).collect();
            for a in 0..f.order() {
                assert_eq!(f.is_square(a), squares.contains(&a), "GF({p}^{k}) a={a}");
                if let Some(r) = f.sqrt(a) {
                    assert_eq!(f.mul(r, r), a);
                }
            }
        }
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert!(GaloisField::new(4, 1).is_err());
        assert!(GaloisField::new(3, 0).is_err());
    }

    #[test]
    fn artin_schreier_solutions() {
        for k in 1..=4 {
            let g = GaloisField::new(2, k).unwrap();
            for c in 0..g.order() {
                match g.solve_artin_schreier(c) {
                    Some(y) => assert_eq!(g.add(g.mul(y, y), y), c),
                    None => assert_eq!(g.absolute_trace(c), 1),
                }
            }
        }
    }
}
