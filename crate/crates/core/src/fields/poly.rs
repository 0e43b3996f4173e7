//! Dense univariate polynomials over a prime field F_p, the substrate for
//! the rational function field F_p(t) and its places.

use std::cmp::Ordering;

/// Coefficients lowest degree first, no trailing zeros. The zero polynomial
/// is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly(pub Vec<u32>);

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime and small, Fermat inversion
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }
    pub fn one() -> Self {
        Poly(vec![1])
    }
    pub fn constant(c: u32, p: u32) -> Self {
        Poly(vec![c % p]).trimmed()
    }
    /// The monomial t^n.
    pub fn monomial(n: usize) -> Self {
        let mut v = vec![0; n + 1];
        v[n] = 1;
        Poly(v)
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
    pub fn leading(&self) -> u32 {
        self.0.last().copied().unwrap_or(0)
    }
    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn add(&self, other: &Poly, p: u32) -> Poly {
        let n = self.0.len().max(other.0.len());
        let v =
            (0..n).map(|i| (self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0)) % p).collect();
        Poly(v).trimmed()
    }

    pub fn neg(&self, p: u32) -> Poly {
        Poly(self.0.iter().map(|c| (p - c) % p).collect()).trimmed()
    }

    pub fn sub(&self, other: &Poly, p: u32) -> Poly {
        self.add(&other.neg(p), p)
    }

    pub fn scale(&self, c: u32, p: u32) -> Poly {
        Poly(self.0.iter().map(|x| (*x as u64 * c as u64 % p as u64) as u32).collect()).trimmed()
    }

    pub fn mul(&self, other: &Poly, p: u32) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![0u64; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] = (v[i + j] + *a as u64 * *b as u64) % p as u64;
            }
        }
        Poly(v.into_iter().map(|x| x as u32).collect()).trimmed()
    }

    pub fn pow(&self, e: u32, p: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self, p);
        }
        out
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub fn divrem(&self, divisor: &Poly, p: u32) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv_lead = inv_mod(divisor.leading(), p);
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![0u32; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = (rem[i] as u64 * inv_lead as u64 % p as u64) as u32;
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, d) in divisor.0.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = ((rem[idx] as u64 + (p - c) as u64 * *d as u64) % p as u64) as u32;
            }
        }
        (Poly(quot).trimmed(), Poly(rem).trimmed())
    }

    pub fn rem(&self, divisor: &Poly, p: u32) -> Poly {
        self.divrem(divisor, p).1
    }

    pub fn monic(&self, p: u32) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), p), p)
    }

    pub fn gcd(&self, other: &Poly, p: u32) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
        }
        a.monic(p)
    }

    pub fn eval(&self, x: u32, p: u32) -> u32 {
        self.0.iter().rev().fold(0u64, |acc, c| (acc * x as u64 + *c as u64) % p as u64) as u32
    }

    pub fn powmod(&self, mut e: u128, modulus: &Poly, p: u32) -> Poly {
        let mut result = Poly::one().rem(modulus, p);
        let mut base = self.rem(modulus, p);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, p).rem(modulus, p);
            }
            base = base.mul(&base, p).rem(modulus, p);
            e >>= 1;
        }
        result
    }

    /// Multiplicity of the monic irreducible `pi` in `self` (self nonzero).
    pub fn valuation(&self, pi: &Poly, p: u32) -> u32 {
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(pi, p);
            if !r.is_zero() || cur.is_zero() {
                return v;
            }
            v += 1;
            cur = q;
        }
    }

    /// Factorisation into (leading coefficient, [(monic irreducible, multiplicity)])
    /// by trial division, irreducibles ordered by (degree, coefficients).
    pub fn factor(&self, p: u32) -> (u32, Vec<(Poly, u32)>) {
        let lead = self.leading();
        let mut rest = self.monic(p);
        let mut out = Vec::new();
        let mut d = 1usize;
        while rest.degree().unwrap_or(0) >= 2 * d {
            for cand in monic_of_degree(d, p) {
                let m = rest.valuation(&cand, p);
                if m > 0 {
                    for _ in 0..m {
                        rest = rest.divrem(&cand, p).0;
                    }
                    out.push((cand, m));
                }
            }
            d += 1;
        }
        if rest.degree().unwrap_or(0) > 0 {
            out.push((rest, 1));
        }
        out.sort_by(|a, b| cmp_poly(&a.0, &b.0));
        (lead, out)
    }

    pub fn is_irreducible(&self, p: u32) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(_) => {
                let (_, f) = self.factor(p);
                f.len() == 1 && f[0].1 == 1
            }
        }
    }

    pub fn format(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        terms.join("+")
    }
}

/// Order polynomials by degree, then coefficient vector from the top.
pub fn cmp_poly(a: &Poly, b: &Poly) -> Ordering {
    a.0.len().cmp(&b.0.len()).then_with(|| a.0.iter().rev().cmp(b.0.iter().rev()))
}

/// All monic polynomials of degree `d` over F_p, in a fixed order.
pub fn monic_of_degree(d: usize, p: u32) -> impl Iterator<Item = Poly> {
    let count = (p as u64).pow(d as u32);
    (0..count).map(move |mut code| {
        let mut v = Vec::with_capacity(d + 1);
        for _ in 0..d {
            v.push((code % p as u64) as u32);
            code /= p as u64;
        }
        v.push(1);
        Poly(v)
    })
}

/// All polynomials of degree ≤ `d` over F_p (including zero), in a fixed order.
pub fn polys_up_to_degree(d: usize, p: u32) -> impl Iterator<Item = Poly> {
    let count = (p as u64).pow(d as u32 + 1);
    (0..count).map(move |mut code| {
        let mut v = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            v.push((code % p as u64) as u32);
            code /= p as u64;
        }
        Poly(v).trimmed()
    })
}

pub(crate) fn inverse_mod_p(a: u32, p: u32) -> u32 {
    inv_mod(a, p)
}
