//! Reduced rational functions n(t)/d(t) over F_p with monic denominator.

use super::poly::{inverse_mod_p, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly, p: u32) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::zero());
        }
        let g = num.gcd(&den, p);
        let num = num.divrem(&g, p).0;
        let den = den.divrem(&g, p).0;
        let lc = inverse_mod_p(den.leading(), p);
        Some(RatFunc { num: num.scale(lc, p), den: den.scale(lc, p) })
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }
    pub fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }
    pub fn from_poly(num: Poly) -> Self {
        RatFunc { num, den: Poly::one() }
    }
    pub fn t() -> Self {
        Self::from_poly(Poly(vec![0, 1]))
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self, p: u32) -> Self {
        let num = self.num.mul(&o.den, p).add(&o.num.mul(&self.den, p), p);
        Self::new(num, self.den.mul(&o.den, p), p).expect("nonzero denominator")
    }
    pub fn neg(&self, p: u32) -> Self {
        RatFunc { num: self.num.neg(p), den: self.den.clone() }
    }
    pub fn sub(&self, o: &Self, p: u32) -> Self {
        self.add(&o.neg(p), p)
    }
    pub fn mul(&self, o: &Self, p: u32) -> Self {
        Self::new(self.num.mul(&o.num, p), self.den.mul(&o.den, p), p).expect("nonzero denominator")
    }
    pub fn inv(&self, p: u32) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Self::new(self.den.clone(), self.num.clone(), p)
    }

    /// Valuation at the finite place of the monic irreducible `pi`.
    pub fn valuation(&self, pi: &Poly, p: u32) -> i64 {
        self.num.valuation(pi, p) as i64 - self.den.valuation(pi, p) as i64
    }

    /// Valuation at the infinite place (uniformiser 1/t): deg(den) − deg(num).
    pub fn valuation_infinity(&self) -> i64 {
        self.den.degree().unwrap_or(0) as i64 - self.num.degree().unwrap_or(0) as i64
    }

    pub fn format(&self) -> String {
        let n = self.num.format("t");
        if self.den == Poly::one() {
            return n;
        }
        let wrap = |s: String, poly: &Poly| {
            if poly.0.iter().filter(|c| **c != 0).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(n, &self.num), wrap(self.den.format("t"), &self.den))
    }
}
