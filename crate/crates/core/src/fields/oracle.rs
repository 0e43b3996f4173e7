//! The isotropy oracle: witnesses, anisotropy certificates, or an honest
//! `Undecided` when an infinite field leaves the configured search bounds.

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::local::{function_isotropic, function_local_index, function_relevant_places};
use super::local::{rational_isotropic, rational_local_index, rational_relevant_places};
use super::poly::{polys_up_to_degree, Poly};
use super::ratfunc::RatFunc;
use super::rational::square_free_decomposition;
use super::{poly_is_square, poly_sqrt, Elem, Field, FieldKind, Place};
use crate::error::{Error, Result};
use crate::forms::QuadraticForm;
use crate::linalg;

/// Why a form has no nontrivial zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum AnisotropyCertificate {
    /// Every projective point was evaluated (finite fields), or dimension 0.
    Exhausted,
    /// A one-dimensional nonsingular form.
    OneDimensional,
    /// Positive or negative definite over ℝ.
    DefiniteSignature,
    /// Anisotropic over the completion at `place` (invariant computation).
    LocalObstruction { place: Place },
    /// Both Springer residue forms anisotropic at `place`.
    ResidueForms { place: Place },
    /// Binary form in characteristic 2 whose Arf class is nontrivial.
    ArtinSchreier,
    /// No zero with polynomial coordinates of degree ≤ `degree` in the
    /// normalized basis (semi-decision over F_2(t)).
    DegreeBound { degree: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsotropyOutcome {
    Witness(Vec<Elem>),
    Anisotropic(AnisotropyCertificate),
    Undecided,
}

impl IsotropyOutcome {
    pub fn is_witness(&self) -> bool {
        matches!(self, IsotropyOutcome::Witness(_))
    }
}

/// Finds a nonzero isotropic vector or certifies anisotropy.
pub fn isotropy_oracle(q: &QuadraticForm) -> Result<IsotropyOutcome> {
    q.require_nonsingular()?;
    let f = q.field();
    if q.dim() == 0 {
        return Ok(IsotropyOutcome::Anisotropic(AnisotropyCertificate::Exhausted));
    }
    let out = match f.kind() {
        FieldKind::Finite { .. } => finite_oracle(q)?,
        FieldKind::Rationals => rational_oracle(q)?,
        FieldKind::RationalFunctions { p } if p != 2 => function_oracle(q, p)?,
        FieldKind::RationalFunctions { .. } => char_two_function_oracle(q)?,
    };
    if let IsotropyOutcome::Witness(x) = &out {
        if linalg::is_zero_vec(f, x) || !f.is_zero(&q.eval(x)) {
            return Err(Error::InternalInconsistency("isotropy witness failed re-verification".into()));
        }
    }
    Ok(out)
}

/// Isotropy as a yes/no answer, using local-global invariants where they
/// decide more than the witness search does.
pub fn decide_isotropic(q: &QuadraticForm) -> Result<Option<bool>> {
    q.require_nonsingular()?;
    let f = q.field();
    match f.kind() {
        FieldKind::Rationals => {
            let (d, _) = q.diagonalize()?;
            let d: Vec<BigRational> = d.iter().map(|e| f.rat(e).expect("rational")).collect();
            Ok(Some(rational_isotropic(&d)?.0))
        }
        FieldKind::RationalFunctions { p } if p != 2 => {
            let (d, _) = q.diagonalize()?;
            Ok(Some(function_isotropic(&as_ratfuncs(&d), p)?.0))
        }
        _ => Ok(match isotropy_oracle(q)? {
            IsotropyOutcome::Witness(_) => Some(true),
            IsotropyOutcome::Anisotropic(_) => Some(false),
            IsotropyOutcome::Undecided => None,
        }),
    }
}

pub(crate) fn as_ratfuncs(d: &[Elem]) -> Vec<RatFunc> {
    d.iter()
        .map(|e| match e {
            Elem::Fun(r) => r.clone(),
            _ => panic!("expected a rational function"),
        })
        .collect()
}

fn embed(f: &Field, t: &linalg::Matrix, y: &[Elem]) -> Vec<Elem> {
    linalg::mat_vec(f, t, y)
}

// ---------------------------------------------------------------- finite fields

/// Root of A x² + B x + C = 0 over a finite field.
fn solve_quadratic(f: &Field, a: &Elem, b: &Elem, c: &Elem) -> Option<Elem> {
    if f.is_zero(a) {
        if f.is_zero(b) {
            return f.is_zero(c).then(|| f.zero());
        }
        return Some(f.neg(&f.div(c, b).ok()?));
    }
    if f.characteristic() != 2 {
        let disc = f.sub(&f.mul(b, b), &f.mul(&f.from_i64(4), &f.mul(a, c)));
        let s = f.sqrt(&disc)?;
        let two_a = f.mul(&f.from_i64(2), a);
        return f.div(&f.sub(&s, b), &two_a).ok();
    }
    if f.is_zero(b) {
        return f.sqrt(&f.div(c, a).ok()?);
    }
    // x = (B/A)·y with y² + y = AC/B²
    let rhs = f.div(&f.mul(a, c), &f.mul(b, b)).ok()?;
    let y = f.artin_schreier_root(&rhs)??;
    Some(f.mul(&f.div(b, a).ok()?, &y))
}

fn finite_oracle(q: &QuadraticForm) -> Result<IsotropyOutcome> {
    let f = q.field();
    let n = q.dim();
    let m = q.coeffs();
    let els = f.elements().expect("finite");
    if n <= 2 {
        // all projective points: (1,0) and (x,1)
        let mut pts: Vec<Vec<Elem>> = Vec::new();
        if n == 1 {
            pts.push(vec![f.one()]);
        } else {
            pts.push(vec![f.one(), f.zero()]);
            pts.extend(els.iter().map(|x| vec![x.clone(), f.one()]));
        }
        for x in pts {
            if f.is_zero(&q.eval(&x)) {
                return Ok(IsotropyOutcome::Witness(x));
            }
        }
        let cert = if n == 1 { AnisotropyCertificate::OneDimensional } else { AnisotropyCertificate::Exhausted };
        return Ok(IsotropyOutcome::Anisotropic(cert));
    }
    // any ternary quadratic form over a finite field has a nontrivial zero
    // (Chevalley–Warning): search the first three coordinates
    let lift = |x: [Elem; 3]| {
        let mut v = vec![f.zero(); n];
        v[..3].clone_from_slice(&x);
        v
    };
    for x1 in &els {
        // q(x1, x2, 1) as a quadratic in x2
        let a = m[1][1].clone();
        let b = f.add(&f.mul(&m[0][1], x1), &m[1][2]);
        let c = f.add(&f.add(&f.mul(&m[0][0], &f.mul(x1, x1)), &f.mul(&m[0][2], x1)), &m[2][2]);
        if let Some(x2) = solve_quadratic(f, &a, &b, &c) {
            return Ok(IsotropyOutcome::Witness(lift([x1.clone(), x2, f.one()])));
        }
    }
    if let Some(x1) = solve_quadratic(f, &m[0][0], &m[0][1], &m[1][1]) {
        return Ok(IsotropyOutcome::Witness(lift([x1, f.one(), f.zero()])));
    }
    Ok(IsotropyOutcome::Witness(lift([f.one(), f.zero(), f.zero()])))
}

// ------------------------------------------------------------------ rationals

fn rational_oracle(q: &QuadraticForm) -> Result<IsotropyOutcome> {
    let f = q.field();
    let (d, t) = q.diagonalize()?;
    let diag: Vec<BigRational> = d.iter().map(|e| f.rat(e).expect("rational")).collect();
    let (iso, obstruction) = rational_isotropic(&diag)?;
    if !iso {
        let n = diag.len();
        if n == 1 {
            return Ok(IsotropyOutcome::Anisotropic(AnisotropyCertificate::OneDimensional));
        }
        let pos = diag.iter().filter(|a| a.is_positive()).count();
        if pos == 0 || pos == n {
            return Ok(IsotropyOutcome::Anisotropic(AnisotropyCertificate::DefiniteSignature));
        }
        let place = match obstruction {
            Some(p) => p,
            None => {
                let mut found = None;
                for p in rational_relevant_places(&diag)? {
                    if rational_local_index(&diag, &p)? == 0 {
                        found = Some(p);
                        break;
                    }
                }
                found.ok_or_else(|| {
                    Error::InternalInconsistency("anisotropic binary form without local obstruction".into())
                })?
            }
        };
        return Ok(IsotropyOutcome::Anisotropic(AnisotropyCertificate::LocalObstruction { place }));
    }
    // a_i = s_i k_i² with s_i square-free; solve Σ s_i y_i² = 0, x_i = y_i / k_i
    let mut s = Vec::with_capacity(diag.len());
    let mut k = Vec::with_capacity(diag.len());
    for a in &diag {
        let (si, ki) = square_free_decomposition(a)?;
        s.push(si);
        k.push(ki);
    }
    let height = f.bounds().search_height;
    let Some(y) = rational_zero(&s, height)? else {
        return Ok(IsotropyOutcome::Undecided);
    };
    let x: Vec<Elem> = y.iter().zip(&k).map(|(yi, ki)| Elem::Rat(yi / ki)).collect();
    Ok(IsotropyOutcome::Witness(embed(f, &t, &x)))
}

fn to_rats(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Nontrivial zero of Σ s_i y_i² for square-free integers s_i, assumed
/// isotropic.
fn rational_zero(s: &[BigInt], height: u64) -> Result<Option<Vec<BigRational>>> {
    let n = s.len();
    let zero = BigRational::zero();
    let one = BigRational::one();
    for i in 0..n {
        for j in i + 1..n {
            if s[i] == -s[j].clone() {
                let mut v = vec![zero.clone(); n];
                v[i] = one.clone();
                v[j] = one.clone();
                return Ok(Some(v));
            }
        }
    }
    if n < 3 {
        return Ok(None);
    }
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                let tri = [s[i].clone(), s[j].clone(), s[l].clone()];
                if !rational_isotropic(&to_rats(&tri))?.0 {
                    continue;
                }
                if let Some(sol) = ternary_zero(&tri, height) {
                    let mut v = vec![zero.clone(); n];
                    v[i] = sol[0].clone();
                    v[j] = sol[1].clone();
                    v[l] = sol[2].clone();
                    return Ok(Some(v));
                }
            }
        }
    }
    if n == 3 {
        return Ok(None);
    }
    // ⟨s0,s1⟩ ⊥ rest: find τ with ⟨s0,s1,−τ⟩ and rest ⊥ ⟨τ⟩ isotropic
    let rest: Vec<BigInt> = s[2..].to_vec();
    for tau in square_free_candidates(height) {
        let left = [s[0].clone(), s[1].clone(), -tau.clone()];
        if !rational_isotropic(&to_rats(&left))?.0 {
            continue;
        }
        let mut right = rest.clone();
        right.push(tau.clone());
        if !rational_isotropic(&to_rats(&right))?.0 {
            continue;
        }
        let Some(l) = ternary_zero(&left, height) else { continue };
        let Some(r) = rational_zero(&right, height)? else { continue };
        let w = &l[2];
        let z = &r[r.len() - 1];
        let mut v = vec![zero.clone(); n];
        if z.is_zero() {
            v[2..].clone_from_slice(&r[..n - 2]);
        } else if w.is_zero() {
            v[0] = l[0].clone();
            v[1] = l[1].clone();
        } else {
            v[0] = &l[0] / w;
            v[1] = &l[1] / w;
            for (idx, val) in r[..n - 2].iter().enumerate() {
                v[2 + idx] = val / z;
            }
        }
        return Ok(Some(v));
    }
    Ok(None)
}

fn square_free_candidates(height: u64) -> impl Iterator<Item = BigInt> {
    (1..=height as i64)
        .filter(|m| {
            let mut x = *m;
            let mut p = 2;
            while p * p <= x {
                if x % (p * p) == 0 {
                    return false;
                }
                if x % p == 0 {
                    x /= p;
                }
                p += 1;
            }
            true
        })
        .flat_map(|m| [BigInt::from(m), BigInt::from(-m)])
}

fn isqrt_exact(x: i128) -> Option<i128> {
    if x < 0 {
        return None;
    }
    let r = x.sqrt();
    (r * r == x).then_some(r)
}

/// Brute-force zero of a x² + b y² + c z² inside Holzer-type boxes, widened
/// up to `height` when the coefficients are not in normal form.
fn ternary_zero(coef: &[BigInt; 3], height: u64) -> Option<Vec<BigRational>> {
    let c: Vec<i128> = coef.iter().map(|x| x.to_i128()).collect::<Option<_>>()?;
    if c.iter().any(|x| x.abs() > 1 << 40) {
        return None;
    }
    let bound = |i: usize| {
        let (j, k) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        ((c[j] * c[k]).abs().sqrt() + 1).max(2)
    };
    let mut limit: i128 = [0, 1, 2].iter().map(|&i| bound(i)).max().unwrap_or(2);
    let cap = (height as i128).max(limit);
    loop {
        // iterate the two coordinates with the smallest boxes, solve the third
        let mut order = [0usize, 1, 2];
        order.sort_by_key(|&i| bound(i).min(limit));
        let (u, v, w) = (order[0], order[1], order[2]);
        let (bu, bv) = (bound(u).min(limit), bound(v).min(limit));
        for xu in 0..=bu {
            for xv in 0..=bv {
                if xu == 0 && xv == 0 {
                    continue;
                }
                let partial = c[u] * xu * xu + c[v] * xv * xv;
                if partial % c[w] != 0 {
                    continue;
                }
                if let Some(xw) = isqrt_exact(-partial / c[w]) {
                    let mut sol = [0i128; 3];
                    sol[u] = xu;
                    sol[v] = xv;
                    sol[w] = xw;
                    return Some(sol.iter().map(|x| BigRational::from_integer(BigInt::from(*x))).collect());
                }
            }
        }
        if limit >= cap {
            return None;
        }
        limit = (limit * 2).min(cap);
    }
}

// ------------------------------------------------------- F_p(t), p odd

fn function_oracle(q: &QuadraticForm, p: u32) -> Result<IsotropyOutcome> {
    let f = q.field();
    let (d, t) = q.diagonalize()?;
    let diag = as_ratfuncs(&d);
    let (iso, obstruction) = function_isotropic(&diag, p)?;
    if !iso {
        if diag.len() == 1 {
            return Ok(IsotropyOutcome::Anisotropic(AnisotropyCertificate::OneDimensional));
        }
        let place = match obstruction {
            Some(pl) => pl,
            None => {
                let mut found = None;
                for pl in function_relevant_places(&diag, p) {
                    if function_local_index(&diag, p, &pl)? == 0 {
                        found = Some(pl);
                        break;
                    }
                }
                found.ok_or_else(|| {
                    Error::InternalInconsistency("anisotropic binary form without residue obstruction".into())
                })?
            }
        };
        return Ok(IsotropyOutcome::Anisotropic(AnisotropyCertificate::ResidueForms { place }));
    }
    // clear denominators: a·d² = n·d is a polynomial and x_i = d_i·y_i
    let polys: Vec<Poly> = diag.iter().map(|a| a.num.mul(&a.den, p)).collect();
    let degree = f.bounds().search_degree as usize;
    let Some(y) = function_zero(&polys, p, degree)? else {
        return Ok(IsotropyOutcome::Undecided);
    };
    let x: Vec<Elem> =
        y.iter().zip(&diag).map(|(yi, a)| Elem::Fun(yi.mul(&RatFunc::from_poly(a.den.clone()), p))).collect();
    Ok(IsotropyOutcome::Witness(embed(f, &t, &x)))
}

/// Ratio −(a x² + b y²)/c as a square root in F_p(t), if it is a square.
fn function_square_ratio(num: &Poly, c: &Poly, p: u32) -> Option<RatFunc> {
    let prod = num.neg(p).mul(c, p);
    if !poly_is_square(&prod, p) {
        return None;
    }
    let r = poly_sqrt(&prod, p)?;
    RatFunc::new(r, c.clone(), p)
}

fn function_zero(a: &[Poly], p: u32, degree: usize) -> Result<Option<Vec<RatFunc>>> {
    let n = a.len();
    let zero = RatFunc::zero();
    let one = RatFunc::one();
    for i in 0..n {
        for j in i + 1..n {
            if let Some(x) = function_square_ratio(&a[j], &a[i], p) {
                let mut v = vec![zero.clone(); n];
                v[i] = x;
                v[j] = one.clone();
                return Ok(Some(v));
            }
        }
    }
    if n < 3 {
        return Ok(None);
    }
    let rf = |x: &[Poly]| -> Vec<RatFunc> { x.iter().map(|g| RatFunc::from_poly(g.clone())).collect() };
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                let tri = [a[i].clone(), a[j].clone(), a[l].clone()];
                if !function_isotropic(&rf(&tri), p)?.0 {
                    continue;
                }
                if let Some(sol) = function_ternary(&tri, p, degree) {
                    let mut v = vec![zero.clone(); n];
                    v[i] = sol[0].clone();
                    v[j] = sol[1].clone();
                    v[l] = sol[2].clone();
                    return Ok(Some(v));
                }
            }
        }
    }
    if n == 3 {
        return Ok(None);
    }
    let rest = a[2..].to_vec();
    for tau in polys_up_to_degree(degree, p).filter(|g| !g.is_zero()) {
        let left = [a[0].clone(), a[1].clone(), tau.neg(p)];
        if !function_isotropic(&rf(&left), p)?.0 {
            continue;
        }
        let mut right = rest.clone();
        right.push(tau.clone());
        if !function_isotropic(&rf(&right), p)?.0 {
            continue;
        }
        let Some(l) = function_ternary(&left, p, degree) else { continue };
        let Some(r) = function_zero(&right, p, degree)? else { continue };
        let w = &l[2];
        let z = &r[r.len() - 1];
        let mut v = vec![zero.clone(); n];
        if z.is_zero() {
            v[2..].clone_from_slice(&r[..n - 2]);
        } else if w.is_zero() {
            v[0] = l[0].clone();
            v[1] = l[1].clone();
        } else {
            let winv = w.inv(p).expect("nonzero");
            let zinv = z.inv(p).expect("nonzero");
            v[0] = l[0].mul(&winv, p);
            v[1] = l[1].mul(&winv, p);
            for (idx, val) in r[..n - 2].iter().enumerate() {
                v[2 + idx] = val.mul(&zinv, p);
            }
        }
        return Ok(Some(v));
    }
    Ok(None)
}

fn function_ternary(c: &[Poly; 3], p: u32, degree: usize) -> Option<Vec<RatFunc>> {
    let cands: Vec<Poly> = polys_up_to_degree(degree, p).collect();
    for x in &cands {
        for y in &cands {
            if x.is_zero() && y.is_zero() {
                continue;
            }
            let partial = c[0].mul(&x.mul(x, p), p).add(&c[1].mul(&y.mul(y, p), p), p);
            if let Some(z) = function_square_ratio(&partial, &c[2], p) {
                return Some(vec![RatFunc::from_poly(x.clone()), RatFunc::from_poly(y.clone()), z]);
            }
        }
    }
    None
}

// ------------------------------------------------------------ F_2(t)

/// Symplectic normalization of a nonsingular form in characteristic 2:
/// returns blocks (q(e_i), q(f_i)) with b(e_i, f_i) = 1 and the basis
/// (e_1, f_1, e_2, f_2, …) as columns.
pub fn symplectic_blocks(q: &QuadraticForm) -> Result<(Vec<(Elem, Elem)>, linalg::Matrix)> {
    let f = q.field();
    q.require_nonsingular()?;
    if f.characteristic() != 2 {
        return Err(Error::UnsupportedField("symplectic blocks need characteristic 2".into()));
    }
    let mut basis = linalg::identity(f, q.dim());
    let mut blocks = Vec::new();
    let mut cols = Vec::new();
    while !basis.is_empty() {
        let x = basis[0].clone();
        let Some(idx) = (1..basis.len()).find(|&i| !f.is_zero(&q.polar(&x, &basis[i]))) else {
            return Err(Error::SingularForm);
        };
        let c = f.inv(&q.polar(&x, &basis[idx]))?;
        let y: Vec<_> = basis[idx].iter().map(|v| f.mul(v, &c)).collect();
        let mut rest = Vec::new();
        for (i, w) in basis.iter().enumerate() {
            if i == 0 || i == idx {
                continue;
            }
            let by = q.polar(w, &y);
            let bx = q.polar(w, &x);
            rest.push(
                w.iter()
                    .zip(&x)
                    .zip(&y)
                    .map(|((wi, xi), yi)| f.sub(&f.sub(wi, &f.mul(&by, xi)), &f.mul(&bx, yi)))
                    .collect(),
            );
        }
        blocks.push((q.eval(&x), q.eval(&y)));
        cols.push(x);
        cols.push(y);
        basis = rest;
    }
    Ok((blocks, linalg::transpose(&cols)))
}

fn char_two_function_oracle(q: &QuadraticForm) -> Result<IsotropyOutcome> {
    let f = q.field();
    let (blocks, t) = symplectic_blocks(q)?;
    let n = q.dim();
    // binary blocks [a, b]: a x² + xy + b y² is isotropic iff ab ∈ ℘(F)
    for (i, (a, b)) in blocks.iter().enumerate() {
        let mut y = vec![f.zero(); n];
        if f.is_zero(a) {
            y[2 * i] = f.one();
            return Ok(IsotropyOutcome::Witness(embed(f, &t, &y)));
        }
        if let Some(Some(u)) = f.artin_schreier_root(&f.mul(a, b)) {
            // x = u/a·y: a(u/a)² + u/a + b = (u² + u + ab)/a = 0
            y[2 * i] = f.div(&u, a)?;
            y[2 * i + 1] = f.one();
            return Ok(IsotropyOutcome::Witness(embed(f, &t, &y)));
        }
    }
    if n == 2 {
        let (a, b) = &blocks[0];
        if f.artin_schreier_root(&f.mul(a, b)) == Some(None) {
            return Ok(IsotropyOutcome::Anisotropic(AnisotropyCertificate::ArtinSchreier));
        }
    }
    let normal = q.transform(&t);
    // scale to polynomial coefficients, evaluate over F_2[t]
    let mut den = Poly::one();
    for row in normal.coeffs() {
        for e in row {
            if let Elem::Fun(r) = e {
                let g = den.gcd(&r.den, 2);
                den = den.mul(&r.den.divrem(&g, 2).0, 2);
            }
        }
    }
    let pc: Vec<Vec<Poly>> = normal
        .coeffs()
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| match e {
                    Elem::Fun(r) => r.num.mul(&den.divrem(&r.den, 2).0, 2),
                    _ => unreachable!(),
                })
                .collect()
        })
        .collect();
    let degree = f.bounds().search_degree as usize;
    let free = n.min(4);
    let cands: Vec<Poly> = polys_up_to_degree(degree, 2).collect();
    let total = cands.len().pow(free as u32);
    for code in 1..total {
        let mut idx = code;
        let mut x = vec![Poly::zero(); n];
        for xi in x.iter_mut().take(free) {
            *xi = cands[idx % cands.len()].clone();
            idx /= cands.len();
        }
        let mut acc = Poly::zero();
        for i in 0..free {
            for j in i..free {
                if !pc[i][j].is_zero() && !x[i].is_zero() && !x[j].is_zero() {
                    acc = acc.add(&pc[i][j].mul(&x[i].mul(&x[j], 2), 2), 2);
                }
            }
        }
        if acc.is_zero() {
            let y: Vec<Elem> = x.into_iter().map(|g| Elem::Fun(RatFunc::from_poly(g))).collect();
            return Ok(IsotropyOutcome::Witness(embed(f, &t, &y)));
        }
    }
    if n <= 4 {
        Ok(IsotropyOutcome::Anisotropic(AnisotropyCertificate::DegreeBound { degree: degree as u32 }))
    } else {
        Ok(IsotropyOutcome::Undecided)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(f: &Field, v: &[i64]) -> QuadraticForm {
        QuadraticForm::diagonal(f, &v.iter().map(|x| f.from_i64(*x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn f3_examples() {
        let f = Field::gf(3).unwrap();
        assert_eq!(
            isotropy_oracle(&diag(&f, &[1, 1])).unwrap(),
            IsotropyOutcome::Anisotropic(AnisotropyCertificate::Exhausted)
        );
        let IsotropyOutcome::Witness(w) = isotropy_oracle(&diag(&f, &[1, 1, 1])).unwrap() else {
            panic!("expected a witness")
        };
        assert!(f.is_zero(&diag(&f, &[1, 1, 1]).eval(&w)));
    }

    #[test]
    fn rational_examples() {
        let f = Field::rationals();
        assert_eq!(
            isotropy_oracle(&diag(&f, &[1, 1, 1, 1])).unwrap(),
            IsotropyOutcome::Anisotropic(AnisotropyCertificate::DefiniteSignature)
        );
        for v in [vec![1, 1, -2], vec![3, 5, -7, -11], vec![1, 2, 3, -5, -7], vec![2, 3, -5]] {
            let q = diag(&f, &v);
            assert!(isotropy_oracle(&q).unwrap().is_witness(), "{v:?}");
        }
        // ⟨1,1,−3⟩ is anisotropic (locally at 3)
        assert!(matches!(
            isotropy_oracle(&diag(&f, &[1, 1, -3])).unwrap(),
            IsotropyOutcome::Anisotropic(AnisotropyCertificate::LocalObstruction { .. })
        ));
    }

    #[test]
    fn singular_rejected() {
        let f = Field::gf(2).unwrap();
        assert_eq!(isotropy_oracle(&diag(&f, &[1])), Err(Error::SingularForm));
    }

    #[test]
    fn char_two_function_field() {
        let f = Field::rational_functions(2).unwrap();
        let t = f.generator().unwrap();
        let binq = |a: &Elem, c: &Elem| {
            QuadraticForm::new(&f, vec![vec![a.clone(), a.clone()], vec![f.zero(), f.mul(a, c)]]).unwrap()
        };
        // x² + xy + t y² is anisotropic: t is not in ℘(F)
        assert_eq!(
            isotropy_oracle(&binq(&f.one(), &t)).unwrap(),
            IsotropyOutcome::Anisotropic(AnisotropyCertificate::ArtinSchreier)
        );
        // x² + xy + (t² + t) y² is isotropic
        assert!(isotropy_oracle(&binq(&f.one(), &f.add(&f.mul(&t, &t), &t))).unwrap().is_witness());
    }
}
