//! Quadratic étale extensions and quaternion algebras in the
//! characteristic-free presentation u² = u + a (étale part), v² = b,
//! vu = v − uv, with their canonical involutions, reduced trace and norm,
//! and norm forms.

mod rewrite;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{Elem, Field};
use crate::forms::{isometric, witt_index, QuadraticForm};
use crate::linalg::{self, Matrix};

pub use rewrite::quaternion_table;

/// Presentation of a coefficient algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    /// The base field with the identity involution.
    Base,
    /// K = F(u), u² = u + a, 1 + 4a ≠ 0, τ(u) = 1 − u.
    EtaleField { a: Elem },
    /// K = F × F with u = (0, 1), so u² = u and τ swaps the factors.
    SplitEtale,
    /// Basis (1, u, v, w = uv), u² = u + a, v² = b.
    Quaternion { a: Elem, b: Elem },
}

#[derive(Debug)]
struct Inner {
    field: Field,
    shape: Shape,
    /// table[i][j] = coordinates of e_i·e_j.
    table: Vec<Vec<Vec<Elem>>>,
    /// Involution as a matrix acting on coordinate columns.
    involution: Matrix,
}

/// A coefficient algebra D with its canonical involution θ: identity on F,
/// τ on étale algebras, γ on quaternions.
#[derive(Clone)]
pub struct Algebra {
    inner: Arc<Inner>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.inner.field == other.inner.field && self.inner.shape == other.inner.shape
    }
}
impl Eq for Algebra {}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn check_etale_parameter(f: &Field, a: &Elem) -> Result<()> {
    let d = f.add(&f.one(), &f.mul(&f.from_i64(4), a));
    if f.is_zero(&d) {
        return Err(Error::DegenerateParameters("1 + 4a = 0".into()));
    }
    Ok(())
}

fn etale_table(f: &Field, a: &Elem) -> Vec<Vec<Vec<Elem>>> {
    let (z, o) = (f.zero(), f.one());
    vec![
        vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
        vec![vec![z.clone(), o.clone()], vec![a.clone(), o.clone()]],
    ]
}

impl Algebra {
    pub fn base(field: &Field) -> Self {
        Self::build(field, Shape::Base, vec![vec![vec![field.one()]]], vec![vec![field.one()]])
            .expect("trivially associative")
    }

    pub fn etale(field: &Field, a: &Elem) -> Result<Self> {
        check_etale_parameter(field, a)?;
        let f = field;
        // τ(1) = 1, τ(u) = 1 − u
        let inv = vec![vec![f.one(), f.one()], vec![f.zero(), f.from_i64(-1)]];
        Self::build(f, Shape::EtaleField { a: a.clone() }, etale_table(f, a), inv)
    }

    pub fn split_etale(field: &Field) -> Self {
        let f = field;
        let inv = vec![vec![f.one(), f.one()], vec![f.zero(), f.from_i64(-1)]];
        Self::build(f, Shape::SplitEtale, etale_table(f, &f.zero()), inv).expect("associative")
    }

    pub fn quaternion(field: &Field, a: &Elem, b: &Elem) -> Result<Self> {
        let f = field;
        check_etale_parameter(f, a)?;
        if f.is_zero(b) {
            return Err(Error::DegenerateParameters("b = 0".into()));
        }
        let table = quaternion_table(f, a, b);
        // γ(u) = 1 − u, γ(v) = −v, and γ(w) = γ(v)γ(u) by anti-multiplicativity
        let gu = vec![f.one(), f.from_i64(-1), f.zero(), f.zero()];
        let gv = vec![f.zero(), f.zero(), f.from_i64(-1), f.zero()];
        let gw = mul_coords(f, &table, &gv, &gu);
        let cols = vec![vec![f.one(), f.zero(), f.zero(), f.zero()], gu, gv, gw];
        let inv = linalg::transpose(&cols);
        Self::build(f, Shape::Quaternion { a: a.clone(), b: b.clone() }, table, inv)
    }

    fn build(field: &Field, shape: Shape, table: Vec<Vec<Vec<Elem>>>, involution: Matrix) -> Result<Self> {
        let alg = Self { inner: Arc::new(Inner { field: field.clone(), shape, table, involution }) };
        alg.check_structure()?;
        Ok(alg)
    }

    /// Associativity on all basis triples, involutivity of θ and the
    /// anti-automorphism law on basis pairs.
    fn check_structure(&self) -> Result<()> {
        let n = self.dim();
        let basis: Vec<AlgebraElement> = (0..n).map(|i| self.basis(i)).collect();
        for x in &basis {
            for y in &basis {
                for z in &basis {
                    if x.mul(y)?.mul(z)? != x.mul(&y.mul(z)?)? {
                        return Err(Error::InternalInconsistency(format!(
                            "multiplication table of {} is not associative",
                            self.name()
                        )));
                    }
                }
                if x.mul(y)?.conj() != y.conj().mul(&x.conj())? {
                    return Err(Error::InternalInconsistency("involution is not an anti-automorphism".into()));
                }
            }
            if x.conj().conj() != *x {
                return Err(Error::InternalInconsistency("involution does not square to 1".into()));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &Field {
        &self.inner.field
    }
    pub fn shape(&self) -> &Shape {
        &self.inner.shape
    }
    pub fn dim(&self) -> usize {
        self.inner.table.len()
    }
    pub fn table(&self) -> &Vec<Vec<Vec<Elem>>> {
        &self.inner.table
    }
    pub fn involution_matrix(&self) -> &Matrix {
        &self.inner.involution
    }

    pub fn is_quaternion(&self) -> bool {
        matches!(self.inner.shape, Shape::Quaternion { .. })
    }
    pub fn is_etale(&self) -> bool {
        matches!(self.inner.shape, Shape::EtaleField { .. } | Shape::SplitEtale)
    }
    pub fn is_base(&self) -> bool {
        matches!(self.inner.shape, Shape::Base)
    }

    pub fn name(&self) -> String {
        let f = self.field();
        match &self.inner.shape {
            Shape::Base => f.name(),
            Shape::EtaleField { a } => format!("etale(a={})@{}", f.format(a), f.name()),
            Shape::SplitEtale => format!("etale(split)@{}", f.name()),
            Shape::Quaternion { a, b } => format!("quat(a={},b={})@{}", f.format(a), f.format(b), f.name()),
        }
    }

    pub fn element(&self, coords: Vec<Elem>) -> Result<AlgebraElement> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for an algebra of dimension {}",
                coords.len(),
                self.dim()
            )));
        }
        Ok(AlgebraElement { alg: self.clone(), coords })
    }

    pub fn basis(&self, i: usize) -> AlgebraElement {
        let f = self.field();
        let mut c = vec![f.zero(); self.dim()];
        c[i] = f.one();
        AlgebraElement { alg: self.clone(), coords: c }
    }

    pub fn scalar(&self, x: &Elem) -> AlgebraElement {
        let f = self.field();
        let mut c = vec![f.zero(); self.dim()];
        c[0] = x.clone();
        AlgebraElement { alg: self.clone(), coords: c }
    }

    pub fn zero(&self) -> AlgebraElement {
        self.scalar(&self.field().zero())
    }
    pub fn one(&self) -> AlgebraElement {
        self.scalar(&self.field().one())
    }

    /// An element with Trd = 1 (u for étale and quaternion algebras).
    pub fn trace_one(&self) -> Option<AlgebraElement> {
        match self.inner.shape {
            Shape::Base => None,
            _ => Some(self.basis(1)),
        }
    }

    /// The reduced norm x ↦ θ(x)x as a quadratic form on coordinates,
    /// expanded from the multiplication table.
    pub fn norm_form(&self) -> QuadraticForm {
        let f = self.field();
        let n = self.dim();
        let basis: Vec<AlgebraElement> = (0..n).map(|i| self.basis(i)).collect();
        let mut m = linalg::zeros(f, n, n);
        for i in 0..n {
            m[i][i] = basis[i].nrd().expect("norm lies in F");
            for j in i + 1..n {
                let s = basis[i].add(&basis[j]).expect("same algebra");
                let v = f.sub(&f.sub(&s.nrd().expect("norm lies in F"), &m[i][i]), &basis[j].nrd().expect("norm"));
                m[i][j] = v;
            }
        }
        QuadraticForm::new(f, m).expect("square matrix")
    }

    /// Split ⇔ the norm form is hyperbolic.
    pub fn is_split(&self) -> Result<bool> {
        if self.is_base() {
            return Ok(true);
        }
        Ok(2 * witt_index(&self.norm_form())? == self.dim())
    }

    /// Division ⇔ the norm form is anisotropic (a field, for étale algebras).
    pub fn is_division(&self) -> Result<bool> {
        if self.is_base() {
            return Ok(true);
        }
        Ok(witt_index(&self.norm_form())? == 0)
    }

    /// The étale subalgebra F(u) of a quaternion algebra.
    pub fn inner_etale(&self) -> Option<Result<Algebra>> {
        match &self.inner.shape {
            Shape::Quaternion { a, .. } => Some(Algebra::etale(self.field(), a)),
            _ => None,
        }
    }

    /// Checks the decomposition Nrd_Q ≅ N_K ⊥ (−b)·N_K.
    pub fn norm_form_decomposes(&self) -> Result<bool> {
        let Shape::Quaternion { b, .. } = &self.inner.shape else {
            return Ok(true);
        };
        let f = self.field();
        let nk = self.inner_etale().expect("quaternion")?.norm_form();
        let target = nk.orthogonal_sum(&nk.scale(&f.neg(b))?)?;
        isometric(&self.norm_form(), &target)
    }
}

pub fn make_quaternion(field: &Field, a: &Elem, b: &Elem) -> Result<Algebra> {
    Algebra::quaternion(field, a, b)
}

pub fn make_etale(field: &Field, a: &Elem) -> Result<Algebra> {
    Algebra::etale(field, a)
}

pub fn make_split_etale(field: &Field) -> Algebra {
    Algebra::split_etale(field)
}

pub fn canonical_involution(x: &AlgebraElement) -> AlgebraElement {
    x.conj()
}

/// A basis of Symd(D,θ) = {x + θ(x)} as coordinate vectors.
pub fn symd_basis(alg: &Algebra) -> Vec<Vec<Elem>> {
    let f = alg.field();
    let m = linalg::add(f, &linalg::identity(f, alg.dim()), alg.involution_matrix());
    let cols = linalg::transpose(&m);
    let mut out: Vec<Vec<Elem>> = Vec::new();
    for c in cols {
        out.push(c);
        if linalg::rank(f, &out) < out.len() {
            out.pop();
        }
    }
    out
}

/// A basis of the θ-fixed elements.
pub fn sym_basis(alg: &Algebra) -> Vec<Vec<Elem>> {
    let f = alg.field();
    let neg_id = linalg::scale(f, &f.from_i64(-1), &linalg::identity(f, alg.dim()));
    let m = linalg::add(f, alg.involution_matrix(), &neg_id);
    linalg::kernel(f, &m, alg.dim())
}

fn mul_coords(f: &Field, table: &[Vec<Vec<Elem>>], x: &[Elem], y: &[Elem]) -> Vec<Elem> {
    let n = table.len();
    let mut out = vec![f.zero(); n];
    for i in 0..n {
        if f.is_zero(&x[i]) {
            continue;
        }
        for j in 0..n {
            if f.is_zero(&y[j]) {
                continue;
            }
            let c = f.mul(&x[i], &y[j]);
            for k in 0..n {
                if !f.is_zero(&table[i][j][k]) {
                    out[k] = f.add(&out[k], &f.mul(&c, &table[i][j][k]));
                }
            }
        }
    }
    out
}

/// An element of a coefficient algebra, coordinates over its canonical basis.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    alg: Algebra,
    coords: Vec<Elem>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl AlgebraElement {
    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }
    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }
    fn field(&self) -> &Field {
        self.alg.field()
    }

    fn same(&self, other: &Self) -> Result<()> {
        if self.alg != other.alg {
            Err(Error::OwnerMismatch)
        } else {
            Ok(())
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        let f = self.field();
        Ok(Self {
            alg: self.alg.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| f.add(a, b)).collect(),
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        let f = self.field();
        Self { alg: self.alg.clone(), coords: self.coords.iter().map(|a| f.neg(a)).collect() }
    }

    pub fn scale(&self, c: &Elem) -> Self {
        let f = self.field();
        Self { alg: self.alg.clone(), coords: self.coords.iter().map(|a| f.mul(c, a)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        Ok(Self { alg: self.alg.clone(), coords: mul_coords(self.field(), self.alg.table(), &self.coords, &o.coords) })
    }

    /// θ(x): identity, τ, or γ.
    pub fn conj(&self) -> Self {
        Self {
            alg: self.alg.clone(),
            coords: linalg::mat_vec(self.field(), self.alg.involution_matrix(), &self.coords),
        }
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vec(self.field(), &self.coords)
    }

    /// Some(c) if the element is c·1.
    pub fn as_scalar(&self) -> Option<Elem> {
        let f = self.field();
        self.coords[1..].iter().all(|c| f.is_zero(c)).then(|| self.coords[0].clone())
    }

    /// Trd(x) = x + θ(x), which lies in F.
    pub fn trd(&self) -> Result<Elem> {
        let s = self.add(&self.conj())?;
        s.as_scalar().ok_or_else(|| Error::InternalInconsistency("reduced trace not central".into()))
    }

    /// Nrd(x) = θ(x)x, which lies in F.
    pub fn nrd(&self) -> Result<Elem> {
        let s = self.conj().mul(self)?;
        s.as_scalar().ok_or_else(|| Error::InternalInconsistency("reduced norm not central".into()))
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.nrd()?;
        let inv = self.field().inv(&n)?;
        Ok(self.conj().scale(&inv))
    }

    pub fn format(&self) -> String {
        let f = self.field();
        let names = ["1", "u", "v", "w"];
        if self.alg.is_base() {
            return f.format(&self.coords[0]);
        }
        let mut parts = Vec::new();
        for (c, name) in self.coords.iter().zip(names) {
            if f.is_zero(c) {
                continue;
            }
            let s = f.format(c);
            parts.push(if name == "1" {
                s
            } else if f.is_one(c) {
                name.to_string()
            } else {
                format!("({s})*{name}")
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{binary_quadratic, pfister_similarity};

    #[test]
    fn canonical_involution_on_generators() {
        let f = Field::rationals();
        let q = Algebra::quaternion(&f, &f.from_i64(-1), &f.from_i64(2)).unwrap();
        let (one, u, v) = (q.one(), q.basis(1), q.basis(2));
        assert_eq!(u.conj(), one.sub(&u).unwrap());
        assert_eq!(v.conj(), v.neg());
        // nrd(v) = −b
        assert_eq!(v.nrd().unwrap(), f.from_i64(-2));
        // Trd(x0 + x1 u + x2 v + x3 w) = 2 x0 + x1
        let x = q.element(vec![f.from_i64(3), f.from_i64(5), f.from_i64(7), f.from_i64(11)]).unwrap();
        assert_eq!(x.trd().unwrap(), f.from_i64(11));
    }

    fn all_quaternions(f: &Field) -> Vec<Algebra> {
        let els = f.elements().unwrap();
        let mut out = Vec::new();
        for a in &els {
            for b in &els {
                if let Ok(q) = make_quaternion(f, a, b) {
                    out.push(q);
                }
            }
        }
        out
    }

    #[test]
    fn symd_is_base_field() {
        for f in [Field::gf(2).unwrap(), Field::gf(3).unwrap(), Field::rationals()] {
            let algs = if f.is_finite() {
                all_quaternions(&f)
            } else {
                vec![make_quaternion(&f, &f.from_i64(-1), &f.from_i64(2)).unwrap()]
            };
            for q in algs {
                let s = symd_basis(&q);
                assert_eq!(s.len(), 1, "{}", q.name());
                assert!(s[0][1..].iter().all(|c| f.is_zero(c)));
            }
            for k in [make_split_etale(&f), make_etale(&f, &f.one()).unwrap()] {
                let s = sym_basis(&k);
                assert_eq!(s.len(), 1);
                assert!(f.is_zero(&s[0][1]));
            }
        }
    }

    #[test]
    fn nrd_multiplicative_exhaustive_f2_f3() {
        for f in [Field::gf(2).unwrap(), Field::gf(3).unwrap()] {
            let els = f.elements().unwrap();
            for q in all_quaternions(&f) {
                let mut vecs = vec![vec![]];
                for _ in 0..4 {
                    vecs = vecs
                        .into_iter()
                        .flat_map(|v: Vec<Elem>| els.iter().map(move |e| [v.clone(), vec![e.clone()]].concat()))
                        .collect();
                }
                let xs: Vec<AlgebraElement> = vecs.into_iter().map(|c| q.element(c).unwrap()).collect();
                for x in &xs {
                    assert_eq!(canonical_involution(&canonical_involution(x)), *x);
                    for y in xs.iter().step_by(7) {
                        let lhs = x.mul(y).unwrap().nrd().unwrap();
                        assert_eq!(lhs, f.mul(&x.nrd().unwrap(), &y.nrd().unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_parameters() {
        let f = Field::rationals();
        let quarter = f.from_ratio(-1, 4).unwrap();
        assert!(matches!(Algebra::quaternion(&f, &quarter, &f.one()), Err(Error::DegenerateParameters(_))));
        assert!(matches!(Algebra::quaternion(&f, &f.one(), &f.zero()), Err(Error::DegenerateParameters(_))));
        assert!(matches!(Algebra::etale(&f, &quarter), Err(Error::DegenerateParameters(_))));
    }

    #[test]
    fn f2_quaternion_valid() {
        let f = Field::gf(2).unwrap();
        assert!(Algebra::quaternion(&f, &f.one(), &f.one()).is_ok());
    }

    #[test]
    fn etale_norm_form_expansion() {
        // θ(x)x for x = x0 + x1 u gives x0² + x0x1 − a x1²
        let f = Field::rationals();
        let k = Algebra::etale(&f, &f.from_i64(3)).unwrap();
        let expected = QuadraticForm::new(&f, vec![vec![f.one(), f.one()], vec![f.zero(), f.from_i64(-3)]]).unwrap();
        assert_eq!(k.norm_form(), expected);
        // in characteristic 2 the two readings agree: x² + xy + y²
        let f2 = Field::gf(2).unwrap();
        let k2 = Algebra::etale(&f2, &f2.one()).unwrap();
        assert_eq!(k2.norm_form(), binary_quadratic(&f2, &f2.one(), &f2.one()).unwrap());
        assert!(k2.is_division().unwrap());
    }

    #[test]
    fn split_and_division() {
        let q = Field::rationals();
        let d = Algebra::quaternion(&q, &q.from_i64(-1), &q.from_i64(2)).unwrap();
        assert!(d.is_division().unwrap());
        assert!(!d.is_split().unwrap());
        assert!(pfister_similarity(&d.norm_form()).unwrap().is_yes());
        let s = Algebra::split_etale(&Field::gf(3).unwrap());
        assert!(s.is_split().unwrap());
        assert!(d.norm_form_decomposes().unwrap());
    }

    #[test]
    fn function_field_char_two() {
        let f = Field::rational_functions(2).unwrap();
        let t = f.generator().unwrap();
        // (a = t, b = t) is split: N_K(0,1) = t
        let q = Algebra::quaternion(&f, &t, &t).unwrap();
        assert!(q.is_split().unwrap());
        // (a = 1, b = t) is a division algebra
        let d = Algebra::quaternion(&f, &f.one(), &t).unwrap();
        assert!(d.is_division().unwrap());
    }
}
