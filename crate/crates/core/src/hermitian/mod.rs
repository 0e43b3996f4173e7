//! Even λ-hermitian forms over (D,θ) with D = F, a quadratic étale algebra
//! or a quaternion algebra, the Jacobson trace form, and the transfer of
//! isotropy, hyperbolicity and isometry to the trace form.
//!
//! V = Dⁿ is a right D-module and h(x,y) = Σ θ(x_i)·g_ij·y_j.

use serde::Serialize;

use crate::algebras::{Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::fields::oracle::decide_isotropic;
use crate::fields::{isotropy_oracle, Elem, Field, IsotropyOutcome};
use crate::forms::{is_hyperbolic, isometric, tensor, witt_decompose, BilinearForm, QuadraticForm};
use crate::linalg;

#[derive(Clone, PartialEq, Eq)]
pub struct HermitianForm {
    alg: Algebra,
    lambda: Elem,
    gram: Vec<Vec<AlgebraElement>>,
}

impl std::fmt::Debug for HermitianForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> =
            self.gram.iter().map(|r| r.iter().map(|e| e.format()).collect::<Vec<_>>().join(", ")).collect();
        write!(f, "herm[{}]@{}", rows.join("; "), self.alg.name())
    }
}

/// Entries a_i ∈ F^× with h ≅ ⟨a_1,…,a_n⟩ ⊗ ⟨1⟩.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagonalProfile {
    #[serde(skip)]
    pub entries: Vec<Elem>,
    pub display: Vec<String>,
}

impl DiagonalProfile {
    fn new(f: &Field, entries: Vec<Elem>) -> Self {
        let display = entries.iter().map(|e| f.format(e)).collect();
        Self { entries, display }
    }

    pub fn bilinear(&self, f: &Field) -> Result<BilinearForm> {
        crate::forms::diagonal_bilinear(f, &self.entries)
    }
}

impl HermitianForm {
    /// Checks shape and h(y,x) = λθ(h(x,y)); λ must satisfy λ² = 1.
    pub fn new(alg: &Algebra, lambda: &Elem, gram: Vec<Vec<AlgebraElement>>) -> Result<Self> {
        let f = alg.field();
        if !f.is_one(&f.mul(lambda, lambda)) {
            return Err(Error::NotHermitian("λ must satisfy λθ(λ) = 1".into()));
        }
        let n = gram.len();
        for row in &gram {
            if row.len() != n {
                return Err(Error::DimensionMismatch("hermitian Gram matrix must be square".into()));
            }
            if row.iter().any(|e| e.algebra() != alg) {
                return Err(Error::OwnerMismatch);
            }
        }
        for i in 0..n {
            for j in i..n {
                if gram[j][i] != gram[i][j].conj().scale(lambda) {
                    return Err(Error::NotHermitian(format!("entry ({j},{i}) is not λθ of ({i},{j})")));
                }
            }
        }
        Ok(Self { alg: alg.clone(), lambda: lambda.clone(), gram })
    }

    /// ⟨1⟩_(D,θ): h(x,y) = θ(x)y.
    pub fn unit(alg: &Algebra) -> Self {
        Self { alg: alg.clone(), lambda: alg.field().one(), gram: vec![vec![alg.one()]] }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }
    pub fn field(&self) -> &Field {
        self.alg.field()
    }
    pub fn lambda(&self) -> &Elem {
        &self.lambda
    }
    pub fn gram(&self) -> &Vec<Vec<AlgebraElement>> {
        &self.gram
    }
    /// Dimension as a D-module.
    pub fn dim(&self) -> usize {
        self.gram.len()
    }
    /// Dimension over F.
    pub fn dim_f(&self) -> usize {
        self.dim() * self.alg.dim()
    }

    pub fn eval(&self, x: &[AlgebraElement], y: &[AlgebraElement]) -> Result<AlgebraElement> {
        let mut acc = self.alg.zero();
        for (i, xi) in x.iter().enumerate() {
            let left = xi.conj();
            for (j, yj) in y.iter().enumerate() {
                acc = acc.add(&left.mul(&self.gram[i][j])?.mul(yj)?)?;
            }
        }
        Ok(acc)
    }

    /// Even: every diagonal entry lies in Symd_λ(D,θ) = {d + λθ(d)}.
    pub fn is_even(&self) -> bool {
        let f = self.field();
        let sym = symd_lambda_basis(&self.alg, &self.lambda);
        self.gram.iter().enumerate().all(|(i, r)| {
            let mut m = sym.clone();
            let before = linalg::rank(f, &m);
            m.push(r[i].coords().to_vec());
            linalg::rank(f, &m) == before
        })
    }

    /// No nonzero x with h(x,·) ≡ 0, checked on F-coordinates.
    pub fn is_nondegenerate(&self) -> bool {
        let f = self.field();
        let d = self.alg.dim();
        let rows: Vec<Vec<Elem>> = (0..self.dim_f())
            .map(|idx| {
                let x = self.basis_vector(idx);
                let mut row = Vec::with_capacity(self.dim_f());
                for j in 0..self.dim() {
                    let mut y = vec![self.alg.zero(); self.dim()];
                    y[j] = self.alg.one();
                    row.extend(self.eval(&x, &y).expect("same algebra").coords().to_vec());
                }
                row
            })
            .collect();
        debug_assert!(rows.iter().all(|r| r.len() == self.dim() * d));
        linalg::rank(f, &rows) == self.dim_f()
    }

    fn require_even_nondegenerate(&self) -> Result<()> {
        if !self.is_even() {
            return Err(Error::NotEven);
        }
        if !self.is_nondegenerate() {
            return Err(Error::Degenerate);
        }
        Ok(())
    }

    /// The F-basis vector with index idx = i·dim(D) + k: e_i·d_k.
    fn basis_vector(&self, idx: usize) -> Vec<AlgebraElement> {
        let d = self.alg.dim();
        let mut x = vec![self.alg.zero(); self.dim()];
        x[idx / d] = self.alg.basis(idx % d);
        x
    }

    /// Groups F-coordinates into a D-vector.
    pub fn to_d_vector(&self, coords: &[Elem]) -> Result<Vec<AlgebraElement>> {
        coords.chunks(self.alg.dim()).map(|c| self.alg.element(c.to_vec())).collect()
    }

    pub fn orthogonal_sum(&self, other: &Self) -> Result<Self> {
        if self.alg != other.alg || self.lambda != other.lambda {
            return Err(Error::SignatureMismatch);
        }
        let (n, m) = (self.dim(), other.dim());
        let mut g = vec![vec![self.alg.zero(); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                g[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                g[n + i][n + j] = other.gram[i][j].clone();
            }
        }
        Ok(Self { alg: self.alg.clone(), lambda: self.lambda.clone(), gram: g })
    }

    pub fn scale(&self, c: &Elem) -> Result<Self> {
        if self.field().is_zero(c) {
            return Err(Error::ZeroScalar);
        }
        let gram = self.gram.iter().map(|r| r.iter().map(|e| e.scale(c)).collect()).collect();
        Ok(Self { alg: self.alg.clone(), lambda: self.lambda.clone(), gram })
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field().from_i64(-1)).expect("−1 ≠ 0")
    }

    /// q_h(x) = h(x,x) on the F-space V. Requires h even, nondegenerate,
    /// λ = 1 and D étale or quaternion.
    pub fn trace_form(&self) -> Result<QuadraticForm> {
        if self.alg.is_base() {
            return Err(Error::UnsupportedVariant(
                "trace form needs an étale or quaternion coefficient algebra".into(),
            ));
        }
        if !self.field().is_one(&self.lambda) {
            return Err(Error::UnsupportedVariant("trace form needs λ = 1".into()));
        }
        self.require_even_nondegenerate()?;
        let f = self.field();
        let n = self.dim_f();
        let d = self.alg.dim();
        let units: Vec<AlgebraElement> = (0..d).map(|s| self.alg.basis(s)).collect();
        let conj: Vec<AlgebraElement> = units.iter().map(|u| u.conj()).collect();
        // h(e_a u_s, e_b u_t) = θ(u_s) g_ab u_t
        let entry = |i: usize, j: usize| conj[i % d].mul(&self.gram[i / d][j / d])?.mul(&units[j % d]);
        let mut m = linalg::zeros(f, n, n);
        for i in 0..n {
            m[i][i] = entry(i, i)?.as_scalar().ok_or(Error::NotEven)?;
            for j in i + 1..n {
                m[i][j] = entry(i, j)?.trd()?;
            }
        }
        let q = QuadraticForm::new(f, m)?;
        q.require_nonsingular()?;
        Ok(q)
    }
}

/// A basis of Symd_λ(D,θ) = {d + λθ(d)}.
pub fn symd_lambda_basis(alg: &Algebra, lambda: &Elem) -> Vec<Vec<Elem>> {
    let f = alg.field();
    let m = linalg::add(f, &linalg::identity(f, alg.dim()), &linalg::scale(f, lambda, alg.involution_matrix()));
    let mut out: Vec<Vec<Elem>> = Vec::new();
    for c in linalg::transpose(&m) {
        out.push(c);
        if linalg::rank(f, &out) < out.len() {
            out.pop();
        }
    }
    out
}

pub fn unit_form(alg: &Algebra) -> HermitianForm {
    HermitianForm::unit(alg)
}

/// ⟨a_1,…,a_n⟩ ⊗ ⟨1⟩_(D,θ).
pub fn from_diagonal(alg: &Algebra, entries: &[Elem]) -> Result<HermitianForm> {
    let f = alg.field();
    if entries.iter().any(|e| f.is_zero(e)) {
        return Err(Error::ZeroEntry);
    }
    let n = entries.len();
    let mut g = vec![vec![alg.zero(); n]; n];
    for (i, e) in entries.iter().enumerate() {
        g[i][i] = alg.scalar(e);
    }
    HermitianForm::new(alg, &f.one(), g)
}

/// φ ⊗ h with Gram φ_ij·h_kl at ((i,k),(j,l)).
pub fn tensor_bh(phi: &BilinearForm, h: &HermitianForm) -> Result<HermitianForm> {
    phi.field().check_same(h.field())?;
    let (n, m) = (phi.dim(), h.dim());
    let mut g = vec![vec![h.alg.zero(); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    g[i * m + k][j * m + l] = h.gram[k][l].scale(&phi.gram()[i][j]);
                }
            }
        }
    }
    HermitianForm::new(&h.alg, &h.lambda, g)
}

/// half_dim copies of the Gram block [[0,1],[λ,0]].
pub fn hyperbolic_h(alg: &Algebra, lambda: &Elem, half_dim: usize) -> Result<HermitianForm> {
    let n = 2 * half_dim;
    let mut g = vec![vec![alg.zero(); n]; n];
    for k in 0..half_dim {
        g[2 * k][2 * k + 1] = alg.one();
        g[2 * k + 1][2 * k] = alg.scalar(lambda);
    }
    HermitianForm::new(alg, lambda, g)
}

/// Gram–Schmidt over (D,θ). Split coefficient algebras route through the
/// fact that all nondegenerate even forms of equal D-dimension are then
/// hyperbolic, so ⟨1,−1,1,−1,…⟩ is returned. Every profile is checked with
/// [`isometric_h`] before it is returned.
pub fn diagonalize_even(h: &HermitianForm) -> Result<DiagonalProfile> {
    h.require_even_nondegenerate()?;
    let alg = h.algebra();
    let f = alg.field();
    let entries = if !alg.is_base() && alg.is_split()? {
        (0..h.dim()).map(|i| f.from_i64(if i % 2 == 0 { 1 } else { -1 })).collect()
    } else {
        gram_schmidt(h)?
    };
    let profile = DiagonalProfile::new(f, entries);
    if !alg.is_base() && f.is_one(h.lambda()) {
        let back = from_diagonal(alg, &profile.entries)?;
        if !isometric_h(h, &back)? {
            return Err(Error::InternalInconsistency("diagonal profile is not isometric to the input".into()));
        }
    }
    Ok(profile)
}

fn gram_schmidt(h: &HermitianForm) -> Result<Vec<Elem>> {
    let alg = h.algebra();
    let n = h.dim();
    let mut basis: Vec<Vec<AlgebraElement>> = (0..n)
        .map(|i| {
            let mut v = vec![alg.zero(); n];
            v[i] = alg.one();
            v
        })
        .collect();
    let mut entries = Vec::with_capacity(n);
    while !basis.is_empty() {
        let (x, a) = anisotropic_vector(h, &basis)?;
        entries.push(a.clone());
        let a_inv = alg.field().inv(&a)?;
        // v ↦ v − x·a⁻¹·h(x,v) keeps the span and kills h(x,·)
        let mut rest = Vec::with_capacity(basis.len());
        for v in &basis {
            let c = h.eval(&x, v)?.scale(&a_inv);
            let p: Vec<AlgebraElement> =
                v.iter().zip(&x).map(|(vi, xi)| vi.sub(&xi.mul(&c)?)).collect::<Result<_>>()?;
            rest.push(p);
        }
        basis = independent_d_vectors(alg, rest, basis.len() - 1);
    }
    Ok(entries)
}

/// A vector x in the span of `basis` with h(x,x) ∈ F^×.
fn anisotropic_vector(h: &HermitianForm, basis: &[Vec<AlgebraElement>]) -> Result<(Vec<AlgebraElement>, Elem)> {
    let alg = h.algebra();
    let f = alg.field();
    for v in basis {
        let a = h.eval(v, v)?.as_scalar().ok_or(Error::NotEven)?;
        if !f.is_zero(&a) {
            return Ok((v.clone(), a));
        }
    }
    // all diagonal values vanish: x = v_i + v_j·g⁻¹·t with Trd(t) = 1
    let t = alg.trace_one().ok_or(Error::Degenerate)?;
    for (i, vi) in basis.iter().enumerate() {
        for vj in &basis[i + 1..] {
            let g = h.eval(vi, vj)?;
            if g.is_zero() {
                continue;
            }
            let Ok(gi) = g.inverse() else { continue };
            let d = gi.mul(&t)?;
            let x: Vec<AlgebraElement> = vi.iter().zip(vj).map(|(a, b)| a.add(&b.mul(&d)?)).collect::<Result<_>>()?;
            let a = h.eval(&x, &x)?.as_scalar().ok_or(Error::NotEven)?;
            if !f.is_zero(&a) {
                return Ok((x, a));
            }
        }
    }
    Err(Error::Degenerate)
}

fn independent_d_vectors(alg: &Algebra, vecs: Vec<Vec<AlgebraElement>>, want: usize) -> Vec<Vec<AlgebraElement>> {
    // D-independence over a division algebra: F-rank of the right D-span
    let f = alg.field();
    let span_rows = |vs: &[Vec<AlgebraElement>]| -> Vec<Vec<Elem>> {
        let mut rows = Vec::new();
        for v in vs {
            for k in 0..alg.dim() {
                let e = alg.basis(k);
                rows.push(v.iter().flat_map(|c| c.mul(&e).expect("same algebra").coords().to_vec()).collect());
            }
        }
        rows
    };
    let mut out: Vec<Vec<AlgebraElement>> = Vec::new();
    for v in vecs {
        if out.len() == want {
            break;
        }
        out.push(v);
        if linalg::rank(f, &span_rows(&out)) < out.len() * alg.dim() {
            out.pop();
        }
    }
    out
}

/// Isotropy of h, decided on q_h.
pub fn is_isotropic_h(h: &HermitianForm) -> Result<bool> {
    let q = h.trace_form()?;
    match decide_isotropic(&q)? {
        Some(v) => Ok(v),
        None => Err(Error::OracleUndecided { stage: "trace form isotropy".into(), partial_index: 0 }),
    }
}

/// A D-vector x ≠ 0 with h(x,x) = 0, read off an isotropy witness of q_h
/// and re-verified on h.
pub fn isotropy_witness_h(h: &HermitianForm) -> Result<Option<Vec<AlgebraElement>>> {
    let q = h.trace_form()?;
    match isotropy_oracle(&q)? {
        IsotropyOutcome::Witness(w) => {
            let x = h.to_d_vector(&w)?;
            if !h.eval(&x, &x)?.is_zero() {
                return Err(Error::InternalInconsistency("trace-form witness is not isotropic for h".into()));
            }
            Ok(Some(x))
        }
        IsotropyOutcome::Anisotropic(_) => Ok(None),
        IsotropyOutcome::Undecided => {
            Err(Error::OracleUndecided { stage: "trace form isotropy".into(), partial_index: 0 })
        }
    }
}

pub fn is_hyperbolic_h(h: &HermitianForm) -> Result<bool> {
    is_hyperbolic(&h.trace_form()?)
}

/// F-basis of a totally isotropic subspace of V of half the F-dimension,
/// from the Witt transform of q_h; None if h is not hyperbolic.
pub fn hyperbolic_flag_h(h: &HermitianForm) -> Result<Option<Vec<Vec<Elem>>>> {
    let q = h.trace_form()?;
    let d = witt_decompose(&q)?;
    if 2 * d.witt_index != q.dim() {
        return Ok(None);
    }
    let t = linalg::transpose(&d.transform);
    let flag: Vec<Vec<Elem>> = (0..d.witt_index).map(|k| t[2 * k].clone()).collect();
    let f = h.field();
    for (i, x) in flag.iter().enumerate() {
        let dx = h.to_d_vector(x)?;
        for y in &flag[i..] {
            if !h.eval(&dx, &h.to_d_vector(y)?)?.trd().map(|t| f.is_zero(&t))? || !f.is_zero(&q.eval(x)) {
                return Err(Error::InternalInconsistency("flag is not totally isotropic".into()));
            }
        }
    }
    Ok(Some(flag))
}

fn same_signature(h1: &HermitianForm, h2: &HermitianForm) -> Result<()> {
    if h1.alg != h2.alg || h1.lambda != h2.lambda {
        return Err(Error::SignatureMismatch);
    }
    Ok(())
}

/// Equal D-dimension and isometric trace forms.
pub fn isometric_h(h1: &HermitianForm, h2: &HermitianForm) -> Result<bool> {
    same_signature(h1, h2)?;
    if h1.dim() != h2.dim() {
        return Ok(false);
    }
    isometric(&h1.trace_form()?, &h2.trace_form()?)
}

/// The second criterion: h1 ⊥ (−h2) hyperbolic.
pub fn isometric_h_by_sum(h1: &HermitianForm, h2: &HermitianForm) -> Result<bool> {
    same_signature(h1, h2)?;
    if h1.dim() != h2.dim() {
        return Ok(false);
    }
    is_hyperbolic_h(&h1.orthogonal_sum(&h2.neg())?)
}

/// Bounded direct search for x ≠ 0 with h(x,x) = 0: all coordinate vectors
/// over the first k F-coordinates with entries from `values`, where k is
/// as large as `budget` allows.
pub fn search_isotropic_vector(
    h: &HermitianForm,
    values: &[Elem],
    budget: usize,
) -> Result<Option<Vec<AlgebraElement>>> {
    let q = h.trace_form()?;
    let f = h.field();
    let n = q.dim();
    let mut k = 0;
    let mut count = 1usize;
    while k < n && count.saturating_mul(values.len()) <= budget {
        count *= values.len();
        k += 1;
    }
    let mut idx = vec![0usize; k];
    loop {
        let mut x = vec![f.zero(); n];
        for (i, &j) in idx.iter().enumerate() {
            x[i] = values[j].clone();
        }
        if !linalg::is_zero_vec(f, &x) && f.is_zero(&q.eval(&x)) {
            let dx = h.to_d_vector(&x)?;
            if h.eval(&dx, &dx)?.is_zero() {
                return Ok(Some(dx));
            }
            return Err(Error::InternalInconsistency("q_h and h disagree on a vector".into()));
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < values.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// diagonalize_even(h) ⊗ (D, Nrd), the right-hand side of the trace-form
/// decomposition.
pub fn profile_trace_form(h: &HermitianForm) -> Result<QuadraticForm> {
    let p = diagonalize_even(h)?;
    tensor(&p.bilinear(h.field())?, &h.algebra().norm_form())
}
