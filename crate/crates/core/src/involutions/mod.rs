//! Algebras with involution represented by adjoint forms: Ad(h) for an even
//! hermitian form h over (B,τ), and Ad(q) for a quadratic form q (the
//! quadratic pair on a split algebra). Includes the form-level ⊠ product and
//! the theorem batteries for totally decomposable involutions.

mod battery;
pub mod similarity;

use serde::Serialize;

use crate::algebras::{Algebra, Shape};
use crate::error::{Error, Result};
use crate::fields::oracle::decide_isotropic;
use crate::fields::{Elem, Field};
use crate::forms::{
    bilinear_pfister, is_hyperbolic, pfister_similarity, tensor, BilinearForm, PfisterObstruction, PfisterSimilarity,
    QuadraticForm,
};
use crate::hermitian::{
    diagonalize_even, from_diagonal, is_hyperbolic_h, is_isotropic_h, isometric_h, tensor_bh, unit_form, HermitianForm,
};

pub use battery::{
    theorem_battery_symplectic, theorem_battery_unitary, BatteryOptions, ConditionReport, DecisionReport,
    SampledExtension, Verdict,
};
pub use similarity::similarity_scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InvolutionKind {
    Orthogonal,
    Symplectic,
    Unitary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvolutionVariant {
    AdjointHermitian(HermitianForm),
    AdjointQuadraticPair(QuadraticForm),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionRep {
    variant: InvolutionVariant,
    kind: InvolutionKind,
    degree: usize,
}

impl InvolutionRep {
    pub fn variant(&self) -> &InvolutionVariant {
        &self.variant
    }
    pub fn kind(&self) -> InvolutionKind {
        self.kind
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn field(&self) -> &Field {
        match &self.variant {
            InvolutionVariant::AdjointHermitian(h) => h.field(),
            InvolutionVariant::AdjointQuadraticPair(q) => q.field(),
        }
    }

    /// The coefficient algebra (B,τ); None for quadratic pairs.
    pub fn base(&self) -> Option<&Algebra> {
        match &self.variant {
            InvolutionVariant::AdjointHermitian(h) => Some(h.algebra()),
            InvolutionVariant::AdjointQuadraticPair(_) => None,
        }
    }

    fn hermitian(&self) -> Result<&HermitianForm> {
        match &self.variant {
            InvolutionVariant::AdjointHermitian(h) => Ok(h),
            InvolutionVariant::AdjointQuadraticPair(_) => {
                Err(Error::UnsupportedVariant("operation needs an adjoint hermitian representative".into()))
            }
        }
    }

    /// The quadratic form whose similarity class determines the involution:
    /// q_h for hermitian variants, q itself for quadratic pairs.
    pub fn trace_form(&self) -> Result<QuadraticForm> {
        match &self.variant {
            InvolutionVariant::AdjointHermitian(h) => h.trace_form(),
            InvolutionVariant::AdjointQuadraticPair(q) => Ok(q.clone()),
        }
    }
}

/// Ad(h). Kind: symplectic over (Q,γ), unitary over (K,τ); over (F,id)
/// orthogonal unless the form is alternating.
pub fn adjoint_hermitian(h: &HermitianForm) -> Result<InvolutionRep> {
    if !h.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    let f = h.field();
    let plus = f.is_one(h.lambda());
    let alg = h.algebra();
    let (kind, deg_d) = match alg.shape() {
        Shape::Quaternion { .. } => (if plus { InvolutionKind::Symplectic } else { InvolutionKind::Orthogonal }, 2),
        Shape::EtaleField { .. } | Shape::SplitEtale => (InvolutionKind::Unitary, 1),
        Shape::Base => {
            let alternating = h.gram().iter().enumerate().all(|(i, r)| r[i].is_zero());
            let symmetric_alt = plus && f.characteristic() == 2 && alternating;
            let skew = !plus && f.characteristic() != 2;
            let kind = if symmetric_alt || skew { InvolutionKind::Symplectic } else { InvolutionKind::Orthogonal };
            (kind, 1)
        }
    };
    Ok(InvolutionRep { variant: InvolutionVariant::AdjointHermitian(h.clone()), kind, degree: h.dim() * deg_d })
}

/// Ad(q) as a quadratic pair; its involution is adjoint to the polar form.
pub fn adjoint_quadratic(q: &QuadraticForm) -> Result<InvolutionRep> {
    q.require_nonsingular()?;
    let kind = if q.polar_form().is_alternating() { InvolutionKind::Symplectic } else { InvolutionKind::Orthogonal };
    Ok(InvolutionRep { variant: InvolutionVariant::AdjointQuadraticPair(q.clone()), kind, degree: q.dim() })
}

pub fn adjoint(variant: InvolutionVariant) -> Result<InvolutionRep> {
    match &variant {
        InvolutionVariant::AdjointHermitian(h) => adjoint_hermitian(h),
        InvolutionVariant::AdjointQuadraticPair(q) => adjoint_quadratic(q),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionCertificate {
    /// φ read off an orthogonal basis of h.
    Diagonalized,
    /// Split base: the involution is hyperbolic, any φ of the right
    /// dimension works.
    SplitHyperbolic,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub phi: BilinearForm,
    pub base: Algebra,
    pub certificate: DecompositionCertificate,
}

/// (A,σ) ≅ Ad(φ) ⊗ (B,τ); the round trip φ ⊗ ⟨1⟩ ≅ h is verified.
pub fn decompose(rep: &InvolutionRep) -> Result<Decomposition> {
    let h = rep.hermitian()?;
    let base = h.algebra().clone();
    if base.is_base() || !h.field().is_one(h.lambda()) {
        return Err(Error::UnsupportedVariant("decomposition needs λ = 1 over an étale or quaternion base".into()));
    }
    let profile = diagonalize_even(h)?;
    let phi = profile.bilinear(h.field())?;
    let back = tensor_bh(&phi, &unit_form(&base))?;
    if !isometric_h(&back, h)? {
        return Err(Error::InternalInconsistency("decomposition round trip failed".into()));
    }
    let certificate = if base.is_split()? {
        DecompositionCertificate::SplitHyperbolic
    } else {
        DecompositionCertificate::Diagonalized
    };
    Ok(Decomposition { phi, base, certificate })
}

/// (A,σ) ⊠ (B,τ) at the form level: Ad(φ ⊗ π) with π the norm form of B.
pub fn boxtimes_base(rep: &InvolutionRep) -> Result<InvolutionRep> {
    let d = decompose(rep)?;
    adjoint_quadratic(&tensor(&d.phi, &d.base.norm_form())?)
}

fn decided(v: Option<bool>, stage: &str) -> Result<bool> {
    v.ok_or_else(|| Error::OracleUndecided { stage: stage.into(), partial_index: 0 })
}

fn cross_check(direct: bool, image: bool, what: &str) -> Result<bool> {
    if direct != image {
        return Err(Error::InternalInconsistency(format!(
            "{what}: hermitian level says {direct}, ⊠ image says {image}"
        )));
    }
    Ok(direct)
}

/// Isotropy, computed on h and on the ⊠ image; they must agree.
pub fn is_isotropic_inv(rep: &InvolutionRep) -> Result<bool> {
    match &rep.variant {
        InvolutionVariant::AdjointHermitian(h) => {
            let direct = is_isotropic_h(h)?;
            let image = boxtimes_base(rep)?.trace_form()?;
            let via = decided(decide_isotropic(&image)?, "isotropy of the ⊠ image")?;
            cross_check(direct, via, "isotropy")
        }
        InvolutionVariant::AdjointQuadraticPair(q) => decided(decide_isotropic(q)?, "isotropy"),
    }
}

pub fn is_hyperbolic_inv(rep: &InvolutionRep) -> Result<bool> {
    match &rep.variant {
        InvolutionVariant::AdjointHermitian(h) => {
            let direct = is_hyperbolic_h(h)?;
            let via = is_hyperbolic(&boxtimes_base(rep)?.trace_form()?)?;
            cross_check(direct, via, "hyperbolicity")
        }
        InvolutionVariant::AdjointQuadraticPair(q) => is_hyperbolic(q),
    }
}

/// A scalar c with q(rep1) ≅ c·q(rep2), or None when not isomorphic.
pub fn isomorphism_scalar(rep1: &InvolutionRep, rep2: &InvolutionRep) -> Result<Option<Elem>> {
    rep1.field().check_same(rep2.field())?;
    if rep1.base() != rep2.base() {
        return Err(Error::SignatureMismatch);
    }
    if rep1.degree != rep2.degree || rep1.kind != rep2.kind {
        return Ok(None);
    }
    similarity_scalar(&rep1.trace_form()?, &rep2.trace_form()?)
}

/// Isomorphism of adjoint involutions: similarity of the trace forms.
pub fn isomorphic_inv(rep1: &InvolutionRep, rep2: &InvolutionRep) -> Result<bool> {
    Ok(isomorphism_scalar(rep1, rep2)?.is_some())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TotalDecomposability {
    /// (A,σ) ≅ Ad(ψ) ⊗ (B,τ) with ψ = ⟨⟨slots⟩⟩, verified by isomorphic_inv.
    Yes {
        slots: Vec<Elem>,
        scalar: Elem,
    },
    No(PfisterObstruction),
    Undecided(String),
}

impl TotalDecomposability {
    pub fn truth(&self) -> Option<bool> {
        match self {
            TotalDecomposability::Yes { .. } => Some(true),
            TotalDecomposability::No(_) => Some(false),
            TotalDecomposability::Undecided(_) => None,
        }
    }

    pub fn to_json(&self, f: &Field) -> serde_json::Value {
        match self {
            TotalDecomposability::Yes { slots, scalar } => serde_json::json!({
                "verdict": "yes",
                "psi_slots": slots.iter().map(|s| f.format(s)).collect::<Vec<_>>(),
                "similarity_scalar": f.format(scalar),
            }),
            TotalDecomposability::No(o) => serde_json::json!({ "verdict": "no", "obstruction": o }),
            TotalDecomposability::Undecided(r) => serde_json::json!({ "verdict": "undecided", "reason": r }),
        }
    }
}

/// Number of bilinear Pfister slots ψ must have: deg = 2^n gives n − 1
/// over a quaternion base and n over an étale base.
fn psi_fold(rep: &InvolutionRep) -> Result<usize> {
    let deg = rep.degree;
    if deg < 2 || !deg.is_power_of_two() {
        return Err(Error::HypothesisViolation(format!("degree {deg} is not 2^n with n ≥ 1")));
    }
    let n = deg.trailing_zeros() as usize;
    match rep.kind {
        InvolutionKind::Symplectic if rep.base().is_some_and(|b| b.is_quaternion()) => Ok(n - 1),
        InvolutionKind::Unitary => Ok(n),
        _ => Err(Error::HypothesisViolation(
            "needs a symplectic involution over a quaternion base or a unitary one over an étale base".into(),
        )),
    }
}

fn slot_candidates(rep: &InvolutionRep, phi: &BilinearForm, k: usize, limit: usize) -> Vec<Vec<Elem>> {
    let f = rep.field();
    let e = phi.diagonal_entries().unwrap_or_default();
    let mut out: Vec<Vec<Elem>> = Vec::new();
    if k == 0 {
        return vec![vec![]];
    }
    // hyperbolic ψ
    if f.characteristic() == 2 {
        out.push(vec![f.one(); k]);
    } else {
        let mut s = vec![f.from_i64(-1)];
        s.extend(vec![f.one(); k - 1]);
        out.push(s);
    }
    if e.len() == 1 << k {
        // ⟨e_0,…⟩ laid out as e_0·⟨⟨e_0e_1, e_0e_2, e_0e_4, …⟩⟩
        out.push((0..k).map(|j| f.mul(&e[0], &e[1 << j])).collect());
        let ratios: Vec<Elem> = e[1..].iter().map(|x| f.mul(&e[0], x)).collect();
        let mut idx: Vec<usize> = (0..k).collect();
        'outer: while out.len() < limit {
            out.push(idx.iter().map(|&i| ratios[i].clone()).collect());
            let r = ratios.len();
            let mut pos = k;
            while pos > 0 {
                pos -= 1;
                if idx[pos] < r - k + pos {
                    idx[pos] += 1;
                    for q in pos + 1..k {
                        idx[q] = idx[q - 1] + 1;
                    }
                    continue 'outer;
                }
            }
            break;
        }
    }
    out.dedup();
    out
}

/// Searches a bilinear Pfister ψ with (A,σ) ≅ Ad(ψ) ⊗ (B,τ).
pub fn find_pfister_factor(rep: &InvolutionRep, limit: usize) -> Result<Option<(Vec<Elem>, Elem)>> {
    let k = psi_fold(rep)?;
    let d = decompose(rep)?;
    let unit = unit_form(&d.base);
    for slots in slot_candidates(rep, &d.phi, k, limit) {
        let psi = match bilinear_pfister(rep.field(), &slots) {
            Ok(p) => p,
            Err(Error::ZeroSlot) => continue,
            Err(e) => return Err(e),
        };
        let cand = adjoint_hermitian(&tensor_bh(&psi, &unit)?)?;
        if let Some(c) = isomorphism_scalar(rep, &cand)? {
            return Ok(Some((slots, c)));
        }
    }
    Ok(None)
}

/// Decided through Pfister similarity of the ⊠ image φ ⊗ π; a positive
/// answer carries ψ found by [`find_pfister_factor`].
pub fn totally_decomposable(rep: &InvolutionRep) -> Result<TotalDecomposability> {
    totally_decomposable_with(rep, 256)
}

pub fn totally_decomposable_with(rep: &InvolutionRep, limit: usize) -> Result<TotalDecomposability> {
    psi_fold(rep)?;
    let image = boxtimes_base(rep)?.trace_form()?;
    match pfister_similarity(&image)? {
        PfisterSimilarity::No(o) => Ok(TotalDecomposability::No(o)),
        PfisterSimilarity::Undecided(r) => Ok(TotalDecomposability::Undecided(r)),
        PfisterSimilarity::Yes(_) => match find_pfister_factor(rep, limit) {
            Ok(Some((slots, scalar))) => Ok(TotalDecomposability::Yes { slots, scalar }),
            Ok(None) => Ok(TotalDecomposability::Undecided(
                "⊠ image is Pfister-similar but no ψ found among the candidate slots".into(),
            )),
            Err(Error::OracleUndecided { stage, .. }) => Ok(TotalDecomposability::Undecided(stage)),
            Err(e) => Err(e),
        },
    }
}

/// Ad(ψ ⊗ ⟨1⟩) ⊗ (B,τ) for a bilinear Pfister form ψ = ⟨⟨slots⟩⟩.
pub fn pfister_rep(base: &Algebra, slots: &[Elem]) -> Result<InvolutionRep> {
    let psi = bilinear_pfister(base.field(), slots)?;
    adjoint_hermitian(&tensor_bh(&psi, &unit_form(base))?)
}

/// Ad(⟨entries⟩ ⊗ ⟨1⟩).
pub fn diagonal_rep(base: &Algebra, entries: &[Elem]) -> Result<InvolutionRep> {
    adjoint_hermitian(&from_diagonal(base, entries)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::{make_etale, make_quaternion, make_split_etale};
    use crate::forms::diagonal_bilinear;
    use crate::hermitian::hyperbolic_h;

    fn q(v: &[i64]) -> Vec<Elem> {
        let f = Field::rationals();
        v.iter().map(|x| f.from_i64(*x)).collect()
    }

    fn rat_quat() -> Algebra {
        let f = Field::rationals();
        make_quaternion(&f, &f.from_i64(-1), &f.from_i64(2)).unwrap()
    }

    #[test]
    fn kinds_and_degrees() {
        let f = Field::rationals();
        let r = diagonal_rep(&rat_quat(), &q(&[1])).unwrap();
        assert_eq!((r.kind(), r.degree()), (InvolutionKind::Symplectic, 2));
        let k = make_etale(&f, &f.from_i64(-1)).unwrap();
        let r = diagonal_rep(&k, &q(&[1, 3])).unwrap();
        assert_eq!((r.kind(), r.degree()), (InvolutionKind::Unitary, 2));
        let r = adjoint_quadratic(&QuadraticForm::diagonal(&f, &q(&[1, 2])).unwrap()).unwrap();
        assert_eq!(r.kind(), InvolutionKind::Orthogonal);
        let f2 = Field::gf(2).unwrap();
        let r = adjoint_quadratic(&QuadraticForm::hyperbolic(&f2, 1)).unwrap();
        assert_eq!(r.kind(), InvolutionKind::Symplectic);
    }

    #[test]
    fn decompose_examples() {
        let f = Field::rationals();
        let d = decompose(&diagonal_rep(&rat_quat(), &q(&[1])).unwrap()).unwrap();
        assert_eq!(d.phi, diagonal_bilinear(&f, &q(&[1])).unwrap());
        let k = make_etale(&f, &f.from_i64(-1)).unwrap();
        let d = decompose(&diagonal_rep(&k, &q(&[1, 3])).unwrap()).unwrap();
        assert_eq!(d.phi.diagonal_entries().unwrap(), q(&[1, 3]));
        let f3 = Field::gf(3).unwrap();
        let s = make_split_etale(&f3);
        let rep = adjoint_hermitian(&hyperbolic_h(&s, &f3.one(), 2).unwrap()).unwrap();
        let d = decompose(&rep).unwrap();
        assert_eq!(d.certificate, DecompositionCertificate::SplitHyperbolic);
        assert_eq!(d.phi.diagonal_entries().unwrap()[..2], [f3.one(), f3.from_i64(-1)]);
    }

    #[test]
    fn boxtimes_of_unit_is_norm_form() {
        let alg = rat_quat();
        let r = boxtimes_base(&diagonal_rep(&alg, &q(&[1])).unwrap()).unwrap();
        assert_eq!(r.trace_form().unwrap(), alg.norm_form());
        assert_eq!(r.degree(), 4);
    }

    #[test]
    fn transfer_cross_checks() {
        let alg = rat_quat();
        let r = diagonal_rep(&alg, &q(&[1])).unwrap();
        assert!(!is_isotropic_inv(&r).unwrap() && !is_hyperbolic_inv(&r).unwrap());
        let h = adjoint_hermitian(&hyperbolic_h(&alg, &alg.field().one(), 1).unwrap()).unwrap();
        assert!(is_isotropic_inv(&h).unwrap() && is_hyperbolic_inv(&h).unwrap());
        assert!(is_hyperbolic_inv(&boxtimes_base(&h).unwrap()).unwrap());
        let f3 = Field::gf(3).unwrap();
        let split = make_quaternion(&f3, &f3.one(), &f3.one()).unwrap();
        let r = diagonal_rep(&split, &[f3.one()]).unwrap();
        assert!(is_hyperbolic_inv(&r).unwrap());
    }

    #[test]
    fn isomorphism_up_to_scalars() {
        let alg = rat_quat();
        let one = diagonal_rep(&alg, &q(&[1])).unwrap();
        for c in [3, -7, 10] {
            assert!(isomorphic_inv(&one, &diagonal_rep(&alg, &q(&[c])).unwrap()).unwrap());
        }
        let a = adjoint_hermitian(&hyperbolic_h(&alg, &alg.field().one(), 1).unwrap()).unwrap();
        let b = diagonal_rep(&alg, &q(&[1, -1])).unwrap();
        assert!(isomorphic_inv(&a, &b).unwrap());
        assert!(!isomorphic_inv(&one, &b).unwrap());
    }

    #[test]
    fn total_decomposability() {
        let f = Field::rationals();
        let alg = rat_quat();
        let r = pfister_rep(&alg, &q(&[2, 5])).unwrap();
        assert!(matches!(totally_decomposable(&r).unwrap(), TotalDecomposability::Yes { .. }));
        assert!(matches!(
            totally_decomposable(&diagonal_rep(&alg, &q(&[7])).unwrap()).unwrap(),
            TotalDecomposability::Yes { .. }
        ));
        let def = make_quaternion(&f, &f.from_i64(-1), &f.from_i64(-1)).unwrap();
        let bad = diagonal_rep(&def, &q(&[1, 1, 1, -1])).unwrap();
        assert!(matches!(totally_decomposable(&bad).unwrap(), TotalDecomposability::No(_)));
        let k = make_etale(&f, &f.from_i64(-1)).unwrap();
        let bad = diagonal_rep(&k, &q(&[1, 1, 1, -1])).unwrap();
        assert!(matches!(totally_decomposable(&bad).unwrap(), TotalDecomposability::No(_)));
        let odd = diagonal_rep(&k, &q(&[1, 1, 1])).unwrap();
        assert!(matches!(totally_decomposable(&odd), Err(Error::HypothesisViolation(_))));
    }
}
