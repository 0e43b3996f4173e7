use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::local::rational_global_index;
use crate::fields::oracle::symplectic_blocks;
use crate::fields::{Elem, Field, FieldKind};

use super::invariants::disc_or_arf_trivial;
use super::witt::witt_index;
use super::{bilinear_pfister, isometric, tensor, QuadraticForm};

/// a(x² + xy + c y²). Only a = 0 is rejected: when 4c = 1 the form is the
/// degenerate a(x + y/2)², which callers needing nonsingularity reject.
pub fn binary_quadratic(field: &Field, a: &Elem, c: &Elem) -> Result<QuadraticForm> {
    let f = field;
    if f.is_zero(a) {
        return Err(Error::SingularParameters);
    }
    QuadraticForm::new(f, vec![vec![a.clone(), a.clone()], vec![f.zero(), f.mul(a, c)]])
}

/// ⟨⟨s_1,…,s_k⟩⟩ ⊗ (x² + xy + a y²), a (k+1)-fold quadratic Pfister form.
pub fn quadratic_pfister(field: &Field, a: &Elem, slots: &[Elem]) -> Result<QuadraticForm> {
    let binary = binary_quadratic(field, &field.one(), a)?;
    if !binary.is_nonsingular() {
        return Err(Error::SingularParameters);
    }
    tensor(&bilinear_pfister(field, slots)?, &binary)
}

/// q ≅ c·P where P is ⟨⟨slots⟩⟩ (char ≠ 2, as a diagonal quadratic form) or
/// ⟨⟨slots⟩⟩ ⊗ (x² + xy + binary y²) (char 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfisterCertificate {
    pub scalar: Elem,
    pub slots: Vec<Elem>,
    pub binary: Option<Elem>,
}

impl PfisterCertificate {
    pub fn pfister_form(&self, f: &Field) -> Result<QuadraticForm> {
        match &self.binary {
            Some(a) => quadratic_pfister(f, a, &self.slots),
            None => {
                let b = bilinear_pfister(f, &self.slots)?;
                QuadraticForm::diagonal(f, &b.diagonal_entries().expect("diagonal"))
            }
        }
    }

    pub fn verify(&self, q: &QuadraticForm) -> Result<bool> {
        let p = self.pfister_form(q.field())?.scale(&self.scalar)?;
        isometric(q, &p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum PfisterObstruction {
    /// Isotropic but not hyperbolic over the base field.
    IsotropicNotHyperbolic { witt_index: usize, dim: usize },
    /// Nontrivial signed discriminant or Arf invariant (dimension 4).
    NontrivialDiscOrArf,
    /// Over the completion at `place` the form is isotropic and not hyperbolic.
    LocalNotHyperbolic { place: String, witt_index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PfisterSimilarity {
    Yes(PfisterCertificate),
    No(PfisterObstruction),
    Undecided(String),
}

impl PfisterSimilarity {
    pub fn is_yes(&self) -> bool {
        matches!(self, PfisterSimilarity::Yes(_))
    }
    pub fn is_no(&self) -> bool {
        matches!(self, PfisterSimilarity::No(_))
    }

    pub fn truth(&self) -> Option<bool> {
        match self {
            PfisterSimilarity::Yes(_) => Some(true),
            PfisterSimilarity::No(_) => Some(false),
            PfisterSimilarity::Undecided(_) => None,
        }
    }

    pub fn to_json(&self, f: &Field) -> serde_json::Value {
        match self {
            PfisterSimilarity::Yes(c) => serde_json::json!({
                "verdict": "yes",
                "scalar": f.format(&c.scalar),
                "slots": c.slots.iter().map(|s| f.format(s)).collect::<Vec<_>>(),
                "binary": c.binary.as_ref().map(|b| f.format(b)),
            }),
            PfisterSimilarity::No(o) => serde_json::json!({ "verdict": "no", "obstruction": o }),
            PfisterSimilarity::Undecided(r) => serde_json::json!({ "verdict": "undecided", "reason": r }),
        }
    }
}

fn log2_dim(n: usize) -> Result<u32> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwoDim(n));
    }
    Ok(n.trailing_zeros())
}

/// Certificate for a hyperbolic form of dimension 2^m.
fn hyperbolic_certificate(f: &Field, m: u32) -> PfisterCertificate {
    if f.characteristic() == 2 {
        PfisterCertificate { scalar: f.one(), slots: vec![f.one(); m as usize - 1], binary: Some(f.zero()) }
    } else {
        let mut slots = vec![f.from_i64(-1)];
        slots.extend(vec![f.one(); m as usize - 1]);
        PfisterCertificate { scalar: f.one(), slots, binary: None }
    }
}

/// Normalizes a binary or diagonal form to c·(Pfister) when the shape
/// already forces it: dims 1, 2 and anisotropic dim 4 with trivial
/// discriminant / Arf invariant.
fn low_dim_certificate(q: &QuadraticForm) -> Result<Option<PfisterCertificate>> {
    let f = q.field();
    let n = q.dim();
    if f.characteristic() != 2 {
        let (d, _) = q.diagonalize()?;
        let c = d[0].clone();
        let rel = |x: &Elem| f.div(x, &c);
        let slots = match n {
            1 => vec![],
            2 => vec![rel(&d[1])?],
            4 => vec![rel(&d[1])?, rel(&d[2])?],
            _ => return Ok(None),
        };
        return Ok(Some(PfisterCertificate { scalar: c, slots, binary: None }));
    }
    let (blocks, _) = symplectic_blocks(q)?;
    // a x² + xy + b y² with a ≠ 0 is a·[1, ab] after y ↦ a y
    let normalized: Vec<(Elem, Elem)> = blocks.iter().map(|(a, b)| (a.clone(), f.mul(a, b))).collect();
    match n {
        2 => {
            let (a, ab) = &normalized[0];
            if f.is_zero(a) {
                return Ok(Some(hyperbolic_certificate(f, 1)));
            }
            Ok(Some(PfisterCertificate { scalar: a.clone(), slots: vec![], binary: Some(ab.clone()) }))
        }
        4 => {
            let (a1, ab1) = &normalized[0];
            let (a2, _) = &normalized[1];
            if f.is_zero(a1) || f.is_zero(a2) {
                return Ok(None);
            }
            // with trivial Arf the two binaries share the class of a1·b1
            Ok(Some(PfisterCertificate { scalar: a1.clone(), slots: vec![f.div(a2, a1)?], binary: Some(ab1.clone()) }))
        }
        _ => Ok(None),
    }
}

fn verified(q: &QuadraticForm, cert: PfisterCertificate) -> Result<PfisterSimilarity> {
    match cert.verify(q) {
        Ok(true) => Ok(PfisterSimilarity::Yes(cert)),
        Ok(false) => Err(Error::InternalInconsistency("Pfister certificate failed isometry verification".into())),
        Err(Error::OracleUndecided { stage, .. }) => {
            Ok(PfisterSimilarity::Undecided(format!("certificate verification undecided during {stage}")))
        }
        Err(e) => Err(e),
    }
}

/// Decides whether q is similar to a Pfister form.
pub fn pfister_similarity(q: &QuadraticForm) -> Result<PfisterSimilarity> {
    q.require_nonsingular()?;
    let f = q.field();
    let n = q.dim();
    let m = log2_dim(n)?;
    if n <= 2 {
        let cert = low_dim_certificate(q)?.expect("binary or unary");
        return verified(q, cert);
    }
    // Pfister forms are anisotropic or hyperbolic
    let index = match witt_index(q) {
        Ok(i) => Some(i),
        Err(Error::OracleUndecided { .. }) => None,
        Err(e) => return Err(e),
    };
    if let Some(i) = index {
        if 2 * i == n {
            return verified(q, hyperbolic_certificate(f, m));
        }
        if i > 0 {
            return Ok(PfisterSimilarity::No(PfisterObstruction::IsotropicNotHyperbolic { witt_index: i, dim: n }));
        }
    }
    if n == 4 {
        return match disc_or_arf_trivial(q)? {
            Some(false) => Ok(PfisterSimilarity::No(PfisterObstruction::NontrivialDiscOrArf)),
            None => Ok(PfisterSimilarity::Undecided("Arf class undecided".into())),
            Some(true) => match low_dim_certificate(q)? {
                Some(cert) => verified(q, cert),
                None => Ok(PfisterSimilarity::Undecided("no normalized binary blocks".into())),
            },
        };
    }
    if index.is_none() {
        return Ok(PfisterSimilarity::Undecided(format!(
            "Witt index of the {n}-dimensional form undecided within search bounds"
        )));
    }
    // anisotropic, dimension ≥ 8
    match f.kind() {
        FieldKind::Rationals => rational_anisotropic_case(q, m),
        FieldKind::Finite { .. } => {
            Err(Error::InternalInconsistency("anisotropic form of dimension ≥ 3 over a finite field".into()))
        }
        FieldKind::RationalFunctions { .. } => {
            Err(Error::InternalInconsistency("anisotropic form of dimension ≥ 5 over F_p(t)".into()))
        }
    }
}

/// Over ℚ an anisotropic form of dimension 2^m ≥ 8 is definite; it is
/// similar to a Pfister form iff it is hyperbolic at every prime, and then
/// it is c·⟨⟨1,…,1⟩⟩.
fn rational_anisotropic_case(q: &QuadraticForm, m: u32) -> Result<PfisterSimilarity> {
    let f = q.field();
    let (d, _) = q.diagonalize()?;
    let diag: Vec<BigRational> = d.iter().map(|e| f.rat(e).expect("rational")).collect();
    let g = rational_global_index(&diag)?;
    for l in &g.locals {
        if l.place != crate::fields::Place::Real && !l.hyperbolic() {
            return Ok(PfisterSimilarity::No(PfisterObstruction::LocalNotHyperbolic {
                place: l.place.label(),
                witt_index: l.witt_index,
            }));
        }
    }
    let c = if diag[0].is_positive() { f.one() } else { f.from_i64(-1) };
    let cert = PfisterCertificate { scalar: c, slots: vec![f.one(); m as usize], binary: None };
    verified(q, cert)
}
