//! Command-line front end. Every command produces one JSON report with the
//! keys `inputs_echo`, `verdicts`, `certificates`, `oracle_bounds` and
//! `seed`; exit code 0 means decided, 1 undecided or inconclusive, 2 an
//! input error.

pub mod corpus;
pub mod grammar;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::algebras::Algebra;
use crate::error::{Error, Result};
use crate::fields::{isotropy_oracle, Elem, Field, IsotropyOutcome, OracleBounds};
use crate::forms::{
    global_index, invariants, is_hyperbolic, isometric, pfister_similarity, tensor, witt_decompose, PfisterSimilarity,
    QuadraticForm,
};
use crate::hermitian::{
    diagonalize_even, from_diagonal, hyperbolic_flag_h, hyperbolic_h, is_hyperbolic_h, is_isotropic_h, isometric_h,
    isometric_h_by_sum, isotropy_witness_h, HermitianForm,
};
use crate::involutions::{
    adjoint_hermitian, decompose, is_hyperbolic_inv, is_isotropic_inv, isomorphism_scalar, pfister_rep,
    theorem_battery_symplectic, theorem_battery_unitary, totally_decomposable_with, BatteryOptions, InvolutionRep,
    Verdict,
};
use crate::linalg::Matrix;
use grammar::{
    build_algebra, build_bilinear, build_field, build_hermitian, build_quadratic, eval_elem, parse_algebra, parse_expr,
    parse_form, parse_literal, Literal,
};

pub const DEFAULT_SEED: u64 = 0x7d1_5eed;

#[derive(Debug, Clone, Parser)]
#[command(name = "tdinv", version, about = "Exact quadratic and hermitian form computations")]
pub struct Command {
    /// Seed for randomized searches (defaults to a fixed constant).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Height bound for witness searches over QQ.
    #[arg(long, global = true)]
    pub search_height: Option<u64>,
    /// Degree bound for witness searches over Fp_t(p).
    #[arg(long, global = true)]
    pub search_degree: Option<u32>,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Replay every certificate from the report data.
    #[arg(long, global = true)]
    pub verify: bool,
    /// Print compact single-line JSON only.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Verb {
    /// Quadratic forms: `qform witt "diag(1,-1)@QQ"`.
    Qform {
        #[command(subcommand)]
        op: QformOp,
    },
    /// Hermitian forms: `herm trace-form "diag(1,3)@quat(a=-1,b=2)@QQ"`.
    Herm {
        #[command(subcommand)]
        op: HermOp,
    },
    /// Quaternion and étale algebras: `alg info "quat(a=-1,b=2)@QQ"`.
    Alg {
        #[command(subcommand)]
        op: AlgOp,
    },
    /// Adjoint involutions of hermitian forms and the theorem batteries.
    Inv {
        #[command(subcommand)]
        op: InvOp,
    },
    /// Run the fixture corpus.
    Corpus {
        /// Directory of `*.tdc` fixture files.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum QformOp {
    /// Witt index, anisotropic kernel and transform.
    Witt {
        form: String,
    },
    /// Isotropy with a witness or an anisotropy certificate.
    Isotropic {
        form: String,
    },
    Hyperbolic {
        form: String,
    },
    Isometric {
        first: String,
        second: String,
    },
    /// Similarity to a Pfister form.
    Pfister {
        form: String,
    },
    /// Dimension, discriminant or Arf invariant, Hasse symbols, signature.
    Invariants {
        form: String,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum HermOp {
    /// The quadratic form x ↦ h(x,x) over the base field.
    TraceForm {
        form: String,
    },
    /// Diagonal profile of an even form.
    Diagonalize {
        form: String,
    },
    Isotropic {
        form: String,
    },
    Hyperbolic {
        form: String,
    },
    Isometric {
        first: String,
        second: String,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum AlgOp {
    /// Dimension, splitting and the norm form with its Pfister certificate.
    Info {
        algebra: String,
    },
    NormForm {
        algebra: String,
    },
    /// Whether the algebra is split.
    Split {
        algebra: String,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum InvOp {
    /// Evaluate the theorem conditions for Ad(φ) ⊗ (B,τ).
    Battery {
        #[command(subcommand)]
        theorem: BatteryOp,
    },
    /// Write the involution as Ad(φ) ⊗ (B,τ).
    Decompose {
        form: String,
    },
    Isotropic {
        form: String,
    },
    Hyperbolic {
        form: String,
    },
    Isomorphic {
        first: String,
        second: String,
    },
    /// Search for ψ = ⟨⟨slots⟩⟩ with an isomorphism to Ad(ψ) ⊗ (B,τ).
    TotallyDecomposable {
        form: String,
        #[arg(long, default_value_t = 256)]
        slot_limit: usize,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum BatteryOp {
    /// Ad(φ) ⊗ (Q,γ) with Q given as `a=..,b=..@FIELD`.
    Symplectic {
        #[arg(long)]
        quat: String,
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 256)]
        slot_limit: usize,
    },
    /// Ad(φ) ⊗ (K,τ) with K given as `a=..@FIELD` or `split@FIELD`.
    Unitary {
        #[arg(long)]
        etale: String,
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 256)]
        slot_limit: usize,
    },
}

impl Command {
    pub fn bounds(&self) -> OracleBounds {
        let mut b = OracleBounds { seed: self.seed.unwrap_or(DEFAULT_SEED), ..OracleBounds::default() };
        if let Some(h) = self.search_height {
            b.search_height = h;
        }
        if let Some(d) = self.search_degree {
            b.search_degree = d;
        }
        b
    }

    pub fn name(&self) -> String {
        let s = match &self.verb {
            Verb::Qform { op } => match op {
                QformOp::Witt { .. } => "qform witt",
                QformOp::Isotropic { .. } => "qform isotropic",
                QformOp::Hyperbolic { .. } => "qform hyperbolic",
                QformOp::Isometric { .. } => "qform isometric",
                QformOp::Pfister { .. } => "qform pfister",
                QformOp::Invariants { .. } => "qform invariants",
            },
            Verb::Herm { op } => match op {
                HermOp::TraceForm { .. } => "herm trace-form",
                HermOp::Diagonalize { .. } => "herm diagonalize",
                HermOp::Isotropic { .. } => "herm isotropic",
                HermOp::Hyperbolic { .. } => "herm hyperbolic",
                HermOp::Isometric { .. } => "herm isometric",
            },
            Verb::Alg { op } => match op {
                AlgOp::Info { .. } => "alg info",
                AlgOp::NormForm { .. } => "alg norm-form",
                AlgOp::Split { .. } => "alg split",
            },
            Verb::Inv { op } => match op {
                InvOp::Battery { theorem: BatteryOp::Symplectic { .. } } => "inv battery symplectic",
                InvOp::Battery { theorem: BatteryOp::Unitary { .. } } => "inv battery unitary",
                InvOp::Decompose { .. } => "inv decompose",
                InvOp::Isotropic { .. } => "inv isotropic",
                InvOp::Hyperbolic { .. } => "inv hyperbolic",
                InvOp::Isomorphic { .. } => "inv isomorphic",
                InvOp::TotallyDecomposable { .. } => "inv totally-decomposable",
            },
            Verb::Corpus { .. } => "corpus",
        };
        s.to_string()
    }
}

/// Parses one command line (shell quoting rules, no program name).
pub fn parse_command(text: &str) -> Result<Command> {
    let args = shlex::split(text).ok_or_else(|| Error::Syntax {
        line: 1,
        col: text.chars().count() + 1,
        expected: "closing quote".into(),
    })?;
    Command::try_parse_from(std::iter::once("tdinv".to_string()).chain(args)).map_err(|e| Error::Syntax {
        line: 1,
        col: 1,
        expected: e.to_string().lines().next().unwrap_or("command").trim_start_matches("error: ").to_string(),
    })
}

/// Exit code and JSON report of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

impl Outcome {
    pub fn render(&self, compact: bool) -> String {
        if compact {
            serde_json::to_string(&self.report).expect("serializable")
        } else {
            serde_json::to_string_pretty(&self.report).expect("serializable")
        }
    }

    /// One line of human-readable text derived from the report.
    pub fn summary(&self) -> String {
        let mut parts = vec![format!("exit {}", self.code)];
        if let Some(Value::Object(v)) = self.report.get("verdicts") {
            for (k, x) in v {
                parts.push(format!("{k}={}", if x.is_object() { "{..}".to_string() } else { x.to_string() }));
            }
        }
        if let Some(e) = self.report.get("error") {
            parts.push(format!("error: {}", e["message"].as_str().unwrap_or("")));
        }
        parts.join("  ")
    }
}

pub fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

/// Exit code for an error: undecided oracles and internal disagreements
/// give 1, everything else is an input error.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::OracleUndecided { .. } | Error::InternalInconsistency(_) => 1,
        _ => 2,
    }
}

#[derive(Default)]
struct Report {
    inputs: Vec<String>,
    extra: Map<String, Value>,
    verdicts: Map<String, Value>,
    certificates: Map<String, Value>,
    undecided: Vec<String>,
    checks: Vec<(String, bool)>,
}

impl Report {
    fn verdict(&mut self, key: &str, v: impl Serialize) {
        self.verdicts.insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }

    fn cert(&mut self, key: &str, v: impl Serialize) {
        self.certificates.insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }

    fn extra(&mut self, key: &str, v: impl Serialize) {
        self.extra.insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }

    fn check(&mut self, key: &str, ok: bool) {
        self.checks.push((key.into(), ok));
    }

    /// Records a verdict; an undecided oracle becomes `null`.
    fn settle<T: Serialize + Clone>(&mut self, key: &str, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(v) => {
                self.verdict(key, v.clone());
                Ok(Some(v))
            }
            Err(Error::OracleUndecided { stage, partial_index }) => {
                self.verdict(key, Value::Null);
                self.undecided.push(format!("{key}: {stage} (partial index {partial_index})"));
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    fn literal(&mut self, raw: &str) -> Result<Literal> {
        match parse_literal(raw) {
            Ok(l) => {
                self.inputs.push(l.to_string());
                Ok(l)
            }
            Err(e) => {
                self.inputs.push(raw.to_string());
                Err(e)
            }
        }
    }

    fn qform(&mut self, raw: &str, b: OracleBounds) -> Result<QuadraticForm> {
        match self.literal(raw)? {
            Literal::QForm(q, k) => build_quadratic(&q, &build_field(k, b)?),
            _ => Err(Error::UnsupportedVariant(format!("expected a quadratic form literal FORM@FIELD, got {raw}"))),
        }
    }

    fn herm(&mut self, raw: &str, b: OracleBounds) -> Result<HermitianForm> {
        match self.literal(raw)? {
            Literal::Herm(h, a) => build_hermitian(&h, &build_algebra(&a, b)?),
            _ => Err(Error::UnsupportedVariant(format!(
                "expected a hermitian form literal FORM@ALGEBRA@FIELD, got {raw}"
            ))),
        }
    }

    fn algebra(&mut self, raw: &str, b: OracleBounds) -> Result<Algebra> {
        match self.literal(raw)? {
            Literal::Algebra(a) => build_algebra(&a, b),
            _ => Err(Error::UnsupportedVariant(format!("expected an algebra literal ALGEBRA@FIELD, got {raw}"))),
        }
    }
}

fn fmt_vec(f: &Field, v: &[Elem]) -> Vec<String> {
    v.iter().map(|x| f.format(x)).collect()
}

fn fmt_matrix(f: &Field, m: &Matrix) -> Vec<Vec<String>> {
    m.iter().map(|r| fmt_vec(f, r)).collect()
}

/// Re-reads formatted elements from a report.
fn reparse(f: &Field, v: &Value) -> Result<Vec<Elem>> {
    let items = v.as_array().cloned().unwrap_or_default();
    items.iter().map(|x| eval_elem(&parse_expr(x.as_str().unwrap_or("?"))?, f)).collect()
}

fn reparse_one(f: &Field, v: &Value) -> Result<Elem> {
    eval_elem(&parse_expr(v.as_str().unwrap_or("?"))?, f)
}

pub fn run(cmd: &Command) -> Outcome {
    let bounds = cmd.bounds();
    if let Verb::Corpus { dir } = &cmd.verb {
        return corpus::run_corpus_command(cmd, dir.clone());
    }
    let mut rep = Report::default();
    let result = dispatch(cmd, bounds, &mut rep);
    let mut top = Map::new();
    top.insert("command".into(), json!(cmd.name()));
    top.insert("inputs_echo".into(), json!(rep.inputs));
    top.insert("oracle_bounds".into(), serde_json::to_value(bounds).expect("serializable"));
    top.insert("seed".into(), json!(bounds.seed));
    let mut code = 0;
    if let Err(e) = result {
        code = error_code(&e);
        top.insert("error".into(), json!({ "kind": error_kind(&e), "message": e.to_string() }));
    } else if !rep.undecided.is_empty() {
        code = 1;
    }
    if !rep.undecided.is_empty() {
        top.insert("undecided".into(), json!(rep.undecided));
    }
    if cmd.verify && code != 2 {
        let agrees = rep.checks.iter().all(|(_, ok)| *ok);
        let checks: Map<String, Value> = rep.checks.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        top.insert("verification".into(), json!({ "checks": checks, "agrees": agrees }));
        if !agrees {
            code = code.max(1);
        }
    }
    for (k, v) in rep.extra {
        top.entry(k).or_insert(v);
    }
    top.insert("verdicts".into(), Value::Object(rep.verdicts));
    top.insert("certificates".into(), Value::Object(rep.certificates));
    Outcome { code, report: Value::Object(top) }
}

fn dispatch(cmd: &Command, b: OracleBounds, rep: &mut Report) -> Result<()> {
    match &cmd.verb {
        Verb::Qform { op } => qform(op, b, cmd.verify, rep),
        Verb::Herm { op } => herm(op, b, cmd.verify, rep),
        Verb::Alg { op } => alg(op, b, cmd.verify, rep),
        Verb::Inv { op } => inv(op, b, cmd.verify, rep),
        Verb::Corpus { .. } => unreachable!("handled in run"),
    }
}

fn qform(op: &QformOp, b: OracleBounds, verify: bool, rep: &mut Report) -> Result<()> {
    match op {
        QformOp::Witt { form } => {
            let q = rep.qform(form, b)?;
            q.require_nonsingular()?;
            let f = q.field().clone();
            rep.extra("dim", q.dim());
            rep.extra("invariants", invariants(&q)?);
            match witt_decompose(&q) {
                Ok(d) => {
                    rep.verdict("witt_index", d.witt_index);
                    rep.verdict("kernel_dim", d.anisotropic_kernel.dim());
                    rep.verdict("hyperbolic", 2 * d.witt_index == q.dim());
                    rep.cert("kernel_certificate", &d.kernel_certificate);
                    rep.cert("kernel", fmt_matrix(&f, d.anisotropic_kernel.coeffs()));
                    rep.cert("transform", fmt_matrix(&f, &d.transform));
                    if verify {
                        rep.check("transform", d.verify(&q));
                        let kernel_aniso =
                            matches!(isotropy_oracle(&d.anisotropic_kernel)?, IsotropyOutcome::Anisotropic(_));
                        rep.check("kernel_anisotropic", kernel_aniso);
                        if let Some(g) = global_index(&q)? {
                            rep.check("local_global_index", g.witt_index == d.witt_index);
                        }
                    }
                }
                Err(Error::OracleUndecided { stage, partial_index }) => match global_index(&q)? {
                    Some(g) => {
                        rep.verdict("witt_index", g.witt_index);
                        rep.verdict("kernel_dim", q.dim() - 2 * g.witt_index);
                        rep.verdict("hyperbolic", 2 * g.witt_index == q.dim());
                        rep.cert("local_global", &g);
                        rep.cert(
                            "constructive_split_stopped",
                            json!({ "stage": stage, "partial_index": partial_index }),
                        );
                    }
                    None => {
                        rep.settle::<usize>("witt_index", Err(Error::OracleUndecided { stage, partial_index }))?;
                        rep.cert("partial_index", partial_index);
                    }
                },
                Err(e) => return Err(e),
            }
        }
        QformOp::Isotropic { form } => {
            let q = rep.qform(form, b)?;
            q.require_nonsingular()?;
            let f = q.field().clone();
            rep.extra("dim", q.dim());
            match isotropy_oracle(&q)? {
                IsotropyOutcome::Witness(w) => {
                    rep.verdict("isotropic", true);
                    rep.cert("witness", fmt_vec(&f, &w));
                    if verify {
                        let w = reparse(&f, &rep.certificates["witness"])?;
                        rep.check("witness", w.iter().any(|x| !f.is_zero(x)) && f.is_zero(&q.eval(&w)));
                    }
                }
                IsotropyOutcome::Anisotropic(c) => {
                    rep.verdict("isotropic", false);
                    rep.cert("anisotropy", &c);
                    if verify {
                        if let Some(g) = global_index(&q)? {
                            rep.check("local_global_index", g.witt_index == 0);
                        } else {
                            rep.check("witt_index", witt_decompose(&q)?.witt_index == 0);
                        }
                    }
                }
                IsotropyOutcome::Undecided => {
                    rep.settle::<bool>(
                        "isotropic",
                        Err(Error::OracleUndecided { stage: "isotropy oracle".into(), partial_index: 0 }),
                    )?;
                }
            }
        }
        QformOp::Hyperbolic { form } => {
            let q = rep.qform(form, b)?;
            rep.extra("dim", q.dim());
            if let Some(h) = rep.settle("hyperbolic", is_hyperbolic(&q))? {
                if verify {
                    let d = witt_decompose(&q);
                    if let Ok(d) = d {
                        rep.check("transform", d.verify(&q));
                        rep.check("witt_index", (2 * d.witt_index == q.dim()) == h);
                    }
                }
            }
        }
        QformOp::Isometric { first, second } => {
            let q1 = rep.qform(first, b)?;
            let q2 = rep.qform(second, b)?;
            rep.extra("dim", [q1.dim(), q2.dim()]);
            if let Some(iso) = rep.settle("isometric", isometric(&q1, &q2))? {
                rep.cert("criterion", "q1 ⊥ −q2 is hyperbolic");
                if verify && q1.dim() == q2.dim() {
                    let sum = q1.orthogonal_sum(&q2.neg())?;
                    if let Ok(d) = witt_decompose(&sum) {
                        rep.check("transform", d.verify(&sum));
                        rep.check("hyperbolic_sum", (2 * d.witt_index == sum.dim()) == iso);
                    }
                    let (i1, i2) = (invariants(&q1)?, invariants(&q2)?);
                    if iso {
                        rep.check("invariants", i1 == i2);
                    }
                }
            }
        }
        QformOp::Pfister { form } => {
            let q = rep.qform(form, b)?;
            let f = q.field().clone();
            rep.extra("dim", q.dim());
            let p = pfister_similarity(&q)?;
            rep.verdict("pfister_similar", p.truth());
            rep.cert("pfister", p.to_json(&f));
            if p.truth().is_none() {
                rep.undecided.push("pfister_similar: outside the decided range".into());
            }
            if verify {
                if let PfisterSimilarity::Yes(c) = &p {
                    rep.check("similarity", c.verify(&q)?);
                }
            }
        }
        QformOp::Invariants { form } => {
            let q = rep.qform(form, b)?;
            rep.extra("dim", q.dim());
            let inv = invariants(&q)?;
            rep.verdict("trivial_class", inv.trivial);
            if inv.trivial.is_none() {
                rep.undecided.push("trivial_class: Artin–Schreier membership undecided".into());
            }
            rep.cert("invariants", &inv);
        }
    }
    Ok(())
}

fn herm_header(rep: &mut Report, h: &HermitianForm) -> Result<()> {
    rep.extra("dimD", h.dim());
    rep.extra("dimF", h.dim_f());
    rep.extra("even", h.is_even());
    rep.extra("base", h.algebra().name());
    let profile = if h.is_even() && h.is_nondegenerate() && !h.algebra().is_base() {
        Some(diagonalize_even(h)?.display)
    } else {
        None
    };
    rep.extra("profile", profile);
    Ok(())
}

fn herm(op: &HermOp, b: OracleBounds, verify: bool, rep: &mut Report) -> Result<()> {
    match op {
        HermOp::TraceForm { form } => {
            let h = rep.herm(form, b)?;
            herm_header(rep, &h)?;
            let q = h.trace_form()?;
            let f = h.field().clone();
            rep.verdict("nondegenerate", h.is_nondegenerate());
            rep.verdict("even", h.is_even());
            rep.cert("trace_form", fmt_matrix(&f, q.coeffs()));
            if verify {
                let phi = diagonalize_even(&h)?.bilinear(&f)?;
                let expected = tensor(&phi, &h.algebra().norm_form())?;
                rep.check("phi_tensor_norm_form", isometric(&q, &expected)?);
            }
        }
        HermOp::Diagonalize { form } => {
            let h = rep.herm(form, b)?;
            herm_header(rep, &h)?;
            let p = diagonalize_even(&h)?;
            rep.verdict("profile", &p.display);
            if verify {
                let back = from_diagonal(h.algebra(), &reparse(h.field(), &json!(p.display))?)?;
                rep.check("profile_isometric", isometric_h(&back, &h)?);
            }
        }
        HermOp::Isotropic { form } => {
            let h = rep.herm(form, b)?;
            herm_header(rep, &h)?;
            if let Some(iso) = rep.settle("isotropic", is_isotropic_h(&h))? {
                if iso {
                    if let Some(x) = isotropy_witness_h(&h)? {
                        let shown: Vec<String> = x.iter().map(|e| e.format()).collect();
                        rep.cert("witness", &shown);
                        rep.extra("witnesses", [&shown]);
                        if verify {
                            let alg = h.algebra();
                            let x = shown
                                .iter()
                                .map(|s| grammar::eval_alg_elem(&parse_expr(s)?, alg))
                                .collect::<Result<Vec<_>>>()?;
                            let nonzero = x.iter().any(|e| !e.is_zero());
                            rep.check("witness", nonzero && h.eval(&x, &x)?.is_zero());
                        }
                    }
                } else {
                    rep.cert("criterion", "trace form anisotropic");
                    rep.extra("witnesses", Vec::<Vec<String>>::new());
                }
            }
        }
        HermOp::Hyperbolic { form } => {
            let h = rep.herm(form, b)?;
            herm_header(rep, &h)?;
            if let Some(hyp) = rep.settle("hyperbolic", is_hyperbolic_h(&h))? {
                if hyp {
                    if let Some(flag) = hyperbolic_flag_h(&h)? {
                        rep.cert("lagrangian_f_basis", fmt_matrix(h.field(), &flag));
                    }
                }
                if verify && h.dim() % 2 == 0 {
                    let hh = hyperbolic_h(h.algebra(), h.lambda(), h.dim() / 2)?;
                    rep.check("sum_criterion", isometric_h_by_sum(&h, &hh)? == hyp);
                }
            }
        }
        HermOp::Isometric { first, second } => {
            let h1 = rep.herm(first, b)?;
            let h2 = rep.herm(second, b)?;
            herm_header(rep, &h1)?;
            if let Some(iso) = rep.settle("isometric", isometric_h(&h1, &h2))? {
                rep.cert("criterion", "trace forms isometric");
                if verify {
                    rep.check("sum_criterion", isometric_h_by_sum(&h1, &h2)? == iso);
                }
            }
        }
    }
    Ok(())
}

fn alg(op: &AlgOp, b: OracleBounds, verify: bool, rep: &mut Report) -> Result<()> {
    let raw = match op {
        AlgOp::Info { algebra } | AlgOp::NormForm { algebra } | AlgOp::Split { algebra } => algebra,
    };
    let a = rep.algebra(raw, b)?;
    let f = a.field().clone();
    rep.extra("dim", a.dim());
    rep.extra("name", a.name());
    let norm = a.norm_form();
    let show_norm = |rep: &mut Report| {
        rep.cert("norm_form", fmt_matrix(&f, norm.coeffs()));
    };
    match op {
        AlgOp::Info { .. } | AlgOp::NormForm { .. } => {
            show_norm(rep);
            let p = pfister_similarity(&norm)?;
            rep.verdict("norm_form_pfister", p.truth());
            rep.cert("pfister", p.to_json(&f));
            if matches!(op, AlgOp::Info { .. }) {
                let split = rep.settle("split", a.is_split())?;
                rep.verdict("division", split.map(|s| !s && a.is_quaternion()));
            }
            if verify {
                if let PfisterSimilarity::Yes(c) = &p {
                    rep.check("pfister", c.verify(&norm)?);
                }
            }
        }
        AlgOp::Split { .. } => {
            show_norm(rep);
            if let Some(s) = rep.settle("split", a.is_split())? {
                if verify {
                    rep.check("hyperbolic_norm_form", is_hyperbolic(&norm)? == s);
                }
            }
        }
    }
    Ok(())
}

fn inv_rep(rep: &mut Report, raw: &str, b: OracleBounds) -> Result<InvolutionRep> {
    let h = rep.herm(raw, b)?;
    let r = adjoint_hermitian(&h)?;
    rep.extra("kind", r.kind());
    rep.extra("degree", r.degree());
    rep.extra("base", h.algebra().name());
    Ok(r)
}

fn replay_factor(rep: &mut Report, key: &str, inv: &InvolutionRep, cert: &Value) -> Result<()> {
    let (Some(slots), Some(scalar)) = (cert.get("psi_slots"), cert.get("similarity_scalar")) else {
        return Ok(());
    };
    let f = inv.field();
    let base = inv.base().expect("hermitian");
    let psi = pfister_rep(base, &reparse(f, slots)?)?;
    let c = reparse_one(f, scalar)?;
    let ok = isometric(&inv.trace_form()?, &psi.trace_form()?.scale(&c)?)?;
    rep.check(key, ok);
    Ok(())
}

fn inv(op: &InvOp, b: OracleBounds, verify: bool, rep: &mut Report) -> Result<()> {
    match op {
        InvOp::Decompose { form } => {
            let r = inv_rep(rep, form, b)?;
            let d = decompose(&r)?;
            let f = r.field().clone();
            let phi = d.phi.diagonal_entries().unwrap_or_default();
            rep.verdict("decomposed", true);
            rep.cert("phi", fmt_vec(&f, &phi));
            rep.cert("base", d.base.name());
            rep.cert("method", d.certificate);
            if verify {
                let back = from_diagonal(&d.base, &reparse(&f, &rep.certificates["phi"])?)?;
                let h = rep_hermitian(form, b)?;
                rep.check("round_trip", isometric_h(&back, &h)?);
            }
        }
        InvOp::Isotropic { form } => {
            let r = inv_rep(rep, form, b)?;
            if let Some(v) = rep.settle("isotropic", is_isotropic_inv(&r))? {
                rep.cert("criterion", "hermitian level and ⊠ image agree");
                if verify {
                    let h = rep_hermitian(form, b)?;
                    rep.check("hermitian_level", is_isotropic_h(&h)? == v);
                }
            }
        }
        InvOp::Hyperbolic { form } => {
            let r = inv_rep(rep, form, b)?;
            if let Some(v) = rep.settle("hyperbolic", is_hyperbolic_inv(&r))? {
                rep.cert("criterion", "hermitian level and ⊠ image agree");
                if verify {
                    let h = rep_hermitian(form, b)?;
                    rep.check("hermitian_level", is_hyperbolic_h(&h)? == v);
                }
            }
        }
        InvOp::Isomorphic { first, second } => {
            let r1 = inv_rep(rep, first, b)?;
            let h2 = rep.herm(second, b)?;
            let r2 = adjoint_hermitian(&h2)?;
            let f = r1.field().clone();
            if let Some(c) = rep.settle("isomorphic", isomorphism_scalar(&r1, &r2).map(|c| c.is_some()))? {
                if c {
                    let s = isomorphism_scalar(&r1, &r2)?.expect("isomorphic");
                    rep.cert("similarity_scalar", f.format(&s));
                    if verify {
                        let s = reparse_one(&f, &rep.certificates["similarity_scalar"])?;
                        rep.check("similarity", isometric(&r1.trace_form()?, &r2.trace_form()?.scale(&s)?)?);
                    }
                } else {
                    rep.cert("criterion", "trace forms not similar");
                }
            }
        }
        InvOp::TotallyDecomposable { form, slot_limit } => {
            let r = inv_rep(rep, form, b)?;
            let td = totally_decomposable_with(&r, *slot_limit)?;
            let f = r.field().clone();
            rep.verdict("totally_decomposable", td.truth());
            if td.truth().is_none() {
                rep.undecided.push("totally_decomposable: no decision within the search limits".into());
            }
            let cert = td.to_json(&f);
            if verify {
                replay_factor(rep, "psi_factor", &r, &cert)?;
            }
            rep.cert("decomposition", cert);
        }
        InvOp::Battery { theorem } => {
            let (symplectic, raw_alg, raw_phi, limit) = match theorem {
                BatteryOp::Symplectic { quat, phi, slot_limit } => (true, quat, phi, *slot_limit),
                BatteryOp::Unitary { etale, phi, slot_limit } => (false, etale, phi, *slot_limit),
            };
            let lit = parse_algebra(raw_alg, Some(if symplectic { "quat" } else { "etale" }));
            let lit = match lit {
                Ok(l) => {
                    rep.inputs.push(l.to_string());
                    l
                }
                Err(e) => {
                    rep.inputs.push(raw_alg.clone());
                    return Err(e);
                }
            };
            let phi_expr = parse_form(raw_phi)?;
            rep.inputs.push(phi_expr.to_string());
            let base = build_algebra(&lit, b)?;
            let phi = build_bilinear(&phi_expr, base.field())?;
            let options = BatteryOptions { slot_search_limit: limit, ..BatteryOptions::default() };
            let report = if symplectic {
                theorem_battery_symplectic(&base, &phi, &options)?
            } else {
                theorem_battery_unitary(&base, &phi, &options)?
            };
            let conditions: Map<String, Value> =
                report.conditions.iter().map(|(k, c)| (k.clone(), json!(c.value))).collect();
            rep.verdict("conditions", &conditions);
            rep.verdict("verdict", &report.verdict);
            for (k, c) in &report.conditions {
                rep.cert(k, &c.certificate);
            }
            rep.extra("theorem", &report.theorem);
            rep.extra("base", &report.base);
            rep.extra("phi", &report.phi);
            rep.extra("degree", report.degree);
            rep.extra("conditions", &conditions);
            rep.extra("sampled_extensions", &report.sampled_extensions);
            rep.extra("sampling_complete", report.sampling_complete);
            rep.extra("auxiliary", &report.auxiliary);
            rep.extra("verdict", &report.verdict);
            if let Verdict::Inconclusive { reasons } = &report.verdict {
                rep.undecided.extend(reasons.iter().cloned());
                if reasons.is_empty() {
                    rep.undecided.push("battery inconclusive".into());
                }
            }
            if verify && report.degree > 0 && report.conditions.contains_key("i") {
                let r = adjoint_hermitian(&crate::hermitian::tensor_bh(&phi, &crate::hermitian::unit_form(&base))?)?;
                let factor_key = if symplectic { "iii" } else { "ii" };
                let i_cert = report.conditions["i"].certificate.clone();
                replay_factor(rep, "i_psi_factor", &r, &i_cert)?;
                let f_cert = report.conditions[factor_key].certificate.clone();
                replay_factor(rep, "factor_psi", &r, &f_cert)?;
            }
        }
    }
    Ok(())
}

fn rep_hermitian(raw: &str, b: OracleBounds) -> Result<HermitianForm> {
    match parse_literal(raw)? {
        Literal::Herm(h, a) => build_hermitian(&h, &build_algebra(&a, b)?),
        _ => Err(Error::UnsupportedVariant("expected a hermitian form literal".into())),
    }
}

/// Runs a command given as process arguments (without the program name)
/// and returns the exit code; prints the report.
pub fn main_with_args<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let cmd = match Command::try_parse_from(std::iter::once("tdinv".to_string()).chain(args)) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = run(&cmd);
    let text = outcome.render(cmd.json);
    if let Some(path) = &cmd.out {
        if let Err(e) = std::fs::write(path, outcome.render(false) + "\n") {
            eprintln!("cannot write {}: {e}", path.display());
            return 2;
        }
    }
    println!("{text}");
    if !cmd.json {
        eprintln!("{}", outcome.summary());
    }
    outcome.code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(line: &str) -> Outcome {
        run(&parse_command(line).unwrap())
    }

    #[test]
    fn witt_example() {
        let o = go(r#"qform witt "diag(1,-1)@QQ""#);
        assert_eq!(o.code, 0);
        assert_eq!(o.report["verdicts"]["witt_index"], 1);
        assert_eq!(o.report["verdicts"]["kernel_dim"], 0);
        for key in ["inputs_echo", "verdicts", "certificates", "oracle_bounds", "seed"] {
            assert!(o.report.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn input_errors_exit_two() {
        let o = go(r#"qform witt "diag(1,0)@QQ""#);
        assert_eq!(o.code, 2);
        assert_eq!(o.report["error"]["kind"], "ZeroEntry");
        let o = go(r#"qform witt "diag(1,-1)@RR""#);
        assert_eq!(o.code, 2);
        assert_eq!(o.report["error"]["kind"], "Syntax");
        assert!(parse_command("qform frobnicate x").is_err());
        assert!(parse_command("qform witt \"diag(1").is_err());
    }

    #[test]
    fn verify_replays() {
        for line in [
            r#"qform isotropic "diag(1,1,-2)@QQ" --verify"#,
            r#"qform witt "diag(1,1,1,1)@GF(3)" --verify"#,
            r#"qform pfister "pfister_b(2,3)@GF(5)" --verify"#,
            r#"herm trace-form "diag(1,3)@quat(a=-1,b=2)@QQ" --verify"#,
            r#"herm isotropic "diag(1,-1)@quat(a=-1,b=2)@QQ" --verify"#,
            r#"inv totally-decomposable "pfister_b(2)@quat(a=-1,b=2)@QQ" --verify"#,
            r#"inv isomorphic "diag(1,3)@etale(a=-1)@QQ" "diag(2,6)@etale(a=-1)@QQ" --verify"#,
        ] {
            let o = go(line);
            assert_eq!(o.code, 0, "{line}: {}", o.render(false));
            assert_eq!(o.report["verification"]["agrees"], true, "{line}");
        }
    }

    #[test]
    fn battery_report_shape() {
        let o = go(r#"inv battery symplectic --quat a=-1,b=2@QQ --phi "pfister_b(2,3)""#);
        assert_eq!(o.code, 0, "{}", o.render(false));
        assert_eq!(o.report["verdict"]["kind"], "AllEquivalent");
        for k in ["i", "ii", "iii", "iv"] {
            assert_eq!(o.report["conditions"][k], true);
        }
        assert_eq!(o.report["inputs_echo"][0], "quat(a=-1,b=2)@QQ");
    }

    #[test]
    fn deterministic_output() {
        let line = r#"herm isotropic "diag(1,1,1)@quat(a=-1,b=-1)@QQ" --json"#;
        assert_eq!(go(line).render(true), go(line).render(true));
    }
}
