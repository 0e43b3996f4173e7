//! Object literals: fields, algebras, quadratic and hermitian forms.
//!
//! ```text
//! literal  := field | shape '@' field | form '@' field | form '@' shape '@' field
//! field    := 'GF(' q ')' | 'QQ' | 'Fp_t(' p ')'
//! shape    := 'quat(a=' expr ',b=' expr ')' | 'etale(a=' expr ')' | 'etale(split)'
//! form     := diag(e,…) | hyp(k) | binq(a,c) | pfister_q(a;s,…) | pfister_b(s,…)
//!           | norm(shape) | tensor(form,form) | sum(form,…) | scale(e,form)
//!           | gram(e,…;e,…;…)
//! expr     := integers, z (GF(p^k) generator), t (F_p(t)), u v w (algebra
//!             basis), combined with + - * / ^ and parentheses
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::algebras::{Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::fields::{Elem, Field, OracleBounds};
use crate::forms::{
    bilinear_pfister, binary_quadratic, diagonal_bilinear, quadratic_pfister, tensor, tensor_bb, BilinearForm,
    QuadraticForm,
};
use crate::hermitian::{from_diagonal, hyperbolic_h, tensor_bh, unit_form, HermitianForm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(char),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldLit {
    Gf(u64),
    Rationals,
    FpT(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeLit {
    Quat { a: Expr, b: Expr },
    Etale { a: Expr },
    Split,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgLit {
    pub shape: ShapeLit,
    pub field: FieldLit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormExpr {
    Diag(Vec<Expr>),
    Hyp(usize),
    Binq(Expr, Expr),
    PfisterQ(Expr, Vec<Expr>),
    PfisterB(Vec<Expr>),
    Norm(ShapeLit),
    Tensor(Box<FormExpr>, Box<FormExpr>),
    Sum(Vec<FormExpr>),
    Scale(Expr, Box<FormExpr>),
    Gram(Vec<Vec<Expr>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Field(FieldLit),
    Algebra(AlgLit),
    QForm(FormExpr, FieldLit),
    Herm(FormExpr, AlgLit),
}

// ---------------------------------------------------------------- printing

fn is_additive(e: &Expr) -> bool {
    matches!(e, Expr::Add(..) | Expr::Sub(..))
}

fn is_multiplicative(e: &Expr) -> bool {
    matches!(e, Expr::Mul(..) | Expr::Div(..))
}

fn paren(f: &mut fmt::Formatter<'_>, e: &Expr, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Var(c) => write!(f, "{c}"),
            Expr::Neg(x) => {
                f.write_str("-")?;
                paren(f, x, is_additive(x) || is_multiplicative(x))
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                paren(f, a, false)?;
                f.write_str(if matches!(self, Expr::Add(..)) { "+" } else { "-" })?;
                paren(f, b, is_additive(b))
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                paren(f, a, is_additive(a))?;
                f.write_str(if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                paren(f, b, is_additive(b) || is_multiplicative(b))
            }
            Expr::Pow(x, k) => {
                paren(f, x, !matches!(**x, Expr::Int(_) | Expr::Var(_)))?;
                write!(f, "^{k}")
            }
        }
    }
}

impl fmt::Display for FieldLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldLit::Gf(q) => write!(f, "GF({q})"),
            FieldLit::Rationals => f.write_str("QQ"),
            FieldLit::FpT(p) => write!(f, "Fp_t({p})"),
        }
    }
}

impl fmt::Display for ShapeLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeLit::Quat { a, b } => write!(f, "quat(a={a},b={b})"),
            ShapeLit::Etale { a } => write!(f, "etale(a={a})"),
            ShapeLit::Split => f.write_str("etale(split)"),
        }
    }
}

impl fmt::Display for AlgLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.shape, self.field)
    }
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormExpr::Diag(v) => write!(f, "diag({})", join(v, ",")),
            FormExpr::Hyp(k) => write!(f, "hyp({k})"),
            FormExpr::Binq(a, c) => write!(f, "binq({a},{c})"),
            FormExpr::PfisterQ(a, s) if s.is_empty() => write!(f, "pfister_q({a})"),
            FormExpr::PfisterQ(a, s) => write!(f, "pfister_q({a};{})", join(s, ",")),
            FormExpr::PfisterB(s) => write!(f, "pfister_b({})", join(s, ",")),
            FormExpr::Norm(s) => write!(f, "norm({s})"),
            FormExpr::Tensor(b, q) => write!(f, "tensor({b},{q})"),
            FormExpr::Sum(v) => write!(f, "sum({})", join(v, ",")),
            FormExpr::Scale(c, q) => write!(f, "scale({c},{q})"),
            FormExpr::Gram(rows) => {
                let rows: Vec<String> = rows.iter().map(|r| join(r, ",")).collect();
                write!(f, "gram({})", rows.join(";"))
            }
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Field(k) => write!(f, "{k}"),
            Literal::Algebra(a) => write!(f, "{a}"),
            Literal::QForm(q, k) => write!(f, "{q}@{k}"),
            Literal::Herm(h, a) => write!(f, "{h}@{a}"),
        }
    }
}

// ----------------------------------------------------------------- parsing

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, chars: src.char_indices().collect(), pos: 0 }
    }

    fn error(&self, expected: &str) -> Error {
        let offset = self.chars.get(self.pos).map_or(self.src.len(), |(i, _)| *i);
        let before = &self.src[..offset];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::Syntax { line, col, expected: expected.into() }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("'{c}'")))
        }
    }

    fn peek_ident(&mut self) -> Option<String> {
        self.skip_ws();
        let mut i = self.pos;
        let mut s = String::new();
        while let Some((_, c)) = self.chars.get(i) {
            if c.is_ascii_alphanumeric() || *c == '_' {
                if s.is_empty() && c.is_ascii_digit() {
                    break;
                }
                s.push(*c);
                i += 1;
            } else {
                break;
            }
        }
        (!s.is_empty()).then_some(s)
    }

    fn ident(&mut self, expected: &str) -> Result<String> {
        match self.peek_ident() {
            Some(s) => {
                self.pos += s.chars().count();
                Ok(s)
            }
            None => Err(self.error(expected)),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek_ident() {
            Some(s) if s == kw => {
                self.pos += s.chars().count();
                Ok(())
            }
            _ => Err(self.error(&format!("'{kw}'"))),
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("non-negative integer"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|(_, c)| c).collect();
        Ok(s.parse().expect("digits"))
    }

    fn small_uint<T: TryFrom<u64>>(&mut self, what: &str) -> Result<T> {
        let save = self.pos;
        let n = self.uint()?;
        n.to_u64().and_then(|v| T::try_from(v).ok()).ok_or_else(|| {
            self.pos = save;
            self.error(what)
        })
    }

    fn end(&mut self) -> Result<()> {
        if self.peek().is_some() {
            Err(self.error("end of input"))
        } else {
            Ok(())
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            if self.eat('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat('/') {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let k = self.small_uint::<u32>("exponent")?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.uint()?)),
            Some(c @ ('z' | 't' | 'u' | 'v' | 'w')) if self.peek_ident().as_deref() == Some(&c.to_string()) => {
                self.pos += 1;
                Ok(Expr::Var(c))
            }
            _ => Err(self.error("element (integer, z, t, u, v, w or '(')")),
        }
    }

    fn expr_list(&mut self, close: &[char]) -> Result<Vec<Expr>> {
        let mut out = Vec::new();
        if self.peek().is_some_and(|c| close.contains(&c)) {
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if !self.eat(',') {
                return Ok(out);
            }
        }
    }

    fn field(&mut self) -> Result<FieldLit> {
        let expected = "field (GF(q), QQ or Fp_t(p))";
        let save = self.pos;
        match self.ident(expected)?.as_str() {
            "QQ" => Ok(FieldLit::Rationals),
            "GF" => {
                self.expect('(')?;
                let q = self.small_uint::<u64>("field size")?;
                self.expect(')')?;
                Ok(FieldLit::Gf(q))
            }
            "Fp_t" => {
                self.expect('(')?;
                let p = self.small_uint::<u32>("characteristic")?;
                self.expect(')')?;
                Ok(FieldLit::FpT(p))
            }
            _ => {
                self.pos = save;
                Err(self.error(expected))
            }
        }
    }

    fn shape(&mut self) -> Result<ShapeLit> {
        let expected = "algebra (quat(...) or etale(...))";
        let save = self.pos;
        match self.ident(expected)?.as_str() {
            "quat" => {
                self.expect('(')?;
                self.keyword("a")?;
                self.expect('=')?;
                let a = self.expr()?;
                self.expect(',')?;
                self.keyword("b")?;
                self.expect('=')?;
                let b = self.expr()?;
                self.expect(')')?;
                Ok(ShapeLit::Quat { a, b })
            }
            "etale" => {
                self.expect('(')?;
                if self.peek_ident().as_deref() == Some("split") {
                    self.keyword("split")?;
                    self.expect(')')?;
                    return Ok(ShapeLit::Split);
                }
                self.keyword("a")?;
                self.expect('=')?;
                let a = self.expr()?;
                self.expect(')')?;
                Ok(ShapeLit::Etale { a })
            }
            _ => {
                self.pos = save;
                Err(self.error(expected))
            }
        }
    }

    fn form(&mut self) -> Result<FormExpr> {
        let expected = "form (diag, hyp, binq, pfister_q, pfister_b, norm, tensor, sum, scale, gram)";
        let save = self.pos;
        let name = self.ident(expected)?;
        let known = ["diag", "hyp", "binq", "pfister_q", "pfister_b", "norm", "tensor", "sum", "scale", "gram"];
        if !known.contains(&name.as_str()) {
            self.pos = save;
            return Err(self.error(expected));
        }
        self.expect('(')?;
        let out = match name.as_str() {
            "diag" => FormExpr::Diag(self.expr_list(&[')'])?),
            "hyp" => FormExpr::Hyp(self.small_uint::<usize>("number of hyperbolic planes")?),
            "binq" => {
                let a = self.expr()?;
                self.expect(',')?;
                FormExpr::Binq(a, self.expr()?)
            }
            "pfister_q" => {
                let a = self.expr()?;
                let slots = if self.eat(';') { self.expr_list(&[')'])? } else { Vec::new() };
                FormExpr::PfisterQ(a, slots)
            }
            "pfister_b" => FormExpr::PfisterB(self.expr_list(&[')'])?),
            "norm" => FormExpr::Norm(self.shape()?),
            "tensor" => {
                let b = self.form()?;
                self.expect(',')?;
                FormExpr::Tensor(Box::new(b), Box::new(self.form()?))
            }
            "sum" => {
                let mut v = vec![self.form()?];
                while self.eat(',') {
                    v.push(self.form()?);
                }
                FormExpr::Sum(v)
            }
            "scale" => {
                let c = self.expr()?;
                self.expect(',')?;
                FormExpr::Scale(c, Box::new(self.form()?))
            }
            _ => {
                let mut rows = vec![self.expr_list(&[')', ';'])?];
                while self.eat(';') {
                    rows.push(self.expr_list(&[')', ';'])?);
                }
                if rows.len() == 1 && rows[0].is_empty() {
                    rows.clear();
                }
                FormExpr::Gram(rows)
            }
        };
        self.expect(')')?;
        Ok(out)
    }

    fn literal(&mut self) -> Result<Literal> {
        let head = self.peek_ident();
        let out = match head.as_deref() {
            Some("GF" | "QQ" | "Fp_t") => Literal::Field(self.field()?),
            Some("quat" | "etale") => {
                let shape = self.shape()?;
                self.expect('@')?;
                Literal::Algebra(AlgLit { shape, field: self.field()? })
            }
            _ => {
                let form = self.form()?;
                self.expect('@')?;
                match self.peek_ident().as_deref() {
                    Some("quat" | "etale") => {
                        let shape = self.shape()?;
                        self.expect('@')?;
                        Literal::Herm(form, AlgLit { shape, field: self.field()? })
                    }
                    _ => Literal::QForm(form, self.field()?),
                }
            }
        };
        self.end()?;
        Ok(out)
    }
}

pub fn parse_literal(s: &str) -> Result<Literal> {
    Parser::new(s).literal()
}

pub fn parse_form(s: &str) -> Result<FormExpr> {
    let mut p = Parser::new(s);
    let f = p.form()?;
    p.end()?;
    Ok(f)
}

pub fn parse_expr(s: &str) -> Result<Expr> {
    let mut p = Parser::new(s);
    let e = p.expr()?;
    p.end()?;
    Ok(e)
}

pub fn parse_field(s: &str) -> Result<FieldLit> {
    let mut p = Parser::new(s);
    let f = p.field()?;
    p.end()?;
    Ok(f)
}

/// Accepts `quat(a=..,b=..)@F`, `etale(..)@F`, or the bare argument forms
/// `a=..,b=..@F`, `a=..@F`, `split@F` when `hint` names the shape.
pub fn parse_algebra(s: &str, hint: Option<&str>) -> Result<AlgLit> {
    let t = s.trim_start();
    let wrapped;
    let src = match hint {
        Some(h) if !t.starts_with(h) => {
            let (args, field) = t.rsplit_once('@').ok_or_else(|| Parser::new(s).error("'@' before the field"))?;
            wrapped = format!("{h}({args})@{field}");
            wrapped.as_str()
        }
        _ => s,
    };
    match parse_literal(src)? {
        Literal::Algebra(a) => Ok(a),
        _ => Err(Parser::new(s).error("algebra literal")),
    }
}

// ---------------------------------------------------------- interpretation

pub fn build_field(lit: FieldLit, bounds: OracleBounds) -> Result<Field> {
    let f = match lit {
        FieldLit::Gf(q) => Field::gf(q)?,
        FieldLit::Rationals => Field::rationals(),
        FieldLit::FpT(p) => Field::rational_functions(p)?,
    };
    Ok(f.with_bounds(bounds))
}

fn unknown_var(c: char, where_: &str) -> Error {
    Error::InvalidField(format!("symbol {c} is not defined over {where_}"))
}

pub fn eval_elem(e: &Expr, f: &Field) -> Result<Elem> {
    Ok(match e {
        Expr::Int(n) => {
            let r = num_rational::BigRational::from_integer(n.clone());
            f.from_rational(&r)?
        }
        Expr::Var(c @ ('z' | 't')) => {
            let ok = match c {
                'z' => f.is_finite(),
                _ => matches!(f.kind(), crate::fields::FieldKind::RationalFunctions { .. }),
            };
            if !ok {
                return Err(unknown_var(*c, &f.name()));
            }
            f.generator()?
        }
        Expr::Var(c) => return Err(unknown_var(*c, &f.name())),
        Expr::Neg(x) => f.neg(&eval_elem(x, f)?),
        Expr::Add(a, b) => f.add(&eval_elem(a, f)?, &eval_elem(b, f)?),
        Expr::Sub(a, b) => f.sub(&eval_elem(a, f)?, &eval_elem(b, f)?),
        Expr::Mul(a, b) => f.mul(&eval_elem(a, f)?, &eval_elem(b, f)?),
        Expr::Div(a, b) => f.div(&eval_elem(a, f)?, &eval_elem(b, f)?)?,
        Expr::Pow(x, k) => f.pow(&eval_elem(x, f)?, *k as u64),
    })
}

pub fn eval_elems(v: &[Expr], f: &Field) -> Result<Vec<Elem>> {
    v.iter().map(|e| eval_elem(e, f)).collect()
}

/// Evaluates an expression in an algebra; u, v, w name the basis after 1.
pub fn eval_alg_elem(e: &Expr, alg: &Algebra) -> Result<AlgebraElement> {
    Ok(match e {
        Expr::Var(c @ ('u' | 'v' | 'w')) => {
            let i = match c {
                'u' => 1,
                'v' => 2,
                _ => 3,
            };
            if i >= alg.dim() {
                return Err(unknown_var(*c, &alg.name()));
            }
            alg.basis(i)
        }
        Expr::Int(_) | Expr::Var(_) => alg.scalar(&eval_elem(e, alg.field())?),
        Expr::Neg(x) => eval_alg_elem(x, alg)?.neg(),
        Expr::Add(a, b) => eval_alg_elem(a, alg)?.add(&eval_alg_elem(b, alg)?)?,
        Expr::Sub(a, b) => eval_alg_elem(a, alg)?.sub(&eval_alg_elem(b, alg)?)?,
        Expr::Mul(a, b) => eval_alg_elem(a, alg)?.mul(&eval_alg_elem(b, alg)?)?,
        Expr::Div(a, b) => eval_alg_elem(a, alg)?.mul(&eval_alg_elem(b, alg)?.inverse()?)?,
        Expr::Pow(x, k) => {
            let base = eval_alg_elem(x, alg)?;
            let mut acc = alg.one();
            for _ in 0..*k {
                acc = acc.mul(&base)?;
            }
            acc
        }
    })
}

pub fn build_shape(shape: &ShapeLit, f: &Field) -> Result<Algebra> {
    match shape {
        ShapeLit::Quat { a, b } => Algebra::quaternion(f, &eval_elem(a, f)?, &eval_elem(b, f)?),
        ShapeLit::Etale { a } => Algebra::etale(f, &eval_elem(a, f)?),
        ShapeLit::Split => Ok(Algebra::split_etale(f)),
    }
}

pub fn build_algebra(lit: &AlgLit, bounds: OracleBounds) -> Result<Algebra> {
    build_shape(&lit.shape, &build_field(lit.field, bounds)?)
}

fn gram_matrix(rows: &[Vec<Expr>], f: &Field) -> Result<Vec<Vec<Elem>>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!("gram needs {n} entries per row")));
    }
    rows.iter().map(|r| eval_elems(r, f)).collect()
}

fn unsupported(form: &FormExpr, what: &str) -> Error {
    Error::UnsupportedVariant(format!("{form} does not denote a {what}"))
}

pub fn build_quadratic(form: &FormExpr, f: &Field) -> Result<QuadraticForm> {
    match form {
        FormExpr::Diag(v) => QuadraticForm::diagonal(f, &eval_elems(v, f)?),
        FormExpr::Hyp(k) => Ok(QuadraticForm::hyperbolic(f, *k)),
        FormExpr::Binq(a, c) => binary_quadratic(f, &eval_elem(a, f)?, &eval_elem(c, f)?),
        FormExpr::PfisterQ(a, s) => quadratic_pfister(f, &eval_elem(a, f)?, &eval_elems(s, f)?),
        FormExpr::PfisterB(s) => {
            let b = bilinear_pfister(f, &eval_elems(s, f)?)?;
            let d = b.diagonal_entries().ok_or_else(|| unsupported(form, "quadratic form"))?;
            QuadraticForm::diagonal(f, &d)
        }
        FormExpr::Norm(s) => Ok(build_shape(s, f)?.norm_form()),
        FormExpr::Tensor(b, q) => tensor(&build_bilinear(b, f)?, &build_quadratic(q, f)?),
        FormExpr::Sum(v) => {
            let mut acc = QuadraticForm::zero_dim(f);
            for x in v {
                acc = acc.orthogonal_sum(&build_quadratic(x, f)?)?;
            }
            Ok(acc)
        }
        FormExpr::Scale(c, q) => build_quadratic(q, f)?.scale(&eval_elem(c, f)?),
        FormExpr::Gram(rows) => QuadraticForm::new(f, gram_matrix(rows, f)?),
    }
}

pub fn build_bilinear(form: &FormExpr, f: &Field) -> Result<BilinearForm> {
    match form {
        FormExpr::Diag(v) => diagonal_bilinear(f, &eval_elems(v, f)?),
        FormExpr::PfisterB(s) => bilinear_pfister(f, &eval_elems(s, f)?),
        FormExpr::Hyp(k) => {
            let n = 2 * k;
            let mut g = vec![vec![f.zero(); n]; n];
            for i in 0..*k {
                g[2 * i][2 * i + 1] = f.one();
                g[2 * i + 1][2 * i] = f.one();
            }
            BilinearForm::new(f, g)
        }
        FormExpr::Tensor(a, b) => tensor_bb(&build_bilinear(a, f)?, &build_bilinear(b, f)?),
        FormExpr::Sum(v) => {
            let mut acc = BilinearForm::new(f, Vec::new())?;
            for x in v {
                acc = acc.orthogonal_sum(&build_bilinear(x, f)?)?;
            }
            Ok(acc)
        }
        FormExpr::Scale(c, b) => build_bilinear(b, f)?.scale(&eval_elem(c, f)?),
        FormExpr::Gram(rows) => BilinearForm::new(f, gram_matrix(rows, f)?),
        _ => Err(unsupported(form, "symmetric bilinear form")),
    }
}

pub fn build_hermitian(form: &FormExpr, alg: &Algebra) -> Result<HermitianForm> {
    let f = alg.field();
    match form {
        FormExpr::Diag(v) => from_diagonal(alg, &eval_elems(v, f)?),
        FormExpr::Hyp(k) => hyperbolic_h(alg, &f.one(), *k),
        FormExpr::PfisterB(_) => tensor_bh(&build_bilinear(form, f)?, &unit_form(alg)),
        FormExpr::Tensor(b, h) => tensor_bh(&build_bilinear(b, f)?, &build_hermitian(h, alg)?),
        FormExpr::Sum(v) => {
            let mut parts = v.iter().map(|x| build_hermitian(x, alg));
            let mut acc = parts.next().ok_or_else(|| unsupported(form, "hermitian form"))??;
            for p in parts {
                acc = acc.orthogonal_sum(&p?)?;
            }
            Ok(acc)
        }
        FormExpr::Scale(c, h) => build_hermitian(h, alg)?.scale(&eval_elem(c, f)?),
        FormExpr::Gram(rows) => {
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return Err(Error::DimensionMismatch(format!("gram needs {n} entries per row")));
            }
            let g = rows
                .iter()
                .map(|r| r.iter().map(|e| eval_alg_elem(e, alg)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            HermitianForm::new(alg, &f.one(), g)
        }
        _ => Err(unsupported(form, "hermitian form")),
    }
}

/// Canonical text for an integer-valued expression tree.
pub fn int_expr(n: i64) -> Expr {
    let e = Expr::Int(BigInt::from(n.unsigned_abs()));
    if n < 0 {
        Expr::Neg(Box::new(e))
    } else {
        e
    }
}

/// Whether an expression is a plain (possibly negated) integer.
pub fn as_int(e: &Expr) -> Option<BigInt> {
    match e {
        Expr::Int(n) => Some(n.clone()),
        Expr::Neg(x) => as_int(x).filter(|n| !n.is_zero()).map(|n| -n),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_round_trip() {
        for s in [
            "diag(1,-1)@QQ",
            "pfister_b(2,3)@GF(5)",
            "binq(1,1)@GF(2)",
            "diag(1,3)@quat(a=-1,b=2)@QQ",
            "quat(a=-1,b=2)@QQ",
            "etale(a=1)@GF(2)",
            "etale(split)@GF(3)",
            "tensor(pfister_b(t),norm(quat(a=t,b=t+1)))@Fp_t(3)",
            "sum(hyp(1),scale(2/3,diag(1,z^2+1)))@GF(9)",
            "pfister_q(z;z+1)@GF(4)",
            "gram(1,u;1-u,3)@etale(a=-1)@QQ",
            "Fp_t(5)",
            "diag(-(1+t)^2,(t+1)/(t^2+2))@Fp_t(3)",
        ] {
            let lit = parse_literal(s).unwrap();
            assert_eq!(lit.to_string(), s);
            assert_eq!(parse_literal(&lit.to_string()).unwrap(), lit);
        }
    }

    #[test]
    fn whitespace_and_printing_of_nested_negation() {
        let lit = parse_literal(" diag( 1 , - 2 * 3 ) @ QQ ").unwrap();
        assert_eq!(lit.to_string(), "diag(1,-2*3)@QQ");
        let e = Expr::Neg(Box::new(Expr::Mul(Box::new(int_expr(2)), Box::new(int_expr(3)))));
        assert_eq!(e.to_string(), "-(2*3)");
        assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_literal("diag(1,-1)@RR") {
            Err(Error::Syntax { line: 1, col: 12, expected }) => assert!(expected.contains("field")),
            other => panic!("{other:?}"),
        }
        match parse_literal("diag(1,\n-1") {
            Err(Error::Syntax { line: 2, col: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_literal("frob(1)@QQ"), Err(Error::Syntax { col: 1, .. })));
        assert!(matches!(parse_literal("diag(1)@QQ junk"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn interpretation() {
        let b = OracleBounds::default();
        let Literal::QForm(q, k) = parse_literal("diag(1,0)@QQ").unwrap() else { panic!() };
        let f = build_field(k, b).unwrap();
        assert_eq!(build_quadratic(&q, &f).unwrap_err(), Error::ZeroEntry);
        let f9 = build_field(FieldLit::Gf(9), b).unwrap();
        let z = eval_elem(&parse_expr("z").unwrap(), &f9).unwrap();
        assert_eq!(f9.format(&z), "z");
        let e = eval_elem(&parse_expr("z^2").unwrap(), &f9).unwrap();
        assert_eq!(eval_elem(&parse_expr(&f9.format(&e)).unwrap(), &f9).unwrap(), e);
        let ft = build_field(FieldLit::FpT(3), b).unwrap();
        let r = eval_elem(&parse_expr("(t+1)/(t^2+2)").unwrap(), &ft).unwrap();
        assert_eq!(eval_elem(&parse_expr(&ft.format(&r)).unwrap(), &ft).unwrap(), r);
        assert!(eval_elem(&parse_expr("t").unwrap(), &f).is_err());
        assert_eq!(eval_elem(&parse_expr("1/0").unwrap(), &f).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn hermitian_literals() {
        let b = OracleBounds::default();
        let Literal::Herm(h, a) = parse_literal("gram(1,u;1-u,3)@etale(a=-1)@QQ").unwrap() else { panic!() };
        let alg = build_algebra(&a, b).unwrap();
        let h = build_hermitian(&h, &alg).unwrap();
        assert_eq!(h.dim(), 2);
        let Literal::Herm(bad, _) = parse_literal("gram(1,u;u,3)@etale(a=-1)@QQ").unwrap() else { panic!() };
        assert!(matches!(build_hermitian(&bad, &alg), Err(Error::NotHermitian(_))));
        let a = parse_algebra("a=-1,b=2@QQ", Some("quat")).unwrap();
        assert_eq!(a.to_string(), "quat(a=-1,b=2)@QQ");
        assert_eq!(parse_algebra("split@GF(5)", Some("etale")).unwrap().shape, ShapeLit::Split);
    }
}
