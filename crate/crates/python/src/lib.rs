//! Python bindings. Every object is built from the same literal syntax the
//! command line accepts; structured results come back as plain dicts.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use tdinv::algebras::Algebra;
use tdinv::cli::grammar::{self, Literal};
use tdinv::cli::{self as tcli};
use tdinv::fields::oracle::decide_isotropic;
use tdinv::fields::{Field, OracleBounds};
use tdinv::forms::{self, BilinearForm, QuadraticForm};
use tdinv::hermitian::{self, HermitianForm};
use tdinv::involutions::{self, BatteryOptions, InvolutionRep, TotalDecomposability};

create_exception!(tdinv, TdinvError, PyValueError);

fn err(e: tdinv::Error) -> PyErr {
    TdinvError::new_err(format!("{}: {e}", tcli::error_kind(&e)))
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for tdinv::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(err)
    }
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<PyObject> {
    let json = py.import_bound("json")?;
    Ok(json.call_method1("loads", (v.to_string(),))?.unbind())
}

fn ser_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<PyObject> {
    to_py(py, &serde_json::to_value(v).map_err(|e| TdinvError::new_err(e.to_string()))?)
}

fn bounds() -> OracleBounds {
    OracleBounds::default()
}

fn check_field(a: &Field, b: &Field) -> PyResult<()> {
    a.check_same(b).py()
}

#[pyclass(name = "Field", module = "tdinv", frozen)]
#[derive(Clone)]
struct PyField {
    inner: Field,
}

#[pymethods]
impl PyField {
    /// `QQ`, `GF(q)` or `Fp_t(p)`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let lit = grammar::parse_field(text).py()?;
        Ok(Self { inner: grammar::build_field(lit, bounds()).py()? })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name()
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.inner.characteristic()
    }

    #[getter]
    fn cardinality(&self) -> Option<u64> {
        self.inner.cardinality()
    }

    /// Whether the element written as `expr` is a square.
    fn is_square(&self, expr: &str) -> PyResult<bool> {
        Ok(self.inner.is_square(&elem(&self.inner, expr)?))
    }

    /// Canonical printed form of an element expression.
    fn normalize(&self, expr: &str) -> PyResult<String> {
        Ok(self.inner.format(&elem(&self.inner, expr)?))
    }

    fn __repr__(&self) -> String {
        format!("Field({:?})", self.inner.name())
    }
}

fn elem(f: &Field, expr: &str) -> PyResult<tdinv::fields::Elem> {
    grammar::eval_elem(&grammar::parse_expr(expr).py()?, f).py()
}

fn quadratic_literal(text: &str) -> PyResult<(QuadraticForm, String)> {
    match grammar::parse_literal(text).py()? {
        Literal::QForm(form, field) => {
            let f = grammar::build_field(field, bounds()).py()?;
            Ok((grammar::build_quadratic(&form, &f).py()?, text.to_string()))
        }
        _ => Err(TdinvError::new_err("Syntax: expected a quadratic form literal `form@field`")),
    }
}

#[pyclass(name = "QuadraticForm", module = "tdinv", frozen)]
#[derive(Clone)]
struct PyQuadraticForm {
    inner: QuadraticForm,
    text: String,
}

#[pymethods]
impl PyQuadraticForm {
    /// A literal such as `diag(1,-1)@QQ` or `pfister_q(1;t)@Fp_t(2)`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let (inner, text) = quadratic_literal(text)?;
        Ok(Self { inner, text })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField { inner: self.inner.field().clone() }
    }

    /// Upper-triangular coefficient matrix, entries printed.
    fn coefficients(&self) -> Vec<Vec<String>> {
        let f = self.inner.field();
        self.inner.coeffs().iter().map(|r| r.iter().map(|e| f.format(e)).collect()).collect()
    }

    fn evaluate(&self, x: Vec<String>) -> PyResult<String> {
        let f = self.inner.field();
        let v = x.iter().map(|s| elem(f, s)).collect::<PyResult<Vec<_>>>()?;
        if v.len() != self.inner.dim() {
            return Err(TdinvError::new_err("DimensionMismatch: vector length differs from the form dimension"));
        }
        Ok(f.format(&self.inner.eval(&v)))
    }

    fn witt_index(&self) -> PyResult<usize> {
        forms::witt_index(&self.inner).py()
    }

    /// Witt decomposition: index, anisotropic kernel and transform.
    fn witt_decomposition(&self, py: Python<'_>) -> PyResult<PyObject> {
        let d = forms::witt_decompose(&self.inner).py()?;
        let f = self.inner.field();
        let fm = |m: &Vec<Vec<tdinv::fields::Elem>>| -> Vec<Vec<String>> {
            m.iter().map(|r| r.iter().map(|e| f.format(e)).collect()).collect()
        };
        to_py(
            py,
            &json!({
                "witt_index": d.witt_index,
                "kernel_dim": d.anisotropic_kernel.dim(),
                "kernel": fm(d.anisotropic_kernel.coeffs()),
                "transform": fm(&d.transform),
                "verified": d.verify(&self.inner),
            }),
        )
    }

    /// None when the isotropy oracle cannot decide.
    fn is_isotropic(&self) -> PyResult<Option<bool>> {
        decide_isotropic(&self.inner).py()
    }

    fn is_hyperbolic(&self) -> PyResult<bool> {
        forms::is_hyperbolic(&self.inner).py()
    }

    fn is_isometric(&self, other: &PyQuadraticForm) -> PyResult<bool> {
        check_field(self.inner.field(), other.inner.field())?;
        forms::isometric(&self.inner, &other.inner).py()
    }

    /// Pfister similarity verdict with certificate or obstruction.
    fn pfister(&self, py: Python<'_>) -> PyResult<PyObject> {
        let r = forms::pfister_similarity(&self.inner).py()?;
        to_py(py, &r.to_json(self.inner.field()))
    }

    fn invariants(&self, py: Python<'_>) -> PyResult<PyObject> {
        ser_py(py, &forms::invariants(&self.inner).py()?)
    }

    fn __add__(&self, other: &PyQuadraticForm) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.orthogonal_sum(&other.inner).py()?,
            text: format!("sum({}, {})", self.text, other.text),
        })
    }

    fn __repr__(&self) -> String {
        format!("QuadraticForm({:?})", self.text)
    }
}

#[pyclass(name = "Algebra", module = "tdinv", frozen)]
#[derive(Clone)]
struct PyAlgebra {
    inner: Algebra,
}

#[pymethods]
impl PyAlgebra {
    /// `quat(a=..,b=..)@F`, `etale(a=..)@F` or `etale(split)@F`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let lit = grammar::parse_algebra(text, None).py()?;
        Ok(Self { inner: grammar::build_algebra(&lit, bounds()).py()? })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn is_quaternion(&self) -> bool {
        self.inner.is_quaternion()
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField { inner: self.inner.field().clone() }
    }

    fn is_split(&self) -> PyResult<bool> {
        self.inner.is_split().py()
    }

    fn norm_form(&self) -> PyQuadraticForm {
        PyQuadraticForm { inner: self.inner.norm_form(), text: format!("norm({})", self.inner.name()) }
    }

    /// Reduced norm of an element written in the basis 1, u, v, w.
    fn nrd(&self, expr: &str) -> PyResult<String> {
        let x = grammar::eval_alg_elem(&grammar::parse_expr(expr).py()?, &self.inner).py()?;
        Ok(self.inner.field().format(&x.nrd().py()?))
    }

    /// Product of two elements, printed.
    fn mul(&self, x: &str, y: &str) -> PyResult<String> {
        let x = grammar::eval_alg_elem(&grammar::parse_expr(x).py()?, &self.inner).py()?;
        let y = grammar::eval_alg_elem(&grammar::parse_expr(y).py()?, &self.inner).py()?;
        Ok(x.mul(&y).py()?.format())
    }

    fn __repr__(&self) -> String {
        format!("Algebra({:?})", self.inner.name())
    }
}

#[pyclass(name = "HermitianForm", module = "tdinv", frozen)]
#[derive(Clone)]
struct PyHermitianForm {
    inner: HermitianForm,
    text: String,
}

fn hermitian_literal(text: &str) -> PyResult<HermitianForm> {
    match grammar::parse_literal(text).py()? {
        Literal::Herm(form, alg) => {
            let a = grammar::build_algebra(&alg, bounds()).py()?;
            grammar::build_hermitian(&form, &a).py()
        }
        _ => Err(TdinvError::new_err("Syntax: expected a hermitian literal `form@algebra@field`")),
    }
}

#[pymethods]
impl PyHermitianForm {
    /// A literal such as `diag(1,-1)@quat(a=-1,b=2)@QQ`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Self { inner: hermitian_literal(text)?, text: text.to_string() })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn dim_f(&self) -> usize {
        self.inner.dim_f()
    }

    #[getter]
    fn algebra(&self) -> PyAlgebra {
        PyAlgebra { inner: self.inner.algebra().clone() }
    }

    fn is_even(&self) -> bool {
        self.inner.is_even()
    }

    fn trace_form(&self) -> PyResult<PyQuadraticForm> {
        Ok(PyQuadraticForm { inner: self.inner.trace_form().py()?, text: format!("trace({})", self.text) })
    }

    /// Diagonal entries of an even form, printed.
    fn diagonalize(&self) -> PyResult<Vec<String>> {
        Ok(hermitian::diagonalize_even(&self.inner).py()?.display)
    }

    fn is_isotropic(&self) -> PyResult<bool> {
        hermitian::is_isotropic_h(&self.inner).py()
    }

    /// A D-vector x ≠ 0 with h(x,x) = 0, or None if h is anisotropic.
    fn isotropic_vector(&self) -> PyResult<Option<Vec<String>>> {
        Ok(hermitian::isotropy_witness_h(&self.inner).py()?.map(|v| v.iter().map(|e| e.format()).collect()))
    }

    fn is_hyperbolic(&self) -> PyResult<bool> {
        hermitian::is_hyperbolic_h(&self.inner).py()
    }

    fn is_isometric(&self, other: &PyHermitianForm) -> PyResult<bool> {
        hermitian::isometric_h(&self.inner, &other.inner).py()
    }

    fn involution(&self) -> PyResult<PyInvolution> {
        Ok(PyInvolution { inner: involutions::adjoint_hermitian(&self.inner).py()? })
    }

    fn __repr__(&self) -> String {
        format!("HermitianForm({:?})", self.text)
    }
}

#[pyclass(name = "Involution", module = "tdinv", frozen)]
#[derive(Clone)]
struct PyInvolution {
    inner: InvolutionRep,
}

#[pymethods]
impl PyInvolution {
    /// The adjoint involution of a hermitian literal.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Self { inner: involutions::adjoint_hermitian(&hermitian_literal(text)?).py()? })
    }

    /// The adjoint involution of a quadratic form literal.
    #[staticmethod]
    fn from_quadratic(text: &str) -> PyResult<Self> {
        Ok(Self { inner: involutions::adjoint_quadratic(&quadratic_literal(text)?.0).py()? })
    }

    #[getter]
    fn kind(&self, py: Python<'_>) -> PyResult<PyObject> {
        ser_py(py, &self.inner.kind())
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn is_isotropic(&self) -> PyResult<bool> {
        involutions::is_isotropic_inv(&self.inner).py()
    }

    fn is_hyperbolic(&self) -> PyResult<bool> {
        involutions::is_hyperbolic_inv(&self.inner).py()
    }

    fn is_isomorphic(&self, other: &PyInvolution) -> PyResult<bool> {
        involutions::isomorphic_inv(&self.inner, &other.inner).py()
    }

    /// The trace form of the ⊠ image over the base field.
    fn boxtimes_trace_form(&self) -> PyResult<PyQuadraticForm> {
        let q = involutions::boxtimes_base(&self.inner).py()?.trace_form().py()?;
        Ok(PyQuadraticForm { inner: q, text: "boxtimes trace form".into() })
    }

    /// `{"verdict": "yes", "slots", "scalar"}`, `{"verdict": "no", ...}` or
    /// `{"verdict": "undecided", "reason"}`.
    #[pyo3(signature = (slot_limit = 256))]
    fn totally_decomposable(&self, py: Python<'_>, slot_limit: usize) -> PyResult<PyObject> {
        let f = self.inner.field();
        let v = match involutions::totally_decomposable_with(&self.inner, slot_limit).py()? {
            TotalDecomposability::Yes { slots, scalar } => json!({
                "verdict": "yes",
                "slots": slots.iter().map(|s| f.format(s)).collect::<Vec<_>>(),
                "scalar": f.format(&scalar),
            }),
            TotalDecomposability::No(o) => json!({ "verdict": "no", "obstruction": o }),
            TotalDecomposability::Undecided(r) => json!({ "verdict": "undecided", "reason": r }),
        };
        to_py(py, &v)
    }
}

fn run_battery(py: Python<'_>, base: &Algebra, phi: &str, slot_limit: usize) -> PyResult<PyObject> {
    let form = grammar::parse_form(phi).py()?;
    let phi: BilinearForm = grammar::build_bilinear(&form, base.field()).py()?;
    let options = BatteryOptions { slot_search_limit: slot_limit, ..BatteryOptions::default() };
    let report = if base.is_quaternion() {
        involutions::theorem_battery_symplectic(base, &phi, &options)
    } else {
        involutions::theorem_battery_unitary(base, &phi, &options)
    };
    ser_py(py, &report.py()?)
}

/// Theorem battery for Ad(φ) ⊗ (Q, γ); `quat` is `a=..,b=..@F` or a full
/// algebra literal and `phi` a bilinear form expression such as `pfister_b(2,3)`.
#[pyfunction]
#[pyo3(signature = (quat, phi, slot_limit = 256))]
fn battery_symplectic(py: Python<'_>, quat: &str, phi: &str, slot_limit: usize) -> PyResult<PyObject> {
    let base = grammar::build_algebra(&grammar::parse_algebra(quat, Some("quat")).py()?, bounds()).py()?;
    run_battery(py, &base, phi, slot_limit)
}

/// Theorem battery for Ad(φ) ⊗ (K, ι) with K quadratic étale.
#[pyfunction]
#[pyo3(signature = (etale, phi, slot_limit = 256))]
fn battery_unitary(py: Python<'_>, etale: &str, phi: &str, slot_limit: usize) -> PyResult<PyObject> {
    let base = grammar::build_algebra(&grammar::parse_algebra(etale, Some("etale")).py()?, bounds()).py()?;
    run_battery(py, &base, phi, slot_limit)
}

/// Runs a command-line invocation (without the program name) and returns
/// `(exit_code, report)`.
#[pyfunction]
fn run(py: Python<'_>, command: &str) -> PyResult<(i32, PyObject)> {
    match tcli::parse_command(command) {
        Ok(cmd) => {
            let out = tcli::run(&cmd);
            Ok((out.code, to_py(py, &out.report)?))
        }
        Err(e) => {
            let report = json!({ "error": { "kind": tcli::error_kind(&e), "message": e.to_string() } });
            Ok((tcli::error_code(&e), to_py(py, &report)?))
        }
    }
}

/// Hilbert symbol (a,b) at a place of ℚ: `"inf"` or a prime.
#[pyfunction]
fn hilbert_symbol(a: &str, b: &str, place: &str) -> PyResult<i32> {
    let qq = Field::rationals();
    let place = match place {
        "inf" | "real" | "R" => tdinv::fields::Place::Real,
        p => {
            tdinv::fields::Place::Prime(p.parse().map_err(|_| TdinvError::new_err(format!("Syntax: bad place {p:?}")))?)
        }
    };
    let (a, b) = (qq.rat(&elem(&qq, a)?), qq.rat(&elem(&qq, b)?));
    let (Some(a), Some(b)) = (a, b) else { unreachable!("rational elements") };
    tdinv::fields::hilbert::hilbert_rat(&a, &b, &place).py()
}

#[pymodule]
#[pyo3(name = "tdinv")]
pub fn tdinv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TdinvError", m.py().get_type_bound::<TdinvError>())?;
    m.add_class::<PyField>()?;
    m.add_class::<PyQuadraticForm>()?;
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyHermitianForm>()?;
    m.add_class::<PyInvolution>()?;
    m.add_function(wrap_pyfunction!(battery_symplectic, m)?)?;
    m.add_function(wrap_pyfunction!(battery_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert_symbol, m)?)?;
    Ok(())
}
