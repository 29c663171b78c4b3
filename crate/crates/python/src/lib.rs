//! Python bindings: fields, twisted polynomials, t-modules, biderivations and
//! the Ext¹ reducers. Matrices cross the boundary as lists of rows of
//! strings in the element grammar.

use drinfeld_ext::biderivation::Biderivation as CoreBiderivation;
use drinfeld_ext::ext::{self, Certificate as CoreCertificate};
use drinfeld_ext::field::{Fq, FqConfig};
use drinfeld_ext::json::{decode_drinfeld, encode_matrix, from_str, BiderivationJson, TModuleJson};
use drinfeld_ext::parse::{parse_k_element, parse_matrix, parse_skew, parse_t_poly};
use drinfeld_ext::skew::SkewPoly as CoreSkewPoly;
use drinfeld_ext::tmodule::{carlitz_tensor as core_carlitz_tensor, DrinfeldModule as CoreDrinfeld, TModule as CoreTModule};
use drinfeld_ext::verify::{run_suite, Suite};
use drinfeld_ext::Error;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(pydrinfeld, DrinfeldError, PyValueError, "Invalid input to a drinfeld-ext operation.");
create_exception!(pydrinfeld, UnsupportedError, DrinfeldError, "A request the theory does not cover.");

fn err(e: Error) -> PyErr {
    if e.is_unsupported() {
        UnsupportedError::new_err(e.to_string())
    } else {
        DrinfeldError::new_err(e.to_string())
    }
}

type Rows = Vec<Vec<String>>;

/// The constant field F_q.
#[pyclass(frozen, skip_from_py_object, module = "pydrinfeld")]
#[derive(Clone)]
struct Field {
    fq: Fq,
}

#[pymethods]
impl Field {
    #[new]
    #[pyo3(signature = (q, modulus=None))]
    fn new(q: u64, modulus: Option<&str>) -> PyResult<Self> {
        let fq = Fq::new(FqConfig::for_order(q, modulus).map_err(err)?).map_err(err)?;
        Ok(Field { fq })
    }

    #[getter]
    fn q(&self) -> u64 {
        self.fq.q()
    }

    #[getter]
    fn p(&self) -> u64 {
        self.fq.p().into()
    }

    /// Canonical form of an element of K = F_q(θ).
    fn element(&self, text: &str) -> PyResult<String> {
        Ok(parse_k_element(&self.fq, text).map_err(err)?.to_string())
    }

    fn __repr__(&self) -> String {
        format!("Field(q={})", self.fq.q())
    }
}

/// An element of K{τ}.
#[pyclass(frozen, skip_from_py_object, module = "pydrinfeld")]
#[derive(Clone)]
struct SkewPoly {
    inner: CoreSkewPoly,
}

#[pymethods]
impl SkewPoly {
    #[new]
    fn new(field: &Field, text: &str) -> PyResult<Self> {
        Ok(SkewPoly { inner: parse_skew(&field.fq, text).map_err(err)? })
    }

    /// τ-degree, or None for zero.
    #[getter]
    fn degree(&self) -> Option<usize> {
        self.inner.degree()
    }

    fn coeffs(&self) -> Vec<String> {
        self.inner.coeffs().iter().map(ToString::to_string).collect()
    }

    /// Evaluates the additive polynomial at x ∈ K.
    fn apply(&self, x: &str) -> PyResult<String> {
        let x = parse_k_element(self.inner.field(), x).map_err(err)?;
        Ok(self.inner.apply(&x).to_string())
    }

    fn __add__(&self, other: &SkewPoly) -> SkewPoly {
        SkewPoly { inner: &self.inner + &other.inner }
    }

    fn __sub__(&self, other: &SkewPoly) -> SkewPoly {
        SkewPoly { inner: &self.inner - &other.inner }
    }

    fn __mul__(&self, other: &SkewPoly) -> SkewPoly {
        SkewPoly { inner: &self.inner * &other.inner }
    }

    fn __neg__(&self) -> SkewPoly {
        SkewPoly { inner: -&self.inner }
    }

    fn __pow__(&self, e: u32, _modulo: Option<u32>) -> SkewPoly {
        SkewPoly { inner: self.inner.pow(e) }
    }

    fn __eq__(&self, other: &SkewPoly) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("SkewPoly({:?})", self.inner.to_string())
    }
}

/// A t-module presented by Φ(t).
#[pyclass(frozen, skip_from_py_object, module = "pydrinfeld")]
#[derive(Clone)]
struct TModule {
    inner: CoreTModule,
}

#[pymethods]
impl TModule {
    #[new]
    fn new(field: &Field, phi_t: Rows) -> PyResult<Self> {
        let m = parse_matrix(&field.fq, &phi_t).map_err(err)?;
        Ok(TModule { inner: CoreTModule::new(m).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j: TModuleJson = from_str(text).map_err(err)?;
        let fq = j.field().map_err(err)?;
        Ok(TModule { inner: j.decode(&fq).map_err(err)? })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&TModuleJson::encode(&self.inner)).expect("serializable")
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn phi_t(&self) -> Rows {
        encode_matrix(self.inner.phi_t())
    }

    /// The module as a Drinfeld module, if it has dimension one.
    fn as_drinfeld(&self) -> Option<DrinfeldModule> {
        self.inner.as_drinfeld().map(|inner| DrinfeldModule { inner })
    }

    fn __eq__(&self, other: &TModule) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("TModule({:?})", self.phi_t())
    }
}

/// Φ(t) = θ + a_1 τ + ... + a_r τ^r.
#[pyclass(frozen, skip_from_py_object, module = "pydrinfeld")]
#[derive(Clone)]
struct DrinfeldModule {
    inner: CoreDrinfeld,
}

#[pymethods]
impl DrinfeldModule {
    #[new]
    fn new(field: &Field, coeffs: Vec<String>) -> PyResult<Self> {
        Ok(DrinfeldModule { inner: decode_drinfeld(&field.fq, &coeffs).map_err(err)? })
    }

    #[staticmethod]
    fn carlitz(field: &Field) -> Self {
        DrinfeldModule { inner: CoreDrinfeld::carlitz(&field.fq) }
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn coeffs(&self) -> Vec<String> {
        self.inner.coeffs().iter().map(ToString::to_string).collect()
    }

    #[getter]
    fn phi_t(&self) -> SkewPoly {
        SkewPoly { inner: self.inner.phi_t().clone() }
    }

    fn as_tmodule(&self) -> TModule {
        TModule { inner: self.inner.as_tmodule().clone() }
    }

    /// `(Pi, E_dual)`: Π(t) on Ext¹(E, C) and its Ext¹₀ block.
    fn dual(&self) -> PyResult<(TModule, TModule)> {
        let d = ext::dual_tmodule(&self.inner).map_err(err)?;
        Ok((TModule { inner: d.pi }, TModule { inner: d.dual }))
    }

    /// Ξ(t) on Ext¹(E^∨, C); needs a_r = 1.
    fn bidual(&self) -> PyResult<TModule> {
        Ok(TModule { inner: ext::bidual_tmodule(&self.inner).map_err(err)? })
    }

    /// An isomorphic module with a_r = 1, and the scaling c.
    fn normalize(&self) -> PyResult<(DrinfeldModule, String)> {
        let (inner, c) = ext::normalize_leading(&self.inner).map_err(err)?;
        Ok((DrinfeldModule { inner }, c.to_string()))
    }

    fn __eq__(&self, other: &DrinfeldModule) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("DrinfeldModule({})", self.inner.phi_t())
    }
}

/// δ ∈ Der(source, target), given by δ(t).
#[pyclass(frozen, skip_from_py_object, module = "pydrinfeld")]
#[derive(Clone)]
struct Biderivation {
    inner: CoreBiderivation,
}

#[pymethods]
impl Biderivation {
    #[new]
    fn new(source: &TModule, target: &TModule, value: Rows) -> PyResult<Self> {
        let v = parse_matrix(source.inner.field(), &value).map_err(err)?;
        let inner = CoreBiderivation::new(source.inner.clone(), target.inner.clone(), v).map_err(err)?;
        Ok(Biderivation { inner })
    }

    /// The inner biderivation a ↦ UΦ(a) − Ψ(a)U.
    #[staticmethod]
    fn inner(u: Rows, source: &TModule, target: &TModule) -> PyResult<Self> {
        let u = parse_matrix(source.inner.field(), &u).map_err(err)?;
        Ok(Biderivation { inner: CoreBiderivation::inner(&u, &source.inner, &target.inner).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j: BiderivationJson = from_str(text).map_err(err)?;
        let fq = j.field().map_err(err)?;
        Ok(Biderivation { inner: j.decode(&fq).map_err(err)? })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&BiderivationJson::encode(&self.inner)).expect("serializable")
    }

    #[getter]
    fn value(&self) -> Rows {
        encode_matrix(self.inner.value())
    }

    /// δ(a) for a ∈ F_q[t], written in `T`.
    fn eval(&self, a: &str) -> PyResult<Rows> {
        let a = parse_t_poly(self.inner.source().field(), a).map_err(err)?;
        Ok(encode_matrix(&self.inner.eval(&a)))
    }

    fn __add__(&self, other: &Biderivation) -> PyResult<Biderivation> {
        Ok(Biderivation { inner: self.inner.baer_sum(&other.inner).map_err(err)? })
    }

    fn __sub__(&self, other: &Biderivation) -> PyResult<Biderivation> {
        Ok(Biderivation { inner: self.inner.sub(&other.inner).map_err(err)? })
    }

    fn __eq__(&self, other: &Biderivation) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Biderivation({:?})", self.value())
    }
}

/// `input - reduced = inner(witness)`, with `check` recomputed.
#[pyclass(frozen, get_all, module = "pydrinfeld")]
struct Certificate {
    input: Biderivation,
    reduced: Biderivation,
    witness: Rows,
    check: bool,
}

impl From<CoreCertificate> for Certificate {
    fn from(c: CoreCertificate) -> Self {
        Certificate {
            input: Biderivation { inner: c.input },
            reduced: Biderivation { inner: c.reduced },
            witness: encode_matrix(&c.witness),
            check: c.check,
        }
    }
}

#[pymethods]
impl Certificate {
    fn __repr__(&self) -> String {
        format!("Certificate(reduced={:?}, check={})", self.reduced.value(), self.check)
    }
}

/// Reduces δ ∈ Der(E, C).
#[pyfunction]
fn reduce_e_vs_c(e: &DrinfeldModule, delta: &Biderivation) -> PyResult<Certificate> {
    Ok(ext::reduce_vs_carlitz(&e.inner, &delta.inner).map_err(err)?.certificate().into())
}

/// Reduces δ ∈ Der(E^∨, C); E must have a_r = 1.
#[pyfunction]
fn reduce_dual_vs_c(e: &DrinfeldModule, delta: &Biderivation) -> PyResult<Certificate> {
    Ok(ext::reduce_dual_c(&e.inner, &delta.inner).map_err(err)?.certificate().into())
}

/// Reduces δ ∈ Der(C^⊗m, C^⊗n).
#[pyfunction]
fn reduce_carlitz(m: usize, n: usize, delta: &Biderivation) -> PyResult<Certificate> {
    Ok(ext::reduce_carlitz(m, n, &delta.inner).map_err(err)?.certificate().into())
}

#[pyfunction]
fn carlitz_tensor(field: &Field, n: usize) -> PyResult<TModule> {
    Ok(TModule { inner: core_carlitz_tensor(&field.fq, n).map_err(err)? })
}

/// Π(t) on Ext¹(C^⊗m, C^⊗n), n > m.
#[pyfunction]
fn carlitz_ext(field: &Field, m: usize, n: usize) -> PyResult<TModule> {
    Ok(TModule { inner: ext::carlitz_ext_structure(&field.fq, m, n).map_err(err)? })
}

/// A splitting matrix U with δ = δ^(U) of τ-degree at most `bound`, or None.
#[pyfunction]
#[pyo3(signature = (delta, bound=None))]
fn find_splitting(delta: &Biderivation, bound: Option<usize>) -> PyResult<Option<Rows>> {
    let bound = bound.unwrap_or_else(|| ext::default_bound(&delta.inner));
    Ok(ext::find_splitting(&delta.inner, bound).map_err(err)?.as_ref().map(encode_matrix))
}

/// Runs property suites; returns one JSON report per suite.
#[pyfunction]
#[pyo3(signature = (field, suite="all", seed=0, trials=100))]
fn verify(field: &Field, suite: &str, seed: u64, trials: u64) -> PyResult<Vec<String>> {
    let suites = Suite::parse_list(suite).map_err(err)?;
    Ok(suites
        .into_iter()
        .map(|s| serde_json::to_string(&run_suite(s, &field.fq, seed, trials)).expect("serializable"))
        .collect())
}

#[pymodule]
fn pydrinfeld(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<SkewPoly>()?;
    m.add_class::<TModule>()?;
    m.add_class::<DrinfeldModule>()?;
    m.add_class::<Biderivation>()?;
    m.add_class::<Certificate>()?;
    m.add_function(wrap_pyfunction!(reduce_e_vs_c, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_dual_vs_c, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_carlitz, m)?)?;
    m.add_function(wrap_pyfunction!(carlitz_tensor, m)?)?;
    m.add_function(wrap_pyfunction!(carlitz_ext, m)?)?;
    m.add_function(wrap_pyfunction!(find_splitting, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("DrinfeldError", m.py().get_type::<DrinfeldError>())?;
    m.add("UnsupportedError", m.py().get_type::<UnsupportedError>())?;
    Ok(())
}
