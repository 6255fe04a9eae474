use std::time::Duration;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;

use esdecide_core::algebra::rational;
use esdecide_core::corpus::{self, CorpusSpec};
use esdecide_core::decider::{self, Answer, DecideOptions, EsValue};
use esdecide_core::qe::{decide_sentence, export_smtlib, QeConfig, Sentence};
use esdecide_core::ramsey::extract_homogeneous;
use esdecide_core::{predicate, ramsey, Error, Rational};

create_exception!(esdecide, EsdecideError, PyValueError);
create_exception!(esdecide, ResourceLimitError, EsdecideError);
create_exception!(esdecide, ExtractionError, EsdecideError);

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::ResourceLimit(_) => ResourceLimitError::new_err(e.to_string()),
        Error::ExtractionFailed(_) => ExtractionError::new_err(e.to_string()),
        _ => EsdecideError::new_err(e.to_string()),
    }
}

/// Accepts int, str ("-7/3") or fractions.Fraction.
fn rational_arg(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    rational::parse(&obj.str()?.to_cow()?).map_err(to_py_err)
}

fn sequence_arg(seq: &Bound<'_, PyAny>) -> PyResult<Vec<Rational>> {
    seq.try_iter()?.map(|v| rational_arg(&v?)).collect()
}

fn fraction(py: Python<'_>, v: &Rational) -> PyResult<PyObject> {
    let cls = py.import("fractions")?.getattr("Fraction")?;
    Ok(cls.call1((v.to_string(),))?.unbind())
}

fn fractions(py: Python<'_>, seq: &[Rational]) -> PyResult<PyObject> {
    let items = seq.iter().map(|v| fraction(py, v)).collect::<PyResult<Vec<_>>>()?;
    Ok(PyList::new(py, items)?.into_any().unbind())
}

fn from_json(py: Python<'_>, value: &serde_json::Value) -> PyResult<PyObject> {
    let text = value.to_string();
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pyclass(name = "PredicateSet", module = "esdecide")]
#[derive(Clone)]
struct PyPredicateSet {
    inner: predicate::PredicateSet,
}

#[pymethods]
impl PyPredicateSet {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyPredicateSet {
            inner: predicate::parse(text).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn arity(&self) -> usize {
        self.inner.arity
    }

    #[getter]
    fn members(&self) -> Vec<String> {
        self.inner.members.iter().map(|m| m.to_string()).collect()
    }

    /// Per member, whether it holds on every increasing tuple of `seq`.
    fn holds_everywhere(&self, seq: &Bound<'_, PyAny>) -> PyResult<Vec<bool>> {
        let seq = sequence_arg(seq)?;
        Ok(self.inner.members.iter().map(|m| m.holds_everywhere(&seq)).collect())
    }

    fn holds_nowhere(&self, seq: &Bound<'_, PyAny>) -> PyResult<Vec<bool>> {
        let seq = sequence_arg(seq)?;
        Ok(self.inner.members.iter().map(|m| m.holds_nowhere(&seq)).collect())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PredicateSet({:?})", self.inner.to_string())
    }
}

#[pyclass(name = "Verdict", module = "esdecide", frozen)]
struct PyVerdict {
    inner: decider::Verdict,
}

#[pymethods]
impl PyVerdict {
    /// "YES", "NO" or "UNDECIDED".
    #[getter]
    fn answer(&self) -> &'static str {
        match self.inner.answer {
            Answer::Yes => "YES",
            Answer::No => "NO",
            Answer::Undecided => "UNDECIDED",
        }
    }

    #[getter]
    fn transform(&self) -> Option<String> {
        self.inner.transform.map(|k| k.to_string())
    }

    #[getter]
    fn undecided(&self) -> Vec<String> {
        self.inner.undecided.clone()
    }

    /// `{"a", "b", "r", "seq"}` with Fraction values, or None.
    #[getter]
    fn witness(&self, py: Python<'_>) -> PyResult<Option<PyObject>> {
        let Some(w) = &self.inner.witness else {
            return Ok(None);
        };
        let d = pyo3::types::PyDict::new(py);
        d.set_item("a", fraction(py, &w.a)?)?;
        d.set_item("b", fraction(py, &w.b)?)?;
        d.set_item("r", w.r)?;
        d.set_item("seq", fractions(py, &w.seq)?)?;
        Ok(Some(d.into_any().unbind()))
    }

    #[getter]
    fn stats(&self, py: Python<'_>) -> PyResult<PyObject> {
        from_json(py, &serde_json::to_value(&self.inner.stats).unwrap())
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).unwrap()
    }

    fn __repr__(&self) -> String {
        format!("Verdict({})", self.answer())
    }
}

#[pyfunction]
fn parse(text: &str) -> PyResult<PyPredicateSet> {
    PyPredicateSet::new(text)
}

#[pyfunction]
#[pyo3(signature = (predicates, *, type_cap=None, naive=false, witness=true, seed=None, time_limit=None))]
fn decide(
    py: Python<'_>,
    predicates: &PyPredicateSet,
    type_cap: Option<u128>,
    naive: bool,
    witness: bool,
    seed: Option<u64>,
    time_limit: Option<f64>,
) -> PyVerdict {
    let defaults = DecideOptions::default();
    let opts = DecideOptions {
        type_cap: type_cap.unwrap_or(defaults.type_cap),
        naive,
        witness,
        seed: seed.unwrap_or(defaults.seed),
        time_limit: time_limit.map(Duration::from_secs_f64),
        ..defaults
    };
    let set = &predicates.inner;
    let inner = py.allow_threads(|| decider::decide_es(set, &opts));
    PyVerdict { inner }
}

/// Exact ES(n) for an order-invariant set. Returns `(value, exact)`; when
/// `exact` is False the value is a lower bound that exceeded `n_max`.
#[pyfunction]
#[pyo3(signature = (predicates, n, n_max=8))]
fn es_bruteforce(py: Python<'_>, predicates: &PyPredicateSet, n: usize, n_max: usize) -> PyResult<(usize, bool)> {
    let set = &predicates.inner;
    match py.allow_threads(|| decider::es_bruteforce(set, n, n_max)).map_err(to_py_err)? {
        EsValue::Exact(v) => Ok((v, true)),
        EsValue::Exceeds(v) => Ok((v, false)),
    }
}

#[pyfunction]
#[pyo3(signature = (sentence, cell_budget=None))]
fn qe(py: Python<'_>, sentence: &str, cell_budget: Option<u64>) -> PyResult<bool> {
    let s = Sentence::parse(sentence).map_err(to_py_err)?;
    let mut cfg = QeConfig::default();
    if let Some(b) = cell_budget {
        cfg.cell_budget = b;
    }
    py.allow_threads(|| decide_sentence(&s, &cfg)).map_err(to_py_err)
}

#[pyfunction]
fn smtlib(sentence: &str) -> PyResult<String> {
    let s = Sentence::parse(sentence).map_err(to_py_err)?;
    Ok(export_smtlib(&s))
}

#[pyfunction]
fn cross_ratio(
    py: Python<'_>,
    z1: &Bound<'_, PyAny>,
    z2: &Bound<'_, PyAny>,
    z3: &Bound<'_, PyAny>,
    z4: &Bound<'_, PyAny>,
) -> PyResult<PyObject> {
    let [a, b, c, d] = [z1, z2, z3, z4].map(rational_arg);
    let v = corpus::cross_ratio(&a?, &b?, &c?, &d?).map_err(to_py_err)?;
    fraction(py, &v)
}

/// Corpus sequence from a JSON spec such as
/// `{"family": "geometric", "a": "1", "ratio": "3", "n": 5}`.
#[pyfunction]
fn generate(py: Python<'_>, spec: &str) -> PyResult<PyObject> {
    let spec: CorpusSpec = serde_json::from_str(spec).map_err(|e| EsdecideError::new_err(e.to_string()))?;
    fractions(py, &corpus::generate(&spec).map_err(to_py_err)?)
}

#[pyfunction]
fn crossratio_family() -> PyPredicateSet {
    PyPredicateSet {
        inner: corpus::crossratio_family(),
    }
}

/// Indices, values and per-member truth of an `n`-term subsequence on which
/// every member holds everywhere or nowhere.
#[pyfunction]
fn homogeneous(
    py: Python<'_>,
    seq: &Bound<'_, PyAny>,
    predicates: &PyPredicateSet,
    n: usize,
) -> PyResult<(Vec<usize>, PyObject, Vec<bool>)> {
    let seq = sequence_arg(seq)?;
    let set = &predicates.inner;
    let h = py.allow_threads(|| extract_homogeneous(&seq, set, n)).map_err(to_py_err)?;
    Ok((h.indices, fractions(py, &h.values)?, h.truth))
}

#[pyfunction]
fn is_r_growing(seq: &Bound<'_, PyAny>, r: u32) -> PyResult<bool> {
    Ok(ramsey::is_r_growing(&sequence_arg(seq)?, r))
}

#[pymodule]
fn esdecide(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("EsdecideError", m.py().get_type::<EsdecideError>())?;
    m.add("ResourceLimitError", m.py().get_type::<ResourceLimitError>())?;
    m.add("ExtractionError", m.py().get_type::<ExtractionError>())?;
    m.add_class::<PyPredicateSet>()?;
    m.add_class::<PyVerdict>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(es_bruteforce, m)?)?;
    m.add_function(wrap_pyfunction!(qe, m)?)?;
    m.add_function(wrap_pyfunction!(smtlib, m)?)?;
    m.add_function(wrap_pyfunction!(cross_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(crossratio_family, m)?)?;
    m.add_function(wrap_pyfunction!(homogeneous, m)?)?;
    m.add_function(wrap_pyfunction!(is_r_growing, m)?)?;
    Ok(())
}
