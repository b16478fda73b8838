//! Python bindings. Exact values cross the boundary as `fractions.Fraction`
//! (over ℚ) or `int` (residues mod p); inputs accept anything whose `str()`
//! is an integer or `a/b`.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unideal_core::applications as app;
use unideal_core::certifier::{self, Decision};
use unideal_core::field::{parse_rational, random_prime};
use unideal_core::gaussian::Gaussian;
use unideal_core::hadamard::{self, PowerIdealSpec, PowersConfig};
use unideal_core::{division, io, lowrank, reductions, selftest};
use unideal_core::{Error, Field, Matrix, Scalar};

create_exception!(unideal, UnidealError, PyException);
create_exception!(unideal, CapExceeded, UnidealError);
create_exception!(unideal, Undecided, UnidealError);

fn err(e: Error) -> PyErr {
    match e {
        Error::CapExceeded { .. } => CapExceeded::new_err(e.to_string()),
        Error::Undecided => Undecided::new_err(e.to_string()),
        Error::Parse { .. } | Error::Invalid(_) | Error::Arity { .. } => PyValueError::new_err(e.to_string()),
        _ => UnidealError::new_err(e.to_string()),
    }
}

fn parse_field(s: &str) -> PyResult<Field> {
    match s {
        "q" | "Q" => Ok(Field::Rational),
        _ => {
            let p = s
                .strip_prefix("p:")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| PyValueError::new_err(format!("field must be `q` or `p:<prime>`, got `{s}`")))?;
            Field::prime(p).map_err(err)
        }
    }
}

fn to_scalar(obj: &Bound<'_, PyAny>, field: Field) -> PyResult<Scalar> {
    let s = obj.str()?.to_string();
    let r = parse_rational(s.trim()).map_err(err)?;
    Scalar::from_rational(&r, field).map_err(err)
}

fn to_py<'py>(py: Python<'py>, s: &Scalar) -> PyResult<Bound<'py, PyAny>> {
    match s {
        Scalar::Rational(_) => py.import("fractions")?.getattr("Fraction")?.call1((io::format_scalar(s),)),
        Scalar::Prime { value, .. } => Ok((*value).into_pyobject(py)?.into_any()),
    }
}

fn gaussian_to_py<'py>(py: Python<'py>, z: &Gaussian) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let re = to_py(py, &Scalar::Rational(z.re.clone()))?;
    let im = to_py(py, &Scalar::Rational(z.im.clone()))?;
    Ok((re, im))
}

fn point(values: &[Bound<'_, PyAny>], field: Field) -> PyResult<Vec<Scalar>> {
    values.iter().map(|v| to_scalar(v, field)).collect()
}

/// Arithmetic circuit over one field.
#[pyclass(module = "unideal", frozen, skip_from_py_object)]
struct Circuit {
    inner: unideal_core::Circuit,
    field: Field,
}

#[pymethods]
impl Circuit {
    /// Parses the `vars n` / node-per-line text format.
    #[staticmethod]
    #[pyo3(signature = (text, field = "q"))]
    fn parse(text: &str, field: &str) -> PyResult<Self> {
        let field = parse_field(field)?;
        Ok(Circuit { inner: io::parse_circuit(text, field).map_err(err)?, field })
    }

    /// Circuit of `Σ c·x^m` from a list of (exponents, coefficient) pairs.
    #[staticmethod]
    #[pyo3(signature = (nvars, terms, field = "q"))]
    fn from_terms(nvars: usize, terms: Vec<(Vec<u32>, Bound<'_, PyAny>)>, field: &str) -> PyResult<Self> {
        let field = parse_field(field)?;
        let mut p = unideal_core::SparsePoly::zero(nvars, field);
        for (m, c) in terms {
            if m.len() != nvars {
                return Err(PyValueError::new_err("exponent vector has the wrong length"));
            }
            p.add_term(m, to_scalar(&c, field)?);
        }
        Ok(Circuit { inner: unideal_core::Circuit::from_sparse(&p), field })
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.effective_degree()
    }

    fn eval<'py>(&self, py: Python<'py>, point_: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
        let x = point(&point_, self.field)?;
        to_py(py, &self.inner.eval_field(self.field, &x).map_err(err)?)
    }

    /// Monomial expansion as {exponent tuple: coefficient}.
    #[pyo3(signature = (cap = 1_000_000))]
    fn expand<'py>(&self, py: Python<'py>, cap: usize) -> PyResult<Bound<'py, PyDict>> {
        let p = self.inner.expand(self.field, cap).map_err(err)?;
        let d = PyDict::new(py);
        for (m, c) in p.terms() {
            d.set_item(pyo3::types::PyTuple::new(py, m.iter())?, to_py(py, c)?)?;
        }
        Ok(d)
    }

    fn to_text(&self) -> String {
        io::write_circuit(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Circuit(nvars={}, nodes={}, field={})", self.inner.nvars(), self.inner.nodes().len(), self.field)
    }
}

/// Ideal generated by one univariate polynomial per variable.
#[pyclass(module = "unideal", frozen, skip_from_py_object)]
struct Ideal {
    inner: division::UnivariateIdeal,
}

#[pymethods]
impl Ideal {
    /// Parses `var i : c0 c1 … cd` lines.
    #[staticmethod]
    #[pyo3(signature = (text, field = "q"))]
    fn parse(text: &str, field: &str) -> PyResult<Self> {
        Ok(Ideal { inner: io::parse_ideal(text, parse_field(field)?).map_err(err)? })
    }

    /// `⟨x_i^{e_i}⟩`.
    #[staticmethod]
    #[pyo3(signature = (exponents, field = "q"))]
    fn powers(exponents: Vec<u32>, field: &str) -> PyResult<Self> {
        Ok(Ideal { inner: division::UnivariateIdeal::powers(parse_field(field)?, &exponents).map_err(err)? })
    }

    /// Generators from coefficient lists, low degree first.
    #[staticmethod]
    #[pyo3(signature = (generators, field = "q"))]
    fn from_coeffs(generators: Vec<(usize, Vec<Bound<'_, PyAny>>)>, field: &str) -> PyResult<Self> {
        let field = parse_field(field)?;
        let gens = generators
            .into_iter()
            .map(|(v, cs)| Ok((v, unideal_core::UnivariatePoly::new(field, point(&cs, field)?).map_err(err)?)))
            .collect::<PyResult<_>>()?;
        Ok(Ideal { inner: division::UnivariateIdeal::new(field, gens).map_err(err)? })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn to_text(&self) -> String {
        io::write_ideal(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Ideal(generators={}, field={})", self.inner.len(), self.inner.field())
    }
}

/// `f = outer(ℓ_1, …, ℓ_r)` with linear forms `ℓ_j`.
#[pyclass(module = "unideal", frozen, skip_from_py_object)]
struct LowRank {
    inner: lowrank::LowRankInput,
    field: Field,
}

#[pymethods]
impl LowRank {
    /// Outer circuit text followed by `form c1 … cn [+ c0]` lines.
    #[staticmethod]
    #[pyo3(signature = (text, field = "q"))]
    fn parse(text: &str, field: &str) -> PyResult<Self> {
        let field = parse_field(field)?;
        Ok(LowRank { inner: io::parse_lowrank(text, field).map_err(err)?, field })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    fn to_circuit(&self) -> PyResult<Circuit> {
        Ok(Circuit { inner: self.inner.to_circuit().map_err(err)?, field: self.field })
    }
}

/// Simple undirected graph on vertices `0..n`.
#[pyclass(module = "unideal", frozen, skip_from_py_object)]
struct Graph {
    inner: app::Graph,
}

#[pymethods]
impl Graph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(Graph { inner: app::Graph::new(n, edges).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }
}

/// `(f mod I)(alpha)` for a low-rank `f`.
#[pyfunction]
fn rem_eval<'py>(py: Python<'py>, f: &LowRank, ideal: &Ideal, alpha: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
    let field = ideal.inner.field();
    let v = lowrank::rem_eval(&f.inner, &ideal.inner, &point(&alpha, field)?).map_err(err)?;
    to_py(py, &v)
}

/// Exact membership by expansion and division.
#[pyfunction]
#[pyo3(signature = (f, ideal, cap = 1_000_000))]
fn is_member_brute(f: &Circuit, ideal: &Ideal, cap: usize) -> PyResult<bool> {
    division::is_member_brute(&f.inner, &ideal.inner, cap).map_err(err)
}

fn matrix(rows: Vec<Vec<Bound<'_, PyAny>>>, field: Field) -> PyResult<Matrix> {
    let rows = rows.iter().map(|r| point(r, field)).collect::<PyResult<_>>()?;
    Matrix::from_rows(field, rows).map_err(err)
}

/// Permanent through the low-rank remainder algorithm.
#[pyfunction]
#[pyo3(signature = (rows, rank = None, field = "q"))]
fn permanent<'py>(
    py: Python<'py>,
    rows: Vec<Vec<Bound<'py, PyAny>>>,
    rank: Option<usize>,
    field: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let a = matrix(rows, parse_field(field)?)?;
    to_py(py, &app::permanent_lowrank(&a, rank).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (rows, field = "q"))]
fn ryser_permanent<'py>(py: Python<'py>, rows: Vec<Vec<Bound<'py, PyAny>>>, field: &str) -> PyResult<Bound<'py, PyAny>> {
    let a = matrix(rows, parse_field(field)?)?;
    to_py(py, &app::ryser_permanent(&a).map_err(err)?)
}

/// Randomized vertex-cover test; `field=None` draws a 31-bit prime from the seed.
#[pyfunction]
#[pyo3(signature = (graph, k, trials = 20, seed = 0, field = None, tight = false))]
fn vertex_cover<'py>(
    py: Python<'py>,
    graph: &Graph,
    k: usize,
    trials: usize,
    seed: u64,
    field: Option<&str>,
    tight: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = match field {
        Some(f) => parse_field(f)?,
        None => Field::Prime(random_prime(31, &mut rng)),
    };
    let r = app::vertex_cover_lowrank(&graph.inner, k, trials, field, tight, &mut rng).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("has_vc", r.has_vc)?;
    d.set_item("error_bound", r.error_bound)?;
    d.set_item("trials_run", r.trials_run)?;
    d.set_item("rank", r.rank)?;
    d.set_item("field", field.to_string())?;
    Ok(d)
}

/// Randomized test for `f ∉ ⟨x_i^{e_i}⟩` with `deg f ≤ k`.
#[pyfunction]
#[pyo3(signature = (f, exponents, k, seed = 0, trials = None))]
fn membership_powers<'py>(
    py: Python<'py>,
    f: &Circuit,
    exponents: Vec<u32>,
    k: u32,
    seed: u64,
    trials: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = PowerIdealSpec::new(exponents, k).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = PowersConfig { trials, ..PowersConfig::default() };
    let r = hadamard::membership_powers(&f.inner, &spec, config, &mut rng).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("member", !r.not_in_ideal)?;
    d.set_item("error_bound", r.error_bound)?;
    d.set_item("witness_degree", r.witness_degree)?;
    d.set_item("fan_in", r.fan_in)?;
    Ok(d)
}

/// Numeric certificate search; the certificate is a list of (re, im) pairs.
#[pyfunction]
#[pyo3(signature = (f, ideal, cap = 1_000_000))]
fn certify<'py>(py: Python<'py>, f: &Circuit, ideal: &Ideal, cap: usize) -> PyResult<Bound<'py, PyDict>> {
    let out = certifier::search_nonmembership(&f.inner, &ideal.inner, cap).map_err(err)?;
    let d = PyDict::new(py);
    let decision = match out.decision {
        Decision::Member => "member",
        Decision::NonMember => "nonmember",
        Decision::Undecided => "undecided",
    };
    d.set_item("decision", decision)?;
    let cert = match &out.certificate {
        Some(c) => Some(c.iter().map(|z| gaussian_to_py(py, z)).collect::<PyResult<Vec<_>>>()?),
        None => None,
    };
    d.set_item("certificate", cert)?;
    d.set_item("eps_bits", out.budget.eps_bits)?;
    d.set_item("threshold", to_py(py, &Scalar::Rational(out.budget.m.clone()))?)?;
    Ok(d)
}

/// `(f·D, ⟨∏_j (x_i − j)⟩)`: a member iff `graph` has no independent set of size `k`.
#[pyfunction]
fn reduce_independent_set(graph: &Graph, k: usize) -> PyResult<(Circuit, Ideal)> {
    let (c, i) = reductions::reduce_independent_set(&graph.inner, k).map_err(err)?;
    Ok((Circuit { inner: c, field: Field::Rational }, Ideal { inner: i }))
}

/// `(P_A, ideal)`: a member iff `A x = b` has no 0/1 solution.
#[pyfunction]
#[pyo3(signature = (a, b, n = None))]
fn reduce_klineq(a: Vec<Vec<u64>>, b: Vec<u64>, n: Option<usize>) -> PyResult<(Circuit, Ideal)> {
    let inst = match n {
        Some(n) => reductions::KLinEqInstance::with_columns(a, b, n),
        None => reductions::KLinEqInstance::new(a, b),
    }
    .map_err(err)?;
    let (c, i) = reductions::reduce_klineq(&inst).map_err(err)?;
    Ok((Circuit { inner: c, field: Field::Rational }, Ideal { inner: i }))
}

/// 1-in-3 SAT to k-Lin-Eq; returns `(A, b, n)`.
#[pyfunction]
fn reduce_one_in_three(vars: usize, clauses: Vec<[usize; 3]>) -> PyResult<(Vec<Vec<u64>>, Vec<u64>, usize)> {
    let inst = reductions::OneInThreeInstance::new(vars, clauses).map_err(err)?;
    let lin = reductions::reduce_one_in_three(&inst).map_err(err)?;
    let n = lin.n();
    Ok((lin.a, lin.b, n))
}

/// `(f_G, ⟨x_i^k − 1⟩)`: a member iff `graph` is not `k`-colorable.
#[pyfunction]
fn graph_coloring(graph: &Graph, k: usize) -> PyResult<(Circuit, Ideal)> {
    let (c, i) = reductions::graph_coloring_instance(&graph.inner, k).map_err(err)?;
    Ok((Circuit { inner: c, field: Field::Rational }, Ideal { inner: i }))
}

/// Runs the oracle-equivalence suite; returns (name, passed, detail) triples.
#[pyfunction]
#[pyo3(signature = (seed = 0))]
fn run_selftest(seed: u64) -> Vec<(String, bool, String)> {
    selftest::run(seed).into_iter().map(|c| (c.name.to_string(), c.passed, c.detail)).collect()
}

#[pymodule]
fn unideal(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("UnidealError", m.py().get_type::<UnidealError>())?;
    m.add("CapExceeded", m.py().get_type::<CapExceeded>())?;
    m.add("Undecided", m.py().get_type::<Undecided>())?;
    m.add_class::<Circuit>()?;
    m.add_class::<Ideal>()?;
    m.add_class::<LowRank>()?;
    m.add_class::<Graph>()?;
    m.add_function(wrap_pyfunction!(rem_eval, m)?)?;
    m.add_function(wrap_pyfunction!(is_member_brute, m)?)?;
    m.add_function(wrap_pyfunction!(permanent, m)?)?;
    m.add_function(wrap_pyfunction!(ryser_permanent, m)?)?;
    m.add_function(wrap_pyfunction!(vertex_cover, m)?)?;
    m.add_function(wrap_pyfunction!(membership_powers, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_independent_set, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_klineq, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_one_in_three, m)?)?;
    m.add_function(wrap_pyfunction!(graph_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(run_selftest, m)?)?;
    Ok(())
}
