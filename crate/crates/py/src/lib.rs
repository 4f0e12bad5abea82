//! Python bindings: the exact Laurent arithmetic, the root lifting, the
//! building decision procedures, sphere homology, and the verification
//! pipeline (as JSON reports).

use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;

use fieldwork_core::building::{
    b_translate as core_b_translate, boundary_action as core_boundary_action,
    contraction_profile as core_contraction_profile, sector_contains as core_sector_contains,
    stabilizer_degree_bounds, ApartmentVertex, DegreeBound, ParabolicVertex,
};
use fieldwork_core::cyclelab::build_sphere;
use fieldwork_core::error::ExactError;
use fieldwork_core::exactfield::{LaurentSeries, Rat, ValBound};
use fieldwork_core::pipeline::{
    cmd_all, cmd_verify_building, cmd_verify_cycle, cmd_verify_root, cmd_verify_torus, EllChoice,
    OutputFormat, RunConfig,
};
use fieldwork_core::rootlift::{
    build_f, lift_root as core_lift_root, q_sequence as core_q_sequence,
    residual_valuation as core_residual_valuation, RootLiftState,
};
use fieldwork_core::toruslab::{make_generators, NoFixedPointCert, WordExponents};

fn err(e: ExactError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_rat(text: &str) -> PyResult<Rat> {
    text.parse::<Rat>()
        .map_err(|e| PyValueError::new_err(format!("bad rational {text:?}: {e}")))
}

fn bound_tuple(b: &ValBound) -> (String, Option<i64>) {
    match b {
        ValBound::Exact(v) => ("exact".to_string(), Some(*v)),
        ValBound::AtLeast(v) => ("at-least".to_string(), Some(*v)),
        ValBound::Infinite => ("infinite".to_string(), None),
    }
}

/// Truncated Laurent series in t^-1 with exact rational coefficients.
#[pyclass(name = "LaurentSeries", from_py_object)]
#[derive(Clone)]
struct PyLaurent {
    inner: LaurentSeries,
}

#[pymethods]
impl PyLaurent {
    /// Builds from `[(exponent, coefficient)]` with coefficients given as
    /// integers or strings like "-3/8"; `floor=None` means exact.
    #[new]
    #[pyo3(signature = (terms, floor=None))]
    fn new(terms: Vec<(i64, String)>, floor: Option<i64>) -> PyResult<Self> {
        let mut parsed = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            parsed.push((e, parse_rat(&c)?));
        }
        Ok(PyLaurent { inner: LaurentSeries::from_terms(parsed, floor) })
    }

    #[staticmethod]
    fn zero() -> Self {
        PyLaurent { inner: LaurentSeries::zero() }
    }

    #[staticmethod]
    fn one() -> Self {
        PyLaurent { inner: LaurentSeries::one() }
    }

    #[staticmethod]
    fn t_power(exp: i64) -> Self {
        PyLaurent { inner: LaurentSeries::t_power(exp) }
    }

    fn __add__(&self, other: &PyLaurent) -> Self {
        PyLaurent { inner: &self.inner + &other.inner }
    }

    fn __sub__(&self, other: &PyLaurent) -> Self {
        PyLaurent { inner: &self.inner - &other.inner }
    }

    fn __mul__(&self, other: &PyLaurent) -> Self {
        PyLaurent { inner: &self.inner * &other.inner }
    }

    fn inv(&self) -> PyResult<Self> {
        Ok(PyLaurent { inner: self.inner.inv().map_err(err)? })
    }

    fn truncate(&self, floor: i64) -> Self {
        PyLaurent { inner: self.inner.truncate_to(floor) }
    }

    /// Exact valuation; None encodes +infinity (exact zero). Raises when
    /// the truncation hides the answer.
    fn valuation(&self) -> PyResult<Option<i64>> {
        match self.inner.valuation().map_err(err)? {
            fieldwork_core::exactfield::Valuation::Finite(v) => Ok(Some(v)),
            fieldwork_core::exactfield::Valuation::Infinite => Ok(None),
        }
    }

    /// `("exact" | "at-least" | "infinite", value)`.
    fn val_bound(&self) -> (String, Option<i64>) {
        bound_tuple(&self.inner.val_bound())
    }

    /// Coefficient at an exponent as a string, or None when hidden below
    /// the floor.
    fn coeff(&self, exp: i64) -> Option<String> {
        self.inner.coeff(exp).map(|c| c.to_string())
    }

    fn floor(&self) -> Option<i64> {
        self.inner.floor()
    }

    fn is_exact(&self) -> bool {
        self.inner.is_exact()
    }

    fn __repr__(&self) -> String {
        format!("{}", self.inner)
    }

    fn __str__(&self) -> String {
        format!("{}", self.inner)
    }
}

/// `q_1 = 1`, then each next prime plus one.
#[pyfunction]
fn q_sequence(n: usize) -> PyResult<Vec<i64>> {
    core_q_sequence(n).map_err(err)
}

/// Display form of the marker polynomial `prod(x + q_i t) - 1`.
#[pyfunction]
fn marker_polynomial(n: usize) -> PyResult<String> {
    Ok(format!("{:?}", build_f(n).map_err(err)?))
}

/// Branch-k root of the marker polynomial as a Laurent series in t^-1.
#[pyfunction]
#[pyo3(signature = (n, branch, floor=None))]
fn lift_root(n: usize, branch: usize, floor: Option<i64>) -> PyResult<PyLaurent> {
    let floor = floor.unwrap_or_else(|| fieldwork_core::rootlift::default_floor(n));
    Ok(PyLaurent { inner: core_lift_root(n, branch, floor).map_err(err)? })
}

/// The rational coefficients `c_0, c_1, ...` of a branch root.
#[pyfunction]
#[pyo3(signature = (n, branch, floor=None))]
fn root_coefficients(n: usize, branch: usize, floor: Option<i64>) -> PyResult<Vec<String>> {
    let floor = floor.unwrap_or_else(|| fieldwork_core::rootlift::default_floor(n));
    let st = RootLiftState::run(n, branch, floor).map_err(err)?;
    Ok(st.coefficients().iter().map(|c| c.to_string()).collect())
}

/// Valuation bound of `f(alpha)` in truncated arithmetic.
#[pyfunction]
fn residual_valuation(alpha: &PyLaurent, n: usize) -> PyResult<(String, Option<i64>)> {
    Ok(bound_tuple(&core_residual_valuation(&alpha.inner, n).map_err(err)?))
}

/// Leading term of the branch-1 eigenvalue of the word, with the exact
/// prediction: `(exp, coeff, expected_exp, expected_coeff, matches)`.
#[pyfunction]
#[pyo3(signature = (n, word, floor=None))]
fn leading_term_certificate(
    n: usize,
    word: Vec<i64>,
    floor: Option<i64>,
) -> PyResult<(i64, String, i64, String, bool)> {
    let floor = floor.unwrap_or_else(|| fieldwork_core::rootlift::default_floor(n));
    let gens = make_generators(n).map_err(err)?;
    let frame = gens.eigen_frame(floor).map_err(err)?;
    let cert = frame.leading_term_certificate(&WordExponents(word)).map_err(err)?;
    Ok((
        cert.lead_exp,
        cert.lead_coeff.to_string(),
        cert.expected_exp,
        cert.expected_coeff.to_string(),
        cert.matches && cert.nontrivial,
    ))
}

/// Human-readable certificate that the word fixes no building point.
#[pyfunction]
#[pyo3(signature = (n, word, floor=None))]
fn fixes_no_point(n: usize, word: Vec<i64>, floor: Option<i64>) -> PyResult<String> {
    let floor = floor.unwrap_or_else(|| fieldwork_core::rootlift::default_floor(n));
    let gens = make_generators(n).map_err(err)?;
    let frame = gens.eigen_frame(floor).map_err(err)?;
    match frame.fixes_no_point_certificate(&WordExponents(word)).map_err(err)? {
        NoFixedPointCert::NonzeroValuation { branch, valuation } => {
            Ok(format!("branch {branch} eigenvalue has valuation {valuation} != 0"))
        }
        NoFixedPointCert::NonconstantTail { branch, exponent } => {
            Ok(format!("branch {branch} eigenvalue has a term at t^{exponent}"))
        }
    }
}

/// Entry degree bounds of the stabilizer of a sector vertex; None marks a
/// forced-zero entry.
#[pyfunction]
fn stabilizer_bounds(exponents: Vec<i64>) -> PyResult<Vec<Vec<Option<i64>>>> {
    if exponents.is_empty() {
        return Err(PyValueError::new_err("need at least one exponent"));
    }
    let v = ApartmentVertex::new(exponents);
    let shape = stabilizer_degree_bounds(&v);
    let n = shape.n();
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| match shape.bound(i, j) {
                    DegreeBound::ZeroForced => None,
                    DegreeBound::AtMost(d) => Some(d),
                })
                .collect()
        })
        .collect())
}

/// Canonical coordinates after translating by the k-th power of
/// `D(t, ..., t, t^-(n-1))`.
#[pyfunction]
fn b_translate(exponents: Vec<i64>, k: i64) -> PyResult<Vec<i64>> {
    if exponents.is_empty() {
        return Err(PyValueError::new_err("need at least one exponent"));
    }
    Ok(core_b_translate(&ApartmentVertex::new(exponents), k).exponents().to_vec())
}

#[pyfunction]
fn sector_contains(exponents: Vec<i64>) -> PyResult<bool> {
    if exponents.is_empty() {
        return Err(PyValueError::new_err("need at least one exponent"));
    }
    Ok(core_sector_contains(&ApartmentVertex::new(exponents)))
}

/// Whether the root group at entry (i, n) fixes the boundary vertex of the
/// given coordinate subset.
#[pyfunction]
fn boundary_action(n: usize, root_index: usize, subset: Vec<usize>) -> PyResult<bool> {
    let v = ParabolicVertex::new(n, subset.into_iter().collect()).map_err(err)?;
    core_boundary_action(n, root_index, &v).map_err(err)
}

/// Valuation shift of a root coordinate under k contraction steps.
#[pyfunction]
fn contraction_profile(n: usize, j: usize, k: i64) -> PyResult<i64> {
    core_contraction_profile(n, j, k).map_err(err)
}

/// Reduced homology of the boundary sphere of the translated-unipotent
/// ball: `(rank, torsion)` in the given degree.
#[pyfunction]
fn sphere_homology(n: usize, dim: usize) -> PyResult<(usize, Vec<String>)> {
    let sc = build_sphere(n, BigUint::from(1u32), 1).map_err(err)?;
    let h = sc.sphere_homology(dim).map_err(err)?;
    Ok((h.rank, h.torsion.iter().map(|t| t.to_string()).collect()))
}

/// Reduced homology of the ball itself.
#[pyfunction]
fn ball_homology(n: usize, dim: usize) -> PyResult<(usize, Vec<String>)> {
    let sc = build_sphere(n, BigUint::from(1u32), 1).map_err(err)?;
    let h = sc.ball_homology(dim).map_err(err)?;
    Ok((h.rank, h.torsion.iter().map(|t| t.to_string()).collect()))
}

fn config_from_kwargs(
    n: usize,
    floor: Option<i64>,
    word_bound: i64,
    k: i64,
    ell: Option<u64>,
    seed: u64,
    matrix_samples: usize,
    vertex_samples: usize,
) -> RunConfig {
    RunConfig {
        n,
        floor,
        word_bound,
        k,
        k0: None,
        ell: match ell {
            None => EllChoice::Auto,
            Some(v) => EllChoice::Fixed(v),
        },
        matrix_samples,
        vertex_samples,
        seed,
        format: OutputFormat::Json,
    }
}

macro_rules! verify_fn {
    ($pyname:ident, $runner:ident, $doc:literal) => {
        #[doc = $doc]
        #[pyfunction]
        #[pyo3(signature = (n=3, floor=None, word_bound=3, k=4, ell=None, seed=7, matrix_samples=100, vertex_samples=10))]
        #[allow(clippy::too_many_arguments)]
        fn $pyname(
            n: usize,
            floor: Option<i64>,
            word_bound: i64,
            k: i64,
            ell: Option<u64>,
            seed: u64,
            matrix_samples: usize,
            vertex_samples: usize,
        ) -> PyResult<String> {
            let config = config_from_kwargs(
                n, floor, word_bound, k, ell, seed, matrix_samples, vertex_samples,
            );
            let report = $runner(&config).map_err(err)?;
            Ok(report.to_json_string())
        }
    };
}

verify_fn!(verify_root, cmd_verify_root, "Root-lifting verification stage; returns the JSON report.");
verify_fn!(verify_torus, cmd_verify_torus, "Subgroup-identities verification stage; returns the JSON report.");
verify_fn!(verify_building, cmd_verify_building, "Building decision-procedure stage; returns the JSON report.");
verify_fn!(verify_cycle, cmd_verify_cycle, "Sphere and membership-certificate stage; returns the JSON report.");
verify_fn!(verify_all, cmd_all, "All four verification stages in order; returns the JSON report.");

#[pymodule]
fn fieldwork(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLaurent>()?;
    m.add_function(wrap_pyfunction!(q_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(marker_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(lift_root, m)?)?;
    m.add_function(wrap_pyfunction!(root_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(residual_valuation, m)?)?;
    m.add_function(wrap_pyfunction!(leading_term_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(fixes_no_point, m)?)?;
    m.add_function(wrap_pyfunction!(stabilizer_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(b_translate, m)?)?;
    m.add_function(wrap_pyfunction!(sector_contains, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_action, m)?)?;
    m.add_function(wrap_pyfunction!(contraction_profile, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_homology, m)?)?;
    m.add_function(wrap_pyfunction!(ball_homology, m)?)?;
    m.add_function(wrap_pyfunction!(verify_root, m)?)?;
    m.add_function(wrap_pyfunction!(verify_torus, m)?)?;
    m.add_function(wrap_pyfunction!(verify_building, m)?)?;
    m.add_function(wrap_pyfunction!(verify_cycle, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    Ok(())
}
