//! Python bindings for the tightoa toolkit.
//!
//! Exposes the Rao bound, Krawtchouk values, the congruence filter,
//! Krein-array parameter derivation, the known tight designs with their
//! derived schemes, and the feasibility scan. Exact rationals cross the
//! boundary as Python ints when integral and as `p/q` strings otherwise.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use pyo3::IntoPyObjectExt;

use tightoa::designs::{
    derived_scheme, fiber, known_design as build_known_design, t2s2_scheme, KnownDesign,
    PointSet,
};
use tightoa::exactmath::Rat;
use tightoa::hamming::{self, HammingContext};
use tightoa::scheme::{KreinArray, SchemeParameters};
use tightoa::triple::{
    build_system, integer_feasible, scan_noda_with_jobs, solve_parametric, FeasibilityVerdict,
    NodaOutcome, TripleError,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rat_to_py(py: Python<'_>, r: &Rat) -> PyResult<Py<PyAny>> {
    if r.is_integer() {
        r.to_integer().into_py_any(py)
    } else {
        r.to_string().into_py_any(py)
    }
}

fn rats_to_py(py: Python<'_>, rs: &[Rat]) -> PyResult<Vec<Py<PyAny>>> {
    rs.iter().map(|r| rat_to_py(py, r)).collect()
}

fn point_set(words: Vec<Vec<u8>>, q: usize) -> PyResult<PointSet> {
    let n = words.first().map(Vec::len).unwrap_or(0);
    if n == 0 {
        return Err(value_err("need at least one nonempty word"));
    }
    PointSet::new(HammingContext::new(n, q), words).map_err(value_err)
}

/// Rao bound sum_{k<=e} C(n,k)(q-1)^k.
#[pyfunction]
fn rao_bound(n: usize, q: usize, e: usize) -> PyResult<num_bigint::BigInt> {
    if e > n || q < 2 {
        return Err(value_err("need e <= n and q >= 2"));
    }
    Ok(hamming::rao_bound(n, q, e))
}

/// Krawtchouk polynomial value K_{n,q,i}(x).
#[pyfunction]
fn krawtchouk(n: usize, q: usize, i: usize, x: i64) -> PyResult<num_bigint::BigInt> {
    if i > n || q < 2 {
        return Err(value_err("need i <= n and q >= 2"));
    }
    Ok(hamming::krawtchouk(n, q, i, x))
}

/// Integral zeros of sum_{j<=e} K_{n,q,j} on [1, n] and whether exactly e
/// were found.
#[pyfunction]
fn wilson_zeros(n: usize, q: usize, e: usize) -> PyResult<(Vec<usize>, bool)> {
    if e < 1 || e > n || q < 2 {
        return Err(value_err("need 1 <= e <= n and q >= 2"));
    }
    Ok(hamming::wilson_zeros(n, q, e))
}

/// Congruence filter for the q = 6 family; returns a dict of per-condition
/// results and the implied (size, n, q) when all pass.
#[pyfunction]
fn noda_congruences(py: Python<'_>, a: u64) -> PyResult<Py<PyAny>> {
    if a == 0 {
        return Err(value_err("a must be positive"));
    }
    let v = hamming::noda_congruences(a);
    let d = PyDict::new(py);
    d.set_item("a", a)?;
    d.set_item("mod3", v.mod3_ok)?;
    d.set_item("mod5", v.mod5_ok)?;
    d.set_item("mod16", v.mod16_ok)?;
    d.set_item("n_integral", v.n_integral)?;
    d.set_item("passes", v.passes())?;
    match v.implied {
        Some((size, n, q)) => d.set_item("implied", (size, n, q))?,
        None => d.set_item("implied", py.None())?,
    }
    d.into_py_any(py)
}

fn scheme_dict(py: Python<'_>, sp: &SchemeParameters) -> PyResult<Py<PyAny>> {
    let d = PyDict::new(py);
    d.set_item("classes", sp.classes())?;
    d.set_item("vertex_count", rat_to_py(py, sp.vertex_count())?)?;
    d.set_item("valencies", rats_to_py(py, sp.valencies())?)?;
    d.set_item("multiplicities", rats_to_py(py, sp.multiplicities())?)?;
    d.set_item("dual_eigenvalues", rats_to_py(py, &sp.dual_eigenvalues())?)?;
    let report = sp.feasibility();
    d.set_item("feasible", report.passed())?;
    d.set_item(
        "violations",
        report
            .violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>(),
    )?;
    let zeros = sp.krein_zeros();
    d.set_item("q_antipodal", zeros.q_antipodal)?;
    d.set_item("krein_zero_count", zeros.zeros.len())?;
    d.into_py_any(py)
}

/// Derives the full parameter set from a Krein array given as
/// `b0,b1,...;c1,c2,...`.
#[pyfunction]
fn derive_krein(py: Python<'_>, array: &str) -> PyResult<Py<PyAny>> {
    let ka = KreinArray::parse(array).map_err(value_err)?;
    let sp = SchemeParameters::from_krein_array(&ka).map_err(value_err)?;
    scheme_dict(py, &sp)
}

/// The words of a known tight design (`repetition-dual-5-2` or
/// `golay-dual-11-3`).
#[pyfunction]
fn known_design(name: &str) -> PyResult<Vec<Vec<u8>>> {
    let which: KnownDesign = name.parse().map_err(value_err)?;
    let ps = build_known_design(which).map_err(value_err)?;
    Ok(ps.words().to_vec())
}

/// Design strength of a word list over alphabet {0,...,q-1}, verified by
/// both the transform and direct counting.
#[pyfunction]
fn design_strength(words: Vec<Vec<u8>>, q: usize) -> PyResult<usize> {
    let ps = point_set(words, q)?;
    hamming::design_strength(&ps).map_err(value_err)
}

/// Size, strength, and degree set of a word list.
#[pyfunction]
fn design_info(py: Python<'_>, words: Vec<Vec<u8>>, q: usize) -> PyResult<Py<PyAny>> {
    let ps = point_set(words, q)?;
    let strength = hamming::design_strength(&ps).map_err(value_err)?;
    let inner = hamming::inner_distribution(&ps);
    let d = PyDict::new(py);
    d.set_item("size", ps.len())?;
    d.set_item("n", ps.context().n)?;
    d.set_item("q", ps.context().q)?;
    d.set_item("strength", strength)?;
    d.set_item("degree_set", inner.degree_set)?;
    d.into_py_any(py)
}

/// Builds and verifies the derived 4-class scheme of a tight 4-design;
/// returns its Krein array, relation distances, and parameter summary.
#[pyfunction]
fn derived_scheme_info(py: Python<'_>, words: Vec<Vec<u8>>, q: usize) -> PyResult<Py<PyAny>> {
    let ps = point_set(words, q)?;
    let derived = derived_scheme(&ps).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item(
        "krein_array",
        derived
            .scheme
            .krein_array()
            .expect("verified scheme is Q-polynomial")
            .to_string(),
    )?;
    d.set_item("relation_distances", derived.relation_distances.to_vec())?;
    d.set_item("fiber_sizes", derived.fiber_sizes.clone())?;
    d.set_item("params", scheme_dict(py, derived.scheme.params())?)?;
    d.into_py_any(py)
}

/// Strength, degree set, and counted SRG parameters of one fiber of a
/// design.
#[pyfunction]
fn fiber_info(py: Python<'_>, words: Vec<Vec<u8>>, q: usize, index: u8) -> PyResult<Py<PyAny>> {
    let ps = point_set(words, q)?;
    let f = fiber(&ps, index).map_err(value_err)?;
    let strength = hamming::design_strength(&f).map_err(value_err)?;
    let inner = hamming::inner_distribution(&f);
    let es = t2s2_scheme(&f).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("size", f.len())?;
    d.set_item("strength", strength)?;
    d.set_item("degree_set", inner.degree_set.clone())?;
    let srg: Vec<Py<PyAny>> = (1..=inner.degree())
        .map(|class| {
            let e = PyDict::new(py);
            e.set_item("distance", inner.degree_set[class - 1])?;
            e.set_item("v", f.len())?;
            e.set_item("k", rat_to_py(py, es.params().intersection_number(class, class, 0))?)?;
            e.set_item(
                "lambda",
                rat_to_py(py, es.params().intersection_number(class, class, class))?,
            )?;
            e.set_item(
                "mu",
                rat_to_py(py, es.params().intersection_number(class, class, 3 - class))?,
            )?;
            e.into_py_any(py)
        })
        .collect::<PyResult<_>>()?;
    d.set_item("srg", srg)?;
    d.into_py_any(py)
}

/// Solves the triple system for one triple type from a Krein array and
/// decides integer feasibility.
#[pyfunction]
#[pyo3(signature = (array, u, v, w, use_krein_zeros = true))]
fn triple_feasibility(
    py: Python<'_>,
    array: &str,
    u: usize,
    v: usize,
    w: usize,
    use_krein_zeros: bool,
) -> PyResult<Py<PyAny>> {
    let ka = KreinArray::parse(array).map_err(value_err)?;
    let sp = SchemeParameters::from_krein_array(&ka).map_err(value_err)?;
    let dmax = sp.classes();
    if [u, v, w].iter().any(|&c| c < 1 || c > dmax) {
        return Err(value_err(format!("triple classes must be in 1..={dmax}")));
    }
    let d = PyDict::new(py);
    if !sp.feasibility().passed() {
        d.set_item("verdict", "rejected-by-feasibility")?;
        return d.into_py_any(py);
    }
    match solve_parametric(build_system(&sp, u, v, w, use_krein_zeros)) {
        Err(TripleError::Inconsistent(_)) => {
            d.set_item("verdict", "infeasible")?;
            d.set_item("reason", "inconsistent-system")?;
        }
        Ok(fam) => {
            d.set_item("dimension", fam.dimension())?;
            match integer_feasible(&fam) {
                FeasibilityVerdict::Feasible { witnesses } => {
                    d.set_item("verdict", "feasible")?;
                    d.set_item("witnesses", witnesses.len())?;
                }
                FeasibilityVerdict::Infeasible { reason } => {
                    d.set_item("verdict", "infeasible")?;
                    d.set_item("reason", reason.to_string())?;
                }
                FeasibilityVerdict::Undecided { dimension } => {
                    d.set_item("verdict", "undecided")?;
                    d.set_item("dimension", dimension)?;
                }
            }
        }
    }
    d.into_py_any(py)
}

/// Runs the feasibility scan over a list of r values; returns one dict per
/// row.
#[pyfunction]
#[pyo3(signature = (rs, jobs = 1))]
fn scan_noda(py: Python<'_>, rs: Vec<u64>, jobs: usize) -> PyResult<Vec<Py<PyAny>>> {
    scan_noda_with_jobs(&rs, jobs)
        .into_iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("r", row.r)?;
            match &row.outcome {
                NodaOutcome::DerivationFailed { message } => {
                    d.set_item("verdict", "derivation-failed")?;
                    d.set_item("detail", message)?;
                }
                NodaOutcome::RejectedByFeasibility { violation } => {
                    d.set_item("verdict", "rejected-by-feasibility")?;
                    d.set_item("detail", violation)?;
                }
                NodaOutcome::NoRealizableTriple => {
                    d.set_item("verdict", "no-realizable-triple")?;
                }
                NodaOutcome::Analyzed { dimension, verdict } => {
                    if let Some(dim) = dimension {
                        d.set_item("dimension", dim)?;
                    }
                    match verdict {
                        FeasibilityVerdict::Feasible { witnesses } => {
                            d.set_item("verdict", "feasible")?;
                            d.set_item("witnesses", witnesses.len())?;
                        }
                        FeasibilityVerdict::Infeasible { reason } => {
                            d.set_item("verdict", "infeasible")?;
                            d.set_item("reason", reason.to_string())?;
                        }
                        FeasibilityVerdict::Undecided { dimension } => {
                            d.set_item("verdict", "undecided")?;
                            d.set_item("dimension", dimension)?;
                        }
                    }
                }
            }
            d.into_py_any(py)
        })
        .collect()
}

#[pymodule]
fn tightoa_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(rao_bound, m)?)?;
    m.add_function(wrap_pyfunction!(krawtchouk, m)?)?;
    m.add_function(wrap_pyfunction!(wilson_zeros, m)?)?;
    m.add_function(wrap_pyfunction!(noda_congruences, m)?)?;
    m.add_function(wrap_pyfunction!(derive_krein, m)?)?;
    m.add_function(wrap_pyfunction!(known_design, m)?)?;
    m.add_function(wrap_pyfunction!(design_strength, m)?)?;
    m.add_function(wrap_pyfunction!(design_info, m)?)?;
    m.add_function(wrap_pyfunction!(derived_scheme_info, m)?)?;
    m.add_function(wrap_pyfunction!(fiber_info, m)?)?;
    m.add_function(wrap_pyfunction!(triple_feasibility, m)?)?;
    m.add_function(wrap_pyfunction!(scan_noda, m)?)?;
    Ok(())
}
