//! Python bindings. Instances travel as the text format; rationals come
//! back as `p/q` strings, ready for `fractions.Fraction`.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use aemfp::io::{parse_flow, parse_instance, write_instance, write_result};
use aemfp::oracles::{generate_random, generate_x3c_gadget, oracle_value, DeviationKind, RandomParams, X3CInstance};
use aemfp::rational::fmt_rational;
use aemfp::{breakpoint_profile, AemfpError, Method};

create_exception!(pyaemfp, SolverError, PyException);

fn err(e: AemfpError) -> PyErr {
    SolverError::new_err(format!("{} {}", e.kind(), e))
}

#[pyclass(get_all, frozen)]
struct Solution {
    method: String,
    integer: bool,
    opt_value: String,
    lambdas: Vec<String>,
    flow: Vec<String>,
    cut_side: Vec<usize>,
    /// The same result in the CLI's text form.
    text: String,
}

/// Solves an instance given as text.
#[pyfunction]
#[pyo3(signature = (instance, method = "auto", integer = false))]
fn solve(instance: &str, method: &str, integer: bool) -> PyResult<Solution> {
    let inst = parse_instance(instance).map_err(err)?;
    let method: Method = method.parse().map_err(err)?;
    let r = aemfp::solve(&inst, method, integer).map_err(err)?;
    Ok(Solution {
        method: r.method.to_string(),
        integer: r.integer,
        opt_value: fmt_rational(&r.opt_value),
        lambdas: r.lambda.iter().map(fmt_rational).collect(),
        flow: r.flow.values.iter().map(fmt_rational).collect(),
        cut_side: r.certificate.s_side.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v).collect(),
        text: write_result(&inst, &r).map_err(err)?,
    })
}

/// Violated constraints of a flow file; empty when the flow is feasible.
#[pyfunction]
fn verify(instance: &str, flow: &str) -> PyResult<Vec<String>> {
    let inst = parse_instance(instance).map_err(err)?;
    let f = parse_flow(flow, &inst).map_err(err)?;
    Ok(inst.violations(&f).iter().map(|v| v.to_string()).collect())
}

#[pyfunction]
#[pyo3(signature = (instance, integer = false))]
fn oracle(instance: &str, integer: bool) -> PyResult<String> {
    let inst = parse_instance(instance).map_err(err)?;
    Ok(fmt_rational(&oracle_value(&inst, integer).map_err(err)?))
}

/// `lambda,F,slope` CSV for a single constant-shift set.
#[pyfunction]
fn breakpoints(instance: &str) -> PyResult<String> {
    let inst = parse_instance(instance).map_err(err)?;
    Ok(breakpoint_profile(&inst).map_err(err)?.to_csv())
}

#[pyfunction]
#[pyo3(signature = (n = 8, m = 12, k = 1, cap_max = 5, max_shift = 2, seed = 0, concave = false))]
fn random_instance(n: usize, m: usize, k: usize, cap_max: i64, max_shift: i64, seed: u64, concave: bool) -> PyResult<String> {
    let deviation = if concave { DeviationKind::ConcaveMix } else { DeviationKind::Constant { max_shift } };
    let inst = generate_random(&RandomParams { n, m, k, cap_max, deviation, seed }).map_err(err)?;
    Ok(write_instance(&inst))
}

/// Hardness gadget for an X3C instance in text form; returns (instance, meta).
#[pyfunction]
fn x3c_gadget(x3c: &str) -> PyResult<(String, String)> {
    let x = X3CInstance::parse(x3c).map_err(err)?;
    let (inst, meta) = generate_x3c_gadget(&x).map_err(err)?;
    Ok((write_instance(&inst), meta.to_text()))
}

#[pymodule]
fn pyaemfp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SolverError", m.py().get_type::<SolverError>())?;
    m.add_class::<Solution>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(breakpoints, m)?)?;
    m.add_function(wrap_pyfunction!(random_instance, m)?)?;
    m.add_function(wrap_pyfunction!(x3c_gadget, m)?)?;
    Ok(())
}
