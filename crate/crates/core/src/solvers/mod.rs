//! Solvers for the fractional and integer AEMFP.

mod concave;
mod integer;
mod lp;
mod parametric;
mod profile;

use std::fmt;
use std::str::FromStr;

pub use concave::{solve_concave_single, ConcaveStats};
pub use integer::solve_integer_constant;
pub use lp::{lp_optimum, solve_lp, LpSolution};
pub use parametric::{resolve_comparison, solve_k_constant, solve_simple_constant, Resolution};
pub use profile::{breakpoint_profile, BreakpointProfile};

use crate::error::{AemfpError, Result};
use crate::graph::{cut_capacity, FlowAssignment};
use crate::instance::{cut_capacity_at, CutReport, Evaluation, Instance, Rounding};
use crate::rational::Rational;
use crate::symbolic::DeviationFn;

/// Which algorithm `solve` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Parametric search for constant shifts with `k ≤ 2`, the concave
    /// solver for a single non-constant set, and the LP otherwise.
    #[default]
    Auto,
    Parametric,
    Concave,
    Lp,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Parametric => "parametric",
            Method::Concave => "concave",
            Method::Lp => "lp",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = AemfpError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "parametric" => Ok(Method::Parametric),
            "concave" => Ok(Method::Concave),
            "lp" => Ok(Method::Lp),
            other => Err(AemfpError::InvalidInstance(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    /// Optimal guess per set; every flow on `R_i` lies in `[λ_i, Δ_i(λ_i)]`.
    pub lambda: Vec<Rational>,
    pub flow: FlowAssignment,
    pub opt_value: Rational,
    /// Minimum cut of `G_λ*`; its capacity at `λ*` equals `opt_value`.
    pub certificate: CutReport,
    /// Method that produced `lambda`.
    pub method: Method,
    pub integer: bool,
}

impl SolveResult {
    /// Capacity of the certificate cut in `G_λ*`, with `⌊Δ⌋` for integer results.
    pub fn cut_capacity(&self, inst: &Instance) -> Result<Rational> {
        let rounding = if self.integer { Rounding::Floor } else { Rounding::Exact };
        let (graph, bounds) = inst.g_lambda(&self.lambda, rounding)?;
        Ok(cut_capacity(graph, &bounds, &self.certificate.s_side))
    }
}

/// Solves `inst` with `method`; `integer` additionally rounds to an integral flow.
pub fn solve(inst: &Instance, method: Method, integer: bool) -> Result<SolveResult> {
    let fractional = match resolve_method(inst, method)? {
        Method::Parametric => solve_k_constant(inst)?,
        Method::Concave => solve_concave_single(inst)?.0,
        Method::Lp => solve_lp(inst)?,
        Method::Auto => unreachable!("resolved above"),
    };
    if integer {
        solve_integer_constant(inst, &fractional)
    } else {
        Ok(fractional)
    }
}

/// The concrete method `Auto` stands for on this instance.
pub fn resolve_method(inst: &Instance, method: Method) -> Result<Method> {
    if method != Method::Auto {
        return Ok(method);
    }
    let k = inst.set_count();
    let linear = inst.sets().iter().all(|s| s.deviation.is_linear());
    Ok(if inst.is_constant_deviation() && k <= 2 {
        Method::Parametric
    } else if k == 1 {
        Method::Concave
    } else if linear {
        Method::Lp
    } else {
        return Err(AemfpError::UnsupportedDeviation(
            "non-linear deviation with several homologous sets".into(),
        ));
    })
}

/// Builds the result for a known optimal `λ` from a fresh evaluation of `G_λ`.
pub(crate) fn finish(inst: &Instance, lambda: Vec<Rational>, rounding: Rounding, method: Method) -> Result<SolveResult> {
    match inst.evaluate(&lambda, rounding)? {
        Evaluation::Feasible { flow, cut } => {
            let opt_value = flow.flow_value.clone();
            let (graph, bounds) = inst.g_lambda(&lambda, rounding)?;
            let exact_ok = rounding != Rounding::Exact || cut_capacity_at(&cut, &lambda) == opt_value;
            if !exact_ok || cut_capacity(graph, &bounds, &cut.s_side) != opt_value {
                return Err(AemfpError::Internal("cut capacity differs from flow value".into()));
            }
            Ok(SolveResult {
                lambda,
                flow,
                opt_value,
                certificate: cut,
                method,
                integer: rounding == Rounding::Floor,
            })
        }
        Evaluation::Infeasible { .. } => Err(AemfpError::Infeasible),
    }
}

pub(crate) fn require_constant(inst: &Instance) -> Result<()> {
    for (i, s) in inst.sets().iter().enumerate() {
        if !matches!(s.deviation, DeviationFn::ConstantShift(_)) {
            return Err(AemfpError::UnsupportedDeviation(format!(
                "set {i} needs a constant-shift deviation for the parametric solver"
            )));
        }
    }
    Ok(())
}
