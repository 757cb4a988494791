//! The full piecewise-linear description of `F` for one constant-shift set.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::require_constant;
use crate::error::{AemfpError, Result};
use crate::instance::{Evaluation, Instance, Rounding};
use crate::rational::{fmt_rational, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakpointProfile {
    /// Sorted kinks of `F` on its feasible domain, domain ends included.
    pub breakpoints: Vec<Rational>,
    /// `F` at each breakpoint.
    pub values: Vec<Rational>,
    /// Slope of `F` between consecutive breakpoints.
    pub segment_slopes: Vec<i64>,
    /// Leftmost maximiser.
    pub argmax: Rational,
    pub opt_value: Rational,
}

impl BreakpointProfile {
    /// `lambda,F,slope` rows; the slope is that of the segment to the right
    /// and is empty on the last row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,F,slope\n");
        for (i, (x, v)) in self.breakpoints.iter().zip(&self.values).enumerate() {
            let slope = self.segment_slopes.get(i).map(|s| s.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{},{},{}", fmt_rational(x), fmt_rational(v), slope);
        }
        out
    }

    /// Interior breakpoints, i.e. without the domain ends.
    pub fn interior(&self) -> &[Rational] {
        let n = self.breakpoints.len();
        if n <= 2 {
            &[]
        } else {
            &self.breakpoints[1..n - 1]
        }
    }
}

#[derive(Debug, Clone)]
struct Line {
    constant: Rational,
    slope: Rational,
}

impl Line {
    fn at(&self, x: &Rational) -> Rational {
        &self.constant + &self.slope * x
    }
}

struct Profiler<'a> {
    inst: &'a Instance,
    /// Half-width of the one-sided secants; below the critical-point spacing.
    eps: Rational,
    /// Every critical point has a denominator at most `bound`.
    bound: BigInt,
    points: BTreeSet<Rational>,
}

impl Profiler<'_> {
    fn value(&self, x: &Rational) -> Result<Rational> {
        match self.inst.evaluate(std::slice::from_ref(x), Rounding::Exact)? {
            Evaluation::Feasible { flow, .. } => Ok(flow.flow_value),
            Evaluation::Infeasible { .. } => Err(AemfpError::Internal(format!("F infeasible at {x} inside domain"))),
        }
    }

    /// The linear piece of `F` just right (`dir = 1`) or left (`dir = -1`) of `x`.
    fn tangent(&self, x: &Rational, dir: i64) -> Result<Line> {
        let fx = self.value(x)?;
        let y = x + &self.eps * int(dir);
        let fy = self.value(&y)?;
        let slope = (fy - &fx) / (&self.eps * int(dir));
        Ok(Line { constant: fx - &slope * x, slope })
    }

    /// Eisner–Severance: all breakpoints strictly inside `(l, r)` given the
    /// right tangent at `l` and the left tangent at `r`.
    fn split(&mut self, l: &Rational, r: &Rational, left: Line, right: Line) -> Result<()> {
        if left.slope == right.slope {
            return Ok(());
        }
        let x = (&right.constant - &left.constant) / (&left.slope - &right.slope);
        if x <= *l || x >= *r {
            self.points.insert(if x <= *l { l.clone() } else { r.clone() });
            return Ok(());
        }
        if x.denom() > &self.bound {
            return Err(AemfpError::Internal(format!("breakpoint candidate {x} exceeds the denominator bound")));
        }
        if self.value(&x)? == left.at(&x) {
            self.points.insert(x);
            return Ok(());
        }
        let lx = self.tangent(&x, -1)?;
        let rx = self.tangent(&x, 1)?;
        if lx.slope != rx.slope {
            self.points.insert(x.clone());
        }
        self.split(l, &x, left, lx)?;
        self.split(&x, r, rx, right)
    }
}

/// Largest feasible `λ` by Newton steps on the violated Hoffman cuts.
fn feasible_end(inst: &Instance) -> Result<Rational> {
    let mut x = inst.set_upper(0);
    loop {
        match inst.evaluate(std::slice::from_ref(&x), Rounding::Exact)? {
            Evaluation::Feasible { .. } => return Ok(x),
            Evaluation::Infeasible { certificate } => {
                let (constant, slope) = certificate.piece(0, std::slice::from_ref(&x));
                if !slope.is_negative() {
                    return Err(AemfpError::Infeasible);
                }
                let next = -constant / slope;
                if next >= x || next.is_negative() {
                    return Err(AemfpError::Internal("feasibility search did not progress".into()));
                }
                x = next;
            }
        }
    }
}

/// Piecewise description of `F` on its feasible part of `[0, u_R]`.
pub fn breakpoint_profile(inst: &Instance) -> Result<BreakpointProfile> {
    if inst.set_count() != 1 {
        return Err(AemfpError::InvalidInstance(format!(
            "breakpoint profiles need exactly one homologous set, found {}",
            inst.set_count()
        )));
    }
    require_constant(inst)?;
    let end = feasible_end(inst)?;
    let bound = inst.denominator_lcm() * BigInt::from(2 * inst.sets()[0].edges.len());
    let n2 = Rational::from_integer(&bound * &bound);
    let mut pr = Profiler { inst, eps: (n2 * int(2)).recip(), bound, points: BTreeSet::new() };
    let zero = Rational::zero();
    pr.points.insert(zero.clone());
    pr.points.insert(end.clone());
    if end.is_positive() {
        let left = pr.tangent(&zero, 1)?;
        let right = pr.tangent(&end, -1)?;
        pr.split(&zero, &end, left, right)?;
    }

    let breakpoints: Vec<Rational> = pr.points.iter().cloned().collect();
    let values = breakpoints.iter().map(|x| pr.value(x)).collect::<Result<Vec<_>>>()?;
    let mut segment_slopes = Vec::with_capacity(breakpoints.len().saturating_sub(1));
    for w in 0..breakpoints.len().saturating_sub(1) {
        let s = (&values[w + 1] - &values[w]) / (&breakpoints[w + 1] - &breakpoints[w]);
        if !s.is_integer() {
            return Err(AemfpError::Internal(format!("non-integral slope {s}")));
        }
        segment_slopes.push(s.to_integer().to_i64().ok_or_else(|| AemfpError::Internal("slope overflow".into()))?);
    }
    let opt_value = values.iter().max().cloned().expect("at least one breakpoint");
    let idx = values.iter().position(|v| *v == opt_value).expect("present");
    let argmax = breakpoints[idx].clone();
    Ok(BreakpointProfile { breakpoints, values, segment_slopes, argmax, opt_value })
}
