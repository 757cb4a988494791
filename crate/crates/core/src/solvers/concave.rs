//! Single-set solver for concave deviations.
//!
//! Edmonds–Karp runs on polynomial values in `λ*`. A comparison reduces to
//! locating the roots of a polynomial; a root that neither the branch region
//! nor the current bracket around the optimum can place splits the branch in
//! two (left and right presumption). Branches are replayed from scratch
//! inside their region and dropped once the bracket, built from memoised
//! evaluations of the concave `F`, excludes them.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::{finish, Method, SolveResult};
use crate::error::{AemfpError, Result};
use crate::flow::{bounded_max_flow, Outcome};
use crate::instance::{Evaluation, Instance, Rounding};
use crate::rational::Rational;
use crate::symbolic::{poly_roots, ROOT_BITS, Locator, PolyComparator, PolyValue};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConcaveStats {
    /// Branches started, including replays after a split.
    pub branches: usize,
    /// Branches dropped because the bracket excluded their region.
    pub cancelled: usize,
    /// Largest number of branches alive at once.
    pub max_live: usize,
    /// Distinct points where `F` was evaluated.
    pub evaluations: usize,
}

enum BranchError {
    Split(Rational),
    Fail(AemfpError),
}

impl From<AemfpError> for BranchError {
    fn from(e: AemfpError) -> Self {
        BranchError::Fail(e)
    }
}

/// Where `λ*` can still be, from the memoised values of `F`: open at a memo
/// neighbour, closed at the domain ends.
#[derive(Debug, Clone)]
struct Bracket {
    lo: Rational,
    lo_open: bool,
    hi: Rational,
    hi_open: bool,
}

struct Memo<'a> {
    inst: &'a Instance,
    values: BTreeMap<Rational, Option<Rational>>,
}

impl Memo<'_> {
    fn eval(&mut self, x: &Rational) -> Result<Option<Rational>> {
        if let Some(v) = self.values.get(x) {
            return Ok(v.clone());
        }
        let v = match self.inst.evaluate(std::slice::from_ref(x), Rounding::Exact)? {
            Evaluation::Feasible { flow, .. } => Some(flow.flow_value),
            Evaluation::Infeasible { .. } => None,
        };
        self.values.insert(x.clone(), v.clone());
        Ok(v)
    }

    /// Leftmost maximiser among the memo points.
    fn best(&self) -> Option<(Rational, Rational)> {
        let mut best: Option<(&Rational, &Rational)> = None;
        for (x, v) in &self.values {
            if let Some(v) = v {
                if best.is_none_or(|(_, bv)| v > bv) {
                    best = Some((x, v));
                }
            }
        }
        best.map(|(x, v)| (x.clone(), v.clone()))
    }

    fn bracket(&self) -> Bracket {
        let (arg, _) = self.best().expect("F(0) is feasible");
        let prev = self.values.range(..arg.clone()).next_back().map(|(x, _)| x.clone());
        let next = self.values.range((std::ops::Bound::Excluded(arg.clone()), std::ops::Bound::Unbounded)).next();
        Bracket {
            lo_open: prev.is_some(),
            lo: prev.unwrap_or_else(|| arg.clone()),
            hi_open: next.is_some(),
            hi: next.map(|(x, _)| x.clone()).unwrap_or(arg),
        }
    }
}

/// Locator for one branch: `λ*` presumed in the open region `(lo, hi)`.
/// Roots are isolated over the whole domain so a split point is found again,
/// unchanged, by the branches it creates.
struct BranchLocator {
    lo: Rational,
    hi: Rational,
    bracket: Bracket,
    /// Subinterval of the region on which all answers so far hold.
    valid_lo: Rational,
    valid_hi: Rational,
}

impl Locator for BranchLocator {
    type Error = BranchError;

    fn locate(&mut self, _param: usize, r: &Rational) -> Result<Ordering, BranchError> {
        if *r <= self.lo {
            return Ok(Ordering::Greater);
        }
        if *r >= self.hi {
            return Ok(Ordering::Less);
        }
        let b = &self.bracket;
        if *r < b.lo || (*r == b.lo && b.lo_open) {
            if *r > self.valid_lo {
                self.valid_lo = r.clone();
            }
            return Ok(Ordering::Greater);
        }
        if *r > b.hi || (*r == b.hi && b.hi_open) {
            if *r < self.valid_hi {
                self.valid_hi = r.clone();
            }
            return Ok(Ordering::Less);
        }
        Err(BranchError::Split(r.clone()))
    }
}

/// Exact optimum for one homologous set with a concave deviation (within the
/// root tolerance when a comparison threshold is irrational).
pub fn solve_concave_single(inst: &Instance) -> Result<(SolveResult, ConcaveStats)> {
    if inst.set_count() != 1 {
        return Err(AemfpError::InvalidInstance(format!(
            "the concave solver handles one homologous set, found {}",
            inst.set_count()
        )));
    }
    let upper = inst.set_upper(0);
    let dev = &inst.sets()[0].deviation;
    if !dev.is_concave_on(&upper) {
        return Err(AemfpError::UnsupportedDeviation("deviation is not concave on [0, u_R]".into()));
    }
    let zero = Rational::from_integer(0.into());
    let mut memo = Memo { inst, values: BTreeMap::new() };
    if memo.eval(&zero)?.is_none() {
        return Err(AemfpError::Infeasible);
    }
    memo.eval(&upper)?;
    let mut stats = ConcaveStats::default();

    let m = inst.graph().edge_count();
    let x = PolyValue::identity();
    let dev_poly = dev.as_poly();
    let big = PolyValue::constant_value(inst.capacity().iter().sum::<Rational>() + Rational::from_integer(1.into()));

    let mut stack = vec![(zero.clone(), upper.clone())];
    while let Some((lo, hi)) = stack.pop() {
        stats.max_live = stats.max_live.max(stack.len() + 1);
        if lo >= hi {
            continue;
        }
        let bracket = memo.bracket();
        let excluded = hi <= bracket.lo || lo >= bracket.hi;
        if excluded {
            stats.cancelled += 1;
            continue;
        }
        stats.branches += 1;
        let mut loc = BranchLocator { lo: lo.clone(), hi: hi.clone(), bracket, valid_lo: lo.clone(), valid_hi: hi.clone() };
        let run = (|| -> Result<Outcome<PolyValue>, BranchError> {
            let mut lower = vec![PolyValue::default(); m];
            let mut upper_b: Vec<PolyValue> =
                inst.capacity().iter().map(|u| PolyValue::constant_value(u.clone())).collect();
            let mut cmp = PolyComparator { locator: &mut loc, lo: zero.clone(), hi: upper.clone() };
            for &e in &inst.sets()[0].edges {
                lower[e] = x.clone();
                let gap = dev_poly.clone() - upper_b[e].clone();
                if crate::flow::Comparator::sign(&mut cmp, &gap)? == Ordering::Less {
                    upper_b[e] = dev_poly.clone();
                }
            }
            bounded_max_flow(inst.graph(), &lower, &upper_b, &big, &mut cmp)
        })();
        match run {
            Err(BranchError::Fail(e)) => return Err(e),
            Err(BranchError::Split(r)) => {
                memo.eval(&r)?;
                // An irrational root sits within `past` of its bracket midpoint;
                // sampling just beyond it catches a flat maximum starting there.
                let past = &r + &upper / Rational::from_integer(num_bigint::BigInt::from(1u8) << ROOT_BITS);
                if past < upper {
                    memo.eval(&past)?;
                }
                stack.push((r.clone(), hi));
                stack.push((lo, r));
            }
            Ok(Outcome::Infeasible { .. }) => {}
            Ok(Outcome::Feasible { value, .. }) => {
                let (a, b) = (loc.valid_lo, loc.valid_hi);
                memo.eval(&a)?;
                memo.eval(&b)?;
                for root in poly_roots(&value.derivative(), &a, &b) {
                    memo.eval(&root.value())?;
                }
            }
        }
    }
    stats.evaluations = memo.values.len();
    let (star, _) = memo.best().expect("F(0) is feasible");
    let result = finish(inst, vec![star], Rounding::Exact, Method::Concave)?;
    Ok((result, stats))
}
