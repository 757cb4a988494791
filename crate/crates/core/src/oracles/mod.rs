//! Brute-force ground truth and instance generators.

mod gadgets;
mod random;

pub use gadgets::{
    generate_approx_gadget, generate_convex_gadget, generate_x3c_gadget, ApproxDeviation, GadgetKind, GadgetMeta,
    X3CInstance,
};
pub use random::{generate_random, DeviationKind, RandomParams};

use num_traits::{ToPrimitive, Zero};

use crate::error::{AemfpError, Result};
use crate::instance::{Evaluation, Instance, Rounding};
use crate::rational::{floor, int, Rational};
use crate::solvers::lp_optimum;

/// Largest number of max-flow evaluations an enumeration oracle may spend.
pub const ORACLE_BUDGET: u128 = 1_000_000;

/// Exact fractional optimum via the linear program (linear deviations only).
pub fn oracle_fractional(inst: &Instance) -> Result<Rational> {
    Ok(lp_optimum(inst)?.value)
}

/// The optimum by whichever oracle fits: enumeration for `integer`, the LP
/// for linear deviations, grid refinement for a single concave set.
pub fn oracle_value(inst: &Instance, integer: bool) -> Result<Rational> {
    if integer {
        return oracle_integer(inst);
    }
    if inst.sets().iter().all(|s| s.deviation.is_linear()) {
        return oracle_fractional(inst);
    }
    if inst.set_count() == 1 {
        let tol = Rational::new(1.into(), num_bigint::BigInt::from(1u8) << 40);
        return Ok(oracle_concave(inst, 64, &tol)?.1);
    }
    Err(AemfpError::UnsupportedDeviation("no fractional oracle for several non-linear sets".into()))
}

/// Fractional optimum over the candidate lattice `λ_i = N/D`, `1 ≤ D ≤ m`,
/// `0 ≤ N ≤ D·u_Ri`. Exact for a single constant-shift set whose breakpoint
/// denominators stay within `m`; a lower bound in general.
pub fn oracle_fractional_grid(inst: &Instance) -> Result<Rational> {
    let m = inst.graph().edge_count().max(1) as i64;
    let mut axes = Vec::new();
    for i in 0..inst.set_count() {
        let u = inst.set_upper(i);
        let mut pts = std::collections::BTreeSet::new();
        for d in 1..=m {
            let top = floor(&(&u * int(d))).to_integer().to_i64().ok_or(AemfpError::BudgetExceeded {
                needed: u128::MAX,
                budget: ORACLE_BUDGET,
            })?;
            for n in 0..=top {
                pts.insert(Rational::new(n.into(), d.into()));
            }
        }
        axes.push(pts.into_iter().collect::<Vec<_>>());
    }
    enumerate(inst, &axes, Rounding::Exact)
}

/// Exact integer optimum by enumerating integral `λ_i ∈ {0..⌊u_Ri⌋}` with
/// upper bounds `⌊Δ_i(λ_i)⌋`.
pub fn oracle_integer(inst: &Instance) -> Result<Rational> {
    if !inst.is_integral() {
        return Err(AemfpError::InvalidInstance("integer oracle needs integral capacities".into()));
    }
    let axes: Vec<Vec<Rational>> = (0..inst.set_count())
        .map(|i| {
            let top = floor(&inst.set_upper(i)).to_integer().to_i64().unwrap_or(i64::MAX);
            if top > ORACLE_BUDGET as i64 {
                return Err(AemfpError::BudgetExceeded { needed: top as u128, budget: ORACLE_BUDGET });
            }
            Ok((0..=top).map(int).collect())
        })
        .collect::<Result<_>>()?;
    enumerate(inst, &axes, Rounding::Floor)
}

fn enumerate(inst: &Instance, axes: &[Vec<Rational>], rounding: Rounding) -> Result<Rational> {
    let needed = axes.iter().try_fold(1u128, |acc, a| acc.checked_mul(a.len() as u128)).unwrap_or(u128::MAX);
    if needed > ORACLE_BUDGET {
        return Err(AemfpError::BudgetExceeded { needed, budget: ORACLE_BUDGET });
    }
    let mut idx = vec![0usize; axes.len()];
    let mut best: Option<Rational> = None;
    loop {
        let lambda: Vec<Rational> = idx.iter().zip(axes).map(|(&i, a)| a[i].clone()).collect();
        if let Evaluation::Feasible { flow, .. } = inst.evaluate(&lambda, rounding)? {
            if best.as_ref().is_none_or(|b| flow.flow_value > *b) {
                best = Some(flow.flow_value);
            }
        }
        let mut pos = 0;
        loop {
            if pos == axes.len() {
                return best.ok_or(AemfpError::Infeasible);
            }
            idx[pos] += 1;
            if idx[pos] < axes[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Leftmost maximiser and maximum of `F` for one homologous set: the best
/// point of a uniform grid, refined by ternary search in its neighbourhood
/// until the bracket is narrower than `tolerance · u_R`.
pub fn oracle_concave(inst: &Instance, grid: usize, tolerance: &Rational) -> Result<(Rational, Rational)> {
    if inst.set_count() != 1 {
        return Err(AemfpError::InvalidInstance("the concave oracle handles one homologous set".into()));
    }
    let u = inst.set_upper(0);
    let f = |x: &Rational| -> Result<Option<Rational>> {
        Ok(match inst.evaluate(std::slice::from_ref(x), Rounding::Exact)? {
            Evaluation::Feasible { flow, .. } => Some(flow.flow_value),
            Evaluation::Infeasible { .. } => None,
        })
    };
    let grid = grid.max(2);
    let step = &u / int(grid as i64);
    let mut best: Option<(Rational, Rational)> = None;
    let mut best_idx = 0;
    for i in 0..=grid {
        let x = &step * int(i as i64);
        if let Some(v) = f(&x)? {
            if best.as_ref().is_none_or(|(_, b)| v > *b) {
                best = Some((x, v));
                best_idx = i;
            }
        }
    }
    let (arg, mut top) = best.ok_or(AemfpError::Infeasible)?;
    if u.is_zero() {
        return Ok((arg, top));
    }
    let mut lo = &step * int(best_idx.saturating_sub(1) as i64);
    let mut hi = &step * int((best_idx + 1).min(grid) as i64);
    let width = tolerance * &u;
    let three = int(3);
    while &hi - &lo > width {
        let m1 = &lo + (&hi - &lo) / &three;
        let m2 = &hi - (&hi - &lo) / &three;
        let (f1, f2) = (f(&m1)?, f(&m2)?);
        for v in [&f1, &f2].into_iter().flatten() {
            if *v > top {
                top = v.clone();
            }
        }
        if f1 >= f2 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    // The refined bracket may hold the maximiser exactly at one of its ends.
    for x in [&lo, &hi] {
        if let Some(v) = f(x)? {
            if v > top {
                top = v;
            }
        }
    }
    Ok(((&lo + &hi) / int(2), top))
}
