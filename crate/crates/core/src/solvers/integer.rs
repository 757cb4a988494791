//! Integral flows by rounding the fractional optimum.

use crate::error::{AemfpError, Result};
use crate::instance::{Evaluation, Instance, Rounding};
use crate::rational::{ceil, floor, Rational};

use super::{finish, SolveResult};

/// Best integral flow among the `2^k` floor/ceil corners of the fractional
/// optimum `λ*`, falling back to `λ = 0`. Infeasible corners are skipped;
/// ties keep the corner enumerated first (floors before ceilings).
pub fn solve_integer_constant(inst: &Instance, fractional: &SolveResult) -> Result<SolveResult> {
    if !inst.is_integral() {
        return Err(AemfpError::InvalidInstance("integral flows need integral capacities".into()));
    }
    let k = fractional.lambda.len();
    if k != inst.set_count() {
        return Err(AemfpError::InvalidInstance("fractional result does not match the instance".into()));
    }
    if k > 20 {
        return Err(AemfpError::BudgetExceeded { needed: 1u128 << k, budget: 1 << 20 });
    }
    let floors: Vec<Rational> = fractional.lambda.iter().map(floor).collect();
    let ceils: Vec<Rational> = fractional.lambda.iter().map(ceil).collect();
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    let mut seen = std::collections::BTreeSet::new();
    let mut candidates = Vec::new();
    for mask in 0u32..(1 << k) {
        let corner: Vec<Rational> =
            (0..k).map(|i| if mask >> i & 1 == 1 { ceils[i].clone() } else { floors[i].clone() }).collect();
        if seen.insert(corner.clone()) {
            candidates.push(corner);
        }
    }
    candidates.push(vec![Rational::from_integer(0.into()); k]);
    for corner in candidates {
        let Evaluation::Feasible { flow, .. } = inst.evaluate(&corner, Rounding::Floor)? else {
            continue;
        };
        if best.as_ref().is_none_or(|(v, _)| flow.flow_value > *v) {
            best = Some((flow.flow_value, corner));
        }
    }
    let (_, lambda) = best.ok_or(AemfpError::Infeasible)?;
    finish(inst, lambda, Rounding::Floor, fractional.method)
}
