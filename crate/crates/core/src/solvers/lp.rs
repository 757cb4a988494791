//! The fractional AEMFP with linear deviations as an exact linear program.
//!
//! Variables are the edge flows and one `λ_i` per set:
//! `max f(δ⁺(s)) - f(δ⁻(s))` subject to conservation, `f ≤ u`, and
//! `λ_i ≤ f_r ≤ α_i λ_i + β_i` for `r ∈ R_i`. Every right-hand side is
//! nonnegative, so the slack basis is feasible and one simplex phase suffices.

use num_traits::{Signed, Zero};

use super::{finish, Method, SolveResult};
use crate::error::{AemfpError, Result};
use crate::instance::{Instance, Rounding};
use crate::rational::Rational;
use crate::symbolic::DeviationFn;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub lambda: Vec<Rational>,
    pub flow: Vec<Rational>,
}

/// `max c·x` s.t. `A x ≤ b`, `x ≥ 0`, with `b ≥ 0`. Dense tableau, Bland's rule.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// Reduced costs `c_j - z_j`.
    cost: Vec<Rational>,
    objective: Rational,
    basis: Vec<usize>,
}

impl Tableau {
    fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>, c: Vec<Rational>) -> Self {
        let n = c.len();
        let m = a.len();
        let mut rows = Vec::with_capacity(m);
        for (i, mut row) in a.into_iter().enumerate() {
            row.resize(n + m, Rational::zero());
            row[n + i] = Rational::from_integer(1.into());
            rows.push(row);
        }
        let mut cost = c;
        cost.resize(n + m, Rational::zero());
        Tableau { rows, rhs: b, cost, objective: Rational::zero(), basis: (n..n + m).collect() }
    }

    fn solve(&mut self) -> Result<()> {
        loop {
            let Some(enter) = self.cost.iter().position(|c| c.is_positive()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((j, r)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*j]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((pivot_row, _)) = leave else {
                return Err(AemfpError::Internal("linear program is unbounded".into()));
            };
            self.pivot(pivot_row, enter);
        }
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        self.rhs[r] /= &p;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        let f = self.cost[col].clone();
        for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
        self.objective += &f * &pivot_rhs;
        self.basis[r] = col;
    }

    fn value_of(&self, var: usize) -> Rational {
        self.basis.iter().position(|&b| b == var).map(|i| self.rhs[i].clone()).unwrap_or_else(Rational::zero)
    }
}

/// Exact optimum of the fractional AEMFP for constant or affine deviations.
pub fn lp_optimum(inst: &Instance) -> Result<LpSolution> {
    let g = inst.graph();
    let m = g.edge_count();
    let k = inst.set_count();
    let nvar = m + k;
    let zero_row = || vec![Rational::zero(); nvar];
    let one = Rational::from_integer(1.into());
    let mut a = Vec::new();
    let mut b = Vec::new();

    for v in 0..g.node_count() {
        if v == g.source() || v == g.sink() {
            continue;
        }
        let mut row = zero_row();
        for &e in g.out_edges(v) {
            row[e] += &one;
        }
        for &e in g.in_edges(v) {
            row[e] -= &one;
        }
        let neg: Vec<Rational> = row.iter().map(|x| -x).collect();
        a.push(row);
        b.push(Rational::zero());
        a.push(neg);
        b.push(Rational::zero());
    }
    for (e, u) in inst.capacity().iter().enumerate() {
        let mut row = zero_row();
        row[e] = one.clone();
        a.push(row);
        b.push(u.clone());
    }
    for (i, set) in inst.sets().iter().enumerate() {
        let (slope, intercept) = match &set.deviation {
            DeviationFn::ConstantShift(c) => (one.clone(), c.clone()),
            DeviationFn::Affine { slope, intercept } => (slope.clone(), intercept.clone()),
            DeviationFn::Poly(_) => {
                return Err(AemfpError::UnsupportedDeviation(format!("set {i}: the LP needs a linear deviation")));
            }
        };
        for &e in &set.edges {
            let mut row = zero_row();
            row[m + i] = one.clone();
            row[e] = -one.clone();
            a.push(row);
            b.push(Rational::zero());
            let mut row = zero_row();
            row[e] = one.clone();
            row[m + i] = -slope.clone();
            a.push(row);
            b.push(intercept.clone());
        }
    }
    let mut c = zero_row();
    for &e in g.out_edges(g.source()) {
        c[e] += &one;
    }
    for &e in g.in_edges(g.source()) {
        c[e] -= &one;
    }

    let mut t = Tableau::new(a, b, c);
    t.solve()?;
    Ok(LpSolution {
        value: t.objective.clone(),
        flow: (0..m).map(|e| t.value_of(e)).collect(),
        lambda: (0..k).map(|i| t.value_of(m + i)).collect(),
    })
}

/// Solves through the LP and rebuilds flow and certificate from `G_λ`.
pub fn solve_lp(inst: &Instance) -> Result<SolveResult> {
    let lp = lp_optimum(inst)?;
    let r = finish(inst, lp.lambda, Rounding::Exact, Method::Lp)?;
    if r.opt_value != lp.value {
        return Err(AemfpError::Internal("LP value differs from max flow at its λ".into()));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::instance::HomologousSet;
    use crate::rational::{frac, int};

    #[test]
    fn bottleneck() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (1, 2)], 0, 2).unwrap();
        let inst = Instance::new(
            g,
            vec![int(3), int(10), int(10)],
            vec![HomologousSet { edges: vec![1, 2], deviation: DeviationFn::ConstantShift(int(0)) }],
        )
        .unwrap();
        let lp = lp_optimum(&inst).unwrap();
        assert_eq!(lp.value, int(3));
        assert_eq!(lp.flow[1], frac(3, 2));
        assert_eq!(lp.flow[2], frac(3, 2));
    }

    #[test]
    fn affine_two_parallel() {
        // Δ(x) = 2x on caps 1 and 10: λ = 1, flows 1 and 2.
        let g = Graph::new(2, vec![(0, 1), (0, 1)], 0, 1).unwrap();
        let inst = Instance::new(
            g,
            vec![int(1), int(10)],
            vec![HomologousSet { edges: vec![0, 1], deviation: DeviationFn::affine(int(2), int(0)).unwrap() }],
        )
        .unwrap();
        assert_eq!(lp_optimum(&inst).unwrap().value, int(3));
        let r = solve_lp(&inst).unwrap();
        assert_eq!(r.opt_value, int(3));
    }
}
