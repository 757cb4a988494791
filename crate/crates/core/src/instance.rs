//! AEMFP instances: a capacitated graph plus disjoint homologous edge sets,
//! the parametrised network `G_λ`, and its cut functions `g_S(λ)`.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{AemfpError, Result};
use crate::graph::{max_flow_bounded, CapacityBounds, FlowAssignment, Graph, MaxFlow};
use crate::rational::{fmt_rational, lcm_denominators, Rational};
use crate::symbolic::DeviationFn;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologousSet {
    pub edges: Vec<usize>,
    pub deviation: DeviationFn,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: Graph,
    capacity: Vec<Rational>,
    sets: Vec<HomologousSet>,
    set_of: Vec<Option<usize>>,
}

/// How `Δ(λ)` turns into an upper bound in `G_λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Exact,
    /// `⌊Δ(λ)⌋`, for integral flows.
    Floor,
}

impl Instance {
    /// Builds an instance whose homologous sets must already be disjoint.
    pub fn new(graph: Graph, capacity: Vec<Rational>, sets: Vec<HomologousSet>) -> Result<Self> {
        let (inst, notes) = Self::with_subdivision(graph, capacity, sets)?;
        if !notes.is_empty() {
            return Err(AemfpError::InvalidInstance(notes.join("; ")));
        }
        Ok(inst)
    }

    /// Builds an instance, subdividing every edge that belongs to more than
    /// one set: the edge stays in its first set and each further membership
    /// moves to a fresh segment `(w, head)` of the same capacity. Returns one
    /// note per subdivision.
    pub fn with_subdivision(
        mut graph: Graph,
        mut capacity: Vec<Rational>,
        mut sets: Vec<HomologousSet>,
    ) -> Result<(Self, Vec<String>)> {
        if capacity.len() != graph.edge_count() {
            return Err(AemfpError::InvalidInstance(format!(
                "{} capacities for {} edges",
                capacity.len(),
                graph.edge_count()
            )));
        }
        if let Some(e) = capacity.iter().position(|c| c.is_negative()) {
            return Err(AemfpError::InvalidInstance(format!("edge {e} has negative capacity")));
        }
        let mut notes = Vec::new();
        let mut set_of: Vec<Option<usize>> = vec![None; graph.edge_count()];
        // Last segment created for an edge, so edges shared by 3+ sets chain.
        let mut tail_segment: Vec<usize> = (0..graph.edge_count()).collect();
        for (i, set) in sets.iter_mut().enumerate() {
            if set.edges.is_empty() {
                return Err(AemfpError::InvalidInstance(format!("homologous set {i} is empty")));
            }
            let mut seen = std::collections::BTreeSet::new();
            set.edges.retain(|e| seen.insert(*e));
            for slot in set.edges.iter_mut() {
                let e = *slot;
                if e >= set_of.len() {
                    return Err(AemfpError::InvalidInstance(format!("set {i} names unknown edge {e}")));
                }
                if let Some(j) = set_of[e] {
                    let seg = tail_segment[e];
                    let (_, fresh) = graph.subdivide(seg);
                    capacity.push(capacity[e].clone());
                    set_of.push(Some(i));
                    tail_segment.push(fresh);
                    tail_segment[e] = fresh;
                    notes.push(format!("edge {e} is in sets {j} and {i}; subdivided, new edge {fresh} joins set {i}"));
                    *slot = fresh;
                } else {
                    set_of[e] = Some(i);
                }
            }
        }
        let inst = Instance { graph, capacity, sets, set_of };
        for i in 0..inst.sets.len() {
            inst.sets[i].deviation.validate_on(&inst.set_upper(i))?;
        }
        Ok((inst, notes))
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn capacity(&self) -> &[Rational] {
        &self.capacity
    }

    pub fn sets(&self) -> &[HomologousSet] {
        &self.sets
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    /// Index of the homologous set containing `edge`, if any.
    pub fn set_of(&self, edge: usize) -> Option<usize> {
        self.set_of[edge]
    }

    /// `u_R = min_{r ∈ R} u(r)`
    pub fn set_upper(&self, set: usize) -> Rational {
        self.sets[set].edges.iter().map(|&e| self.capacity[e].clone()).min().expect("nonempty set")
    }

    pub fn is_integral(&self) -> bool {
        self.capacity.iter().all(|c| c.is_integer())
    }

    /// Every set uses a constant-shift deviation.
    pub fn is_constant_deviation(&self) -> bool {
        self.sets.iter().all(|s| s.deviation.constant_shift_value().is_some())
    }

    /// lcm of all capacity and deviation-coefficient denominators.
    pub fn denominator_lcm(&self) -> num_bigint::BigInt {
        let coeffs: Vec<Rational> =
            self.sets.iter().flat_map(|s| s.deviation.as_poly().coeffs().to_vec()).collect();
        lcm_denominators(self.capacity.iter().chain(coeffs.iter()))
    }

    pub fn check_lambda(&self, lambda: &[Rational]) -> Result<()> {
        if lambda.len() != self.sets.len() {
            return Err(AemfpError::OutOfRange(format!(
                "{} parameters for {} homologous sets",
                lambda.len(),
                self.sets.len()
            )));
        }
        for (i, l) in lambda.iter().enumerate() {
            if l.is_negative() || *l > self.set_upper(i) {
                return Err(AemfpError::OutOfRange(format!(
                    "λ{} = {} outside [0, {}]",
                    i + 1,
                    fmt_rational(l),
                    fmt_rational(&self.set_upper(i))
                )));
            }
        }
        Ok(())
    }

    /// Bounds of `G_λ`: edges of `R_i` get `[λ_i, min(u(r), Δ_i(λ_i))]`, all others `[0, u]`.
    pub fn g_lambda(&self, lambda: &[Rational], rounding: Rounding) -> Result<(&Graph, CapacityBounds)> {
        self.check_lambda(lambda)?;
        let mut lower = vec![Rational::zero(); self.capacity.len()];
        let mut upper = self.capacity.clone();
        for (i, set) in self.sets.iter().enumerate() {
            let dev = match rounding {
                Rounding::Exact => set.deviation.eval(&lambda[i]),
                Rounding::Floor => set.deviation.floor_at(&lambda[i]),
            };
            for &e in &set.edges {
                lower[e] = lambda[i].clone();
                if dev < upper[e] {
                    upper[e] = dev.clone();
                }
            }
        }
        Ok((&self.graph, CapacityBounds::new(lower, upper)?))
    }

    /// `F(λ)`: maximum flow value of `G_λ` with its canonical minimum cut.
    pub fn evaluate(&self, lambda: &[Rational], rounding: Rounding) -> Result<Evaluation> {
        let (graph, bounds) = self.g_lambda(lambda, rounding)?;
        Ok(match max_flow_bounded(graph, &bounds)? {
            MaxFlow::Optimal { flow, s_side } => {
                Evaluation::Feasible { cut: CutReport::new(self, s_side), flow }
            }
            MaxFlow::Infeasible { side } => Evaluation::Infeasible { certificate: CutReport::new(self, side) },
        })
    }

    /// All violated AEMFP constraints of `flow`; empty when feasible.
    pub fn violations(&self, flow: &FlowAssignment) -> Vec<Violation> {
        let mut out = Vec::new();
        if flow.values.len() != self.capacity.len() {
            out.push(Violation::Shape { expected: self.capacity.len(), got: flow.values.len() });
            return out;
        }
        for (e, v) in flow.values.iter().enumerate() {
            if v.is_negative() || *v > self.capacity[e] {
                out.push(Violation::Capacity { edge: e, value: v.clone(), capacity: self.capacity[e].clone() });
            }
        }
        for (node, imbalance) in flow.conservation_violations(&self.graph) {
            out.push(Violation::Conservation { node, imbalance });
        }
        let s = self.graph.source();
        let net: Rational = self.graph.out_edges(s).iter().map(|&e| &flow.values[e]).sum::<Rational>()
            - self.graph.in_edges(s).iter().map(|&e| &flow.values[e]).sum::<Rational>();
        if net.is_negative() {
            out.push(Violation::NegativeValue { value: net });
        }
        for (i, set) in self.sets.iter().enumerate() {
            let min = set.edges.iter().map(|&e| flow.values[e].clone()).min().expect("nonempty");
            let limit = set.deviation.eval(&min);
            for &e in &set.edges {
                if flow.values[e] > limit {
                    out.push(Violation::Homologous {
                        set: i,
                        edge: e,
                        value: flow.values[e].clone(),
                        min: min.clone(),
                        limit: limit.clone(),
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Shape { expected: usize, got: usize },
    Capacity { edge: usize, value: Rational, capacity: Rational },
    Conservation { node: usize, imbalance: Rational },
    NegativeValue { value: Rational },
    Homologous { set: usize, edge: usize, value: Rational, min: Rational, limit: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = fmt_rational;
        match self {
            Violation::Shape { expected, got } => write!(f, "shape expected {expected} edge values, got {got}"),
            Violation::Capacity { edge, value, capacity } => {
                write!(f, "capacity edge {edge} flow {} outside [0, {}]", r(value), r(capacity))
            }
            Violation::Conservation { node, imbalance } => {
                write!(f, "conservation node {node} imbalance {}", r(imbalance))
            }
            Violation::NegativeValue { value } => write!(f, "value net source outflow {} < 0", r(value)),
            Violation::Homologous { set, edge, value, min, limit } => write!(
                f,
                "homologous set {set} edge {edge} flow {} exceeds Δ(min = {}) = {}",
                r(value),
                r(min),
                r(limit)
            ),
        }
    }
}

/// Result of evaluating `F` at a parameter vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evaluation {
    Feasible { flow: FlowAssignment, cut: CutReport },
    /// Lower bounds cannot be met; `certificate` has negative capacity at this `λ`.
    Infeasible { certificate: CutReport },
}

impl Evaluation {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            Evaluation::Feasible { flow, .. } => Some(&flow.flow_value),
            Evaluation::Infeasible { .. } => None,
        }
    }
}

/// How one homologous set crosses a cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCrossing {
    /// Capacities of the set's edges leaving the cut side.
    pub forward_caps: Vec<Rational>,
    /// Number of the set's edges entering the cut side.
    pub backward: usize,
    pub deviation: DeviationFn,
}

/// A node set `S` with its capacity function in `G_λ`:
/// `g_S(λ) = u(δ⁺(S∩Q)) + Σ_i [Σ_{r ∈ δ⁺(S∩R_i)} min{u(r), Δ_i(λ_i)} - |δ⁻(S∩R_i)|·λ_i]`.
///
/// For an `s`-`t` cut this is the cut capacity; for an infeasibility
/// certificate it is the Hoffman slack `u(δ⁺(S)) - l(δ⁻(S))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutReport {
    pub s_side: Vec<bool>,
    /// `u(δ⁺(S∩Q))`, the part independent of every `λ_i`.
    pub capacity_const: Rational,
    pub sets: Vec<SetCrossing>,
}

impl CutReport {
    pub fn new(inst: &Instance, s_side: Vec<bool>) -> Self {
        let mut capacity_const = Rational::zero();
        let mut sets: Vec<SetCrossing> = inst
            .sets
            .iter()
            .map(|s| SetCrossing { forward_caps: Vec::new(), backward: 0, deviation: s.deviation.clone() })
            .collect();
        for (id, e) in inst.graph.edges().iter().enumerate() {
            let forward = s_side[e.tail] && !s_side[e.head];
            let backward = !s_side[e.tail] && s_side[e.head];
            match inst.set_of[id] {
                None if forward => capacity_const += &inst.capacity[id],
                Some(i) if forward => sets[i].forward_caps.push(inst.capacity[id].clone()),
                Some(i) if backward => sets[i].backward += 1,
                _ => {}
            }
        }
        CutReport { s_side, capacity_const, sets }
    }

    /// `d_R(S) = |δ⁺(S∩R)| - |δ⁻(S∩R)|`
    pub fn d_r(&self, set: usize) -> i64 {
        self.sets[set].forward_caps.len() as i64 - self.sets[set].backward as i64
    }

    /// Local linear piece `(a, b)` of `g_S` in `λ_set` around `lambda`, the
    /// other parameters held fixed: `g_S ≈ a + b·λ_set`. Exact when no
    /// `min{u(r), Δ(λ)}` term switches at `lambda`; requires a linear `Δ`.
    pub fn piece(&self, set: usize, lambda: &[Rational]) -> (Rational, Rational) {
        let value = cut_capacity_at(self, lambda);
        let x = &lambda[set];
        let cross = &self.sets[set];
        let poly = cross.deviation.as_poly();
        let dev_slope = poly.derivative().eval(x);
        let dev = cross.deviation.eval(x);
        let active = cross.forward_caps.iter().filter(|u| dev < **u).count();
        let slope = dev_slope * Rational::from_integer(active.into())
            - Rational::from_integer(cross.backward.into());
        let constant = value - &slope * x;
        (constant, slope)
    }
}

/// `g_S(λ)` for the report's node set.
pub fn cut_capacity_at(report: &CutReport, lambda: &[Rational]) -> Rational {
    let mut cap = report.capacity_const.clone();
    for (cross, l) in report.sets.iter().zip(lambda) {
        let dev = cross.deviation.eval(l);
        for u in &cross.forward_caps {
            cap += if dev < *u { &dev } else { u };
        }
        cap -= l * Rational::from_integer(cross.backward.into());
    }
    cap
}
