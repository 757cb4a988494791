//! Directed multigraph with a designated source and sink, bounded capacities,
//! and the numeric max-flow entry point.

use std::convert::Infallible;

use num_traits::{One, Signed, Zero};

use crate::error::{AemfpError, Result};
use crate::flow::{self, Exact, Outcome};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
}

/// Nodes are `0..n`; edges are identified by their index `0..m`.
/// Parallel edges are allowed, self-loops are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    source: usize,
    sink: usize,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>, source: usize, sink: usize) -> Result<Self> {
        if source >= n || sink >= n {
            return Err(AemfpError::InvalidGraph(format!(
                "source {source} / sink {sink} out of range for {n} nodes"
            )));
        }
        if source == sink {
            return Err(AemfpError::InvalidGraph("source equals sink".into()));
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        let mut list = Vec::with_capacity(edges.len());
        for (id, (tail, head)) in edges.into_iter().enumerate() {
            if tail >= n || head >= n {
                return Err(AemfpError::InvalidGraph(format!("edge {id} ({tail},{head}) has an unknown endpoint")));
            }
            if tail == head {
                return Err(AemfpError::InvalidGraph(format!("edge {id} is a self-loop at node {tail}")));
            }
            out_adj[tail].push(id);
            in_adj[head].push(id);
            list.push(Edge { tail, head });
        }
        Ok(Graph { n, edges: list, source, sink, out_adj, in_adj })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Edge {
        self.edges[id]
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// δ⁺(v)
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    /// δ⁻(v)
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    /// Replaces edge `id = (u, v)` by `(u, w)` and appends `(w, v)` through a
    /// fresh node `w`. Returns `(w, new_edge_id)`.
    pub(crate) fn subdivide(&mut self, id: usize) -> (usize, usize) {
        let head = self.edges[id].head;
        let w = self.n;
        self.n += 1;
        self.out_adj.push(Vec::new());
        self.in_adj.push(Vec::new());
        self.edges[id].head = w;
        self.in_adj[head].retain(|&e| e != id);
        self.in_adj[w].push(id);
        let new_id = self.edges.len();
        self.edges.push(Edge { tail: w, head });
        self.out_adj[w].push(new_id);
        self.in_adj[head].push(new_id);
        self.in_adj[head].sort_unstable();
        (w, new_id)
    }
}

/// Per-edge lower and upper capacities with `0 <= lower <= upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityBounds {
    lower: Vec<Rational>,
    upper: Vec<Rational>,
}

impl CapacityBounds {
    pub fn new(lower: Vec<Rational>, upper: Vec<Rational>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(AemfpError::InvalidBounds("lower/upper length mismatch".into()));
        }
        for (id, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if l.is_negative() {
                return Err(AemfpError::InvalidBounds(format!("edge {id}: negative lower bound")));
            }
            if l > u {
                return Err(AemfpError::InvalidBounds(format!("edge {id}: lower bound exceeds upper bound")));
            }
        }
        Ok(CapacityBounds { lower, upper })
    }

    /// Lower bounds all zero.
    pub fn upper_only(upper: Vec<Rational>) -> Result<Self> {
        let lower = vec![Rational::zero(); upper.len()];
        Self::new(lower, upper)
    }

    pub fn lower(&self) -> &[Rational] {
        &self.lower
    }

    pub fn upper(&self) -> &[Rational] {
        &self.upper
    }

    pub fn is_integral(&self) -> bool {
        self.lower.iter().chain(&self.upper).all(|v| v.is_integer())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowAssignment {
    pub values: Vec<Rational>,
    /// Net flow out of the source (equals net flow into the sink).
    pub flow_value: Rational,
}

impl FlowAssignment {
    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    /// Violated conservation constraints as `(node, imbalance)`.
    pub fn conservation_violations(&self, graph: &Graph) -> Vec<(usize, Rational)> {
        (0..graph.node_count())
            .filter(|&v| v != graph.source() && v != graph.sink())
            .filter_map(|v| {
                let out: Rational = graph.out_edges(v).iter().map(|&e| &self.values[e]).sum();
                let inn: Rational = graph.in_edges(v).iter().map(|&e| &self.values[e]).sum();
                let imbalance = out - inn;
                (!imbalance.is_zero()).then_some((v, imbalance))
            })
            .collect()
    }

    /// Edges whose flow lies outside `[lower, upper]`.
    pub fn bound_violations(&self, bounds: &CapacityBounds) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&e| self.values[e] < bounds.lower[e] || self.values[e] > bounds.upper[e])
            .collect()
    }
}

/// Result of [`max_flow_bounded`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MaxFlow {
    Optimal {
        flow: FlowAssignment,
        /// Canonical minimum cut: nodes reachable from the source in the final residual network.
        s_side: Vec<bool>,
    },
    /// No flow meets the lower bounds; `side` violates `u(δ⁺(X)) >= l(δ⁻(X))`.
    Infeasible { side: Vec<bool> },
}

impl MaxFlow {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            MaxFlow::Optimal { flow, .. } => Some(&flow.flow_value),
            MaxFlow::Infeasible { .. } => None,
        }
    }
}

pub fn max_flow_bounded(graph: &Graph, bounds: &CapacityBounds) -> Result<MaxFlow> {
    if bounds.lower.len() != graph.edge_count() {
        return Err(AemfpError::InvalidBounds(format!(
            "{} bounds for {} edges",
            bounds.lower.len(),
            graph.edge_count()
        )));
    }
    let unbounded: Rational = bounds.upper.iter().sum::<Rational>() + Rational::one();
    let outcome: std::result::Result<_, Infallible> =
        flow::bounded_max_flow(graph, &bounds.lower, &bounds.upper, &unbounded, &mut Exact);
    Ok(match outcome.unwrap_or_else(|e| match e {}) {
        Outcome::Feasible { flow, value, s_side } => {
            MaxFlow::Optimal { flow: FlowAssignment { values: flow, flow_value: value }, s_side }
        }
        Outcome::Infeasible { side } => MaxFlow::Infeasible { side },
    })
}

/// `u(δ⁺(S)) - l(δ⁻(S))` for a node set `S`.
pub fn cut_capacity(graph: &Graph, bounds: &CapacityBounds, side: &[bool]) -> Rational {
    let mut cap = Rational::zero();
    for (id, e) in graph.edges().iter().enumerate() {
        match (side[e.tail], side[e.head]) {
            (true, false) => cap += &bounds.upper[id],
            (false, true) => cap -= &bounds.lower[id],
            _ => {}
        }
    }
    cap
}
