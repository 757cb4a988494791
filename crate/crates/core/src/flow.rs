//! Edmonds–Karp with lower bounds, generic over the value type.
//!
//! The same engine runs on exact rationals (numeric max-flow) and on symbolic
//! values whose comparisons are answered by a [`Comparator`]. Lower bounds are
//! removed by the circulation reduction: a super source/sink pair absorbs the
//! node imbalances and an uncapacitated `t -> s` arc closes the circulation.
//! Phase one saturates the super arcs (or proves infeasibility), phase two
//! augments `s -> t` in what remains.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::convert::Infallible;
use std::fmt::Debug;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::graph::Graph;
use crate::rational::Rational;

/// Values that flows and residual capacities can take.
/// Reached nodes and, per node, the arc it was reached by.
type BfsTree = (Vec<bool>, Vec<Option<usize>>);

pub trait FlowNumber:
    Clone + Debug + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self>
{
    fn flow_zero() -> Self;
    fn from_rational(c: &Rational) -> Self;
}

impl FlowNumber for Rational {
    fn flow_zero() -> Self {
        Zero::zero()
    }
    fn from_rational(c: &Rational) -> Self {
        c.clone()
    }
}

/// Decides signs of values. Symbolic implementations may call back into
/// numeric max-flow computations, or abort with their own error.
pub trait Comparator<V: FlowNumber> {
    type Error;

    fn sign(&mut self, v: &V) -> Result<Ordering, Self::Error>;

    fn compare(&mut self, a: &V, b: &V) -> Result<Ordering, Self::Error> {
        self.sign(&(a.clone() - b.clone()))
    }
}

/// Plain comparison of exact rationals.
#[derive(Debug, Default, Clone, Copy)]
pub struct Exact;

impl Comparator<Rational> for Exact {
    type Error = Infallible;

    fn sign(&mut self, v: &Rational) -> Result<Ordering, Infallible> {
        Ok(v.cmp(&Rational::zero()))
    }

    fn compare(&mut self, a: &Rational, b: &Rational) -> Result<Ordering, Infallible> {
        Ok(a.cmp(b))
    }
}

#[derive(Debug, Clone)]
pub enum Outcome<V> {
    Feasible {
        /// Per-edge flow, lower bounds included.
        flow: Vec<V>,
        /// Net flow out of the source.
        value: V,
        /// Nodes reachable from the source in the final residual network.
        s_side: Vec<bool>,
    },
    Infeasible {
        /// Original nodes reachable from the super source after phase one;
        /// a violated Hoffman cut.
        side: Vec<bool>,
    },
}

struct Residual<V> {
    to: Vec<usize>,
    cap: Vec<V>,
    enabled: Vec<bool>,
    adj: Vec<Vec<usize>>,
}

impl<V: FlowNumber> Residual<V> {
    fn new(nodes: usize) -> Self {
        Residual { to: Vec::new(), cap: Vec::new(), enabled: Vec::new(), adj: vec![Vec::new(); nodes] }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: V) -> usize {
        let id = self.to.len();
        self.to.push(to);
        self.cap.push(cap);
        self.enabled.push(true);
        self.adj[from].push(id);
        self.to.push(from);
        self.cap.push(V::flow_zero());
        self.enabled.push(true);
        self.adj[to].push(id + 1);
        id
    }

    fn disable_pair(&mut self, arc: usize) {
        self.enabled[arc] = false;
        self.enabled[arc ^ 1] = false;
    }

    /// BFS over positive residual arcs; returns the reached set and parent arcs. Arcs are scanned in id order, so the
    /// parent of each node is the lowest-id arc that reached it first.
    fn bfs<C: Comparator<V>>(
        &self,
        src: usize,
        stop_at: Option<usize>,
        cmp: &mut C,
    ) -> Result<BfsTree, C::Error> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut parent = vec![None; n];
        let mut queue = VecDeque::new();
        seen[src] = true;
        queue.push_back(src);
        'outer: while let Some(v) = queue.pop_front() {
            for &a in &self.adj[v] {
                if !self.enabled[a] {
                    continue;
                }
                let w = self.to[a];
                if seen[w] {
                    continue;
                }
                if cmp.sign(&self.cap[a])? == Ordering::Greater {
                    seen[w] = true;
                    parent[w] = Some(a);
                    if Some(w) == stop_at {
                        break 'outer;
                    }
                    queue.push_back(w);
                }
            }
        }
        Ok((seen, parent))
    }

    fn max_flow<C: Comparator<V>>(&mut self, src: usize, dst: usize, cmp: &mut C) -> Result<V, C::Error> {
        let mut total = V::flow_zero();
        loop {
            let (seen, parent) = self.bfs(src, Some(dst), cmp)?;
            if !seen[dst] {
                return Ok(total);
            }
            let mut path = Vec::new();
            let mut v = dst;
            while v != src {
                let a = parent[v].expect("bfs parent");
                path.push(a);
                v = self.to[a ^ 1];
            }
            path.reverse();
            let mut bottleneck = self.cap[path[0]].clone();
            for &a in &path[1..] {
                if cmp.compare(&self.cap[a], &bottleneck)? == Ordering::Less {
                    bottleneck = self.cap[a].clone();
                }
            }
            for &a in &path {
                self.cap[a] = self.cap[a].clone() - bottleneck.clone();
                self.cap[a ^ 1] = self.cap[a ^ 1].clone() + bottleneck.clone();
            }
            total = total + bottleneck;
        }
    }
}

/// Maximum `source -> sink` flow subject to `lower <= f <= upper`.
///
/// `unbounded` must exceed every achievable flow value; it caps the closing
/// `t -> s` arc. The caller guarantees `lower <= upper` edge-wise.
pub fn bounded_max_flow<V: FlowNumber, C: Comparator<V>>(
    graph: &Graph,
    lower: &[V],
    upper: &[V],
    unbounded: &V,
    cmp: &mut C,
) -> Result<Outcome<V>, C::Error> {
    let n = graph.node_count();
    let m = graph.edge_count();
    let (s, t) = (graph.source(), graph.sink());
    let (ss, tt) = (n, n + 1);
    let mut net = Residual::new(n + 2);

    for (id, e) in graph.edges().iter().enumerate() {
        net.add_arc(e.tail, e.head, upper[id].clone() - lower[id].clone());
    }
    let closing = net.add_arc(t, s, unbounded.clone());

    let mut excess = vec![V::flow_zero(); n];
    for (id, e) in graph.edges().iter().enumerate() {
        excess[e.head] = excess[e.head].clone() + lower[id].clone();
        excess[e.tail] = excess[e.tail].clone() - lower[id].clone();
    }
    let mut supply_arcs = Vec::new();
    let mut super_arcs = Vec::new();
    for (v, b) in excess.into_iter().enumerate() {
        match cmp.sign(&b)? {
            Ordering::Greater => {
                let a = net.add_arc(ss, v, b);
                supply_arcs.push(a);
                super_arcs.push(a);
            }
            Ordering::Less => super_arcs.push(net.add_arc(v, tt, -b)),
            Ordering::Equal => {}
        }
    }

    if !supply_arcs.is_empty() {
        net.max_flow(ss, tt, cmp)?;
        let mut saturated = true;
        for &a in &supply_arcs {
            if cmp.sign(&net.cap[a])? != Ordering::Equal {
                saturated = false;
                break;
            }
        }
        if !saturated {
            let (seen, _) = net.bfs(ss, None, cmp)?;
            return Ok(Outcome::Infeasible { side: seen[..n].to_vec() });
        }
    }
    for a in super_arcs {
        net.disable_pair(a);
    }
    net.disable_pair(closing);

    net.max_flow(s, t, cmp)?;

    let flow: Vec<V> = (0..m).map(|id| lower[id].clone() + net.cap[2 * id + 1].clone()).collect();
    let mut value = V::flow_zero();
    for &id in graph.out_edges(s) {
        value = value + flow[id].clone();
    }
    for &id in graph.in_edges(s) {
        value = value - flow[id].clone();
    }
    let (seen, _) = net.bfs(s, None, cmp)?;
    Ok(Outcome::Feasible { flow, value, s_side: seen[..n].to_vec() })
}
