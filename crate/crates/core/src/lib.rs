//! Almost equal maximum flows: exact solvers over rational arithmetic.
//!
//! Every homologous set `R_i` ties its edge flows to `[λ_i, Δ_i(λ_i)]`,
//! `λ_i` being the smallest flow in the set. [`Instance::evaluate`] computes
//! `F(λ)`, the max-flow value of the network with those bounds;
//! [`solvers::solve`] maximises it.

pub mod error;
pub mod flow;
pub mod graph;
pub mod instance;
pub mod io;
pub mod oracles;
pub mod rational;
pub mod solvers;
pub mod symbolic;

pub use error::{AemfpError, Result};
pub use graph::{CapacityBounds, FlowAssignment, Graph, MaxFlow};
pub use instance::{cut_capacity_at, CutReport, Evaluation, HomologousSet, Instance, Rounding, Violation};
pub use rational::Rational;
pub use solvers::{breakpoint_profile, solve, BreakpointProfile, Method, SolveResult};
pub use symbolic::{AffineValue, DeviationFn, PolyValue};
