//! Seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{AemfpError, Result};
use crate::graph::Graph;
use crate::instance::{HomologousSet, Instance};
use crate::rational::{frac, int};
use crate::symbolic::DeviationFn;

/// How deviations are drawn, per set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeviationKind {
    /// `x ↦ x + c` with `c` uniform in `0..=max_shift`.
    Constant { max_shift: i64 },
    /// The same deviation on every set.
    Fixed(DeviationFn),
    /// Uniformly one of `x ↦ 2x`, `x ↦ x + 1`, or a concave quadratic
    /// `a + b·x - x²/d` that stays increasing with `Δ(x) ≥ x` on `[0, cap_max]`.
    ConcaveMix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomParams {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub cap_max: i64,
    pub deviation: DeviationKind,
    pub seed: u64,
}

/// Node 0 is the source and `n - 1` the sink. A random simple `s`-`t` path
/// comes first, then uniformly random non-loop edges; capacities are uniform
/// in `1..=cap_max` and the `k` sets are disjoint, of size `1..=4`.
pub fn generate_random(p: &RandomParams) -> Result<Instance> {
    if p.n < 2 {
        return Err(AemfpError::InvalidInstance("need at least two nodes".into()));
    }
    if p.m < 1 || p.m < p.k {
        return Err(AemfpError::InvalidInstance(format!("{} edges cannot host {} nonempty sets", p.m, p.k)));
    }
    if p.cap_max < 1 {
        return Err(AemfpError::InvalidInstance("cap_max must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (s, t) = (0, p.n - 1);

    let mut inner: Vec<usize> = (1..p.n - 1).collect();
    inner.shuffle(&mut rng);
    let hops = rng.random_range(0..=inner.len().min(p.m - 1));
    let mut path = vec![s];
    path.extend_from_slice(&inner[..hops]);
    path.push(t);
    let mut edges: Vec<(usize, usize)> = path.windows(2).map(|w| (w[0], w[1])).collect();
    while edges.len() < p.m {
        let a = rng.random_range(0..p.n);
        let b = rng.random_range(0..p.n);
        if a != b {
            edges.push((a, b));
        }
    }
    let caps = (0..p.m).map(|_| int(rng.random_range(1..=p.cap_max))).collect();

    let mut ids: Vec<usize> = (0..p.m).collect();
    ids.shuffle(&mut rng);
    let mut sets = Vec::with_capacity(p.k);
    let mut next = 0;
    for i in 0..p.k {
        let room = p.m - next - (p.k - i - 1);
        let size = rng.random_range(1..=room.min(4));
        let mut members = ids[next..next + size].to_vec();
        members.sort_unstable();
        next += size;
        let deviation = match &p.deviation {
            DeviationKind::Constant { max_shift } => DeviationFn::ConstantShift(int(rng.random_range(0..=*max_shift))),
            DeviationKind::Fixed(d) => d.clone(),
            DeviationKind::ConcaveMix => match rng.random_range(0..3) {
                0 => DeviationFn::affine(int(2), int(0))?,
                1 => DeviationFn::ConstantShift(int(1)),
                _ => {
                    let a = int(rng.random_range(0..=1));
                    let d = 4 * p.cap_max * rng.random_range(1..=2);
                    DeviationFn::poly(vec![a, int(2), frac(-1, d)])?
                }
            },
        };
        sets.push(HomologousSet { edges: members, deviation });
    }
    Instance::new(Graph::new(p.n, edges, s, t)?, caps, sets)
}
