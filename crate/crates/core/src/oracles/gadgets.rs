//! Exact-cover-by-3-sets reductions as instance generators.

use std::fmt::Write as _;

use crate::error::{AemfpError, Result};
use crate::graph::Graph;
use crate::instance::{HomologousSet, Instance};
use crate::rational::{frac, int, Rational};
use crate::symbolic::DeviationFn;

/// Universe `{0..q}` and a list of 3-element subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct X3CInstance {
    q: usize,
    triples: Vec<[usize; 3]>,
}

impl X3CInstance {
    /// Elements are 0-based; each triple is sorted on construction.
    pub fn new(q: usize, triples: Vec<[usize; 3]>) -> Result<Self> {
        if q == 0 || !q.is_multiple_of(3) {
            return Err(AemfpError::InvalidInstance(format!("universe size {q} is not a positive multiple of 3")));
        }
        let mut sorted = Vec::with_capacity(triples.len());
        for (i, mut t) in triples.into_iter().enumerate() {
            t.sort_unstable();
            if t[0] == t[1] || t[1] == t[2] {
                return Err(AemfpError::InvalidInstance(format!("triple {i} repeats an element")));
            }
            if t[2] >= q {
                return Err(AemfpError::InvalidInstance(format!("triple {i} names element {} ≥ q", t[2] + 1)));
            }
            sorted.push(t);
        }
        Ok(X3CInstance { q, triples: sorted })
    }

    /// Text form: `q p` then one line of three 1-based elements per triple.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let perr = |line: usize, msg: &str| AemfpError::Parse { line, msg: msg.to_string() };
        let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing `q p` header"))?;
        let nums: Vec<usize> =
            header.split_whitespace().map(|t| t.parse()).collect::<std::result::Result<_, _>>().map_err(|_| perr(hl, "expected `q p`"))?;
        let [q, p] = nums[..] else { return Err(perr(hl, "expected `q p`")) };
        let mut triples = Vec::with_capacity(p);
        for _ in 0..p {
            let (ln, l) = lines.next().ok_or_else(|| perr(hl, "fewer triples than announced"))?;
            let e: Vec<usize> = l
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| perr(ln, "expected three element indices"))?;
            let [a, b, c] = e[..] else { return Err(perr(ln, "expected three element indices")) };
            if a == 0 || b == 0 || c == 0 {
                return Err(perr(ln, "elements are 1-based"));
            }
            triples.push([a - 1, b - 1, c - 1]);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(perr(ln, "more triples than announced"));
        }
        Self::new(q, triples)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.q, self.triples.len());
        for t in &self.triples {
            let _ = writeln!(out, "{} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
        }
        out
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    /// Brute-force exact-cover check, for test fixtures.
    pub fn has_exact_cover(&self) -> bool {
        fn go(tr: &[[usize; 3]], covered: u64, full: u64) -> bool {
            if covered == full {
                return true;
            }
            let first = (!covered & full).trailing_zeros() as usize;
            tr.iter().any(|t| {
                let mask = t.iter().fold(0u64, |m, &e| m | 1 << e);
                t.contains(&first) && mask & covered == 0 && go(tr, covered | mask, full)
            })
        }
        self.q <= 63 && go(&self.triples, 0, (1u64 << self.q) - 1)
    }

    /// Copies triples cyclically until there are `q` of them; no-op when
    /// there are already `q` or more, or none at all.
    fn padded(&self) -> Vec<[usize; 3]> {
        let mut t = self.triples.clone();
        if !t.is_empty() {
            let mut i = 0;
            while t.len() < self.q {
                t.push(self.triples[i % self.triples.len()]);
                i += 1;
            }
        }
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetKind {
    X3CBasic,
    ApproxChain(u32),
    ConvexX3C,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetMeta {
    pub kind: GadgetKind,
    /// Optimum when the X3C instance has an exact cover.
    pub expected_yes_value: Option<Rational>,
    /// Upper bound on the integer optimum when it has none.
    pub expected_no_bound: Option<Rational>,
    pub bonus_edges: Vec<usize>,
    /// Number of triples after padding.
    pub triples_used: usize,
    pub notes: Vec<String>,
}

impl GadgetMeta {
    pub fn to_text(&self) -> String {
        let opt = |v: &Option<Rational>| v.as_ref().map(crate::rational::fmt_rational).unwrap_or_else(|| "-".into());
        let kind = match self.kind {
            GadgetKind::X3CBasic => "x3c".to_string(),
            GadgetKind::ApproxChain(k) => format!("approx {k}"),
            GadgetKind::ConvexX3C => "convex".to_string(),
        };
        let bonus: Vec<String> = self.bonus_edges.iter().map(|e| e.to_string()).collect();
        let mut out = format!(
            "kind {kind}\nexpected_yes_value {}\nexpected_no_bound {}\ntriples_used {}\nbonus_edges {}\n",
            opt(&self.expected_yes_value),
            opt(&self.expected_no_bound),
            self.triples_used,
            bonus.join(" ")
        );
        for n in &self.notes {
            let _ = writeln!(out, "note {n}");
        }
        out
    }
}

struct Basic {
    n: usize,
    edges: Vec<(usize, usize)>,
    caps: Vec<Rational>,
    sets: Vec<Vec<usize>>,
    bonus: Vec<usize>,
    source: usize,
    t: usize,
    triples_used: usize,
}

/// Nodes `s, S_1..S_p, a_1..a_q, t`. Per triple: `(s, S_i)` cap 5, `(S_i, a_j)`
/// cap 1 for its elements, bonus `(S_i, t)` cap 2; then `(a_j, t)` cap 1.
/// Sets `R_i = {(S_i, a_j)} ∪ {(S_i, t)}` in triple order, then `R_0 = {(a_j, t)}`.
fn basic(x3c: &X3CInstance) -> Basic {
    let triples = x3c.padded();
    let p = triples.len();
    let q = x3c.q;
    let (s, t) = (0, p + q + 1);
    let elem = |j: usize| p + 1 + j;
    let mut edges = Vec::new();
    let mut caps = Vec::new();
    let mut sets = Vec::new();
    let mut bonus = Vec::new();
    for (i, tr) in triples.iter().enumerate() {
        let si = 1 + i;
        edges.push((s, si));
        caps.push(int(5));
        let mut set = Vec::new();
        for &j in tr {
            set.push(edges.len());
            edges.push((si, elem(j)));
            caps.push(int(1));
        }
        bonus.push(edges.len());
        set.push(edges.len());
        edges.push((si, t));
        caps.push(int(2));
        sets.push(set);
    }
    let mut r0 = Vec::new();
    for j in 0..q {
        r0.push(edges.len());
        edges.push((elem(j), t));
        caps.push(int(1));
    }
    sets.push(r0);
    Basic { n: p + q + 2, edges, caps, sets, bonus, source: s, t, triples_used: p }
}

fn build(n: usize, edges: Vec<(usize, usize)>, s: usize, t: usize, caps: Vec<Rational>, sets: Vec<HomologousSet>) -> Result<Instance> {
    Instance::new(Graph::new(n, edges, s, t)?, caps, sets)
}

fn padding_note(x3c: &X3CInstance, used: usize) -> Vec<String> {
    if used != x3c.triples.len() {
        vec![format!("padded {} triples to {used} by cyclic copies", x3c.triples.len())]
    } else {
        Vec::new()
    }
}

/// Integer AEMFP gadget with `Δ(x) = x + 1` on every set. With `p` triples
/// after padding, an exact cover yields `4q/3 + p` (`7q/3` at `p = q`).
pub fn generate_x3c_gadget(x3c: &X3CInstance) -> Result<(Instance, GadgetMeta)> {
    let b = basic(x3c);
    let q = x3c.q as i64;
    let yes = frac(4 * q, 3) + int(b.triples_used as i64);
    let dev = DeviationFn::ConstantShift(int(1));
    let sets = b.sets.iter().map(|e| HomologousSet { edges: e.clone(), deviation: dev.clone() }).collect();
    let inst = build(b.n, b.edges, b.source, b.t, b.caps, sets)?;
    let meta = GadgetMeta {
        kind: GadgetKind::X3CBasic,
        expected_no_bound: Some(&yes - int(1)),
        expected_yes_value: Some(yes),
        bonus_edges: b.bonus,
        triples_used: b.triples_used,
        notes: padding_note(x3c, b.triples_used),
    };
    Ok((inst, meta))
}

/// Deviation on the extra set of the approximation gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproxDeviation {
    /// `x ↦ x + 1`
    ConstantShift,
    /// `x ↦ k·x`
    Scaled,
}

/// Basic gadget followed by `t → t'` (cap `L = 7q/3`), `L` parallel
/// `(t', t'')` edges of cap 1 and `k·L` parallel `(s, t'')` edges of cap 2,
/// all of the latter in one extra set `R_b`; the sink becomes `t''`.
pub fn generate_approx_gadget(x3c: &X3CInstance, k: u32, deviation: ApproxDeviation) -> Result<(Instance, GadgetMeta)> {
    if k == 0 {
        return Err(AemfpError::InvalidInstance("k must be positive".into()));
    }
    let mut b = basic(x3c);
    let l = 7 * x3c.q / 3;
    let (t1, t2) = (b.n, b.n + 1);
    b.edges.push((b.t, t1));
    b.caps.push(int(l as i64));
    let mut rb = Vec::new();
    for _ in 0..l {
        rb.push(b.edges.len());
        b.edges.push((t1, t2));
        b.caps.push(int(1));
    }
    let mut bonus = Vec::new();
    for _ in 0..(k as usize * l) {
        bonus.push(b.edges.len());
        rb.push(b.edges.len());
        b.edges.push((b.source, t2));
        b.caps.push(int(2));
    }
    let one = DeviationFn::ConstantShift(int(1));
    let mut sets: Vec<HomologousSet> =
        b.sets.iter().map(|e| HomologousSet { edges: e.clone(), deviation: one.clone() }).collect();
    let dev_b = match deviation {
        ApproxDeviation::ConstantShift => one.clone(),
        ApproxDeviation::Scaled => DeviationFn::affine(int(k as i64), int(0))?,
    };
    sets.push(HomologousSet { edges: rb, deviation: dev_b });
    let inst = build(b.n + 2, b.edges, b.source, t2, b.caps, sets)?;

    let (l_q, k_q) = (int(l as i64), int(k as i64));
    let mut notes = padding_note(x3c, b.triples_used);
    let (yes, no) = match deviation {
        ApproxDeviation::ConstantShift => {
            let yes = (b.triples_used == x3c.q).then(|| &l_q + int(2) * &k_q * &l_q);
            let no = (b.triples_used <= x3c.q).then(|| &l_q - int(1) + &k_q * &l_q);
            (yes, no)
        }
        ApproxDeviation::Scaled => {
            notes.push("closed forms are stated for the constant-shift variant only".into());
            (None, None)
        }
    };
    let meta = GadgetMeta {
        kind: GadgetKind::ApproxChain(k),
        expected_yes_value: yes,
        expected_no_bound: no,
        bonus_edges: bonus,
        triples_used: b.triples_used,
        notes,
    };
    Ok((inst, meta))
}

/// Basic gadget topology with `Δ(x) = 2x² + 1` on every set. Only the
/// enumeration oracles accept it; `expected_yes_value` is the closed form `8q/3`.
pub fn generate_convex_gadget(x3c: &X3CInstance) -> Result<(Instance, GadgetMeta)> {
    let b = basic(x3c);
    let dev = DeviationFn::convex_gadget();
    let sets = b.sets.iter().map(|e| HomologousSet { edges: e.clone(), deviation: dev.clone() }).collect();
    let inst = build(b.n, b.edges, b.source, b.t, b.caps, sets)?;
    let yes = frac(8 * x3c.q as i64, 3);
    let mut notes = padding_note(x3c, b.triples_used);
    notes.push("convex deviation: solvers reject this instance".into());
    let meta = GadgetMeta {
        kind: GadgetKind::ConvexX3C,
        expected_no_bound: None,
        expected_yes_value: Some(yes),
        bonus_edges: b.bonus,
        triples_used: b.triples_used,
        notes,
    };
    Ok((inst, meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let x = X3CInstance::parse("6 2\n1 2 3\n6 5 4\n").unwrap();
        assert_eq!(x.triples(), &[[0, 1, 2], [3, 4, 5]]);
        assert_eq!(X3CInstance::parse(&x.to_text()).unwrap(), x);
        assert!(x.has_exact_cover());
        assert!(X3CInstance::parse("4 0\n").is_err());
        assert!(X3CInstance::parse("3 1\n1 1 2\n").is_err());
        assert!(X3CInstance::parse("3 1\n1 2 4\n").is_err());
        assert!(X3CInstance::parse("3 2\n1 2 3\n").is_err());
    }

    #[test]
    fn basic_shape() {
        let x = X3CInstance::new(3, vec![[0, 1, 2]]).unwrap();
        let (inst, meta) = generate_x3c_gadget(&x).unwrap();
        // padded to three triples: s, t, 3 set nodes, 3 elements
        assert_eq!(inst.graph().node_count(), 8);
        assert_eq!(inst.graph().edge_count(), 18);
        assert_eq!(inst.set_count(), 4);
        assert_eq!(meta.expected_yes_value, Some(int(7)));
        assert_eq!(meta.triples_used, 3);
        assert_eq!(meta.bonus_edges.len(), 3);
    }

    #[test]
    fn approx_closed_forms() {
        let x = X3CInstance::new(3, vec![[0, 1, 2]]).unwrap();
        for (k, yes, no) in [(1, 21, 13), (2, 35, 20), (4, 63, 34)] {
            let (_, meta) = generate_approx_gadget(&x, k, ApproxDeviation::ConstantShift).unwrap();
            assert_eq!(meta.expected_yes_value, Some(int(yes)));
            assert_eq!(meta.expected_no_bound, Some(int(no)));
        }
    }

    #[test]
    fn approx_ratio_tends_to_two() {
        let x = X3CInstance::new(3, vec![[0, 1, 2]]).unwrap();
        let mut last = Rational::from_integer(0.into());
        for k in [1, 2, 4, 8] {
            let (_, meta) = generate_approx_gadget(&x, k, ApproxDeviation::ConstantShift).unwrap();
            let ratio = meta.expected_yes_value.unwrap() / meta.expected_no_bound.unwrap();
            assert!(ratio >= int(2) - crate::rational::frac(1, k as i64 + 1), "k={k}: {ratio}");
            assert!(ratio < int(2) && ratio > last, "k={k}: {ratio}");
            last = ratio;
        }
    }
}
