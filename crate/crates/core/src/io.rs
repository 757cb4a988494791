//! Text formats: instances, solve results and flow files.
//!
//! Instance files hold one record per line, ids 0-based:
//!
//! ```text
//! c optional comment
//! p aemfp <n> <m> <k>
//! n <id> s
//! n <id> t
//! a <id> <tail> <head> <cap>
//! h <setid> const <c> <edge ids…>
//! h <setid> affine <slope> <intercept> <edge ids…>
//! h <setid> poly <deg> <c0> … <cdeg> <edge ids…>
//! ```
//!
//! Rationals are written `p/q` or as integers; decimals are rejected.

use std::fmt::Write as _;

use crate::error::{AemfpError, Result};
use crate::graph::{FlowAssignment, Graph};
use crate::instance::{HomologousSet, Instance};
use crate::rational::{fmt_rational, parse_rational, Rational};
use crate::solvers::SolveResult;
use crate::symbolic::DeviationFn;

fn perr(line: usize, msg: impl Into<String>) -> AemfpError {
    AemfpError::Parse { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| perr(line, format!("bad {what} `{tok}`")))
}

fn rat(tok: Option<&str>, line: usize, what: &str) -> Result<Rational> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    parse_rational(tok).ok_or_else(|| perr(line, format!("bad {what} `{tok}` (expected p/q or an integer)")))
}

/// Parses an instance; edges shared by several sets are subdivided.
pub fn parse_instance(text: &str) -> Result<Instance> {
    parse_instance_with_warnings(text).map(|(inst, _)| inst)
}

/// Like [`parse_instance`], also returning one warning per subdivided edge.
pub fn parse_instance_with_warnings(text: &str) -> Result<(Instance, Vec<String>)> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut source = None;
    let mut sink = None;
    let mut arcs: Vec<Option<(usize, usize, Rational)>> = Vec::new();
    let mut sets: Vec<Option<HomologousSet>> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut tok = raw.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        if kind == "c" {
            continue;
        }
        if kind != "p" && header.is_none() {
            return Err(perr(line, "expected `p aemfp <n> <m> <k>` before other records"));
        }
        match kind {
            "p" => {
                if header.is_some() {
                    return Err(perr(line, "duplicate problem line"));
                }
                if tok.next() != Some("aemfp") {
                    return Err(perr(line, "problem line must read `p aemfp <n> <m> <k>`"));
                }
                let n = num(tok.next(), line, "node count")?;
                let m = num(tok.next(), line, "edge count")?;
                let k = num(tok.next(), line, "set count")?;
                header = Some((n, m, k));
                arcs = vec![None; m];
                sets = vec![None; k];
            }
            "n" => {
                let (n, _, _) = header.expect("checked");
                let id: usize = num(tok.next(), line, "node id")?;
                if id >= n {
                    return Err(perr(line, format!("node {id} out of range 0..{n}")));
                }
                let slot = match tok.next() {
                    Some("s") => &mut source,
                    Some("t") => &mut sink,
                    other => return Err(perr(line, format!("node role must be s or t, got {other:?}"))),
                };
                if slot.replace(id).is_some() {
                    return Err(perr(line, "role assigned twice"));
                }
            }
            "a" => {
                let id: usize = num(tok.next(), line, "edge id")?;
                let tail = num(tok.next(), line, "tail")?;
                let head = num(tok.next(), line, "head")?;
                let cap = rat(tok.next(), line, "capacity")?;
                let slot = arcs.get_mut(id).ok_or_else(|| perr(line, format!("edge id {id} out of range")))?;
                if slot.replace((tail, head, cap)).is_some() {
                    return Err(perr(line, format!("edge {id} defined twice")));
                }
            }
            "h" => {
                let id: usize = num(tok.next(), line, "set id")?;
                let deviation = match tok.next() {
                    Some("const") => DeviationFn::constant_shift(rat(tok.next(), line, "shift")?),
                    Some("affine") => {
                        let slope = rat(tok.next(), line, "slope")?;
                        DeviationFn::affine(slope, rat(tok.next(), line, "intercept")?)
                    }
                    Some("poly") => {
                        let deg: usize = num(tok.next(), line, "degree")?;
                        let coeffs =
                            (0..=deg).map(|j| rat(tok.next(), line, &format!("coefficient c{j}"))).collect::<Result<_>>()?;
                        DeviationFn::poly(coeffs)
                    }
                    other => return Err(perr(line, format!("deviation must be const, affine or poly, got {other:?}"))),
                }
                .map_err(|e| perr(line, e.to_string()))?;
                let edges = tok.map(|t| num(Some(t), line, "edge id")).collect::<Result<Vec<usize>>>()?;
                let slot = sets.get_mut(id).ok_or_else(|| perr(line, format!("set id {id} out of range")))?;
                if slot.replace(HomologousSet { edges, deviation }).is_some() {
                    return Err(perr(line, format!("set {id} defined twice")));
                }
            }
            other => return Err(perr(line, format!("unknown record `{other}`"))),
        }
    }

    let (n, _, _) = header.ok_or_else(|| perr(1, "missing problem line"))?;
    let last = text.lines().count().max(1);
    let s = source.ok_or_else(|| perr(last, "no source node"))?;
    let t = sink.ok_or_else(|| perr(last, "no sink node"))?;
    let mut edges = Vec::with_capacity(arcs.len());
    let mut caps = Vec::with_capacity(arcs.len());
    for (id, a) in arcs.into_iter().enumerate() {
        let (tail, head, cap) = a.ok_or_else(|| perr(last, format!("edge {id} missing")))?;
        edges.push((tail, head));
        caps.push(cap);
    }
    let sets = sets
        .into_iter()
        .enumerate()
        .map(|(id, s)| s.ok_or_else(|| perr(last, format!("set {id} missing"))))
        .collect::<Result<Vec<_>>>()?;
    Instance::with_subdivision(Graph::new(n, edges, s, t)?, caps, sets)
}

/// Canonical text: header, source, sink, edges by id, sets by index.
pub fn write_instance(inst: &Instance) -> String {
    let g = inst.graph();
    let mut out = format!("p aemfp {} {} {}\n", g.node_count(), g.edge_count(), inst.set_count());
    let _ = writeln!(out, "n {} s", g.source());
    let _ = writeln!(out, "n {} t", g.sink());
    for (id, e) in g.edges().iter().enumerate() {
        let _ = writeln!(out, "a {id} {} {} {}", e.tail, e.head, fmt_rational(&inst.capacity()[id]));
    }
    for (id, set) in inst.sets().iter().enumerate() {
        let dev = match &set.deviation {
            DeviationFn::ConstantShift(c) => format!("const {}", fmt_rational(c)),
            DeviationFn::Affine { slope, intercept } => {
                format!("affine {} {}", fmt_rational(slope), fmt_rational(intercept))
            }
            DeviationFn::Poly(c) => {
                let cs: Vec<String> = c.iter().map(fmt_rational).collect();
                format!("poly {} {}", c.len() - 1, cs.join(" "))
            }
        };
        let ids: Vec<String> = set.edges.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "h {id} {dev} {}", ids.join(" "));
    }
    out
}

/// `key value` lines; `flow` lines double as a flow file for `verify`.
pub fn write_result(inst: &Instance, r: &SolveResult) -> Result<String> {
    let mut out = String::from("status optimal\n");
    let _ = writeln!(out, "method {}", r.method);
    let _ = writeln!(out, "integer {}", r.integer);
    let _ = writeln!(out, "opt_value {}", fmt_rational(&r.opt_value));
    for (i, l) in r.lambda.iter().enumerate() {
        let _ = writeln!(out, "lambda {i} {}", fmt_rational(l));
    }
    for (e, v) in r.flow.values.iter().enumerate() {
        let _ = writeln!(out, "flow {e} {}", fmt_rational(v));
    }
    let side: Vec<String> =
        r.certificate.s_side.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v.to_string()).collect();
    let _ = writeln!(out, "cut_side {}", side.join(" "));
    let _ = writeln!(out, "cut_capacity {}", fmt_rational(&r.cut_capacity(inst)?));
    Ok(out)
}

/// Reads `flow <edge> <value>` lines; other lines are ignored and edges
/// without a line carry zero flow.
pub fn parse_flow(text: &str, inst: &Instance) -> Result<FlowAssignment> {
    let m = inst.graph().edge_count();
    let mut values: Vec<Option<Rational>> = vec![None; m];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut tok = raw.split_whitespace();
        if tok.next() != Some("flow") {
            continue;
        }
        let e: usize = num(tok.next(), line, "edge id")?;
        let v = rat(tok.next(), line, "flow value")?;
        let slot = values.get_mut(e).ok_or_else(|| perr(line, format!("edge {e} out of range 0..{m}")))?;
        if slot.replace(v).is_some() {
            return Err(perr(line, format!("edge {e} listed twice")));
        }
    }
    let values: Vec<Rational> = values.into_iter().map(|v| v.unwrap_or_default()).collect();
    let g = inst.graph();
    let s = g.source();
    let flow_value = g.out_edges(s).iter().map(|&e| &values[e]).sum::<Rational>()
        - g.in_edges(s).iter().map(|&e| &values[e]).sum::<Rational>();
    Ok(FlowAssignment { values, flow_value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    const TWO: &str = "p aemfp 2 2 1\nn 0 s\nn 1 t\na 0 0 1 4\na 1 0 1 10\nh 0 const 1 0 1\n";

    #[test]
    fn round_trip() {
        let inst = parse_instance(TWO).unwrap();
        assert_eq!(write_instance(&inst), TWO);
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn minimal_file() {
        let inst = parse_instance("c plain\np aemfp 2 1 0\nn 0 s\nn 1 t\na 0 0 1 7/2\n").unwrap();
        assert_eq!(inst.set_count(), 0);
        assert_eq!(inst.capacity(), &[frac(7, 2)]);
    }

    #[test]
    fn all_deviation_kinds() {
        let text = "p aemfp 3 3 3\nn 0 s\nn 2 t\na 0 0 1 4\na 1 1 2 4\na 2 0 2 1/3\n\
                    h 0 const 1/2 0\nh 1 affine 2 0 1\nh 2 poly 2 1 2 -1/8 2\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(write_instance(&inst), text.replace("\\\n", ""));
        assert_eq!(inst.sets()[2].deviation, DeviationFn::Poly(vec![int(1), int(2), frac(-1, 8)]));
    }

    #[test]
    fn shared_edge_subdivided() {
        let text = "p aemfp 2 3 2\nn 0 s\nn 1 t\na 0 0 1 3\na 1 0 1 3\na 2 0 1 3\nh 0 const 1 0 1\nh 1 const 1 1 2\n";
        let (inst, warnings) = parse_instance_with_warnings(text).unwrap();
        assert_eq!(warnings.len(), 1);
        assert_eq!(inst.set_count(), 2);
        assert_eq!(inst.graph().edge_count(), 4);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("n 0 s\n", 1),
            ("p aemfp 2 1 0\nn 0 s\nn 1 t\na 0 0 1 1.5\n", 4),
            ("p aemfp 2 1 0\nn 0 s\nn 1 t\na 0 0 1 1\na 0 0 1 1\n", 5),
            ("p aemfp 2 1 1\nn 0 s\nn 1 t\na 0 0 1 1\nh 0 cubic 0\n", 5),
            ("p aemfp 2 1 0\nn 0 s\nn 5 t\n", 3),
        ];
        for (text, line) in cases {
            match parse_instance(text) {
                Err(AemfpError::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(matches!(
            parse_instance("p aemfp 2 1 0\nn 0 s\nn 1 t\na 0 0 0 1\n"),
            Err(AemfpError::InvalidGraph(_))
        ));
    }

    #[test]
    fn flow_file() {
        let inst = parse_instance(TWO).unwrap();
        let f = parse_flow("status optimal\nflow 0 4\nflow 1 5\n", &inst).unwrap();
        assert_eq!(f.flow_value, int(9));
        assert!(inst.violations(&f).is_empty());
        assert!(parse_flow("flow 2 1\n", &inst).is_err());
        let bad = parse_flow("flow 0 1\nflow 1 5\n", &inst).unwrap();
        assert!(!inst.violations(&bad).is_empty());
    }
}
