//! Acceptance criteria 1–10. Each test prints one `criterion N: PASS|FAIL`
//! line straight to stderr, so the lines survive output capture.

use std::io::Write;
use std::process::Command;

use num_traits::{Signed, Zero};

use aemfp::graph::{max_flow_bounded, CapacityBounds, MaxFlow};
use aemfp::io::{parse_flow, parse_instance, write_instance, write_result};
use aemfp::oracles::{
    generate_approx_gadget, generate_convex_gadget, generate_random, generate_x3c_gadget, oracle_concave,
    oracle_fractional, oracle_integer, ApproxDeviation, DeviationKind, RandomParams, X3CInstance,
};
use aemfp::rational::{frac, int};
use aemfp::solvers::{
    breakpoint_profile, solve_concave_single, solve_integer_constant, solve_k_constant, solve_simple_constant,
};
use aemfp::{solve, DeviationFn, Instance, Method, Rational};

fn report(n: u32, failures: &[String], detail: &str) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "criterion {n}: {status} {detail}");
    for f in failures.iter().take(5) {
        let _ = writeln!(err, "  {f}");
    }
    assert!(failures.is_empty(), "criterion {n}: {} failures, first: {}", failures.len(), failures[0]);
}

/// The small random family: n ≤ 8, m ≤ 12, k ≤ 2, caps ≤ 5.
fn family(seed: u64, k: usize, deviation: DeviationKind) -> Instance {
    let m = 1 + (seed as usize * 5) % 12;
    let p = RandomParams { n: 2 + seed as usize % 7, m: m.max(k), k, cap_max: 5, deviation, seed };
    generate_random(&p).expect("valid parameters")
}

fn constant_family(seed: u64) -> Instance {
    family(seed, seed as usize % 3, DeviationKind::Constant { max_shift: 2 })
}

fn x3c(q: usize, triples: &[[usize; 3]]) -> X3CInstance {
    X3CInstance::new(q, triples.to_vec()).unwrap()
}

fn yes_instances() -> Vec<X3CInstance> {
    vec![x3c(3, &[[0, 1, 2]]), x3c(6, &[[0, 1, 2], [3, 4, 5]]), x3c(6, &[[0, 1, 2], [1, 2, 3], [3, 4, 5]])]
}

fn no_instances() -> Vec<X3CInstance> {
    vec![x3c(3, &[]), x3c(6, &[[0, 1, 2], [1, 2, 3], [2, 3, 4]]), x3c(6, &[[0, 1, 3], [1, 2, 4], [2, 3, 5]])]
}

#[test]
fn criterion_01_x3c_yes_value() {
    let mut fails = Vec::new();
    for x in yes_instances() {
        assert!(x.has_exact_cover());
        let (inst, _) = generate_x3c_gadget(&x).unwrap();
        let target = frac(7 * x.q() as i64, 3);
        let solved = solve(&inst, Method::Auto, true).unwrap().opt_value;
        let oracle = oracle_integer(&inst).unwrap();
        if solved != target || oracle != target {
            fails.push(format!("q={} solve={solved} oracle={oracle} want {target}", x.q()));
        }
    }
    report(1, &fails, "X3C yes-gadgets q∈{3,6}: solve --integer == oracle --integer == 7q/3 (exact)");
}

#[test]
fn criterion_02_x3c_no_separation() {
    let mut fails = Vec::new();
    for x in no_instances() {
        assert!(!x.has_exact_cover());
        let (inst, _) = generate_x3c_gadget(&x).unwrap();
        let oracle = oracle_integer(&inst).unwrap();
        if oracle >= frac(7 * x.q() as i64, 3) {
            fails.push(format!("q={} oracle={oracle}", x.q()));
        }
    }
    report(2, &fails, "X3C no-gadgets q∈{3,6}: oracle_integer < 7q/3 (strict)");
}

#[test]
fn criterion_03_approx_closed_forms() {
    let mut fails = Vec::new();
    let (yes, no) = (x3c(3, &[[0, 1, 2]]), x3c(3, &[]));
    for k in [1u32, 2, 4] {
        let l = int(7);
        let target = &l + int(2 * k as i64) * &l;
        let (gy, _) = generate_approx_gadget(&yes, k, ApproxDeviation::ConstantShift).unwrap();
        let (gn, _) = generate_approx_gadget(&no, k, ApproxDeviation::ConstantShift).unwrap();
        let (vy, vn) = (oracle_integer(&gy).unwrap(), oracle_integer(&gn).unwrap());
        let bound = int(2) - frac(1, k as i64 + 1);
        if vy != target || vn.is_zero() || &vy / &vn < bound {
            fails.push(format!("k={k} yes={vy} want {target} no={vn} ratio bound {bound}"));
        }
    }
    report(3, &fails, "approx gadget q=3, k∈{1,2,4}: yes == 7q/3·(1+2k), yes/no ≥ 2 − 1/(k+1)");
}

#[test]
fn criterion_04_fractional_oracle() {
    let mut fails = Vec::new();
    for seed in 0..240 {
        let inst = constant_family(seed);
        let solved = solve_k_constant(&inst).unwrap().opt_value;
        let oracle = oracle_fractional(&inst).unwrap();
        if solved != oracle {
            fails.push(format!("seed {seed}: solver {solved} oracle {oracle}"));
        }
    }
    report(4, &fails, "240 random instances k≤2: solve_k_constant == oracle_fractional (exact)");
}

#[test]
fn criterion_05_integer_oracle() {
    let mut fails = Vec::new();
    for seed in 0..240 {
        let inst = constant_family(seed);
        let frac_result = solve_k_constant(&inst).unwrap();
        let solved = solve_integer_constant(&inst, &frac_result).unwrap().opt_value;
        let oracle = oracle_integer(&inst).unwrap();
        if solved != oracle {
            fails.push(format!("seed {seed}: solver {solved} oracle {oracle}"));
        }
    }
    report(5, &fails, "240 random instances k≤2: solve_integer_constant == oracle_integer (exact)");
}

#[test]
fn criterion_06_breakpoint_structure() {
    let mut fails = Vec::new();
    for seed in 0..200 {
        let inst = family(seed, 1, DeviationKind::Constant { max_shift: 2 });
        let m = inst.graph().edge_count() as i64;
        let p = breakpoint_profile(&inst).unwrap();
        let star = solve_simple_constant(&inst).unwrap().lambda[0].clone();
        let sep = frac(1, m * m);
        let count_ok = p.interior().len() as i64 <= 2 * m;
        let concave = p.segment_slopes.windows(2).all(|w| w[0] > w[1]);
        let separated = p.breakpoints.windows(2).all(|w| &w[1] - &w[0] >= sep);
        let at_breakpoint = p.breakpoints.contains(&star) && p.argmax == star;
        if !(count_ok && concave && separated && at_breakpoint) {
            fails.push(format!(
                "seed {seed}: count {count_ok} concave {concave} separated {separated} at_breakpoint {at_breakpoint}"
            ));
        }
    }
    report(6, &fails, "200 random k=1 profiles: ≤2m kinks, strictly decreasing slopes, gaps ≥ 1/m², λ* at a breakpoint");
}

#[test]
fn criterion_07_degeneration() {
    let mut fails = Vec::new();
    for seed in 0..100 {
        let k = 1 + seed as usize % 2;
        let wide = family(seed, k, DeviationKind::Fixed(DeviationFn::ConstantShift(int(5))));
        let plain = CapacityBounds::upper_only(wide.capacity().to_vec()).unwrap();
        let unconstrained = match max_flow_bounded(wide.graph(), &plain).unwrap() {
            MaxFlow::Optimal { flow, .. } => flow.flow_value,
            MaxFlow::Infeasible { .. } => unreachable!("zero lower bounds"),
        };
        let got = solve_k_constant(&wide).unwrap().opt_value;
        if got != unconstrained {
            fails.push(format!("seed {seed} c=5: {got} vs unconstrained {unconstrained}"));
        }

        let tight = family(seed, k, DeviationKind::Fixed(DeviationFn::ConstantShift(int(0))));
        let r = solve_k_constant(&tight).unwrap();
        for (i, set) in tight.sets().iter().enumerate() {
            let vals: Vec<&Rational> = set.edges.iter().map(|&e| &r.flow.values[e]).collect();
            let spread = vals.iter().max().unwrap().to_owned() - vals.iter().min().unwrap().to_owned();
            if !spread.is_zero() {
                fails.push(format!("seed {seed} c=0 set {i}: spread {spread}"));
            }
        }
    }
    report(7, &fails, "100 random instances: c=cap_max gives plain max flow, c=0 gives spread 0 (exact)");
}

#[test]
fn criterion_08_concave_solver() {
    let mut fails = Vec::new();
    let tol = Rational::new(1.into(), num_bigint::BigInt::from(1u8) << 36);
    let lim = Rational::new(1.into(), num_bigint::BigInt::from(1u8) << 30);
    for seed in 0..100 {
        let inst = family(seed, 1, DeviationKind::ConcaveMix);
        let (r, _) = solve_concave_single(&inst).unwrap();
        let (ol, ov) = oracle_concave(&inst, 64, &tol).unwrap();
        let u = inst.set_upper(0);
        if (&r.lambda[0] - &ol).abs() > &lim * &u || r.opt_value < ov {
            fails.push(format!("seed {seed}: λ {} vs oracle {ol}, value {} vs {ov}", r.lambda[0], r.opt_value));
        }
    }
    for seed in 0..100 {
        let inst = family(seed, 1, DeviationKind::Constant { max_shift: 2 });
        let (c, _) = solve_concave_single(&inst).unwrap();
        let p = solve_simple_constant(&inst).unwrap();
        if c.lambda != p.lambda || c.opt_value != p.opt_value {
            fails.push(format!("seed {seed} x+c: concave λ {} vs {}", c.lambda[0], p.lambda[0]));
        }
    }
    report(8, &fails, "100 concave k=1 instances within 2^-30·u_R of the grid oracle; x+c equals solve_simple_constant");
}

#[test]
fn criterion_09_certificates() {
    let mut fails = Vec::new();
    let mut cases: Vec<(String, Instance, bool)> = Vec::new();
    for seed in 0..100 {
        cases.push((format!("const seed {seed}"), constant_family(seed), seed % 2 == 0));
        cases.push((format!("concave seed {seed}"), family(seed, 1, DeviationKind::ConcaveMix), false));
    }
    for x in yes_instances().into_iter().chain(no_instances()) {
        cases.push((format!("x3c q={}", x.q()), generate_x3c_gadget(&x).unwrap().0, true));
    }
    for (name, inst, integer) in &cases {
        let r = solve(inst, Method::Auto, *integer).unwrap();
        if r.cut_capacity(inst).unwrap() != r.opt_value {
            fails.push(format!("{name}: cut capacity differs from {}", r.opt_value));
        }
        let flow = parse_flow(&write_result(inst, &r).unwrap(), inst).unwrap();
        let violations = inst.violations(&flow);
        if !violations.is_empty() || flow.flow_value != r.opt_value {
            fails.push(format!("{name}: verify found {:?}", violations));
        }
    }
    report(9, &fails, &format!("{} solves: cut capacity == flow value, emitted flow verifies", cases.len()));
}

#[test]
fn criterion_10_round_trip_and_determinism() {
    let mut fails = Vec::new();
    let mut generated: Vec<Instance> = (0..100).map(constant_family).collect();
    generated.extend((0..50).map(|s| family(s, 1, DeviationKind::ConcaveMix)));
    for x in yes_instances().into_iter().chain(no_instances()) {
        generated.push(generate_x3c_gadget(&x).unwrap().0);
        generated.push(generate_convex_gadget(&x).unwrap().0);
        for k in [1, 2, 4] {
            generated.push(generate_approx_gadget(&x, k, ApproxDeviation::ConstantShift).unwrap().0);
            generated.push(generate_approx_gadget(&x, k, ApproxDeviation::Scaled).unwrap().0);
        }
    }
    for (i, inst) in generated.iter().enumerate() {
        let text = write_instance(inst);
        match parse_instance(&text) {
            Ok(back) if &back == inst && write_instance(&back) == text => {}
            other => fails.push(format!("instance {i}: round trip gave {:?}", other.map(|_| "a different instance"))),
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("r.txt");
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_aemfp")).args(args).output().unwrap();
        (out.status.code(), out.stdout, out.stderr)
    };
    let gen = ["generate", "random", "--k", "2", "--seed", "11", "-o", file.to_str().unwrap()];
    let first_gen = run(&gen);
    let first_file = std::fs::read(&file).unwrap();
    let first_solve = run(&["solve", file.to_str().unwrap()]);
    let first_int = run(&["solve", "--integer", file.to_str().unwrap()]);
    for _ in 0..2 {
        if run(&gen) != first_gen || std::fs::read(&file).unwrap() != first_file {
            fails.push("generate random differs between runs".into());
        }
        if run(&["solve", file.to_str().unwrap()]) != first_solve
            || run(&["solve", "--integer", file.to_str().unwrap()]) != first_int
        {
            fails.push("solve output differs between runs".into());
        }
    }
    if first_solve.0 != Some(0) {
        fails.push(format!("solve exited {:?}", first_solve.0));
    }
    report(10, &fails, &format!("{} generator outputs round-trip; CLI generate/solve byte-identical over 3 runs", generated.len()));
}
